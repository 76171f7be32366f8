//! Patterns, reduction and order isomorphism.
//!
//! A [`Pattern`] is a word over `1..=m` that uses every value in that range,
//! which is exactly what [`reduce`] produces. Equal letters encode
//! incomparable elements: the pattern `112` stands for every permutation in
//! which the first two entries are below the third, in either order.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Patterns longer than this are rejected by the factorial-sized operations.
pub const MAX_PATTERN_LEN: usize = 12;

/// A reduced word: its letters are exactly `1..=m` for some `m`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Pattern(Vec<u32>);

impl Pattern {
    /// Wraps `letters`, which must already be reduced.
    pub fn new(letters: Vec<u32>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::EmptyWord);
        }
        if reduce_letters(&letters) != letters {
            return Err(Error::NotReduced(letters));
        }
        Ok(Pattern(letters))
    }

    /// Parses a compact digit string such as `"1324"`. Only for letters below 10.
    pub fn from_digits(digits: &str) -> Result<Self> {
        let letters = digits
            .chars()
            .map(|c| c.to_digit(10).ok_or_else(|| Error::NotReduced(Vec::new())))
            .collect::<Result<Vec<_>>>()?;
        Pattern::new(letters)
    }

    pub(crate) fn from_reduced_unchecked(letters: Vec<u32>) -> Self {
        debug_assert_eq!(reduce_letters(&letters), letters);
        Pattern(letters)
    }

    /// The increasing permutation `12…len`.
    pub fn increasing(len: usize) -> Self {
        Pattern((1..=len as u32).collect())
    }

    /// The decreasing permutation `len…21`.
    pub fn decreasing(len: usize) -> Self {
        Pattern((1..=len as u32).rev().collect())
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<u32> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of distinct letters, which is also the largest letter.
    pub fn distinct(&self) -> usize {
        self.0.iter().copied().max().unwrap_or(0) as usize
    }

    pub fn is_permutation(&self) -> bool {
        self.distinct() == self.len()
    }

    /// The reduced form of the first `len` letters.
    pub fn prefix(&self, len: usize) -> Pattern {
        Pattern(reduce_letters(&self.0[..len]))
    }

    /// The reduced form of the last `len` letters.
    pub fn suffix(&self, len: usize) -> Pattern {
        Pattern(reduce_letters(&self.0[self.0.len() - len..]))
    }

    pub fn complement(&self) -> Pattern {
        let top = self.distinct() as u32 + 1;
        Pattern(self.0.iter().map(|&v| top - v).collect())
    }

    pub fn reverse(&self) -> Pattern {
        Pattern(self.0.iter().rev().copied().collect())
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_word(f, &self.0)
    }
}

impl TryFrom<Vec<u32>> for Pattern {
    type Error = Error;

    fn try_from(letters: Vec<u32>) -> Result<Self> {
        Pattern::new(letters)
    }
}

impl From<Pattern> for Vec<u32> {
    fn from(p: Pattern) -> Self {
        p.0
    }
}

/// Writes letters as a digit string when every letter is a single digit,
/// otherwise comma-separated.
pub(crate) fn write_word(f: &mut fmt::Formatter<'_>, letters: &[u32]) -> fmt::Result {
    if letters.iter().all(|&v| v < 10) {
        for v in letters {
            write!(f, "{v}")?;
        }
    } else {
        for (i, v) in letters.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
    }
    Ok(())
}

fn reduce_letters(word: &[u32]) -> Vec<u32> {
    let mut values: Vec<u32> = word.to_vec();
    values.sort_unstable();
    values.dedup();
    word.iter()
        .map(|v| values.binary_search(v).expect("value present") as u32 + 1)
        .collect()
}

/// Replaces every copy of the i-th smallest letter of `word` by `i`.
pub fn reduce(word: &[u32]) -> Result<Pattern> {
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(Pattern(reduce_letters(word)))
}

/// `true` iff `a` and `b` have the same reduction (ties must match ties).
pub fn order_isomorphic(a: &[u32], b: &[u32]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(reduce_letters(a) == reduce_letters(b))
}

/// A set of permutations of one fixed length.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PermSet {
    n: usize,
    members: BTreeSet<Pattern>,
}

impl PermSet {
    pub fn new(n: usize) -> Self {
        PermSet {
            n,
            members: BTreeSet::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Inserts a permutation; returns `false` if it was already present.
    ///
    /// # Panics
    /// If `perm` is not a permutation of length `n`.
    pub fn insert(&mut self, perm: Pattern) -> bool {
        assert!(
            perm.len() == self.n && perm.is_permutation(),
            "{perm} is not a {}-permutation",
            self.n
        );
        self.members.insert(perm)
    }

    pub fn contains(&self, perm: &Pattern) -> bool {
        self.members.contains(perm)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Pattern> {
        self.members.iter()
    }
}

impl FromIterator<Pattern> for PermSet {
    /// # Panics
    /// If the iterator is empty or the lengths disagree.
    fn from_iter<I: IntoIterator<Item = Pattern>>(iter: I) -> Self {
        let members: BTreeSet<Pattern> = iter.into_iter().collect();
        let n = members.iter().next().map_or(0, Pattern::len);
        let mut set = PermSet::new(n);
        for m in members {
            set.insert(m);
        }
        set
    }
}

impl<'a> IntoIterator for &'a PermSet {
    type Item = &'a Pattern;
    type IntoIter = std::collections::btree_set::Iter<'a, Pattern>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// Rearranges `values` into the next lexicographic permutation; returns
/// `false` (leaving the slice sorted ascending) after the last one.
pub(crate) fn next_permutation<T: Ord>(values: &mut [T]) -> bool {
    if values.len() < 2 {
        return false;
    }
    let mut i = values.len() - 1;
    while i > 0 && values[i - 1] >= values[i] {
        i -= 1;
    }
    if i == 0 {
        values.reverse();
        return false;
    }
    let mut j = values.len() - 1;
    while values[j] <= values[i - 1] {
        j -= 1;
    }
    values.swap(i - 1, j);
    values[i..].reverse();
    true
}

/// All permutations of `1..=n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Pattern> {
    let mut current: Vec<u32> = (1..=n as u32).collect();
    let mut out = Vec::with_capacity(factorial(n));
    loop {
        out.push(Pattern(current.clone()));
        if !next_permutation(&mut current) {
            break;
        }
    }
    out
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Lexicographic index of a permutation of `1..=n` among all `n!` of them.
pub fn perm_index(perm: &[u32]) -> usize {
    let n = perm.len();
    let mut index = 0;
    for i in 0..n {
        let smaller_after = perm[i + 1..].iter().filter(|&&v| v < perm[i]).count();
        index = index * (n - i) + smaller_after;
    }
    index
}

/// Inverse of [`perm_index`].
pub fn perm_from_index(n: usize, mut index: usize) -> Pattern {
    let mut digits = vec![0usize; n];
    for i in (0..n).rev() {
        let base = n - i;
        digits[i] = index % base;
        index /= base;
    }
    let mut pool: Vec<u32> = (1..=n as u32).collect();
    Pattern(digits.into_iter().map(|d| pool.remove(d)).collect())
}

/// Every permutation `π` of length `len(p)` with `p_i < p_j ⇒ π_i < π_j`.
///
/// Positions sharing a letter are unconstrained among themselves, so the
/// positions holding letter `v` receive the next block of values in any order.
pub fn linear_extensions(p: &Pattern) -> PermSet {
    let n = p.len();
    let mut out = PermSet::new(n);
    let blocks: Vec<Vec<usize>> = (1..=p.distinct() as u32)
        .map(|v| {
            p.letters()
                .iter()
                .enumerate()
                .filter(|&(_, &l)| l == v)
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let mut perm = vec![0u32; n];
    fill_blocks(&blocks, 0, 1, &mut perm, &mut out);
    out
}

fn fill_blocks(
    blocks: &[Vec<usize>],
    block: usize,
    first_value: u32,
    perm: &mut [u32],
    out: &mut PermSet,
) {
    let Some(positions) = blocks.get(block) else {
        out.insert(Pattern(perm.to_vec()));
        return;
    };
    let mut values: Vec<u32> = (first_value..first_value + positions.len() as u32).collect();
    loop {
        for (&pos, &v) in positions.iter().zip(&values) {
            perm[pos] = v;
        }
        fill_blocks(
            blocks,
            block + 1,
            first_value + positions.len() as u32,
            perm,
            out,
        );
        if !next_permutation(&mut values) {
            break;
        }
    }
}

/// How a new letter relates to the letters already in a pattern.
///
/// `Rank(r)` inserts a fresh value strictly between the r-th and (r+1)-th
/// smallest distinct letters (`Rank(0)` is below everything, `Rank(m)` above
/// everything). `EqualTo(i)` repeats the letter at index `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Extension {
    Rank(usize),
    EqualTo(usize),
}

impl Extension {
    /// `x⁺` for the letter value `x`: just above `x`.
    pub fn above(letter: u32) -> Self {
        Extension::Rank(letter as usize)
    }

    /// `x⁻` for the letter value `x`: just below `x`.
    pub fn below(letter: u32) -> Self {
        Extension::Rank(letter as usize - 1)
    }
}

/// Appends a letter to `p` as described by `ext` and re-reduces.
pub fn extend(p: &Pattern, ext: Extension) -> Result<Pattern> {
    let m = p.distinct();
    let mut letters = p.letters().to_vec();
    match ext {
        Extension::Rank(rank) => {
            if rank > m {
                return Err(Error::RankOutOfRange { rank, max: m });
            }
            let rank = rank as u32;
            for v in &mut letters {
                if *v > rank {
                    *v += 1;
                }
            }
            letters.push(rank + 1);
        }
        Extension::EqualTo(index) => {
            let &v = letters.get(index).ok_or(Error::PositionOutOfRange {
                index,
                len: p.len(),
            })?;
            letters.push(v);
        }
    }
    Ok(Pattern(letters))
}

/// Smallest positional distance between two equal letters, or `None` when
/// all letters are distinct. With `cyclic`, distances wrap around.
pub fn equal_letter_distance(word: &[u32], cyclic: bool) -> Option<usize> {
    let len = word.len();
    let mut best: Option<usize> = None;
    for i in 0..len {
        for j in i + 1..len {
            if word[i] == word[j] {
                let mut gap = j - i;
                if cyclic {
                    gap = gap.min(len - gap);
                }
                best = Some(best.map_or(gap, |b| b.min(gap)));
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Pattern {
        Pattern::from_digits(s).unwrap()
    }

    fn digits(s: &str) -> Vec<u32> {
        s.chars().map(|c| c.to_digit(10).unwrap()).collect()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce(&digits("2547")).unwrap(), p("1324"));
        assert_eq!(reduce(&digits("5470")).unwrap(), p("3241"));
        assert_eq!(reduce(&digits("436326")).unwrap(), p("324214"));
        assert_eq!(reduce(&[7]).unwrap(), p("1"));
        assert_eq!(reduce(&[]), Err(Error::EmptyWord));
    }

    #[test]
    fn pattern_rejects_unreduced() {
        assert!(Pattern::new(vec![1, 3]).is_err());
        assert!(Pattern::new(vec![]).is_err());
        assert!(Pattern::new(vec![2, 1, 2]).is_ok());
    }

    #[test]
    fn complement_and_reverse_examples() {
        assert_eq!(p("2314").complement(), p("3241"));
        assert_eq!(p("1").complement(), p("1"));
        assert_eq!(p("112").complement(), p("221"));
        assert_eq!(p("2341").reverse(), p("1432"));
        assert_eq!(p("1").reverse(), p("1"));
        assert_eq!(p("121").reverse(), p("121"));
    }

    #[test]
    fn order_isomorphism() {
        assert!(!order_isomorphic(&[1, 4, 5], &[2, 4, 3]).unwrap());
        assert!(order_isomorphic(&[2, 5, 4, 7], &[1, 3, 2, 4]).unwrap());
        assert!(order_isomorphic(&[3, 3], &[9, 9]).unwrap());
        assert!(!order_isomorphic(&[3, 3], &[1, 9]).unwrap());
        assert!(order_isomorphic(&[1, 2], &[1]).is_err());
    }

    #[test]
    fn linear_extension_examples() {
        let set = |s: &[&str]| s.iter().map(|x| p(x)).collect::<PermSet>();
        assert_eq!(linear_extensions(&p("112")), set(&["123", "213"]));
        assert_eq!(linear_extensions(&p("121")), set(&["132", "231"]));
        assert_eq!(linear_extensions(&p("123")), set(&["123"]));
        assert_eq!(linear_extensions(&p("1111")).len(), 24);
    }

    #[test]
    fn extend_examples() {
        assert_eq!(extend(&p("12"), Extension::above(1)).unwrap(), p("132"));
        assert_eq!(extend(&p("12"), Extension::below(1)).unwrap(), p("231"));
        assert_eq!(extend(&p("12"), Extension::EqualTo(0)).unwrap(), p("121"));
        assert_eq!(extend(&p("12"), Extension::Rank(2)).unwrap(), p("123"));
        assert!(matches!(
            extend(&p("12"), Extension::Rank(3)),
            Err(Error::RankOutOfRange { rank: 3, max: 2 })
        ));
        assert!(extend(&p("12"), Extension::EqualTo(2)).is_err());
    }

    #[test]
    fn equal_letter_distance_examples() {
        assert_eq!(equal_letter_distance(&digits("1231"), false), Some(3));
        assert_eq!(equal_letter_distance(&digits("123"), false), None);
        assert_eq!(
            equal_letter_distance(&digits("123847687657859423123"), false),
            Some(3)
        );
        assert_eq!(
            equal_letter_distance(&digits("34321432345234"), true),
            Some(2)
        );
        // 1..1 is three apart linearly but adjacent around the cycle.
        assert_eq!(equal_letter_distance(&digits("1231"), true), Some(1));
    }

    #[test]
    fn perm_index_roundtrip() {
        for n in 1..=5 {
            for (i, perm) in all_permutations(n).iter().enumerate() {
                assert_eq!(perm_index(perm.letters()), i);
                assert_eq!(&perm_from_index(n, i), perm);
            }
        }
    }
}
