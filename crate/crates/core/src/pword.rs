//! Partial words over permutation patterns and the exact-cover verifier.
//!
//! A window of `n` symbols covers every `n`-permutation obtainable by keeping
//! the relative order of its concrete letters (equal letters are
//! incomparable), letting each `◊` take any value, and letting each `◊_D`
//! take only values whose rank lies in `D`.

pub(crate) mod text;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pattern::{factorial, perm_from_index, perm_index, Pattern, PermSet, MAX_PATTERN_LEN};

/// A set of permissible ranks `D ⊆ {1..n}` for a restricted diamond.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "Vec<u32>", try_from = "Vec<u32>")]
pub struct RankSet(u32);

impl RankSet {
    /// # Panics
    /// If a rank is 0 or above 31.
    pub fn from_ranks(ranks: impl IntoIterator<Item = u32>) -> Self {
        let mut bits = 0;
        for r in ranks {
            assert!((1..32).contains(&r), "rank {r} out of range");
            bits |= 1 << r;
        }
        RankSet(bits)
    }

    pub fn contains(self, rank: u32) -> bool {
        rank < 32 && self.0 & (1 << rank) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn max(self) -> Option<u32> {
        (self.0 != 0).then(|| 31 - self.0.leading_zeros())
    }

    pub fn intersect(self, other: RankSet) -> RankSet {
        RankSet(self.0 & other.0)
    }

    pub fn ranks(self) -> impl Iterator<Item = u32> {
        (1..32).filter(move |&r| self.contains(r))
    }

    pub(crate) fn from_bits(bits: u32) -> Self {
        RankSet(bits & !1)
    }

    pub(crate) fn bits(self) -> u32 {
        self.0
    }
}

impl From<RankSet> for Vec<u32> {
    fn from(set: RankSet) -> Self {
        set.ranks().collect()
    }
}

impl TryFrom<Vec<u32>> for RankSet {
    type Error = Error;

    fn try_from(ranks: Vec<u32>) -> Result<Self> {
        if let Some(bad) = ranks.iter().find(|r| !(1..32).contains(*r)) {
            return Err(Error::MalformedWord(format!("rank {bad} out of range")));
        }
        Ok(RankSet::from_ranks(ranks))
    }
}

impl fmt::Display for RankSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, r) in self.ranks().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Symbol {
    Letter(u32),
    Diamond,
    Restricted(RankSet),
}

impl Symbol {
    pub fn letter(self) -> Option<u32> {
        match self {
            Symbol::Letter(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_diamond(self) -> bool {
        matches!(self, Symbol::Diamond)
    }

    pub fn is_wildcard(self) -> bool {
        !matches!(self, Symbol::Letter(_))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Letter(v) => write!(f, "{v}"),
            Symbol::Diamond => f.write_str("*"),
            Symbol::Restricted(d) => write!(f, "*{d}"),
        }
    }
}

/// A (possibly partial) word read through windows of size `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PWord {
    symbols: Vec<Symbol>,
    n: usize,
    cyclic: bool,
}

impl PWord {
    pub fn new(symbols: Vec<Symbol>, n: usize, cyclic: bool) -> Result<Self> {
        if n == 0 || n > MAX_PATTERN_LEN {
            return Err(Error::WindowSizeOutOfRange {
                n,
                min: 1,
                max: MAX_PATTERN_LEN,
            });
        }
        if symbols.is_empty() {
            return Err(Error::MalformedWord("word is empty".into()));
        }
        if !cyclic && symbols.len() < n {
            return Err(Error::MalformedWord(format!(
                "a non-cyclic word needs at least n = {n} symbols, got {}",
                symbols.len()
            )));
        }
        for (i, s) in symbols.iter().enumerate() {
            match *s {
                Symbol::Letter(0) => {
                    return Err(Error::MalformedWord(format!(
                        "letter at position {i} must be positive"
                    )))
                }
                Symbol::Restricted(d) if d.is_empty() || d.max().unwrap() as usize > n => {
                    return Err(Error::MalformedWord(format!(
                        "restricted diamond {d} at position {i} is not a non-empty subset of 1..={n}"
                    )))
                }
                _ => {}
            }
        }
        let word = PWord { symbols, n, cyclic };
        for (start, window) in word.windows() {
            check_restricted(&window).map_err(|e| {
                Error::MalformedWord(format!("window at position {start}: {e}"))
            })?;
        }
        Ok(word)
    }

    /// A word of plain letters.
    pub fn from_letters(letters: &[u32], n: usize, cyclic: bool) -> Result<Self> {
        PWord::new(
            letters.iter().map(|&v| Symbol::Letter(v)).collect(),
            n,
            cyclic,
        )
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn window_count(&self) -> usize {
        if self.cyclic {
            self.symbols.len()
        } else {
            self.symbols.len() + 1 - self.n
        }
    }

    /// The window starting at `start`, read cyclically for cyclic words.
    pub fn window(&self, start: usize) -> Vec<Symbol> {
        let len = self.symbols.len();
        (0..self.n).map(|j| self.symbols[(start + j) % len]).collect()
    }

    pub fn windows(&self) -> impl Iterator<Item = (usize, Vec<Symbol>)> + '_ {
        (0..self.window_count()).map(move |i| (i, self.window(i)))
    }

    pub fn reverse(&self) -> PWord {
        let mut symbols = self.symbols.clone();
        symbols.reverse();
        PWord { symbols, ..*self }
    }

    /// Complements concrete letters (`v ↦ max + 1 − v`) and restricted rank
    /// sets (`r ↦ n + 1 − r`).
    pub fn complement(&self) -> PWord {
        let top = self.symbols.iter().filter_map(|s| s.letter()).max().unwrap_or(0) + 1;
        let n = self.n as u32;
        let symbols = self
            .symbols
            .iter()
            .map(|s| match *s {
                Symbol::Letter(v) => Symbol::Letter(top - v),
                Symbol::Diamond => Symbol::Diamond,
                Symbol::Restricted(d) => Symbol::Restricted(RankSet::from_ranks(
                    d.ranks().map(|r| n + 1 - r),
                )),
            })
            .collect();
        PWord { symbols, ..*self }
    }

    /// Concrete letters with diamonds as `None`.
    pub fn letters(&self) -> Vec<Option<u32>> {
        self.symbols.iter().map(|s| s.letter()).collect()
    }

    /// Non-fatal observations: windows whose restricted diamonds have an
    /// empty common intersection but overlap pairwise.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (start, window) in self.windows() {
            let sets: Vec<RankSet> = window
                .iter()
                .filter_map(|s| match s {
                    Symbol::Restricted(d) => Some(*d),
                    _ => None,
                })
                .collect();
            for i in 0..sets.len() {
                for j in i + 1..sets.len() {
                    if !sets[i].intersect(sets[j]).is_empty() {
                        out.push(format!(
                            "window {start}: restricted diamonds {} and {} overlap",
                            sets[i], sets[j]
                        ));
                    }
                }
            }
        }
        out
    }
}

/// More than one restricted diamond in a window is only meaningful when the
/// sets have an empty common intersection.
fn check_restricted(window: &[Symbol]) -> std::result::Result<(), String> {
    let mut common: Option<RankSet> = None;
    let mut count = 0;
    for s in window {
        if let Symbol::Restricted(d) = s {
            count += 1;
            common = Some(common.map_or(*d, |c| c.intersect(*d)));
        }
    }
    match common {
        Some(c) if count > 1 && !c.is_empty() => Err(format!(
            "{count} restricted diamonds share the ranks {c}"
        )),
        _ => Ok(()),
    }
}

/// Calls `visit` with every `n`-permutation covered by `window`, where
/// `n = window.len()`. The window must already be validated.
pub(crate) fn for_each_covered(window: &[Symbol], mut visit: impl FnMut(&[u32])) {
    let n = window.len();
    let mut below = vec![0u32; n];
    for i in 0..n {
        if let Symbol::Letter(a) = window[i] {
            for j in 0..n {
                if matches!(window[j], Symbol::Letter(b) if b < a) {
                    below[i] |= 1 << j;
                }
            }
        }
    }
    let mut perm = vec![0u32; n];
    assign_values(window, &below, 1, 0, &mut perm, &mut visit);
}

fn assign_values(
    window: &[Symbol],
    below: &[u32],
    value: u32,
    assigned: u32,
    perm: &mut [u32],
    visit: &mut impl FnMut(&[u32]),
) {
    let n = window.len();
    if value as usize > n {
        visit(perm);
        return;
    }
    for i in 0..n {
        if assigned & (1 << i) != 0 {
            continue;
        }
        let ok = match window[i] {
            Symbol::Letter(_) => below[i] & !assigned == 0,
            Symbol::Diamond => true,
            Symbol::Restricted(d) => d.contains(value),
        };
        if ok {
            perm[i] = value;
            assign_values(window, below, value + 1, assigned | (1 << i), perm, visit);
        }
    }
}

/// The set of `n`-permutations covered by a single window.
pub fn window_coverage(window: &[Symbol], n: usize) -> Result<PermSet> {
    if window.len() != n {
        return Err(Error::MalformedWindow(format!(
            "window has {} symbols, expected {n}",
            window.len()
        )));
    }
    if n == 0 || n > MAX_PATTERN_LEN {
        return Err(Error::WindowSizeOutOfRange {
            n,
            min: 1,
            max: MAX_PATTERN_LEN,
        });
    }
    for s in window {
        match *s {
            Symbol::Letter(0) => return Err(Error::MalformedWindow("letter 0".into())),
            Symbol::Restricted(d) if d.is_empty() || d.max().unwrap() as usize > n => {
                return Err(Error::MalformedWindow(format!("{d} is not within 1..={n}")))
            }
            _ => {}
        }
    }
    check_restricted(window).map_err(Error::MalformedWindow)?;
    let mut out = PermSet::new(n);
    for_each_covered(window, |perm| {
        out.insert(Pattern::from_reduced_unchecked(perm.to_vec()));
    });
    Ok(out)
}

/// Number of permutations covered by a window with `k` unrestricted diamonds
/// and distinct concrete letters: `n!/(n−k)!`.
pub fn coverage_count(n: usize, k: usize) -> usize {
    assert!(k <= n, "k = {k} exceeds n = {n}");
    (n - k + 1..=n).product()
}

/// One permutation and the start positions of the windows covering it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermCover {
    pub perm: Pattern,
    pub windows: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "items", rename_all = "kebab-case")]
pub enum Verdict {
    ExactCover,
    /// Permutations covered more than once, with every covering window.
    Duplicates(Vec<PermCover>),
    /// Permutations covered by no window.
    Misses(Vec<Pattern>),
}

/// The outcome of [`verify`]. When a word both misses and double-covers
/// permutations the verdict reports the duplicates; [`CoverageReport::missing`]
/// still lists the misses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub n: usize,
    pub cyclic: bool,
    pub length: usize,
    pub window_count: usize,
    pub covers: Vec<PermCover>,
    pub verdict: Verdict,
    pub min_equal_gap: Option<usize>,
    pub warnings: Vec<String>,
}

impl CoverageReport {
    pub fn is_exact_cover(&self) -> bool {
        self.verdict == Verdict::ExactCover
    }

    pub fn missing(&self) -> Vec<Pattern> {
        self.covers
            .iter()
            .filter(|c| c.windows.is_empty())
            .map(|c| c.perm.clone())
            .collect()
    }

    pub fn duplicated(&self) -> Vec<PermCover> {
        self.covers
            .iter()
            .filter(|c| c.windows.len() > 1)
            .cloned()
            .collect()
    }
}

/// Checks whether every `n`-permutation is covered by exactly one window.
pub fn verify(u: &PWord) -> CoverageReport {
    let n = u.n();
    let mut hits: Vec<Vec<usize>> = vec![Vec::new(); factorial(n)];
    for (start, window) in u.windows() {
        for_each_covered(&window, |perm| hits[perm_index(perm)].push(start));
    }
    let covers: Vec<PermCover> = hits
        .into_iter()
        .enumerate()
        .map(|(i, windows)| PermCover {
            perm: perm_from_index(n, i),
            windows,
        })
        .collect();
    let duplicates: Vec<PermCover> = covers
        .iter()
        .filter(|c| c.windows.len() > 1)
        .cloned()
        .collect();
    let verdict = if !duplicates.is_empty() {
        Verdict::Duplicates(duplicates)
    } else {
        let missing: Vec<Pattern> = covers
            .iter()
            .filter(|c| c.windows.is_empty())
            .map(|c| c.perm.clone())
            .collect();
        if missing.is_empty() {
            Verdict::ExactCover
        } else {
            Verdict::Misses(missing)
        }
    };
    CoverageReport {
        n,
        cyclic: u.is_cyclic(),
        length: u.len(),
        window_count: u.window_count(),
        covers,
        verdict,
        min_equal_gap: min_equal_gap(u),
        warnings: u.warnings(),
    }
}

/// Smallest distance between equal concrete letters (cyclic distance for
/// cyclic words); diamonds are skipped.
pub fn min_equal_gap(u: &PWord) -> Option<usize> {
    let letters = u.letters();
    let len = letters.len();
    let mut best: Option<usize> = None;
    for i in 0..len {
        let Some(a) = letters[i] else { continue };
        for j in i + 1..len {
            if letters[j] == Some(a) {
                let mut gap = j - i;
                if u.is_cyclic() {
                    gap = gap.min(len - gap);
                }
                best = Some(best.map_or(gap, |b| b.min(gap)));
            }
        }
    }
    best
}

/// The common number of unrestricted diamonds in every window.
pub fn diamondicity(u: &PWord) -> Result<usize> {
    if !u.symbols().iter().any(|s| s.is_diamond()) {
        return Err(Error::NoDiamonds);
    }
    let counts: Vec<usize> = u
        .windows()
        .map(|(_, w)| w.iter().filter(|s| s.is_diamond()).count())
        .collect();
    if counts.windows(2).all(|w| w[0] == w[1]) {
        Ok(counts[0])
    } else {
        Err(Error::NotPeriodic { counts })
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A necessary condition on u-p-words and u-p-cycles that a word fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    /// A diamond at `position` has no diamond `n` positions away at `partner`.
    NotPeriodic { position: usize, partner: usize },
    /// A cycle whose windows hold `n − k` diamonds must have length `k!`.
    CycleLength { length: usize, required: usize },
    /// Diamond positions of a cycle must repeat with period `gcd(n, N)`.
    NotGcdPeriodic { period: usize },
    /// `n / gcd(n, N)` must divide the diamondicity.
    Divisibility { quotient: usize, diamondicity: usize },
    /// A word with diamondicity `d` must have length `(n − d)! + n − 1`.
    WordLength { length: usize, required: usize },
    /// A non-trivial word with `f` diamonds needs `n ≤ 3f + 1`.
    DiamondBound { n: usize, diamonds: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotPeriodic { position, partner } => write!(
                f,
                "diamond at position {position} but none at position {partner}"
            ),
            Violation::CycleLength { length, required } => {
                write!(f, "cycle length {length} but diamondicity requires {required}")
            }
            Violation::NotGcdPeriodic { period } => {
                write!(f, "diamond positions are not {period}-periodic")
            }
            Violation::Divisibility {
                quotient,
                diamondicity,
            } => write!(f, "{quotient} does not divide diamondicity {diamondicity}"),
            Violation::WordLength { length, required } => {
                write!(f, "word length {length} but diamondicity requires {required}")
            }
            Violation::DiamondBound { n, diamonds } => {
                write!(f, "n = {n} exceeds 3·{diamonds} + 1")
            }
        }
    }
}

/// Necessary conditions for `u` to be a u-p-word or u-p-cycle, assuming its
/// windows hold distinct concrete letters. Returns the violated ones; an
/// empty list means no condition rules `u` out. Words without unrestricted
/// diamonds trivially pass.
pub fn structural_feasibility(u: &PWord) -> Vec<Violation> {
    let n = u.n();
    let len = u.len();
    let sym = u.symbols();
    let mut out = Vec::new();
    let diamonds: Vec<usize> = (0..len).filter(|&i| sym[i].is_diamond()).collect();
    if diamonds.is_empty() {
        return out;
    }
    let trivial = diamonds.len() == len;

    // Diamonds repeat every n positions (n ≥ 3).
    if n >= 3 {
        for &k in &diamonds {
            let partners: Vec<usize> = if u.is_cyclic() {
                vec![(k + n) % len, (k + len - n % len) % len]
            } else {
                [k.checked_sub(n), Some(k + n).filter(|&p| p < len)]
                    .into_iter()
                    .flatten()
                    .collect()
            };
            if let Some(&partner) = partners.iter().find(|&&p| !sym[p].is_diamond()) {
                out.push(Violation::NotPeriodic {
                    position: k,
                    partner,
                });
            }
        }
    }
    let Ok(d) = diamondicity(u) else {
        return out;
    };
    if u.is_cyclic() {
        out.extend(cycle_conditions(n, len, d));
        let c = gcd(n, len);
        if (0..len).any(|i| sym[i].is_diamond() != sym[(i + c) % len].is_diamond()) {
            out.push(Violation::NotGcdPeriodic { period: c });
        }
    } else {
        out.extend(word_conditions(n, len, d, if trivial { None } else { Some(diamonds.len()) }));
    }
    out
}

/// The counting conditions on a u-p-cycle of length `len` whose windows
/// each hold `d` diamonds: `len = (n − d)!` and `n / gcd(n, len)` divides `d`.
pub fn cycle_conditions(n: usize, len: usize, d: usize) -> Vec<Violation> {
    let mut out = Vec::new();
    let required = factorial(n - d);
    if len != required {
        out.push(Violation::CycleLength {
            length: len,
            required,
        });
    }
    let c = gcd(n, len);
    if d % (n / c) != 0 {
        out.push(Violation::Divisibility {
            quotient: n / c,
            diamondicity: d,
        });
    }
    out
}

/// The counting conditions on a u-p-word of length `len` with diamondicity
/// `d`; `diamonds` is the total number of diamonds for a non-trivial word.
pub fn word_conditions(n: usize, len: usize, d: usize, diamonds: Option<usize>) -> Vec<Violation> {
    let mut out = Vec::new();
    let required = factorial(n - d) + n - 1;
    if len != required {
        out.push(Violation::WordLength {
            length: len,
            required,
        });
    }
    if let Some(f) = diamonds {
        if n > 3 * f + 1 {
            out.push(Violation::DiamondBound { n, diamonds: f });
        }
    }
    out
}

pub(crate) fn gcd_of(a: usize, b: usize) -> usize {
    gcd(a, b)
}
