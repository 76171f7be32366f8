//! Reference implementations used to cross-check the library.
#![allow(dead_code)]

use permcycles_core::{PWord, RankSet, Symbol};
use rand::Rng;

/// Every permutation of `1..=n` in lexicographic order, by swapping.
pub fn permutations(n: usize) -> Vec<Vec<u32>> {
    fn go(prefix: &mut Vec<u32>, left: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..left.len() {
            let v = left.remove(i);
            prefix.push(v);
            go(prefix, left, out);
            prefix.pop();
            left.insert(i, v);
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut (1..=n as u32).collect(), &mut out);
    out
}

/// Does `window` cover `perm`? Letters must agree pairwise on strict order,
/// equal letters constrain nothing, a restricted diamond takes an allowed rank.
pub fn covers(window: &[Symbol], perm: &[u32]) -> bool {
    for i in 0..window.len() {
        match window[i] {
            Symbol::Letter(a) => {
                for j in 0..window.len() {
                    if let Symbol::Letter(b) = window[j] {
                        if a < b && perm[i] > perm[j] {
                            return false;
                        }
                    }
                }
            }
            Symbol::Restricted(d) => {
                if !d.contains(perm[i]) {
                    return false;
                }
            }
            Symbol::Diamond => {}
        }
    }
    true
}

pub fn windows(u: &PWord) -> Vec<Vec<Symbol>> {
    let s = u.symbols();
    let n = u.n();
    let count = if u.is_cyclic() { s.len() } else { s.len() + 1 - n };
    (0..count)
        .map(|start| (0..n).map(|i| s[(start + i) % s.len()]).collect())
        .collect()
}

/// For every permutation in lexicographic order, the windows covering it.
pub fn scan(u: &PWord) -> Vec<(Vec<u32>, Vec<usize>)> {
    let ws = windows(u);
    permutations(u.n())
        .into_iter()
        .map(|p| {
            let hits = (0..ws.len()).filter(|&s| covers(&ws[s], &p)).collect();
            (p, hits)
        })
        .collect()
}

pub fn is_exact_cover(u: &PWord) -> bool {
    scan(u).iter().all(|(_, hits)| hits.len() == 1)
}

/// Smallest distance between equal letters, cyclic distance for cycles.
pub fn min_gap(u: &PWord) -> Option<usize> {
    let s = u.symbols();
    let len = s.len();
    let mut best = None;
    for i in 0..len {
        for j in i + 1..len {
            if s[i].letter().is_some() && s[i] == s[j] {
                let mut d = j - i;
                if u.is_cyclic() {
                    d = d.min(len - d);
                }
                best = Some(best.map_or(d, |b: usize| b.min(d)));
            }
        }
    }
    best
}

pub fn word(text: &str) -> PWord {
    text.parse().unwrap_or_else(|e| panic!("{text:?}: {e}"))
}

/// A random word; diamonds and restricted diamonds appear with the given
/// probabilities. Returns `None` when the draw is not a valid word.
pub fn random_word(rng: &mut impl Rng, n: usize, len: usize, cyclic: bool, diamonds: f64, letters: u32) -> Option<PWord> {
    let symbols = (0..len)
        .map(|_| {
            let x: f64 = rng.gen();
            if x < diamonds {
                Symbol::Diamond
            } else if x < diamonds * 1.3 {
                let a = rng.gen_range(1..=n as u32);
                let b = rng.gen_range(1..=n as u32);
                Symbol::Restricted(RankSet::from_ranks([a, b]))
            } else {
                Symbol::Letter(rng.gen_range(1..=letters))
            }
        })
        .collect();
    PWord::new(symbols, n, cyclic).ok()
}
