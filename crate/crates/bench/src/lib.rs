//! Shared inputs for the benchmarks.

use permcycles_core::{generate_uword, PWord};

/// The u-word for `n` with `k` cycles collapsed, as a non-cyclic p-word.
pub fn uword(n: usize, k: usize) -> PWord {
    let letters = generate_uword(n, k).expect("valid n and k");
    PWord::from_letters(&letters, n, false).expect("letters form a word")
}
