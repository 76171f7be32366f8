//! Exhaustive search for universal words and cycles with diamonds.

mod engine;
mod spec;
mod theorems;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::pword::{verify, PWord, Symbol};

use engine::{Ending, Plan};
pub use engine::{PruneCounts, SearchStats};
pub use spec::{DiamondPolicy, SearchSpec, Slot, Ties, DEFAULT_NODE_BUDGET, MAX_SEARCH_N};
pub use theorems::{
    confirm_nonexistence, probe_conjecture1, CaseReport, NonexistenceReport, TheoremId,
    TheoremOptions,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "word", rename_all = "kebab-case")]
pub enum SearchResult {
    Witness(PWord),
    ExhaustedNoWitness,
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub result: SearchResult,
    pub stats: SearchStats,
}

impl SearchOutcome {
    pub fn witness(&self) -> Option<&PWord> {
        match &self.result {
            SearchResult::Witness(w) => Some(w),
            _ => None,
        }
    }
}

/// Searches for one word matching `spec`.
pub fn search(spec: &SearchSpec) -> Result<SearchOutcome> {
    search_parallel(spec, 1)
}

/// As [`search`], splitting the walk over `jobs` threads. The witness
/// returned is the same for every `jobs`.
pub fn search_parallel(spec: &SearchSpec, jobs: usize) -> Result<SearchOutcome> {
    spec.validate()?;
    let (mut found, stats, ending) = drive(spec, jobs, false);
    let result = match ending {
        Ending::Found => SearchResult::Witness(found.swap_remove(0)),
        Ending::Exhausted => SearchResult::ExhaustedNoWitness,
        Ending::Budget => SearchResult::BudgetExceeded,
    };
    Ok(SearchOutcome { result, stats })
}

/// Every word matching `spec`. Cyclic words are listed once per rotation
/// class (the rotation whose first window covers `12…n`, or the template's
/// own rotation). Fails with [`crate::Error::NotFoundWithinBudget`] when the
/// budget runs out.
pub fn search_all(spec: &SearchSpec) -> Result<(Vec<PWord>, SearchStats)> {
    spec.validate()?;
    let (mut found, stats, ending) = drive(spec, 1, true);
    if ending == Ending::Budget {
        return Err(crate::Error::NotFoundWithinBudget {
            attempts: stats.nodes,
        });
    }
    found.sort_by_key(|w| w.to_string());
    found.dedup();
    Ok((found, stats))
}

fn drive(spec: &SearchSpec, jobs: usize, collect_all: bool) -> (Vec<PWord>, SearchStats, Ending) {
    if spec.cyclic && spec.length < spec.n {
        return brute_force(spec, collect_all);
    }
    let rotations: Vec<(usize, Option<Vec<Slot>>)> = match (&spec.diamonds, spec.cyclic) {
        (DiamondPolicy::Template(slots), true) => {
            let mut seen = Vec::new();
            let mut out = Vec::new();
            for r in 0..slots.len() {
                let mut rotated = slots.clone();
                rotated.rotate_left(r);
                if !seen.contains(&rotated) {
                    seen.push(rotated.clone());
                    out.push((r, Some(rotated)));
                }
            }
            out
        }
        _ => vec![(0, None)],
    };
    let mut stats = SearchStats::default();
    let mut found = Vec::new();
    for (r, slots) in rotations {
        let plan = Plan::new(spec, slots);
        let left = spec.budget.saturating_sub(stats.nodes);
        let run = engine::run(&plan, left, jobs, collect_all);
        stats.add(&run.stats);
        found.extend(run.witnesses.into_iter().map(|w| rotate_right(&w, r)));
        match run.ending {
            Ending::Budget => return (found, stats, Ending::Budget),
            Ending::Found if !collect_all => return (found, stats, Ending::Found),
            _ => {}
        }
    }
    let ending = if !collect_all && !found.is_empty() {
        Ending::Found
    } else {
        Ending::Exhausted
    };
    (found, stats, ending)
}

fn rotate_right(w: &PWord, r: usize) -> PWord {
    if r == 0 {
        return w.clone();
    }
    let mut symbols = w.symbols().to_vec();
    symbols.rotate_right(r);
    PWord::new(symbols, w.n(), w.is_cyclic()).expect("rotation of a valid word")
}

/// Cycles shorter than `n`: every window meets some position twice, so the
/// walk does not apply. Enumerates symbols directly.
fn brute_force(spec: &SearchSpec, collect_all: bool) -> (Vec<PWord>, SearchStats, Ending) {
    let len = spec.length;
    let kind_sets: Vec<Vec<Slot>> = match &spec.diamonds {
        DiamondPolicy::None => vec![vec![Slot::Letter; len]],
        DiamondPolicy::Template(s) => vec![s.clone()],
        DiamondPolicy::Free => (0..1usize << len)
            .map(|mask| {
                (0..len)
                    .map(|i| if mask >> i & 1 == 1 { Slot::Diamond } else { Slot::Letter })
                    .collect()
            })
            .collect(),
    };
    let mut stats = SearchStats::default();
    let mut found = Vec::new();
    for kinds in kind_sets {
        let letters: Vec<usize> = (0..len).filter(|&i| kinds[i].is_letter()).collect();
        let mut values = vec![1u32; letters.len()];
        loop {
            if stats.nodes >= spec.budget {
                return (found, stats, Ending::Budget);
            }
            stats.nodes += 1;
            stats.leaves += 1;
            let mut symbols: Vec<Symbol> = kinds.iter().map(|k| k.symbol(0)).collect();
            for (i, &p) in letters.iter().enumerate() {
                symbols[p] = Symbol::Letter(values[i]);
            }
            if admissible(spec, &symbols) {
                if let Ok(word) = PWord::new(symbols, spec.n, true) {
                    if verify(&word).is_exact_cover() {
                        found.push(word);
                        if !collect_all {
                            return (found, stats, Ending::Found);
                        }
                    }
                }
            }
            // Next value vector over 1..=len.
            let mut i = 0;
            while i < values.len() && values[i] as usize == len {
                values[i] = 1;
                i += 1;
            }
            if i == values.len() {
                break;
            }
            values[i] += 1;
        }
    }
    let ending = if !collect_all && !found.is_empty() {
        Ending::Found
    } else {
        Ending::Exhausted
    };
    (found, stats, ending)
}

fn admissible(spec: &SearchSpec, symbols: &[Symbol]) -> bool {
    let len = symbols.len();
    let mut distinct: Vec<u32> = symbols.iter().filter_map(|s| s.letter()).collect();
    distinct.sort_unstable();
    distinct.dedup();
    // Values must be a reduced alphabet so each word is tried once.
    if distinct.iter().enumerate().any(|(i, &v)| v as usize != i + 1) {
        return false;
    }
    if spec.max_letters.is_some_and(|m| distinct.len() > m) {
        return false;
    }
    for i in 0..len {
        for j in i + 1..len {
            if symbols[i].letter().is_some() && symbols[i] == symbols[j] {
                let gap = (j - i).min(len - (j - i));
                if !spec.ties.allows(gap) {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::factorial;

    fn spec(n: usize, len: usize, cyclic: bool) -> SearchSpec {
        SearchSpec::new(n, len, cyclic)
    }

    fn witnesses(s: &SearchSpec) -> Vec<PWord> {
        search_all(s).unwrap().0
    }

    #[test]
    fn finds_plain_cycles() {
        for n in 2..=4 {
            let out = search(&spec(n, factorial(n), true)).unwrap();
            let w = out.witness().expect("u-cycle exists");
            assert!(verify(w).is_exact_cover(), "{w}");
        }
    }

    #[test]
    fn three_cycles_up_to_rotation() {
        // 145243 and its complement, up to rotation.
        let all = witnesses(&spec(3, 6, true));
        assert!(!all.is_empty());
        for w in &all {
            assert!(verify(w).is_exact_cover(), "{w}");
        }
    }

    #[test]
    fn pruning_is_sound() {
        let cases = [
            spec(3, 8, false),
            spec(3, 6, true),
            spec(3, 7, false).with_diamonds(DiamondPolicy::Free),
            spec(3, 4, false).with_diamonds(DiamondPolicy::Template(vec![
                Slot::Diamond,
                Slot::Letter,
                Slot::Diamond,
                Slot::Letter,
            ])),
            spec(3, 6, true).with_ties(Ties::MinGap(2)),
            spec(3, 7, false).with_prefix(crate::pattern::Pattern::from_digits("21").unwrap()),
        ];
        let mut total = 0;
        for s in cases {
            let with = witnesses(&s);
            let without = witnesses(&s.clone().without_pruning());
            assert_eq!(with, without, "spec:\n{s}");
            total += with.len();
        }
        assert!(total > 0);
    }

    #[test]
    fn parallel_matches_sequential() {
        let s = spec(4, 27, false).with_budget(5_000_000);
        let one = search_parallel(&s, 1).unwrap();
        let four = search_parallel(&s, 4).unwrap();
        assert_eq!(one.result, four.result);
        assert!(one.witness().is_some());
    }

    #[test]
    fn budget_is_reported() {
        let out = search(&spec(5, 124, false).with_budget(100)).unwrap();
        assert_eq!(out.result, SearchResult::BudgetExceeded);
        assert!(out.stats.nodes <= 100);
    }

    #[test]
    fn short_cycles_use_brute_force() {
        // Both windows of the length-2 cycle read x against x, which covers everything.
        let s = spec(4, 2, true).with_diamonds(DiamondPolicy::Template(vec![Slot::Diamond, Slot::Letter]));
        assert!(witnesses(&s).is_empty());
        let s = spec(3, 2, true).with_diamonds(DiamondPolicy::Free);
        assert!(witnesses(&s).is_empty());
    }

    #[test]
    fn cyclic_template_rotations() {
        let slots = vec![Slot::Diamond, Slot::Letter, Slot::Letter];
        let s = spec(3, 3, true).with_diamonds(DiamondPolicy::Template(slots.clone()));
        for w in witnesses(&s) {
            assert!(verify(&w).is_exact_cover(), "{w}");
            assert!(w.symbols()[0].is_diamond());
        }
    }
}
