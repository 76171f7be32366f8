//! Non-existence results turned into finite lists of searches.
//!
//! Every case is either settled by a counting argument, recorded as text,
//! or handed to the search engine. A theorem is confirmed when no case
//! produces a witness.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::spec::{DiamondPolicy, SearchSpec, Slot, DEFAULT_NODE_BUDGET};
use super::{search_parallel, SearchOutcome, SearchResult, SearchStats};
use crate::error::{Error, Result};
use crate::pattern::{all_permutations, factorial, Pattern};
use crate::pword::{gcd_of, PWord, RankSet};
use crate::shortener::{probe_ucycles, CircuitProbe};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremId {
    /// No word with a single diamond, placed first (n ≥ 3).
    DiamondAtFirst,
    /// No word with a single diamond, placed second (n = 3, 4).
    DiamondAtSecond,
    /// No word with a single diamond anywhere (n ≥ 3).
    SingleDiamond,
    /// No u-p-cycle when n is prime or n = 4.
    UpcyclePrimeOr4,
    /// No non-trivial word or cycle with diamonds of period 2.
    Period2,
    /// No non-trivial cycle with diamonds of period 3.
    Period3,
    /// A leading `*{a,b}` needs `a = 1` with an increasing prefix or
    /// `b = n` with a decreasing one.
    RestrictedNecessity,
}

impl TheoremId {
    pub const ALL: [TheoremId; 7] = [
        TheoremId::DiamondAtFirst,
        TheoremId::DiamondAtSecond,
        TheoremId::SingleDiamond,
        TheoremId::UpcyclePrimeOr4,
        TheoremId::Period2,
        TheoremId::Period3,
        TheoremId::RestrictedNecessity,
    ];

    pub fn id(self) -> &'static str {
        match self {
            TheoremId::DiamondAtFirst => "diamond-at-first",
            TheoremId::DiamondAtSecond => "diamond-at-second",
            TheoremId::SingleDiamond => "single-diamond",
            TheoremId::UpcyclePrimeOr4 => "upcycle-prime-or-4",
            TheoremId::Period2 => "period-2",
            TheoremId::Period3 => "period-3",
            TheoremId::RestrictedNecessity => "restricted-necessity",
        }
    }

    /// Window sizes the confirmation accepts.
    pub fn supported_n(self) -> std::ops::RangeInclusive<usize> {
        match self {
            TheoremId::DiamondAtFirst | TheoremId::DiamondAtSecond | TheoremId::SingleDiamond => 3..=4,
            TheoremId::UpcyclePrimeOr4 => 2..=5,
            TheoremId::Period2 => 3..=4,
            TheoremId::Period3 => 6..=6,
            TheoremId::RestrictedNecessity => 3..=4,
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.id() == s)
            .ok_or_else(|| Error::UnknownTheorem(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TheoremOptions {
    /// Node budget per searched case.
    pub budget: u64,
    pub jobs: usize,
    /// Allow cases far beyond desk scale (period 3 at n = 6).
    pub heavy: bool,
}

impl Default for TheoremOptions {
    fn default() -> Self {
        TheoremOptions {
            budget: DEFAULT_NODE_BUDGET,
            jobs: 1,
            heavy: false,
        }
    }
}

/// One case of a confirmation: either a counting argument or a search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseReport {
    pub label: String,
    /// The searched spec in config form.
    pub spec: Option<String>,
    pub structural: Option<String>,
    pub outcome: Option<SearchOutcome>,
}

impl CaseReport {
    fn structural(label: impl Into<String>, reason: impl Into<String>) -> Self {
        CaseReport {
            label: label.into(),
            spec: None,
            structural: Some(reason.into()),
            outcome: None,
        }
    }

    pub fn witness(&self) -> Option<&PWord> {
        self.outcome.as_ref().and_then(|o| o.witness())
    }

    pub fn is_refuted(&self) -> bool {
        self.structural.is_some()
            || self
                .outcome
                .as_ref()
                .is_some_and(|o| o.result == SearchResult::ExhaustedNoWitness)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonexistenceReport {
    pub theorem: TheoremId,
    pub n: usize,
    pub cases: Vec<CaseReport>,
}

impl NonexistenceReport {
    /// Every case was refuted: the theorem holds at this `n`.
    pub fn confirmed(&self) -> bool {
        self.cases.iter().all(CaseReport::is_refuted)
    }

    /// A witness found by some case, which would contradict the theorem.
    pub fn witness(&self) -> Option<&PWord> {
        self.cases.iter().find_map(CaseReport::witness)
    }

    /// Some case ran out of budget.
    pub fn incomplete(&self) -> bool {
        self.cases.iter().any(|c| {
            c.outcome
                .as_ref()
                .is_some_and(|o| o.result == SearchResult::BudgetExceeded)
        })
    }

    pub fn stats(&self) -> SearchStats {
        let mut total = SearchStats::default();
        for o in self.cases.iter().filter_map(|c| c.outcome.as_ref()) {
            total.add(&o.stats);
        }
        total
    }
}

struct Case {
    label: String,
    spec: SearchSpec,
    /// Only witnesses holding both a diamond and a letter count.
    nontrivial: bool,
}

/// Runs every case of `theorem` at window size `n`.
pub fn confirm_nonexistence(
    theorem: TheoremId,
    n: usize,
    opts: &TheoremOptions,
) -> Result<NonexistenceReport> {
    let range = theorem.supported_n();
    if !range.contains(&n) {
        return Err(Error::WindowSizeOutOfRange {
            n,
            min: *range.start(),
            max: *range.end(),
        });
    }
    if theorem == TheoremId::Period3 && !opts.heavy {
        return Err(Error::InvalidSpec(
            "period-3 needs n = 6 cycles of length 24; rerun with heavy enabled".into(),
        ));
    }
    let (mut reports, cases) = match theorem {
        TheoremId::DiamondAtFirst => single_diamond_cases(n, Some(0)),
        TheoremId::DiamondAtSecond => single_diamond_cases(n, Some(1)),
        TheoremId::SingleDiamond => single_diamond_cases(n, None),
        TheoremId::UpcyclePrimeOr4 => upcycle_cases(n),
        TheoremId::Period2 => period_cases(n, 2),
        TheoremId::Period3 => period_cases(n, 3),
        TheoremId::RestrictedNecessity => restricted_cases(n),
    };
    for case in cases {
        let spec = case.spec.with_budget(opts.budget);
        let outcome = if case.nontrivial {
            nontrivial_search(&spec)?
        } else {
            search_parallel(&spec, opts.jobs)?
        };
        if let Some(w) = outcome.witness() {
            debug_assert!(crate::pword::verify(w).is_exact_cover());
        }
        reports.push(CaseReport {
            label: case.label,
            spec: Some(spec.to_string()),
            structural: None,
            outcome: Some(outcome),
        });
    }
    Ok(NonexistenceReport {
        theorem,
        n,
        cases: reports,
    })
}

/// Searches keeping only witnesses with at least one diamond and one letter.
fn nontrivial_search(spec: &SearchSpec) -> Result<SearchOutcome> {
    match super::search_all(spec) {
        Ok((all, stats)) => {
            let hit = all.into_iter().find(|w| {
                w.symbols().iter().any(|s| s.is_diamond()) && w.symbols().iter().any(|s| s.letter().is_some())
            });
            let result = hit.map_or(SearchResult::ExhaustedNoWitness, SearchResult::Witness);
            Ok(SearchOutcome { result, stats })
        }
        Err(Error::NotFoundWithinBudget { attempts }) => Ok(SearchOutcome {
            result: SearchResult::BudgetExceeded,
            stats: SearchStats {
                nodes: attempts,
                ..SearchStats::default()
            },
        }),
        Err(e) => Err(e),
    }
}

fn template(len: usize, diamonds: impl Fn(usize) -> Option<Slot>) -> DiamondPolicy {
    DiamondPolicy::Template((0..len).map(|i| diamonds(i).unwrap_or(Slot::Letter)).collect())
}

fn describe(slots: &DiamondPolicy) -> String {
    match slots {
        DiamondPolicy::Template(s) => s.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

/// Windows of a length-`len` word that contain position `p`.
fn windows_through(n: usize, len: usize, p: usize) -> usize {
    let first = p.saturating_sub(n - 1);
    let last = p.min(len - n);
    last + 1 - first
}

/// Words with exactly one diamond. A window through the diamond covers `n`
/// permutations, any other window one, so an exact cover needs
/// `(N − n + 1) + (n − 1)·w = n!` where `w` counts windows through the
/// diamond. Placements failing the count are reported together; the rest
/// are searched. Reversal maps position `p` to `N − 1 − p`, so only the
/// first half is searched unless the position is fixed.
fn single_diamond_cases(n: usize, at: Option<usize>) -> (Vec<CaseReport>, Vec<Case>) {
    let fact = factorial(n);
    let mut reports = Vec::new();
    let mut cases = Vec::new();
    let mut failing = 0;
    for len in n..=fact + n - 1 {
        let positions: Vec<usize> = match at {
            Some(p) => vec![p],
            None => (0..=(len - 1) / 2).collect(),
        };
        for p in positions {
            let total = (len - n + 1) + (n - 1) * windows_through(n, len, p);
            if total != fact {
                failing += 1;
                continue;
            }
            let diamonds = template(len, |i| (i == p).then_some(Slot::Diamond));
            let label = format!("N={len}, diamond at {}: {}", p + 1, describe(&diamonds));
            cases.push(Case {
                label,
                spec: SearchSpec::new(n, len, false).with_diamonds(diamonds),
                nontrivial: false,
            });
        }
    }
    let scope = match at {
        Some(p) => format!("diamond at position {}", p + 1),
        None => "diamond at any position".into(),
    };
    reports.push(CaseReport::structural(
        format!("lengths {n}..={} with {scope}, except those searched below", fact + n - 1),
        format!("{failing} placements cover a total other than {fact} permutations"),
    ));
    if at.is_none() && n == 4 {
        reports.push(CaseReport::structural(
            "diamondicity 1",
            "a u-p-word with diamondicity 1 has length (4−1)!+3 = 9, but a single diamond \
             repeats every 4 positions, so the word has at most 7 letters",
        ));
    }
    (reports, cases)
}

/// Cycles with diamonds. For `n ≥ 3` diamond positions repeat with period
/// `c = gcd(n, N)`, every window then holds `d = (n / c)·f` diamonds for `f`
/// diamonds per period, and the length must be `(n − d)!`. Each periodic
/// placement meeting those conditions is searched.
fn upcycle_cases(n: usize) -> (Vec<CaseReport>, Vec<Case>) {
    let mut reports = Vec::new();
    let mut cases = Vec::new();
    if n == 2 {
        // Each window covers at least one permutation, so N ≤ 2.
        reports.push(CaseReport::structural(
            "N ≥ 3",
            "every window covers at least one of the 2 permutations",
        ));
        for len in 1..=2 {
            cases.push(Case {
                label: format!("N={len}, any non-trivial placement"),
                spec: SearchSpec::new(n, len, true).with_diamonds(DiamondPolicy::Free),
                nontrivial: true,
            });
        }
        return (reports, cases);
    }
    for k in 1..n {
        let d = n - k;
        let len = factorial(k);
        let c = gcd_of(n, len);
        let mut searched = false;
        for mask in 1u32..(1 << c) - 1 {
            let f = mask.count_ones() as usize;
            if (n / c) * f != d {
                continue;
            }
            // One representative per rotation of the period.
            let canonical = (1..c).all(|r| {
                let rot = ((mask >> r) | (mask << (c - r))) & ((1 << c) - 1);
                rot >= mask
            });
            if !canonical {
                continue;
            }
            searched = true;
            let diamonds = template(len, |i| (mask >> (i % c) & 1 == 1).then_some(Slot::Diamond));
            cases.push(Case {
                label: format!("N={len}, d={d}: {}", describe(&diamonds)),
                spec: SearchSpec::new(n, len, true).with_diamonds(diamonds),
                nontrivial: false,
            });
        }
        if !searched {
            reports.push(CaseReport::structural(
                format!("N={len} (k={k}, d={d})"),
                format!(
                    "diamonds repeat with period gcd({n}, {len}) = {c}, and no non-trivial \
                     placement puts exactly {d} in every window"
                ),
            ));
        }
    }
    (reports, cases)
}

/// Words and cycles whose diamonds occupy every `period`-th position.
fn period_cases(n: usize, period: usize) -> (Vec<CaseReport>, Vec<Case>) {
    let mut reports = Vec::new();
    let mut cases = Vec::new();
    let fact = factorial(n);
    if period == 2 {
        if n % 2 == 1 {
            reports.push(CaseReport::structural(
                "words and cycles",
                format!(
                    "diamonds repeat every 2 and every {n} positions, hence at every position, \
                     which leaves no letter"
                ),
            ));
            return (reports, cases);
        }
        // Every window holds n/2 diamonds and covers n!/(n/2)! permutations.
        let d = n / 2;
        let per = fact / factorial(n - d);
        for offset in 0..2 {
            let mut failing = Vec::new();
            for len in n + 1..=fact + n - 1 {
                if (len - n + 1) * per != fact {
                    failing.push(len);
                    continue;
                }
                let diamonds = template(len, |i| (i % 2 == offset).then_some(Slot::Diamond));
                cases.push(Case {
                    label: format!("word N={len}: {}", describe(&diamonds)),
                    spec: SearchSpec::new(n, len, false).with_diamonds(diamonds),
                    nontrivial: false,
                });
            }
            reports.push(CaseReport::structural(
                format!("words starting with a {}, other lengths", if offset == 0 { "diamond" } else { "letter" }),
                format!("windows cover {per} permutations each, so only (N−{})·{per} = {fact} is possible", n - 1),
            ));
        }
        let len = factorial(n - d);
        reports.push(CaseReport::structural(
            "cycles of other lengths",
            format!("every window holds {d} diamonds, so the length is ({n}−{d})! = {len}"),
        ));
        if len % 2 == 0 {
            let diamonds = template(len, |i| (i % 2 == 0).then_some(Slot::Diamond));
            cases.push(Case {
                label: format!("cycle N={len}: {}", describe(&diamonds)),
                spec: SearchSpec::new(n, len, true).with_diamonds(diamonds),
                nontrivial: false,
            });
        } else {
            reports.push(CaseReport::structural(
                format!("cycle N={len}"),
                "an odd cycle cannot alternate diamonds and letters",
            ));
        }
        return (reports, cases);
    }
    // Period 3 on cycles: 3 must divide n, windows hold n/3 diamonds.
    let d = n / period;
    let len = factorial(n - d);
    reports.push(CaseReport::structural(
        "cycles of other lengths",
        format!("every window holds {d} diamonds, so the length is ({n}−{d})! = {len}"),
    ));
    let diamonds = template(len, |i| (i % period == 0).then_some(Slot::Diamond));
    cases.push(Case {
        label: format!("cycle N={len}: {}", describe(&diamonds)),
        spec: SearchSpec::new(n, len, true).with_diamonds(diamonds),
        nontrivial: false,
    });
    (reports, cases)
}

/// Words `*{a,b} u₂…u_N` whose prefix `u₂…u_n` breaks the condition. The
/// first window covers two permutations and every other window one, so
/// `N = n! + n − 2`.
fn restricted_cases(n: usize) -> (Vec<CaseReport>, Vec<Case>) {
    let len = factorial(n) + n - 2;
    let mut reports = vec![CaseReport::structural(
        format!("lengths other than {len}"),
        format!("windows cover 2 + (N − {n}) permutations, which must equal {}", factorial(n)),
    )];
    let mut cases = Vec::new();
    let inc = Pattern::increasing(n - 1);
    let dec = Pattern::decreasing(n - 1);
    for a in 1..=n as u32 {
        for b in a + 1..=n as u32 {
            for prefix in all_permutations(n - 1) {
                let allowed = (a == 1 && prefix == inc) || (b == n as u32 && prefix == dec);
                if allowed {
                    continue;
                }
                let slot = Slot::Restricted(RankSet::from_ranks([a, b]));
                let diamonds = template(len, |i| (i == 0).then_some(slot));
                cases.push(Case {
                    label: format!("*{{{a},{b}}} then {prefix}"),
                    spec: SearchSpec::new(n, len, false)
                        .with_diamonds(diamonds)
                        .with_prefix(prefix),
                    nontrivial: false,
                });
            }
        }
    }
    if cases.is_empty() {
        reports.push(CaseReport::structural("prefixes", "every prefix meets the condition"));
    }
    (reports, cases)
}

/// Looks for a u-cycle of length `n! − k(n − 1)` among the Eulerian circuits
/// of the collapsed graph. A witness supports the conjecture; exhausting
/// the circuits only says this construction fails, not that no u-cycle
/// exists. `budget` counts circuits.
pub fn probe_conjecture1(n: usize, k: usize, budget: u64) -> Result<SearchOutcome> {
    if !(2..=5).contains(&n) {
        return Err(Error::WindowSizeOutOfRange { n, min: 2, max: 5 });
    }
    let (result, circuits) = match probe_ucycles(n, k, budget)? {
        CircuitProbe::Found { word, circuits } => (
            SearchResult::Witness(PWord::from_letters(&word, n, true)?),
            circuits,
        ),
        CircuitProbe::Exhausted { circuits } => (SearchResult::ExhaustedNoWitness, circuits),
        CircuitProbe::BudgetExceeded { circuits } => (SearchResult::BudgetExceeded, circuits),
    };
    Ok(SearchOutcome {
        result,
        stats: SearchStats {
            nodes: circuits,
            leaves: circuits,
            ..SearchStats::default()
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pword::verify;

    #[test]
    fn ids_round_trip() {
        for t in TheoremId::ALL {
            assert_eq!(t.id().parse::<TheoremId>().unwrap(), t);
        }
        assert!(matches!("period-4".parse::<TheoremId>(), Err(Error::UnknownTheorem(_))));
    }

    #[test]
    fn single_diamond_lengths() {
        let (_, cases) = single_diamond_cases(3, None);
        let found: Vec<(usize, String)> = cases.iter().map(|c| (c.spec.length, c.label.clone())).collect();
        assert_eq!(found.len(), 2, "{found:?}");
        assert!(found.iter().any(|(l, _)| *l == 4));
        assert!(found.iter().any(|(l, _)| *l == 6));
        let (_, first) = single_diamond_cases(4, Some(0));
        assert_eq!(first.iter().map(|c| c.spec.length).collect::<Vec<_>>(), vec![24]);
        let (_, second) = single_diamond_cases(4, Some(1));
        assert_eq!(second.iter().map(|c| c.spec.length).collect::<Vec<_>>(), vec![21]);
    }

    #[test]
    fn upcycle_placements() {
        let (structural, cases) = upcycle_cases(4);
        assert_eq!(cases.len(), 1);
        assert_eq!(cases[0].spec.length, 2);
        assert_eq!(structural.len(), 2);
        let (_, cases) = upcycle_cases(5);
        assert!(cases.is_empty());
    }

    #[test]
    fn restricted_cases_at_three() {
        let (_, cases) = restricted_cases(3);
        let labels: Vec<&str> = cases.iter().map(|c| c.label.as_str()).collect();
        assert_eq!(labels, vec!["*{1,2} then 21", "*{2,3} then 12"]);
    }

    #[test]
    fn small_confirmations() {
        let opts = TheoremOptions::default();
        for (t, n) in [
            (TheoremId::DiamondAtFirst, 3),
            (TheoremId::DiamondAtSecond, 3),
            (TheoremId::SingleDiamond, 3),
            (TheoremId::UpcyclePrimeOr4, 2),
            (TheoremId::UpcyclePrimeOr4, 4),
            (TheoremId::Period2, 3),
            (TheoremId::RestrictedNecessity, 3),
        ] {
            let report = confirm_nonexistence(t, n, &opts).unwrap();
            assert!(report.confirmed(), "{t} n={n}: {report:#?}");
        }
    }

    #[test]
    fn allowed_restricted_words_are_found() {
        // The sufficient direction through the same search path.
        let len = factorial(3) + 1;
        let slot = Slot::Restricted(RankSet::from_ranks([1, 2]));
        let spec = SearchSpec::new(3, len, false)
            .with_diamonds(template(len, |i| (i == 0).then_some(slot)))
            .with_prefix(Pattern::increasing(2));
        let out = search_parallel(&spec, 1).unwrap();
        let w = out.witness().expect("witness");
        assert!(verify(w).is_exact_cover(), "{w}");
    }

    #[test]
    fn period_three_needs_heavy() {
        let err = confirm_nonexistence(TheoremId::Period3, 6, &TheoremOptions::default()).unwrap_err();
        assert!(matches!(err, Error::InvalidSpec(_)));
    }

    #[test]
    fn conjecture_probe() {
        let out = probe_conjecture1(3, 1, 100).unwrap();
        let w = out.witness().unwrap();
        assert_eq!(w.len(), 4);
        assert!(verify(w).is_exact_cover());
    }
}
