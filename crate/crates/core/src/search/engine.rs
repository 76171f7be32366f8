//! Depth-first walk over window sequences.
//!
//! A word is built one symbol at a time. A new letter is described only by
//! its order relative to the previous `n − 1` symbols (a gap between their
//! distinct values, or a tie with one of them), so every sequence of window
//! patterns is visited exactly once and nothing is fixed beyond what the
//! windows can observe. Cyclic searches keep walking `n − 1` steps past the
//! end, re-reading the first symbols, and check that the wrapped relations
//! still admit a realization.

use std::collections::HashMap;
use std::rc::Rc;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::spec::{DiamondPolicy, SearchSpec, Slot, Ties, MAX_SEARCH_N};
use crate::pattern::{factorial, perm_from_index, perm_index, reduce, Pattern};
use crate::pword::{for_each_covered, verify, PWord, RankSet, Symbol};
use crate::shortener::RealizationConstraints;

const DIAMOND: u16 = 0x100;
const RESTRICTED: u16 = 0x8000;
const WIDTH: usize = MAX_SEARCH_N + 1;

/// Window contents: letters as reduced values, wildcards as tagged masks,
/// unused tail entries zero.
type Code = [u16; WIDTH];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Kind {
    Letter,
    Diamond,
    Restricted(RankSet),
}

impl Kind {
    fn from_slot(slot: Slot) -> Self {
        match slot {
            Slot::Letter => Kind::Letter,
            Slot::Diamond => Kind::Diamond,
            Slot::Restricted(d) => Kind::Restricted(d),
        }
    }

    fn wild_code(self) -> u16 {
        match self {
            Kind::Letter => 0,
            Kind::Diamond => DIAMOND,
            Kind::Restricted(d) => RESTRICTED | d.bits() as u16,
        }
    }

    fn is_letter(self) -> bool {
        self == Kind::Letter
    }

    fn symbol(self, letter: u32) -> Symbol {
        match self {
            Kind::Letter => Symbol::Letter(letter),
            Kind::Diamond => Symbol::Diamond,
            Kind::Restricted(d) => Symbol::Restricted(d),
        }
    }
}

fn is_letter(c: u16) -> bool {
    c != 0 && c < DIAMOND
}

fn code_symbol(c: u16) -> Symbol {
    if c == DIAMOND {
        Symbol::Diamond
    } else if c & RESTRICTED != 0 {
        Symbol::Restricted(RankSet::from_bits(u32::from(c & !RESTRICTED)))
    } else {
        Symbol::Letter(u32::from(c))
    }
}

/// Number of times each pruning rule cut a branch.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PruneCounts {
    /// A completed window covers an already covered permutation.
    pub duplicate: u64,
    /// The remaining windows cannot cover exactly the uncovered permutations.
    pub capacity: u64,
    /// The uncovered permutations admit no Eulerian trail from the current cluster.
    pub balance: u64,
    /// Diamond positions are not `n`-periodic.
    pub periodicity: u64,
    /// Wrapped relations admit no cyclic realization.
    pub infeasible: u64,
    /// A cyclic word whose first window does not cover `12…n`.
    pub rotation: u64,
    /// The first window contradicts the required prefix.
    pub prefix: u64,
    /// The witness needs more letters than allowed.
    pub alphabet: u64,
}

impl PruneCounts {
    fn add(&mut self, o: &PruneCounts) {
        self.duplicate += o.duplicate;
        self.capacity += o.capacity;
        self.balance += o.balance;
        self.periodicity += o.periodicity;
        self.infeasible += o.infeasible;
        self.rotation += o.rotation;
        self.prefix += o.prefix;
        self.alphabet += o.alphabet;
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    /// Complete words reached.
    pub leaves: u64,
    pub pruned: PruneCounts,
}

impl SearchStats {
    pub(crate) fn add(&mut self, o: &SearchStats) {
        self.nodes += o.nodes;
        self.leaves += o.leaves;
        self.pruned.add(&o.pruned);
    }
}

#[derive(Debug, Clone, Copy)]
enum Prune {
    Duplicate,
    Capacity,
    Balance,
    Periodicity,
    Infeasible,
    Rotation,
    Prefix,
}

impl PruneCounts {
    fn bump(&mut self, p: Prune) {
        let slot = match p {
            Prune::Duplicate => &mut self.duplicate,
            Prune::Capacity => &mut self.capacity,
            Prune::Balance => &mut self.balance,
            Prune::Periodicity => &mut self.periodicity,
            Prune::Infeasible => &mut self.infeasible,
            Prune::Rotation => &mut self.rotation,
            Prune::Prefix => &mut self.prefix,
        };
        *slot += 1;
    }
}

#[derive(Debug, Clone, Copy)]
enum Step {
    /// New letter with this value; letters at or above it move up.
    Gap(u16),
    /// New letter equal to this value.
    Tie(u16),
    Wild(Kind),
}

/// Everything fixed before the walk starts.
pub(crate) struct Plan {
    n: usize,
    len: usize,
    cyclic: bool,
    ties: Ties,
    prune: bool,
    slots: Option<Vec<Kind>>,
    free: bool,
    prefix: Option<Pattern>,
    max_letters: Option<usize>,
    steps: usize,
    windows: usize,
    fact: usize,
    pre: Vec<u16>,
    suf: Vec<u16>,
    clusters: usize,
    /// Suffix sums of per-window coverage bounds, when kinds are fixed.
    bounds: Option<(Vec<u64>, Vec<u64>)>,
    /// `plain_after[t]`: every window completed after step `t` holds only
    /// letters and cannot tie.
    plain_after: Option<Vec<bool>>,
}

impl Plan {
    /// `slots` overrides the spec's template (used for rotations).
    pub(crate) fn new(spec: &SearchSpec, slots: Option<Vec<Slot>>) -> Self {
        let n = spec.n;
        let len = spec.length;
        let fact = factorial(n);
        let cluster_of = |letters: &[u32]| perm_index(reduce(letters).unwrap().letters()) as u16;
        let (pre, suf) = (0..fact)
            .map(|i| {
                let p = perm_from_index(n, i);
                (cluster_of(&p.letters()[..n - 1]), cluster_of(&p.letters()[1..]))
            })
            .unzip();
        let slots = slots
            .or_else(|| match &spec.diamonds {
                DiamondPolicy::Template(s) => Some(s.clone()),
                _ => None,
            })
            .map(|s| s.into_iter().map(Kind::from_slot).collect::<Vec<_>>());
        let free = spec.diamonds == DiamondPolicy::Free;
        let kinds: Option<Vec<Kind>> = match (&slots, free) {
            (Some(s), _) => Some(s.clone()),
            (None, false) => Some(vec![Kind::Letter; len]),
            (None, true) => None,
        };
        let windows = if spec.cyclic { len } else { len + 1 - n };
        let steps = if spec.cyclic { len + n - 1 } else { len };
        let mut plan = Plan {
            n,
            len,
            cyclic: spec.cyclic,
            ties: spec.ties,
            prune: spec.prune,
            slots,
            free,
            prefix: spec.prefix.clone(),
            max_letters: spec.max_letters,
            steps,
            windows,
            fact,
            pre,
            suf,
            clusters: factorial(n - 1),
            bounds: None,
            plain_after: None,
        };
        if let Some(kinds) = kinds {
            let mut cache = HashMap::new();
            let mut lo = vec![0u64; windows + 1];
            let mut hi = vec![0u64; windows + 1];
            for s in (0..windows).rev() {
                let shape: Vec<Kind> = (0..n).map(|i| kinds[(s + i) % len]).collect();
                let (a, b) = shape_bounds(&shape, plan.ties, &mut cache);
                lo[s] = lo[s + 1] + a;
                hi[s] = hi[s + 1] + b;
            }
            plan.bounds = Some((lo, hi));
            let plain_window = |s: usize| {
                plan.ties == Ties::None && (0..n).all(|i| kinds[(s + i) % len].is_letter())
            };
            let mut plain_after = vec![true; steps];
            for t in (0..steps).rev() {
                // Windows completed after step t start at t + 2 − n or later.
                let first = (t + 2).saturating_sub(n);
                plain_after[t] = (first..windows).all(plain_window);
            }
            plan.plain_after = Some(plain_after);
        }
        plan
    }
}

/// Least and greatest coverage of a window with the given kinds, over every
/// letter pattern the tie rule allows.
fn shape_bounds(shape: &[Kind], ties: Ties, cache: &mut HashMap<Vec<Kind>, (u64, u64)>) -> (u64, u64) {
    if let Some(&b) = cache.get(shape) {
        return b;
    }
    let letters: Vec<usize> = (0..shape.len()).filter(|&i| shape[i].is_letter()).collect();
    let mut best = (u64::MAX, 0u64);
    let mut values = vec![0u32; letters.len()];
    fn fill(
        k: usize,
        distinct: u32,
        letters: &[usize],
        values: &mut Vec<u32>,
        shape: &[Kind],
        ties: Ties,
        best: &mut (u64, u64),
    ) {
        if k == letters.len() {
            let mut window: Vec<Symbol> = shape.iter().map(|s| s.symbol(0)).collect();
            for (i, &pos) in letters.iter().enumerate() {
                window[pos] = Symbol::Letter(values[i]);
            }
            let mut count = 0u64;
            for_each_covered(&window, |_| count += 1);
            best.0 = best.0.min(count);
            best.1 = best.1.max(count);
            return;
        }
        for v in 1..=distinct + 1 {
            let saved: Vec<u32> = values[..k].to_vec();
            for x in values[..k].iter_mut() {
                if *x >= v {
                    *x += 1;
                }
            }
            values[k] = v;
            fill(k + 1, distinct + 1, letters, values, shape, ties, best);
            values[..k].copy_from_slice(&saved);
        }
        for v in 1..=distinct {
            let ok = (0..k).all(|j| values[j] != v || ties.allows(letters[k] - letters[j]));
            if ok {
                values[k] = v;
                fill(k + 1, distinct, letters, values, shape, ties, best);
            }
        }
    }
    fill(0, 0, &letters, &mut values, shape, ties, &mut best);
    cache.insert(shape.to_vec(), best);
    best
}

struct Frame {
    kind: Kind,
    code: Code,
    marked: Option<Rc<[u32]>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Flow {
    Continue,
    Found,
    Budget,
    Abort,
}

pub(crate) struct Walker<'p> {
    plan: &'p Plan,
    frames: Vec<Frame>,
    covered: Vec<bool>,
    uncovered: usize,
    diff: Vec<i32>,
    cover_cache: HashMap<Code, Rc<[u32]>>,
    shape_cache: HashMap<Vec<Kind>, (u64, u64)>,
    pub(crate) stats: SearchStats,
    cap: u64,
    abort: Option<(&'p AtomicUsize, usize)>,
    collect_all: bool,
    pub(crate) found: Vec<PWord>,
}

impl<'p> Walker<'p> {
    pub(crate) fn new(plan: &'p Plan, cap: u64) -> Self {
        Walker {
            plan,
            frames: Vec::with_capacity(plan.steps),
            covered: vec![false; plan.fact],
            uncovered: plan.fact,
            diff: vec![0; plan.clusters],
            cover_cache: HashMap::new(),
            shape_cache: HashMap::new(),
            stats: SearchStats::default(),
            cap,
            abort: None,
            collect_all: false,
            found: Vec::new(),
        }
    }

    fn base(&self, t: usize) -> (Code, usize) {
        let mut out = [0u16; WIDTH];
        if t == 0 {
            return (out, 0);
        }
        let n = self.plan.n;
        let prev = &self.frames[t - 1].code;
        let plen = t.min(n);
        let slice = if plen == n { &prev[1..n] } else { &prev[..plen] };
        let mut values: Vec<u16> = slice.iter().copied().filter(|&c| is_letter(c)).collect();
        values.sort_unstable();
        values.dedup();
        for (i, &c) in slice.iter().enumerate() {
            out[i] = if is_letter(c) {
                values.binary_search(&c).unwrap() as u16 + 1
            } else {
                c
            };
        }
        (out, slice.len())
    }

    fn kind_choices(&self, t: usize) -> Vec<Kind> {
        let plan = self.plan;
        if t >= plan.len {
            vec![self.frames[t - plan.len].kind]
        } else if let Some(slots) = &plan.slots {
            vec![slots[t]]
        } else if plan.free {
            vec![Kind::Letter, Kind::Diamond]
        } else {
            vec![Kind::Letter]
        }
    }

    fn options(&self, t: usize) -> Vec<Step> {
        let (base, bl) = self.base(t);
        let mut out = Vec::new();
        for kind in self.kind_choices(t) {
            if !kind.is_letter() {
                out.push(Step::Wild(kind));
                continue;
            }
            let distinct = base[..bl].iter().filter(|&&c| is_letter(c)).max().copied().unwrap_or(0);
            for v in 1..=distinct + 1 {
                out.push(Step::Gap(v));
            }
            for v in 1..=distinct {
                let ok = (0..bl).all(|j| base[j] != v || self.plan.ties.allows(bl - j));
                if ok {
                    out.push(Step::Tie(v));
                }
            }
        }
        out
    }

    /// Kind at extended position `pos`, if already determined after step `t`.
    fn kind_at(&self, pos: usize, t: usize) -> Option<Kind> {
        let plan = self.plan;
        let p = if pos >= plan.len { pos - plan.len } else { pos };
        if p <= t && p < self.frames.len() {
            Some(self.frames[p].kind)
        } else if let Some(slots) = &plan.slots {
            Some(slots[p])
        } else if !plan.free {
            Some(Kind::Letter)
        } else if plan.prune && plan.n >= 3 && t + 1 >= plan.n {
            Some(self.frames[p % plan.n].kind)
        } else {
            None
        }
    }

    fn cover(&mut self, code: &Code) -> Rc<[u32]> {
        if let Some(list) = self.cover_cache.get(code) {
            return list.clone();
        }
        let window: Vec<Symbol> = code[..self.plan.n].iter().map(|&c| code_symbol(c)).collect();
        let mut list = Vec::new();
        for_each_covered(&window, |perm| list.push(perm_index(perm) as u32));
        let list: Rc<[u32]> = list.into();
        self.cover_cache.insert(*code, list.clone());
        list
    }

    fn set_covered(&mut self, list: &[u32], on: bool) {
        let sign = if on { 1 } else { -1 };
        for &p in list {
            let p = p as usize;
            self.covered[p] = on;
            self.diff[self.plan.pre[p] as usize] -= sign;
            self.diff[self.plan.suf[p] as usize] += sign;
        }
        if on {
            self.uncovered -= list.len();
        } else {
            self.uncovered += list.len();
        }
    }

    fn apply(&mut self, t: usize, step: Step) -> Result<(), Prune> {
        let plan = self.plan;
        let n = plan.n;
        let (mut code, bl) = self.base(t);
        let kind = match step {
            Step::Gap(v) => {
                for c in code[..bl].iter_mut() {
                    if is_letter(*c) && *c >= v {
                        *c += 1;
                    }
                }
                code[bl] = v;
                Kind::Letter
            }
            Step::Tie(v) => {
                code[bl] = v;
                Kind::Letter
            }
            Step::Wild(k) => {
                code[bl] = k.wild_code();
                k
            }
        };
        if plan.prune && plan.free && n >= 3 && t >= n && self.frames[t - n].kind != kind {
            return Err(Prune::Periodicity);
        }
        self.frames.push(Frame {
            kind,
            code,
            marked: None,
        });
        if bl + 1 == n {
            let s = t + 1 - n;
            if s == 0 {
                if plan.cyclic && !covers_identity(&code[..n]) {
                    self.frames.pop();
                    return Err(Prune::Rotation);
                }
                if let Some(prefix) = &plan.prefix {
                    let letters: Vec<u32> = code[..n]
                        .iter()
                        .filter(|&&c| is_letter(c))
                        .take(prefix.len())
                        .map(|&c| u32::from(c))
                        .collect();
                    if reduce(&letters).ok().as_ref() != Some(prefix) {
                        self.frames.pop();
                        return Err(Prune::Prefix);
                    }
                }
            }
            if plan.prune {
                let list = self.cover(&code);
                if list.iter().any(|&p| self.covered[p as usize]) {
                    self.frames.pop();
                    return Err(Prune::Duplicate);
                }
                self.set_covered(&list, true);
                self.frames.last_mut().unwrap().marked = Some(list);
            }
        }
        if plan.prune {
            let verdict = if t >= plan.len && !self.feasible(t) {
                Err(Prune::Infeasible)
            } else if !self.capacity_ok(t) {
                Err(Prune::Capacity)
            } else if !self.balance_ok(t) {
                Err(Prune::Balance)
            } else {
                Ok(())
            };
            if verdict.is_err() {
                self.undo();
            }
            return verdict;
        }
        Ok(())
    }

    fn undo(&mut self) {
        let frame = self.frames.pop().expect("frame to undo");
        if let Some(list) = frame.marked {
            self.set_covered(&list, false);
        }
    }

    fn constraints(&self, upto: usize) -> RealizationConstraints {
        let plan = self.plan;
        let mut rc = RealizationConstraints::new(plan.len, plan.cyclic);
        for t in plan.n - 1..=upto {
            let code = &self.frames[t].code;
            let letters: Vec<Option<u32>> = code[..plan.n]
                .iter()
                .map(|&c| is_letter(c).then_some(u32::from(c)))
                .collect();
            rc.add_window(t + 1 - plan.n, &letters);
        }
        rc
    }

    fn feasible(&self, t: usize) -> bool {
        self.constraints(t).solve().is_ok()
    }

    fn capacity_ok(&mut self, t: usize) -> bool {
        let plan = self.plan;
        let next = (t + 2).saturating_sub(plan.n).min(plan.windows);
        let (lo, hi) = if let Some((lo, hi)) = &plan.bounds {
            (lo[next], hi[next])
        } else {
            let mut lo = 0;
            let mut hi = 0;
            for s in next..plan.windows {
                let shape: Option<Vec<Kind>> = (0..plan.n).map(|i| self.kind_at(s + i, t)).collect();
                let Some(shape) = shape else {
                    return true;
                };
                let (a, b) = shape_bounds(&shape, plan.ties, &mut self.shape_cache);
                lo += a;
                hi += b;
            }
            (lo, hi)
        };
        (lo..=hi).contains(&(self.uncovered as u64))
    }

    fn plain_after(&self, t: usize) -> bool {
        let plan = self.plan;
        if let Some(p) = &plan.plain_after {
            return p[t];
        }
        if plan.ties != Ties::None {
            return false;
        }
        let first = (t + 2).saturating_sub(plan.n);
        (first..plan.steps).all(|pos| self.kind_at(pos, t) == Some(Kind::Letter))
    }

    fn cluster(&self, code: &[u16]) -> usize {
        let letters: Vec<u32> = code.iter().map(|&c| u32::from(c)).collect();
        perm_index(reduce(&letters).unwrap().letters())
    }

    fn balance_ok(&self, t: usize) -> bool {
        let plan = self.plan;
        let n = plan.n;
        if t + 1 >= plan.steps || t + 2 < n || !self.plain_after(t) {
            return true;
        }
        let code = &self.frames[t].code;
        let wl = (t + 1).min(n);
        let start = self.cluster(&code[wl + 1 - n..wl]);
        let end = if plan.cyclic {
            Some(self.cluster(&self.frames[n - 2].code[..n - 1]))
        } else {
            None
        };
        let mut sinks = 0;
        for (c, &d) in self.diff.iter().enumerate() {
            let expected_source = c == start;
            match d {
                0 => {}
                1 if expected_source => {}
                -1 => {
                    if end.is_some_and(|e| e != c) {
                        return false;
                    }
                    sinks += 1;
                }
                _ => return false,
            }
        }
        let source = self.diff[start] == 1;
        match end {
            Some(e) if e == start => !source && sinks == 0,
            Some(_) => source && sinks == 1,
            None => (source && sinks == 1) || (!source && sinks == 0),
        }
    }

    fn leaf(&mut self) -> Option<PWord> {
        let plan = self.plan;
        self.stats.leaves += 1;
        let Ok(values) = self.constraints(plan.steps - 1).solve() else {
            self.stats.pruned.infeasible += 1;
            return None;
        };
        let symbols: Vec<Symbol> = (0..plan.len).map(|p| self.frames[p].kind.symbol(values[p])).collect();
        if let Some(max) = plan.max_letters {
            let mut letters: Vec<u32> = symbols.iter().filter_map(|s| s.letter()).collect();
            letters.sort_unstable();
            letters.dedup();
            if letters.len() > max {
                self.stats.pruned.alphabet += 1;
                return None;
            }
        }
        let word = PWord::new(symbols, plan.n, plan.cyclic).ok()?;
        if !plan.prune && !verify(&word).is_exact_cover() {
            return None;
        }
        debug_assert!(verify(&word).is_exact_cover(), "pruned walk produced a non-cover:\n{word}");
        Some(word)
    }

    fn aborted(&self) -> bool {
        self.abort
            .is_some_and(|(best, me)| best.load(Ordering::Relaxed) < me)
    }

    pub(crate) fn dfs(&mut self, t: usize) -> Flow {
        if t == self.plan.steps {
            if let Some(w) = self.leaf() {
                self.found.push(w);
                if !self.collect_all {
                    return Flow::Found;
                }
            }
            return Flow::Continue;
        }
        for step in self.options(t) {
            if self.stats.nodes >= self.cap {
                return Flow::Budget;
            }
            self.stats.nodes += 1;
            if self.stats.nodes & 0xfff == 0 && self.aborted() {
                return Flow::Abort;
            }
            match self.apply(t, step) {
                Err(p) => self.stats.pruned.bump(p),
                Ok(()) => {
                    let flow = self.dfs(t + 1);
                    self.undo();
                    if flow != Flow::Continue {
                        return flow;
                    }
                }
            }
        }
        Flow::Continue
    }

    /// Surviving choice paths of length `depth`, in walk order.
    fn frontier(&mut self, t: usize, depth: usize, path: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if t == depth {
            out.push(path.clone());
            return;
        }
        for (i, step) in self.options(t).into_iter().enumerate() {
            self.stats.nodes += 1;
            match self.apply(t, step) {
                Err(p) => self.stats.pruned.bump(p),
                Ok(()) => {
                    path.push(i as u8);
                    self.frontier(t + 1, depth, path, out);
                    path.pop();
                    self.undo();
                }
            }
        }
    }

    fn replay(&mut self, path: &[u8]) {
        for (t, &i) in path.iter().enumerate() {
            let step = self.options(t)[i as usize];
            self.apply(t, step).expect("frontier path replays");
        }
    }
}

fn covers_identity(window: &[u16]) -> bool {
    let mut last = 0;
    for (i, &c) in window.iter().enumerate() {
        if is_letter(c) {
            if c < last {
                return false;
            }
            last = c;
        } else if c & RESTRICTED != 0 {
            let d = RankSet::from_bits(u32::from(c & !RESTRICTED));
            if !d.contains(i as u32 + 1) {
                return false;
            }
        }
    }
    true
}

/// How a run over one plan ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Ending {
    Found,
    Exhausted,
    Budget,
}

pub(crate) struct Run {
    pub(crate) witnesses: Vec<PWord>,
    pub(crate) stats: SearchStats,
    pub(crate) ending: Ending,
}

type TaskResult = (Flow, SearchStats, Vec<PWord>);

/// Walks one plan. With `jobs > 1` the tree is split into subtrees at a
/// fixed depth and the subtrees are searched in parallel; the witness from
/// the earliest subtree in walk order wins, so the result does not depend on
/// scheduling.
pub(crate) fn run(plan: &Plan, budget: u64, jobs: usize, collect_all: bool) -> Run {
    if jobs <= 1 || collect_all || plan.steps < 4 {
        let mut w = Walker::new(plan, budget);
        w.collect_all = collect_all;
        let ending = match w.dfs(0) {
            Flow::Found => Ending::Found,
            Flow::Budget => Ending::Budget,
            _ => Ending::Exhausted,
        };
        return Run {
            witnesses: w.found,
            stats: w.stats,
            ending,
        };
    }

    let mut depth = 1;
    let (tasks, base_stats) = loop {
        let mut w = Walker::new(plan, u64::MAX);
        let mut tasks = Vec::new();
        w.frontier(0, depth, &mut Vec::new(), &mut tasks);
        if tasks.len() >= 64 || depth + 2 >= plan.steps {
            break (tasks, w.stats);
        }
        depth += 1;
    };
    let best = AtomicUsize::new(usize::MAX);
    let next = AtomicUsize::new(0);
    let cap = budget.saturating_sub(base_stats.nodes);
    let results: Vec<Mutex<Option<TaskResult>>> = tasks.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= tasks.len() {
                    break;
                }
                if best.load(Ordering::Relaxed) < i {
                    continue;
                }
                let mut w = Walker::new(plan, cap);
                w.abort = Some((&best, i));
                w.replay(&tasks[i]);
                let flow = w.dfs(depth);
                if flow == Flow::Found {
                    best.fetch_min(i, Ordering::Relaxed);
                }
                *results[i].lock().unwrap() = Some((flow, w.stats, w.found));
            });
        }
    });
    let mut stats = base_stats;
    for slot in results {
        let Some((flow, s, found)) = slot.into_inner().unwrap() else {
            break;
        };
        stats.add(&s);
        if stats.nodes > budget || flow == Flow::Budget {
            return Run {
                witnesses: Vec::new(),
                stats,
                ending: Ending::Budget,
            };
        }
        if flow == Flow::Found {
            return Run {
                witnesses: found,
                stats,
                ending: Ending::Found,
            };
        }
    }
    Run {
        witnesses: Vec::new(),
        stats,
        ending: Ending::Exhausted,
    }
}
