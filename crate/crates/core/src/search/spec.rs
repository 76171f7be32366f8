//! Search specifications and their `key=value` config format.
//!
//! ```text
//! # u-cycle for 4-permutations with ties at distance >= 2
//! n=4
//! length=14
//! cyclic=1
//! ties=min-gap:2
//! budget=50000000
//! ```
//!
//! Keys: `n`, `length` (required), `cyclic` (`0|1`), `ties`
//! (`none | min-gap:<d> | exact-gap:<d>`), `diamonds`
//! (`none | free | template:<tokens>` where a token is `.` for a letter,
//! `*` or `*{a,b,...}`), `prefix` (a reduced pattern the first letters of the
//! first window must follow), `max_letters`, `budget` and `prune` (`0|1`).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, Result};
use crate::pattern::Pattern;
use crate::pword::{PWord, RankSet, Symbol};

/// Largest `n` the search accepts.
pub const MAX_SEARCH_N: usize = 7;

pub const DEFAULT_NODE_BUDGET: u64 = 200_000_000;

/// Which equal letters may share a window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "distance", rename_all = "kebab-case")]
pub enum Ties {
    None,
    /// Equal letters at least this far apart.
    MinGap(usize),
    /// Equal letters exactly this far apart.
    ExactGap(usize),
}

impl Ties {
    pub fn allows(self, distance: usize) -> bool {
        match self {
            Ties::None => false,
            Ties::MinGap(d) => distance >= d,
            Ties::ExactGap(d) => distance == d,
        }
    }
}

impl fmt::Display for Ties {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ties::None => f.write_str("none"),
            Ties::MinGap(d) => write!(f, "min-gap:{d}"),
            Ties::ExactGap(d) => write!(f, "exact-gap:{d}"),
        }
    }
}

/// One position of a diamond template.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "ranks", rename_all = "kebab-case")]
pub enum Slot {
    Letter,
    Diamond,
    Restricted(RankSet),
}

impl Slot {
    pub fn is_letter(self) -> bool {
        self == Slot::Letter
    }

    pub(crate) fn symbol(self, letter: u32) -> Symbol {
        match self {
            Slot::Letter => Symbol::Letter(letter),
            Slot::Diamond => Symbol::Diamond,
            Slot::Restricted(d) => Symbol::Restricted(d),
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Letter => f.write_str("."),
            Slot::Diamond => f.write_str("*"),
            Slot::Restricted(d) => write!(f, "*{d}"),
        }
    }
}

/// Where diamonds may appear.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "slots", rename_all = "kebab-case")]
pub enum DiamondPolicy {
    None,
    /// Every position may be a letter or an unrestricted diamond.
    Free,
    /// Fixed kinds, one slot per position.
    Template(Vec<Slot>),
}

impl fmt::Display for DiamondPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiamondPolicy::None => f.write_str("none"),
            DiamondPolicy::Free => f.write_str("free"),
            DiamondPolicy::Template(slots) => {
                f.write_str("template:")?;
                for (i, s) in slots.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{s}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SearchSpec {
    pub n: usize,
    pub length: usize,
    pub cyclic: bool,
    pub ties: Ties,
    pub diamonds: DiamondPolicy,
    pub prefix: Option<Pattern>,
    /// Witnesses needing more distinct letters are skipped.
    pub max_letters: Option<usize>,
    /// Node limit.
    pub budget: u64,
    /// Disables every pruning rule; leaves are checked with the verifier.
    pub prune: bool,
}

impl SearchSpec {
    pub fn new(n: usize, length: usize, cyclic: bool) -> Self {
        SearchSpec {
            n,
            length,
            cyclic,
            ties: Ties::None,
            diamonds: DiamondPolicy::None,
            prefix: None,
            max_letters: None,
            budget: DEFAULT_NODE_BUDGET,
            prune: true,
        }
    }

    pub fn with_ties(mut self, ties: Ties) -> Self {
        self.ties = ties;
        self
    }

    pub fn with_diamonds(mut self, diamonds: DiamondPolicy) -> Self {
        self.diamonds = diamonds;
        self
    }

    pub fn with_prefix(mut self, prefix: Pattern) -> Self {
        self.prefix = Some(prefix);
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_max_letters(mut self, max: usize) -> Self {
        self.max_letters = Some(max);
        self
    }

    pub fn without_pruning(mut self) -> Self {
        self.prune = false;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if !(2..=MAX_SEARCH_N).contains(&n) {
            return Err(Error::WindowSizeOutOfRange {
                n,
                min: 2,
                max: MAX_SEARCH_N,
            });
        }
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        if self.length == 0 || (!self.cyclic && self.length < n) {
            return bad(format!("length {} is too short for n = {n}", self.length));
        }
        match self.ties {
            Ties::MinGap(d) | Ties::ExactGap(d) if !(1..n).contains(&d) => {
                return bad(format!("tie distance {d} must lie in 1..{n}"));
            }
            _ => {}
        }
        if let DiamondPolicy::Template(slots) = &self.diamonds {
            if slots.len() != self.length {
                return bad(format!(
                    "template has {} slots but length is {}",
                    slots.len(),
                    self.length
                ));
            }
            let probe: Vec<Symbol> = slots.iter().map(|s| s.symbol(1)).collect();
            PWord::new(probe, n, self.cyclic).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        }
        if let Some(prefix) = &self.prefix {
            if self.cyclic {
                return bad("prefix only applies to non-cyclic searches".into());
            }
            let letters = match &self.diamonds {
                DiamondPolicy::Template(slots) => slots[..n].iter().filter(|s| s.is_letter()).count(),
                _ => n,
            };
            if prefix.len() > letters {
                return bad(format!(
                    "prefix {prefix} is longer than the {letters} letters of the first window"
                ));
            }
        }
        if self.max_letters == Some(0) {
            return bad("max_letters must be positive".into());
        }
        Ok(())
    }
}

impl fmt::Display for SearchSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.n)?;
        writeln!(f, "length={}", self.length)?;
        writeln!(f, "cyclic={}", u8::from(self.cyclic))?;
        writeln!(f, "ties={}", self.ties)?;
        writeln!(f, "diamonds={}", self.diamonds)?;
        if let Some(p) = &self.prefix {
            writeln!(f, "prefix={p}")?;
        }
        if let Some(m) = self.max_letters {
            writeln!(f, "max_letters={m}")?;
        }
        writeln!(f, "budget={}", self.budget)?;
        writeln!(f, "prune={}", u8::from(self.prune))
    }
}

impl FromStr for SearchSpec {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let mut n = None;
        let mut length = None;
        let mut spec = SearchSpec::new(0, 0, false);
        let mut seen: Vec<String> = Vec::new();
        let mut last_line = 1;
        for (idx, raw) in input.lines().enumerate() {
            let line_no = idx + 1;
            last_line = line_no;
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let indent = line.len() - line.trim_start().len();
            let key_col = column(raw, indent);
            let Some(eq) = line.find('=') else {
                return Err(ParseError::new(line_no, key_col, "expected 'key=value'").into());
            };
            let key = line[indent..eq].trim_end();
            let rest = &line[eq + 1..];
            let value_col = column(raw, eq + 1 + rest.len() - rest.trim_start().len());
            let value = rest.trim();
            let err = |msg: String| -> Error { ParseError::new(line_no, value_col, msg).into() };
            if seen.iter().any(|k| k == key) {
                return Err(ParseError::new(line_no, key_col, format!("duplicate key '{key}'")).into());
            }
            seen.push(key.to_string());
            let number = |v: &str| v.parse::<u64>().map_err(|_| err(format!("expected an integer, found '{v}'")));
            let flag = |v: &str| match v {
                "0" | "false" => Ok(false),
                "1" | "true" => Ok(true),
                _ => Err(err(format!("expected 0 or 1, found '{v}'"))),
            };
            match key {
                "n" => n = Some(number(value)? as usize),
                "length" => length = Some(number(value)? as usize),
                "cyclic" => spec.cyclic = flag(value)?,
                "prune" => spec.prune = flag(value)?,
                "budget" => spec.budget = number(value)?,
                "max_letters" => spec.max_letters = Some(number(value)? as usize),
                "ties" => spec.ties = parse_ties(value).map_err(err)?,
                "diamonds" => spec.diamonds = parse_diamonds(value).map_err(err)?,
                "prefix" => {
                    spec.prefix = Some(
                        Pattern::from_digits(value)
                            .or_else(|_| {
                                let letters: std::result::Result<Vec<u32>, _> =
                                    value.split(',').map(|t| t.trim().parse::<u32>()).collect();
                                letters
                                    .map_err(|_| Error::MalformedWord(value.to_string()))
                                    .and_then(Pattern::new)
                            })
                            .map_err(|e| err(e.to_string()))?,
                    )
                }
                other => {
                    return Err(ParseError::new(line_no, key_col, format!("unknown key '{other}'")).into())
                }
            }
        }
        spec.n = n.ok_or_else(|| ParseError::new(last_line, 1, "missing required key 'n'"))?;
        spec.length = length.ok_or_else(|| ParseError::new(last_line, 1, "missing required key 'length'"))?;
        spec.validate()?;
        Ok(spec)
    }
}

fn column(line: &str, byte: usize) -> usize {
    line[..byte].chars().count() + 1
}

fn parse_ties(value: &str) -> std::result::Result<Ties, String> {
    let distance = |v: &str| v.parse::<usize>().map_err(|_| format!("bad tie distance '{v}'"));
    if value == "none" {
        Ok(Ties::None)
    } else if let Some(d) = value.strip_prefix("min-gap:") {
        Ok(Ties::MinGap(distance(d)?))
    } else if let Some(d) = value.strip_prefix("exact-gap:") {
        Ok(Ties::ExactGap(distance(d)?))
    } else {
        Err(format!("expected none, min-gap:<d> or exact-gap:<d>, found '{value}'"))
    }
}

fn parse_diamonds(value: &str) -> std::result::Result<DiamondPolicy, String> {
    match value {
        "none" => return Ok(DiamondPolicy::None),
        "free" => return Ok(DiamondPolicy::Free),
        _ => {}
    }
    let body = value
        .strip_prefix("template:")
        .ok_or_else(|| format!("expected none, free or template:<slots>, found '{value}'"))?;
    let mut slots = Vec::new();
    for token in body.split_whitespace() {
        let slot = if token == "." {
            Slot::Letter
        } else {
            match crate::pword::text::parse_symbols(token).map_err(|e| e.to_string())?.as_slice() {
                [Symbol::Diamond] => Slot::Diamond,
                [Symbol::Restricted(d)] => Slot::Restricted(*d),
                _ => return Err(format!("bad template slot '{token}'")),
            }
        };
        slots.push(slot);
    }
    if slots.is_empty() {
        return Err("empty template".into());
    }
    Ok(DiamondPolicy::Template(slots))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_config() {
        let spec: SearchSpec = "# comment\nn=4\nlength = 14\ncyclic=1\nties=min-gap:2 # trailing\nbudget=1000\n"
            .parse()
            .unwrap();
        assert_eq!(spec.n, 4);
        assert_eq!(spec.length, 14);
        assert!(spec.cyclic);
        assert_eq!(spec.ties, Ties::MinGap(2));
        assert_eq!(spec.budget, 1000);
        assert_eq!(spec.to_string().parse::<SearchSpec>().unwrap(), spec);
    }

    #[test]
    fn parses_templates() {
        let spec: SearchSpec = "n=3\nlength=7\ndiamonds=template:*{2,3} . . . . . .\nprefix=12\n"
            .parse()
            .unwrap();
        let DiamondPolicy::Template(slots) = &spec.diamonds else {
            panic!("template expected")
        };
        assert_eq!(slots[0], Slot::Restricted(RankSet::from_ranks([2, 3])));
        assert!(slots[1..].iter().all(|s| s.is_letter()));
        assert_eq!(spec.prefix, Some(Pattern::from_digits("12").unwrap()));
        assert_eq!(spec.to_string().parse::<SearchSpec>().unwrap(), spec);
    }

    #[test]
    fn reports_positions() {
        let err = "n=4\nlength=x\n".parse::<SearchSpec>().unwrap_err();
        assert!(matches!(err, Error::Parse(ParseError { line: 2, column: 8, .. })), "{err:?}");
        let err = "n=4\n  colour=red\n".parse::<SearchSpec>().unwrap_err();
        assert!(matches!(err, Error::Parse(ParseError { line: 2, column: 3, .. })), "{err:?}");
        assert!("length=5\n".parse::<SearchSpec>().is_err());
        assert!("n=4\nlength=5\nties=min-gap:4\n".parse::<SearchSpec>().is_err());
        assert!("n=4\nlength=5\ndiamonds=template:. *\n".parse::<SearchSpec>().is_err());
    }

    #[test]
    fn tie_rules() {
        assert!(!Ties::None.allows(3));
        assert!(Ties::MinGap(2).allows(3) && !Ties::MinGap(2).allows(1));
        assert!(Ties::ExactGap(3).allows(3) && !Ties::ExactGap(3).allows(2));
    }
}
