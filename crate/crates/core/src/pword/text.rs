//! The p-word text format.
//!
//! ```text
//! n=3 cyclic=0
//! *{1,3} 2 4 3 2 4 1
//! ```
//!
//! The first non-blank line is the header. Symbols follow as
//! whitespace-separated tokens: a positive integer is a letter, `*` is a
//! diamond and `*{a,b,...}` a restricted diamond. `#` starts a comment. [`PWord`]'s `Display`
//! prints exactly this layout with single spaces and a trailing newline.

use std::fmt;
use std::str::FromStr;

use super::{PWord, RankSet, Symbol};
use crate::error::{Error, ParseError, Result};

impl fmt::Display for PWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={} cyclic={}", self.n, u8::from(self.cyclic))?;
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        writeln!(f)
    }
}

impl FromStr for PWord {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let mut header: Option<(usize, bool)> = None;
        let mut symbols = Vec::new();
        for (line_no, line) in input.lines().enumerate() {
            let line_no = line_no + 1;
            let line = line.split('#').next().unwrap_or_default();
            let tokens = tokens(line);
            if tokens.is_empty() {
                continue;
            }
            match header {
                None => header = Some(parse_header(line_no, &tokens)?),
                Some(_) => {
                    for (column, token) in tokens {
                        symbols.push(parse_symbol(token).map_err(|m| ParseError::new(line_no, column, m))?);
                    }
                }
            }
        }
        let (n, cyclic) = header.ok_or_else(|| ParseError::new(1, 1, "missing header 'n=<int> cyclic=<0|1>'"))?;
        if symbols.is_empty() {
            return Err(ParseError::new(input.lines().count().max(1), 1, "word has no symbols").into());
        }
        PWord::new(symbols, n, cyclic)
    }
}

/// Whitespace-separated tokens with their 1-based starting columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(s, t)| (line[..s].chars().count() + 1, t))
        .collect()
}

fn parse_header(line: usize, tokens: &[(usize, &str)]) -> Result<(usize, bool), ParseError> {
    let [(c1, t1), (c2, t2)] = tokens else {
        let column = tokens.get(2).map_or(1, |t| t.0);
        return Err(ParseError::new(line, column, "header must be 'n=<int> cyclic=<0|1>'"));
    };
    let n = t1
        .strip_prefix("n=")
        .and_then(|v| v.parse::<usize>().ok())
        .ok_or_else(|| ParseError::new(line, *c1, format!("expected 'n=<int>', found '{t1}'")))?;
    let cyclic = match t2.strip_prefix("cyclic=") {
        Some("0") => false,
        Some("1") => true,
        _ => {
            return Err(ParseError::new(
                line,
                *c2,
                format!("expected 'cyclic=0' or 'cyclic=1', found '{t2}'"),
            ))
        }
    };
    Ok((n, cyclic))
}

fn parse_symbol(token: &str) -> std::result::Result<Symbol, String> {
    if token == "*" {
        return Ok(Symbol::Diamond);
    }
    if let Some(rest) = token.strip_prefix('*') {
        let inner = rest
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| format!("malformed restricted diamond '{token}'"))?;
        let mut ranks = Vec::new();
        for part in inner.split(',') {
            match part.parse::<u32>() {
                Ok(r) if (1..32).contains(&r) => ranks.push(r),
                _ => return Err(format!("bad rank '{part}' in '{token}'")),
            }
        }
        return Ok(Symbol::Restricted(RankSet::from_ranks(ranks)));
    }
    match token.parse::<u32>() {
        Ok(v) if v > 0 => Ok(Symbol::Letter(v)),
        _ => Err(format!("expected a positive integer, '*' or '*{{...}}', found '{token}'")),
    }
}

/// Parses a bare symbol list (no header).
pub(crate) fn parse_symbols(line: &str) -> Result<Vec<Symbol>> {
    tokens(line)
        .into_iter()
        .map(|(column, t)| parse_symbol(t).map_err(|m| ParseError::new(1, column, m).into()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn print_layout() {
        let u: PWord = "n=3 cyclic=0\n*{1,3}   2 4\n3 2 4 1".parse().unwrap();
        assert_eq!(u.to_string(), "n=3 cyclic=0\n*{1,3} 2 4 3 2 4 1\n");
        let again: PWord = u.to_string().parse().unwrap();
        assert_eq!(again, u);
        let commented: PWord = "# header next\nn=3 cyclic=0 # word\n*{1,3} 2 4 3 2 4 1\n# verdict".parse().unwrap();
        assert_eq!(commented, u);
    }

    #[test]
    fn errors_carry_positions() {
        let err = "n=3 cyclic=1\n1 2 x".parse::<PWord>().unwrap_err();
        assert!(matches!(err, Error::Parse(ParseError { line: 2, column: 5, .. })), "{err:?}");

        let err = "\n  n=3 cyclic=2\n1".parse::<PWord>().unwrap_err();
        assert!(matches!(err, Error::Parse(ParseError { line: 2, column: 7, .. })), "{err:?}");

        let err = "n=3 cyclic=0\n1 *{1,} 2".parse::<PWord>().unwrap_err();
        assert!(matches!(err, Error::Parse(ParseError { line: 2, column: 3, .. })), "{err:?}");

        assert!("n=3 cyclic=0\n".parse::<PWord>().is_err());
        assert!("".parse::<PWord>().is_err());
        assert!("n=3 cyclic=0\n0 1 2".parse::<PWord>().is_err());
    }
}
