//! Prime notation for timed Pauli words.
//!
//! `Z X' Z''` is `Z@0 · X@1 · Z@2`; a trailing `…` (or `...`) marks an
//! infinite tail, so `Z Y' X'' X'''…` is `Z@0 · Y@1` followed by `X` at
//! every label from 2. Labels may also be written as `X[3]`, which is the
//! only form for negative labels. An optional leading `-`, `+i` or `-i`
//! sets the phase; the empty word is `I`.

use std::fmt;
use std::str::FromStr;

use super::letter::{PauliLetter, Phase};
use super::word::TimedPauliWord;
use super::PauliError;

fn write_letter(f: &mut fmt::Formatter<'_>, letter: PauliLetter, label: i64) -> fmt::Result {
    if label >= 0 {
        write!(f, "{letter}{}", "'".repeat(label as usize))
    } else {
        write!(f, "{letter}[{label}]")
    }
}

impl fmt::Display for TimedPauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.phase() {
            Phase::ONE => {}
            Phase::MINUS_ONE => f.write_str("-")?,
            Phase::I => f.write_str("+i ")?,
            _ => f.write_str("-i ")?,
        }
        if self.is_identity() {
            return f.write_str("I");
        }
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if !std::mem::take(&mut first) {
                f.write_str(" ")?;
            }
            Ok(())
        };
        for (&k, &l) in self.head() {
            sep(f)?;
            write_letter(f, l, k)?;
        }
        if let Some(t) = self.tail() {
            for k in t.start..t.start + 3 {
                sep(f)?;
                write_letter(f, t.letter, k)?;
            }
            f.write_str("…")?;
        }
        Ok(())
    }
}

fn prime_count(c: char) -> Option<i64> {
    match c {
        '\'' | '′' => Some(1),
        '″' => Some(2),
        '‴' => Some(3),
        '⁗' => Some(4),
        _ => None,
    }
}

/// Splits at whitespace and before every letter, so `X′X″` is two tokens.
fn tokens(s: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for c in s.chars() {
        if c.is_whitespace() {
            continue;
        }
        match out.last_mut() {
            Some(cur) if PauliLetter::from_char(c).is_none() => cur.push(c),
            _ => out.push(c.to_string()),
        }
    }
    out
}

/// Parses one `Letter[primes|[k]][…]` token into (label, letter, is_tail).
fn parse_token(token: &str) -> Result<(i64, PauliLetter, bool), PauliError> {
    let bad = || PauliError::Parse(token.to_string());
    let (body, is_tail) = match token.strip_suffix('…').or_else(|| token.strip_suffix("...")) {
        Some(b) => (b, true),
        None => (token, false),
    };
    let mut chars = body.chars();
    let letter = chars.next().and_then(PauliLetter::from_char).ok_or_else(bad)?;
    let rest = chars.as_str();
    let label = if let Some(inner) = rest.strip_prefix('[') {
        inner.strip_suffix(']').and_then(|n| n.trim().parse().ok()).ok_or_else(bad)?
    } else {
        rest.chars().map(prime_count).sum::<Option<i64>>().ok_or_else(bad)?
    };
    Ok((label, letter, is_tail))
}

impl FromStr for TimedPauliWord {
    type Err = PauliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut rest = s.trim();
        let mut phase = Phase::ONE;
        if let Some(r) = rest.strip_prefix('-') {
            phase = Phase::MINUS_ONE;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        }
        if let Some(r) = rest.strip_prefix('i') {
            phase *= Phase::I;
            rest = r;
        }
        let mut letters = Vec::new();
        let mut tail = None;
        for token in tokens(rest) {
            if tail.is_some() {
                return Err(PauliError::Parse(format!("`{token}` follows an infinite tail")));
            }
            let (label, letter, is_tail) = parse_token(&token)?;
            if is_tail {
                tail = Some((label, letter));
            } else {
                letters.push((label, letter));
            }
        }
        if letters.is_empty() && tail.is_none() {
            return Err(PauliError::Parse(s.to_string()));
        }
        TimedPauliWord::from_parts(phase, letters, tail)
    }
}
