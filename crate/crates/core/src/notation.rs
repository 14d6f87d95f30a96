//! Letter notation for sets of (-2)-classes.
//!
//! Points are the letters `A`..`F`; a set is written as degree groups, e.g.
//! `0: AB, CD; 2: ABCDEF` for `{E1-E2, E3-E4, 2L-E1-...-E6}`:
//!
//! ```text
//! negset := group (';' group)* | ''
//! group  := degree ':' term (',' term)*
//! degree := '0' | '1' | '2'
//! term   := letters A..F, strictly increasing
//! ```
//!
//! Degree 0 terms have two letters (`E_x - E_y`), degree 1 terms three
//! (`L - E_x - E_y - E_z`) and degree 2 terms all six. Whitespace is ignored.

use thiserror::Error;

use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, N_POINTS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: expected {expected}")]
    Syntax { pos: usize, expected: &'static str },
    #[error("term {term:?} at position {pos} has {found} letters; degree {degree} needs {needed}")]
    Arity {
        pos: usize,
        term: String,
        degree: i64,
        found: usize,
        needed: usize,
    },
    #[error("term {term:?} at position {pos} has repeated or out-of-order letters")]
    LetterOrder { pos: usize, term: String },
    #[error("term {term:?} at position {pos} repeats an earlier class")]
    Duplicate { pos: usize, term: String },
}

struct Scanner<'a> {
    chars: Vec<(usize, char)>,
    at: usize,
    src: &'a str,
}

impl Scanner<'_> {
    fn skip_ws(&mut self) {
        while self.chars.get(self.at).is_some_and(|(_, c)| c.is_whitespace()) {
            self.at += 1;
        }
    }

    fn pos(&self) -> usize {
        self.chars.get(self.at).map_or(self.src.len(), |&(p, _)| p)
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.at).map(|&(_, c)| c)
    }

    fn expect(&mut self, want: char, expected: &'static str) -> Result<(), ParseError> {
        if self.peek() == Some(want) {
            self.at += 1;
            Ok(())
        } else {
            Err(ParseError::Syntax { pos: self.pos(), expected })
        }
    }
}

fn needed_letters(degree: i64) -> usize {
    match degree {
        0 => 2,
        1 => 3,
        _ => N_POINTS,
    }
}

/// Parses letter notation into classes, in the order written.
pub fn parse_negset(text: &str) -> Result<Vec<DivisorClass>, ParseError> {
    let mut s = Scanner { chars: text.char_indices().collect(), at: 0, src: text };
    let mut out: Vec<DivisorClass> = Vec::new();
    if s.peek().is_none() {
        return Ok(out);
    }
    loop {
        let degree = match s.peek() {
            Some(c @ '0'..='2') => {
                s.at += 1;
                i64::from(c as u8 - b'0')
            }
            _ => return Err(ParseError::Syntax { pos: s.pos(), expected: "degree 0, 1 or 2" }),
        };
        s.expect(':', "':'")?;
        loop {
            s.peek();
            let start = s.pos();
            let mut letters = String::new();
            // letters are contiguous; whitespace ends the term
            while let Some(&(_, c)) = s.chars.get(s.at) {
                if c.is_ascii_alphabetic() {
                    letters.push(c);
                    s.at += 1;
                } else {
                    break;
                }
            }
            if letters.is_empty() {
                return Err(ParseError::Syntax { pos: start, expected: "a term of letters A-F" });
            }
            let mut idx = Vec::with_capacity(letters.len());
            for (k, c) in letters.chars().enumerate() {
                if !('A'..='F').contains(&c) {
                    return Err(ParseError::Syntax { pos: start + k, expected: "a letter A-F" });
                }
                idx.push(c as usize - 'A' as usize);
            }
            if idx.windows(2).any(|w| w[0] >= w[1]) {
                return Err(ParseError::LetterOrder { pos: start, term: letters });
            }
            let needed = needed_letters(degree);
            if idx.len() != needed {
                return Err(ParseError::Arity {
                    pos: start,
                    term: letters,
                    degree,
                    found: idx.len(),
                    needed,
                });
            }
            let class = match degree {
                0 => DivisorClass::root(idx[0], idx[1]),
                d => DivisorClass::through(d, &idx),
            };
            if out.contains(&class) {
                return Err(ParseError::Duplicate { pos: start, term: letters });
            }
            out.push(class);
            match s.peek() {
                Some(',') => s.at += 1,
                _ => break,
            }
        }
        match s.peek() {
            Some(';') => s.at += 1,
            None => return Ok(out),
            _ => return Err(ParseError::Syntax { pos: s.pos(), expected: "',', ';' or end of input" }),
        }
    }
}

fn term(c: &DivisorClass) -> Option<String> {
    let letter = |i: usize| (b'A' + i as u8) as char;
    let minus: Vec<usize> = (0..N_POINTS).filter(|&i| c.m[i] == -1).collect();
    let plus: Vec<usize> = (0..N_POINTS).filter(|&i| c.m[i] == 1).collect();
    let other = c.m.iter().any(|&x| !(-1..=1).contains(&x));
    if other {
        return None;
    }
    match (c.d, plus.as_slice(), minus.len()) {
        (0, [i], 1) if *i < minus[0] => Some([letter(*i), letter(minus[0])].iter().collect()),
        (1, [], 3) | (2, [], 6) => Some(minus.into_iter().map(letter).collect()),
        _ => None,
    }
}

/// Writes classes in letter notation, keeping their order. Consecutive
/// classes of the same degree share a group.
pub fn format_negset(classes: &[DivisorClass]) -> Result<String> {
    let mut groups: Vec<(i64, Vec<String>)> = Vec::new();
    for c in classes {
        let t = term(c).ok_or(Error::NotInPool(*c))?;
        match groups.last_mut() {
            Some((d, terms)) if *d == c.d => terms.push(t),
            _ => groups.push((c.d, vec![t])),
        }
    }
    Ok(groups
        .iter()
        .map(|(d, terms)| format!("{d}: {}", terms.join(", ")))
        .collect::<Vec<_>>()
        .join("; "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::typeenum::candidate_pool;
    use proptest::prelude::*;

    fn l() -> DivisorClass {
        DivisorClass::line()
    }
    fn e(i: usize) -> DivisorClass {
        DivisorClass::exceptional(i - 1)
    }

    #[test]
    fn examples() {
        let t = parse_negset("0: AB, CD; 2: ABCDEF").unwrap();
        assert_eq!(t, vec![e(1) - e(2), e(3) - e(4), DivisorClass::through(2, &[0, 1, 2, 3, 4, 5])]);
        assert!(parse_negset("").unwrap().is_empty());
        assert!(parse_negset("   ").unwrap().is_empty());
        let t = parse_negset("1: ABC, ADE").unwrap();
        assert_eq!(t, vec![l() - e(1) - e(2) - e(3), l() - e(1) - e(4) - e(5)]);
        assert_eq!(parse_negset(" 0 :AB ,CD;2:ABCDEF ").unwrap().len(), 3);
    }

    #[test]
    fn diagnostics() {
        assert!(matches!(parse_negset("3: AB"), Err(ParseError::Syntax { pos: 0, .. })));
        assert!(matches!(parse_negset("0 AB"), Err(ParseError::Syntax { pos: 2, .. })));
        assert!(matches!(parse_negset("0: AB;"), Err(ParseError::Syntax { pos: 6, .. })));
        assert!(matches!(parse_negset("0: AG"), Err(ParseError::Syntax { pos: 4, .. })));
        assert!(matches!(parse_negset("0: AB CD"), Err(ParseError::Syntax { pos: 6, .. })));
        assert!(matches!(parse_negset("0: ABC"), Err(ParseError::Arity { found: 3, needed: 2, .. })));
        assert!(matches!(parse_negset("2: ABCDE"), Err(ParseError::Arity { .. })));
        assert!(matches!(parse_negset("0: BA"), Err(ParseError::LetterOrder { pos: 3, .. })));
        assert!(matches!(parse_negset("1: AAB"), Err(ParseError::LetterOrder { .. })));
        assert!(matches!(parse_negset("0: AB; 0: AB"), Err(ParseError::Duplicate { pos: 10, .. })));
    }

    #[test]
    fn format_examples() {
        let t = parse_negset("0: AB, CD; 2: ABCDEF").unwrap();
        assert_eq!(format_negset(&t).unwrap(), "0: AB, CD; 2: ABCDEF");
        assert_eq!(format_negset(&[]).unwrap(), "");
        assert!(format_negset(&[e(2) - e(1)]).is_err());
        assert!(format_negset(&[l() - e(1) - e(2)]).is_err());
    }

    proptest! {
        #[test]
        fn round_trip(picks in proptest::sample::subsequence((0..36).collect::<Vec<_>>(), 0..7), shuffle in any::<u64>()) {
            let pool = candidate_pool();
            let mut classes: Vec<DivisorClass> = picks.iter().map(|&i| pool[i]).collect();
            let n = classes.len();
            if n > 1 {
                classes.rotate_left((shuffle % n as u64) as usize);
            }
            let text = format_negset(&classes).unwrap();
            prop_assert_eq!(parse_negset(&text).unwrap(), classes);
        }
    }
}
