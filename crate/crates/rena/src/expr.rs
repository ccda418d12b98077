// SPDX-License-Identifier: Apache-2.0

//! Regular-expression syntax trees over a `k`-letter alphabet.
//!
//! An [`Expr`] is one of `@` (the empty word), a letter, a union, a
//! concatenation or a star. Letters are 1-based indices into the alphabet;
//! index 1..=26 prints as `a`..`z`, larger indices print as `s<i>`.
//!
//! The module also provides the class predicates used everywhere else:
//! [`Expr::is_sigma_star`] recognizes the absorbing pattern
//! `(σ_{i_1}+⋯+σ_{i_k})*` (a starred union tree whose leaves spell a
//! permutation of the whole alphabet), and
//! [`Expr::avoids_absorbing_in_union`] recognizes membership in the
//! restricted class where that pattern never appears as a union operand.
//! The empty language `∅` is deliberately not representable.

use std::fmt;

/// Syntax tree of a regular expression. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    /// The empty word, written `@`.
    Epsilon,
    /// A single letter, 1-based index into the alphabet.
    Letter(u32),
    Union(Box<Expr>, Box<Expr>),
    Concat(Box<Expr>, Box<Expr>),
    Star(Box<Expr>),
}

/// Tree size and alphabetic size of an expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeMetrics {
    /// Number of symbols, parentheses disregarded.
    pub tree_size: usize,
    /// Number of letter occurrences.
    pub alphabetic_size: usize,
}

impl Expr {
    pub fn union(l: Expr, r: Expr) -> Expr {
        Expr::Union(Box::new(l), Box::new(r))
    }

    pub fn concat(l: Expr, r: Expr) -> Expr {
        Expr::Concat(Box::new(l), Box::new(r))
    }

    pub fn star(e: Expr) -> Expr {
        Expr::Star(Box::new(e))
    }

    /// Number of symbols, parentheses disregarded: `a` and `@` count 1,
    /// every operator counts 1.
    pub fn size(&self) -> usize {
        match self {
            Expr::Epsilon | Expr::Letter(_) => 1,
            Expr::Union(l, r) | Expr::Concat(l, r) => 1 + l.size() + r.size(),
            Expr::Star(c) => 1 + c.size(),
        }
    }

    /// Number of letter occurrences.
    pub fn alphabetic_size(&self) -> usize {
        match self {
            Expr::Epsilon => 0,
            Expr::Letter(_) => 1,
            Expr::Union(l, r) | Expr::Concat(l, r) => l.alphabetic_size() + r.alphabetic_size(),
            Expr::Star(c) => c.alphabetic_size(),
        }
    }

    pub fn metrics(&self) -> SizeMetrics {
        SizeMetrics {
            tree_size: self.size(),
            alphabetic_size: self.alphabetic_size(),
        }
    }

    /// Whether the empty word belongs to the language.
    pub fn is_nullable(&self) -> bool {
        match self {
            Expr::Epsilon => true,
            Expr::Letter(_) => false,
            Expr::Star(_) => true,
            Expr::Concat(l, r) => l.is_nullable() && r.is_nullable(),
            Expr::Union(l, r) => l.is_nullable() || r.is_nullable(),
        }
    }

    /// Whether `self` is a starred union tree whose leaves, read left to
    /// right, form a permutation of `{1..k}`. Any parenthesization of the
    /// union counts, so there are `(2k−2)!/(k−1)!` such expressions, each of
    /// tree size `2k`. For `k = 1` the pattern degenerates to `(a*)`.
    pub fn is_sigma_star(&self, k: u32) -> bool {
        let Expr::Star(child) = self else {
            return false;
        };
        if k == 0 {
            return false;
        }
        let mut seen = vec![false; k as usize + 1];
        let mut count: u32 = 0;
        if !collect_union_leaves(child, k, &mut seen, &mut count) {
            return false;
        }
        count == k
    }

    /// Whether no union operand anywhere in `self` is a full-alphabet
    /// starred union (the absorbing pattern). The pattern itself is allowed
    /// as long as it does not sit directly under a union.
    pub fn avoids_absorbing_in_union(&self, k: u32) -> bool {
        match self {
            Expr::Epsilon | Expr::Letter(_) => true,
            Expr::Star(c) => c.avoids_absorbing_in_union(k),
            Expr::Concat(l, r) => l.avoids_absorbing_in_union(k) && r.avoids_absorbing_in_union(k),
            Expr::Union(l, r) => {
                !l.is_sigma_star(k)
                    && !r.is_sigma_star(k)
                    && l.avoids_absorbing_in_union(k)
                    && r.avoids_absorbing_in_union(k)
            }
        }
    }

    /// Mirror image: children of every concatenation (and union) swapped.
    /// Exchanges the First and Last sets of the marked expression.
    pub fn reversed(&self) -> Expr {
        match self {
            Expr::Epsilon => Expr::Epsilon,
            Expr::Letter(i) => Expr::Letter(*i),
            Expr::Union(l, r) => Expr::union(r.reversed(), l.reversed()),
            Expr::Concat(l, r) => Expr::concat(r.reversed(), l.reversed()),
            Expr::Star(c) => Expr::star(c.reversed()),
        }
    }

    /// Largest letter index occurring in the expression (0 when none).
    pub fn max_letter(&self) -> u32 {
        match self {
            Expr::Epsilon => 0,
            Expr::Letter(i) => *i,
            Expr::Union(l, r) | Expr::Concat(l, r) => l.max_letter().max(r.max_letter()),
            Expr::Star(c) => c.max_letter(),
        }
    }
}

// Walks a union-only tree, recording which letters appear. Returns false as
// soon as a non-union internal node, a repeated letter or an out-of-range
// letter is found.
fn collect_union_leaves(e: &Expr, k: u32, seen: &mut [bool], count: &mut u32) -> bool {
    match e {
        Expr::Letter(i) => {
            if *i == 0 || *i > k || seen[*i as usize] {
                return false;
            }
            seen[*i as usize] = true;
            *count += 1;
            true
        }
        Expr::Union(l, r) => {
            collect_union_leaves(l, k, seen, count) && collect_union_leaves(r, k, seen, count)
        }
        _ => false,
    }
}

/// Canonical name of letter `i`: `a`..`z` for 1..=26, `s<i>` beyond.
pub fn letter_name(i: u32) -> String {
    debug_assert!(i >= 1);
    if (1..=26).contains(&i) {
        char::from(b'a' + (i as u8 - 1)).to_string()
    } else {
        format!("s{i}")
    }
}

impl fmt::Display for Expr {
    /// Fully parenthesized canonical form: `((a+b)*)`, `(a.b)`, `@`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Epsilon => f.write_str("@"),
            Expr::Letter(i) => f.write_str(&letter_name(*i)),
            Expr::Union(l, r) => write!(f, "({l}+{r})"),
            Expr::Concat(l, r) => write!(f, "({l}.{r})"),
            Expr::Star(c) => write!(f, "({c}*)"),
        }
    }
}

/// Error from [`parse`], carrying the byte offset of the offending input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at offset {}: {}",
            self.offset, self.message
        )
    }
}

impl std::error::Error for ParseError {}

/// Parse the fully parenthesized text format:
///
/// ```text
/// E := '@' | letter | '(' E '+' E ')' | '(' E '.' E ')' | '(' E '*' ')'
/// ```
///
/// Letters are `a`..`z` or `s<i>`; whitespace is ignored. Letter indices
/// must not exceed `k`.
///
/// ```
/// use rena::expr::{parse, Expr};
/// let e = parse("((a+b)*)", 2).unwrap();
/// assert_eq!(e, Expr::star(Expr::union(Expr::Letter(1), Expr::Letter(2))));
/// assert_eq!(e.to_string(), "((a+b)*)");
/// ```
pub fn parse(text: &str, k: u32) -> Result<Expr, ParseError> {
    let bytes = text.as_bytes();
    let mut pos = 0usize;
    let e = parse_expr(bytes, &mut pos, k)?;
    skip_ws(bytes, &mut pos);
    if pos < bytes.len() {
        return Err(ParseError {
            offset: pos,
            message: format!("unexpected trailing input '{}'", bytes[pos] as char),
        });
    }
    Ok(e)
}

fn skip_ws(bytes: &[u8], pos: &mut usize) {
    while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
}

fn parse_expr(bytes: &[u8], pos: &mut usize, k: u32) -> Result<Expr, ParseError> {
    skip_ws(bytes, pos);
    if *pos >= bytes.len() {
        return Err(ParseError {
            offset: *pos,
            message: "unexpected end of input, expected expression".to_string(),
        });
    }
    match bytes[*pos] {
        b'@' => {
            *pos += 1;
            Ok(Expr::Epsilon)
        }
        b'(' => {
            *pos += 1;
            let first = parse_expr(bytes, pos, k)?;
            skip_ws(bytes, pos);
            if *pos >= bytes.len() {
                return Err(ParseError {
                    offset: *pos,
                    message: "unexpected end of input, expected '+', '.' or '*'".to_string(),
                });
            }
            let op = bytes[*pos];
            *pos += 1;
            let e = match op {
                b'*' => Expr::star(first),
                b'+' | b'.' => {
                    let second = parse_expr(bytes, pos, k)?;
                    if op == b'+' {
                        Expr::union(first, second)
                    } else {
                        Expr::concat(first, second)
                    }
                }
                other => {
                    return Err(ParseError {
                        offset: *pos - 1,
                        message: format!("expected '+', '.' or '*', found '{}'", other as char),
                    })
                }
            };
            skip_ws(bytes, pos);
            if *pos >= bytes.len() || bytes[*pos] != b')' {
                return Err(ParseError {
                    offset: *pos,
                    message: "expected ')'".to_string(),
                });
            }
            *pos += 1;
            Ok(e)
        }
        c => parse_letter(bytes, pos, k, c),
    }
}

fn parse_letter(bytes: &[u8], pos: &mut usize, k: u32, c: u8) -> Result<Expr, ParseError> {
    let start = *pos;
    // 's' followed by digits is the spelled-out form s<i>; a bare 's' is
    // letter 19.
    let idx: u32 = if c == b's' && *pos + 1 < bytes.len() && bytes[*pos + 1].is_ascii_digit() {
        *pos += 1;
        let digits_start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        std::str::from_utf8(&bytes[digits_start..*pos])
            .unwrap()
            .parse()
            .map_err(|_| ParseError {
                offset: start,
                message: "letter index out of range".to_string(),
            })?
    } else if c.is_ascii_lowercase() {
        *pos += 1;
        (c - b'a') as u32 + 1
    } else {
        return Err(ParseError {
            offset: start,
            message: format!("expected expression, found '{}'", c as char),
        });
    };
    if idx == 0 || idx > k {
        return Err(ParseError {
            offset: start,
            message: format!(
                "letter '{}' outside alphabet of size {k}",
                letter_name(idx.max(1))
            ),
        });
    }
    Ok(Expr::Letter(idx))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Expr {
        Expr::Letter(1)
    }
    fn b() -> Expr {
        Expr::Letter(2)
    }
    fn c() -> Expr {
        Expr::Letter(3)
    }

    #[test]
    fn sizes() {
        assert_eq!(a().size(), 1);
        assert_eq!(Expr::union(a(), b()).size(), 3);
        // (a+b)* has size 4
        assert_eq!(Expr::star(Expr::union(a(), b())).size(), 4);
        assert_eq!(Expr::Epsilon.alphabetic_size(), 0);
        assert_eq!(Expr::star(Expr::concat(a(), b())).alphabetic_size(), 2);
        assert_eq!(Expr::star(Expr::union(a(), b())).alphabetic_size(), 2);
        let m = Expr::star(Expr::union(a(), b())).metrics();
        assert_eq!((m.tree_size, m.alphabetic_size), (4, 2));
    }

    #[test]
    fn nullability() {
        assert!(Expr::star(a()).is_nullable());
        assert!(!Expr::concat(a(), b()).is_nullable());
        assert!(Expr::union(Expr::concat(a(), b()), Expr::Epsilon).is_nullable());
    }

    #[test]
    fn sigma_star_k2() {
        assert!(Expr::star(Expr::union(a(), b())).is_sigma_star(2));
        assert!(Expr::star(Expr::union(b(), a())).is_sigma_star(2));
        assert!(!Expr::star(Expr::union(a(), a())).is_sigma_star(2));
        assert!(!Expr::union(a(), b()).is_sigma_star(2)); // not starred
        assert!(!Expr::star(a()).is_sigma_star(2)); // misses b
        assert!(Expr::star(a()).is_sigma_star(1)); // k=1 pattern is (a*)
    }

    #[test]
    fn sigma_star_k3_any_association() {
        let left = Expr::star(Expr::union(Expr::union(a(), b()), c()));
        let right = Expr::star(Expr::union(a(), Expr::union(b(), c())));
        assert!(left.is_sigma_star(3));
        assert!(right.is_sigma_star(3));
        // same trees read over a 2-letter alphabet are not the pattern
        assert!(!left.is_sigma_star(2));
    }

    #[test]
    fn count_sigma_star_by_enumeration() {
        // Over k=3 there must be exactly C_3 = 4!/2! = 12 pattern expressions
        // of size 6: all unions trees over permutations of {a,b,c}.
        let mut count = 0usize;
        crate::enumeration::enumerate_all(3, 6, |e| {
            if e.is_sigma_star(3) {
                count += 1;
            }
        })
        .unwrap();
        assert_eq!(count, 12);
    }

    #[test]
    fn sigma_star_set_is_exactly_the_two_patterns() {
        // k=2: across sizes 4..6 the only pattern expressions are (a+b)*
        // and (b+a)*, both of size 4.
        for n in 4..=6usize {
            let mut found = Vec::new();
            crate::enumeration::enumerate_all(2, n, |e| {
                if e.is_sigma_star(2) {
                    found.push(e.to_string());
                }
            })
            .unwrap();
            if n == 4 {
                assert_eq!(found, vec!["((a+b)*)", "((b+a)*)"]);
            } else {
                assert!(found.is_empty(), "unexpected patterns at n={n}: {found:?}");
            }
        }
    }

    #[test]
    fn absorbing_in_union() {
        let sigma = Expr::star(Expr::union(a(), b()));
        // ((a+b)* + a) contains the pattern as a union operand
        assert!(!Expr::union(sigma.clone(), a()).avoids_absorbing_in_union(2));
        assert!(!Expr::union(a(), sigma.clone()).avoids_absorbing_in_union(2));
        // ((a+b)* . a) does not
        assert!(Expr::concat(sigma.clone(), a()).avoids_absorbing_in_union(2));
        // the pattern itself is in the class
        assert!(sigma.avoids_absorbing_in_union(2));
        // nested occurrence is found
        let nested = Expr::star(Expr::concat(a(), Expr::union(sigma, b())));
        assert!(!nested.avoids_absorbing_in_union(2));
    }

    #[test]
    fn display_roundtrip_basics() {
        let e = Expr::star(Expr::union(a(), b()));
        assert_eq!(e.to_string(), "((a+b)*)");
        assert_eq!(parse("((a+b)*)", 2).unwrap(), e);
        assert_eq!(parse(" ( ( a + b ) * ) ", 2).unwrap(), e);
        assert_eq!(parse("@", 1).unwrap(), Expr::Epsilon);
        assert_eq!(parse("(a.b)", 2).unwrap(), Expr::concat(a(), b()));
    }

    #[test]
    fn parse_large_alphabet_letters() {
        assert_eq!(parse("s27", 30).unwrap(), Expr::Letter(27));
        assert_eq!(letter_name(27), "s27");
        assert_eq!(parse("s2", 30).unwrap(), Expr::Letter(2));
        // bare 's' is letter 19
        assert_eq!(parse("s", 20).unwrap(), Expr::Letter(19));
        assert_eq!(Expr::Letter(27).to_string(), "s27");
    }

    #[test]
    fn parse_errors() {
        let err = parse("(a+", 2).unwrap_err();
        assert_eq!(err.offset, 3);
        assert!(parse("c", 2).is_err()); // outside alphabet
        assert!(parse("", 2).is_err());
        assert!(parse("(a+b", 2).is_err());
        assert!(parse("(a%b)", 2).is_err());
        assert!(parse("(a+b))", 2).is_err());
        assert!(parse("s0", 5).is_err());
    }

    #[test]
    fn reversal_involution() {
        let e = parse("((a.(b+a)).(a*))", 2).unwrap();
        assert_eq!(e.reversed().reversed(), e);
        assert_eq!(e.reversed().size(), e.size());
    }
}
