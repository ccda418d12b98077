// SPDX-License-Identifier: Apache-2.0

//! Position automaton construction and the transition-counting functions.
//!
//! Letters are numbered 1..m left to right (the marked expression); the
//! automaton has states {0..m} with 0 initial. Transitions are
//! `(0, letter(j), j)` for `j` in First and `(i, letter(j), j)` for `(i, j)`
//! in Follow, so `|δ| = |First| + |Follow|` always.
//!
//! Two independent routes are provided and kept apart on purpose: the
//! set-level construction ([`position_sets`], [`build_glushkov`]) and the
//! count-level recursion ([`count_functions`]) which never materializes a
//! set. Their agreement is asserted by the test suites, not assumed.

use std::collections::HashMap;

use crate::expr::Expr;

/// First/Last/Follow of the marked expression, positions 1-based.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PositionSets {
    pub first: Vec<u32>,
    pub last: Vec<u32>,
    /// Sorted, deduplicated pairs.
    pub follow: Vec<(u32, u32)>,
    pub nullable: bool,
}

impl PositionSets {
    /// Size of `Follow ∪ Last×First`, the follow set the expression would
    /// have under a star.
    pub fn star_follow_len(&self) -> usize {
        let mut extended = self.follow.clone();
        for &i in &self.last {
            for &j in &self.first {
                extended.push((i, j));
            }
        }
        extended.sort_unstable();
        extended.dedup();
        extended.len()
    }
}

fn merge_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    // position ranges of siblings are disjoint and ordered
    let mut out = Vec::with_capacity(a.len() + b.len());
    out.extend_from_slice(a);
    out.extend_from_slice(b);
    out
}

/// Compute First, Last, Follow and nullability by structural induction.
pub fn position_sets(e: &Expr) -> PositionSets {
    let mut next = 1u32;
    sets_rec(e, &mut next)
}

fn sets_rec(e: &Expr, next: &mut u32) -> PositionSets {
    match e {
        Expr::Epsilon => PositionSets {
            nullable: true,
            ..Default::default()
        },
        Expr::Letter(_) => {
            let pos = *next;
            *next += 1;
            PositionSets {
                first: vec![pos],
                last: vec![pos],
                follow: Vec::new(),
                nullable: false,
            }
        }
        Expr::Union(l, r) => {
            let a = sets_rec(l, next);
            let b = sets_rec(r, next);
            let mut follow = a.follow;
            follow.extend(b.follow);
            PositionSets {
                first: merge_sorted(&a.first, &b.first),
                last: merge_sorted(&a.last, &b.last),
                follow,
                nullable: a.nullable || b.nullable,
            }
        }
        Expr::Concat(l, r) => {
            let a = sets_rec(l, next);
            let b = sets_rec(r, next);
            let mut follow = a.follow;
            follow.extend(b.follow.iter().copied());
            for &i in &a.last {
                for &j in &b.first {
                    follow.push((i, j));
                }
            }
            follow.sort_unstable();
            follow.dedup();
            let first = if a.nullable {
                merge_sorted(&a.first, &b.first)
            } else {
                a.first
            };
            let last = if b.nullable {
                merge_sorted(&a.last, &b.last)
            } else {
                b.last
            };
            PositionSets {
                first,
                last,
                follow,
                nullable: a.nullable && b.nullable,
            }
        }
        Expr::Star(c) => {
            let a = sets_rec(c, next);
            let mut follow = a.follow.clone();
            for &i in &a.last {
                for &j in &a.first {
                    follow.push((i, j));
                }
            }
            follow.sort_unstable();
            follow.dedup();
            PositionSets {
                first: a.first,
                last: a.last,
                follow,
                nullable: true,
            }
        }
    }
}

/// The position automaton: states `0..=m`, 0 initial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlushkovNfa {
    /// `m + 1` where `m` is the alphabetic size.
    pub state_count: u32,
    /// `(source, letter, target)`; the target always carries the letter.
    pub transitions: Vec<(u32, u32, u32)>,
    pub finals: Vec<u32>,
    /// Letter of position `j` at index `j - 1`.
    pub position_letters: Vec<u32>,
}

/// Letters of the expression in position order.
fn letters_in_order(e: &Expr, out: &mut Vec<u32>) {
    match e {
        Expr::Epsilon => {}
        Expr::Letter(i) => out.push(*i),
        Expr::Union(l, r) | Expr::Concat(l, r) => {
            letters_in_order(l, out);
            letters_in_order(r, out);
        }
        Expr::Star(c) => letters_in_order(c, out),
    }
}

/// Build the position automaton of `e`.
pub fn build_glushkov(e: &Expr) -> GlushkovNfa {
    let sets = position_sets(e);
    let mut position_letters = Vec::new();
    letters_in_order(e, &mut position_letters);
    let m = position_letters.len() as u32;

    let mut transitions = Vec::with_capacity(sets.first.len() + sets.follow.len());
    for &j in &sets.first {
        transitions.push((0, position_letters[(j - 1) as usize], j));
    }
    for &(i, j) in &sets.follow {
        transitions.push((i, position_letters[(j - 1) as usize], j));
    }

    let mut finals = Vec::with_capacity(sets.last.len() + 1);
    if sets.nullable {
        finals.push(0);
    }
    finals.extend_from_slice(&sets.last);

    GlushkovNfa {
        state_count: m + 1,
        transitions,
        finals,
        position_letters,
    }
}

impl GlushkovNfa {
    /// Subset simulation over the word (letters as 1-based indices).
    pub fn accepts(&self, word: &[u32]) -> bool {
        let n = self.state_count as usize;
        let mut current = vec![false; n];
        current[0] = true;
        for &c in word {
            let mut nextset = vec![false; n];
            let mut any = false;
            for &(src, letter, dst) in &self.transitions {
                if letter == c && current[src as usize] {
                    nextset[dst as usize] = true;
                    any = true;
                }
            }
            if !any {
                return false;
            }
            current = nextset;
        }
        self.finals.iter().any(|&s| current[s as usize])
    }
}

/// The counting functions evaluated without building sets:
/// `first = |First|`, `last = |Last|`, `follow = |Follow|`,
/// `star_follow = |Follow ∪ Last×First|`, `transitions = first + follow`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountFunctions {
    pub first: u64,
    pub last: u64,
    pub follow: u64,
    pub star_follow: u64,
    pub transitions: u64,
}

/// Compute the counting functions by the structural recursion. Unions of
/// position sets from distinct subtrees are disjoint, which is what makes
/// plain addition sound; the set-level agreement tests enforce it.
pub fn count_functions(e: &Expr) -> CountFunctions {
    let (f, s, e_cnt, e_star, _nullable) = counts_rec(e);
    CountFunctions {
        first: f,
        last: s,
        follow: e_cnt,
        star_follow: e_star,
        transitions: f + e_cnt,
    }
}

/// Returns (f, s, e, e*, nullable).
fn counts_rec(expr: &Expr) -> (u64, u64, u64, u64, bool) {
    match expr {
        Expr::Epsilon => (0, 0, 0, 0, true),
        Expr::Letter(_) => (1, 1, 0, 1, false),
        Expr::Union(l, r) => {
            let (f1, s1, e1, es1, n1) = counts_rec(l);
            let (f2, s2, e2, es2, n2) = counts_rec(r);
            let cross = s1 * f2 + s2 * f1;
            (f1 + f2, s1 + s2, e1 + e2, es1 + es2 + cross, n1 || n2)
        }
        Expr::Concat(l, r) => {
            let (f1, s1, e1, es1, n1) = counts_rec(l);
            let (f2, s2, e2, es2, n2) = counts_rec(r);
            let f = if n1 { f1 + f2 } else { f1 };
            let s = if n2 { s1 + s2 } else { s2 };
            let e = e1 + e2 + s1 * f2;
            // each side contributes its starred count exactly when the other
            // side is nullable
            let left = if n2 { es1 } else { e1 };
            let right = if n1 { es2 } else { e2 };
            let e_star = left + right + s1 * f2 + s2 * f1;
            (f, s, e, e_star, n1 && n2)
        }
        Expr::Star(c) => {
            let (f, s, _e, es, _n) = counts_rec(c);
            (f, s, es, es, true)
        }
    }
}

/// Reference language-membership procedure on the syntax tree, independent
/// of the automaton path. Memoized over (node, span).
pub fn ast_matches(e: &Expr, word: &[u32]) -> bool {
    let mut nodes = Vec::new();
    index_nodes(e, &mut nodes);
    let mut memo: HashMap<(usize, usize, usize), bool> = HashMap::new();
    matches_rec(
        e,
        node_id(e, &nodes),
        0,
        word.len(),
        word,
        &nodes,
        &mut memo,
    )
}

fn index_nodes(e: &Expr, nodes: &mut Vec<*const Expr>) {
    nodes.push(e as *const Expr);
    match e {
        Expr::Union(l, r) | Expr::Concat(l, r) => {
            index_nodes(l, nodes);
            index_nodes(r, nodes);
        }
        Expr::Star(c) => index_nodes(c, nodes),
        _ => {}
    }
}

fn node_id(e: &Expr, nodes: &[*const Expr]) -> usize {
    let ptr = e as *const Expr;
    nodes.iter().position(|&p| std::ptr::eq(p, ptr)).unwrap()
}

#[allow(clippy::too_many_arguments)]
fn matches_rec(
    e: &Expr,
    id: usize,
    i: usize,
    j: usize,
    word: &[u32],
    nodes: &[*const Expr],
    memo: &mut HashMap<(usize, usize, usize), bool>,
) -> bool {
    if let Some(&v) = memo.get(&(id, i, j)) {
        return v;
    }
    let result = match e {
        Expr::Epsilon => i == j,
        Expr::Letter(a) => j == i + 1 && word[i] == *a,
        Expr::Union(l, r) => {
            matches_rec(l, node_id(l, nodes), i, j, word, nodes, memo)
                || matches_rec(r, node_id(r, nodes), i, j, word, nodes, memo)
        }
        Expr::Concat(l, r) => {
            let lid = node_id(l, nodes);
            let rid = node_id(r, nodes);
            (i..=j).any(|mid| {
                matches_rec(l, lid, i, mid, word, nodes, memo)
                    && matches_rec(r, rid, mid, j, word, nodes, memo)
            })
        }
        Expr::Star(c) => {
            if i == j {
                true
            } else {
                let cid = node_id(c, nodes);
                // first block non-empty, remainder back on the star
                (i + 1..=j).any(|mid| {
                    matches_rec(c, cid, i, mid, word, nodes, memo)
                        && matches_rec(e, id, mid, j, word, nodes, memo)
                })
            }
        }
    };
    memo.insert((id, i, j), result);
    result
}
