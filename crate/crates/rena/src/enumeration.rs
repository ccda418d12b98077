// SPDX-License-Identifier: Apache-2.0

//! Exhaustive enumeration of all expressions of a given tree size.
//!
//! This is the brute-force oracle: every counted or aggregated quantity in
//! the crate (series coefficients, Glushkov set sizes, transition counts,
//! nullable counts) can be recomputed here by walking the complete set of
//! expressions, and the test suites assert bit-exact agreement.
//!
//! Enumeration order is deterministic: for size 1, `@` then the letters in
//! alphabet order; for larger sizes, stars first, then unions, then
//! concatenations, with binary splits visited by increasing left size.

use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::expr::Expr;
use crate::glushkov;
use crate::series;

/// Everything the aggregation oracle accumulates over a set of expressions.
/// Sums are exact; u128 is far beyond any reachable enumeration budget.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MeasureAggregate {
    pub count: u128,
    /// Σ alphabetic size (letter occurrences).
    pub letters: u128,
    /// Σ |First|.
    pub first: u128,
    /// Σ |Last|.
    pub last: u128,
    /// Σ |Follow|.
    pub follow: u128,
    /// Σ |Follow ∪ Last×First| (the starred-follow measure).
    pub star_follow: u128,
    /// Σ Glushkov transition counts, |First| + |Follow|.
    pub transitions: u128,
    /// Number of nullable expressions.
    pub nullable: u128,
}

impl MeasureAggregate {
    /// Accumulate one expression, deriving the position-set measures.
    pub fn add(&mut self, e: &Expr) {
        let sets = glushkov::position_sets(e);
        self.count += 1;
        self.letters += e.alphabetic_size() as u128;
        self.first += sets.first.len() as u128;
        self.last += sets.last.len() as u128;
        self.follow += sets.follow.len() as u128;
        self.star_follow += sets.star_follow_len() as u128;
        self.transitions += (sets.first.len() + sets.follow.len()) as u128;
        self.nullable += sets.nullable as u128;
    }

    /// Merge two partial aggregates (commutative monoid, safe under any
    /// partitioning of the enumeration).
    pub fn merge(&self, other: &MeasureAggregate) -> MeasureAggregate {
        MeasureAggregate {
            count: self.count + other.count,
            letters: self.letters + other.letters,
            first: self.first + other.first,
            last: self.last + other.last,
            follow: self.follow + other.follow,
            star_follow: self.star_follow + other.star_follow,
            transitions: self.transitions + other.transitions,
            nullable: self.nullable + other.nullable,
        }
    }
}

/// Default cap on the number of expressions an enumeration may visit.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Enumeration refused to start because the predicted visit count exceeds
/// the budget.
#[derive(Debug, Clone)]
pub struct BudgetError {
    pub k: u32,
    pub n: usize,
    pub predicted: BigUint,
    pub cap: u128,
}

impl fmt::Display for BudgetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "enumeration budget exceeded: k={}, n={} has {} expressions (cap {})",
            self.k, self.n, self.predicted, self.cap
        )
    }
}

impl std::error::Error for BudgetError {}

fn check_budget(k: u32, n: usize, cap: u128) -> Result<(), BudgetError> {
    let b = series::coeffs_b(k, n);
    let predicted = b[n].clone();
    match predicted.to_u128() {
        Some(v) if v <= cap => Ok(()),
        _ => Err(BudgetError {
            k,
            n,
            predicted,
            cap,
        }),
    }
}

/// Visit every expression of tree size exactly `n` over `{1..k}`, each once,
/// under the default budget. Returns the visit count.
pub fn enumerate_all(
    k: u32,
    n: usize,
    mut visitor: impl FnMut(&Expr),
) -> Result<u128, BudgetError> {
    enumerate_all_capped(k, n, DEFAULT_BUDGET, &mut visitor)
}

/// Same as [`enumerate_all`] with an explicit visit cap.
pub fn enumerate_all_capped(
    k: u32,
    n: usize,
    cap: u128,
    visitor: &mut dyn FnMut(&Expr),
) -> Result<u128, BudgetError> {
    assert!(k >= 1 && n >= 1, "enumerate_all requires k >= 1 and n >= 1");
    check_budget(k, n, cap)?;
    let mut count = 0u128;
    visit(k, n, &mut |e| {
        count += 1;
        visitor(e);
    });
    Ok(count)
}

fn visit(k: u32, n: usize, f: &mut dyn FnMut(&Expr)) {
    if n == 1 {
        f(&Expr::Epsilon);
        for i in 1..=k {
            f(&Expr::Letter(i));
        }
        return;
    }
    // stars over size n-1
    visit(k, n - 1, &mut |c| f(&Expr::star(c.clone())));
    // unions, then concatenations, splits by increasing left size
    for op in [0u8, 1] {
        for i in 1..=n.saturating_sub(2) {
            let j = n - 1 - i;
            visit(k, i, &mut |l| {
                visit(k, j, &mut |r| {
                    let e = if op == 0 {
                        Expr::union(l.clone(), r.clone())
                    } else {
                        Expr::concat(l.clone(), r.clone())
                    };
                    f(&e);
                });
            });
        }
    }
}

/// Aggregate the position-set measures over all size-`n` expressions that
/// satisfy `predicate`. Root-level work units (star, and each op × split)
/// run in parallel.
pub fn enumerate_filtered(
    k: u32,
    n: usize,
    cap: u128,
    predicate: impl Fn(&Expr) -> bool + Sync,
) -> Result<MeasureAggregate, BudgetError> {
    assert!(k >= 1 && n >= 1);
    check_budget(k, n, cap)?;
    if n == 1 {
        let mut agg = MeasureAggregate::default();
        let mut consider = |e: &Expr| {
            if predicate(e) {
                agg.add(e);
            }
        };
        consider(&Expr::Epsilon);
        for i in 1..=k {
            consider(&Expr::Letter(i));
        }
        return Ok(agg);
    }

    // One task per root production: (0) star, (op 1..=2, left size i).
    let mut tasks: Vec<(u8, usize)> = vec![(0, 0)];
    for op in [1u8, 2] {
        for i in 1..=n.saturating_sub(2) {
            tasks.push((op, i));
        }
    }
    let agg = tasks
        .par_iter()
        .map(|&(op, i)| {
            let mut acc = MeasureAggregate::default();
            let mut consider = |e: &Expr| {
                if predicate(e) {
                    acc.add(e);
                }
            };
            match op {
                0 => visit(k, n - 1, &mut |c| consider(&Expr::star(c.clone()))),
                _ => {
                    let j = n - 1 - i;
                    visit(k, i, &mut |l| {
                        visit(k, j, &mut |r| {
                            let e = if op == 1 {
                                Expr::union(l.clone(), r.clone())
                            } else {
                                Expr::concat(l.clone(), r.clone())
                            };
                            consider(&e);
                        });
                    });
                }
            }
            acc
        })
        .reduce(MeasureAggregate::default, |a, b| a.merge(&b));
    Ok(agg)
}

/// A divergence between the enumeration oracle and the series tables.
#[derive(Debug, Clone)]
pub struct OracleMismatch {
    pub k: u32,
    pub n: usize,
    pub what: String,
    pub oracle: String,
    pub series: String,
}

impl fmt::Display for OracleMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "oracle mismatch at k={}, n={}: {} — enumeration {}, series {}",
            self.k, self.n, self.what, self.oracle, self.series
        )
    }
}

impl std::error::Error for OracleMismatch {}

/// Errors from the combined oracle run.
#[derive(Debug)]
pub enum OracleError {
    Budget(BudgetError),
    Mismatch(Box<OracleMismatch>),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::Budget(e) => e.fmt(f),
            OracleError::Mismatch(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for OracleError {}

impl From<BudgetError> for OracleError {
    fn from(e: BudgetError) -> Self {
        OracleError::Budget(e)
    }
}

/// Run every oracle-vs-series equality at one size: coefficients of B, R,
/// R_eps, L, F, S, E, E*, T against exhaustive aggregates (set route), and
/// per-expression agreement between the counting recursion, the set sizes
/// and the built automaton. The series table must cover order `n`.
pub fn oracle_compare(
    k: u32,
    n: usize,
    cap: u128,
    table: &series::CoeffTable,
) -> Result<MeasureAggregate, OracleError> {
    assert!(table.k == k && table.n_max >= n);
    check_budget(k, n, cap)?;
    let mismatch = |what: &str, oracle: u128, series: &BigUint| -> OracleError {
        OracleError::Mismatch(Box::new(OracleMismatch {
            k,
            n,
            what: what.to_string(),
            oracle: oracle.to_string(),
            series: series.to_string(),
        }))
    };

    let mut all = MeasureAggregate::default();
    let mut rena = MeasureAggregate::default();
    let mut per_expr_failure: Option<String> = None;
    enumerate_all(k, n, |e| {
        if per_expr_failure.is_some() {
            return;
        }
        let sets = glushkov::position_sets(e);
        let counts = glushkov::count_functions(e);
        let nfa = glushkov::build_glushkov(e);
        let agree = counts.first as usize == sets.first.len()
            && counts.last as usize == sets.last.len()
            && counts.follow as usize == sets.follow.len()
            && counts.star_follow as usize == sets.star_follow_len()
            && nfa.transitions.len() as u64 == counts.transitions
            && nfa.state_count as usize == e.alphabetic_size() + 1;
        if !agree {
            per_expr_failure = Some(e.to_string());
            return;
        }
        all.add(e);
        if e.avoids_absorbing_in_union(k) {
            rena.add(e);
        }
    })?;
    if let Some(text) = per_expr_failure {
        return Err(OracleError::Mismatch(Box::new(OracleMismatch {
            k,
            n,
            what: format!("count/set/automaton disagreement on {text}"),
            oracle: String::new(),
            series: String::new(),
        })));
    }

    let checks: [(&str, u128, &BigUint); 9] = [
        ("B", all.count, &table.b[n]),
        ("R", rena.count, &table.r[n]),
        ("R_eps", rena.nullable, &table.r_eps[n]),
        ("L", rena.letters, &table.l[n]),
        ("F", rena.first, &table.f[n]),
        ("S", rena.last, &table.s[n]),
        ("E", rena.follow, &table.e[n]),
        ("E_star", rena.star_follow, &table.e_star[n]),
        ("T", rena.transitions, &table.t[n]),
    ];
    for (what, got, want) in checks {
        if BigUint::from(got) != *want {
            return Err(mismatch(what, got, want));
        }
    }
    Ok(rena)
}
