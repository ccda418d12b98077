// SPDX-License-Identifier: Apache-2.0

//! Exact uniform random generation by the recursive method.
//!
//! Every choice is made with exact integer counts: the root production is
//! picked with probability proportional to its count, binary splits with
//! probability proportional to the product of child counts, and so on down
//! the tree. No floating point is involved anywhere, so the distribution is
//! exactly uniform over the class at the requested size.
//!
//! For the restricted class, union children come from the pattern-free
//! subclass. That subclass differs from the full class only at size `2k`,
//! where the absorbing patterns must be excluded; the exclusion is carried
//! through the decomposition (star of a full-alphabet union tree), keeping
//! the generator rejection-free. The union-tree exclusions are parametrized
//! by the set of letters still available, which is what the `pool` argument
//! threads through the recursion.
//!
//! Batch generation derives one independent ChaCha8 stream per item:
//! item `i` of a batch with seed `s` uses `ChaCha8Rng::seed_from_u64(s)`
//! with stream id `i`, so results do not depend on the parallelism level.

use std::fmt;

use num_bigint::{BigUint, RandBigInt};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expr::Expr;
use crate::series::{self, binomial, c_k};

/// Which expression class to sample from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExprClass {
    /// All expressions.
    Re,
    /// Expressions with no absorbing pattern inside a union.
    Rena,
}

impl fmt::Display for ExprClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExprClass::Re => "re",
            ExprClass::Rena => "rena",
        })
    }
}

/// What to sample: class, alphabet size, target tree size, base seed.
#[derive(Debug, Clone, Copy)]
pub struct SamplerSpec {
    pub k: u32,
    pub n: usize,
    pub class: ExprClass,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub enum SamplerError {
    /// The class has no expression of the requested size.
    ImpossibleSize { k: u32, n: usize, class: ExprClass },
}

impl fmt::Display for SamplerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SamplerError::ImpossibleSize { k, n, class } => write!(
                f,
                "no expression of size {n} exists in class {class} over {k} letters"
            ),
        }
    }
}

impl std::error::Error for SamplerError {}

/// Count tables for one `(k, n, class)`; reusable across draws and threads.
pub struct Sampler {
    k: u32,
    n: usize,
    class: ExprClass,
    /// class counts per size; for the restricted class also the
    /// pattern-free variant and per-production split sums
    counts: ClassCounts,
    /// `shape[s]` = number of union trees over a fixed set of `s` distinct
    /// letters = (2s−2)!/(s−1)!; only filled when pools can occur
    shape: Vec<BigUint>,
}

enum ClassCounts {
    Re {
        b: Vec<BigUint>,
        binary_w: Vec<BigUint>,
    },
    Rena {
        r: Vec<BigUint>,
        rp: Vec<BigUint>,
        union_w: Vec<BigUint>,
        concat_w: Vec<BigUint>,
    },
}

impl Sampler {
    pub fn new(k: u32, n: usize, class: ExprClass) -> Result<Sampler, SamplerError> {
        if k == 0 || n == 0 {
            return Err(SamplerError::ImpossibleSize { k, n, class });
        }
        let counts = match class {
            ExprClass::Re => {
                let b = series::coeffs_b(k, n);
                let binary_w: Vec<BigUint> = (0..=n)
                    .map(|m| {
                        if m == 0 {
                            BigUint::zero()
                        } else {
                            series::conv_self_at(&b, m - 1)
                        }
                    })
                    .collect();
                ClassCounts::Re { b, binary_w }
            }
            ExprClass::Rena => {
                let c = series::rena_counts(k, n);
                ClassCounts::Rena {
                    r: c.r,
                    rp: c.rp,
                    union_w: c.union_w,
                    concat_w: c.concat_w,
                }
            }
        };
        // union-tree shape counts, needed only when a size-2k subclass node
        // can occur inside the target size
        let shape = if matches!(class, ExprClass::Rena) && 2 * k as usize <= n {
            (0..=k as usize)
                .map(|s| {
                    if s == 0 {
                        BigUint::zero()
                    } else {
                        c_k(s as u32)
                    }
                })
                .collect()
        } else {
            Vec::new()
        };
        Ok(Sampler {
            k,
            n,
            class,
            counts,
            shape,
        })
    }

    pub fn spec(&self) -> (u32, usize, ExprClass) {
        (self.k, self.n, self.class)
    }

    /// Draw one expression of size exactly `n`, exactly uniformly.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Expr {
        match &self.counts {
            ClassCounts::Re { .. } => self.sample_re(self.n, rng),
            ClassCounts::Rena { .. } => self.sample_rena(self.n, rng),
        }
    }

    /// The `index`-th item of the batch with the given seed; independent of
    /// how the batch is scheduled.
    pub fn sample_indexed(&self, seed: u64, index: u64) -> Expr {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        self.sample(&mut rng)
    }

    /// Generate `count` expressions on `threads` worker threads (0 picks the
    /// default). The result only depends on `(seed, count)`.
    pub fn sample_batch(&self, seed: u64, count: u64, threads: usize) -> Vec<Expr> {
        let run = || {
            use rayon::prelude::*;
            (0..count)
                .into_par_iter()
                .map(|i| self.sample_indexed(seed, i))
                .collect()
        };
        if threads == 0 {
            run()
        } else {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .expect("thread pool");
            pool.install(run)
        }
    }

    // ── full class ────────────────────────────────────────────────────────

    fn sample_re<R: Rng>(&self, m: usize, rng: &mut R) -> Expr {
        let ClassCounts::Re { b, binary_w } = &self.counts else {
            unreachable!()
        };
        if m == 1 {
            return self.leaf(rng);
        }
        let mut x = rng.gen_biguint_below(&b[m]);
        // unions, concatenations, stars — same order as the count recurrence
        if x < binary_w[m] {
            let i = pick_split(&mut x, m, |i| &b[i] * &b[m - 1 - i]);
            return Expr::union(self.sample_re(i, rng), self.sample_re(m - 1 - i, rng));
        }
        x -= &binary_w[m];
        if x < binary_w[m] {
            let i = pick_split(&mut x, m, |i| &b[i] * &b[m - 1 - i]);
            return Expr::concat(self.sample_re(i, rng), self.sample_re(m - 1 - i, rng));
        }
        Expr::star(self.sample_re(m - 1, rng))
    }

    fn leaf<R: Rng>(&self, rng: &mut R) -> Expr {
        let x = rng.gen_range(0..=self.k);
        if x == 0 {
            Expr::Epsilon
        } else {
            Expr::Letter(x)
        }
    }

    // ── restricted class ──────────────────────────────────────────────────

    fn rena(&self) -> (&[BigUint], &[BigUint], &[BigUint], &[BigUint]) {
        let ClassCounts::Rena {
            r,
            rp,
            union_w,
            concat_w,
        } = &self.counts
        else {
            unreachable!()
        };
        (r, rp, union_w, concat_w)
    }

    fn sample_rena<R: Rng>(&self, m: usize, rng: &mut R) -> Expr {
        let (r, rp, union_w, concat_w) = self.rena();
        if m == 1 {
            return self.leaf(rng);
        }
        let mut x = rng.gen_biguint_below(&r[m]);
        if x < union_w[m] {
            let i = pick_split(&mut x, m, |i| &rp[i] * &rp[m - 1 - i]);
            return Expr::union(
                self.sample_rena_p(i, rng),
                self.sample_rena_p(m - 1 - i, rng),
            );
        }
        x -= &union_w[m];
        if x < concat_w[m] {
            let i = pick_split(&mut x, m, |i| &r[i] * &r[m - 1 - i]);
            return Expr::concat(self.sample_rena(i, rng), self.sample_rena(m - 1 - i, rng));
        }
        Expr::star(self.sample_rena(m - 1, rng))
    }

    /// Uniform over the pattern-free subclass: identical to the full class
    /// except at size `2k`, where the absorbing patterns are excluded.
    fn sample_rena_p<R: Rng>(&self, m: usize, rng: &mut R) -> Expr {
        let pattern_size = 2 * self.k as usize;
        if m != pattern_size {
            return self.sample_rena(m, rng);
        }
        let (r, rp, union_w, concat_w) = self.rena();
        let mut x = rng.gen_biguint_below(&rp[m]);
        if x < union_w[m] {
            let i = pick_split(&mut x, m, |i| &rp[i] * &rp[m - 1 - i]);
            return Expr::union(
                self.sample_rena_p(i, rng),
                self.sample_rena_p(m - 1 - i, rng),
            );
        }
        x -= &union_w[m];
        if x < concat_w[m] {
            let i = pick_split(&mut x, m, |i| &r[i] * &r[m - 1 - i]);
            return Expr::concat(self.sample_rena(i, rng), self.sample_rena(m - 1 - i, rng));
        }
        // star whose child is not a full-alphabet union tree
        let pool: Vec<u32> = (1..=self.k).collect();
        Expr::star(self.sample_rena_minus_trees(m - 1, &pool, rng))
    }

    /// Number of union trees of size `m` whose leaves are distinct letters
    /// from a pool of `kappa` letters.
    fn tree_count(&self, m: usize, kappa: usize) -> BigUint {
        if m.is_multiple_of(2) {
            return BigUint::zero();
        }
        let s = m.div_ceil(2);
        if s > kappa {
            return BigUint::zero();
        }
        binomial(kappa as u64, s as u64) * &self.shape[s]
    }

    /// Uniform over size-`m` class members that are not distinct-letter
    /// union trees over a subset of `pool`.
    fn sample_rena_minus_trees<R: Rng>(&self, m: usize, pool: &[u32], rng: &mut R) -> Expr {
        let (r, rp, union_w, concat_w) = self.rena();
        let excluded = self.tree_count(m, pool.len());
        if excluded.is_zero() {
            return self.sample_rena(m, rng);
        }
        if m == 1 {
            // ε or a letter outside the pool
            let options = 1 + self.k as usize - pool.len();
            let x = rng.gen_range(0..options);
            if x == 0 {
                return Expr::Epsilon;
            }
            let mut seen = 0usize;
            for letter in 1..=self.k {
                if pool.binary_search(&letter).is_err() {
                    seen += 1;
                    if seen == x {
                        return Expr::Letter(letter);
                    }
                }
            }
            unreachable!("pool exhausts the alphabet");
        }
        let s_total = m.div_ceil(2);
        let kappa = pool.len();
        let total = &r[m] - &excluded;
        let mut x = rng.gen_biguint_below(&total);

        // excluded trees are all union-rooted, so only that weight shrinks
        let union_reduced = &union_w[m] - &excluded;
        if x < union_reduced {
            let split_weight = |i: usize| -> BigUint {
                let j = m - 1 - i;
                let mut w = &rp[i] * &rp[j];
                if i % 2 == 1 && j % 2 == 1 {
                    let s_left = i.div_ceil(2);
                    let s_right = s_total - s_left;
                    if s_left <= kappa && s_right <= kappa - s_left {
                        w -= binomial(kappa as u64, s_left as u64)
                            * &self.shape[s_left]
                            * binomial((kappa - s_left) as u64, s_right as u64)
                            * &self.shape[s_right];
                    }
                }
                w
            };
            let i = pick_split(&mut x, m, split_weight);
            let j = m - 1 - i;
            // children of a union at these sizes coincide with the full
            // class (m − 2 < 2k), so exclusion bookkeeping is all that's left
            let d_left = self.tree_count(i, kappa);
            let branch_a = (&rp[i] - &d_left) * &rp[j];
            if x < branch_a {
                let l = self.sample_rena_minus_trees(i, pool, rng);
                let rgt = self.sample_rena(j, rng);
                return Expr::union(l, rgt);
            }
            // left child is a pool tree; the right child must avoid
            // completing it over the remaining letters
            let l = self.sample_pool_tree(i, pool, rng);
            let mut remaining: Vec<u32> = pool.to_vec();
            let mut used = Vec::new();
            collect_letters(&l, &mut used);
            remaining.retain(|v| !used.contains(v));
            let rgt = self.sample_rena_minus_trees(j, &remaining, rng);
            return Expr::union(l, rgt);
        }
        x -= &union_reduced;
        if x < concat_w[m] {
            let i = pick_split(&mut x, m, |i| &r[i] * &r[m - 1 - i]);
            return Expr::concat(self.sample_rena(i, rng), self.sample_rena(m - 1 - i, rng));
        }
        Expr::star(self.sample_rena(m - 1, rng))
    }

    /// Uniform distinct-letter union tree of size `m` over some subset of
    /// `pool`.
    fn sample_pool_tree<R: Rng>(&self, m: usize, pool: &[u32], rng: &mut R) -> Expr {
        let s = m.div_ceil(2);
        let subset = sample_subset(pool, s, rng);
        self.sample_tree_over(&subset, rng)
    }

    /// Uniform union tree whose leaves are exactly `set`.
    fn sample_tree_over<R: Rng>(&self, set: &[u32], rng: &mut R) -> Expr {
        let s = set.len();
        if s == 1 {
            return Expr::Letter(set[0]);
        }
        let mut x = rng.gen_biguint_below(&self.shape[s]);
        let mut s_left = 0usize;
        loop {
            s_left += 1;
            debug_assert!(s_left < s, "split weights must exhaust the shape count");
            let w =
                binomial(s as u64, s_left as u64) * &self.shape[s_left] * &self.shape[s - s_left];
            if x < w {
                break;
            }
            x -= w;
        }
        let left_set = sample_subset(set, s_left, rng);
        let right_set: Vec<u32> = set
            .iter()
            .copied()
            .filter(|v| !left_set.contains(v))
            .collect();
        Expr::union(
            self.sample_tree_over(&left_set, rng),
            self.sample_tree_over(&right_set, rng),
        )
    }
}

fn collect_letters(e: &Expr, out: &mut Vec<u32>) {
    match e {
        Expr::Letter(i) => out.push(*i),
        Expr::Union(l, r) | Expr::Concat(l, r) => {
            collect_letters(l, out);
            collect_letters(r, out);
        }
        Expr::Star(c) => collect_letters(c, out),
        Expr::Epsilon => {}
    }
}

/// Uniform `s`-element subset of `set`, by selection sampling with exact
/// integer draws.
fn sample_subset<R: Rng>(set: &[u32], s: usize, rng: &mut R) -> Vec<u32> {
    let mut out = Vec::with_capacity(s);
    let mut need = s;
    for (idx, &v) in set.iter().enumerate() {
        if need == 0 {
            break;
        }
        let remaining = set.len() - idx;
        if rng.gen_range(0..remaining) < need {
            out.push(v);
            need -= 1;
        }
    }
    debug_assert_eq!(out.len(), s);
    out
}

/// Choose a binary split `i ∈ [1, m−2]` with probability proportional to
/// `weight(i)`, walking the candidates from both ends since the mass
/// concentrates there. `x` must arrive uniform below the total weight and
/// leaves positioned inside the chosen cell.
fn pick_split(x: &mut BigUint, m: usize, weight: impl Fn(usize) -> BigUint) -> usize {
    let (mut lo, mut hi) = (1usize, m - 2);
    let mut from_low = true;
    loop {
        debug_assert!(lo <= hi, "split weights must exhaust the total");
        let i = if from_low { lo } else { hi };
        let w = weight(i);
        if *x < w {
            return i;
        }
        *x -= w;
        if from_low {
            lo += 1;
        } else {
            hi -= 1;
        }
        from_low = !from_low;
    }
}

/// One-shot draw per the spec record.
pub fn sample(spec: &SamplerSpec, rng: &mut impl Rng) -> Result<Expr, SamplerError> {
    Ok(Sampler::new(spec.k, spec.n, spec.class)?.sample(rng))
}
