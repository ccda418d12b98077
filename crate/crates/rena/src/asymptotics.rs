// SPDX-License-Identifier: Apache-2.0

//! Dominant-singularity analysis and asymptotic constants.
//!
//! The counting series of the restricted class is algebraic: it satisfies a
//! quadratic whose discriminant is
//! `Δ(z) = p(z) + 4 C_k z^{2k+1} h(z)` with `p = 1 − 2z − (7+8k)z²` and
//! `h = 1 − z − C_k z^{2k+1}`. `Δ` has exactly one root `η_k` inside
//! `]0, 1/√(8+8k)[`, bracketed by a guaranteed sign change, and everything
//! else follows from the local behaviour at that root: coefficient growth
//! `η_k^{−n}`, the letters ratio, and the per-size Glushkov transition
//! slope `λ_k` extracted as a numeric limit of `T(z)·√Δ(z)` as `z → η_k`.
//!
//! `C_k z^m` terms vary over thousands of orders of magnitude, so all
//! evaluation runs on arbitrary-precision floats with the exact integer
//! `C_k`; precision is raised automatically when the gap `η_k − ρ_k`
//! (which shrinks like `C_k ρ^{2k+1}`) must be resolved.

use std::fmt;

use astro_float::BigFloat;
use num_bigint::BigUint;
use num_traits::Zero;

use crate::hp::{cmp, is_neg, ln_to_f64, to_f64, Ctx};
use crate::series::{self, CoeffTable};
use crate::stats::ln_gamma;

/// Default working precision in decimal digits.
pub fn default_digits(k: u32) -> usize {
    if k <= 1000 {
        50
    } else {
        100
    }
}

#[derive(Debug, Clone)]
pub enum NumericError {
    /// The endpoint signs of the bracket are not (+, −); an evaluation bug,
    /// since the sign change is guaranteed.
    BracketFailure { k: u32 },
    /// Root refinement did not reach the target accuracy.
    NewtonStall { k: u32 },
    /// A generating-function linear system is numerically singular at `z`
    /// (too close to the singularity for the working precision).
    SingularSystem { z: f64 },
    /// Evaluation point outside `]0, η[`.
    InvalidPoint { z: f64 },
    /// Richardson extrapolants did not settle within tolerance.
    LambdaNonConvergence { k: u32, spread: f64 },
}

impl fmt::Display for NumericError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumericError::BracketFailure { k } => {
                write!(f, "bracket endpoints do not enclose the root for k={k}")
            }
            NumericError::NewtonStall { k } => write!(f, "root refinement stalled for k={k}"),
            NumericError::SingularSystem { z } => {
                write!(f, "generating-function system singular at z={z}")
            }
            NumericError::InvalidPoint { z } => write!(f, "z={z} outside ]0, eta["),
            NumericError::LambdaNonConvergence { k, spread } => {
                write!(
                    f,
                    "lambda extrapolation for k={k} not converged (spread {spread:e})"
                )
            }
        }
    }
}

impl std::error::Error for NumericError {}

/// The structured polynomials of the class, with the exact pattern count.
/// `pattern_count` may be overridden (in particular zeroed, which degenerates
/// every quantity to the unrestricted-class value).
#[derive(Debug, Clone)]
pub struct SpectralPolynomials {
    pub k: u32,
    pub pattern_count: BigUint,
}

impl SpectralPolynomials {
    pub fn new(k: u32) -> SpectralPolynomials {
        SpectralPolynomials {
            k,
            pattern_count: series::c_k(k),
        }
    }

    pub fn with_pattern_count(k: u32, pattern_count: BigUint) -> SpectralPolynomials {
        SpectralPolynomials { k, pattern_count }
    }

    /// `C_k z^m`.
    fn c_zpow(&self, ctx: &Ctx, z: &BigFloat, m: usize) -> BigFloat {
        if self.pattern_count.is_zero() {
            return ctx.from_u64(0);
        }
        let c = ctx.from_biguint(&self.pattern_count);
        ctx.mul(&c, &ctx.powi(z, m))
    }

    /// `p(z) = 1 − 2z − (7+8k)z²`.
    pub fn p_at(&self, ctx: &Ctx, z: &BigFloat) -> BigFloat {
        let one = ctx.from_u64(1);
        let t1 = ctx.mul(&ctx.from_u64(2), z);
        let t2 = ctx.mul(&ctx.from_u64(7 + 8 * self.k as u64), &ctx.mul(z, z));
        ctx.sub(&ctx.sub(&one, &t1), &t2)
    }

    /// `p'(z) = −2 − 2(7+8k)z`.
    fn dp_at(&self, ctx: &Ctx, z: &BigFloat) -> BigFloat {
        let t = ctx.mul(&ctx.from_u64(2 * (7 + 8 * self.k as u64)), z);
        ctx.neg(&ctx.add(&ctx.from_u64(2), &t))
    }

    /// `h(z) = 1 − z − C_k z^{2k+1}`.
    pub fn h_at(&self, ctx: &Ctx, z: &BigFloat) -> BigFloat {
        let u = self.c_zpow(ctx, z, 2 * self.k as usize + 1);
        ctx.sub(&ctx.sub(&ctx.from_u64(1), z), &u)
    }

    /// `Δ(z) = p(z) + 4 C_k z^{2k+1} h(z)`.
    pub fn delta_at(&self, ctx: &Ctx, z: &BigFloat) -> BigFloat {
        let u = self.c_zpow(ctx, z, 2 * self.k as usize + 1);
        let four_u = ctx.mul(&ctx.from_u64(4), &u);
        ctx.add(&self.p_at(ctx, z), &ctx.mul(&four_u, &self.h_at(ctx, z)))
    }

    /// `Δ'(z) = p'(z) + 4C(2k+1)z^{2k} h(z) + 4C z^{2k+1} h'(z)` with
    /// `h'(z) = −1 − (2k+1) C z^{2k}`.
    pub fn ddelta_at(&self, ctx: &Ctx, z: &BigFloat) -> BigFloat {
        let m = 2 * self.k as usize;
        let u1 = self.c_zpow(ctx, z, m); // C z^{2k}
        let u2 = ctx.mul(&u1, z); // C z^{2k+1}
        let exp1 = ctx.from_u64(m as u64 + 1);
        let hp = ctx.neg(&ctx.add(&ctx.from_u64(1), &ctx.mul(&exp1, &u1)));
        let term1 = ctx.mul(
            &ctx.mul(&ctx.from_u64(4), &exp1),
            &ctx.mul(&u1, &self.h_at(ctx, z)),
        );
        let term2 = ctx.mul(&ctx.mul(&ctx.from_u64(4), &u2), &hp);
        ctx.add(&ctx.add(&self.dp_at(ctx, z), &term1), &term2)
    }

    /// `g(z) = 2 − C z^{2k−1}(h(z) − C z^{2k+1})`.
    ///
    /// Solving the letters system against the closed form of the counting
    /// series, the denominator collapses to `√Δ` exactly and the numerator
    /// works out to `k z g(z)/2` with this `g`; the equivalent exact series
    /// identity `(2L − k C z^{2k})² Δ = k² z² g²` holds to every checked
    /// order with it (and fails with `C z^{2k−1}` as the subtrahend).
    pub fn g_at(&self, ctx: &Ctx, z: &BigFloat) -> BigFloat {
        let v = self.c_zpow(ctx, z, 2 * self.k as usize - 1);
        let w = self.c_zpow(ctx, z, 2 * self.k as usize + 1);
        let inner = ctx.sub(&self.h_at(ctx, z), &w);
        ctx.sub(&ctx.from_u64(2), &ctx.mul(&v, &inner))
    }

    /// `r(z) = 1 − z + 2 C z^{2k+1}` (numerator polynomial of the closed form).
    pub fn r_small_at(&self, ctx: &Ctx, z: &BigFloat) -> BigFloat {
        let u = self.c_zpow(ctx, z, 2 * self.k as usize + 1);
        ctx.add(
            &ctx.sub(&ctx.from_u64(1), z),
            &ctx.mul(&ctx.from_u64(2), &u),
        )
    }
}

/// `ρ_k = 1/(1 + √(8+8k))`, the singularity of the unrestricted class.
pub fn rho_value(ctx: &Ctx, k: u32) -> BigFloat {
    let s = ctx.sqrt(&ctx.from_u64(8 + 8 * k as u64));
    ctx.div(&ctx.from_u64(1), &ctx.add(&ctx.from_u64(1), &s))
}

/// Decimal digits needed to resolve `η_k − ρ_k ≈ C_k ρ^{2k+1}`.
fn sandwich_digits(k: u32) -> usize {
    let kf = k as f64;
    let rho = 1.0 / (1.0 + (8.0 + 8.0 * kf).sqrt());
    let ln_c = ln_gamma(2.0 * kf - 1.0) - ln_gamma(kf);
    let ln_gap = ln_c + (2.0 * kf + 1.0) * rho.ln();
    if ln_gap >= 0.0 {
        0
    } else {
        (-ln_gap / std::f64::consts::LN_10).ceil() as usize + 40
    }
}

/// A solved dominant singularity for one alphabet size.
pub struct Singularity {
    pub polys: SpectralPolynomials,
    pub ctx: Ctx,
    pub eta: BigFloat,
    pub rho: BigFloat,
    pub iterations: u32,
    pub residual_scaled: f64,
    pub bracket_width: f64,
    /// Set by [`Singularity::certify_sandwich`].
    pub log10_eta_minus_rho: Option<f64>,
}

impl Singularity {
    /// Locate `η_k` at the given working precision: bisection to a tight
    /// bracket, then Newton with bisection fallback.
    pub fn solve(k: u32, digits: usize) -> Result<Singularity, NumericError> {
        Self::solve_with(SpectralPolynomials::new(k), digits)
    }

    pub fn solve_with(
        polys: SpectralPolynomials,
        digits: usize,
    ) -> Result<Singularity, NumericError> {
        let k = polys.k;
        let ctx = Ctx::with_digits(digits);
        let hi0 = ctx.div(&ctx.from_u64(1), &ctx.sqrt(&ctx.from_u64(8 + 8 * k as u64)));
        // Δ(0) = 1 > 0; Δ at the right endpoint must be negative.
        if !is_neg(&polys.delta_at(&ctx, &hi0)) {
            return Err(NumericError::BracketFailure { k });
        }
        let mut lo = ctx.from_u64(0);
        let mut hi = hi0;
        let mut iterations = 0u32;

        // bisection to a ~1e-12 relative bracket, at cheap precision when
        // the target precision is high (Newton below does the real work)
        let bis_ctx = if digits > 60 {
            Ctx::with_digits(50)
        } else {
            ctx
        };
        for _ in 0..40 {
            let mid = bis_ctx.mul(&bis_ctx.add(&lo, &hi), &bis_ctx.from_f64(0.5));
            if is_neg(&polys.delta_at(&bis_ctx, &mid)) {
                hi = mid;
            } else {
                lo = mid;
            }
            iterations += 1;
        }

        // Newton from the bracket midpoint; each iterate is re-clamped into
        // the live bracket, which also keeps updating
        let mut x = ctx.mul(&ctx.add(&lo, &hi), &ctx.from_f64(0.5));
        let target_exp = -((ctx.prec as i64) - 16);
        let max_newton = 220;
        let mut converged = false;
        for _ in 0..max_newton {
            iterations += 1;
            let fx = polys.delta_at(&ctx, &x);
            if is_neg(&fx) {
                hi = x.clone();
            } else {
                lo = x.clone();
            }
            let dfx = polys.ddelta_at(&ctx, &x);
            let step = ctx.div(&fx, &dfx);
            // keep the current iterate once the prospective step falls
            // below the working precision
            let rel_exp =
                step.exponent().unwrap_or(i32::MIN) as i64 - x.exponent().unwrap_or(0) as i64;
            if step.is_zero() || rel_exp < target_exp {
                converged = true;
                break;
            }
            let mut next = ctx.sub(&x, &step);
            if cmp(&next, &lo) != std::cmp::Ordering::Greater
                || cmp(&next, &hi) != std::cmp::Ordering::Less
            {
                // Newton left the live bracket; bisect instead
                next = ctx.mul(&ctx.add(&lo, &hi), &ctx.from_f64(0.5));
            }
            x = next;
        }
        if !converged {
            return Err(NumericError::NewtonStall { k });
        }

        let rho = rho_value(&ctx, k);
        let residual = polys.delta_at(&ctx, &x);
        // scale: sum of absolute term magnitudes at η, all O(1)
        let scale = 3.0;
        let residual_scaled = match residual.exponent() {
            Some(e) => (2f64.powi(e.min(1000))) / scale,
            None => 0.0,
        };
        let bracket_width = to_f64(&ctx.sub(&hi, &lo)).abs();
        Ok(Singularity {
            polys,
            ctx,
            eta: x,
            rho,
            iterations,
            residual_scaled,
            bracket_width,
            log10_eta_minus_rho: None,
        })
    }

    pub fn k(&self) -> u32 {
        self.polys.k
    }

    /// Re-solve at sandwich-resolving precision if needed and verify the
    /// strict ordering `ρ < η < 1/√(8+8k)` on the computed values. Records
    /// `log10(η − ρ)`.
    pub fn certify_sandwich(&mut self) -> Result<(), NumericError> {
        let k = self.k();
        let needed = sandwich_digits(k).max(default_digits(k));
        if self.ctx.digits() < needed {
            let finer = Singularity::solve_with(self.polys.clone(), needed)?;
            *self = finer;
        }
        let ctx = self.ctx;
        let gap = ctx.sub(&self.eta, &self.rho);
        if is_neg(&gap) || gap.is_zero() {
            return Err(NumericError::NewtonStall { k });
        }
        let hi = ctx.div(&ctx.from_u64(1), &ctx.sqrt(&ctx.from_u64(8 + 8 * k as u64)));
        if cmp(&self.eta, &hi) != std::cmp::Ordering::Less {
            return Err(NumericError::NewtonStall { k });
        }
        self.log10_eta_minus_rho = Some(ln_to_f64(&gap) / std::f64::consts::LN_10);
        Ok(())
    }

    /// `h(ρ) > 0`, the inequality behind `η > ρ`, checked in log space:
    /// `ln C + (2k+1) ln ρ < ln(1 − ρ)`.
    pub fn h_positive_at_rho(&self) -> bool {
        if self.polys.pattern_count.is_zero() {
            return true;
        }
        let ctx = Ctx::with_digits(50);
        let rho = rho_value(&ctx, self.k());
        let ln_c = series::ln_biguint(&self.polys.pattern_count);
        let lhs = ln_c + (2.0 * self.k() as f64 + 1.0) * ln_to_f64(&rho);
        let one_minus = ctx.sub(&ctx.from_u64(1), &rho);
        lhs < ln_to_f64(&one_minus)
    }

    /// `ψ(η) = −η Δ'(η)`; positive at a simple root approached from above.
    pub fn psi(&self) -> BigFloat {
        let ctx = &self.ctx;
        ctx.neg(&ctx.mul(&self.eta, &self.polys.ddelta_at(ctx, &self.eta)))
    }

    pub fn g_value(&self) -> BigFloat {
        self.polys.g_at(&self.ctx, &self.eta)
    }

    /// Asymptotic letters-per-size ratio `4 k η² g(η)/ψ(η)`.
    pub fn letters_ratio(&self) -> f64 {
        let ctx = &self.ctx;
        let eta2 = ctx.mul(&self.eta, &self.eta);
        let num = ctx.mul(
            &ctx.mul(&ctx.from_u64(4 * self.k() as u64), &eta2),
            &self.g_value(),
        );
        to_f64(&ctx.div(&num, &self.psi()))
    }

    /// Working context capped at `max_digits`, with η rounded to match.
    fn capped(&self, max_digits: usize) -> (Ctx, BigFloat) {
        if self.ctx.digits() <= max_digits {
            (self.ctx, self.eta.clone())
        } else {
            let ctx = Ctx::with_digits(max_digits);
            (ctx, crate::hp::round_to(&ctx, &self.eta))
        }
    }

    /// Numeric values of every generating function at `0 < z < η`.
    pub fn gf_values(&self, z: &BigFloat) -> Result<GfValues, NumericError> {
        self.gf_values_in(&self.ctx, &self.eta, z)
    }

    fn gf_values_in(
        &self,
        ctx: &Ctx,
        eta: &BigFloat,
        z: &BigFloat,
    ) -> Result<GfValues, NumericError> {
        let zf = to_f64(z);
        if !matches!(cmp(z, &ctx.from_u64(0)), std::cmp::Ordering::Greater)
            || !matches!(cmp(z, eta), std::cmp::Ordering::Less)
        {
            return Err(NumericError::InvalidPoint { z: zf });
        }
        let k = self.k() as u64;
        let m = 2 * self.k() as usize;
        let polys = &self.polys;

        let delta = polys.delta_at(ctx, z);
        if is_neg(&delta) || delta.is_zero() {
            return Err(NumericError::InvalidPoint { z: zf });
        }
        let sqrt_delta = ctx.sqrt(&delta);
        let c2k = polys.c_zpow(ctx, z, m);
        let c2k1 = ctx.mul(&c2k, z);

        let four_z = ctx.mul(&ctx.from_u64(4), z);
        let r = ctx.div(&ctx.sub(&polys.r_small_at(ctx, z), &sqrt_delta), &four_z);
        let r_p = ctx.sub(&r, &c2k);

        let singular_guard = |v: &BigFloat| -> Result<(), NumericError> {
            match v.exponent() {
                Some(e) if (e as i64) > -((ctx.prec as i64) / 2) => Ok(()),
                _ => Err(NumericError::SingularSystem { z: zf }),
            }
        };

        // R_eps (1 − 2zR) = z + zR + zR_P² − zR²
        let zr = ctx.mul(z, &r);
        let den_eps = ctx.sub(&ctx.from_u64(1), &ctx.mul(&ctx.from_u64(2), &zr));
        singular_guard(&den_eps)?;
        let num_eps = {
            let t = ctx.add(z, &zr);
            let t = ctx.add(&t, &ctx.mul(z, &ctx.mul(&r_p, &r_p)));
            ctx.sub(&t, &ctx.mul(z, &ctx.mul(&r, &r)))
        };
        let r_eps = ctx.div(&num_eps, &den_eps);

        // F (1 − z − 2zR_P − zR_eps − zR) = kz − 2k C z^{2k+1} R_P
        let den_f = {
            let t = ctx.sub(&ctx.from_u64(1), z);
            let t = ctx.sub(&t, &ctx.mul(&ctx.mul(&ctx.from_u64(2), z), &r_p));
            let t = ctx.sub(&t, &ctx.mul(z, &r_eps));
            ctx.sub(&t, &zr)
        };
        singular_guard(&den_f)?;
        let kf = ctx.from_u64(k);
        let num_f = ctx.sub(
            &ctx.mul(&kf, z),
            &ctx.mul(&ctx.mul(&ctx.from_u64(2 * k), &c2k1), &r_p),
        );
        let f = ctx.div(&num_f, &den_f);
        let f_p = ctx.sub(&f, &ctx.mul(&kf, &c2k));

        // joint linear system for (E, E*)
        let two_z = ctx.mul(&ctx.from_u64(2), z);
        let a11 = {
            let t = ctx.sub(&ctx.from_u64(1), &ctx.mul(&two_z, &r_p));
            ctx.sub(&t, &ctx.mul(&two_z, &r))
        };
        let a12 = ctx.neg(z);
        let a21 = ctx.neg(&ctx.mul(&two_z, &ctx.sub(&r, &r_eps)));
        let a22 = {
            let t = ctx.sub(&ctx.from_u64(1), &ctx.mul(&two_z, &r_p));
            let t = ctx.sub(&t, &ctx.mul(&two_z, &r_eps));
            ctx.sub(&t, z)
        };
        let k2c = ctx.mul(&ctx.from_u64(2 * k * k), &c2k1);
        let b1 = ctx.sub(&ctx.mul(z, &ctx.mul(&f, &f)), &ctx.mul(&k2c, &r_p));
        let b2 = {
            let t = ctx.sub(&ctx.mul(&kf, z), &ctx.mul(&k2c, &r_p));
            let t = ctx.add(&t, &ctx.mul(&two_z, &ctx.mul(&f_p, &f_p)));
            ctx.add(&t, &ctx.mul(&two_z, &ctx.mul(&f, &f)))
        };
        let det = ctx.sub(&ctx.mul(&a11, &a22), &ctx.mul(&a12, &a21));
        singular_guard(&det)?;
        let e = ctx.div(&ctx.sub(&ctx.mul(&b1, &a22), &ctx.mul(&a12, &b2)), &det);
        let e_star = ctx.div(&ctx.sub(&ctx.mul(&a11, &b2), &ctx.mul(&a21, &b1)), &det);
        let t = ctx.add(&f, &e);

        Ok(GfValues {
            delta,
            r,
            r_p,
            r_eps,
            f,
            e,
            e_star,
            t,
        })
    }

    /// The transitions slope `λ_k = 8 η κ / ψ(η)`, with
    /// `κ = lim_{z→η⁻} T(z)·√Δ(z)` extracted on a geometric ladder
    /// `z_j = η(1 − δ₀ 2^{−j})` and Richardson-extrapolated in `(η − z)`
    /// with half-integer exponent steps (the error is a half-power series
    /// because of the `√Δ` factor).
    pub fn lambda(&self) -> Result<LambdaEstimate, NumericError> {
        // the ladder never needs sandwich-level precision; cap it
        let (ctx, eta) = self.capped(120);
        let ctx = &ctx;
        let k = self.k();
        const POINTS: usize = 12;
        let delta0 = 0.01f64;
        let mut ys = Vec::with_capacity(POINTS);
        for j in 0..POINTS {
            let dj = ctx.from_f64(delta0 * 2f64.powi(-(j as i32)));
            let z = ctx.mul(&eta, &ctx.sub(&ctx.from_u64(1), &dj));
            let gf = self.gf_values_in(ctx, &eta, &z)?;
            ys.push(ctx.mul(&gf.t, &ctx.sqrt(&gf.delta)));
        }
        // Neville table with factors 2^{s/2}: level s removes (η−z)^{s/2}
        let mut tab = ys;
        let mut last_two = (f64::NAN, f64::NAN);
        for s in 1..=8 {
            let fac = ctx.exp(&ctx.mul(&ctx.from_f64(s as f64 * 0.5), &ctx.ln(&ctx.from_u64(2))));
            let fm1 = ctx.sub(&fac, &ctx.from_u64(1));
            let mut next = Vec::with_capacity(tab.len() - 1);
            for j in 0..tab.len() - 1 {
                next.push(ctx.div(&ctx.sub(&ctx.mul(&fac, &tab[j + 1]), &tab[j]), &fm1));
            }
            tab = next;
            last_two = (last_two.1, to_f64(tab.last().unwrap()));
        }
        let kappa = tab.last().unwrap().clone();
        let spread = (last_two.1 - last_two.0).abs();
        let psi = ctx.neg(&ctx.mul(&eta, &self.polys.ddelta_at(ctx, &eta)));
        let lambda = to_f64(&ctx.div(&ctx.mul(&ctx.mul(&ctx.from_u64(8), &eta), &kappa), &psi));
        // tolerance on λ itself
        let psi_f = to_f64(&psi);
        let spread_lambda = spread * 8.0 * to_f64(&eta) / psi_f;
        if !spread_lambda.is_finite() || spread_lambda.abs() > 1e-4 {
            return Err(NumericError::LambdaNonConvergence {
                k,
                spread: spread_lambda,
            });
        }
        Ok(LambdaEstimate {
            value: lambda,
            kappa: to_f64(&kappa),
            spread: spread_lambda.abs(),
        })
    }

    /// Full per-k report (certifies the sandwich).
    pub fn report(&mut self) -> Result<SingularityReport, NumericError> {
        self.certify_sandwich()?;
        let lambda = self.lambda()?;
        Ok(SingularityReport {
            k: self.k(),
            rho: to_f64(&self.rho),
            eta: to_f64(&self.eta),
            psi: to_f64(&self.psi()),
            g: to_f64(&self.g_value()),
            letters_ratio: self.letters_ratio(),
            lambda: lambda.value,
            lambda_spread: lambda.spread,
            residual: self.residual_scaled,
            bracket_width: self.bracket_width,
            iterations: self.iterations,
            precision_digits: self.ctx.digits(),
            log10_eta_minus_rho: self.log10_eta_minus_rho.unwrap_or(f64::NAN),
        })
    }
}

/// Numeric generating-function values at one point.
pub struct GfValues {
    pub delta: BigFloat,
    pub r: BigFloat,
    pub r_p: BigFloat,
    pub r_eps: BigFloat,
    pub f: BigFloat,
    pub e: BigFloat,
    pub e_star: BigFloat,
    pub t: BigFloat,
}

#[derive(Debug, Clone, Copy)]
pub struct LambdaEstimate {
    pub value: f64,
    pub kappa: f64,
    pub spread: f64,
}

/// Everything the `theory` command prints for one k.
#[derive(Debug, Clone, Copy)]
pub struct SingularityReport {
    pub k: u32,
    pub rho: f64,
    pub eta: f64,
    pub psi: f64,
    pub g: f64,
    pub letters_ratio: f64,
    pub lambda: f64,
    pub lambda_spread: f64,
    pub residual: f64,
    pub bracket_width: f64,
    pub iterations: u32,
    pub precision_digits: usize,
    pub log10_eta_minus_rho: f64,
}

// ── spec-level convenience entry points ────────────────────────────────────

pub fn rho(k: u32) -> f64 {
    to_f64(&rho_value(&Ctx::with_digits(50), k))
}

pub fn eta(k: u32) -> Result<f64, NumericError> {
    Ok(to_f64(&Singularity::solve(k, default_digits(k))?.eta))
}

pub fn psi_at_eta(k: u32) -> Result<f64, NumericError> {
    Ok(to_f64(&Singularity::solve(k, default_digits(k))?.psi()))
}

pub fn letters_ratio(k: u32) -> Result<f64, NumericError> {
    Ok(Singularity::solve(k, default_digits(k))?.letters_ratio())
}

pub fn lambda(k: u32) -> Result<f64, NumericError> {
    Ok(Singularity::solve(k, default_digits(k))?.lambda()?.value)
}

/// Generating-function values at a real point `0 < z < η_k`, as f64.
/// `Singularity::gf_values` is the full-precision form.
pub fn evaluate_gf_at(k: u32, z: f64) -> Result<GfValuesReport, NumericError> {
    let sing = Singularity::solve(k, default_digits(k))?;
    let v = sing.gf_values(&sing.ctx.from_f64(z))?;
    Ok(GfValuesReport {
        r: to_f64(&v.r),
        r_p: to_f64(&v.r_p),
        r_eps: to_f64(&v.r_eps),
        f: to_f64(&v.f),
        e: to_f64(&v.e),
        e_star: to_f64(&v.e_star),
        t: to_f64(&v.t),
    })
}

/// f64 view of [`GfValues`].
#[derive(Debug, Clone, Copy)]
pub struct GfValuesReport {
    pub r: f64,
    pub r_p: f64,
    pub r_eps: f64,
    pub f: f64,
    pub e: f64,
    pub e_star: f64,
    pub t: f64,
}

/// A value carried as its natural log, with presentation helpers; the
/// asymptotic estimates overflow f64 well before n reaches useful sizes.
#[derive(Debug, Clone, Copy)]
pub struct LogValue {
    pub ln: f64,
}

impl LogValue {
    pub fn value(&self) -> f64 {
        self.ln.exp()
    }

    pub fn log10(&self) -> f64 {
        self.ln / std::f64::consts::LN_10
    }

    /// `(mantissa, exponent)` with value = mantissa × 10^exponent,
    /// 1 ≤ mantissa < 10.
    pub fn mantissa_exp10(&self) -> (f64, i64) {
        let l10 = self.log10();
        let e = l10.floor();
        (10f64.powf(l10 - e), e as i64)
    }

    /// Ratio of this estimate to an exact big-integer value.
    pub fn ratio_to(&self, exact: &BigUint) -> f64 {
        (self.ln - series::ln_biguint(exact)).exp()
    }
}

/// Coefficient estimate for the restricted class:
/// `[z^n]R ≈ √ψ/(8η√π) · n^{−3/2} η^{−n}`.
pub fn re_count_asymptotic(sing: &Singularity, n: usize) -> LogValue {
    let psi = to_f64(&sing.psi());
    let eta_f = to_f64(&sing.eta);
    let ln_eta = ln_to_f64(&sing.eta);
    let ln = 0.5 * psi.ln()
        - (8.0 * eta_f * std::f64::consts::PI.sqrt()).ln()
        - 1.5 * (n as f64).ln()
        - n as f64 * ln_eta;
    LogValue { ln }
}

/// Coefficient estimate for the unrestricted class:
/// `[z^n]B ≈ √(2−2ρ)/(8ρ√π) · n^{−3/2} ρ^{−n}`.
pub fn b_count_asymptotic(k: u32, n: usize) -> LogValue {
    let ctx = Ctx::with_digits(50);
    let rho = rho_value(&ctx, k);
    let rho_f = to_f64(&rho);
    let ln = 0.5 * (2.0 - 2.0 * rho_f).ln()
        - (8.0 * rho_f * std::f64::consts::PI.sqrt()).ln()
        - 1.5 * (n as f64).ln()
        - n as f64 * ln_to_f64(&rho);
    LogValue { ln }
}

/// Class-size ratio estimate `(√ψ/√(2−2ρ)) (ρ/η)^{n+1}`; tends to 0 in n.
pub fn class_ratio_asymptotic(sing: &Singularity, n: usize) -> LogValue {
    let ctx = &sing.ctx;
    let psi = to_f64(&sing.psi());
    let rho_f = to_f64(&sing.rho);
    // ln(ρ/η) at full precision: the gap underflows f64 for large k
    let ln_ratio = ln_to_f64(&ctx.div(&sing.rho, &sing.eta));
    let ln = 0.5 * (psi.ln() - (2.0 - 2.0 * rho_f).ln()) + (n as f64 + 1.0) * ln_ratio;
    LogValue { ln }
}

/// Letters-count estimate `[z^n]L ≈ kηg/(2√π√ψ) · n^{−1/2} η^{−n}`.
pub fn letters_count_asymptotic(sing: &Singularity, n: usize) -> LogValue {
    let psi = to_f64(&sing.psi());
    let g = to_f64(&sing.g_value());
    let eta_f = to_f64(&sing.eta);
    let ln = (sing.k() as f64 * eta_f * g).ln()
        - (2.0 * std::f64::consts::PI.sqrt() * psi.sqrt()).ln()
        - 0.5 * (n as f64).ln()
        - n as f64 * ln_to_f64(&sing.eta);
    LogValue { ln }
}

/// Series-side estimate of λ: the exact ratio `T_n/(n R_n)` at nodes
/// `n/2^{j/2}`, Richardson-extrapolated with half-integer exponents.
pub fn lambda_series_estimate(table: &CoeffTable, n: usize) -> f64 {
    assert!(n >= 16 && n <= table.n_max);
    let nodes: Vec<usize> = (0..5)
        .map(|j| ((n as f64) * 2f64.powf(-((4 - j) as f64) / 2.0)).round() as usize)
        .collect();
    let ratio = |m: usize| -> f64 {
        let denom = &table.r[m] * (m as u64);
        series::ratio_to_f64(&table.t[m], &denom)
    };
    let mut tab: Vec<f64> = nodes.iter().map(|&m| ratio(m)).collect();
    let q = 2f64.sqrt();
    for s in 1..nodes.len() {
        let fac = q.powf(s as f64 * 0.5);
        tab = (0..tab.len() - 1)
            .map(|j| (fac * tab[j + 1] - tab[j]) / (fac - 1.0))
            .collect();
    }
    tab[0]
}

/// Finite-n letters ratio `L_n/(n R_n)` extrapolated in 1/n over nodes
/// `n, n/2, n/4, n/8`.
pub fn letters_ratio_series_estimate(table: &CoeffTable, n: usize) -> f64 {
    assert!(n >= 16 && n <= table.n_max);
    let ratio = |m: usize| -> f64 {
        let denom = &table.r[m] * (m as u64);
        series::ratio_to_f64(&table.l[m], &denom)
    };
    let mut tab: Vec<f64> = (0..4).map(|j| ratio(n >> (3 - j))).collect();
    for s in 1..4 {
        let fac = 2f64.powi(s);
        tab = (0..tab.len() - 1)
            .map(|j| (fac * tab[j + 1] - tab[j]) / (fac - 1.0))
            .collect();
    }
    tab[0]
}

/// Evaluate a truncated series at `z` by Horner's rule.
pub fn series_eval(coeffs: &[BigUint], z: &BigFloat, ctx: &Ctx) -> BigFloat {
    let mut acc = ctx.from_u64(0);
    for c in coeffs.iter().rev() {
        acc = ctx.mul(&acc, z);
        if !c.is_zero() {
            acc = ctx.add(&acc, &ctx.from_biguint(c));
        }
    }
    acc
}

/// Stirling-style bounds on the pattern count, compared in log space:
/// `√(2π) 2^{2k−3/2}(k−1)^{k−1}/e^k ≤ C_k ≤ 2^{2k−3/2}(k−1)^{k−1}/(√(2π) e^{k−2})`.
pub fn stirling_bounds(k: u32) -> (f64, f64, f64) {
    assert!(k >= 2);
    let kf = k as f64;
    let ln2pi_half = 0.5 * (2.0 * std::f64::consts::PI).ln();
    let base = (2.0 * kf - 1.5) * std::f64::consts::LN_2 + (kf - 1.0) * (kf - 1.0).ln();
    let lower = ln2pi_half + base - kf;
    let upper = base - ln2pi_half - (kf - 2.0);
    let exact = series::ln_biguint(&series::c_k(k));
    (lower, exact, upper)
}

pub fn stirling_bounds_check(k: u32) -> bool {
    let (lower, exact, upper) = stirling_bounds(k);
    lower <= exact && exact <= upper
}

/// One row of the decay table `C_k k^t η_k^{2k+s}` (log10).
#[derive(Debug, Clone, Copy)]
pub struct DecayRow {
    pub k: u32,
    pub log10_value: f64,
}

/// Log-space table of `C_k k^t η_k^{2k+s}` for k = 2..=k_max; the sequence
/// tends to 0 for every fixed (t, s).
pub fn lemma3_decay_check(k_max: u32, t: f64, s: f64) -> Result<Vec<DecayRow>, NumericError> {
    assert!(k_max >= 4);
    let mut rows = Vec::new();
    for k in 2..=k_max {
        let sing = Singularity::solve(k, default_digits(k))?;
        let ln_c = series::ln_biguint(&series::c_k(k));
        let ln_eta = ln_to_f64(&sing.eta);
        let ln_v = ln_c + t * (k as f64).ln() + (2.0 * k as f64 + s) * ln_eta;
        rows.push(DecayRow {
            k,
            log10_value: ln_v / std::f64::consts::LN_10,
        });
    }
    Ok(rows)
}
