// SPDX-License-Identifier: Apache-2.0

//! Thin context around `astro-float` for fixed-precision real arithmetic.
//!
//! Every operation takes the precision from the context, so call sites stay
//! readable. Transcendental functions share a per-thread constants cache.

use std::cell::RefCell;

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::BigUint;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

/// Arithmetic context: precision in bits, fixed rounding.
#[derive(Debug, Clone, Copy)]
pub struct Ctx {
    /// Mantissa precision in bits.
    pub prec: usize,
}

/// Guard bits added on top of the requested decimal digits.
const GUARD_BITS: usize = 64;

impl Ctx {
    /// Context with at least `digits` decimal digits of precision.
    pub fn with_digits(digits: usize) -> Ctx {
        let bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + GUARD_BITS;
        Ctx { prec: bits }
    }

    pub fn digits(&self) -> usize {
        ((self.prec - GUARD_BITS) as f64 / std::f64::consts::LOG2_10).floor() as usize
    }

    const RM: RoundingMode = RoundingMode::ToEven;

    pub fn from_f64(&self, v: f64) -> BigFloat {
        BigFloat::from_f64(v, self.prec)
    }

    pub fn from_u64(&self, v: u64) -> BigFloat {
        BigFloat::from_u64(v, self.prec)
    }

    /// Exact value of a big integer, rounded to the context precision.
    pub fn from_biguint(&self, v: &BigUint) -> BigFloat {
        if v.bits() == 0 {
            return BigFloat::from_u64(0, self.prec);
        }
        // keep only the words that matter at this precision
        let words = v.to_u64_digits();
        let keep = (self.prec + 64) / 64 + 1;
        let (slice, dropped) = if words.len() > keep {
            (&words[words.len() - keep..], words.len() - keep)
        } else {
            (&words[..], 0)
        };
        let exp = (words.len() * 64) as i64 - (dropped * 64) as i64;
        debug_assert!(exp <= i32::MAX as i64);
        let mut f = BigFloat::from_words(slice, Sign::Pos, exp as i32);
        if dropped > 0 {
            // value = slice/2^(64·len(slice)) · 2^exp · 2^(64·dropped)
            f = f.mul(&self.pow2(64 * dropped as i64), self.prec, Self::RM);
        }
        f
    }

    /// `2^e` for moderate `e`.
    pub fn pow2(&self, e: i64) -> BigFloat {
        let mut f = BigFloat::from_u64(1, self.prec);
        f.set_exponent(1 + e as i32);
        f
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.prec, Self::RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.prec, Self::RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.prec, Self::RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.prec, Self::RM)
    }

    pub fn neg(&self, a: &BigFloat) -> BigFloat {
        a.neg()
    }

    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.prec, Self::RM)
    }

    pub fn powi(&self, a: &BigFloat, n: usize) -> BigFloat {
        a.powi(n, self.prec, Self::RM)
    }

    pub fn ln(&self, a: &BigFloat) -> BigFloat {
        CONSTS.with(|cc| a.ln(self.prec, Self::RM, &mut cc.borrow_mut()))
    }

    pub fn exp(&self, a: &BigFloat) -> BigFloat {
        CONSTS.with(|cc| a.exp(self.prec, Self::RM, &mut cc.borrow_mut()))
    }

    pub fn pi(&self) -> BigFloat {
        CONSTS.with(|cc| cc.borrow_mut().pi(self.prec, Self::RM))
    }

    /// Linear combination `a·x + b`.
    pub fn mul_add(&self, a: &BigFloat, x: &BigFloat, b: &BigFloat) -> BigFloat {
        self.add(&self.mul(a, x), b)
    }
}

/// Round a value down to the context precision.
pub fn round_to(ctx: &Ctx, v: &BigFloat) -> BigFloat {
    let mut out = v.clone();
    let _ = out.set_precision(ctx.prec, RoundingMode::ToEven);
    out
}

/// Total-order comparison; NaN is a logic error here.
pub fn cmp(a: &BigFloat, b: &BigFloat) -> std::cmp::Ordering {
    let c = a.cmp(b).expect("NaN in high-precision comparison");
    c.cmp(&0)
}

pub fn is_neg(a: &BigFloat) -> bool {
    a.is_negative() && !a.is_zero()
}

/// Lossy conversion to f64, saturating on exponent overflow.
pub fn to_f64(a: &BigFloat) -> f64 {
    if a.is_zero() {
        return 0.0;
    }
    if a.is_inf_pos() {
        return f64::INFINITY;
    }
    if a.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    let (words, _n, sign, exp, _inexact) = a.as_raw_parts().expect("finite value");
    let len = words.len();
    let top = words[len - 1] as f64;
    let next = if len >= 2 { words[len - 2] as f64 } else { 0.0 };
    // value = (fraction of the word array) × 2^exp
    let frac = top / 2f64.powi(64) + next / 2f64.powi(128);
    let v = frac * 2f64.powi(exp);
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

/// Natural log as f64 for values whose exponent may exceed f64 range.
pub fn ln_to_f64(a: &BigFloat) -> f64 {
    assert!(!a.is_zero() && !is_neg(a));
    let (words, _n, _sign, exp, _inexact) = a.as_raw_parts().expect("finite value");
    let len = words.len();
    let top = words[len - 1] as f64;
    let next = if len >= 2 { words[len - 2] as f64 } else { 0.0 };
    let frac = top / 2f64.powi(64) + next / 2f64.powi(128);
    frac.ln() + exp as f64 * std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    #[test]
    fn roundtrips_and_arithmetic() {
        let ctx = Ctx::with_digits(50);
        let two = ctx.from_u64(2);
        let s = ctx.sqrt(&two);
        let back = ctx.mul(&s, &s);
        let err = to_f64(&ctx.sub(&back, &two)).abs();
        assert!(err < 1e-45, "sqrt roundtrip error {err}");
        assert!((to_f64(&s) - 1.4142135623730951).abs() < 1e-15);
    }

    #[test]
    fn big_integer_conversion() {
        let ctx = Ctx::with_digits(60);
        let v = BigUint::from(10u32).pow(40) + BigUint::from(7u32);
        let f = ctx.from_biguint(&v);
        let ln = ln_to_f64(&f);
        assert!((ln - 40.0 * 10f64.ln()).abs() < 1e-9);
        // small values are exact
        let small = ctx.from_biguint(&BigUint::from(123456789u64));
        assert_eq!(to_f64(&small), 123456789.0);
    }

    #[test]
    fn huge_exponents_survive() {
        let ctx = Ctx::with_digits(50);
        let tiny = ctx.powi(&ctx.from_f64(0.169), 20001);
        assert!(!tiny.is_zero());
        let ln = ln_to_f64(&tiny);
        assert!((ln - 20001.0 * 0.169f64.ln()).abs() < 1e-6);
        assert_eq!(to_f64(&tiny), 0.0); // underflows f64, saturates to zero
    }

    #[test]
    fn ln_exp_inverse() {
        let ctx = Ctx::with_digits(50);
        let x = ctx.from_f64(0.37);
        let y = ctx.exp(&ctx.ln(&x));
        assert!(to_f64(&ctx.sub(&y, &x)).abs() < 1e-45);
    }
}
