// SPDX-License-Identifier: Apache-2.0

//! Minimal statistics kit: chi-square goodness of fit against a uniform
//! support, and running mean / standard error for sampled measures.

/// Natural log of the gamma function (Lanczos, g = 7, 9 coefficients).
#[allow(clippy::excessive_precision)]
pub fn ln_gamma(x: f64) -> f64 {
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = COEF[0];
    let t = x + 7.5;
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Regularized lower incomplete gamma P(a, x) by series expansion.
fn gamma_p_series(a: f64, x: f64) -> f64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut n = a;
    for _ in 0..500 {
        n += 1.0;
        term *= x / n;
        sum += term;
        if term.abs() < sum.abs() * 1e-16 {
            break;
        }
    }
    sum * (-x + a * x.ln() - ln_gamma(a)).exp()
}

/// Regularized upper incomplete gamma Q(a, x) by Lentz continued fraction.
fn gamma_q_cf(a: f64, x: f64) -> f64 {
    let tiny = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h * (-x + a * x.ln() - ln_gamma(a)).exp()
}

/// Upper tail Q(a, x) = 1 − P(a, x) of the regularized incomplete gamma.
pub fn gamma_q(a: f64, x: f64) -> f64 {
    assert!(a > 0.0 && x >= 0.0);
    if x == 0.0 {
        1.0
    } else if x < a + 1.0 {
        1.0 - gamma_p_series(a, x)
    } else {
        gamma_q_cf(a, x)
    }
}

/// Chi-square upper-tail probability for `stat` with `df` degrees of freedom.
pub fn chi_square_pvalue(stat: f64, df: f64) -> f64 {
    gamma_q(df / 2.0, stat / 2.0)
}

/// Goodness-of-fit of observed counts against the uniform distribution over
/// the support. Returns the statistic and its p-value (df = cells − 1).
pub fn chi_square_uniform(observed: &[u64]) -> (f64, f64) {
    let cells = observed.len();
    assert!(cells >= 2, "need at least two cells");
    let total: u64 = observed.iter().sum();
    let expected = total as f64 / cells as f64;
    let stat: f64 = observed
        .iter()
        .map(|&o| {
            let d = o as f64 - expected;
            d * d / expected
        })
        .sum();
    (stat, chi_square_pvalue(stat, (cells - 1) as f64))
}

/// Mean, sample standard deviation and standard error of the mean.
#[derive(Debug, Clone, Copy)]
pub struct SampleStats {
    pub n: usize,
    pub mean: f64,
    pub sd: f64,
    pub se: f64,
}

pub fn sample_stats(values: impl IntoIterator<Item = f64>) -> SampleStats {
    let mut n = 0usize;
    let mut mean = 0.0f64;
    let mut m2 = 0.0f64;
    for v in values {
        n += 1;
        let d = v - mean;
        mean += d / n as f64;
        m2 += d * (v - mean);
    }
    let var = if n > 1 { m2 / (n as f64 - 1.0) } else { 0.0 };
    let sd = var.sqrt();
    SampleStats {
        n,
        mean,
        sd,
        se: if n > 0 { sd / (n as f64).sqrt() } else { 0.0 },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_gamma_known_values() {
        assert!((ln_gamma(1.0)).abs() < 1e-13);
        assert!((ln_gamma(2.0)).abs() < 1e-13);
        assert!((ln_gamma(5.0) - 24f64.ln()).abs() < 1e-12);
        assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-13);
    }

    #[test]
    fn chi_square_reference_points() {
        // classic critical values: P(X² > 3.841) = 0.05 at df=1,
        // P(X² > 18.307) = 0.05 at df=10
        assert!((chi_square_pvalue(3.841, 1.0) - 0.05).abs() < 2e-4);
        assert!((chi_square_pvalue(18.307, 10.0) - 0.05).abs() < 2e-4);
        // large df: the statistic near df has p near 0.5
        let p = chi_square_pvalue(999.33, 1000.0);
        assert!((0.4..=0.6).contains(&p), "p = {p}");
    }

    #[test]
    fn uniform_fit() {
        let (_, p) = chi_square_uniform(&[28, 31, 40, 35]);
        assert!((p - 0.49).abs() < 0.01, "p = {p}");
        // grossly non-uniform data must fail hard
        let (_, p_bad) = chi_square_uniform(&[100, 1, 1, 1]);
        assert!(p_bad < 1e-10);
    }

    #[test]
    fn stats_accumulator() {
        let s = sample_stats([1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.n, 4);
        assert!((s.mean - 2.5).abs() < 1e-12);
        assert!((s.sd - (5.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!((s.se - s.sd / 2.0).abs() < 1e-12);
    }
}
