// SPDX-License-Identifier: Apache-2.0

//! Large-size sampling experiment: the empirical letters fraction over
//! uniformly sampled expressions converges to the asymptotic ratio.

use rena::asymptotics::Singularity;
use rena::sampler::{ExprClass, Sampler};
use rena::stats::sample_stats;

#[test]
fn letters_fraction_at_n2000_matches_theory() {
    let n = 2000usize;
    let samples = 400u64;
    let sampler = Sampler::new(2, n, ExprClass::Rena).unwrap();
    let batch = sampler.sample_batch(271_828, samples, 0);
    let stats = sample_stats(batch.iter().map(|e| e.alphabetic_size() as f64 / n as f64));
    let theory = Singularity::solve(2, 50).unwrap().letters_ratio();
    let dev = (stats.mean - theory).abs();
    // 3-sigma band plus a finite-size allowance (the exact ratio at n=2000
    // sits ~1.5e-4 above the asymptotic one), and a hard 2% cap
    assert!(
        dev <= 3.0 * stats.se + 2.0e-4,
        "letters fraction {:.6} vs theory {theory:.6} (se {:.2e})",
        stats.mean,
        stats.se
    );
    assert!(dev <= 0.02 * theory);
    // every draw is a bona fide class member of the exact size
    for e in &batch {
        assert_eq!(e.size(), n);
        assert!(e.avoids_absorbing_in_union(2));
    }
}

#[test]
fn transitions_fraction_tracks_lambda_trend() {
    // at finite n the transitions-per-size ratio sits well below λ (the
    // correction decays like n^{-1/2}); check the sampled value against the
    // exact-series finite-n ratio instead of the limit
    let n = 512usize;
    let table = rena::series::CoeffTable::build(2, n);
    let denom = &table.r[n] * (n as u64);
    let exact = rena::series::ratio_to_f64(&table.t[n], &denom);
    let sampler = Sampler::new(2, n, ExprClass::Rena).unwrap();
    let batch = sampler.sample_batch(31_415, 400, 0);
    let stats = sample_stats(
        batch
            .iter()
            .map(|e| rena::glushkov::count_functions(e).transitions as f64 / n as f64),
    );
    let dev = (stats.mean - exact).abs();
    assert!(
        dev <= 3.0 * stats.se,
        "transitions fraction {:.5} vs exact {exact:.5} (se {:.2e})",
        stats.mean,
        stats.se
    );
}
