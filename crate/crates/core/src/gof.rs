//! Goodness-of-fit tests used to validate samplers and ensembles.

use std::collections::BTreeMap;

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::config::OutputConfiguration;

/// Smallest expected count a chi-square bin may carry before pooling.
pub const MIN_EXPECTED: f64 = 5.0;

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    /// Bins after pooling.
    pub bins: usize,
}

/// Pearson chi-square of `observed` counts against probabilities `expected`.
///
/// Bins with zero probability are dropped (any count landing there gives
/// `p = 0`). The rest are sorted by expected count and merged greedily until
/// every pooled bin expects at least [`MIN_EXPECTED`].
pub fn chi_square(expected: &[f64], observed: &[u64]) -> ChiSquare {
    assert_eq!(expected.len(), observed.len());
    let total: u64 = observed.iter().sum();
    let n = total as f64;
    let impossible: u64 = expected
        .iter()
        .zip(observed)
        .filter(|(&p, _)| p <= 0.0)
        .map(|(_, &o)| o)
        .sum();
    let mut cells: Vec<(f64, f64)> = expected
        .iter()
        .zip(observed)
        .filter(|(&p, _)| p > 0.0)
        .map(|(&p, &o)| (p * n, o as f64))
        .collect();
    cells.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut pooled: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    for (e, o) in cells {
        acc.0 += e;
        acc.1 += o;
        if acc.0 >= MIN_EXPECTED {
            pooled.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.0 > 0.0 {
        match pooled.last_mut() {
            Some(last) => {
                last.0 += acc.0;
                last.1 += acc.1;
            }
            None => pooled.push(acc),
        }
    }

    let bins = pooled.len();
    let dof = bins.saturating_sub(1);
    if impossible > 0 {
        return ChiSquare {
            statistic: f64::INFINITY,
            dof,
            p_value: 0.0,
            bins,
        };
    }
    let statistic: f64 = pooled.iter().map(|&(e, o)| (o - e) * (o - e) / e).sum();
    let p_value = if dof == 0 {
        1.0
    } else {
        ChiSquared::new(dof as f64)
            .expect("positive degrees of freedom")
            .sf(statistic)
    };
    ChiSquare {
        statistic,
        dof,
        p_value,
        bins,
    }
}

/// [`chi_square`] over configurations. Observed configurations missing from
/// `exact` are treated as zero-probability bins.
pub fn chi_square_configurations(
    exact: &BTreeMap<OutputConfiguration, f64>,
    observed: &BTreeMap<OutputConfiguration, u64>,
) -> ChiSquare {
    let mut p: Vec<f64> = Vec::with_capacity(exact.len());
    let mut o: Vec<u64> = Vec::with_capacity(exact.len());
    for (m, &q) in exact {
        p.push(q);
        o.push(observed.get(m).copied().unwrap_or(0));
    }
    for (m, &c) in observed {
        if !exact.contains_key(m) {
            p.push(0.0);
            o.push(c);
        }
    }
    chi_square(&p, &o)
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct KolmogorovSmirnov {
    pub statistic: f64,
    pub p_value: f64,
}

/// Asymptotic 1% critical value of `√(nm/(n+m)) · D`.
pub const KS_CRITICAL_01: f64 = 1.628;

/// Survival function of the Kolmogorov distribution.
fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let k = k as f64;
        let term = (-2.0 * k * k * lambda * lambda).exp();
        sum += if k as u64 % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Two-sample Kolmogorov–Smirnov test.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> KolmogorovSmirnov {
    assert!(!a.is_empty() && !b.is_empty());
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let ne = (na * nb / (na + nb)).sqrt();
    let lambda = (ne + 0.12 + 0.11 / ne) * d;
    KolmogorovSmirnov {
        statistic: d,
        p_value: kolmogorov_sf(lambda),
    }
}
