//! Exact sampling from the N-boson output distribution.
//!
//! Single bosons enter ports `0..N`. A uniformly random permutation `π` of the
//! inputs is drawn first; output ports are then drawn one at a time from
//!
//! ```text
//! p(l_1..l_K | π) = |per U[π(1..K) | l_1..l_K]|² / K!
//! ```
//!
//! whose ratio at consecutive `K` is the conditional law of `l_K`. Averaging
//! over `π` makes the final sequence distributed as `|per|²/N!`, and the
//! collapsed configuration as `|per|²/∏ m_l!`.
//!
//! At step `K` the Laplace expansion along the new column,
//! `per = Σ_α U_{π(α), l} · per_α`, needs the `K` sub-permanents `per_α` of the
//! prefix block with row `π(α)` removed. They share one reduced expansion over
//! the prefix's distinct ports; prefix and suffix products of the row sums give
//! every `per_α` at once.

mod batch;
mod oracle;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::config::OutputConfiguration;
use crate::error::{Error, Result};
use crate::matrix::{check_permutation, ComplexMatrix, UnitaryMatrix};
use crate::permanent::repeated::{expand, Expansion};

pub use batch::{sample_batch, SampleBatch, SampleSeed};
pub use oracle::{brute_force_distribution, total_variation, ORACLE_CONFIG_LIMIT};

/// Ordered output ports `(l_1, …, l_N)` of one sample (0-based), with the
/// permutation it was drawn under.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PortSequence {
    pub ports: Vec<usize>,
    pub permutation: Vec<usize>,
    pub seed: Option<SampleSeed>,
}

impl PortSequence {
    pub fn configuration(&self, modes: usize) -> OutputConfiguration {
        OutputConfiguration::from_ports(modes, &self.ports).expect("ports are in range")
    }
}

/// Work done while computing one vector of conditional weights.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct StepCounts {
    /// Boson index `K` (1-based) being placed.
    pub step: usize,
    /// Distinct ports in the prefix.
    pub distinct: usize,
    pub states: u64,
    pub gray_steps: u64,
    pub row_updates: u64,
    /// Complex multiply-adds forming `Σ_α U_{π(α),l} per_α` for every `l`.
    pub weight_terms: u64,
}

/// Uniform permutation of `0..n`.
pub fn sample_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Vec<usize>> {
    if n == 0 {
        return Err(Error::InvalidBosonCount(0));
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    Ok(perm)
}

/// Unnormalized conditional weights of the next port given `prefix`.
///
/// `w_l = |per U[π(1..K) | prefix, l]|²` with `K = prefix.len() + 1`, which is
/// `K! · p(prefix, l | π)`.
pub fn conditional_weights(
    u: &UnitaryMatrix,
    permutation: &[usize],
    prefix: &[usize],
) -> Result<Vec<f64>> {
    conditional_weights_counted(u, permutation, prefix).map(|(w, _)| w)
}

pub(crate) fn conditional_weights_counted(
    u: &UnitaryMatrix,
    permutation: &[usize],
    prefix: &[usize],
) -> Result<(Vec<f64>, StepCounts)> {
    let n = permutation.len();
    let modes = u.dim();
    check_permutation(permutation)?;
    if n > modes {
        return Err(Error::UnsupportedRegime { bosons: n, modes });
    }
    if prefix.len() >= n {
        return Err(Error::DimensionMismatch(format!(
            "prefix of length {} leaves no boson to place among {n}",
            prefix.len()
        )));
    }
    if let Some(&l) = prefix.iter().find(|&&l| l >= modes) {
        return Err(Error::IndexOutOfRange {
            index: l,
            bound: modes,
        });
    }
    let k = prefix.len() + 1;
    let rows = &permutation[..k];
    let mut counts = StepCounts {
        step: k,
        ..Default::default()
    };

    let minors = if prefix.is_empty() {
        counts.states = 1;
        vec![Complex64::new(1.0, 0.0)]
    } else {
        let prefix_cfg = OutputConfiguration::from_ports(modes, prefix)?;
        let (ports, mult): (Vec<usize>, Vec<usize>) =
            prefix_cfg.occupied_ports().into_iter().unzip();
        counts.distinct = ports.len();
        let m = u.matrix();
        let block = ComplexMatrix::from_vec(
            k,
            ports.len(),
            rows.iter()
                .flat_map(|&r| ports.iter().map(move |&l| m[(r, l)]))
                .collect(),
        )?;
        let mut acc = vec![Complex64::new(0.0, 0.0); k];
        let mut suffix = vec![Complex64::new(0.0, 0.0); k + 1];
        let (pass, scale) = expand(&block, &mult, Expansion::Reduced, |x, sums| {
            suffix[k] = x;
            for a in (0..k).rev() {
                suffix[a] = suffix[a + 1] * sums[a];
            }
            let mut before = Complex64::new(1.0, 0.0);
            for a in 0..k {
                acc[a] += before * suffix[a + 1];
                before *= sums[a];
            }
        })?;
        counts.states = pass.states;
        counts.gray_steps = pass.gray_steps;
        counts.row_updates = pass.row_updates;
        acc.iter_mut().for_each(|z| *z *= scale);
        acc
    };

    let m = u.matrix();
    let weights = (0..modes)
        .map(|l| {
            let amp: Complex64 = rows.iter().zip(&minors).map(|(&r, &p)| m[(r, l)] * p).sum();
            amp.norm_sqr()
        })
        .collect();
    counts.weight_terms = (modes * k) as u64;
    Ok((weights, counts))
}

/// Index drawn with probability proportional to `weights` (negative round-off
/// clamped to zero). Zero-weight entries are never returned.
fn draw_index<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().map(|w| w.max(0.0)).sum();
    let target = rng.random::<f64>() * total;
    let mut cum = 0.0;
    let mut last_positive = 0;
    for (l, &w) in weights.iter().enumerate() {
        let w = w.max(0.0);
        if w > 0.0 {
            cum += w;
            last_positive = l;
            if cum > target {
                return l;
            }
        }
    }
    last_positive
}

pub(crate) fn draw_sample_counted<R: Rng + ?Sized>(
    u: &UnitaryMatrix,
    n: usize,
    rng: &mut R,
) -> Result<(PortSequence, Vec<StepCounts>)> {
    if n == 0 {
        return Err(Error::InvalidBosonCount(0));
    }
    if n > u.dim() {
        return Err(Error::UnsupportedRegime {
            bosons: n,
            modes: u.dim(),
        });
    }
    let permutation = sample_permutation(n, rng)?;
    let mut ports = Vec::with_capacity(n);
    let mut steps = Vec::with_capacity(n);
    for _ in 0..n {
        let (w, counts) = conditional_weights_counted(u, &permutation, &ports)?;
        ports.push(draw_index(&w, rng));
        steps.push(counts);
    }
    Ok((
        PortSequence {
            ports,
            permutation,
            seed: None,
        },
        steps,
    ))
}

/// One exact sample of `n` bosons entering ports `0..n` of `u`.
pub fn draw_sample<R: Rng + ?Sized>(
    u: &UnitaryMatrix,
    n: usize,
    rng: &mut R,
) -> Result<PortSequence> {
    draw_sample_counted(u, n, rng).map(|(s, _)| s)
}
