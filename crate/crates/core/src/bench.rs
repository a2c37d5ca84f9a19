//! Instrumented permanent evaluations and samples.
//!
//! Counts are in row operations: one multiply-add on one row sum, or one
//! factor of a row-sum product. A permanent with multiplicities `m` visits
//! `∏(m_l+1)/min(m_l+1)` states over `N` rows, so its row-op count equals the
//! cost model's `N · ∏/min` exactly.

use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::OutputConfiguration;
use crate::error::{Error, Result};
use crate::matrix::{haar_unitary, ComplexMatrix, UnitaryMatrix};
use crate::permanent::cost::{cost_estimate, log2_big};
use crate::permanent::{repeated_expansion, Expansion};
use crate::ports::sample_cost_bounds;
use crate::rng::stream_rng;
use crate::sampler::{draw_sample_counted, PortSequence};
use num_complex::Complex64;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TraceContext {
    Permanent,
    SampleStep,
    FullSample,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OpTrace {
    pub context: TraceContext,
    /// Column multiplicities for a permanent, the prefix for a sample step,
    /// the final configuration for a full sample.
    pub occupations: Vec<usize>,
    pub states: u64,
    pub gray_steps: u64,
    /// `Σ rows · states` over the expansions involved.
    pub row_ops: u64,
    /// Multiply-adds forming conditional weights (zero for a bare permanent).
    pub weight_ops: u64,
    pub wall_time: Duration,
}

impl OpTrace {
    pub fn total_ops(&self) -> u64 {
        self.row_ops + self.weight_ops
    }

    pub fn log2_row_ops(&self) -> f64 {
        (self.row_ops as f64).log2()
    }
}

/// Permanent of `u_rows` with repeated columns, with its trace.
pub fn trace_permanent(
    u_rows: &ComplexMatrix,
    multiplicities: &[usize],
) -> Result<(Complex64, OpTrace)> {
    let start = Instant::now();
    let r = repeated_expansion(u_rows, multiplicities, Expansion::Reduced)?;
    let trace = OpTrace {
        context: TraceContext::Permanent,
        occupations: multiplicities.to_vec(),
        states: r.states,
        gray_steps: r.gray_steps,
        row_ops: r.states * u_rows.rows() as u64,
        weight_ops: 0,
        wall_time: start.elapsed(),
    };
    Ok((r.value, trace))
}

/// Bounds on the total number of states one sample visits, given the
/// configuration it ends in.
///
/// The prefix gains one boson per step, so its distinct-port count passes
/// through every value `0..n` (with `n` occupied ports at the end) and the
/// step with `d` distinct ports costs at least `2^{d−1}` states: the sum is at
/// least `2^{n−1}`. Each added boson multiplies `∏(m'_l+1)` by at least
/// `1 + 1/m_max`, so the per-step products form a sequence dominated by a
/// geometric series ending at `∏(m_l+1)`, whose sum is below
/// `m_max · ∏(m_l+1)`. The upper bound is reported with the looser `m_max + 2`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StateEnvelope {
    pub lower: u128,
    pub upper: u128,
}

impl StateEnvelope {
    pub fn for_configuration(m: &OutputConfiguration) -> Result<Self> {
        m.require_nonempty()?;
        let n = m.occupied() as u32;
        let product: u128 = m
            .occupations()
            .iter()
            .filter(|&&k| k > 0)
            .map(|&k| k as u128 + 1)
            .product();
        Ok(Self {
            lower: 1u128 << (n - 1),
            upper: (m.max_occupation() as u128 + 2) * product,
        })
    }

    pub fn contains(&self, states: u64) -> bool {
        (self.lower..=self.upper).contains(&u128::from(states))
    }
}

/// One sample with per-step traces and a whole-sample trace.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleTrace {
    pub sequence: PortSequence,
    pub total: OpTrace,
    pub steps: Vec<OpTrace>,
    pub envelope: StateEnvelope,
}

/// Draws one sample of `n` bosons through `u`, recording the work of every step.
pub fn trace_sample<R: Rng + ?Sized>(
    u: &UnitaryMatrix,
    n: usize,
    rng: &mut R,
) -> Result<SampleTrace> {
    let start = Instant::now();
    let (sequence, counts) = draw_sample_counted(u, n, rng)?;
    let wall_time = start.elapsed();
    let modes = u.dim();
    let steps: Vec<OpTrace> = counts
        .iter()
        .map(|c| {
            let prefix = &sequence.ports[..c.step - 1];
            OpTrace {
                context: TraceContext::SampleStep,
                occupations: OutputConfiguration::from_ports(modes, prefix)
                    .expect("ports are in range")
                    .occupations()
                    .to_vec(),
                states: c.states,
                gray_steps: c.gray_steps,
                row_ops: c.states * c.step as u64,
                weight_ops: c.weight_terms,
                wall_time: Duration::ZERO,
            }
        })
        .collect();
    let config = sequence.configuration(modes);
    let total = OpTrace {
        context: TraceContext::FullSample,
        occupations: config.occupations().to_vec(),
        states: steps.iter().map(|s| s.states).sum(),
        gray_steps: steps.iter().map(|s| s.gray_steps).sum(),
        row_ops: steps.iter().map(|s| s.row_ops).sum(),
        weight_ops: steps.iter().map(|s| s.weight_ops).sum(),
        wall_time,
    };
    let envelope = StateEnvelope::for_configuration(&config)?;
    debug_assert!(
        envelope.contains(total.states),
        "{total:?} outside {envelope:?}"
    );
    Ok(SampleTrace {
        sequence,
        total,
        steps,
        envelope,
    })
}

/// How `M` follows `N` along a scaling sweep.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ModeRule {
    Fixed(usize),
    /// `M = k · N`.
    Multiple(usize),
}

impl ModeRule {
    pub fn modes(&self, bosons: usize) -> usize {
        match *self {
            ModeRule::Fixed(m) => m,
            ModeRule::Multiple(k) => k * bosons,
        }
    }
}

/// Largest `N` swept; the no-collision sample cost `N·2^{N−1}` at this size
/// is the cap.
pub const SWEEP_MAX_BOSONS: usize = 22;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingRow {
    pub bosons: usize,
    pub modes: usize,
    pub rho: f64,
    /// Mean and max over samples of `log2(row_ops)`.
    pub mean_log2_ops: f64,
    pub max_log2_ops: f64,
    pub t1_lower_log2: f64,
    pub t1_upper_log2: f64,
    pub t2_lower_log2: f64,
    pub t2_upper_log2: f64,
    /// `log2(N·2^{N−1})`.
    pub baseline_log2: f64,
}

fn check_feasible(bosons: usize) -> Result<()> {
    let worst = cost_estimate(&OutputConfiguration::new(vec![1; bosons]))?;
    let cap = cost_estimate(&OutputConfiguration::new(vec![1; SWEEP_MAX_BOSONS]))?;
    if worst.op_units > cap.op_units {
        return Err(Error::Infeasible {
            bosons,
            log2_cost: log2_big(&worst.op_units),
            log2_cap: log2_big(&cap.op_units),
        });
    }
    Ok(())
}

/// Each point draws `samples_per_point` Haar unitaries and one sample from
/// each; seeds derive from `(seed, point index)` so rows do not depend on
/// scheduling. `epsilon` sets the failure allowance of the bound columns.
pub fn scaling_report(
    n_list: &[usize],
    rule: ModeRule,
    samples_per_point: usize,
    seed: u64,
    epsilon: f64,
) -> Result<Vec<ScalingRow>> {
    if samples_per_point == 0 && !n_list.is_empty() {
        return Err(Error::InvalidBosonCount(0));
    }
    for &n in n_list {
        let modes = rule.modes(n);
        sample_cost_bounds(n, modes, epsilon)?;
        check_feasible(n)?;
    }
    n_list
        .iter()
        .enumerate()
        .map(|(point, &n)| {
            let modes = rule.modes(n);
            let mut seeds = stream_rng(seed, point as u64);
            let pairs: Vec<(u64, u64)> = (0..samples_per_point)
                .map(|_| (seeds.random(), seeds.random()))
                .collect();
            let logs: Vec<f64> = pairs
                .par_iter()
                .map(|&(u_seed, s_seed)| {
                    let u = haar_unitary(modes, u_seed)?;
                    let t = trace_sample(&u, n, &mut stream_rng(s_seed, 0))?;
                    Ok(t.total.log2_row_ops())
                })
                .collect::<Result<_>>()?;
            let b = sample_cost_bounds(n, modes, epsilon)?;
            Ok(ScalingRow {
                bosons: n,
                modes,
                rho: b.rho,
                mean_log2_ops: logs.iter().sum::<f64>() / logs.len() as f64,
                max_log2_ops: logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
                t1_lower_log2: b.c_prob_lower.log2,
                t1_upper_log2: b.c_prob_upper.log2,
                t2_lower_log2: b.c_sample_lower.as_ref().map_or(f64::NAN, |t| t.log2),
                t2_upper_log2: b.c_sample_upper.as_ref().map_or(f64::NAN, |t| t.log2),
                baseline_log2: (n as f64).log2() + n as f64 - 1.0,
            })
        })
        .collect()
}

pub fn scaling_csv(rows: &[ScalingRow]) -> String {
    let mut out = String::from(
        "N,M,rho,mean_log2_ops,max_log2_ops,t1_lower_log2,t1_upper_log2,t2_lower_log2,t2_upper_log2,baseline_log2\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6}\n",
            r.bosons,
            r.modes,
            r.rho,
            r.mean_log2_ops,
            r.max_log2_ops,
            r.t1_lower_log2,
            r.t1_upper_log2,
            r.t2_lower_log2,
            r.t2_upper_log2,
            r.baseline_log2
        ));
    }
    out
}
