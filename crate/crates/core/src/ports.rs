//! Statistics of the number of occupied output ports and the operation-count
//! bounds that follow from them.
//!
//! Averaged over Haar-random interferometers every configuration of `N`
//! bosons over `M` ports is equally likely, so the number `n` of occupied
//! ports has the exact law
//!
//! ```text
//! P(n) = C(M, n) C(N−1, n−1) / C(M+N−1, M−1),    1 ≤ n ≤ min(N, M)
//! ```
//!
//! Its tails sit below the binomial `B_n(x) = C(M,n) x^n (1−x)^{M−n}` with
//! `x = ρ/(1+ρ)`, `ρ = N/M`, which is what turns the per-configuration cost
//! model into bounds holding for all but an `ε` fraction of interferometers.

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use statrs::function::factorial::ln_binomial;

use crate::error::{Error, Result};

/// Exact rational arithmetic is used while `N + M` stays at or below this.
pub const EXACT_LIMIT: usize = 400;

const CROSSING_RESIDUAL: f64 = 1e-12;
const BISECTION_ITERS: usize = 200;

fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut c = BigUint::one();
    for i in 0..k {
        c = c * (n - i) / (i + 1);
    }
    c
}

fn density(bosons: usize, modes: usize) -> f64 {
    bosons as f64 / modes as f64
}

fn check_regime(bosons: usize, modes: usize) -> Result<()> {
    if bosons == 0 {
        return Err(Error::InvalidBosonCount(0));
    }
    if modes == 0 {
        return Err(Error::InvalidDimension(0));
    }
    if bosons > modes {
        return Err(Error::UnsupportedRegime { bosons, modes });
    }
    Ok(())
}

fn check_open_unit(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            name,
            value: v,
            domain: "(0, 1)",
        })
    }
}

fn check_density(rho: f64) -> Result<()> {
    if rho > 0.0 && rho <= 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            name: "rho",
            value: rho,
            domain: "(0, 1]",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PortRow {
    pub n: usize,
    /// Present while `N + M ≤ EXACT_LIMIT`.
    pub p_exact: Option<BigRational>,
    pub p: f64,
    /// Binomial envelope `B_n(x)`.
    pub b: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PortDistribution {
    pub bosons: usize,
    pub modes: usize,
    /// `x = ρ/(1+ρ)`.
    pub x: f64,
    /// One row per `n = 1..=N`.
    pub rows: Vec<PortRow>,
}

impl PortDistribution {
    /// The `n` maximizing `P(n)` (smallest on ties).
    pub fn mode(&self) -> usize {
        let mut best = &self.rows[0];
        for r in &self.rows[1..] {
            let better = match (&r.p_exact, &best.p_exact) {
                (Some(a), Some(b)) => a > b,
                _ => r.p > best.p,
            };
            if better {
                best = r;
            }
        }
        best.n
    }

    pub fn row(&self, n: usize) -> Option<&PortRow> {
        n.checked_sub(1).and_then(|i| self.rows.get(i))
    }

    /// CSV with header `n,P_exact,P,B`. `P_exact` is `num/den`, or empty when
    /// the table was built in floating point.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,P_exact,P,B\n");
        for r in &self.rows {
            let exact = r
                .p_exact
                .as_ref()
                .map(|q| q.to_string())
                .unwrap_or_default();
            writeln!(out, "{},{},{},{}", r.n, exact, number(r.p), number(r.b)).unwrap();
        }
        out
    }

    /// Paired series for plotting `P(n)` against `B_n(x)` over `n = 0..=M`,
    /// with base-10 logs for the tail view. Header
    /// `n,P,B,log10_P,log10_B`; `P` is zero outside `1..=N`.
    pub fn plot_csv(&self) -> String {
        let mut out = String::from("n,P,B,log10_P,log10_B\n");
        for n in 0..=self.modes {
            let p = self.row(n).map_or(0.0, |r| r.p);
            let b = binomial_envelope(self.bosons, self.modes, n);
            // log10(0) is left empty.
            let log = |v: f64| {
                if v > 0.0 {
                    format!("{:.6}", v.log10())
                } else {
                    String::new()
                }
            };
            writeln!(out, "{n},{},{},{},{}", number(p), number(b), log(p), log(b)).unwrap();
        }
        out
    }
}

/// Shortest round-tripping decimal, switching to exponent form for small magnitudes.
fn number(v: f64) -> String {
    if v == 0.0 || v.abs() >= 1e-4 {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// Exact `P(n)` for `n = 1..=min(N, M)` as rationals.
fn pmf_exact(bosons: usize, modes: usize) -> Vec<BigRational> {
    let den = BigInt::from(binomial(modes + bosons - 1, modes - 1));
    (1..=bosons.min(modes))
        .map(|n| {
            let num = BigInt::from(binomial(modes, n) * binomial(bosons - 1, n - 1));
            BigRational::new(num, den.clone())
        })
        .collect()
}

fn pmf_log(bosons: usize, modes: usize, n: usize) -> f64 {
    let (b, m, n) = (bosons as u64, modes as u64, n as u64);
    (ln_binomial(m, n) + ln_binomial(b - 1, n - 1) - ln_binomial(m + b - 1, m - 1)).exp()
}

/// Distribution of the number of occupied output ports, with its binomial
/// envelope.
pub fn port_count_pmf(bosons: usize, modes: usize) -> Result<PortDistribution> {
    check_regime(bosons, modes)?;
    let rho = density(bosons, modes);
    let x = rho / (1.0 + rho);
    let exact = (bosons + modes <= EXACT_LIMIT).then(|| pmf_exact(bosons, modes));
    let rows = (1..=bosons)
        .map(|n| {
            let p_exact = exact.as_ref().map(|e| e[n - 1].clone());
            let p = match &p_exact {
                Some(q) => q.to_f64().unwrap_or(0.0),
                None => pmf_log(bosons, modes, n),
            };
            PortRow {
                n,
                p_exact,
                p,
                b: binomial_envelope(bosons, modes, n),
            }
        })
        .collect();
    Ok(PortDistribution {
        bosons,
        modes,
        x,
        rows,
    })
}

/// `⟨n⟩ = MN/(M+N−1)`.
pub fn mean_occupied(bosons: usize, modes: usize) -> Result<f64> {
    if bosons == 0 {
        return Err(Error::InvalidBosonCount(0));
    }
    if modes == 0 {
        return Err(Error::InvalidDimension(0));
    }
    Ok((modes as f64 * bosons as f64) / (modes + bosons - 1) as f64)
}

/// `⟨n⟩` as an exact rational.
pub fn mean_occupied_exact(bosons: usize, modes: usize) -> Result<BigRational> {
    mean_occupied(bosons, modes)?;
    Ok(BigRational::new(
        BigInt::from(modes) * BigInt::from(bosons),
        BigInt::from(modes + bosons - 1),
    ))
}

/// `B_n(x) = C(M,n) x^n (1−x)^{M−n}`, `x = ρ/(1+ρ)`, evaluated in log space.
/// Zero outside `0..=M`.
pub fn binomial_envelope(bosons: usize, modes: usize, n: usize) -> f64 {
    if n > modes || modes == 0 {
        return 0.0;
    }
    // x = N/(N+M), 1−x = M/(N+M).
    let total = (bosons + modes) as f64;
    let ln_x = (bosons as f64 / total).ln();
    let ln_1mx = (modes as f64 / total).ln();
    let mut log = ln_binomial(modes as u64, n as u64);
    if n > 0 {
        log += n as f64 * ln_x;
    }
    if n < modes {
        log += (modes - n) as f64 * ln_1mx;
    }
    log.exp()
}

/// Binary entropy in nats, `H(z) = −z ln z − (1−z) ln(1−z)`, with `H(0) = H(1) = 0`.
pub fn entropy(z: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::OutOfDomain {
            name: "z",
            value: z,
            domain: "[0, 1]",
        });
    }
    let term = |p: f64| if p > 0.0 { -p * p.ln() } else { 0.0 };
    Ok(term(z) + term(1.0 - z))
}

/// Half-widths `δ∓` where the binomial envelope and `P(n)` cross, from
/// `H((1 ± δ)/(1+ρ)) = ln(1+ρ)`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct TailCrossings {
    pub delta_minus: f64,
    pub delta_plus: f64,
}

impl TailCrossings {
    /// `n∓ = (1 ∓ δ∓) N/(1+ρ)`.
    pub fn boundaries(&self, bosons: usize, rho: f64) -> (f64, f64) {
        let centre = bosons as f64 / (1.0 + rho);
        (
            (1.0 - self.delta_minus) * centre,
            (1.0 + self.delta_plus) * centre,
        )
    }
}

fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let f_lo = f(lo);
    for _ in 0..BISECTION_ITERS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (a, b) = (f(lo).abs(), f(hi).abs());
    if a <= b {
        lo
    } else {
        hi
    }
}

/// Solves the tail-crossing equation on each side of `z = 1/(1+ρ)`.
pub fn solve_tail_crossings(rho: f64) -> Result<TailCrossings> {
    if rho > 1.0 {
        return Err(Error::OutOfDomain {
            name: "rho",
            value: rho,
            domain: "(0, 1]: no crossing exists for rho > 1",
        });
    }
    check_density(rho)?;
    let target = (1.0 + rho).ln();
    let g = |z: f64| entropy(z).expect("z in [0, 1]") - target;
    let centre = 1.0 / (1.0 + rho);
    if g(centre) <= CROSSING_RESIDUAL {
        // Only at rho = 1, where H(1/2) = ln 2 and both roots merge.
        return Ok(TailCrossings {
            delta_minus: 0.0,
            delta_plus: 0.0,
        });
    }
    let left = bisect(0.0, centre, g);
    let right = bisect(centre, 1.0, g);
    Ok(TailCrossings {
        delta_minus: 1.0 - left * (1.0 + rho),
        delta_plus: right * (1.0 + rho) - 1.0,
    })
}

/// `δ = 2 √((1+ρ)/N · ln(2/ε))`, the half-width whose Hoeffding tail mass is `ε`.
pub fn delta_for_epsilon(bosons: usize, rho: f64, epsilon: f64) -> Result<f64> {
    if bosons == 0 {
        return Err(Error::InvalidBosonCount(0));
    }
    check_open_unit("epsilon", epsilon)?;
    if rho.is_nan() || rho <= 0.0 {
        return Err(Error::OutOfDomain {
            name: "rho",
            value: rho,
            domain: "(0, inf)",
        });
    }
    Ok(2.0 * ((1.0 + rho) / bosons as f64 * (2.0 / epsilon).ln()).sqrt())
}

/// `2 exp(−δ² N / (4(1+ρ)))`, the two-sided binomial tail bound.
pub fn hoeffding_tail(bosons: usize, rho: f64, delta: f64) -> f64 {
    2.0 * (-delta * delta * bosons as f64 / (4.0 * (1.0 + rho))).exp()
}

/// Approximate `Prob(max_l m_l ≤ m) ≈ [1 − (ρ/(1+ρ))^{m+1}]^M`.
pub fn bunching_cdf(bosons: usize, modes: usize, m: f64) -> f64 {
    let rho = density(bosons, modes);
    let x = rho / (1.0 + rho);
    (1.0 - x.powf(m + 1.0)).powi(modes as i32)
}

/// Occupation `m = ln(N/(ρε)) / ln((1+ρ)/ρ)` that the maximal bunching stays
/// below with probability about `1 − ε`.
pub fn max_bunching_cutoff(bosons: usize, rho: f64, epsilon: f64) -> Result<f64> {
    if bosons == 0 {
        return Err(Error::InvalidBosonCount(0));
    }
    check_density(rho)?;
    check_open_unit("epsilon", epsilon)?;
    Ok((bosons as f64 / (rho * epsilon)).ln() / ((1.0 + rho) / rho).ln())
}

/// One bound with the formula it evaluates. Constants of the asymptotic
/// statements are taken as 1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundTerm {
    pub expression: &'static str,
    pub log2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsReport {
    pub bosons: usize,
    pub modes: usize,
    pub rho: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub r: f64,
    /// `δ ≥ ρ`: the distribution has no right tail and `r = 1`.
    pub right_tail_absent: bool,
    pub m_cut: Option<f64>,
    pub n_minus: f64,
    pub n_plus: f64,
    pub c_prob_lower: BoundTerm,
    pub c_prob_upper: BoundTerm,
    pub c_sample_lower: Option<BoundTerm>,
    pub c_sample_upper: Option<BoundTerm>,
    /// `N/(1+ρ)`: bosons of the equally hard no-collision instance.
    pub n_equiv: f64,
}

/// `log2(2^a + 2^b)`.
fn log2_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (1.0 + (lo - hi).exp2()).log2()
}

/// Per-probability bounds holding for a `1 − ε` fraction of Haar unitaries:
/// `N 2^{(1−δ)N/(1+ρ)} ≤ C_m ≤ N (1+r)^{N/r}`, `r = max(1, (1+ρ)/(1+δ))`.
pub fn probability_cost_bounds(bosons: usize, modes: usize, epsilon: f64) -> Result<BoundsReport> {
    check_regime(bosons, modes)?;
    check_open_unit("epsilon", epsilon)?;
    let rho = density(bosons, modes);
    let n = bosons as f64;
    let delta = delta_for_epsilon(bosons, rho, epsilon)?;
    let r = ((1.0 + rho) / (1.0 + delta)).max(1.0);
    let centre = n / (1.0 + rho);
    Ok(BoundsReport {
        bosons,
        modes,
        rho,
        epsilon,
        delta,
        r,
        right_tail_absent: delta >= rho,
        m_cut: None,
        n_minus: (1.0 - delta) * centre,
        n_plus: (1.0 + delta) * centre,
        c_prob_lower: BoundTerm {
            expression: "N*2^((1-delta)*N/(1+rho))",
            log2: n.log2() + (1.0 - delta) * centre,
        },
        c_prob_upper: BoundTerm {
            expression: "N*(1+r)^(N/r)",
            log2: n.log2() + (n / r) * (1.0 + r).log2(),
        },
        c_sample_lower: None,
        c_sample_upper: None,
        n_equiv: (bosons as f64 * modes as f64) / (bosons + modes) as f64,
    })
}

/// Per-sample bounds: the per-probability bounds plus the `MN²` cost of
/// forming all conditional weights, with the upper bound scaled by `m + 2`
/// for the bunching cutoff `m`.
pub fn sample_cost_bounds(bosons: usize, modes: usize, epsilon: f64) -> Result<BoundsReport> {
    let mut report = probability_cost_bounds(bosons, modes, epsilon)?;
    let m_cut = max_bunching_cutoff(bosons, report.rho, epsilon)?;
    let n = bosons as f64;
    let weights_log2 = (modes as f64).log2() + 2.0 * n.log2();
    report.c_sample_lower = Some(BoundTerm {
        expression: "N*2^((1-delta)*N/(1+rho)) + M*N^2",
        log2: log2_add(report.c_prob_lower.log2, weights_log2),
    });
    report.c_sample_upper = Some(BoundTerm {
        expression: "(m+2)*N*(1+r)^(N/r) + M*N^2",
        log2: log2_add(
            (m_cut + 2.0).log2() + report.c_prob_upper.log2,
            weights_log2,
        ),
    });
    report.m_cut = Some(m_cut);
    Ok(report)
}
