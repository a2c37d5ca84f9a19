//! Permanents of matrices whose columns repeat.
//!
//! For an `N×n` block `A` whose column `j` appears `m_j` times, attach to each
//! column a variable `x_j` ranging over the `(m_j+1)`-th roots of unity. Then
//!
//! ```text
//! Σ_x (∏_j x_j) ∏_k (Σ_j x_j A_kj)  =  ∏_j (m_j+1) · per(A_expanded) / ∏_j m_j!
//! ```
//!
//! because the root-of-unity sums kill every monomial whose column counts are
//! not exactly `m`. Fixing the variable of a minimal-multiplicity column to 1
//! drops its factor `(m_j+1)` from both sides without admitting any spurious
//! count pattern, so only `∏_j (m_j+1) / min_j (m_j+1)` terms remain. Those
//! terms are visited in reflected mixed-radix Gray order: each move changes
//! one `x_j` and costs one multiply-add per row.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gray::mixed_radix_gray;
use crate::matrix::ComplexMatrix;

/// Which variables the expansion sums over.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Expansion {
    /// Every column carries a root-of-unity variable.
    Full,
    /// The variable of the minimal-multiplicity column (lowest index on ties)
    /// is fixed to 1.
    Reduced,
}

/// Result of [`repeated_expansion`] with its exact work counters.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct RepeatedPermanent {
    pub value: Complex64,
    /// Terms of the outer sum visited.
    pub states: u64,
    /// Gray moves taken; always `states − 1`.
    pub gray_steps: u64,
    /// Single-row multiply-adds spent updating row sums.
    pub row_updates: u64,
}

/// Work counters of one expansion pass.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct PassCounts {
    pub states: u64,
    pub gray_steps: u64,
    pub row_updates: u64,
}

/// `exp(2πi k/q)`, exact at quarter turns so real inputs stay real.
fn root_of_unity(k: usize, q: usize) -> Complex64 {
    if (4 * k).is_multiple_of(q) {
        return match 4 * k / q {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / q as f64)
}

/// Walks the outer sum of the expansion over the rows of `block` (columns
/// carry multiplicities `mult`). `visit` receives `∏_j x_j` and the current row
/// sums `Σ_j x_j block[k, j]` for each state.
///
/// Returns the counters and the factor `∏_j m_j! / ∏_{summed j} (m_j+1)` that
/// turns the raw sum of `(∏x)·(product over all rows)` into a standard
/// permanent.
pub(crate) fn expand<F>(
    block: &ComplexMatrix,
    mult: &[usize],
    expansion: Expansion,
    mut visit: F,
) -> Result<(PassCounts, f64)>
where
    F: FnMut(Complex64, &[Complex64]),
{
    if mult.is_empty() {
        return Err(Error::EmptyMultiplicities);
    }
    if let Some(j) = mult.iter().position(|&m| m == 0) {
        return Err(Error::ZeroMultiplicity(j));
    }
    if block.cols() != mult.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} columns but {} multiplicities",
            block.cols(),
            mult.len()
        )));
    }
    let fixed = match expansion {
        Expansion::Full => None,
        Expansion::Reduced => mult
            .iter()
            .enumerate()
            .min_by_key(|&(_, &m)| m)
            .map(|(j, _)| j),
    };
    let summed: Vec<usize> = (0..mult.len()).filter(|&j| Some(j) != fixed).collect();
    let moduli: Vec<usize> = summed.iter().map(|&j| mult[j] + 1).collect();
    let roots: Vec<Vec<Complex64>> = moduli
        .iter()
        .map(|&q| (0..q).map(|k| root_of_unity(k, q)).collect())
        .collect();

    let rows = block.rows();
    let mut sums: Vec<Complex64> = (0..rows).map(|k| block.row(k).iter().sum()).collect();
    let mut prefactor = Complex64::new(1.0, 0.0);
    let mut counts = PassCounts {
        states: 1,
        ..Default::default()
    };
    visit(prefactor, &sums);

    let column: Vec<Vec<Complex64>> = summed
        .iter()
        .map(|&j| (0..rows).map(|k| block[(k, j)]).collect())
        .collect();
    for step in mixed_radix_gray(&moduli)? {
        let r = &roots[step.position];
        let shift = r[step.new_value] - r[step.old_value];
        for (s, &a) in sums.iter_mut().zip(&column[step.position]) {
            *s += shift * a;
        }
        prefactor *= r[step.new_value] * r[step.old_value].conj();
        counts.states += 1;
        counts.gray_steps += 1;
        counts.row_updates += rows as u64;
        visit(prefactor, &sums);
    }

    let factorials: f64 = mult
        .iter()
        .map(|&m| (1..=m).map(|k| k as f64).product::<f64>())
        .product();
    let states: f64 = moduli.iter().map(|&q| q as f64).product();
    Ok((counts, factorials / states))
}

/// The permanent of the `N×N` matrix obtained by repeating column `j` of
/// `u_rows` `multiplicities[j]` times, with work counters.
pub fn repeated_expansion(
    u_rows: &ComplexMatrix,
    multiplicities: &[usize],
    expansion: Expansion,
) -> Result<RepeatedPermanent> {
    let total: usize = multiplicities.iter().sum();
    if !multiplicities.is_empty() && u_rows.rows() != total {
        return Err(Error::DimensionMismatch(format!(
            "{} rows but multiplicities sum to {total}",
            u_rows.rows()
        )));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let (counts, scale) = expand(u_rows, multiplicities, expansion, |x, sums| {
        acc += x * sums.iter().product::<Complex64>();
    })?;
    Ok(RepeatedPermanent {
        value: acc * scale,
        states: counts.states,
        gray_steps: counts.gray_steps,
        row_updates: counts.row_updates,
    })
}

/// Standard permanent of `u_rows` with columns repeated by `multiplicities`,
/// evaluated by the reduced expansion.
pub fn permanent_repeated(u_rows: &ComplexMatrix, multiplicities: &[usize]) -> Result<Complex64> {
    repeated_expansion(u_rows, multiplicities, Expansion::Reduced).map(|r| r.value)
}
