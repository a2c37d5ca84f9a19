//! Operation-count model for the reduced expansion.
//!
//! `C_m = N · ∏_{m_l>0} (m_l+1) / min_{m_l>0} (m_l+1)`, kept as an exact big
//! integer so estimates stay meaningful far beyond evaluable sizes.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::config::OutputConfiguration;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CostEstimate {
    /// `N · product / min_factor`.
    #[serde(serialize_with = "as_decimal")]
    pub op_units: BigUint,
    /// `∏ (m_l+1)` over the occupied entries.
    #[serde(serialize_with = "as_decimal")]
    pub product: BigUint,
    /// `min (m_l+1)` over the occupied entries.
    pub min_factor: u64,
}

fn as_decimal<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_str_radix(10))
}

impl CostEstimate {
    fn from_counts(bosons: usize, counts: &[usize]) -> Result<Self> {
        let occupied: Vec<u64> = counts
            .iter()
            .filter(|&&m| m > 0)
            .map(|&m| m as u64 + 1)
            .collect();
        let min_factor = *occupied.iter().min().ok_or(Error::EmptyConfiguration)?;
        let product = occupied.iter().fold(BigUint::one(), |acc, &f| acc * f);
        let op_units = BigUint::from(bosons) * &product / min_factor;
        Ok(Self {
            op_units,
            product,
            min_factor,
        })
    }

    /// Number of outer-sum terms, `product / min_factor`.
    pub fn states(&self) -> BigUint {
        &self.product / self.min_factor
    }

    pub fn log2_op_units(&self) -> f64 {
        log2_big(&self.op_units)
    }
}

pub(crate) fn log2_big(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 64 {
        return v.to_f64().unwrap_or(0.0).log2();
    }
    // Keep the top 64 bits; the rest only shifts the exponent.
    let shift = bits - 64;
    (v >> shift).to_f64().unwrap_or(0.0).log2() + shift as f64
}

/// Cost of one output probability for configuration `m`.
pub fn cost_estimate(m: &OutputConfiguration) -> Result<CostEstimate> {
    let n = m.require_nonempty()?;
    CostEstimate::from_counts(n, m.occupations())
}

/// Cost when either the input occupations `s` (rows) or the output
/// occupations `m` (columns) may drive the expansion, whichever is cheaper.
pub fn cost_estimate_fock(s: &[usize], m: &OutputConfiguration) -> Result<CostEstimate> {
    let input: usize = s.iter().sum();
    let output = m.bosons();
    if input != output {
        return Err(Error::SumMismatch { input, output });
    }
    if output == 0 {
        return Err(Error::EmptyConfiguration);
    }
    let rows = CostEstimate::from_counts(input, s)?;
    let cols = CostEstimate::from_counts(output, m.occupations())?;
    Ok(if rows.op_units < cols.op_units {
        rows
    } else {
        cols
    })
}

/// `∏ (m_j+1) / min (m_j+1)` for positive multiplicities: the number of terms
/// the reduced expansion visits.
pub fn reduced_state_count(multiplicities: &[usize]) -> u128 {
    let product: u128 = multiplicities.iter().map(|&m| m as u128 + 1).product();
    let min = multiplicities
        .iter()
        .map(|&m| m as u128 + 1)
        .min()
        .unwrap_or(1);
    product / min
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(v: &[usize]) -> OutputConfiguration {
        OutputConfiguration::new(v.to_vec())
    }

    #[test]
    fn fully_bunched_is_linear() {
        for n in 1..40 {
            let mut occ = vec![0; 5];
            occ[2] = n;
            let c = cost_estimate(&cfg(&occ)).unwrap();
            assert_eq!(c.op_units, BigUint::from(n));
            assert_eq!(c.states(), BigUint::one());
        }
    }

    #[test]
    fn no_collision_is_n_two_to_n_minus_one() {
        for n in 1..=60usize {
            let c = cost_estimate(&cfg(&vec![1; n])).unwrap();
            assert_eq!(c.op_units, BigUint::from(n) << (n - 1));
        }
    }

    #[test]
    fn two_one() {
        let c = cost_estimate(&cfg(&[2, 1])).unwrap();
        assert_eq!(c.op_units, BigUint::from(9u32));
        assert_eq!(c.product, BigUint::from(6u32));
        assert_eq!(c.min_factor, 2);
    }

    #[test]
    fn empty_configuration_errors() {
        assert!(matches!(
            cost_estimate(&cfg(&[0, 0])),
            Err(Error::EmptyConfiguration)
        ));
    }

    #[test]
    fn fock_input_side() {
        let n = 6;
        let m = cfg(&vec![1; n]);
        let c = cost_estimate_fock(&[n], &m).unwrap();
        assert_eq!(c.op_units, BigUint::from(n));
        let c = cost_estimate_fock(&vec![1; n], &m).unwrap();
        assert_eq!(c.op_units, BigUint::from(n) << (n - 1));
        let c = cost_estimate_fock(&[2, 1, 3], &cfg(&[2, 1, 3])).unwrap();
        assert_eq!(c, cost_estimate(&cfg(&[2, 1, 3])).unwrap());
        assert!(matches!(
            cost_estimate_fock(&[2], &cfg(&[1, 2])),
            Err(Error::SumMismatch {
                input: 2,
                output: 3
            })
        ));
    }

    #[test]
    fn log2_of_huge_counts() {
        let c = cost_estimate(&cfg(&vec![1; 200])).unwrap();
        let expect = 200f64.log2() + 199.0;
        assert!((c.log2_op_units() - expect).abs() < 1e-12);
    }

    #[test]
    fn state_count() {
        assert_eq!(reduced_state_count(&[2, 1]), 3);
        assert_eq!(reduced_state_count(&[1; 5]), 16);
        assert_eq!(reduced_state_count(&[4]), 1);
    }
}
