//! Matrix permanents.
//!
//! Three general-purpose evaluators (permutation sum, Ryser, Glynn) and the
//! repeated-column expansion in [`repeated`], which is what the rest of the
//! crate runs on. The general evaluators mostly serve as cross-checks.

pub mod cost;
pub mod repeated;

use num_complex::Complex64;

use crate::config::OutputConfiguration;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, UnitaryMatrix};

pub use cost::{cost_estimate, cost_estimate_fock, reduced_state_count, CostEstimate};
pub use repeated::{permanent_repeated, repeated_expansion, Expansion, RepeatedPermanent};

/// Largest dimension [`permanent_naive`] will accept.
pub const NAIVE_LIMIT: usize = 10;

/// Largest dimension accepted by the Gray-code evaluators (u64 subset index).
pub const GRAY_LIMIT: usize = 63;

fn square_dim(a: &ComplexMatrix) -> Result<usize> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    Ok(a.rows())
}

/// Sum over all permutations of `∏_i a[i, σ(i)]`.
pub fn permanent_naive(a: &ComplexMatrix) -> Result<Complex64> {
    let n = square_dim(a)?;
    if n > NAIVE_LIMIT {
        return Err(Error::OracleScale {
            dim: n,
            limit: NAIVE_LIMIT,
        });
    }
    fn walk(a: &ComplexMatrix, row: usize, used: u32, prod: Complex64) -> Complex64 {
        if row == a.rows() {
            return prod;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..a.cols() {
            if used & (1 << j) == 0 {
                acc += walk(a, row + 1, used | (1 << j), prod * a[(row, j)]);
            }
        }
        acc
    }
    Ok(walk(a, 0, 0, Complex64::new(1.0, 0.0)))
}

/// Ryser's inclusion–exclusion formula with Gray-ordered column subsets:
/// `per A = (−1)^n Σ_S (−1)^{|S|} ∏_i Σ_{j∈S} a_ij`.
pub fn permanent_ryser(a: &ComplexMatrix) -> Result<Complex64> {
    let n = square_dim(a)?;
    if n > GRAY_LIMIT {
        return Err(Error::OracleScale {
            dim: n,
            limit: GRAY_LIMIT,
        });
    }
    let mut sums = vec![Complex64::new(0.0, 0.0); n];
    let mut acc = Complex64::new(0.0, 0.0);
    let mut size = 0usize;
    for k in 1u64..(1u64 << n) {
        let j = k.trailing_zeros() as usize;
        let adding = (k ^ (k >> 1)) & (1 << j) != 0;
        for (i, s) in sums.iter_mut().enumerate() {
            if adding {
                *s += a[(i, j)];
            } else {
                *s -= a[(i, j)];
            }
        }
        if adding {
            size += 1;
        } else {
            size -= 1;
        }
        let prod: Complex64 = sums.iter().product();
        if size.is_multiple_of(2) {
            acc += prod;
        } else {
            acc -= prod;
        }
    }
    Ok(if n % 2 == 0 { acc } else { -acc })
}

/// Glynn's formula with ±1 variables in Gray order, the first one fixed:
/// `per A = 2^{1−n} Σ_{δ, δ_1 = 1} (∏_k δ_k) ∏_j Σ_i δ_i a_ij`.
pub fn permanent_glynn(a: &ComplexMatrix) -> Result<Complex64> {
    let n = square_dim(a)?;
    if n > GRAY_LIMIT + 1 {
        return Err(Error::OracleScale {
            dim: n,
            limit: GRAY_LIMIT + 1,
        });
    }
    let mut sums: Vec<Complex64> = (0..n).map(|j| (0..n).map(|i| a[(i, j)]).sum()).collect();
    let mut signs = vec![1.0f64; n];
    let mut parity = 1.0;
    let mut acc: Complex64 = sums.iter().product();
    for k in 1u64..(1u64 << (n - 1)) {
        let i = k.trailing_zeros() as usize + 1;
        let old = signs[i];
        signs[i] = -old;
        parity = -parity;
        let row = a.row(i);
        for (s, &x) in sums.iter_mut().zip(row) {
            *s -= 2.0 * old * x;
        }
        let prod: Complex64 = sums.iter().product();
        acc += parity * prod;
    }
    Ok(acc / (1u64 << (n - 1)) as f64)
}

/// `|per(U[inputs | l_1..l_N])|² / ∏ m_l!`, the probability of detecting the
/// configuration `m` when single bosons enter `input_ports`.
pub fn output_probability(
    u: &UnitaryMatrix,
    input_ports: &[usize],
    m: &OutputConfiguration,
) -> Result<f64> {
    let n = m.require_nonempty()?;
    if m.modes() != u.dim() {
        return Err(Error::DimensionMismatch(format!(
            "configuration over {} ports for a {}-port unitary",
            m.modes(),
            u.dim()
        )));
    }
    if input_ports.len() != n {
        return Err(Error::SumMismatch {
            input: input_ports.len(),
            output: n,
        });
    }
    let mut seen = vec![false; u.dim()];
    for &k in input_ports {
        if k >= u.dim() {
            return Err(Error::IndexOutOfRange {
                index: k,
                bound: u.dim(),
            });
        }
        if std::mem::replace(&mut seen[k], true) {
            return Err(Error::DimensionMismatch(format!(
                "input port {k} listed twice"
            )));
        }
    }
    let (ports, mult): (Vec<usize>, Vec<usize>) = m.occupied_ports().into_iter().unzip();
    let rows = crate::matrix::submatrix(u.matrix(), input_ports, &ports)?;
    let per = permanent_repeated(&rows, &mult)?;
    Ok(per.norm_sqr() / m.factorial_product())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::all_configurations;
    use crate::matrix::haar_unitary;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn real(rows: &[Vec<f64>]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    #[test]
    fn small_known_values() {
        let ones = real(&[vec![1.0, 1.0], vec![1.0, 1.0]]);
        let swap = real(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let abcd = real(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
        for f in [permanent_naive, permanent_ryser, permanent_glynn] {
            assert_eq!(f(&ones).unwrap(), c(2.0));
            assert_eq!(f(&swap).unwrap(), c(1.0));
            assert_eq!(f(&abcd).unwrap(), c(10.0));
            for n in 1..=5 {
                assert_eq!(f(&ComplexMatrix::identity(n).unwrap()).unwrap(), c(1.0));
            }
        }
    }

    #[test]
    fn one_by_one() {
        let z = Complex64::new(0.3, -1.7);
        let m = ComplexMatrix::from_vec(1, 1, vec![z]).unwrap();
        assert_eq!(permanent_ryser(&m).unwrap(), z);
        assert_eq!(permanent_glynn(&m).unwrap(), z);
        assert_eq!(permanent_naive(&m).unwrap(), z);
    }

    #[test]
    fn guards() {
        let rect = ComplexMatrix::zeros(2, 3).unwrap();
        assert!(matches!(
            permanent_naive(&rect),
            Err(Error::NotSquare { .. })
        ));
        assert!(matches!(
            permanent_ryser(&rect),
            Err(Error::NotSquare { .. })
        ));
        assert!(matches!(
            permanent_glynn(&rect),
            Err(Error::NotSquare { .. })
        ));
        let big = ComplexMatrix::identity(11).unwrap();
        assert!(matches!(
            permanent_naive(&big),
            Err(Error::OracleScale { dim: 11, limit: 10 })
        ));
    }

    #[test]
    fn single_boson_probability() {
        let u = haar_unitary(5, 8).unwrap();
        for l in 0..5 {
            let mut occ = vec![0; 5];
            occ[l] = 1;
            let p = output_probability(&u, &[0], &OutputConfiguration::new(occ)).unwrap();
            assert!((p - u.matrix()[(0, l)].norm_sqr()).abs() < 1e-15);
        }
    }

    #[test]
    fn hong_ou_mandel() {
        let bs = UnitaryMatrix::beamsplitter();
        let p11 = output_probability(&bs, &[0, 1], &OutputConfiguration::new(vec![1, 1])).unwrap();
        let p20 = output_probability(&bs, &[0, 1], &OutputConfiguration::new(vec![2, 0])).unwrap();
        let p02 = output_probability(&bs, &[0, 1], &OutputConfiguration::new(vec![0, 2])).unwrap();
        assert!(p11.abs() < 1e-15);
        assert!((p20 - 0.5).abs() < 1e-15);
        assert!((p02 - 0.5).abs() < 1e-15);
    }

    #[test]
    fn probabilities_normalize() {
        for (n, modes, seed) in [(2, 3, 1), (3, 4, 2), (3, 6, 3), (4, 4, 4)] {
            let u = haar_unitary(modes, seed).unwrap();
            let inputs: Vec<usize> = (0..n).collect();
            let total: f64 = all_configurations(n, modes)
                .iter()
                .map(|m| output_probability(&u, &inputs, m).unwrap())
                .sum();
            assert!((total - 1.0).abs() < 1e-9, "N={n} M={modes}: {total}");
        }
    }

    #[test]
    fn probability_errors() {
        let u = haar_unitary(3, 1).unwrap();
        let empty = OutputConfiguration::new(vec![0, 0, 0]);
        assert!(matches!(
            output_probability(&u, &[], &empty),
            Err(Error::EmptyConfiguration)
        ));
        let m = OutputConfiguration::new(vec![1, 1, 0]);
        assert!(output_probability(&u, &[0], &m).is_err());
        assert!(output_probability(&u, &[0, 0], &m).is_err());
        assert!(output_probability(&u, &[0, 3], &m).is_err());
        let wrong_modes = OutputConfiguration::new(vec![1, 1]);
        assert!(output_probability(&u, &[0, 1], &wrong_modes).is_err());
    }
}
