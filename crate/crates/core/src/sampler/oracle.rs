//! Exact output distribution by enumeration, for validating the sampler.

use std::collections::BTreeMap;

use crate::config::{all_configurations, configuration_count, OutputConfiguration};
use crate::error::{Error, Result};
use crate::matrix::UnitaryMatrix;
use crate::permanent::output_probability;

/// Largest number of configurations [`brute_force_distribution`] enumerates.
pub const ORACLE_CONFIG_LIMIT: u128 = 100_000;

/// `p(m)` for every configuration of `n` bosons entering ports `0..n`.
pub fn brute_force_distribution(
    u: &UnitaryMatrix,
    n: usize,
) -> Result<BTreeMap<OutputConfiguration, f64>> {
    if n == 0 {
        return Err(Error::InvalidBosonCount(0));
    }
    if n > u.dim() {
        return Err(Error::UnsupportedRegime {
            bosons: n,
            modes: u.dim(),
        });
    }
    let count = configuration_count(n, u.dim());
    if count > ORACLE_CONFIG_LIMIT {
        return Err(Error::TooManyConfigurations {
            count,
            limit: ORACLE_CONFIG_LIMIT,
        });
    }
    let inputs: Vec<usize> = (0..n).collect();
    all_configurations(n, u.dim())
        .into_iter()
        .map(|m| output_probability(u, &inputs, &m).map(|p| (m, p)))
        .collect()
}

/// `½ Σ |p(m) − count(m)/total|` between an exact distribution and observed
/// counts. Configurations absent from `exact` count as probability zero.
pub fn total_variation(
    exact: &BTreeMap<OutputConfiguration, f64>,
    observed: &BTreeMap<OutputConfiguration, u64>,
) -> f64 {
    let total: u64 = observed.values().sum();
    if total == 0 {
        return 0.0;
    }
    let total = total as f64;
    let mut tv: f64 = exact
        .iter()
        .map(|(m, &p)| (p - observed.get(m).copied().unwrap_or(0) as f64 / total).abs())
        .sum();
    tv += observed
        .iter()
        .filter(|(m, _)| !exact.contains_key(*m))
        .map(|(_, &c)| c as f64 / total)
        .sum::<f64>();
    tv / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::haar_unitary;

    #[test]
    fn single_boson() {
        let u = haar_unitary(4, 6).unwrap();
        let d = brute_force_distribution(&u, 1).unwrap();
        assert_eq!(d.len(), 4);
        for (m, p) in d {
            let l = m.port_multiset()[0];
            assert!((p - u.matrix()[(0, l)].norm_sqr()).abs() < 1e-15);
        }
    }

    #[test]
    fn identity_is_a_point_mass() {
        let u = UnitaryMatrix::identity(5).unwrap();
        let d = brute_force_distribution(&u, 3).unwrap();
        for (m, p) in d {
            if m.occupations() == [1, 1, 1, 0, 0] {
                assert!((p - 1.0).abs() < 1e-15);
            } else {
                assert_eq!(p, 0.0);
            }
        }
    }

    #[test]
    fn normalized() {
        let u = haar_unitary(4, 31).unwrap();
        let d = brute_force_distribution(&u, 3).unwrap();
        assert_eq!(d.len(), 20);
        let total: f64 = d.values().sum();
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn guards() {
        let u = haar_unitary(30, 1).unwrap();
        assert!(matches!(
            brute_force_distribution(&u, 30),
            Err(Error::TooManyConfigurations { .. })
        ));
        let bs = UnitaryMatrix::beamsplitter();
        assert!(brute_force_distribution(&bs, 3).is_err());
        assert!(brute_force_distribution(&bs, 0).is_err());
    }

    #[test]
    fn tvd_basic() {
        let a = OutputConfiguration::new(vec![1, 0]);
        let b = OutputConfiguration::new(vec![0, 1]);
        let exact = BTreeMap::from([(a.clone(), 0.5), (b.clone(), 0.5)]);
        let obs = BTreeMap::from([(a, 3u64), (b, 1u64)]);
        assert!((total_variation(&exact, &obs) - 0.25).abs() < 1e-15);
    }
}
