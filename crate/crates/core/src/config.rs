//! Output configurations `m = (m_1, …, m_M)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bosons per output port. Ordered lexicographically on the occupation vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OutputConfiguration {
    occupations: Vec<usize>,
}

impl OutputConfiguration {
    pub fn new(occupations: Vec<usize>) -> Self {
        Self { occupations }
    }

    /// Collapses a list of (0-based) ports into occupations over `modes` ports.
    pub fn from_ports(modes: usize, ports: &[usize]) -> Result<Self> {
        let mut occupations = vec![0; modes];
        for &l in ports {
            *occupations.get_mut(l).ok_or(Error::IndexOutOfRange {
                index: l,
                bound: modes,
            })? += 1;
        }
        Ok(Self { occupations })
    }

    pub fn occupations(&self) -> &[usize] {
        &self.occupations
    }

    pub fn modes(&self) -> usize {
        self.occupations.len()
    }

    /// `N = Σ m_l`.
    pub fn bosons(&self) -> usize {
        self.occupations.iter().sum()
    }

    /// `n = #{l : m_l > 0}`.
    pub fn occupied(&self) -> usize {
        self.occupations.iter().filter(|&&m| m > 0).count()
    }

    pub fn max_occupation(&self) -> usize {
        self.occupations.iter().copied().max().unwrap_or(0)
    }

    /// `(port, m_port)` for each occupied port, ascending by port.
    pub fn occupied_ports(&self) -> Vec<(usize, usize)> {
        self.occupations
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(l, &m)| (l, m))
            .collect()
    }

    /// The sorted multiset `l_1 ≤ … ≤ l_N`.
    pub fn port_multiset(&self) -> Vec<usize> {
        self.occupations
            .iter()
            .enumerate()
            .flat_map(|(l, &m)| std::iter::repeat_n(l, m))
            .collect()
    }

    /// `∏ m_l!` as a float.
    pub fn factorial_product(&self) -> f64 {
        self.occupations
            .iter()
            .map(|&m| (1..=m).map(|k| k as f64).product::<f64>())
            .product()
    }

    pub(crate) fn require_nonempty(&self) -> Result<usize> {
        match self.bosons() {
            0 => Err(Error::EmptyConfiguration),
            n => Ok(n),
        }
    }
}

/// `C(M+N−1, N)`, the number of ways to place `bosons` in `modes` ports.
pub fn configuration_count(bosons: usize, modes: usize) -> u128 {
    if modes == 0 {
        return u128::from(bosons == 0);
    }
    // C(a, k) built incrementally stays integral at every step.
    let a = (modes + bosons - 1) as u128;
    let k = bosons.min(modes - 1) as u128;
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (a - i) / (i + 1);
    }
    c
}

/// All configurations of `bosons` over `modes` ports, in lexicographically
/// descending order of the occupation vector (`(N, 0, …)` first).
pub fn all_configurations(bosons: usize, modes: usize) -> Vec<OutputConfiguration> {
    fn fill(rest: usize, port: usize, cur: &mut Vec<usize>, out: &mut Vec<OutputConfiguration>) {
        if port + 1 == cur.len() {
            cur[port] = rest;
            out.push(OutputConfiguration::new(cur.clone()));
            return;
        }
        for m in (0..=rest).rev() {
            cur[port] = m;
            fill(rest - m, port + 1, cur, out);
        }
        cur[port] = 0;
    }
    let mut out = Vec::new();
    if modes == 0 {
        return out;
    }
    fill(bosons, 0, &mut vec![0; modes], &mut out);
    out
}
