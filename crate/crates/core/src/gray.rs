//! Reflected mixed-radix Gray code.
//!
//! Enumerates every tuple `(a_0, …, a_{k−1})` with `0 ≤ a_j < moduli[j]`,
//! starting from all zeros, changing exactly one coordinate by ±1 per step.
//! Uses Knuth's loopless focus-pointer construction (TAOCP 7.2.1.1, Algorithm
//! H), so each step costs O(1). Coordinate 0 changes fastest.

use crate::error::{Error, Result};

/// One move of the enumeration: coordinate `position` goes from `old_value`
/// to `new_value`; they always differ by one.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct GrayStep {
    pub position: usize,
    pub old_value: usize,
    pub new_value: usize,
}

#[derive(Clone, Debug)]
pub struct MixedRadixGray {
    // Only coordinates with modulus >= 2 ever move.
    radix: Vec<usize>,
    position: Vec<usize>,
    digits: Vec<usize>,
    ascending: Vec<bool>,
    focus: Vec<usize>,
    remaining: u128,
}

/// Gray enumeration over `moduli`. The iterator yields `∏ moduli − 1` steps;
/// an empty list (or all moduli 1) is the single trivial state and yields
/// nothing.
pub fn mixed_radix_gray(moduli: &[usize]) -> Result<MixedRadixGray> {
    if let Some(j) = moduli.iter().position(|&m| m == 0) {
        return Err(Error::InvalidDimension(j));
    }
    let (radix, position): (Vec<usize>, Vec<usize>) = moduli
        .iter()
        .enumerate()
        .filter(|(_, &m)| m >= 2)
        .map(|(j, &m)| (m, j))
        .unzip();
    let k = radix.len();
    let states = radix.iter().map(|&m| m as u128).product::<u128>();
    Ok(MixedRadixGray {
        digits: vec![0; k],
        ascending: vec![true; k],
        focus: (0..=k).collect(),
        radix,
        position,
        remaining: states - 1,
    })
}

impl Iterator for MixedRadixGray {
    type Item = GrayStep;

    fn next(&mut self) -> Option<GrayStep> {
        let k = self.radix.len();
        let j = self.focus[0];
        self.focus[0] = 0;
        if j == k {
            return None;
        }
        let old_value = self.digits[j];
        if self.ascending[j] {
            self.digits[j] += 1;
        } else {
            self.digits[j] -= 1;
        }
        let a = self.digits[j];
        if a == 0 || a == self.radix[j] - 1 {
            self.ascending[j] = !self.ascending[j];
            self.focus[j] = self.focus[j + 1];
            self.focus[j + 1] = j + 1;
        }
        self.remaining -= 1;
        Some(GrayStep {
            position: self.position[j],
            old_value,
            new_value: a,
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        match usize::try_from(self.remaining) {
            Ok(n) => (n, Some(n)),
            Err(_) => (usize::MAX, None),
        }
    }
}

impl ExactSizeIterator for MixedRadixGray {}
