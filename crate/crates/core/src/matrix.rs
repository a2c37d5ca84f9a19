//! Dense complex matrices, Haar-random unitaries and column-repeating
//! submatrix extraction.
//!
//! Matrices are stored row-major. Indices throughout the crate are 0-based;
//! only the external file formats shift to 1-based port labels.

use std::fmt;
use std::ops::{Index, IndexMut};
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::rng::stream_rng;

/// Tolerance used by [`UnitaryMatrix`] for `‖U†U − I‖_max`.
pub const UNITARITY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 {
            return Err(Error::InvalidDimension(rows));
        }
        if cols == 0 {
            return Err(Error::InvalidDimension(cols));
        }
        Ok(Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim, dim)?;
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        Ok(m)
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 {
            return Err(Error::InvalidDimension(rows));
        }
        if cols == 0 {
            return Err(Error::InvalidDimension(cols));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_vec(r, c, rows.concat())
    }

    /// Real-valued convenience constructor.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)]);
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn adjoint(&self) -> Self {
        let mut t = self.transpose();
        t.data.iter_mut().for_each(|z| *z = z.conj());
        t
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols)?;
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// SHA-256 over the dimensions and the little-endian bit patterns of every
    /// entry. Identifies the exact matrix a sample batch was drawn from.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.rows as u64).to_le_bytes());
        h.update((self.cols as u64).to_le_bytes());
        for z in &self.data {
            h.update(z.re.to_le_bytes());
            h.update(z.im.to_le_bytes());
        }
        hex::encode(h.finalize())
    }

    fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    fn from_nalgebra(m: &DMatrix<Complex64>) -> Result<Self> {
        let mut data = Vec::with_capacity(m.nrows() * m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                data.push(m[(i, j)]);
            }
        }
        Self::from_vec(m.nrows(), m.ncols(), data)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|z| format!("{z:.6}")).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// An `M×M` interferometer. Construction checks unitarity.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix {
    matrix: ComplexMatrix,
    seed: Option<u64>,
}

impl UnitaryMatrix {
    /// Wraps `matrix` after checking `‖A†A − I‖_max ≤ tol`.
    pub fn from_matrix(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        let defect = unitarity_defect(&matrix)?;
        if defect.is_nan() || defect > tol {
            return Err(Error::OutOfDomain {
                name: "unitarity defect",
                value: defect,
                domain: "[0, tol]",
            });
        }
        Ok(Self { matrix, seed: None })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::from_matrix(ComplexMatrix::identity(dim)?, UNITARITY_TOL)
    }

    /// Permutation matrix with `P[perm[j], j] = 1`, i.e. column `j` is routed
    /// to row `perm[j]`.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        check_permutation(perm)?;
        let mut m = ComplexMatrix::zeros(perm.len(), perm.len())?;
        for (j, &i) in perm.iter().enumerate() {
            m[(i, j)] = Complex64::new(1.0, 0.0);
        }
        Self::from_matrix(m, UNITARITY_TOL)
    }

    /// The balanced beamsplitter `(1/√2)[[1, 1], [1, −1]]`.
    pub fn beamsplitter() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let m = ComplexMatrix::from_real_rows(&[vec![s, s], vec![s, -s]]).expect("2x2");
        Self {
            matrix: m,
            seed: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn left_multiply(&self, lhs: &UnitaryMatrix) -> Result<UnitaryMatrix> {
        let m = lhs.matrix.matmul(&self.matrix)?;
        Ok(UnitaryMatrix {
            matrix: m,
            seed: None,
        })
    }

    pub fn to_file(&self) -> MatrixFile {
        let mut f = MatrixFile::from(&self.matrix);
        f.seed = self.seed;
        f
    }

    pub fn read_json(path: impl AsRef<Path>, tol: f64) -> Result<Self> {
        let file: MatrixFile =
            serde_json::from_reader(std::io::BufReader::new(std::fs::File::open(path)?))?;
        let seed = file.seed;
        let mut u = Self::from_matrix(file.into_matrix()?, tol)?;
        u.seed = seed;
        Ok(u)
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, serde_json::to_string(&self.to_file())?)?;
        Ok(())
    }
}

impl AsRef<ComplexMatrix> for UnitaryMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// On-disk matrix layout: `{"rows", "cols", "re": [[..]], "im": [[..]]}`, with
/// an optional `"seed"` for generated unitaries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl MatrixFile {
    pub fn into_matrix(self) -> Result<ComplexMatrix> {
        if self.re.len() != self.rows || self.im.len() != self.rows {
            return Err(Error::Format(format!("expected {} rows", self.rows)));
        }
        let mut data = Vec::with_capacity(self.rows * self.cols);
        for (re, im) in self.re.iter().zip(&self.im) {
            if re.len() != self.cols || im.len() != self.cols {
                return Err(Error::Format(format!("expected {} columns", self.cols)));
            }
            data.extend(re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)));
        }
        ComplexMatrix::from_vec(self.rows, self.cols, data)
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<ComplexMatrix> {
        let file: MatrixFile =
            serde_json::from_reader(std::io::BufReader::new(std::fs::File::open(path)?))?;
        file.into_matrix()
    }
}

impl From<&ComplexMatrix> for MatrixFile {
    fn from(m: &ComplexMatrix) -> Self {
        let re = (0..m.rows)
            .map(|i| m.row(i).iter().map(|z| z.re).collect())
            .collect();
        let im = (0..m.rows)
            .map(|i| m.row(i).iter().map(|z| z.im).collect())
            .collect();
        MatrixFile {
            rows: m.rows,
            cols: m.cols,
            re,
            im,
            seed: None,
        }
    }
}

/// Draws a Haar-random `dim×dim` unitary.
///
/// A Ginibre matrix of i.i.d. standard complex Gaussians is QR-factorized and
/// `Q` is right-multiplied by `diag(R_jj/|R_jj|)`, which removes the phase
/// ambiguity of the factorization and makes the result exactly Haar.
pub fn haar_unitary(dim: usize, seed: u64) -> Result<UnitaryMatrix> {
    if dim == 0 {
        return Err(Error::InvalidDimension(dim));
    }
    let mut rng = stream_rng(seed, 0);
    let data: Vec<Complex64> = (0..dim * dim)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im)
        })
        .collect();
    let ginibre = ComplexMatrix::from_vec(dim, dim, data)?.to_nalgebra();
    let qr = ginibre.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        q.column_mut(j).iter_mut().for_each(|z| *z *= phase);
    }
    let matrix = ComplexMatrix::from_nalgebra(&q)?;
    Ok(UnitaryMatrix {
        matrix,
        seed: Some(seed),
    })
}

/// Rows `row_indices` of `u`, restricted to the columns listed in
/// `port_multiset`, repeated as listed.
pub fn submatrix(
    u: &ComplexMatrix,
    row_indices: &[usize],
    port_multiset: &[usize],
) -> Result<ComplexMatrix> {
    for &i in row_indices {
        if i >= u.rows {
            return Err(Error::IndexOutOfRange {
                index: i,
                bound: u.rows,
            });
        }
    }
    for &l in port_multiset {
        if l >= u.cols {
            return Err(Error::IndexOutOfRange {
                index: l,
                bound: u.cols,
            });
        }
    }
    if port_multiset.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::UnsortedPorts);
    }
    let data = row_indices
        .iter()
        .flat_map(|&i| port_multiset.iter().map(move |&l| u[(i, l)]))
        .collect();
    ComplexMatrix::from_vec(row_indices.len(), port_multiset.len(), data)
}

/// `‖A†A − I‖_max`.
pub fn unitarity_defect(a: &ComplexMatrix) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    let n = a.rows;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..n {
                s += a[(k, i)].conj() * a[(k, j)];
            }
            if i == j {
                s -= 1.0;
            }
            worst = worst.max(s.norm());
        }
    }
    Ok(worst)
}

pub(crate) fn check_permutation(perm: &[usize]) -> Result<()> {
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidPermutation(perm.len()));
        }
    }
    Ok(())
}
