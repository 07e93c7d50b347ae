//! Dense complex linear algebra for small multi-party operators.
//!
//! Everything here works on row-major `Complex64` buffers. Operators never
//! exceed a few dozen rows, so plain loops are fast enough and keep the
//! index bookkeeping of tensor products explicit.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for structural checks (Hermiticity, trace, norm).
pub const STRUCTURAL_TOL: f64 = 1e-12;
/// Tolerance for physical assertions (purity, probability equalities).
pub const PHYSICAL_TOL: f64 = 1e-9;
/// Lowest admissible eigenvalue of a density operator.
pub const PSD_TOL: f64 = 1e-10;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows. Panics on ragged input; meant for literals.
    pub fn from_rows<const N: usize>(rows: [[Complex64; N]; N]) -> Self {
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self {
            rows: N,
            cols: N,
            data,
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// `|v><v|` for a column vector `v`.
    pub fn outer(v: &[Complex64]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = v[i] * v[j].conj();
            }
        }
        m
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

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.data[j * self.rows + i] = self.data[i * self.cols + j].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols))
            .map(|i| self.data[i * self.cols + i])
            .sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `Tr(self * rhs)` without forming the product.
    pub fn trace_product(&self, rhs: &Self) -> Result<Complex64> {
        if self.cols != rhs.rows || self.rows != rhs.cols {
            return Err(Error::Dimension(format!(
                "trace of {}x{} times {}x{} is undefined",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut acc = ZERO;
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self.data[i * self.cols + k] * rhs.data[k * rhs.cols + i];
            }
        }
        Ok(acc)
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if self.cols != v.len() {
            return Err(Error::Dimension(format!(
                "{}x{} matrix applied to length-{} vector",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// True when every eigenvalue is at least `-tol`.
    ///
    /// Tests whether `self + tol * I` admits a Cholesky factorisation, which
    /// holds exactly when its smallest eigenvalue is positive.
    pub fn is_positive_semidefinite(&self, tol: f64) -> bool {
        if !self.is_hermitian(1e-9) {
            return false;
        }
        let n = self.rows;
        let mut l = vec![ZERO; n * n];
        for j in 0..n {
            let mut d = self.data[j * n + j].re + tol;
            for k in 0..j {
                d -= l[j * n + k].norm_sqr();
            }
            if d <= 0.0 {
                return false;
            }
            let d = d.sqrt();
            l[j * n + j] = Complex64::new(d, 0.0);
            for i in j + 1..n {
                let mut s = self.data[i * n + j];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k].conj();
                }
                l[i * n + j] = s / d;
            }
        }
        true
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix product dimension mismatch")
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for ia in 0..a.rows {
        for ja in 0..a.cols {
            let x = a[(ia, ja)];
            if x == ZERO {
                continue;
            }
            for ib in 0..b.rows {
                for jb in 0..b.cols {
                    out.data[(ia * b.rows + ib) * cols + ja * b.cols + jb] = x * b[(ib, jb)];
                }
            }
        }
    }
    out
}

pub fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x * y))
        .collect()
}

/// Pauli matrices.
pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_rows([[ZERO, ONE], [ONE, ZERO]])
}

pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::from_rows([[ZERO, -I], [I, ZERO]])
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_rows([[ONE, ZERO], [ZERO, -ONE]])
}

/// `Tr_P[(op ⊗ I) m]` where `op` acts on the leading factor(s) of dimension
/// `op.rows()` and the trailing factor has dimension `m.rows() / op.rows()`.
///
/// This is the workhorse behind every assemblage element: the untrusted
/// parties' projector sits on the prefix and the trusted remainder survives.
pub fn contract_prefix(op: &ComplexMatrix, m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let p = op.rows();
    if !op.is_square() || !m.is_square() || p == 0 || m.rows() % p != 0 {
        return Err(Error::Dimension(format!(
            "prefix operator {}x{} does not divide {}x{}",
            op.rows(),
            op.cols(),
            m.rows(),
            m.cols()
        )));
    }
    let r = m.rows() / p;
    let n = m.rows();
    let mut out = ComplexMatrix::zeros(r, r);
    for i in 0..p {
        for j in 0..p {
            // (op ⊗ I) m traced over the prefix picks op[j][i] * m[(i,c),(j,c')]
            let w = op[(j, i)];
            if w == ZERO {
                continue;
            }
            for c in 0..r {
                let row = &m.data[(i * r + c) * n + j * r..(i * r + c) * n + j * r + r];
                for (cp, v) in row.iter().enumerate() {
                    out.data[c * r + cp] += w * v;
                }
            }
        }
    }
    Ok(out)
}

/// Partial trace of an operator on `dims`, keeping the listed subsystems in
/// their original order.
pub fn partial_trace_matrix(
    m: &ComplexMatrix,
    dims: &[usize],
    keep: &[usize],
) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if !m.is_square() || m.rows() != total {
        return Err(Error::Dimension(format!(
            "operator is {}x{} but dims {:?} give {}",
            m.rows(),
            m.cols(),
            dims,
            total
        )));
    }
    let mut keep_sorted: Vec<usize> = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if let Some(&bad) = keep_sorted.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::SubsystemIndex {
            index: bad,
            parties: dims.len(),
        });
    }
    let kept_dims: Vec<usize> = keep_sorted.iter().map(|&k| dims[k]).collect();
    let traced: Vec<usize> = (0..dims.len())
        .filter(|k| !keep_sorted.contains(k))
        .collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let dk: usize = kept_dims.iter().product();
    let dt: usize = traced_dims.iter().product();

    // Row-major strides of the full index.
    let mut strides = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    let offset = |kept_idx: usize, traced_idx: usize| -> usize {
        let mut pos = 0;
        let mut rem = kept_idx;
        for (slot, &k) in keep_sorted.iter().enumerate().rev() {
            pos += (rem % kept_dims[slot]) * strides[k];
            rem /= kept_dims[slot];
        }
        let mut rem = traced_idx;
        for (slot, &k) in traced.iter().enumerate().rev() {
            pos += (rem % traced_dims[slot]) * strides[k];
            rem /= traced_dims[slot];
        }
        pos
    };

    let mut out = ComplexMatrix::zeros(dk, dk);
    for i in 0..dk {
        for j in 0..dk {
            let mut acc = ZERO;
            for t in 0..dt {
                acc += m[(offset(i, t), offset(j, t))];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// Unit-trace, positive semidefinite operator with explicit tensor factors.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if !matrix.is_square() || matrix.rows() != total || dims.is_empty() {
            return Err(Error::Dimension(format!(
                "density matrix is {}x{} but dims {:?} give {}",
                matrix.rows(),
                matrix.cols(),
                dims,
                total
            )));
        }
        let defect = matrix.hermiticity_defect();
        if defect > STRUCTURAL_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let tr = matrix.trace();
        if (tr - ONE).norm() > STRUCTURAL_TOL {
            return Err(Error::Trace(tr.re));
        }
        if !matrix.is_positive_semidefinite(PSD_TOL) {
            return Err(Error::NotPositive);
        }
        Ok(Self { matrix, dims })
    }

    /// Skips validation; only for operators known to be states by construction.
    pub(crate) fn from_parts_unchecked(matrix: ComplexMatrix, dims: Vec<usize>) -> Self {
        Self { matrix, dims }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        Self {
            matrix: ComplexMatrix::outer(psi.amplitudes()),
            dims: psi.dims().to_vec(),
        }
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let d: usize = dims.iter().product();
        Self {
            matrix: ComplexMatrix::identity(d).scale_real(1.0 / d as f64),
            dims,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let reduced = partial_trace_matrix(&self.matrix, &self.dims, keep)?;
        let mut kept: Vec<usize> = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        let dims = kept.iter().map(|&k| self.dims[k]).collect();
        Ok(Self::from_parts_unchecked(reduced, dims))
    }

    pub fn purity(&self) -> f64 {
        purity(&self.matrix)
    }

    /// Convex combination `w * self + (1 - w) * other`.
    pub fn mix(&self, other: &DensityMatrix, w: f64) -> Result<DensityMatrix> {
        if self.dims != other.dims {
            return Err(Error::Dimension(format!(
                "cannot mix states on {:?} and {:?}",
                self.dims, other.dims
            )));
        }
        let m = &self.matrix.scale_real(w) + &other.matrix.scale_real(1.0 - w);
        Ok(Self::from_parts_unchecked(m, self.dims.clone()))
    }
}

/// Normalised state vector with explicit tensor factors.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
    dims: Vec<usize>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>, dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if amplitudes.len() != total || dims.is_empty() {
            return Err(Error::Dimension(format!(
                "{} amplitudes do not fit dims {:?}",
                amplitudes.len(),
                dims
            )));
        }
        let norm_sqr: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > STRUCTURAL_TOL {
            return Err(Error::Norm(norm_sqr.sqrt()));
        }
        Ok(Self { amplitudes, dims })
    }

    /// Rescales to unit norm before validating.
    pub fn normalized(amplitudes: Vec<Complex64>, dims: Vec<usize>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Norm(norm));
        }
        Self::new(amplitudes.into_iter().map(|z| z / norm).collect(), dims)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &PureState) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm_sqr()
    }
}

pub fn purity(m: &ComplexMatrix) -> f64 {
    // Tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ
    m.as_slice().iter().map(|z| z.norm_sqr()).sum()
}

/// Eigenprojectors `(I ± n·σ)/2` of a 2x2 Hermitian operator with spectrum ±1.
pub fn eigenprojectors_2x2(h: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if h.rows() != 2 || h.cols() != 2 {
        return Err(Error::Dimension(format!(
            "expected 2x2 operator, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    let defect = h.hermiticity_defect();
    if defect > STRUCTURAL_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let bloch = bloch_of_operator(h);
    let trace = h.trace().re;
    let len = (bloch[0] * bloch[0] + bloch[1] * bloch[1] + bloch[2] * bloch[2]).sqrt();
    if trace.abs() > 1e-10 || (len - 1.0).abs() > 1e-10 {
        return Err(Error::Spectrum(format!(
            "eigenvalues are {:.3e} ± {:.3e}, expected ±1",
            trace / 2.0,
            len
        )));
    }
    Ok((bloch_projector(bloch, 1.0), bloch_projector(bloch, -1.0)))
}

/// Coefficients `r` with `h = (Tr h / 2) I + r·σ` for a 2x2 Hermitian `h`.
pub fn bloch_of_operator(h: &ComplexMatrix) -> [f64; 3] {
    let off = (h[(0, 1)] + h[(1, 0)].conj()) * 0.5;
    [off.re, -off.im, (h[(0, 0)].re - h[(1, 1)].re) / 2.0]
}

/// Bloch vector of a (possibly unnormalised) qubit state, normalised by its trace.
pub fn bloch_of_state(rho: &ComplexMatrix) -> [f64; 3] {
    let t = rho.trace().re;
    let r = bloch_of_operator(rho);
    [2.0 * r[0] / t, 2.0 * r[1] / t, 2.0 * r[2] / t]
}

/// `(I + sign * n·σ)/2`.
pub fn bloch_projector(n: [f64; 3], sign: f64) -> ComplexMatrix {
    let h = 0.5 * sign;
    ComplexMatrix::from_rows([
        [
            Complex64::new(0.5 + h * n[2], 0.0),
            Complex64::new(h * n[0], -h * n[1]),
        ],
        [
            Complex64::new(h * n[0], h * n[1]),
            Complex64::new(0.5 - h * n[2], 0.0),
        ],
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_sx_sx_corner_entries() {
        let k = kron(&sigma_x(), &sigma_x());
        assert_eq!(k[(0, 3)], ONE);
        assert_eq!(k[(0, 0)], ZERO);
    }

    #[test]
    fn kron_sz_sz_diagonal() {
        let k = kron(&sigma_z(), &sigma_z());
        let diag: Vec<f64> = (0..4).map(|i| k[(i, i)].re).collect();
        assert_eq!(diag, vec![1.0, -1.0, -1.0, 1.0]);
    }

    #[test]
    fn kron_dimensions() {
        let a = ComplexMatrix::zeros(2, 3);
        let b = ComplexMatrix::zeros(4, 5);
        let k = kron(&a, &b);
        assert_eq!((k.rows(), k.cols()), (8, 15));
    }

    #[test]
    fn partial_trace_of_ghz_is_maximally_mixed() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![ZERO; 8];
        amps[0] = c(s);
        amps[7] = c(s);
        let rho = PureState::new(amps, vec![2, 2, 2]).unwrap().density();
        let rc = rho.partial_trace(&[2]).unwrap();
        assert!(rc.matrix().max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5)) < 1e-15);
        assert_eq!(rc.dims(), &[2]);
    }

    #[test]
    fn partial_trace_of_product_state() {
        let mut amps = vec![ZERO; 8];
        amps[0] = ONE;
        let rho = PureState::new(amps, vec![2, 2, 2]).unwrap().density();
        let rc = rho.partial_trace(&[2]).unwrap();
        assert!(rc.matrix().max_abs_diff(&ComplexMatrix::from_real_diagonal(&[1.0, 0.0])) < 1e-15);
    }

    #[test]
    fn partial_trace_keeps_factor_order() {
        // |0><0| ⊗ |1><1| ⊗ |+><+| keeping (C, A) must return A ⊗ C
        let p0 = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        let p1 = ComplexMatrix::from_real_diagonal(&[0.0, 1.0]);
        let plus = bloch_projector([1.0, 0.0, 0.0], 1.0);
        let full = kron(&kron(&p0, &p1), &plus);
        let ac = partial_trace_matrix(&full, &[2, 2, 2], &[2, 0]).unwrap();
        assert!(ac.max_abs_diff(&kron(&p0, &plus)) < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_index() {
        let rho = DensityMatrix::maximally_mixed(vec![2, 2]);
        assert!(matches!(
            rho.partial_trace(&[2]),
            Err(Error::SubsystemIndex { index: 2, .. })
        ));
    }

    #[test]
    fn purity_examples() {
        assert!((purity(&ComplexMatrix::from_real_diagonal(&[1.0, 0.0])) - 1.0).abs() < 1e-15);
        assert!((purity(&ComplexMatrix::from_real_diagonal(&[0.5, 0.5])) - 0.5).abs() < 1e-15);
        assert!((purity(&ComplexMatrix::from_real_diagonal(&[0.8, 0.2])) - 0.68).abs() < 1e-15);
    }

    #[test]
    fn eigenprojectors_of_pauli_z() {
        let (p, m) = eigenprojectors_2x2(&sigma_z()).unwrap();
        assert!(p.max_abs_diff(&ComplexMatrix::from_real_diagonal(&[1.0, 0.0])) < 1e-15);
        assert!(m.max_abs_diff(&ComplexMatrix::from_real_diagonal(&[0.0, 1.0])) < 1e-15);
    }

    #[test]
    fn eigenprojectors_of_pauli_x() {
        let (p, m) = eigenprojectors_2x2(&sigma_x()).unwrap();
        let id = ComplexMatrix::identity(2);
        assert!(p.max_abs_diff(&(&id + &sigma_x()).scale_real(0.5)) < 1e-15);
        assert!(m.max_abs_diff(&(&id - &sigma_x()).scale_real(0.5)) < 1e-15);
    }

    #[test]
    fn eigenprojectors_of_diagonal_axis() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = (&sigma_x() + &sigma_z()).scale_real(s);
        let (p, m) = eigenprojectors_2x2(&h).unwrap();
        assert!(p.max_abs_diff(&bloch_projector([s, 0.0, s], 1.0)) < 1e-15);
        assert!(m.max_abs_diff(&bloch_projector([-s, 0.0, -s], 1.0)) < 1e-15);
        let b = bloch_of_state(&p);
        assert!((b[0] - s).abs() < 1e-15 && b[1].abs() < 1e-15 && (b[2] - s).abs() < 1e-15);
    }

    #[test]
    fn eigenprojectors_reject_bad_input() {
        let mut nh = sigma_x();
        nh[(0, 1)] = c(2.0);
        assert!(matches!(eigenprojectors_2x2(&nh), Err(Error::NotHermitian(_))));
        assert!(matches!(
            eigenprojectors_2x2(&ComplexMatrix::identity(2)),
            Err(Error::Spectrum(_))
        ));
        assert!(matches!(
            eigenprojectors_2x2(&sigma_z().scale_real(0.5)),
            Err(Error::Spectrum(_))
        ));
    }

    #[test]
    fn density_matrix_validation() {
        assert!(matches!(
            DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.7, 0.7]), vec![2]),
            Err(Error::Trace(_))
        ));
        assert!(matches!(
            DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[1.2, -0.2]), vec![2]),
            Err(Error::NotPositive)
        ));
        assert!(matches!(
            DensityMatrix::new(ComplexMatrix::identity(4).scale_real(0.25), vec![2, 3]),
            Err(Error::Dimension(_))
        ));
        assert!(DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[1.0, 0.0]), vec![2]).is_ok());
    }

    #[test]
    fn pure_state_norm_checked() {
        assert!(matches!(
            PureState::new(vec![ONE, ONE], vec![2]),
            Err(Error::Norm(_))
        ));
        let s = PureState::normalized(vec![ONE, ONE], vec![2]).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn contract_prefix_matches_partial_trace_with_identity() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![ZERO; 8];
        amps[1] = c(s);
        amps[6] = c(s);
        let rho = PureState::new(amps, vec![2, 2, 2]).unwrap().density();
        let via_prefix = contract_prefix(&ComplexMatrix::identity(4), rho.matrix()).unwrap();
        let via_trace = rho.partial_trace(&[2]).unwrap();
        assert!(via_prefix.max_abs_diff(via_trace.matrix()) < 1e-15);
    }
}
