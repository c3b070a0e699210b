//! Dense complex linear algebra: Hermitian eigendecomposition, spectral
//! matrix functions, Kronecker products, partial trace and partial transpose.
//!
//! Composite bases follow one convention everywhere: for subsystems with
//! dimensions `[d0, d1, ..., dk]` the basis state `|i0>|i1>...|ik>` has flat
//! index `((i0 * d1 + i1) * d2 + i2) ...`, i.e. the first factor is the
//! slowest-varying index.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Eigenvalues in `[-CLIP_TOL, 0)` are treated as roundoff and clipped to zero
/// before `log`/`sqrt`; anything more negative is a domain error.
pub const CLIP_TOL: f64 = 1e-10;

/// Asymmetry accepted by [`hermitian_eig`].
pub const HERMITIAN_TOL: f64 = 1e-9;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Validated dense complex matrix; this is the type that crosses the JSON
/// boundary as `{"rows":r,"cols":c,"data":[[re,im],...]}` (row-major).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(CMatrix);

impl ComplexMatrix {
    /// Build from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::ShapeMismatch { rows, cols, got: entries.len() });
        }
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch { rows, cols, got: entries.len() });
        }
        Self::from_matrix(CMatrix::from_row_slice(rows, cols, &entries))
    }

    pub fn from_matrix(m: CMatrix) -> Result<Self> {
        if m.nrows() == 0 || m.ncols() == 0 {
            return Err(Error::ShapeMismatch { rows: m.nrows(), cols: m.ncols(), got: 0 });
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self(m))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    /// Row-major entries.
    pub fn entries(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.0.len());
        for r in 0..self.0.nrows() {
            for c in 0..self.0.ncols() {
                out.push(self.0[(r, c)]);
            }
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixWire {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixWire {
            rows: self.rows(),
            cols: self.cols(),
            data: self.entries().iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = MatrixWire::deserialize(deserializer)?;
        let entries = wire.data.iter().map(|[re, im]| C64::new(*re, *im)).collect();
        ComplexMatrix::new(wire.rows, wire.cols, entries).map_err(serde::de::Error::custom)
    }
}

/// Spectral decomposition of a Hermitian matrix. Eigenvalues ascend; column
/// `k` of `eigenvectors` belongs to `eigenvalues[k]`.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl HermitianEig {
    /// `V diag(f(λ)) V†`.
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> CMatrix {
        let v = &self.eigenvectors;
        let n = v.nrows();
        let mut scaled = v.clone();
        for (k, &lam) in self.eigenvalues.iter().enumerate() {
            let w = f(lam);
            scaled.column_mut(k).scale_mut(w);
        }
        let mut out = &scaled * v.adjoint();
        // Force exact Hermiticity; the product above is Hermitian up to roundoff.
        for i in 0..n {
            out[(i, i)].im = 0.0;
            for j in (i + 1)..n {
                let avg = (out[(i, j)] + out[(j, i)].conj()) * 0.5;
                out[(i, j)] = avg;
                out[(j, i)] = avg.conj();
            }
        }
        out
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.map(|x| x)
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "max_abs_diff: shape mismatch");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `max |m - m†|` entrywise.
pub fn max_asymmetry(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn ensure_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NonSquare { rows: m.nrows(), cols: m.ncols() });
    }
    Ok(m.nrows())
}

/// Hermitian eigendecomposition with ascending eigenvalues.
pub fn hermitian_eig(m: &CMatrix) -> Result<HermitianEig> {
    ensure_square(m)?;
    let asym = max_asymmetry(m);
    if asym > HERMITIAN_TOL {
        return Err(Error::NotHermitian { asymmetry: asym });
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(hermitian_eig_unchecked(m))
}

/// Eigendecomposition of the Hermitian part of `m`, skipping validation.
pub(crate) fn hermitian_eig_unchecked(m: &CMatrix) -> HermitianEig {
    let h = hermitian_part(m);
    let eig = nalgebra::SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let n = m.nrows();
    let mut eigenvectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    HermitianEig { eigenvalues, eigenvectors }
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// Apply a real scalar function through the spectrum of a Hermitian matrix.
/// Fails with `DomainError` if `f` is not finite at some eigenvalue.
pub fn mat_func<F: Fn(f64) -> f64>(m: &CMatrix, f: F) -> Result<CMatrix> {
    let eig = hermitian_eig(m)?;
    for &lam in &eig.eigenvalues {
        if !f(lam).is_finite() {
            return Err(Error::DomainError { eigenvalue: lam });
        }
    }
    Ok(eig.map(f))
}

/// Apply the clipping policy to one eigenvalue of a nominally PSD matrix.
pub fn clip_eigenvalue(lam: f64) -> Result<f64> {
    if lam >= 0.0 {
        Ok(lam)
    } else if lam >= -CLIP_TOL {
        Ok(0.0)
    } else {
        Err(Error::DomainError { eigenvalue: lam })
    }
}

/// Clipped spectrum of a PSD matrix, ascending.
pub fn psd_spectrum(m: &CMatrix) -> Result<Vec<f64>> {
    hermitian_eig(m)?.eigenvalues.into_iter().map(clip_eigenvalue).collect()
}

/// Principal square root of a PSD matrix.
pub fn sqrtm_psd(m: &CMatrix) -> Result<CMatrix> {
    let eig = hermitian_eig(m)?;
    for &lam in &eig.eigenvalues {
        clip_eigenvalue(lam)?;
    }
    Ok(eig.map(|x| x.max(0.0).sqrt()))
}

/// Natural logarithm of a PSD matrix restricted to its support: eigenvalues
/// at or below `CLIP_TOL` map to zero rather than `-inf`.
pub fn logm_support(m: &CMatrix) -> Result<CMatrix> {
    let eig = hermitian_eig(m)?;
    for &lam in &eig.eigenvalues {
        clip_eigenvalue(lam)?;
    }
    Ok(eig.map(|x| if x > CLIP_TOL { x.ln() } else { 0.0 }))
}

/// Kronecker product; `a` carries the slow index.
pub fn tensor(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn tensor_all(factors: &[&CMatrix]) -> CMatrix {
    let mut acc = CMatrix::from_element(1, 1, ONE);
    for f in factors {
        acc = tensor(&acc, f);
    }
    acc
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// `|v><v|`
pub fn outer(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

/// Deviation of `m†m` from identity (max-abs entry).
pub fn unitarity_defect(m: &CMatrix) -> f64 {
    let n = m.ncols();
    max_abs_diff(&(m.adjoint() * m), &identity(n))
}

fn check_dims(m: &CMatrix, dims: &[usize]) -> Result<usize> {
    let n = ensure_square(m)?;
    let total: usize = dims.iter().product();
    if dims.is_empty() || dims.contains(&0) || total != n {
        return Err(Error::DimMismatch(format!(
            "matrix of size {n} does not factor as {dims:?}"
        )));
    }
    Ok(n)
}

fn digits(mut index: usize, dims: &[usize], out: &mut [usize]) {
    for k in (0..dims.len()).rev() {
        out[k] = index % dims[k];
        index /= dims[k];
    }
}

fn compose(digits: &[usize], dims: &[usize], select: &[usize]) -> usize {
    select.iter().fold(0, |acc, &k| acc * dims[k] + digits[k])
}

/// Trace out every subsystem not listed in `keep`. The kept factors retain
/// their original relative order.
pub fn partial_trace(m: &CMatrix, dims: &[usize], keep: &[usize]) -> Result<CMatrix> {
    let n = check_dims(m, dims)?;
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::DimMismatch(format!("subsystem index out of range for {dims:?}")));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
    let kept_dim: usize = keep.iter().map(|&k| dims[k]).product();
    let mut out = CMatrix::zeros(kept_dim, kept_dim);
    let mut dr = vec![0; dims.len()];
    let mut dc = vec![0; dims.len()];
    for r in 0..n {
        digits(r, dims, &mut dr);
        for c in 0..n {
            digits(c, dims, &mut dc);
            if traced.iter().all(|&k| dr[k] == dc[k]) {
                out[(compose(&dr, dims, &keep), compose(&dc, dims, &keep))] += m[(r, c)];
            }
        }
    }
    Ok(out)
}

/// Transpose subsystem `which` only.
pub fn partial_transpose(m: &CMatrix, dims: &[usize], which: usize) -> Result<CMatrix> {
    let n = check_dims(m, dims)?;
    if which >= dims.len() {
        return Err(Error::DimMismatch(format!("subsystem {which} out of range for {dims:?}")));
    }
    let all: Vec<usize> = (0..dims.len()).collect();
    let mut out = CMatrix::zeros(n, n);
    let mut dr = vec![0; dims.len()];
    let mut dc = vec![0; dims.len()];
    for r in 0..n {
        digits(r, dims, &mut dr);
        for c in 0..n {
            digits(c, dims, &mut dc);
            std::mem::swap(&mut dr[which], &mut dc[which]);
            out[(compose(&dr, dims, &all), compose(&dc, dims, &all))] = m[(r, c)];
            std::mem::swap(&mut dr[which], &mut dc[which]);
        }
    }
    Ok(out)
}

/// Orthonormal vectors that complete `basis` (assumed orthonormal) to a basis
/// of the full `dim`-dimensional space. Candidates are standard basis vectors,
/// chosen greedily by largest residual and orthogonalized twice.
pub fn extend_orthonormal(basis: &[CVector], dim: usize) -> Vec<CVector> {
    let mut all: Vec<CVector> = basis.to_vec();
    let mut extra = Vec::new();
    while all.len() < dim {
        let mut best: Option<(f64, CVector)> = None;
        for j in 0..dim {
            let mut v = CVector::zeros(dim);
            v[j] = ONE;
            for _ in 0..2 {
                for b in &all {
                    let proj = b.dotc(&v);
                    v -= b * proj;
                }
            }
            let norm = v.norm();
            if best.as_ref().is_none_or(|(n, _)| norm > *n) {
                best = Some((norm, v));
            }
        }
        let (norm, v) = best.expect("dim > 0");
        let v = v / C64::new(norm, 0.0);
        all.push(v.clone());
        extra.push(v);
    }
    extra
}
