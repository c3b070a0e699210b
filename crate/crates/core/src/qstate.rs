//! Pure and mixed states, the Schmidt decomposition, purification, fidelity
//! and the Bures distance.

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matcore::{
    self, extend_orthonormal, hermitian_eig, max_abs_diff, outer, partial_trace, psd_spectrum,
    CMatrix, CVector, ComplexMatrix, C64, CLIP_TOL, HERMITIAN_TOL,
};
use crate::random;

pub const NORM_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
/// Schmidt coefficients below this are treated as exactly zero.
pub const SCHMIDT_ZERO: f64 = 1e-12;

fn check_dims(len: usize, dims: &[usize]) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) || dims.iter().product::<usize>() != len {
        return Err(Error::DimMismatch(format!("dims {dims:?} do not multiply to {len}")));
    }
    Ok(())
}

/// Normalized state vector over a tensor product of subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    amps: CVector,
    dims: Vec<usize>,
}

impl Ket {
    pub fn new(amps: CVector, dims: Vec<usize>) -> Result<Self> {
        check_dims(amps.len(), &dims)?;
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("ket norm is {norm}")));
        }
        Ok(Self { amps, dims })
    }

    /// Rescale a nonzero vector to unit norm.
    pub fn normalized(amps: CVector, dims: Vec<usize>) -> Result<Self> {
        let norm = amps.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        Self::new(amps / C64::new(norm, 0.0), dims)
    }

    /// Computational basis state `|index>`.
    pub fn basis(index: usize, dims: Vec<usize>) -> Result<Self> {
        let n: usize = dims.iter().product();
        if index >= n {
            return Err(Error::OutOfRange(format!("basis index {index} >= {n}")));
        }
        let mut amps = CVector::zeros(n);
        amps[index] = matcore::ONE;
        Self::new(amps, dims)
    }

    pub fn random<R: Rng + ?Sized>(dims: Vec<usize>, rng: &mut R) -> Result<Self> {
        let n: usize = dims.iter().product();
        Self::new(random::random_unit_vector(n, rng), dims)
    }

    pub fn amps(&self) -> &CVector {
        &self.amps
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn tensor(&self, other: &Ket) -> Ket {
        let amps = self.amps.kronecker(&other.amps);
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Ket { amps, dims }
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix { mat: outer(&self.amps), dims: self.dims.clone() }
    }

    /// `|<self|other>|`
    pub fn overlap(&self, other: &Ket) -> f64 {
        self.amps.dotc(&other.amps).norm()
    }

    /// Equality up to one global phase factor.
    pub fn equal_up_to_phase(&self, other: &Ket, tol: f64) -> bool {
        if self.amps.len() != other.amps.len() {
            return false;
        }
        let inner = self.amps.dotc(&other.amps);
        if inner.norm() < 1e-300 {
            return false;
        }
        let phase = inner / inner.norm();
        (&self.amps * phase - &other.amps).camax() <= tol
    }
}

#[derive(Serialize, Deserialize)]
struct KetWire {
    dims: Vec<usize>,
    amps: Vec<[f64; 2]>,
}

impl Serialize for Ket {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        KetWire { dims: self.dims.clone(), amps: self.amps.iter().map(|z| [z.re, z.im]).collect() }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Ket {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = KetWire::deserialize(deserializer)?;
        let amps = CVector::from_iterator(
            wire.amps.len(),
            wire.amps.iter().map(|[re, im]| C64::new(*re, *im)),
        );
        Ket::new(amps, wire.dims).map_err(serde::de::Error::custom)
    }
}

/// Hermitian, positive semidefinite, unit-trace operator with subsystem dims.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: CMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    pub fn new(mat: CMatrix, dims: Vec<usize>) -> Result<Self> {
        let n = matcore::ensure_square(&mat)?;
        check_dims(n, &dims)?;
        let eig = hermitian_eig(&mat)?;
        let tr = matcore::trace(&mat);
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}")));
        }
        if eig.min() < -CLIP_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {}", eig.min())));
        }
        Ok(Self { mat: matcore::hermitian_part(&mat), dims })
    }

    /// Rescale a PSD matrix to unit trace before validating.
    pub fn from_psd(mat: CMatrix, dims: Vec<usize>) -> Result<Self> {
        let tr = matcore::trace(&mat).re;
        if !(tr > 0.0) {
            return Err(Error::InvalidState("operator has no positive trace".into()));
        }
        Self::new(mat / C64::new(tr, 0.0), dims)
    }

    /// Skip validation for matrices that are density matrices by construction.
    pub(crate) fn from_parts(mat: CMatrix, dims: Vec<usize>) -> Self {
        debug_assert!(max_abs_diff(&mat, &mat.adjoint()) < HERMITIAN_TOL);
        Self { mat, dims }
    }

    pub fn from_complex_matrix(m: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        Self::new(m.into_matrix(), dims)
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let n: usize = dims.iter().product();
        Self { mat: matcore::identity(n) / C64::new(n as f64, 0.0), dims }
    }

    /// Diagonal state in the computational basis.
    pub fn diagonal(probs: &[f64], dims: Vec<usize>) -> Result<Self> {
        let d = CVector::from_iterator(probs.len(), probs.iter().map(|&p| C64::new(p, 0.0)));
        Self::new(CMatrix::from_diagonal(&d), dims)
    }

    pub fn random<R: Rng + ?Sized>(dims: Vec<usize>, rank: usize, rng: &mut R) -> Result<Self> {
        let n: usize = dims.iter().product();
        if rank == 0 || rank > n {
            return Err(Error::BadRank { rank, dim: n });
        }
        Ok(Self::from_parts(random::random_density_matrix(n, rank, rng), dims))
    }

    /// Convex combination `Σ w_i ρ_i`; weights must form a distribution.
    pub fn mixture(items: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = items.first().ok_or(Error::InvalidEnsemble("empty mixture".into()))?;
        let mut acc = CMatrix::zeros(first.1.dim(), first.1.dim());
        for (w, rho) in items {
            if rho.dims != first.1.dims {
                return Err(Error::DimMismatch("mixture members differ in dims".into()));
            }
            acc += &rho.mat * C64::new(*w, 0.0);
        }
        Self::new(acc, first.1.dims.clone())
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn with_dims(self, dims: Vec<usize>) -> Result<Self> {
        check_dims(self.dim(), &dims)?;
        Ok(Self { mat: self.mat, dims })
    }

    /// Bipartite dims `(d_A, d_B)`, or `NotBipartite`.
    pub fn bipartite_dims(&self) -> Result<(usize, usize)> {
        match self.dims.as_slice() {
            [a, b] => Ok((*a, *b)),
            _ => Err(Error::NotBipartite),
        }
    }

    /// Reduced state on the listed subsystems.
    pub fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let mat = partial_trace(&self.mat, &self.dims, keep)?;
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let dims = keep.iter().map(|&k| self.dims[k]).collect();
        Ok(Self::from_parts(matcore::hermitian_part(&mat), dims))
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self::from_parts(matcore::tensor(&self.mat, &other.mat), dims)
    }

    /// `U ρ U†`
    pub fn conjugate(&self, u: &CMatrix) -> Result<DensityMatrix> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::DimMismatch("unitary size differs from state".into()));
        }
        let out = u * &self.mat * u.adjoint();
        Ok(Self::from_parts(matcore::hermitian_part(&out), self.dims.clone()))
    }

    /// Clipped eigenvalues, ascending.
    pub fn spectrum(&self) -> Vec<f64> {
        psd_spectrum(&self.mat).expect("density matrix spectrum is nonnegative")
    }

    pub fn purity(&self) -> f64 {
        (&self.mat * &self.mat).trace().re
    }

    /// Pure within `tol` of unit purity.
    pub fn is_pure(&self, tol: f64) -> bool {
        (self.purity() - 1.0).abs() <= tol
    }
}

#[derive(Serialize, Deserialize)]
struct DensityWire {
    #[serde(flatten)]
    matrix: ComplexMatrix,
    dims: Vec<usize>,
}

impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let matrix = ComplexMatrix::from_matrix(self.mat.clone()).map_err(serde::ser::Error::custom)?;
        DensityWire { matrix, dims: self.dims.clone() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = DensityWire::deserialize(deserializer)?;
        DensityMatrix::from_complex_matrix(wire.matrix, wire.dims).map_err(serde::de::Error::custom)
    }
}

/// `Σ g_n |u_n>|v_n>` with `g` descending. Both bases hold `min(d_A, d_B)`
/// orthonormal vectors; zero coefficients carry completed basis vectors.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub coeffs: Vec<f64>,
    pub basis_a: Vec<CVector>,
    pub basis_b: Vec<CVector>,
}

impl SchmidtDecomposition {
    pub fn nonzero_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().copied().filter(|&g| g > SCHMIDT_ZERO).collect()
    }

    pub fn rank(&self) -> usize {
        self.nonzero_coeffs().len()
    }

    /// Reassembled state vector `Σ g_n u_n ⊗ v_n`.
    pub fn reassemble(&self) -> CVector {
        let da = self.basis_a.first().map_or(0, |v| v.len());
        let db = self.basis_b.first().map_or(0, |v| v.len());
        let mut out = CVector::zeros(da * db);
        for ((g, u), v) in self.coeffs.iter().zip(&self.basis_a).zip(&self.basis_b) {
            out += u.kronecker(v) * C64::new(*g, 0.0);
        }
        out
    }
}

/// Schmidt decomposition by diagonalizing the reduced state of the smaller
/// factor and projecting the ket onto each of its eigenvectors.
pub fn schmidt(psi: &Ket, d_a: usize, d_b: usize) -> Result<SchmidtDecomposition> {
    if d_a == 0 || d_b == 0 || d_a * d_b != psi.dim() {
        return Err(Error::NotBipartite);
    }
    // coefficient matrix c[n][m] = <n m|psi>
    let c = CMatrix::from_row_slice(d_a, d_b, psi.amps.as_slice());
    let swap = d_a > d_b;
    // `small` has the decomposed side as rows
    let small = if swap { c.transpose() } else { c };
    let (ds, dl) = (small.nrows(), small.ncols());
    let reduced = &small * small.adjoint();
    let eig = hermitian_eig(&reduced)?;

    let mut coeffs = Vec::with_capacity(ds);
    let mut basis_s = Vec::with_capacity(ds);
    let mut basis_l: Vec<Option<CVector>> = Vec::with_capacity(ds);
    for k in (0..ds).rev() {
        let g = eig.eigenvalues[k].max(0.0).sqrt();
        let u = eig.eigenvectors.column(k).into_owned();
        // (<u| ⊗ 1)|psi> / g
        let partner = if g > SCHMIDT_ZERO {
            Some(small.transpose() * u.conjugate() / C64::new(g, 0.0))
        } else {
            None
        };
        coeffs.push(if g > SCHMIDT_ZERO { g } else { 0.0 });
        basis_s.push(u);
        basis_l.push(partner);
    }
    let known: Vec<CVector> = basis_l.iter().flatten().cloned().collect();
    let mut fill = extend_orthonormal(&known, dl).into_iter();
    let basis_l: Vec<CVector> = basis_l
        .into_iter()
        .map(|v| v.unwrap_or_else(|| fill.next().expect("enough completion vectors")))
        .collect();

    // the decomposed side came out of the eigensolver; the other side needs the
    // conjugate relation undone when the roles were swapped
    let (basis_a, basis_b) = if swap { (basis_l, basis_s) } else { (basis_s, basis_l) };
    Ok(SchmidtDecomposition { coeffs, basis_a, basis_b })
}

/// Purification `Σ_k √λ_k |e_k>|k>` on `d x d`; the largest eigenvalue is
/// paired with ancilla state `|0>`.
pub fn purify(rho: &DensityMatrix) -> Ket {
    let d = rho.dim();
    let eig = matcore::hermitian_eig_unchecked(rho.matrix());
    let mut amps = CVector::zeros(d * d);
    for (slot, k) in (0..d).rev().enumerate() {
        let lam = eig.eigenvalues[k].max(0.0);
        if lam == 0.0 {
            continue;
        }
        let mut anc = CVector::zeros(d);
        anc[slot] = matcore::ONE;
        amps += eig.eigenvectors.column(k).into_owned().kronecker(&anc) * C64::new(lam.sqrt(), 0.0);
    }
    let norm = amps.norm();
    Ket { amps: amps / C64::new(norm, 0.0), dims: vec![d, d] }
}

fn same_dim(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimMismatch(format!("{} vs {}", rho.dim(), sigma.dim())));
    }
    Ok(())
}

/// Eigenvalues below this are roundoff on a unit-trace state and are dropped
/// before square-rooting, where `√1e-17` would otherwise leave `3e-9` behind.
pub const SQRT_FLOOR: f64 = 1e-14;

fn support_sqrt(rho: &DensityMatrix) -> Result<CMatrix> {
    Ok(hermitian_eig(rho.matrix())?.map(|x| if x < SQRT_FLOOR { 0.0 } else { x.sqrt() }))
}

/// `F(ρ, σ) = Tr √(√ρ σ √ρ) = ‖√ρ √σ‖₁`, clamped to `[0, 1]`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_dim(rho, sigma)?;
    // trace norm of √ρ√σ; singular values avoid square-rooting a product
    let prod = support_sqrt(rho)? * support_sqrt(sigma)?;
    let f: f64 = prod.singular_values().iter().sum();
    Ok(f.clamp(0.0, 1.0))
}

/// `d_B = √(1 - F²)`
pub fn bures_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    let f = fidelity(rho, sigma)?;
    Ok((1.0 - f * f).max(0.0).sqrt())
}

/// `½ ‖ρ - σ‖₁`
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_dim(rho, sigma)?;
    let diff = rho.matrix() - sigma.matrix();
    Ok(0.5 * hermitian_eig(&diff)?.eigenvalues.iter().map(|x| x.abs()).sum::<f64>())
}

pub fn random_state(dim: usize, seed: u64) -> Ket {
    let mut rng = random::seeded(seed);
    Ket::random(vec![dim], &mut rng).expect("random unit vector is normalized")
}

pub fn random_density(dim: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    let mut rng = random::seeded(seed);
    DensityMatrix::random(vec![dim], rank, &mut rng)
}

/// Bloch vector `(x, y, z)` of a qubit state.
pub fn bloch_vector(rho: &DensityMatrix) -> Result<[f64; 3]> {
    if rho.dim() != 2 {
        return Err(Error::DimMismatch("Bloch vector needs a qubit".into()));
    }
    let m = rho.matrix();
    Ok([2.0 * m[(0, 1)].re, -2.0 * m[(0, 1)].im, (m[(0, 0)] - m[(1, 1)]).re])
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::identity;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn ket(values: &[f64], dims: Vec<usize>) -> Ket {
        Ket::normalized(CVector::from_iterator(values.len(), values.iter().map(|&x| c(x))), dims)
            .unwrap()
    }

    fn entropy(spectrum: &[f64]) -> f64 {
        spectrum.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum()
    }

    #[test]
    fn ket_validation() {
        assert!(Ket::new(CVector::from_vec(vec![c(1.0), c(1.0)]), vec![2]).is_err());
        assert!(Ket::new(CVector::from_vec(vec![c(1.0), c(0.0)]), vec![3]).is_err());
        let k = Ket::basis(2, vec![2, 2]).unwrap();
        let json = serde_json::to_string(&k).unwrap();
        assert_eq!(json, r#"{"dims":[2,2],"amps":[[0.0,0.0],[0.0,0.0],[1.0,0.0],[0.0,0.0]]}"#);
        let back: Ket = serde_json::from_str(&json).unwrap();
        assert_eq!(back, k);
    }

    #[test]
    fn density_validation_and_json() {
        let mut bad = identity(2) * c(0.5);
        bad[(0, 1)] = c(0.7);
        bad[(1, 0)] = c(0.7);
        assert!(DensityMatrix::new(bad, vec![2]).is_err());
        assert!(DensityMatrix::new(identity(2), vec![2]).is_err());
        let rho = DensityMatrix::diagonal(&[0.25, 0.75], vec![2]).unwrap();
        let json = serde_json::to_string(&rho).unwrap();
        let back: DensityMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rho);
        assert!(json.contains("\"dims\":[2]"));
    }

    #[test]
    fn schmidt_product_state() {
        let psi = Ket::basis(1, vec![2, 2]).unwrap();
        let sd = schmidt(&psi, 2, 2).unwrap();
        assert_eq!(sd.nonzero_coeffs().len(), 1);
        assert!((sd.nonzero_coeffs()[0] - 1.0).abs() < 1e-12);
        assert!(Ket::normalized(sd.reassemble(), vec![2, 2]).unwrap().equal_up_to_phase(&psi, 1e-12));
    }

    #[test]
    fn schmidt_epr() {
        let psi = ket(&[0.0, 1.0, 1.0, 0.0], vec![2, 2]);
        let sd = schmidt(&psi, 2, 2).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for g in &sd.coeffs {
            assert!((g - s).abs() < 1e-12);
        }
    }

    #[test]
    fn schmidt_random_rectangular() {
        let mut rng = random::seeded(17);
        for (da, db) in [(3, 4), (4, 3), (2, 5)] {
            let psi = Ket::random(vec![da, db], &mut rng).unwrap();
            let sd = schmidt(&psi, da, db).unwrap();
            assert!(sd.rank() <= da.min(db));
            assert!(sd.coeffs.windows(2).all(|w| w[0] >= w[1]));
            let total: f64 = sd.coeffs.iter().map(|g| g * g).sum();
            assert!((total - 1.0).abs() < 1e-10);
            let back = Ket::normalized(sd.reassemble(), vec![da, db]).unwrap();
            assert!(back.equal_up_to_phase(&psi, 1e-9));
            // oracle: spectra of both reductions from direct partial traces
            let rho = psi.to_density();
            let mut sa = rho.reduce(&[0]).unwrap().spectrum();
            let mut sb = rho.reduce(&[1]).unwrap().spectrum();
            sa.reverse();
            sb.reverse();
            for (k, g) in sd.coeffs.iter().enumerate() {
                assert!((sa[k] - g * g).abs() < 1e-9);
                assert!((sb[k] - g * g).abs() < 1e-9);
            }
            assert!((entropy(&sa) - entropy(&sb)).abs() < 1e-9);
            for basis in [&sd.basis_a, &sd.basis_b] {
                for (i, u) in basis.iter().enumerate() {
                    for (j, v) in basis.iter().enumerate() {
                        let expect = if i == j { 1.0 } else { 0.0 };
                        assert!((u.dotc(v) - c(expect)).norm() < 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn schmidt_zero_coefficients_are_completed() {
        // rank-1 state in 3x3: two zero coefficients need completed partners
        let psi = Ket::basis(4, vec![3, 3]).unwrap();
        let sd = schmidt(&psi, 3, 3).unwrap();
        assert_eq!(sd.coeffs.len(), 3);
        assert_eq!(sd.rank(), 1);
        for (i, u) in sd.basis_b.iter().enumerate() {
            for (j, v) in sd.basis_b.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((u.dotc(v) - c(expect)).norm() < 1e-12);
            }
        }
        assert!(schmidt(&psi, 2, 4).is_err());
    }

    #[test]
    fn purify_examples() {
        let pure = DensityMatrix::diagonal(&[1.0, 0.0], vec![2]).unwrap();
        let p = purify(&pure);
        assert!(p.equal_up_to_phase(&Ket::basis(0, vec![2, 2]).unwrap(), 1e-12));

        let mixed = DensityMatrix::maximally_mixed(vec![2]);
        let sd = schmidt(&purify(&mixed), 2, 2).unwrap();
        for g in &sd.coeffs {
            assert!((g - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        }

        let mut rng = random::seeded(2);
        let rho = DensityMatrix::random(vec![4], 3, &mut rng).unwrap();
        let back = purify(&rho).to_density().reduce(&[0]).unwrap();
        assert!(max_abs_diff(back.matrix(), rho.matrix()) < 1e-9);
    }

    #[test]
    fn fidelity_examples() {
        let mut rng = random::seeded(8);
        let rho = DensityMatrix::random(vec![3], 3, &mut rng).unwrap();
        assert!((fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-9);
        let z0 = Ket::basis(0, vec![2]).unwrap().to_density();
        let z1 = Ket::basis(1, vec![2]).unwrap().to_density();
        assert!(fidelity(&z0, &z1).unwrap() < 1e-12);
        assert!((bures_distance(&z0, &z1).unwrap() - 1.0).abs() < 1e-12);
        assert!(bures_distance(&rho, &rho).unwrap() < 1e-4);

        let a = DensityMatrix::diagonal(&[0.5, 0.5], vec![2]).unwrap();
        let b = DensityMatrix::diagonal(&[0.25, 0.75], vec![2]).unwrap();
        let expected = (1.0f64 / 8.0).sqrt() + (3.0f64 / 8.0).sqrt();
        assert!((fidelity(&a, &b).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 0.9659).abs() < 1e-4);

        let s = DensityMatrix::random(vec![3], 2, &mut rng).unwrap();
        let f1 = fidelity(&rho, &s).unwrap();
        let f2 = fidelity(&s, &rho).unwrap();
        assert!((f1 - f2).abs() < 1e-9);
        let db = bures_distance(&rho, &s).unwrap();
        assert!((db * db + f1 * f1 - 1.0).abs() < 1e-12);
        assert!(fidelity(&rho, &z0).is_err());
    }

    #[test]
    fn random_generators() {
        assert_eq!(random_state(4, 99), random_state(4, 99));
        assert_eq!(random_density(3, 2, 5).unwrap(), random_density(3, 2, 5).unwrap());
        let pure = random_density(3, 1, 1).unwrap();
        assert!((pure.purity() - 1.0).abs() < 1e-10);
        assert!(matches!(random_density(3, 4, 1), Err(Error::BadRank { .. })));
        assert!(matches!(random_density(3, 0, 1), Err(Error::BadRank { .. })));
    }

    #[test]
    fn haar_qubits_are_isotropic() {
        let mut rng = random::seeded(1234);
        let mut mean = [0.0; 3];
        let trials = 10_000;
        for _ in 0..trials {
            let r = Ket::random(vec![2], &mut rng).unwrap().to_density();
            let b = bloch_vector(&r).unwrap();
            for k in 0..3 {
                mean[k] += b[k] / trials as f64;
            }
        }
        let norm = mean.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!(norm < 0.05, "mean Bloch vector norm {norm}");
    }
}
