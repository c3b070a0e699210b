//! Completely positive maps in Kraus form, unitary dilation, selective
//! measurement updates, POVMs and the partial-transpose test.

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::classical::ProbDist;
use crate::error::{Error, Result};
use crate::matcore::{
    self, extend_orthonormal, hermitian_eig, identity, max_abs_diff, partial_trace,
    partial_transpose, CMatrix, CVector, ComplexMatrix, C64, CLIP_TOL,
};
use crate::qstate::{DensityMatrix, Ket};
use crate::random;

/// Tolerance on `Σ A†A = I` and on POVM completeness.
pub const COMPLETENESS_TOL: f64 = 1e-9;
/// Branches of a selective update below this probability are dropped.
pub const BRANCH_FLOOR: f64 = 1e-14;

/// Trace-preserving CP map `ρ -> Σ A_i ρ A_i†`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    ops: Vec<CMatrix>,
    record_outputs: bool,
}

impl KrausChannel {
    pub fn new(ops: Vec<CMatrix>) -> Result<Self> {
        let first = ops.first().ok_or(Error::NotTracePreserving { deviation: 1.0 })?;
        let d = matcore::ensure_square(first)?;
        let mut sum = CMatrix::zeros(d, d);
        for a in &ops {
            if a.nrows() != d || a.ncols() != d {
                return Err(Error::ShapeMismatch { rows: d, cols: d, got: a.nrows() * a.ncols() });
            }
            if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::NonFinite);
            }
            sum += a.adjoint() * a;
        }
        let deviation = max_abs_diff(&sum, &identity(d));
        if deviation > COMPLETENESS_TOL {
            return Err(Error::NotTracePreserving { deviation });
        }
        Ok(Self { ops, record_outputs: false })
    }

    /// Mark the channel as one whose Kraus index is an observed outcome.
    pub fn recording(mut self) -> Self {
        self.record_outputs = true;
        self
    }

    pub fn records_outputs(&self) -> bool {
        self.record_outputs
    }

    pub fn unitary(u: CMatrix) -> Result<Self> {
        Self::new(vec![u])
    }

    /// Complete dephasing in the computational basis of dimension `d`.
    pub fn dephasing(d: usize) -> Self {
        let ops = (0..d)
            .map(|k| {
                let mut p = CMatrix::zeros(d, d);
                p[(k, k)] = matcore::ONE;
                p
            })
            .collect();
        Self { ops, record_outputs: false }
    }

    /// `{A_i ⊗ B_j}` acting on the product space.
    pub fn tensor(&self, other: &KrausChannel) -> KrausChannel {
        let ops = self
            .ops
            .iter()
            .flat_map(|a| other.ops.iter().map(move |b| matcore::tensor(a, b)))
            .collect();
        KrausChannel { ops, record_outputs: false }
    }

    pub fn ops(&self) -> &[CMatrix] {
        &self.ops
    }

    pub fn dim(&self) -> usize {
        self.ops[0].nrows()
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }
}

#[derive(Serialize, Deserialize)]
struct ChannelWire {
    kraus: Vec<ComplexMatrix>,
}

impl Serialize for KrausChannel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let kraus = self
            .ops
            .iter()
            .map(|a| ComplexMatrix::from_matrix(a.clone()))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::ser::Error::custom)?;
        ChannelWire { kraus }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for KrausChannel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = ChannelWire::deserialize(deserializer)?;
        KrausChannel::new(wire.kraus.into_iter().map(ComplexMatrix::into_matrix).collect())
            .map_err(serde::de::Error::custom)
    }
}

fn check_input(ch: &KrausChannel, rho: &DensityMatrix) -> Result<()> {
    if ch.dim() != rho.dim() {
        return Err(Error::DimMismatch(format!("channel on {} applied to state of {}", ch.dim(), rho.dim())));
    }
    Ok(())
}

pub fn apply(ch: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    check_input(ch, rho)?;
    let d = rho.dim();
    let mut out = CMatrix::zeros(d, d);
    for a in &ch.ops {
        out += a * rho.matrix() * a.adjoint();
    }
    Ok(DensityMatrix::from_parts(matcore::hermitian_part(&out), rho.dims().to_vec()))
}

/// Post-measurement branches `(p_j, A_j ρ A_j† / p_j)` in Kraus order.
pub fn selective_apply(ch: &KrausChannel, rho: &DensityMatrix) -> Result<Vec<(f64, DensityMatrix)>> {
    check_input(ch, rho)?;
    let mut branches = Vec::with_capacity(ch.len());
    for a in &ch.ops {
        let unnorm = a * rho.matrix() * a.adjoint();
        let p = matcore::trace(&unnorm).re;
        if p < BRANCH_FLOOR {
            continue;
        }
        let state = matcore::hermitian_part(&unnorm) / C64::new(p, 0.0);
        branches.push((p, DensityMatrix::from_parts(state, rho.dims().to_vec())));
    }
    Ok(branches)
}

/// Validate a POVM: each effect PSD and `Σ E_i = I`.
pub fn check_povm(effects: &[CMatrix]) -> Result<usize> {
    let first = effects.first().ok_or(Error::IncompleteEffects { deviation: 1.0 })?;
    let d = matcore::ensure_square(first)?;
    let mut sum = CMatrix::zeros(d, d);
    for (index, e) in effects.iter().enumerate() {
        if e.nrows() != d || e.ncols() != d {
            return Err(Error::ShapeMismatch { rows: d, cols: d, got: e.nrows() * e.ncols() });
        }
        let min_eig = hermitian_eig(e)?.min();
        if min_eig < -CLIP_TOL {
            return Err(Error::NegativeEffect { index, min_eig });
        }
        sum += e;
    }
    let deviation = max_abs_diff(&sum, &identity(d));
    if deviation > COMPLETENESS_TOL {
        return Err(Error::IncompleteEffects { deviation });
    }
    Ok(d)
}

/// Outcome distribution `Tr(ρ E_i)`.
pub fn povm_probs(effects: &[CMatrix], rho: &DensityMatrix) -> Result<ProbDist> {
    let d = check_povm(effects)?;
    if d != rho.dim() {
        return Err(Error::DimMismatch(format!("POVM on {d} applied to state of {}", rho.dim())));
    }
    let probs = effects
        .iter()
        .map(|e| (rho.matrix() * e).trace().re.max(0.0))
        .collect();
    ProbDist::normalized(probs)
}

/// Random POVM with `outcomes` effects `S^{-1/2} P_i S^{-1/2}` built from
/// random PSD `P_i` with `S = Σ P_i`.
pub fn random_povm<R: Rng + ?Sized>(dim: usize, outcomes: usize, rng: &mut R) -> Vec<CMatrix> {
    let raw: Vec<CMatrix> = (0..outcomes).map(|_| random::random_psd(dim, dim, rng)).collect();
    let sum = raw.iter().fold(CMatrix::zeros(dim, dim), |acc, p| acc + p);
    let inv_sqrt = hermitian_eig(&sum).expect("sum of PSD draws is Hermitian").map(|x| 1.0 / x.sqrt());
    raw.iter().map(|p| matcore::hermitian_part(&(&inv_sqrt * p * &inv_sqrt))).collect()
}

/// Projective measurement onto the columns of a unitary.
pub fn basis_projectors(u: &CMatrix) -> Vec<CMatrix> {
    (0..u.ncols()).map(|k| matcore::outer(&u.column(k).into_owned())).collect()
}

/// Unitary `U` on system ⊗ ancilla with `Tr_anc U(ρ ⊗ |α><α|)U† = Φ(ρ)`.
#[derive(Debug, Clone)]
pub struct Dilation {
    pub unitary: CMatrix,
    pub ancilla_state: Ket,
}

impl Dilation {
    pub fn system_dim(&self) -> usize {
        self.unitary.nrows() / self.ancilla_state.dim()
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let d = self.system_dim();
        let k = self.ancilla_state.dim();
        if rho.dim() != d {
            return Err(Error::DimMismatch(format!("dilation on {d} applied to state of {}", rho.dim())));
        }
        let joint = matcore::tensor(rho.matrix(), &matcore::outer(self.ancilla_state.amps()));
        let evolved = &self.unitary * joint * self.unitary.adjoint();
        let out = partial_trace(&evolved, &[d, k], &[0])?;
        Ok(DensityMatrix::from_parts(matcore::hermitian_part(&out), rho.dims().to_vec()))
    }
}

/// Dilation with ancilla `|0>` of dimension K. Columns `c·K` of `U` hold the
/// isometry `W|c> = Σ_i A_i|c> ⊗ |i>`; the rest is any orthonormal completion.
pub fn dilate(ch: &KrausChannel) -> Dilation {
    let d = ch.dim();
    let k = ch.len();
    let n = d * k;
    let iso: Vec<CVector> = (0..d)
        .map(|c| {
            let mut col = CVector::zeros(n);
            for (i, a) in ch.ops.iter().enumerate() {
                for r in 0..d {
                    col[r * k + i] = a[(r, c)];
                }
            }
            col
        })
        .collect();
    let mut fill = extend_orthonormal(&iso, n).into_iter();
    let mut unitary = CMatrix::zeros(n, n);
    for c in 0..d {
        for a in 0..k {
            let col = if a == 0 { iso[c].clone() } else { fill.next().expect("completion size") };
            unitary.set_column(c * k + a, &col);
        }
    }
    let ancilla_state = Ket::basis(0, vec![k]).expect("ancilla index in range");
    Dilation { unitary, ancilla_state }
}

/// Channel with `k` Kraus operators `A_i = <i|U|0>` sliced from a Haar unitary
/// on system ⊗ ancilla.
pub fn random_channel<R: Rng + ?Sized>(d: usize, k: usize, rng: &mut R) -> KrausChannel {
    let u = random::haar_unitary(d * k, rng);
    let ops = (0..k)
        .map(|i| CMatrix::from_fn(d, d, |r, c| u[(r * k + i, c * k)]))
        .collect();
    KrausChannel { ops, record_outputs: false }
}

/// Normalized Choi state `(id ⊗ Φ)(|Ω><Ω|)` with `|Ω> = d^{-1/2} Σ |ii>`,
/// dims `[d, d]`.
pub fn choi_state(ch: &KrausChannel) -> DensityMatrix {
    let d = ch.dim();
    let mut omega = CVector::zeros(d * d);
    for i in 0..d {
        omega[i * d + i] = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    }
    let mut m = CMatrix::zeros(d * d, d * d);
    for a in &ch.ops {
        let v = matcore::tensor(&identity(d), a) * &omega;
        m += matcore::outer(&v);
    }
    DensityMatrix::from_parts(matcore::hermitian_part(&m), vec![d, d])
}

/// Partial-transpose verdict for a bipartite state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PptVerdict {
    pub min_eig: f64,
    pub is_ppt: bool,
    /// True when `d_A·d_B ≤ 6`, where a negative partial transpose is
    /// equivalent to entanglement; otherwise PPT is only necessary for
    /// separability.
    pub conclusive: bool,
}

impl PptVerdict {
    pub fn label(&self) -> &'static str {
        match (self.is_ppt, self.conclusive) {
            (false, _) => "entangled",
            (true, true) => "separable",
            (true, false) => "ppt (separability undecided)",
        }
    }
}

pub fn ppt_check(rho: &DensityMatrix) -> Result<PptVerdict> {
    let (da, db) = rho.bipartite_dims()?;
    let pt = partial_transpose(rho.matrix(), &[da, db], 1)?;
    let min_eig = hermitian_eig(&pt)?.min();
    Ok(PptVerdict { min_eig, is_ppt: min_eig >= -CLIP_TOL, conclusive: da * db <= 6 })
}
