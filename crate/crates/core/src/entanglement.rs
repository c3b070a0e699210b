//! Entanglement measures: pure-state entanglement, the relative entropy of
//! entanglement (numerical minimization over separable states), decomposition
//! measures with an explicit memory register, and loss bounds.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::classical::ProbDist;
use crate::error::{Error, Result};
use crate::matcore::{self, hermitian_eig_unchecked, outer, CMatrix, CVector, C64};
use crate::qentropy::{self, qrelent_nats, von_neumann_nats, Ensemble};
use crate::qstate::{schmidt, DensityMatrix, Ket};
use crate::random;
use crate::units::{entropy_nats, Units};

/// Largest supported `d_A·d_B` for [`ree`].
pub const MAX_REE_DIM: usize = 16;

fn bipartite_ket_dims(psi: &Ket) -> Result<(usize, usize)> {
    match psi.dims() {
        [a, b] => Ok((*a, *b)),
        _ => Err(Error::NotBipartite),
    }
}

pub(crate) fn pure_entanglement_nats(psi: &Ket) -> Result<f64> {
    let (da, db) = bipartite_ket_dims(psi)?;
    let sd = schmidt(psi, da, db)?;
    Ok(entropy_nats(sd.coeffs.iter().map(|g| g * g)))
}

/// Entropy of either reduced state of a bipartite pure state.
pub fn pure_entanglement(psi: &Ket, units: Units) -> Result<f64> {
    Ok(units.from_nats(pure_entanglement_nats(psi)?))
}

/// Mixture of product pure states `Σ q_k |a_k><a_k| ⊗ |b_k><b_k|`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableAnsatz {
    pub weights: Vec<f64>,
    pub kets_a: Vec<CVector>,
    pub kets_b: Vec<CVector>,
}

impl SeparableAnsatz {
    pub fn new(weights: Vec<f64>, kets_a: Vec<CVector>, kets_b: Vec<CVector>) -> Result<Self> {
        ProbDist::new(weights.clone()).map_err(|e| Error::InvalidState(e.to_string()))?;
        if kets_a.len() != weights.len() || kets_b.len() != weights.len() {
            return Err(Error::InvalidState("component counts differ".into()));
        }
        for v in kets_a.iter().chain(&kets_b) {
            if (v.norm() - 1.0).abs() > crate::qstate::NORM_TOL {
                return Err(Error::InvalidState("component ket is not normalized".into()));
            }
        }
        if kets_a.iter().any(|v| v.len() != kets_a[0].len())
            || kets_b.iter().any(|v| v.len() != kets_b[0].len())
        {
            return Err(Error::InvalidState("component kets differ in dimension".into()));
        }
        Ok(Self { weights, kets_a, kets_b })
    }

    /// `k` Haar-random product components with flat-Dirichlet weights.
    pub fn random<R: Rng + ?Sized>(da: usize, db: usize, k: usize, rng: &mut R) -> Self {
        let weights = random::random_simplex(k, rng);
        let kets_a = (0..k).map(|_| random::random_unit_vector(da, rng)).collect();
        let kets_b = (0..k).map(|_| random::random_unit_vector(db, rng)).collect();
        Self { weights, kets_a, kets_b }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.kets_a[0].len(), self.kets_b[0].len())
    }

    fn product(&self, k: usize) -> CVector {
        self.kets_a[k].kronecker(&self.kets_b[k])
    }

    /// `Σ q_k |x_k><x_k|` with `x_k = a_k ⊗ b_k`; no normalization applied.
    pub fn matrix(&self) -> CMatrix {
        let (da, db) = self.dims();
        let mut sigma = CMatrix::zeros(da * db, da * db);
        for k in 0..self.len() {
            sigma += outer(&self.product(k)) * C64::new(self.weights[k], 0.0);
        }
        sigma
    }

    pub fn assemble(&self) -> DensityMatrix {
        let (da, db) = self.dims();
        DensityMatrix::from_parts(matcore::hermitian_part(&self.matrix()), vec![da, db])
    }
}

/// Tangent vector (or gradient) in ansatz coordinates. For complex entries
/// the pairing is `Re(g† d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzTangent {
    pub weights: Vec<f64>,
    pub kets_a: Vec<CVector>,
    pub kets_b: Vec<CVector>,
}

impl AnsatzTangent {
    pub fn pair(&self, other: &AnsatzTangent) -> f64 {
        let w: f64 = self.weights.iter().zip(&other.weights).map(|(x, y)| x * y).sum();
        let a: f64 = self.kets_a.iter().zip(&other.kets_a).map(|(x, y)| x.dotc(y).re).sum();
        let b: f64 = self.kets_b.iter().zip(&other.kets_b).map(|(x, y)| x.dotc(y).re).sum();
        w + a + b
    }

    pub fn random<R: Rng + ?Sized>(like: &SeparableAnsatz, rng: &mut R) -> Self {
        let (da, db) = like.dims();
        let k = like.len();
        let gauss = |n: usize, rng: &mut R| {
            CVector::from_iterator(n, (0..n).map(|_| random::complex_gaussian(rng)))
        };
        Self {
            weights: (0..k).map(|_| random::complex_gaussian(rng).re).collect(),
            kets_a: (0..k).map(|_| gauss(da, rng)).collect(),
            kets_b: (0..k).map(|_| gauss(db, rng)).collect(),
        }
    }
}

/// `f(σ) = S(ρ‖σ_ε)` with `σ_ε = (1-ε)σ + ε I/d`, in nats, as a function of
/// ansatz coordinates (the assembled `σ` is not renormalized).
#[derive(Debug, Clone)]
pub struct ReeObjective {
    rho: CMatrix,
    rho_log_rho: f64,
    epsilon: f64,
}

/// First divided difference of `ln` at `(x, y)`.
fn log_divided_difference(x: f64, y: f64) -> f64 {
    let scale = x.max(y);
    if (x - y).abs() <= 1e-9 * scale {
        2.0 / (x + y)
    } else {
        (x / y).ln() / (x - y)
    }
}

impl ReeObjective {
    pub fn new(rho: &DensityMatrix, epsilon: f64) -> Self {
        let rho_log_rho = -von_neumann_nats(rho);
        Self { rho: rho.matrix().clone(), rho_log_rho, epsilon }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    fn regularize(&self, sigma: &CMatrix) -> CMatrix {
        let d = sigma.nrows();
        let mut out = sigma * C64::new(1.0 - self.epsilon, 0.0);
        for i in 0..d {
            out[(i, i)] += C64::new(self.epsilon / d as f64, 0.0);
        }
        out
    }

    pub fn regularized_state(&self, ansatz: &SeparableAnsatz) -> CMatrix {
        self.regularize(&ansatz.matrix())
    }

    fn value_of(&self, sigma: &CMatrix) -> f64 {
        let eig = hermitian_eig_unchecked(&self.regularize(sigma));
        let v = &eig.eigenvectors;
        let mut cross = 0.0;
        for (k, &lam) in eig.eigenvalues.iter().enumerate() {
            let col = v.column(k);
            let w = (col.adjoint() * &self.rho * col)[(0, 0)].re;
            cross += w * lam.max(f64::MIN_POSITIVE).ln();
        }
        self.rho_log_rho - cross
    }

    pub fn value(&self, ansatz: &SeparableAnsatz) -> f64 {
        self.value_of(&ansatz.matrix())
    }

    /// Hermitian `M` with `df = Tr(M dσ)` for the unregularized `σ`.
    fn sigma_gradient(&self, sigma: &CMatrix) -> CMatrix {
        let eig = hermitian_eig_unchecked(&self.regularize(sigma));
        let v = &eig.eigenvectors;
        let lam: Vec<f64> = eig.eigenvalues.iter().map(|x| x.max(f64::MIN_POSITIVE)).collect();
        let mut inner = v.adjoint() * &self.rho * v;
        let n = lam.len();
        for i in 0..n {
            for j in 0..n {
                inner[(i, j)] *= C64::new(log_divided_difference(lam[i], lam[j]), 0.0);
            }
        }
        v * inner * v.adjoint() * C64::new(-(1.0 - self.epsilon), 0.0)
    }

    /// Exact gradient in ansatz coordinates.
    pub fn gradient(&self, ansatz: &SeparableAnsatz) -> AnsatzTangent {
        let m = self.sigma_gradient(&ansatz.matrix());
        self.gradient_from(ansatz, &m)
    }

    fn gradient_from(&self, ansatz: &SeparableAnsatz, m: &CMatrix) -> AnsatzTangent {
        let (da, db) = ansatz.dims();
        let k = ansatz.len();
        let mut weights = Vec::with_capacity(k);
        let mut kets_a = Vec::with_capacity(k);
        let mut kets_b = Vec::with_capacity(k);
        for c in 0..k {
            let x = ansatz.product(c);
            let mx = m * &x;
            weights.push(x.dotc(&mx).re);
            let (a, b) = (&ansatz.kets_a[c], &ansatz.kets_b[c]);
            let scale = C64::new(2.0 * ansatz.weights[c], 0.0);
            // (1 ⊗ <b|) M x and (<a| ⊗ 1) M x
            let ga = CVector::from_fn(da, |i, _| (0..db).map(|j| b[j].conj() * mx[i * db + j]).sum());
            let gb = CVector::from_fn(db, |j, _| (0..da).map(|i| a[i].conj() * mx[i * db + j]).sum());
            kets_a.push(ga * scale);
            kets_b.push(gb * scale);
        }
        AnsatzTangent { weights, kets_a, kets_b }
    }

    pub fn directional_derivative(&self, ansatz: &SeparableAnsatz, direction: &AnsatzTangent) -> f64 {
        self.gradient(ansatz).pair(direction)
    }

    /// Move along `direction` without renormalizing, for derivative checks.
    pub fn displaced(ansatz: &SeparableAnsatz, direction: &AnsatzTangent, t: f64) -> SeparableAnsatz {
        let tc = C64::new(t, 0.0);
        SeparableAnsatz {
            weights: ansatz.weights.iter().zip(&direction.weights).map(|(w, d)| w + t * d).collect(),
            kets_a: ansatz.kets_a.iter().zip(&direction.kets_a).map(|(a, d)| a + d * tc).collect(),
            kets_b: ansatz.kets_b.iter().zip(&direction.kets_b).map(|(b, d)| b + d * tc).collect(),
        }
    }
}

/// Euclidean projection onto the probability simplex.
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        cumulative += x;
        let t = (cumulative - 1.0) / (i + 1) as f64;
        if x - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReeOptions {
    /// Components in the separable ansatz; `None` means `(d_A·d_B)²`.
    pub components: Option<usize>,
    pub restarts: usize,
    pub max_iters: usize,
    /// Relative objective decrease per sweep below which a run has converged.
    pub tol: f64,
    pub seed: u64,
    pub epsilon: f64,
    pub units: Units,
}

impl Default for ReeOptions {
    fn default() -> Self {
        Self {
            components: None,
            restarts: 8,
            max_iters: 5000,
            tol: 1e-8,
            seed: 0,
            epsilon: 1e-9,
            units: Units::Bits,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReeResult {
    pub value: f64,
    pub units: Units,
    pub closest_state: DensityMatrix,
    pub iterations: usize,
    pub converged: bool,
    pub restarts_used: usize,
}

struct RunOutcome {
    ansatz: SeparableAnsatz,
    value: f64,
    iterations: usize,
    converged: bool,
}

const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1e-16;
/// Objective scale below which relative progress is measured absolutely.
const OBJECTIVE_FLOOR: f64 = 1e-7;

fn normalize(v: CVector) -> CVector {
    let n = v.norm();
    v / C64::new(n, 0.0)
}

/// Riemannian gradient step on the component kets with Armijo backtracking.
fn ket_step(
    obj: &ReeObjective,
    ansatz: &mut SeparableAnsatz,
    f: &mut f64,
    grad: &AnsatzTangent,
    step: &mut f64,
) {
    let tangent = |vs: &[CVector], gs: &[CVector]| -> Vec<CVector> {
        vs.iter().zip(gs).map(|(v, g)| g - v * v.dotc(g)).collect()
    };
    let ga = tangent(&ansatz.kets_a, &grad.kets_a);
    let gb = tangent(&ansatz.kets_b, &grad.kets_b);
    let norm2: f64 = ga.iter().chain(&gb).map(|g| g.norm_squared()).sum();
    if norm2 == 0.0 {
        return;
    }
    let mut t = *step;
    while t > MIN_STEP {
        let tc = C64::new(t, 0.0);
        let candidate = SeparableAnsatz {
            weights: ansatz.weights.clone(),
            kets_a: ansatz.kets_a.iter().zip(&ga).map(|(a, g)| normalize(a - g * tc)).collect(),
            kets_b: ansatz.kets_b.iter().zip(&gb).map(|(b, g)| normalize(b - g * tc)).collect(),
        };
        let fc = obj.value(&candidate);
        if fc <= *f - ARMIJO * t * norm2 {
            *ansatz = candidate;
            *f = fc;
            *step = (t * 2.0).min(1e6);
            return;
        }
        t *= 0.5;
    }
    *step = t.max(1e-8);
}

/// Projected gradient step on the weights with Armijo backtracking.
fn weight_step(obj: &ReeObjective, ansatz: &mut SeparableAnsatz, f: &mut f64, grad: &[f64], step: &mut f64) {
    let mut t = *step;
    while t > MIN_STEP {
        let trial: Vec<f64> = ansatz.weights.iter().zip(grad).map(|(w, g)| w - t * g).collect();
        let weights = project_simplex(&trial);
        let moved: f64 = weights.iter().zip(&ansatz.weights).map(|(a, b)| (a - b).powi(2)).sum();
        if moved == 0.0 {
            return;
        }
        let candidate = SeparableAnsatz { weights, ..ansatz.clone() };
        let fc = obj.value(&candidate);
        if fc <= *f - ARMIJO / t * moved {
            *ansatz = candidate;
            *f = fc;
            *step = (t * 2.0).min(1e6);
            return;
        }
        t *= 0.5;
    }
    *step = t.max(1e-8);
}

fn run_once(obj: &ReeObjective, mut ansatz: SeparableAnsatz, opts: &ReeOptions) -> RunOutcome {
    let mut f = obj.value(&ansatz);
    let (mut ket_t, mut weight_t) = (1.0, 1.0);
    let mut converged = false;
    let mut iterations = 0;
    while iterations < opts.max_iters {
        iterations += 1;
        let start = f;
        let grad = obj.gradient(&ansatz);
        ket_step(obj, &mut ansatz, &mut f, &grad, &mut ket_t);
        let grad = obj.gradient(&ansatz);
        weight_step(obj, &mut ansatz, &mut f, &grad.weights, &mut weight_t);
        if start - f <= opts.tol * start.abs().max(OBJECTIVE_FLOOR) {
            converged = true;
            break;
        }
    }
    RunOutcome { ansatz, value: f, iterations, converged }
}

/// Relative entropy of entanglement `min_{σ separable} S(ρ‖σ)`, estimated by
/// multi-restart descent over a separable ansatz. The result is an upper
/// bound on the true minimum.
pub fn ree(rho: &DensityMatrix, opts: &ReeOptions) -> Result<ReeResult> {
    let (da, db) = rho.bipartite_dims()?;
    if da * db > MAX_REE_DIM {
        return Err(Error::TooLarge(format!("ree supports d_A·d_B ≤ {MAX_REE_DIM}, got {}", da * db)));
    }
    if opts.restarts == 0 {
        return Err(Error::OutOfRange("at least one restart is required".into()));
    }
    let k = opts.components.unwrap_or((da * db) * (da * db)).max(1);
    let obj = ReeObjective::new(rho, opts.epsilon);
    let runs: Vec<RunOutcome> = (0..opts.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = random::child(opts.seed, r as u64);
            run_once(&obj, SeparableAnsatz::random(da, db, k, &mut rng), opts)
        })
        .collect();
    // first minimum wins, so the merge does not depend on scheduling
    let best = runs
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.value.total_cmp(&b.value).then(i.cmp(j)))
        .map(|(_, run)| run)
        .expect("at least one restart");
    let sigma = obj.regularized_state(&best.ansatz);
    let closest_state = DensityMatrix::from_psd(sigma, vec![da, db])?;
    let value = qrelent_nats(rho, &closest_state)?;
    Ok(ReeResult {
        value: opts.units.from_nats(value),
        units: opts.units,
        closest_state,
        iterations: runs.iter().map(|r| r.iterations).sum(),
        converged: best.converged,
        restarts_used: opts.restarts,
    })
}

/// Decomposition entanglement of a pure-state ensemble, with the explicit
/// memory-register construction evaluated alongside it.
#[derive(Debug, Clone, Serialize)]
pub struct EnsembleEntanglement {
    /// `Σ p_i E_v(ψ_i)`
    pub value: f64,
    /// `S(ρ_ABM ‖ σ_ABM)` for memory flags `|m_i>` and Schmidt-dephased `σ_i`.
    pub memory_relative_entropy: f64,
    pub units: Units,
}

fn pure_ket_of(rho: &DensityMatrix, index: usize) -> Result<Ket> {
    if !rho.is_pure(1e-9) {
        return Err(Error::NotPure(index));
    }
    let eig = hermitian_eig_unchecked(rho.matrix());
    let top = eig.eigenvectors.column(rho.dim() - 1).into_owned();
    Ket::normalized(top, rho.dims().to_vec())
}

/// `|ψ>` with its off-diagonal Schmidt coherences removed.
pub fn schmidt_dephased(psi: &Ket) -> Result<DensityMatrix> {
    let (da, db) = bipartite_ket_dims(psi)?;
    let sd = schmidt(psi, da, db)?;
    let mut sigma = CMatrix::zeros(da * db, da * db);
    for ((g, u), v) in sd.coeffs.iter().zip(&sd.basis_a).zip(&sd.basis_b) {
        sigma += outer(&u.kronecker(v)) * C64::new(g * g, 0.0);
    }
    DensityMatrix::new(matcore::hermitian_part(&sigma), vec![da, db])
}

/// `ρ_ABM = Σ p_i ρ_i ⊗ |i><i|` with subsystem order `[A, B, M]`.
pub fn attach_memory(items: &[(f64, DensityMatrix)]) -> Result<DensityMatrix> {
    let n = items.len();
    let first = &items.first().ok_or(Error::InvalidEnsemble("no members".into()))?.1;
    let mut dims = first.dims().to_vec();
    dims.push(n);
    let d = first.dim() * n;
    let mut acc = CMatrix::zeros(d, d);
    for (i, (p, rho)) in items.iter().enumerate() {
        let mut flag = CMatrix::zeros(n, n);
        flag[(i, i)] = matcore::ONE;
        acc += matcore::tensor(rho.matrix(), &flag) * C64::new(*p, 0.0);
    }
    DensityMatrix::new(acc, dims)
}

pub fn ensemble_entanglement(e: &Ensemble, units: Units) -> Result<EnsembleEntanglement> {
    let mut value = 0.0;
    let mut kets = Vec::with_capacity(e.len());
    for (i, (p, rho)) in e.items().iter().enumerate() {
        let psi = pure_ket_of(rho, i)?;
        value += p * pure_entanglement_nats(&psi)?;
        kets.push(psi);
    }
    let rho_abm = attach_memory(e.items())?;
    let sigma_items = e
        .items()
        .iter()
        .zip(&kets)
        .map(|((p, _), psi)| Ok((*p, schmidt_dephased(psi)?)))
        .collect::<Result<Vec<_>>>()?;
    let sigma_abm = attach_memory(&sigma_items)?;
    let memory = qrelent_nats(&rho_abm, &sigma_abm)?;
    Ok(EnsembleEntanglement {
        value: units.from_nats(value),
        memory_relative_entropy: units.from_nats(memory),
        units,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LossBound {
    /// `Σ p_i E(ρ_i) - E(ρ̄)`
    pub lhs: f64,
    /// `Σ p_i S(ρ_i‖ρ̄)`
    pub rhs: f64,
    pub holds: bool,
}

/// Entanglement lost on forgetting which member was prepared, against the
/// Holevo quantity. `measure` returns values in `units`; `slack` absorbs
/// optimizer error when `measure` is numerical.
pub fn entanglement_loss_bound<F>(e: &Ensemble, measure: F, units: Units, slack: f64) -> Result<LossBound>
where
    F: Fn(&DensityMatrix) -> Result<f64>,
{
    let mut members = 0.0;
    for (p, rho) in e.items() {
        members += p * measure(rho)?;
    }
    let lhs = members - measure(&e.average())?;
    let rhs = qentropy::holevo(e, units);
    Ok(LossBound { lhs, rhs, holds: lhs <= rhs + slack })
}

fn two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dims() != [2, 2] {
        return Err(Error::NotTwoQubit);
    }
    Ok(())
}

/// `1 + S(ρ_B) - S(ρ_AB)` in bits, returned raw.
pub fn cgdc_bound(rho_ab: &DensityMatrix) -> Result<f64> {
    two_qubit(rho_ab)?;
    let sb = von_neumann_nats(&rho_ab.reduce(&[1])?);
    Ok(1.0 + Units::Bits.from_nats(sb - von_neumann_nats(rho_ab)))
}

/// `min[S(ρ_A), S(ρ_B)]`, the upper bound on entanglement of assistance.
pub fn assistance_upper_bound(rho_ab: &DensityMatrix, units: Units) -> Result<f64> {
    rho_ab.bipartite_dims()?;
    let sa = von_neumann_nats(&rho_ab.reduce(&[0])?);
    let sb = von_neumann_nats(&rho_ab.reduce(&[1])?);
    Ok(units.from_nats(sa.min(sb)))
}

/// Sides of the memory-loss inequalities for a pure-state decomposition of
/// `ρ_AB`, all in `units`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MemoryBounds {
    /// Entanglement of the purification across `(MA):B`, i.e. `S(ρ_B)`.
    pub purification_entanglement: f64,
    /// `Σ p_i E_v(ψ_i)` for the given decomposition.
    pub decomposition_value: f64,
    pub state_entropy: f64,
    pub assistance_upper_bound: f64,
}

impl MemoryBounds {
    /// `S(ρ_B) ≤ Σ p_i E_v(ψ_i) + S(ρ_AB)`
    pub fn purification_bound_holds(&self, tol: f64) -> bool {
        self.purification_entanglement <= self.decomposition_value + self.state_entropy + tol
    }
}

pub fn memory_bounds(e: &Ensemble, units: Units) -> Result<MemoryBounds> {
    let avg = e.average();
    let value = ensemble_entanglement(e, units)?.value;
    Ok(MemoryBounds {
        purification_entanglement: units.from_nats(von_neumann_nats(&avg.reduce(&[1])?)),
        decomposition_value: value,
        state_entropy: units.from_nats(von_neumann_nats(&avg)),
        assistance_upper_bound: assistance_upper_bound(&avg, units)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qchannel::ppt_check;
    use crate::qentropy::qrelent;
    use crate::random::seeded;

    fn ket(values: &[f64]) -> Ket {
        let amps = CVector::from_iterator(values.len(), values.iter().map(|&x| C64::new(x, 0.0)));
        Ket::normalized(amps, vec![2, 2]).unwrap()
    }

    #[test]
    fn pure_entanglement_examples() {
        assert!(pure_entanglement(&ket(&[0.0, 1.0, 0.0, 0.0]), Units::Bits).unwrap().abs() < 1e-12);
        assert!((pure_entanglement(&ket(&[1.0, 0.0, 0.0, 1.0]), Units::Bits).unwrap() - 1.0).abs() < 1e-12);
        let (a2, b2) = (0.2f64, 0.8f64);
        let psi = ket(&[a2.sqrt(), 0.0, 0.0, b2.sqrt()]);
        let expected = -(a2 * a2.log2() + b2 * b2.log2());
        assert!((pure_entanglement(&psi, Units::Bits).unwrap() - expected).abs() < 1e-12);
        let single = Ket::basis(0, vec![4]).unwrap();
        assert!(matches!(pure_entanglement(&single, Units::Bits), Err(Error::NotBipartite)));
    }

    #[test]
    fn simplex_projection() {
        let p = project_simplex(&[0.5, 0.5, 0.5]);
        assert!(p.iter().all(|x| (x - 1.0 / 3.0).abs() < 1e-15));
        let p = project_simplex(&[2.0, 0.0, -1.0]);
        assert_eq!(p, vec![1.0, 0.0, 0.0]);
        let p = project_simplex(&[0.2, 0.3, 0.5]);
        assert!(p.iter().zip([0.2, 0.3, 0.5]).all(|(x, y)| (x - y).abs() < 1e-15));
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = seeded(11);
        for _ in 0..10 {
            let rho = DensityMatrix::random(vec![2, 2], 4, &mut rng).unwrap();
            let obj = ReeObjective::new(&rho, 1e-9);
            let ansatz = SeparableAnsatz::random(2, 2, 6, &mut rng);
            let dir = AnsatzTangent::random(&ansatz, &mut rng);
            let h = 1e-5;
            let fd = (obj.value(&ReeObjective::displaced(&ansatz, &dir, h))
                - obj.value(&ReeObjective::displaced(&ansatz, &dir, -h)))
                / (2.0 * h);
            let exact = obj.directional_derivative(&ansatz, &dir);
            assert!((fd - exact).abs() <= 1e-4 * exact.abs().max(fd.abs()), "{fd} vs {exact}");
        }
    }

    #[test]
    fn ree_bell_state() {
        let rho = ket(&[1.0, 0.0, 0.0, 1.0]).to_density();
        let res = ree(&rho, &ReeOptions::default()).unwrap();
        assert!((res.value - 1.0).abs() < 1e-3, "ree = {}", res.value);
        assert!(ppt_check(&res.closest_state).unwrap().is_ppt);
        let check = qrelent(&rho, &res.closest_state, Units::Bits).unwrap();
        assert!((check - res.value).abs() < 1e-9);
    }

    #[test]
    fn ree_separable_state_is_small() {
        let mut rng = seeded(12);
        let rho = SeparableAnsatz::random(2, 2, 3, &mut rng).assemble();
        let res = ree(&rho, &ReeOptions { restarts: 2, ..Default::default() }).unwrap();
        assert!(res.value < 1e-3, "ree = {}", res.value);
        assert!(matches!(
            ree(&DensityMatrix::maximally_mixed(vec![4, 5]), &ReeOptions::default()),
            Err(Error::TooLarge(_))
        ));
    }

    #[test]
    fn ensemble_examples() {
        let phi_plus = ket(&[1.0, 0.0, 0.0, 1.0]).to_density();
        let phi_minus = ket(&[1.0, 0.0, 0.0, -1.0]).to_density();
        let single = Ensemble::new(vec![(1.0, phi_plus.clone())]).unwrap();
        let res = ensemble_entanglement(&single, Units::Bits).unwrap();
        assert!((res.value - 1.0).abs() < 1e-12);
        assert!((res.memory_relative_entropy - res.value).abs() < 1e-9);

        let pair = Ensemble::uniform(vec![phi_plus, phi_minus]).unwrap();
        let res = ensemble_entanglement(&pair, Units::Bits).unwrap();
        assert!((res.value - 1.0).abs() < 1e-12);
        let avg = pair.average();
        assert!(ppt_check(&avg).unwrap().is_ppt);
        let mixed = Ensemble::uniform(vec![avg.clone(), avg]).unwrap();
        assert!(matches!(ensemble_entanglement(&mixed, Units::Bits), Err(Error::NotPure(0))));

        let mut rng = seeded(13);
        let members = (0..3).map(|_| Ket::random(vec![2, 3], &mut rng).unwrap().to_density()).collect();
        let e = Ensemble::new(random::random_simplex(3, &mut rng).into_iter().zip::<Vec<_>>(members).collect()).unwrap();
        let res = ensemble_entanglement(&e, Units::Bits).unwrap();
        assert!((res.memory_relative_entropy - res.value).abs() < 1e-9);
    }

    #[test]
    fn cgdc_examples() {
        assert!((cgdc_bound(&ket(&[1.0, 0.0, 0.0, 1.0]).to_density()).unwrap() - 2.0).abs() < 1e-12);
        assert!((cgdc_bound(&ket(&[0.0, 0.0, 1.0, 0.0]).to_density()).unwrap() - 1.0).abs() < 1e-12);
        assert!(cgdc_bound(&DensityMatrix::maximally_mixed(vec![2, 2])).unwrap().abs() < 1e-12);
        assert!(matches!(cgdc_bound(&DensityMatrix::maximally_mixed(vec![2, 3])), Err(Error::NotTwoQubit)));
    }

    #[test]
    fn loss_bound_with_exact_measure() {
        let phi_plus = ket(&[1.0, 0.0, 0.0, 1.0]).to_density();
        let phi_minus = ket(&[1.0, 0.0, 0.0, -1.0]).to_density();
        let single = Ensemble::new(vec![(1.0, phi_plus.clone())]).unwrap();
        let zero = |_: &DensityMatrix| Ok(0.0);
        let b = entanglement_loss_bound(&single, zero, Units::Bits, 0.0).unwrap();
        assert!(b.lhs.abs() < 1e-12 && b.rhs.abs() < 1e-12 && b.holds);

        // the average of the two Bell states is separable, so E(ρ̄) = 0
        let pair = Ensemble::uniform(vec![phi_plus, phi_minus]).unwrap();
        let measure = |rho: &DensityMatrix| {
            if rho.is_pure(1e-9) {
                pure_entanglement(&pure_ket_of(rho, 0)?, Units::Bits)
            } else {
                Ok(0.0)
            }
        };
        let b = entanglement_loss_bound(&pair, measure, Units::Bits, 1e-9).unwrap();
        assert!((b.lhs - 1.0).abs() < 1e-12);
        assert!((b.rhs - 1.0).abs() < 1e-12);
        assert!(b.holds);
    }

    #[test]
    fn memory_bound_examples() {
        let mut rng = seeded(14);
        let members: Vec<_> = (0..3).map(|_| Ket::random(vec![2, 2], &mut rng).unwrap().to_density()).collect();
        let e = Ensemble::uniform(members.clone()).unwrap();
        let b = memory_bounds(&e, Units::Bits).unwrap();
        assert!(b.purification_bound_holds(1e-9));
        assert!(b.decomposition_value <= b.assistance_upper_bound + 1e-9);
        // pure state: S(ρ_AB) = 0 and every side coincides
        let pure = Ensemble::new(vec![(1.0, members[0].clone())]).unwrap();
        let b = memory_bounds(&pure, Units::Bits).unwrap();
        assert!(b.state_entropy.abs() < 1e-9);
        assert!((b.purification_entanglement - b.decomposition_value).abs() < 1e-9);
        assert!((b.assistance_upper_bound - b.decomposition_value).abs() < 1e-9);
    }
}
