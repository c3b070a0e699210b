//! Von Neumann entropy, quantum relative entropy, mutual information and the
//! Holevo quantity.

use serde::Serialize;

use crate::classical::{self, ProbDist};
use crate::constants::{BOLTZMANN, HBAR};
use crate::error::{Error, Result};
use crate::matcore::{hermitian_eig, psd_spectrum, CMatrix, C64, CLIP_TOL};
use crate::qchannel::povm_probs;
use crate::qstate::DensityMatrix;
use crate::units::{entropy_nats, Units};

/// Mass of `σ` on the kernel of `ρ` above which `S(σ‖ρ)` is infinite.
pub const SUPPORT_TOL: f64 = 1e-9;

/// Weighted family of states `{p_i, ρ_i}` on a common space.
#[derive(Debug, Clone)]
pub struct Ensemble {
    items: Vec<(f64, DensityMatrix)>,
}

impl Ensemble {
    pub fn new(items: Vec<(f64, DensityMatrix)>) -> Result<Self> {
        let first = items.first().ok_or(Error::InvalidEnsemble("no members".into()))?;
        let dims = first.1.dims().to_vec();
        let mut total = 0.0;
        for (p, rho) in &items {
            if !(0.0..=1.0).contains(p) {
                return Err(Error::InvalidEnsemble(format!("weight {p} outside [0, 1]")));
            }
            if rho.dims() != dims.as_slice() {
                return Err(Error::InvalidEnsemble("members differ in dims".into()));
            }
            total += p;
        }
        if (total - 1.0).abs() > classical::PROB_TOL {
            return Err(Error::InvalidEnsemble(format!("weights sum to {total}")));
        }
        Ok(Self { items })
    }

    /// Equal-weight ensemble.
    pub fn uniform(states: Vec<DensityMatrix>) -> Result<Self> {
        let w = 1.0 / states.len().max(1) as f64;
        Self::new(states.into_iter().map(|s| (w, s)).collect())
    }

    pub fn items(&self) -> &[(f64, DensityMatrix)] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn dims(&self) -> &[usize] {
        self.items[0].1.dims()
    }

    /// `ρ̄ = Σ p_i ρ_i`
    pub fn average(&self) -> DensityMatrix {
        let d = self.items[0].1.dim();
        let mut acc = CMatrix::zeros(d, d);
        for (p, rho) in &self.items {
            acc += rho.matrix() * C64::new(*p, 0.0);
        }
        DensityMatrix::from_parts(acc, self.dims().to_vec())
    }
}

/// Clamped at zero: a pure state's eigenvalue `1 + 1e-16` would otherwise
/// give `-1e-16`.
pub(crate) fn von_neumann_nats(rho: &DensityMatrix) -> f64 {
    entropy_nats(rho.spectrum()).max(0.0)
}

/// `S(ρ) = -Tr ρ log ρ`
pub fn von_neumann(rho: &DensityMatrix, units: Units) -> f64 {
    units.from_nats(von_neumann_nats(rho))
}

/// `Tr a (ln a - ln b)` for PSD `a`, `b` of any trace, in nats. Infinite when
/// `a` puts more than [`SUPPORT_TOL`] weight on the kernel of `b`.
pub fn relent_psd_nats(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::DimMismatch(format!("{:?} vs {:?}", a.shape(), b.shape())));
    }
    let eb = hermitian_eig(b)?;
    let mut cross = 0.0;
    let mut kernel_mass = 0.0;
    for (k, &lam) in eb.eigenvalues.iter().enumerate() {
        let v = eb.eigenvectors.column(k);
        let weight = (v.adjoint() * a * v)[(0, 0)].re;
        if lam < CLIP_TOL {
            kernel_mass += weight;
        } else {
            cross += weight * lam.ln();
        }
    }
    if kernel_mass > SUPPORT_TOL {
        return Ok(f64::INFINITY);
    }
    let self_term: f64 =
        psd_spectrum(a)?.into_iter().filter(|&x| x > 0.0).map(|x| x * x.ln()).sum();
    Ok(self_term - cross)
}

pub(crate) fn qrelent_nats(sigma: &DensityMatrix, rho: &DensityMatrix) -> Result<f64> {
    if sigma.dim() != rho.dim() {
        return Err(Error::DimMismatch(format!("{} vs {}", sigma.dim(), rho.dim())));
    }
    Ok(relent_psd_nats(sigma.matrix(), rho.matrix())?.max(0.0))
}

/// `S(σ‖ρ) = Tr σ (log σ - log ρ)`, or `+inf` when the support of `σ` is not
/// contained in that of `ρ`.
pub fn qrelent(sigma: &DensityMatrix, rho: &DensityMatrix, units: Units) -> Result<f64> {
    Ok(units.from_nats(qrelent_nats(sigma, rho)?))
}

/// `I(A:B) = S(A) + S(B) - S(AB)`
pub fn qmutual(rho_ab: &DensityMatrix, units: Units) -> Result<f64> {
    rho_ab.bipartite_dims()?;
    let sa = von_neumann_nats(&rho_ab.reduce(&[0])?);
    let sb = von_neumann_nats(&rho_ab.reduce(&[1])?);
    let sab = von_neumann_nats(rho_ab);
    Ok(units.from_nats((sa + sb - sab).max(0.0)))
}

/// `χ = S(ρ̄) - Σ p_i S(ρ_i)`
pub fn holevo(e: &Ensemble, units: Units) -> f64 {
    let mixed = von_neumann_nats(&e.average());
    let avg: f64 = e.items.iter().map(|(p, rho)| p * von_neumann_nats(rho)).sum();
    units.from_nats((mixed - avg).max(0.0))
}

/// Joint distribution `p_i Tr(ρ_i E_j)`, flattened as `i * effects + j`.
pub fn measurement_joint(e: &Ensemble, effects: &[CMatrix]) -> Result<ProbDist> {
    let mut joint = Vec::with_capacity(e.len() * effects.len());
    for (p, rho) in &e.items {
        let outcome = povm_probs(effects, rho)?;
        joint.extend(outcome.probs().iter().map(|q| p * q));
    }
    ProbDist::normalized(joint)
}

/// Mutual information between the letter index and the outcome of `effects`.
pub fn accessible_info(e: &Ensemble, effects: &[CMatrix], units: Units) -> Result<f64> {
    let joint = measurement_joint(e, effects)?;
    classical::mutual_information(&joint, e.len(), effects.len(), units)
}

/// Capacities of a noisy bosonic channel, bits per second.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BosonicCapacity {
    pub capacity: f64,
    /// `S / (kT ln 2)`; infinite at `T = 0`.
    pub classical_limit: f64,
    /// `(√π / ln 2) √(S/ħ)`
    pub quantum_limit: f64,
    /// The `T -> 0` limit of `capacity`, `√(πS / 3ħ) / ln 2`.
    pub zero_temperature: f64,
}

/// Thermal-noise bosonic channel capacity for signal power `s` (W) at noise
/// temperature `t` (K).
pub fn bosonic_capacity(s: f64, t: f64) -> Result<BosonicCapacity> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::NonPositivePower);
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::OutOfRange(format!("temperature {t} K")));
    }
    let ln2 = std::f64::consts::LN_2;
    let pi = std::f64::consts::PI;
    let zero_temperature = (pi * s / (3.0 * HBAR)).sqrt() / ln2;
    let quantum_limit = pi.sqrt() / ln2 * (s / HBAR).sqrt();
    let (capacity, classical_limit) = if t == 0.0 {
        (zero_temperature, f64::INFINITY)
    } else {
        let kt = BOLTZMANN * t;
        let x = 12.0 * HBAR * s / (pi * kt * kt);
        // √(1+x) - 1 without cancellation at small x
        let root_minus_one = x / ((1.0 + x).sqrt() + 1.0);
        (pi * kt / (6.0 * HBAR * ln2) * root_minus_one, s / (kt * ln2))
    };
    Ok(BosonicCapacity { capacity, classical_limit, quantum_limit, zero_temperature })
}
