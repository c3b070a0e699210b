//! Teleportation, dense coding, Schumacher compression, Landauer erasure and
//! the Bekenstein limits.

use rand::Rng;
use serde::Serialize;

use crate::classical::binomial;
use crate::constants::{HBAR, PROTON_MASS, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::matcore::{self, hermitian_eig, CMatrix, CVector, C64, CLIP_TOL, ONE, ZERO};
use crate::qentropy::{self, Ensemble, SUPPORT_TOL};
use crate::qstate::{DensityMatrix, Ket};
use crate::random;
use crate::units::{binary_entropy_bits, entropy_nats, Units};

fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

fn pauli_y() -> CMatrix {
    let i = C64::new(0.0, 1.0);
    CMatrix::from_row_slice(2, 2, &[ZERO, -i, i, ZERO])
}

fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

/// `I, X, Y, Z`
pub fn paulis() -> [CMatrix; 4] {
    [matcore::identity(2), pauli_x(), pauli_y(), pauli_z()]
}

/// `(|00> + |11>)/√2`
pub fn phi_plus() -> Ket {
    let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    Ket::new(CVector::from_row_slice(&[s, ZERO, ZERO, s]), vec![2, 2]).expect("normalized")
}

fn pauli_power(m: &CMatrix, bit: u8) -> CMatrix {
    if bit == 1 { m.clone() } else { matcore::identity(2) }
}

/// Bell state `(Z^z X^x ⊗ I)|Φ+>` for outcome bits `(z, x)` packed as `2z + x`.
pub fn bell_state(outcome: u8) -> Ket {
    let (z, x) = (outcome >> 1 & 1, outcome & 1);
    let local = pauli_power(&pauli_z(), z) * pauli_power(&pauli_x(), x);
    let op = matcore::tensor(&local, &matcore::identity(2));
    Ket::new(op * phi_plus().amps(), vec![2, 2]).expect("unitary image of a unit vector")
}

#[derive(Debug, Clone, Serialize)]
pub struct TeleportationOutcome {
    /// Bell outcome `2z + x`; Bob applies `Z^z X^x`.
    pub classical_bits: u8,
    pub probability: f64,
    pub output: Ket,
    pub fidelity_to_input: f64,
    /// Alice's input-qubit state right after her measurement.
    pub alice_residual: DensityMatrix,
}

fn teleport_branch(input: &Ket, outcome: u8) -> Result<TeleportationOutcome> {
    // qubit order: input (Alice), pair half (Alice), pair half (Bob)
    let total = input.tensor(&phi_plus());
    let bell = bell_state(outcome);
    let mut bob = CVector::zeros(2);
    for k in 0..4 {
        for j in 0..2 {
            bob[j] += bell.amps()[k].conj() * total.amps()[k * 2 + j];
        }
    }
    let probability = bob.norm_squared();
    let (z, x) = (outcome >> 1 & 1, outcome & 1);
    let correction = pauli_power(&pauli_z(), z) * pauli_power(&pauli_x(), x);
    let output = Ket::normalized(correction * bob, vec![2])?;
    let fidelity_to_input = output.overlap(input).powi(2);
    let post = bell.tensor(&output).to_density();
    let alice_residual = post.reduce(&[0])?;
    Ok(TeleportationOutcome { classical_bits: outcome, probability, output, fidelity_to_input, alice_residual })
}

fn check_qubit(input: &Ket) -> Result<()> {
    if input.dim() != 2 {
        return Err(Error::DimMismatch("teleportation input must be one qubit".into()));
    }
    Ok(())
}

/// All four measurement branches in outcome order.
pub fn teleport_all_branches(input: &Ket) -> Result<Vec<TeleportationOutcome>> {
    check_qubit(input)?;
    (0..4).map(|b| teleport_branch(input, b)).collect()
}

/// One run with the Bell outcome drawn from its exact branch probabilities.
pub fn teleport(input: &Ket, rng_seed: u64) -> Result<TeleportationOutcome> {
    let mut rng = random::seeded(rng_seed);
    teleport_with(input, &mut rng)
}

pub fn teleport_with<R: Rng + ?Sized>(input: &Ket, rng: &mut R) -> Result<TeleportationOutcome> {
    let branches = teleport_all_branches(input)?;
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for b in &branches {
        acc += b.probability;
        if u < acc {
            return Ok(b.clone());
        }
    }
    Ok(branches.into_iter().last().expect("four branches"))
}

/// `1 + H₂(x)` bits for the pure resource `√x|00> + √(1-x)|11>`.
pub fn dense_coding_capacity(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::OutOfRange(format!("Schmidt weight {x} outside [0, 1]")));
    }
    Ok(1.0 + binary_entropy_bits(x))
}

/// The four letters `(σ_i ⊗ I) W₀ (σ_i ⊗ I)` for Paulis `I, X, Y, Z`.
pub fn sdc_letters(w0: &DensityMatrix) -> Result<Vec<DensityMatrix>> {
    if w0.dims() != [2, 2] {
        return Err(Error::NotTwoQubit);
    }
    paulis()
        .iter()
        .map(|p| w0.conjugate(&matcore::tensor(p, &matcore::identity(2))))
        .collect()
}

/// Holevo quantity of the equiprobable Pauli-encoded letters, in bits.
pub fn sdc_capacity(w0: &DensityMatrix) -> Result<f64> {
    let e = Ensemble::uniform(sdc_letters(w0)?)?;
    Ok(qentropy::holevo(&e, Units::Bits))
}

#[derive(Debug, Clone, Serialize)]
pub struct CompressionReport {
    pub theta: f64,
    pub n: usize,
    pub typical_dim: u64,
    /// Numbers of `-` eigenstring symbols admitted to the typical set.
    pub typical_minus_counts: Vec<usize>,
    /// Mean projection probability over sampled messages.
    pub success_prob: f64,
    /// `Tr(P_typ ρ^{⊗n})`
    pub exact_success_prob: f64,
    pub rate_bits_per_symbol: f64,
    pub entropy_bits: f64,
    pub trials: usize,
}

pub const MAX_COMPRESS_N: usize = 16;
/// Window constant `c` in `|-(1/n) log₂ λ_x - S(ρ)| ≤ c/√n`.
pub const TYPICALITY_C: f64 = 1.0;

/// Source letters `cos(θ/2)|0> + sin(θ/2)|1>` and `sin(θ/2)|0> + cos(θ/2)|1>`.
pub fn compression_letters(theta: f64) -> [Ket; 2] {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let k = |a: f64, b: f64| {
        Ket::new(CVector::from_row_slice(&[C64::new(a, 0.0), C64::new(b, 0.0)]), vec![2]).expect("unit")
    };
    [k(c, s), k(s, c)]
}

/// Eigenvalues `((1+sin θ)/2, (1-sin θ)/2)` of the average letter, belonging
/// to `|±> = (|0> ± |1>)/√2`.
pub fn compression_spectrum(theta: f64) -> (f64, f64) {
    let s = theta.sin();
    ((1.0 + s) / 2.0, (1.0 - s) / 2.0)
}

/// Minus counts `k` whose eigenstrings are weakly typical at block length `n`.
pub fn typical_minus_counts(theta: f64, n: usize) -> Vec<usize> {
    let (lp, lm) = compression_spectrum(theta);
    let entropy = Units::Bits.from_nats(entropy_nats([lp, lm]));
    let window = TYPICALITY_C / (n as f64).sqrt();
    (0..=n)
        .filter(|&k| {
            if (k < n && lp == 0.0) || (k > 0 && lm == 0.0) {
                return false;
            }
            let sample = ((n - k) as f64 * -(lp.log2()) + k as f64 * -(lm.log2())) / n as f64;
            let sample = if sample.is_nan() { 0.0 } else { sample };
            (sample - entropy).abs() <= window + 1e-12
        })
        .collect()
}

/// Project sampled `n`-letter messages onto the typical subspace spanned by
/// weakly typical eigenstrings of the average letter.
pub fn schumacher_compress(theta: f64, n: usize, trials: usize, seed: u64) -> Result<CompressionReport> {
    if n == 0 || n > MAX_COMPRESS_N {
        return Err(Error::TooLarge(format!("block length {n} outside 1..={MAX_COMPRESS_N}")));
    }
    if !(theta > 0.0 && theta <= std::f64::consts::PI) {
        return Err(Error::OutOfRange(format!("theta {theta} outside (0, π]")));
    }
    let (lp, lm) = compression_spectrum(theta);
    let entropy_bits = Units::Bits.from_nats(entropy_nats([lp, lm]));
    let counts = typical_minus_counts(theta, n);
    let typical_dim: u64 = counts
        .iter()
        .map(|&k| u64::try_from(binomial(n, k)).expect("n ≤ 16"))
        .sum();
    let exact_success_prob: f64 = counts
        .iter()
        .map(|&k| u64::try_from(binomial(n, k)).expect("n ≤ 16") as f64 * lp.powi((n - k) as i32) * lm.powi(k as i32))
        .sum();

    // typical-subspace mask over eigenstrings; bit i set means symbol i is `-`
    let mask: Vec<bool> = (0..1usize << n)
        .map(|x| counts.contains(&(x.count_ones() as usize)))
        .collect();
    // amplitudes <±|letter>
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let letters = compression_letters(theta);
    let amp = |letter: usize, minus: bool| {
        let v = letters[letter].amps();
        let sign = if minus { -1.0 } else { 1.0 };
        (v[0].re + sign * v[1].re) * r
    };
    let mut rng = random::seeded(seed);
    let mut total = 0.0;
    for _ in 0..trials {
        let message: Vec<usize> = (0..n).map(|_| rng.random_range(0..2)).collect();
        // message state in the eigenbasis, built qubit by qubit
        let mut state = vec![1.0f64];
        for &letter in &message {
            let (plus, minus) = (amp(letter, false), amp(letter, true));
            state = state.iter().flat_map(|a| [a * plus, a * minus]).collect();
        }
        // state index is big-endian in qubits; reverse to match the mask bit order
        let mut weight = 0.0;
        for (idx, a) in state.iter().enumerate() {
            let x = idx.reverse_bits() >> (usize::BITS as usize - n);
            if mask[x] {
                weight += a * a;
            }
        }
        total += weight;
    }
    let success_prob = if trials == 0 { exact_success_prob } else { total / trials as f64 };
    Ok(CompressionReport {
        theta,
        n,
        typical_dim,
        typical_minus_counts: counts,
        success_prob,
        exact_success_prob,
        rate_bits_per_symbol: (typical_dim as f64).log2() / n as f64,
        entropy_bits,
        trials,
    })
}

/// Landauer erasure cost `ΔS = -Tr(ρ log ω)` of resetting `ρ` against
/// reservoir `ω`; infinite when `ρ` leaves the support of `ω`.
pub fn landauer_erasure(rho: &DensityMatrix, omega: &DensityMatrix, units: Units) -> Result<f64> {
    if rho.dim() != omega.dim() {
        return Err(Error::DimMismatch(format!("{} vs {}", rho.dim(), omega.dim())));
    }
    let eig = hermitian_eig(omega.matrix())?;
    let mut cost = 0.0;
    let mut kernel = 0.0;
    for (k, &lam) in eig.eigenvalues.iter().enumerate() {
        let v = eig.eigenvectors.column(k);
        let w = (v.adjoint() * rho.matrix() * v)[(0, 0)].re;
        if lam < CLIP_TOL {
            kernel += w;
        } else {
            cost -= w * lam.ln();
        }
    }
    if kernel > SUPPORT_TOL {
        return Ok(f64::INFINITY);
    }
    Ok(units.from_nats(cost))
}

fn positive(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::NonPositive(format!("{name} = {x}")));
    }
    Ok(())
}

/// `ER/(ħc)` nats converted to bits.
pub fn bekenstein(energy: f64, radius: f64) -> Result<f64> {
    positive("energy", energy)?;
    positive("radius", radius)?;
    Ok(Units::Bits.from_nats(energy * radius / (HBAR * SPEED_OF_LIGHT)))
}

/// `E/(2ħ)` nats per second converted to bits per second.
pub fn processing_rate(energy: f64) -> Result<f64> {
    positive("energy", energy)?;
    Ok(Units::Bits.from_nats(energy / (2.0 * HBAR)))
}

/// Rest energy `m_p c²` of a hydrogen nucleus, joules.
pub fn hydrogen_nucleus_energy() -> f64 {
    PROTON_MASS * SPEED_OF_LIGHT * SPEED_OF_LIGHT
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::{cgdc_bound, pure_entanglement};
    use crate::matcore::max_abs_diff;
    use crate::qentropy::{qrelent, von_neumann};
    use crate::random::seeded;

    #[test]
    fn teleport_examples() {
        let zero = Ket::basis(0, vec![2]).unwrap();
        for b in teleport_all_branches(&zero).unwrap() {
            assert!(b.output.equal_up_to_phase(&zero, 1e-12));
            assert!((b.probability - 0.25).abs() < 1e-12);
        }
        let plus = Ket::normalized(CVector::from_row_slice(&[ONE, ONE]), vec![2]).unwrap();
        let out = teleport(&plus, 3).unwrap();
        assert!((out.fidelity_to_input - 1.0).abs() < 1e-12);
        assert!(teleport(&Ket::basis(0, vec![4]).unwrap(), 0).is_err());
    }

    #[test]
    fn teleport_every_branch_of_random_inputs() {
        let mut rng = seeded(21);
        let half = DensityMatrix::maximally_mixed(vec![2]);
        for _ in 0..100 {
            let psi = Ket::random(vec![2], &mut rng).unwrap();
            for b in teleport_all_branches(&psi).unwrap() {
                assert!(b.fidelity_to_input >= 1.0 - 1e-12);
                assert!(max_abs_diff(b.alice_residual.matrix(), half.matrix()) < 1e-10);
            }
        }
    }

    #[test]
    fn teleport_outcomes_are_uniform() {
        let mut rng = seeded(22);
        let mut hist = [0usize; 4];
        let trials = 4000;
        for _ in 0..trials {
            let psi = Ket::random(vec![2], &mut rng).unwrap();
            let out = teleport_with(&psi, &mut rng).unwrap();
            assert!(out.fidelity_to_input >= 1.0 - 1e-12);
            hist[out.classical_bits as usize] += 1;
        }
        let mean = trials as f64 / 4.0;
        let sigma = (trials as f64 * 0.25 * 0.75).sqrt();
        for h in hist {
            assert!((h as f64 - mean).abs() < 4.0 * sigma, "{hist:?}");
        }
    }

    #[test]
    fn dense_coding_examples() {
        assert!((dense_coding_capacity(0.5).unwrap() - 2.0).abs() < 1e-12);
        assert!((dense_coding_capacity(0.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((dense_coding_capacity(1.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((dense_coding_capacity(0.25).unwrap() - 1.8112781244591).abs() < 1e-12);
        assert!(dense_coding_capacity(1.5).is_err());
    }

    #[test]
    fn sdc_examples() {
        let bell = phi_plus().to_density();
        assert!((sdc_capacity(&bell).unwrap() - 2.0).abs() < 1e-10);
        assert!(sdc_capacity(&DensityMatrix::maximally_mixed(vec![2, 2])).unwrap().abs() < 1e-10);
        assert!(matches!(sdc_capacity(&DensityMatrix::maximally_mixed(vec![4])), Err(Error::NotTwoQubit)));
        for x in [0.1, 0.3, 0.9] {
            let amps = [C64::new(f64::sqrt(x), 0.0), ZERO, ZERO, C64::new((1.0 - x).sqrt(), 0.0)];
            let w0 = Ket::new(CVector::from_row_slice(&amps), vec![2, 2]).unwrap();
            let c = sdc_capacity(&w0.to_density()).unwrap();
            assert!((c - dense_coding_capacity(x).unwrap()).abs() < 1e-9);
            assert!((c - 1.0 - pure_entanglement(&w0, Units::Bits).unwrap()).abs() < 1e-9);
        }
        let mut rng = seeded(23);
        for _ in 0..50 {
            let w0 = DensityMatrix::random(vec![2, 2], 3, &mut rng).unwrap();
            assert!(sdc_capacity(&w0).unwrap() <= cgdc_bound(&w0).unwrap() + 1e-9);
        }
    }

    #[test]
    fn bell_states_are_orthonormal() {
        for a in 0..4 {
            for b in 0..4 {
                let o = bell_state(a).overlap(&bell_state(b));
                assert!((o - if a == b { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn compression_three_qubit_example() {
        // inside the window where the 3-symbol typical set is {+++, ++-, +-+, -++}
        let r = schumacher_compress(std::f64::consts::FRAC_PI_6, 3, 200, 1).unwrap();
        assert_eq!(r.typical_dim, 4);
        assert_eq!(r.typical_minus_counts, vec![0, 1]);
        assert!((r.rate_bits_per_symbol - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn compression_orthogonal_letters() {
        let r = schumacher_compress(std::f64::consts::PI, 8, 50, 2).unwrap();
        assert!((r.entropy_bits - 1.0).abs() < 1e-12);
        assert!((r.rate_bits_per_symbol - 1.0).abs() < 1e-12);
        assert!((r.success_prob - 1.0).abs() < 1e-12);
        assert!(schumacher_compress(1.0, 17, 1, 0).is_err());
        assert!(schumacher_compress(0.0, 4, 1, 0).is_err());
    }

    #[test]
    fn compression_ladder() {
        let theta = std::f64::consts::FRAC_PI_6;
        let s = binary_entropy_bits((1.0 + theta.sin()) / 2.0);
        let mut rates = Vec::new();
        for n in [4, 8, 12, 16] {
            let r = schumacher_compress(theta, n, 300, n as u64).unwrap();
            assert!((r.entropy_bits - s).abs() < 1e-12);
            assert!(r.rate_bits_per_symbol >= s);
            assert!(r.typical_dim <= 1 << n);
            // sampled projections average to Tr(P ρ^{⊗n})
            assert!((r.success_prob - r.exact_success_prob).abs() < 0.05, "{r:?}");
            rates.push(r.rate_bits_per_symbol);
        }
        // a fixed c/√n window does not make the rate ladder monotone
        assert!(rates.iter().all(|&x| x < 0.9));
    }

    #[test]
    fn landauer_examples() {
        let mut rng = seeded(24);
        let rho = DensityMatrix::random(vec![3], 3, &mut rng).unwrap();
        let same = landauer_erasure(&rho, &rho, Units::Bits).unwrap();
        assert!((same - von_neumann(&rho, Units::Bits)).abs() < 1e-10);
        let pure = Ket::basis(0, vec![2]).unwrap().to_density();
        let cost = landauer_erasure(&pure, &DensityMatrix::maximally_mixed(vec![2]), Units::Bits).unwrap();
        assert!((cost - 1.0).abs() < 1e-12);
        assert_eq!(landauer_erasure(&DensityMatrix::maximally_mixed(vec![2]), &pure, Units::Bits).unwrap(), f64::INFINITY);
        for _ in 0..50 {
            let r = DensityMatrix::random(vec![3], 2, &mut rng).unwrap();
            let w = DensityMatrix::random(vec![3], 3, &mut rng).unwrap();
            let lhs = landauer_erasure(&r, &w, Units::Bits).unwrap();
            let rhs = qrelent(&r, &w, Units::Bits).unwrap() + von_neumann(&r, Units::Bits);
            assert!((lhs - rhs).abs() < 1e-9);
        }
        assert!(landauer_erasure(&rho, &pure, Units::Bits).is_err());
    }

    #[test]
    fn bekenstein_examples() {
        let e = hydrogen_nucleus_energy();
        let bits = bekenstein(e, 1e-15).unwrap();
        let expected = e * 1e-15 / (HBAR * SPEED_OF_LIGHT * std::f64::consts::LN_2);
        assert!((bits - expected).abs() < 1e-12 * expected);
        let rate = processing_rate(e).unwrap();
        assert!((rate.log10() - 24.0).abs() < 1.0);
        assert!((bekenstein(2.0 * e, 1e-15).unwrap() / bits - 2.0).abs() < 1e-12);
        assert!((processing_rate(2.0 * e).unwrap() / rate - 2.0).abs() < 1e-12);
        assert!(bekenstein(-1.0, 1.0).is_err());
        assert!(processing_rate(0.0).is_err());
    }
}
