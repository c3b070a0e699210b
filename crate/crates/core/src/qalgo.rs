//! Query-model algorithms on qubit registers: Deutsch, Grover with a
//! classically mixed memory register, and the bitwise-oracle variant.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matcore::{self, CMatrix, C64, ONE};
use crate::qentropy::{von_neumann, Ensemble};
use crate::qstate::{bures_distance, fidelity, DensityMatrix};
use crate::units::{binary_entropy_bits, Units};

pub const MAX_REGISTER_QUBITS: usize = 12;
pub const MAX_GROVER_QUBITS: usize = 6;
const NEG_FLOOR: f64 = 1e-12;

fn hadamard() -> CMatrix {
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    CMatrix::from_row_slice(2, 2, &[h, h, h, -h])
}

/// `H^{⊗n}`
pub fn hadamard_all(n: usize) -> CMatrix {
    let h = hadamard();
    (0..n).fold(matcore::identity(1), |acc, _| matcore::tensor(&acc, &h))
}

/// Single-qubit `gate` on qubit `q` of `n` (qubit 0 is the most significant).
pub fn single_qubit(gate: &CMatrix, q: usize, n: usize) -> CMatrix {
    let left = matcore::identity(1 << q);
    let right = matcore::identity(1 << (n - q - 1));
    matcore::tensor(&matcore::tensor(&left, gate), &right)
}

fn diagonal(signs: impl Iterator<Item = f64>) -> CMatrix {
    let v: Vec<C64> = signs.map(|s| C64::new(s, 0.0)).collect();
    CMatrix::from_diagonal(&nalgebra::DVector::from_vec(v))
}

#[derive(Debug, Clone, Serialize)]
pub struct Register {
    n_qubits: usize,
    state: DensityMatrix,
}

impl Register {
    /// `|0…0>`
    pub fn zeros(n_qubits: usize) -> Result<Self> {
        Self::basis(0, n_qubits)
    }

    pub fn basis(index: usize, n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_REGISTER_QUBITS {
            return Err(Error::TooLarge(format!("{n_qubits} qubits, limit {MAX_REGISTER_QUBITS}")));
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::OutOfRange(format!("basis index {index} ≥ {dim}")));
        }
        let mut probs = vec![0.0; dim];
        probs[index] = 1.0;
        Ok(Self { n_qubits, state: DensityMatrix::diagonal(&probs, vec![2; n_qubits])? })
    }

    /// Product state with each qubit in `p|0><0| + (1-p)|1><1|`.
    pub fn product_mixed(n_qubits: usize, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfRange(format!("weight {p} outside [0, 1]")));
        }
        let mut reg = Self::zeros(n_qubits)?;
        let probs: Vec<f64> = (0..1usize << n_qubits)
            .map(|x| {
                let ones = x.count_ones() as i32;
                p.powi(n_qubits as i32 - ones) * (1.0 - p).powi(ones)
            })
            .collect();
        reg.state = DensityMatrix::diagonal(&probs, vec![2; n_qubits])?;
        Ok(reg)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn apply(&mut self, u: &CMatrix) -> Result<()> {
        self.state = self.state.conjugate(u)?;
        Ok(())
    }

    pub fn apply_single(&mut self, gate: &CMatrix, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            return Err(Error::OutOfRange(format!("qubit {q} of {}", self.n_qubits)));
        }
        self.apply(&single_qubit(gate, q, self.n_qubits))
    }

    /// Probability that qubit `q` reads 1.
    pub fn prob_one(&self, q: usize) -> f64 {
        let shift = self.n_qubits - q - 1;
        (0..self.state.dim())
            .filter(|x| x >> shift & 1 == 1)
            .map(|x| self.state.matrix()[(x, x)].re)
            .sum()
    }

    pub fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix> {
        self.state.reduce(keep)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Constant,
    Varying,
}

/// A one-bit function given by its truth table `[f(0), f(1)]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoolFn(pub [bool; 2]);

impl BoolFn {
    pub const ALL: [BoolFn; 4] =
        [BoolFn([false, false]), BoolFn([false, true]), BoolFn([true, false]), BoolFn([true, true])];

    pub fn is_constant(self) -> bool {
        self.0[0] == self.0[1]
    }

    /// `|x>|y> → |x>|y ⊕ f(x)>`
    pub fn oracle(self) -> CMatrix {
        let mut u = CMatrix::zeros(4, 4);
        for x in 0..2 {
            for y in 0..2 {
                let out = y ^ self.0[x] as usize;
                u[(2 * x + out, 2 * x + y)] = ONE;
            }
        }
        u
    }
}

impl std::str::FromStr for BoolFn {
    type Err = Error;

    /// Truth tables written as `f(0) f(1)`, e.g. `01` for the identity.
    fn from_str(s: &str) -> Result<Self> {
        let bits: Vec<bool> = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::OutOfRange(format!("truth table {s:?}"))),
            })
            .collect::<Result<_>>()?;
        match bits[..] {
            [a, b] => Ok(BoolFn([a, b])),
            _ => Err(Error::OutOfRange(format!("truth table {s:?} needs two bits"))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DeutschResult {
    pub verdict: Verdict,
    pub queries_used: usize,
    /// `S(ρ̄) - ½(S(ρ₁) + S(ρ₂))` over the first-qubit outputs of the two classes.
    pub holevo_diag: f64,
    pub first_qubit: DensityMatrix,
}

fn deutsch_output(f: BoolFn) -> Result<(Register, usize)> {
    let mut reg = Register::basis(1, 2)?;
    reg.apply(&hadamard_all(2))?;
    reg.apply(&f.oracle())?;
    reg.apply_single(&hadamard(), 0)?;
    Ok((reg, 1))
}

pub fn deutsch(f: BoolFn) -> Result<DeutschResult> {
    let (reg, queries_used) = deutsch_output(f)?;
    let verdict = if reg.prob_one(0) > 0.5 { Verdict::Varying } else { Verdict::Constant };
    let class_state = |constant: bool| -> Result<DensityMatrix> {
        let states: Vec<DensityMatrix> = BoolFn::ALL
            .iter()
            .filter(|g| g.is_constant() == constant)
            .map(|&g| deutsch_output(g)?.0.reduce(&[0]))
            .collect::<Result<_>>()?;
        Ok(Ensemble::uniform(states)?.average())
    };
    let classes = Ensemble::uniform(vec![class_state(true)?, class_state(false)?])?;
    let holevo_diag = crate::qentropy::holevo(&classes, Units::Bits);
    Ok(DeutschResult { verdict, queries_used, holevo_diag, first_qubit: reg.reduce(&[0])? })
}

#[derive(Debug, Clone, Serialize)]
pub struct GroverStep {
    pub k: usize,
    pub mutual_info_bits: f64,
    /// Mean branch entropy `Σᵢ pᵢ S(ρ_C(i))`.
    pub s_avg_bits: f64,
    /// `S(ρ̄_C(k))`
    pub s_bar_bits: f64,
    /// Bures distance between `ρ̄_C(k-1)` and `ρ̄_C(k)`; zero at `k = 0`.
    pub bures_step: f64,
    /// Fidelity between `ρ̄_C(k-1)` and `ρ̄_C(k)`; one at `k = 0`.
    pub fidelity_step: f64,
    /// Probability of reading the marked index from the marked branch.
    pub marked_success: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroverTrace {
    pub n_qubits: usize,
    pub p: f64,
    pub marked: usize,
    pub marked_count: usize,
    pub iterations: Vec<GroverStep>,
    #[serde(skip)]
    pub average_states: Vec<DensityMatrix>,
}

impl GroverTrace {
    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn mutual_info(&self) -> Vec<f64> {
        self.iterations.iter().map(|s| s.mutual_info_bits).collect()
    }

    /// `S(ρ⁰_C)` in bits.
    pub fn initial_entropy(&self) -> f64 {
        self.iterations[0].s_bar_bits
    }

    /// Iterations where `I_MC` is a strict local maximum.
    pub fn peaks(&self) -> Vec<usize> {
        let mi = self.mutual_info();
        (1..mi.len().saturating_sub(1)).filter(|&k| mi[k] > mi[k - 1] && mi[k] >= mi[k + 1]).collect()
    }
}

/// `f₀ H U_i H`: the repeated block for memory branch `i`.
pub fn grover_block(n: usize, i: usize) -> CMatrix {
    let h = hadamard_all(n);
    let oracle = diagonal((0..1usize << n).map(|j| if j == i { -1.0 } else { 1.0 }));
    let f0 = diagonal((0..1usize << n).map(|j| if j == 0 { -1.0 } else { 1.0 }));
    f0 * &h * oracle * h
}

fn floor_negative(x: f64) -> f64 {
    if x < 0.0 && x > -NEG_FLOOR { 0.0 } else { x }
}

/// Branch states `ρ_C(i, k)` for all `i`, for `k = 0..=k_max`.
pub fn grover_branches(n_qubits: usize, p: f64, k_max: usize) -> Result<Vec<Vec<DensityMatrix>>> {
    if n_qubits == 0 || n_qubits > MAX_GROVER_QUBITS {
        return Err(Error::TooLarge(format!("{n_qubits} qubits, limit {MAX_GROVER_QUBITS}")));
    }
    let rho0 = Register::product_mixed(n_qubits, p)?.state;
    let n = 1usize << n_qubits;
    Ok((0..n)
        .into_par_iter()
        .map(|i| {
            let block = grover_block(n_qubits, i);
            let mut rho = rho0.clone();
            let mut out = Vec::with_capacity(k_max + 1);
            out.push(rho.clone());
            for _ in 0..k_max {
                rho = rho.conjugate(&block).expect("matching size");
                out.push(rho.clone());
            }
            out
        })
        .collect())
}

/// Block-diagonal `ρ_MC = (1/N) Σᵢ |i><i| ⊗ ρ_C(i, k)` with dims `[N, N]`.
pub fn grover_joint_state(branches: &[Vec<DensityMatrix>], k: usize) -> Result<DensityMatrix> {
    let n = branches.len();
    let mut m = CMatrix::zeros(n * n, n * n);
    for (i, b) in branches.iter().enumerate() {
        m.view_mut((i * n, i * n), (n, n)).copy_from(&(b[k].matrix() / C64::new(n as f64, 0.0)));
    }
    DensityMatrix::new(m, vec![n, n])
}

pub fn grover_trace(n_qubits: usize, p: f64, k_max: usize, marked: usize) -> Result<GroverTrace> {
    let n = 1usize << n_qubits.min(MAX_GROVER_QUBITS);
    if marked >= n {
        return Err(Error::OutOfRange(format!("marked index {marked} ≥ {n}")));
    }
    let branches = grover_branches(n_qubits, p, k_max)?;
    let h = hadamard_all(n_qubits);
    let weight = C64::new(1.0 / n as f64, 0.0);
    let mut iterations = Vec::with_capacity(k_max + 1);
    let mut average_states: Vec<DensityMatrix> = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let sum = branches.iter().fold(CMatrix::zeros(n, n), |acc, b| acc + b[k].matrix() * weight);
        let avg = DensityMatrix::new(sum, vec![2; n_qubits])?;
        let s_bar = von_neumann(&avg, Units::Bits);
        let s_avg = branches.iter().map(|b| von_neumann(&b[k], Units::Bits)).sum::<f64>() / n as f64;
        let (bures_step, fidelity_step) = match average_states.last() {
            Some(prev) => (bures_distance(prev, &avg)?, fidelity(prev, &avg)?),
            None => (0.0, 1.0),
        };
        let readout = &h * branches[marked][k].matrix() * &h;
        iterations.push(GroverStep {
            k,
            mutual_info_bits: floor_negative(s_bar - s_avg),
            s_avg_bits: s_avg,
            s_bar_bits: s_bar,
            bures_step,
            fidelity_step,
            marked_success: readout[(marked, marked)].re,
        });
        average_states.push(avg);
    }
    Ok(GroverTrace { n_qubits, p, marked, marked_count: 1, iterations, average_states })
}

#[derive(Debug, Clone, Serialize)]
pub struct StepBound {
    pub k: usize,
    pub delta_s: f64,
    /// `d_B log₂N - d_B log₂ d_B`
    pub bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct StepBoundReport {
    pub steps: Vec<StepBound>,
    /// `(3/√N) log₂N`
    pub first_step_cap: f64,
    pub first_step_ok: bool,
    /// `(N-2)/N`
    pub first_fidelity_floor: f64,
    pub first_fidelity: f64,
    /// `√N / 3`
    pub query_floor: f64,
}

impl StepBoundReport {
    pub fn all_hold(&self) -> bool {
        self.first_step_ok && self.steps.iter().all(|s| s.holds)
    }
}

/// Entropy-change cap for a step with Bures distance `d_b` in dimension `n`.
pub fn fannes_bures_bound(d_b: f64, n: usize) -> f64 {
    let log_n = (n as f64).log2();
    if d_b <= 0.0 { 0.0 } else { d_b * log_n - d_b * d_b.log2() }
}

pub fn step_bound_check(trace: &GroverTrace) -> StepBoundReport {
    let n = trace.dim();
    let nf = n as f64;
    let tol = 1e-9;
    let steps: Vec<StepBound> = trace
        .iterations
        .windows(2)
        .map(|w| {
            let delta_s = floor_negative((w[1].s_bar_bits - w[0].s_bar_bits).abs());
            let bound = fannes_bures_bound(w[1].bures_step, n);
            StepBound { k: w[1].k, delta_s, bound, holds: delta_s <= bound + tol }
        })
        .collect();
    let first_step_cap = 3.0 / nf.sqrt() * nf.log2();
    let first_step_ok = steps.first().is_none_or(|s| s.delta_s <= first_step_cap + tol);
    let first_fidelity = trace.iterations.get(1).map_or(1.0, |s| s.fidelity_step);
    StepBoundReport {
        steps,
        first_step_cap,
        first_step_ok,
        first_fidelity_floor: (nf - 2.0) / nf,
        first_fidelity,
        query_floor: nf.sqrt() / 3.0,
    }
}

/// `I_MC` after each bit-position query with oracle `(-1)^{i_q j_q}`
/// sandwiched by Hadamards on qubit `q`; entry 0 is the initial value.
pub fn bitwise_mi_sequence(n_qubits: usize) -> Result<Vec<f64>> {
    if n_qubits == 0 || n_qubits > MAX_GROVER_QUBITS {
        return Err(Error::TooLarge(format!("{n_qubits} qubits, limit {MAX_GROVER_QUBITS}")));
    }
    let n = 1usize << n_qubits;
    let hq: Vec<CMatrix> = (0..n_qubits).map(|q| single_qubit(&hadamard(), q, n_qubits)).collect();
    let branches: Vec<Vec<DensityMatrix>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rho = Register::zeros(n_qubits).expect("within limits").state;
            let mut out = vec![rho.clone()];
            for q in 0..n_qubits {
                let shift = n_qubits - q - 1;
                let i_q = i >> shift & 1;
                let oracle = diagonal((0..n).map(|j| if i_q & (j >> shift & 1) == 1 { -1.0 } else { 1.0 }));
                let u = &hq[q] * oracle * &hq[q];
                rho = rho.conjugate(&u).expect("matching size");
                out.push(rho.clone());
            }
            out
        })
        .collect();
    let weight = C64::new(1.0 / n as f64, 0.0);
    (0..=n_qubits)
        .map(|k| {
            let sum = branches.iter().fold(CMatrix::zeros(n, n), |acc, b| acc + b[k].matrix() * weight);
            let avg = DensityMatrix::new(sum, vec![2; n_qubits])?;
            let s_avg = branches.iter().map(|b| von_neumann(&b[k], Units::Bits)).sum::<f64>() / n as f64;
            Ok(floor_negative(von_neumann(&avg, Units::Bits) - s_avg))
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct BitwiseTrace {
    pub n_qubits: usize,
    pub mutual_info_bits: Vec<f64>,
    pub queries_to_full_correlation: usize,
}

/// Queries until `I_MC` reaches `log₂N` within `1e-9`.
pub fn bitwise_oracle_trace(n_qubits: usize) -> Result<BitwiseTrace> {
    let mi = bitwise_mi_sequence(n_qubits)?;
    let full = n_qubits as f64;
    let queries = mi.iter().position(|&x| (x - full).abs() < 1e-9).unwrap_or(mi.len());
    Ok(BitwiseTrace { n_qubits, mutual_info_bits: mi, queries_to_full_correlation: queries })
}

/// Sufficient condition `S(ρ⁰_C) ≥ ½ log₂N` for no quantum speed-up; it is
/// not necessary.
pub fn no_speedup_predicate(s0_bits: f64, n_qubits: usize) -> bool {
    s0_bits >= n_qubits as f64 / 2.0
}

/// `S(ρ⁰_C)` for the per-qubit weight `p`, in bits.
pub fn initial_entropy_bits(n_qubits: usize, p: f64) -> f64 {
    n_qubits as f64 * binary_entropy_bits(p)
}

/// Rows `(k, I_MC, bound)` where `bound` is the per-step entropy cap.
pub fn grover_csv_rows(trace: &GroverTrace) -> Vec<(usize, f64, f64)> {
    let n = trace.dim();
    trace
        .iterations
        .iter()
        .map(|s| (s.k, s.mutual_info_bits, fannes_bures_bound(s.bures_step, n)))
        .collect()
}
