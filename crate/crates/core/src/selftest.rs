//! Invariant suite behind `releq selftest`. Each check draws from its own
//! child stream of the run seed, so results do not depend on check order.

use std::f64::consts::FRAC_PI_6;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::classical::{
    self, kl_divergence, ln_biguint, mutual_information, sequence_prob, shannon_entropy, type_from_counts,
    ProbDist, StochasticMatrix,
};
use crate::entanglement::{
    cgdc_bound, ensemble_entanglement, memory_bounds, pure_entanglement, ree, ReeOptions, SeparableAnsatz,
};
use crate::error::Result;
use crate::matcore::{self, max_abs_diff, partial_trace, partial_transpose, CMatrix, C64};
use crate::protocols::{landauer_erasure, schumacher_compress, sdc_capacity, teleport_all_branches};
use crate::qalgo::{self, BoolFn, Verdict};
use crate::qchannel::{self, basis_projectors, dilate, povm_probs, random_channel};
use crate::qentropy::{holevo, qmutual, qrelent, relent_psd_nats, von_neumann, Ensemble};
use crate::qstate::{bures_distance, fidelity, purify, schmidt, trace_distance, DensityMatrix, Ket};
use crate::random::{child, haar_unitary, random_hermitian, SeededRng};
use crate::units::Units;

const B: Units = Units::Bits;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub module: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    pub fn table(&self) -> String {
        let width = self.checks.iter().map(|c| c.module.len() + c.name.len() + 1).max().unwrap_or(0);
        let mut out = String::new();
        for c in &self.checks {
            let label = format!("{}/{}", c.module, c.name);
            let mark = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{mark}  {label:<width$}  {}\n", c.detail));
        }
        out.push_str(&format!("{} checks, {} failed\n", self.checks.len(), self.failures()));
        out
    }
}

type Outcome = Result<(bool, String)>;
type CheckFn = fn(&mut SeededRng) -> Outcome;

fn worst(label: &str, value: f64, limit: f64) -> (bool, String) {
    (value <= limit, format!("{label} {value:.2e} (limit {limit:.0e})"))
}

fn violations(count: usize, total: usize) -> (bool, String) {
    (count == 0, format!("{count}/{total} violations"))
}

fn state<R: rand::Rng + ?Sized>(dims: Vec<usize>, rng: &mut R) -> Result<DensityMatrix> {
    let d: usize = dims.iter().product();
    let rank = rng.random_range(1..=d);
    DensityMatrix::random(dims, rank, rng)
}

fn full_rank<R: rand::Rng + ?Sized>(dims: Vec<usize>, rng: &mut R) -> Result<DensityMatrix> {
    let d: usize = dims.iter().product();
    DensityMatrix::random(dims, d, rng)
}

// matcore

fn eig_reconstruction(rng: &mut SeededRng) -> Outcome {
    let mut err: f64 = 0.0;
    for _ in 0..200 {
        let d = rng.random_range(1..=8);
        let m = random_hermitian(d, rng);
        err = err.max(max_abs_diff(&matcore::hermitian_eig(&m)?.reconstruct(), &m));
    }
    Ok(worst("max error", err, 1e-10))
}

fn tensor_associativity(rng: &mut SeededRng) -> Outcome {
    let mut err: f64 = 0.0;
    for _ in 0..100 {
        let [a, b, c] = [0, 1, 2].map(|_| {
            let d = rng.random_range(1..=3);
            crate::random::random_complex_matrix(d, d, rng)
        });
        let left = matcore::tensor(&matcore::tensor(&a, &b), &c);
        let right = matcore::tensor(&a, &matcore::tensor(&b, &c));
        err = err.max(max_abs_diff(&left, &right));
    }
    Ok(worst("max error", err, 1e-12))
}

fn partial_trace_keeps_trace(rng: &mut SeededRng) -> Outcome {
    let mut err: f64 = 0.0;
    for _ in 0..200 {
        let dims = vec![rng.random_range(1..=3), rng.random_range(1..=3), rng.random_range(1..=2)];
        let d: usize = dims.iter().product();
        let m = crate::random::random_complex_matrix(d, d, rng);
        let keep = [rng.random_range(0..3)];
        let r = partial_trace(&m, &dims, &keep)?;
        err = err.max((matcore::trace(&r) - matcore::trace(&m)).norm());
    }
    Ok(worst("max error", err, 1e-12))
}

fn partial_transpose_preserves(rng: &mut SeededRng) -> Outcome {
    let mut err: f64 = 0.0;
    for _ in 0..1000 {
        let dims = vec![rng.random_range(1..=3), rng.random_range(1..=3)];
        let m = random_hermitian(dims[0] * dims[1], rng);
        let t = partial_transpose(&m, &dims, rng.random_range(0..2))?;
        err = err.max((matcore::trace(&t) - matcore::trace(&m)).norm()).max(matcore::max_asymmetry(&t));
    }
    Ok(worst("max error", err, 1e-12))
}

// classical_info

fn kl_nonnegative(rng: &mut SeededRng) -> Outcome {
    let mut bad = 0;
    for _ in 0..1000 {
        let n = rng.random_range(2..=6);
        let p = ProbDist::random(n, rng)?;
        let q = ProbDist::random(n, rng)?;
        if kl_divergence(&p, &q, B)? < 0.0 || kl_divergence(&p, &p, B)?.abs() > 1e-12 {
            bad += 1;
        }
    }
    Ok(violations(bad, 1000))
}

fn kl_monotone(rng: &mut SeededRng) -> Outcome {
    let mut bad = 0;
    for _ in 0..1000 {
        let (n, m) = (rng.random_range(2..=5), rng.random_range(2..=5));
        let p = ProbDist::random(n, rng)?;
        let a = ProbDist::random(n, rng)?;
        let t = StochasticMatrix::random(m, n, rng);
        let before = kl_divergence(&p, &a, B)?;
        let after = kl_divergence(&classical::evolve_stochastic(&p, &t)?, &classical::evolve_stochastic(&a, &t)?, B)?;
        if after > before + 1e-12 {
            bad += 1;
        }
    }
    Ok(violations(bad, 1000))
}

fn mutual_info_local_maps(rng: &mut SeededRng) -> Outcome {
    let mut bad = 0;
    for _ in 0..300 {
        let (na, nb) = (rng.random_range(2..=3), rng.random_range(2..=3));
        let joint = ProbDist::random(na * nb, rng)?;
        let (ma, mb) = (rng.random_range(2..=3), rng.random_range(2..=3));
        let t = StochasticMatrix::product(&StochasticMatrix::random(ma, na, rng), &StochasticMatrix::random(mb, nb, rng));
        let after = classical::evolve_stochastic(&joint, &t)?;
        if mutual_information(&after, ma, mb, B)? > mutual_information(&joint, na, nb, B)? + 1e-12 {
            bad += 1;
        }
    }
    Ok(violations(bad, 300))
}

fn sequence_type_identity(rng: &mut SeededRng) -> Outcome {
    let mut err: f64 = 0.0;
    for _ in 0..1000 {
        let k = rng.random_range(2..=4);
        let q = ProbDist::random(k, rng)?;
        let n = rng.random_range(1..=30);
        let x: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
        let sp = sequence_prob(&q, &x)?;
        err = err.max((sp.exact - sp.via_type).abs() / sp.exact);
    }
    Ok(worst("max relative error", err, 1e-9))
}

fn type_class_sandwich(_: &mut SeededRng) -> Outcome {
    let mut bad = 0;
    let mut total = 0;
    for n in 1..=20usize {
        for k in 0..=n {
            let t = type_from_counts(vec![k, n - k])?;
            let ns = n as f64 * shannon_entropy(&t.type_dist, Units::Nats);
            let ln_size = ln_biguint(&t.class_size);
            let lower = ns - 2.0 * ((n + 1) as f64).ln();
            if ln_size > ns + 1e-12 || ln_size < lower - 1e-12 {
                bad += 1;
            }
            total += 1;
        }
    }
    Ok(violations(bad, total))
}

fn mixing_and_log_sum(rng: &mut SeededRng) -> Outcome {
    let mut bad = 0;
    for _ in 0..500 {
        let (m, n) = (rng.random_range(2..=4), rng.random_range(2..=5));
        let w = ProbDist::random(m, rng)?;
        let xs: Vec<ProbDist> = (0..m).map(|_| ProbDist::random(n, rng)).collect::<Result<_>>()?;
        let mix: Vec<f64> = (0..n).map(|j| xs.iter().zip(w.probs()).map(|(x, p)| p * x.probs()[j]).sum()).collect();
        let lhs = shannon_entropy(&ProbDist::normalized(mix)?, B);
        let rhs: f64 = xs.iter().zip(w.probs()).map(|(x, p)| p * shannon_entropy(x, B)).sum();
        let a: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..5.0)).collect();
        let b: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..5.0)).collect();
        let sum_terms: f64 = a.iter().zip(&b).map(|(x, y)| x * (x / y).ln()).sum();
        let (sa, sb): (f64, f64) = (a.iter().sum(), b.iter().sum());
        if lhs < rhs - 1e-12 || sum_terms < sa * (sa / sb).ln() - 1e-12 {
            bad += 1;
        }
    }
    Ok(violations(bad, 500))
}

// qstate

fn random_bipartite_ket(rng: &mut SeededRng) -> Result<(Ket, usize, usize)> {
    let (da, db) = (rng.random_range(1..=4), rng.random_range(1..=4));
    Ok((Ket::random(vec![da, db], rng)?, da, db))
}

fn schmidt_rank_bound(rng: &mut SeededRng) -> Outcome {
    let mut bad = 0;
    for _ in 0..300 {
        let (psi, da, db) = random_bipartite_ket(rng)?;
        if schmidt(&psi, da, db)?.rank() > da.min(db) {
            bad += 1;
        }
    }
    Ok(violations(bad, 300))
}

fn pure_marginal_entropies(rng: &mut SeededRng) -> Outcome {
    let mut err: f64 = 0.0;
    for _ in 0..300 {
        let (psi, _, _) = random_bipartite_ket(rng)?;
        let rho = psi.to_density();
        err = err.max((von_neumann(&rho.reduce(&[0])?, B) - von_neumann(&rho.reduce(&[1])?, B)).abs());
    }
    Ok(worst("max |S_A - S_B|", err, 1e-9))
}

fn purify_round_trip(rng: &mut SeededRng) -> Outcome {
    let mut err: f64 = 0.0;
    for _ in 0..300 {
        let d = rng.random_range(1..=5);
        let rho = state(vec![d], rng)?;
        let back = purify(&rho).to_density().reduce(&[0])?;
        err = err.max(max_abs_diff(back.matrix(), rho.matrix()));
    }
    Ok(worst("max error", err, 1e-9))
}

fn bures_fidelity_identity(rng: &mut SeededRng) -> Outcome {
    let mut err: f64 = 0.0;
    for _ in 0..300 {
        let d = rng.random_range(1..=4);
        let (r, s) = (state(vec![d], rng)?, state(vec![d], rng)?);
        let (f, db) = (fidelity(&r, &s)?, bures_distance(&r, &s)?);
        err = err.max((db * db + f * f - 1.0).abs());
    }
    Ok(worst("max error", err, 1e-12))
}

// qchannel

fn quantum_data_processing(rng: &mut SeededRng) -> Outcome {
    let mut bad = 0;
    for _ in 0..1000 {
        let d = rng.random_range(2..=3);
        let ch = random_channel(d, rng.random_range(1..=4), rng);
        let (s, r) = (state(vec![d], rng)?, full_rank(vec![d], rng)?);
        let after = qrelent(&qchannel::apply(&ch, &s)?, &qchannel::apply(&ch, &r)?, B)?;
        if after > qrelent(&s, &r, B)? + 1e-9 {
            bad += 1;
        }
    }
    Ok(violations(bad, 1000))
}

fn selective_branches(rng: &mut SeededRng) -> Outcome {
    let mut bad = 0;
    for _ in 0..300 {
        let d = rng.random_range(2..=3);
        let ch = random_channel(d, 3, rng);
        let (sigma, rho) = (state(vec![d], rng)?, full_rank(vec![d], rng)?);
        let whole = relent_psd_nats(sigma.matrix(), rho.matrix())?;
        let mut branches = 0.0;
        for v in ch.ops() {
            let sj = v * sigma.matrix() * v.adjoint();
            let rj = v * rho.matrix() * v.adjoint();
            let pj = matcore::trace(&rj).re;
            branches += relent_psd_nats(&sj, &(&rj / C64::new(pj, 0.0)))?;
        }
        if branches > whole + 1e-9 {
            bad += 1;
        }
    }
    Ok(violations(bad, 300))
}

fn dilation_inverts_apply(rng: &mut SeededRng) -> Outcome {
    let mut err: f64 = 0.0;
    for _ in 0..100 {
        let d = rng.random_range(2..=3);
        let ch = random_channel(d, rng.random_range(1..=4), rng);
        let rho = state(vec![d], rng)?;
        let via = dilate(&ch).apply(&rho)?;
        err = err.max(max_abs_diff(via.matrix(), qchannel::apply(&ch, &rho)?.matrix()));
    }
    Ok(worst("max error", err, 1e-10))
}

fn unitary_invariance(rng: &mut SeededRng) -> Outcome {
    let mut err: f64 = 0.0;
    for _ in 0..500 {
        let d = rng.random_range(2..=4);
        let (s, r) = (state(vec![d], rng)?, full_rank(vec![d], rng)?);
        let u = haar_unitary(d, rng);
        err = err.max((qrelent(&s.conjugate(&u)?, &r.conjugate(&u)?, B)? - qrelent(&s, &r, B)?).abs());
    }
    Ok(worst("F1 max error", err, 1e-9))
}

fn partial_trace_monotone(rng: &mut SeededRng) -> Outcome {
    let mut bad = 0;
    for _ in 0..500 {
        let (s, r) = (state(vec![2, 2], rng)?, full_rank(vec![2, 2], rng)?);
        if qrelent(&s.reduce(&[0])?, &r.reduce(&[0])?, B)? > qrelent(&s, &r, B)? + 1e-9 {
            bad += 1;
        }
    }
    Ok(violations(bad, 500))
}

fn tensor_additivity(rng: &mut SeededRng) -> Outcome {
    let mut err: f64 = 0.0;
    for _ in 0..500 {
        let (s1, r1) = (state(vec![2], rng)?, full_rank(vec![2], rng)?);
        let (s2, r2) = (state(vec![2], rng)?, full_rank(vec![2], rng)?);
        let joint = qrelent(&s1.tensor(&s2), &r1.tensor(&r2), B)?;
        err = err.max((joint - qrelent(&s1, &r1, B)? - qrelent(&s2, &r2, B)?).abs());
    }
    Ok(worst("F3 max error", err, 1e-9))
}

// qentropy

fn araki_lieb(rng: &mut SeededRng) -> Outcome {
    let mut bad = 0;
    for _ in 0..1000 {
        let dims = vec![rng.random_range(2..=3), rng.random_range(2..=3)];
        let rho = state(dims, rng)?;
        let (sa, sb, sab) = (von_neumann(&rho.reduce(&[0])?, B), von_neumann(&rho.reduce(&[1])?, B), von_neumann(&rho, B));
        if (sa - sb).abs() > sab + 1e-9 || sab > sa + sb + 1e-9 {
            bad += 1;
        }
    }
    Ok(violations(bad, 1000))
}

fn additivity_and_concavity(rng: &mut SeededRng) -> Outcome {
    let mut bad = 0;
    for _ in 0..300 {
        let (r, s) = (state(vec![2], rng)?, state(vec![3], rng)?);
        let additive = (von_neumann(&r.tensor(&s), B) - von_neumann(&r, B) - von_neumann(&s, B)).abs() < 1e-9;
        let e = Ensemble::new(vec![(0.3, state(vec![3], rng)?), (0.7, state(vec![3], rng)?)])?;
        let mean: f64 = e.items().iter().map(|(p, x)| p * von_neumann(x, B)).sum();
        if !additive || von_neumann(&e.average(), B) < mean - 1e-9 {
            bad += 1;
        }
    }
    Ok(violations(bad, 300))
}

fn measured_entropy_dominates(rng: &mut SeededRng) -> Outcome {
    let mut bad = 0;
    for _ in 0..300 {
        let d = rng.random_range(2..=4);
        let rho = state(vec![d], rng)?;
        let probs = povm_probs(&basis_projectors(&haar_unitary(d, rng)), &rho)?;
        if shannon_entropy(&probs, B) < von_neumann(&rho, B) - 1e-9 {
            bad += 1;
        }
    }
    Ok(violations(bad, 300))
}

fn random_ensemble(rng: &mut SeededRng, members: usize, d: usize) -> Result<Ensemble> {
    let w = ProbDist::random(members, rng)?;
    Ensemble::new(w.probs().iter().map(|&p| Ok((p, state(vec![d], rng)?))).collect::<Result<_>>()?)
}

fn holevo_as_mutual_info(rng: &mut SeededRng) -> Outcome {
    let mut err: f64 = 0.0;
    for _ in 0..100 {
        let (m, d) = (rng.random_range(2..=4), rng.random_range(2..=3));
        let e = random_ensemble(rng, m, d)?;
        let mut joint = CMatrix::zeros(m * d, m * d);
        for (i, (p, rho)) in e.items().iter().enumerate() {
            let mut flag = CMatrix::zeros(m, m);
            flag[(i, i)] = matcore::ONE;
            joint += matcore::tensor(&flag, rho.matrix()) * C64::new(*p, 0.0);
        }
        let joint = DensityMatrix::new(joint, vec![m, d])?;
        err = err.max((qmutual(&joint, B)? - holevo(&e, B)).abs());
    }
    Ok(worst("max error", err, 1e-9))
}

fn donald_equality(rng: &mut SeededRng) -> Outcome {
    let mut err: f64 = 0.0;
    for _ in 0..200 {
        let d = rng.random_range(2..=3);
        let members = rng.random_range(2..=4);
        let e = random_ensemble(rng, members, d)?;
        let sigma = full_rank(vec![d], rng)?;
        let avg = e.average();
        let mut lhs = qrelent(&avg, &sigma, B)?;
        let mut rhs = 0.0;
        for (p, rho) in e.items() {
            lhs += p * qrelent(rho, &avg, B)?;
            rhs += p * qrelent(rho, &sigma, B)?;
        }
        err = err.max((lhs - rhs).abs());
    }
    Ok(worst("max error", err, 1e-9))
}

// entanglement

fn ree_opts(seed: u64) -> ReeOptions {
    ReeOptions { seed, ..ReeOptions::default() }
}

fn ree_separable(rng: &mut SeededRng) -> Outcome {
    let mut top: f64 = 0.0;
    for i in 0..10 {
        let k = rng.random_range(1..=4);
        let rho = SeparableAnsatz::random(2, 2, k, rng).assemble();
        top = top.max(ree(&rho, &ree_opts(i))?.value);
    }
    Ok(worst("E1 max REE", top, 1e-3))
}

fn ree_local_unitary(rng: &mut SeededRng) -> Outcome {
    let mut err: f64 = 0.0;
    for i in 0..5 {
        let rho = state(vec![2, 2], rng)?;
        let u = matcore::tensor(&haar_unitary(2, rng), &haar_unitary(2, rng));
        let a = ree(&rho, &ree_opts(i))?.value;
        let b = ree(&rho.conjugate(&u)?, &ree_opts(i))?.value;
        err = err.max((a - b).abs());
    }
    Ok(worst("E2 max difference", err, 3e-3))
}

fn ree_local_channels(rng: &mut SeededRng) -> Outcome {
    let mut excess: f64 = f64::NEG_INFINITY;
    for i in 0..5 {
        let rho = state(vec![2, 2], rng)?;
        let ch = random_channel(2, 2, rng).tensor(&random_channel(2, 2, rng));
        let out = qchannel::apply(&ch, &rho)?;
        excess = excess.max(ree(&out, &ree_opts(i))?.value - ree(&rho, &ree_opts(i))?.value);
    }
    Ok(worst("E3 max increase", excess, 3e-3))
}

fn ree_pure(rng: &mut SeededRng) -> Outcome {
    let mut err: f64 = 0.0;
    for i in 0..10 {
        let psi = Ket::random(vec![2, 2], rng)?;
        err = err.max((ree(&psi.to_density(), &ree_opts(i))?.value - pure_entanglement(&psi, B)?).abs());
    }
    Ok(worst("E4 max error", err, 2e-3))
}

fn pure_ensemble(rng: &mut SeededRng, members: usize) -> Result<Ensemble> {
    let w = ProbDist::random(members, rng)?;
    Ensemble::new(w.probs().iter().map(|&p| Ok((p, Ket::random(vec![2, 2], rng)?.to_density()))).collect::<Result<_>>()?)
}

fn ree_below_decomposition(rng: &mut SeededRng) -> Outcome {
    let mut excess: f64 = f64::NEG_INFINITY;
    for i in 0..5 {
        let members = rng.random_range(2..=3);
        let e = pure_ensemble(rng, members)?;
        let value = ensemble_entanglement(&e, B)?.value;
        excess = excess.max(ree(&e.average(), &ree_opts(i))?.value - value);
    }
    Ok(worst("max excess", excess, 3e-3))
}

fn memory_inequalities(rng: &mut SeededRng) -> Outcome {
    let mut bad = 0;
    for _ in 0..100 {
        let members = rng.random_range(2..=4);
        let e = pure_ensemble(rng, members)?;
        let m = memory_bounds(&e, B)?;
        if !m.purification_bound_holds(1e-9) || m.decomposition_value > m.assistance_upper_bound + 1e-9 {
            bad += 1;
        }
        let single = pure_ensemble(rng, 1)?;
        let m = memory_bounds(&single, B)?;
        if m.state_entropy.abs() > 1e-9 || (m.purification_entanglement - m.decomposition_value).abs() > 1e-9 {
            bad += 1;
        }
    }
    Ok(violations(bad, 200))
}

// protocols

fn teleport_exhaustive(rng: &mut SeededRng) -> Outcome {
    let mut worst_f: f64 = 1.0;
    let mut residual: f64 = 0.0;
    let half = DensityMatrix::maximally_mixed(vec![2]);
    for _ in 0..100 {
        for b in teleport_all_branches(&Ket::random(vec![2], rng)?)? {
            worst_f = worst_f.min(b.fidelity_to_input);
            residual = residual.max(max_abs_diff(b.alice_residual.matrix(), half.matrix()));
        }
    }
    let ok = worst_f >= 1.0 - 1e-12 && residual <= 1e-10;
    Ok((ok, format!("min fidelity {worst_f:.12}, residual error {residual:.1e}")))
}

fn sdc_pure(rng: &mut SeededRng) -> Outcome {
    let mut err: f64 = 0.0;
    for _ in 0..100 {
        let psi = Ket::random(vec![2, 2], rng)?;
        err = err.max((sdc_capacity(&psi.to_density())? - 1.0 - pure_entanglement(&psi, B)?).abs());
    }
    Ok(worst("max error", err, 1e-9))
}

fn sdc_below_cgdc(rng: &mut SeededRng) -> Outcome {
    let mut bad = 0;
    for _ in 0..200 {
        let w0 = state(vec![2, 2], rng)?;
        if sdc_capacity(&w0)? > cgdc_bound(&w0)? + 1e-9 {
            bad += 1;
        }
    }
    Ok(violations(bad, 200))
}

fn landauer_decomposition(rng: &mut SeededRng) -> Outcome {
    let mut err: f64 = 0.0;
    for _ in 0..500 {
        let d = rng.random_range(2..=4);
        let (r, w) = (state(vec![d], rng)?, full_rank(vec![d], rng)?);
        let split = qrelent(&r, &w, B)? + von_neumann(&r, B);
        err = err.max((landauer_erasure(&r, &w, B)? - split).abs());
    }
    Ok(worst("max error", err, 1e-9))
}

fn compression_ladder(rng: &mut SeededRng) -> Outcome {
    let mut rates = Vec::new();
    let mut success = Vec::new();
    let mut entropy = 0.0;
    for n in [4, 8, 12, 16] {
        let r = schumacher_compress(FRAC_PI_6, n, 200, rng.random())?;
        entropy = r.entropy_bits;
        rates.push(r.rate_bits_per_symbol);
        success.push(r.exact_success_prob);
    }
    let rate_ok = rates.windows(2).all(|w| w[1] <= w[0] + 1e-12) && rates.iter().all(|&r| r >= entropy - 1e-12);
    let success_ok = success.windows(2).all(|w| w[1] >= w[0] - 1e-12);
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join("/");
    Ok((rate_ok && success_ok, format!("rates {} toward S={entropy:.3}, success {}", fmt(&rates), fmt(&success))))
}

// qalgo

fn deutsch_verdicts(_: &mut SeededRng) -> Outcome {
    let mut bad = 0;
    for f in BoolFn::ALL {
        let r = qalgo::deutsch(f)?;
        let expect = if f.is_constant() { Verdict::Constant } else { Verdict::Varying };
        if r.verdict != expect || r.queries_used != 1 {
            bad += 1;
        }
    }
    Ok(violations(bad, 4))
}

fn grover_three_term(_: &mut SeededRng) -> Outcome {
    let branches = qalgo::grover_branches(3, 0.8, 6)?;
    let trace = qalgo::grover_trace(3, 0.8, 6, 0)?;
    let mut err: f64 = 0.0;
    for k in 0..=6 {
        let joint = qalgo::grover_joint_state(&branches, k)?;
        err = err.max((qmutual(&joint, B)? - trace.iterations[k].mutual_info_bits).abs());
    }
    Ok(worst("max error", err, 1e-9))
}

fn grover_branch_entropies(_: &mut SeededRng) -> Outcome {
    let branches = qalgo::grover_branches(4, 0.7, 40)?;
    let mut err: f64 = 0.0;
    for b in &branches {
        let s0 = von_neumann(&b[0], B);
        for rho in b {
            err = err.max((von_neumann(rho, B) - s0).abs());
        }
    }
    Ok(worst("max drift", err, 1e-10))
}

fn grover_recurrence(_: &mut SeededRng) -> Outcome {
    let t = qalgo::grover_trace(4, 1.0, 40, 0)?;
    let mut top: f64 = 0.0;
    for k in t.peaks().into_iter().filter(|k| k + 6 <= 40) {
        top = top.max(trace_distance(&t.average_states[k], &t.average_states[k + 6])?);
    }
    Ok((top < 0.2, format!("max trace distance {top:.3} (limit 0.2)")))
}

fn grover_holevo_cap(_: &mut SeededRng) -> Outcome {
    let mut top: f64 = 0.0;
    for p in [1.0, 0.85, 0.7] {
        let t = qalgo::grover_trace(4, p, 40, 0)?;
        top = top.max(t.mutual_info().into_iter().fold(0.0, f64::max));
    }
    Ok(worst("max I_MC - 4", top - 4.0, 1e-9))
}

const CHECKS: &[(&str, &str, CheckFn)] = &[
    ("matcore", "eigen_reconstruction", eig_reconstruction),
    ("matcore", "tensor_associativity", tensor_associativity),
    ("matcore", "partial_trace_keeps_trace", partial_trace_keeps_trace),
    ("matcore", "partial_transpose_trace_hermitian", partial_transpose_preserves),
    ("classical_info", "kl_nonnegative", kl_nonnegative),
    ("classical_info", "kl_data_processing", kl_monotone),
    ("classical_info", "mutual_info_local_maps", mutual_info_local_maps),
    ("classical_info", "sequence_type_identity", sequence_type_identity),
    ("classical_info", "type_class_sandwich", type_class_sandwich),
    ("classical_info", "mixing_concavity_log_sum", mixing_and_log_sum),
    ("qstate", "schmidt_rank_bound", schmidt_rank_bound),
    ("qstate", "pure_marginal_entropies", pure_marginal_entropies),
    ("qstate", "purify_round_trip", purify_round_trip),
    ("qstate", "bures_fidelity_identity", bures_fidelity_identity),
    ("qchannel", "data_processing", quantum_data_processing),
    ("qchannel", "selective_branches", selective_branches),
    ("qchannel", "dilation_right_inverse", dilation_inverts_apply),
    ("qchannel", "f1_unitary_invariance", unitary_invariance),
    ("qchannel", "f2_partial_trace", partial_trace_monotone),
    ("qchannel", "f3_additivity", tensor_additivity),
    ("qentropy", "araki_lieb", araki_lieb),
    ("qentropy", "additivity_concavity", additivity_and_concavity),
    ("qentropy", "measured_entropy_dominates", measured_entropy_dominates),
    ("qentropy", "holevo_mutual_info", holevo_as_mutual_info),
    ("qentropy", "donald_equality", donald_equality),
    ("entanglement", "e1_separable", ree_separable),
    ("entanglement", "e2_local_unitary", ree_local_unitary),
    ("entanglement", "e3_local_channels", ree_local_channels),
    ("entanglement", "e4_pure_states", ree_pure),
    ("entanglement", "ree_below_decomposition", ree_below_decomposition),
    ("entanglement", "memory_inequalities", memory_inequalities),
    ("protocols", "teleport_all_branches", teleport_exhaustive),
    ("protocols", "sdc_pure_states", sdc_pure),
    ("protocols", "sdc_below_cgdc", sdc_below_cgdc),
    ("protocols", "landauer_decomposition", landauer_decomposition),
    ("protocols", "compression_ladder", compression_ladder),
    ("qalgo", "deutsch_verdicts", deutsch_verdicts),
    ("qalgo", "three_term_mutual_info", grover_three_term),
    ("qalgo", "branch_entropies_constant", grover_branch_entropies),
    ("qalgo", "near_recurrence", grover_recurrence),
    ("qalgo", "holevo_cap", grover_holevo_cap),
];

pub fn check_names() -> Vec<(&'static str, &'static str)> {
    CHECKS.iter().map(|(m, n, _)| (*m, *n)).collect()
}

/// Run the checks whose `module/name` contains `filter` (all when `None`).
pub fn run(seed: u64, filter: Option<&str>) -> SelftestReport {
    let checks = CHECKS
        .par_iter()
        .enumerate()
        .filter(|(_, (m, n, _))| filter.is_none_or(|f| format!("{m}/{n}").contains(f)))
        .map(|(i, (module, name, f))| {
            let mut rng = child(seed, i as u64);
            let (passed, detail) = match f(&mut rng) {
                Ok(r) => r,
                Err(e) => (false, format!("error: {e}")),
            };
            Check { module, name, passed, detail }
        })
        .collect();
    SelftestReport { seed, checks }
}
