use std::path::Path;

use serde_json::{json, Value};

use releq::classical::{sanov_exponent, type_class_prob, ProbDist, TypeClassProb};
use releq::entanglement::{ree, ReeOptions};
use releq::io::{read_ensemble, read_json, write_json, Cell};
use releq::matcore::ComplexMatrix;
use releq::protocols::{
    bekenstein, dense_coding_capacity, hydrogen_nucleus_energy, landauer_erasure, processing_rate,
    schumacher_compress, teleport_with,
};
use releq::qalgo::{bitwise_oracle_trace, grover_csv_rows, grover_trace, BoolFn};
use releq::qchannel::{apply, choi_state, dilate, ppt_check, KrausChannel};
use releq::qentropy::{accessible_info, bosonic_capacity, holevo, qmutual, qrelent, von_neumann};
use releq::qstate::{DensityMatrix, Ket};
use releq::random::child;
use releq::{selftest, Error, Units};

use crate::output::{Payload, Report};
use crate::{ChannelCommand, Cli, Command, Failure};

fn from_bits(units: Units, bits: f64) -> f64 {
    units.from_nats(Units::Bits.to_nats(bits))
}

fn bad_file(path: &Path, e: impl ToString) -> Failure {
    Failure::invalid(format!("{}: {}", path.display(), e.to_string()))
}

fn decode<T: serde::de::DeserializeOwned>(path: &Path, v: Value) -> Result<T, Failure> {
    serde_json::from_value(v).map_err(|e| bad_file(path, e))
}

fn load<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    Ok(read_json(path)?)
}

/// A state file holds either a DensityMatrix or a Ket.
fn read_state(path: &Path) -> Result<DensityMatrix, Failure> {
    let v: Value = load(path)?;
    if v.get("amps").is_some() {
        Ok(decode::<Ket>(path, v)?.to_density())
    } else {
        decode(path, v)
    }
}

fn quantities(units: Units, items: &[(&str, f64)]) -> Payload {
    Payload::Quantities(items.iter().map(|(n, v)| (n.to_string(), *v, units.label().to_string())).collect())
}

fn ppt_json(rho: &DensityMatrix) -> Result<Value, Failure> {
    let v = ppt_check(rho)?;
    Ok(json!({
        "min_eig": v.min_eig,
        "is_ppt": v.is_ppt,
        "conclusive": v.conclusive,
        "verdict": v.label(),
    }))
}

fn class_row(n: usize, t: &TypeClassProb) -> Vec<Cell> {
    vec![n.into(), t.exact.into(), t.lower.into(), t.upper.into()]
}

const TYPE_HEADER: [&str; 4] = ["n", "exact", "lower", "upper"];

pub fn dispatch(cli: &Cli) -> Result<Report, Failure> {
    let units = cli.units;
    let seed = cli.seed;
    Ok(match &cli.command {
        Command::Entropy(a) => {
            let rho = read_state(&a.state)?;
            if rho.dims().len() == 2 {
                let sa = von_neumann(&rho.reduce(&[0])?, units);
                let sb = von_neumann(&rho.reduce(&[1])?, units);
                let items =
                    [("S(AB)", von_neumann(&rho, units)), ("S(A)", sa), ("S(B)", sb), ("I(A:B)", qmutual(&rho, units)?)];
                Report::new(quantities(units, &items))
            } else {
                Report::new(quantities(units, &[("S", von_neumann(&rho, units))]))
            }
        }
        Command::Holevo { ensemble, povm } => {
            let e = read_ensemble(ensemble)?;
            let mean: f64 = e.items().iter().map(|(p, s)| p * von_neumann(s, units)).sum();
            let mut items = vec![("chi", holevo(&e, units)), ("S(avg)", von_neumann(&e.average(), units)), ("mean S", mean)];
            if let Some(path) = povm {
                let v: Value = load(path)?;
                let effects: Vec<ComplexMatrix> =
                    decode(path, v.get("effects").cloned().ok_or_else(|| bad_file(path, "missing \"effects\""))?)?;
                let effects: Vec<_> = effects.into_iter().map(ComplexMatrix::into_matrix).collect();
                items.push(("accessible", accessible_info(&e, &effects, units)?));
            }
            Report::new(quantities(units, &items))
        }
        Command::Ree { state, restarts, tol, components, closest } => {
            let rho = read_state(state)?;
            let opts = ReeOptions { components: *components, restarts: *restarts, tol: *tol, seed, units, ..Default::default() };
            let result = ree(&rho, &opts)?;
            if let Some(path) = closest {
                write_json(path, &result.closest_state)?;
            }
            Report::new(Payload::Json(serde_json::to_value(&result).map_err(Failure::invalid)?))
        }
        Command::Channel(ChannelCommand::Apply { channel, state }) => {
            let ch: KrausChannel = load(channel)?;
            let out = apply(&ch, &read_state(state)?)?;
            Report::new(Payload::Json(serde_json::to_value(&out).map_err(Failure::invalid)?))
        }
        Command::Channel(ChannelCommand::Dilate { channel }) => {
            let ch: KrausChannel = load(channel)?;
            let d = dilate(&ch);
            let unitary = ComplexMatrix::from_matrix(d.unitary)?;
            Report::new(Payload::Json(json!({ "unitary": unitary, "ancilla": d.ancilla_state })))
        }
        Command::Channel(ChannelCommand::Ppt { channel }) => {
            let ch: KrausChannel = load(channel)?;
            Report::new(Payload::Json(ppt_json(&choi_state(&ch))?)).note("verdict for the normalized Choi state")
        }
        Command::Ppt(a) => Report::new(Payload::Json(ppt_json(&read_state(&a.state)?)?)),
        Command::Types { q, p, n_max } => {
            let (q, p): (ProbDist, ProbDist) = (load(q)?, load(p)?);
            let mut rows = Vec::new();
            for n in 1..=*n_max {
                match type_class_prob(&q, &p, n) {
                    Ok(t) => rows.push(class_row(n, &t)),
                    Err(Error::InvalidType { .. }) => continue,
                    Err(e) => return Err(e.into()),
                }
            }
            let d = releq::classical::kl_divergence(&p, &q, units)?;
            Report::new(Payload::Csv { header: TYPE_HEADER.to_vec(), rows }).note(format!("D(p||q) = {d} {units}"))
        }
        Command::Sanov { q, candidates, n_max } => {
            let q: ProbDist = load(q)?;
            let cands: Vec<ProbDist> = load(candidates)?;
            let (best, exponent) = sanov_exponent(&q, &cands, units)?;
            let mut rows = Vec::new();
            for n in 1..=*n_max {
                let mut hits = Vec::new();
                for c in &cands {
                    match type_class_prob(&q, c, n) {
                        Ok(t) => hits.push(t),
                        Err(Error::InvalidType { .. }) => {}
                        Err(e) => return Err(e.into()),
                    }
                }
                if hits.is_empty() {
                    continue;
                }
                let exact = hits.iter().map(|t| t.exact).sum::<f64>();
                let lower = hits.iter().map(|t| t.lower).fold(0.0, f64::max);
                let upper = hits.len() as f64 * hits.iter().map(|t| t.upper).fold(0.0, f64::max);
                rows.push(vec![n.into(), exact.into(), lower.into(), upper.into()]);
            }
            Report::new(Payload::Csv { header: TYPE_HEADER.to_vec(), rows })
                .note(format!("closest candidate {:?}, exponent {exponent} {units}", best.probs()))
        }
        Command::Compress { theta, n, trials } => {
            let r = schumacher_compress(*theta, *n, *trials, seed)?;
            Report::new(Payload::Json(json!({
                "theta": r.theta,
                "n": r.n,
                "typical_dim": r.typical_dim,
                "typical_minus_counts": r.typical_minus_counts,
                "success_prob": r.success_prob,
                "exact_success_prob": r.exact_success_prob,
                "rate_per_symbol": from_bits(units, r.rate_bits_per_symbol),
                "entropy": from_bits(units, r.entropy_bits),
                "units": units,
                "trials": r.trials,
            })))
        }
        Command::TeleportDemo { trials } => {
            let mut rows = Vec::with_capacity(*trials);
            let mut counts = [0usize; 4];
            let mut worst = 1.0f64;
            for i in 0..*trials {
                let mut rng = child(seed, i as u64);
                let psi = Ket::random(vec![2], &mut rng)?;
                let o = teleport_with(&psi, &mut rng)?;
                counts[o.classical_bits as usize] += 1;
                worst = worst.min(o.fidelity_to_input);
                let bits = format!("{:02b}", o.classical_bits);
                rows.push(vec![i.into(), bits.into(), o.probability.into(), o.fidelity_to_input.into()]);
            }
            Report::new(Payload::Csv { header: vec!["trial", "outcome", "probability", "fidelity"], rows })
                .note(format!("outcome counts 00:{} 01:{} 10:{} 11:{}", counts[0], counts[1], counts[2], counts[3]))
                .note(format!("min fidelity {worst}"))
        }
        Command::DenseCodingCurve { points } => {
            if *points < 2 {
                return Err(Failure::invalid(format!("--points {points}: need at least 2")));
            }
            let rows = (0..*points)
                .map(|i| {
                    let x = i as f64 / (*points - 1) as f64;
                    Ok(vec![x.into(), from_bits(units, dense_coding_capacity(x)?).into()])
                })
                .collect::<Result<Vec<_>, Failure>>()?;
            Report::new(Payload::Csv { header: vec!["x", "C"], rows })
        }
        Command::Landauer { state, omega } => {
            let rho = read_state(state)?;
            let omega = match omega {
                Some(path) => read_state(path)?,
                None => DensityMatrix::maximally_mixed(rho.dims().to_vec()),
            };
            let items = [
                ("erasure cost", landauer_erasure(&rho, &omega, units)?),
                ("S(rho||omega)", qrelent(&rho, &omega, units)?),
                ("S(rho)", von_neumann(&rho, units)),
            ];
            Report::new(quantities(units, &items))
        }
        Command::Bosonic { power, temperature } => {
            let c = bosonic_capacity(*power, *temperature)?;
            let unit = format!("{units}/s");
            let items = [
                ("capacity", c.capacity),
                ("classical limit", c.classical_limit),
                ("quantum limit", c.quantum_limit),
                ("zero temperature", c.zero_temperature),
            ];
            Report::new(Payload::Quantities(
                items.iter().map(|(n, v)| (n.to_string(), from_bits(units, *v), unit.clone())).collect(),
            ))
        }
        Command::Bekenstein { energy, radius } => {
            let e = energy.unwrap_or_else(hydrogen_nucleus_energy);
            Report::new(Payload::Quantities(vec![
                ("bound".into(), from_bits(units, bekenstein(e, *radius)?), units.label().into()),
                ("processing rate".into(), from_bits(units, processing_rate(e)?), format!("{units}/s")),
            ]))
        }
        Command::Deutsch { f } => {
            let func: BoolFn = f.parse()?;
            let r = releq::qalgo::deutsch(func)?;
            Report::new(Payload::Json(json!({
                "f": f,
                "verdict": r.verdict,
                "queries_used": r.queries_used,
                "holevo_diag": from_bits(units, r.holevo_diag),
                "units": units,
                "first_qubit": r.first_qubit,
            })))
        }
        Command::GroverMi { qubits, p, kmax, marked } => {
            let trace = grover_trace(*qubits, *p, *kmax, *marked)?;
            let rows = grover_csv_rows(&trace)
                .into_iter()
                .map(|(k, mi, bound)| vec![k.into(), from_bits(units, mi).into(), from_bits(units, bound).into()])
                .collect();
            let best = trace.iterations.iter().map(|s| s.marked_success).fold(0.0, f64::max);
            Report::new(Payload::Csv { header: vec!["k", "I_MC", "bound"], rows })
                .note(format!("S0 = {} {units}, peaks at k = {:?}", from_bits(units, trace.initial_entropy()), trace.peaks()))
                .note(format!("best success probability for branch {marked}: {best}"))
        }
        Command::BitwiseTrace { qubits } => {
            let t = bitwise_oracle_trace(*qubits)?;
            let rows = t
                .mutual_info_bits
                .iter()
                .enumerate()
                .map(|(q, mi)| vec![q.into(), from_bits(units, *mi).into()])
                .collect();
            Report::new(Payload::Csv { header: vec!["query", "I_MC"], rows })
                .note(format!("full correlation after {} queries", t.queries_to_full_correlation))
        }
        Command::Selftest { filter } => {
            let report = selftest::run(seed, filter.as_deref());
            if report.checks.is_empty() {
                return Err(Failure::invalid(format!("no checks match {:?}", filter.as_deref().unwrap_or(""))));
            }
            let mut r = Report::new(Payload::Text(report.table()));
            r.ok = report.all_passed();
            r
        }
    })
}
