//! Classical information layer: Shannon and relative entropy, mutual
//! information, the method of types, Sanov exponents and stochastic evolution.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use rand::Rng;

use crate::error::{Error, Result};
use crate::random::random_simplex;
use crate::units::{entropy_nats, Units};

pub const PROB_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbDist {
    probs: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl ProbDist {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        Self::validate(&probs)?;
        Ok(Self { probs, labels: None })
    }

    pub fn with_labels(probs: Vec<f64>, labels: Vec<String>) -> Result<Self> {
        Self::validate(&probs)?;
        if labels.len() != probs.len() {
            return Err(Error::SizeMismatch { left: probs.len(), right: labels.len() });
        }
        Ok(Self { probs, labels: Some(labels) })
    }

    /// Rescale nonnegative weights to sum to one.
    pub fn normalized(weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if weights.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) || !(total > 0.0) {
            return Err(Error::InvalidDistribution("weights must be nonnegative with positive sum".into()));
        }
        Self::new(weights.into_iter().map(|w| w / total).collect())
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDistribution("empty distribution".into()));
        }
        Self::new(vec![1.0 / n as f64; n])
    }

    /// Uniform draw from the probability simplex.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        Self::normalized(random_simplex(n, rng))
    }

    fn validate(probs: &[f64]) -> Result<()> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("empty distribution".into()));
        }
        if let Some(p) = probs.iter().find(|p| !(**p >= 0.0) || !p.is_finite()) {
            return Err(Error::InvalidDistribution(format!("entry {p} is not a probability")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PROB_TOL {
            return Err(Error::InvalidDistribution(format!("sum is {total}")));
        }
        Ok(())
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// Column-stochastic matrix: `entries[j][k] = P(j|k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StochasticMatrix {
    entries: Vec<Vec<f64>>,
}

impl StochasticMatrix {
    pub fn new(entries: Vec<Vec<f64>>) -> Result<Self> {
        let rows = entries.len();
        if rows == 0 {
            return Err(Error::InvalidStochastic("no rows".into()));
        }
        let cols = entries[0].len();
        if cols == 0 || entries.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidStochastic("ragged or empty rows".into()));
        }
        if entries.iter().flatten().any(|x| !(0.0..=1.0).contains(x)) {
            return Err(Error::InvalidStochastic("entries must lie in [0,1]".into()));
        }
        for k in 0..cols {
            let s: f64 = entries.iter().map(|row| row[k]).sum();
            if (s - 1.0).abs() > PROB_TOL {
                return Err(Error::InvalidStochastic(format!("column {k} sums to {s}")));
            }
        }
        Ok(Self { entries })
    }

    /// Columns drawn independently and uniformly from the simplex.
    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        let columns: Vec<Vec<f64>> = (0..cols).map(|_| random_simplex(rows, rng)).collect();
        let entries = (0..rows).map(|j| columns.iter().map(|c| c[j]).collect()).collect();
        Self { entries }
    }

    pub fn identity(n: usize) -> Self {
        let entries = (0..n)
            .map(|j| (0..n).map(|k| if j == k { 1.0 } else { 0.0 }).collect())
            .collect();
        Self { entries }
    }

    /// Independent local maps on a joint `(a, b)` index space: `(T_a ⊗ T_b)`.
    pub fn product(a: &StochasticMatrix, b: &StochasticMatrix) -> Self {
        let (ra, ca) = (a.rows(), a.cols());
        let (rb, cb) = (b.rows(), b.cols());
        let mut entries = vec![vec![0.0; ca * cb]; ra * rb];
        for i in 0..ra {
            for j in 0..rb {
                for k in 0..ca {
                    for l in 0..cb {
                        entries[i * rb + j][k * cb + l] = a.entries[i][k] * b.entries[j][l];
                    }
                }
            }
        }
        Self { entries }
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries[0].len()
    }

    pub fn entries(&self) -> &[Vec<f64>] {
        &self.entries
    }
}

pub fn shannon_entropy(p: &ProbDist, units: Units) -> f64 {
    units.from_nats(entropy_nats(p.probs.iter().copied()))
}

/// `Σ p ln(p/q)`; `+∞` when `p` puts mass where `q` has none.
pub fn kl_divergence(p: &ProbDist, q: &ProbDist, units: Units) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::SizeMismatch { left: p.len(), right: q.len() });
    }
    Ok(units.from_nats(kl_nats(&p.probs, &q.probs)))
}

pub(crate) fn kl_nats(p: &[f64], q: &[f64]) -> f64 {
    let mut total = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi > 0.0 {
            if qi <= 0.0 {
                return f64::INFINITY;
            }
            total += pi * (pi / qi).ln();
        }
    }
    total.max(0.0)
}

fn check_joint(joint: &ProbDist, n_a: usize, n_b: usize) -> Result<()> {
    if n_a == 0 || n_b == 0 || n_a * n_b != joint.len() {
        return Err(Error::DimMismatch(format!(
            "joint of size {} does not factor as {n_a}x{n_b}",
            joint.len()
        )));
    }
    Ok(())
}

/// Marginals `(p(a), p(b))` of a joint laid out as `index = a * n_b + b`.
pub fn marginals(joint: &ProbDist, n_a: usize, n_b: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    check_joint(joint, n_a, n_b)?;
    let mut pa = vec![0.0; n_a];
    let mut pb = vec![0.0; n_b];
    for a in 0..n_a {
        for b in 0..n_b {
            let p = joint.probs[a * n_b + b];
            pa[a] += p;
            pb[b] += p;
        }
    }
    Ok((pa, pb))
}

/// `S(A) + S(B) - S(A,B)`.
pub fn mutual_information(joint: &ProbDist, n_a: usize, n_b: usize, units: Units) -> Result<f64> {
    let (pa, pb) = marginals(joint, n_a, n_b)?;
    let value = entropy_nats(pa) + entropy_nats(pb) - entropy_nats(joint.probs.iter().copied());
    Ok(units.from_nats(value.max(0.0)))
}

/// Which side of the joint is conditioned on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Given {
    A,
    B,
}

/// `S_A(B) = S(A,B) - S(A)` for `Given::A`, and symmetrically for `Given::B`.
pub fn conditional_entropy(
    joint: &ProbDist,
    n_a: usize,
    n_b: usize,
    given: Given,
    units: Units,
) -> Result<f64> {
    let (pa, pb) = marginals(joint, n_a, n_b)?;
    let s_ab = entropy_nats(joint.probs.iter().copied());
    let s_given = match given {
        Given::A => entropy_nats(pa),
        Given::B => entropy_nats(pb),
    };
    Ok(units.from_nats((s_ab - s_given).max(0.0)))
}

/// Empirical type of a sequence together with the exact size of its type class.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeRecord {
    pub n: usize,
    pub alphabet_size: usize,
    pub counts: Vec<usize>,
    pub type_dist: ProbDist,
    pub class_size: BigUint,
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// `n! / Π c_a!`
pub fn multinomial(counts: &[usize]) -> BigUint {
    let n: usize = counts.iter().sum();
    let denom = counts.iter().fold(BigUint::one(), |acc, &c| acc * factorial(c));
    factorial(n) / denom
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    multinomial(&[k, n - k])
}

/// Natural log of an arbitrary-size integer without overflowing `f64`.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().map(f64::ln).unwrap_or(f64::INFINITY);
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn type_of<T: PartialEq + std::fmt::Debug>(sequence: &[T], alphabet: &[T]) -> Result<TypeRecord> {
    if sequence.is_empty() {
        return Err(Error::InvalidDistribution("empty sequence has no type".into()));
    }
    let mut counts = vec![0usize; alphabet.len()];
    for sym in sequence {
        let idx = alphabet
            .iter()
            .position(|a| a == sym)
            .ok_or_else(|| Error::UnknownSymbol(format!("{sym:?}")))?;
        counts[idx] += 1;
    }
    type_from_counts(counts)
}

pub fn type_from_counts(counts: Vec<usize>) -> Result<TypeRecord> {
    let n: usize = counts.iter().sum();
    if n == 0 {
        return Err(Error::InvalidDistribution("empty sequence has no type".into()));
    }
    let probs = counts.iter().map(|&c| c as f64 / n as f64).collect();
    Ok(TypeRecord {
        n,
        alphabet_size: counts.len(),
        type_dist: ProbDist::normalized(probs)?,
        class_size: multinomial(&counts),
        counts,
    })
}

/// Exact number of types of length-`n` sequences, `C(n+|A|-1, |A|-1)`, next to
/// the polynomial bound `(n+1)^|A|`.
pub fn type_counting_bounds(n: usize, alphabet_size: usize) -> (BigUint, BigUint) {
    let exact = if alphabet_size == 0 {
        BigUint::zero()
    } else {
        binomial(n + alphabet_size - 1, alphabet_size - 1)
    };
    let bound = num_traits::pow(BigUint::from(n + 1), alphabet_size);
    (exact, bound)
}

/// Every count vector of length `alphabet_size` summing to `n`.
pub fn enumerate_types(n: usize, alphabet_size: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for c in (0..=left).rev() {
            cur.push(c);
            rec(left - c, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if alphabet_size > 0 {
        rec(n, alphabet_size, &mut Vec::new(), &mut out);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SequenceProb {
    /// `Π q(x_i)`
    pub exact: f64,
    /// `exp(-n (S(P_x) + D(P_x || q)))`
    pub via_type: f64,
}

/// Probability of a symbol-index sequence under i.i.d. `q`, computed directly
/// and through the type identity.
pub fn sequence_prob(q: &ProbDist, x: &[usize]) -> Result<SequenceProb> {
    if x.is_empty() {
        return Err(Error::InvalidDistribution("empty sequence".into()));
    }
    let mut counts = vec![0usize; q.len()];
    let mut log_exact = 0.0;
    for &sym in x {
        if sym >= q.len() {
            return Err(Error::UnknownSymbol(sym.to_string()));
        }
        let p = q.probs[sym];
        if p <= 0.0 {
            return Err(Error::ZeroProbSymbol(sym.to_string()));
        }
        counts[sym] += 1;
        log_exact += p.ln();
    }
    let n = x.len() as f64;
    let ty: Vec<f64> = counts.iter().map(|&c| c as f64 / n).collect();
    let exponent = entropy_nats(ty.iter().copied()) + kl_nats(&ty, &q.probs);
    Ok(SequenceProb { exact: log_exact.exp(), via_type: (-n * exponent).exp() })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TypeClassProb {
    /// `Q^n(T(P))`
    pub exact: f64,
    /// `(n+1)^{-|A|} exp(-n D(P||Q))`
    pub lower: f64,
    /// `exp(-n D(P||Q))`
    pub upper: f64,
    /// natural logs of the three values, usable where they underflow
    pub ln_exact: f64,
    pub ln_lower: f64,
    pub ln_upper: f64,
}

fn type_counts(p_type: &ProbDist, n: usize) -> Result<Vec<usize>> {
    if n == 0 {
        return Err(Error::InvalidType { n });
    }
    p_type
        .probs
        .iter()
        .map(|&p| {
            let c = p * n as f64;
            let r = c.round();
            if (c - r).abs() > 1e-9 {
                Err(Error::InvalidType { n })
            } else {
                Ok(r as usize)
            }
        })
        .collect()
}

/// Probability of the whole type class of `p_type` under `q^n`, with the
/// polynomial-prefactor sandwich.
pub fn type_class_prob(q: &ProbDist, p_type: &ProbDist, n: usize) -> Result<TypeClassProb> {
    if q.len() != p_type.len() {
        return Err(Error::SizeMismatch { left: q.len(), right: p_type.len() });
    }
    let counts = type_counts(p_type, n)?;
    let mut ln_seq = 0.0;
    for (&c, &qa) in counts.iter().zip(&q.probs) {
        if c > 0 {
            ln_seq += if qa > 0.0 { c as f64 * qa.ln() } else { f64::NEG_INFINITY };
        }
    }
    let ln_exact = ln_biguint(&multinomial(&counts)) + ln_seq;
    let kl = kl_nats(&p_type.probs, &q.probs);
    let ln_upper = -(n as f64) * kl;
    let ln_lower = ln_upper - q.len() as f64 * ((n + 1) as f64).ln();
    Ok(TypeClassProb {
        exact: ln_exact.exp(),
        lower: ln_lower.exp(),
        upper: ln_upper.exp(),
        ln_exact,
        ln_lower,
        ln_upper,
    })
}

/// The member of `candidates` closest to `q` in relative entropy, with its
/// exponent. Ties go to the earliest candidate.
pub fn sanov_exponent<'a>(
    q: &ProbDist,
    candidates: &'a [ProbDist],
    units: Units,
) -> Result<(&'a ProbDist, f64)> {
    let mut best: Option<(&ProbDist, f64)> = None;
    for cand in candidates {
        let d = kl_divergence(cand, q, Units::Nats)?;
        if best.is_none_or(|(_, b)| d < b) {
            best = Some((cand, d));
        }
    }
    best.map(|(p, d)| (p, units.from_nats(d))).ok_or(Error::EmptySet)
}

/// `q_j = Σ_k P(j|k) p_k`
pub fn evolve_stochastic(p: &ProbDist, t: &StochasticMatrix) -> Result<ProbDist> {
    if t.cols() != p.len() {
        return Err(Error::DimMismatch(format!(
            "stochastic matrix has {} columns, distribution has {} entries",
            t.cols(),
            p.len()
        )));
    }
    let out: Vec<f64> = t
        .entries
        .iter()
        .map(|row| row.iter().zip(&p.probs).map(|(a, b)| a * b).sum())
        .collect();
    ProbDist::normalized(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_simplex, seeded};

    fn pd(v: &[f64]) -> ProbDist {
        ProbDist::new(v.to_vec()).unwrap()
    }

    #[test]
    fn shannon_examples() {
        assert!((shannon_entropy(&pd(&[0.5, 0.5]), Units::Bits) - 1.0).abs() < 1e-15);
        let s = shannon_entropy(&pd(&[2.0 / 3.0, 1.0 / 3.0]), Units::Nats);
        assert!((s - (3f64.ln() - 2.0 / 3.0 * 2f64.ln())).abs() < 1e-15);
        assert!((s - 0.6365).abs() < 5e-5);
        assert_eq!(shannon_entropy(&pd(&[1.0, 0.0]), Units::Bits), 0.0);
    }

    #[test]
    fn kl_examples() {
        let f = pd(&[0.5, 0.5]);
        assert_eq!(kl_divergence(&f, &f, Units::Nats).unwrap(), 0.0);
        let uf = pd(&[1.0 / 3.0, 2.0 / 3.0]);
        let d = kl_divergence(&uf, &f, Units::Nats).unwrap();
        let expected = (1.0 / 3.0) * (1.0f64 / 3.0).ln() + (2.0 / 3.0) * (2.0f64 / 3.0).ln()
            - (1.0 / 3.0) * 0.5f64.ln()
            - (2.0 / 3.0) * 0.5f64.ln();
        assert!((d - expected).abs() < 1e-15);
        assert!((d - 0.0566).abs() < 5e-5);
        let inf = kl_divergence(&pd(&[1.0, 0.0]), &pd(&[0.0, 1.0]), Units::Bits).unwrap();
        assert!(inf.is_infinite());
        assert!(matches!(
            kl_divergence(&f, &pd(&[1.0]), Units::Bits),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn mutual_information_examples() {
        let prod = pd(&[0.75 * 0.4, 0.75 * 0.6, 0.25 * 0.4, 0.25 * 0.6]);
        assert!(mutual_information(&prod, 2, 2, Units::Nats).unwrap() < 1e-15);
        let socks = pd(&[0.75, 0.0, 0.0, 0.25]);
        let mi = mutual_information(&socks, 2, 2, Units::Nats).unwrap();
        assert!((mi - (-0.75 * 0.75f64.ln() - 0.25 * 0.25f64.ln())).abs() < 1e-15);
        let fair = pd(&[0.5, 0.0, 0.0, 0.5]);
        assert!((mutual_information(&fair, 2, 2, Units::Nats).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!(matches!(mutual_information(&fair, 3, 2, Units::Nats), Err(Error::DimMismatch(_))));
    }

    #[test]
    fn conditional_entropy_examples() {
        let prod = pd(&[0.3 * 0.2, 0.3 * 0.8, 0.7 * 0.2, 0.7 * 0.8]);
        let s_b = shannon_entropy(&pd(&[0.2, 0.8]), Units::Bits);
        let c = conditional_entropy(&prod, 2, 2, Given::A, Units::Bits).unwrap();
        assert!((c - s_b).abs() < 1e-12);
        let corr = pd(&[0.5, 0.0, 0.0, 0.5]);
        assert!(conditional_entropy(&corr, 2, 2, Given::A, Units::Bits).unwrap() < 1e-15);

        let mut rng = seeded(4);
        let joint = ProbDist::new(random_simplex(9, &mut rng)).unwrap();
        let (pa, pb) = marginals(&joint, 3, 3).unwrap();
        let s_a = shannon_entropy(&ProbDist::normalized(pa).unwrap(), Units::Bits);
        let s_b = shannon_entropy(&ProbDist::normalized(pb).unwrap(), Units::Bits);
        let s_ab = shannon_entropy(&joint, Units::Bits);
        let c = conditional_entropy(&joint, 3, 3, Given::A, Units::Bits).unwrap();
        assert!((s_a + c - s_ab).abs() < 1e-12);
        let mi = mutual_information(&joint, 3, 3, Units::Bits).unwrap();
        assert!((mi - (s_b - c)).abs() < 1e-12);
    }

    #[test]
    fn type_examples() {
        let a: Vec<char> = "011010".chars().collect();
        let b: Vec<char> = "100110".chars().collect();
        let ta = type_of(&a, &['0', '1']).unwrap();
        assert_eq!(ta, type_of(&b, &['0', '1']).unwrap());
        assert_eq!(ta.class_size, BigUint::from(20u32));
        let zeros = vec!['0'; 9];
        assert_eq!(type_of(&zeros, &['0', '1']).unwrap().class_size, BigUint::one());
        let mut ten = vec![0u8; 5];
        ten.extend([1u8; 5]);
        assert_eq!(type_of(&ten, &[0, 1]).unwrap().class_size, BigUint::from(252u32));
        assert!(matches!(type_of(&['2'], &['0', '1']), Err(Error::UnknownSymbol(_))));
    }

    #[test]
    fn type_counting_examples() {
        assert_eq!(type_counting_bounds(6, 2), (BigUint::from(7u32), BigUint::from(49u32)));
        assert_eq!(type_counting_bounds(1, 3), (BigUint::from(3u32), BigUint::from(8u32)));
        assert_eq!(type_counting_bounds(4, 2), (BigUint::from(5u32), BigUint::from(25u32)));
        // enumeration oracle for the exact count
        for n in 1..8 {
            for k in 1..5 {
                let (exact, bound) = type_counting_bounds(n, k);
                assert_eq!(exact, BigUint::from(enumerate_types(n, k).len()));
                assert!(exact <= bound);
            }
        }
    }

    #[test]
    fn sequence_prob_examples() {
        let fair = pd(&[0.5, 0.5]);
        let sp = sequence_prob(&fair, &[0, 1, 1, 0, 1]).unwrap();
        assert!((sp.exact - 2f64.powi(-5)).abs() < 1e-18);
        assert!((sp.via_type / sp.exact - 1.0).abs() < 1e-12);

        let q = pd(&[2.0 / 3.0, 1.0 / 3.0]);
        let sp = sequence_prob(&q, &[0, 0]).unwrap();
        assert!((sp.exact - 4.0 / 9.0).abs() < 1e-15);
        assert!((sp.via_type - 4.0 / 9.0).abs() < 1e-15);

        // sequence of q's own type: exp(-n S(q))
        let sp = sequence_prob(&q, &[0, 1, 0]).unwrap();
        let s = shannon_entropy(&q, Units::Nats);
        assert!(((-3.0 * s).exp() / sp.exact - 1.0).abs() < 1e-12);

        let degenerate = pd(&[1.0, 0.0]);
        assert!(matches!(sequence_prob(&degenerate, &[1]), Err(Error::ZeroProbSymbol(_))));
    }

    #[test]
    fn type_class_prob_examples() {
        let fair = pd(&[0.5, 0.5]);
        let t = type_class_prob(&fair, &fair, 2).unwrap();
        assert!((t.exact - 0.5).abs() < 1e-15);
        assert!((t.lower - 1.0 / 9.0).abs() < 1e-15);
        assert!((t.upper - 1.0).abs() < 1e-15);

        let t = type_class_prob(&fair, &pd(&[1.0, 0.0]), 3).unwrap();
        assert!((t.exact - 0.125).abs() < 1e-15);

        let uf = pd(&[1.0 / 3.0, 2.0 / 3.0]);
        for n in [3usize, 30, 300, 3000] {
            let t = type_class_prob(&fair, &uf, n).unwrap();
            let formula = n as f64 * 3f64.ln() - 5.0 * n as f64 / 3.0 * 2f64.ln();
            assert!((t.ln_upper - formula).abs() < 1e-9 * n as f64);
            assert!(t.ln_lower <= t.ln_exact && t.ln_exact <= t.ln_upper);
        }
        assert!(matches!(
            type_class_prob(&fair, &pd(&[0.3, 0.7]), 2),
            Err(Error::InvalidType { .. })
        ));
    }

    #[test]
    fn sanov_examples() {
        let fair = pd(&[0.5, 0.5]);
        let set = vec![pd(&[0.2, 0.8]), fair.clone()];
        let (best, d) = sanov_exponent(&fair, &set, Units::Nats).unwrap();
        assert_eq!(best, &fair);
        assert_eq!(d, 0.0);

        let uf = pd(&[1.0 / 3.0, 2.0 / 3.0]);
        let (_, d) = sanov_exponent(&fair, std::slice::from_ref(&uf), Units::Nats).unwrap();
        assert!((d - 0.0566).abs() < 5e-5);

        let near = pd(&[0.45, 0.55]);
        let set = vec![uf, near.clone()];
        assert_eq!(sanov_exponent(&fair, &set, Units::Nats).unwrap().0, &near);
        assert!(matches!(sanov_exponent(&fair, &[], Units::Nats), Err(Error::EmptySet)));
    }

    #[test]
    fn evolve_examples() {
        let p = pd(&[0.2, 0.3, 0.5]);
        assert_eq!(evolve_stochastic(&p, &StochasticMatrix::identity(3)).unwrap(), p);
        let t = StochasticMatrix::new(vec![vec![0.1; 3], vec![0.6; 3], vec![0.3; 3]]).unwrap();
        let a = evolve_stochastic(&p, &t).unwrap();
        let b = evolve_stochastic(&pd(&[1.0, 0.0, 0.0]), &t).unwrap();
        for (x, y) in a.probs().iter().zip(b.probs()) {
            assert!((x - y).abs() < 1e-15);
        }
        assert!(matches!(
            evolve_stochastic(&pd(&[1.0]), &t),
            Err(Error::DimMismatch(_))
        ));
        assert!(StochasticMatrix::new(vec![vec![0.5, 0.5], vec![0.4, 0.5]]).is_err());
    }

    #[test]
    fn ln_biguint_large() {
        let big = factorial(2000);
        let direct: f64 = (1..=2000).map(|k| (k as f64).ln()).sum();
        assert!((ln_biguint(&big) - direct).abs() < 1e-9 * direct);
    }
}
