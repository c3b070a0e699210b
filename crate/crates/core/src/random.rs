//! Seeded samplers for states, unitaries and distributions.
//!
//! All samplers take the generator explicitly. [`seeded`] returns a ChaCha8
//! stream, so output is bit-identical across platforms for a given seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matcore::{CMatrix, CVector, C64};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent child generator for task `index`; used to give parallel
/// workers disjoint streams.
pub fn child(seed: u64, index: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index.wrapping_add(1));
    rng
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

/// Ginibre matrix with i.i.d. standard complex Gaussian entries.
pub fn random_complex_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    // fill row-major for a stable draw order
    let mut m = CMatrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m[(r, c)] = complex_gaussian(rng);
        }
    }
    m
}

pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let g = random_complex_matrix(dim, dim, rng);
    (&g + g.adjoint()) * C64::new(0.5, 0.0)
}

/// `G G†` for a `dim x rank` Ginibre `G`; PSD with rank `rank` almost surely.
pub fn random_psd<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> CMatrix {
    let g = random_complex_matrix(dim, rank, rng);
    &g * g.adjoint()
}

/// Unit-trace [`random_psd`]: the reduction of a Haar-random pure state on
/// `dim x rank`.
pub fn random_density_matrix<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> CMatrix {
    let p = random_psd(dim, rank, rng);
    let tr = p.trace().re;
    p / C64::new(tr, 0.0)
}

/// Normalized isotropic complex Gaussian vector (Haar-distributed ray).
pub fn random_unit_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CVector {
    let v = CVector::from_iterator(dim, (0..dim).map(|_| complex_gaussian(rng)));
    let norm = v.norm();
    v / C64::new(norm, 0.0)
}

/// Haar-random unitary via QR of a Ginibre matrix with the phase fix on `R`.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let g = random_complex_matrix(dim, dim, rng);
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, k)] *= phase;
        }
    }
    q
}

/// Uniform draw from the probability simplex (flat Dirichlet).
pub fn random_simplex<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}
