//! Seeded random generation of states, operators and subspaces.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::numerics::{c64, CMatrix, CVector, Hermitian, Ket, Projection, Tolerances};

pub const RNG_ALGORITHM: &str = "chacha8";

/// A reproducible source of randomness: a 64-bit seed plus the generator
/// family. Independent substreams are addressed by index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SeededRng {
    pub seed: u64,
    pub algorithm: &'static str,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            algorithm: RNG_ALGORITHM,
        }
    }

    /// Generator for substream `index`. Distinct indices give independent,
    /// non-overlapping streams.
    pub fn stream(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }

    /// A child seed for nested campaigns (e.g. per-instance seeds).
    pub fn child(&self, index: u64) -> SeededRng {
        SeededRng::new(splitmix64(self.seed ^ splitmix64(index)))
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CVector {
    CVector::from_fn(dim, |_, _| c64(gaussian(rng), gaussian(rng)))
}

/// Haar-random pure state: 2d independent standard Gaussians, normalized.
pub fn haar_ket<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Ket {
    loop {
        if let Ok(k) = Ket::normalize(gaussian_vector(rng, dim)) {
            return k;
        }
    }
}

/// `(G + G†)/2` with complex Gaussian `G`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Hermitian {
    let g = CMatrix::from_fn(dim, dim, |_, _| c64(gaussian(rng), gaussian(rng)));
    let h = (&g + g.adjoint()).scale(0.5);
    Hermitian::new(h, &Tolerances::default()).expect("symmetrized by construction")
}

/// Haar-random unitary via QR of a complex Ginibre matrix with the phases
/// of `R`'s diagonal absorbed.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| c64(gaussian(rng), gaussian(rng)));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        let n = d.norm();
        if n > 0.0 {
            let phase = d / n;
            for i in 0..dim {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// `U diag(spectrum) U†`.
pub fn hermitian_in_basis(unitary: &CMatrix, spectrum: &[f64]) -> Hermitian {
    let d = CMatrix::from_diagonal(&CVector::from_iterator(
        spectrum.len(),
        spectrum.iter().map(|&x| c64(x, 0.0)),
    ));
    let m = unitary * d * unitary.adjoint();
    Hermitian::new((&m + m.adjoint()).scale(0.5), &Tolerances::default())
        .expect("symmetrized by construction")
}

/// Projection onto the span of `rank` Gaussian vectors.
pub fn random_projection<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> Projection {
    if rank == 0 {
        return Projection::zero(dim);
    }
    let vs: Vec<CVector> = (0..rank).map(|_| gaussian_vector(rng, dim)).collect();
    Projection::onto_span(dim, &vs, &Tolerances::default())
}

pub fn random_atom<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Projection {
    Projection::from_ket(&haar_ket(rng, dim))
}

/// A Haar state restricted to the range of `p` (zero projection → `None`).
pub fn ket_in_range<R: Rng + ?Sized>(rng: &mut R, p: &Projection) -> Option<Ket> {
    let basis = p.range_basis();
    if basis.is_empty() {
        return None;
    }
    let coeffs = gaussian_vector(rng, basis.len());
    let mut v = CVector::zeros(p.dim());
    for (b, c) in basis.iter().zip(coeffs.iter()) {
        v += b * *c;
    }
    Ket::normalize(v).ok()
}
