use crate::fisher::CandidateMatrix;
use crate::scalar::Real;
use nalgebra::DMatrix;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use std::f64::consts::TAU;

/// Standard normal draws from ChaCha20 (seeded with `seed_from_u64`, on
/// stream `stream`) through the Box-Muller transform.
///
/// Each pair of 64-bit words `(a, b)` yields `u₁ = ((a >> 11) + 1)·2⁻⁵³`
/// in `(0, 1]` and `u₂ = (b >> 11)·2⁻⁵³` in `[0, 1)`, then the two normals
/// `√(−2 ln u₁)·cos(2π u₂)` and `√(−2 ln u₁)·sin(2π u₂)`, emitted in that order.
pub struct NormalStream {
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl NormalStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng, spare: None }
    }

    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        let u1 = ((self.rng.next_u64() >> 11) + 1) as f64 * SCALE;
        let u2 = (self.rng.next_u64() >> 11) as f64 * SCALE;
        let radius = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (TAU * u2).sin_cos();
        self.spare = Some(radius * s);
        radius * c
    }

    /// `rows × cols` matrix filled row by row.
    pub fn matrix<T: Real>(&mut self, rows: usize, cols: usize) -> DMatrix<T> {
        let mut out = DMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out[(i, j)] = T::lit(self.next_normal());
            }
        }
        out
    }
}

/// `n × r` candidate matrix of i.i.d. N(0, 1) entries (stream 0).
pub fn gen_random_system<T: Real>(n: usize, r: usize, seed: u64) -> CandidateMatrix<T> {
    let rows = NormalStream::new(seed, 0).matrix(n.max(1), r.max(1));
    CandidateMatrix::new(rows).expect("finite normal draws")
}

/// `r × m` latent states of i.i.d. N(0, 1) entries (stream 1).
pub fn gen_latent<T: Real>(r: usize, m: usize, seed: u64) -> DMatrix<T> {
    NormalStream::new(seed, 1).matrix(r, m)
}
