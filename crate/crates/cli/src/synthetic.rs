//! Synthetic gridded snapshot data: smooth spatial modes with decaying
//! energy, Gaussian temporal coefficients and white measurement noise.

use greedy_sensors::data::{NormalStream, SnapshotData};
use greedy_sensors::Error;
use nalgebra::DMatrix;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticSpec {
    pub width: usize,
    pub height: usize,
    pub snapshots: usize,
    pub rank: usize,
    /// Energy ratio between consecutive modes.
    pub decay: f64,
    pub noise: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    /// 40 × 25 grid (n = 1000), 520 snapshots, rank 10.
    fn default() -> Self {
        Self {
            width: 40,
            height: 25,
            snapshots: 520,
            rank: 10,
            decay: 0.75,
            noise: 0.05,
            seed: 2024,
        }
    }
}

/// Mode `j` on the unit square: a separable cosine pattern whose
/// wavenumbers walk outward, with a seeded phase.
fn mode(j: usize, x: f64, y: f64, phase: f64) -> f64 {
    let kx = (j % 4 + 1) as f64;
    let ky = (j / 4 + 1) as f64;
    (PI * kx * x + phase).cos() * (PI * ky * y + 0.5 * phase).cos()
}

pub fn synthetic_snapshots(spec: &SyntheticSpec) -> Result<SnapshotData<f64>, Error> {
    let n = spec.width * spec.height;
    let mut g = NormalStream::new(spec.seed, 0);
    let phases: Vec<f64> = (0..spec.rank).map(|_| g.next_normal()).collect();
    let modes = DMatrix::from_fn(n, spec.rank, |i, j| {
        let x = (i % spec.width) as f64 / spec.width as f64;
        let y = (i / spec.width) as f64 / spec.height as f64;
        mode(j, x, y, phases[j])
    });
    let mut coeff: DMatrix<f64> = NormalStream::new(spec.seed, 1).matrix(spec.rank, spec.snapshots);
    for j in 0..spec.rank {
        let amp = spec.decay.powi(j as i32);
        coeff.row_mut(j).scale_mut(amp);
    }
    let noise: DMatrix<f64> = NormalStream::new(spec.seed, 2).matrix(n, spec.snapshots);
    let x = modes * coeff + noise * spec.noise;
    SnapshotData::new(x, None, Some((spec.width, spec.height)))
}
