//! Orientational averages by sampling uniformly random rotations.

use exciton_qpt_core::signal::Polarizations;
use exciton_qpt_core::Vec3;
use nalgebra::{Quaternion, UnitQuaternion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// (mean, standard error) of Π(R·μᵢ·eᵢ) over uniformly random rotations R.
pub fn monte_carlo(mu: [Vec3; 4], e: &Polarizations, seed: u64, samples: usize) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..samples {
        let q: [f64; 4] = std::array::from_fn(|_| StandardNormal.sample(&mut rng));
        let r = UnitQuaternion::from_quaternion(Quaternion::new(q[0], q[1], q[2], q[3]));
        let v: f64 = mu.iter().zip(e.iter()).map(|(m, ei)| (r * m).dot(ei)).product();
        sum += v;
        sum_sq += v * v;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean) * n / (n - 1.0);
    (mean, (var / n).sqrt())
}
