//! Dense 5×5 exponential of the secular generator on (gg, αα, ββ, αβ, βα).

use exciton_qpt_core::{BathParams, C64};

pub type M5 = [[C64; 5]; 5];

pub const CM: f64 = 2.0 * std::f64::consts::PI * 2.99792458e-5;
pub const KB: f64 = 0.69504;

pub fn mul(a: &M5, b: &M5) -> M5 {
    let mut out = [[C64::new(0.0, 0.0); 5]; 5];
    for i in 0..5 {
        for j in 0..5 {
            for k in 0..5 {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn expm(a: &M5) -> M5 {
    let norm: f64 = a.iter().map(|r| r.iter().map(|v| v.norm()).sum::<f64>()).fold(0.0, f64::max);
    let squarings = (norm.max(1e-300).log2().ceil() as i32 + 4).max(0);
    let scale = 0.5f64.powi(squarings);
    let x: M5 = a.map(|r| r.map(|v| v * scale));
    let mut result = [[C64::new(0.0, 0.0); 5]; 5];
    let mut term = result;
    for i in 0..5 {
        result[i][i] = C64::new(1.0, 0.0);
        term[i][i] = C64::new(1.0, 0.0);
    }
    for k in 1..30 {
        term = mul(&term, &x).map(|r| r.map(|v| v / k as f64));
        for i in 0..5 {
            for j in 0..5 {
                result[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..squarings {
        result = mul(&result, &result);
    }
    result
}

pub fn generator(omega_ab: f64, bath: &BathParams) -> M5 {
    let kd = bath.k_down;
    let ku = kd * (-omega_ab / (KB * bath.temperature)).exp();
    let kl = bath.k_leak;
    let gamma = (kd + ku + 2.0 * kl) / 2.0 + bath.gamma_pd;
    let r = |x: f64| C64::new(x, 0.0);
    let z = r(0.0);
    [
        [z, r(kl), r(kl), z, z],
        [z, r(-kd - kl), r(ku), z, z],
        [z, r(kd), r(-ku - kl), z, z],
        [z, z, z, C64::new(-gamma, -omega_ab * CM), z],
        [z, z, z, z, C64::new(-gamma, omega_ab * CM)],
    ]
}
