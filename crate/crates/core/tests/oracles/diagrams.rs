//! Operator-level evaluation of the double-sided Feynman diagrams in the
//! {g, α, β, f} basis, built from a direct diagonalization of the site
//! Hamiltonian.

use exciton_qpt_core::process::{Level, Pair, ProcessMatrix};
use exciton_qpt_core::pulse::{Carrier, PulseToolbox};
use exciton_qpt_core::signal::Polarizations;
use exciton_qpt_core::{DimerParams, Exciton, ExcitonBasis, Vec3, C64};
use nalgebra::{Matrix2, Matrix4, SymmetricEigen};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Op = Matrix4<C64>;

pub const G: usize = 0;
pub const A: usize = 1;
pub const B: usize = 2;
pub const F: usize = 3;
pub const CM: f64 = 2.0 * std::f64::consts::PI * 2.99792458e-5;

pub struct Oracle {
    pub energies: [f64; 4],
    /// Cartesian components of the dipole operator in the exciton basis.
    pub dipole: [Matrix4<f64>; 3],
    pub gamma: f64,
}

impl Oracle {
    pub fn new(params: &DimerParams, gamma: f64) -> Oracle {
        let h = Matrix2::new(params.omega_a, params.coupling, params.coupling, params.omega_b);
        let eig = SymmetricEigen::new(h);
        let (hi, lo) = if eig.eigenvalues[0] > eig.eigenvalues[1] { (0, 1) } else { (1, 0) };
        let mut alpha = eig.eigenvectors.column(hi).into_owned();
        let mut beta = eig.eigenvectors.column(lo).into_owned();
        if alpha[0] < 0.0 {
            alpha = -alpha;
        }
        if beta[1] < 0.0 {
            beta = -beta;
        }
        // Site basis {g, A, B, f} to exciton basis {g, α, β, f}.
        let mut u = Matrix4::zeros();
        u[(0, 0)] = 1.0;
        u[(3, 3)] = 1.0;
        for s in 0..2 {
            u[(1 + s, 1)] = alpha[s];
            u[(1 + s, 2)] = beta[s];
        }
        let dipole = [0, 1, 2].map(|k| {
            let (ma, mb) = (params.mu_a[k], params.mu_b[k]);
            let mut site = Matrix4::zeros();
            for (i, j, v) in [(1, 0, ma), (2, 0, mb), (3, 2, ma), (3, 1, mb)] {
                site[(i, j)] = v;
                site[(j, i)] = v;
            }
            u.transpose() * site * u
        });
        let energies = [0.0, eig.eigenvalues[hi], eig.eigenvalues[lo], params.omega_a + params.omega_b];
        Oracle { energies, dipole, gamma }
    }

    pub fn projected(&self, e: &Vec3) -> Matrix4<f64> {
        self.dipole[0] * e[0] + self.dipole[1] * e[1] + self.dipole[2] * e[2]
    }

    /// Raising part of μ·e restricted to transitions resonant with exciton x:
    /// g→x and the partner x̄→f.
    pub fn raising(&self, x: usize, e: &Vec3) -> Op {
        let m = self.projected(e);
        let partner = if x == A { B } else { A };
        let mut op = Op::zeros();
        op[(x, G)] = C64::new(m[(x, G)], 0.0);
        op[(F, partner)] = C64::new(m[(F, partner)], 0.0);
        op
    }

    pub fn evolve(&self, rho: &Op, time: f64) -> Op {
        Op::from_fn(|i, j| {
            let w = (self.energies[i] - self.energies[j]) * CM;
            rho[(i, j)] * (C64::new(-self.gamma, -w) * time).exp()
        })
    }

    pub fn apply_chi(&self, chi: &ProcessMatrix, rho: &Op) -> Op {
        let levels = [Level::Ground, Level::Alpha, Level::Beta];
        let mut out = Op::zeros();
        for (i, a) in levels.iter().enumerate() {
            for (j, b) in levels.iter().enumerate() {
                for (k, c) in levels.iter().enumerate() {
                    for (l, d) in levels.iter().enumerate() {
                        out[(i, j)] += chi.get(Pair::new(*a, *b), Pair::new(*c, *d)) * rho[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn polarization(&self, labels: [usize; 4], chi: &ProcessMatrix, tau: f64, t: f64, e: &Polarizations) -> C64 {
        let [p, q, r, s] = labels;
        let mut rho = Op::zeros();
        rho[(G, G)] = C64::new(1.0, 0.0);
        let up1 = self.raising(p, &e[0]);
        rho = -(rho * up1.adjoint());
        rho = self.evolve(&rho, tau);
        let up2 = self.raising(q, &e[1]);
        rho = up2 * rho - rho * up2;
        rho = self.apply_chi(chi, &rho);
        let up3 = self.raising(r, &e[2]);
        rho = up3 * rho - rho * up3;
        rho = self.evolve(&rho, t);
        let down4 = self.raising(s, &e[3]).adjoint();
        (down4 * rho).trace()
    }
}

pub fn random_unit(rng: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let v = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        if v.norm() > 0.1 && v.norm() < 1.0 {
            return v.normalize();
        }
    }
}

pub fn random_chi(rng: &mut ChaCha8Rng, t: f64) -> ProcessMatrix {
    let mut entries = [[C64::new(0.0, 0.0); 4]; 5];
    for row in entries.iter_mut() {
        for v in row.iter_mut() {
            *v = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
    }
    ProcessMatrix::from_entries(entries, t)
}

pub fn random_dimer(rng: &mut ChaCha8Rng) -> DimerParams {
    DimerParams::new(
        rng.random_range(12000.0..13500.0),
        rng.random_range(12000.0..13500.0),
        rng.random_range(-200.0..200.0),
        random_unit(rng) * rng.random_range(0.5..2.0),
        random_unit(rng) * rng.random_range(0.5..2.0),
    )
    .unwrap()
}

pub fn index(x: Exciton) -> usize {
    match x {
        Exciton::Alpha => A,
        Exciton::Beta => B,
    }
}

pub fn toolbox_value(tb: &PulseToolbox, basis: &ExcitonBasis, c: Carrier, x: Exciton) -> C64 {
    let unit = tb.sigma * (2.0 * std::f64::consts::PI).sqrt();
    match tb.mdc_override {
        Some((main, cross)) => {
            let diagonal = matches!((c, x), (Carrier::Plus, Exciton::Alpha) | (Carrier::Minus, Exciton::Beta));
            C64::new(0.0, unit * if diagonal { main } else { cross })
        }
        None => {
            let detuning = (basis.energy(x) - tb.carrier(c)) * CM;
            C64::new(0.0, unit * (-(tb.sigma * detuning).powi(2) / 2.0).exp())
        }
    }
}
