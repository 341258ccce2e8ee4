//! Pathway polarizations against an explicit operator-level evaluation of the
//! double-sided Feynman diagrams in the {g, α, β, f} basis.

mod oracles;

use exciton_qpt_core::pulse::PulseToolbox;
use exciton_qpt_core::signal::{pathway_polarization, Averaging, ExperimentConfig, ForwardModel, Polarizations, Word};
use exciton_qpt_core::{exciton_transform, DimerParams, Exciton, Vec3, C64};
use oracles::diagrams::{index, random_chi, random_dimer, random_unit, toolbox_value, Oracle, A, B, F, G};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn pathways_match_diagram_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let gamma = 1.0 / 150.0;
    let mut worst: f64 = 0.0;
    for trial in 0..40 {
        let params = if trial == 0 { DimerParams::reference() } else { random_dimer(&mut rng) };
        let basis = exciton_transform(&params);
        let oracle = Oracle::new(&params, gamma);
        let e: Polarizations = [0; 4].map(|_| random_unit(&mut rng));
        let chi = random_chi(&mut rng, 200.0);
        let (tau, t) = if trial % 2 == 0 { (0.0, 0.0) } else { (rng.random_range(0.0..60.0), rng.random_range(0.0..60.0)) };
        for p in Exciton::ALL {
            for q in Exciton::ALL {
                for r in Exciton::ALL {
                    for s in Exciton::ALL {
                        let ours = pathway_polarization([p, q, r, s], &chi, &basis, tau, t, gamma, &e, Averaging::Oriented);
                        let reference = oracle.polarization([p, q, r, s].map(index), &chi, tau, t, &e);
                        let scale = 1.0 + reference.norm();
                        worst = worst.max((ours - reference).norm() / scale);
                    }
                }
            }
        }
    }
    assert!(worst < 1e-12, "worst deviation {worst:e}");
}

#[test]
fn dynamics_chi_at_200_fs_matches_diagrams() {
    let params = DimerParams::reference();
    let basis = exciton_transform(&params);
    let bath = exciton_qpt_core::BathParams::default();
    let chi = exciton_qpt_core::true_process_matrix(&basis, &bath, 200.0).unwrap();
    let oracle = Oracle::new(&params, bath.gamma_opt);
    let e: Polarizations = [Vec3::z(); 4];
    for p in Exciton::ALL {
        for q in Exciton::ALL {
            for r in Exciton::ALL {
                for s in Exciton::ALL {
                    let ours = pathway_polarization([p, q, r, s], &chi, &basis, 0.0, 0.0, bath.gamma_opt, &e, Averaging::Oriented);
                    let reference = oracle.polarization([p, q, r, s].map(index), &chi, 0.0, 0.0, &e);
                    assert!((ours - reference).norm() < 1e-12 * (1.0 + reference.norm()));
                }
            }
        }
    }
}

#[test]
fn biexciton_dipoles_match_operator() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let params = random_dimer(&mut rng);
        let basis = exciton_transform(&params);
        let oracle = Oracle::new(&params, 0.0);
        for k in 0..3 {
            let m = oracle.dipole[k];
            assert!((m[(F, A)] - basis.mu_fa[k]).abs() < 1e-12);
            assert!((m[(F, B)] - basis.mu_fb[k]).abs() < 1e-12);
            assert!((m[(A, G)] - basis.mu_ag[k]).abs() < 1e-12);
            assert!((m[(B, G)] - basis.mu_bg[k]).abs() < 1e-12);
            assert!(m[(F, G)].abs() < 1e-15 && m[(A, B)].abs() < 1e-12);
        }
    }
}


#[test]
fn sixteen_term_sum_matches_direct_summation() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for toolbox in [PulseToolbox::reference(), PulseToolbox { mdc_override: None, ..PulseToolbox::reference() }] {
        let params = DimerParams::reference();
        let basis = exciton_transform(&params);
        let gamma = 1.0 / 150.0;
        let oracle = Oracle::new(&params, gamma);
        let mut config = ExperimentConfig::new(toolbox);
        config.averaging = Averaging::Oriented;
        config.polarizations = [0; 4].map(|_| random_unit(&mut rng));
        config.apply_overlap_factor = false;
        let model = ForwardModel::new(&basis, &config, gamma);
        let chi = random_chi(&mut rng, 100.0);
        let signals = model.signals(&chi);
        for word in Word::all() {
            let mut total = C64::new(0.0, 0.0);
            for p in Exciton::ALL {
                for q in Exciton::ALL {
                    for r in Exciton::ALL {
                        for s in Exciton::ALL {
                            let c: C64 = [p, q, r, s]
                                .iter()
                                .zip(word.0.iter())
                                .map(|(x, carrier)| toolbox_value(&toolbox, &basis, *carrier, *x))
                                .product();
                            total += c * oracle.polarization([p, q, r, s].map(index), &chi, 0.0, 0.0, &config.polarizations);
                        }
                    }
                }
            }
            let got = signals[word.index()];
            assert!((got - total).norm() <= 1e-12 * total.norm().max(1.0), "{}: {got} vs {total}", word.label());
        }
    }
}
