use exciton_qpt_core::signal::MemberMap;
use rayon::prelude::*;

/// Maps chunk indices on the rayon pool. Results come back in index order, so
/// ensemble sums match [`exciton_qpt_core::signal::Sequential`] bit for bit.
#[derive(Debug, Clone, Copy, Default)]
pub struct Rayon;

impl MemberMap for Rayon {
    fn map_indices<T, F>(&self, count: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..count).into_par_iter().map(f).collect()
    }
}

/// Sizes the global pool. Zero or `None` keeps rayon's default.
pub fn configure_threads(threads: Option<usize>) -> Result<(), rayon::ThreadPoolBuildError> {
    match threads {
        Some(n) if n > 0 => rayon::ThreadPoolBuilder::new().num_threads(n).build_global(),
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use exciton_qpt_core::signal::{ensemble_noisy_signals, ensemble_noisy_signals_with};
    use exciton_qpt_core::{BathParams, DimerParams, EnsembleSpec, ExperimentConfig, PulseToolbox};

    #[test]
    fn parallel_sum_is_bitwise_sequential() {
        let mut config = ExperimentConfig::new(PulseToolbox::reference());
        config.waiting_times.truncate(5);
        let ensemble = EnsembleSpec { n: 300, sigma_inh: 40.0, sigma_laser: 0.05, seed: 4 };
        let nominal = DimerParams::reference();
        let bath = BathParams::default();
        let seq = ensemble_noisy_signals(&config, &nominal, &bath, &ensemble).unwrap();
        let par = ensemble_noisy_signals_with(&Rayon, &config, &nominal, &bath, &ensemble).unwrap();
        assert_eq!(seq, par);
    }
}
