//! Forward model of the sixteen two-color photon-echo signals.
//!
//! Every pathway polarization is affine in χ(T), so the model is stored as
//! one linear form per carrier word over the 20 tracked complex entries of χ
//! (rows {gg, αα, ββ, αβ, βα} × columns {αα, ββ, αβ, βα}) plus a constant.

use alloc::format;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::dynamics::{coherence_propagator, true_process_matrix, BathParams};
use crate::linalg::pairwise_sum;
use crate::process::{Level, Pair, ProcessMatrix};
use crate::pulse::{overlap_factor, toolbox_coefficients, Carrier, CoefficientTable, PulseToolbox};
use crate::{
    exciton_transform, sample_disordered_ensemble, DimerParams, Error, Exciton, ExcitonBasis, Result,
    Vec3, C64,
};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Number of tracked complex entries of χ.
pub const ENTRY_COUNT: usize = 20;

/// Flat index of a tracked entry (row-major over sector rows × columns).
pub fn entry_index(row: Pair, col: Pair) -> usize {
    4 * row.row_index().expect("untracked row") + col.column_index().expect("untracked column")
}

/// A carrier word (ω₁, ω₂, ω₃, ω₄) ∈ {ω₊, ω₋}⁴.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub [Carrier; 4]);

impl Word {
    pub const COUNT: usize = 16;

    /// Word number `i`, counting "++++", "+++-", "++-+", ... "----".
    pub fn from_index(i: usize) -> Word {
        assert!(i < Self::COUNT);
        let pick = |bit: usize| if (i >> (3 - bit)) & 1 == 0 { Carrier::Plus } else { Carrier::Minus };
        Word([pick(0), pick(1), pick(2), pick(3)])
    }

    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, c| (acc << 1) | c.index())
    }

    pub fn all() -> impl Iterator<Item = Word> {
        (0..Self::COUNT).map(Word::from_index)
    }

    pub fn label(&self) -> alloc::string::String {
        self.0.iter().map(|c| c.symbol()).collect()
    }

    pub fn parse(label: &str) -> Option<Word> {
        let mut carriers = [Carrier::Plus; 4];
        let mut n = 0;
        for ch in label.chars() {
            if n == 4 {
                return None;
            }
            carriers[n] = match ch {
                '+' => Carrier::Plus,
                '-' => Carrier::Minus,
                _ => return None,
            };
            n += 1;
        }
        (n == 4).then_some(Word(carriers))
    }
}

/// How dipole-projection products are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Averaging {
    /// Uniform average over molecular orientations.
    #[default]
    Isotropic,
    /// A single, fixed molecular orientation.
    Oriented,
}

/// Field polarizations e₁..e₄.
pub type Polarizations = [Vec3; 4];

pub fn default_polarizations() -> Polarizations {
    [Vec3::z(); 4]
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub toolbox: PulseToolbox,
    /// Coherence time τ (fs).
    pub tau: f64,
    /// Echo time t (fs).
    pub t_echo: f64,
    pub waiting_times: Vec<f64>,
    pub polarizations: Polarizations,
    pub averaging: Averaging,
    pub apply_overlap_factor: bool,
    /// Divisor applied to every signal. `None` selects the largest ideal
    /// signal magnitude of the nominal dimer at T = 3σ.
    pub normalization: Option<f64>,
}

impl ExperimentConfig {
    /// TD/TB setting (τ = t = 0), zzzz polarizations, overlap factor on, and
    /// the waiting-time grid 3σ, 3σ + 10 fs, ... up to 1000 fs.
    pub fn new(toolbox: PulseToolbox) -> Self {
        let start = 3.0 * toolbox.sigma;
        let waiting_times = (0..).map(|k| start + 10.0 * k as f64).take_while(|t| *t <= 1000.0 + 1e-9).collect();
        ExperimentConfig {
            toolbox,
            tau: 0.0,
            t_echo: 0.0,
            waiting_times,
            polarizations: default_polarizations(),
            averaging: Averaging::Isotropic,
            apply_overlap_factor: true,
            normalization: None,
        }
    }

    /// Shortest waiting time at which the initial states count as prepared.
    pub fn minimum_waiting_time(&self) -> f64 {
        3.0 * self.toolbox.sigma
    }

    pub fn validate(&self) -> Result<()> {
        self.toolbox.validate()?;
        for (name, value) in [("tau", self.tau), ("t_echo", self.t_echo)] {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be finite and non-negative, got {value}"),
                });
            }
        }
        for (i, e) in self.polarizations.iter().enumerate() {
            if (e.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidParameter {
                    name: "polarizations",
                    reason: format!("e{} is not a unit vector (|e| = {})", i + 1, e.norm()),
                });
            }
        }
        if let Some(n) = self.normalization {
            if !(n > 0.0 && n.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: "normalization",
                    reason: format!("must be positive, got {n}"),
                });
            }
        }
        let minimum = self.minimum_waiting_time();
        for &t in &self.waiting_times {
            check_waiting_time(t, minimum)?;
        }
        Ok(())
    }
}

fn check_waiting_time(t: f64, minimum: f64) -> Result<()> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::NegativeWaitingTime(t));
    }
    if t < minimum - 1e-9 {
        return Err(Error::PreparationIncomplete { waiting_time: t, minimum });
    }
    Ok(())
}

/// Ensemble and noise settings recorded with each signal set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Provenance {
    pub seed: u64,
    pub n: usize,
    pub sigma_inh: f64,
    pub sigma_laser: f64,
    pub normalization: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignalSet {
    pub waiting_time: f64,
    /// Indexed by [`Word::index`].
    pub values: [C64; 16],
    pub meta: Provenance,
}

impl SignalSet {
    pub fn get(&self, word: Word) -> C64 {
        self.values[word.index()]
    }

    /// Re and Im parts interleaved: (Re S₀, Im S₀, Re S₁, ...).
    pub fn stacked(&self) -> [f64; 32] {
        let mut out = [0.0; 32];
        for (w, v) in self.values.iter().enumerate() {
            out[2 * w] = v.re;
            out[2 * w + 1] = v.im;
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

/// ⟨(μ₁·z)(μ₂·z)(μ₃·z)(μ₄·z)⟩ over uniform rotations.
pub fn isotropic_average_weight(mu1: &Vec3, mu2: &Vec3, mu3: &Vec3, mu4: &Vec3) -> f64 {
    (mu1.dot(mu2) * mu3.dot(mu4) + mu1.dot(mu3) * mu2.dot(mu4) + mu1.dot(mu4) * mu2.dot(mu3)) / 15.0
}

/// ⟨Π(μᵢ·eᵢ)⟩ over uniform rotations for arbitrary polarizations.
pub fn isotropic_average(mu: [&Vec3; 4], e: &Polarizations) -> f64 {
    let lab = [e[0].dot(&e[1]) * e[2].dot(&e[3]), e[0].dot(&e[2]) * e[1].dot(&e[3]), e[0].dot(&e[3]) * e[1].dot(&e[2])];
    let mol = [mu[0].dot(mu[1]) * mu[2].dot(mu[3]), mu[0].dot(mu[2]) * mu[1].dot(mu[3]), mu[0].dot(mu[3]) * mu[1].dot(mu[2])];
    let mut total = 0.0;
    for (i, l) in lab.iter().enumerate() {
        for (j, m) in mol.iter().enumerate() {
            let weight = if i == j { 4.0 } else { -1.0 };
            total += l * weight * m;
        }
    }
    total / 30.0
}

fn dipole_weight(mu: [&Vec3; 4], e: &Polarizations, averaging: Averaging) -> f64 {
    match averaging {
        Averaging::Isotropic => isotropic_average(mu, e),
        Averaging::Oriented => mu.iter().zip(e.iter()).map(|(m, ei)| m.dot(ei)).product(),
    }
}

/// An affine functional of χ: Σ coeffs[k]·χ_k + constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearForm {
    pub coeffs: [C64; ENTRY_COUNT],
    pub constant: C64,
}

impl LinearForm {
    pub fn zero() -> Self {
        LinearForm { coeffs: [ZERO; ENTRY_COUNT], constant: ZERO }
    }

    pub fn apply(&self, chi: &ProcessMatrix) -> C64 {
        let mut total = self.constant;
        for (r, row) in chi.entries().iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                total += self.coeffs[4 * r + c] * v;
            }
        }
        total
    }

    fn add_scaled(&mut self, other: &LinearForm, scale: C64) {
        for (a, b) in self.coeffs.iter_mut().zip(other.coeffs.iter()) {
            *a += b * scale;
        }
        self.constant += other.constant * scale;
    }
}

/// Optical-coherence propagator between levels with energies `upper` and
/// `lower` (the coherence |upper⟩⟨lower| when `upper` > `lower`).
fn optical(omega: f64, gamma_opt: f64, time: f64) -> C64 {
    coherence_propagator(omega, gamma_opt, time)
}

/// P^{p,q,r,s}(τ, T, t) as a linear form in χ(T).
#[allow(clippy::too_many_arguments)]
pub fn pathway_form(
    p: Exciton,
    q: Exciton,
    r: Exciton,
    s: Exciton,
    basis: &ExcitonBasis,
    tau: f64,
    t_echo: f64,
    gamma_opt: f64,
    polarizations: &Polarizations,
    averaging: Averaging,
) -> LinearForm {
    let mu_p = basis.ground_dipole(p);
    let mu_q = basis.ground_dipole(q);
    let col = Pair::new(q.into(), p.into());
    let pre = -optical(-basis.energy(p), gamma_opt, tau);
    let w = |m3: &Vec3, m4: &Vec3| dipole_weight([&mu_p, &mu_q, m3, m4], polarizations, averaging);
    let mut form = LinearForm::zero();
    if r == s {
        let big = r;
        let other = r.other();
        let mu_r = basis.ground_dipole(big);
        let mu_fo = basis.biexciton_dipole(other);
        let w1 = pre * w(&mu_r, &mu_r) * optical(basis.energy(big), gamma_opt, t_echo);
        let w2 = pre * w(&mu_fo, &mu_fo) * optical(basis.biexciton_gap(other), gamma_opt, t_echo);
        let rr = Pair::new(big.into(), big.into());
        let oo = Pair::new(other.into(), other.into());
        form.coeffs[entry_index(Pair::GG, col)] += w1;
        form.coeffs[entry_index(rr, col)] -= w1;
        form.coeffs[entry_index(oo, col)] += w2;
        if p == q {
            form.constant -= w1;
        }
    } else {
        let mu_fr = basis.biexciton_dipole(r);
        let mu_fs = basis.biexciton_dipole(s);
        let w1 = w(&mu_fs, &mu_fr) * optical(basis.biexciton_gap(r), gamma_opt, t_echo);
        let w2 = w(&basis.ground_dipole(r), &basis.ground_dipole(s)) * optical(basis.energy(s), gamma_opt, t_echo);
        let row = Pair::new(s.into(), r.into());
        form.coeffs[entry_index(row, col)] += pre * (w1 - w2);
    }
    form
}

/// P^{p,q,r,s} evaluated on a given χ.
#[allow(clippy::too_many_arguments)]
pub fn pathway_polarization(
    labels: [Exciton; 4],
    chi: &ProcessMatrix,
    basis: &ExcitonBasis,
    tau: f64,
    t_echo: f64,
    gamma_opt: f64,
    polarizations: &Polarizations,
    averaging: Averaging,
) -> C64 {
    let [p, q, r, s] = labels;
    pathway_form(p, q, r, s, basis, tau, t_echo, gamma_opt, polarizations, averaging).apply(chi)
}

/// The state left after the first two pulses, as coefficients over
/// (gg, αα, ββ, αβ, βα). Dipole projections are taken in the lab frame.
pub fn effective_initial_state(
    toolbox: &PulseToolbox,
    basis: &ExcitonBasis,
    carriers: (Carrier, Carrier),
    tau: f64,
    gamma_opt: f64,
    polarizations: (&Vec3, &Vec3),
) -> [C64; 5] {
    let table = toolbox_coefficients(toolbox, basis);
    let mut state = [ZERO; 5];
    for p in Exciton::ALL {
        for q in Exciton::ALL {
            let amp = -table.get(carriers.0, p)
                * table.get(carriers.1, q)
                * basis.ground_dipole(p).dot(polarizations.0)
                * basis.ground_dipole(q).dot(polarizations.1)
                * optical(-basis.energy(p), gamma_opt, tau);
            state[Pair::new(q.into(), p.into()).row_index().unwrap()] += amp;
            if p == q {
                state[0] -= amp;
            }
        }
    }
    state
}

/// The sixteen (unnormalized) signals of one dimer as linear forms in χ(T).
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardModel {
    pub forms: [LinearForm; 16],
    /// Some overlap factor fell outside the evaluated range and was replaced
    /// by its well-separated limit.
    pub overlap_saturated: bool,
}

impl ForwardModel {
    pub fn new(basis: &ExcitonBasis, config: &ExperimentConfig, gamma_opt: f64) -> Self {
        let table = toolbox_coefficients(&config.toolbox, basis);
        let mut forms = [LinearForm::zero(); 16];
        let mut saturated = false;
        let mut pathways = Vec::with_capacity(16);
        for p in Exciton::ALL {
            for q in Exciton::ALL {
                for r in Exciton::ALL {
                    for s in Exciton::ALL {
                        let form = pathway_form(
                            p,
                            q,
                            r,
                            s,
                            basis,
                            config.tau,
                            config.t_echo,
                            gamma_opt,
                            &config.polarizations,
                            config.averaging,
                        );
                        pathways.push(([p, q, r, s], form));
                    }
                }
            }
        }
        for word in Word::all() {
            let form = &mut forms[word.index()];
            for (labels, pathway) in &pathways {
                let weight = pulse_weight(&table, word, *labels);
                if weight == ZERO {
                    continue;
                }
                let factor = if config.apply_overlap_factor {
                    let f = word_overlap(config, basis, word, labels[2], labels[3]);
                    saturated |= f.saturated;
                    f.value
                } else {
                    C64::new(1.0, 0.0)
                };
                form.add_scaled(pathway, weight * factor);
            }
        }
        ForwardModel { forms, overlap_saturated: saturated }
    }

    /// Unnormalized signals for the given χ.
    pub fn signals(&self, chi: &ProcessMatrix) -> [C64; 16] {
        let mut out = [ZERO; 16];
        for (v, form) in out.iter_mut().zip(self.forms.iter()) {
            *v = form.apply(chi);
        }
        out
    }
}

fn pulse_weight(table: &CoefficientTable, word: Word, labels: [Exciton; 4]) -> C64 {
    word.0.iter().zip(labels.iter()).map(|(c, x)| table.get(*c, *x)).product()
}

fn word_overlap(
    config: &ExperimentConfig,
    basis: &ExcitonBasis,
    word: Word,
    r: Exciton,
    s: Exciton,
) -> crate::pulse::OverlapFactor {
    let tb = &config.toolbox;
    let (omega_r, omega_s) = if tb.mdc_override.is_some() {
        // Carriers are taken as resonant with the transitions they drive.
        (tb.carrier(word.0[2]), tb.carrier(word.0[3]))
    } else {
        (basis.energy(r), basis.energy(s))
    };
    overlap_factor(config.t_echo, tb.sigma, tb.carrier(word.0[2]), tb.carrier(word.0[3]), omega_r, omega_s)
}

/// Largest |S| of the ideal nominal signals at T = 3σ.
pub fn reference_normalization(config: &ExperimentConfig, basis: &ExcitonBasis, bath: &BathParams) -> Result<f64> {
    let model = ForwardModel::new(basis, config, bath.gamma_opt);
    let chi = true_process_matrix(basis, bath, config.minimum_waiting_time())?;
    let peak = model.signals(&chi).iter().map(|v| v.norm()).fold(0.0, f64::max);
    if !(peak > 0.0 && peak.is_finite()) {
        return Err(Error::ZeroReference);
    }
    Ok(peak)
}

fn resolve_normalization(config: &ExperimentConfig, basis: &ExcitonBasis, bath: &BathParams) -> Result<f64> {
    match config.normalization {
        Some(n) => Ok(n),
        None => reference_normalization(config, basis, bath),
    }
}

/// The sixteen signals of a single dimer at waiting time `t`.
pub fn synthesize_signal_set(
    config: &ExperimentConfig,
    basis: &ExcitonBasis,
    bath: &BathParams,
    t: f64,
) -> Result<SignalSet> {
    check_waiting_time(t, config.minimum_waiting_time())?;
    let normalization = resolve_normalization(config, basis, bath)?;
    let model = ForwardModel::new(basis, config, bath.gamma_opt);
    let chi = true_process_matrix(basis, bath, t)?;
    let mut values = model.signals(&chi);
    for v in values.iter_mut() {
        *v /= normalization;
    }
    Ok(SignalSet {
        waiting_time: t,
        values,
        meta: Provenance { seed: 0, n: 1, sigma_inh: 0.0, sigma_laser: 0.0, normalization },
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSpec {
    pub n: usize,
    /// Site-energy disorder (cm⁻¹).
    pub sigma_inh: f64,
    /// Standard deviation of the additive noise on Re and Im of each
    /// normalized signal.
    pub sigma_laser: f64,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn single() -> Self {
        EnsembleSpec { n: 1, sigma_inh: 0.0, sigma_laser: 0.0, seed: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::EmptyEnsemble);
        }
        for (name, value) in [("sigma_inh", self.sigma_inh), ("sigma_laser", self.sigma_laser)] {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be finite and non-negative, got {value}"),
                });
            }
        }
        Ok(())
    }
}

/// Members are summed in fixed-size chunks so that the reduction order does
/// not depend on how the chunks are scheduled.
pub const ENSEMBLE_CHUNK: usize = 64;

/// Maps a function over chunk indices. Implementations may run in parallel
/// but must return results in index order.
pub trait MemberMap {
    fn map_indices<T, F>(&self, count: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Runs on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl MemberMap for Sequential {
    fn map_indices<T, F>(&self, count: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..count).map(f).collect()
    }
}

/// Averaged, normalized and noisy signals over the waiting-time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisyRun {
    pub signals: Vec<SignalSet>,
    pub normalization: f64,
}

type Trace = Vec<[C64; 16]>;

fn add_traces(a: &Trace, b: &Trace) -> Trace {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| {
            let mut out = *x;
            for (o, v) in out.iter_mut().zip(y.iter()) {
                *o += v;
            }
            out
        })
        .collect()
}

fn member_trace(member: &DimerParams, config: &ExperimentConfig, bath: &BathParams) -> Result<Trace> {
    let basis = exciton_transform(member);
    let model = ForwardModel::new(&basis, config, bath.gamma_opt);
    config
        .waiting_times
        .iter()
        .map(|&t| Ok(model.signals(&true_process_matrix(&basis, bath, t)?)))
        .collect()
}

/// [`ensemble_noisy_signals_with`] on the calling thread.
pub fn ensemble_noisy_signals(
    config: &ExperimentConfig,
    nominal: &DimerParams,
    bath: &BathParams,
    ensemble: &EnsembleSpec,
) -> Result<NoisyRun> {
    ensemble_noisy_signals_with(&Sequential, config, nominal, bath, ensemble)
}

/// Draws a fixed disordered ensemble, averages its signals at every waiting
/// time, normalizes, then adds independent Gaussian noise to Re and Im of
/// every signal.
pub fn ensemble_noisy_signals_with<M: MemberMap>(
    mapper: &M,
    config: &ExperimentConfig,
    nominal: &DimerParams,
    bath: &BathParams,
    ensemble: &EnsembleSpec,
) -> Result<NoisyRun> {
    config.validate()?;
    bath.validate()?;
    ensemble.validate()?;
    nominal.validate()?;
    let members = sample_disordered_ensemble(nominal, ensemble.sigma_inh, ensemble.n, ensemble.seed)?;
    let normalization = resolve_normalization(config, &exciton_transform(nominal), bath)?;

    let chunks = members.len().div_ceil(ENSEMBLE_CHUNK);
    let partials: Vec<Result<Trace>> = mapper.map_indices(chunks, |chunk| {
        let start = chunk * ENSEMBLE_CHUNK;
        let end = (start + ENSEMBLE_CHUNK).min(members.len());
        let traces = members[start..end]
            .iter()
            .map(|m| member_trace(m, config, bath))
            .collect::<Result<Vec<_>>>()?;
        Ok(pairwise_sum(&traces, Vec::new(), &add_traces))
    });
    let partials = partials.into_iter().collect::<Result<Vec<_>>>()?;
    let total = pairwise_sum(&partials, Vec::new(), &add_traces);

    let count = ensemble.n as f64;
    let mut noise_rng = ChaCha8Rng::seed_from_u64(ensemble.seed);
    noise_rng.set_stream(1);
    let meta = Provenance {
        seed: ensemble.seed,
        n: ensemble.n,
        sigma_inh: ensemble.sigma_inh,
        sigma_laser: ensemble.sigma_laser,
        normalization,
    };
    let signals = config
        .waiting_times
        .iter()
        .zip(total.iter())
        .map(|(&t, sum)| {
            let mut values = [ZERO; 16];
            for (v, s) in values.iter_mut().zip(sum.iter()) {
                *v = s / count / normalization;
                if ensemble.sigma_laser > 0.0 {
                    let re: f64 = StandardNormal.sample(&mut noise_rng);
                    let im: f64 = StandardNormal.sample(&mut noise_rng);
                    *v += C64::new(re, im) * ensemble.sigma_laser;
                }
            }
            SignalSet { waiting_time: t, values, meta }
        })
        .collect();
    Ok(NoisyRun { signals, normalization })
}

/// Level pair helper for callers that index χ by exciton labels.
pub fn exciton_pair(ket: Exciton, bra: Exciton) -> Pair {
    Pair::new(Level::from(ket), Level::from(bra))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::PulseToolbox;

    fn reference() -> (ExcitonBasis, ExperimentConfig, BathParams) {
        (
            exciton_transform(&DimerParams::reference()),
            ExperimentConfig::new(PulseToolbox::strict_mdc()),
            BathParams::default(),
        )
    }

    #[test]
    fn word_indexing() {
        assert_eq!(Word::from_index(0).label(), "++++");
        assert_eq!(Word::from_index(1).label(), "+++-");
        assert_eq!(Word::from_index(4).label(), "+-++");
        assert_eq!(Word::from_index(15).label(), "----");
        for i in 0..16 {
            let w = Word::from_index(i);
            assert_eq!(w.index(), i);
            assert_eq!(Word::parse(&w.label()), Some(w));
        }
        assert_eq!(Word::parse("+++"), None);
        assert_eq!(Word::parse("+++++"), None);
        assert_eq!(Word::parse("++x+"), None);
    }

    #[test]
    fn isotropic_examples() {
        let z = Vec3::z();
        assert!((isotropic_average_weight(&z, &z, &z, &z) - 0.2).abs() < 1e-15);
        let (x, y) = (Vec3::x(), Vec3::y());
        assert!((isotropic_average_weight(&x, &x, &y, &y) - 1.0 / 15.0).abs() < 1e-15);
        assert_eq!(isotropic_average_weight(&x, &Vec3::zeros(), &y, &y), 0.0);
    }

    #[test]
    fn general_average_reduces_to_zzzz() {
        let mu = [Vec3::new(0.3, -1.0, 0.2), Vec3::new(1.1, 0.4, 0.0), Vec3::new(-0.2, 0.5, 0.9), Vec3::new(0.0, 0.7, -0.6)];
        let general = isotropic_average([&mu[0], &mu[1], &mu[2], &mu[3]], &default_polarizations());
        let zzzz = isotropic_average_weight(&mu[0], &mu[1], &mu[2], &mu[3]);
        assert!((general - zzzz).abs() < 1e-15);
    }

    #[test]
    fn identity_bleach_weight() {
        let basis = exciton_transform(&DimerParams::reference());
        let unit = Vec3::z();
        let unit_basis = ExcitonBasis { mu_ag: unit, mu_bg: unit, mu_fa: unit, mu_fb: unit, ..basis };
        let a = Exciton::Alpha;
        let chi = ProcessMatrix::identity(0.0);
        let p = pathway_polarization([a, a, a, a], &chi, &unit_basis, 0.0, 0.0, 0.01, &default_polarizations(), Averaging::Oriented);
        assert!((p - C64::new(2.0, 0.0)).norm() < 1e-15);
        let b = Exciton::Beta;
        let coherence = pathway_polarization([a, b, a, a], &chi, &unit_basis, 0.0, 0.0, 0.01, &default_polarizations(), Averaging::Oriented);
        assert_eq!(coherence, ZERO);
    }

    #[test]
    fn effective_state_examples() {
        let (basis, config, _) = reference();
        let e = Vec3::z();
        let tb = &config.toolbox;
        let s = effective_initial_state(tb, &basis, (Carrier::Plus, Carrier::Plus), 0.0, 0.01, (&e, &e));
        assert!(s[0].norm() > 0.0);
        assert!((s[0] + s[1]).norm() < 1e-12);
        assert_eq!(s[2], ZERO);
        assert_eq!(s[3], ZERO);
        assert_eq!(s[4], ZERO);
        // ω₁ = ω₊ excites p = α, ω₂ = ω₋ excites q = β: the element |β⟩⟨α|.
        let c = effective_initial_state(tb, &basis, (Carrier::Plus, Carrier::Minus), 0.0, 0.01, (&e, &e));
        assert_eq!(c[0], ZERO);
        assert!(c[4].norm() > 0.0);
        let tau = 20.0;
        let later = effective_initial_state(tb, &basis, (Carrier::Plus, Carrier::Minus), tau, 0.01, (&e, &e));
        let g = coherence_propagator(-basis.omega_alpha, 0.01, tau);
        assert!((later[4] - c[4] * g).norm() < 1e-12 * c[4].norm());
    }

    #[test]
    fn early_waiting_time_rejected() {
        let (basis, config, bath) = reference();
        let err = synthesize_signal_set(&config, &basis, &bath, 50.0).unwrap_err();
        assert!(matches!(err, Error::PreparationIncomplete { .. }));
        assert!(synthesize_signal_set(&config, &basis, &bath, 51.0).is_ok());
    }

    #[test]
    fn normalized_peak_is_one() {
        let (basis, config, bath) = reference();
        let set = synthesize_signal_set(&config, &basis, &bath, 51.0).unwrap();
        let peak = set.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!((peak - 1.0).abs() < 1e-12);
    }

    #[test]
    fn default_grid() {
        let config = ExperimentConfig::new(PulseToolbox::reference());
        assert_eq!(config.waiting_times[0], 51.0);
        assert_eq!(*config.waiting_times.last().unwrap(), 991.0);
        assert_eq!(config.waiting_times.len(), 95);
    }

    #[test]
    fn single_member_matches_direct_synthesis() {
        let (basis, mut config, bath) = reference();
        config.waiting_times = vec![51.0, 200.0];
        let run = ensemble_noisy_signals(&config, &DimerParams::reference(), &bath, &EnsembleSpec::single()).unwrap();
        for set in &run.signals {
            let direct = synthesize_signal_set(&config, &basis, &bath, set.waiting_time).unwrap();
            assert_eq!(set.values, direct.values);
        }
    }
}
