//! Quantum back-action probes: non-Hermitian no-jump evolution of the
//! all-excited register, the iterated single-step Pauli map with its fixed
//! point, and scans for the first time at which the two no-excitation
//! predictions drift apart.

use alloc::vec::Vec;
use alloc::{format, vec};

use crate::channel::lambda_of_time;
use crate::lindblad::embed_single_qubit;
use crate::numerics::{c, mat_exp, ComplexMatrix, C64};
use crate::pauli::Pauli;
use crate::{Error, Result, MAX_QUBITS};

/// Choice of the decay constant gamma entering the effective Hamiltonian
/// H = H_free - i (gamma/2) sum_q |1><1|_q.
///
/// The damping generator extracted in [`crate::lindblad`] has jump rate
/// 1/T1, under which the no-jump survival of an excited qubit is
/// exp(-t/T1). Its master equation carries the anticommutator term with
/// coefficient 1/(2 T1); taking gamma from that coefficient instead gives
/// survival exp(-t/(2 T1)). Divergence scans default to the anticommutator
/// convention, which is the regime where the two noise models agree to
/// second order at short times and the scans resolve a nontrivial first
/// crossing; see the scan functions below.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GammaConvention {
    /// gamma = 1/T1 (the jump rate); survival exp(-n t / T1).
    JumpRate,
    /// gamma = 1/(2 T1) (the anticommutator coefficient); survival
    /// exp(-n t / (2 T1)).
    AnticommutatorRate,
}

impl GammaConvention {
    pub fn gamma(self, t1: f64) -> f64 {
        match self {
            GammaConvention::JumpRate => 1.0 / t1,
            GammaConvention::AnticommutatorRate => 0.5 / t1,
        }
    }
}

/// Non-Hermitian effective Hamiltonian H_free - i (gamma/2) sum_q
/// |1><1|_q with H_free = -sum_q sigma_z_q. Trace decreasing: its
/// anti-Hermitian part is negative semidefinite.
#[derive(Clone, Debug)]
pub struct EffectiveHamiltonian {
    n: usize,
    matrix: ComplexMatrix,
    h_free: ComplexMatrix,
    gamma: f64,
}

impl EffectiveHamiltonian {
    pub fn damped_free(n: usize, t1: f64, convention: GammaConvention) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::Capacity(format!(
                "qubit count {n} outside supported range 1..={MAX_QUBITS}"
            )));
        }
        if t1 <= 0.0 {
            return Err(Error::Domain(format!("relaxation time {t1} must be positive")));
        }
        let gamma = convention.gamma(t1);
        let dim = 1usize << n;
        let mut h_free = ComplexMatrix::zeros(dim, dim);
        let mut decay = ComplexMatrix::zeros(dim, dim);
        let excited = ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[0.0, 1.0]]);
        for q in 0..n {
            h_free = &h_free - &embed_single_qubit(&Pauli::Z.matrix(), q, n);
            decay = &decay + &embed_single_qubit(&excited, q, n);
        }
        let matrix = &h_free + &decay.scale(c(0.0, -0.5 * gamma));
        Ok(Self { n, matrix, h_free, gamma })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn h_free(&self) -> &ComplexMatrix {
        &self.h_free
    }

    /// -i (H - H†) / 2; negative semidefinite for a trace-decreasing
    /// evolution.
    pub fn anti_hermitian_part(&self) -> ComplexMatrix {
        (&self.matrix - &self.matrix.adjoint()).scale(c(0.0, -0.5))
    }

    /// exp(-i H t) through the matrix-exponential path.
    pub fn propagator(&self, t: f64) -> Result<ComplexMatrix> {
        if t < 0.0 {
            return Err(Error::Domain(format!("time {t} must be nonnegative")));
        }
        mat_exp(&self.matrix.scale(c(0.0, -t)))
    }
}

fn survival_from_column(u: &ComplexMatrix, col: usize) -> f64 {
    (0..u.rows()).map(|r| u.get(r, col).norm_sqr()).sum()
}

/// No-excitation probability of the all-excited register under the exact
/// no-jump evolution, tr(exp(-iHt) rho0 exp(iH†t)) with the stated gamma
/// convention. Computed through the matrix exponential; equals
/// exp(-n gamma t) for the all-excited initial state.
pub fn no_excitation_exact_with(
    n_qubits: usize,
    t1: f64,
    t: f64,
    convention: GammaConvention,
) -> Result<f64> {
    let h = EffectiveHamiltonian::damped_free(n_qubits, t1, convention)?;
    let u = h.propagator(t)?;
    Ok(survival_from_column(&u, (1 << n_qubits) - 1))
}

/// No-excitation probability with the jump-rate gamma = 1/T1, equal to
/// exp(-n t / T1).
pub fn no_excitation_exact(n_qubits: usize, t1: f64, t: f64) -> Result<f64> {
    no_excitation_exact_with(n_qubits, t1, t, GammaConvention::JumpRate)
}

/// State of the iterated single-step Pauli map: the single-step kernel
/// p^(1), the current probabilities p^(n), and the step count.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PtaMapState {
    step: [f64; 4],
    probs: [f64; 4],
    step_index: usize,
}

impl PtaMapState {
    /// Start the iteration from an explicit single-step kernel.
    pub fn from_single_step(step: [f64; 4]) -> Result<Self> {
        let total: f64 = step.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Validation(format!(
                "single-step probabilities sum to {total}, expected 1"
            )));
        }
        for &p in &step {
            if !(-1e-12..=1.0 + 1e-12).contains(&p) {
                return Err(Error::Validation(format!("probability {p} outside [0, 1]")));
            }
        }
        Ok(Self { step, probs: step, step_index: 1 })
    }

    /// Current probabilities (p1, p2, p3, p4) for (identity, X, Y, Z).
    pub fn probs(&self) -> [f64; 4] {
        self.probs
    }

    pub fn single_step(&self) -> [f64; 4] {
        self.step
    }

    pub fn step_index(&self) -> usize {
        self.step_index
    }

    /// Identity-plus-Z weight: the no-flip probability.
    pub fn no_flip_prob(&self) -> f64 {
        self.probs[0] + self.probs[3]
    }
}

/// Single-step probabilities of the twirled damping channel over t_step:
/// ((2 + 2 sqrt(1-lambda) - lambda)/4, lambda/4, lambda/4,
///  (2 - 2 sqrt(1-lambda) - lambda)/4) with lambda = 1 - exp(-t_step/T1).
pub fn pta_step_probs(t1: f64, t_step: f64) -> Result<PtaMapState> {
    if t_step <= 0.0 {
        return Err(Error::Domain(format!("time step {t_step} must be positive")));
    }
    let lambda = lambda_of_time(t_step, t1)?;
    let probs = crate::twirl::damping_twirl_closed_form(lambda)?;
    PtaMapState::from_single_step(probs)
}

/// One application of the four composition recurrences; the group structure
/// of {I, X, Y, Z} fixes which products feed which component.
pub fn iterate_pta(state: &PtaMapState) -> PtaMapState {
    let [s1, s2, s3, s4] = state.step;
    let [p1, p2, p3, p4] = state.probs;
    let next = [
        s1 * p1 + s2 * p2 + s3 * p3 + s4 * p4,
        p1 * s2 + p2 * s1 + p3 * s4 + p4 * s3,
        p1 * s3 + p3 * s1 + p4 * s2 + p2 * s4,
        p1 * s4 + p4 * s1 + p3 * s2 + p2 * s3,
    ];
    PtaMapState { step: state.step, probs: next, step_index: state.step_index + 1 }
}

/// Per-qubit no-excitation probability of the iterated Pauli map after
/// the given number of steps: p1 + p4 of p^(steps), with steps = 0 giving
/// 1. The joint multi-qubit value is this raised to the qubit count.
pub fn no_excitation_pta(t1: f64, t_step: f64, steps: usize) -> Result<f64> {
    if steps == 0 {
        return Ok(1.0);
    }
    let mut state = pta_step_probs(t1, t_step)?;
    for _ in 1..steps {
        state = iterate_pta(&state);
    }
    Ok(state.no_flip_prob())
}

/// Divergence thresholds, spelled from the single-step channel: the
/// bit-flip probability lambda/4, or the combined bit and bit-phase flip
/// probability lambda/2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThresholdRule {
    /// p_X = lambda/4.
    BitFlip,
    /// p_X + p_Y = lambda/2.
    BitPhaseFlip,
}

impl ThresholdRule {
    pub fn threshold(self, lambda: f64) -> f64 {
        match self {
            ThresholdRule::BitFlip => lambda / 4.0,
            ThresholdRule::BitPhaseFlip => lambda / 2.0,
        }
    }
}

/// Options for the divergence scan.
#[derive(Clone, Copy, Debug)]
pub struct ScanConfig {
    pub threshold_rule: ThresholdRule,
    pub gamma: GammaConvention,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            threshold_rule: ThresholdRule::BitFlip,
            gamma: GammaConvention::AnticommutatorRate,
        }
    }
}

/// One sampled point of a divergence scan.
#[derive(Clone, Copy, Debug)]
pub struct ScanPoint {
    pub n_qubits: usize,
    pub t: f64,
    pub p_exact: f64,
    pub p_pta: f64,
    pub gap: f64,
    pub threshold: f64,
    pub crossed: bool,
}

/// Sample both no-excitation predictions on the grid k t_step up to the
/// horizon. The exact side advances by repeated application of the one-step
/// propagator exp(-i H t_step), which is exact for the time-independent
/// effective Hamiltonian.
pub fn backaction_scan(
    n_qubits: usize,
    t1: f64,
    t_step: f64,
    horizon: f64,
    config: ScanConfig,
) -> Result<Vec<ScanPoint>> {
    if t_step <= 0.0 {
        return Err(Error::Domain(format!("time step {t_step} must be positive")));
    }
    if horizon <= t_step {
        return Err(Error::Domain(format!(
            "horizon {horizon} must exceed the time step {t_step}"
        )));
    }
    let lambda = lambda_of_time(t_step, t1)?;
    let threshold = config.threshold_rule.threshold(lambda);
    let hamiltonian = EffectiveHamiltonian::damped_free(n_qubits, t1, config.gamma)?;
    let step_propagator = hamiltonian.propagator(t_step)?;
    let dim = 1usize << n_qubits;

    // |1...1> column vector evolved incrementally
    let mut state: Vec<C64> = vec![C64::ZERO; dim];
    state[dim - 1] = C64::ONE;
    let mut pta_state = pta_step_probs(t1, t_step)?;

    let steps = libm::floor(horizon / t_step + 1e-9) as usize;
    let mut points = Vec::with_capacity(steps + 1);
    points.push(ScanPoint {
        n_qubits,
        t: 0.0,
        p_exact: 1.0,
        p_pta: 1.0,
        gap: 0.0,
        threshold,
        crossed: false,
    });
    for k in 1..=steps {
        state = step_propagator.mul_vec(&state);
        let p_exact: f64 = state.iter().map(|z| z.norm_sqr()).sum();
        if k > 1 {
            pta_state = iterate_pta(&pta_state);
        }
        let per_qubit = pta_state.no_flip_prob();
        let mut p_pta = 1.0;
        for _ in 0..n_qubits {
            p_pta *= per_qubit;
        }
        let gap = (p_exact - p_pta).abs();
        points.push(ScanPoint {
            n_qubits,
            t: k as f64 * t_step,
            p_exact,
            p_pta,
            gap,
            threshold,
            crossed: gap > threshold,
        });
    }
    Ok(points)
}

/// First sampled time at which the gap exceeds the threshold, or None
/// within the horizon.
pub fn divergence_time_with(
    n_qubits: usize,
    t1: f64,
    t_step: f64,
    horizon: f64,
    config: ScanConfig,
) -> Result<Option<f64>> {
    let scan = backaction_scan(n_qubits, t1, t_step, horizon, config)?;
    Ok(scan.iter().find(|p| p.crossed).map(|p| p.t))
}

/// [`divergence_time_with`] under the default scan configuration.
pub fn divergence_time(
    n_qubits: usize,
    t1: f64,
    t_step: f64,
    horizon: f64,
) -> Result<Option<f64>> {
    divergence_time_with(n_qubits, t1, t_step, horizon, ScanConfig::default())
}
