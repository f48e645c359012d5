//! Pauli twirling: averaging a channel over conjugation by all Pauli
//! strings, which deletes the cross terms of its Pauli expansion and leaves
//! a probabilistic Pauli channel. Also converts a Pauli channel into the
//! rates of its first-order master-equation generator.

use alloc::vec::Vec;
use alloc::{format, vec};

use crate::channel::KrausChannel;
use crate::numerics::{cr, ComplexMatrix};
use crate::pauli::PauliString;
use crate::{Error, Result, VALIDATION_TOL};

/// Largest qubit count for the literal conjugation-average twirl.
pub const MAX_BRUTEFORCE_QUBITS: usize = 2;

/// A probability vector over the 4^n Pauli strings in index order.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliChannel {
    n: usize,
    probs: Vec<f64>,
}

impl PauliChannel {
    pub fn new(n: usize, probs: Vec<f64>) -> Result<Self> {
        let size = 4usize.pow(n as u32);
        if n == 0 || probs.len() != size {
            return Err(Error::Dimension(format!(
                "expected 4^{n} = {size} probabilities, got {}",
                probs.len()
            )));
        }
        for (m, &p) in probs.iter().enumerate() {
            if !(-1e-12..=1.0 + 1e-12).contains(&p) {
                return Err(Error::Validation(format!(
                    "probability {p} at index {m} outside [0, 1]"
                )));
            }
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::Validation(format!(
                "Pauli-channel probabilities sum to {total}, expected 1"
            )));
        }
        Ok(Self { n, probs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, p: &PauliString) -> f64 {
        self.probs[p.index()]
    }

    /// Weight on the identity string.
    pub fn identity_prob(&self) -> f64 {
        self.probs[0]
    }

    /// (label, probability) pairs in index order.
    pub fn iter_labeled(&self) -> Result<Vec<(PauliString, f64)>> {
        Ok(PauliString::all(self.n)?
            .into_iter()
            .zip(self.probs.iter().copied())
            .collect())
    }

    /// Kraus realization {sqrt(p_m) P_m}. Stray negative rounding noise in
    /// the probabilities is clamped to zero.
    pub fn to_kraus(&self) -> Result<KrausChannel> {
        let strings = PauliString::all(self.n)?;
        let kraus: Vec<ComplexMatrix> = strings
            .iter()
            .zip(&self.probs)
            .map(|(p, &w)| p.matrix().scale(cr(libm::sqrt(w.max(0.0)))))
            .collect();
        KrausChannel::new(self.n, kraus, true)
    }
}

/// Rates of the first-order generator whose t_step flow reproduces a Pauli
/// channel to O(t_step^2): the identity rate is nonpositive, the others
/// nonnegative, and they sum to zero.
#[derive(Clone, Debug, PartialEq)]
pub struct PtaRates {
    n: usize,
    gamma: Vec<f64>,
}

impl PtaRates {
    pub fn new(n: usize, gamma: Vec<f64>) -> Result<Self> {
        let size = 4usize.pow(n as u32);
        if n == 0 || gamma.len() != size {
            return Err(Error::Dimension(format!(
                "expected 4^{n} = {size} rates, got {}",
                gamma.len()
            )));
        }
        let scale = gamma.iter().fold(1.0f64, |acc, g| acc.max(g.abs()));
        if gamma[0] > VALIDATION_TOL * scale {
            return Err(Error::Validation(format!(
                "identity rate {} must be nonpositive",
                gamma[0]
            )));
        }
        for (m, &g) in gamma.iter().enumerate().skip(1) {
            if g < -VALIDATION_TOL * scale {
                return Err(Error::Validation(format!(
                    "rate {g} at index {m} must be nonnegative"
                )));
            }
        }
        let total: f64 = gamma.iter().sum();
        if total.abs() > VALIDATION_TOL * scale {
            return Err(Error::Validation(format!(
                "rates sum to {total}, expected 0 (trace preservation)"
            )));
        }
        Ok(Self { n, gamma })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }
}

fn require_twirlable(ch: &KrausChannel, cap: usize, what: &str) -> Result<()> {
    if ch.n() > cap {
        return Err(Error::Capacity(format!(
            "{what} supports at most {cap} qubits, got {}",
            ch.n()
        )));
    }
    if !ch.is_trace_preserving() {
        return Err(Error::Validation(
            "twirling a non-trace-preserving channel does not yield a probability vector".into(),
        ));
    }
    Ok(())
}

/// Literal Pauli twirl: average the channel over conjugation by every Pauli
/// string, then read the probabilities off the twirled channel's transfer
/// matrix in the Pauli basis.
///
/// The twirled channel is diagonal in that basis, so its transfer matrix is
/// diagonal with entries f_l = sum_m s_ml p_m, where s_ml is the +-1
/// commutation sign between strings m and l; the sign matrix is its own
/// inverse up to 1/4^n, which recovers p.
pub fn twirl_bruteforce(ch: &KrausChannel) -> Result<PauliChannel> {
    require_twirlable(ch, MAX_BRUTEFORCE_QUBITS, "brute-force twirl")?;
    let n = ch.n();
    let size = 4usize.pow(n as u32);
    let strings = PauliString::all(n)?;
    let pauli_mats: Vec<ComplexMatrix> = strings.iter().map(|p| p.matrix()).collect();
    let weight = cr(1.0 / (1usize << n) as f64);

    // conjugation average as an explicit Kraus set {P_m E_j P_m / 2^n}
    let mut twirled_kraus = Vec::with_capacity(size * ch.kraus().len());
    for b in &pauli_mats {
        for e in ch.kraus() {
            twirled_kraus.push((&(b * e) * b).scale(weight));
        }
    }
    let twirled = KrausChannel::new(n, twirled_kraus, true)?;

    // diagonal transfer values f_l = tr(P_l twirl(P_l)) / 2^n
    let dim_inv = 1.0 / (1usize << n) as f64;
    let f: Vec<f64> = pauli_mats
        .iter()
        .map(|p| (p * &twirled.apply_to_matrix(p)).trace().re * dim_inv)
        .collect();

    // invert the sign transform: p_m = 4^-n sum_l s_ml f_l
    let inv_size = 1.0 / size as f64;
    let probs: Vec<f64> = strings
        .iter()
        .map(|m| {
            strings
                .iter()
                .zip(&f)
                .map(|(l, fl)| if m.commutes_with(l) { *fl } else { -*fl })
                .sum::<f64>()
                * inv_size
        })
        .collect();
    PauliChannel::new(n, probs)
}

/// Pauli twirl via the diagonal of the process (χ) matrix; identical to
/// [`twirl_bruteforce`] where both are defined, at O(rank 4^n) cost instead
/// of O(16^n).
pub fn twirl_diagonal(ch: &KrausChannel) -> Result<PauliChannel> {
    require_twirlable(ch, crate::MAX_CHI_QUBITS, "χ-diagonal twirl")?;
    let chi = ch.pauli_expansion()?;
    let size = chi.coeffs().rows();
    let probs: Vec<f64> = (0..size).map(|m| chi.coeffs().get(m, m).re).collect();
    PauliChannel::new(ch.n(), probs)
}

/// First-order master-equation rates of a Pauli channel over a time step:
/// gamma_identity = (p_identity - 1)/t_step and gamma_m = p_m/t_step
/// otherwise. Only valid in the small-step regime where the identity
/// probability dominates.
pub fn pta_rates(pc: &PauliChannel, t_step: f64) -> Result<PtaRates> {
    if t_step <= 0.0 {
        return Err(Error::Domain(format!("time step {t_step} must be positive")));
    }
    if pc.identity_prob() <= 0.5 {
        return Err(Error::Domain(format!(
            "identity probability {} is too small for generator extraction (need > 0.5)",
            pc.identity_prob()
        )));
    }
    let mut gamma = vec![0.0; pc.probs().len()];
    gamma[0] = (pc.identity_prob() - 1.0) / t_step;
    for (m, &p) in pc.probs().iter().enumerate().skip(1) {
        gamma[m] = p / t_step;
    }
    PtaRates::new(pc.n(), gamma)
}

/// Closed-form twirled probabilities of the amplitude-damping channel:
/// ((2 + 2 sqrt(1-lambda) - lambda)/4, lambda/4, lambda/4,
///  (2 - 2 sqrt(1-lambda) - lambda)/4).
pub fn damping_twirl_closed_form(lambda: f64) -> Result<[f64; 4]> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::Domain(format!(
            "damping probability {lambda} outside [0, 1]"
        )));
    }
    let root = libm::sqrt(1.0 - lambda);
    Ok([
        (2.0 + 2.0 * root - lambda) / 4.0,
        lambda / 4.0,
        lambda / 4.0,
        (2.0 - 2.0 * root - lambda) / 4.0,
    ])
}
