//! Quantum channels in Kraus form, with validation, application,
//! composition, tensor products, and the transfer-matrix and process-matrix
//! (χ) representations.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use crate::numerics::{
    cr, is_positive_semidefinite, kron, max_abs_diff, ComplexMatrix, C64,
};
use crate::pauli::{HermitianBasis, PauliString};
use crate::{Error, Result, MAX_CHI_QUBITS, MAX_QUBITS, VALIDATION_TOL};

fn check_qubit_count(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::Capacity(format!(
            "qubit count {n} outside supported range 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

/// A density matrix: Hermitian, unit trace, positive semidefinite, all
/// within [`VALIDATION_TOL`]. A relaxed constructor admits trace below one
/// for conditional (no-jump) states.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(n: usize, mat: ComplexMatrix) -> Result<Self> {
        Self::validate(n, &mat, false)?;
        Ok(Self { n, mat })
    }

    /// Accepts trace <= 1; used for states conditioned on observing no jump.
    pub fn new_subnormalized(n: usize, mat: ComplexMatrix) -> Result<Self> {
        Self::validate(n, &mat, true)?;
        Ok(Self { n, mat })
    }

    pub(crate) fn from_parts_unchecked(n: usize, mat: ComplexMatrix) -> Self {
        Self { n, mat }
    }

    fn validate(n: usize, mat: &ComplexMatrix, subnormalized: bool) -> Result<()> {
        check_qubit_count(n)?;
        let dim = 1usize << n;
        if mat.rows() != dim || mat.cols() != dim {
            return Err(Error::Dimension(format!(
                "density matrix for {n} qubits must be {dim}x{dim}, got {}x{}",
                mat.rows(),
                mat.cols()
            )));
        }
        if !mat.is_hermitian(VALIDATION_TOL) {
            return Err(Error::Validation(format!(
                "density matrix is not Hermitian (defect {:.3e})",
                mat.hermiticity_defect()
            )));
        }
        let trace = mat.trace().re;
        let trace_ok = if subnormalized {
            (-VALIDATION_TOL..=1.0 + VALIDATION_TOL).contains(&trace)
        } else {
            (trace - 1.0).abs() <= VALIDATION_TOL
        };
        if !trace_ok {
            return Err(Error::Validation(format!("density matrix trace {trace} is invalid")));
        }
        if !is_positive_semidefinite(mat, VALIDATION_TOL)? {
            return Err(Error::Validation("density matrix has a negative eigenvalue".into()));
        }
        Ok(())
    }

    /// |psi><psi| from a normalized state vector of length 2^n.
    pub fn pure(state: &[C64]) -> Result<Self> {
        let dim = state.len();
        if !dim.is_power_of_two() || dim < 2 {
            return Err(Error::Dimension(format!(
                "state vector length {dim} is not a power of two"
            )));
        }
        let n = dim.trailing_zeros() as usize;
        check_qubit_count(n)?;
        let norm_sqr: f64 = state.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > 1e-8 {
            return Err(Error::Validation(format!(
                "state vector norm^2 = {norm_sqr} is not 1"
            )));
        }
        let mat = ComplexMatrix::from_fn(dim, dim, |r, c| state[r] * state[c].conj());
        Self::new(n, mat)
    }

    /// Computational basis state |k><k|.
    pub fn basis_state(n: usize, k: usize) -> Result<Self> {
        check_qubit_count(n)?;
        let dim = 1usize << n;
        if k >= dim {
            return Err(Error::Domain(format!("basis index {k} not in 0..{dim}")));
        }
        let mut mat = ComplexMatrix::zeros(dim, dim);
        mat.set(k, k, C64::ONE);
        Ok(Self { n, mat })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }
}

/// A completely positive map as a finite list of equal-dimension Kraus
/// matrices E_m, acting as rho -> sum_m E_m rho E_m†.
#[derive(Clone, Debug)]
pub struct KrausChannel {
    n: usize,
    kraus: Vec<ComplexMatrix>,
    trace_preserving: bool,
}

impl KrausChannel {
    /// Validates the completeness sum: equal to the identity within
    /// [`VALIDATION_TOL`] when `trace_preserving`, bounded above by it
    /// otherwise.
    pub fn new(n: usize, kraus: Vec<ComplexMatrix>, trace_preserving: bool) -> Result<Self> {
        check_qubit_count(n)?;
        if kraus.is_empty() {
            return Err(Error::Validation("a channel needs at least one Kraus matrix".into()));
        }
        let dim = 1usize << n;
        for (m, e) in kraus.iter().enumerate() {
            if e.rows() != dim || e.cols() != dim {
                return Err(Error::Dimension(format!(
                    "Kraus matrix {m} is {}x{}, expected {dim}x{dim}",
                    e.rows(),
                    e.cols()
                )));
            }
        }
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for e in &kraus {
            sum = &sum + &(&e.adjoint() * e);
        }
        let identity = ComplexMatrix::identity(dim);
        if trace_preserving {
            let defect = max_abs_diff(&sum, &identity);
            if defect > VALIDATION_TOL {
                return Err(Error::Validation(format!(
                    "Kraus completeness sum deviates from the identity by {defect:.3e}"
                )));
            }
        } else {
            let slack = &identity - &sum;
            if !is_positive_semidefinite(&slack, VALIDATION_TOL)? {
                return Err(Error::Validation(
                    "Kraus completeness sum exceeds the identity".into(),
                ));
            }
        }
        Ok(Self { n, kraus, trace_preserving })
    }

    /// The identity channel on n qubits.
    pub fn identity(n: usize) -> Result<Self> {
        check_qubit_count(n)?;
        Ok(Self {
            n,
            kraus: vec![ComplexMatrix::identity(1 << n)],
            trace_preserving: true,
        })
    }

    /// A unitary channel rho -> U rho U†.
    pub fn unitary(n: usize, u: ComplexMatrix) -> Result<Self> {
        Self::new(n, vec![u], true)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn is_trace_preserving(&self) -> bool {
        self.trace_preserving
    }

    /// Linear extension of the channel action to an arbitrary operator.
    pub fn apply_to_matrix(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim(), self.dim());
        for e in &self.kraus {
            out = &out + &(&(e * m) * &e.adjoint());
        }
        out
    }

    /// Apply the channel to a density matrix.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.n() != self.n {
            return Err(Error::Dimension(format!(
                "channel acts on {} qubits but the state has {}",
                self.n,
                rho.n()
            )));
        }
        let out = self.apply_to_matrix(rho.matrix());
        if self.trace_preserving {
            DensityMatrix::new(self.n, out)
        } else {
            DensityMatrix::new_subnormalized(self.n, out)
        }
    }

    /// Composition outer ∘ inner with Kraus set {A_i B_j}.
    pub fn compose(outer: &KrausChannel, inner: &KrausChannel) -> Result<KrausChannel> {
        if outer.n != inner.n {
            return Err(Error::Dimension(format!(
                "cannot compose channels on {} and {} qubits",
                outer.n, inner.n
            )));
        }
        let mut kraus = Vec::with_capacity(outer.kraus.len() * inner.kraus.len());
        for a in &outer.kraus {
            for b in &inner.kraus {
                kraus.push(a * b);
            }
        }
        KrausChannel::new(outer.n, kraus, outer.trace_preserving && inner.trace_preserving)
    }

    /// Tensor product acting on the joint space; qubit counts add.
    pub fn tensor(a: &KrausChannel, b: &KrausChannel) -> Result<KrausChannel> {
        let n = a.n + b.n;
        check_qubit_count(n)?;
        let mut kraus = Vec::with_capacity(a.kraus.len() * b.kraus.len());
        for ea in &a.kraus {
            for eb in &b.kraus {
                kraus.push(kron(ea, eb));
            }
        }
        KrausChannel::new(n, kraus, a.trace_preserving && b.trace_preserving)
    }

    /// Transfer matrix F_kl = tr(G_k Λ(G_l)) over the Hermitian basis.
    /// Real-valued within numerical noise since Λ maps Hermitian operators
    /// to Hermitian operators.
    pub fn transfer_matrix(&self) -> Result<ComplexMatrix> {
        let basis = HermitianBasis::new(self.n)?;
        let size = basis.len();
        let images: Vec<ComplexMatrix> =
            basis.elements().iter().map(|g| self.apply_to_matrix(g)).collect();
        let mut f = ComplexMatrix::zeros(size, size);
        for (l, image) in images.iter().enumerate() {
            for k in 0..size {
                f.set(k, l, (basis.element(k) * image).trace());
            }
        }
        Ok(f)
    }

    /// Process (χ) matrix of the channel over unnormalized Pauli strings.
    pub fn pauli_expansion(&self) -> Result<PauliExpansion> {
        PauliExpansion::of_channel(self)
    }

    /// The channel as a dim^2 x dim^2 matrix acting on row-major
    /// vectorized operators: S = sum_m E_m ⊗ conj(E_m).
    pub fn superoperator(&self) -> ComplexMatrix {
        let d2 = self.dim() * self.dim();
        let mut s = ComplexMatrix::zeros(d2, d2);
        for e in &self.kraus {
            s = &s + &kron(e, &e.conj());
        }
        s
    }
}

/// Coefficient matrix c of a channel in the unnormalized Pauli basis:
/// Λ(rho) = sum_ij c_ij P_i rho P_j. This is the process (χ) matrix; it is
/// Hermitian positive semidefinite, with unit trace for trace-preserving
/// channels under the tr(P_i E_m)/2^n coefficient convention.
#[derive(Clone, Debug)]
pub struct PauliExpansion {
    n: usize,
    coeffs: ComplexMatrix,
}

impl PauliExpansion {
    fn of_channel(ch: &KrausChannel) -> Result<Self> {
        if ch.n() > MAX_CHI_QUBITS {
            return Err(Error::Capacity(format!(
                "process matrix supports at most {MAX_CHI_QUBITS} qubits, got {}",
                ch.n()
            )));
        }
        let n = ch.n();
        let dim = ch.dim();
        let paulis: Vec<ComplexMatrix> =
            PauliString::all(n)?.iter().map(|p| p.matrix()).collect();
        let size = paulis.len();
        let inv_dim = cr(1.0 / dim as f64);

        // a[m][i] = tr(P_i E_m) / 2^n
        let amplitudes: Vec<Vec<C64>> = ch
            .kraus()
            .iter()
            .map(|e| paulis.iter().map(|p| (p * e).trace() * inv_dim).collect())
            .collect();

        let mut coeffs = ComplexMatrix::zeros(size, size);
        for a in &amplitudes {
            for i in 0..size {
                if a[i] == C64::ZERO {
                    continue;
                }
                for j in 0..size {
                    let v = coeffs.get(i, j) + a[i] * a[j].conj();
                    coeffs.set(i, j, v);
                }
            }
        }

        let expansion = Self { n, coeffs };
        expansion.validate(ch.is_trace_preserving())?;
        Ok(expansion)
    }

    fn validate(&self, trace_preserving: bool) -> Result<()> {
        if !self.coeffs.is_hermitian(VALIDATION_TOL) {
            return Err(Error::Validation("process matrix is not Hermitian".into()));
        }
        if !is_positive_semidefinite(&self.coeffs, VALIDATION_TOL)? {
            return Err(Error::Validation(
                "process matrix has a negative eigenvalue".into(),
            ));
        }
        if trace_preserving {
            let trace = self.coeffs.trace().re;
            if (trace - 1.0).abs() > VALIDATION_TOL {
                return Err(Error::Validation(format!(
                    "process matrix trace {trace} deviates from 1"
                )));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &ComplexMatrix {
        &self.coeffs
    }

    /// Rebuild the channel action sum_ij c_ij P_i m P_j from the
    /// coefficients.
    pub fn reconstruct_action(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        let dim = 1usize << self.n;
        if m.rows() != dim || m.cols() != dim {
            return Err(Error::Dimension(format!(
                "operator is {}x{}, expected {dim}x{dim}",
                m.rows(),
                m.cols()
            )));
        }
        let paulis: Vec<ComplexMatrix> =
            PauliString::all(self.n)?.iter().map(|p| p.matrix()).collect();
        let mut out = ComplexMatrix::zeros(dim, dim);
        for (i, pi) in paulis.iter().enumerate() {
            let left = pi * m;
            for (j, pj) in paulis.iter().enumerate() {
                let cij = self.coeffs.get(i, j);
                if cij.norm() == 0.0 {
                    continue;
                }
                out = &out + &(&left * pj).scale(cij);
            }
        }
        Ok(out)
    }
}

/// Amplitude damping with decay probability lambda: Kraus pair
/// {diag(1, sqrt(1-lambda)), sqrt(lambda) |0><1|}.
pub fn amplitude_damping(lambda: f64) -> Result<KrausChannel> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::Domain(format!(
            "damping probability {lambda} outside [0, 1]"
        )));
    }
    let mut e1 = ComplexMatrix::zeros(2, 2);
    e1.set(0, 0, C64::ONE);
    e1.set(1, 1, cr(libm::sqrt(1.0 - lambda)));
    let mut e2 = ComplexMatrix::zeros(2, 2);
    e2.set(0, 1, cr(libm::sqrt(lambda)));
    KrausChannel::new(1, vec![e1, e2], true)
}

/// Decay probability accumulated over a time step: 1 - exp(-t_step / T1).
pub fn lambda_of_time(t_step: f64, t1: f64) -> Result<f64> {
    if t1 <= 0.0 {
        return Err(Error::Domain(format!("relaxation time {t1} must be positive")));
    }
    if t_step < 0.0 {
        return Err(Error::Domain(format!("time step {t_step} must be nonnegative")));
    }
    Ok(1.0 - libm::exp(-t_step / t1))
}

/// Label used in error messages and CSV output for the channel kind.
pub fn channel_summary(ch: &KrausChannel) -> String {
    format!(
        "{} qubit(s), {} Kraus term(s), trace_preserving={}",
        ch.n(),
        ch.kraus().len(),
        ch.is_trace_preserving()
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::c;
    use crate::pauli::Pauli;
    use crate::random::{haar_random_channel, random_density_matrix, SplitMix64};

    #[test]
    fn amplitude_damping_limits() {
        let ch = amplitude_damping(0.0).unwrap();
        assert!(max_abs_diff(&ch.kraus()[0], &ComplexMatrix::identity(2)) < 1e-15);
        assert!(ch.kraus()[1].max_abs() < 1e-15);
        let rho = random_density_matrix(1, 3).unwrap();
        let out = ch.apply(&rho).unwrap();
        assert!(max_abs_diff(out.matrix(), rho.matrix()) < 1e-12);

        // full decay sends everything to the ground state
        let ch = amplitude_damping(1.0).unwrap();
        assert!((ch.kraus()[0].get(0, 0) - C64::ONE).norm() < 1e-15);
        assert!(ch.kraus()[0].get(1, 1).norm() < 1e-15);
        let ground = DensityMatrix::basis_state(1, 0).unwrap();
        let out = ch.apply(&rho).unwrap();
        assert!(max_abs_diff(out.matrix(), ground.matrix()) < 1e-12);
    }

    #[test]
    fn amplitude_damping_is_trace_preserving() {
        for lambda in [0.0, 0.3, 0.77, 1.0] {
            let ch = amplitude_damping(lambda).unwrap();
            let mut sum = ComplexMatrix::zeros(2, 2);
            for e in ch.kraus() {
                sum = &sum + &(&e.adjoint() * e);
            }
            assert!(max_abs_diff(&sum, &ComplexMatrix::identity(2)) < 1e-14);
        }
        assert!(matches!(amplitude_damping(-0.1), Err(Error::Domain(_))));
        assert!(matches!(amplitude_damping(1.5), Err(Error::Domain(_))));
    }

    #[test]
    fn lambda_of_time_values() {
        assert_eq!(lambda_of_time(0.0, 1.0).unwrap(), 0.0);
        assert!((lambda_of_time(1e9, 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((lambda_of_time(1.0, 1.0).unwrap() - (1.0 - libm::exp(-1.0))).abs() < 1e-15);
        assert!(matches!(lambda_of_time(1.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(lambda_of_time(-1.0, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn apply_decays_excited_state() {
        let lambda = 0.37;
        let ch = amplitude_damping(lambda).unwrap();
        let excited = DensityMatrix::basis_state(1, 1).unwrap();
        let out = ch.apply(&excited).unwrap();
        let expected =
            ComplexMatrix::from_real_rows(&[&[lambda, 0.0], &[0.0, 1.0 - lambda]]);
        assert!(max_abs_diff(out.matrix(), &expected) < 1e-14);

        // ground state is a fixed point
        let ground = DensityMatrix::basis_state(1, 0).unwrap();
        let out = ch.apply(&ground).unwrap();
        assert!(max_abs_diff(out.matrix(), ground.matrix()) < 1e-14);
    }

    #[test]
    fn apply_preserves_state_validity() {
        let mut rng = SplitMix64::new(404);
        for _ in 0..5 {
            let ch = haar_random_channel(2, 3, rng.next_u64()).unwrap();
            let rho = random_density_matrix(2, rng.next_u64()).unwrap();
            let out = ch.apply(&rho).unwrap();
            assert!(out.matrix().is_hermitian(VALIDATION_TOL));
            assert!((out.matrix().trace().re - 1.0).abs() < VALIDATION_TOL);
        }
    }

    #[test]
    fn compose_matches_damping_semigroup() {
        let (l1, l2) = (0.2, 0.45);
        let composed =
            KrausChannel::compose(&amplitude_damping(l1).unwrap(), &amplitude_damping(l2).unwrap())
                .unwrap();
        assert_eq!(composed.kraus().len(), 4);
        let direct = amplitude_damping(1.0 - (1.0 - l1) * (1.0 - l2)).unwrap();
        let rho = random_density_matrix(1, 99).unwrap();
        let a = composed.apply(&rho).unwrap();
        let b = direct.apply(&rho).unwrap();
        assert!(max_abs_diff(a.matrix(), b.matrix()) < 1e-12);

        // identity composition
        let ch = amplitude_damping(0.3).unwrap();
        let with_id = KrausChannel::compose(&ch, &KrausChannel::identity(1).unwrap()).unwrap();
        let x = ch.apply(&rho).unwrap();
        let y = with_id.apply(&rho).unwrap();
        assert!(max_abs_diff(x.matrix(), y.matrix()) < 1e-13);
    }

    #[test]
    fn tensor_acts_independently() {
        let id = KrausChannel::identity(1).unwrap();
        let both = KrausChannel::tensor(&id, &id).unwrap();
        assert_eq!(both.n(), 2);
        let rho = random_density_matrix(2, 5).unwrap();
        let out = both.apply(&rho).unwrap();
        assert!(max_abs_diff(out.matrix(), rho.matrix()) < 1e-13);

        let lambda = 0.31;
        let ad2 = KrausChannel::tensor(
            &amplitude_damping(lambda).unwrap(),
            &amplitude_damping(lambda).unwrap(),
        )
        .unwrap();
        let excited = DensityMatrix::basis_state(2, 3).unwrap();
        let out = ad2.apply(&excited).unwrap();
        let p11 = out.matrix().get(3, 3).re;
        assert!((p11 - (1.0 - lambda) * (1.0 - lambda)).abs() < 1e-13);
    }

    #[test]
    fn transfer_matrix_known_forms() {
        let id = KrausChannel::identity(1).unwrap();
        let f = id.transfer_matrix().unwrap();
        assert!(max_abs_diff(&f, &ComplexMatrix::identity(4)) < 1e-13);

        let lambda = 0.42;
        let root = libm::sqrt(1.0 - lambda);
        let f = amplitude_damping(lambda).unwrap().transfer_matrix().unwrap();
        let expected = ComplexMatrix::from_real_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, root, 0.0, 0.0],
            &[0.0, 0.0, root, 0.0],
            &[lambda, 0.0, 0.0, 1.0 - lambda],
        ]);
        assert!(max_abs_diff(&f, &expected) < 1e-13);

        let x_gate = KrausChannel::unitary(1, Pauli::X.matrix()).unwrap();
        let f = x_gate.transfer_matrix().unwrap();
        let expected = ComplexMatrix::from_real_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, -1.0, 0.0],
            &[0.0, 0.0, 0.0, -1.0],
        ]);
        assert!(max_abs_diff(&f, &expected) < 1e-13);

        // transfer matrices are real
        let ch = haar_random_channel(1, 2, 8).unwrap();
        let f = ch.transfer_matrix().unwrap();
        let imag = f.data().iter().fold(0.0f64, |acc, z| acc.max(z.im.abs()));
        assert!(imag < 1e-10);
    }

    #[test]
    fn transfer_matrix_is_multiplicative_under_composition() {
        let mut rng = SplitMix64::new(2024);
        for n in 1..=2usize {
            let a = haar_random_channel(n, 2, rng.next_u64()).unwrap();
            let b = haar_random_channel(n, 2, rng.next_u64()).unwrap();
            let composed = KrausChannel::compose(&a, &b).unwrap();
            let lhs = composed.transfer_matrix().unwrap();
            let rhs = &a.transfer_matrix().unwrap() * &b.transfer_matrix().unwrap();
            assert!(max_abs_diff(&lhs, &rhs) < 1e-10);
        }
    }

    #[test]
    fn pauli_expansion_of_amplitude_damping() {
        let lambda = 0.6;
        let root = libm::sqrt(1.0 - lambda);
        let chi = amplitude_damping(lambda).unwrap().pauli_expansion().unwrap();
        let coeffs = chi.coeffs();
        // seven nonzero coefficients of the damping channel in I, X, Y, Z order
        let q = lambda / 4.0;
        assert!((coeffs.get(0, 0) - cr((2.0 + 2.0 * root - lambda) / 4.0)).norm() < 1e-14);
        assert!((coeffs.get(3, 3) - cr((2.0 - 2.0 * root - lambda) / 4.0)).norm() < 1e-14);
        assert!((coeffs.get(1, 1) - cr(q)).norm() < 1e-14);
        assert!((coeffs.get(2, 2) - cr(q)).norm() < 1e-14);
        assert!((coeffs.get(1, 2) - c(0.0, -q)).norm() < 1e-14);
        assert!((coeffs.get(2, 1) - c(0.0, q)).norm() < 1e-14);
        assert!((coeffs.get(0, 3) - cr(q)).norm() < 1e-14);
        assert!((coeffs.get(3, 0) - cr(q)).norm() < 1e-14);
        // everything else vanishes
        for i in 0..4 {
            for j in 0..4 {
                let known = matches!(
                    (i, j),
                    (0, 0) | (3, 3) | (1, 1) | (2, 2) | (1, 2) | (2, 1) | (0, 3) | (3, 0)
                );
                if !known {
                    assert!(coeffs.get(i, j).norm() < 1e-14, "unexpected c[{i}][{j}]");
                }
            }
        }
    }

    #[test]
    fn pauli_expansion_of_identity() {
        let chi = KrausChannel::identity(1).unwrap().pauli_expansion().unwrap();
        assert!((chi.coeffs().get(0, 0) - C64::ONE).norm() < 1e-14);
        for i in 0..4 {
            for j in 0..4 {
                if (i, j) != (0, 0) {
                    assert!(chi.coeffs().get(i, j).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn pauli_expansion_round_trips() {
        let mut rng = SplitMix64::new(31337);
        for n in 1..=2usize {
            for _ in 0..10 {
                let ch = haar_random_channel(n, 3, rng.next_u64()).unwrap();
                let chi = ch.pauli_expansion().unwrap();
                let rho = random_density_matrix(n, rng.next_u64()).unwrap();
                let direct = ch.apply_to_matrix(rho.matrix());
                let rebuilt = chi.reconstruct_action(rho.matrix()).unwrap();
                assert!(max_abs_diff(&direct, &rebuilt) < 1e-10);
                // chi is PSD with unit trace for trace-preserving channels
                assert!((chi.coeffs().trace().re - 1.0).abs() < VALIDATION_TOL);
            }
        }
    }

    #[test]
    fn validation_rejects_bad_inputs() {
        // non-CPTP Kraus set
        let bad = vec![ComplexMatrix::identity(2).scale(cr(1.1))];
        assert!(matches!(KrausChannel::new(1, bad, true), Err(Error::Validation(_))));
        // completeness above the identity fails even in the relaxed mode
        let too_big = vec![ComplexMatrix::identity(2).scale(cr(1.1))];
        assert!(matches!(KrausChannel::new(1, too_big, false), Err(Error::Validation(_))));
        // sub-unital channels are accepted in the relaxed mode
        let half = vec![ComplexMatrix::identity(2).scale(cr(0.5))];
        assert!(KrausChannel::new(1, half, false).is_ok());
        // dimension mismatch
        let wrong = vec![ComplexMatrix::identity(4)];
        assert!(matches!(KrausChannel::new(1, wrong, true), Err(Error::Dimension(_))));
        // capacity
        assert!(matches!(KrausChannel::identity(MAX_QUBITS + 1), Err(Error::Capacity(_))));

        // density matrix checks
        let not_unit = ComplexMatrix::identity(2);
        assert!(matches!(DensityMatrix::new(1, not_unit), Err(Error::Validation(_))));
        let mut non_hermitian = ComplexMatrix::identity(2).scale(cr(0.5));
        non_hermitian.set(0, 1, c(0.0, 0.5));
        assert!(matches!(DensityMatrix::new(1, non_hermitian), Err(Error::Validation(_))));
        let negative =
            ComplexMatrix::from_real_rows(&[&[1.5, 0.0], &[0.0, -0.5]]);
        assert!(matches!(DensityMatrix::new(1, negative), Err(Error::Validation(_))));
        // subnormalized mode accepts decayed traces
        let half_state = ComplexMatrix::from_real_rows(&[&[0.5, 0.0], &[0.0, 0.0]]);
        assert!(DensityMatrix::new_subnormalized(1, half_state).is_ok());
    }

    #[test]
    fn chi_capacity_cap() {
        let id = KrausChannel::identity(MAX_CHI_QUBITS + 1).unwrap();
        assert!(matches!(id.pauli_expansion(), Err(Error::Capacity(_))));
    }

    #[test]
    fn apply_dimension_mismatch() {
        let ch = amplitude_damping(0.5).unwrap();
        let rho = random_density_matrix(2, 1).unwrap();
        assert!(matches!(ch.apply(&rho), Err(Error::Dimension(_))));
    }

    #[test]
    fn superoperator_matches_action() {
        let mut rng = SplitMix64::new(555);
        let ch = haar_random_channel(1, 2, rng.next_u64()).unwrap();
        let s = ch.superoperator();
        let rho = random_density_matrix(1, rng.next_u64()).unwrap();
        let vec_rho: Vec<C64> = rho.matrix().data().to_vec();
        let out_vec = s.mul_vec(&vec_rho);
        let direct = ch.apply_to_matrix(rho.matrix());
        for (idx, z) in out_vec.iter().enumerate() {
            let (r, c_) = (idx / 2, idx % 2);
            assert!((z - direct.get(r, c_)).norm() < 1e-12);
        }
    }
}
