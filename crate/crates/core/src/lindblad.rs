//! Extraction of the time-local master-equation generator of a channel
//! family: the transfer matrix F(t), its numerical derivative, the
//! generator matrix L with F-dot = L F, the generator's Choi matrix over
//! the outer-product basis, and the decomposition of that Choi matrix into
//! a Hamiltonian plus jump operators with rates.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use crate::channel::{amplitude_damping, lambda_of_time, DensityMatrix, KrausChannel};
use crate::numerics::{
    c, cr, eigh, kron, mat_exp, max_abs_diff, solve_linear, ComplexMatrix, C64,
};
use crate::pauli::{HermitianBasis, TauBasis};
use crate::{Error, Result};

/// Default finite-difference step, in units of the family's own time scale.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// Rates below this fraction of the Choi-matrix scale are treated as
/// numerical zero (finite-difference noise) and dropped from the jump list.
const RATE_DROP_TOL: f64 = 1e-6;

/// Rates more negative than this (times the Choi scale, floored at one)
/// abort the snapshot as non-Markovian.
const RATE_ERROR_TOL: f64 = -1e-6;

/// Floor applied to slightly negative rates that survive the check above.
const RATE_CLIP: f64 = -1e-8;

type FamilyFn = dyn Fn(f64) -> KrausChannel + Send + Sync;
type DerivativeFn = dyn Fn(f64) -> ComplexMatrix + Send + Sync;

/// A one-parameter family of channels t -> phi_t with phi_0 the identity.
/// Evaluation must be a pure function of t, so snapshots at distinct times
/// may be taken concurrently.
pub struct ChannelFamily {
    n: usize,
    label: String,
    at: Box<FamilyFn>,
    f_dot_hook: Option<Box<DerivativeFn>>,
}

impl ChannelFamily {
    /// Wrap a closure as a family, checking phi_0 = id through the transfer
    /// matrix.
    pub fn new(
        n: usize,
        label: impl Into<String>,
        at: impl Fn(f64) -> KrausChannel + Send + Sync + 'static,
    ) -> Result<Self> {
        let family = Self { n, label: label.into(), at: Box::new(at), f_dot_hook: None };
        let f0 = family.channel_at(0.0)?.transfer_matrix()?;
        let defect = max_abs_diff(&f0, &ComplexMatrix::identity(f0.rows()));
        if defect > 1e-10 {
            return Err(Error::Validation(format!(
                "family '{}' does not start at the identity (F(0) defect {defect:.3e})",
                family.label
            )));
        }
        Ok(family)
    }

    /// Attach an analytic derivative for F(t); when present it replaces the
    /// finite-difference stencil in [`f_dot`].
    pub fn with_f_dot(mut self, hook: impl Fn(f64) -> ComplexMatrix + Send + Sync + 'static) -> Self {
        self.f_dot_hook = Some(Box::new(hook));
        self
    }

    /// Single-qubit amplitude damping with lambda(t) = 1 - exp(-t/T1).
    pub fn amplitude_damping(t1: f64) -> Result<Self> {
        if t1 <= 0.0 {
            return Err(Error::Domain(format!("relaxation time {t1} must be positive")));
        }
        Self::new(1, format!("amplitude_damping(T1={t1})"), move |t| {
            let lambda = lambda_of_time(t, t1).expect("t >= 0 and T1 > 0");
            amplitude_damping(lambda).expect("lambda in [0, 1]")
        })
    }

    /// Amplitude damping with the exact transfer-matrix derivative attached.
    pub fn amplitude_damping_analytic(t1: f64) -> Result<Self> {
        let family = Self::amplitude_damping(t1)?;
        Ok(family.with_f_dot(move |t| {
            let lambda_dot = libm::exp(-t / t1) / t1;
            let f = libm::exp(-t / (2.0 * t1));
            let f_dot = -f / (2.0 * t1);
            let mut m = ComplexMatrix::zeros(4, 4);
            m.set(1, 1, cr(f_dot));
            m.set(2, 2, cr(f_dot));
            m.set(3, 0, cr(lambda_dot));
            m.set(3, 3, cr(-lambda_dot));
            m
        }))
    }

    /// Unitary family t -> exp(-iHt) . exp(iHt) generated by a Hamiltonian.
    pub fn unitary(h: &ComplexMatrix) -> Result<Self> {
        if !h.is_square() || !h.rows().is_power_of_two() || h.rows() < 2 {
            return Err(Error::Dimension(format!(
                "Hamiltonian must be square with power-of-two dimension, got {}x{}",
                h.rows(),
                h.cols()
            )));
        }
        let n = h.rows().trailing_zeros() as usize;
        let h = h.clone();
        Self::new(n, "unitary", move |t| {
            let u = mat_exp(&h.scale(c(0.0, -t))).expect("square input");
            KrausChannel::unitary(n, u).expect("unitary channel")
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn has_analytic_derivative(&self) -> bool {
        self.f_dot_hook.is_some()
    }

    /// The channel at time t >= 0.
    pub fn channel_at(&self, t: f64) -> Result<KrausChannel> {
        if t < 0.0 {
            return Err(Error::Domain(format!("family time {t} must be nonnegative")));
        }
        Ok((self.at)(t))
    }
}

/// Transfer matrix of the family member at time t.
pub fn f_matrix(family: &ChannelFamily, t: f64) -> Result<ComplexMatrix> {
    family.channel_at(t)?.transfer_matrix()
}

/// Time derivative of F at t: the family's analytic hook when present,
/// otherwise an O(h^2) stencil (central for t >= h, one-sided forward
/// below).
pub fn f_dot(family: &ChannelFamily, t: f64, h: f64) -> Result<ComplexMatrix> {
    if t < 0.0 {
        return Err(Error::Domain(format!("time {t} must be nonnegative")));
    }
    if let Some(hook) = &family.f_dot_hook {
        return Ok(hook(t));
    }
    if h <= 0.0 {
        return Err(Error::Domain(format!("finite-difference step {h} must be positive")));
    }
    if t >= h {
        let plus = f_matrix(family, t + h)?;
        let minus = f_matrix(family, t - h)?;
        Ok((&plus - &minus).scale(cr(0.5 / h)))
    } else {
        // second-order forward stencil keeps the O(h^2) error at t = 0
        let f0 = f_matrix(family, t)?;
        let f1 = f_matrix(family, t + h)?;
        let f2 = f_matrix(family, t + 2.0 * h)?;
        Ok((&(&f1.scale(cr(4.0)) - &f2) - &f0.scale(cr(3.0))).scale(cr(0.5 / h)))
    }
}

/// Generator matrix L = F-dot F^-1 in the Hermitian basis. Fails with a
/// singularity error (carrying the condition estimate) when F is not
/// invertible at the requested time.
pub fn generator_matrix(family: &ChannelFamily, t: f64, h: f64) -> Result<ComplexMatrix> {
    let f = f_matrix(family, t)?;
    let f_inv = solve_linear(&f, &ComplexMatrix::identity(f.rows()))?;
    Ok(&f_dot(family, t, h)? * &f_inv)
}

/// Apply the generator encoded by an L matrix: expand in the Hermitian
/// basis, multiply by L, and resynthesize.
pub fn apply_generator_matrix(
    l: &ComplexMatrix,
    basis: &HermitianBasis,
    m: &ComplexMatrix,
) -> ComplexMatrix {
    let coeffs = basis.expand(m);
    let image = l.mul_vec(&coeffs);
    basis.synthesize(&image)
}

/// Choi matrix R of the generator over the outer-product basis:
/// R_ef = sum_cd (F-dot F^-1)_cd tr[tau_f† G_c tau_e G_d]. Hermitian for a
/// Hermiticity-preserving generator.
pub fn choi_matrix(family: &ChannelFamily, t: f64, h: f64) -> Result<ComplexMatrix> {
    let l = generator_matrix(family, t, h)?;
    choi_from_generator_matrix(&l, family.n())
}

/// The same basis change applied to an explicit L matrix.
///
/// Expanding tau_e2,f2 = |e2><f2| in the Hermitian basis, pushing it
/// through the generator, and reading off matrix elements gives
/// R_ef = sum_cd L_dc <f2|G_c|e2> <e1|G_d|f1>, which this evaluates
/// entrywise.
pub fn choi_from_generator_matrix(l: &ComplexMatrix, n: usize) -> Result<ComplexMatrix> {
    let basis = HermitianBasis::new(n)?;
    let tau = TauBasis::new(n)?;
    let size = basis.len();

    let mut r = ComplexMatrix::zeros(size, size);
    for e in 0..size {
        let (e1, e2) = tau.pair(e);
        for f in 0..size {
            let (f1, f2) = tau.pair(f);
            let mut acc = C64::ZERO;
            for cc in 0..size {
                let source = basis.element(cc).get(f2, e2);
                if source.norm() == 0.0 {
                    continue;
                }
                for d in 0..size {
                    let ldc = l.get(d, cc);
                    if ldc.norm() == 0.0 {
                        continue;
                    }
                    acc += ldc * source * basis.element(d).get(e1, f1);
                }
            }
            r.set(e, f, acc);
        }
    }
    Ok(r)
}

/// Apply the generator encoded by a Choi matrix:
/// rho-dot = sum_ef R_ef tau_e rho tau_f†, which reduces to
/// out[i][j] = sum_kl R[(i,k),(j,l)] m[k][l].
pub fn apply_choi(choi: &ComplexMatrix, m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dim = m.rows();
    if !m.is_square() || choi.rows() != dim * dim || choi.cols() != dim * dim {
        return Err(Error::Dimension(format!(
            "Choi matrix {}x{} does not match operator dimension {dim}",
            choi.rows(),
            choi.cols()
        )));
    }
    let mut out = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = C64::ZERO;
            for k in 0..dim {
                for l in 0..dim {
                    acc += choi.get(i * dim + k, j * dim + l) * m.get(k, l);
                }
            }
            out.set(i, j, acc);
        }
    }
    Ok(out)
}

/// A jump operator with its rate.
#[derive(Clone, Debug)]
pub struct JumpTerm {
    pub operator: ComplexMatrix,
    pub rate: f64,
}

/// Split a generator Choi matrix into a traceless Hermitian Hamiltonian and
/// a dissipator.
///
/// The Choi matrix is re-expressed over the Hermitian basis, whose identity
/// element is split off; the remaining traceless-part matrix is Hermitian
/// and its eigendecomposition yields the jump operators (eigenvectors
/// recombined with basis elements) and rates (eigenvalues). Rates below
/// -1e-6 abort as non-Markovian; smaller negative noise is floored at
/// -1e-8 and near-zero rates are dropped.
pub fn decompose_generator(choi: &ComplexMatrix) -> Result<(ComplexMatrix, Vec<JumpTerm>)> {
    let size = choi.rows();
    if !choi.is_square() {
        return Err(Error::Dimension("Choi matrix must be square".into()));
    }
    let dim = libm::sqrt(size as f64) as usize;
    if dim * dim != size || !dim.is_power_of_two() || dim < 2 {
        return Err(Error::Dimension(format!(
            "Choi dimension {size} is not 4^n for a supported qubit count"
        )));
    }
    let n = dim.trailing_zeros() as usize;
    let scale = choi.max_abs().max(1e-300);
    if choi.hermiticity_defect() > 1e-8 * scale {
        return Err(Error::Validation(format!(
            "Choi matrix is not Hermitian (defect {:.3e})",
            choi.hermiticity_defect()
        )));
    }

    let basis = HermitianBasis::new(n)?;
    let tau = TauBasis::new(n)?;

    // basis change tau -> G: K = T^T R conj(T) with T[e][a] = tr(G_a tau_e)
    // = G_a[e2][e1]
    let t_mat = ComplexMatrix::from_fn(size, size, |e, a| {
        let (e1, e2) = tau.pair(e);
        basis.element(a).get(e2, e1)
    });
    let k = &(&t_mat.transpose() * choi) * &t_mat.conj();

    // Hamiltonian from the identity cross terms: H = (B† - B) / (2i sqrt(N))
    // with B = sum_{a>=1} K_a0 G_a
    let mut b = ComplexMatrix::zeros(dim, dim);
    for a in 1..size {
        let k_a0 = k.get(a, 0);
        if k_a0.norm() > 0.0 {
            b = &b + &basis.element(a).scale(k_a0);
        }
    }
    let sqrt_dim = libm::sqrt(dim as f64);
    let hamiltonian = (&b.adjoint() - &b).scale(c(0.0, -0.5 / sqrt_dim));

    // dissipator from the traceless-part (Kossakowski) block
    let k_prime = ComplexMatrix::from_fn(size - 1, size - 1, |a, bb| k.get(a + 1, bb + 1));
    let (rates, vectors) = eigh(&k_prime)?;

    let mut jumps = Vec::new();
    for (idx, &rate) in rates.iter().enumerate() {
        if rate < RATE_ERROR_TOL * scale.max(1.0) {
            return Err(Error::NonMarkovian { rate });
        }
        if rate.abs() <= RATE_DROP_TOL * scale {
            continue;
        }
        let mut op = ComplexMatrix::zeros(dim, dim);
        for a in 1..size {
            let w = vectors.get(a - 1, idx);
            if w.norm() > 0.0 {
                op = &op + &basis.element(a).scale(w);
            }
        }
        jumps.push(JumpTerm { operator: op, rate: rate.max(RATE_CLIP) });
    }
    // dominant rate first, deterministically
    jumps.sort_by(|a, b| b.rate.partial_cmp(&a.rate).expect("rates are finite"));
    Ok((hamiltonian, jumps))
}

/// A time-local generator in Hamiltonian/jump form,
/// rho-dot = -i[H, rho] + sum_k rate_k (V_k rho V_k† - {V_k† V_k, rho}/2).
#[derive(Clone, Debug)]
pub struct LindbladGenerator {
    n: usize,
    hamiltonian: Option<ComplexMatrix>,
    jumps: Vec<JumpTerm>,
    // cached V_k† V_k, matching `jumps`
    gram: Vec<ComplexMatrix>,
}

impl LindbladGenerator {
    pub fn new(n: usize, hamiltonian: Option<ComplexMatrix>, jumps: Vec<JumpTerm>) -> Result<Self> {
        let dim = 1usize << n;
        if let Some(h) = &hamiltonian {
            if h.rows() != dim || h.cols() != dim {
                return Err(Error::Dimension(format!(
                    "Hamiltonian is {}x{}, expected {dim}x{dim}",
                    h.rows(),
                    h.cols()
                )));
            }
        }
        for term in &jumps {
            if term.operator.rows() != dim || term.operator.cols() != dim {
                return Err(Error::Dimension(format!(
                    "jump operator is {}x{}, expected {dim}x{dim}",
                    term.operator.rows(),
                    term.operator.cols()
                )));
            }
        }
        let gram = jumps.iter().map(|t| &t.operator.adjoint() * &t.operator).collect();
        Ok(Self { n, hamiltonian, jumps, gram })
    }

    /// The zero generator.
    pub fn zero(n: usize) -> Self {
        Self { n, hamiltonian: None, jumps: Vec::new(), gram: Vec::new() }
    }

    /// Replicate a single-qubit generator independently on each of
    /// n_qubits qubits.
    pub fn per_qubit(n_qubits: usize, single: &LindbladGenerator) -> Result<Self> {
        if single.n != 1 {
            return Err(Error::Dimension(format!(
                "per-qubit embedding needs a single-qubit generator, got {} qubits",
                single.n
            )));
        }
        let mut hamiltonian: Option<ComplexMatrix> = None;
        let mut jumps = Vec::new();
        for q in 0..n_qubits {
            if let Some(h) = &single.hamiltonian {
                let embedded = embed_single_qubit(h, q, n_qubits);
                hamiltonian = Some(match hamiltonian {
                    Some(acc) => &acc + &embedded,
                    None => embedded,
                });
            }
            for term in &single.jumps {
                jumps.push(JumpTerm {
                    operator: embed_single_qubit(&term.operator, q, n_qubits),
                    rate: term.rate,
                });
            }
        }
        Self::new(n_qubits, hamiltonian, jumps)
    }

    /// The generator of a Pauli-channel rate vector: jump operators are the
    /// non-identity Pauli strings with their rates (negative rounding noise
    /// clamped to zero).
    pub fn from_pta_rates(rates: &crate::twirl::PtaRates) -> Result<Self> {
        let strings = crate::pauli::PauliString::all(rates.n())?;
        let jumps: Vec<JumpTerm> = strings
            .iter()
            .zip(rates.gamma())
            .skip(1)
            .filter(|(_, &g)| g.max(0.0) > 0.0)
            .map(|(p, &g)| JumpTerm { operator: p.matrix(), rate: g.max(0.0) })
            .collect();
        Self::new(rates.n(), None, jumps)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn hamiltonian(&self) -> Option<&ComplexMatrix> {
        self.hamiltonian.as_ref()
    }

    pub fn jumps(&self) -> &[JumpTerm] {
        &self.jumps
    }

    /// Apply the generator to an operator.
    pub fn apply(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim(), self.dim());
        if let Some(h) = &self.hamiltonian {
            let comm = &(h * m) - &(m * h);
            out = &out + &comm.scale(c(0.0, -1.0));
        }
        for (term, gram) in self.jumps.iter().zip(&self.gram) {
            let sandwich = &(&term.operator * m) * &term.operator.adjoint();
            let anti = &(gram * m) + &(m * gram);
            out = &out + &(&sandwich - &anti.scale(cr(0.5))).scale(cr(term.rate));
        }
        out
    }

    /// Crude Frobenius bound on the superoperator norm, used for integrator
    /// stability checks: 2 ||H||_F + 2 sum_k |rate_k| ||V_k||_F^2.
    pub fn norm_bound(&self) -> f64 {
        let mut bound = 0.0;
        if let Some(h) = &self.hamiltonian {
            bound += 2.0 * h.fro_norm();
        }
        for term in &self.jumps {
            let v = term.operator.fro_norm();
            bound += 2.0 * term.rate.abs() * v * v;
        }
        bound
    }

    /// The generator as a dim^2 x dim^2 matrix on row-major vectorized
    /// operators.
    pub fn superoperator(&self) -> ComplexMatrix {
        let dim = self.dim();
        let id = ComplexMatrix::identity(dim);
        let mut s = ComplexMatrix::zeros(dim * dim, dim * dim);
        if let Some(h) = &self.hamiltonian {
            let left = kron(h, &id);
            let right = kron(&id, &h.transpose());
            s = &s + &(&left - &right).scale(c(0.0, -1.0));
        }
        for (term, gram) in self.jumps.iter().zip(&self.gram) {
            let sandwich = kron(&term.operator, &term.operator.conj());
            let anti = &kron(gram, &id) + &kron(&id, &gram.transpose());
            s = &s + &(&sandwich - &anti.scale(cr(0.5))).scale(cr(term.rate));
        }
        s
    }
}

/// Embed a single-qubit operator at position q (0 = leftmost, most
/// significant) of an n-qubit register.
pub fn embed_single_qubit(op: &ComplexMatrix, q: usize, n: usize) -> ComplexMatrix {
    assert!(q < n, "qubit index out of range");
    let mut out = if q == 0 { op.clone() } else { ComplexMatrix::identity(1 << q) };
    if q > 0 {
        out = kron(&out, op);
    }
    let trailing = n - q - 1;
    if trailing > 0 {
        out = kron(&out, &ComplexMatrix::identity(1 << trailing));
    }
    out
}

/// One snapshot of the extracted generator at a fixed time.
pub struct GeneratorSnapshot {
    pub t: f64,
    pub l: ComplexMatrix,
    pub choi: ComplexMatrix,
    pub hamiltonian: ComplexMatrix,
    pub jumps: Vec<JumpTerm>,
}

impl GeneratorSnapshot {
    /// The decomposed form as an applicable generator.
    pub fn generator(&self) -> Result<LindbladGenerator> {
        let dim = self.hamiltonian.rows();
        let n = dim.trailing_zeros() as usize;
        LindbladGenerator::new(n, Some(self.hamiltonian.clone()), self.jumps.clone())
    }
}

/// Extract a generator snapshot at time t and verify that the decomposed
/// form reproduces the L matrix.
pub fn snapshot(family: &ChannelFamily, t: f64, h: f64) -> Result<GeneratorSnapshot> {
    let l = generator_matrix(family, t, h)?;
    let choi = choi_from_generator_matrix(&l, family.n())?;
    let (hamiltonian, jumps) = decompose_generator(&choi)?;

    let snap = GeneratorSnapshot { t, l, choi, hamiltonian, jumps };
    let rebuilt = generator_matrix_of(&snap.generator()?)?;
    let tol = 1e-8 * snap.l.max_abs().max(1.0);
    let defect = max_abs_diff(&rebuilt, &snap.l);
    if defect > tol {
        return Err(Error::Validation(format!(
            "decomposed generator deviates from L by {defect:.3e}"
        )));
    }
    Ok(snap)
}

/// L matrix of an explicit generator: L_kl = tr(G_k Phi(G_l)).
pub fn generator_matrix_of(generator: &LindbladGenerator) -> Result<ComplexMatrix> {
    let basis = HermitianBasis::new(generator.n())?;
    let size = basis.len();
    let mut l = ComplexMatrix::zeros(size, size);
    for (col, g) in basis.elements().iter().enumerate() {
        let image = generator.apply(g);
        for row in 0..size {
            l.set(row, col, (basis.element(row) * &image).trace());
        }
    }
    Ok(l)
}

/// Analytic amplitude-damping generator action,
/// rho-dot = (1/(2 T1)) (2 sigma- rho sigma+ - {sigma+ sigma-, rho}).
pub fn analytic_damping_action(m: &ComplexMatrix, t1: f64) -> ComplexMatrix {
    let lower = lowering_operator();
    let raise = lower.adjoint();
    let number = &raise * &lower;
    let sandwich = (&(&lower * m) * &raise).scale(cr(2.0));
    let anti = &(&number * m) + &(m * &number);
    (&sandwich - &anti).scale(cr(0.5 / t1))
}

/// sigma- = |0><1|.
pub fn lowering_operator() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2, 2);
    m.set(0, 1, C64::ONE);
    m
}

/// A tomographically complete set of single-qubit probe states: |0>, |1>,
/// |+>, and |+i>.
pub fn single_qubit_probe_states() -> Vec<DensityMatrix> {
    let inv_sqrt2 = 1.0 / libm::sqrt(2.0);
    vec![
        DensityMatrix::basis_state(1, 0).expect("valid"),
        DensityMatrix::basis_state(1, 1).expect("valid"),
        DensityMatrix::pure(&[cr(inv_sqrt2), cr(inv_sqrt2)]).expect("valid"),
        DensityMatrix::pure(&[cr(inv_sqrt2), c(0.0, inv_sqrt2)]).expect("valid"),
    ]
}

/// Max-norm deviation between the Choi-reconstructed damping generator and
/// its analytic form, evaluated over the probe states.
pub fn verify_ad_generator(t1: f64, t: f64, h: f64) -> Result<f64> {
    if t1 <= 0.0 {
        return Err(Error::Domain(format!("relaxation time {t1} must be positive")));
    }
    if !(0.0..=5.0 * t1).contains(&t) {
        return Err(Error::Domain(format!(
            "verification time {t} outside [0, 5 T1] = [0, {}]",
            5.0 * t1
        )));
    }
    let family = ChannelFamily::amplitude_damping(t1)?;
    let choi = choi_matrix(&family, t, h)?;
    damping_deviation(&choi, t1)
}

/// Deviation of an extracted single-qubit Choi matrix from the analytic
/// damping generator, over the probe states.
pub fn damping_deviation(choi: &ComplexMatrix, t1: f64) -> Result<f64> {
    let mut worst = 0.0f64;
    for rho in single_qubit_probe_states() {
        let reconstructed = apply_choi(choi, rho.matrix())?;
        let analytic = analytic_damping_action(rho.matrix(), t1);
        worst = worst.max(max_abs_diff(&reconstructed, &analytic));
    }
    Ok(worst)
}
