//! Continuous-time error correction: a jump-process recovery map competing
//! against a noise generator, d rho/dt = L(rho) + beta (R(rho) - rho),
//! integrated with a fixed-step classical fourth-order scheme, and the
//! exact-versus-Pauli-approximated fidelity comparison on the three-qubit
//! bit-flip code.

use alloc::vec::Vec;
use alloc::{format, vec};

use crate::channel::{amplitude_damping, lambda_of_time, DensityMatrix, KrausChannel};
use crate::lindblad::{self, LindbladGenerator};
use crate::numerics::{cr, ComplexMatrix, C64};
use crate::pauli::Pauli;
use crate::twirl::{pta_rates, twirl_diagonal};
use crate::{Error, Result};

/// Syndrome projection followed by the matching correction, as a CPTP map.
#[derive(Clone, Debug)]
pub struct RecoveryMap {
    n: usize,
    map: KrausChannel,
}

impl RecoveryMap {
    /// Recovery for the three-qubit bit-flip repetition code with
    /// stabilizers Z1 Z2 and Z2 Z3: Kraus operators are
    /// {correction(s) projector(s)} over the four syndromes, mapping any
    /// single-X-corrupted codeword back to the code space.
    pub fn three_qubit_bit_flip() -> Result<Self> {
        let n = 3;
        let dim = 1usize << n;
        let id = ComplexMatrix::identity(dim);
        let z12 = &lindblad::embed_single_qubit(&Pauli::Z.matrix(), 0, n)
            * &lindblad::embed_single_qubit(&Pauli::Z.matrix(), 1, n);
        let z23 = &lindblad::embed_single_qubit(&Pauli::Z.matrix(), 1, n)
            * &lindblad::embed_single_qubit(&Pauli::Z.matrix(), 2, n);

        let mut kraus = Vec::with_capacity(4);
        for (s1, s2, correction) in [
            (1.0, 1.0, id.clone()),
            (-1.0, 1.0, lindblad::embed_single_qubit(&Pauli::X.matrix(), 0, n)),
            (-1.0, -1.0, lindblad::embed_single_qubit(&Pauli::X.matrix(), 1, n)),
            (1.0, -1.0, lindblad::embed_single_qubit(&Pauli::X.matrix(), 2, n)),
        ] {
            let p1 = (&id + &z12.scale(cr(s1))).scale(cr(0.5));
            let p2 = (&id + &z23.scale(cr(s2))).scale(cr(0.5));
            kraus.push(&correction * &(&p1 * &p2));
        }
        Ok(Self { n, map: KrausChannel::new(n, kraus, true)? })
    }

    /// The do-nothing recovery; beta (R - id) vanishes identically.
    pub fn identity(n: usize) -> Result<Self> {
        Ok(Self { n, map: KrausChannel::identity(n)? })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn channel(&self) -> &KrausChannel {
        &self.map
    }

    pub fn apply_to_matrix(&self, m: &ComplexMatrix) -> ComplexMatrix {
        self.map.apply_to_matrix(m)
    }
}

/// Logical |0> of the repetition code, |000>.
pub fn logical_zero() -> DensityMatrix {
    DensityMatrix::basis_state(3, 0).expect("valid state")
}

/// Logical |+> of the repetition code, (|000> + |111>)/sqrt(2). Sensitive
/// to both decay and coherence loss, which makes it the default probe for
/// noise-model comparisons.
pub fn logical_plus() -> DensityMatrix {
    let inv_sqrt2 = cr(1.0 / libm::sqrt(2.0));
    let mut state = vec![C64::ZERO; 8];
    state[0] = inv_sqrt2;
    state[7] = inv_sqrt2;
    DensityMatrix::pure(&state).expect("valid state")
}

/// One continuous-time error-correction run.
pub struct CtqecRun {
    pub noise: LindbladGenerator,
    pub recovery: RecoveryMap,
    /// Rate of the error-correction jump process, in 1/time.
    pub beta: f64,
    pub rho0: DensityMatrix,
    pub dt: f64,
    pub t_end: f64,
}

impl CtqecRun {
    /// Explicit-stepping stability bound: dt (||L|| + 2 beta) < 1/2, with
    /// ||L|| the generator's Frobenius norm bound.
    pub fn validate(&self) -> Result<()> {
        if self.noise.n() != self.recovery.n() || self.noise.n() != self.rho0.n() {
            return Err(Error::Dimension(format!(
                "noise ({}), recovery ({}), and state ({}) qubit counts disagree",
                self.noise.n(),
                self.recovery.n(),
                self.rho0.n()
            )));
        }
        if self.beta < 0.0 {
            return Err(Error::Domain(format!("correction rate {} must be nonnegative", self.beta)));
        }
        if self.dt <= 0.0 || self.t_end <= 0.0 {
            return Err(Error::Domain("dt and t_end must be positive".into()));
        }
        let stiffness = self.noise.norm_bound() + 2.0 * self.beta;
        if self.dt * stiffness >= 0.5 {
            return Err(Error::Config(format!(
                "step dt = {:.6e} violates the stability bound; require dt < {:.6e}",
                self.dt,
                0.5 / stiffness
            )));
        }
        Ok(())
    }
}

/// Right-hand side of the combined equation, L(rho) + beta (R(rho) - rho).
pub fn rhs(run: &CtqecRun, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dim = run.noise.dim();
    if rho.rows() != dim || rho.cols() != dim {
        return Err(Error::Dimension(format!(
            "state is {}x{}, expected {dim}x{dim}",
            rho.rows(),
            rho.cols()
        )));
    }
    let mut out = run.noise.apply(rho);
    if run.beta > 0.0 {
        let corrected = &run.recovery.apply_to_matrix(rho) - rho;
        out = &out + &corrected.scale(cr(run.beta));
    }
    Ok(out)
}

/// One recorded point of a trajectory.
pub struct TrajectoryPoint {
    pub t: f64,
    pub state: DensityMatrix,
    /// Overlap tr(rho0 rho) with the initial state.
    pub fidelity: f64,
}

fn overlap(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a * b).trace().re
}

/// Integrate the combined equation from 0 to t_end (rounded to a whole
/// number of steps) with the classical fourth-order scheme, recording the
/// codeword fidelity along the way. Trace drift beyond 1e-8 per unit time
/// aborts the run.
pub fn evolve(run: &CtqecRun) -> Result<Vec<TrajectoryPoint>> {
    run.validate()?;
    let steps = libm::round(run.t_end / run.dt).max(1.0) as usize;
    let reference = run.rho0.matrix().clone();
    let mut rho = reference.clone();
    let mut points = Vec::with_capacity(steps + 1);
    points.push(TrajectoryPoint {
        t: 0.0,
        state: run.rho0.clone(),
        fidelity: overlap(&reference, &rho),
    });
    let dt = run.dt;
    for k in 1..=steps {
        let k1 = rhs(run, &rho)?;
        let k2 = rhs(run, &(&rho + &k1.scale(cr(0.5 * dt))))?;
        let k3 = rhs(run, &(&rho + &k2.scale(cr(0.5 * dt))))?;
        let k4 = rhs(run, &(&rho + &k3.scale(cr(dt))))?;
        let increment = &(&k1 + &k4) + &(&k2 + &k3).scale(cr(2.0));
        rho = &rho + &increment.scale(cr(dt / 6.0));

        let t = k as f64 * dt;
        let drift = (rho.trace().re - 1.0).abs();
        if drift > 1e-8 * (1.0 + t) {
            return Err(Error::Validation(format!(
                "trace drifted by {drift:.3e} at t = {t}"
            )));
        }
        points.push(TrajectoryPoint {
            t,
            state: DensityMatrix::from_parts_unchecked(run.rho0.n(), rho.clone()),
            fidelity: overlap(&reference, &rho),
        });
    }
    Ok(points)
}

/// One row of an exact-versus-Pauli-model comparison.
pub struct ComparisonPoint {
    pub t: f64,
    pub fidelity_exact: f64,
    pub fidelity_pta: f64,
    pub gap: f64,
    pub trace_exact: f64,
    pub trace_pta: f64,
}

/// The damping generator extracted from the channel family, replicated on
/// each of three qubits.
pub fn exact_damping_noise(t1: f64) -> Result<LindbladGenerator> {
    let family = lindblad::ChannelFamily::amplitude_damping(t1)?;
    let snap = lindblad::snapshot(&family, 0.1 * t1, lindblad::DEFAULT_FD_STEP * t1)?;
    LindbladGenerator::per_qubit(3, &snap.generator()?)
}

/// The rate generator of the twirled damping channel over one integrator
/// step, replicated on each of three qubits.
pub fn pta_damping_noise(t1: f64, t_step: f64) -> Result<LindbladGenerator> {
    let lambda = lambda_of_time(t_step, t1)?;
    let twirled = twirl_diagonal(&amplitude_damping(lambda)?)?;
    let rates = pta_rates(&twirled, t_step)?;
    let single = LindbladGenerator::from_pta_rates(&rates)?;
    LindbladGenerator::per_qubit(3, &single)
}

/// Run the combined equation twice on the logical |+> codeword, once with
/// the exact damping generator and once with the Pauli-approximated rate
/// generator (rates extracted over the integrator step dt), and pair the
/// fidelity curves.
pub fn compare_noise_models(
    t1: f64,
    beta: f64,
    t_end: f64,
    dt: f64,
) -> Result<Vec<ComparisonPoint>> {
    let recovery = RecoveryMap::three_qubit_bit_flip()?;
    let rho0 = logical_plus();

    let exact_run = CtqecRun {
        noise: exact_damping_noise(t1)?,
        recovery: recovery.clone(),
        beta,
        rho0: rho0.clone(),
        dt,
        t_end,
    };
    let pta_run = CtqecRun {
        noise: pta_damping_noise(t1, dt)?,
        recovery,
        beta,
        rho0,
        dt,
        t_end,
    };
    let exact = evolve(&exact_run)?;
    let pta = evolve(&pta_run)?;

    Ok(exact
        .iter()
        .zip(&pta)
        .map(|(e, p)| ComparisonPoint {
            t: e.t,
            fidelity_exact: e.fidelity,
            fidelity_pta: p.fidelity,
            gap: (e.fidelity - p.fidelity).abs(),
            trace_exact: e.state.matrix().trace().re,
            trace_pta: p.state.matrix().trace().re,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindblad::JumpTerm;
    use crate::numerics::{mat_exp, max_abs_diff};
    use crate::random::random_density_matrix;

    const T1: f64 = 1.0;

    fn x_flip_noise(rate: f64) -> LindbladGenerator {
        let single = LindbladGenerator::new(
            1,
            None,
            vec![JumpTerm { operator: Pauli::X.matrix(), rate }],
        )
        .unwrap();
        LindbladGenerator::per_qubit(3, &single).unwrap()
    }

    #[test]
    fn recovery_fixes_single_bit_flips() {
        let recovery = RecoveryMap::three_qubit_bit_flip().unwrap();
        for codeword in [logical_zero(), logical_plus()] {
            // trivial syndrome leaves code states alone
            let recovered = recovery.apply_to_matrix(codeword.matrix());
            assert!(max_abs_diff(&recovered, codeword.matrix()) < 1e-12);
            // any single X error is undone
            for q in 0..3 {
                let x = lindblad::embed_single_qubit(&Pauli::X.matrix(), q, 3);
                let corrupted = &(&x * codeword.matrix()) * &x;
                let recovered = recovery.apply_to_matrix(&corrupted);
                assert!(
                    max_abs_diff(&recovered, codeword.matrix()) < 1e-12,
                    "flip on qubit {q}"
                );
            }
        }
    }

    #[test]
    fn recovery_is_trace_preserving_and_idempotent() {
        let recovery = RecoveryMap::three_qubit_bit_flip().unwrap();
        for seed in 0..5u64 {
            let rho = random_density_matrix(3, seed).unwrap();
            let once = recovery.apply_to_matrix(rho.matrix());
            assert!((once.trace().re - 1.0).abs() < 1e-12);
            let twice = recovery.apply_to_matrix(&once);
            assert!(max_abs_diff(&twice, &once) < 1e-10);
        }
    }

    #[test]
    fn rhs_limits() {
        let noise = x_flip_noise(1.0 / T1);
        let run = CtqecRun {
            noise,
            recovery: RecoveryMap::three_qubit_bit_flip().unwrap(),
            beta: 0.0,
            rho0: logical_zero(),
            dt: 1e-3,
            t_end: 0.1,
        };
        // beta = 0 reduces to the bare noise generator
        let rho = random_density_matrix(3, 9).unwrap();
        let lhs = rhs(&run, rho.matrix()).unwrap();
        let direct = run.noise.apply(rho.matrix());
        assert!(max_abs_diff(&lhs, &direct) < 1e-14);
        // the derivative is traceless
        assert!(lhs.trace().norm() < 1e-12);

        // code state with no noise sits still
        let still = CtqecRun {
            noise: LindbladGenerator::zero(3),
            recovery: RecoveryMap::three_qubit_bit_flip().unwrap(),
            beta: 5.0,
            rho0: logical_plus(),
            dt: 1e-3,
            t_end: 0.1,
        };
        let derivative = rhs(&still, still.rho0.matrix()).unwrap();
        assert!(derivative.max_abs() < 1e-12);
    }

    #[test]
    fn noise_free_fidelity_stays_at_one() {
        let run = CtqecRun {
            noise: LindbladGenerator::zero(3),
            recovery: RecoveryMap::three_qubit_bit_flip().unwrap(),
            beta: 3.0,
            rho0: logical_plus(),
            dt: 1e-2,
            t_end: 1.0,
        };
        let trajectory = evolve(&run).unwrap();
        for point in &trajectory {
            assert!((point.fidelity - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn single_qubit_flip_noise_matches_rate_equation() {
        // X flips at rate g on one qubit: <0|rho|0> relaxes to 1/2 as
        // (1 + exp(-2 g t))/2
        let g = 0.7;
        let single = LindbladGenerator::new(
            1,
            None,
            vec![JumpTerm { operator: Pauli::X.matrix(), rate: g }],
        )
        .unwrap();
        let run = CtqecRun {
            noise: single,
            recovery: RecoveryMap::identity(1).unwrap(),
            beta: 0.0,
            rho0: DensityMatrix::basis_state(1, 0).unwrap(),
            dt: 1e-3,
            t_end: 1.0,
        };
        let trajectory = evolve(&run).unwrap();
        for point in trajectory.iter().step_by(100) {
            let expected = 0.5 * (1.0 + libm::exp(-2.0 * g * point.t));
            assert!(
                (point.fidelity - expected).abs() < 1e-8,
                "t = {}: {} vs {}",
                point.t,
                point.fidelity,
                expected
            );
        }
        // fidelity decays from 1
        assert!(trajectory.last().unwrap().fidelity < 1.0);
    }

    #[test]
    fn identity_recovery_reduces_to_noise_only() {
        let noise = x_flip_noise(1.0 / T1);
        let with_recovery = CtqecRun {
            noise: noise.clone(),
            recovery: RecoveryMap::identity(3).unwrap(),
            beta: 7.0,
            rho0: logical_plus(),
            dt: 1e-3,
            t_end: 0.3,
        };
        let noise_only = CtqecRun {
            noise,
            recovery: RecoveryMap::identity(3).unwrap(),
            beta: 0.0,
            rho0: logical_plus(),
            dt: 1e-3,
            t_end: 0.3,
        };
        let a = evolve(&with_recovery).unwrap();
        let b = evolve(&noise_only).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!(max_abs_diff(x.state.matrix(), y.state.matrix()) < 1e-10);
        }
    }

    #[test]
    fn evolve_matches_superoperator_exponential() {
        let beta = 1.0 / T1;
        let noise = x_flip_noise(1.0 / T1);
        let recovery = RecoveryMap::three_qubit_bit_flip().unwrap();
        let run = CtqecRun {
            noise: noise.clone(),
            recovery: recovery.clone(),
            beta,
            rho0: logical_plus(),
            dt: 1e-3,
            t_end: T1,
        };
        let trajectory = evolve(&run).unwrap();
        let end = trajectory.last().unwrap();

        // formal solution exp((L + beta (R - id)) t) applied to vec(rho0)
        let dim2 = 64;
        let combined = &noise.superoperator()
            + &(&recovery.channel().superoperator() - &ComplexMatrix::identity(dim2))
                .scale(cr(beta));
        let propagator = mat_exp(&combined.scale(cr(T1))).unwrap();
        let final_vec = propagator.mul_vec(run.rho0.matrix().data());
        let mut defect = 0.0f64;
        for (idx, z) in final_vec.iter().enumerate() {
            defect = defect.max((z - end.state.matrix().get(idx / 8, idx % 8)).norm());
        }
        assert!(defect < 1e-6, "defect {defect}");
    }

    #[test]
    fn trajectory_preserves_trace_and_hermiticity() {
        let run = CtqecRun {
            noise: x_flip_noise(1.0 / T1),
            recovery: RecoveryMap::three_qubit_bit_flip().unwrap(),
            beta: 2.0,
            rho0: logical_plus(),
            dt: 1e-3,
            t_end: T1,
        };
        for point in evolve(&run).unwrap().iter().step_by(50) {
            assert!((point.state.matrix().trace().re - 1.0).abs() < 1e-8);
            assert!(point.state.matrix().is_hermitian(1e-9));
        }
    }

    #[test]
    fn stronger_correction_freezes_the_state() {
        let mut last_fidelity = -1.0;
        for beta in [0.0, 1.0, 10.0, 100.0] {
            let run = CtqecRun {
                noise: x_flip_noise(1.0 / T1),
                recovery: RecoveryMap::three_qubit_bit_flip().unwrap(),
                beta: beta / T1,
                rho0: logical_zero(),
                dt: 1e-3,
                t_end: T1,
            };
            let fidelity = evolve(&run).unwrap().last().unwrap().fidelity;
            assert!(fidelity > last_fidelity, "beta = {beta}: {fidelity} vs {last_fidelity}");
            last_fidelity = fidelity;
        }
    }

    #[test]
    fn halving_dt_is_converged() {
        let make_run = |dt: f64| CtqecRun {
            noise: x_flip_noise(1.0 / T1),
            recovery: RecoveryMap::three_qubit_bit_flip().unwrap(),
            beta: 1.0 / T1,
            rho0: logical_plus(),
            dt,
            t_end: 0.5 * T1,
        };
        let coarse = evolve(&make_run(1e-3)).unwrap().last().unwrap().fidelity;
        let fine = evolve(&make_run(5e-4)).unwrap().last().unwrap().fidelity;
        assert!((coarse - fine).abs() < 1e-6);
    }

    #[test]
    fn stability_bound_is_enforced() {
        let run = CtqecRun {
            noise: x_flip_noise(1.0 / T1),
            recovery: RecoveryMap::three_qubit_bit_flip().unwrap(),
            beta: 100.0 / T1,
            rho0: logical_zero(),
            dt: 0.01,
            t_end: T1,
        };
        assert!(matches!(evolve(&run), Err(Error::Config(_))));
    }

    #[test]
    fn model_comparison_shows_a_gap_that_vanishes_at_the_origin() {
        let rows = compare_noise_models(T1, 1.0 / T1, T1, 1e-3).unwrap();
        assert_eq!(rows[0].gap, 0.0);
        let early = &rows[1];
        let late = rows.last().unwrap();
        assert!(late.gap > 1e-6, "models should genuinely differ at t = T1");
        assert!(early.gap < 0.05 * late.gap);
        // beta = 0 comparison also differs
        let free = compare_noise_models(T1, 0.0, T1, 1e-3).unwrap();
        assert!(free.last().unwrap().gap > 1e-6);
    }
}
