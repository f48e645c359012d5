//! Seeded random inputs for property tests: Haar-random CPTP channels by
//! Stinespring dilation at fixed Kraus rank, random density matrices, and
//! random Hermitian matrices. Deterministic across platforms; not
//! cryptographic.

use alloc::vec::Vec;

use crate::channel::{DensityMatrix, KrausChannel};
use crate::numerics::{c, cr, ComplexMatrix, C64};
use crate::{Error, Result};

/// SplitMix64 generator.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
    spare_gaussian: Option<f64>,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed, spare_gaussian: None }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1) with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via Box-Muller.
    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(g) = self.spare_gaussian.take() {
            return g;
        }
        let mut u1 = self.next_f64();
        if u1 <= 0.0 {
            u1 = f64::MIN_POSITIVE;
        }
        let u2 = self.next_f64();
        let radius = libm::sqrt(-2.0 * libm::log(u1));
        let angle = 2.0 * core::f64::consts::PI * u2;
        self.spare_gaussian = Some(radius * libm::sin(angle));
        radius * libm::cos(angle)
    }

    fn next_complex_gaussian(&mut self) -> C64 {
        c(self.next_gaussian(), self.next_gaussian())
    }
}

fn gaussian_matrix(rng: &mut SplitMix64, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| rng.next_complex_gaussian())
}

/// Orthonormalize the columns in place by twice-iterated Gram-Schmidt.
fn orthonormalize_columns(m: &mut ComplexMatrix) -> Result<()> {
    let (rows, cols) = (m.rows(), m.cols());
    for j in 0..cols {
        for _ in 0..2 {
            for k in 0..j {
                let mut overlap = C64::ZERO;
                for r in 0..rows {
                    overlap += m.get(r, k).conj() * m.get(r, j);
                }
                for r in 0..rows {
                    let v = m.get(r, j) - overlap * m.get(r, k);
                    m.set(r, j, v);
                }
            }
        }
        let norm: f64 = libm::sqrt((0..rows).map(|r| m.get(r, j).norm_sqr()).sum());
        if norm < 1e-12 {
            return Err(Error::Validation(
                "degenerate random draw produced linearly dependent columns".into(),
            ));
        }
        for r in 0..rows {
            let v = m.get(r, j) * cr(1.0 / norm);
            m.set(r, j, v);
        }
    }
    Ok(())
}

/// Haar-random trace-preserving channel at the given Kraus rank, built by
/// slicing a random isometry into Kraus blocks.
pub fn haar_random_channel(n: usize, kraus_rank: usize, seed: u64) -> Result<KrausChannel> {
    if kraus_rank == 0 {
        return Err(Error::Domain("Kraus rank must be positive".into()));
    }
    let dim = 1usize << n;
    let mut rng = SplitMix64::new(seed);
    let mut isometry = gaussian_matrix(&mut rng, kraus_rank * dim, dim);
    orthonormalize_columns(&mut isometry)?;
    let kraus: Vec<ComplexMatrix> = (0..kraus_rank)
        .map(|m| ComplexMatrix::from_fn(dim, dim, |r, col| isometry.get(m * dim + r, col)))
        .collect();
    KrausChannel::new(n, kraus, true)
}

/// Random full-rank density matrix (Wishart-normalized).
pub fn random_density_matrix(n: usize, seed: u64) -> Result<DensityMatrix> {
    let dim = 1usize << n;
    let mut rng = SplitMix64::new(seed);
    let g = gaussian_matrix(&mut rng, dim, dim);
    let w = &g * &g.adjoint();
    let trace = w.trace().re;
    DensityMatrix::new(n, w.scale(cr(1.0 / trace)))
}

/// Random Hermitian matrix with O(1) entries.
pub fn random_hermitian(dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = SplitMix64::new(seed);
    let g = gaussian_matrix(&mut rng, dim, dim);
    (&g + &g.adjoint()).scale(cr(0.5))
}
