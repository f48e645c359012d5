//! n-qubit Pauli strings, their dense matrix realizations, and the two
//! operator bases used by the channel machinery: the Hermitian orthonormal
//! basis G_a (normalized Pauli strings) and the outer-product basis
//! tau_e = |e1><e2| over the computational basis.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;
use core::str::FromStr;

use crate::numerics::{c, cr, kron, ComplexMatrix, C64};
use crate::{Error, Result, MAX_QUBITS};

/// Single-qubit Pauli operator label.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    /// Base-4 digit: I -> 0, X -> 1, Y -> 2, Z -> 3.
    pub fn index(self) -> usize {
        match self {
            Pauli::I => 0,
            Pauli::X => 1,
            Pauli::Y => 2,
            Pauli::Z => 3,
        }
    }

    pub fn from_index(index: usize) -> Result<Self> {
        Pauli::ALL
            .get(index)
            .copied()
            .ok_or_else(|| Error::Domain(format!("Pauli index {index} not in 0..4")))
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(ch: char) -> Result<Self> {
        match ch {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => Err(Error::Domain(format!("invalid Pauli letter '{other}'"))),
        }
    }

    /// The 2x2 defining matrix.
    pub fn matrix(self) -> ComplexMatrix {
        match self {
            Pauli::I => ComplexMatrix::identity(2),
            Pauli::X => ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]),
            Pauli::Y => {
                let mut m = ComplexMatrix::zeros(2, 2);
                m.set(0, 1, c(0.0, -1.0));
                m.set(1, 0, c(0.0, 1.0));
                m
            }
            Pauli::Z => ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]),
        }
    }
}

/// An n-qubit tensor-product label over {I, X, Y, Z}. The leftmost letter is
/// the most significant both in the text form and in the base-4 index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliString {
    letters: Vec<Pauli>,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::Domain("a Pauli string needs at least one letter".into()));
        }
        Ok(Self { letters })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(vec![Pauli::I; n])
    }

    pub fn num_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    /// Base-4 encoding, a bijection onto 0..4^n.
    pub fn index(&self) -> usize {
        self.letters.iter().fold(0, |acc, p| acc * 4 + p.index())
    }

    pub fn from_index(n: usize, index: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("qubit count must be positive".into()));
        }
        let size = 4usize.pow(n as u32);
        if index >= size {
            return Err(Error::Domain(format!("index {index} not in 0..{size}")));
        }
        let mut letters = vec![Pauli::I; n];
        let mut rest = index;
        for slot in (0..n).rev() {
            letters[slot] = Pauli::from_index(rest % 4)?;
            rest /= 4;
        }
        Self::new(letters)
    }

    /// All 4^n strings on n qubits in index order.
    pub fn all(n: usize) -> Result<Vec<PauliString>> {
        if n == 0 {
            return Err(Error::Domain("qubit count must be positive".into()));
        }
        (0..4usize.pow(n as u32)).map(|i| Self::from_index(n, i)).collect()
    }

    /// Unnormalized 2^n x 2^n tensor-product matrix.
    pub fn matrix(&self) -> ComplexMatrix {
        let mut out = self.letters[0].matrix();
        for p in &self.letters[1..] {
            out = kron(&out, &p.matrix());
        }
        out
    }

    /// Pauli strings commute iff an even number of positions hold distinct
    /// non-identity letters.
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        assert_eq!(self.num_qubits(), other.num_qubits(), "qubit count mismatch");
        let anticommuting = self
            .letters
            .iter()
            .zip(&other.letters)
            .filter(|(a, b)| **a != Pauli::I && **b != Pauli::I && a != b)
            .count();
        anticommuting % 2 == 0
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.letters {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters: Result<Vec<Pauli>> = s.chars().map(Pauli::from_char).collect();
        Self::new(letters?)
    }
}

fn check_qubit_count(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::Capacity(format!(
            "qubit count {n} outside supported range 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

/// Hermitian orthonormal operator basis G_a = P_a / sqrt(2^n) in Pauli index
/// order, satisfying tr(G_a G_b) = delta_ab.
pub struct HermitianBasis {
    n: usize,
    elements: Vec<ComplexMatrix>,
}

impl HermitianBasis {
    pub fn new(n: usize) -> Result<Self> {
        check_qubit_count(n)?;
        let scale = cr(1.0 / libm::sqrt((1usize << n) as f64));
        let elements = PauliString::all(n)?
            .iter()
            .map(|p| p.matrix().scale(scale))
            .collect();
        Ok(Self { n, elements })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Hilbert-space dimension 2^n.
    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// Basis size 4^n.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn element(&self, a: usize) -> &ComplexMatrix {
        &self.elements[a]
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    /// Expansion coefficients r_a = tr(G_a M) of an operator in this basis.
    pub fn expand(&self, m: &ComplexMatrix) -> Vec<C64> {
        self.elements.iter().map(|g| (g * m).trace()).collect()
    }

    /// Rebuild an operator from expansion coefficients.
    pub fn synthesize(&self, coeffs: &[C64]) -> ComplexMatrix {
        assert_eq!(coeffs.len(), self.len(), "coefficient count mismatch");
        let mut out = ComplexMatrix::zeros(self.dim(), self.dim());
        for (g, &r) in self.elements.iter().zip(coeffs) {
            out = &out + &g.scale(r);
        }
        out
    }
}

/// Orthonormal non-Hermitian operator basis of outer products
/// tau_e = |e1><e2| with the ordered-pair index e = e1 * 2^n + e2.
pub struct TauBasis {
    n: usize,
    elements: Vec<ComplexMatrix>,
}

impl TauBasis {
    pub fn new(n: usize) -> Result<Self> {
        check_qubit_count(n)?;
        let dim = 1usize << n;
        let mut elements = Vec::with_capacity(dim * dim);
        for e1 in 0..dim {
            for e2 in 0..dim {
                let mut m = ComplexMatrix::zeros(dim, dim);
                m.set(e1, e2, C64::ONE);
                elements.push(m);
            }
        }
        Ok(Self { n, elements })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn element(&self, e: usize) -> &ComplexMatrix {
        &self.elements[e]
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    /// The (e1, e2) pair encoded by a basis index.
    pub fn pair(&self, e: usize) -> (usize, usize) {
        let dim = self.dim();
        (e / dim, e % dim)
    }
}

/// Text form of the index order, e.g. ["II", "IX", ...] for n = 2.
pub fn index_order_labels(n: usize) -> Result<Vec<String>> {
    Ok(PauliString::all(n)?.iter().map(|p| format!("{p}")).collect())
}
