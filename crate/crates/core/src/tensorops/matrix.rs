use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Square dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &x) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(x, 0.0);
        }
        m
    }

    /// Builds a matrix from a row-major slice of length `dim²`.
    pub fn from_row_major(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, actual: data.len() });
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&x| x * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&x| x * s).collect() }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn diagonal_real(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self[(i, i)].re).collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff on matrices of different dimension");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Largest `|M_ij - conj(M_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// `⟨v|M|v⟩`.
    pub fn quadratic_form(&self, v: &[Complex64]) -> Complex64 {
        assert_eq!(v.len(), self.dim);
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, vi) in v.iter().enumerate() {
            let row: Complex64 = self.row(i).iter().zip(v).map(|(a, b)| a * b).sum();
            acc += vi.conj() * row;
        }
        acc
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product of mismatched dimensions");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

/// Kronecker product: `(A⊗B)[i·nB + k, j·nB + l] = A[i,j]·B[k,l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let nb = b.dim;
    ComplexMatrix::from_fn(a.dim * nb, |r, c| a[(r / nb, c / nb)] * b[(r % nb, c % nb)])
}

/// `Tr(A·B)` without forming the product.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    assert_eq!(a.dim, b.dim);
    let n = a.dim;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a.data[i * n + j] * b.data[j * n + i];
        }
    }
    acc
}

/// Local dimensions of a tripartite `d1⊗d2⊗d3` system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TripartiteDims {
    pub d1: usize,
    pub d2: usize,
    pub d3: usize,
}

impl TripartiteDims {
    /// Two qubits followed by a `d3`-level system.
    pub fn qubits_with(d3: usize) -> Self {
        Self { d1: 2, d2: 2, d3 }
    }

    pub fn three_qubits() -> Self {
        Self::qubits_with(2)
    }

    pub fn total(&self) -> usize {
        self.d1 * self.d2 * self.d3
    }

    pub fn flat(&self, i: usize, j: usize, k: usize) -> usize {
        i * self.d2 * self.d3 + j * self.d3 + k
    }

    pub fn split(&self, flat: usize) -> [usize; 3] {
        [flat / (self.d2 * self.d3), (flat / self.d3) % self.d2, flat % self.d3]
    }

    fn local(&self) -> [usize; 3] {
        [self.d1, self.d2, self.d3]
    }
}

/// A subset of the parties {1, 2, 3}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Parties(u8);

impl Parties {
    pub const EMPTY: Parties = Parties(0);
    pub const ALL: Parties = Parties(0b111);

    /// The six nontrivial bipartitions checked by the PPT test:
    /// {1}, {2}, {3}, {1,2}, {1,3}, {2,3}.
    pub const PPT_CUTS: [Parties; 6] =
        [Parties(0b001), Parties(0b010), Parties(0b100), Parties(0b011), Parties(0b101), Parties(0b110)];

    pub fn single(party: usize) -> Result<Self> {
        Self::from_slice(&[party])
    }

    pub fn from_slice(parties: &[usize]) -> Result<Self> {
        let mut bits = 0u8;
        for &p in parties {
            if !(1..=3).contains(&p) {
                return Err(Error::IndexOutOfRange { index: p, bound: 4 });
            }
            bits |= 1 << (p - 1);
        }
        Ok(Parties(bits))
    }

    pub fn contains(&self, party: usize) -> bool {
        (1..=3).contains(&party) && self.0 & (1 << (party - 1)) != 0
    }

    pub fn union(self, other: Parties) -> Parties {
        Parties(self.0 | other.0)
    }

    pub fn is_disjoint(self, other: Parties) -> bool {
        self.0 & other.0 == 0
    }

    /// Party labels as a compact string, e.g. `"13"`.
    pub fn label(&self) -> alloc::string::String {
        (1..=3).filter(|&p| self.contains(p)).map(|p| char::from(b'0' + p as u8)).collect()
    }
}

/// Transposes the tensor factors named in `parties`.
pub fn partial_transpose(m: &ComplexMatrix, dims: TripartiteDims, parties: Parties) -> Result<ComplexMatrix> {
    let n = dims.total();
    if m.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: m.dim() });
    }
    let local = dims.local();
    let mut out = ComplexMatrix::zeros(n);
    for row in 0..n {
        let ri = dims.split(row);
        for col in 0..n {
            let ci = dims.split(col);
            let (mut a, mut b) = (ri, ci);
            for p in 0..3 {
                if parties.contains(p + 1) {
                    core::mem::swap(&mut a[p], &mut b[p]);
                }
            }
            debug_assert!(a.iter().zip(&local).all(|(x, d)| x < d));
            out[(dims.flat(a[0], a[1], a[2]), dims.flat(b[0], b[1], b[2]))] = m[(row, col)];
        }
    }
    Ok(out)
}
