use alloc::vec::Vec;

use num_complex::Complex64;

use super::basis::{pauli, QuditEmbedding};
use super::matrix::{kron, ComplexMatrix};
use crate::error::{Error, Result};

/// Pauli labels `(i, j, k)` of `σi⊗σj⊗σk`, each in `0..4`.
pub type Triple = [u8; 3];

/// Flat position of a triple in a 64-entry coefficient table.
pub const fn triple_index(t: Triple) -> usize {
    (t[0] as usize) * 16 + (t[1] as usize) * 4 + t[2] as usize
}

/// Parses `"333"`-style labels.
pub fn parse_triple(s: &str) -> Option<Triple> {
    let b = s.as_bytes();
    if b.len() != 3 || b.iter().any(|c| !(b'0'..=b'3').contains(c)) {
        return None;
    }
    Some([b[0] - b'0', b[1] - b'0', b[2] - b'0'])
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliTerm {
    pub coeff: f64,
    pub ops: Triple,
}

/// Real linear combination `Σ c_t σ_{t0}⊗σ_{t1}⊗T(t2)`, with the third
/// factor taken through a qudit embedding.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    terms: Vec<PauliTerm>,
    embedding: QuditEmbedding,
}

impl PauliSum {
    pub fn new(embedding: QuditEmbedding) -> Self {
        Self { terms: Vec::new(), embedding }
    }

    pub fn qubits() -> Self {
        Self::new(QuditEmbedding::qubit())
    }

    /// Adds `coeff·O_t`, merging with an existing term on the same triple.
    /// Zero coefficients are dropped.
    pub fn add(&mut self, coeff: f64, ops: Triple) -> &mut Self {
        if let Some(t) = self.terms.iter_mut().find(|t| t.ops == ops) {
            t.coeff += coeff;
        } else if coeff != 0.0 {
            self.terms.push(PauliTerm { coeff, ops });
        }
        self
    }

    pub fn with(mut self, coeff: f64, ops: Triple) -> Self {
        self.add(coeff, ops);
        self
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn embedding(&self) -> QuditEmbedding {
        self.embedding
    }

    pub fn set_embedding(&mut self, embedding: QuditEmbedding) {
        self.embedding = embedding;
    }

    pub fn coeff(&self, ops: Triple) -> f64 {
        self.terms.iter().filter(|t| t.ops == ops).map(|t| t.coeff).sum()
    }

    /// Dense operator on `2·2·d`.
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let dim = 4 * self.embedding.d;
        let mut out = ComplexMatrix::zeros(dim);
        for t in &self.terms {
            let op = kron(
                &kron(&pauli(t.ops[0] as usize)?, &pauli(t.ops[1] as usize)?),
                &self.embedding.third_factor(t.ops[2] as usize)?,
            );
            out = &out + &op.scale_real(t.coeff);
        }
        Ok(out)
    }

    /// `(M⊗I⊗I) W (M†⊗I⊗I)` for `M = diag(1, i)`, carried out on labels:
    /// `σx → σy`, `σy → −σx` on the first party.
    pub fn conjugate_first_by_phase_gate(&self) -> Self {
        let mut out = Self::new(self.embedding);
        for t in &self.terms {
            let (coeff, first) = match t.ops[0] {
                1 => (t.coeff, 2),
                2 => (-t.coeff, 1),
                o => (t.coeff, o),
            };
            out.add(coeff, [first, t.ops[1], t.ops[2]]);
        }
        out
    }

    /// `Tr(Wρ)` from a table of expectation values `r_t = Tr(ρ O_t)`,
    /// indexed by [`triple_index`] (identity entry read as given).
    pub fn expectation(&self, coeffs: &[f64; 64]) -> f64 {
        self.terms.iter().map(|t| t.coeff * coeffs[triple_index(t.ops)]).sum()
    }

    /// `⟨s|W|s⟩` on a product state, from the per-party expectation tuples
    /// `(1, ⟨T1⟩, ⟨T2⟩, ⟨T3⟩)`.
    pub fn product_expectation(&self, local: &[[f64; 4]; 3]) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coeff * local[0][t.ops[0] as usize] * local[1][t.ops[1] as usize] * local[2][t.ops[2] as usize])
            .sum()
    }

    /// Expands an `8×8` operator in the Pauli basis, `c_t = Tr(O_t m)/8`.
    /// Imaginary parts above `tol` mean `m` was not Hermitian.
    pub fn decompose_qubits(m: &ComplexMatrix, tol: f64) -> Result<Self> {
        if m.dim() != 8 {
            return Err(Error::DimensionMismatch { expected: 8, actual: m.dim() });
        }
        let mut out = Self::qubits();
        for idx in 0..64u8 {
            let ops = [idx / 16, (idx / 4) % 4, idx % 4];
            let o = super::basis::pauli_op(ops[0] as usize, ops[1] as usize, ops[2] as usize)?;
            let c: Complex64 = super::matrix::trace_product(&o, m) / 8.0;
            if c.im.abs() > tol {
                return Err(Error::NotHermitian(c.im.abs()));
            }
            if c.re.abs() > tol {
                out.add(c.re, ops);
            }
        }
        Ok(out)
    }
}

/// `Tr(ρ·σi⊗σj⊗T(k))` without materializing the operator. `rho` must be
/// `4d×4d` for the embedding's `d`.
pub fn triple_expectation(rho: &ComplexMatrix, embedding: &QuditEmbedding, ops: Triple) -> Result<Complex64> {
    let d = embedding.d;
    if rho.dim() != 4 * d {
        return Err(Error::DimensionMismatch { expected: 4 * d, actual: rho.dim() });
    }
    let a = pauli(ops[0] as usize)?;
    let b = pauli(ops[1] as usize)?;
    let c = embedding.third_factor(ops[2] as usize)?;
    let nz = |m: &ComplexMatrix| {
        let n = m.dim();
        let mut out = Vec::new();
        for r in 0..n {
            for col in 0..n {
                let v = m[(r, col)];
                if v != Complex64::new(0.0, 0.0) {
                    out.push((r, col, v));
                }
            }
        }
        out
    };
    let (na, nb, nc) = (nz(&a), nz(&b), nz(&c));
    // Tr(ρ Q) = Σ ρ[x, y] Q[y, x]
    let mut acc = Complex64::new(0.0, 0.0);
    for &(ia, ja, va) in &na {
        for &(ib, jb, vb) in &nb {
            let vab = va * vb;
            for &(ic, jc, vc) in &nc {
                let row = ja * 2 * d + jb * d + jc;
                let col = ia * 2 * d + ib * d + ic;
                acc += rho[(row, col)] * vab * vc;
            }
        }
    }
    Ok(acc)
}
