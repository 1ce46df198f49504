use alloc::vec::Vec;

use num_complex::Complex64;

use super::matrix::{kron, ComplexMatrix};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// `σ0 = I₂, σ1 = σx, σ2 = σy, σ3 = σz`.
pub fn pauli(i: usize) -> Result<ComplexMatrix> {
    let entries = match i {
        0 => [ONE, ZERO, ZERO, ONE],
        1 => [ZERO, ONE, ONE, ZERO],
        2 => [ZERO, -I, I, ZERO],
        3 => [ONE, ZERO, ZERO, -ONE],
        _ => return Err(Error::IndexOutOfRange { index: i, bound: 4 }),
    };
    ComplexMatrix::from_row_major(2, entries.to_vec())
}

/// `O_ijk = σi⊗σj⊗σk`.
pub fn pauli_op(i: usize, j: usize, k: usize) -> Result<ComplexMatrix> {
    Ok(kron(&kron(&pauli(i)?, &pauli(j)?), &pauli(k)?))
}

/// `M = diag(1, i)`; conjugation sends σx → σy, σy → −σx, σz → σz.
pub fn phase_gate() -> ComplexMatrix {
    ComplexMatrix::from_row_major(2, alloc::vec![ONE, ZERO, ZERO, I]).expect("2x2")
}

/// `E_ij`: one at `(i, j)`, zero elsewhere.
pub fn unit_matrix(d: usize, i: usize, j: usize) -> Result<ComplexMatrix> {
    for idx in [i, j] {
        if idx >= d {
            return Err(Error::IndexOutOfRange { index: idx, bound: d });
        }
    }
    let mut m = ComplexMatrix::zeros(d);
    m[(i, j)] = ONE;
    Ok(m)
}

/// The eight Gell-Mann matrices `Λ1..Λ8` of SU(3).
pub fn gellmann_su3(a: usize) -> Result<ComplexMatrix> {
    let mut m = ComplexMatrix::zeros(3);
    let (p, q) = match a {
        1 | 2 => (0, 1),
        4 | 5 => (0, 2),
        6 | 7 => (1, 2),
        3 => {
            m[(0, 0)] = ONE;
            m[(1, 1)] = -ONE;
            return Ok(m);
        }
        8 => {
            let s = 1.0 / libm::sqrt(3.0);
            m[(0, 0)] = Complex64::new(s, 0.0);
            m[(1, 1)] = Complex64::new(s, 0.0);
            m[(2, 2)] = Complex64::new(-2.0 * s, 0.0);
            return Ok(m);
        }
        _ => return Err(Error::IndexOutOfRange { index: a, bound: 9 }),
    };
    if matches!(a, 1 | 4 | 6) {
        m[(p, q)] = ONE;
        m[(q, p)] = ONE;
    } else {
        m[(p, q)] = -I;
        m[(q, p)] = I;
    }
    Ok(m)
}

/// Hermitian traceless basis of `d×d` matrices: the off-diagonal
/// `λ⁺_{αβ} = (E_αβ + E_βα)/√2`, `λ⁻_{αβ} = (E_αβ − E_βα)/(i√2)` for
/// `α < β`, and the diagonal `λ_i = √(2/((i+1)(i+2)))·diag(1,…,1,−(i+1),0,…)`
/// for `i = 0..d−2`.
#[derive(Clone, Debug)]
pub struct GellMannBasis {
    d: usize,
    plus: Vec<((usize, usize), ComplexMatrix)>,
    minus: Vec<((usize, usize), ComplexMatrix)>,
    diag: Vec<ComplexMatrix>,
}

impl GellMannBasis {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidParameter(alloc::format!("qudit dimension {d} < 2")));
        }
        let inv_sqrt2 = core::f64::consts::FRAC_1_SQRT_2;
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for alpha in 0..d {
            for beta in alpha + 1..d {
                let mut p = ComplexMatrix::zeros(d);
                p[(alpha, beta)] = Complex64::new(inv_sqrt2, 0.0);
                p[(beta, alpha)] = Complex64::new(inv_sqrt2, 0.0);
                plus.push(((alpha, beta), p));
                let mut m = ComplexMatrix::zeros(d);
                m[(alpha, beta)] = Complex64::new(0.0, -inv_sqrt2);
                m[(beta, alpha)] = Complex64::new(0.0, inv_sqrt2);
                minus.push(((alpha, beta), m));
            }
        }
        let diag = (0..d - 1)
            .map(|i| {
                let norm = libm::sqrt(2.0 / ((i + 1) * (i + 2)) as f64);
                let mut m = ComplexMatrix::zeros(d);
                for k in 0..=i {
                    m[(k, k)] = Complex64::new(norm, 0.0);
                }
                m[(i + 1, i + 1)] = Complex64::new(-((i + 1) as f64) * norm, 0.0);
                m
            })
            .collect();
        Ok(Self { d, plus, minus, diag })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    fn pair_index(&self, alpha: usize, beta: usize) -> Result<usize> {
        if alpha >= beta || beta >= self.d {
            return Err(Error::InvalidParameter(alloc::format!(
                "need 0 <= alpha < beta < {}, got ({alpha}, {beta})",
                self.d
            )));
        }
        Ok(self.plus.iter().position(|(ab, _)| *ab == (alpha, beta)).expect("pair enumerated"))
    }

    pub fn lambda_plus(&self, alpha: usize, beta: usize) -> Result<&ComplexMatrix> {
        self.pair_index(alpha, beta).map(|i| &self.plus[i].1)
    }

    pub fn lambda_minus(&self, alpha: usize, beta: usize) -> Result<&ComplexMatrix> {
        self.pair_index(alpha, beta).map(|i| &self.minus[i].1)
    }

    /// Diagonal generator `λ_i`, `0 ≤ i ≤ d−2`.
    pub fn lambda_diag(&self, i: usize) -> Result<&ComplexMatrix> {
        self.diag.get(i).ok_or(Error::IndexOutOfRange { index: i, bound: self.d - 1 })
    }

    /// All `d² − 1` generators: symmetric, antisymmetric, then diagonal.
    pub fn generators(&self) -> impl Iterator<Item = &ComplexMatrix> {
        self.plus.iter().map(|(_, m)| m).chain(self.minus.iter().map(|(_, m)| m)).chain(self.diag.iter())
    }
}

/// Which two levels of the third party play the role of a qubit.
///
/// Under the substitution `I₂ → I_d`, `σx → √2λ⁺_{αβ}`, `σy → √2λ⁻_{αβ}`
/// and `σz → E_αα − E_ββ`, every three-qubit witness becomes a
/// `2⊗2⊗d` witness. `d = 2, α = 0, β = 1` is the identity substitution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuditEmbedding {
    pub d: usize,
    pub alpha: usize,
    pub beta: usize,
}

impl QuditEmbedding {
    pub fn new(d: usize, alpha: usize, beta: usize) -> Result<Self> {
        if d < 2 || alpha >= beta || beta >= d {
            return Err(Error::InvalidParameter(alloc::format!(
                "qudit embedding needs d >= 2 and 0 <= alpha < beta < d, got d={d}, alpha={alpha}, beta={beta}"
            )));
        }
        Ok(Self { d, alpha, beta })
    }

    pub const fn qubit() -> Self {
        Self { d: 2, alpha: 0, beta: 1 }
    }

    pub fn is_qubit(&self) -> bool {
        *self == Self::qubit()
    }

    /// All `d(d−1)/2` embeddings for a given dimension.
    pub fn all_pairs(d: usize) -> Vec<Self> {
        let mut out = Vec::new();
        for alpha in 0..d {
            for beta in alpha + 1..d {
                out.push(Self { d, alpha, beta });
            }
        }
        out
    }

    /// The single-party operator replacing `σk` on the third party.
    /// Entries are exact (0, ±1, ±i).
    pub fn third_factor(&self, k: usize) -> Result<ComplexMatrix> {
        let (d, a, b) = (self.d, self.alpha, self.beta);
        let mut m = ComplexMatrix::zeros(d);
        match k {
            0 => return Ok(ComplexMatrix::identity(d)),
            1 => {
                m[(a, b)] = ONE;
                m[(b, a)] = ONE;
            }
            2 => {
                m[(a, b)] = -I;
                m[(b, a)] = I;
            }
            3 => {
                m[(a, a)] = ONE;
                m[(b, b)] = -ONE;
            }
            _ => return Err(Error::IndexOutOfRange { index: k, bound: 4 }),
        }
        Ok(m)
    }

    /// `(⟨ξ|T(k)|ξ⟩)_{k=0..3}` for a normalized qudit vector `ξ`.
    pub fn local_expectations(&self, xi: &[Complex64]) -> [f64; 4] {
        let (za, zb) = (xi[self.alpha], xi[self.beta]);
        let cross = za.conj() * zb;
        [xi.iter().map(|z| z.norm_sqr()).sum(), 2.0 * cross.re, 2.0 * cross.im, za.norm_sqr() - zb.norm_sqr()]
    }
}

/// `σi⊗σj⊗T(k)` on `2⊗2⊗d`.
pub fn qudit_substitute(triple: [usize; 3], d: usize, alpha: usize, beta: usize) -> Result<ComplexMatrix> {
    let emb = QuditEmbedding::new(d, alpha, beta)?;
    Ok(kron(&kron(&pauli(triple[0])?, &pauli(triple[1])?), &emb.third_factor(triple[2])?))
}
