//! Chessboard density matrices on `2⊗2⊗2` and `2⊗2⊗d`, their Pauli
//! expansion coefficients, and the PPT check.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensorops::{
    min_eigenvalue, partial_transpose, triple_expectation, triple_index, ComplexMatrix, Parties, QuditEmbedding,
    TripartiteDims, Triple,
};

/// Default tolerance on partial-transpose eigenvalues.
pub const PPT_TOL: f64 = 1e-10;
/// Assembled states with an eigenvalue below `-PSD_TOL` are rejected.
pub const PSD_TOL: f64 = 1e-12;

/// The fifteen non-identity triples that appear in the expansion of a
/// chessboard state.
pub const LISTED_TRIPLES: [Triple; 15] = [
    [1, 1, 1],
    [1, 1, 2],
    [1, 2, 1],
    [2, 1, 1],
    [1, 2, 2],
    [2, 1, 2],
    [2, 2, 1],
    [2, 2, 2],
    [3, 0, 0],
    [0, 3, 0],
    [0, 0, 3],
    [3, 3, 0],
    [3, 0, 3],
    [0, 3, 3],
    [3, 3, 3],
];

fn check_coupling(r: f64, phi: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::InvalidParameter(format!("coupling modulus {r} outside [0, 1]")));
    }
    if !phi.is_finite() {
        return Err(Error::InvalidParameter(format!("phase {phi} is not finite")));
    }
    Ok(())
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::InvalidParameter(format!("{name} = {x} must be positive and finite")));
    }
    Ok(())
}

/// Parameters of the three-qubit chessboard state: diagonal `a, b, c, d`
/// (with partners `1/d, 1/c, 1/b, 1/a`) and the four anti-diagonal
/// couplings `r_j e^{iφ_j}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChessParams222 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub r: [f64; 4],
    pub phi: [f64; 4],
}

impl ChessParams222 {
    pub fn new(a: f64, b: f64, c: f64, d: f64, r: [f64; 4], phi: [f64; 4]) -> Result<Self> {
        let p = Self { a, b, c, d, r, phi };
        p.validate()?;
        Ok(p)
    }

    /// `a = b = c = d = 1`, no couplings.
    pub fn maximally_mixed() -> Self {
        Self { a: 1.0, b: 1.0, c: 1.0, d: 1.0, r: [0.0; 4], phi: [0.0; 4] }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, x) in [("a", self.a), ("b", self.b), ("c", self.c), ("d", self.d)] {
            check_positive(name, x)?;
        }
        for j in 0..4 {
            check_coupling(self.r[j], self.phi[j])?;
        }
        Ok(())
    }

    /// `n = a + b + c + d + 1/a + 1/b + 1/c + 1/d`.
    pub fn norm(&self) -> f64 {
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        a + b + c + d + 1.0 / a + 1.0 / b + 1.0 / c + 1.0 / d
    }

    /// Unnormalized diagonal in flat-index order.
    pub fn raw_diagonal(&self) -> [f64; 8] {
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        [a, b, c, d, 1.0 / d, 1.0 / c, 1.0 / b, 1.0 / a]
    }

    /// The `2⊗2⊗d` parameters that reproduce this state at `d = 2`.
    pub fn to_22d(&self) -> ChessParams22d {
        let c = |j: usize| Coupling { r: self.r[j], phi: self.phi[j] };
        ChessParams22d {
            d: 2,
            alpha: 0,
            beta: 1,
            gamma: 0,
            diag: [alloc::vec![self.a, self.b], alloc::vec![self.c, self.d]],
            couplings: [[c(0), c(1), Coupling::ZERO], [c(2), c(3), Coupling::ZERO]],
            tied: true,
        }
    }
}

/// `|0 k0⟩ ↔ |1 k1⟩` positions on the anti-diagonal, paired with the coupling index.
const ANTI_DIAGONAL: [(usize, usize); 4] = [(0, 7), (1, 6), (2, 5), (3, 4)];

pub fn build_rho_222(p: &ChessParams222) -> Result<ComplexMatrix> {
    p.validate()?;
    let n = p.norm();
    let mut m = ComplexMatrix::from_diagonal(&p.raw_diagonal().map(|x| x / n));
    for (j, &(row, col)) in ANTI_DIAGONAL.iter().enumerate() {
        let z = Complex64::from_polar(p.r[j] / n, p.phi[j]);
        m[(row, col)] = z;
        m[(col, row)] = z.conj();
    }
    Ok(m)
}

/// Expansion coefficients `r_t = Tr(ρ O_t)` over all 64 triples.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliCoeffs(pub [f64; 64]);

impl PauliCoeffs {
    pub fn zero() -> Self {
        let mut t = [0.0; 64];
        t[0] = 1.0;
        Self(t)
    }

    pub fn get(&self, t: Triple) -> f64 {
        self.0[triple_index(t)]
    }

    pub fn set(&mut self, t: Triple, v: f64) {
        self.0[triple_index(t)] = v;
    }

    pub fn table(&self) -> &[f64; 64] {
        &self.0
    }

    /// The fifteen listed coefficients, in [`LISTED_TRIPLES`] order.
    pub fn listed(&self) -> [(Triple, f64); 15] {
        LISTED_TRIPLES.map(|t| (t, self.get(t)))
    }

    /// Coefficients computed as traces against a built state.
    pub fn from_matrix(rho: &ComplexMatrix, embedding: &QuditEmbedding) -> Result<Self> {
        let mut out = [0.0; 64];
        for (idx, slot) in out.iter_mut().enumerate() {
            let ops = [(idx / 16) as u8, ((idx / 4) % 4) as u8, (idx % 4) as u8];
            *slot = triple_expectation(rho, embedding, ops)?.re;
        }
        Ok(Self(out))
    }
}

/// Closed-form coefficients of the three-qubit state.
pub fn pauli_coeffs(p: &ChessParams222) -> PauliCoeffs {
    let n = p.norm();
    let (a, b, c, d) = (p.a, p.b, p.c, p.d);
    let (ia, ib, ic, id) = (1.0 / a, 1.0 / b, 1.0 / c, 1.0 / d);
    let cs: [f64; 4] = core::array::from_fn(|j| p.r[j] * libm::cos(p.phi[j]));
    let sn: [f64; 4] = core::array::from_fn(|j| p.r[j] * libm::sin(p.phi[j]));
    let k = 2.0 / n;
    let mut out = PauliCoeffs::zero();
    out.set([1, 1, 1], k * (cs[0] + cs[1] + cs[2] + cs[3]));
    out.set([2, 1, 1], -k * (sn[0] + sn[1] + sn[2] + sn[3]));
    out.set([1, 1, 2], k * (-sn[0] + sn[1] - sn[2] + sn[3]));
    out.set([1, 2, 1], k * (-sn[0] - sn[1] + sn[2] + sn[3]));
    out.set([1, 2, 2], k * (-cs[0] + cs[1] + cs[2] - cs[3]));
    out.set([2, 1, 2], k * (-cs[0] + cs[1] - cs[2] + cs[3]));
    out.set([2, 2, 1], k * (-cs[0] - cs[1] + cs[2] + cs[3]));
    out.set([2, 2, 2], k * (sn[0] - sn[1] - sn[2] + sn[3]));
    out.set([3, 0, 0], (a + b + c + d - ia - ib - ic - id) / n);
    out.set([0, 3, 0], (a + b - c - d - ia - ib + ic + id) / n);
    out.set([0, 0, 3], (a - b + c - d - ia + ib - ic + id) / n);
    out.set([3, 3, 0], (a + b - c - d + ia + ib - ic - id) / n);
    out.set([3, 0, 3], (a - b + c - d + ia - ib + ic - id) / n);
    out.set([0, 3, 3], (a - b - c + d + ia - ib - ic + id) / n);
    out.set([3, 3, 3], (a - b - c + d - ia + ib + ic - id) / n);
    out
}

/// Which pair of third-party levels a coupling links.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Slot {
    /// `|0 j α⟩⟨1 j̄ β|`
    AlphaBeta,
    /// `|0 j β⟩⟨1 j̄ α|`
    BetaAlpha,
    /// `|0 j γ⟩⟨1 j̄ γ|`
    GammaGamma,
}

impl Slot {
    pub const ALL: [Slot; 3] = [Slot::AlphaBeta, Slot::BetaAlpha, Slot::GammaGamma];

    pub fn index(self) -> usize {
        match self {
            Slot::AlphaBeta => 0,
            Slot::BetaAlpha => 1,
            Slot::GammaGamma => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Slot::AlphaBeta => "ab",
            Slot::BetaAlpha => "ba",
            Slot::GammaGamma => "gg",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|slot| slot.label() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coupling {
    pub r: f64,
    pub phi: f64,
}

impl Coupling {
    pub const ZERO: Coupling = Coupling { r: 0.0, phi: 0.0 };
}

/// Parameters of the `2⊗2⊗d` chessboard state.
///
/// `diag[j][k]` is the population of `|0 j k⟩`. `couplings[j][slot]`
/// links `|0 j ν⟩` with `|1 j̄ μ⟩` for the slot's `(ν, μ)`.
///
/// The 1-branch populations depend on `tied`:
///
/// * `tied = true`: each coupled 1-branch level gets the reciprocal of
///   its 0-branch partner (`|1 j̄ β⟩ ← 1/a^{jα}`, `|1 j̄ α⟩ ← 1/a^{jβ}`,
///   `|1 j̄ γ⟩ ← 1/a^{jγ}`). Every coupled 2×2 block then has diagonal
///   product 1, so `r ≤ 1` always gives a PSD and PPT state, and `d = 2`
///   reproduces the three-qubit state for any `a, b, c, d`.
/// * `tied = false`: `|1 j μ⟩ ← 1/a^{jμ}` for `μ ∈ {α, β, γ}`, taken from
///   the term list literally. Such states need not be PSD.
///
/// Levels outside `{α, β, γ}` on the 1-branch are unpopulated.
#[derive(Clone, Debug, PartialEq)]
pub struct ChessParams22d {
    pub d: usize,
    pub alpha: usize,
    pub beta: usize,
    pub gamma: usize,
    pub diag: [Vec<f64>; 2],
    pub couplings: [[Coupling; 3]; 2],
    pub tied: bool,
}

impl ChessParams22d {
    /// Uniform unit diagonal, no couplings.
    pub fn uniform(d: usize, alpha: usize, beta: usize, gamma: usize) -> Result<Self> {
        let p = Self {
            d,
            alpha,
            beta,
            gamma,
            diag: [alloc::vec![1.0; d], alloc::vec![1.0; d]],
            couplings: [[Coupling::ZERO; 3]; 2],
            tied: true,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn embedding(&self) -> Result<QuditEmbedding> {
        QuditEmbedding::new(self.d, self.alpha, self.beta)
    }

    pub fn coupling(&self, j: usize, slot: Slot) -> Coupling {
        self.couplings[j][slot.index()]
    }

    pub fn set_coupling(&mut self, j: usize, slot: Slot, c: Coupling) {
        self.couplings[j][slot.index()] = c;
    }

    pub fn validate(&self) -> Result<()> {
        self.embedding()?;
        if self.gamma >= self.d {
            return Err(Error::InvalidParameter(format!("gamma = {} must be below d = {}", self.gamma, self.d)));
        }
        for (j, row) in self.diag.iter().enumerate() {
            if row.len() != self.d {
                return Err(Error::DimensionMismatch { expected: self.d, actual: row.len() });
            }
            for (k, &x) in row.iter().enumerate() {
                check_positive(&format!("a^{{{j}{k}}}"), x)?;
            }
        }
        for row in &self.couplings {
            for c in row {
                check_coupling(c.r, c.phi)?;
            }
        }
        Ok(())
    }

    /// `(ν, μ)` levels of a slot.
    pub fn slot_levels(&self, slot: Slot) -> (usize, usize) {
        match slot {
            Slot::AlphaBeta => (self.alpha, self.beta),
            Slot::BetaAlpha => (self.beta, self.alpha),
            Slot::GammaGamma => (self.gamma, self.gamma),
        }
    }

    fn upper_levels(&self) -> Vec<usize> {
        let mut levels = alloc::vec![self.alpha, self.beta];
        if self.gamma != self.alpha && self.gamma != self.beta {
            levels.push(self.gamma);
        }
        levels
    }

    /// Raw (trace-unnormalized) 1-branch populations `[j][k]`.
    pub fn upper_diagonal(&self) -> [Vec<f64>; 2] {
        let mut out = [alloc::vec![0.0; self.d], alloc::vec![0.0; self.d]];
        for j in 0..2 {
            for mu in self.upper_levels() {
                if self.tied {
                    // partner of |1 jbar mu> is |0 j nu> with the same slot
                    let nu = if mu == self.beta {
                        self.alpha
                    } else if mu == self.alpha {
                        self.beta
                    } else {
                        mu
                    };
                    out[1 - j][mu] = 1.0 / self.diag[j][nu];
                } else {
                    out[j][mu] = 1.0 / self.diag[j][mu];
                }
            }
        }
        out
    }
}

/// Assembles the `2⊗2⊗d` chessboard state, normalized by its trace.
pub fn build_rho_22d(p: &ChessParams22d) -> Result<ComplexMatrix> {
    p.validate()?;
    let dims = TripartiteDims::qubits_with(p.d);
    let mut m = ComplexMatrix::zeros(dims.total());
    let upper = p.upper_diagonal();
    for j in 0..2 {
        for k in 0..p.d {
            m[(dims.flat(0, j, k), dims.flat(0, j, k))] = Complex64::new(p.diag[j][k], 0.0);
            m[(dims.flat(1, j, k), dims.flat(1, j, k))] = Complex64::new(upper[j][k], 0.0);
        }
        for slot in Slot::ALL {
            let c = p.coupling(j, slot);
            let (nu, mu) = p.slot_levels(slot);
            let (row, col) = (dims.flat(0, j, nu), dims.flat(1, 1 - j, mu));
            let z = Complex64::from_polar(c.r, c.phi);
            m[(row, col)] = z;
            m[(col, row)] = z.conj();
        }
    }
    let tr = m.trace().re;
    let m = m.scale_real(1.0 / tr);
    let lo = min_eigenvalue(&m)?;
    if lo < -PSD_TOL {
        return Err(Error::NotPositive(lo));
    }
    Ok(m)
}

/// `Tr(ρ Q)` for the substituted operators of the given embedding.
pub fn coeffs_22d(p: &ChessParams22d, embedding: &QuditEmbedding) -> Result<PauliCoeffs> {
    if embedding.d != p.d {
        return Err(Error::DimensionMismatch { expected: p.d, actual: embedding.d });
    }
    PauliCoeffs::from_matrix(&build_rho_22d(p)?, embedding)
}

/// Per-cut minimum eigenvalues of the partial transposes.
#[derive(Clone, Debug, PartialEq)]
pub struct PptReport {
    pub ppt: bool,
    pub tol: f64,
    pub min_eigs: Vec<(Parties, f64)>,
}

impl PptReport {
    pub fn min(&self) -> f64 {
        self.min_eigs.iter().map(|&(_, v)| v).fold(f64::INFINITY, f64::min)
    }
}

pub fn is_ppt(m: &ComplexMatrix, dims: TripartiteDims, tol: f64) -> Result<PptReport> {
    let mut min_eigs = Vec::with_capacity(Parties::PPT_CUTS.len());
    for cut in Parties::PPT_CUTS {
        let pt = partial_transpose(m, dims, cut)?;
        min_eigs.push((cut, min_eigenvalue(&pt)?));
    }
    let ppt = min_eigs.iter().all(|&(_, v)| v >= -tol);
    Ok(PptReport { ppt, tol, min_eigs })
}

/// Wraps a phase into `[0, 2π)`.
pub fn wrap_phase(phi: f64) -> f64 {
    let w = crate::rem_euclid(phi, TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}
