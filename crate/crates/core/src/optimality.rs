//! Optimality of polygonal and conical witnesses by the subtraction
//! argument: a positive `|ψ⟩⟨ψ|` can be subtracted from `W` only if `|ψ⟩`
//! is orthogonal to every product state on which `W` vanishes. Writing
//! `|ψ⟩` on the z-basis states that are not zero states leaves a 4×4
//! linear system; full rank means no such `|ψ⟩` exists.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::frgeom::{product_vector, ProductState};
use crate::tensorops::{singular_values, ComplexMatrix};
use crate::witness::{build_witness, sign, WitnessId, WitnessKind};

/// Smallest singular values above this count as full rank.
pub const RANK_TOL: f64 = 1e-6;
/// Candidate zero states must satisfy `⟨s|W|s⟩ ≤ ZERO_TOL`.
pub const ZERO_TOL: f64 = 1e-12;
const ROW_TOL: f64 = 1e-12;

fn z_state(bits: [u8; 3]) -> ProductState {
    ProductState::qubits(bits.map(|b| (if b == 0 { 0.0 } else { PI }, 0.0)))
}

fn x_state(bits: [u8; 3]) -> ProductState {
    ProductState::qubits(bits.map(|b| (FRAC_PI_2, if b == 0 { 0.0 } else { PI })))
}

fn bit_triples() -> impl Iterator<Item = [u8; 3]> {
    (0u8..8).map(|n| [n >> 2, (n >> 1) & 1, n & 1])
}

/// z-basis states whose `σz⊗σz⊗σz` eigenvalue is `eigenvalue`.
fn z_states_with_parity(eigenvalue: f64) -> Vec<ProductState> {
    bit_triples().filter(|b| sign(b[0] + b[1] + b[2]) == eigenvalue).map(z_state).collect()
}

fn poly_indices(id: &WitnessId) -> Result<([u8; 4], bool)> {
    match id.kind {
        WitnessKind::Poly1 { i } => Ok((i, false)),
        WitnessKind::Poly2 { i } => Ok((i, true)),
        _ => Err(Error::WrongFamily { expected: "polygonal", actual: id.family().tag() }),
    }
}

/// Product states with vanishing expectation under a polygonal witness:
/// the four z-basis states with `⟨O333⟩ = −(−1)^{i1}` followed by the four
/// x-basis states with `⟨O111⟩ = −(−1)^{i2}`. For `Poly2` the first factor
/// is rotated by the phase gate.
pub fn zero_states_polygonal(id: &WitnessId) -> Result<Vec<ProductState>> {
    let (i, conjugated) = poly_indices(id)?;
    let mut out = z_states_with_parity(-sign(i[0]));
    out.extend(bit_triples().filter(|b| sign(b[0] + b[1] + b[2]) == -sign(i[1])).map(x_state));
    if conjugated {
        for s in &mut out {
            s.first.phi += FRAC_PI_2;
        }
    }
    Ok(out)
}

/// The four zero states `|ν1⟩..|ν4⟩` of the conical witness
/// `(333, 122, i = 0, ±)` at angle `psi`.
pub fn zero_states_conical(psi: f64) -> Vec<ProductState> {
    let t = 3.0 * FRAC_PI_2;
    let h = FRAC_PI_2;
    let q = FRAC_PI_4;
    alloc::vec![
        ProductState::qubits([(t, psi), (h, q), (h, q)]),
        ProductState::qubits([(h, psi), (t, q), (h, q)]),
        ProductState::qubits([(t, -psi), (h, -q), (h, -q)]),
        ProductState::qubits([(h, -psi), (t, -q), (h, -q)]),
    ]
}

fn conical_case(id: &WitnessId) -> Result<bool> {
    match id.kind {
        WitnessKind::Conical { primed: false, zt: [3, 3, 3], kjl: [1, 2, 2], i: 0, plus } => Ok(plus),
        _ => Err(Error::Unsupported(alloc::format!(
            "optimality is only established for polygonal witnesses and con:333:122:0:±, not {}",
            id.without_angle()
        ))),
    }
}

/// Orthogonality constraints `⟨s|ψ⟩ = 0` restricted to the ansatz basis.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalitySystem {
    pub witness: WitnessId,
    pub psi: Option<f64>,
    /// Flat indices of the z-basis states spanning the ansatz for `|ψ⟩`.
    pub basis: Vec<usize>,
    /// One unit row per constraining zero state.
    pub rows: Vec<Vec<Complex64>>,
}

impl OrthogonalitySystem {
    /// Builds the system from zero states, checking each one first.
    /// Z-basis zero states fix the ansatz; the rest become rows.
    pub fn from_zero_states(witness: WitnessId, psi: Option<f64>, states: &[ProductState]) -> Result<Self> {
        let w = build_witness(&witness)?;
        let vectors: Vec<Vec<Complex64>> = states.iter().map(product_vector).collect();
        for (s, v) in states.iter().zip(&vectors) {
            if v.len() != w.dim() {
                return Err(Error::DimensionMismatch { expected: w.dim(), actual: v.len() });
            }
            let e = w.quadratic_form(v).re;
            if e.abs() > ZERO_TOL {
                return Err(Error::InvalidParameter(alloc::format!(
                    "state {s:?} has expectation {e:e} under {witness}, not zero"
                )));
            }
        }
        let is_basis_state = |v: &[Complex64]| v.iter().filter(|z| z.norm() > ROW_TOL).count() == 1;
        let excluded: Vec<usize> = vectors
            .iter()
            .filter(|v| is_basis_state(v))
            .filter_map(|v| v.iter().position(|z| z.norm() > ROW_TOL))
            .collect();
        let basis: Vec<usize> = (0..w.dim()).filter(|k| !excluded.contains(k)).collect();
        let mut rows = Vec::new();
        for v in vectors.iter().filter(|v| !is_basis_state(v)) {
            let row: Vec<Complex64> = basis.iter().map(|&k| v[k].conj()).collect();
            let norm = libm::sqrt(row.iter().map(|z| z.norm_sqr()).sum());
            if norm > ROW_TOL {
                rows.push(row.into_iter().map(|z| z / norm).collect());
            }
        }
        Ok(Self { witness, psi, basis, rows })
    }

    pub fn for_witness(id: &WitnessId, psi: Option<f64>) -> Result<Self> {
        if poly_indices(id).is_ok() {
            return Self::from_zero_states(*id, None, &zero_states_polygonal(id)?);
        }
        let plus = conical_case(id)?;
        let psi = psi.or(id.psi()).ok_or(Error::MissingAngle("con"))?;
        let witness = id.with_psi(psi);
        let mut states = z_states_with_parity(if plus { -1.0 } else { 1.0 });
        states.extend(zero_states_conical(psi));
        Self::from_zero_states(witness, Some(psi), &states)
    }

    /// The constraint matrix, padded with zero rows if there are fewer
    /// constraints than unknowns.
    pub fn matrix(&self) -> Result<ComplexMatrix> {
        let n = self.basis.len();
        if self.rows.len() > n {
            return Err(Error::DimensionMismatch { expected: n, actual: self.rows.len() });
        }
        Ok(ComplexMatrix::from_fn(n, |r, c| self.rows.get(r).map_or(Complex64::new(0.0, 0.0), |row| row[c])))
    }

    pub fn sigma_min(&self) -> Result<f64> {
        Ok(singular_values(&self.matrix()?)?[0])
    }

    pub fn determinant(&self) -> Result<Complex64> {
        Ok(determinant(&self.matrix()?))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimalityVerdict {
    pub optimal: bool,
    pub sigma_min: f64,
    pub system: OrthogonalitySystem,
}

/// Whether the subtraction argument rules out every positive `|ψ⟩⟨ψ|`.
/// Conical witnesses take their angle from `psi`, else from the id.
pub fn is_optimal(id: &WitnessId, psi: Option<f64>) -> Result<OptimalityVerdict> {
    let system = OrthogonalitySystem::for_witness(id, psi)?;
    let sigma_min = system.sigma_min()?;
    Ok(OptimalityVerdict { optimal: sigma_min > RANK_TOL, sigma_min, system })
}

/// LU determinant with partial pivoting.
pub fn determinant(m: &ComplexMatrix) -> Complex64 {
    let n = m.dim();
    let mut a: Vec<Complex64> = m.as_slice().to_vec();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot =
            (col..n).max_by(|&x, &y| a[x * n + col].norm().total_cmp(&a[y * n + col].norm())).expect("non-empty range");
        if a[pivot * n + col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            for k in 0..n {
                a.swap(pivot * n + k, col * n + k);
            }
            det = -det;
        }
        let p = a[col * n + col];
        det *= p;
        for r in col + 1..n {
            let f = a[r * n + col] / p;
            for k in col..n {
                let v = a[col * n + k];
                a[r * n + k] -= f * v;
            }
        }
    }
    det
}

/// `|det|` of the conical system as a function of the angle.
pub fn conical_determinant(psi: f64, plus: bool) -> Result<f64> {
    let id = WitnessId::conical(false, [3, 3, 3], [1, 2, 2], 0, plus)?;
    Ok(OrthogonalitySystem::for_witness(&id, Some(psi))?.determinant()?.norm())
}

/// Golden-section minimum of `f` on `[lo, hi]`.
pub fn golden_section(mut f: impl FnMut(f64) -> Result<f64>, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64)> {
    let g = 0.5 * (libm::sqrt(5.0) - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2)?;
        }
    }
    let x = 0.5 * (lo + hi);
    Ok((x, f(x)?))
}

/// Angles in `(−π, π]` where the conical system loses rank, located by
/// minimizing `|det|` on each bracket of a coarse scan.
pub fn conical_degenerate_angles(plus: bool, tol: f64) -> Result<Vec<f64>> {
    const SCAN: usize = 64;
    let step = 2.0 * PI / SCAN as f64;
    let grid: Vec<f64> = (0..=SCAN + 1).map(|k| -PI - step + k as f64 * step).collect();
    let vals: Vec<f64> = grid.iter().map(|&x| conical_determinant(x, plus)).collect::<Result<_>>()?;
    let mut roots: Vec<f64> = Vec::new();
    for k in 1..grid.len() - 1 {
        if vals[k] <= vals[k - 1] && vals[k] < vals[k + 1] {
            let (x, v) = golden_section(|x| conical_determinant(x, plus), grid[k - 1], grid[k + 1], tol)?;
            let x = if x <= -PI {
                x + 2.0 * PI
            } else if x > PI {
                x - 2.0 * PI
            } else {
                x
            };
            if v < 1e-6 && !roots.iter().any(|r| (r - x).abs() < 10.0 * tol) {
                roots.push(x);
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::{family_members, Family};
    use core::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn polygonal_zero_states() {
        let id = WitnessId::poly1([0, 0, 1, 0]);
        let states = zero_states_polygonal(&id).unwrap();
        assert_eq!(states.len(), 8);
        // |z;+⟩|z;+⟩|z;−⟩ and its siblings.
        let flat: Vec<usize> =
            states[..4].iter().map(|s| product_vector(s).iter().position(|z| z.norm() > 0.5).unwrap()).collect();
        assert_eq!(flat, [1, 2, 4, 7]);
        let flat1: Vec<usize> = zero_states_polygonal(&WitnessId::poly1([1, 0, 0, 0])).unwrap()[..4]
            .iter()
            .map(|s| product_vector(s).iter().position(|z| z.norm() > 0.5).unwrap())
            .collect();
        assert_eq!(flat1, [0, 3, 5, 6]);
        assert!(zero_states_polygonal(&WitnessId::conical(false, [3, 3, 3], [1, 2, 2], 0, true).unwrap()).is_err());
    }

    #[test]
    fn every_polygonal_zero_state_vanishes() {
        for id in family_members(Family::Poly1).into_iter().chain(family_members(Family::Poly2)) {
            let w = build_witness(&id).unwrap();
            for s in zero_states_polygonal(&id).unwrap() {
                assert!(w.quadratic_form(&product_vector(&s)).norm() <= ZERO_TOL, "{id}");
            }
        }
    }

    #[test]
    fn polygonal_witnesses_are_optimal() {
        for id in family_members(Family::Poly1).into_iter().chain(family_members(Family::Poly2)) {
            let v = is_optimal(&id, None).unwrap();
            assert!(v.optimal && v.sigma_min > 0.1, "{id} {}", v.sigma_min);
            assert_eq!(v.system.rows.len(), 4);
            assert_eq!(v.system.basis.len(), 4);
        }
    }

    #[test]
    fn poly1_system_matches_hand_expansion() {
        // For i1 = i2 = 0 the rows are (1/2)(±1, ±1, ±1, ±1) sign patterns.
        let sys = OrthogonalitySystem::for_witness(&WitnessId::poly1([0, 0, 0, 0]), None).unwrap();
        assert_eq!(sys.basis, [0, 3, 5, 6]);
        for row in &sys.rows {
            assert!(row.iter().all(|z| (z.norm() - 0.5).abs() < 1e-15 && z.im.abs() < 1e-15));
        }
    }

    #[test]
    fn conical_zero_states_vanish() {
        for plus in [true, false] {
            for psi in [0.0, 0.3, 1.0, FRAC_PI_4, 2.5, -1.7] {
                let id = WitnessId::conical(false, [3, 3, 3], [1, 2, 2], 0, plus).unwrap().with_psi(psi);
                let w = build_witness(&id).unwrap();
                for s in zero_states_conical(psi) {
                    assert!(w.quadratic_form(&product_vector(&s)).norm() <= ZERO_TOL);
                }
            }
        }
    }

    /// `2√2⟨ν|ψ⟩` on the `(+++, +−−, −+−, −−+)` ansatz.
    #[test]
    fn conical_overlaps_match_hand_expansion() {
        let psi = 0.7;
        let e = Complex64::from_polar(1.0, -(psi + FRAC_PI_4));
        let i = Complex64::i();
        let one = Complex64::new(1.0, 0.0);
        let expected =
            [[-one, i, e, e], [-one, -i, -e, e], [-one, -i, e.conj(), e.conj()], [-one, i, -e.conj(), e.conj()]];
        for (s, row) in zero_states_conical(psi).iter().zip(expected) {
            let v = product_vector(s);
            for (&k, want) in [0, 3, 5, 6].iter().zip(row) {
                assert!((v[k].conj() * 2.0 * core::f64::consts::SQRT_2 - want).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn conical_zero_states_at_zero_angle() {
        let c = 0.5 * FRAC_1_SQRT_2;
        for s in zero_states_conical(0.0) {
            for z in product_vector(&s) {
                assert!((z.norm() - c).abs() < 1e-15);
                let eighths = z.arg() / FRAC_PI_4;
                assert!((eighths - libm::round(eighths)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn conical_optimality_away_from_degenerate_angles() {
        for plus in [true, false] {
            let id = WitnessId::conical(false, [3, 3, 3], [1, 2, 2], 0, plus).unwrap();
            let v = is_optimal(&id, Some(0.3)).unwrap();
            assert!(v.optimal, "{}", v.sigma_min);
            for psi in [FRAC_PI_4, -FRAC_PI_4, 3.0 * FRAC_PI_4, -3.0 * FRAC_PI_4] {
                let v = is_optimal(&id, Some(psi)).unwrap();
                assert!(!v.optimal && v.sigma_min <= 1e-10, "{psi} {}", v.sigma_min);
            }
        }
    }

    #[test]
    fn angle_comes_from_id_when_not_given() {
        let id = WitnessId::conical(false, [3, 3, 3], [1, 2, 2], 0, true).unwrap();
        assert!(matches!(is_optimal(&id, None), Err(Error::MissingAngle(_))));
        assert!(is_optimal(&id.with_psi(0.3), None).unwrap().optimal);
    }

    #[test]
    fn unsupported_families() {
        let other = WitnessId::conical(false, [3, 3, 3], [2, 1, 2], 0, true).unwrap().with_psi(0.3);
        assert!(matches!(is_optimal(&other, None), Err(Error::Unsupported(_))));
        let cyl = WitnessId::cylindrical(false, [3, 0, 0], [1, 2, 2], 0, 0).unwrap().with_psi(0.3);
        assert!(matches!(is_optimal(&cyl, None), Err(Error::Unsupported(_))));
    }

    #[test]
    fn rejects_non_zero_states() {
        let id = WitnessId::poly1([0, 0, 0, 0]);
        let bad = [ProductState::qubits([(0.0, 0.0); 3])];
        assert!(OrthogonalitySystem::from_zero_states(id, None, &bad).is_err());
    }

    #[test]
    fn determinant_of_known_matrices() {
        let m = ComplexMatrix::from_fn(3, |i, j| Complex64::new((i * 3 + j) as f64, (i == j) as u8 as f64));
        // det(A + iI) for A = [[0,1,2],[3,4,5],[6,7,8]] by cofactor expansion.
        let a = |i: usize, j: usize| m[(i, j)];
        let cof = a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
            + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
        assert!((determinant(&m) - cof).norm() < 1e-12);
        assert_eq!(determinant(&ComplexMatrix::zeros(2)), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn conical_determinant_roots() {
        for plus in [true, false] {
            let roots = conical_degenerate_angles(plus, 1e-10).unwrap();
            let expected = [-3.0 * FRAC_PI_4, -FRAC_PI_4, FRAC_PI_4, 3.0 * FRAC_PI_4];
            assert_eq!(roots.len(), 4, "{roots:?}");
            for (r, e) in roots.iter().zip(expected) {
                assert!((r - e).abs() < 1e-8, "{r} vs {e}");
            }
        }
    }
}
