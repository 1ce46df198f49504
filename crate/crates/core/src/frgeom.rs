//! Pure product states, the feasible regions they map onto, and
//! minimization of witness expectations over them.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use libm::{atan2, cos, fabs, sin, sqrt};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::tensorops::{hermitian_eigen, ComplexMatrix, PauliSum, QuditEmbedding, TripartiteDims};
use crate::witness::Geometry;

pub const CONTAINMENT_TOL: f64 = 1e-9;
/// Product-state minima below this indicate a genuine witness violation.
pub const VALIDITY_TOL: f64 = -1e-7;
pub const DEFAULT_STARTS: usize = 64;
pub const DEFAULT_ITERS: usize = 200;
const CONVERGENCE_TOL: f64 = 1e-12;
const NORM_TOL: f64 = 1e-14;

/// Bloch angles of a qubit, `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
///
/// `θ` is not reduced to `[0, π]`: some tabulated states use `θ = 3π/2`,
/// which differs from `θ = π/2, φ + π` only by a global phase.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bloch {
    pub theta: f64,
    pub phi: f64,
}

impl Bloch {
    pub const fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    pub fn vector(&self) -> [Complex64; 2] {
        let h = 0.5 * self.theta;
        [Complex64::new(cos(h), 0.0), Complex64::from_polar(sin(h), self.phi)]
    }

    /// Angles of a unit 2-vector up to global phase.
    pub fn from_vector(v: &[Complex64]) -> Self {
        let theta = 2.0 * atan2(v[1].norm(), v[0].norm());
        let phi = if v[0].norm() > 0.0 && v[1].norm() > 0.0 { v[1].arg() - v[0].arg() } else { 0.0 };
        Self { theta, phi: crate::rem_euclid(phi, TAU) }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ThirdFactor {
    Qubit(Bloch),
    /// Unit vector in `C^d`.
    Qudit(Vec<Complex64>),
}

impl ThirdFactor {
    pub fn dim(&self) -> usize {
        match self {
            Self::Qubit(_) => 2,
            Self::Qudit(v) => v.len(),
        }
    }

    pub fn vector(&self) -> Vec<Complex64> {
        match self {
            Self::Qubit(b) => b.vector().to_vec(),
            Self::Qudit(v) => v.clone(),
        }
    }
}

/// `|a⟩|b⟩|c⟩` on `2⊗2⊗d`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductState {
    pub first: Bloch,
    pub second: Bloch,
    pub third: ThirdFactor,
}

impl ProductState {
    pub fn qubits(angles: [(f64, f64); 3]) -> Self {
        let [a, b, c] = angles.map(|(t, p)| Bloch::new(t, p));
        Self { first: a, second: b, third: ThirdFactor::Qubit(c) }
    }

    /// Normalizes `third`; rejects zero vectors and `d < 2`.
    pub fn with_qudit(first: Bloch, second: Bloch, third: Vec<Complex64>) -> Result<Self> {
        if third.len() < 2 {
            return Err(Error::InvalidParameter(alloc::format!("qudit factor of length {}", third.len())));
        }
        let norm = sqrt(third.iter().map(|z| z.norm_sqr()).sum());
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidParameter("qudit factor has zero norm".into()));
        }
        let third = third.into_iter().map(|z| z / norm).collect();
        Ok(Self { first, second, third: ThirdFactor::Qudit(third) })
    }

    pub fn dims(&self) -> TripartiteDims {
        TripartiteDims::qubits_with(self.third.dim())
    }

    pub fn factors(&self) -> [Vec<Complex64>; 3] {
        [self.first.vector().to_vec(), self.second.vector().to_vec(), self.third.vector()]
    }

    pub fn is_normalized(&self) -> bool {
        self.factors().iter().all(|f| fabs(f.iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0) <= NORM_TOL)
    }

    /// Weight `q = c1² + c2² + c3²` of the third factor's Bloch vector
    /// inside `span{|α⟩, |β⟩}`; `q = 1` iff the factor lives in that span.
    pub fn qudit_weight(&self, emb: &QuditEmbedding) -> f64 {
        let [_, c1, c2, c3] = emb.local_expectations(&self.third.vector());
        c1 * c1 + c2 * c2 + c3 * c3
    }
}

fn tensor(factors: &[Vec<Complex64>; 3]) -> Vec<Complex64> {
    let [a, b, c] = factors;
    let mut out = Vec::with_capacity(a.len() * b.len() * c.len());
    for x in a {
        for y in b {
            let xy = x * y;
            out.extend(c.iter().map(|z| xy * z));
        }
    }
    out
}

pub fn product_vector(s: &ProductState) -> Vec<Complex64> {
    tensor(&s.factors())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrPoint {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
}

impl FrPoint {
    pub const fn new(p1: f64, p2: f64, p3: f64) -> Self {
        Self { p1, p2, p3 }
    }
}

/// The three operators whose product-state expectations span a
/// feasible region.
#[derive(Clone, Debug, PartialEq)]
pub struct QSet {
    pub q: [PauliSum; 3],
}

impl QSet {
    /// The operator triple of each geometry, with the third factor on
    /// `embedding`.
    pub fn standard(geometry: Geometry, embedding: QuditEmbedding) -> Self {
        let q1 = match geometry {
            Geometry::Polygon | Geometry::Cone => [3, 3, 3],
            Geometry::Cylinder | Geometry::Sphere => [3, 0, 0],
        };
        let sigma = match geometry {
            Geometry::Polygon | Geometry::Cylinder => -1.0,
            Geometry::Cone | Geometry::Sphere => 1.0,
        };
        let sum = || PauliSum::new(embedding);
        Self {
            q: [
                sum().with(1.0, q1),
                sum().with(1.0, [1, 1, 1]).with(1.0, [1, 2, 2]),
                sum().with(1.0, [2, 1, 2]).with(sigma, [2, 2, 1]),
            ],
        }
    }

    pub fn embedding(&self) -> QuditEmbedding {
        self.q[0].embedding()
    }
}

/// `P_j = ⟨s|Q_j|s⟩`.
pub fn p_map(s: &ProductState, qset: &QSet) -> Result<FrPoint> {
    let emb = qset.embedding();
    if s.third.dim() != emb.d {
        return Err(Error::DimensionMismatch { expected: emb.d, actual: s.third.dim() });
    }
    let qubit = QuditEmbedding::qubit();
    let local = [
        qubit.local_expectations(&s.first.vector()),
        qubit.local_expectations(&s.second.vector()),
        emb.local_expectations(&s.third.vector()),
    ];
    let [p1, p2, p3] = [0, 1, 2].map(|j| qset.q[j].product_expectation(&local));
    Ok(FrPoint { p1, p2, p3 })
}

impl Geometry {
    /// Whether `pt` lies in the feasible region, up to `tol`.
    pub fn contains(self, pt: FrPoint, tol: f64) -> bool {
        self.excess(pt) <= tol
    }

    /// How far `pt` sits outside the region, in the units of its defining
    /// inequality; non-positive inside.
    pub fn excess(self, pt: FrPoint) -> f64 {
        let FrPoint { p1, p2, p3 } = pt;
        match self {
            Geometry::Polygon => fabs(p1) + fabs(p2) + fabs(p3) - 1.0,
            Geometry::Cone => {
                let r = 1.0 - fabs(p1);
                f64::max(fabs(p1) - 1.0, p2 * p2 + p3 * p3 - r * r)
            }
            Geometry::Cylinder => p1 * p1 + (p2 + p3) * (p2 + p3) - 1.0,
            Geometry::Sphere => p1 * p1 + p2 * p2 + p3 * p3 - 1.0,
        }
    }
}

fn random_qubit<R: Rng>(rng: &mut R) -> Bloch {
    let cos_theta: f64 = rng.random_range(-1.0..=1.0);
    Bloch::new(libm::acos(cos_theta), rng.random_range(0.0..TAU))
}

fn random_unit_vector<R: Rng>(rng: &mut R, d: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> =
            (0..d).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
        let norm = sqrt(v.iter().map(|z| z.norm_sqr()).sum());
        if norm > 1e-150 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Haar-random product state with a `d`-dimensional third factor.
pub fn random_product_state<R: Rng>(rng: &mut R, d: usize) -> ProductState {
    let first = random_qubit(rng);
    let second = random_qubit(rng);
    let third =
        if d == 2 { ThirdFactor::Qubit(random_qubit(rng)) } else { ThirdFactor::Qudit(random_unit_vector(rng, d)) };
    ProductState { first, second, third }
}

/// The independent stream used by start `index` of a run seeded `seed`.
pub fn start_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProductMinimum {
    pub value: f64,
    pub argmin: ProductState,
}

/// `⟨v|W|v⟩` with the factor at position `skip` left open: the operator `M`
/// with `⟨x|M|x⟩ = ⟨v(x)|W|v(x)⟩` when that factor is replaced by `x`.
fn reduced_operator(w: &ComplexMatrix, dims: [usize; 3], factors: &[Vec<Complex64>; 3], skip: usize) -> ComplexMatrix {
    let n = dims[1] * dims[2];
    let strides = [n, dims[2], 1];
    let split = |flat: usize| [flat / strides[0], (flat / strides[1]) % dims[1], flat % dims[2]];
    let mut out = ComplexMatrix::zeros(dims[skip]);
    let total = dims[0] * n;
    for r in 0..total {
        let ri = split(r);
        let mut left = Complex64::new(1.0, 0.0);
        for f in 0..3 {
            if f != skip {
                left *= factors[f][ri[f]].conj();
            }
        }
        if left == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (c, &wrc) in w.row(r).iter().enumerate() {
            if wrc == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ci = split(c);
            let mut weight = left * wrc;
            for f in 0..3 {
                if f != skip {
                    weight *= factors[f][ci[f]];
                }
            }
            out[(ri[skip], ci[skip])] += weight;
        }
    }
    out.hermitian_part()
}

/// Alternating exact minimization from one start: each step replaces one
/// factor by the ground state of its reduced operator, so the value never
/// increases.
fn descend(
    w: &ComplexMatrix,
    dims: [usize; 3],
    mut factors: [Vec<Complex64>; 3],
    iters: usize,
) -> Result<(f64, [Vec<Complex64>; 3])> {
    let mut value = w.quadratic_form(&tensor(&factors)).re;
    for _ in 0..iters {
        let before = value;
        for f in 0..3 {
            let eig = hermitian_eigen(&reduced_operator(w, dims, &factors, f))?;
            factors[f] = eig.vector(0);
            value = eig.values[0];
        }
        if before - value < CONVERGENCE_TOL {
            break;
        }
    }
    Ok((value, factors))
}

fn to_state(factors: [Vec<Complex64>; 3]) -> ProductState {
    let [a, b, c] = factors;
    let third = if c.len() == 2 { ThirdFactor::Qubit(Bloch::from_vector(&c)) } else { ThirdFactor::Qudit(c) };
    ProductState { first: Bloch::from_vector(&a), second: Bloch::from_vector(&b), third }
}

/// Multi-start minimum of `⟨s|W|s⟩` over pure product states on `2⊗2⊗d`.
/// Start `i` draws its Haar-random initial state from `start_rng(seed, i)`,
/// so the result is a deterministic function of `(seed, starts, iters)`
/// and never increases as `starts` grows.
pub fn min_expectation_over_products(
    w: &ComplexMatrix,
    dims: TripartiteDims,
    starts: usize,
    iters: usize,
    seed: u64,
) -> Result<ProductMinimum> {
    if dims.d1 != 2 || dims.d2 != 2 || dims.d3 < 2 {
        return Err(Error::Unsupported(alloc::format!(
            "product states are parameterized on 2⊗2⊗d, got {}⊗{}⊗{}",
            dims.d1,
            dims.d2,
            dims.d3
        )));
    }
    if w.dim() != dims.total() {
        return Err(Error::DimensionMismatch { expected: dims.total(), actual: w.dim() });
    }
    let defect = w.hermiticity_defect();
    if defect > crate::tensorops::HERMITICITY_TOL {
        return Err(Error::NotHermitian(defect));
    }
    if starts == 0 {
        return Err(Error::InvalidParameter("at least one start is needed".into()));
    }
    let d = [2, 2, dims.d3];
    let mut best: Option<(f64, [Vec<Complex64>; 3])> = None;
    for i in 0..starts {
        let mut rng = start_rng(seed, i as u64);
        let init = random_product_state(&mut rng, dims.d3).factors();
        let (value, factors) = descend(w, d, init, iters)?;
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, factors));
        }
    }
    let (value, factors) = best.expect("starts > 0");
    Ok(ProductMinimum { value, argmin: to_state(factors) })
}

/// `|x|^{2/3}`.
fn two_thirds(x: f64) -> f64 {
    libm::cbrt(x * x)
}

/// Largest deviation from the analytic boundary along the extremal
/// product-state families of a geometry.
///
/// Polygon: `θ1 = θ2 = θ3 = t`, `φ1 = 0`, `φ2 = φ3 = π/4` traces the astroid
/// `|P1|^{2/3} + |P2 + P3|^{2/3} = 1`. Cone: the ring `θ1 = 3π/2`,
/// `θ2 = θ3 = π/2`, `φ1 = ψ`, `φ2 = φ3 = π/4` lies on `P2² + P3² = 1, P1 = 0`
/// and the z-basis states sit on the apexes `(±1, 0, 0)`; the cone is the
/// convex hull of these.
pub fn boundary_curve_check(geometry: Geometry, sweep: usize) -> Result<f64> {
    if sweep < 2 {
        return Err(Error::InvalidParameter(alloc::format!("sweep of {sweep} points")));
    }
    let qset = QSet::standard(geometry, QuditEmbedding::qubit());
    let step = |k: usize, span: f64| span * k as f64 / (sweep - 1) as f64;
    let mut worst = 0.0f64;
    match geometry {
        Geometry::Polygon => {
            for k in 0..sweep {
                let t = step(k, PI);
                let s = ProductState::qubits([(t, 0.0), (t, FRAC_PI_4), (t, FRAC_PI_4)]);
                let p = p_map(&s, &qset)?;
                worst = worst.max(fabs(two_thirds(p.p1) + two_thirds(p.p2 + p.p3) - 1.0));
            }
        }
        Geometry::Cone => {
            for k in 0..sweep {
                let psi = step(k, TAU);
                let s = ProductState::qubits([(3.0 * FRAC_PI_2, psi), (FRAC_PI_2, FRAC_PI_4), (FRAC_PI_2, FRAC_PI_4)]);
                let p = p_map(&s, &qset)?;
                worst = worst.max(fabs(sqrt(p.p2 * p.p2 + p.p3 * p.p3) - 1.0)).max(fabs(p.p1));
            }
            for theta in [0.0, PI] {
                let p = p_map(&ProductState::qubits([(theta, 0.0), (0.0, 0.0), (0.0, 0.0)]), &qset)?;
                worst = worst.max(fabs(fabs(p.p1) - 1.0)).max(fabs(p.p2)).max(fabs(p.p3));
            }
        }
        g => {
            return Err(Error::Unsupported(alloc::format!("no boundary parametrization for the {} region", g.name())));
        }
    }
    Ok(worst)
}

/// Containment statistics over Haar-random product states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContainmentReport {
    pub geometry: Geometry,
    pub samples: usize,
    pub violations: usize,
    pub max_excess: f64,
}

/// Samples `n` product states from `start_rng(seed, 0)` and checks each
/// mapped point against the region.
pub fn sample_containment(
    geometry: Geometry,
    embedding: QuditEmbedding,
    n: usize,
    seed: u64,
    tol: f64,
    mut sink: impl FnMut(FrPoint),
) -> Result<ContainmentReport> {
    let qset = QSet::standard(geometry, embedding);
    let mut rng = start_rng(seed, 0);
    let mut violations = 0;
    let mut max_excess = f64::NEG_INFINITY;
    for _ in 0..n {
        let s = random_product_state(&mut rng, embedding.d);
        let pt = p_map(&s, &qset)?;
        let e = geometry.excess(pt);
        max_excess = max_excess.max(e);
        if e > tol {
            violations += 1;
        }
        sink(pt);
    }
    Ok(ContainmentReport { geometry, samples: n, violations, max_excess })
}

/// Dense `Σ A_j Q_j`.
pub fn linear_functional(qset: &QSet, a: [f64; 3]) -> Result<ComplexMatrix> {
    let mut sum = PauliSum::new(qset.embedding());
    for (q, c) in qset.q.iter().zip(a) {
        for t in q.terms() {
            sum.add(c * t.coeff, t.ops);
        }
    }
    sum.to_matrix()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::{build_witness, family_members, Family, WitnessId};
    use alloc::vec;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-15
    }

    #[test]
    fn product_vector_basis_states() {
        let v = product_vector(&ProductState::qubits([(0.0, 0.0); 3]));
        assert!(close(v[0], Complex64::new(1.0, 0.0)));
        assert!(v[1..].iter().all(|z| z.norm() < 1e-16));
        let v = product_vector(&ProductState::qubits([(PI, 0.0), (0.0, 0.0), (0.0, 0.0)]));
        assert!((v[4].norm() - 1.0).abs() < 1e-15);
        assert!(v.iter().enumerate().all(|(i, z)| i == 4 || z.norm() < 1e-15));
    }

    #[test]
    fn product_vector_is_unit_and_tensor_ordered() {
        let s = ProductState::with_qudit(
            Bloch::new(0.4, 1.1),
            Bloch::new(2.0, 5.0),
            vec![Complex64::new(1.0, 2.0), Complex64::new(0.0, -1.0), Complex64::new(3.0, 0.5)],
        )
        .unwrap();
        assert!(s.is_normalized());
        let v = product_vector(&s);
        assert_eq!(v.len(), 12);
        assert!((v.iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0).abs() < 1e-14);
        let [a, b, c] = s.factors();
        assert!(close(v[s.dims().flat(1, 0, 2)], a[1] * b[0] * c[2]));
    }

    #[test]
    fn bloch_round_trip() {
        for (t, p) in [(0.3, 0.2), (2.9, 6.0), (FRAC_PI_2, 3.0)] {
            let b = Bloch::from_vector(&Bloch::new(t, p).vector());
            assert!((b.theta - t).abs() < 1e-14 && (b.phi - p).abs() < 1e-14);
        }
        // θ beyond π is the same ray as π − (θ − π) with φ shifted by π.
        let a = Bloch::new(3.0 * FRAC_PI_2, 0.3).vector();
        let b = Bloch::new(FRAC_PI_2, 0.3 + PI).vector();
        let overlap: Complex64 = a.iter().zip(&b).map(|(x, y)| x.conj() * y).sum();
        assert!((overlap.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_qudit_factor() {
        let b = Bloch::new(0.0, 0.0);
        assert!(ProductState::with_qudit(b, b, vec![Complex64::new(0.0, 0.0); 3]).is_err());
        assert!(ProductState::with_qudit(b, b, vec![Complex64::new(1.0, 0.0)]).is_err());
    }

    #[test]
    fn p_map_examples() {
        let q = QSet::standard(Geometry::Polygon, QuditEmbedding::qubit());
        let p = p_map(&ProductState::qubits([(0.0, 0.0); 3]), &q).unwrap();
        assert_eq!(p, FrPoint::new(1.0, 0.0, 0.0));
        let p = p_map(&ProductState::qubits([(FRAC_PI_2, 0.0); 3]), &q).unwrap();
        assert!((p.p1).abs() < 1e-15 && (p.p2 - 1.0).abs() < 1e-15 && p.p3.abs() < 1e-15);
        let err = p_map(
            &ProductState::qubits([(0.0, 0.0); 3]),
            &QSet::standard(Geometry::Cone, QuditEmbedding::new(3, 0, 1).unwrap()),
        );
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn p_map_matches_dense_expectation() {
        let mut rng = start_rng(7, 0);
        let emb = QuditEmbedding::new(4, 1, 3).unwrap();
        for g in Geometry::ALL {
            let qset = QSet::standard(g, emb);
            let mats = qset.q.clone().map(|q| q.to_matrix().unwrap());
            for _ in 0..20 {
                let s = random_product_state(&mut rng, 4);
                let v = product_vector(&s);
                let p = p_map(&s, &qset).unwrap();
                for (m, pj) in mats.iter().zip([p.p1, p.p2, p.p3]) {
                    assert!((m.quadratic_form(&v).re - pj).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn contains_examples() {
        assert!(Geometry::Polygon.contains(FrPoint::new(1.0, 0.0, 0.0), CONTAINMENT_TOL));
        assert!(!Geometry::Polygon.contains(FrPoint::new(0.0, 0.8, 0.8), CONTAINMENT_TOL));
        assert!(Geometry::Cone.contains(FrPoint::new(0.5, 0.3, 0.4), CONTAINMENT_TOL));
        assert!(!Geometry::Cone.contains(FrPoint::new(0.5, 0.3, 0.41), CONTAINMENT_TOL));
        assert!(!Geometry::Cone.contains(FrPoint::new(1.2, 0.0, 0.0), CONTAINMENT_TOL));
        assert!(Geometry::Cylinder.contains(FrPoint::new(0.0, 2.0, -1.5), CONTAINMENT_TOL));
        assert!(!Geometry::Sphere.contains(FrPoint::new(0.6, 0.6, 0.6), CONTAINMENT_TOL));
    }

    #[test]
    fn random_states_are_contained() {
        for emb in [QuditEmbedding::qubit(), QuditEmbedding::new(5, 1, 4).unwrap()] {
            for g in Geometry::ALL {
                let rep = sample_containment(g, emb, 20_000, 11, CONTAINMENT_TOL, |_| {}).unwrap();
                assert_eq!(rep.violations, 0, "{g:?} {emb:?} {}", rep.max_excess);
            }
        }
    }

    #[test]
    fn boundary_curves() {
        assert!(boundary_curve_check(Geometry::Polygon, 1000).unwrap() <= 1e-9);
        assert!(boundary_curve_check(Geometry::Cone, 1000).unwrap() <= 1e-9);
        assert!(boundary_curve_check(Geometry::Sphere, 10).is_err());
        assert!(boundary_curve_check(Geometry::Polygon, 1).is_err());
        // The endpoint of the astroid sweep.
        let q = QSet::standard(Geometry::Polygon, QuditEmbedding::qubit());
        let end = p_map(&ProductState::qubits([(PI, 0.0), (PI, FRAC_PI_4), (PI, FRAC_PI_4)]), &q).unwrap();
        assert!((end.p1 + 1.0).abs() < 1e-15);
    }

    #[test]
    fn identity_minimum_is_one() {
        let m = min_expectation_over_products(&ComplexMatrix::identity(8), TripartiteDims::three_qubits(), 4, 50, 1)
            .unwrap();
        assert!((m.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn polygonal_witnesses_touch_zero() {
        for id in family_members(Family::Poly1).iter().chain(family_members(Family::Poly2).iter()).step_by(5) {
            let w = build_witness(id).unwrap();
            let m = min_expectation_over_products(&w, TripartiteDims::three_qubits(), 16, 200, 3).unwrap();
            assert!(m.value.abs() < 1e-6, "{id} {}", m.value);
            let v = product_vector(&m.argmin);
            assert!((w.quadratic_form(&v).re - m.value).abs() < 1e-12);
        }
    }

    #[test]
    fn conical_witness_is_tangent() {
        let id = WitnessId::conical(false, [3, 3, 3], [1, 2, 2], 0, true).unwrap().with_psi(PI / 3.0);
        let m = min_expectation_over_products(&build_witness(&id).unwrap(), TripartiteDims::three_qubits(), 32, 200, 5)
            .unwrap();
        assert!(m.value >= VALIDITY_TOL && m.value <= 1e-7, "{}", m.value);
    }

    #[test]
    fn minimizer_is_deterministic_and_monotone() {
        let w =
            build_witness(&WitnessId::cylindrical(true, [0, 3, 0], [1, 1, 2], 1, 0).unwrap().with_psi(1.0)).unwrap();
        let dims = TripartiteDims::three_qubits();
        let a = min_expectation_over_products(&w, dims, 8, 20, 42).unwrap();
        let b = min_expectation_over_products(&w, dims, 8, 20, 42).unwrap();
        assert_eq!(a, b);
        let mut last = f64::INFINITY;
        for starts in [1, 2, 4, 8] {
            let v = min_expectation_over_products(&w, dims, starts, 20, 42).unwrap().value;
            assert!(v <= last);
            last = v;
        }
    }

    #[test]
    fn minimizer_input_checks() {
        let dims = TripartiteDims::three_qubits();
        assert!(min_expectation_over_products(&ComplexMatrix::identity(6), dims, 1, 1, 0).is_err());
        assert!(min_expectation_over_products(&ComplexMatrix::identity(8), dims, 0, 1, 0).is_err());
        let mut m = ComplexMatrix::identity(8);
        m[(0, 1)] = Complex64::new(0.0, 1.0);
        assert!(matches!(min_expectation_over_products(&m, dims, 1, 1, 0), Err(Error::NotHermitian(_))));
        let odd = TripartiteDims { d1: 3, d2: 2, d3: 2 };
        assert!(min_expectation_over_products(&ComplexMatrix::identity(12), odd, 1, 1, 0).is_err());
    }

    /// Tangent planes to the cone, `A1² = A2² + A3²`, touch it at height
    /// `|A1|`.
    #[test]
    fn cone_tangent_planes() {
        let qset = QSet::standard(Geometry::Cone, QuditEmbedding::qubit());
        for (a1, angle) in [(1.0, 0.3), (-0.7, 2.0), (2.0, 4.5)] {
            let a = [a1, fabs(a1) * cos(angle), fabs(a1) * sin(angle)];
            let f = linear_functional(&qset, a.map(|x: f64| -x)).unwrap();
            let m = min_expectation_over_products(&f, TripartiteDims::three_qubits(), 32, 200, 9).unwrap();
            assert!((-m.value - fabs(a1)).abs() < 1e-6, "{a:?} {}", m.value);
        }
    }

    /// Qudit third factors reach the qubit minimum only inside
    /// `span{|α⟩, |β⟩}`.
    #[test]
    fn qudit_minimum_lives_on_embedded_qubit() {
        let emb = QuditEmbedding::new(4, 1, 3).unwrap();
        let id = WitnessId::conical(false, [3, 3, 3], [1, 2, 2], 0, true).unwrap().with_psi(0.3);
        let wq = build_witness(&id).unwrap();
        let wd = build_witness(&id.with_embedding(emb)).unwrap();
        let q = min_expectation_over_products(&wq, TripartiteDims::three_qubits(), 16, 200, 2).unwrap();
        let d = min_expectation_over_products(&wd, TripartiteDims::qubits_with(4), 16, 200, 2).unwrap();
        assert!((q.value - d.value).abs() < 1e-9);
        assert!((d.argmin.qudit_weight(&emb) - 1.0).abs() < 1e-9);
    }
}
