//! Parameter-level detection inequalities for the three-qubit state.
//!
//! With `C_j = r_j cos φ_j`, `S_j = r_j sin φ_j` and the normalization `n`,
//! every functional is `n·F = 2Y − 4√w` (polygonal, conical) or
//! `n²(1 − F)² = n² − 4z + 16w` (cylindrical, spherical), so the sign of
//! each family minimum is decided by comparing diagonal aggregates against
//! coupling aggregates.

use libm::fabs;

use super::id::Family;
use crate::chessboard::ChessParams222;

/// Index of the largest entry.
fn argmax(xs: &[f64]) -> usize {
    let mut best = 0;
    for (k, &x) in xs.iter().enumerate() {
        if x > xs[best] {
            best = k;
        }
    }
    best
}

fn argmin(xs: &[f64]) -> usize {
    let mut best = 0;
    for (k, &x) in xs.iter().enumerate() {
        if x < xs[best] {
            best = k;
        }
    }
    best
}

/// Verdict of one inequality family and the index pair that fired (or
/// came closest).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Verdict {
    pub detected: bool,
    /// `(diagonal index, coupling index)` of the tightest comparison.
    pub pair: (usize, usize),
    /// `lhs − rhs` of the tightest comparison; negative iff detected.
    pub margin: f64,
}

impl Verdict {
    fn compare(lhs: &[f64], rhs: &[f64]) -> Self {
        let (i, j) = (argmin(lhs), argmax(rhs));
        let margin = lhs[i] - rhs[j];
        Self { detected: margin < 0.0, pair: (i, j), margin }
    }
}

/// Intermediates and verdicts of all closed-form conditions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConditionReport {
    /// `X1 = b + c + 1/a + 1/d`, `X2 = a + d + 1/b + 1/c`.
    pub x: [f64; 2],
    /// Conical diagonal sums, one per `(k'j'l', ±)`.
    pub y: [f64; 8],
    /// `z1 = (a+b+c+d)(1/a+1/b+1/c+1/d)`, `z2 = (a+b+1/c+1/d)(c+d+1/a+1/b)`,
    /// `z3 = (a+c+1/b+1/d)(b+d+1/a+1/c)`.
    pub z: [f64; 3],
    /// `u_{1±} = (C2±C3)² + (C1∓C4)²`, `u_{2±} = (C1±C3)² + (C2∓C4)²`,
    /// `u_{3±} = (C1±C2)² + (C3∓C4)²`, ordered `1+, 1−, 2+, 2−, 3+, 3−`.
    pub u: [f64; 6],
    /// As `u` with `S_j` in place of `C_j`.
    pub v: [f64; 6],
    pub poly1: Verdict,
    pub poly2: Verdict,
    pub conical: Verdict,
    pub conical_prime: Verdict,
    pub cylindrical: Verdict,
    pub cylindrical_prime: Verdict,
    pub spherical: Verdict,
    pub spherical_prime: Verdict,
}

impl ConditionReport {
    pub fn verdict(&self, family: Family) -> &Verdict {
        match family {
            Family::Poly1 => &self.poly1,
            Family::Poly2 => &self.poly2,
            Family::Conical => &self.conical,
            Family::ConicalPrime => &self.conical_prime,
            Family::Cylindrical => &self.cylindrical,
            Family::CylindricalPrime => &self.cylindrical_prime,
            Family::Spherical => &self.spherical,
            Family::SphericalPrime => &self.spherical_prime,
        }
    }

    pub fn polygonal(&self) -> bool {
        self.poly1.detected || self.poly2.detected
    }

    pub fn cone(&self) -> bool {
        self.conical.detected || self.conical_prime.detected
    }

    pub fn cylinder(&self) -> bool {
        self.cylindrical.detected || self.cylindrical_prime.detected
    }

    pub fn sphere(&self) -> bool {
        self.spherical.detected || self.spherical_prime.detected
    }

    /// `w = max(u ∪ v)`.
    pub fn w(&self) -> f64 {
        self.u.iter().chain(self.v.iter()).copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

fn pair_sums(t: [f64; 4]) -> [f64; 6] {
    let sq = |x: f64| x * x;
    let [t1, t2, t3, t4] = t;
    [
        sq(t2 + t3) + sq(t1 - t4),
        sq(t2 - t3) + sq(t1 + t4),
        sq(t1 + t3) + sq(t2 - t4),
        sq(t1 - t3) + sq(t2 + t4),
        sq(t1 + t2) + sq(t3 - t4),
        sq(t1 - t2) + sq(t3 + t4),
    ]
}

pub fn detection_conditions(p: &ChessParams222) -> ConditionReport {
    let (a, b, c, d) = (p.a, p.b, p.c, p.d);
    let (ia, ib, ic, id) = (1.0 / a, 1.0 / b, 1.0 / c, 1.0 / d);
    let cs: [f64; 4] = core::array::from_fn(|j| p.r[j] * libm::cos(p.phi[j]));
    let sn: [f64; 4] = core::array::from_fn(|j| p.r[j] * libm::sin(p.phi[j]));

    let x = [b + c + ia + id, a + d + ib + ic];
    let y = [
        a + d + ib + ic,
        b + c + ia + id,
        a + ia + b + ib,
        c + ic + d + id,
        a + ia + c + ic,
        b + ib + d + id,
        a + ia + d + id,
        b + ib + c + ic,
    ];
    let z = [
        (a + b + c + d) * (ia + ib + ic + id),
        (a + b + ic + id) * (c + d + ia + ib),
        (a + c + ib + id) * (b + d + ia + ic),
    ];
    let u = pair_sums(cs);
    let v = pair_sums(sn);

    // polygonal: X < 4|C_j| (Poly1), X < 4|S_j| (Poly2)
    let four_abs = |t: [f64; 4]| t.map(|x| 4.0 * fabs(x));
    let poly1 = Verdict::compare(&x, &four_abs(cs));
    let poly2 = Verdict::compare(&x, &four_abs(sn));

    // conical: Y² < 4w
    let y2 = y.map(|t| t * t);
    let conical = Verdict::compare(&y2, &u.map(|w| 4.0 * w));
    let conical_prime = Verdict::compare(&y2, &v.map(|w| 4.0 * w));

    // cylindrical: z < 16 C_j², z < 16 S_j²; never holds since z ≥ 16
    let sixteen_sq = |t: [f64; 4]| t.map(|x| 16.0 * x * x);
    let cylindrical = Verdict::compare(&z, &sixteen_sq(cs));
    let cylindrical_prime = Verdict::compare(&z, &sixteen_sq(sn));

    // spherical: z < 4w
    let spherical = Verdict::compare(&z, &u.map(|w| 4.0 * w));
    let spherical_prime = Verdict::compare(&z, &v.map(|w| 4.0 * w));

    ConditionReport {
        x,
        y,
        z,
        u,
        v,
        poly1,
        poly2,
        conical,
        conical_prime,
        cylindrical,
        cylindrical_prime,
        spherical,
        spherical_prime,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn probe_state() {
        let p = ChessParams222::new(1.0, 1.0, 1.0, 1.0, [1.0, 1.0, 0.5, 0.0], [0.0; 4]).unwrap();
        let rep = detection_conditions(&p);
        // 4 < 4 fails strictly
        assert!(!rep.poly1.detected && !rep.poly2.detected);
        assert_eq!(rep.poly1.margin, 0.0);
        // (b + 1/b + c + 1/c)² = 16 < 4·4.25
        assert!(rep.conical.detected);
        assert_eq!(rep.w(), 4.25);
        assert_eq!(rep.u[4], 4.25);
        assert_eq!(rep.conical.margin, 16.0 - 17.0);
        assert!(!rep.cylinder());
        assert!(rep.z.iter().all(|&z| z >= 16.0));
    }

    #[test]
    fn no_couplings_no_detection() {
        let p = ChessParams222::new(0.2, 3.0, 1.7, 0.9, [0.0; 4], [0.0; 4]).unwrap();
        let rep = detection_conditions(&p);
        assert!(!rep.polygonal() && !rep.cone() && !rep.cylinder() && !rep.sphere());
    }

    proptest! {
        #[test]
        fn cylindrical_never_fires(
            e in proptest::array::uniform4(-1.0f64..1.0),
            r in proptest::array::uniform4(0.0f64..=1.0),
            phi in proptest::array::uniform4(0.0f64..core::f64::consts::TAU),
        ) {
            let x = e.map(|t| libm::pow(10.0, t));
            let p = ChessParams222::new(x[0], x[1], x[2], x[3], r, phi).unwrap();
            let rep = detection_conditions(&p);
            prop_assert!(rep.z.iter().all(|&z| z >= 16.0 * (1.0 - 1e-15)));
            prop_assert!(!rep.cylinder());
        }
    }
}
