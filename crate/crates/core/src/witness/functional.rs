use libm::{acos, atan2, sqrt};

use super::build::witness_terms;
use super::id::{cyclic_partners, sign, Angle, Geometry, WitnessId, WitnessKind};
use crate::chessboard::PauliCoeffs;
use crate::error::{Error, Result};

/// Minimum of `Tr(Wρ)` over a witness's angle fiber, with the attaining angle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiberMinimum {
    pub value: f64,
    pub angle: Option<Angle>,
}

/// `(x, y)` with `x = r_x + s·r_kjl`, `y = r_lkj + s·r_jlk`.
fn plane_pair(c: &PauliCoeffs, id: &WitnessId, kjl: [u8; 3], s: f64) -> (f64, f64) {
    let (lkj, jlk) = cyclic_partners(kjl);
    (c.get(id.family().x_triple()) + s * c.get(kjl), c.get(lkj) + s * c.get(jlk))
}

/// Closed-form minimum over the angle fiber. Polygonal witnesses have no
/// fiber and are evaluated directly.
pub fn fiber_minimum(c: &PauliCoeffs, id: &WitnessId) -> Result<FiberMinimum> {
    id.validate()?;
    let out = match id.kind {
        WitnessKind::Poly1 { .. } | WitnessKind::Poly2 { .. } => {
            FiberMinimum { value: witness_terms(id)?.expectation(c.table()), angle: None }
        }
        WitnessKind::Conical { zt, kjl, i, plus, .. } => {
            let (x, y) = plane_pair(c, id, kjl, sign(i));
            let rad = sqrt(x * x + y * y);
            let pm = if plus { 1.0 } else { -1.0 };
            FiberMinimum { value: 1.0 + pm * c.get(zt) - rad, angle: Some(Angle::Psi(atan2(-y, -x))) }
        }
        WitnessKind::Cylindrical { zt, kjl, i1, i2, .. } => {
            let (lkj, jlk) = cyclic_partners(kjl);
            let (s1, s2) = (sign(i1), sign(i2));
            let x = c.get(id.family().x_triple()) + s1 * c.get(kjl) + s2 * c.get(lkj) - s1 * s2 * c.get(jlk);
            let z = c.get(zt);
            FiberMinimum { value: 1.0 - sqrt(z * z + x * x), angle: Some(Angle::Psi(atan2(-x, -z))) }
        }
        WitnessKind::Spherical { zt, kjl, i, .. } => {
            let (x, y) = plane_pair(c, id, kjl, sign(i));
            let z = c.get(zt);
            let rad = sqrt(z * z + x * x + y * y);
            let (eta, zeta) = if rad > 0.0 { (acos((-y / rad).clamp(-1.0, 1.0)), atan2(-x, -z)) } else { (0.0, 0.0) };
            FiberMinimum { value: 1.0 - rad, angle: Some(Angle::Sphere { eta, zeta }) }
        }
    };
    Ok(out)
}

fn expect_geometry(id: &WitnessId, g: Geometry, name: &'static str) -> Result<()> {
    if id.family().geometry() != g {
        return Err(Error::WrongFamily { expected: name, actual: id.family().tag() });
    }
    Ok(())
}

/// `1 ± r_{k'j'l'} − √((r_x + (−1)^i r_kjl)² + (r_lkj + (−1)^i r_jlk)²)`.
pub fn functional_conical(c: &PauliCoeffs, id: &WitnessId) -> Result<f64> {
    expect_geometry(id, Geometry::Cone, "conical")?;
    Ok(fiber_minimum(c, id)?.value)
}

/// `1 − √(r²_{k'j'l'} + (r_x + (−1)^{i1} r_kjl + (−1)^{i2} r_lkj − (−1)^{i1+i2} r_jlk)²)`.
pub fn functional_cylindrical(c: &PauliCoeffs, id: &WitnessId) -> Result<f64> {
    expect_geometry(id, Geometry::Cylinder, "cylindrical")?;
    Ok(fiber_minimum(c, id)?.value)
}

/// `1 − √(r²_{k'j'l'} + (r_x + (−1)^i r_kjl)² + (r_lkj + (−1)^i r_jlk)²)`.
pub fn functional_spherical(c: &PauliCoeffs, id: &WitnessId) -> Result<f64> {
    expect_geometry(id, Geometry::Sphere, "spherical")?;
    Ok(fiber_minimum(c, id)?.value)
}
