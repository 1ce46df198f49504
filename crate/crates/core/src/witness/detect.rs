use alloc::vec::Vec;

use super::build::family_members;
use super::conditions::{detection_conditions, ConditionReport};
use super::functional::fiber_minimum;
use super::id::{Family, Geometry, WitnessId};
use crate::chessboard::{coeffs_22d, pauli_coeffs, ChessParams222, ChessParams22d, PauliCoeffs};
use crate::error::Result;
use crate::tensorops::QuditEmbedding;

/// Negative minima in `[−MARGINAL_BAND, 0)` are flagged in reports.
pub const MARGINAL_BAND: f64 = 1e-9;

/// Minima above `−ROUNDOFF_FLOOR` are treated as zero. Boundary states
/// with an exactly vanishing witness value otherwise land on either side
/// of zero depending on summation order.
pub const ROUNDOFF_FLOOR: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FamilyMinimum {
    pub family: Family,
    pub min: f64,
    /// Minimizing witness, with its optimal angle.
    pub best: WitnessId,
}

impl FamilyMinimum {
    pub fn detected(&self) -> bool {
        self.min < -ROUNDOFF_FLOOR
    }

    pub fn marginal(&self) -> bool {
        self.min < 0.0 && self.min >= -MARGINAL_BAND
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DetectionReport {
    /// One entry per family, in [`Family::ALL`] order.
    pub families: Vec<FamilyMinimum>,
    /// Closed-form inequalities; only available for three-qubit input.
    pub conditions: Option<ConditionReport>,
}

impl DetectionReport {
    pub fn family(&self, f: Family) -> &FamilyMinimum {
        self.families.iter().find(|m| m.family == f).expect("every family is reported")
    }

    /// Lower of the two families sharing a geometry.
    pub fn geometry_min(&self, g: Geometry) -> &FamilyMinimum {
        let [a, b] = g.families().map(|f| self.family(f));
        if b.min < a.min {
            b
        } else {
            a
        }
    }

    pub fn detected_by(&self, g: Geometry) -> bool {
        self.geometry_min(g).detected()
    }

    pub fn detected_any(&self) -> bool {
        self.families.iter().any(FamilyMinimum::detected)
    }

    pub fn any_marginal(&self) -> bool {
        self.families.iter().any(FamilyMinimum::marginal)
    }

    pub fn best(&self) -> &FamilyMinimum {
        let mut best = &self.families[0];
        for m in &self.families[1..] {
            if m.min < best.min {
                best = m;
            }
        }
        best
    }
}

/// Every family minimum from one coefficient table, for witnesses on
/// `embedding`.
pub fn family_minima(c: &PauliCoeffs, embedding: QuditEmbedding) -> Result<Vec<FamilyMinimum>> {
    let mut out = Vec::with_capacity(Family::ALL.len());
    for family in Family::ALL {
        let mut best: Option<FamilyMinimum> = None;
        for id in family_members(family) {
            let m = fiber_minimum(c, &id)?;
            if best.is_none_or(|b| m.value < b.min) {
                let best_id = WitnessId { angle: m.angle, embedding, ..id };
                best = Some(FamilyMinimum { family, min: m.value, best: best_id });
            }
        }
        out.push(best.expect("families are non-empty"));
    }
    Ok(out)
}

fn merge(into: &mut [FamilyMinimum], other: Vec<FamilyMinimum>) {
    for (slot, m) in into.iter_mut().zip(other) {
        if m.min < slot.min {
            *slot = m;
        }
    }
}

pub fn detect_222(p: &ChessParams222) -> Result<DetectionReport> {
    p.validate()?;
    let c = pauli_coeffs(p);
    Ok(DetectionReport {
        families: family_minima(&c, QuditEmbedding::qubit())?,
        conditions: Some(detection_conditions(p)),
    })
}

/// Minima over the supplied embeddings (`None`: the state's own `(α, β)`).
pub fn detect_22d(p: &ChessParams22d, embeddings: Option<&[QuditEmbedding]>) -> Result<DetectionReport> {
    let own = [p.embedding()?];
    let embeddings = embeddings.unwrap_or(&own);
    let mut families: Option<Vec<FamilyMinimum>> = None;
    for emb in embeddings {
        let m = family_minima(&coeffs_22d(p, emb)?, *emb)?;
        match families.as_mut() {
            None => families = Some(m),
            Some(acc) => merge(acc, m),
        }
    }
    let families = families.ok_or_else(|| crate::Error::InvalidParameter("no qudit embeddings given".into()))?;
    Ok(DetectionReport { families, conditions: None })
}

/// Either parameterization of a chessboard state.
#[derive(Clone, Debug, PartialEq)]
pub enum ChessParams {
    Qubits(ChessParams222),
    Qudit(ChessParams22d),
}

pub fn detect(p: &ChessParams) -> Result<DetectionReport> {
    match p {
        ChessParams::Qubits(p) => detect_222(p),
        ChessParams::Qudit(p) => detect_22d(p, None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximally_mixed_not_detected() {
        let rep = detect_222(&ChessParams222::maximally_mixed()).unwrap();
        assert!(rep.families.iter().all(|m| m.min == 1.0));
        assert!(!rep.detected_any());
    }

    #[test]
    fn comparison_state_detected_by_polygonal() {
        let t = 0.3798;
        let p = ChessParams222::new(1.0, t, t, 1.0 / t, [1.0, 0.0, 0.0, 0.0], [0.0; 4]).unwrap();
        let rep = detect_222(&p).unwrap();
        assert!(rep.detected_any());
        let best = rep.best();
        assert_eq!(best.family, Family::Poly1);
        assert!((best.min + 0.3371).abs() < 1e-3, "{}", best.min);
        assert!(rep.conditions.unwrap().poly1.detected);
    }

    #[test]
    fn equal_r3_r4_not_detected() {
        for r in [0.0, 0.1, 0.25, 0.3, 0.5, 0.6, 0.7, 0.9, 1.0] {
            let p = ChessParams222::new(1.0, 1.0, 1.0, 1.0, [1.0, 1.0, r, r], [0.0; 4]).unwrap();
            assert!(!detect_222(&p).unwrap().detected_any(), "r = {r}");
        }
    }

    #[test]
    fn qudit_reduction_matches_qubit_report() {
        let p = ChessParams222::new(0.4, 2.5, 1.3, 0.7, [0.9, 0.3, 0.6, 0.8], [0.4, 2.0, 3.5, 5.1]).unwrap();
        let a = detect_222(&p).unwrap();
        let b = detect_22d(&p.to_22d(), None).unwrap();
        for (x, y) in a.families.iter().zip(&b.families) {
            assert!((x.min - y.min).abs() < 1e-14);
        }
    }

    #[test]
    fn marginal_band() {
        let id = WitnessId::poly1([0; 4]);
        let m = FamilyMinimum { family: Family::Poly1, min: -5e-10, best: id };
        assert!(m.detected() && m.marginal());
        let m = FamilyMinimum { min: -2e-9, ..m };
        assert!(m.detected() && !m.marginal());
        let m = FamilyMinimum { min: -3e-17, ..m };
        assert!(!m.detected() && m.marginal());
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use core::f64::consts::TAU;
    use proptest::prelude::*;

    fn params() -> impl Strategy<Value = ChessParams222> {
        (prop::array::uniform4(-1.0f64..1.0), prop::array::uniform4(0.0f64..=1.0), prop::array::uniform4(0.0..TAU))
            .prop_map(|(e, r, phi)| {
                let [a, b, c, d] = e.map(|x| libm::pow(10.0, x));
                ChessParams222::new(a, b, c, d, r, phi).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn conditions_agree_with_minima(p in params()) {
            let rep = detect_222(&p).unwrap();
            let cond = rep.conditions.unwrap();
            for m in &rep.families {
                if m.min.abs() > MARGINAL_BAND {
                    prop_assert_eq!(cond.verdict(m.family).detected, m.min < 0.0, "{} {}", m.family, m.min);
                }
            }
        }
    }
}
