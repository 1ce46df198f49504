use alloc::vec::Vec;

use libm::{cos, sin};

use super::id::{cyclic_partners, sign, Angle, Family, WitnessId, WitnessKind};
use crate::error::{Error, Result};
use crate::tensorops::{ComplexMatrix, PauliSum, QuditEmbedding};

fn poly1_sum(i: [u8; 4], embedding: QuditEmbedding) -> PauliSum {
    PauliSum::new(embedding)
        .with(1.0, [0, 0, 0])
        .with(sign(i[0]), [3, 3, 3])
        .with(sign(i[1]), [1, 1, 1])
        .with(sign(i[2]), [1, 2, 2])
        .with(sign(i[3]), [2, 1, 2])
        .with(sign(i[1] + i[2] + i[3] + 1), [2, 2, 1])
}

/// The witness as a Pauli expansion. Curved families need an angle.
pub fn witness_terms(id: &WitnessId) -> Result<PauliSum> {
    id.validate()?;
    let family = id.family();
    let x = family.x_triple();
    let emb = id.embedding;
    let missing = || Error::MissingAngle(family.tag());
    let sum = match id.kind {
        WitnessKind::Poly1 { i } => poly1_sum(i, emb),
        WitnessKind::Poly2 { i } => poly1_sum(i, emb).conjugate_first_by_phase_gate(),
        WitnessKind::Conical { zt, kjl, i, plus, .. } => {
            let psi = id.psi().ok_or_else(missing)?;
            let (lkj, jlk) = cyclic_partners(kjl);
            let s = sign(i);
            let (c, sn) = (cos(psi), sin(psi));
            PauliSum::new(emb)
                .with(1.0, [0, 0, 0])
                .with(if plus { 1.0 } else { -1.0 }, zt)
                .with(c, x)
                .with(c * s, kjl)
                .with(sn, lkj)
                .with(sn * s, jlk)
        }
        WitnessKind::Cylindrical { zt, kjl, i1, i2, .. } => {
            let psi = id.psi().ok_or_else(missing)?;
            let (lkj, jlk) = cyclic_partners(kjl);
            let (s1, s2) = (sign(i1), sign(i2));
            let (c, sn) = (cos(psi), sin(psi));
            PauliSum::new(emb)
                .with(1.0, [0, 0, 0])
                .with(c, zt)
                .with(sn, x)
                .with(sn * s1, kjl)
                .with(sn * s2, lkj)
                .with(-sn * s1 * s2, jlk)
        }
        WitnessKind::Spherical { zt, kjl, i, .. } => {
            let Some(Angle::Sphere { eta, zeta }) = id.angle else {
                return Err(missing());
            };
            let (lkj, jlk) = cyclic_partners(kjl);
            let s = sign(i);
            let (a1, a2, a3) = (sin(eta) * cos(zeta), sin(eta) * sin(zeta), cos(eta));
            PauliSum::new(emb)
                .with(1.0, [0, 0, 0])
                .with(a1, zt)
                .with(a2, x)
                .with(a2 * s, kjl)
                .with(a3, lkj)
                .with(a3 * s, jlk)
        }
    };
    Ok(sum)
}

/// Dense witness operator on `2⊗2⊗d`.
pub fn build_witness(id: &WitnessId) -> Result<ComplexMatrix> {
    witness_terms(id)?.to_matrix()
}

/// `Tr(Wρ)`; the imaginary part must vanish to `1e-12`.
pub fn expectation(w: &ComplexMatrix, rho: &ComplexMatrix) -> Result<f64> {
    if w.dim() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: w.dim(), actual: rho.dim() });
    }
    let t = crate::tensorops::trace_product(w, rho);
    if t.im.abs() > 1e-12 {
        return Err(Error::NotHermitian(t.im.abs()));
    }
    Ok(t.re)
}

/// Every discrete witness, angles unset. With `pair = None` and `d > 2`
/// all `d(d−1)/2` embeddings are listed. Ordering: embedding, then family
/// in [`Family::ALL`] order, then labels lexicographically.
pub fn enumerate_witnesses(d: usize, pair: Option<(usize, usize)>) -> Result<Vec<WitnessId>> {
    let embeddings = match pair {
        Some((alpha, beta)) => alloc::vec![QuditEmbedding::new(d, alpha, beta)?],
        None if d >= 2 => QuditEmbedding::all_pairs(d),
        None => return Err(Error::InvalidParameter(alloc::format!("qudit dimension {d} < 2"))),
    };
    let mut out = Vec::with_capacity(236 * embeddings.len());
    for emb in embeddings {
        for family in Family::ALL {
            out.extend(family_members(family).into_iter().map(|id| id.with_embedding(emb)));
        }
    }
    Ok(out)
}

/// Discrete members of one family on the qubit embedding.
pub fn family_members(family: Family) -> Vec<WitnessId> {
    let mut out = Vec::with_capacity(family.size());
    let primed = family.is_primed();
    match family {
        Family::Poly1 | Family::Poly2 => {
            for bits in 0u8..16 {
                let i = [(bits >> 3) & 1, (bits >> 2) & 1, (bits >> 1) & 1, bits & 1];
                out.push(if family == Family::Poly1 { WitnessId::poly1(i) } else { WitnessId::poly2(i) });
            }
        }
        Family::Conical | Family::ConicalPrime => {
            for &zt in family.z_triples() {
                for &kjl in family.kjl_triples() {
                    for i in 0..2 {
                        for plus in [true, false] {
                            out.push(WitnessId::conical(primed, zt, kjl, i, plus).expect("enumerated labels"));
                        }
                    }
                }
            }
        }
        Family::Cylindrical | Family::CylindricalPrime => {
            for &zt in family.z_triples() {
                for &kjl in family.kjl_triples() {
                    for (i1, i2) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                        out.push(WitnessId::cylindrical(primed, zt, kjl, i1, i2).expect("enumerated labels"));
                    }
                }
            }
        }
        Family::Spherical | Family::SphericalPrime => {
            for &zt in family.z_triples() {
                for &kjl in family.kjl_triples() {
                    for i in 0..2 {
                        out.push(WitnessId::spherical(primed, zt, kjl, i).expect("enumerated labels"));
                    }
                }
            }
        }
    }
    out
}
