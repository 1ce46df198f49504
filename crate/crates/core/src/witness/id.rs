use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::tensorops::{parse_triple, QuditEmbedding, Triple};

/// Shape of the feasible region behind a witness family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Geometry {
    Polygon,
    Cone,
    Cylinder,
    Sphere,
}

impl Geometry {
    pub const ALL: [Geometry; 4] = [Geometry::Polygon, Geometry::Cone, Geometry::Cylinder, Geometry::Sphere];

    pub fn name(self) -> &'static str {
        match self {
            Geometry::Polygon => "polygon",
            Geometry::Cone => "cone",
            Geometry::Cylinder => "cylinder",
            Geometry::Sphere => "sphere",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|g| g.name() == s)
    }

    pub fn families(self) -> [Family; 2] {
        match self {
            Geometry::Polygon => [Family::Poly1, Family::Poly2],
            Geometry::Cone => [Family::Conical, Family::ConicalPrime],
            Geometry::Cylinder => [Family::Cylindrical, Family::CylindricalPrime],
            Geometry::Sphere => [Family::Spherical, Family::SphericalPrime],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Poly1,
    Poly2,
    Conical,
    ConicalPrime,
    Cylindrical,
    CylindricalPrime,
    Spherical,
    SphericalPrime,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Poly1,
        Family::Poly2,
        Family::Conical,
        Family::ConicalPrime,
        Family::Cylindrical,
        Family::CylindricalPrime,
        Family::Spherical,
        Family::SphericalPrime,
    ];

    /// Short tag used in witness ids and reports.
    pub fn tag(self) -> &'static str {
        match self {
            Family::Poly1 => "poly1",
            Family::Poly2 => "poly2",
            Family::Conical => "con",
            Family::ConicalPrime => "conp",
            Family::Cylindrical => "cyl",
            Family::CylindricalPrime => "cylp",
            Family::Spherical => "sph",
            Family::SphericalPrime => "sphp",
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.tag() == s)
    }

    pub fn geometry(self) -> Geometry {
        match self {
            Family::Poly1 | Family::Poly2 => Geometry::Polygon,
            Family::Conical | Family::ConicalPrime => Geometry::Cone,
            Family::Cylindrical | Family::CylindricalPrime => Geometry::Cylinder,
            Family::Spherical | Family::SphericalPrime => Geometry::Sphere,
        }
    }

    pub fn is_primed(self) -> bool {
        matches!(self, Family::ConicalPrime | Family::CylindricalPrime | Family::SphericalPrime)
    }

    /// Number of discrete members (angles excluded).
    pub fn size(self) -> usize {
        match self.geometry() {
            Geometry::Polygon => 16,
            Geometry::Cone => 48,
            Geometry::Cylinder => 36,
            Geometry::Sphere => 18,
        }
    }

    /// The `k'j'l'` labels allowed for the first operator.
    pub fn z_triples(self) -> &'static [Triple] {
        match self.geometry() {
            Geometry::Polygon => &[[3, 3, 3]],
            Geometry::Cone => &CONE_Z,
            Geometry::Cylinder | Geometry::Sphere => &AXIS_Z,
        }
    }

    /// The `kjl` labels allowed for the coupled operators.
    pub fn kjl_triples(self) -> &'static [Triple] {
        if self.is_primed() {
            &KJL_PRIMED
        } else {
            &KJL
        }
    }

    /// `O111` for unprimed families, `O222` for primed ones.
    pub fn x_triple(self) -> Triple {
        if self.is_primed() {
            [2, 2, 2]
        } else {
            [1, 1, 1]
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

const CONE_Z: [Triple; 4] = [[3, 3, 3], [3, 3, 0], [3, 0, 3], [0, 3, 3]];
const AXIS_Z: [Triple; 3] = [[3, 0, 0], [0, 3, 0], [0, 0, 3]];
const KJL: [Triple; 3] = [[1, 2, 2], [2, 1, 2], [2, 2, 1]];
const KJL_PRIMED: [Triple; 3] = [[2, 1, 1], [1, 2, 1], [1, 1, 2]];

/// Cyclic partners `(lkj, jlk)` of `kjl`.
pub fn cyclic_partners(kjl: Triple) -> (Triple, Triple) {
    let [k, j, l] = kjl;
    ([l, k, j], [j, l, k])
}

/// `(−1)^bit`.
pub fn sign(bit: u8) -> f64 {
    if bit.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Discrete labels of a witness.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WitnessKind {
    Poly1 { i: [u8; 4] },
    Poly2 { i: [u8; 4] },
    Conical { primed: bool, zt: Triple, kjl: Triple, i: u8, plus: bool },
    Cylindrical { primed: bool, zt: Triple, kjl: Triple, i1: u8, i2: u8 },
    Spherical { primed: bool, zt: Triple, kjl: Triple, i: u8 },
}

/// Continuous plane parameters of the curved families.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Angle {
    Psi(f64),
    Sphere { eta: f64, zeta: f64 },
}

/// A witness: family labels, optional angle, and the qudit embedding of
/// the third party (the qubit embedding for `2⊗2⊗2`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WitnessId {
    pub kind: WitnessKind,
    pub angle: Option<Angle>,
    pub embedding: QuditEmbedding,
}

impl WitnessId {
    pub fn new(kind: WitnessKind) -> Result<Self> {
        let id = Self { kind, angle: None, embedding: QuditEmbedding::qubit() };
        id.validate()?;
        Ok(id)
    }

    pub fn poly1(i: [u8; 4]) -> Self {
        Self::new(WitnessKind::Poly1 { i }).expect("valid poly1 labels")
    }

    pub fn poly2(i: [u8; 4]) -> Self {
        Self::new(WitnessKind::Poly2 { i }).expect("valid poly2 labels")
    }

    pub fn conical(primed: bool, zt: Triple, kjl: Triple, i: u8, plus: bool) -> Result<Self> {
        Self::new(WitnessKind::Conical { primed, zt, kjl, i, plus })
    }

    pub fn cylindrical(primed: bool, zt: Triple, kjl: Triple, i1: u8, i2: u8) -> Result<Self> {
        Self::new(WitnessKind::Cylindrical { primed, zt, kjl, i1, i2 })
    }

    pub fn spherical(primed: bool, zt: Triple, kjl: Triple, i: u8) -> Result<Self> {
        Self::new(WitnessKind::Spherical { primed, zt, kjl, i })
    }

    pub fn with_psi(mut self, psi: f64) -> Self {
        self.angle = Some(Angle::Psi(psi));
        self
    }

    pub fn with_sphere_angles(mut self, eta: f64, zeta: f64) -> Self {
        self.angle = Some(Angle::Sphere { eta, zeta });
        self
    }

    pub fn with_embedding(mut self, embedding: QuditEmbedding) -> Self {
        self.embedding = embedding;
        self
    }

    pub fn without_angle(mut self) -> Self {
        self.angle = None;
        self
    }

    pub fn family(&self) -> Family {
        match self.kind {
            WitnessKind::Poly1 { .. } => Family::Poly1,
            WitnessKind::Poly2 { .. } => Family::Poly2,
            WitnessKind::Conical { primed: false, .. } => Family::Conical,
            WitnessKind::Conical { primed: true, .. } => Family::ConicalPrime,
            WitnessKind::Cylindrical { primed: false, .. } => Family::Cylindrical,
            WitnessKind::Cylindrical { primed: true, .. } => Family::CylindricalPrime,
            WitnessKind::Spherical { primed: false, .. } => Family::Spherical,
            WitnessKind::Spherical { primed: true, .. } => Family::SphericalPrime,
        }
    }

    pub fn psi(&self) -> Option<f64> {
        match self.angle {
            Some(Angle::Psi(p)) => Some(p),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |why: &str| Err(Error::BadWitnessId(format!("{}: {why}", self.label())));
        let bits_ok = |bits: &[u8]| bits.iter().all(|&b| b < 2);
        let family = self.family();
        let (zt, kjl) = match self.kind {
            WitnessKind::Poly1 { i } | WitnessKind::Poly2 { i } => {
                if !bits_ok(&i) {
                    return bad("sign labels must be 0 or 1");
                }
                return match self.angle {
                    None => Ok(()),
                    Some(_) => bad("polygonal witnesses take no angle"),
                };
            }
            WitnessKind::Conical { zt, kjl, i, .. } | WitnessKind::Spherical { zt, kjl, i, .. } => {
                if i > 1 {
                    return bad("sign label must be 0 or 1");
                }
                (zt, kjl)
            }
            WitnessKind::Cylindrical { zt, kjl, i1, i2, .. } => {
                if !bits_ok(&[i1, i2]) {
                    return bad("sign labels must be 0 or 1");
                }
                (zt, kjl)
            }
        };
        if !family.z_triples().contains(&zt) {
            return bad("first triple not in this family");
        }
        if !family.kjl_triples().contains(&kjl) {
            return bad("coupled triple not in this family");
        }
        match (family.geometry(), self.angle) {
            (_, None) => Ok(()),
            (Geometry::Sphere, Some(Angle::Sphere { .. })) => Ok(()),
            (Geometry::Cone | Geometry::Cylinder, Some(Angle::Psi(_))) => Ok(()),
            _ => bad("angle does not match family"),
        }
    }

    /// Discrete part of the id, without angle or embedding.
    pub fn label(&self) -> String {
        let t = |x: Triple| x.iter().map(|d| char::from(b'0' + d)).collect::<String>();
        let bits = |b: &[u8]| b.iter().map(|d| char::from(b'0' + d)).collect::<String>();
        let tag = self.family().tag();
        match self.kind {
            WitnessKind::Poly1 { i } | WitnessKind::Poly2 { i } => format!("{tag}:{}", bits(&i)),
            WitnessKind::Conical { zt, kjl, i, plus, .. } => {
                format!("{tag}:{}:{}:{i}:{}", t(zt), t(kjl), if plus { '+' } else { '-' })
            }
            WitnessKind::Cylindrical { zt, kjl, i1, i2, .. } => format!("{tag}:{}:{}:{i1}{i2}", t(zt), t(kjl)),
            WitnessKind::Spherical { zt, kjl, i, .. } => format!("{tag}:{}:{}:{i}", t(zt), t(kjl)),
        }
    }
}

impl fmt::Display for WitnessId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())?;
        match self.angle {
            Some(Angle::Psi(p)) => write!(f, ":psi={}", p + 0.0)?,
            Some(Angle::Sphere { eta, zeta }) => write!(f, ":eta={}:zeta={}", eta + 0.0, zeta + 0.0)?,
            None => {}
        }
        if !self.embedding.is_qubit() {
            let e = self.embedding;
            write!(f, ":d={}:alpha={}:beta={}", e.d, e.alpha, e.beta)?;
        }
        Ok(())
    }
}

fn parse_bits<const N: usize>(s: &str) -> Option<[u8; N]> {
    let b = s.as_bytes();
    if b.len() != N || b.iter().any(|c| !matches!(c, b'0' | b'1')) {
        return None;
    }
    Some(core::array::from_fn(|k| b[k] - b'0'))
}

impl FromStr for WitnessId {
    type Err = Error;

    /// Grammar: `family:labels[:key=value]*`, e.g. `poly1:1101`,
    /// `con:333:221:0:+:psi=0.3`, `cyl:300:122:01`, `sph:300:122:0:eta=1:zeta=2`,
    /// with optional `:d=3:alpha=0:beta=2`.
    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::BadWitnessId(s.to_string());
        let parts: Vec<&str> = s.trim().split(':').collect();
        let family = Family::from_tag(parts[0]).ok_or_else(err)?;
        let n_labels = match family.geometry() {
            Geometry::Polygon => 1,
            Geometry::Cone => 4,
            Geometry::Cylinder | Geometry::Sphere => 3,
        };
        if parts.len() < 1 + n_labels {
            return Err(err());
        }
        let labels = &parts[1..=n_labels];
        let primed = family.is_primed();
        let kind = match family.geometry() {
            Geometry::Polygon => {
                let i = parse_bits::<4>(labels[0]).ok_or_else(err)?;
                if family == Family::Poly1 {
                    WitnessKind::Poly1 { i }
                } else {
                    WitnessKind::Poly2 { i }
                }
            }
            Geometry::Cone => {
                let plus = match labels[3] {
                    "+" => true,
                    "-" => false,
                    _ => return Err(err()),
                };
                WitnessKind::Conical {
                    primed,
                    zt: parse_triple(labels[0]).ok_or_else(err)?,
                    kjl: parse_triple(labels[1]).ok_or_else(err)?,
                    i: parse_bits::<1>(labels[2]).ok_or_else(err)?[0],
                    plus,
                }
            }
            Geometry::Cylinder => {
                let [i1, i2] = parse_bits::<2>(labels[2]).ok_or_else(err)?;
                WitnessKind::Cylindrical {
                    primed,
                    zt: parse_triple(labels[0]).ok_or_else(err)?,
                    kjl: parse_triple(labels[1]).ok_or_else(err)?,
                    i1,
                    i2,
                }
            }
            Geometry::Sphere => WitnessKind::Spherical {
                primed,
                zt: parse_triple(labels[0]).ok_or_else(err)?,
                kjl: parse_triple(labels[1]).ok_or_else(err)?,
                i: parse_bits::<1>(labels[2]).ok_or_else(err)?[0],
            },
        };
        let (mut psi, mut eta, mut zeta) = (None, None, None);
        let (mut d, mut alpha, mut beta) = (None, None, None);
        for kv in &parts[1 + n_labels..] {
            let (key, value) = kv.split_once('=').ok_or_else(err)?;
            let real = || value.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(err);
            let int = || value.parse::<usize>().map_err(|_| err());
            let slot_taken = match key {
                "psi" => psi.replace(real()?).is_some(),
                "eta" => eta.replace(real()?).is_some(),
                "zeta" => zeta.replace(real()?).is_some(),
                "d" => d.replace(int()?).is_some(),
                "alpha" => alpha.replace(int()?).is_some(),
                "beta" => beta.replace(int()?).is_some(),
                _ => return Err(err()),
            };
            if slot_taken {
                return Err(err());
            }
        }
        let angle = match (psi, eta, zeta) {
            (None, None, None) => None,
            (Some(p), None, None) => Some(Angle::Psi(p)),
            (None, Some(eta), Some(zeta)) => Some(Angle::Sphere { eta, zeta }),
            _ => return Err(err()),
        };
        let embedding = match (d, alpha, beta) {
            (None, None, None) => QuditEmbedding::qubit(),
            (Some(d), a, b) => QuditEmbedding::new(d, a.unwrap_or(0), b.unwrap_or(1))?,
            _ => return Err(err()),
        };
        let id = WitnessId { kind, angle, embedding };
        id.validate()?;
        Ok(id)
    }
}
