//! JSON documents written by the subcommands.

use std::collections::BTreeMap;

use chesswit::chessboard::PptReport;
use chesswit::frgeom::{ContainmentReport, ProductState, ThirdFactor};
use chesswit::montecarlo::{ComparisonReport, ScanConfig, ScanSummary, Tally};
use chesswit::optimality::OptimalityVerdict;
use chesswit::witness::{DetectionReport, Family, Geometry, Verdict};
use serde::Serialize;

use crate::json::{nums, Num};

#[derive(Serialize)]
pub struct PptJson {
    pub ppt: bool,
    pub tol: Num,
    pub min: Num,
    /// Keyed by the transposed parties, e.g. `"13"`.
    pub min_eigs: BTreeMap<String, Num>,
}

impl From<&PptReport> for PptJson {
    fn from(r: &PptReport) -> Self {
        Self {
            ppt: r.ppt,
            tol: Num(r.tol),
            min: Num(r.min()),
            min_eigs: r.min_eigs.iter().map(|(p, v)| (p.label(), Num(*v))).collect(),
        }
    }
}

#[derive(Serialize)]
pub struct FamilyJson {
    pub min: Num,
    pub best: String,
    pub detected: bool,
    pub marginal: bool,
}

#[derive(Serialize)]
pub struct VerdictJson {
    pub detected: bool,
    pub pair: [usize; 2],
    pub margin: Num,
}

impl From<&Verdict> for VerdictJson {
    fn from(v: &Verdict) -> Self {
        Self { detected: v.detected, pair: [v.pair.0, v.pair.1], margin: Num(v.margin) }
    }
}

#[derive(Serialize)]
pub struct Intermediates {
    pub x: Vec<Num>,
    pub y: Vec<Num>,
    pub z: Vec<Num>,
    pub u: Vec<Num>,
    pub v: Vec<Num>,
    pub w: Num,
    pub verdicts: BTreeMap<&'static str, VerdictJson>,
}

#[derive(Serialize)]
pub struct DetectJson {
    pub families: BTreeMap<&'static str, FamilyJson>,
    pub detected_by: BTreeMap<&'static str, bool>,
    pub detected: bool,
    pub best: String,
    /// Closed-form quantities; three-qubit input only.
    pub intermediates: Option<Intermediates>,
}

impl From<&DetectionReport> for DetectJson {
    fn from(r: &DetectionReport) -> Self {
        let families = r
            .families
            .iter()
            .map(|m| {
                let f = FamilyJson {
                    min: Num(m.min),
                    best: m.best.to_string(),
                    detected: m.detected(),
                    marginal: m.marginal(),
                };
                (m.family.tag(), f)
            })
            .collect();
        let detected_by = Geometry::ALL.iter().map(|&g| (g.name(), r.detected_by(g))).collect();
        let intermediates = r.conditions.as_ref().map(|c| Intermediates {
            x: nums(&c.x),
            y: nums(&c.y),
            z: nums(&c.z),
            u: nums(&c.u),
            v: nums(&c.v),
            w: Num(c.w()),
            verdicts: Family::ALL.iter().map(|&f| (f.tag(), VerdictJson::from(c.verdict(f)))).collect(),
        });
        Self { families, detected_by, detected: r.detected_any(), best: r.best().best.to_string(), intermediates }
    }
}

#[derive(Serialize)]
pub struct TallyJson {
    pub count: u64,
    pub ratio: Num,
    pub percent: Num,
    pub batch_mean: Num,
    pub batch_std: Num,
}

impl From<&Tally> for TallyJson {
    fn from(t: &Tally) -> Self {
        Self {
            count: t.count,
            ratio: Num(t.ratio),
            percent: Num(100.0 * t.ratio),
            batch_mean: Num(t.batch_mean),
            batch_std: Num(t.batch_std),
        }
    }
}

#[derive(Serialize)]
pub struct ScanJson {
    pub samples: u64,
    pub ppt_valid: u64,
    pub seed: u64,
    pub dim: usize,
    pub layout: Option<[usize; 3]>,
    pub all_pairs: bool,
    pub distribution: &'static str,
    pub detected: BTreeMap<&'static str, TallyJson>,
    /// Headline rows: single geometries, their union, and overlaps.
    pub table: BTreeMap<&'static str, TallyJson>,
    pub and_not: BTreeMap<String, TallyJson>,
    pub both: BTreeMap<String, TallyJson>,
    pub marginal: u64,
    pub condition_disagreements: u64,
}

pub const DEFAULT_DISTRIBUTION: &str =
    "diagonal weights log-uniform on [0.1, 10]; r uniform on [0, 1]; phases uniform on [0, 2pi); tied qudit diagonal";

impl ScanJson {
    pub fn new(cfg: &ScanConfig, s: &ScanSummary) -> Self {
        let mut detected: BTreeMap<&'static str, TallyJson> =
            s.by_geometry.iter().map(|(g, t)| (g.name(), TallyJson::from(t))).collect();
        detected.insert("any", (&s.any).into());
        let pick = |x, y| TallyJson::from(s.and_not(x, y).expect("all ordered pairs are tallied"));
        let both = |x, y| TallyJson::from(s.both(x, y).expect("all pairs are tallied"));
        use Geometry::{Cone, Polygon, Sphere};
        let table = BTreeMap::from([
            ("polygonal", s.geometry(Polygon).into()),
            ("conical", s.geometry(Cone).into()),
            ("spherical", s.geometry(Sphere).into()),
            ("all", (&s.any).into()),
            ("not_polygonal_but_conical", pick(Cone, Polygon)),
            ("not_polygonal_but_spherical", pick(Sphere, Polygon)),
            ("polygonal_and_spherical", both(Polygon, Sphere)),
            ("conical_and_spherical", both(Cone, Sphere)),
        ]);
        Self {
            samples: s.samples,
            ppt_valid: s.ppt_valid,
            seed: cfg.seed,
            dim: cfg.dim(),
            layout: cfg.qudit.map(|l| [l.alpha, l.beta, l.gamma]),
            all_pairs: cfg.qudit.is_some_and(|l| l.all_pairs),
            distribution: DEFAULT_DISTRIBUTION,
            detected,
            table,
            and_not: s.and_not.iter().map(|(x, y, t)| (format!("{}_not_{}", x.name(), y.name()), t.into())).collect(),
            both: s.both.iter().map(|(x, y, t)| (format!("{}_and_{}", x.name(), y.name()), t.into())).collect(),
            marginal: s.marginal,
            condition_disagreements: s.condition_disagreements,
        }
    }
}

#[derive(Serialize)]
pub struct FrJson {
    pub geometry: &'static str,
    pub samples: usize,
    pub violations: usize,
    pub max_excess: Num,
    pub tol: Num,
    pub boundary_residual: Option<Num>,
}

impl FrJson {
    pub fn new(r: &ContainmentReport, tol: f64, boundary_residual: Option<f64>) -> Self {
        Self {
            geometry: r.geometry.name(),
            samples: r.samples,
            violations: r.violations,
            max_excess: Num(r.max_excess),
            tol: Num(tol),
            boundary_residual: boundary_residual.map(Num),
        }
    }
}

#[derive(Serialize)]
#[serde(untagged)]
pub enum ThirdJson {
    Qubit { theta: Num, phi: Num },
    Qudit { re: Vec<Num>, im: Vec<Num> },
}

#[derive(Serialize)]
pub struct ProductStateJson {
    pub theta1: Num,
    pub phi1: Num,
    pub theta2: Num,
    pub phi2: Num,
    pub third: ThirdJson,
}

impl From<&ProductState> for ProductStateJson {
    fn from(s: &ProductState) -> Self {
        let third = match &s.third {
            ThirdFactor::Qubit(b) => ThirdJson::Qubit { theta: Num(b.theta), phi: Num(b.phi) },
            ThirdFactor::Qudit(v) => ThirdJson::Qudit {
                re: v.iter().map(|z| Num(z.re)).collect(),
                im: v.iter().map(|z| Num(z.im)).collect(),
            },
        };
        Self {
            theta1: Num(s.first.theta),
            phi1: Num(s.first.phi),
            theta2: Num(s.second.theta),
            phi2: Num(s.second.phi),
            third,
        }
    }
}

#[derive(Serialize)]
pub struct ValidityJson {
    pub witness: String,
    pub min: Num,
    pub valid: bool,
    pub tol: Num,
    pub starts: usize,
    pub iters: usize,
    pub seed: u64,
    pub argmin: ProductStateJson,
}

#[derive(Serialize)]
pub struct OptimalityJson {
    pub witness: String,
    pub psi: Option<Num>,
    pub optimal: bool,
    pub sigma_min: Num,
}

impl From<&OptimalityVerdict> for OptimalityJson {
    fn from(v: &OptimalityVerdict) -> Self {
        Self {
            witness: v.system.witness.to_string(),
            psi: v.system.psi.map(Num),
            optimal: v.optimal,
            sigma_min: Num(v.sigma_min),
        }
    }
}

#[derive(Serialize)]
pub struct GridPoint {
    pub r: Num,
    pub phi: Num,
    pub detected: bool,
}

#[derive(Serialize)]
pub struct CompareJson {
    pub min_value: Num,
    pub argmin: Num,
    pub value_at_0346: Num,
    pub detector_value: Num,
    pub detector_best: String,
    pub separable_cases_undetected: bool,
    pub separability_grid: Vec<GridPoint>,
}

impl From<&ComparisonReport> for CompareJson {
    fn from(r: &ComparisonReport) -> Self {
        Self {
            min_value: Num(r.min_value),
            argmin: Num(r.argmin),
            value_at_0346: Num(r.value_at_0346),
            detector_value: Num(r.detector_value),
            detector_best: r.detector_best.clone(),
            separable_cases_undetected: r.separable_cases_undetected(),
            separability_grid: r
                .separability_grid
                .iter()
                .map(|&(r, phi, detected)| GridPoint { r: Num(r), phi: Num(phi), detected })
                .collect(),
        }
    }
}
