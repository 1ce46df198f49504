//! Deterministic Monte Carlo detection scans over random chessboard
//! states, and the deterministic one-parameter comparison curve.
//!
//! Sample `i` of a scan seeded `s` draws from its own stream
//! [`sample_stream`]`(s, i)` (ChaCha8, stream number `i`), so any
//! partition of the index range over workers yields identical records.
//!
//! The default distribution draws every diagonal weight log-uniformly on
//! `[0.1, 10]`, every `r` uniformly on `[0, 1]` and every phase uniformly
//! on `[0, 2π)`. Qudit states use the tied diagonal, which keeps every draw
//! PPT when `γ ∉ {α, β}`.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use libm::pow;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chessboard::{
    build_rho_222, build_rho_22d, is_ppt, ChessParams222, ChessParams22d, Coupling, Slot, PPT_TOL,
};
use crate::error::{Error, Result};
use crate::optimality::golden_section;
use crate::tensorops::{QuditEmbedding, TripartiteDims};
use crate::witness::{detect_222, detect_22d, ChessParams, DetectionReport, Family, Geometry, MARGINAL_BAND};

pub const BATCHES: usize = 20;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Distribution {
    #[default]
    Default,
}

/// Third-party layout of a qudit scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuditLayout {
    pub d: usize,
    pub alpha: usize,
    pub beta: usize,
    pub gamma: usize,
    /// Minimize over every `(α, β)` embedding instead of only the state's.
    pub all_pairs: bool,
}

impl QuditLayout {
    /// `(α, β, γ) = (0, 2, 1)`.
    pub fn standard(d: usize) -> Result<Self> {
        let l = Self { d, alpha: 0, beta: 2, gamma: 1, all_pairs: false };
        l.validate()?;
        Ok(l)
    }

    pub fn validate(&self) -> Result<()> {
        QuditEmbedding::new(self.d, self.alpha, self.beta)?;
        if self.gamma >= self.d || self.gamma == self.alpha || self.gamma == self.beta {
            return Err(Error::InvalidParameter(alloc::format!(
                "gamma = {} must be below d = {} and distinct from alpha and beta",
                self.gamma,
                self.d
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanConfig {
    pub n: u64,
    pub seed: u64,
    /// `None` scans three-qubit states.
    pub qudit: Option<QuditLayout>,
    pub distribution: Distribution,
}

impl ScanConfig {
    pub fn qubits(n: u64, seed: u64) -> Self {
        Self { n, seed, qudit: None, distribution: Distribution::Default }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("a scan needs at least one sample".into()));
        }
        if let Some(q) = &self.qudit {
            q.validate()?;
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.qudit.map_or(2, |q| q.d)
    }
}

pub fn sample_stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn log_uniform<R: Rng>(rng: &mut R) -> f64 {
    pow(10.0, rng.random_range(-1.0..1.0))
}

fn coupling<R: Rng>(rng: &mut R) -> (f64, f64) {
    (rng.random_range(0.0..=1.0), rng.random_range(0.0..TAU))
}

pub fn sample_params_222<R: Rng>(rng: &mut R, _distribution: Distribution) -> ChessParams222 {
    let [a, b, c, d] = core::array::from_fn(|_| log_uniform(rng));
    let r = core::array::from_fn(|_| rng.random_range(0.0..=1.0));
    let phi = core::array::from_fn(|_| rng.random_range(0.0..TAU));
    ChessParams222 { a, b, c, d, r, phi }
}

pub fn sample_params_22d<R: Rng>(rng: &mut R, layout: &QuditLayout, _distribution: Distribution) -> ChessParams22d {
    let diag = core::array::from_fn(|_| (0..layout.d).map(|_| log_uniform(rng)).collect());
    let mut couplings = [[Coupling::ZERO; 3]; 2];
    for row in &mut couplings {
        for slot in Slot::ALL {
            let (r, phi) = coupling(rng);
            row[slot.index()] = Coupling { r, phi };
        }
    }
    ChessParams22d {
        d: layout.d,
        alpha: layout.alpha,
        beta: layout.beta,
        gamma: layout.gamma,
        diag,
        couplings,
        tied: true,
    }
}

pub fn sample_params<R: Rng>(rng: &mut R, cfg: &ScanConfig) -> ChessParams {
    match &cfg.qudit {
        None => ChessParams::Qubits(sample_params_222(rng, cfg.distribution)),
        Some(l) => ChessParams::Qudit(sample_params_22d(rng, l, cfg.distribution)),
    }
}

/// One scanned state.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleRecord {
    pub index: u64,
    pub params: ChessParams,
    /// Smallest partial-transpose eigenvalue over the three cuts.
    pub ppt_min_eig: f64,
    /// Per geometry, in [`Geometry::ALL`] order.
    pub minima: [f64; 4],
    pub detected: [bool; 4],
    pub any: bool,
    pub marginal: bool,
    /// Closed-form verdicts disagreeing with the minima outside the
    /// marginal band; always zero for qudit samples, which have no closed
    /// form.
    pub condition_disagreements: u32,
}

impl SampleRecord {
    pub fn detected_by(&self, g: Geometry) -> bool {
        self.detected[geometry_index(g)]
    }
}

fn geometry_index(g: Geometry) -> usize {
    Geometry::ALL.iter().position(|&x| x == g).expect("listed")
}

fn disagreements(rep: &DetectionReport) -> u32 {
    let Some(cond) = &rep.conditions else { return 0 };
    rep.families
        .iter()
        .filter(|m| m.min.abs() > MARGINAL_BAND && cond.verdict(m.family).detected != m.detected())
        .count() as u32
}

/// Draws, PPT-checks and classifies sample `index`.
pub fn evaluate_sample(cfg: &ScanConfig, index: u64) -> Result<SampleRecord> {
    let mut rng = sample_stream(cfg.seed, index);
    let params = sample_params(&mut rng, cfg);
    let (rho, dims, report) = match &params {
        ChessParams::Qubits(p) => (build_rho_222(p)?, TripartiteDims::three_qubits(), detect_222(p)?),
        ChessParams::Qudit(p) => {
            let layout = cfg.qudit.expect("qudit params come from a qudit layout");
            let pairs = layout.all_pairs.then(|| QuditEmbedding::all_pairs(p.d));
            (build_rho_22d(p)?, TripartiteDims::qubits_with(p.d), detect_22d(p, pairs.as_deref())?)
        }
    };
    let ppt = is_ppt(&rho, dims, PPT_TOL)?;
    if !ppt.ppt {
        let (cut, min_eig) = ppt.min_eigs.iter().copied().min_by(|a, b| a.1.total_cmp(&b.1)).expect("three cuts");
        return Err(Error::PptViolation { index, min_eig, cut: cut.label() });
    }
    let minima = Geometry::ALL.map(|g| report.geometry_min(g).min);
    let detected = Geometry::ALL.map(|g| report.detected_by(g));
    Ok(SampleRecord {
        index,
        params,
        ppt_min_eig: ppt.min(),
        minima,
        detected,
        any: report.detected_any(),
        marginal: report.any_marginal(),
        condition_disagreements: disagreements(&report),
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Counters {
    samples: u64,
    by: [u64; 4],
    any: u64,
    /// `[x][y]`: detected by `x` and not by `y`.
    and_not: [[u64; 4]; 4],
    /// `[x][y]`: detected by both.
    both: [[u64; 4]; 4],
    marginal: u64,
    disagreements: u64,
}

impl Counters {
    fn add(&mut self, r: &SampleRecord) {
        self.samples += 1;
        for x in 0..4 {
            self.by[x] += r.detected[x] as u64;
            for y in 0..4 {
                self.and_not[x][y] += (r.detected[x] && !r.detected[y]) as u64;
                self.both[x][y] += (r.detected[x] && r.detected[y]) as u64;
            }
        }
        self.any += r.any as u64;
        self.marginal += r.marginal as u64;
        self.disagreements += r.condition_disagreements as u64;
    }
}

/// Count and ratio of one detection category, with the spread of the
/// ratio over [`BATCHES`] contiguous batches.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tally {
    pub count: u64,
    pub ratio: f64,
    pub batch_mean: f64,
    /// Population standard deviation.
    pub batch_std: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanSummary {
    pub samples: u64,
    /// Every scanned sample is checked; a non-PPT draw aborts the scan.
    pub ppt_valid: u64,
    pub by_geometry: [(Geometry, Tally); 4],
    pub any: Tally,
    /// Detected by the first geometry and not by the second.
    pub and_not: Vec<(Geometry, Geometry, Tally)>,
    /// Detected by both geometries of each unordered pair.
    pub both: Vec<(Geometry, Geometry, Tally)>,
    pub marginal: u64,
    pub condition_disagreements: u64,
}

impl ScanSummary {
    pub fn geometry(&self, g: Geometry) -> &Tally {
        &self.by_geometry[geometry_index(g)].1
    }

    pub fn and_not(&self, x: Geometry, y: Geometry) -> Option<&Tally> {
        self.and_not.iter().find(|(a, b, _)| *a == x && *b == y).map(|(_, _, t)| t)
    }

    pub fn both(&self, x: Geometry, y: Geometry) -> Option<&Tally> {
        self.both.iter().find(|(a, b, _)| (*a, *b) == (x, y) || (*a, *b) == (y, x)).map(|(_, _, t)| t)
    }
}

/// Folds records (in any order) into batch counters. Sample `i` of `n`
/// belongs to batch `⌊i·B/n⌋`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanAccumulator {
    n: u64,
    batches: Vec<Counters>,
}

impl ScanAccumulator {
    pub fn new(n: u64) -> Self {
        Self { n, batches: alloc::vec![Counters::default(); BATCHES] }
    }

    pub fn batch_of(&self, index: u64) -> usize {
        ((index as u128 * BATCHES as u128) / self.n.max(1) as u128) as usize
    }

    pub fn add(&mut self, r: &SampleRecord) -> Result<()> {
        if r.index >= self.n {
            return Err(Error::IndexOutOfRange { index: r.index as usize, bound: self.n as usize });
        }
        let b = self.batch_of(r.index);
        self.batches[b].add(r);
        Ok(())
    }

    pub fn finish(&self) -> ScanSummary {
        let mut total = Counters::default();
        for b in &self.batches {
            total.samples += b.samples;
            total.any += b.any;
            total.marginal += b.marginal;
            total.disagreements += b.disagreements;
            for x in 0..4 {
                total.by[x] += b.by[x];
                for y in 0..4 {
                    total.and_not[x][y] += b.and_not[x][y];
                    total.both[x][y] += b.both[x][y];
                }
            }
        }
        let tally = |pick: &dyn Fn(&Counters) -> u64| -> Tally {
            let count = pick(&total);
            let ratio = if total.samples == 0 { 0.0 } else { count as f64 / total.samples as f64 };
            let ratios: Vec<f64> =
                self.batches.iter().filter(|b| b.samples > 0).map(|b| pick(b) as f64 / b.samples as f64).collect();
            let k = ratios.len().max(1) as f64;
            let mean = ratios.iter().sum::<f64>() / k;
            let var = ratios.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / k;
            Tally { count, ratio, batch_mean: mean, batch_std: libm::sqrt(var) }
        };
        let by_geometry = core::array::from_fn(|x| (Geometry::ALL[x], tally(&|c| c.by[x])));
        let mut and_not = Vec::new();
        let mut both = Vec::new();
        for x in 0..4 {
            for y in 0..4 {
                if x != y {
                    and_not.push((Geometry::ALL[x], Geometry::ALL[y], tally(&|c| c.and_not[x][y])));
                }
                if x < y {
                    both.push((Geometry::ALL[x], Geometry::ALL[y], tally(&|c| c.both[x][y])));
                }
            }
        }
        ScanSummary {
            samples: total.samples,
            ppt_valid: total.samples,
            by_geometry,
            any: tally(&|c| c.any),
            and_not,
            both,
            marginal: total.marginal,
            condition_disagreements: total.disagreements,
        }
    }
}

/// Sequential scan; `on_record` sees every record in index order.
pub fn run_scan(cfg: &ScanConfig, mut on_record: impl FnMut(&SampleRecord)) -> Result<ScanSummary> {
    cfg.validate()?;
    let mut acc = ScanAccumulator::new(cfg.n);
    for i in 0..cfg.n {
        let r = evaluate_sample(cfg, i)?;
        acc.add(&r)?;
        on_record(&r);
    }
    Ok(acc.finish())
}

/// Trace of the best polygonal witness on the one-parameter family
/// `a = 1, b = c = t, d = 1/t, r = (1, 0, 0, 0)`.
pub fn comparison_curve(t: f64) -> f64 {
    2.0 * (3.0 * t - 3.0) / (2.0 + 3.0 * t + 3.0 / t)
}

pub fn comparison_state(t: f64) -> Result<ChessParams222> {
    ChessParams222::new(1.0, t, t, 1.0 / t, [1.0, 0.0, 0.0, 0.0], [0.0; 4])
}

/// Outcome of the deterministic comparisons.
#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonReport {
    pub min_value: f64,
    pub argmin: f64,
    /// The curve at `t = 0.346`, the argmin quoted for the earlier result.
    pub value_at_0346: f64,
    /// Best `Poly1` value of the full detector at `argmin`.
    pub detector_value: f64,
    pub detector_best: alloc::string::String,
    /// `(r, φ, detected)` over `a = b = c = d = 1`, `r1 = r2 = 1`,
    /// `r3 = r4 = r`, `φ1 = φ2 = 0`, `φ3 = φ4 = φ ∈ {0, π}`.
    pub separability_grid: Vec<(f64, f64, bool)>,
}

impl ComparisonReport {
    pub fn separable_cases_undetected(&self) -> bool {
        self.separability_grid.iter().all(|&(_, _, det)| !det)
    }
}

pub fn reproduce_comparison() -> Result<ComparisonReport> {
    let (argmin, min_value) = golden_section(|t| Ok(comparison_curve(t)), 1e-6, 1.0, 1e-12)?;
    let rep = detect_222(&comparison_state(argmin)?)?;
    let best = rep.family(Family::Poly1);
    let mut separability_grid = Vec::new();
    for k in 0..=20 {
        let r = k as f64 / 20.0;
        for phi in [0.0, PI] {
            let p = ChessParams222::new(1.0, 1.0, 1.0, 1.0, [1.0, 1.0, r, r], [0.0, 0.0, phi, phi])?;
            separability_grid.push((r, phi, detect_222(&p)?.detected_any()));
        }
    }
    Ok(ComparisonReport {
        min_value,
        argmin,
        value_at_0346: comparison_curve(0.346),
        detector_value: best.min,
        detector_best: best.best.label(),
        separability_grid,
    })
}
