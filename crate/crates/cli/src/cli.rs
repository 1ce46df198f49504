use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use chesswit::chessboard::{build_rho_222, build_rho_22d, is_ppt, PPT_TOL};
use chesswit::frgeom::{
    boundary_curve_check, min_expectation_over_products, sample_containment, CONTAINMENT_TOL, DEFAULT_ITERS,
    DEFAULT_STARTS, VALIDITY_TOL,
};
use chesswit::montecarlo::{reproduce_comparison, QuditLayout, ScanConfig};
use chesswit::optimality::is_optimal;
use chesswit::tensorops::{ComplexMatrix, QuditEmbedding, TripartiteDims};
use chesswit::witness::{build_witness, detect_222, detect_22d, Angle, ChessParams, Geometry, WitnessId};
use clap::{Args, Parser, Subcommand};

use crate::json;
use crate::params::{matrix_to_json, parse_matrix, parse_params};
use crate::report::{
    CompareJson, DetectJson, FrJson, OptimalityJson, PptJson, ProductStateJson, ScanJson, ValidityJson,
};
use crate::scan::scan_to_csv;

const WITNESS_HELP: &str = "Witness id: `family:labels[:key=value]*`.
Families and labels:
  poly1:i1i2i3i4, poly2:i1i2i3i4
  con|conp:ZT:KJL:i:(+|-)     e.g. con:333:221:0:+:psi=0.30
  cyl|cylp:ZT:KJL:i1i2        e.g. cyl:300:122:01:psi=1.2
  sph|sphp:ZT:KJL:i           e.g. sph:300:122:0:eta=1:zeta=2
Append :d=D:alpha=A:beta=B to place the third factor on levels A, B of a qudit.";

#[derive(Parser, Debug)]
#[command(
    name = "chesswit",
    version,
    about = "Chessboard PPT states and their polygonal, conical, cylindrical and spherical entanglement witnesses",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build the density matrix of a parameter file
    Rho(RhoArgs),
    /// Check positivity of every partial transpose
    Ppt(PptArgs),
    /// Minimize every witness family on a state
    Detect(DetectArgs),
    /// Monte Carlo detection scan over random states (CSV records)
    Scan(ScanArgs),
    /// Sample product states and check the feasible regions
    Fr(FrArgs),
    /// Minimize a witness over pure product states
    ValidateWitness(ValidateArgs),
    /// Decide optimality of a polygonal or conical witness
    Optimality(OptimalityArgs),
    /// Reproduce the one-parameter comparison curve and separability checks
    Compare(CompareArgs),
}

#[derive(Args, Debug, Clone)]
pub struct OutArg {
    /// Output file (default: stdout)
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RhoArgs {
    /// State parameters (JSON)
    #[arg(long, value_name = "FILE")]
    pub params: PathBuf,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Args, Debug)]
#[group(id = "input", required = true, multiple = false, args = ["params", "matrix"])]
pub struct PptArgs {
    /// State parameters (JSON)
    #[arg(long, value_name = "FILE")]
    pub params: Option<PathBuf>,
    /// Density matrix (JSON with dim, re, im)
    #[arg(long, value_name = "FILE")]
    pub matrix: Option<PathBuf>,
    /// Third-party dimension of a matrix input (default: dim / 4)
    #[arg(long, value_name = "INT")]
    pub d: Option<usize>,
    /// Eigenvalues above -tol count as nonnegative
    #[arg(long, value_name = "FLOAT", default_value_t = PPT_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Args, Debug)]
pub struct DetectArgs {
    /// State parameters (JSON)
    #[arg(long, value_name = "FILE")]
    pub params: PathBuf,
    /// Qudit witnesses on levels alpha < beta (default: the state's own)
    #[arg(long, value_name = "INT", requires = "beta")]
    pub alpha: Option<usize>,
    #[arg(long, value_name = "INT", requires = "alpha")]
    pub beta: Option<usize>,
    /// Minimize over every qudit embedding
    #[arg(long, conflicts_with_all = ["alpha", "beta"])]
    pub all_pairs: bool,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    /// Number of samples
    #[arg(long, value_name = "INT", default_value_t = 10_000)]
    pub n: u64,
    /// Random seed
    #[arg(long, value_name = "INT", default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: available cores); output does not depend on it
    #[arg(long, value_name = "INT")]
    pub workers: Option<usize>,
    /// Third-party dimension
    #[arg(long, value_name = "INT", default_value_t = 2)]
    pub d: usize,
    /// Qudit levels of the coupled pair and the third coupled level
    #[arg(long, value_name = "INT", default_value_t = 0)]
    pub alpha: usize,
    #[arg(long, value_name = "INT", default_value_t = 2)]
    pub beta: usize,
    #[arg(long, value_name = "INT", default_value_t = 1)]
    pub gamma: usize,
    /// Minimize qudit witnesses over every embedding
    #[arg(long)]
    pub all_pairs: bool,
    /// Write the summary (JSON) here; otherwise a short summary goes to stderr
    #[arg(long, value_name = "FILE")]
    pub summary: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Args, Debug)]
pub struct FrArgs {
    /// polygon, cone, cylinder, sphere or all
    #[arg(long, value_name = "NAME", default_value = "all")]
    pub geometry: String,
    /// Random product states per geometry
    #[arg(long, value_name = "INT", default_value_t = 100_000)]
    pub samples: usize,
    /// Random seed
    #[arg(long, value_name = "INT", default_value_t = 0)]
    pub seed: u64,
    /// Containment tolerance
    #[arg(long, value_name = "FLOAT", default_value_t = CONTAINMENT_TOL)]
    pub tol: f64,
    /// Third-party dimension
    #[arg(long, value_name = "INT", default_value_t = 2)]
    pub d: usize,
    #[arg(long, value_name = "INT", default_value_t = 0)]
    pub alpha: usize,
    #[arg(long, value_name = "INT", default_value_t = 1)]
    pub beta: usize,
    /// Points on the analytic boundary sweep (polygon and cone)
    #[arg(long, value_name = "INT", default_value_t = 1000)]
    pub sweep: usize,
    /// Also write the sampled (P1, P2, P3) points as CSV
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    #[arg(long, value_name = "ID", help = "Witness id, e.g. poly1:1101 or con:333:221:0:+:psi=0.30", long_help = WITNESS_HELP)]
    pub witness: String,
    /// Plane angle for conical and cylindrical ids
    #[arg(long, value_name = "FLOAT")]
    pub psi: Option<f64>,
    /// Random starts of the product-state minimizer
    #[arg(long, value_name = "INT", default_value_t = DEFAULT_STARTS)]
    pub starts: usize,
    /// Sweeps per start
    #[arg(long, value_name = "INT", default_value_t = DEFAULT_ITERS)]
    pub iters: usize,
    /// Random seed
    #[arg(long, value_name = "INT", default_value_t = 0)]
    pub seed: u64,
    /// Minima above -tol count as valid
    #[arg(long, value_name = "FLOAT", default_value_t = -VALIDITY_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Args, Debug)]
pub struct OptimalityArgs {
    #[arg(long, value_name = "ID", help = "Witness id, e.g. poly1:1101 or con:333:221:0:+:psi=0.30", long_help = WITNESS_HELP)]
    pub witness: String,
    /// Plane angle of a conical id
    #[arg(long, value_name = "FLOAT")]
    pub psi: Option<f64>,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[command(flatten)]
    pub out: OutArg,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn emit(out: &OutArg, text: &str) -> Result<()> {
    match &out.out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn emit_json<T: serde::Serialize>(out: &OutArg, v: &T) -> Result<()> {
    emit(out, &json::to_string(v)?)
}

fn rho_of(p: &ChessParams) -> Result<(ComplexMatrix, TripartiteDims)> {
    Ok(match p {
        ChessParams::Qubits(p) => (build_rho_222(p)?, TripartiteDims::three_qubits()),
        ChessParams::Qudit(p) => (build_rho_22d(p)?, TripartiteDims::qubits_with(p.d)),
    })
}

fn parse_witness(id: &str, psi: Option<f64>) -> Result<WitnessId> {
    let id: WitnessId = id.parse()?;
    match psi {
        None => Ok(id),
        Some(_) if matches!(id.angle, Some(Angle::Sphere { .. })) || id.family().geometry() == Geometry::Sphere => {
            bail!("spherical witnesses take eta and zeta in the id, not --psi")
        }
        Some(_) if id.family().geometry() == Geometry::Polygon => bail!("polygonal witnesses have no angle"),
        Some(p) => Ok(id.with_psi(p)),
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Rho(a) => {
            let (rho, _) = rho_of(&parse_params(&read(&a.params)?)?)?;
            emit(&a.out, &matrix_to_json(&rho)?)
        }
        Command::Ppt(a) => {
            let (rho, dims) = match (&a.params, &a.matrix) {
                (Some(p), _) => rho_of(&parse_params(&read(p)?)?)?,
                (None, Some(m)) => {
                    let rho = parse_matrix(&read(m)?)?;
                    let d = a.d.unwrap_or(rho.dim() / 4);
                    let dims = TripartiteDims::qubits_with(d);
                    if d < 2 || dims.total() != rho.dim() {
                        bail!("a {0}x{0} matrix is not a 2x2x{d} operator", rho.dim());
                    }
                    (rho, dims)
                }
                (None, None) => unreachable!("clap requires one input"),
            };
            emit_json(&a.out, &PptJson::from(&is_ppt(&rho, dims, a.tol)?))
        }
        Command::Detect(a) => {
            let report = match parse_params(&read(&a.params)?)? {
                ChessParams::Qubits(p) => detect_222(&p)?,
                ChessParams::Qudit(p) => {
                    let embeddings = match (a.all_pairs, a.alpha, a.beta) {
                        (true, _, _) => Some(QuditEmbedding::all_pairs(p.d)),
                        (false, Some(al), Some(be)) => Some(vec![QuditEmbedding::new(p.d, al, be)?]),
                        _ => None,
                    };
                    detect_22d(&p, embeddings.as_deref())?
                }
            };
            emit_json(&a.out, &DetectJson::from(&report))
        }
        Command::Scan(a) => {
            let qudit = (a.d != 2).then_some(QuditLayout {
                d: a.d,
                alpha: a.alpha,
                beta: a.beta,
                gamma: a.gamma,
                all_pairs: a.all_pairs,
            });
            if a.d < 2 {
                bail!("d = {} must be at least 2", a.d);
            }
            let cfg = ScanConfig { n: a.n, seed: a.seed, qudit, ..ScanConfig::qubits(a.n, a.seed) };
            cfg.validate()?;
            let workers = a.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let summary = match &a.out.out {
                Some(p) => {
                    let f = fs::File::create(p).with_context(|| format!("cannot write {}", p.display()))?;
                    scan_to_csv(&cfg, workers, io::BufWriter::new(f))?
                }
                None => scan_to_csv(&cfg, workers, io::stdout().lock())?,
            };
            let doc = ScanJson::new(&cfg, &summary);
            match &a.summary {
                Some(p) => {
                    fs::write(p, json::to_string(&doc)?).with_context(|| format!("cannot write {}", p.display()))?
                }
                None => {
                    let pct = |t: &chesswit::montecarlo::Tally| 100.0 * t.ratio;
                    eprintln!(
                        "{} samples: polygon {:.3}%, cone {:.3}%, cylinder {:.3}%, sphere {:.3}%, any {:.3}%",
                        summary.samples,
                        pct(summary.geometry(Geometry::Polygon)),
                        pct(summary.geometry(Geometry::Cone)),
                        pct(summary.geometry(Geometry::Cylinder)),
                        pct(summary.geometry(Geometry::Sphere)),
                        pct(&summary.any),
                    );
                }
            }
            Ok(())
        }
        Command::Fr(a) => {
            let geometries: Vec<Geometry> = if a.geometry == "all" {
                Geometry::ALL.to_vec()
            } else {
                vec![Geometry::from_name(&a.geometry).with_context(|| {
                    format!("unknown geometry `{}` (expected polygon, cone, cylinder, sphere or all)", a.geometry)
                })?]
            };
            let emb = QuditEmbedding::new(a.d, a.alpha, a.beta)?;
            let mut points = match &a.csv {
                Some(p) => {
                    let mut w = csv::Writer::from_path(p).with_context(|| format!("cannot write {}", p.display()))?;
                    w.write_record(["geometry", "p1", "p2", "p3"])?;
                    Some(w)
                }
                None => None,
            };
            let mut docs = Vec::new();
            for g in geometries {
                let mut csv_err = None;
                let rep = sample_containment(g, emb, a.samples, a.seed, a.tol, |pt| {
                    if let Some(w) = points.as_mut() {
                        let row = [g.name().to_string(), json::fmt17(pt.p1), json::fmt17(pt.p2), json::fmt17(pt.p3)];
                        if let Err(e) = w.write_record(row) {
                            csv_err.get_or_insert(e);
                        }
                    }
                })?;
                if let Some(e) = csv_err {
                    return Err(e.into());
                }
                let residual = match g {
                    Geometry::Polygon | Geometry::Cone => Some(boundary_curve_check(g, a.sweep)?),
                    _ => None,
                };
                docs.push(FrJson::new(&rep, a.tol, residual));
            }
            if let Some(mut w) = points {
                w.flush()?;
            }
            if docs.len() == 1 {
                emit_json(&a.out, &docs[0])
            } else {
                emit_json(&a.out, &docs)
            }
        }
        Command::ValidateWitness(a) => {
            let id = parse_witness(&a.witness, a.psi)?;
            let w = build_witness(&id)?;
            let dims = TripartiteDims::qubits_with(id.embedding.d);
            let m = min_expectation_over_products(&w, dims, a.starts, a.iters, a.seed)?;
            emit_json(
                &a.out,
                &ValidityJson {
                    witness: id.to_string(),
                    min: json::Num(m.value),
                    valid: m.value >= -a.tol,
                    tol: json::Num(a.tol),
                    starts: a.starts,
                    iters: a.iters,
                    seed: a.seed,
                    argmin: ProductStateJson::from(&m.argmin),
                },
            )
        }
        Command::Optimality(a) => {
            let id = parse_witness(&a.witness, a.psi)?;
            emit_json(&a.out, &OptimalityJson::from(&is_optimal(&id, None)?))
        }
        Command::Compare(a) => emit_json(&a.out, &CompareJson::from(&reproduce_comparison()?)),
    }
}

/// Help of the top-level command and every subcommand, as printed by
/// `--help`.
pub fn full_help() -> String {
    use clap::CommandFactory;
    let mut cmd = Cli::command();
    cmd.build();
    let mut out = cmd.render_long_help().to_string();
    for sub in cmd.get_subcommands_mut() {
        out.push_str("\n\n");
        out.push_str(&format!("==== chesswit {} ====\n", sub.get_name()));
        out.push_str(&sub.render_long_help().to_string());
    }
    out
}
