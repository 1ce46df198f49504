//! Parameter and matrix file formats.

use anyhow::{bail, Context, Result};
use chesswit::chessboard::{ChessParams222, ChessParams22d, Coupling, Slot};
use chesswit::tensorops::ComplexMatrix;
use chesswit::witness::ChessParams;
use chesswit::Complex64;
use serde::{Deserialize, Deserializer, Serialize};

use crate::json::Num;

/// A real given either as a JSON number or as a decimal string.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Real(pub f64);

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(Real(x)),
            Raw::Str(s) => s.trim().parse().map(Real).map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Qubits {
    a: Real,
    b: Real,
    c: Real,
    d: Real,
    r: [Real; 4],
    phi: [Real; 4],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CouplingEntry {
    j: usize,
    slot: String,
    r: Real,
    phi: Real,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Qudit {
    dim: usize,
    alpha: usize,
    beta: usize,
    gamma: usize,
    diag: [Vec<Real>; 2],
    #[serde(default)]
    couplings: Vec<CouplingEntry>,
    #[serde(default = "yes")]
    tied: bool,
}

fn yes() -> bool {
    true
}

fn reals<const N: usize>(xs: [Real; N]) -> [f64; N] {
    xs.map(|x| x.0)
}

pub fn parse_params(text: &str) -> Result<ChessParams> {
    let value: serde_json::Value = serde_json::from_str(text).context("parameter file is not valid JSON")?;
    if value.get("dim").is_some() {
        let q: Qudit = serde_json::from_value(value).context("malformed 2x2xd parameters")?;
        let mut p = ChessParams22d {
            d: q.dim,
            alpha: q.alpha,
            beta: q.beta,
            gamma: q.gamma,
            diag: q.diag.map(|row| row.into_iter().map(|x| x.0).collect()),
            couplings: [[Coupling::ZERO; 3]; 2],
            tied: q.tied,
        };
        for c in q.couplings {
            if c.j > 1 {
                bail!("coupling row j = {} must be 0 or 1", c.j);
            }
            let slot = Slot::from_label(&c.slot)
                .with_context(|| format!("unknown coupling slot `{}` (expected ab, ba or gg)", c.slot))?;
            p.set_coupling(c.j, slot, Coupling { r: c.r.0, phi: c.phi.0 });
        }
        p.validate()?;
        Ok(ChessParams::Qudit(p))
    } else {
        let q: Qubits = serde_json::from_value(value).context("malformed 2x2x2 parameters")?;
        let p = ChessParams222::new(q.a.0, q.b.0, q.c.0, q.d.0, reals(q.r), reals(q.phi))?;
        Ok(ChessParams::Qubits(p))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile<T> {
    dim: usize,
    re: Vec<Vec<T>>,
    im: Vec<Vec<T>>,
}

pub fn matrix_to_json(m: &ComplexMatrix) -> serde_json::Result<String> {
    let n = m.dim();
    let part = |f: fn(Complex64) -> f64| (0..n).map(|i| (0..n).map(|j| Num(f(m[(i, j)]))).collect()).collect();
    crate::json::to_string(&MatrixFile { dim: n, re: part(|z| z.re), im: part(|z| z.im) })
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let f: MatrixFile<Real> = serde_json::from_str(text).context("malformed matrix file")?;
    let n = f.dim;
    if f.re.len() != n || f.im.len() != n || f.re.iter().chain(&f.im).any(|row| row.len() != n) {
        bail!("matrix file rows do not match dim = {n}");
    }
    let data = (0..n * n).map(|k| Complex64::new(f.re[k / n][k % n].0, f.im[k / n][k % n].0)).collect();
    Ok(ComplexMatrix::from_row_major(n, data)?)
}
