use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::schottky::{boundary_cycles, certify, PingPongCertificate};
use crate::error::{Error, Result};
use crate::geometry::{trace_from_length, MobiusMap};

/// Euler characteristic, cusp and funnel counts, and funnel boundary lengths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Topology {
    pub chi: i64,
    pub n_cusps: usize,
    pub n_funnels: usize,
    pub funnel_lengths: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchottkyGroup {
    pub generators: Vec<MobiusMap>,
    pub certificate: PingPongCertificate,
    /// Boundary words, one per funnel, as signed generator labels.
    pub boundary_words: Vec<Vec<i32>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SurfaceModel {
    Cylinder { length: f64 },
    Funnel { length: f64 },
    Horn,
    Schottky(SchottkyGroup),
}

impl SurfaceModel {
    pub fn cylinder(length: f64) -> Result<Self> {
        check_length(length)?;
        Ok(SurfaceModel::Cylinder { length })
    }

    pub fn funnel(length: f64) -> Result<Self> {
        check_length(length)?;
        Ok(SurfaceModel::Funnel { length })
    }

    /// Builds a Schottky model after verifying ping-pong for the generators.
    pub fn schottky(generators: Vec<MobiusMap>) -> Result<Self> {
        let certificate = certify(&generators)?;
        let cycles = boundary_cycles(&generators, &certificate)?;
        let boundary_words =
            cycles.iter().map(|(w, _)| w.iter().map(|&x| super::schottky::signed_label(x)).collect()).collect();
        Ok(SurfaceModel::Schottky(SchottkyGroup { generators, certificate, boundary_words }))
    }

    pub fn topology(&self) -> Topology {
        match self {
            SurfaceModel::Cylinder { length } => {
                Topology { chi: 0, n_cusps: 0, n_funnels: 2, funnel_lengths: vec![*length, *length] }
            }
            SurfaceModel::Funnel { length } => {
                Topology { chi: 0, n_cusps: 0, n_funnels: 1, funnel_lengths: vec![*length] }
            }
            SurfaceModel::Horn => Topology { chi: 0, n_cusps: 1, n_funnels: 0, funnel_lengths: vec![] },
            SurfaceModel::Schottky(g) => {
                let lengths = boundary_cycles(&g.generators, &g.certificate)
                    .map(|c| c.into_iter().map(|(_, l)| l).collect::<Vec<_>>())
                    .unwrap_or_default();
                Topology {
                    chi: 1 - g.generators.len() as i64,
                    n_cusps: 0,
                    n_funnels: lengths.len(),
                    funnel_lengths: lengths,
                }
            }
        }
    }
}

fn check_length(l: f64) -> Result<()> {
    if l > 0.0 && l.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveLength(l))
    }
}

/// Pair-of-pants generators `A`, `B` with `|tr A|`, `|tr B|`, `|tr AB|` matching
/// the three boundary lengths; `tr AB` is negative.
pub fn pants_generators(l1: f64, l2: f64, l3: f64) -> Result<(MobiusMap, MobiusMap)> {
    for l in [l1, l2, l3] {
        check_length(l)?;
    }
    let lambda = (l1 / 2.0).exp();
    let a = MobiusMap::dilation(l1);
    let tb = trace_from_length(l2);
    let tab = trace_from_length(l3);
    // λp + t/λ = -tr|AB|, p + t = tr B, pt - qr = 1 with r = -q
    let p = (-tab - tb / lambda) / (lambda - 1.0 / lambda);
    let t = tb - p;
    let q = (1.0 - p * t).sqrt();
    if !q.is_finite() {
        return Err(Error::ConstructionFailed(format!("no real solution for lengths {l1}, {l2}, {l3}")));
    }
    let b = MobiusMap { a: p, b: q, c: -q, d: t };
    Ok((a, b))
}

/// Three-funnel Schottky model with the given boundary lengths.
pub fn pants_from_lengths(l1: f64, l2: f64, l3: f64) -> Result<SurfaceModel> {
    let (a, b) = pants_generators(l1, l2, l3)?;
    SurfaceModel::schottky(vec![a, b])
}

/// Textual model descriptor, e.g. `cylinder:1`, `pants:2,2,2`, `schottky:a,b,c,d/a,b,c,d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelDescriptor {
    Cylinder { length: f64 },
    Funnel { length: f64 },
    Horn,
    Pants { lengths: [f64; 3] },
    Schottky { generators: Vec<[f64; 4]> },
}

impl ModelDescriptor {
    pub fn build(&self) -> Result<SurfaceModel> {
        match self {
            ModelDescriptor::Cylinder { length } => SurfaceModel::cylinder(*length),
            ModelDescriptor::Funnel { length } => SurfaceModel::funnel(*length),
            ModelDescriptor::Horn => Ok(SurfaceModel::Horn),
            ModelDescriptor::Pants { lengths } => pants_from_lengths(lengths[0], lengths[1], lengths[2]),
            ModelDescriptor::Schottky { generators } => {
                let gens =
                    generators.iter().map(|g| MobiusMap::new(g[0], g[1], g[2], g[3])).collect::<Result<Vec<_>>>()?;
                SurfaceModel::schottky(gens)
            }
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| Error::DomainError(format!("bad number '{t}': {e}"))))
        .collect()
}

impl FromStr for ModelDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, params) = match s.split_once(':') {
            Some((k, p)) => (k.trim().to_ascii_lowercase(), p.trim()),
            None => (s.trim().to_ascii_lowercase(), ""),
        };
        let one = |v: Vec<f64>| -> Result<f64> {
            match v.as_slice() {
                [x] => Ok(*x),
                _ => Err(Error::DomainError(format!("model '{kind}' takes one length"))),
            }
        };
        match kind.as_str() {
            "cylinder" => Ok(ModelDescriptor::Cylinder { length: one(parse_list(params)?)? }),
            "funnel" => Ok(ModelDescriptor::Funnel { length: one(parse_list(params)?)? }),
            "horn" if params.is_empty() => Ok(ModelDescriptor::Horn),
            "pants" => match parse_list(params)?.as_slice() {
                [a, b, c] => Ok(ModelDescriptor::Pants { lengths: [*a, *b, *c] }),
                _ => Err(Error::DomainError("pants takes three lengths".into())),
            },
            "schottky" => {
                let generators = params
                    .split('/')
                    .map(|g| match parse_list(g)?.as_slice() {
                        [a, b, c, d] => Ok([*a, *b, *c, *d]),
                        _ => Err(Error::DomainError(format!("generator '{g}' needs four entries"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(ModelDescriptor::Schottky { generators })
            }
            _ => Err(Error::DomainError(format!("unknown model '{s}'"))),
        }
    }
}

impl fmt::Display for ModelDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelDescriptor::Cylinder { length } => write!(f, "cylinder:{length}"),
            ModelDescriptor::Funnel { length } => write!(f, "funnel:{length}"),
            ModelDescriptor::Horn => write!(f, "horn"),
            ModelDescriptor::Pants { lengths } => write!(f, "pants:{},{},{}", lengths[0], lengths[1], lengths[2]),
            ModelDescriptor::Schottky { generators } => {
                write!(f, "schottky:")?;
                for (i, g) in generators.iter().enumerate() {
                    if i > 0 {
                        write!(f, "/")?;
                    }
                    write!(f, "{},{},{},{}", g[0], g[1], g[2], g[3])?;
                }
                Ok(())
            }
        }
    }
}
