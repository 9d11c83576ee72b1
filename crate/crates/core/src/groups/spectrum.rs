use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::model::SurfaceModel;
use super::schottky::{inverse_letter, letter_matrix, signed_label, Letter};
use crate::error::{Error, Result};
use crate::geometry::{length_from_trace, MobiusMap};

/// Relative tolerance used to merge equal lengths into one entry.
pub const LENGTH_MERGE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrimitiveClass {
    /// Signed one-based generator labels; negative for inverses.
    pub word: Vec<i32>,
    pub length: f64,
    pub trace: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumEntry {
    pub length: f64,
    pub multiplicity: u64,
}

/// Records the lower bound that justifies pruning.
///
/// A cyclically reduced word `x₁…x_m` has length at least
/// `Σ_i side_distance[x_i⁻¹][x_{i+1}]` (indices cyclic), because its axis
/// crosses one translate of the fundamental domain per letter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PruningCertificate {
    pub basepoint: (f64, f64),
    pub min_step: f64,
    pub max_word_length: usize,
    pub side_distance: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LengthSpectrum {
    pub entries: Vec<SpectrumEntry>,
    pub l_max: f64,
    pub complete: bool,
    pub oriented: bool,
    /// True when the entries are boundary geodesics of a model end rather than closed geodesics.
    #[serde(default)]
    pub boundary_only: bool,
    /// True when no primitive class exists beyond the listed ones at any length.
    #[serde(default)]
    pub exhaustive: bool,
    pub certificate: Option<PruningCertificate>,
}

impl LengthSpectrum {
    pub fn from_lengths(mut lengths: Vec<f64>, l_max: f64, oriented: bool) -> Self {
        lengths.sort_by(f64::total_cmp);
        let mut entries: Vec<SpectrumEntry> = Vec::new();
        for l in lengths {
            match entries.last_mut() {
                Some(e) if (l - e.length).abs() <= LENGTH_MERGE_TOL * l.max(1.0) => e.multiplicity += 1,
                _ => entries.push(SpectrumEntry { length: l, multiplicity: 1 }),
            }
        }
        Self { entries, l_max, complete: true, oriented, boundary_only: false, exhaustive: false, certificate: None }
    }

    pub fn total_count(&self) -> u64 {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// Iterates over `(length, multiplicity)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (f64, u64)> + '_ {
        self.entries.iter().map(|e| (e.length, e.multiplicity))
    }
}

/// `N(L)`: number of primitive classes (with multiplicity) of length `< L`.
pub fn counting_function(spec: &LengthSpectrum, l: f64) -> Result<u64> {
    if l > spec.l_max || !spec.complete {
        return Err(Error::IncompleteSpectrum { l_max: spec.l_max, requested: l });
    }
    Ok(spec.entries.iter().take_while(|e| e.length < l).map(|e| e.multiplicity).sum())
}

/// Primitive closed geodesic lengths up to `l_max`.
///
/// `oriented = true` counts `γ` and `γ⁻¹` as separate classes.
pub fn enumerate_primitive_classes(model: &SurfaceModel, l_max: f64, oriented: bool) -> Result<LengthSpectrum> {
    if !(l_max > 0.0) {
        return Err(Error::DomainError(format!("L_max must be positive, got {l_max}")));
    }
    match model {
        SurfaceModel::Cylinder { length } => {
            let mult = if oriented { 2 } else { 1 };
            let lengths = if *length <= l_max { vec![*length; mult] } else { vec![] };
            let mut s = LengthSpectrum::from_lengths(lengths, l_max, oriented);
            s.exhaustive = *length <= l_max;
            Ok(s)
        }
        SurfaceModel::Funnel { length } => {
            let mut s =
                LengthSpectrum::from_lengths(if *length <= l_max { vec![*length] } else { vec![] }, l_max, oriented);
            s.boundary_only = true;
            s.exhaustive = *length <= l_max;
            Ok(s)
        }
        SurfaceModel::Horn => Err(Error::Unsupported("the horn has no closed geodesics".into())),
        SurfaceModel::Schottky(g) => {
            let classes = schottky_classes(&g.generators, &g.certificate.side_distance, l_max)?;
            let mut lengths: Vec<f64> = Vec::with_capacity(classes.len());
            for c in &classes {
                if oriented || canonical_inverse_is_larger(&c.word) {
                    lengths.push(c.length);
                }
            }
            let mut spec = LengthSpectrum::from_lengths(lengths, l_max, oriented);
            let min_step = min_step(&g.certificate.side_distance);
            spec.certificate = Some(PruningCertificate {
                basepoint: g.certificate.basepoint,
                min_step,
                max_word_length: (l_max / min_step).floor() as usize,
                side_distance: g.certificate.side_distance.clone(),
            });
            Ok(spec)
        }
    }
}

fn min_step(d: &[Vec<f64>]) -> f64 {
    let mut m = f64::INFINITY;
    for x in 0..d.len() {
        let xi = inverse_letter(x);
        // consecutive letters x then y with y ≠ x⁻¹ contribute d[x⁻¹][y]
        for (y, &v) in d[xi].iter().enumerate() {
            if y != xi {
                m = m.min(v);
            }
        }
    }
    m
}

/// Representative comparison for the unoriented convention: keep `w` iff its
/// canonical form is not larger than that of `w⁻¹`.
fn canonical_inverse_is_larger(word: &[i32]) -> bool {
    let inv: Vec<i32> = word.iter().rev().map(|x| -x).collect();
    let key =
        |w: &[i32]| -> Vec<Letter> { canonical_rotation(&w.iter().map(|&x| label_to_letter(x)).collect::<Vec<_>>()) };
    key(word) <= key(&inv)
}

fn label_to_letter(x: i32) -> Letter {
    let g = (x.unsigned_abs() - 1) as usize;
    if x > 0 {
        2 * g
    } else {
        2 * g + 1
    }
}

fn canonical_rotation(w: &[Letter]) -> Vec<Letter> {
    let n = w.len();
    (0..n).map(|r| w[r..].iter().chain(&w[..r]).copied().collect::<Vec<_>>()).min().unwrap_or_default()
}

/// True when `w` is lexicographically minimal among its rotations and not a proper power.
fn is_canonical_primitive(w: &[Letter]) -> bool {
    let n = w.len();
    for r in 1..n {
        // compare rotation r with w
        let mut ord = std::cmp::Ordering::Equal;
        for i in 0..n {
            let a = w[(i + r) % n];
            let b = w[i];
            if a != b {
                ord = a.cmp(&b);
                break;
            }
        }
        match ord {
            std::cmp::Ordering::Less => return false,
            std::cmp::Ordering::Equal => return false, // periodic, hence a proper power
            std::cmp::Ordering::Greater => {}
        }
    }
    true
}

struct Search<'a> {
    generators: &'a [MobiusMap],
    dist: &'a [Vec<f64>],
    min_step: f64,
    l_max: f64,
    letters: usize,
}

impl Search<'_> {
    fn dfs(&self, word: &mut Vec<Letter>, m: MobiusMap, cost: f64, out: &mut Vec<PrimitiveClass>) {
        let first = word[0];
        let last = *word.last().expect("non-empty");
        if last != inverse_letter(first) && is_canonical_primitive(word) {
            let tr = m.trace();
            let len = length_from_trace(tr);
            if len <= self.l_max {
                out.push(PrimitiveClass {
                    word: word.iter().map(|&x| signed_label(x)).collect(),
                    length: len,
                    trace: tr.abs(),
                });
            }
        }
        for y in 0..self.letters {
            if y == inverse_letter(last) || y < first {
                // words are enumerated starting from their minimal letter
                continue;
            }
            let step = self.dist[inverse_letter(last)][y];
            let next_cost = cost + step;
            if next_cost + self.min_step > self.l_max * (1.0 + 1e-12) + 1e-12 {
                continue;
            }
            word.push(y);
            self.dfs(word, m * letter_matrix(self.generators, y), next_cost, out);
            word.pop();
        }
    }
}

/// All primitive classes of length `≤ l_max`, one per oriented conjugacy class,
/// sorted by length then word.
pub fn schottky_classes(
    generators: &[MobiusMap],
    side_distance: &[Vec<f64>],
    l_max: f64,
) -> Result<Vec<PrimitiveClass>> {
    let letters = 2 * generators.len();
    let ms = min_step(side_distance);
    if !(ms > 0.0) {
        return Err(Error::ConstructionFailed("pruning certificate has a non-positive step".into()));
    }
    let search = Search { generators, dist: side_distance, min_step: ms, l_max, letters };
    let mut all: Vec<PrimitiveClass> = (0..letters)
        .into_par_iter()
        .map(|x| {
            let mut out = Vec::new();
            if ms <= l_max * (1.0 + 1e-12) + 1e-12 {
                let mut word = vec![x];
                search.dfs(&mut word, letter_matrix(generators, x), 0.0, &mut out);
            }
            out
        })
        .flatten()
        .collect();
    all.sort_by(|a, b| a.length.total_cmp(&b.length).then_with(|| a.word.cmp(&b.word)));
    Ok(all)
}
