#![allow(dead_code)]

use std::f64::consts::PI;

use hyperzeta::geometry::{length_from_trace, MobiusMap};
use hyperzeta::zeta::{Rect, ResonancePoint, ResonanceSet, ResonanceSource};
use hyperzeta::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Zeros of `Π_k (1 - e^{-(s+k)ℓ})²` with `|ζ| ≤ radius`, from the factor equations.
pub fn cylinder_zeros(ell: f64, radius: f64) -> ResonanceSet {
    let step = 2.0 * PI / ell;
    let mut pts = Vec::new();
    for k in 0..=(radius.floor() as i64) {
        let h = (radius * radius - (k * k) as f64).max(0.0).sqrt();
        let m_max = (h / step).floor() as i64;
        for m in -m_max..=m_max {
            pts.push(ResonancePoint { position: c(-(k as f64), step * m as f64), multiplicity: 2 });
        }
    }
    let r = radius + 1.0;
    ResonanceSet::new(pts, Rect::new(-r, 1.0, -r, r).unwrap(), ResonanceSource::ClosedForm).unwrap()
}

fn letter(gens: &[MobiusMap], x: i32) -> MobiusMap {
    let g = gens[(x.unsigned_abs() - 1) as usize];
    if x > 0 {
        g
    } else {
        g.inverse()
    }
}

fn is_proper_power(w: &[i32]) -> bool {
    let n = w.len();
    (1..n).filter(|d| n.is_multiple_of(*d)).any(|d| (0..n).all(|i| w[i] == w[i % d]))
}

fn is_min_rotation(w: &[i32]) -> bool {
    let n = w.len();
    (1..n).all(|r| {
        let rot: Vec<i32> = w[r..].iter().chain(&w[..r]).copied().collect();
        w <= rot.as_slice()
    })
}

/// Oriented primitive lengths `≤ l_max` from every cyclically reduced word of
/// length at most `max_word`, with no geometric pruning.
pub fn brute_force_lengths(gens: &[MobiusMap], l_max: f64, max_word: usize) -> Vec<f64> {
    let n_gen = gens.len() as i32;
    let letters: Vec<i32> = (1..=n_gen).flat_map(|i| [i, -i]).collect();
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<i32>, MobiusMap)> = letters.iter().map(|&x| (vec![x], letter(gens, x))).collect();
    while let Some((w, m)) = stack.pop() {
        let cyclic_ok = w.len() == 1 || w[0] != -w[w.len() - 1];
        if cyclic_ok && !is_proper_power(&w) && is_min_rotation(&w) {
            let l = length_from_trace(m.trace());
            if l <= l_max {
                out.push(l);
            }
        }
        if w.len() < max_word {
            for &x in &letters {
                if x != -w[w.len() - 1] {
                    let mut w2 = w.clone();
                    w2.push(x);
                    stack.push((w2, m * letter(gens, x)));
                }
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Third divided difference on the equispaced points `s + jh`, `j = 0..4`,
/// taken as the mean of the two available third differences. `f` is a logarithm,
/// so its imaginary part is unwrapped along the stencil.
pub fn third_divided_difference(f: &dyn Fn(Complex64) -> Complex64, s: Complex64, h: Complex64) -> Complex64 {
    let tau = 2.0 * std::f64::consts::PI;
    let mut v: Vec<Complex64> = (0..5).map(|j| f(s + h * j as f64)).collect();
    for j in 1..5 {
        let turns = ((v[j].im - v[j - 1].im) / tau).round();
        v[j].im -= turns * tau;
    }
    let d3 = |a: usize| (v[a + 3] - 3.0 * v[a + 2] + 3.0 * v[a + 1] - v[a]) / (6.0 * h * h * h);
    0.5 * (d3(0) + d3(1))
}
