use num_complex::Complex64;
use rayon::prelude::*;

use super::{count_zeros, ContourBox};
use crate::error::{Error, Result};
use crate::zeta::{sort_points, Meromorphic, ResonancePoint, ResonanceSet, ResonanceSource};

/// Split fractions; off-centre so that lattice-symmetric boxes do not split on a zero.
const SPLITS: [(f64, f64); 4] = [(0.5372, 0.4627), (0.4813, 0.5191), (0.5617, 0.4398), (0.4421, 0.5583)];
const JITTER: f64 = 1e-3;
const VERIFY_HALF_WIDTH: f64 = 1e-3;
const MAX_LEVELS: u32 = 64;
const NEWTON_ITERS: usize = 60;

enum Outcome {
    Found(ResonancePoint),
    Split(Vec<(ContourBox, i64)>),
}

/// `s ← s - m f/f'` from the box centre; `None` if it wanders off or stalls.
fn newton<F: Meromorphic + ?Sized>(f: &F, b: &ContourBox, m: i64, tol: f64) -> Option<Complex64> {
    let mut s = b.center();
    let reach = b.expanded(b.diameter());
    for _ in 0..NEWTON_ITERS {
        let l = match f.log_derivative(1, s) {
            Ok(l) => l,
            Err(Error::AtZero(_)) => return Some(s),
            Err(_) => return None,
        };
        if l == Complex64::new(0.0, 0.0) {
            return None;
        }
        let step = m as f64 / l;
        s -= step;
        if !(s.re.is_finite() && s.im.is_finite()) || !reach.contains(s) {
            return None;
        }
        if step.norm() <= 1e-3 * tol || step.norm() <= 1e-15 * (1.0 + s.norm()) {
            return Some(s);
        }
    }
    None
}

fn process<F: Meromorphic + ?Sized>(f: &F, b: &ContourBox, count: i64, tol: f64, level: u32) -> Result<Outcome> {
    if b.diameter() < tol {
        return Ok(Outcome::Found(ResonancePoint { position: b.center(), multiplicity: count as u32 }));
    }
    if count <= 2 {
        if let Some(z) = newton(f, b, count, tol) {
            if b.contains(z) {
                let check = ContourBox::around(z, VERIFY_HALF_WIDTH.min(0.25 * b.diameter()).max(tol));
                if let Ok(n) = count_zeros(f, &check) {
                    if n == count {
                        return Ok(Outcome::Found(ResonancePoint { position: z, multiplicity: count as u32 }));
                    }
                }
            }
        }
    }
    if level >= MAX_LEVELS {
        return Err(Error::ConvergenceFailure(b.rect().as_array()));
    }
    'splits: for (fx, fy) in SPLITS {
        let kids = b.quadrisect(fx, fy);
        let mut out = Vec::with_capacity(4);
        let mut total = 0;
        for k in kids {
            match count_zeros(f, &k) {
                Ok(n) if n < 0 => return Err(Error::Unsupported(format!("poles inside {:?}", k.rect().as_array()))),
                Ok(n) => {
                    total += n;
                    if n > 0 {
                        out.push((k, n));
                    }
                }
                Err(Error::ZeroOnBoundary { .. }) | Err(Error::NonIntegerWinding(_)) => continue 'splits,
                Err(e) => return Err(e),
            }
        }
        if total != count {
            return Err(Error::ConvergenceFailure(b.rect().as_array()));
        }
        return Ok(Outcome::Split(out));
    }
    Err(Error::ConvergenceFailure(b.rect().as_array()))
}

/// Zeros of `f` inside `b` with multiplicities, positions to within `tol`.
///
/// Boxes are quadrisected until each holds at most two zeros; Newton with the
/// counted multiplicity then polishes the centre, and a small box around the
/// result must recount the same multiplicity. A box whose edge runs through a
/// zero is grown by 1e-3 per retry; the growth is stored as `jitter`.
pub fn locate_zeros<F: Meromorphic + ?Sized>(f: &F, b: &ContourBox, tol: f64) -> Result<ResonanceSet> {
    if !(tol > 0.0) {
        return Err(Error::DomainError(format!("tolerance must be positive, got {tol}")));
    }
    let mut found = None;
    for j in 0..4 {
        let jb = b.expanded(j as f64 * JITTER);
        match count_zeros(f, &jb) {
            Ok(n) => {
                found = Some((jb, n, j as f64 * JITTER));
                break;
            }
            Err(Error::ZeroOnBoundary { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    let (root, total, jitter) = found.ok_or(Error::ZeroOnBoundary { edge: 0 })?;
    if total < 0 {
        return Err(Error::Unsupported("more poles than zeros inside the box".into()));
    }
    let mut points = Vec::new();
    let mut frontier = if total > 0 { vec![(root, total)] } else { vec![] };
    let mut level = 0;
    while !frontier.is_empty() {
        let outcomes: Vec<Outcome> =
            frontier.par_iter().map(|(bx, n)| process(f, bx, *n, tol, level)).collect::<Result<_>>()?;
        frontier = Vec::new();
        for o in outcomes {
            match o {
                Outcome::Found(p) => points.push(p),
                Outcome::Split(kids) => frontier.extend(kids),
            }
        }
        level += 1;
    }
    sort_points(&mut points);
    let located: i64 = points.iter().map(|p| p.multiplicity as i64).sum();
    if located != total {
        return Err(Error::ConvergenceFailure(root.rect().as_array()));
    }
    let mut set = ResonanceSet::new(points, root.rect(), ResonanceSource::Located)?;
    set.jitter = jitter;
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma::polygamma;
    use crate::zeta::{funnel_resonances, CylinderZeta, FnHandle, FunnelZeta, Rect, TruncationPolicy};
    use std::f64::consts::PI;

    #[test]
    fn funnel_pi_lattice() {
        let f = FunnelZeta { length: PI, policy: TruncationPolicy::default() };
        let b = ContourBox::new(-4.0, 0.0, -5.0, 5.0).unwrap();
        let set = locate_zeros(&f, &b, 1e-8).unwrap();
        let exact = funnel_resonances(PI, Rect::new(-4.0, 0.0, -5.0, 5.0).unwrap()).unwrap();
        assert_eq!(set.points.len(), 10);
        assert_eq!(set.points.len(), exact.points.len());
        for (a, e) in set.points.iter().zip(&exact.points) {
            assert_eq!(a.multiplicity, 2);
            assert!((a.position - e.position).norm() < 1e-8, "{} vs {}", a.position, e.position);
        }
        assert_eq!(set.jitter, 0.0);
        assert_eq!(set.source, ResonanceSource::Located);
    }

    #[test]
    fn cylinder_zeros_in_box() {
        let f = CylinderZeta { length: 1.0, policy: TruncationPolicy::default() };
        let b = ContourBox::new(-3.5, 0.5, -7.0, 7.0).unwrap();
        let set = locate_zeros(&f, &b, 1e-8).unwrap();
        assert_eq!(set.points.len(), 12);
        for p in &set.points {
            assert_eq!(p.multiplicity, 2);
            let k = p.position.re.round();
            let m = (p.position.im / (2.0 * PI)).round();
            assert!((p.position - Complex64::new(k, 2.0 * PI * m)).norm() < 1e-8);
            assert!((-3.0..=0.0).contains(&k) && m.abs() <= 1.0);
        }
        assert_eq!(set.total_multiplicity() as i64, count_zeros(&f, &b).unwrap());
    }

    #[test]
    fn boundary_zero_triggers_jitter() {
        let f = CylinderZeta { length: 1.0, policy: TruncationPolicy::default() };
        // Re s = -1 passes through the zero at -1
        let b = ContourBox::new(-1.0, 0.5, -1.0, 1.0).unwrap();
        let set = locate_zeros(&f, &b, 1e-8).unwrap();
        assert!(set.jitter > 0.0);
        assert_eq!(set.points.len(), 2);
    }

    #[test]
    fn reciprocal_gamma() {
        let f = FnHandle {
            log_value: |_s: Complex64| Ok(Complex64::new(0.0, 0.0)),
            log_derivative: |_k: u32, s: Complex64| Ok(-polygamma(0, s - 0.5)?),
        };
        let b = ContourBox::new(-3.2, 0.9, -0.7, 0.6).unwrap();
        let set = locate_zeros(&f, &b, 1e-10).unwrap();
        let got: Vec<f64> = set.points.iter().map(|p| p.position.re).collect();
        for (g, e) in got.iter().zip([-2.5, -1.5, -0.5, 0.5]) {
            assert!((g - e).abs() < 1e-10);
        }
        assert!(set.points.iter().all(|p| p.multiplicity == 1 && p.position.im.abs() < 1e-10));
    }

    #[test]
    fn empty_box() {
        let f = CylinderZeta { length: 1.0, policy: TruncationPolicy::default() };
        let b = ContourBox::new(1.0, 2.0, 1.0, 2.0).unwrap();
        assert!(locate_zeros(&f, &b, 1e-8).unwrap().points.is_empty());
        assert!(locate_zeros(&f, &b, 0.0).is_err());
    }
}
