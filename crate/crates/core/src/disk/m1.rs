//! Approximate Skorokhod M1 distance between sampled paths.

use num_complex::Complex64;

use super::path::DiskPath;
use crate::error::{Error, Result};

/// Vertices kept per path before densification.
const TARGET_VERTICES: usize = 400;

/// Completed graph as `(time, value)` vertices; jumps are filled by their boundary arcs.
pub fn completed_graph(path: &DiskPath, target: usize) -> Vec<(f64, Complex64)> {
    let n = path.len();
    if n == 0 {
        return Vec::new();
    }
    let stride = (n / target.max(1)).max(1);
    let mut keep: Vec<usize> = (0..n).step_by(stride).collect();
    keep.push(n - 1);
    for j in &path.jumps {
        if j.index > 0 && j.index < n {
            keep.push(j.index - 1);
            keep.push(j.index);
        }
    }
    keep.sort_unstable();
    keep.dedup();
    let mut out = Vec::with_capacity(keep.len());
    for (k, &i) in keep.iter().enumerate() {
        if k > 0 && keep[k - 1] + 1 == i {
            if let Some(j) = path.jumps.iter().find(|j| j.index == i) {
                let t = path.time(i - 1);
                let pieces = ((j.arc_length().abs() / 0.02).ceil() as usize).max(2);
                out.extend(j.fill(pieces).into_iter().map(|z| (t, z)));
            }
        }
        out.push((path.time(i), path.positions[i]));
    }
    out
}

fn dist(a: (f64, Complex64), b: (f64, Complex64)) -> f64 {
    (a.0 - b.0).abs().max((a.1 - b.1).norm())
}

/// Insert vertices so that no segment is longer than `h`.
fn densify(g: &[(f64, Complex64)], h: f64) -> Vec<(f64, Complex64)> {
    let mut out = Vec::with_capacity(g.len());
    for w in g.windows(2) {
        let pieces = ((dist(w[0], w[1]) / h).ceil() as usize).max(1);
        for k in 0..pieces {
            let s = k as f64 / pieces as f64;
            out.push((w[0].0 + (w[1].0 - w[0].0) * s, w[0].1 + (w[1].1 - w[0].1) * s));
        }
    }
    if let Some(&last) = g.last() {
        out.push(last);
    }
    out
}

/// Cost of the coupling that walks both graphs in time order.
fn time_ordered_cost(a: &[(f64, Complex64)], b: &[(f64, Complex64)]) -> f64 {
    let (mut i, mut j) = (0, 0);
    let mut worst = dist(a[0], b[0]);
    while i + 1 < a.len() || j + 1 < b.len() {
        if j + 1 == b.len() || (i + 1 < a.len() && a[i + 1].0 <= b[j + 1].0) {
            i += 1;
        } else {
            j += 1;
        }
        worst = worst.max(dist(a[i], b[j]));
    }
    worst
}

/// Discrete Frechet distance under the `max(|dt|, |dz|)` metric.
///
/// Cells whose time gap exceeds the cost of a known coupling cannot be on an
/// optimal one, so only a band around the diagonal in time is filled.
pub fn frechet(a: &[(f64, Complex64)], b: &[(f64, Complex64)]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    let bound = time_ordered_cost(a, b);
    let width = bound * (1.0 + 1e-12) + 1e-15;
    let m = b.len();
    let mut prev = vec![f64::INFINITY; m];
    let mut cur = vec![f64::INFINITY; m];
    // Filled ranges of the rows held in `prev` and `cur`.
    let (mut prev_band, mut cur_band) = ((0, 0), (0, 0));
    let (mut lo, mut hi) = (0, 0);
    for (i, &p) in a.iter().enumerate() {
        while lo < m && b[lo].0 < p.0 - width {
            lo += 1;
        }
        hi = hi.max(lo);
        while hi + 1 < m && b[hi + 1].0 <= p.0 + width {
            hi += 1;
        }
        cur[cur_band.0..cur_band.1].fill(f64::INFINITY);
        for j in lo..=hi.min(m - 1) {
            let best = if i == 0 && j == 0 {
                0.0
            } else if j == 0 {
                prev[0]
            } else {
                prev[j].min(prev[j - 1]).min(cur[j - 1])
            };
            cur[j] = dist(p, b[j]).max(best);
        }
        cur_band = (lo, (hi + 1).min(m));
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut prev_band, &mut cur_band);
    }
    prev[m - 1]
}

/// Approximate M1 distance between two paths on `[0, horizon]`.
pub fn m1_distance(a: &DiskPath, b: &DiskPath, horizon: f64) -> Result<f64> {
    for p in [a, b] {
        if p.is_empty() || (p.horizon() - horizon).abs() > 0.5 * p.dt + 1e-12 {
            return Err(Error::InvalidInput(format!("path horizon {} does not match {horizon}", p.horizon())));
        }
    }
    let ga = completed_graph(a, TARGET_VERTICES);
    let gb = completed_graph(b, TARGET_VERTICES);
    let scale = horizon.max(2.0);
    let h = scale / (TARGET_VERTICES as f64 / 2.0);
    Ok(frechet(&densify(&ga, h), &densify(&gb, h)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disk::path::Jump;

    fn from_fn(dt: f64, horizon: f64, f: impl Fn(f64) -> f64) -> DiskPath {
        let n = (horizon / dt).round() as usize;
        DiskPath::from_positions(dt, (0..=n).map(|i| Complex64::new(f(i as f64 * dt), 0.0)).collect())
    }

    #[test]
    fn identical_paths_are_at_zero() {
        let p = from_fn(1e-3, 1.0, |t| (5.0 * t).sin() * 0.5);
        assert_eq!(m1_distance(&p, &p, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn time_shift_is_bounded_by_twice_the_shift() {
        let delta = 0.05;
        let a = from_fn(1e-3, 1.0, |t| 0.9 * (t - 0.5));
        let b = from_fn(1e-3, 1.0, |t| 0.9 * (t - delta - 0.5).max(-0.5));
        let d = m1_distance(&a, &b, 1.0).unwrap();
        assert!(d <= 2.0 * delta, "{d}");
    }

    #[test]
    fn ramps_approach_the_step() {
        let step = from_fn(1e-3, 1.0, |t| if t < 0.5 { -0.5 } else { 0.5 });
        let mut last = f64::INFINITY;
        for w in [0.2, 0.05, 0.01] {
            let ramp = from_fn(1e-3, 1.0, |t| ((t - 0.5) / w).clamp(-0.5, 0.5));
            let d = m1_distance(&step, &ramp, 1.0).unwrap();
            assert!(d < last, "{d} >= {last}");
            last = d;
        }
        assert!(last < 0.02);
    }

    #[test]
    fn jumps_are_completed_by_arcs() {
        let mut p = DiskPath::from_positions(0.5, vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0), Complex64::new(-1.0, 0.0)]);
        p.jumps.push(Jump { index: 1, from_angle: 0.0, to_angle: std::f64::consts::PI, arc_sign: 1 });
        let g = completed_graph(&p, 10);
        assert!(g.iter().any(|(_, z)| z.im > 0.9));
        assert!(g.iter().all(|(_, z)| z.norm() < 1.0 + 1e-12));
    }

    #[test]
    fn horizon_mismatch() {
        let a = from_fn(1e-2, 1.0, |t| t);
        let b = from_fn(1e-2, 2.0, |t| t);
        assert!(matches!(m1_distance(&a, &b, 1.0), Err(Error::InvalidInput(_))));
    }

    fn full_frechet(a: &[(f64, Complex64)], b: &[(f64, Complex64)]) -> f64 {
        let mut c = vec![vec![f64::INFINITY; b.len()]; a.len()];
        for i in 0..a.len() {
            for j in 0..b.len() {
                let best = match (i, j) {
                    (0, 0) => 0.0,
                    (0, _) => c[0][j - 1],
                    (_, 0) => c[i - 1][0],
                    _ => c[i - 1][j].min(c[i - 1][j - 1]).min(c[i][j - 1]),
                };
                c[i][j] = dist(a[i], b[j]).max(best);
            }
        }
        c[a.len() - 1][b.len() - 1]
    }

    #[test]
    fn banded_matches_full_table() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let mut graph = |n: usize| {
                let mut t = 0.0;
                (0..n)
                    .map(|_| {
                        t += rng.gen_range(0.0..0.05);
                        (t, Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)))
                    })
                    .collect::<Vec<_>>()
            };
            let a = graph(40);
            let b = graph(55);
            assert_eq!(frechet(&a, &b), full_frechet(&a, &b));
        }
    }
}
