//! Brute-force verification oracles, independent of the analytic decision
//! paths. They exist to be correct, not fast.
//!
//! The bead oracle slices the pair over the time-slab overlap and asks, per
//! slice, how far the four slice discs are from sharing a point: the minimax
//! value `min_p max_i (|p - c_i| - r_i)`. That value is convex in the slice
//! time (radii are affine in t, the rest is jointly convex), so after a
//! uniform scan the best slice is refined by ternary search and the reported
//! margin is the global optimum, not a sampling artifact.
//!
//! The disc oracle is a plain grid sampler over the tightest disc's bounding
//! box, refined until the margin clears the grid pitch or a sample cap.

use crate::model::{Bead, Disc};

/// Default slice count for [`oracle_beads_intersect`].
pub const DEFAULT_SLICES: u32 = 2048;
/// Default starting grid for [`oracle_discs_intersect`].
pub const DEFAULT_GRID: u32 = 512;

/// Verdict of a sampling oracle: the boolean, the signed slack of the best
/// configuration seen (negative means infeasible by that much), and how many
/// samples the answer cost. Verdicts with `|margin|` under the caller's
/// tolerance band are boundary-unreliable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleVerdict {
    pub intersects: bool,
    pub margin: f64,
    pub samples_used: u64,
}

/// `min_p max_i (|p - c_i| - r_i)` over the plane, exactly.
///
/// The optimum of a planar minimax of additively-offset distances is pinned
/// by at most three active constraints: evaluate every center (one active),
/// every between-centers equalization point (two active) and every
/// three-circle equal-slack point (the 2x2 linear system in p parametrized
/// by the level m, closed by one circle equation), then take the best.
pub(crate) fn min_max_violation(discs: &[Disc]) -> (f64, (f64, f64)) {
    debug_assert!(!discs.is_empty());
    let eval = |x: f64, y: f64| {
        discs
            .iter()
            .map(|d| ((x - d.cx).powi(2) + (y - d.cy).powi(2)).sqrt() - d.r)
            .fold(f64::NEG_INFINITY, f64::max)
    };

    let mut best = (f64::INFINITY, (0.0, 0.0));
    let mut consider = |x: f64, y: f64| {
        if x.is_finite() && y.is_finite() {
            let v = eval(x, y);
            if v < best.0 {
                best = (v, (x, y));
            }
        }
    };

    for d in discs {
        consider(d.cx, d.cy);
    }

    let n = discs.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (&discs[i], &discs[j]);
            let d = a.center_sq_dist(b).sqrt();
            if d == 0.0 {
                continue;
            }
            // Equal slack on the center segment: |p-ca| = (d + ra - rb)/2.
            let h = 0.5 * (d + a.r - b.r);
            consider(a.cx + (b.cx - a.cx) * h / d, a.cy + (b.cy - a.cy) * h / d);
        }
    }

    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                triple_candidates(&discs[i], &discs[j], &discs[k], &mut |x, y| consider(x, y));
            }
        }
    }
    best
}

/// Points with equal slack m against all three discs: subtracting the squared
/// circle equations pairwise leaves a linear system `p = alpha + beta m`;
/// substituting back into one circle equation closes a quadratic in m.
fn triple_candidates(a: &Disc, b: &Disc, c: &Disc, consider: &mut impl FnMut(f64, f64)) {
    let row = |p: &Disc, q: &Disc| {
        (
            2.0 * (q.cx - p.cx),
            2.0 * (q.cy - p.cy),
            2.0 * (p.r - q.r),
            p.r * p.r - q.r * q.r + q.cx * q.cx + q.cy * q.cy - p.cx * p.cx - p.cy * p.cy,
        )
    };
    let (a1, b1, f1, e1) = row(a, b);
    let (a2, b2, f2, e2) = row(a, c);
    let det = a1 * b2 - a2 * b1;
    let scale = a1.abs().max(b1.abs()).max(a2.abs()).max(b2.abs());
    if det.abs() <= 1e-14 * scale * scale {
        return; // collinear centers: a pair candidate already covers it
    }
    // p(m) = alpha + beta m
    let ax = (b2 * e1 - b1 * e2) / det;
    let bx = (b2 * f1 - b1 * f2) / det;
    let ay = (a1 * e2 - a2 * e1) / det;
    let by = (a1 * f2 - a2 * f1) / det;
    // |p(m) - ca|^2 = (m + ra)^2
    let dx = ax - a.cx;
    let dy = ay - a.cy;
    let qa = bx * bx + by * by - 1.0;
    let qb = 2.0 * (dx * bx + dy * by) - 2.0 * a.r;
    let qc = dx * dx + dy * dy - a.r * a.r;
    if qa.abs() <= 1e-14 * qb.abs().max(qc.abs()).max(1.0) {
        if qb != 0.0 {
            let m = -qc / qb;
            consider(ax + bx * m, ay + by * m);
        }
        return;
    }
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return;
    }
    let sq = disc.sqrt();
    for m in [(-qb + sq) / (2.0 * qa), (-qb - sq) / (2.0 * qa)] {
        consider(ax + bx * m, ay + by * m);
    }
}

fn slice_discs(b1: &Bead, b2: &Bead, t0: f64) -> [Disc; 4] {
    let radius = |apex_t: f64, v: f64, forward: bool| {
        let dt = if forward { t0 - apex_t } else { apex_t - t0 };
        (v * dt).max(0.0)
    };
    [
        Disc::new(b1.origin.x, b1.origin.y, radius(b1.origin.t, b1.vmax, true)),
        Disc::new(b1.destination.x, b1.destination.y, radius(b1.destination.t, b1.vmax, false)),
        Disc::new(b2.origin.x, b2.origin.y, radius(b2.origin.t, b2.vmax, true)),
        Disc::new(b2.destination.x, b2.destination.y, radius(b2.destination.t, b2.vmax, false)),
    ]
}

/// Per-slice feasibility slack: positive iff the four slice discs share a
/// point with that much room.
pub(crate) fn slice_slack(b1: &Bead, b2: &Bead, t0: f64) -> f64 {
    -min_max_violation(&slice_discs(b1, b2, t0)).0
}

/// Samples the time-slab overlap uniformly, then sharpens the best slice by
/// ternary search (the slack is concave in t, so the refined value is the
/// true maximum). `slices` must be at least 2.
pub fn oracle_beads_intersect(b1: &Bead, b2: &Bead, slices: u32) -> OracleVerdict {
    assert!(slices >= 2, "need at least two slices");
    let lo = b1.start().max(b2.start());
    let hi = b1.end().min(b2.end());
    if lo > hi {
        return OracleVerdict { intersects: false, margin: -(lo - hi), samples_used: 0 };
    }
    let mut samples = 0u64;
    let mut slack_at = |t: f64| {
        samples += 1;
        slice_slack(b1, b2, t)
    };

    if lo == hi {
        let m = slack_at(lo);
        return OracleVerdict { intersects: m >= 0.0, margin: m, samples_used: samples };
    }

    let n = slices as usize;
    let mut best_i = 0usize;
    let mut best = f64::NEG_INFINITY;
    let ts: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    for (i, &t) in ts.iter().enumerate() {
        let m = slack_at(t);
        if m > best {
            best = m;
            best_i = i;
        }
    }

    // Concave refinement around the best coarse slice.
    let mut a = ts[best_i.saturating_sub(1)];
    let mut b = ts[(best_i + 1).min(n - 1)];
    for _ in 0..100 {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if slack_at(m1) < slack_at(m2) {
            a = m1;
        } else {
            b = m2;
        }
    }
    let refined = slack_at(0.5 * (a + b));
    let margin = refined.max(best);
    OracleVerdict { intersects: margin >= 0.0, margin, samples_used: samples }
}

/// Grid-samples the bounding box of the tightest disc; true iff some sample
/// lies in every disc. The grid is doubled until the margin clears the pitch
/// or the sample budget (2^20) runs out.
pub fn oracle_discs_intersect(discs: &[Disc], grid: u32) -> OracleVerdict {
    assert!((1..=4).contains(&discs.len()), "one to four discs");
    assert!(grid >= 16, "grid too coarse");
    let tightest = discs
        .iter()
        .min_by(|a, b| a.r.partial_cmp(&b.r).unwrap())
        .copied()
        .unwrap();

    let mut g = grid as u64;
    let mut samples = 0u64;
    loop {
        let pitch = 2.0 * tightest.r / g as f64;
        let certain = std::f64::consts::SQRT_2 * pitch;
        let mut best = f64::NEG_INFINITY;
        'scan: for iy in 0..g {
            for ix in 0..g {
                samples += 1;
                let x = tightest.cx - tightest.r + 2.0 * tightest.r * (ix as f64 + 0.5) / g as f64;
                let y = tightest.cy - tightest.r + 2.0 * tightest.r * (iy as f64 + 0.5) / g as f64;
                let slack = discs
                    .iter()
                    .map(|d| d.r - ((x - d.cx).powi(2) + (y - d.cy).powi(2)).sqrt())
                    .fold(f64::INFINITY, f64::min);
                if slack > best {
                    best = slack;
                    if best > certain {
                        break 'scan; // a sample this deep settles the verdict
                    }
                }
            }
        }
        if best.abs() > certain || samples.saturating_mul(4) > (1 << 20) {
            return OracleVerdict { intersects: best >= 0.0, margin: best, samples_used: samples };
        }
        g *= 2;
    }
}

/// Resolution bound for [`oracle_discs_intersect`] at the sample cap: grid
/// verdicts with `|margin|` at or below this cannot certify their sign.
pub fn grid_reliability_floor(discs: &[Disc]) -> f64 {
    let r_min = discs.iter().map(|d| d.r).fold(f64::INFINITY, f64::min);
    std::f64::consts::SQRT_2 * 2.0 * r_min / 1024.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn bead(t1: f64, x1: f64, y1: f64, t2: f64, x2: f64, y2: f64, v: f64) -> Bead {
        Bead::from_coords(t1, x1, y1, t2, x2, y2, v).unwrap()
    }

    #[test]
    fn counterexample_pair_intersects() {
        let b1 = bead(0.0, 0.0, 0.0, 2.0, 0.0, 2.0, 1.9);
        let b2 = bead(0.0, 3.0, 0.0, 2.0, 3.0, 2.0, 1.9);
        let v = oracle_beads_intersect(&b1, &b2, 2000);
        assert!(v.intersects, "margin {}", v.margin);
        assert!(v.margin > 1e-3);
    }

    #[test]
    fn disjoint_time_pair() {
        let b1 = bead(0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0);
        let b2 = bead(10.0, 100.0, 100.0, 11.0, 100.0, 100.0, 1.0);
        let v = oracle_beads_intersect(&b1, &b2, 64);
        assert!(!v.intersects);
        assert!((v.margin + 9.0).abs() < 1e-12); // overlap gap
    }

    #[test]
    fn identical_beads_large_margin() {
        let b = bead(0.0, 0.0, 0.0, 2.0, 0.5, 0.5, 2.0);
        let v = oracle_beads_intersect(&b, &b, 128);
        assert!(v.intersects);
        assert!(v.margin > 0.5);
    }

    #[test]
    fn minimax_matches_dense_sampling() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..300 {
            let n = rng.gen_range(1..=4);
            let discs: Vec<Disc> = (0..n)
                .map(|_| Disc::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0), rng.gen_range(0.0..4.0)))
                .collect();
            let (val, (px, py)) = min_max_violation(&discs);
            let eval = |x: f64, y: f64| {
                discs
                    .iter()
                    .map(|d| ((x - d.cx).powi(2) + (y - d.cy).powi(2)).sqrt() - d.r)
                    .fold(f64::NEG_INFINITY, f64::max)
            };
            assert!((eval(px, py) - val).abs() <= 1e-9, "reported point disagrees with value");
            // No sampled point does better than the claimed optimum.
            for _ in 0..400 {
                let x = rng.gen_range(-6.0..6.0);
                let y = rng.gen_range(-6.0..6.0);
                assert!(
                    eval(x, y) >= val - 1e-9,
                    "sample beats reported minimum: {} < {val} for {discs:?}",
                    eval(x, y)
                );
            }
        }
    }

    #[test]
    fn oracle_soundness_witness_substitutes() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(37);
        for _ in 0..100 {
            let b1 = random_nonempty(&mut rng);
            let b2 = random_nonempty(&mut rng);
            let lo = b1.start().max(b2.start());
            let hi = b1.end().min(b2.end());
            if lo > hi {
                continue;
            }
            let t0 = 0.5 * (lo + hi);
            let discs = slice_discs(&b1, &b2, t0);
            let (val, (px, py)) = min_max_violation(&discs);
            if val <= -1e-9 {
                continue;
            }
            // Feasible minimax point must lie in all four discs.
            for d in &discs {
                let dist = ((px - d.cx).powi(2) + (py - d.cy).powi(2)).sqrt();
                assert!(dist <= d.r + 1e-8 + val.max(0.0) + 1e-8, "witness escapes disc");
            }
        }
    }

    fn random_nonempty(rng: &mut impl Rng) -> Bead {
        loop {
            let mut t1: f64 = rng.gen_range(-5.0..5.0);
            let mut t2: f64 = rng.gen_range(-5.0..5.0);
            if t1 == t2 {
                continue;
            }
            if t2 < t1 {
                std::mem::swap(&mut t1, &mut t2);
            }
            let b = bead(
                t1,
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-5.0..5.0),
                t2,
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-5.0..5.0),
                rng.gen_range(0.05..3.0),
            );
            if b.is_nonempty() {
                return b;
            }
        }
    }

    #[test]
    fn resolution_monotonicity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for _ in 0..60 {
            let b1 = random_nonempty(&mut rng);
            let b2 = random_nonempty(&mut rng);
            let coarse = oracle_beads_intersect(&b1, &b2, 32);
            let fine = oracle_beads_intersect(&b1, &b2, 512);
            if coarse.intersects && coarse.margin > 1e-9 {
                assert!(fine.intersects, "refinement flipped true to false: {b1:?} {b2:?}");
            }
            assert!((coarse.margin - fine.margin).abs() <= 1e-6 * coarse.margin.abs().max(1.0));
        }
    }

    #[test]
    fn feasible_slice_times_form_an_interval() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(43);
        let mut seen = 0;
        while seen < 40 {
            let b1 = random_nonempty(&mut rng);
            let b2 = random_nonempty(&mut rng);
            let lo = b1.start().max(b2.start());
            let hi = b1.end().min(b2.end());
            if lo >= hi {
                continue;
            }
            let flags: Vec<bool> = (0..200)
                .map(|i| slice_slack(&b1, &b2, lo + (hi - lo) * i as f64 / 199.0) >= 1e-9)
                .collect();
            if !flags.iter().any(|f| *f) {
                continue;
            }
            seen += 1;
            let first = flags.iter().position(|f| *f).unwrap();
            let last = flags.iter().rposition(|f| *f).unwrap();
            assert!(flags[first..=last].iter().all(|f| *f), "feasible set not contiguous");
        }
    }

    #[test]
    fn disc_oracle_examples() {
        let unit = |x: f64, y: f64| Disc::new(x, y, 1.0);
        let v = oracle_discs_intersect(&[unit(0.0, 0.0); 4], 64);
        assert!(v.intersects);
        assert!(!oracle_discs_intersect(&[unit(0.0, 0.0), unit(5.0, 0.0)], 64).intersects);
        let h = 3.0_f64.sqrt();
        let v = oracle_discs_intersect(&[unit(0.0, 0.0), unit(2.0, 0.0), unit(1.0, h)], 256);
        assert!(!v.intersects);
        assert!(v.margin < -0.1);
    }

    #[test]
    fn disc_oracle_monotone_in_grid() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(47);
        for _ in 0..100 {
            let discs: Vec<Disc> = (0..3)
                .map(|_| Disc::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0), rng.gen_range(0.05..4.0)))
                .collect();
            let coarse = oracle_discs_intersect(&discs, 16);
            let fine = oracle_discs_intersect(&discs, 128);
            if coarse.intersects {
                assert!(fine.intersects, "grid refinement flipped true to false");
            }
        }
    }
}
