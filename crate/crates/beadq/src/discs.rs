//! The fixed-time alibi query: exact intersection tests for two, three and
//! four closed discs, and the bead-slice wrapper.
//!
//! Three discs intersect iff some disc's center lies in the other two, or an
//! intersection point of two bordering circles lies in the remaining disc.
//! The point test is evaluated in a normalized frame (first circle becomes
//! the unit circle at the origin, second center on the positive x axis) with
//! the square root eliminated: `W >= 0 && (L <= 0 || L^2 <= a^2 W)`. Four
//! discs reduce to the four triples by Helly's theorem in the plane.

use thiserror::Error;

use crate::model::{cmp_scale, Bead, Disc, EPS};

#[derive(Debug, Error, PartialEq)]
pub enum DiscError {
    #[error("coincident circles have no discrete intersection")]
    Coincident,
}

/// Two circles viewed as a pair: centers, radii and their squared center
/// distance, the quantities the normalized frame is built from.
#[derive(Debug, Clone, Copy)]
pub struct CirclePair {
    pub first: Disc,
    pub second: Disc,
    pub center_sq_dist: f64,
}

impl CirclePair {
    pub fn new(first: Disc, second: Disc) -> Self {
        Self { first, second, center_sq_dist: first.center_sq_dist(&second) }
    }
}

/// The points where the two circle borders meet: zero points for disjoint or
/// strictly nested circles, one for tangency, two otherwise. Errors only on
/// coincident circles (same center and radius), which meet everywhere.
pub fn circle_circle_intersection(c1: &Disc, c2: &Disc) -> Result<Vec<(f64, f64)>, DiscError> {
    let pair = CirclePair::new(*c1, *c2);
    let d2 = pair.center_sq_dist;
    if d2 == 0.0 {
        if c1.r == c2.r {
            return Err(DiscError::Coincident);
        }
        return Ok(Vec::new()); // concentric, distinct radii
    }
    let d = d2.sqrt();

    // Point circles bypass the normalization: a zero-radius border is a
    // single point, on the other circle iff at exactly its radius.
    if c1.r == 0.0 || c2.r == 0.0 {
        let (point, other) = if c1.r == 0.0 { (c1, c2) } else { (c2, c1) };
        let hit = (d - other.r).abs() <= EPS * cmp_scale(d, other.r);
        return Ok(if hit { vec![(point.cx, point.cy)] } else { Vec::new() });
    }

    // Normalize: c1 to the unit circle at the origin, c2's center on the
    // positive x axis.
    let x2 = d / c1.r;
    let r2 = c2.r / c1.r;
    let xn = (x2 * x2 + 1.0 - r2 * r2) / (2.0 * x2);
    let mut w = (r2 * r2 - (x2 - 1.0) * (x2 - 1.0)) * ((1.0 + x2) * (1.0 + x2) - r2 * r2);
    let w_scale = (r2 * r2 + (x2 - 1.0) * (x2 - 1.0)) * ((1.0 + x2) * (1.0 + x2) + r2 * r2);
    if w < 0.0 {
        if w >= -EPS * w_scale.max(1.0) {
            w = 0.0; // tangency up to rounding
        } else {
            return Ok(Vec::new());
        }
    }
    let yn = w.sqrt() / (2.0 * x2);

    // Map back: rotate the x axis onto the center direction, scale by r1,
    // translate to c1.
    let ux = (c2.cx - c1.cx) / d;
    let uy = (c2.cy - c1.cy) / d;
    let back = |x: f64, y: f64| {
        (c1.cx + c1.r * (x * ux - y * uy), c1.cy + c1.r * (x * uy + y * ux))
    };
    let mut out = vec![back(xn, yn)];
    if yn > 0.0 {
        out.push(back(xn, -yn));
    }
    Ok(out)
}

fn two_discs_intersect(a: &Disc, b: &Disc) -> bool {
    let sum = a.r + b.r;
    a.center_sq_dist(b) <= sum * sum + EPS * cmp_scale(a.center_sq_dist(b), sum * sum)
}

fn center_in_disc(cx: f64, cy: f64, d: &Disc) -> bool {
    d.contains(cx, cy)
}

/// The `W >= 0 && (L <= 0 || L^2 <= a^2 W)` form evaluated in the frame where
/// the pair's first circle is the unit circle at the origin: does one of the
/// pair's border intersection points lie in the third disc?
fn pair_point_in_third(first: &Disc, second: &Disc, third: &Disc) -> bool {
    if first.r <= 0.0 {
        return false; // point disc: covered by the center condition
    }
    let d2 = first.center_sq_dist(second);
    if d2 == 0.0 {
        return false; // concentric pairs are reduced away by the caller
    }
    // Safety: the pair's circles must actually intersect.
    let rsum = first.r + second.r;
    let rdiff = first.r - second.r;
    if d2 > rsum * rsum + EPS * cmp_scale(d2, rsum * rsum) {
        return false;
    }
    if d2 < rdiff * rdiff - EPS * cmp_scale(d2, rdiff * rdiff) {
        return false;
    }
    let d = d2.sqrt();
    let inv = 1.0 / first.r;
    let x2 = d * inv;
    let r2 = second.r * inv;
    let r3 = third.r * inv;
    // Third center in the rotated frame.
    let ux = (second.cx - first.cx) / d;
    let uy = (second.cy - first.cy) / d;
    let dx3 = third.cx - first.cx;
    let dy3 = third.cy - first.cy;
    let x3 = (dx3 * ux + dy3 * uy) * inv;
    let y3 = (-dx3 * uy + dy3 * ux) * inv;

    let wa = r2 * r2 - (x2 - 1.0) * (x2 - 1.0);
    let wb = (1.0 + x2) * (1.0 + x2) - r2 * r2;
    let w = wa * wb;
    let w_scale = (r2 * r2 + (x2 - 1.0) * (x2 - 1.0)) * ((1.0 + x2) * (1.0 + x2) + r2 * r2);
    if w < -EPS * w_scale.max(1.0) {
        return false;
    }
    let w = w.max(0.0);

    let lin = x2 * x2 + 1.0 - r2 * r2 - 2.0 * x2 * x3;
    let l = lin * lin + w + (2.0 * x2 * y3) * (2.0 * x2 * y3) - 4.0 * x2 * x2 * r3 * r3;
    let l_scale = lin * lin + w + (2.0 * x2 * y3) * (2.0 * x2 * y3) + 4.0 * x2 * x2 * r3 * r3;
    if l <= EPS * l_scale.max(1.0) {
        return true;
    }
    let a2w = (4.0 * x2 * y3) * (4.0 * x2 * y3) * w;
    l * l <= a2w + EPS * cmp_scale(l * l, a2w)
}

/// Exact three-disc intersection per the two-condition characterization, with
/// no square roots on the decision path.
pub fn three_discs_intersect(d1: &Disc, d2: &Disc, d3: &Disc) -> bool {
    let ds = [d1, d2, d3];

    // Concentric pairs collapse to the smaller disc: a two-disc problem.
    for i in 0..3 {
        for j in (i + 1)..3 {
            if ds[i].center_sq_dist(ds[j]) == 0.0 {
                let small = if ds[i].r <= ds[j].r { ds[i] } else { ds[j] };
                let k = 3 - i - j;
                return two_discs_intersect(small, ds[k]);
            }
        }
    }

    // Condition (1): some center lies in both other discs.
    for i in 0..3 {
        let (a, b) = ((i + 1) % 3, (i + 2) % 3);
        if center_in_disc(ds[i].cx, ds[i].cy, ds[a]) && center_in_disc(ds[i].cx, ds[i].cy, ds[b]) {
            return true;
        }
    }

    // Condition (2): a border intersection point of one pair lies in the
    // remaining disc. Each unordered pair is normalized both ways so a
    // zero-radius anchor never hides a witness.
    for (i, j, k) in [(0, 1, 2), (1, 0, 2), (0, 2, 1), (2, 0, 1), (1, 2, 0), (2, 1, 0)] {
        if pair_point_in_third(ds[i], ds[j], ds[k]) {
            return true;
        }
    }
    false
}

/// Helly's theorem in the plane: four convex sets intersect iff every three
/// of them do.
pub fn four_discs_intersect(d1: &Disc, d2: &Disc, d3: &Disc, d4: &Disc) -> bool {
    three_discs_intersect(d1, d2, d3)
        && three_discs_intersect(d1, d2, d4)
        && three_discs_intersect(d1, d3, d4)
        && three_discs_intersect(d2, d3, d4)
}

/// Could the two objects have met at the instant `t0`? True iff the four
/// slice discs of the beads share a point. Instants outside either time slab
/// answer false.
pub fn alibi_at_time(b1: &Bead, b2: &Bead, t0: f64) -> bool {
    let (Some((lo1, hi1)), Some((lo2, hi2))) = (b1.time_slice(t0), b2.time_slice(t0)) else {
        return false;
    };
    four_discs_intersect(&lo1, &hi1, &lo2, &hi2)
}
