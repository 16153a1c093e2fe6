//! The bead-pair intersection decision: an exact, constant-time case
//! analysis replacing quantifier elimination.
//!
//! Case I: an apex of one bead lies in the other. Case II: the rim of one
//! bead crosses the other's mantel; in a normalized frame the rim admits the
//! parametrization `t = (2 x x2' - x2'^2 + v1^2 t2'^2) / (2 v1^2 t2')`,
//! `y^2 = v1^2 t^2 - x^2`, and substituting it into a cone equation of the
//! other bead yields one polynomial equation of degree four in `x` per
//! mantel half. Case III: an initial contact of the paired bottom or top
//! cones lies in both beads. A nonempty intersection always triggers at
//! least one of the three.

use thiserror::Error;

use crate::geometry::{self, HalfBeadSide, RimPlane};
use crate::model::{le_tol, pt, AlibiVerdict, Bead, Cone, FiredCase, TimeSpacePoint, EPS};
use crate::roots::{real_roots, Poly4};

#[derive(Debug, Error, PartialEq)]
pub enum AlibiError {
    #[error("anchor bead must have strictly increasing apex times")]
    DegenerateAnchor,
    #[error("abscissa lies outside the rim support")]
    OutsideRimSupport,
}

/// Which bead of the pair supplies the rim and gets moved to the canonical
/// position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnchorSide {
    First,
    Second,
}

/// Translation, spatial rotation and uniform time-space scaling; speed
/// bounds pass through unchanged.
#[derive(Debug, Clone, Copy)]
struct FrameMap {
    t0: f64,
    x0: f64,
    y0: f64,
    cos: f64,
    sin: f64,
    scale: f64,
}

impl FrameMap {
    /// Canonicalizes `origin -> (0,0,0)` and lands `destination` on the
    /// positive x axis at height zero. When the apexes already share a y
    /// coordinate only the translation applies (flipped by half a turn if
    /// the destination would land at negative x).
    fn for_anchor(origin: &TimeSpacePoint, destination: &TimeSpacePoint) -> Self {
        let (t0, x0, y0) = (origin.t, origin.x, origin.y);
        if destination.y != origin.y {
            let dx = destination.x - origin.x;
            let dy = destination.y - origin.y;
            let s = (dx * dx + dy * dy).sqrt();
            FrameMap { t0, x0, y0, cos: dx / s, sin: dy / s, scale: s }
        } else if destination.x >= origin.x {
            FrameMap { t0, x0, y0, cos: 1.0, sin: 0.0, scale: 1.0 }
        } else {
            FrameMap { t0, x0, y0, cos: -1.0, sin: 0.0, scale: 1.0 }
        }
    }

    fn apply(&self, p: &TimeSpacePoint) -> TimeSpacePoint {
        let dx = p.x - self.x0;
        let dy = p.y - self.y0;
        pt(
            self.scale * (p.t - self.t0),
            self.scale * (dx * self.cos + dy * self.sin),
            self.scale * (-dx * self.sin + dy * self.cos),
        )
    }

    fn invert(&self, p: &TimeSpacePoint) -> TimeSpacePoint {
        let x = p.x / self.scale;
        let y = p.y / self.scale;
        pt(
            self.t0 + p.t / self.scale,
            self.x0 + x * self.cos - y * self.sin,
            self.y0 + x * self.sin + y * self.cos,
        )
    }

    fn apply_bead(&self, b: &Bead) -> Bead {
        Bead { origin: self.apply(&b.origin), destination: self.apply(&b.destination), vmax: b.vmax }
    }
}

/// Both beads in the frame where the anchor's origin sits at the origin and
/// its destination on the positive x axis. Verdicts are invariant under the
/// transform, so results never need to leave this frame except to report a
/// witness point.
#[derive(Debug, Clone)]
pub struct NormalizedPair {
    anchor: Bead,
    other: Bead,
    map: FrameMap,
}

impl NormalizedPair {
    pub fn anchor_bead(&self) -> &Bead {
        &self.anchor
    }

    pub fn other_bead(&self) -> &Bead {
        &self.other
    }

    pub(crate) fn denormalize(&self, p: &TimeSpacePoint) -> TimeSpacePoint {
        self.map.invert(p)
    }
}

/// Moves the chosen anchor bead to the canonical position and carries the
/// other bead along.
pub fn normalize_pair(b1: &Bead, b2: &Bead, anchor: AnchorSide) -> Result<NormalizedPair, AlibiError> {
    let (a, o) = match anchor {
        AnchorSide::First => (b1, b2),
        AnchorSide::Second => (b2, b1),
    };
    if a.destination.t <= a.origin.t {
        return Err(AlibiError::DegenerateAnchor);
    }
    let map = FrameMap::for_anchor(&a.origin, &a.destination);
    Ok(NormalizedPair { anchor: map.apply_bead(a), other: map.apply_bead(o), map })
}

/// Quadratic `c2 x^2 + c1 x + c0` helper for the rim/cone derivation.
#[derive(Debug, Clone, Copy)]
struct Quad {
    c2: f64,
    c1: f64,
    c0: f64,
}

impl Quad {
    fn eval(&self, x: f64) -> f64 {
        (self.c2 * x + self.c1) * x + self.c0
    }

    fn deriv(&self, x: f64) -> f64 {
        2.0 * self.c2 * x + self.c1
    }

    fn magnitude_at(&self, x: f64) -> f64 {
        let ax = x.abs().max(1.0);
        (self.c2.abs() * ax + self.c1.abs()) * ax + self.c0.abs()
    }
}

/// Everything Case II needs for one rim-vs-mantel-half test, all expressed in
/// the anchor's normalized frame: the degree-four polynomial whose real roots
/// are the candidate abscissae, the square-root existence quadratic, the rim
/// parametrization and the target half-bead of the other bead.
#[derive(Debug, Clone)]
pub struct CaseIIContext {
    pub quartic: Poly4,
    pub side: HalfBeadSide,
    /// Square-root existence region: candidates need `sqrt_poly(x) >= 0`.
    sqrt_quad: Quad,
    bracket: Quad,
    rim_n1: f64,
    rim_n0: f64,
    rim_d: f64,
    anchor_t2: f64,
    cone_apex: TimeSpacePoint,
    cone_speed: f64,
    other: Bead,
}

impl CaseIIContext {
    /// Requires a nondegenerate anchor (`t2' > 0`, `v1 > 0`).
    pub fn new(np: &NormalizedPair, side: HalfBeadSide) -> Result<Self, AlibiError> {
        let a = &np.anchor;
        let o = &np.other;
        let t2 = a.destination.t;
        let v1 = a.vmax;
        if t2 <= 0.0 || v1 <= 0.0 {
            return Err(AlibiError::DegenerateAnchor);
        }
        let x2 = a.destination.x;
        let d = 2.0 * v1 * v1 * t2;
        let n1 = 2.0 * x2;
        let n0 = v1 * v1 * t2 * t2 - x2 * x2;

        // S^2(x) = v1^2 N(x)^2 - D^2 x^2, the squared rim height.
        let v1sq = v1 * v1;
        let sqrt_quad = Quad {
            c2: v1sq * n1 * n1 - d * d,
            c1: 2.0 * v1sq * n1 * n0,
            c0: v1sq * n0 * n0,
        };

        let apex = match side {
            HalfBeadSide::Bottom => o.origin,
            HalfBeadSide::Top => o.destination,
        };
        let v2 = o.vmax;

        // Substituting the rim into the cone equation of `apex`, scaled by
        // D^2 and with the y term isolated, leaves
        //   -2 y y_c D^2 = B(x),
        //   B = v2^2 (N - D t_c)^2 - D^2 (x - x_c)^2 - D^2 y_c^2 - S^2;
        // squaring gives the quartic B^2 - 4 y_c^2 D^2 S^2 = 0.
        let m1 = n1;
        let m0 = n0 - d * apex.t;
        let v2sq = v2 * v2;
        let bracket = Quad {
            c2: v2sq * m1 * m1 - d * d - sqrt_quad.c2,
            c1: 2.0 * v2sq * m1 * m0 + 2.0 * d * d * apex.x - sqrt_quad.c1,
            c0: v2sq * m0 * m0 - d * d * apex.x * apex.x - d * d * apex.y * apex.y - sqrt_quad.c0,
        };
        let k = 4.0 * apex.y * apex.y * d * d;
        let quartic = Poly4::new(
            bracket.c2 * bracket.c2,
            2.0 * bracket.c2 * bracket.c1,
            bracket.c1 * bracket.c1 + 2.0 * bracket.c2 * bracket.c0 - k * sqrt_quad.c2,
            2.0 * bracket.c1 * bracket.c0 - k * sqrt_quad.c1,
            bracket.c0 * bracket.c0 - k * sqrt_quad.c0,
        );

        Ok(CaseIIContext {
            quartic,
            side,
            sqrt_quad,
            bracket,
            rim_n1: n1,
            rim_n0: n0,
            rim_d: d,
            anchor_t2: t2,
            cone_apex: apex,
            cone_speed: v2,
            other: *o,
        })
    }

    /// `sqrt_poly(x)`: nonnegative exactly on the rim's abscissa support.
    pub fn sqrt_poly(&self, x: f64) -> f64 {
        self.sqrt_quad.eval(x)
    }

    fn rim_time(&self, x: f64) -> f64 {
        (self.rim_n1 * x + self.rim_n0) / self.rim_d
    }

    fn in_support(&self, x: f64) -> bool {
        let s2 = self.sqrt_quad.eval(x);
        if s2 < -EPS * self.sqrt_quad.magnitude_at(x).max(1.0) {
            return false;
        }
        let t = self.rim_time(x);
        le_tol(0.0, t) && le_tol(t, self.anchor_t2)
    }
}

/// Abscissae where the rim can meet the target cone surface: real roots of
/// the context's quartic that lie in the square-root existence region. An
/// identically zero quartic (the rim rides the cone surface) degenerates to
/// the support boundary.
pub fn rim_mantel_candidates(ctx: &CaseIIContext) -> Vec<f64> {
    let apex_y_scale = ctx.cone_apex.y.abs();
    let roots = if apex_y_scale <= 1e-12 * ctx.rim_d.max(1.0) {
        // The squaring step is vacuous when the apex sits at y = 0: the
        // pre-squared relation B(x) = 0 is already polynomial, and solving it
        // directly avoids the quartic's doubled roots.
        real_roots(&Poly4::new(0.0, 0.0, ctx.bracket.c2, ctx.bracket.c1, ctx.bracket.c0), 1e-6)
    } else {
        real_roots(&ctx.quartic, 1e-6)
    };
    let mut xs = match roots {
        Ok(xs) => xs,
        Err(_) => support_boundary(ctx),
    };
    xs.retain(|x| ctx.in_support(*x));
    xs
}

/// The abscissae where the rim height vanishes.
fn support_boundary(ctx: &CaseIIContext) -> Vec<f64> {
    real_roots(&Poly4::new(0.0, 0.0, ctx.sqrt_quad.c2, ctx.sqrt_quad.c1, ctx.sqrt_quad.c0), 1e-6)
        .unwrap_or_default()
}

/// The rim point(s) of the anchor bead at abscissa `x` in the normalized
/// frame: one point where the rim height vanishes, otherwise the two mirror
/// points `y = ±sqrt(v1^2 t^2 - x^2)`.
pub fn rim_points_from_x(ctx: &CaseIIContext, x: f64) -> Result<Vec<TimeSpacePoint>, AlibiError> {
    if !ctx.in_support(x) {
        return Err(AlibiError::OutsideRimSupport);
    }
    let t = ctx.rim_time(x);
    let s2 = ctx.sqrt_quad.eval(x);
    if s2 <= EPS * ctx.sqrt_quad.magnitude_at(x).max(1.0) {
        Ok(vec![pt(t, x, 0.0)])
    } else {
        let y = s2.sqrt() / ctx.rim_d;
        Ok(vec![pt(t, x, y), pt(t, x, -y)])
    }
}

/// Newton-polishes a candidate abscissa onto the exact (pre-squaring)
/// rim-on-cone relation for one sign of the rim height:
/// `g(x) = B(x) + 2 sign y_c D S(x) = 0` (proportional to the cone residual).
fn polish_on_branch(ctx: &CaseIIContext, x0: f64, sign: f64) -> f64 {
    let mut x = x0;
    for _ in 0..8 {
        let s2 = ctx.sqrt_quad.eval(x);
        if s2 <= 0.0 {
            break;
        }
        let s = s2.sqrt();
        let g = ctx.bracket.eval(x) + 2.0 * sign * ctx.cone_apex.y * ctx.rim_d * s;
        let gp = ctx.bracket.deriv(x) + sign * ctx.cone_apex.y * ctx.rim_d * ctx.sqrt_quad.deriv(x) / s;
        if gp == 0.0 || !gp.is_finite() {
            break;
        }
        let next = x - g / gp;
        if !next.is_finite() || (next - x).abs() <= f64::EPSILON * x.abs().max(1.0) {
            if next.is_finite() {
                x = next;
            }
            break;
        }
        x = next;
    }
    x
}

/// Cone-surface residual of a candidate point against the context's target
/// cone, relative to its magnitude.
fn cone_residual_ok(ctx: &CaseIIContext, p: &TimeSpacePoint) -> bool {
    let lhs = p.sq_dist_xy(&ctx.cone_apex);
    let dt = p.t - ctx.cone_apex.t;
    let rhs = dt * dt * ctx.cone_speed * ctx.cone_speed;
    (lhs - rhs).abs() <= EPS * crate::model::cmp_scale(lhs, rhs)
}

/// One rim-vs-mantel-half test in the anchor's frame; returns a witness in
/// the original frame.
fn rim_hits_mantel_half(np: &NormalizedPair, side: HalfBeadSide) -> Option<TimeSpacePoint> {
    let ctx = CaseIIContext::new(np, side).ok()?;
    let plane = RimPlane::of(&ctx.other);

    let mut candidates = rim_mantel_candidates(&ctx);
    candidates.extend(support_boundary(&ctx));

    for &x0 in &candidates {
        for sign in [1.0, -1.0] {
            let x = polish_on_branch(&ctx, x0, sign);
            if !ctx.in_support(x) {
                continue;
            }
            let t = ctx.rim_time(x);
            let y = sign * ctx.sqrt_quad.eval(x).max(0.0).sqrt() / ctx.rim_d;
            let p = pt(t, x, y);
            if !cone_residual_ok(&ctx, &p) {
                continue;
            }
            if !(le_tol(ctx.other.origin.t, t) && le_tol(t, ctx.other.destination.t)) {
                continue;
            }
            if !plane.on_side(&p, side) {
                continue;
            }
            debug_assert!(ctx.other.contains(&p), "mantel-half witness escapes the bead");
            return Some(np.denormalize(&p));
        }
    }
    None
}

/// Case I: the first apex (of the four) contained in the other bead.
pub fn case_i(b1: &Bead, b2: &Bead) -> Option<TimeSpacePoint> {
    if !b1.is_nonempty() || !b2.is_nonempty() {
        return None;
    }
    for apex in [b2.origin, b2.destination] {
        if b1.contains(&apex) {
            return Some(apex);
        }
    }
    [b1.origin, b1.destination].into_iter().find(|&apex| b2.contains(&apex))
}

fn case_ii_inner(b1: &Bead, b2: &Bead) -> Option<TimeSpacePoint> {
    for anchor in [AnchorSide::First, AnchorSide::Second] {
        let Ok(np) = normalize_pair(b1, b2, anchor) else { continue };
        for side in [HalfBeadSide::Bottom, HalfBeadSide::Top] {
            if let Some(w) = rim_hits_mantel_half(&np, side) {
                return Some(w);
            }
        }
    }
    None
}

/// Case II: a rim of one bead meets a mantel half of the other. Conjoins the
/// negation of Case I and the nonzero-speed guards.
pub fn case_ii(b1: &Bead, b2: &Bead) -> Option<TimeSpacePoint> {
    if !b1.is_nonempty() || !b2.is_nonempty() || b1.vmax == 0.0 || b2.vmax == 0.0 {
        return None;
    }
    if case_i(b1, b2).is_some() {
        return None;
    }
    case_ii_inner(b1, b2)
}

fn case_iii_inner(b1: &Bead, b2: &Bead) -> Option<TimeSpacePoint> {
    let bottoms = (
        Cone::bottom(b1.origin, b1.vmax),
        Cone::bottom(b2.origin, b2.vmax),
    );
    let tops = (
        Cone::top(b1.destination, b1.vmax),
        Cone::top(b2.destination, b2.vmax),
    );
    for (c1, c2) in [bottoms, tops] {
        if let Some(ic) = geometry::raw_initial_contact(&c1, &c2) {
            if b1.contains(&ic) && b2.contains(&ic) {
                return Some(ic);
            }
        }
    }
    None
}

/// Case III: an initial contact of the paired bottom or top cones lies in
/// both beads. Conjoins the negation of Case I and the growth guard
/// `v1 + v2 > 0`.
pub fn case_iii(b1: &Bead, b2: &Bead) -> Option<TimeSpacePoint> {
    if !b1.is_nonempty() || !b2.is_nonempty() || b1.vmax + b2.vmax <= 0.0 {
        return None;
    }
    if case_i(b1, b2).is_some() {
        return None;
    }
    case_iii_inner(b1, b2)
}

/// A zero-speed bead pins its object at one location; intersection reduces
/// to membership of `(t, location)` in the other bead for some t in the slab
/// overlap. The best t is one of the overlap ends or the equalized-distance
/// time between the other bead's two cones, by convexity.
fn segment_intersect(seg: &Bead, other: &Bead) -> Option<TimeSpacePoint> {
    let (sx, sy) = (seg.origin.x, seg.origin.y);
    let lo = seg.start().max(other.start());
    let hi = seg.end().min(other.end());
    if lo > hi {
        return None;
    }
    let mut candidates = vec![lo, hi];
    if other.vmax > 0.0 {
        let d1 = other.origin.sq_dist_xy(&pt(0.0, sx, sy)).sqrt();
        let d2 = other.destination.sq_dist_xy(&pt(0.0, sx, sy)).sqrt();
        let balance = (d1 - d2) / (2.0 * other.vmax) + 0.5 * (other.origin.t + other.destination.t);
        candidates.push(balance.clamp(lo, hi));
    }
    candidates
        .into_iter()
        .map(|t| pt(t, sx, sy))
        .find(|p| other.contains(p))
}

/// Decides whether two beads intersect, reporting which case fired and a
/// witness point contained in both beads. Cases run in order I, II, III with
/// short-circuit; degenerate beads (points, zero-speed segments) take a
/// dedicated membership path after Case I.
pub fn beads_intersect(b1: &Bead, b2: &Bead) -> AlibiVerdict {
    if !b1.is_nonempty() || !b2.is_nonempty() {
        return AlibiVerdict::miss();
    }
    // Time-slab pre-filter: disjoint slabs cannot meet.
    if b1.end() < b2.start() || b2.end() < b1.start() {
        return AlibiVerdict::miss();
    }
    if let Some(w) = case_i(b1, b2) {
        return AlibiVerdict::hit(FiredCase::I, w);
    }
    // A point bead is a single time-space point, fully handled by Case I.
    if b1.is_point() || b2.is_point() {
        return AlibiVerdict::miss();
    }
    if b1.is_segment() {
        return match segment_intersect(b1, b2) {
            Some(w) => AlibiVerdict::hit(FiredCase::III, w),
            None => AlibiVerdict::miss(),
        };
    }
    if b2.is_segment() {
        return match segment_intersect(b2, b1) {
            Some(w) => AlibiVerdict::hit(FiredCase::III, w),
            None => AlibiVerdict::miss(),
        };
    }
    if let Some(w) = case_ii_inner(b1, b2) {
        return AlibiVerdict::hit(FiredCase::II, w);
    }
    if let Some(w) = case_iii_inner(b1, b2) {
        return AlibiVerdict::hit(FiredCase::III, w);
    }
    AlibiVerdict::miss()
}
