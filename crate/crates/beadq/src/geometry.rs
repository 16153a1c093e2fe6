//! Geometric components of a bead: cone surfaces, the mantel (topological
//! border), the rim where the two cone surfaces meet, the half-beads the rim
//! plane cuts out, and the closed-form initial contact of two cones.

use thiserror::Error;

use crate::model::{eq_tol, le_tol, lt_strict, Bead, Cone, ConeOrientation, TimeSpacePoint};

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("cones must share an orientation")]
    OrientationMismatch,
    #[error("no unique contact direction: apexes are spatially coincident")]
    CoincidentApexes,
    #[error("an apex lies inside the other cone")]
    ApexInsideCone,
    #[error("both speeds are zero: the circles never grow into contact")]
    ZeroGrowth,
}

/// Which side of the rim plane a point is tested against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfBeadSide {
    Bottom,
    Top,
}

/// The plane containing the rim, as `A_t t + A_x x + A_y y + A_0 = 0`.
/// Negative values of the linear form lie on the bottom-half side. The same
/// linear form splits the mantel and the bead itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RimPlane {
    pub a_t: f64,
    pub a_x: f64,
    pub a_y: f64,
    pub a_0: f64,
}

impl RimPlane {
    pub fn of(bead: &Bead) -> Self {
        let p = bead.origin;
        let q = bead.destination;
        let vv = bead.vmax * bead.vmax;
        RimPlane {
            a_t: 2.0 * vv * (q.t - p.t),
            a_x: 2.0 * (p.x - q.x),
            a_y: 2.0 * (p.y - q.y),
            a_0: q.x * q.x - p.x * p.x + q.y * q.y - p.y * p.y - vv * (q.t * q.t - p.t * p.t),
        }
    }

    pub fn eval(&self, p: &TimeSpacePoint) -> f64 {
        self.a_t * p.t + self.a_x * p.x + self.a_y * p.y + self.a_0
    }

    /// Closed test that `p` lies on the given side of the plane.
    pub fn on_side(&self, p: &TimeSpacePoint, side: HalfBeadSide) -> bool {
        let v = self.eval(p);
        let scale = self.scale_at(p);
        match side {
            HalfBeadSide::Bottom => v <= crate::model::EPS * scale,
            HalfBeadSide::Top => v >= -crate::model::EPS * scale,
        }
    }

    fn scale_at(&self, p: &TimeSpacePoint) -> f64 {
        1.0_f64
            .max((self.a_t * p.t).abs())
            .max((self.a_x * p.x).abs())
            .max((self.a_y * p.y).abs())
            .max(self.a_0.abs())
    }
}

/// Whether `p` lies on the border surface of the cone (equality, not the
/// filled interior), on the apex's side of time.
pub fn on_cone_surface(cone: &Cone, p: &TimeSpacePoint) -> bool {
    let dt = match cone.orientation {
        ConeOrientation::Bottom => p.t - cone.apex.t,
        ConeOrientation::Top => cone.apex.t - p.t,
    };
    if !le_tol(0.0, dt) {
        return false;
    }
    eq_tol(p.sq_dist_xy(&cone.apex), dt * dt * cone.vmax * cone.vmax)
}

/// Whether `p` lies on the mantel: the bottom-cone surface on the bottom side
/// of the rim plane, or the top-cone surface on the top side, inside the time
/// slab.
pub fn on_mantel(bead: &Bead, p: &TimeSpacePoint) -> bool {
    if !(le_tol(bead.origin.t, p.t) && le_tol(p.t, bead.destination.t)) {
        return false;
    }
    let plane = RimPlane::of(bead);
    let bottom = Cone::bottom(bead.origin, bead.vmax);
    let top = Cone::top(bead.destination, bead.vmax);
    (on_cone_surface(&bottom, p) && plane.on_side(p, HalfBeadSide::Bottom))
        || (on_cone_surface(&top, p) && plane.on_side(p, HalfBeadSide::Top))
}

/// Whether `p` lies on the rim: the ellipse where the two cone surfaces meet,
/// i.e. bottom-cone equality, time slab and rim-plane equality all hold.
pub fn on_rim(bead: &Bead, p: &TimeSpacePoint) -> bool {
    if !(le_tol(bead.origin.t, p.t) && le_tol(p.t, bead.destination.t)) {
        return false;
    }
    let bottom = Cone::bottom(bead.origin, bead.vmax);
    if !on_cone_surface(&bottom, p) {
        return false;
    }
    let plane = RimPlane::of(bead);
    plane.eval(p).abs() <= crate::model::EPS * plane.scale_at(p)
}

/// Whether `p` lies in the closed bottom or top half-bead.
pub fn in_half_bead(bead: &Bead, p: &TimeSpacePoint, side: HalfBeadSide) -> bool {
    if !(le_tol(bead.origin.t, p.t) && le_tol(p.t, bead.destination.t)) {
        return false;
    }
    let vv = bead.vmax * bead.vmax;
    let cone_ok = match side {
        HalfBeadSide::Bottom => {
            let dt = p.t - bead.origin.t;
            le_tol(p.sq_dist_xy(&bead.origin), dt * dt * vv)
        }
        HalfBeadSide::Top => {
            let dt = bead.destination.t - p.t;
            le_tol(p.sq_dist_xy(&bead.destination), dt * dt * vv)
        }
    };
    cone_ok && RimPlane::of(bead).on_side(p, side)
}

/// Strictly-inside test used by the initial-contact precondition: the apex of
/// `other` lies in the filled cone of `cone` beyond tolerance.
fn apex_strictly_inside(cone: &Cone, other: &Cone) -> bool {
    let dt = match cone.orientation {
        ConeOrientation::Bottom => other.apex.t - cone.apex.t,
        ConeOrientation::Top => cone.apex.t - other.apex.t,
    };
    if dt < 0.0 {
        return false;
    }
    lt_strict(cone.apex.sq_dist_xy(&other.apex), dt * dt * cone.vmax * cone.vmax)
}

/// First time-space point at which the two growing circles of same-oriented
/// cones touch: the radius sum equals the center distance. For bottom cones
///
///   t = (dist + t1 v1 + t2 v2) / (v1 + v2)
///
/// with the contact on the segment between the apex projections; top cones
/// are the time-mirrored analogue.
pub fn initial_contact(c1: &Cone, c2: &Cone) -> Result<TimeSpacePoint, GeometryError> {
    if c1.orientation != c2.orientation {
        return Err(GeometryError::OrientationMismatch);
    }
    if c1.vmax + c2.vmax <= 0.0 {
        return Err(GeometryError::ZeroGrowth);
    }
    if c1.apex.sq_dist_xy(&c2.apex) == 0.0 {
        return Err(GeometryError::CoincidentApexes);
    }
    if apex_strictly_inside(c1, c2) || apex_strictly_inside(c2, c1) {
        return Err(GeometryError::ApexInsideCone);
    }
    raw_initial_contact(c1, c2).ok_or(GeometryError::CoincidentApexes)
}

/// The contact formula itself, with no apex-containment precondition: any
/// caller validating the result by bead membership may use candidates freely.
/// `None` when the apexes are spatially coincident or nothing grows.
pub(crate) fn raw_initial_contact(c1: &Cone, c2: &Cone) -> Option<TimeSpacePoint> {
    let (v1, v2) = (c1.vmax, c2.vmax);
    if v1 + v2 <= 0.0 {
        return None;
    }
    let a1 = c1.apex;
    let a2 = c2.apex;
    let dist = a1.sq_dist_xy(&a2).sqrt();
    if dist == 0.0 {
        return None;
    }
    let ux = (a2.x - a1.x) / dist;
    let uy = (a2.y - a1.y) / dist;
    match c1.orientation {
        ConeOrientation::Bottom => {
            let t = (dist + a1.t * v1 + a2.t * v2) / (v1 + v2);
            let r1 = v1 * (t - a1.t);
            Some(TimeSpacePoint::new(t, a1.x + r1 * ux, a1.y + r1 * uy))
        }
        ConeOrientation::Top => {
            let t = (a1.t * v1 + a2.t * v2 - dist) / (v1 + v2);
            let r1 = v1 * (a1.t - t);
            Some(TimeSpacePoint::new(t, a1.x + r1 * ux, a1.y + r1 * uy))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::pt;
    use rand::{Rng, SeedableRng};

    fn bead(t1: f64, x1: f64, y1: f64, t2: f64, x2: f64, y2: f64, v: f64) -> Bead {
        Bead::from_coords(t1, x1, y1, t2, x2, y2, v).unwrap()
    }

    #[test]
    fn bottom_cone_surface_examples() {
        let c = Cone::bottom(pt(0.0, 0.0, 0.0), 1.0);
        assert!(on_cone_surface(&c, &pt(1.0, 1.0, 0.0)));
        assert!(!on_cone_surface(&c, &pt(1.0, 0.5, 0.0))); // interior
        assert!(!on_cone_surface(&c, &pt(-1.0, 1.0, 0.0))); // before the apex
    }

    #[test]
    fn mantel_examples() {
        let b = bead(0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 1.0);
        assert!(on_mantel(&b, &pt(0.5, 0.5, 0.0)));
        assert!(on_mantel(&b, &pt(1.0, 1.0, 0.0))); // rim point
        assert!(!on_mantel(&b, &pt(1.0, 0.0, 0.0))); // interior
    }

    #[test]
    fn rim_examples() {
        let b = bead(0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 1.0);
        assert!(on_rim(&b, &pt(1.0, 1.0, 0.0)));
        assert!(on_rim(&b, &pt(1.0, 0.0, 1.0)));
        assert!(!on_rim(&b, &pt(0.5, 0.5, 0.0))); // on the mantel, off the plane
    }

    #[test]
    fn half_bead_examples() {
        let b = bead(0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 1.0);
        assert!(in_half_bead(&b, &pt(0.5, 0.0, 0.0), HalfBeadSide::Bottom));
        assert!(!in_half_bead(&b, &pt(0.5, 0.0, 0.0), HalfBeadSide::Top));
        // The rim plane is shared by both closed halves.
        assert!(in_half_bead(&b, &pt(1.0, 1.0, 0.0), HalfBeadSide::Bottom));
        assert!(in_half_bead(&b, &pt(1.0, 1.0, 0.0), HalfBeadSide::Top));
    }

    #[test]
    fn initial_contact_unit_cones() {
        let ic = initial_contact(&Cone::bottom(pt(0.0, 0.0, 0.0), 1.0), &Cone::bottom(pt(0.0, 2.0, 0.0), 1.0)).unwrap();
        assert!((ic.t - 1.0).abs() < 1e-12);
        assert!((ic.x - 1.0).abs() < 1e-12);
        assert!(ic.y.abs() < 1e-12);
    }

    #[test]
    fn initial_contact_mixed_speeds() {
        let c1 = Cone::bottom(pt(0.0, 0.0, 0.0), 1.0);
        let c2 = Cone::bottom(pt(1.0, 3.0, 0.0), 2.0);
        let ic = initial_contact(&c1, &c2).unwrap();
        assert!((ic.t - 5.0 / 3.0).abs() < 1e-12);
        assert!((ic.x - 5.0 / 3.0).abs() < 1e-12);
        assert!(ic.y.abs() < 1e-12);
        // Both cone equalities hold.
        assert!(on_cone_surface(&c1, &ic));
        assert!(on_cone_surface(&c2, &ic));
    }

    #[test]
    fn initial_contact_errors() {
        let c1 = Cone::bottom(pt(0.0, 1.0, 1.0), 1.0);
        assert_eq!(
            initial_contact(&c1, &Cone::bottom(pt(2.0, 1.0, 1.0), 1.0)),
            Err(GeometryError::CoincidentApexes)
        );
        assert_eq!(
            initial_contact(&c1, &Cone::top(pt(2.0, 3.0, 1.0), 1.0)),
            Err(GeometryError::OrientationMismatch)
        );
        assert_eq!(
            initial_contact(&c1, &Cone::bottom(pt(3.0, 1.5, 1.0), 1.0)),
            Err(GeometryError::ApexInsideCone)
        );
        let frozen = Cone::bottom(pt(0.0, 1.0, 1.0), 0.0);
        assert_eq!(
            initial_contact(&frozen, &Cone::bottom(pt(0.0, 4.0, 1.0), 0.0)),
            Err(GeometryError::ZeroGrowth)
        );
        // A single growing circle reaching a frozen one still has a contact.
        let ic = initial_contact(&c1, &Cone::bottom(pt(0.0, 4.0, 1.0), 0.0)).unwrap();
        assert_eq!((ic.t, ic.x, ic.y), (3.0, 4.0, 1.0));
    }

    fn random_nonempty_bead(rng: &mut impl Rng) -> Bead {
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
                rng.gen_range(0.1..3.0),
            );
            if b.is_nonempty() {
                return b;
            }
        }
    }

    /// Walks the rim as bottom-cone points at the rim-plane time per spatial
    /// direction; every sampled rim point must sit on the mantel, and the
    /// half-bead split must agree with plain membership.
    #[test]
    fn rim_points_lie_on_mantel_and_halves_cover_bead() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let b = random_nonempty_bead(&mut rng);
            let plane = RimPlane::of(&b);
            let vv = b.vmax * b.vmax;
            for k in 0..24 {
                let ang = k as f64 / 24.0 * std::f64::consts::TAU;
                // Solve for t on the bottom cone along direction ang subject
                // to the plane: A_t t + A_x (x1 + v(t-t1)cos) + ... + A_0 = 0.
                let (c, s) = (ang.cos(), ang.sin());
                let denom = plane.a_t + b.vmax * (plane.a_x * c + plane.a_y * s);
                if denom.abs() < 1e-9 {
                    continue;
                }
                let num = -(plane.a_0
                    + plane.a_x * (b.origin.x - b.vmax * b.origin.t * c)
                    + plane.a_y * (b.origin.y - b.vmax * b.origin.t * s));
                let t = num / denom;
                let r = b.vmax * (t - b.origin.t);
                if r < 0.0 || t < b.origin.t || t > b.destination.t {
                    continue;
                }
                let p = pt(t, b.origin.x + r * c, b.origin.y + r * s);
                if !on_rim(&b, &p) {
                    continue;
                }
                assert!(on_mantel(&b, &p), "rim point off mantel: {p:?} of {b:?}");
                assert!(in_half_bead(&b, &p, HalfBeadSide::Bottom));
                assert!(in_half_bead(&b, &p, HalfBeadSide::Top));
            }
            // Half-bead union equals membership on random probes.
            for _ in 0..40 {
                let p = pt(
                    rng.gen_range(b.origin.t..=b.destination.t),
                    rng.gen_range(-6.0..6.0),
                    rng.gen_range(-6.0..6.0),
                );
                let union = in_half_bead(&b, &p, HalfBeadSide::Bottom) || in_half_bead(&b, &p, HalfBeadSide::Top);
                assert_eq!(union, b.contains(&p), "half-bead union mismatch at {p:?} of {b:?}");
            }
            let _ = vv;
        }
    }

    /// Contact identities: distance to each apex equals that cone's radius,
    /// and the radii sum to the apex distance (bottom case).
    #[test]
    fn initial_contact_identities() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        let mut checked = 0;
        while checked < 300 {
            let c1 = Cone::bottom(
                pt(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)),
                rng.gen_range(0.1..3.0),
            );
            let c2 = Cone::bottom(
                pt(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)),
                rng.gen_range(0.1..3.0),
            );
            let Ok(ic) = initial_contact(&c1, &c2) else { continue };
            checked += 1;
            let d1 = ic.sq_dist_xy(&c1.apex).sqrt();
            let d2 = ic.sq_dist_xy(&c2.apex).sqrt();
            let dist = c1.apex.sq_dist_xy(&c2.apex).sqrt();
            assert!((d1 - c1.vmax * (ic.t - c1.apex.t)).abs() <= 1e-9 * dist.max(1.0));
            assert!((d2 - c2.vmax * (ic.t - c2.apex.t)).abs() <= 1e-9 * dist.max(1.0));
            assert!((d1 + d2 - dist).abs() <= 1e-9 * dist.max(1.0));
        }
    }

    /// The top-cone contact is the time reflection of the bottom-cone contact
    /// of the reflected cones.
    #[test]
    fn initial_contact_mirror_symmetry() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let mut checked = 0;
        while checked < 200 {
            let a1 = pt(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            let a2 = pt(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            let v1 = rng.gen_range(0.1..3.0);
            let v2 = rng.gen_range(0.1..3.0);
            let top = initial_contact(&Cone::top(a1, v1), &Cone::top(a2, v2));
            let mirrored = initial_contact(
                &Cone::bottom(pt(-a1.t, a1.x, a1.y), v1),
                &Cone::bottom(pt(-a2.t, a2.x, a2.y), v2),
            );
            match (top, mirrored) {
                (Ok(p), Ok(q)) => {
                    checked += 1;
                    assert!((p.t + q.t).abs() < 1e-9);
                    assert!((p.x - q.x).abs() < 1e-9);
                    assert!((p.y - q.y).abs() < 1e-9);
                }
                (Err(e1), Err(e2)) => assert_eq!(e1, e2),
                (a, b) => panic!("asymmetric outcome: {a:?} vs {b:?}"),
            }
        }
    }
}
