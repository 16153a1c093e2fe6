//! Domain model: time-space points, beads (space-time prisms), discs,
//! trajectory samples/databases and lifeline necklaces.
//!
//! A bead is the set of points an object moving under a speed bound can have
//! visited between two time-stamped locations. All set memberships here are
//! closed: tangency counts as containment.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute tolerance on squared-distance comparisons, applied after scaling
/// by the magnitude of the operands.
pub const EPS: f64 = 1e-9;

pub(crate) fn cmp_scale(a: f64, b: f64) -> f64 {
    1.0_f64.max(a.abs()).max(b.abs())
}

/// `a <= b` up to the scaled tolerance.
pub(crate) fn le_tol(a: f64, b: f64) -> bool {
    a <= b + EPS * cmp_scale(a, b)
}

/// `a == b` up to the scaled tolerance.
pub(crate) fn eq_tol(a: f64, b: f64) -> bool {
    (a - b).abs() <= EPS * cmp_scale(a, b)
}

/// `a < b` with a tolerance margin (strictly less beyond noise).
pub(crate) fn lt_strict(a: f64, b: f64) -> bool {
    a < b - EPS * cmp_scale(a, b)
}

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("coordinate is not finite")]
    NonFinite,
    #[error("bead destination precedes origin in time")]
    TimeOrder,
    #[error("negative speed bound")]
    NegativeSpeed,
    #[error("duplicate sample for label {label} at t = {t}")]
    DuplicateSample { label: String, t: f64 },
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("label {0:?} has fewer than two samples")]
    TooFewSamples(String),
}

/// An event in time-space: a time stamp plus a planar location.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeSpacePoint {
    pub t: f64,
    pub x: f64,
    pub y: f64,
}

impl TimeSpacePoint {
    pub fn new(t: f64, x: f64, y: f64) -> Self {
        Self { t, x, y }
    }

    /// Squared spatial distance, ignoring time.
    pub fn sq_dist_xy(&self, other: &TimeSpacePoint) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.x.is_finite() && self.y.is_finite()
    }
}

/// Shorthand constructor used pervasively in tests and geometry code.
pub fn pt(t: f64, x: f64, y: f64) -> TimeSpacePoint {
    TimeSpacePoint::new(t, x, y)
}

/// A space-time prism: every point reachable from `origin` and able to still
/// reach `destination` under the speed bound `vmax`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bead {
    pub origin: TimeSpacePoint,
    pub destination: TimeSpacePoint,
    pub vmax: f64,
}

impl Bead {
    pub fn new(origin: TimeSpacePoint, destination: TimeSpacePoint, vmax: f64) -> Result<Self, ModelError> {
        if !origin.is_finite() || !destination.is_finite() || !vmax.is_finite() {
            return Err(ModelError::NonFinite);
        }
        if destination.t < origin.t {
            return Err(ModelError::TimeOrder);
        }
        if vmax < 0.0 {
            return Err(ModelError::NegativeSpeed);
        }
        Ok(Self { origin, destination, vmax })
    }

    pub fn from_coords(t1: f64, x1: f64, y1: f64, t2: f64, x2: f64, y2: f64, vmax: f64) -> Result<Self, ModelError> {
        Self::new(pt(t1, x1, y1), pt(t2, x2, y2), vmax)
    }

    /// The bead holds at least one point: the destination is reachable from
    /// the origin at the speed bound.
    pub fn is_nonempty(&self) -> bool {
        let dt = self.destination.t - self.origin.t;
        le_tol(self.origin.sq_dist_xy(&self.destination), dt * dt * self.vmax * self.vmax)
    }

    /// Closed membership test for the prism (both cone inequalities plus the
    /// time slab).
    pub fn contains(&self, p: &TimeSpacePoint) -> bool {
        let vv = self.vmax * self.vmax;
        let dt_lo = p.t - self.origin.t;
        let dt_hi = self.destination.t - p.t;
        le_tol(self.origin.t, p.t)
            && le_tol(p.t, self.destination.t)
            && le_tol(p.sq_dist_xy(&self.origin), dt_lo * dt_lo * vv)
            && le_tol(p.sq_dist_xy(&self.destination), dt_hi * dt_hi * vv)
    }

    /// Spatial cross-section at `t0`: the disc reachable from the origin and
    /// the disc from which the destination is still reachable. Empty outside
    /// the time slab; the section itself is the intersection of the two discs.
    pub fn time_slice(&self, t0: f64) -> Option<(Disc, Disc)> {
        if t0 < self.origin.t || t0 > self.destination.t {
            return None;
        }
        let lower = Disc::new(self.origin.x, self.origin.y, self.vmax * (t0 - self.origin.t));
        let upper = Disc::new(self.destination.x, self.destination.y, self.vmax * (self.destination.t - t0));
        Some((lower, upper))
    }

    pub fn start(&self) -> f64 {
        self.origin.t
    }

    pub fn end(&self) -> f64 {
        self.destination.t
    }

    /// Zero time extent; a nonempty point bead is a single time-space point.
    pub fn is_point(&self) -> bool {
        self.origin.t == self.destination.t
    }

    /// Zero speed bound with positive time extent: the object cannot move, so
    /// a nonempty bead of this kind is a vertical line segment.
    pub fn is_segment(&self) -> bool {
        self.vmax == 0.0 && !self.is_point()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeOrientation {
    /// Grows forward in time from the apex.
    Bottom,
    /// Grows backward in time from the apex.
    Top,
}

/// One of the two cones bounding a bead.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cone {
    pub apex: TimeSpacePoint,
    pub vmax: f64,
    pub orientation: ConeOrientation,
}

impl Cone {
    pub fn bottom(apex: TimeSpacePoint, vmax: f64) -> Self {
        Self { apex, vmax, orientation: ConeOrientation::Bottom }
    }

    pub fn top(apex: TimeSpacePoint, vmax: f64) -> Self {
        Self { apex, vmax, orientation: ConeOrientation::Top }
    }
}

/// A closed disc in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Disc {
    pub cx: f64,
    pub cy: f64,
    pub r: f64,
}

impl Disc {
    pub fn new(cx: f64, cy: f64, r: f64) -> Self {
        debug_assert!(r >= 0.0, "disc radius must be nonnegative");
        Self { cx, cy, r }
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        let dx = x - self.cx;
        let dy = y - self.cy;
        le_tol(dx * dx + dy * dy, self.r * self.r)
    }

    pub fn center_sq_dist(&self, other: &Disc) -> f64 {
        let dx = self.cx - other.cx;
        let dy = self.cy - other.cy;
        dx * dx + dy * dy
    }
}

/// One row of a trajectory database: a labelled time-stamped location plus
/// the speed bound holding from this sample to the next one of the same label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub label: String,
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub v: f64,
}

/// Samples grouped by label, each group sorted by strictly increasing time.
#[derive(Debug, Clone, Default)]
pub struct TrajectoryDatabase {
    groups: BTreeMap<String, Vec<Sample>>,
}

impl TrajectoryDatabase {
    /// Builds a validated database. Rows may arrive unsorted; they are sorted
    /// per label and duplicate `(label, t)` pairs are rejected.
    pub fn from_samples<I: IntoIterator<Item = Sample>>(rows: I) -> Result<Self, ModelError> {
        let mut groups: BTreeMap<String, Vec<Sample>> = BTreeMap::new();
        for s in rows {
            if !(s.t.is_finite() && s.x.is_finite() && s.y.is_finite() && s.v.is_finite()) {
                return Err(ModelError::NonFinite);
            }
            if s.v < 0.0 {
                return Err(ModelError::NegativeSpeed);
            }
            groups.entry(s.label.clone()).or_default().push(s);
        }
        for (label, group) in groups.iter_mut() {
            group.sort_by(|a, b| a.t.partial_cmp(&b.t).expect("finite times"));
            for w in group.windows(2) {
                if w[0].t == w[1].t {
                    return Err(ModelError::DuplicateSample { label: label.clone(), t: w[0].t });
                }
            }
        }
        Ok(Self { groups })
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.groups.keys().map(|s| s.as_str())
    }

    pub fn samples(&self, label: &str) -> Option<&[Sample]> {
        self.groups.get(label).map(|v| v.as_slice())
    }

    pub fn len(&self) -> usize {
        self.groups.values().map(|v| v.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Chains one bead per consecutive sample pair of `label`, each using the
    /// speed bound recorded on the earlier sample.
    pub fn necklace(&self, label: &str) -> Result<Necklace, ModelError> {
        let group = self
            .groups
            .get(label)
            .ok_or_else(|| ModelError::UnknownLabel(label.to_string()))?;
        if group.len() < 2 {
            return Err(ModelError::TooFewSamples(label.to_string()));
        }
        let beads = group
            .windows(2)
            .map(|w| {
                Bead::new(pt(w[0].t, w[0].x, w[0].y), pt(w[1].t, w[1].x, w[1].y), w[0].v)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Necklace { label: label.to_string(), beads })
    }
}

/// The lifeline necklace of one moving object: its beads in time order,
/// adjacent beads sharing the sample point at the junction.
#[derive(Debug, Clone, PartialEq)]
pub struct Necklace {
    pub label: String,
    beads: Vec<Bead>,
}

impl Necklace {
    pub fn beads(&self) -> &[Bead] {
        &self.beads
    }

    pub fn len(&self) -> usize {
        self.beads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beads.is_empty()
    }
}

/// Which of the three intersection cases produced the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FiredCase {
    /// An apex of one bead lies in the other.
    I,
    /// A rim of one bead crosses the other's mantel.
    II,
    /// An initial contact of the paired cones lies in both beads.
    III,
    /// No intersection.
    None,
}

impl std::fmt::Display for FiredCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FiredCase::I => write!(f, "I"),
            FiredCase::II => write!(f, "II"),
            FiredCase::III => write!(f, "III"),
            FiredCase::None => write!(f, "none"),
        }
    }
}

/// Outcome of the bead-pair intersection decision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlibiVerdict {
    pub intersects: bool,
    pub fired_case: FiredCase,
    pub witness: Option<TimeSpacePoint>,
}

impl AlibiVerdict {
    pub fn miss() -> Self {
        Self { intersects: false, fired_case: FiredCase::None, witness: None }
    }

    pub fn hit(case: FiredCase, witness: TimeSpacePoint) -> Self {
        Self { intersects: true, fired_case: case, witness: Some(witness) }
    }
}
