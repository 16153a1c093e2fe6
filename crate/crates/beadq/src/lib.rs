//! Exact alibi queries on uncertain moving-object trajectories.
//!
//! Between two time-stamped samples, an object bounded by a top speed can
//! only have visited a *bead* (space-time prism). Two objects can have met
//! only if some pair of their beads intersects. This crate decides that
//! predicate in closed form — a constant-time case analysis over apex
//! containment, rim/mantel crossings (a degree-four root problem) and cone
//! initial contacts — instead of running general quantifier elimination, and
//! ships a fixed-time variant built on disc intersection plus Helly's
//! theorem.
//!
//! Sampling-based brute-force oracles and a small query engine with CSV/JSON
//! ingestion round out the crate; the oracles exist to be slow and right.

pub mod alibi;
pub mod discs;
pub mod engine;
pub mod geometry;
pub mod model;
pub mod oracle;
pub mod roots;

pub use alibi::{
    beads_intersect, case_i, case_ii, case_iii, normalize_pair, rim_mantel_candidates,
    rim_points_from_x, AlibiError, AnchorSide, CaseIIContext, NormalizedPair,
};

pub use discs::{
    alibi_at_time, circle_circle_intersection, four_discs_intersect, three_discs_intersect,
    CirclePair, DiscError,
};
pub use engine::{
    bench, load_database, run_alibi, run_alibi_at, run_alibi_naive, run_bead_pair, AgreementStats,
    DbFormat, EngineError, QueryReport, Timings,
};
pub use geometry::{
    in_half_bead, initial_contact, on_cone_surface, on_mantel, on_rim, GeometryError, HalfBeadSide,
    RimPlane,
};
pub use model::{
    pt, AlibiVerdict, Bead, Cone, ConeOrientation, Disc, FiredCase, ModelError, Necklace, Sample,
    TimeSpacePoint, TrajectoryDatabase, EPS,
};
pub use oracle::{grid_reliability_floor, oracle_beads_intersect, oracle_discs_intersect, OracleVerdict};
pub use roots::{real_roots, Poly4, RootsError};
