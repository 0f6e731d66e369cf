//! Exact simulation of the two-chamber rational billiard `P_α` and of a
//! trajectory family from `O` to `A` that no finite set of points can block.
//!
//! All coordinates live in a real quadratic field `ℚ(α)` ([`qfield`]), so
//! every reflection, intersection and incidence test is decided exactly.

pub mod billiard;
pub mod blocking;
pub mod family;
pub mod geometry;
pub mod qfield;
pub mod render;
pub mod unfolding;
pub mod wire;

pub use billiard::{Bounce, CornerHit, Table, TraceError, TraceStatus, Trajectory};
pub use blocking::{BlockingSet, Evasion, EvasionResult, FoldingWitness, NotFoundWithinBudget};
pub use family::{FamilyIndex, FamilyParams, GammaReport};
pub use geometry::{Containment, Direction, HitClass, Point, Polygon, Segment};
pub use qfield::{qel, AlphaSpec, QElement};
pub use unfolding::{Isometry, UnfoldedLine};
