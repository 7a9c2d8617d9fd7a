//! Minkowski-space primitives: intervals, causal ordering, light cones, and
//! the transmission lines used by the transfer protocol.
//!
//! Conventions: a fixed inertial frame, coordinates `(x, y, z, t)` with
//! spatial units of light-seconds and `c = 1`. The interval sign is timelike
//! positive, so `interval2 > 0` means causally connectable slower than light,
//! `0` exactly at light speed, `< 0` spacelike.
//!
//! The light cone `L(p)` of a point `p` is the set containing `p` and every
//! point reachable from it at speed at most 1. Membership is inclusive on the
//! lightlike boundary: the protocol transmits qudits at exactly light speed,
//! so the boundary must count as causal.

use alloc::format;
use alloc::string::String;
use serde::{Deserialize, Serialize};

/// Tolerance for causal-boundary comparisons.
///
/// Points within this slack of a light cone's boundary are treated as inside
/// it, so lightlike transmission chains validate cleanly under floating-point
/// roundoff.
pub const CAUSAL_TOL: f64 = 1e-9;

/// Tolerance for unit-norm checks on spatial directions.
pub const UNIT_TOL: f64 = 1e-12;

/// Errors from constructing or combining geometric values.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("coordinate is not finite: {0}")]
    NonFinite(String),
    #[error("direction ({x}, {y}, {z}) is not unit length")]
    NotUnitLength { x: f64, y: f64, z: f64 },
    #[error("transfer time must be positive, got {0}")]
    NonPositiveTransferTime(f64),
    #[error("transfer points {q0:?} and {q1:?} are not spacelike separated")]
    TransferPointsNotSpacelike { q0: SpacetimePoint, q1: SpacetimePoint },
    #[error("line parameter must be nonnegative, got {0}")]
    NegativeLineParameter(f64),
    #[error("direction index must be 0 or 1, got {0}")]
    BadDirectionIndex(u8),
    #[error("inputs are causally ordered; the earliest intersection point is the later input {later:?}")]
    CausallyOrderedInputs { later: SpacetimePoint },
}

/// An event location in the agreed frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "(f64, f64, f64, f64)", try_from = "(f64, f64, f64, f64)")]
pub struct SpacetimePoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub t: f64,
}

impl SpacetimePoint {
    /// The protocol start point `P`.
    pub const ORIGIN: SpacetimePoint = SpacetimePoint {
        x: 0.0,
        y: 0.0,
        z: 0.0,
        t: 0.0,
    };

    pub fn new(x: f64, y: f64, z: f64, t: f64) -> Result<Self, GeometryError> {
        let p = SpacetimePoint { x, y, z, t };
        if !(x.is_finite() && y.is_finite() && z.is_finite() && t.is_finite()) {
            return Err(GeometryError::NonFinite(format!("{p:?}")));
        }
        Ok(p)
    }

    /// Euclidean distance between the spatial parts.
    pub fn spatial_distance(&self, other: &SpacetimePoint) -> f64 {
        let dx = other.x - self.x;
        let dy = other.y - self.y;
        let dz = other.z - self.z;
        libm::sqrt(dx * dx + dy * dy + dz * dz)
    }

    /// Coordinate-wise closeness, used to recognize canonical points.
    pub fn approx_eq(&self, other: &SpacetimePoint, tol: f64) -> bool {
        (self.x - other.x).abs() <= tol
            && (self.y - other.y).abs() <= tol
            && (self.z - other.z).abs() <= tol
            && (self.t - other.t).abs() <= tol
    }
}

impl From<SpacetimePoint> for (f64, f64, f64, f64) {
    fn from(p: SpacetimePoint) -> Self {
        (p.x, p.y, p.z, p.t)
    }
}

impl TryFrom<(f64, f64, f64, f64)> for SpacetimePoint {
    type Error = GeometryError;
    fn try_from(v: (f64, f64, f64, f64)) -> Result<Self, Self::Error> {
        SpacetimePoint::new(v.0, v.1, v.2, v.3)
    }
}

/// Squared Minkowski interval, timelike positive:
/// `(q.t - p.t)^2 - |q.xyz - p.xyz|^2`. Symmetric in its arguments.
pub fn interval2(p: &SpacetimePoint, q: &SpacetimePoint) -> f64 {
    let dt = q.t - p.t;
    let dx = q.x - p.x;
    let dy = q.y - p.y;
    let dz = q.z - p.z;
    dt * dt - (dx * dx + dy * dy + dz * dz)
}

/// Whether `q` lies in the (inclusive) future light cone `L(p)`.
///
/// True iff `q` is no earlier than `p` and the separation is timelike or
/// lightlike, both within [`CAUSAL_TOL`]. Reflexive, and a partial order on
/// point sets away from the tolerance band.
pub fn causally_precedes(p: &SpacetimePoint, q: &SpacetimePoint) -> bool {
    q.t - p.t >= -CAUSAL_TOL && interval2(p, q) >= -CAUSAL_TOL
}

/// Whether neither point causally precedes the other.
pub fn spacelike_separated(p: &SpacetimePoint, q: &SpacetimePoint) -> bool {
    !causally_precedes(p, q) && !causally_precedes(q, p)
}

/// A unit spatial 3-vector along which a subsystem is transmitted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "(f64, f64, f64)", try_from = "(f64, f64, f64)")]
pub struct Direction {
    x: f64,
    y: f64,
    z: f64,
}

impl Direction {
    /// `v_0 = (-1, 0, 0)`, the default first transmission direction.
    pub const NEG_X: Direction = Direction {
        x: -1.0,
        y: 0.0,
        z: 0.0,
    };
    /// `v_1 = (1, 0, 0)`, the default second transmission direction.
    pub const POS_X: Direction = Direction {
        x: 1.0,
        y: 0.0,
        z: 0.0,
    };

    pub fn new(x: f64, y: f64, z: f64) -> Result<Self, GeometryError> {
        let norm2 = x * x + y * y + z * z;
        if !norm2.is_finite() || (libm::sqrt(norm2) - 1.0).abs() > UNIT_TOL {
            return Err(GeometryError::NotUnitLength { x, y, z });
        }
        Ok(Direction { x, y, z })
    }

    pub fn x(&self) -> f64 {
        self.x
    }
    pub fn y(&self) -> f64 {
        self.y
    }
    pub fn z(&self) -> f64 {
        self.z
    }
}

impl From<Direction> for (f64, f64, f64) {
    fn from(d: Direction) -> Self {
        (d.x, d.y, d.z)
    }
}

impl TryFrom<(f64, f64, f64)> for Direction {
    type Error = GeometryError;
    fn try_from(v: (f64, f64, f64)) -> Result<Self, Self::Error> {
        Direction::new(v.0, v.1, v.2)
    }
}

/// The agreed geometry of one protocol instance: the transfer-time parameter
/// `T` and the two transmission directions from `P`.
///
/// The derived transfer points are `Q_j = P + T * (v_j, 1)`; the constructor
/// rejects configurations whose transfer points are not spacelike separated,
/// since the protocol's guarantees hinge on that separation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GeometryConfigRepr", into = "GeometryConfigRepr")]
pub struct GeometryConfig {
    transfer_time: f64,
    directions: [Direction; 2],
}

#[derive(Serialize, Deserialize)]
struct GeometryConfigRepr {
    transfer_time: f64,
    directions: [Direction; 2],
}

impl From<GeometryConfig> for GeometryConfigRepr {
    fn from(g: GeometryConfig) -> Self {
        GeometryConfigRepr {
            transfer_time: g.transfer_time,
            directions: g.directions,
        }
    }
}

impl TryFrom<GeometryConfigRepr> for GeometryConfig {
    type Error = GeometryError;
    fn try_from(r: GeometryConfigRepr) -> Result<Self, Self::Error> {
        GeometryConfig::new(r.transfer_time, r.directions)
    }
}

impl GeometryConfig {
    pub fn new(transfer_time: f64, directions: [Direction; 2]) -> Result<Self, GeometryError> {
        if !transfer_time.is_finite() || transfer_time <= 0.0 {
            return Err(GeometryError::NonPositiveTransferTime(transfer_time));
        }
        let cfg = GeometryConfig {
            transfer_time,
            directions,
        };
        let q0 = cfg.transfer_point(0);
        let q1 = cfg.transfer_point(1);
        if !spacelike_separated(&q0, &q1) {
            return Err(GeometryError::TransferPointsNotSpacelike { q0, q1 });
        }
        Ok(cfg)
    }

    /// Opposite directions along the x axis with the given `T`.
    pub fn opposite_pair(transfer_time: f64) -> Result<Self, GeometryError> {
        GeometryConfig::new(transfer_time, [Direction::NEG_X, Direction::POS_X])
    }

    pub fn transfer_time(&self) -> f64 {
        self.transfer_time
    }

    pub fn direction(&self, j: u8) -> Direction {
        self.directions[usize::from(j & 1)]
    }

    /// The fixed transfer point `Q_j` on line `L_j`.
    pub fn transfer_point(&self, j: u8) -> SpacetimePoint {
        // Safe by construction: T finite, directions unit.
        line_point(j & 1, self.transfer_time, self).unwrap()
    }

    /// The earliest point at which data held at both `Q_0` and `Q_1` can be
    /// combined; `(0, 0, 0, 2T)` for the default opposite pair.
    pub fn meeting_point(&self) -> SpacetimePoint {
        cone_intersection_earliest(&self.transfer_point(0), &self.transfer_point(1))
            .expect("transfer points are spacelike by construction")
    }
}

impl Default for GeometryConfig {
    fn default() -> Self {
        GeometryConfig::opposite_pair(1.0).unwrap()
    }
}

/// The point `P + t * (v_j, 1)` on transmission line `L_j`, for `t >= 0`.
///
/// `line_point(j, T, cfg)` is the transfer point `Q_j`.
pub fn line_point(j: u8, t: f64, cfg: &GeometryConfig) -> Result<SpacetimePoint, GeometryError> {
    if j > 1 {
        return Err(GeometryError::BadDirectionIndex(j));
    }
    if !t.is_finite() || t < 0.0 {
        return Err(GeometryError::NegativeLineParameter(t));
    }
    let v = cfg.direction(j);
    SpacetimePoint::new(t * v.x(), t * v.y(), t * v.z(), t)
}

/// The earliest point of `L(q0) ∩ L(q1)` for spacelike-separated inputs.
///
/// The minimizer lies on the spatial segment between the two points, at the
/// spot where light emitted from both arrives simultaneously:
/// `t = (q0.t + q1.t + D) / 2` with `D` the spatial distance. Coincident
/// inputs degenerate to the point itself. Causally ordered inputs are
/// rejected with [`GeometryError::CausallyOrderedInputs`] naming the later
/// point, which is where the intersection would start.
pub fn cone_intersection_earliest(
    q0: &SpacetimePoint,
    q1: &SpacetimePoint,
) -> Result<SpacetimePoint, GeometryError> {
    if q0.approx_eq(q1, CAUSAL_TOL) {
        return Ok(*q0);
    }
    if causally_precedes(q0, q1) {
        return Err(GeometryError::CausallyOrderedInputs { later: *q1 });
    }
    if causally_precedes(q1, q0) {
        return Err(GeometryError::CausallyOrderedInputs { later: *q0 });
    }
    let dist = q0.spatial_distance(q1);
    // Fraction along the segment from q0 toward q1 where both light fronts
    // meet; spacelike separation guarantees it lands inside [0, 1].
    let s = (q1.t - q0.t + dist) / 2.0;
    let f = s / dist;
    SpacetimePoint::new(
        q0.x + f * (q1.x - q0.x),
        q0.y + f * (q1.y - q0.y),
        q0.z + f * (q1.z - q0.z),
        (q0.t + q1.t + dist) / 2.0,
    )
}
