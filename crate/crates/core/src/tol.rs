//! Numerical tolerances shared across modules.

/// Roots closer than `CLUSTER_REL * (1 + |root|)` are treated as one multiple root.
pub const CLUSTER_REL: f64 = 1e-7;

/// Closed-interval membership slack: `1e-12 * (1 + |endpoint|)`.
pub const INTERVAL_REL: f64 = 1e-12;

/// A membership decision is flagged as near the boundary when the deciding
/// quantity is within `1e-8 * (1 + |endpoint|)` of an interval end.
pub const BOUNDARY_FLAG_REL: f64 = 1e-8;

/// Residual bound factor for polished quartic roots.
pub const RESIDUAL_REL: f64 = 1e-10;

/// Relative slack used to recognise the special points 0, delta_+ and delta_-.
pub const SPECIAL_POINT_REL: f64 = 1e-12;

/// Relative guard band for threshold comparisons in the strip analysis.
pub const GUARD_BAND_REL: f64 = 1e-12;

/// Relative test for |w + ic/d| = c/d.
pub const DISK_REL: f64 = 4.0 * f64::EPSILON;

/// Absolute slack for closed-interval membership at a finite endpoint.
#[inline]
pub fn interval_slack(endpoint: f64) -> f64 {
    INTERVAL_REL * (1.0 + endpoint.abs())
}

/// Whether two values belong to the same multiplicity cluster.
#[inline]
pub fn same_cluster(a: f64, b: f64) -> bool {
    (a - b).abs() <= CLUSTER_REL * (1.0 + a.abs().max(b.abs()))
}
