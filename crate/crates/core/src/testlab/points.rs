//! Test point sets: a uniform sweep plus points clustered around every node.

use crate::domain::Domain;
use crate::scalar::Complex64;

pub const UNIFORM_POINTS: usize = 5000;

/// `10^-15, 10^-14.9, ..., 10^-3`.
pub fn near_node_offsets() -> Vec<f64> {
    (0..=120).map(|k| 10f64.powf((k as f64 - 150.0) / 10.0)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestPointSet {
    points: Vec<Complex64>,
}

impl TestPointSet {
    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Uniform points, the nodes themselves, and each node shifted by
/// `±near_node_offsets()` (angularly on the circle). Shifts that leave the
/// interval are dropped; exact duplicates are removed.
pub fn build_test_point_set(domain: Domain, nodes: &[Complex64]) -> TestPointSet {
    let offsets = near_node_offsets();
    let mut points = domain.uniform_grid(UNIFORM_POINTS);
    points.reserve(nodes.len() * (1 + 2 * offsets.len()));
    for &z in nodes {
        points.push(z);
        for &d in &offsets {
            points.extend(domain.offset(z, d));
            points.extend(domain.offset(z, -d));
        }
    }
    points.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    points.dedup_by(|a, b| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits());
    TestPointSet { points }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offset_grid() {
        let o = near_node_offsets();
        assert_eq!(o.len(), 121);
        assert_eq!(o[0], 1e-15);
        assert_eq!(o[120], 1e-3);
        assert!(o.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn counts_on_the_interval() {
        assert_eq!(build_test_point_set(Domain::Interval, &[]).len(), 5000);
        let one = build_test_point_set(Domain::Interval, &[Complex64::new(0.75, 0.0)]);
        assert_eq!(one.len(), 5000 + 1 + 2 * 121);
        // At an endpoint only the inward shifts survive; the node is already a grid point.
        let end = build_test_point_set(Domain::Interval, &[Complex64::new(1.0, 0.0)]);
        assert_eq!(end.len(), 5000 + 121);
    }

    #[test]
    fn circle_points_stay_on_the_circle() {
        let set = build_test_point_set(Domain::Circle, &[Complex64::new(1.0, 0.0)]);
        // The node at angle 0 coincides with a uniform point.
        assert_eq!(set.len(), 5000 + 2 * 121);
        assert!(set.points().iter().all(|z| (z.norm() - 1.0).abs() < 1e-15));
    }

    #[test]
    fn deterministic() {
        let nodes = [Complex64::new(-0.3, 0.0), Complex64::new(0.9, 0.0)];
        let a = build_test_point_set(Domain::Interval, &nodes);
        let b = build_test_point_set(Domain::Interval, &nodes);
        assert_eq!(a, b);
    }
}
