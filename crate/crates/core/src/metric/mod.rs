//! Finite samples of metric spaces.
//!
//! An unbounded space `X` is represented by its truncation to the closed
//! ball `B(x0, window_radius)` around a basepoint, together with a
//! `resolution` promise: every point of the intended space inside the window
//! lies within `resolution` of some sample point.

mod generate;
mod io;
mod validate;

pub use generate::{generate_space, Family, SpaceSpec};
pub use io::{load_points, read_matrix_csv, read_points_csv};
pub use validate::{validate_metric, ValidationReport, Violation};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::TOLERANCE;

/// Point ids are indices into [`MetricSpaceSample::points`].
pub type PointId = usize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Point {
    pub id: PointId,
    pub coords: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricKind {
    Euclidean,
    Max,
    ExplicitMatrix,
}

impl MetricKind {
    /// Distance between raw coordinate vectors. `None` for matrix metrics.
    pub fn coord_distance(self, a: &[f64], b: &[f64]) -> Option<f64> {
        match self {
            MetricKind::Euclidean => Some(
                a.iter()
                    .zip(b)
                    .map(|(x, y)| (x - y) * (x - y))
                    .sum::<f64>()
                    .sqrt(),
            ),
            MetricKind::Max => Some(
                a.iter()
                    .zip(b)
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0, f64::max),
            ),
            MetricKind::ExplicitMatrix => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MetricSpaceSample {
    points: Vec<Point>,
    dimension: usize,
    metric: MetricKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<Vec<f64>>>,
    basepoint: PointId,
    window_radius: f64,
    resolution: f64,
    #[serde(skip)]
    base_dist: Vec<f64>,
}

impl MetricSpaceSample {
    /// Builds a sample from coordinates. Point ids are assigned by position.
    pub fn from_coords(
        coords: Vec<Vec<f64>>,
        metric: MetricKind,
        basepoint: PointId,
        window_radius: f64,
        resolution: f64,
    ) -> Result<Self> {
        Self::build(coords, metric, None, basepoint, window_radius, resolution)
    }

    /// Builds a sample whose distances come from `matrix` (row `i` holds the
    /// distances from point `i`). Coordinates are kept only for reporting and
    /// may be empty.
    pub fn from_matrix(
        coords: Vec<Vec<f64>>,
        matrix: Vec<Vec<f64>>,
        basepoint: PointId,
        window_radius: f64,
        resolution: f64,
    ) -> Result<Self> {
        Self::build(
            coords,
            MetricKind::ExplicitMatrix,
            Some(matrix),
            basepoint,
            window_radius,
            resolution,
        )
    }

    fn build(
        coords: Vec<Vec<f64>>,
        metric: MetricKind,
        matrix: Option<Vec<Vec<f64>>>,
        basepoint: PointId,
        window_radius: f64,
        resolution: f64,
    ) -> Result<Self> {
        if !window_radius.is_finite() || window_radius <= 0.0 {
            return Err(Error::InvalidSpec(format!(
                "window radius must be positive, got {window_radius}"
            )));
        }
        if !resolution.is_finite() || resolution <= 0.0 {
            return Err(Error::InvalidSpec(format!(
                "resolution must be positive, got {resolution}"
            )));
        }
        let n = coords.len();
        if basepoint >= n {
            return Err(Error::UnknownPoint(basepoint));
        }
        let dimension = coords.first().map_or(0, Vec::len);
        for (i, c) in coords.iter().enumerate() {
            if c.len() != dimension {
                return Err(Error::InvalidSpec(format!(
                    "point {i} has {} coordinates, expected {dimension}",
                    c.len()
                )));
            }
            if c.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidSpec(format!(
                    "point {i} has a non-finite coordinate"
                )));
            }
        }
        match (&matrix, metric) {
            (Some(m), MetricKind::ExplicitMatrix) => check_matrix(m, n)?,
            (None, MetricKind::ExplicitMatrix) => {
                return Err(Error::InvalidSpec(
                    "explicit-matrix metric needs a matrix".into(),
                ))
            }
            (Some(_), _) => {
                return Err(Error::InvalidSpec(
                    "distance matrix given for a coordinate metric".into(),
                ))
            }
            (None, _) => {}
        }

        let points: Vec<Point> = coords
            .into_iter()
            .enumerate()
            .map(|(id, coords)| Point { id, coords })
            .collect();
        let mut sample = MetricSpaceSample {
            points,
            dimension,
            metric,
            matrix,
            basepoint,
            window_radius,
            resolution,
            base_dist: Vec::new(),
        };
        sample.base_dist = (0..n).map(|p| sample.dist(basepoint, p)).collect();

        let offenders: Vec<PointId> = (0..n)
            .filter(|&p| sample.base_dist[p] > window_radius + TOLERANCE)
            .collect();
        if !offenders.is_empty() {
            return Err(Error::WindowViolation {
                window_radius,
                offenders,
            });
        }
        Ok(sample)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn metric(&self) -> MetricKind {
        self.metric
    }

    pub fn basepoint(&self) -> PointId {
        self.basepoint
    }

    pub fn window_radius(&self) -> f64 {
        self.window_radius
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn coords(&self, id: PointId) -> &[f64] {
        &self.points[id].coords
    }

    pub fn contains(&self, id: PointId) -> bool {
        id < self.points.len()
    }

    pub fn dist(&self, a: PointId, b: PointId) -> f64 {
        match &self.matrix {
            Some(m) => m[a][b],
            None => self
                .metric
                .coord_distance(&self.points[a].coords, &self.points[b].coords)
                .expect("coordinate metric"),
        }
    }

    /// Distance from the basepoint, cached at construction.
    pub fn dist_to_base(&self, id: PointId) -> f64 {
        self.base_dist[id]
    }

    /// The points outside the closed ball `B(x0, radius)`, ascending by id.
    pub fn ball_complement(&self, radius: f64) -> Result<Vec<PointId>> {
        if radius.is_nan() || radius < 0.0 || radius > self.window_radius + TOLERANCE {
            return Err(Error::RadiusOutOfRange {
                radius,
                limit: self.window_radius,
            });
        }
        Ok((0..self.len())
            .filter(|&p| outside_ball(self.base_dist[p], radius))
            .collect())
    }

    /// Nearest sample point to an arbitrary coordinate vector.
    pub fn nearest(&self, coords: &[f64]) -> Result<(PointId, f64)> {
        if self.metric == MetricKind::ExplicitMatrix {
            return Err(Error::NeedsCoordinates);
        }
        let mut best = (self.basepoint, f64::INFINITY);
        for p in &self.points {
            let d = self.metric.coord_distance(&p.coords, coords).unwrap();
            if d < best.1 {
                best = (p.id, d);
            }
        }
        Ok(best)
    }

    /// Point whose coordinates match `coords` up to the distance tolerance.
    pub fn find(&self, coords: &[f64]) -> Option<PointId> {
        self.nearest(coords)
            .ok()
            .filter(|&(_, d)| d <= TOLERANCE)
            .map(|(id, _)| id)
    }

    /// Re-centers the sample at `basepoint`. The faithful window around the
    /// new basepoint shrinks by its offset from the old one; points outside it
    /// are dropped and ids are renumbered. Returns the new sample and, for each
    /// new id, the id it had before.
    pub fn rebased(&self, basepoint: PointId) -> Result<(MetricSpaceSample, Vec<PointId>)> {
        if !self.contains(basepoint) {
            return Err(Error::UnknownPoint(basepoint));
        }
        let offset = self.base_dist[basepoint];
        let window = self.window_radius - offset;
        if window <= self.resolution {
            return Err(Error::BasepointTooFar {
                id: basepoint,
                reason: format!(
                    "offset {offset} leaves window {window} (resolution {})",
                    self.resolution
                ),
            });
        }
        let kept: Vec<PointId> = (0..self.len())
            .filter(|&p| self.dist(basepoint, p) <= window + TOLERANCE)
            .collect();
        let new_base = kept.binary_search(&basepoint).expect("basepoint kept");
        let coords = kept
            .iter()
            .map(|&p| self.points[p].coords.clone())
            .collect();
        let sample = match &self.matrix {
            Some(m) => {
                let sub = kept
                    .iter()
                    .map(|&a| kept.iter().map(|&b| m[a][b]).collect())
                    .collect();
                MetricSpaceSample::from_matrix(coords, sub, new_base, window, self.resolution)?
            }
            None => MetricSpaceSample::from_coords(
                coords,
                self.metric,
                new_base,
                window,
                self.resolution,
            )?,
        };
        Ok((sample, kept))
    }
}

/// `d > radius` with the shared distance tolerance.
pub(crate) fn outside_ball(d: f64, radius: f64) -> bool {
    d > radius + TOLERANCE
}

fn check_matrix(m: &[Vec<f64>], n: usize) -> Result<()> {
    if m.len() != n || m.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidSpec(format!(
            "distance matrix must be {n}x{n} to match the point list"
        )));
    }
    for (i, row) in m.iter().enumerate() {
        if row[i].abs() > TOLERANCE {
            return Err(Error::MetricAxiom {
                kind: "identity",
                ids: vec![i],
            });
        }
        for (j, &d) in row.iter().enumerate() {
            if !d.is_finite() || d < 0.0 {
                return Err(Error::MetricAxiom {
                    kind: "non-negativity",
                    ids: vec![i, j],
                });
            }
            if j > i && (d - m[j][i]).abs() > TOLERANCE {
                return Err(Error::MetricAxiom {
                    kind: "symmetry",
                    ids: vec![i, j],
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(window: i32) -> MetricSpaceSample {
        let coords = (-window..=window).map(|x| vec![x as f64]).collect();
        MetricSpaceSample::from_coords(
            coords,
            MetricKind::Euclidean,
            window as usize,
            window as f64,
            1.0,
        )
        .unwrap()
    }

    fn xs(s: &MetricSpaceSample, ids: &[PointId]) -> Vec<f64> {
        ids.iter().map(|&p| s.coords(p)[0]).collect()
    }

    #[test]
    fn complement_at_zero_drops_only_basepoint() {
        let s = line(10);
        let c = s.ball_complement(0.0).unwrap();
        assert_eq!(c.len(), 20);
        assert!(!c.contains(&s.basepoint()));
    }

    #[test]
    fn complement_at_window_is_empty() {
        assert!(line(10).ball_complement(10.0).unwrap().is_empty());
    }

    #[test]
    fn complement_at_half_integer() {
        let s = line(10);
        let got = xs(&s, &s.ball_complement(4.5).unwrap());
        let want: Vec<f64> = (-10..=-5).chain(5..=10).map(f64::from).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn complement_beyond_window_rejected() {
        assert!(matches!(
            line(10).ball_complement(10.5),
            Err(Error::RadiusOutOfRange { .. })
        ));
        assert!(line(10).ball_complement(-1.0).is_err());
    }

    #[test]
    fn window_violation_lists_offenders() {
        let err = MetricSpaceSample::from_coords(
            vec![vec![0.0], vec![5.0], vec![1.0], vec![-4.0]],
            MetricKind::Euclidean,
            0,
            3.0,
            1.0,
        )
        .unwrap_err();
        match err {
            Error::WindowViolation { offenders, .. } => assert_eq!(offenders, vec![1, 3]),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn asymmetric_matrix_rejected() {
        let m = vec![
            vec![0.0, 1.0, 2.0],
            vec![1.5, 0.0, 1.0],
            vec![2.0, 1.0, 0.0],
        ];
        let err = MetricSpaceSample::from_matrix(vec![vec![]; 3], m, 0, 5.0, 1.0).unwrap_err();
        assert!(matches!(
            err,
            Error::MetricAxiom {
                kind: "symmetry",
                ..
            }
        ));
    }

    #[test]
    fn max_metric_takes_largest_coordinate_gap() {
        assert_eq!(
            MetricKind::Max.coord_distance(&[0.0, 0.0], &[3.0, -4.0]),
            Some(4.0)
        );
        assert_eq!(
            MetricKind::Euclidean.coord_distance(&[0.0, 0.0], &[3.0, -4.0]),
            Some(5.0)
        );
    }

    #[test]
    fn rebase_shrinks_window_by_offset() {
        let s = line(10);
        let three = s.find(&[3.0]).unwrap();
        let (r, old) = s.rebased(three).unwrap();
        assert_eq!(r.window_radius(), 7.0);
        assert_eq!(r.coords(r.basepoint()), &[3.0]);
        assert_eq!(r.len(), 15);
        assert_eq!(r.coords(0), &[-4.0]);
        assert_eq!(old[0], s.find(&[-4.0]).unwrap());
    }

    #[test]
    fn rebase_too_far_rejected() {
        let s = line(10);
        let edge = s.find(&[10.0]).unwrap();
        assert!(matches!(
            s.rebased(edge),
            Err(Error::BasepointTooFar { .. })
        ));
    }

    #[test]
    fn antitone_in_radius() {
        let s = line(10);
        let mut prev = s.ball_complement(0.0).unwrap();
        for r in [0.5, 1.0, 2.5, 7.0, 9.9, 10.0] {
            let cur = s.ball_complement(r).unwrap();
            assert!(cur.iter().all(|p| prev.contains(p)));
            prev = cur;
        }
    }
}
