use std::collections::HashSet;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{MetricKind, MetricSpaceSample};
use crate::error::{Error, Result};
use crate::TOLERANCE;

const MAX_POINTS: usize = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// The real line, basepoint 0.
    Line,
    /// `R^n` under the max metric, basepoint at the origin.
    EuclideanN,
    /// Two vertical rays `x = -1`, `x = 1` (`y >= 1`) joined by the bar `y = 1`.
    TShape,
    /// Circles of radius `2^n` centered at `(0, 3 * 2^n)`, each tangent to the next.
    TangentCircles,
    /// Horizontal lines `y = 2^n` hung on the spine `x = 0, y >= 1`, max metric.
    Comb,
    /// User point cloud; loaded with [`super::load_points`], never generated.
    CsvImport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub family: Family,
    pub dimension: usize,
    pub window_radius: f64,
    pub resolution: f64,
    /// Number of tangent circles. When absent, enough circles are generated
    /// for the outermost one to leave the window.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circles: Option<usize>,
}

impl SpaceSpec {
    pub fn line(window_radius: f64, resolution: f64) -> Self {
        Self::new(Family::Line, 1, window_radius, resolution)
    }

    pub fn euclidean(dimension: usize, window_radius: f64, resolution: f64) -> Self {
        Self::new(Family::EuclideanN, dimension, window_radius, resolution)
    }

    pub fn t_shape(window_radius: f64, resolution: f64) -> Self {
        Self::new(Family::TShape, 2, window_radius, resolution)
    }

    pub fn tangent_circles(circles: Option<usize>, window_radius: f64, resolution: f64) -> Self {
        SpaceSpec {
            circles,
            ..Self::new(Family::TangentCircles, 2, window_radius, resolution)
        }
    }

    pub fn comb(window_radius: f64, resolution: f64) -> Self {
        Self::new(Family::Comb, 2, window_radius, resolution)
    }

    fn new(family: Family, dimension: usize, window_radius: f64, resolution: f64) -> Self {
        SpaceSpec {
            family,
            dimension,
            window_radius,
            resolution,
            circles: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        if !self.resolution.is_finite() || self.resolution <= 0.0 {
            return bad(format!(
                "resolution must be positive, got {}",
                self.resolution
            ));
        }
        if !self.window_radius.is_finite() || self.window_radius <= 0.0 {
            return bad(format!(
                "window radius must be positive, got {}",
                self.window_radius
            ));
        }
        if self.resolution >= self.window_radius {
            return bad(format!(
                "resolution {} must be smaller than window radius {}",
                self.resolution, self.window_radius
            ));
        }
        match self.family {
            Family::Line if self.dimension != 1 => bad("line has dimension 1".into()),
            Family::EuclideanN if self.dimension < 2 => bad(format!(
                "euclidean-n needs dimension >= 2, got {}",
                self.dimension
            )),
            Family::TShape | Family::TangentCircles | Family::Comb if self.dimension != 2 => {
                bad(format!("{:?} is planar (dimension 2)", self.family))
            }
            Family::TangentCircles if self.circles == Some(0) => {
                bad("tangent-circles needs at least one circle".into())
            }
            _ => Ok(()),
        }
    }
}

/// Samples the intended space intersected with the window.
pub fn generate_space(spec: &SpaceSpec) -> Result<MetricSpaceSample> {
    spec.validate()?;
    let w = spec.window_radius;
    let h = spec.resolution;
    let (coords, base, metric) = match spec.family {
        Family::Line => {
            let k = steps(w, h);
            let coords = (-k..=k).map(|i| vec![i as f64 * h]).collect();
            (coords, vec![0.0], MetricKind::Euclidean)
        }
        Family::EuclideanN => (
            grid(spec.dimension, steps(w, h), h)?,
            vec![0.0; spec.dimension],
            MetricKind::Max,
        ),
        Family::TShape => (t_shape(w, h), vec![0.0, 1.0], MetricKind::Euclidean),
        Family::TangentCircles => (
            tangent_circles(spec.circles, w, h),
            vec![0.0, 2.0],
            MetricKind::Euclidean,
        ),
        Family::Comb => (comb(w, h), vec![0.0, 1.0], MetricKind::Max),
        Family::CsvImport => {
            return Err(Error::InvalidSpec(
                "csv-import spaces are loaded from a file, not generated".into(),
            ))
        }
    };
    finish(coords, &base, metric, w, h)
}

fn steps(extent: f64, h: f64) -> i64 {
    (extent / h + TOLERANCE).floor() as i64
}

fn grid(dim: usize, k: i64, h: f64) -> Result<Vec<Vec<f64>>> {
    let side = (2 * k + 1) as usize;
    let total = (side as f64).powi(dim as i32);
    if total > MAX_POINTS as f64 {
        return Err(Error::InvalidSpec(format!(
            "grid would have {total} points (limit {MAX_POINTS})"
        )));
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut idx = vec![-k; dim];
    loop {
        out.push(idx.iter().map(|&i| i as f64 * h).collect());
        let mut axis = dim;
        loop {
            if axis == 0 {
                return Ok(out);
            }
            axis -= 1;
            if idx[axis] < k {
                idx[axis] += 1;
                break;
            }
            idx[axis] = -k;
        }
    }
}

fn t_shape(w: f64, h: f64) -> Vec<Vec<f64>> {
    // even segment count keeps the bar midpoint (the basepoint) exact
    let mut m = (2.0 / h).ceil() as i64;
    if m % 2 == 1 {
        m += 1;
    }
    let mut coords: Vec<Vec<f64>> = (0..=m)
        .map(|k| vec![(2 * k - m) as f64 / m as f64, 1.0])
        .collect();
    // ray points (±1, y) sit at distance sqrt(1 + (y-1)^2) from (0, 1)
    let reach = (w * w - 1.0).max(0.0).sqrt();
    let k = steps(reach, h);
    for x in [-1.0, 1.0] {
        coords.extend((1..=k).map(|i| vec![x, 1.0 + i as f64 * h]));
    }
    coords
}

fn tangent_circles(count: Option<usize>, w: f64, h: f64) -> Vec<Vec<f64>> {
    let count = count.unwrap_or_else(|| {
        // top of circle n is (0, 4 * 2^n), at distance 4 * 2^n - 2 from (0, 2)
        let mut c = 1;
        while 4.0 * 2f64.powi(c as i32 - 1) - 2.0 <= w {
            c += 1;
        }
        c
    });
    let mut coords = Vec::new();
    for n in 0..count {
        let r = 2f64.powi(n as i32);
        let cy = 3.0 * r;
        let mut m = ((2.0 * PI * r / h).ceil() as usize).max(4);
        if m % 2 == 1 {
            m += 1;
        }
        for k in 0..m {
            let p = if k == 0 {
                vec![0.0, cy - r]
            } else if 2 * k == m {
                vec![0.0, cy + r]
            } else {
                let theta = -PI / 2.0 + 2.0 * PI * k as f64 / m as f64;
                vec![r * theta.cos(), cy + r * theta.sin()]
            };
            coords.push(p);
        }
    }
    coords
}

fn comb(w: f64, h: f64) -> Vec<Vec<f64>> {
    let k = steps(w, h);
    let mut coords: Vec<Vec<f64>> = (0..=k).map(|i| vec![0.0, 1.0 + i as f64 * h]).collect();
    let mut height = 1.0f64;
    while height - 1.0 <= w + TOLERANCE {
        coords.extend((-k..=k).map(|i| vec![i as f64 * h, height]));
        height *= 2.0;
    }
    coords
}

/// Clips to the window, drops duplicate coordinates (first occurrence wins)
/// and locates the basepoint.
fn finish(
    coords: Vec<Vec<f64>>,
    base: &[f64],
    metric: MetricKind,
    w: f64,
    h: f64,
) -> Result<MetricSpaceSample> {
    let key = |c: &[f64]| -> Vec<i64> { c.iter().map(|x| (x * 1e9).round() as i64).collect() };
    let mut seen = HashSet::new();
    let kept: Vec<Vec<f64>> = coords
        .into_iter()
        .filter(|c| metric.coord_distance(c, base).unwrap() <= w + TOLERANCE)
        .filter(|c| seen.insert(key(c)))
        .collect();
    let base_key = key(base);
    let basepoint = kept
        .iter()
        .position(|c| key(c) == base_key)
        .ok_or_else(|| Error::InvalidSpec("basepoint missing from generated sample".into()))?;
    MetricSpaceSample::from_coords(kept, metric, basepoint, w, h)
}
