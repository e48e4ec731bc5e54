//! Named coarse sequences on the generated reference spaces.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::metric::{Family, MetricSpaceSample, PointId};
use crate::sequences::{ray_to_sequence, CoarseSequencePrefix};
use crate::TOLERANCE;

/// Fixture names available on a family. Euclidean samples also accept
/// `axis<i>` and `neg-axis<i>` for every coordinate `i`.
pub fn fixture_names(family: Family) -> &'static [&'static str] {
    match family {
        Family::Line => &["pos", "neg", "double"],
        Family::EuclideanN => &["axis0", "axis1", "neg-axis0", "diagonal"],
        Family::TShape => &["left", "right"],
        Family::TangentCircles => &["right-arc", "left-arc"],
        Family::Comb => &["spine", "right", "left"],
        Family::CsvImport => &[],
    }
}

/// Builds the fixture `name` on a sample generated from `family`, running
/// until it leaves the window.
pub fn fixture(
    sample: &Arc<MetricSpaceSample>,
    family: Family,
    name: &str,
) -> Result<CoarseSequencePrefix> {
    let unknown = || {
        Error::InvalidSequence(format!(
            "no fixture {name:?} for {family:?}; known: {}",
            fixture_names(family).join(", ")
        ))
    };
    let d = sample.dimension();
    match (family, name) {
        (Family::Line, "pos") => walk(sample, |n| vec![n as f64]),
        (Family::Line, "neg") => walk(sample, |n| vec![-(n as f64)]),
        (Family::Line, "double") => walk(sample, |n| vec![2.0 * n as f64]),
        (Family::EuclideanN, "diagonal") => walk(sample, |n| vec![n as f64; d]),
        (Family::EuclideanN, _) => {
            let (sign, axis) = match name.strip_prefix("neg-") {
                Some(rest) => (-1.0, rest),
                None => (1.0, name),
            };
            let i: usize = axis
                .strip_prefix("axis")
                .and_then(|a| a.parse().ok())
                .filter(|&i| i < d)
                .ok_or_else(unknown)?;
            walk(sample, |n| {
                let mut c = vec![0.0; d];
                c[i] = sign * n as f64;
                c
            })
        }
        (Family::TShape, "left" | "right") => {
            let x = if name == "left" { -1.0 } else { 1.0 };
            walk(sample, |n| match n {
                0 => vec![0.0, 1.0],
                _ => vec![x, n as f64],
            })
        }
        (Family::TangentCircles, "right-arc" | "left-arc") => {
            let side = if name == "left-arc" { -1.0 } else { 1.0 };
            let ray = move |t: f64| climb(side, t);
            // stop before a circle whose side point is missing; otherwise the
            // path would cling to the tangent circle below it
            let mut circles = 0;
            while on_sample(
                sample,
                &[side * 2f64.powi(circles), 3.0 * 2f64.powi(circles)],
            ) {
                circles += 1;
            }
            let length = PI * (2f64.powi(circles) - 1.0);
            let mut horizon = 0;
            while ((horizon + 1) as f64) <= length && on_sample(sample, &ray((horizon + 1) as f64))
            {
                horizon += 1;
            }
            ray_to_sequence(sample.clone(), ray, horizon)
        }
        (Family::Comb, "spine") => walk(sample, |n| vec![0.0, 1.0 + n as f64]),
        (Family::Comb, "right") => walk(sample, |n| vec![n as f64, 1.0]),
        (Family::Comb, "left") => walk(sample, |n| vec![-(n as f64), 1.0]),
        _ => Err(unknown()),
    }
}

/// Snaps `path(0), path(1), ...` to the sample until the path leaves the
/// window or the sample.
fn walk<F>(sample: &Arc<MetricSpaceSample>, path: F) -> Result<CoarseSequencePrefix>
where
    F: Fn(usize) -> Vec<f64>,
{
    let base = sample.coords(sample.basepoint());
    let metric = sample.metric();
    let mut terms: Vec<PointId> = Vec::new();
    for n in 0.. {
        let target = path(n);
        let reach = metric
            .coord_distance(&target, base)
            .ok_or(Error::NeedsCoordinates)?;
        if reach > sample.window_radius() + TOLERANCE {
            break;
        }
        let (id, d) = sample.nearest(&target)?;
        if d > sample.resolution() + TOLERANCE {
            break;
        }
        if terms.last() != Some(&id) {
            terms.push(id);
        }
    }
    CoarseSequencePrefix::new(sample.clone(), terms)
}

fn on_sample(sample: &MetricSpaceSample, c: &[f64]) -> bool {
    sample
        .nearest(c)
        .is_ok_and(|(_, d)| d <= sample.resolution() + TOLERANCE)
}

/// Unit-speed path up one side of the tangent circles: half of circle `n`
/// from its bottom `(0, 2^(n+1))` to its top `(0, 2^(n+2))`, then circle `n+1`.
fn climb(side: f64, t: f64) -> Vec<f64> {
    let mut start = 0.0;
    let mut n = 0;
    while start + PI * 2f64.powi(n) < t {
        start += PI * 2f64.powi(n);
        n += 1;
    }
    let r = 2f64.powi(n);
    let phi = (t - start) / r - PI / 2.0;
    vec![side * r * phi.cos(), 3.0 * r + r * phi.sin()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{generate_space, SpaceSpec};

    fn gen(spec: SpaceSpec) -> Arc<MetricSpaceSample> {
        Arc::new(generate_space(&spec).unwrap())
    }

    #[test]
    fn line_fixtures() {
        let x = gen(SpaceSpec::line(10.0, 1.0));
        let pos = fixture(&x, Family::Line, "pos").unwrap();
        let dbl = fixture(&x, Family::Line, "double").unwrap();
        assert_eq!(pos.len(), 11);
        assert_eq!(dbl.len(), 6);
        assert_eq!(dbl.chain_bound(), 2.0);
        assert_eq!(
            x.coords(
                *fixture(&x, Family::Line, "neg")
                    .unwrap()
                    .terms()
                    .last()
                    .unwrap()
            ),
            &[-10.0]
        );
    }

    #[test]
    fn climb_hits_tops() {
        for (t, y) in [(PI, 4.0), (3.0 * PI, 8.0), (7.0 * PI, 16.0)] {
            let p = climb(1.0, t);
            assert!(p[0].abs() < 1e-9 && (p[1] - y).abs() < 1e-9);
        }
        assert!((climb(1.0, PI / 2.0)[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn arc_fixtures_reach_window_edge() {
        let x = gen(SpaceSpec::tangent_circles(Some(3), 14.0, 0.5));
        let right = fixture(&x, Family::TangentCircles, "right-arc").unwrap();
        let far = right
            .terms()
            .iter()
            .map(|&p| x.dist_to_base(p))
            .fold(0.0, f64::max);
        assert!(far > 13.0);
        assert!(right.chain_bound() <= 2.0);
        let left = fixture(&x, Family::TangentCircles, "left-arc").unwrap();
        assert!(left.terms().iter().all(|&p| x.coords(p)[0] <= 1e-9));
        assert_eq!(x.coords(left.terms()[3]), &[0.0, 4.0]);
    }

    #[test]
    fn euclidean_axes_and_unknown_names() {
        let x = gen(SpaceSpec::euclidean(3, 5.0, 1.0));
        let s = fixture(&x, Family::EuclideanN, "neg-axis2").unwrap();
        assert_eq!(x.coords(*s.terms().last().unwrap()), &[0.0, 0.0, -5.0]);
        assert!(fixture(&x, Family::EuclideanN, "axis3").is_err());
    }
}
