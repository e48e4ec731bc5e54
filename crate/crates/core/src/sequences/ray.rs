use std::sync::Arc;

use super::CoarseSequencePrefix;
use crate::error::{Error, Result};
use crate::metric::{MetricSpaceSample, PointId};
use crate::{within, TOLERANCE};

/// Bisection depth at which a unit interval is declared discontinuous.
pub const MAX_SUBDIVISION_DEPTH: u32 = 48;

/// Discretizes a ray `r: [0, horizon] -> X` into a sequence of sample points.
///
/// Each unit interval `[n, n+1]` is bisected until consecutive images are at
/// most 1 apart; the images are snapped to their nearest sample points and
/// consecutive repeats are dropped. Snapping moves each image by at most the
/// sample resolution, so the result is a `(1 + 2 * resolution)`-sequence.
pub fn ray_to_sequence<F>(
    sample: Arc<MetricSpaceSample>,
    ray: F,
    horizon: usize,
) -> Result<CoarseSequencePrefix>
where
    F: Fn(f64) -> Vec<f64>,
{
    let metric = sample.metric();
    let dist = |a: &[f64], b: &[f64]| metric.coord_distance(a, b).ok_or(Error::NeedsCoordinates);

    let mut images: Vec<(f64, Vec<f64>)> = vec![(0.0, ray(0.0))];
    for n in 0..horizon {
        let (a, b) = (n as f64, (n + 1) as f64);
        let start = images.last().unwrap().1.clone();
        let end = ray(b);
        // explicit stack of pending intervals, leftmost on top
        let mut stack = vec![(a, start, b, end, 0u32)];
        while let Some((lo, plo, hi, phi, depth)) = stack.pop() {
            if within(dist(&plo, &phi)?, 1.0) {
                images.push((hi, phi));
                continue;
            }
            if depth == MAX_SUBDIVISION_DEPTH {
                return Err(Error::SubdivisionDepth {
                    depth,
                    from: lo,
                    to: hi,
                });
            }
            let mid = 0.5 * (lo + hi);
            let pmid = ray(mid);
            stack.push((mid, pmid.clone(), hi, phi, depth + 1));
            stack.push((lo, plo, mid, pmid, depth + 1));
        }
    }

    let mut terms: Vec<PointId> = Vec::with_capacity(images.len());
    for (param, image) in &images {
        let (id, d) = sample.nearest(image)?;
        if d > sample.resolution() + TOLERANCE {
            return Err(Error::RayOutsideSample {
                param: *param,
                distance: d,
                resolution: sample.resolution(),
            });
        }
        if terms.last() != Some(&id) {
            terms.push(id);
        }
    }
    CoarseSequencePrefix::new(sample, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{generate_space, SpaceSpec};

    fn line(w: f64) -> Arc<MetricSpaceSample> {
        Arc::new(generate_space(&SpaceSpec::line(w, 1.0)).unwrap())
    }

    fn xs(s: &MetricSpaceSample, q: &CoarseSequencePrefix) -> Vec<f64> {
        q.terms().iter().map(|&p| s.coords(p)[0]).collect()
    }

    #[test]
    fn unit_speed_ray() {
        let s = line(10.0);
        let q = ray_to_sequence(s.clone(), |t| vec![t], 5).unwrap();
        assert_eq!(xs(&s, &q), vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
        assert!(q.chain_bound() <= 1.0);
    }

    #[test]
    fn double_speed_ray_is_bisected() {
        let s = line(20.0);
        let q = ray_to_sequence(s.clone(), |t| vec![2.0 * t], 5).unwrap();
        assert_eq!(xs(&s, &q), (0..=10).map(f64::from).collect::<Vec<_>>());
        assert!(q.chain_bound() <= 1.0 + 2.0 * s.resolution());
    }

    #[test]
    fn discontinuous_ray_hits_depth_cap() {
        let s = line(20.0);
        let jump = |t: f64| vec![if t < 0.3 { 0.0 } else { 5.0 }];
        assert!(matches!(
            ray_to_sequence(s, jump, 1),
            Err(Error::SubdivisionDepth { .. })
        ));
    }

    #[test]
    fn ray_leaving_window_rejected() {
        let s = line(5.0);
        assert!(matches!(
            ray_to_sequence(s, |t| vec![t], 8),
            Err(Error::RayOutsideSample { .. })
        ));
    }

    #[test]
    fn ray_must_start_at_basepoint() {
        let s = line(10.0);
        assert!(ray_to_sequence(s, |t| vec![t + 3.0], 2).is_err());
    }
}
