use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{MetricSpaceSample, PointId};
use crate::TOLERANCE;

/// Unordered pairs examined for symmetry before giving up.
pub const PAIR_BUDGET: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub kind: &'static str,
    pub ids: Vec<PointId>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub pairs_checked: usize,
    pub triples_checked: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Spot-checks the metric axioms. Identity and symmetry are checked on all
/// pairs (up to [`PAIR_BUDGET`]); the triangle inequality on `triple_budget`
/// triples, exhaustively when the sample is small enough and otherwise on
/// triples drawn from a generator seeded with `seed`.
///
/// Each violation is reported once; a triangle violation `d(a,c) > d(a,b) + d(b,c)`
/// is keyed by `(min(a,c), b, max(a,c))`.
pub fn validate_metric(
    sample: &MetricSpaceSample,
    triple_budget: usize,
    seed: u64,
) -> ValidationReport {
    let n = sample.len();
    let mut found: BTreeMap<(&'static str, Vec<PointId>), Vec<f64>> = BTreeMap::new();

    for p in 0..n {
        let d = sample.dist(p, p);
        if d.abs() > TOLERANCE {
            found.insert(("identity", vec![p]), vec![d]);
        }
    }

    let mut pairs_checked = 0;
    'pairs: for a in 0..n {
        for b in a + 1..n {
            if pairs_checked == PAIR_BUDGET {
                break 'pairs;
            }
            pairs_checked += 1;
            let (ab, ba) = (sample.dist(a, b), sample.dist(b, a));
            if (ab - ba).abs() > TOLERANCE {
                found.insert(("symmetry", vec![a, b]), vec![ab, ba]);
            }
        }
    }

    let mut triples_checked = 0;
    let mut check = |a: PointId, b: PointId, c: PointId| {
        let (ac, ab, bc) = (sample.dist(a, c), sample.dist(a, b), sample.dist(b, c));
        if ac > ab + bc + TOLERANCE {
            found.insert(("triangle", vec![a.min(c), b, a.max(c)]), vec![ac, ab, bc]);
        }
    };
    if n >= 3 {
        let exhaustive = n * (n - 1) * (n - 2) / 2;
        if exhaustive <= triple_budget {
            for a in 0..n {
                for c in a + 1..n {
                    for b in (0..n).filter(|&b| b != a && b != c) {
                        check(a, b, c);
                        triples_checked += 1;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..triple_budget {
                let a = rng.gen_range(0..n);
                let mut b = rng.gen_range(0..n - 1);
                if b >= a {
                    b += 1;
                }
                let c = loop {
                    let c = rng.gen_range(0..n);
                    if c != a && c != b {
                        break c;
                    }
                };
                check(a, b, c);
                triples_checked += 1;
            }
        }
    }

    ValidationReport {
        pairs_checked,
        triples_checked,
        violations: found
            .into_iter()
            .map(|((kind, ids), values)| Violation { kind, ids, values })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{generate_space, MetricKind, SpaceSpec};

    #[test]
    fn generated_spaces_are_clean() {
        for spec in [
            SpaceSpec::line(30.0, 1.0),
            SpaceSpec::euclidean(2, 6.0, 1.0),
            SpaceSpec::t_shape(12.0, 0.5),
            SpaceSpec::comb(10.0, 1.0),
        ] {
            let s = generate_space(&spec).unwrap();
            let r = validate_metric(&s, 2000, 7);
            assert!(r.is_clean(), "{spec:?}: {:?}", r.violations);
            assert_eq!(
                r.triples_checked,
                2000.min(s.len() * (s.len() - 1) * (s.len() - 2) / 2)
            );
        }
    }

    #[test]
    fn constructed_triangle_violation() {
        let m = vec![
            vec![0.0, 1.0, 5.0],
            vec![1.0, 0.0, 1.0],
            vec![5.0, 1.0, 0.0],
        ];
        let s = MetricSpaceSample::from_matrix(vec![vec![]; 3], m, 0, 5.0, 1.0).unwrap();
        let r = validate_metric(&s, 100, 1);
        assert_eq!(r.violations.len(), 1);
        let v = &r.violations[0];
        assert_eq!(v.kind, "triangle");
        assert_eq!(v.ids, vec![0, 1, 2]);
        assert_eq!(v.values, vec![5.0, 1.0, 1.0]);
    }

    #[test]
    fn sampled_triples_are_seeded() {
        let s = generate_space(&SpaceSpec::euclidean(2, 10.0, 1.0)).unwrap();
        assert_eq!(s.metric(), MetricKind::Max);
        let a = validate_metric(&s, 500, 42);
        let b = validate_metric(&s, 500, 42);
        assert_eq!(a, b);
        assert_eq!(a.triples_checked, 500);
    }

    #[test]
    fn zero_budget_skips_triangles() {
        let s = generate_space(&SpaceSpec::line(5.0, 1.0)).unwrap();
        let r = validate_metric(&s, 0, 0);
        assert_eq!(r.triples_checked, 0);
        assert_eq!(r.pairs_checked, 11 * 10 / 2);
    }
}
