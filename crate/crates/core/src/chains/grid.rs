//! Candidate-pair enumeration for the `d <= K` threshold graph.

use std::collections::HashMap;

use crate::metric::{MetricKind, MetricSpaceSample, PointId};
use crate::within;
use crate::TOLERANCE;

/// Beyond this dimension the 3^d cell neighbourhood costs more than it saves.
const MAX_GRID_DIMENSION: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NeighborSearch {
    /// Uniform grid of cell size `K` when the metric is coordinate based.
    #[default]
    Grid,
    /// Compare every pair.
    AllPairs,
}

/// Calls `edge(i, j)` (positions into `subset`, `i < j`) once for every pair
/// with `dist <= k`.
pub(crate) fn for_each_edge<F>(
    sample: &MetricSpaceSample,
    subset: &[PointId],
    k: f64,
    search: NeighborSearch,
    mut edge: F,
) where
    F: FnMut(usize, usize),
{
    let gridable = matches!(sample.metric(), MetricKind::Euclidean | MetricKind::Max)
        && sample.dimension() <= MAX_GRID_DIMENSION;
    if search == NeighborSearch::AllPairs || !gridable {
        for i in 0..subset.len() {
            for j in i + 1..subset.len() {
                if within(sample.dist(subset[i], subset[j]), k) {
                    edge(i, j);
                }
            }
        }
        return;
    }

    // Cells slightly wider than K + tolerance: any admissible pair differs by
    // at most one cell along every axis, under both metrics.
    let cell = (k + TOLERANCE) * (1.0 + 1e-9);
    let key = |p: PointId| -> Vec<i64> {
        sample
            .coords(p)
            .iter()
            .map(|x| (x / cell).floor() as i64)
            .collect()
    };
    let keys: Vec<Vec<i64>> = subset.iter().map(|&p| key(p)).collect();
    let mut cells: HashMap<&[i64], Vec<usize>> = HashMap::new();
    for (i, k) in keys.iter().enumerate() {
        cells.entry(k.as_slice()).or_default().push(i);
    }

    let dim = sample.dimension();
    let offsets = neighbor_offsets(dim);
    let mut probe = vec![0i64; dim];
    for (i, ki) in keys.iter().enumerate() {
        for off in &offsets {
            for ((slot, base), o) in probe.iter_mut().zip(ki).zip(off) {
                *slot = base + o;
            }
            if let Some(bucket) = cells.get(probe.as_slice()) {
                for &j in bucket {
                    if j > i && within(sample.dist(subset[i], subset[j]), k) {
                        edge(i, j);
                    }
                }
            }
        }
    }
}

fn neighbor_offsets(dim: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::with_capacity(dim)];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (-1..=1).map(move |d| {
                    let mut v = prefix.clone();
                    v.push(d);
                    v
                })
            })
            .collect();
    }
    out
}
