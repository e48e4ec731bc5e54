//! K-chain connectivity.
//!
//! A K-chain is a finite list of points with consecutive distances at most
//! `K`. Two points of a set lie in the same K-chain component when some
//! K-chain inside the set joins them.

pub(crate) mod grid;
mod union_find;

pub use grid::NeighborSearch;
pub use union_find::DisjointSets;

use std::collections::VecDeque;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::metric::{MetricSpaceSample, PointId};
use crate::within;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Component {
    pub id: usize,
    pub members: Vec<PointId>,
    pub representative: PointId,
}

/// Partition of a point subset into K-chain components. Component ids follow
/// the ascending order of their representatives (smallest member ids).
#[derive(Debug, Clone, PartialEq)]
pub struct ChainPartition {
    k: f64,
    point_ids: Vec<PointId>,
    labels: Vec<usize>,
    components: Vec<Component>,
}

impl ChainPartition {
    pub fn k(&self) -> f64 {
        self.k
    }

    /// The partitioned subset, ascending.
    pub fn point_ids(&self) -> &[PointId] {
        &self.point_ids
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn count(&self) -> usize {
        self.components.len()
    }

    pub fn component_of(&self, id: PointId) -> Option<usize> {
        self.point_ids
            .binary_search(&id)
            .ok()
            .map(|pos| self.labels[pos])
    }

    /// Whether every component of `self` lies inside a single component of
    /// `coarser`. Points of `self` missing from `coarser` make this false.
    pub fn refines(&self, coarser: &ChainPartition) -> bool {
        self.components.iter().all(|c| {
            let mut targets = c.members.iter().map(|&p| coarser.component_of(p));
            match targets.next() {
                Some(Some(first)) => targets.all(|t| t == Some(first)),
                _ => false,
            }
        })
    }
}

impl Serialize for ChainPartition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let members: Vec<&[PointId]> = self
            .components
            .iter()
            .map(|c| c.members.as_slice())
            .collect();
        let mut st = serializer.serialize_struct("ChainPartition", 2)?;
        st.serialize_field("K", &self.k)?;
        st.serialize_field("components", &members)?;
        st.end()
    }
}

/// A finite list of points with consecutive distances at most `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct KChain {
    pub k: f64,
    pub points: Vec<PointId>,
}

impl KChain {
    pub fn first(&self) -> Option<PointId> {
        self.points.first().copied()
    }

    pub fn last(&self) -> Option<PointId> {
        self.points.last().copied()
    }

    /// Index of the first step longer than `k`, if any.
    pub fn first_long_step(&self, sample: &MetricSpaceSample) -> Option<usize> {
        self.points
            .windows(2)
            .position(|w| !within(sample.dist(w[0], w[1]), self.k))
    }

    pub fn is_valid(&self, sample: &MetricSpaceSample) -> bool {
        !self.points.is_empty()
            && self.points.iter().all(|&p| sample.contains(p))
            && self.first_long_step(sample).is_none()
    }

    pub fn reversed(&self) -> KChain {
        KChain {
            k: self.k,
            points: self.points.iter().rev().copied().collect(),
        }
    }
}

impl Serialize for KChain {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.points.serialize(serializer)
    }
}

fn normalize_subset(sample: &MetricSpaceSample, subset: &[PointId]) -> Result<Vec<PointId>> {
    if let Some(&bad) = subset.iter().find(|&&p| !sample.contains(p)) {
        return Err(Error::UnknownPoint(bad));
    }
    let mut ids = subset.to_vec();
    ids.sort_unstable();
    ids.dedup();
    Ok(ids)
}

fn check_k(k: f64) -> Result<()> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidK(k))
    }
}

/// Partitions `subset` into K-chain components using grid-pruned candidate pairs.
pub fn k_chain_components(
    sample: &MetricSpaceSample,
    subset: &[PointId],
    k: f64,
) -> Result<ChainPartition> {
    k_chain_components_with(sample, subset, k, NeighborSearch::Grid)
}

pub fn k_chain_components_with(
    sample: &MetricSpaceSample,
    subset: &[PointId],
    k: f64,
    search: NeighborSearch,
) -> Result<ChainPartition> {
    check_k(k)?;
    let point_ids = normalize_subset(sample, subset)?;
    let mut sets = DisjointSets::new(point_ids.len());
    grid::for_each_edge(sample, &point_ids, k, search, |i, j| {
        sets.union(i, j);
    });

    let mut root_label = vec![usize::MAX; point_ids.len()];
    let mut labels = Vec::with_capacity(point_ids.len());
    let mut components: Vec<Component> = Vec::new();
    for (i, &p) in point_ids.iter().enumerate() {
        let root = sets.find(i);
        if root_label[root] == usize::MAX {
            root_label[root] = components.len();
            components.push(Component {
                id: components.len(),
                members: Vec::new(),
                representative: p,
            });
        }
        let label = root_label[root];
        components[label].members.push(p);
        labels.push(label);
    }
    Ok(ChainPartition {
        k,
        point_ids,
        labels,
        components,
    })
}

/// A hop-minimal K-chain from `a` to `b` inside `subset`, or `None` when they
/// lie in different components. Among hop-minimal chains the one choosing the
/// smallest next point id at every step is returned.
pub fn k_chain_path(
    sample: &MetricSpaceSample,
    subset: &[PointId],
    k: f64,
    a: PointId,
    b: PointId,
) -> Result<Option<KChain>> {
    check_k(k)?;
    let ids = normalize_subset(sample, subset)?;
    let pos = |p: PointId| ids.binary_search(&p).map_err(|_| Error::NotInSubset(p));
    let (ia, ib) = (pos(a)?, pos(b)?);

    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); ids.len()];
    grid::for_each_edge(sample, &ids, k, NeighborSearch::Grid, |i, j| {
        adj[i].push(j);
        adj[j].push(i);
    });
    for list in &mut adj {
        list.sort_unstable();
    }

    // hop distances to b, then walk greedily from a
    let mut hops = vec![usize::MAX; ids.len()];
    hops[ib] = 0;
    let mut queue = VecDeque::from([ib]);
    while let Some(u) = queue.pop_front() {
        if u == ia {
            break;
        }
        for &v in &adj[u] {
            if hops[v] == usize::MAX {
                hops[v] = hops[u] + 1;
                queue.push_back(v);
            }
        }
    }
    if hops[ia] == usize::MAX {
        return Ok(None);
    }
    let mut points = vec![a];
    let mut cur = ia;
    while cur != ib {
        cur = *adj[cur]
            .iter()
            .find(|&&v| hops[v] != usize::MAX && hops[v] + 1 == hops[cur])
            .expect("BFS layer has a predecessor");
        points.push(ids[cur]);
    }
    Ok(Some(KChain { k, points }))
}
