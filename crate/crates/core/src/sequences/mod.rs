//! Finite prefixes of coarse sequences and the subsequence relation.

mod ray;
mod witness;

pub use ray::{ray_to_sequence, MAX_SUBDIVISION_DEPTH};
pub use witness::{
    common_supersequence, interleave_from_chains, merge_supersequence, Interleaved, Stitch,
    Supersequence,
};

use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::metric::{outside_ball, MetricSpaceSample, PointId};
use crate::TOLERANCE;

/// Prefixes shorter than this never get a coarse / not-escaping verdict.
pub const MIN_DECIDABLE_LEN: usize = 8;

/// A finite prefix `s0, ..., sL` of a sequence in a sample.
#[derive(Debug, Clone)]
pub struct CoarseSequencePrefix {
    sample: Arc<MetricSpaceSample>,
    terms: Vec<PointId>,
    based: bool,
    chain_bound: f64,
    // escape[i] = min over j >= i of dist(x0, s_j); nondecreasing in i
    escape: Vec<f64>,
    declared_bound: Option<f64>,
}

impl CoarseSequencePrefix {
    /// A sequence based at the sample's basepoint.
    pub fn new(sample: Arc<MetricSpaceSample>, terms: Vec<PointId>) -> Result<Self> {
        if terms.first() != Some(&sample.basepoint()) {
            return Err(Error::InvalidSequence(format!(
                "based sequence must start at basepoint {}",
                sample.basepoint()
            )));
        }
        Self::build(sample, terms, true)
    }

    /// A sequence with an arbitrary first term.
    pub fn unbased(sample: Arc<MetricSpaceSample>, terms: Vec<PointId>) -> Result<Self> {
        Self::build(sample, terms, false)
    }

    fn build(sample: Arc<MetricSpaceSample>, terms: Vec<PointId>, based: bool) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidSequence("empty sequence".into()));
        }
        if let Some(&bad) = terms.iter().find(|&&p| !sample.contains(p)) {
            return Err(Error::UnknownPoint(bad));
        }
        let chain_bound = terms
            .windows(2)
            .map(|w| sample.dist(w[0], w[1]))
            .fold(0.0, f64::max);
        let mut escape = vec![0.0; terms.len()];
        let mut running = f64::INFINITY;
        for (i, &p) in terms.iter().enumerate().rev() {
            running = running.min(sample.dist_to_base(p));
            escape[i] = running;
        }
        Ok(CoarseSequencePrefix {
            sample,
            terms,
            based,
            chain_bound,
            escape,
            declared_bound: None,
        })
    }

    /// Declares the sequence an `n`-sequence; [`check_coarse`] reports
    /// `NotBornologous` if some step is longer.
    pub fn with_declared_bound(mut self, n: f64) -> Self {
        self.declared_bound = Some(n);
        self
    }

    pub fn sample(&self) -> &Arc<MetricSpaceSample> {
        &self.sample
    }

    pub fn terms(&self) -> &[PointId] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn based(&self) -> bool {
        self.based
    }

    /// Largest consecutive distance.
    pub fn chain_bound(&self) -> f64 {
        self.chain_bound
    }

    pub fn declared_bound(&self) -> Option<f64> {
        self.declared_bound
    }

    /// Running minimum of `dist(x0, s_j)` over `j >= i`, for every `i`.
    pub fn escape_profile(&self) -> &[f64] {
        &self.escape
    }

    /// First index after which every term of the prefix lies outside
    /// `B(x0, radius)`, or `None` if the last term is still inside.
    pub fn escape_index(&self, radius: f64) -> Option<usize> {
        let i = self.escape.partition_point(|&m| !outside_ball(m, radius));
        (i < self.terms.len()).then_some(i)
    }

    pub(crate) fn same_sample(&self, other: &CoarseSequencePrefix) -> bool {
        Arc::ptr_eq(&self.sample, &other.sample)
    }
}

impl Serialize for CoarseSequencePrefix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("CoarseSequencePrefix", 3)?;
        st.serialize_field("terms", &self.terms)?;
        st.serialize_field("chain_bound", &self.chain_bound)?;
        st.serialize_field("based", &self.based)?;
        st.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoarseVerdict {
    Coarse,
    NotBornologous,
    NotEscaping,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoarseCheck {
    pub verdict: CoarseVerdict,
    /// Smallest `N` for which the prefix is an N-sequence.
    pub n_min: f64,
    /// Minimum distance from `x0` over the final quarter of the prefix.
    pub escape_radius_reached: f64,
}

/// Finite-prefix test for "bounded steps and goes to infinity": the prefix is
/// coarse when its final quarter stays outside `B(x0, escape_threshold)`.
pub fn check_coarse(seq: &CoarseSequencePrefix, escape_threshold: f64) -> CoarseCheck {
    let len = seq.len();
    let quarter = (len / 4).max(1);
    let reached = seq.escape[len - quarter];
    let verdict = if seq
        .declared_bound
        .is_some_and(|n| seq.chain_bound > n + TOLERANCE)
    {
        CoarseVerdict::NotBornologous
    } else if len < MIN_DECIDABLE_LEN {
        CoarseVerdict::Undetermined
    } else if outside_ball(reached, escape_threshold) {
        CoarseVerdict::Coarse
    } else {
        CoarseVerdict::NotEscaping
    };
    CoarseCheck {
        verdict,
        n_min: seq.chain_bound,
        escape_radius_reached: reached,
    }
}

/// Strictly increasing index map `k -> i(k)` with `s[k] == t[i(k)]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct SubsequenceWitness {
    pub index_map: Vec<usize>,
}

impl SubsequenceWitness {
    pub fn identity(len: usize) -> Self {
        SubsequenceWitness {
            index_map: (0..len).collect(),
        }
    }

    /// Checks that this map embeds `s` into `t`.
    pub fn verify(&self, s: &CoarseSequencePrefix, t: &CoarseSequencePrefix) -> bool {
        self.index_map.len() == s.len()
            && self.index_map.windows(2).all(|w| w[0] < w[1])
            && self
                .index_map
                .iter()
                .zip(s.terms())
                .all(|(&i, &p)| t.terms().get(i) == Some(&p))
    }

    /// Given `self: s ⊑ t` and `outer: t ⊑ u`, the witness for `s ⊑ u`.
    pub fn then(&self, outer: &SubsequenceWitness) -> SubsequenceWitness {
        SubsequenceWitness {
            index_map: self.index_map.iter().map(|&i| outer.index_map[i]).collect(),
        }
    }
}

/// Greedy leftmost embedding of `s` into `t`, matching terms by point id.
pub fn is_subsequence(
    s: &CoarseSequencePrefix,
    t: &CoarseSequencePrefix,
) -> Result<Option<SubsequenceWitness>> {
    if !s.same_sample(t) {
        return Err(Error::MismatchedSamples);
    }
    Ok(embed(s.terms(), t.terms()).map(|index_map| SubsequenceWitness { index_map }))
}

pub(crate) fn embed(s: &[PointId], t: &[PointId]) -> Option<Vec<usize>> {
    let mut map = Vec::with_capacity(s.len());
    let mut next = 0;
    for &p in s {
        let offset = t[next..].iter().position(|&q| q == p)?;
        map.push(next + offset);
        next += offset + 1;
    }
    Some(map)
}
