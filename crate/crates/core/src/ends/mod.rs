//! Deciding when two coarse sequences converge to the same end, and
//! estimating how many ends a sampled space has.
//!
//! "There is a `K > 0` such that for all `R > 0` ..." becomes an ascending
//! sweep of `K` values against a finite radius grid. The grid must stay at
//! least `K_max` inside the window so that no chain is cut off by the edge
//! of the sample.

mod filtration;
mod maps;

pub use filtration::{
    basepoint_invariance_check, build_filtration, build_filtration_with_margin, count_ends,
    sigma_estimate, sigma_from_filtrations, sweep_filtrations, BasepointReport, BasepointRun,
    EndFiltration, SigmaEntry, SigmaReport,
};
pub use maps::{
    check_bornologous_proper, induced_map, ModuliReport, Modulus, PreimageRadius, SampledMap,
};

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::chains::{k_chain_components, k_chain_path, KChain};
use crate::error::{Error, Result};
use crate::sequences::{check_coarse, CoarseSequencePrefix, CoarseVerdict, Stitch};
use crate::{within, TOLERANCE};

/// Checks that `values` is non-empty, finite and strictly increasing.
pub fn validate_grid(name: &str, values: &[f64], positive: bool) -> Result<()> {
    if values.is_empty() {
        return Err(Error::InvalidGrid(format!("{name} must not be empty")));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidGrid(format!("{name} must be finite")));
    }
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidGrid(format!("{name} must be increasing")));
    }
    let low = values[0];
    if (positive && low <= 0.0) || low < 0.0 {
        return Err(Error::InvalidGrid(format!(
            "{name} must be {}",
            if positive { "positive" } else { "non-negative" }
        )));
    }
    Ok(())
}

fn check_margin(window: f64, max_radius: f64, margin: f64) -> Result<()> {
    if max_radius > window - margin + TOLERANCE {
        return Err(Error::InvalidGrid(format!(
            "largest radius {max_radius} exceeds window {window} minus margin {margin}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EndVerdict {
    #[serde(rename = "same-end")]
    SameEnd,
    #[serde(rename = "distinct-up-to-Kmax")]
    DistinctUpToKmax,
    #[serde(rename = "undetermined")]
    Undetermined,
}

/// `s[i]` and `t[j]` joined by a K-chain outside `B(x0, radius)`.
#[derive(Debug, Clone, Serialize)]
pub struct RadiusWitness {
    pub radius: f64,
    pub i: usize,
    pub j: usize,
    pub chain: KChain,
}

#[derive(Debug, Clone, Serialize)]
pub struct KAttempt {
    pub k: f64,
    /// First radius at which the tails were in different components.
    pub failed_radius: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EndDecision {
    pub verdict: EndVerdict,
    #[serde(rename = "K_used")]
    pub k_used: Option<f64>,
    pub k_sweep: Vec<f64>,
    pub radii: Vec<f64>,
    pub witnesses: Vec<RadiusWitness>,
    pub attempts: Vec<KAttempt>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl EndDecision {
    fn undetermined(k_sweep: &[f64], radii: &[f64], note: String) -> Self {
        EndDecision {
            verdict: EndVerdict::Undetermined,
            k_used: None,
            k_sweep: k_sweep.to_vec(),
            radii: radii.to_vec(),
            witnesses: Vec::new(),
            attempts: Vec::new(),
            note: Some(note),
        }
    }

    /// The witness chains as stitches from `s[i]` to `t[j]`, ready for
    /// [`interleave_from_chains`](crate::sequences::interleave_from_chains).
    /// Index pairs strictly increase; when two radii share an index the
    /// larger radius wins.
    pub fn level_stitches(
        &self,
        s: &CoarseSequencePrefix,
        t: &CoarseSequencePrefix,
    ) -> Result<Vec<Stitch>> {
        let Some(k_used) = self.k_used else {
            return Ok(Vec::new());
        };
        let mut out: Vec<Stitch> = Vec::new();
        for w in &self.witnesses {
            if w.i >= s.len() || w.j >= t.len() || w.chain.k != k_used {
                return Err(Error::InvalidWitness(format!(
                    "witness at radius {} does not belong to these prefixes",
                    w.radius
                )));
            }
            while out
                .last()
                .is_some_and(|st| st.s_index >= w.i || st.t_index >= w.j)
            {
                out.pop();
            }
            out.push(Stitch {
                s_index: w.i,
                t_index: w.j,
                chain: w.chain.clone(),
            });
        }
        Ok(out)
    }
}

/// Decides whether `s` and `t` converge to the same end.
///
/// For each `K` in the sweep that is at least both chain bounds, and for each
/// radius `R`, the tails of `s` and `t` outside `B(x0, R)` must meet a common
/// K-chain component of the ball complement. The first `K` passing every
/// radius gives `same-end`, with a connecting chain per radius. Sequences
/// whose prefixes are too short to judge give `undetermined`.
pub fn same_end(
    s: &CoarseSequencePrefix,
    t: &CoarseSequencePrefix,
    k_sweep: &[f64],
    radii: &[f64],
) -> Result<EndDecision> {
    if !s.same_sample(t) {
        return Err(Error::MismatchedSamples);
    }
    if !s.based() || !t.based() {
        return Err(Error::InvalidSequence(
            "end decisions need based sequences".into(),
        ));
    }
    validate_grid("K sweep", k_sweep, true)?;
    validate_grid("radius grid", radii, false)?;
    let sample = s.sample();
    let k_max = *k_sweep.last().unwrap();
    let r_max = *radii.last().unwrap();
    check_margin(sample.window_radius(), r_max, k_max)?;

    for (name, q) in [("s", s), ("t", t)] {
        let check = check_coarse(q, r_max);
        match check.verdict {
            CoarseVerdict::Coarse => {}
            CoarseVerdict::Undetermined => {
                return Ok(EndDecision::undetermined(
                    k_sweep,
                    radii,
                    format!("{name} is too short to judge"),
                ))
            }
            v => {
                return Err(Error::NotCoarse(format!(
                    "{name} is {v:?} at radius {r_max} (final quarter reaches {})",
                    check.escape_radius_reached
                )))
            }
        }
    }
    let mut tails = Vec::with_capacity(radii.len());
    for &r in radii {
        match (s.escape_index(r), t.escape_index(r)) {
            (Some(i), Some(j)) => tails.push((i, j)),
            _ => {
                return Ok(EndDecision::undetermined(
                    k_sweep,
                    radii,
                    format!("a prefix ends inside B(x0, {r})"),
                ))
            }
        }
    }

    let k_floor = s.chain_bound().max(t.chain_bound());
    let mut attempts = Vec::new();
    for &k in k_sweep.iter().filter(|&&k| within(k_floor, k)) {
        let per_radius: Vec<Result<Option<RadiusWitness>>> = radii
            .par_iter()
            .zip(&tails)
            .map(|(&r, &(ei, ej))| tail_witness(s, t, k, r, ei, ej))
            .collect();
        let mut witnesses = Vec::with_capacity(radii.len());
        let mut failed_radius = None;
        for (res, &r) in per_radius.into_iter().zip(radii) {
            match res? {
                Some(w) => witnesses.push(w),
                None => {
                    failed_radius = Some(r);
                    break;
                }
            }
        }
        attempts.push(KAttempt { k, failed_radius });
        if failed_radius.is_none() {
            return Ok(EndDecision {
                verdict: EndVerdict::SameEnd,
                k_used: Some(k),
                k_sweep: k_sweep.to_vec(),
                radii: radii.to_vec(),
                witnesses,
                attempts,
                note: None,
            });
        }
    }
    if attempts.is_empty() {
        return Ok(EndDecision::undetermined(
            k_sweep,
            radii,
            format!("no K in the sweep reaches the chain bounds ({k_floor})"),
        ));
    }
    Ok(EndDecision {
        verdict: EndVerdict::DistinctUpToKmax,
        k_used: None,
        k_sweep: k_sweep.to_vec(),
        radii: radii.to_vec(),
        witnesses: Vec::new(),
        attempts,
        note: None,
    })
}

fn tail_witness(
    s: &CoarseSequencePrefix,
    t: &CoarseSequencePrefix,
    k: f64,
    r: f64,
    s_from: usize,
    t_from: usize,
) -> Result<Option<RadiusWitness>> {
    let sample = s.sample();
    let outside = sample.ball_complement(r)?;
    let partition = k_chain_components(sample, &outside, k)?;
    let comp = |p| {
        partition
            .component_of(p)
            .expect("tail lies outside the ball")
    };
    let mut first_s: HashMap<usize, usize> = HashMap::new();
    for i in s_from..s.len() {
        first_s.entry(comp(s.terms()[i])).or_insert(i);
    }
    let found = (t_from..t.len())
        .filter_map(|j| first_s.get(&comp(t.terms()[j])).map(|&i| (i, j)))
        .min();
    let Some((i, j)) = found else {
        return Ok(None);
    };
    let chain = k_chain_path(sample, &outside, k, s.terms()[i], t.terms()[j])?
        .expect("same component implies a chain");
    Ok(Some(RadiusWitness {
        radius: r,
        i,
        j,
        chain,
    }))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::metric::{generate_space, MetricSpaceSample, SpaceSpec};
    use crate::sequences::interleave_from_chains;

    fn line(w: f64) -> Arc<MetricSpaceSample> {
        Arc::new(generate_space(&SpaceSpec::line(w, 1.0)).unwrap())
    }

    fn ray(s: &Arc<MetricSpaceSample>, step: i32, to: i32) -> CoarseSequencePrefix {
        let ids = (0..=to / step.abs())
            .map(|i| s.find(&[(i * step) as f64]).unwrap())
            .collect();
        CoarseSequencePrefix::new(s.clone(), ids).unwrap()
    }

    const RADII: [f64; 4] = [10.0, 50.0, 100.0, 150.0];

    #[test]
    fn n_and_2n_share_an_end() {
        let x = line(200.0);
        let d = same_end(&ray(&x, 1, 200), &ray(&x, 2, 200), &[1.0, 2.0, 3.0], &RADII).unwrap();
        assert_eq!(d.verdict, EndVerdict::SameEnd);
        assert_eq!(d.k_used, Some(2.0));
        assert_eq!(d.witnesses.len(), 4);
        for w in &d.witnesses {
            assert!(w.chain.is_valid(&x));
            assert!(w.chain.points.iter().all(|&p| x.dist_to_base(p) > w.radius));
        }
    }

    #[test]
    fn opposite_rays_are_distinct() {
        let x = line(200.0);
        let d = same_end(
            &ray(&x, 1, 200),
            &ray(&x, -1, 200),
            &[1.0, 2.0, 3.0],
            &RADII,
        )
        .unwrap();
        assert_eq!(d.verdict, EndVerdict::DistinctUpToKmax);
        assert!(d.attempts.iter().all(|a| a.failed_radius == Some(10.0)));
    }

    #[test]
    fn reflexive_at_chain_bound() {
        let x = line(200.0);
        let s = ray(&x, 2, 200);
        let d = same_end(&s, &s, &[1.0, 1.5, 2.5, 4.0], &RADII).unwrap();
        assert_eq!(d.k_used, Some(2.5));
        assert_eq!(d.attempts.len(), 1);
    }

    #[test]
    fn short_prefix_is_undetermined() {
        let x = line(200.0);
        let s = ray(&x, 50, 150);
        let d = same_end(&s, &s, &[50.0], &[10.0, 20.0]).unwrap();
        assert_eq!(d.verdict, EndVerdict::Undetermined);
    }

    #[test]
    fn bounded_sequence_rejected() {
        let x = line(200.0);
        let ids = (0..40)
            .map(|i| x.find(&[(i % 2) as f64]).unwrap())
            .collect();
        let s = CoarseSequencePrefix::new(x.clone(), ids).unwrap();
        assert!(matches!(
            same_end(&s, &s, &[1.0], &[5.0]),
            Err(Error::NotCoarse(_))
        ));
    }

    #[test]
    fn grid_preconditions() {
        let x = line(200.0);
        let s = ray(&x, 1, 200);
        assert!(matches!(
            same_end(&s, &s, &[1.0], &[50.0, 10.0]),
            Err(Error::InvalidGrid(m)) if m.contains("radius grid must be increasing")
        ));
        assert!(same_end(&s, &s, &[2.0, 1.0], &[10.0]).is_err());
        assert!(same_end(&s, &s, &[0.0], &[10.0]).is_err());
        assert!(same_end(&s, &s, &[5.0], &[196.0]).is_err());
    }

    #[test]
    fn stitches_replay_into_interleaving() {
        let x = line(200.0);
        let (s, t) = (ray(&x, 1, 200), ray(&x, 2, 200));
        let d = same_end(&s, &t, &[2.0], &RADII).unwrap();
        let stitches = d.level_stitches(&s, &t).unwrap();
        assert!(!stitches.is_empty());
        let r = interleave_from_chains(&s, &t, &stitches).unwrap();
        assert!(r.s_witness.verify(&s, &r.sequence));
        assert!(r.t_witness.unwrap().verify(&t, &r.sequence));
        assert!(r.sequence.chain_bound() <= 2.0);
    }
}
