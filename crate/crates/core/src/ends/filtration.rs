use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::{check_margin, validate_grid};
use crate::chains::{k_chain_components, ChainPartition};
use crate::error::{Error, Result};
use crate::metric::{MetricSpaceSample, PointId};
use crate::TOLERANCE;

/// K-chain components of `X - B(x0, R)` over an increasing radius grid, with
/// the maps sending each component at `R_{j+1}` to the component at `R_j`
/// containing it.
#[derive(Debug, Clone, Serialize)]
pub struct EndFiltration {
    #[serde(skip)]
    sample: Arc<MetricSpaceSample>,
    #[serde(rename = "K")]
    k: f64,
    radii: Vec<f64>,
    levels: Vec<ChainPartition>,
    thread_maps: Vec<Vec<usize>>,
}

impl EndFiltration {
    pub fn sample(&self) -> &Arc<MetricSpaceSample> {
        &self.sample
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn levels(&self) -> &[ChainPartition] {
        &self.levels
    }

    /// `thread_maps()[j][c]` is the level-`j` component containing component
    /// `c` of level `j + 1`.
    pub fn thread_maps(&self) -> &[Vec<usize>] {
        &self.thread_maps
    }

    /// Checks that every member of every component maps to the component its
    /// thread map claims.
    pub fn threads_consistent(&self) -> bool {
        self.thread_maps.iter().enumerate().all(|(j, map)| {
            self.levels[j + 1]
                .components()
                .iter()
                .zip(map)
                .all(|(c, &target)| {
                    c.members
                        .iter()
                        .all(|&p| self.levels[j].component_of(p) == Some(target))
                })
        })
    }

    /// Components at the largest radius reaching `window_radius - live_margin`.
    pub fn live_components(&self, live_margin: f64) -> Vec<usize> {
        let Some(top) = self.levels.last() else {
            return Vec::new();
        };
        let edge = self.sample.window_radius() - live_margin - TOLERANCE;
        top.components()
            .iter()
            .filter(|c| {
                c.members
                    .iter()
                    .any(|&p| self.sample.dist_to_base(p) >= edge)
            })
            .map(|c| c.id)
            .collect()
    }

    /// Graphviz rendering: one node per component per level, one edge per
    /// thread map entry.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        writeln!(out, "digraph filtration {{").unwrap();
        self.write_dot_body(&mut out, "");
        writeln!(out, "}}").unwrap();
        out
    }

    /// Writes nodes and edges without the enclosing graph, naming nodes with
    /// `prefix` so several filtrations can share one graph.
    pub fn write_dot_body(&self, out: &mut String, prefix: &str) {
        writeln!(out, "  rankdir=LR;").unwrap();
        for (j, (level, r)) in self.levels.iter().zip(&self.radii).enumerate() {
            writeln!(out, "  subgraph cluster_{prefix}r{j} {{").unwrap();
            writeln!(out, "    label=\"K={} R={}\";", self.k, r).unwrap();
            for c in level.components() {
                writeln!(
                    out,
                    "    {prefix}r{j}_c{} [label=\"c{} ({} pts, rep {})\"];",
                    c.id,
                    c.id,
                    c.members.len(),
                    c.representative
                )
                .unwrap();
            }
            writeln!(out, "  }}").unwrap();
        }
        for (j, map) in self.thread_maps.iter().enumerate() {
            for (c, target) in map.iter().enumerate() {
                writeln!(out, "  {prefix}r{}_c{c} -> {prefix}r{j}_c{target};", j + 1).unwrap();
            }
        }
    }
}

/// Builds the filtration with the default margin `K`.
pub fn build_filtration(
    sample: &Arc<MetricSpaceSample>,
    k: f64,
    radii: &[f64],
) -> Result<EndFiltration> {
    build_filtration_with_margin(sample, k, radii, k)
}

pub fn build_filtration_with_margin(
    sample: &Arc<MetricSpaceSample>,
    k: f64,
    radii: &[f64],
    margin: f64,
) -> Result<EndFiltration> {
    validate_grid("radius grid", radii, false)?;
    check_margin(sample.window_radius(), *radii.last().unwrap(), margin)?;
    let levels = radii
        .par_iter()
        .map(|&r| k_chain_components(sample, &sample.ball_complement(r)?, k))
        .collect::<Result<Vec<_>>>()?;
    let thread_maps = levels
        .windows(2)
        .map(|w| {
            w[1].components()
                .iter()
                .map(|c| {
                    w[0].component_of(c.representative)
                        .expect("complements shrink as the radius grows")
                })
                .collect()
        })
        .collect();
    Ok(EndFiltration {
        sample: sample.clone(),
        k,
        radii: radii.to_vec(),
        levels,
        thread_maps,
    })
}

/// Number of live components at the largest radius: those containing a
/// point at distance at least `window_radius - live_margin` from `x0`.
pub fn count_ends(filtration: &EndFiltration, live_margin: f64) -> usize {
    filtration.live_components(live_margin).len()
}

#[derive(Debug, Clone, Serialize)]
pub struct SigmaEntry {
    #[serde(rename = "K")]
    pub k: f64,
    pub live_margin: f64,
    pub count: usize,
    /// Representatives (smallest ids) of the live components.
    pub live_representatives: Vec<PointId>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SigmaReport {
    pub radii: Vec<f64>,
    pub entries: Vec<SigmaEntry>,
    /// The count shared by the last third of the sweep, if they agree.
    pub stabilized: Option<usize>,
    pub stable: bool,
}

/// One filtration per `K`, built in parallel.
pub fn sweep_filtrations(
    sample: &Arc<MetricSpaceSample>,
    k_sweep: &[f64],
    radii: &[f64],
) -> Result<Vec<EndFiltration>> {
    validate_grid("K sweep", k_sweep, true)?;
    validate_grid("radius grid", radii, false)?;
    check_margin(
        sample.window_radius(),
        *radii.last().unwrap(),
        *k_sweep.last().unwrap(),
    )?;
    k_sweep
        .par_iter()
        .map(|&k| build_filtration(sample, k, radii))
        .collect()
}

/// Counts ends for each filtration and reports the stabilized value. A
/// missing `live_margin` means `2K` for each entry.
pub fn sigma_from_filtrations(
    filtrations: &[EndFiltration],
    live_margin: Option<f64>,
) -> SigmaReport {
    let entries: Vec<SigmaEntry> = filtrations
        .iter()
        .map(|f| {
            let margin = live_margin.unwrap_or(2.0 * f.k());
            let live = f.live_components(margin);
            let top = f.levels().last().expect("non-empty grid");
            SigmaEntry {
                k: f.k(),
                live_margin: margin,
                count: live.len(),
                live_representatives: live
                    .iter()
                    .map(|&c| top.components()[c].representative)
                    .collect(),
            }
        })
        .collect();
    let tail = entries.len().div_ceil(3);
    let last = &entries[entries.len() - tail..];
    let stable = !last.is_empty() && last.iter().all(|e| e.count == last[0].count);
    SigmaReport {
        radii: filtrations
            .first()
            .map(|f| f.radii().to_vec())
            .unwrap_or_default(),
        stabilized: stable.then(|| last[0].count),
        stable,
        entries,
    }
}

/// End counts across a `K` sweep.
pub fn sigma_estimate(
    sample: &Arc<MetricSpaceSample>,
    k_sweep: &[f64],
    radii: &[f64],
    live_margin: Option<f64>,
) -> Result<SigmaReport> {
    let filtrations = sweep_filtrations(sample, k_sweep, radii)?;
    Ok(sigma_from_filtrations(&filtrations, live_margin))
}

#[derive(Debug, Clone, Serialize)]
pub struct BasepointRun {
    /// Id of the basepoint in the original sample.
    pub basepoint: PointId,
    pub offset: f64,
    pub window_radius: f64,
    pub report: SigmaReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct BasepointReport {
    pub runs: Vec<BasepointRun>,
    pub consistent: bool,
}

/// Reruns [`sigma_estimate`] from several basepoints. Each run re-centers the
/// sample at the new basepoint (its faithful window shrinks by the offset)
/// and shrinks the radius grid by the same offset, dropping non-positive radii.
pub fn basepoint_invariance_check(
    sample: &Arc<MetricSpaceSample>,
    basepoints: &[PointId],
    k_sweep: &[f64],
    radii: &[f64],
    live_margin: Option<f64>,
) -> Result<BasepointReport> {
    if basepoints.is_empty() {
        return Err(Error::InvalidGrid(
            "basepoint list must not be empty".into(),
        ));
    }
    validate_grid("radius grid", radii, false)?;
    let mut runs = Vec::with_capacity(basepoints.len());
    for &b in basepoints {
        let (rebased, _) = sample.rebased(b)?;
        let offset = sample.dist_to_base(b);
        let shrunk: Vec<f64> = radii
            .iter()
            .map(|r| r - offset)
            .filter(|&r| r > 0.0)
            .collect();
        if shrunk.is_empty() {
            return Err(Error::BasepointTooFar {
                id: b,
                reason: format!("offset {offset} empties the radius grid"),
            });
        }
        let report = sigma_estimate(&Arc::new(rebased), k_sweep, &shrunk, live_margin)?;
        runs.push(BasepointRun {
            basepoint: b,
            offset,
            window_radius: sample.window_radius() - offset,
            report,
        });
    }
    let first = runs[0].report.stabilized;
    let consistent = first.is_some() && runs.iter().all(|r| r.report.stabilized == first);
    Ok(BasepointReport { runs, consistent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{generate_space, SpaceSpec};

    fn space(spec: SpaceSpec) -> Arc<MetricSpaceSample> {
        Arc::new(generate_space(&spec).unwrap())
    }

    #[test]
    fn line_has_two_threads_per_level() {
        let x = space(SpaceSpec::line(20.0, 1.0));
        let f = build_filtration(&x, 1.0, &[2.0, 5.0, 10.0]).unwrap();
        assert!(f.levels().iter().all(|l| l.count() == 2));
        for map in f.thread_maps() {
            let mut sorted = map.clone();
            sorted.sort();
            assert_eq!(sorted, vec![0, 1]);
        }
        assert!(f.threads_consistent());
        assert_eq!(count_ends(&f, 2.0), 2);
    }

    #[test]
    fn plane_has_one_component_per_level() {
        let x = space(SpaceSpec::euclidean(2, 20.0, 1.0));
        let f = build_filtration(&x, 1.0, &[2.0, 5.0, 10.0]).unwrap();
        assert!(f.levels().iter().all(|l| l.count() == 1));
        assert_eq!(count_ends(&f, 2.0), 1);
    }

    #[test]
    fn empty_complement_level() {
        let x = space(SpaceSpec::line(20.0, 1.0));
        let f = build_filtration_with_margin(&x, 1.0, &[5.0, 20.0], 0.0).unwrap();
        assert_eq!(f.levels()[1].count(), 0);
        assert!(f.thread_maps()[0].is_empty());
        assert_eq!(count_ends(&f, 2.0), 0);
    }

    #[test]
    fn margin_enforced() {
        let x = space(SpaceSpec::line(20.0, 1.0));
        assert!(matches!(
            build_filtration(&x, 3.0, &[5.0, 18.0]),
            Err(Error::InvalidGrid(_))
        ));
    }

    #[test]
    fn t_shape_count_drops_with_k() {
        let x = space(SpaceSpec::t_shape(50.0, 1.0));
        let r = sigma_estimate(&x, &[1.0, 2.0, 3.0, 4.0], &[5.0, 10.0, 20.0, 30.0], None).unwrap();
        let counts: Vec<_> = r.entries.iter().map(|e| e.count).collect();
        assert_eq!(counts, vec![2, 1, 1, 1]);
        assert_eq!(r.stabilized, Some(1));
    }

    #[test]
    fn unstable_tail_is_flagged() {
        let x = space(SpaceSpec::t_shape(50.0, 1.0));
        let r = sigma_estimate(&x, &[1.0, 1.5, 1.75, 2.0], &[5.0, 10.0], None).unwrap();
        assert!(!r.stable);
        assert_eq!(r.stabilized, None);
    }

    #[test]
    fn basepoint_rerun_on_line() {
        let x = space(SpaceSpec::line(200.0, 1.0));
        let three = x.find(&[3.0]).unwrap();
        let rep = basepoint_invariance_check(
            &x,
            &[x.basepoint(), three],
            &[1.0, 2.0, 3.0],
            &[10.0, 50.0, 100.0, 150.0],
            None,
        )
        .unwrap();
        assert!(rep.consistent);
        assert_eq!(rep.runs[1].report.radii, vec![7.0, 47.0, 97.0, 147.0]);
        assert!(rep.runs.iter().all(|r| r.report.stabilized == Some(2)));
    }

    #[test]
    fn basepoint_too_far() {
        let x = space(SpaceSpec::line(20.0, 1.0));
        let far = x.find(&[15.0]).unwrap();
        assert!(matches!(
            basepoint_invariance_check(&x, &[far], &[1.0], &[2.0, 4.0], None),
            Err(Error::BasepointTooFar { .. })
        ));
    }

    #[test]
    fn dot_lists_components_and_threads() {
        let x = space(SpaceSpec::line(20.0, 1.0));
        let f = build_filtration(&x, 1.0, &[2.0, 5.0]).unwrap();
        let dot = f.to_dot();
        assert!(dot.starts_with("digraph filtration {"));
        assert_eq!(dot.matches("->").count(), 2);
        assert!(dot.contains("r1_c0 -> r0_c0;"));
    }
}
