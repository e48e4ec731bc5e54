mod args;
mod report;

use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::Parser;
use coarse_ends::ends::{
    basepoint_invariance_check, build_filtration, check_bornologous_proper, induced_map, same_end,
    sigma_from_filtrations, sweep_filtrations, SampledMap,
};
use coarse_ends::fixtures::fixture;
use coarse_ends::metric::{
    generate_space, load_points, validate_metric, Family, MetricSpaceSample, SpaceSpec,
};
use coarse_ends::sequences::{interleave_from_chains, CoarseSequencePrefix};
use serde_json::json;

use args::{Cli, Command, Format, PairArgs, SpaceArgs, SpaceKind};
use report::{Rejected, Report};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(report::exit_code(&err))
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    let report = match &cli.command {
        Command::Generate(space) => {
            let (x, _) = load_space(space)?;
            Report::json(json!({ "sample": &*x })).with_csv(report::points_csv(&x))
        }
        Command::Validate(a) => {
            let (x, _) = load_space(&a.space)?;
            let v = validate_metric(&x, a.triples, cli.seed);
            let csv = report::violations_csv(&v);
            Report::json(json!({ "clean": v.is_clean(), "validation": v })).with_csv(csv)
        }
        Command::Components(a) => {
            let (x, _) = load_space(&a.space)?;
            let f = build_filtration(&x, a.k, &a.radii)?;
            Report::json(json!({ "filtration": &f }))
                .with_dot(f.to_dot())
                .with_csv(report::filtration_csv(&f))
        }
        Command::SameEnd(a) => {
            let (x, family) = load_space(&a.space)?;
            let (s, t) = pair(&x, family, a)?;
            let d = same_end(&s, &t, &a.sweep.k_sweep, &a.sweep.radii)?;
            let csv = report::witnesses_csv(&d);
            Report::json(json!({ "s": s, "t": t, "decision": d })).with_csv(csv)
        }
        Command::Sigma(a) => {
            let (x, _) = load_space(&a.space)?;
            let filtrations = sweep_filtrations(&x, &a.sweep.k_sweep, &a.sweep.radii)?;
            let sigma = sigma_from_filtrations(&filtrations, a.live_margin);
            Report::json(json!({ "sigma": &sigma }))
                .with_csv(report::sigma_csv(&sigma))
                .with_dot(report::sweep_dot(&filtrations))
        }
        Command::Witness(a) => {
            let (x, family) = load_space(&a.space)?;
            let (s, t) = pair(&x, family, a)?;
            let d = same_end(&s, &t, &a.sweep.k_sweep, &a.sweep.radii)?;
            let stitches = d.level_stitches(&s, &t)?;
            let interleaved = if stitches.is_empty() {
                None
            } else {
                Some(interleave_from_chains(&s, &t, &stitches)?)
            };
            Report::json(json!({
                "s": s,
                "t": t,
                "decision": d,
                "stitches": stitches,
                "interleaved": interleaved,
            }))
        }
        Command::Induced(a) => induced(a)?,
        Command::BasepointCheck(a) => {
            let (x, _) = load_space(&a.space)?;
            let mut basepoints = vec![x.basepoint()];
            for raw in &a.at {
                let coords = parse_list::<f64>(raw).with_context(|| format!("--at {raw}"))?;
                let id = x
                    .find(&coords)
                    .ok_or_else(|| Rejected(format!("no sample point at {raw}")))?;
                basepoints.push(id);
            }
            let r = basepoint_invariance_check(
                &x,
                &basepoints,
                &a.sweep.k_sweep,
                &a.sweep.radii,
                a.live_margin,
            )?;
            let csv = report::basepoint_csv(&r);
            Report::json(json!({ "basepoints": r })).with_csv(csv)
        }
    };
    let text = report.render(cli)?;
    match &cli.output {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn load_space(a: &SpaceArgs) -> Result<(Arc<MetricSpaceSample>, Family)> {
    let family = Family::from(a.space);
    let sample = if a.space == SpaceKind::CsvImport {
        let input = a
            .input
            .as_deref()
            .ok_or_else(|| Rejected("csv-import needs --input".into()))?;
        load_points(
            input,
            a.metric.into(),
            a.basepoint,
            a.window,
            a.resolution,
            a.matrix.as_deref(),
        )?
    } else {
        generate_space(&spec(a, a.window))?
    };
    Ok((Arc::new(sample), family))
}

fn spec(a: &SpaceArgs, window: f64) -> SpaceSpec {
    let default_dim = if a.space == SpaceKind::Line { 1 } else { 2 };
    SpaceSpec {
        family: a.space.into(),
        dimension: a.dim.unwrap_or(default_dim),
        window_radius: window,
        resolution: a.resolution,
        circles: a.circles,
    }
}

fn parse_list<T: std::str::FromStr>(raw: &str) -> Result<Vec<T>>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    raw.split(',')
        .map(|v| {
            v.trim()
                .parse::<T>()
                .map_err(|e| anyhow!(Rejected(format!("{v:?}: {e}"))))
        })
        .collect()
}

/// A fixture name, or `ids:` followed by comma-separated point ids.
fn sequence(x: &Arc<MetricSpaceSample>, family: Family, raw: &str) -> Result<CoarseSequencePrefix> {
    match raw.strip_prefix("ids:") {
        Some(ids) => Ok(CoarseSequencePrefix::new(x.clone(), parse_list(ids)?)?),
        None => Ok(fixture(x, family, raw)?),
    }
}

fn pair(
    x: &Arc<MetricSpaceSample>,
    family: Family,
    a: &PairArgs,
) -> Result<(CoarseSequencePrefix, CoarseSequencePrefix)> {
    Ok((sequence(x, family, &a.s)?, sequence(x, family, &a.t)?))
}

fn induced(a: &args::InducedArgs) -> Result<Report> {
    if !a.scale.is_finite() || a.scale <= 0.0 {
        bail!(Rejected(format!(
            "--scale must be positive, got {}",
            a.scale
        )));
    }
    if a.space.space == SpaceKind::CsvImport {
        bail!(Rejected("induced maps need a generated space".into()));
    }
    let (x, family) = load_space(&a.space)?;
    let y = Arc::new(generate_space(&spec(
        &a.space,
        a.space.window * a.scale.max(1.0),
    ))?);
    let scale = a.scale;
    let map = SampledMap::from_coords(x.clone(), y.clone(), |c| {
        c.iter().map(|v| v * scale).collect()
    })?;
    let moduli = check_bornologous_proper(&map, &a.sweep.k_sweep)?;

    let verdicts = match (&a.s, &a.t) {
        (Some(s), Some(t)) => {
            let (s, t) = (sequence(&x, family, s)?, sequence(&x, family, t)?);
            let before = same_end(&s, &t, &a.sweep.k_sweep, &a.sweep.radii)?;
            let (fs, ft) = (induced_map(&map, &s)?, induced_map(&map, &t)?);
            let radii: Vec<f64> = a.sweep.radii.iter().map(|r| r * scale).collect();
            let after = same_end(&fs, &ft, &a.sweep.k_sweep, &radii)?;
            Some(json!({
                "preserved": before.verdict == after.verdict,
                "before": before,
                "after": after,
                "image_s": fs,
                "image_t": ft,
            }))
        }
        (None, None) => None,
        _ => bail!(Rejected("--s and --t go together".into())),
    };
    let csv = report::moduli_csv(&moduli);
    Ok(Report::json(json!({ "moduli": moduli, "verdicts": verdicts })).with_csv(csv))
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Dot => "dot",
            Format::Csv => "csv",
        }
    }
}
