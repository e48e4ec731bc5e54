use anyhow::Result;
use coarse_ends::ends::{BasepointReport, EndDecision, EndFiltration, ModuliReport, SigmaReport};
use coarse_ends::metric::{MetricSpaceSample, ValidationReport};
use coarse_ends::Error;
use serde_json::{json, Value};

use crate::args::{Cli, Format};

pub const SCHEMA_VERSION: u32 = 1;

/// A precondition the command line itself rejects.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct Rejected(pub String);

/// 2 for rejected inputs, 1 for everything else.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    if err.chain().any(|e| e.is::<Rejected>()) {
        return 2;
    }
    match err.chain().find_map(|e| e.downcast_ref::<Error>()) {
        Some(
            Error::InvalidWitness(_)
            | Error::InvalidStitch { .. }
            | Error::NoSubsequenceRelation { .. },
        ) => 1,
        Some(_) => 2,
        None => 1,
    }
}

pub struct Report {
    json: Value,
    dot: Option<String>,
    csv: Option<String>,
}

impl Report {
    pub fn json(result: Value) -> Self {
        Report {
            json: result,
            dot: None,
            csv: None,
        }
    }

    pub fn with_dot(mut self, dot: String) -> Self {
        self.dot = Some(dot);
        self
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    pub fn render(self, cli: &Cli) -> Result<String> {
        let unsupported = || {
            Rejected(format!(
                "--format {} is not available here",
                cli.format.name()
            ))
        };
        match cli.format {
            Format::Json => {
                let envelope = json!({
                    "schema": SCHEMA_VERSION,
                    "tool": { "name": env!("CARGO_PKG_NAME"), "version": env!("CARGO_PKG_VERSION") },
                    "config": cli,
                    "result": self.json,
                });
                Ok(serde_json::to_string_pretty(&envelope)? + "\n")
            }
            Format::Dot => self.dot.ok_or_else(|| unsupported().into()),
            Format::Csv => self.csv.ok_or_else(|| unsupported().into()),
        }
    }
}

fn table<R: IntoIterator<Item = Vec<String>>>(header: &[&str], rows: R) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn ids(list: &[usize]) -> String {
    list.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn points_csv(x: &MetricSpaceSample) -> String {
    let dims: Vec<String> = (0..x.dimension()).map(|i| format!("x{i}")).collect();
    let mut header = vec!["id"];
    header.extend(dims.iter().map(String::as_str));
    header.push("dist_to_base");
    table(
        &header,
        x.points().iter().map(|p| {
            let mut row = vec![p.id.to_string()];
            row.extend(p.coords.iter().map(f64::to_string));
            row.push(x.dist_to_base(p.id).to_string());
            row
        }),
    )
}

pub fn violations_csv(v: &ValidationReport) -> String {
    table(
        &["kind", "ids", "values"],
        v.violations.iter().map(|v| {
            let values = v
                .values
                .iter()
                .map(f64::to_string)
                .collect::<Vec<_>>()
                .join(" ");
            vec![v.kind.to_string(), ids(&v.ids), values]
        }),
    )
}

pub fn filtration_csv(f: &EndFiltration) -> String {
    let rows = f.levels().iter().zip(f.radii()).flat_map(|(level, r)| {
        level.components().iter().flat_map(move |c| {
            c.members.iter().map(move |p| {
                vec![
                    f.k().to_string(),
                    r.to_string(),
                    p.to_string(),
                    c.id.to_string(),
                ]
            })
        })
    });
    table(&["K", "radius", "point", "component"], rows)
}

pub fn sigma_csv(s: &SigmaReport) -> String {
    table(
        &["K", "live_margin", "count", "live_representatives"],
        s.entries.iter().map(|e| {
            vec![
                e.k.to_string(),
                e.live_margin.to_string(),
                e.count.to_string(),
                ids(&e.live_representatives),
            ]
        }),
    )
}

pub fn sweep_dot(filtrations: &[EndFiltration]) -> String {
    let mut out = String::from("digraph sweep {\n");
    for (i, f) in filtrations.iter().enumerate() {
        f.write_dot_body(&mut out, &format!("k{i}_"));
    }
    out.push_str("}\n");
    out
}

pub fn witnesses_csv(d: &EndDecision) -> String {
    table(
        &["radius", "i", "j", "K", "chain"],
        d.witnesses.iter().map(|w| {
            vec![
                w.radius.to_string(),
                w.i.to_string(),
                w.j.to_string(),
                w.chain.k.to_string(),
                ids(&w.chain.points),
            ]
        }),
    )
}

pub fn moduli_csv(m: &ModuliReport) -> String {
    table(
        &["N", "M", "preimage_radius"],
        m.moduli.iter().zip(&m.properness).map(|(md, p)| {
            vec![
                md.n.to_string(),
                md.m.to_string(),
                p.preimage_radius.to_string(),
            ]
        }),
    )
}

pub fn basepoint_csv(r: &BasepointReport) -> String {
    let rows = r.runs.iter().flat_map(|run| {
        run.report.entries.iter().map(move |e| {
            vec![
                run.basepoint.to_string(),
                run.offset.to_string(),
                e.k.to_string(),
                e.count.to_string(),
                run.report
                    .stabilized
                    .map(|s| s.to_string())
                    .unwrap_or_default(),
            ]
        })
    });
    table(&["basepoint", "offset", "K", "count", "stabilized"], rows)
}
