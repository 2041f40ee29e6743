use std::fs::File;
use std::io::{self, BufWriter, Write};

use anyhow::Context;
use serde::Serialize;
use serde_json::json;

use ckflow::orbit::{OrbitSample, ReducedSample};
use ckflow::reduced::LevelSetReport;
use ckflow::{FixedPointReport, GeneratorId, OmegaParams, Reduction};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Destination for one report, as CSV (header row first) or a single JSON object.
pub struct Sink {
    format: Format,
    out: Box<dyn Write>,
}

/// Shortest round-trip text; scientific notation outside `[1e-5, 1e16)`.
/// Neither form depends on the locale.
fn num(v: f64) -> String {
    let m = v.abs();
    if v != 0.0 && m.is_finite() && !(1e-5..1e16).contains(&m) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

impl Sink {
    pub fn open(path: &str, format: Format) -> anyhow::Result<Self> {
        let out: Box<dyn Write> = if path == "-" {
            Box::new(BufWriter::new(io::stdout()))
        } else {
            Box::new(BufWriter::new(File::create(path).with_context(|| format!("cannot create {path}"))?))
        };
        Ok(Self { format, out })
    }

    pub fn finish(mut self) -> anyhow::Result<()> {
        self.out.flush()?;
        Ok(())
    }

    fn json<T: Serialize>(&mut self, value: &T) -> anyhow::Result<()> {
        serde_json::to_writer(&mut self.out, value)?;
        writeln!(self.out)?;
        Ok(())
    }

    fn csv(&mut self, header: Vec<String>, rows: Vec<Vec<String>>) -> anyhow::Result<()> {
        let mut w = csv::Writer::from_writer(&mut self.out);
        w.write_record(&header)?;
        for row in rows {
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn orbit(
        &mut self,
        params: &OmegaParams,
        z: f64,
        gen: GeneratorId,
        rows: &[OrbitSample],
        with_oracle: bool,
    ) -> anyhow::Result<()> {
        let n = params.dim();
        match self.format {
            Format::Json => self.json(&json!({
                "n": n,
                "omegas": params.omegas(),
                "z": z,
                "generator": format!("{},{}", gen.i, gen.j),
                "rows": rows,
            })),
            Format::Csv => {
                let mut header = vec!["t".to_string()];
                header.extend((1..=n).map(|k| format!("alpha_{k}")));
                header.push("casimir".into());
                header.extend((1..n).map(|k| format!("aux_{k}")));
                header.push("defined".into());
                if with_oracle {
                    header.push("oracle_deviation".into());
                }
                let body = rows
                    .iter()
                    .map(|r| {
                        let mut row = vec![num(r.t)];
                        row.extend(r.point.iter().map(|v| num(*v)));
                        row.push(num(r.casimir));
                        row.extend(r.aux.iter().map(|v| num(*v)));
                        row.push(r.defined.to_string());
                        if with_oracle {
                            row.push(r.oracle_deviation.map(num).unwrap_or_default());
                        }
                        row
                    })
                    .collect();
                self.csv(header, body)
            }
        }
    }

    pub fn reduced_orbit(&mut self, a: f64, b: f64, rows: &[ReducedSample]) -> anyhow::Result<()> {
        match self.format {
            Format::Json => self.json(&json!({ "a": a, "b": b, "rows": rows })),
            Format::Csv => {
                let header = ["t", "x", "y", "invariant", "defined"].map(String::from).to_vec();
                let body = rows
                    .iter()
                    .map(|r| vec![num(r.t), num(r.x), num(r.y), num(r.invariant), r.defined.to_string()])
                    .collect();
                self.csv(header, body)
            }
        }
    }

    pub fn fixed_points(&mut self, a: f64, b: f64, report: &FixedPointReport) -> anyhow::Result<()> {
        match self.format {
            Format::Json => self.json(report),
            Format::Csv => {
                let header = ["a", "b", "kind", "x", "y", "eig1_re", "eig1_im", "eig2_re", "eig2_im"]
                    .map(String::from)
                    .to_vec();
                let kind = serde_json::to_value(report.kind)?.as_str().unwrap_or_default().to_string();
                let mut row = vec![num(a), num(b), kind];
                match report.location {
                    Some([x, y]) => row.extend([num(x), num(y)]),
                    None => row.extend([String::new(), String::new()]),
                }
                for k in 0..2 {
                    match report.eigenvalues.get(k) {
                        Some(e) => row.extend([num(e.re), num(e.im)]),
                        None => row.extend([String::new(), String::new()]),
                    }
                }
                self.csv(header, vec![row])
            }
        }
    }

    pub fn verify<T: Serialize>(&mut self, summary: &T) -> anyhow::Result<()> {
        match self.format {
            Format::Json => self.json(summary),
            Format::Csv => {
                let value = serde_json::to_value(summary)?;
                let seed = value["seed"].to_string();
                let header = ["suite", "seed", "samples", "max_residual", "tolerance", "passed"]
                    .map(String::from)
                    .to_vec();
                let body = value["suites"]
                    .as_array()
                    .map(|a| a.as_slice())
                    .unwrap_or_default()
                    .iter()
                    .map(|s| {
                        vec![
                            s["suite"].as_str().unwrap_or_default().to_string(),
                            seed.clone(),
                            s["samples"].to_string(),
                            s["max_residual"].to_string(),
                            s["tolerance"].to_string(),
                            s["passed"].to_string(),
                        ]
                    })
                    .collect();
                self.csv(header, body)
            }
        }
    }

    pub fn reduction(&mut self, red: &Reduction) -> anyhow::Result<()> {
        match self.format {
            Format::Json => {
                let betas: Vec<_> = red.betas.iter().map(|(k, b)| json!({ "k": k, "beta": b })).collect();
                self.json(&json!({
                    "x": red.state.x,
                    "y": red.state.y,
                    "a": red.params.a,
                    "b": red.params.b,
                    "rho": red.rho,
                    "betas": betas,
                    "z": red.z,
                    "i": red.i,
                    "n": red.n,
                }))
            }
            Format::Csv => {
                let mut header = ["x", "y", "a", "b", "rho"].map(String::from).to_vec();
                header.extend(red.betas.iter().map(|(k, _)| format!("beta_{k}")));
                let mut row = vec![num(red.state.x), num(red.state.y), num(red.params.a), num(red.params.b), num(red.rho)];
                row.extend(red.betas.iter().map(|(_, b)| num(*b)));
                self.csv(header, vec![row])
            }
        }
    }

    pub fn level_set(&mut self, report: &LevelSetReport) -> anyhow::Result<()> {
        match self.format {
            Format::Json => self.json(report),
            Format::Csv => {
                let v = serde_json::to_value(report)?;
                let header = ["value", "z", "positive", "negative", "zero", "critical", "shape", "components", "bounded"]
                    .map(String::from)
                    .to_vec();
                let opt = |x: &serde_json::Value| if x.is_null() { String::new() } else { x.to_string() };
                let row = vec![
                    num(report.value),
                    num(report.z),
                    report.signature.positive.to_string(),
                    report.signature.negative.to_string(),
                    report.signature.zero.to_string(),
                    report.critical.to_string(),
                    v["shape"].as_str().unwrap_or_default().to_string(),
                    opt(&v["components"]),
                    opt(&v["bounded"]),
                ];
                self.csv(header, vec![row])
            }
        }
    }
}
