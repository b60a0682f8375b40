//! Rendering of command results as JSON, TSV or aligned text.
//!
//! JSON is one object per run: `{"config": RunConfig, "result": …, "ok": bool}`.
//! TSV starts with a `# kronlab-tsv v1` line, then a fixed header row.

use clap::ValueEnum;
use kronlab::characters::CharacterTable;
use kronlab::suites::SuiteReport;
use kronlab::Partition;
use serde_json::{json, Value};

use crate::RunConfig;

pub const TSV_VERSION: &str = "# kronlab-tsv v1";

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
    Pretty,
}

pub struct Report {
    config: RunConfig,
    result: Value,
    ok: bool,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    pretty: String,
}

fn strings<const N: usize>(xs: [&str; N]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// Left-aligned columns separated by two spaces.
fn table(header: &[String], rows: &[Vec<String>]) -> String {
    let cols = header.len();
    let mut width = vec![0; cols];
    for r in std::iter::once(header).chain(rows.iter().map(|r| r.as_slice())) {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |r: &[String]| {
        let cells: Vec<String> =
            r.iter().zip(&width).map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
        cells.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header);
    for r in rows {
        out += &line(r);
    }
    out
}

impl Report {
    pub fn ok(&self) -> bool {
        self.ok
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let doc = json!({ "config": self.config, "result": self.result, "ok": self.ok });
                serde_json::to_string(&doc).expect("report serializes") + "\n"
            }
            Format::Tsv => {
                let mut out = format!("{TSV_VERSION}\n{}\n", self.header.join("\t"));
                for r in &self.rows {
                    out += &r.join("\t");
                    out.push('\n');
                }
                out
            }
            Format::Pretty => self.pretty.clone(),
        }
    }

    pub fn coefficient(config: RunConfig, title: String, values: Vec<(&str, Option<u64>)>, agree: bool) -> Report {
        let value = values.iter().find_map(|(_, v)| *v);
        let methods: Vec<Value> = values
            .iter()
            .map(|(m, v)| match v {
                Some(v) => json!({ "method": m, "value": v }),
                None => json!({ "method": m, "value": null, "skipped": "resource bound" }),
            })
            .collect();
        let rows: Vec<Vec<String>> = values
            .iter()
            .map(|(m, v)| vec![m.to_string(), v.map_or_else(|| "skipped".to_string(), |v| v.to_string())])
            .collect();
        let mut pretty = match (value, agree) {
            (Some(v), true) => format!("{title} = {v}\n"),
            _ => format!("{title}: methods disagree\n"),
        };
        if values.len() > 1 {
            for r in &rows {
                pretty += &format!("  {:<10} {}\n", r[0], r[1]);
            }
            pretty += if agree { "all methods agree\n" } else { "MISMATCH\n" };
        }
        Report {
            config,
            result: json!({ "value": value, "methods": methods, "agree": agree }),
            ok: agree,
            header: strings(["method", "value"]),
            rows,
            pretty,
        }
    }

    pub fn suite(config: RunConfig, r: SuiteReport) -> Report {
        let rows: Vec<Vec<String>> = r
            .rows
            .iter()
            .map(|c| {
                vec![c.case.clone(), c.expected.clone(), c.got.clone(), (if c.pass { "pass" } else { "FAIL" }).into()]
            })
            .collect();
        let header = strings(["case", "expected", "got", "status"]);
        let mut pretty = format!("{}\n", r.suite);
        pretty += &table(&header, &rows);
        pretty += &format!("{}/{} pass\n", r.passed, r.total);
        for (k, v) in &r.counters {
            pretty += &format!("{k}: {v}\n");
        }
        Report {
            config,
            result: serde_json::to_value(&r).expect("report serializes"),
            ok: r.all_pass(),
            header,
            rows,
            pretty,
        }
    }

    pub fn chartable(config: RunConfig, t: &CharacterTable) -> Report {
        let mut header = vec!["lambda".to_string()];
        header.extend(t.classes().iter().map(|c| c.cycle_type.to_string()));
        let rows: Vec<Vec<String>> = t
            .partitions()
            .iter()
            .enumerate()
            .map(|(i, p)| std::iter::once(p.to_string()).chain(t.row(i).iter().map(|v| v.to_string())).collect())
            .collect();
        let values: Vec<&[i64]> = (0..t.partitions().len()).map(|i| t.row(i)).collect();
        let result = json!({
            "n": t.n(),
            "partitions": t.partitions(),
            "classes": t.classes(),
            "values": values,
        });
        let mut pretty_header = header.clone();
        pretty_header[0] = "λ \\ ρ".into();
        Report { config, result, ok: true, header, pretty: table(&pretty_header, &rows), rows }
    }

    pub fn dims(config: RunConfig, dims: Vec<(Partition, u64)>) -> Report {
        let sum: u128 = dims.iter().map(|(_, d)| (*d as u128) * (*d as u128)).sum();
        let rows: Vec<Vec<String>> = dims.iter().map(|(p, d)| vec![p.to_string(), d.to_string()]).collect();
        let header = strings(["partition", "dim"]);
        let mut pretty = table(&header, &rows);
        pretty += &format!("sum of squares: {sum}\n");
        let result = json!({
            "rows": dims.iter().map(|(p, d)| json!({ "partition": p, "dim": d })).collect::<Vec<_>>(),
            "sum_squares": sum.to_string(),
        });
        Report { config, result, ok: true, header, rows, pretty }
    }

    pub fn scalar(config: RunConfig, title: String, value: Value, text: String) -> Report {
        Report {
            config,
            result: json!({ "value": value }),
            ok: true,
            header: strings(["value"]),
            rows: vec![vec![text.clone()]],
            pretty: format!("{title} = {text}\n"),
        }
    }
}
