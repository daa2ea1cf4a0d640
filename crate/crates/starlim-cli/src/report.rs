//! Report types and renderers for the command line surface.
//!
//! Everything written to stdout is a pure function of the parsed inputs, so
//! json, csv and text reports are byte-reproducible across runs and across
//! thread counts.  Wall-clock timings are carried on the report structs for
//! the commands to print on stderr; they never enter a rendered report.

use std::collections::BTreeMap;

use serde::Serialize;
use starlim::{format_rational, to_f64, Route, Scalar, SuiteOutcome, WeightVector};

/// Exact rational in wire form: decimal strings, never floats.
#[derive(Debug, Clone, Serialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

impl From<&Scalar> for RationalJson {
    fn from(x: &Scalar) -> Self {
        RationalJson {
            num: x.numer().to_string(),
            den: x.denom().to_string(),
        }
    }
}

fn weights_json(w: &WeightVector) -> Vec<RationalJson> {
    w.weights().iter().map(RationalJson::from).collect()
}

fn weights_line(w: &WeightVector) -> String {
    let parts: Vec<String> = w.weights().iter().map(format_rational).collect();
    parts.join(",")
}

/// Render a table with left-aligned columns padded to the widest cell.
fn render_table(header: Vec<String>, rows: Vec<Vec<String>>) -> String {
    let columns = header.len();
    let mut widths: Vec<usize> = header.iter().map(String::len).collect();
    for row in &rows {
        for (c, cell) in row.iter().enumerate() {
            widths[c] = widths[c].max(cell.len());
        }
    }
    let mut out = String::new();
    let mut emit = |cells: &[String]| {
        let mut line = String::new();
        for (c, cell) in cells.iter().enumerate() {
            if c > 0 {
                line.push_str("  ");
            }
            line.push_str(cell);
            if c + 1 < columns {
                for _ in cell.len()..widths[c] {
                    line.push(' ');
                }
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    };
    emit(&header);
    for row in &rows {
        emit(row);
    }
    out
}

fn csv_line(cells: &[String]) -> String {
    let mut line = cells.join(",");
    line.push('\n');
    line
}

/// Route values for one moment order, with per-route wall time.
#[derive(Debug, Clone)]
pub struct MomentRow {
    pub k: usize,
    pub values: Vec<(Route, Scalar)>,
    pub elapsed_ms: Vec<(Route, u128)>,
    pub agree: bool,
}

/// Result of the `moments` command before rendering.
#[derive(Debug, Clone)]
pub struct MomentReport {
    pub weights: WeightVector,
    pub rows: Vec<MomentRow>,
}

#[derive(Serialize)]
struct MomentRowJson {
    k: usize,
    routes: BTreeMap<String, RationalJson>,
    agree: bool,
    approx: f64,
}

#[derive(Serialize)]
struct MomentReportJson {
    weights: Vec<RationalJson>,
    moments: Vec<MomentRowJson>,
}

impl MomentReport {
    pub fn all_agree(&self) -> bool {
        self.rows.iter().all(|row| row.agree)
    }

    fn routes(&self) -> Vec<Route> {
        self.rows
            .first()
            .map(|row| row.values.iter().map(|(r, _)| *r).collect())
            .unwrap_or_default()
    }

    pub fn to_text(&self) -> String {
        let routes = self.routes();
        let mut header = vec!["k".to_string()];
        header.extend(routes.iter().map(|r| r.to_string()));
        header.push("agree".to_string());
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut cells = vec![row.k.to_string()];
                cells.extend(row.values.iter().map(|(_, v)| format_rational(v)));
                cells.push(if row.agree { "yes" } else { "NO" }.to_string());
                cells
            })
            .collect();
        let mut out = format!("weights {}\n", weights_line(&self.weights));
        out.push_str(&render_table(header, rows));
        out
    }

    pub fn to_csv(&self) -> String {
        let routes = self.routes();
        let mut header = vec!["k".to_string()];
        header.extend(routes.iter().map(|r| r.to_string()));
        header.push("agree".to_string());
        let mut out = csv_line(&header);
        for row in &self.rows {
            let mut cells = vec![row.k.to_string()];
            cells.extend(row.values.iter().map(|(_, v)| format_rational(v)));
            cells.push(row.agree.to_string());
            out.push_str(&csv_line(&cells));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let moments = self
            .rows
            .iter()
            .map(|row| MomentRowJson {
                k: row.k,
                routes: row
                    .values
                    .iter()
                    .map(|(r, v)| (r.to_string(), RationalJson::from(v)))
                    .collect(),
                agree: row.agree,
                approx: to_f64(&row.values[0].1),
            })
            .collect();
        let doc = MomentReportJson {
            weights: weights_json(&self.weights),
            moments,
        };
        let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
        text.push('\n');
        text
    }

    /// Timing summary for stderr, one line per order.
    pub fn timing_lines(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let parts: Vec<String> = row
                .elapsed_ms
                .iter()
                .map(|(r, ms)| format!("{r} {ms}ms"))
                .collect();
            out.push_str(&format!("# k={}: {}\n", row.k, parts.join("  ")));
        }
        out
    }
}

/// One row of the `converge` table: exact finite-n moment against the limit.
#[derive(Debug, Clone)]
pub struct ConvergeRow {
    pub n: u64,
    pub moment: Scalar,
    pub gap: Scalar,
}

#[derive(Debug, Clone)]
pub struct ConvergeReport {
    pub weights: WeightVector,
    pub k: usize,
    pub limit: Scalar,
    pub rows: Vec<ConvergeRow>,
}

#[derive(Serialize)]
struct ConvergeRowJson {
    n: u64,
    moment: RationalJson,
    gap: RationalJson,
    moment_approx: f64,
    gap_approx: f64,
}

#[derive(Serialize)]
struct ConvergeReportJson {
    weights: Vec<RationalJson>,
    k: usize,
    limit: RationalJson,
    rows: Vec<ConvergeRowJson>,
}

fn approx(x: &Scalar) -> String {
    format!("{:.9}", to_f64(x))
}

impl ConvergeReport {
    pub fn to_text(&self) -> String {
        let header = ["n", "moment", "gap", "moment~", "gap~"]
            .map(String::from)
            .to_vec();
        let rows = self
            .rows
            .iter()
            .map(|row| {
                vec![
                    row.n.to_string(),
                    format_rational(&row.moment),
                    format_rational(&row.gap),
                    approx(&row.moment),
                    approx(&row.gap),
                ]
            })
            .collect();
        let mut out = format!(
            "weights {}  k {}  limit {} ({})\n",
            weights_line(&self.weights),
            self.k,
            format_rational(&self.limit),
            approx(&self.limit),
        );
        out.push_str(&render_table(header, rows));
        out
    }

    pub fn to_csv(&self) -> String {
        let header = ["n", "moment", "gap", "moment_approx", "gap_approx"]
            .map(String::from)
            .to_vec();
        let mut out = csv_line(&header);
        for row in &self.rows {
            out.push_str(&csv_line(&[
                row.n.to_string(),
                format_rational(&row.moment),
                format_rational(&row.gap),
                approx(&row.moment),
                approx(&row.gap),
            ]));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows = self
            .rows
            .iter()
            .map(|row| ConvergeRowJson {
                n: row.n,
                moment: RationalJson::from(&row.moment),
                gap: RationalJson::from(&row.gap),
                moment_approx: to_f64(&row.moment),
                gap_approx: to_f64(&row.gap),
            })
            .collect();
        let doc = ConvergeReportJson {
            weights: weights_json(&self.weights),
            k: self.k,
            limit: RationalJson::from(&self.limit),
            rows,
        };
        let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
        text.push('\n');
        text
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub weights: WeightVector,
    pub suites: Vec<SuiteOutcome>,
}

#[derive(Serialize)]
struct SuiteJson {
    name: String,
    passed: bool,
    detail: String,
}

#[derive(Serialize)]
struct VerifyReportJson {
    weights: Vec<RationalJson>,
    suites: Vec<SuiteJson>,
    passed: bool,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for suite in &self.suites {
            let tag = if suite.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{tag} {}: {}\n", suite.name, suite.detail));
        }
        let summary = if self.all_passed() { "all passed" } else { "FAILURES" };
        out.push_str(&format!(
            "{} of {} suites passed ({summary})\n",
            self.suites.iter().filter(|s| s.passed).count(),
            self.suites.len(),
        ));
        out
    }

    pub fn to_csv(&self) -> String {
        let header = ["suite", "passed", "detail"].map(String::from).to_vec();
        let mut out = csv_line(&header);
        for suite in &self.suites {
            // details stay comma-free by construction; quote defensively anyway
            let detail = if suite.detail.contains(',') {
                format!("\"{}\"", suite.detail.replace('"', "\"\""))
            } else {
                suite.detail.clone()
            };
            out.push_str(&csv_line(&[
                suite.name.clone(),
                suite.passed.to_string(),
                detail,
            ]));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let doc = VerifyReportJson {
            weights: weights_json(&self.weights),
            suites: self
                .suites
                .iter()
                .map(|s| SuiteJson {
                    name: s.name.clone(),
                    passed: s.passed,
                    detail: s.detail.clone(),
                })
                .collect(),
            passed: self.all_passed(),
        };
        let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
        text.push('\n');
        text
    }
}
