//! Command line front end for the exact limit-moment engine.
//!
//! Three subcommands: `moments` tabulates the limit moments along the chosen
//! routes and checks bit-for-bit agreement, `verify` runs the identity and
//! oracle suites, `converge` compares exact finite-n moments of the
//! normalized star sum with the limit values.
//!
//! Exit codes: 0 success, 2 invalid input, 3 verification failure,
//! 4 request exceeds a feasibility guard.

pub mod report;

use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use starlim::algebra::rat;
use starlim::{
    s_n_moment, verify, MomentEngine, Route, WeightVector, ENUM_CAP, MAX_MOMENT_ORDER,
};

use report::{ConvergeReport, ConvergeRow, MomentReport, MomentRow, VerifyReport};

pub const EXIT_OK: i32 = 0;
/// Input failed to parse or violated a documented precondition.
pub const EXIT_INVALID_INPUT: i32 = 2;
/// A verification suite failed or the routes disagreed.
pub const EXIT_VERIFICATION_FAILED: i32 = 3;
/// The request is well formed but exceeds a feasibility guard.
pub const EXIT_INFEASIBLE: i32 = 4;

/// Convergence tables stay within the exhaustively tested range.
const CONVERGE_MAX_K: usize = 8;
const CONVERGE_MAX_N: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "starlim",
    version,
    about = "Exact moments of the star-transposition central limit law",
    long_about = "Computes moments of the limit distribution of normalized \
                  star-transposition sums under a fixed Thoma weight vector, \
                  by several independent combinatorial routes, in exact \
                  rational arithmetic.  All stdout reports are byte-for-byte \
                  reproducible across runs and thread counts."
)]
pub struct Cli {
    /// Worker threads; 0 picks the rayon default. Output bytes never depend
    /// on this.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    /// Partition enumeration guard; may be lowered below the built-in cap,
    /// never raised.
    #[arg(long, global = true, default_value_t = ENUM_CAP)]
    pub enum_cap: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate limit moments for k = 0..=max-order and check that the
    /// selected routes agree bit for bit.
    Moments {
        /// Comma separated positive rationals summing to 1, e.g. 1/2,1/3,1/6
        #[arg(long)]
        weights: String,

        /// Largest moment order to compute
        #[arg(long, default_value_t = 8)]
        max_order: usize,

        /// Subset of the routes A,B,C,D (pairing sum, signed block sum,
        /// coloured pairing sum, matrix model)
        #[arg(long, default_value = "A,B,C,D")]
        routes: String,

        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },

    /// Run the verification suites and report pass/fail per suite.
    Verify {
        /// Comma separated positive rationals summing to 1
        #[arg(long)]
        weights: String,

        /// Depth knob: the largest moment order the suites explore.
        /// Individual suites clamp to their own feasible ranges.
        #[arg(long, default_value_t = 8)]
        max_order: usize,

        /// Also check the matrix model against the classical GUE moment
        /// recursion at this dimension; requires uniform weights
        #[arg(long)]
        gue: bool,

        /// Seed for the randomized invariance suites
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,

        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },

    /// Exact finite-n moments of the normalized star sum against the limit.
    Converge {
        /// Comma separated positive rationals summing to 1
        #[arg(long)]
        weights: String,

        /// Moment order; must be even (odd moments carry a 1/√n factor)
        /// and at most 8
        #[arg(long)]
        k: usize,

        /// Comma separated list of n values, each at most 1000000
        #[arg(long, default_value = "8,16,32,64,128")]
        n: String,

        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

pub fn run(cli: Cli) -> i32 {
    if cli.enum_cap > ENUM_CAP {
        eprintln!(
            "error: --enum-cap {} would raise the built-in guard {}; it can only lower it",
            cli.enum_cap, ENUM_CAP
        );
        return EXIT_INVALID_INPUT;
    }
    if cli.threads > 0 {
        // ignore the error if a pool already exists (only possible in tests)
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    match cli.command {
        Command::Moments {
            weights,
            max_order,
            routes,
            format,
        } => cmd_moments(&weights, max_order, &routes, format, cli.enum_cap),
        Command::Verify {
            weights,
            max_order,
            gue,
            seed,
            format,
        } => cmd_verify(&weights, max_order, gue, seed, format, cli.enum_cap),
        Command::Converge {
            weights,
            k,
            n,
            format,
        } => cmd_converge(&weights, k, &n, format, cli.enum_cap),
    }
}

fn parse_weights(text: &str) -> Result<WeightVector, i32> {
    WeightVector::parse(text).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_INVALID_INPUT
    })
}

/// Parse a route subset like "A,C" and return it in canonical A,B,C,D order.
fn parse_routes(text: &str) -> Result<Vec<Route>, String> {
    let mut selected = [false; 4];
    for part in text.split(',') {
        let route: Route = part.parse()?;
        selected[route as usize] = true;
    }
    let routes: Vec<Route> = Route::ALL
        .iter()
        .copied()
        .filter(|r| selected[*r as usize])
        .collect();
    if routes.is_empty() {
        return Err("route list is empty".to_string());
    }
    Ok(routes)
}

fn parse_n_list(text: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let n: usize = part
            .trim()
            .parse()
            .map_err(|_| format!("bad n value {:?}", part.trim()))?;
        if n == 0 {
            return Err("n must be at least 1".to_string());
        }
        out.push(n);
    }
    if out.is_empty() {
        return Err("n list is empty".to_string());
    }
    Ok(out)
}

fn cmd_moments(
    weights: &str,
    max_order: usize,
    routes: &str,
    format: Format,
    enum_cap: usize,
) -> i32 {
    let w = match parse_weights(weights) {
        Ok(w) => w,
        Err(code) => return code,
    };
    let routes = match parse_routes(routes) {
        Ok(r) => r,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_INVALID_INPUT;
        }
    };
    let cap = MAX_MOMENT_ORDER.min(enum_cap);
    if max_order > cap {
        eprintln!("error: max order {max_order} exceeds the feasible cap {cap}");
        return EXIT_INFEASIBLE;
    }

    // orders are independent, so evaluate them in parallel; the collect
    // keeps rows in k order, making the report independent of scheduling
    let rows: Result<Vec<MomentRow>, String> = (0..=max_order)
        .into_par_iter()
        .map(|k| {
            let engine = MomentEngine::new(w.clone());
            let mut values = Vec::new();
            let mut elapsed_ms = Vec::new();
            for &route in &routes {
                let start = Instant::now();
                let value = engine.moment(route, k).map_err(|e| e.to_string())?;
                elapsed_ms.push((route, start.elapsed().as_millis()));
                values.push((route, value));
            }
            let agree = values.windows(2).all(|pair| pair[0].1 == pair[1].1);
            Ok(MomentRow {
                k,
                values,
                elapsed_ms,
                agree,
            })
        })
        .collect();
    let rows = match rows {
        Ok(rows) => rows,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_INFEASIBLE;
        }
    };

    let report = MomentReport { weights: w, rows };
    eprint!("{}", report.timing_lines());
    let rendered = match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    print!("{rendered}");
    if report.all_agree() {
        EXIT_OK
    } else {
        eprintln!("error: routes disagree");
        EXIT_VERIFICATION_FAILED
    }
}

fn cmd_verify(
    weights: &str,
    max_order: usize,
    gue: bool,
    seed: u64,
    format: Format,
    enum_cap: usize,
) -> i32 {
    let w = match parse_weights(weights) {
        Ok(w) => w,
        Err(code) => return code,
    };
    let cap = MAX_MOMENT_ORDER.min(enum_cap);
    if max_order > cap {
        eprintln!("error: max order {max_order} exceeds the feasible cap {cap}");
        return EXIT_INFEASIBLE;
    }
    if gue && !w.is_uniform() {
        eprintln!("error: --gue compares against a d x d matrix model, which needs uniform weights 1/d,...,1/d");
        return EXIT_INVALID_INPUT;
    }

    let engine = MomentEngine::new(w.clone());
    let depth = max_order;
    let ccr_params = [
        (rat(1, 3), rat(1, 2)),
        (rat(2, 5), rat(1, 5)),
        (rat(1, 2), rat(1, 2)),
    ];
    let start = Instant::now();
    let mut suites = vec![
        verify::singleton_vanishing(&engine, depth.min(6)),
        verify::orbit_correspondence(depth),
        verify::noncrossing_identity(&engine, depth),
        verify::chi_tau_variants(&engine, depth.min(7)),
        verify::ccr_wick_oracle(&ccr_params, depth.min(8)),
        verify::route_agreement(&engine, depth.min(10)),
        verify::moment_bound(&engine, depth),
        verify::hankel_positivity(&engine, 4),
        verify::convolution(&[2, 3], depth.min(8)),
        verify::fresh_choice_invariance(&w, seed, 80),
        verify::entry_factorization(&w, seed, 80),
    ];
    if gue {
        suites.push(verify::convolution(&[w.d()], depth.min(8)));
    }
    eprintln!("# suites finished in {} ms", start.elapsed().as_millis());

    let report = VerifyReport { weights: w, suites };
    let rendered = match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    print!("{rendered}");
    if report.all_passed() {
        EXIT_OK
    } else {
        EXIT_VERIFICATION_FAILED
    }
}

fn cmd_converge(weights: &str, k: usize, n_text: &str, format: Format, enum_cap: usize) -> i32 {
    let w = match parse_weights(weights) {
        Ok(w) => w,
        Err(code) => return code,
    };
    if k % 2 != 0 {
        eprintln!("error: k must be even; odd moments of s_n carry a 1/sqrt(n) factor");
        return EXIT_INVALID_INPUT;
    }
    let cap = CONVERGE_MAX_K.min(enum_cap);
    if k > cap {
        eprintln!("error: order {k} exceeds the feasible cap {cap}");
        return EXIT_INFEASIBLE;
    }
    let ns = match parse_n_list(n_text) {
        Ok(ns) => ns,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_INVALID_INPUT;
        }
    };
    if let Some(big) = ns.iter().find(|&&n| n > CONVERGE_MAX_N) {
        eprintln!("error: n = {big} exceeds the cap {CONVERGE_MAX_N}");
        return EXIT_INFEASIBLE;
    }

    let engine = MomentEngine::new(w.clone());
    let limit = engine
        .moment(Route::B, k)
        .expect("order was validated against the caps");
    let rows: Vec<ConvergeRow> = ns
        .iter()
        .map(|&n| {
            let moment = s_n_moment(&engine, n, k)
                .expect("order and n were validated against the caps")
                .exact()
                .expect("even orders are exact rationals")
                .clone();
            let gap = if moment <= limit {
                limit.clone() - moment.clone()
            } else {
                moment.clone() - limit.clone()
            };
            ConvergeRow {
                n: n as u64,
                moment,
                gap,
            }
        })
        .collect();

    let report = ConvergeReport {
        weights: w,
        k,
        limit,
        rows,
    };
    let rendered = match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    print!("{rendered}");
    EXIT_OK
}
