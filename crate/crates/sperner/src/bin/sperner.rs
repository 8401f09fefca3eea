//! Batch CLI over the library: subdivision, cross-proof verification, and
//! the Brouwer fixed-point solver. Reports are JSON (or JSON lines) on
//! stdout or `--out`; human-readable summaries go to stderr.
//!
//! Exit codes: 0 success, 1 verification or tolerance failure, 2 usage
//! error, 3 resource cap exceeded.

use std::fs::File;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use sperner::complex::ComplexError;
use sperner::solver::{map_from_spec, solve_with_search, Search, SolveFailure, SolverError};
use sperner::subdivision::{self, Scheme};
use sperner::verify::{exhaustive_sperner_labelings, random_sperner_labeling, triple_check};
use sperner::EmbeddedComplex;

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(name = "sperner", version, about = "Sperner labelings, mod-2 proof machinery, and a Brouwer fixed-point solver")]
struct Cli {
    /// Worker threads for corpus runs (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, ValueEnum)]
enum SchemeArg {
    Barycentric,
    Edgewise,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Scheme {
        match s {
            SchemeArg::Barycentric => Scheme::Barycentric,
            SchemeArg::Edgewise => Scheme::Edgewise,
        }
    }
}

#[derive(Args)]
struct SubdivisionArgs {
    /// Dimension n of the standard simplex.
    #[arg(long)]
    dim: usize,
    #[arg(long, value_enum, default_value = "barycentric")]
    scheme: SchemeArg,
    /// Barycentric depth (also accepted for edgewise: m = 2^depth).
    #[arg(long, conflicts_with = "m")]
    depth: Option<u32>,
    /// Edgewise fineness parameter.
    #[arg(long)]
    m: Option<u32>,
}

impl SubdivisionArgs {
    fn build(&self) -> Result<EmbeddedComplex, ComplexError> {
        let cap = subdivision::top_simplex_cap();
        match (Scheme::from(self.scheme), self.depth, self.m) {
            (Scheme::Edgewise, _, Some(m)) => {
                let needed = (m as u128).pow(self.dim as u32);
                if needed > cap as u128 {
                    return Err(ComplexError::ResourceCap(needed as usize, cap));
                }
                subdivision::edgewise_subdivide(self.dim, m)
            }
            (scheme, depth, None) => {
                subdivision::subdivision_sequence(self.dim, scheme, depth.unwrap_or(0), 1, cap)
            }
            (Scheme::Barycentric, _, Some(_)) => {
                Err(ComplexError::Parse("--m applies only to --scheme edgewise".into()))
            }
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Subdivide the standard simplex and emit the complex as JSON.
    Subdivide {
        #[command(flatten)]
        subdivision: SubdivisionArgs,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<String>,
    },
    /// Run the three-proof consistency check over random (or all) Sperner
    /// labelings; one JSON line per labeling.
    Verify {
        #[command(flatten)]
        subdivision: SubdivisionArgs,
        /// Number of random labelings.
        #[arg(long, default_value_t = 100)]
        labelings: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Enumerate every valid labeling instead of sampling.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long)]
        out: Option<String>,
    },
    /// Approximate a fixed point of a registry map by Sperner refinement.
    Solve {
        #[arg(long)]
        dim: usize,
        /// Registry spec: identity | constant:<c1,...> | rotate | quadratic:<seed>
        #[arg(long)]
        map: String,
        /// Residual tolerance (max norm).
        #[arg(long)]
        tol: f64,
        #[arg(long, default_value_t = 24)]
        max_level: usize,
        #[arg(long, value_enum, default_value = "edgewise")]
        scheme: SchemeArg,
        /// Fully-labeled simplex search strategy.
        #[arg(long, value_enum, default_value = "path")]
        search: SearchArg,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum SearchArg {
    Path,
    Brute,
}

fn out_writer(out: &Option<String>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn exit_for_complex_error(e: &ComplexError) -> u8 {
    match e {
        ComplexError::ResourceCap(..) => EXIT_RESOURCE,
        _ => EXIT_USAGE,
    }
}

fn run_subdivide(subdivision: &SubdivisionArgs, out: &Option<String>) -> u8 {
    let complex = match subdivision.build() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_for_complex_error(&e);
        }
    };
    let mut w = match out_writer(out) {
        Ok(w) => w,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    if let Err(e) = writeln!(w, "{}", complex.to_json()) {
        eprintln!("error: {e}");
        return EXIT_FAILURE;
    }
    eprintln!(
        "dim {}: {} top simplices, max diameter {:.6}",
        complex.dim(),
        complex.top_simplices().len(),
        complex.max_diameter()
    );
    0
}

fn verify_line(seed: Option<u64>, labeling: &sperner::labeling::Labeling<'_>) -> (bool, String) {
    match triple_check(labeling) {
        Ok(r) => {
            let line = serde_json::json!({
                "seed": seed,
                "e": r.e, "f": r.f, "g": r.g, "h": r.h,
                "census_parity": r.census_parity,
                "chain_parity": r.chain_parity,
                "degree_parity": r.degree_parity,
                "cancellations": r.cancellations,
                "agree": r.agree,
            });
            (r.agree, line.to_string())
        }
        Err(e) => (
            false,
            serde_json::json!({ "seed": seed, "agree": false, "error": e.to_string() })
                .to_string(),
        ),
    }
}

fn run_verify(
    subdivision: &SubdivisionArgs,
    labelings: usize,
    seed: u64,
    exhaustive: bool,
    out: &Option<String>,
) -> u8 {
    if subdivision.dim == 0 {
        // Sperner's Lemma is trivially true for n = 0: the single vertex
        // must be labeled 1 and is itself the fully labeled simplex.
        println!("{}", serde_json::json!({"dim": 0, "trivial": true, "agree": true}));
        eprintln!("dim 0: trivially true");
        return 0;
    }
    let complex = match subdivision.build() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_for_complex_error(&e);
        }
    };
    let mut w = match out_writer(out) {
        Ok(w) => w,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };

    let results: Vec<(Option<u64>, bool, String)> = if exhaustive {
        let iter = exhaustive_sperner_labelings(&complex);
        if iter.total() > 1_000_000 {
            eprintln!("error: {} labelings exceed the exhaustive cap", iter.total());
            return EXIT_RESOURCE;
        }
        iter.map(|l| {
            let (ok, line) = verify_line(None, &l);
            (None, ok, line)
        })
        .collect()
    } else {
        (0..labelings as u64)
            .into_par_iter()
            .map(|i| {
                let s = seed.wrapping_add(i);
                match random_sperner_labeling(&complex, s) {
                    Ok(l) => {
                        let (ok, line) = verify_line(Some(s), &l);
                        (Some(s), ok, line)
                    }
                    Err(e) => (
                        Some(s),
                        false,
                        serde_json::json!({"seed": s, "agree": false, "error": e.to_string()})
                            .to_string(),
                    ),
                }
            })
            .collect()
    };

    let mut disagreements = 0usize;
    let mut first_bad: Option<Option<u64>> = None;
    for (s, ok, line) in &results {
        if writeln!(w, "{line}").is_err() {
            return EXIT_FAILURE;
        }
        if !ok {
            disagreements += 1;
            first_bad.get_or_insert(*s);
        }
    }
    eprintln!(
        "{} labelings checked, {} disagreements",
        results.len(),
        disagreements
    );
    if disagreements > 0 {
        if let Some(Some(s)) = first_bad {
            eprintln!("first failing seed: {s}");
        }
        return EXIT_FAILURE;
    }
    0
}

fn run_solve(
    dim: usize,
    map: &str,
    tol: f64,
    max_level: usize,
    scheme: SchemeArg,
    search: SearchArg,
    out: &Option<String>,
) -> u8 {
    if tol <= 0.0 {
        eprintln!("error: --tol must be positive");
        return EXIT_USAGE;
    }
    let f = match map_from_spec(map, dim) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let strategy = match search {
        SearchArg::Path => Search::PathFollow,
        SearchArg::Brute => Search::BruteForce,
    };
    let result = solve_with_search(&f, tol, scheme.into(), max_level, strategy);
    let (code, report) = match result {
        Ok(apx) => (0u8, apx.report_json()),
        Err(SolveFailure::ToleranceNotMet { best }) => {
            eprintln!(
                "tolerance not met: best residual {} at level {}",
                best.residual, best.level
            );
            let mut r = best.report_json();
            r["tolerance_met"] = serde_json::json!(false);
            (EXIT_FAILURE, r)
        }
        Err(SolveFailure::Error(SolverError::ResourceCap { level, needed, cap })) => {
            eprintln!("resource cap: level {level} needs {needed} simplices (cap {cap})");
            return EXIT_RESOURCE;
        }
        Err(SolveFailure::Error(e)) => {
            eprintln!("error: {e}");
            return EXIT_FAILURE;
        }
    };
    let mut w = match out_writer(out) {
        Ok(w) => w,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    if writeln!(w, "{report}").is_err() {
        return EXIT_FAILURE;
    }
    code
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let code = match &cli.command {
        Command::Subdivide { subdivision, out } => run_subdivide(subdivision, out),
        Command::Verify {
            subdivision,
            labelings,
            seed,
            exhaustive,
            out,
        } => run_verify(subdivision, *labelings, *seed, *exhaustive, out),
        Command::Solve {
            dim,
            map,
            tol,
            max_level,
            scheme,
            search,
            out,
        } => run_solve(*dim, map, *tol, *max_level, *scheme, *search, out),
    };
    ExitCode::from(code)
}
