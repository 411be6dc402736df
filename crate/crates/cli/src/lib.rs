//! Batch command-line front end for `malcev-core`.
//!
//! [`run_command`] takes the argument vector and returns the exit code with
//! the captured output, so the binary and the tests share one code path.

pub mod report;
pub mod search;
pub mod table;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use malcev_core::identities::{check_identity, Counterexample, Identity};
use malcev_core::nilpotence::{self, default_cap};
use malcev_core::terms::{self, JacobianMode};
use malcev_core::{Algebra, FieldSpec, FiltrationChain, MagmaTerm, Subspace};

use crate::search::SearchParams;
use crate::table::{parse_combination, parse_field, parse_table, print_table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable overriding the default filtration cap.
pub const MAX_CHAIN_ENV: &str = "MALCEV_MAX_CHAIN";

/// Tables shipped with the binary, addressable by file name when no such file exists.
pub const BUNDLED: &[(&str, &str)] = &[
    ("example_malcev4.tbl", include_str!("../tables/example_malcev4.tbl")),
    ("heisenberg.tbl", include_str!("../tables/heisenberg.tbl")),
    ("filiform4.tbl", include_str!("../tables/filiform4.tbl")),
    ("sl2.tbl", include_str!("../tables/sl2.tbl")),
    ("gl2.tbl", include_str!("../tables/gl2.tbl")),
    ("matrix_units2.tbl", include_str!("../tables/matrix_units2.tbl")),
    ("octonions.tbl", include_str!("../tables/octonions.tbl")),
    ("octonion_traceless.tbl", include_str!("../tables/octonion_traceless.tbl")),
    ("nil_malcev5a.tbl", include_str!("../tables/nil_malcev5a.tbl")),
    ("nil_malcev5b.tbl", include_str!("../tables/nil_malcev5b.tbl")),
];

/// Exit code and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn usage(message: impl Into<String>) -> Self {
        let mut stderr = message.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Outcome { code: EXIT_USAGE, stdout: String::new(), stderr }
    }
}

#[derive(Parser, Debug)]
#[command(name = "malcev", version, about = "Exact computations in Malcev algebras given by structure constants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CheckKind {
    Anticomm,
    Malcev,
    Lie,
    Id1,
    Id2,
    Id3,
    Id4,
    Id5,
}

impl CheckKind {
    fn identity(self) -> Identity {
        match self {
            CheckKind::Anticomm => Identity::Anticommutative,
            CheckKind::Lie => Identity::Jacobi,
            CheckKind::Malcev | CheckKind::Id4 => Identity::Id4,
            CheckKind::Id1 => Identity::Id1,
            CheckKind::Id2 => Identity::Id2,
            CheckKind::Id3 => Identity::Id3,
            CheckKind::Id5 => Identity::Id5,
        }
    }

    fn title(self) -> &'static str {
        match self {
            CheckKind::Anticomm => "ANTICOMMUTATIVE",
            CheckKind::Malcev => "MALCEV",
            CheckKind::Lie => "LIE",
            CheckKind::Id1 => "ID1",
            CheckKind::Id2 => "ID2",
            CheckKind::Id3 => "ID3",
            CheckKind::Id4 => "ID4",
            CheckKind::Id5 => "ID5",
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PowerKind {
    Right,
    Left,
    Assoc,
    Strong,
    Bk,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReportKind {
    Nilpotence,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RewriteKind {
    RightNormed,
    Normal,
    Psom,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check an identity on all basis tuples.
    Check { which: CheckKind, table: String },
    /// Span of J(X,Y,Z) for subspaces given as `full`, `zero` or `span:...`.
    JacobianSpan {
        table: String,
        #[arg(long, default_value = "full")]
        x: String,
        #[arg(long, default_value = "full")]
        y: String,
        #[arg(long, default_value = "full")]
        z: String,
    },
    /// Print a power filtration of an ideal.
    Powers {
        kind: PowerKind,
        table: String,
        #[arg(long, default_value = "full")]
        ideal: String,
        /// Number of terms to compute.
        #[arg(long)]
        max: Option<usize>,
    },
    /// Nilpotence indices, the 4n^2-2n+1 bound and consistency checks.
    Report {
        kind: ReportKind,
        table: String,
        #[arg(long, default_value = "full")]
        ideal: String,
        #[arg(long)]
        json: bool,
    },
    /// First k with (B_k)^k = 0, or `never`.
    JkNil {
        table: String,
        #[arg(long, default_value = "full")]
        ideal: String,
    },
    /// Rewrite a term; `psom` takes a right product Q0 and a left product P0.
    Rewrite {
        kind: RewriteKind,
        term: String,
        second: Option<String>,
        /// Keep Jacobian terms instead of collapsing them into right products.
        #[arg(long)]
        keep_jacobians: bool,
    },
    /// Evaluate a term under `--set symbol=combination` assignments.
    Eval {
        table: String,
        term: String,
        #[arg(long = "set", value_name = "SYMBOL=COMBINATION")]
        set: Vec<String>,
    },
    /// Random sparse anticommutative tables filtered by the Malcev identity.
    SearchMalcev {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        field: String,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Table of the commutator algebra xy - yx.
    Minus { table: String },
}

/// Runs one invocation, reading the cap override from the environment.
pub fn run_command<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match std::env::var(MAX_CHAIN_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => run_with_cap(argv, Some(n)),
            _ => Outcome::usage(format!("{MAX_CHAIN_ENV} must be a positive integer, got `{v}`")),
        },
        Err(_) => run_with_cap(argv, None),
    }
}

/// Runs one invocation with an explicit cap override.
pub fn run_with_cap<I, S>(argv: I, max_chain: Option<usize>) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() { Outcome::usage(text) } else { Outcome::ok(text) };
        }
    };
    match dispatch(cli.command, max_chain) {
        Ok(o) => o,
        Err(message) => Outcome::usage(message),
    }
}

/// Reads `name` from disk, falling back to a bundled table of that name.
pub fn load_table(name: &str) -> Result<Algebra, String> {
    let text = if Path::new(name).exists() {
        std::fs::read_to_string(name).map_err(|e| format!("{name}: {e}"))?
    } else {
        let file = Path::new(name).file_name().and_then(|f| f.to_str()).unwrap_or(name);
        let key = if file.ends_with(".tbl") { file.to_string() } else { format!("{file}.tbl") };
        BUNDLED
            .iter()
            .find(|(n, _)| *n == key)
            .map(|(_, t)| t.to_string())
            .ok_or_else(|| format!("{name}: no such file or bundled table"))?
    };
    parse_table(&text).map_err(|e| format!("{name}: {e}"))
}

/// Parses `full`, `zero` or `span:c1,c2,...` into a subspace of `a`.
pub fn parse_subspace<'a>(spec: &str, a: &'a Algebra) -> Result<Subspace<'a>, String> {
    match spec {
        "full" => Ok(Subspace::full(a)),
        "zero" => Ok(Subspace::zero(a)),
        _ => {
            let body = spec
                .strip_prefix("span:")
                .ok_or_else(|| format!("subspace `{spec}`: expected full, zero or span:<combinations>"))?;
            let mut vs = Vec::new();
            for part in body.split(',') {
                let v = parse_combination(part, a.labels(), a.field())
                    .map_err(|e| format!("subspace `{spec}`, `{part}`: column {}: {}", e.column, e.message))?;
                vs.push(v);
            }
            Subspace::span(a, vs).map_err(|e| e.to_string())
        }
    }
}

/// Like [`parse_subspace`], replacing a non-ideal by its ideal closure and returning a warning.
fn parse_ideal<'a>(spec: &str, a: &'a Algebra) -> Result<(Subspace<'a>, Option<String>), String> {
    let s = parse_subspace(spec, a)?;
    if s.is_ideal() {
        Ok((s, None))
    } else {
        let c = s.ideal_closure();
        let w = format!("warning: {} is not an ideal; using its ideal closure {}\n", s.display(), c.display());
        Ok((c, Some(w)))
    }
}

fn describe_counterexample(a: &Algebra, c: &Counterexample) -> String {
    let l = a.labels();
    let args = match c.identity {
        Identity::Id1 | Identity::Id2 | Identity::Id3 => {
            let [i, j, k, m] = [c.indices[0], c.indices[1], c.indices[2], c.indices[3]];
            let x = if i == j { l[i].clone() } else { format!("{} + {}", l[i], l[j]) };
            format!("x = {x}, y = {}, z = {}", l[k], l[m])
        }
        _ => c.indices.iter().map(|&i| l[i].as_str()).collect::<Vec<_>>().join(", "),
    };
    format!(
        "witness: {} at ({args}): lhs = {}, rhs = {}\n",
        c.identity,
        c.lhs.display_with(l),
        c.rhs.display_with(l)
    )
}

fn render_chain(title: &str, symbol: &str, chain: &FiltrationChain<'_>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{title}");
    for (i, t) in chain.terms.iter().enumerate() {
        let _ = writeln!(out, "{symbol}{} = {}", chain.start + i, t.display());
    }
    let _ = writeln!(out, "stabilized: {}", if chain.stabilized { "yes" } else { "no" });
    let _ = writeln!(out, "outcome: {}", chain.outcome());
    out
}

fn parse_assignment(a: &Algebra, items: &[String]) -> Result<BTreeMap<String, malcev_core::Element>, String> {
    let mut map = BTreeMap::new();
    for item in items {
        let (sym, combo) = item.split_once('=').ok_or_else(|| format!("assignment `{item}`: expected symbol=combination"))?;
        let v = parse_combination(combo, a.labels(), a.field())
            .map_err(|e| format!("assignment `{item}`: column {}: {}", e.column, e.message))?;
        if map.insert(sym.trim().to_string(), v).is_some() {
            return Err(format!("assignment `{item}`: symbol assigned twice"));
        }
    }
    Ok(map)
}

fn dispatch(command: Command, max_chain: Option<usize>) -> Result<Outcome, String> {
    match command {
        Command::Check { which, table } => {
            let a = load_table(&table)?;
            let w = check_identity(&a, which.identity());
            let mut out = format!("{}: {}\n", which.title(), if w.verdict { "yes" } else { "no" });
            if let Some(c) = &w.counterexample {
                out.push_str(&describe_counterexample(&a, c));
            }
            let code = if w.verdict { EXIT_OK } else { EXIT_CHECK_FAILED };
            Ok(Outcome { code, stdout: out, stderr: String::new() })
        }
        Command::JacobianSpan { table, x, y, z } => {
            let a = load_table(&table)?;
            let (x, y, z) = (parse_subspace(&x, &a)?, parse_subspace(&y, &a)?, parse_subspace(&z, &a)?);
            let j = x.jacobian_span(&y, &z).map_err(|e| e.to_string())?;
            Ok(Outcome::ok(format!("J(X,Y,Z) = {}\ndim: {}\n", j.display(), j.dim())))
        }
        Command::Powers { kind, table, ideal, max } => {
            let a = load_table(&table)?;
            let (b, warning) = parse_ideal(&ideal, &a)?;
            let cap = max.or(max_chain).unwrap_or_else(|| default_cap(&a));
            let (title, symbol, chain) = match kind {
                PowerKind::Right => ("right powers", "B^", nilpotence::right_powers(&b, cap)),
                PowerKind::Left => ("left powers", "B^", nilpotence::left_powers(&b, cap)),
                PowerKind::Assoc => ("assoc powers", "B^", nilpotence::assoc_powers(&b, cap)),
                PowerKind::Strong => {
                    ("strong powers", "B^", nilpotence::strong_powers(&b, cap).map_err(|e| e.to_string())?)
                }
                PowerKind::Bk => ("B_k chain", "B_", nilpotence::bk_chain(&b, cap).map_err(|e| e.to_string())?),
            };
            let title = format!("{title} of {}", b.display());
            Ok(Outcome { code: EXIT_OK, stdout: render_chain(&title, symbol, &chain), stderr: warning.unwrap_or_default() })
        }
        Command::Report { kind: ReportKind::Nilpotence, table, ideal, json } => {
            let a = load_table(&table)?;
            let (b, warning) = parse_ideal(&ideal, &a)?;
            let cap = max_chain.unwrap_or_else(|| default_cap(&a));
            let mut stderr = warning.unwrap_or_default();
            match nilpotence::nilpotence_report_with_cap(&b, cap) {
                Ok(r) => {
                    let stdout = if json { report::render_json(&r) } else { report::render_text(&r) };
                    let code = if r.all_checks_passed() { EXIT_OK } else { EXIT_CHECK_FAILED };
                    Ok(Outcome { code, stdout, stderr })
                }
                Err(e) => {
                    let _ = writeln!(stderr, "{e}");
                    Ok(Outcome { code: EXIT_CHECK_FAILED, stdout: String::new(), stderr })
                }
            }
        }
        Command::JkNil { table, ideal } => {
            let a = load_table(&table)?;
            let (b, warning) = parse_ideal(&ideal, &a)?;
            let cap = max_chain.unwrap_or_else(|| default_cap(&a));
            let n = nilpotence::jk_nil_index(&b, cap).map_err(|e| e.to_string())?;
            Ok(Outcome { code: EXIT_OK, stdout: format!("jk_nil_index: {n}\n"), stderr: warning.unwrap_or_default() })
        }
        Command::Rewrite { kind, term, second, keep_jacobians } => {
            let t = terms::parse_term(&term).map_err(|e| e.to_string())?;
            let combo = match kind {
                RewriteKind::Psom => {
                    let p = second.ok_or("psom needs two terms: Q0 (right product) and P0 (left product)")?;
                    let p = terms::parse_term(&p).map_err(|e| e.to_string())?;
                    terms::psom_expand(&t, &p)
                }
                _ if second.is_some() => return Err(String::from("this rewrite takes a single term")),
                RewriteKind::RightNormed => {
                    let mode = if keep_jacobians { JacobianMode::Keep } else { JacobianMode::Collapse };
                    terms::to_right_normed_with(&t, mode)
                }
                RewriteKind::Normal => terms::to_normal_products(&t),
            }
            .map_err(|e| e.to_string())?;
            Ok(Outcome::ok(format!("{combo}\n")))
        }
        Command::Eval { table, term, set } => {
            let a = load_table(&table)?;
            let t: MagmaTerm = terms::parse_term(&term).map_err(|e| e.to_string())?;
            let assignment = parse_assignment(&a, &set)?;
            let v = terms::evaluate(&t, &assignment, &a).map_err(|e| e.to_string())?;
            Ok(Outcome::ok(format!("{}\n", v.display_with(a.labels()))))
        }
        Command::SearchMalcev { dim, field, trials, seed } => {
            if dim == 0 {
                return Err(String::from("--dim must be at least 1"));
            }
            let field: FieldSpec = parse_field(&field)?;
            let params = SearchParams { dim, field, trials, seed };
            let hits = search::search_malcev(params);
            Ok(Outcome::ok(search::render_hits(params, &hits)))
        }
        Command::Minus { table } => {
            let a = load_table(&table)?;
            Ok(Outcome::ok(print_table(&a.minus_algebra())))
        }
    }
}
