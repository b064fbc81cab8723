//! `exotica` command-line front end.
//!
//! Exit codes: 0 on success, 1 on a domain error, 2 on a usage error. With
//! `--json` every command writes exactly one compact JSON document with
//! sorted keys to standard output, errors included as `{"error": ...}`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use exotica_core::ledger::elliptic_surface;
use exotica_core::mcg::{canonical_factorization, classify_fibers, evaluate, parse_word};
use exotica_core::pipeline::{
    build, distinctness_certificate, geography, optimize, ConstructionRecipe,
};
use exotica_core::plumbing::{chain_for, intersection_matrix, verify_chain};
use serde_json::{json, Value};

mod table;

use table::{grid, pairs};

#[derive(Debug, Parser)]
#[command(
    name = "exotica",
    version,
    about = "Exact invariants of exotic 4-manifold constructions"
)]
struct Cli {
    /// Emit one JSON document instead of text tables.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Monodromy factorization of E(n) with its singular fiber census.
    Fibration { n: u32 },
    /// Evaluate a Dehn-twist word in SL(2, Z) and classify its blocks.
    VerifyWord { word: String },
    /// The linear plumbing C_{p,q}: continued fraction of p^2/(pq-1) and checks.
    Cfrac { p: u64, q: u64 },
    /// Seiberg-Witten function of a known manifold.
    Sw {
        #[command(subcommand)]
        target: SwTarget,
    },
    /// Replay a construction recipe.
    Build {
        #[arg(short = 'f', long = "file")]
        file: PathBuf,
    },
    /// The feasible recipe maximizing c1^2 at chi_h = n.
    Optimize { n: u32 },
    /// Witnesses for every c1^2 from the floor up to the maximum.
    Geography {
        n: u32,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        floor: i64,
    },
    /// Rebuild a recipe for several twist knots and compare the results.
    Certify {
        #[arg(short = 'f', long = "file")]
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<u64>,
    },
}

#[derive(Debug, Subcommand)]
enum SwTarget {
    /// The elliptic surface E(n).
    En { n: u32 },
}

/// A command's output in both modes.
struct Report {
    json: Value,
    text: String,
}

type Outcome = Result<Report, String>;

/// Parses `args` (program name first), runs the command and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    2
                }
            };
        }
    };
    let outcome = dispatch(&cli.command);
    let written = match (&outcome, cli.json) {
        (Ok(report), true) => writeln!(out, "{}", canonical(&report.json)),
        (Ok(report), false) => write!(out, "{}", report.text),
        (Err(msg), true) => writeln!(out, "{}", canonical(&json!({ "error": msg }))),
        (Err(msg), false) => writeln!(err, "error: {msg}"),
    };
    match (outcome, written) {
        (Ok(_), Ok(())) => 0,
        _ => 1,
    }
}

/// Compact JSON with keys in sorted order; parsing and re-serializing the
/// output reproduces it byte for byte.
pub fn canonical(value: &Value) -> String {
    value.to_string()
}

fn dispatch(command: &Command) -> Outcome {
    match command {
        Command::Fibration { n } => fibration(*n),
        Command::VerifyWord { word } => verify_word(word),
        Command::Cfrac { p, q } => cfrac(*p, *q),
        Command::Sw {
            target: SwTarget::En { n },
        } => sw_en(*n),
        Command::Build { file } => build_cmd(file),
        Command::Optimize { n } => optimize_cmd(*n),
        Command::Geography { n, floor } => geography_cmd(*n, *floor),
        Command::Certify { file, r } => certify(file, r),
    }
}

fn fail(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn fibration(n: u32) -> Outcome {
    let (word, census) = canonical_factorization(n).map_err(fail)?;
    let identity = evaluate(&word).is_identity();
    let classified = classify_fibers(&word).map_err(fail)?;
    let json = json!({
        "n": n,
        "word": word.to_string(),
        "census": census,
        "twist_count": census.twist_count(),
        "identity": identity,
        "census_reclassified": classified == census,
    });
    let necklace = census
        .necklace
        .map_or("-".to_string(), |k| format!("I_{k}"));
    let text = pairs(&[
        ("n", n.to_string()),
        ("word", word.to_string()),
        ("necklace", necklace),
        ("I_2 fibers", census.i2_count.to_string()),
        ("fishtails", census.fishtail_count.to_string()),
        ("twists", census.twist_count().to_string()),
        ("identity", identity.to_string()),
    ]);
    Ok(Report { json, text })
}

fn verify_word(text: &str) -> Outcome {
    let word = parse_word(text).map_err(fail)?;
    let matrix = evaluate(&word);
    let census = classify_fibers(&word);
    let census_json = match &census {
        Ok(c) => serde_json::to_value(c).map_err(fail)?,
        Err(_) => Value::Null,
    };
    let json = json!({
        "word": word.to_string(),
        "length": word.len(),
        "matrix": matrix,
        "identity": matrix.is_identity(),
        "census": census_json,
    });
    let census_text = match census {
        Ok(c) => format!(
            "{} necklace(s), {} I_2, {} fishtail(s), {} twists",
            u64::from(c.necklace.is_some()) + c.other_necklaces.len() as u64,
            c.i2_count,
            c.fishtail_count,
            c.twist_count()
        ),
        Err(e) => format!("unclassified ({e})"),
    };
    let text = pairs(&[
        ("word", word.to_string()),
        ("length", word.len().to_string()),
        ("matrix", matrix.to_string()),
        ("identity", matrix.is_identity().to_string()),
        ("census", census_text),
    ]);
    Ok(Report { json, text })
}

fn cfrac(p: u64, q: u64) -> Outcome {
    let chain = chain_for(p, q).map_err(fail)?;
    let report = verify_chain(&chain);
    let minors: Vec<String> = intersection_matrix(&chain)
        .leading_minors()
        .iter()
        .map(ToString::to_string)
        .collect();
    let json = json!({
        "p": p,
        "q": q,
        "coefficients": chain.coefficients,
        "length": chain.len(),
        "boundary": chain.boundary,
        "leading_minors": minors,
        "report": report,
    });
    let coefficients: Vec<String> = chain.coefficients.iter().map(ToString::to_string).collect();
    let text = pairs(&[
        ("chain", format!("C_{{{p},{q}}}")),
        ("coefficients", format!("[{}]", coefficients.join(", "))),
        ("length", chain.len().to_string()),
        (
            "boundary",
            format!("L({}, {})", chain.boundary.order, chain.boundary.twist),
        ),
        ("determinant", report.determinant.clone()),
        ("recomposes", report.recomposition.to_string()),
        ("negative definite", report.negative_definite.to_string()),
        ("|det| = p^2", report.determinant_matches.to_string()),
    ]);
    Ok(Report { json, text })
}

fn sw_en(n: u32) -> Outcome {
    let m = elliptic_surface(n).map_err(fail)?;
    let sw = m.sw_expanded().map_err(fail)?;
    let classes: Vec<Value> = m
        .basic_classes()
        .map_err(fail)?
        .into_iter()
        .map(|(c, v)| json!({"class": c, "value": v.to_string()}))
        .collect();
    let json = json!({
        "n": n,
        "sw": sw,
        "text": sw.to_string(),
        "basic_classes": classes,
    });
    Ok(Report {
        json,
        text: format!("{sw}\n"),
    })
}

fn read_recipe(path: &Path) -> Result<ConstructionRecipe, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    ConstructionRecipe::from_json(&text).map_err(fail)
}

fn build_cmd(path: &Path) -> Outcome {
    let recipe = read_recipe(path)?;
    let res = build(&recipe).map_err(fail)?;
    let json = res.to_json().map_err(fail)?;
    let mut text = pairs(&[
        ("recipe", serde_json::to_string(&recipe).map_err(fail)?),
        ("e", res.state.euler().to_string()),
        ("sigma", res.state.signature().to_string()),
        ("b2+", res.state.b2_plus().to_string()),
        ("chi_h", res.chi_h.to_string()),
        ("c1^2", res.c1sq.to_string()),
        ("simply connected", res.state.simply_connected().to_string()),
        ("top value", res.top_value_abs.to_string()),
        ("verdict", res.verdict.to_string()),
        (
            "certificate",
            if res.certificate.all_pass() {
                "pass"
            } else {
                "FAIL"
            }
            .to_string(),
        ),
    ]);
    let rows: Vec<Vec<String>> = res
        .top_classes
        .iter()
        .map(|(c, v)| vec![c.to_string(), v.to_string()])
        .collect();
    text.push('\n');
    text.push_str(&grid(&["top class", "value"], &rows));
    Ok(Report { json, text })
}

fn optimize_cmd(n: u32) -> Outcome {
    let res = optimize(n).map_err(fail)?;
    let json = json!({
        "n": n,
        "chi_h": res.chi_h,
        "c1sq": res.c1sq,
        "recipe": res.recipe,
        "top_value": res.top_value_abs.to_string(),
        "verdict": res.verdict,
    });
    let text = pairs(&[
        ("chi_h", res.chi_h.to_string()),
        ("c1^2", res.c1sq.to_string()),
        ("s", res.recipe.s.to_string()),
        ("fishtail", res.recipe.fishtail.to_string()),
        ("chain", format!("C_{}", res.recipe.chain_p())),
        ("top value", res.top_value_abs.to_string()),
        ("verdict", res.verdict.to_string()),
    ]);
    Ok(Report { json, text })
}

fn geography_cmd(n: u32, floor: i64) -> Outcome {
    let points = geography(n, floor).map_err(fail)?;
    let json = json!({"n": n, "floor": floor, "points": points});
    let rows: Vec<Vec<String>> = points
        .iter()
        .map(|p| {
            vec![
                p.chi_h.to_string(),
                p.c1sq.to_string(),
                p.recipe.s.to_string(),
                p.recipe.fishtail.to_string(),
                p.recipe.extra_blowups.to_string(),
                p.verified.to_string(),
                p.sw_nonzero.to_string(),
            ]
        })
        .collect();
    let text = grid(
        &[
            "chi_h", "c1^2", "s", "fishtail", "extra", "verified", "sw != 0",
        ],
        &rows,
    );
    Ok(Report { json, text })
}

fn certify(path: &Path, r_values: &[u64]) -> Outcome {
    let recipe = read_recipe(path)?;
    let cert = distinctness_certificate(&recipe, r_values).map_err(fail)?;
    let mut json = serde_json::to_value(&cert).map_err(fail)?;
    json["holds"] = Value::Bool(cert.holds());
    let rows: Vec<Vec<String>> = cert
        .entries
        .iter()
        .map(|e| {
            vec![
                e.r.to_string(),
                e.top_value.clone(),
                e.e.to_string(),
                e.sigma.to_string(),
                e.b2plus.to_string(),
                e.simply_connected.to_string(),
                e.verdict.to_string(),
            ]
        })
        .collect();
    let mut text = grid(
        &["r", "top value", "e", "sigma", "b2+", "pi1 = 1", "verdict"],
        &rows,
    );
    text.push('\n');
    text.push_str(&pairs(&[
        ("pairwise distinct", cert.pairwise_distinct.to_string()),
        ("same fingerprint", cert.same_fingerprint.to_string()),
        ("all nonsymplectic", cert.all_nonsymplectic.to_string()),
    ]));
    Ok(Report { json, text })
}
