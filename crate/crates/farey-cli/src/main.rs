//! Command-line driver: experiment orchestration, CSV/JSON emission,
//! and reproduction recipes for the gap-distribution curves and tables.
//!
//! Exit codes: 0 success, 1 internal failure, 2 usage error.

mod checks;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use farey::analytic::{curve_a, curve_a_k, curve_ftilde};
use farey::bcz::{omega_area, word_region};
use farey::empirical::{gap_cdf, ks_distance, pair_count_k, threshold_count};
use farey::fraction::{count, enumerate, FareyFilter};
use farey::geometry::{rat_to_f64, Rat};
use farey::runs::certify_l;
use farey::words::{curve_fd, enumerate_words, residue_set};
use num::BigInt;
use output::{emit, Format};
use serde_json::json;

#[derive(Parser)]
#[command(name = "farey", version, about = "Farey gap-distribution experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the (filtered) Farey fractions of order Q in increasing order.
    Enumerate(EnumerateArgs),
    /// Count the (filtered) Farey fractions of order Q, or with --xi the
    /// consecutive pairs with gap <= xi/Q^2.
    Count(CountArgs),
    /// Compare the empirical normalized-gap CDF against the limit law.
    Gaps(GapsArgs),
    /// Tabulate an analytic curve (A, A_K, Ftilde_l or F_d) on a grid.
    Analytic(AnalyticArgs),
    /// Count consecutive pairs with a given determinant in the
    /// denominator-coprime set.
    Pairs(PairsArgs),
    /// Search coprimality runs and report the empirical maximum with
    /// the applicable proven bound.
    Runs(RunsArgs),
    /// List the admissible words of a given continuant with their
    /// region areas and residue multiplicities.
    Regions(RegionsArgs),
    /// Run the invariant suites (conjugacy, inclusions, identity32, areas).
    Check(checks::CheckArgs),
}

#[derive(clap::Args)]
struct EnumerateArgs {
    #[arg(long = "Q")]
    q: i64,
    /// Keep only fractions whose numerator is not divisible by this.
    #[arg(long)]
    ell: Option<i64>,
    /// Keep only fractions whose denominator is coprime to this.
    #[arg(long)]
    d: Option<i64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(clap::Args)]
struct CountArgs {
    #[arg(long = "Q")]
    q: i64,
    #[arg(long)]
    ell: Option<i64>,
    #[arg(long)]
    d: Option<i64>,
    /// Exact rational gap threshold (e.g. `7/2`): count consecutive
    /// pairs with gap <= xi/Q^2 instead of set cardinality.
    #[arg(long)]
    xi: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(clap::Args)]
struct GapsArgs {
    #[arg(long = "Q")]
    q: i64,
    #[arg(long)]
    ell: Option<i64>,
    #[arg(long)]
    d: Option<i64>,
    /// Evaluation grid `min:max:steps` over normalized gap values.
    #[arg(long, default_value = "0:5:500")]
    grid: String,
    /// Force binned CDF storage with this many bins (memory-bounded mode).
    #[arg(long)]
    bins: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(clap::Args)]
struct AnalyticArgs {
    /// Tabulate Ftilde_ell (numerator-filtered limit law).
    #[arg(long)]
    ell: Option<i64>,
    /// Tabulate F_d (denominator-coprime limit law).
    #[arg(long)]
    d: Option<i64>,
    /// Tabulate A_K (single-cylinder area); default without flags is A.
    #[arg(long)]
    k: Option<i64>,
    #[arg(long, default_value = "0:30:300")]
    grid: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(clap::Args)]
struct PairsArgs {
    #[arg(long = "Q")]
    q: i64,
    #[arg(long)]
    d: i64,
    /// Determinant of the consecutive pair.
    #[arg(long)]
    k: i64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(clap::Args)]
struct RunsArgs {
    #[arg(long)]
    d: i64,
    /// Largest Q of the exhaustive run search.
    #[arg(long = "Qmax", default_value_t = 300)]
    q_max: i64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(clap::Args)]
struct RegionsArgs {
    /// Farey continuant of the words to list.
    #[arg(long)]
    k: i64,
    /// Gap index l; words have length l - 1.
    #[arg(long, default_value_t = 3)]
    ell: i64,
    /// Attach residue multiplicities mod this d.
    #[arg(long)]
    d: Option<i64>,
    /// Exact rational xi: report Area(Omega(xi)) instead of the
    /// saturated region area.
    #[arg(long)]
    xi: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

/// Usage problems exit with 2, internal failures with 1.
enum CliError {
    Usage(String),
    Internal(String),
}

impl From<farey::FareyError> for CliError {
    fn from(e: farey::FareyError) -> Self {
        CliError::Internal(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(format!("io error: {e}"))
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads();
    let result = match cli.command {
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::Count(a) => cmd_count(a),
        Command::Gaps(a) => cmd_gaps(a),
        Command::Analytic(a) => cmd_analytic(a),
        Command::Pairs(a) => cmd_pairs(a),
        Command::Runs(a) => cmd_runs(a),
        Command::Regions(a) => cmd_regions(a),
        Command::Check(a) => checks::cmd_check(a),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

/// FAREY_THREADS caps the rayon pool used for grid evaluation.
fn init_threads() {
    if let Ok(v) = std::env::var("FAREY_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        } else {
            eprintln!("warning: ignoring unparsable FAREY_THREADS={v}");
        }
    }
}

/// Builds the element filter from the mutually exclusive --ell / --d.
fn parse_filter(ell: Option<i64>, d: Option<i64>) -> Result<FareyFilter, CliError> {
    match (ell, d) {
        (Some(_), Some(_)) => Err(usage("--ell and --d are mutually exclusive")),
        (Some(l), None) => {
            FareyFilter::numerator_not_divisible(l).map_err(|e| usage(e.to_string()))
        }
        (None, Some(d)) => FareyFilter::denominator_coprime(d).map_err(|e| usage(e.to_string())),
        (None, None) => Ok(FareyFilter::All),
    }
}

fn filter_label(ell: Option<i64>, d: Option<i64>) -> String {
    match (ell, d) {
        (Some(l), _) => format!("ell={l}"),
        (_, Some(d)) => format!("d={d}"),
        _ => "all".into(),
    }
}

/// `min:max:steps` -> the `steps` grid points min + i (max-min)/steps,
/// i = 1..=steps (the left endpoint is excluded).
fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [min, max, steps] = parts.as_slice() else {
        return Err(usage(format!("grid must be min:max:steps, got `{spec}`")));
    };
    let min: f64 = min
        .parse()
        .map_err(|_| usage(format!("bad grid min `{min}`")))?;
    let max: f64 = max
        .parse()
        .map_err(|_| usage(format!("bad grid max `{max}`")))?;
    let steps: usize = steps
        .parse()
        .map_err(|_| usage(format!("bad grid steps `{steps}`")))?;
    if !(min < max) || steps == 0 {
        return Err(usage("grid needs min < max and steps >= 1"));
    }
    Ok((1..=steps)
        .map(|i| min + i as f64 * (max - min) / steps as f64)
        .collect())
}

/// Exact rational like `7/2`, `10`, or `0.5` is not accepted: thresholds
/// stay exact end to end.
fn parse_rational(s: &str) -> Result<Rat, CliError> {
    let make = |n: i64, d: i64| -> Result<Rat, CliError> {
        if d <= 0 {
            return Err(usage(format!("denominator must be positive in `{s}`")));
        }
        Ok(Rat::new(BigInt::from(n), BigInt::from(d)))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let n = n
                .parse()
                .map_err(|_| usage(format!("bad numerator in `{s}`")))?;
            let d = d
                .parse()
                .map_err(|_| usage(format!("bad denominator in `{s}`")))?;
            make(n, d)
        }
        None => {
            let n = s
                .parse()
                .map_err(|_| usage(format!("xi must be an integer or n/d rational, got `{s}`")))?;
            make(n, 1)
        }
    }
}

fn cmd_enumerate(a: EnumerateArgs) -> Result<ExitCode, CliError> {
    let filter = parse_filter(a.ell, a.d)?;
    let fractions: Vec<_> = enumerate(a.q, filter)?.collect();
    let csv = {
        let mut s = String::from("a,q,value\n");
        for f in &fractions {
            s.push_str(&format!("{},{},{}\n", f.numerator(), f.denominator(), f.value()));
        }
        s
    };
    let jsonv = json!({
        "Q": a.q,
        "filter": filter_label(a.ell, a.d),
        "count": fractions.len(),
        "fractions": fractions
            .iter()
            .map(|f| json!([f.numerator(), f.denominator()]))
            .collect::<Vec<_>>(),
    });
    emit(a.format, a.out.as_deref(), &csv, &jsonv)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_count(a: CountArgs) -> Result<ExitCode, CliError> {
    let filter = parse_filter(a.ell, a.d)?;
    let (kind, n) = match &a.xi {
        None => ("elements", count(a.q, filter)?),
        Some(xi) => {
            let xi = parse_rational(xi)?;
            ("pairs_below_threshold", threshold_count(a.q, filter, &xi)?)
        }
    };
    let jsonv = json!({
        "Q": a.q,
        "filter": filter_label(a.ell, a.d),
        "xi": a.xi,
        "kind": kind,
        "count": n,
    });
    let csv = format!("Q,filter,xi,kind,count\n{},{},{},{kind},{n}\n",
        a.q,
        filter_label(a.ell, a.d),
        a.xi.as_deref().unwrap_or(""));
    emit(a.format, a.out.as_deref(), &csv, &jsonv)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_gaps(a: GapsArgs) -> Result<ExitCode, CliError> {
    use rayon::prelude::*;
    let filter = parse_filter(a.ell, a.d)?;
    let grid = parse_grid(&a.grid)?;
    let mut cdf = gap_cdf(a.q, filter)?;
    if let Some(bins) = a.bins {
        cdf = cdf.into_binned(bins)?;
    }
    // The limit law of the unfiltered sequence is the d = 1 case.
    let curve = match (a.ell, a.d) {
        (Some(l), _) => curve_ftilde(l)?,
        (_, Some(d)) => curve_fd(d)?,
        _ => curve_fd(1)?,
    };
    let ks = ks_distance(&cdf, &curve);
    let rows: Vec<(f64, f64, f64)> = grid
        .par_iter()
        .map(|&s| (s, cdf.eval(s), curve.eval(s)))
        .collect();
    let mut csv = String::from("s,empirical,analytic,diff\n");
    for &(s, emp, ana) in &rows {
        csv.push_str(&format!("{s},{emp},{ana},{}\n", emp - ana));
    }
    let summary = json!({
        "Q": a.q,
        "filter": filter_label(a.ell, a.d),
        "n_gaps": cdf.n(),
        "ks": ks,
        "grid": a.grid,
    });
    match a.format {
        Format::Csv => {
            // CSV is the artifact; the summary goes wherever the CSV
            // does not, so piped output stays schema-clean.
            output::write_artifact(a.out.as_deref(), &csv)?;
            let summary_text = serde_json::to_string_pretty(&summary).unwrap();
            if a.out.is_some() {
                println!("{summary_text}");
            } else {
                eprintln!("{summary_text}");
            }
        }
        Format::Json => {
            let mut doc = summary;
            doc["rows"] = rows
                .iter()
                .map(|&(s, emp, ana)| json!([s, emp, ana, emp - ana]))
                .collect::<Vec<_>>()
                .into();
            output::write_artifact(
                a.out.as_deref(),
                &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()),
            )?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_analytic(a: AnalyticArgs) -> Result<ExitCode, CliError> {
    use rayon::prelude::*;
    let grid = parse_grid(&a.grid)?;
    let flags = [a.ell.is_some(), a.d.is_some(), a.k.is_some()]
        .iter()
        .filter(|&&b| b)
        .count();
    if flags > 1 {
        return Err(usage("--ell, --d and --k are mutually exclusive"));
    }
    let (name, curve) = match (a.ell, a.d, a.k) {
        (Some(l), _, _) => (format!("Ftilde_{l}"), curve_ftilde(l)?),
        (_, Some(d), _) => (format!("F_{d}"), curve_fd(d)?),
        (_, _, Some(k)) => (format!("A_{k}"), curve_a_k(k)?),
        _ => ("A".to_string(), curve_a()),
    };
    let rows: Vec<(f64, f64)> = grid.par_iter().map(|&x| (x, curve.eval(x))).collect();
    let mut csv = String::from("x,value\n");
    for &(x, v) in &rows {
        csv.push_str(&format!("{x},{v}\n"));
    }
    let jsonv = json!({
        "curve": name,
        "grid": a.grid,
        "rows": rows.iter().map(|&(x, v)| json!([x, v])).collect::<Vec<_>>(),
    });
    emit(a.format, a.out.as_deref(), &csv, &jsonv)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_pairs(a: PairsArgs) -> Result<ExitCode, CliError> {
    if a.k < 1 {
        return Err(usage(format!("--k must be >= 1, got {}", a.k)));
    }
    let pc = pair_count_k(a.q, a.d, a.k)?;
    let scaled = pc.count as f64 / (a.q as f64 * a.q as f64);
    let jsonv = json!({
        "Q": pc.q_max,
        "d": pc.d,
        "k": pc.k,
        "count": pc.count,
        "scaled": scaled,
    });
    let csv = format!("Q,d,k,count,scaled\n{},{},{},{},{scaled}\n", pc.q_max, pc.d, pc.k, pc.count);
    emit(a.format, a.out.as_deref(), &csv, &jsonv)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_runs(a: RunsArgs) -> Result<ExitCode, CliError> {
    if a.d < 2 {
        return Err(usage(format!("--d must be >= 2, got {}", a.d)));
    }
    if a.q_max < 1 {
        return Err(usage(format!("--Qmax must be >= 1, got {}", a.q_max)));
    }
    let cert = certify_l(a.d, a.q_max)?;
    let jsonv = json!({
        "empirical_max": cert.empirical_max,
        "attaining_Q": cert.attaining_q,
        "proven_bound": cert.proven_bound,
        "bound_source": cert.bound_source.label(),
    });
    let csv = format!(
        "d,Qmax,empirical_max,attaining_Q,proven_bound,bound_source\n{},{},{},{},{},{}\n",
        cert.d,
        cert.q_limit,
        cert.empirical_max,
        cert.attaining_q,
        cert.proven_bound,
        cert.bound_source.label()
    );
    emit(a.format, a.out.as_deref(), &csv, &jsonv)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_regions(a: RegionsArgs) -> Result<ExitCode, CliError> {
    if a.k < 1 || a.ell < 2 {
        return Err(usage("need --k >= 1 and --ell >= 2"));
    }
    let xi = a.xi.as_deref().map(parse_rational).transpose()?;
    let words = enumerate_words(a.k, a.ell)?;
    let mut rows = Vec::new();
    for w in &words {
        let (poly, _m) = word_region(w)?;
        let area = match &xi {
            Some(x) => omega_area(w, a.k, rat_to_f64(x))?,
            None => rat_to_f64(&poly.area()),
        };
        let mult = match a.d {
            Some(d) => Some(residue_set(d, w)?.len()),
            None => None,
        };
        let verts: Vec<_> = poly
            .vertices()
            .iter()
            .map(|p| {
                let (x, y) = p.to_f64();
                json!([x, y])
            })
            .collect();
        rows.push((w.letters().to_vec(), area, mult, verts));
    }
    let mut csv = String::from("word,k,ell,area,mult\n");
    for (word, area, mult, _) in &rows {
        let word_s: Vec<String> = word.iter().map(|x| x.to_string()).collect();
        let mult_s = mult.map(|m| m.to_string()).unwrap_or_default();
        csv.push_str(&format!("{},{},{},{area},{mult_s}\n", word_s.join(":"), a.k, a.ell));
    }
    let jsonv = json!({
        "k": a.k,
        "ell": a.ell,
        "d": a.d,
        "xi": a.xi,
        "words": rows
            .iter()
            .map(|(word, area, mult, verts)| json!({
                "word": word,
                "area": area,
                "mult": mult,
                "vertices": verts,
            }))
            .collect::<Vec<_>>(),
    });
    emit(a.format, a.out.as_deref(), &csv, &jsonv)?;
    Ok(ExitCode::SUCCESS)
}
