//! Command-line front end. Exit codes: 0 success, 1 analysis error
//! (undecided, dependent, window too short, violated check), 2 usage or
//! parse error. Error messages start with `module::operation:`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::cf::rational_to_f64;
use crate::corpus;
use crate::perm::{sweep, AnalysisConfig, Member, PermError, TupleContext};
use crate::plot::{plot_files, PlotOptions};
use crate::proof::{verify_with_retries, Status, DEFAULT_RETRIES};
use crate::psi::{build_trajectory_with, fmt_rational};
use crate::spec_file::parse_spec;
use crate::structure::{
    available_depth, check_remark_pattern, scan_coincidences, scan_lemma_mm, RemarkStatus, Verdict,
};

const LEMMA_MM_MAX_INDEX: usize = 25;
const LEMMA_MM_MAX_D: usize = 4;
const REMARK_DEPTH: usize = 30;
const SCREEN_DEPTH: usize = 48;

#[derive(Parser, Debug)]
#[command(name = "irrmeasure", version, about = "Irrationality measure functions of tuples of irrational numbers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Tuple specification file.
    spec: Option<PathBuf>,
    #[arg(long)]
    t_max: Option<u64>,
    #[arg(long)]
    burn_in: Option<u64>,
    #[arg(long)]
    depth_cap: Option<usize>,
    #[arg(long)]
    max_compare_depth: Option<usize>,
    /// Generate a random screened tuple instead of reading a spec file.
    #[arg(long)]
    seed: Option<u64>,
    /// Tuple size for --seed.
    #[arg(long, default_value_t = 2)]
    members: usize,
    /// Append decimal approximations to exact values.
    #[arg(long)]
    approx: bool,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Convergents p/q and star values of every member.
    Convergents {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Breakpoints of each psi step function up to t_max.
    Psi {
        #[command(flatten)]
        common: Common,
    },
    /// Permutation events over the analysis window.
    Trace {
        #[command(flatten)]
        common: Common,
    },
    /// Screening verdicts and the permutation census.
    Kindex {
        #[command(flatten)]
        common: Common,
    },
    /// Coincidence logs, Lemma MM scans and remark records per pair.
    Verify {
        #[command(flatten)]
        common: Common,
    },
    /// The T_j / I_j / n_j trace and bound checks.
    ProofTrace {
        #[command(flatten)]
        common: Common,
    },
    /// SVG plots of the step functions.
    Plot {
        #[command(flatten)]
        common: Common,
        /// Linear axes instead of log-log.
        #[arg(long)]
        linear: bool,
    },
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn usage(origin: &str, e: impl std::fmt::Display) -> Failure {
    Failure {
        code: 2,
        message: format!("{origin}: {e}"),
    }
}

fn analysis(origin: &str, e: impl std::fmt::Display) -> Failure {
    Failure {
        code: 1,
        message: format!("{origin}: {e}"),
    }
}

fn perm_failure(origin: &str, e: PermError) -> Failure {
    analysis(origin, e)
}

struct Loaded {
    members: Vec<Member>,
    config: AnalysisConfig,
    out_dir: Option<PathBuf>,
}

fn load(common: &Common) -> Result<Loaded, Failure> {
    let (members, mut config, mut out_dir) = match (&common.spec, common.seed) {
        (Some(_), Some(_)) => return Err(usage("cli_app::run_command", "give either a spec file or --seed, not both")),
        (None, None) => return Err(usage("cli_app::run_command", "a spec file or --seed is required")),
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage("cli_app::parse_spec", format!("{}: {e}", path.display())))?;
            let spec = parse_spec(&text).map_err(|e| usage("cli_app::parse_spec", e))?;
            let members = spec
                .members(common.depth_cap)
                .map_err(|e| usage("cli_app::parse_spec", e))?;
            (members, spec.config(), spec.settings.out_dir.map(PathBuf::from))
        }
        (None, Some(seed)) => {
            if common.members < 2 {
                return Err(usage("cli_app::run_command", "--members must be at least 2"));
            }
            let mut members = corpus::random_tuple(&mut corpus::rng(seed), common.members);
            if let Some(cap) = common.depth_cap {
                for m in &mut members {
                    m.cf = m.cf.clone().with_depth_cap(cap);
                }
            }
            (members, AnalysisConfig::default(), None)
        }
    };
    if let Some(t) = common.t_max {
        config.t_max = t;
    }
    if common.burn_in.is_some() {
        config.burn_in = common.burn_in;
    }
    if let Some(d) = common.max_compare_depth {
        config.max_compare_depth = d;
    }
    if common.out_dir.is_some() {
        out_dir = common.out_dir.clone();
    }
    if config.t_max == 0 {
        return Err(usage("cli_app::run_command", "--t-max must be positive"));
    }
    if members.is_empty() {
        return Err(usage("cli_app::parse_spec", "the spec file defines no numbers"));
    }
    Ok(Loaded {
        members,
        config,
        out_dir,
    })
}

fn context(loaded: &Loaded) -> Result<TupleContext, Failure> {
    TupleContext::new(loaded.members.clone(), &loaded.config)
        .map_err(|e| perm_failure("perm_dynamics::tuple_context", e))
}

fn approx_suffix(enabled: bool, value: f64) -> String {
    if enabled {
        format!("\t~{value:.12e}")
    } else {
        String::new()
    }
}

fn cmd_convergents(loaded: &Loaded, count: usize, approx: bool) -> Result<String, Failure> {
    let mut out = String::new();
    for m in &loaded.members {
        writeln!(out, "# {} = {}", m.name, m.cf).unwrap();
        writeln!(out, "nu\tp\tq\tstar").unwrap();
        let convs = m
            .cf
            .convergents(count)
            .map_err(|e| analysis("cf_core::convergents", e))?;
        for c in convs {
            let star = if c.index == 0 {
                "-".to_string()
            } else {
                fmt_rational(&m.cf.star_value(c.index).map_err(|e| analysis("cf_core::star_value", e))?)
            };
            writeln!(
                out,
                "{}\t{}\t{}\t{}{}",
                c.index,
                c.p,
                c.q,
                star,
                approx_suffix(approx, rational_to_f64(&c.value()))
            )
            .unwrap();
        }
    }
    Ok(out)
}

fn cmd_psi(loaded: &Loaded, approx: bool) -> Result<String, Failure> {
    let mut out = String::new();
    for m in &loaded.members {
        let traj = build_trajectory_with(&m.cf, loaded.config.t_max, loaded.config.max_compare_depth)
            .map_err(|e| analysis("psi_engine::build_trajectory", e))?;
        writeln!(out, "# {} = {}", m.name, m.cf).unwrap();
        writeln!(out, "q\txi_lo\txi_hi").unwrap();
        if approx {
            for b in traj.breakpoints() {
                writeln!(
                    out,
                    "{}\t{}\t{}{}",
                    b.q,
                    fmt_rational(b.xi.lo()),
                    fmt_rational(b.xi.hi()),
                    approx_suffix(true, b.xi.approx())
                )
                .unwrap();
            }
        } else {
            out.push_str(&traj.to_records());
        }
    }
    Ok(out)
}

fn cmd_trace(loaded: &Loaded) -> Result<String, Failure> {
    let ctx = context(loaded)?;
    let report = sweep(&ctx).map_err(|e| perm_failure("perm_dynamics::sweep", e))?;
    Ok(report.to_records())
}

fn cmd_kindex(loaded: &Loaded) -> Result<String, Failure> {
    let ctx = match TupleContext::new(loaded.members.clone(), &loaded.config) {
        Ok(ctx) => ctx,
        Err(e @ PermError::Dependent(i, j)) => {
            let out = format!("screen\t{}\t{}\t{}\n", i + 1, j + 1, Verdict::Dependent);
            return Err(Failure {
                code: 1,
                message: format!("{out}perm_dynamics::tuple_context: {e}"),
            });
        }
        Err(e) => return Err(perm_failure("perm_dynamics::tuple_context", e)),
    };
    let mut out = String::new();
    for ((i, j), log) in ctx.screening() {
        writeln!(out, "screen\t{}\t{}\t{}\t{}", i + 1, j + 1, log.verdict, log.coincidence_time()).unwrap();
    }
    let report = sweep(&ctx).map_err(|e| perm_failure("perm_dynamics::sweep", e))?;
    writeln!(out, "window\t{}\t{}", report.t0, report.t_max).unwrap();
    writeln!(out, "k_hat\t{}", report.k_hat).unwrap();
    writeln!(out, "max_tau\t{}", report.max_tau).unwrap();
    for o in &report.census {
        writeln!(out, "perm\t{}\t{}\t{}\t{}", o.perm, o.first, o.last, o.visits).unwrap();
    }
    let n = ctx.len();
    let bound = report.k_hat * (report.k_hat + 1) / 2;
    let verdict = if n <= bound { "PASS" } else { "FAIL" };
    writeln!(out, "bound\t{n}\t{bound}\t{verdict}").unwrap();
    Ok(out)
}

fn cmd_verify(loaded: &Loaded) -> Result<String, Failure> {
    let members = &loaded.members;
    let depth = loaded.config.max_compare_depth;
    let mut out = String::new();
    let mut failed = Vec::new();
    let mut logs = Vec::new();
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            let (a, b) = (&members[i].cf, &members[j].cf);
            let d = available_depth(a, SCREEN_DEPTH).min(available_depth(b, SCREEN_DEPTH));
            let log = scan_coincidences(a, b, d).map_err(|e| analysis("structure_checks::scan_coincidences", e))?;
            if log.verdict == Verdict::Dependent {
                failed.push(format!("members {} and {} are dependent", i + 1, j + 1));
            }
            logs.push(((i, j), log));
        }
    }
    // Burn-in follows the tuple policy; a dependent tuple has no context.
    let burn_in = if failed.is_empty() {
        context(loaded)?.burn_in()
    } else {
        loaded.config.burn_in.unwrap_or(1)
    };
    for ((i, j), log) in logs {
        let (a, b) = (&members[i].cf, &members[j].cf);
        writeln!(out, "# pair\t{}\t{}", i + 1, j + 1).unwrap();
        out.push_str(&log.to_records());
        if log.verdict == Verdict::Dependent {
            continue;
        }
        let avail = available_depth(a, REMARK_DEPTH + 5).min(available_depth(b, REMARK_DEPTH + 5));
        let max_index = LEMMA_MM_MAX_INDEX.min(avail.saturating_sub(LEMMA_MM_MAX_D + 1));
        let scan = scan_lemma_mm(a, b, max_index, LEMMA_MM_MAX_D, depth)
            .map_err(|e| analysis("structure_checks::check_lemma_mm", e))?;
        out.push_str(&scan.to_records());
        if !scan.violations.is_empty() {
            failed.push(format!("Lemma MM violated for pair {} {}", i + 1, j + 1));
        }
        let remark_depth = REMARK_DEPTH.min(avail.saturating_sub(1));
        let records = check_remark_pattern(a, b, remark_depth, burn_in, depth)
            .map_err(|e| analysis("structure_checks::check_remark_pattern", e))?;
        for r in &records {
            writeln!(out, "{}", r.to_record()).unwrap();
            if r.status == RemarkStatus::Fails {
                failed.push(format!("remark pattern fails at t = {} for pair {} {}", r.t, i + 1, j + 1));
            }
        }
    }
    if failed.is_empty() {
        Ok(out)
    } else {
        Err(Failure {
            code: 1,
            message: format!("{out}structure_checks::verify: {}", failed.join("; ")),
        })
    }
}

fn cmd_proof_trace(loaded: &Loaded) -> Result<String, Failure> {
    let ctx = context(loaded)?;
    let v = verify_with_retries(&ctx, DEFAULT_RETRIES)
        .map_err(|e| analysis("bound_verifier::build_proof_trace", e))?;
    let text = v.to_report();
    match &v.status {
        Status::Passed => Ok(text),
        Status::WindowArtifact(why) | Status::HardFailure(why) => Err(Failure {
            code: 1,
            message: format!("{text}bound_verifier::check_theorem_bound: {}", why.join("; ")),
        }),
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, Failure> {
    std::fs::create_dir_all(dir).map_err(|e| usage("cli_app::run_command", format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| usage("cli_app::run_command", format!("{}: {e}", path.display())))?;
    Ok(path)
}

fn cmd_plot(loaded: &Loaded, linear: bool) -> Result<String, Failure> {
    let ctx = context(loaded)?;
    let opts = PlotOptions {
        log_x: !linear,
        log_y: !linear,
        ..PlotOptions::default()
    };
    let dir = loaded.out_dir.clone().unwrap_or_else(|| PathBuf::from("plots"));
    let mut out = String::new();
    for (name, svg) in plot_files(&ctx, opts) {
        let path = write_file(&dir, &name, &svg)?;
        writeln!(out, "{}", path.display()).unwrap();
    }
    Ok(out)
}

fn dispatch(command: &Command) -> Result<String, Failure> {
    let (common, name) = match command {
        Command::Convergents { common, .. } => (common, "convergents"),
        Command::Psi { common } => (common, "psi"),
        Command::Trace { common } => (common, "trace"),
        Command::Kindex { common } => (common, "kindex"),
        Command::Verify { common } => (common, "verify"),
        Command::ProofTrace { common } => (common, "proof-trace"),
        Command::Plot { common, .. } => (common, "plot"),
    };
    let loaded = load(common)?;
    let result = match command {
        Command::Convergents { count, .. } => cmd_convergents(&loaded, *count, common.approx),
        Command::Psi { .. } => cmd_psi(&loaded, common.approx),
        Command::Trace { .. } => cmd_trace(&loaded),
        Command::Kindex { .. } => cmd_kindex(&loaded),
        Command::Verify { .. } => cmd_verify(&loaded),
        Command::ProofTrace { .. } => cmd_proof_trace(&loaded),
        Command::Plot { linear, .. } => return cmd_plot(&loaded, *linear),
    };
    if let (Ok(text), Some(dir)) = (&result, &loaded.out_dir) {
        write_file(dir, &format!("{name}.txt"), text)?;
    }
    result
}

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(&cli.command) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(f) => {
            // Partial reports go to stdout, the final line to stderr.
            let (report, line) = match f.message.rfind('\n') {
                Some(i) => f.message.split_at(i + 1),
                None => ("", f.message.as_str()),
            };
            let _ = out.write_all(report.as_bytes());
            let _ = writeln!(err, "{line}");
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["irrmeasure"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(call(&[]).0, 2);
        assert_eq!(call(&["bogus"]).0, 2);
        let (code, _, err) = call(&["trace"]);
        assert_eq!(code, 2);
        assert!(err.starts_with("cli_app::run_command:"));
        let (code, _, err) = call(&["psi", "/nonexistent/spec.txt"]);
        assert_eq!(code, 2);
        assert!(err.starts_with("cli_app::parse_spec:"));
    }

    #[test]
    fn help_exits_0() {
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("proof-trace"));
    }

    #[test]
    fn seeded_convergents() {
        let (code, out, _) = call(&["convergents", "--seed", "4", "--count", "3"]);
        assert_eq!(code, 0);
        assert_eq!(out.matches("nu\tp\tq\tstar").count(), 2);
        let (_, again, _) = call(&["convergents", "--seed", "4", "--count", "3"]);
        assert_eq!(out, again);
    }

    #[test]
    fn approx_only_on_request() {
        let (_, exact, _) = call(&["psi", "--seed", "1", "--t-max", "100"]);
        assert!(!exact.contains('~'));
        let (_, approx, _) = call(&["psi", "--seed", "1", "--t-max", "100", "--approx"]);
        assert!(approx.contains('~'));
    }
}
