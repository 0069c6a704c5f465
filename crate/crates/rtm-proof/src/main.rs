//! `rtm`: command-line front end.
//!
//! Exit codes: 0 = success (and, for `prove`/`bounds`, every check holds);
//! 1 = a verification failed; 2 = configuration or usage error.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use rtm_core::fields::cmc::{verify_lemma1, verify_lemma2, verify_lemma3, verify_lemma4};
use rtm_core::fields::{field_by_name, field_names, CmcClaims, CmcField};
use rtm_core::{
    rtm_run, CaptureMode, CheckReport, EngineError, GridSpec, InitialValue, Interval,
    IntervalBox, PrecisionRequest, Rational, RtmConfig,
};
use rtm_proof::certificate::{rat_str, Report};
use rtm_proof::csvio;
use rtm_proof::pipeline::{run_full_proof, ProofConfig};
use rtm_proof::tables;

/// Environment variable supplying the default worker count for `prove`.
const THREADS_ENV: &str = "RTM_THREADS";

#[derive(Parser)]
#[command(
    name = "rtm",
    version,
    about = "Rounded Taylor method over exact rationals: proof driver and tools",
    after_help = "Exit codes: 0 success, 1 verification failure, 2 usage error.\n\
                  Rational arguments accept num/den or decimal literals; initial-state\n\
                  components also accept pi and pi/<integer>."
)]
struct Cli {
    /// JSON file supplying defaults for any long flag of the chosen
    /// subcommand (keys named like the flags); explicit flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the full verification and write a JSON certificate.
    Prove(ProveArgs),
    /// Run one rounded (or exact) Taylor integration and print/export it.
    Integrate(IntegrateArgs),
    /// Verify the derivative-bound constants over a box and report slacks.
    Bounds(BoundsArgs),
    /// Map a stored trajectory to points on the unit two-sphere (plot data).
    Curve(CurveArgs),
    /// Dump the embedded reference end-state tables as CSV.
    Table(TableArgs),
}

#[derive(Args)]
struct ProveArgs {
    /// Number of steps per run (default 25000).
    #[arg(long)]
    k: Option<u64>,
    /// Taylor order of one step (default 1).
    #[arg(long)]
    m: Option<u32>,
    /// Grid resolution R (default 1/10^10).
    #[arg(long)]
    r: Option<String>,
    /// Box inflation margin for the one-step hypothesis (default 1/1000).
    #[arg(long)]
    epsilon: Option<String>,
    /// Worker threads for the thirty-two runs (default: RTM_THREADS or all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Certificate path (default certificate.json; parent must exist).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct IntegrateArgs {
    /// Field to integrate (default cmc-s4).
    #[arg(long)]
    field: Option<String>,
    /// Step size h.
    #[arg(long)]
    h: Option<String>,
    /// Number of steps.
    #[arg(long)]
    k: Option<u64>,
    /// Taylor order of one step (default 1).
    #[arg(long)]
    m: Option<u32>,
    /// Grid resolution R (default 1/10^10).
    #[arg(long)]
    r: Option<String>,
    /// Disable grid rounding and run exact (exact-rational fields only).
    #[arg(long)]
    no_round: bool,
    /// Comma-separated initial state; components accept rationals, pi,
    /// pi/<integer>.
    #[arg(long)]
    start: Option<String>,
    /// Override the second state component (convenience for cmc-s4 sweeps).
    #[arg(long)]
    theta0: Option<String>,
    /// Write every step as CSV (step,t,u1..un; exact rationals).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    /// Axis overrides for the verification box, e.g. "u2=0.4,0.9"
    /// (space- or semicolon-separated assignments; unset axes keep defaults).
    #[arg(long = "box", value_name = "SPEC")]
    box_spec: Option<String>,
    /// Emit the reports as JSON (exact rationals) instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CurveArgs {
    /// Trajectory CSV produced by `integrate --out` (needs >= 2 components).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output CSV (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Decimal places for the non-rigorous coordinates (default 15).
    #[arg(long)]
    digits: Option<usize>,
}

#[derive(Args)]
struct TableArgs {
    /// Which horizon to dump: short, long, or both (default both).
    #[arg(long)]
    horizon: Option<String>,
    /// Output CSV (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Flag defaults loadable from `--config`; keys mirror the long flag names.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileDefaults {
    field: Option<String>,
    h: Option<String>,
    k: Option<u64>,
    m: Option<u32>,
    r: Option<String>,
    epsilon: Option<String>,
    threads: Option<usize>,
    out: Option<PathBuf>,
    start: Option<String>,
    theta0: Option<String>,
    no_round: Option<bool>,
    #[serde(rename = "box")]
    box_spec: Option<String>,
    json: Option<bool>,
    input: Option<PathBuf>,
    digits: Option<usize>,
    horizon: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    let file = load_defaults(cli.config.as_deref())?;
    match cli.cmd {
        Cmd::Prove(a) => cmd_prove(a, file),
        Cmd::Integrate(a) => cmd_integrate(a, file),
        Cmd::Bounds(a) => cmd_bounds(a, file),
        Cmd::Curve(a) => cmd_curve(a, file),
        Cmd::Table(a) => cmd_table(a, file),
    }
}

fn load_defaults(path: Option<&Path>) -> Result<FileDefaults> {
    match path {
        None => Ok(FileDefaults::default()),
        Some(p) => {
            let text = fs::read_to_string(p)
                .with_context(|| format!("reading config file {}", p.display()))?;
            serde_json::from_str(&text)
                .with_context(|| format!("parsing config file {}", p.display()))
        }
    }
}

fn parse_rational(text: &str, what: &str) -> Result<Rational> {
    text.parse::<Rational>()
        .map_err(|e| anyhow!("{what} '{text}': {e}"))
}

fn parse_positive(text: &str, what: &str) -> Result<Rational> {
    let v = parse_rational(text, what)?;
    if !v.is_positive() {
        bail!("{what} must be positive, got '{text}'");
    }
    Ok(v)
}

/// One initial-state component: a rational literal, `pi`, or `pi/<integer>`.
fn parse_initial(text: &str) -> Result<InitialValue> {
    let t = text.trim();
    if t == "pi" {
        return Ok(InitialValue::PiTimes(Rational::one()));
    }
    if let Some(den) = t.strip_prefix("pi/") {
        let d: i64 = den
            .parse()
            .map_err(|_| anyhow!("expected an integer after 'pi/' in '{t}'"))?;
        if d == 0 {
            bail!("zero denominator in '{t}'");
        }
        return Ok(InitialValue::PiTimes(Rational::from_ratio(1, d)));
    }
    Ok(InitialValue::Exact(parse_rational(t, "state component")?))
}

/// Fails (usage error) when the target's parent directory is missing.
fn check_parent_exists(path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() && !dir.is_dir() {
            bail!(
                "output directory '{}' does not exist (create it first)",
                dir.display()
            );
        }
    }
    Ok(())
}

/// Ten-digit decimal preview of an exact rational string, for human output.
fn dec(exact: &str) -> String {
    exact
        .parse::<Rational>()
        .map(|r| r.decimal_approx(10))
        .unwrap_or_else(|_| exact.to_string())
}

// ---------------------------------------------------------------- prove

fn cmd_prove(a: ProveArgs, file: FileDefaults) -> Result<ExitCode> {
    let steps = a.k.or(file.k).unwrap_or(25_000);
    if steps == 0 {
        bail!("--k must be at least 1");
    }
    let order = a.m.or(file.m).unwrap_or(1);
    let resolution = match a.r.or(file.r) {
        Some(s) => parse_positive(&s, "resolution")?,
        None => Rational::pow10(-10),
    };
    let epsilon = match a.epsilon.or(file.epsilon) {
        Some(s) => parse_positive(&s, "epsilon")?,
        None => Rational::from_ratio(1, 1000),
    };
    let threads = a.threads.or(file.threads).or_else(|| {
        std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.parse().ok())
    });
    let out = a
        .out
        .or(file.out)
        .unwrap_or_else(|| PathBuf::from("certificate.json"));
    check_parent_exists(&out)?;

    let cert = run_full_proof(&ProofConfig {
        order,
        steps,
        resolution,
        epsilon,
        threads,
    });

    let json = serde_json::to_string_pretty(&cert).context("serializing certificate")?;
    fs::write(&out, json + "\n")
        .with_context(|| format!("writing certificate to {}", out.display()))?;

    print_prove_summary(&cert, &out);
    Ok(if cert.verdict.status == "pass" {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn print_prove_summary(cert: &rtm_proof::Certificate, out: &Path) {
    println!(
        "configuration: order {}, {} steps, resolution {}, epsilon {}",
        cert.config.order, cert.config.steps, cert.config.resolution, cert.config.epsilon
    );
    println!("certificate: {} (sha256 of config: {})", out.display(), cert.config.sha256);
    println!("values below are 10-digit decimal previews; the certificate carries exact rationals");
    let held = cert.lemmas.iter().filter(|r| r.all_hold).count();
    println!("constant passes: {held}/{} hold", cert.lemmas.len());
    for (family, b) in [
        ("reference", &cert.error_bounds.reference),
        ("certified", &cert.error_bounds.certified),
    ] {
        println!(
            "error bound ({family}): short total {} slack {} | long total {} slack {}",
            dec(&b.short.total),
            dec(&b.short.hypothesis_slack),
            dec(&b.long.total),
            dec(&b.long.hypothesis_slack),
        );
    }
    println!(
        "separation growth: reference {} / {} | certified {} / {}",
        dec(&cert.gronwall.reference.short),
        dec(&cert.gronwall.reference.long),
        dec(&cert.gronwall.certified.short),
        dec(&cert.gronwall.certified.long),
    );
    if cert.tables.compared {
        println!("end-state tables: {}/{} entries match", cert.tables.matched, cert.tables.total);
    } else {
        println!("end-state tables: comparison skipped (non-default configuration)");
    }
    for f in &cert.margins.families {
        let ok = f.checks.iter().all(|c| c.holds);
        println!(
            "margin {:12} distance {} stated {} certified chain {}  [{}]",
            f.id,
            dec(&f.min_distance),
            dec(&f.claimed_margin),
            dec(&f.certified_chain.total),
            if ok { "ok" } else { "FAIL" }
        );
    }
    println!(
        "boundary sign conditions: {}",
        if cert.miranda.conclusion {
            "all four hold"
        } else {
            "NOT all established"
        }
    );
    println!("verdict: {}", cert.verdict.status);
    for reason in &cert.verdict.failures {
        println!("  failure: {reason}");
    }
}

// ------------------------------------------------------------ integrate

fn cmd_integrate(a: IntegrateArgs, file: FileDefaults) -> Result<ExitCode> {
    let field_name = a.field.or(file.field).unwrap_or_else(|| "cmc-s4".into());
    let field = field_by_name(&field_name).ok_or_else(|| {
        anyhow!(
            "unknown field '{field_name}' (available: {})",
            field_names().join(", ")
        )
    })?;
    let no_round = a.no_round || file.no_round.unwrap_or(false);
    if no_round && !field.exact_rational() {
        bail!(
            "field '{field_name}' needs transcendental evaluations, so grid rounding \
             cannot be disabled; drop --no-round"
        );
    }
    let grid = if no_round {
        None
    } else {
        let r = match a.r.or(file.r) {
            Some(s) => parse_positive(&s, "resolution")?,
            None => Rational::pow10(-10),
        };
        Some(GridSpec::new(r).expect("positive checked"))
    };

    let (default_h, default_k): (&str, u64) = match field.name() {
        "cmc-s4" => ("3966/250000000", 25_000),
        _ => ("1/100", 30),
    };
    let h = match a.h.or(file.h) {
        Some(s) => parse_positive(&s, "step size")?,
        None => parse_positive(default_h, "step size")?,
    };
    let steps = a.k.or(file.k).unwrap_or(default_k);
    let order = a.m.or(file.m).unwrap_or(1);

    let mut initial: Vec<InitialValue> = match a.start.or(file.start) {
        Some(list) => list
            .split(',')
            .map(parse_initial)
            .collect::<Result<Vec<_>>>()?,
        None => match field.name() {
            "cmc-s4" => vec![
                parse_initial("pi/2")?,
                parse_initial("5204/10000")?,
                parse_initial("pi")?,
            ],
            _ => vec![parse_initial("1/2")?],
        },
    };
    if initial.len() != field.dimension() {
        bail!(
            "field '{field_name}' has dimension {}, but the initial state has {} components",
            field.dimension(),
            initial.len()
        );
    }
    if let Some(theta0) = a.theta0.or(file.theta0) {
        if initial.len() < 2 {
            bail!("--theta0 needs a field with at least two components");
        }
        initial[1] = parse_initial(&theta0)?;
    }
    if grid.is_none()
        && initial
            .iter()
            .any(|v| matches!(v, InitialValue::PiTimes(_)))
    {
        bail!("pi-valued start components need grid rounding; drop --no-round or use rationals");
    }

    let out = a.out.or(file.out);
    if let Some(p) = &out {
        check_parent_exists(p)?;
    }

    let mut cfg = RtmConfig::new(order, h, steps, grid, initial);
    cfg.capture = if out.is_some() {
        CaptureMode::Full
    } else {
        CaptureMode::Endpoints
    };
    let trajectory = match rtm_run(field, &cfg) {
        Ok(t) => t,
        Err(
            e @ (EngineError::InvalidConfig { .. }
            | EngineError::UnsupportedOrder { .. }
            | EngineError::DimensionMismatch { .. }),
        ) => bail!("{e}"),
        Err(e) => {
            eprintln!("integration failed: {e}");
            return Ok(ExitCode::from(1));
        }
    };

    println!(
        "field {} | order {} | {} steps | h = {} | rounding {}",
        field.name(),
        order,
        steps,
        rat_str(&trajectory.step),
        match &trajectory.resolution {
            Some(r) => format!("R = {}", rat_str(r)),
            None => "disabled (exact)".into(),
        }
    );
    let t_final = &Rational::from_integer(steps as i64) * &trajectory.step;
    println!("final state at t = {}:", rat_str(&t_final));
    for (i, v) in trajectory.end.iter().enumerate() {
        println!("  u{} = {}", i + 1, rat_str(v));
    }
    if let Some(p) = &out {
        let f = fs::File::create(p)
            .with_context(|| format!("creating {}", p.display()))?;
        csvio::write_trajectory(f, &trajectory)?;
        println!("wrote {} rows to {}", trajectory.captured.len(), p.display());
    }
    Ok(ExitCode::SUCCESS)
}

// --------------------------------------------------------------- bounds

fn cmd_bounds(a: BoundsArgs, file: FileDefaults) -> Result<ExitCode> {
    let mut domain = CmcField::nominal_derivative_box();
    if let Some(spec) = a.box_spec.or(file.box_spec) {
        domain = apply_box_overrides(&domain, &spec)?;
    }
    let claims = CmcClaims::baseline();
    let req = PrecisionRequest::width_pow10(12);
    let runs: [(&str, Result<CheckReport, _>); 4] = [
        ("component bounds", verify_lemma1(&domain, &req)),
        ("squared-norm bounds", verify_lemma2(&domain, &claims, &req)),
        ("derivative-norm bounds", verify_lemma3(&domain, &claims, &req)),
        ("higher-coefficient bounds", verify_lemma4(&CmcField, &domain, &claims, &req)),
    ];

    let mut all_ok = true;
    let mut reports = Vec::new();
    for (what, r) in runs {
        match r {
            Ok(report) => {
                all_ok &= report.all_hold();
                reports.push(Report::from_report(&report));
            }
            Err(e) => {
                all_ok = false;
                reports.push(Report {
                    title: format!("{what}: not establishable over this box"),
                    checks: Vec::new(),
                    notes: vec![format!("{e}")],
                    all_hold: false,
                });
            }
        }
    }

    if a.json || file.json.unwrap_or(false) {
        println!("{}", serde_json::to_string_pretty(&reports)?);
    } else {
        println!("box: {}", describe_box(&domain));
        println!("values are 10-digit decimal previews; use --json for exact rationals");
        for r in &reports {
            println!("{} [{}]", r.title, if r.all_hold { "ok" } else { "FAIL" });
            for c in &r.checks {
                println!(
                    "  [{}] {}: {} {} {} (slack {})",
                    if c.holds { "ok" } else { "FAIL" },
                    c.label,
                    dec(&c.lhs),
                    c.relation,
                    dec(&c.rhs),
                    dec(&c.slack),
                );
            }
            for n in &r.notes {
                println!("  note: {n}");
            }
        }
    }
    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn describe_box(b: &IntervalBox) -> String {
    b.axes()
        .iter()
        .enumerate()
        .map(|(i, iv)| format!("u{}=[{}, {}]", i + 1, rat_str(iv.lo()), rat_str(iv.hi())))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Applies assignments like `u2=0.4,0.9` to a copy of the base box.
fn apply_box_overrides(base: &IntervalBox, spec: &str) -> Result<IntervalBox> {
    let mut axes: Vec<Interval> = base.axes().to_vec();
    for part in spec
        .split(|c: char| c == ';' || c.is_whitespace())
        .filter(|s| !s.is_empty())
    {
        let (name, range) = part
            .split_once('=')
            .ok_or_else(|| anyhow!("expected uN=lo,hi, got '{part}'"))?;
        let idx: usize = name
            .strip_prefix('u')
            .and_then(|n| n.parse::<usize>().ok())
            .filter(|n| (1..=axes.len()).contains(n))
            .ok_or_else(|| anyhow!("unknown axis '{name}' (use u1..u{})", axes.len()))?
            - 1;
        let (lo, hi) = range
            .split_once(',')
            .ok_or_else(|| anyhow!("expected two comma-separated endpoints in '{part}'"))?;
        let lo = parse_rational(lo, "box endpoint")?;
        let hi = parse_rational(hi, "box endpoint")?;
        axes[idx] = Interval::new(lo, hi)
            .map_err(|_| anyhow!("empty range in '{part}' (need lo <= hi)"))?;
    }
    Ok(IntervalBox::new(axes))
}

// ---------------------------------------------------------------- curve

fn cmd_curve(a: CurveArgs, file: FileDefaults) -> Result<ExitCode> {
    let input = a
        .input
        .or(file.input)
        .ok_or_else(|| anyhow!("--input is required (a trajectory csv from 'integrate --out')"))?;
    let digits = a.digits.or(file.digits).unwrap_or(15);
    let rows = csvio::read_trajectory(
        fs::File::open(&input).with_context(|| format!("opening {}", input.display()))?,
    )?;
    match a.out.or(file.out) {
        Some(p) => {
            check_parent_exists(&p)?;
            let f = fs::File::create(&p)
                .with_context(|| format!("creating {}", p.display()))?;
            csvio::write_curve(f, &rows, digits)?;
        }
        None => {
            let stdout = std::io::stdout();
            csvio::write_curve(stdout.lock(), &rows, digits)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------- table

fn cmd_table(a: TableArgs, file: FileDefaults) -> Result<ExitCode> {
    let horizon = a.horizon.or(file.horizon).unwrap_or_else(|| "both".into());
    let wanted: Vec<(&str, &[[&str; 3]; tables::SAMPLE_COUNT])> = match horizon.as_str() {
        "short" => vec![("short", &tables::END_STATES_SHORT)],
        "long" => vec![("long", &tables::END_STATES_LONG)],
        "both" => vec![
            ("short", &tables::END_STATES_SHORT),
            ("long", &tables::END_STATES_LONG),
        ],
        other => bail!("unknown horizon '{other}' (use short, long, or both)"),
    };
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(["horizon", "sample", "u1", "u2", "u3"])?;
        for (label, table) in wanted {
            for (j, row) in table.iter().enumerate() {
                w.write_record([label, &j.to_string(), row[0], row[1], row[2]])?;
            }
        }
        w.flush()?;
    }
    match a.out.or(file.out) {
        Some(p) => {
            check_parent_exists(&p)?;
            fs::write(&p, &buf).with_context(|| format!("writing {}", p.display()))?;
        }
        None => std::io::stdout().write_all(&buf)?,
    }
    Ok(ExitCode::SUCCESS)
}
