//! `univcov`: covering numbers, universality, constructions and check campaigns from the command line.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use univcov::constructions::FamilySpec;
use univcov::fourier::{balanced_energy, balanced_function, higher_energy, spectrum, wiener_norm};
use univcov::solver::cover::{cov_exact_with, CoverOptions, CoverWitness, DEFAULT_NODE_BUDGET};
use univcov::solver::mult::{cov_mult, un_mult};
use univcov::solver::universality::{u_n, un_exact_with, UnValue};
use univcov::verify::{
    exhaustive_suite, run_campaign, run_check, table_experiment, CampaignConfig, Instance, Outcome, TableConfig,
    TableFamily, DEFAULT_TABLE_NODE_BUDGET,
};
use univcov::{parse_set_literal, Error, Group, GroupSet};

const EXIT_FAILURES: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INDETERMINATE: u8 = 3;

#[derive(Parser, Serialize)]
#[command(name = "univcov", version, about = "Universality and covering numbers in finite abelian groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
enum Command {
    /// Evaluate one quantity on a set.
    Compute(ComputeArgs),
    /// Build a named set family and certify it.
    #[command(subcommand)]
    Construct(Family),
    /// Run a check campaign, an exhaustive sweep, or replay one instance.
    Verify(VerifyArgs),
    /// Sum-product covering table.
    Table(TableArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Quantity {
    Cov,
    Un,
    #[value(name = "u_n")]
    #[serde(rename = "u_n")]
    UProportion,
    CovMult,
    UnMult,
    Ek,
    Wiener,
    Spectrum,
}

#[derive(Args, Serialize)]
struct ComputeArgs {
    #[arg(value_enum)]
    quantity: Quantity,
    #[arg(long)]
    group: String,
    /// JSON array of ranks or of coordinate tuples.
    #[arg(long)]
    set: String,
    /// Set to cover, defaults to the whole group.
    #[arg(long)]
    target: Option<String>,
    /// Tuple length for `u_n` and `un`, energy order for `ek`.
    #[arg(long)]
    n: Option<usize>,
    /// Threshold for `spectrum`.
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    node_budget: u64,
}

#[derive(Subcommand, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
enum Family {
    /// Arithmetic progression in Z/N.
    Ap {
        #[arg(long = "N")]
        n: usize,
        #[arg(long, default_value_t = 0)]
        start: usize,
        #[arg(long)]
        length: usize,
    },
    /// Independent random set.
    Random {
        #[arg(long)]
        group: String,
        #[arg(long)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Quadratic residues modulo a prime.
    Qr {
        #[arg(long)]
        p: usize,
    },
    /// Middle third interval modulo a prime.
    Interval {
        #[arg(long)]
        p: usize,
    },
    /// Union of k coordinate subspaces of (Z/2)^n.
    SubspaceUnion {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Sets A, B in Z/N with A + B universal and small.
    UniversalSumset {
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Bohr set B(Gamma, eps).
    Bohr {
        #[arg(long)]
        group: String,
        /// Character ranks, comma separated.
        #[arg(long, value_delimiter = ',')]
        gamma: Vec<usize>,
        #[arg(long)]
        eps: f64,
    },
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    /// `all`, `everything`, `core` or comma-separated check ids.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Sweep every small instance over this group instead of sampling (suite `core` only).
    #[arg(long)]
    exhaustive: Option<String>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    parallelism: usize,
    /// Replay one instance: a JSON object or a path to one. Needs a single check id as suite.
    #[arg(long)]
    instance: Option<String>,
}

#[derive(Args, Serialize)]
struct TableArgs {
    #[arg(long = "p", value_delimiter = ',', default_values_t = [11, 31, 101])]
    primes: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = ["random".to_string(), "qr".to_string(), "interval".to_string()])]
    families: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_TABLE_NODE_BUDGET)]
    node_budget: u64,
}

/// Report body plus the exit status it implies.
struct Report {
    body: Value,
    text: String,
    code: u8,
}

/// Engine errors on search limits or failed constructions exit 3; every other
/// engine error stems from the input and exits 2, as do I/O errors.
fn exit_code_for(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::ConstructionFailed(_) | Error::EnumerationCap { .. } | Error::ProfileCap { .. }) => EXIT_INDETERMINATE,
        _ => EXIT_USAGE,
    }
}

fn group_arg(spec: &str) -> anyhow::Result<Arc<Group>> {
    Ok(Arc::new(spec.parse::<Group>()?))
}

fn set_arg(g: &Arc<Group>, literal: &str) -> anyhow::Result<GroupSet> {
    Ok(parse_set_literal(g, literal)?)
}

fn cover_code(w: &CoverWitness) -> u8 {
    if w.value.is_some() && w.optimal {
        0
    } else {
        EXIT_INDETERMINATE
    }
}

fn cover_text(w: &CoverWitness) -> String {
    match (w.value, w.optimal) {
        (None, _) => "no cover exists".into(),
        (Some(v), true) => format!("{v} (optimal) witness {:?}", w.witness),
        (Some(v), false) => format!("INDETERMINATE in [{}, {v}] best witness {:?}", w.lower_bound, w.witness),
    }
}

fn un_text(u: &UnValue) -> (String, u8) {
    match u {
        UnValue::Finite { value } => (value.to_string(), 0),
        UnValue::Infinite => ("INFINITE".into(), 0),
        UnValue::Indeterminate { lower, upper } => (format!("INDETERMINATE in [{lower}, {upper}]"), EXIT_INDETERMINATE),
    }
}

fn compute(args: &ComputeArgs) -> anyhow::Result<Report> {
    let g = group_arg(&args.group)?;
    let a = set_arg(&g, &args.set)?;
    let target = args.target.as_deref().map(|t| set_arg(&g, t)).transpose()?;
    let opts = CoverOptions {
        node_budget: args.node_budget,
    };
    let need_n = || args.n.ok_or_else(|| anyhow::Error::new(Error::InvalidParameter("--n is required".into())));
    let out = match args.quantity {
        Quantity::Cov => {
            let e = target.unwrap_or_else(|| GroupSet::full(&g));
            let w = cov_exact_with(&a, &e, opts)?;
            Report {
                text: format!("cov = {}", cover_text(&w)),
                code: cover_code(&w),
                body: serde_json::to_value(&w)?,
            }
        }
        Quantity::Un => {
            let profile: Vec<usize> = args.n.into_iter().collect();
            let r = un_exact_with(&a, opts, &profile)?;
            let (t, code) = un_text(&r.un);
            let witness = r.witnessing_failure.as_ref().map(|w| format!(" failure witness {w:?}")).unwrap_or_default();
            Report {
                text: format!("un = {t}{witness}"),
                code,
                body: serde_json::to_value(&r)?,
            }
        }
        Quantity::UProportion => {
            let n = need_n()?;
            let v = u_n(&a, n)?;
            let ubar = univcov::scalar::ratio_to_f64(&v).powf(1.0 / n as f64);
            Report {
                text: format!("U_{n} = {v} (Ubar = {ubar:.6})"),
                code: 0,
                body: json!({ "n": n, "value": v.to_string(), "u_bar": ubar }),
            }
        }
        Quantity::CovMult => {
            let m = cov_mult(&a, target.as_ref(), opts)?;
            Report {
                text: format!("cov^x = {} multipliers {:?}", cover_text(&m.cover), m.multipliers),
                code: cover_code(&m.cover),
                body: serde_json::to_value(&m)?,
            }
        }
        Quantity::UnMult => {
            let m = un_mult(&a, opts)?;
            let (t, code) = un_text(&m.report.un);
            Report {
                text: format!("un^x = {t}"),
                code,
                body: serde_json::to_value(&m)?,
            }
        }
        Quantity::Ek => {
            let k = need_n()?;
            let balanced = balanced_energy(&a, k)?;
            let raw = higher_energy(&a, k)?;
            Report {
                text: format!("||f_A||_E{k}^{} = {balanced}, E_{k}(A) = {raw}", 2 * k),
                code: 0,
                body: json!({ "k": k, "balanced": balanced.to_string(), "indicator": raw.to_string() }),
            }
        }
        Quantity::Wiener => {
            let ind = univcov::DensityFunction::<f64>::indicator(&a);
            let w_ind = wiener_norm(&ind.to_complex());
            let w_bal = wiener_norm(&balanced_function::<f64>(&a).to_complex());
            Report {
                text: format!("||1_A||_W = {w_ind:.9}, ||f_A||_W = {w_bal:.9}"),
                code: 0,
                body: json!({ "indicator": w_ind, "balanced": w_bal }),
            }
        }
        Quantity::Spectrum => {
            let eps = args
                .eps
                .ok_or_else(|| anyhow::Error::new(Error::InvalidParameter("--eps is required".into())))?;
            let s = spectrum(&a, eps)?;
            Report {
                text: format!("Spec_{eps}(A) = {:?}", s.characters),
                code: 0,
                body: serde_json::to_value(&s)?,
            }
        }
    };
    Ok(out)
}

fn family_spec(f: &Family) -> FamilySpec {
    match f {
        Family::Ap { n, start, length } => FamilySpec::Ap {
            n: *n,
            start: *start,
            length: *length,
        },
        Family::Random { group, density, seed } => FamilySpec::Random {
            group: group.clone(),
            density: *density,
            seed: *seed,
        },
        Family::Qr { p } => FamilySpec::Qr { p: *p },
        Family::Interval { p } => FamilySpec::Interval { p: *p },
        Family::SubspaceUnion { n, k } => FamilySpec::SubspaceUnion { n: *n, k: *k },
        Family::UniversalSumset { n, k, seed } => FamilySpec::UniversalSumset {
            n: *n,
            k: *k,
            seed: *seed,
        },
        Family::Bohr { group, gamma, eps } => FamilySpec::Bohr {
            group: group.clone(),
            gamma: gamma.clone(),
            eps: *eps,
        },
    }
}

/// Largest group on which `construct` certifies `un` with the exact solver.
const CERTIFY_MAX_ORDER: usize = 1 << 10;

fn construct(f: &Family) -> anyhow::Result<Report> {
    let spec = family_spec(f);
    if let Family::UniversalSumset { n, k, seed } = f {
        let r = univcov::constructions::universal_sumset(*n, *k, *seed)?;
        let c = &r.certificate;
        return Ok(Report {
            text: format!(
                "|A| = {}, |B| = {}, |U| = {} of N = {n}; un(U) >= {} (requested {k}) via d = {}",
                c.a_size, c.b_size, c.u_size, c.k_achieved, c.d
            ),
            code: 0,
            body: json!({ "family": spec, "a": r.a.to_vec(), "b": r.b.to_vec(), "u": r.u.to_vec(), "certificate": c }),
        });
    }
    let set = spec.realize()?;
    let n = set.group().order();
    let mut certificate = json!({ "size": set.len(), "order": n, "density": set.density() });
    let mut text = format!("{:?} ({} of {n} elements)", set.to_vec(), set.len());
    if n <= CERTIFY_MAX_ORDER && !set.is_empty() {
        let r = un_exact_with(&set, CoverOptions::default(), &[])?;
        let (t, _) = un_text(&r.un);
        if let Family::SubspaceUnion { k, .. } = f {
            let holds = match r.un {
                UnValue::Finite { value } => value >= *k,
                UnValue::Infinite => true,
                UnValue::Indeterminate { lower, .. } => lower >= *k,
            };
            certificate["universal_at_least_k"] = json!(holds);
            if !holds {
                return Err(Error::ConstructionFailed(format!("un = {t} < k = {k}")).into());
            }
        }
        certificate["un"] = serde_json::to_value(r.un)?;
        text.push_str(&format!("; un = {t}"));
    }
    Ok(Report {
        text,
        code: 0,
        body: json!({ "family": spec, "set": set.to_vec(), "certificate": certificate }),
    })
}

fn read_instance(arg: &str) -> anyhow::Result<Instance> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?
    };
    serde_json::from_str(&text).map_err(|e| anyhow::Error::new(Error::MalformedInstance(e.to_string())))
}

fn verify(args: &VerifyArgs) -> anyhow::Result<Report> {
    if let Some(inst) = &args.instance {
        let instance = read_instance(inst)?;
        let r = run_check(&args.suite, &instance)?;
        let code = match r.outcome {
            Outcome::Fail | Outcome::Error { .. } => EXIT_FAILURES,
            _ => 0,
        };
        return Ok(Report {
            text: format!("{} {:?}", r.check_id, r.outcome),
            code,
            body: serde_json::to_value(&r)?,
        });
    }
    let report = match &args.exhaustive {
        Some(spec) => {
            if args.suite != "core" {
                return Err(anyhow::Error::new(Error::InvalidParameter("--exhaustive needs --suite core".into())));
            }
            exhaustive_suite(&group_arg(spec)?, args.parallelism)?
        }
        None => run_campaign(&CampaignConfig {
            suite: args.suite.clone(),
            trials: args.trials,
            seed: args.seed,
            parallelism: args.parallelism,
        })
        ?,
    };
    let mut text = String::new();
    for t in &report.per_check {
        text.push_str(&format!(
            "{} attempted {} passed {} failed {} skipped {} reported {}\n",
            t.check_id, t.attempted, t.passed, t.failed, t.skipped, t.reported
        ));
    }
    let t = &report.total;
    text.push_str(&format!(
        "total attempted {} passed {} failed {} skipped {} in {:.1}s",
        t.attempted, t.passed, t.failed, t.skipped, report.wall_seconds
    ));
    Ok(Report {
        text,
        code: if report.all_hold() { 0 } else { EXIT_FAILURES },
        body: serde_json::to_value(&report)?,
    })
}

fn table(args: &TableArgs, format: Format) -> anyhow::Result<Report> {
    let families = args
        .families
        .iter()
        .map(|f| f.parse::<TableFamily>())
        .collect::<Result<Vec<_>, _>>()
        ?;
    let report = table_experiment(&TableConfig {
        primes: args.primes.clone(),
        families,
        seed: args.seed,
        node_budget: args.node_budget,
    })
    ?;
    let code = if report.bounds_hold() { 0 } else { EXIT_FAILURES };
    let text = if format == Format::Csv {
        report.to_csv()
    } else {
        let held = report.bounds.iter().filter(|b| b.holds).count();
        format!("{} cells; {held}/{} asserted bounds hold", report.cells.len(), report.bounds.len())
    };
    Ok(Report {
        text,
        code,
        body: serde_json::to_value(&report)?,
    })
}

#[derive(Serialize)]
struct RunConfig<'a> {
    tool: &'static str,
    version: &'static str,
    argv: Vec<String>,
    #[serde(flatten)]
    cli: &'a Cli,
}

fn run(cli: &Cli) -> anyhow::Result<u8> {
    if cli.format == Format::Csv && !matches!(cli.command, Command::Table(_)) {
        return Err(Error::InvalidParameter("csv output is only available for table".into()).into());
    }
    let out = match &cli.command {
        Command::Compute(a) => compute(a)?,
        Command::Construct(f) => construct(f)?,
        Command::Verify(a) => verify(a)?,
        Command::Table(a) => table(a, cli.format)?,
    };
    let config = RunConfig {
        tool: "univcov",
        version: env!("CARGO_PKG_VERSION"),
        argv: std::env::args().collect(),
        cli,
    };
    let rendered = match cli.format {
        Format::Json => {
            let mut body = out.body;
            if let Value::Object(map) = &mut body {
                map.insert("run_config".into(), serde_json::to_value(&config)?);
            } else {
                body = json!({ "result": body, "run_config": config });
            }
            serde_json::to_string_pretty(&body)?
        }
        Format::Text | Format::Csv => out.text.trim_end().to_string(),
    };
    match &cli.out {
        Some(path) => {
            std::fs::write(path, rendered + "\n").with_context(|| format!("writing {}", path.display()))?;
            if cli.format == Format::Csv {
                let sidecar = path.with_extension("config.json");
                std::fs::write(&sidecar, serde_json::to_string_pretty(&config)?)
                    .with_context(|| format!("writing {}", sidecar.display()))?;
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            if let Err(e) = writeln!(stdout, "{rendered}") {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    return Err(e).context("writing standard output");
                }
            }
        }
    }
    Ok(out.code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
