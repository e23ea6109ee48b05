//! Command-line surface for the process-frame pipeline: generate logs from
//! reference models, mine constraints, detect rigid constructs and rewrite
//! them into net fragments, check logs against frames, and compare models.
//!
//! Exit codes: 0 success (or equivalent / no violations), 1 semantic
//! failure (not equivalent, violations found), 2 usage or input errors.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use procframe::formats::{declare_text, dfa_text, log_files, manifest, net_text, pnml};
use procframe::miner::{mine, MinedModel, MinerConfig};
use procframe::rigidity::detect;
use procframe::{
    Dfa, EventLog, ProcessFrame, SpecBody, Specification, Template, DEFAULT_STATE_CAP,
    DEFAULT_START_NAME,
};

#[derive(Parser)]
#[command(
    name = "procframe",
    about = "Mine, compose, and rewrite hybrid process frames",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Discover constraints from an event log at 100% support
    Mine(MineArgs),
    /// Detect rigid constructs in a mined model and rewrite them into net
    /// fragments, validating by language equivalence
    Detect(DetectArgs),
    /// Generate an event log covering a model's bounded behaviors
    GenLog(GenLogArgs),
    /// Replay a log against a frame, reporting the first violated
    /// specification per trace
    Check(CheckArgs),
    /// Compare two models for language equivalence
    Equiv(EquivArgs),
    /// Compose a frame into its global automaton
    Compose(ComposeArgs),
    /// Render a model as Graphviz DOT
    ExportDot(ExportDotArgs),
}

#[derive(Args)]
struct MineArgs {
    /// Event log (.lines/.csv/.xes; anything else is read as lines)
    log: PathBuf,
    /// Comma-separated template names (default: the full catalog used for
    /// construct detection)
    #[arg(long)]
    templates: Option<String>,
    /// Include the ternary templates (on by default; use
    /// --ternary=false to strip them)
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    ternary: bool,
    /// Prepend this artificial start activity to every trace
    #[arg(long, conflicts_with = "no_start")]
    start: Option<String>,
    /// Do not prepend a start activity (the default for mine)
    #[arg(long)]
    no_start: bool,
    /// Output constraint file
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct DetectArgs {
    /// Event log the model was mined from
    log: PathBuf,
    /// Mined constraints (.decl); omit with --mine to mine afresh
    constraints: Option<PathBuf>,
    /// Mine the constraints from the log instead of reading a file
    #[arg(long)]
    mine: bool,
    /// Artificial start activity used for cardinality anchoring
    #[arg(long, default_value = DEFAULT_START_NAME)]
    start: String,
    /// Output directory for the frame manifest, fragment nets, residual
    /// constraints, and validation report
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct GenLogArgs {
    /// Source model: a net (.net/.pnml) or a frame manifest (.toml)
    model: PathBuf,
    /// Bound on state revisits per generated run
    #[arg(long, default_value_t = 2)]
    revisits: usize,
    /// Output log file (format from extension)
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct CheckArgs {
    /// Frame manifest (.toml)
    frame: PathBuf,
    /// Event log to replay
    log: PathBuf,
}

#[derive(Args)]
struct EquivArgs {
    /// First model (.decl/.net/.pnml/.dfa/.toml)
    first: PathBuf,
    /// Second model
    second: PathBuf,
}

#[derive(Args)]
struct ComposeArgs {
    /// Frame manifest (.toml)
    frame: PathBuf,
    /// Output automaton file (.dfa)
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct ExportDotArgs {
    /// Model file; nets are drawn as nets, everything else as its automaton
    model: PathBuf,
    /// Suppress the dead trap state and its incoming arcs
    #[arg(long)]
    hide_trap: bool,
    /// Output file (stdout when omitted)
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Mine(args) => mine_cmd(args),
        Command::Detect(args) => detect_cmd(args),
        Command::GenLog(args) => gen_log_cmd(args),
        Command::Check(args) => check_cmd(args),
        Command::Equiv(args) => equiv_cmd(args),
        Command::Compose(args) => compose_cmd(args),
        Command::ExportDot(args) => export_dot_cmd(args),
    }
}

fn parse_templates(list: &str) -> Result<BTreeSet<Template>> {
    list.split(',')
        .map(|name| {
            name.trim()
                .parse::<Template>()
                .map_err(|e| anyhow!("{e}"))
        })
        .collect()
}

fn mine_cmd(args: MineArgs) -> Result<ExitCode> {
    let log = log_files::read_log_auto(&args.log)?;
    let mut cfg = MinerConfig {
        ternary_enabled: args.ternary,
        ..MinerConfig::default()
    };
    if let Some(list) = &args.templates {
        cfg.templates = parse_templates(list)?;
        if args.ternary {
            cfg.templates.extend([Template::Interposition, Template::BalancedEnablement]);
        }
    }
    if let Some(start) = &args.start {
        cfg.include_start = true;
        cfg.start_name = start.clone();
    }
    let model = mine(&log, &cfg)?;
    let constraints: Vec<_> = model.constraints().cloned().collect();
    declare_text::write_constraints(&args.output, &constraints)?;
    println!(
        "mined {} constraints over {} activities -> {}",
        constraints.len(),
        model.alphabet().len(),
        args.output.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn detect_cmd(args: DetectArgs) -> Result<ExitCode> {
    let log = log_files::read_log_auto(&args.log)?;
    let cfg = MinerConfig {
        start_name: args.start.clone(),
        ..MinerConfig::default()
    };
    let model = match (&args.constraints, args.mine) {
        (Some(path), false) => {
            let constraints = declare_text::read_constraints(path)?;
            MinedModel::from_constraints(constraints, log.alphabet().clone())
        }
        (None, true) => mine(&log, &cfg)?,
        (Some(_), true) => bail!("pass either a constraints file or --mine, not both"),
        (None, false) => bail!("pass a constraints file or --mine"),
    };
    let rewrite = detect(&model, &log, &cfg)?;

    fs::create_dir_all(&args.output)
        .with_context(|| format!("creating {}", args.output.display()))?;
    let manifest_path = manifest::save_frame(&rewrite.frame, &args.output, "frame.toml")?;
    for (i, frag) in rewrite.fragments.iter().enumerate() {
        net_text::write_net(&args.output.join(format!("fragment_{i}.net")), &frag.net)?;
    }
    declare_text::write_constraints(&args.output.join("residual.decl"), &rewrite.residual)?;

    let mut report = String::new();
    let installed = rewrite.fragments.iter().filter(|f| !f.consumed.is_empty()).count();
    report.push_str(&format!(
        "fragments detected: {} (installed: {installed})\n",
        rewrite.fragments.len()
    ));
    for (i, frag) in rewrite.fragments.iter().enumerate() {
        report.push_str(&format!(
            "fragment {i}: {} {} (outer {}), pred {:?}, branches {:?}, foll {:?}, consumed {} constraints{}\n",
            frag.variant,
            frag.construct,
            frag.outer,
            frag.predecessor_group.iter().map(|a| a.name()).collect::<Vec<_>>(),
            frag.body_branches
                .iter()
                .map(|b| b.iter().map(|a| a.name()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            frag.follower_group.iter().map(|a| a.name()).collect::<Vec<_>>(),
            frag.consumed.len(),
            if frag.approximate { " [approximate]" } else { "" },
        ));
        if let Some(ce) = &frag.validation_failure {
            report.push_str(&format!("fragment {i} counterexample: {ce}\n"));
        }
    }
    report.push_str(&format!("residual constraints: {}\n", rewrite.residual.len()));
    let reference = model.to_dfa(DEFAULT_STATE_CAP)?;
    match procframe::rigidity::validate_rewrite(&rewrite.frame, &reference, DEFAULT_STATE_CAP)? {
        None => report.push_str("equivalent: yes\n"),
        Some(ce) => report.push_str(&format!("equivalent: no\ncounterexample: {ce}\n")),
    }
    fs::write(args.output.join("report.txt"), &report)
        .with_context(|| "writing report.txt")?;
    print!("{report}");
    println!("frame manifest -> {}", manifest_path.display());
    Ok(ExitCode::SUCCESS)
}

fn gen_log_cmd(args: GenLogArgs) -> Result<ExitCode> {
    if args.revisits < 1 {
        bail!("--revisits must be at least 1");
    }
    let dfa = load_model(&args.model)?;
    let traces = dfa.enumerate_traces(args.revisits);
    let log = EventLog::new(traces);
    let format = procframe::formats::LogFormat::from_path(&args.output)?;
    log_files::write_log(&args.output, &log, format)?;
    println!(
        "generated {} traces over {} activities -> {}",
        log.len(),
        log.alphabet().len(),
        args.output.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn check_cmd(args: CheckArgs) -> Result<ExitCode> {
    let frame = manifest::load_frame(&args.frame)?;
    let log = log_files::read_log_auto(&args.log)?;
    let mut violations = 0usize;
    for (i, trace) in log.traces().iter().enumerate() {
        match frame.violating_spec(trace)? {
            None => println!("trace {:>4}: accepted       {trace}", i + 1),
            Some(spec) => {
                violations += 1;
                println!("trace {:>4}: rejected by {spec}  {trace}", i + 1);
            }
        }
    }
    println!("{violations} of {} traces rejected", log.len());
    Ok(if violations == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn equiv_cmd(args: EquivArgs) -> Result<ExitCode> {
    let first = load_model(&args.first)?;
    let second = load_model(&args.second)?;
    match first.counterexample(&second) {
        None => {
            println!("equivalent");
            Ok(ExitCode::SUCCESS)
        }
        Some(ce) => {
            println!(
                "not equivalent; counterexample {ce} ({}: {}, {}: {})",
                args.first.display(),
                first.accepts(&ce),
                args.second.display(),
                second.accepts(&ce)
            );
            Ok(ExitCode::from(1))
        }
    }
}

fn compose_cmd(args: ComposeArgs) -> Result<ExitCode> {
    let frame = manifest::load_frame(&args.frame)?;
    let global = frame.global_dfa(DEFAULT_STATE_CAP)?;
    dfa_text::write_dfa(&args.output, &global)?;
    println!(
        "composed {} specifications into {} states -> {}",
        frame.specs().len(),
        global.state_count(),
        args.output.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn export_dot_cmd(args: ExportDotArgs) -> Result<ExitCode> {
    let dot = match extension(&args.model) {
        "net" => net_text::read_net(&args.model)?.to_dot(),
        "pnml" => pnml::read_pnml(&args.model)?.to_dot(),
        _ => load_model(&args.model)?.to_dot(args.hide_trap),
    };
    match &args.output {
        Some(path) => fs::write(path, dot).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{dot}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn extension(path: &Path) -> &str {
    path.extension().and_then(|e| e.to_str()).unwrap_or("")
}

/// Loads any model file as its automaton under open-world semantics:
/// constraint sets and frames compose openly by construction, and nets are
/// embedded over their own alphabet so activities they do not know are
/// ignored. This makes models of different styles directly comparable.
fn load_model(path: &Path) -> Result<Dfa> {
    match extension(path) {
        "decl" => {
            let constraints = declare_text::read_constraints(path)?;
            let spec = Specification::inferred("model", SpecBody::Declare(constraints));
            Ok(spec.to_dfa(DEFAULT_STATE_CAP)?)
        }
        "net" => {
            let net = net_text::read_net(path)?;
            let alphabet = net.alphabet();
            Ok(net.to_dfa(DEFAULT_STATE_CAP)?.embed(&alphabet)?.minimized())
        }
        "pnml" => {
            let net = pnml::read_pnml(path)?;
            let alphabet = net.alphabet();
            Ok(net.to_dfa(DEFAULT_STATE_CAP)?.embed(&alphabet)?.minimized())
        }
        "dfa" => Ok(dfa_text::read_dfa(path)?),
        "toml" => {
            let frame: ProcessFrame = manifest::load_frame(path)?;
            Ok(frame.global_dfa(DEFAULT_STATE_CAP)?)
        }
        other => bail!(
            "cannot load {} as a model (unknown extension {other:?}; expected decl, net, pnml, dfa, or toml)",
            path.display()
        ),
    }
}
