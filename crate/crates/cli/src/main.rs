use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::{Arg, ArgAction, ArgMatches, Command};
use dsu11::sweep::{
    check, figure_preset, figure_properties, oracle_point, run_sweep, CheckMode, Settings, SweepSpec, FIGURE_IDS,
};

/// Setting flags shared by `point` and `sweep`; each maps to a config-file key.
const SETTING_FLAGS: [(&str, &str); 26] = [
    ("g", "gain of both amplifiers"),
    ("g1", "gain of the first amplifier"),
    ("g2", "gain of the second amplifier"),
    ("theta1", "phase of the first amplifier"),
    ("theta2", "phase of the second amplifier"),
    ("r", "squeezing of the arm-a input"),
    ("theta-xi", "squeezing phase"),
    ("beta", "coherent amplitude of the arm-b input"),
    ("theta-beta", "coherent phase"),
    ("gamma", "local displacement strength"),
    ("theta-gamma", "local displacement phase"),
    ("phi", "phase shift to estimate"),
    ("nu", "number of repetitions"),
    ("eta", "detection efficiency of the lossy Fisher information"),
    ("T", "arm transmission before the second amplifier"),
    ("quantity", "comma-separated quantities, e.g. dphi,SQL or log10_F"),
    ("axis", "swept parameter"),
    ("start", "first axis value"),
    ("stop", "last axis value"),
    ("count", "number of axis values"),
    ("values", "explicit comma-separated axis values"),
    ("axis2", "second swept parameter"),
    ("start2", "first value of the second axis"),
    ("stop2", "last value of the second axis"),
    ("count2", "number of second-axis values"),
    ("values2", "explicit values of the second axis"),
];

enum Failure {
    /// Bad flags, parameters or files; exit code 2.
    Usage(String),
    /// A valid request that failed while running; exit code 1.
    Runtime(String),
}

type Outcome = Result<(), Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn runtime(e: impl std::fmt::Display) -> Failure {
    Failure::Runtime(e.to_string())
}

fn setting_args() -> Vec<Arg> {
    SETTING_FLAGS
        .iter()
        .map(|(name, help)| Arg::new(*name).long(*name).value_name("VALUE").allow_hyphen_values(true).help(*help))
        .collect()
}

fn output_arg() -> Arg {
    Arg::new("output").long("output").short('o').value_name("PATH").help("write here instead of stdout")
}

fn cli() -> Command {
    let config = Arg::new("config").long("config").value_name("PATH").help("flat `key = value` settings file");
    let dump = Arg::new("dump-config")
        .long("dump-config")
        .action(ArgAction::SetTrue)
        .help("print the resolved sweep as a config file and exit");
    Command::new("dsu11")
        .about("Phase estimation with a displacement-assisted SU(1,1) interferometer")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .subcommand(
            Command::new("point")
                .about("Evaluate quantities at a single parameter point")
                .args(setting_args())
                .arg(config.clone())
                .arg(
                    Arg::new("oracle-check")
                        .long("oracle-check")
                        .action(ArgAction::SetTrue)
                        .help("also compare the Fock oracle with the Gaussian engine at this point"),
                )
                .arg(output_arg()),
        )
        .subcommand(
            Command::new("sweep")
                .about("Evaluate quantities over one or two parameter axes as CSV")
                .args(setting_args())
                .arg(Arg::new("figure").long("figure").value_name("ID").help("start from a figure preset"))
                .arg(config)
                .arg(dump.clone())
                .arg(output_arg()),
        )
        .subcommand(
            Command::new("figure")
                .about("Regenerate a figure table and check its expected shape")
                .arg(Arg::new("id").required(true).value_parser(FIGURE_IDS).help("figure preset"))
                .arg(dump)
                .arg(output_arg()),
        )
        .subcommand(
            Command::new("check")
                .about("Run a self-check suite")
                .arg(
                    Arg::new("mode")
                        .required(true)
                        .value_parser(["oracle", "closed-form", "limits"])
                        .help("suite to run"),
                ),
        )
}

/// Config file first, then flags on top.
fn settings(m: &ArgMatches, mut base: Settings) -> Result<Settings, Failure> {
    if let Some(path) = m.get_one::<String>("config") {
        let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))?;
        base.merge(&Settings::parse(&text).map_err(usage)?);
    }
    for (name, _) in SETTING_FLAGS {
        if let Some(v) = m.get_one::<String>(name) {
            base.set(name, v).map_err(usage)?;
        }
    }
    Ok(base)
}

fn emit(m: &ArgMatches, text: &str) -> Outcome {
    match m.get_one::<String>("output") {
        Some(path) => fs::write(Path::new(path), text).map_err(|e| runtime(format!("cannot write {path}: {e}"))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn point(m: &ArgMatches) -> Outcome {
    let s = settings(m, Settings::default())?;
    let p = s.point().map_err(usage)?;
    let oracle = m.get_flag("oracle-check");
    if oracle && s.get("quantity").is_none() {
        return report_oracle(&p.cfg);
    }
    let mut values = Vec::new();
    for q in s.quantities().map_err(usage)? {
        // a single point reports divergence instead of printing `inf`
        let v = q.kind.evaluate(&p).map_err(|e| runtime(format!("{q}: {e}")))?;
        let v = if q.log10 { v.log10() } else { v };
        values.push(dsu11::sweep::format_value(v));
    }
    emit(m, &format!("{}\n", values.join(",")))?;
    if oracle {
        report_oracle(&p.cfg)?;
    }
    Ok(())
}

fn report_oracle(cfg: &dsu11::InterferometerConfig) -> Outcome {
    let line = oracle_point(cfg);
    eprintln!("{line}");
    if line.pass {
        Ok(())
    } else {
        Err(runtime("oracle check failed"))
    }
}

fn sweep(m: &ArgMatches) -> Outcome {
    let base = match m.get_one::<String>("figure") {
        Some(id) => Settings::from_spec(&figure_preset(id).map_err(usage)?),
        None => Settings::default(),
    };
    let spec = settings(m, base)?.sweep_spec().map_err(usage)?;
    if m.get_flag("dump-config") {
        return emit(m, &Settings::from_spec(&spec).to_config_string());
    }
    tabulate(m, &spec)?;
    Ok(())
}

/// Runs the sweep, writes the CSV and relays per-point notes to stderr.
fn tabulate(m: &ArgMatches, spec: &SweepSpec) -> Result<dsu11::sweep::Table, Failure> {
    let table = run_sweep(spec).map_err(runtime)?;
    for note in &table.notes {
        eprintln!("note: {note}");
    }
    emit(m, &table.to_csv())?;
    Ok(table)
}

fn figure(m: &ArgMatches) -> Outcome {
    let id = m.get_one::<String>("id").expect("required");
    let spec = figure_preset(id).map_err(usage)?;
    if m.get_flag("dump-config") {
        return emit(m, &Settings::from_spec(&spec).to_config_string());
    }
    let table = tabulate(m, &spec)?;
    let lines = figure_properties(id, &spec, &table).map_err(runtime)?;
    for line in &lines {
        eprintln!("{line}");
    }
    match lines.iter().filter(|l| !l.pass).count() {
        0 => Ok(()),
        n => Err(runtime(format!("{n} figure properties failed"))),
    }
}

fn run_check(m: &ArgMatches) -> Outcome {
    let mode: CheckMode = m.get_one::<String>("mode").expect("required").parse().map_err(usage)?;
    let lines = check(mode);
    for line in &lines {
        println!("{line}");
    }
    match lines.iter().filter(|l| !l.pass).count() {
        0 => Ok(()),
        n => Err(runtime(format!("{n} checks failed"))),
    }
}

fn main() -> ExitCode {
    let matches = cli().get_matches();
    let outcome = match matches.subcommand() {
        Some(("point", m)) => point(m),
        Some(("sweep", m)) => sweep(m),
        Some(("figure", m)) => figure(m),
        Some(("check", m)) => run_check(m),
        _ => unreachable!("subcommand required"),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
