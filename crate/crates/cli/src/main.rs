// SPDX-License-Identifier: Apache-2.0

mod args;

use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;
use serde_json::json;

use args::{Cli, Command, Common, ExperimentCommand, Format, JacobiCommand, OracleCommand, SpectralCommand, TmCommand, TransportCommand};
use jacobi_transport::dynamics::{oracle_run, time_series_csv, SampleState};
use jacobi_transport::harness::{
    acet_sets_probe_with, rate_report, run_experiment, zoo, ExperimentConfig, Quantity, EXPERIMENT_SCHEMA,
};
use jacobi_transport::jacobi::{measure_to_jacobi, periodize, transfer_sweep, DiscreteMeasure, ModelDocument};
use jacobi_transport::spectral::{ac_density, tm_inverse_square_integral};
use jacobi_transport::transport::{crystalline_current, repeated_currents, steady_current_with, thouless_current, EbbSpec};

/// Exit status 1: bad input. Exit status 2: the numerics failed or, under `--strict`, warned.
enum Failure {
    Validation(String),
    Numerical(String),
}

impl From<jacobi_transport::Error> for Failure {
    fn from(e: jacobi_transport::Error) -> Self {
        if e.is_validation() {
            Failure::Validation(e.to_string())
        } else {
            Failure::Numerical(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Validation(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Validation(e.to_string())
    }
}

type Outcome = Result<Vec<String>, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

/// The experiment config described by `--config` or `--model`, with flag overrides applied.
fn setup(common: &Common) -> Result<ExperimentConfig, Failure> {
    let mut config = match (&common.config, &common.model) {
        (Some(path), _) => ExperimentConfig::from_json(&read(path)?)?,
        (None, Some(path)) => {
            let doc: ModelDocument = serde_json::from_str(&read(path)?)
                .map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
            ExperimentConfig::new(doc)
        }
        (None, None) => return Err(Failure::Validation("one of --config or --model is required".into())),
    };
    if let Some(seed) = common.seed {
        config.seed = Some(seed);
    }
    if let Some(nodes) = common.grid {
        config.grid.nodes = nodes;
    }
    if let Some(eta) = common.eta {
        config.grid.eta = eta;
    }
    if let Some(window) = common.window {
        config.window = window;
    }
    if let Some(list) = &common.l_list {
        config.l_list = list.clone();
    }
    if let Some(n) = common.copies {
        config.n_list = (1..=n).collect();
    }
    Ok(config.materialized()?)
}

fn emit(common: &Common, name: &str, json: &impl Serialize, csv: impl FnOnce() -> Result<String, Failure>) -> Result<(), Failure> {
    let (text, ext) = match common.format {
        Format::Json => (serde_json::to_string_pretty(json).map_err(|e| Failure::Numerical(e.to_string()))? + "\n", "json"),
        Format::Csv => (csv()?, "csv"),
    };
    match &common.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join(format!("{name}.{ext}")), text)?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Validation(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

fn num(x: f64) -> String {
    format!("{x:.17e}")
}

fn jacobi(cmd: JacobiCommand) -> Outcome {
    let JacobiCommand::FromMeasure { measure, n, common } = cmd;
    let text = read(&measure)?;
    let nu: DiscreteMeasure = serde_json::from_str(&text).map_err(|e| Failure::Validation(format!("{}: {e}", measure.display())))?;
    let model = measure_to_jacobi(&nu, n.unwrap_or(nu.len()))?;
    let c = model.all_coefficients().expect("measure models are explicit");
    emit(&common, "jacobi", &c, || {
        table(
            &["n", "a", "b"],
            c.b.iter().enumerate().map(|(i, b)| {
                vec![(i + 1).to_string(), c.a.get(i).map_or(String::new(), |a| num(*a)), num(*b)]
            }),
        )
    })?;
    Ok(Vec::new())
}

fn tm(cmd: TmCommand) -> Outcome {
    match cmd {
        TmCommand::Norm { energy, common } => {
            let config = setup(&common)?;
            let model = config.build_model()?;
            let mats = transfer_sweep(&model, energy, &config.l_list)?;
            let rows: Vec<(usize, f64)> = config.l_list.iter().zip(&mats).map(|(&l, t)| (l, t.log_norm())).collect();
            let json = json!({"E": energy, "rows": rows.iter().map(|(l, g)| json!({"L": l, "log_norm": g, "norm": g.exp()})).collect::<Vec<_>>()});
            emit(&common, "tm-norm", &json, || {
                table(&["L", "log_norm", "norm"], rows.iter().map(|(l, g)| vec![l.to_string(), num(*g), num(g.exp())]))
            })?;
            Ok(Vec::new())
        }
        TmCommand::Integral { common } => {
            let config = setup(&common)?;
            let model = config.build_model()?;
            let grid = config.energy_grid()?;
            let mut warnings = Vec::new();
            let mut rows = Vec::new();
            for &l in &config.l_list {
                let est = tm_inverse_square_integral(&model, l, &grid, config.tolerances.tm_refinement)?;
                if est.flagged {
                    warnings.push(format!("L = {l}: integral not converged under grid refinement"));
                }
                rows.push((l, est));
            }
            let json = json!({"window": config.window, "grid": grid, "rows": rows.iter().map(|(l, e)| json!({"L": l, "estimate": e})).collect::<Vec<_>>()});
            emit(&common, "tm-integral", &json, || {
                table(
                    &["L", "value", "coarse", "flagged"],
                    rows.iter().map(|(l, e)| vec![l.to_string(), num(e.value), num(e.coarse), e.flagged.to_string()]),
                )
            })?;
            Ok(warnings)
        }
    }
}

fn spectral(cmd: SpectralCommand) -> Outcome {
    let SpectralCommand::Density { common } = cmd;
    let config = setup(&common)?;
    let model = config.build_model()?;
    let grid = config.energy_grid()?;
    let energies = grid.points();
    let density = energies
        .iter()
        .map(|&e| ac_density(&model, e, grid.eta))
        .collect::<Result<Vec<f64>, _>>()?;
    let json = json!({"eta": grid.eta, "E": energies, "density": density});
    emit(&common, "density", &json, || {
        table(&["E", "density"], energies.iter().zip(&density).map(|(e, d)| vec![num(*e), num(*d)]))
    })?;
    Ok(Vec::new())
}

fn transport(cmd: TransportCommand) -> Outcome {
    match cmd {
        TransportCommand::Lb { sites, common } => {
            let config = setup(&common)?;
            let model = config.build_model()?;
            let spec = EbbSpec::from_model(&model, sites, config.left.clone(), config.right.clone(), config.coupling, config.window())?
                .with_grid(config.energy_grid()?)?;
            let result = steady_current_with(&spec, config.tolerances.refinement)?;
            emit(&common, "lb", &result, || Ok(result.to_csv()?))?;
            Ok(result.metadata.warnings.clone())
        }
        TransportCommand::Thouless { sites, common } => {
            let config = setup(&common)?;
            let per = periodize(&config.build_model()?, sites, config.internal_coupling)?;
            let current = thouless_current(&per, config.window())?;
            scalar(&common, "thouless", sites, config.window, current)
        }
        TransportCommand::Crystalline { sites, common } => {
            let config = setup(&common)?;
            let per = periodize(&config.build_model()?, sites, config.internal_coupling)?;
            let current = crystalline_current(&per, &config.left, &config.right, config.coupling, config.window(), config.band_nodes)?;
            scalar(&common, "crystalline", sites, config.window, current)
        }
        TransportCommand::Repeat { sites, common } => {
            let config = setup(&common)?;
            let per = periodize(&config.build_model()?, sites, config.internal_coupling)?;
            let n_max = *config.n_list.last().expect("validated non-empty");
            let (currents, means) = repeated_currents(&per, &config.left, &config.right, config.coupling, n_max, &config.energy_grid()?)?;
            let json = json!({"L": sites, "window": config.window, "current": currents, "cesaro_mean": means});
            emit(&common, "repeat", &json, || {
                table(
                    &["N", "current", "cesaro_mean"],
                    currents.iter().zip(&means).enumerate().map(|(i, (j, m))| vec![(i + 1).to_string(), num(*j), num(*m)]),
                )
            })?;
            Ok(Vec::new())
        }
    }
}

fn scalar(common: &Common, name: &str, sites: usize, window: [f64; 2], current: f64) -> Outcome {
    let json = json!({"L": sites, "window": window, "current": current});
    emit(common, name, &json, || table(&["L", "current"], [vec![sites.to_string(), num(current)]]))?;
    Ok(Vec::new())
}

fn oracle(cmd: OracleCommand) -> Outcome {
    let OracleCommand::Dynamics {
        sites,
        lead_sites,
        t_max,
        samples,
        empty_sample,
        common,
    } = cmd;
    let config = setup(&common)?;
    let model = config.build_model()?;
    let spec = EbbSpec::from_model(&model, sites, config.left.clone(), config.right.clone(), config.coupling, config.window())?
        .with_grid(config.energy_grid()?)?;
    let state = if empty_sample { SampleState::Empty } else { SampleState::Uniform };
    let (summary, series) = oracle_run(&spec, lead_sites, state, t_max, samples)?;
    emit(&common, "dynamics", &summary, || Ok(time_series_csv(&series)?))?;
    let mut warnings = Vec::new();
    if summary.recurrence_warning {
        warnings.push(format!("t_max = {t_max} exceeds the recurrence time of the truncated leads"));
    }
    Ok(warnings)
}

fn experiment(cmd: ExperimentCommand) -> Outcome {
    match cmd {
        ExperimentCommand::Run { common } => {
            let mut config = setup(&common)?;
            if let Some(dir) = &common.out {
                config.output.dir = dir.clone();
            }
            let report = run_experiment(&config)?;
            report.write()?;
            let verdict = &report.verdict;
            let json = json!({
                "csv": report.config.output.csv(),
                "json": report.config.output.json(),
                "verdict": verdict,
            });
            match common.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&json).expect("verdict serializes")),
                Format::Csv => print!("{}", report.to_csv()?),
            }
            Ok(report.warnings().cloned().collect())
        }
        ExperimentCommand::Acet {
            threshold,
            norm_threshold,
            common,
        } => {
            let config = setup(&common)?;
            let report = acet_sets_probe_with(&config.build_model()?, &config.energy_grid()?, &config.l_list, threshold, norm_threshold)?;
            emit(&common, "acet", &report, || Ok(report.to_csv()?))?;
            Ok(Vec::new())
        }
        ExperimentCommand::Rates { common } => {
            let base = if common.config.is_some() || common.model.is_some() {
                Some(setup(&common)?)
            } else {
                None
            };
            let models: Vec<(String, ModelDocument)> = match &base {
                Some(c) => vec![("model".to_string(), c.model.clone())],
                None => zoo()?.into_iter().map(|(l, m)| (l.to_string(), m.to_document(None))).collect(),
            };
            let mut verdicts = Vec::new();
            let mut warnings = Vec::new();
            for (label, doc) in models {
                for q in [Quantity::SteadyCurrent, Quantity::ThoulessCurrent, Quantity::CrystallineCurrent] {
                    let mut c = base.clone().unwrap_or_else(|| ExperimentConfig::new(doc.clone()));
                    c.model = doc.clone();
                    c.quantity = q;
                    if base.is_none() {
                        apply_flags(&mut c, &common);
                    }
                    let report = run_experiment(&c)?;
                    warnings.extend(report.warnings().map(|w| format!("{label} {}: {w}", q.name())));
                    verdicts.push((label.clone(), report.verdict));
                }
            }
            let report = rate_report(&verdicts)?;
            eprint!("{}", report.to_table());
            emit(&common, "rates", &report, || Ok(report.to_csv()?))?;
            Ok(warnings)
        }
        ExperimentCommand::Schema => {
            print!("{EXPERIMENT_SCHEMA}");
            Ok(Vec::new())
        }
    }
}

fn apply_flags(c: &mut ExperimentConfig, common: &Common) {
    if let Some(nodes) = common.grid {
        c.grid.nodes = nodes;
    }
    if let Some(eta) = common.eta {
        c.grid.eta = eta;
    }
    if let Some(window) = common.window {
        c.window = window;
    }
    if let Some(list) = &common.l_list {
        c.l_list = list.clone();
    }
}

fn strict_of(command: &Command) -> bool {
    let common = match command {
        Command::Jacobi(JacobiCommand::FromMeasure { common, .. }) => common,
        Command::Tm(TmCommand::Norm { common, .. } | TmCommand::Integral { common }) => common,
        Command::Spectral(SpectralCommand::Density { common }) => common,
        Command::Transport(
            TransportCommand::Lb { common, .. }
            | TransportCommand::Thouless { common, .. }
            | TransportCommand::Crystalline { common, .. }
            | TransportCommand::Repeat { common, .. },
        ) => common,
        Command::Oracle(OracleCommand::Dynamics { common, .. }) => common,
        Command::Experiment(
            ExperimentCommand::Run { common } | ExperimentCommand::Acet { common, .. } | ExperimentCommand::Rates { common },
        ) => common,
        Command::Experiment(ExperimentCommand::Schema) => return false,
    };
    common.strict
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let strict = strict_of(&cli.command);
    let outcome = match cli.command {
        Command::Jacobi(c) => jacobi(c),
        Command::Tm(c) => tm(c),
        Command::Spectral(c) => spectral(c),
        Command::Transport(c) => transport(c),
        Command::Oracle(c) => oracle(c),
        Command::Experiment(c) => experiment(c),
    };
    match outcome {
        Ok(warnings) => {
            for w in &warnings {
                eprintln!("warning: {w}");
            }
            if strict && !warnings.is_empty() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(2)
        }
    }
}
