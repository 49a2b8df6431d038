use std::fs;
use std::path::Path;
use std::time::Instant;

use arcsine_fock::laws::{arcsine_density, classical_moment_quadrature};
use arcsine_fock::moments::write_convergence_csv;
use arcsine_fock::scalar::{serde_string, to_f64};
use arcsine_fock::selfcheck::{self, Options, Suite};
use arcsine_fock::spectral::{default_dimension, hermite_density_grid, lossless_order};
use arcsine_fock::{
    convergence_table, format_exact, ks_distance_to_arcsine, reconstruct_state_measure,
    scaled_moment, ClassicalOscillator, ConvergenceRow, DiscreteMeasure, Error, ExactScalar,
    JacobiSequence, NumberState,
};
use serde::Serialize;

use crate::config::{Command, ConfigError, Format, RunConfig};
use crate::svg::{text_panel, Plot, Series};

/// Lossless orders below this trigger a warning from `reconstruct`.
const LOW_LOSSLESS_ORDER: usize = 4;

#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    Compute(Error),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Compute(e) if e.is_cap() => 3,
            _ => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "{e}"),
            CliError::Compute(e) => match flag_of(e) {
                Some(flag) => write!(f, "invalid {flag}: {e}"),
                None => write!(f, "{e}"),
            },
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

/// The flag responsible for a library error, when there is one.
fn flag_of(e: &Error) -> Option<&'static str> {
    match e {
        Error::WeightIndexOutOfRange { .. }
        | Error::NonPositiveWeight { .. }
        | Error::InvalidJacobi(_)
        | Error::QOutOfRange(_) => Some("--jacobi"),
        Error::NonPositiveScale(_) => Some("--scale"),
        Error::WordCapExceeded { .. } => Some("--orders"),
        Error::DimensionTooSmall { .. } | Error::DimensionTooLarge { .. } => Some("--K"),
        Error::NonPositiveAmplitude(_) => Some("--A2"),
        _ => None,
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Compute(e)
    }
}

/// What a command produced: the primary artifact, an optional figure, side
/// notes for stderr, and whether a selfcheck failed.
pub struct Artifact {
    pub body: Vec<u8>,
    pub figure: Option<String>,
    pub notes: Vec<String>,
    pub failed: bool,
}

impl Artifact {
    fn new(body: Vec<u8>) -> Self {
        Self {
            body,
            figure: None,
            notes: Vec::new(),
            failed: false,
        }
    }
}

/// Runs `config` and writes its outputs. Returns whether every check passed.
pub fn execute(config: &RunConfig, inject_fault: Option<Suite>) -> Result<bool, CliError> {
    config.validate()?;
    let artifact = match config.command {
        Command::Moments => moments(config)?,
        Command::Converge => converge(config)?,
        Command::Reconstruct => reconstruct(config)?,
        Command::Classical => classical(config)?,
        Command::Selfcheck => selfcheck(config, inject_fault)?,
    };
    for note in &artifact.notes {
        eprintln!("{note}");
    }
    match &config.out {
        Some(path) => write_file(path, &artifact.body)?,
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(&artifact.body)
                .map_err(|e| CliError::Io(format!("stdout: {e}")))?;
        }
    }
    if let (Some(path), Some(figure)) = (&config.plot, &artifact.figure) {
        write_file(path, figure.as_bytes())?;
    }
    Ok(!artifact.failed)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut v = serde_json::to_vec_pretty(value).expect("output serializes");
    v.push(b'\n');
    v
}

fn csv_bytes(rows: &[Vec<String>]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(r).map_err(Error::from)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

/// Picks the body for `config.format`; the figure is built lazily and only
/// when it is needed.
fn finish<F: FnOnce() -> String>(
    config: &RunConfig,
    csv: impl FnOnce() -> Result<Vec<u8>, CliError>,
    json: impl FnOnce() -> Vec<u8>,
    figure: F,
) -> Result<Artifact, CliError> {
    let want_figure = config.format == Format::Svg || config.plot.is_some();
    let figure = want_figure.then(figure);
    let body = match config.format {
        Format::Csv => csv()?,
        Format::Json => json(),
        Format::Svg => figure.clone().unwrap_or_default().into_bytes(),
    };
    let mut a = Artifact::new(body);
    a.figure = figure;
    Ok(a)
}

#[derive(Serialize)]
struct MomentRow {
    #[serde(rename = "N")]
    state: usize,
    order: usize,
    #[serde(with = "serde_string")]
    scale: ExactScalar,
    #[serde(with = "serde_string")]
    scaled_moment: ExactScalar,
}

fn moments(config: &RunConfig) -> Result<Artifact, CliError> {
    let mut rows = Vec::new();
    for &n in &config.states {
        let state = NumberState::new(n);
        let scale = config.scale.resolve(&config.jacobi, state)?;
        for &order in &config.orders {
            let value = scaled_moment(config.engine.into(), &config.jacobi, state, order, &scale)?;
            rows.push(MomentRow {
                state: n,
                order,
                scale: scale.clone(),
                scaled_moment: value,
            });
        }
    }
    finish(
        config,
        || {
            let mut table = vec![vec!["N", "order", "scale", "scaled_moment"]
                .into_iter()
                .map(String::from)
                .collect()];
            table.extend(rows.iter().map(|r| {
                vec![
                    r.state.to_string(),
                    r.order.to_string(),
                    format_exact(&r.scale),
                    format_exact(&r.scaled_moment),
                ]
            }));
            csv_bytes(&table)
        },
        || json_bytes(&serde_json::json!({ "jacobi": config.jacobi, "rows": rows })),
        || {
            let series = config
                .states
                .iter()
                .map(|&n| {
                    let pts = rows
                        .iter()
                        .filter(|r| r.state == n)
                        .map(|r| (r.order as f64, to_f64(&r.scaled_moment)))
                        .collect();
                    Series::line(format!("N = {n}"), pts)
                })
                .collect();
            Plot {
                title: format!("scaled moments, {}", config.jacobi),
                x_label: "order".into(),
                y_label: "scaled moment".into(),
                series,
                ..Plot::default()
            }
            .render()
        },
    )
}

#[derive(Serialize)]
struct ConvergeOutput<'a> {
    jacobi: &'a JacobiSequence,
    scale: String,
    rows: &'a [ConvergenceRow],
}

fn converge(config: &RunConfig) -> Result<Artifact, CliError> {
    let rows = convergence_table(
        &config.jacobi,
        &config.states,
        &config.orders,
        &config.scale,
    )?;
    let mut orders: Vec<usize> = rows.iter().map(|r| r.order).collect();
    orders.sort_unstable();
    orders.dedup();
    finish(
        config,
        || {
            let mut buf = Vec::new();
            write_convergence_csv(&rows, &mut buf)?;
            Ok(buf)
        },
        || {
            json_bytes(&ConvergeOutput {
                jacobi: &config.jacobi,
                scale: config.scale.to_string(),
                rows: &rows,
            })
        },
        || {
            let series = orders
                .iter()
                .map(|&order| {
                    let pts = rows
                        .iter()
                        .filter(|r| r.order == order)
                        .map(|r| (r.state as f64, to_f64(&r.abs_diff)))
                        .collect();
                    Series::line(format!("order {order}"), pts)
                })
                .collect();
            Plot {
                title: format!("distance to arcsine moments, {}", config.jacobi),
                x_label: "N".into(),
                y_label: "|scaled moment - arcsine moment|".into(),
                log_x: true,
                log_y: true,
                series,
            }
            .render()
        },
    )
}

#[derive(Serialize)]
struct ReconstructOutput<'a> {
    jacobi: &'a JacobiSequence,
    #[serde(rename = "N")]
    state: usize,
    #[serde(rename = "K")]
    k: usize,
    scale: String,
    lossless_order: usize,
    ks_distance: f64,
    atoms: &'a [(f64, f64)],
}

fn reconstruct(config: &RunConfig) -> Result<Artifact, CliError> {
    let n = config.states[0];
    let state = NumberState::new(n);
    let k = config.k.unwrap_or_else(|| default_dimension(state));
    let scale = config.scale.resolve(&config.jacobi, state)?;
    let measure = reconstruct_state_measure(&config.jacobi, state, k, &scale)?;
    let ks = ks_distance_to_arcsine(&measure);
    let lossless = lossless_order(state, k);
    let scale_f = to_f64(&scale);

    let grid = if config.jacobi.is_standard() {
        Some(hermite_density_grid(n, scale_f, 401))
    } else {
        None
    };
    if let (Some(path), Some(grid)) = (&config.density, &grid) {
        let mut table = vec![vec!["x".to_string(), "density".to_string()]];
        table.extend(
            grid.iter()
                .map(|(x, f)| vec![format!("{x:.17e}"), format!("{f:.17e}")]),
        );
        write_file(path, &csv_bytes(&table)?)?;
    }

    let mut artifact = finish(
        config,
        || {
            let mut buf = Vec::new();
            measure.write_csv(&mut buf)?;
            Ok(buf)
        },
        || {
            json_bytes(&ReconstructOutput {
                jacobi: &config.jacobi,
                state: n,
                k,
                scale: format_exact(&scale),
                lossless_order: lossless,
                ks_distance: ks,
                atoms: measure.atoms(),
            })
        },
        || reconstruct_figure(config, n, &measure, grid.as_deref()),
    )?;
    if lossless < LOW_LOSSLESS_ORDER {
        artifact.notes.push(format!(
            "warning: K = {k} reproduces moments of N = {n} exactly only up to order {lossless}"
        ));
    }
    artifact
        .notes
        .push(format!("ks_distance_to_arcsine = {ks:.6e}"));
    Ok(artifact)
}

/// Spectral weights turned into a density by spreading each weight over the
/// half gaps to its neighbours.
fn weight_density(measure: &DiscreteMeasure) -> Vec<(f64, f64)> {
    let atoms = measure.atoms();
    if atoms.len() < 2 {
        return Vec::new();
    }
    (0..atoms.len())
        .map(|i| {
            let left = if i == 0 {
                atoms[1].0 - atoms[0].0
            } else {
                atoms[i].0 - atoms[i - 1].0
            };
            let right = if i + 1 == atoms.len() {
                left
            } else {
                atoms[i + 1].0 - atoms[i].0
            };
            (atoms[i].0, atoms[i].1 / (0.5 * (left + right)))
        })
        .collect()
}

fn reconstruct_figure(
    config: &RunConfig,
    n: usize,
    measure: &DiscreteMeasure,
    grid: Option<&[(f64, f64)]>,
) -> String {
    let edge = std::f64::consts::SQRT_2;
    let arcsine: Vec<(f64, f64)> = (1..400)
        .map(|i| {
            let x = -edge + 2.0 * edge * i as f64 / 400.0;
            (x, arcsine_density(x))
        })
        .collect();
    let mut series = vec![
        Series::line("arcsine density", arcsine),
        Series::markers("spectral weights / spacing", weight_density(measure)),
    ];
    if let Some(grid) = grid {
        series.push(Series::line("Hermite density", grid.to_vec()));
    }
    Plot {
        title: format!("spectral measure of N = {n}, {}", config.jacobi),
        x_label: "x".into(),
        y_label: "density".into(),
        series,
        ..Plot::default()
    }
    .render()
}

fn classical(config: &RunConfig) -> Result<Artifact, CliError> {
    let osc = ClassicalOscillator::new(config.amplitude_squared.clone())?;
    let rows: Vec<(usize, ExactScalar, f64, f64)> = config
        .orders
        .iter()
        .map(|&order| {
            let exact = osc.moment(order);
            let quad = classical_moment_quadrature(osc.amplitude(), order, config.panels);
            let diff = (to_f64(&exact) - quad).abs();
            (order, exact, quad, diff)
        })
        .collect();
    finish(
        config,
        || {
            let mut table = vec![vec!["order", "closed_form", "quadrature", "abs_diff"]
                .into_iter()
                .map(String::from)
                .collect()];
            table.extend(rows.iter().map(|(o, e, q, d)| {
                vec![
                    o.to_string(),
                    format_exact(e),
                    format!("{q:.17e}"),
                    format!("{d:.3e}"),
                ]
            }));
            csv_bytes(&table)
        },
        || {
            json_bytes(&serde_json::json!({
                "law": "classical_oscillator",
                "params": {
                    "A2": format_exact(&config.amplitude_squared),
                    "panels": config.panels,
                },
                "orders": rows.iter().map(|r| r.0).collect::<Vec<_>>(),
                "moments": rows.iter().map(|r| format_exact(&r.1)).collect::<Vec<_>>(),
                "quadrature": rows.iter().map(|r| r.2).collect::<Vec<_>>(),
                "abs_diff": rows.iter().map(|r| r.3).collect::<Vec<_>>(),
            }))
        },
        || {
            Plot {
                title: format!("time-averaged moments, A^2 = {}", config.amplitude_squared),
                x_label: "order".into(),
                y_label: "moment".into(),
                series: vec![
                    Series::line(
                        "closed form",
                        rows.iter().map(|r| (r.0 as f64, to_f64(&r.1))).collect(),
                    ),
                    Series::markers(
                        "quadrature",
                        rows.iter().map(|r| (r.0 as f64, r.2)).collect(),
                    ),
                ],
                ..Plot::default()
            }
            .render()
        },
    )
}

#[derive(Serialize)]
struct SuiteOutput {
    suite: &'static str,
    passed: bool,
    cases: usize,
    counterexample: Option<String>,
}

fn selfcheck(config: &RunConfig, inject_fault: Option<Suite>) -> Result<Artifact, CliError> {
    let start = Instant::now();
    let reports = selfcheck::run(&Options {
        fast: config.fast,
        inject_fault,
    })?;
    let lines: Vec<String> = reports.iter().map(|r| r.verdict()).collect();
    let failed = reports.iter().any(|r| !r.passed());
    let mut artifact = finish(
        config,
        || {
            let mut text = lines.join("\n");
            text.push('\n');
            Ok(text.into_bytes())
        },
        || {
            let out: Vec<SuiteOutput> = reports
                .iter()
                .map(|r| SuiteOutput {
                    suite: r.suite.name(),
                    passed: r.passed(),
                    cases: r.cases,
                    counterexample: r.counterexample.clone(),
                })
                .collect();
            json_bytes(&out)
        },
        || text_panel("selfcheck", &lines),
    )?;
    artifact.failed = failed;
    artifact.notes.push(format!(
        "selfcheck: {} suites in {:.2} s",
        reports.len(),
        start.elapsed().as_secs_f64()
    ));
    Ok(artifact)
}
