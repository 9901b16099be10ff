use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use dwm_core::io::fmt17;
use dwm_core::scenarios::{
    compute_scenario, extended_f64, run_scenario, sweep, sweep_csv, OutputFormat, ScenarioConfig,
    ScenarioId, SweepConfig, FIG5_OMEGA_A2, FIGURE_SITES, RATIO, REST_NU,
};
use dwm_core::spectral::{bound_threshold, classify_with_threshold};
use dwm_core::{
    assemble_hamiltonian, dispersion, effective_depth, eigendecompose, momentum_potential,
    momentum_potential_extrema, predicted_bound_count, sample_potential, solve_boost, LatticeModel,
    PotentialSpec,
};

use crate::merge::{load_object, merged};
use crate::sink::{emit, json};
use crate::{Cli, Command, EvolveArgs, FigureArgs, Potential, Status, SweepArgs};

pub fn run(cli: &Cli) -> Result<Status> {
    let config = cli.config.as_deref();
    match &cli.command {
        Command::Spectrum(a) => spectrum(cli, merged(config, a)?).map(|_| Status::Ok),
        Command::Evolve(a) => evolve(cli, a),
        Command::Boost(a) => boost(cli, merged(config, a)?).map(|_| Status::Ok),
        Command::Dispersion(a) => curve(cli, merged(config, a)?, Curve::Dispersion),
        Command::Wk(a) => curve(cli, merged(config, a)?, Curve::Wk),
        Command::Figure(a) => figure(cli, a),
        Command::Sweep(a) => run_sweep(cli, a),
    }
}

fn default_sites() -> usize {
    FIGURE_SITES
}

fn default_ratio() -> f64 {
    RATIO
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectrumOptions {
    #[serde(default = "default_sites")]
    sites: usize,
    nu: Option<f64>,
    #[serde(default = "default_ratio")]
    ratio: f64,
    omega_a2: Option<f64>,
    threshold: Option<f64>,
    #[serde(default)]
    dump_states: Vec<usize>,
}

fn spectrum(cli: &Cli, o: SpectrumOptions) -> Result<()> {
    let model = LatticeModel::with_sites(o.sites)?;
    let (spec, well) = match (o.nu, o.omega_a2) {
        (Some(_), Some(_)) => bail!("give either --nu or --omega-a2, not both"),
        (_, Some(omega)) => (
            PotentialSpec::harmonic(omega),
            json!({"shape": "harmonic", "omega_a2": omega}),
        ),
        (nu, None) => {
            let nu = nu.unwrap_or(REST_NU);
            ensure!(o.ratio > 0.0, "--ratio must be positive");
            (
                PotentialSpec::poschl_teller(nu, 1.0 / o.ratio),
                json!({"shape": "poschl_teller", "nu": nu, "ratio": o.ratio}),
            )
        }
    };
    let mut report = eigendecompose(&assemble_hamiltonian(&model, &spec, 0.0)?)?;
    let threshold = o.threshold.unwrap_or_else(|| bound_threshold(&model));
    classify_with_threshold(&mut report, &model, threshold)?;
    for &j in &o.dump_states {
        ensure!(
            j < report.len(),
            "level {j} does not exist ({} levels)",
            report.len()
        );
    }

    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    let formats = formats_or_both(&cli.format);
    let mut files: Vec<(String, String)> = Vec::new();
    if formats.contains(&OutputFormat::Csv) {
        files.push(("spectrum.csv".into(), report.to_csv()));
        let mut pot = String::from("n,V\n");
        for (i, v) in sample_potential(&spec, &model, 0.0)?.iter().enumerate() {
            let _ = writeln!(pot, "{},{}", model.site(i), fmt17(*v));
        }
        files.push(("potential.csv".into(), pot));
        for &j in &o.dump_states {
            files.push((format!("state_{j}.csv"), report.state(j).to_csv()));
        }
    }
    if formats.contains(&OutputFormat::Json) {
        let levels: Vec<Value> = (0..report.len())
            .map(|j| {
                json!({
                    "index": j,
                    "eigenvalue": report.eigenvalues[j],
                    "participation": report.participation[j],
                    "bound": report.bound[j],
                    "localized": report.localized[j],
                    "parity": report.parity[j],
                })
            })
            .collect();
        let doc = json!({
            "sites": model.sites(),
            "well": well,
            "threshold": threshold,
            "bound_count": report.bound_count(),
            "participation_disagreements": report.disagreements(),
            "levels": levels,
        });
        files.push(("spectrum.json".into(), json(&doc)?));
    }
    write_files(&dir, &files)?;
    eprintln!("wrote {} files to {}", files.len(), dir.display());
    println!(
        "{} levels, {} bound below {}",
        report.len(),
        report.bound_count(),
        fmt17(threshold)
    );
    Ok(())
}

fn formats_or_both(given: &[OutputFormat]) -> Vec<OutputFormat> {
    if given.is_empty() {
        vec![OutputFormat::Csv, OutputFormat::Json]
    } else {
        given.to_vec()
    }
}

fn write_files(dir: &Path, files: &[(String, String)]) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for (name, contents) in files {
        fs::write(dir.join(name), contents)?;
    }
    Ok(())
}

/// The scenario config of a run: file first, then flags.
fn scenario_config(cli: &Cli, default_id: Option<ScenarioId>) -> Result<ScenarioConfig> {
    let mut obj = load_object(cli.config.as_deref())?;
    if let Some(id) = default_id {
        obj.entry("id").or_insert_with(|| json!(id));
    }
    let mut cfg: ScenarioConfig =
        serde_json::from_value(Value::Object(obj)).context("invalid scenario config")?;
    if let Some(out) = &cli.out {
        cfg.output_dir = out.clone();
    }
    if !cli.format.is_empty() {
        cfg.formats = cli.format.iter().copied().collect();
    }
    Ok(cfg)
}

fn report_run(id: ScenarioId, valid: bool, dir: &Path, files: usize) -> Status {
    eprintln!("{}: wrote {files} files to {}", id.name(), dir.display());
    if valid {
        Status::Ok
    } else {
        eprintln!(
            "{}: radiation reached the lattice edge; results are flagged invalid",
            id.name()
        );
        Status::Invalid
    }
}

fn evolve(cli: &Cli, a: &EvolveArgs) -> Result<Status> {
    let mut cfg = scenario_config(cli, Some(ScenarioId::Custom))?;
    ensure!(
        cfg.id == ScenarioId::Custom,
        "evolve runs the custom scenario; use `dwm figure {}` for built-in ones",
        cfg.id.name()
    );
    let numeric = [
        ("nu", a.nu),
        ("ratio", a.ratio),
        ("omega_a2", a.omega_a2),
        ("velocity", a.velocity),
        ("dt", a.dt),
        ("tmax", a.tmax),
        ("stride", a.stride.map(|s| s as f64)),
        ("sites", a.sites.map(|s| s as f64)),
        ("center", a.center),
        ("window", a.window),
    ];
    for (key, value) in numeric {
        if let Some(v) = value {
            cfg.overrides.insert(key.to_string(), v);
        }
    }
    match a.potential {
        Some(Potential::Harmonic) => {
            cfg.overrides
                .entry("omega_a2".into())
                .or_insert(FIG5_OMEGA_A2);
        }
        Some(Potential::Pt) if cfg.overrides.contains_key("omega_a2") => {
            bail!("--omega-a2 applies to the harmonic well only")
        }
        _ => {}
    }
    if a.init.is_some() {
        cfg.init = a.init.clone();
    }
    if let Some(p) = a.boost_phase {
        cfg.boost_phase = p;
    }
    let out = compute_scenario(&cfg)?;
    write_files(&cfg.output_dir, &out.files)?;
    Ok(report_run(
        cfg.id,
        out.summary.valid,
        &cfg.output_dir,
        out.files.len(),
    ))
}

fn figure(cli: &Cli, a: &FigureArgs) -> Result<Status> {
    let ids: Vec<ScenarioId> = if a.id.eq_ignore_ascii_case("all") {
        ScenarioId::BUILT_IN.to_vec()
    } else {
        vec![a.id.parse()?]
    };
    let base = scenario_config(cli, Some(ids[0]))?;
    let mut status = Status::Ok;
    for id in ids {
        let mut cfg = base.clone();
        cfg.id = id;
        for (k, v) in &a.set {
            cfg.overrides.insert(k.clone(), *v);
        }
        if a.init.is_some() {
            cfg.init = a.init.clone();
        }
        if let Some(p) = a.boost_phase {
            cfg.boost_phase = p;
        }
        let res = run_scenario(&cfg)?;
        if report_run(id, res.summary.valid, &res.dir, res.files.len()) == Status::Invalid {
            status = Status::Invalid;
        }
    }
    Ok(status)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoostOptions {
    velocity: Vec<f64>,
    nu: Option<f64>,
}

#[derive(Debug, Serialize)]
struct BoostRow {
    v: f64,
    qa: f64,
    sin_qa: f64,
    gamma: f64,
    #[serde(with = "extended_f64")]
    mass_ratio: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    nu_star: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    predicted_bound_count: Option<usize>,
}

fn boost(cli: &Cli, o: BoostOptions) -> Result<()> {
    ensure!(!o.velocity.is_empty(), "--velocity is required");
    let rows = o
        .velocity
        .iter()
        .map(|&v| {
            let bp = solve_boost(v)?;
            let (nu_star, predicted) = match o.nu {
                Some(nu) if bp.mass_ratio.is_finite() => (
                    Some(effective_depth(nu, bp.mass_ratio)),
                    Some(predicted_bound_count(nu, v)?),
                ),
                _ => (None, None),
            };
            Ok(BoostRow {
                v,
                qa: bp.qa,
                sin_qa: bp.sin_qa(),
                gamma: bp.gamma,
                mass_ratio: bp.mass_ratio,
                nu_star,
                predicted_bound_count: predicted,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    emit(
        cli.out.as_deref(),
        &cli.format,
        OutputFormat::Json,
        "boost",
        |f| match f {
            OutputFormat::Json => json(&rows),
            OutputFormat::Csv => {
                let mut s = String::from("v,qa,sin_qa,gamma,mass_ratio,nu_star,predicted\n");
                for r in &rows {
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{},{},{}",
                        fmt17(r.v),
                        fmt17(r.qa),
                        fmt17(r.sin_qa),
                        fmt17(r.gamma),
                        fmt17(r.mass_ratio),
                        r.nu_star.map(fmt17).unwrap_or_default(),
                        r.predicted_bound_count
                            .map(|n| n.to_string())
                            .unwrap_or_default()
                    );
                }
                Ok(s)
            }
        },
    )
}

#[derive(Debug, Clone, Copy)]
enum Curve {
    Dispersion,
    Wk,
}

fn default_k_min() -> f64 {
    -PI
}

fn default_k_max() -> f64 {
    PI
}

fn default_k_step() -> f64 {
    0.01
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveOptions {
    #[serde(default)]
    velocity: f64,
    #[serde(default = "default_k_min")]
    k_min: f64,
    #[serde(default = "default_k_max")]
    k_max: f64,
    #[serde(default = "default_k_step")]
    k_step: f64,
}

/// k_min, k_min + step, … up to k_max inclusive (within rounding).
fn k_grid(o: &CurveOptions) -> Result<Vec<f64>> {
    ensure!(
        o.k_step > 0.0 && o.k_step.is_finite(),
        "--k-step must be positive"
    );
    ensure!(
        o.k_min.is_finite() && o.k_max.is_finite() && o.k_max >= o.k_min,
        "need k_min ≤ k_max"
    );
    let n = ((o.k_max - o.k_min) / o.k_step + 1e-9).floor() as usize;
    ensure!(n < 10_000_000, "k grid too fine");
    Ok((0..=n).map(|i| o.k_min + i as f64 * o.k_step).collect())
}

fn curve(cli: &Cli, o: CurveOptions, kind: Curve) -> Result<Status> {
    let bp = solve_boost(o.velocity)?;
    let ks = k_grid(&o)?;
    let (stem, label, values): (&str, &str, Vec<f64>) = match kind {
        Curve::Dispersion => (
            "dispersion",
            "E",
            ks.iter().map(|&k| dispersion(k, &bp)).collect(),
        ),
        Curve::Wk => (
            "wk",
            "W",
            ks.iter()
                .map(|&k| momentum_potential(k, o.velocity))
                .collect(),
        ),
    };
    emit(
        cli.out.as_deref(),
        &cli.format,
        OutputFormat::Csv,
        stem,
        |f| match f {
            OutputFormat::Csv => {
                let mut s = format!("k,{label}\n");
                for (k, y) in ks.iter().zip(&values) {
                    let _ = writeln!(s, "{},{}", fmt17(*k), fmt17(*y));
                }
                Ok(s)
            }
            OutputFormat::Json => {
                let points: Vec<Value> = ks
                    .iter()
                    .zip(&values)
                    .map(|(k, y)| json!({"k": k, label: y}))
                    .collect();
                let mut doc = json!({"v": o.velocity, "points": points});
                if let Curve::Wk = kind {
                    doc["extrema"] = serde_json::to_value(momentum_potential_extrema(o.velocity))?;
                }
                json(&doc)
            }
        },
    )?;
    Ok(Status::Ok)
}

fn run_sweep(cli: &Cli, a: &SweepArgs) -> Result<Status> {
    let cfg: SweepConfig = merged(cli.config.as_deref(), a)?;
    for v in &cfg.velocities {
        ensure!(v.abs() <= 2.0, "sweep velocities need |v| ≤ 2, got {v}");
    }
    let rows = sweep(&cfg);
    emit(
        cli.out.as_deref(),
        &cli.format,
        OutputFormat::Csv,
        "sweep",
        |f| match f {
            OutputFormat::Csv => Ok(sweep_csv(&rows)),
            OutputFormat::Json => json(&rows),
        },
    )?;
    Ok(Status::Ok)
}
