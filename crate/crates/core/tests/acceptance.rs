//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Scenario outputs of the first pass are kept in a temp
//! directory and compared byte for byte against a second pass.

use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dwm_core::boost::ExtremumKind;
use dwm_core::dynamics::rk4_step_chain;
use dwm_core::scenarios::{
    run_scenario, sweep, sweep_csv, ScenarioConfig, ScenarioId, Summary, SweepConfig,
};
use dwm_core::{
    effective_depth, eigendecompose, momentum_potential_extrema, solve_boost,
    TridiagonalHamiltonian,
};

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAILED"
    }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn scenario(id: ScenarioId, out: &Path) -> Summary {
    let cfg = ScenarioConfig::new(id).with_output_dir(out);
    run_scenario(&cfg)
        .unwrap_or_else(|e| panic!("{id} failed: {e}"))
        .summary
}

fn boost_constants() -> Verdict {
    let start = Instant::now();
    let bp = solve_boost(1.5).unwrap();
    let nu_star = effective_depth(0.97, 1.5119);
    let elapsed = start.elapsed();
    let sin_ok = bp.sin_qa() == 0.75;
    let mass_ok = (bp.mass_ratio - 1.5119).abs() <= 1e-3;
    let depth_ok = (nu_star - 1.27).abs() <= 0.01;
    let time_ok = elapsed < Duration::from_millis(1);
    Verdict::new(
        sin_ok && mass_ok && depth_ok && time_ok,
        format!(
            "sin(qa) = {} {}; m*/m = {:.6} {}; nu*(0.97, 1.5119) = {:.5} {}; {:?} {}",
            bp.sin_qa(),
            mark(sin_ok),
            bp.mass_ratio,
            mark(mass_ok),
            nu_star,
            mark(depth_ok),
            elapsed,
            mark(time_ok)
        ),
    )
}

fn fig2(out: &Path) -> (Verdict, Summary) {
    let start = Instant::now();
    let s = scenario(ScenarioId::Fig2, out);
    let elapsed = start.elapsed();
    let sp = s.spectrum.as_ref().unwrap();
    let count_ok = sp.bound_count == 1;
    let sturm_ok = sp.sturm_count == sp.bound_count;
    let (r, parity) = sp
        .bound_states
        .first()
        .map(|b| (b.participation, b.parity.unwrap_or(f64::NAN)))
        .unwrap_or((f64::NAN, f64::NAN));
    let r_ok = r < 40.0;
    let parity_ok = parity > 0.99;
    let time_ok = elapsed < Duration::from_secs(5);
    let v = Verdict::new(
        count_ok && sturm_ok && r_ok && parity_ok && time_ok,
        format!(
            "bound = {} {}; sturm = {} {}; R = {:.3} {}; parity = {:.6} {}; {} {}",
            sp.bound_count,
            mark(count_ok),
            sp.sturm_count,
            mark(sturm_ok),
            r,
            mark(r_ok),
            parity,
            mark(parity_ok),
            secs(elapsed),
            mark(time_ok)
        ),
    );
    (v, s)
}

fn fig3(out: &Path) -> Verdict {
    let start = Instant::now();
    let s = scenario(ScenarioId::Fig3, out);
    let elapsed = start.elapsed();
    let sp = s.spectrum.as_ref().unwrap();
    let count_ok = sp.bound_count == 2 && sp.sturm_count == 2;
    let parities: Vec<f64> = sp
        .bound_states
        .iter()
        .map(|b| b.parity.unwrap_or(f64::NAN))
        .collect();
    let parity_ok = parities.len() == 2
        && parities[0] * parities[1] < 0.0
        && parities.iter().all(|p| p.abs() > 0.99);
    let time_ok = elapsed < Duration::from_secs(5);
    Verdict::new(
        count_ok && parity_ok && time_ok,
        format!(
            "bound = {} (sturm {}) {}; parities = {:?} {}; {} {}",
            sp.bound_count,
            sp.sturm_count,
            mark(count_ok),
            parities,
            mark(parity_ok),
            secs(elapsed),
            mark(time_ok)
        ),
    )
}

fn analytic_oracle(fig2: &Summary) -> Verdict {
    // −2κ − ν²(a/l)²κ with ν = 0.97, a/l = 0.2
    let expected = -2.0 - 0.97f64.powi(2) * 0.04;
    let deepest = fig2.spectrum.as_ref().unwrap().min_eigenvalue;
    let rel = ((deepest + 2.0) - (expected + 2.0)).abs() / (expected + 2.0).abs();
    let ok = rel <= 0.05 && (expected - -2.037636).abs() < 1e-12;
    Verdict::new(
        ok,
        format!(
            "E0 = {deepest:.6}, continuum {expected:.6}, relative binding error {:.3}% {}",
            100.0 * rel,
            mark(ok)
        ),
    )
}

fn fig4(out: &Path) -> Verdict {
    let start = Instant::now();
    let runs = [
        (ScenarioId::Fig4a, "a", true),
        (ScenarioId::Fig4b, "b", true),
        (ScenarioId::Fig4c, "c", false),
        (ScenarioId::Fig4d, "d", true),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (id, tag, localized) in runs {
        let s = scenario(id, out);
        let d = s.dynamics.as_ref().unwrap();
        let f = d.final_localized_fraction;
        let frac_ok = if localized { f >= 0.9 } else { f < 0.5 };
        let drift_ok = d.max_norm_drift <= 1e-8;
        pass &= frac_ok && drift_ok;
        parts.push(format!(
            "({tag}) fraction {f:.4} {} {}, drift {:.1e} {}",
            if localized { ">= 0.9" } else { "< 0.5" },
            mark(frac_ok),
            d.max_norm_drift,
            mark(drift_ok)
        ));
    }
    let elapsed = start.elapsed();
    let time_ok = elapsed <= Duration::from_secs(120);
    pass &= time_ok;
    parts.push(format!("{} {}", secs(elapsed), mark(time_ok)));
    Verdict::new(pass, parts.join("; "))
}

fn fig5(out: &Path) -> Verdict {
    let start = Instant::now();
    let summaries: Vec<Summary> = [ScenarioId::Fig5a, ScenarioId::Fig5b, ScenarioId::Fig5c]
        .into_iter()
        .map(|id| scenario(id, out))
        .collect();
    let elapsed = start.elapsed();
    let d: Vec<_> = summaries
        .iter()
        .map(|s| s.dynamics.clone().unwrap())
        .collect();
    let tails: Vec<f64> = d.iter().map(|d| d.final_tail_norm).collect();
    let tails_ok = tails[0] < tails[1] && tails[1] < tails[2];
    let (tau_b, tau_c) = (&d[1].lifetime, &d[2].lifetime);
    let tau_ok = tau_b.is_finite() && tau_c.is_finite() && tau_c.tau < tau_b.tau;
    let time_ok = elapsed <= Duration::from_secs(120);
    Verdict::new(
        tails_ok && tau_ok && time_ok,
        format!(
            "tails (v = 0.5, 1.5, 1.8) = {:.3e}, {:.3e}, {:.3e} {}; tau(1.5) = {:.4e}, tau(1.8) = {:.4e} {}; {} {}",
            tails[0],
            tails[1],
            tails[2],
            mark(tails_ok),
            tau_b.tau,
            tau_c.tau,
            mark(tau_ok),
            secs(elapsed),
            mark(time_ok)
        ),
    )
}

fn two_site_error(dt: f64) -> f64 {
    let steps = (1.0 / dt).round() as usize;
    let mut amps = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    for _ in 0..steps {
        amps = rk4_step_chain(&amps, &[0.0, 0.0], dt).unwrap();
    }
    let t = steps as f64 * dt;
    let exact = [Complex64::new(t.cos(), 0.0), Complex64::new(0.0, t.sin())];
    amps.iter()
        .zip(exact)
        .map(|(a, e)| (a - e).norm())
        .fold(0.0, f64::max)
}

fn integrator_oracle() -> Verdict {
    let err = two_site_error(0.01);
    let err_ok = err <= 1e-9;
    let e: Vec<f64> = [0.2, 0.1, 0.05].into_iter().map(two_site_error).collect();
    let orders = [(e[0] / e[1]).log2(), (e[1] / e[2]).log2()];
    let order_ok = orders.iter().all(|p| (p - 4.0).abs() <= 0.2);
    Verdict::new(
        err_ok && order_ok,
        format!(
            "max error at t = 1, dt = 0.01: {err:.2e} {}; observed orders {:.3}, {:.3} {}",
            mark(err_ok),
            orders[0],
            orders[1],
            mark(order_ok)
        ),
    )
}

/// det(T − x) for the hopping −1 chain, scaled to avoid overflow; only the
/// sign is used.
fn char_poly_sign(diag: &[f64], x: f64) -> f64 {
    let (mut p_prev, mut p) = (1.0, diag[0] - x);
    for d in &diag[1..] {
        let next = (d - x) * p - p_prev;
        p_prev = p;
        p = next;
        let s = p.abs().max(p_prev.abs());
        if s > 1e100 {
            p /= s;
            p_prev /= s;
        }
    }
    p
}

fn char_poly_roots(diag: &[f64]) -> Vec<f64> {
    let lo = diag.iter().copied().fold(f64::INFINITY, f64::min) - 2.5;
    let hi = diag.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 2.5;
    let cells = 200_000;
    let h = (hi - lo) / cells as f64;
    let mut roots = Vec::new();
    let mut a = lo;
    let mut fa = char_poly_sign(diag, a);
    for i in 1..=cells {
        let b = lo + i as f64 * h;
        let fb = char_poly_sign(diag, b);
        if fa == 0.0 {
            roots.push(a);
        } else if fa * fb < 0.0 {
            let (mut x0, mut x1, mut f0) = (a, b, fa);
            for _ in 0..200 {
                let mid = 0.5 * (x0 + x1);
                let fm = char_poly_sign(diag, mid);
                if fm == 0.0 {
                    x0 = mid;
                    x1 = mid;
                    break;
                }
                if f0 * fm < 0.0 {
                    x1 = mid;
                } else {
                    x0 = mid;
                    f0 = fm;
                }
                if x1 - x0 < 1e-15 {
                    break;
                }
            }
            roots.push(0.5 * (x0 + x1));
        }
        a = b;
        fa = fb;
    }
    roots
}

fn eigensolver_oracle() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut worst_eig, mut worst_res, mut worst_orth) = (0.0f64, 0.0f64, 0.0f64);
    let mut missing = 0;
    for _ in 0..50 {
        let diag: Vec<f64> = (0..8).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let h = TridiagonalHamiltonian::from_diagonal(diag.clone());
        let report = eigendecompose(&h).unwrap();
        let roots = char_poly_roots(&diag);
        if roots.len() != 8 {
            missing += 1;
            continue;
        }
        for (w, r) in report.eigenvalues.iter().zip(&roots) {
            worst_eig = worst_eig.max((w - r).abs());
        }
        let scale = h.scale();
        for (j, v) in report.eigenvectors.iter().enumerate() {
            let hv = h.apply(v);
            let res: f64 = hv
                .iter()
                .zip(v)
                .map(|(a, b)| (a - report.eigenvalues[j] * b).powi(2))
                .sum::<f64>()
                .sqrt();
            worst_res = worst_res.max(res / scale);
            for (k, u) in report.eigenvectors.iter().enumerate() {
                let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
                let target = if j == k { 1.0 } else { 0.0 };
                worst_orth = worst_orth.max((dot - target).abs());
            }
        }
    }
    let eig_ok = missing == 0 && worst_eig <= 1e-10;
    let res_ok = worst_res <= 1e-10;
    let orth_ok = worst_orth <= 1e-10;
    Verdict::new(
        eig_ok && res_ok && orth_ok,
        format!(
            "max |E - root| = {worst_eig:.1e} {}; max relative residual {worst_res:.1e} {}; max orthonormality defect {worst_orth:.1e} {}",
            mark(eig_ok),
            mark(res_ok),
            mark(orth_ok)
        ),
    )
}

fn critical_velocity() -> Verdict {
    let rejects = [2.0 + 1e-12, 2.5, -2.5, f64::NAN]
        .iter()
        .all(|v| solve_boost(*v).is_err());
    let accepts = solve_boost(2.0).is_ok() && solve_boost(-2.0).is_ok();
    let empty = [2.0 + 1e-9, 2.5, 3.0]
        .iter()
        .all(|v| momentum_potential_extrema(*v).is_empty());
    let at_two = momentum_potential_extrema(2.0);
    let degenerate = at_two.iter().any(|e| {
        let half_pi = std::f64::consts::FRAC_PI_2;
        let w1 = 2.0 * e.k.sin() - 2.0;
        let w2 = 2.0 * e.k.cos();
        e.kind == ExtremumKind::Inflection
            && (e.k - half_pi).abs() < 1e-6
            && w1.abs() < 1e-12
            && w2.abs() < 1e-6
    });
    Verdict::new(
        rejects && accepts && empty && degenerate,
        format!(
            "|v| > 2 rejected {}; |v| = 2 accepted {}; no extrema above 2 {}; degenerate point at ka = pi/2 for v = 2 {}",
            mark(rejects),
            mark(accepts),
            mark(empty),
            mark(degenerate)
        ),
    )
}

fn files_in(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    names
}

fn determinism(first: &Path, second: &Path) -> Verdict {
    let mut compared = 0;
    let mut differing = Vec::new();
    for id in ScenarioId::BUILT_IN {
        scenario(id, second);
        let (a, b) = (first.join(id.name()), second.join(id.name()));
        let names = files_in(&a);
        if names != files_in(&b) {
            differing.push(format!("{id}: file set"));
            continue;
        }
        for name in names {
            compared += 1;
            if fs::read(a.join(&name)).unwrap() != fs::read(b.join(&name)).unwrap() {
                differing.push(format!("{id}/{name}"));
            }
        }
    }
    let cfg = SweepConfig {
        nus: vec![0.97, 1.27],
        velocities: vec![0.0, 0.6, 1.5],
        ..SweepConfig::default()
    };
    if sweep_csv(&sweep(&cfg)) != sweep_csv(&sweep(&cfg)) {
        differing.push("sweep".into());
    }
    Verdict::new(
        differing.is_empty() && compared > 0,
        format!(
            "{compared} scenario files and one sweep table re-run; differing: {}",
            if differing.is_empty() {
                "none".to_string()
            } else {
                differing.join(", ")
            }
        ),
    )
}

fn main() -> ExitCode {
    let first = tempfile::tempdir().unwrap();
    let second = tempfile::tempdir().unwrap();
    let mut results: Vec<(u32, &str, Verdict)> = Vec::new();
    let mut report = |n: u32, name: &'static str, v: Verdict| {
        println!(
            "criterion {n:>2} [{}] {name}: {}",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
        results.push((n, name, v));
    };
    report(1, "boost constants", boost_constants());
    let (v2, fig2_summary) = fig2(first.path());
    report(2, "single bound state of the shallow well", v2);
    report(3, "two bound states of opposite parity", fig3(first.path()));
    report(4, "continuum level oracle", analytic_oracle(&fig2_summary));
    report(5, "localization in the drifting well", fig4(first.path()));
    report(
        6,
        "radiation tails of the drifting oscillator",
        fig5(first.path()),
    );
    report(7, "two-site integrator oracle", integrator_oracle());
    report(8, "eigensolver oracle", eigensolver_oracle());
    report(9, "critical velocity", critical_velocity());
    report(10, "determinism", determinism(first.path(), second.path()));
    let failed: Vec<u32> = results
        .iter()
        .filter(|(_, _, v)| !v.pass)
        .map(|(n, _, _)| *n)
        .collect();
    println!(
        "acceptance: {} passed, {} failed{}",
        results.len() - failed.len(),
        failed.len(),
        if failed.is_empty() {
            String::new()
        } else {
            format!(" (criteria {failed:?})")
        }
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
