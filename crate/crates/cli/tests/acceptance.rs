//! Acceptance criteria, one PASS/FAIL line each. Runs every preset through
//! the same path as the binary and reads back what it wrote.

use std::path::Path;
use std::time::Instant;

use chiral_cp::dynamics::{integrate_trajectory, DrivenField, ForceField, IntegratorControls, TrajectoryState, GRID_POINTS};
use chiral_cp::greens::{
    trace_curl_g_imaginary, trace_curl_g_real, trace_g_imaginary, trace_g_real, GreensConfig, Order, ReflectionPath,
};
use chiral_cp::physics::{
    rabi_from_intensity, thermal_photon_number, CavitySpec, DriveSpec, Enantiomer, MirrorSpec, MoleculeSpec, RabiSource,
};
use chiral_cp::potential::{driven_potential, force, log_spaced, potential_thermal, potential_zero_t, PotentialConfig, Z_MIN};
use chiral_cp::quadrature::QuadratureConfig;
use chiral_cp_cli::config::ScenarioConfig;
use chiral_cp_cli::{execute, presets, Task};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, id: &str, ok: bool, text: String) {
        if !ok {
            self.failures += 1;
        }
        println!("{} {id:<5} {text}", if ok { "PASS" } else { "FAIL" });
    }

    fn info(&self, text: String) {
        println!("INFO       {text}");
    }
}

fn rel(x: f64, target: f64) -> f64 {
    (x - target).abs() / target.abs()
}

fn mcp() -> MoleculeSpec {
    MoleculeSpec::three_mcp_eq(Enantiomer::Positive)
}

fn separation_cavity() -> CavitySpec {
    CavitySpec::symmetric(1e-3, 0.05, 0.8).unwrap()
}

fn separation_drive() -> DriveSpec {
    DriveSpec {
        source: RabiSource::Intensity(5e4),
        detuning: 2.0 * std::f64::consts::PI * 1e5,
        temperature: 0.0,
    }
}

/// Runs a preset into `root/<name>-<command>` and returns its parsed summary.
fn run_preset(root: &Path, name: &str, task: Task) -> (Value, std::path::PathBuf) {
    let mut cfg = presets::load(name).unwrap();
    let dir = root.join(format!("{name}-{}", task.name()));
    cfg.output = Some(chiral_cp_cli::config::OutputConfig { dir: dir.clone() });
    execute(task, &cfg, rayon::current_num_threads()).unwrap_or_else(|e| panic!("preset {name}: {e}"));
    let text = std::fs::read_to_string(dir.join("summary.json")).unwrap();
    (serde_json::from_str(&text).unwrap(), dir)
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

fn csv_column(path: &Path, column: &str) -> Vec<f64> {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == column).unwrap_or_else(|| panic!("no column {column}"));
    lines.map(|l| l.split(',').nth(i).unwrap().parse().unwrap()).collect()
}

fn criterion_1(r: &mut Report) {
    let cfg = presets::load("fig5").unwrap().resolve().unwrap();
    let omega = cfg.drive.rabi_frequency(&cfg.molecule).unwrap();
    let direct = rabi_from_intensity(mcp().dipole_d01, 5e4).unwrap();
    r.line(
        "1",
        rel(omega, 1.42e7) <= 0.01 && omega == direct,
        format!("Rabi frequency at 5 W/cm^2: {omega:.5e} s^-1 (target 1.42e7, 1%)"),
    );
}

fn criterion_2(r: &mut Report) {
    let po = MoleculeSpec::propylene_oxide(Enantiomer::Positive);
    let n_po = thermal_photon_number(po.omega10, 298.0).unwrap();
    let n_mcp = thermal_photon_number(mcp().omega10, 298.0).unwrap();
    r.line(
        "2",
        (n_po - 0.60).abs() <= 0.01 && (1e-73..=1e-71).contains(&n_mcp),
        format!("photon numbers at 298 K: propylene oxide {n_po:.4} (0.60 +- 0.01), 3MCP {n_mcp:.3e} (1e-73..1e-71)"),
    );
}

fn criterion_3(r: &mut Report, root: &Path) {
    let (s, _) = run_preset(root, "fig5", Task::Barrier);
    let a = s["reports"].as_array().unwrap().iter().find(|x| x["side"] == "A").unwrap();
    let (pos, neg) = (&a["positive"], &a["negative"]);
    let (vp, vm) = (f(&pos["height"]), f(&neg["height"]));
    let (sp, sm) = (f(&pos["threshold_speed"]), f(&neg["threshold_speed"]));
    let ok = rel(vp, 1.26e-31) <= 0.15 && rel(vm, 3.76e-32) <= 0.15 && rel(sp, 1.2e-3) <= 0.10 && rel(sm, 0.7e-3) <= 0.10;
    r.line(
        "3",
        ok,
        format!(
            "barriers at mirror A: V+ {vp:.4e} J (1.26e-31, 15%), V- {vm:.4e} J (3.76e-32, 15%), speeds {:.3} / {:.3} mm/s (1.2 / 0.7, 10%)",
            sp * 1e3,
            sm * 1e3
        ),
    );
}

fn run_stats<'a>(s: &'a Value, e: &str) -> &'a Value {
    s["runs"].as_array().unwrap().iter().find(|x| x["spec"]["enantiomer"] == e).unwrap()
}

fn designated_fraction(run: &Value) -> f64 {
    match run["designated"].as_str().unwrap() {
        "A" => f(&run["fraction_a"]),
        _ => f(&run["fraction_b"]),
    }
}

fn criterion_4(r: &mut Report, root: &Path) {
    let (sa, dir_a) = run_preset(root, "fig6c", Task::Ensemble);
    let mut ok_a = true;
    let mut parts = Vec::new();
    for e in ["positive", "negative"] {
        let run = run_stats(&sa, e);
        let collected = f(&run["fraction_a"]) + f(&run["fraction_b"]);
        let purity = run["side_purity"].as_f64().unwrap_or(0.0);
        ok_a &= (0.05..=0.20).contains(&collected) && purity >= 0.95;
        parts.push(format!("{e} collected {collected:.3} purity {purity:.3}"));
    }
    r.line(
        "4a",
        ok_a,
        format!("mean 0, sigma 0.4 mm/s, N 500, 1.2 s: {} (band 0.05..0.20, purity >= 0.95)", parts.join("; ")),
    );

    let (sb, _) = run_preset(root, "fig7", Task::Ensemble);
    let pos = run_stats(&sb, "positive");
    let fb = f(&pos["fraction_b"]);
    r.line(
        "4b",
        pos["designated"] == "B" && (0.80..=0.95).contains(&fb),
        format!("mean 0.8, sigma 0.1 mm/s, N 500, 1.5 s: positive fraction at mirror B {fb:.3} (0.80..0.95)"),
    );
    let neg = run_stats(&sb, "negative");
    r.info(format!(
        "same beam, negative enantiomer: designated {} fraction {:.3} at 1.5 s (it meets the high barrier at B first)",
        neg["designated"].as_str().unwrap(),
        designated_fraction(neg)
    ));

    // a second run on a different worker count must write identical bytes
    let mut cfg = presets::load("fig6c").unwrap();
    let again = root.join("fig6c-again");
    cfg.output = Some(chiral_cp_cli::config::OutputConfig { dir: again.clone() });
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    pool.install(|| execute(Task::Ensemble, &cfg, 3)).unwrap();
    let same = ["summary.json", "trajectories_positive.csv", "trajectories_negative.csv", "config.toml"]
        .iter()
        .all(|name| std::fs::read(dir_a.join(name)).unwrap() == std::fs::read(again.join(name)).unwrap());
    r.line("4c", same, "ensemble output byte-identical between the default pool and a 3-thread pool".into());
}

fn criterion_5(r: &mut Report, root: &Path) {
    let (s, _) = run_preset(root, "fig3", Task::Enhancement);
    let rows = s["rows"].as_array().unwrap();
    let get = |nu: u64, key: &str| f(&rows.iter().find(|x| x["nu"] == nu).unwrap()[key]);
    let (c6, c7, c8) = (get(6, "chiral"), get(7, "chiral"), get(8, "chiral"));
    let even_peaks = (4..=18).step_by(2).all(|nu| get(nu, "electric") > get(nu - 1, "electric") && get(nu, "electric") > get(nu + 1, "electric"));
    r.line(
        "5",
        c7 > c6 && c7 > c8 && even_peaks,
        format!(
            "enhancement: chiral nu=6,7,8 {c6:.3e} {c7:.3e} {c8:.3e} J; electric local maxima at every even nu in 4..18: {even_peaks}"
        ),
    );
}

fn criterion_6(r: &mut Report) {
    let mol = mcp();
    let lam = mol.wavelength();
    let cav = CavitySpec::symmetric(2.0 * lam, 0.05, 0.8).unwrap();
    let series = GreensConfig::default().with_path(ReflectionPath::Series);
    let dense = GreensConfig {
        quadrature: QuadratureConfig {
            rel_tol: 1e-12,
            max_subdivisions: 20_000,
            ..QuadratureConfig::default()
        },
        ..GreensConfig::default()
    }
    .with_path(ReflectionPath::Direct);
    let w = mol.omega10;
    let mut worst: f64 = 0.0;
    for z in [0.3 * lam, 0.7 * lam, 1.3 * lam] {
        for xi in [0.1 * w, w] {
            let pairs = [
                (trace_g_imaginary(xi, z, &cav, &series).unwrap(), trace_g_imaginary(xi, z, &cav, &dense).unwrap()),
                (trace_curl_g_imaginary(xi, z, &cav, &series).unwrap(), trace_curl_g_imaginary(xi, z, &cav, &dense).unwrap()),
            ];
            for (s, d) in pairs {
                worst = worst.max((s - d).abs() / d.abs());
            }
        }
        let pairs = [
            (trace_g_real(w, z, &cav, &series, Order::Value).unwrap(), trace_g_real(w, z, &cav, &dense, Order::Value).unwrap()),
            (
                trace_curl_g_real(w, z, &cav, &series, Order::Value).unwrap(),
                trace_curl_g_real(w, z, &cav, &dense, Order::Value).unwrap(),
            ),
        ];
        for (s, d) in pairs {
            worst = worst.max((s - d).norm() / d.norm());
        }
    }
    r.line(
        "6",
        worst <= 1e-6,
        format!("round-trip series vs direct dense quadrature, a = 2 lambda, z = 0.3/0.7/1.3 lambda: worst relative gap {worst:.2e} (1e-6)"),
    );
}

fn criterion_7(r: &mut Report) {
    let cfg = PotentialConfig::default();
    let pos = mcp();
    let neg = MoleculeSpec::three_mcp_eq(Enantiomer::Negative);
    let cav = separation_cavity();

    let antisymmetric = [2e-8, 1.3e-7, 4e-6].iter().all(|&z| {
        let p = potential_zero_t(&pos, &cav, z, &cfg).unwrap();
        let n = potential_zero_t(&neg, &cav, z, &cfg).unwrap();
        p.u0e == n.u0e && p.u1e == n.u1e && p.mirror_image() == n
    });
    r.line("7a", antisymmetric, "chiral components odd and electric components even in R01, bit for bit".into());

    let lam = pos.wavelength();
    let a = 2.0 * lam;
    let mut direct = cfg;
    direct.greens = direct.greens.with_path(ReflectionPath::Direct);
    let mut swap_gap: f64 = 0.0;
    for frac in [0.1, 0.35, 0.6, 0.9] {
        let z = frac * a;
        let u = potential_zero_t(&pos, &CavitySpec::symmetric(a, 0.05, 0.8).unwrap(), z, &direct).unwrap();
        let w = potential_zero_t(&pos, &CavitySpec::symmetric(a, 0.05, -0.8).unwrap(), a - z, &direct).unwrap();
        swap_gap = swap_gap.max(rel(u.u0(), w.u0())).max(rel(u.u1(), w.u1()));
    }
    r.line("7b", swap_gap <= 1e-7, format!("mirror swap U(z; r_c) = U(a - z; -r_c): worst gap {swap_gap:.2e} (1e-7)"));

    let c = potential_zero_t(&pos, &cav, 1e-7, &cfg).unwrap();
    r.line(
        "7c",
        c.u1e.nonresonant == -c.u0e.nonresonant && c.u1c.nonresonant == -c.u0c.nonresonant && c.u0e.resonant == 0.0,
        "nonresonant ground and excited parts cancel exactly".into(),
    );

    let single = CavitySpec::new(1e-3, MirrorSpec::new(0.05, 0.0).unwrap(), MirrorSpec::NONE).unwrap();
    let pts: Vec<(f64, f64)> = log_spaced(lam / 500.0, lam / 50.0, 12)
        .iter()
        .map(|&z| (z.ln(), (-potential_zero_t(&pos, &single, z, &cfg).unwrap().u0e.total()).ln()))
        .collect();
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    r.line("7d", (slope + 3.0).abs() <= 0.05, format!("near-field slope of a single achiral mirror {slope:.4} (-3.00 +- 0.05)"));

    let zero = potential_zero_t(&pos, &cav, 1e-7, &cfg).unwrap();
    let cold = potential_thermal(&pos, &cav, 1e-7, 1.0, &cfg).unwrap();
    let t_gap = [
        (zero.u0e.total(), cold.u0e.total()),
        (zero.u1e.total(), cold.u1e.total()),
        (zero.u0c.total(), cold.u0c.total()),
        (zero.u1c.total(), cold.u1c.total()),
    ]
    .iter()
    .map(|&(x, y)| rel(y, x))
    .fold(0.0, f64::max);
    r.line("7e", cold.thermal && t_gap <= 1e-4, format!("T = 1 K thermal sum vs zero temperature: worst gap {t_gap:.2e} (1e-4)"));

    let drive = separation_drive();
    let (field, _) = DrivenField::compute(&pos, &cav, &drive, &cfg, GRID_POINTS).unwrap();
    let controls = IntegratorControls {
        record_history: true,
        ..IntegratorControls::default()
    };
    let mut drift: f64 = 0.0;
    for e in [Enantiomer::Positive, Enantiomer::Negative] {
        let view = field.enantiomer(e);
        for v in [1e-4, 5e-4, -5e-4, 6.6e-4] {
            let t = integrate_trajectory(TrajectoryState::launch(5e-4, v), &view, pos.mass, 3.0, &controls).unwrap();
            let energy = |s: &TrajectoryState| 0.5 * pos.mass * s.v_z * s.v_z + view.potential(s.z);
            let e0 = energy(&t.history[0]);
            drift = t.history.iter().map(|s| ((energy(s) - e0) / e0).abs()).fold(drift, f64::max);
        }
    }
    r.line("7f", drift <= 1e-6, format!("energy drift on bouncing trajectories over 3 s: {drift:.2e} (1e-6)"));

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut fd_gap: f64 = 0.0;
    for _ in 0..20 {
        let z = (Z_MIN.ln() + rng.random::<f64>() * (1e-5f64.ln() - Z_MIN.ln())).exp();
        let h = z * 1e-5;
        let analytic = force(&pos, &cav, &drive, z, &cfg).unwrap();
        let fd = -(driven_potential(&pos, &cav, &drive, z + h, &cfg).unwrap() - driven_potential(&pos, &cav, &drive, z - h, &cfg).unwrap()) / (2.0 * h);
        fd_gap = fd_gap.max((analytic - fd).abs() / analytic.abs());
    }
    r.line("7g", fd_gap <= 1e-4, format!("analytic force vs central difference at 20 points within 10 um: worst gap {fd_gap:.2e} (1e-4)"));
}

fn other_presets(r: &mut Report, root: &Path) {
    let (s2, dir2) = run_preset(root, "fig2", Task::Potential);
    let rows = csv_column(&dir2.join("potential.csv"), "z_m").len();
    let (s5, dir5) = run_preset(root, "fig5", Task::Potential);
    let driven = csv_column(&dir5.join("potential.csv"), "U_driven_J");
    let opposite = csv_column(&dir5.join("potential.csv"), "U_driven_opposite_J");
    let barriers = s5["barriers"].as_array().map_or(0, |b| b.len());
    let (s4, dir4) = run_preset(root, "fig4", Task::Potential);
    let files: Vec<String> = s4["curves"].as_array().unwrap().iter().map(|c| c["file"].as_str().unwrap().to_string()).collect();
    let u1: Vec<Vec<f64>> = files
        .iter()
        .map(|file| {
            let e = csv_column(&dir4.join(file), "U1e_J");
            let c = csv_column(&dir4.join(file), "U1c_J");
            e.iter().zip(&c).map(|(x, y)| (x + y).abs()).collect()
        })
        .collect();
    let grows = files.len() == 3 && (0..u1[0].len()).step_by(20).all(|i| u1[0][i] < u1[1][i] && u1[1][i] < u1[2][i]);
    r.line(
        "P",
        s2["curves"].as_array().unwrap().len() == 1
            && rows == 400
            && driven.iter().zip(&opposite).any(|(a, b)| a != b)
            && barriers == 2
            && grows,
        format!(
            "remaining presets end to end: fig2 {rows} rows; fig5 both enantiomer columns and {barriers} barrier reports; fig4 excited-state |U| grows 1 < 298 < 600 K: {grows}"
        ),
    );
}

fn main() {
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let start = Instant::now();
    let root = tempfile::tempdir().unwrap();
    let mut r = Report { failures: 0 };
    criterion_1(&mut r);
    criterion_2(&mut r);
    criterion_3(&mut r, root.path());
    criterion_4(&mut r, root.path());
    criterion_5(&mut r, root.path());
    criterion_6(&mut r);
    criterion_7(&mut r);
    other_presets(&mut r, root.path());
    // configs echoed into the output directories parse back unchanged
    let echo_ok = presets::PRESETS.iter().all(|p| {
        let text = std::fs::read_to_string(root.path().join(format!("{}-{}", p.name, p.command)).join("config.toml")).unwrap();
        let echoed = ScenarioConfig::from_toml(&text).unwrap();
        let mut original = presets::load(p.name).unwrap();
        original.output = None;
        echoed == original
    });
    r.line("E", echo_ok, "echoed config.toml of every preset re-parses to the preset's config".into());
    println!("acceptance: {} failure(s) in {:.1} s", r.failures, start.elapsed().as_secs_f64());
    if r.failures > 0 {
        std::process::exit(1);
    }
}
