use std::sync::OnceLock;

use chiral_cp::dynamics::{
    integrate_trajectory, run_ensemble_in_field, separation_report, DrivenField, EnsembleSpec, Fate, ForceField, IntegratorControls, TrajectoryState,
    GRID_POINTS,
};
use chiral_cp::physics::{CavitySpec, DriveSpec, Enantiomer, MoleculeSpec, RabiSource, Side};
use chiral_cp::potential::{barrier_report, PotentialConfig};

const A: f64 = 1e-3;

fn molecule() -> MoleculeSpec {
    MoleculeSpec::three_mcp_eq(Enantiomer::Positive)
}

fn drive() -> DriveSpec {
    DriveSpec {
        source: RabiSource::Intensity(5e4),
        detuning: 2.0 * std::f64::consts::PI * 1e5,
        temperature: 0.0,
    }
}

fn field() -> &'static DrivenField {
    static FIELD: OnceLock<DrivenField> = OnceLock::new();
    FIELD.get_or_init(|| {
        let cav = CavitySpec::symmetric(A, 0.05, 0.8).unwrap();
        DrivenField::compute(&molecule(), &cav, &drive(), &PotentialConfig::default(), GRID_POINTS).unwrap().0
    })
}

fn swapped_field() -> &'static DrivenField {
    static FIELD: OnceLock<DrivenField> = OnceLock::new();
    FIELD.get_or_init(|| {
        let cav = CavitySpec::symmetric(A, 0.05, -0.8).unwrap();
        DrivenField::compute(&molecule(), &cav, &drive(), &PotentialConfig::default(), GRID_POINTS).unwrap().0
    })
}

fn fly(e: Enantiomer, z0: f64, v: f64, t_max: f64, history: bool) -> Vec<TrajectoryState> {
    let controls = IntegratorControls {
        record_history: history,
        ..IntegratorControls::default()
    };
    integrate_trajectory(TrajectoryState::launch(z0, v), &field().enantiomer(e), molecule().mass, t_max, &controls)
        .unwrap()
        .history
}

#[test]
fn designated_mirrors() {
    assert_eq!(field().designated_mirror(Enantiomer::Positive), Side::B);
    assert_eq!(field().designated_mirror(Enantiomer::Negative), Side::A);
}

#[test]
fn fast_launch_towards_mirror_a() {
    // repelled by the high barrier at A, then crosses the low one at B
    let pos = fly(Enantiomer::Positive, 0.5 * A, -0.9e-3, 3.0, true);
    let end = pos.last().unwrap();
    assert!(matches!(end.fate, Fate::InFlight | Fate::CollectedB), "{end:?}");
    assert!(pos.iter().any(|s| s.v_z > 0.0));
    assert!(pos.iter().all(|s| s.fate != Fate::CollectedA));
    let neg = fly(Enantiomer::Negative, 0.5 * A, -0.9e-3, 3.0, false);
    assert_eq!(neg.last().unwrap().fate, Fate::CollectedA);
}

#[test]
fn energy_is_conserved_on_bouncing_trajectories() {
    let mass = molecule().mass;
    for e in [Enantiomer::Positive, Enantiomer::Negative] {
        let view = field().enantiomer(e);
        for v in [1e-4, 5e-4, -5e-4, 6.6e-4] {
            let history = fly(e, 0.5 * A, v, 3.0, true);
            assert_eq!(history.last().unwrap().fate, Fate::InFlight);
            let energy = |s: &TrajectoryState| 0.5 * mass * s.v_z * s.v_z + view.potential(s.z);
            let e0 = energy(&history[0]);
            let drift = history.iter().map(|s| ((energy(s) - e0) / e0).abs()).fold(0.0, f64::max);
            assert!(drift <= 1e-6, "{e:?} v {v}: drift {drift:e}");
        }
    }
}

#[test]
fn threshold_speeds_separate_collection() {
    let cfg = PotentialConfig::default();
    let cav = CavitySpec::symmetric(A, 0.05, 0.8).unwrap();
    let report = barrier_report(&molecule(), &cav, &drive(), Side::A, &cfg).unwrap();
    let (v_minus, v_plus) = (report.v_minus().threshold_speed, report.v_plus().threshold_speed);
    for e in [Enantiomer::Positive, Enantiomer::Negative] {
        for f in [0.3, 0.7, 0.95] {
            for sign in [1.0, -1.0] {
                let end = *fly(e, 0.5 * A, sign * f * v_minus, 3.0, false).last().unwrap();
                assert_eq!(end.fate, Fate::InFlight, "{e:?} v {:e}", sign * f * v_minus);
            }
        }
        let towards_a = fly(e, 0.5 * A, -1.05 * v_plus, 3.0, false);
        assert_eq!(towards_a.last().unwrap().fate, Fate::CollectedA, "{e:?}");
        let towards_b = fly(e, 0.5 * A, 1.05 * v_plus, 3.0, false);
        assert_eq!(towards_b.last().unwrap().fate, Fate::CollectedB, "{e:?}");
    }
}

fn mirrored(f: Fate) -> Fate {
    match f {
        Fate::InFlight => Fate::InFlight,
        Fate::CollectedA => Fate::CollectedB,
        Fate::CollectedB => Fate::CollectedA,
    }
}

#[test]
fn enantiomer_trajectories_mirror_each_other() {
    let mass = molecule().mass;
    let controls = IntegratorControls::default();
    let run = |f: &DrivenField, e, z0: f64, v: f64| *integrate_trajectory(TrajectoryState::launch(z0, v), &f.enantiomer(e), mass, 3.0, &controls).unwrap().last();
    for (z0, v) in [(0.5 * A, -0.9e-3), (0.4 * A, 0.5e-3), (0.5 * A, 0.8e-3), (0.3 * A, 1.3e-3)] {
        let neg = run(field(), Enantiomer::Negative, z0, v);
        // reflected through the cavity centre
        let pos = run(field(), Enantiomer::Positive, A - z0, -v);
        assert_eq!(pos.fate, mirrored(neg.fate));
        assert!((neg.t - pos.t).abs() <= 1e-6 * neg.t);
        assert!((neg.z - (A - pos.z)).abs() <= 1e-9, "{} {}", neg.z, A - pos.z);
        // or kept in place with both mirrors' chirality reversed
        let swapped = run(swapped_field(), Enantiomer::Positive, z0, v);
        assert_eq!(swapped.fate, neg.fate);
        assert!((neg.t - swapped.t).abs() <= 1e-6 * neg.t);
    }
}

#[test]
fn enantiomer_ensembles_mirror_each_other() {
    let spec = EnsembleSpec {
        n_molecules: 400,
        z0: 0.5 * A,
        v_mean: 0.0,
        v_sigma: 0.6e-3,
        rng_seed: 11,
        t_max: 1.5,
        enantiomer: Enantiomer::Negative,
    };
    let mass = molecule().mass;
    let controls = IntegratorControls::default();
    let neg = run_ensemble_in_field(&spec, field(), mass, &controls).unwrap().stats;
    let positive = EnsembleSpec {
        enantiomer: Enantiomer::Positive,
        ..spec
    };
    let swapped = run_ensemble_in_field(&positive, swapped_field(), mass, &controls).unwrap().stats;
    assert_eq!(swapped.designated, neg.designated);
    assert_eq!((swapped.count_a, swapped.count_b), (neg.count_a, neg.count_b));

    // same cavity, launch reflected: a zero-mean Gaussian is its own mirror
    // image, so only the statistics agree
    let reflected = EnsembleSpec { z0: A - spec.z0, ..positive };
    let pos = run_ensemble_in_field(&reflected, field(), mass, &controls).unwrap().stats;
    assert_eq!(pos.designated, neg.designated.other());
    let n = spec.n_molecules as f64;
    for (x, y) in [(neg.fraction_a, pos.fraction_b), (neg.fraction_b, pos.fraction_a)] {
        let p = 0.5 * (x + y);
        let sigma = (2.0 * p * (1.0 - p) / n).sqrt().max(1.0 / n);
        assert!((x - y).abs() <= 4.0 * sigma, "{x} {y}");
    }
}

#[test]
fn ensembles_are_deterministic_across_pool_sizes() {
    let spec = EnsembleSpec {
        n_molecules: 64,
        z0: 0.5 * A,
        v_mean: 0.3e-3,
        v_sigma: 0.5e-3,
        rng_seed: 42,
        t_max: 1.2,
        enantiomer: Enantiomer::Positive,
    };
    let mass = molecule().mass;
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| run_ensemble_in_field(&spec, field(), mass, &IntegratorControls::default()).unwrap())
    };
    let one = run(1);
    let four = run(4);
    assert_eq!(one, four);
    assert_eq!(one, run(4));
    let stats = &one.stats;
    assert!((stats.fraction_a + stats.fraction_b + stats.fraction_in_flight - 1.0).abs() < 1e-15);
    if let Some(p) = stats.side_purity {
        assert!((0.0..=1.0).contains(&p));
    }
}

#[test]
fn at_rest_without_drive_nothing_arrives() {
    let cav = CavitySpec::symmetric(A, 0.05, 0.8).unwrap();
    let (undriven, _) = DrivenField::compute(&molecule(), &cav, &DriveSpec::undriven(0.0), &PotentialConfig::default(), 1000).unwrap();
    let spec = EnsembleSpec {
        n_molecules: 8,
        z0: 0.5 * A,
        v_mean: 0.0,
        v_sigma: 0.0,
        rng_seed: 1,
        t_max: 1.0,
        enantiomer: Enantiomer::Positive,
    };
    let r = run_ensemble_in_field(&spec, &undriven, molecule().mass, &IntegratorControls::default()).unwrap();
    assert_eq!(r.stats.count_in_flight, 8);
    assert_eq!(r.stats.side_purity, None);
    assert_eq!(r.stats.median_collection_time, None);
    for rec in &r.records {
        assert!((rec.last().z - 0.5 * A).abs() < 1e-6);
    }
}

#[test]
fn directed_beam_sorts_both_enantiomers() {
    // the negative enantiomer reaches mirror A only after bouncing off B,
    // about 1.9 s after launch
    let mass = molecule().mass;
    let run = |e| {
        let spec = EnsembleSpec {
            n_molecules: 500,
            z0: 0.5 * A,
            v_mean: 0.8e-3,
            v_sigma: 0.1e-3,
            rng_seed: 42,
            t_max: 3.0,
            enantiomer: e,
        };
        run_ensemble_in_field(&spec, field(), mass, &IntegratorControls::default()).unwrap().stats
    };
    let (pos, neg) = (run(Enantiomer::Positive), run(Enantiomer::Negative));
    let report = separation_report(&pos, &neg).unwrap();
    assert_eq!(report.designated_a, Enantiomer::Negative);
    assert_eq!(report.designated_b, Enantiomer::Positive);
    assert!(report.excess_a.unwrap() >= 0.9, "{report:?}");
    assert!(report.excess_b.unwrap() >= 0.9, "{report:?}");
}
