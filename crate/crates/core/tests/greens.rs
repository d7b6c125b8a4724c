use chiral_cp::greens::{
    trace_curl_g_imaginary, trace_curl_g_real, trace_g_imaginary, trace_g_real, CavityRoundTrip, GreensConfig, Mat2, Order, ReflectionPath,
};
use chiral_cp::physics::{CavitySpec, Enantiomer, MirrorSpec, MoleculeSpec};
use num_complex::Complex64;
use proptest::prelude::*;

const C: f64 = 299_792_458.0;

fn mcp() -> MoleculeSpec {
    MoleculeSpec::three_mcp_eq(Enantiomer::Positive)
}

fn single_mirror(r_e: f64, r_c: f64, width: f64) -> CavitySpec {
    CavitySpec::new(width, MirrorSpec::new(r_e, r_c).unwrap(), MirrorSpec::NONE).unwrap()
}

#[test]
fn single_achiral_mirror_against_dense_trapezoid() {
    let (r_e, xi, z) = (0.05, 1e14, 50e-9);
    assert!(xi * z / C < 0.02);
    let cav = single_mirror(r_e, 0.0, 1.0);
    let got = trace_g_imaginary(xi, z, &cav, &GreensConfig::default()).unwrap();

    // (1/4 pi xi^2) int e^{-2 k z} [r_ss xi^2 + (xi^2 - 2 k^2 c^2) r_pp] dk
    // with r_ss = -r_e, r_pp = r_e, by plain trapezoid over 50 decay lengths
    let lo = xi / C;
    let hi = lo + 50.0 / z;
    let n = 100_000;
    let h = (hi - lo) / n as f64;
    let f = |k: f64| (-2.0 * k * z).exp() * (-r_e * xi * xi + r_e * (xi * xi - 2.0 * k * k * C * C));
    let mut sum = 0.5 * (f(lo) + f(hi));
    for i in 1..n {
        sum += f(lo + i as f64 * h);
    }
    let oracle = sum * h / (4.0 * std::f64::consts::PI * xi * xi);
    assert!((got / oracle - 1.0).abs() < 1e-6, "{got:e} {oracle:e}");
}

#[test]
fn imaginary_traces_are_real_and_decay_with_distance() {
    let cav = single_mirror(0.05, 0.8, 1e-3);
    let cfg = GreensConfig::default();
    for xi in [1e14, 6.44e15, 1e17] {
        let mut last_g = f64::INFINITY;
        let mut last_c = f64::INFINITY;
        for z in [1e-8, 3e-8, 1e-7, 3e-7, 1e-6, 1e-5] {
            let g = trace_g_imaginary(xi, z, &cav, &cfg).unwrap().abs();
            let c = trace_curl_g_imaginary(xi, z, &cav, &cfg).unwrap().abs();
            // far out the exponential weight underflows to an exact zero
            assert!(g < last_g || g == 0.0, "xi {xi:e} z {z:e}");
            assert!(c < last_c || c == 0.0, "xi {xi:e} z {z:e}");
            last_g = g;
            last_c = c;
        }
        // at least the near-field z^-3 over three decades
        assert!(last_g < 1e-8 * trace_g_imaginary(xi, 1e-8, &cav, &cfg).unwrap().abs());
    }
}

#[test]
fn half_wavelength_cavity_enhances_the_resonant_trace() {
    let mol = mcp();
    let lam = mol.wavelength();
    let a = 1.5 * lam;
    let cfg = GreensConfig::default().with_path(ReflectionPath::Direct);
    let cavity = CavitySpec::new(a, MirrorSpec::new(0.05, 0.0).unwrap(), MirrorSpec::new(0.05, 0.0).unwrap()).unwrap();
    let alone = single_mirror(0.05, 0.0, a);
    let inside = trace_g_real(mol.omega10, 0.5 * a, &cavity, &cfg, Order::Value).unwrap();
    let one = trace_g_real(mol.omega10, 0.5 * a, &alone, &cfg, Order::Value).unwrap();
    assert!(inside.norm() > one.norm(), "{} {}", inside.norm(), one.norm());
}

/// Largest |Re| over a window of +-lambda/8 around the centre. The chiral
/// trace itself vanishes at the centre of a mirror-symmetric cavity.
fn central_amplitude(nu: f64, mirror_b: MirrorSpec, chiral: bool) -> f64 {
    let mol = mcp();
    let lam = mol.wavelength();
    let a = nu * lam / 4.0;
    let cav = CavitySpec::new(a, MirrorSpec::new(0.05, 0.8).unwrap(), mirror_b).unwrap();
    let cfg = GreensConfig::default().with_path(ReflectionPath::Direct);
    (0..=40)
        .map(|i| {
            let z = 0.5 * a + (i as f64 - 20.0) / 20.0 * lam / 8.0;
            let t = if chiral {
                trace_curl_g_real(mol.omega10, z, &cav, &cfg, Order::Value)
            } else {
                trace_g_real(mol.omega10, z, &cav, &cfg, Order::Value)
            };
            t.unwrap().re.abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn chiral_trace_vanishes_at_the_centre_of_an_opposite_chirality_cavity() {
    let mol = mcp();
    let a = 1.75 * mol.wavelength();
    let cav = CavitySpec::symmetric(a, 0.05, 0.8).unwrap();
    let cfg = GreensConfig::default().with_path(ReflectionPath::Direct);
    let centre = trace_curl_g_real(mol.omega10, 0.5 * a, &cav, &cfg, Order::Value).unwrap();
    let off = trace_curl_g_real(mol.omega10, 0.45 * a, &cav, &cfg, Order::Value).unwrap();
    assert!(centre.norm() <= 1e-9 * off.norm(), "{centre} {off}");
}

#[test]
fn opposite_chirality_cavity_enhances_chiral_trace_at_odd_quarter_wavelengths() {
    // mirror B with the same coefficients is the mirror image of mirror A
    let opposite = MirrorSpec::new(0.05, 0.8).unwrap();
    let (six, seven, eight) = (
        central_amplitude(6.0, opposite, true),
        central_amplitude(7.0, opposite, true),
        central_amplitude(8.0, opposite, true),
    );
    assert!(seven > six && seven > eight, "{six:e} {seven:e} {eight:e}");
}

#[test]
fn same_chirality_cavity_enhances_chiral_trace_at_even_quarter_wavelengths() {
    let same = MirrorSpec::new(0.05, 0.8).unwrap().flipped_chirality();
    let (five, six, seven) = (
        central_amplitude(5.0, same, true),
        central_amplitude(6.0, same, true),
        central_amplitude(7.0, same, true),
    );
    assert!(six > five && six > seven, "{five:e} {six:e} {seven:e}");
}

#[test]
fn electric_trace_peaks_at_half_wavelength_multiples() {
    let opposite = MirrorSpec::new(0.05, 0.8).unwrap();
    let amp: Vec<f64> = (5..=9).map(|nu| central_amplitude(nu as f64, opposite, false)).collect();
    assert!(amp[1] > amp[0] && amp[1] > amp[2], "{amp:?}");
    assert!(amp[3] > amp[2] && amp[3] > amp[4], "{amp:?}");
}

#[test]
fn trace_values_are_zero_without_mirrors() {
    let cav = CavitySpec::new(1e-6, MirrorSpec::NONE, MirrorSpec::NONE).unwrap();
    for path in [ReflectionPath::SingleReflection, ReflectionPath::Direct, ReflectionPath::Series] {
        let cfg = GreensConfig::default().with_path(path);
        assert_eq!(trace_g_imaginary(1e15, 3e-7, &cav, &cfg).unwrap(), 0.0);
        assert_eq!(trace_g_real(6.44e15, 3e-7, &cav, &cfg, Order::Value).unwrap(), Complex64::from(0.0));
        assert_eq!(trace_curl_g_real(6.44e15, 3e-7, &cav, &cfg, Order::Value).unwrap(), Complex64::from(0.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mirror_swap_symmetry(frac in 0.05f64..0.95, r_e in 0.0f64..0.15, r_c in -0.8f64..0.8, xi in 1e14f64..1e16) {
        let lam = mcp().wavelength();
        let a = 2.0 * lam;
        let z = frac * a;
        let cav = CavitySpec::symmetric(a, r_e, r_c).unwrap();
        let swapped = CavitySpec::symmetric(a, r_e, -r_c).unwrap();
        for path in [ReflectionPath::SingleReflection, ReflectionPath::Direct] {
            let cfg = GreensConfig::default().with_path(path);
            let g = trace_g_imaginary(xi, z, &cav, &cfg).unwrap();
            let g2 = trace_g_imaginary(xi, a - z, &swapped, &cfg).unwrap();
            prop_assert!((g - g2).abs() <= 1e-7 * g.abs().max(1e-300));
            let c = trace_curl_g_imaginary(xi, z, &cav, &cfg).unwrap();
            let c2 = trace_curl_g_imaginary(xi, a - z, &swapped, &cfg).unwrap();
            prop_assert!((c - c2).abs() <= 1e-7 * c.abs().max(1e-300));
            let w = 6.44e15;
            let rg = trace_g_real(w, z, &cav, &cfg, Order::Value).unwrap();
            let rg2 = trace_g_real(w, a - z, &swapped, &cfg, Order::Value).unwrap();
            prop_assert!((rg - rg2).norm() <= 1e-7 * rg.norm().max(1e-300));
            let rc = trace_curl_g_real(w, z, &cav, &cfg, Order::Value).unwrap();
            let rc2 = trace_curl_g_real(w, a - z, &swapped, &cfg, Order::Value).unwrap();
            prop_assert!((rc - rc2).norm() <= 1e-7 * rc.norm().max(1e-300));
        }
    }

    #[test]
    fn round_trip_inverse_direct_matches_series(r_e in 0.0f64..0.6, r_c in -0.7f64..0.7, phase in 0.0f64..6.3, decay in 0.0f64..3.0) {
        let m = MirrorSpec::new(r_e, r_c).unwrap();
        let (ra, rb) = (Mat2::mirror_a(&m), Mat2::mirror_b(&m));
        let x = Complex64::from_polar((-decay).exp(), phase);
        prop_assume!((ra * rb).scale(x).spectral_radius() <= 0.9);
        let direct = CavityRoundTrip::direct(x, &ra, &rb).unwrap();
        let series = CavityRoundTrip::series(x, &ra, &rb, 1e-14, 10_000).unwrap();
        prop_assert!((direct.d_inverse - series.d_inverse).max_abs() <= 1e-10);
        let d = Mat2::IDENTITY - (ra * rb).scale(x);
        prop_assert!((d * direct.d_inverse - Mat2::IDENTITY).max_abs() <= 1e-12);
    }
}
