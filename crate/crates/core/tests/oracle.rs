use qes_core::families::{Family, GaugeParams, PotentialSpec};
use qes_core::fba::BetheRoots;
use qes_core::oracle::{
    fd_eigensolve, fd_oscillator, measured_order, norm_integral, ode_residual, ode_residual_at_energy,
    oscillator_residual, GridSpec, NormOutcome, RadialProblem,
};
use qes_core::oscillator::{OscillatorSpec, SpaceConfig};
use qes_core::spectrum::{assemble_state, solve_states, SolvedState};

fn spec(f: Family, lam: f64, d: u32, l: u32, a: f64, b: &[f64], n: usize) -> PotentialSpec {
    PotentialSpec::new(
        SpaceConfig::new(lam, d, l).unwrap(),
        GaugeParams::new(f, a, b.to_vec()).unwrap(),
        n,
    )
    .unwrap()
}

fn ground(s: &PotentialSpec) -> SolvedState {
    assemble_state(s, &BetheRoots::empty()).unwrap()
}

#[test]
fn figure_cases_lowest_level() {
    let cases = [
        (Family::First, 1.0, 0.5, 3.0),
        (Family::First, -1.0, -1.0, 12.0),
        (Family::Second, 1.0, 0.5, 9.0),
        (Family::Second, -1.0, 0.5, -9.0),
    ];
    for (f, lam, a, e) in cases {
        let s = ground(&spec(f, lam, 1, 0, a, &[1.0], 0));
        let grid = GridSpec::new(s.spec().space(), 4001).unwrap();
        let fd = fd_eigensolve(s.spec(), &grid, 3).unwrap();
        println!("{f:?} {lam}: fine {:?} rich {:?} thr {:?}", fd.fine, fd.eigenvalues, fd.threshold);
        assert!((fd.fine[0] - e).abs() / e.abs() < 1e-3);
        assert!((fd.eigenvalues[0] - e).abs() / e.abs() < 1e-4);
    }
}

#[test]
fn baseline_against_fd() {
    let space = SpaceConfig::new(-1.0, 3, 0).unwrap();
    let osc = OscillatorSpec::new(space, 3.0).unwrap();
    let grid = GridSpec::new(&space, 4001).unwrap();
    let fd = fd_oscillator(&osc, &grid, 4).unwrap();
    for (i, e) in fd.eigenvalues.iter().enumerate() {
        let exact = osc.energy(2 * i).unwrap();
        assert!((e - exact).abs() / exact.abs() < 1e-4, "{i}: {e} vs {exact}");
    }
}

#[test]
fn second_order_convergence() {
    let space = SpaceConfig::new(-1.0, 3, 0).unwrap();
    let osc = OscillatorSpec::new(space, 3.0).unwrap();
    let orders = measured_order(&RadialProblem::from_oscillator(&osc), 1000, 3);
    for p in orders {
        assert!((1.7..=2.3).contains(&p), "order {p}");
    }
    let s = ground(&spec(Family::First, 1.0, 1, 0, 0.5, &[1.0], 0));
    for p in measured_order(&RadialProblem::from_spec(s.spec()).unwrap(), 1000, 2) {
        assert!((1.7..=2.3).contains(&p), "order {p}");
    }
}

#[test]
fn residuals_of_baseline_states() {
    for (lam, beta, d, l) in [(-1.0, 3.0, 3, 0), (0.4, 4.0, 2, 1), (-0.5, 1.5, 1, 1)] {
        let space = SpaceConfig::new(lam, d, l).unwrap();
        let osc = OscillatorSpec::new(space, beta).unwrap();
        let grid = GridSpec::default_for(&space);
        for n_r in 0..=2 {
            if 2 * n_r + l as usize > 4 || osc.energy(2 * n_r + l as usize).is_err() {
                continue;
            }
            assert!(oscillator_residual(&osc, n_r, &grid).unwrap() < 1e-8);
        }
    }
}

#[test]
fn residual_sensitivity_and_scale() {
    let s = spec(Family::First, 1.0, 3, 1, 0.4, &[0.8, 0.3], 2);
    let st = &solve_states(&s).unwrap()[0];
    let grid = GridSpec::default_for(s.space());
    let base = ode_residual(st, &grid).unwrap();
    assert!(base < 1e-8);
    assert!(st.energy().abs() > 0.2);
    let corrupted = ode_residual_at_energy(st, &grid, st.energy() * (1.0 + 1e-3)).unwrap();
    assert!(corrupted > 1e-4, "{corrupted}");

}

#[test]
fn divergence_flags() {
    let bad = ground(&spec(Family::First, 1.0, 3, 0, 0.5, &[-1.0], 0));
    assert_eq!(norm_integral(&bad), NormOutcome::Divergent);
    let bad = ground(&spec(Family::First, -1.0, 3, 0, 0.5, &[1.0], 0));
    assert_eq!(norm_integral(&bad), NormOutcome::Divergent);
    let bad = ground(&spec(Family::Second, 1.0, 3, 0, 0.4, &[1.0], 0));
    assert_eq!(norm_integral(&bad), NormOutcome::Divergent);
    let bad = ground(&spec(Family::Second, -1.0, 3, 0, 0.4, &[-1.0], 0));
    assert_eq!(norm_integral(&bad), NormOutcome::Divergent);
    let good = ground(&spec(Family::Second, 1.0, 3, 0, 0.8, &[1.0], 0));
    assert!(norm_integral(&good).is_finite());
}

#[test]
fn norm_decreases_with_b1() {
    let mut last = f64::INFINITY;
    for k in 0..=6 {
        let b1 = 0.5 + 0.25 * k as f64;
        let st = ground(&spec(Family::First, 1.0, 3, 0, 0.5, &[b1], 0));
        let NormOutcome::Finite(v) = norm_integral(&st) else { panic!("divergent") };
        assert!(v < last);
        last = v;
    }
}

#[test]
fn gaussian_like_norm_matches_closed_form() {
    // d = 1, λ < 0, family 1 with b = 0 reduces to ∫ (1−x²)^{−2a−1/2} dx over (−1, 1)
    let a = -1.0;
    let st = ground(&spec(Family::First, -1.0, 1, 0, a, &[0.0], 0));
    let NormOutcome::Finite(v) = norm_integral(&st) else { panic!() };
    // B(1/2, 2) with exponent 3/2: ∫(1−x²)^{3/2} = 3π/8
    assert!((v - 3.0 * std::f64::consts::PI / 8.0).abs() < 1e-10, "{v}");
}
