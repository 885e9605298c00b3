//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::time::Instant;

use qes_core::families::{family1_fixed_b, family2_fixed_b, Family, GaugeParams, PotentialSpec};
use qes_core::fba::{self, BetheProblem, BetheRoots, SolveOptions};
use qes_core::oracle::{fd_eigensolve, fd_oscillator, ode_residual, GridSpec};
use qes_core::oscillator::{LevelRange, OscillatorSpec, SpaceConfig};
use qes_core::sl2::{cross_check, CrossCheckFlag};
use qes_core::special;
use qes_core::spectrum::{solve_states, SolvedState};
use qes_core::Error;

use common::{dims, fd_spec, normalizable_spec, rng, sign, spec, uniform};

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Self { pass, detail }
    }
}

const FAMILIES: [Family; 2] = [Family::First, Family::Second];

/// Normalizable states with real roots, or an empty list when the draw has
/// none.
fn accepted(s: &PotentialSpec) -> Vec<SolvedState> {
    match solve_states(s) {
        Ok(states) => states.into_iter().filter(SolvedState::normalizable).collect(),
        Err(Error::NoRealSolution) | Err(Error::NonConvergence { .. }) => Vec::new(),
        Err(e) => panic!("solve failed for {s:?}: {e}"),
    }
}

fn figure_cases() -> Vec<(&'static str, PotentialSpec, f64, f64)> {
    vec![
        ("fig1", spec(Family::First, 1.0, 1, 0, 0.5, vec![1.0], 0), 2.0, 3.0),
        ("fig3", spec(Family::First, -1.0, 1, 0, -1.0, vec![1.0], 0), 2.0, 12.0),
        ("fig5", spec(Family::Second, 1.0, 1, 0, 0.5, vec![1.0], 0), 10.0, 9.0),
        ("fig7", spec(Family::Second, -1.0, 1, 0, 0.5, vec![1.0], 0), 10.0, -9.0),
    ]
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    let mut bad = Vec::new();
    for (name, s, big_a, e) in figure_cases() {
        let states = solve_states(&s).expect("ground state");
        let st = &states[0];
        let ea = (st.spec().big_a().unwrap() - big_a).abs() / big_a.abs();
        let ee = (st.energy() - e).abs() / e.abs();
        worst = worst.max(ea).max(ee);
        if ea > 1e-12 || ee > 1e-12 {
            bad.push(format!("{name}: A={} E={}", st.spec().big_a().unwrap(), st.energy()));
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    Outcome::new(
        bad.is_empty() && elapsed < 1.0,
        format!("max rel err {worst:.1e}, {elapsed:.3}s {}", bad.join("; ")),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    let mut worst_raw = 0.0_f64;
    let mut worst_rich = 0.0_f64;
    let mut bad = Vec::new();
    let mut short = Vec::new();
    let mut check = |label: String, st: &SolvedState| {
        let lam = st.spec().space().lambda();
        let grid = GridSpec::new(st.spec().space(), 4001).unwrap();
        match fd_eigensolve(st.spec(), &grid, 10) {
            Ok(fd) => {
                let raw = fd.relative_match(st.energy(), lam, false);
                let rich = fd.relative_match(st.energy(), lam, true);
                worst_raw = worst_raw.max(raw);
                worst_rich = worst_rich.max(rich);
                if raw > 1e-3 || rich > 1e-4 {
                    bad.push(format!("{label}: E={} raw {raw:.1e} rich {rich:.1e}", st.energy()));
                }
            }
            Err(e) => bad.push(format!("{label}: {e}")),
        }
        checked += 1;
    };
    for (name, s, _, _) in figure_cases() {
        let st = &solve_states(&s).unwrap()[0];
        check(name.to_string(), st);
    }
    let mut r = rng(2);
    for family in FAMILIES {
        for m in 1..=3 {
            for n in 0..=1 {
                let mut found = 0;
                let mut attempts = 0;
                while found < 10 && attempts < 500 {
                    attempts += 1;
                    let s = fd_spec(&mut r, family, m, n);
                    let states = accepted(&s);
                    if states.is_empty() {
                        continue;
                    }
                    found += 1;
                    for st in &states {
                        check(format!("{family:?} m={m} n={n} {:?}", st.spec()), st);
                    }
                }
                if found < 10 {
                    short.push(format!("{family:?} m={m} n={n}: only {found} draws with states"));
                }
            }
        }
    }
    bad.extend(short);
    let elapsed = start.elapsed().as_secs_f64();
    Outcome::new(
        bad.is_empty() && elapsed < 60.0,
        format!(
            "{checked} states, worst raw {worst_raw:.1e}, worst Richardson {worst_rich:.1e}, {elapsed:.1}s {}",
            bad.join("; ")
        ),
    )
}

fn criterion_3() -> Outcome {
    let mut r = rng(3);
    let mut states_checked = 0;
    let mut empty = 0;
    let mut worst = 0.0_f64;
    let mut bad = Vec::new();
    for family in FAMILIES {
        for m in 1..=3 {
            for n in 0..=2 {
                for _ in 0..50 {
                    let s = normalizable_spec(&mut r, family, m, n);
                    let states = accepted(&s);
                    if states.is_empty() {
                        empty += 1;
                    }
                    for st in states {
                        let grid = GridSpec::default_for(st.spec().space());
                        let res = ode_residual(&st, &grid).unwrap();
                        worst = worst.max(res);
                        states_checked += 1;
                        if !(res < 1e-8) {
                            bad.push(format!("{:?} res {res:.1e}", st.spec()));
                        }
                    }
                }
            }
        }
    }
    Outcome::new(
        bad.is_empty(),
        format!(
            "{states_checked} states, {empty} draws without real roots, worst {worst:.1e} {}",
            bad.iter().take(3).cloned().collect::<Vec<_>>().join("; ")
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut r = rng(4);
    let mut checks = 0;
    let mut complex = 0;
    let mut worst = 0.0_f64;
    let mut bad = Vec::new();
    for family in FAMILIES {
        for n in 0..=3 {
            for _ in 0..50 {
                let (d, l) = dims(&mut r, false);
                let a = uniform(&mut r, -1.0, 2.0);
                let b1 = uniform(&mut r, -1.5, 1.5);
                let report = cross_check(family, n, a, b1, l, d).unwrap();
                checks += 1;
                if report.flags.contains(&CrossCheckFlag::ComplexPair) {
                    complex += 1;
                }
                worst = worst.max(report.eigenvalue_discrepancy);
                if !report.multisets_match(1e-9) {
                    bad.push(format!(
                        "{family:?} n={n} a={a} b1={b1} d={d} l={l}: matched {}/{} bethe {}",
                        report.matched,
                        report.eigenvalues.len(),
                        report.bethe_values.len()
                    ));
                }
            }
        }
    }
    Outcome::new(
        bad.is_empty(),
        format!(
            "{checks} operator checks, {complex} with complex pairs, worst {worst:.1e} {}",
            bad.iter().take(3).cloned().collect::<Vec<_>>().join("; ")
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut r = rng(5);
    let opts = SolveOptions {
        include_complex: true,
        ..SolveOptions::default()
    };
    let mut problems = 0;
    let mut root_sets = 0;
    let mut attempts = 0;
    let (mut worst_ode, mut worst_id) = (0.0_f64, 0.0_f64);
    let mut bad = Vec::new();
    while problems < 200 && attempts < 2000 {
        attempts += 1;
        let p: [f64; 6] = std::array::from_fn(|_| uniform(&mut r, -2.0, 2.0));
        let q: [f64; 5] = std::array::from_fn(|_| uniform(&mut r, -2.0, 2.0));
        let n = r_range(&mut r, 1, 3);
        let prob = BetheProblem::new(p, q, n).unwrap();
        let Ok(configs) = fba::solve_roots_with(&prob, &opts) else { continue };
        problems += 1;
        for roots in &configs {
            root_sets += 1;
            let w = fba::derive_w(&prob, roots).unwrap();
            let ode = fba::verify_polynomial_solution(&prob, &w, roots, 50);
            let id = fba::summation_identities(roots)
                .iter()
                .map(|c| c.relative_error())
                .fold(0.0, f64::max);
            worst_ode = worst_ode.max(ode);
            worst_id = worst_id.max(id);
            if !(ode < 1e-9) || !(id < 1e-10) {
                bad.push(format!("n={n} p={p:?} q={q:?}: ode {ode:.1e} id {id:.1e}"));
            }
        }
    }
    Outcome::new(
        bad.is_empty() && problems == 200,
        format!(
            "{problems} problems ({attempts} drawn), {root_sets} root sets, worst ODE {worst_ode:.1e}, identities {worst_id:.1e} {}",
            bad.iter().take(3).cloned().collect::<Vec<_>>().join("; ")
        ),
    )
}

fn r_range(r: &mut rand_chacha::ChaCha8Rng, lo: usize, hi: usize) -> usize {
    use rand::RngExt;
    r.random_range(lo..=hi)
}

/// Complete coefficient list padded to length 6 for `n = 0`.
fn padded_ground(s: &PotentialSpec) -> (f64, Vec<f64>) {
    let st = qes_core::spectrum::assemble_state(s, &BetheRoots::empty()).unwrap();
    let (a, mut b) = st.spec().coefficients().unwrap();
    b.resize(6, 0.0);
    (a, b)
}

fn criterion_6() -> Outcome {
    let mut r = rng(6);
    let mut bad = Vec::new();
    let (mut cascades, mut reductions, mut parity) = (0, 0, 0);
    let mut worst_reduction = 0.0_f64;

    for _ in 0..100 {
        for family in FAMILIES {
            for m in 2..=3 {
                let lam = sign(&mut r) * uniform(&mut r, 0.3, 2.0);
                let (d, l) = dims(&mut r, false);
                let a = uniform(&mut r, -2.0, 2.0);
                let mut b: Vec<f64> = (0..m).map(|_| uniform(&mut r, -1.5, 1.5)).collect();
                b[m - 1] = 0.0;
                let space = SpaceConfig::new(lam, d, l).unwrap();
                let hi = GaugeParams::new(family, a, b.clone()).unwrap();
                let lo = GaugeParams::new(family, a, b[..m - 1].to_vec()).unwrap();
                let fixed = |g: &GaugeParams| match family {
                    Family::First => family1_fixed_b(g, &space).unwrap(),
                    Family::Second => family2_fixed_b(g, &space).unwrap(),
                };
                let (f_hi, f_lo) = (fixed(&hi), fixed(&lo));
                let (g_hi, g_lo) = (
                    padded_ground(&spec(family, lam, d, l, a, b.clone(), 0)),
                    padded_ground(&spec(family, lam, d, l, a, b[..m - 1].to_vec(), 0)),
                );
                // fixed coefficients of level m that level m−1 also fixes, or
                // that lie beyond its range, must agree exactly
                let consistent = f_hi.iter().all(|&(k, v)| match f_lo.iter().find(|e| e.0 == k) {
                    Some(&(_, w)) => v == w,
                    None => k > 2 * (m - 1) || v == g_lo.1[k - 1],
                }) && g_hi == g_lo;
                cascades += 1;
                if !consistent {
                    bad.push(format!("cascade {family:?} m={m} a={a} b={b:?}: {f_hi:?} vs {f_lo:?}"));
                }
            }
        }
    }

    for _ in 0..60 {
        let n = r_range(&mut r, 0, 3);
        let m = r_range(&mut r, 1, 3);
        let (d, l) = dims(&mut r, false);
        let lam = sign(&mut r) * uniform(&mut r, 0.3, 2.0);
        let nf = n as f64;
        let a = if lam > 0.0 {
            0.5 * (l as f64 + 0.5 * (d as f64 - 1.0)) + uniform(&mut r, 0.05, 2.0)
        } else {
            uniform(&mut r, -nf - 2.0, -nf - 0.05)
        };
        let s = spec(Family::First, lam, d, l, a, vec![0.0; m], n);
        let osc = OscillatorSpec::new(*s.space(), lam * (2.0 * a + 2.0 * nf)).unwrap();
        let level = 2 * n + l as usize;
        let exact = osc.energy(level).unwrap();
        let states = match solve_states(&s) {
            Ok(st) => st,
            Err(e) => {
                bad.push(format!("reduction n={n} m={m} d={d} l={l} lam={lam} a={a}: {e}"));
                continue;
            }
        };
        if states.is_empty() {
            bad.push(format!("reduction n={n}: no configuration"));
        }
        for st in states {
            let rel = (st.energy() - exact).abs() / exact.abs().max(lam.abs());
            let a_rel = (st.spec().big_a().unwrap() - osc.big_a()).abs() / osc.big_a().abs().max(1.0);
            worst_reduction = worst_reduction.max(rel).max(a_rel);
            reductions += 1;
            if rel > 1e-12 || a_rel > 1e-12 {
                bad.push(format!("reduction n={n} l={l} d={d} a={a}: {} vs {exact}", st.energy()));
            }
        }
    }

    for _ in 0..60 {
        let family = FAMILIES[r_range(&mut r, 0, 1)];
        let m = r_range(&mut r, 1, 3);
        let n = r_range(&mut r, 0, 2);
        let mut s = normalizable_spec(&mut r, family, m, n);
        let p = r_range(&mut r, 0, 1) as u32;
        s = s.to_one_dimensional(p).unwrap();
        let range = s.space().r_max().unwrap_or(3.0);
        for st in solve_states(&s).unwrap_or_default().iter() {
            parity += 1;
            let wf = st.wavefunction();
            let sgn = if p == 1 { -1.0 } else { 1.0 };
            for k in 1..50 {
                let x = range * k as f64 / 50.0;
                if wf.eval(-x) != sgn * wf.eval(x) {
                    bad.push(format!("parity p={p} x={x}"));
                }
            }
        }
    }

    Outcome::new(
        bad.is_empty(),
        format!(
            "{cascades} cascades, {reductions} reductions (worst {worst_reduction:.1e}), {parity} parity checks {}",
            bad.iter().take(3).cloned().collect::<Vec<_>>().join("; ")
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut bad = Vec::new();
    let mut worst_fd = 0.0_f64;
    // β ≥ |λ| keeps the analytic state the one selected by a Dirichlet wall
    let configs = [
        (-1.0, 3.0, 3, 0),
        (-0.5, 2.0, 2, 1),
        (-1.0, 2.5, 1, 0),
        (-1.0, 2.5, 1, 1),
        (-2.0, 2.5, 4, 2),
        (0.5, 6.0, 3, 0),
        (1.0, 9.0, 1, 1),
    ];
    for (lam, beta, d, l) in configs {
        let space = SpaceConfig::new(lam, d, l).unwrap();
        let osc = OscillatorSpec::new(space, beta).unwrap();
        let grid = GridSpec::new(&space, 4001).unwrap();
        let fd = fd_oscillator(&osc, &grid, 4).unwrap();
        for (n_r, e) in fd.eigenvalues.iter().enumerate() {
            let level = 2 * n_r + l as usize;
            let Ok(exact) = osc.energy(level) else { continue };
            if fd.threshold.is_some_and(|t| exact >= t) {
                continue;
            }
            let rel = (e - exact).abs() / exact.abs().max(lam.abs());
            worst_fd = worst_fd.max(rel);
            if rel > 1e-4 {
                bad.push(format!("oscillator {lam} {beta} {d} {l} n={level}: {e} vs {exact}"));
            }
        }
    }

    // n_max: the largest integer strictly below β/λ − (d−1)/2
    let mut windows = 0;
    for d in 1..=6u32 {
        for k in 1..=80 {
            let ratio = 0.25 * k as f64;
            let space = SpaceConfig::new(1.0, d, 0).unwrap();
            let osc = OscillatorSpec::new(space, ratio).unwrap();
            let bound = ratio - 0.5 * (d as f64 - 1.0);
            let expect = (0..).take_while(|&n| (n as f64) < bound).last();
            let got = match osc.allowed_levels() {
                Ok(LevelRange::Bounded { n_max }) => Some(n_max),
                Ok(LevelRange::Unbounded) => None,
                Err(Error::EmptySpectrum { .. }) => None,
                Err(e) => panic!("{e}"),
            };
            windows += 1;
            if got != expect {
                bad.push(format!("window ratio={ratio} d={d}: {got:?} vs {expect:?}"));
            }
        }
    }

    let mut worst_ratio = 0.0_f64;
    for &(lam, beta) in &[(-0.8, 1.7), (-1.0, 3.0), (-2.5, 0.6)] {
        let k = f64::sqrt(-lam);
        for n in 0..=5usize {
            let p = (n % 2) as u32;
            let osc = OscillatorSpec::new(SpaceConfig::new(lam, 1, p).unwrap(), beta).unwrap();
            let ratios: Vec<f64> = (1..=40)
                .map(|j| {
                    let x = (j as f64 / 41.0 * 2.0 - 1.0) * 0.97 / k;
                    let ours = osc.wavefunction((n - p as usize) / 2, x).unwrap();
                    let geg = (1.0 + lam * x * x).powf(beta / (2.0 * -lam)) * special::gegenbauer(n, beta / -lam, k * x);
                    ours / geg
                })
                .collect();
            let r0 = ratios[0];
            let spread = ratios.iter().map(|q| (q - r0).abs() / r0.abs()).fold(0.0, f64::max);
            worst_ratio = worst_ratio.max(spread);
            if spread > 1e-9 {
                bad.push(format!("gegenbauer n={n} lam={lam}: spread {spread:.1e}"));
            }
        }
    }

    Outcome::new(
        bad.is_empty(),
        format!(
            "FD worst {worst_fd:.1e}, {windows} window cases, Gegenbauer spread {worst_ratio:.1e} {}",
            bad.iter().take(3).cloned().collect::<Vec<_>>().join("; ")
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("figure-caption energies", criterion_1),
        ("finite-difference agreement", criterion_2),
        ("ODE residual gate", criterion_3),
        ("sl(2,R) equivalence", criterion_4),
        ("Bethe engine soundness", criterion_5),
        ("cascade, reduction and parity", criterion_6),
        ("baseline oscillator checks", criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let out = run();
        let tag = if out.pass { "PASS" } else { "FAIL" };
        if !out.pass {
            failed += 1;
        }
        println!("criterion {} ({name}): {tag}: {}", i + 1, out.detail.trim_end());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
