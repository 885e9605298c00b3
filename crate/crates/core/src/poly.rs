//! Dense univariate polynomials with coefficients stored lowest degree first.

use num_complex::Complex64;

/// Horner evaluation of `c[0] + c[1] z + ...`.
pub fn eval(c: &[f64], z: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ck| acc * z + ck)
}

pub fn eval_complex(c: &[f64], z: Complex64) -> Complex64 {
    c.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &ck| acc * z + ck)
}

/// Value, first and second derivative in one Horner pass.
pub fn eval_with_derivatives(c: &[f64], z: f64) -> (f64, f64, f64) {
    let (mut p, mut dp, mut ddp) = (0.0, 0.0, 0.0);
    for &ck in c.iter().rev() {
        ddp = ddp * z + 2.0 * dp;
        dp = dp * z + p;
        p = p * z + ck;
    }
    (p, dp, ddp)
}

pub fn eval_complex_with_derivative(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let (mut p, mut dp) = (zero, zero);
    for &ck in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + ck;
    }
    (p, dp)
}

/// Index of the highest nonzero coefficient, `None` for the zero polynomial.
pub fn degree(c: &[f64]) -> Option<usize> {
    c.iter().rposition(|&x| x != 0.0)
}

pub fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &ck)| k as f64 * ck)
        .collect()
}

/// Coefficients of `∏ (z − r_i)`, monic, lowest degree first.
pub fn from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (k, &ck) in c.iter().enumerate() {
            next[k + 1] += ck;
            next[k] -= ck * r;
        }
        c = next;
    }
    c
}

/// All complex roots of a real polynomial (Aberth–Ehrlich iteration followed
/// by a Newton polish). Exact zero roots are split off first. Returns an empty
/// list for constant or zero polynomials.
pub fn roots(c: &[f64]) -> Vec<Complex64> {
    let Some(deg) = degree(c) else {
        return Vec::new();
    };
    let low = c.iter().position(|&x| x != 0.0).unwrap_or(0);
    let mut out = vec![Complex64::new(0.0, 0.0); low];
    let trimmed = &c[low..=deg];
    let m = trimmed.len() - 1;
    if m == 0 {
        return out;
    }
    let lead = trimmed[m];
    let monic: Vec<f64> = trimmed.iter().map(|&x| x / lead).collect();
    if m == 1 {
        out.push(Complex64::new(-monic[0], 0.0));
        return out;
    }

    // Fujiwara bound on root moduli.
    let bound = (0..m)
        .map(|k| {
            let e = (m - k) as f64;
            let coef = if k == 0 { monic[0].abs() / 2.0 } else { monic[k].abs() };
            2.0 * coef.powf(1.0 / e)
        })
        .fold(0.0_f64, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..m)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / m as f64 + 0.4;
            Complex64::from_polar(0.5 * bound, theta)
        })
        .collect();

    for _ in 0..500 {
        let mut max_step = 0.0_f64;
        for i in 0..m {
            let (p, dp) = eval_complex_with_derivative(&monic, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..m)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }

    for zi in z.iter_mut() {
        for _ in 0..4 {
            let (p, dp) = eval_complex_with_derivative(&monic, *zi);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !step.is_finite() {
                break;
            }
            *zi -= step;
            if step.norm() <= 1e-16 * (1.0 + zi.norm()) {
                break;
            }
        }
        // Snap imaginary noise of real roots.
        if zi.im.abs() <= 1e-12 * (1.0 + zi.re.abs()) {
            let (p, _) = eval_complex_with_derivative(&monic, Complex64::new(zi.re, 0.0));
            let (pc, _) = eval_complex_with_derivative(&monic, *zi);
            if p.norm() <= pc.norm() * 10.0 + 1e-14 {
                zi.im = 0.0;
            }
        }
    }
    out.extend(z);
    out.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    out
}

/// Real roots only (imaginary part exactly zero after snapping), ascending.
pub fn real_roots(c: &[f64]) -> Vec<f64> {
    roots(c)
        .into_iter()
        .filter(|z| z.im == 0.0)
        .map(|z| z.re)
        .collect()
}
