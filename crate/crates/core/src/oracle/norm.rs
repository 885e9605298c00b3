use quadrature::double_exponential;
use serde::{Deserialize, Serialize};

use crate::spectrum::SolvedState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NormOutcome {
    Finite(f64),
    Divergent,
}

impl NormOutcome {
    pub fn is_finite(&self) -> bool {
        matches!(self, NormOutcome::Finite(_))
    }
}

const SEGMENTS: usize = 80;

/// `∫ |ψ|² dμ` over the whole domain.
///
/// The integral runs in `u = ∫ dr/√(1+λr²)`, where `dμ = r^{d−1} du`. For
/// `λ < 0` the range is `(0, π/2√|λ|)` and divergence is read off the local
/// power of the integrand at the endpoint. For `λ > 0` unit segments in `√λ u`
/// are added until their contributions die out; contributions that stop
/// shrinking, or a log-density that overflows, mean divergence. The
/// integrand is scaled by its peak, so the returned value saturates at `+∞`
/// only when the norm itself exceeds the double range.
pub fn norm_integral(state: &SolvedState) -> NormOutcome {
    let space = state.spec().space();
    let lam = space.lambda();
    let k = lam.abs().sqrt();
    let dm1 = space.d() as f64 - 1.0;
    let wf = state.wavefunction();
    let log_density = |u: f64| -> (f64, f64) {
        let r = if lam > 0.0 { (k * u).sinh() / k } else { (k * u).sin() / k };
        (r, 2.0 * wf.log_abs(r) + dm1 * r.ln())
    };
    let sym = if space.is_one_dimensional() { 2.0 } else { 1.0 };

    if lam < 0.0 {
        let ub = std::f64::consts::FRAC_PI_2 / k;
        // power of the integrand in the distance to the endpoint
        let (e1, e2) = (1e-5 / k, 1e-7 / k);
        let (_, l1) = log_density(ub - e1);
        let (_, l2) = log_density(ub - e2);
        if l1.is_nan() || l2.is_nan() || l2 == f64::INFINITY {
            return NormOutcome::Divergent;
        }
        if l2 != f64::NEG_INFINITY {
            let slope = (l1 - l2) / (e1 / e2).ln();
            if slope <= -1.0 + 1e-3 {
                return NormOutcome::Divergent;
            }
        }
        // scale by the peak so that densities beyond the double range still integrate
        let peak = (1..512)
            .map(|j| log_density(ub * j as f64 / 512.0).1)
            .filter(|x| x.is_finite())
            .fold(f64::NEG_INFINITY, f64::max);
        if !peak.is_finite() {
            return NormOutcome::Finite(0.0);
        }
        let integrand = |u: f64| (log_density(u).1 - peak).exp();
        let rough = double_exponential::integrate(integrand, 0.0, ub, 1e-6).integral;
        let out = double_exponential::integrate(integrand, 0.0, ub, 1e-13 * rough.abs().max(1e-300));
        return NormOutcome::Finite(sym * out.integral * peak.exp());
    }

    let w = 1.0 / k;
    // contributions are kept as logarithms so that densities beyond the
    // double range neither overflow nor hide their growth
    let mut log_total = f64::NEG_INFINITY;
    let mut logs: Vec<f64> = Vec::new();
    let mut peaks: Vec<f64> = Vec::new();
    for j in 0..SEGMENTS {
        let (lo, hi) = (j as f64 * w, (j + 1) as f64 * w);
        let mut shift = f64::NEG_INFINITY;
        // the left end counts too, except at the origin itself
        for i in usize::from(j == 0)..=8 {
            let ld = log_density(lo + w * i as f64 / 8.0).1;
            if ld.is_nan() || ld == f64::INFINITY {
                return NormOutcome::Divergent;
            }
            shift = shift.max(ld);
        }
        let log_c = if shift.is_finite() {
            let integrand = |u: f64| (log_density(u).1 - shift).exp();
            let rough = double_exponential::integrate(integrand, lo, hi, 1e-8 * w).integral;
            let mut seg = double_exponential::integrate(integrand, lo, hi, 1e-14 * rough.max(1e-300)).integral;
            if seg <= 0.0 {
                // spike narrower than the quadrature nodes: trapezoid through
                // the sample points, which contain the peak
                seg = (1..=64).map(|i| integrand(lo + w * i as f64 / 64.0)).sum::<f64>() * w / 64.0;
            }
            if !seg.is_finite() {
                return NormOutcome::Divergent;
            }
            seg.ln() + shift
        } else {
            f64::NEG_INFINITY
        };
        log_total = log_add(log_total, log_c);
        logs.push(log_c);
        peaks.push(shift);
        if j >= 4 && (log_c == f64::NEG_INFINITY || log_c - log_total <= 1e-16f64.ln()) {
            return NormOutcome::Finite(sym * log_total.exp());
        }
        // a density in u that stops falling cannot be integrable; the peak
        // test also covers spikes too narrow for the quadrature to resolve
        let rising = |v: &[f64]| v.windows(2).all(|p| p[1] >= p[0] - 1e-9);
        if j >= 12 && (rising(&logs[j - 5..=j]) || rising(&peaks[j - 5..=j])) {
            return NormOutcome::Divergent;
        }
    }
    // geometric tail from the last ratio
    let n = logs.len();
    let log_ratio = logs[n - 1] - logs[n - 2];
    if log_ratio >= 0.0 {
        return NormOutcome::Divergent;
    }
    let ratio = log_ratio.exp();
    let tail = logs[n - 1] + (ratio / (1.0 - ratio)).ln();
    NormOutcome::Finite(sym * log_add(log_total, tail).exp())
}

fn log_add(x: f64, y: f64) -> f64 {
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}
