//! Classical orthogonal polynomials by forward three-term recurrence.

/// Jacobi polynomial `P_n^{(alpha, beta)}(x)`.
///
/// Uses the standard recurrence
/// `2k(k+α+β)(2k+α+β−2) P_k = (2k+α+β−1)[(2k+α+β)(2k+α+β−2)x + α²−β²] P_{k−1}
///   − 2(k+α−1)(k+β−1)(2k+α+β) P_{k−2}`,
/// which is valid for any real parameters as long as `2k + α + β` avoids the
/// zero denominators; those degenerate cases fall back to the explicit sum.
pub fn jacobi(n: usize, alpha: f64, beta: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let ab = alpha + beta;
    let mut p_prev = 1.0;
    let mut p = 0.5 * (alpha - beta) + 0.5 * (ab + 2.0) * x;
    for k in 2..=n {
        let k = k as f64;
        let c = 2.0 * k + ab;
        let denom = 2.0 * k * (k + ab) * (c - 2.0);
        if denom == 0.0 {
            return jacobi_explicit(n, alpha, beta, x);
        }
        let next = ((c - 1.0) * (c * (c - 2.0) * x + alpha * alpha - beta * beta) * p
            - 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * c * p_prev)
            / denom;
        p_prev = p;
        p = next;
    }
    p
}

/// `P_n^{(α,β)}(x) = Σ_s C(n+α, n−s) C(n+β, s) ((x−1)/2)^s ((x+1)/2)^{n−s}`
/// with generalized binomials.
fn jacobi_explicit(n: usize, alpha: f64, beta: f64, x: f64) -> f64 {
    let half_minus = 0.5 * (x - 1.0);
    let half_plus = 0.5 * (x + 1.0);
    (0..=n)
        .map(|s| {
            binomial(n as f64 + alpha, n - s)
                * binomial(n as f64 + beta, s)
                * half_minus.powi(s as i32)
                * half_plus.powi((n - s) as i32)
        })
        .sum()
}

fn binomial(top: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (top - i as f64) / (i as f64 + 1.0))
}

/// First and second derivatives of `P_n^{(α,β)}` via
/// `d/dx P_n^{(α,β)} = (n+α+β+1)/2 · P_{n−1}^{(α+1,β+1)}`.
pub fn jacobi_with_derivatives(n: usize, alpha: f64, beta: f64, x: f64) -> (f64, f64, f64) {
    let p = jacobi(n, alpha, beta, x);
    if n == 0 {
        return (p, 0.0, 0.0);
    }
    let nf = n as f64;
    let c1 = 0.5 * (nf + alpha + beta + 1.0);
    let dp = c1 * jacobi(n - 1, alpha + 1.0, beta + 1.0, x);
    let ddp = if n >= 2 {
        c1 * 0.5 * (nf + alpha + beta + 2.0) * jacobi(n - 2, alpha + 2.0, beta + 2.0, x)
    } else {
        0.0
    };
    (p, dp, ddp)
}

/// Gegenbauer polynomial `C_n^{(alpha)}(x)`.
pub fn gegenbauer(n: usize, alpha: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut c_prev = 1.0;
    let mut c = 2.0 * alpha * x;
    for k in 2..=n {
        let k = k as f64;
        let next = (2.0 * x * (k + alpha - 1.0) * c - (k + 2.0 * alpha - 2.0) * c_prev) / k;
        c_prev = c;
        c = next;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_low_orders() {
        let (a, b, x) = (0.7, -1.3, 0.4);
        assert_eq!(jacobi(0, a, b, x), 1.0);
        let p1 = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
        assert!((jacobi(1, a, b, x) - p1).abs() < 1e-15);
        // Legendre special case P_2(x) = (3x² − 1)/2.
        assert!((jacobi(2, 0.0, 0.0, x) - 0.5 * (3.0 * x * x - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn recurrence_matches_explicit_sum() {
        for n in 0..8 {
            for &(a, b) in &[(0.5, -3.5), (1.5, 2.0), (-0.5, 4.5), (2.0, -7.5)] {
                for &x in &[-0.9, 0.1, 1.0, 3.7] {
                    let r = jacobi(n, a, b, x);
                    let e = jacobi_explicit(n, a, b, x);
                    assert!((r - e).abs() <= 1e-10 * (1.0 + e.abs()), "n={n} a={a} b={b} x={x}");
                }
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let (n, a, b) = (5, 0.5, -4.5);
        let x = 0.3;
        let h = 1e-5;
        let (_, dp, ddp) = jacobi_with_derivatives(n, a, b, x);
        let fd1 = (jacobi(n, a, b, x + h) - jacobi(n, a, b, x - h)) / (2.0 * h);
        let fd2 = (jacobi(n, a, b, x + h) - 2.0 * jacobi(n, a, b, x) + jacobi(n, a, b, x - h))
            / (h * h);
        assert!((dp - fd1).abs() < 1e-6 * (1.0 + dp.abs()));
        assert!((ddp - fd2).abs() < 1e-3 * (1.0 + ddp.abs()));
    }

    #[test]
    fn gegenbauer_values() {
        // C_2^{(α)}(x) = 2α(α+1)x² − α
        let (a, x) = (1.7, 0.3);
        assert!((gegenbauer(2, a, x) - (2.0 * a * (a + 1.0) * x * x - a)).abs() < 1e-14);
        // α = 1 gives Chebyshev U: U_3(x) = 8x³ − 4x
        assert!((gegenbauer(3, 1.0, x) - (8.0 * x.powi(3) - 4.0 * x)).abs() < 1e-14);
    }
}
