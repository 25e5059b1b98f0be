//! Thermodynamic limit: the closed-form two-site function ω_∞(λ), its Taylor
//! jet at the homogeneous point, and the resulting correlators.

use num_complex::Complex64;

use crate::omega::OmegaJet;
use crate::special::digamma;
use crate::{ChainLength, Error, Result};

pub const LN_2: f64 = std::f64::consts::LN_2;
pub const ZETA_3: f64 = 1.202_056_903_159_594_3;
pub const ZETA_5: f64 = 1.036_927_755_143_37;

/// The constants (ln 2, ζ(3), ζ(5)) entering the closed forms.
pub fn zeta_constants() -> (f64, f64, f64) {
    (LN_2, ZETA_3, ZETA_5)
}

/// f(λ) = d/dλ log[Γ(1+λ/2)Γ(1/2−λ/2) / Γ(1−λ/2)Γ(1/2+λ/2)].
///
/// The same function gives the NLIE kernel on the imaginary axis, F(iλ) = f(λ).
pub fn log_ratio_derivative(lambda: Complex64) -> Complex64 {
    let h = lambda * 0.5;
    let one = Complex64::new(1.0, 0.0);
    let half = Complex64::new(0.5, 0.0);
    0.5 * (digamma(one + h) + digamma(one - h) - digamma(half + h) - digamma(half - h))
}

/// ω_∞(λ) = (λ²−1)·f(λ) + 1/2.
pub fn omega_inf(lambda: Complex64) -> Result<Complex64> {
    if !(lambda.re.is_finite() && lambda.im.is_finite()) {
        return Err(Error::NonFiniteSpectralPoint(lambda.to_string()));
    }
    // λ = ±1 is a removable singularity; |λ| = 2, 3, … are genuine poles.
    for pole in [1.0, -1.0] {
        if (lambda - pole).norm() < 1e-12 {
            return Ok(Complex64::new(-1.5, 0.0));
        }
    }
    for k in 2..64 {
        let p = k as f64;
        if (lambda - p).norm() < 1e-9 || (lambda + p).norm() < 1e-9 {
            return Err(Error::PoleProximity {
                lambda: lambda.to_string(),
            });
        }
    }
    Ok((lambda * lambda - 1.0) * log_ratio_derivative(lambda) + 0.5)
}

/// Even derivatives f⁽ᵏ⁾(0) for k = 0, 2, 4; odd ones vanish.
pub fn log_ratio_derivative_taylor() -> [f64; 5] {
    [2.0 * LN_2, 0.0, 3.0 * ZETA_3, 0.0, 45.0 * ZETA_5]
}

/// Derivatives dᵏω_∞/dλᵏ at 0 for k = 0..=5.
pub fn omega_inf_derivatives() -> [f64; 6] {
    [
        0.5 - 2.0 * LN_2,
        0.0,
        4.0 * LN_2 - 3.0 * ZETA_3,
        0.0,
        36.0 * ZETA_3 - 45.0 * ZETA_5,
        0.0,
    ]
}

/// The homogeneous jet ω^(m,n) = (−1)ⁿ ω_∞^(m+n)(0).
pub fn thermo_jet() -> OmegaJet {
    let d = omega_inf_derivatives();
    OmegaJet::from_fn(ChainLength::Infinite, 0.0, |m, n| {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        sign * d[m + n]
    })
}

/// Residual of ω_∞(λ+1) + λ(λ+2)/(λ²−1)·ω_∞(λ) − (3/2)/(λ²−1).
pub fn difference_equation_residual(lambda: f64) -> Result<f64> {
    let l = Complex64::new(lambda, 0.0);
    let den = lambda * lambda - 1.0;
    if den.abs() < 1e-12 {
        return Err(Error::SingularPrefactor { k: 1 });
    }
    let lhs = omega_inf(l + 1.0)? + omega_inf(l)? * (lambda * (lambda + 2.0) / den);
    Ok((lhs - 1.5 / den).norm())
}

/// Closed-form ⟨σˣσˣσˣ⟩, ⟨σˣ_iσˣ_{i+2}⟩, ⟨σʸ_iσʸ_{i+2}⟩ in the thermodynamic limit.
pub fn closed_form_three_site() -> (f64, f64, f64) {
    let (l2, z3, z5) = zeta_constants();
    let xxx = 1.0 / 3.0 - 12.0 * l2 + 74.0 / 3.0 * z3 - 56.0 / 3.0 * l2 * z3 - 6.0 * z3 * z3 - 125.0 / 6.0 * z5
        + 100.0 / 3.0 * l2 * z5;
    let xx13 =
        0.2 - 16.0 / 3.0 * l2 + 232.0 / 15.0 * z3 - 32.0 / 3.0 * l2 * z3 - 21.0 / 5.0 * z3 * z3 - 95.0 / 6.0 * z5
            + 70.0 / 3.0 * l2 * z5;
    let yy13 =
        1.0 / 15.0 - 4.0 * l2 + 169.0 / 15.0 * z3 - 20.0 / 3.0 * l2 * z3 - 12.0 / 5.0 * z3 * z3 - 65.0 / 6.0 * z5
            + 40.0 / 3.0 * l2 * z5;
    (xxx, xx13, yy13)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn constants_match_series() {
        // ζ(s) = Σ 1/n^s with an Euler–Maclaurin tail from N on.
        let zeta = |s: f64| {
            let n = 1000usize;
            let mut sum: f64 = (1..n).rev().map(|k| (k as f64).powf(-s)).sum();
            let nf = n as f64;
            sum += nf.powf(1.0 - s) / (s - 1.0) + 0.5 * nf.powf(-s) + s / 12.0 * nf.powf(-s - 1.0)
                - s * (s + 1.0) * (s + 2.0) / 720.0 * nf.powf(-s - 3.0);
            sum
        };
        assert!((zeta(3.0) - ZETA_3).abs() < 1e-14);
        assert!((zeta(5.0) - ZETA_5).abs() < 1e-14);
        let ln2: f64 = (1..60).rev().map(|k| 1.0 / (k as f64 * 2f64.powi(k))).sum();
        assert!((ln2 - LN_2).abs() < 1e-15);
    }

    #[test]
    fn omega_inf_at_zero() {
        let w = omega_inf(re(0.0)).unwrap();
        assert!((w.re - (0.5 - 2.0 * LN_2)).abs() < 1e-15);
        assert!((w.re + 0.886_294_361_1).abs() < 1e-10);
    }

    #[test]
    fn omega_inf_is_even() {
        let a = omega_inf(re(0.37)).unwrap();
        let b = omega_inf(re(-0.37)).unwrap();
        assert!((a - b).norm() < 1e-13);
        for k in 0..=40 {
            let x = -2.0 + 0.1 * k as f64;
            if (x.abs() - 1.0).abs() < 1e-9 || (x.abs() - 2.0).abs() < 1e-9 {
                continue;
            }
            let d = (omega_inf(re(x)).unwrap() - omega_inf(re(-x)).unwrap()).norm();
            assert!(d < 1e-12, "x = {x}: {d}");
        }
    }

    #[test]
    fn difference_equation_holds() {
        assert!(difference_equation_residual(0.4).unwrap() < 1e-12);
        for k in 0..20 {
            let x = -0.93 + 0.0975 * k as f64;
            let r = difference_equation_residual(x).unwrap();
            assert!(r < 1e-12, "λ = {x}: {r}");
        }
    }

    #[test]
    fn jet_matches_numerical_derivatives() {
        // 9-point central stencils on the real axis.
        let h = 0.05;
        let w = |x: f64| omega_inf(re(x)).unwrap().re;
        let d2 = (-(w(4.0 * h) + w(-4.0 * h)) / 560.0 + 8.0 / 315.0 * (w(3.0 * h) + w(-3.0 * h))
            - 0.2 * (w(2.0 * h) + w(-2.0 * h))
            + 1.6 * (w(h) + w(-h))
            - 205.0 / 72.0 * w(0.0))
            / (h * h);
        let d4 = (7.0 / 240.0 * (w(4.0 * h) + w(-4.0 * h)) - 0.4 * (w(3.0 * h) + w(-3.0 * h))
            + 169.0 / 60.0 * (w(2.0 * h) + w(-2.0 * h))
            - 122.0 / 15.0 * (w(h) + w(-h))
            + 91.0 / 8.0 * w(0.0))
            / h.powi(4);
        let d = omega_inf_derivatives();
        assert!((d2 - d[2]).abs() < 1e-8, "{d2} vs {}", d[2]);
        assert!((d4 - d[4]).abs() < 1e-6, "{d4} vs {}", d[4]);
    }

    #[test]
    fn jet_sign_rule_and_odd_orders() {
        let j = thermo_jet();
        assert_eq!(j.get(1, 0), 0.0);
        assert_eq!(j.get(3, 0), 0.0);
        assert_eq!(j.get(1, 1), -j.get(2, 0));
        assert_eq!(j.get(3, 1), -j.get(2, 2));
    }

    #[test]
    fn three_site_closed_forms() {
        let (xxx, xx13, yy13) = closed_form_three_site();
        assert!((xxx + 0.200_994_509_028).abs() < 1e-12);
        assert!((xx13 - 0.491_445_392_361).abs() < 1e-12);
        assert!((yy13 - 0.164_575_433_372).abs() < 1e-12);
    }

    #[test]
    fn pole_is_rejected() {
        assert!(omega_inf(re(2.0)).is_err());
        assert!(omega_inf(re(-3.0)).is_err());
    }

    #[test]
    fn removable_point_at_one() {
        let at = omega_inf(re(1.0)).unwrap().re;
        let near = omega_inf(re(1.0 + 1e-7)).unwrap().re;
        assert!((at - near).abs() < 1e-6);
        assert!(difference_equation_residual(0.0).unwrap() < 1e-12);
    }
}
