//! The two-site function ω(λ₁,λ₂): evaluation from the NLIE solution, its
//! derivative jet at the homogeneous point and the discrete functional equation.

use num_complex::Complex64;

use crate::exact_diag::{omega_from_ed, GroundState};
use crate::nlie_solver::{solve_g, weight_term, AuxSolution, GFunctionJet};
use crate::thermo_limit::{log_ratio_derivative, log_ratio_derivative_taylor, omega_inf};
use crate::{ChainLength, Error, Result};

/// Orders (m, n) of ∂^m_{λ₁}∂^n_{λ₂}ω at (0,0) used by the correlator formulas.
pub const REQUIRED_ORDERS: [(usize, usize); 8] = [(0, 0), (1, 0), (1, 1), (2, 0), (2, 1), (2, 2), (3, 0), (3, 1)];

/// Largest tolerated imaginary part of a jet entry.
pub const PURITY_TOL: f64 = 1e-9;

/// ω^(m,n) at λ₁ = λ₂ = 0 for m ≤ 3, n ≤ 2.
#[derive(Clone, Debug, PartialEq)]
pub struct OmegaJet {
    pub length: ChainLength,
    values: [[f64; 3]; 4],
    pub imag_residual: f64,
}

impl OmegaJet {
    pub fn from_fn<F: FnMut(usize, usize) -> f64>(length: ChainLength, imag_residual: f64, mut f: F) -> Self {
        let mut values = [[0.0; 3]; 4];
        for (m, row) in values.iter_mut().enumerate() {
            for (n, v) in row.iter_mut().enumerate() {
                *v = f(m, n);
            }
        }
        Self {
            length,
            values,
            imag_residual,
        }
    }

    /// ω^(m,n); panics for m > 3 or n > 2.
    pub fn get(&self, m: usize, n: usize) -> f64 {
        self.values[m][n]
    }

    pub fn required(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        REQUIRED_ORDERS.iter().map(|&(m, n)| ((m, n), self.get(m, n)))
    }
}

fn grid_sum(aux: &AuxSolution, gjet: &GFunctionJet, order1: usize, lambda2: Complex64, order2: usize) -> Complex64 {
    let h = aux.grid.spacing();
    aux.grid
        .points()
        .zip(gjet.weighted_plus[order1].iter().zip(&gjet.weighted_minus[order1]))
        .map(|(z, (p, m))| weight_term(z, lambda2, order2) * (p + m))
        .sum::<Complex64>()
        * h
}

fn check_second_argument(aux: &AuxSolution, lambda2: Complex64) -> Result<()> {
    // λ₂ = −1 is allowed: the crossing residue carries b(0) = 0.
    if aux.grid.admits(lambda2) || (lambda2 + 1.0).norm() < 1e-14 {
        Ok(())
    } else {
        Err(Error::PoleProximity {
            lambda: lambda2.to_string(),
        })
    }
}

/// Ψ(λ₁,λ₂) = 2F(i(λ₁−λ₂)) − ∫dz [cosh(π(iλ₂+i/2−z))]⁻¹ [g⁺/(1+b⁻¹) + g⁻/(1+b̄⁻¹)].
pub fn psi(aux: &AuxSolution, gjet: &GFunctionJet, lambda1: Complex64, lambda2: Complex64) -> Result<Complex64> {
    if (gjet.lambda1 - lambda1).norm() > 1e-15 {
        return Err(Error::Precondition(format!(
            "g-functions were built at λ₁ = {}, not {lambda1}",
            gjet.lambda1
        )));
    }
    check_second_argument(aux, lambda2)?;
    Ok(2.0 * log_ratio_derivative(lambda1 - lambda2) - grid_sum(aux, gjet, 0, lambda2, 0))
}

/// ω(λ₁,λ₂) = (λ₁₂²−1)Ψ/2 + 1/2.
pub fn omega_value(aux: &AuxSolution, lambda1: Complex64, lambda2: Complex64) -> Result<Complex64> {
    check_second_argument(aux, lambda2)?;
    let gjet = solve_g(aux, lambda1, 0)?;
    let d = lambda1 - lambda2;
    Ok((d * d - 1.0) * psi(aux, &gjet, lambda1, lambda2)? / 2.0 + 0.5)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

// ∂^a_{λ₁}∂^b_{λ₂}(λ₁₂²−1) at the origin.
fn prefactor_derivative(a: usize, b: usize) -> f64 {
    match (a, b) {
        (0, 0) => -1.0,
        (2, 0) | (0, 2) => 2.0,
        (1, 1) => -2.0,
        _ => 0.0,
    }
}

/// The jet ω^(m,n) at (0,0): λ₁-derivatives through the g-function jet,
/// λ₂-derivatives on the weight and on F, Leibniz rule on the prefactor.
pub fn omega_jet(aux: &AuxSolution) -> Result<OmegaJet> {
    let zero = Complex64::new(0.0, 0.0);
    let gjet = solve_g(aux, zero, 3)?;
    let f = log_ratio_derivative_taylor();
    let f_deriv = |k: usize| f.get(k).copied().unwrap_or(0.0);
    let mut psi_jet = [[zero; 3]; 4];
    for (a, row) in psi_jet.iter_mut().enumerate() {
        for (b, v) in row.iter_mut().enumerate() {
            let sign = if b % 2 == 0 { 1.0 } else { -1.0 };
            *v = 2.0 * sign * f_deriv(a + b) - grid_sum(aux, &gjet, a, zero, b);
        }
    }
    let mut imag = 0.0f64;
    let mut values = [[0.0; 3]; 4];
    for m in 0..4 {
        for n in 0..3 {
            let mut s = if (m, n) == (0, 0) {
                Complex64::new(0.5, 0.0)
            } else {
                zero
            };
            for a in 0..=m {
                for b in 0..=n {
                    let p = prefactor_derivative(a, b);
                    if p != 0.0 {
                        s += 0.5 * binomial(m, a) * binomial(n, b) * p * psi_jet[m - a][n - b];
                    }
                }
            }
            if REQUIRED_ORDERS.contains(&(m, n)) {
                imag = imag.max(s.im.abs());
            }
            values[m][n] = s.re;
        }
    }
    if imag > PURITY_TOL {
        return Err(Error::ImpurePart {
            what: "ω jet".into(),
            imag,
        });
    }
    Ok(OmegaJet {
        length: ChainLength::Finite(aux.length),
        values,
        imag_residual: imag,
    })
}

/// Anything that evaluates ω(λ₁,λ₂).
pub trait OmegaProvider {
    fn omega(&mut self, lambda1: Complex64, lambda2: Complex64) -> Result<Complex64>;
}

/// ω from a converged NLIE solution.
pub struct NlieOmega<'a>(pub &'a AuxSolution);

impl OmegaProvider for NlieOmega<'_> {
    fn omega(&mut self, lambda1: Complex64, lambda2: Complex64) -> Result<Complex64> {
        omega_value(self.0, lambda1, lambda2)
    }
}

/// ω read off exact-diagonalization density matrices.
pub struct EdOmega(pub GroundState);

impl OmegaProvider for EdOmega {
    fn omega(&mut self, lambda1: Complex64, lambda2: Complex64) -> Result<Complex64> {
        omega_from_ed(&mut self.0, lambda1, lambda2)
    }
}

/// The infinite-chain ω_∞(λ₁−λ₂).
pub struct ThermoOmega;

impl OmegaProvider for ThermoOmega {
    fn omega(&mut self, lambda1: Complex64, lambda2: Complex64) -> Result<Complex64> {
        omega_inf(lambda1 - lambda2)
    }
}

/// |ω(λ₁,λ₂−1) + λ₁₂(λ₁₂+2)/(λ₁₂²−1)·ω(λ₁,λ₂) − (3/2)/(λ₁₂²−1)|; λ₂ must
/// equal one of the inhomogeneities of the underlying lattice.
pub fn verify_omega_fe<P: OmegaProvider + ?Sized>(
    provider: &mut P,
    lambda1: Complex64,
    lambda2: Complex64,
) -> Result<f64> {
    let d = lambda1 - lambda2;
    let den = d * d - 1.0;
    if den.norm() < 1e-12 {
        return Err(Error::SingularPrefactor { k: 1 });
    }
    let shifted = provider.omega(lambda1, lambda2 - 1.0)?;
    let here = provider.omega(lambda1, lambda2)?;
    Ok((shifted + d * (d + 2.0) / den * here - 1.5 / den).norm())
}
