//! Auxiliary non-linear integral equations for b, b̄ and the linear
//! g-function equations, solved by fixed-point iteration with spectral
//! convolutions on a uniform grid.
//!
//! Grid functions live on the line z = t + iδ (t the grid node, δ the contour
//! shift). All kernels are applied through their Fourier multipliers, so the
//! same code serves every δ in the strip where the integrands stay analytic.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::face_model::check_lattice_length;
use crate::special::{digamma, ln_gamma};
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

pub const DEFAULT_X_MAX: f64 = 100.0;
pub const DEFAULT_N_POINTS: usize = 16384;
pub const DEFAULT_SHIFT: f64 = 0.35;
pub const DEFAULT_TOL: f64 = 1e-13;
pub const DEFAULT_MAX_ITER: usize = 5000;
/// Relative sup-norm tolerance for the linear g-equations.
pub const G_TOL: f64 = 1e-14;

/// Uniform midpoint grid on [−x_max, x_max] lifted to Im z = shift.
#[derive(Clone, Debug, PartialEq)]
pub struct RapidityGrid {
    x_max: f64,
    n_points: usize,
    spacing: f64,
    shift: f64,
    nodes: Vec<f64>,
}

impl RapidityGrid {
    pub fn new(x_max: f64, n_points: usize, shift: f64) -> Result<Self> {
        if !n_points.is_power_of_two() || n_points < 256 {
            return Err(Error::InvalidGrid(format!(
                "n_points must be a power of two ≥ 256, got {n_points}"
            )));
        }
        if !(x_max.is_finite() && x_max >= 15.0) {
            return Err(Error::InvalidGrid(format!("x_max must be ≥ 15, got {x_max}")));
        }
        let spacing = 2.0 * x_max / n_points as f64;
        if spacing >= 0.05 {
            return Err(Error::InvalidGrid(format!(
                "spacing 2·x_max/n_points = {spacing} must be < 0.05"
            )));
        }
        if !(0.0..0.45).contains(&shift) {
            return Err(Error::InvalidGrid(format!(
                "contour shift must lie in [0, 0.45), got {shift}"
            )));
        }
        let nodes = (0..n_points).map(|j| -x_max + (j as f64 + 0.5) * spacing).collect();
        Ok(Self {
            x_max,
            n_points,
            spacing,
            shift,
            nodes,
        })
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    /// Real parts of the sample points.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Complex sample points t + iδ.
    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.nodes.iter().map(move |&t| Complex64::new(t, self.shift))
    }

    /// Same grid with n_points and x_max doubled.
    pub fn doubled(&self) -> Result<Self> {
        Self::new(2.0 * self.x_max, 2 * self.n_points, self.shift)
    }

    /// Whether λ lies inside the strip δ−1 < Re λ < δ (with margin) where the
    /// shifted contour represents the straight-line integrals.
    pub fn admits(&self, lambda: Complex64) -> bool {
        const MARGIN: f64 = 0.03;
        lambda.re > self.shift - 1.0 + MARGIN && lambda.re < self.shift - MARGIN
    }
}

impl Default for RapidityGrid {
    fn default() -> Self {
        Self::new(DEFAULT_X_MAX, DEFAULT_N_POINTS, DEFAULT_SHIFT).expect("default grid is valid")
    }
}

/// F(x) = ∫ dk e^{−|k|/2+ikx}/(2cosh(k/2)), via its digamma form.
pub fn kernel_f(x: f64) -> f64 {
    kernel_f_complex(Complex64::new(x, 0.0)).re
}

/// Analytic continuation of [`kernel_f`] off the real axis.
pub fn kernel_f_complex(x: Complex64) -> Complex64 {
    let z = I * x / 2.0;
    let one = Complex64::new(1.0, 0.0);
    let half = Complex64::new(0.5, 0.0);
    0.5 * (digamma(one - z) + digamma(one + z)) - 0.5 * (digamma(half + z) + digamma(half - z))
}

/// K(x) = π/cosh(πx).
pub fn kernel_k(x: f64) -> f64 {
    PI / (PI * x).cosh()
}

fn kernel_k_complex(x: Complex64) -> Complex64 {
    PI / (PI * x).cosh()
}

/// Fourier multipliers and FFT plans for one grid size.
struct Convolver {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    f_hat: Vec<f64>,
    m_plus: Vec<f64>,
    m_minus: Vec<f64>,
}

impl fmt::Debug for Convolver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Convolver").field("n", &self.n).finish()
    }
}

// Multiplier of the kernel shifted by +i (boundary value on the pole line).
fn shifted_multiplier(k: f64) -> f64 {
    if k < 0.0 {
        1.0 / (1.0 + k.exp())
    } else {
        (-2.0 * k).exp() / (1.0 + (-k).exp())
    }
}

impl Convolver {
    fn new(grid: &RapidityGrid) -> Self {
        let n = grid.n_points;
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let span = n as f64 * grid.spacing;
        let ks: Vec<f64> = (0..n)
            .map(|j| {
                let j = if j < n / 2 { j as f64 } else { j as f64 - n as f64 };
                2.0 * PI * j / span
            })
            .collect();
        let f_hat = ks.iter().map(|k| (-k.abs()).exp() / (1.0 + (-k.abs()).exp())).collect();
        let m_plus = ks.iter().map(|&k| shifted_multiplier(k)).collect();
        let m_minus = ks.iter().map(|&k| shifted_multiplier(-k)).collect();
        Self {
            n,
            forward,
            inverse,
            f_hat,
            m_plus,
            m_minus,
        }
    }

    fn transform(&self, f: &[Complex64]) -> Vec<Complex64> {
        let mut buf = f.to_vec();
        self.forward.process(&mut buf);
        buf
    }

    fn back(&self, hat: &[Complex64], mult: &[f64]) -> Vec<Complex64> {
        let scale = 1.0 / self.n as f64;
        let mut buf: Vec<Complex64> = hat.iter().zip(mult).map(|(a, m)| a * (m * scale)).collect();
        self.inverse.process(&mut buf);
        buf
    }
}

/// Converged auxiliary functions b, b̄ for one chain length.
#[derive(Clone, Debug)]
pub struct AuxSolution {
    pub length: usize,
    pub grid: RapidityGrid,
    pub b: Vec<Complex64>,
    pub b_bar: Vec<Complex64>,
    pub residual: f64,
    pub iterations: usize,
}

impl AuxSolution {
    /// B = 1 + b.
    pub fn big_b(&self) -> Vec<Complex64> {
        self.b.iter().map(|b| 1.0 + b).collect()
    }

    /// B̄ = 1 + b̄.
    pub fn big_b_bar(&self) -> Vec<Complex64> {
        self.b_bar.iter().map(|b| 1.0 + b).collect()
    }

    /// Sup-norm mismatch of ln b, ln b̄ after one more sweep of the equations.
    pub fn fixed_point_defect(&self) -> f64 {
        let conv = Convolver::new(&self.grid);
        let drive = driving(self.length, &self.grid);
        let (nb, nbb) = sweep(&conv, &drive, &self.b, &self.b_bar);
        sup_log_change(&nb, &self.b).max(sup_log_change(&nbb, &self.b_bar))
    }
}

fn driving(length: usize, grid: &RapidityGrid) -> Vec<Complex64> {
    grid.points()
        .map(|z| (PI * z / 2.0).tanh().powu(length as u32))
        .collect()
}

fn ln1p(b: &[Complex64]) -> Vec<Complex64> {
    b.iter().map(|b| (1.0 + b).ln()).collect()
}

fn sweep(conv: &Convolver, th: &[Complex64], b: &[Complex64], bb: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let hb = conv.transform(&ln1p(b));
    let hbb = conv.transform(&ln1p(bb));
    let fb = conv.back(&hb, &conv.f_hat);
    let mb = conv.back(&hb, &conv.m_minus);
    let fbb = conv.back(&hbb, &conv.f_hat);
    let pbb = conv.back(&hbb, &conv.m_plus);
    let nb = (0..th.len()).map(|j| th[j] * (fb[j] - pbb[j]).exp()).collect();
    let nbb = (0..th.len()).map(|j| th[j] * (fbb[j] - mb[j]).exp()).collect();
    (nb, nbb)
}

fn sup_log_change(new: &[Complex64], old: &[Complex64]) -> f64 {
    new.iter()
        .zip(old)
        .map(|(a, b)| ((1.0 + a).ln() - (1.0 + b).ln()).norm())
        .fold(0.0, f64::max)
}

/// Solves
/// ln b  = L ln tanh(πz/2) + F∗ln B − F(·+i)∗ln B̄,
/// ln b̄ = L ln tanh(πz/2) + F∗ln B̄ − F(·−i)∗ln B
/// starting from the driving term alone.
pub fn solve_aux(length: usize, grid: &RapidityGrid, tol: f64, max_iter: usize) -> Result<AuxSolution> {
    check_lattice_length(length)?;
    if tol.is_nan() || tol < 1e-14 {
        return Err(Error::Precondition(format!("tolerance must be ≥ 1e-14, got {tol}")));
    }
    let conv = Convolver::new(grid);
    let th = driving(length, grid);
    let mut b = th.clone();
    let mut bb = th.clone();
    let mut history = Vec::new();
    let mut relax = 1.0;
    for it in 1..=max_iter {
        let (mut nb, mut nbb) = sweep(&conv, &th, &b, &bb);
        if relax < 1.0 {
            for (n, o) in nb.iter_mut().zip(&b).chain(nbb.iter_mut().zip(&bb)) {
                *n = relax * *n + (1.0 - relax) * o;
            }
        }
        let r = sup_log_change(&nb, &b).max(sup_log_change(&nbb, &bb));
        if !r.is_finite() {
            history.push(r);
            break;
        }
        if history.last().is_some_and(|&p| r > p) && it > 3 {
            relax = 0.9;
        }
        history.push(r);
        b = nb;
        bb = nbb;
        if r < tol {
            return Ok(AuxSolution {
                length,
                grid: grid.clone(),
                b,
                b_bar: bb,
                residual: r,
                iterations: it,
            });
        }
    }
    Err(Error::NoConvergence {
        stage: "auxiliary NLIE",
        iterations: history.len(),
        residual: *history.last().unwrap_or(&f64::NAN),
        history,
    })
}

/// Solutions of the g-equations for the λ₁-derivatives of the driving term.
///
/// `g_plus[m]`, `g_minus[m]` are g^{(±)} for ∂^m_{λ₁} of the driving term,
/// `weighted_plus[m]` = g⁺/(1+b⁻¹) and `weighted_minus[m]` = g⁻/(1+b̄⁻¹).
#[derive(Clone, Debug)]
pub struct GFunctionJet {
    pub lambda1: Complex64,
    pub g_plus: Vec<Vec<Complex64>>,
    pub g_minus: Vec<Vec<Complex64>>,
    pub weighted_plus: Vec<Vec<Complex64>>,
    pub weighted_minus: Vec<Vec<Complex64>>,
    pub residuals: Vec<f64>,
}

/// m-th derivative of csch at u.
pub(crate) fn csch_derivative(u: Complex64, m: usize) -> Complex64 {
    let s = 1.0 / u.sinh();
    let c = u.cosh() * s;
    match m {
        0 => s,
        1 => -s * c,
        2 => s * c * c + s * s * s,
        3 => -s * c * c * c - 5.0 * s * s * s * c,
        _ => unreachable!("jet orders are limited to 3"),
    }
}

/// ∂^m_λ of π/cosh(π(iλ+i/2−z)) = iπ csch(π(z−iλ)); the rapidity of λ is iλ.
pub fn driving_term(z: Complex64, lambda: Complex64, order: usize) -> Complex64 {
    I * PI * (-I * PI).powu(order as u32) * csch_derivative(PI * (z - I * lambda), order)
}

/// ∂^n_λ of 1/cosh(π(iλ+i/2−z)) = i csch(π(z−iλ)).
pub fn weight_term(z: Complex64, lambda: Complex64, order: usize) -> Complex64 {
    I * (-I * PI).powu(order as u32) * csch_derivative(PI * (z - I * lambda), order)
}

// (g⁺, g⁻, weighted g⁺, weighted g⁻, residual)
type LinearSolution = (Vec<Complex64>, Vec<Complex64>, Vec<Complex64>, Vec<Complex64>, f64);

fn solve_linear(conv: &Convolver, wp: &[Complex64], wm: &[Complex64], drive: &[Complex64]) -> Result<LinearSolution> {
    let n = drive.len();
    let mut gp: Vec<Complex64> = (0..n).map(|j| wp[j] * drive[j]).collect();
    let mut gm: Vec<Complex64> = (0..n).map(|j| wm[j] * drive[j]).collect();
    let mut history = Vec::new();
    for _ in 0..DEFAULT_MAX_ITER {
        let hp = conv.transform(&gp);
        let hm = conv.transform(&gm);
        let fp = conv.back(&hp, &conv.f_hat);
        let mp = conv.back(&hp, &conv.m_minus);
        let fm = conv.back(&hm, &conv.f_hat);
        let pm = conv.back(&hm, &conv.m_plus);
        let rp: Vec<Complex64> = (0..n).map(|j| drive[j] + fp[j] - pm[j]).collect();
        let rm: Vec<Complex64> = (0..n).map(|j| drive[j] - mp[j] + fm[j]).collect();
        let np: Vec<Complex64> = (0..n).map(|j| wp[j] * rp[j]).collect();
        let nm: Vec<Complex64> = (0..n).map(|j| wm[j] * rm[j]).collect();
        let scale = np.iter().chain(&nm).map(|z| z.norm()).fold(1.0, f64::max);
        let r = np
            .iter()
            .zip(&gp)
            .chain(nm.iter().zip(&gm))
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
            / scale;
        history.push(r);
        gp = np;
        gm = nm;
        if r < G_TOL {
            return Ok((rp, rm, gp, gm, r));
        }
        if !r.is_finite() {
            break;
        }
    }
    Err(Error::NoConvergence {
        stage: "g-function equations",
        iterations: history.len(),
        residual: *history.last().unwrap_or(&f64::NAN),
        history,
    })
}

/// Solves the linear g-equations for the driving terms ∂^m_{λ₁}[π/cosh(π(iλ₁+i/2−z))],
/// m = 0..=jet_order.
pub fn solve_g(aux: &AuxSolution, lambda1: Complex64, jet_order: usize) -> Result<GFunctionJet> {
    if jet_order > 3 {
        return Err(Error::Precondition(format!("jet order must be ≤ 3, got {jet_order}")));
    }
    if !aux.grid.admits(lambda1) {
        return Err(Error::PoleProximity {
            lambda: lambda1.to_string(),
        });
    }
    let conv = Convolver::new(&aux.grid);
    let wp: Vec<Complex64> = aux.b.iter().map(|b| b / (1.0 + b)).collect();
    let wm: Vec<Complex64> = aux.b_bar.iter().map(|b| b / (1.0 + b)).collect();
    let mut jet = GFunctionJet {
        lambda1,
        g_plus: Vec::new(),
        g_minus: Vec::new(),
        weighted_plus: Vec::new(),
        weighted_minus: Vec::new(),
        residuals: Vec::new(),
    };
    for m in 0..=jet_order {
        let drive: Vec<Complex64> = aux.grid.points().map(|z| driving_term(z, lambda1, m)).collect();
        let (gp, gm, wgp, wgm, r) = solve_linear(&conv, &wp, &wm, &drive)?;
        jet.g_plus.push(gp);
        jet.g_minus.push(gm);
        jet.weighted_plus.push(wgp);
        jet.weighted_minus.push(wgm);
        jet.residuals.push(r);
    }
    Ok(jet)
}

/// Same as [`solve_g`] for an arbitrary sampled driving term (order 0 only).
pub fn solve_g_with_drive(aux: &AuxSolution, drive: &[Complex64]) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    if drive.len() != aux.grid.n_points {
        return Err(Error::DimensionMismatch {
            expected: aux.grid.n_points,
            got: drive.len(),
        });
    }
    let conv = Convolver::new(&aux.grid);
    let wp: Vec<Complex64> = aux.b.iter().map(|b| b / (1.0 + b)).collect();
    let wm: Vec<Complex64> = aux.b_bar.iter().map(|b| b / (1.0 + b)).collect();
    let (_, _, gp, gm, _) = solve_linear(&conv, &wp, &wm, drive)?;
    Ok((gp, gm))
}

/// e(w) = ln Γ(1−iw/2) + ln Γ(1/2+iw/2) − ln Γ(1+iw/2) − ln Γ(1/2−iw/2).
pub fn bulk_energy_log(w: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let half = Complex64::new(0.5, 0.0);
    let a = I * w / 2.0;
    ln_gamma(one - a) + ln_gamma(half + a) - ln_gamma(one + a) - ln_gamma(half - a)
}

/// ln[Λ₀(ix−1/2)/(ix+1/2)^L] of the six-vertex transfer matrix with R(λ) = λ + P,
/// equal to L·e(x+i/2) + iπL/2 + (1/2π)∫K(x−z) ln B B̄ dz (modulo 2πi).
pub fn eigenvalue_log(aux: &AuxSolution, x: f64) -> Complex64 {
    let l = aux.length as f64;
    let h = aux.grid.spacing;
    let conv: Complex64 = aux
        .grid
        .points()
        .zip(aux.b.iter().zip(&aux.b_bar))
        .map(|(z, (b, bb))| kernel_k_complex(x - z) * ((1.0 + b).ln() + (1.0 + bb).ln()))
        .sum::<Complex64>()
        * (h / (2.0 * PI));
    l * bulk_energy_log(Complex64::new(x, 0.5)) + I * PI * l / 2.0 + conv
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> RapidityGrid {
        RapidityGrid::new(50.0, 8192, DEFAULT_SHIFT).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(RapidityGrid::new(25.0, 4096, 0.0).is_ok());
        assert!(RapidityGrid::new(25.0, 1000, 0.0).is_err());
        assert!(RapidityGrid::new(10.0, 4096, 0.0).is_err());
        assert!(RapidityGrid::new(25.0, 512, 0.0).is_err());
        assert!(RapidityGrid::new(25.0, 4096, 0.5).is_err());
        let g = RapidityGrid::new(25.0, 4096, 0.0).unwrap();
        assert!((g.nodes()[0] + 25.0 - g.spacing() / 2.0).abs() < 1e-14);
        assert!(g.nodes().iter().all(|x| x.abs() > 1e-6));
    }

    #[test]
    fn kernel_f_values() {
        assert!((kernel_f(0.0) - 2.0 * std::f64::consts::LN_2).abs() < 1e-12);
        assert!((kernel_f(1.7) - kernel_f(-1.7)).abs() < 1e-12);
        // algebraic decay ~1/x² from the cusp of the transform at k = 0
        assert!((kernel_f(10.0) - 0.005_025_523_008_558_74).abs() < 1e-12);
        // Fourier oracle: F(x) = 2∫₀^∞ cos(kx) e^{−k}/(1+e^{−k}) dk
        for x in [0.0, 0.6, 2.3] {
            let n = 200_000;
            let dk = 60.0 / n as f64;
            let s: f64 = (0..n)
                .map(|j| {
                    let k = (j as f64 + 0.5) * dk;
                    (k * x).cos() * (-k).exp() / (1.0 + (-k).exp())
                })
                .sum::<f64>()
                * dk;
            assert!((2.0 * s - kernel_f(x)).abs() < 1e-7, "x = {x}");
        }
    }

    #[test]
    fn kernel_k_values() {
        assert!((kernel_k(0.0) - PI).abs() < 1e-15);
        assert!((kernel_k(1.0) - 0.271_014_951_399_418).abs() < 1e-14);
        assert_eq!(kernel_k(2.0), kernel_k(-2.0));
    }

    #[test]
    fn spectral_convolution_matches_quadrature() {
        // (F∗f)(x) = (1/2π)∫F(x−y)f(y)dy for a localized f. The discrete
        // transform convolves with the periodized kernel, so the direct sum
        // includes images of F out to ±100 periods, plus the far images
        // through the tail F(x) ≈ 1/(2x²).
        let g = RapidityGrid::new(100.0, 8192, 0.0).unwrap();
        let conv = Convolver::new(&g);
        let f: Vec<Complex64> = g.nodes().iter().map(|&x| Complex64::new((-x * x).exp(), 0.0)).collect();
        let hat = conv.transform(&f);
        let spectral = conv.back(&hat, &conv.f_hat);
        let h = g.spacing();
        let period = 2.0 * g.x_max();
        let support: Vec<(f64, f64)> = g
            .nodes()
            .iter()
            .zip(&f)
            .map(|(&y, fy)| (y, fy.re))
            .filter(|&(_, v)| v > 1e-20)
            .collect();
        for j in [4096usize, 4200, 3900] {
            let x = g.nodes()[j];
            let direct: f64 = (-100i32..=100)
                .map(|k| {
                    support
                        .iter()
                        .map(|&(y, v)| kernel_f(x - y + k as f64 * period) * v)
                        .sum::<f64>()
                })
                .sum::<f64>()
                * h
                / (2.0 * PI);
            // Σ_{|k|>100} 1/(2(kP)²) ≈ 1/(P²·100.5)
            let mass: f64 = support.iter().map(|&(_, v)| v).sum::<f64>() * h / (2.0 * PI);
            let direct = direct + mass / (period * period * 100.5);
            assert!(
                (spectral[j].re - direct).abs() < 1e-7 * direct.abs(),
                "x = {x}: {} vs {direct}",
                spectral[j].re
            );
        }
    }

    #[test]
    fn aux_fixed_point_contract() {
        let g = grid();
        let aux = solve_aux(64, &g, 1e-13, 5000).unwrap();
        assert!(aux.residual < 1e-13);
        assert!(aux.fixed_point_defect() < 1e-12);
        assert!(aux.iterations < 200);
        assert!(aux.big_b().iter().chain(&aux.big_b_bar()).all(|z| z.norm() < 10.0));
    }

    #[test]
    fn aux_reports_non_convergence() {
        let g = grid();
        match solve_aux(8, &g, 1e-14, 3) {
            Err(Error::NoConvergence { history, .. }) => assert_eq!(history.len(), 3),
            other => panic!("{other:?}"),
        }
        assert!(solve_aux(7, &g, 1e-13, 10).is_err());
        assert!(solve_aux(8, &g, 1e-16, 10).is_err());
    }

    #[test]
    fn g_residual_and_linearity() {
        let g = grid();
        let aux = solve_aux(64, &g, 1e-13, 5000).unwrap();
        let jet = solve_g(&aux, Complex64::new(0.0, 0.0), 0).unwrap();
        assert!(jet.residuals[0] < 1e-13);
        let d1: Vec<Complex64> = g
            .points()
            .map(|z| driving_term(z, Complex64::new(0.1, 0.0), 0))
            .collect();
        let d2: Vec<Complex64> = g
            .points()
            .map(|z| driving_term(z, Complex64::new(-0.2, 0.0), 0))
            .collect();
        let sum: Vec<Complex64> = d1.iter().zip(&d2).map(|(a, b)| a + 2.0 * b).collect();
        let (p1, m1) = solve_g_with_drive(&aux, &d1).unwrap();
        let (p2, m2) = solve_g_with_drive(&aux, &d2).unwrap();
        let (ps, ms) = solve_g_with_drive(&aux, &sum).unwrap();
        let err = (0..ps.len())
            .map(|j| {
                (ps[j] - p1[j] - 2.0 * p2[j])
                    .norm()
                    .max((ms[j] - m1[j] - 2.0 * m2[j]).norm())
            })
            .fold(0.0, f64::max);
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn g_jet_matches_finite_difference() {
        let g = RapidityGrid::new(25.0, 4096, DEFAULT_SHIFT).unwrap();
        let aux = solve_aux(32, &g, 1e-13, 5000).unwrap();
        let eps = 1e-3;
        let jet = solve_g(&aux, Complex64::new(0.0, 0.0), 1).unwrap();
        let up = solve_g(&aux, Complex64::new(eps, 0.0), 0).unwrap();
        let dn = solve_g(&aux, Complex64::new(-eps, 0.0), 0).unwrap();
        let err = (0..g.n_points())
            .map(|j| ((up.weighted_plus[0][j] - dn.weighted_plus[0][j]) / (2.0 * eps) - jet.weighted_plus[1][j]).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-5, "{err}");
    }

    #[test]
    fn driving_term_derivatives() {
        let z = Complex64::new(0.3, 0.35);
        let lam = Complex64::new(0.05, 0.0);
        let h = 1e-4;
        for m in 0..3 {
            let fd = (driving_term(z, lam + h, m) - driving_term(z, lam - h, m)) / (2.0 * h);
            let an = driving_term(z, lam, m + 1);
            assert!((fd - an).norm() < 1e-5 * an.norm().max(1.0), "m = {m}");
        }
        let direct = PI / (PI * (I * lam + I * 0.5 - z)).cosh();
        assert!((driving_term(z, lam, 0) - direct).norm() < 1e-13);
        assert!((weight_term(z, lam, 0) * PI - direct).norm() < 1e-13);
    }

    #[test]
    fn bulk_energy_at_zero() {
        assert!(bulk_energy_log(Complex64::new(0.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn solve_g_rejects_lambda_outside_strip() {
        let g = RapidityGrid::new(25.0, 4096, DEFAULT_SHIFT).unwrap();
        let aux = solve_aux(8, &g, 1e-13, 5000).unwrap();
        assert!(matches!(
            solve_g(&aux, Complex64::new(0.4, 0.0), 0),
            Err(Error::PoleProximity { .. })
        ));
    }
}
