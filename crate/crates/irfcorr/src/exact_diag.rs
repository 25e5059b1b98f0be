//! Exact diagonalization oracle for small lattices: ground states, reduced
//! density matrices built from monodromy elements, the qKZ operator A_n,
//! partial traces and direct Pauli-string correlators.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::density_correlators::{d2_xxx, Correlator, CorrelatorTable};
use crate::face_model::{
    apply_hamiltonian, check_lattice_length, weight_bits, BasisTag, LatticeOperator, RowOperators, SpectralPoint,
};
use crate::{ChainLength, Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Spectral point at which the leading transfer-matrix eigenvector is selected.
pub const REFERENCE_LAMBDA: f64 = -0.5;
/// Largest lattice handled by dense eigensolvers.
pub const DENSE_MAX_LENGTH: usize = 8;
/// Largest lattice accepted by the density-matrix and correlator oracles.
pub const ED_MAX_LENGTH: usize = 12;
const DEGENERACY_TOL: f64 = 1e-10;

fn phase_fix(v: &mut DVector<Complex64>) {
    let norm = v.norm();
    if norm > 0.0 {
        *v /= Complex64::new(norm, 0.0);
    }
    if let Some(first) = v.iter().find(|z| z.norm() > 1e-12).copied() {
        let ph = first.conj() / first.norm();
        *v *= ph;
    }
}

/// Eigenvalue of largest modulus and its unit eigenvector (first non-negligible
/// component real positive).
///
/// Fails if the two largest moduli agree within 1e−10 (relative).
pub fn leading_eigenpair(t: &LatticeOperator) -> Result<(Complex64, DVector<Complex64>)> {
    dense_leading(&t.matrix)
}

fn dense_leading(m: &DMatrix<Complex64>) -> Result<(Complex64, DVector<Complex64>)> {
    leading_both(m).map(|(lam, right, _)| (lam, right))
}

// Largest-modulus eigenvalue with right and left (transpose) eigenvectors.
// Power iteration isolates the eigenvalue, inverse iteration polishes it, and
// a power iteration on the deflated matrix bounds the next modulus.
fn leading_both(m: &DMatrix<Complex64>) -> Result<(Complex64, DVector<Complex64>, DVector<Complex64>)> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: m.ncols(),
        });
    }
    if n < 4 {
        return Err(Error::LengthTooSmall { got: n, min: 4 });
    }
    let (lam, right) = polish(m, power(m)?)?;
    let mt = m.transpose();
    let (_, left) = polish(&mt, lam)?;
    let overlap = (left.transpose() * &right)[(0, 0)];
    if overlap.norm() < 1e-12 {
        return Err(Error::DegenerateLeading { gap: 0.0 });
    }
    let deflated = m - (&right * left.transpose()) * (lam / overlap);
    let next = spectral_radius_estimate(&deflated);
    let gap = 1.0 - next / lam.norm();
    if gap < DEGENERACY_TOL {
        return Err(Error::DegenerateLeading { gap: gap.max(0.0) });
    }
    Ok((lam, right, left))
}

fn start_vector(n: usize) -> DVector<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1ead);
    let v = DVector::from_fn(n, |_, _| Complex64::new(rng.gen::<f64>() + 0.5, 0.0));
    let norm = v.norm();
    v / Complex64::new(norm, 0.0)
}

// Rough dominant eigenvalue by power iteration.
fn power(m: &DMatrix<Complex64>) -> Result<Complex64> {
    const MAX: usize = 20_000;
    let mut v = start_vector(m.nrows());
    let mut history = Vec::new();
    for _ in 0..MAX {
        let w = m * &v;
        let lam = v.dotc(&w);
        let res = (&w - &v * lam).norm() / lam.norm().max(1e-300);
        if history.len() < 64 || history.len() % 256 == 0 {
            history.push(res);
        }
        if res < 1e-6 {
            return Ok(lam);
        }
        let norm = w.norm();
        if norm == 0.0 {
            break;
        }
        v = w / Complex64::new(norm, 0.0);
    }
    Err(Error::NoConvergence {
        stage: "power iteration (leading modulus not isolated)",
        iterations: MAX,
        residual: *history.last().unwrap_or(&f64::NAN),
        history,
    })
}

// Inverse iteration at a shift next to `approx`; returns the refined
// eigenvalue and a unit eigenvector with the phase convention applied.
fn polish(m: &DMatrix<Complex64>, approx: Complex64) -> Result<(Complex64, DVector<Complex64>)> {
    let n = m.nrows();
    let shift = approx * Complex64::new(1.0 + 1e-9, 1e-9);
    let mut a = m.clone();
    for i in 0..n {
        a[(i, i)] -= shift;
    }
    let lu = a.lu();
    let mut v = start_vector(n);
    let mut history = Vec::new();
    for _ in 0..50 {
        let w = lu.solve(&v).ok_or(Error::NoConvergence {
            stage: "inverse iteration",
            iterations: history.len(),
            residual: f64::NAN,
            history: history.clone(),
        })?;
        v = &w / Complex64::new(w.norm(), 0.0);
        let lam = v.dotc(&(m * &v));
        let res = (m * &v - &v * lam).norm() / lam.norm();
        history.push(res);
        if res < 1e-13 {
            phase_fix(&mut v);
            return Ok((lam, v));
        }
    }
    Err(Error::NoConvergence {
        stage: "inverse iteration",
        iterations: history.len(),
        residual: *history.last().unwrap_or(&f64::NAN),
        history,
    })
}

// Geometric-mean growth rate of a power iteration, an estimate of the
// spectral radius that tolerates complex-conjugate pairs.
fn spectral_radius_estimate(m: &DMatrix<Complex64>) -> f64 {
    let mut v = start_vector(m.nrows());
    let (burn, keep) = (200, 400);
    let mut log_sum = 0.0;
    for it in 0..burn + keep {
        let w = m * &v;
        let norm = w.norm();
        if norm < 1e-300 {
            return 0.0;
        }
        if it >= burn {
            log_sum += norm.ln();
        }
        v = w / Complex64::new(norm, 0.0);
    }
    (log_sum / keep as f64).exp()
}

/// Lowest eigenvalue, next eigenvalue (with multiplicity) and ground vector of
/// a real symmetric operator given matrix-free.
fn lanczos_lowest<F>(dim: usize, apply: F, deflate: Option<&[f64]>) -> Result<(f64, Vec<f64>)>
where
    F: Fn(&[f64], &mut [f64]),
{
    let steps = dim.min(400);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(steps);
    let project = |v: &mut [f64], basis: &[Vec<f64>]| {
        for _ in 0..2 {
            if let Some(d) = deflate {
                let c: f64 = d.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(d).for_each(|(x, y)| *x -= c * y);
            }
            for b in basis {
                let c: f64 = b.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
    };
    let mut v: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>() - 0.5).collect();
    project(&mut v, &basis);
    let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= nv);
    let mut alphas = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut w = vec![0.0; dim];
    let mut history = Vec::new();
    let mut result: Option<(f64, Vec<f64>)> = None;
    for step in 0..steps {
        apply(&v, &mut w);
        let a: f64 = v.iter().zip(&w).map(|(x, y)| x * y).sum();
        alphas.push(a);
        basis.push(v.clone());
        project(&mut w, &basis);
        let b = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        let m = alphas.len();
        let tri = DMatrix::from_fn(m, m, |i, j| {
            if i == j {
                alphas[i]
            } else if i + 1 == j {
                betas[i]
            } else if j + 1 == i {
                betas[j]
            } else {
                0.0
            }
        });
        let eig = tri.symmetric_eigen();
        let (imin, emin) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, e)| (i, *e))
            .unwrap();
        let y = eig.eigenvectors.column(imin);
        let res = (b * y[m - 1]).abs();
        history.push(res);
        if res < 1e-12 || b < 1e-13 || step + 1 == steps {
            if res < 1e-10 || b < 1e-13 {
                let mut g = vec![0.0; dim];
                for (k, bk) in basis.iter().enumerate() {
                    g.iter_mut().zip(bk).for_each(|(x, y0)| *x += y[k] * y0);
                }
                let ng = g.iter().map(|x| x * x).sum::<f64>().sqrt();
                g.iter_mut().for_each(|x| *x /= ng);
                result = Some((emin, g));
            }
            break;
        }
        betas.push(b);
        v = w.iter().map(|x| x / b).collect();
    }
    result.ok_or(Error::NoConvergence {
        stage: "Lanczos",
        iterations: history.len(),
        residual: *history.last().unwrap_or(&f64::NAN),
        history,
    })
}

/// Ground energy, gap to the next level and normalized real ground vector of
/// the three-spin Hamiltonian.
pub fn hamiltonian_ground(length: usize) -> Result<(f64, f64, Vec<f64>)> {
    check_lattice_length(length)?;
    if length > ED_MAX_LENGTH {
        return Err(Error::Unsupported(format!(
            "exact diagonalization limited to L ≤ {ED_MAX_LENGTH}, got {length}"
        )));
    }
    let dim = 1usize << length;
    let (e0, e1, mut g) = if length <= DENSE_MAX_LENGTH {
        let h = crate::face_model::hamiltonian_irf(length)?.matrix.map(|z| z.re);
        let eig = h.symmetric_eigen();
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let g: Vec<f64> = eig.eigenvectors.column(order[0]).iter().copied().collect();
        (eig.eigenvalues[order[0]], eig.eigenvalues[order[1]], g)
    } else {
        let apply = |x: &[f64], y: &mut [f64]| apply_hamiltonian(length, x, y);
        let (e0, g) = lanczos_lowest(dim, apply, None)?;
        let (e1, _) = lanczos_lowest(dim, apply, Some(&g))?;
        (e0, e1, g)
    };
    let gap = e1 - e0;
    if gap < DEGENERACY_TOL {
        return Err(Error::DegenerateGround { gap });
    }
    if let Some(first) = g.iter().find(|x| x.abs() > 1e-12).copied() {
        if first < 0.0 {
            g.iter_mut().for_each(|x| *x = -*x);
        }
    }
    Ok((e0, gap, g))
}

/// Leading transfer-matrix eigenstate with left and right vectors and a cache
/// of leading eigenvalues Λ₀(λ).
#[derive(Clone, Debug)]
pub struct GroundState {
    rows: RowOperators,
    right: DVector<Complex64>,
    left: DVector<Complex64>,
    eigenvalues: Vec<(Complex64, Complex64)>,
}

impl GroundState {
    /// Ground state for the given inhomogeneities. Homogeneous lattices use the
    /// Hamiltonian ground state (real, left = right); inhomogeneous ones use the
    /// leading eigenvector of T(−1/2) and of its transpose (L ≤ 8).
    pub fn compute(inhomogeneities: &[Complex64]) -> Result<Self> {
        let rows = RowOperators::new(inhomogeneities)?;
        let l = rows.length();
        let homogeneous = inhomogeneities.iter().all(|u| *u == ZERO);
        let (right, left) = if homogeneous {
            let (_, _, g) = hamiltonian_ground(l)?;
            let v = DVector::from_iterator(g.len(), g.into_iter().map(|x| Complex64::new(x, 0.0)));
            (v.clone(), v)
        } else {
            if l > DENSE_MAX_LENGTH {
                return Err(Error::Unsupported(format!(
                    "inhomogeneous ground states limited to L ≤ {DENSE_MAX_LENGTH}, got {l}"
                )));
            }
            let t = rows.transfer_dense(Complex64::new(REFERENCE_LAMBDA, 0.0));
            let (_, r, lv) = leading_both(&t)?;
            (r, lv)
        };
        let mut gs = Self {
            rows,
            right,
            left,
            eigenvalues: Vec::new(),
        };
        gs.precompute(&[SpectralPoint::real(REFERENCE_LAMBDA)?])?;
        Ok(gs)
    }

    pub fn homogeneous(length: usize) -> Result<Self> {
        Self::compute(&vec![ZERO; length])
    }

    pub fn length(&self) -> usize {
        self.rows.length()
    }

    pub fn rows(&self) -> &RowOperators {
        &self.rows
    }

    /// Unit-norm right eigenvector.
    pub fn vector(&self) -> &DVector<Complex64> {
        &self.right
    }

    pub fn left_vector(&self) -> &DVector<Complex64> {
        &self.left
    }

    /// Computes and stores Λ₀(λ) for each λ, checking the eigen-relation.
    pub fn precompute(&mut self, lambdas: &[SpectralPoint]) -> Result<()> {
        for lam in lambdas {
            let z = lam.value();
            if self.eigenvalue_at(z).is_some() {
                continue;
            }
            let tv = DVector::from_vec(self.rows.apply_transfer(z, self.right.as_slice()));
            let lam0 = self.left.transpose() * &tv;
            let lam0 = lam0[(0, 0)] / (self.left.transpose() * &self.right)[(0, 0)];
            let res = (&tv - &self.right * lam0).norm();
            if res > 1e-10 * lam0.norm().max(1.0) {
                return Err(Error::Precondition(format!(
                    "stored vector is not a transfer-matrix eigenvector at λ = {z} (residual {res:.3e})"
                )));
            }
            self.eigenvalues.push((z, lam0));
        }
        Ok(())
    }

    pub fn eigenvalue_at(&self, lambda: Complex64) -> Option<Complex64> {
        self.eigenvalues
            .iter()
            .find(|(z, _)| (*z - lambda).norm() < 1e-15)
            .map(|(_, v)| *v)
    }
}

/// A reduced density matrix with its basis and spectral points.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    pub matrix: DMatrix<Complex64>,
    /// n: IRF matrices have dimension 2^{n+1}, chain matrices 2^n.
    pub sites: usize,
    pub irf: bool,
    pub basis: BasisTag,
    pub spectral_points: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }
}

/// D_n(λ₁…λ_n) with entries ⟨Φ|𝒯^{α₁β₁}_{α₂β₂}(λ₁)…𝒯^{αₙβₙ}_{α_{n+1}β_{n+1}}(λₙ)|Φ⟩
/// normalized by ⟨Φ|Φ⟩∏Λ₀(λ_k), restricted to α₁ = β₁ and α_{n+1} = β_{n+1}
/// (the cut ends of the periodic row). The bra is the left eigenvector.
pub fn reduced_density_irf(gs: &GroundState, lambdas: &[SpectralPoint]) -> Result<DensityMatrix> {
    let n = lambdas.len();
    let l = gs.length();
    if n == 0 || n > l {
        return Err(Error::Precondition(format!("need 1 ≤ n ≤ L, got n = {n}, L = {l}")));
    }
    let mut norm = (gs.left.transpose() * &gs.right)[(0, 0)];
    for lam in lambdas {
        let z = lam.value();
        norm *= gs
            .eigenvalue_at(z)
            .ok_or_else(|| Error::MissingEigenvalue(z.to_string()))?;
    }
    // (α_k…α_{n+1}, β_k…β_{n+1}, vector) from the right end inwards
    let mut level: Vec<(usize, usize, Vec<Complex64>)> = (0..2).map(|c| (c, c, gs.right.as_slice().to_vec())).collect();
    for k in (1..=n).rev() {
        let width = n + 1 - k;
        let z = lambdas[k - 1].value();
        let mut next = Vec::with_capacity(level.len() * 4);
        for (a, b, v) in &level {
            let bottom = (a >> (width - 1), b >> (width - 1));
            for ak in 0..2 {
                for bk in 0..2 {
                    if k == 1 && ak != bk {
                        continue;
                    }
                    let w = gs.rows.apply_element(z, (ak, bk), bottom, v);
                    next.push(((ak << width) | a, (bk << width) | b, w));
                }
            }
        }
        level = next;
    }
    let dim = 1usize << (n + 1);
    let mut m = DMatrix::zeros(dim, dim);
    for (a, b, v) in level {
        let s: Complex64 = gs.left.iter().zip(&v).map(|(x, y)| x * y).sum();
        m[(a, b)] = s / norm;
    }
    Ok(DensityMatrix {
        matrix: m,
        sites: n,
        irf: true,
        basis: BasisTag::HeightLex,
        spectral_points: lambdas.iter().map(|p| p.value()).collect(),
    })
}

/// A_n(λ₁…λ_n)[B]: the linear operator of the qKZ equation, in the height basis.
pub fn apply_qkz_operator(d: &DensityMatrix, lambdas: &[SpectralPoint]) -> Result<DensityMatrix> {
    let n = d.sites;
    if !d.irf || d.basis != BasisTag::HeightLex {
        return Err(Error::Precondition(
            "A_n acts on IRF matrices in the height basis".into(),
        ));
    }
    if lambdas.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: lambdas.len(),
        });
    }
    let lam: Vec<Complex64> = lambdas.iter().map(|p| p.value()).collect();
    let ln = lam[n - 1];
    let mut pref = ONE;
    for (k, lk) in lam.iter().enumerate() {
        let f = ONE - (lk - ln) * (lk - ln);
        if f.norm() < 1e-12 {
            return Err(Error::SingularPrefactor { k: k + 1 });
        }
        pref *= f;
    }
    let dim = 1usize << (n + 1);
    let bit = |x: usize, k: usize| (x >> (n + 1 - k)) & 1; // 1-based position
    let left = DMatrix::from_fn(dim, dim, |a, g| {
        if bit(g, n + 1) != bit(a, n) {
            return ZERO;
        }
        let mut p = ONE;
        for k in 1..n {
            p *= weight_bits(bit(a, k), bit(a, k + 1), bit(g, k + 1), bit(g, k), ln - lam[k - 1]);
        }
        p
    });
    let right = DMatrix::from_fn(dim, dim, |dl, b| {
        let mut p = ONE;
        for k in 1..n {
            p *= weight_bits(bit(dl, k + 1), bit(b, k + 1), bit(b, k), bit(dl, k), lam[k - 1] - ln);
        }
        p * weight_bits(bit(dl, n + 1), bit(b, n + 1), bit(b, n), bit(dl, n), -ONE)
    });
    let mut m = left * &d.matrix * right / pref;
    for a in 0..dim {
        for b in 0..dim {
            if bit(a, 1) != bit(b, 1) || bit(a, n + 1) != bit(b, n + 1) {
                m[(a, b)] = ZERO;
            }
        }
    }
    Ok(DensityMatrix {
        matrix: m,
        sites: n,
        irf: true,
        basis: BasisTag::HeightLex,
        spectral_points: lam,
    })
}

/// ‖D_n(…, λ_n−1) − A_n[D_n(…, λ_n)]‖_max; requires λ_n to equal one of the uᵢ.
pub fn verify_qkz(lambdas: &[SpectralPoint], inhomogeneities: &[Complex64]) -> Result<f64> {
    let n = lambdas.len();
    if n == 0 {
        return Err(Error::Precondition("need at least one spectral point".into()));
    }
    let ln = lambdas[n - 1].value();
    if !inhomogeneities.iter().any(|u| (*u - ln).norm() < 1e-12) {
        return Err(Error::Precondition(format!(
            "λ_n = {ln} must coincide with one of the inhomogeneities"
        )));
    }
    let mut gs = GroundState::compute(inhomogeneities)?;
    let mut shifted = lambdas.to_vec();
    shifted[n - 1] = SpectralPoint::new(ln - 1.0)?;
    gs.precompute(lambdas)?;
    gs.precompute(&shifted)?;
    let d = reduced_density_irf(&gs, lambdas)?;
    let lhs = reduced_density_irf(&gs, &shifted)?;
    let rhs = apply_qkz_operator(&d, lambdas)?;
    Ok((lhs.matrix - rhs.matrix).camax())
}

/// Chain matrix 𝔻_{n−1}: entries Σ_{α₁,α_{n+1}} D^{α₁α₂…α_{n+1}}_{α₁β₂…β_nα_{n+1}}.
pub fn partial_trace_to_chain(d: &DensityMatrix) -> Result<DensityMatrix> {
    if !d.irf {
        return Err(Error::Precondition("partial trace expects an IRF matrix".into()));
    }
    let d = if d.basis == BasisTag::DirectSum {
        from_direct_sum(d)
    } else {
        d.clone()
    };
    let n = d.sites;
    if n < 2 {
        return Err(Error::Precondition("partial trace needs n ≥ 2".into()));
    }
    let inner = n - 1;
    let dim = 1usize << inner;
    let mut m = DMatrix::zeros(dim, dim);
    for a in 0..dim {
        for b in 0..dim {
            let mut s = ZERO;
            for first in 0..2 {
                for last in 0..2 {
                    let ia = (first << n) | (a << 1) | last;
                    let ib = (first << n) | (b << 1) | last;
                    s += d.matrix[(ia, ib)];
                }
            }
            m[(a, b)] = s;
        }
    }
    Ok(DensityMatrix {
        matrix: m,
        sites: inner,
        irf: false,
        basis: BasisTag::HeightLex,
        spectral_points: d.spectral_points.clone(),
    })
}

/// Height-basis indices listed in direct-sum order for an n-site IRF matrix:
/// block label a₁ (+ first), then spin strings sᵢ = a₁aᵢaᵢ₊₁ in lexicographic order.
pub fn direct_sum_order(n: usize) -> Vec<usize> {
    let heights = n + 1;
    let mut order = Vec::with_capacity(1 << heights);
    for block in 0..2usize {
        let mut entries: Vec<(usize, usize)> = (0..(1usize << heights))
            .filter(|i| i >> n == block)
            .map(|i| {
                let h = |k: usize| (i >> (heights - 1 - k)) & 1;
                let spin = (0..n).fold(0, |acc, k| (acc << 1) | (h(0) ^ h(k) ^ h(k + 1)));
                (spin, i)
            })
            .collect();
        entries.sort();
        order.extend(entries.into_iter().map(|(_, i)| i));
    }
    order
}

/// Reorders an IRF matrix from the height basis into the direct-sum basis.
pub fn to_direct_sum(d: &DensityMatrix) -> DensityMatrix {
    if d.basis == BasisTag::DirectSum {
        return d.clone();
    }
    let order = direct_sum_order(d.sites);
    let dim = order.len();
    DensityMatrix {
        matrix: DMatrix::from_fn(dim, dim, |p, q| d.matrix[(order[p], order[q])]),
        basis: BasisTag::DirectSum,
        ..d.clone()
    }
}

/// Inverse of [`to_direct_sum`].
pub fn from_direct_sum(d: &DensityMatrix) -> DensityMatrix {
    if d.basis == BasisTag::HeightLex {
        return d.clone();
    }
    let order = direct_sum_order(d.sites);
    let dim = order.len();
    let mut m = DMatrix::zeros(dim, dim);
    for p in 0..dim {
        for q in 0..dim {
            m[(order[p], order[q])] = d.matrix[(p, q)];
        }
    }
    DensityMatrix {
        matrix: m,
        basis: BasisTag::HeightLex,
        ..d.clone()
    }
}

/// The two diagonal blocks (each rescaled by 2, so each has unit trace) of an
/// IRF matrix in direct-sum order, plus the largest off-block entry.
pub fn xxx_blocks(d: &DensityMatrix) -> (DMatrix<Complex64>, DMatrix<Complex64>, f64) {
    let r = to_direct_sum(d);
    let half = r.matrix.nrows() / 2;
    let b1 = r.matrix.view((0, 0), (half, half)) * Complex64::new(2.0, 0.0);
    let b2 = r.matrix.view((half, half), (half, half)) * Complex64::new(2.0, 0.0);
    let off = r
        .matrix
        .view((0, half), (half, half))
        .camax()
        .max(r.matrix.view((half, 0), (half, half)).camax());
    (b1, b2, off)
}

/// ω(λ₁,λ₂) read off the two-site IRF matrix as 3× the P₁₂ coefficient of its
/// XXX block; fails if the block structure deviates by more than 1e−8.
pub fn omega_from_ed(gs: &mut GroundState, lambda1: Complex64, lambda2: Complex64) -> Result<Complex64> {
    let pts = [SpectralPoint::new(lambda1)?, SpectralPoint::new(lambda2)?];
    gs.precompute(&pts)?;
    let d = reduced_density_irf(gs, &pts)?;
    let (b1, b2, off) = xxx_blocks(&d);
    let omega = b1[(1, 2)] * 3.0;
    let dev = off.max((&b1 - &b2).camax()).max((&b1 - d2_xxx(omega)).camax());
    if dev > 1e-8 {
        return Err(Error::StructureViolation { deviation: dev });
    }
    Ok(omega)
}

/// Pauli matrices used in correlator strings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

/// Sites (0-based) and Pauli factors of a named correlator.
pub fn pauli_string(c: Correlator) -> Vec<(usize, Pauli)> {
    use Pauli::*;
    match c {
        Correlator::X1 => vec![(0, X)],
        Correlator::X1X2 => vec![(0, X), (1, X)],
        Correlator::X1X2X3 => vec![(0, X), (1, X), (2, X)],
        Correlator::X1X3 => vec![(0, X), (2, X)],
        Correlator::Y1Y3 => vec![(0, Y), (2, Y)],
        Correlator::Z1Z3 => vec![(0, Z), (2, Z)],
        Correlator::YXY => vec![(0, Y), (1, X), (2, Y)],
        Correlator::ZXZ => vec![(0, Z), (1, X), (2, Z)],
    }
}

/// ⟨ψ|O|ψ⟩ for a Pauli string O on a length-L real state.
pub fn pauli_expectation(length: usize, psi: &[f64], ops: &[(usize, Pauli)]) -> Complex64 {
    let mut acc = ZERO;
    for (s, &v) in psi.iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        let mut t = s;
        let mut phase = ONE;
        for &(site, p) in ops {
            let sh = length - 1 - site;
            let up = (t >> sh) & 1 == 0;
            match p {
                Pauli::X => t ^= 1 << sh,
                Pauli::Y => {
                    phase *= if up {
                        Complex64::new(0.0, 1.0)
                    } else {
                        Complex64::new(0.0, -1.0)
                    };
                    t ^= 1 << sh;
                }
                Pauli::Z => {
                    if !up {
                        phase = -phase;
                    }
                }
            }
        }
        acc += phase * psi[t] * v;
    }
    acc
}

/// Ground-state expectation of a named correlator by exact diagonalization.
pub fn correlator_ed(length: usize, name: Correlator) -> Result<f64> {
    let (_, _, g) = hamiltonian_ground(length)?;
    Ok(pauli_expectation(length, &g, &pauli_string(name)).re)
}

/// All eight named correlators from one ground state.
pub fn correlators_ed(length: usize) -> Result<CorrelatorTable> {
    let (_, _, g) = hamiltonian_ground(length)?;
    let mut t = CorrelatorTable::new(ChainLength::Finite(length));
    for c in Correlator::ALL {
        let v = pauli_expectation(length, &g, &pauli_string(c));
        if v.im.abs() > 1e-12 {
            return Err(Error::ImpurePart {
                what: c.name().to_string(),
                imag: v.im,
            });
        }
        t.insert(c, v.re);
    }
    Ok(t)
}

/// Seeded inhomogeneities uᵢ ∈ [−0.25, 0.25].
pub fn seeded_inhomogeneities(length: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..length).map(|_| rng.gen_range(-0.25..0.25)).collect()
}

/// A seeded qKZ test case: inhomogeneities uᵢ, then n spectral points whose
/// first n−1 entries are drawn from [−0.4, 0.4] and whose last equals a drawn uₖ.
pub fn seeded_qkz_case(length: usize, n: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let u = seeded_inhomogeneities(length, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut lambdas: Vec<f64> = (1..n).map(|_| rng.gen_range(-0.4..0.4)).collect();
    if n > 0 {
        lambdas.push(u[rng.gen_range(0..length)]);
    }
    (u, lambdas)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::face_model::{hamiltonian_irf, transfer_matrix};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sp(x: f64) -> SpectralPoint {
        SpectralPoint::real(x).unwrap()
    }

    fn cvec(u: &[f64]) -> Vec<Complex64> {
        u.iter().map(|&x| c(x, 0.0)).collect()
    }

    #[test]
    fn leading_pair_of_diagonal_matrix() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![
            c(1.0, 0.0),
            c(3.0, 0.0),
            c(-2.0, 0.0),
            c(0.5, 0.0),
        ]));
        let (lam, v) = leading_eigenpair(&LatticeOperator {
            matrix: m,
            basis: BasisTag::HeightLex,
        })
        .unwrap();
        assert!((lam - c(3.0, 0.0)).norm() < 1e-12);
        assert!((v[1] - ONE).norm() < 1e-12);
    }

    #[test]
    fn identity_is_degenerate() {
        let t = LatticeOperator {
            matrix: DMatrix::identity(4, 4),
            basis: BasisTag::HeightLex,
        };
        assert!(matches!(leading_eigenpair(&t), Err(Error::DegenerateLeading { .. })));
    }

    #[test]
    fn leading_eigenvalue_l4_real_positive() {
        let t = transfer_matrix(sp(0.0), &cvec(&[0.0; 4])).unwrap();
        // T(0) is a shift; its spectrum lies on the unit circle, so the
        // leading modulus is degenerate there. Away from 0 it is unique.
        assert!(leading_eigenpair(&t).is_err());
        let t = transfer_matrix(sp(REFERENCE_LAMBDA), &cvec(&[0.0; 4])).unwrap();
        let (lam, _) = leading_eigenpair(&t).unwrap();
        assert!(lam.re > 0.0 && lam.im.abs() < 1e-12);
        let gs = GroundState::homogeneous(4).unwrap();
        let at0 = {
            let mut g = gs.clone();
            g.precompute(&[sp(0.0)]).unwrap();
            g.eigenvalue_at(c(0.0, 0.0)).unwrap()
        };
        assert!((at0 - ONE).norm() < 1e-12);
    }

    #[test]
    fn leading_transfer_vector_is_hamiltonian_ground_state() {
        for l in [4usize, 8] {
            let t = transfer_matrix(sp(REFERENCE_LAMBDA), &cvec(&vec![0.0; l])).unwrap();
            let (_, v) = leading_eigenpair(&t).unwrap();
            let (_, _, g) = hamiltonian_ground(l).unwrap();
            let overlap: Complex64 = v.iter().zip(&g).map(|(a, b)| a.conj() * b).sum();
            assert!((overlap.norm() - 1.0).abs() < 1e-10, "L = {l}");
        }
    }

    #[test]
    fn lanczos_agrees_with_dense() {
        let l = 8;
        let dim = 1 << l;
        let apply = |x: &[f64], y: &mut [f64]| apply_hamiltonian(l, x, y);
        let (e0, g) = lanczos_lowest(dim, apply, None).unwrap();
        let (e1, _) = lanczos_lowest(dim, apply, Some(&g)).unwrap();
        let h = hamiltonian_irf(l).unwrap().matrix.map(|z| z.re);
        let mut ev: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        assert!((e0 - ev[0]).abs() < 1e-10);
        assert!((e1 - ev[1]).abs() < 1e-10);
        assert!((ev[0] + 3.302_2).abs() < 1e-3);
    }

    #[test]
    fn table_values_l4_l8() {
        let t4 = correlators_ed(4).unwrap();
        assert!((t4.get(Correlator::X1).unwrap() + 2.0 / 3.0).abs() < 1e-12);
        assert!((t4.get(Correlator::X1X3).unwrap() - 1.0).abs() < 1e-12);
        let y = correlator_ed(8, Correlator::Y1Y3).unwrap();
        assert!((y - 0.217_464_87).abs() < 1e-8);
    }

    #[test]
    fn correlator_relations_l8() {
        let t = correlators_ed(8).unwrap();
        let g = |c| t.get(c).unwrap();
        assert!((g(Correlator::Z1Z3) - g(Correlator::X1)).abs() < 1e-10);
        assert!((g(Correlator::YXY) + g(Correlator::Y1Y3)).abs() < 1e-10);
        assert!((g(Correlator::ZXZ) + g(Correlator::Z1Z3)).abs() < 1e-10);
    }

    #[test]
    fn density_trace_and_one_site() {
        let mut gs = GroundState::homogeneous(4).unwrap();
        gs.precompute(&[sp(0.0)]).unwrap();
        let d = reduced_density_irf(&gs, &[sp(0.0)]).unwrap();
        assert!((d.trace() - ONE).norm() < 1e-12);
        let u = [0.1, -0.07, 0.2, 0.0];
        let mut gs = GroundState::compute(&cvec(&u)).unwrap();
        let pts = [
            SpectralPoint::new(c(0.3, 0.2)).unwrap(),
            sp(-0.4),
            SpectralPoint::new(c(0.0, -0.5)).unwrap(),
        ];
        gs.precompute(&pts).unwrap();
        for n in 1..=3 {
            let d = reduced_density_irf(&gs, &pts[..n]).unwrap();
            assert!((d.trace() - ONE).norm() < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn missing_eigenvalue_is_reported() {
        let gs = GroundState::homogeneous(4).unwrap();
        assert!(matches!(
            reduced_density_irf(&gs, &[sp(0.3)]),
            Err(Error::MissingEigenvalue(_))
        ));
    }

    #[test]
    fn printed_direct_sum_orderings() {
        let fmt = |n: usize, i: usize| -> String {
            (0..=n)
                .map(|k| if (i >> (n - k)) & 1 == 0 { '+' } else { '-' })
                .collect()
        };
        let two: Vec<String> = direct_sum_order(2).into_iter().map(|i| fmt(2, i)).collect();
        assert_eq!(two, ["+++", "++-", "+--", "+-+", "-+-", "-++", "--+", "---"]);
        let three: Vec<String> = direct_sum_order(3).into_iter().map(|i| fmt(3, i)).collect();
        assert_eq!(
            three,
            [
                "++++", "+++-", "++--", "++-+", "+---", "+--+", "+-++", "+-+-", "-+-+", "-+--", "-++-", "-+++", "--+-",
                "--++", "---+", "----"
            ]
        );
    }

    #[test]
    fn direct_sum_structure_two_and_three_sites() {
        let mut gs = GroundState::homogeneous(8).unwrap();
        for pts in [
            vec![sp(0.0), sp(0.0)],
            vec![sp(0.3), sp(-0.2)],
            vec![sp(0.1), sp(-0.2), sp(0.3)],
        ] {
            gs.precompute(&pts).unwrap();
            let d = reduced_density_irf(&gs, &pts).unwrap();
            let (b1, b2, off) = xxx_blocks(&d);
            assert!(off < 1e-12);
            assert!((&b1 - &b2).camax() < 1e-10);
        }
    }

    #[test]
    fn omega_from_ed_values() {
        let mut gs = GroundState::homogeneous(4).unwrap();
        let w = omega_from_ed(&mut gs, ZERO, ZERO).unwrap();
        assert!((w - c(-1.0, 0.0)).norm() < 1e-12);
        let mut gs = GroundState::homogeneous(8).unwrap();
        let w = omega_from_ed(&mut gs, ZERO, ZERO).unwrap();
        assert!((w.re + 0.912_773_352_234_293_3).abs() < 1e-12);
        let x1 = correlator_ed(8, Correlator::X1).unwrap();
        assert!((w.re - 1.5 * x1).abs() < 1e-12);
    }

    #[test]
    fn one_site_chain_matrix() {
        let mut gs = GroundState::homogeneous(8).unwrap();
        let pts = [sp(0.2), sp(-0.1)];
        gs.precompute(&pts).unwrap();
        let d = reduced_density_irf(&gs, &pts).unwrap();
        let w = omega_from_ed(&mut gs, c(0.2, 0.0), c(-0.1, 0.0)).unwrap();
        let d1 = partial_trace_to_chain(&d).unwrap();
        assert!((d1.trace() - ONE).norm() < 1e-12);
        let want = DMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), w / 3.0, w / 3.0, c(0.5, 0.0)]);
        assert!((d1.matrix - want).camax() < 1e-12);
    }

    #[test]
    fn qkz_small_lattices() {
        let u4 = cvec(&[0.1, -0.07, 0.2, 0.0]);
        let r = verify_qkz(&[sp(0.3), SpectralPoint::new(u4[1]).unwrap()], &u4).unwrap();
        assert!(r < 1e-10, "{r}");
        let r = verify_qkz(&[sp(0.3), sp(-0.15), SpectralPoint::new(u4[0]).unwrap()], &u4).unwrap();
        assert!(r < 1e-10, "{r}");
        // not at an inhomogeneity: rejected
        assert!(verify_qkz(&[sp(0.3), sp(0.11)], &u4).is_err());
    }

    #[test]
    fn qkz_fails_off_inhomogeneity() {
        // the equation only holds at λ_n = u_k; check it is not trivially satisfied
        let u4 = cvec(&[0.1, -0.07, 0.2, 0.0]);
        let mut gs = GroundState::compute(&u4).unwrap();
        let pts = [sp(0.3), sp(0.5)];
        let shifted = [sp(0.3), sp(-0.5)];
        gs.precompute(&pts).unwrap();
        gs.precompute(&shifted).unwrap();
        let d = reduced_density_irf(&gs, &pts).unwrap();
        let lhs = reduced_density_irf(&gs, &shifted).unwrap();
        let rhs = apply_qkz_operator(&d, &pts).unwrap();
        assert!((lhs.matrix - rhs.matrix).camax() > 1e-3);
    }

    #[test]
    fn qkz_singular_prefactor() {
        let d = DensityMatrix {
            matrix: DMatrix::identity(8, 8),
            sites: 2,
            irf: true,
            basis: BasisTag::HeightLex,
            spectral_points: vec![],
        };
        assert!(matches!(
            apply_qkz_operator(&d, &[sp(1.2), sp(0.2)]),
            Err(Error::SingularPrefactor { .. })
        ));
    }

    #[test]
    fn seeded_inhomogeneities_are_deterministic() {
        let a = seeded_inhomogeneities(8, 7);
        assert_eq!(a, seeded_inhomogeneities(8, 7));
        assert!(a.iter().all(|u| u.abs() <= 0.25));
    }

    #[test]
    fn seeded_qkz_case_ends_on_an_inhomogeneity() {
        let (u, l) = seeded_qkz_case(8, 3, 11);
        assert_eq!(l.len(), 3);
        assert!(u.contains(&l[2]));
        assert_eq!(seeded_qkz_case(8, 3, 11), (u, l));
    }
}
