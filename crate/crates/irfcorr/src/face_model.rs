//! Face (IRF) Boltzmann weights, monodromy and transfer matrices, the
//! three-spin Hamiltonian and its symmetry operators.
//!
//! Heights are stored as bits: `+` is bit 0 and `−` is bit 1. A row of L
//! heights is indexed lexicographically with + < − and height 1 as the most
//! significant bit ([`BasisTag::HeightLex`]). The same index labels the σᶻ
//! basis of the spin chain, height `+` being σᶻ = +1.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

/// A single ± height on a lattice corner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Height {
    Plus,
    Minus,
}

impl Height {
    pub fn value(self) -> i8 {
        match self {
            Height::Plus => 1,
            Height::Minus => -1,
        }
    }

    pub fn bit(self) -> usize {
        match self {
            Height::Plus => 0,
            Height::Minus => 1,
        }
    }

    pub fn from_bit(bit: usize) -> Self {
        if bit & 1 == 0 {
            Height::Plus
        } else {
            Height::Minus
        }
    }

    pub fn from_value(v: i8) -> Option<Self> {
        match v {
            1 => Some(Height::Plus),
            -1 => Some(Height::Minus),
            _ => None,
        }
    }
}

impl std::fmt::Display for Height {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Height::Plus => "+",
            Height::Minus => "-",
        })
    }
}

/// A periodic row of heights.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HeightConfig {
    heights: Vec<Height>,
}

impl HeightConfig {
    pub fn new(heights: Vec<Height>) -> Result<Self> {
        check_even(heights.len(), 2)?;
        Ok(Self { heights })
    }

    pub fn from_index(length: usize, index: usize) -> Result<Self> {
        check_even(length, 2)?;
        if index >= 1usize << length {
            return Err(Error::DimensionMismatch {
                expected: 1 << length,
                got: index,
            });
        }
        let heights = (0..length)
            .map(|i| Height::from_bit(index >> (length - 1 - i)))
            .collect();
        Ok(Self { heights })
    }

    pub fn len(&self) -> usize {
        self.heights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heights.is_empty()
    }

    /// Height at 1-based periodic position `i` (position L+1 is position 1).
    pub fn at(&self, i: usize) -> Height {
        let l = self.heights.len();
        self.heights[(i + l - 1) % l]
    }

    pub fn index(&self) -> usize {
        self.heights.iter().fold(0, |acc, h| (acc << 1) | h.bit())
    }

    pub fn heights(&self) -> &[Height] {
        &self.heights
    }
}

impl std::fmt::Display for HeightConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for h in &self.heights {
            write!(f, "{h}")?;
        }
        Ok(())
    }
}

/// A finite complex rapidity λ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralPoint(Complex64);

impl SpectralPoint {
    pub fn new(lambda: Complex64) -> Result<Self> {
        if lambda.re.is_finite() && lambda.im.is_finite() {
            Ok(Self(lambda))
        } else {
            Err(Error::NonFiniteSpectralPoint(lambda.to_string()))
        }
    }

    pub fn real(x: f64) -> Result<Self> {
        Self::new(Complex64::new(x, 0.0))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }
}

/// Ordering of a basis of heights or spins.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisTag {
    /// Lexicographic in heights (or σᶻ eigenvalues), + < −, first site most significant.
    HeightLex,
    /// IRF height strings reordered into two blocks labelled by the first
    /// height, each block sorted by the spin string sᵢ = a₁aᵢaᵢ₊₁.
    DirectSum,
}

/// A dense operator over an ordered basis.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeOperator {
    pub matrix: DMatrix<Complex64>,
    pub basis: BasisTag,
}

impl LatticeOperator {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

fn check_even(length: usize, min: usize) -> Result<()> {
    if length % 2 == 1 {
        return Err(Error::OddLength(length));
    }
    if length < min {
        return Err(Error::LengthTooSmall { got: length, min });
    }
    Ok(())
}

pub(crate) fn check_lattice_length(length: usize) -> Result<()> {
    check_even(length, 4)
}

/// Face weight with corner bits (bottom-left, bottom-right, top-right, top-left).
#[inline]
pub(crate) fn weight_bits(a: usize, b: usize, c: usize, d: usize, lambda: Complex64) -> Complex64 {
    match (a == c, b == d) {
        (true, true) => lambda + 1.0,
        (false, false) => lambda,
        (true, false) => Complex64::new(1.0, 0.0),
        (false, true) => Complex64::new(0.0, 0.0),
    }
}

/// Boltzmann weight W(a,b,c,d|λ) of a face with corners a (bottom-left),
/// b (bottom-right), c (top-right), d (top-left).
///
/// Equal diagonals give 𝔞 = λ+1, both diagonals unequal give 𝔟 = λ, equal
/// bottom-left/top-right with unequal other diagonal gives 𝔠 = 1; the remaining
/// patterns are disallowed and weigh 0.
pub fn face_weight(a: Height, b: Height, c: Height, d: Height, lambda: SpectralPoint) -> Complex64 {
    weight_bits(a.bit(), b.bit(), c.bit(), d.bit(), lambda.value())
}

/// Largest residual of the face Yang–Baxter relation over all external heights:
///
/// Σ_g W(a,b,g,f|λ) W(b,c,d,g|μ) W(g,d,e,f|μ−λ) = Σ_g W(g,c,b,a|μ−λ) W(g,c,d,e|λ) W(a,g,e,f|μ).
pub fn check_yang_baxter(lambda: SpectralPoint, mu: SpectralPoint) -> f64 {
    let (l, m) = (lambda.value(), mu.value());
    let w = weight_bits;
    let mut worst: f64 = 0.0;
    for ext in 0..64usize {
        let bit = |k: usize| (ext >> (5 - k)) & 1;
        let (a, b, c, d, e, f) = (bit(0), bit(1), bit(2), bit(3), bit(4), bit(5));
        let mut lhs = Complex64::new(0.0, 0.0);
        let mut rhs = Complex64::new(0.0, 0.0);
        for g in 0..2 {
            lhs += w(a, b, g, f, l) * w(b, c, d, g, m) * w(g, d, e, f, m - l);
            rhs += w(g, c, b, a, m - l) * w(g, c, d, e, l) * w(a, g, e, f, m);
        }
        worst = worst.max((lhs - rhs).norm());
    }
    worst
}

/// Matrix-free row operators of a periodic lattice with column inhomogeneities.
#[derive(Clone, Debug)]
pub struct RowOperators {
    length: usize,
    inhomogeneities: Vec<Complex64>,
}

impl RowOperators {
    pub fn new(inhomogeneities: &[Complex64]) -> Result<Self> {
        check_lattice_length(inhomogeneities.len())?;
        for u in inhomogeneities {
            SpectralPoint::new(*u)?;
        }
        Ok(Self {
            length: inhomogeneities.len(),
            inhomogeneities: inhomogeneities.to_vec(),
        })
    }

    pub fn homogeneous(length: usize) -> Result<Self> {
        Self::new(&vec![Complex64::new(0.0, 0.0); length])
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn dim(&self) -> usize {
        1 << self.length
    }

    pub fn inhomogeneities(&self) -> &[Complex64] {
        &self.inhomogeneities
    }

    /// Applies the monodromy element 𝒯^{α₁β₁}_{α₂β₂}(λ) to `psi`.
    ///
    /// Entry (a, b) of the element is ∏ᵢ W(bᵢ,bᵢ₊₁,aᵢ₊₁,aᵢ|λ−uᵢ) with
    /// a₁ = α₁, b₁ = α₂, a_{L+1} = β₁, b_{L+1} = β₂. `top` is (α₁, β₁) and
    /// `bottom` is (α₂, β₂), as height bits.
    pub fn apply_element(
        &self,
        lambda: Complex64,
        top: (usize, usize),
        bottom: (usize, usize),
        psi: &[Complex64],
    ) -> Vec<Complex64> {
        let l = self.length;
        let dim = 1usize << l;
        assert_eq!(psi.len(), dim, "state dimension");
        let zero = Complex64::new(0.0, 0.0);
        // Tensor over L+1 bits: a₁…a_j followed by b_j…b_L.
        let mut phi = vec![zero; dim << 1];
        let b1_shift = l - 1;
        for (b, &v) in psi.iter().enumerate() {
            if (b >> b1_shift) & 1 == bottom.0 {
                phi[(top.0 << l) | b] = v;
            }
        }
        for j in 1..l {
            let mu = lambda - self.inhomogeneities[j - 1];
            let sh = l - j;
            let mask = 1usize << sh;
            let wt = |p: usize, q: usize, r: usize, s: usize| weight_bits(p, q, r, s, mu);
            for idx in 0..(dim << 1) {
                if idx & mask != 0 {
                    continue;
                }
                let v0 = phi[idx];
                let v1 = phi[idx | mask];
                if v0 == zero && v1 == zero {
                    continue;
                }
                let aj = (idx >> (sh + 1)) & 1;
                let bn = (idx >> (sh - 1)) & 1;
                phi[idx] = wt(0, bn, 0, aj) * v0 + wt(1, bn, 0, aj) * v1;
                phi[idx | mask] = wt(0, bn, 1, aj) * v0 + wt(1, bn, 1, aj) * v1;
            }
        }
        let mu = lambda - self.inhomogeneities[l - 1];
        let mut out = vec![zero; dim];
        for (a, o) in out.iter_mut().enumerate() {
            let al = a & 1;
            let mut acc = zero;
            for bl in 0..2 {
                let v = phi[(a << 1) | bl];
                if v != zero {
                    acc += weight_bits(bl, bottom.1, top.1, al, mu) * v;
                }
            }
            *o = acc;
        }
        out
    }

    /// Applies T(λ) = Σ_{α₁,α₂} 𝒯^{α₁α₁}_{α₂α₂}(λ).
    pub fn apply_transfer(&self, lambda: Complex64, psi: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
        for a1 in 0..2 {
            for a2 in 0..2 {
                let part = self.apply_element(lambda, (a1, a1), (a2, a2), psi);
                for (o, p) in out.iter_mut().zip(part) {
                    *o += p;
                }
            }
        }
        out
    }

    /// Dense transfer matrix, assembled column by column.
    pub fn transfer_dense(&self, lambda: Complex64) -> DMatrix<Complex64> {
        let dim = self.dim();
        let mut m = DMatrix::zeros(dim, dim);
        let mut e = vec![Complex64::new(0.0, 0.0); dim];
        for col in 0..dim {
            e[col] = Complex64::new(1.0, 0.0);
            let c = self.apply_transfer(lambda, &e);
            for (row, v) in c.into_iter().enumerate() {
                m[(row, col)] = v;
            }
            e[col] = Complex64::new(0.0, 0.0);
        }
        m
    }
}

/// Dense transfer matrix T(λ) for the given inhomogeneities.
pub fn transfer_matrix(lambda: SpectralPoint, inhomogeneities: &[Complex64]) -> Result<LatticeOperator> {
    let rows = RowOperators::new(inhomogeneities)?;
    Ok(LatticeOperator {
        matrix: rows.transfer_dense(lambda.value()),
        basis: BasisTag::HeightLex,
    })
}

/// Applies H = ½ Σᵢ (σᵢˣ − σᵢ₋₁ᶻσᵢˣσᵢ₊₁ᶻ + σᵢ₋₁ᶻσᵢ₊₁ᶻ + 1) to a real vector.
pub fn apply_hamiltonian(length: usize, psi: &[f64], out: &mut [f64]) {
    let l = length;
    out.iter_mut().for_each(|o| *o = 0.0);
    let bit = |s: usize, i: usize| (s >> (l - 1 - (i % l))) & 1;
    for (s, &v) in psi.iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        for i in 0..l {
            let left = bit(s, i + l - 1);
            let right = bit(s, i + 1);
            if left == right {
                out[s] += v;
            } else {
                out[s ^ (1 << (l - 1 - i))] += v;
            }
        }
    }
}

/// Dense three-spin Hamiltonian on L sites.
pub fn hamiltonian_irf(length: usize) -> Result<LatticeOperator> {
    check_lattice_length(length)?;
    let dim = 1usize << length;
    let mut m = DMatrix::zeros(dim, dim);
    let mut e = vec![0.0; dim];
    let mut col = vec![0.0; dim];
    for c in 0..dim {
        e[c] = 1.0;
        apply_hamiltonian(length, &e, &mut col);
        for (r, v) in col.iter().enumerate() {
            m[(r, c)] = Complex64::new(*v, 0.0);
        }
        e[c] = 0.0;
    }
    Ok(LatticeOperator {
        matrix: m,
        basis: BasisTag::HeightLex,
    })
}

/// (Σᶻ, Πˣ) with Σᶻ = Σⱼ σⱼᶻσⱼ₊₁ᶻ and Πˣ = ∏ⱼ σⱼˣ.
pub fn symmetry_operators(length: usize) -> Result<(LatticeOperator, LatticeOperator)> {
    check_even(length, 2)?;
    let l = length;
    let dim = 1usize << l;
    let mut sz = DMatrix::zeros(dim, dim);
    let mut px = DMatrix::zeros(dim, dim);
    for s in 0..dim {
        let z = |i: usize| if (s >> (l - 1 - (i % l))) & 1 == 0 { 1.0 } else { -1.0 };
        let diag: f64 = (0..l).map(|i| z(i) * z(i + 1)).sum();
        sz[(s, s)] = Complex64::new(diag, 0.0);
        px[(s ^ (dim - 1), s)] = Complex64::new(1.0, 0.0);
    }
    Ok((
        LatticeOperator {
            matrix: sz,
            basis: BasisTag::HeightLex,
        },
        LatticeOperator {
            matrix: px,
            basis: BasisTag::HeightLex,
        },
    ))
}
