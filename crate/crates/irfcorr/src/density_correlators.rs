//! Factorized density matrices of the XXX chain in terms of ω, the IRF
//! direct-sum assembly, and the homogeneous-limit correlator formulas.
//!
//! Permutation words are multiplied as matrices in the order they are read,
//! so `P12·P23` is the 3-cycle that moves site 1's state to site 3... except
//! for the two three-site cycles, whose coefficients ρ₄, ρ₅ attach to
//! P₁₂P₂₃ and P₂₃P₁₂ respectively (see [`d3_xxx`]).

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::exact_diag::DensityMatrix;
use crate::face_model::BasisTag;
use crate::omega::{OmegaJet, OmegaProvider};
use crate::{ChainLength, Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const COINCIDENCE_TOL: f64 = 1e-12;

/// Named nearest- and next-nearest-neighbour correlators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Correlator {
    X1,
    X1X2,
    X1X2X3,
    X1X3,
    Y1Y3,
    Z1Z3,
    YXY,
    ZXZ,
}

impl Correlator {
    /// Columns of the comparison table, in output order.
    pub const TABLE: [Correlator; 5] = [Self::X1, Self::X1X2, Self::X1X2X3, Self::X1X3, Self::Y1Y3];
    pub const ALL: [Correlator; 8] = [
        Self::X1,
        Self::X1X2,
        Self::X1X2X3,
        Self::X1X3,
        Self::Y1Y3,
        Self::Z1Z3,
        Self::YXY,
        Self::ZXZ,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::X1 => "x1",
            Self::X1X2 => "x1x2",
            Self::X1X2X3 => "x1x2x3",
            Self::X1X3 => "x1x3",
            Self::Y1Y3 => "y1y3",
            Self::Z1Z3 => "z1z3",
            Self::YXY => "y1x2y3",
            Self::ZXZ => "z1x2z3",
        }
    }
}

impl fmt::Display for Correlator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Correlator values for one chain length.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelatorTable {
    pub length: ChainLength,
    entries: BTreeMap<Correlator, f64>,
}

impl CorrelatorTable {
    pub fn new(length: ChainLength) -> Self {
        Self {
            length,
            entries: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, c: Correlator, value: f64) {
        self.entries.insert(c, value);
    }

    pub fn get(&self, c: Correlator) -> Option<f64> {
        self.entries.get(&c).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Correlator, f64)> + '_ {
        self.entries.iter().map(|(c, v)| (*c, *v))
    }
}

/// Matrix of the permutation of tensor factors `a` and `b` (0-based) on n qubits.
pub fn transposition(n: usize, a: usize, b: usize) -> DMatrix<Complex64> {
    let dim = 1usize << n;
    let mut m = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        let (sa, sb) = (n - 1 - a, n - 1 - b);
        let ba = (i >> sa) & 1;
        let bb = (i >> sb) & 1;
        let j = (i & !(1 << sa) & !(1 << sb)) | (bb << sa) | (ba << sb);
        m[(j, i)] = Complex64::new(1.0, 0.0);
    }
    m
}

/// Product of transpositions given as 1-based site pairs, multiplied left to right.
pub fn permutation_word(n: usize, word: &[(usize, usize)]) -> DMatrix<Complex64> {
    word.iter().fold(DMatrix::identity(1 << n, 1 << n), |acc, &(a, b)| {
        acc * transposition(n, a - 1, b - 1)
    })
}

/// D₂ = (1/4 − ω/6)·I₄ + (ω/3)·P₁₂.
pub fn d2_xxx(omega12: Complex64) -> DMatrix<Complex64> {
    DMatrix::<Complex64>::identity(4, 4) * (0.25 - omega12 / 6.0) + transposition(2, 0, 1) * (omega12 / 3.0)
}

fn check_distinct(lambdas: &[Complex64]) -> Result<()> {
    for i in 0..lambdas.len() {
        for j in i + 1..lambdas.len() {
            if (lambdas[i] - lambdas[j]).norm() < COINCIDENCE_TOL {
                return Err(Error::CoincidentPoints(format!(
                    "λ{} = λ{} = {}",
                    i + 1,
                    j + 1,
                    lambdas[i]
                )));
            }
        }
    }
    Ok(())
}

fn all_equal(lambdas: &[Complex64]) -> bool {
    lambdas.iter().all(|l| (l - lambdas[0]).norm() < COINCIDENCE_TOL)
}

/// Which form of the first bracket of ρ₅ to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rho5Bracket {
    /// (2+λ₁₂)/(λ₁₃λ₂₃), the form consistent with Ω = 3(ρ₄+ρ₅) and with the lattice.
    Consistent,
    /// 2/(λ₁₂λ₂₃) − 2/(λ₁₂λ₂₃) − 1/λ₁₃ + 1/λ₂₃, as commonly printed.
    Printed,
}

/// The five coefficients ρ₁…ρ₅ of D₃ for pairwise distinct λ's.
pub fn rho3_coefficients<P: OmegaProvider + ?Sized>(
    omega: &mut P,
    l: [Complex64; 3],
    bracket: Rho5Bracket,
) -> Result<[Complex64; 5]> {
    check_distinct(&l)?;
    let [l1, l2, l3] = l;
    let (l12, l13, l23) = (l1 - l2, l1 - l3, l2 - l3);
    let w12 = omega.omega(l1, l2)?;
    let w13 = omega.omega(l1, l3)?;
    let w23 = omega.omega(l2, l3)?;
    let a = 1.0 - 1.0 / (l13 * l23);
    let b = 1.0 - 1.0 / (l12 * l23);
    let c = 1.0 - 1.0 / (l12 * l13);
    let r1 = 0.125 - a * w12 / 12.0 + b * w13 / 12.0 - c * w23 / 12.0;
    let r2 = a * w12 / 6.0 - b * w13 / 6.0 - w23 / (6.0 * l12 * l13);
    let r3 = -w12 / (6.0 * l13 * l23) - b * w13 / 6.0 + c * w23 / 6.0;
    let r4 = ((2.0 - l12) / (l13 * l23)) * w12 / 12.0
        + (2.0 - 2.0 / (l12 * l23) - 1.0 / l12 + 1.0 / l23) * w13 / 12.0
        + (2.0 / (l12 * l13) + 1.0 / l12 - 1.0 / l13) * w23 / 12.0;
    let first = match bracket {
        Rho5Bracket::Consistent => (2.0 + l12) / (l13 * l23),
        // the first two terms cancel as written
        #[allow(clippy::eq_op)]
        Rho5Bracket::Printed => 2.0 / (l12 * l23) - 2.0 / (l12 * l23) - 1.0 / l13 + 1.0 / l23,
    };
    let r5 = first * w12 / 12.0
        + (2.0 - 2.0 / (l12 * l23) + 1.0 / l12 - 1.0 / l23) * w13 / 12.0
        + (2.0 / (l12 * l13) - 1.0 / l12 + 1.0 / l13) * w23 / 12.0;
    Ok([r1, r2, r3, r4, r5])
}

/// D₃ = ρ₁I₈ + ρ₂P₁₂ + ρ₃P₂₃ + ρ₄·(P₁₂P₂₃) + ρ₅·(P₂₃P₁₂) with matrix products.
pub fn d3_xxx<P: OmegaProvider + ?Sized>(
    omega: &mut P,
    l1: Complex64,
    l2: Complex64,
    l3: Complex64,
) -> Result<DMatrix<Complex64>> {
    d3_xxx_with(omega, [l1, l2, l3], Rho5Bracket::Consistent)
}

pub fn d3_xxx_with<P: OmegaProvider + ?Sized>(
    omega: &mut P,
    l: [Complex64; 3],
    bracket: Rho5Bracket,
) -> Result<DMatrix<Complex64>> {
    let r = rho3_coefficients(omega, l, bracket)?;
    let ops = [
        DMatrix::identity(8, 8),
        permutation_word(3, &[(1, 2)]),
        permutation_word(3, &[(2, 3)]),
        permutation_word(3, &[(1, 2), (2, 3)]),
        permutation_word(3, &[(2, 3), (1, 2)]),
    ];
    Ok(ops.iter().zip(r).fold(DMatrix::zeros(8, 8), |acc, (p, c)| acc + p * c))
}

/// Ω₃(λ₁,λ₂,λ₃) for pairwise distinct λ's, or its homogeneous limit
/// ω^(0,0) + ω^(1,1) − ω^(2,0)/2 when all three coincide at 0 (taken from `jet`).
pub fn omega3_fn<P: OmegaProvider + ?Sized>(
    omega: &mut P,
    jet: Option<&OmegaJet>,
    l1: Complex64,
    l2: Complex64,
    l3: Complex64,
) -> Result<Complex64> {
    let l = [l1, l2, l3];
    if all_equal(&l) {
        let jet = jet.ok_or_else(|| Error::Precondition("homogeneous Ω₃ needs an ω jet".into()))?;
        if l1.norm() > COINCIDENCE_TOL {
            return Err(Error::Unsupported("homogeneous limit only at λ = 0".into()));
        }
        return Ok(Complex64::new(omega3_homogeneous(jet), 0.0));
    }
    check_distinct(&l)?;
    let (l12, l13, l23) = (l1 - l2, l1 - l3, l2 - l3);
    Ok(omega.omega(l1, l2)? / (l13 * l23)
        + omega.omega(l1, l3)? * (1.0 - 1.0 / (l12 * l23))
        + omega.omega(l2, l3)? / (l12 * l13))
}

pub fn omega3_homogeneous(jet: &OmegaJet) -> f64 {
    jet.get(0, 0) + jet.get(1, 1) - jet.get(2, 0) / 2.0
}

/// 𝔻₁ = [[1/2, ω/3], [ω/3, 1/2]].
pub fn d1_chain(omega12: Complex64) -> DMatrix<Complex64> {
    let h = Complex64::new(0.5, 0.0);
    let o = omega12 / 3.0;
    DMatrix::from_row_slice(2, 2, &[h, o, o, h])
}

/// 𝔻₂ in terms of ω(λ₁,λ₂), ω(λ₂,λ₃) and Ω₃.
pub fn d2_chain(omega12: Complex64, omega23: Complex64, omega3: Complex64) -> DMatrix<Complex64> {
    let q = Complex64::new(0.25, 0.0);
    let (a, b, c) = (omega23 / 6.0, omega12 / 6.0, omega3 / 6.0);
    DMatrix::from_row_slice(4, 4, &[q, a, b, c, a, q, c, b, b, c, q, a, c, b, a, q])
}

/// ½·block ⊕ ½·block in direct-sum order.
pub fn assemble_irf(block: &DMatrix<Complex64>) -> Result<DensityMatrix> {
    let dim = block.nrows();
    if dim != block.ncols() || !dim.is_power_of_two() || dim < 2 {
        return Err(Error::DimensionMismatch {
            expected: dim.next_power_of_two().max(2),
            got: block.ncols(),
        });
    }
    let n = dim.trailing_zeros() as usize;
    let mut m = DMatrix::zeros(2 * dim, 2 * dim);
    m.view_mut((0, 0), (dim, dim))
        .copy_from(&(block * Complex64::new(0.5, 0.0)));
    m.view_mut((dim, dim), (dim, dim))
        .copy_from(&(block * Complex64::new(0.5, 0.0)));
    Ok(DensityMatrix {
        matrix: m,
        sites: n,
        irf: true,
        basis: BasisTag::DirectSum,
        spectral_points: Vec::new(),
    })
}

// ---- four-site coefficients -------------------------------------------------

/// Operators P̌₁…P̌₁₄ spanning the four-site matrix, as 1-based transposition words.
pub const RHO4_WORDS: [&[(usize, usize)]; 14] = [
    &[],
    &[(1, 2)],
    &[(2, 3)],
    &[(3, 4)],
    &[(1, 2), (2, 3)],
    &[(2, 3), (1, 2)],
    &[(2, 3), (3, 4)],
    &[(3, 4), (2, 3)],
    &[(1, 2), (3, 4)],
    &[(1, 3), (2, 4)],
    &[(1, 2), (3, 4), (2, 3)],
    &[(1, 2), (2, 3), (3, 4)],
    &[(3, 4), (2, 3), (1, 2)],
    &[(2, 3), (3, 4), (1, 2)],
];

/// Coefficients A₁…A₆ and B₁…B₃ of ρ₄,ₖ for k = 9..=14.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientSet {
    pub k: usize,
    pub a: [Complex64; 6],
    pub b: [Complex64; 3],
}

type Quad = [Complex64; 4];

struct Diffs {
    l12: Complex64,
    l13: Complex64,
    l14: Complex64,
    l23: Complex64,
    l24: Complex64,
    l34: Complex64,
}

fn diffs(l: &Quad) -> Diffs {
    Diffs {
        l12: l[0] - l[1],
        l13: l[0] - l[2],
        l14: l[0] - l[3],
        l23: l[1] - l[2],
        l24: l[1] - l[3],
        l34: l[2] - l[3],
    }
}

fn q1(k: usize, l: &Quad) -> Complex64 {
    let Diffs {
        l12,
        l13,
        l14,
        l23,
        l24,
        ..
    } = diffs(l);
    match k {
        9 => -(14.0 - l12 * l12 + 10.0 * l13 * l23) / 60.0,
        10 => {
            (-1.0 / 6.0 + (l12 * l12 - 4.0) / (20.0 * l12 * l13 * l23 * l14)
                - (l12 * l12 - 4.0) / (20.0 * l12 * l13 * l23 * l24))
                * l13
                * l14
                * l23
                * l24
        }
        11 => -(l12 - 2.0) * (2.0 + l12 + 5.0 * (l13 + 1.0) * l23) / 120.0,
        12 => -(l12 - 2.0) * (8.0 - l12 + 5.0 * (l13 - 1.0) * l23) / 120.0,
        13 => (l12 + 2.0) * (8.0 + l12 + 5.0 * (l13 + 1.0) * l23) / 120.0,
        14 => (l12 + 2.0) * (2.0 - l12 + 5.0 * (l13 - 1.0) * l23) / 120.0,
        _ => unreachable!(),
    }
}

fn q2(k: usize, l: &Quad) -> Complex64 {
    let Diffs {
        l12,
        l13,
        l14,
        l23,
        l24,
        l34,
    } = diffs(l);
    match k {
        9 => {
            -l14 * l24 / 90.0 * (2.0 - 3.0 * l12 * l12 - 10.0 * l13 * l23)
                + l24 / (90.0 * l12) * (22.0 + 2.0 * l23 * l23 - 6.0 * l13 * l12 - 3.0 * l13 * l13 * l12 * l12)
                + l14 / (90.0 * l12) * (22.0 + 2.0 * l13 * l13 + 6.0 * l23 * l12 - 3.0 * l23 * l23 * l12 * l12)
        }
        10 => (l12 * l12 - 4.0) * (l34 * l34 - 4.0) / 90.0,
        11 => (l12 - 2.0) * (l34 - 2.0) * (3.0 + l23 - l14 + 3.0 * l14 * l23 + 2.0 * l13 * l24) / 180.0,
        12 => -(l12 - 2.0) * (l34 + 2.0) * (7.0 + l12 - l34 + 3.0 * l14 * l23 + 2.0 * l13 * l24) / 180.0,
        13 => -(l12 + 2.0) * (l34 - 2.0) * (7.0 - l12 + l34 + 3.0 * l14 * l23 + 2.0 * l13 * l24) / 180.0,
        14 => (l12 + 2.0) * (l34 + 2.0) * (3.0 - l23 + l14 + 3.0 * l14 * l23 + 2.0 * l13 * l24) / 180.0,
        _ => unreachable!(),
    }
}

fn quartic_denominator(l: &Quad) -> Complex64 {
    let d = diffs(l);
    d.l13 * d.l14 * d.l23 * d.l24
}

fn a1(k: usize, l: &Quad) -> Complex64 {
    q1(k, l) / quartic_denominator(l)
}

fn b1(k: usize, l: &Quad) -> Complex64 {
    q2(k, l) / quartic_denominator(l)
}

fn permuted(l: &Quad, idx: [usize; 4]) -> Quad {
    [l[idx[0] - 1], l[idx[1] - 1], l[idx[2] - 1], l[idx[3] - 1]]
}

/// Evaluates A₁…A₆, B₁…B₃ of ρ₄,ₖ from Q₁, Q₂ and the argument-permutation rules.
pub fn coefficient_set(k: usize, l: Quad) -> Result<CoefficientSet> {
    if !(9..=14).contains(&k) {
        return Err(Error::Unsupported(format!(
            "four-site coefficients available for k = 9..14, got {k}"
        )));
    }
    check_distinct(&l)?;
    let Diffs {
        l12,
        l13,
        l14,
        l23,
        l24,
        l34,
    } = diffs(&l);
    let mut a = [
        a1(k, &l),
        a1(k, &permuted(&l, [1, 3, 2, 4])),
        a1(k, &permuted(&l, [1, 4, 3, 2])),
        a1(k, &permuted(&l, [3, 2, 1, 4])),
        a1(k, &permuted(&l, [4, 2, 3, 1])),
        a1(k, &permuted(&l, [4, 3, 2, 1])),
    ];
    let mut b = [
        b1(k, &l),
        b1(k, &permuted(&l, [1, 3, 2, 4])),
        b1(k, &permuted(&l, [1, 4, 3, 2])),
    ];
    let c23 = 2.0 - l14 * l23 + l12 * l34;
    let c24 = 2.0 - l13 * l24 - l12 * l34;
    match k {
        9 => {
            a[1] -= 1.0 / 6.0;
            a[2] -= (1.0 - 1.0 / (l13 * l34)) / 6.0;
            a[3] -= (1.0 - 1.0 / (l23 * l24) + 1.0 / (l23 * l34)) / 6.0;
            b[1] -= c23 / (18.0 * l12 * l34);
            b[2] += c24 / (18.0 * l12 * l34);
        }
        10 => {
            a[1] += 1.0 / 6.0;
            a[2] += 1.0 / 6.0;
            a[3] += 1.0 / 3.0;
            a[4] += 1.0 / 6.0;
            a[5] += 1.0 / 6.0;
            b[1] += c23 / (18.0 * l12 * l34);
            b[2] -= c24 / (18.0 * l12 * l34);
        }
        11 => {
            a[1] -= (2.0 - l12 * l13) / (12.0 * l12 * l14 * l34);
            a[2] -= (l12 - 1.0) * (2.0 + l13 - l34 - 2.0 * l13 * l34) / (24.0 * l12 * l13 * l34);
            a[3] -= (l12 - 1.0) * (l23 + 2.0) / (24.0 * l12 * l24 * l34);
            a[5] += (2.0 - l24 * l34) / (12.0 * l13 * l14 * l24);
            b[1] -= c23 / (18.0 * l12 * l14 * l34);
            b[2] += c24 / (36.0 * l12 * l34);
        }
        12 => {
            a[2] -= (l12 - 1.0) * (2.0 - l13 + l34 - 2.0 * l13 * l34) / (24.0 * l12 * l13 * l34);
            a[3] -= (l12 + 1.0) * (l23 + 2.0) / (24.0 * l12 * l24 * l34);
            b[2] -= (l13 - 2.0) * c24 / (36.0 * l12 * l13 * l34);
        }
        13 => {
            a[2] -= (l12 + 1.0) * (2.0 + l13 - l34 - 2.0 * l13 * l34) / (24.0 * l12 * l13 * l34);
            a[3] += (l12 - 1.0) * (l23 - 2.0) / (24.0 * l12 * l24 * l34);
            b[2] -= (l13 + 2.0) * c24 / (36.0 * l12 * l13 * l34);
        }
        14 => {
            a[1] += (2.0 - l12 * l13) / (12.0 * l12 * l14 * l34);
            a[2] -= (l12 + 1.0) * (2.0 - l13 + l34 - 2.0 * l13 * l34) / (24.0 * l12 * l13 * l34);
            a[3] += (l12 + 1.0) * (l23 - 2.0) / (24.0 * l12 * l24 * l34);
            a[5] -= (2.0 - l24 * l34) / (12.0 * l13 * l14 * l24);
            b[1] += c23 / (18.0 * l12 * l14 * l34);
            b[2] += c24 / (36.0 * l12 * l34);
        }
        _ => unreachable!(),
    }
    Ok(CoefficientSet { k, a, b })
}

/// ρ₄,ₖ = Σ Aᵢω(pairᵢ) + B₁ω₁₂ω₃₄ + B₂ω₁₃ω₂₄ + B₃ω₁₄ω₂₃ for k = 9..=14.
pub fn rho4_coefficient<P: OmegaProvider + ?Sized>(k: usize, omega: &mut P, l: Quad) -> Result<Complex64> {
    let set = coefficient_set(k, l)?;
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let mut w = [ZERO; 6];
    for (slot, &(i, j)) in w.iter_mut().zip(&pairs) {
        *slot = omega.omega(l[i], l[j])?;
    }
    let linear: Complex64 = set.a.iter().zip(&w).map(|(a, w)| a * w).sum();
    Ok(linear + set.b[0] * w[0] * w[5] + set.b[1] * w[1] * w[4] + set.b[2] * w[2] * w[3])
}

/// (Ω₁, Ω₂, Ω₃, Ω₄) of the four-site matrix. Pairwise distinct λ's use the
/// coefficients ρ₉…ρ₁₄; all-zero λ's use the homogeneous formulas with `jet`.
pub fn omega4_fns<P: OmegaProvider + ?Sized>(omega: &mut P, jet: Option<&OmegaJet>, l: Quad) -> Result<[Complex64; 4]> {
    if all_equal(&l) {
        let jet = jet.ok_or_else(|| Error::Precondition("homogeneous Ω needs an ω jet".into()))?;
        if l[0].norm() > COINCIDENCE_TOL {
            return Err(Error::Unsupported("homogeneous limit only at λ = 0".into()));
        }
        let t = correlators_from_jet(jet);
        let g = |c| Complex64::new(t.get(c).unwrap_or(f64::NAN), 0.0);
        return Ok([
            g(Correlator::X1X2X3),
            g(Correlator::X1X3),
            g(Correlator::Y1Y3),
            g(Correlator::Z1Z3),
        ]);
    }
    let mut r = [ZERO; 6];
    for (k, slot) in (9..=14).zip(r.iter_mut()) {
        *slot = rho4_coefficient(k, omega, l)?;
    }
    let o1 = 2.0 * (r[2] + r[3] + r[4] + r[5]);
    let o2 = 4.0 * (r[0] + r[1]) + o1;
    let o3 = 2.0 * (-r[2] + r[3] + r[4] - r[5]);
    let o4 = (-4.0 * omega.omega(l[0], l[1])? + 6.0 * omega.omega(l[1], l[2])?) / 3.0;
    Ok([o1, o2, o3, o4])
}

/// All eight correlators from the homogeneous jet.
pub fn correlators_from_jet(jet: &OmegaJet) -> CorrelatorTable {
    let w = |m, n| jet.get(m, n);
    let (w00, w10, w11, w20, w21, w22, w30, w31) =
        (w(0, 0), w(1, 0), w(1, 1), w(2, 0), w(2, 1), w(2, 2), w(3, 0), w(3, 1));
    let x1 = 2.0 / 3.0 * w00;
    let x1x2 = 2.0 / 3.0 * (w00 + w11 - w20 / 2.0);
    let xxx = w00 * (2.0 / 3.0 + 4.0 / 3.0 * w11 + 2.0 / 9.0 * w22 - 4.0 / 27.0 * w31)
        - w10 * (4.0 / 3.0 * w10 + 4.0 / 9.0 * w21 - 4.0 / 27.0 * w30)
        - w31 / 9.0
        + (4.0 * w11 - 2.0 * w20) * (1.0 / 3.0 + w20 / 9.0)
        + w22 / 6.0;
    let x1x3 = w00 * (4.0 / 5.0 * w00 + 8.0 / 15.0 * w11 + 7.0 / 45.0 * w22 - 14.0 / 135.0 * w31)
        - w10 * (8.0 / 15.0 * w10 + 14.0 / 45.0 * w21 - 14.0 / 135.0 * w30)
        + w11 * (2.0 / 5.0 + 14.0 / 45.0 * w20)
        - w20 * (4.0 / 15.0 + 7.0 / 45.0 * w20)
        + 2.0 / 15.0 * w22
        - 4.0 / 45.0 * w31;
    let y1y3 = w00 * (4.0 / 15.0 * w00 + 2.0 / 5.0 * w11 + 4.0 / 45.0 * w22 - 8.0 / 135.0 * w31)
        - w10 * (2.0 / 5.0 * w10 + 8.0 / 45.0 * w21 - 8.0 / 135.0 * w30)
        + w11 * (7.0 / 15.0 + 8.0 / 45.0 * w20)
        - w20 * (1.0 / 5.0 + 4.0 / 45.0 * w20)
        - w31 / 15.0
        + w22 / 10.0;
    let mut t = CorrelatorTable::new(jet.length);
    t.insert(Correlator::X1, x1);
    t.insert(Correlator::X1X2, x1x2);
    t.insert(Correlator::X1X2X3, xxx);
    t.insert(Correlator::X1X3, x1x3);
    t.insert(Correlator::Y1Y3, y1y3);
    t.insert(Correlator::Z1Z3, x1);
    t.insert(Correlator::YXY, -y1y3);
    t.insert(Correlator::ZXZ, -x1);
    t
}
