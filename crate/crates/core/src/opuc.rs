//! CMV-ordered Laurent polynomials.
//!
//! The basis `x_0, x_1, ...` is the right eigen-family of the CMV matrix:
//! `Σ_j C_ij x_j(z) = z x_i(z)` with `x_0 = 1`, solved two rows at a time.
//! On the unit circle `x_{2k} = z^{-k} φ_{2k}` and `x_{2k-1} = z^{-k} φ*_{2k-1}`
//! for the orthonormal polynomials `φ_n`. The second kind uses `-α_j`.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::cmv::{CmvOperator, VerblunskySeq};
use crate::error::{Error, Result};

/// Dense Laurent polynomial `Σ_k coeffs[k] z^{min_exp + k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPoly {
    min_exp: i64,
    coeffs: Vec<Complex64>,
}

impl LaurentPoly {
    pub fn constant(c: Complex64) -> Self {
        Self { min_exp: 0, coeffs: vec![c] }
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn from_terms(terms: &[(i64, Complex64)]) -> Self {
        let lo = terms.iter().map(|t| t.0).min().unwrap_or(0);
        let hi = terms.iter().map(|t| t.0).max().unwrap_or(0);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
        for &(e, c) in terms {
            coeffs[(e - lo) as usize] += c;
        }
        Self { min_exp: lo, coeffs }
    }

    pub fn coeff(&self, exp: i64) -> Complex64 {
        let k = exp - self.min_exp;
        if k < 0 || k as usize >= self.coeffs.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[k as usize]
        }
    }

    /// Exponents with a nonzero coefficient, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != Complex64::new(0.0, 0.0))
            .map(move |(k, c)| (self.min_exp + k as i64, *c))
    }

    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    pub fn max_exp(&self) -> i64 {
        self.min_exp + self.coeffs.len() as i64 - 1
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if z == Complex64::new(0.0, 0.0) {
            return Err(Error::ZeroArgument);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        Ok(acc * z.powi(self.min_exp as i32))
    }

    /// `z^k p(z)`.
    pub fn shift(&self, k: i64) -> Self {
        Self { min_exp: self.min_exp + k, coeffs: self.coeffs.clone() }
    }

    /// `conj(p(1/conj z))`: conjugated coefficients with negated exponents.
    pub fn conj_reflect(&self) -> Self {
        let coeffs: Vec<Complex64> = self.coeffs.iter().rev().map(|c| c.conj()).collect();
        Self { min_exp: -self.max_exp(), coeffs }
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.len() > 1 && self.coeffs.last() == Some(&Complex64::new(0.0, 0.0)) {
            self.coeffs.pop();
        }
        while self.coeffs.len() > 1 && self.coeffs[0] == Complex64::new(0.0, 0.0) {
            self.coeffs.remove(0);
            self.min_exp += 1;
        }
        self
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let lo = self.min_exp.min(rhs.min_exp);
        let hi = self.max_exp().max(rhs.max_exp());
        let coeffs = (lo..=hi).map(|e| self.coeff(e) + rhs.coeff(e)).collect();
        LaurentPoly { min_exp: lo, coeffs }.trimmed()
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(rhs * Complex64::new(-1.0, 0.0))
    }
}

impl Mul<Complex64> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, c: Complex64) -> LaurentPoly {
        LaurentPoly { min_exp: self.min_exp, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }
}

/// Values the pairwise recurrence can run on: polynomial coefficients or
/// point evaluations.
trait Recurrent: Clone {
    fn lin(&self, a: Complex64, other: &Self, b: Complex64) -> Self;
    fn times_z(&self) -> Self;
    fn over_z(&self) -> Self;
}

impl Recurrent for LaurentPoly {
    fn lin(&self, a: Complex64, other: &Self, b: Complex64) -> Self {
        &(self * a) + &(other * b)
    }
    fn times_z(&self) -> Self {
        self.shift(1)
    }
    fn over_z(&self) -> Self {
        self.shift(-1)
    }
}

#[derive(Clone, Copy)]
struct Point {
    v: Complex64,
    z: Complex64,
}

impl Recurrent for Point {
    fn lin(&self, a: Complex64, other: &Self, b: Complex64) -> Self {
        Point { v: self.v * a + other.v * b, z: self.z }
    }
    fn times_z(&self) -> Self {
        Point { v: self.v * self.z, z: self.z }
    }
    fn over_z(&self) -> Self {
        Point { v: self.v / self.z, z: self.z }
    }
}

fn right_family<T: Recurrent>(seq: &VerblunskySeq, n: usize, one: T) -> Vec<T> {
    let c = |x: f64| Complex64::new(x, 0.0);
    let mut xs = vec![one];
    let mut k = 0usize;
    while xs.len() < n {
        let e = 2 * k as isize;
        let (am1, rm1) = (seq.alpha_ext(e - 1), seq.rho_ext(e - 1));
        let (a0, r0) = (seq.alpha_ext(e), seq.rho_ext(e));
        let (a1, r1) = (seq.alpha_ext(e + 1), seq.rho_ext(e + 1));
        let xe = &xs[2 * k];
        // Rows 2k and 2k+1 of C x = z x, moved to the unknown side; ρ_{-1} = 0
        // removes x_{-1} when k = 0.
        let xo = if k == 0 { xe } else { &xs[2 * k - 1] };
        let rhs0 = xe.times_z().lin(c(1.0), &xo.lin(rm1 * a0.conj(), xe, -am1 * a0.conj()), c(-1.0));
        let rhs1 = xo.lin(c(-rm1 * r0), xe, am1 * r0);
        let u = rhs1.lin(c(-1.0), &rhs0, -a0 / r0).over_z();
        let v = rhs0.lin(c(1.0 / (r0 * r1)), &u, -a1.conj() / r1);
        xs.push(u);
        if xs.len() < n {
            xs.push(v);
        }
        k += 1;
    }
    xs
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    FirstKind,
    SecondKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OpucBasis {
    kind: BasisKind,
    seq: VerblunskySeq,
    polys: Vec<LaurentPoly>,
}

impl OpucBasis {
    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn poly(&self, j: usize) -> &LaurentPoly {
        &self.polys[j]
    }

    pub fn polys(&self) -> &[LaurentPoly] {
        &self.polys
    }

    /// Left eigen-family `χ_j`, satisfying `χᵀ C = z χᵀ`.
    pub fn left_family(&self) -> Vec<LaurentPoly> {
        self.polys.iter().map(LaurentPoly::conj_reflect).collect()
    }

    /// Coefficients fed to the recurrence (negated for the second kind).
    fn effective_seq(&self) -> VerblunskySeq {
        effective(&self.seq, self.kind)
    }
}

fn effective(seq: &VerblunskySeq, kind: BasisKind) -> VerblunskySeq {
    match kind {
        BasisKind::FirstKind => seq.clone(),
        BasisKind::SecondKind => seq.negated(),
    }
}

pub fn opuc_basis(seq: &VerblunskySeq, n: usize, kind: BasisKind) -> Result<OpucBasis> {
    if n == 0 {
        return Err(Error::InvalidInput("basis size must be positive".into()));
    }
    seq.validate()?;
    let polys = right_family(&effective(seq, kind), n, LaurentPoly::one());
    Ok(OpucBasis { kind, seq: seq.clone(), polys })
}

pub fn eval_basis(basis: &OpucBasis, z: Complex64) -> Result<Vec<Complex64>> {
    basis.polys.iter().map(|p| p.eval(z)).collect()
}

/// Point values `x_0(z), ..., x_{n-1}(z)` straight from the recurrence.
pub fn eval_family(seq: &VerblunskySeq, kind: BasisKind, z: Complex64, n: usize) -> Result<Vec<Complex64>> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroArgument);
    }
    seq.validate()?;
    let one = Point { v: Complex64::new(1.0, 0.0), z };
    Ok(right_family(&effective(seq, kind), n, one).into_iter().map(|p| p.v).collect())
}

/// `max_i |(C x(z))_i - z x_i(z)|` over rows whose stencil lies inside both
/// the basis and the truncation.
pub fn eigen_residual(c: &CmvOperator, basis: &OpucBasis, z: Complex64) -> Result<f64> {
    let x = eval_family(&basis.effective_seq(), BasisKind::FirstKind, z, basis.len())?;
    let rows = basis.len().saturating_sub(2).min(c.dim());
    let mut worst: f64 = 0.0;
    for i in 0..rows {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in i.saturating_sub(2)..=(i + 2).min(x.len() - 1) {
            acc += c.entry(i, j) * x[j];
        }
        worst = worst.max((acc - z * x[i]).norm());
    }
    Ok(worst)
}

/// Monic Szegő recursion, returning `(Φ_n(z), Φ*_n(z))`.
pub fn szego(seq: &VerblunskySeq, z: Complex64, n: usize) -> (Complex64, Complex64) {
    let mut p = Complex64::new(1.0, 0.0);
    let mut ps = Complex64::new(1.0, 0.0);
    for j in 0..n {
        let a = seq.alpha(j);
        let next = z * p - a.conj() * ps;
        ps = ps - a * z * p;
        p = next;
    }
    (p, ps)
}

/// `Ψ*_n / Φ*_n` where `Ψ` has coefficients `-α_j`.
pub fn caratheodory_ratio(seq: &VerblunskySeq, z: Complex64, n: usize) -> Complex64 {
    let (_, phi_s) = szego(seq, z, n);
    let (_, psi_s) = szego(&seq.negated(), z, n);
    psi_s / phi_s
}
