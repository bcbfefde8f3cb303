//! Truncated CMV matrices.

use num_complex::Complex64;

use crate::cis;
use crate::error::{Error, Result};

/// Rule generating Verblunsky coefficients `α_0, α_1, ...`.
#[derive(Debug, Clone, PartialEq)]
pub enum VerblunskySeq {
    /// `α_{2k} = a`, `α_{2k+1} = 0`.
    NullOdd(Complex64),
    /// `α_{2k} = 0`, `α_{2k+1} = b`.
    NullEven(Complex64),
    Constant(Complex64),
    /// Listed coefficients followed by a zero tail.
    Explicit(Vec<Complex64>),
}

impl VerblunskySeq {
    pub fn zero() -> Self {
        VerblunskySeq::Explicit(Vec::new())
    }

    #[inline]
    pub fn alpha(&self, j: usize) -> Complex64 {
        let zero = Complex64::new(0.0, 0.0);
        match self {
            VerblunskySeq::NullOdd(a) => {
                if j % 2 == 0 {
                    *a
                } else {
                    zero
                }
            }
            VerblunskySeq::NullEven(b) => {
                if j % 2 == 1 {
                    *b
                } else {
                    zero
                }
            }
            VerblunskySeq::Constant(c) => *c,
            VerblunskySeq::Explicit(v) => v.get(j).copied().unwrap_or(zero),
        }
    }

    /// `α_j` with the boundary convention `α_{-1} = -1`.
    #[inline]
    pub(crate) fn alpha_ext(&self, j: isize) -> Complex64 {
        if j < 0 {
            Complex64::new(-1.0, 0.0)
        } else {
            self.alpha(j as usize)
        }
    }

    /// `ρ_j = sqrt(1 - |α_j|²)` with `ρ_{-1} = 0`.
    #[inline]
    pub(crate) fn rho_ext(&self, j: isize) -> f64 {
        if j < 0 {
            0.0
        } else {
            (1.0 - self.alpha(j as usize).norm_sqr()).sqrt()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let check = |index: usize, z: &Complex64| {
            if z.norm() >= 1.0 || !z.re.is_finite() || !z.im.is_finite() {
                Err(Error::BadModulus { index, modulus: z.norm() })
            } else {
                Ok(())
            }
        };
        match self {
            VerblunskySeq::NullOdd(a) | VerblunskySeq::Constant(a) => check(0, a),
            VerblunskySeq::NullEven(b) => check(1, b),
            VerblunskySeq::Explicit(v) => v.iter().enumerate().try_for_each(|(i, z)| check(i, z)),
        }
    }

    /// `α_j ↦ -α_j`, the coefficients of the second-kind family.
    pub fn negated(&self) -> Self {
        match self {
            VerblunskySeq::NullOdd(a) => VerblunskySeq::NullOdd(-a),
            VerblunskySeq::NullEven(b) => VerblunskySeq::NullEven(-b),
            VerblunskySeq::Constant(c) => VerblunskySeq::Constant(-c),
            VerblunskySeq::Explicit(v) => VerblunskySeq::Explicit(v.iter().map(|z| -z).collect()),
        }
    }

    /// `(α_0, α_1)` when the rule is periodic with period two.
    pub fn period2(&self) -> Option<(Complex64, Complex64)> {
        match self {
            VerblunskySeq::Explicit(_) => None,
            _ => Some((self.alpha(0), self.alpha(1))),
        }
    }

    /// Length of the listed prefix for explicit sequences.
    pub fn explicit_len(&self) -> Option<usize> {
        match self {
            VerblunskySeq::Explicit(v) => Some(v.len()),
            _ => None,
        }
    }

    pub fn prefix(&self, n: usize) -> Vec<Complex64> {
        (0..n).map(|j| self.alpha(j)).collect()
    }
}

/// Truncated five-diagonal CMV operator of even dimension `n >= 4`.
#[derive(Debug, Clone, PartialEq)]
pub struct CmvOperator {
    dim: usize,
    /// `band[i][k]` holds entry `(i, i + k - 2)`.
    band: Vec<[Complex64; 5]>,
    seq: VerblunskySeq,
}

pub fn build_cmv(seq: &VerblunskySeq, n: usize) -> Result<CmvOperator> {
    if n < 4 || n % 2 != 0 {
        return Err(Error::SizeTooSmall { size: n });
    }
    seq.validate()?;
    let zero = Complex64::new(0.0, 0.0);
    let mut band = vec![[zero; 5]; n];
    let mut put = |i: usize, j: isize, v: Complex64| {
        if j >= 0 && (j as usize) < n {
            band[i][(j - i as isize + 2) as usize] = v;
        }
    };
    for k in 0..n / 2 {
        let e = 2 * k as isize;
        let (am1, rm1) = (seq.alpha_ext(e - 1), seq.rho_ext(e - 1));
        let (a0, r0) = (seq.alpha_ext(e), seq.rho_ext(e));
        let (a1, r1) = (seq.alpha_ext(e + 1), seq.rho_ext(e + 1));
        let i = 2 * k;
        put(i, e - 1, a0.conj() * rm1);
        put(i, e, -am1 * a0.conj());
        put(i, e + 1, a1.conj() * r0);
        put(i, e + 2, Complex64::new(r0 * r1, 0.0));
        put(i + 1, e - 1, Complex64::new(rm1 * r0, 0.0));
        put(i + 1, e, -am1 * r0);
        put(i + 1, e + 1, -a0 * a1.conj());
        put(i + 1, e + 2, -a0 * r1);
    }
    Ok(CmvOperator { dim: n, band, seq: seq.clone() })
}

impl CmvOperator {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn seq(&self) -> &VerblunskySeq {
        &self.seq
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        let off = j as isize - i as isize;
        if i >= self.dim || j >= self.dim || off.abs() > 2 {
            Complex64::new(0.0, 0.0)
        } else {
            self.band[i][(off + 2) as usize]
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        (0..self.dim).map(|i| (0..self.dim).map(|j| self.entry(i, j)).collect()).collect()
    }

    fn apply_unchecked(&self, v: &[Complex64], out: &mut [Complex64]) {
        let n = self.dim;
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            let lo = i.saturating_sub(2);
            let hi = (i + 2).min(n - 1);
            for j in lo..=hi {
                acc += self.band[i][j + 2 - i] * v[j];
            }
            out[i] = acc;
        }
    }
}

pub fn cmv_apply(c: &CmvOperator, v: &[Complex64]) -> Result<Vec<Complex64>> {
    if v.len() != c.dim {
        return Err(Error::LengthMismatch { expected: c.dim, got: v.len() });
    }
    let mut out = vec![Complex64::new(0.0, 0.0); c.dim];
    c.apply_unchecked(v, &mut out);
    Ok(out)
}

/// `(C^t)_{lm}`, free of truncation effects under `2t + max(l, m) + 2 < n`.
pub fn cmv_power_entry(c: &CmvOperator, t: usize, l: usize, m: usize) -> Result<Complex64> {
    if 2 * t + l.max(m) + 2 >= c.dim {
        return Err(Error::TruncationTooSmall { dim: c.dim, t, l, m });
    }
    let mut v = vec![Complex64::new(0.0, 0.0); c.dim];
    v[m] = Complex64::new(1.0, 0.0);
    let mut w = v.clone();
    for _ in 0..t {
        c.apply_unchecked(&v, &mut w);
        std::mem::swap(&mut v, &mut w);
    }
    Ok(v[l])
}

/// Worst deviation from orthonormality among the interior columns
/// `2 <= j <= n - 3`, which the truncation leaves intact.
pub fn unitarity_residual(c: &CmvOperator) -> f64 {
    let n = c.dim;
    let mut worst: f64 = 0.0;
    for j in 2..=n - 3 {
        for k in j..=(j + 4).min(n - 3) {
            let mut dot = Complex64::new(0.0, 0.0);
            for i in 0..n {
                dot += c.entry(i, j).conj() * c.entry(i, k);
            }
            let target = if j == k { 1.0 } else { 0.0 };
            worst = worst.max((dot - target).norm());
        }
    }
    worst
}

/// `α_j ↦ α_j e^{i(j+1)w}`.
///
/// A closed rule is kept when the rotated coefficients still follow it;
/// `window` sets how many explicit coefficients are produced otherwise.
pub fn rotate_seq(seq: &VerblunskySeq, w: f64, window: usize) -> VerblunskySeq {
    let near_one = |z: Complex64| (z - 1.0).norm() < 1e-12;
    if near_one(cis(w)) {
        return seq.clone();
    }
    match seq {
        VerblunskySeq::NullOdd(a) if near_one(cis(2.0 * w)) => VerblunskySeq::NullOdd(a * cis(w)),
        VerblunskySeq::NullEven(b) if near_one(cis(2.0 * w)) => VerblunskySeq::NullEven(*b),
        _ => {
            let len = seq.explicit_len().unwrap_or(window);
            VerblunskySeq::Explicit(
                (0..len).map(|j| seq.alpha(j) * cis((j + 1) as f64 * w)).collect(),
            )
        }
    }
}
