//! Closed-form limit masses and localization predicates.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sgn;

type C = Complex64;

const ZERO_TOL: f64 = 1e-12;

fn check(z: C) -> Result<()> {
    if z.norm() >= 1.0 || !z.norm().is_finite() {
        Err(Error::ModulusOutOfRange { value: z.norm() })
    } else {
        Ok(())
    }
}

fn rho(z: C) -> f64 {
    (1.0 - z.norm_sqr()).sqrt()
}

/// `sgn(Re a)/ρ · (sqrt(1 - Im(a)²) - |Re a|)`.
pub fn nu_i(a: C) -> Result<f64> {
    check(a)?;
    Ok(sgn(a.re) / rho(a) * ((1.0 - a.im * a.im).sqrt() - a.re.abs()))
}

/// `ρ / |1 + b|`.
pub fn nu_ii(b: C) -> Result<f64> {
    check(b)?;
    Ok(rho(b) / (C::new(1.0, 0.0) + b).norm())
}

/// `(1 + sgn(|b|² + Re b)) (|b|² + Re b) / |1 + b|²`.
pub fn mass_m(b: C) -> Result<f64> {
    check(b)?;
    let s = b.norm_sqr() + b.re;
    let m = (1.0 + sgn(s)) * s / (C::new(1.0, 0.0) + b).norm_sqr();
    Ok(if m == 0.0 { 0.0 } else { m })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitParamsI {
    pub a: C,
    pub rho: f64,
    pub nu: f64,
    pub theta: f64,
    /// `(α, β, μ, ζ)` on `R, L, U, D`.
    pub coin_state: [C; 4],
}

impl LimitParamsI {
    pub fn new(a: C, theta: f64, coin_state: [C; 4]) -> Result<Self> {
        Ok(Self { a, rho: rho(a), nu: nu_i(a)?, theta, coin_state })
    }

    /// `α e^{iθ} + ν (μ + β) + ζ ν e^{-iθ}`.
    pub fn state_factor(&self) -> C {
        let [alpha, beta, mu, zeta] = self.coin_state;
        let e = crate::cis(self.theta);
        alpha * e + (mu + beta) * self.nu + zeta * self.nu * e.conj()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitParamsII {
    pub b: C,
    pub rho: f64,
    pub nu: f64,
    pub mass: f64,
}

impl LimitParamsII {
    pub fn new(b: C) -> Result<Self> {
        Ok(Self { b, rho: rho(b), nu: nu_ii(b)?, mass: mass_m(b)? })
    }
}

/// `ν^{2k}` with `0^0 = 1`.
fn pow2(nu: f64, k: usize) -> f64 {
    if k == 0 {
        1.0
    } else {
        nu.powi(2 * k as i32)
    }
}

pub fn theorem1_mass(p: &LimitParamsI, x: usize, y: usize) -> Result<f64> {
    check(p.a)?;
    let pre = p.a.re * p.a.re / (1.0 - p.a.im * p.a.im);
    Ok(pre * p.state_factor().norm_sqr() * (1.0 + 2.0 * p.nu * p.nu) * (pow2(p.nu, x) + pow2(p.nu, y)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(t: usize) -> Self {
        if t % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

pub fn theorem3_mass(p: &LimitParamsII, x: usize, y: usize, t: Parity) -> Result<f64> {
    check(p.b)?;
    let t = match t {
        Parity::Even => 0,
        Parity::Odd => 1,
    };
    if (x + y + t) % 2 == 1 {
        return Ok(0.0);
    }
    let m2 = p.mass * p.mass;
    if x == 0 && y == 0 {
        Ok(m2)
    } else {
        Ok(m2 * (1.0 + 1.0 / (2.0 * p.nu * p.nu)) * (pow2(p.nu, x) + pow2(p.nu, y)))
    }
}

/// `Re a ≠ 0` and a nonvanishing coin-state factor.
pub fn localizes_i(coin_state: [C; 4], a: C, theta: f64) -> Result<bool> {
    let p = LimitParamsI::new(a, theta, coin_state)?;
    Ok(a.re.abs() > ZERO_TOL && p.state_factor().norm() > ZERO_TOL)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalizationII {
    /// `(Re b + 1/2)² + (Im b + 1/2)² > 1/2`.
    pub paper_region: bool,
    /// `M(b) > 1e-12`.
    pub mass_criterion: bool,
}

impl LocalizationII {
    pub fn agree(&self) -> bool {
        self.paper_region == self.mass_criterion
    }
}

pub fn localizes_ii(b: C) -> Result<LocalizationII> {
    let m = mass_m(b)?;
    let (x, y) = (b.re, b.im);
    Ok(LocalizationII {
        paper_region: (x + 0.5).powi(2) + (y + 0.5).powi(2) > 0.5,
        mass_criterion: m > ZERO_TOL,
    })
}

/// Distance of `b` from the boundary of the region `M(b) > 0`, the circle
/// `|b + 1/2| = 1/2`.
pub fn mass_margin_ii(b: C) -> f64 {
    ((b + 0.5).norm() - 0.5).abs()
}

/// Distance from the circle `|b + (1 + i)/2| = 1/√2`.
pub fn region_margin_ii(b: C) -> f64 {
    ((b + C::new(0.5, 0.5)).norm() - std::f64::consts::FRAC_1_SQRT_2).abs()
}
