//! Carathéodory functions and spectral measures on the unit circle.
//!
//! The measure of a Verblunsky rule is `dμ = w(θ) dθ/2π + Σ m_j δ_{θ_j}`,
//! with `F(z) = ∫ (e^{iθ}+z)/(e^{iθ}-z) dμ`. `F` is computed from the Schur
//! function `f` (`F = (1+zf)/(1-zf)`), whose Schur parameters are the
//! Verblunsky coefficients: a finite continued fraction for explicit lists
//! and the fixed point of a Möbius map for period-two rules.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::cis;
use crate::cmv::VerblunskySeq;
use crate::error::{Error, Result};
use crate::opuc::{eval_family, BasisKind};

type C = Complex64;

const ONE: C = C::new(1.0, 0.0);
const ZERO: C = C::new(0.0, 0.0);

/// Richardson radial-limit settings, radii `r_k = 1 - 2^{-k}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialConfig {
    pub k_min: u32,
    pub k_max: u32,
    pub tol: f64,
}

impl Default for RadialConfig {
    fn default() -> Self {
        Self { k_min: 4, k_max: 40, tol: 1e-10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightMethod {
    /// Closed-form boundary value of `Re F`.
    Boundary,
    /// Richardson-extrapolated radial limit.
    Radial,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureConfig {
    /// Uniform grid size of the exported weight samples.
    pub grid: usize,
    /// Point masses below this are discarded.
    pub atom_threshold: f64,
    /// Resolution of the coarse atom scan.
    pub scan: usize,
    pub radial: RadialConfig,
    pub method: WeightMethod,
    /// Tanh-sinh step `2^{-level}`.
    pub quad_level: u32,
}

impl Default for MeasureConfig {
    fn default() -> Self {
        Self {
            grid: 2048,
            atom_threshold: 1e-6,
            scan: 2048,
            radial: RadialConfig::default(),
            method: WeightMethod::Boundary,
            quad_level: 6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub theta: f64,
    pub mass: f64,
}

impl Atom {
    pub fn z(&self) -> C {
        cis(self.theta)
    }
}

/// Quadrature node carrying `quadrature weight × w(θ) / 2π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadNode {
    pub theta: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMeasure {
    pub seq: VerblunskySeq,
    /// `(θ_j, w(θ_j))` on `θ_j = -π + 2πj/G`.
    pub weight: Vec<(f64, f64)>,
    pub atoms: Vec<Atom>,
    /// Arcs `[lo, hi]` carrying the absolutely continuous part.
    pub bands: Vec<(f64, f64)>,
    pub nodes: Vec<QuadNode>,
    /// Absolutely continuous mass plus the atoms.
    pub total: f64,
    /// Radial limits that missed the tolerance (radial method only).
    pub unconverged: usize,
}

impl SpectralMeasure {
    pub fn ac_mass(&self) -> f64 {
        self.nodes.iter().fold(0.0, |s, n| s + n.mass)
    }

    pub fn atom_mass(&self) -> f64 {
        self.atoms.iter().fold(0.0, |s, a| s + a.mass)
    }

    pub fn grid_size(&self) -> usize {
        self.weight.len()
    }
}

fn mobius(a: C, z: C) -> [C; 4] {
    // [[1, a], [ā, 1]] · diag(z, 1)
    [z, a, a.conj() * z, ONE]
}

fn mat_mul(x: [C; 4], y: [C; 4]) -> [C; 4] {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

fn period_matrix(a0: C, a1: C, z: C) -> [C; 4] {
    mat_mul(mobius(a0, z), mobius(a1, z))
}

/// Both fixed points of `w ↦ (A w + B)/(C w + D)`, smaller modulus first.
fn fixed_points(m: [C; 4]) -> (C, C) {
    let [a, b, c, d] = m;
    let p = d - a;
    let q = -b;
    let s = (p * p - 4.0 * c * q).sqrt();
    let s = if (p.conj() * s).re >= 0.0 { s } else { -s };
    let big = -(p + s) / 2.0;
    if big == ZERO {
        return (ZERO, ZERO);
    }
    let r1 = q / big;
    let r2 = big / c;
    let r2 = if r2.re.is_finite() && r2.im.is_finite() { r2 } else { C::new(f64::INFINITY, 0.0) };
    if r1.norm() <= r2.norm() {
        (r1, r2)
    } else {
        (r2, r1)
    }
}

/// Schur function at `|z| <= 1`.
pub fn schur_function(seq: &VerblunskySeq, z: C) -> C {
    match seq.period2() {
        Some((a0, a1)) => fixed_points(period_matrix(a0, a1, z)).0,
        None => {
            let n = seq.explicit_len().unwrap_or(0);
            let mut f = ZERO;
            for j in (0..n).rev() {
                let a = seq.alpha(j);
                let w = z * f;
                f = (a + w) / (ONE + a.conj() * w);
            }
            f
        }
    }
}

fn f_from_schur(z: C, f: C) -> C {
    let zf = z * f;
    (ONE + zf) / (ONE - zf)
}

/// `F(z)` for `|z| < 1`.
pub fn caratheodory(seq: &VerblunskySeq, z: C) -> Result<C> {
    if z.norm() >= 1.0 {
        return Err(Error::InsideDiskViolation { modulus: z.norm() });
    }
    seq.validate()?;
    Ok(f_from_schur(z, schur_function(seq, z)))
}

/// `4 - tr(M)²/det(M)` for the period matrix at `e^{iθ}`; positive exactly
/// on the bands. Explicit rules have no gaps and return 1.
pub fn band_function(seq: &VerblunskySeq, theta: f64) -> f64 {
    match seq.period2() {
        Some((a0, a1)) => {
            let m = period_matrix(a0, a1, cis(theta));
            let tr = m[0] + m[3];
            let det = m[0] * m[3] - m[1] * m[2];
            (4.0 - tr * tr / det).re
        }
        None => 1.0,
    }
}

/// Closed-form `Re F(e^{iθ})` on the absolutely continuous part.
pub fn boundary_weight(seq: &VerblunskySeq, theta: f64) -> f64 {
    if band_function(seq, theta) <= 0.0 {
        return 0.0;
    }
    let z = cis(theta);
    let f = schur_function(seq, z);
    if f.norm() >= 1.0 {
        return 0.0;
    }
    let zf = z * f;
    ((1.0 - zf.norm_sqr()) / (ONE - zf).norm_sqr()).max(0.0)
}

/// Radial limit of `Re F(r e^{iθ})` by two-point Richardson extrapolation in
/// `1 - r`. Values within `1e-8` of zero are returned as zero; a point mass
/// at `θ` is reported as divergence.
pub fn ac_weight(seq: &VerblunskySeq, theta: f64, cfg: &RadialConfig) -> Result<f64> {
    seq.validate()?;
    match radial_limit(seq, theta, cfg) {
        RadialOutcome::Converged(v) => Ok(if v.abs() < 1e-8 { 0.0 } else { v }),
        RadialOutcome::Divergent(m) => {
            Err(Error::NoConvergence(format!("point mass {m:.3e} at θ = {theta}")))
        }
        RadialOutcome::Stalled(v) => {
            Err(Error::NoConvergence(format!("radial limit at θ = {theta} stalled near {v}")))
        }
    }
}

enum RadialOutcome {
    Converged(f64),
    Stalled(f64),
    Divergent(f64),
}

fn re_f_at(seq: &VerblunskySeq, theta: f64, k: u32) -> f64 {
    let r = 1.0 - (-(k as f64)).exp2();
    let z = cis(theta) * r;
    f_from_schur(z, schur_function(seq, z)).re
}

fn radial_limit(seq: &VerblunskySeq, theta: f64, cfg: &RadialConfig) -> RadialOutcome {
    let mut prev_v = re_f_at(seq, theta, cfg.k_min);
    let mut prev_r: Option<f64> = None;
    let mut last = prev_v;
    for k in cfg.k_min + 1..=cfg.k_max {
        let v = re_f_at(seq, theta, k);
        let r = 2.0 * v - prev_v;
        let eps = (-(k as f64)).exp2();
        // A point mass m makes (1 - r) Re F tend to 2m.
        if k >= 12 && v * eps > 2e-6 && v * eps > 0.9 * prev_v * 2.0 * eps {
            return RadialOutcome::Divergent(v * eps / 2.0);
        }
        if let Some(pr) = prev_r {
            if (r - pr).abs() <= cfg.tol * r.abs().max(1.0) {
                return RadialOutcome::Converged(r);
            }
        }
        prev_r = Some(r);
        prev_v = v;
        last = r;
    }
    RadialOutcome::Stalled(last)
}

fn weight_at(seq: &VerblunskySeq, theta: f64, cfg: &MeasureConfig, unconverged: &mut usize) -> f64 {
    match cfg.method {
        WeightMethod::Boundary => boundary_weight(seq, theta),
        WeightMethod::Radial => match radial_limit(seq, theta, &cfg.radial) {
            RadialOutcome::Converged(v) => v.max(0.0),
            RadialOutcome::Stalled(v) => {
                *unconverged += 1;
                v.max(0.0)
            }
            RadialOutcome::Divergent(_) => {
                *unconverged += 1;
                0.0
            }
        },
    }
}

fn wrap(theta: f64) -> f64 {
    let t = (theta + PI).rem_euclid(2.0 * PI) - PI;
    if t >= PI {
        t - 2.0 * PI
    } else {
        t
    }
}

/// Arcs where the band function is positive, as `[lo, hi]` with
/// `lo < hi <= lo + 2π`.
pub fn bands(seq: &VerblunskySeq) -> Vec<(f64, f64)> {
    if seq.period2().is_none() {
        return vec![(-PI, PI)];
    }
    const SCAN: usize = 4096;
    let h = |t: f64| band_function(seq, t);
    let grid: Vec<f64> = (0..=SCAN).map(|j| -PI + 2.0 * PI * j as f64 / SCAN as f64).collect();
    let vals: Vec<f64> = grid.iter().map(|&t| h(t)).collect();
    let mut edges = Vec::new();
    for j in 0..SCAN {
        let (a, b) = (vals[j], vals[j + 1]);
        if (a > 0.0) != (b > 0.0) {
            let (mut lo, mut hi) = (grid[j], grid[j + 1]);
            let lo_pos = a > 0.0;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if (h(mid) > 0.0) == lo_pos {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            edges.push(0.5 * (lo + hi));
        }
    }
    if edges.is_empty() {
        return if vals.iter().any(|&v| v > 0.0) { vec![(-PI, PI)] } else { Vec::new() };
    }
    let m = edges.len();
    let mut out = Vec::new();
    for i in 0..m {
        let lo = edges[i];
        let hi = if i + 1 < m { edges[i + 1] } else { edges[0] + 2.0 * PI };
        if h(wrap(0.5 * (lo + hi))) > 0.0 {
            out.push((lo, hi));
        }
    }
    out
}

const CLOSED_GAP: f64 = 1e-9;

/// Complement of [`bands`], as `[lo, hi]` with `lo < hi`. A gap of zero
/// width shows up as a sliver where the band function rounds below zero;
/// those are skipped.
fn gaps(seq: &VerblunskySeq, arcs: &[(f64, f64)]) -> Vec<(f64, f64)> {
    if arcs.is_empty() {
        return vec![(-PI, PI)];
    }
    (0..arcs.len())
        .filter_map(|i| {
            let lo = arcs[i].1;
            let hi = if i + 1 < arcs.len() { arcs[i + 1].0 } else { arcs[0].0 + 2.0 * PI };
            let closed = hi - lo < 1e-6 && band_function(seq, wrap(0.5 * (lo + hi))) > -CLOSED_GAP;
            (hi > lo && !closed).then_some((lo, hi))
        })
        .collect()
}

/// Tanh-sinh nodes on `[lo, hi]` as `(θ, weight)`; nodes closer than
/// `1e-15` to an endpoint are dropped.
fn tanh_sinh(lo: f64, hi: f64, level: u32) -> Vec<(f64, f64)> {
    let half = 0.5 * (hi - lo);
    let step = (-(level as f64)).exp2();
    let mut out = Vec::new();
    let kmax = (3.6 / step) as i64;
    for k in -kmax..=kmax {
        let t = k as f64 * step;
        let u = 0.5 * PI * t.sinh();
        let ch = u.cosh();
        let w = half * step * 0.5 * PI * t.cosh() / (ch * ch);
        // Distance to the nearer endpoint, 1 - tanh|u| = e^{-|u|}/cosh u.
        let d = half * (-u.abs()).exp() / ch;
        if d < 1e-15 || !w.is_finite() || w == 0.0 {
            continue;
        }
        let theta = if k >= 0 { hi - d } else { lo + d };
        out.push((theta, w));
    }
    out
}

fn weighted_nodes(seq: &VerblunskySeq, raw: &[(f64, f64)], cfg: &MeasureConfig) -> (Vec<QuadNode>, usize) {
    let vals: Vec<(f64, usize)> = raw
        .par_iter()
        .map(|&(t, _)| {
            let mut u = 0;
            (weight_at(seq, wrap(t), cfg, &mut u), u)
        })
        .collect();
    let mut nodes = Vec::with_capacity(raw.len());
    let mut unconverged = 0;
    for (&(t, q), &(w, u)) in raw.iter().zip(&vals) {
        unconverged += u;
        let mass = q * w / (2.0 * PI);
        if mass.is_finite() {
            nodes.push(QuadNode { theta: wrap(t), mass });
        }
    }
    (nodes, unconverged)
}

fn node_sum(nodes: &[QuadNode]) -> f64 {
    nodes.iter().map(|n| n.mass).sum()
}

const QUAD_TOL: f64 = 1e-11;
const MAX_TS_LEVEL: u32 = 12;
const MAX_TRAPEZOID: usize = 1 << 20;

/// Quadrature nodes for the absolutely continuous part: periodic trapezoid
/// when the whole circle is one band, tanh-sinh on each arc otherwise, both
/// refined until two successive levels agree.
fn ac_nodes(seq: &VerblunskySeq, arcs: &[(f64, f64)], cfg: &MeasureConfig, unconverged: &mut usize) -> Vec<QuadNode> {
    let full = arcs.len() == 1 && (arcs[0].1 - arcs[0].0 - 2.0 * PI).abs() < 1e-12;
    let mut out = Vec::new();
    if full {
        let mut n = 512;
        let mut prev: Option<f64> = None;
        loop {
            let raw: Vec<(f64, f64)> =
                (0..n).map(|j| (-PI + 2.0 * PI * j as f64 / n as f64, 2.0 * PI / n as f64)).collect();
            let (nodes, u) = weighted_nodes(seq, &raw, cfg);
            let sum = node_sum(&nodes);
            let done = prev.is_some_and(|p| (sum - p).abs() <= QUAD_TOL * sum.abs().max(1.0));
            if done || n >= MAX_TRAPEZOID {
                *unconverged += u;
                out = nodes;
                break;
            }
            prev = Some(sum);
            n *= 2;
        }
        return out;
    }
    for &(lo, hi) in arcs {
        let mut level = cfg.quad_level;
        let mut prev: Option<f64> = None;
        loop {
            let raw = tanh_sinh(lo, hi, level);
            let (nodes, u) = weighted_nodes(seq, &raw, cfg);
            let sum = node_sum(&nodes);
            let done = prev.is_some_and(|p| (sum - p).abs() <= QUAD_TOL * sum.abs().max(1.0));
            if done || level >= MAX_TS_LEVEL {
                *unconverged += u;
                out.extend(nodes);
                break;
            }
            prev = Some(sum);
            level += 1;
        }
    }
    out
}

fn g_scan(seq: &VerblunskySeq, theta: f64, k: u32) -> f64 {
    let eps = (-(k as f64)).exp2();
    let z = cis(theta) * (1.0 - eps);
    eps * f_from_schur(z, schur_function(seq, z)).norm()
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
        if (b - a).abs() < 1e-15 {
            break;
        }
    }
    0.5 * (a + b)
}

/// `(1 - r)/2 · Re F(r e^{iθ})` extrapolated from `k` and `k + 1`.
fn mass_estimate(seq: &VerblunskySeq, theta: f64, k: u32) -> f64 {
    let m = |k: u32| {
        let eps = (-(k as f64)).exp2();
        0.5 * eps * re_f_at(seq, theta, k)
    };
    2.0 * m(k + 1) - m(k)
}

/// Boundary value of `z f(z)` on a gap, where the period map is hyperbolic
/// and `f` is its attracting fixed point.
fn gap_value(a0: C, a1: C, theta: f64) -> C {
    let z = cis(theta);
    let m = period_matrix(a0, a1, z);
    let (r1, r2) = fixed_points(m);
    let det = m[0] * m[3] - m[1] * m[2];
    let contraction = |w: C| (det / (m[2] * w + m[3]).powi(2)).norm();
    z * if contraction(r1) <= contraction(r2) { r1 } else { r2 }
}

/// `d/dθ arg(z f)` by a Richardson-extrapolated central difference.
fn gap_phase_slope(a0: C, a1: C, theta: f64, h: f64) -> f64 {
    let d = |h: f64| (gap_value(a0, a1, theta + h) / gap_value(a0, a1, theta - h)).arg() / (2.0 * h);
    (4.0 * d(0.5 * h) - d(h)) / 3.0
}

/// Point masses of a closed rule.
///
/// On a gap `z f(z)` is unimodular with increasing phase `φ`; atoms sit
/// where `z f = 1` and carry mass `1/φ'`. Each gap is sampled at `scan`
/// uniform points plus points accumulating geometrically at both edges,
/// and sign changes of `arg(z f)` are refined by bisection.
pub fn point_masses(seq: &VerblunskySeq, scan: usize, threshold: f64) -> Result<Vec<Atom>> {
    seq.validate()?;
    let Some((a0, a1)) = seq.period2() else {
        // Finite lists give Bernstein-Szegő measures.
        return Ok(Vec::new());
    };
    let phase = |t: f64| gap_value(a0, a1, t).arg();
    let mut found = Vec::new();
    for (lo, hi) in gaps(seq, &bands(seq)) {
        let w = hi - lo;
        let mut ts: Vec<f64> = (1..scan.max(2)).map(|j| lo + w * j as f64 / scan.max(2) as f64).collect();
        for k in 2..50 {
            let d = w * (-(k as f64)).exp2();
            ts.extend([lo + d, hi - d]);
        }
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        let ph: Vec<f64> = ts.iter().map(|&t| phase(t)).collect();
        for i in 0..ts.len() - 1 {
            let (p, q) = (ph[i], ph[i + 1]);
            if (p < 0.0) == (q < 0.0) || (q - p).abs() >= PI {
                continue;
            }
            let (mut a, mut b) = (ts[i], ts[i + 1]);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                if (phase(mid) < 0.0) == (p < 0.0) {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            let theta = 0.5 * (a + b);
            let edge = (theta - lo).min(hi - theta);
            let mass = 1.0 / gap_phase_slope(a0, a1, theta, (0.01 * edge).min(1e-5));
            if mass > threshold && mass <= 1.0 + 1e-9 {
                found.push(Atom { theta: wrap(theta), mass });
            }
        }
    }
    found.sort_by(|a, b| a.theta.total_cmp(&b.theta));
    Ok(found)
}

/// Point masses found from the growth of `(1 - r)|F(r e^{iθ})|`.
///
/// Candidates are local maxima on a coarse scan, refined by golden-section
/// search at increasing radii. A candidate is kept when its extrapolated
/// mass exceeds `threshold` and is stable between consecutive radii, which
/// rejects the square-root resonances at band edges.
pub fn radial_point_masses(seq: &VerblunskySeq, scan: usize, threshold: f64) -> Result<Vec<Atom>> {
    seq.validate()?;
    if seq.period2().is_none() {
        // Finite lists give Bernstein-Szegő measures.
        return Ok(Vec::new());
    }
    const K0: u32 = 8;
    const K1: u32 = 16;
    let thetas: Vec<f64> = (0..scan).map(|j| -PI + 2.0 * PI * j as f64 / scan as f64).collect();
    let g: Vec<f64> = thetas.par_iter().map(|&t| g_scan(seq, t, K0)).collect();
    let spacing = 2.0 * PI / scan as f64;
    let mut found: Vec<Atom> = Vec::new();
    for j in 0..scan {
        let prev = g[(j + scan - 1) % scan];
        let next = g[(j + 1) % scan];
        if !(g[j] > prev && g[j] >= next) {
            continue;
        }
        let mut theta = golden_max(|t| g_scan(seq, t, K0), thetas[j] - spacing, thetas[j] + spacing);
        for k in K0 + 1..=K1 {
            let w = 4.0 * (-((k - 1) as f64)).exp2();
            theta = golden_max(|t| g_scan(seq, t, k), theta - w, theta + w);
        }
        let m1 = mass_estimate(seq, theta, K1 - 2);
        let m2 = mass_estimate(seq, theta, K1 - 1);
        if m2 > threshold && (m2 - m1).abs() < 0.01 * m2.abs() {
            let theta = wrap(theta);
            if !found.iter().any(|a| (wrap(a.theta - theta)).abs() < 1e-6) {
                found.push(Atom { theta, mass: m2 });
            }
        }
    }
    found.sort_by(|a, b| a.theta.total_cmp(&b.theta));
    Ok(found)
}

/// Builds the spectral measure of a rule.
pub fn measure(seq: &VerblunskySeq, cfg: &MeasureConfig) -> Result<SpectralMeasure> {
    seq.validate()?;
    if cfg.grid < 8 {
        return Err(Error::InvalidInput(format!("grid size {} is too small", cfg.grid)));
    }
    let atoms = point_masses(seq, cfg.scan, cfg.atom_threshold)?;
    let arcs = bands(seq);
    let mut unconverged = 0;
    let nodes = ac_nodes(seq, &arcs, cfg, &mut unconverged);
    let samples: Vec<(f64, usize)> = (0..cfg.grid)
        .into_par_iter()
        .map(|j| {
            let t = -PI + 2.0 * PI * j as f64 / cfg.grid as f64;
            let mut u = 0;
            (weight_at(seq, t, cfg, &mut u), u)
        })
        .collect();
    let weight = samples
        .iter()
        .enumerate()
        .map(|(j, &(w, u))| {
            unconverged += u;
            (-PI + 2.0 * PI * j as f64 / cfg.grid as f64, w)
        })
        .collect();
    let ac: f64 = nodes.iter().map(|n| n.mass).sum();
    let total = ac + atoms.iter().map(|a| a.mass).sum::<f64>();
    Ok(SpectralMeasure { seq: seq.clone(), weight, atoms, bands: arcs, nodes, total, unconverged })
}

/// `∫ z^t x_l(z) conj(x_m(z)) dμ` with the first-kind basis of the measure's
/// rule; by construction this equals `(C^t)_{lm}`.
pub fn measure_moment(mu: &SpectralMeasure, t: i32, l: usize, m: usize) -> Result<C> {
    if mu.grid_size() < 512 {
        return Err(Error::InvalidInput(format!("grid size {} is below 512", mu.grid_size())));
    }
    let n = l.max(m) + 1;
    let term = |theta: f64| -> Result<C> {
        let z = cis(theta);
        let x = eval_family(&mu.seq, BasisKind::FirstKind, z, n)?;
        Ok(z.powi(t) * x[l] * x[m].conj())
    };
    let mut acc = ZERO;
    for node in &mu.nodes {
        acc += term(node.theta)? * node.mass;
    }
    for atom in &mu.atoms {
        acc += term(atom.theta)? * atom.mass;
    }
    Ok(acc)
}

/// Moment `∫ z^t dμ` of the measure.
pub fn measure_power_moment(mu: &SpectralMeasure, t: i32) -> C {
    let mut acc = ZERO;
    for node in &mu.nodes {
        acc += cis(t as f64 * node.theta) * node.mass;
    }
    for atom in &mu.atoms {
        acc += cis(t as f64 * atom.theta) * atom.mass;
    }
    acc
}
