//! Four-direction quantum coins.
//!
//! A coin is stored in display layout: row `r` lists the amplitudes that an
//! incoming direction `r` sends to each outgoing direction, so the walk
//! amplitude `c_{out,in}` sits at `entries[(in, out)]`. Direction order is
//! R, L, U, D throughout the crate.

use nalgebra::Matrix4;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::cis;

const UNITARY_TOL: f64 = 1e-12;
const PAPER_CLASS_TOL: f64 = 1e-10;
const ZERO_DIAG_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    R,
    L,
    U,
    D,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::R, Direction::L, Direction::U, Direction::D];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Direction {
        Self::ALL[i]
    }

    pub fn letter(self) -> char {
        ['R', 'L', 'U', 'D'][self.index()]
    }
}

/// Phases and moduli derived from a validated coin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinDerived {
    /// `arg c_ii` in R, L, U, D order.
    pub sigma: [f64; 4],
    /// `|c_ii|`.
    pub rho_diag: [f64; 4],
    /// `det U`, unimodular.
    pub delta: Complex64,
    /// `((σ_R + σ_U) - (σ_L + σ_D)) / 2`.
    pub theta: f64,
    /// Whether `c_ij = -Δ conj(c_ji)` holds for all off-diagonal pairs.
    pub paper_class: bool,
}

impl CoinDerived {
    pub fn sigma_of(&self, d: Direction) -> f64 {
        self.sigma[d.index()]
    }

    /// `(σ_R + σ_U) - (γ_1 + γ_2)`.
    pub fn psi(&self, gamma: [f64; 2]) -> f64 {
        self.sigma[0] + self.sigma[2] - gamma[0] - gamma[1]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumCoin {
    entries: Matrix4<Complex64>,
    derived: CoinDerived,
}

impl QuantumCoin {
    /// Validates a display-layout matrix.
    pub fn new(entries: Matrix4<Complex64>) -> Result<Self> {
        let residual = (entries.adjoint() * entries - Matrix4::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if !(residual <= UNITARY_TOL) {
            return Err(Error::NotUnitary { residual });
        }
        let mut sigma = [0.0; 4];
        let mut rho_diag = [0.0; 4];
        for i in 0..4 {
            let c = entries[(i, i)];
            if c.norm() < ZERO_DIAG_TOL {
                return Err(Error::ZeroDiagonal { direction: Direction::from_index(i).letter() });
            }
            sigma[i] = c.arg();
            rho_diag[i] = c.norm();
        }
        let delta = entries.determinant();
        let delta = delta / delta.norm();
        let mut paper_class = true;
        for i in 0..4 {
            for j in 0..4 {
                if i != j && (entries[(i, j)] + delta * entries[(j, i)].conj()).norm() > PAPER_CLASS_TOL {
                    paper_class = false;
                }
            }
        }
        let theta = ((sigma[0] + sigma[2]) - (sigma[1] + sigma[3])) / 2.0;
        Ok(Self {
            entries,
            derived: CoinDerived { sigma, rho_diag, delta, theta, paper_class },
        })
    }

    pub fn from_rows(rows: [[Complex64; 4]; 4]) -> Result<Self> {
        Self::new(Matrix4::from_fn(|r, c| rows[r][c]))
    }

    pub fn identity() -> Self {
        Self::new(Matrix4::identity()).expect("identity is a valid coin")
    }

    pub fn entries(&self) -> &Matrix4<Complex64> {
        &self.entries
    }

    pub fn derived(&self) -> &CoinDerived {
        &self.derived
    }

    pub fn is_paper_class(&self) -> bool {
        self.derived.paper_class
    }

    /// Walk amplitude `c_{out,in}`.
    #[inline]
    pub fn amp(&self, out: Direction, inp: Direction) -> Complex64 {
        self.entries[(inp.index(), out.index())]
    }

    /// Multiplies every entry by `e^{iψ}`.
    pub fn with_global_phase(&self, psi: f64) -> Self {
        Self::new(self.entries * cis(psi)).expect("phase change preserves validity")
    }

    /// Row-major `[re, im]` pairs in display layout.
    pub fn to_json(&self) -> CoinJson {
        CoinJson {
            entries: (0..4)
                .map(|r| (0..4).map(|c| [self.entries[(r, c)].re, self.entries[(r, c)].im]).collect())
                .collect(),
        }
    }

    pub fn from_json(json: &CoinJson) -> Result<Self> {
        let flat: Vec<[f64; 2]> = json.entries.iter().flatten().copied().collect();
        if json.entries.len() != 4 || json.entries.iter().any(|r| r.len() != 4) {
            return Err(Error::InvalidInput("coin must be a 4x4 array of [re, im] pairs".into()));
        }
        Self::new(Matrix4::from_fn(|r, c| {
            let [re, im] = flat[4 * r + c];
            Complex64::new(re, im)
        }))
    }
}

/// On-disk coin format. Accepts either `{"entries": [[[re,im],..],..]}` or
/// the bare nested array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoinJson {
    pub entries: Vec<Vec<[f64; 2]>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CoinFile {
    Wrapped(CoinJson),
    Bare(Vec<Vec<[f64; 2]>>),
}

pub fn parse_coin_json(text: &str) -> Result<QuantumCoin> {
    let file: CoinFile =
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("coin JSON: {e}")))?;
    let json = match file {
        CoinFile::Wrapped(j) => j,
        CoinFile::Bare(entries) => CoinJson { entries },
    };
    QuantumCoin::from_json(&json)
}

/// Validates a coin and returns its derived data alongside it.
pub fn validate_coin(entries: Matrix4<Complex64>) -> Result<(QuantumCoin, CoinDerived)> {
    let coin = QuantumCoin::new(entries)?;
    let derived = coin.derived;
    Ok((coin, derived))
}

/// `C(α) = H ⊗ H` with `H = [[ρ, -α], [ᾱ, ρ]]`.
pub fn canonical_coin(alpha: Complex64) -> Result<QuantumCoin> {
    let m2 = alpha.norm_sqr();
    if m2 >= 1.0 {
        return Err(Error::ModulusOutOfRange { value: alpha.norm() });
    }
    let rho = (1.0 - m2).sqrt();
    let r = Complex64::new(rho, 0.0);
    let a = alpha;
    let ab = alpha.conj();
    let p = Complex64::new(1.0 - m2, 0.0);
    let rows = [
        [p, -a * r, -a * r, a * a],
        [ab * r, p, Complex64::new(-m2, 0.0), -a * r],
        [ab * r, Complex64::new(-m2, 0.0), p, -a * r],
        [ab * ab, ab * r, ab * r, p],
    ];
    QuantumCoin::from_rows(rows)
}

/// Sum of the twelve off-diagonal entries.
pub fn off_diagonal_sum(coin: &QuantumCoin) -> Complex64 {
    let e = coin.entries();
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                s += e[(i, j)];
            }
        }
    }
    s
}

/// `a = conj(S) Δ^{1/2}` with the principal square root.
pub fn verblunsky_a(coin: &QuantumCoin) -> Result<Complex64> {
    let a = off_diagonal_sum(coin).conj() * coin.derived.delta.sqrt();
    if a.norm() >= 1.0 {
        return Err(Error::AOutOfRange { modulus: a.norm() });
    }
    Ok(a)
}

/// `b = conj(S) Δ e^{-i(γ_1+γ_2)}`.
pub fn verblunsky_b(coin: &QuantumCoin, gamma: [f64; 2]) -> Result<Complex64> {
    let b = off_diagonal_sum(coin).conj() * coin.derived.delta * cis(-(gamma[0] + gamma[1]));
    if b.norm() >= 1.0 {
        return Err(Error::BOutOfRange { modulus: b.norm() });
    }
    Ok(b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkKind {
    TypeI,
    TypeII,
}

/// Sign convention for the odd entries of the phase diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseVariant {
    Direct,
    FlippedOdd,
}

/// Diagonal of the phase matrix `Λ` for indices `0..n`.
pub fn lambda_diag(
    kind: WalkKind,
    derived: &CoinDerived,
    gamma: [f64; 2],
    n: usize,
    variant: PhaseVariant,
) -> Vec<Complex64> {
    let s = &derived.sigma;
    let odd_sign = match variant {
        PhaseVariant::Direct => 1.0,
        PhaseVariant::FlippedOdd => -1.0,
    };
    let g = gamma[0] + gamma[1];
    (0..n)
        .map(|i| match kind {
            WalkKind::TypeI => {
                if i == 0 {
                    Complex64::new(1.0, 0.0)
                } else if i % 2 == 0 {
                    let k = (i / 2) as f64;
                    cis(-k * (s[0] + s[2]))
                } else {
                    let k = ((i + 1) / 2) as f64;
                    cis(-odd_sign * k * (s[1] + s[3]))
                }
            }
            WalkKind::TypeII => {
                let k = (i / 2) as f64;
                if i % 2 == 0 {
                    cis(-k * ((s[1] + s[3]) - g))
                } else {
                    cis(odd_sign * k * ((s[0] + s[2]) - g))
                }
            }
        })
        .collect()
}

/// `diag(e^{iθ}, 1, 1, e^{-iθ})`.
pub fn phase_matrix_d(theta: f64) -> Matrix4<Complex64> {
    let mut m = Matrix4::identity();
    m[(0, 0)] = cis(theta);
    m[(3, 3)] = cis(-theta);
    m
}

fn conference_k() -> Matrix4<f64> {
    let s = 1.0 / 3f64.sqrt();
    Matrix4::new(
        0.0, 1.0, 1.0, 1.0, //
        -1.0, 0.0, 1.0, -1.0, //
        -1.0, -1.0, 0.0, 1.0, //
        -1.0, 1.0, -1.0, 0.0,
    ) * s
}

/// The mixing family `D (cos φ I + sin φ K) D†` with `K` a real
/// antisymmetric involution-square (`K² = -I`) and `D = diag(1, 1, i, i)`.
/// Paper-class with `Δ = 1`, real positive diagonal for `|φ| < π/2`, and
/// off-diagonal sum `-4i sin φ / √3`.
pub fn mixing_coin(phi: f64) -> QuantumCoin {
    let k = conference_k();
    let d = [
        Complex64::new(1.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::i(),
        Complex64::i(),
    ];
    let m = Matrix4::from_fn(|r, c| {
        let base = if r == c { phi.cos() } else { phi.sin() * k[(r, c)] };
        d[r] * base * d[c].conj()
    });
    QuantumCoin::new(m).expect("mixing coin is unitary")
}

/// Like [`mixing_coin`] but with arbitrary diagonal phases `e^{iτ_j}`.
pub fn mixing_coin_with_phases(phi: f64, tau: [f64; 4]) -> QuantumCoin {
    let k = conference_k();
    let m = Matrix4::from_fn(|r, c| {
        let base = if r == c { phi.cos() } else { phi.sin() * k[(r, c)] };
        cis(tau[r]) * base * cis(-tau[c])
    });
    QuantumCoin::new(m).expect("mixing coin is unitary")
}

/// Haar-random 4×4 unitary from the QR decomposition of a complex Gaussian
/// matrix, with the phase correction that makes the law exactly Haar.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R) -> Matrix4<Complex64> {
    let g = Matrix4::from_fn(|_, _| {
        Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    });
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let mut fix = Matrix4::identity();
    for i in 0..4 {
        let d = r[(i, i)];
        fix[(i, i)] = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
    }
    q * fix
}

/// Random paper-class coin `λ^{1/2} exp(iφG)` with `G` a Haar-conjugated
/// Hermitian involution and `λ = 1 / det exp(iφG)`.
pub fn random_paper_class_coin<R: Rng + ?Sized>(rng: &mut R) -> QuantumCoin {
    loop {
        let v = haar_unitary(rng);
        let mut s = Matrix4::<Complex64>::zeros();
        for i in 0..4 {
            s[(i, i)] = Complex64::new(if rng.gen_bool(0.5) { 1.0 } else { -1.0 }, 0.0);
        }
        let g = v * s * v.adjoint();
        let phi: f64 = rng.gen_range(-1.2..1.2);
        let e = Matrix4::<Complex64>::identity() * Complex64::new(phi.cos(), 0.0) + g * Complex64::new(0.0, phi.sin());
        let det = e.determinant();
        let lambda = (det / det.norm()).inv();
        let u = e * lambda.sqrt();
        if let Ok(coin) = QuantumCoin::new(u) {
            if coin.is_paper_class() {
                return coin;
            }
        }
    }
}

/// Paper-class coin whose off-diagonal sum is `-4i s/√3` times a unit
/// factor, chosen so that the Type I map yields `i·s_target` for real
/// `s_target`.
fn mixing_for_imag(s_target: f64) -> Result<QuantumCoin> {
    let sin_phi = s_target * 3f64.sqrt() / 4.0;
    if sin_phi.abs() >= 1.0 {
        return Err(Error::Unrealizable(format!("|a| = {} needs |sin φ| >= 1", s_target.abs())));
    }
    Ok(mixing_coin(sin_phi.asin()))
}

/// Coin whose Type I parameter equals `a`.
///
/// Purely imaginary `a` is realized inside the paper class. Any other phase
/// requires a global phase `e^{iψ}`, which leaves the walk dynamics
/// unchanged but breaks the paper-class relation, so the returned coin
/// reports `is_paper_class() == false` then.
pub fn realize_a(a: Complex64) -> Result<QuantumCoin> {
    if a.norm() >= 1.0 {
        return Err(Error::AOutOfRange { modulus: a.norm() });
    }
    if a.norm() == 0.0 {
        return Ok(mixing_coin(0.0));
    }
    // e^{iψ} · (i s) = a; the branch of Δ^{1/2} decides the sign of s.
    let psi = a.arg() - std::f64::consts::FRAC_PI_2;
    for s in [a.norm(), -a.norm()] {
        let base = mixing_for_imag(s)?;
        let coin = if psi == 0.0 { base } else { base.with_global_phase(psi) };
        if verblunsky_a(&coin).is_ok_and(|v| (v - a).norm() < 1e-12) {
            return Ok(coin);
        }
    }
    Err(Error::Unrealizable(format!("no phase branch reproduces a = {a}")))
}

/// Paper-class coin and phases `(γ_1, γ_2)` whose Type II parameter equals
/// `b`.
pub fn realize_b(b: Complex64) -> Result<(QuantumCoin, [f64; 2])> {
    if b.norm() >= 1.0 {
        return Err(Error::BOutOfRange { modulus: b.norm() });
    }
    let coin = mixing_for_imag(b.norm())?;
    // conj(S) Δ = i|b|, so e^{-iΓ} must carry the rest of the phase.
    let g = if b.norm() == 0.0 { 0.0 } else { std::f64::consts::FRAC_PI_2 - b.arg() };
    Ok((coin, [g / 2.0, g / 2.0]))
}

/// Tests the paper-class relation under a looser tolerance.
pub fn paper_class_defect(coin: &QuantumCoin) -> f64 {
    let e = coin.entries();
    let d = coin.derived().delta;
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                worst = worst.max((e[(i, j)] + d * e[(j, i)].conj()).norm());
            }
        }
    }
    worst
}
