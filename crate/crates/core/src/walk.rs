//! Quarter-plane quantum walks.
//!
//! The state lives on `|x, y, d⟩` with `x, y >= 0`. A step applies the coin
//! at every site and moves each outgoing component one cell in its
//! direction. At the walls the shift has to be specified separately; see
//! [`EdgeRule`].

use num_complex::Complex64;
use rayon::prelude::*;

use crate::cis;
use crate::cmv::{build_cmv, cmv_power_entry, VerblunskySeq};
use crate::coin::{lambda_diag, verblunsky_a, verblunsky_b, Direction, PhaseVariant, QuantumCoin, WalkKind};
use crate::error::{Error, Result};

type C = Complex64;
const ZERO: C = C::new(0.0, 0.0);

use Direction::{D, L, R, U};

/// Shift at the walls `x = 0` and `y = 0` away from the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeRule {
    /// A move into a wall turns around: `L` at `x = 0` becomes `R` in place,
    /// `D` at `y = 0` becomes `U` in place. Together with the origin rules
    /// this makes the shift a bijection, so the walk is unitary.
    Reflecting,
    /// Type II only. A move into the wall at height `h` turns around one
    /// cell along the wall, to `h + 1` for odd `h` and `h - 1` for even `h`.
    /// Still a bijection, and every move changes `x + y` by one, so the
    /// parity of `x + y + t` is conserved.
    Staggered,
    /// A move into a wall stays put with its direction unchanged. This
    /// sends two basis states to the same target and is not unitary.
    Sticky,
}

/// Initial coin state at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoinState {
    /// Amplitudes `(α, β, μ, ζ)` on `R, L, U, D`.
    TypeI([C; 4]),
    /// Phases `(δ_1, δ_2)` on `L, D`, weighted by `1/√2`.
    TypeII([f64; 2]),
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    kind: WalkKind,
    size: usize,
    time: usize,
    reach: usize,
    amps: Vec<C>,
}

impl WalkState {
    /// Empty state on `[0, size]²`.
    pub fn zeros(kind: WalkKind, size: usize) -> Self {
        Self { kind, size, time: 0, reach: 0, amps: vec![ZERO; (size + 1) * (size + 1) * 4] }
    }

    #[inline]
    fn idx(&self, x: usize, y: usize, d: Direction) -> usize {
        ((x * (self.size + 1) + y) << 2) + d.index()
    }

    pub fn kind(&self) -> WalkKind {
        self.kind
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn time(&self) -> usize {
        self.time
    }

    pub fn amplitude(&self, x: usize, y: usize, d: Direction) -> C {
        if x > self.size || y > self.size {
            ZERO
        } else {
            self.amps[self.idx(x, y, d)]
        }
    }

    /// Sets one amplitude. Type II has no `R` or `U` state at the origin.
    pub fn set(&mut self, x: usize, y: usize, d: Direction, v: C) -> Result<()> {
        if x > self.size || y > self.size {
            return Err(Error::TruncationOverflow { size: self.size, time: self.time });
        }
        if self.kind == WalkKind::TypeII && x == 0 && y == 0 && matches!(d, R | U) {
            return Err(Error::InvalidInput("Type II has no R or U state at the origin".into()));
        }
        let i = self.idx(x, y, d);
        self.amps[i] = v;
        self.reach = self.reach.max(x + y);
        Ok(())
    }

    pub fn basis(kind: WalkKind, size: usize, x: usize, y: usize, d: Direction) -> Result<Self> {
        let mut s = Self::zeros(kind, size);
        s.set(x, y, d, C::new(1.0, 0.0))?;
        Ok(s)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Nonzero amplitudes as `(x, y, d, value)`.
    pub fn support(&self) -> Vec<(usize, usize, Direction, C)> {
        let mut out = Vec::new();
        for x in 0..=self.size {
            for y in 0..=self.size {
                for d in Direction::ALL {
                    let v = self.amps[self.idx(x, y, d)];
                    if v != ZERO {
                        out.push((x, y, d, v));
                    }
                }
            }
        }
        out
    }

    pub fn inner(&self, other: &WalkState) -> C {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }
}

pub fn initial_state(kind: WalkKind, coin_state: &CoinState, size: usize) -> Result<WalkState> {
    let mut s = WalkState::zeros(kind, size);
    match (kind, coin_state) {
        (WalkKind::TypeI, CoinState::TypeI(v)) => {
            let norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            if (norm_sq - 1.0).abs() > 1e-12 {
                return Err(Error::NotNormalized { norm_sq });
            }
            for d in Direction::ALL {
                s.set(0, 0, d, v[d.index()])?;
            }
        }
        (WalkKind::TypeII, CoinState::TypeII([d1, d2])) => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            s.set(0, 0, L, cis(*d1) * h)?;
            s.set(0, 0, D, cis(*d2) * h)?;
        }
        _ => return Err(Error::InvalidInput("coin state does not match the walk type".into())),
    }
    Ok(s)
}

/// A walk: coin, phases `(γ_1, γ_2)` of the Type II origin and wall rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Walk {
    pub kind: WalkKind,
    pub coin: QuantumCoin,
    pub gamma: [f64; 2],
    pub edge: EdgeRule,
}

impl EdgeRule {
    /// `Reflecting` for Type I, `Staggered` for Type II.
    pub fn default_for(kind: WalkKind) -> Self {
        match kind {
            WalkKind::TypeI => EdgeRule::Reflecting,
            WalkKind::TypeII => EdgeRule::Staggered,
        }
    }
}

impl Walk {
    pub fn new(kind: WalkKind, coin: QuantumCoin, gamma: [f64; 2]) -> Self {
        Self { kind, coin, gamma, edge: EdgeRule::default_for(kind) }
    }

    pub fn with_edge(mut self, edge: EdgeRule) -> Self {
        self.edge = edge;
        self
    }

    /// Target of an outgoing component leaving `(x, y)` in direction `out`.
    #[inline]
    fn route(&self, x: usize, y: usize, out: Direction) -> (usize, usize, Direction) {
        let origin = x == 0 && y == 0;
        match out {
            R => (x + 1, y, R),
            U => (x, y + 1, U),
            L => {
                if origin {
                    (0, 0, L)
                } else if x == 0 {
                    match self.edge {
                        EdgeRule::Reflecting => (0, y, R),
                        EdgeRule::Staggered => (0, stagger(y), R),
                        EdgeRule::Sticky => (0, y, L),
                    }
                } else if x == 1 && y == 0 && self.kind == WalkKind::TypeI && self.edge == EdgeRule::Reflecting {
                    (0, 0, R)
                } else {
                    (x - 1, y, L)
                }
            }
            D => {
                if origin {
                    (0, 0, D)
                } else if y == 0 {
                    match self.edge {
                        EdgeRule::Reflecting => (x, 0, U),
                        EdgeRule::Staggered => (stagger(x), 0, U),
                        EdgeRule::Sticky => (x, 0, D),
                    }
                } else if y == 1 && x == 0 && self.kind == WalkKind::TypeI && self.edge == EdgeRule::Reflecting {
                    (0, 0, U)
                } else {
                    (x, y - 1, D)
                }
            }
        }
    }

    /// One application of the evolution operator.
    pub fn step(&self, state: &WalkState) -> Result<WalkState> {
        if state.kind != self.kind {
            return Err(Error::InvalidInput("state and walk types differ".into()));
        }
        if self.kind == WalkKind::TypeI && self.edge == EdgeRule::Staggered {
            return Err(Error::InvalidInput("the staggered wall rule needs the Type II origin".into()));
        }
        if state.reach + 3 > state.size {
            return Err(Error::TruncationOverflow { size: state.size, time: state.time });
        }
        let mut next = WalkState {
            kind: state.kind,
            size: state.size,
            time: state.time + 1,
            reach: state.reach + 1,
            amps: vec![ZERO; state.amps.len()],
        };
        let coin = &self.coin;
        for x in 0..=state.reach {
            for y in 0..=state.reach - x {
                let base = state.idx(x, y, R);
                let psi = [state.amps[base], state.amps[base + 1], state.amps[base + 2], state.amps[base + 3]];
                if psi.iter().all(|a| *a == ZERO) {
                    continue;
                }
                if self.kind == WalkKind::TypeII && x == 0 && y == 0 {
                    let i = next.idx(1, 0, R);
                    next.amps[i] += cis(self.gamma[0]) * psi[L.index()];
                    let i = next.idx(0, 1, U);
                    next.amps[i] += cis(self.gamma[1]) * psi[D.index()];
                    continue;
                }
                for out in Direction::ALL {
                    let mut v = ZERO;
                    for inp in Direction::ALL {
                        v += coin.amp(out, inp) * psi[inp.index()];
                    }
                    if v == ZERO {
                        continue;
                    }
                    let (nx, ny, nd) = self.route(x, y, out);
                    let i = next.idx(nx, ny, nd);
                    next.amps[i] += v;
                }
            }
        }
        Ok(next)
    }

    pub fn run(&self, state: &WalkState, steps: usize) -> Result<WalkState> {
        let mut s = state.clone();
        for _ in 0..steps {
            s = self.step(&s)?;
        }
        Ok(s)
    }
}

#[inline]
fn stagger(h: usize) -> usize {
    if h % 2 == 1 {
        h + 1
    } else {
        h - 1
    }
}

/// Site probabilities `P(x, y) = Σ_d |ψ(x, y, d)|²`.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    size: usize,
    p: Vec<f64>,
}

impl Distribution {
    pub fn get(&self, x: usize, y: usize) -> f64 {
        if x > self.size || y > self.size {
            0.0
        } else {
            self.p[x * (self.size + 1) + y]
        }
    }

    pub fn total(&self) -> f64 {
        self.p.iter().sum()
    }

    /// Sites with positive probability in `(x, y)` order.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        let n = self.size + 1;
        self.p.iter().enumerate().filter(|(_, p)| **p > 0.0).map(move |(i, p)| ((i / n, i % n), *p))
    }
}

pub fn distribution(state: &WalkState) -> Distribution {
    let p = state.amps.chunks_exact(4).map(|c| c.iter().map(|a| a.norm_sqr()).sum()).collect();
    Distribution { size: state.size, p }
}

/// Transition amplitudes `⟨to, d_out| W^t |from, d_in⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct PassageWeight {
    /// Input directions, one per column.
    pub inputs: Vec<Direction>,
    /// `block[out][col]`.
    pub block: Vec<Vec<C>>,
}

impl PassageWeight {
    pub fn entry(&self, out: Direction, inp: Direction) -> C {
        match self.inputs.iter().position(|d| *d == inp) {
            Some(col) => self.block[out.index()][col],
            None => ZERO,
        }
    }
}

fn admissible(kind: WalkKind, x: usize, y: usize) -> Vec<Direction> {
    if kind == WalkKind::TypeII && x == 0 && y == 0 {
        vec![L, D]
    } else {
        Direction::ALL.to_vec()
    }
}

pub fn passage_weight(walk: &Walk, t: usize, from: (usize, usize), to: (usize, usize)) -> Result<PassageWeight> {
    let size = (from.0 + from.1 + t + 4).max(to.0.max(to.1) + 1);
    let inputs = admissible(walk.kind, from.0, from.1);
    let cols: Vec<Vec<C>> = inputs
        .iter()
        .map(|&d| {
            let s = WalkState::basis(walk.kind, size, from.0, from.1, d)?;
            let s = walk.run(&s, t)?;
            Ok(Direction::ALL.iter().map(|&o| s.amplitude(to.0, to.1, o)).collect())
        })
        .collect::<Result<_>>()?;
    let block = (0..4).map(|o| cols.iter().map(|c| c[o]).collect()).collect();
    Ok(PassageWeight { inputs, block })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReturnStats {
    /// `(1/T) Σ_{t<T} P_t(0, 0)`.
    pub cesaro: f64,
    /// Average of `P_t(0, 0)` over `t ∈ [T - T/4, T)`.
    pub tail: f64,
}

pub fn time_avg_return(walk: &Walk, coin_state: &CoinState, horizon: usize) -> Result<ReturnStats> {
    if horizon < 16 {
        return Err(Error::InvalidInput(format!("horizon {horizon} is below 16")));
    }
    let mut s = initial_state(walk.kind, coin_state, horizon + 4)?;
    let tail_start = horizon - horizon / 4;
    let (mut all, mut tail) = (0.0, 0.0);
    for t in 0..horizon {
        if t > 0 {
            s = walk.step(&s)?;
        }
        let p: f64 = Direction::ALL.iter().map(|&d| s.amplitude(0, 0, d).norm_sqr()).sum();
        all += p;
        if t >= tail_start {
            tail += p;
        }
    }
    Ok(ReturnStats { cesaro: all / horizon as f64, tail: tail / (horizon - tail_start) as f64 })
}

/// Diagonal return profile of a walk started by [`initial_state`].
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalProfile {
    /// Average of `P_t(0, 0)` over the window.
    pub origin: f64,
    /// `Σ_t P_t(k, k) / Σ_t P_t(0, 0)` for `k = 0..=k_max`.
    pub ratios: Vec<f64>,
}

/// Accumulates `P_t(k, k)` over `t ∈ [from, horizon]`.
pub fn diagonal_profile(
    walk: &Walk,
    coin_state: &CoinState,
    from: usize,
    horizon: usize,
    k_max: usize,
) -> Result<DiagonalProfile> {
    if from > horizon {
        return Err(Error::InvalidInput(format!("window start {from} is past horizon {horizon}")));
    }
    let mut s = initial_state(walk.kind, coin_state, horizon + 4)?;
    let mut acc = vec![0.0; k_max + 1];
    for t in 0..=horizon {
        if t > 0 {
            s = walk.step(&s)?;
        }
        if t >= from {
            for (k, a) in acc.iter_mut().enumerate() {
                *a += Direction::ALL.iter().map(|&d| s.amplitude(k, k, d).norm_sqr()).sum::<f64>();
            }
        }
    }
    let origin = acc[0] / (horizon - from + 1) as f64;
    let ratios = acc.iter().map(|a| if acc[0] > 0.0 { a / acc[0] } else { f64::NAN }).collect();
    Ok(DiagonalProfile { origin, ratios })
}

/// Sign pattern of the fold isometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fold {
    /// Equal positive weights on every state mapped to an index.
    Symmetric,
    /// Alternating signs in listing order.
    Alternating,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    /// `Λ C Λ*`.
    LambdaLeft,
    /// `Λ* C Λ`.
    LambdaRight,
}

/// Verblunsky pattern compared against the folded walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeqPattern {
    /// Constant `a` (null-odd) or `b` (null-even).
    Constant,
    /// Index-dependent `a Δ^{-(j+1)/2}` or `b e^{-i(γ_1+γ_2)} Δ`.
    Indexed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Convention {
    pub phase: PhaseVariant,
    pub placement: Placement,
    pub fold: Fold,
    pub pattern: SeqPattern,
}

impl Convention {
    pub fn all() -> Vec<Convention> {
        let mut v = Vec::new();
        for phase in [PhaseVariant::Direct, PhaseVariant::FlippedOdd] {
            for placement in [Placement::LambdaLeft, Placement::LambdaRight] {
                for fold in [Fold::Symmetric, Fold::Alternating] {
                    for pattern in [SeqPattern::Constant, SeqPattern::Indexed] {
                        v.push(Convention { phase, placement, fold, pattern });
                    }
                }
            }
        }
        v
    }

    pub fn label(&self) -> String {
        format!(
            "{}/{}/{}/{}",
            match self.phase {
                PhaseVariant::Direct => "direct",
                PhaseVariant::FlippedOdd => "flipped",
            },
            match self.placement {
                Placement::LambdaLeft => "L*C*L'",
                Placement::LambdaRight => "L'*C*L",
            },
            match self.fold {
                Fold::Symmetric => "sym",
                Fold::Alternating => "alt",
            },
            match self.pattern {
                SeqPattern::Constant => "const",
                SeqPattern::Indexed => "indexed",
            }
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrespondenceReport {
    /// `a` (Type I) or `b` (Type II) of the coin.
    pub parameter: C,
    pub paper_class: bool,
    /// Residual per convention, in [`Convention::all`] order.
    pub residuals: Vec<(Convention, f64)>,
    pub best: Convention,
    pub residual: f64,
    /// Whether some convention is below `1e-6`.
    pub fits: bool,
    /// `max_t |⟨ψ_0, W^t ψ_0⟩ - e^{itΓ}(C^t)_{00}|` with `Γ = γ_1 + γ_2`
    /// (zero for Type I), over `t < n/2 - 1`. Independent of the fold.
    pub return_residual: f64,
}

/// Walk basis states listed for CMV index `j`.
fn fold_states(kind: WalkKind, j: usize) -> Vec<(usize, usize, Direction)> {
    match kind {
        WalkKind::TypeI => {
            let k = j / 2;
            let mut v = Vec::new();
            if j < 4 {
                v.push((0, 0, Direction::from_index(j)));
            }
            if k >= 1 {
                if j % 2 == 0 {
                    v.extend([(k, k, R), (k, k, U)]);
                } else {
                    v.extend([(k, k, L), (k, k, D)]);
                }
            }
            v
        }
        WalkKind::TypeII => {
            let mut v = Vec::new();
            if j == 0 {
                v.push((0, 0, L));
            }
            if j == 1 {
                v.push((0, 0, D));
            }
            if j >= 1 {
                let k = (j + 1) / 2;
                if j % 2 == 1 {
                    v.extend([(k, k, R), (k, k, U)]);
                } else {
                    v.extend([(k, k, L), (k, k, D)]);
                }
            }
            v
        }
    }
}

fn fold_vector(kind: WalkKind, size: usize, j: usize, fold: Fold) -> Result<WalkState> {
    let states = fold_states(kind, j);
    let w = 1.0 / (states.len() as f64).sqrt();
    let mut s = WalkState::zeros(kind, size);
    for (i, &(x, y, d)) in states.iter().enumerate() {
        let sign = match fold {
            Fold::Alternating if i % 2 == 1 => -1.0,
            _ => 1.0,
        };
        s.set(x, y, d, C::new(sign * w, 0.0))?;
    }
    Ok(s)
}

fn cmv_pattern(kind: WalkKind, coin: &QuantumCoin, gamma: [f64; 2], p: C, pattern: SeqPattern, n: usize) -> VerblunskySeq {
    let delta = coin.derived().delta;
    match (kind, pattern) {
        (WalkKind::TypeI, SeqPattern::Constant) => VerblunskySeq::NullOdd(p),
        (WalkKind::TypeII, SeqPattern::Constant) => VerblunskySeq::NullEven(p),
        (WalkKind::TypeI, SeqPattern::Indexed) => {
            let h = delta.sqrt();
            VerblunskySeq::Explicit(
                (0..n).map(|j| if j % 2 == 0 { p * h.powi(-((j + 1) as i32)) } else { ZERO }).collect(),
            )
        }
        (WalkKind::TypeII, SeqPattern::Indexed) => {
            let f = cis(-(gamma[0] + gamma[1])) * delta;
            VerblunskySeq::NullEven(p * f)
        }
    }
}

/// Compares the walk, folded onto the diagonal sector, with the phase-
/// conjugated CMV matrix of its Verblunsky parameter, for every convention.
pub fn correspondence_residual(walk: &Walk, n: usize) -> Result<CorrespondenceReport> {
    if n < 8 || n % 2 != 0 {
        return Err(Error::SizeTooSmall { size: n });
    }
    let coin = &walk.coin;
    let parameter = match walk.kind {
        WalkKind::TypeI => verblunsky_a(coin)?,
        WalkKind::TypeII => verblunsky_b(coin, walk.gamma)?,
    };
    let size = n + 4;
    let interior = n - 4;
    let global = match walk.kind {
        WalkKind::TypeI => C::new(1.0, 0.0),
        WalkKind::TypeII => cis(walk.gamma[0] + walk.gamma[1]),
    };
    let mut folded = Vec::new();
    for fold in [Fold::Symmetric, Fold::Alternating] {
        let vs: Vec<WalkState> = (0..n).map(|j| fold_vector(walk.kind, size, j, fold)).collect::<Result<_>>()?;
        let wvs: Vec<WalkState> = vs.par_iter().map(|v| walk.step(v)).collect::<Result<_>>()?;
        let m: Vec<Vec<C>> = (0..interior).map(|i| (0..interior).map(|j| vs[i].inner(&wvs[j])).collect()).collect();
        folded.push((fold, m));
    }
    let mut residuals = Vec::new();
    for conv in Convention::all() {
        let seq = cmv_pattern(walk.kind, coin, walk.gamma, parameter, conv.pattern, n);
        let cmv = build_cmv(&seq, n)?;
        let lam = lambda_diag(walk.kind, coin.derived(), walk.gamma, n, conv.phase);
        let m = &folded.iter().find(|(f, _)| *f == conv.fold).expect("both folds computed").1;
        let mut worst: f64 = 0.0;
        for i in 0..interior {
            for j in 0..interior {
                let target = global
                    * match conv.placement {
                        Placement::LambdaLeft => lam[i] * cmv.entry(i, j) * lam[j].conj(),
                        Placement::LambdaRight => lam[i].conj() * cmv.entry(i, j) * lam[j],
                    };
                worst = worst.max((m[i][j] - target).norm());
            }
        }
        residuals.push((conv, worst));
    }
    let (best, residual) =
        residuals.iter().copied().min_by(|a, b| a.1.total_cmp(&b.1)).expect("conventions are nonempty");
    let return_residual = return_residual(walk, parameter, n)?;
    Ok(CorrespondenceReport {
        parameter,
        paper_class: coin.is_paper_class(),
        residuals,
        best,
        residual,
        fits: residual < 1e-6,
        return_residual,
    })
}

fn return_residual(walk: &Walk, parameter: C, n: usize) -> Result<f64> {
    let seq = match walk.kind {
        WalkKind::TypeI => VerblunskySeq::NullOdd(parameter),
        WalkKind::TypeII => VerblunskySeq::NullEven(parameter),
    };
    let cmv = build_cmv(&seq, n)?;
    let start = match walk.kind {
        WalkKind::TypeI => R,
        WalkKind::TypeII => L,
    };
    let horizon = (n - 4) / 2;
    let psi0 = WalkState::basis(walk.kind, horizon + 6, 0, 0, start)?;
    let gamma_sum = match walk.kind {
        WalkKind::TypeI => 0.0,
        WalkKind::TypeII => walk.gamma[0] + walk.gamma[1],
    };
    let mut s = psi0.clone();
    let mut worst: f64 = 0.0;
    for t in 0..horizon {
        if t > 0 {
            s = walk.step(&s)?;
        }
        let lhs = s.amplitude(0, 0, start);
        let rhs = cis(t as f64 * gamma_sum) * cmv_power_entry(&cmv, t, 0, 0)?;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coin::{canonical_coin, random_paper_class_coin};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn identity_coin_moves_right() {
        let walk = Walk::new(WalkKind::TypeI, QuantumCoin::identity(), [0.0, 0.0]);
        let s = initial_state(WalkKind::TypeI, &CoinState::TypeI([c(1.0, 0.0), ZERO, ZERO, ZERO]), 8).unwrap();
        let s = walk.step(&s).unwrap();
        assert_eq!(s.amplitude(1, 0, R), c(1.0, 0.0));
        assert_eq!(s.support().len(), 1);
    }

    #[test]
    fn type_two_origin_rule() {
        let coin = canonical_coin(c(0.3, 0.1)).unwrap();
        let walk = Walk::new(WalkKind::TypeII, coin, [0.0, 0.4]);
        let s = WalkState::basis(WalkKind::TypeII, 8, 0, 0, L).unwrap();
        let s = walk.step(&s).unwrap();
        assert_eq!(s.amplitude(1, 0, R), c(1.0, 0.0));
        let s = WalkState::basis(WalkKind::TypeII, 8, 0, 0, D).unwrap();
        let s = walk.step(&s).unwrap();
        assert!((s.amplitude(0, 1, U) - cis(0.4)).norm() < 1e-15);
    }

    #[test]
    fn type_two_initial_state() {
        let s = initial_state(WalkKind::TypeII, &CoinState::TypeII([0.0, 0.0]), 4).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitude(0, 0, L) - c(h, 0.0)).norm() < 1e-15);
        assert!((s.amplitude(0, 0, D) - c(h, 0.0)).norm() < 1e-15);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_unnormalized_state() {
        let r = initial_state(WalkKind::TypeI, &CoinState::TypeI([c(1.0, 0.0), c(1.0, 0.0), ZERO, ZERO]), 4);
        assert!(matches!(r, Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn first_step_distribution() {
        let walk = Walk::new(WalkKind::TypeI, canonical_coin(c(0.5, 0.0)).unwrap(), [0.0, 0.0]);
        let s = WalkState::basis(WalkKind::TypeI, 8, 0, 0, R).unwrap();
        let p = distribution(&walk.step(&s).unwrap());
        assert!((p.get(1, 0) - 0.5625).abs() < 1e-15);
        assert!((p.get(0, 0) - 0.25).abs() < 1e-15);
        assert!((p.get(0, 1) - 0.1875).abs() < 1e-15);
        assert!((p.total() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn passage_weight_examples() {
        let walk = Walk::new(WalkKind::TypeI, canonical_coin(c(0.5, 0.0)).unwrap(), [0.0, 0.0]);
        let p0 = passage_weight(&walk, 0, (2, 1), (2, 1)).unwrap();
        for o in Direction::ALL {
            for i in Direction::ALL {
                assert_eq!(p0.entry(o, i), if o == i { c(1.0, 0.0) } else { ZERO });
            }
        }
        let p1 = passage_weight(&walk, 1, (0, 0), (1, 0)).unwrap();
        assert!((p1.entry(R, R) - c(0.75, 0.0)).norm() < 1e-15);
        let far = passage_weight(&walk, 1, (0, 0), (5, 5)).unwrap();
        assert!(far.block.iter().flatten().all(|z| *z == ZERO));
    }

    #[test]
    fn truncation_overflow() {
        let walk = Walk::new(WalkKind::TypeI, QuantumCoin::identity(), [0.0, 0.0]);
        let s = WalkState::basis(WalkKind::TypeI, 4, 0, 0, R).unwrap();
        assert!(walk.run(&s, 1).is_ok());
        assert!(matches!(walk.run(&s, 3), Err(Error::TruncationOverflow { .. })));
    }

    fn norm_drift(walk: &Walk, state: &WalkState, steps: usize) -> f64 {
        let mut s = state.clone();
        let mut worst: f64 = 0.0;
        for _ in 0..steps {
            s = walk.step(&s).unwrap();
            worst = worst.max((s.norm_sqr() - 1.0).abs());
        }
        worst
    }

    #[test]
    fn walls_preserve_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for kind in [WalkKind::TypeI, WalkKind::TypeII, WalkKind::TypeII] {
            let coin = random_paper_class_coin(&mut rng);
            let walk = Walk::new(kind, coin, [0.7, -0.2]);
            let cs = match kind {
                WalkKind::TypeI => CoinState::TypeI([c(0.5, 0.0), c(0.0, 0.5), c(-0.5, 0.0), c(0.0, -0.5)]),
                WalkKind::TypeII => CoinState::TypeII([0.3, 1.1]),
            };
            let s = initial_state(kind, &cs, 64).unwrap();
            assert!(norm_drift(&walk, &s, 60) < 1e-12);
        }
    }

    #[test]
    fn sticky_walls_lose_unitarity() {
        let coin = canonical_coin(c(0.5, 0.0)).unwrap();
        let walk = Walk::new(WalkKind::TypeI, coin, [0.0, 0.0]).with_edge(EdgeRule::Sticky);
        let a = walk.step(&WalkState::basis(WalkKind::TypeI, 8, 0, 2, L).unwrap()).unwrap();
        let b = walk.step(&WalkState::basis(WalkKind::TypeI, 8, 1, 2, L).unwrap()).unwrap();
        assert!(a.inner(&b).norm() > 1e-3);
    }

    #[test]
    fn shifts_are_bijections() {
        for (kind, edge) in [
            (WalkKind::TypeI, EdgeRule::Reflecting),
            (WalkKind::TypeII, EdgeRule::Reflecting),
            (WalkKind::TypeII, EdgeRule::Staggered),
        ] {
            let walk = Walk::new(kind, QuantumCoin::identity(), [0.0, 0.0]).with_edge(edge);
            let n = 7;
            let mut seen = std::collections::HashSet::new();
            for x in 0..n {
                for y in 0..n {
                    if kind == WalkKind::TypeII && x == 0 && y == 0 {
                        continue;
                    }
                    for d in Direction::ALL {
                        assert!(seen.insert(walk.route(x, y, d)), "{kind:?} ({x},{y},{d:?})");
                    }
                }
            }
            // Every state well inside the window has a preimage.
            for x in 0..n - 2 {
                for y in 0..n - 2 {
                    for d in Direction::ALL {
                        let missing = kind == WalkKind::TypeII && x == 0 && y == 0 && matches!(d, R | U);
                        let hit = seen.contains(&(x, y, d))
                            || (kind == WalkKind::TypeII && ((x, y, d) == (1, 0, R) || (x, y, d) == (0, 1, U)));
                        assert_eq!(hit, !missing, "{kind:?} ({x},{y},{d:?})");
                    }
                }
            }
        }
    }

    #[test]
    fn reflecting_walls_break_parity() {
        let coin = crate::coin::mixing_coin(0.3);
        let walk = Walk::new(WalkKind::TypeII, coin, [0.0, 0.0]).with_edge(EdgeRule::Reflecting);
        let mut s = initial_state(WalkKind::TypeII, &CoinState::TypeII([0.0, 0.0]), 12).unwrap();
        let mut broken = false;
        for t in 1..=6 {
            s = walk.step(&s).unwrap();
            broken |= distribution(&s).iter().any(|((x, y), p)| (x + y + t) % 2 == 1 && p > 1e-12);
        }
        assert!(broken);
    }

    #[test]
    fn staggered_walls_need_type_two() {
        let walk = Walk::new(WalkKind::TypeI, QuantumCoin::identity(), [0.0, 0.0]).with_edge(EdgeRule::Staggered);
        assert!(walk.step(&WalkState::basis(WalkKind::TypeI, 8, 0, 0, R).unwrap()).is_err());
    }

    #[test]
    fn locality_and_parity() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let coin = random_paper_class_coin(&mut rng);
        let walk = Walk::new(WalkKind::TypeII, coin, [0.1, 0.2]);
        let mut s = initial_state(WalkKind::TypeII, &CoinState::TypeII([0.0, 0.5]), 30).unwrap();
        for t in 1..=20 {
            s = walk.step(&s).unwrap();
            for ((x, y), p) in distribution(&s).iter() {
                assert!(x + y <= t);
                assert!((x + y + t) % 2 == 0 || p < 1e-28, "t = {t}, ({x}, {y})");
            }
        }
    }

    #[test]
    fn identity_coin_never_returns() {
        let walk = Walk::new(WalkKind::TypeI, QuantumCoin::identity(), [0.0, 0.0]);
        let r = time_avg_return(&walk, &CoinState::TypeI([c(1.0, 0.0), ZERO, ZERO, ZERO]), 64).unwrap();
        assert!(r.tail == 0.0 && r.cesaro < 0.02);
    }

    #[test]
    fn identity_coin_correspondence() {
        let walk = Walk::new(WalkKind::TypeI, QuantumCoin::identity(), [0.0, 0.0]);
        let rep = correspondence_residual(&walk, 16).unwrap();
        assert_eq!(rep.parameter, ZERO);
        assert_eq!(rep.residuals.len(), 16);
    }
}
