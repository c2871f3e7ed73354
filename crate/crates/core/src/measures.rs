//! Entanglement measures.
//!
//! * [`gcm`]: the generalized concurrence, a closed form in the purities of
//!   all `2^n - 2` nonempty proper reductions:
//!   `GCM = 2^(1 - n/2) · sqrt(2^n - 2 - Σ_α Tr ρ_α²)`.
//! * [`gem`]: the geometric measure `1 - max_φ |<φ|ψ>|²` over fully product
//!   `|φ>`, found by see-saw sweeps from seeded random starts.
//!
//! [`gem_bipartite_oracle`] and [`brute_force_gem`] are independent checks
//! on `gem`: the first bounds it from below through a Schmidt decomposition,
//! the second bounds it from above by grid search.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::reductions::{self, QubitSubset, ReductionError};
use crate::state::{StateVector, C64};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 0x6e6d_6770;

// Redraws allowed per restart when a contraction vanishes.
const MAX_REDRAWS: usize = 32;
const DEGENERATE_NORM: f64 = 1e-14;
const TIE_TOLERANCE: f64 = 1e-15;
// Fidelity window for counting restarts that reached the winning value.
const AGREEMENT_WINDOW: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error("GCM needs at least 2 qubits, got {0}")]
    TooFewQubits(usize),
    #[error("GCM radicand {0:e} is negative beyond rounding")]
    NegativeRadicand(f64),
    #[error("invalid GEM configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("contraction for factor {0} vanished")]
    DegenerateContraction(usize),
    #[error("restart {0} kept drawing degenerate starting points")]
    DegenerateRestart(usize),
    #[error("brute-force search supports at most 3 qubits, got {0}")]
    TooManyQubits(usize),
    #[error("factor count {factors} does not match state qubit count {qubits}")]
    FactorMismatch { factors: usize, qubits: usize },
    #[error("factor {0} is not a unit vector")]
    NonUnitFactor(usize),
    #[error("cut must be a proper nonempty subset")]
    InvalidCut,
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureKind {
    Gcm,
    Gem,
}

impl MeasureKind {
    pub fn label(&self) -> &'static str {
        match self {
            MeasureKind::Gcm => "GCM",
            MeasureKind::Gem => "GEM",
        }
    }
}

/// Optimizer record for a GEM evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GemDiagnostics {
    pub restarts_used: usize,
    pub best_restart_index: usize,
    /// Sweeps performed by the winning restart.
    pub iterations: usize,
    /// Whether the winning restart met the tolerance before the sweep cap.
    pub converged: bool,
    pub best_fidelity: f64,
    /// Restarts whose final fidelity is within 1e-9 of the best.
    pub restarts_at_best: usize,
    /// Starting points discarded because a contraction vanished.
    pub degenerate_redraws: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureResult {
    pub kind: MeasureKind,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<GemDiagnostics>,
}

/// Generalized concurrence of a pure state on `n ≥ 2` qubits.
pub fn gcm(s: &StateVector) -> Result<MeasureResult, MeasureError> {
    let n = s.n();
    if n < 2 {
        return Err(MeasureError::TooFewQubits(n));
    }
    let sum = reductions::purity_sum(s)?;
    let mut radicand = 2f64.powi(n as i32) - 2.0 - sum;
    if radicand < 0.0 {
        if radicand < -1e-10 {
            return Err(MeasureError::NegativeRadicand(radicand));
        }
        radicand = 0.0;
    }
    let value = 2f64.powf(1.0 - n as f64 / 2.0) * radicand.sqrt();
    Ok(MeasureResult {
        kind: MeasureKind::Gcm,
        value,
        diagnostics: None,
    })
}

/// A fully product state `|a>|b>|c>...`, one unit 2-vector per qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    factors: Vec<[C64; 2]>,
}

impl ProductState {
    pub fn new(factors: Vec<[C64; 2]>) -> Result<Self, MeasureError> {
        for (i, f) in factors.iter().enumerate() {
            let norm = (f[0].norm_sqr() + f[1].norm_sqr()).sqrt();
            if (norm - 1.0).abs() > 1e-12 {
                return Err(MeasureError::NonUnitFactor(i + 1));
            }
        }
        Ok(Self { factors })
    }

    /// Independent Haar-random factors.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let factors = (0..n)
            .map(|_| {
                let v: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                [C64::new(v[0], v[1]) / norm, C64::new(v[2], v[3]) / norm]
            })
            .collect();
        Self { factors }
    }

    pub fn n(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[[C64; 2]] {
        &self.factors
    }

    /// The tensor product as a statevector (qubit 1 most significant).
    pub fn to_state(&self) -> StateVector {
        let n = self.n();
        let amps = (0..1usize << n)
            .map(|idx| {
                (0..n)
                    .map(|q| self.factors[q][idx >> (n - 1 - q) & 1])
                    .product::<C64>()
            })
            .collect();
        StateVector::normalized(amps).expect("product of unit factors")
    }

    /// `<φ|ψ>`.
    pub fn overlap(&self, s: &StateVector) -> Result<C64, MeasureError> {
        self.check(s)?;
        let v = contract_except(s, &self.factors, 0);
        Ok(self.factors[0][0].conj() * v[0] + self.factors[0][1].conj() * v[1])
    }

    pub fn fidelity(&self, s: &StateVector) -> Result<f64, MeasureError> {
        Ok(self.overlap(s)?.norm_sqr())
    }

    fn check(&self, s: &StateVector) -> Result<(), MeasureError> {
        if self.n() != s.n() {
            return Err(MeasureError::FactorMismatch {
                factors: self.n(),
                qubits: s.n(),
            });
        }
        Ok(())
    }
}

/// Contracts `ψ` with `conj(φ_q)` on every qubit except `skip` (0-indexed),
/// leaving the 2-vector `v` with `<φ|ψ> = Σ_x conj(φ_skip[x]) v[x]`.
fn contract_except(s: &StateVector, factors: &[[C64; 2]], skip: usize) -> [C64; 2] {
    let n = factors.len();
    let mut v: Vec<C64> = s.amplitudes().to_vec();
    // Qubits after `skip` are the low bits; peel them off from the bottom.
    for q in (skip + 1..n).rev() {
        let f = factors[q];
        v = (0..v.len() / 2)
            .map(|j| f[0].conj() * v[2 * j] + f[1].conj() * v[2 * j + 1])
            .collect();
    }
    // Now `skip` is bit 0; qubits before it sit directly above.
    for q in (0..skip).rev() {
        let f = factors[q];
        v = (0..v.len() / 2)
            .map(|j| {
                let (hi, lo) = (j >> 1, j & 1);
                let base = hi << 2 | lo;
                f[0].conj() * v[base] + f[1].conj() * v[base | 2]
            })
            .collect();
    }
    [v[0], v[1]]
}

/// Replaces factor `k` (1-indexed) by its optimum with the other factors
/// fixed. The fidelity after the step equals the squared norm of the
/// contraction, which is never below the fidelity before it.
pub fn see_saw_step(s: &StateVector, phi: &ProductState, k: usize) -> Result<ProductState, MeasureError> {
    phi.check(s)?;
    if k == 0 || k > phi.n() {
        return Err(MeasureError::FactorMismatch {
            factors: phi.n(),
            qubits: k,
        });
    }
    let mut out = phi.clone();
    update_factor(s, &mut out.factors, k - 1)?;
    Ok(out)
}

/// In-place update; returns the new fidelity.
fn update_factor(s: &StateVector, factors: &mut [[C64; 2]], k: usize) -> Result<f64, MeasureError> {
    let v = contract_except(s, factors, k);
    let norm_sqr = v[0].norm_sqr() + v[1].norm_sqr();
    let norm = norm_sqr.sqrt();
    if norm < DEGENERATE_NORM {
        return Err(MeasureError::DegenerateContraction(k + 1));
    }
    factors[k] = [v[0] / norm, v[1] / norm];
    Ok(norm_sqr)
}

/// Settings for [`gem`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GemConfig {
    pub restarts: usize,
    /// Cap on full sweeps per restart.
    pub max_iterations: usize,
    /// A restart stops once a sweep improves the fidelity by less than this.
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for GemConfig {
    fn default() -> Self {
        Self {
            restarts: 64,
            max_iterations: 500,
            tolerance: 1e-12,
            seed: DEFAULT_SEED,
        }
    }
}

impl GemConfig {
    pub fn validate(&self) -> Result<(), MeasureError> {
        if self.restarts == 0 {
            return Err(MeasureError::InvalidConfig("restarts must be at least 1"));
        }
        if self.max_iterations == 0 {
            return Err(MeasureError::InvalidConfig("max_iterations must be at least 1"));
        }
        if !(self.tolerance > 0.0) {
            return Err(MeasureError::InvalidConfig("tolerance must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
struct RestartOutcome {
    fidelity: f64,
    iterations: usize,
    converged: bool,
    redraws: usize,
}

/// Fidelity trace of one see-saw run: the value after every factor update.
#[derive(Debug, Clone)]
pub struct SeeSawTrace {
    pub start: f64,
    pub steps: Vec<f64>,
    pub sweeps: usize,
    pub converged: bool,
    pub result: ProductState,
}

/// Runs cyclic see-saw sweeps from `phi` until a sweep gains less than
/// `tolerance` or `max_sweeps` is reached.
pub fn see_saw(
    s: &StateVector,
    phi: &ProductState,
    max_sweeps: usize,
    tolerance: f64,
) -> Result<SeeSawTrace, MeasureError> {
    let start = phi.fidelity(s)?;
    let mut factors = phi.factors.clone();
    let mut steps = Vec::new();
    let mut prev = start;
    let mut converged = false;
    let mut sweeps = 0;
    while sweeps < max_sweeps {
        sweeps += 1;
        let mut f = prev;
        for k in 0..factors.len() {
            f = update_factor(s, &mut factors, k)?;
            steps.push(f);
        }
        let gain = f - prev;
        prev = f;
        if gain < tolerance {
            converged = true;
            break;
        }
    }
    Ok(SeeSawTrace {
        start,
        steps,
        sweeps,
        converged,
        result: ProductState { factors },
    })
}

fn run_restart(s: &StateVector, cfg: &GemConfig, index: usize) -> Result<RestartOutcome, MeasureError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    for redraws in 0..MAX_REDRAWS {
        let phi = ProductState::random(s.n(), &mut rng);
        match see_saw(s, &phi, cfg.max_iterations, cfg.tolerance) {
            Ok(trace) => {
                return Ok(RestartOutcome {
                    fidelity: trace.steps.last().copied().unwrap_or(trace.start),
                    iterations: trace.sweeps,
                    converged: trace.converged,
                    redraws,
                })
            }
            Err(MeasureError::DegenerateContraction(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(MeasureError::DegenerateRestart(index))
}

/// Geometric measure of entanglement. The result is an upper bound on the
/// true value: a restart can only miss the global fidelity maximum.
///
/// Restart `i` draws from a ChaCha stream keyed by `(seed, i)`, so the
/// result does not depend on how restarts are scheduled across threads.
pub fn gem(s: &StateVector, cfg: &GemConfig) -> Result<MeasureResult, MeasureError> {
    cfg.validate()?;
    let outcomes: Vec<RestartOutcome> = (0..cfg.restarts)
        .into_par_iter()
        .map(|i| run_restart(s, cfg, i))
        .collect::<Result<_, _>>()?;

    let mut best = 0usize;
    for (i, o) in outcomes.iter().enumerate().skip(1) {
        if o.fidelity > outcomes[best].fidelity + TIE_TOLERANCE {
            best = i;
        }
    }
    let winner = &outcomes[best];
    let best_fidelity = winner.fidelity.min(1.0);
    let restarts_at_best = outcomes
        .iter()
        .filter(|o| o.fidelity >= winner.fidelity - AGREEMENT_WINDOW)
        .count();
    Ok(MeasureResult {
        kind: MeasureKind::Gem,
        value: 1.0 - best_fidelity,
        diagnostics: Some(GemDiagnostics {
            restarts_used: cfg.restarts,
            best_restart_index: best,
            iterations: winner.iterations,
            converged: winner.converged,
            best_fidelity,
            restarts_at_best,
            degenerate_redraws: outcomes.iter().map(|o| o.redraws).sum(),
        }),
    })
}

/// `1 - λ_max(ρ_cut)`: the geometric measure with respect to the single
/// bipartition `cut | rest`. Exact for two qubits, a lower bound otherwise.
pub fn gem_bipartite_oracle(s: &StateVector, cut: &QubitSubset) -> Result<f64, MeasureError> {
    if cut.n() != s.n() || !cut.is_proper() {
        return Err(MeasureError::InvalidCut);
    }
    let rho = reductions::reduce(s, cut)?;
    let top = rho.eigenvalues()[0];
    Ok(1.0 - top)
}

/// Grid search over product states for `n ≤ 3`, for cross-checking [`gem`].
///
/// Qubits `1..n-1` range over `θ ∈ [0, π]` (poles included) and `ϕ ∈ [0, 2π)`
/// with `grid_density` points per angle; for each grid point the last factor
/// is the exact maximiser. The best grid point is then refined by a
/// shrinking local grid. The value converges to the true measure from above.
pub fn brute_force_gem(s: &StateVector, grid_density: usize) -> Result<f64, MeasureError> {
    let n = s.n();
    if n > 3 {
        return Err(MeasureError::TooManyQubits(n));
    }
    if grid_density < 2 {
        return Err(MeasureError::InvalidConfig("grid density must be at least 2"));
    }
    let free = n - 1;
    let theta_step = PI / (grid_density - 1) as f64;
    let phi_step = TAU / grid_density as f64;

    // angles as (theta, phi) per free factor
    let mut best_angles = vec![(0.0, 0.0); free];
    let mut best = grid_fidelity(s, &best_angles);
    let points: Vec<(f64, f64)> = (0..grid_density)
        .flat_map(|i| (0..grid_density).map(move |j| (i as f64 * theta_step, j as f64 * phi_step)))
        .collect();
    let total = points.len().pow(free as u32);
    for combo in 0..total {
        let mut rem = combo;
        let angles: Vec<(f64, f64)> = (0..free)
            .map(|_| {
                let p = points[rem % points.len()];
                rem /= points.len();
                p
            })
            .collect();
        let f = grid_fidelity(s, &angles);
        if f > best {
            best = f;
            best_angles = angles;
        }
    }

    // local refinement: 5 points per angle around the incumbent, halving the span
    let (mut dt, mut dp) = (theta_step, phi_step);
    for _ in 0..40 {
        let offsets = [-1.0, -0.5, 0.0, 0.5, 1.0];
        let dims = 2 * free;
        let mut improved = best_angles.clone();
        for combo in 0..offsets.len().pow(dims as u32) {
            let mut rem = combo;
            let angles: Vec<(f64, f64)> = best_angles
                .iter()
                .map(|&(t, p)| {
                    let ot = offsets[rem % 5];
                    rem /= 5;
                    let op = offsets[rem % 5];
                    rem /= 5;
                    ((t + ot * dt).clamp(0.0, PI), p + op * dp)
                })
                .collect();
            let f = grid_fidelity(s, &angles);
            if f > best {
                best = f;
                improved = angles;
            }
        }
        best_angles = improved;
        dt /= 2.0;
        dp /= 2.0;
    }
    Ok((1.0 - best).max(0.0))
}

/// Best fidelity with the given leading factors, maximising the last factor
/// exactly via Cauchy–Schwarz.
fn grid_fidelity(s: &StateVector, angles: &[(f64, f64)]) -> f64 {
    let n = s.n();
    let factors: Vec<[C64; 2]> = angles
        .iter()
        .map(|&(t, p)| [C64::new((t / 2.0).cos(), 0.0), C64::from_polar((t / 2.0).sin(), p)])
        .collect();
    let mut v = [C64::new(0.0, 0.0); 2];
    for (idx, amp) in s.amplitudes().iter().enumerate() {
        let mut w = *amp;
        for (q, f) in factors.iter().enumerate() {
            w *= f[idx >> (n - 1 - q) & 1].conj();
        }
        v[idx & 1] += w;
    }
    v[0].norm_sqr() + v[1].norm_sqr()
}
