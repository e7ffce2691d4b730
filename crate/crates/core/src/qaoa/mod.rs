//! p-layer QAOA over a QUBO cost diagonal.
//!
//! The cost layer is applied as a diagonal phase on precomputed energies
//! (`exp(-i gamma E(x))` on each basis state) rather than a ZZ-gate
//! decomposition; both act identically on the statevector.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use thiserror::Error;

use crate::numerics::{simplex_minimize, NumericsError, RandomStream, SimplexConfig};
use crate::portfolio::{bits_from_index, QuboProblem};
use crate::statevector::{QuantumRegister, StateError, MAX_QUBITS};

/// Restart count used when the caller has no preference.
pub const DEFAULT_RESTARTS: usize = 8;
/// Shots taken from the optimised state for the final report.
pub const DEFAULT_REPORT_SHOTS: u64 = 4096;
const TOP_STATES: usize = 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QaoaError {
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("gamma and beta vectors differ in length ({gammas} vs {betas})")]
    ParamLength { gammas: usize, betas: usize },
    #[error("QAOA depth must be at least 1")]
    ZeroDepth,
    #[error("at least one restart is required")]
    ZeroRestarts,
    #[error("{0} variables exceeds the simulator capacity")]
    Capacity(usize),
    #[error("cost diagonal is empty")]
    EmptyProblem,
}

/// Layer angles, stored wrapped to `[0, 2pi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QaoaParams {
    gammas: Vec<f64>,
    betas: Vec<f64>,
}

fn wrap(angle: f64) -> f64 {
    let w = angle.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

impl QaoaParams {
    pub fn new(gammas: Vec<f64>, betas: Vec<f64>) -> Result<Self, QaoaError> {
        if gammas.len() != betas.len() {
            return Err(QaoaError::ParamLength {
                gammas: gammas.len(),
                betas: betas.len(),
            });
        }
        Ok(Self {
            gammas: gammas.into_iter().map(wrap).collect(),
            betas: betas.into_iter().map(wrap).collect(),
        })
    }

    /// Depth-0 parameters: the bare uniform superposition.
    pub fn empty() -> Self {
        Self {
            gammas: Vec::new(),
            betas: Vec::new(),
        }
    }

    pub fn depth(&self) -> usize {
        self.gammas.len()
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    /// `[gamma_1..gamma_p, beta_1..beta_p]`.
    pub fn to_flat(&self) -> Vec<f64> {
        self.gammas.iter().chain(&self.betas).copied().collect()
    }

    pub fn from_flat(flat: &[f64]) -> Result<Self, QaoaError> {
        if !flat.len().is_multiple_of(2) {
            return Err(QaoaError::ParamLength {
                gammas: flat.len().div_ceil(2),
                betas: flat.len() / 2,
            });
        }
        let p = flat.len() / 2;
        Self::new(flat[..p].to_vec(), flat[p..].to_vec())
    }
}

/// Energy of every basis state: entry `x` is `qubo_energy(bits(x))`.
pub fn cost_diagonal(q: &QuboProblem) -> Result<Vec<f64>, QaoaError> {
    let n = q.n_vars();
    if n == 0 {
        return Err(QaoaError::EmptyProblem);
    }
    if n > MAX_QUBITS {
        return Err(QaoaError::Capacity(n));
    }
    Ok((0..1usize << n).map(|x| q.energy_of_index(x)).collect())
}

fn qubits_for(diag: &[f64]) -> Result<usize, QaoaError> {
    if diag.is_empty() {
        return Err(QaoaError::EmptyProblem);
    }
    if !diag.len().is_power_of_two() {
        return Err(StateError::NotPowerOfTwo(diag.len()).into());
    }
    Ok(diag.len().trailing_zeros() as usize)
}

/// `prod_l exp(-i beta_l H_M) exp(-i gamma_l H_C) |+>^n`.
pub fn qaoa_state(params: &QaoaParams, diag: &[f64]) -> Result<QuantumRegister, QaoaError> {
    let n = qubits_for(diag)?;
    let mut state = QuantumRegister::uniform(n)?;
    let mut angles = vec![0.0; diag.len()];
    for (gamma, beta) in params.gammas.iter().zip(&params.betas) {
        for (a, e) in angles.iter_mut().zip(diag) {
            *a = gamma * e;
        }
        state.apply_diagonal_phase(&angles)?;
        state.apply_mixer_rotation(*beta);
    }
    Ok(state)
}

/// `<psi(gamma, beta)| H_C |psi(gamma, beta)>`.
pub fn qaoa_expectation(params: &QaoaParams, diag: &[f64]) -> Result<f64, QaoaError> {
    Ok(qaoa_state(params, diag)?.expectation_diagonal(diag)?)
}

/// Outcome of [`optimize_qaoa`].
#[derive(Debug, Clone, PartialEq)]
pub struct QaoaResult {
    pub best_params: QaoaParams,
    pub best_expectation: f64,
    /// Most probable basis states of the optimised state as
    /// `(index, probability, energy)`, most probable first.
    pub top_states: Vec<(usize, f64, f64)>,
    pub restarts_used: usize,
    /// Final expectation of each restart, in restart order.
    pub restart_expectations: Vec<f64>,
    pub evaluations: usize,
}

/// Minimises the QAOA expectation with Nelder-Mead from `restarts` random
/// starting points, `gamma ~ U[0, 2pi)` and `beta ~ U[0, pi)`.
///
/// Restart `r` draws its starting point from `rng.substream(r)`, so a run
/// with more restarts extends (never reshuffles) a run with fewer. The
/// depth-0 uniform state is kept as a fallback, so the result never
/// exceeds the mean of `diag`.
pub fn optimize_qaoa(
    diag: &[f64],
    p: usize,
    restarts: usize,
    rng: &RandomStream,
    cfg: &SimplexConfig,
) -> Result<QaoaResult, QaoaError> {
    if p == 0 {
        return Err(QaoaError::ZeroDepth);
    }
    if restarts == 0 {
        return Err(QaoaError::ZeroRestarts);
    }
    qubits_for(diag)?;
    cfg.validate()?;

    let runs: Vec<Result<(QaoaParams, f64, usize), QaoaError>> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut s = rng.substream(r as u64);
            let gammas: Vec<f64> = (0..p).map(|_| s.uniform_range(0.0, TAU)).collect();
            let betas: Vec<f64> = (0..p).map(|_| s.uniform_range(0.0, PI)).collect();
            let x0: Vec<f64> = gammas.into_iter().chain(betas).collect();
            let objective = |x: &[f64]| {
                QaoaParams::from_flat(x)
                    .and_then(|params| qaoa_expectation(&params, diag))
                    .unwrap_or(f64::INFINITY)
            };
            let res = simplex_minimize(objective, &x0, cfg)?;
            Ok((QaoaParams::from_flat(&res.x)?, res.f, res.evaluations))
        })
        .collect();

    let mut best = (QaoaParams::empty(), qaoa_expectation(&QaoaParams::empty(), diag)?);
    let mut restart_expectations = Vec::with_capacity(restarts);
    let mut evaluations = 0;
    for run in runs {
        let (params, value, evals) = run?;
        restart_expectations.push(value);
        evaluations += evals;
        if value < best.1 {
            best = (params, value);
        }
    }

    let state = qaoa_state(&best.0, diag)?;
    let mut ranked: Vec<(usize, f64, f64)> = state
        .probabilities()
        .into_iter()
        .enumerate()
        .map(|(x, prob)| (x, prob, diag[x]))
        .collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    ranked.truncate(TOP_STATES);

    Ok(QaoaResult {
        best_params: best.0,
        best_expectation: best.1,
        top_states: ranked,
        restarts_used: restarts,
        restart_expectations,
        evaluations,
    })
}

/// A measured bitstring annotated with its QUBO objective.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedSample {
    pub index: usize,
    pub selection: Vec<bool>,
    pub count: u64,
    pub frequency: f64,
    pub objective: f64,
    /// Exactly `K` bits set.
    pub feasible: bool,
}

/// Samples `shots` bitstrings, groups them, and ranks the distinct strings
/// by objective ascending (ties: lexicographically smallest selection).
pub fn sample_and_rank(
    state: &QuantumRegister,
    shots: u64,
    q: &QuboProblem,
    k: usize,
    rng: &mut RandomStream,
) -> Result<Vec<RankedSample>, QaoaError> {
    let n = q.n_vars();
    if state.dim() != 1usize << n {
        return Err(StateError::LengthMismatch {
            expected: 1usize << n,
            got: state.dim(),
        }
        .into());
    }
    let counts = state.sample_counts(shots, rng)?;
    let mut out: Vec<RankedSample> = counts
        .into_iter()
        .map(|(index, count)| RankedSample {
            index,
            selection: bits_from_index(index, n),
            count,
            frequency: count as f64 / shots as f64,
            objective: q.energy_of_index(index),
            feasible: index.count_ones() as usize == k,
        })
        .collect();
    out.sort_by(|a, b| {
        a.objective
            .total_cmp(&b.objective)
            .then_with(|| a.selection.cmp(&b.selection))
    });
    Ok(out)
}

/// Best cardinality-feasible sample, or the best infeasible one flagged
/// with `false` when nothing feasible was observed.
pub fn best_feasible(ranked: &[RankedSample]) -> Option<(&RankedSample, bool)> {
    ranked
        .iter()
        .find(|s| s.feasible)
        .map(|s| (s, true))
        .or_else(|| ranked.first().map(|s| (s, false)))
}

/// Most frequently observed sample (ties: lower index).
pub fn most_frequent(ranked: &[RankedSample]) -> Option<&RankedSample> {
    ranked
        .iter()
        .max_by(|a, b| a.count.cmp(&b.count).then(b.index.cmp(&a.index)))
}
