//! Interacting particle integrator for eigenvalue flows.
//!
//! Integrates systems of the form
//!
//! ```text
//! dx_i = sigma_i(x_i) dW_i
//!        + [ b(x_i) + sum_{j != i} pair(x_i, x_j) / (x_i - x_j) ] dt
//! ```
//!
//! with Euler-Maruyama proposals under three acceptance checks: strict
//! ordering above a relative gap floor, strict domain membership, and a
//! stiffness guard bounding how far adjacent gaps can move within one
//! substep. A rejected proposal halves the substep (fresh noise each try)
//! down to `dt * 2^-40`; a violation that survives at the floor ends the
//! trajectory with an exit status instead of an error. Exits are values:
//! the dynamics are only defined up to the first collision or domain exit,
//! so the integrator reports that time rather than continuing past it.

mod lamperti;

pub use lamperti::LampertiMap;

use crate::catalog::{CoefficientModel, ModelKind};
use crate::rng::{GaussianStream, TAG_PARTICLES};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ParticleError {
    #[error("positions must be finite and strictly increasing")]
    DegeneratePositions,
    #[error("positions must lie strictly inside the model domain")]
    OutsideDomain,
    #[error("state is not alive")]
    NotAlive,
    #[error("{0}")]
    InvalidParameter(String),
    #[error("sigma must be strictly positive on the grid (sigma({0}) = {1})")]
    SigmaNotPositive(f64, f64),
    #[error("coordinate grid must be strictly increasing with at least 3 points")]
    BadGrid,
    #[error("anchor / positions must lie inside the coordinate grid")]
    OutsideGrid,
    #[error("per-particle diffusion profiles differ; coordinate change needs a shared sigma")]
    NonUniformSigma,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitReason {
    Collision,
    Boundary,
    Explosion,
}

impl ExitReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExitReason::Collision => "collision",
            ExitReason::Boundary => "boundary",
            ExitReason::Explosion => "explosion",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ParticleStatus {
    Alive,
    Exited { reason: ExitReason, at_time: f64 },
}

/// Ordered particle positions at one instant.
#[derive(Clone, Debug, PartialEq)]
pub struct ParticleState {
    positions: Vec<f64>,
    time: f64,
    status: ParticleStatus,
}

impl ParticleState {
    /// Sorting is canonical: labels carry no information, so input order is
    /// irrelevant. Non-finite or coincident positions are rejected.
    pub fn new(mut positions: Vec<f64>, time: f64) -> Result<Self, ParticleError> {
        if positions.is_empty() || positions.iter().any(|x| !x.is_finite()) {
            return Err(ParticleError::DegeneratePositions);
        }
        positions.sort_by(f64::total_cmp);
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ParticleError::DegeneratePositions);
        }
        Ok(Self {
            positions,
            time,
            status: ParticleStatus::Alive,
        })
    }

    /// Ordered jitter `x_i = eps * i / n`, `i = 1..=n`: a numerically
    /// distinct stand-in for a point-mass start at the origin.
    pub fn ordered_jitter(n: usize, eps: f64) -> Self {
        let positions = (1..=n).map(|i| eps * i as f64 / n as f64).collect();
        Self {
            positions,
            time: 0.0,
            status: ParticleStatus::Alive,
        }
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn status(&self) -> ParticleStatus {
        self.status
    }

    pub fn is_alive(&self) -> bool {
        matches!(self.status, ParticleStatus::Alive)
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    fn exited(self, reason: ExitReason) -> Self {
        let at_time = self.time;
        Self {
            status: ParticleStatus::Exited { reason, at_time },
            ..self
        }
    }
}

/// Interaction-plus-drift vector: `b(x_i) + sum_{j != i} pair(x_i, x_j) /
/// (x_i - x_j)`. The kernel is evaluated once per unordered pair, so a
/// symmetric kernel cancels pairwise in the sum exactly.
pub fn drift(state: &ParticleState, model: &CoefficientModel) -> Vec<f64> {
    drift_of(state.positions(), model)
}

fn drift_of(xs: &[f64], model: &CoefficientModel) -> Vec<f64> {
    let n = xs.len();
    let mut out: Vec<f64> = xs.iter().map(|&x| model.b(x)).collect();
    if model.kind() == ModelKind::MatrixEigenvalue {
        // the kernel factorizes as g2(x) h2(y) + g2(y) h2(x); hoist the
        // per-particle factors out of the O(n^2) loop
        let gg: Vec<f64> = xs.iter().map(|&x| model.g(x).unwrap().powi(2)).collect();
        let hh: Vec<f64> = xs.iter().map(|&x| model.h(x).unwrap().powi(2)).collect();
        for i in 0..n {
            for j in i + 1..n {
                let term = (gg[i] * hh[j] + gg[j] * hh[i]) / (xs[i] - xs[j]);
                out[i] += term;
                out[j] -= term;
            }
        }
    } else {
        for i in 0..n {
            for j in i + 1..n {
                let term = model.pair(xs[i], xs[j]) / (xs[i] - xs[j]);
                out[i] += term;
                out[j] -= term;
            }
        }
    }
    out
}

/// Relative collision threshold for an adjacent pair.
#[inline]
fn gap_floor(a: f64, b: f64) -> f64 {
    1e-10 * (1.0 + a.abs() + b.abs())
}

/// Substep-size floor relative to the requested step. Deep enough that the
/// relative gap floor, not the substep floor, decides collisions.
const HALVING_EXP: i32 = -48;
/// Stiffness guard: adjacent gaps may move by at most this fraction per
/// substep under the current drift.
const GAP_MOVE_LIMIT: f64 = 0.4;
/// Noise guard: the diffusion scale per substep may not exceed this
/// fraction of an adjacent gap, so a single substep cannot tunnel a pair
/// far below its current separation.
const NOISE_GAP_LIMIT: f64 = 0.25;
/// Hard cap on proposals per requested step.
const SUBSTEP_BUDGET: u64 = 1 << 22;

/// The coordinate system a step operates in. Direct mode steps the model
/// itself; transformed mode steps unit-diffusion coordinates and maps back.
enum Frame<'a> {
    Direct(&'a CoefficientModel),
    Transformed(&'a CoefficientModel, &'a LampertiMap),
}

impl Frame<'_> {
    fn drift(&self, xs: &[f64]) -> Vec<f64> {
        match self {
            Frame::Direct(model) => drift_of(xs, model),
            Frame::Transformed(model, map) => map.transformed_drift(model, xs),
        }
    }

    fn noise_scale(&self, i: usize, x: f64) -> f64 {
        match self {
            Frame::Direct(model) => model.sigma(i, x),
            Frame::Transformed(..) => 1.0,
        }
    }

    fn bounds(&self) -> (f64, f64) {
        match self {
            Frame::Direct(model) => model.domain(),
            Frame::Transformed(_, map) => map.range(),
        }
    }
}

enum Violation {
    NonFinite,
    Domain,
    Ordering,
    Stiffness,
}

impl Violation {
    fn reason(&self) -> ExitReason {
        match self {
            Violation::NonFinite => ExitReason::Explosion,
            Violation::Domain => ExitReason::Boundary,
            // a gap that cannot move without breaking its floor is a
            // collision witness
            Violation::Ordering | Violation::Stiffness => ExitReason::Collision,
        }
    }
}

fn check_proposal(
    proposal: &[f64],
    current: &[f64],
    drift: &[f64],
    sigmas: &[f64],
    h: f64,
    bounds: (f64, f64),
) -> Option<Violation> {
    if proposal.iter().any(|x| !x.is_finite()) {
        return Some(Violation::NonFinite);
    }
    if proposal.iter().any(|&x| x <= bounds.0 || x >= bounds.1) {
        return Some(Violation::Domain);
    }
    for w in proposal.windows(2) {
        if w[1] - w[0] <= gap_floor(w[0], w[1]) {
            return Some(Violation::Ordering);
        }
    }
    let sqrt_h = h.sqrt();
    for i in 0..current.len().saturating_sub(1) {
        let gap = current[i + 1] - current[i];
        if (drift[i + 1] - drift[i]).abs() * h > GAP_MOVE_LIMIT * gap {
            return Some(Violation::Stiffness);
        }
        let noise = sigmas[i].abs().max(sigmas[i + 1].abs()) * sqrt_h;
        if noise > NOISE_GAP_LIMIT * gap {
            return Some(Violation::Stiffness);
        }
    }
    None
}

/// Advance an alive state by exactly `h`, splitting as needed. Returns the
/// new alive state or an exited one.
fn advance(
    state: ParticleState,
    frame: &Frame,
    h: f64,
    dt_min: f64,
    stream: &mut GaussianStream,
    budget: &mut u64,
) -> ParticleState {
    if *budget == 0 {
        // work bound exhausted: the drift is too stiff to integrate here
        return state.exited(ExitReason::Explosion);
    }
    *budget -= 1;

    let drift = frame.drift(&state.positions);
    if drift.iter().any(|d| !d.is_finite()) {
        return state.exited(ExitReason::Explosion);
    }

    let mut noise = vec![0.0; state.positions.len()];
    stream.fill_step(&mut noise);
    let sqrt_h = h.sqrt();
    let sigmas: Vec<f64> = state
        .positions
        .iter()
        .enumerate()
        .map(|(i, &x)| frame.noise_scale(i, x))
        .collect();
    let proposal: Vec<f64> = state
        .positions
        .iter()
        .enumerate()
        .map(|(i, &x)| x + drift[i] * h + sigmas[i] * sqrt_h * noise[i])
        .collect();

    match check_proposal(&proposal, &state.positions, &drift, &sigmas, h, frame.bounds()) {
        None => ParticleState {
            positions: proposal,
            time: state.time + h,
            status: ParticleStatus::Alive,
        },
        Some(v) if h <= dt_min => {
            #[cfg(feature = "trace-exits")]
            {
                let gaps: Vec<f64> = state.positions.windows(2).map(|w| w[1] - w[0]).collect();
                let min_gap = gaps.iter().cloned().fold(f64::INFINITY, f64::min);
                eprintln!(
                    "exit at h={h:.3e} t={} reason={:?} min_gap={min_gap:.3e} n={}",
                    state.time,
                    v.reason(),
                    state.positions.len()
                );
            }
            state.exited(v.reason())
        }
        Some(_) => {
            let half = advance(state, frame, 0.5 * h, dt_min, stream, budget);
            if !half.is_alive() {
                return half;
            }
            advance(half, frame, 0.5 * h, dt_min, stream, budget)
        }
    }
}

/// One Euler-Maruyama step of size `dt` (internally adaptive).
pub fn step_em(
    state: &ParticleState,
    model: &CoefficientModel,
    dt: f64,
    stream: &mut GaussianStream,
) -> ParticleState {
    step_in_frame(state, &Frame::Direct(model), dt, stream)
}

fn step_in_frame(
    state: &ParticleState,
    frame: &Frame,
    dt: f64,
    stream: &mut GaussianStream,
) -> ParticleState {
    assert!(dt > 0.0, "dt must be positive");
    if !state.is_alive() {
        return state.clone();
    }
    let mut budget = SUBSTEP_BUDGET;
    let dt_min = dt * f64::powi(2.0, HALVING_EXP);
    advance(state.clone(), frame, dt, dt_min, stream, &mut budget)
}

#[derive(Clone, Copy)]
pub enum SimMode<'a> {
    Direct,
    /// Integrate in unit-diffusion coordinates through the given map;
    /// saved snapshots are mapped back to the original coordinates.
    Lamperti(&'a LampertiMap),
}

/// Time-ordered snapshots of one simulated path.
#[derive(Clone, Debug)]
pub struct ParticleTrajectory {
    pub times: Vec<f64>,
    pub snapshots: Vec<ParticleState>,
    pub model_name: String,
    pub seed: u64,
    pub replica: u64,
    pub final_status: ParticleStatus,
}

impl ParticleTrajectory {
    pub fn terminal(&self) -> &ParticleState {
        self.snapshots.last().expect("trajectory holds its start")
    }
}

/// Integrate from `initial` to `t_end`, saving every `save_every`-th step
/// (plus the start and the end). The trajectory stops early at an exit;
/// exited states are never recorded as snapshots.
pub fn simulate(
    model: &CoefficientModel,
    initial: &ParticleState,
    t_end: f64,
    dt: f64,
    save_every: usize,
    seed: u64,
    replica: u64,
    mode: SimMode,
) -> Result<ParticleTrajectory, ParticleError> {
    if !(dt > 0.0) || save_every == 0 {
        return Err(ParticleError::InvalidParameter(
            "dt must be positive and save_every at least 1".into(),
        ));
    }
    if !initial.is_alive() {
        return Err(ParticleError::NotAlive);
    }
    if initial.len() != model.n_particles() {
        return Err(ParticleError::InvalidParameter(format!(
            "initial state has {} particles, model expects {}",
            initial.len(),
            model.n_particles()
        )));
    }
    let (lo, hi) = model.domain();
    if initial.positions.iter().any(|&x| x <= lo || x >= hi) {
        return Err(ParticleError::OutsideDomain);
    }
    if t_end < initial.time {
        return Err(ParticleError::InvalidParameter(
            "t_end lies before the initial time".into(),
        ));
    }

    let mut stream = GaussianStream::new(seed, replica, TAG_PARTICLES);

    // Working state, possibly in transformed coordinates.
    let (frame, mut current) = match mode {
        SimMode::Direct => (Frame::Direct(model), initial.clone()),
        SimMode::Lamperti(map) => {
            let ys = map.forward_all(initial.positions())?;
            let mapped = ParticleState {
                positions: ys,
                time: initial.time,
                status: ParticleStatus::Alive,
            };
            (Frame::Transformed(model, map), mapped)
        }
    };

    let to_physical = |s: &ParticleState| -> ParticleState {
        match mode {
            SimMode::Direct => s.clone(),
            SimMode::Lamperti(map) => ParticleState {
                positions: s.positions.iter().map(|&y| map.inverse(y)).collect(),
                time: s.time,
                status: s.status,
            },
        }
    };

    let mut times = vec![initial.time];
    let mut snapshots = vec![initial.clone()];
    let mut final_status = ParticleStatus::Alive;
    let mut step_index = 0usize;

    while current.time < t_end - 1e-12 * dt.max(1.0) {
        let h = dt.min(t_end - current.time);
        let next = step_in_frame(&current, &frame, h, &mut stream);
        match next.status {
            ParticleStatus::Alive => {
                step_index += 1;
                let done = next.time >= t_end - 1e-12 * dt.max(1.0);
                if step_index % save_every == 0 || done {
                    let snap = to_physical(&next);
                    times.push(snap.time);
                    snapshots.push(snap);
                }
                current = next;
            }
            ParticleStatus::Exited { reason, at_time } => {
                final_status = ParticleStatus::Exited { reason, at_time };
                break;
            }
        }
    }

    Ok(ParticleTrajectory {
        times,
        snapshots,
        model_name: model.name().to_string(),
        seed,
        replica,
        final_status,
    })
}

/// Ordered jitter start for limit experiments, strictly inside the domain
/// of every catalog model.
pub fn default_initial(model: &CoefficientModel) -> ParticleState {
    ParticleState::ordered_jitter(model.n_particles(), 1e-4)
}
