//! Integration of the closed-loop dynamics and consensus detection.
//!
//! Linear runs `ẋ = -M x` use the spectral solution; the nonlinear model
//! `ẋ = -M h(x)` applies a per-cluster monotone map and is integrated with
//! fixed-step RK4. Consensus is detected from the tail of a trajectory, and
//! the Lyapunov functional of the nonlinear model can be evaluated along it.

use crate::graph::ClusterPartition;
use crate::linalg::{self, SymmetricMatrix};
use crate::verification::{self, VerificationError};
use rand::SeedableRng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;
use std::io::Write;
use thiserror::Error;

pub const DEFAULT_DT: f64 = 1e-3;
pub const DEFAULT_T_END: f64 = 10.0;
pub const DEFAULT_CONSENSUS_TOL: f64 = 1e-6;
/// Length of the trailing window over which consensus must hold.
pub const DEFAULT_WINDOW: f64 = 1.0;
/// Abort integration when the state max-norm exceeds this.
pub const DIVERGENCE_LIMIT: f64 = 1e12;
/// Target accuracy of the adaptive Simpson quadrature.
pub const QUADRATURE_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("requested times must be finite and strictly increasing")]
    InvalidTimes,
    #[error("step size and horizon must be positive (dt = {dt}, t_end = {t_end})")]
    InvalidStep { dt: f64, t_end: f64 },
    #[error("state diverged at t = {t} (max-norm {norm})")]
    Diverged { t: f64, norm: f64 },
    #[error("state vector has {got} entries, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("profile has {got} functions for {expected} clusters")]
    ProfileMismatch { expected: usize, got: usize },
    #[error("detection window {window} exceeds the trajectory span {span}")]
    WindowTooLong { window: f64, span: f64 },
    #[error("trajectory is empty")]
    EmptyTrajectory,
    #[error(
        "target value {value} is outside the range of the {function} nonlinearity; \
         the linear steady state has no preimage"
    )]
    RangeExceeded { function: &'static str, value: f64 },
    #[error(transparent)]
    Verification(#[from] VerificationError),
    #[error(transparent)]
    Linalg(#[from] linalg::LinalgError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Registry of admissible scalar nonlinearities: strictly increasing,
/// vanishing at the origin, with diverging primitive. These properties hold
/// analytically for every member; [`admissible_nonlinearity`] re-checks
/// them numerically for arbitrary functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ScalarNonlinearity {
    Identity,
    Tanh,
    Cubic,
    /// `arctan(z + 1) - π/4`: an asymmetric sigmoid through the origin.
    ShiftedArctan,
}

impl ScalarNonlinearity {
    pub fn name(&self) -> &'static str {
        match self {
            ScalarNonlinearity::Identity => "identity",
            ScalarNonlinearity::Tanh => "tanh",
            ScalarNonlinearity::Cubic => "cubic",
            ScalarNonlinearity::ShiftedArctan => "shifted-arctan",
        }
    }

    pub fn eval(&self, z: f64) -> f64 {
        match self {
            ScalarNonlinearity::Identity => z,
            ScalarNonlinearity::Tanh => z.tanh(),
            ScalarNonlinearity::Cubic => z * z * z,
            ScalarNonlinearity::ShiftedArctan => (z + 1.0).atan() - std::f64::consts::FRAC_PI_4,
        }
    }

    /// Closed-form primitive `∫₀^z h`, when one is implemented; the
    /// Lyapunov evaluation falls back to quadrature otherwise.
    fn primitive(&self, z: f64) -> Option<f64> {
        match self {
            ScalarNonlinearity::Identity => Some(0.5 * z * z),
            ScalarNonlinearity::Tanh => Some(z.cosh().ln()),
            ScalarNonlinearity::Cubic => Some(0.25 * z * z * z * z),
            ScalarNonlinearity::ShiftedArctan => None,
        }
    }

    /// Preimage under the map, when the value lies inside its range.
    pub fn inverse(&self, y: f64) -> Result<f64, SimError> {
        match self {
            ScalarNonlinearity::Identity => Ok(y),
            ScalarNonlinearity::Tanh => {
                if y <= -1.0 || y >= 1.0 {
                    Err(SimError::RangeExceeded {
                        function: self.name(),
                        value: y,
                    })
                } else {
                    Ok(y.atanh())
                }
            }
            ScalarNonlinearity::Cubic => Ok(y.cbrt()),
            ScalarNonlinearity::ShiftedArctan => {
                let shifted = y + std::f64::consts::FRAC_PI_4;
                if shifted <= -std::f64::consts::FRAC_PI_2 || shifted >= std::f64::consts::FRAC_PI_2
                {
                    Err(SimError::RangeExceeded {
                        function: self.name(),
                        value: y,
                    })
                } else {
                    Ok(shifted.tan() - 1.0)
                }
            }
        }
    }
}

impl std::str::FromStr for ScalarNonlinearity {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "identity" => Ok(ScalarNonlinearity::Identity),
            "tanh" => Ok(ScalarNonlinearity::Tanh),
            "cubic" => Ok(ScalarNonlinearity::Cubic),
            "shifted-arctan" => Ok(ScalarNonlinearity::ShiftedArctan),
            other => Err(format!(
                "unknown nonlinearity '{}'; expected identity|tanh|cubic|shifted-arctan",
                other
            )),
        }
    }
}

/// One nonlinearity per cluster, applied entrywise to that cluster's agents.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonlinearProfile {
    functions: Vec<ScalarNonlinearity>,
}

impl NonlinearProfile {
    pub fn new(
        functions: Vec<ScalarNonlinearity>,
        partition: &ClusterPartition,
    ) -> Result<Self, SimError> {
        if functions.len() != partition.num_clusters() {
            return Err(SimError::ProfileMismatch {
                expected: partition.num_clusters(),
                got: functions.len(),
            });
        }
        Ok(NonlinearProfile { functions })
    }

    pub fn uniform(f: ScalarNonlinearity, partition: &ClusterPartition) -> Self {
        NonlinearProfile {
            functions: vec![f; partition.num_clusters()],
        }
    }

    pub fn functions(&self) -> &[ScalarNonlinearity] {
        &self.functions
    }

    pub fn function_for(&self, cluster: usize) -> ScalarNonlinearity {
        self.functions[cluster]
    }

    /// `h(x)`: the per-cluster map applied entrywise.
    pub fn apply(&self, partition: &ClusterPartition, x: &[f64], out: &mut [f64]) {
        for (cluster, f) in self.functions.iter().enumerate() {
            for a in partition.agents(cluster) {
                out[a] = f.eval(x[a]);
            }
        }
    }
}

/// Numerical admissibility check for a scalar map: `h(0) = 0` exactly,
/// strict monotonicity over a sampled grid on `[-range, range]`, and a
/// growth proxy for the diverging-primitive requirement (the increments at
/// the boundary stay bounded away from zero). The proxy cannot prove the
/// integral condition in full generality; registry members satisfy it
/// analytically.
pub fn admissible_nonlinearity(h: impl Fn(f64) -> f64, range: f64, samples: usize) -> bool {
    if samples < 2 || !(range > 0.0) {
        return false;
    }
    if h(0.0) != 0.0 {
        return false;
    }
    let mut prev = h(-range);
    if !prev.is_finite() {
        return false;
    }
    for i in 1..samples {
        let z = -range + 2.0 * range * i as f64 / (samples - 1) as f64;
        let v = h(z);
        if !v.is_finite() || v <= prev {
            return false;
        }
        prev = v;
    }
    // growth proxy: the map keeps separating from interior values
    let margin = (h(range) - h(0.5 * range)).min(h(-0.5 * range) - h(-range));
    margin > 0.0
}

/// Integration method that produced a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    Exact,
    Rk4,
}

/// Time-stamped states of one simulation run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub method: Method,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> Option<&Vec<f64>> {
        self.states.last()
    }

    /// Writes the trajectory as CSV (`t,x_0,...,x_{N-1}`), keeping every
    /// `stride`-th sample plus the final one. Floats are printed in
    /// shortest round-trip form.
    pub fn write_csv(&self, mut out: impl Write, stride: usize) -> std::io::Result<()> {
        let stride = stride.max(1);
        let n = self.states.first().map_or(0, |s| s.len());
        write!(out, "t")?;
        for i in 0..n {
            write!(out, ",x_{}", i)?;
        }
        writeln!(out)?;
        let last = self.len().saturating_sub(1);
        for (idx, (t, state)) in self.times.iter().zip(self.states.iter()).enumerate() {
            if idx % stride != 0 && idx != last {
                continue;
            }
            write!(out, "{}", t)?;
            for v in state {
                write!(out, ",{}", v)?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Evaluates `x(t) = V e^{-Λ t} Vᵀ x₀` at the requested times.
pub fn simulate_linear_exact(
    m: &SymmetricMatrix,
    x0: &[f64],
    times: &[f64],
) -> Result<Trajectory, SimError> {
    if x0.len() != m.n() {
        return Err(SimError::DimensionMismatch {
            expected: m.n(),
            got: x0.len(),
        });
    }
    if times.is_empty()
        || times.iter().any(|t| !t.is_finite())
        || times.windows(2).any(|w| w[1] <= w[0])
    {
        return Err(SimError::InvalidTimes);
    }
    let eig = linalg::sym_eigen(m, linalg::DEFAULT_EIGEN_TOL)?;
    let n = m.n();
    let coeffs: Vec<f64> = (0..n)
        .map(|i| linalg::dot(&eig.vectors.column(i), x0))
        .collect();
    let mut states = Vec::with_capacity(times.len());
    for &t in times {
        let mut x = vec![0.0; n];
        for i in 0..n {
            let w = coeffs[i] * (-eig.values[i] * t).exp();
            if w == 0.0 {
                continue;
            }
            for (xj, v) in x.iter_mut().zip(eig.vectors.column(i)) {
                *xj += w * v;
            }
        }
        states.push(x);
    }
    Ok(Trajectory {
        times: times.to_vec(),
        states,
        method: Method::Exact,
    })
}

/// Fixed-step fourth-order Runge–Kutta on an autonomous field, recording
/// every step from `t = 0` to `t_end`. Integration aborts when the state
/// leaves the divergence guard or turns non-finite.
pub fn simulate_rk4(
    field: impl Fn(&[f64], &mut [f64]),
    x0: &[f64],
    dt: f64,
    t_end: f64,
) -> Result<Trajectory, SimError> {
    if !(dt > 0.0) || t_end < 0.0 || !dt.is_finite() || !t_end.is_finite() {
        return Err(SimError::InvalidStep { dt, t_end });
    }
    let n = x0.len();
    let steps = (t_end / dt).round() as usize;
    let mut x = x0.to_vec();
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(x.clone());
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut work = vec![0.0; n];
    for step in 0..steps {
        field(&x, &mut k1);
        for i in 0..n {
            work[i] = x[i] + 0.5 * dt * k1[i];
        }
        field(&work, &mut k2);
        for i in 0..n {
            work[i] = x[i] + 0.5 * dt * k2[i];
        }
        field(&work, &mut k3);
        for i in 0..n {
            work[i] = x[i] + dt * k3[i];
        }
        field(&work, &mut k4);
        for i in 0..n {
            x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let t = dt * (step + 1) as f64;
        let norm = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if !norm.is_finite() || norm > DIVERGENCE_LIMIT {
            return Err(SimError::Diverged { t, norm });
        }
        times.push(t);
        states.push(x.clone());
    }
    Ok(Trajectory {
        times,
        states,
        method: Method::Rk4,
    })
}

/// The linear field `f(x) = -M x`.
pub fn linear_field(m: &SymmetricMatrix) -> impl Fn(&[f64], &mut [f64]) + '_ {
    move |x, out| {
        let mx = m.matvec(x);
        for (o, v) in out.iter_mut().zip(mx) {
            *o = -v;
        }
    }
}

/// The nonlinear field `f(x) = -M h(x)` with the per-cluster map applied
/// entrywise. With the identity profile this reduces to the linear field.
pub fn nonlinear_field<'a>(
    m: &'a SymmetricMatrix,
    profile: &'a NonlinearProfile,
    partition: &'a ClusterPartition,
) -> impl Fn(&[f64], &mut [f64]) + 'a {
    move |x, out| {
        let mut h = vec![0.0; x.len()];
        profile.apply(partition, x, &mut h);
        let mh = m.matvec(&h);
        for (o, v) in out.iter_mut().zip(mh) {
            *o = -v;
        }
    }
}

/// Verdict on whether, and when, a trajectory reached per-cluster consensus.
#[derive(Debug, Clone, Serialize)]
pub struct ConsensusReport {
    pub reached: bool,
    /// Earliest recorded time after which spreads and drifts stay within
    /// tolerance to the end of the trajectory.
    pub convergence_time: Option<f64>,
    /// Final per-cluster means.
    pub cluster_values: Vec<f64>,
    /// Largest intra-cluster spread over the trailing window.
    pub max_intra_cluster_spread: f64,
    /// Distance to an externally predicted steady state, when one was
    /// supplied.
    pub predicted_match: Option<f64>,
}

impl ConsensusReport {
    /// Records the max-norm distance between the final state and a
    /// predicted steady state.
    pub fn with_prediction(mut self, traj: &Trajectory, predicted: &[f64]) -> Self {
        if let Some(last) = traj.final_state() {
            let dist = last
                .iter()
                .zip(predicted.iter())
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            self.predicted_match = Some(dist);
        }
        self
    }
}

/// Scans a trajectory for per-cluster consensus: over the trailing
/// `window` time units every cluster's intra spread must stay within `tol`
/// and the per-cluster means must not drift by more than `tol` from their
/// final values. The convergence time is the earliest recorded time after
/// which both conditions hold through the end.
pub fn detect_consensus(
    traj: &Trajectory,
    partition: &ClusterPartition,
    tol: f64,
    window: f64,
) -> Result<ConsensusReport, SimError> {
    if traj.is_empty() {
        return Err(SimError::EmptyTrajectory);
    }
    let t_end = *traj.times.last().unwrap();
    let span = t_end - traj.times[0];
    if window > span {
        return Err(SimError::WindowTooLong { window, span });
    }
    let k = partition.num_clusters();
    let final_state = traj.final_state().unwrap();
    let final_means: Vec<f64> = (0..k)
        .map(|c| {
            let agents = partition.agents(c);
            let size = agents.len() as f64;
            agents.map(|a| final_state[a]).sum::<f64>() / size
        })
        .collect();

    // per-sample verdicts against the final means
    let ok_at = |idx: usize| -> (bool, f64) {
        let state = &traj.states[idx];
        let mut max_spread: f64 = 0.0;
        let mut ok = true;
        for c in 0..k {
            let agents: Vec<usize> = partition.agents(c).collect();
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            let mut sum = 0.0;
            for &a in &agents {
                lo = lo.min(state[a]);
                hi = hi.max(state[a]);
                sum += state[a];
            }
            let spread = hi - lo;
            max_spread = max_spread.max(spread);
            let mean = sum / agents.len() as f64;
            if spread > tol || (mean - final_means[c]).abs() > tol {
                ok = false;
            }
        }
        (ok, max_spread)
    };

    // earliest index from which the condition holds to the end
    let mut first_ok = traj.len();
    for idx in (0..traj.len()).rev() {
        if ok_at(idx).0 {
            first_ok = idx;
        } else {
            break;
        }
    }
    let window_start = t_end - window;
    let reached = first_ok < traj.len() && traj.times[first_ok] <= window_start;
    let mut max_spread_in_window: f64 = 0.0;
    for idx in 0..traj.len() {
        if traj.times[idx] >= window_start {
            max_spread_in_window = max_spread_in_window.max(ok_at(idx).1);
        }
    }
    Ok(ConsensusReport {
        reached,
        convergence_time: if first_ok < traj.len() {
            Some(traj.times[first_ok])
        } else {
            None
        },
        cluster_values: final_means,
        max_intra_cluster_spread: max_spread_in_window,
        predicted_match: None,
    })
}

/// Block-constant equilibrium for the nonlinear model: lifts the cluster
/// means, maps them through `h`, projects onto the kernel of `M` (so that
/// `M h(x*) = 0` holds to solver accuracy) and maps back through `h⁻¹`.
/// Fails when the projected value leaves the range of a bounded map.
pub fn consensus_equilibrium(
    kernel_basis: &[Vec<f64>],
    profile: &NonlinearProfile,
    partition: &ClusterPartition,
    cluster_values: &[f64],
) -> Result<Vec<f64>, SimError> {
    let n = partition.num_agents();
    let k = partition.num_clusters();
    if cluster_values.len() != k {
        return Err(SimError::DimensionMismatch {
            expected: k,
            got: cluster_values.len(),
        });
    }
    let mut x_raw = vec![0.0; n];
    for c in 0..k {
        for a in partition.agents(c) {
            x_raw[a] = cluster_values[c];
        }
    }
    let mut y = vec![0.0; n];
    profile.apply(partition, &x_raw, &mut y);
    let mut y_proj = vec![0.0; n];
    for basis in kernel_basis {
        let coeff = linalg::dot(basis, &y);
        for (p, b) in y_proj.iter_mut().zip(basis.iter()) {
            *p += coeff * b;
        }
    }
    let mut x_star = vec![0.0; n];
    for c in 0..k {
        let f = profile.function_for(c);
        for a in partition.agents(c) {
            x_star[a] = f.inverse(y_proj[a])?;
        }
    }
    Ok(x_star)
}

/// Lyapunov functional of the nonlinear model:
/// `V(x) = Σ_clusters Σ_agents ∫_{x*_j}^{x_j} (h_i(z) - h_i(x*_j)) dz`,
/// evaluated through closed-form primitives where available and adaptive
/// Simpson quadrature otherwise. Nonnegative, zero at `x = x*`, and
/// non-increasing along trajectories of `ẋ = -M h(x)` whenever `M` is PSD
/// with `h(x*)` in its kernel.
pub fn lyapunov_value(
    x: &[f64],
    x_star: &[f64],
    profile: &NonlinearProfile,
    partition: &ClusterPartition,
) -> f64 {
    let mut total = 0.0;
    for (cluster, f) in profile.functions().iter().enumerate() {
        for a in partition.agents(cluster) {
            total += lyapunov_term(*f, x_star[a], x[a]);
        }
    }
    total
}

fn lyapunov_term(f: ScalarNonlinearity, from: f64, to: f64) -> f64 {
    if from == to {
        return 0.0;
    }
    match (f.primitive(to), f.primitive(from)) {
        (Some(p_to), Some(p_from)) => p_to - p_from - f.eval(from) * (to - from),
        _ => adaptive_simpson(
            &|z| f.eval(z) - f.eval(from),
            from,
            to,
            QUADRATURE_TOL,
        ),
    }
}

/// Adaptive Simpson quadrature with tolerance halving on each split.
fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &impl Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: usize,
    ) -> f64 {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, left, lm, flm, 0.5 * tol, depth - 1)
            + recurse(f, m, fm, b, fb, right, rm, frm, 0.5 * tol, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, fm, tol, 40)
}

/// Deterministic Gaussian initial condition with mean 0 and standard
/// deviation 2, drawn from a seeded ChaCha stream.
pub fn seeded_initial_state(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, 2.0).expect("valid parameters");
    (0..n).map(|_| normal.sample(&mut rng)).collect()
}

/// Convenience wrapper for steady-state prediction on a PSD closed-loop
/// matrix; see [`verification::predict_steady_state`].
pub fn predicted_limit(m: &SymmetricMatrix, x0: &[f64], tol: f64) -> Result<Vec<f64>, SimError> {
    Ok(verification::predict_steady_state(m, x0, tol)?)
}
