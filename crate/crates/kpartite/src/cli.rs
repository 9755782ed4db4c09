//! Command-line front end: validate / analyze / synthesize / verify /
//! simulate / reproduce, wired for file inputs and CSV outputs.
//!
//! Exit codes: 0 success, 1 validation or assumption failure (including
//! failed reproduction facts), 2 synthesis or numerical failure, 3 I/O or
//! argument errors.

use crate::assumptions::{self, AssumptionError};
use crate::graph::{self, GraphError, SignedClusteredGraph};
use crate::linalg::LinalgError;
use crate::scenarios;
use crate::simulate::{self, NonlinearProfile, ScalarNonlinearity, SimError};
use crate::synthesis::{self, SynthesisError};
use crate::verification::{self, VerificationError};
use clap::{Args, Parser, Subcommand};
use std::io::Write;
use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Synthesis(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Synthesis(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<AssumptionError> for CliError {
    fn from(e: AssumptionError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<SynthesisError> for CliError {
    fn from(e: SynthesisError) -> Self {
        CliError::Synthesis(e.to_string())
    }
}

impl From<VerificationError> for CliError {
    fn from(e: VerificationError) -> Self {
        CliError::Synthesis(e.to_string())
    }
}

impl From<LinalgError> for CliError {
    fn from(e: LinalgError) -> Self {
        CliError::Synthesis(e.to_string())
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Io(io) => CliError::Io(io.to_string()),
            other => CliError::Synthesis(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "kpartite",
    about = "Validate signed clustered graphs, synthesize stubbornness gains, \
             verify the spectral consensus conditions and simulate the dynamics"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the structural requirements on a graph file.
    Validate {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Print the trust/mistrust totals and the cluster ordering.
    Analyze {
        #[arg(long)]
        graph: PathBuf,
        /// Homogeneity tolerance, relative to the largest total.
        #[arg(long, default_value_t = assumptions::DEFAULT_HOMOGENEITY_TOL)]
        tol: f64,
    },
    /// Synthesize per-cluster stubbornness gains.
    Synthesize {
        #[arg(long)]
        graph: PathBuf,
        /// Initial margin for the synthesis loop.
        #[arg(long, default_value_t = synthesis::DEFAULT_MARGIN)]
        q0: f64,
        /// Use the closed form for complete unweighted graphs.
        #[arg(long)]
        complete: bool,
        /// Write the gains as JSON to this path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the spectral consensus conditions for given gains.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        /// Comma-separated gains, one per cluster.
        #[arg(long, value_delimiter = ',', required = true)]
        deltas: Vec<f64>,
        #[arg(long, default_value_t = verification::DEFAULT_KERNEL_TOL)]
        tol: f64,
    },
    /// Integrate the dynamics and report per-cluster consensus.
    Simulate(SimulateArgs),
    /// Run a bundled scenario and check its frozen facts.
    Reproduce {
        /// Scenario id (1-4).
        id: u8,
        /// Seed for the random initial state where one is needed.
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Comma-separated gains, one per cluster.
    #[arg(long, value_delimiter = ',', required = true)]
    pub deltas: Vec<f64>,
    /// Seed for the Gaussian initial state (ignored when --x0 is given).
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// JSON file with a flat list of N initial values.
    #[arg(long)]
    pub x0: Option<PathBuf>,
    #[arg(long, default_value_t = simulate::DEFAULT_DT)]
    pub dt: f64,
    #[arg(long = "t-end", default_value_t = simulate::DEFAULT_T_END)]
    pub t_end: f64,
    #[arg(long, default_value_t = simulate::DEFAULT_CONSENSUS_TOL)]
    pub tol: f64,
    /// exact | rk4 (nonlinear profiles always use rk4).
    #[arg(long, default_value = "exact")]
    pub method: String,
    /// Comma-separated per-cluster nonlinearities
    /// (identity|tanh|cubic|shifted-arctan); a single name is broadcast.
    #[arg(long, value_delimiter = ',')]
    pub profile: Option<Vec<String>>,
    /// Write the trajectory CSV to this path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Keep every n-th recorded sample in the CSV.
    #[arg(long, default_value_t = 10)]
    pub stride: usize,
}

/// Runs a parsed command, writing human-readable output to `out`.
pub fn run(config: &RunConfig, out: &mut impl Write) -> Result<(), CliError> {
    match &config.command {
        Command::Validate { graph } => cmd_validate(graph, out),
        Command::Analyze { graph, tol } => cmd_analyze(graph, *tol, out),
        Command::Synthesize {
            graph,
            q0,
            complete,
            out: out_path,
        } => cmd_synthesize(graph, *q0, *complete, out_path.as_deref(), out),
        Command::Verify { graph, deltas, tol } => cmd_verify(graph, deltas, *tol, out),
        Command::Simulate(args) => cmd_simulate(args, out),
        Command::Reproduce { id, seed } => cmd_reproduce(*id, *seed, out),
    }
}

fn load(path: &std::path::Path) -> Result<SignedClusteredGraph, CliError> {
    Ok(graph::load_graph_file(path)?)
}

fn require_valid(g: &SignedClusteredGraph, out: &mut impl Write) -> Result<(), CliError> {
    let report = graph::validate_structure(g);
    if report.passed() {
        return Ok(());
    }
    for v in &report.violations {
        writeln!(out, "{}", v)?;
    }
    Err(CliError::Validation(format!(
        "{} structural violation(s)",
        report.violations.len()
    )))
}

fn cmd_validate(path: &std::path::Path, out: &mut impl Write) -> Result<(), CliError> {
    let g = load(path)?;
    let report = graph::validate_structure(&g);
    if report.passed() {
        writeln!(
            out,
            "ok: {} agents in {} clusters",
            g.num_agents(),
            g.num_clusters()
        )?;
        Ok(())
    } else {
        for v in &report.violations {
            writeln!(out, "{}", v)?;
        }
        Err(CliError::Validation(format!(
            "{} structural violation(s)",
            report.violations.len()
        )))
    }
}

fn cmd_analyze(path: &std::path::Path, tol: f64, out: &mut impl Write) -> Result<(), CliError> {
    let g = load(path)?;
    require_valid(&g, out)?;
    let trust = assumptions::homogeneity_certificate(&g, tol)?;
    writeln!(out, "trust totals (row i: cluster i's view):")?;
    let k = trust.k();
    for i in 0..k {
        let row: Vec<String> = (0..k).map(|j| format!("{}", trust.get(i, j))).collect();
        writeln!(out, "  c_{},*: [{}]", i + 1, row.join(", "))?;
    }
    let ordering = assumptions::find_ordering(&g)?;
    let order: Vec<String> = ordering.order.iter().map(|c| (c + 1).to_string()).collect();
    writeln!(
        out,
        "ordering: hub = {} exempt = {} order = [{}]",
        ordering.hub() + 1,
        ordering.exempt() + 1,
        order.join(", ")
    )?;
    Ok(())
}

/// Structural test for the complete unweighted form: diagonal blocks
/// `1·1ᵀ - I`, off-diagonal blocks `-1·1ᵀ`.
fn is_complete_unweighted(g: &SignedClusteredGraph) -> bool {
    let partition = g.partition();
    let n = g.num_agents();
    for i in 0..n {
        for j in 0..n {
            let want = if i == j {
                0.0
            } else if partition.cluster_of(i) == partition.cluster_of(j) {
                1.0
            } else {
                -1.0
            };
            if g.weight(i, j) != want {
                return false;
            }
        }
    }
    true
}

fn cmd_synthesize(
    path: &std::path::Path,
    q0: f64,
    complete: bool,
    out_path: Option<&std::path::Path>,
    out: &mut impl Write,
) -> Result<(), CliError> {
    let g = load(path)?;
    require_valid(&g, out)?;
    let gains = if complete {
        if !is_complete_unweighted(&g) {
            return Err(CliError::Validation(
                "closed form requires a complete unweighted graph".into(),
            ));
        }
        synthesis::complete_graph_gains(g.partition().sizes())?
    } else {
        let trust = assumptions::homogeneity_certificate(&g, assumptions::DEFAULT_HOMOGENEITY_TOL)?;
        let ordering = assumptions::find_ordering(&g)?;
        synthesis::synthesize_gains(&g, &trust, &ordering, q0)?
    };
    let deltas: Vec<String> = gains.deltas.iter().map(|d| d.to_string()).collect();
    let margins: Vec<String> = gains.margins.iter().map(|m| m.to_string()).collect();
    let order: Vec<String> = gains
        .ordering_used
        .order
        .iter()
        .map(|c| (c + 1).to_string())
        .collect();
    writeln!(out, "gains: [{}]", deltas.join(", "))?;
    writeln!(out, "margins: [{}]", margins.join(", "))?;
    writeln!(out, "ordering: [{}]", order.join(", "))?;
    if let Some(p) = out_path {
        std::fs::write(p, serde_json::to_string_pretty(&gains).expect("serializable"))
            .map_err(|e| CliError::Io(e.to_string()))?;
    }
    Ok(())
}

fn cmd_verify(
    path: &std::path::Path,
    deltas: &[f64],
    tol: f64,
    out: &mut impl Write,
) -> Result<(), CliError> {
    let g = load(path)?;
    require_valid(&g, out)?;
    let m = verification::closed_loop_matrix(&g, deltas)?;
    let report = verification::analyze_kernel(&m, g.partition(), tol)?;
    writeln!(out, "psd: {}", report.is_psd)?;
    writeln!(out, "min eigenvalue: {}", report.min_eigenvalue)?;
    writeln!(out, "zero multiplicity: {}", report.zero_multiplicity)?;
    writeln!(out, "block-constant kernel: {}", report.block_constant)?;
    for (idx, alpha) in report.alphas.iter().enumerate() {
        let a: Vec<String> = alpha.iter().map(|v| format!("{:.6}", v)).collect();
        writeln!(out, "alpha[{}]: [{}]", idx, a.join(", "))?;
    }
    if let Ok(trust) = assumptions::homogeneity_certificate(&g, assumptions::DEFAULT_HOMOGENEITY_TOL)
    {
        let reduced = verification::reduced_system(&trust, deltas, tol);
        writeln!(
            out,
            "reduced system smallest singular value: {:e}",
            reduced.smallest_singular_value
        )?;
    }
    let consensus_ready =
        report.is_psd && report.zero_multiplicity >= 1 && report.block_constant;
    writeln!(out, "consensus conditions: {}", consensus_ready)?;
    if consensus_ready {
        Ok(())
    } else {
        Err(CliError::Validation(
            "spectral consensus conditions not met".into(),
        ))
    }
}

fn parse_profile(
    names: &[String],
    partition: &crate::graph::ClusterPartition,
) -> Result<NonlinearProfile, CliError> {
    let k = partition.num_clusters();
    let parsed: Result<Vec<ScalarNonlinearity>, String> =
        names.iter().map(|n| n.parse()).collect();
    let mut fns = parsed.map_err(CliError::Io)?;
    if fns.len() == 1 && k > 1 {
        fns = vec![fns[0]; k];
    }
    NonlinearProfile::new(fns, partition).map_err(|e| CliError::Io(e.to_string()))
}

fn load_x0(path: &std::path::Path, n: usize) -> Result<Vec<f64>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(e.to_string()))?;
    let x0: Vec<f64> =
        serde_json::from_str(&text).map_err(|e| CliError::Io(format!("x0 file: {}", e)))?;
    if x0.len() != n {
        return Err(CliError::Io(format!(
            "x0 file has {} entries, expected {}",
            x0.len(),
            n
        )));
    }
    Ok(x0)
}

fn cmd_simulate(args: &SimulateArgs, out: &mut impl Write) -> Result<(), CliError> {
    let g = load(&args.graph)?;
    require_valid(&g, out)?;
    let m = verification::closed_loop_matrix(&g, &args.deltas)?;
    let n = g.num_agents();
    let x0 = match &args.x0 {
        Some(path) => load_x0(path, n)?,
        None => simulate::seeded_initial_state(n, args.seed),
    };
    let profile = match &args.profile {
        Some(names) => Some(parse_profile(names, g.partition())?),
        None => None,
    };
    let traj = match (&profile, args.method.as_str()) {
        (Some(p), method) => {
            if method != "rk4" {
                return Err(CliError::Io(
                    "nonlinear profiles require --method rk4".into(),
                ));
            }
            simulate::simulate_rk4(
                simulate::nonlinear_field(&m, p, g.partition()),
                &x0,
                args.dt,
                args.t_end,
            )?
        }
        (None, "rk4") => {
            simulate::simulate_rk4(simulate::linear_field(&m), &x0, args.dt, args.t_end)?
        }
        (None, "exact") => {
            let steps = (args.t_end / args.dt).round() as usize;
            let times: Vec<f64> = (0..=steps).map(|i| i as f64 * args.dt).collect();
            simulate::simulate_linear_exact(&m, &x0, &times)?
        }
        (None, other) => {
            return Err(CliError::Io(format!(
                "unknown method '{}'; expected exact or rk4",
                other
            )))
        }
    };
    let window = simulate::DEFAULT_WINDOW.min(args.t_end);
    let mut report = simulate::detect_consensus(&traj, g.partition(), args.tol, window)?;
    let mut lyapunov_line = None;
    match &profile {
        None => {
            if let Ok(predicted) =
                verification::predict_steady_state(&m, &x0, verification::DEFAULT_KERNEL_TOL)
            {
                report = report.with_prediction(&traj, &predicted);
            }
        }
        Some(p) => {
            let kernel =
                verification::analyze_kernel(&m, g.partition(), verification::DEFAULT_KERNEL_TOL)?;
            match simulate::consensus_equilibrium(
                &kernel.kernel_basis,
                p,
                g.partition(),
                &report.cluster_values,
            ) {
                Ok(x_star) => {
                    let mut max_rise = f64::NEG_INFINITY;
                    let mut prev = f64::INFINITY;
                    for state in &traj.states {
                        let v = simulate::lyapunov_value(state, &x_star, p, g.partition());
                        if prev.is_finite() {
                            max_rise = max_rise.max(v - prev);
                        }
                        prev = v;
                    }
                    lyapunov_line = Some(format!(
                        "lyapunov non-increasing: {} (max rise {:e})",
                        max_rise <= 1e-9,
                        max_rise
                    ));
                }
                Err(e) => lyapunov_line = Some(format!("lyapunov skipped: {}", e)),
            }
        }
    }
    if let Some(p) = &args.out {
        let file = std::fs::File::create(p).map_err(|e| CliError::Io(e.to_string()))?;
        traj.write_csv(std::io::BufWriter::new(file), args.stride)?;
    }
    writeln!(out, "reached: {}", report.reached)?;
    if let Some(t) = report.convergence_time {
        writeln!(out, "convergence time: {}", t)?;
    }
    let values: Vec<String> = report.cluster_values.iter().map(|v| format!("{:.6}", v)).collect();
    writeln!(out, "cluster values: [{}]", values.join(", "))?;
    writeln!(
        out,
        "max intra-cluster spread: {:e}",
        report.max_intra_cluster_spread
    )?;
    if let Some(d) = report.predicted_match {
        writeln!(out, "distance to predicted steady state: {:e}", d)?;
    }
    if let Some(line) = lyapunov_line {
        writeln!(out, "{}", line)?;
    }
    Ok(())
}

/// One checkable fact of a bundled scenario.
fn fact(out: &mut impl Write, label: &str, pass: bool, failures: &mut usize) {
    let _ = writeln!(out, "{} - {}", if pass { "ok " } else { "FAIL" }, label);
    if !pass {
        *failures += 1;
    }
}

fn cmd_reproduce(id: u8, seed: u64, out: &mut impl Write) -> Result<(), CliError> {
    let mut failures = 0usize;
    match id {
        1 => reproduce_trust_totals(out, &mut failures)?,
        2 => reproduce_tripartite_gains(out, &mut failures)?,
        3 => reproduce_five_cluster_consensus(seed, out, &mut failures)?,
        4 => reproduce_nonlinear_consensus(seed, out, &mut failures)?,
        other => {
            return Err(CliError::Io(format!(
                "unknown scenario {}; expected 1-4",
                other
            )))
        }
    }
    if failures == 0 {
        writeln!(out, "all facts hold")?;
        Ok(())
    } else {
        Err(CliError::Validation(format!("{} fact(s) failed", failures)))
    }
}

fn reproduce_trust_totals(out: &mut impl Write, failures: &mut usize) -> Result<(), CliError> {
    let g = scenarios::seven_agent_tripartite();
    fact(
        out,
        "seven-agent graph passes structural validation",
        graph::validate_structure(&g).passed(),
        failures,
    );
    let trust = assumptions::homogeneity_certificate(&g, assumptions::DEFAULT_HOMOGENEITY_TOL)?;
    let mut all = true;
    for i in 0..3 {
        for j in 0..3 {
            all &= trust.get(i, j) == scenarios::SEVEN_AGENT_TRUST[i][j];
        }
    }
    fact(out, "trust totals match the frozen values", all, failures);
    Ok(())
}

fn reproduce_tripartite_gains(out: &mut impl Write, failures: &mut usize) -> Result<(), CliError> {
    let g = scenarios::seven_agent_tripartite();
    let trust = assumptions::homogeneity_certificate(&g, assumptions::DEFAULT_HOMOGENEITY_TOL)?;
    for d2 in [5.0, 10.0, 100.0] {
        let tableau = synthesis::ScalarTableau::with_deltas(&trust, &[2.0, d2, 0.0])?;
        fact(
            out,
            &format!("last gain is 2 for middle gain {}", d2),
            (tableau.final_gain() - 2.0).abs() <= 1e-12,
            failures,
        );
    }
    let check_kernel = |deltas: [f64; 3], want: [f64; 7]| -> Result<bool, CliError> {
        let m = verification::closed_loop_matrix(&g, &deltas)?;
        let report =
            verification::analyze_kernel(&m, g.partition(), verification::DEFAULT_KERNEL_TOL)?;
        if !(report.is_psd && report.zero_multiplicity == 1) {
            return Ok(false);
        }
        let v = &report.kernel_basis[0];
        let norm = crate::linalg::norm2(&want);
        Ok(v.iter()
            .zip(want.iter())
            .all(|(a, b)| (a - b / norm).abs() < 1e-8))
    };
    fact(
        out,
        "gains (2,5,2) give the (1,1|0,0,0,0|-1) kernel",
        check_kernel([2.0, 5.0, 2.0], [1.0, 1.0, 0.0, 0.0, 0.0, 0.0, -1.0])?,
        failures,
    );
    fact(
        out,
        "gains (3,4,2) give the (0,0|1,1,1,1|-2) kernel",
        check_kernel([3.0, 4.0, 2.0], [0.0, 0.0, 1.0, 1.0, 1.0, 1.0, -2.0])?,
        failures,
    );
    Ok(())
}

fn reproduce_five_cluster_consensus(
    seed: u64,
    out: &mut impl Write,
    failures: &mut usize,
) -> Result<(), CliError> {
    let sizes = scenarios::FIVE_CLUSTER_SIZES;
    let g = graph::build_complete_unweighted(&sizes)?;
    let gains = synthesis::complete_graph_gains(&sizes)?;
    fact(
        out,
        "closed-form gains are (17,25,27,21,13)",
        gains.deltas == vec![17.0, 25.0, 27.0, 21.0, 13.0],
        failures,
    );
    let m = verification::closed_loop_matrix(&g, &gains.deltas)?;
    let report = verification::analyze_kernel(&m, g.partition(), verification::DEFAULT_KERNEL_TOL)?;
    fact(out, "closed-loop matrix is PSD", report.is_psd, failures);
    fact(
        out,
        "kernel dimension is 4",
        report.zero_multiplicity == 4,
        failures,
    );
    let weighted_ok = report.alphas.iter().all(|alpha| {
        alpha
            .iter()
            .zip(sizes.iter())
            .map(|(a, &n)| a * n as f64)
            .sum::<f64>()
            .abs()
            <= 1e-8
    });
    fact(
        out,
        "every kernel direction has zero size-weighted sum",
        weighted_ok,
        failures,
    );
    let x0 = simulate::seeded_initial_state(g.num_agents(), seed);
    let times: Vec<f64> = (1..=600).map(|i| i as f64 * 0.01).collect();
    let traj = simulate::simulate_linear_exact(&m, &x0, &times)?;
    let consensus = simulate::detect_consensus(&traj, g.partition(), 1e-6, 1.0)?;
    fact(out, "five-way consensus is reached", consensus.reached, failures);
    fact(
        out,
        "convergence happens within 2 time units",
        consensus.convergence_time.map_or(false, |t| t < 2.0),
        failures,
    );
    Ok(())
}

fn reproduce_nonlinear_consensus(
    seed: u64,
    out: &mut impl Write,
    failures: &mut usize,
) -> Result<(), CliError> {
    let sizes = scenarios::FOUR_CLUSTER_SIZES;
    let g = graph::build_complete_unweighted(&sizes)?;
    let gains = synthesis::complete_graph_gains(&sizes)?;
    let m = verification::closed_loop_matrix(&g, &gains.deltas)?;
    let profile = NonlinearProfile::uniform(ScalarNonlinearity::Tanh, g.partition());
    let x0 = simulate::seeded_initial_state(g.num_agents(), seed);
    let traj = simulate::simulate_rk4(
        simulate::nonlinear_field(&m, &profile, g.partition()),
        &x0,
        simulate::DEFAULT_DT,
        simulate::DEFAULT_T_END,
    )?;
    let consensus = simulate::detect_consensus(&traj, g.partition(), 1e-4, 1.0)?;
    fact(
        out,
        "final state is cluster-constant within 1e-4",
        consensus.reached,
        failures,
    );
    let kernel = verification::analyze_kernel(&m, g.partition(), verification::DEFAULT_KERNEL_TOL)?;
    let x_star = simulate::consensus_equilibrium(
        &kernel.kernel_basis,
        &profile,
        g.partition(),
        &consensus.cluster_values,
    )?;
    let mut monotone = true;
    let mut prev = f64::INFINITY;
    for state in &traj.states {
        let v = simulate::lyapunov_value(state, &x_star, &profile, g.partition());
        if v > prev + 1e-9 {
            monotone = false;
            break;
        }
        prev = v;
    }
    fact(
        out,
        "Lyapunov value is non-increasing along the run",
        monotone,
        failures,
    );
    Ok(())
}
