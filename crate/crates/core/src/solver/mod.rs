//! Load stepping with the decoupled-block "monolithic" and single-pass
//! staggered schemes.
//!
//! Both schemes iterate alternating symmetric solves of the displacement and
//! phase-field blocks; neither is a full Newton method because the coupling
//! blocks are dropped. They differ only in which history field the
//! phase-field block sees during an increment.

mod linear;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::assembly::{apply_dirichlet, u_dof, Assembler, AssemblyError, Constraints, PhasePath, SparseSystem};
use crate::constitutive::{update_history, HistoryField, Material};
use crate::mesh::Mesh;

pub use linear::{linear_solve, Definiteness, LinearSolution, LinearSolver, LINEAR_TOLERANCE};

/// Absolute residual floor used with the relative criterion.
pub const ABSOLUTE_RESIDUAL_FLOOR: f64 = 1e-12;
/// Pre-clamp phase-field excursion that triggers a warning.
pub const OVERSHOOT_WARNING: f64 = 1e-3;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("factorisation hit a zero pivot at DOF {dof}")]
    Singular { dof: usize },
    #[error("matrix is not positive definite (pivot at DOF {dof})")]
    NotPositiveDefinite { dof: usize },
    #[error("linear solver: {0}")]
    Backend(String),
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
    #[error("unknown node set `{0}`")]
    UnknownNodeSet(String),
    #[error("invalid solver configuration: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    /// `H` refreshed from the current strains at every iteration.
    #[default]
    Monolithic,
    /// `H` frozen at the previous converged increment.
    Staggered,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Monolithic => "monolithic",
            Scheme::Staggered => "staggered",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = SolveError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "monolithic" => Ok(Scheme::Monolithic),
            "staggered" => Ok(Scheme::Staggered),
            _ => Err(SolveError::Config(format!("unknown scheme `{s}`"))),
        }
    }
}

/// What to do when an increment does not converge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailurePolicy {
    Abort,
    /// Halve the step up to the given number of times.
    Bisect(u32),
}

impl Default for FailurePolicy {
    fn default() -> Self {
        FailurePolicy::Bisect(4)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    pub scheme: Scheme,
    pub increments: usize,
    pub max_iterations: usize,
    pub tol_u: f64,
    pub tol_phi: f64,
    /// Multiplies the iteration cap by ten.
    pub allow_long_iteration: bool,
    pub on_failure: FailurePolicy,
    pub phase_path: PhasePath,
    /// Assembly worker threads.
    pub threads: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            scheme: Scheme::Monolithic,
            increments: 100,
            max_iterations: 200,
            tol_u: 1e-6,
            tol_phi: 1e-6,
            allow_long_iteration: false,
            on_failure: FailurePolicy::default(),
            phase_path: PhasePath::Direct,
            threads: 1,
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<(), SolveError> {
        let bad = |msg: String| Err(SolveError::Config(msg));
        if self.increments == 0 {
            return bad("increments must be at least 1".into());
        }
        if self.max_iterations == 0 {
            return bad("max_iterations must be at least 1".into());
        }
        for (name, tol) in [("tol_u", self.tol_u), ("tol_phi", self.tol_phi)] {
            if !(tol > 0.0 && tol < 1.0) {
                return bad(format!("{name} = {tol} must lie in (0, 1)"));
            }
        }
        if self.threads == 0 {
            return bad("threads must be at least 1".into());
        }
        Ok(())
    }

    pub fn iteration_cap(&self) -> usize {
        if self.allow_long_iteration {
            self.max_iterations * 10
        } else {
            self.max_iterations
        }
    }
}

/// Field a boundary condition acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dof {
    X,
    Y,
    Phi,
}

impl Dof {
    pub fn name(self) -> &'static str {
        match self {
            Dof::X => "x",
            Dof::Y => "y",
            Dof::Phi => "phi",
        }
    }
}

impl FromStr for Dof {
    type Err = SolveError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "x" => Ok(Dof::X),
            "y" => Ok(Dof::Y),
            "phi" => Ok(Dof::Phi),
            _ => Err(SolveError::Config(format!("unknown dof `{s}` (expected x, y or phi)"))),
        }
    }
}

/// Prescribed value as a function of the load factor `t` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Schedule {
    Fixed(f64),
    /// Linear ramp from zero to the given value at `t = 1`.
    Ramp(f64),
}

impl Schedule {
    pub fn at(self, t: f64) -> f64 {
        match self {
            Schedule::Fixed(v) => v,
            Schedule::Ramp(v) => t * v,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCondition {
    pub node_set: String,
    pub dof: Dof,
    pub schedule: Schedule,
}

impl BoundaryCondition {
    pub fn fixed(node_set: &str, dof: Dof, value: f64) -> Self {
        Self { node_set: node_set.to_owned(), dof, schedule: Schedule::Fixed(value) }
    }

    pub fn ramp(node_set: &str, dof: Dof, value: f64) -> Self {
        Self { node_set: node_set.to_owned(), dof, schedule: Schedule::Ramp(value) }
    }
}

/// Node set and direction whose reaction force is recorded.
#[derive(Debug, Clone, PartialEq)]
pub struct ReactionSpec {
    pub node_set: String,
    pub dof: Dof,
}

/// Primary fields and history.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub u: Vec<f64>,
    pub phi: Vec<f64>,
    pub history: HistoryField,
    pub increment: usize,
    pub load_factor: f64,
}

/// Outcome of one increment's iterations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncrementStats {
    pub iterations: usize,
    pub converged: bool,
    pub residual_u: f64,
    pub residual_phi: f64,
    /// Largest pre-clamp excursion of `phi` outside `[0, 1]`.
    pub overshoot: f64,
}

/// One recorded increment.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordRow {
    pub increment: usize,
    pub load_factor: f64,
    /// Prescribed value on the reaction set (mm).
    pub applied: f64,
    /// Reaction force on the reaction set (N per unit thickness).
    pub reaction: f64,
    pub iterations: usize,
    pub converged: bool,
    pub residual_u: f64,
    pub residual_phi: f64,
    pub elastic_energy: f64,
    pub fracture_energy: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunRecord {
    pub rows: Vec<RecordRow>,
}

impl RunRecord {
    pub fn converged(&self) -> bool {
        self.rows.iter().all(|r| r.converged)
    }

    /// Largest absolute reaction and the row it occurs in.
    pub fn peak(&self) -> Option<(usize, f64)> {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| (i, r.reaction.abs()))
            .fold(None, |best, (i, f)| match best {
                Some((_, b)) if b >= f => best,
                _ => Some((i, f)),
            })
    }

    /// Trapezoidal external work `int F du` along the recorded path.
    pub fn external_work(&self) -> f64 {
        let mut w = 0.0;
        let (mut f0, mut u0) = (0.0, 0.0);
        for r in &self.rows {
            w += 0.5 * (r.reaction + f0) * (r.applied - u0);
            f0 = r.reaction;
            u0 = r.applied;
        }
        w
    }
}

/// Result of a full run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub record: RunRecord,
    pub state: State,
    pub aborted: bool,
}

struct ResolvedBc {
    dofs: Vec<usize>,
    phase: bool,
    schedule: Schedule,
}

fn at_active_bound(phi: f64, r: f64) -> bool {
    (phi <= 0.0 && r > 0.0) || (phi >= 1.0 && r < 0.0)
}

/// Free phase-field nodes held at a bound whose residual pushes them
/// further out of `[0, 1]`.
fn bound_active<'c>(c: &'c Constraints, phi: &'c [f64], r: &'c [f64]) -> impl Iterator<Item = usize> + 'c {
    (0..phi.len()).filter(move |&i| !c.is_constrained(i) && at_active_bound(phi[i], r[i]))
}

/// Phase-field residual norm over free nodes that are not bound-active.
fn projected_norm(c: &Constraints, phi: &[f64], r: &[f64]) -> f64 {
    (0..phi.len())
        .filter(|&i| !c.is_constrained(i) && !at_active_bound(phi[i], r[i]))
        .map(|i| r[i] * r[i])
        .sum::<f64>()
        .sqrt()
}

/// A mesh, a material and boundary conditions, ready to be stepped.
pub struct Solver<'a> {
    mesh: &'a Mesh,
    material: Material,
    config: SolveConfig,
    assembler: Assembler,
    bcs: Vec<ResolvedBc>,
    reaction_dofs: Vec<usize>,
    reaction_bc: Option<usize>,
    lin_u: LinearSolver,
    lin_phi: LinearSolver,
    pool: rayon::ThreadPool,
}

impl<'a> Solver<'a> {
    pub fn new(
        mesh: &'a Mesh,
        material: Material,
        bcs: &[BoundaryCondition],
        reaction: Option<&ReactionSpec>,
        config: SolveConfig,
    ) -> Result<Self, SolveError> {
        config.validate()?;
        let set = |name: &str| mesh.node_set(name).ok_or_else(|| SolveError::UnknownNodeSet(name.to_owned()));
        let mut resolved = Vec::with_capacity(bcs.len());
        for bc in bcs {
            let nodes = set(&bc.node_set)?;
            let (dofs, phase) = match bc.dof {
                Dof::X => (nodes.iter().map(|&n| u_dof(n, 0)).collect(), false),
                Dof::Y => (nodes.iter().map(|&n| u_dof(n, 1)).collect(), false),
                Dof::Phi => (nodes.to_vec(), true),
            };
            resolved.push(ResolvedBc { dofs, phase, schedule: bc.schedule });
        }
        let (mut reaction_dofs, mut reaction_bc) = (Vec::new(), None);
        if let Some(r) = reaction {
            if r.dof == Dof::Phi {
                return Err(SolveError::Config("reaction forces are only defined for x or y".into()));
            }
            let c = if r.dof == Dof::X { 0 } else { 1 };
            reaction_dofs = set(&r.node_set)?.iter().map(|&n| u_dof(n, c)).collect();
            reaction_bc = bcs.iter().position(|b| b.node_set == r.node_set && b.dof == r.dof);
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| SolveError::Config(format!("thread pool: {e}")))?;
        let solver = Self {
            mesh,
            material,
            assembler: Assembler::new(mesh),
            bcs: resolved,
            reaction_dofs,
            reaction_bc,
            lin_u: LinearSolver::new(Definiteness::Positive),
            lin_phi: LinearSolver::new(Definiteness::Indefinite),
            config,
            pool,
        };
        // duplicates with different values surface here rather than mid-run
        solver.constraints(1.0)?;
        solver.constraints(0.5)?;
        Ok(solver)
    }

    pub fn mesh(&self) -> &Mesh {
        self.mesh
    }

    pub fn material(&self) -> &Material {
        &self.material
    }

    pub fn config(&self) -> &SolveConfig {
        &self.config
    }

    pub fn assembler(&self) -> &Assembler {
        &self.assembler
    }

    pub fn initial_state(&self) -> State {
        let n = self.mesh.node_count();
        State {
            u: vec![0.0; 2 * n],
            phi: vec![0.0; n],
            history: HistoryField::new(self.mesh.quadrature_point_count(), self.material.floor),
            increment: 0,
            load_factor: 0.0,
        }
    }

    /// Displacement and phase-field constraints at load factor `t`.
    pub fn constraints(&self, t: f64) -> Result<(Constraints, Constraints), SolveError> {
        let n = self.mesh.node_count();
        let mut u_pairs = Vec::new();
        let mut p_pairs = Vec::new();
        for bc in &self.bcs {
            let v = bc.schedule.at(t);
            let target = if bc.phase { &mut p_pairs } else { &mut u_pairs };
            target.extend(bc.dofs.iter().map(|&d| (d, v)));
        }
        Ok((Constraints::new(2 * n, u_pairs)?, Constraints::new(n, p_pairs)?))
    }

    /// Prescribed value on the reaction set at load factor `t`.
    pub fn applied(&self, t: f64) -> f64 {
        self.reaction_bc.map_or(t, |i| self.bcs[i].schedule.at(t))
    }

    /// Sum of the internal force over the reaction DOFs.
    pub fn reaction(&self, system: &SparseSystem) -> f64 {
        self.reaction_dofs.iter().map(|&d| system.r_u[d]).sum()
    }

    /// Assembles at the given state with the scheme's history policy.
    pub fn assemble(&self, state: &State, scheme: Scheme) -> Result<SparseSystem, SolveError> {
        let history = self.effective_history(state, scheme)?;
        let sys = self.pool.install(|| {
            self.assembler.assemble(self.mesh, &self.material, &state.u, &state.phi, &history, self.config.phase_path)
        })?;
        Ok(sys)
    }

    fn effective_history(&self, state: &State, scheme: Scheme) -> Result<Vec<f64>, SolveError> {
        let conv = state.history.values();
        match scheme {
            Scheme::Staggered => Ok(conv.to_vec()),
            Scheme::Monolithic => {
                let psi = self.pool.install(|| self.assembler.driving_forces(self.mesh, &self.material, &state.u))?;
                let floor = state.history.floor();
                Ok(conv.iter().zip(&psi).map(|(&h, &p)| update_history(h, p, floor)).collect())
            }
        }
    }

    fn commit_history(&self, state: &mut State) -> Result<(), SolveError> {
        let psi = self.pool.install(|| self.assembler.driving_forces(self.mesh, &self.material, &state.u))?;
        state.history.update_all(&psi);
        Ok(())
    }

    /// Iterates one increment to load factor `t` with the "monolithic"
    /// scheme.
    pub fn solve_increment_monolithic(&mut self, state: &mut State, t: f64) -> Result<IncrementStats, SolveError> {
        self.iterate(state, t, Scheme::Monolithic)
    }

    /// Iterates one increment to load factor `t` with `H` frozen.
    pub fn solve_increment_staggered(&mut self, state: &mut State, t: f64) -> Result<IncrementStats, SolveError> {
        self.iterate(state, t, Scheme::Staggered)
    }

    /// Iterates one increment with the configured scheme. On convergence the
    /// history field is committed; otherwise the state holds the last
    /// iterate and the history is untouched.
    pub fn solve_increment(&mut self, state: &mut State, t: f64) -> Result<IncrementStats, SolveError> {
        self.iterate(state, t, self.config.scheme)
    }

    fn iterate(&mut self, state: &mut State, t: f64, scheme: Scheme) -> Result<IncrementStats, SolveError> {
        let (cu, cp) = self.constraints(t)?;
        for &d in cu.dofs() {
            state.u[d] = cu.value(d);
        }
        for &d in cp.dofs() {
            state.phi[d] = cp.value(d);
        }
        let hu = cu.homogeneous();
        let cap = self.config.iteration_cap();
        let (mut r0u, mut r0p) = (0.0, 0.0);
        let mut overshoot = 0.0f64;
        let mut stats = IncrementStats { iterations: 0, converged: false, residual_u: f64::NAN, residual_phi: f64::NAN, overshoot };
        for it in 1..=cap {
            let mut sys = self.assemble(state, scheme)?;
            let ru = cu.free_norm(&sys.r_u);
            let rp = projected_norm(&cp, &state.phi, &sys.r_phi);
            if it == 1 {
                (r0u, r0p) = (ru, rp);
            }
            stats = IncrementStats { iterations: it, converged: false, residual_u: ru, residual_phi: rp, overshoot };
            log::trace!("load factor {t:.6} iteration {it}: |r_u| = {ru:.3e}, |r_phi| = {rp:.3e}");
            if !(ru.is_finite() && rp.is_finite()) {
                return Ok(stats);
            }
            let done = |r: f64, r0: f64, tol: f64| r <= ABSOLUTE_RESIDUAL_FLOOR || r <= tol * r0;
            if done(ru, r0u, self.config.tol_u) && done(rp, r0p, self.config.tol_phi) {
                stats.converged = true;
                break;
            }
            let mut rhs_u: Vec<f64> = sys.r_u.iter().map(|v| -v).collect();
            let mut rhs_p: Vec<f64> = sys.r_phi.iter().map(|v| -v).collect();
            apply_dirichlet(&mut sys.k_uu, &mut rhs_u, &hu)?;
            let hp = Constraints::new(
                cp.size(),
                cp.dofs().iter().copied().chain(bound_active(&cp, &state.phi, &sys.r_phi)).map(|d| (d, 0.0)),
            )?;
            apply_dirichlet(&mut sys.k_phi, &mut rhs_p, &hp)?;
            let du = self.lin_u.solve(&sys.k_uu, &rhs_u)?;
            let dp = self.lin_phi.solve(&sys.k_phi, &rhs_p)?;
            for (u, d) in state.u.iter_mut().zip(&du.x) {
                *u += d;
            }
            for (p, d) in state.phi.iter_mut().zip(&dp.x) {
                let raw = *p + d;
                overshoot = overshoot.max(-raw).max(raw - 1.0);
                *p = raw.clamp(0.0, 1.0);
            }
        }
        stats.overshoot = overshoot.max(0.0);
        if stats.overshoot > OVERSHOOT_WARNING {
            log::warn!("phase field left [0, 1] by {:.3e} before clamping at load factor {t:.6}", stats.overshoot);
        }
        if stats.converged {
            self.commit_history(state)?;
            state.load_factor = t;
        }
        Ok(stats)
    }

    /// Steps from `state.load_factor` to `t`, bisecting on failure.
    fn advance(&mut self, state: &mut State, t: f64, depth: u32) -> Result<(IncrementStats, usize), SolveError> {
        let start = state.clone();
        let stats = self.solve_increment(state, t)?;
        if stats.converged {
            return Ok((stats, stats.iterations));
        }
        let max_depth = match self.config.on_failure {
            FailurePolicy::Abort => 0,
            FailurePolicy::Bisect(n) => n,
        };
        if depth >= max_depth {
            return Ok((stats, stats.iterations));
        }
        *state = start;
        let mid = 0.5 * (state.load_factor + t);
        log::info!("increment to load factor {t:.6} did not converge; bisecting at {mid:.6}");
        let (first, n1) = self.advance(state, mid, depth + 1)?;
        let spent = stats.iterations + n1;
        if !first.converged {
            return Ok((first, spent));
        }
        let (second, n2) = self.advance(state, t, depth + 1)?;
        Ok((second, spent + n2))
    }

    /// Runs the full schedule. `observer` sees every recorded row with the
    /// state it belongs to.
    pub fn run(&mut self, mut observer: impl FnMut(&RecordRow, &State)) -> Result<RunOutcome, SolveError> {
        let mut state = self.initial_state();
        let mut record = RunRecord::default();
        let n = self.config.increments;
        for k in 1..=n {
            let t = k as f64 / n as f64;
            let (stats, iterations) = self.advance(&mut state, t, 0)?;
            state.increment = k;
            let sys = self.assemble(&state, Scheme::Staggered)?;
            let (elastic, fracture) =
                self.pool.install(|| self.assembler.energies(self.mesh, &self.material, &state.u, &state.phi))?;
            let row = RecordRow {
                increment: k,
                load_factor: t,
                applied: self.applied(t),
                reaction: self.reaction(&sys),
                iterations,
                converged: stats.converged,
                residual_u: stats.residual_u,
                residual_phi: stats.residual_phi,
                elastic_energy: elastic,
                fracture_energy: fracture,
            };
            observer(&row, &state);
            record.rows.push(row);
            if !stats.converged {
                log::error!("increment {k} did not converge after {iterations} iterations; aborting");
                return Ok(RunOutcome { record, state, aborted: true });
            }
        }
        Ok(RunOutcome { record, state, aborted: false })
    }
}
