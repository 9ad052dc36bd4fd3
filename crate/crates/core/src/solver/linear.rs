//! Sparse symmetric direct solves with a cached symbolic analysis.

use faer::dyn_stack::{MemBuffer, MemStack, StackReq};
use faer::linalg::cholesky::ldlt::factor::LdltRegularization;
use faer::linalg::cholesky::llt::factor::LltRegularization;
use faer::sparse::linalg::cholesky::{
    factorize_symbolic_cholesky, CholeskySymbolicParams, SymbolicCholesky, SymbolicCholeskyRaw, SymmetricOrdering,
};
use faer::sparse::linalg::SupernodalThreshold;
use faer::sparse::{SparseColMatRef, SymbolicSparseColMatRef};
use faer::{Conj, MatMut, Par, Side};

use super::SolveError;
use crate::assembly::SymmetricCsc;

/// Required bound on `|K x - b| / |b|`.
pub const LINEAR_TOLERANCE: f64 = 1e-10;
const MAX_REFINEMENTS: usize = 4;

/// What the caller knows about the matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Definiteness {
    /// Symmetric positive definite; `LL^T`, non-positive pivots are errors.
    Positive,
    /// Symmetric, possibly indefinite; `LDL^T`, zero pivots are errors.
    Indefinite,
}

/// Reusable factorisation for a fixed sparsity pattern.
#[derive(Debug)]
pub struct LinearSolver {
    definiteness: Definiteness,
    pattern: Option<(Vec<usize>, Vec<usize>)>,
    symbolic: Option<SymbolicCholesky<usize>>,
    factor: Vec<f64>,
}

/// Solution with its achieved relative residual.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSolution {
    pub x: Vec<f64>,
    pub relative_residual: f64,
    pub refinements: usize,
}

impl LinearSolver {
    pub fn new(definiteness: Definiteness) -> Self {
        Self { definiteness, pattern: None, symbolic: None, factor: Vec::new() }
    }

    fn analyse(&mut self, col_ptr: &[usize], row_idx: &[usize], n: usize) -> Result<(), SolveError> {
        let same = matches!(&self.pattern, Some((c, r)) if c == col_ptr && r == row_idx);
        if same && self.symbolic.is_some() {
            return Ok(());
        }
        let a = SymbolicSparseColMatRef::new_checked(n, n, col_ptr, None, row_idx);
        let params = CholeskySymbolicParams {
            supernodal_flop_ratio_threshold: SupernodalThreshold::FORCE_SUPERNODAL,
            ..Default::default()
        };
        let symbolic = factorize_symbolic_cholesky(a, Side::Lower, SymmetricOrdering::Amd, params)
            .map_err(|e| SolveError::Backend(format!("{e:?}")))?;
        self.factor = vec![0.0; symbolic.len_val()];
        self.symbolic = Some(symbolic);
        self.pattern = Some((col_ptr.to_vec(), row_idx.to_vec()));
        Ok(())
    }

    /// Solves `k x = rhs`, refining iteratively until the residual bound
    /// holds or the refinement budget is spent.
    pub fn solve(&mut self, k: &SymmetricCsc, rhs: &[f64]) -> Result<LinearSolution, SolveError> {
        let n = k.dim();
        if rhs.len() != n {
            return Err(SolveError::Backend(format!("right-hand side has {} entries, matrix is {n} x {n}", rhs.len())));
        }
        if n == 0 {
            return Ok(LinearSolution { x: Vec::new(), relative_residual: 0.0, refinements: 0 });
        }
        // the factorisation reads only the lower triangle of the full pattern
        let (col_ptr, row_idx) = (k.col_ptr(), k.row_idx());
        self.analyse(col_ptr, row_idx, n)?;
        let symbolic = self.symbolic.as_ref().expect("analysed");
        let a = SparseColMatRef::new(SymbolicSparseColMatRef::new_checked(n, n, col_ptr, None, row_idx), k.values());
        let par = Par::Seq;
        let req = StackReq::any_of(&[
            symbolic.factorize_numeric_llt_scratch::<f64>(par, Default::default()),
            symbolic.factorize_numeric_ldlt_scratch::<f64>(par, Default::default()),
            symbolic.solve_in_place_scratch::<f64>(1, par),
        ]);
        let mut mem = MemBuffer::new(req);
        let stack = MemStack::new(&mut mem);
        let definiteness = self.definiteness;
        // simplicial factorisations report one-based pivots, supernodal ones zero-based
        let base = match symbolic.raw() {
            SymbolicCholeskyRaw::Simplicial(_) => 1,
            SymbolicCholeskyRaw::Supernodal(_) => 0,
        };
        let to_dof = |index: usize| {
            let i = index.saturating_sub(base).min(n - 1);
            symbolic.perm().map_or(i, |p| p.arrays().0[i])
        };

        let solve_once = |b: &mut [f64], stack: &mut MemStack, factor: &[f64]| {
            let rhs = MatMut::from_column_major_slice_mut(b, n, 1);
            match definiteness {
                Definiteness::Positive => {
                    faer::sparse::linalg::cholesky::LltRef::<'_, usize, f64>::new(symbolic, factor)
                        .solve_in_place_with_conj(Conj::No, rhs, par, stack)
                }
                Definiteness::Indefinite => {
                    faer::sparse::linalg::cholesky::LdltRef::<'_, usize, f64>::new(symbolic, factor)
                        .solve_in_place_with_conj(Conj::No, rhs, par, stack)
                }
            }
        };

        let factor = &mut self.factor;
        match definiteness {
            Definiteness::Positive => {
                symbolic
                    .factorize_numeric_llt(factor, a, Side::Lower, LltRegularization::default(), par, stack, Default::default())
                    .map_err(|e| match e {
                        faer::linalg::cholesky::llt::factor::LltError::NonPositivePivot { index } => {
                            SolveError::NotPositiveDefinite { dof: to_dof(index) }
                        }
                    })?;
            }
            Definiteness::Indefinite => {
                symbolic
                    .factorize_numeric_ldlt(factor, a, Side::Lower, LdltRegularization::default(), par, stack, Default::default())
                    .map_err(|e| match e {
                        faer::linalg::cholesky::ldlt::factor::LdltError::ZeroPivot { index } => {
                            SolveError::Singular { dof: to_dof(index) }
                        }
                    })?;
            }
        }
        let factor = &self.factor;

        let b_norm = norm(rhs);
        let mut x = rhs.to_vec();
        solve_once(&mut x, stack, factor);
        let mut refinements = 0;
        let mut relative;
        loop {
            let kx = k.matvec(&x);
            let mut r: Vec<f64> = rhs.iter().zip(&kx).map(|(b, v)| b - v).collect();
            relative = if b_norm > 0.0 { norm(&r) / b_norm } else { norm(&r) };
            if !relative.is_finite() {
                return Err(SolveError::Backend("non-finite solution".into()));
            }
            if relative <= LINEAR_TOLERANCE || refinements == MAX_REFINEMENTS {
                break;
            }
            solve_once(&mut r, stack, factor);
            for (xi, di) in x.iter_mut().zip(&r) {
                *xi += di;
            }
            refinements += 1;
        }
        if relative > LINEAR_TOLERANCE {
            log::warn!("linear solve reached relative residual {relative:.3e} after {refinements} refinements");
        }
        Ok(LinearSolution { x, relative_residual: relative, refinements })
    }
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// One-off solve of a symmetric system that may be indefinite.
pub fn linear_solve(k: &SymmetricCsc, rhs: &[f64]) -> Result<Vec<f64>, SolveError> {
    LinearSolver::new(Definiteness::Indefinite).solve(k, rhs).map(|s| s.x)
}
