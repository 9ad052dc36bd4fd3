//! Prescribed DOF values by symmetric row and column elimination.

use super::sparse::SymmetricCsc;
use super::AssemblyError;

/// Prescribed values on a subset of the DOFs of one block.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraints {
    mask: Vec<bool>,
    values: Vec<f64>,
    dofs: Vec<usize>,
}

impl Constraints {
    /// Collects `(dof, value)` pairs. Repeats with the same value are merged;
    /// repeats with different values are an error.
    pub fn new(size: usize, pairs: impl IntoIterator<Item = (usize, f64)>) -> Result<Self, AssemblyError> {
        let mut mask = vec![false; size];
        let mut values = vec![0.0; size];
        for (dof, value) in pairs {
            if dof >= size {
                return Err(AssemblyError::DofOutOfRange { dof, count: size });
            }
            if mask[dof] && values[dof] != value {
                return Err(AssemblyError::ConflictingConstraint { dof, first: values[dof], second: value });
            }
            mask[dof] = true;
            values[dof] = value;
        }
        let dofs = (0..size).filter(|&d| mask[d]).collect();
        Ok(Self { mask, values, dofs })
    }

    pub fn none(size: usize) -> Self {
        Self { mask: vec![false; size], values: vec![0.0; size], dofs: Vec::new() }
    }

    pub fn size(&self) -> usize {
        self.mask.len()
    }

    pub fn is_constrained(&self, dof: usize) -> bool {
        self.mask[dof]
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    /// Constrained DOFs in increasing order.
    pub fn dofs(&self) -> &[usize] {
        &self.dofs
    }

    pub fn value(&self, dof: usize) -> f64 {
        self.values[dof]
    }

    /// Same DOFs with every value scaled.
    pub fn scaled(&self, factor: f64) -> Self {
        Self { mask: self.mask.clone(), values: self.values.iter().map(|v| v * factor).collect(), dofs: self.dofs.clone() }
    }

    /// Same DOFs with all values zero.
    pub fn homogeneous(&self) -> Self {
        self.scaled(0.0)
    }

    /// Euclidean norm of `r` restricted to free DOFs.
    pub fn free_norm(&self, r: &[f64]) -> f64 {
        r.iter().zip(&self.mask).filter(|(_, &m)| !m).map(|(v, _)| v * v).sum::<f64>().sqrt()
    }
}

/// Imposes the constraints on `k x = rhs`: the prescribed values are folded
/// into the free right-hand side, constrained rows and columns are zeroed
/// and their diagonal set to one, so the solve returns exactly the
/// prescribed values there. Symmetry is preserved.
pub fn apply_dirichlet(k: &mut SymmetricCsc, rhs: &mut [f64], c: &Constraints) -> Result<(), AssemblyError> {
    if k.dim() != c.size() || rhs.len() != c.size() {
        return Err(AssemblyError::SizeMismatch { what: "constraint size", expected: k.dim(), found: c.size() });
    }
    let (col_ptr, row_idx) = (k.col_ptr().to_vec(), k.row_idx().to_vec());
    let values = k.values_mut();
    for &j in c.dofs() {
        let v = c.value(j);
        if v != 0.0 {
            for p in col_ptr[j]..col_ptr[j + 1] {
                let i = row_idx[p];
                if !c.is_constrained(i) {
                    rhs[i] -= values[p] * v;
                }
            }
        }
    }
    for j in 0..c.size() {
        for p in col_ptr[j]..col_ptr[j + 1] {
            let i = row_idx[p];
            if c.is_constrained(i) || c.is_constrained(j) {
                values[p] = if i == j { 1.0 } else { 0.0 };
            }
        }
    }
    for &j in c.dofs() {
        rhs[j] = c.value(j);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conflicting_duplicates_are_rejected() {
        assert!(Constraints::new(3, [(1, 0.5), (1, 0.5)]).is_ok());
        let err = Constraints::new(3, [(1, 0.5), (1, 0.25)]).unwrap_err();
        assert!(matches!(err, AssemblyError::ConflictingConstraint { dof: 1, .. }));
        assert!(matches!(Constraints::new(3, [(3, 0.0)]), Err(AssemblyError::DofOutOfRange { .. })));
    }

    #[test]
    fn two_node_bar() {
        // k = [[1, -1], [-1, 1]], left fixed, right prescribed
        let mut k = SymmetricCsc::from_triplets(2, &[(0, 0, 1.0), (1, 1, 1.0), (1, 0, -1.0)]);
        let mut rhs = vec![0.0, 0.0];
        let c = Constraints::new(2, [(0, 0.0), (1, 0.3)]).unwrap();
        apply_dirichlet(&mut k, &mut rhs, &c).unwrap();
        assert_eq!(k.to_dense(), vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(rhs, vec![0.0, 0.3]);
    }

    #[test]
    fn interior_node_of_three_node_bar() {
        let t = [(0, 0, 1.0), (1, 1, 2.0), (2, 2, 1.0), (1, 0, -1.0), (2, 1, -1.0)];
        let mut k = SymmetricCsc::from_triplets(3, &t);
        let mut rhs = vec![0.0; 3];
        let c = Constraints::new(3, [(0, 0.0), (2, 1.0)]).unwrap();
        apply_dirichlet(&mut k, &mut rhs, &c).unwrap();
        // 2 x = 1 at the middle node
        assert_eq!(k.get(1, 1), 2.0);
        assert_eq!(rhs[1], 1.0);
        assert!(k.asymmetry() < 1e-12);
    }
}
