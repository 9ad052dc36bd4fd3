//! History field enforcing damage irreversibility.

use super::{MaterialParams, Model};
use crate::constitutive::degradation::pfczm_a;

/// Minimum fracture driving force for which `phi = 0` is a solution of the
/// phase-field balance.
pub fn driving_force_floor(model: Model, params: &MaterialParams) -> f64 {
    let (gc, ell) = (params.toughness, params.length_scale);
    match model {
        Model::At2 => 0.0,
        Model::At1 => 3.0 * gc / (16.0 * ell),
        Model::PfczmLinear | Model::PfczmExponential => {
            let ft = params.strength.unwrap_or(f64::NAN);
            let a = pfczm_a(params.youngs, gc, ft, ell);
            2.0 * gc / (std::f64::consts::PI * a * ell)
        }
    }
}

/// `H = max(H_prev, psi_plus, H_min)`
pub fn update_history(previous: f64, psi_plus: f64, floor: f64) -> f64 {
    previous.max(psi_plus).max(floor)
}

/// Per-quadrature-point history values.
#[derive(Debug, Clone, PartialEq)]
pub struct HistoryField {
    values: Vec<f64>,
    floor: f64,
}

impl HistoryField {
    /// Every point starts at the floor.
    pub fn new(points: usize, floor: f64) -> Self {
        Self { values: vec![floor; points], floor }
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn update(&mut self, point: usize, psi_plus: f64) -> f64 {
        let h = update_history(self.values[point], psi_plus, self.floor);
        self.values[point] = h;
        h
    }

    /// Applies `update` pointwise against a candidate driving-force field.
    pub fn update_all(&mut self, psi_plus: &[f64]) {
        for (h, &p) in self.values.iter_mut().zip(psi_plus) {
            *h = update_history(*h, p, self.floor);
        }
    }
}
