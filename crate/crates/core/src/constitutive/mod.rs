//! Material-point laws: elasticity, degradation, crack geometry, energy
//! splits and the history field.

mod degradation;
mod elastic;
mod geometry;
mod history;
mod split;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::mesh::Regime;

pub use degradation::{exponential_softening, pfczm_a, Degradation, LINEAR_SOFTENING};
pub use elastic::{elastic_tensor, Elasticity, Voigt, VoigtMatrix};
pub use geometry::{crack_geometry, normalisation, CrackGeometry};
pub use history::{driving_force_floor, update_history, HistoryField};
pub use split::{active_energy, active_energy_3d, active_parts, split_energy, split_stress_and_tangent, ActiveParts, COALESCENCE_TOL};

/// Default residual stiffness.
pub const DEFAULT_KAPPA: f64 = 1e-7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MaterialError {
    #[error("material parameter {name} = {value} is out of range")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("the PF-CZM models need a tensile strength `ft`")]
    MissingStrength,
    #[error("forbidden model combination: {0}")]
    ForbiddenCombination(String),
    #[error("unknown {what} `{value}`")]
    Unknown { what: &'static str, value: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    At1,
    At2,
    PfczmLinear,
    PfczmExponential,
}

impl Model {
    pub fn is_pfczm(self) -> bool {
        matches!(self, Model::PfczmLinear | Model::PfczmExponential)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Split {
    Isotropic,
    VolDev,
    Spectral,
    PfczmStress,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Formulation {
    Hybrid,
    Anisotropic,
}

macro_rules! named_enum {
    ($ty:ident, $what:literal, { $($variant:ident => $name:literal),* $(,)? }) => {
        impl $ty {
            pub fn name(self) -> &'static str {
                match self { $($ty::$variant => $name),* }
            }
        }
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }
        impl FromStr for $ty {
            type Err = MaterialError;
            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($name => Ok($ty::$variant),)*
                    _ => Err(MaterialError::Unknown { what: $what, value: s.to_owned() }),
                }
            }
        }
    };
}

named_enum!(Model, "model", {
    At1 => "at1",
    At2 => "at2",
    PfczmLinear => "pfczm-linear",
    PfczmExponential => "pfczm-exponential",
});
named_enum!(Split, "split", {
    Isotropic => "isotropic",
    VolDev => "voldev",
    Spectral => "spectral",
    PfczmStress => "pfczm-stress",
});
named_enum!(Formulation, "formulation", {
    Hybrid => "hybrid",
    Anisotropic => "anisotropic",
});

/// A validated model/split/formulation triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModelChoice {
    pub model: Model,
    pub split: Split,
    pub formulation: Formulation,
}

impl ModelChoice {
    pub fn new(model: Model, split: Split, formulation: Formulation) -> Result<Self, MaterialError> {
        if split == Split::PfczmStress && !model.is_pfczm() {
            return Err(MaterialError::ForbiddenCombination(format!(
                "split `{split}` requires a PF-CZM model, got `{model}`"
            )));
        }
        if model.is_pfczm() && formulation == Formulation::Anisotropic {
            return Err(MaterialError::ForbiddenCombination(format!(
                "model `{model}` is only used with the hybrid formulation"
            )));
        }
        Ok(Self { model, split, formulation })
    }

    /// All valid combinations.
    pub fn all() -> Vec<ModelChoice> {
        let models = [Model::At1, Model::At2, Model::PfczmLinear, Model::PfczmExponential];
        let splits = [Split::Isotropic, Split::VolDev, Split::Spectral, Split::PfczmStress];
        let forms = [Formulation::Hybrid, Formulation::Anisotropic];
        let mut out = Vec::new();
        for m in models {
            for s in splits {
                for f in forms {
                    if let Ok(c) = ModelChoice::new(m, s, f) {
                        out.push(c);
                    }
                }
            }
        }
        out
    }
}

/// Material constants in mm-N-MPa units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParams {
    /// Young's modulus `E` (MPa).
    pub youngs: f64,
    /// Poisson's ratio.
    pub poisson: f64,
    /// Critical energy release rate `G_c` (N/mm).
    pub toughness: f64,
    /// Tensile strength `f_t` (MPa), PF-CZM only.
    pub strength: Option<f64>,
    /// Phase-field length scale `l` (mm).
    pub length_scale: f64,
    /// Residual stiffness `kappa`.
    pub residual_stiffness: f64,
}

impl MaterialParams {
    pub fn validate(&self, model: Model) -> Result<(), MaterialError> {
        let check = |name, value: f64, ok: bool| {
            if ok {
                Ok(())
            } else {
                Err(MaterialError::OutOfRange { name, value })
            }
        };
        check("E", self.youngs, self.youngs > 0.0)?;
        check("nu", self.poisson, self.poisson > -1.0 && self.poisson < 0.5)?;
        check("Gc", self.toughness, self.toughness > 0.0)?;
        check("ell", self.length_scale, self.length_scale > 0.0)?;
        check("kappa", self.residual_stiffness, self.residual_stiffness > 0.0 && self.residual_stiffness < 1e-2)?;
        match (model.is_pfczm(), self.strength) {
            (true, None) => Err(MaterialError::MissingStrength),
            (true, Some(ft)) => check("ft", ft, ft > 0.0),
            (false, _) => Ok(()),
        }
    }
}

/// Everything a material point needs, resolved once per run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material {
    pub params: MaterialParams,
    pub choice: ModelChoice,
    pub elasticity: Elasticity,
    pub degradation: Degradation,
    pub c_w: f64,
    pub floor: f64,
}

impl Material {
    pub fn new(params: MaterialParams, choice: ModelChoice, regime: Regime) -> Result<Self, MaterialError> {
        params.validate(choice.model)?;
        let elasticity = elastic_tensor(params.youngs, params.poisson, regime)?;
        let degradation = Self::degradation_for(choice.model, &params)?;
        Ok(Self {
            params,
            choice,
            elasticity,
            degradation,
            c_w: normalisation(choice.model),
            floor: driving_force_floor(choice.model, &params),
        })
    }

    pub fn degradation_for(model: Model, params: &MaterialParams) -> Result<Degradation, MaterialError> {
        let rational = |(b, d): (f64, f64)| -> Result<Degradation, MaterialError> {
            let ft = params.strength.ok_or(MaterialError::MissingStrength)?;
            let a = pfczm_a(params.youngs, params.toughness, ft, params.length_scale);
            Ok(Degradation::Rational { a, b, d })
        };
        match model {
            Model::At1 | Model::At2 => Ok(Degradation::Quadratic),
            Model::PfczmLinear => rational(LINEAR_SOFTENING),
            Model::PfczmExponential => rational(exponential_softening()),
        }
    }

    pub fn kappa(&self) -> f64 {
        self.params.residual_stiffness
    }

    pub fn degrade(&self, phi: f64) -> (f64, f64, f64) {
        self.degradation.eval(phi)
    }

    pub fn geometry(&self, phi: f64) -> CrackGeometry {
        crack_geometry(self.choice.model, phi)
    }

    pub fn driving_force(&self, eps: &Voigt) -> f64 {
        active_energy(self.choice.split, eps, &self.elasticity)
    }

    /// Degraded stress and tangent at phase-field value `phi`.
    pub fn stress_and_tangent(&self, eps: &Voigt, phi: f64) -> (Voigt, VoigtMatrix) {
        let (g, _, _) = self.degrade(phi);
        split_stress_and_tangent(self.choice.split, self.choice.formulation, eps, g, self.kappa(), &self.elasticity)
            .expect("combination validated by ModelChoice")
    }

    /// Stored elastic energy density at phase-field value `phi`.
    pub fn stored_energy(&self, eps: &Voigt, phi: f64) -> f64 {
        let (g, _, _) = self.degrade(phi);
        let k = g + self.kappa();
        match (self.choice.formulation, self.choice.split) {
            (Formulation::Hybrid, _) | (_, Split::Isotropic) => k * self.elasticity.energy(eps),
            _ => {
                let (p, m) = split_energy(self.choice.split, eps, &self.elasticity);
                k * p + m
            }
        }
    }

    /// Regularised crack surface density `gamma(phi, grad phi)` (1/mm).
    pub fn crack_density(&self, phi: f64, grad: [f64; 2]) -> f64 {
        let ell = self.params.length_scale;
        let w = self.geometry(phi).w;
        (w + ell * ell * (grad[0] * grad[0] + grad[1] * grad[1])) / (4.0 * self.c_w * ell)
    }
}
