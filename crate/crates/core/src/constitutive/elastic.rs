//! Isotropic linear elasticity and the 2D reductions.

use crate::mesh::Regime;

use super::MaterialError;

pub type Voigt = [f64; 3];
pub type VoigtMatrix = [[f64; 3]; 3];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Elasticity {
    pub youngs: f64,
    pub poisson: f64,
    pub lambda: f64,
    pub mu: f64,
    /// Bulk modulus `lambda + 2 mu / 3`.
    pub bulk: f64,
    pub regime: Regime,
}

pub fn elastic_tensor(youngs: f64, poisson: f64, regime: Regime) -> Result<Elasticity, MaterialError> {
    if !(youngs > 0.0) {
        return Err(MaterialError::OutOfRange { name: "E", value: youngs });
    }
    if !(poisson > -1.0 && poisson < 0.5) {
        return Err(MaterialError::OutOfRange { name: "nu", value: poisson });
    }
    let lambda = youngs * poisson / ((1.0 + poisson) * (1.0 - 2.0 * poisson));
    let mu = youngs / (2.0 * (1.0 + poisson));
    Ok(Elasticity { youngs, poisson, lambda, mu, bulk: lambda + 2.0 * mu / 3.0, regime })
}

impl Elasticity {
    /// In-plane stiffness `C0` in Voigt form.
    pub fn voigt_matrix(&self) -> VoigtMatrix {
        let (l, m) = (self.lambda, self.mu);
        match self.regime {
            Regime::PlaneStrain => [[l + 2.0 * m, l, 0.0], [l, l + 2.0 * m, 0.0], [0.0, 0.0, m]],
            Regime::PlaneStress => {
                let f = self.youngs / (1.0 - self.poisson * self.poisson);
                let nu = self.poisson;
                [[f, f * nu, 0.0], [f * nu, f, 0.0], [0.0, 0.0, f * (1.0 - nu) / 2.0]]
            }
        }
    }

    /// Factor `s` with `eps_zz = s (eps_xx + eps_yy)`.
    pub fn out_of_plane_factor(&self) -> f64 {
        match self.regime {
            Regime::PlaneStrain => 0.0,
            Regime::PlaneStress => -self.lambda / (self.lambda + 2.0 * self.mu),
        }
    }

    pub fn out_of_plane_strain(&self, eps: &Voigt) -> f64 {
        self.out_of_plane_factor() * (eps[0] + eps[1])
    }

    /// Undamaged in-plane stress `C0 : eps`.
    pub fn stress(&self, eps: &Voigt) -> Voigt {
        mat_vec(&self.voigt_matrix(), eps)
    }

    /// Undamaged out-of-plane stress (zero under plane stress).
    pub fn stress_zz(&self, eps: &Voigt) -> f64 {
        match self.regime {
            Regime::PlaneStress => 0.0,
            Regime::PlaneStrain => self.lambda * (eps[0] + eps[1]),
        }
    }

    /// `psi_0 = eps : C0 : eps / 2`
    pub fn energy(&self, eps: &Voigt) -> f64 {
        let s = self.stress(eps);
        0.5 * (s[0] * eps[0] + s[1] * eps[1] + s[2] * eps[2])
    }
}

pub(crate) fn mat_vec(m: &VoigtMatrix, v: &Voigt) -> Voigt {
    let mut out = [0.0; 3];
    for i in 0..3 {
        out[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
    }
    out
}
