//! Closed-form one-dimensional and homogeneous solutions.
//!
//! The oracles ignore the residual stiffness `kappa`.

use crate::constitutive::{normalisation, MaterialParams, Model};

/// Optimal AT2 profile `exp(-|x| / l)`.
pub fn at2_profile(x: f64, ell: f64) -> f64 {
    (-x.abs() / ell).exp()
}

/// Optimal AT1 profile `(1 - |x| / (2 l))^2` on `|x| <= 2 l`, zero outside.
pub fn at1_profile(x: f64, ell: f64) -> f64 {
    let s = 1.0 - x.abs() / (2.0 * ell);
    if s > 0.0 {
        s * s
    } else {
        0.0
    }
}

/// `d phi / dx` of the optimal profile (one-sided at `x = 0`).
pub fn profile_slope(model: Model, x: f64, ell: f64) -> f64 {
    let sign = if x < 0.0 { -1.0 } else { 1.0 };
    match model {
        Model::At2 => -sign * at2_profile(x, ell) / ell,
        Model::At1 => {
            let s = 1.0 - x.abs() / (2.0 * ell);
            if s > 0.0 {
                -sign * s / ell
            } else {
                0.0
            }
        }
        Model::PfczmLinear | Model::PfczmExponential => f64::NAN,
    }
}

/// `phi''` of the optimal profile away from the crack centre.
pub fn profile_curvature(model: Model, x: f64, ell: f64) -> f64 {
    match model {
        Model::At2 => at2_profile(x, ell) / (ell * ell),
        Model::At1 if x.abs() < 2.0 * ell => 1.0 / (2.0 * ell * ell),
        Model::At1 => 0.0,
        Model::PfczmLinear | Model::PfczmExponential => f64::NAN,
    }
}

/// Regularised surface density `(w(phi) / l + l phi'^2) / (4 c_w)` on the
/// optimal profile.
pub fn profile_density(model: Model, x: f64, ell: f64) -> f64 {
    let w = match model {
        Model::At2 => at2_profile(x, ell).powi(2),
        Model::At1 => at1_profile(x, ell),
        Model::PfczmLinear | Model::PfczmExponential => return f64::NAN,
    };
    let d = profile_slope(model, x, ell);
    (w / ell + ell * d * d) / (4.0 * normalisation(model))
}

/// Peak homogeneous AT2 stress `(9/16) sqrt(E G_c / (3 l))`.
pub fn at2_strength(youngs: f64, toughness: f64, ell: f64) -> f64 {
    9.0 / 16.0 * (youngs * toughness / (3.0 * ell)).sqrt()
}

/// Strain at which AT1 damage starts, `sqrt(3 G_c / (8 l E))`.
pub fn at1_threshold_strain(youngs: f64, toughness: f64, ell: f64) -> f64 {
    (3.0 * toughness / (8.0 * ell * youngs)).sqrt()
}

/// One point of a homogeneous uniaxial response.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomogeneousPoint {
    pub strain: f64,
    pub phi: f64,
    pub stress: f64,
}

/// Homogeneous phase field for a driving force `H = E eps^2 / 2`.
pub fn homogeneous_phi(model: Model, params: &MaterialParams, history: f64) -> f64 {
    let (gc, ell) = (params.toughness, params.length_scale);
    match model {
        // -2 (1 - phi) H + (G_c / l) phi = 0
        Model::At2 => 2.0 * history / (gc / ell + 2.0 * history),
        // -2 (1 - phi) H + 3 G_c / (8 l) = 0 above the threshold
        Model::At1 => (1.0 - 3.0 * gc / (16.0 * ell * history)).max(0.0),
        Model::PfczmLinear | Model::PfczmExponential => f64::NAN,
    }
}

/// Uniaxial homogeneous response along a monotone strain path, with
/// `H` taken as the running maximum of `E eps^2 / 2`.
pub fn homogeneous_response(model: Model, params: &MaterialParams, strains: &[f64]) -> Vec<HomogeneousPoint> {
    let e = params.youngs;
    let mut h: f64 = 0.0;
    strains
        .iter()
        .map(|&strain| {
            h = h.max(0.5 * e * strain * strain);
            let phi = homogeneous_phi(model, params, h);
            HomogeneousPoint { strain, phi, stress: (1.0 - phi).powi(2) * e * strain }
        })
        .collect()
}

/// Adaptive Simpson quadrature of `f` on `[a, b]`.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, left, lm, flm, 0.5 * tol, depth - 1)
            + recurse(f, m, fm, b, fb, right, rm, frm, 0.5 * tol, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, fm, tol, 50)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> MaterialParams {
        MaterialParams { youngs: 100.0, poisson: 0.0, toughness: 0.1, strength: None, length_scale: 0.1, residual_stiffness: 1e-7 }
    }

    #[test]
    fn profile_values() {
        assert_eq!(at2_profile(0.0, 0.1), 1.0);
        assert!((at2_profile(0.1, 0.1) - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(at1_profile(0.0, 0.1), 1.0);
        assert_eq!(at1_profile(0.2, 0.1), 0.0);
        assert!((at1_profile(0.1, 0.1) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn strength_value() {
        let s = at2_strength(100.0, 0.1, 0.1);
        assert!((s - 3.247595264191645).abs() < 1e-12, "{s}");
    }

    #[test]
    fn at1_threshold() {
        let eps = at1_threshold_strain(100.0, 0.1, 0.1);
        let p = params();
        assert_eq!(homogeneous_phi(Model::At1, &p, 0.5 * 100.0 * eps * eps * (1.0 - 1e-12)), 0.0);
        assert!(homogeneous_phi(Model::At1, &p, 0.5 * 100.0 * eps * eps * 1.01) > 0.0);
    }

    #[test]
    fn small_strain_modulus() {
        let r = homogeneous_response(Model::At2, &params(), &[1e-8]);
        assert!((r[0].stress / r[0].strain - 100.0).abs() < 1e-6);
    }

    #[test]
    fn profiles_have_unit_energy() {
        for model in [Model::At1, Model::At2] {
            let ell = 0.3;
            let half = integrate(&|x| profile_density(model, x, ell), 0.0, 40.0 * ell, 1e-13);
            assert!((2.0 * half - 1.0).abs() < 1e-9, "{model}: {}", 2.0 * half);
        }
    }

    #[test]
    fn curvature_matches_finite_differences() {
        let (ell, h) = (0.5, 1e-4);
        for model in [Model::At1, Model::At2] {
            let p = |x: f64| if model == Model::At2 { at2_profile(x, ell) } else { at1_profile(x, ell) };
            for x in [0.1, 0.4, 0.7] {
                let fd = (p(x + h) - 2.0 * p(x) + p(x - h)) / (h * h);
                assert!((fd - profile_curvature(model, x, ell)).abs() < 1e-5, "{model} {x}");
            }
        }
    }

    #[test]
    fn quadrature_of_a_polynomial() {
        let v = integrate(&|x| x * x * x, 0.0, 2.0, 1e-12);
        assert!((v - 4.0).abs() < 1e-12);
    }
}
