//! Tension/compression splits of the undamaged strain energy.
//!
//! The 2D strain `(eps_xx, eps_yy, gamma_xy)` is lifted to 3D with the
//! regime's out-of-plane strain before splitting, and gradients are pulled
//! back through that (linear) lift. Under plane stress the reduced energy,
//! stress and tangent are therefore exact derivatives of one another.

use super::elastic::{Elasticity, Voigt, VoigtMatrix};
use super::{Formulation, MaterialError, Split};

/// Relative gap between in-plane principal strains below which the
/// spectral projection is treated as isotropic.
pub const COALESCENCE_TOL: f64 = 1e-10;

type Vec4 = [f64; 4];
type Mat4 = [[f64; 4]; 4];

/// Active energy with its first and second strain derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActiveParts {
    pub psi: f64,
    pub stress: Voigt,
    pub tangent: VoigtMatrix,
    /// Principal strains coalesced; `tangent` is not the exact derivative.
    pub coalesced: bool,
}

fn pos(x: f64) -> f64 {
    x.max(0.0)
}

fn neg(x: f64) -> f64 {
    x.min(0.0)
}

fn step(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else {
        0.0
    }
}

fn lift(eps: &Voigt, el: &Elasticity) -> Vec4 {
    [eps[0], eps[1], el.out_of_plane_strain(eps), eps[2]]
}

fn reduce(g: &Vec4, h: &Mat4, s: f64) -> (Voigt, VoigtMatrix) {
    // P: xx -> (1,0,0), yy -> (0,1,0), zz -> (s,s,0), gamma -> (0,0,1)
    let p = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [s, s, 0.0], [0.0, 0.0, 1.0]];
    let mut stress = [0.0; 3];
    let mut tangent = [[0.0; 3]; 3];
    for i in 0..3 {
        for a in 0..4 {
            stress[i] += p[a][i] * g[a];
            for j in 0..3 {
                for b in 0..4 {
                    tangent[i][j] += p[a][i] * h[a][b] * p[b][j];
                }
            }
        }
    }
    (stress, tangent)
}

fn strain_norm(e: &Vec4) -> f64 {
    (e[0] * e[0] + e[1] * e[1] + e[2] * e[2] + 0.5 * e[3] * e[3]).sqrt()
}

/// In-plane principal values of a symmetric 2x2 tensor `[[a, c], [c, b]]`.
fn principal(a: f64, b: f64, c: f64) -> (f64, f64) {
    let m = 0.5 * (a + b);
    let r = (0.25 * (a - b) * (a - b) + c * c).sqrt();
    (m + r, m - r)
}

/// `sum <e_a>_+^2` over the in-plane principal strains, with its gradient
/// and Hessian with respect to `(a, b, gamma)`.
fn inplane_positive(a: f64, b: f64, gamma: f64, scale: f64) -> (f64, [f64; 3], [[f64; 3]; 3], bool) {
    let c = 0.5 * gamma;
    let m = 0.5 * (a + b);
    let r = (0.25 * (a - b) * (a - b) + c * c).sqrt();
    let (e1, e2) = (m + r, m - r);
    let energy = pos(e1).powi(2) + pos(e2).powi(2);
    if 2.0 * r <= COALESCENCE_TOL * scale {
        // repeated eigenvalue: F = <m>_+ I
        let f = pos(m);
        let grad = [2.0 * f, 2.0 * f, 0.0];
        let k = step(m);
        let hess = [[2.0 * k, 0.0, 0.0], [0.0, 2.0 * k, 0.0], [0.0, 0.0, k]];
        return (energy, grad, hess, true);
    }
    let d = 2.0 * r;
    let (f1, f2) = (pos(e1), pos(e2));
    let (df1, df2) = (step(e1), step(e2));
    let alpha = (f1 - f2) / d;
    let beta = (f2 * e1 - f1 * e2) / d;
    // derivatives with respect to v = (a, b, gamma)
    let dm = [0.5, 0.5, 0.0];
    let dr = [(a - b) / (4.0 * r), -(a - b) / (4.0 * r), c / (2.0 * r)];
    let mut dalpha = [0.0; 3];
    let mut dbeta = [0.0; 3];
    for v in 0..3 {
        let de1 = dm[v] + dr[v];
        let de2 = dm[v] - dr[v];
        let dd = 2.0 * dr[v];
        dalpha[v] = (df1 * de1 - df2 * de2 - alpha * dd) / d;
        dbeta[v] = (df2 * de2 * e1 + f2 * de1 - df1 * de1 * e2 - f1 * de2 - beta * dd) / d;
    }
    let fxx = alpha * a + beta;
    let fyy = alpha * b + beta;
    let fxy = alpha * c;
    let grad = [2.0 * fxx, 2.0 * fyy, 2.0 * fxy];
    let da = [1.0, 0.0, 0.0];
    let db = [0.0, 1.0, 0.0];
    let dc = [0.0, 0.0, 0.5];
    let mut hess = [[0.0; 3]; 3];
    for v in 0..3 {
        hess[0][v] = 2.0 * (dalpha[v] * a + alpha * da[v] + dbeta[v]);
        hess[1][v] = 2.0 * (dalpha[v] * b + alpha * db[v] + dbeta[v]);
        hess[2][v] = 2.0 * (dalpha[v] * c + alpha * dc[v]);
    }
    (energy, grad, hess, false)
}

/// Normal deviatoric strains, exactly zero for equal normal components.
fn deviator(e: &Vec4) -> [f64; 3] {
    [(2.0 * e[0] - e[1] - e[2]) / 3.0, (2.0 * e[1] - e[0] - e[2]) / 3.0, (2.0 * e[2] - e[0] - e[1]) / 3.0]
}

fn active_full(split: Split, e: &Vec4, el: &Elasticity) -> (f64, Vec4, Mat4, bool) {
    let (lambda, mu, bulk) = (el.lambda, el.mu, el.bulk);
    let tr = e[0] + e[1] + e[2];
    let mut g = [0.0; 4];
    let mut h = [[0.0; 4]; 4];
    match split {
        Split::Isotropic => {
            let psi = 0.5 * lambda * tr * tr + mu * (e[0] * e[0] + e[1] * e[1] + e[2] * e[2] + 0.5 * e[3] * e[3]);
            for i in 0..3 {
                g[i] = lambda * tr + 2.0 * mu * e[i];
                for j in 0..3 {
                    h[i][j] = lambda;
                }
                h[i][i] += 2.0 * mu;
            }
            g[3] = mu * e[3];
            h[3][3] = mu;
            (psi, g, h, false)
        }
        Split::VolDev => {
            let t = pos(tr);
            let dev = deviator(e);
            let dd = dev[0] * dev[0] + dev[1] * dev[1] + dev[2] * dev[2] + 0.5 * e[3] * e[3];
            let psi = 0.5 * bulk * t * t + mu * dd;
            let k = step(tr);
            for i in 0..3 {
                g[i] = bulk * t + 2.0 * mu * dev[i];
                for j in 0..3 {
                    h[i][j] = bulk * k - 2.0 * mu / 3.0;
                }
                h[i][i] += 2.0 * mu;
            }
            g[3] = mu * e[3];
            h[3][3] = mu;
            (psi, g, h, false)
        }
        Split::Spectral => {
            let t = pos(tr);
            let (eip, gip, hip, coalesced) = inplane_positive(e[0], e[1], e[3], strain_norm(e));
            let ez = pos(e[2]);
            let psi = 0.5 * lambda * t * t + mu * (eip + ez * ez);
            let k = step(tr);
            // index map (a, b, gamma) -> (0, 1, 3)
            let map = [0usize, 1, 3];
            for i in 0..3 {
                g[i] = lambda * t;
                for j in 0..3 {
                    h[i][j] = lambda * k;
                }
            }
            for (p, &i) in map.iter().enumerate() {
                g[i] += mu * gip[p];
                for (q, &j) in map.iter().enumerate() {
                    h[i][j] += mu * hip[p][q];
                }
            }
            g[2] += 2.0 * mu * ez;
            h[2][2] += 2.0 * mu * step(e[2]);
            (psi, g, h, coalesced)
        }
        Split::PfczmStress => unreachable!("principal-stress split has no strain-energy derivatives"),
    }
}

/// Active energy and its derivatives for the strain-based splits.
///
/// Returns `None` for the principal-stress split, which only provides a
/// driving force.
pub fn active_parts(split: Split, eps: &Voigt, el: &Elasticity) -> Option<ActiveParts> {
    if split == Split::PfczmStress {
        return None;
    }
    let e = lift(eps, el);
    let (psi, g, h, coalesced) = active_full(split, &e, el);
    let (stress, tangent) = reduce(&g, &h, el.out_of_plane_factor());
    Some(ActiveParts { psi, stress, tangent, coalesced })
}

fn principal_stresses(eps: &Voigt, el: &Elasticity) -> [f64; 3] {
    let s = el.stress(eps);
    let (s1, s2) = principal(s[0], s[1], s[2]);
    let mut p = [s1, s2, el.stress_zz(eps)];
    p.sort_by(|a, b| b.total_cmp(a));
    p
}

/// Active part `psi_0^+` only (the fracture driving force).
pub fn active_energy(split: Split, eps: &Voigt, el: &Elasticity) -> f64 {
    match split {
        Split::Isotropic => el.energy(eps),
        Split::PfczmStress => {
            let s1 = principal_stresses(eps, el)[0];
            pos(s1).powi(2) / (2.0 * el.youngs)
        }
        Split::VolDev | Split::Spectral => active_energy_3d(split, &lift(eps, el), el),
    }
}

/// `psi_0^+` of a strain-based split for a full strain
/// `(eps_xx, eps_yy, eps_zz, gamma_xy)` with an explicit out-of-plane
/// component. The principal-stress split gives NaN.
pub fn active_energy_3d(split: Split, e: &[f64; 4], el: &Elasticity) -> f64 {
    let tr = e[0] + e[1] + e[2];
    match split {
        Split::Isotropic => {
            0.5 * el.lambda * tr * tr + el.mu * (e[0] * e[0] + e[1] * e[1] + e[2] * e[2] + 0.5 * e[3] * e[3])
        }
        Split::VolDev => {
            let dev = deviator(e);
            let dd = dev[0] * dev[0] + dev[1] * dev[1] + dev[2] * dev[2] + 0.5 * e[3] * e[3];
            0.5 * el.bulk * pos(tr).powi(2) + el.mu * dd
        }
        Split::Spectral => {
            let (e1, e2) = principal(e[0], e[1], 0.5 * e[3]);
            0.5 * el.lambda * pos(tr).powi(2)
                + el.mu * (pos(e1).powi(2) + pos(e2).powi(2) + pos(e[2]).powi(2))
        }
        Split::PfczmStress => f64::NAN,
    }
}

/// `(psi_0^+, psi_0^-)`, each computed from its own closed form.
pub fn split_energy(split: Split, eps: &Voigt, el: &Elasticity) -> (f64, f64) {
    let plus = active_energy(split, eps, el);
    let minus = match split {
        Split::Isotropic => 0.0,
        Split::VolDev => {
            let e = lift(eps, el);
            0.5 * el.bulk * neg(e[0] + e[1] + e[2]).powi(2)
        }
        Split::Spectral => {
            let e = lift(eps, el);
            let tr = e[0] + e[1] + e[2];
            let (e1, e2) = principal(e[0], e[1], 0.5 * e[3]);
            0.5 * el.lambda * neg(tr).powi(2)
                + el.mu * (neg(e1).powi(2) + neg(e2).powi(2) + neg(e[2]).powi(2))
        }
        Split::PfczmStress => {
            let [s1, s2, s3] = principal_stresses(eps, el);
            let nu = el.poisson;
            (s1 * neg(s1) + s2 * s2 + s3 * s3 - 2.0 * nu * (s2 * s3 + s1 * s3 + s1 * s2))
                / (2.0 * el.youngs)
        }
    };
    (plus, minus)
}

/// Degraded stress and tangent at a material point.
///
/// Hybrid: `sigma = (g + kappa) C0 : eps`. Anisotropic:
/// `sigma = (g + kappa) d psi^+ / d eps + d psi^- / d eps` with the
/// consistent tangent, falling back to `(g + kappa) C0` where principal
/// strains coalesce.
pub fn split_stress_and_tangent(
    split: Split,
    formulation: Formulation,
    eps: &Voigt,
    g: f64,
    kappa: f64,
    el: &Elasticity,
) -> Result<(Voigt, VoigtMatrix), MaterialError> {
    let c0 = el.voigt_matrix();
    let s0 = el.stress(eps);
    let factor = g + kappa;
    let degrade_all = |s: Voigt| -> (Voigt, VoigtMatrix) {
        let mut c = c0;
        c.iter_mut().flatten().for_each(|v| *v *= factor);
        (s.map(|v| v * factor), c)
    };
    match (formulation, split) {
        (Formulation::Anisotropic, Split::PfczmStress) => Err(MaterialError::ForbiddenCombination(
            "the principal-stress split is only available with the hybrid formulation".into(),
        )),
        (Formulation::Hybrid, _) | (Formulation::Anisotropic, Split::Isotropic) => Ok(degrade_all(s0)),
        (Formulation::Anisotropic, _) => {
            let parts = active_parts(split, eps, el).expect("strain-based split");
            let mut stress = [0.0; 3];
            for i in 0..3 {
                stress[i] = factor * parts.stress[i] + (s0[i] - parts.stress[i]);
            }
            if parts.coalesced {
                return Ok((stress, degrade_all(s0).1));
            }
            let mut tangent = [[0.0; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    tangent[i][j] = factor * parts.tangent[i][j] + (c0[i][j] - parts.tangent[i][j]);
                }
            }
            Ok((stress, tangent))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::elastic::elastic_tensor;
    use super::*;
    use crate::mesh::Regime;

    fn steel(regime: Regime) -> Elasticity {
        elastic_tensor(210_000.0, 0.3, regime).unwrap()
    }

    #[test]
    fn voldev_biaxial_compression_keeps_only_the_deviator() {
        let el = elastic_tensor(100.0, 0.0, Regime::PlaneStrain).unwrap();
        let (p, m) = split_energy(Split::VolDev, &[-0.01, -0.01, 0.0], &el);
        // eps_zz = 0 under plane strain, so the lifted strain has a deviator
        assert!(m > 0.0);
        let e = lift(&[-0.01, -0.01, 0.0], &el);
        let tr = e[0] + e[1] + e[2];
        let dev = [e[0] - tr / 3.0, e[1] - tr / 3.0, e[2] - tr / 3.0];
        let expected = el.mu * dev.iter().map(|d| d * d).sum::<f64>();
        assert!((p - expected).abs() < 1e-15);
    }

    #[test]
    fn spectral_uniaxial_tension() {
        let el = steel(Regime::PlaneStrain);
        let e = 1e-3;
        let (p, m) = split_energy(Split::Spectral, &[e, 0.0, 0.0], &el);
        let expected = 0.5 * el.lambda * e * e + el.mu * e * e;
        assert!((p - expected).abs() < 1e-12 * expected);
        assert!(m.abs() < 1e-15);
    }

    #[test]
    fn pfczm_uniaxial_stress() {
        // nu = 0 makes uniaxial strain equal to uniaxial stress
        let el = elastic_tensor(100.0, 0.0, Regime::PlaneStrain).unwrap();
        let sigma = 2.0;
        let (p, _) = split_energy(Split::PfczmStress, &[sigma / 100.0, 0.0, 0.0], &el);
        assert!((p - sigma * sigma / 200.0).abs() < 1e-15);
    }

    #[test]
    fn isotropic_has_no_inactive_part() {
        let el = steel(Regime::PlaneStress);
        let (p, m) = split_energy(Split::Isotropic, &[1e-3, -2e-3, 5e-4], &el);
        assert_eq!(m, 0.0);
        assert!((p - el.energy(&[1e-3, -2e-3, 5e-4])).abs() < 1e-15);
    }

    #[test]
    fn undamaged_limit_for_every_split() {
        let el = steel(Regime::PlaneStrain);
        let eps = [1e-3, -4e-4, 6e-4];
        let s0 = el.stress(&eps);
        let kappa = 1e-7;
        let scale = s0.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for split in [Split::Isotropic, Split::VolDev, Split::Spectral] {
            for f in [Formulation::Hybrid, Formulation::Anisotropic] {
                let (s, _) = split_stress_and_tangent(split, f, &eps, 1.0, kappa, &el).unwrap();
                for i in 0..3 {
                    let want = (1.0 + kappa) * s0[i];
                    let tol = if f == Formulation::Hybrid { 1e-12 } else { 2.0 * kappa * scale };
                    assert!((s[i] - want).abs() <= tol, "{split:?} {f:?}");
                }
            }
        }
    }

    #[test]
    fn anisotropic_voldev_keeps_compressive_pressure() {
        let el = elastic_tensor(100.0, 0.25, Regime::PlaneStrain).unwrap();
        let eps = [-0.01, -0.01, 0.0];
        let (s, _) = split_stress_and_tangent(Split::VolDev, Formulation::Anisotropic, &eps, 0.0, 0.0, &el).unwrap();
        let tr = -0.02;
        // fully damaged: the compressive volumetric stress survives; the
        // deviatoric part is lost
        assert!((s[0] - el.bulk * tr).abs() < 1e-12);
        assert!((s[1] - el.bulk * tr).abs() < 1e-12);
        assert!(s[2].abs() < 1e-15);
    }

    #[test]
    fn hybrid_fully_damaged() {
        let el = steel(Regime::PlaneStrain);
        let eps = [1e-3, 2e-4, -3e-4];
        let (s, c) = split_stress_and_tangent(Split::Spectral, Formulation::Hybrid, &eps, 0.0, 1e-7, &el).unwrap();
        let s0 = el.stress(&eps);
        for i in 0..3 {
            assert!((s[i] - 1e-7 * s0[i]).abs() < 1e-18);
            assert!((c[i][i] - 1e-7 * el.voigt_matrix()[i][i]).abs() < 1e-12);
        }
    }

    #[test]
    fn anisotropic_principal_stress_is_forbidden() {
        let el = steel(Regime::PlaneStrain);
        let r = split_stress_and_tangent(Split::PfczmStress, Formulation::Anisotropic, &[0.0; 3], 1.0, 0.0, &el);
        assert!(matches!(r, Err(MaterialError::ForbiddenCombination(_))));
    }

    #[test]
    fn zero_strain_is_finite() {
        let el = steel(Regime::PlaneStress);
        let p = active_parts(Split::Spectral, &[0.0; 3], &el).unwrap();
        assert!(p.coalesced);
        assert!(p.tangent.iter().flatten().all(|v| v.is_finite()));
        assert_eq!(p.psi, 0.0);
    }
}
