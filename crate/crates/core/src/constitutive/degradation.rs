//! Stiffness degradation functions `g(phi)`.
//!
//! The residual stiffness `kappa` is not part of `g`; it is added where the
//! degraded stress is assembled, as `[g(phi) + kappa]`.

/// Softening law parameters `b`, `d` of the rational degradation function.
pub const LINEAR_SOFTENING: (f64, f64) = (-0.5, 2.0);

pub fn exponential_softening() -> (f64, f64) {
    (2f64.powf(5.0 / 3.0) - 3.0, 2.5)
}

/// `a = 4 E G_c / (pi l f_t^2)`
pub fn pfczm_a(youngs: f64, toughness: f64, strength: f64, length_scale: f64) -> f64 {
    4.0 * youngs * toughness / (std::f64::consts::PI * length_scale * strength * strength)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Degradation {
    /// `(1 - phi)^2`
    Quadratic,
    /// `(1 - phi)^d / ((1 - phi)^d + a phi (1 + b phi))`
    Rational { a: f64, b: f64, d: f64 },
}

impl Degradation {
    /// Returns `(g, g', g'')` with `phi` clamped to `[0, 1]`.
    pub fn eval(&self, phi: f64) -> (f64, f64, f64) {
        let phi = phi.clamp(0.0, 1.0);
        match *self {
            Degradation::Quadratic => {
                let s = 1.0 - phi;
                (s * s, -2.0 * s, 2.0)
            }
            Degradation::Rational { a, b, d } => {
                let s = 1.0 - phi;
                let p = s.powf(d);
                let dp = -d * s.powf(d - 1.0);
                let d2p = d * (d - 1.0) * s.powf(d - 2.0);
                let q = a * phi * (1.0 + b * phi);
                let dq = a * (1.0 + 2.0 * b * phi);
                let d2q = 2.0 * a * b;
                let den = p + q;
                let num1 = dp * q - p * dq;
                let g = p / den;
                let g1 = num1 / (den * den);
                let g2 = (d2p * q - p * d2q) / (den * den) - 2.0 * num1 * (dp + dq) / (den * den * den);
                (g, g1, g2)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_values() {
        assert_eq!(Degradation::Quadratic.eval(0.0), (1.0, -2.0, 2.0));
        assert_eq!(Degradation::Quadratic.eval(0.5), (0.25, -1.0, 2.0));
        // slight overshoot from a linear solve is clamped
        assert_eq!(Degradation::Quadratic.eval(1.0 + 1e-9), (0.0, 0.0, 2.0));
    }

    #[test]
    fn rational_end_values_and_initial_slope() {
        let (b, d) = LINEAR_SOFTENING;
        let g = Degradation::Rational { a: 127.3, b, d };
        let (g0, g1, _) = g.eval(0.0);
        assert_eq!(g0, 1.0);
        assert!((g1 + 127.3).abs() < 1e-12);
        assert_eq!(g.eval(1.0).0, 0.0);
    }

    #[test]
    fn exponential_constants() {
        let (b, d) = exponential_softening();
        assert!((b - 0.174_802_103_9).abs() < 1e-9);
        assert_eq!(d, 2.5);
    }

    #[test]
    fn a_parameter() {
        let a = pfczm_a(100.0, 0.1, 1.0, 0.1);
        assert!((a - 400.0 / std::f64::consts::PI).abs() < 1e-12);
        assert!((pfczm_a(1.0, std::f64::consts::FRAC_PI_4, 1.0, 1.0) - 1.0).abs() < 1e-15);
        assert!((pfczm_a(100.0, 0.1, 1.0, 0.2) - a / 2.0).abs() < 1e-12);
    }
}
