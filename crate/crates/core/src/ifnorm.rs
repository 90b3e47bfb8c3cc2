//! Intuitionistic fuzzy norm pairs.
//!
//! A pair `(mu, nu)` of fuzzy sets on `N x R` grades membership and
//! non-membership of "u is close to zero at scale t". The standard pair
//! induced by an ordinary norm is
//!
//! ```text
//! mu(u, t) = t / (t + ‖u‖)      (t > 0, else 0)
//! nu(u, t) = ‖u‖ / (t + ‖u‖)    (t > 0, else 1)
//! ```
//!
//! For this pair `mu + nu = 1` whenever `t > 0`, membership is
//! nondecreasing in `t`, non-membership nonincreasing, and the
//! min/max triangle inequalities hold.

use crate::element::Element;

/// A fuzzy norm pair: membership and non-membership of `u` at scale `t`.
pub trait IfNorm {
    fn mu(&self, u: &Element, t: f64) -> f64;
    fn nu(&self, u: &Element, t: f64) -> f64;
}

/// Membership of the standard pair.
pub fn standard_mu(u: &Element, t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        t / (t + u.norm())
    }
}

/// Non-membership of the standard pair. Equals `1 - standard_mu` for `t > 0`.
pub fn standard_nu(u: &Element, t: f64) -> f64 {
    if t <= 0.0 {
        1.0
    } else {
        let n = u.norm();
        n / (t + n)
    }
}

/// The pair induced by the underlying norm of the element's space.
#[derive(Debug, Clone, Copy, Default)]
pub struct StandardIfNorm;

impl IfNorm for StandardIfNorm {
    fn mu(&self, u: &Element, t: f64) -> f64 {
        standard_mu(u, t)
    }

    fn nu(&self, u: &Element, t: f64) -> f64 {
        standard_nu(u, t)
    }
}
