//! Finite checks of the fuzzy-norm axioms.
//!
//! The ten conditions on a pair `(mu, nu)` are checked on a sampled set
//! of inputs `(u, w, c, t, s)`. Identities and inequalities are compared
//! with an absolute tolerance on [0, 1]-valued quantities. The two limit
//! conditions (membership tends to 1 as `t` grows and to 0 as `t`
//! vanishes, reversed for non-membership) cannot be checked at infinity;
//! they are checked as monotone approach over a geometric grid of scales
//! with a documented end tolerance, on norm-one elements so the end
//! values are comparable across samples. The vanishing-scale half is
//! vacuous at the zero element, where membership is identically 1.

use serde::{Deserialize, Serialize};

use crate::element::{Element, SpaceKind};
use crate::ifnorm::IfNorm;
use crate::rng::SplitMix64;
use crate::{Error, Result};

/// The ten pair conditions, labelled (a)..(j) in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    MuZeroForNonpositiveScale,
    MuOneOnlyAtZeroElement,
    MuScaleInvariance,
    MuMinTriangle,
    MuLimits,
    NuOneForNonpositiveScale,
    NuZeroOnlyAtZeroElement,
    NuScaleInvariance,
    NuMaxTriangle,
    NuLimits,
}

impl Axiom {
    pub const ALL: [Axiom; 10] = [
        Axiom::MuZeroForNonpositiveScale,
        Axiom::MuOneOnlyAtZeroElement,
        Axiom::MuScaleInvariance,
        Axiom::MuMinTriangle,
        Axiom::MuLimits,
        Axiom::NuOneForNonpositiveScale,
        Axiom::NuZeroOnlyAtZeroElement,
        Axiom::NuScaleInvariance,
        Axiom::NuMaxTriangle,
        Axiom::NuLimits,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Axiom::MuZeroForNonpositiveScale => "(a)",
            Axiom::MuOneOnlyAtZeroElement => "(b)",
            Axiom::MuScaleInvariance => "(c)",
            Axiom::MuMinTriangle => "(d)",
            Axiom::MuLimits => "(e)",
            Axiom::NuOneForNonpositiveScale => "(f)",
            Axiom::NuZeroOnlyAtZeroElement => "(g)",
            Axiom::NuScaleInvariance => "(h)",
            Axiom::NuMaxTriangle => "(i)",
            Axiom::NuLimits => "(j)",
        }
    }
}

/// One sampled input tuple. `t` and `s` are positive; nonpositive scales
/// are exercised at `-t` and `0`.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomSample {
    pub u: Element,
    pub w: Element,
    pub c: f64,
    pub t: f64,
    pub s: f64,
}

/// Tolerances for the finite checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxiomCheckConfig {
    /// Absolute tolerance for identities on [0, 1] values.
    pub tol: f64,
    /// How close the limit checks must get at the grid ends.
    pub limit_tol: f64,
    /// Margin for the strict "only at the zero element" direction.
    pub strict_margin: f64,
    /// Ends of the geometric scale grid for the limit checks.
    pub t_lo: f64,
    pub t_hi: f64,
}

impl Default for AxiomCheckConfig {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            limit_tol: 1e-6,
            strict_margin: 1e-7,
            t_lo: 1e-6,
            t_hi: 1e6,
        }
    }
}

/// Per-axiom outcome with the first violating sample, if any.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomFinding {
    pub axiom: Axiom,
    pub label: String,
    pub passed: bool,
    pub checks: u64,
    pub first_violation: Option<String>,
}

/// Outcome of a full axiom run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub samples: u64,
    pub config: AxiomCheckConfig,
    pub findings: Vec<AxiomFinding>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.findings.iter().all(|f| f.passed)
    }

    pub fn finding(&self, axiom: Axiom) -> &AxiomFinding {
        self.findings
            .iter()
            .find(|f| f.axiom == axiom)
            .expect("report covers every axiom")
    }
}

struct Recorder {
    axiom: Axiom,
    checks: u64,
    first_violation: Option<String>,
}

impl Recorder {
    fn new(axiom: Axiom) -> Self {
        Self {
            axiom,
            checks: 0,
            first_violation: None,
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.first_violation.is_none() {
            self.first_violation = Some(describe());
        }
    }

    fn finding(self) -> AxiomFinding {
        AxiomFinding {
            axiom: self.axiom,
            label: self.axiom.label().to_string(),
            passed: self.first_violation.is_none(),
            checks: self.checks,
            first_violation: self.first_violation,
        }
    }
}

fn describe(u: &Element) -> String {
    match u {
        Element::Scalar(x) => format!("scalar {x:.6e}"),
        Element::Grid(v) => format!(
            "grid({}) with norm {:.6e}",
            v.len(),
            Element::Grid(v.clone()).norm()
        ),
    }
}

/// Check the pair conditions on every sample. The zero element of the
/// sampled space is always checked alongside the random inputs, so the
/// "only at the zero element" directions have their anchor case.
pub fn check_axioms(
    pair: &dyn IfNorm,
    samples: &[AxiomSample],
    config: &AxiomCheckConfig,
) -> Result<AxiomReport> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    if let Some(s) = samples.iter().find(|s| s.c == 0.0) {
        return Err(Error::InvalidParams(format!(
            "scaling axioms need c != 0, got c = {} for u = {}",
            s.c,
            describe(&s.u)
        )));
    }
    if samples.iter().any(|s| s.t <= 0.0 || s.s <= 0.0) {
        return Err(Error::InvalidParams(
            "samples carry positive t and s; nonpositive scales are derived".into(),
        ));
    }

    let space = samples[0].u.space();
    let theta = Element::zero(&space);
    let tol = config.tol;
    let mut rec: Vec<Recorder> = Axiom::ALL.iter().map(|a| Recorder::new(*a)).collect();
    let [a, b, c_ax, d, e, f, g, h, i, j] = &mut rec[..] else {
        unreachable!()
    };

    // membership of theta at positive scales anchors (b) and (g)
    for &t in &[0.5, 1.0, 32.0] {
        b.check((pair.mu(&theta, t) - 1.0).abs() <= tol, || {
            format!("mu(theta, {t}) = {} != 1", pair.mu(&theta, t))
        });
        g.check(pair.nu(&theta, t).abs() <= tol, || {
            format!("nu(theta, {t}) = {} != 0", pair.nu(&theta, t))
        });
    }

    let decades = {
        let mut ts = Vec::new();
        let mut t = config.t_lo;
        while t <= config.t_hi * (1.0 + 1e-9) {
            ts.push(t);
            t *= 10.0;
        }
        ts
    };

    for sample in samples {
        let AxiomSample { u, w, c, t, s } = sample;
        let (t, s) = (*t, *s);

        a.check(
            pair.mu(u, -t).abs() <= tol && pair.mu(u, 0.0).abs() <= tol,
            || format!("mu({}, {}) = {} != 0", describe(u), -t, pair.mu(u, -t)),
        );
        f.check(
            (pair.nu(u, -t) - 1.0).abs() <= tol && (pair.nu(u, 0.0) - 1.0).abs() <= tol,
            || format!("nu({}, {}) = {} != 1", describe(u), -t, pair.nu(u, -t)),
        );

        if u.norm() > 0.0 {
            b.check(pair.mu(u, t) < 1.0 - config.strict_margin, || {
                format!(
                    "mu({}, {t}) = {} reaches 1 away from theta",
                    describe(u),
                    pair.mu(u, t)
                )
            });
            g.check(pair.nu(u, t) > config.strict_margin, || {
                format!(
                    "nu({}, {t}) = {} reaches 0 away from theta",
                    describe(u),
                    pair.nu(u, t)
                )
            });
        }

        let scaled = u.scale(*c);
        c_ax.check(
            (pair.mu(&scaled, t) - pair.mu(u, t / c.abs())).abs() <= tol,
            || {
                format!(
                    "mu({c} * {}, {t}) = {} but mu(u, t/|c|) = {}",
                    describe(u),
                    pair.mu(&scaled, t),
                    pair.mu(u, t / c.abs())
                )
            },
        );
        h.check(
            (pair.nu(&scaled, t) - pair.nu(u, t / c.abs())).abs() <= tol,
            || {
                format!(
                    "nu({c} * {}, {t}) = {} but nu(u, t/|c|) = {}",
                    describe(u),
                    pair.nu(&scaled, t),
                    pair.nu(u, t / c.abs())
                )
            },
        );

        if let Ok(sum) = u.add(w) {
            d.check(
                pair.mu(&sum, t + s) >= pair.mu(u, t).min(pair.mu(w, s)) - tol,
                || {
                    format!(
                        "mu(u+w, {}) = {} below min(mu(u,{t}), mu(w,{s})) = {}",
                        t + s,
                        pair.mu(&sum, t + s),
                        pair.mu(u, t).min(pair.mu(w, s))
                    )
                },
            );
            i.check(
                pair.nu(u, t).max(pair.nu(w, s)) >= pair.nu(&sum, t + s) - tol,
                || {
                    format!(
                        "nu(u+w, {}) = {} above max(nu(u,{t}), nu(w,{s})) = {}",
                        t + s,
                        pair.nu(&sum, t + s),
                        pair.nu(u, t).max(pair.nu(w, s))
                    )
                },
            );
        }

        // limit checks on the norm-one ray of u
        if u.norm() > 0.0 {
            let unit = u.scale(1.0 / u.norm());
            let mus: Vec<f64> = decades.iter().map(|&t| pair.mu(&unit, t)).collect();
            let nus: Vec<f64> = decades.iter().map(|&t| pair.nu(&unit, t)).collect();
            let mu_monotone = mus.windows(2).all(|p| p[1] >= p[0] - tol);
            let nu_monotone = nus.windows(2).all(|p| p[1] <= p[0] + tol);
            let mu_hi = *mus.last().expect("grid nonempty");
            let mu_lo = mus[0];
            let nu_hi = *nus.last().expect("grid nonempty");
            let nu_lo = nus[0];
            e.check(
                mu_monotone && mu_hi >= 1.0 - config.limit_tol && mu_lo <= config.limit_tol,
                || {
                    format!(
                        "mu on the unit ray of {}: ends ({mu_lo}, {mu_hi}), monotone: {mu_monotone}",
                        describe(u)
                    )
                },
            );
            j.check(
                nu_monotone && nu_hi <= config.limit_tol && nu_lo >= 1.0 - config.limit_tol,
                || {
                    format!(
                        "nu on the unit ray of {}: ends ({nu_lo}, {nu_hi}), monotone: {nu_monotone}",
                        describe(u)
                    )
                },
            );
        }
    }

    Ok(AxiomReport {
        samples: samples.len() as u64,
        config: *config,
        findings: rec.into_iter().map(Recorder::finding).collect(),
    })
}

/// Deterministic sample tuples for [`check_axioms`]: directions with
/// norms in [0.01, 1], scale factors `c` in ±[0.1, 10], and `t`, `s`
/// log-uniform over [1e-3, 1e3].
pub fn sample_axiom_inputs(space: &SpaceKind, count: usize, seed: u64) -> Vec<AxiomSample> {
    let mut rng = SplitMix64::new(seed);
    let element = |rng: &mut SplitMix64| -> Element {
        let target = rng.range_f64(0.01, 1.0);
        let raw = match space {
            SpaceKind::Scalar => Element::Scalar(if rng.next_f64() < 0.5 { -1.0 } else { 1.0 }),
            SpaceKind::Grid { points } => {
                let mut v: Vec<f64> = (0..*points).map(|_| rng.range_f64(-1.0, 1.0)).collect();
                if Element::Grid(v.clone()).norm() == 0.0 {
                    v[0] = 1.0;
                }
                Element::Grid(v)
            }
        };
        raw.scale(target / raw.norm())
    };
    let log_span = (1e3_f64 / 1e-3_f64).ln();
    (0..count)
        .map(|_| {
            let u = element(&mut rng);
            let w = element(&mut rng);
            let c_mag = rng.range_f64(0.1, 10.0);
            let c = if rng.next_f64() < 0.5 { -c_mag } else { c_mag };
            let t = 1e-3 * (rng.next_f64() * log_span).exp();
            let s = 1e-3 * (rng.next_f64() * log_span).exp();
            AxiomSample { u, w, c, t, s }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifnorm::{standard_mu, standard_nu, StandardIfNorm};

    /// Standard membership shifted down; breaks the theta anchor.
    struct ShiftedMu;

    impl IfNorm for ShiftedMu {
        fn mu(&self, u: &Element, t: f64) -> f64 {
            if t <= 0.0 {
                0.0
            } else {
                standard_mu(u, t) - 0.1
            }
        }

        fn nu(&self, u: &Element, t: f64) -> f64 {
            standard_nu(u, t)
        }
    }

    #[test]
    fn standard_pair_passes_on_scalars_and_grids() {
        for space in [SpaceKind::Scalar, SpaceKind::Grid { points: 21 }] {
            let samples = sample_axiom_inputs(&space, 300, 2024);
            let report =
                check_axioms(&StandardIfNorm, &samples, &AxiomCheckConfig::default()).unwrap();
            assert!(report.all_passed(), "{space}: {:#?}", report.findings);
        }
    }

    #[test]
    fn shifted_membership_fails_at_theta() {
        let samples = sample_axiom_inputs(&SpaceKind::Scalar, 50, 7);
        let report = check_axioms(&ShiftedMu, &samples, &AxiomCheckConfig::default()).unwrap();
        assert!(!report.all_passed());
        let b = report.finding(Axiom::MuOneOnlyAtZeroElement);
        assert!(!b.passed);
        assert!(b.first_violation.as_deref().unwrap().contains("theta"));
    }

    #[test]
    fn min_triangle_by_direct_substitution() {
        // mu(2, 2) = 0.5 against min(mu(1, 1), mu(1, 1)) = 0.5
        let one = Element::Scalar(1.0);
        let two = Element::Scalar(2.0);
        assert!(standard_mu(&two, 2.0) >= standard_mu(&one, 1.0).min(standard_mu(&one, 1.0)));
        assert_eq!(standard_mu(&two, 2.0), 0.5);
    }

    #[test]
    fn empty_samples_and_zero_scale_factors_are_errors() {
        assert_eq!(
            check_axioms(&StandardIfNorm, &[], &AxiomCheckConfig::default()).unwrap_err(),
            Error::EmptySamples
        );
        let mut samples = sample_axiom_inputs(&SpaceKind::Scalar, 2, 1);
        samples[1].c = 0.0;
        assert!(matches!(
            check_axioms(&StandardIfNorm, &samples, &AxiomCheckConfig::default()).unwrap_err(),
            Error::InvalidParams(_)
        ));
    }
}
