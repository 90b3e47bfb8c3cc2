//! Compensated accumulation.
//!
//! The mean transforms add spiky terms that cancel almost exactly a step
//! later; a plain running sum loses the small residual to rounding. The
//! Neumaier variant of Kahan summation keeps a correction term alongside
//! the running sum, which is enough to recover the residual to working
//! precision.

use crate::element::{Element, SpaceKind};
use crate::Result;

/// Running sum with a Neumaier correction term.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// Resume from a previously saved `(sum, comp)` state.
    pub fn resume(sum: f64, comp: f64) -> Self {
        Self { sum, comp }
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    pub fn state(&self) -> (f64, f64) {
        (self.sum, self.comp)
    }
}

/// Compensated accumulator over [`Element`] values, scalar or grid.
#[derive(Debug, Clone)]
pub enum ElementSum {
    Scalar(NeumaierSum),
    Grid(Vec<NeumaierSum>),
}

impl ElementSum {
    pub fn zero(space: &SpaceKind) -> Self {
        match space {
            SpaceKind::Scalar => ElementSum::Scalar(NeumaierSum::new()),
            SpaceKind::Grid { points } => ElementSum::Grid(vec![NeumaierSum::new(); *points]),
        }
    }

    /// Add `u / divisor` component-wise.
    pub fn add_div(&mut self, u: &Element, divisor: f64) -> Result<()> {
        match (self, u) {
            (ElementSum::Scalar(acc), Element::Scalar(x)) => {
                acc.add(x / divisor);
                Ok(())
            }
            (ElementSum::Grid(accs), Element::Grid(xs)) if accs.len() == xs.len() => {
                for (acc, x) in accs.iter_mut().zip(xs.iter()) {
                    acc.add(x / divisor);
                }
                Ok(())
            }
            (ElementSum::Grid(accs), Element::Grid(xs)) => Err(crate::Error::GridSizeMismatch {
                expected: accs.len(),
                got: xs.len(),
            }),
            (me, other) => Err(crate::Error::SpaceMismatch {
                expected: match me {
                    ElementSum::Scalar(_) => "scalar".into(),
                    ElementSum::Grid(g) => format!("grid({})", g.len()),
                },
                got: other.space().to_string(),
            }),
        }
    }

    pub fn add(&mut self, u: &Element) -> Result<()> {
        self.add_div(u, 1.0)
    }

    /// Current value divided by `divisor` (e.g. `k` for a mean).
    pub fn value_div(&self, divisor: f64) -> Element {
        match self {
            ElementSum::Scalar(acc) => Element::Scalar(acc.value() / divisor),
            ElementSum::Grid(accs) => {
                Element::Grid(accs.iter().map(|a| a.value() / divisor).collect())
            }
        }
    }
}
