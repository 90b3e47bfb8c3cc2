//! Vector-space elements: real scalars and grid-sampled functions on [0, 1].
//!
//! A grid function holds `M >= 2` samples at the uniform points
//! `x_i = i/(M-1)`. Addition, negation and scalar multiplication are
//! pointwise; the norm is `|x|` for scalars and the grid maximum of
//! `|f(x_i)|` for grid functions, which stands in for the sup norm on
//! continuous functions.

use std::fmt;

use crate::{Error, Result};

/// Which space an element or sequence lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum SpaceKind {
    Scalar,
    Grid { points: usize },
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceKind::Scalar => write!(f, "scalar"),
            SpaceKind::Grid { points } => write!(f, "grid({points})"),
        }
    }
}

/// A member of the vector space: scalar or uniformly sampled function.
#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    Scalar(f64),
    Grid(Vec<f64>),
}

impl Element {
    /// The zero element of `space`.
    pub fn zero(space: &SpaceKind) -> Self {
        match space {
            SpaceKind::Scalar => Element::Scalar(0.0),
            SpaceKind::Grid { points } => Element::Grid(vec![0.0; *points]),
        }
    }

    pub fn space(&self) -> SpaceKind {
        match self {
            Element::Scalar(_) => SpaceKind::Scalar,
            Element::Grid(v) => SpaceKind::Grid { points: v.len() },
        }
    }

    /// `|x|` for scalars, grid maximum of `|f(x_i)|` for grid functions.
    pub fn norm(&self) -> f64 {
        match self {
            Element::Scalar(x) => x.abs(),
            Element::Grid(v) => v.iter().fold(0.0_f64, |m, x| m.max(x.abs())),
        }
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Element {
        self.map(|a| -a)
    }

    pub fn scale(&self, c: f64) -> Element {
        self.map(|a| c * a)
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> Element {
        match self {
            Element::Scalar(x) => Element::Scalar(f(*x)),
            Element::Grid(v) => Element::Grid(v.iter().map(|x| f(*x)).collect()),
        }
    }

    fn zip_with(&self, other: &Element, f: impl Fn(f64, f64) -> f64) -> Result<Element> {
        match (self, other) {
            (Element::Scalar(a), Element::Scalar(b)) => Ok(Element::Scalar(f(*a, *b))),
            (Element::Grid(a), Element::Grid(b)) => {
                if a.len() != b.len() {
                    return Err(Error::GridSizeMismatch {
                        expected: a.len(),
                        got: b.len(),
                    });
                }
                Ok(Element::Grid(
                    a.iter().zip(b.iter()).map(|(x, y)| f(*x, *y)).collect(),
                ))
            }
            (a, b) => Err(Error::SpaceMismatch {
                expected: a.space().to_string(),
                got: b.space().to_string(),
            }),
        }
    }
}

/// Sample `f` at the uniform grid points `x_i = i/(points-1)`.
pub fn grid_from_fn(points: usize, f: impl Fn(f64) -> f64) -> Element {
    assert!(points >= 2, "grid functions need at least two samples");
    let step = 1.0 / (points - 1) as f64;
    Element::Grid((0..points).map(|i| f(i as f64 * step)).collect())
}

/// Norm of `u`, checking that it belongs to `space` first.
pub fn norm_eval(space: &SpaceKind, u: &Element) -> Result<f64> {
    if u.space() != *space {
        return Err(Error::SpaceMismatch {
            expected: space.to_string(),
            got: u.space().to_string(),
        });
    }
    Ok(u.norm())
}
