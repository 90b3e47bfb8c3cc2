//! Sequence constructors: the four bundled example sequences and
//! synthetic test sequences.
//!
//! The examples follow one pattern: a base term that oscillates without
//! converging, plus large spikes planted on the square indices `k = n^2`
//! (and the few indices after them) that cancel inside the relevant mean
//! a step or two later. The spikes make the raw sequence and the lower
//! means diverge while the targeted mean settles outside a set of square
//! indices, which has natural density zero.
//!
//! * `ex1` (scalar): `1 + (-1)^k`, spikes `+k^2` at `k = n^2` and
//!   `-(k-1)^2` at `k = n^2 + 1`, `n >= 1`.
//! * `ex2` (scalar): `(-1)^k k^2` with a four-index spike block starting
//!   at each `k = n^2`, `n >= 2`, that cancels only after three Cesàro
//!   passes.
//! * `ex3` (grid on [0,1]): `(-x)^k k`, spikes `+k ell_k^2` and
//!   `-k ell_{k-1}^2` at `k = n^2`, `n^2 + 1`, `n >= 1`.
//! * `ex4` (grid on [0,1]): `(-x)^k k^2` with a three-index spike block
//!   built from harmonic numbers, `n >= 2`, that cancels after two
//!   logarithmic passes.
//!
//! Integer-valued terms (`ex1`, `ex2`, the alternating square base) are
//! produced in `i128` and converted to floating point only where a norm
//! or a division is taken, so the spike cancellations stay bit-exact.

use std::sync::{Arc, RwLock};

use crate::element::{Element, SpaceKind};
use crate::harmonic::ell;
use crate::kahan::NeumaierSum;
use crate::{Error, Result};

#[derive(Clone)]
pub(crate) enum TermFn {
    /// Exact integer scalar terms.
    Exact(Arc<dyn Fn(u64) -> i128 + Send + Sync>),
    /// Floating scalar terms.
    Scalar(Arc<dyn Fn(u64) -> f64 + Send + Sync>),
    /// Grid-function terms; the closure returns all samples for index k.
    Grid(Arc<dyn Fn(u64) -> Vec<f64> + Send + Sync>),
}

/// A lazily evaluated sequence `k >= 1 -> Element` with space metadata.
///
/// Term functions are pure and deterministic: evaluating the same index
/// twice yields the identical element, and distinct indices may be
/// evaluated concurrently.
#[derive(Clone)]
pub struct Sequence {
    name: String,
    space: SpaceKind,
    term: TermFn,
}

impl std::fmt::Debug for Sequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Sequence")
            .field("name", &self.name)
            .field("space", &self.space)
            .finish()
    }
}

/// Classify `k` as `n^2 + offset` with `n >= min_n`, trying offsets in
/// ascending order so the square branch wins at overlaps.
fn square_split(k: u64, min_n: u64, max_offset: u64) -> Option<(u64, u64)> {
    for off in 0..=max_offset {
        if k > off {
            let r = k - off;
            let n = r.isqrt();
            if n * n == r && n >= min_n {
                return Some((n, off));
            }
        }
    }
    None
}

fn sign(k: u64) -> i128 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `(-x)^k` for `x` in [0, 1].
fn signed_pow(x: f64, k: u64) -> f64 {
    let p = x.powi(k.min(i32::MAX as u64) as i32);
    if k % 2 == 0 {
        p
    } else {
        -p
    }
}

impl Sequence {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn space(&self) -> SpaceKind {
        self.space
    }

    /// Term at index `k >= 1`.
    pub fn term(&self, k: u64) -> Element {
        debug_assert!(k >= 1, "sequences are indexed from 1");
        match &self.term {
            TermFn::Exact(f) => Element::Scalar(f(k) as f64),
            TermFn::Scalar(f) => Element::Scalar(f(k)),
            TermFn::Grid(f) => Element::Grid(f(k)),
        }
    }

    /// Exact integer value, when the sequence carries one.
    pub fn exact_term(&self, k: u64) -> Option<i128> {
        match &self.term {
            TermFn::Exact(f) => Some(f(k)),
            _ => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.term, TermFn::Exact(_))
    }

    pub fn scalar_fn(
        name: impl Into<String>,
        f: impl Fn(u64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            space: SpaceKind::Scalar,
            term: TermFn::Scalar(Arc::new(f)),
        }
    }

    pub fn exact_fn(
        name: impl Into<String>,
        f: impl Fn(u64) -> i128 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            space: SpaceKind::Scalar,
            term: TermFn::Exact(Arc::new(f)),
        }
    }

    pub fn grid_fn(
        name: impl Into<String>,
        points: usize,
        f: impl Fn(u64) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        assert!(points >= 2);
        Self {
            name: name.into(),
            space: SpaceKind::Grid { points },
            term: TermFn::Grid(Arc::new(f)),
        }
    }

    /// `1 + (-1)^k` with square spikes; `ex1` in the catalog.
    pub fn ex1() -> Self {
        Self::exact_fn("ex1", |k| {
            let base = 1 + sign(k);
            match square_split(k, 1, 1) {
                Some((_, 0)) => base + (k as i128).pow(2),
                Some((_, 1)) => base - (k as i128 - 1).pow(2),
                _ => base,
            }
        })
    }

    /// `(-1)^k k^2` with a four-index spike block; `ex2` in the catalog.
    pub fn ex2() -> Self {
        Self::exact_fn("ex2", |k| {
            let ki = k as i128;
            let base = sign(k) * ki.pow(2);
            match square_split(k, 2, 3) {
                Some((_, 0)) => base + ki.pow(4),
                Some((_, 1)) => {
                    base - (ki - 1).pow(4) - (ki - 1).pow(3) * ki - (ki - 1).pow(2) * ki.pow(2)
                }
                Some((_, 2)) => base + 3 * (ki - 2).pow(2) * (ki - 1).pow(2),
                Some((_, 3)) => base - (ki - 3).pow(2) * (ki - 2) * (ki - 1),
                _ => base,
            }
        })
    }

    /// `(-x)^k k` with harmonic-number spikes; `ex3` in the catalog.
    pub fn ex3(points: usize) -> Self {
        Self::grid_fn("ex3", points, move |k| {
            let shift = match square_split(k, 1, 1) {
                Some((_, 0)) => k as f64 * ell(k).powi(2),
                Some((_, 1)) => -(k as f64) * ell(k - 1).powi(2),
                _ => 0.0,
            };
            let step = 1.0 / (points - 1) as f64;
            (0..points)
                .map(|i| signed_pow(i as f64 * step, k) * k as f64 + shift)
                .collect()
        })
    }

    /// `(-x)^k k^2` with a three-index harmonic spike block; `ex4`.
    pub fn ex4(points: usize) -> Self {
        Self::grid_fn("ex4", points, move |k| {
            let kf = k as f64;
            let shift = match square_split(k, 2, 2) {
                Some((_, 0)) => kf * kf * ell(k).powi(3),
                Some((_, 1)) => -kf * ell(k - 1).powi(2) * ((kf - 1.0) * ell(k - 1) + kf * ell(k)),
                Some((_, 2)) => kf * (kf - 1.0) * ell(k - 1) * ell(k - 2).powi(2),
                _ => 0.0,
            };
            let step = 1.0 / (points - 1) as f64;
            (0..points)
                .map(|i| signed_pow(i as f64 * step, k) * kf * kf + shift)
                .collect()
        })
    }

    /// Constant sequence `u_k = a`.
    pub fn constant(a: f64) -> Self {
        Self::scalar_fn(format!("constant({a})"), move |_| a)
    }

    /// Convergent sequence `u_k = a + c/k`.
    pub fn convergent(a: f64, c: f64) -> Self {
        Self::scalar_fn(format!("convergent({a},{c})"), move |k| a + c / k as f64)
    }

    /// `(-1)^k k^2`, the base of `ex2`; unbounded in every Cesàro mean of
    /// first order.
    pub fn alternating_sq() -> Self {
        Self::exact_fn("alternating-sq", |k| sign(k) * (k as i128).pow(2))
    }

    /// Harmonic partial sums `u_k = ell_k`.
    pub fn harmonic_partial_sums() -> Self {
        Self::scalar_fn("harmonic", ell)
    }

    /// `u_k = sum_{j<=k} 1/(j ell_j)`: grows like `ln ell_k`, the slow
    /// divergence that the logarithmic oscillation condition tolerates.
    pub fn log_slow() -> Self {
        let cache: Arc<RwLock<(Vec<f64>, f64, f64)>> =
            Arc::new(RwLock::new((Vec::new(), 0.0, 0.0)));
        Self::scalar_fn("log-slow", move |k| {
            {
                let r = cache.read().expect("log-slow cache poisoned");
                if r.0.len() >= k as usize {
                    return r.0[k as usize - 1];
                }
            }
            let mut w = cache.write().expect("log-slow cache poisoned");
            let mut acc = NeumaierSum::resume(w.1, w.2);
            for j in w.0.len() as u64 + 1..=k {
                acc.add(1.0 / (j as f64 * ell(j)));
                let v = acc.value();
                w.0.push(v);
            }
            let (sum, comp) = acc.state();
            w.1 = sum;
            w.2 = comp;
            w.0[k as usize - 1]
        })
    }

    /// Pointwise combination `alpha * u + beta * v`.
    pub fn affine(alpha: f64, u: &Sequence, beta: f64, v: &Sequence) -> Result<Self> {
        if u.space() != v.space() {
            return Err(Error::SpaceMismatch {
                expected: u.space().to_string(),
                got: v.space().to_string(),
            });
        }
        let name = format!("affine({alpha}*{},{beta}*{})", u.name(), v.name());
        let (fu, fv) = (u.clone(), v.clone());
        let space = u.space();
        Ok(Self {
            name,
            space,
            term: match space {
                SpaceKind::Scalar => TermFn::Scalar(Arc::new(move |k| {
                    let a = match fu.term(k) {
                        Element::Scalar(x) => x,
                        _ => unreachable!(),
                    };
                    let b = match fv.term(k) {
                        Element::Scalar(x) => x,
                        _ => unreachable!(),
                    };
                    alpha * a + beta * b
                })),
                SpaceKind::Grid { .. } => TermFn::Grid(Arc::new(move |k| {
                    let a = fu.term(k);
                    let b = fv.term(k);
                    match a.scale(alpha).add(&b.scale(beta)).expect("same space") {
                        Element::Grid(v) => v,
                        _ => unreachable!(),
                    }
                })),
            },
        })
    }

    /// Add `amp * k` at every square index. Used to build sequences whose
    /// hypotheses all fail, exercising the vacuous side of the
    /// consistency contracts.
    pub fn with_square_spikes(base: &Sequence, amp: f64) -> Self {
        let inner = base.clone();
        let name = format!("spiked({},{amp})", base.name());
        match base.space() {
            SpaceKind::Scalar => Self::scalar_fn(name, move |k| {
                let x = match inner.term(k) {
                    Element::Scalar(x) => x,
                    _ => unreachable!(),
                };
                match square_split(k, 1, 0) {
                    Some(_) => x + amp * k as f64,
                    None => x,
                }
            }),
            SpaceKind::Grid { points } => Self::grid_fn(name, points, move |k| {
                let shift = match square_split(k, 1, 0) {
                    Some(_) => amp * k as f64,
                    None => 0.0,
                };
                match inner.term(k) {
                    Element::Grid(v) => v.into_iter().map(|x| x + shift).collect(),
                    _ => unreachable!(),
                }
            }),
        }
    }

    /// Increment sequence `v_k = k (u_k - u_{k-1})`, with `u_0` taken as
    /// the zero element so `v_1 = u_1`.
    pub fn scaled_increments(base: &Sequence) -> Self {
        Self::increments(base, false)
    }

    /// Increment sequence `w_k = k ln k (u_k - u_{k-1})`; `w_1` is zero.
    pub fn log_scaled_increments(base: &Sequence) -> Self {
        Self::increments(base, true)
    }

    fn increments(base: &Sequence, log_weight: bool) -> Self {
        let inner = base.clone();
        let name = if log_weight {
            format!("k*ln(k)*delta({})", base.name())
        } else {
            format!("k*delta({})", base.name())
        };
        let weight = move |k: u64| {
            let kf = k as f64;
            if log_weight {
                kf * kf.ln()
            } else {
                kf
            }
        };
        match base.space() {
            SpaceKind::Scalar => Self::scalar_fn(name, move |k| {
                let cur = match inner.term(k) {
                    Element::Scalar(x) => x,
                    _ => unreachable!(),
                };
                let prev = if k == 1 {
                    0.0
                } else {
                    match inner.term(k - 1) {
                        Element::Scalar(x) => x,
                        _ => unreachable!(),
                    }
                };
                weight(k) * (cur - prev)
            }),
            SpaceKind::Grid { points } => Self::grid_fn(name, points, move |k| {
                let cur = inner.term(k);
                let prev = if k == 1 {
                    Element::zero(&cur.space())
                } else {
                    inner.term(k - 1)
                };
                match cur.sub(&prev).expect("same space").scale(weight(k)) {
                    Element::Grid(v) => v,
                    _ => unreachable!(),
                }
            }),
        }
    }

    /// Resolve a CLI sequence name, optionally with `:`-separated numeric
    /// parameters (`constant:7`, `convergent:1:0.5`). Grid sequences use
    /// `grid_points` samples.
    pub fn from_name(spec: &str, grid_points: usize) -> Result<Self> {
        let mut parts = spec.split(':');
        let kind = parts.next().unwrap_or_default();
        let params: Vec<f64> = parts
            .map(|p| {
                p.parse::<f64>()
                    .map_err(|_| Error::InvalidParams(format!("bad numeric parameter {p:?}")))
            })
            .collect::<Result<_>>()?;
        let wrong_arity = |max: usize| -> Result<()> {
            if params.len() > max {
                return Err(Error::InvalidParams(format!(
                    "{kind} takes at most {max} parameters"
                )));
            }
            Ok(())
        };
        match kind {
            "ex1" => {
                wrong_arity(0)?;
                Ok(Self::ex1())
            }
            "ex2" => {
                wrong_arity(0)?;
                Ok(Self::ex2())
            }
            "ex3" => {
                wrong_arity(0)?;
                Ok(Self::ex3(grid_points))
            }
            "ex4" => {
                wrong_arity(0)?;
                Ok(Self::ex4(grid_points))
            }
            "constant" => {
                wrong_arity(1)?;
                Ok(Self::constant(params.first().copied().unwrap_or(1.0)))
            }
            "convergent" => {
                wrong_arity(2)?;
                Ok(Self::convergent(
                    params.first().copied().unwrap_or(1.0),
                    params.get(1).copied().unwrap_or(1.0),
                ))
            }
            "alternating-sq" => {
                wrong_arity(0)?;
                Ok(Self::alternating_sq())
            }
            "harmonic" => {
                wrong_arity(0)?;
                Ok(Self::harmonic_partial_sums())
            }
            "log-slow" => {
                wrong_arity(0)?;
                Ok(Self::log_slow())
            }
            other => Err(Error::UnknownSequence(other.to_string())),
        }
    }

    /// Names `from_name` accepts, with their parameter forms.
    pub fn catalog() -> &'static [(&'static str, &'static str)] {
        &[
            ("ex1", "1 + (-1)^k with square spikes, scalar"),
            ("ex2", "(-1)^k k^2 with a four-index spike block, scalar"),
            ("ex3", "(-x)^k k with harmonic spikes, grid function"),
            ("ex4", "(-x)^k k^2 with harmonic spikes, grid function"),
            ("constant[:a]", "u_k = a (default a = 1)"),
            ("convergent[:a[:c]]", "u_k = a + c/k (defaults 1, 1)"),
            ("alternating-sq", "(-1)^k k^2"),
            ("harmonic", "u_k = 1 + 1/2 + ... + 1/k"),
            ("log-slow", "u_k = sum_{j<=k} 1/(j ell_j)"),
        ]
    }
}
