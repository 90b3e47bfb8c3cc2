//! Mean transforms: Cesàro, iterated Cesàro (Hölder), logarithmic and
//! iterated logarithmic.
//!
//! ```text
//! sigma_k = (1/k) sum_{j<=k} u_j             H^m = m-fold sigma, H^0 = u
//! tau_k   = (1/ell_k) sum_{j<=k} u_j / j     L^m = m-fold tau,   L^0 = u
//! ```
//!
//! Every transform is a single forward pass over the terms, so `values[k]`
//! depends only on terms `1..=k`. Sequences with exact integer terms keep
//! their first-level prefix sums in `i128` and divide at the end; all
//! floating passes accumulate with a Neumaier correction term, because
//! the example sequences plant spikes that cancel almost exactly and a
//! plain sum would lose the residual.

use std::fmt;

use crate::element::{Element, SpaceKind};
use crate::harmonic::harmonic_numbers;
use crate::kahan::ElementSum;
use crate::sequence::Sequence;
use crate::{Error, Result};

/// Maximum iterated order; deeper tables cost memory and add nothing here.
pub const MAX_ORDER: u32 = 8;

/// Which mean a table holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Method {
    Cesaro,
    Holder(u32),
    Log,
    IterLog(u32),
}

impl Method {
    /// Parse `cesaro`, `holder:M`, `log` or `iterlog:M`.
    pub fn parse(s: &str) -> Result<Self> {
        let (kind, order) = match s.split_once(':') {
            Some((k, o)) => (k, Some(o)),
            None => (s, None),
        };
        let parse_order = |o: Option<&str>| -> Result<u32> {
            let o = o.ok_or_else(|| {
                Error::InvalidParams(format!("method {kind} needs an order, e.g. {kind}:2"))
            })?;
            o.parse::<u32>()
                .map_err(|_| Error::InvalidParams(format!("bad order {o:?}")))
        };
        match kind {
            "cesaro" if order.is_none() => Ok(Method::Cesaro),
            "log" if order.is_none() => Ok(Method::Log),
            "holder" => Ok(Method::Holder(parse_order(order)?)),
            "iterlog" => Ok(Method::IterLog(parse_order(order)?)),
            other => Err(Error::InvalidParams(format!("unknown method {other:?}"))),
        }
    }

    /// The slow-oscillation variant that matches this mean family.
    pub fn is_log_family(&self) -> bool {
        matches!(self, Method::Log | Method::IterLog(_))
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Cesaro => write!(f, "cesaro"),
            Method::Holder(m) => write!(f, "holder:{m}"),
            Method::Log => write!(f, "log"),
            Method::IterLog(m) => write!(f, "iterlog:{m}"),
        }
    }
}

/// A fully evaluated transform, indexed `1..=N`.
#[derive(Debug, Clone)]
pub struct TransformTable {
    method: Method,
    space: SpaceKind,
    values: Vec<Element>,
    ell: Option<Vec<f64>>,
}

impl TransformTable {
    pub fn method(&self) -> Method {
        self.method
    }

    pub fn space(&self) -> SpaceKind {
        self.space
    }

    pub fn len(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at index `k` (1-based).
    pub fn value(&self, k: u64) -> &Element {
        &self.values[k as usize - 1]
    }

    pub fn values(&self) -> &[Element] {
        &self.values
    }

    /// Harmonic numbers used by the logarithmic methods.
    pub fn ell(&self) -> Option<&[f64]> {
        self.ell.as_deref()
    }
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParams("transforms need n >= 1".into()));
    }
    Ok(())
}

fn check_order(m: u32) -> Result<()> {
    if m > MAX_ORDER {
        return Err(Error::InvalidOrder(m));
    }
    Ok(())
}

fn raw_terms(seq: &Sequence, n: u64) -> Vec<Element> {
    (1..=n).map(|k| seq.term(k)).collect()
}

/// One Cesàro pass over already-evaluated values.
fn mean_pass(values: &[Element], space: &SpaceKind) -> Result<Vec<Element>> {
    let mut acc = ElementSum::zero(space);
    let mut out = Vec::with_capacity(values.len());
    for (i, v) in values.iter().enumerate() {
        acc.add(v)?;
        out.push(acc.value_div(i as f64 + 1.0));
    }
    Ok(out)
}

/// First Cesàro pass for integer-exact sequences: prefix sums in `i128`,
/// one rounding at the division.
fn mean_pass_exact(seq: &Sequence, n: u64) -> Vec<Element> {
    let mut sum: i128 = 0;
    let mut out = Vec::with_capacity(n as usize);
    for k in 1..=n {
        sum += seq.exact_term(k).expect("exact sequence");
        out.push(Element::Scalar(sum as f64 / k as f64));
    }
    out
}

/// One logarithmic pass over already-evaluated values.
fn log_pass(values: &[Element], ell: &[f64], space: &SpaceKind) -> Result<Vec<Element>> {
    let mut acc = ElementSum::zero(space);
    let mut out = Vec::with_capacity(values.len());
    for (i, v) in values.iter().enumerate() {
        acc.add_div(v, i as f64 + 1.0)?;
        out.push(acc.value_div(ell[i]));
    }
    Ok(out)
}

/// Cesàro means of the first `n` terms.
pub fn cesaro(seq: &Sequence, n: u64) -> Result<TransformTable> {
    check_n(n)?;
    let values = if seq.is_exact() {
        mean_pass_exact(seq, n)
    } else {
        mean_pass(&raw_terms(seq, n), &seq.space())?
    };
    Ok(TransformTable {
        method: Method::Cesaro,
        space: seq.space(),
        values,
        ell: None,
    })
}

/// `m`-fold Cesàro means; order 0 returns the raw terms and order 1
/// equals [`cesaro`].
pub fn holder(seq: &Sequence, m: u32, n: u64) -> Result<TransformTable> {
    check_n(n)?;
    check_order(m)?;
    let mut values = if m == 0 {
        raw_terms(seq, n)
    } else if seq.is_exact() {
        mean_pass_exact(seq, n)
    } else {
        mean_pass(&raw_terms(seq, n), &seq.space())?
    };
    for _ in 2..=m {
        values = mean_pass(&values, &seq.space())?;
    }
    Ok(TransformTable {
        method: Method::Holder(m),
        space: seq.space(),
        values,
        ell: None,
    })
}

/// Logarithmic means of the first `n` terms.
pub fn log_mean(seq: &Sequence, n: u64) -> Result<TransformTable> {
    check_n(n)?;
    let ell = harmonic_numbers(n)?;
    let values = log_pass(&raw_terms(seq, n), &ell, &seq.space())?;
    Ok(TransformTable {
        method: Method::Log,
        space: seq.space(),
        values,
        ell: Some(ell),
    })
}

/// `m`-fold logarithmic means; order 0 returns the raw terms and order 1
/// equals [`log_mean`].
pub fn iterated_log(seq: &Sequence, m: u32, n: u64) -> Result<TransformTable> {
    check_n(n)?;
    check_order(m)?;
    let ell = harmonic_numbers(n)?;
    let mut values = raw_terms(seq, n);
    for _ in 1..=m {
        values = log_pass(&values, &ell, &seq.space())?;
    }
    Ok(TransformTable {
        method: Method::IterLog(m),
        space: seq.space(),
        values,
        ell: Some(ell),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::ell as ell_at;

    fn scalar(e: &Element) -> f64 {
        match e {
            Element::Scalar(x) => *x,
            _ => panic!("expected scalar"),
        }
    }

    fn grid_at(e: &Element, i: usize) -> f64 {
        match e {
            Element::Grid(v) => v[i],
            _ => panic!("expected grid"),
        }
    }

    #[test]
    fn cesaro_of_constant_is_constant() {
        let t = cesaro(&Sequence::constant(3.25), 50).unwrap();
        for k in 1..=50 {
            assert_eq!(scalar(t.value(k)), 3.25);
        }
    }

    #[test]
    fn cesaro_of_alternating_signs() {
        let s = Sequence::exact_fn("alt", |k| if k % 2 == 0 { 1 } else { -1 });
        let t = cesaro(&s, 100).unwrap();
        for k in 1..=100u64 {
            let expected = if k % 2 == 0 { 0.0 } else { -1.0 / k as f64 };
            assert_eq!(scalar(t.value(k)), expected);
        }
    }

    #[test]
    fn cesaro_of_ex1_at_four() {
        let t = cesaro(&Sequence::ex1(), 4).unwrap();
        assert_eq!(scalar(t.value(4)), 5.0); // (1 + 1 + 0 + 18) / 4
    }

    #[test]
    fn holder_zero_is_identity_and_one_is_cesaro() {
        let s = Sequence::convergent(2.0, -1.0);
        let h0 = holder(&s, 0, 20).unwrap();
        for k in 1..=20 {
            assert_eq!(h0.value(k), &s.term(k));
        }
        let h1 = holder(&s, 1, 20).unwrap();
        let c = cesaro(&s, 20).unwrap();
        assert_eq!(h1.values(), c.values());
    }

    #[test]
    fn holder_of_constant_is_constant() {
        let t = holder(&Sequence::constant(1.5), 3, 40).unwrap();
        for k in 1..=40 {
            assert!((scalar(t.value(k)) - 1.5).abs() < 1e-12);
        }
    }

    #[test]
    fn third_holder_mean_of_ex2_carries_square_shift() {
        // brute-force the 3-fold mean of the plain alternating base and
        // compare at the square index 4, where the shift is +k
        let n = 16;
        let base = Sequence::alternating_sq();
        let mut level: Vec<f64> = (1..=n)
            .map(|k| base.exact_term(k).unwrap() as f64)
            .collect();
        for _ in 0..3 {
            let mut out = Vec::new();
            for k in 1..=n as usize {
                out.push(level[..k].iter().sum::<f64>() / k as f64);
            }
            level = out;
        }
        let h3 = holder(&Sequence::ex2(), 3, n).unwrap();
        assert!((scalar(h3.value(4)) - (level[3] + 4.0)).abs() < 1e-9);
        assert!((scalar(h3.value(8)) - level[7]).abs() < 1e-9);
    }

    #[test]
    fn log_mean_basics() {
        let t = log_mean(&Sequence::constant(2.0), 30).unwrap();
        for k in 1..=30 {
            assert!((scalar(t.value(k)) - 2.0).abs() < 1e-12);
        }
        let s = Sequence::convergent(0.0, 3.0);
        let t = log_mean(&s, 10).unwrap();
        assert_eq!(scalar(t.value(1)), scalar(&s.term(1))); // ell_1 = 1
    }

    #[test]
    fn log_mean_of_ex3_at_three() {
        // brute accumulation: spikes from k = 1, 2 cancel, leaving
        // (1/ell_3) * (-1 + 1 - 1) = -6/11 at x = 1
        let t = log_mean(&Sequence::ex3(101), 3).unwrap();
        assert!((grid_at(t.value(3), 100) - (-6.0 / 11.0)).abs() < 1e-12);
    }

    #[test]
    fn iterated_log_basics() {
        let s = Sequence::convergent(1.0, 2.0);
        let l0 = iterated_log(&s, 0, 15).unwrap();
        for k in 1..=15 {
            assert_eq!(l0.value(k), &s.term(k));
        }
        let l1 = iterated_log(&s, 1, 15).unwrap();
        let tau = log_mean(&s, 15).unwrap();
        assert_eq!(l1.values(), tau.values());
        let l2 = iterated_log(&Sequence::constant(4.0), 2, 25).unwrap();
        for k in 1..=25 {
            assert!((scalar(l2.value(k)) - 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn second_iterated_log_of_ex4_carries_ell_shift() {
        // brute-force the 2-fold log mean of the base (-x)^k k^2 at x = 1
        let n = 16u64;
        let ells: Vec<f64> = harmonic_numbers(n).unwrap();
        let base: Vec<f64> = (1..=n)
            .map(|k| {
                let s = if k % 2 == 0 { 1.0 } else { -1.0 };
                s * (k * k) as f64
            })
            .collect();
        let mut level = base;
        for _ in 0..2 {
            let mut out = Vec::new();
            for k in 1..=n as usize {
                let s: f64 = level[..k]
                    .iter()
                    .enumerate()
                    .map(|(i, v)| v / (i + 1) as f64)
                    .sum();
                out.push(s / ells[k - 1]);
            }
            level = out;
        }
        let l2 = iterated_log(&Sequence::ex4(101), 2, n).unwrap();
        let at = |k: u64| grid_at(l2.value(k), 100);
        assert!((at(4) - (level[3] + ell_at(4))).abs() < 1e-9);
        assert!((at(8) - level[7]).abs() < 1e-9);
    }

    #[test]
    fn order_cap_is_enforced() {
        let s = Sequence::constant(1.0);
        assert_eq!(holder(&s, 9, 5).unwrap_err(), Error::InvalidOrder(9));
        assert_eq!(
            iterated_log(&s, 12, 5).unwrap_err(),
            Error::InvalidOrder(12)
        );
    }

    #[test]
    fn first_cesaro_mean_of_alternating_squares_is_unbounded() {
        let t = cesaro(&Sequence::alternating_sq(), 1000).unwrap();
        for k in (2..=1000u64).step_by(2) {
            assert!(scalar(t.value(k)).abs() >= k as f64 / 2.0 - 1.0, "k = {k}");
        }
    }

    #[test]
    fn method_parsing() {
        assert_eq!(Method::parse("cesaro").unwrap(), Method::Cesaro);
        assert_eq!(Method::parse("holder:3").unwrap(), Method::Holder(3));
        assert_eq!(Method::parse("log").unwrap(), Method::Log);
        assert_eq!(Method::parse("iterlog:2").unwrap(), Method::IterLog(2));
        assert!(Method::parse("holder").is_err());
        assert!(Method::parse("cesaro:1").is_err());
        assert!(Method::parse("abel").is_err());
        assert_eq!(Method::parse("iterlog:2").unwrap().to_string(), "iterlog:2");
    }

    #[test]
    fn zero_length_tables_are_rejected() {
        assert!(cesaro(&Sequence::constant(1.0), 0).is_err());
    }
}
