//! Harmonic numbers `ell_k = 1 + 1/2 + ... + 1/k`.
//!
//! The logarithmic transforms and two of the example sequences share one
//! table so their `ell_k` values cannot drift apart. The table lives in a
//! process-wide cache that extends on demand; the compensated-summation
//! state is stored with it, so the values are identical no matter how the
//! extensions were batched.

use std::sync::{OnceLock, RwLock};

use crate::kahan::NeumaierSum;
use crate::{Error, Result};

struct Cache {
    ell: Vec<f64>,
    sum: f64,
    comp: f64,
}

static CACHE: OnceLock<RwLock<Cache>> = OnceLock::new();

fn cache() -> &'static RwLock<Cache> {
    CACHE.get_or_init(|| {
        RwLock::new(Cache {
            ell: Vec::new(),
            sum: 0.0,
            comp: 0.0,
        })
    })
}

fn ensure(n: usize) {
    {
        let r = cache().read().expect("harmonic cache poisoned");
        if r.ell.len() >= n {
            return;
        }
    }
    let mut w = cache().write().expect("harmonic cache poisoned");
    let mut acc = NeumaierSum::resume(w.sum, w.comp);
    for k in w.ell.len() + 1..=n {
        acc.add(1.0 / k as f64);
        let v = acc.value();
        w.ell.push(v);
    }
    let (sum, comp) = acc.state();
    w.sum = sum;
    w.comp = comp;
}

/// `ell_1 .. ell_n` by forward compensated accumulation.
pub fn harmonic_numbers(n: u64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidParams("harmonic_numbers needs n >= 1".into()));
    }
    let n = n as usize;
    ensure(n);
    let r = cache().read().expect("harmonic cache poisoned");
    Ok(r.ell[..n].to_vec())
}

/// `ell_k` for one index (`k >= 1`).
pub fn ell(k: u64) -> f64 {
    debug_assert!(k >= 1);
    ensure(k as usize);
    let r = cache().read().expect("harmonic cache poisoned");
    r.ell[k as usize - 1]
}
