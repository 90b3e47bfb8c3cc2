//! Transform oracles: the implementation path (exact prefix sums plus
//! compensated passes) is checked against independently written
//! references — naive nested summation and the closed piecewise forms
//! that the spike telescoping produces.

use ifns_core::harmonic::ell;
use ifns_core::rng::SplitMix64;
use ifns_core::{cesaro, holder, iterated_log, log_mean, Element, Sequence};

fn scalar(e: &Element) -> f64 {
    match e {
        Element::Scalar(x) => *x,
        _ => panic!("expected scalar"),
    }
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

fn is_square(k: u64) -> bool {
    let r = k.isqrt();
    r * r == k
}

/// Naive m-fold running mean, plain f64, no prefix reuse across levels.
fn brute_holder(terms: &[f64], m: u32) -> Vec<f64> {
    let mut level = terms.to_vec();
    for _ in 0..m {
        let mut out = Vec::with_capacity(level.len());
        for k in 1..=level.len() {
            out.push(level[..k].iter().sum::<f64>() / k as f64);
        }
        level = out;
    }
    level
}

/// Naive m-fold logarithmic mean with directly summed harmonic numbers.
fn brute_iterated_log(terms: &[f64], m: u32) -> Vec<f64> {
    let n = terms.len();
    let ells: Vec<f64> = (1..=n)
        .map(|k| (1..=k).map(|j| 1.0 / j as f64).sum::<f64>())
        .collect();
    let mut level = terms.to_vec();
    for _ in 0..m {
        let mut out = Vec::with_capacity(n);
        for k in 1..=n {
            let s: f64 = level[..k]
                .iter()
                .enumerate()
                .map(|(i, v)| v / (i + 1) as f64)
                .sum();
            out.push(s / ells[k - 1]);
        }
        level = out;
    }
    level
}

fn seeded_sequence(seed: u64) -> Sequence {
    Sequence::scalar_fn(format!("hash-{seed}"), move |k| {
        SplitMix64::new(seed ^ (k * 0x9e37_79b9)).range_f64(-10.0, 10.0)
    })
}

#[test]
fn holder_matches_nested_summation_oracle() {
    for seed in [3u64, 17, 99, 1234, 777] {
        let seq = seeded_sequence(seed);
        let terms: Vec<f64> = (1..=50).map(|k| scalar(&seq.term(k))).collect();
        for m in 0..=3u32 {
            let table = holder(&seq, m, 50).unwrap();
            let oracle = brute_holder(&terms, m);
            for k in 1..=50usize {
                assert!(
                    rel_close(scalar(table.value(k as u64)), oracle[k - 1], 1e-9),
                    "seed {seed}, m {m}, k {k}: {} vs {}",
                    scalar(table.value(k as u64)),
                    oracle[k - 1]
                );
            }
        }
    }
}

#[test]
fn iterated_log_matches_nested_summation_oracle() {
    for seed in [5u64, 21, 404] {
        let seq = seeded_sequence(seed);
        let terms: Vec<f64> = (1..=50).map(|k| scalar(&seq.term(k))).collect();
        for m in 0..=3u32 {
            let table = iterated_log(&seq, m, 50).unwrap();
            let oracle = brute_iterated_log(&terms, m);
            for k in 1..=50usize {
                assert!(
                    rel_close(scalar(table.value(k as u64)), oracle[k - 1], 1e-9),
                    "seed {seed}, m {m}, k {k}"
                );
            }
        }
    }
}

#[test]
fn ex1_prefix_sums_telescope_to_the_closed_form() {
    // sum_{j<=k} u_j = k + sum_{j<=k} (-1)^j + k^2 [k a square], so the
    // mean is 1 + alt_k/k, plus k exactly on the squares
    let table = cesaro(&Sequence::ex1(), 2000).unwrap();
    for k in 1..=2000u64 {
        let alt = if k % 2 == 0 { 0.0 } else { -1.0 };
        let mut expected = 1.0 + alt / k as f64;
        if is_square(k) {
            expected += k as f64;
        }
        assert!(
            rel_close(scalar(table.value(k)), expected, 1e-12),
            "k = {k}: {} vs {expected}",
            scalar(table.value(k))
        );
    }
}

#[test]
fn ex2_holder_means_reduce_to_shifted_base_means() {
    // the spike blocks telescope so that H^m of ex2 equals the m-fold
    // mean of the plain alternating base plus an explicit polynomial
    // shift near each square
    let n = 500u64;
    let base: Vec<f64> = {
        let b = Sequence::alternating_sq();
        (1..=n).map(|k| scalar(&b.term(k))).collect()
    };
    let sigma1 = brute_holder(&base, 1);
    let sigma2 = brute_holder(&base, 2);
    let sigma3 = brute_holder(&base, 3);

    let classify = |k: u64| -> Option<u64> {
        for off in 0..=3u64 {
            if k > off {
                let r = k - off;
                let root = r.isqrt();
                if root * root == r && root >= 2 {
                    return Some(off);
                }
            }
        }
        None
    };

    let seq = Sequence::ex2();
    let h1 = holder(&seq, 1, n).unwrap();
    let h2 = holder(&seq, 2, n).unwrap();
    let h3 = holder(&seq, 3, n).unwrap();
    for k in 1..=n {
        let kf = k as f64;
        let off = classify(k);
        let shift1 = match off {
            Some(0) => kf.powi(3),
            Some(1) => -(kf - 1.0).powi(2) * (2.0 * kf - 1.0),
            Some(2) => (kf - 2.0).powi(2) * (kf - 1.0),
            _ => 0.0,
        };
        let shift2 = match off {
            Some(0) => kf * kf,
            Some(1) => -(kf - 1.0).powi(2),
            _ => 0.0,
        };
        let shift3 = match off {
            Some(0) => kf,
            _ => 0.0,
        };
        let i = (k - 1) as usize;
        assert!(
            rel_close(scalar(h1.value(k)), sigma1[i] + shift1, 1e-9),
            "H1 at {k}"
        );
        assert!(
            rel_close(scalar(h2.value(k)), sigma2[i] + shift2, 1e-9),
            "H2 at {k}"
        );
        assert!(
            rel_close(scalar(h3.value(k)), sigma3[i] + shift3, 1e-9),
            "H3 at {k}: {} vs {}",
            scalar(h3.value(k)),
            sigma3[i] + shift3
        );
    }
}

#[test]
fn ex3_log_means_reduce_to_scaled_geometric_sums() {
    // spikes cancel pairwise inside tau, leaving the scaled alternating
    // geometric sum plus ell_k exactly on the squares
    let n = 2000u64;
    let points = 101usize;
    let table = log_mean(&Sequence::ex3(points), n).unwrap();
    let step = 1.0 / (points - 1) as f64;
    for k in 1..=n {
        let Element::Grid(row) = table.value(k) else {
            panic!("grid table")
        };
        for (i, v) in row.iter().enumerate() {
            let x = i as f64 * step;
            // sum_{j<=k} (-x)^j = -x (1 - (-x)^k) / (1 + x)
            let geo = -x * (1.0 - (-x).powi(k as i32)) / (1.0 + x);
            let mut expected = geo / ell(k);
            if is_square(k) {
                expected += ell(k);
            }
            assert!(
                (v - expected).abs() <= 1e-9 * (1.0 + expected.abs()),
                "k = {k}, x = {x}: {v} vs {expected}"
            );
        }
    }
}

#[test]
fn ex4_iterated_log_means_reduce_to_shifted_base_means() {
    let n = 400u64;
    let points = 21usize;
    let step = 1.0 / (points - 1) as f64;
    // brute 1- and 2-fold log means of the base (-x)^k k^2, per grid point
    let base: Vec<Vec<f64>> = (1..=n)
        .map(|k| {
            (0..points)
                .map(|i| {
                    let x = i as f64 * step;
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    sign * x.powi(k as i32) * (k * k) as f64
                })
                .collect()
        })
        .collect();
    let ells: Vec<f64> = (1..=n as usize)
        .map(|k| (1..=k).map(|j| 1.0 / j as f64).sum::<f64>())
        .collect();
    let log_pass = |level: &[Vec<f64>]| -> Vec<Vec<f64>> {
        (1..=level.len())
            .map(|k| {
                (0..points)
                    .map(|p| {
                        let s: f64 = level[..k]
                            .iter()
                            .enumerate()
                            .map(|(i, row)| row[p] / (i + 1) as f64)
                            .sum();
                        s / ells[k - 1]
                    })
                    .collect()
            })
            .collect()
    };
    let tau1 = log_pass(&base);
    let tau2 = log_pass(&tau1);

    let classify = |k: u64| -> Option<u64> {
        for off in 0..=2u64 {
            if k > off {
                let r = k - off;
                let root = r.isqrt();
                if root * root == r && root >= 2 {
                    return Some(off);
                }
            }
        }
        None
    };

    let seq = Sequence::ex4(points);
    let l1 = iterated_log(&seq, 1, n).unwrap();
    let l2 = iterated_log(&seq, 2, n).unwrap();
    for k in 1..=n {
        let kf = k as f64;
        let shift1 = match classify(k) {
            Some(0) => kf * ell(k).powi(2),
            Some(1) => -kf * ell(k - 1).powi(2),
            _ => 0.0,
        };
        let shift2 = match classify(k) {
            Some(0) => ell(k),
            _ => 0.0,
        };
        let (Element::Grid(r1), Element::Grid(r2)) = (l1.value(k), l2.value(k)) else {
            panic!("grid tables")
        };
        for p in 0..points {
            let e1 = tau1[(k - 1) as usize][p] + shift1;
            let e2 = tau2[(k - 1) as usize][p] + shift2;
            assert!(
                (r1[p] - e1).abs() <= 1e-9 * (1.0 + e1.abs()),
                "L1 at k = {k}, p = {p}: {} vs {e1}",
                r1[p]
            );
            assert!(
                (r2[p] - e2).abs() <= 1e-9 * (1.0 + e2.abs()),
                "L2 at k = {k}, p = {p}: {} vs {e2}",
                r2[p]
            );
        }
    }
}

type DistanceAt<'a> = Box<dyn Fn(u64) -> f64 + 'a>;

#[test]
fn means_of_a_convergent_sequence_approach_its_limit_monotonically() {
    let seq = Sequence::convergent(2.0, 5.0);
    let limit = 2.0;
    let dyadic: Vec<u64> = (6..=12).map(|e| 1u64 << e).collect();
    let distances = |f: &dyn Fn(u64) -> f64| -> Vec<f64> { dyadic.iter().map(|&n| f(n)).collect() };
    let families: Vec<(&str, DistanceAt<'_>)> = vec![
        (
            "cesaro",
            Box::new(|n| (scalar(cesaro(&seq, n).unwrap().value(n)) - limit).abs()),
        ),
        (
            "holder:2",
            Box::new(|n| (scalar(holder(&seq, 2, n).unwrap().value(n)) - limit).abs()),
        ),
        (
            "log",
            Box::new(|n| (scalar(log_mean(&seq, n).unwrap().value(n)) - limit).abs()),
        ),
        (
            "iterlog:2",
            Box::new(|n| (scalar(iterated_log(&seq, 2, n).unwrap().value(n)) - limit).abs()),
        ),
    ];
    for (name, f) in &families {
        let d = distances(f.as_ref());
        for w in d.windows(2) {
            assert!(
                w[1] < w[0] + 1e-12,
                "{name}: distance grew along the dyadic grid: {d:?}"
            );
        }
    }
}
