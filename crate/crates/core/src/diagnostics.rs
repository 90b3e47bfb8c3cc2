//! Finite-scale detectors for convergence notions in fuzzy normed spaces.
//!
//! A finite run can refute a quantified limit statement or fail to
//! falsify it; it can never prove one. Detectors therefore return one of
//! three statuses:
//!
//! * `Supported` — the data over the tail window is consistent with the
//!   statement at every grid cell;
//! * `RefutedAtScale` — a concrete witness violates it persistently;
//! * `Inconclusive` — neither, at the scanned scale.
//!
//! Statistical convergence of `u` to `a` is decided through the bad set
//! at fuzziness scale `t` and level `eps`:
//!
//! ```text
//! bad(t, eps) = { k : mu(u_k - a, t) <= 1 - eps  or  nu(u_k - a, t) >= eps }
//! ```
//!
//! whose running density `d_j = |bad ∩ [1, j]| / j` must stay below the
//! threshold `delta` on the tail window `[N/2, N]` for the statement to
//! be supported; a cell refutes when `d_j` sits above the divergence bar
//! on the whole tail window. The inequalities are exactly the non-strict
//! ones above; no floating tolerance is added since `mu` and `nu` are
//! smooth in their arguments.

use serde::{Deserialize, Serialize};

use crate::element::{Element, SpaceKind};
use crate::harmonic::ell;
use crate::ifnorm::{standard_mu, standard_nu};
use crate::kahan::ElementSum;
use crate::rng::SplitMix64;
use crate::sequence::Sequence;
use crate::transforms::TransformTable;
use crate::{Error, Result};

/// Anything that yields terms indexed from 1: a sequence (unbounded) or a
/// transform table (bounded).
pub trait Terms {
    fn space(&self) -> SpaceKind;
    /// Largest index available, `None` when unbounded.
    fn limit(&self) -> Option<u64>;
    fn term(&self, k: u64) -> Element;
    fn label(&self) -> String;

    /// `‖u_k - a‖` without cloning table rows.
    fn diff_norm(&self, k: u64, a: &Element) -> Result<f64> {
        diff_norm(&self.term(k), a)
    }

    fn term_norm(&self, k: u64) -> f64 {
        self.term(k).norm()
    }
}

impl Terms for Sequence {
    fn space(&self) -> SpaceKind {
        Sequence::space(self)
    }

    fn limit(&self) -> Option<u64> {
        None
    }

    fn term(&self, k: u64) -> Element {
        Sequence::term(self, k)
    }

    fn label(&self) -> String {
        self.name().to_string()
    }
}

impl Terms for TransformTable {
    fn space(&self) -> SpaceKind {
        TransformTable::space(self)
    }

    fn limit(&self) -> Option<u64> {
        Some(self.len())
    }

    fn term(&self, k: u64) -> Element {
        self.value(k).clone()
    }

    fn label(&self) -> String {
        format!("{}-table", self.method())
    }

    fn diff_norm(&self, k: u64, a: &Element) -> Result<f64> {
        diff_norm(self.value(k), a)
    }

    fn term_norm(&self, k: u64) -> f64 {
        self.value(k).norm()
    }
}

/// `‖u - a‖` component-wise, no allocation.
pub fn diff_norm(u: &Element, a: &Element) -> Result<f64> {
    match (u, a) {
        (Element::Scalar(x), Element::Scalar(y)) => Ok((x - y).abs()),
        (Element::Grid(xs), Element::Grid(ys)) if xs.len() == ys.len() => Ok(xs
            .iter()
            .zip(ys.iter())
            .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))),
        (Element::Grid(xs), Element::Grid(ys)) => Err(Error::GridSizeMismatch {
            expected: xs.len(),
            got: ys.len(),
        }),
        (u, a) => Err(Error::SpaceMismatch {
            expected: u.space().to_string(),
            got: a.space().to_string(),
        }),
    }
}

/// Grids, windows and thresholds shared by the detectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestParams {
    /// Fuzziness scales `t > 0`.
    pub t_grid: Vec<f64>,
    /// Levels `eps` in (0, 1).
    pub eps_grid: Vec<f64>,
    /// Window length for density-based detectors.
    pub n: u64,
    /// Density threshold for a supported cell.
    pub delta: f64,
    /// Density above which a cell counts as persistently divergent.
    pub divergence_bar: f64,
    /// Candidate `lambda > 1` values for the oscillation search.
    pub lambda_grid: Vec<f64>,
    /// Candidate starting indices for the oscillation search.
    pub m0_grid: Vec<u64>,
    /// Window length for oscillation scans.
    pub osc_n: u64,
    /// Pair budget for oscillation scans; exceeding it is inconclusive.
    pub pair_cap: u64,
    /// Scales for q-boundedness profiles, increasing.
    pub q_t_list: Vec<f64>,
    /// Closeness required of the profile at the largest scale.
    pub q_tol: f64,
    /// `sup nu` at the largest scale above this refutes q-boundedness.
    pub q_refute_bar: f64,
}

impl Default for TestParams {
    fn default() -> Self {
        Self {
            t_grid: vec![0.25, 1.0, 4.0],
            eps_grid: vec![0.25, 0.1, 0.01],
            n: 10_000,
            delta: 0.02,
            divergence_bar: 0.25,
            lambda_grid: vec![1.05, 1.1, 1.25, 1.5, 2.0],
            m0_grid: vec![1, 4, 16, 64],
            osc_n: 1000,
            pair_cap: 10_000_000,
            q_t_list: vec![1.0, 10.0, 100.0, 1000.0],
            q_tol: 0.01,
            q_refute_bar: 0.5,
        }
    }
}

impl TestParams {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::InvalidParams(m.into()));
        if self.t_grid.is_empty() || self.eps_grid.is_empty() {
            return fail("t and eps grids must be nonempty");
        }
        if self.t_grid.iter().any(|t| *t <= 0.0) {
            return fail("every t must be positive");
        }
        if self
            .eps_grid
            .iter()
            .any(|e| !(0.0..1.0).contains(e) || *e == 0.0)
        {
            return fail("every eps must lie in (0, 1)");
        }
        if self.n < 10 {
            return fail("window length n must be at least 10");
        }
        if !(0.0 < self.delta && self.delta < 1.0) {
            return fail("delta must lie in (0, 1)");
        }
        if !(self.delta <= self.divergence_bar && self.divergence_bar < 1.0) {
            return fail("divergence bar must lie in [delta, 1)");
        }
        if self.lambda_grid.is_empty() || self.lambda_grid.iter().any(|l| *l <= 1.0) {
            return fail("lambda grid must be nonempty with every lambda > 1");
        }
        if self.m0_grid.is_empty() || self.m0_grid.contains(&0) {
            return fail("m0 grid must be nonempty with every m0 >= 1");
        }
        if self.osc_n < 2 {
            return fail("oscillation window must be at least 2");
        }
        if self.q_t_list.is_empty()
            || self.q_t_list.iter().any(|t| *t <= 0.0)
            || self.q_t_list.windows(2).any(|w| w[0] >= w[1])
        {
            return fail("q-bounded scales must be positive and increasing");
        }
        Ok(())
    }

    /// First index of the tail window `[n/2, n]`.
    pub fn tail_lo(&self) -> u64 {
        (self.n / 2).max(1)
    }

    /// First index of the last-quarter window.
    pub fn quarter_lo(&self) -> u64 {
        (self.n - self.n / 4).max(1)
    }
}

/// Outcome statuses of a finite-scale check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictStatus {
    Supported,
    RefutedAtScale,
    Inconclusive,
}

/// A concrete index or index pair backing a refutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Witness {
    Index(u64),
    Pair(u64, u64),
}

/// A three-valued verdict; refutations always carry a witness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub witness: Option<Witness>,
    pub note: String,
}

impl Verdict {
    pub fn supported(note: impl Into<String>) -> Self {
        Self {
            status: VerdictStatus::Supported,
            witness: None,
            note: note.into(),
        }
    }

    pub fn refuted(witness: Witness, note: impl Into<String>) -> Self {
        Self {
            status: VerdictStatus::RefutedAtScale,
            witness: Some(witness),
            note: note.into(),
        }
    }

    pub fn inconclusive(note: impl Into<String>) -> Self {
        Self {
            status: VerdictStatus::Inconclusive,
            witness: None,
            note: note.into(),
        }
    }

    pub fn is_supported(&self) -> bool {
        self.status == VerdictStatus::Supported
    }

    pub fn is_refuted(&self) -> bool {
        self.status == VerdictStatus::RefutedAtScale
    }
}

/// Running densities `d_j = |bad ∩ [1, j]| / j` of a bad-index set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityProfile {
    pub n: u64,
    /// Sorted bad indices in `[1, n]`.
    pub bad_indices: Vec<u64>,
}

impl DensityProfile {
    pub fn new(bad_indices: Vec<u64>, n: u64) -> Self {
        debug_assert!(bad_indices.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(bad_indices.iter().all(|k| (1..=n).contains(k)));
        Self { n, bad_indices }
    }

    pub fn count_up_to(&self, j: u64) -> u64 {
        self.bad_indices.partition_point(|k| *k <= j) as u64
    }

    pub fn density_at(&self, j: u64) -> f64 {
        debug_assert!(j >= 1);
        self.count_up_to(j) as f64 / j as f64
    }

    /// All densities `d_1 .. d_n`.
    pub fn densities(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n as usize);
        let mut count = 0usize;
        for j in 1..=self.n {
            if count < self.bad_indices.len() && self.bad_indices[count] == j {
                count += 1;
            }
            out.push(count as f64 / j as f64);
        }
        out
    }

    /// Maximum density over `[lo, hi]` with the first index attaining it.
    pub fn max_density_on(&self, lo: u64, hi: u64) -> (u64, f64) {
        self.extremum_on(lo, hi, true)
    }

    /// Minimum density over `[lo, hi]` with the first index attaining it.
    pub fn min_density_on(&self, lo: u64, hi: u64) -> (u64, f64) {
        self.extremum_on(lo, hi, false)
    }

    fn extremum_on(&self, lo: u64, hi: u64, want_max: bool) -> (u64, f64) {
        debug_assert!(1 <= lo && lo <= hi && hi <= self.n);
        let mut count = self.count_up_to(lo - 1);
        let mut idx = self.count_up_to(lo - 1) as usize;
        let mut best = (lo, f64::NAN);
        for j in lo..=hi {
            if idx < self.bad_indices.len() && self.bad_indices[idx] == j {
                idx += 1;
                count += 1;
            }
            let d = count as f64 / j as f64;
            let better = best.1.is_nan() || if want_max { d > best.1 } else { d < best.1 };
            if better {
                best = (j, d);
            }
        }
        best
    }

    /// At most `max_points` evenly spaced `(j, d_j)` pairs, always ending
    /// at `(n, d_n)`.
    pub fn downsample(&self, max_points: usize) -> Vec<(u64, f64)> {
        debug_assert!(max_points >= 1);
        let n = self.n;
        let step = n.div_ceil(max_points as u64).max(1);
        let mut out: Vec<(u64, f64)> = (1..=n)
            .step_by(step as usize)
            .map(|j| (j, self.density_at(j)))
            .collect();
        if out.last().map(|p| p.0) != Some(n) {
            out.push((n, self.density_at(n)));
        }
        out
    }
}

fn check_grid_source(source: &dyn Terms, a: &Element, n: u64) -> Result<()> {
    if source.space() != a.space() {
        return Err(Error::SpaceMismatch {
            expected: source.space().to_string(),
            got: a.space().to_string(),
        });
    }
    if let Some(len) = source.limit() {
        if len < n {
            return Err(Error::TableTooShort { needed: n, len });
        }
    }
    Ok(())
}

/// Indices `k <= n` that are bad for the limit `a` at `(t, eps)`.
pub fn eps_bad_set(source: &dyn Terms, a: &Element, t: f64, eps: f64, n: u64) -> Result<Vec<u64>> {
    if t <= 0.0 || !(0.0 < eps && eps < 1.0) {
        return Err(Error::InvalidParams(
            "eps_bad_set needs t > 0 and eps in (0, 1)".into(),
        ));
    }
    check_grid_source(source, a, n)?;
    let mut bad = Vec::new();
    for k in 1..=n {
        let r = source.diff_norm(k, a)?;
        let d = Element::Scalar(r);
        if standard_mu(&d, t) <= 1.0 - eps || standard_nu(&d, t) >= eps {
            bad.push(k);
        }
    }
    Ok(bad)
}

/// One `(t, eps)` cell of a statistical-limit run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatCell {
    pub t: f64,
    pub eps: f64,
    pub verdict: Verdict,
    pub max_tail_density: f64,
    pub max_tail_at: u64,
    pub profile: DensityProfile,
}

/// Result of a statistical-limit run over the full parameter grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatReport {
    pub source: String,
    pub n: u64,
    pub delta: f64,
    pub divergence_bar: f64,
    pub tail_lo: u64,
    pub cells: Vec<StatCell>,
    pub aggregate: Verdict,
}

fn cell_verdict(profile: &DensityProfile, params: &TestParams, t: f64, eps: f64) -> StatCell {
    let lo = params.tail_lo();
    let hi = params.n;
    let (max_at, max_d) = profile.max_density_on(lo, hi);
    let (_, min_d) = profile.min_density_on(lo, hi);
    let verdict = if min_d >= params.divergence_bar {
        let witness = *profile
            .bad_indices
            .last()
            .expect("positive density implies a bad index");
        Verdict::refuted(
            Witness::Index(witness),
            format!(
                "density stays at or above {} on [{lo}, {hi}] at (t={t}, eps={eps})",
                params.divergence_bar
            ),
        )
    } else if max_d <= params.delta {
        Verdict::supported(format!(
            "max tail density {max_d:.6} <= delta {} at (t={t}, eps={eps})",
            params.delta
        ))
    } else {
        Verdict::inconclusive(format!(
            "max tail density {max_d:.6} at j={max_at} exceeds delta {} without persistent divergence at (t={t}, eps={eps})",
            params.delta
        ))
    };
    StatCell {
        t,
        eps,
        verdict,
        max_tail_density: max_d,
        max_tail_at: max_at,
        profile: profile.clone(),
    }
}

fn aggregate_cells(cells: &[StatCell]) -> Verdict {
    if let Some(c) = cells.iter().find(|c| c.verdict.is_refuted()) {
        return Verdict::refuted(
            c.verdict.witness.expect("refuted cells carry a witness"),
            format!("refuted at cell (t={}, eps={})", c.t, c.eps),
        );
    }
    if cells.iter().all(|c| c.verdict.is_supported()) {
        return Verdict::supported("all grid cells within delta on the tail window");
    }
    let pending: Vec<String> = cells
        .iter()
        .filter(|c| c.verdict.status == VerdictStatus::Inconclusive)
        .map(|c| format!("(t={}, eps={})", c.t, c.eps))
        .collect();
    Verdict::inconclusive(format!("inconclusive cells: {}", pending.join(", ")))
}

/// Statistical limit detector: the bad set of each `(t, eps)` cell must
/// keep density at most `delta` across the tail window.
pub fn stat_limit_verdict(
    source: &dyn Terms,
    a: &Element,
    params: &TestParams,
) -> Result<StatReport> {
    params.validate()?;
    let mut cells = Vec::new();
    for &t in &params.t_grid {
        for &eps in &params.eps_grid {
            let bad = eps_bad_set(source, a, t, eps, params.n)?;
            let profile = DensityProfile::new(bad, params.n);
            cells.push(cell_verdict(&profile, params, t, eps));
        }
    }
    let aggregate = aggregate_cells(&cells);
    Ok(StatReport {
        source: source.label(),
        n: params.n,
        delta: params.delta,
        divergence_bar: params.divergence_bar,
        tail_lo: params.tail_lo(),
        cells,
        aggregate,
    })
}

/// The same detector through the scalar characterization: the real
/// sequences `mu(u_k - a, t)` and `nu(u_k - a, t)` must statistically
/// tend to 1 and 0. Each cell combines the two scalar bad sets. For the
/// standard pair this is equivalent to [`stat_limit_verdict`]; both
/// routes exist so they can be checked against each other.
pub fn stat_limit_verdict_scalar_route(
    source: &dyn Terms,
    a: &Element,
    params: &TestParams,
) -> Result<StatReport> {
    params.validate()?;
    let mut cells = Vec::new();
    for &t in &params.t_grid {
        for &eps in &params.eps_grid {
            check_grid_source(source, a, params.n)?;
            let mut bad = Vec::new();
            for k in 1..=params.n {
                let r = source.diff_norm(k, a)?;
                let d = Element::Scalar(r);
                let mu_bad = 1.0 - standard_mu(&d, t) >= eps;
                let nu_bad = standard_nu(&d, t) >= eps;
                if mu_bad || nu_bad {
                    bad.push(k);
                }
            }
            let profile = DensityProfile::new(bad, params.n);
            cells.push(cell_verdict(&profile, params, t, eps));
        }
    }
    let aggregate = aggregate_cells(&cells);
    Ok(StatReport {
        source: source.label(),
        n: params.n,
        delta: params.delta,
        divergence_bar: params.divergence_bar,
        tail_lo: params.tail_lo(),
        cells,
        aggregate,
    })
}

/// One `(t, eps)` cell of an ordinary-convergence run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrdinaryCell {
    pub t: f64,
    pub eps: f64,
    pub verdict: Verdict,
    pub last_bad: Option<u64>,
    pub bad_count: u64,
}

/// Result of an ordinary-convergence run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrdinaryReport {
    pub source: String,
    pub n: u64,
    pub cells: Vec<OrdinaryCell>,
    pub aggregate: Verdict,
}

/// Ordinary convergence detector: supported when each cell's bad set
/// dies out before the half-way point, refuted when bad indices recur in
/// the last quarter of the window.
pub fn ordinary_convergence_verdict(
    source: &dyn Terms,
    a: &Element,
    params: &TestParams,
) -> Result<OrdinaryReport> {
    params.validate()?;
    let half = params.tail_lo();
    let quarter = params.quarter_lo();
    let mut cells = Vec::new();
    for &t in &params.t_grid {
        for &eps in &params.eps_grid {
            let bad = eps_bad_set(source, a, t, eps, params.n)?;
            let last_bad = bad.last().copied();
            let verdict = match last_bad {
                None => Verdict::supported(format!("no bad index at (t={t}, eps={eps})")),
                Some(last) if last < half => Verdict::supported(format!(
                    "bad set empty from {} on at (t={t}, eps={eps})",
                    last + 1
                )),
                Some(last) if last >= quarter => Verdict::refuted(
                    Witness::Index(last),
                    format!(
                        "bad index {last} in the last quarter [{quarter}, {}] at (t={t}, eps={eps})",
                        params.n
                    ),
                ),
                Some(last) => Verdict::inconclusive(format!(
                    "bad indices up to {last} reach past {half} but not the last quarter at (t={t}, eps={eps})"
                )),
            };
            cells.push(OrdinaryCell {
                t,
                eps,
                verdict,
                last_bad,
                bad_count: bad.len() as u64,
            });
        }
    }
    let aggregate = if let Some(c) = cells.iter().find(|c| c.verdict.is_refuted()) {
        Verdict::refuted(
            c.verdict.witness.expect("refuted cells carry a witness"),
            format!("refuted at cell (t={}, eps={})", c.t, c.eps),
        )
    } else if cells.iter().all(|c| c.verdict.is_supported()) {
        Verdict::supported("every grid cell settles before the half-way point")
    } else {
        Verdict::inconclusive("some cell has stragglers past the half-way point")
    };
    Ok(OrdinaryReport {
        source: source.label(),
        n: params.n,
        cells,
        aggregate,
    })
}

/// One scale of a q-boundedness profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QRow {
    pub t: f64,
    pub inf_mu: f64,
    pub sup_nu: f64,
}

/// Profile of `inf_k mu(u_k, t)` and `sup_k nu(u_k, t)` over `k <= k_max`
/// for increasing scales `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QBoundedReport {
    pub source: String,
    pub k_max: u64,
    pub max_norm: f64,
    pub max_norm_at: u64,
    pub rows: Vec<QRow>,
    pub verdict: Verdict,
}

/// q-boundedness detector. For the standard pair both extrema are taken
/// at the index of largest norm, so the scan computes norms once and the
/// profile exactly. Supported requires the profile to approach (1, 0)
/// monotonically and reach it within `q_tol` at the largest scale.
pub fn q_bounded_profile(
    source: &dyn Terms,
    k_max: u64,
    params: &TestParams,
) -> Result<QBoundedReport> {
    params.validate()?;
    if k_max < 1 {
        return Err(Error::InvalidParams(
            "q_bounded_profile needs k_max >= 1".into(),
        ));
    }
    if let Some(len) = source.limit() {
        if len < k_max {
            return Err(Error::TableTooShort { needed: k_max, len });
        }
    }
    let (mut max_norm, mut max_at) = (f64::NEG_INFINITY, 1);
    for k in 1..=k_max {
        let r = source.term_norm(k);
        if r > max_norm {
            max_norm = r;
            max_at = k;
        }
    }
    let worst = Element::Scalar(max_norm);
    let rows: Vec<QRow> = params
        .q_t_list
        .iter()
        .map(|&t| QRow {
            t,
            inf_mu: standard_mu(&worst, t),
            sup_nu: standard_nu(&worst, t),
        })
        .collect();
    let monotone = rows
        .windows(2)
        .all(|w| w[1].inf_mu >= w[0].inf_mu - 1e-12 && w[1].sup_nu <= w[0].sup_nu + 1e-12);
    let last = rows.last().expect("validated nonempty");
    let verdict = if monotone && last.inf_mu >= 1.0 - params.q_tol && last.sup_nu <= params.q_tol {
        Verdict::supported(format!(
            "profile reaches (inf mu, sup nu) = ({:.6}, {:.6}) at t = {}",
            last.inf_mu, last.sup_nu, last.t
        ))
    } else if last.sup_nu >= params.q_refute_bar {
        Verdict::refuted(
            Witness::Index(max_at),
            format!(
                "sup nu = {:.6} at the largest scale t = {}; witness norm {max_norm:.6e} at k = {max_at}",
                last.sup_nu, last.t
            ),
        )
    } else {
        Verdict::inconclusive(format!(
            "profile ends at (inf mu, sup nu) = ({:.6}, {:.6}) at t = {}",
            last.inf_mu, last.sup_nu, last.t
        ))
    };
    Ok(QBoundedReport {
        source: source.label(),
        k_max,
        max_norm,
        max_norm_at: max_at,
        rows,
        verdict,
    })
}

/// Which index comparison a slow-oscillation condition uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OscVariant {
    /// Pairs `m0 <= n < k <= floor(lambda * n)`.
    Cesaro,
    /// Pairs `m0 <= n < k <= floor(n ^ lambda)`.
    Log,
}

impl OscVariant {
    fn pair_hi(&self, n: u64, lambda: f64) -> u64 {
        match self {
            OscVariant::Cesaro => (lambda * n as f64).floor() as u64,
            OscVariant::Log => (n as f64).powf(lambda).floor() as u64,
        }
    }
}

/// Result of one falsifier scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscOutcome {
    pub variant: OscVariant,
    pub t: f64,
    pub eps: f64,
    pub lambda: f64,
    pub m0: u64,
    pub n: u64,
    pub pairs_scanned: u64,
    pub verdict: Verdict,
}

#[allow(clippy::too_many_arguments)]
fn falsify(
    source: &dyn Terms,
    variant: OscVariant,
    t: f64,
    eps: f64,
    lambda: f64,
    m0: u64,
    n: u64,
    pair_cap: u64,
) -> Result<OscOutcome> {
    if lambda <= 1.0 {
        return Err(Error::InvalidParams(
            "slow oscillation needs lambda > 1".into(),
        ));
    }
    if m0 < 1 || t <= 0.0 || !(0.0 < eps && eps < 1.0) {
        return Err(Error::InvalidParams(
            "slow oscillation needs m0 >= 1, t > 0, eps in (0, 1)".into(),
        ));
    }
    if let Some(len) = source.limit() {
        let needed = variant.pair_hi(n, lambda);
        if len < needed {
            return Err(Error::TableTooShort { needed, len });
        }
    }
    let mut pairs = 0u64;
    for lo in m0..=n {
        let hi = variant.pair_hi(lo, lambda);
        if hi <= lo {
            continue;
        }
        let u_lo = source.term(lo);
        for k in lo + 1..=hi {
            pairs += 1;
            if pairs > pair_cap {
                return Ok(OscOutcome {
                    variant,
                    t,
                    eps,
                    lambda,
                    m0,
                    n,
                    pairs_scanned: pairs - 1,
                    verdict: Verdict::inconclusive(format!(
                        "pair budget {pair_cap} exhausted before the scan finished"
                    )),
                });
            }
            let d = Element::Scalar(diff_norm(&source.term(k), &u_lo)?);
            if standard_mu(&d, t) <= 1.0 - eps || standard_nu(&d, t) >= eps {
                return Ok(OscOutcome {
                    variant,
                    t,
                    eps,
                    lambda,
                    m0,
                    n,
                    pairs_scanned: pairs,
                    verdict: Verdict::refuted(
                        Witness::Pair(lo, k),
                        format!(
                            "pair (n={lo}, k={k}) violates the oscillation bound: ‖u_k - u_n‖ = {:.6e}",
                            d.norm()
                        ),
                    ),
                });
            }
        }
    }
    let verdict = if pairs == 0 {
        // no evidence either way, e.g. m0 beyond the window
        Verdict::inconclusive("the scan window contains no index pairs")
    } else {
        Verdict::supported(format!("all {pairs} pairs within the bound"))
    };
    Ok(OscOutcome {
        variant,
        t,
        eps,
        lambda,
        m0,
        n,
        pairs_scanned: pairs,
        verdict,
    })
}

/// Scan all pairs `m0 <= n < k <= floor(lambda n)`, `n <= N`, and refute
/// slow oscillation with the first violating pair.
pub fn slow_osc_falsify(
    source: &dyn Terms,
    t: f64,
    eps: f64,
    lambda: f64,
    m0: u64,
    n: u64,
    pair_cap: u64,
) -> Result<OscOutcome> {
    falsify(source, OscVariant::Cesaro, t, eps, lambda, m0, n, pair_cap)
}

/// The logarithmic variant: pairs `m0 <= n < k <= floor(n ^ lambda)`.
/// The pair set explodes quickly, so exceeding the cap reports
/// inconclusive rather than silently truncating.
pub fn slow_osc_log_falsify(
    source: &dyn Terms,
    t: f64,
    eps: f64,
    lambda: f64,
    m0: u64,
    n: u64,
    pair_cap: u64,
) -> Result<OscOutcome> {
    falsify(source, OscVariant::Log, t, eps, lambda, m0, n, pair_cap)
}

/// A `(lambda, m0)` pair that survived a falsifier scan at `(t, eps)`.
/// Only the search constructs these; the lemma checks require one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    variant: OscVariant,
    t: f64,
    eps: f64,
    lambda: f64,
    m0: u64,
    n: u64,
    source: String,
}

impl Certificate {
    pub fn variant(&self) -> OscVariant {
        self.variant
    }
    pub fn t(&self) -> f64 {
        self.t
    }
    pub fn eps(&self) -> f64 {
        self.eps
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn m0(&self) -> u64 {
        self.m0
    }
    pub fn n(&self) -> u64 {
        self.n
    }
    pub fn source(&self) -> &str {
        &self.source
    }
}

/// Result of the grid search for a slow-oscillation certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub certificate: Option<Certificate>,
    /// `(lambda, m0, status)` in scan order: lambda descending, m0
    /// ascending, stopping at the first pass.
    pub attempts: Vec<(f64, u64, VerdictStatus)>,
    /// True when every grid point was scanned to completion and refuted.
    pub exhausted_refuted: bool,
    /// Witness pair from the last refuted attempt, if any.
    pub sample_refutation: Option<Witness>,
}

/// Grid search realizing the existential quantifier over `(lambda, m0)`:
/// returns the largest passing lambda with its smallest passing m0.
#[allow(clippy::too_many_arguments)]
pub fn slow_osc_search(
    source: &dyn Terms,
    variant: OscVariant,
    t: f64,
    eps: f64,
    lambda_grid: &[f64],
    m0_grid: &[u64],
    n: u64,
    pair_cap: u64,
) -> Result<SearchReport> {
    if lambda_grid.is_empty() || m0_grid.is_empty() {
        return Err(Error::InvalidParams("search grids must be nonempty".into()));
    }
    let mut lambdas = lambda_grid.to_vec();
    lambdas.sort_by(|a, b| b.partial_cmp(a).expect("finite lambda"));
    let mut m0s = m0_grid.to_vec();
    m0s.sort_unstable();
    let mut attempts = Vec::new();
    let mut saw_inconclusive = false;
    let mut sample_refutation = None;
    for &lambda in &lambdas {
        for &m0 in &m0s {
            let outcome = falsify(source, variant, t, eps, lambda, m0, n, pair_cap)?;
            attempts.push((lambda, m0, outcome.verdict.status));
            match outcome.verdict.status {
                VerdictStatus::Supported => {
                    return Ok(SearchReport {
                        certificate: Some(Certificate {
                            variant,
                            t,
                            eps,
                            lambda,
                            m0,
                            n,
                            source: source.label(),
                        }),
                        attempts,
                        exhausted_refuted: false,
                        sample_refutation,
                    });
                }
                VerdictStatus::Inconclusive => saw_inconclusive = true,
                VerdictStatus::RefutedAtScale => sample_refutation = outcome.verdict.witness,
            }
        }
    }
    Ok(SearchReport {
        certificate: None,
        attempts,
        exhausted_refuted: !saw_inconclusive,
        sample_refutation,
    })
}

/// Outcome of the oscillation-lemma spot checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub pair_checks: u64,
    pub pair_failures: u64,
    pub first_pair_failure: Option<(u64, u64)>,
    /// Smallest `mu - (1 - eps)` margin over the pair checks.
    pub min_pair_margin: f64,
    pub avg_checks: u64,
    pub avg_failures: u64,
    /// Smallest `mu - (1 - eps)` margin over the averaged checks.
    pub min_avg_margin: f64,
    pub seed: u64,
    pub passed: bool,
}

/// Spot-check the chained-pair and averaged inequalities implied by a
/// slow-oscillation certificate.
///
/// For sampled `(n, k)` with `m0 <= k <= n/lambda` (Cesàro variant) the
/// difference `u_n - u_k` must stay accepted at the inflated scale
/// `{1 + ln(2n/k)/ln lambda} t`, and the window average
/// `(1/n) sum_{k=m0}^{floor(n/lambda)} (u_n - u_k)` at
/// `{1 + (ln 2 + 1)/ln lambda} t`. The logarithmic variant uses
/// `k <= n^(1/lambda)`, the scale `{1 + ln(2 ln n / ln k)/ln lambda} t`,
/// the weighted average `(1/ell_n) sum (u_n - u_k)/k`, and the factor
/// `{1 + (ln 2 + 2)/ln lambda}`; it needs `m0 >= 2`.
pub fn lemma_chain_check(
    seq: &Sequence,
    cert: &Certificate,
    sample_count: u64,
    seed: u64,
) -> Result<LemmaReport> {
    if sample_count == 0 {
        return Err(Error::EmptySamples);
    }
    if cert.source != seq.name() {
        return Err(Error::Uncertified(format!(
            "certificate for {:?} used with sequence {:?}",
            cert.source,
            seq.name()
        )));
    }
    if cert.variant == OscVariant::Log && cert.m0 < 2 {
        return Err(Error::Uncertified(
            "the logarithmic lemma checks need a certificate with m0 >= 2".into(),
        ));
    }
    let lambda = cert.lambda;
    let ln_lambda = lambda.ln();
    // smallest n whose k-range [m0, k_hi(n)] is nonempty
    let k_hi = |n: u64| -> u64 {
        match cert.variant {
            OscVariant::Cesaro => (n as f64 / lambda).floor() as u64,
            OscVariant::Log => (n as f64).powf(1.0 / lambda).floor() as u64,
        }
    };
    let mut n_lo = cert.m0.max(2);
    while k_hi(n_lo) < cert.m0 {
        n_lo += 1;
        if n_lo > cert.n {
            return Err(Error::InvalidParams(
                "no index n in the certified window has a nonempty pair range".into(),
            ));
        }
    }
    let mut rng = SplitMix64::new(seed);
    let accept = |d: &Element, scale: f64| -> (bool, f64) {
        let mu = standard_mu(d, scale);
        let nu = standard_nu(d, scale);
        let ok = mu > 1.0 - cert.eps && nu < cert.eps;
        (ok, mu - (1.0 - cert.eps))
    };

    let mut pair_failures = 0;
    let mut first_pair_failure = None;
    let mut min_pair_margin = f64::INFINITY;
    for _ in 0..sample_count {
        let n = rng.range_u64(n_lo, cert.n);
        let k = rng.range_u64(cert.m0, k_hi(n));
        let d = seq.term(n).sub(&seq.term(k))?;
        let scale = match cert.variant {
            OscVariant::Cesaro => (1.0 + (2.0 * n as f64 / k as f64).ln() / ln_lambda) * cert.t,
            OscVariant::Log => {
                (1.0 + (2.0 * (n as f64).ln() / (k as f64).ln()).ln() / ln_lambda) * cert.t
            }
        };
        let (ok, margin) = accept(&d, scale);
        min_pair_margin = min_pair_margin.min(margin);
        if !ok {
            pair_failures += 1;
            first_pair_failure.get_or_insert((n, k));
        }
    }

    let avg_count = sample_count.min(64);
    let mut avg_failures = 0;
    let mut min_avg_margin = f64::INFINITY;
    let factor = match cert.variant {
        OscVariant::Cesaro => 1.0 + (std::f64::consts::LN_2 + 1.0) / ln_lambda,
        OscVariant::Log => 1.0 + (std::f64::consts::LN_2 + 2.0) / ln_lambda,
    };
    for _ in 0..avg_count {
        let n = rng.range_u64(n_lo, cert.n);
        let hi = k_hi(n);
        let u_n = seq.term(n);
        let mut acc = ElementSum::zero(&seq.space());
        for k in cert.m0..=hi {
            let d = u_n.sub(&seq.term(k))?;
            let w = match cert.variant {
                OscVariant::Cesaro => 1.0,
                OscVariant::Log => k as f64,
            };
            acc.add_div(&d, w)?;
        }
        let avg = match cert.variant {
            OscVariant::Cesaro => acc.value_div(n as f64),
            OscVariant::Log => acc.value_div(ell(n)),
        };
        let (ok, margin) = accept(&avg, factor * cert.t);
        min_avg_margin = min_avg_margin.min(margin);
        if !ok {
            avg_failures += 1;
        }
    }

    Ok(LemmaReport {
        pair_checks: sample_count,
        pair_failures,
        first_pair_failure,
        min_pair_margin,
        avg_checks: avg_count,
        avg_failures,
        min_avg_margin,
        seed,
        passed: pair_failures == 0 && avg_failures == 0,
    })
}
