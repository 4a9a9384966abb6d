//! Floquet-discriminant oracle for `-ψ'' + Vψ = Eψ`.
//!
//! The transfer matrix over one period `2K(m)` of the potential is obtained
//! by classical RK4 on a uniform grid. Its trace `Δ(E)` satisfies
//! `|Δ| ≤ 2` on allowed bands; `Δ = +2` edges carry `2K`-periodic states and
//! `Δ = −2` edges `4K`-periodic (antiperiodic) ones. Closed gaps show up as
//! tangential touches of `±2`.
//!
//! The potential has period `2K`, not `K`: shifting by `K` exchanges the
//! `sn²` and `cn²/dn²` terms.

use rayon::prelude::*;
use serde::Serialize;

use crate::elliptic::complete_k;
use crate::error::{Error, Result};
use crate::params::PotentialParams;
use crate::qes::PeriodClass;
use crate::spectral::BandEdgeSolution;

pub const DEFAULT_STEPS: usize = 20_000;
pub const DEFAULT_SCAN_POINTS: usize = 4000;

const EDGE_TOL: f64 = 1e-10;
const TOUCH_TOL: f64 = 1e-6;
const WARN_TOL: f64 = 1e-4;
const DELTA_TOL: f64 = 1e-5;
const MATCH_TOL: f64 = 1e-6;
const MIN_RESOLVED_STEPS: usize = 1000;

/// Transfer matrix over one period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Monodromy {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
}

impl Monodromy {
    pub fn det(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    /// The discriminant `Δ`.
    pub fn trace(&self) -> f64 {
        self.m11 + self.m22
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscriminantSample {
    pub energy: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EdgeKind {
    #[serde(rename = "periodic_2K")]
    Periodic2K,
    #[serde(rename = "antiperiodic_4K")]
    Antiperiodic4K,
    #[serde(rename = "degenerate_2K")]
    Degenerate2K,
    #[serde(rename = "degenerate_4K")]
    Degenerate4K,
}

impl EdgeKind {
    pub fn period_class(self) -> PeriodClass {
        match self {
            EdgeKind::Periodic2K | EdgeKind::Degenerate2K => PeriodClass::TwoK,
            EdgeKind::Antiperiodic4K | EdgeKind::Degenerate4K => PeriodClass::FourK,
        }
    }

    pub fn is_degenerate(self) -> bool {
        matches!(self, EdgeKind::Degenerate2K | EdgeKind::Degenerate4K)
    }
}

impl std::fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EdgeKind::Periodic2K => "periodic_2K",
            EdgeKind::Antiperiodic4K => "antiperiodic_4K",
            EdgeKind::Degenerate2K => "degenerate_2K",
            EdgeKind::Degenerate4K => "degenerate_4K",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BandEdge {
    pub energy: f64,
    pub kind: EdgeKind,
}

/// Edges found in a bracket plus resolution-limit warnings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeScan {
    pub edges: Vec<BandEdge>,
    pub warnings: Vec<String>,
}

/// Knobs for [`find_band_edges_with`].
#[derive(Debug, Clone, Copy)]
pub struct EdgeSearch {
    pub scan_points: usize,
    pub steps: usize,
}

impl Default for EdgeSearch {
    fn default() -> Self {
        Self {
            scan_points: DEFAULT_SCAN_POINTS,
            steps: DEFAULT_STEPS,
        }
    }
}

/// `a(a+1) m sn² + b(b+1) m cn²/dn² + shift`.
pub fn potential_value(x: f64, p: &PotentialParams) -> f64 {
    p.potential(x)
}

/// A potential tabulated at the RK4 nodes `x_i` and midpoints
/// `x_i + h/2` of a uniform grid over one period.
#[derive(Debug, Clone)]
pub struct SampledPotential {
    step: f64,
    steps: usize,
    values: Vec<f64>,
}

fn axpy<const N: usize>(y: &[f64; N], k: &[f64; N], h: f64) -> [f64; N] {
    std::array::from_fn(|i| y[i] + h * k[i])
}

impl SampledPotential {
    pub fn new(v: impl Fn(f64) -> f64 + Sync, period: f64, steps: usize) -> Result<Self> {
        if steps == 0 || !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "need steps > 0 and a positive period (steps = {steps}, period = {period})"
            )));
        }
        let step = period / steps as f64;
        let values: Vec<f64> = (0..=2 * steps)
            .into_par_iter()
            .map(|i| v(0.5 * step * i as f64))
            .collect();
        Ok(Self { step, steps, values })
    }

    pub fn for_params(p: &PotentialParams, steps: usize) -> Result<Self> {
        Self::new(|x| p.potential(x), 2.0 * complete_k(p.m()), steps)
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    fn integrate<const N: usize>(
        &self,
        energy: f64,
        init: [f64; N],
        rhs: impl Fn(f64, &[f64; N]) -> [f64; N],
    ) -> Result<[f64; N]> {
        let h = self.step;
        let mut y = init;
        for i in 0..self.steps {
            let q0 = self.values[2 * i] - energy;
            let qm = self.values[2 * i + 1] - energy;
            let q1 = self.values[2 * i + 2] - energy;
            let k1 = rhs(q0, &y);
            let k2 = rhs(qm, &axpy(&y, &k1, 0.5 * h));
            let k3 = rhs(qm, &axpy(&y, &k2, 0.5 * h));
            let k4 = rhs(q1, &axpy(&y, &k3, h));
            y = std::array::from_fn(|j| y[j] + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]));
        }
        if y.iter().all(|v| v.is_finite()) {
            Ok(y)
        } else {
            Err(Error::NonFinite(energy))
        }
    }

    /// Columns start from `(ψ, ψ') = (1, 0)` and `(0, 1)`.
    pub fn monodromy(&self, energy: f64) -> Result<Monodromy> {
        let y = self.integrate(energy, [1.0, 0.0, 0.0, 1.0], |q, y| {
            [y[1], q * y[0], y[3], q * y[2]]
        })?;
        Ok(Monodromy {
            m11: y[0],
            m12: y[2],
            m21: y[1],
            m22: y[3],
        })
    }

    /// Monodromy and its energy derivative, from the variational equation
    /// `z'' = (V − E) z − ψ`.
    pub fn monodromy_with_derivative(&self, energy: f64) -> Result<(Monodromy, Monodromy)> {
        let init = [1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0];
        let y = self.integrate(energy, init, |q, y| {
            [
                y[1],
                q * y[0],
                y[3],
                q * y[2],
                y[5],
                q * y[4] - y[0],
                y[7],
                q * y[6] - y[2],
            ]
        })?;
        Ok((
            Monodromy { m11: y[0], m12: y[2], m21: y[1], m22: y[3] },
            Monodromy { m11: y[4], m12: y[6], m21: y[5], m22: y[7] },
        ))
    }

    pub fn discriminant(&self, energy: f64) -> Result<f64> {
        Ok(self.monodromy(energy)?.trace())
    }

    fn discriminant_slope(&self, energy: f64) -> Result<(f64, f64)> {
        let (m, dm) = self.monodromy_with_derivative(energy)?;
        Ok((m.trace(), dm.trace()))
    }
}

/// Transfer matrix over `[0, 2K]` at uniform step `2K/steps`.
pub fn monodromy(energy: f64, p: &PotentialParams, steps: usize) -> Result<Monodromy> {
    SampledPotential::for_params(p, steps)?.monodromy(energy)
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let h = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + h * i as f64 })
        .collect()
}

fn check_bracket(e_min: f64, e_max: f64, samples: usize) -> Result<()> {
    if !(e_min.is_finite() && e_max.is_finite() && e_min < e_max) || samples < 2 {
        return Err(Error::InvalidArgument(format!(
            "need e_min < e_max and at least 2 samples (got [{e_min}, {e_max}], {samples})"
        )));
    }
    Ok(())
}

fn trace_on(sp: &SampledPotential, energies: &[f64]) -> Result<Vec<DiscriminantSample>> {
    energies
        .par_iter()
        .map(|&energy| {
            Ok(DiscriminantSample {
                energy,
                delta: sp.discriminant(energy)?,
            })
        })
        .collect()
}

/// `Δ(E)` on a uniform grid, endpoints included.
pub fn discriminant_trace(
    p: &PotentialParams,
    e_min: f64,
    e_max: f64,
    samples: usize,
) -> Result<Vec<DiscriminantSample>> {
    discriminant_trace_with(p, e_min, e_max, samples, DEFAULT_STEPS)
}

pub fn discriminant_trace_with(
    p: &PotentialParams,
    e_min: f64,
    e_max: f64,
    samples: usize,
    steps: usize,
) -> Result<Vec<DiscriminantSample>> {
    check_bracket(e_min, e_max, samples)?;
    let sp = SampledPotential::for_params(p, steps)?;
    trace_on(&sp, &linspace(e_min, e_max, samples))
}

/// Root of `Δ(E) − level` in `[lo, hi]`, given a sign change.
fn bisect_level(sp: &SampledPotential, level: f64, mut lo: f64, mut hi: f64, mut glo: f64) -> Result<f64> {
    while hi - lo > EDGE_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let g = sp.discriminant(mid)? - level;
        if g == 0.0 {
            return Ok(mid);
        }
        if (g > 0.0) == (glo > 0.0) {
            lo = mid;
            glo = g;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Maximizes `sign·Δ` on `[lo, hi]`; returns `(E, Δ(E))`.
fn refine_extremum(sp: &SampledPotential, sign: f64, lo: f64, hi: f64) -> Result<(f64, f64)> {
    let (_, slope_lo) = sp.discriminant_slope(lo)?;
    let (_, slope_hi) = sp.discriminant_slope(hi)?;
    let (mut a, mut b) = (lo, hi);
    if sign * slope_lo > 0.0 && sign * slope_hi < 0.0 {
        while b - a > EDGE_TOL {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            let (_, s) = sp.discriminant_slope(mid)?;
            if sign * s > 0.0 {
                a = mid;
            } else {
                b = mid;
            }
        }
    } else {
        // Not bracketed by the slope; fall back to golden section.
        let inv = 0.5 * (5f64.sqrt() - 1.0);
        let g = |e: f64| sp.discriminant(e).map(|d| -sign * d);
        let mut x1 = b - inv * (b - a);
        let mut x2 = a + inv * (b - a);
        let (mut g1, mut g2) = (g(x1)?, g(x2)?);
        while b - a > EDGE_TOL {
            if g1 < g2 {
                b = x2;
                x2 = x1;
                g2 = g1;
                x1 = b - inv * (b - a);
                g1 = g(x1)?;
            } else {
                a = x1;
                x1 = x2;
                g1 = g2;
                x2 = a + inv * (b - a);
                g2 = g(x2)?;
            }
        }
    }
    let e = 0.5 * (a + b);
    Ok((e, sp.discriminant(e)?))
}

/// All energies in `[e_min, e_max]` where `Δ = ±2`, with default search
/// settings.
pub fn find_band_edges(p: &PotentialParams, e_min: f64, e_max: f64) -> Result<EdgeScan> {
    find_band_edges_with(p, e_min, e_max, EdgeSearch::default())
}

pub fn find_band_edges_with(
    p: &PotentialParams,
    e_min: f64,
    e_max: f64,
    search: EdgeSearch,
) -> Result<EdgeScan> {
    check_bracket(e_min, e_max, search.scan_points)?;
    let sp = SampledPotential::for_params(p, search.steps)?;
    let grid = linspace(e_min, e_max, search.scan_points);
    let delta: Vec<f64> = trace_on(&sp, &grid)?.iter().map(|s| s.delta).collect();

    let mut edges = Vec::new();
    let mut warnings = Vec::new();
    if search.steps < MIN_RESOLVED_STEPS {
        warnings.push(format!(
            "steps = {} is below {MIN_RESOLVED_STEPS}; discriminant values are at the integrator's resolution limit",
            search.steps
        ));
    }
    // Grid intervals already accounted for, per level.
    let mut claimed = [vec![false; grid.len()], vec![false; grid.len()]];
    let levels: [(f64, EdgeKind, EdgeKind); 2] = [(2.0, EdgeKind::Periodic2K, EdgeKind::Degenerate2K), (-2.0, EdgeKind::Antiperiodic4K, EdgeKind::Degenerate4K)];

    for (li, &(level, plain, degenerate)) in levels.iter().enumerate() {
        let sign: f64 = level.signum();
        let crosses = |i: usize| {
            let (g0, g1) = (delta[i] - level, delta[i + 1] - level);
            g0 != 0.0 && ((g0 > 0.0) != (g1 > 0.0) || g1 == 0.0)
        };
        for i in 1..grid.len().saturating_sub(1) {
            let (l, c, r) = (sign * delta[i - 1], sign * delta[i], sign * delta[i + 1]);
            if !(c >= l && c >= r && c > 1.5) {
                continue;
            }
            let (e_ext, d_ext) = refine_extremum(&sp, sign, grid[i - 1], grid[i + 1])?;
            let excess = sign * d_ext - 2.0;
            if excess.abs() <= TOUCH_TOL {
                // A shallow overshoot can still be a resolvable gap: Δ is
                // flat near its extremum, so small excess ≠ small width.
                let split = if excess > 0.0 && l < 2.0 && r < 2.0 {
                    let lo = bisect_level(&sp, level, grid[i - 1], e_ext, delta[i - 1] - level)?;
                    let hi = bisect_level(&sp, level, e_ext, grid[i + 1], d_ext - level)?;
                    (hi - lo > MATCH_TOL).then_some((lo, hi))
                } else {
                    None
                };
                match split {
                    Some((lo, hi)) => {
                        edges.push(BandEdge { energy: lo, kind: plain });
                        edges.push(BandEdge { energy: hi, kind: plain });
                    }
                    None => edges.push(BandEdge { energy: e_ext, kind: degenerate }),
                }
                claimed[li][i - 1] = true;
                claimed[li][i] = true;
                continue;
            }
            if excess.abs() <= WARN_TOL {
                warnings.push(format!(
                    "extremum of delta at E = {e_ext:.10} lies {excess:+.3e} from {level:+} (outside the {TOUCH_TOL:e} tangency tolerance)"
                ));
            }
            if excess > 0.0 && l < 2.0 && r < 2.0 {
                // A gap narrower than the scan spacing: both neighbours are
                // inside the band, the extremum is beyond the level.
                let g_lo = delta[i - 1] - level;
                edges.push(BandEdge { energy: bisect_level(&sp, level, grid[i - 1], e_ext, g_lo)?, kind: plain });
                edges.push(BandEdge { energy: bisect_level(&sp, level, e_ext, grid[i + 1], d_ext - level)?, kind: plain });
                claimed[li][i - 1] = true;
                claimed[li][i] = true;
            }
        }
        for i in 0..grid.len() - 1 {
            if !claimed[li][i] && crosses(i) {
                let energy = bisect_level(&sp, level, grid[i], grid[i + 1], delta[i] - level)?;
                edges.push(BandEdge { energy, kind: plain });
            }
        }
    }
    edges.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(EdgeScan { edges, warnings })
}

/// Per-energy outcome of [`crosscheck`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyCheck {
    pub energy: f64,
    pub set_id: u8,
    pub predicted_period: PeriodClass,
    pub delta: f64,
    /// `||Δ| − 2|`.
    pub delta_defect: f64,
    pub nearest_edge: Option<BandEdge>,
    pub edge_distance: f64,
    pub discriminant_ok: bool,
    pub edge_ok: bool,
    pub period_ok: bool,
    pub passed: bool,
    pub messages: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrosscheckReport {
    pub steps: usize,
    pub checks: Vec<EnergyCheck>,
    pub edges: Vec<BandEdge>,
    pub warnings: Vec<String>,
    pub passed: bool,
}

/// Checks every analytic energy against the discriminant at the default
/// step count.
pub fn crosscheck(analytic: &[BandEdgeSolution], p: &PotentialParams) -> Result<CrosscheckReport> {
    crosscheck_with(analytic, p, DEFAULT_STEPS)
}

pub fn crosscheck_with(
    analytic: &[BandEdgeSolution],
    p: &PotentialParams,
    steps: usize,
) -> Result<CrosscheckReport> {
    if analytic.is_empty() {
        return Err(Error::InvalidArgument("nothing to cross-check".into()));
    }
    let lo = analytic.iter().map(|s| s.energy).fold(f64::INFINITY, f64::min) - 1.0;
    let hi = analytic.iter().map(|s| s.energy).fold(f64::NEG_INFINITY, f64::max) + 1.0;
    let scan = find_band_edges_with(p, lo, hi, EdgeSearch { scan_points: DEFAULT_SCAN_POINTS, steps })?;
    let sp = SampledPotential::for_params(p, steps)?;

    let mut checks = Vec::with_capacity(analytic.len());
    for s in analytic {
        let delta = sp.discriminant(s.energy)?;
        let delta_defect = (delta.abs() - 2.0).abs();
        let nearest = scan
            .edges
            .iter()
            .min_by(|a, b| (a.energy - s.energy).abs().total_cmp(&(b.energy - s.energy).abs()))
            .copied();
        let edge_distance = nearest.map_or(f64::INFINITY, |e| (e.energy - s.energy).abs());
        let predicted = s.record.period_class;
        let observed = if delta > 0.0 { PeriodClass::TwoK } else { PeriodClass::FourK };

        let discriminant_ok = delta_defect <= DELTA_TOL;
        let edge_ok = edge_distance <= MATCH_TOL;
        let period_ok = predicted == observed
            && nearest.is_none_or(|e| !edge_ok || e.kind.period_class() == predicted);

        let mut messages = Vec::new();
        let limit = if steps < MIN_RESOLVED_STEPS {
            format!(" (resolution limit: steps = {steps})")
        } else {
            String::new()
        };
        if !discriminant_ok {
            messages.push(format!("||delta| - 2| = {delta_defect:.3e} exceeds {DELTA_TOL:e}{limit}"));
        }
        if !edge_ok {
            messages.push(format!("nearest numerical edge is {edge_distance:.3e} away (limit {MATCH_TOL:e}){limit}"));
        }
        if !period_ok {
            messages.push(format!("predicted period {predicted} but delta = {delta:+.6}"));
        }
        checks.push(EnergyCheck {
            energy: s.energy,
            set_id: s.record.set_id(),
            predicted_period: predicted,
            delta,
            delta_defect,
            nearest_edge: nearest,
            edge_distance,
            discriminant_ok,
            edge_ok,
            period_ok,
            passed: discriminant_ok && edge_ok && period_ok,
            messages,
        });
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(CrosscheckReport {
        steps,
        checks,
        edges: scan.edges,
        warnings: scan.warnings,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Rational;

    fn two_one(m: f64) -> PotentialParams {
        PotentialParams::new(Rational::from(2), Rational::from(1), m, -4.0 * m).unwrap()
    }

    #[test]
    fn constant_potential_closed_form() {
        let (c, period) = (0.7, 3.1);
        let sp = SampledPotential::new(|_| c, period, 4000).unwrap();
        for e in [0.9, 2.5, 10.0] {
            let expect = 2.0 * ((e - c).sqrt() * period).cos();
            assert!((sp.discriminant(e).unwrap() - expect).abs() < 1e-9);
        }
        // Below the constant: 2 cosh.
        let expect = 2.0 * ((c - 0.2f64).sqrt() * period).cosh();
        assert!((sp.discriminant(0.2).unwrap() - expect).abs() < 1e-9);
    }

    #[test]
    fn energy_derivative_matches_finite_difference() {
        let sp = SampledPotential::for_params(&two_one(0.5), 4000).unwrap();
        let (e, h) = (2.3, 1e-5);
        let (_, slope) = sp.discriminant_slope(e).unwrap();
        let fd = (sp.discriminant(e + h).unwrap() - sp.discriminant(e - h).unwrap()) / (2.0 * h);
        assert!((slope - fd).abs() < 1e-6 * slope.abs().max(1.0));
    }

    #[test]
    fn wronskian_is_conserved() {
        let p = two_one(0.5);
        for e in [-3.0, 0.0, 1.0, 7.5, 30.0] {
            let m = monodromy(e, &p, 2000).unwrap();
            assert!((m.det() - 1.0).abs() < 1e-8, "E={e}: {}", m.det());
        }
    }

    #[test]
    fn forbidden_below_the_spectrum() {
        let p = two_one(0.5);
        assert!(monodromy(-5.0, &p, 2000).unwrap().trace() > 2.0);
    }

    #[test]
    fn potential_landmarks() {
        let p = two_one(0.5);
        assert!((potential_value(0.0, &p) - (1.0 - 2.0)).abs() < 1e-14);
        let k = complete_k(p.m());
        assert!((potential_value(k, &p) - (3.0 - 2.0)).abs() < 1e-12);
        for x in [0.3, 1.7, -2.2] {
            assert!((potential_value(x + 2.0 * k, &p) - potential_value(x, &p)).abs() < 1e-10);
        }
    }

    #[test]
    fn trace_grid_shape() {
        let p = two_one(0.5);
        let t = discriminant_trace_with(&p, -1.0, 12.0, 2, 1000).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!((t[0].energy, t[1].energy), (-1.0, 12.0));
        assert!(discriminant_trace_with(&p, 1.0, 1.0, 10, 1000).is_err());
        assert!(discriminant_trace_with(&p, 0.0, 1.0, 1, 1000).is_err());
    }

    #[test]
    fn no_edges_inside_a_single_band_span() {
        let p = two_one(0.5);
        // Between the first gap's top and the degenerate point nothing crosses.
        let scan = find_band_edges_with(&p, 1.6, 2.2, EdgeSearch { scan_points: 200, steps: 4000 }).unwrap();
        assert!(scan.edges.is_empty(), "{:?}", scan.edges);
    }

    #[test]
    fn narrow_gap_between_grid_points_is_found() {
        let p = two_one(0.5);
        // Upper gap has width ~0.0165; a 10-point grid over [6, 7.3] skips it.
        let scan = find_band_edges_with(&p, 6.0, 7.3, EdgeSearch { scan_points: 10, steps: 4000 }).unwrap();
        let plain: Vec<_> = scan.edges.iter().filter(|e| !e.kind.is_degenerate()).collect();
        assert_eq!(plain.len(), 2, "{:?}", scan.edges);
        assert!(plain.iter().all(|e| e.kind == EdgeKind::Antiperiodic4K));
    }
}
