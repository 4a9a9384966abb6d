//! From solution families to band-edge energies and eigenfunctions.
//!
//! Writing `ψ = cnᵅ dnᵝ P(t)` with `t = sn x` and `s(t) = (1-t²)(1-m t²)`,
//! the Schrödinger equation `-ψ'' + Vψ = Eψ` becomes
//!
//! ```text
//! s P'' + (2 s S + s'/2) P' + (R₀(t) + E) P = 0,
//! S = -α t/(1-t²) - β m t/(1-m t²),
//! s R₀ = (sS)² + s²S' + (s'/2)(sS) - sV.
//! ```
//!
//! `R₀` is a polynomial exactly when the exponents are admissible residues;
//! otherwise the division by `s` leaves a remainder, which is reported as a
//! derivation fault. Matching powers of `t` in the parity class of `P_n`
//! gives `floor(n/2)+2` rows for `floor(n/2)+1` unknowns; the top row is the
//! large-`t` balance and vanishes identically, the rest form the square
//! pencil `M0 + E·M1`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::elliptic::{complete_k, jacobi};
use crate::error::{Error, Result};
use crate::params::{to_f64, PotentialParams};
use crate::poly;
use crate::qes::{solvability_records, SolvabilityRecord};

const SCAN_INTERVALS: usize = 2000;
const DEGENERACY_RTOL: f64 = 1e-9;
const FINGERPRINT_POINTS: usize = 32;

/// Linear pencil `M0 + E·M1` over the monomial basis `t^d, d ∈ basis_degrees`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pencil {
    pub m0: DMatrix<f64>,
    pub m1: DMatrix<f64>,
    pub basis_degrees: Vec<usize>,
}

impl Pencil {
    pub fn dim(&self) -> usize {
        self.basis_degrees.len()
    }

    pub fn at(&self, energy: f64) -> DMatrix<f64> {
        &self.m0 + &self.m1 * energy
    }

    pub fn det(&self, energy: f64) -> f64 {
        self.at(energy).determinant()
    }
}

/// One band-edge state in the QES sector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandEdgeSolution {
    /// Eigenvalue for the unshifted potential.
    pub energy_unshifted: f64,
    /// `energy_unshifted + shift`.
    pub energy: f64,
    /// Coefficients of `P_n` over `basis_degrees`.
    pub coeffs: Vec<f64>,
    pub basis_degrees: Vec<usize>,
    pub record: SolvabilityRecord,
    /// Indices of distinct states sharing this energy, into the deduplicated list.
    pub degeneracy_partners: Vec<usize>,
    /// Dimension of the null space the coefficients were drawn from; above 1
    /// means the pencil itself was degenerate at this energy.
    pub null_space_dim: usize,
}

impl BandEdgeSolution {
    pub fn degree(&self) -> usize {
        self.record.n
    }

    /// Coefficients of `P_n` in ascending powers `0..=n`.
    pub fn poly_coeffs(&self) -> Vec<f64> {
        let mut full = vec![0.0; self.degree() + 1];
        for (&d, &c) in self.basis_degrees.iter().zip(&self.coeffs) {
            full[d] = c;
        }
        full
    }

    pub fn eval_poly(&self, t: f64) -> f64 {
        self.basis_degrees
            .iter()
            .zip(&self.coeffs)
            .rev()
            .map(|(&d, &c)| c * t.powi(d as i32))
            .sum()
    }
}

fn trim(mut p: Vec<f64>) -> Vec<f64> {
    while p.len() > 1 && p.last() == Some(&0.0) {
        p.pop();
    }
    p
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

/// Coefficient-matched pencil for one solution family.
pub fn build_pencil(r: &SolvabilityRecord, p: &PotentialParams) -> Result<Pencil> {
    use poly::{add, deriv, divrem, mul, scale, shift_up};

    let m = p.m().value();
    let alpha = to_f64(r.alpha);
    let beta = to_f64(r.beta);
    let t = [0.0, 1.0];
    let one_t2 = [1.0, 0.0, -1.0];
    let one_mt2 = [1.0, 0.0, -m];
    let s = trim(mul(&one_t2, &one_mt2));
    let ds = deriv(&s);

    // s·S
    let s_s = add(
        &scale(&mul(&t, &one_mt2), -alpha),
        &scale(&mul(&t, &one_t2), -beta * m),
    );
    // s²·S'
    let s2_ds = add(
        &scale(&mul(&[1.0, 0.0, 1.0], &mul(&one_mt2, &one_mt2)), -alpha),
        &scale(&mul(&[1.0, 0.0, m], &mul(&one_t2, &one_t2)), -beta * m),
    );
    // s·V
    let s_v = add(
        &scale(&shift_up(&s, 2), p.a_strength() * m),
        &scale(&mul(&one_t2, &one_t2), p.b_strength() * m),
    );
    let numer = add(
        &add(&mul(&s_s, &s_s), &s2_ds),
        &add(&scale(&mul(&ds, &s_s), 0.5), &scale(&s_v, -1.0)),
    );
    let (r0, rem) = divrem(&numer, &s);
    if max_abs(&rem) > 1e-10 * max_abs(&numer).max(1.0) {
        return Err(Error::DerivationFault(format!(
            "set {}: pole terms do not cancel for alpha = {}, beta = {} (remainder {:?})",
            r.set_id(),
            r.alpha,
            r.beta,
            rem
        )));
    }
    let p1 = add(&scale(&s_s, 2.0), &scale(&ds, 0.5));

    let basis = r.basis_degrees();
    let dim = basis.len();
    let row_of = |power: usize| -> Option<usize> {
        let low = r.poly_parity.lowest_power();
        (power >= low && (power - low).is_multiple_of(2)).then(|| (power - low) / 2)
    };

    // One extra row for the power n + 2.
    let mut full = DMatrix::<f64>::zeros(dim + 1, dim);
    let mut m1 = DMatrix::<f64>::zeros(dim, dim);
    for (col, &j) in basis.iter().enumerate() {
        let jf = j as f64;
        let mut image = shift_up(&r0, j);
        if j >= 1 {
            image = add(&image, &scale(&shift_up(&p1, j - 1), jf));
        }
        if j >= 2 {
            image = add(&image, &scale(&shift_up(&s, j - 2), jf * (jf - 1.0)));
        }
        let col_scale = max_abs(&image).max(1.0);
        for (power, &c) in image.iter().enumerate() {
            match row_of(power) {
                Some(row) if row <= dim => full[(row, col)] += c,
                _ if c.abs() <= 1e-12 * col_scale => {}
                _ => {
                    return Err(Error::DerivationFault(format!(
                        "set {}: t^{j} maps onto t^{power} outside the matched rows ({c:e})",
                        r.set_id()
                    )))
                }
            }
        }
        m1[(row_of(j).expect("basis in parity class"), col)] = 1.0;
    }

    let scale_all = full.amax().max(1.0);
    let top = full.row(dim).amax();
    if top > 1e-10 * scale_all {
        return Err(Error::DerivationFault(format!(
            "set {}: leading power t^{} does not balance ({top:e}); degree inconsistent with exponents",
            r.set_id(),
            r.n + 2
        )));
    }
    let m0 = full.rows(0, dim).into_owned();
    if m0.nrows() != m0.ncols() {
        return Err(Error::NonSquare {
            rows: m0.nrows(),
            cols: m0.ncols(),
        });
    }
    Ok(Pencil {
        m0,
        m1,
        basis_degrees: basis,
    })
}

fn bracket_radius(pc: &Pencil, p: &PotentialParams) -> f64 {
    let strength = p.a_strength() + p.b_strength();
    let spec = 10.0 * strength * p.m().value().max(1.0) + 10.0;
    // Gershgorin bound on the eigenvalues of -M0 (M1 is the identity).
    let gersh = (0..pc.dim())
        .map(|i| pc.m0.row(i).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    spec.max(gersh * 1.01 + 1.0)
}

/// Degree of `det(M0 + E·M1)` from Chebyshev samples and Newton interpolation.
fn determinant_degree(pc: &Pencil, radius: f64) -> usize {
    let npts = pc.dim() + 1;
    let nodes: Vec<f64> = (0..npts)
        .map(|k| ((k as f64 + 0.5) * PI / npts as f64).cos())
        .collect();
    let mut dd: Vec<f64> = nodes.iter().map(|&u| pc.det(radius * u)).collect();
    for level in 1..npts {
        for i in (level..npts).rev() {
            dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - level]);
        }
    }
    // Newton form -> monomial coefficients in u.
    let mut mono = vec![0.0; npts];
    for k in (0..npts).rev() {
        for i in (1..npts).rev() {
            mono[i] = mono[i - 1] - nodes[k] * mono[i];
        }
        mono[0] = dd[k] - nodes[k] * mono[0];
    }
    let big = max_abs(&mono);
    mono.iter()
        .rposition(|c| c.abs() > 1e-12 * big)
        .unwrap_or(0)
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut flo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 1e-12 * mid.abs().max(1.0) || mid == lo || mid == hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Minimizes `g` on `[lo, hi]` by golden section.
fn golden_min(g: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let inv = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - inv * (hi - lo);
    let mut x2 = lo + inv * (hi - lo);
    let (mut g1, mut g2) = (g(x1), g(x2));
    for _ in 0..200 {
        if hi - lo <= 1e-14 * lo.abs().max(hi.abs()).max(1.0) {
            break;
        }
        if g1 < g2 {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - inv * (hi - lo);
            g1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + inv * (hi - lo);
            g2 = g(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Real roots of `f` on `[lo, hi]` as `(root, multiplicity)`.
fn scan_roots(f: &impl Fn(f64) -> f64, lo: f64, hi: f64, intervals: usize) -> Vec<(f64, usize)> {
    let h = (hi - lo) / intervals as f64;
    let xs: Vec<f64> = (0..=intervals).map(|i| lo + h * i as f64).collect();
    let fs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut roots = Vec::new();
    for i in 0..intervals {
        if fs[i] == 0.0 {
            let touching = i > 0 && i < intervals && fs[i - 1] * fs[i + 1] > 0.0;
            roots.push((xs[i], if touching { 2 } else { 1 }));
        } else if fs[i + 1] != 0.0 && (fs[i] > 0.0) != (fs[i + 1] > 0.0) {
            roots.push((bisect(f, xs[i], xs[i + 1], fs[i]), 1));
        }
    }
    // Pairs of roots closer than the grid, or double roots: a local
    // minimum of |f| with no sign change on either side.
    for i in 1..intervals {
        let (a, b, c) = (fs[i - 1], fs[i], fs[i + 1]);
        let same = (a > 0.0) == (b > 0.0) && (b > 0.0) == (c > 0.0) && a != 0.0 && b != 0.0 && c != 0.0;
        if !same || b.abs() > a.abs() || b.abs() > c.abs() {
            continue;
        }
        let sign = b.signum();
        let ext = golden_min(&|x| sign * f(x), xs[i - 1], xs[i + 1]);
        let fe = f(ext);
        if fe.abs() <= 1e-9 * a.abs().max(c.abs()) {
            roots.push((ext, 2));
        } else if (fe > 0.0) != (sign > 0.0) {
            roots.push((bisect(f, xs[i - 1], ext, a), 1));
            roots.push((bisect(f, ext, xs[i + 1], fe), 1));
        }
    }
    roots.sort_by(|x, y| x.0.total_cmp(&y.0));
    roots.dedup_by(|x, y| (x.0 - y.0).abs() <= 1e-10 * x.0.abs().max(1.0));
    roots
}

/// Null-space basis of a square matrix by Gaussian elimination with full
/// pivoting. At least one vector is returned: the smallest pivot is taken
/// as zero when none falls below tolerance.
pub(crate) fn null_basis(a: &DMatrix<f64>, rel_tol: f64) -> Vec<DVector<f64>> {
    let n = a.nrows();
    let mut u = a.clone();
    let mut cols: Vec<usize> = (0..n).collect();
    let scale = u.amax().max(f64::MIN_POSITIVE);
    let mut rank = n;
    for k in 0..n {
        let (mut pi, mut pj, mut best) = (k, k, 0.0);
        for i in k..n {
            for j in k..n {
                if u[(i, j)].abs() > best {
                    (pi, pj, best) = (i, j, u[(i, j)].abs());
                }
            }
        }
        if best <= rel_tol * scale {
            rank = k;
            break;
        }
        u.swap_rows(k, pi);
        u.swap_columns(k, pj);
        cols.swap(k, pj);
        for i in k + 1..n {
            let f = u[(i, k)] / u[(k, k)];
            if f != 0.0 {
                for j in k..n {
                    u[(i, j)] -= f * u[(k, j)];
                }
            }
        }
    }
    let rank = rank.min(n.saturating_sub(1));
    (rank..n)
        .map(|free| {
            let mut x = vec![0.0; n];
            x[free] = 1.0;
            for i in (0..rank).rev() {
                let acc: f64 = (i + 1..n).map(|j| u[(i, j)] * x[j]).sum();
                x[i] = -acc / u[(i, i)];
            }
            let mut v = DVector::zeros(n);
            for (k, &c) in cols.iter().enumerate() {
                v[c] = x[k];
            }
            v
        })
        .collect()
}

/// Scales so the top-degree coefficient has unit magnitude, with the sign
/// chosen to make `P(1) > 0` (or `P'(1) > 0` when `P(1) = 0`).
fn normalize(coeffs: &mut [f64], degrees: &[usize]) {
    let lead = coeffs
        .iter()
        .rev()
        .copied()
        .find(|c| c.abs() > 1e-14 * max_abs(coeffs))
        .unwrap_or(1.0);
    for c in coeffs.iter_mut() {
        *c /= lead.abs();
    }
    let total: f64 = coeffs.iter().map(|c| c.abs()).sum();
    let at_one: f64 = coeffs.iter().sum();
    let slope: f64 = coeffs.iter().zip(degrees).map(|(c, &d)| c * d as f64).sum();
    let flip = if at_one.abs() > 1e-12 * total {
        at_one < 0.0
    } else {
        slope < 0.0
    };
    if flip {
        for c in coeffs.iter_mut() {
            *c = -*c;
        }
    }
}

/// Energies and polynomial coefficients of one solution family, sorted by
/// energy.
pub fn solve_pencil(
    pc: &Pencil,
    p: &PotentialParams,
    r: &SolvabilityRecord,
) -> Result<Vec<BandEdgeSolution>> {
    let dim = pc.dim();
    let radius = bracket_radius(pc, p);
    let degree = determinant_degree(pc, radius);
    if degree != dim {
        return Err(Error::DefectivePencil {
            degree,
            expected: dim,
        });
    }

    let det = |e: f64| pc.det(e);
    let mut roots = Vec::new();
    let mut intervals = SCAN_INTERVALS;
    for _ in 0..4 {
        roots = scan_roots(&det, -radius, radius, intervals);
        if roots.iter().map(|r| r.1).sum::<usize>() >= dim {
            break;
        }
        intervals *= 4;
    }
    let found = roots.iter().map(|r| r.1).sum::<usize>();
    if found < dim {
        return Err(Error::RootCount {
            found,
            expected: dim,
        });
    }

    let mut out = Vec::with_capacity(dim);
    for (e, _) in roots {
        let basis = null_basis(&pc.at(e), 1e-8);
        let null_dim = basis.len();
        for v in basis {
            let mut coeffs: Vec<f64> = v.iter().copied().collect();
            normalize(&mut coeffs, &pc.basis_degrees);
            out.push(BandEdgeSolution {
                energy_unshifted: e,
                energy: e + p.shift(),
                coeffs,
                basis_degrees: pc.basis_degrees.clone(),
                record: *r,
                degeneracy_partners: Vec::new(),
                null_space_dim: null_dim,
            });
        }
    }
    Ok(out)
}

/// `ψ(x) = cn(x)^α dn(x)^β P_n(sn x)`.
pub fn eval_wavefunction(s: &BandEdgeSolution, x: f64, p: &PotentialParams) -> f64 {
    let t = jacobi(x, p.m());
    let cn_part = if s.record.alpha_int() == 1 { t.cn } else { 1.0 };
    cn_part * t.dn.powf(to_f64(s.record.beta)) * s.eval_poly(t.sn)
}

/// `max |−ψ'' + (V + shift)ψ − Eψ| / max |ψ|` over `xs`, with `ψ''` from the
/// five-point stencil at `h = 1e-4`.
pub fn schrodinger_residual(s: &BandEdgeSolution, p: &PotentialParams, xs: &[f64]) -> f64 {
    const H: f64 = 1e-4;
    let psi = |x: f64| eval_wavefunction(s, x, p);
    let mut worst = 0.0_f64;
    let mut peak = 0.0_f64;
    for &x in xs {
        let f0 = psi(x);
        let d2 = (-psi(x + 2.0 * H) + 16.0 * psi(x + H) - 30.0 * f0 + 16.0 * psi(x - H)
            - psi(x - 2.0 * H))
            / (12.0 * H * H);
        worst = worst.max((-d2 + p.potential(x) * f0 - s.energy * f0).abs());
        peak = peak.max(f0.abs());
    }
    if peak == 0.0 {
        return f64::INFINITY;
    }
    worst / peak
}

fn fingerprint(s: &BandEdgeSolution, p: &PotentialParams) -> Vec<f64> {
    let span = 4.0 * complete_k(p.m());
    let mut v: Vec<f64> = (0..FINGERPRINT_POINTS)
        .map(|k| eval_wavefunction(s, span * (k as f64 + 0.5) / FINGERPRINT_POINTS as f64 + 0.0123, p))
        .collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    v
}

fn same_state(u: &[f64], v: &[f64]) -> bool {
    let minus: f64 = u.iter().zip(v).map(|(a, b)| (a - b).powi(2)).sum();
    let plus: f64 = u.iter().zip(v).map(|(a, b)| (a + b).powi(2)).sum();
    minus.min(plus).sqrt() < 1e-6
}

fn energies_agree(a: f64, b: f64) -> bool {
    (a - b).abs() <= DEGENERACY_RTOL * a.abs().max(b.abs()).max(1.0)
}

/// Drops states repeated across residue sets and links genuinely
/// degenerate distinct states through `degeneracy_partners`.
pub fn dedupe_degeneracies(
    mut all: Vec<BandEdgeSolution>,
    p: &PotentialParams,
) -> Vec<BandEdgeSolution> {
    all.sort_by(|x, y| x.energy.total_cmp(&y.energy));
    let mut groups: Vec<Vec<BandEdgeSolution>> = Vec::new();
    for s in all {
        match groups.last_mut() {
            Some(g) if energies_agree(g.last().expect("non-empty").energy, s.energy) => g.push(s),
            _ => groups.push(vec![s]),
        }
    }

    let mut out: Vec<BandEdgeSolution> = Vec::new();
    for mut group in groups {
        group.sort_by_key(|s| s.record.set_id());
        let mut kept: Vec<(BandEdgeSolution, Vec<f64>)> = Vec::new();
        for s in group {
            let fp = fingerprint(&s, p);
            if !kept.iter().any(|(_, k)| same_state(k, &fp)) {
                kept.push((s, fp));
            }
        }
        let start = out.len();
        let ids: Vec<usize> = (start..start + kept.len()).collect();
        for (i, (mut s, _)) in kept.into_iter().enumerate() {
            s.degeneracy_partners = ids.iter().copied().filter(|&j| j != start + i).collect();
            out.push(s);
        }
    }
    out
}

/// Solutions of one family.
pub fn solve_record(r: &SolvabilityRecord, p: &PotentialParams) -> Result<Vec<BandEdgeSolution>> {
    solve_pencil(&build_pencil(r, p)?, p, r)
}

/// Every QES band-edge state of `p`, deduplicated and sorted by energy.
pub fn solve_all(p: &PotentialParams) -> Result<Vec<BandEdgeSolution>> {
    let mut all = Vec::new();
    for r in solvability_records(p)? {
        all.extend(solve_record(&r, p)?);
    }
    Ok(dedupe_degeneracies(all, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Rational;
    use crate::qes::{analyze_sets, SetOutcome};

    fn params(a: (i64, i64), b: (i64, i64), m: f64) -> PotentialParams {
        PotentialParams::new(Rational::new(a.0, a.1), Rational::new(b.0, b.1), m, 0.0).unwrap()
    }

    fn record(p: &PotentialParams, set_id: u8) -> SolvabilityRecord {
        solvability_records(p)
            .unwrap()
            .into_iter()
            .find(|r| r.set_id() == set_id)
            .unwrap()
    }

    #[test]
    fn ground_state_of_two_one_is_four_m() {
        for m in [0.2, 0.5, 0.8] {
            let p = params((2, 1), (1, 1), m);
            let pc = build_pencil(&record(&p, 3), &p).unwrap();
            assert_eq!(pc.dim(), 1);
            let sols = solve_pencil(&pc, &p, &record(&p, 3)).unwrap();
            assert_eq!(sols.len(), 1);
            assert!((sols[0].energy_unshifted - 4.0 * m).abs() < 1e-12);
            assert_eq!(sols[0].coeffs, vec![1.0]);
        }
    }

    #[test]
    fn pencil_dimensions() {
        let p = params((2, 1), (1, 1), 0.5);
        let pc = build_pencil(&record(&p, 2), &p).unwrap();
        assert_eq!(pc.dim(), 2);
        assert_eq!(pc.basis_degrees, vec![0, 2]);
        assert_eq!(determinant_degree(&pc, 50.0), 2);

        let p = params((7, 2), (1, 2), 0.5);
        let pc = build_pencil(&record(&p, 4), &p).unwrap();
        assert_eq!(pc.dim(), 3);
        assert_eq!(solve_pencil(&pc, &p, &record(&p, 4)).unwrap().len(), 3);
    }

    #[test]
    fn inconsistent_exponents_are_a_derivation_fault() {
        let p = params((2, 1), (1, 1), 0.5);
        let mut r = record(&p, 3);
        r.beta = Rational::new(1, 2);
        assert!(matches!(build_pencil(&r, &p), Err(Error::DerivationFault(_))));

        // Right exponents, wrong degree: the top power does not balance.
        let mut r = record(&p, 3);
        r.n = 2;
        assert!(matches!(build_pencil(&r, &p), Err(Error::DerivationFault(_))));
    }

    #[test]
    fn discarded_set_never_reaches_the_pencil() {
        let p = params((2, 1), (1, 1), 0.5);
        assert!(matches!(analyze_sets(&p).unwrap()[0], SetOutcome::Discarded { .. }));
    }

    #[test]
    fn null_vectors_and_parity() {
        for (a, b) in [((2, 1), (1, 1)), ((7, 2), (1, 2))] {
            let p = params(a, b, 0.37);
            for r in solvability_records(&p).unwrap() {
                let pc = build_pencil(&r, &p).unwrap();
                for s in solve_pencil(&pc, &p, &r).unwrap() {
                    // Pencil scale ‖M0‖ + |E|‖M1‖: for 1x1 pencils M0 + E·M1 itself is ~0.
                    let mat = pc.at(s.energy_unshifted);
                    let scale = pc.m0.norm() + s.energy_unshifted.abs() * pc.m1.norm();
                    let c = DVector::from_vec(s.coeffs.clone());
                    let res = (&mat * &c).norm();
                    assert!(res <= 1e-10 * scale * c.norm(), "residual {res}");
                    let full = s.poly_coeffs();
                    for (d, v) in full.iter().enumerate() {
                        if d % 2 != r.n % 2 {
                            assert_eq!(*v, 0.0);
                        }
                    }
                    assert_eq!(full[r.n].abs(), 1.0);
                }
            }
        }
    }

    #[test]
    fn wavefunction_at_origin_is_p_of_zero() {
        let p = params((7, 2), (1, 2), 0.5);
        for s in solve_all(&p).unwrap() {
            assert!((eval_wavefunction(&s, 0.0, &p) - s.eval_poly(0.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn ground_state_of_two_one_is_dn_squared() {
        let p = params((2, 1), (1, 1), 0.6);
        let s = &solve_record(&record(&p, 3), &p).unwrap()[0];
        for x in [0.1, 0.9, 2.3] {
            let dn = jacobi(x, p.m()).dn;
            assert!((eval_wavefunction(s, x, &p) - dn * dn).abs() < 1e-14);
        }
    }

    #[test]
    fn residual_detects_wrong_energy() {
        let p = params((2, 1), (1, 1), 0.5);
        let xs: Vec<f64> = (0..40).map(|i| 0.13 + 0.17 * i as f64).collect();
        for s in solve_all(&p).unwrap() {
            assert!(schrodinger_residual(&s, &p, &xs) < 1e-6);
            let mut off = s.clone();
            off.energy += 0.1;
            assert!(schrodinger_residual(&off, &p, &xs) >= 0.01);
        }
    }

    #[test]
    fn bisection_and_double_roots() {
        let f = |x: f64| (x - 1.0) * (x - 1.0) * (x + 2.0);
        let roots = scan_roots(&f, -10.0, 10.0, 2000);
        assert_eq!(roots.len(), 2);
        assert!((roots[0].0 + 2.0).abs() < 1e-11);
        assert_eq!(roots[1].1, 2);
        assert!((roots[1].0 - 1.0).abs() < 1e-6);

        // Two roots inside one grid cell.
        let g = |x: f64| (x - 0.3001) * (x - 0.3002);
        let roots = scan_roots(&g, -10.0, 10.0, 2000);
        assert_eq!(roots.len(), 2);
        assert!((roots[0].0 - 0.3001).abs() < 1e-12 && (roots[1].0 - 0.3002).abs() < 1e-12);
    }

    #[test]
    fn null_basis_reports_every_direction() {
        let a = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 3.0, 6.0, 9.0]);
        let basis = null_basis(&a, 1e-10);
        assert_eq!(basis.len(), 2);
        for v in basis {
            assert!((&a * v).norm() < 1e-12);
        }
    }

    #[test]
    fn trigonometric_limit_stays_finite() {
        // m = 0: V vanishes, ψ = cos^α x P(sin x) and E = (n + α)².
        let p = params((2, 1), (1, 1), 0.0);
        let sols = solve_all(&p).unwrap();
        assert!(sols.iter().all(|s| s.energy.is_finite()));
        let tiny = solve_all(&params((2, 1), (1, 1), 1e-6)).unwrap();
        assert_eq!(sols.len(), tiny.len());
        for (a, b) in sols.iter().zip(&tiny) {
            assert!((a.energy - b.energy).abs() < 1e-4);
        }
    }
}
