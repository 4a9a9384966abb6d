//! Residue bookkeeping for the quasi-exactly solvable sector.
//!
//! The log-derivative of a band-edge state, written in `t = sn x`, has
//! fixed poles at `t = ±1` and `t = ±1/√m`. Each pole admits two residues,
//! and odd parity in `t` forces equal residues at `±t₀`, leaving four
//! combinations `(b1, d1)`. Matching the large-`t` behaviour against the
//! number of moving poles `n` gives `2 b1 + 2 d1 + n = a + 1`, which either
//! produces a non-negative integer degree or rules the combination out.
//!
//! All arithmetic in this module is exact.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{is_half_step, ser_rational, PotentialParams, Rational};

/// One admissible pair of residues at the fixed poles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ResidueSet {
    pub set_id: u8,
    #[serde(serialize_with = "ser_rational")]
    pub b1: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub d1: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Lowest power of `t` in this parity class.
    pub fn lowest_power(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

/// Period of a band-edge state: `2K` (Floquet multiplier +1 over the
/// potential period) or `4K` (multiplier −1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PeriodClass {
    #[serde(rename = "2K")]
    TwoK,
    #[serde(rename = "4K")]
    FourK,
}

impl std::fmt::Display for PeriodClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PeriodClass::TwoK => "2K",
            PeriodClass::FourK => "4K",
        })
    }
}

/// Which closed-form family gives a set's degree and solution count: the
/// governing combination (`a-b` for sets 1, 3 and `a+b` for sets 2, 4) is
/// even or odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WaveTable {
    #[serde(rename = "even")]
    Even,
    #[serde(rename = "odd")]
    Odd,
}

/// Structural description of one solution family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolvabilityRecord {
    pub residue_set: ResidueSet,
    pub n: usize,
    #[serde(serialize_with = "ser_rational")]
    pub lambda1: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub alpha: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub beta: Rational,
    pub poly_parity: Parity,
    pub period_class: PeriodClass,
    pub li_count: usize,
    pub table: WaveTable,
}

impl SolvabilityRecord {
    pub fn set_id(&self) -> u8 {
        self.residue_set.set_id
    }

    /// `cn` exponent; always 0 or 1.
    pub fn alpha_int(&self) -> i32 {
        self.alpha.to_integer() as i32
    }

    /// Form of the wave function, e.g. `cn(x) dn(x)^{-1} P2(sn x)`.
    pub fn descriptor(&self) -> String {
        let mut parts = Vec::new();
        if self.alpha_int() == 1 {
            parts.push("cn(x)".to_string());
        }
        if self.beta == Rational::one() {
            parts.push("dn(x)".to_string());
        } else if self.beta != Rational::from(0) {
            parts.push(format!("dn(x)^{{{}}}", self.beta));
        }
        parts.push(format!("P{}(sn x)", self.n));
        parts.join(" ")
    }

    /// Powers of `t` spanned by `P_n`: `n, n-2, …` down to 0 or 1.
    pub fn basis_degrees(&self) -> Vec<usize> {
        (self.poly_parity.lowest_power()..=self.n).step_by(2).collect()
    }
}

/// Outcome of one residue combination for a given potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SetOutcome {
    Admissible(SolvabilityRecord),
    Discarded { residue_set: ResidueSet, n: i64 },
}

impl SetOutcome {
    pub fn residue_set(&self) -> ResidueSet {
        match self {
            SetOutcome::Admissible(r) => r.residue_set,
            SetOutcome::Discarded { residue_set, .. } => *residue_set,
        }
    }

    pub fn degree(&self) -> i64 {
        match self {
            SetOutcome::Admissible(r) => r.n as i64,
            SetOutcome::Discarded { n, .. } => *n,
        }
    }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Residue pairs for any `b`; no sign restriction so the `b → -b-1`
/// relabeling can be exercised.
pub(crate) fn residue_pairs(b: Rational) -> [ResidueSet; 4] {
    let upper = q(3, 4) + b / 2;
    let lower = q(1, 4) - b / 2;
    [
        (1, q(3, 4), upper),
        (2, q(3, 4), lower),
        (3, q(1, 4), upper),
        (4, q(1, 4), lower),
    ]
    .map(|(set_id, b1, d1)| ResidueSet { set_id, b1, d1 })
}

/// The four `(b1, d1)` combinations, ordered by set id.
pub fn residue_sets(b: Rational) -> Result<[ResidueSet; 4]> {
    if !b.is_positive() || !is_half_step(b) {
        return Err(Error::InvalidParams(format!(
            "b = {b} must be a positive integer or half-integer"
        )));
    }
    Ok(residue_pairs(b))
}

/// Degree and solution count read from the wave-function tables.
fn tabulated(set_id: u8, a: Rational, b: Rational) -> (WaveTable, i64, i64) {
    let combo = match set_id {
        1 | 3 => a - b,
        _ => a + b,
    }
    .to_integer();
    if combo.is_even() {
        let half = combo / 2; // M = (a-b)/2 or N = (a+b)/2
        let (n, li) = match set_id {
            1 => (2 * half - 2, half),
            2 => (2 * half - 1, half),
            3 => (2 * half - 1, half),
            _ => (2 * half, half + 1),
        };
        (WaveTable::Even, n, li)
    } else {
        // M' = (a-b-1)/2, N' = (a+b-1)/2 (a±b = 2M'+1, 2N'+1).
        let half = (combo - 1) / 2;
        let (n, li) = match set_id {
            1 => (2 * half - 1, half),
            2 => (2 * half, half + 1),
            3 => (2 * half, half + 1),
            _ => (2 * half + 1, half + 1),
        };
        (WaveTable::Odd, n, li)
    }
}

/// Period of `ψ = cnᵅ dnᵝ P_n(sn)`: under `x → x + 2K`, `cn` and `sn` flip
/// sign while `dn` is unchanged, so `ψ` picks up `(-1)^(α+n)`.
pub fn classify_period(r: &SolvabilityRecord) -> PeriodClass {
    period_for(r.alpha_int(), r.n)
}

fn period_for(alpha: i32, n: usize) -> PeriodClass {
    if (alpha as i64 + n as i64).is_even() {
        PeriodClass::TwoK
    } else {
        PeriodClass::FourK
    }
}

fn outcome(set: ResidueSet, a: Rational, b: Rational) -> Result<SetOutcome> {
    let lambda1 = a + Rational::one();
    let n_exact = lambda1 - set.b1 * 2 - set.d1 * 2;
    if !n_exact.is_integer() {
        // Unreachable for validated parameters; kept for the mixed case.
        return Err(Error::MixedCase {
            a: a.to_string(),
            b: b.to_string(),
        });
    }
    let n = n_exact.to_integer();
    let (table, n_table, li) = tabulated(set.set_id, a, b);
    if n_table != n {
        return Err(Error::TableMismatch {
            set_id: set.set_id,
            tabulated: n_table,
            derived: n,
        });
    }
    if n < 0 {
        return Ok(SetOutcome::Discarded { residue_set: set, n });
    }
    let n = n.to_usize().expect("non-negative");
    let alpha = (set.b1 * 4 - Rational::one()) / 2;
    let beta = (set.d1 * 4 - Rational::one()) / 2;
    Ok(SetOutcome::Admissible(SolvabilityRecord {
        residue_set: set,
        n,
        lambda1,
        alpha,
        beta,
        poly_parity: Parity::of(n),
        period_class: period_for(alpha.to_integer() as i32, n),
        li_count: li.to_usize().expect("non-negative count"),
        table,
    }))
}

/// All four residue combinations with their outcome, discarded ones
/// included (they carry the negative degree).
pub fn analyze_sets(p: &PotentialParams) -> Result<Vec<SetOutcome>> {
    residue_sets(p.b())?
        .into_iter()
        .map(|set| outcome(set, p.a(), p.b()))
        .collect()
}

/// Admissible solution families, ordered by set id.
pub fn solvability_records(p: &PotentialParams) -> Result<Vec<SolvabilityRecord>> {
    Ok(analyze_sets(p)?
        .into_iter()
        .filter_map(|o| match o {
            SetOutcome::Admissible(r) => Some(r),
            SetOutcome::Discarded { .. } => None,
        })
        .collect())
}

/// The row identity of the condition table for this record's set.
pub fn qes_condition_holds(r: &SolvabilityRecord, a: Rational, b: Rational) -> bool {
    let n = Rational::from(r.n as i64);
    let one = Rational::one();
    match r.set_id() {
        1 => b - a == -n - 2,
        2 => a + b + one == n + 2,
        3 => b - a == -n - one,
        4 => a + b == n,
        _ => false,
    }
}
