//! JSON/text output documents.

use lame_qes::published::PublishedCase;
use lame_qes::verify::CrosscheckReport;
use lame_qes::{
    analyze_sets, solve_all, BandEdgeSolution, PeriodClass, PotentialParams, Result, SetOutcome,
};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// Formats with 17 significant digits.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

fn ser_f64<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    let raw = RawValue::from_string(sig17(*x)).map_err(serde::ser::Error::custom)?;
    raw.serialize(s)
}

fn ser_f64_vec<S: Serializer>(v: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&RawValue::from_string(sig17(*x)).map_err(serde::ser::Error::custom)?)?;
    }
    seq.end()
}

fn ser_opt_f64<S: Serializer>(x: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => ser_f64(v, s),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Serialize)]
pub struct ParamsEcho {
    pub a: String,
    pub b: String,
    #[serde(serialize_with = "ser_f64")]
    pub m: f64,
    #[serde(serialize_with = "ser_f64")]
    pub shift: f64,
}

#[derive(Debug, Serialize)]
pub struct RecordEntry {
    pub set_id: u8,
    pub b1: String,
    pub d1: String,
    pub n: i64,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub poly_parity: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period_class: Option<PeriodClass>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub li_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenfunction: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct SolutionEntry {
    #[serde(serialize_with = "ser_f64")]
    pub energy: f64,
    #[serde(serialize_with = "ser_f64")]
    pub energy_unshifted: f64,
    pub set_id: u8,
    pub alpha: String,
    pub beta: String,
    pub eigenfunction: String,
    /// Ascending powers of `sn x`.
    #[serde(serialize_with = "ser_f64_vec")]
    pub poly_coeffs: Vec<f64>,
    pub period_class: PeriodClass,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degeneracy_group: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct SolutionDocument {
    pub params: ParamsEcho,
    pub records: Vec<RecordEntry>,
    pub solutions: Vec<SolutionEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<CrosscheckReport>,
}

pub fn params_echo(p: &PotentialParams) -> ParamsEcho {
    ParamsEcho {
        a: p.a().to_string(),
        b: p.b().to_string(),
        m: p.m().value(),
        shift: p.shift(),
    }
}

fn record_entry(o: &SetOutcome) -> RecordEntry {
    let set = o.residue_set();
    let mut e = RecordEntry {
        set_id: set.set_id,
        b1: set.b1.to_string(),
        d1: set.d1.to_string(),
        n: o.degree(),
        status: "discarded",
        alpha: None,
        beta: None,
        poly_parity: None,
        period_class: None,
        li_count: None,
        eigenfunction: None,
    };
    if let SetOutcome::Admissible(r) = o {
        e.status = "admissible";
        e.alpha = Some(r.alpha.to_string());
        e.beta = Some(r.beta.to_string());
        e.poly_parity = Some(if r.n % 2 == 0 { "even" } else { "odd" });
        e.period_class = Some(r.period_class);
        e.li_count = Some(r.li_count);
        e.eigenfunction = Some(r.descriptor());
    }
    e
}

/// Group ids (from 1) for degenerate multiplets; singletons get none.
fn degeneracy_groups(solutions: &[BandEdgeSolution]) -> Vec<Option<usize>> {
    let mut ids = vec![None; solutions.len()];
    let mut next = 1;
    for i in 0..solutions.len() {
        if ids[i].is_some() || solutions[i].degeneracy_partners.is_empty() {
            continue;
        }
        ids[i] = Some(next);
        for &j in &solutions[i].degeneracy_partners {
            ids[j] = Some(next);
        }
        next += 1;
    }
    ids
}

pub fn solution_entries(solutions: &[BandEdgeSolution]) -> Vec<SolutionEntry> {
    let groups = degeneracy_groups(solutions);
    solutions
        .iter()
        .zip(groups)
        .map(|(s, g)| SolutionEntry {
            energy: s.energy,
            energy_unshifted: s.energy_unshifted,
            set_id: s.record.set_id(),
            alpha: s.record.alpha.to_string(),
            beta: s.record.beta.to_string(),
            eigenfunction: s.record.descriptor(),
            poly_coeffs: s.poly_coeffs(),
            period_class: s.record.period_class,
            degeneracy_group: g,
        })
        .collect()
}

pub fn build(p: &PotentialParams) -> Result<(SolutionDocument, Vec<BandEdgeSolution>)> {
    let records = analyze_sets(p)?.iter().map(record_entry).collect();
    let solutions = solve_all(p)?;
    let doc = SolutionDocument {
        params: params_echo(p),
        records,
        solutions: solution_entries(&solutions),
        verification: None,
    };
    Ok((doc, solutions))
}

/// One row of a reproduced table; discarded sets have no solution fields.
#[derive(Debug, Serialize)]
pub struct TableRow {
    pub set_id: u8,
    pub b1: String,
    pub d1: String,
    pub n: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub li_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenfunction: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub poly_coeffs: Option<SerVec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy_label: Option<String>,
    #[serde(serialize_with = "ser_opt_f64", skip_serializing_if = "Option::is_none")]
    pub energy: Option<f64>,
}

#[derive(Debug)]
pub struct SerVec(pub Vec<f64>);

impl Serialize for SerVec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ser_f64_vec(&self.0, s)
    }
}

#[derive(Debug, Serialize)]
pub struct TableDocument {
    pub table: u8,
    pub params: ParamsEcho,
    pub rows: Vec<TableRow>,
}

/// Set-by-set reproduction, without cross-set deduplication.
pub fn table(case: PublishedCase, m: f64) -> Result<TableDocument> {
    let p = case.params(m)?;
    let mut rows = Vec::new();
    for o in analyze_sets(&p)? {
        let set = o.residue_set();
        let base = |li, ef, coeffs, label, energy| TableRow {
            set_id: set.set_id,
            b1: set.b1.to_string(),
            d1: set.d1.to_string(),
            n: o.degree(),
            li_count: li,
            eigenfunction: ef,
            poly_coeffs: coeffs,
            energy_label: label,
            energy,
        };
        match o {
            SetOutcome::Discarded { .. } => rows.push(base(None, None, None, None, None)),
            SetOutcome::Admissible(r) => {
                for s in lame_qes::spectral::solve_record(&r, &p)? {
                    let label = case.label_for(m, s.energy).unwrap_or("?").to_string();
                    rows.push(base(
                        Some(r.li_count),
                        Some(r.descriptor()),
                        Some(SerVec(s.poly_coeffs())),
                        Some(label),
                        Some(s.energy),
                    ));
                }
            }
        }
    }
    Ok(TableDocument {
        table: case.table(),
        params: params_echo(&p),
        rows,
    })
}
