//! Plain-text renderings. Numbers use the same 17-digit strings as JSON.

use std::fmt::Write;

use lame_qes::verify::CrosscheckReport;

use crate::document::{sig17, SolutionDocument, TableDocument};

pub fn solution(doc: &SolutionDocument) -> String {
    let mut out = String::new();
    let p = &doc.params;
    let _ = writeln!(out, "a = {}, b = {}, m = {}, shift = {}", p.a, p.b, sig17(p.m), sig17(p.shift));
    let _ = writeln!(out);
    let _ = writeln!(out, "{:<4} {:<6} {:<6} {:>3} {:>3}  eigenfunction", "set", "b1", "d1", "n", "LI");
    for r in &doc.records {
        let li = r.li_count.map_or("-".to_string(), |v| v.to_string());
        let ef = r.eigenfunction.clone().unwrap_or_else(|| "-".into());
        let _ = writeln!(out, "{:<4} {:<6} {:<6} {:>3} {:>3}  {}", r.set_id, r.b1, r.d1, r.n, li, ef);
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "{:>24}  {:<4} {:<6} {:<5}  P_n coefficients (ascending)", "energy", "set", "period", "group");
    for s in &doc.solutions {
        let group = s.degeneracy_group.map_or("-".to_string(), |g| g.to_string());
        let coeffs: Vec<String> = s.poly_coeffs.iter().map(|c| sig17(*c)).collect();
        let _ = writeln!(
            out,
            "{:>24}  {:<4} {:<6} {:<5}  [{}]",
            sig17(s.energy),
            s.set_id,
            s.period_class.to_string(),
            group,
            coeffs.join(", ")
        );
    }
    if let Some(v) = &doc.verification {
        out.push('\n');
        out.push_str(&report(v));
    }
    out
}

pub fn report(r: &CrosscheckReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "cross-check (steps = {}): {}", r.steps, if r.passed { "PASS" } else { "FAIL" });
    for c in &r.checks {
        let edge = c
            .nearest_edge
            .map_or("none".to_string(), |e| format!("{} at {}", e.kind, sig17(e.energy)));
        let _ = writeln!(
            out,
            "  [{}] E = {}  set {}  period {}  ||delta|-2| = {:.3e}  nearest edge {} (distance {:.3e})",
            if c.passed { "PASS" } else { "FAIL" },
            sig17(c.energy),
            c.set_id,
            c.predicted_period,
            c.delta_defect,
            edge,
            c.edge_distance
        );
        for m in &c.messages {
            let _ = writeln!(out, "         {m}");
        }
    }
    for w in &r.warnings {
        let _ = writeln!(out, "  warning: {w}");
    }
    out
}

pub fn table(doc: &TableDocument) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Table {} (a = {}, b = {}, m = {})", doc.table, doc.params.a, doc.params.b, sig17(doc.params.m));
    let _ = writeln!(
        out,
        "{:<4} {:<6} {:<6} {:>3} {:>3}  {:<28} {:<18} {:>24}",
        "set", "b1", "d1", "n", "LI", "eigenfunction", "eigenvalue", "numeric"
    );
    for r in &doc.rows {
        let dash = || "-".to_string();
        let _ = writeln!(
            out,
            "{:<4} {:<6} {:<6} {:>3} {:>3}  {:<28} {:<18} {:>24}",
            r.set_id,
            r.b1,
            r.d1,
            r.n,
            r.li_count.map_or_else(dash, |v| v.to_string()),
            r.eigenfunction.clone().unwrap_or_else(dash),
            r.energy_label.clone().unwrap_or_else(dash),
            r.energy.map_or_else(dash, sig17)
        );
    }
    out
}
