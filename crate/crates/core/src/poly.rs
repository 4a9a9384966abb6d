//! Dense real polynomials, coefficients in ascending powers.

pub(crate) fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len().max(b.len())];
    for (i, v) in a.iter().enumerate() {
        out[i] += v;
    }
    for (i, v) in b.iter().enumerate() {
        out[i] += v;
    }
    out
}

pub(crate) fn scale(a: &[f64], k: f64) -> Vec<f64> {
    a.iter().map(|v| v * k).collect()
}

pub(crate) fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub(crate) fn deriv(a: &[f64]) -> Vec<f64> {
    a.iter().enumerate().skip(1).map(|(i, v)| i as f64 * v).collect()
}

/// Multiplies by `t^k`.
pub(crate) fn shift_up(a: &[f64], k: usize) -> Vec<f64> {
    let mut out = vec![0.0; k];
    out.extend_from_slice(a);
    out
}


/// Quotient and remainder of `num / den`; `den` must have a nonzero
/// leading coefficient.
pub(crate) fn divrem(num: &[f64], den: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let dn = den.len() - 1;
    let lead = den[dn];
    let mut rem = num.to_vec();
    if rem.len() <= dn {
        return (vec![0.0], rem);
    }
    let mut quot = vec![0.0; rem.len() - dn];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dn] / lead;
        quot[k] = c;
        for (j, d) in den.iter().enumerate() {
            rem[k + j] -= c * d;
        }
    }
    rem.truncate(dn);
    (quot, rem)
}
