//! Jacobi elliptic functions and the complete elliptic integral of the
//! first kind.
//!
//! Everything here uses the *parameter* convention: `m = k²`, the square of
//! the modulus. `sn(x, m)` below is `sn(x | m)` in Abramowitz & Stegun
//! notation. Some libraries take the modulus `k` instead; pass `k * k` when
//! porting values from those.
//!
//! `K(m)` comes from the arithmetic-geometric mean. The triple `(sn, cn, dn)`
//! is evaluated with the descending Landen (Gauss) transformation after the
//! argument has been reduced modulo the real period `4K`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MAX_LANDEN: usize = 32;

/// Elliptic parameter `m` in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct ModulusParam(f64);

impl ModulusParam {
    pub fn new(m: f64) -> Result<Self> {
        if m.is_finite() && (0.0..1.0).contains(&m) {
            Ok(Self(m))
        } else {
            Err(Error::InvalidModulus(m))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// Complementary parameter `1 - m`.
    #[inline]
    pub fn complement(self) -> f64 {
        1.0 - self.0
    }
}

impl TryFrom<f64> for ModulusParam {
    type Error = Error;

    fn try_from(m: f64) -> Result<Self> {
        Self::new(m)
    }
}

impl From<ModulusParam> for f64 {
    fn from(m: ModulusParam) -> f64 {
        m.0
    }
}

/// Values of `sn`, `cn` and `dn` at a common argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticTriple {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

/// Arithmetic-geometric mean of two non-negative numbers.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..MAX_LANDEN {
        if (a - b).abs() <= 2.0 * f64::EPSILON * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    0.5 * (a + b)
}

/// Quarter period `K(m) = π / (2 AGM(1, √(1-m)))`.
pub fn complete_k(m: ModulusParam) -> f64 {
    if m.value() == 0.0 {
        return FRAC_PI_2;
    }
    PI / (2.0 * agm(1.0, m.complement().sqrt()))
}

/// Jacobi elliptic functions `(sn, cn, dn)` at real argument `x`.
///
/// Non-finite `x` yields NaN components.
pub fn jacobi(x: f64, m: ModulusParam) -> EllipticTriple {
    if !x.is_finite() {
        return EllipticTriple {
            sn: f64::NAN,
            cn: f64::NAN,
            dn: f64::NAN,
        };
    }
    let mv = m.value();
    let mc = m.complement();
    if mv == 0.0 {
        let (sn, cn) = x.sin_cos();
        return EllipticTriple { sn, cn, dn: 1.0 };
    }

    let period = 4.0 * complete_k(m);
    let u = x - period * (x / period).round();

    // Descending Landen sequence: a_n, c_n with c_n -> 0.
    let mut a = [0.0_f64; MAX_LANDEN + 1];
    let mut c = [0.0_f64; MAX_LANDEN + 1];
    a[0] = 1.0;
    c[0] = mv.sqrt();
    let mut b = mc.sqrt();
    let mut steps = 0;
    while steps < MAX_LANDEN && c[steps].abs() > f64::EPSILON * a[steps] {
        let (an, bn) = (a[steps], b);
        a[steps + 1] = 0.5 * (an + bn);
        c[steps + 1] = 0.5 * (an - bn);
        b = (an * bn).sqrt();
        steps += 1;
    }

    let mut phi = (1u64 << steps) as f64 * a[steps] * u;
    for n in (1..=steps).rev() {
        let ratio = (c[n] / a[n] * phi.sin()).clamp(-1.0, 1.0);
        phi = 0.5 * (phi + ratio.asin());
    }

    let (sn, cn) = phi.sin_cos();
    // dn² = m' + m cn² avoids the 0/0 of the cos-ratio form at x = ±K.
    let dn = (mc + mv * cn * cn).sqrt();
    EllipticTriple { sn, cn, dn }
}
