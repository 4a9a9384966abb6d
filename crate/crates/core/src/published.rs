//! The two worked cases with closed-form band edges: `(a, b) = (2, 1)` and
//! `(7/2, 1/2)`, each with the additive constant that puts the lowest QES
//! level at zero.

use crate::error::Result;
use crate::params::{PotentialParams, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PublishedCase {
    /// `a = 2, b = 1`, shift `-4m`.
    TwoOne,
    /// `a = 7/2, b = 1/2`, shift `-2 - 29m/4 + δ`, `δ = √(4 - 4m + 25m²)`.
    SevenHalvesOneHalf,
}

/// A closed-form energy with its symbolic label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedForm {
    pub label: &'static str,
    pub energy: f64,
}

fn delta(m: f64) -> f64 {
    (4.0 - 4.0 * m + 25.0 * m * m).sqrt()
}

impl PublishedCase {
    pub fn from_table(table: u8) -> Option<Self> {
        match table {
            4 => Some(Self::TwoOne),
            5 => Some(Self::SevenHalvesOneHalf),
            _ => None,
        }
    }

    pub fn table(self) -> u8 {
        match self {
            Self::TwoOne => 4,
            Self::SevenHalvesOneHalf => 5,
        }
    }

    pub fn matching(a: Rational, b: Rational) -> Option<Self> {
        [Self::TwoOne, Self::SevenHalvesOneHalf]
            .into_iter()
            .find(|c| c.a() == a && c.b() == b)
    }

    pub fn a(self) -> Rational {
        match self {
            Self::TwoOne => Rational::from(2),
            Self::SevenHalvesOneHalf => Rational::new(7, 2),
        }
    }

    pub fn b(self) -> Rational {
        match self {
            Self::TwoOne => Rational::from(1),
            Self::SevenHalvesOneHalf => Rational::new(1, 2),
        }
    }

    pub fn shift(self, m: f64) -> f64 {
        match self {
            Self::TwoOne => -4.0 * m,
            Self::SevenHalvesOneHalf => -2.0 - 29.0 * m / 4.0 + delta(m),
        }
    }

    pub fn params(self, m: f64) -> Result<PotentialParams> {
        PotentialParams::new(self.a(), self.b(), m, self.shift(m))
    }

    /// Distinct shifted band-edge energies, ascending.
    pub fn closed_forms(self, m: f64) -> Vec<ClosedForm> {
        let mut v = match self {
            Self::TwoOne => {
                let r1 = (4.0 - 3.0 * m).sqrt();
                let r2 = (m * m - 5.0 * m + 4.0).sqrt();
                vec![
                    ClosedForm { label: "0", energy: 0.0 },
                    ClosedForm { label: "5-3m-2√(4-3m)", energy: 5.0 - 3.0 * m - 2.0 * r1 },
                    ClosedForm { label: "5-3m+2√(4-3m)", energy: 5.0 - 3.0 * m + 2.0 * r1 },
                    ClosedForm { label: "5-2m-2√(m²-5m+4)", energy: 5.0 - 2.0 * m - 2.0 * r2 },
                    ClosedForm { label: "5-2m+2√(m²-5m+4)", energy: 5.0 - 2.0 * m + 2.0 * r2 },
                ]
            }
            Self::SevenHalvesOneHalf => {
                let d = delta(m);
                vec![
                    ClosedForm { label: "0", energy: 0.0 },
                    ClosedForm { label: "2δ", energy: 2.0 * d },
                    ClosedForm { label: "δ-m+2", energy: d - m + 2.0 },
                    ClosedForm { label: "14-7m+δ", energy: 14.0 - 7.0 * m + d },
                ]
            }
        };
        v.sort_by(|x, y| x.energy.total_cmp(&y.energy));
        v
    }

    /// Label of the closed form within `1e-8` of `energy`, if any.
    pub fn label_for(self, m: f64, energy: f64) -> Option<&'static str> {
        self.closed_forms(m)
            .into_iter()
            .find(|c| (c.energy - energy).abs() <= 1e-8 * energy.abs().max(1.0))
            .map(|c| c.label)
    }
}
