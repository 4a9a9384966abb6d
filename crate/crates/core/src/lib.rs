//! Band-edge states of the associated Lamé potential
//! `V(x) = a(a+1) m sn²(x|m) + b(b+1) m cn²(x|m)/dn²(x|m)` in its
//! quasi-exactly solvable sector, together with a Floquet-discriminant
//! oracle that checks them independently.
//!
//! The pipeline is
//! [`qes::solvability_records`] → [`spectral::build_pencil`] →
//! [`spectral::solve_pencil`] → [`spectral::dedupe_degeneracies`], with
//! [`verify::crosscheck`] on the side.

pub mod elliptic;
pub mod error;
pub mod params;
mod poly;
pub mod published;
pub mod qes;
pub mod spectral;
pub mod verify;

pub use elliptic::{complete_k, jacobi, EllipticTriple, ModulusParam};
pub use error::{Error, Result};
pub use params::{parse_rational, ParamKind, PotentialParams, Rational};
pub use qes::{
    analyze_sets, classify_period, residue_sets, solvability_records, Parity, PeriodClass,
    ResidueSet, SetOutcome, SolvabilityRecord,
};
pub use spectral::{
    build_pencil, dedupe_degeneracies, eval_wavefunction, schrodinger_residual, solve_all,
    solve_pencil, BandEdgeSolution, Pencil,
};
pub use verify::{
    crosscheck, discriminant_trace, find_band_edges, monodromy, potential_value, BandEdge,
    CrosscheckReport, DiscriminantSample, EdgeKind, Monodromy,
};
