//! Kontsevich-Witten and Hodge free energies, and the end-to-end checks
//! relating them.

mod checks;
mod solver;

pub use checks::*;
pub use solver::{admissible_genus, solve_fk, solve_fk_with, CorrelatorTable, SolveStrategy};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ops::{build_w, odd_substitution, phi_substitution, Alphabet, GradedPoly, TruncationSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    FkT,
    FkQ,
    FhT,
    FhQ,
}

/// A free energy F together with exp(F) at the same truncation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TauSeries {
    pub log_part: GradedPoly,
    pub exp_part: GradedPoly,
    pub provenance: Provenance,
}

impl TauSeries {
    pub fn from_log(log_part: GradedPoly, provenance: Provenance) -> Result<Self> {
        let exp_part = log_part.exp()?;
        Ok(Self { log_part, exp_part, provenance })
    }

    pub fn from_exp(exp_part: GradedPoly, provenance: Provenance) -> Result<Self> {
        let log_part = exp_part.log()?;
        Ok(Self { log_part, exp_part, provenance })
    }
}

/// F_K in t or q (t_k = (2k-1)!! q_{2k+1}) within `trunc`.
pub fn fk_series(table: &CorrelatorTable, alphabet: Alphabet, trunc: TruncationSpec) -> Result<TauSeries> {
    if table.weight_bound() < trunc.weight_max {
        return Err(Error::Window(format!(
            "correlators known to weight {} but the truncation needs {}",
            table.weight_bound(),
            trunc.weight_max
        )));
    }
    let ft = table.free_energy(trunc);
    match alphabet {
        Alphabet::T => TauSeries::from_log(ft, Provenance::FkT),
        Alphabet::Q => TauSeries::from_log(odd_substitution(trunc)?.substitute(&ft)?, Provenance::FkQ),
    }
}

/// exp(F_H(u,t)) = e^W exp(F_K(t)), and its image under t_k = phi~_k(u,q).
pub fn build_fh(table: &CorrelatorTable, trunc: TruncationSpec) -> Result<(TauSeries, TauSeries)> {
    let fk = fk_series(table, Alphabet::T, trunc)?;
    let fh_t = TauSeries::from_exp(build_w(&trunc)?.exp_apply(&fk.exp_part)?, Provenance::FhT)?;
    let phi = phi_substitution(trunc)?;
    let fh_q = TauSeries {
        log_part: phi.substitute(&fh_t.log_part)?,
        exp_part: phi.substitute(&fh_t.exp_part)?,
        provenance: Provenance::FhQ,
    };
    Ok((fh_t, fh_q))
}
