//! ν-ary parametricity on a small type language: parsing, translation,
//! normalization, and the telescopes produced by iterating the translation.

mod normalize;
mod parse;
mod print;
mod syntax;
mod telescope;
mod translate;

use std::collections::BTreeMap;

use serde::Serialize;

pub use normalize::{normalize, normalize_term};
pub use parse::{parse_term, parse_type};
pub use print::{print_term, print_type};
pub use syntax::{Fresh, TermExpr, TypeExpr, ANON};
pub use telescope::{flatten, telescope_stats, Hypothesis, Telescope};
pub use translate::{iterate_types, level_name, level_of, translate, STAR_SUFFIX};

use crate::error::ParamError;

/// Summary of a normalized telescope, as emitted by the CLI.
#[derive(Debug, Clone, Serialize)]
pub struct TelescopeReport {
    pub normalized: String,
    pub display: String,
    pub stats: BTreeMap<usize, usize>,
}

impl TelescopeReport {
    pub fn new(t: &TypeExpr) -> Result<Self, ParamError> {
        let t = normalize(t);
        let tele = flatten(&t)?;
        Ok(TelescopeReport { normalized: print_type(&t), display: tele.display(), stats: telescope_stats(&t)? })
    }
}
