//! Length spec grammar:
//!
//! ```text
//! spec  := "l1" | "linf" | "l2" | "wnorm:" w ("," w)*
//!        | "word:" GENS | "smooth:" spec ":" r | "scale:" spec ":" λ
//! ```
//!
//! `GENS` is a comma-separated list of generator expressions, or `std`.

use super::{Budget, ClosedForm, LengthError, LengthFunction};
use crate::groups::{GeneratingSet, GroupDescriptor};

fn invalid(spec: &str, reason: impl Into<String>) -> LengthError {
    LengthError::InvalidSpec {
        spec: spec.to_string(),
        reason: reason.into(),
    }
}

fn split_trailing_number<'a>(spec: &'a str, rest: &'a str) -> Result<(&'a str, f64), LengthError> {
    let (base, num) = rest
        .rsplit_once(':')
        .ok_or_else(|| invalid(spec, "expected BASE:NUMBER"))?;
    let value: f64 = num
        .trim()
        .parse()
        .map_err(|_| invalid(spec, format!("{num:?} is not a number")))?;
    Ok((base, value))
}

impl LengthFunction {
    /// Parses a length spec; smoothed kinds enumerate their edge sets eagerly.
    pub fn parse(group: GroupDescriptor, spec: &str, budget: Budget) -> Result<Self, LengthError> {
        let spec = spec.trim();
        if let Some(rest) = spec.strip_prefix("smooth:") {
            let (base, r) = split_trailing_number(spec, rest)?;
            let base = Self::parse(group, base, budget)?;
            return Self::smoothed(base, r, budget).map(|l| l.with_label(spec));
        }
        if let Some(rest) = spec.strip_prefix("scale:") {
            let (base, f) = split_trailing_number(spec, rest)?;
            let base = Self::parse(group, base, budget)?;
            return Self::rescaled(base, f).map(|l| l.with_label(spec));
        }
        if let Some(gens) = spec.strip_prefix("word:") {
            let set = GeneratingSet::parse(group, gens)?;
            return Ok(Self::word_labelled(set, spec.to_string()));
        }
        if let Some(ws) = spec.strip_prefix("wnorm:") {
            let weights = ws
                .split(',')
                .map(|w| w.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| invalid(spec, "weights must be numbers"))?;
            return Self::closed_form(group, ClosedForm::Weighted(weights)).map(|l| l.with_label(spec));
        }
        let form = match spec {
            "l1" => ClosedForm::L1,
            "linf" => ClosedForm::LInf,
            "l2" => ClosedForm::L2,
            _ => return Err(invalid(spec, "unknown length kind")),
        };
        Self::closed_form(group, form)
    }
}
