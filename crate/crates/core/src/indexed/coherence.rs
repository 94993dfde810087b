//! Commutation of restrictions, checked by value equality, and validation of
//! whole indexed sets.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::IndexedError;
use crate::indexed::restrict::{restr_frame_raw, restr_painting_raw};
use crate::indexed::set::{Enumerator, IndexedNuSet};
use crate::indexed::values::{Frame, Painting};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohViolation {
    pub eps: usize,
    pub omega: usize,
    pub q: usize,
    pub r: usize,
    pub n: usize,
    pub p: usize,
    pub frame: String,
    pub painting: Option<String>,
    pub message: String,
}

impl std::fmt::Display for CohViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "(ε={}, ω={}, q={}, r={}, n={}, p={}) at {}",
            self.eps, self.omega, self.q, self.r, self.n, self.p, self.frame
        )?;
        if let Some(c) = &self.painting {
            write!(f, " / {c}")?;
        }
        write!(f, ": {}", self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CohReport {
    pub checked: usize,
    pub violations: Vec<CohViolation>,
}

impl CohReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    fn merge(&mut self, other: CohReport) {
        self.checked += other.checked;
        self.violations.extend(other.violations);
    }
}

#[derive(Debug, Clone, Copy)]
struct CohIndex {
    eps: usize,
    omega: usize,
    q: usize,
    r: usize,
    n: usize,
    p: usize,
}

impl CohIndex {
    fn check(self, set: &IndexedNuSet, op: &'static str, max_n: usize) -> Result<(), IndexedError> {
        let CohIndex { eps, omega, q, r, n, p } = self;
        let nu = set.arity().get();
        if !(p <= r && r <= q && q + 2 <= n) {
            return Err(IndexedError::SideConditionViolated { op, eps, q, n, p });
        }
        if eps >= nu || omega >= nu {
            return Err(IndexedError::Malformed(format!("directions ({eps}, {omega}) out of range for arity {nu}")));
        }
        if n > max_n {
            return Err(IndexedError::DimensionOutOfRange { n, max: max_n });
        }
        Ok(())
    }

    fn violation(self, frame: &Frame, painting: Option<&Painting>, message: String) -> CohViolation {
        CohViolation {
            eps: self.eps,
            omega: self.omega,
            q: self.q,
            r: self.r,
            n: self.n,
            p: self.p,
            frame: frame.key(),
            painting: painting.map(Painting::to_string),
            message,
        }
    }

    /// `restr(ε, q) ∘ restr(ω, r)` and `restr(ω, r) ∘ restr(ε, q+1)` on a frame.
    fn frame_sides(self, d: &Frame) -> (Frame, Frame) {
        let lhs = restr_frame_raw(self.eps, self.q, &restr_frame_raw(self.omega, self.r, d));
        let rhs = restr_frame_raw(self.omega, self.r, &restr_frame_raw(self.eps, self.q + 1, d));
        (lhs, rhs)
    }

    fn painting_sides(self, c: &Painting) -> (Painting, Painting) {
        let p = self.p;
        let lhs = restr_painting_raw(self.eps, self.q, p, &restr_painting_raw(self.omega, self.r, p, c));
        let rhs = restr_painting_raw(self.omega, self.r, p, &restr_painting_raw(self.eps, self.q + 1, p, c));
        (lhs, rhs)
    }

    fn check_frame(self, set: &IndexedNuSet, d: &Frame) -> Option<CohViolation> {
        let (lhs, rhs) = self.frame_sides(d);
        if lhs != rhs {
            return Some(self.violation(d, None, format!("{lhs} differs from {rhs}")));
        }
        set.type_frame(self.n - 2, &lhs)
            .err()
            .map(|e| self.violation(d, None, format!("restricted frame {lhs} is not a frame: {e}")))
    }

    fn check_painting(self, set: &IndexedNuSet, d: &Frame, c: &Painting) -> Option<CohViolation> {
        let (lhs, rhs) = self.painting_sides(c);
        if lhs != rhs {
            return Some(self.violation(d, Some(c), format!("{lhs} differs from {rhs}")));
        }
        let (over, _) = self.frame_sides(d);
        set.type_painting(self.n - 2, self.p, &over, &lhs)
            .err()
            .map(|e| self.violation(d, Some(c), format!("restricted painting {lhs} does not sit over {over}: {e}")))
    }
}

/// Checks `restr(ε,q)∘restr(ω,r) = restr(ω,r)∘restr(ε,q+1)` on every frame of
/// `(n, p)`, for `p ≤ r ≤ q ≤ n-2` and `n ≤ truncation + 1`.
pub fn check_coh_frame(
    s: &IndexedNuSet,
    eps: usize,
    omega: usize,
    q: usize,
    r: usize,
    n: usize,
    p: usize,
) -> Result<CohReport, IndexedError> {
    check_coh_frame_with(&Enumerator::new(s), eps, omega, q, r, n, p)
}

pub fn check_coh_frame_with(
    en: &Enumerator<'_>,
    eps: usize,
    omega: usize,
    q: usize,
    r: usize,
    n: usize,
    p: usize,
) -> Result<CohReport, IndexedError> {
    let set = en.set();
    let idx = CohIndex { eps, omega, q, r, n, p };
    idx.check(set, "check_coh_frame", set.truncation() + 1)?;
    let frames = en.frames(n, p)?;
    let violations = frames.iter().filter_map(|d| idx.check_frame(set, d)).collect();
    Ok(CohReport { checked: frames.len(), violations })
}

/// The painting counterpart of [`check_coh_frame`] over every frame of
/// `(n, p)` and every painting over it, for `n ≤ truncation`.
pub fn check_coh_painting(
    s: &IndexedNuSet,
    eps: usize,
    omega: usize,
    q: usize,
    r: usize,
    n: usize,
    p: usize,
) -> Result<CohReport, IndexedError> {
    check_coh_painting_with(&Enumerator::new(s), eps, omega, q, r, n, p)
}

pub fn check_coh_painting_with(
    en: &Enumerator<'_>,
    eps: usize,
    omega: usize,
    q: usize,
    r: usize,
    n: usize,
    p: usize,
) -> Result<CohReport, IndexedError> {
    let set = en.set();
    let idx = CohIndex { eps, omega, q, r, n, p };
    idx.check(set, "check_coh_painting", set.truncation())?;
    let mut report = CohReport::default();
    for d in en.frames(n, p)?.iter() {
        for c in en.paintings(n, p, d)?.iter() {
            report.checked += 1;
            report.violations.extend(idx.check_painting(set, d, c));
        }
    }
    Ok(report)
}

/// [`check_coh_painting`] on given `(d, c)` pairs rather than enumerated ones.
/// A pair where `c` is not a painting over `d` in `s` is itself reported.
#[allow(clippy::too_many_arguments)]
pub fn check_coh_painting_on(
    s: &IndexedNuSet,
    eps: usize,
    omega: usize,
    q: usize,
    r: usize,
    n: usize,
    p: usize,
    values: &[(Frame, Painting)],
) -> Result<CohReport, IndexedError> {
    let idx = CohIndex { eps, omega, q, r, n, p };
    idx.check(s, "check_coh_painting", s.truncation())?;
    let nu = s.arity().get();
    let mut report = CohReport { checked: values.len(), violations: Vec::new() };
    for (d, c) in values {
        d.check_shape(nu, n, p)?;
        c.check_shape(nu, n, p)?;
        if let Err(e) = s.type_painting(n, p, d, c) {
            report.violations.push(idx.violation(d, Some(c), format!("not a painting over this frame: {e}")));
            continue;
        }
        report.violations.extend(idx.check_painting(s, d, c));
    }
    Ok(report)
}

/// Every `(ε, ω, q, r, p)` allowed at dimension `n`.
pub fn legal_coh_indices(nu: usize, n: usize) -> Vec<(usize, usize, usize, usize, usize)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    for q in 0..=n - 2 {
        for r in 0..=q {
            for p in 0..=r {
                for eps in 0..nu {
                    for omega in 0..nu {
                        out.push((eps, omega, q, r, p));
                    }
                }
            }
        }
    }
    out
}

/// Runs both coherence checks for every legal index with frames up to
/// `max_frame_dim` and paintings up to `max_painting_dim`.
pub fn check_all_coherences(
    en: &Enumerator<'_>,
    max_frame_dim: usize,
    max_painting_dim: usize,
) -> Result<(CohReport, CohReport), IndexedError> {
    let nu = en.set().arity().get();
    let mut frames = CohReport::default();
    let mut paintings = CohReport::default();
    for n in 2..=max_frame_dim.max(max_painting_dim) {
        for (eps, omega, q, r, p) in legal_coh_indices(nu, n) {
            if n <= max_frame_dim {
                frames.merge(check_coh_frame_with(en, eps, omega, q, r, n, p)?);
            }
            if n <= max_painting_dim {
                paintings.merge(check_coh_painting_with(en, eps, omega, q, r, n, p)?);
            }
        }
    }
    Ok((frames, paintings))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationIssue {
    pub kind: String,
    pub dim: usize,
    pub key: String,
    pub detail: String,
}

impl std::fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} at dimension {} for {}: {}", self.kind, self.dim, self.key, self.detail)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<ValidationIssue>,
    pub coherence_checked: usize,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub const MISSING_FIBRE: &str = "missing fibre";
pub const ORPHAN_KEY: &str = "orphan frame key";
pub const COHERENCE: &str = "coherence";

/// Totality of every family over the enumerated full frames, absence of
/// stray keys, and both coherence checks for all legal indices up to the
/// truncation.
pub fn validate_indexed(s: &IndexedNuSet) -> ValidationReport {
    let en = Enumerator::new(s);
    let mut report = ValidationReport::default();
    for n in 0..=s.truncation() {
        let frames = match en.frames(n, n) {
            Ok(f) => f,
            Err(e) => {
                report.violations.push(ValidationIssue {
                    kind: MISSING_FIBRE.into(),
                    dim: n,
                    key: String::new(),
                    detail: e.to_string(),
                });
                return report;
            }
        };
        let known: HashSet<&Frame> = frames.iter().collect();
        let missing: Vec<&Frame> = frames.iter().filter(|d| s.fibre(n, d).is_none()).collect();
        for d in &missing {
            report.violations.push(ValidationIssue {
                kind: MISSING_FIBRE.into(),
                dim: n,
                key: d.key(),
                detail: "enumerable full frame has no fibre entry".into(),
            });
        }
        for d in s.family(n).keys().filter(|d| !known.contains(d)) {
            report.violations.push(ValidationIssue {
                kind: ORPHAN_KEY.into(),
                dim: n,
                key: d.key(),
                detail: "key is not a frame over the lower dimensions".into(),
            });
        }
        if !missing.is_empty() {
            return report;
        }
    }
    match check_all_coherences(&en, s.truncation(), s.truncation()) {
        Ok((frames, paintings)) => {
            report.coherence_checked = frames.checked + paintings.checked;
            for v in frames.violations.iter().chain(&paintings.violations) {
                report.violations.push(ValidationIssue {
                    kind: COHERENCE.into(),
                    dim: v.n,
                    key: v.frame.clone(),
                    detail: v.to_string(),
                });
            }
        }
        Err(e) => report.violations.push(ValidationIssue {
            kind: COHERENCE.into(),
            dim: 0,
            key: String::new(),
            detail: e.to_string(),
        }),
    }
    report
}
