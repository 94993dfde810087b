//! Finite fibred ν-sets.
//!
//! A [`TruncatedPresheaf`] stores its carriers `X(0) .. X(N)` and, for every
//! dimension `1 ≤ n ≤ N`, one total map `X(n) -> X(n-1)` per codimension-one
//! word. The action of an arbitrary word is derived by peeling letters off
//! from the left, and the presheaf laws are checked on codimension-two words.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{FormatError, PresheafError};
use crate::word::{hom_enumerate, Arity, Word};

/// A finite set `{0, .., size-1}` with optional element names.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FinSet {
    pub size: usize,
    pub labels: Option<Vec<String>>,
}

impl FinSet {
    pub fn new(size: usize) -> Self {
        FinSet { size, labels: None }
    }

    /// Panics if the labels are not pairwise distinct.
    pub fn labelled(labels: Vec<String>) -> Self {
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), labels.len(), "labels must be distinct");
        FinSet { size: labels.len(), labels: Some(labels) }
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => i.to_string(),
        }
    }

    pub(crate) fn to_json(&self) -> Value {
        match &self.labels {
            Some(l) => json!(l),
            None => json!(self.size),
        }
    }

    pub(crate) fn from_json(v: &Value) -> Option<Result<FinSet, String>> {
        if let Some(n) = v.as_u64() {
            return Some(Ok(FinSet::new(n as usize)));
        }
        let arr = v.as_array()?;
        let labels: Option<Vec<String>> = arr.iter().map(|x| x.as_str().map(str::to_owned)).collect();
        let labels = labels?;
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != labels.len() {
            return Some(Err("labels are not distinct".into()));
        }
        Some(Ok(FinSet { size: labels.len(), labels: Some(labels) }))
    }
}

/// A ν-set truncated at dimension `trunc`, given by codimension-one faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedPresheaf {
    nu: Arity,
    carriers: Vec<FinSet>,
    /// `faces[n][w]` for `1 ≤ n ≤ trunc`; `faces[0]` is empty.
    faces: Vec<BTreeMap<Word, Vec<usize>>>,
}

impl TruncatedPresheaf {
    /// Checks that every codimension-one face exists and is a total map into
    /// the carrier one dimension down.
    pub fn new(
        nu: Arity,
        carriers: Vec<FinSet>,
        faces: Vec<BTreeMap<Word, Vec<usize>>>,
    ) -> Result<Self, PresheafError> {
        assert!(!carriers.is_empty(), "a truncated presheaf has at least dimension 0");
        assert_eq!(carriers.len(), faces.len(), "one face table per dimension");
        for (n, table) in faces.iter().enumerate().skip(1) {
            for w in hom_enumerate(nu, n - 1, n) {
                let map = table.get(&w).ok_or_else(|| PresheafError::MissingFace { dim: n, word: w.to_string() })?;
                if map.len() != carriers[n].size {
                    return Err(PresheafError::Range {
                        dim: n,
                        word: w.to_string(),
                        message: format!("has {} entries, carrier has {}", map.len(), carriers[n].size),
                    });
                }
                if let Some(&bad) = map.iter().find(|&&y| y >= carriers[n - 1].size) {
                    return Err(PresheafError::Range {
                        dim: n,
                        word: w.to_string(),
                        message: format!("value {bad} outside carrier of size {}", carriers[n - 1].size),
                    });
                }
            }
            if let Some(extra) = table.keys().find(|w| w.len() != n || w.stars() != n - 1 || w.arity() != nu) {
                return Err(PresheafError::Range {
                    dim: n,
                    word: extra.to_string(),
                    message: "not a codimension-one word of this dimension".into(),
                });
            }
        }
        if !faces[0].is_empty() {
            return Err(PresheafError::Range {
                dim: 0,
                word: faces[0].keys().next().unwrap().to_string(),
                message: "dimension 0 has no faces".into(),
            });
        }
        Ok(TruncatedPresheaf { nu, carriers, faces })
    }

    pub fn arity(&self) -> Arity {
        self.nu
    }

    pub fn truncation(&self) -> usize {
        self.carriers.len() - 1
    }

    pub fn carrier(&self, n: usize) -> &FinSet {
        &self.carriers[n]
    }

    pub fn carriers(&self) -> &[FinSet] {
        &self.carriers
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.carriers.iter().map(|c| c.size).collect()
    }

    /// The stored face map of a codimension-one word.
    pub fn face(&self, w: &Word) -> &[usize] {
        &self.faces[w.len()][w]
    }

    pub fn face_tables(&self) -> &[BTreeMap<Word, Vec<usize>>] {
        &self.faces
    }

    /// Overwrites one face-map entry without revalidating the laws.
    pub fn set_face_entry(&mut self, w: &Word, x: usize, value: usize) {
        let table = self.faces[w.len()].get_mut(w).expect("face word exists");
        table[x] = value;
    }

    /// `X(f) : X(n) -> X(stars f)` for `f` of length `n`.
    pub fn action(&self, f: &Word) -> Result<Vec<usize>, PresheafError> {
        let n = f.len();
        if n > self.truncation() {
            return Err(PresheafError::DimensionOutOfRange { n, trunc: self.truncation() });
        }
        Ok((0..self.carriers[n].size).map(|x| self.act(f, x)).collect())
    }

    /// `X(f)(x)`. `f` must lie within the truncation.
    pub fn act(&self, f: &Word, x: usize) -> usize {
        let mut word = f.clone();
        let mut y = x;
        while let Ok((w, rest)) = word.factor_leftmost() {
            y = self.faces[w.len()][&w][y];
            word = rest;
        }
        y
    }

    /// Applies the face words of one factorization in order, outermost first.
    fn act_along(&self, path: &[Word], x: usize) -> usize {
        path.iter().fold(x, |y, w| self.faces[w.len()][w][y])
    }

    pub fn check_functor_laws(&self) -> LawReport {
        let mut violations = Vec::new();
        for n in 2..=self.truncation() {
            for f in hom_enumerate(self.nu, n - 2, n) {
                let [i, j] = f.letter_positions()[..] else { unreachable!() };
                // f = a_i ∘ rest_i = a_j ∘ rest_j, peeling either letter first.
                let outer_i = Word::single(self.nu, n, i, f.letters()[i]);
                let inner_i = f.without(i);
                let outer_j = Word::single(self.nu, n, j, f.letters()[j]);
                let inner_j = f.without(j);
                let first = [outer_i, inner_i];
                let second = [outer_j, inner_j];
                for x in 0..self.carriers[n].size {
                    let a = self.act_along(&first, x);
                    let b = self.act_along(&second, x);
                    if a != b {
                        violations.push(LawViolation {
                            dim: n,
                            word: f.to_string(),
                            first: (first[0].to_string(), first[1].to_string()),
                            second: (second[0].to_string(), second[1].to_string()),
                            element: x,
                            first_value: a,
                            second_value: b,
                        });
                    }
                }
            }
        }
        LawReport { violations }
    }

    pub fn require_lawful(&self) -> Result<(), PresheafError> {
        let report = self.check_functor_laws();
        match report.violations.first() {
            None => Ok(()),
            Some(v) => Err(PresheafError::LawViolation { count: report.violations.len(), first: v.to_string() }),
        }
    }

    /// Canonical JSON text: sorted keys, two-space indentation, final newline.
    pub fn to_json_string(&self) -> String {
        let mut faces = Map::new();
        for (n, table) in self.faces.iter().enumerate().skip(1) {
            let entries: Map<String, Value> = table.iter().map(|(w, m)| (w.to_string(), json!(m))).collect();
            faces.insert(n.to_string(), Value::Object(entries));
        }
        let value = json!({
            "nu": self.nu.get(),
            "trunc": self.truncation(),
            "carriers": self.carriers.iter().map(FinSet::to_json).collect::<Vec<_>>(),
            "faces": faces,
        });
        let mut out = serde_json::to_string_pretty(&value).expect("json values serialize");
        out.push('\n');
        out
    }

    pub fn from_json_str(text: &str) -> Result<Self, FormatError> {
        let value: Value = serde_json::from_str(text).map_err(|e| FormatError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let loc = Locator { text };
        let obj = value.as_object().ok_or_else(|| loc.invalid(&[], "top level must be an object"))?;
        let nu =
            obj.get("nu").and_then(Value::as_u64).ok_or_else(|| loc.arity(&["nu"], "missing or non-integer `nu`"))?;
        let nu = Arity::new(nu as usize).map_err(|e| loc.arity(&["nu"], &e.to_string()))?;
        let trunc = obj
            .get("trunc")
            .and_then(Value::as_u64)
            .ok_or_else(|| loc.invalid(&["trunc"], "missing or non-integer `trunc`"))? as usize;
        let carriers_json = obj
            .get("carriers")
            .and_then(Value::as_array)
            .ok_or_else(|| loc.invalid(&["carriers"], "missing `carriers` array"))?;
        if carriers_json.len() != trunc + 1 {
            return Err(loc.invalid(
                &["carriers"],
                &format!("expected {} carriers for truncation {trunc}, found {}", trunc + 1, carriers_json.len()),
            ));
        }
        let carriers = carriers_json
            .iter()
            .map(|c| match FinSet::from_json(c) {
                Some(Ok(set)) => Ok(set),
                Some(Err(msg)) => Err(loc.invalid(&["carriers"], &msg)),
                None => Err(loc.invalid(&["carriers"], "entries must be sizes or label arrays")),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let empty = Map::new();
        let faces_json = match obj.get("faces") {
            Some(Value::Object(m)) => m,
            None if trunc == 0 => &empty,
            _ => return Err(loc.invalid(&["faces"], "missing `faces` object")),
        };
        for key in faces_json.keys() {
            let ok = key.parse::<usize>().map(|n| (1..=trunc).contains(&n)).unwrap_or(false);
            if !ok {
                return Err(loc.range(&["faces", key], "dimension key must be in 1..=trunc"));
            }
        }
        let mut faces = vec![BTreeMap::new()];
        for n in 1..=trunc {
            let dim_key = n.to_string();
            let table_json = match faces_json.get(&dim_key) {
                Some(Value::Object(t)) => t,
                Some(_) => return Err(loc.invalid(&["faces", &dim_key], "must be an object")),
                None => {
                    let w = hom_enumerate(nu, n - 1, n).remove(0);
                    return Err(FormatError::MissingFace { line: loc.line(&["faces"]), dim: n, word: w.to_string() });
                }
            };
            let mut table = BTreeMap::new();
            for (wtext, map_json) in table_json {
                let path = ["faces", dim_key.as_str(), wtext.as_str()];
                let w = Word::parse(nu, wtext).map_err(|e| loc.arity(&path, &e.to_string()))?;
                if w.len() != n || w.stars() != n - 1 {
                    return Err(loc.range(&path, "not a codimension-one word of this dimension"));
                }
                let entries =
                    map_json.as_array().ok_or_else(|| loc.invalid(&path, "face map must be an integer array"))?;
                let map = entries
                    .iter()
                    .map(|v| v.as_u64().map(|x| x as usize))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| loc.invalid(&path, "face map must be an integer array"))?;
                if map.len() != carriers[n].size {
                    return Err(
                        loc.range(&path, &format!("has {} entries, carrier {n} has {}", map.len(), carriers[n].size))
                    );
                }
                if let Some(bad) = map.iter().find(|&&y| y >= carriers[n - 1].size) {
                    return Err(loc.range(
                        &path,
                        &format!("value {bad} outside carrier {} of size {}", n - 1, carriers[n - 1].size),
                    ));
                }
                table.insert(w, map);
            }
            for w in hom_enumerate(nu, n - 1, n) {
                if !table.contains_key(&w) {
                    return Err(FormatError::MissingFace {
                        line: loc.line(&["faces", &dim_key]),
                        dim: n,
                        word: w.to_string(),
                    });
                }
            }
            faces.push(table);
        }
        TruncatedPresheaf::new(nu, carriers, faces).map_err(|e| loc.invalid(&["faces"], &e.to_string()))
    }
}

/// Finds approximate source lines for JSON field paths.
pub(crate) struct Locator<'a> {
    pub(crate) text: &'a str,
}

impl Locator<'_> {
    /// Line of the last key of `path`, searching each key after the previous one.
    pub(crate) fn line(&self, path: &[&str]) -> usize {
        let mut offset = 0;
        for key in path {
            let needle = format!("\"{key}\"");
            match self.text[offset..].find(&needle) {
                Some(i) => offset += i,
                None => break,
            }
        }
        self.text[..offset].matches('\n').count() + 1
    }

    fn field(path: &[&str]) -> String {
        path.join(".")
    }

    pub(crate) fn invalid(&self, path: &[&str], msg: &str) -> FormatError {
        FormatError::Invalid { line: self.line(path), field: Self::field(path), message: msg.into() }
    }

    pub(crate) fn arity(&self, path: &[&str], msg: &str) -> FormatError {
        FormatError::Arity { line: self.line(path), field: Self::field(path), message: msg.into() }
    }

    pub(crate) fn range(&self, path: &[&str], msg: &str) -> FormatError {
        FormatError::Range { line: self.line(path), field: Self::field(path), message: msg.into() }
    }
}

/// One failing instance of `X(a∘b) = X(b)∘X(a)` on a codimension-two word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawViolation {
    pub dim: usize,
    pub word: String,
    pub first: (String, String),
    pub second: (String, String),
    pub element: usize,
    pub first_value: usize,
    pub second_value: usize,
}

impl std::fmt::Display for LawViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "dim {} word {}: {}∘{} sends {} to {} but {}∘{} sends it to {}",
            self.dim,
            self.word,
            self.first.0,
            self.first.1,
            self.element,
            self.first_value,
            self.second.0,
            self.second.1,
            self.second_value
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub violations: Vec<LawViolation>,
}

impl LawReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `X(f)` as a map on carrier indices.
pub fn action(p: &TruncatedPresheaf, f: &Word) -> Result<Vec<usize>, PresheafError> {
    p.action(f)
}

pub fn check_functor_laws(p: &TruncatedPresheaf) -> LawReport {
    p.check_functor_laws()
}

pub fn parse_nuset(text: &str) -> Result<TruncatedPresheaf, FormatError> {
    TruncatedPresheaf::from_json_str(text)
}

pub fn emit_nuset(p: &TruncatedPresheaf) -> String {
    p.to_json_string()
}
