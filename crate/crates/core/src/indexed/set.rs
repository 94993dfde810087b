//! Truncated indexed ν-sets: one family of fibres per dimension, keyed by
//! full frames, plus enumeration of frames and paintings over them.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use serde_json::{json, Map, Value};

use crate::error::{FormatError, IndexedError};
use crate::indexed::restrict::restr_frame_raw;
use crate::indexed::values::{parse_frame, Frame, Layer, Painting};
use crate::presheaf::{FinSet, Locator};
use crate::word::Arity;

/// `families[n]` maps full frames of dimension `n` to their fibres.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexedNuSet {
    nu: Arity,
    families: Vec<BTreeMap<Frame, FinSet>>,
}

impl IndexedNuSet {
    /// Builds a set without checking totality; see
    /// [`crate::indexed::validate_indexed`].
    pub fn new(nu: Arity, families: Vec<BTreeMap<Frame, FinSet>>) -> Self {
        assert!(!families.is_empty(), "an indexed set has at least dimension 0");
        IndexedNuSet { nu, families }
    }

    /// The set with one point and nothing above it.
    pub fn point(nu: Arity, size: usize) -> Self {
        IndexedNuSet::new(nu, vec![BTreeMap::from([(Frame::unit(), FinSet::new(size))])])
    }

    pub fn arity(&self) -> Arity {
        self.nu
    }

    pub fn truncation(&self) -> usize {
        self.families.len() - 1
    }

    pub fn family(&self, n: usize) -> &BTreeMap<Frame, FinSet> {
        &self.families[n]
    }

    pub fn families(&self) -> &[BTreeMap<Frame, FinSet>] {
        &self.families
    }

    pub fn fibre(&self, n: usize, d: &Frame) -> Option<&FinSet> {
        self.families.get(n)?.get(d)
    }

    pub fn fibre_mut(&mut self, n: usize, d: &Frame) -> Option<&mut FinSet> {
        self.families.get_mut(n)?.get_mut(d)
    }

    /// Appends the family of dimension `truncation() + 1`.
    pub fn push_family(&mut self, family: BTreeMap<Frame, FinSet>) {
        self.families.push(family);
    }

    /// The prefix of dimensions `0 ..= n`.
    pub fn truncate(&self, n: usize) -> IndexedNuSet {
        IndexedNuSet { nu: self.nu, families: self.families[..=n].to_vec() }
    }

    /// Total number of cells per dimension.
    pub fn sizes(&self) -> Vec<usize> {
        self.families.iter().map(|f| f.values().map(|s| s.size).sum()).collect()
    }

    pub fn enumerate_frames(&self, n: usize, p: usize) -> Result<Vec<Frame>, IndexedError> {
        Enumerator::new(self).frames(n, p).map(|v| v.to_vec())
    }

    pub fn enumerate_paintings(&self, n: usize, p: usize, d: &Frame) -> Result<Vec<Painting>, IndexedError> {
        d.check_shape(self.nu.get(), n, p)?;
        Enumerator::new(self).paintings(n, p, d).map(|v| v.to_vec())
    }

    /// Checks that `c` is a painting of `(n, p)` over `d`: every layer sits over
    /// the faces of the frame built so far and the cell lies in its fibre.
    /// Shapes must already be correct.
    pub(crate) fn type_painting(&self, n: usize, p: usize, d: &Frame, c: &Painting) -> Result<(), String> {
        if p == n {
            let fibre = self.fibre(n, d).ok_or_else(|| format!("no fibre over {d} at dimension {n}"))?;
            return if c.cell < fibre.size {
                Ok(())
            } else {
                Err(format!("cell {} outside fibre of size {} over {d}", c.cell, fibre.size))
            };
        }
        let l = &c.layers[0];
        self.type_layer(n, p, d, l)?;
        self.type_painting(n, p + 1, &d.extend(l.clone()), &c.tail())
    }

    pub(crate) fn type_layer(&self, n: usize, p: usize, d: &Frame, l: &Layer) -> Result<(), String> {
        for (omega, c) in l.components.iter().enumerate() {
            self.type_painting(n - 1, p, &restr_frame_raw(omega, p, d), c)?;
        }
        Ok(())
    }

    pub(crate) fn type_frame(&self, n: usize, d: &Frame) -> Result<(), String> {
        for (k, l) in d.layers.iter().enumerate() {
            self.type_layer(n, k, &d.prefix(k), l)?;
        }
        Ok(())
    }

    /// Whether `c` is a painting of `(n, p)` over `d` in this set.
    pub fn is_painting(&self, n: usize, p: usize, d: &Frame, c: &Painting) -> bool {
        d.check_shape(self.nu.get(), n, p).is_ok()
            && c.check_shape(self.nu.get(), n, p).is_ok()
            && n <= self.truncation()
            && self.type_painting(n, p, d, c).is_ok()
    }

    /// Whether `d` is a frame of `(n, p)` over this set.
    pub fn is_frame(&self, n: usize, p: usize, d: &Frame) -> bool {
        d.check_shape(self.nu.get(), n, p).is_ok() && n <= self.truncation() + 1 && self.type_frame(n, d).is_ok()
    }

    /// Canonical JSON: sorted keys, two-space indentation, final newline.
    pub fn to_json_string(&self) -> String {
        let mut families = Map::new();
        for (n, family) in self.families.iter().enumerate() {
            let entries: Map<String, Value> = family.iter().map(|(d, s)| (d.key(), s.to_json())).collect();
            families.insert(n.to_string(), Value::Object(entries));
        }
        let value = json!({
            "nu": self.nu.get(),
            "trunc": self.truncation(),
            "families": families,
        });
        let mut out = serde_json::to_string_pretty(&value).expect("json values serialize");
        out.push('\n');
        out
    }

    /// Parses the JSON format. Keys must be well-formed frames of the right
    /// shape; totality over enumerated frames is left to validation.
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
        let fams = obj
            .get("families")
            .and_then(Value::as_object)
            .ok_or_else(|| loc.invalid(&["families"], "missing `families` object"))?;
        for key in fams.keys() {
            let ok = key.parse::<usize>().map(|n| n <= trunc).unwrap_or(false);
            if !ok {
                return Err(loc.range(&["families", key], "dimension key must be in 0..=trunc"));
            }
        }
        let mut families = Vec::with_capacity(trunc + 1);
        for n in 0..=trunc {
            let dim_key = n.to_string();
            let mut family = BTreeMap::new();
            if let Some(entries) = fams.get(&dim_key) {
                let entries =
                    entries.as_object().ok_or_else(|| loc.invalid(&["families", &dim_key], "must be an object"))?;
                for (key, fibre) in entries {
                    let path = ["families", dim_key.as_str(), key.as_str()];
                    let d = parse_frame(key).map_err(|e| loc.invalid(&path, &e.to_string()))?;
                    d.check_shape(nu.get(), n, n).map_err(|e| loc.arity(&path, &e.to_string()))?;
                    let fibre = match FinSet::from_json(fibre) {
                        Some(Ok(s)) => s,
                        Some(Err(msg)) => return Err(loc.invalid(&path, &msg)),
                        None => return Err(loc.invalid(&path, "fibre must be a size or a label array")),
                    };
                    family.insert(d, fibre);
                }
            }
            families.push(family);
        }
        Ok(IndexedNuSet { nu, families })
    }
}

pub fn parse_indexed(text: &str) -> Result<IndexedNuSet, FormatError> {
    IndexedNuSet::from_json_str(text)
}

pub fn emit_indexed(s: &IndexedNuSet) -> String {
    s.to_json_string()
}

pub fn enumerate_frames(s: &IndexedNuSet, n: usize, p: usize) -> Result<Vec<Frame>, IndexedError> {
    s.enumerate_frames(n, p)
}

pub fn enumerate_paintings(s: &IndexedNuSet, n: usize, p: usize, d: &Frame) -> Result<Vec<Painting>, IndexedError> {
    s.enumerate_paintings(n, p, d)
}

fn cartesian<T: Clone>(factors: &[Rc<[T]>]) -> Vec<Vec<T>> {
    let mut acc: Vec<Vec<T>> = vec![Vec::with_capacity(factors.len())];
    for f in factors {
        acc = acc
            .iter()
            .flat_map(|prefix| {
                f.iter().map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect();
    }
    acc
}

type PaintingKey = (usize, usize, Frame);

/// Memoized enumeration of frames and paintings over one set.
///
/// Frames of dimension `n` use the families below `n`, so they exist up to
/// `truncation + 1`; paintings of dimension `n` need the family at `n`.
type FrameCache = HashMap<(usize, usize), Rc<[Frame]>>;

pub struct Enumerator<'a> {
    set: &'a IndexedNuSet,
    frames: RefCell<FrameCache>,
    paintings: RefCell<HashMap<PaintingKey, Rc<[Painting]>>>,
}

impl<'a> Enumerator<'a> {
    pub fn new(set: &'a IndexedNuSet) -> Self {
        Enumerator { set, frames: RefCell::default(), paintings: RefCell::default() }
    }

    pub fn set(&self) -> &'a IndexedNuSet {
        self.set
    }

    /// All frames of `(n, p)`, built layer by layer.
    pub fn frames(&self, n: usize, p: usize) -> Result<Rc<[Frame]>, IndexedError> {
        let max = self.set.truncation() + 1;
        if n > max || p > n {
            return Err(IndexedError::DimensionOutOfRange { n, max });
        }
        if let Some(v) = self.frames.borrow().get(&(n, p)) {
            return Ok(v.clone());
        }
        let result: Rc<[Frame]> = if p == 0 {
            Rc::from(vec![Frame::unit()])
        } else {
            let mut out = Vec::new();
            for d in self.frames(n, p - 1)?.iter() {
                for l in self.layers(n, p - 1, d)? {
                    out.push(d.extend(l));
                }
            }
            Rc::from(out)
        };
        self.frames.borrow_mut().insert((n, p), result.clone());
        Ok(result)
    }

    /// All layers of `(n, p)` over `d`: one painting per direction, each over
    /// the corresponding face of `d`.
    pub fn layers(&self, n: usize, p: usize, d: &Frame) -> Result<Vec<Layer>, IndexedError> {
        let factors = (0..self.set.nu.get())
            .map(|omega| self.paintings(n - 1, p, &restr_frame_raw(omega, p, d)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(cartesian(&factors).into_iter().map(|components| Layer { components }).collect())
    }

    /// All paintings of `(n, p)` over `d`.
    pub fn paintings(&self, n: usize, p: usize, d: &Frame) -> Result<Rc<[Painting]>, IndexedError> {
        if n > self.set.truncation() {
            return Err(IndexedError::DimensionOutOfRange { n, max: self.set.truncation() });
        }
        let key = (n, p, d.clone());
        if let Some(v) = self.paintings.borrow().get(&key) {
            return Ok(v.clone());
        }
        let result: Rc<[Painting]> = if p == n {
            let fibre = self.set.fibre(n, d).ok_or_else(|| IndexedError::UnknownFrame { n, key: d.key() })?;
            (0..fibre.size).map(Painting::cell).collect()
        } else {
            let mut out = Vec::new();
            for l in self.layers(n, p, d)? {
                let next = d.extend(l.clone());
                for c in self.paintings(n, p + 1, &next)?.iter() {
                    let mut layers = Vec::with_capacity(c.layers.len() + 1);
                    layers.push(l.clone());
                    layers.extend(c.layers.iter().cloned());
                    out.push(Painting { layers, cell: c.cell });
                }
            }
            Rc::from(out)
        };
        self.paintings.borrow_mut().insert(key, result.clone());
        Ok(result)
    }
}
