//! Conversion between fibred and indexed presentations, with round-trip
//! verification.
//!
//! A cell `x` of dimension `n` is sent to its boundary frame: layer `q`,
//! direction `ω` holds the face `y = X(⋆^q ω ⋆^(n-1-q))(x)` as a painting of
//! `(n-1, q)`, i.e. the layers `q ..` of the boundary of `y` followed by the
//! position of `y` in its own fibre. Fibres list cells in carrier order.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{IndexedError, PresheafError};
use crate::indexed::{validate_indexed, Enumerator, Frame, IndexedNuSet, Painting};
use crate::presheaf::{FinSet, TruncatedPresheaf};
use crate::word::{face_word, hom_enumerate, Arity, Letter, Word};

/// Boundary frames and fibre positions of every cell of a presheaf.
#[derive(Debug, Clone)]
pub struct Boundaries {
    frames: Vec<Vec<Frame>>,
    positions: Vec<Vec<usize>>,
}

impl Boundaries {
    pub fn new(p: &TruncatedPresheaf) -> Self {
        let nu = p.arity();
        let mut frames: Vec<Vec<Frame>> = Vec::with_capacity(p.truncation() + 1);
        let mut positions: Vec<Vec<usize>> = Vec::with_capacity(p.truncation() + 1);
        for m in 0..=p.truncation() {
            let faces: Vec<Vec<&[usize]>> = (0..m)
                .map(|q| nu.directions().map(|w| p.face(&face_word(nu, w, q, m).expect("q < m"))).collect())
                .collect();
            let mut level_frames = Vec::with_capacity(p.carrier(m).size);
            let mut level_positions = Vec::with_capacity(p.carrier(m).size);
            let mut seen: HashMap<Frame, usize> = HashMap::new();
            for x in 0..p.carrier(m).size {
                let layers = faces
                    .iter()
                    .enumerate()
                    .map(|(q, by_dir)| crate::indexed::Layer {
                        components: by_dir
                            .iter()
                            .map(|map| {
                                let y = map[x];
                                Painting { layers: frames[m - 1][y].layers[q..].to_vec(), cell: positions[m - 1][y] }
                            })
                            .collect(),
                    })
                    .collect();
                let d = Frame { layers };
                let slot = seen.entry(d.clone()).or_insert(0);
                level_positions.push(*slot);
                *slot += 1;
                level_frames.push(d);
            }
            frames.push(level_frames);
            positions.push(level_positions);
        }
        Boundaries { frames, positions }
    }

    pub fn frame(&self, n: usize, x: usize) -> &Frame {
        &self.frames[n][x]
    }

    /// Position of `x` among the cells with the same boundary.
    pub fn position(&self, n: usize, x: usize) -> usize {
        self.positions[n][x]
    }

    /// The cell `x` as a painting of `(n, 0)`: its boundary layers then itself.
    pub fn painting(&self, n: usize, x: usize) -> Painting {
        Painting { layers: self.frames[n][x].layers.clone(), cell: self.positions[n][x] }
    }
}

/// The boundary of a single cell. Prefer [`Boundaries`] for many cells.
pub fn boundary_frame(p: &TruncatedPresheaf, n: usize, x: usize) -> Result<Frame, IndexedError> {
    if n > p.truncation() {
        return Err(PresheafError::DimensionOutOfRange { n, trunc: p.truncation() }.into());
    }
    if x >= p.carrier(n).size {
        return Err(IndexedError::Malformed(format!("cell {x} outside carrier {n} of size {}", p.carrier(n).size)));
    }
    Ok(Boundaries::new(p).frame(n, x).clone())
}

/// Regroups the cells of each dimension into fibres over their boundaries.
/// Every enumerable full frame gets an entry, possibly empty.
pub fn to_indexed(p: &TruncatedPresheaf) -> Result<IndexedNuSet, IndexedError> {
    p.require_lawful()?;
    let bounds = Boundaries::new(p);
    let mut set = IndexedNuSet::new(p.arity(), vec![BTreeMap::new()]);
    for m in 0..=p.truncation() {
        let carrier = p.carrier(m);
        let mut members: HashMap<&Frame, Vec<usize>> = HashMap::new();
        for x in 0..carrier.size {
            members.entry(bounds.frame(m, x)).or_default().push(x);
        }
        let frames = {
            let prefix = if m == 0 { IndexedNuSet::point(p.arity(), 0) } else { set.clone() };
            Enumerator::new(&prefix).frames(m, m)?.to_vec()
        };
        let mut family = BTreeMap::new();
        for d in frames {
            let fibre = match members.remove(&d) {
                None => FinSet::new(0),
                Some(xs) => match &carrier.labels {
                    Some(labels) => {
                        FinSet { size: xs.len(), labels: Some(xs.iter().map(|&x| labels[x].clone()).collect()) }
                    }
                    None => FinSet::new(xs.len()),
                },
            };
            family.insert(d, fibre);
        }
        if let Some(d) = members.keys().next() {
            return Err(IndexedError::Malformed(format!(
                "boundary {d} of a cell of dimension {m} is not an enumerable frame"
            )));
        }
        if m == 0 {
            set = IndexedNuSet::new(p.arity(), vec![family]);
        } else {
            set.push_family(family);
        }
    }
    Ok(set)
}

/// Cells of an indexed set in fibred order: frames in enumeration order, then
/// fibre positions.
struct Cells {
    /// `ids[n][d]` is the global index of the first cell over `d`.
    offsets: Vec<HashMap<Frame, usize>>,
    listing: Vec<Vec<(Frame, usize)>>,
}

impl Cells {
    fn new(en: &Enumerator<'_>) -> Result<Self, IndexedError> {
        let set = en.set();
        let mut offsets = Vec::new();
        let mut listing = Vec::new();
        for n in 0..=set.truncation() {
            let mut off = HashMap::new();
            let mut list = Vec::new();
            for d in en.frames(n, n)?.iter() {
                let fibre = set.fibre(n, d).ok_or_else(|| IndexedError::UnknownFrame { n, key: d.key() })?;
                off.insert(d.clone(), list.len());
                list.extend((0..fibre.size).map(|i| (d.clone(), i)));
            }
            offsets.push(off);
            listing.push(list);
        }
        Ok(Cells { offsets, listing })
    }

    fn id(&self, n: usize, d: &Frame, i: usize) -> Option<usize> {
        self.offsets[n].get(d).map(|o| o + i)
    }
}

/// Sums the fibres of each dimension; the face `⋆^q ω ⋆^(n-1-q)` of a cell
/// reads its `(q, ω)` boundary slot.
pub fn to_fibred(s: &IndexedNuSet) -> Result<TruncatedPresheaf, IndexedError> {
    let report = validate_indexed(s);
    if let Some(v) = report.violations.first() {
        return Err(IndexedError::ValidationFailure(v.to_string()));
    }
    let nu = s.arity();
    let en = Enumerator::new(s);
    let cells = Cells::new(&en)?;
    let mut carriers = Vec::new();
    let mut faces = vec![BTreeMap::new()];
    for n in 0..=s.truncation() {
        let list = &cells.listing[n];
        let labels: Option<Vec<String>> =
            list.iter().map(|(d, i)| s.fibre(n, d).and_then(|f| f.labels.as_ref()).map(|l| l[*i].clone())).collect();
        let distinct = labels.as_ref().is_some_and(|l| {
            let mut sorted = l.clone();
            sorted.sort();
            sorted.dedup();
            sorted.len() == l.len()
        });
        carriers.push(FinSet { size: list.len(), labels: if distinct { labels } else { None } });
        if n == 0 {
            continue;
        }
        let mut table = BTreeMap::new();
        for q in 0..n {
            for w in nu.directions() {
                let omega = w.dir().expect("direction");
                let map = list
                    .iter()
                    .map(|(d, i)| {
                        let (frame, cell) = face_of(d, *i, omega, q);
                        cells
                            .id(n - 1, &frame, cell)
                            .ok_or_else(|| IndexedError::UnknownFrame { n: n - 1, key: frame.key() })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                table.insert(face_word(nu, w, q, n).expect("q < n"), map);
            }
        }
        faces.push(table);
    }
    Ok(TruncatedPresheaf::new(nu, carriers, faces)?)
}

/// The `(q, ω)` face of the cell `i` over the full frame `d`, as a full frame
/// one dimension down and a fibre position.
fn face_of(d: &Frame, i: usize, omega: usize, q: usize) -> (Frame, usize) {
    let whole = Painting { layers: d.layers.clone(), cell: i };
    let face = crate::indexed::restr_painting_raw(omega, q, 0, &whole);
    (Frame { layers: face.layers }, face.cell)
}

#[derive(Debug, Clone, Serialize)]
pub struct RoundTripReport {
    pub direction: &'static str,
    pub ok: bool,
    /// Fibred → indexed → fibred: for each dimension, where each cell went.
    pub bijections: Vec<Vec<usize>>,
    /// Indexed → fibred → indexed: for each dimension and frame key, where each
    /// fibre element went.
    pub fibre_bijections: Vec<BTreeMap<String, Vec<usize>>>,
    pub partition: bool,
    pub failure: Option<String>,
}

impl RoundTripReport {
    fn failed(direction: &'static str, msg: String) -> Self {
        RoundTripReport {
            direction,
            ok: false,
            bijections: Vec::new(),
            fibre_bijections: Vec::new(),
            partition: false,
            failure: Some(msg),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}: {}\n", self.direction, if self.ok { "ok" } else { "FAILED" });
        let _ = writeln!(out, "fibre partition: {}", if self.partition { "holds" } else { "fails" });
        for (n, b) in self.bijections.iter().enumerate() {
            let _ = writeln!(out, "dim {n}: {b:?}");
        }
        for (n, fam) in self.fibre_bijections.iter().enumerate() {
            for (key, b) in fam {
                let _ = writeln!(out, "dim {n} {key}: {b:?}");
            }
        }
        if let Some(f) = &self.failure {
            let _ = writeln!(out, "failure: {f}");
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn partition_holds(p: &TruncatedPresheaf, s: &IndexedNuSet) -> bool {
    p.sizes() == s.sizes()
}

/// Fibred → indexed → fibred, exhibiting the carrier bijection
/// `x ↦ (boundary(x), position(x))` and checking it commutes with every
/// codimension-one face.
pub fn round_trip_fibred(p: &TruncatedPresheaf) -> RoundTripReport {
    const DIR: &str = "fibred -> indexed -> fibred";
    let s = match to_indexed(p) {
        Ok(s) => s,
        Err(e) => return RoundTripReport::failed(DIR, e.to_string()),
    };
    let partition = partition_holds(p, &s);
    let back = match to_fibred(&s) {
        Ok(b) => b,
        Err(e) => return RoundTripReport::failed(DIR, e.to_string()),
    };
    let en = Enumerator::new(&s);
    let cells = match Cells::new(&en) {
        Ok(c) => c,
        Err(e) => return RoundTripReport::failed(DIR, e.to_string()),
    };
    let bounds = Boundaries::new(p);
    let mut bijections: Vec<Vec<usize>> = Vec::new();
    let mut failure = None;
    for n in 0..=p.truncation() {
        let phi: Vec<usize> = (0..p.carrier(n).size)
            .map(|x| cells.id(n, bounds.frame(n, x), bounds.position(n, x)).unwrap_or(usize::MAX))
            .collect();
        let mut hit = vec![false; back.carrier(n).size];
        for (x, &y) in phi.iter().enumerate() {
            if y >= hit.len() || std::mem::replace(&mut hit[y], true) {
                failure.get_or_insert(format!("dim {n}: cell {x} is not mapped injectively"));
            }
        }
        if hit.len() != phi.len() {
            failure.get_or_insert(format!("dim {n}: carrier sizes {} and {} differ", phi.len(), hit.len()));
        }
        if n > 0 && failure.is_none() {
            for w in hom_enumerate(p.arity(), n - 1, n) {
                let before = p.face(&w);
                let after = back.face(&w);
                let prev = &bijections[n - 1];
                if let Some(x) = (0..phi.len()).find(|&x| prev[before[x]] != after[phi[x]]) {
                    failure.get_or_insert(format!("dim {n}: face {w} does not commute at cell {x}"));
                }
            }
        }
        bijections.push(phi);
    }
    RoundTripReport {
        direction: DIR,
        ok: failure.is_none() && partition,
        bijections,
        fibre_bijections: Vec::new(),
        partition,
        failure,
    }
}

/// Indexed → fibred → indexed, exhibiting for each frame the bijection of
/// fibres and checking that every frame keeps its key.
pub fn round_trip_indexed(s: &IndexedNuSet) -> RoundTripReport {
    const DIR: &str = "indexed -> fibred -> indexed";
    let p = match to_fibred(s) {
        Ok(p) => p,
        Err(e) => return RoundTripReport::failed(DIR, e.to_string()),
    };
    let partition = partition_holds(&p, s);
    let back = match to_indexed(&p) {
        Ok(b) => b,
        Err(e) => return RoundTripReport::failed(DIR, e.to_string()),
    };
    let en = Enumerator::new(s);
    let cells = match Cells::new(&en) {
        Ok(c) => c,
        Err(e) => return RoundTripReport::failed(DIR, e.to_string()),
    };
    let bounds = Boundaries::new(&p);
    let mut fibre_bijections = Vec::new();
    let mut failure = None;
    for n in 0..=s.truncation() {
        if s.family(n).len() != back.family(n).len() {
            failure.get_or_insert(format!("dim {n}: frame counts differ"));
        }
        let mut fam = BTreeMap::new();
        for (d, fibre) in s.family(n) {
            let other = back.fibre(n, d).map_or(usize::MAX, |f| f.size);
            if other != fibre.size {
                failure.get_or_insert(format!("dim {n}: fibre over {d} changed size"));
                continue;
            }
            let mut seen = vec![false; fibre.size];
            let mut map = Vec::with_capacity(fibre.size);
            for i in 0..fibre.size {
                let x = cells.id(n, d, i).expect("frame enumerated");
                if bounds.frame(n, x) != d {
                    failure
                        .get_or_insert(format!("dim {n}: element {i} over {d} came back over {}", bounds.frame(n, x)));
                }
                let j = bounds.position(n, x);
                if j >= seen.len() || std::mem::replace(&mut seen[j], true) {
                    failure.get_or_insert(format!("dim {n}: fibre over {d} is not mapped injectively"));
                }
                map.push(j);
            }
            fam.insert(d.key(), map);
        }
        fibre_bijections.push(fam);
    }
    RoundTripReport {
        direction: DIR,
        ok: failure.is_none() && partition,
        bijections: Vec::new(),
        fibre_bijections,
        partition,
        failure,
    }
}

/// Either presentation.
pub enum NuSet<'a> {
    Fibred(&'a TruncatedPresheaf),
    Indexed(&'a IndexedNuSet),
}

pub fn round_trip_report(x: NuSet<'_>) -> RoundTripReport {
    match x {
        NuSet::Fibred(p) => round_trip_fibred(p),
        NuSet::Indexed(s) => round_trip_indexed(s),
    }
}

/// Fibre sizes for [`random_indexed`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomSpec {
    /// Size of the single dimension-0 fibre.
    pub points: RangeInclusive<usize>,
    /// Size of every other fibre.
    pub fibres: RangeInclusive<usize>,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec { points: 1..=2, fibres: 0..=2 }
    }
}

impl RandomSpec {
    /// One point, so that cubical sets stay small up to dimension 3.
    pub fn single_point() -> Self {
        RandomSpec { points: 1..=1, ..RandomSpec::default() }
    }
}

/// A random indexed set, valid by construction: dimension by dimension, each
/// enumerable full frame receives a fibre of size drawn uniformly from
/// `spec.fibres`.
pub fn random_indexed(nu: Arity, trunc: usize, spec: &RandomSpec, seed: u64) -> IndexedNuSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut set = IndexedNuSet::point(nu, rng.gen_range(spec.points.clone()));
    for n in 1..=trunc {
        let frames = set.enumerate_frames(n, n).expect("lower families are total");
        let family = frames.into_iter().map(|d| (d, FinSet::new(rng.gen_range(spec.fibres.clone())))).collect();
        set.push_family(family);
    }
    set
}

/// The random presheaf obtained by summing [`random_indexed`].
pub fn random_presheaf(nu: Arity, trunc: usize, spec: &RandomSpec, seed: u64) -> TruncatedPresheaf {
    to_fibred(&random_indexed(nu, trunc, spec, seed)).expect("random sets are valid by construction")
}

/// `restr_painting(ω, q)` of the cell `x` as a painting equals the painting of
/// its face `X(⋆^q ω ⋆^(n-1-q))(x)`. Returns the first failing `(n, x, ω, q)`.
pub fn check_boundary_compatibility(p: &TruncatedPresheaf) -> Option<(usize, usize, usize, usize)> {
    let bounds = Boundaries::new(p);
    let nu = p.arity();
    for n in 1..=p.truncation() {
        for q in 0..n {
            for omega in 0..nu.get() {
                let w: Word = face_word(nu, Letter::Dir(omega as u8), q, n).expect("q < n");
                let face = p.face(&w);
                for (x, &y) in face.iter().enumerate() {
                    let restricted = crate::indexed::restr_painting_raw(omega, q, 0, &bounds.painting(n, x));
                    if restricted != bounds.painting(n - 1, y) {
                        return Some((n, x, omega, q));
                    }
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::standard_shape;

    /// Labels of every cell reachable from the layers of `d`, by dimension.
    fn frame_cells(p: &TruncatedPresheaf, n: usize, d: &Frame) -> Vec<std::collections::BTreeSet<String>> {
        let bounds = Boundaries::new(p);
        let mut index = HashMap::new();
        for m in 0..=p.truncation() {
            for x in 0..p.carrier(m).size {
                index.insert((m, bounds.frame(m, x).clone(), bounds.position(m, x)), x);
            }
        }
        let mut out = vec![std::collections::BTreeSet::new(); n];
        let mut stack = vec![(n, d.clone())];
        while let Some((m, frame)) = stack.pop() {
            for (q, layer) in frame.layers.iter().enumerate() {
                for (omega, c) in layer.components.iter().enumerate() {
                    let mut full = crate::indexed::restr_frame_raw(omega, q, &frame.prefix(q));
                    full.layers.extend(c.layers.iter().cloned());
                    let x = index[&(m - 1, full.clone(), c.cell)];
                    out[m - 1].insert(p.carrier(m - 1).label(x));
                    stack.push((m - 1, full));
                }
            }
        }
        out
    }

    #[test]
    fn unit_boundary() {
        let p = standard_shape(Arity::CUBICAL, 2);
        assert_eq!(boundary_frame(&p, 0, 0).unwrap(), Frame::unit());
    }

    #[test]
    fn square_boundary_contents() {
        let p = standard_shape(Arity::CUBICAL, 2);
        let d = boundary_frame(&p, 2, 0).unwrap();
        let cells = frame_cells(&p, 2, &d);
        assert_eq!(cells[0].iter().cloned().collect::<Vec<_>>(), ["LL", "LR", "RL", "RR"]);
        assert_eq!(cells[1].iter().cloned().collect::<Vec<_>>(), ["*L", "*R", "L*", "R*"]);
    }

    #[test]
    fn triangle_boundary_contents() {
        let p = standard_shape(Arity::SIMPLICIAL, 3);
        let d = boundary_frame(&p, 3, 0).unwrap();
        let cells = frame_cells(&p, 3, &d);
        assert_eq!(cells[1].len(), 3);
        assert_eq!(cells[2].len(), 3);
    }

    #[test]
    fn square_fibres() {
        let p = standard_shape(Arity::CUBICAL, 2);
        let s = to_indexed(&p).unwrap();
        let sizes: Vec<usize> = s.family(2).values().map(|f| f.size).collect();
        assert_eq!(sizes.iter().sum::<usize>(), 1);
        assert_eq!(sizes.iter().filter(|&&k| k == 1).count(), 1);
        assert_eq!(s.sizes(), p.sizes());
        assert!(validate_indexed(&s).is_valid());
    }

    #[test]
    fn parallel_edges_share_a_frame() {
        let nu = Arity::CUBICAL;
        let l = Word::parse(nu, "L").unwrap();
        let r = Word::parse(nu, "R").unwrap();
        let p = TruncatedPresheaf::new(
            nu,
            vec![FinSet::new(2), FinSet::new(2)],
            vec![BTreeMap::new(), BTreeMap::from([(l, vec![0, 0]), (r, vec![1, 1])])],
        )
        .unwrap();
        let s = to_indexed(&p).unwrap();
        let d = crate::indexed::parse_frame("([0 1])").unwrap();
        assert_eq!(s.fibre(1, &d).unwrap().size, 2);
    }

    #[test]
    fn compatibility_on_standard_shapes() {
        for nu in 1..=3 {
            for n in 0..=3 {
                let p = standard_shape(Arity::new(nu).unwrap(), n);
                assert_eq!(check_boundary_compatibility(&p), None, "nu={nu} n={n}");
            }
        }
    }

    #[test]
    fn round_trips_on_shapes() {
        for nu in 1..=2 {
            for n in 0..=3 {
                let p = standard_shape(Arity::new(nu).unwrap(), n);
                let r = round_trip_fibred(&p);
                assert!(r.ok, "{}", r.to_text());
                let s = to_indexed(&p).unwrap();
                let r = round_trip_indexed(&s);
                assert!(r.ok, "{}", r.to_text());
            }
        }
    }

    #[test]
    fn random_round_trips() {
        for seed in 0..5 {
            let s = random_indexed(Arity::CUBICAL, 2, &RandomSpec::default(), seed);
            assert!(round_trip_indexed(&s).ok);
            let p = to_fibred(&s).unwrap();
            assert!(p.check_functor_laws().is_empty());
            assert!(round_trip_fibred(&p).ok);
        }
    }

    #[test]
    fn unlawful_presheaf_is_rejected() {
        let nu = Arity::CUBICAL;
        let mut p = standard_shape(nu, 2);
        p.set_face_entry(&Word::parse(nu, "L*").unwrap(), 0, 3);
        assert!(matches!(to_indexed(&p), Err(IndexedError::Presheaf(PresheafError::LawViolation { .. }))));
    }
}
