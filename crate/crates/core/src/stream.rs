//! Indexed ν-sets extended level by level past a truncation.
//!
//! A [`NuSetStream`] holds a valid prefix and a head rule producing the next
//! family from the prefix built so far. Levels are generated on demand, once,
//! and shared by every handle on the stream.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use crate::error::IndexedError;
use crate::indexed::{validate_indexed, Frame, IndexedNuSet};
use crate::presheaf::FinSet;

/// Produces the family of dimension `n` over a prefix of truncation `n - 1`.
pub type HeadRule = dyn Fn(&IndexedNuSet, usize) -> Result<BTreeMap<Frame, FinSet>, IndexedError> + Send + Sync;

struct Shared {
    levels: Mutex<IndexedNuSet>,
    rule: Box<HeadRule>,
    generated: AtomicUsize,
}

/// A stream positioned at dimension `start`: its head is the family of
/// dimension `start`, its tail the stream at `start + 1`.
#[derive(Clone)]
pub struct NuSetStream {
    shared: Arc<Shared>,
    start: usize,
}

impl std::fmt::Debug for NuSetStream {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NuSetStream").field("start", &self.start).field("generated", &self.generated()).finish()
    }
}

/// One singleton fibre over every full frame of dimension `n`.
pub fn singleton_rule(prefix: &IndexedNuSet, n: usize) -> Result<BTreeMap<Frame, FinSet>, IndexedError> {
    Ok(prefix.enumerate_frames(n, n)?.into_iter().map(|d| (d, FinSet::new(1))).collect())
}

fn ensure_valid(d: &IndexedNuSet) -> Result<(), IndexedError> {
    let report = validate_indexed(d);
    match report.violations.first() {
        None => Ok(()),
        Some(first) => {
            Err(IndexedError::ValidationFailure(format!("{} violation(s), first: {first}", report.violations.len())))
        }
    }
}

impl NuSetStream {
    /// A stream continuing `prefix` with `rule`. The prefix must validate.
    pub fn new(prefix: IndexedNuSet, rule: Box<HeadRule>) -> Result<Self, IndexedError> {
        ensure_valid(&prefix)?;
        let start = prefix.truncation() + 1;
        Ok(NuSetStream {
            shared: Arc::new(Shared { levels: Mutex::new(prefix), rule, generated: AtomicUsize::new(0) }),
            start,
        })
    }

    /// Dimension of the head.
    pub fn dimension(&self) -> usize {
        self.start
    }

    /// How many levels the rule has produced so far, over all handles.
    pub fn generated(&self) -> usize {
        self.shared.generated.load(Ordering::SeqCst)
    }

    /// The prefix up to dimension `n`, generating missing levels.
    pub fn take(&self, n: usize) -> Result<IndexedNuSet, IndexedError> {
        let mut levels = self.shared.levels.lock().unwrap_or_else(|e| e.into_inner());
        while levels.truncation() < n {
            let dim = levels.truncation() + 1;
            let family = (self.shared.rule)(&levels, dim)?;
            check_total(&levels, dim, &family)?;
            levels.push_family(family);
            self.shared.generated.fetch_add(1, Ordering::SeqCst);
        }
        Ok(levels.truncate(n))
    }

    /// The head family.
    pub fn this(&self) -> Result<BTreeMap<Frame, FinSet>, IndexedError> {
        Ok(self.take(self.start)?.family(self.start).clone())
    }

    /// The tail, sharing the generated levels.
    pub fn next(&self) -> NuSetStream {
        NuSetStream { shared: Arc::clone(&self.shared), start: self.start + 1 }
    }
}

/// A produced family must have exactly the enumerated frames as keys.
fn check_total(prefix: &IndexedNuSet, n: usize, family: &BTreeMap<Frame, FinSet>) -> Result<(), IndexedError> {
    let frames = prefix.enumerate_frames(n, n)?;
    if let Some(d) = frames.iter().find(|d| !family.contains_key(*d)) {
        return Err(IndexedError::ValidationFailure(format!("head rule left frame {d} of dimension {n} empty")));
    }
    let frames: BTreeSet<&Frame> = frames.iter().collect();
    if let Some(d) = family.keys().find(|d| !frames.contains(d)) {
        return Err(IndexedError::ValidationFailure(format!(
            "head rule produced a fibre over non-frame {d} at dimension {n}"
        )));
    }
    Ok(())
}

/// The canonical total extension of a valid prefix: singletons everywhere.
pub fn extend_singleton(d: IndexedNuSet) -> Result<NuSetStream, IndexedError> {
    NuSetStream::new(d, Box::new(singleton_rule))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivalence::to_indexed;
    use crate::shapes::standard_shape;
    use crate::word::Arity;

    fn edge() -> IndexedNuSet {
        to_indexed(&standard_shape(Arity::CUBICAL, 1)).unwrap()
    }

    #[test]
    fn singleton_levels() {
        let s = extend_singleton(edge()).unwrap();
        let t = s.take(3).unwrap();
        assert_eq!(t.truncation(), 3);
        for n in 2..=3 {
            assert!(t.family(n).values().all(|f| f.size == 1));
            assert_eq!(t.family(n).len(), t.enumerate_frames(n, n).unwrap().len());
        }
        assert!(validate_indexed(&t).is_valid());
    }

    #[test]
    fn take_below_prefix() {
        let s = extend_singleton(edge()).unwrap();
        assert_eq!(s.take(0).unwrap(), edge().truncate(0));
        assert_eq!(s.generated(), 0);
    }

    #[test]
    fn levels_generated_once() {
        let s = extend_singleton(edge()).unwrap();
        let a = s.take(3).unwrap();
        let b = s.next().next().take(3).unwrap();
        assert_eq!(a.to_json_string(), b.to_json_string());
        assert_eq!(s.generated(), 2);
    }

    #[test]
    fn this_and_next() {
        let s = extend_singleton(edge()).unwrap();
        assert_eq!(s.dimension(), 2);
        let t = s.take(4).unwrap();
        assert_eq!(&s.this().unwrap(), t.family(2));
        assert_eq!(&s.next().this().unwrap(), t.family(3));
    }

    #[test]
    fn invalid_prefix_rejected() {
        let mut families = edge().families().to_vec();
        families[1].clear();
        let broken = IndexedNuSet::new(Arity::CUBICAL, families);
        assert!(matches!(extend_singleton(broken), Err(IndexedError::ValidationFailure(_))));
    }

    #[test]
    fn partial_rule_rejected() {
        // The edge has no squares, so an empty family is total but a fibre
        // over the unit frame is not a fibre over a square frame.
        let s =
            NuSetStream::new(edge(), Box::new(|_, _| Ok(BTreeMap::from([(Frame::unit(), FinSet::new(1))])))).unwrap();
        assert!(matches!(s.take(2), Err(IndexedError::ValidationFailure(_))));
        let empty = NuSetStream::new(edge(), Box::new(|_, _| Ok(BTreeMap::new()))).unwrap();
        assert_eq!(empty.take(2).unwrap().sizes(), [2, 1, 0]);
    }

    #[test]
    fn concurrent_takes_agree() {
        let s = extend_singleton(edge()).unwrap();
        let handles: Vec<_> = (0..4)
            .map(|i| {
                let s = s.clone();
                std::thread::spawn(move || s.take(2 + i % 2).unwrap().truncate(2).to_json_string())
            })
            .collect();
        let outs: Vec<String> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert!(outs.windows(2).all(|w| w[0] == w[1]));
        assert!(s.generated() <= 2);
    }
}
