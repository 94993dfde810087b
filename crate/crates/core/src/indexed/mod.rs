//! Indexed ν-sets: frames, layers and paintings, their restrictions, and the
//! coherence conditions between restrictions.

mod coherence;
mod restrict;
mod set;
mod values;

pub use coherence::{
    check_all_coherences, check_coh_frame, check_coh_frame_with, check_coh_painting, check_coh_painting_on,
    check_coh_painting_with, legal_coh_indices, validate_indexed, CohReport, CohViolation, ValidationIssue,
    ValidationReport, COHERENCE, MISSING_FIBRE, ORPHAN_KEY,
};
#[cfg(test)]
pub(crate) use restrict::restr_frame_raw;
pub(crate) use restrict::restr_painting_raw;
pub use restrict::{restr_frame, restr_layer, restr_painting};
pub use set::{emit_indexed, enumerate_frames, enumerate_paintings, parse_indexed, Enumerator, IndexedNuSet};
pub use values::{
    parse_frame, parse_layer, parse_painting, serialize_frame, serialize_layer, serialize_painting, Frame, Layer,
    Painting,
};

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::error::IndexedError;
    use crate::presheaf::FinSet;
    use crate::word::Arity;

    /// One point, `k` loops on it, and a fibre of size `s` over every square
    /// frame.
    fn loops(k: usize, s: usize) -> IndexedNuSet {
        let mut set = IndexedNuSet::point(Arity::CUBICAL, 1);
        let edges = set.enumerate_frames(1, 1).unwrap();
        set.push_family(edges.into_iter().map(|d| (d, FinSet::new(k))).collect());
        let squares = set.enumerate_frames(2, 2).unwrap();
        set.push_family(squares.into_iter().map(|d| (d, FinSet::new(s))).collect());
        set
    }

    #[test]
    fn frames_at_zero() {
        let set = IndexedNuSet::point(Arity::CUBICAL, 3);
        assert_eq!(set.enumerate_frames(0, 0).unwrap(), [Frame::unit()]);
    }

    #[test]
    fn edge_frames_are_point_pairs() {
        let set = IndexedNuSet::point(Arity::CUBICAL, 2);
        let frames = set.enumerate_frames(1, 1).unwrap();
        let keys: Vec<String> = frames.iter().map(Frame::key).collect();
        assert_eq!(keys, ["([0 0])", "([0 1])", "([1 0])", "([1 1])"]);
    }

    #[test]
    fn square_frames_count_k_to_the_fourth() {
        for k in 0..=3 {
            let set = loops(k, 0);
            assert_eq!(set.enumerate_frames(2, 2).unwrap().len(), k.pow(4));
        }
    }

    #[test]
    fn paintings_of_an_edge() {
        let set = loops(3, 0);
        assert_eq!(set.enumerate_paintings(1, 0, &Frame::unit()).unwrap().len(), 3);
        let d = parse_frame("([0 0])").unwrap();
        assert_eq!(set.enumerate_paintings(1, 1, &d).unwrap().len(), 3);
    }

    #[test]
    fn missing_fibre_is_unknown_frame() {
        let set =
            IndexedNuSet::new(Arity::CUBICAL, vec![BTreeMap::from([(Frame::unit(), FinSet::new(1))]), BTreeMap::new()]);
        let d = parse_frame("([0 0])").unwrap();
        assert!(matches!(set.enumerate_paintings(1, 1, &d), Err(IndexedError::UnknownFrame { n: 1, .. })));
    }

    #[test]
    fn restriction_extracts_left_endpoints() {
        let nu = Arity::CUBICAL;
        let d = parse_frame("([([0 1] 5) ([2 3] 6)])").unwrap();
        assert_eq!(restr_frame(nu, 0, 1, 2, 1, &d).unwrap().key(), "([0 2])");
        assert_eq!(restr_frame(nu, 1, 1, 2, 1, &d).unwrap().key(), "([1 3])");
        assert_eq!(restr_frame(nu, 0, 0, 2, 0, &Frame::unit()).unwrap(), Frame::unit());
        assert!(matches!(
            restr_frame(nu, 0, 2, 2, 1, &d),
            Err(IndexedError::SideConditionViolated { op: "restr_frame", .. })
        ));
    }

    #[test]
    fn painting_projection() {
        let nu = Arity::CUBICAL;
        let c = parse_painting("([([0 1] 5) ([2 3] 6)] [7 8] 9)").unwrap();
        let d = Frame::unit();
        assert_eq!(restr_painting(nu, 1, 0, 2, 0, &d, &c).unwrap().to_string(), "([2 3] 6)");
        assert_eq!(restr_painting(nu, 0, 1, 2, 0, &d, &c).unwrap().to_string(), "([0 2] 7)");
        let top = parse_painting("4").unwrap();
        let full = parse_frame("([0 1])").unwrap();
        assert!(restr_painting(nu, 0, 0, 1, 1, &full, &top).is_err());
    }

    #[test]
    fn restr_layer_checks_components() {
        let set = loops(2, 1);
        let nu = Arity::CUBICAL;
        let square = set.enumerate_frames(2, 2).unwrap().remove(0);
        let d = square.prefix(1);
        let l = square.layers[1].clone();
        assert!(set.restr_layer(0, 0, 2, 1, &d, &l).unwrap_err().to_string().contains("side"));
        // A layer of (3, 0) over the unit: two squares.
        let cube_layer = Layer {
            components: vec![
                set.enumerate_paintings(2, 0, &Frame::unit()).unwrap().remove(0),
                set.enumerate_paintings(2, 0, &Frame::unit()).unwrap().remove(1),
            ],
        };
        let r = set.restr_layer(0, 0, 3, 0, &Frame::unit(), &cube_layer).unwrap();
        assert_eq!(r.components.len(), nu.get());
        let mut bad = cube_layer.clone();
        bad.components[1].cell = 7;
        assert!(matches!(
            set.restr_layer(0, 0, 3, 0, &Frame::unit(), &bad),
            Err(IndexedError::CoherenceMismatch { omega: 1, .. })
        ));
    }

    #[test]
    fn coherence_on_loops() {
        let set = loops(1, 1);
        for n in 2..=3 {
            for (eps, omega, q, r, p) in legal_coh_indices(2, n) {
                assert!(check_coh_frame(&set, eps, omega, q, r, n, p).unwrap().is_empty());
            }
        }
        for (eps, omega, q, r, p) in legal_coh_indices(2, 2) {
            assert!(check_coh_painting(&set, eps, omega, q, r, 2, p).unwrap().is_empty());
        }
        assert!(matches!(check_coh_frame(&set, 0, 0, 0, 1, 3, 0), Err(IndexedError::SideConditionViolated { .. })));
    }

    #[test]
    fn validation_reports_missing_and_orphans() {
        let mut set = loops(1, 1);
        assert!(validate_indexed(&set).is_valid());
        let key = set.family(2).keys().next().unwrap().clone();
        let mut families = set.families().to_vec();
        families[2].remove(&key);
        let broken = IndexedNuSet::new(Arity::CUBICAL, families);
        let report = validate_indexed(&broken);
        assert_eq!(report.violations[0].kind, MISSING_FIBRE);

        let mut bogus = key.clone();
        bogus.layers[1].components[0].cell = 9;
        let mut families = set.families().to_vec();
        families[2].insert(bogus, FinSet::new(1));
        let report = validate_indexed(&IndexedNuSet::new(Arity::CUBICAL, families));
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].kind, ORPHAN_KEY);
        set.fibre_mut(2, &key).unwrap().size = 0;
        assert!(validate_indexed(&set).is_valid());
    }

    #[test]
    fn indexed_json_round_trip() {
        let set = loops(2, 1);
        let text = emit_indexed(&set);
        assert_eq!(parse_indexed(&text).unwrap(), set);
        assert!(text.contains("\"()\": 1"));
    }
}
