//! Standard shapes: the representable presheaves `Hom(-, n)`.
//!
//! For `ν = 1` the representing object `n` is the augmented simplex of
//! geometric dimension `n - 1`; dimension `0` of the presheaf holds its single
//! colour. For `ν = 2` the object `n` is the `n`-cube itself.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::error::WordError;
use crate::presheaf::{FinSet, TruncatedPresheaf};
use crate::word::{hom_enumerate, Arity, Word};

/// Label used for the empty word, which has no letters to print.
pub const EMPTY_WORD_LABEL: &str = "ε";

pub fn word_label(w: &Word) -> String {
    if w.is_empty() {
        EMPTY_WORD_LABEL.to_owned()
    } else {
        w.to_string()
    }
}

/// The Yoneda shape of `n`, truncated at `n`: cells at level `p` are the words
/// of `Hom(p, n)` and a face `w` acts by `g ↦ g ∘ w`.
pub fn standard_shape(nu: Arity, n: usize) -> TruncatedPresheaf {
    let cells: Vec<Vec<Word>> = (0..=n).map(|p| hom_enumerate(nu, p, n)).collect();
    let index: Vec<HashMap<&Word, usize>> =
        cells.iter().map(|ws| ws.iter().enumerate().map(|(i, w)| (w, i)).collect()).collect();
    let carriers = cells.iter().map(|ws| FinSet::labelled(ws.iter().map(word_label).collect())).collect();
    let mut faces = vec![BTreeMap::new()];
    for m in 1..=n {
        let mut table = BTreeMap::new();
        for w in hom_enumerate(nu, m - 1, m) {
            let map = cells[m].iter().map(|g| index[m - 1][&g.compose(&w).expect("g has m stars")]).collect();
            table.insert(w, map);
        }
        faces.push(table);
    }
    TruncatedPresheaf::new(nu, carriers, faces).expect("standard shapes are well formed")
}

/// The words obtained by replacing the leftmost star of `w` with each direction.
pub fn orientation_endpoints(w: &Word) -> Result<Vec<Word>, WordError> {
    if w.stars() == 0 {
        return Err(WordError::AllLetters);
    }
    Ok(w.arity().directions().map(|d| w.fill_star(0, d).expect("has a star")).collect())
}

/// Number of cells per geometric dimension. For `ν = 1` the colour level is
/// dropped, so `Δ+²` (object 3) reads `(3, 3, 1)`.
pub fn geometric_inventory(p: &TruncatedPresheaf) -> Vec<usize> {
    let sizes = p.sizes();
    if p.arity() == Arity::SIMPLICIAL {
        sizes[1..].to_vec()
    } else {
        sizes
    }
}

/// Cell labels grouped by geometric dimension, matching [`geometric_inventory`].
pub fn geometric_cells(p: &TruncatedPresheaf) -> Vec<Vec<String>> {
    let skip = usize::from(p.arity() == Arity::SIMPLICIAL);
    p.carriers()[skip..].iter().map(|c| (0..c.size).map(|i| c.label(i)).collect()).collect()
}

fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering: points as nodes, lines as edges oriented by the
/// leftmost-star rule, higher cells listed in a dashed annotation.
///
/// For `ν = 1` a line has a single oriented endpoint, so it runs from its
/// other face to that endpoint. For `ν ≥ 3` a line meets `ν` points through
/// an auxiliary junction.
pub fn to_dot(shape: &TruncatedPresheaf) -> String {
    let nu = shape.arity();
    let skip = usize::from(nu == Arity::SIMPLICIAL);
    let trunc = shape.truncation();
    let mut out = String::from("digraph shape {\n  rankdir=LR;\n  node [shape=circle];\n");
    if skip == 1 {
        let colours: Vec<String> = (0..shape.carrier(0).size).map(|i| shape.carrier(0).label(i)).collect();
        let _ = writeln!(out, "  // colours: {}", colours.join(" "));
    }
    if trunc >= skip {
        let points = shape.carrier(skip);
        for i in 0..points.size {
            let _ = writeln!(out, "  {};", dot_id(&points.label(i)));
        }
    }
    if trunc > skip {
        let lines = skip + 1;
        let faces: Vec<(Word, &[usize])> =
            hom_enumerate(nu, lines - 1, lines).into_iter().map(|w| (w.clone(), shape.face(&w))).collect();
        let edge_cells = shape.carrier(lines);
        let points = shape.carrier(skip);
        for e in 0..edge_cells.size {
            let name = edge_cells.label(e);
            // The face replacing the leftmost star with direction d is the
            // codimension-one word with d in position 0.
            let endpoint = |d: u8| {
                let (_, map) =
                    faces.iter().find(|(w, _)| w.letters()[0] == crate::word::Letter::Dir(d)).expect("face exists");
                points.label(map[e])
            };
            match nu.get() {
                1 => {
                    let other = faces
                        .iter()
                        .find(|(w, _)| w.letters()[0].is_star())
                        .map(|(_, map)| points.label(map[e]))
                        .expect("a 1-simplex has two faces");
                    let _ =
                        writeln!(out, "  {} -> {} [label={}];", dot_id(&other), dot_id(&endpoint(0)), dot_id(&name));
                }
                2 => {
                    let _ = writeln!(
                        out,
                        "  {} -> {} [label={}];",
                        dot_id(&endpoint(0)),
                        dot_id(&endpoint(1)),
                        dot_id(&name)
                    );
                }
                _ => {
                    let junction = dot_id(&format!("line {name}"));
                    let _ = writeln!(out, "  {junction} [shape=point, xlabel={}];", dot_id(&name));
                    for d in 0..nu.get() as u8 {
                        let _ =
                            writeln!(out, "  {junction} -> {} [label=\"{}\"];", dot_id(&endpoint(d)), nu.render_dir(d));
                    }
                }
            }
        }
    }
    let mut notes = Vec::new();
    for n in skip + 2..=trunc {
        let cells = shape.carrier(n);
        let names: Vec<String> = (0..cells.size).map(|i| cells.label(i)).collect();
        if !names.is_empty() {
            notes.push(format!("dim {}: {}", n - skip, names.join(" ")));
        }
    }
    if !notes.is_empty() {
        let _ = writeln!(out, "  label={};\n  labelloc=b;\n  style=dashed;", dot_id(&notes.join("\\n")));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(p: &TruncatedPresheaf, n: usize) -> Vec<String> {
        (0..p.carrier(n).size).map(|i| p.carrier(n).label(i)).collect()
    }

    #[test]
    fn square_counts_and_labels() {
        let sq = standard_shape(Arity::CUBICAL, 2);
        assert_eq!(sq.sizes(), [4, 4, 1]);
        assert_eq!(labels(&sq, 1), ["*L", "*R", "L*", "R*"]);
        assert_eq!(labels(&sq, 0), ["LL", "LR", "RL", "RR"]);
        assert!(sq.check_functor_laws().is_empty());
    }

    #[test]
    fn triangle_counts() {
        let tri = standard_shape(Arity::SIMPLICIAL, 3);
        assert_eq!(tri.sizes(), [1, 3, 3, 1]);
        assert_eq!(geometric_inventory(&tri), [3, 3, 1]);
    }

    #[test]
    fn point_shapes() {
        let p = standard_shape(Arity::CUBICAL, 0);
        assert_eq!(labels(&p, 0), [EMPTY_WORD_LABEL]);
        assert_eq!(geometric_inventory(&standard_shape(Arity::SIMPLICIAL, 1)), [1]);
    }

    #[test]
    fn orientation() {
        let nu = Arity::SIMPLICIAL;
        let ends = orientation_endpoints(&Word::parse(nu, "**0").unwrap()).unwrap();
        assert_eq!(ends.iter().map(Word::to_string).collect::<Vec<_>>(), ["0*0"]);
        let ends = orientation_endpoints(&Word::parse(Arity::CUBICAL, "*R").unwrap()).unwrap();
        assert_eq!(ends.iter().map(Word::to_string).collect::<Vec<_>>(), ["LR", "RR"]);
        assert_eq!(orientation_endpoints(&Word::parse(Arity::CUBICAL, "LR").unwrap()), Err(WordError::AllLetters));
    }

    #[test]
    fn dot_of_segment() {
        let dot = to_dot(&standard_shape(Arity::CUBICAL, 1));
        assert!(dot.contains("\"L\" -> \"R\" [label=\"*\"];"));
        assert_eq!(dot.matches(";\n").count() - 2, 3);
    }

    #[test]
    fn dot_of_simplicial_segment() {
        let dot = to_dot(&standard_shape(Arity::SIMPLICIAL, 2));
        assert!(dot.contains("\"*0\" -> \"0*\" [label=\"**\"];"));
    }

    #[test]
    fn dot_of_point() {
        let dot = to_dot(&standard_shape(Arity::CUBICAL, 0));
        assert!(dot.contains("\"ε\";"));
        assert!(!dot.contains("->"));
    }
}
