//! Reading an iterated translation as a telescope of cell hypotheses.

use std::collections::{BTreeMap, HashMap};

use crate::error::ParamError;
use crate::parametricity::print::print_term;
use crate::parametricity::syntax::{TermExpr, TypeExpr};
use crate::parametricity::translate::level_of;

/// One hypothesis `X_level(args)`, reached from a binder through projections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypothesis {
    pub binder: String,
    pub path: Vec<usize>,
    pub level: usize,
    pub args: Vec<TermExpr>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Telescope {
    pub hypotheses: Vec<Hypothesis>,
}

fn not_telescope(msg: impl Into<String>) -> ParamError {
    ParamError::NotATelescope(msg.into())
}

/// Splits `Π x1:D1. .. Π xk:Dk. U` where every `Di` is a nested product of
/// `X_p(..)` leaves.
pub fn flatten(t: &TypeExpr) -> Result<Telescope, ParamError> {
    let mut hypotheses = Vec::new();
    let mut cur = t;
    loop {
        match cur {
            TypeExpr::Univ => return Ok(Telescope { hypotheses }),
            TypeExpr::Pi(x, dom, cod) => {
                leaves(x, dom, &mut Vec::new(), &mut hypotheses)?;
                cur = cod;
            }
            other => return Err(not_telescope(format!("expected Pi or U, found {other:?}"))),
        }
    }
}

fn leaves(binder: &str, t: &TypeExpr, path: &mut Vec<usize>, out: &mut Vec<Hypothesis>) -> Result<(), ParamError> {
    match t {
        TypeExpr::Prod(items) => {
            for (i, item) in items.iter().enumerate() {
                path.push(i);
                leaves(binder, item, path, out)?;
                path.pop();
            }
            Ok(())
        }
        TypeExpr::FamApp(TermExpr::Var(x), args) => {
            let level = level_of(x).ok_or_else(|| not_telescope(format!("hypothesis over `{x}`")))?;
            out.push(Hypothesis { binder: binder.to_owned(), path: path.clone(), level, args: args.clone() });
            Ok(())
        }
        other => Err(not_telescope(format!("unexpected hypothesis {other:?}"))),
    }
}

/// Number of hypotheses over each `X_p`.
pub fn telescope_stats(t: &TypeExpr) -> Result<BTreeMap<usize, usize>, ParamError> {
    let mut stats = BTreeMap::new();
    for h in flatten(t)?.hypotheses {
        *stats.entry(h.level).or_insert(0) += 1;
    }
    Ok(stats)
}

/// `(var, [i, j])` for `var.i.j`.
fn as_path(t: &TermExpr) -> Option<(&str, Vec<usize>)> {
    match t {
        TermExpr::Var(x) => Some((x, Vec::new())),
        TermExpr::Proj(i, inner) => {
            let (x, mut path) = as_path(inner)?;
            path.push(*i);
            Some((x, path))
        }
        _ => None,
    }
}

fn letter_name(k: usize) -> String {
    let c = (b'a' + (k % 26) as u8) as char;
    if k < 26 {
        c.to_string()
    } else {
        format!("{c}{}", k / 26)
    }
}

impl Telescope {
    /// Indices of the hypotheses at or below a binder path, in order.
    fn under(&self, binder: &str, prefix: &[usize]) -> Vec<usize> {
        self.hypotheses
            .iter()
            .enumerate()
            .filter(|(_, h)| h.binder == binder && h.path.starts_with(prefix))
            .map(|(i, _)| i)
            .collect()
    }

    /// Hypotheses an argument refers to; tuples are read componentwise.
    fn expand(&self, t: &TermExpr) -> Option<Vec<usize>> {
        if let TermExpr::Tuple(items) = t {
            let mut out = Vec::new();
            for item in items {
                out.extend(self.expand(item)?);
            }
            return Some(out);
        }
        let (x, path) = as_path(t)?;
        let found = self.under(x, &path);
        (!found.is_empty()).then_some(found)
    }

    /// Compact display: level-0 cells become `a, b, ..` in order of first
    /// mention, intermediate hypotheses are named `h1, h2, ..`, and the top
    /// level is the final product.
    pub fn display(&self) -> String {
        let top = self.hypotheses.iter().map(|h| h.level).max();
        let mut names: HashMap<usize, String> = HashMap::new();
        let mut points = 0;
        for h in &self.hypotheses {
            for a in &h.args {
                for i in self.expand(a).unwrap_or_default() {
                    if self.hypotheses[i].level == 0 && !names.contains_key(&i) {
                        names.insert(i, letter_name(points));
                        points += 1;
                    }
                }
            }
        }
        for (i, h) in self.hypotheses.iter().enumerate() {
            if h.level == 0 && !names.contains_key(&i) {
                names.insert(i, letter_name(points));
                points += 1;
            }
        }
        let mut order: Vec<(usize, String)> = names.iter().map(|(i, n)| (*i, n.clone())).collect();
        order.sort_by_key(|(i, n)| (n.len(), n.clone(), *i));
        let mut hyp = 0;
        for (i, h) in self.hypotheses.iter().enumerate() {
            if h.level > 0 && Some(h.level) != top {
                hyp += 1;
                names.insert(i, format!("h{hyp}"));
            }
        }
        let render = |h: &Hypothesis| -> String {
            let mut parts = Vec::new();
            for a in &h.args {
                match self.expand(a) {
                    Some(ix) => parts.extend(ix.iter().map(|i| names[i].clone())),
                    None => parts.push(print_term(a)),
                }
            }
            format!("X_{}({})", h.level, parts.join(","))
        };

        let mut out = String::new();
        if !order.is_empty() {
            out.push_str("Π ");
            out.push_str(&order.iter().map(|(_, n)| n.as_str()).collect::<Vec<_>>().join(" "));
            out.push_str(". ");
        }
        let mid: Vec<String> = self
            .hypotheses
            .iter()
            .enumerate()
            .filter(|(_, h)| h.level > 0 && Some(h.level) != top)
            .map(|(i, h)| format!("({} : {})", names[&i], render(h)))
            .collect();
        if !mid.is_empty() {
            out.push_str("Π ");
            out.push_str(&mid.join(" "));
            out.push_str(". ");
        }
        let last: Vec<String> =
            self.hypotheses.iter().filter(|h| h.level > 0 && Some(h.level) == top).map(render).collect();
        if !last.is_empty() {
            out.push_str(&last.join(" × "));
            out.push_str(" → ");
        }
        out.push('U');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parametricity::translate::iterate_types;
    use crate::word::Arity;

    #[test]
    fn square_display() {
        let t = flatten(&iterate_types(Arity::CUBICAL, 2)).unwrap();
        assert_eq!(t.display(), "Π a b c d. X_1(a,b) × X_1(c,d) × X_1(a,c) × X_1(b,d) → U");
    }

    #[test]
    fn low_levels() {
        assert_eq!(flatten(&TypeExpr::Univ).unwrap().display(), "U");
        assert_eq!(flatten(&iterate_types(Arity::CUBICAL, 1)).unwrap().display(), "Π a b. U");
        assert_eq!(flatten(&iterate_types(Arity::SIMPLICIAL, 2)).unwrap().display(), "Π a. X_1(a) × X_1(a) → U");
    }

    #[test]
    fn stats() {
        let s = |nu, k| telescope_stats(&iterate_types(nu, k)).unwrap();
        assert_eq!(s(Arity::CUBICAL, 2), BTreeMap::from([(0, 4), (1, 4)]));
        assert_eq!(s(Arity::CUBICAL, 3), BTreeMap::from([(0, 8), (1, 12), (2, 6)]));
        // The augmentation, three points and three edges of a triangle.
        assert_eq!(s(Arity::SIMPLICIAL, 3), BTreeMap::from([(0, 1), (1, 3), (2, 3)]));
    }

    #[test]
    fn rejects_non_telescopes() {
        let t = TypeExpr::pi("x", TypeExpr::el("A"), TypeExpr::Univ);
        assert!(matches!(telescope_stats(&t), Err(ParamError::NotATelescope(_))));
        assert!(telescope_stats(&TypeExpr::el("X_0")).is_err());
    }
}
