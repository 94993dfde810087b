//! Abstract syntax for the type fragment and capture-avoiding substitution.

use std::collections::BTreeSet;

/// Types: the universe, dependent functions, products, and elements of a
/// type-valued term applied to arguments. `Family` and `Apply` are the
/// type-level abstraction and application produced by the translation; they
/// disappear under normalization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TypeExpr {
    Univ,
    Pi(String, Box<TypeExpr>, Box<TypeExpr>),
    Prod(Vec<TypeExpr>),
    FamApp(TermExpr, Vec<TermExpr>),
    Family(String, Box<TypeExpr>),
    Apply(Box<TypeExpr>, TermExpr),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TermExpr {
    Var(String),
    Lam(String, Box<TermExpr>),
    App(Box<TermExpr>, Box<TermExpr>),
    Tuple(Vec<TermExpr>),
    Proj(usize, Box<TermExpr>),
}

/// Binder name for non-dependent functions.
pub const ANON: &str = "_";

impl TypeExpr {
    pub fn pi(x: impl Into<String>, dom: TypeExpr, cod: TypeExpr) -> Self {
        TypeExpr::Pi(x.into(), Box::new(dom), Box::new(cod))
    }

    pub fn arrow(dom: TypeExpr, cod: TypeExpr) -> Self {
        TypeExpr::pi(ANON, dom, cod)
    }

    pub fn family(x: impl Into<String>, body: TypeExpr) -> Self {
        TypeExpr::Family(x.into(), Box::new(body))
    }

    pub fn apply(f: TypeExpr, t: TermExpr) -> Self {
        TypeExpr::Apply(Box::new(f), t)
    }

    /// The type named by a variable, `El(x)`.
    pub fn el(x: impl Into<String>) -> Self {
        TypeExpr::FamApp(TermExpr::var(x), Vec::new())
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            TypeExpr::Univ => {}
            TypeExpr::Pi(x, a, b) => {
                a.collect_free(bound, out);
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            TypeExpr::Prod(ts) => ts.iter().for_each(|t| t.collect_free(bound, out)),
            TypeExpr::FamApp(h, args) => {
                h.collect_free(bound, out);
                args.iter().for_each(|a| a.collect_free(bound, out));
            }
            TypeExpr::Family(x, b) => {
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            TypeExpr::Apply(f, t) => {
                f.collect_free(bound, out);
                t.collect_free(bound, out);
            }
        }
    }

    /// Every identifier, bound or free.
    pub fn names(&self, out: &mut BTreeSet<String>) {
        match self {
            TypeExpr::Univ => {}
            TypeExpr::Pi(x, a, b) => {
                out.insert(x.clone());
                a.names(out);
                b.names(out);
            }
            TypeExpr::Prod(ts) => ts.iter().for_each(|t| t.names(out)),
            TypeExpr::FamApp(h, args) => {
                h.names(out);
                args.iter().for_each(|a| a.names(out));
            }
            TypeExpr::Family(x, b) => {
                out.insert(x.clone());
                b.names(out);
            }
            TypeExpr::Apply(f, t) => {
                f.names(out);
                t.names(out);
            }
        }
    }

    /// `self[t/x]`, renaming binders that would capture free variables of `t`.
    pub fn subst(&self, x: &str, t: &TermExpr, fresh: &mut Fresh) -> TypeExpr {
        match self {
            TypeExpr::Univ => TypeExpr::Univ,
            TypeExpr::Pi(y, a, b) => {
                let a = a.subst(x, t, fresh);
                let (y, b) = subst_under_type(y, b, x, t, fresh);
                TypeExpr::Pi(y, Box::new(a), Box::new(b))
            }
            TypeExpr::Prod(ts) => TypeExpr::Prod(ts.iter().map(|a| a.subst(x, t, fresh)).collect()),
            TypeExpr::FamApp(h, args) => {
                TypeExpr::FamApp(h.subst(x, t, fresh), args.iter().map(|a| a.subst(x, t, fresh)).collect())
            }
            TypeExpr::Family(y, b) => {
                let (y, b) = subst_under_type(y, b, x, t, fresh);
                TypeExpr::Family(y, Box::new(b))
            }
            TypeExpr::Apply(f, u) => TypeExpr::Apply(Box::new(f.subst(x, t, fresh)), u.subst(x, t, fresh)),
        }
    }
}

fn subst_under_type(y: &str, body: &TypeExpr, x: &str, t: &TermExpr, fresh: &mut Fresh) -> (String, TypeExpr) {
    if y == x {
        return (y.to_owned(), body.clone());
    }
    if t.free_vars().contains(y) && body.free_vars().contains(x) {
        let z = fresh.next(y);
        let renamed = body.subst(y, &TermExpr::var(z.clone()), fresh);
        return (z, renamed.subst(x, t, fresh));
    }
    (y.to_owned(), body.subst(x, t, fresh))
}

impl TermExpr {
    pub fn var(x: impl Into<String>) -> Self {
        TermExpr::Var(x.into())
    }

    pub fn app(f: TermExpr, a: TermExpr) -> Self {
        TermExpr::App(Box::new(f), Box::new(a))
    }

    pub fn proj(i: usize, t: TermExpr) -> Self {
        TermExpr::Proj(i, Box::new(t))
    }

    pub fn lam(x: impl Into<String>, body: TermExpr) -> Self {
        TermExpr::Lam(x.into(), Box::new(body))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            TermExpr::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            TermExpr::Lam(x, b) => {
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            TermExpr::App(f, a) => {
                f.collect_free(bound, out);
                a.collect_free(bound, out);
            }
            TermExpr::Tuple(ts) => ts.iter().for_each(|t| t.collect_free(bound, out)),
            TermExpr::Proj(_, t) => t.collect_free(bound, out),
        }
    }

    pub fn names(&self, out: &mut BTreeSet<String>) {
        match self {
            TermExpr::Var(x) => {
                out.insert(x.clone());
            }
            TermExpr::Lam(x, b) => {
                out.insert(x.clone());
                b.names(out);
            }
            TermExpr::App(f, a) => {
                f.names(out);
                a.names(out);
            }
            TermExpr::Tuple(ts) => ts.iter().for_each(|t| t.names(out)),
            TermExpr::Proj(_, t) => t.names(out),
        }
    }

    pub fn subst(&self, x: &str, t: &TermExpr, fresh: &mut Fresh) -> TermExpr {
        match self {
            TermExpr::Var(y) if y == x => t.clone(),
            TermExpr::Var(_) => self.clone(),
            TermExpr::Lam(y, b) => {
                if y == x {
                    return self.clone();
                }
                if t.free_vars().contains(y) && b.free_vars().contains(x) {
                    let z = fresh.next(y);
                    let renamed = b.subst(y, &TermExpr::var(z.clone()), fresh);
                    return TermExpr::Lam(z, Box::new(renamed.subst(x, t, fresh)));
                }
                TermExpr::Lam(y.clone(), Box::new(b.subst(x, t, fresh)))
            }
            TermExpr::App(f, a) => TermExpr::app(f.subst(x, t, fresh), a.subst(x, t, fresh)),
            TermExpr::Tuple(ts) => TermExpr::Tuple(ts.iter().map(|u| u.subst(x, t, fresh)).collect()),
            TermExpr::Proj(i, u) => TermExpr::proj(*i, u.subst(x, t, fresh)),
        }
    }
}

/// Generator of identifiers that avoid a growing set of used names.
#[derive(Debug, Clone, Default)]
pub struct Fresh {
    used: BTreeSet<String>,
}

impl Fresh {
    pub fn avoiding(used: BTreeSet<String>) -> Self {
        Fresh { used }
    }

    pub fn for_type(t: &TypeExpr) -> Self {
        let mut used = BTreeSet::new();
        t.names(&mut used);
        Fresh { used }
    }

    pub fn reserve(&mut self, name: &str) {
        self.used.insert(name.to_owned());
    }

    /// `base` with a numeric suffix, never returned before.
    pub fn next(&mut self, base: &str) -> String {
        let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
        let stem = if stem.is_empty() || stem == ANON { "x" } else { stem };
        let mut k = 1;
        loop {
            let candidate = format!("{stem}{k}");
            if self.used.insert(candidate.clone()) {
                return candidate;
            }
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substitution_avoids_capture() {
        // (\y. x y)[y/x] must not bind the substituted y.
        let t = TermExpr::lam("y", TermExpr::app(TermExpr::var("x"), TermExpr::var("y")));
        let mut fresh = Fresh::avoiding(["x".to_owned(), "y".to_owned()].into());
        let r = t.subst("x", &TermExpr::var("y"), &mut fresh);
        match r {
            TermExpr::Lam(z, body) => {
                assert_ne!(z, "y");
                assert_eq!(*body, TermExpr::app(TermExpr::var("y"), TermExpr::var(z)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn free_variables() {
        let t = TypeExpr::pi("a", TypeExpr::el("A"), TypeExpr::FamApp(TermExpr::var("B"), vec![TermExpr::var("a")]));
        assert_eq!(t.free_vars(), ["A".to_owned(), "B".to_owned()].into());
    }
}
