//! Beta and projection reduction.

use crate::parametricity::syntax::{Fresh, TermExpr, TypeExpr};

/// Normal form: no `(\x. b) a`, no `(t0, .., tk).i`, no `(Fam x. T) @ t`, and
/// family heads are never applications (`El (f a) b` becomes `El f a b`).
pub fn normalize(t: &TypeExpr) -> TypeExpr {
    let mut fresh = Fresh::for_type(t);
    norm_type(t, &mut fresh)
}

pub fn normalize_term(t: &TermExpr) -> TermExpr {
    let mut used = Default::default();
    t.names(&mut used);
    norm_term(t, &mut Fresh::avoiding(used))
}

pub(crate) fn norm_type(t: &TypeExpr, fresh: &mut Fresh) -> TypeExpr {
    match t {
        TypeExpr::Univ => TypeExpr::Univ,
        TypeExpr::Pi(x, a, b) => TypeExpr::pi(x.clone(), norm_type(a, fresh), norm_type(b, fresh)),
        TypeExpr::Prod(items) => TypeExpr::Prod(items.iter().map(|a| norm_type(a, fresh)).collect()),
        TypeExpr::FamApp(head, args) => {
            let mut head = norm_term(head, fresh);
            let mut spine: Vec<TermExpr> = args.iter().map(|a| norm_term(a, fresh)).collect();
            loop {
                match head {
                    TermExpr::App(f, a) => {
                        spine.insert(0, *a);
                        head = *f;
                    }
                    TermExpr::Lam(..) if !spine.is_empty() => {
                        let a = spine.remove(0);
                        head = norm_term(&TermExpr::app(head, a), fresh);
                    }
                    _ => break,
                }
            }
            TypeExpr::FamApp(head, spine)
        }
        TypeExpr::Family(x, b) => TypeExpr::family(x.clone(), norm_type(b, fresh)),
        TypeExpr::Apply(f, a) => {
            let f = norm_type(f, fresh);
            let a = norm_term(a, fresh);
            match f {
                TypeExpr::Family(x, body) => norm_type(&body.subst(&x, &a, fresh), fresh),
                f => TypeExpr::apply(f, a),
            }
        }
    }
}

fn norm_term(t: &TermExpr, fresh: &mut Fresh) -> TermExpr {
    match t {
        TermExpr::Var(_) => t.clone(),
        TermExpr::Lam(x, b) => TermExpr::lam(x.clone(), norm_term(b, fresh)),
        TermExpr::App(f, a) => {
            let f = norm_term(f, fresh);
            let a = norm_term(a, fresh);
            match f {
                TermExpr::Lam(x, body) => norm_term(&body.subst(&x, &a, fresh), fresh),
                f => TermExpr::app(f, a),
            }
        }
        TermExpr::Tuple(items) => TermExpr::Tuple(items.iter().map(|u| norm_term(u, fresh)).collect()),
        TermExpr::Proj(i, inner) => match norm_term(inner, fresh) {
            TermExpr::Tuple(mut items) if *i < items.len() => items.swap_remove(*i),
            inner => TermExpr::proj(*i, inner),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parametricity::parse::{parse_term, parse_type};

    #[test]
    fn projection_of_pair() {
        assert_eq!(normalize_term(&parse_term("(a, b).0").unwrap()), TermExpr::var("a"));
    }

    #[test]
    fn beta() {
        assert_eq!(normalize_term(&parse_term("(\\x. f x x) t").unwrap()), parse_term("f t t").unwrap());
    }

    #[test]
    fn family_application() {
        let t = parse_type("(Fam t. El t.0 -> El t.1 -> U) @ (A, B)").unwrap();
        assert_eq!(normalize(&t), parse_type("A -> B -> U").unwrap());
        let t = parse_type("El ((\\x. \\y. g y x) a) b").unwrap();
        assert_eq!(normalize(&t), parse_type("g b a").unwrap());
    }

    #[test]
    fn reduction_avoids_capture() {
        let t = normalize_term(&parse_term("(\\x. \\y. x y) y").unwrap());
        match t {
            TermExpr::Lam(z, body) => {
                assert_ne!(z, "y");
                assert_eq!(*body, TermExpr::app(TermExpr::var("y"), TermExpr::var(z)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
