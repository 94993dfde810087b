//! The ν-ary parametricity translation and its iteration.
//!
//! A type `T` becomes the family `Fam t. T*(t)` over ν-tuples `t` of elements
//! of `T`. For ν = 1 tuples are not wrapped: a 1-tuple is its component.
//!
//! Free variables are parameters shared by every copy. A free `X_j` is related
//! by `X_{j+1}`; any other free `x` is related by `x_star`.

use std::collections::HashMap;

use crate::error::ParamError;
use crate::parametricity::normalize::norm_type;
use crate::parametricity::syntax::{Fresh, TermExpr, TypeExpr};
use crate::word::Arity;

/// Suffix naming the relation of a free parameter.
pub const STAR_SUFFIX: &str = "_star";

/// Name of the `k`-th family in the iterated translation.
pub fn level_name(k: usize) -> String {
    format!("X_{k}")
}

/// `Some(k)` for names of the form `X_k`.
pub fn level_of(name: &str) -> Option<usize> {
    let digits = name.strip_prefix("X_")?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || (digits.len() > 1 && digits.starts_with('0'))
    {
        return None;
    }
    digits.parse().ok()
}

fn related_name(x: &str) -> String {
    match level_of(x) {
        Some(k) => level_name(k + 1),
        None => format!("{x}{STAR_SUFFIX}"),
    }
}

#[derive(Clone)]
struct Binding {
    copies: Vec<TermExpr>,
    rel: TermExpr,
}

struct Translator {
    nu: usize,
    fresh: Fresh,
}

type Env = HashMap<String, Binding>;

impl Translator {
    fn pack(&self, items: Vec<TermExpr>) -> TermExpr {
        if self.nu == 1 {
            items.into_iter().next().expect("one component")
        } else {
            TermExpr::Tuple(items)
        }
    }

    fn unpack(&self, i: usize, t: &TermExpr) -> TermExpr {
        if self.nu == 1 {
            t.clone()
        } else {
            TermExpr::proj(i, t.clone())
        }
    }

    fn prod(&self, items: Vec<TypeExpr>) -> TypeExpr {
        if self.nu == 1 {
            items.into_iter().next().expect("one component")
        } else {
            TypeExpr::Prod(items)
        }
    }

    fn copy_type(&mut self, t: &TypeExpr, env: &Env, i: usize) -> TypeExpr {
        let mut out = t.clone();
        for x in t.free_vars() {
            if let Some(b) = env.get(&x) {
                out = out.subst(&x, &b.copies[i], &mut self.fresh);
            }
        }
        out
    }

    fn copy_term(&mut self, t: &TermExpr, env: &Env, i: usize) -> TermExpr {
        let mut out = t.clone();
        for x in t.free_vars() {
            if let Some(b) = env.get(&x) {
                out = out.subst(&x, &b.copies[i], &mut self.fresh);
            }
        }
        out
    }

    fn copies_of(&mut self, t: &TermExpr, env: &Env) -> TermExpr {
        let items = (0..self.nu).map(|i| self.copy_term(t, env, i)).collect();
        self.pack(items)
    }

    /// The relation `T*` at the ν-tuple `t`.
    fn relation(&mut self, ty: &TypeExpr, env: &Env, t: &TermExpr) -> Result<TypeExpr, ParamError> {
        match ty {
            TypeExpr::Univ => {
                let doms = (0..self.nu).map(|i| TypeExpr::FamApp(self.unpack(i, t), Vec::new())).collect();
                Ok(TypeExpr::arrow(self.prod(doms), TypeExpr::Univ))
            }
            TypeExpr::Pi(x, a, b) => {
                let xs = self.fresh.next(x);
                let xr = self.fresh.next(&format!("{xs}_r"));
                let doms = (0..self.nu).map(|i| self.copy_type(a, env, i)).collect();
                let dom = self.prod(doms);
                let xs_var = TermExpr::var(xs.clone());
                let rel_dom = self.relation(a, env, &xs_var)?;
                let mut inner = env.clone();
                inner.insert(
                    x.clone(),
                    Binding {
                        copies: (0..self.nu).map(|i| self.unpack(i, &xs_var)).collect(),
                        rel: TermExpr::var(xr.clone()),
                    },
                );
                let applied = (0..self.nu).map(|i| TermExpr::app(self.unpack(i, t), self.unpack(i, &xs_var))).collect();
                let applied = self.pack(applied);
                let cod = self.relation(b, &inner, &applied)?;
                Ok(TypeExpr::pi(xs, dom, TypeExpr::pi(xr, rel_dom, cod)))
            }
            TypeExpr::Prod(items) => {
                let mut out = Vec::with_capacity(items.len());
                for (j, a) in items.iter().enumerate() {
                    let comps = (0..self.nu).map(|i| TermExpr::proj(j, self.unpack(i, t))).collect();
                    let comps = self.pack(comps);
                    out.push(self.relation(a, env, &comps)?);
                }
                Ok(TypeExpr::Prod(out))
            }
            TypeExpr::FamApp(head, args) => {
                let mut rel_args = Vec::with_capacity(2 * args.len() + 1);
                for a in args {
                    rel_args.push(self.copies_of(a, env));
                    rel_args.push(self.rel_term(a, env)?);
                }
                rel_args.push(t.clone());
                Ok(TypeExpr::FamApp(self.rel_term(head, env)?, rel_args))
            }
            TypeExpr::Family(..) | TypeExpr::Apply(..) => Err(ParamError::UnsupportedConstruct(
                "type-level abstraction or application after normalization".into(),
            )),
        }
    }

    fn rel_term(&mut self, t: &TermExpr, env: &Env) -> Result<TermExpr, ParamError> {
        Ok(match t {
            TermExpr::Var(x) => match env.get(x) {
                Some(b) => b.rel.clone(),
                None => TermExpr::var(related_name(x)),
            },
            TermExpr::Lam(x, body) => {
                let xs = self.fresh.next(x);
                let xr = self.fresh.next(&format!("{xs}_r"));
                let xs_var = TermExpr::var(xs.clone());
                let mut inner = env.clone();
                inner.insert(
                    x.clone(),
                    Binding {
                        copies: (0..self.nu).map(|i| self.unpack(i, &xs_var)).collect(),
                        rel: TermExpr::var(xr.clone()),
                    },
                );
                TermExpr::lam(xs, TermExpr::lam(xr, self.rel_term(body, &inner)?))
            }
            TermExpr::App(f, a) => {
                let rf = self.rel_term(f, env)?;
                let copies = self.copies_of(a, env);
                let ra = self.rel_term(a, env)?;
                TermExpr::app(TermExpr::app(rf, copies), ra)
            }
            TermExpr::Tuple(items) => {
                TermExpr::Tuple(items.iter().map(|u| self.rel_term(u, env)).collect::<Result<_, _>>()?)
            }
            TermExpr::Proj(i, inner) => TermExpr::proj(*i, self.rel_term(inner, env)?),
        })
    }
}

/// `Fam t. T*(t)`. The input is normalized first; type-level abstractions
/// that survive normalization are rejected.
pub fn translate(ty: &TypeExpr, nu: Arity) -> Result<TypeExpr, ParamError> {
    let mut fresh = Fresh::for_type(ty);
    let ty = norm_type(ty, &mut fresh);
    for x in ty.free_vars() {
        fresh.reserve(&related_name(&x));
    }
    let mut tr = Translator { nu: nu.get(), fresh };
    let t = tr.fresh.next("t");
    let body = tr.relation(&ty, &Env::new(), &TermExpr::var(t.clone()))?;
    Ok(TypeExpr::family(t, body))
}

/// The normalized type of `X_steps`: `S_0 = U` and `S_{k+1}` is `S_k*` at the
/// ν-fold diagonal `(X_k, .., X_k)`.
pub fn iterate_types(nu: Arity, steps: usize) -> TypeExpr {
    let mut s = TypeExpr::Univ;
    for k in 0..steps {
        let x = TermExpr::var(level_name(k));
        let diag = if nu.get() == 1 { x } else { TermExpr::Tuple(vec![x; nu.get()]) };
        let fam = translate(&s, nu).expect("iterated types stay in the fragment");
        let mut fresh = Fresh::for_type(&fam);
        s = norm_type(&TypeExpr::apply(fam, diag), &mut fresh);
    }
    s
}
