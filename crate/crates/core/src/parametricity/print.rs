//! Surface-syntax printer. Output parses back to the same tree.

use crate::parametricity::syntax::{TermExpr, TypeExpr, ANON};

// Precedence contexts, loosest first.
const TOP: u8 = 0;
const FACTOR: u8 = 2;

pub fn print_type(t: &TypeExpr) -> String {
    let mut out = String::new();
    write_type(t, TOP, &mut out);
    out
}

pub fn print_term(t: &TermExpr) -> String {
    let mut out = String::new();
    write_term(t, TOP, &mut out);
    out
}

fn type_level(t: &TypeExpr) -> u8 {
    match t {
        TypeExpr::Pi(..) | TypeExpr::Family(..) => 0,
        TypeExpr::Prod(items) if items.len() >= 2 => 1,
        TypeExpr::Apply(..) | TypeExpr::FamApp(..) => 2,
        _ => 3,
    }
}

fn write_type(t: &TypeExpr, ctx: u8, out: &mut String) {
    let parens = type_level(t) < ctx;
    if parens {
        out.push('(');
    }
    match t {
        TypeExpr::Univ => out.push('U'),
        TypeExpr::Pi(x, a, b) if x == ANON => {
            write_type(a, 1, out);
            out.push_str(" -> ");
            write_type(b, TOP, out);
        }
        TypeExpr::Pi(x, a, b) => {
            out.push_str(&format!("Pi {x}:"));
            write_type(a, TOP, out);
            out.push_str(". ");
            write_type(b, TOP, out);
        }
        TypeExpr::Prod(items) => match items.len() {
            0 => out.push_str("(*)"),
            1 => {
                out.push('(');
                write_type(&items[0], TOP, out);
                out.push_str(" *)");
            }
            _ => {
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(" * ");
                    }
                    write_type(item, FACTOR, out);
                }
            }
        },
        TypeExpr::FamApp(head, args) => {
            if is_named_head(head) {
                write_term(head, 2, out);
            } else {
                out.push_str("El ");
                write_term(head, 2, out);
            }
            for a in args {
                out.push(' ');
                write_term(a, 2, out);
            }
        }
        TypeExpr::Family(x, b) => {
            out.push_str(&format!("Fam {x}. "));
            write_type(b, TOP, out);
        }
        TypeExpr::Apply(f, a) => {
            write_type(f, FACTOR, out);
            out.push_str(" @ ");
            write_term(a, 2, out);
        }
    }
    if parens {
        out.push(')');
    }
}

/// Variables and projection chains over variables print without `El`.
fn is_named_head(t: &TermExpr) -> bool {
    match t {
        TermExpr::Var(x) => !matches!(x.as_str(), "U" | "Pi" | "Fam" | "El"),
        TermExpr::Proj(_, inner) => is_named_head(inner),
        _ => false,
    }
}

fn term_level(t: &TermExpr) -> u8 {
    match t {
        TermExpr::Lam(..) => 0,
        TermExpr::App(..) => 1,
        _ => 2,
    }
}

fn write_term(t: &TermExpr, ctx: u8, out: &mut String) {
    let parens = term_level(t) < ctx;
    if parens {
        out.push('(');
    }
    match t {
        TermExpr::Var(x) => out.push_str(x),
        TermExpr::Lam(x, b) => {
            out.push_str(&format!("\\{x}. "));
            write_term(b, TOP, out);
        }
        TermExpr::App(f, a) => {
            write_term(f, 1, out);
            out.push(' ');
            write_term(a, 2, out);
        }
        TermExpr::Tuple(items) => {
            out.push('(');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_term(item, TOP, out);
            }
            if items.len() == 1 {
                out.push(',');
            }
            out.push(')');
        }
        TermExpr::Proj(i, inner) => {
            write_term(inner, 2, out);
            out.push_str(&format!(".{i}"));
        }
    }
    if parens {
        out.push(')');
    }
}
