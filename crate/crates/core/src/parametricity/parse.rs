//! Surface syntax.
//!
//! ```text
//! type  ::= 'Pi' binder ':' type '.' type | 'Fam' binder '.' type | prod ('->' type)?
//! prod  ::= app ('*' app)*
//! app   ::= 'U' | '(' type ')' | '(' type '*' ')' | '(' '*' ')'
//!         | head aterm* | 'El' aterm aterm* | app '@' aterm
//! head  ::= ident ('.' digits)*
//! term  ::= '\' binder '.' term | aterm aterm*
//! aterm ::= ident | '(' term ')' | '(' term ',' ')' | '(' term (',' term)+ ')' | '(' ')'
//!         | aterm '.' digits
//! ```

use crate::error::ParamError;
use crate::parametricity::syntax::{TermExpr, TypeExpr, ANON};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Proj(usize),
    LParen,
    RParen,
    Comma,
    Colon,
    Dot,
    Star,
    Arrow,
    Backslash,
    At,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, ParamError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let mut advance = |n: usize, i: &mut usize| {
            *i += n;
            col += n;
        };
        let tok = match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                advance(1, &mut i);
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            ':' => Tok::Colon,
            '*' | '×' => Tok::Star,
            '\\' | 'λ' => Tok::Backslash,
            '@' => Tok::At,
            'Π' => Tok::Ident("Pi".into()),
            '→' => Tok::Arrow,
            '-' if chars.get(i + 1) == Some(&'>') => {
                advance(2, &mut i);
                out.push(Spanned { tok: Tok::Arrow, line: start_line, column: start_col });
                continue;
            }
            '.' => {
                let digits: String = chars[i + 1..].iter().take_while(|c| c.is_ascii_digit()).collect();
                if digits.is_empty() {
                    Tok::Dot
                } else {
                    let k = digits.parse().map_err(|_| ParamError::Syntax {
                        line: start_line,
                        column: start_col,
                        message: "projection index too large".into(),
                    })?;
                    advance(1 + digits.len(), &mut i);
                    out.push(Spanned { tok: Tok::Proj(k), line: start_line, column: start_col });
                    continue;
                }
            }
            c if c.is_alphanumeric() || c == '_' => {
                let word: String = chars[i..].iter().take_while(|c| c.is_alphanumeric() || **c == '_').collect();
                advance(word.chars().count(), &mut i);
                out.push(Spanned { tok: Tok::Ident(word), line: start_line, column: start_col });
                continue;
            }
            other => {
                return Err(ParamError::Syntax {
                    line,
                    column: col,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        advance(1, &mut i);
        out.push(Spanned { tok, line: start_line, column: start_col });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

const KEYWORDS: [&str; 4] = ["Pi", "Fam", "U", "El"];

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|s| &s.tok)
    }

    fn err(&self, message: impl Into<String>) -> ParamError {
        let (line, column) = self.toks.get(self.pos).map_or(self.end, |s| (s.line, s.column));
        ParamError::Syntax { line, column, message: message.into() }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.peek().cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParamError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn binder(&mut self) -> Result<String, ParamError> {
        match self.peek() {
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.err("expected a binder name")),
        }
    }

    fn ty(&mut self) -> Result<TypeExpr, ParamError> {
        if self.is_keyword("Pi") {
            self.pos += 1;
            let x = self.binder()?;
            self.expect(Tok::Colon, "`:`")?;
            let a = self.ty()?;
            self.expect(Tok::Dot, "`.`")?;
            let b = self.ty()?;
            return Ok(TypeExpr::pi(x, a, b));
        }
        if self.is_keyword("Fam") {
            self.pos += 1;
            let x = self.binder()?;
            self.expect(Tok::Dot, "`.`")?;
            let b = self.ty()?;
            return Ok(TypeExpr::family(x, b));
        }
        let a = self.prod()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let b = self.ty()?;
            return Ok(TypeExpr::pi(ANON, a, b));
        }
        Ok(a)
    }

    fn prod(&mut self) -> Result<TypeExpr, ParamError> {
        let first = self.app_ty()?;
        // `(A *)` is a singleton product, not the start of a binary one.
        let more = |p: &Self| p.peek() == Some(&Tok::Star) && p.peek_at(1) != Some(&Tok::RParen);
        if !more(self) {
            return Ok(first);
        }
        let mut items = vec![first];
        while more(self) {
            self.pos += 1;
            items.push(self.app_ty()?);
        }
        Ok(TypeExpr::Prod(items))
    }

    fn app_ty(&mut self) -> Result<TypeExpr, ParamError> {
        let mut t = self.atomic_ty()?;
        while self.peek() == Some(&Tok::At) {
            self.pos += 1;
            let arg = self.aterm()?;
            t = TypeExpr::apply(t, arg);
        }
        Ok(t)
    }

    fn starts_aterm(&self) -> bool {
        match self.peek() {
            Some(Tok::LParen) => true,
            Some(Tok::Ident(s)) => !KEYWORDS.contains(&s.as_str()),
            _ => false,
        }
    }

    fn atomic_ty(&mut self) -> Result<TypeExpr, ParamError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == "U" => {
                self.pos += 1;
                Ok(TypeExpr::Univ)
            }
            Some(Tok::Ident(s)) if s == "El" => {
                self.pos += 1;
                let head = self.aterm()?;
                let mut args = Vec::new();
                while self.starts_aterm() {
                    args.push(self.aterm()?);
                }
                Ok(TypeExpr::FamApp(head, args))
            }
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                let mut head = TermExpr::var(s.clone());
                self.pos += 1;
                while let Some(Tok::Proj(k)) = self.peek() {
                    head = TermExpr::proj(*k, head);
                    self.pos += 1;
                }
                let mut args = Vec::new();
                while self.starts_aterm() {
                    args.push(self.aterm()?);
                }
                Ok(TypeExpr::FamApp(head, args))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                if self.peek() == Some(&Tok::Star) && self.peek_at(1) == Some(&Tok::RParen) {
                    self.pos += 2;
                    return Ok(TypeExpr::Prod(Vec::new()));
                }
                let t = self.ty()?;
                if self.peek() == Some(&Tok::Star) && self.peek_at(1) == Some(&Tok::RParen) {
                    self.pos += 2;
                    return Ok(TypeExpr::Prod(vec![t]));
                }
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => Err(self.err("expected a type")),
        }
    }

    fn term(&mut self) -> Result<TermExpr, ParamError> {
        if self.peek() == Some(&Tok::Backslash) {
            self.pos += 1;
            let x = self.binder()?;
            self.expect(Tok::Dot, "`.`")?;
            let b = self.term()?;
            return Ok(TermExpr::lam(x, b));
        }
        let mut t = self.aterm()?;
        while self.starts_aterm() {
            let a = self.aterm()?;
            t = TermExpr::app(t, a);
        }
        Ok(t)
    }

    fn aterm(&mut self) -> Result<TermExpr, ParamError> {
        let mut t = match self.bump() {
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => TermExpr::var(s),
            Some(Tok::LParen) => {
                if self.peek() == Some(&Tok::RParen) {
                    self.pos += 1;
                    TermExpr::Tuple(Vec::new())
                } else {
                    let first = self.term()?;
                    if self.peek() == Some(&Tok::RParen) {
                        self.pos += 1;
                        first
                    } else {
                        let mut items = vec![first];
                        while self.peek() == Some(&Tok::Comma) {
                            self.pos += 1;
                            if self.peek() == Some(&Tok::RParen) {
                                break;
                            }
                            items.push(self.term()?);
                        }
                        self.expect(Tok::RParen, "`,` or `)`")?;
                        TermExpr::Tuple(items)
                    }
                }
            }
            _ => {
                self.pos -= 1;
                return Err(self.err("expected a term"));
            }
        };
        while let Some(Tok::Proj(k)) = self.peek() {
            t = TermExpr::proj(*k, t);
            self.pos += 1;
        }
        Ok(t)
    }

    fn finish(&self) -> Result<(), ParamError> {
        if self.pos < self.toks.len() {
            Err(self.err("unexpected trailing input"))
        } else {
            Ok(())
        }
    }
}

fn parser(text: &str) -> Result<Parser, ParamError> {
    let toks = lex(text)?;
    let last_line = text.lines().count().max(1);
    let last_col = text.lines().last().map_or(0, |l| l.chars().count()) + 1;
    Ok(Parser { toks, pos: 0, end: (last_line, last_col) })
}

pub fn parse_type(text: &str) -> Result<TypeExpr, ParamError> {
    let mut p = parser(text)?;
    let t = p.ty()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_term(text: &str) -> Result<TermExpr, ParamError> {
    let mut p = parser(text)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn universe() {
        assert_eq!(parse_type("U").unwrap(), TypeExpr::Univ);
    }

    #[test]
    fn dependent_function() {
        let t = parse_type("Pi a:A. B a").unwrap();
        assert_eq!(
            t,
            TypeExpr::pi("a", TypeExpr::el("A"), TypeExpr::FamApp(TermExpr::var("B"), vec![TermExpr::var("a")]))
        );
    }

    #[test]
    fn products_and_arrows() {
        let t = parse_type("(A * B) -> U").unwrap();
        assert_eq!(t, TypeExpr::arrow(TypeExpr::Prod(vec![TypeExpr::el("A"), TypeExpr::el("B")]), TypeExpr::Univ));
        assert_eq!(parse_type("(A *)").unwrap(), TypeExpr::Prod(vec![TypeExpr::el("A")]));
    }

    #[test]
    fn terms() {
        let t = parse_term("\\x. f (x.0, y,) z").unwrap();
        let expected = TermExpr::lam(
            "x",
            TermExpr::app(
                TermExpr::app(
                    TermExpr::var("f"),
                    TermExpr::Tuple(vec![TermExpr::proj(0, TermExpr::var("x")), TermExpr::var("y")]),
                ),
                TermExpr::var("z"),
            ),
        );
        assert_eq!(t, expected);
        assert_eq!(parse_term("(a,)").unwrap(), TermExpr::Tuple(vec![TermExpr::var("a")]));
    }

    #[test]
    fn error_locations() {
        match parse_type("Pi a:A.\n  B ) c") {
            Err(ParamError::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 5)),
            other => panic!("unexpected {other:?}"),
        }
        match parse_type("Pi a A") {
            Err(ParamError::Syntax { line, column, .. }) => assert_eq!((line, column), (1, 6)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_type("U $"), Err(ParamError::Syntax { column: 3, .. })));
        assert!(matches!(parse_type("Pi a:A."), Err(ParamError::Syntax { line: 1, column: 8, .. })));
    }
}
