//! The ν-semi-shape category.
//!
//! Objects are natural numbers and a morphism `p -> n` is a word of length `n`
//! over the alphabet `{⋆} ⊔ ν` containing exactly `p` stars. With `ν = 1` this
//! is the augmented semi-simplex category, with `ν = 2` the semi-cube category.
//!
//! Composition `g ∘ f` walks `g` from the left: a direction letter of `g` is
//! copied, and each star of `g` consumes the next letter of `f`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::WordError;

/// Largest supported arity. Letters are rendered as single characters, so
/// directions beyond `9` have no text form.
pub const MAX_ARITY: usize = 10;

/// Number of directions ν.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Arity(usize);

impl Arity {
    pub const SIMPLICIAL: Arity = Arity(1);
    pub const CUBICAL: Arity = Arity(2);

    pub fn new(nu: usize) -> Result<Self, WordError> {
        if (1..=MAX_ARITY).contains(&nu) {
            Ok(Arity(nu))
        } else {
            Err(WordError::InvalidArity(nu))
        }
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// All direction letters, in order.
    pub fn directions(self) -> impl Iterator<Item = Letter> + Clone {
        (0..self.0 as u8).map(Letter::Dir)
    }

    /// Text of a direction letter under this arity.
    pub fn render_dir(self, i: u8) -> char {
        match (self.0, i) {
            (2, 0) => 'L',
            (2, 1) => 'R',
            (_, i) => char::from(b'0' + i),
        }
    }

    fn parse_letter(self, ch: char) -> Result<Letter, WordError> {
        let dir = match ch {
            '*' | '⋆' => return Ok(Letter::Star),
            'L' if self.0 == 2 => 0,
            'R' if self.0 == 2 => 1,
            '0'..='9' => ch as u8 - b'0',
            _ => return Err(WordError::BadLetter { letter: ch, nu: self.0 }),
        };
        if (dir as usize) < self.0 {
            Ok(Letter::Dir(dir))
        } else {
            Err(WordError::BadLetter { letter: ch, nu: self.0 })
        }
    }
}

impl TryFrom<usize> for Arity {
    type Error = WordError;

    fn try_from(nu: usize) -> Result<Self, Self::Error> {
        Arity::new(nu)
    }
}

impl From<Arity> for usize {
    fn from(nu: Arity) -> usize {
        nu.0
    }
}

impl fmt::Display for Arity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A letter of a word. `Star < Dir(0) < Dir(1) < ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Star,
    Dir(u8),
}

impl Letter {
    pub fn is_star(self) -> bool {
        matches!(self, Letter::Star)
    }

    pub fn dir(self) -> Option<usize> {
        match self {
            Letter::Star => None,
            Letter::Dir(i) => Some(i as usize),
        }
    }
}

/// A morphism of the ν-semi-shape category: `Hom(stars, len)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    nu: Arity,
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(nu: Arity, letters: Vec<Letter>) -> Result<Self, WordError> {
        for &l in &letters {
            if let Letter::Dir(i) = l {
                if i as usize >= nu.get() {
                    return Err(WordError::BadLetter { letter: nu.render_dir(i), nu: nu.get() });
                }
            }
        }
        Ok(Word { nu, letters })
    }

    pub fn parse(nu: Arity, text: &str) -> Result<Self, WordError> {
        let text = text.trim();
        if text == "ε" {
            return Ok(Word::identity(nu, 0));
        }
        let letters = text.chars().map(|c| nu.parse_letter(c)).collect::<Result<_, _>>()?;
        Ok(Word { nu, letters })
    }

    /// `⋆ⁿ`, the identity on `n`.
    pub fn identity(nu: Arity, n: usize) -> Self {
        Word { nu, letters: vec![Letter::Star; n] }
    }

    pub fn arity(&self) -> Arity {
        self.nu
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Codomain object `n`.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Domain object `p`.
    pub fn stars(&self) -> usize {
        self.letters.iter().filter(|l| l.is_star()).count()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.iter().all(|l| l.is_star())
    }

    /// `self ∘ f`.
    pub fn compose(&self, f: &Word) -> Result<Word, WordError> {
        if self.nu != f.nu {
            return Err(WordError::ArityMismatch { left: self.nu.get(), right: f.nu.get() });
        }
        if self.stars() != f.len() {
            return Err(WordError::NotComposable { stars: self.stars(), len: f.len() });
        }
        let mut rest = f.letters.iter();
        let letters = self
            .letters
            .iter()
            .map(|&a| match a {
                Letter::Star => *rest.next().expect("star count matches length"),
                dir => dir,
            })
            .collect();
        Ok(Word { nu: self.nu, letters })
    }

    /// Splits off the leftmost direction letter: `(w, f')` with `w` of
    /// codimension one and `w ∘ f' = self`.
    pub fn factor_leftmost(&self) -> Result<(Word, Word), WordError> {
        let pos = self.letters.iter().position(|l| !l.is_star()).ok_or(WordError::NoLetter)?;
        let n = self.len();
        let mut w = vec![Letter::Star; n];
        w[pos] = self.letters[pos];
        let mut rest = self.letters.clone();
        rest.remove(pos);
        Ok((Word { nu: self.nu, letters: w }, Word { nu: self.nu, letters: rest }))
    }

    /// Replaces the star at `index` (counted among stars) with `letter`.
    pub fn fill_star(&self, index: usize, letter: Letter) -> Option<Word> {
        let pos = self.letters.iter().enumerate().filter(|(_, l)| l.is_star()).nth(index)?.0;
        let mut letters = self.letters.clone();
        letters[pos] = letter;
        Some(Word { nu: self.nu, letters })
    }

    /// Positions of the direction letters.
    pub fn letter_positions(&self) -> Vec<usize> {
        self.letters.iter().enumerate().filter(|(_, l)| !l.is_star()).map(|(i, _)| i).collect()
    }

    /// Removes the letter at `pos`, keeping everything else.
    pub(crate) fn without(&self, pos: usize) -> Word {
        let mut letters = self.letters.clone();
        letters.remove(pos);
        Word { nu: self.nu, letters }
    }

    /// Star-only word with a single letter at `pos`.
    pub(crate) fn single(nu: Arity, n: usize, pos: usize, letter: Letter) -> Word {
        let mut letters = vec![Letter::Star; n];
        letters[pos] = letter;
        Word { nu, letters }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.letters {
            match l {
                Letter::Star => f.write_str("*")?,
                Letter::Dir(i) => write!(f, "{}", self.nu.render_dir(i))?,
            }
        }
        Ok(())
    }
}

impl FromStr for Arity {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let nu = s.trim().parse::<usize>().map_err(|_| WordError::InvalidArity(0))?;
        Arity::new(nu)
    }
}

/// `id_n = ⋆ⁿ`.
pub fn identity(nu: Arity, n: usize) -> Word {
    Word::identity(nu, n)
}

/// `g ∘ f`.
pub fn compose(g: &Word, f: &Word) -> Result<Word, WordError> {
    g.compose(f)
}

/// All words of `Hom(p, n)` in lexicographic order (`⋆ < 0 < 1 < ...`).
pub fn hom_enumerate(nu: Arity, p: usize, n: usize) -> Vec<Word> {
    fn go(nu: Arity, stars_left: usize, len_left: usize, prefix: &mut Vec<Letter>, out: &mut Vec<Word>) {
        if len_left == 0 {
            out.push(Word { nu, letters: prefix.clone() });
            return;
        }
        if stars_left > 0 {
            prefix.push(Letter::Star);
            go(nu, stars_left - 1, len_left - 1, prefix, out);
            prefix.pop();
        }
        if len_left > stars_left {
            for d in nu.directions() {
                prefix.push(d);
                go(nu, stars_left, len_left - 1, prefix, out);
                prefix.pop();
            }
        }
    }

    let mut out = Vec::new();
    if p <= n {
        go(nu, p, n, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

/// `|Hom(p, n)| = C(n, p) · ν^(n-p)`.
pub fn hom_count(nu: Arity, p: usize, n: usize) -> u128 {
    if p > n {
        return 0;
    }
    binomial(n, p) * (nu.get() as u128).pow((n - p) as u32)
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// The codimension-one word `⋆^q · eps · ⋆^(n-1-q)`.
pub fn face_word(nu: Arity, eps: Letter, q: usize, n: usize) -> Result<Word, WordError> {
    if q >= n {
        return Err(WordError::IndexOutOfRange { index: q, len: n });
    }
    match eps {
        Letter::Star => Err(WordError::StarDirection),
        Letter::Dir(i) if i as usize >= nu.get() => {
            Err(WordError::BadLetter { letter: nu.render_dir(i), nu: nu.get() })
        }
        dir => Ok(Word::single(nu, n, q, dir)),
    }
}

/// Peels the leftmost direction letter; see [`Word::factor_leftmost`].
pub fn factor_leftmost(f: &Word) -> Result<(Word, Word), WordError> {
    f.factor_leftmost()
}
