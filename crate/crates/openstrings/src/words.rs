//! Reduced words in the free group on generators indexed by integer vectors.
//!
//! A generator occurrence is a [`Letter`]: a component symbol, an exponent
//! vector (the `Z^2` index `u^j v^k`, or `Z^{n+1}` for colored strings) and a
//! sign. A [`Word`] is a sequence of letters kept fully reduced: no adjacent
//! pair differs only in sign. The index group acts by translation
//! ([`Word::shift`]); free reduction makes products well defined.

use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;
use thiserror::Error;

use crate::laurent::LaurentPolynomial;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("index dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("operation requires dimension-2 indices, found dimension {0}")]
    NotTwoDimensional(usize),
    #[error("malformed word token `{token}`: {reason}")]
    Parse { token: String, reason: String },
}

/// Exponent vector indexing a generator family, e.g. `(j, k)` for `u^j v^k`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ExponentIndex(SmallVec<[i64; 2]>);

impl ExponentIndex {
    pub fn new(entries: impl IntoIterator<Item = i64>) -> Self {
        ExponentIndex(entries.into_iter().collect())
    }

    pub fn zero(dim: usize) -> Self {
        ExponentIndex(smallvec::smallvec![0; dim])
    }

    /// The dimension-2 index `(j, k)` for `u^j v^k`.
    pub fn pair(j: i64, k: i64) -> Self {
        ExponentIndex(smallvec::smallvec![j, k])
    }

    /// Standard basis vector along `axis`.
    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = smallvec::smallvec![0; dim];
        v[axis] = 1;
        ExponentIndex(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn negated(&self) -> Self {
        ExponentIndex(self.0.iter().map(|&e| -e).collect())
    }

    pub fn translated(&self, delta: &Self) -> Result<Self, WordError> {
        if self.dim() != delta.dim() {
            return Err(WordError::DimensionMismatch {
                left: self.dim(),
                right: delta.dim(),
            });
        }
        Ok(ExponentIndex(
            self.0.iter().zip(&delta.0).map(|(a, b)| a + b).collect(),
        ))
    }

    /// Order used for printing polynomials: compare the reversed coordinate
    /// sequences, so dimension-2 indices sort by `k` first, then `j`.
    pub fn colex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.iter().rev().cmp(other.0.iter().rev())
    }
}

impl fmt::Display for ExponentIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn flipped(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub fn factor(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }
}

/// Component symbol; colored strings use one generator family per color.
/// Color 1 prints as `a`/`A`, color 2 as `b`/`B`, and so on.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Generator(pub u32);

impl Generator {
    pub const A: Generator = Generator(1);

    fn symbol(self, sign: Sign) -> char {
        let base = match sign {
            Sign::Positive => b'a',
            Sign::Negative => b'A',
        };
        (base + (self.0 - 1) as u8) as char
    }
}

/// One signed generator occurrence.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Letter {
    pub generator: Generator,
    pub index: ExponentIndex,
    pub sign: Sign,
}

impl Letter {
    pub fn new(generator: Generator, index: ExponentIndex, sign: Sign) -> Self {
        Letter {
            generator,
            index,
            sign,
        }
    }

    pub fn inverse(&self) -> Letter {
        Letter {
            generator: self.generator,
            index: self.index.clone(),
            sign: self.sign.flipped(),
        }
    }

    fn cancels(&self, other: &Letter) -> bool {
        self.generator == other.generator
            && self.index == other.index
            && self.sign == other.sign.flipped()
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.generator.0 > 26 {
            let prefix = match self.sign {
                Sign::Positive => "g",
                Sign::Negative => "G",
            };
            write!(f, "{prefix}{}{}", self.generator.0, self.index)
        } else {
            write!(f, "{}{}", self.generator.symbol(self.sign), self.index)
        }
    }
}

/// A reduced word in the free group.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Word {
        Word::default()
    }

    /// The single-letter word `g` at index zero of the given dimension.
    pub fn generator(g: Generator, dim: usize) -> Word {
        Word {
            letters: vec![Letter::new(g, ExponentIndex::zero(dim), Sign::Positive)],
        }
    }

    /// Builds a word, reducing as letters are appended. Fails if the letters
    /// mix index dimensions.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Result<Word, WordError> {
        let mut out: Vec<Letter> = Vec::new();
        let mut dim: Option<usize> = None;
        for letter in letters {
            match dim {
                None => dim = Some(letter.index.dim()),
                Some(d) if d != letter.index.dim() => {
                    return Err(WordError::DimensionMismatch {
                        left: d,
                        right: letter.index.dim(),
                    })
                }
                _ => {}
            }
            push_reduced(&mut out, letter);
        }
        Ok(Word { letters: out })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Index dimension, or `None` for the empty word (compatible with all).
    pub fn dim(&self) -> Option<usize> {
        self.letters.first().map(|l| l.index.dim())
    }

    fn check_dims(&self, other: &Word) -> Result<(), WordError> {
        if let (Some(a), Some(b)) = (self.dim(), other.dim()) {
            if a != b {
                return Err(WordError::DimensionMismatch { left: a, right: b });
            }
        }
        Ok(())
    }

    /// Translates every letter's index by `delta` (the index-group action).
    pub fn shift(&self, delta: &ExponentIndex) -> Result<Word, WordError> {
        let letters = self
            .letters
            .iter()
            .map(|l| {
                Ok(Letter::new(
                    l.generator,
                    l.index.translated(delta)?,
                    l.sign,
                ))
            })
            .collect::<Result<Vec<_>, WordError>>()?;
        // translation preserves reducedness
        Ok(Word { letters })
    }

    /// Free-group product: concatenation followed by full cancellation.
    pub fn multiply(&self, other: &Word) -> Result<Word, WordError> {
        self.check_dims(other)?;
        let mut out = self.letters.clone();
        for letter in &other.letters {
            push_reduced(&mut out, letter.clone());
        }
        Ok(Word { letters: out })
    }

    pub fn invert(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(Letter::inverse).collect(),
        }
    }

    /// Reverses letter order and negates every index, keeping signs.
    /// Matches reflecting the underlying string about a horizontal line.
    /// Defined for dimension-2 indices only.
    pub fn star(&self) -> Result<Word, WordError> {
        if let Some(d) = self.dim() {
            if d != 2 {
                return Err(WordError::NotTwoDimensional(d));
            }
        }
        Ok(Word {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter::new(l.generator, l.index.negated(), l.sign))
                .collect(),
        })
    }

    /// Sum of signed monomials at the letters' indices. A homomorphism from
    /// the free group to the additive group of Laurent polynomials.
    pub fn abelianize(&self) -> LaurentPolynomial {
        let mut acc = LaurentPolynomial::zero();
        for letter in &self.letters {
            acc.add_term(letter.index.clone(), letter.sign.factor().into());
        }
        acc
    }
}

fn push_reduced(stack: &mut Vec<Letter>, letter: Letter) {
    if stack.last().is_some_and(|top| top.cancels(&letter)) {
        stack.pop();
    } else {
        stack.push(letter);
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, letter) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{letter}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = WordError;

    /// Parses the display form: space-separated `a[j,k]` tokens, uppercase
    /// for inverses; `1` is the empty word.
    fn from_str(s: &str) -> Result<Word, WordError> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Word::empty());
        }
        let mut letters = Vec::new();
        for token in s.split_whitespace() {
            letters.push(parse_letter(token)?);
        }
        Word::from_letters(letters)
    }
}

fn parse_letter(token: &str) -> Result<Letter, WordError> {
    let err = |reason: &str| WordError::Parse {
        token: token.to_string(),
        reason: reason.to_string(),
    };
    let mut chars = token.chars();
    let symbol = chars.next().ok_or_else(|| err("empty token"))?;
    let (generator, sign) = match symbol {
        'a'..='z' => (Generator(symbol as u32 - 'a' as u32 + 1), Sign::Positive),
        'A'..='Z' => (Generator(symbol as u32 - 'A' as u32 + 1), Sign::Negative),
        _ => return Err(err("expected a generator symbol a-z or A-Z")),
    };
    let rest = chars.as_str();
    let inner = rest
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| err("expected an index like [j,k]"))?;
    let entries = inner
        .split(',')
        .map(|part| part.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| err("index entries must be integers"))?;
    if entries.is_empty() {
        return Err(err("index must have at least one entry"));
    }
    Ok(Letter::new(generator, ExponentIndex::new(entries), sign))
}
