//! Sparse Laurent polynomials with arbitrary-precision integer coefficients.
//!
//! Terms map an exponent vector to a nonzero coefficient; dimension 2 is the
//! `Z[u^{±1}, v^{±1}]` ring carrying the abelian string invariant. Printing
//! follows a fixed colexicographic term order so output is deterministic and
//! parseable back.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::words::ExponentIndex;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("exponent dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("operation requires dimension-2 exponents, found dimension {0}")]
    NotTwoDimensional(usize),
    #[error("substitution supplies {found} images but the polynomial has {expected} variables")]
    ImageCountMismatch { expected: usize, found: usize },
    #[error("malformed polynomial near `{0}`")]
    Parse(String),
}

/// `±1` times a monomial; the only polynomial images that keep monomial
/// substitution inside the Laurent ring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SignedMonomial {
    pub negative: bool,
    pub exponents: ExponentIndex,
}

impl SignedMonomial {
    pub fn new(negative: bool, exponents: ExponentIndex) -> Self {
        SignedMonomial {
            negative,
            exponents,
        }
    }

    /// The identity image of variable `axis` in a `dim`-variable ring.
    pub fn variable(dim: usize, axis: usize) -> Self {
        SignedMonomial::new(false, ExponentIndex::unit(dim, axis))
    }

    /// `x_axis^{-1}`.
    pub fn variable_inverse(dim: usize, axis: usize) -> Self {
        SignedMonomial::new(false, ExponentIndex::unit(dim, axis).negated())
    }

    /// The constant 1.
    pub fn one(dim: usize) -> Self {
        SignedMonomial::new(false, ExponentIndex::zero(dim))
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LaurentPolynomial {
    terms: BTreeMap<ExponentIndex, BigInt>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        LaurentPolynomial::default()
    }

    pub fn one(dim: usize) -> Self {
        LaurentPolynomial::monomial(ExponentIndex::zero(dim), BigInt::one())
    }

    pub fn constant(dim: usize, value: impl Into<BigInt>) -> Self {
        LaurentPolynomial::monomial(ExponentIndex::zero(dim), value.into())
    }

    pub fn monomial(index: ExponentIndex, coeff: impl Into<BigInt>) -> Self {
        let mut p = LaurentPolynomial::zero();
        p.add_term(index, coeff.into());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .all(|(i, c)| i.is_zero() && c.is_one())
    }

    /// Exponent dimension, or `None` for the zero polynomial.
    pub fn dim(&self) -> Option<usize> {
        self.terms.keys().next().map(ExponentIndex::dim)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentIndex, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, index: &ExponentIndex) -> BigInt {
        self.terms.get(index).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Adds `coeff * x^index` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, index: ExponentIndex, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(index);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_dims(&self, other: &Self) -> Result<(), LaurentError> {
        if let (Some(a), Some(b)) = (self.dim(), other.dim()) {
            if a != b {
                return Err(LaurentError::DimensionMismatch { left: a, right: b });
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check_dims(other)?;
        let mut out = self.clone();
        for (index, coeff) in &other.terms {
            out.add_term(index.clone(), coeff.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        LaurentPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(i, c)| (i.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LaurentError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check_dims(other)?;
        let mut out = LaurentPolynomial::zero();
        for (i1, c1) in &self.terms {
            for (i2, c2) in &other.terms {
                let index = i1.translated(i2).expect("dimensions checked above");
                out.add_term(index, c1 * c2);
            }
        }
        Ok(out)
    }

    /// Exchanges the two variables: each term `(j, k)` becomes `(k, j)`.
    pub fn swap_uv(&self) -> Result<Self, LaurentError> {
        if let Some(d) = self.dim() {
            if d != 2 {
                return Err(LaurentError::NotTwoDimensional(d));
            }
        }
        Ok(LaurentPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(i, c)| {
                    let e = i.entries();
                    (ExponentIndex::pair(e[1], e[0]), c.clone())
                })
                .collect(),
        })
    }

    /// Substitutes a signed monomial for each variable and collects terms.
    /// All images must share one target dimension.
    pub fn eval_monomial_map(&self, images: &[SignedMonomial]) -> Result<Self, LaurentError> {
        let Some(dim) = self.dim() else {
            return Ok(LaurentPolynomial::zero());
        };
        if images.len() != dim {
            return Err(LaurentError::ImageCountMismatch {
                expected: dim,
                found: images.len(),
            });
        }
        let target = images[0].exponents.dim();
        for img in images {
            if img.exponents.dim() != target {
                return Err(LaurentError::DimensionMismatch {
                    left: target,
                    right: img.exponents.dim(),
                });
            }
        }
        let mut out = LaurentPolynomial::zero();
        for (index, coeff) in &self.terms {
            let mut exps = vec![0i64; target];
            let mut negative = false;
            for (axis, &e) in index.entries().iter().enumerate() {
                let img = &images[axis];
                for (t, x) in exps.iter_mut().zip(img.exponents.entries()) {
                    *t += e * x;
                }
                if img.negative && e.rem_euclid(2) == 1 {
                    negative = !negative;
                }
            }
            let c = if negative { -coeff.clone() } else { coeff.clone() };
            out.add_term(ExponentIndex::new(exps), c);
        }
        Ok(out)
    }

    fn variable_name(dim: usize, axis: usize) -> String {
        if dim == 2 {
            ["u", "v"][axis].to_string()
        } else if axis + 1 == dim {
            "v".to_string()
        } else {
            format!("u{}", axis + 1)
        }
    }

    /// Deterministic text form: terms in colexicographic exponent order
    /// (ascending, so negative exponents come first), `u^j*v^k` monomials,
    /// bare variable names for exponent 1, exponent 0 omitted.
    pub fn canonical_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut keys: Vec<&ExponentIndex> = self.terms.keys().collect();
        keys.sort_by(|a, b| a.colex_cmp(b));
        let mut out = String::new();
        for (pos, index) in keys.iter().enumerate() {
            let coeff = &self.terms[*index];
            if pos == 0 {
                if coeff.is_negative() {
                    out.push('-');
                }
            } else if coeff.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let magnitude = coeff.abs();
            let dim = index.dim();
            let mut factors: Vec<String> = Vec::new();
            if !magnitude.is_one() || index.is_zero() {
                factors.push(magnitude.to_string());
            }
            for (axis, &e) in index.entries().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = Self::variable_name(dim, axis);
                if e == 1 {
                    factors.push(name);
                } else {
                    factors.push(format!("{name}^{e}"));
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    /// Parses the dimension-2 canonical form produced by
    /// [`canonical_string`](Self::canonical_string).
    pub fn parse(text: &str) -> Result<Self, LaurentError> {
        let text = text.trim();
        if text.is_empty() || text == "0" {
            return Ok(LaurentPolynomial::zero());
        }
        let mut out = LaurentPolynomial::zero();
        for (negative, term) in split_terms(text)? {
            let (index, coeff) = parse_term(term)?;
            out.add_term(index, if negative { -coeff } else { coeff });
        }
        Ok(out)
    }
}

/// Splits on top-level `+`/`-`, leaving exponent signs (after `^`) alone.
fn split_terms(text: &str) -> Result<Vec<(bool, &str)>, LaurentError> {
    let bytes = text.as_bytes();
    let mut idx = 0;
    let mut parts = Vec::new();
    let mut negative = false;
    let mut start = 0;
    if bytes.first() == Some(&b'-') {
        negative = true;
        start = 1;
        idx = 1;
    } else if bytes.first() == Some(&b'+') {
        start = 1;
        idx = 1;
    }
    let mut prev_non_space = b'\0';
    while idx < bytes.len() {
        let b = bytes[idx];
        if (b == b'+' || b == b'-') && prev_non_space != b'^' {
            let piece = text[start..idx].trim();
            if piece.is_empty() {
                return Err(LaurentError::Parse(text[start..].to_string()));
            }
            parts.push((negative, piece));
            negative = b == b'-';
            start = idx + 1;
        }
        if !b.is_ascii_whitespace() {
            prev_non_space = b;
        }
        idx += 1;
    }
    let piece = text[start..].trim();
    if piece.is_empty() {
        return Err(LaurentError::Parse(text.to_string()));
    }
    parts.push((negative, piece));
    Ok(parts)
}

fn parse_term(term: &str) -> Result<(ExponentIndex, BigInt), LaurentError> {
    let mut coeff = BigInt::one();
    let mut j = 0i64;
    let mut k = 0i64;
    for factor in term.split('*') {
        let factor = factor.trim();
        if factor.is_empty() {
            return Err(LaurentError::Parse(term.to_string()));
        }
        if factor.chars().next().unwrap().is_ascii_digit() {
            let n: BigInt = factor
                .parse()
                .map_err(|_| LaurentError::Parse(factor.to_string()))?;
            coeff *= n;
            continue;
        }
        let (var, exp) = match factor.split_once('^') {
            Some((v, e)) => {
                let e: i64 = e
                    .parse()
                    .map_err(|_| LaurentError::Parse(factor.to_string()))?;
                (v, e)
            }
            None => (factor, 1),
        };
        match var {
            "u" => j += exp,
            "v" => k += exp,
            _ => return Err(LaurentError::Parse(factor.to_string())),
        }
    }
    Ok((ExponentIndex::pair(j, k), coeff))
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical_string())
    }
}
