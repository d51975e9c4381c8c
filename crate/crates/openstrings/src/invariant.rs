//! The free-group invariant of an open string and its abelianization.
//!
//! [`phi`] sweeps the Gauss diagram once from left to right, maintaining one
//! reduced word per line segment. Seeding the leftmost segment with the
//! generator `a[0,0]` and applying the crossing relations of the descending
//! resolution at every endpoint yields the image of the right end generator:
//! a homotopy invariant that composes under concatenation ([`compose`]).
//!
//! [`phi_poly`] computes the abelianization directly as a weighted path sum
//! over the diagram, giving an independent second route to the polynomial;
//! the two must always agree, which the test suites exploit as an oracle.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::gauss::GaussDiagram;
use crate::laurent::LaurentPolynomial;
use crate::words::{ExponentIndex, Generator, Letter, Sign, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("word `{word}` violates the expected normal form: {reason}")]
    NormalFormViolation { word: String, reason: String },
}

/// The invariant word `(a)Phi(alpha)`: the image of the left end generator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct StringInvariant {
    word: Word,
}

impl StringInvariant {
    /// The invariant of the trivial string: `a` maps to itself.
    pub fn identity() -> Self {
        StringInvariant {
            word: Word::generator(Generator::A, 2),
        }
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn into_word(self) -> Word {
        self.word
    }
}

impl fmt::Display for StringInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.word)
    }
}

const DIM2: &str = "sweep maintains dimension-2 words";

/// Left-to-right sweep computing the invariant word.
///
/// At an over endpoint the segment word is shifted by `v^{-1}` (positive
/// arrow) or `v` (negative). At an under endpoint, with `B` the word entering
/// the arrow's over endpoint (already known, since over precedes under):
/// positive gives `(B^{u^{-1}v^{-1}})^{-1} · A^{u^{-1}} · B`, negative gives
/// `B · A^{u} · (B^{uv})^{-1}`.
pub fn phi(diagram: &GaussDiagram) -> StringInvariant {
    let roles = diagram.roles();
    let mut current = Word::generator(Generator::A, 2);
    let mut entering_over: Vec<Option<Word>> = vec![None; diagram.arrow_count()];
    for role in &roles {
        if role.over {
            entering_over[role.arrow] = Some(current.clone());
            let dv = if role.positive {
                ExponentIndex::pair(0, -1)
            } else {
                ExponentIndex::pair(0, 1)
            };
            current = current.shift(&dv).expect(DIM2);
        } else {
            let b = entering_over[role.arrow]
                .as_ref()
                .expect("over endpoint precedes under endpoint");
            current = if role.positive {
                let left = b
                    .shift(&ExponentIndex::pair(-1, -1))
                    .expect(DIM2)
                    .invert();
                let mid = current.shift(&ExponentIndex::pair(-1, 0)).expect(DIM2);
                left.multiply(&mid)
                    .and_then(|w| w.multiply(b))
                    .expect(DIM2)
            } else {
                let right = b.shift(&ExponentIndex::pair(1, 1)).expect(DIM2).invert();
                let mid = current.shift(&ExponentIndex::pair(1, 0)).expect(DIM2);
                b.multiply(&mid)
                    .and_then(|w| w.multiply(&right))
                    .expect(DIM2)
            };
        }
    }
    StringInvariant { word: current }
}

/// The sweep output before free reduction. These letters always carry the
/// literal palindromic shape `W · a[-w,-w] · (W^{uv})^{-1}` with `w` the
/// diagram writhe; reduction can absorb the middle letter into the wings
/// (a kink reduces to a bare generator), which is why the reduced word's
/// visible middle exponent tracks the word, not the writhe.
pub fn phi_unreduced(diagram: &GaussDiagram) -> Vec<Letter> {
    let roles = diagram.roles();
    let shift_all = |letters: &[Letter], delta: &ExponentIndex| -> Vec<Letter> {
        letters
            .iter()
            .map(|l| {
                Letter::new(
                    l.generator,
                    l.index.translated(delta).expect(DIM2),
                    l.sign,
                )
            })
            .collect()
    };
    let invert_all = |letters: &[Letter]| -> Vec<Letter> {
        letters.iter().rev().map(Letter::inverse).collect()
    };
    let mut current = vec![Letter::new(
        Generator::A,
        ExponentIndex::zero(2),
        Sign::Positive,
    )];
    let mut entering_over: Vec<Option<Vec<Letter>>> = vec![None; diagram.arrow_count()];
    for role in &roles {
        if role.over {
            entering_over[role.arrow] = Some(current.clone());
            let dv = if role.positive {
                ExponentIndex::pair(0, -1)
            } else {
                ExponentIndex::pair(0, 1)
            };
            current = shift_all(&current, &dv);
        } else {
            let b = entering_over[role.arrow]
                .as_ref()
                .expect("over endpoint precedes under endpoint")
                .clone();
            current = if role.positive {
                let mut out = invert_all(&shift_all(&b, &ExponentIndex::pair(-1, -1)));
                out.extend(shift_all(&current, &ExponentIndex::pair(-1, 0)));
                out.extend(b);
                out
            } else {
                let mut out = b.clone();
                out.extend(shift_all(&current, &ExponentIndex::pair(1, 0)));
                out.extend(invert_all(&shift_all(&b, &ExponentIndex::pair(1, 1))));
                out
            };
        }
    }
    current
}

/// Endomorphism composition: substitutes `left`'s word for every generator
/// occurrence in `right`'s word. Equals `phi` of the concatenated diagrams.
pub fn compose(left: &StringInvariant, right: &StringInvariant) -> StringInvariant {
    let mut acc = Word::empty();
    for letter in right.word.letters() {
        let mut piece = left.word.shift(&letter.index).expect(DIM2);
        if letter.sign == Sign::Negative {
            piece = piece.invert();
        }
        acc = acc.multiply(&piece).expect(DIM2);
    }
    StringInvariant { word: acc }
}

/// Outcome of comparing the two concatenation orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommuteReport {
    pub commute: bool,
    /// Invariant word of `first · second`.
    pub forward: Word,
    /// Invariant word of `second · first`.
    pub reverse: Word,
}

pub fn commute_check(first: &GaussDiagram, second: &GaussDiagram) -> CommuteReport {
    let forward = phi(&first.concat(second)).into_word();
    let reverse = phi(&second.concat(first)).into_word();
    CommuteReport {
        commute: forward == reverse,
        forward,
        reverse,
    }
}

fn segment_weight(over: bool, positive: bool) -> LaurentPolynomial {
    let index = match (over, positive) {
        (true, true) => ExponentIndex::pair(0, -1),
        (true, false) => ExponentIndex::pair(0, 1),
        (false, true) => ExponentIndex::pair(-1, 0),
        (false, false) => ExponentIndex::pair(1, 0),
    };
    LaurentPolynomial::monomial(index, 1)
}

fn jump_weight(positive: bool) -> LaurentPolynomial {
    // 1 - u^{-1}v^{-1} for positive arrows, 1 - uv for negative ones
    let mut p = LaurentPolynomial::one(2);
    let index = if positive {
        ExponentIndex::pair(-1, -1)
    } else {
        ExponentIndex::pair(1, 1)
    };
    p.add_term(index, (-1).into());
    p
}

/// Abelian invariant computed as a weighted path sum over the diagram,
/// evaluated by dynamic programming over segments. Always equals
/// `phi(diagram).word().abelianize()`.
pub fn phi_poly(diagram: &GaussDiagram) -> LaurentPolynomial {
    let roles = diagram.roles();
    let arrows = diagram.arrows();
    let mut seg: Vec<LaurentPolynomial> = Vec::with_capacity(roles.len() + 1);
    seg.push(LaurentPolynomial::one(2));
    for (p, role) in roles.iter().enumerate() {
        let mut next = seg[p]
            .mul(&segment_weight(role.over, role.positive))
            .expect(DIM2);
        if !role.over {
            let from = arrows[role.arrow].over() - 1;
            let jump = seg[from].mul(&jump_weight(role.positive)).expect(DIM2);
            next = next.add(&jump).expect(DIM2);
        }
        seg.push(next);
    }
    seg.pop().expect("at least the seed segment")
}

/// Products of all left-to-right paths through the weighted diagram, in
/// depth-first order (stepping before jumping). Debugging aid: the number of
/// paths grows exponentially with nesting, so keep diagrams small.
pub fn enumerate_paths(diagram: &GaussDiagram) -> Vec<LaurentPolynomial> {
    let roles = diagram.roles();
    let arrows = diagram.arrows();
    let end = roles.len();
    // jumps[s] = (landing segment, weight) for arrows whose over endpoint
    // follows segment s
    let mut jumps: Vec<Vec<(usize, LaurentPolynomial)>> = vec![Vec::new(); end + 1];
    for a in arrows {
        jumps[a.over() - 1].push((a.under(), jump_weight(a.is_positive())));
    }
    let mut out = Vec::new();
    let mut stack: Vec<(usize, LaurentPolynomial)> = vec![(0, LaurentPolynomial::one(2))];
    while let Some((s, acc)) = stack.pop() {
        if s == end {
            out.push(acc);
            continue;
        }
        // push jumps first so the step edge is explored first
        for (to, w) in jumps[s].iter().rev() {
            stack.push((*to, acc.mul(w).expect(DIM2)));
        }
        let role = &roles[s];
        let stepped = acc
            .mul(&segment_weight(role.over, role.positive))
            .expect(DIM2);
        stack.push((s + 1, stepped));
    }
    out
}

/// Decomposition `W · a[-w,-w] · (W^{uv})^{-1}` of an invariant word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub prefix: Word,
    pub omega: i64,
}

/// Checks and extracts the expected normal form: odd length `2r+1`, middle
/// letter `a[-w,-w]` with positive sign, and each letter past the middle the
/// shifted inverse of its mirror. Violations are reported as errors so a
/// counterexample would surface loudly.
pub fn normal_form(invariant: &StringInvariant) -> Result<NormalForm, InvariantError> {
    let word = invariant.word();
    let letters = word.letters();
    let fail = |reason: String| InvariantError::NormalFormViolation {
        word: word.to_string(),
        reason,
    };
    if letters.len() % 2 == 0 {
        return Err(fail(format!("even length {}", letters.len())));
    }
    let r = letters.len() / 2;
    let middle = &letters[r];
    if middle.sign != Sign::Positive {
        return Err(fail("middle letter is inverted".to_string()));
    }
    let entries = middle.index.entries();
    if entries.len() != 2 || entries[0] != entries[1] {
        return Err(fail(format!(
            "middle letter index {} is not of the form [-w,-w]",
            middle.index
        )));
    }
    let omega = -entries[0];
    let shift_uv = ExponentIndex::pair(1, 1);
    for i in 1..=r {
        let expected = crate::words::Letter::new(
            letters[r - i].generator,
            letters[r - i].index.translated(&shift_uv).expect(DIM2),
            letters[r - i].sign.flipped(),
        );
        if letters[r + i] != expected {
            return Err(fail(format!(
                "letter {} is not the shifted inverse of letter {}",
                r + i + 1,
                r - i + 1
            )));
        }
    }
    Ok(NormalForm {
        prefix: Word::from_letters(letters[..r].iter().cloned()).expect(DIM2),
        omega,
    })
}

/// Result of a one-sided ribbon test. A failed obstruction certifies the
/// string is not ribbon; a passed one is inconclusive.
#[derive(Clone, Debug, PartialEq)]
pub enum RibbonVerdict {
    Abelian {
        passed: bool,
        phi_uv: LaurentPolynomial,
        phi_vu: LaurentPolynomial,
    },
    Full {
        passed: bool,
        word: Word,
        word_hat: Word,
    },
}

impl RibbonVerdict {
    pub fn passed(&self) -> bool {
        match self {
            RibbonVerdict::Abelian { passed, .. } | RibbonVerdict::Full { passed, .. } => *passed,
        }
    }

    pub fn obstruction(&self) -> &'static str {
        match self {
            RibbonVerdict::Abelian { .. } => "abelian",
            RibbonVerdict::Full { .. } => "full",
        }
    }

    pub fn report(&self) -> VerdictReport {
        let (lhs, rhs) = match self {
            RibbonVerdict::Abelian { phi_uv, phi_vu, .. } => {
                (phi_uv.canonical_string(), phi_vu.canonical_string())
            }
            RibbonVerdict::Full { word, word_hat, .. } => {
                (word.to_string(), word_hat.to_string())
            }
        };
        VerdictReport {
            obstruction: self.obstruction(),
            passed: self.passed(),
            lhs,
            rhs,
        }
    }
}

impl fmt::Display for RibbonVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RibbonVerdict::Abelian { passed: true, .. } => {
                write!(f, "PASS (abelian): phi(u,v) = phi(v,u)")
            }
            RibbonVerdict::Abelian { passed: false, .. } => {
                write!(f, "FAIL (abelian): phi(u,v) != phi(v,u)")
            }
            RibbonVerdict::Full { passed: true, .. } => {
                write!(f, "PASS (full): Phi(alpha) = Phi(alpha-hat)")
            }
            RibbonVerdict::Full { passed: false, .. } => {
                write!(f, "FAIL (full): Phi(alpha) != Phi(alpha-hat)")
            }
        }
    }
}

/// Machine-readable verdict.
#[derive(Serialize, Debug, Clone)]
pub struct VerdictReport {
    pub obstruction: &'static str,
    pub passed: bool,
    pub lhs: String,
    pub rhs: String,
}

/// Necessary condition: a ribbon string's polynomial is symmetric in `u, v`.
pub fn ribbon_obstruction_abelian(diagram: &GaussDiagram) -> RibbonVerdict {
    let phi_uv = phi_poly(diagram);
    let phi_vu = phi_uv.swap_uv().expect(DIM2);
    RibbonVerdict::Abelian {
        passed: phi_uv == phi_vu,
        phi_uv,
        phi_vu,
    }
}

/// Necessary condition: a ribbon string's invariant agrees with that of its
/// reflected, direction-reversed diagram.
pub fn ribbon_obstruction_full(diagram: &GaussDiagram) -> RibbonVerdict {
    let word = phi(diagram).into_word();
    let word_hat = phi(&diagram.hat()).into_word();
    RibbonVerdict::Full {
        passed: word == word_hat,
        word,
        word_hat,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(code: &str) -> GaussDiagram {
        code.parse().unwrap()
    }

    fn w(text: &str) -> Word {
        text.parse().unwrap()
    }

    fn p(text: &str) -> LaurentPolynomial {
        LaurentPolynomial::parse(text).unwrap()
    }

    #[test]
    fn golden_five_letter_words() {
        assert_eq!(
            phi(&d("1>3,2>4")).to_string(),
            "A[-1,-2] A[-2,-1] a[-2,-2] a[-1,0] a[0,-1]"
        );
        assert_eq!(
            phi(&d("3>1,4>2")).to_string(),
            "a[0,1] a[1,0] a[2,2] A[2,1] A[1,2]"
        );
    }

    #[test]
    fn golden_seven_letter_word() {
        assert_eq!(
            phi(&d("6>1,4>2,5>3")).to_string(),
            "a[0,0] a[1,2] a[2,1] a[3,3] A[3,2] A[2,3] A[1,1]"
        );
    }

    #[test]
    fn trivial_cases_give_identity() {
        for code in ["", "1>2", "1>3,4>2", "1>4,3>2"] {
            assert_eq!(phi(&d(code)), StringInvariant::identity(), "{code}");
        }
    }

    #[test]
    fn compose_matches_concatenation() {
        let a = d("1>3,2>4");
        let b = d("3>1,4>2");
        assert_eq!(compose(&phi(&a), &StringInvariant::identity()), phi(&a));
        assert_eq!(compose(&phi(&a), &phi(&b)), phi(&a.concat(&b)));
        assert_ne!(
            compose(&phi(&a), &phi(&b)),
            compose(&phi(&b), &phi(&a)),
            "these two strings do not commute"
        );
    }

    #[test]
    fn commute_check_examples() {
        let a = d("1>3,2>4");
        let b = d("3>1,4>2");
        let c = d("6>1,4>2,5>3");
        assert!(!commute_check(&a, &b).commute);
        assert!(!commute_check(&b, &c).commute);
        assert!(commute_check(&a, &GaussDiagram::empty()).commute);
    }

    #[test]
    fn phi_poly_goldens() {
        assert_eq!(
            phi_poly(&d("3>1,4>2")),
            p("u + v - u^2*v - u*v^2 + u^2*v^2")
        );
        // sum of the five path products; the unit evaluations pin it down
        assert_eq!(
            phi_poly(&d("3>1,5>2,4>6")),
            p("u*v^2 - v^2 - u - v + u^-1*v + v^-1 + 2 - u^-1*v^-1")
        );
        assert!(phi_poly(&GaussDiagram::empty()).is_one());
        assert_eq!(
            phi_poly(&d("5>1,4>2,6>3")),
            p("-u*v^3 - u^3*v^2 + u^3*v^3 + u + v^2")
        );
    }

    #[test]
    fn phi_poly_matches_abelianized_word() {
        for code in ["", "1>2", "1>3,2>4", "3>1,4>2", "3>1,5>2,4>6", "6>1,4>2,5>3"] {
            let diagram = d(code);
            assert_eq!(phi_poly(&diagram), phi(&diagram).word().abelianize());
        }
    }

    #[test]
    fn five_paths_with_printed_products() {
        let paths = enumerate_paths(&d("3>1,5>2,4>6"));
        assert_eq!(paths.len(), 5);
        let expected = [
            p("u*v"),                       // v v u v^-1 u u^-1
            p("v^-1 - u"),                  // (1-uv) v^-1 u u^-1
            p("u^-1*v - v^2"),              // v (1-uv) u^-1
            p("u*v^2 - v"),                 // v v u (1-u^-1*v^-1)
            p("2 - u*v - u^-1*v^-1"),       // (1-uv)(1-u^-1*v^-1)
        ];
        for product in &expected {
            assert!(paths.contains(product), "missing {product}");
        }
        let total = paths
            .iter()
            .fold(LaurentPolynomial::zero(), |acc, q| acc.add(q).unwrap());
        assert_eq!(total, phi_poly(&d("3>1,5>2,4>6")));
    }

    #[test]
    fn normal_form_examples() {
        let nf = normal_form(&phi(&d("1>3,2>4"))).unwrap();
        assert_eq!(nf.prefix, w("A[-1,-2] A[-2,-1]"));
        assert_eq!(nf.omega, 2);
        let nf = normal_form(&phi(&d("3>1,4>2"))).unwrap();
        assert_eq!(nf.prefix, w("a[0,1] a[1,0]"));
        assert_eq!(nf.omega, -2);
        let nf = normal_form(&StringInvariant::identity()).unwrap();
        assert!(nf.prefix.is_empty());
        assert_eq!(nf.omega, 0);
    }

    #[test]
    fn unreduced_sweep_carries_writhe() {
        // reduction absorbs the kink's middle letter: the reduced word is the
        // bare generator (omega 0) while the raw letters still show the
        // writhe in the middle exponent
        let kink = d("2>1");
        assert_eq!(phi(&kink), StringInvariant::identity());
        assert_eq!(normal_form(&phi(&kink)).unwrap().omega, 0);
        assert_eq!(kink.writhe(), -1);
        let raw = phi_unreduced(&kink);
        assert_eq!(raw.len(), 3);
        assert_eq!(raw[1].index, crate::words::ExponentIndex::pair(1, 1));
        // on cancellation-free diagrams the raw letters equal the word
        let raw = phi_unreduced(&d("1>3,2>4"));
        assert_eq!(
            crate::words::Word::from_letters(raw).unwrap(),
            phi(&d("1>3,2>4")).into_word()
        );
    }

    #[test]
    fn normal_form_rejects_malformed_words() {
        let bogus = StringInvariant {
            word: w("a[1,0] a[0,1]"),
        };
        assert!(normal_form(&bogus).is_err());
        let bogus = StringInvariant { word: w("a[1,2]") };
        assert!(normal_form(&bogus).is_err());
    }

    #[test]
    fn ribbon_obstructions() {
        let symmetric = d("3>1,4>2");
        assert!(ribbon_obstruction_abelian(&symmetric).passed());
        assert!(ribbon_obstruction_full(&symmetric).passed());

        let asymmetric = d("3>1,5>2,4>6");
        let verdict = ribbon_obstruction_abelian(&asymmetric);
        assert!(!verdict.passed());
        assert_eq!(
            verdict.to_string(),
            "FAIL (abelian): phi(u,v) != phi(v,u)"
        );
        assert!(!ribbon_obstruction_full(&asymmetric).passed());

        assert!(ribbon_obstruction_abelian(&GaussDiagram::empty()).passed());
        assert!(ribbon_obstruction_full(&GaussDiagram::empty()).passed());
    }

    #[test]
    fn squared_reflection_product_is_not_ribbon() {
        // beta = alpha · alpha* for the three-crossing string with polynomial
        // -u*v^3 - u^3*v^2 + u^3*v^3 + u + v^2
        let alpha = d("5>1,4>2,6>3");
        let beta = alpha.concat(&alpha.star());
        let poly = phi_poly(&beta);
        // multiplicativity: phi(beta) = phi(alpha)(u,v) * phi(alpha)(u^-1,v^-1)
        let inverted = phi_poly(&alpha)
            .eval_monomial_map(&[
                crate::laurent::SignedMonomial::variable_inverse(2, 0),
                crate::laurent::SignedMonomial::variable_inverse(2, 1),
            ])
            .unwrap();
        assert_eq!(poly, phi_poly(&alpha).mul(&inverted).unwrap());
        assert_ne!(poly, poly.swap_uv().unwrap(), "asymmetric, so not ribbon");
        assert!(!ribbon_obstruction_abelian(&beta).passed());
    }

    #[test]
    fn verdict_report_shape() {
        let verdict = ribbon_obstruction_abelian(&d("3>1,5>2,4>6"));
        let json = serde_json::to_value(verdict.report()).unwrap();
        assert_eq!(json["obstruction"], "abelian");
        assert_eq!(json["passed"], false);
        assert!(json["lhs"].as_str().unwrap().contains("u*v^2"));
    }
}
