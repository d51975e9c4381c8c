//! Gauss diagrams of open virtual strings.
//!
//! An open string with `m` uncircled double points is recorded as an oriented
//! line carrying positions `1..2m`, paired into `m` directed arrows
//! `(tail, head)`. Circled (virtual) double points are not recorded. Arrows
//! are kept sorted by their smaller endpoint so structural equality is
//! canonical.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GaussError {
    #[error("malformed token `{token}` at entry {entry}: expected `s>t` with integer positions")]
    MalformedToken { token: String, entry: usize },
    #[error("duplicate position {position} in token `{token}`")]
    DuplicatePosition { position: usize, token: String },
    #[error("position {position} out of range 1..{max} in token `{token}`")]
    PositionOutOfRange {
        position: usize,
        max: usize,
        token: String,
    },
    #[error("arrow `{token}` has equal tail and head")]
    TailEqualsHead { token: String },
}

/// A directed arrow: the strand near `tail` crosses the strand near `head`
/// from left to right.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Arrow {
    pub tail: usize,
    pub head: usize,
}

impl Arrow {
    /// Endpoint met first along the line; the descending resolution puts the
    /// first-traversed strand on top, so this is the over endpoint.
    pub fn over(&self) -> usize {
        self.tail.min(self.head)
    }

    pub fn under(&self) -> usize {
        self.tail.max(self.head)
    }

    /// Crossing sign of the descending resolution: positive exactly when the
    /// first-met endpoint is the tail.
    pub fn is_positive(&self) -> bool {
        self.tail < self.head
    }

    pub fn sign(&self) -> i64 {
        if self.is_positive() {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}>{}", self.tail, self.head)
    }
}

/// Validated Gauss diagram with arrows in canonical order.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GaussDiagram {
    arrows: Vec<Arrow>,
}

/// Role of one position during the left-to-right sweep.
#[derive(Clone, Copy, Debug)]
pub(crate) struct EndpointRole {
    pub arrow: usize,
    pub over: bool,
    pub positive: bool,
}

impl GaussDiagram {
    pub fn empty() -> Self {
        GaussDiagram::default()
    }

    /// Validates endpoint coverage and canonicalizes arrow order.
    pub fn new(arrows: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GaussError> {
        let raw: Vec<(usize, usize)> = arrows.into_iter().collect();
        let tokens: Vec<String> = raw.iter().map(|(s, t)| format!("{s}>{t}")).collect();
        Self::build(raw, &tokens)
    }

    fn build(raw: Vec<(usize, usize)>, tokens: &[String]) -> Result<Self, GaussError> {
        let m = raw.len();
        let max = 2 * m;
        let mut seen = vec![false; max + 1];
        for (i, &(tail, head)) in raw.iter().enumerate() {
            let token = tokens[i].clone();
            if tail == head {
                return Err(GaussError::TailEqualsHead { token });
            }
            for position in [tail, head] {
                if position == 0 || position > max {
                    return Err(GaussError::PositionOutOfRange {
                        position,
                        max,
                        token,
                    });
                }
                if seen[position] {
                    return Err(GaussError::DuplicatePosition { position, token });
                }
                seen[position] = true;
            }
        }
        let mut arrows: Vec<Arrow> = raw
            .into_iter()
            .map(|(tail, head)| Arrow { tail, head })
            .collect();
        arrows.sort_by_key(Arrow::over);
        Ok(GaussDiagram { arrows })
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    /// Per-position sweep roles, indexed by `position - 1`.
    pub(crate) fn roles(&self) -> Vec<EndpointRole> {
        let mut roles = vec![
            EndpointRole {
                arrow: 0,
                over: false,
                positive: false
            };
            2 * self.arrow_count()
        ];
        for (idx, arrow) in self.arrows.iter().enumerate() {
            let positive = arrow.is_positive();
            roles[arrow.over() - 1] = EndpointRole {
                arrow: idx,
                over: true,
                positive,
            };
            roles[arrow.under() - 1] = EndpointRole {
                arrow: idx,
                over: false,
                positive,
            };
        }
        roles
    }

    /// Concatenation: `other` is appended with its positions shifted past
    /// this diagram's. The empty diagram is the identity.
    pub fn concat(&self, other: &GaussDiagram) -> GaussDiagram {
        let offset = 2 * self.arrow_count();
        let mut arrows = self.arrows.clone();
        arrows.extend(other.arrows.iter().map(|a| Arrow {
            tail: a.tail + offset,
            head: a.head + offset,
        }));
        // canonical order is preserved by the shift
        GaussDiagram { arrows }
    }

    /// Reverses every arrow; corresponds to reflecting the string about a
    /// horizontal line.
    pub fn star(&self) -> GaussDiagram {
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow {
                tail: a.head,
                head: a.tail,
            })
            .collect();
        GaussDiagram { arrows }
    }

    /// Reflects about the vertical axis and reverses every arrow:
    /// `(s, t) -> (2m+1-t, 2m+1-s)`.
    pub fn hat(&self) -> GaussDiagram {
        let n = 2 * self.arrow_count() + 1;
        let mut arrows: Vec<Arrow> = self
            .arrows
            .iter()
            .map(|a| Arrow {
                tail: n - a.head,
                head: n - a.tail,
            })
            .collect();
        arrows.sort_by_key(Arrow::over);
        GaussDiagram { arrows }
    }

    /// True when central reflection with all arrow directions reversed maps
    /// the arrow set to itself, i.e. `d == d.hat()`.
    pub fn is_ribbon_presentation(&self) -> bool {
        *self == self.hat()
    }

    /// Sum of crossing signs of the descending resolution.
    pub fn writhe(&self) -> i64 {
        self.arrows.iter().map(Arrow::sign).sum()
    }

    /// Uniformly random pairing of `1..2m` into directed arrows,
    /// deterministic per seed.
    pub fn random(m: usize, seed: u64) -> GaussDiagram {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut positions: Vec<usize> = (1..=2 * m).collect();
        positions.shuffle(&mut rng);
        let arrows = (0..m).map(|i| (positions[2 * i], positions[2 * i + 1]));
        GaussDiagram::new(arrows).expect("shuffled positions form a valid pairing")
    }

    pub fn export(&self) -> DiagramExport {
        DiagramExport {
            m: self.arrow_count(),
            arrows: self.arrows.iter().map(|a| [a.tail, a.head]).collect(),
        }
    }
}

/// Machine-readable form: `{"m": .., "arrows": [[tail, head], ..]}`.
#[derive(Serialize, Debug, Clone)]
pub struct DiagramExport {
    pub m: usize,
    pub arrows: Vec<[usize; 2]>,
}

impl fmt::Display for GaussDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, arrow) in self.arrows.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{arrow}")?;
        }
        Ok(())
    }
}

impl FromStr for GaussDiagram {
    type Err = GaussError;

    /// Parses comma-separated `s>t` tokens; the empty string is the trivial
    /// diagram. Positions must already be exactly `1..2m`.
    fn from_str(text: &str) -> Result<Self, GaussError> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(GaussDiagram::empty());
        }
        let mut raw = Vec::new();
        let mut tokens = Vec::new();
        for (entry, token) in text.split(',').enumerate() {
            let trimmed = token.trim();
            let malformed = || GaussError::MalformedToken {
                token: trimmed.to_string(),
                entry,
            };
            let (s, t) = trimmed.split_once('>').ok_or_else(malformed)?;
            let tail: usize = s.trim().parse().map_err(|_| malformed())?;
            let head: usize = t.trim().parse().map_err(|_| malformed())?;
            raw.push((tail, head));
            tokens.push(trimmed.to_string());
        }
        GaussDiagram::build(raw, &tokens)
    }
}
