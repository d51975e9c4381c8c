//! Colored open `n`-strings: diagrams on `n` ordered lines and their
//! `Z^{n+1}`-indexed invariant.
//!
//! Each line carries numbered endpoint slots; arrows pair slots, possibly
//! across lines. The left end of the line colored `c` seeds the generator
//! `a_c`, indices live in `Z^{n+1}` with one `u` variable per color and a
//! single final `v`. Traversal for the descending resolution runs through
//! components in color order, so concatenation (which matches colors at the
//! junction heights) restricts to the factors' own traversals and the
//! invariant composes.
//!
//! At a crossing whose over strand has color `j` and under strand color `i`,
//! the under-side rules acquire a third twist absent from the single-string
//! case: positive gives `(B^{u_j^{-1}v^{-1}})^{-1} · A^{u_j^{-1}} ·
//! B^{u_i u_j^{-1}}`, negative gives `B · A^{u_j} · (B^{u_i v})^{-1}`. For
//! `i = j` these collapse to the single-string rules. The convention is kept
//! in one rule table ([`under_rule`]) and is pinned empirically by the `n=1`
//! specialization, move invariance and the composition law.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::gauss::GaussDiagram;
use crate::moves::h3_config_sound;
use crate::words::{ExponentIndex, Generator, Sign, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MultiError {
    #[error("line count must be at least 1")]
    NoLines,
    #[error("colors {0:?} are not a permutation of 1..=n")]
    BadColors(Vec<u32>),
    #[error("permutation {0:?} is not a bijection of 1..=n")]
    BadPermutation(Vec<usize>),
    #[error("endpoint {0} references a line outside 1..=n")]
    LineOutOfRange(EndpointRef),
    #[error("slot {0} used twice")]
    DuplicateSlot(EndpointRef),
    #[error("line {line} uses slots up to {max} but slot {missing} is absent")]
    SlotGap {
        line: usize,
        max: usize,
        missing: usize,
    },
    #[error("arrow joins an endpoint to itself at {0}")]
    DegenerateArrow(EndpointRef),
    #[error("color mismatch at height {height}: {left} arrives but {right} continues")]
    ColorMismatch {
        height: usize,
        left: u32,
        right: u32,
    },
    #[error("line counts differ: {left} vs {right}")]
    LineCountMismatch { left: usize, right: usize },
    #[error("malformed colored Gauss code near `{0}`")]
    Parse(String),
    #[error("colored move not applicable: {0}")]
    MoveNotApplicable(String),
}

/// One endpoint slot: line and slot are both 1-based.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub struct EndpointRef {
    pub line: usize,
    pub slot: usize,
}

impl fmt::Display for EndpointRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{}.{}", self.line, self.slot)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct ColoredArrow {
    pub tail: EndpointRef,
    pub head: EndpointRef,
}

impl fmt::Display for ColoredArrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}>{}", self.tail, self.head)
    }
}

/// A diagram of a colored open `n`-string.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ColoredGaussDiagram {
    colors: Vec<u32>,
    permutation: Vec<usize>,
    slots: Vec<usize>,
    arrows: Vec<ColoredArrow>,
}

impl ColoredGaussDiagram {
    /// `colors[i]` is the color of line `i+1`; `permutation[i]` the right
    /// height where line `i+1` exits; arrows pair slots exactly once each.
    pub fn new(
        colors: Vec<u32>,
        permutation: Vec<usize>,
        arrows: Vec<(EndpointRef, EndpointRef)>,
    ) -> Result<Self, MultiError> {
        let n = colors.len();
        if n == 0 {
            return Err(MultiError::NoLines);
        }
        let mut seen_color = vec![false; n + 1];
        for &c in &colors {
            if c == 0 || c as usize > n || seen_color[c as usize] {
                return Err(MultiError::BadColors(colors.clone()));
            }
            seen_color[c as usize] = true;
        }
        if permutation.len() != n {
            return Err(MultiError::BadPermutation(permutation.clone()));
        }
        let mut seen_height = vec![false; n + 1];
        for &h in &permutation {
            if h == 0 || h > n || seen_height[h] {
                return Err(MultiError::BadPermutation(permutation.clone()));
            }
            seen_height[h] = true;
        }
        let mut per_line: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(tail, head) in &arrows {
            if tail == head {
                return Err(MultiError::DegenerateArrow(tail));
            }
            for e in [tail, head] {
                if e.line == 0 || e.line > n || e.slot == 0 {
                    return Err(MultiError::LineOutOfRange(e));
                }
                per_line[e.line - 1].push(e.slot);
            }
        }
        let mut slots = vec![0usize; n];
        for (line0, used) in per_line.iter_mut().enumerate() {
            used.sort();
            for (i, &s) in used.iter().enumerate() {
                if s == i + 1 {
                    continue;
                }
                let e = EndpointRef {
                    line: line0 + 1,
                    slot: s,
                };
                if s == i {
                    return Err(MultiError::DuplicateSlot(e));
                }
                return Err(MultiError::SlotGap {
                    line: line0 + 1,
                    max: s,
                    missing: i + 1,
                });
            }
            slots[line0] = used.len();
        }
        let mut arrows: Vec<ColoredArrow> = arrows
            .into_iter()
            .map(|(tail, head)| ColoredArrow { tail, head })
            .collect();
        arrows.sort_by_key(|a| a.tail.min(a.head));
        Ok(ColoredGaussDiagram {
            colors,
            permutation,
            slots,
            arrows,
        })
    }

    /// The crossing-free identity diagram on `n` lines colored in order.
    pub fn trivial(n: usize) -> Self {
        ColoredGaussDiagram::new(
            (1..=n as u32).collect(),
            (1..=n).collect(),
            Vec::new(),
        )
        .expect("trivial diagram is valid")
    }

    /// Views a single-string diagram as a one-line colored diagram.
    pub fn from_single(diagram: &GaussDiagram) -> Self {
        let arrows = diagram
            .arrows()
            .iter()
            .map(|a| {
                (
                    EndpointRef {
                        line: 1,
                        slot: a.tail,
                    },
                    EndpointRef {
                        line: 1,
                        slot: a.head,
                    },
                )
            })
            .collect();
        ColoredGaussDiagram::new(vec![1], vec![1], arrows).expect("single-line view is valid")
    }

    pub fn line_count(&self) -> usize {
        self.colors.len()
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn arrows(&self) -> &[ColoredArrow] {
        &self.arrows
    }

    pub fn slots(&self) -> &[usize] {
        &self.slots
    }

    fn color_of_line(&self, line: usize) -> u32 {
        self.colors[line - 1]
    }

    /// Lines in traversal order: ascending color.
    fn line_order(&self) -> Vec<usize> {
        let mut lines: Vec<usize> = (1..=self.line_count()).collect();
        lines.sort_by_key(|&l| self.color_of_line(l));
        lines
    }

    /// Global traversal rank of each endpoint (color order, then slot).
    pub(crate) fn ranks(&self) -> Vec<Vec<usize>> {
        let mut ranks: Vec<Vec<usize>> = self.slots.iter().map(|&s| vec![0; s + 1]).collect();
        let mut counter = 0;
        for line in self.line_order() {
            for slot in 1..=self.slots[line - 1] {
                ranks[line - 1][slot] = counter;
                counter += 1;
            }
        }
        ranks
    }

    /// Concatenation: joins this diagram's right ends to `other`'s left ends
    /// height by height. Colors must match at every junction.
    pub fn concat(&self, other: &ColoredGaussDiagram) -> Result<Self, MultiError> {
        let n = self.line_count();
        if other.line_count() != n {
            return Err(MultiError::LineCountMismatch {
                left: n,
                right: other.line_count(),
            });
        }
        let mut into = vec![0usize; n + 1]; // height -> line of self exiting there
        for (line0, &h) in self.permutation.iter().enumerate() {
            into[h] = line0 + 1;
        }
        for height in 1..=n {
            let left = self.color_of_line(into[height]);
            let right = other.color_of_line(height);
            if left != right {
                return Err(MultiError::ColorMismatch {
                    height,
                    left,
                    right,
                });
            }
        }
        let remap = |e: EndpointRef| -> EndpointRef {
            let line = into[e.line];
            EndpointRef {
                line,
                slot: e.slot + self.slots[line - 1],
            }
        };
        let mut arrows: Vec<(EndpointRef, EndpointRef)> = self
            .arrows
            .iter()
            .map(|a| (a.tail, a.head))
            .collect();
        arrows.extend(other.arrows.iter().map(|a| (remap(a.tail), remap(a.head))));
        let permutation = (0..n)
            .map(|i| other.permutation[self.permutation[i] - 1])
            .collect();
        ColoredGaussDiagram::new(self.colors.clone(), permutation, arrows)
    }

    /// Random colored diagram: shuffled colors and permutation, endpoints
    /// scattered over lines, paired with random directions. Deterministic
    /// per seed.
    pub fn random(n: usize, m: usize, seed: u64) -> Self {
        use rand::seq::SliceRandom;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut colors: Vec<u32> = (1..=n as u32).collect();
        colors.shuffle(&mut rng);
        let mut permutation: Vec<usize> = (1..=n).collect();
        permutation.shuffle(&mut rng);
        let mut counts = vec![0usize; n];
        let mut endpoints = Vec::with_capacity(2 * m);
        for _ in 0..2 * m {
            let line = rng.random_range(1..=n);
            counts[line - 1] += 1;
            endpoints.push(EndpointRef {
                line,
                slot: counts[line - 1],
            });
        }
        endpoints.shuffle(&mut rng);
        let arrows = (0..m)
            .map(|i| (endpoints[2 * i], endpoints[2 * i + 1]))
            .collect();
        ColoredGaussDiagram::new(colors, permutation, arrows)
            .expect("random construction is valid")
    }
}

impl fmt::Display for ColoredGaussDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[String]| xs.join(",");
        write!(
            f,
            "n={}; colors={}; perm={};",
            self.line_count(),
            join(&self.colors.iter().map(|c| c.to_string()).collect::<Vec<_>>()),
            join(
                &self
                    .permutation
                    .iter()
                    .map(|p| p.to_string())
                    .collect::<Vec<_>>()
            ),
        )?;
        for (i, arrow) in self.arrows.iter().enumerate() {
            if i == 0 {
                write!(f, " {arrow}")?;
            } else {
                write!(f, ", {arrow}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for ColoredGaussDiagram {
    type Err = MultiError;

    /// Parses `n=<k>; colors=<c1,..>; perm=<p1,..>; L<i>.<s>>L<j>.<t>, ..`.
    fn from_str(text: &str) -> Result<Self, MultiError> {
        let bad = |s: &str| MultiError::Parse(s.to_string());
        let mut sections = text.split(';').map(str::trim);
        let n_part = sections.next().ok_or_else(|| bad(text))?;
        let n: usize = n_part
            .strip_prefix("n=")
            .ok_or_else(|| bad(n_part))?
            .trim()
            .parse()
            .map_err(|_| bad(n_part))?;
        let colors_part = sections.next().ok_or_else(|| bad(text))?;
        let colors = parse_list::<u32>(colors_part.strip_prefix("colors=").ok_or_else(|| bad(colors_part))?)
            .ok_or_else(|| bad(colors_part))?;
        let perm_part = sections.next().ok_or_else(|| bad(text))?;
        let permutation =
            parse_list::<usize>(perm_part.strip_prefix("perm=").ok_or_else(|| bad(perm_part))?)
                .ok_or_else(|| bad(perm_part))?;
        if colors.len() != n || permutation.len() != n {
            return Err(bad(text));
        }
        let mut arrows = Vec::new();
        for section in sections {
            if section.is_empty() {
                continue;
            }
            for token in section.split(',') {
                let token = token.trim();
                if token.is_empty() {
                    continue;
                }
                let (lhs, rhs) = token.split_once('>').ok_or_else(|| bad(token))?;
                arrows.push((parse_endpoint(lhs)?, parse_endpoint(rhs)?));
            }
        }
        ColoredGaussDiagram::new(colors, permutation, arrows)
    }
}

fn parse_list<T: FromStr>(text: &str) -> Option<Vec<T>> {
    text.split(',')
        .map(|part| part.trim().parse().ok())
        .collect()
}

fn parse_endpoint(text: &str) -> Result<EndpointRef, MultiError> {
    let bad = || MultiError::Parse(text.to_string());
    let rest = text.trim().strip_prefix('L').ok_or_else(bad)?;
    let (line, slot) = rest.split_once('.').ok_or_else(bad)?;
    Ok(EndpointRef {
        line: line.trim().parse().map_err(|_| bad())?,
        slot: slot.trim().parse().map_err(|_| bad())?,
    })
}

/// Invariant of a colored `n`-string: the endpoint permutation and, per line,
/// the image of that line's right end generator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiInvariant {
    pub permutation: Vec<usize>,
    pub words: Vec<Word>,
}

impl MultiInvariant {
    /// Invariant of the trivial `n`-string with the given colors.
    pub fn identity(colors: &[u32]) -> Self {
        let n = colors.len();
        MultiInvariant {
            permutation: (1..=n).collect(),
            words: colors
                .iter()
                .map(|&c| Word::generator(Generator(c), n + 1))
                .collect(),
        }
    }
}

const DIMN: &str = "sweep maintains dimension n+1 words";

/// The Figure-style crossing rule table, isolated so the variable convention
/// lives in exactly one place. `over_color`/`under_color` are the colors of
/// the strands through the over and under endpoints.
fn under_rule(
    incoming: &Word,
    entering_over: &Word,
    positive: bool,
    over_color: u32,
    under_color: u32,
    dim: usize,
) -> Word {
    let e_v = ExponentIndex::unit(dim, dim - 1);
    let e_over = ExponentIndex::unit(dim, over_color as usize - 1);
    let e_under = ExponentIndex::unit(dim, under_color as usize - 1);
    let b = entering_over;
    if positive {
        let left = b
            .shift(&e_over.translated(&e_v).expect(DIMN).negated())
            .expect(DIMN)
            .invert();
        let mid = incoming.shift(&e_over.negated()).expect(DIMN);
        let right = b
            .shift(&e_under.translated(&e_over.negated()).expect(DIMN))
            .expect(DIMN);
        left.multiply(&mid)
            .and_then(|w| w.multiply(&right))
            .expect(DIMN)
    } else {
        let mid = incoming.shift(&e_over).expect(DIMN);
        let right = b
            .shift(&e_under.translated(&e_v).expect(DIMN))
            .expect(DIMN)
            .invert();
        b.multiply(&mid)
            .and_then(|w| w.multiply(&right))
            .expect(DIMN)
    }
}

/// Sweep computing the colored invariant: components are traversed in color
/// order, the earlier-met endpoint of each arrow goes over.
pub fn phi_multi(diagram: &ColoredGaussDiagram) -> MultiInvariant {
    let n = diagram.line_count();
    let dim = n + 1;
    let ranks = diagram.ranks();
    let rank = |e: EndpointRef| ranks[e.line - 1][e.slot];
    // role per endpoint, addressed by (line-1, slot)
    #[derive(Clone, Copy)]
    struct Role {
        arrow: usize,
        over: bool,
        positive: bool,
    }
    let mut roles: Vec<Vec<Option<Role>>> = diagram
        .slots()
        .iter()
        .map(|&s| vec![None; s + 1])
        .collect();
    for (idx, arrow) in diagram.arrows().iter().enumerate() {
        let (over, under, positive) = if rank(arrow.tail) < rank(arrow.head) {
            (arrow.tail, arrow.head, true)
        } else {
            (arrow.head, arrow.tail, false)
        };
        roles[over.line - 1][over.slot] = Some(Role {
            arrow: idx,
            over: true,
            positive,
        });
        roles[under.line - 1][under.slot] = Some(Role {
            arrow: idx,
            over: false,
            positive,
        });
    }
    let mut current: Vec<Word> = (1..=n)
        .map(|l| Word::generator(Generator(diagram.color_of_line(l)), dim))
        .collect();
    let mut entering_over: Vec<Option<(Word, u32)>> = vec![None; diagram.arrows().len()];
    let e_v = ExponentIndex::unit(dim, dim - 1);
    for line in diagram.line_order() {
        for slot in 1..=diagram.slots()[line - 1] {
            let role = roles[line - 1][slot].expect("every slot is an endpoint");
            let line_color = diagram.color_of_line(line);
            if role.over {
                entering_over[role.arrow] = Some((current[line - 1].clone(), line_color));
                let delta = if role.positive {
                    e_v.negated()
                } else {
                    e_v.clone()
                };
                current[line - 1] = current[line - 1].shift(&delta).expect(DIMN);
            } else {
                let (b, over_color) = entering_over[role.arrow]
                    .as_ref()
                    .expect("over endpoint precedes under endpoint");
                current[line - 1] = under_rule(
                    &current[line - 1],
                    b,
                    role.positive,
                    *over_color,
                    line_color,
                    dim,
                );
            }
        }
    }
    MultiInvariant {
        permutation: diagram.permutation().to_vec(),
        words: current,
    }
}

/// Composes invariants of concatenable colored strings: substitutes `left`'s
/// output words for the end generators in `right`'s words and composes the
/// permutations. Colors must agree at every junction height.
pub fn compose_multi(
    left: &MultiInvariant,
    right: &MultiInvariant,
    left_colors: &[u32],
    right_colors: &[u32],
) -> Result<MultiInvariant, MultiError> {
    let n = left.permutation.len();
    if right.permutation.len() != n || left_colors.len() != n || right_colors.len() != n {
        return Err(MultiError::LineCountMismatch {
            left: n,
            right: right.permutation.len(),
        });
    }
    let mut into = vec![0usize; n + 1];
    for (line0, &h) in left.permutation.iter().enumerate() {
        into[h] = line0 + 1;
    }
    for height in 1..=n {
        let arriving = left_colors[into[height] - 1];
        let continuing = right_colors[height - 1];
        if arriving != continuing {
            return Err(MultiError::ColorMismatch {
                height,
                left: arriving,
                right: continuing,
            });
        }
    }
    // left's output word per color
    let mut by_color: Vec<Option<&Word>> = vec![None; n + 1];
    for (line0, &c) in left_colors.iter().enumerate() {
        by_color[c as usize] = Some(&left.words[line0]);
    }
    let mut words = Vec::with_capacity(n);
    let mut permutation = Vec::with_capacity(n);
    for line0 in 0..n {
        let continues = left.permutation[line0];
        let template = &right.words[continues - 1];
        let mut acc = Word::empty();
        for letter in template.letters() {
            let source = by_color[letter.generator.0 as usize]
                .expect("every generator color names a component");
            let mut piece = source.shift(&letter.index).expect(DIMN);
            if letter.sign == Sign::Negative {
                piece = piece.invert();
            }
            acc = acc.multiply(&piece).expect(DIMN);
        }
        words.push(acc);
        permutation.push(right.permutation[continues - 1]);
    }
    Ok(MultiInvariant { permutation, words })
}

/// Homotopy moves lifted to colored diagrams. Pair sites are `(line, slot)`
/// blocks of consecutive slots on one line; H1 acts within a single line,
/// H2/H3 pairs may sit on distinct lines.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum ColoredMove {
    H1Delete {
        line: usize,
        slot: usize,
    },
    H1Insert {
        line: usize,
        gap: usize,
        rightward: bool,
    },
    H2Delete {
        first: EndpointRef,
        second: EndpointRef,
    },
    H2Insert {
        first_line: usize,
        first_gap: usize,
        second_line: usize,
        second_gap: usize,
        x_at_start: bool,
        x_to_start: bool,
    },
    H3Slide {
        pairs: [EndpointRef; 3],
    },
}

/// All applicable colored deletions and slides, plus insertion sites.
pub fn enumerate_colored_moves(diagram: &ColoredGaussDiagram) -> Vec<ColoredMove> {
    let mut moves = Vec::new();
    let arrows = diagram.arrows();
    let ranks = diagram.ranks();
    let rank = |e: EndpointRef| ranks[e.line - 1][e.slot];

    for arrow in arrows {
        if arrow.tail.line == arrow.head.line
            && arrow.tail.slot.abs_diff(arrow.head.slot) == 1
        {
            moves.push(ColoredMove::H1Delete {
                line: arrow.tail.line,
                slot: arrow.tail.slot.min(arrow.head.slot),
            });
        }
    }

    let pair_block = |endpoints: &mut [EndpointRef]| -> Option<Vec<EndpointRef>> {
        // groups sorted endpoints into same-line adjacent pairs, returning
        // the pair starts
        endpoints.sort();
        let mut starts = Vec::new();
        for chunk in endpoints.chunks(2) {
            if chunk[0].line != chunk[1].line || chunk[1].slot != chunk[0].slot + 1 {
                return None;
            }
            starts.push(chunk[0]);
        }
        Some(starts)
    };

    for a in 0..arrows.len() {
        for b in a + 1..arrows.len() {
            let mut endpoints = [
                arrows[a].tail,
                arrows[a].head,
                arrows[b].tail,
                arrows[b].head,
            ];
            let Some(starts) = pair_block(&mut endpoints) else {
                continue;
            };
            let in_first = |e: EndpointRef| e.line == starts[0].line
                && (e.slot == starts[0].slot || e.slot == starts[0].slot + 1);
            // one endpoint of each arrow per pair, opposite senses
            if in_first(arrows[a].tail) == in_first(arrows[a].head) {
                continue;
            }
            if in_first(arrows[a].tail) == in_first(arrows[b].tail) {
                continue;
            }
            let mut ordered = [starts[0], starts[1]];
            ordered.sort_by_key(|&e| rank(e));
            moves.push(ColoredMove::H2Delete {
                first: ordered[0],
                second: ordered[1],
            });
        }
    }

    for a in 0..arrows.len() {
        for b in a + 1..arrows.len() {
            for c in b + 1..arrows.len() {
                let mut endpoints = [
                    arrows[a].tail,
                    arrows[a].head,
                    arrows[b].tail,
                    arrows[b].head,
                    arrows[c].tail,
                    arrows[c].head,
                ];
                let Some(starts) = pair_block(&mut endpoints) else {
                    continue;
                };
                let mut pairs: [EndpointRef; 3] = [starts[0], starts[1], starts[2]];
                pairs.sort_by_key(|&e| rank(e));
                if colored_h3_applicable(diagram, &pairs, [&arrows[a], &arrows[b], &arrows[c]]) {
                    moves.push(ColoredMove::H3Slide { pairs });
                }
            }
        }
    }

    for line in 1..=diagram.line_count() {
        for gap in 0..=diagram.slots()[line - 1] {
            for rightward in [true, false] {
                moves.push(ColoredMove::H1Insert {
                    line,
                    gap,
                    rightward,
                });
            }
        }
    }

    for first_line in 1..=diagram.line_count() {
        for second_line in first_line..=diagram.line_count() {
            for first_gap in 0..=diagram.slots()[first_line - 1] {
                let start = if first_line == second_line { first_gap } else { 0 };
                for second_gap in start..=diagram.slots()[second_line - 1] {
                    for x_at_start in [true, false] {
                        for x_to_start in [true, false] {
                            moves.push(ColoredMove::H2Insert {
                                first_line,
                                first_gap,
                                second_line,
                                second_gap,
                                x_at_start,
                                x_to_start,
                            });
                        }
                    }
                }
            }
        }
    }

    moves
}

fn colored_h3_applicable(
    diagram: &ColoredGaussDiagram,
    pairs: &[EndpointRef; 3],
    arrows: [&ColoredArrow; 3],
) -> bool {
    let ranks = diagram.ranks();
    let rank = |e: EndpointRef| ranks[e.line - 1][e.slot];
    let pair_of = |e: EndpointRef| -> Option<usize> {
        pairs.iter().position(|&p| {
            e.line == p.line && (e.slot == p.slot || e.slot == p.slot + 1)
        })
    };
    let mut x = None;
    let mut y = None;
    let mut z = None;
    for arrow in arrows {
        let (Some(p), Some(q)) = (pair_of(arrow.tail), pair_of(arrow.head)) else {
            return false;
        };
        let mut pq = [p, q];
        pq.sort();
        match pq {
            [0, 1] => x = Some(arrow),
            [0, 2] => y = Some(arrow),
            [1, 2] => z = Some(arrow),
            _ => return false,
        }
    }
    let (Some(x), Some(y), Some(z)) = (x, y, z) else {
        return false;
    };
    let over_of = |a: &ColoredArrow| -> EndpointRef {
        if rank(a.tail) < rank(a.head) {
            a.tail
        } else {
            a.head
        }
    };
    let under_of = |a: &ColoredArrow| -> EndpointRef {
        if rank(a.tail) < rank(a.head) {
            a.head
        } else {
            a.tail
        }
    };
    let at_second = |e: EndpointRef, pair: EndpointRef| e.slot == pair.slot + 1;
    let ob = [
        at_second(over_of(x), pairs[0]),
        at_second(under_of(x), pairs[1]),
        at_second(under_of(y), pairs[2]),
    ];
    let sb = [
        over_of(x) == x.tail,
        over_of(y) == y.tail,
        over_of(z) == z.tail,
    ];
    h3_config_sound(ob, sb)
}

/// Applies a colored move, renumbering slots per line.
pub fn apply_colored_move(
    diagram: &ColoredGaussDiagram,
    mv: &ColoredMove,
) -> Result<ColoredGaussDiagram, MultiError> {
    let arrows = diagram.arrows();
    match *mv {
        ColoredMove::H1Delete { line, slot } => {
            let keep: Vec<(EndpointRef, EndpointRef)> = arrows
                .iter()
                .filter(|a| {
                    !(a.tail.line == line
                        && a.head.line == line
                        && a.tail.slot.min(a.head.slot) == slot
                        && a.tail.slot.abs_diff(a.head.slot) == 1)
                })
                .map(|a| (a.tail, a.head))
                .collect();
            if keep.len() + 1 != arrows.len() {
                return Err(MultiError::MoveNotApplicable(format!(
                    "no kink at L{line}.{slot}"
                )));
            }
            renumbered_colored(diagram, keep)
        }
        ColoredMove::H1Insert {
            line,
            gap,
            rightward,
        } => {
            if line == 0 || line > diagram.line_count() || gap > diagram.slots()[line - 1] {
                return Err(MultiError::MoveNotApplicable(format!(
                    "no gap {gap} on line {line}"
                )));
            }
            let bump = |e: EndpointRef| -> EndpointRef {
                if e.line == line && e.slot > gap {
                    EndpointRef {
                        line: e.line,
                        slot: e.slot + 2,
                    }
                } else {
                    e
                }
            };
            let mut next: Vec<(EndpointRef, EndpointRef)> = arrows
                .iter()
                .map(|a| (bump(a.tail), bump(a.head)))
                .collect();
            let first = EndpointRef {
                line,
                slot: gap + 1,
            };
            let second = EndpointRef {
                line,
                slot: gap + 2,
            };
            next.push(if rightward {
                (first, second)
            } else {
                (second, first)
            });
            ColoredGaussDiagram::new(
                diagram.colors().to_vec(),
                diagram.permutation().to_vec(),
                next,
            )
        }
        ColoredMove::H2Delete { first, second } => {
            let in_site = |e: EndpointRef| -> bool {
                [first, second].iter().any(|&p| {
                    e.line == p.line && (e.slot == p.slot || e.slot == p.slot + 1)
                })
            };
            let (mut keep, mut dropped) = (Vec::new(), Vec::new());
            for a in arrows {
                if in_site(a.tail) || in_site(a.head) {
                    dropped.push(*a);
                } else {
                    keep.push((a.tail, a.head));
                }
            }
            let ok = dropped.len() == 2 && {
                let a = &dropped[0];
                let b = &dropped[1];
                let in_first = |e: EndpointRef| {
                    e.line == first.line && (e.slot == first.slot || e.slot == first.slot + 1)
                };
                let covers = [a.tail, a.head, b.tail, b.head]
                    .iter()
                    .all(|&e| in_site(e));
                covers
                    && in_first(a.tail) != in_first(a.head)
                    && in_first(a.tail) != in_first(b.tail)
            };
            if !ok {
                return Err(MultiError::MoveNotApplicable(format!(
                    "no cancelling pair at {first},{second}"
                )));
            }
            renumbered_colored(diagram, keep)
        }
        ColoredMove::H2Insert {
            first_line,
            first_gap,
            second_line,
            second_gap,
            x_at_start,
            x_to_start,
        } => {
            let n = diagram.line_count();
            if first_line == 0 || first_line > n || second_line == 0 || second_line > n {
                return Err(MultiError::MoveNotApplicable("line out of range".into()));
            }
            let same_line = first_line == second_line;
            if first_gap > diagram.slots()[first_line - 1]
                || second_gap > diagram.slots()[second_line - 1]
                || (same_line && first_gap > second_gap)
            {
                return Err(MultiError::MoveNotApplicable(format!(
                    "gaps ({first_gap},{second_gap}) unavailable"
                )));
            }
            let bump = |e: EndpointRef| -> EndpointRef {
                let mut slot = e.slot;
                if e.line == first_line && e.slot > first_gap {
                    slot += 2;
                }
                if e.line == second_line && e.slot > second_gap {
                    slot += 2;
                }
                EndpointRef { line: e.line, slot }
            };
            let mut next: Vec<(EndpointRef, EndpointRef)> = arrows
                .iter()
                .map(|a| (bump(a.tail), bump(a.head)))
                .collect();
            let second_base = if same_line { second_gap + 2 } else { second_gap };
            let p1 = |start: bool| EndpointRef {
                line: first_line,
                slot: first_gap + if start { 1 } else { 2 },
            };
            let p2 = |start: bool| EndpointRef {
                line: second_line,
                slot: second_base + if start { 1 } else { 2 },
            };
            next.push((p1(x_at_start), p2(x_to_start)));
            next.push((p2(!x_to_start), p1(!x_at_start)));
            ColoredGaussDiagram::new(
                diagram.colors().to_vec(),
                diagram.permutation().to_vec(),
                next,
            )
        }
        ColoredMove::H3Slide { pairs } => {
            let in_site = |e: EndpointRef| -> bool {
                pairs
                    .iter()
                    .any(|&p| e.line == p.line && (e.slot == p.slot || e.slot == p.slot + 1))
            };
            let triangle: Vec<&ColoredArrow> = arrows
                .iter()
                .filter(|a| in_site(a.tail) || in_site(a.head))
                .collect();
            let ok = triangle.len() == 3
                && colored_h3_applicable(diagram, &pairs, [triangle[0], triangle[1], triangle[2]]);
            if !ok {
                return Err(MultiError::MoveNotApplicable(format!(
                    "no slidable triangle at {},{},{}",
                    pairs[0], pairs[1], pairs[2]
                )));
            }
            let swap = |e: EndpointRef| -> EndpointRef {
                for p in pairs {
                    if e.line == p.line && e.slot == p.slot {
                        return EndpointRef {
                            line: e.line,
                            slot: p.slot + 1,
                        };
                    }
                    if e.line == p.line && e.slot == p.slot + 1 {
                        return EndpointRef {
                            line: e.line,
                            slot: p.slot,
                        };
                    }
                }
                e
            };
            let next = arrows.iter().map(|a| (swap(a.tail), swap(a.head))).collect();
            ColoredGaussDiagram::new(
                diagram.colors().to_vec(),
                diagram.permutation().to_vec(),
                next,
            )
        }
    }
}

fn renumbered_colored(
    diagram: &ColoredGaussDiagram,
    arrows: Vec<(EndpointRef, EndpointRef)>,
) -> Result<ColoredGaussDiagram, MultiError> {
    let n = diagram.line_count();
    let mut used: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(tail, head) in &arrows {
        used[tail.line - 1].push(tail.slot);
        used[head.line - 1].push(head.slot);
    }
    for slots in &mut used {
        slots.sort();
    }
    let remap = |e: EndpointRef| -> EndpointRef {
        let slot = used[e.line - 1]
            .binary_search(&e.slot)
            .expect("endpoint retained")
            + 1;
        EndpointRef { line: e.line, slot }
    };
    let renamed = arrows
        .into_iter()
        .map(|(tail, head)| (remap(tail), remap(head)))
        .collect();
    ColoredGaussDiagram::new(
        diagram.colors().to_vec(),
        diagram.permutation().to_vec(),
        renamed,
    )
}
