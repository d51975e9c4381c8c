//! Homotopy moves on Gauss diagrams.
//!
//! The flat Reidemeister moves act on diagrams as:
//!
//! * `H1` — insert or delete an arrow whose endpoints occupy adjacent
//!   positions.
//! * `H2` — insert or delete two arrows whose four endpoints occupy two
//!   disjoint adjacent position pairs, each arrow having one endpoint in each
//!   pair and the arrows pointing in opposite senses (one tail in the first
//!   pair, the other head there). Nested and crossed interleavings both occur.
//! * `H3` — slide three arrows whose six endpoints occupy three disjoint
//!   adjacent pairs, each arrow joining two distinct pairs, by swapping the
//!   two endpoints within every pair. Only direction configurations that are
//!   realizable as a planar triangle are slides; see [`h3_config_sound`].
//!
//! Virtual double points are absent from the diagram, so the virtual and
//! mixed moves are identities at this level and need no representation.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::gauss::{Arrow, GaussDiagram};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("move not applicable: {0}")]
    NotApplicable(String),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum MoveKind {
    H1,
    H2,
    H3,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum MoveAction {
    Insert,
    Delete,
    Slide,
}

/// One applicable homotopy move. Gaps refer to insertion points `0..=2m`
/// (after position `gap`); pair sites are named by their first position.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum HomotopyMove {
    H1Delete {
        pos: usize,
    },
    H1Insert {
        gap: usize,
        rightward: bool,
    },
    H2Delete {
        first: usize,
        second: usize,
    },
    /// Inserts a cancelling arrow pair: `x` runs from the first inserted pair
    /// to the second, `y` back. `x_at_start`/`x_to_start` choose the slot of
    /// `x` within each pair; the four combinations give the nested and
    /// crossed interleavings in both direction patterns.
    H2Insert {
        first_gap: usize,
        second_gap: usize,
        x_at_start: bool,
        x_to_start: bool,
    },
    H3Slide {
        first: usize,
        second: usize,
        third: usize,
    },
}

impl HomotopyMove {
    pub fn kind(&self) -> MoveKind {
        match self {
            HomotopyMove::H1Delete { .. } | HomotopyMove::H1Insert { .. } => MoveKind::H1,
            HomotopyMove::H2Delete { .. } | HomotopyMove::H2Insert { .. } => MoveKind::H2,
            HomotopyMove::H3Slide { .. } => MoveKind::H3,
        }
    }

    pub fn action(&self) -> MoveAction {
        match self {
            HomotopyMove::H1Delete { .. } | HomotopyMove::H2Delete { .. } => MoveAction::Delete,
            HomotopyMove::H1Insert { .. } | HomotopyMove::H2Insert { .. } => MoveAction::Insert,
            HomotopyMove::H3Slide { .. } => MoveAction::Slide,
        }
    }
}

impl fmt::Display for HomotopyMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            HomotopyMove::H1Delete { pos } => write!(f, "H1 delete at ({},{})", pos, pos + 1),
            HomotopyMove::H1Insert { gap, rightward } => {
                let (tail, head) = if rightward {
                    (gap + 1, gap + 2)
                } else {
                    (gap + 2, gap + 1)
                };
                write!(f, "H1 insert {tail}>{head}")
            }
            HomotopyMove::H2Delete { first, second } => write!(
                f,
                "H2 delete at ({},{}),({},{})",
                first,
                first + 1,
                second,
                second + 1
            ),
            HomotopyMove::H2Insert {
                first_gap,
                second_gap,
                x_at_start,
                x_to_start,
            } => {
                let (x, y) = h2_inserted_arrows(first_gap, second_gap, x_at_start, x_to_start);
                write!(f, "H2 insert {}>{},{}>{}", x.0, x.1, y.0, y.1)
            }
            HomotopyMove::H3Slide {
                first,
                second,
                third,
            } => write!(
                f,
                "H3 slide at ({},{}),({},{}),({},{})",
                first,
                first + 1,
                second,
                second + 1,
                third,
                third + 1
            ),
        }
    }
}

fn h2_inserted_arrows(
    first_gap: usize,
    second_gap: usize,
    x_at_start: bool,
    x_to_start: bool,
) -> ((usize, usize), (usize, usize)) {
    let x_tail = first_gap + if x_at_start { 1 } else { 2 };
    let y_head = first_gap + if x_at_start { 2 } else { 1 };
    let x_head = second_gap + if x_to_start { 3 } else { 4 };
    let y_tail = second_gap + if x_to_start { 4 } else { 3 };
    ((x_tail, x_head), (y_tail, y_head))
}

/// Whether a triangle of arrows admits the slide. The bits describe the site:
/// `ob[0]` — the pair1 endpoint of the arrow joining pairs 1,2 sits at the
/// second slot; `ob[1]` — its pair2 endpoint sits at the second slot;
/// `ob[2]` — the pair3 endpoint of the arrow joining pairs 1,3 sits at the
/// second slot. `sb` are the three crossing signs (pair1-2, pair1-3, pair2-3
/// arrows). Sound configurations are those arising from three directed lines
/// through a planar triangle, which forces the sign pattern
/// `sb = (s^ob0^ob1, s^ob0^ob2, s^ob1^ob2)` for some `s`.
pub(crate) fn h3_config_sound(ob: [bool; 3], sb: [bool; 3]) -> bool {
    (sb[0] ^ sb[1]) == (ob[1] ^ ob[2]) && (sb[0] ^ sb[2]) == (ob[0] ^ ob[2])
}

/// All applicable deletions and slides, plus every available insertion site.
pub fn enumerate_moves(diagram: &GaussDiagram) -> Vec<HomotopyMove> {
    let mut moves = Vec::new();
    let arrows = diagram.arrows();
    let n = arrows.len();
    let top = 2 * n;

    for arrow in arrows {
        if arrow.under() == arrow.over() + 1 {
            moves.push(HomotopyMove::H1Delete { pos: arrow.over() });
        }
    }

    for a in 0..n {
        for b in a + 1..n {
            if let Some((first, second)) = h2_site(&arrows[a], &arrows[b]) {
                moves.push(HomotopyMove::H2Delete { first, second });
            }
        }
    }

    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if let Some((first, second, third)) =
                    h3_site(&arrows[a], &arrows[b], &arrows[c])
                {
                    moves.push(HomotopyMove::H3Slide {
                        first,
                        second,
                        third,
                    });
                }
            }
        }
    }

    for gap in 0..=top {
        for rightward in [true, false] {
            moves.push(HomotopyMove::H1Insert { gap, rightward });
        }
    }

    for first_gap in 0..=top {
        for second_gap in first_gap..=top {
            for x_at_start in [true, false] {
                for x_to_start in [true, false] {
                    moves.push(HomotopyMove::H2Insert {
                        first_gap,
                        second_gap,
                        x_at_start,
                        x_to_start,
                    });
                }
            }
        }
    }

    moves
}

fn h2_site(a: &Arrow, b: &Arrow) -> Option<(usize, usize)> {
    let mut e = [a.tail, a.head, b.tail, b.head];
    e.sort();
    if e[1] != e[0] + 1 || e[3] != e[2] + 1 {
        return None;
    }
    let pair1 = [e[0], e[1]];
    let in_pair1 = |p: usize| p == pair1[0] || p == pair1[1];
    // each arrow needs one endpoint in each pair
    if in_pair1(a.tail) == in_pair1(a.head) {
        return None;
    }
    // opposite senses: exactly one tail in the first pair
    if in_pair1(a.tail) == in_pair1(b.tail) {
        return None;
    }
    Some((e[0], e[2]))
}

fn h3_site(a: &Arrow, b: &Arrow, c: &Arrow) -> Option<(usize, usize, usize)> {
    let mut e = [a.tail, a.head, b.tail, b.head, c.tail, c.head];
    e.sort();
    if e[1] != e[0] + 1 || e[3] != e[2] + 1 || e[5] != e[4] + 1 {
        return None;
    }
    let pair_of = |p: usize| -> usize {
        if p == e[0] || p == e[1] {
            0
        } else if p == e[2] || p == e[3] {
            1
        } else {
            2
        }
    };
    // identify which arrow joins which pairs; each must join two distinct ones
    let mut x = None; // pairs 0,1
    let mut y = None; // pairs 0,2
    let mut z = None; // pairs 1,2
    for arrow in [a, b, c] {
        let mut pair_pair = [pair_of(arrow.over()), pair_of(arrow.under())];
        pair_pair.sort();
        match pair_pair {
            [0, 1] => x = Some(arrow),
            [0, 2] => y = Some(arrow),
            [1, 2] => z = Some(arrow),
            _ => return None,
        }
    }
    let (x, y, z) = (x?, y?, z?);
    // over endpoints land in the earlier pair, unders in the later one
    let ob = [
        x.over() == e[1],
        x.under() == e[3],
        y.under() == e[5],
    ];
    let sb = [x.is_positive(), y.is_positive(), z.is_positive()];
    if !h3_config_sound(ob, sb) {
        return None;
    }
    Some((e[0], e[2], e[4]))
}

/// Applies a move, renumbering positions to `1..2m'`.
pub fn apply_move(diagram: &GaussDiagram, mv: &HomotopyMove) -> Result<GaussDiagram, MoveError> {
    let top = 2 * diagram.arrow_count();
    match *mv {
        HomotopyMove::H1Delete { pos } => {
            let keep: Vec<(usize, usize)> = diagram
                .arrows()
                .iter()
                .filter(|a| !(a.over() == pos && a.under() == pos + 1))
                .map(|a| (a.tail, a.head))
                .collect();
            if keep.len() + 1 != diagram.arrow_count() {
                return Err(MoveError::NotApplicable(format!(
                    "no arrow occupies positions ({pos},{})",
                    pos + 1
                )));
            }
            Ok(renumbered(keep))
        }
        HomotopyMove::H1Insert { gap, rightward } => {
            if gap > top {
                return Err(MoveError::NotApplicable(format!(
                    "gap {gap} exceeds diagram size {top}"
                )));
            }
            let bump = |p: usize| if p > gap { p + 2 } else { p };
            let mut arrows: Vec<(usize, usize)> = diagram
                .arrows()
                .iter()
                .map(|a| (bump(a.tail), bump(a.head)))
                .collect();
            if rightward {
                arrows.push((gap + 1, gap + 2));
            } else {
                arrows.push((gap + 2, gap + 1));
            }
            Ok(GaussDiagram::new(arrows).expect("insertion preserves validity"))
        }
        HomotopyMove::H2Delete { first, second } => {
            let span = [first, first + 1, second, second + 1];
            let (mut keep, mut dropped) = (Vec::new(), Vec::new());
            for a in diagram.arrows() {
                if span.contains(&a.tail) || span.contains(&a.head) {
                    dropped.push(*a);
                } else {
                    keep.push((a.tail, a.head));
                }
            }
            let site_ok = dropped.len() == 2
                && h2_site(&dropped[0], &dropped[1]) == Some((first, second));
            if !site_ok {
                return Err(MoveError::NotApplicable(format!(
                    "positions ({first},{}),({second},{}) do not hold a cancelling arrow pair",
                    first + 1,
                    second + 1
                )));
            }
            Ok(renumbered(keep))
        }
        HomotopyMove::H2Insert {
            first_gap,
            second_gap,
            x_at_start,
            x_to_start,
        } => {
            if first_gap > second_gap || second_gap > top {
                return Err(MoveError::NotApplicable(format!(
                    "gaps ({first_gap},{second_gap}) out of order or beyond size {top}"
                )));
            }
            let bump = |p: usize| {
                if p > second_gap {
                    p + 4
                } else if p > first_gap {
                    p + 2
                } else {
                    p
                }
            };
            let mut arrows: Vec<(usize, usize)> = diagram
                .arrows()
                .iter()
                .map(|a| (bump(a.tail), bump(a.head)))
                .collect();
            let (x, y) = h2_inserted_arrows(first_gap, second_gap, x_at_start, x_to_start);
            arrows.push(x);
            arrows.push(y);
            Ok(GaussDiagram::new(arrows).expect("insertion preserves validity"))
        }
        HomotopyMove::H3Slide {
            first,
            second,
            third,
        } => {
            let mut triangle = Vec::new();
            for a in diagram.arrows() {
                let touches = [a.tail, a.head].iter().any(|&p| {
                    [first, first + 1, second, second + 1, third, third + 1].contains(&p)
                });
                if touches {
                    triangle.push(*a);
                }
            }
            let site_ok = triangle.len() == 3
                && h3_site(&triangle[0], &triangle[1], &triangle[2])
                    == Some((first, second, third));
            if !site_ok {
                return Err(MoveError::NotApplicable(format!(
                    "positions ({first},*),({second},*),({third},*) do not hold a slidable triangle"
                )));
            }
            let swap = |p: usize| -> usize {
                for start in [first, second, third] {
                    if p == start {
                        return start + 1;
                    }
                    if p == start + 1 {
                        return start;
                    }
                }
                p
            };
            let arrows: Vec<(usize, usize)> = diagram
                .arrows()
                .iter()
                .map(|a| (swap(a.tail), swap(a.head)))
                .collect();
            Ok(GaussDiagram::new(arrows).expect("slide preserves validity"))
        }
    }
}

/// The move that undoes `mv` on `apply_move(diagram, mv)`.
pub fn inverse_move(diagram: &GaussDiagram, mv: &HomotopyMove) -> Result<HomotopyMove, MoveError> {
    match *mv {
        HomotopyMove::H1Delete { pos } => {
            let arrow = diagram
                .arrows()
                .iter()
                .find(|a| a.over() == pos && a.under() == pos + 1)
                .ok_or_else(|| {
                    MoveError::NotApplicable(format!("no arrow at ({pos},{})", pos + 1))
                })?;
            Ok(HomotopyMove::H1Insert {
                gap: pos - 1,
                rightward: arrow.is_positive(),
            })
        }
        HomotopyMove::H1Insert { gap, .. } => Ok(HomotopyMove::H1Delete { pos: gap + 1 }),
        HomotopyMove::H2Delete { first, second } => {
            let span = [first, first + 1, second, second + 1];
            let dropped: Vec<Arrow> = diagram
                .arrows()
                .iter()
                .filter(|a| span.contains(&a.tail) || span.contains(&a.head))
                .copied()
                .collect();
            if dropped.len() != 2 || h2_site(&dropped[0], &dropped[1]) != Some((first, second)) {
                return Err(MoveError::NotApplicable(format!(
                    "no cancelling pair at ({first},{second})"
                )));
            }
            let in_pair1 = |p: usize| p == first || p == first + 1;
            let x = dropped
                .iter()
                .find(|a| in_pair1(a.tail))
                .expect("one arrow has its tail in the first pair");
            Ok(HomotopyMove::H2Insert {
                first_gap: first - 1,
                second_gap: second - 3,
                x_at_start: x.tail == first,
                x_to_start: x.head == second,
            })
        }
        HomotopyMove::H2Insert {
            first_gap,
            second_gap,
            ..
        } => Ok(HomotopyMove::H2Delete {
            first: first_gap + 1,
            second: second_gap + 3,
        }),
        HomotopyMove::H3Slide { .. } => Ok(*mv),
    }
}

fn renumbered(arrows: Vec<(usize, usize)>) -> GaussDiagram {
    let mut positions: Vec<usize> = arrows.iter().flat_map(|&(s, t)| [s, t]).collect();
    positions.sort();
    let remap = |p: usize| positions.binary_search(&p).expect("endpoint present") + 1;
    let renamed: Vec<(usize, usize)> = arrows
        .into_iter()
        .map(|(s, t)| (remap(s), remap(t)))
        .collect();
    GaussDiagram::new(renamed).expect("renumbering preserves validity")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(code: &str) -> GaussDiagram {
        code.parse().unwrap()
    }

    #[test]
    fn h1_delete_lone_kink() {
        let moves = enumerate_moves(&d("1>2"));
        assert!(moves.contains(&HomotopyMove::H1Delete { pos: 1 }));
        let after = apply_move(&d("1>2"), &HomotopyMove::H1Delete { pos: 1 }).unwrap();
        assert_eq!(after, GaussDiagram::empty());
    }

    #[test]
    fn h2_delete_cancelling_pair() {
        for code in ["1>3,4>2", "1>4,3>2", "2>3,4>1", "2>4,3>1"] {
            let diagram = d(code);
            let mv = HomotopyMove::H2Delete { first: 1, second: 3 };
            assert!(enumerate_moves(&diagram).contains(&mv), "{code}");
            assert_eq!(apply_move(&diagram, &mv).unwrap(), GaussDiagram::empty());
        }
        // same senses: not a cancelling pair
        let parallel = d("1>3,2>4");
        assert!(!enumerate_moves(&parallel)
            .iter()
            .any(|mv| matches!(mv, HomotopyMove::H2Delete { .. })));
    }

    #[test]
    fn empty_diagram_offers_only_insertions() {
        let moves = enumerate_moves(&GaussDiagram::empty());
        assert!(!moves.is_empty());
        assert!(moves.iter().all(|mv| mv.action() == MoveAction::Insert));
    }

    #[test]
    fn h1_insert_far_left() {
        let after = apply_move(
            &d("1>3,2>4"),
            &HomotopyMove::H1Insert {
                gap: 0,
                rightward: true,
            },
        )
        .unwrap();
        assert_eq!(after, d("1>2,3>5,4>6"));
    }

    #[test]
    fn h3_slide_realizable_triangle() {
        // all-positive triangle with over endpoints first
        let before = d("1>3,2>5,4>6");
        let mv = HomotopyMove::H3Slide {
            first: 1,
            second: 3,
            third: 5,
        };
        assert!(enumerate_moves(&before).contains(&mv));
        let after = apply_move(&before, &mv).unwrap();
        assert_eq!(after, d("2>4,1>6,3>5"));
        // the slide is its own inverse
        assert_eq!(apply_move(&after, &mv).unwrap(), before);
    }

    #[test]
    fn h3_rejects_unrealizable_direction_pattern() {
        // flipping one arrow of the sound triangle breaks realizability
        let before = d("1>3,2>5,6>4");
        let mv = HomotopyMove::H3Slide {
            first: 1,
            second: 3,
            third: 5,
        };
        assert!(!enumerate_moves(&before).contains(&mv));
        assert!(apply_move(&before, &mv).is_err());
    }

    #[test]
    fn inverse_round_trips() {
        let diagram = d("1>3,2>5,4>6");
        for mv in enumerate_moves(&diagram) {
            let after = apply_move(&diagram, &mv).unwrap();
            let back = inverse_move(&diagram, &mv).unwrap();
            assert_eq!(apply_move(&after, &back).unwrap(), diagram, "{mv}");
        }
    }

    #[test]
    fn not_applicable_errors() {
        assert!(apply_move(&d("1>3,2>4"), &HomotopyMove::H1Delete { pos: 1 }).is_err());
        assert!(apply_move(
            &d("1>3,2>4"),
            &HomotopyMove::H2Delete { first: 1, second: 3 }
        )
        .is_err());
        assert!(apply_move(
            &GaussDiagram::empty(),
            &HomotopyMove::H1Insert {
                gap: 1,
                rightward: true
            }
        )
        .is_err());
    }

    #[test]
    fn display_is_concrete() {
        assert_eq!(
            HomotopyMove::H1Insert {
                gap: 0,
                rightward: false
            }
            .to_string(),
            "H1 insert 2>1"
        );
        assert_eq!(
            HomotopyMove::H2Insert {
                first_gap: 0,
                second_gap: 0,
                x_at_start: true,
                x_to_start: true
            }
            .to_string(),
            "H2 insert 1>3,4>2"
        );
    }
}
