//! Property tests for the algebraic layers: free-group axioms, ring axioms,
//! action compatibilities, parse/format round trips and the move engine's
//! full H3 configuration space.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use openstrings::gauss::GaussDiagram;
use openstrings::invariant::{phi, phi_poly};
use openstrings::laurent::{LaurentPolynomial, SignedMonomial};
use openstrings::moves::{apply_move, enumerate_moves, inverse_move, HomotopyMove};
use openstrings::words::{ExponentIndex, Generator, Letter, Sign, Word};

fn letter_strategy() -> impl Strategy<Value = Letter> {
    (any::<bool>(), -3i64..=3, -3i64..=3).prop_map(|(positive, j, k)| {
        Letter::new(
            Generator::A,
            ExponentIndex::pair(j, k),
            if positive { Sign::Positive } else { Sign::Negative },
        )
    })
}

fn word_strategy() -> impl Strategy<Value = Word> {
    prop::collection::vec(letter_strategy(), 0..12)
        .prop_map(|letters| Word::from_letters(letters).unwrap())
}

fn index_strategy() -> impl Strategy<Value = ExponentIndex> {
    (-3i64..=3, -3i64..=3).prop_map(|(j, k)| ExponentIndex::pair(j, k))
}

fn poly_strategy() -> impl Strategy<Value = LaurentPolynomial> {
    prop::collection::vec(((-3i64..=3, -3i64..=3), -5i64..=5), 0..8).prop_map(|terms| {
        let mut p = LaurentPolynomial::zero();
        for ((j, k), c) in terms {
            p.add_term(ExponentIndex::pair(j, k), c.into());
        }
        p
    })
}

fn diagram_strategy() -> impl Strategy<Value = GaussDiagram> {
    (0usize..=6, any::<u64>()).prop_map(|(m, seed)| GaussDiagram::random(m, seed))
}

proptest! {
    #[test]
    fn free_group_axioms(a in word_strategy(), b in word_strategy(), c in word_strategy()) {
        let ab_c = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let a_bc = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        prop_assert_eq!(a.multiply(&Word::empty()).unwrap(), a.clone());
        prop_assert_eq!(Word::empty().multiply(&a).unwrap(), a.clone());
        prop_assert!(a.multiply(&a.invert()).unwrap().is_empty());
        prop_assert!(a.invert().multiply(&a).unwrap().is_empty());
    }

    #[test]
    fn shift_is_a_commuting_action(
        a in word_strategy(),
        b in word_strategy(),
        delta in index_strategy(),
    ) {
        let shifted_product = a.multiply(&b).unwrap().shift(&delta).unwrap();
        let product_of_shifted = a.shift(&delta).unwrap().multiply(&b.shift(&delta).unwrap()).unwrap();
        prop_assert_eq!(shifted_product, product_of_shifted);
        prop_assert_eq!(
            a.invert().shift(&delta).unwrap(),
            a.shift(&delta).unwrap().invert()
        );
        // star conjugates the action through negation
        prop_assert_eq!(
            a.shift(&delta).unwrap().star().unwrap(),
            a.star().unwrap().shift(&delta.negated()).unwrap()
        );
    }

    #[test]
    fn abelianize_is_a_homomorphism(
        a in word_strategy(),
        b in word_strategy(),
        delta in index_strategy(),
    ) {
        prop_assert_eq!(
            a.multiply(&b).unwrap().abelianize(),
            a.abelianize().add(&b.abelianize()).unwrap()
        );
        prop_assert_eq!(
            a.shift(&delta).unwrap().abelianize(),
            a.abelianize()
                .mul(&LaurentPolynomial::monomial(delta, 1))
                .unwrap()
        );
    }

    #[test]
    fn reduction_is_confluent(
        letters in prop::collection::vec(letter_strategy(), 0..14),
        seed in any::<u64>(),
    ) {
        // cancel adjacent inverse pairs in a random order; the result must
        // match the stack reducer
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut work = letters.clone();
        loop {
            let sites: Vec<usize> = (0..work.len().saturating_sub(1))
                .filter(|&i| {
                    work[i].generator == work[i + 1].generator
                        && work[i].index == work[i + 1].index
                        && work[i].sign == work[i + 1].sign.flipped()
                })
                .collect();
            if sites.is_empty() {
                break;
            }
            let at = sites[rng.random_range(0..sites.len())];
            work.drain(at..at + 2);
        }
        prop_assert_eq!(
            Word::from_letters(work).unwrap(),
            Word::from_letters(letters).unwrap()
        );
    }

    #[test]
    fn ring_axioms(p in poly_strategy(), q in poly_strategy(), r in poly_strategy()) {
        prop_assert_eq!(p.add(&q).unwrap(), q.add(&p).unwrap());
        prop_assert_eq!(p.mul(&q).unwrap(), q.mul(&p).unwrap());
        prop_assert_eq!(
            p.add(&q).unwrap().add(&r).unwrap(),
            p.add(&q.add(&r).unwrap()).unwrap()
        );
        prop_assert_eq!(
            p.mul(&q).unwrap().mul(&r).unwrap(),
            p.mul(&q.mul(&r).unwrap()).unwrap()
        );
        prop_assert_eq!(
            p.mul(&q.add(&r).unwrap()).unwrap(),
            p.mul(&q).unwrap().add(&p.mul(&r).unwrap()).unwrap()
        );
        prop_assert!(p.add(&p.neg()).unwrap().is_zero());
    }

    #[test]
    fn swap_uv_is_a_ring_involution(p in poly_strategy(), q in poly_strategy()) {
        prop_assert_eq!(p.swap_uv().unwrap().swap_uv().unwrap(), p.clone());
        prop_assert_eq!(
            p.add(&q).unwrap().swap_uv().unwrap(),
            p.swap_uv().unwrap().add(&q.swap_uv().unwrap()).unwrap()
        );
        prop_assert_eq!(
            p.mul(&q).unwrap().swap_uv().unwrap(),
            p.swap_uv().unwrap().mul(&q.swap_uv().unwrap()).unwrap()
        );
    }

    #[test]
    fn eval_monomial_map_is_a_ring_homomorphism(p in poly_strategy(), q in poly_strategy()) {
        // u -> -u*v^-1, v -> v
        let images = [
            SignedMonomial::new(true, ExponentIndex::pair(1, -1)),
            SignedMonomial::variable(2, 1),
        ];
        prop_assert_eq!(
            p.add(&q).unwrap().eval_monomial_map(&images).unwrap(),
            p.eval_monomial_map(&images)
                .unwrap()
                .add(&q.eval_monomial_map(&images).unwrap())
                .unwrap()
        );
        prop_assert_eq!(
            p.mul(&q).unwrap().eval_monomial_map(&images).unwrap(),
            p.eval_monomial_map(&images)
                .unwrap()
                .mul(&q.eval_monomial_map(&images).unwrap())
                .unwrap()
        );
    }

    #[test]
    fn polynomial_text_round_trip(p in poly_strategy()) {
        prop_assert_eq!(LaurentPolynomial::parse(&p.canonical_string()).unwrap(), p);
    }

    #[test]
    fn diagram_text_round_trip(d in diagram_strategy()) {
        let code = d.to_string();
        prop_assert_eq!(code.parse::<GaussDiagram>().unwrap(), d);
    }

    #[test]
    fn star_and_hat_are_involutions(d in diagram_strategy()) {
        prop_assert_eq!(d.star().star(), d.clone());
        prop_assert_eq!(d.hat().hat(), d.clone());
        prop_assert_eq!(d.hat().star(), d.star().hat());
        prop_assert_eq!(d.is_ribbon_presentation(), d == d.hat());
    }

    #[test]
    fn concat_is_monoidal(
        a in diagram_strategy(),
        b in diagram_strategy(),
        c in diagram_strategy(),
    ) {
        prop_assert_eq!(a.concat(&b).concat(&c), a.concat(&b.concat(&c)));
        prop_assert_eq!(a.concat(&GaussDiagram::empty()), a.clone());
        prop_assert_eq!(GaussDiagram::empty().concat(&a), a.clone());
        prop_assert_eq!(a.concat(&b).writhe(), a.writhe() + b.writhe());
    }

    #[test]
    fn moves_apply_and_revert(d in diagram_strategy()) {
        for mv in enumerate_moves(&d) {
            let moved = apply_move(&d, &mv).unwrap();
            let back = inverse_move(&d, &mv).unwrap();
            prop_assert_eq!(apply_move(&moved, &back).unwrap(), d.clone());
        }
    }
}

/// Builds the three-arrow triangle diagram over the given adjacent pairs.
/// `ob` chooses the slot of each distinguished endpoint within its pair,
/// `sb` the three crossing signs; extra arrows fill the remaining positions.
fn triangle_diagram(
    pairs: [usize; 3],
    ob: [bool; 3],
    sb: [bool; 3],
    extra: &[(usize, usize)],
) -> GaussDiagram {
    let at = |pair: usize, second: bool| if second { pair + 1 } else { pair };
    let over_x = at(pairs[0], ob[0]);
    let over_y = at(pairs[0], !ob[0]);
    let under_x = at(pairs[1], ob[1]);
    let over_z = at(pairs[1], !ob[1]);
    let under_y = at(pairs[2], ob[2]);
    let under_z = at(pairs[2], !ob[2]);
    let arrow = |over: usize, under: usize, positive: bool| {
        if positive {
            (over, under)
        } else {
            (under, over)
        }
    };
    let mut arrows = vec![
        arrow(over_x, under_x, sb[0]),
        arrow(over_y, under_y, sb[1]),
        arrow(over_z, under_z, sb[2]),
    ];
    arrows.extend_from_slice(extra);
    GaussDiagram::new(arrows).unwrap()
}

fn h3_rule(ob: [bool; 3], sb: [bool; 3]) -> bool {
    (sb[0] ^ sb[1]) == (ob[1] ^ ob[2]) && (sb[0] ^ sb[2]) == (ob[0] ^ ob[2])
}

/// Every one of the 64 direction/order configurations of a triangle site:
/// the planar-realizable 16 slide and preserve the invariant, the other 48
/// are not offered and refuse to apply.
#[test]
fn h3_configuration_space_is_exactly_the_realizable_set() {
    let contexts: [([usize; 3], &[(usize, usize)]); 3] = [
        ([1, 3, 5], &[]),
        ([2, 5, 8], &[(1, 7), (10, 4)]),
        ([1, 5, 9], &[(3, 7), (8, 4)]),
    ];
    for (pairs, extra) in contexts {
        for bits in 0..64u32 {
            let ob = [bits & 1 != 0, bits & 2 != 0, bits & 4 != 0];
            let sb = [bits & 8 != 0, bits & 16 != 0, bits & 32 != 0];
            let diagram = triangle_diagram(pairs, ob, sb, extra);
            let mv = HomotopyMove::H3Slide {
                first: pairs[0],
                second: pairs[1],
                third: pairs[2],
            };
            let offered = enumerate_moves(&diagram).contains(&mv);
            assert_eq!(offered, h3_rule(ob, sb), "pairs {pairs:?} bits {bits}");
            if offered {
                let moved = apply_move(&diagram, &mv).unwrap();
                assert_eq!(phi(&moved), phi(&diagram), "pairs {pairs:?} bits {bits}");
                assert_eq!(phi_poly(&moved), phi_poly(&diagram));
                assert_eq!(apply_move(&moved, &mv).unwrap(), diagram);
            } else {
                assert!(apply_move(&diagram, &mv).is_err());
            }
        }
    }
}

/// The four cancelling-pair interleavings all vanish under the invariant,
/// in context.
#[test]
fn h2_configurations_are_invariant_in_context() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..50 {
        let extra_count = rng.random_range(0..3usize);
        let total = 4 + 2 * extra_count;
        let (i, j) = loop {
            let mut picks: Vec<usize> = (1..total).collect();
            // choose two disjoint adjacent pair starts
            let a = picks.remove(rng.random_range(0..picks.len()));
            let b = picks.remove(rng.random_range(0..picks.len()));
            let (i, j) = (a.min(b), a.max(b));
            if i + 1 < j && j + 1 <= total {
                break (i, j);
            }
        };
        let used = [i, i + 1, j, j + 1];
        let mut rest: Vec<usize> = (1..=total).filter(|p| !used.contains(p)).collect();
        for k in (1..rest.len()).rev() {
            rest.swap(k, rng.random_range(0..=k));
        }
        let extra: Vec<(usize, usize)> = (0..extra_count)
            .map(|t| (rest[2 * t], rest[2 * t + 1]))
            .collect();
        // the context alone, renumbered to 1..2e
        let mut pts: Vec<usize> = extra.iter().flat_map(|&(s, t)| [s, t]).collect();
        pts.sort();
        let renamed: Vec<(usize, usize)> = extra
            .iter()
            .map(|&(s, t)| {
                (
                    pts.binary_search(&s).unwrap() + 1,
                    pts.binary_search(&t).unwrap() + 1,
                )
            })
            .collect();
        let base = GaussDiagram::new(renamed).unwrap();
        for x_at_i in [true, false] {
            for x_to_j in [true, false] {
                let x_tail = if x_at_i { i } else { i + 1 };
                let y_head = if x_at_i { i + 1 } else { i };
                let x_head = if x_to_j { j } else { j + 1 };
                let y_tail = if x_to_j { j + 1 } else { j };
                let mut arrows = vec![(x_tail, x_head), (y_tail, y_head)];
                arrows.extend_from_slice(&extra);
                let with_pair = GaussDiagram::new(arrows).unwrap();
                assert_eq!(phi(&with_pair), phi(&base));
            }
        }
    }
}
