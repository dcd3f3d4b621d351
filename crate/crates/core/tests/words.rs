mod common;

use permword::model::{AllowedLengths, Degree, Degrees};
use permword::word::{
    cyclic_normal_form, normal_form, partial_d_cyclic_reduce, quotient_order, OrderKind,
};
use permword::{parse_word, Letter, Permutation, Word};
use proptest::prelude::*;

fn letter(k: usize) -> impl Strategy<Value = Letter> {
    (1..=k, any::<bool>()).prop_map(|(g, inv)| Letter::new(g, inv))
}

fn word(k: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(letter(k), 0..=max_len).prop_map(Word::from_letters)
}

fn degrees() -> impl Strategy<Value = Degrees> {
    prop::collection::vec(
        prop_oneof![(2u64..=5).prop_map(Degree::Finite), Just(Degree::Infinite)],
        3,
    )
    .prop_map(|d| Degrees::new(d).unwrap())
}

fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|images| Permutation::from_images(images).unwrap())
}

fn relator(g: usize, d: u64, inverse: bool) -> Word {
    Word::from_letters(vec![Letter::new(g, inverse); d as usize])
}

fn cycle_type(p: &Permutation) -> Vec<usize> {
    let mut c = p.cycle_lengths();
    c.sort_unstable();
    c
}

proptest! {
    #[test]
    fn free_reduce_is_idempotent(w in word(3, 20)) {
        let r = w.free_reduce();
        prop_assert!(r.len() <= w.len());
        prop_assert!(r.is_reduced());
        prop_assert_eq!(r.free_reduce(), r);
    }

    #[test]
    fn cyclic_reduce_is_conjugate(w in word(3, 12), s in prop::collection::vec(perm(6), 3)) {
        let r = w.cyclic_reduce();
        prop_assert!(r.is_cyclically_reduced());
        prop_assert_eq!(cycle_type(&w.evaluate(&s).unwrap()), cycle_type(&r.evaluate(&s).unwrap()));
    }

    #[test]
    fn render_round_trips(w in word(4, 20)) {
        prop_assert_eq!(w.render().parse::<Word>().unwrap(), w.clone());
        prop_assert_eq!(parse_word(&w.render(), 4).unwrap(), w);
    }

    #[test]
    fn normal_form_ignores_relators_and_cancelling_pairs(
        w in word(3, 12),
        d in degrees(),
        inserts in prop::collection::vec((0usize..40, 1usize..=3, any::<bool>(), any::<bool>()), 0..4),
    ) {
        let mut letters = w.letters().to_vec();
        for (at, g, inverse, pair) in inserts {
            let at = at % (letters.len() + 1);
            let piece: Vec<Letter> = match (pair, d.of(g)) {
                (false, Degree::Finite(dg)) => relator(g, dg, inverse).letters().to_vec(),
                _ => vec![Letter::new(g, inverse), Letter::new(g, !inverse)],
            };
            letters.splice(at..at, piece);
        }
        prop_assert_eq!(normal_form(&Word::from_letters(letters), &d), normal_form(&w, &d));
    }

    #[test]
    fn cyclic_normal_form_is_a_conjugacy_invariant(w in word(3, 10), u in word(3, 5), by in 0usize..12, d in degrees()) {
        let conj = u.concat(&w).concat(&u.inverse());
        let a = cyclic_normal_form(&w, &d);
        prop_assert_eq!(&a, &cyclic_normal_form(&conj, &d));
        prop_assert_eq!(&a, &cyclic_normal_form(&w.rotate(by), &d));
    }

    #[test]
    fn partial_reduction_is_conjugate_and_reduced(w in word(3, 14), d in degrees()) {
        let w = w.cyclic_reduce();
        let r = partial_d_cyclic_reduce(&w, &d).unwrap();
        prop_assert_eq!(cyclic_normal_form(&r, &d), cyclic_normal_form(&w, &d));
        // no syllable of length ≥ d_i, reading cyclically
        let n = r.len();
        let l = r.letters();
        for start in 0..n {
            if let Degree::Finite(dg) = d.of(l[start].generator) {
                let run = (0..n).take_while(|&j| l[(start + j) % n] == l[start]).count();
                prop_assert!(run == n && n < dg as usize || (run as u64) < dg, "{} keeps a long syllable", r.render());
            }
        }
    }

    #[test]
    fn parser_never_panics(s in "\\PC{0,40}") {
        let _ = s.parse::<Word>();
        let _ = s.parse::<AllowedLengths>();
        let _ = Permutation::parse_cycles(&s);
    }

    #[test]
    fn parser_accepts_token_soup(s in "(g[0-9]{1,3}(\\^-?[0-9]{1,3})?[ *]?){0,8}") {
        if let Ok(w) = s.parse::<Word>() {
            prop_assert_eq!(w.render().parse::<Word>().unwrap(), w);
        }
    }
}

/// Every `s ∈ S_n` whose cycle lengths all divide `d`.
fn roots_of_unity(n: usize, d: Degree) -> Vec<Permutation> {
    common::all_perms(n)
        .into_iter()
        .filter(|p| match d {
            Degree::Finite(d) => common::cycle_lengths_of(p).iter().all(|&l| d % l == 0),
            Degree::Infinite => true,
        })
        .map(|p| Permutation::from_images(p).unwrap())
        .collect()
}

#[test]
fn identity_order_evaluates_trivially() {
    let d: Degrees = "2,3".parse().unwrap();
    let corpus = [
        "g1^2",
        "g2^3 g1^-2",
        "g1 g2^3 g1^-1",
        "g2 g1^2 g2^-1 g1^-2",
        "g1 g2 g1^2 g2^-1 g1^-1 g2^-3",
        "g2^-1 g1 g2^6 g1^-1 g2",
    ];
    for n in 1..=5 {
        let r1 = roots_of_unity(n, d.of(1));
        let r2 = roots_of_unity(n, d.of(2));
        for text in corpus {
            let w: Word = text.parse().unwrap();
            assert_eq!(quotient_order(&w, &d).kind, OrderKind::Identity, "{text}");
            for a in &r1 {
                for b in &r2 {
                    assert!(
                        w.evaluate(&[a.clone(), b.clone()]).unwrap().is_identity(),
                        "{text} at n={n}"
                    );
                }
            }
        }
    }
}

#[test]
fn finite_order_powers_vanish() {
    let d: Degrees = "4,6,inf".parse().unwrap();
    for text in ["g1", "g1^2", "g2^-2", "g3 g2^3 g3^-1", "g2 g1 g2^-1"] {
        let w: Word = text.parse().unwrap();
        let o = quotient_order(&w, &d).finite_order().unwrap();
        let p = w.power(o as usize).unwrap();
        assert!(normal_form(&p, &d).is_empty(), "{text}^{o}");
    }
}
