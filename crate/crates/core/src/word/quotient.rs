//! Normal forms in `F_k/[g_1^{d_1}, …, g_k^{d_k}]` and `(d)`-cyclic reduction.

use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use super::{render_power, Letter, Word};
use crate::error::{Error, Result};
use crate::model::{Degree, Degrees};

/// A maximal power `g_i^α` of one generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Syllable {
    pub generator: usize,
    pub exponent: i64,
}

/// Exponents lie in `(-d/2, d/2]` for finite `d`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct NormalForm {
    pub syllables: Vec<Syllable>,
    /// Set for cyclic normal forms: first and last generators also differ,
    /// and the rotation is the lexicographically least one.
    pub cyclic: bool,
}

impl NormalForm {
    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn to_word(&self) -> Word {
        let letters = self
            .syllables
            .iter()
            .flat_map(|s| {
                std::iter::repeat_n(
                    Letter::new(s.generator, s.exponent < 0),
                    s.exponent.unsigned_abs() as usize,
                )
            })
            .collect();
        Word::from_letters(letters)
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .syllables
            .iter()
            .map(|s| render_power(s.generator, s.exponent))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

fn canonical_exponent(e: i64, d: Degree) -> i64 {
    match d {
        Degree::Infinite => e,
        Degree::Finite(d) => {
            let d = d as i64;
            let r = e.rem_euclid(d);
            if 2 * r > d {
                r - d
            } else {
                r
            }
        }
    }
}

/// The unique reduced form of `w` in the quotient.
pub fn normal_form(w: &Word, degrees: &Degrees) -> NormalForm {
    let mut stack: Vec<Syllable> = Vec::new();
    for l in w.letters() {
        push_syllable(
            &mut stack,
            Syllable {
                generator: l.generator,
                exponent: l.sign(),
            },
            degrees,
        );
    }
    NormalForm {
        syllables: stack,
        cyclic: false,
    }
}

fn push_syllable(stack: &mut Vec<Syllable>, s: Syllable, degrees: &Degrees) {
    let d = degrees.of(s.generator);
    match stack.last_mut() {
        Some(top) if top.generator == s.generator => {
            top.exponent = canonical_exponent(top.exponent + s.exponent, d);
            if top.exponent == 0 {
                stack.pop();
            }
        }
        _ => {
            let e = canonical_exponent(s.exponent, d);
            if e != 0 {
                stack.push(Syllable { exponent: e, ..s });
            }
        }
    }
}

/// Normal form of the conjugacy class of `w`.
pub fn cyclic_normal_form(w: &Word, degrees: &Degrees) -> NormalForm {
    let mut syl = normal_form(w, degrees).syllables;
    // Conjugating by the last syllable merges it into the first; each merge
    // either shortens the form or ends the loop.
    while syl.len() >= 2 && syl[0].generator == syl[syl.len() - 1].generator {
        let last = syl.pop().expect("len >= 2");
        let d = degrees.of(last.generator);
        syl[0].exponent = canonical_exponent(syl[0].exponent + last.exponent, d);
        if syl[0].exponent == 0 {
            syl.remove(0);
        }
    }
    let best = (0..syl.len())
        .min_by(|&a, &b| {
            syl[a..]
                .iter()
                .chain(&syl[..a])
                .cmp(syl[b..].iter().chain(&syl[..b]))
        })
        .unwrap_or(0);
    syl.rotate_left(best);
    NormalForm {
        syllables: syl,
        cyclic: true,
    }
}

/// A `(d)`-cyclically reduced conjugate of a cyclically reduced word.
///
/// Each step rotates so no syllable straddles the ends, then takes the
/// leftmost syllable `g_i^α` with `|α| ≥ d_i`. If `d_i ∤ α` it drops
/// `g_i^{±m d_i}` in place. Otherwise the syllable is a relator power and the
/// letters mirroring each other around it cancel too, i.e. `u g_i^{md_i} u^{-1} v`
/// becomes `v`; with nothing to mirror it is dropped in place.
pub fn partial_d_cyclic_reduce(w: &Word, degrees: &Degrees) -> Result<Word> {
    if !w.is_cyclically_reduced() {
        return Err(Error::NotCyclicallyReduced);
    }
    let mut letters = w.letters().to_vec();
    loop {
        let n = letters.len();
        if n == 0 {
            break;
        }
        if let Some(shift) =
            (0..n).find(|&i| letters[i].generator != letters[(i + n - 1) % n].generator)
        {
            letters.rotate_left(shift);
        }
        let Some((start, len, d)) = find_long_syllable(&letters, degrees) else {
            break;
        };
        let rem = len % d;
        if rem != 0 || len == n {
            letters.drain(start..start + (len - rem));
            continue;
        }
        let outside = n - len;
        let mut k = 0;
        while 2 * (k + 1) <= outside
            && letters[(start + n - 1 - k) % n] == letters[(start + len + k) % n].inv()
        {
            k += 1;
        }
        let keep = n - len - 2 * k;
        letters = (0..keep)
            .map(|j| letters[(start + len + k + j) % n])
            .collect();
    }
    Ok(Word::from_letters(letters))
}

fn find_long_syllable(letters: &[Letter], degrees: &Degrees) -> Option<(usize, usize, usize)> {
    let mut i = 0;
    while i < letters.len() {
        let mut j = i;
        while j < letters.len() && letters[j] == letters[i] {
            j += 1;
        }
        if let Degree::Finite(d) = degrees.of(letters[i].generator) {
            if (j - i) as u64 >= d {
                return Some((i, j - i, d as usize));
            }
        }
        i = j;
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OrderKind {
    Identity,
    Finite(u64),
    Infinite,
}

/// Order of the element represented by a word in the quotient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientOrder {
    pub kind: OrderKind,
    /// `(i, α)` when the word is conjugate to `g_i^α`.
    pub conjugate_power: Option<(usize, i64)>,
}

impl QuotientOrder {
    /// `d` for finite orders, with the identity having order 1.
    pub fn finite_order(&self) -> Option<u64> {
        match self.kind {
            OrderKind::Identity => Some(1),
            OrderKind::Finite(d) => Some(d),
            OrderKind::Infinite => None,
        }
    }
}

impl fmt::Display for QuotientOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            OrderKind::Identity => f.write_str("Identity")?,
            OrderKind::Finite(d) => write!(f, "Finite({d})")?,
            OrderKind::Infinite => f.write_str("Infinite")?,
        }
        if let Some((i, a)) = self.conjugate_power {
            write!(f, ", conjugate to {}", render_power(i, a))?;
        }
        Ok(())
    }
}

pub fn quotient_order(w: &Word, degrees: &Degrees) -> QuotientOrder {
    let nf = cyclic_normal_form(w, degrees);
    match nf.syllables.as_slice() {
        [] => QuotientOrder {
            kind: OrderKind::Identity,
            conjugate_power: None,
        },
        [s] => {
            let kind = match degrees.of(s.generator) {
                Degree::Finite(d) => OrderKind::Finite(d / s.exponent.unsigned_abs().gcd(&d)),
                Degree::Infinite => OrderKind::Infinite,
            };
            QuotientOrder {
                kind,
                conjugate_power: Some((s.generator, s.exponent)),
            }
        }
        _ => QuotientOrder {
            kind: OrderKind::Infinite,
            conjugate_power: None,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn d(s: &str) -> Degrees {
        s.parse().unwrap()
    }

    #[test]
    fn normal_form_examples() {
        assert!(normal_form(&w("g1^4"), &d("4")).is_empty());
        let nf = normal_form(&w("g1 g2 g2^-1 g1"), &d("inf,inf"));
        assert_eq!(
            nf.syllables,
            vec![Syllable {
                generator: 1,
                exponent: 2
            }]
        );
        assert_eq!(normal_form(&w("g1^3"), &d("4")).to_string(), "g1^-1");
        assert_eq!(normal_form(&w("g1^2"), &d("4")).to_string(), "g1^2");
        assert_eq!(normal_form(&w("g1^-2"), &d("4")).to_string(), "g1^2");
    }

    #[test]
    fn cyclic_normal_form_examples() {
        let nf = cyclic_normal_form(&w("g2^-1 g1 g2"), &d("inf,inf"));
        assert_eq!(
            nf.syllables,
            vec![Syllable {
                generator: 1,
                exponent: 1
            }]
        );
        assert!(cyclic_normal_form(&Word::empty(), &d("2")).is_empty());
        let a = cyclic_normal_form(&w("g2 g1 g3"), &d("inf,inf,inf"));
        let b = cyclic_normal_form(&w("g1 g3 g2"), &d("inf,inf,inf"));
        assert_eq!(a, b);
        assert_eq!(a.syllables[0].generator, 1);
    }

    #[test]
    fn reduction_of_worked_example() {
        let word = w("g2^2 g1 g2^6 g3 g1^-4 g3^-1 g1^-1 g2^3");
        let r = partial_d_cyclic_reduce(&word, &d("4,5,inf")).unwrap();
        assert_eq!(r, w("g2"));
    }

    #[test]
    fn reduction_examples() {
        assert!(partial_d_cyclic_reduce(&w("g1^4"), &d("4"))
            .unwrap()
            .is_empty());
        assert_eq!(
            partial_d_cyclic_reduce(&w("g1 g2"), &d("2,2")).unwrap(),
            w("g1 g2")
        );
        assert_eq!(
            partial_d_cyclic_reduce(&w("g1 g2^2"), &d("2,2")).unwrap(),
            w("g1")
        );
        assert_eq!(
            partial_d_cyclic_reduce(&w("g1^5 g2"), &d("3,inf")).unwrap(),
            w("g1^2 g2")
        );
        assert_eq!(
            partial_d_cyclic_reduce(&w("g1 g2^-1"), &d("2,2")).unwrap(),
            w("g1 g2^-1"),
        );
        assert_eq!(
            partial_d_cyclic_reduce(&w("g1 g2^-1 g1^-1"), &d("2,2")),
            Err(Error::NotCyclicallyReduced)
        );
    }

    #[test]
    fn order_examples() {
        let o = quotient_order(&w("g1"), &d("2"));
        assert_eq!(o.kind, OrderKind::Finite(2));
        assert_eq!(o.conjugate_power, Some((1, 1)));
        let o = quotient_order(&w("g1 g2"), &d("2,2"));
        assert_eq!(
            o,
            QuotientOrder {
                kind: OrderKind::Infinite,
                conjugate_power: None
            }
        );
        let o = quotient_order(&w("g1 g2^2"), &d("2,2"));
        assert_eq!(o.kind, OrderKind::Finite(2));
        assert_eq!(o.conjugate_power, Some((1, 1)));
        assert_eq!(
            quotient_order(&w("g1^4"), &d("4")).kind,
            OrderKind::Identity
        );
        assert_eq!(
            quotient_order(&w("g1^2"), &d("6")).kind,
            OrderKind::Finite(3)
        );
        assert_eq!(
            quotient_order(&w("g1^3"), &d("inf")).kind,
            OrderKind::Infinite
        );
    }
}
