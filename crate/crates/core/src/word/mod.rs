//! Words in the letters `g_1^{±1}, …, g_k^{±1}`.
//!
//! A [`Word`] is a plain letter sequence; reducedness is a predicate, not an
//! invariant. Evaluation on permutations composes right to left: the last
//! letter acts first, so `g1 g2` evaluates to `s_1 ∘ s_2`.

mod quotient;

use std::fmt;
use std::str::FromStr;

pub use quotient::{
    cyclic_normal_form, normal_form, partial_d_cyclic_reduce, quotient_order, NormalForm,
    OrderKind, QuotientOrder, Syllable,
};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Longest word (in letters) accepted by the parser.
pub const MAX_WORD_LEN: usize = 1 << 20;

/// A generator `g_i` or its inverse. Generators are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        debug_assert!(generator >= 1);
        Letter { generator, inverse }
    }

    pub fn pos(generator: usize) -> Self {
        Letter::new(generator, false)
    }

    pub fn neg(generator: usize) -> Self {
        Letter::new(generator, true)
    }

    pub fn inv(self) -> Self {
        Letter {
            inverse: !self.inverse,
            ..self
        }
    }

    /// `+1` or `-1`.
    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "g{}^-1", self.generator)
        } else {
            write!(f, "g{}", self.generator)
        }
    }
}

/// A finite sequence of letters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    /// `g_1 g_2 ⋯ g_k`.
    pub fn product_of_generators(k: usize) -> Self {
        Word {
            letters: (1..=k).map(Letter::pos).collect(),
        }
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

    /// Largest generator index used, 0 for the empty word.
    pub fn max_generator(&self) -> usize {
        self.letters.iter().map(|l| l.generator).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    /// Concatenation `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    /// Cyclic shift moving the first `by` letters to the end.
    pub fn rotate(&self, by: usize) -> Word {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            let len = letters.len();
            letters.rotate_left(by % len);
        }
        Word { letters }
    }

    /// No letter is followed by its inverse.
    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] != w[1].inv())
    }

    /// Reduced, and the first and last letters are not mutually inverse.
    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_reduced()
            && match (self.letters.first(), self.letters.last()) {
                (Some(&a), Some(&b)) if self.letters.len() >= 2 => a != b.inv(),
                _ => true,
            }
    }

    /// The reduced word representing the same element of the free group.
    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    /// A cyclically reduced conjugate: free reduction, then stripping
    /// mutually inverse first/last letters.
    pub fn cyclic_reduce(&self) -> Word {
        let reduced = self.free_reduce().letters;
        let (mut lo, mut hi) = (0, reduced.len());
        while hi - lo >= 2 && reduced[lo] == reduced[hi - 1].inv() {
            lo += 1;
            hi -= 1;
        }
        Word {
            letters: reduced[lo..hi].to_vec(),
        }
    }

    /// True iff the cyclically reduced word is not `u^d` for any `d ≥ 2`.
    ///
    /// The empty word equals its own square and is reported as not primitive.
    pub fn is_primitive(&self) -> Result<bool> {
        if !self.is_cyclically_reduced() {
            return Err(Error::NotCyclicallyReduced);
        }
        let n = self.len();
        if n == 0 {
            return Ok(false);
        }
        let periodic = (1..n)
            .filter(|&p| n.is_multiple_of(p))
            .any(|p| (0..n).all(|i| self.letters[i] == self.letters[(i + p) % n]));
        Ok(!periodic)
    }

    /// `w^m` for `m ≥ 1`.
    pub fn power(&self, m: usize) -> Result<Word> {
        if m == 0 {
            return Err(Error::ZeroPower);
        }
        Ok(Word {
            letters: self.letters.repeat(m),
        })
    }

    /// `w(s)` with the last letter acting first.
    pub fn evaluate(&self, s: &[Permutation]) -> Result<Permutation> {
        let n = s.first().map_or(0, Permutation::len);
        if let Some(bad) = s.iter().find(|p| p.len() != n) {
            return Err(Error::SizeMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        if self.max_generator() > s.len() {
            return Err(Error::ArityMismatch {
                expected: self.max_generator(),
                found: s.len(),
            });
        }
        let inverses: Vec<Option<Permutation>> = (1..=s.len())
            .map(|g| {
                self.letters
                    .iter()
                    .any(|l| l.generator == g && l.inverse)
                    .then(|| s[g - 1].inverse())
            })
            .collect();
        let mut images: Vec<usize> = (0..n).collect();
        for l in self.letters.iter().rev() {
            let p = if l.inverse {
                inverses[l.generator - 1].as_ref().expect("precomputed")
            } else {
                &s[l.generator - 1]
            };
            for x in images.iter_mut() {
                *x = p.apply(*x);
            }
        }
        Permutation::from_images(images)
    }

    /// Renders with runs of equal letters collapsed into powers.
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == l {
                j += 1;
            }
            let e = (j - i) as i64 * l.sign();
            parts.push(render_power(l.generator, e));
            i = j;
        }
        parts.join(" ")
    }
}

pub(crate) fn render_power(generator: usize, exponent: i64) -> String {
    if exponent == 1 {
        format!("g{generator}")
    } else {
        format!("g{generator}^{exponent}")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_word_unbounded(s)
    }
}

/// Parses a word whose generators must lie in `1..=k`.
///
/// Grammar: tokens separated by whitespace or `*`; a token is
/// `g INT ('^' SIGNED_INT)?` with `INT ≥ 1` and a nonzero exponent. Powers
/// are expanded into unit letters and nothing is reduced.
pub fn parse_word(text: &str, k: usize) -> Result<Word> {
    let word = parse_word_unbounded(text)?;
    if let Some(l) = word.letters.iter().find(|l| l.generator > k) {
        return Err(Error::GeneratorOutOfRange {
            index: l.generator,
            k,
        });
    }
    Ok(word)
}

fn parse_word_unbounded(text: &str) -> Result<Word> {
    let bytes = text.as_bytes();
    let mut letters = Vec::new();
    let mut total: u128 = 0;
    let mut i = 0;
    let is_sep = |c: u8| c == b'*' || c.is_ascii_whitespace();
    while i < bytes.len() {
        if is_sep(bytes[i]) {
            i += 1;
            continue;
        }
        let start = i;
        if bytes[i] != b'g' {
            return Err(syntax(i, "expected 'g'"));
        }
        i += 1;
        let (generator, next) =
            read_digits(bytes, i).ok_or_else(|| syntax(i, "expected a generator index"))?;
        i = next;
        let generator: usize = text[generator.0..generator.1]
            .parse()
            .map_err(|_| syntax(generator.0, "generator index too large"))?;
        if generator == 0 {
            return Err(syntax(start + 1, "generator indices start at 1"));
        }
        let mut exponent: i64 = 1;
        if i < bytes.len() && bytes[i] == b'^' {
            i += 1;
            let exp_start = i;
            let negative = match bytes.get(i) {
                Some(b'-') => {
                    i += 1;
                    true
                }
                Some(b'+') => {
                    i += 1;
                    false
                }
                _ => false,
            };
            let (digits, next) =
                read_digits(bytes, i).ok_or_else(|| syntax(i, "expected an exponent"))?;
            i = next;
            let magnitude: i64 = text[digits.0..digits.1]
                .parse()
                .map_err(|_| syntax(digits.0, "exponent too large"))?;
            if magnitude == 0 {
                return Err(Error::ZeroExponent {
                    position: exp_start,
                });
            }
            exponent = if negative { -magnitude } else { magnitude };
        }
        if i < bytes.len() && !is_sep(bytes[i]) {
            return Err(syntax(i, "expected a separator"));
        }
        total += u128::from(exponent.unsigned_abs());
        if total > MAX_WORD_LEN as u128 {
            return Err(Error::WordTooLong {
                len: total,
                limit: MAX_WORD_LEN,
            });
        }
        let letter = Letter::new(generator, exponent < 0);
        letters.extend(std::iter::repeat_n(
            letter,
            exponent.unsigned_abs() as usize,
        ));
    }
    Ok(Word { letters })
}

fn read_digits(bytes: &[u8], start: usize) -> Option<((usize, usize), usize)> {
    let mut end = start;
    while end < bytes.len() && bytes[end].is_ascii_digit() {
        end += 1;
    }
    (end > start).then_some(((start, end), end))
}

fn syntax(position: usize, message: &str) -> Error {
    Error::Syntax {
        position,
        message: message.to_string(),
    }
}
