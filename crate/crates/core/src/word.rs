//! Letters, words and generating alphabets.
//!
//! Generators are written `a`, `b`, `c`, ... and their inverses `A`, `B`,
//! `C`, .... A postfix integer power is accepted when parsing (`a^3`,
//! `b^-2`); the identity may be written as the empty string or `1`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest supported rank; one lowercase letter per generator.
pub const MAX_RANK: usize = 26;

/// A signed generator letter. Generator `i` (zero-based) is stored as
/// `i + 1`, its inverse as `-(i + 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter(i8);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        assert!(generator < MAX_RANK, "generator index {generator} out of range");
        let v = generator as i8 + 1;
        Letter(if inverse { -v } else { v })
    }

    pub fn generator(self) -> usize {
        (self.0.unsigned_abs() - 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }

    /// Position in the shortlex letter order `a < A < b < B < ...`.
    pub fn rank_key(self) -> usize {
        2 * self.generator() + usize::from(self.is_inverse())
    }

    /// Inverse of [`Letter::rank_key`].
    pub fn from_rank_key(key: usize) -> Self {
        Letter::new(key / 2, key % 2 == 1)
    }

    pub fn to_char(self) -> char {
        let base = if self.is_inverse() { b'A' } else { b'a' };
        (base + self.generator() as u8) as char
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'a'..='z' => Some(Letter::new(c as usize - 'a' as usize, false)),
            'A'..='Z' => Some(Letter::new(c as usize - 'A' as usize, true)),
            _ => None,
        }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank_key().cmp(&other.rank_key())
    }
}

/// A finite sequence of letters. Equality is letter-wise; group equality
/// goes through an oracle's normal form.
///
/// The derived `Ord` is plain lexicographic; use [`shortlex_cmp`] for the
/// length-first order used for canonical representatives.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    /// Formal concatenation, no cancellation.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Formal inverse: reverse and invert every letter.
    pub fn formal_inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Formal power (negative exponents use the formal inverse).
    pub fn formal_power(&self, n: i64) -> Word {
        let base = if n < 0 { self.formal_inverse() } else { self.clone() };
        let mut v = Vec::with_capacity(base.len() * n.unsigned_abs() as usize);
        for _ in 0..n.unsigned_abs() {
            v.extend_from_slice(&base.0);
        }
        Word(v)
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n].to_vec())
    }

    /// Largest generator index used, if any.
    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.generator()).max()
    }

    /// Parse the textual form, without checking against an alphabet.
    pub fn parse(text: &str) -> Result<Word> {
        let mut letters: Vec<Letter> = Vec::new();
        let mut chars = text.chars().filter(|c| !c.is_whitespace()).peekable();
        if text.trim() == "1" {
            return Ok(Word::identity());
        }
        while let Some(c) = chars.next() {
            let l = Letter::from_char(c)
                .ok_or_else(|| Error::Input(format!("invalid character {c:?} in word {text:?}")))?;
            if chars.peek() == Some(&'^') {
                chars.next();
                let mut digits = String::new();
                if chars.peek() == Some(&'-') {
                    digits.push('-');
                    chars.next();
                }
                while let Some(d) = chars.peek().copied().filter(|d| d.is_ascii_digit()) {
                    digits.push(d);
                    chars.next();
                }
                let n: i64 = digits
                    .parse()
                    .map_err(|_| Error::Input(format!("malformed exponent in word {text:?}")))?;
                let l = if n < 0 { l.inverse() } else { l };
                letters.extend(std::iter::repeat_n(l, n.unsigned_abs() as usize));
            } else {
                letters.push(l);
            }
        }
        Ok(Word(letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// Shortlex: shorter words first, ties broken lexicographically by the
/// letter order.
pub fn shortlex_cmp(u: &Word, v: &Word) -> Ordering {
    u.len().cmp(&v.len()).then_with(|| u.letters().cmp(v.letters()))
}

/// Free reduction by a single stack pass.
pub fn free_reduce(letters: impl IntoIterator<Item = Letter>) -> Word {
    let mut out: Vec<Letter> = Vec::new();
    for l in letters {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word(out)
}

pub fn is_freely_reduced(w: &Word) -> bool {
    w.letters().windows(2).all(|p| p[0] != p[1].inverse())
}

/// Generating set `x_1..x_k` with formal inverses and a fixed letter order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneratorAlphabet {
    rank: usize,
}

impl GeneratorAlphabet {
    pub fn new(rank: usize) -> Result<Self> {
        if rank == 0 || rank > MAX_RANK {
            return Err(Error::Input(format!("rank must be in 1..={MAX_RANK}, got {rank}")));
        }
        Ok(GeneratorAlphabet { rank })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// All `2k` letters in shortlex order.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..2 * self.rank).map(Letter::from_rank_key)
    }

    pub fn contains(&self, l: Letter) -> bool {
        l.generator() < self.rank
    }

    pub fn validate(&self, w: &Word) -> Result<()> {
        match w.letters().iter().find(|l| !self.contains(**l)) {
            Some(l) => Err(Error::Input(format!(
                "letter {:?} is outside the rank-{} alphabet",
                l, self.rank
            ))),
            None => Ok(()),
        }
    }

    pub fn parse(&self, text: &str) -> Result<Word> {
        let w = Word::parse(text)?;
        self.validate(&w)?;
        Ok(w)
    }
}
