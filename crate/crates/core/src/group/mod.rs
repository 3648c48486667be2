//! Concrete groups given by normal-form oracles.
//!
//! Three families are supported: free groups, free products of cyclic groups
//! and small-cancellation groups satisfying C'(1/6). Normal forms are
//! shortlex-least geodesic words, so the length of the normal form is the
//! word metric `|g| = d(1, g)` and the prefixes of a normal form trace a
//! geodesic from the identity.

mod ball;
mod dehn;

use std::fmt;

pub use ball::{ball, growth_table, Ball, GrowthTable};
pub use dehn::SmallCancellation;

use crate::error::{Error, Result};
use crate::word::{free_reduce, GeneratorAlphabet, Letter, Word};

/// Default cap on the number of stored ball elements.
pub const DEFAULT_BALL_CAP: u64 = 100_000_000;
/// Default radius up to which small-cancellation geodesics are computed.
pub const DEFAULT_SC_RADIUS: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budgets {
    pub ball_cap: u64,
    pub sc_radius: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { ball_cap: DEFAULT_BALL_CAP, sc_radius: DEFAULT_SC_RADIUS }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Presentation {
    Free { rank: usize },
    /// One cyclic factor per generator; `None` is an infinite cyclic factor.
    FreeProduct { orders: Vec<Option<u32>> },
    SmallCancellation { relators: Vec<Word> },
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Presentation::Free { rank } => write!(f, "F_{rank}"),
            Presentation::FreeProduct { orders } => {
                let parts: Vec<String> = orders
                    .iter()
                    .map(|o| match o {
                        Some(n) => format!("Z/{n}"),
                        None => "Z".to_string(),
                    })
                    .collect();
                write!(f, "{}", parts.join(" * "))
            }
            Presentation::SmallCancellation { relators } => {
                let rels: Vec<String> = relators.iter().map(|r| r.to_string()).collect();
                write!(f, "<| {} >", rels.join(", "))
            }
        }
    }
}

#[derive(Debug)]
pub struct GroupOracle {
    alphabet: GeneratorAlphabet,
    presentation: Presentation,
    budgets: Budgets,
    small_cancellation: Option<SmallCancellation>,
}

impl GroupOracle {
    pub fn free(rank: usize) -> Result<Self> {
        Self::with_budgets(Presentation::Free { rank }, Budgets::default())
    }

    pub fn free_product(orders: Vec<Option<u32>>) -> Result<Self> {
        Self::with_budgets(Presentation::FreeProduct { orders }, Budgets::default())
    }

    /// Small-cancellation group on `rank` generators.
    pub fn small_cancellation(rank: usize, relators: Vec<Word>) -> Result<Self> {
        Self::build(rank, Presentation::SmallCancellation { relators }, Budgets::default())
    }

    pub fn with_budgets(presentation: Presentation, budgets: Budgets) -> Result<Self> {
        let rank = match &presentation {
            Presentation::Free { rank } => *rank,
            Presentation::FreeProduct { orders } => orders.len(),
            Presentation::SmallCancellation { relators } => {
                relators.iter().filter_map(|r| r.max_generator()).max().map_or(1, |g| g + 1)
            }
        };
        Self::build(rank, presentation, budgets)
    }

    pub fn build(rank: usize, presentation: Presentation, budgets: Budgets) -> Result<Self> {
        let alphabet = GeneratorAlphabet::new(rank)?;
        let mut small_cancellation = None;
        match &presentation {
            Presentation::Free { rank: r } if *r != rank => {
                return Err(Error::Input("rank mismatch".into()));
            }
            Presentation::FreeProduct { orders } => {
                if orders.len() != rank {
                    return Err(Error::Input("one order per generator is required".into()));
                }
                if let Some(bad) = orders.iter().flatten().find(|n| **n < 2) {
                    return Err(Error::Input(format!("cyclic factor order must be >= 2, got {bad}")));
                }
            }
            Presentation::SmallCancellation { relators } => {
                for r in relators {
                    alphabet.validate(r)?;
                }
                small_cancellation = Some(SmallCancellation::new(rank, relators, budgets)?);
            }
            _ => {}
        }
        Ok(GroupOracle { alphabet, presentation, budgets, small_cancellation })
    }

    pub fn alphabet(&self) -> GeneratorAlphabet {
        self.alphabet
    }

    pub fn rank(&self) -> usize {
        self.alphabet.rank()
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn budgets(&self) -> Budgets {
        self.budgets
    }

    pub fn is_free(&self) -> bool {
        matches!(self.presentation, Presentation::Free { .. })
    }

    pub(crate) fn small_cancellation_engine(&self) -> Option<&SmallCancellation> {
        self.small_cancellation.as_ref()
    }

    /// Canonical representative: the shortlex-least geodesic word.
    pub fn normal_form(&self, w: &Word) -> Result<Word> {
        self.alphabet.validate(w)?;
        Ok(match &self.presentation {
            Presentation::Free { .. } => free_reduce(w.letters().iter().copied()),
            Presentation::FreeProduct { orders } => free_product_normal_form(orders, w),
            Presentation::SmallCancellation { .. } => {
                self.small_cancellation.as_ref().expect("engine present").normal_form(w)?
            }
        })
    }

    pub fn multiply(&self, u: &Word, v: &Word) -> Result<Word> {
        self.normal_form(&u.concat(v))
    }

    pub fn invert(&self, u: &Word) -> Result<Word> {
        self.normal_form(&u.formal_inverse())
    }

    /// `|w| = d(1, w)`.
    pub fn word_length(&self, w: &Word) -> Result<usize> {
        Ok(self.normal_form(w)?.len())
    }

    /// `d(u, v) = |u^{-1} v|`.
    pub fn distance(&self, u: &Word, v: &Word) -> Result<usize> {
        self.word_length(&u.formal_inverse().concat(v))
    }

    /// Shortlex-least geodesic from the identity to `g`, as its vertex
    /// sequence (`|g| + 1` normal forms).
    pub fn geodesic(&self, g: &Word) -> Result<Vec<Word>> {
        let nf = self.normal_form(g)?;
        Ok((0..=nf.len()).map(|i| nf.prefix(i)).collect())
    }

    /// Letters that can extend a normal form of length `r` to one of length
    /// `r + 1`, in letter order. Used by ball enumeration.
    pub(crate) fn extend_sphere(&self, u: &Word) -> Result<Vec<Word>> {
        let r = u.len();
        let mut out = Vec::new();
        for x in self.alphabet.letters() {
            if u.last() == Some(x.inverse()) {
                continue;
            }
            let w = match self.presentation {
                Presentation::Free { .. } => {
                    let mut w = u.clone();
                    w.push(x);
                    w
                }
                _ => self.normal_form(&u.concat(&Word::letter(x)))?,
            };
            if w.len() == r + 1 {
                out.push(w);
            }
        }
        Ok(out)
    }
}

fn free_product_normal_form(orders: &[Option<u32>], w: &Word) -> Word {
    // Stack of syllables (generator, exponent); finite exponents kept in [1, n).
    let mut syllables: Vec<(usize, i64)> = Vec::new();
    for l in w.letters() {
        let g = l.generator();
        let step = if l.is_inverse() { -1 } else { 1 };
        let reduce = |e: i64| match orders[g] {
            Some(n) => e.rem_euclid(n as i64),
            None => e,
        };
        match syllables.last_mut() {
            Some((top, e)) if *top == g => {
                *e = reduce(*e + step);
                if *e == 0 {
                    syllables.pop();
                }
            }
            _ => {
                let e = reduce(step);
                if e != 0 {
                    syllables.push((g, e));
                }
            }
        }
    }
    let mut out = Vec::new();
    for (g, e) in syllables {
        // Shortest spelling of x^e; ties go to the positive letter.
        let (len, inverse) = match orders[g] {
            Some(n) => {
                let n = n as i64;
                if e <= n - e {
                    (e, false)
                } else {
                    (n - e, true)
                }
            }
            None => (e.abs(), e < 0),
        };
        out.extend(std::iter::repeat_n(Letter::new(g, inverse), len as usize));
    }
    Word::from_letters(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn free_group_normal_forms() {
        let f2 = GroupOracle::free(2).unwrap();
        assert_eq!(f2.normal_form(&w("aAb")).unwrap(), w("b"));
        assert_eq!(f2.normal_form(&w("")).unwrap(), w(""));
        assert_eq!(f2.multiply(&w("ab"), &w("B")).unwrap(), w("a"));
        assert_eq!(f2.invert(&w("ab")).unwrap(), w("BA"));
        assert_eq!(f2.word_length(&w("aA")).unwrap(), 0);
        assert_eq!(f2.word_length(&w("aba")).unwrap(), 3);
        assert!(matches!(f2.normal_form(&w("c")), Err(Error::Input(_))));
    }

    #[test]
    fn free_product_of_cyclics() {
        let g = GroupOracle::free_product(vec![Some(2), None]).unwrap();
        assert_eq!(g.normal_form(&w("aab")).unwrap(), w("b"));
        assert_eq!(g.multiply(&w("a"), &w("a")).unwrap(), w(""));
        assert_eq!(g.word_length(&w("aa")).unwrap(), 0);
        assert_eq!(g.normal_form(&w("A")).unwrap(), w("a"));
        let z5 = GroupOracle::free_product(vec![Some(5), Some(4)]).unwrap();
        assert_eq!(z5.normal_form(&w("aaa")).unwrap(), w("AA"));
        assert_eq!(z5.normal_form(&w("BB")).unwrap(), w("bb"));
        assert_eq!(z5.normal_form(&w("aaaaab")).unwrap(), w("b"));
        assert!(GroupOracle::free_product(vec![Some(1)]).is_err());
    }

    #[test]
    fn geodesics_are_prefix_paths() {
        let f2 = GroupOracle::free(2).unwrap();
        assert_eq!(f2.geodesic(&w("ab")).unwrap(), vec![w(""), w("a"), w("ab")]);
        assert_eq!(f2.geodesic(&w("")).unwrap(), vec![w("")]);
        let g = GroupOracle::free_product(vec![Some(2), None]).unwrap();
        assert_eq!(g.geodesic(&w("ab")).unwrap(), vec![w(""), w("a"), w("ab")]);
    }
}
