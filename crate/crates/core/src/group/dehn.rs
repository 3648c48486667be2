//! Small-cancellation groups: Dehn reduction for the word problem plus a
//! memoized Cayley ball that turns it into shortlex geodesic normal forms.
//!
//! Dehn-reduced words are not unique, so the ball is stored as the list of
//! shortlex-least geodesic words, bucketed by an abelian invariant (exponent
//! sums pushed through integer functionals vanishing on every relator) and
//! compared with Dehn's algorithm inside a bucket.

use std::collections::HashMap;
use std::sync::RwLock;

use num_rational::Ratio;

use super::Budgets;
use crate::error::{Error, Result};
use crate::word::{free_reduce, Letter, Word};

#[derive(Debug)]
pub struct SmallCancellation {
    rank: usize,
    /// Symmetrized relators: every cyclic permutation of every relator and
    /// of its inverse.
    symmetrized: Vec<Vec<Letter>>,
    functionals: Vec<Vec<i64>>,
    parity_invariant: bool,
    budgets: Budgets,
    cache: RwLock<ScBall>,
}

#[derive(Debug, Default)]
struct ScBall {
    spheres: Vec<Vec<Word>>,
    buckets: HashMap<Vec<i64>, Vec<Word>>,
    total: u64,
}

impl SmallCancellation {
    pub fn new(rank: usize, relators: &[Word], budgets: Budgets) -> Result<Self> {
        let mut cyclic: Vec<Vec<Letter>> = Vec::new();
        for r in relators {
            let c = cyclically_reduce(r);
            if c.is_empty() {
                return Err(Error::Input(format!("relator {r} is trivial")));
            }
            if let Some(p) = (1..c.len()).find(|p| c.len().is_multiple_of(*p) && (0..c.len()).all(|i| c[i] == c[i % p])) {
                return Err(Error::Input(format!(
                    "relator {r} is a proper power (period {p}); C'(1/6) needs primitive relators"
                )));
            }
            cyclic.push(c);
        }
        let mut symmetrized: Vec<Vec<Letter>> = Vec::new();
        for r in &cyclic {
            let inv: Vec<Letter> = r.iter().rev().map(|l| l.inverse()).collect();
            for base in [r, &inv] {
                for s in 0..base.len() {
                    let rot: Vec<Letter> = base[s..].iter().chain(&base[..s]).copied().collect();
                    if !symmetrized.contains(&rot) {
                        symmetrized.push(rot);
                    }
                }
            }
        }
        check_c_prime_sixth(&symmetrized)?;

        let exponent_rows: Vec<Vec<i64>> = cyclic.iter().map(|r| exponent_sums(rank, r)).collect();
        let functionals = integer_kernel(&exponent_rows, rank);
        let parity_invariant = cyclic.iter().all(|r| r.len() % 2 == 0);

        let mut cache = ScBall::default();
        cache.spheres.push(vec![Word::identity()]);
        let sc = SmallCancellation {
            rank,
            symmetrized,
            functionals,
            parity_invariant,
            budgets,
            cache: RwLock::new(ScBall::default()),
        };
        let key = sc.fingerprint(&Word::identity());
        cache.buckets.insert(key, vec![Word::identity()]);
        cache.total = 1;
        *sc.cache.write().unwrap() = cache;
        Ok(sc)
    }

    /// Dehn's algorithm: repeatedly replace more than half of a relator by
    /// the inverse of its complement. The result is freely reduced and
    /// contains no such subword; it is empty iff `w` is trivial.
    pub fn dehn_reduce(&self, w: &Word) -> Word {
        let mut cur = free_reduce(w.letters().iter().copied()).into_letters();
        'outer: loop {
            for i in 0..cur.len() {
                for rel in &self.symmetrized {
                    let lcp = cur[i..].iter().zip(rel).take_while(|(a, b)| a == b).count();
                    if 2 * lcp > rel.len() {
                        let replacement = rel[lcp..].iter().rev().map(|l| l.inverse());
                        let next: Vec<Letter> = cur[..i]
                            .iter()
                            .copied()
                            .chain(replacement)
                            .chain(cur[i + lcp..].iter().copied())
                            .collect();
                        cur = free_reduce(next).into_letters();
                        continue 'outer;
                    }
                }
            }
            return Word::from_letters(cur);
        }
    }

    pub fn is_identity(&self, w: &Word) -> bool {
        self.dehn_reduce(w).is_empty()
    }

    fn equal(&self, u: &Word, v: &Word) -> bool {
        self.is_identity(&u.formal_inverse().concat(v))
    }

    fn fingerprint(&self, w: &Word) -> Vec<i64> {
        let sums = exponent_sums(self.rank, w.letters());
        let mut key: Vec<i64> =
            self.functionals.iter().map(|f| f.iter().zip(&sums).map(|(a, b)| a * b).sum()).collect();
        if self.parity_invariant {
            key.push((w.len() % 2) as i64);
        }
        key
    }

    pub fn normal_form(&self, w: &Word) -> Result<Word> {
        let reduced = self.dehn_reduce(w);
        if reduced.len() > self.budgets.sc_radius {
            return Err(Error::Budget {
                what: "small-cancellation geodesic radius".into(),
                value: reduced.len() as u128,
                limit: self.budgets.sc_radius as u128,
            });
        }
        self.ensure_radius(reduced.len())?;
        let cache = self.cache.read().unwrap();
        let key = self.fingerprint(&reduced);
        cache
            .buckets
            .get(&key)
            .and_then(|bucket| bucket.iter().find(|v| self.equal(v, &reduced)).cloned())
            .ok_or_else(|| {
                Error::Inconclusive(format!("no ball element equals {reduced}; relators not C'(1/6)?"))
            })
    }

    /// Spheres of the memoized ball up to radius `r`, in shortlex order.
    pub fn spheres(&self, r: usize) -> Result<Vec<Vec<Word>>> {
        if r > self.budgets.sc_radius {
            return Err(Error::Budget {
                what: "small-cancellation geodesic radius".into(),
                value: r as u128,
                limit: self.budgets.sc_radius as u128,
            });
        }
        self.ensure_radius(r)?;
        Ok(self.cache.read().unwrap().spheres[..=r].to_vec())
    }

    fn ensure_radius(&self, r: usize) -> Result<()> {
        if self.cache.read().unwrap().spheres.len() > r {
            return Ok(());
        }
        let mut cache = self.cache.write().unwrap();
        while cache.spheres.len() <= r {
            let k = cache.spheres.len() - 1;
            let mut next: Vec<Word> = Vec::new();
            // Shortlex order on the sphere and letter order on extensions make
            // the first word found for each element its shortlex-least
            // geodesic.
            let sphere = cache.spheres[k].clone();
            let mut fresh: HashMap<Vec<i64>, Vec<Word>> = HashMap::new();
            for u in &sphere {
                for key in 0..2 * self.rank {
                    let x = Letter::from_rank_key(key);
                    if u.last() == Some(x.inverse()) {
                        continue;
                    }
                    let mut cand = u.clone();
                    cand.push(x);
                    let fp = self.fingerprint(&cand);
                    let known = [&cache.buckets, &fresh].iter().any(|b| {
                        b.get(&fp).is_some_and(|bucket| bucket.iter().any(|v| self.equal(v, &cand)))
                    });
                    if known {
                        continue;
                    }
                    fresh.entry(fp).or_default().push(cand.clone());
                    next.push(cand);
                    if cache.total + next.len() as u64 > self.budgets.ball_cap {
                        return Err(Error::Budget {
                            what: "ball size".into(),
                            value: (cache.total + next.len() as u64) as u128,
                            limit: self.budgets.ball_cap as u128,
                        });
                    }
                }
            }
            for (fp, words) in fresh {
                cache.buckets.entry(fp).or_default().extend(words);
            }
            cache.total += next.len() as u64;
            cache.spheres.push(next);
        }
        Ok(())
    }
}

fn cyclically_reduce(w: &Word) -> Vec<Letter> {
    let mut v = free_reduce(w.letters().iter().copied()).into_letters();
    while v.len() >= 2 && v[0] == v[v.len() - 1].inverse() {
        v.pop();
        v.remove(0);
    }
    v
}

/// Every piece (common prefix of two distinct symmetrized relators) must be
/// shorter than a sixth of each relator containing it.
fn check_c_prime_sixth(symmetrized: &[Vec<Letter>]) -> Result<()> {
    for (i, r1) in symmetrized.iter().enumerate() {
        for r2 in &symmetrized[i + 1..] {
            let piece = r1.iter().zip(r2).take_while(|(a, b)| a == b).count();
            if 6 * piece >= r1.len().min(r2.len()) {
                return Err(Error::Input(format!(
                    "relators violate C'(1/6): piece of length {piece} between {} and {}",
                    Word::from_letters(r1.clone()),
                    Word::from_letters(r2.clone())
                )));
            }
        }
    }
    Ok(())
}

fn exponent_sums(rank: usize, letters: &[Letter]) -> Vec<i64> {
    let mut sums = vec![0i64; rank];
    for l in letters {
        sums[l.generator()] += if l.is_inverse() { -1 } else { 1 };
    }
    sums
}

/// Integer basis of `{ x in Z^n : row . x = 0 for every row }`.
fn integer_kernel(rows: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<Ratio<i64>>> =
        rows.iter().map(|r| r.iter().map(|&v| Ratio::from_integer(v)).collect()).collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..m.len()).find(|&i| m[i][col] != Ratio::from_integer(0)) else {
            continue;
        };
        m.swap(row, p);
        let pv = m[row][col];
        for v in m[row].iter_mut() {
            *v /= pv;
        }
        for i in 0..m.len() {
            if i != row && m[i][col] != Ratio::from_integer(0) {
                let factor = m[i][col];
                let pivot_row = m[row].clone();
                for (x, p) in m[i].iter_mut().zip(&pivot_row).take(n) {
                    *x -= factor * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Ratio::from_integer(0i64); n];
        v[free] = Ratio::from_integer(1);
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[r][free];
        }
        let lcm = v.iter().fold(1i64, |acc, x| num_integer_lcm(acc, *x.denom()));
        basis.push(v.iter().map(|x| (x * Ratio::from_integer(lcm)).to_integer()).collect());
    }
    basis
}

fn num_integer_lcm(a: i64, b: i64) -> i64 {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}
