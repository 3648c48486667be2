//! Axes of elements of free groups and shortest-point projections onto them.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::group::{ball, GroupOracle};
use crate::word::{free_reduce, Word};

/// Largest orbit index examined by projections.
pub const AXIS_WINDOW_CAP: usize = 64;

/// Translated axis `g · E(f) o` where `E(f) = <u>` for the primitive root `u`
/// of `f`. Vertices are `g u^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Axis {
    translate: Word,
    element: Word,
    root: Word,
    /// Cyclically reduced length of the root; `|u^n| = 2 * conj + |n| * this`.
    cyclic_len: usize,
}

fn require_free(oracle: &GroupOracle) -> Result<()> {
    if oracle.is_free() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("axes are implemented for free groups, got {}", oracle.presentation())))
    }
}

/// Split a reduced word as `c v c^-1` with `v` cyclically reduced.
fn cyclic_split(w: &Word) -> (Word, Word) {
    let l = w.letters();
    let mut k = 0;
    while 2 * k + 1 < l.len() && l[k] == l[l.len() - 1 - k].inverse() {
        k += 1;
    }
    (Word::from_letters(l[..k].to_vec()), Word::from_letters(l[k..l.len() - k].to_vec()))
}

/// The `u` with `f = u^m` and `m` maximal, by cyclic reduction and period
/// detection on the cyclic core.
pub fn primitive_root(oracle: &GroupOracle, f: &Word) -> Result<Word> {
    require_free(oracle)?;
    let f = oracle.normal_form(f)?;
    if f.is_empty() {
        return Err(Error::Input("the identity has no primitive root".into()));
    }
    let (conj, core) = cyclic_split(&f);
    let n = core.len();
    let c = core.letters();
    let period = (1..=n).find(|&p| n % p == 0 && (0..n).all(|i| c[i] == c[i % p])).expect("p = n works");
    let root_core = Word::from_letters(c[..period].to_vec());
    Ok(conj.concat(&root_core).concat(&conj.formal_inverse()))
}

impl Axis {
    pub fn new(oracle: &GroupOracle, f: &Word) -> Result<Axis> {
        let root = primitive_root(oracle, f)?;
        let (_, core) = cyclic_split(&root);
        Ok(Axis { translate: Word::identity(), element: oracle.normal_form(f)?, root, cyclic_len: core.len() })
    }

    /// `g · self`.
    pub fn translated(&self, oracle: &GroupOracle, g: &Word) -> Result<Axis> {
        Ok(Axis { translate: oracle.multiply(g, &self.translate)?, ..self.clone() })
    }

    pub fn translate(&self) -> &Word {
        &self.translate
    }

    /// The element `f` the axis was built from.
    pub fn element(&self) -> &Word {
        &self.element
    }

    pub fn root(&self) -> &Word {
        &self.root
    }

    /// `g u^n` in normal form.
    pub fn vertex(&self, n: i64) -> Word {
        free_reduce(self.translate.concat(&self.root.formal_power(n)).letters().iter().copied())
    }

    /// Orbit vertices for `|n| <= n_max`, ordered by `n`.
    pub fn window(&self, n_max: usize) -> Vec<Word> {
        let n = n_max as i64;
        (-n..=n).map(|i| self.vertex(i)).collect()
    }

    /// `|u^k|` for the orbit step `k`.
    pub fn step_length(&self, k: i64) -> usize {
        if k == 0 {
            0
        } else {
            self.root.len() - self.cyclic_len + k.unsigned_abs() as usize * self.cyclic_len
        }
    }

    /// Orbit index of `x` if `x` lies on the axis.
    pub fn index_of(&self, x: &Word) -> Option<i64> {
        let y = free_reduce(self.translate.formal_inverse().concat(x).letters().iter().copied());
        let bound = (y.len() / self.cyclic_len) as i64 + 1;
        (-bound..=bound).find(|&n| free_reduce(self.root.formal_power(n).letters().iter().copied()) == y)
    }

    pub fn contains(&self, x: &Word) -> bool {
        self.index_of(x).is_some()
    }

    /// Same vertex set: same cyclic subgroup and translates in the same coset.
    pub fn same_set(&self, other: &Axis) -> bool {
        let same_group = self.root == other.root || self.root == other.root.formal_inverse();
        same_group && self.contains(&other.translate)
    }

    /// Orbit indices at minimal distance from `x`, with that distance.
    ///
    /// In a free group `d(x, g u^n) >= |n| c - |g^-1 x|` for the cyclic length
    /// `c`, so every minimizer has `|n| <= 2 |g^-1 x| / c`; windows past the
    /// cap are refused as inconclusive.
    pub fn project_indices(&self, x: &Word) -> Result<(usize, Vec<i64>)> {
        let y = free_reduce(self.translate.formal_inverse().concat(x).letters().iter().copied());
        let reach = 2 * y.len() / self.cyclic_len;
        if reach > AXIS_WINDOW_CAP {
            return Err(Error::Inconclusive(format!(
                "projection of {x} needs {reach} axis translates, cap is {AXIS_WINDOW_CAP}"
            )));
        }
        let reach = reach as i64;
        let mut best = usize::MAX;
        let mut argmin = Vec::new();
        for n in -reach..=reach {
            let d = free_reduce(self.root.formal_power(-n).concat(&y).letters().iter().copied()).len();
            match d.cmp(&best) {
                std::cmp::Ordering::Less => {
                    best = d;
                    argmin = vec![n];
                }
                std::cmp::Ordering::Equal => argmin.push(n),
                std::cmp::Ordering::Greater => {}
            }
        }
        Ok((best, argmin))
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.translate.is_empty() {
            write!(f, "Ax({})", self.element)
        } else {
            write!(f, "{}.Ax({})", self.translate, self.element)
        }
    }
}

/// Shortest-point projection of `x` to the axis vertex set.
pub fn project(oracle: &GroupOracle, axis: &Axis, x: &Word) -> Result<Vec<Word>> {
    require_free(oracle)?;
    let x = oracle.normal_form(x)?;
    let (_, idx) = axis.project_indices(&x)?;
    Ok(idx.into_iter().map(|n| axis.vertex(n)).collect())
}

/// Diameter of the union of the projections of `points`.
pub fn projection_diameter(oracle: &GroupOracle, axis: &Axis, points: &[Word]) -> Result<usize> {
    require_free(oracle)?;
    let mut lo = i64::MAX;
    let mut hi = i64::MIN;
    for p in points {
        let (_, idx) = axis.project_indices(&oracle.normal_form(p)?)?;
        lo = lo.min(idx[0]);
        hi = hi.max(*idx.last().expect("nonempty projection"));
    }
    if points.is_empty() {
        return Ok(0);
    }
    // |u^k| grows with |k|, so the extreme indices realize the diameter.
    Ok(axis.step_length(hi - lo))
}

/// Maximum number of point pairs examined before switching to a stride.
pub const CONTRACTION_PAIR_LIMIT: usize = 100_000;

/// Least `C` such that every sampled geodesic between points of `B(r_sample)`
/// staying at distance at least `max(C, 1)` from the axis projects to a set
/// of diameter at most `C`.
pub fn contraction_constant(oracle: &GroupOracle, axis: &Axis, r_sample: usize) -> Result<usize> {
    require_free(oracle)?;
    let points = ball(oracle, r_sample)?.to_vec();
    let n = points.len();
    let total = n * (n - 1) / 2;
    let stride = total.div_ceil(CONTRACTION_PAIR_LIMIT).max(1);
    let mut memo: HashMap<Word, (usize, i64, i64)> = HashMap::new();
    let mut samples: Vec<(usize, usize)> = Vec::new();
    let mut pair = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            pair += 1;
            if !(pair - 1).is_multiple_of(stride) {
                continue;
            }
            let (x, y) = (&points[i], &points[j]);
            let mut dist = usize::MAX;
            let (mut lo, mut hi) = (i64::MAX, i64::MIN);
            for step in oracle.geodesic(&x.formal_inverse().concat(y))? {
                let v = oracle.multiply(x, &step)?;
                let entry = match memo.get(&v) {
                    Some(e) => *e,
                    None => {
                        let (d, idx) = axis.project_indices(&v)?;
                        let e = (d, idx[0], *idx.last().unwrap());
                        memo.insert(v, e);
                        e
                    }
                };
                dist = dist.min(entry.0);
                lo = lo.min(entry.1);
                hi = hi.max(entry.2);
            }
            samples.push((dist, axis.step_length(hi - lo)));
        }
    }
    let max_diam = samples.iter().map(|s| s.1).max().unwrap_or(0);
    Ok((0..=max_diam)
        .find(|&c| samples.iter().all(|&(dist, diam)| dist < c.max(1) || diam <= c))
        .unwrap_or(max_diam))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn f2() -> GroupOracle {
        GroupOracle::free(2).unwrap()
    }

    #[test]
    fn primitive_roots() {
        let g = f2();
        assert_eq!(primitive_root(&g, &w("aaaa")).unwrap(), w("a"));
        assert_eq!(primitive_root(&g, &w("abab")).unwrap(), w("ab"));
        let root = primitive_root(&g, &w("abAabA")).unwrap();
        assert_eq!(root, w("abA"));
        assert_eq!(g.multiply(&root, &root).unwrap(), g.normal_form(&w("abAabA")).unwrap());
        assert_eq!(primitive_root(&g, &w("ab")).unwrap(), w("ab"));
        assert!(matches!(primitive_root(&g, &w("aA")), Err(Error::Input(_))));
    }

    #[test]
    fn projections_in_the_tree() {
        let g = f2();
        let ax = Axis::new(&g, &w("a")).unwrap();
        assert_eq!(project(&g, &ax, &w("baaa")).unwrap(), vec![w("")]);
        assert_eq!(project(&g, &ax, &w("aaaaabb")).unwrap(), vec![w("aaaaa")]);
        assert_eq!(project(&g, &ax, &w("aa")).unwrap(), vec![w("aa")]);
    }

    #[test]
    fn projection_diameters() {
        let g = f2();
        let ax = Axis::new(&g, &w("a")).unwrap();
        let geo_b5 = g.geodesic(&w("b^5")).unwrap();
        assert_eq!(projection_diameter(&g, &ax, &geo_b5).unwrap(), 0);
        assert_eq!(projection_diameter(&g, &ax, &[w(""), w("aaa")]).unwrap(), 3);
        let geo = g.geodesic(&w("aaabb")).unwrap();
        assert_eq!(projection_diameter(&g, &ax, &geo).unwrap(), 3);
    }

    #[test]
    fn contraction_constants() {
        let g = f2();
        assert_eq!(contraction_constant(&g, &Axis::new(&g, &w("a")).unwrap(), 3).unwrap(), 0);
        let c = contraction_constant(&g, &Axis::new(&g, &w("ab")).unwrap(), 5).unwrap();
        assert!(c <= 2, "C = {c}");
        let z = GroupOracle::free(1).unwrap();
        assert_eq!(contraction_constant(&z, &Axis::new(&z, &w("a")).unwrap(), 4).unwrap(), 0);
    }

    #[test]
    fn axis_membership_and_equality() {
        let g = f2();
        let ax = Axis::new(&g, &w("aa")).unwrap();
        assert_eq!(ax.root(), &w("a"));
        assert!(ax.contains(&w("AAA")));
        assert!(!ax.contains(&w("b")));
        let moved = ax.translated(&g, &w("a^4")).unwrap();
        assert!(moved.same_set(&ax));
        let other = ax.translated(&g, &w("b")).unwrap();
        assert!(!other.same_set(&ax));
        assert_eq!(other.vertex(2), w("baa"));
        assert!(Axis::new(&g, &w("A")).unwrap().same_set(&ax));
    }

    #[test]
    fn window_cap_is_inconclusive() {
        let g = f2();
        let ax = Axis::new(&g, &w("a")).unwrap();
        let far = w("b").formal_power(40);
        assert!(matches!(project(&g, &ax, &far), Err(Error::Inconclusive(_))));
    }
}
