//! `(ε, f)`-barriers on geodesics and barrier-free statistics.

use std::io::Write;

use crate::error::{Error, Result};
use crate::group::{ball, GroupOracle};
use crate::word::{shortlex_cmp, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarrierRecord {
    pub witness: Word,
    pub epsilon: usize,
    pub f: Word,
    /// Indices of path vertices nearest to `t` and to `t f` (first on ties).
    pub positions: (usize, usize),
}

fn nearest(oracle: &GroupOracle, path: &[Word], x: &Word) -> Result<(usize, usize)> {
    let mut best = (usize::MAX, 0);
    for (i, p) in path.iter().enumerate() {
        let d = oracle.distance(p, x)?;
        if d < best.0 {
            best = (d, i);
        }
    }
    Ok(best)
}

/// Every barrier witness on `path`, shortlex in `t`.
///
/// A witness has `t` within `epsilon` of some path vertex, so candidates are
/// `p s` with `p` on the path and `|s| <= epsilon`.
pub fn barrier_witnesses(oracle: &GroupOracle, path: &[Word], epsilon: usize, f: &Word) -> Result<Vec<BarrierRecord>> {
    let f = oracle.normal_form(f)?;
    let offsets = ball(oracle, epsilon)?.to_vec();
    let mut candidates = Vec::with_capacity(path.len() * offsets.len());
    for p in path {
        for s in &offsets {
            candidates.push(oracle.multiply(p, s)?);
        }
    }
    candidates.sort_by(shortlex_cmp);
    candidates.dedup();
    let mut out = Vec::new();
    for t in candidates {
        let (dt, it) = nearest(oracle, path, &t)?;
        let (df, jf) = nearest(oracle, path, &oracle.multiply(&t, &f)?)?;
        if dt <= epsilon && df <= epsilon {
            out.push(BarrierRecord { witness: t, epsilon, f: f.clone(), positions: (it, jf) });
        }
    }
    Ok(out)
}

/// The shortlex-first barrier witness on `path`, if any.
pub fn has_barrier(oracle: &GroupOracle, path: &[Word], epsilon: usize, f: &Word) -> Result<Option<BarrierRecord>> {
    Ok(barrier_witnesses(oracle, path, epsilon, f)?.into_iter().next())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarrierFreeSet {
    /// Barrier-free elements of the ball, shortlex.
    pub elements: Vec<Word>,
    pub total: usize,
    /// `|f| <= 2 epsilon`: a translate of `[1, f]` with its midpoint on the
    /// path is a witness, so nothing is barrier-free.
    pub degenerate: bool,
}

impl BarrierFreeSet {
    pub fn fraction(&self) -> f64 {
        self.elements.len() as f64 / self.total as f64
    }
}

/// Is some geodesic from `B(1, m)` to `B(g, m)` free of `(ε, f)`-barriers?
fn is_barrier_free(oracle: &GroupOracle, g: &Word, epsilon: usize, m: usize, f: &Word) -> Result<bool> {
    if m == 0 {
        return Ok(has_barrier(oracle, &oracle.geodesic(g)?, epsilon, f)?.is_none());
    }
    let near = ball(oracle, m)?.to_vec();
    for x in &near {
        for y in &near {
            let end = oracle.multiply(g, y)?;
            let path: Vec<Word> = oracle
                .geodesic(&oracle.multiply(&oracle.invert(x)?, &end)?)?
                .iter()
                .map(|p| oracle.multiply(x, p))
                .collect::<Result<_>>()?;
            if has_barrier(oracle, &path, epsilon, f)?.is_none() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// The `(ε, M, f)`-barrier-free elements of `B(r)`.
pub fn barrier_free_set(oracle: &GroupOracle, epsilon: usize, m: usize, f: &Word, r: usize) -> Result<BarrierFreeSet> {
    if m > 0 && !oracle.is_free() {
        return Err(Error::Unsupported(format!(
            "barrier-free sets with M > 0 need unique geodesics, got {}",
            oracle.presentation()
        )));
    }
    let f = oracle.normal_form(f)?;
    let b = ball(oracle, r)?;
    let mut elements = Vec::new();
    for g in b.iter() {
        if is_barrier_free(oracle, g, epsilon, m, &f)? {
            elements.push(g.clone());
        }
    }
    Ok(BarrierFreeSet { elements, total: b.len(), degenerate: f.len() <= 2 * epsilon })
}

/// Fraction of `[1, g]` covered by barrier-free stretches of length at least
/// `l_min`.
///
/// A witness blocks the stretch of the geodesic between the vertices nearest
/// to `t` and `t f`; the maximal barrier-free pieces are the runs of edges
/// no witness blocks. A geodesic with no witness at all counts in full.
pub fn barrier_free_portion(oracle: &GroupOracle, g: &Word, epsilon: usize, f: &Word, l_min: usize) -> Result<f64> {
    let path = oracle.geodesic(g)?;
    let witnesses = barrier_witnesses(oracle, &path, epsilon, f)?;
    Ok(portion_from_witnesses(path.len() - 1, &witnesses, l_min))
}

/// [`barrier_free_portion`] for a geodesic with `edges` edges and known
/// witnesses.
pub fn portion_from_witnesses(edges: usize, witnesses: &[BarrierRecord], l_min: usize) -> f64 {
    if edges == 0 {
        return 0.0;
    }
    if witnesses.is_empty() {
        return 1.0;
    }
    let mut blocked = vec![false; edges];
    for rec in witnesses {
        let (i, j) = rec.positions;
        let (lo, hi) = (i.min(j), i.max(j));
        blocked[lo..hi].iter_mut().for_each(|e| *e = true);
        if lo == hi {
            // A witness pinned at one vertex blocks the edges meeting it.
            if lo > 0 {
                blocked[lo - 1] = true;
            }
            if lo < edges {
                blocked[lo] = true;
            }
        }
    }
    let mut free = 0;
    let mut run = 0;
    for &b in blocked.iter().chain(std::iter::once(&true)) {
        if b {
            if run >= l_min {
                free += run;
            }
            run = 0;
        } else {
            run += 1;
        }
    }
    free as f64 / edges as f64
}

#[derive(Clone, Debug, PartialEq)]
pub struct BarrierStatsRow {
    pub r: usize,
    pub total: usize,
    pub barrier_free: usize,
    pub fraction: f64,
}

/// Barrier-free counts over `B(r)` for each `r` in `radii`.
pub fn barrier_stats(
    oracle: &GroupOracle,
    epsilon: usize,
    m: usize,
    f: &Word,
    radii: std::ops::RangeInclusive<usize>,
) -> Result<Vec<BarrierStatsRow>> {
    let r_max = *radii.end();
    let set = barrier_free_set(oracle, epsilon, m, f, r_max)?;
    let counts = ball(oracle, r_max)?.cumulative_counts();
    Ok(radii
        .map(|r| {
            let free = set.elements.iter().filter(|g| g.len() <= r).count();
            let total = counts[r] as usize;
            BarrierStatsRow { r, total, barrier_free: free, fraction: free as f64 / total as f64 }
        })
        .collect())
}

/// CSV with header `r,total,barrier_free,fraction`.
pub fn write_barrier_stats_csv<W: Write>(rows: &[BarrierStatsRow], out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["r", "total", "barrier_free", "fraction"])?;
    for row in rows {
        wtr.write_record([
            row.r.to_string(),
            row.total.to_string(),
            row.barrier_free.to_string(),
            row.fraction.to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
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
    fn witnesses_on_simple_paths() {
        let g = f2();
        let rec = has_barrier(&g, &g.geodesic(&w("a^5")).unwrap(), 0, &w("aa")).unwrap().unwrap();
        assert_eq!(rec.witness, w(""));
        assert_eq!(rec.positions, (0, 2));
        assert!(has_barrier(&g, &g.geodesic(&w("b^5")).unwrap(), 0, &w("a")).unwrap().is_none());
    }

    #[test]
    fn witnesses_with_slack() {
        let g = f2();
        let path = g.geodesic(&w("aaabaaa")).unwrap();
        let all = barrier_witnesses(&g, &path, 1, &w("aaa")).unwrap();
        let ts: Vec<&Word> = all.iter().map(|r| &r.witness).collect();
        assert_eq!(ts[0], &w(""));
        assert!(ts.contains(&&w("aaab")));
        for rec in &all {
            let tf = g.multiply(&rec.witness, &rec.f).unwrap();
            assert!(path.iter().any(|p| g.distance(p, &rec.witness).unwrap() <= 1));
            assert!(path.iter().any(|p| g.distance(p, &tf).unwrap() <= 1));
        }
    }

    #[test]
    fn barrier_free_set_matches_brute_force() {
        let g = f2();
        let set = barrier_free_set(&g, 0, 0, &w("a"), 2).unwrap();
        // Brute force: no two prefixes differ by right multiplication by a.
        let mut expected = Vec::new();
        for x in ball(&g, 2).unwrap().iter() {
            let path = g.geodesic(x).unwrap();
            let hit = path.iter().any(|p| path.contains(&g.multiply(p, &w("a")).unwrap()));
            if !hit {
                expected.push(x.clone());
            }
        }
        assert_eq!(set.elements, expected);
        assert_eq!(set.elements, vec![w(""), w("b"), w("B"), w("bb"), w("BB")]);
        assert!(!set.degenerate);
    }

    #[test]
    fn long_f_leaves_the_ball_free() {
        let g = f2();
        let set = barrier_free_set(&g, 0, 0, &w("ababa"), 2).unwrap();
        assert_eq!(set.elements.len(), set.total);
        let degenerate = barrier_free_set(&g, 2, 0, &w("ab"), 2).unwrap();
        assert!(degenerate.degenerate);
        assert!(degenerate.elements.is_empty());
    }

    #[test]
    fn barrier_free_with_buffer_radius() {
        let g = f2();
        let m0 = barrier_free_set(&g, 0, 0, &w("a"), 2).unwrap();
        let m1 = barrier_free_set(&g, 0, 1, &w("a"), 2).unwrap();
        assert!(m0.elements.iter().all(|x| m1.elements.contains(x)));
        let fp = GroupOracle::free_product(vec![Some(2), None]).unwrap();
        assert!(matches!(barrier_free_set(&fp, 0, 1, &w("b"), 1), Err(Error::Unsupported(_))));
    }

    #[test]
    fn portions() {
        let g = f2();
        assert_eq!(barrier_free_portion(&g, &w("b^10"), 0, &w("a"), 3).unwrap(), 1.0);
        assert_eq!(barrier_free_portion(&g, &w("a^10"), 0, &w("a"), 1).unwrap(), 0.0);
        assert_eq!(barrier_free_portion(&g, &w("a^5b^5"), 0, &w("aa"), 3).unwrap(), 0.5);
        assert_eq!(barrier_free_portion(&g, &w(""), 0, &w("a"), 1).unwrap(), 0.0);
    }

    #[test]
    fn stats_csv() {
        let g = f2();
        let rows = barrier_stats(&g, 0, 0, &w("a"), 0..=2).unwrap();
        assert_eq!(rows[2].total, 17);
        assert_eq!(rows[2].barrier_free, 5);
        let mut buf = Vec::new();
        write_barrier_stats_csv(&rows[..2], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "r,total,barrier_free,fraction\n0,1,1,1\n1,5,3,0.6\n");
    }
}
