//! Breadth-first enumeration of Cayley balls and orbital growth tables.

use std::collections::HashSet;
use std::io::Write;

use rayon::prelude::*;

use super::{GroupOracle, Presentation};
use crate::error::{Error, Result};
use crate::fit::{growth_window, log_linear_fit};
use crate::word::{shortlex_cmp, Word};

/// The ball `B(r)` stored sphere by sphere; each sphere is sorted shortlex.
#[derive(Clone, Debug)]
pub struct Ball {
    spheres: Vec<Vec<Word>>,
}

impl Ball {
    pub fn radius(&self) -> usize {
        self.spheres.len() - 1
    }

    pub fn len(&self) -> usize {
        self.spheres.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sphere(&self, r: usize) -> &[Word] {
        &self.spheres[r]
    }

    /// `#B(r)` for every `r` up to the radius.
    pub fn cumulative_counts(&self) -> Vec<u64> {
        self.spheres
            .iter()
            .scan(0u64, |acc, s| {
                *acc += s.len() as u64;
                Some(*acc)
            })
            .collect()
    }

    /// Elements in shortlex order.
    pub fn iter(&self) -> impl Iterator<Item = &Word> + '_ {
        self.spheres.iter().flatten()
    }

    /// Elements of `B(r)` for `r` at most the radius, in shortlex order.
    pub fn iter_upto(&self, r: usize) -> impl Iterator<Item = &Word> + '_ {
        self.spheres[..=r.min(self.radius())].iter().flatten()
    }

    pub fn to_vec(&self) -> Vec<Word> {
        self.iter().cloned().collect()
    }
}

/// `1 + sum_{i=1..r} 2k (2k-1)^{i-1}`: the free-group ball size, an upper
/// bound for every group on `k` generators.
pub fn free_ball_size(rank: usize, r: usize) -> u128 {
    let k = rank as u128;
    let mut total: u128 = 1;
    let mut sphere: u128 = 2 * k;
    for _ in 0..r {
        total = total.saturating_add(sphere);
        sphere = sphere.saturating_mul((2 * k).saturating_sub(1).max(1));
    }
    total
}

/// All elements of word length at most `r`, as shortlex geodesic normal forms.
pub fn ball(oracle: &GroupOracle, r: usize) -> Result<Ball> {
    let cap = oracle.budgets().ball_cap as u128;
    if let Presentation::Free { rank } = oracle.presentation() {
        let estimate = free_ball_size(*rank, r);
        if estimate > cap {
            return Err(Error::Budget { what: "ball size".into(), value: estimate, limit: cap });
        }
    }
    if let Some(sc) = oracle.small_cancellation_engine() {
        return Ok(Ball { spheres: sc.spheres(r)? });
    }

    let mut spheres = vec![vec![Word::identity()]];
    let mut total: u128 = 1;
    for k in 0..r {
        let expanded: Vec<Vec<Word>> =
            spheres[k].par_iter().map(|u| oracle.extend_sphere(u)).collect::<Result<_>>()?;
        let mut seen: HashSet<Word> = HashSet::new();
        let mut next: Vec<Word> = expanded.into_iter().flatten().filter(|w| seen.insert(w.clone())).collect();
        next.sort_by(shortlex_cmp);
        total += next.len() as u128;
        if total > cap {
            return Err(Error::Budget { what: "ball size".into(), value: total, limit: cap });
        }
        spheres.push(next);
    }
    Ok(Ball { spheres })
}

/// Orbital growth `gr(r) = #B(r)` with a log-linear rate fit.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthTable {
    pub counts: Vec<u64>,
    /// Slope of `ln gr(r)` over the upper half of radii; estimates `ln ω`.
    pub fitted_rate: f64,
    /// `(min, max)` of `gr(r) / exp(rate * r)` over all radii.
    pub fitted_bounds: (f64, f64),
}

impl GrowthTable {
    pub fn from_counts(counts: Vec<u64>) -> Self {
        let r_max = counts.len() - 1;
        let values: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
        let fitted_rate = log_linear_fit(&values, growth_window(r_max)).map_or(0.0, |f| f.slope);
        let normalized = values.iter().enumerate().map(|(r, v)| v / (fitted_rate * r as f64).exp());
        let fitted_bounds = normalized
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
        GrowthTable { counts, fitted_rate, fitted_bounds }
    }

    pub fn r_max(&self) -> usize {
        self.counts.len() - 1
    }

    /// CSV with header `r,count`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["r", "count"])?;
        for (r, c) in self.counts.iter().enumerate() {
            wtr.write_record([r.to_string(), c.to_string()])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

pub fn growth_table(oracle: &GroupOracle, r_max: usize) -> Result<GrowthTable> {
    Ok(GrowthTable::from_counts(ball(oracle, r_max)?.cumulative_counts()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Budgets;

    #[test]
    fn free_group_small_balls() {
        let f2 = GroupOracle::free(2).unwrap();
        let b1 = ball(&f2, 1).unwrap();
        let names: Vec<String> = b1.iter().map(|w| w.to_string()).collect();
        assert_eq!(names, ["1", "a", "A", "b", "B"]);
        assert_eq!(ball(&f2, 3).unwrap().len(), 53);
        assert_eq!(ball(&f2, 0).unwrap().to_vec(), vec![Word::identity()]);
    }

    #[test]
    fn growth_of_z_is_linear() {
        let z = GroupOracle::free(1).unwrap();
        let t = growth_table(&z, 3).unwrap();
        assert_eq!(t.counts, vec![1, 3, 5, 7]);
        let long = growth_table(&z, 200).unwrap();
        assert!(long.fitted_rate < 0.02, "rate {}", long.fitted_rate);
    }

    #[test]
    fn csv_header() {
        let t = GrowthTable::from_counts(vec![1, 5, 17]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "r,count\n0,1\n1,5\n2,17\n");
    }

    #[test]
    fn memory_cap_reports_estimate() {
        let g = GroupOracle::with_budgets(
            Presentation::Free { rank: 2 },
            Budgets { ball_cap: 100, ..Budgets::default() },
        )
        .unwrap();
        match ball(&g, 4) {
            Err(Error::Budget { value, .. }) => assert_eq!(value, 161),
            other => panic!("expected budget error, got {other:?}"),
        }
        assert!(ball(&g, 3).is_ok());
    }

    #[test]
    fn free_product_ball() {
        // Z/2 * Z: spheres grow like 1, 3, 4, 6, ...
        let g = GroupOracle::free_product(vec![Some(2), None]).unwrap();
        let b = ball(&g, 2).unwrap();
        let names: Vec<String> = b.iter().map(|w| w.to_string()).collect();
        assert_eq!(names, ["1", "a", "b", "B", "ab", "aB", "ba", "bb", "Ba", "BB"]);
    }
}
