//! Orbital and double-coset growth experiments.

use std::collections::HashMap;

use super::{
    non_decreases, require_free, require_infinite_index, subgroups, ExperimentReport, Status, Table, Verdict,
};
use crate::config::{ExperimentConfig, ExperimentKind, Predicate};
use crate::contracting::has_barrier;
use crate::error::{Error, Result};
use crate::fit::{log_linear_fit, trusted_window};
use crate::group::growth_table;
use crate::subgroup::{
    ball_representatives, compare_with_brute_force, default_buffer, double_coset_growth,
};
use crate::word::Word;

pub fn growth_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let t = growth_table(&cfg.oracle, cfg.file.radius.r_max)?;
    let mut table = Table::new(&["r", "count"]);
    for (r, c) in t.counts.iter().enumerate() {
        table.push([r.to_string(), c.to_string()]);
    }
    let mut report = ExperimentReport::new(cfg, ExperimentKind::Growth, table);
    report.fit("rate", t.fitted_rate);
    report.fit("omega", t.fitted_rate.exp());
    report.fit("m0", t.fitted_bounds.0);
    report.fit("m1", t.fitted_bounds.1);
    let counts: Vec<f64> = t.counts.iter().map(|&c| c as f64).collect();
    let decreases = counts.windows(2).filter(|w| w[1] < w[0]).count();
    report.verdicts.push(Verdict::at_most("counts nondecreasing", decreases as f64, 0.0));
    report.verdicts.push(Verdict::at_most("identity only at radius 0", counts[0], 1.0));
    Ok(report)
}

pub fn double_cosets_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    require_free(cfg, "double-coset")?;
    let (h, k) = subgroups(cfg)?;
    let r_max = cfg.file.radius.r_max;
    let t = double_coset_growth(&cfg.oracle, &h, &k, r_max)?;
    let mut table = Table::new(&["r", "gr_G", "gr_HK", "ratio"]);
    for r in 0..=r_max {
        table.push([r.to_string(), t.orbital[r].to_string(), t.counts[r].to_string(), t.ratio[r].to_string()]);
    }
    let check_radius = cfg.file.budgets.check_radius.min(r_max);
    let buffer = cfg.file.budgets.buffer.unwrap_or_else(|| default_buffer(&h, &k));
    let cmp = compare_with_brute_force(&cfg.oracle, &h, &k, check_radius, buffer)?;
    let mut report = ExperimentReport::new(cfg, ExperimentKind::DoubleCosets, table);
    let (rate_hk, rate_g) = t.fitted_rates();
    report.fit("delta", t.delta);
    report.fit("rate_hk", rate_hk);
    report.fit("rate_g", rate_g);
    report.fit("check_radius", check_radius as f64);
    report.fit("buffer", buffer as f64);
    report.fit("classes", cmp.automaton_classes as f64);
    report.verdicts.push(Verdict::at_most("brute-force disagreements", cmp.disagreements.len() as f64, 0.0));
    report.verdicts.push(Verdict::at_most("buffer warnings", cmp.buffer_warnings.len() as f64, 0.0));
    for (a, b) in cmp.disagreements.iter().chain(&cmp.buffer_warnings).take(10) {
        report.notes.push(format!("split pair {a} {b}"));
    }
    Ok(report)
}

/// `gr_{H,K}(r) / gr(r - r_0)` against the configured window.
pub fn theorem_a_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    require_free(cfg, "double-coset growth")?;
    let (h, k) = subgroups(cfg)?;
    require_infinite_index(&h, &k)?;
    let r_max = cfg.file.radius.r_max;
    let r0 = cfg.r0();
    if r0 >= r_max {
        return Err(Error::config("parameters.r0", format!("r0 = {r0} leaves no radius below r_max = {r_max}")));
    }
    let t = double_coset_growth(&cfg.oracle, &h, &k, r_max)?;
    let ratio = |r: usize| t.counts[r] as f64 / t.orbital[r - r0] as f64;
    let mut table = Table::new(&["r", "gr_G", "gr_HK", "ratio"]);
    for r in 0..=r_max {
        let cell = if r >= r0 { ratio(r).to_string() } else { String::new() };
        table.push([r.to_string(), t.orbital[r].to_string(), t.counts[r].to_string(), cell]);
    }
    let window = trusted_window(cfg.file.radius.r_min.max(r0), r_max);
    let delta = window.clone().map(ratio).fold(f64::INFINITY, f64::min);
    let as_f = |v: &[u64]| v.iter().map(|&c| c as f64).collect::<Vec<_>>();
    let fit_hk = log_linear_fit(&as_f(&t.counts), window.clone());
    let fit_g = log_linear_fit(&as_f(&t.orbital), window.clone());

    let mut report = ExperimentReport::new(cfg, ExperimentKind::TheoremA, table);
    report.fit("r0", r0 as f64);
    report.fit("window_start", *window.start() as f64);
    report.fit("delta", delta);
    match (fit_hk, fit_g) {
        (Some(hk), Some(g)) => {
            report.fit("rate_hk", hk.slope);
            report.fit("rate_g", g.slope);
            report.fit("omega", g.slope.exp());
            let rel = (hk.slope - g.slope).abs() / g.slope.abs();
            report.verdicts.push(Verdict::at_most("growth exponent agreement", rel, cfg.file.thresholds.rate_tolerance));
        }
        _ => report.verdicts.push(
            Verdict::at_most("growth exponent agreement", f64::NAN, cfg.file.thresholds.rate_tolerance)
                .with_status(Status::Degenerate),
        ),
    }
    report.verdicts.push(Verdict::above("ratio lower bound", delta, cfg.file.thresholds.delta_min));
    Ok(report)
}

/// Fraction of double cosets in `B_{H,K}(r)` meeting a predicate, next to its
/// fraction in `B(r)`.
pub fn generic_image_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    require_free(cfg, "generic-image")?;
    let (h, k) = subgroups(cfg)?;
    let r_max = cfg.file.radius.r_max;
    let oracle = &cfg.oracle;
    let growth = double_coset_growth(oracle, &h, &k, r_max)?;
    let window = trusted_window(cfg.file.radius.r_min, r_max);
    let delta = window.clone().map(|r| growth.ratio[r]).fold(f64::INFINITY, f64::min);
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::Precondition(format!("double cosets have no positive density (delta = {delta})")));
    }

    let predicate = cfg.file.parameters.predicate;
    let barrier = match predicate {
        Predicate::Barrier => Some(super::required(&cfg.barrier, "elements.barrier")?),
        _ => None,
    };
    let epsilon = cfg.file.parameters.epsilon;
    let in_a = |g: &Word| -> Result<bool> {
        Ok(match predicate {
            Predicate::All => true,
            Predicate::None => false,
            Predicate::Barrier => {
                has_barrier(oracle, &oracle.geodesic(g)?, epsilon, barrier.expect("set above"))?.is_some()
            }
        })
    };

    let reps = ball_representatives(oracle, &h, &k, r_max)?;
    let mut ball_in_a = vec![0u64; r_max + 1];
    // Shortest length in the ball, and shortest length of an element in A.
    let mut cosets: HashMap<&Word, (usize, Option<usize>)> = HashMap::new();
    for (g, rep) in &reps {
        let hit = in_a(g)?;
        if hit {
            ball_in_a[g.len()] += 1;
        }
        let entry = cosets.entry(rep).or_insert((g.len(), None));
        if hit && entry.1.is_none() {
            entry.1 = Some(g.len());
        }
    }
    let mut coset_total = vec![0u64; r_max + 1];
    let mut coset_in_a = vec![0u64; r_max + 1];
    for (first, first_a) in cosets.values() {
        coset_total[*first] += 1;
        if let Some(l) = first_a {
            coset_in_a[*l] += 1;
        }
    }
    for r in 1..=r_max {
        ball_in_a[r] += ball_in_a[r - 1];
        coset_total[r] += coset_total[r - 1];
        coset_in_a[r] += coset_in_a[r - 1];
    }

    let mut table = Table::new(&["r", "gr_G", "in_A", "gr_HK", "meeting_A", "ball_fraction", "coset_fraction"]);
    let mut ball_comp = Vec::with_capacity(r_max + 1);
    let mut coset_comp = Vec::with_capacity(r_max + 1);
    for r in 0..=r_max {
        let bf = ball_in_a[r] as f64 / growth.orbital[r] as f64;
        let cf = coset_in_a[r] as f64 / coset_total[r] as f64;
        ball_comp.push(1.0 - bf);
        coset_comp.push(1.0 - cf);
        table.push([
            r.to_string(),
            growth.orbital[r].to_string(),
            ball_in_a[r].to_string(),
            coset_total[r].to_string(),
            coset_in_a[r].to_string(),
            bf.to_string(),
            cf.to_string(),
        ]);
    }

    let mut report = ExperimentReport::new(cfg, ExperimentKind::GenericImage, table);
    report.fit("delta", delta);
    let decay = |values: &[f64]| -> Option<f64> {
        if window.clone().all(|r| values[r] == 0.0) {
            return Some(0.0);
        }
        log_linear_fit(values, window.clone()).map(|f| f.slope.exp())
    };
    let ball_decay = decay(&ball_comp).unwrap_or(f64::NAN);
    report.fit("ball_complement_decay", ball_decay);
    let generic = ball_decay < 1.0;
    let mut v = Verdict::below("predicate generic in balls", ball_decay, 1.0);
    if !generic {
        v = v.with_status(Status::Degenerate);
        report.notes.push("the predicate is not exponentially generic in balls; fractions reported raw".into());
    }
    report.verdicts.push(v);
    let excess =
        window.clone().map(|r| coset_comp[r] - ball_comp[r] / delta).fold(f64::NEG_INFINITY, f64::max);
    report.fit("image_bound_excess", excess);
    report.verdicts.push(Verdict::at_most("image complement within ball complement / delta", excess, 0.0));
    if generic {
        let coset_decay = decay(&coset_comp).unwrap_or(f64::NAN);
        report.fit("coset_complement_decay", coset_decay);
        report.verdicts.push(Verdict::below("image generic in double cosets", coset_decay, 1.0));
    }
    let rising = non_decreases(&window.clone().map(|r| coset_comp[r]).collect::<Vec<_>>());
    report.fit("coset_complement_non_decreases", rising as f64);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn cfg(extra: &str, h: &str, k: &str, r_max: usize) -> ExperimentConfig {
        let text = format!(
            "[group]\nkind = \"free\"\nrank = 2\n[subgroups]\nh = {h}\nk = {k}\n[radius]\nr_min = 2\nr_max = {r_max}\n{extra}"
        );
        parse_config(&text).unwrap()
    }

    #[test]
    fn trivial_subgroups_have_ratio_one() {
        let c = cfg("[parameters]\nr0 = 0\n", "[]", "[]", 6);
        let report = theorem_a_experiment(&c).unwrap();
        assert!(report.table.column("ratio").unwrap().iter().all(|&x| x == 1.0));
        assert_eq!(report.status(), Status::Pass);
    }

    #[test]
    fn finite_index_is_a_precondition_error() {
        let c = cfg("", "[\"aa\", \"b\", \"abA\"]", "[\"aa\", \"b\", \"abA\"]", 5);
        assert!(matches!(theorem_a_experiment(&c), Err(Error::Precondition(_))));
    }

    #[test]
    fn ratio_is_at_most_one_without_shift() {
        let c = cfg("[parameters]\nr0 = 0\n", "[\"a\"]", "[\"b\"]", 6);
        let report = theorem_a_experiment(&c).unwrap();
        assert!(report.table.column("ratio").unwrap().iter().all(|&x| x <= 1.0));
    }

    #[test]
    fn double_cosets_cross_check() {
        let c = cfg("[budgets]\ncheck_radius = 4\n", "[\"aa\", \"b\"]", "[\"baB\"]", 5);
        let report = double_cosets_experiment(&c).unwrap();
        assert_eq!(report.status(), Status::Pass, "{}", report.verdict_text());
        assert!(report.table.to_csv_string().starts_with("r,gr_G,gr_HK,ratio\n0,1,1,1\n"));
    }

    #[test]
    fn growth_of_free_group() {
        let c = cfg("", "[]", "[]", 5);
        let report = growth_experiment(&c).unwrap();
        assert_eq!(report.table.column("count").unwrap(), vec![1.0, 5.0, 17.0, 53.0, 161.0, 485.0]);
        assert_eq!(report.status(), Status::Pass);
    }

    #[test]
    fn generic_image_extremes() {
        let all = cfg("[parameters]\npredicate = \"all\"\n", "[\"a\"]", "[\"a\"]", 6);
        let report = generic_image_experiment(&all).unwrap();
        assert!(report.table.column("coset_fraction").unwrap().iter().all(|&x| x == 1.0));
        assert_eq!(report.status(), Status::Pass);
        let none = cfg("[parameters]\npredicate = \"none\"\n", "[\"a\"]", "[\"a\"]", 6);
        let report = generic_image_experiment(&none).unwrap();
        assert!(report.table.column("coset_fraction").unwrap().iter().all(|&x| x == 0.0));
        assert_eq!(report.status(), Status::Degenerate);
    }

    #[test]
    fn barrier_image_tends_to_one() {
        let c = cfg("[elements]\nbarrier = \"a\"\n", "[\"a\"]", "[\"a\"]", 7);
        let report = generic_image_experiment(&c).unwrap();
        let fr = report.table.column("coset_fraction").unwrap();
        assert!(fr[7] > fr[3] && fr[7] > 0.9, "{fr:?}");
        assert_eq!(report.status(), Status::Pass, "{}", report.verdict_text());
    }
}
