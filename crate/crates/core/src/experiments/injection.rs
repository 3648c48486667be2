//! The map `t -> H g_H^M a t b g_K^M K` on a ball.

use std::collections::HashMap;

use rayon::prelude::*;

use super::{require_free, required, subgroups, ExperimentReport, Table, Verdict};
use crate::config::{ExperimentConfig, ExperimentKind};
use crate::contracting::{
    admissible_check, extension_choose, primitive_root, projection_diameter, quasi_geodesic_constant,
    translated_geodesic, AdmissiblePathSpec, Axis, AxisSegment, ExtensionSet,
};
use crate::error::{Error, Result};
use crate::group::{ball, GroupOracle};
use crate::subgroup::{canonical_rep, StallingsGraph};
use crate::word::Word;

/// Largest projection of `[1, h]` onto the axis of `g` over `h` in `H` with
/// `|h| <= r`.
fn subgroup_projection(oracle: &GroupOracle, s: &StallingsGraph, axis: &Axis, r: usize) -> Result<usize> {
    let mut diam = 0;
    for h in s.elements(r) {
        diam = diam.max(projection_diameter(oracle, axis, &oracle.geodesic(&h)?)?);
    }
    Ok(diam)
}

/// `#(H ∩ E(g))` is 1 when no nontrivial power of the root lies in `H`;
/// otherwise the intersection is infinite and the fiber bound is lost.
fn check_elementary(name: &str, s: &StallingsGraph, g: &Word, root: &Word) -> Result<()> {
    match s.cyclic_intersection(root) {
        None => Ok(()),
        Some(k) => Err(Error::Precondition(format!(
            "{name} = {s} contains the power {k} of the root of {g}; {name} meets E({g}) in an infinite set"
        ))),
    }
}

struct Sample {
    len: usize,
    rep: Word,
    admissible: bool,
    lambda: f64,
}

/// The path labelled by `g_H^M · 1 · a · t · b · 1 · g_K^M` with its
/// admissible structure.
fn labelled_spec(
    oracle: &GroupOracle,
    gh: (&Word, &Axis),
    a: &Axis,
    t: &Word,
    b: &Axis,
    gk: (&Word, &Axis),
    (l, tau): (f64, f64),
) -> Result<AdmissiblePathSpec> {
    let x1 = gh.0.clone();
    let x2 = oracle.multiply(&x1, a.element())?;
    let x3 = oracle.multiply(&x2, t)?;
    let x4 = oracle.multiply(&x3, b.element())?;
    let piece = |at: &Word, w: &Word, axis: &Axis| -> Result<AxisSegment> {
        Ok(AxisSegment { path: translated_geodesic(oracle, at, w)?, axis: Some(axis.translated(oracle, at)?) })
    };
    Ok(AdmissiblePathSpec {
        pieces: vec![
            piece(&Word::identity(), gh.0, gh.1)?,
            piece(&x1, a.element(), a)?,
            piece(&x3, b.element(), b)?,
            piece(&x4, gk.0, gk.1)?,
        ],
        connectors: vec![vec![x1.clone()], translated_geodesic(oracle, &x2, t)?, vec![x4.clone()]],
        l,
        tau,
    })
}

pub fn injection_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    require_free(cfg, "injection")?;
    let oracle = &cfg.oracle;
    let (h, k) = subgroups(cfg)?;
    let g_h = oracle.normal_form(required(&cfg.g_h, "elements.g_h")?)?;
    let g_k = oracle.normal_form(required(&cfg.g_k, "elements.g_k")?)?;
    let set = ExtensionSet::new(oracle, &cfg.extension_set)
        .map_err(|e| Error::config("elements.extension_set", e.to_string()))?;
    let (root_h, root_k) = (primitive_root(oracle, &g_h)?, primitive_root(oracle, &g_k)?);
    check_elementary("H", &h, &g_h, &root_h)?;
    check_elementary("K", &k, &g_k, &root_k)?;
    let n0 = 1usize;

    let p = &cfg.file.parameters;
    let (axis_h, axis_k) = (Axis::new(oracle, &g_h)?, Axis::new(oracle, &g_k)?);
    let probe = cfg.file.budgets.check_radius.max(2);
    let tau_h = subgroup_projection(oracle, &h, &axis_h, probe)?;
    let tau_k = subgroup_projection(oracle, &k, &axis_k, probe)?;
    if tau_h > subgroup_projection(oracle, &h, &axis_h, probe - 2)?
        || tau_k > subgroup_projection(oracle, &k, &axis_k, probe - 2)?
    {
        return Err(Error::Precondition(format!(
            "projections of H or K to the axes of g_H, g_K still grow at radius {probe}"
        )));
    }

    let m = p.power_m as i64;
    let gh_m = oracle.normal_form(&g_h.formal_power(m))?;
    let gk_m = oracle.normal_form(&g_k.formal_power(m))?;
    let r0 = cfg.r0();
    let r_max = cfg.file.radius.r_max;
    let domain = r_max.saturating_sub(r0);
    let ts = if r_max >= r0 { ball(oracle, domain)?.to_vec() } else { Vec::new() };

    let samples: Vec<Result<Sample>> = ts
        .par_iter()
        .map(|t| {
            let (a, _) = extension_choose(oracle, &gh_m, t, &set, p.admissible_l, p.tau)?;
            let (b, _) = extension_choose(oracle, t, &gk_m, &set, p.admissible_l, p.tau)?;
            let (a, b) = (Axis::new(oracle, &a)?, Axis::new(oracle, &b)?);
            let s = oracle.multiply(&oracle.multiply(&oracle.multiply(&gh_m, a.element())?, t)?, b.element())?;
            let s = oracle.multiply(&s, &gk_m)?;
            let spec = labelled_spec(oracle, (&gh_m, &axis_h), &a, t, &b, (&gk_m, &axis_k), (p.admissible_l, p.tau))?;
            Ok(Sample {
                len: t.len(),
                rep: canonical_rep(&h, &k, &s),
                admissible: admissible_check(oracle, &spec)?.is_admissible(),
                lambda: quasi_geodesic_constant(oracle, &spec.vertices())?,
            })
        })
        .collect();
    let samples = samples.into_iter().collect::<Result<Vec<_>>>().map_err(|e| match e {
        Error::Exhausted(msg) => Error::config("elements.extension_set", msg),
        other => other,
    })?;

    let mut table = Table::new(&["r", "t_radius", "domain", "cosets", "max_fiber", "admissible", "max_lambda"]);
    let mut max_fiber_all = 0usize;
    for r in r0.max(cfg.file.radius.r_min)..=r_max {
        let rho = r - r0;
        let mut fibers: HashMap<&Word, usize> = HashMap::new();
        let (mut count, mut admissible, mut lambda) = (0usize, 0usize, 1.0f64);
        for s in samples.iter().filter(|s| s.len <= rho) {
            *fibers.entry(&s.rep).or_default() += 1;
            count += 1;
            admissible += usize::from(s.admissible);
            lambda = lambda.max(s.lambda);
        }
        let max_fiber = fibers.values().copied().max().unwrap_or(0);
        max_fiber_all = max_fiber_all.max(max_fiber);
        table.push([
            r.to_string(),
            rho.to_string(),
            count.to_string(),
            fibers.len().to_string(),
            max_fiber.to_string(),
            admissible.to_string(),
            lambda.to_string(),
        ]);
    }

    let mut report = ExperimentReport::new(cfg, ExperimentKind::Injection, table);
    report.fit("r0", r0 as f64);
    report.fit("n0", n0 as f64);
    report.fit("tau_h", tau_h as f64);
    report.fit("tau_k", tau_k as f64);
    report.fit("extension_projection_bound", set.projection_bound as f64);
    if ts.is_empty() {
        report.notes.push(format!("r_max = {r_max} is below r0 = {r0}: the domain is empty"));
    }
    report.verdicts.push(Verdict::at_most("max fiber", max_fiber_all as f64, n0 as f64));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn cfg(h: &str, g: &str, r_max: usize, r0: Option<usize>) -> ExperimentConfig {
        let r0 = r0.map_or(String::new(), |r| format!("r0 = {r}\n"));
        let text = format!(
            "[group]\nkind = \"free\"\nrank = 2\n[subgroups]\nh = {h}\nk = {h}\n[elements]\ng_h = \"{g}\"\ng_k = \"{g}\"\n[parameters]\npower_m = 2\n{r0}[radius]\nr_max = {r_max}\n"
        );
        parse_config(&text).unwrap()
    }

    #[test]
    fn cyclic_subgroups_inject() {
        let report = injection_experiment(&cfg("[\"b\"]", "a", 3, Some(0))).unwrap();
        assert_eq!(report.verdict("max fiber").unwrap().measured, 1.0);
        let domain = report.table.column("domain").unwrap();
        assert_eq!(domain.last(), Some(&53.0));
    }

    #[test]
    fn trivial_subgroups_give_singleton_fibers() {
        let report = injection_experiment(&cfg("[]", "a", 3, Some(0))).unwrap();
        assert_eq!(report.table.column("cosets").unwrap(), report.table.column("domain").unwrap());
    }

    #[test]
    fn shared_axis_is_a_precondition_error() {
        assert!(matches!(injection_experiment(&cfg("[\"a\"]", "a", 3, Some(0))), Err(Error::Precondition(_))));
    }

    #[test]
    fn short_radius_gives_an_empty_domain() {
        let report = injection_experiment(&cfg("[\"b\"]", "a", 3, None)).unwrap();
        assert!(report.table.rows.is_empty());
        assert_eq!(report.status(), super::super::Status::Pass);
    }
}
