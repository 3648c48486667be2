//! Random admissible paths and their measured quasi-geodesic constants.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{require_free, ExperimentReport, Status, Table, Verdict};
use crate::config::{ExperimentConfig, ExperimentKind};
use crate::contracting::{
    admissible_check, quasi_geodesic_constant, translated_geodesic, AdmissiblePathSpec, Axis, AxisSegment,
};
use crate::error::Result;
use crate::group::GroupOracle;
use crate::word::{Letter, Word};

/// A uniformly random reduced word of length `len`.
fn random_reduced<R: Rng>(rng: &mut R, rank: usize, len: usize) -> Word {
    let mut w = Word::identity();
    while w.len() < len {
        let x = Letter::from_rank_key(rng.gen_range(0..2 * rank));
        if w.last() != Some(x.inverse()) {
            w.push(x);
        }
    }
    w
}

/// Pieces run along axes of the configured roots, each longer than `l`;
/// connectors are random reduced words.
fn random_spec<R: Rng>(rng: &mut R, cfg: &ExperimentConfig) -> Result<AdmissiblePathSpec> {
    let oracle: &GroupOracle = &cfg.oracle;
    let c = &cfg.file.calibration;
    let l = *c.l_values.choose(rng).expect("validated nonempty") as f64;
    let tau = *c.tau_values.choose(rng).expect("validated nonempty") as f64;
    let n = rng.gen_range(1..=c.max_pieces);
    let mut at = Word::identity();
    let (mut pieces, mut connectors) = (Vec::new(), Vec::new());
    for i in 0..n {
        if i > 0 {
            let len = rng.gen_range(0..=c.max_connector);
            let q = random_reduced(rng, oracle.rank(), len);
            connectors.push(translated_geodesic(oracle, &at, &q)?);
            at = oracle.multiply(&at, &q)?;
        }
        let u = cfg.calibration_roots.choose(rng).expect("validated nonempty");
        let u = if rng.gen_bool(0.5) { u.formal_inverse() } else { u.clone() };
        let mut power = 1;
        let mut f = oracle.normal_form(&u)?;
        while (f.len() as f64) <= l {
            power += 1;
            f = oracle.normal_form(&u.formal_power(power))?;
        }
        let axis = Axis::new(oracle, &f)?.translated(oracle, &at)?;
        pieces.push(AxisSegment { path: translated_geodesic(oracle, &at, &f)?, axis: Some(axis) });
        at = oracle.multiply(&at, &f)?;
    }
    Ok(AdmissiblePathSpec { pieces, connectors, l, tau })
}

pub fn calibration_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    require_free(cfg, "calibration")?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.file.seed);
    let mut table = Table::new(&["index", "pieces", "l", "tau", "admissible", "lambda", "violations"]);
    let mut lambda_cal: Option<f64> = None;
    let mut per_tau: Vec<(u32, f64)> = Vec::new();
    let mut admissible = 0usize;
    for index in 0..cfg.file.calibration.specs {
        let spec = random_spec(&mut rng, cfg)?;
        let check = admissible_check(&cfg.oracle, &spec)?;
        let lambda = quasi_geodesic_constant(&cfg.oracle, &spec.vertices())?;
        if check.is_admissible() {
            admissible += 1;
            lambda_cal = Some(lambda_cal.map_or(lambda, |x| x.max(lambda)));
            let tau = spec.tau as u32;
            match per_tau.iter_mut().find(|(t, _)| *t == tau) {
                Some(entry) => entry.1 = entry.1.max(lambda),
                None => per_tau.push((tau, lambda)),
            }
        }
        table.push([
            index.to_string(),
            spec.pieces.len().to_string(),
            spec.l.to_string(),
            spec.tau.to_string(),
            u8::from(check.is_admissible()).to_string(),
            lambda.to_string(),
            check.violations.len().to_string(),
        ]);
    }

    let mut report = ExperimentReport::new(cfg, ExperimentKind::Calibration, table);
    report.fit("admissible", admissible as f64);
    per_tau.sort_by_key(|(t, _)| *t);
    let t = &cfg.file.thresholds;
    let Some(lambda_cal) = lambda_cal else {
        report.notes.push("no generated spec is admissible".into());
        report.verdicts.push(Verdict::above("admissible specs", 0.0, 0.0).with_status(Status::Degenerate));
        return Ok(report);
    };
    report.fit("lambda_cal", lambda_cal);
    for (tau, lambda) in &per_tau {
        report.fit(&format!("lambda_cal_tau{tau}"), *lambda);
    }
    report.verdicts.push(Verdict::at_most("lambda_cal", lambda_cal, t.lambda_max));
    if let Some(recorded) = t.lambda_cal {
        report.verdicts.push(Verdict::at_most("within recorded lambda_cal", lambda_cal, recorded));
    }
    Ok(report)
}
