//! Barrier-free elements and their decay.

use rayon::prelude::*;

use super::{non_decreases, require_free, required, ExperimentReport, Status, Table, Verdict};
use crate::config::{ExperimentConfig, ExperimentKind};
use crate::contracting::{barrier_free_set, barrier_stats, barrier_witnesses, portion_from_witnesses};
use crate::error::Result;
use crate::fit::{log_linear_fit, trusted_window};
use crate::group::ball;
use crate::word::Word;

/// Per-element barrier data: barrier-free flag and barrier-free portion.
fn classify(cfg: &ExperimentConfig, f: &Word) -> Result<Vec<(usize, bool, f64)>> {
    let oracle = &cfg.oracle;
    let p = &cfg.file.parameters;
    let elements = ball(oracle, cfg.file.radius.r_max)?.to_vec();
    let rows: Vec<Result<(usize, bool, f64)>> = elements
        .par_iter()
        .map(|g| {
            let path = oracle.geodesic(g)?;
            let witnesses = barrier_witnesses(oracle, &path, p.epsilon, f)?;
            Ok((g.len(), witnesses.is_empty(), portion_from_witnesses(g.len(), &witnesses, p.l_min)))
        })
        .collect();
    let mut rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    if p.barrier_m > 0 {
        let free = barrier_free_set(oracle, p.epsilon, p.barrier_m, f, cfg.file.radius.r_max)?;
        let mut it = free.elements.iter().peekable();
        for (row, g) in rows.iter_mut().zip(&elements) {
            row.1 = it.next_if(|x| *x == g).is_some();
        }
    }
    Ok(rows)
}

pub fn genericity_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    require_free(cfg, "genericity")?;
    let f = cfg.oracle.normal_form(required(&cfg.barrier, "elements.barrier")?)?;
    let p = &cfg.file.parameters;
    let r_max = cfg.file.radius.r_max;
    let rows = classify(cfg, &f)?;

    let mut sphere = vec![0u64; r_max + 1];
    let mut sphere_free = vec![0u64; r_max + 1];
    let mut sphere_theta = vec![0u64; r_max + 1];
    for &(len, free, portion) in &rows {
        sphere[len] += 1;
        sphere_free[len] += u64::from(free);
        sphere_theta[len] += u64::from(portion >= p.theta);
    }
    let mut table = Table::new(&[
        "r",
        "ball",
        "barrier_free",
        "ball_fraction",
        "sphere",
        "sphere_barrier_free",
        "sphere_fraction",
        "theta_portion",
        "theta_fraction",
    ]);
    let (mut ball_n, mut ball_free, mut ball_theta) = (0u64, 0u64, 0u64);
    let mut ball_fraction = Vec::new();
    let mut theta_fraction = Vec::new();
    for r in 0..=r_max {
        ball_n += sphere[r];
        ball_free += sphere_free[r];
        ball_theta += sphere_theta[r];
        let bf = ball_free as f64 / ball_n as f64;
        let tf = ball_theta as f64 / ball_n as f64;
        ball_fraction.push(bf);
        theta_fraction.push(tf);
        table.push([
            r.to_string(),
            ball_n.to_string(),
            ball_free.to_string(),
            bf.to_string(),
            sphere[r].to_string(),
            sphere_free[r].to_string(),
            (sphere_free[r] as f64 / sphere[r] as f64).to_string(),
            ball_theta.to_string(),
            tf.to_string(),
        ]);
    }

    let mut report = ExperimentReport::new(cfg, ExperimentKind::Genericity, table);
    if f.len() <= 2 * p.epsilon {
        report.notes.push(format!("|f| = {} <= 2 epsilon = {}: every path carries a barrier", f.len(), 2 * p.epsilon));
        report.verdicts.push(Verdict::above("barrier length beyond 2 epsilon", f.len() as f64, 2.0 * p.epsilon as f64));
        report.verdicts.last_mut().unwrap().status = Status::Degenerate;
        return Ok(report);
    }
    let r_min = cfg.file.radius.r_min;
    if ball_fraction[r_min..].iter().all(|&x| x == 1.0) {
        report.notes.push("no barriers inside the ball: f is too long for the radius".into());
        report.verdicts.push(Verdict::below("ball fraction below 1", 1.0, 1.0).with_status(Status::Degenerate));
        return Ok(report);
    }

    let window = trusted_window(r_min, r_max);
    let t = &cfg.file.thresholds;
    let window_values: Vec<f64> = (r_min..=r_max).map(|r| ball_fraction[r]).collect();
    report.verdicts.push(Verdict::at_most("ball fraction strictly decreasing", non_decreases(&window_values) as f64, 0.0));
    for (name, values, decay_max) in
        [("ball", &ball_fraction, t.decay_max), ("theta", &theta_fraction, 1.0)]
    {
        match log_linear_fit(values, window.clone()) {
            Some(fit) => {
                let decay = fit.slope.exp();
                report.fit(&format!("{name}_decay"), decay);
                report.fit(&format!("{name}_r_squared"), fit.r_squared);
                report.verdicts.push(Verdict::below(&format!("{name} fraction decay"), decay, decay_max));
                report.verdicts.push(Verdict::at_least(&format!("{name} fraction fit r_squared"), fit.r_squared, t.r_squared_min));
            }
            None => {
                // Identically zero over the window: nothing left to fit.
                report.notes.push(format!("{name} fraction vanishes on the fit window"));
                report.fit(&format!("{name}_decay"), 0.0);
            }
        }
    }
    Ok(report)
}

pub fn barrier_stats_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let f = cfg.oracle.normal_form(required(&cfg.barrier, "elements.barrier")?)?;
    let p = &cfg.file.parameters;
    let rows = barrier_stats(&cfg.oracle, p.epsilon, p.barrier_m, &f, 0..=cfg.file.radius.r_max)?;
    let mut table = Table::new(&["r", "total", "barrier_free", "fraction"]);
    for row in &rows {
        table.push([row.r.to_string(), row.total.to_string(), row.barrier_free.to_string(), row.fraction.to_string()]);
    }
    let mut report = ExperimentReport::new(cfg, ExperimentKind::BarrierStats, table);
    if f.len() <= 2 * p.epsilon {
        report.notes.push("degenerate: |f| <= 2 epsilon".into());
        report.verdicts.push(
            Verdict::above("barrier length beyond 2 epsilon", f.len() as f64, 2.0 * p.epsilon as f64)
                .with_status(Status::Degenerate),
        );
    }
    Ok(report)
}
