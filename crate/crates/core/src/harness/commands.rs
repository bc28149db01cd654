//! The four experiment drivers. Each writes its CSVs first and derives any
//! SVG from the CSV text it just produced, then records a manifest.

use std::collections::BTreeMap;
use std::path::Path;

use super::config::ExperimentConfig;
use super::evaluate::{evaluate_population, mean_of, InstanceEval, StrategyEval};
use super::manifest::RunManifest;
use super::svg::LinePlot;
use super::table::{fmt_f64, parse_f64, read_csv, Table};
use crate::baselines::StrategyKind;
use crate::dynamics::{interior_equilibrium, phase_portrait_with, reduce_payoffs};
use crate::error::{GtraError, Result};
use crate::game::{attacker_utility, qr_attack_distribution};
use crate::scenario::{sample_instance, sweep_grid, SweepAxis};
use crate::solver::iga_solve;

pub const MANIFEST_FILE: &str = "manifest.json";

/// Metrics plotted by `compare`, as `(csv column, plot title)`.
pub const COMPARE_METRICS: [(&str, &str); 5] = [
    ("defender_utility", "Defender utility"),
    ("vulnerability", "Vulnerability"),
    ("coverage", "Coverage"),
    ("effectiveness", "Effectiveness"),
    ("consumption", "Resource consumption"),
];

struct Outputs<'a> {
    dir: &'a Path,
    files: Vec<String>,
}

impl<'a> Outputs<'a> {
    fn new(dir: &'a Path) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Self {
            dir,
            files: Vec::new(),
        })
    }

    fn text(&mut self, name: &str, body: &str) -> Result<()> {
        std::fs::write(self.dir.join(name), body)?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn table(&mut self, name: &str, t: &Table) -> Result<String> {
        let body = t.render();
        self.text(name, &body)?;
        Ok(body)
    }

    fn finish(mut self, command_line: &str, cfg: &ExperimentConfig) -> Result<Vec<String>> {
        self.files.push(MANIFEST_FILE.to_string());
        RunManifest::new(command_line, cfg, self.files.clone())?
            .write(&self.dir.join(MANIFEST_FILE))?;
        Ok(self.files)
    }
}

/// Solves one game and writes `q_star.csv`, `summary.csv`, `iterations.csv`.
pub fn cmd_solve(
    cfg: &ExperimentConfig,
    out_dir: &Path,
    command_line: &str,
) -> Result<Vec<String>> {
    let g = match &cfg.game {
        Some(explicit) => cfg.explicit_instance(explicit),
        None => sample_instance(&cfg.scenario_config(cfg.n), cfg.instance_index)?,
    };
    g.validate()?;
    let r = iga_solve(&g, cfg.times, &cfg.ga)?;
    let p = qr_attack_distribution(&g, &r.q_star)?;
    let ua = attacker_utility(&g, &p, &r.q_star)?;

    let mut out = Outputs::new(out_dir)?;
    let mut q = Table::new(&["target_id", "q", "resources"]);
    for (i, (t, qi)) in g.targets.iter().zip(&r.q_star.q).enumerate() {
        q.push(vec![
            t.id.to_string(),
            fmt_f64(*qi),
            fmt_f64(qi * g.resource_cost(i)),
        ]);
    }
    out.table("q_star.csv", &q)?;

    let mut s = Table::new(&[
        "n",
        "defender_utility",
        "attacker_utility",
        "consumption",
        "budget",
        "budget_feasible",
        "iterations",
    ]);
    s.push(vec![
        g.n().to_string(),
        fmt_f64(r.utility),
        fmt_f64(ua),
        fmt_f64(g.consumption(&r.q_star.q)),
        fmt_f64(g.budget),
        r.q_star.budget_feasible.to_string(),
        r.iterations_used.to_string(),
    ]);
    out.table("summary.csv", &s)?;

    let mut it = Table::new(&["iteration", "utility", "running_max"]);
    let mut best = f64::NEG_INFINITY;
    for (k, u) in r.per_iteration_utilities.iter().enumerate() {
        best = best.max(*u);
        it.push(vec![(k + 1).to_string(), fmt_f64(*u), fmt_f64(best)]);
    }
    out.table("iterations.csv", &it)?;
    out.finish(command_line, cfg)
}

fn eval_columns(s: &StrategyEval) -> Vec<String> {
    vec![
        fmt_f64(s.defender_utility),
        fmt_f64(s.attacker_utility),
        fmt_f64(s.vulnerability),
        fmt_f64(s.coverage),
        fmt_f64(s.effectiveness),
        fmt_f64(s.consumption),
    ]
}

pub const COMPARE_HEADER: [&str; 11] = [
    "n",
    "instance",
    "strategy",
    "budget",
    "defender_utility",
    "attacker_utility",
    "vulnerability",
    "coverage",
    "effectiveness",
    "consumption",
    "budget_feasible",
];

/// Table rows for one target count: one per (instance, strategy), then one
/// mean row per strategy.
pub fn compare_rows(
    n: usize,
    evals: &[InstanceEval],
    strategies: &[StrategyKind],
    table: &mut Table,
) {
    for e in evals {
        for s in &e.strategies {
            let mut row = vec![
                n.to_string(),
                e.index.to_string(),
                s.strategy.to_string(),
                fmt_f64(e.budget),
            ];
            row.extend(eval_columns(s));
            row.push(if s.q.budget_feasible { "1" } else { "0" }.to_string());
            table.push(row);
        }
    }
    let mean_budget = evals.iter().map(|e| e.budget).sum::<f64>() / evals.len() as f64;
    for &kind in strategies {
        let m = |f: fn(&StrategyEval) -> f64| fmt_f64(mean_of(evals, kind, f));
        table.push(vec![
            n.to_string(),
            "mean".into(),
            kind.to_string(),
            fmt_f64(mean_budget),
            m(|s| s.defender_utility),
            m(|s| s.attacker_utility),
            m(|s| s.vulnerability),
            m(|s| s.coverage),
            m(|s| s.effectiveness),
            m(|s| s.consumption),
            m(|s| if s.q.budget_feasible { 1.0 } else { 0.0 }),
        ]);
    }
}

/// Mean of `metric` against N for every strategy, read from `compare.csv`.
pub fn compare_plot(csv: &str, metric: &str, title: &str) -> Result<LinePlot> {
    let (header, rows) = read_csv(csv);
    let col = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| GtraError::Config(format!("column {name} missing from compare table")))
    };
    let (n_col, inst_col, strat_col, m_col) =
        (col("n")?, col("instance")?, col("strategy")?, col(metric)?);
    let mut series: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    for r in rows.iter().filter(|r| r[inst_col] == "mean") {
        let x = parse_f64(&r[n_col]).unwrap_or(f64::NAN);
        let y = parse_f64(&r[m_col]).unwrap_or(f64::NAN);
        match series.iter_mut().find(|(name, _)| *name == r[strat_col]) {
            Some((_, pts)) => pts.push((x, y)),
            None => series.push((r[strat_col].clone(), vec![(x, y)])),
        }
    }
    Ok(series.into_iter().fold(
        LinePlot::new(title, "number of targets N", title),
        |p, (name, pts)| p.with_series(&name, pts),
    ))
}

/// Evaluates every strategy on every instance, for each configured N.
pub fn cmd_compare(
    cfg: &ExperimentConfig,
    out_dir: &Path,
    command_line: &str,
) -> Result<Vec<String>> {
    let mut table = Table::new(&COMPARE_HEADER);
    for n in cfg.target_counts() {
        let evals = evaluate_population(&cfg.scenario_config(n), cfg)?;
        compare_rows(n, &evals, &cfg.strategies, &mut table);
    }
    let mut out = Outputs::new(out_dir)?;
    let csv = out.table("compare.csv", &table)?;
    for (metric, title) in COMPARE_METRICS {
        out.text(
            &format!("{metric}.svg"),
            &compare_plot(&csv, metric, title)?.render(),
        )?;
    }
    out.finish(command_line, cfg)
}

pub const SWEEP_HEADER: [&str; 11] = [
    "axis",
    "value",
    "instance",
    "strategy",
    "budget",
    "defender_utility",
    "attacker_utility",
    "vulnerability",
    "coverage",
    "effectiveness",
    "consumption",
];

/// Mean defender and attacker utility per strategy against the axis value.
pub fn sweep_plot(csv: &str) -> Result<LinePlot> {
    let (header, rows) = read_csv(csv);
    let col = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| GtraError::Config(format!("column {name} missing from sweep table")))
    };
    let (axis_col, v_col, s_col, um_col, ua_col) = (
        col("axis")?,
        col("value")?,
        col("strategy")?,
        col("defender_utility")?,
        col("attacker_utility")?,
    );
    let axis = rows
        .first()
        .map(|r| r[axis_col].clone())
        .unwrap_or_default();
    // strategy -> (value bits in first-seen order, sums)
    let mut order: Vec<String> = Vec::new();
    let mut acc: BTreeMap<(usize, u64), (f64, f64, f64, usize)> = BTreeMap::new();
    for r in &rows {
        let si = match order.iter().position(|s| *s == r[s_col]) {
            Some(i) => i,
            None => {
                order.push(r[s_col].clone());
                order.len() - 1
            }
        };
        let v = parse_f64(&r[v_col]).unwrap_or(f64::NAN);
        let e = acc.entry((si, v.to_bits())).or_insert((v, 0.0, 0.0, 0));
        e.1 += parse_f64(&r[um_col]).unwrap_or(f64::NAN);
        e.2 += parse_f64(&r[ua_col]).unwrap_or(f64::NAN);
        e.3 += 1;
    }
    let mut plot = LinePlot::new(&format!("Utilities vs {axis}"), &axis, "mean utility");
    for (si, name) in order.iter().enumerate() {
        let mut um: Vec<(f64, f64)> = Vec::new();
        let mut ua: Vec<(f64, f64)> = Vec::new();
        for (_, &(v, su, sa, k)) in acc.range((si, 0)..=(si, u64::MAX)) {
            um.push((v, su / k as f64));
            ua.push((v, sa / k as f64));
        }
        um.sort_by(|a, b| a.0.total_cmp(&b.0));
        ua.sort_by(|a, b| a.0.total_cmp(&b.0));
        plot = plot
            .with_series(&format!("{name} Um"), um)
            .with_series(&format!("{name} Ua"), ua);
    }
    Ok(plot)
}

/// Runs the compare pipeline at each point of a one-dimensional grid.
pub fn cmd_sweep(
    cfg: &ExperimentConfig,
    axis: SweepAxis,
    values: &[f64],
    out_dir: &Path,
    command_line: &str,
) -> Result<Vec<String>> {
    let grid = sweep_grid(&cfg.scenario_config(cfg.n), axis, values)?;
    let mut table = Table::new(&SWEEP_HEADER);
    for (point, &v) in grid.iter().zip(values) {
        for e in evaluate_population(point, cfg)? {
            for s in &e.strategies {
                let mut row = vec![
                    axis.to_string(),
                    fmt_f64(v),
                    e.index.to_string(),
                    s.strategy.to_string(),
                    fmt_f64(e.budget),
                ];
                row.extend(eval_columns(s));
                table.push(row);
            }
        }
    }
    let mut out = Outputs::new(out_dir)?;
    let csv = out.table("sweep.csv", &table)?;
    out.text("utilities.svg", &sweep_plot(&csv)?.render())?;
    out.finish(command_line, cfg)
}

/// Phase portrait from `trajectories.csv` with the equilibrium marked.
pub fn phase_plot(trajectories_csv: &str, equilibrium_csv: &str) -> Result<LinePlot> {
    let (_, rows) = read_csv(trajectories_csv);
    let mut plot = LinePlot::new(
        "Replicator dynamics",
        "attack probability p",
        "protection probability q",
    );
    plot.x_range = Some((0.0, 1.0));
    plot.y_range = Some((0.0, 1.0));
    let mut current: Option<(String, Vec<(f64, f64)>)> = None;
    for r in rows {
        let pt = (
            parse_f64(&r[2]).unwrap_or(f64::NAN),
            parse_f64(&r[3]).unwrap_or(f64::NAN),
        );
        match &mut current {
            Some((id, pts)) if *id == r[0] => pts.push(pt),
            _ => {
                if let Some((id, pts)) = current.take() {
                    plot = plot.with_series(&format!("trajectory {id}"), pts);
                }
                current = Some((r[0].clone(), vec![pt]));
            }
        }
    }
    if let Some((id, pts)) = current {
        plot = plot.with_series(&format!("trajectory {id}"), pts);
    }
    let (_, eq) = read_csv(equilibrium_csv);
    if let Some(row) = eq.first() {
        if let (Some(p), Some(q)) = (parse_f64(&row[0]), parse_f64(&row[1])) {
            plot.marker = Some((p, q));
        }
    }
    Ok(plot)
}

/// Single-target replicator analysis.
pub fn cmd_dynamics(
    cfg: &ExperimentConfig,
    out_dir: &Path,
    command_line: &str,
) -> Result<Vec<String>> {
    let d = &cfg.dynamics;
    let sp = reduce_payoffs(&d.target_params(), d.alpha);
    let mut out = Outputs::new(out_dir)?;

    let mut payoffs = Table::new(&["a", "b", "c", "d", "f"]);
    payoffs.push(
        [sp.a, sp.b, sp.c, sp.d, sp.f]
            .iter()
            .map(|v| fmt_f64(*v))
            .collect(),
    );
    out.table("payoffs.csv", &payoffs)?;

    let mut eq = Table::new(&["p_star", "q_star"]);
    match interior_equilibrium(&sp) {
        Some((p, q)) => eq.push(vec![fmt_f64(p), fmt_f64(q)]),
        None => eq.push(vec!["absent".into(), "absent".into()]),
    }
    let eq_csv = out.table("equilibrium.csv", &eq)?;

    let trajectories = phase_portrait_with(&sp, d.grid, &d.options())?;
    let mut tr = Table::new(&["trajectory", "t", "p", "q"]);
    for (k, t) in trajectories.iter().enumerate() {
        for x in &t.points {
            tr.push(vec![
                k.to_string(),
                fmt_f64(x.t),
                fmt_f64(x.p),
                fmt_f64(x.q),
            ]);
        }
    }
    let tr_csv = out.table("trajectories.csv", &tr)?;
    out.text(
        "phase_portrait.svg",
        &phase_plot(&tr_csv, &eq_csv)?.render(),
    )?;
    out.finish(command_line, cfg)
}
