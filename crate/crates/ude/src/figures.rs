//! Data behind the six standard plots: exponent objectives, error
//! exponents, growth rates, and the mean and variance of `P_U` for
//! `(m, n) = (20, 40)`.

use ude_core::asymptotics::{self, GrowthRate};
use ude_core::ensemble::BernoulliEnsemble;
use ude_core::optimize::OptimizerConfig;
use ude_core::{Bsc, LogReal};

use crate::error::{Error, Result};
use crate::parallel;
use crate::table::{linear_cell, Cell, Table};

pub const FIG_RATE: f64 = 0.5;
pub const FIG_K: f64 = 20.0;
pub const OBJECTIVE_EPS: [f64; 3] = [0.1, 0.2, 0.4];
pub const EXPONENT_RATES: [f64; 4] = [0.3, 0.5, 0.7, 0.9];
pub const CURVE_M: u32 = 20;
pub const CURVE_N: u32 = 40;
pub const SPARSE_K: f64 = 5.0;

/// `l = 0.001, 0.002, ..., 1`.
pub fn l_grid() -> Vec<f64> {
    (1..=1000).map(|i| f64::from(i) / 1000.0).collect()
}

/// `eps = 0.005, 0.010, ..., 0.495`.
pub fn exponent_eps_grid() -> Vec<f64> {
    (1..=99).map(|i| f64::from(i) / 200.0).collect()
}

/// `eps = 0.001, 0.002, ..., 0.499`.
pub fn curve_eps_grid() -> Vec<f64> {
    (1..=499).map(|i| f64::from(i) / 1000.0).collect()
}

fn objective_table(growth: impl GrowthRate + Copy) -> Result<Table> {
    let mut cols = vec!["l".to_string()];
    cols.extend(OBJECTIVE_EPS.iter().map(|e| format!("g_eps{e}")));
    cols.push("reference".to_string());
    let mut t = Table::new(cols);
    let objectives = OBJECTIVE_EPS
        .iter()
        .map(|&e| asymptotics::exponent_objective(growth, e))
        .collect::<ude_core::Result<Vec<_>>>()?;
    for l in l_grid() {
        let mut row = vec![Cell::Float(l)];
        row.extend(objectives.iter().map(|g| Cell::Float(g.eval(l))));
        row.push(Cell::Float(-(1.0 - FIG_RATE)));
        t.push(row)?;
    }
    Ok(t)
}

/// Exponent objective of the uniform ensemble, `R = 0.5`.
pub fn fig1() -> Result<Table> {
    objective_table(asymptotics::growth_rate_random(FIG_RATE)?)
}

/// Exponent objective of the Bernoulli ensemble, `R = 0.5`, `k = 20`.
pub fn fig2() -> Result<Table> {
    objective_table(asymptotics::growth_rate_bernoulli(FIG_RATE, FIG_K)?)
}

/// Error exponent of the Bernoulli ensemble with `k = 20` against `eps`.
pub fn fig3(cfg: &OptimizerConfig) -> Result<Table> {
    let mut cols = vec!["eps".to_string()];
    cols.extend(EXPONENT_RATES.iter().map(|r| format!("exponent_R{r}")));
    let mut t = Table::new(cols);
    let growths = EXPONENT_RATES
        .iter()
        .map(|&r| asymptotics::growth_rate_bernoulli(r, FIG_K))
        .collect::<ude_core::Result<Vec<_>>>()?;
    for eps in exponent_eps_grid() {
        let mut row = vec![Cell::Float(eps)];
        for g in &growths {
            row.push(Cell::Float(asymptotics::error_exponent(g, eps, cfg)?.value));
        }
        t.push(row)?;
    }
    Ok(t)
}

/// Growth rates of the uniform and Bernoulli (`k = 20`) ensembles, `R = 0.5`.
pub fn fig4() -> Result<Table> {
    let rnd = asymptotics::growth_rate_random(FIG_RATE)?;
    let bern = asymptotics::growth_rate_bernoulli(FIG_RATE, FIG_K)?;
    let mut t = Table::new(["l", "random", "bernoulli"]);
    for l in l_grid() {
        t.push(vec![Cell::Float(l), Cell::Float(rnd.eval(l)), Cell::Float(bern.eval(l))])?;
    }
    Ok(t)
}

fn curve_ensembles() -> Result<[BernoulliEnsemble; 2]> {
    Ok([BernoulliEnsemble::random(CURVE_M, CURVE_N)?, BernoulliEnsemble::new(CURVE_M, CURVE_N, SPARSE_K)?])
}

fn curve_table(values: [Vec<LogReal>; 2], quantity: &str, eps: &[f64]) -> Result<Table> {
    let mut t = Table::new([
        "eps".to_string(),
        format!("random_log2_{quantity}"),
        format!("random_{quantity}"),
        format!("sparse_log2_{quantity}"),
        format!("sparse_{quantity}"),
    ]);
    for (i, &e) in eps.iter().enumerate() {
        let mut row = vec![Cell::Float(e)];
        for v in &values {
            row.push(Cell::Float(v[i].log2()));
            row.push(linear_cell(v[i].log2()));
        }
        t.push(row)?;
    }
    Ok(t)
}

fn channels(eps: &[f64]) -> Result<Vec<Bsc>> {
    Ok(eps.iter().map(|&e| Bsc::new(e)).collect::<ude_core::Result<_>>()?)
}

/// `E[P_U]` of `R(20, 40)` and `B(20, 40, 5)`.
pub fn fig5() -> Result<Table> {
    let eps = curve_eps_grid();
    let chs = channels(&eps)?;
    let [r, s] = curve_ensembles()?;
    let values = [chs.iter().map(|c| r.avg_pu(c)).collect(), chs.iter().map(|c| s.avg_pu(c)).collect()];
    curve_table(values, "mean", &eps)
}

/// `Var[P_U]` of `R(20, 40)` and `B(20, 40, 5)`.
pub fn fig6(workers: usize) -> Result<Table> {
    let eps = curve_eps_grid();
    let chs = channels(&eps)?;
    let [r, s] = curve_ensembles()?;
    let values = [parallel::var_pu_sweep(&r, &chs, workers)?, parallel::var_pu_sweep(&s, &chs, workers)?];
    curve_table(values, "var", &eps)
}

pub fn figure(number: u32, cfg: &OptimizerConfig, workers: usize) -> Result<Table> {
    match number {
        1 => fig1(),
        2 => fig2(),
        3 => fig3(cfg),
        4 => fig4(),
        5 => fig5(),
        6 => fig6(workers),
        _ => Err(Error::Usage(format!("no figure {number}; expected 1 to 6"))),
    }
}
