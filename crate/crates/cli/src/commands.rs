use std::hash::Hash;

use ergolab::blockdiag::sup_deviation_at;
use ergolab::ergodic::{orbit_mean_summary, CesaroSweep, OrbitMeanSummary};
use ergolab::graphop::power_norm_profile;
use ergolab::{
    apply, b_coeff, graph_handle, orbit_predicate, Budget, LadderFamilyGraph, LadderKind, LadderVertex,
    OperatorHandle, Rational, SparseVector,
};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::config::{Command, Lambda, Route, RunConfig, StartVector};
use crate::criteria;
use crate::error::CliError;
use crate::table::{Cell, Column, Table};

/// A finished run: the table plus every assertion that did not hold.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub table: Table,
    pub failures: Vec<String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    match &config.command {
        Command::Norms { .. } => cmd_norms(config),
        Command::Orbit { .. } => cmd_orbit(config),
        Command::Cesaro { .. } => cmd_cesaro(config),
        Command::Block { .. } => cmd_block(config),
        Command::Verify { .. } => cmd_verify(config),
    }
}

fn budget_err(msg: String) -> CliError {
    CliError::Budget(msg)
}

fn check_steps(budget: &Budget, steps: u64) -> Result<(), CliError> {
    if steps > budget.max_steps {
        return Err(budget_err(format!("{steps} steps exceed --max-steps {}", budget.max_steps)));
    }
    Ok(())
}

/// Rows `(n, N, norm)` for `n = 1..=n_max`.
pub fn cmd_norms(config: &RunConfig) -> Result<Outcome, CliError> {
    let Command::Norms {
        kind,
        n_max,
        trunc,
        bound,
    } = &config.command
    else {
        unreachable!("dispatched by command")
    };
    check_steps(&config.budget, *n_max)?;
    if *trunc as u128 > config.budget.max_support as u128 {
        return Err(budget_err(format!("--trunc {trunc} exceeds --max-support")));
    }
    let g = LadderFamilyGraph::from_kind(*kind);
    let norms = power_norm_profile(&g, *n_max, *trunc);
    let mut table = Table::new(vec![Column::plain("n"), Column::plain("N"), Column::frac("norm")]);
    let mut failures = Vec::new();
    for (i, norm) in norms.into_iter().enumerate() {
        let n = i as u64 + 1;
        if let Some(b) = bound {
            if &norm > b {
                failures.push(format!("n = {n}: norm {norm} exceeds bound {b}"));
            }
        }
        table.push(vec![n.into(), (*trunc).into(), norm.into()]);
    }
    Ok(Outcome { table, failures })
}

fn orbit_copies(kind: LadderKind, k_max: u32) -> Vec<u32> {
    match kind.copy() {
        Some(k) => vec![k],
        None => (0..=k_max).collect(),
    }
}

/// Rows `(n, k, simulated, predicate, match)` for the entry orbit.
pub fn cmd_orbit(config: &RunConfig) -> Result<Outcome, CliError> {
    let Command::Orbit { kind, n_max, k_max } = &config.command else {
        unreachable!("dispatched by command")
    };
    check_steps(&config.budget, *n_max)?;
    let g = LadderFamilyGraph::from_kind(*kind);
    let ks = orbit_copies(*kind, *k_max);
    let mut table = Table::new(vec![
        Column::plain("n"),
        Column::plain("k"),
        Column::frac("simulated"),
        Column::plain("predicate"),
        Column::plain("match"),
    ]);
    let mut failures = Vec::new();
    let mut cur = SparseVector::unit(g.entry_vertex());
    for n in 0..=*n_max {
        if n > 0 {
            cur = apply(&g, &cur);
            if cur.len() > config.budget.max_support {
                return Err(budget_err(format!("orbit support {} at n = {n}", cur.len())));
            }
        }
        for &k in &ks {
            let sim = cur.value(&LadderVertex::Sink(k));
            let pred = orbit_predicate(*kind, k, n);
            let ok = sim == Rational::from(pred as u32);
            if !ok {
                failures.push(format!("n = {n}, k = {k}: simulated {sim}, predicate {pred}"));
            }
            table.push(vec![n.into(), k.into(), sim.into(), (pred as u32).into(), ok.into()]);
        }
    }
    Ok(Outcome { table, failures })
}

/// One cell of a Cesàro table.
#[derive(Clone, Debug, PartialEq)]
pub struct MeanCell {
    pub m: u64,
    pub n: u64,
    pub sup: Rational,
    pub support: u128,
    pub argmax: Option<LadderVertex>,
}

fn sup_and_argmax<K: Clone + Hash + Eq + Ord>(v: &SparseVector<K>) -> (Rational, Option<K>) {
    let mut best = Rational::ZERO;
    let mut arg: Option<K> = None;
    for (k, x) in v.iter() {
        let a = x.abs();
        let better = match &arg {
            None => true,
            Some(cur) => a > best || (a == best && k < cur),
        };
        if better {
            best = a;
            arg = Some(k.clone());
        }
    }
    (best, arg)
}

/// `A_n(λ T^m) x` by the running-sum engine, one sweep per `m`.
pub fn engine_means(
    g: &LadderFamilyGraph,
    x: &SparseVector<LadderVertex>,
    m: u64,
    lambda: &Rational,
    schedule: &[u64],
    budget: Budget,
) -> Result<Vec<MeanCell>, CliError> {
    let base = graph_handle(g);
    let stepped = base.power(m as u32);
    let rotated;
    let op: &OperatorHandle<'_, LadderVertex> = if lambda.is_one() {
        &stepped
    } else {
        let l = lambda.clone();
        rotated = OperatorHandle::new("λT^m", move |y: &SparseVector<LadderVertex>| stepped.apply(y).scaled(&l));
        &rotated
    };
    let budget = Budget {
        max_steps: budget.max_steps / m,
        ..budget
    };
    let mut sweep = CesaroSweep::new(op, x, budget);
    let mut out = Vec::with_capacity(schedule.len());
    for &n in schedule {
        sweep.advance_to(n)?;
        let (sup, argmax) = sup_and_argmax(sweep.sum());
        out.push(MeanCell {
            m,
            n,
            sup: sup / Rational::from(n),
            support: sweep.sum().len() as u128,
            argmax,
        });
    }
    Ok(out)
}

fn unit_power(lambda: &Rational, e: u64) -> Rational {
    if lambda.is_negative() && e % 2 == 1 {
        -Rational::ONE
    } else {
        Rational::ONE
    }
}

/// `A_n(λ T^m) e_entry` from the closed-form orbit, exact for `λ = ±1`.
pub fn closed_form_mean(kind: LadderKind, m: u64, n: u64, lambda: &Rational) -> Result<MeanCell, CliError> {
    let c = Rational::new(1, n as i64);
    let s: OrbitMeanSummary<Rational> = orbit_mean_summary(kind, m * (n - 1) + 1, |t| {
        if t % m == 0 {
            &c * &unit_power(lambda, t / m)
        } else {
            Rational::ZERO
        }
    })?;
    Ok(MeanCell {
        m,
        n,
        sup: s.sup,
        support: s.support,
        argmax: Some(s.argmax),
    })
}

/// Float version for arbitrary unimodular `λ`. The reported fraction is the
/// exact value of the computed `f64`.
pub fn closed_form_mean_float(kind: LadderKind, m: u64, n: u64, lambda: Complex64) -> Result<MeanCell, CliError> {
    let s: OrbitMeanSummary<f64> = orbit_mean_summary(kind, m * (n - 1) + 1, |t| {
        if t % m == 0 {
            lambda.powu((t / m) as u32) / n as f64
        } else {
            Complex64::new(0.0, 0.0)
        }
    })?;
    Ok(MeanCell {
        m,
        n,
        sup: Rational::from_f64_exact(s.sup).expect("finite"),
        support: s.support,
        argmax: Some(s.argmax),
    })
}

/// Rows `(m, lambda, n, sup_norm, support, argmax, route)`.
pub fn cmd_cesaro(config: &RunConfig) -> Result<Outcome, CliError> {
    let Command::Cesaro {
        kind,
        x,
        powers,
        schedule,
        lambda,
        route,
        threshold,
        decreasing,
    } = &config.command
    else {
        unreachable!("dispatched by command")
    };
    let last = *schedule.last().expect("validated nonempty");
    for &m in powers {
        let steps = m.checked_mul(last).ok_or_else(|| budget_err("m·n overflows".into()))?;
        check_steps(&config.budget, steps)?;
    }
    let closed = match route {
        Route::ClosedForm => true,
        Route::Engine => false,
        Route::Auto => *x == StartVector::Entry,
    };
    let g = LadderFamilyGraph::from_kind(*kind);
    let mut cells: Vec<MeanCell> = if closed {
        let jobs: Vec<(u64, u64)> = powers.iter().flat_map(|&m| schedule.iter().map(move |&n| (m, n))).collect();
        jobs.par_iter()
            .map(|&(m, n)| match lambda {
                Lambda::Exact(l) => closed_form_mean(*kind, m, n, l),
                Lambda::Complex(z) => closed_form_mean_float(*kind, m, n, *z),
            })
            .collect::<Result<_, _>>()?
    } else {
        let Lambda::Exact(l) = lambda else {
            unreachable!("rejected by config")
        };
        let start = match x {
            StartVector::Entry => SparseVector::unit(g.entry_vertex()),
            StartVector::Unit(v) => SparseVector::unit(*v),
        };
        let per_m: Vec<Vec<MeanCell>> = powers
            .par_iter()
            .map(|&m| engine_means(&g, &start, m, l, schedule, config.budget))
            .collect::<Result<_, _>>()?;
        per_m.into_iter().flatten().collect()
    };
    cells.sort_by_key(|c| (powers.iter().position(|&m| m == c.m), c.n));
    let route_name = if closed { "closed-form" } else { "engine" };
    let mut table = Table::new(vec![
        Column::plain("m"),
        Column::plain("lambda"),
        Column::plain("n"),
        Column::frac("sup_norm"),
        Column::plain("support"),
        Column::plain("argmax"),
        Column::plain("route"),
    ]);
    let mut failures = Vec::new();
    for &m in powers {
        let row: Vec<&MeanCell> = cells.iter().filter(|c| c.m == m).collect();
        if *decreasing && !row.windows(2).all(|w| w[1].sup < w[0].sup) {
            failures.push(format!("m = {m}: norms are not strictly decreasing"));
        }
        if let (Some(t), Some(c)) = (threshold, row.last()) {
            if &c.sup > t {
                failures.push(format!("m = {m}, n = {}: {} exceeds {t}", c.n, c.sup));
            }
        }
    }
    for c in cells {
        table.push(vec![
            c.m.into(),
            lambda.label().into(),
            c.n.into(),
            c.sup.into(),
            c.support.into(),
            c.argmax.map_or(String::new(), |v| v.to_string()).into(),
            route_name.into(),
        ]);
    }
    Ok(Outcome { table, failures })
}

/// Deviation rows `(M, n, p, deviation, argmax_m, bound, pass)` or, in
/// diagonal mode, rows `(m, n, j, b, min, pass)` with `m = n`.
pub fn cmd_block(config: &RunConfig) -> Result<Outcome, CliError> {
    let Command::Block {
        block_count,
        n,
        p,
        diag_j,
        min,
        bound,
    } = &config.command
    else {
        unreachable!("dispatched by command")
    };
    let mut failures = Vec::new();
    if let Some(j) = diag_j {
        let lower = min.clone().unwrap_or_else(|| Rational::new(2, 5 * *j as i64));
        let mut table = Table::new(vec![
            Column::plain("m"),
            Column::plain("n"),
            Column::plain("j"),
            Column::frac("b"),
            Column::frac("min"),
            Column::plain("pass"),
        ]);
        for &nn in n {
            let b = b_coeff(nn, nn, *j)?;
            let ok = b >= lower;
            if !ok {
                failures.push(format!("n = {nn}: b = {b} < {lower}"));
            }
            table.push(vec![nn.into(), nn.into(), (*j).into(), b.into(), lower.clone().into(), ok.into()]);
        }
        return Ok(Outcome { table, failures });
    }
    let mut table = Table::new(vec![
        Column::plain("M"),
        Column::plain("n"),
        Column::plain("p"),
        Column::frac("deviation"),
        Column::plain("argmax_m"),
        Column::frac("bound"),
        Column::plain("pass"),
    ]);
    for &nn in n {
        let (dev, arg) = sup_deviation_at(*block_count, nn, *p)?;
        let b = bound.clone().or_else(|| (p % 2 == 1).then(|| Rational::new(2, nn as i64)));
        let pass: Cell = match &b {
            Some(b) => {
                let ok = &dev <= b;
                if !ok {
                    failures.push(format!("n = {nn}: deviation {dev} exceeds {b}"));
                }
                ok.into()
            }
            None => "".into(),
        };
        table.push(vec![(*block_count).into(), nn.into(), (*p).into(), dev.into(), arg.into(), b.into(), pass]);
    }
    Ok(Outcome { table, failures })
}

/// Rows `(id, criterion, passed, detail)`.
pub fn cmd_verify(config: &RunConfig) -> Result<Outcome, CliError> {
    let Command::Verify { only } = &config.command else {
        unreachable!("dispatched by command")
    };
    let mut table = Table::new(vec![
        Column::plain("id"),
        Column::plain("criterion"),
        Column::plain("passed"),
        Column::plain("detail"),
    ]);
    let mut failures = Vec::new();
    for c in criteria::CRITERIA.iter().filter(|c| only.is_empty() || only.contains(&c.id)) {
        let start = std::time::Instant::now();
        let r = (c.run)();
        eprintln!(
            "criterion {:>2} {} {} ({} ms)",
            c.id,
            if r.passed { "PASS" } else { "FAIL" },
            c.title,
            start.elapsed().as_millis()
        );
        if !r.passed {
            failures.push(format!("criterion {}: {}", c.id, r.detail));
        }
        table.push(vec![(c.id as u32).into(), c.title.into(), r.passed.into(), r.detail.into()]);
    }
    Ok(Outcome { table, failures })
}
