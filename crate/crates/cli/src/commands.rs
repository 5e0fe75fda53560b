//! Command bodies shared by the subcommands and scenario tasks. Each writes
//! its report files through a [`Sink`] and returns a verdict plus a short
//! human summary.

use anyhow::Result;
use poreli::order_checks::{OrderVerdict, Relation};
use poreli::theorems::{reproduce_counterexample, sweep, verify, CounterexampleId, Operands, TheoremCase, TheoremId};
use poreli::{GridSpec, Monotonicity, SystemModel};
use serde::Serialize;

use crate::output::{fmt_opt, fmt_sig, to_json, Csv, Sink};

pub struct Outcome {
    /// The check held, the theorem was consistent, or the reproduction matched.
    pub passed: bool,
    pub summary: Vec<String>,
}

pub struct Named<'a> {
    pub name: &'a str,
    pub system: &'a SystemModel,
}

pub fn eval_curves(systems: &[Named<'_>], grid: &GridSpec, sink: &Sink) -> Result<Outcome> {
    grid.validate()?;
    let mut summary = Vec::new();
    for s in systems {
        let mut csv = Csv::new(&["t", "survival", "cdf", "density", "hazard", "reversed_hazard"]);
        for t in grid.points() {
            let p = s.system.evaluate(t)?;
            csv.row([
                fmt_sig(p.t),
                fmt_sig(p.survival),
                fmt_sig(p.cdf),
                fmt_opt(p.density),
                fmt_opt(p.hazard),
                fmt_opt(p.reversed_hazard),
            ]);
        }
        let path = sink.write(&format!("curves_{}.csv", s.name), &csv.into_string())?;
        summary.push(format!("{}: {} points -> {}", s.name, grid.count, path.display()));
    }
    Ok(Outcome { passed: true, summary })
}

#[derive(Serialize)]
struct CheckReport<'a> {
    relation: Relation,
    a: &'a str,
    b: &'a str,
    system_a: &'a SystemModel,
    system_b: &'a SystemModel,
    verdict: &'a OrderVerdict,
}

fn verdict_line(label: &str, v: &OrderVerdict) -> String {
    let mut line = if v.holds {
        format!("{label} holds")
    } else {
        let w = &v.witnesses[0];
        format!(
            "{label} fails: {} witnesses, first at t={}",
            v.witnesses.len(),
            fmt_sig(w.t)
        )
    };
    if v.degraded {
        line.push_str(&format!(
            " (degraded: {} of {} points skipped)",
            v.skipped, v.grid.count
        ));
    }
    line
}

pub fn check_order(relation: Relation, a: Named<'_>, b: Named<'_>, grid: &GridSpec, sink: &Sink) -> Result<Outcome> {
    let verdict = relation.check(a.system, b.system, grid)?;
    let report = CheckReport {
        relation,
        a: a.name,
        b: b.name,
        system_a: a.system,
        system_b: b.system,
        verdict: &verdict,
    };
    let path = sink.write(
        &format!("check_{}_{}_{}.json", relation, a.name, b.name),
        &to_json(&report)?,
    )?;
    Ok(Outcome {
        passed: verdict.holds,
        summary: vec![format!(
            "{} -> {}",
            verdict_line(&format!("{relation}({}, {})", a.name, b.name), &verdict),
            path.display()
        )],
    })
}

pub fn verify_theorem(case: &TheoremCase, sink: &Sink) -> Result<Outcome> {
    let r = verify(case)?;
    let path = sink.write(&format!("verify_{}.json", r.id), &to_json(&r)?)?;
    let held: Vec<&str> = r
        .hypothesis
        .branches
        .iter()
        .filter(|b| b.holds)
        .map(|b| b.name.as_str())
        .collect();
    let operands = match r.operands {
        Operands::XY => "(X, Y)",
        Operands::YX => "(Y, X)",
    };
    let mut line = if r.hypothesis.holds {
        format!("{}: hypothesis holds [{}]", r.id, held.join(", "))
    } else {
        format!("{}: hypothesis fails", r.id)
    };
    if let Some(v) = &r.conclusion {
        line.push_str("; ");
        line.push_str(&verdict_line(&format!("{}{operands}", r.relation), v));
    }
    line.push_str(if r.consistent { "; consistent" } else { "; INCONSISTENT" });
    Ok(Outcome {
        passed: r.consistent,
        summary: vec![format!("{line} -> {}", path.display())],
    })
}

fn curve_file_label(label: &str) -> String {
    label.replace('/', "_over_")
}

pub fn reproduce(id: CounterexampleId, sink: &Sink) -> Result<Outcome> {
    let r = reproduce_counterexample(id)?;
    let mut summary = Vec::new();
    let path = sink.write(&format!("reproduce_{id}.json"), &to_json(&r)?)?;
    if !r.values.is_empty() {
        let mut csv = Csv::new(&[
            "system",
            "quantity",
            "t",
            "reference",
            "computed",
            "abs_error",
            "tolerance",
            "matches",
        ]);
        for v in &r.values {
            let quantity = match v.quantity {
                poreli::theorems::Quantity::Survival => "survival",
                poreli::theorems::Quantity::Hazard => "hazard",
            };
            csv.row([
                v.system.clone(),
                quantity.to_string(),
                fmt_sig(v.t),
                fmt_sig(v.reference),
                fmt_sig(v.computed),
                fmt_sig(v.abs_error),
                fmt_sig(v.tolerance),
                v.matches.to_string(),
            ]);
            summary.push(format!(
                "{id} {quantity} {}({}) = {} vs reference {} [{}]",
                v.system,
                fmt_sig(v.t),
                fmt_sig(v.computed),
                fmt_sig(v.reference),
                if v.matches { "match" } else { "MISMATCH" }
            ));
        }
        sink.write(&format!("reproduce_{id}_values.csv"), &csv.into_string())?;
    }
    for c in &r.curves {
        let mut csv = Csv::new(&["t", "ratio"]);
        for p in &c.points {
            csv.row([fmt_sig(p.t), fmt_sig(p.value)]);
        }
        sink.write(
            &format!("reproduce_{id}_{}.csv", curve_file_label(&c.label)),
            &csv.into_string(),
        )?;
        summary.push(match c.monotonicity {
            Monotonicity::Nonmonotone { turn, witness } => format!(
                "{id} {}: nonmonotone ({turn:?} at t={}, {}, {})",
                c.label,
                fmt_sig(witness[0].t),
                fmt_sig(witness[1].t),
                fmt_sig(witness[2].t)
            ),
            m => format!("{id} {}: {m:?}", c.label),
        });
    }
    summary.push(format!(
        "{id} {} -> {}",
        verdict_line(&r.verdict.relation.to_string(), &r.verdict),
        path.display()
    ));
    summary.push(format!(
        "{id}: {}",
        if r.reproduced { "reproduced" } else { "NOT reproduced" }
    ));
    Ok(Outcome {
        passed: r.reproduced,
        summary,
    })
}

pub fn run_sweep(id: TheoremId, branch: Option<&str>, trials: usize, seed: u64, sink: &Sink) -> Result<Outcome> {
    let r = sweep(id, branch, trials, seed)?;
    let name = match branch {
        Some(b) => format!("sweep_{id}_{b}_seed{seed}.json"),
        None => format!("sweep_{id}_seed{seed}.json"),
    };
    let path = sink.write(&name, &to_json(&r)?)?;
    let mut summary: Vec<String> = r
        .branches
        .iter()
        .map(|b| format!("{id} {}: {}/{} consistent", b.name, b.consistent, b.trials))
        .collect();
    summary.push(format!(
        "{id} seed {seed}: {}/{} consistent, {} degraded -> {}",
        r.consistent,
        r.trials,
        r.degraded,
        path.display()
    ));
    Ok(Outcome {
        passed: r.all_consistent(),
        summary,
    })
}
