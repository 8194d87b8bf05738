use std::fmt::Write;

use gkzcc::conormal::{all_generators, dim_report, DimReport, GeneratorSet};
use gkzcc::cycle::{cc_gkz, dimension_excess, umbrella, CcReport, DimensionExcess, Reduction};
use gkzcc::fan::{default_complete_fan, resolve_with, GenerableSet, Resolution, TieBreak};
use gkzcc::matrix::{
    is_non_confluent, is_p_nondegenerate, is_sub_non_confluent, square_reduce, PNondegeneracy, ReductionTranscript,
};
use gkzcc::{IntMatrix, Prime, ThetaSubset};
use serde::Serialize;

use crate::config::{parse_theta, JobConfig};
use crate::Failure;

/// A command result in both output formats.
pub struct Output {
    pub json: serde_json::Value,
    pub text: String,
}

impl Output {
    fn new<T: Serialize>(value: &T, text: String) -> Self {
        Output { json: serde_json::to_value(value).expect("serializable"), text }
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[derive(Serialize)]
pub struct Analysis {
    pub matrix: IntMatrix,
    pub sub_non_confluent: bool,
    pub witness: Option<IntMatrix>,
    pub nondegeneracy: Option<PNondegeneracy>,
    pub excess: Vec<DimensionExcess>,
    pub square_reduction: Option<ReductionTranscript>,
}

pub fn analyze(cfg: &JobConfig) -> Result<Output, Failure> {
    let a = cfg.hatted()?;
    let witness = is_non_confluent(&a);
    let mut excess = Vec::new();
    let mut square_reduction = None;
    let nondegeneracy = cfg.prime.map(|p| is_p_nondegenerate(&a, p));
    if let Some(audit) = &nondegeneracy {
        for t in &audit.failing {
            excess.extend(dimension_excess(&a, t, audit.prime)?);
        }
        if !audit.nondegenerate && a.is_square() && a.det()? != 0.into() {
            square_reduction = Some(square_reduce(&a, audit.prime)?.1);
        }
    }
    let report = Analysis {
        sub_non_confluent: a.nrows() > 1 && is_sub_non_confluent(&a.rows_from(1)?),
        matrix: a,
        witness,
        nondegeneracy,
        excess,
        square_reduction,
    };
    Ok(Output::new(&report, render_analysis(&report)))
}

pub fn render_analysis(r: &Analysis) -> String {
    let mut s = String::new();
    writeln!(s, "A = {}", r.matrix).unwrap();
    writeln!(s, "sub-non-confluent: {}", yes(r.sub_non_confluent)).unwrap();
    match &r.witness {
        Some(p) => writeln!(s, "non-confluent: yes (P = {p})").unwrap(),
        None => writeln!(s, "non-confluent: no").unwrap(),
    }
    match &r.nondegeneracy {
        None => writeln!(s, "p-nondegeneracy: no prime given").unwrap(),
        Some(audit) => {
            writeln!(s, "{}-nondegenerate: {}", audit.prime, yes(audit.nondegenerate)).unwrap();
            if !audit.failing.is_empty() {
                let list: Vec<String> = audit.failing.iter().map(ToString::to_string).collect();
                writeln!(s, "failing: {}", list.join(", ")).unwrap();
            }
        }
    }
    for e in &r.excess {
        writeln!(s, "dim S_{}(A,{}) = {} > {}", e.chart, e.theta, e.dim, e.bound).unwrap();
    }
    if let Some(t) = &r.square_reduction {
        writeln!(s, "square reduction: {} step(s), final {}", t.steps.len(), t.final_matrix).unwrap();
        for (i, step) in t.steps.iter().enumerate() {
            writeln!(s, "  {}: P = {}, divide row {}", i + 1, step.p_matrix, step.divided_row).unwrap();
        }
    }
    s
}

#[derive(Serialize)]
struct ResolveReport<'a> {
    start: &'a GenerableSet,
    #[serde(flatten)]
    resolution: &'a Resolution,
}

pub fn resolve(cfg: &JobConfig, seed: Option<u64>) -> Result<Output, Failure> {
    let b = cfg.unhatted()?;
    let start = cfg.fan.clone().unwrap_or_else(|| default_complete_fan(b.nrows()));
    let tie = seed.map_or(TieBreak::Lexicographic, TieBreak::Seeded);
    let res = resolve_with(&b, &start, tie)?;
    let mut s = String::new();
    writeln!(s, "B = {b}").unwrap();
    writeln!(s, "start: {} cones, {} edges", start.len(), start.edges().len()).unwrap();
    writeln!(s, "blow-ups: {}", res.records.len()).unwrap();
    for (i, r) in res.records.iter().enumerate() {
        writeln!(s, "  {}: {} + {} -> {}", i + 1, r.e1, r.e2, r.ex).unwrap();
    }
    for l in &res.log {
        writeln!(
            s,
            "  pair ({},{}): (mu,nu) ({},{}) -> ({},{})",
            l.pair.0, l.pair.1, l.mu_before, l.nu_before, l.mu_after, l.nu_after
        )
        .unwrap();
    }
    writeln!(s, "final: {} cones, {} edges", res.fan.len(), res.fan.edges().len()).unwrap();
    for c in res.fan.cones() {
        writeln!(s, "  {c}").unwrap();
    }
    Ok(Output::new(&ResolveReport { start: &start, resolution: &res }, s))
}

#[derive(Serialize)]
pub struct ConormalReport {
    pub matrix: IntMatrix,
    pub theta: ThetaSubset,
    pub chart: usize,
    pub infinity: bool,
    pub xi: GeneratorSet,
    pub l: GeneratorSet,
    #[serde(rename = "box")]
    pub box_: GeneratorSet,
    pub dim_char0: DimReport,
    pub prime: Option<Prime>,
    pub dim_p: Option<DimReport>,
}

pub fn conormal_report(cfg: &JobConfig, theta: &ThetaSubset, k: usize, infinity: bool) -> Result<ConormalReport, Failure> {
    let a = cfg.hatted()?;
    let [xi, l, box_] = all_generators(&a, theta, k, infinity)?;
    let dim_char0 = dim_report(&a, theta, k, None)?;
    let dim_p = cfg.prime.map(|p| dim_report(&a, theta, k, Some(p))).transpose()?;
    Ok(ConormalReport { matrix: a, theta: theta.clone(), chart: k, infinity, xi, l, box_, dim_char0, prime: cfg.prime, dim_p })
}

fn family(s: &mut String, name: &str, g: &GeneratorSet) {
    let body = if g.is_empty() { "{}".to_string() } else { g.render(true).join(", ") };
    writeln!(s, "{name}: {body}").unwrap();
}

pub fn render_conormal(r: &ConormalReport) -> String {
    let mut s = String::new();
    let label = if r.infinity { "S^∞" } else { "S" };
    writeln!(s, "{label}_{}(A,{}) for A = {}", r.chart, r.theta, r.matrix).unwrap();
    family(&mut s, "Xi", &r.xi);
    family(&mut s, "L", &r.l);
    family(&mut s, "Box", &r.box_);
    writeln!(s, "dim = {} (char 0)", r.dim_char0.dim_lower).unwrap();
    if let (Some(d), Some(p)) = (&r.dim_p, r.prime) {
        let exact = d.dim_exact.map_or("?".to_string(), |x| x.to_string());
        writeln!(
            s,
            "dim = {exact} (char {p}; r = {}, r_p = {}, {} <= dim <= {})",
            d.r,
            d.r_p.unwrap_or(d.r),
            d.dim_lower,
            d.dim_upper
        )
        .unwrap();
    }
    s
}

pub fn conormal(cfg: &JobConfig, theta: &str, k: usize, infinity: bool) -> Result<Output, Failure> {
    let n = cfg.hatted()?.ncols();
    let theta = parse_theta(theta, n)?;
    let r = conormal_report(cfg, &theta, k, infinity)?;
    Ok(Output::new(&r, render_conormal(&r)))
}

pub fn umbrella_cmd(cfg: &JobConfig) -> Result<Output, Failure> {
    let a = cfg.hatted()?;
    let u = umbrella(&a)?;
    let text = u.iter().map(|t| format!("{t}\n")).collect();
    Ok(Output::new(&u, text))
}

pub fn cc_report(cfg: &JobConfig) -> Result<CcReport, Failure> {
    let b = cfg.unhatted()?;
    let p = cfg.require_prime()?;
    let chi = cfg.require_character()?;
    Ok(cc_gkz(&b, p, chi, cfg.multiplicities.as_ref())?)
}

pub fn render_cc(r: &CcReport) -> String {
    let mut s = String::new();
    writeln!(s, "B = {}, p = {}", r.input, r.prime).unwrap();
    for red in &r.reductions {
        match red {
            Reduction::Square { transcript, standardizer, character } => writeln!(
                s,
                "reduction: square, {} step(s), standardizer {standardizer}, character {:?}",
                transcript.steps.len(),
                character.exponents()
            )
            .unwrap(),
            Reduction::RowDivision { row, times, result } => {
                writeln!(s, "reduction: row {row} divided by {} x{times} -> {result}", r.prime).unwrap()
            }
        }
    }
    if let Some(b) = r.reduced_b().filter(|_| !r.reductions.is_empty()) {
        writeln!(s, "reduced B = {b}").unwrap();
    }
    for e in &r.diagnostics {
        writeln!(s, "warning: dim S_{}(A,{}) = {} > {}", e.chart, e.theta, e.dim, e.bound).unwrap();
    }
    writeln!(s, "components: {}", r.cycle.len()).unwrap();
    writeln!(s, "{}", r.cycle).unwrap();
    writeln!(s, "twist {}, shift [{}] (not part of the cycle)", r.twist, r.shift).unwrap();
    s
}

pub fn cc(cfg: &JobConfig) -> Result<Output, Failure> {
    let r = cc_report(cfg)?;
    Ok(Output::new(&r, render_cc(&r)))
}
