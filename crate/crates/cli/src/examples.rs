use std::fmt::Write;
use std::fs;
use std::path::Path;

use gkzcc::cycle::umbrella;
use gkzcc::{CharacterVector, IntMatrix, Prime, ThetaSubset};
use similar::TextDiff;

use crate::commands::{analyze, conormal_report, render_cc, render_conormal, cc_report};
use crate::config::JobConfig;
use crate::Failure;

pub struct Fixture {
    pub name: &'static str,
    pub b: Vec<i64>,
    pub p: u64,
    pub exponents: Vec<u64>,
}

/// The three worked one-row examples: nondegenerate, degenerate with a
/// divisible row, and degenerate with no escape.
pub fn fixtures() -> Vec<Fixture> {
    vec![
        Fixture { name: "segment", b: vec![0, 0, 1], p: 7, exponents: vec![1, 1] },
        Fixture { name: "scaled", b: vec![0, 5, 10], p: 5, exponents: vec![1, 0] },
        Fixture { name: "degenerate", b: vec![0, 1, 5], p: 5, exponents: vec![1, 0] },
    ]
}

fn tables(s: &mut String, a: &IntMatrix, p: Prime) -> Result<(), Failure> {
    let cfg = JobConfig::new(a.clone(), true, Some(p), None);
    for theta in ThetaSubset::all(a.ncols()) {
        s.push_str(&render_conormal(&conormal_report(&cfg, &theta, 0, false)?));
    }
    Ok(())
}

/// Every stage of the pipeline for one fixture, as deterministic text.
pub fn render(f: &Fixture) -> Result<String, Failure> {
    let p = crate::config::prime(f.p)?;
    let chi = CharacterVector::new(f.p - 1, f.exponents.clone())?;
    let b = IntMatrix::from_rows(vec![f.b.clone()])?;
    let cfg = JobConfig::new(b, false, Some(p), Some(chi));
    let a = cfg.hatted()?;
    let mut s = String::new();
    writeln!(s, "== analyze").unwrap();
    s.push_str(&analyze(&cfg)?.text);
    writeln!(s, "== umbrella").unwrap();
    let u: Vec<String> = umbrella(&a)?.iter().map(ToString::to_string).collect();
    writeln!(s, "{}", u.join(", ")).unwrap();
    writeln!(s, "== conormal").unwrap();
    tables(&mut s, &a, p)?;
    writeln!(s, "== cc").unwrap();
    match cc_report(&cfg) {
        Ok(r) => {
            s.push_str(&render_cc(&r));
            if !r.reductions.is_empty() {
                writeln!(s, "== conormal after reduction").unwrap();
                tables(&mut s, &r.final_matrix, p)?;
            }
        }
        Err(Failure::Inapplicable(msg)) => writeln!(s, "inapplicable: {msg}").unwrap(),
        Err(e) => return Err(e),
    }
    Ok(s)
}

/// Regenerates every fixture and compares with `dir`; with `bless`, writes
/// the files instead.
pub fn run(dir: &Path, bless: bool) -> Result<String, Failure> {
    if !dir.is_dir() {
        return Err(Failure::Malformed(format!("fixture directory {} not found", dir.display())));
    }
    let mut report = String::new();
    let mut diffs = String::new();
    for f in fixtures() {
        let path = dir.join(format!("{}.txt", f.name));
        let fresh = render(&f)?;
        if bless {
            fs::write(&path, &fresh).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))?;
            writeln!(report, "{}: written", f.name).unwrap();
            continue;
        }
        let golden = fs::read_to_string(&path).unwrap_or_default();
        if golden == fresh {
            writeln!(report, "{}: ok", f.name).unwrap();
        } else {
            writeln!(report, "{}: MISMATCH", f.name).unwrap();
            let diff = TextDiff::from_lines(&golden, &fresh);
            let name = path.display().to_string();
            write!(diffs, "{}", diff.unified_diff().header(&name, &format!("{name} (regenerated)"))).unwrap();
        }
    }
    if diffs.is_empty() {
        Ok(report)
    } else {
        Err(Failure::Mismatch(format!("{report}{diffs}")))
    }
}
