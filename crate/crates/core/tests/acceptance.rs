//! One PASS/FAIL line per acceptance criterion, with the measured runtime
//! against its budget. Exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use gkzcc::conormal::{all_generators, box_generators, dim_report, membership_sample, membership_sample_infinity};
use gkzcc::cycle::{cc_gkz, specialize, umbrella, Cycle, Multiplicity};
use gkzcc::fan::{default_complete_fan, is_generable, is_sigma_good, resolve, CompleteFanCheck};
use gkzcc::matrix::{hat, is_p_nondegenerate, square_reduce};
use gkzcc::{CharacterVector, Error, IntMatrix, Prime, ThetaSubset};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn row(b: &[i64]) -> IntMatrix {
    IntMatrix::from_rows(vec![b.to_vec()]).unwrap()
}

fn th(v: &[usize]) -> ThetaSubset {
    ThetaSubset::new(v.iter().copied(), 3).unwrap()
}

fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

fn random_matrix(rng: &mut ChaCha8Rng, d: usize, n: usize, bound: i64) -> IntMatrix {
    IntMatrix::from_rows((0..d).map(|_| (0..n).map(|_| rng.gen_range(-bound..=bound)).collect::<Vec<_>>())).unwrap()
}

/// The expected index set for the one-row fixtures: every subset of `1..=3`.
fn tabulated() -> Vec<ThetaSubset> {
    ThetaSubset::all(3)
}

fn symbolic_components(c: &Cycle) -> bool {
    c.components().iter().all(|x| x.mult == Multiplicity::Symbolic)
}

type Check = Result<String, String>;

type Criterion = (&'static str, fn() -> Check, u64);

fn ensure(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn names(v: &[ThetaSubset]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn criterion_1() -> Check {
    let a = hat(&row(&[0, 0, 1]));
    let u = umbrella(&a).map_err(|e| e.to_string())?;
    let chi = CharacterVector::new(6, vec![1, 1]).unwrap();
    let r = cc_gkz(&row(&[0, 0, 1]), prime(7), &chi, None).map_err(|e| e.to_string())?;
    let mut problems = Vec::new();
    if u != tabulated() {
        problems.push(format!("umbrella has {} subsets [{}], expected 8", u.len(), names(&u)));
    }
    if r.cycle.len() != 8 || !symbolic_components(&r.cycle) {
        problems.push(format!("cycle has {} components", r.cycle.len()));
    }
    if problems.is_empty() {
        Ok("8 subsets, 8 symbolic components".into())
    } else {
        Err(problems.join("; "))
    }
}

fn criterion_2() -> Check {
    let p = prime(5);
    let a = hat(&row(&[0, 5, 10]));
    let mut problems = Vec::new();
    let audit = is_p_nondegenerate(&a, p);
    if audit.nondegenerate || !audit.failing.contains(&th(&[1, 2])) {
        problems.push("audit does not flag {1,2}".to_string());
    }
    let d = dim_report(&a, &th(&[1, 2]), 0, Some(p)).map_err(|e| e.to_string())?;
    if d.dim_exact != Some(4) {
        problems.push(format!("dim_exact {:?}", d.dim_exact));
    }
    let chi = CharacterVector::new(4, vec![1, 0]).unwrap();
    let r = cc_gkz(&row(&[0, 5, 10]), p, &chi, None).map_err(|e| e.to_string())?;
    if r.reduced_b() != Some(row(&[0, 1, 2])) {
        problems.push(format!("reduced to {:?}", r.reduced_b()));
    }
    if r.cycle.len() != 8 {
        problems.push(format!("cycle has {} components [{}], expected 8", r.cycle.len(), names(&r.cycle.thetas())));
    }
    let g = box_generators(&hat(&row(&[0, 1, 2])), &th(&[1, 2, 3]), 0).map_err(|e| e.to_string())?;
    if g.render(true) != vec!["ξ1·ξ3 − ξ2²".to_string()] {
        problems.push(format!("box generators {:?}", g.render(true)));
    }
    if problems.is_empty() {
        Ok("audit, dim 4, reduction, 8 components, box generator".into())
    } else {
        Err(problems.join("; "))
    }
}

fn criterion_3() -> Check {
    let chi = CharacterVector::new(4, vec![1, 0]).unwrap();
    match cc_gkz(&row(&[0, 1, 5]), prime(5), &chi, None) {
        Err(Error::Nondegeneracy(f)) => {
            ensure(f.failing == vec![th(&[1, 3])], format!("failing {}", names(&f.failing)))?;
            let hit = f.excess.iter().any(|e| e.theta == th(&[1, 3]) && e.chart == 0 && e.dim == 4 && e.bound == 3);
            ensure(hit, "no excess 4 > 3 at chart 0")?;
            Ok("fails on {1,3} with dim 4 > 3".into())
        }
        other => Err(format!("unexpected {other:?}")),
    }
}

fn criterion_4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut blowups, mut max_cones) = (0, 0);
    for case in 0..200 {
        let d = rng.gen_range(2..=3);
        let n = rng.gen_range(2..=4);
        let b = random_matrix(&mut rng, d, n, 5);
        let start = default_complete_fan(d);
        let res = resolve(&b, &start).map_err(|e| format!("case {case} {b}: {e}"))?;
        let mut check = CompleteFanCheck::new(&start).ok_or("orthant fan rejected")?;
        ensure(res.log.len() == res.records.len(), format!("case {case}: log/record length"))?;
        for (rec, log) in res.records.iter().zip(&res.log) {
            let edges = check.edge_count();
            ensure(check.apply(&rec.replaced, &rec.created), format!("case {case} {b}: not a complete fan"))?;
            ensure(check.edge_count() == edges + 1, format!("case {case}: edge count"))?;
            for c in &rec.created {
                let det = c.matrix().det().map_err(|e| e.to_string())?;
                ensure(det == BigInt::one() || det == -BigInt::one(), format!("case {case}: singular {c}"))?;
            }
            let before = (&log.mu_before, log.nu_before);
            let after = (&log.mu_after, log.nu_after);
            ensure(after < before, format!("case {case} pair {:?}: no descent", log.pair))?;
        }
        ensure(check.cone_count() == res.fan.len(), format!("case {case}: cone count"))?;
        if res.fan.len() <= 64 {
            ensure(is_generable(res.fan.cones()), format!("case {case}: pairwise check"))?;
        }
        for c in res.fan.cones() {
            ensure(is_sigma_good(&b, c).map_err(|e| e.to_string())?.is_some(), format!("case {case}: bad {c}"))?;
        }
        blowups += res.records.len();
        max_cones = max_cones.max(res.fan.len());
    }
    Ok(format!("200 matrices, {blowups} blow-ups, up to {max_cones} cones"))
}

/// Determinant by cofactor expansion.
fn cofactor_det(m: &[Vec<BigInt>]) -> BigInt {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<BigInt>> =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect()).collect();
            let term = &m[0][j] * cofactor_det(&minor);
            if j % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).filter(|m| m.count_ones() as usize == k).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect()
}

/// Ranks over `ℚ` and `𝔽_p` of the given columns, from the largest minor
/// that is nonzero (resp. prime to `p`).
fn minor_ranks(a: &IntMatrix, cols: &[usize], p: u64) -> (usize, usize) {
    let (mut r, mut rp) = (0, 0);
    for k in 1..=cols.len().min(a.nrows()) {
        for rows in subsets(a.nrows(), k) {
            for cs in subsets(cols.len(), k) {
                let m: Vec<Vec<BigInt>> =
                    rows.iter().map(|&i| cs.iter().map(|&j| a.get(i, cols[j]).clone()).collect()).collect();
                let det = cofactor_det(&m);
                if !det.is_zero() {
                    r = r.max(k);
                }
                if !(det % BigInt::from(p)).is_zero() {
                    rp = rp.max(k);
                }
            }
        }
    }
    (r, rp)
}

fn criterion_5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut degenerate = 0;
    for case in 0..500 {
        let d = rng.gen_range(1..=2);
        let n = rng.gen_range(1..=4);
        let a = random_matrix(&mut rng, d, n, 3);
        for p in [2, 3, 5] {
            let audit = is_p_nondegenerate(&a, prime(p));
            let oracle: Vec<ThetaSubset> = ThetaSubset::all_nonempty(n)
                .into_iter()
                .filter(|t| {
                    let (r, rp) = minor_ranks(&a, &t.zero_based(), p);
                    r != rp
                })
                .collect();
            ensure(audit.failing == oracle, format!("case {case} {a} p={p}"))?;
            ensure(audit.nondegenerate == oracle.is_empty(), format!("case {case}: verdict"))?;
            degenerate += usize::from(!oracle.is_empty());
        }
    }
    Ok(format!("1500 audits agree, {degenerate} degenerate"))
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut collapsed = 0;
    for case in 0..200 {
        let d = rng.gen_range(1..=2);
        let n = rng.gen_range(2..=4);
        let p = [2, 3, 5][rng.gen_range(0..3)];
        let a = hat(&random_matrix(&mut rng, d, n, 6));
        let mask = rng.gen_range(1u32..1 << n);
        let theta = ThetaSubset::new((1..=n).filter(|j| mask >> (j - 1) & 1 == 1), n).unwrap();
        let k = rng.gen_range(0..=n);
        let rep = dim_report(&a, &theta, k, Some(prime(p))).map_err(|e| e.to_string())?;
        let (r, rp) = minor_ranks(&a, &theta.zero_based(), p);
        ensure(rep.r == r && rep.r_p == Some(rp), format!("case {case}: ranks"))?;
        let dim = rep.dim_exact.ok_or("no exact dimension")?;
        ensure(n <= dim && dim <= n + r - rp, format!("case {case} {a} {theta} k={k}: dim {dim}"))?;
        if r == rp {
            ensure(dim == n, format!("case {case}: no collapse"))?;
            collapsed += 1;
        }
        let zero = dim_report(&a, &theta, k, None).map_err(|e| e.to_string())?;
        ensure(zero.dim_exact == Some(n), format!("case {case}: char 0"))?;
    }
    Ok(format!("200 reports, {collapsed} with r = r_p"))
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let fixtures = [row(&[0, 0, 1]), row(&[0, 5, 10]), row(&[0, 1, 2]), row(&[0, 1, 5])];
    let mut evaluations = 0usize;
    for b in &fixtures {
        let a = hat(b);
        let n = a.ncols();
        for theta in ThetaSubset::all(n) {
            for k in 0..=n {
                for infinity in [false, true] {
                    if infinity && k == 0 {
                        continue;
                    }
                    let gens = all_generators(&a, &theta, k, infinity).map_err(|e| e.to_string())?;
                    let points = if infinity {
                        membership_sample_infinity(&a, &theta, k, 100, &mut rng)
                    } else {
                        membership_sample(&a, &theta, k, 100, &mut rng)
                    }
                    .map_err(|e| e.to_string())?;
                    for pt in &points {
                        for g in gens.iter().flat_map(|s| &s.generators) {
                            ensure(pt.eval(g).is_zero(), format!("{a} {theta} k={k} inf={infinity}: {g}"))?;
                            evaluations += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{evaluations} exact evaluations vanish"))
}

fn random_unimodular(rng: &mut ChaCha8Rng, m: usize) -> IntMatrix {
    let mut p = IntMatrix::identity(m);
    for _ in 0..6 {
        let (i, j) = (rng.gen_range(0..m), rng.gen_range(0..m));
        if i == j {
            continue;
        }
        let c = BigInt::from(rng.gen_range(-3i64..=3));
        for col in 0..m {
            let v = p.get(i, col) + &c * p.get(j, col);
            p.set(i, col, v);
        }
        if rng.gen_bool(0.3) {
            for col in 0..m {
                let v = -p.get(i, col);
                p.set(i, col, v);
            }
        }
    }
    p
}

fn criterion_8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let fixtures = [row(&[0, 0, 1]), row(&[0, 5, 10]), row(&[0, 1, 2]), row(&[0, 1, 5])];
    for b in &fixtures {
        let a = hat(b);
        let u = umbrella(&a).map_err(|e| e.to_string())?;
        for _ in 0..50 {
            let p = random_unimodular(&mut rng, a.nrows());
            let pa = p.mul(&a).unwrap();
            ensure(umbrella(&pa).map_err(|e| e.to_string())? == u, format!("{a} under {p}"))?;
        }
    }
    let mut replays = 0;
    for _ in 0..100 {
        let d = rng.gen_range(1..=3);
        let a = hat(&random_matrix(&mut rng, d, d + 1, 6));
        let p = prime([2, 3, 5][rng.gen_range(0..3)]);
        if a.det().unwrap().is_zero() {
            continue;
        }
        let (out, t) = square_reduce(&a, p).map_err(|e| e.to_string())?;
        let replayed = t.replay().map_err(|e| e.to_string())?;
        let bits = |m: &IntMatrix| serde_json::to_string(m).unwrap();
        ensure(bits(&replayed) == bits(&out) && bits(&t.final_matrix) == bits(&out), format!("replay of {a}"))?;
        replays += 1;
    }
    let chi = CharacterVector::new(6, vec![1, 1]).unwrap();
    let r = cc_gkz(&row(&[0, 0, 1]), prime(7), &chi, None).map_err(|e| e.to_string())?;
    let generic = Cycle::new(r.cycle.sign_exp, r.cycle.components().iter().map(|c| gkzcc::cycle::CycleComponent {
        field: gkzcc::cycle::FieldTag::Char0,
        ..c.clone()
    }).collect());
    let before = serde_json::to_string(&generic).unwrap();
    let after = serde_json::to_string(&specialize(&generic).map_err(|e| e.to_string())?).unwrap();
    ensure(after.replace("\"charp\"", "\"char0\"") == before, "specialize changed more than the tag")?;
    ensure(after == serde_json::to_string(&r.cycle).unwrap(), "specialized cycle differs from cc_gkz output")?;
    Ok(format!("200 unimodular images, {replays} replays, relabeling exact"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 segment fixture", criterion_1, 1),
        ("2 scaled fixture", criterion_2, 1),
        ("3 degenerate fixture", criterion_3, 1),
        ("4 resolution suite", criterion_4, 60),
        ("5 nondegeneracy oracle", criterion_5, 30),
        ("6 dimension sandwich", criterion_6, 10),
        ("7 membership oracle", criterion_7, 30),
        ("8 invariance", criterion_8, 10),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(budget);
        let (verdict, detail) = match (&result, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over budget")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        failed += usize::from(verdict == "FAIL");
        println!("criterion {name}: {verdict} ({:.2?} / {budget}s) {detail}", elapsed);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
