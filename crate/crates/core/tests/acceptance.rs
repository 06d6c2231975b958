mod common;

use std::collections::HashSet;
use std::f64::consts::{LN_2, SQRT_2};
use std::time::{Duration, Instant};

use coarse::cli::report::ScenarioReport;
use coarse::cli::scenarios::{self, ScenarioOptions};
use coarse::groups::GroupDescriptor;
use coarse::lengths::{LengthFunction, LengthKind, TOL};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn verdict(criterion: u32, ok: bool, detail: &str) {
    println!("criterion {criterion} {}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {criterion}: {detail}");
}

fn scenario(id: &str, options: &ScenarioOptions) -> (ScenarioReport, Duration) {
    let start = Instant::now();
    let report = scenarios::run(id, options).unwrap_or_else(|e| panic!("{id}: {e}"));
    (report, start.elapsed())
}

fn measured(r: &ScenarioReport, id: &str) -> f64 {
    r.assertion(id).unwrap_or_else(|| panic!("missing assertion {id}")).measured
}

fn failures(r: &ScenarioReport) -> Vec<String> {
    r.assertions
        .iter()
        .filter(|a| !a.passed)
        .map(|a| format!("{} measured {} {} {} (tol {})", a.id, a.measured, a.relation, a.target, a.tolerance))
        .collect()
}

#[test]
fn criterion_1_z2_log2() {
    let (r, t) = scenario("z2-log2", &ScenarioOptions::default());
    assert_eq!(r.parameters["r_max"], 200.0);
    let a = measured(&r, "alpha");
    let ok = (a - LN_2).abs() <= 1e-9 && t < Duration::from_secs(10) && r.passed;
    verdict(1, ok, &format!("alpha_hat = {a:.12}, |alpha_hat - log 2| = {:.2e} <= 1e-9, runtime {t:.2?} < 10s", (a - LN_2).abs()));
}

#[test]
fn criterion_2_z2_unbounded() {
    let (r, t) = scenario("z2-unbounded", &ScenarioOptions::default());
    let mut worst = 0.0f64;
    for n in [2u32, 3, 5, 8] {
        let a = measured(&r, &format!("alpha[n={n}]"));
        worst = worst.max((a - f64::from(n).ln()).abs());
    }
    let ok = worst <= 1e-9 && t < Duration::from_secs(30) && r.passed;
    verdict(2, ok, &format!("max |alpha_hat - log n| over n in {{2,3,5,8}} = {worst:.2e} <= 1e-9, runtime {t:.2?} < 30s"));
}

#[test]
fn criterion_3_c4z2_alpha_bound() {
    let (r, t) = scenario("c4z2-alpha-bound", &ScenarioOptions::default());
    assert_eq!(r.parameters["r_max"], 120.0);
    let pairs: Vec<_> = r.assertions.iter().filter(|a| a.id.starts_with("alpha[")).collect();
    assert_eq!(pairs.len(), 10);
    let worst = pairs.iter().map(|a| a.measured).fold(0.0, f64::max);
    let bound = 4.0 * LN_2 + 0.05;
    let labelled = pairs.iter().all(|a| a.kind == coarse::cli::report::AssertionKind::Heuristic);
    let ok = worst <= bound && labelled && t < Duration::from_secs(300);
    verdict(3, ok, &format!("max pairwise alpha_hat = {worst:.6} <= 4 log 2 + 0.05 = {bound:.6} (heuristic), runtime {t:.2?} < 5min"));
}

#[test]
fn criterion_4_c4z2_sandwich() {
    let (r, _) = scenario("c4z2-sandwich", &ScenarioOptions::default());
    let worst = r.assertions.iter().map(|a| a.measured).fold(0.0, f64::max);
    let lambdas: Vec<f64> = r.tables["sets"].as_array().unwrap().iter().map(|s| s["lambda"].as_f64().unwrap()).collect();
    let ok = r.passed && r.assertions.len() == 15;
    verdict(
        4,
        ok,
        &format!("worst per-annulus ratio beyond radius 40 = {worst:.6} <= 1 + 0.1, lambda = {lambdas:?}; failures {:?}", failures(&r)),
    );
}

#[test]
fn criterion_5_z_spherical() {
    let (r, t) = scenario("z-spherical", &ScenarioOptions::default());
    assert_eq!(r.parameters["r_max"], 1e4);
    let alphas: Vec<f64> = r.assertions.iter().filter(|a| a.id.starts_with("alpha[")).map(|a| a.measured).collect();
    let monotone = r.assertions.iter().filter(|a| a.id.starts_with("monotone[")).all(|a| a.passed);
    assert_eq!(alphas.len(), 3);
    let worst = alphas.iter().copied().fold(0.0, f64::max);
    let ok = worst <= 1e-3 && monotone && t < Duration::from_secs(60);
    verdict(5, ok, &format!("max pairwise alpha_hat = {worst:.3e} <= 1e-3, last 10 windows non-increasing = {monotone}, runtime {t:.2?} < 60s"));
}

/// Per-group inner sampling radius, in units of the largest generator length.
fn sampling_radius(g: GroupDescriptor) -> f64 {
    match g {
        GroupDescriptor::Z => 60.0,
        GroupDescriptor::Zd(2) => 15.0,
        GroupDescriptor::Zd(_) => 6.0,
        GroupDescriptor::Dinf => 30.0,
        GroupDescriptor::CmZ2(_) => 8.0,
        GroupDescriptor::Free(2) => 4.5,
        _ => 3.5,
    }
}

fn axiom_violations(l: &LengthFunction, pairs: usize, rng: &mut ChaCha8Rng) -> usize {
    let g = l.group();
    let b = budget();
    let unit = std_gens(g).elements().iter().map(|s| l.evaluate(s, b).unwrap()).fold(0.0, f64::max);
    let inner = sampling_radius(g) * unit;
    let outer = l.enumerate_ball(2.0 * inner + 1.0, b).unwrap();
    let sample = outer.range(0.0, inner);
    let mut bad = 0;
    if outer.get(&g.identity()) != Some(0.0) {
        bad += 1;
    }
    for _ in 0..pairs {
        let (x, lx) = &sample[rng.gen_range(0..sample.len())];
        let (y, ly) = &sample[rng.gen_range(0..sample.len())];
        let xy = g.multiply(x, y).unwrap();
        let inv = g.invert(x).unwrap();
        match outer.get(&xy) {
            Some(lxy) if lxy <= lx + ly + TOL => {}
            _ => bad += 1,
        }
        if outer.get(&inv).is_none_or(|li| (li - lx).abs() > TOL) {
            bad += 1;
        }
        if *lx < 0.0 || (!l.is_pseudo() && !g.is_identity(x) && *lx <= 0.0) {
            bad += 1;
        }
    }
    bad
}

fn sandwich_violations(l: &LengthFunction, radius: f64) -> (usize, usize) {
    let LengthKind::Smoothed(s) = l.kind() else { unreachable!() };
    let b = budget();
    let big_r = s.radius();
    let ball = l.enumerate_ball(radius, b).unwrap();
    let targets: Vec<_> = ball.entries().iter().map(|(x, _)| x.clone()).collect();
    let rho = LengthFunction::word(s.generating_set().clone()).evaluate_many(&targets, b).unwrap();
    let bad = ball
        .entries()
        .iter()
        .zip(&rho)
        .filter(|((_, la), r)| !(big_r / 2.0 * *r - big_r / 2.0 <= la + TOL && *la <= big_r * *r + TOL))
        .count();
    (bad, ball.len())
}

fn word_oracle_violations(gens: &coarse::groups::GeneratingSet) -> usize {
    let b = budget();
    let word = LengthFunction::word(gens.clone());
    let smoothed = LengthFunction::smoothed(word.clone(), 1.5, b).unwrap();
    let bfs = word.enumerate_ball(8.5, b).unwrap();
    let dijkstra = smoothed.enumerate_ball(8.5, b).unwrap();
    let oracle = oracle_word_ball(gens, 8);
    let mut bad = 0;
    if bfs.len() != oracle.len() || dijkstra.len() != oracle.len() {
        bad += 1;
    }
    for (x, v) in bfs.entries() {
        let o = oracle.get(x).map(|d| f64::from(*d));
        if o != Some(*v) || dijkstra.get(x).is_none_or(|d| (d - v).abs() > TOL) {
            bad += 1;
        }
    }
    bad
}

#[test]
fn criterion_6_property_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut axioms = (0usize, 0usize);
    let mut sandwich = (0usize, 0usize);
    let mut oracle = (0usize, 0usize);
    for g in families() {
        for spec in length_catalog(g) {
            let l = parse(g, spec);
            let bad = axiom_violations(&l, 10_000, &mut rng);
            if bad > 0 {
                println!("  axioms {g} {spec}: {bad} violations");
            }
            axioms = (axioms.0 + bad, axioms.1 + 1);
            if smoothing_radius(&l).is_some() {
                let radius = match g {
                    GroupDescriptor::Free(2) => 10.0,
                    GroupDescriptor::Free(_) => 8.0,
                    _ => 30.0,
                };
                let (bad, n) = sandwich_violations(&l, radius);
                if bad > 0 {
                    println!("  sandwich {g} {spec}: {bad} of {n}");
                }
                sandwich = (sandwich.0 + bad, sandwich.1 + n);
            }
            if let LengthKind::Word(gens) = l.kind() {
                let bad = word_oracle_violations(gens);
                oracle = (oracle.0 + bad, oracle.1 + 1);
            }
        }
    }
    let seen: HashSet<_> = families().into_iter().collect();
    assert_eq!(seen.len(), 8);
    let ok = axioms.0 == 0 && sandwich.0 == 0 && oracle.0 == 0;
    verdict(
        6,
        ok,
        &format!(
            "axiom violations {} over {} lengths x 10^4 pairs, sandwich violations {} over {} smoothed-ball elements, \
             BFS/Dijkstra/oracle mismatches {} over {} word metrics to radius 8, tol 1e-9",
            axioms.0, axioms.1, sandwich.0, sandwich.1, oracle.0, oracle.1
        ),
    );
}

#[test]
fn criterion_7_pseudometric_suite() {
    let mut total = 0;
    let mut bad = Vec::new();
    for group in ["zd:2", "z", "dinf", "cmz2:4"] {
        let options = ScenarioOptions { group: Some(group.into()), ..Default::default() };
        let (r, _) = scenario("pseudometric", &options);
        total += r.assertions.len();
        bad.extend(failures(&r).into_iter().map(|f| format!("{group}: {f}")));
    }
    verdict(7, bad.is_empty(), &format!("{total} symmetry/nonnegativity/triangle checks, triangle tol 1e-9 + half-radius drift; failures {bad:?}"));
}

#[test]
fn criterion_8_chains() {
    let (r, _) = scenario("chains", &ScenarioOptions::default());
    let l1 = measured(&r, "grid:l1:41:R=1.5");
    let l2 = measured(&r, "grid:l2:41:R=1.5");
    let l2_far = measured(&r, "grid:l2:41:R=6");
    let monotone = r.assertion("grid:l2:41:monotone").unwrap().passed;
    let ok = l1 == 1.0 && (l2 - SQRT_2).abs() <= 1e-9 && l2_far < 1.1 && monotone;
    verdict(
        8,
        ok,
        &format!(
            "grid:l1:41 eta_hat(1.5) = {l1} (== 1), grid:l2:41 eta_hat(1.5) = {l2:.12} vs sqrt 2 = {SQRT_2:.12} \
             (|diff| = {:.3e}, tol 1e-9), eta_hat(6) = {l2_far:.6} < 1.1, non-increasing = {monotone}",
            (l2 - SQRT_2).abs()
        ),
    );
}

#[test]
fn criterion_9_smoothing_and_word_quotient() {
    let (s, _) = scenario("smoothing", &ScenarioOptions::default());
    let (w, _) = scenario("word-quotient", &ScenarioOptions::default());
    let mut parts = Vec::new();
    let mut ok = s.passed && w.passed;
    for g in ["z", "dinf"] {
        let mono = s.assertion(&format!("{g}:monotone")).unwrap().passed && w.assertion(&format!("{g}:monotone")).unwrap().passed;
        let sup = measured(&s, &format!("{g}:final"));
        let gap = measured(&w, &format!("{g}:final-eta-gap"));
        let alpha = measured(&w, &format!("{g}:final-alpha"));
        ok &= mono && sup <= 1.01 && gap <= 0.05 && alpha <= 0.05;
        parts.push(format!("{g}: monotone {mono}, final sup ratio {sup:.6} <= 1.01, final gap {gap:.6} and alpha_hat {alpha:.6} <= 0.05"));
    }
    verdict(9, ok, &format!("{} (heuristic)", parts.join("; ")));
}
