//! Named verification scenarios. Each returns a [`ScenarioReport`] whose
//! assertions carry the measured value, the target and the tolerance.

use std::f64::consts::{LN_2, SQRT_2};

use rayon::prelude::*;
use serde_json::{json, Value};

use super::report::{AlphaReport, AssertionKind, ScenarioReport};
use super::CliError;
use crate::asymptotics::{
    alpha_estimate, eccentricity_diameter, non_increasing, pseudometric_axiom_check, ratio_profile, Slack,
    smoothing_convergence, word_quotient_convergence, ProfileParams, SmoothingRow, WordQuotientRow,
};
use crate::geometry::{
    geodesicity_scan, homogeneity_defect, homogeneity_scan, FiniteMetricSpace, GeodesicityRow, HomogeneityReport,
    IsometryAction, SampleParams,
};
use crate::groups::{GroupDescriptor, GroupElement};
use crate::lengths::{rescale_to_unit, Budget, LengthFunction};

use AssertionKind::{Exact, Heuristic};

/// Word-metric catalog on C₄ ⋉ ℤ², all with `ρ(n·e₁) = n`.
pub const C4_CATALOG: [&str; 5] = ["t,e1", "t,e1,e2", "t,e1,e1*e2", "t,e1,t*e1*t", "t,t^2,e1,e2"];
pub const DINF_CATALOG: [&str; 3] = ["s,t", "s,s*t", "s,t,t^2"];
pub const Z_CATALOG: [&str; 3] = ["1", "1,2", "1,3"];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScenarioOptions {
    pub group: Option<String>,
    /// Generating sets separated by `;`.
    pub gens: Option<String>,
    pub r_max: Option<f64>,
    pub window: Option<usize>,
    pub margin: Option<usize>,
    pub seed: u64,
    pub budget: Budget,
}

impl ScenarioOptions {
    fn params(&self, r_max: f64) -> ProfileParams {
        ProfileParams::new(r_max).with_budget(self.budget)
    }

    fn gens_or(&self, catalog: &[&str]) -> Vec<String> {
        match &self.gens {
            Some(g) => g.split(';').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
            None => catalog.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn base_parameters(&self, r_max: f64) -> Value {
        json!({
            "r_max": r_max,
            "window": self.window,
            "budget": self.budget.max_nodes,
            "max_generators": self.budget.max_generators,
        })
    }
}

pub struct Scenario {
    pub id: &'static str,
    pub summary: &'static str,
    run: fn(&ScenarioOptions) -> Result<ScenarioReport, CliError>,
}

pub const SCENARIOS: &[Scenario] = &[
    Scenario { id: "z2-log2", summary: "alpha(l1, linf) = log 2 on Z^2", run: z2_log2 },
    Scenario { id: "z2-unbounded", summary: "alpha(l_n, l1) = log n for l_n(x,y) = n|x| + |y|", run: z2_unbounded },
    Scenario { id: "c4z2-sandwich", summary: "l1/4 <~ linf/2 <~ l <~ l1 for unit-rescaled word metrics on C4 x| Z^2", run: c4z2_sandwich },
    Scenario { id: "c4z2-alpha-bound", summary: "pairwise alpha <= 4 log 2 over word metrics on C4 x| Z^2", run: c4z2_alpha_bound },
    Scenario { id: "z-spherical", summary: "pairwise alpha -> 0 over word metrics on Z", run: z_spherical },
    Scenario { id: "dinf-spherical", summary: "pairwise alpha -> 0 over word metrics on D_inf", run: dinf_spherical },
    Scenario { id: "smoothing", summary: "sup l_{B(R)}/l -> 1 on Z and D_inf", run: smoothing },
    Scenario { id: "word-quotient", summary: "alpha(r rho_{B(r)}, l) -> 0 on Z and D_inf", run: word_quotient },
    Scenario { id: "pseudometric", summary: "symmetry, nonnegativity and triangle inequality of alpha", run: pseudometric },
    Scenario { id: "chains", summary: "R-chain geodesicity of grid and tree samples", run: chains },
    Scenario { id: "homogeneity", summary: "two-point homogeneity scans and envelopes", run: homogeneity },
];

pub fn run(id: &str, options: &ScenarioOptions) -> Result<ScenarioReport, CliError> {
    let s = SCENARIOS
        .iter()
        .find(|s| s.id == id)
        .ok_or_else(|| CliError::Usage(format!("unknown scenario {id:?}; try `coarse verify list`")))?;
    (s.run)(options)
}

fn length(g: GroupDescriptor, spec: &str, budget: Budget) -> Result<LengthFunction, CliError> {
    Ok(LengthFunction::parse(g, spec, budget)?)
}

fn word(g: GroupDescriptor, gens: &str, budget: Budget) -> Result<LengthFunction, CliError> {
    length(g, &format!("word:{gens}"), budget)
}

fn z2_log2(o: &ScenarioOptions) -> Result<ScenarioReport, CliError> {
    let r_max = o.r_max.unwrap_or(200.0);
    let g = GroupDescriptor::Zd(2);
    let mut rep = ScenarioReport::new("z2-log2", o.seed, o.base_parameters(r_max));
    let (l1, linf) = (length(g, "l1", o.budget)?, length(g, "linf", o.budget)?);
    let profile = ratio_profile(&l1, &linf, o.params(r_max))?;
    let est = alpha_estimate(&profile, o.window)?;
    let swapped = alpha_estimate(&profile.reciprocal(), o.window)?;
    rep.within("alpha", "alpha(l1, linf) = log 2", Exact, est.alpha_hat, LN_2, 1e-9);
    rep.holds("symmetry", "alpha(linf, l1) = alpha(l1, linf)", Exact, swapped.alpha_hat == est.alpha_hat);
    rep.table("alpha", AlphaReport::new(&g.to_string(), &profile, &est));
    Ok(rep)
}

fn z2_unbounded(o: &ScenarioOptions) -> Result<ScenarioReport, CliError> {
    let r_max = o.r_max.unwrap_or(200.0);
    let g = GroupDescriptor::Zd(2);
    let ns = [2u32, 3, 5, 8];
    let mut params = o.base_parameters(r_max);
    params["n"] = json!(ns);
    let mut rep = ScenarioReport::new("z2-unbounded", o.seed, params);
    let l1 = length(g, "l1", o.budget)?;
    let mut values = Vec::new();
    for n in ns {
        let ln = length(g, &format!("wnorm:{n},1"), o.budget)?;
        let profile = ratio_profile(&ln, &l1, o.params(r_max))?;
        let est = alpha_estimate(&profile, o.window)?;
        rep.within(&format!("alpha[n={n}]"), &format!("alpha(l_{n}, l1) = log {n}"), Exact, est.alpha_hat, f64::from(n).ln(), 1e-9);
        values.push(json!({"n": n, "alpha_hat": est.alpha_hat, "log_n": f64::from(n).ln(), "limsup_hat": est.limsup_hat, "liminf_hat": est.liminf_hat}));
    }
    let alphas: Vec<f64> = values.iter().map(|v| v["alpha_hat"].as_f64().unwrap_or(f64::NAN)).collect();
    rep.holds("increasing", "alpha(l_n, l1) increases with n", Exact, alphas.windows(2).all(|w| w[1] > w[0]));
    rep.table("alpha_by_n", values);
    Ok(rep)
}

fn c4_family(o: &ScenarioOptions) -> Result<(Vec<String>, Vec<LengthFunction>), CliError> {
    let g = GroupDescriptor::CmZ2(4);
    let sets = o.gens_or(&C4_CATALOG);
    let family = sets.iter().map(|s| word(g, s, o.budget)).collect::<Result<Vec<_>, _>>()?;
    Ok((sets, family))
}

fn c4z2_sandwich(o: &ScenarioOptions) -> Result<ScenarioReport, CliError> {
    let r_max = o.r_max.unwrap_or(100.0);
    let (inner, slack, horizon) = (40.0, 0.1, 50u32);
    let (sets, family) = c4_family(o)?;
    let mut params = o.base_parameters(r_max);
    params["generating_sets"] = json!(sets);
    params["inner_radius"] = json!(inner);
    params["slack"] = json!(slack);
    params["horizon"] = json!(horizon);
    let mut rep = ScenarioReport::new("c4z2-sandwich", o.seed, params);
    let e1 = GroupElement::CmZ2 { rot: 0, shift: [1, 0] };
    let results = family
        .par_iter()
        .map(|w| {
            let unit = rescale_to_unit(w, &e1, horizon, o.budget)?;
            let ball = unit.length.enumerate_ball(r_max, o.budget)?;
            let mut annuli = Vec::new();
            let mut worst = [0.0f64; 3];
            let mut k = inner;
            while k + 1.0 <= r_max + 1e-9 {
                let mut m = [0.0f64; 3];
                for (x, v) in ball.range(k, k + 1.0) {
                    let GroupElement::CmZ2 { shift, .. } = x else { unreachable!() };
                    let n1 = (shift[0].abs() + shift[1].abs()) as f64;
                    let ninf = shift[0].abs().max(shift[1].abs()) as f64;
                    m[0] = m[0].max(n1 / (2.0 * ninf));
                    m[1] = m[1].max((ninf / 2.0) / v);
                    m[2] = m[2].max(v / n1);
                }
                for i in 0..3 {
                    worst[i] = worst[i].max(m[i]);
                }
                annuli.push(json!({"lo": k, "hi": k + 1.0, "quarter_l1_over_half_linf": m[0], "half_linf_over_l": m[1], "l_over_l1": m[2]}));
                k += 1.0;
            }
            Ok((unit.factor, worst, annuli))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut tables = Vec::new();
    for (set, (lambda, worst, annuli)) in sets.iter().zip(results) {
        let claims = ["l1/4 <~ linf/2", "linf/2 <~ l", "l <~ l1"];
        let names = ["quarter-l1<=half-linf", "half-linf<=l", "l<=l1"];
        for i in 0..3 {
            rep.at_most(&format!("{set}:{}", names[i]), claims[i], Heuristic, worst[i], 1.0, slack);
        }
        tables.push(json!({"gens": set, "lambda": lambda, "max_ratios": worst, "annuli": annuli}));
    }
    rep.table("sets", tables);
    Ok(rep)
}

fn c4z2_alpha_bound(o: &ScenarioOptions) -> Result<ScenarioReport, CliError> {
    let r_max = o.r_max.unwrap_or(120.0);
    let tol = 0.05;
    let (sets, family) = c4_family(o)?;
    let mut params = o.base_parameters(r_max);
    params["generating_sets"] = json!(sets);
    params["tolerance"] = json!(tol);
    let mut rep = ScenarioReport::new("c4z2-alpha-bound", o.seed, params);
    let d = eccentricity_diameter(&family, o.params(r_max), o.window)?;
    for ((i, j), est) in &d.pairs {
        rep.at_most(
            &format!("alpha[{}|{}]", sets[*i], sets[*j]),
            "alpha(l, l') <= 4 log 2",
            Heuristic,
            est.alpha_hat,
            4.0 * LN_2,
            tol,
        );
    }
    let find = |s: &str| sets.iter().position(|x| x == s);
    if let (Some(a), Some(b)) = (find("t,e1"), find("t,e1,e1*e2")) {
        rep.at_least(
            "lower-bound[t,e1|t,e1,e1*e2]",
            "alpha between l1-like and linf-like word metrics >= log 2",
            Heuristic,
            d.matrix[a][b],
            LN_2,
            tol,
        );
    }
    rep.table(
        "diameter",
        json!({
            "labels": sets,
            "matrix": d.matrix,
            "empirical_lower_bound": d.diameter,
            "upper_bound": 4.0 * LN_2,
        }),
    );
    Ok(rep)
}

fn spherical(
    o: &ScenarioOptions,
    id: &str,
    g: GroupDescriptor,
    catalog: &[&str],
    default_r_max: f64,
    threshold: f64,
) -> Result<ScenarioReport, CliError> {
    let r_max = o.r_max.unwrap_or(default_r_max);
    let sets = o.gens_or(catalog);
    let steps = 20usize;
    let mut params = o.base_parameters(r_max);
    params["group"] = json!(g.to_string());
    params["generating_sets"] = json!(sets);
    params["threshold"] = json!(threshold);
    params["table_steps"] = json!(steps);
    let mut rep = ScenarioReport::new(id, o.seed, params);
    let family = sets.iter().map(|s| word(g, s, o.budget)).collect::<Result<Vec<_>, _>>()?;
    let n = family.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let results = pairs
        .par_iter()
        .map(|&(i, j)| {
            let profile = ratio_profile(&family[i], &family[j], o.params(r_max))?;
            let est = alpha_estimate(&profile, o.window)?;
            let table = (1..=steps)
                .map(|s| {
                    let r = r_max * s as f64 / steps as f64;
                    Ok((r, alpha_estimate(&profile.truncated(r), None)?.alpha_hat))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            Ok((est, table))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut tables = Vec::new();
    for (&(i, j), (est, table)) in pairs.iter().zip(results) {
        let name = format!("{}|{}", sets[i], sets[j]);
        rep.at_most(&format!("alpha[{name}]"), "alpha between word metrics vanishes", Heuristic, est.alpha_hat, threshold, 0.0);
        let alphas: Vec<f64> = table.iter().map(|t| t.1).collect();
        let tail = &alphas[alphas.len().saturating_sub(10)..];
        rep.holds(&format!("monotone[{name}]"), "convergence table non-increasing over its last 10 entries", Heuristic, non_increasing(tail, 1e-12));
        tables.push(json!({
            "pair": [sets[i], sets[j]],
            "alpha_hat": est.alpha_hat,
            "limsup_hat": est.limsup_hat,
            "liminf_hat": est.liminf_hat,
            "convergence": table.iter().map(|(r, a)| json!({"r_max": r, "alpha_hat": a})).collect::<Vec<_>>(),
        }));
    }
    rep.table("pairs", tables);
    Ok(rep)
}

fn z_spherical(o: &ScenarioOptions) -> Result<ScenarioReport, CliError> {
    spherical(o, "z-spherical", GroupDescriptor::Z, &Z_CATALOG, 1e4, 1e-3)
}

fn dinf_spherical(o: &ScenarioOptions) -> Result<ScenarioReport, CliError> {
    spherical(o, "dinf-spherical", GroupDescriptor::Dinf, &DINF_CATALOG, 1e3, 1e-2)
}

pub fn smoothing_row_json(r: &SmoothingRow) -> Value {
    json!({
        "R": r.radius,
        "edges": r.edges,
        "sup_ratio": r.sup_ratio,
        "witness": r.witness.as_ref().map(ToString::to_string),
        "count": r.count,
    })
}

pub fn word_row_json(r: &WordQuotientRow) -> Value {
    json!({
        "r": r.r,
        "generators": r.generators,
        "alpha_hat": r.alpha_hat,
        "eta_gap": r.eta_gap,
        "limsup_hat": r.limsup_hat,
        "liminf_hat": r.liminf_hat,
    })
}

/// Smoothing schedules per group: (label, group, length, radii, ball radius).
pub const SMOOTHING_SCHEDULES: [(&str, GroupDescriptor, &str, [f64; 5], f64); 2] = [
    ("z", GroupDescriptor::Z, "l1", [1.5, 2.5, 4.0, 8.0, 16.0], 200.0),
    ("dinf", GroupDescriptor::Dinf, "word:std", [2.0, 3.0, 4.0, 8.0, 16.0], 200.0),
];

fn smoothing(o: &ScenarioOptions) -> Result<ScenarioReport, CliError> {
    let target = 1.01;
    let schedules: Vec<Value> = SMOOTHING_SCHEDULES
        .iter()
        .map(|(name, g, l, radii, ball)| json!({"name": name, "group": g.to_string(), "length": l, "R": radii, "ball_radius": ball}))
        .collect();
    let informational = (GroupDescriptor::Zd(2), "l2", [1.5, 2.5, 3.5, 5.5, 8.5], 40.0);
    let params = json!({
        "schedules": schedules,
        "informational": {"group": "zd:2", "length": informational.1, "R": informational.2, "ball_radius": informational.3},
        "final_bound": target,
        "budget": o.budget.max_nodes,
    });
    let mut rep = ScenarioReport::new("smoothing", o.seed, params);
    for (name, g, spec, radii, ball) in SMOOTHING_SCHEDULES {
        let l = length(g, spec, o.budget)?;
        let rows = smoothing_convergence(&l, &radii, ball, o.budget)?;
        let sups: Vec<f64> = rows.iter().map(|r| r.sup_ratio).collect();
        rep.holds(&format!("{name}:monotone"), "sup ratio non-increasing in R", Heuristic, non_increasing(&sups, 1e-9));
        rep.at_most(&format!("{name}:final"), "l <= l_{B(R)} < eta l with eta -> 1", Heuristic, *sups.last().unwrap_or(&f64::NAN), target, 0.0);
        rep.at_least(&format!("{name}:lower"), "l <= l_{B(R)}", Exact, sups.iter().copied().fold(f64::INFINITY, f64::min), 1.0, 1e-9);
        rep.table(name, rows.iter().map(smoothing_row_json).collect::<Vec<_>>());
    }
    let (g, spec, radii, ball) = informational;
    let rows = smoothing_convergence(&length(g, spec, o.budget)?, &radii, ball, o.budget)?;
    rep.table("zd2-l2-informational", rows.iter().map(smoothing_row_json).collect::<Vec<_>>());
    Ok(rep)
}

/// Word-quotient schedules: (label, group, length, radii).
pub const WORD_QUOTIENT_SCHEDULES: [(&str, GroupDescriptor, &str, &[f64]); 2] = [
    ("z", GroupDescriptor::Z, "l1", &[2.0, 3.0, 5.0, 9.0, 17.0, 33.0, 65.0]),
    ("dinf", GroupDescriptor::Dinf, "word:std", &[3.0, 5.0, 9.0, 17.0, 33.0, 65.0]),
];

fn word_quotient(o: &ScenarioOptions) -> Result<ScenarioReport, CliError> {
    let r_max = o.r_max.unwrap_or(4000.0);
    let target = 0.05;
    let mut params = o.base_parameters(r_max);
    params["schedules"] = WORD_QUOTIENT_SCHEDULES
        .iter()
        .map(|(name, g, l, radii)| json!({"name": name, "group": g.to_string(), "length": l, "r": radii}))
        .collect();
    params["final_bound"] = json!(target);
    let mut rep = ScenarioReport::new("word-quotient", o.seed, params);
    for (name, g, spec, radii) in WORD_QUOTIENT_SCHEDULES {
        let l = length(g, spec, o.budget)?;
        let rows = word_quotient_convergence(&l, radii, o.params(r_max), o.window)?;
        let gaps: Vec<f64> = rows.iter().map(|r| r.eta_gap).collect();
        let last = rows.last().expect("non-empty schedule");
        rep.holds(&format!("{name}:monotone"), "log limsup r rho / l non-increasing in r", Heuristic, non_increasing(&gaps, 1e-9));
        rep.at_most(&format!("{name}:final-eta-gap"), "l <= r rho_{B(r)} <~ eta l with eta -> 1", Heuristic, last.eta_gap, target, 0.0);
        rep.at_most(&format!("{name}:final-alpha"), "alpha(rho_{B(r)}, l) -> 0", Heuristic, last.alpha_hat, target, 0.0);
        let worst = rows.iter().map(|r| r.alpha_hat - r.eta_gap).fold(f64::NEG_INFINITY, f64::max);
        rep.at_most(&format!("{name}:alpha<=eta-gap"), "alpha_hat <= log limsup since l <= r rho", Exact, worst, 0.0, 1e-9);
        rep.table(name, rows.iter().map(word_row_json).collect::<Vec<_>>());
    }
    Ok(rep)
}

/// Triple catalogs: (group, r_max, triples).
fn triple_catalog(group: GroupDescriptor) -> Option<(f64, Vec<[&'static str; 3]>)> {
    match group {
        GroupDescriptor::Zd(2) => Some((
            60.0,
            vec![
                ["l1", "l2", "linf"],
                ["wnorm:3,1", "l1", "linf"],
                ["l1", "l1", "l1"],
                ["wnorm:3,1", "wnorm:1,3", "l2"],
                ["word:std", "smooth:l2:1.5", "linf"],
            ],
        )),
        GroupDescriptor::Z => Some((2000.0, vec![["word:1", "word:1,2", "word:1,3"], ["l1", "scale:l1:3", "word:2,3"]])),
        GroupDescriptor::Dinf => Some((500.0, vec![["word:s,t", "word:s,s*t", "word:s,t,t^2"]])),
        GroupDescriptor::CmZ2(4) => Some((
            40.0,
            vec![["word:t,e1", "word:t,e1,e1*e2", "word:t,e1,e2"], ["l1", "linf", "word:t,e1"], ["l1", "l2", "linf"]],
        )),
        _ => None,
    }
}

fn pseudometric(o: &ScenarioOptions) -> Result<ScenarioReport, CliError> {
    let group: GroupDescriptor = o.group.as_deref().unwrap_or("zd:2").parse()?;
    let (default_r_max, triples) =
        triple_catalog(group).ok_or_else(|| CliError::Usage(format!("no triple catalog for {group}")))?;
    let r_max = o.r_max.unwrap_or(default_r_max);
    let mut params = o.base_parameters(r_max);
    params["group"] = json!(group.to_string());
    params["triples"] = json!(triples);
    params["slack"] = json!("sum of |alpha_hat(r_max) - alpha_hat(r_max/2)| over the three pairs");
    let mut rep = ScenarioReport::new("pseudometric", o.seed, params);
    let mut tables = Vec::new();
    for t in &triples {
        let ls = t.iter().map(|s| length(group, s, o.budget)).collect::<Result<Vec<_>, _>>()?;
        let r = pseudometric_axiom_check([&ls[0], &ls[1], &ls[2]], o.params(r_max), o.window, Slack::HalfRadiusDrift)?;
        let name = t.join("|");
        rep.holds(&format!("symmetric[{name}]"), "alpha(a,b) = alpha(b,a)", Exact, r.symmetric);
        rep.holds(&format!("nonnegative[{name}]"), "alpha >= 0", Exact, r.nonnegative);
        rep.at_least(&format!("triangle[{name}]"), "alpha(a,c) <= alpha(a,b) + alpha(b,c)", Heuristic, r.min_margin(), 0.0, 1e-9 + r.slack);
        tables.push(json!({"triple": t, "alpha": r.alpha, "triangle_margins": r.triangle_margins, "drift": r.drift, "slack": r.slack}));
    }
    rep.table("triples", tables);
    Ok(rep)
}

pub fn geodesicity_row_json(space: &FiniteMetricSpace, r: &GeodesicityRow) -> Value {
    json!({
        "R": r.step_bound,
        "eta_hat": r.eta_hat,
        "worst_from": r.worst.map(|w| space.label(w.0).to_string()),
        "worst_to": r.worst.map(|w| space.label(w.1).to_string()),
        "pairs": r.pairs,
        "disconnected": r.disconnected,
    })
}

/// Chain schedules: (space, step bounds).
pub const CHAIN_SCHEDULES: [(&str, &[f64]); 3] = [
    ("grid:l1:41", &[1.5]),
    ("grid:l2:41", &[1.5, 2.5, 4.0, 6.0]),
    ("tree:3:6", &[1.5]),
];

pub const CHAIN_SOURCES: usize = 64;

fn chains(o: &ScenarioOptions) -> Result<ScenarioReport, CliError> {
    let sample = SampleParams { count: CHAIN_SOURCES, seed: o.seed };
    let params = json!({
        "schedules": CHAIN_SCHEDULES.iter().map(|(s, r)| json!({"space": s, "R": r})).collect::<Vec<_>>(),
        "informational": {"space": "grid:l2:41", "R": [SQRT_2]},
        "sources": CHAIN_SOURCES,
        "seed": o.seed,
    });
    let mut rep = ScenarioReport::new("chains", o.seed, params);
    let mut scans = Vec::new();
    for (spec, radii) in CHAIN_SCHEDULES {
        let space = FiniteMetricSpace::from_spec(spec)?;
        let rows = geodesicity_scan(&space, radii, sample)?;
        let etas: Vec<f64> = rows.iter().map(|r| r.eta_hat).collect();
        match spec {
            "grid:l2:41" => {
                rep.within("grid:l2:41:R=1.5", "eta_hat = sqrt 2 at R = 1.5", Exact, etas[0], SQRT_2, 1e-9);
                rep.at_most("grid:l2:41:R=6", "eta_hat < 1.1 at R = 6", Heuristic, etas[3], 1.1, 0.0);
                rep.holds("grid:l2:41:monotone", "eta_hat non-increasing in R", Exact, non_increasing(&etas, 1e-12));
            }
            _ => rep.within(&format!("{spec}:R=1.5"), "eta_hat = 1 at R = 1.5", Exact, etas[0], 1.0, 0.0),
        }
        rep.at_least(&format!("{spec}:eta>=1"), "chain infimum >= distance", Exact, etas.iter().copied().fold(f64::INFINITY, f64::min), 1.0, 0.0);
        scans.push(json!({"space": spec, "rows": rows.iter().map(|r| geodesicity_row_json(&space, r)).collect::<Vec<_>>()}));
    }
    let grid = FiniteMetricSpace::from_spec("grid:l2:41")?;
    let unit = geodesicity_scan(&grid, &[SQRT_2], sample)?;
    scans.push(json!({
        "space": "grid:l2:41",
        "informational": true,
        "rows": unit.iter().map(|r| geodesicity_row_json(&grid, r)).collect::<Vec<_>>(),
    }));
    rep.table("scans", scans);
    Ok(rep)
}

pub fn homogeneity_json(space: &FiniteMetricSpace, r: &HomogeneityReport, scatter: bool) -> Value {
    let mut v = json!({
        "envelope": r.envelope.iter().map(|(g, s)| json!({"gap": g, "sigma": s})).collect::<Vec<_>>(),
        "skipped_maps": r.skipped_maps,
        "margin": r.margin,
        "seed": r.seed,
        "quadruples": r.scatter.len(),
    });
    if scatter {
        v["scatter"] = r
            .scatter
            .iter()
            .map(|p| {
                json!({
                    "x": space.label(p.x), "y": space.label(p.y),
                    "z": space.label(p.z), "u": space.label(p.u),
                    "gap": p.gap, "hausdorff": p.hausdorff,
                })
            })
            .collect();
    }
    v
}

/// Homogeneity scans: (space, action, quadruples, default margin).
pub const HOMOGENEITY_SCANS: [(&str, &str, usize, usize); 3] = [
    ("grid:l2:41", "translations+rot4", 200, 5),
    ("cycle:24", "dihedral", 400, 0),
    ("line:61", "translations", 400, 10),
];

fn homogeneity(o: &ScenarioOptions) -> Result<ScenarioReport, CliError> {
    let params = json!({
        "scans": HOMOGENEITY_SCANS.iter().map(|(s, a, q, m)| json!({"space": s, "action": a, "quadruples": q, "margin": o.margin.unwrap_or(*m)})).collect::<Vec<_>>(),
        "seed": o.seed,
    });
    let mut rep = ScenarioReport::new("homogeneity", o.seed, params);
    let grid = FiniteMetricSpace::from_spec("grid:l2:41")?;
    let act = IsometryAction::from_spec(&grid, "translations+rot4")?;
    let p = |l: &str| grid.find(l);
    let h = homogeneity_defect(&grid, &act, (p("(0,0)")?, p("(0,3)")?), (p("(5,5)")?, p("(5,8)")?))?;
    rep.within("grid:example", "{(5,5),(5,8)} translates onto {(0,0),(0,3)}", Exact, h, 0.0, 0.0);
    let mut scans = Vec::new();
    for (spec, action, quads, margin) in HOMOGENEITY_SCANS {
        let space = FiniteMetricSpace::from_spec(spec)?;
        let act = IsometryAction::from_spec(&space, action)?;
        let r = homogeneity_scan(&space, &act, quads, o.margin.unwrap_or(margin), o.seed)?;
        let sig: Vec<f64> = r.envelope.iter().map(|e| e.1).collect();
        rep.holds(&format!("{spec}:nonnegative"), "envelope >= 0", Exact, sig.iter().all(|s| *s >= 0.0));
        rep.holds(&format!("{spec}:monotone"), "envelope non-decreasing in the gap", Exact, sig.windows(2).all(|w| w[1] >= w[0]));
        if !spec.starts_with("grid") {
            let zero = r.at_zero_gap();
            rep.holds(&format!("{spec}:zero-gap"), "envelope vanishes at gap 0 on a pair-transitive sample", Exact, zero == Some(0.0));
        }
        scans.push(json!({"space": spec, "action": action, "scan": homogeneity_json(&space, &r, false)}));
    }
    rep.table("scans", scans);
    Ok(rep)
}
