//! Finite-radius estimates of the α pseudometric
//! `α(ℓ₁, ℓ₂) = log limsup ℓ₁/ℓ₂ + log limsup ℓ₂/ℓ₁`, asymptotic domination
//! tests and the convergence tables for smoothed and word-quotient lengths.
//!
//! A [`RatioProfile`] records exact per-annulus extremes of `ℓ₁/ℓ₂` over
//! annuli of `ℓ₂`. Limits are estimated by the extremes over a tail window
//! of annuli; no extrapolation is attempted, and every verdict derived from
//! these estimates is heuristic.

use rayon::prelude::*;
use thiserror::Error;

use crate::groups::{symmetric_closure, GroupElement};
use crate::lengths::{BallEnumeration, Budget, LengthError, LengthFunction, TOL};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum AsymptoticsError {
    #[error(transparent)]
    Length(#[from] LengthError),
    #[error("length functions live on different groups: {0} and {1}")]
    GroupMismatch(String, String),
    #[error("invalid annulus schedule: {0}")]
    InvalidSchedule(String),
    #[error("degenerate schedule: {skipped} of {total} annuli are empty")]
    DegenerateSchedule { skipped: usize, total: usize },
    #[error("tail window {window} needs at least that many non-empty annuli, found {available}")]
    TooFewAnnuli { available: usize, window: usize },
    #[error("family of length functions is empty")]
    EmptyFamily,
    #[error("{0} is missing from the supplied ball enumeration")]
    MissingValue(String),
}

/// Fraction of empty annuli above which a schedule is rejected.
pub const MAX_SKIPPED_FRACTION: f64 = 0.75;

/// Annulus schedule `[r_min + k·width, r_min + (k+1)·width)` up to `r_max`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfileParams {
    pub r_max: f64,
    pub width: f64,
    pub r_min: f64,
    pub budget: Budget,
}

impl ProfileParams {
    pub fn new(r_max: f64) -> Self {
        ProfileParams {
            r_max,
            width: 1.0,
            r_min: 1.0,
            budget: Budget::default(),
        }
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    fn annulus_count(&self) -> Result<usize, AsymptoticsError> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if !ok(self.r_min) || !ok(self.width) || !ok(self.r_max) || self.r_max < self.r_min + self.width - TOL {
            return Err(AsymptoticsError::InvalidSchedule(format!(
                "need 0 < r_min, 0 < width and r_min + width <= r_max (got r_min {}, width {}, r_max {})",
                self.r_min, self.width, self.r_max
            )));
        }
        Ok(((self.r_max - self.r_min) / self.width + TOL).floor() as usize)
    }

    fn bounds(&self, k: usize) -> (f64, f64) {
        (self.r_min + k as f64 * self.width, self.r_min + (k + 1) as f64 * self.width)
    }
}

/// Extremes of `ℓ₁/ℓ₂` on one annulus of `ℓ₂`.
#[derive(Clone, Debug, PartialEq)]
pub struct Extremes {
    pub min: f64,
    pub max: f64,
    pub argmin: GroupElement,
    pub argmax: GroupElement,
    /// `max ℓ₂/ℓ₁`, infinite when `ℓ₁` vanishes somewhere on the annulus.
    pub rev_max: f64,
    /// `min ℓ₂/ℓ₁`.
    pub rev_min: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Annulus {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    /// `None` for an empty (skipped) annulus.
    pub extremes: Option<Extremes>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatioProfile {
    pub l1: String,
    pub l2: String,
    pub params: ProfileParams,
    pub annuli: Vec<Annulus>,
    /// Non-identity elements with `ℓ₂ = 0`, excluded from every annulus.
    pub zero_denominator: usize,
}

impl RatioProfile {
    /// The profile of `ℓ₂/ℓ₁` on the same sample (still indexed by `ℓ₂`).
    pub fn reciprocal(&self) -> RatioProfile {
        let annuli = self
            .annuli
            .iter()
            .map(|a| Annulus {
                extremes: a.extremes.as_ref().map(|e| Extremes {
                    min: e.rev_min,
                    max: e.rev_max,
                    argmin: e.argmax.clone(),
                    argmax: e.argmin.clone(),
                    rev_max: e.max,
                    rev_min: e.min,
                }),
                ..a.clone()
            })
            .collect();
        RatioProfile {
            l1: self.l2.clone(),
            l2: self.l1.clone(),
            params: self.params,
            annuli,
            zero_denominator: self.zero_denominator,
        }
    }

    pub fn skipped(&self) -> usize {
        self.annuli.iter().filter(|a| a.extremes.is_none()).count()
    }

    /// Non-empty annuli in schedule order.
    pub fn filled(&self) -> impl Iterator<Item = (&Annulus, &Extremes)> {
        self.annuli.iter().filter_map(|a| a.extremes.as_ref().map(|e| (a, e)))
    }

    /// Restriction to annuli with `hi ≤ r_max`.
    pub fn truncated(&self, r_max: f64) -> RatioProfile {
        let mut out = self.clone();
        out.annuli.retain(|a| a.hi <= r_max + TOL);
        out.params.r_max = r_max;
        out
    }
}

fn annulus_extremes(entries: &[(GroupElement, f64)], numer: &[f64]) -> Option<Extremes> {
    let mut e: Option<Extremes> = None;
    for ((x, den), num) in entries.iter().zip(numer) {
        let ratio = num / den;
        let rev = den / num;
        match &mut e {
            None => {
                e = Some(Extremes {
                    min: ratio,
                    max: ratio,
                    argmin: x.clone(),
                    argmax: x.clone(),
                    rev_max: rev,
                    rev_min: rev,
                })
            }
            Some(e) => {
                if ratio < e.min {
                    e.min = ratio;
                    e.argmin = x.clone();
                }
                if ratio > e.max {
                    e.max = ratio;
                    e.argmax = x.clone();
                }
                e.rev_max = e.rev_max.max(rev);
                e.rev_min = e.rev_min.min(rev);
            }
        }
    }
    e
}

fn build_profile(
    l1: String,
    l2: String,
    ball: &BallEnumeration,
    params: ProfileParams,
    count: usize,
    numerator: impl Fn(std::ops::Range<usize>) -> Result<Vec<f64>, AsymptoticsError> + Sync,
) -> Result<RatioProfile, AsymptoticsError> {
    let zero_denominator = ball.entries().iter().skip(1).take_while(|(_, v)| *v <= TOL).count();
    let annuli = (0..count)
        .into_par_iter()
        .map(|k| {
            let (lo, hi) = params.bounds(k);
            let range = ball.index_range(lo, hi);
            let entries = &ball.entries()[range.clone()];
            let numer = numerator(range)?;
            Ok(Annulus {
                lo,
                hi,
                count: entries.len(),
                extremes: annulus_extremes(entries, &numer),
            })
        })
        .collect::<Result<Vec<_>, AsymptoticsError>>()?;
    let skipped = annuli.iter().filter(|a| a.extremes.is_none()).count();
    if skipped as f64 > MAX_SKIPPED_FRACTION * count as f64 {
        return Err(AsymptoticsError::DegenerateSchedule { skipped, total: count });
    }
    Ok(RatioProfile {
        l1,
        l2,
        params,
        annuli,
        zero_denominator,
    })
}

fn same_group(l1: &LengthFunction, l2: &LengthFunction) -> Result<(), AsymptoticsError> {
    if l1.group() != l2.group() {
        return Err(AsymptoticsError::GroupMismatch(l1.group().to_string(), l2.group().to_string()));
    }
    Ok(())
}

/// Exact per-annulus extremes of `ℓ₁/ℓ₂` over the annuli of `ℓ₂`.
pub fn ratio_profile(
    l1: &LengthFunction,
    l2: &LengthFunction,
    params: ProfileParams,
) -> Result<RatioProfile, AsymptoticsError> {
    same_group(l1, l2)?;
    let count = params.annulus_count()?;
    let ball = l2.enumerate_ball(params.bounds(count - 1).1, params.budget)?;
    let start = ball.index_range(0.0, params.r_min).end;
    let targets: Vec<GroupElement> = ball.entries()[start..].iter().map(|(x, _)| x.clone()).collect();
    let values = l1.evaluate_many(&targets, params.budget)?;
    build_profile(l1.label().to_string(), l2.label().to_string(), &ball, params, count, |range| {
        Ok(values[range.start - start..range.end - start].to_vec())
    })
}

/// As [`ratio_profile`], reading `ℓ₁` from a precomputed ball instead of
/// evaluating it.
pub fn ratio_profile_from_ball(
    l1_label: &str,
    l1_ball: &BallEnumeration,
    l2: &LengthFunction,
    params: ProfileParams,
) -> Result<RatioProfile, AsymptoticsError> {
    let count = params.annulus_count()?;
    let ball = l2.enumerate_ball(params.bounds(count - 1).1, params.budget)?;
    build_profile(l1_label.to_string(), l2.label().to_string(), &ball, params, count, |range| {
        ball.entries()[range]
            .iter()
            .map(|(x, _)| l1_ball.get(x).ok_or_else(|| AsymptoticsError::MissingValue(x.to_string())))
            .collect()
    })
}

/// One row of the suffix-window convergence table.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowEstimate {
    pub window: usize,
    pub alpha_hat: f64,
    pub limsup_hat: f64,
    pub liminf_hat: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlphaEstimate {
    pub alpha_hat: f64,
    /// Tail max of `ℓ₁/ℓ₂`.
    pub limsup_hat: f64,
    /// Tail min of `ℓ₁/ℓ₂`.
    pub liminf_hat: f64,
    /// Tail max of `ℓ₂/ℓ₁`.
    pub reverse_limsup_hat: f64,
    pub window: usize,
    /// Estimates for every suffix window `1..=n` of non-empty annuli.
    pub convergence: Vec<WindowEstimate>,
    /// Least-squares slope of per-annulus maxima against radius over the window.
    pub max_trend: f64,
    /// Least-squares slope of per-annulus minima against radius over the window.
    pub min_trend: f64,
}

/// Default tail window `⌈n/4⌉` for `n` non-empty annuli.
pub fn default_window(profile: &RatioProfile) -> usize {
    let n = profile.filled().count();
    n.div_ceil(4).max(1)
}

fn slope(points: &[(f64, f64)]) -> f64 {
    if points.len() < 2 || points.iter().any(|(_, y)| !y.is_finite()) {
        return 0.0;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Tail-window estimate of `α(ℓ₁, ℓ₂)`; `window` defaults to [`default_window`].
pub fn alpha_estimate(profile: &RatioProfile, window: Option<usize>) -> Result<AlphaEstimate, AsymptoticsError> {
    let filled: Vec<(&Annulus, &Extremes)> = profile.filled().collect();
    let window = window.unwrap_or_else(|| default_window(profile));
    if window == 0 || filled.len() < window {
        return Err(AsymptoticsError::TooFewAnnuli {
            available: filled.len(),
            window,
        });
    }
    let mut convergence = Vec::with_capacity(filled.len());
    let (mut hi, mut lo, mut rev) = (f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (w, (_, e)) in filled.iter().rev().enumerate() {
        hi = hi.max(e.max);
        lo = lo.min(e.min);
        rev = rev.max(e.rev_max);
        convergence.push(WindowEstimate {
            window: w + 1,
            // hi · rev ≥ 1 in exact arithmetic.
            alpha_hat: (hi.ln() + rev.ln()).max(0.0),
            limsup_hat: hi,
            liminf_hat: lo,
        });
    }
    let tail = &filled[filled.len() - window..];
    let mid = |a: &Annulus| (a.lo + a.hi) / 2.0;
    let maxima: Vec<(f64, f64)> = tail.iter().map(|(a, e)| (mid(a), e.max)).collect();
    let minima: Vec<(f64, f64)> = tail.iter().map(|(a, e)| (mid(a), e.min)).collect();
    let at = &convergence[window - 1];
    let reverse_limsup_hat = tail.iter().map(|(_, e)| e.rev_max).fold(f64::NEG_INFINITY, f64::max);
    Ok(AlphaEstimate {
        alpha_hat: at.alpha_hat,
        limsup_hat: at.limsup_hat,
        liminf_hat: at.liminf_hat,
        reverse_limsup_hat,
        window,
        convergence,
        max_trend: slope(&maxima),
        min_trend: slope(&minima),
    })
}

/// Profile plus estimate in one call.
pub fn alpha(
    l1: &LengthFunction,
    l2: &LengthFunction,
    params: ProfileParams,
    window: Option<usize>,
) -> Result<(RatioProfile, AlphaEstimate), AsymptoticsError> {
    let profile = ratio_profile(l1, l2, params)?;
    let est = alpha_estimate(&profile, window)?;
    Ok((profile, est))
}

/// Slopes within this magnitude count as flat.
pub const TREND_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Holds,
    Fails { witness: GroupElement, ratio: f64 },
    Inconclusive,
}

/// Heuristic test of `ℓ₁ ≲ η·ℓ₂` from tail data.
#[derive(Clone, Debug, PartialEq)]
pub struct Domination {
    pub eta: f64,
    pub verdict: Verdict,
    pub tail_max: f64,
    pub trend: f64,
    pub window: usize,
}

pub fn dominates(
    l1: &LengthFunction,
    l2: &LengthFunction,
    eta: f64,
    params: ProfileParams,
    window: Option<usize>,
) -> Result<Domination, AsymptoticsError> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(AsymptoticsError::InvalidSchedule(format!("eta must be positive, got {eta}")));
    }
    let profile = ratio_profile(l1, l2, params)?;
    domination_from_profile(&profile, eta, window)
}

pub fn domination_from_profile(
    profile: &RatioProfile,
    eta: f64,
    window: Option<usize>,
) -> Result<Domination, AsymptoticsError> {
    let est = alpha_estimate(profile, window)?;
    let filled: Vec<_> = profile.filled().collect();
    let tail = &filled[filled.len() - est.window..];
    let worst = tail
        .iter()
        .map(|(_, e)| e)
        .fold(None::<&Extremes>, |acc, e| match acc {
            Some(a) if a.max >= e.max => Some(a),
            _ => Some(e),
        })
        .expect("window is non-empty");
    let within = est.limsup_hat <= eta + TOL;
    let verdict = if within && est.max_trend <= TREND_TOL {
        Verdict::Holds
    } else if !within && est.max_trend >= -TREND_TOL {
        Verdict::Fails {
            witness: worst.argmax.clone(),
            ratio: worst.max,
        }
    } else {
        Verdict::Inconclusive
    };
    Ok(Domination {
        eta,
        verdict,
        tail_max: est.limsup_hat,
        trend: est.max_trend,
        window: est.window,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiameterReport {
    pub labels: Vec<String>,
    /// Symmetric, zero diagonal.
    pub matrix: Vec<Vec<f64>>,
    /// Estimates for `i < j`, profile indexed by the `j`-th function.
    pub pairs: Vec<((usize, usize), AlphaEstimate)>,
    pub diameter: f64,
    pub argmax: Option<(usize, usize)>,
}

/// Pairwise `alpha_hat` over a family and its maximum.
pub fn eccentricity_diameter(
    family: &[LengthFunction],
    params: ProfileParams,
    window: Option<usize>,
) -> Result<DiameterReport, AsymptoticsError> {
    let first = family.first().ok_or(AsymptoticsError::EmptyFamily)?;
    for l in family {
        same_group(first, l)?;
    }
    let n = family.len();
    let idx: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let pairs = idx
        .par_iter()
        .map(|&(i, j)| {
            let profile = ratio_profile(&family[i], &family[j], params)?;
            Ok(((i, j), alpha_estimate(&profile, window)?))
        })
        .collect::<Result<Vec<_>, AsymptoticsError>>()?;
    let mut matrix = vec![vec![0.0; n]; n];
    let mut diameter = 0.0;
    let mut argmax = None;
    for ((i, j), est) in &pairs {
        matrix[*i][*j] = est.alpha_hat;
        matrix[*j][*i] = est.alpha_hat;
        if est.alpha_hat > diameter {
            diameter = est.alpha_hat;
            argmax = Some((*i, *j));
        }
    }
    Ok(DiameterReport {
        labels: family.iter().map(|l| l.label().to_string()).collect(),
        matrix,
        pairs,
        diameter,
        argmax,
    })
}

/// Symmetry, nonnegativity and triangle-inequality margins for one triple.
#[derive(Clone, Debug, PartialEq)]
pub struct PseudometricReport {
    pub labels: [String; 3],
    /// `alpha[i][j]` for the ordered pair.
    pub alpha: [[f64; 3]; 3],
    pub symmetric: bool,
    pub nonnegative: bool,
    /// `α(i,k) ≤ α(i,j) + α(j,k)` margins, one per choice of middle point.
    pub triangle_margins: [f64; 3],
    /// `|α̂ at r_max − α̂ at r_max/2|` for the pairs (0,1), (0,2), (1,2).
    pub drift: [f64; 3],
    pub slack: f64,
}

/// Allowance on the triangle margins beyond [`TOL`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Slack {
    Fixed(f64),
    /// The summed drift of the three estimates between `r_max/2` and `r_max`.
    /// For an estimate whose bias decays like `c/r` this equals the bias at `r_max`.
    HalfRadiusDrift,
}

impl PseudometricReport {
    pub fn min_margin(&self) -> f64 {
        self.triangle_margins.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn passes(&self) -> bool {
        self.symmetric && self.nonnegative && self.min_margin() >= -(TOL + self.slack)
    }
}

pub fn pseudometric_axiom_check(
    triple: [&LengthFunction; 3],
    params: ProfileParams,
    window: Option<usize>,
    slack: Slack,
) -> Result<PseudometricReport, AsymptoticsError> {
    same_group(triple[0], triple[1])?;
    same_group(triple[0], triple[2])?;
    let mut alpha = [[0.0; 3]; 3];
    let mut drift = [0.0; 3];
    for (n, (i, j)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
        let profile = ratio_profile(triple[i], triple[j], params)?;
        alpha[i][j] = alpha_estimate(&profile, window)?.alpha_hat;
        alpha[j][i] = alpha_estimate(&profile.reciprocal(), window)?.alpha_hat;
        let half = alpha_estimate(&profile.truncated(params.r_max / 2.0), None)?.alpha_hat;
        drift[n] = (alpha[i][j] - half).abs();
    }
    let slack = match slack {
        Slack::Fixed(s) => s,
        Slack::HalfRadiusDrift => drift.iter().sum(),
    };
    let symmetric = (0..3).all(|i| (0..3).all(|j| alpha[i][j] == alpha[j][i]));
    let nonnegative = alpha.iter().flatten().all(|a| *a >= 0.0);
    let margin = |i: usize, j: usize, k: usize| alpha[i][j] + alpha[j][k] - alpha[i][k];
    Ok(PseudometricReport {
        labels: triple.map(|l| l.label().to_string()),
        alpha,
        symmetric,
        nonnegative,
        triangle_margins: [margin(0, 1, 2), margin(1, 0, 2), margin(0, 2, 1)],
        drift,
        slack,
    })
}

/// `sup ℓ_{B_ℓ(R)}(x)/ℓ(x)` over `R ≤ ℓ(x) < ball_radius`.
#[derive(Clone, Debug, PartialEq)]
pub struct SmoothingRow {
    pub radius: f64,
    pub edges: usize,
    pub sup_ratio: f64,
    pub witness: Option<GroupElement>,
    pub count: usize,
}

pub fn smoothing_convergence(
    length: &LengthFunction,
    schedule: &[f64],
    ball_radius: f64,
    budget: Budget,
) -> Result<Vec<SmoothingRow>, AsymptoticsError> {
    let ball = length.enumerate_ball(ball_radius, budget)?;
    schedule
        .iter()
        .map(|&r| {
            let smoothed = LengthFunction::smoothed(length.clone(), r, budget)?;
            let edges = match smoothed.kind() {
                crate::lengths::LengthKind::Smoothed(s) => s.edges().len(),
                _ => unreachable!(),
            };
            let sample = ball.range(r, ball_radius);
            let xs: Vec<GroupElement> = sample.iter().map(|(x, _)| x.clone()).collect();
            let values = smoothed.evaluate_many(&xs, budget)?;
            let mut sup_ratio = 1.0;
            let mut witness = None;
            for ((x, base), v) in sample.iter().zip(&values) {
                let q = v / base;
                if q > sup_ratio + TOL || (witness.is_none() && q >= sup_ratio - TOL) {
                    sup_ratio = q.max(sup_ratio);
                    witness = Some(x.clone());
                }
            }
            Ok(SmoothingRow {
                radius: r,
                edges,
                sup_ratio,
                witness,
                count: sample.len(),
            })
        })
        .collect()
}

/// `alpha_hat(r·ρ_{B_ℓ(r)}, ℓ)` together with `eta_gap = log limsup_hat(r·ρ/ℓ)`.
///
/// Since `ℓ ≤ r·ρ` pointwise, `liminf_hat ≥ 1`, so `alpha_hat ≤ eta_gap`.
#[derive(Clone, Debug, PartialEq)]
pub struct WordQuotientRow {
    pub r: f64,
    pub generators: usize,
    pub alpha_hat: f64,
    pub eta_gap: f64,
    pub limsup_hat: f64,
    pub liminf_hat: f64,
}

pub fn word_quotient_convergence(
    length: &LengthFunction,
    schedule: &[f64],
    params: ProfileParams,
    window: Option<usize>,
) -> Result<Vec<WordQuotientRow>, AsymptoticsError> {
    schedule
        .iter()
        .map(|&r| {
            let ball = length.enumerate_ball(r, params.budget)?;
            let gens: Vec<GroupElement> = ball.entries().iter().skip(1).map(|(x, _)| x.clone()).collect();
            if gens.len() > params.budget.max_generators {
                return Err(LengthError::TooManyGenerators {
                    count: gens.len(),
                    cap: params.budget.max_generators,
                }
                .into());
            }
            let set = symmetric_closure(length.group(), &gens).map_err(LengthError::from)?;
            let generators = set.len();
            let rho = LengthFunction::word(set).with_label(format!("word:B({},{r})", length.label()));
            let scaled = LengthFunction::rescaled(rho, r)?;
            let (_, est) = alpha(&scaled, length, params, window)?;
            Ok(WordQuotientRow {
                r,
                generators,
                alpha_hat: est.alpha_hat,
                eta_gap: est.limsup_hat.ln(),
                limsup_hat: est.limsup_hat,
                liminf_hat: est.liminf_hat,
            })
        })
        .collect()
}

/// True when each entry is at most its predecessor plus `tol`.
pub fn non_increasing(values: &[f64], tol: f64) -> bool {
    values.windows(2).all(|w| w[1] <= w[0] + tol)
}
