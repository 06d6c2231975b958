//! Length functions on the supported groups and exact ball enumeration.
//!
//! Four kinds are supported: closed-form norms on the translation part, word
//! lengths with respect to a generating set (layered BFS), smoothed lengths
//! `ℓ_A` with `A` an open ball of a base length (Dijkstra with edge weights
//! `ℓ(a)`), and positive rescalings.

mod explore;
mod parse;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::groups::{symmetric_closure, GeneratingSet, GroupDescriptor, GroupElement, GroupError};

/// Absolute tolerance for comparing lengths.
pub const TOL: f64 = 1e-9;

/// Default cap on stored elements during an exploration.
pub const DEFAULT_MAX_NODES: usize = 5_000_000;

/// Default cap on the size of an edge set built from a ball.
pub const DEFAULT_MAX_GENERATORS: usize = 100_000;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum LengthError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("exploration budget exceeded after {nodes} stored elements (complete up to radius {radius_reached}){}",
        upper_bound.map(|u| format!("; best known upper bound {u}")).unwrap_or_default())]
    BudgetExceeded {
        radius_reached: f64,
        nodes: usize,
        upper_bound: Option<f64>,
    },
    #[error("{element} is not in the subgroup generated by the generating set")]
    NotGenerated { element: String },
    #[error("radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("invalid length spec {spec:?}: {reason}")]
    InvalidSpec { spec: String, reason: String },
    #[error("edge set has {count} elements, above the cap of {cap}")]
    TooManyGenerators { count: usize, cap: usize },
    #[error("{0} has finite order")]
    FiniteOrder(String),
}

/// Caps on exploration size.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: usize,
    pub max_generators: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: DEFAULT_MAX_NODES,
            max_generators: DEFAULT_MAX_GENERATORS,
        }
    }
}

impl Budget {
    pub fn with_nodes(max_nodes: usize) -> Self {
        Budget {
            max_nodes,
            ..Budget::default()
        }
    }
}

/// Closed-form norms, evaluated on the translation part of an element.
#[derive(Clone, Debug, PartialEq)]
pub enum ClosedForm {
    L1,
    LInf,
    L2,
    /// `Σ wᵢ|nᵢ|` with positive weights.
    Weighted(Vec<f64>),
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::L1 => write!(f, "l1"),
            Self::LInf => write!(f, "linf"),
            Self::L2 => write!(f, "l2"),
            Self::Weighted(w) => {
                let parts: Vec<String> = w.iter().map(|x| format!("{x}")).collect();
                write!(f, "wnorm:{}", parts.join(","))
            }
        }
    }
}

impl ClosedForm {
    fn norm(&self, v: &[i64]) -> f64 {
        let abs = v.iter().map(|x| x.unsigned_abs() as f64);
        match self {
            Self::L1 => abs.sum(),
            Self::LInf => abs.fold(0.0, f64::max),
            Self::L2 => abs.map(|x| x * x).sum::<f64>().sqrt(),
            Self::Weighted(w) => abs.zip(w).map(|(x, w)| x * w).sum(),
        }
    }

    fn eval(&self, x: &GroupElement) -> f64 {
        match x {
            GroupElement::Z(n) => self.norm(&[*n]),
            GroupElement::Zd(v) => self.norm(v),
            GroupElement::Dinf { shift, .. } => self.norm(&[*shift]),
            GroupElement::CmZ2 { shift, .. } => self.norm(shift),
            GroupElement::Free(w) => w.len() as f64,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Smoothing {
    base: Box<LengthFunction>,
    radius: f64,
    /// `A = B_base(radius)` minus the identity, with weights `base(a)`.
    edges: Vec<(GroupElement, f64)>,
    span: GeneratingSet,
}

impl Smoothing {
    pub fn base(&self) -> &LengthFunction {
        &self.base
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn edges(&self) -> &[(GroupElement, f64)] {
        &self.edges
    }

    /// The edge set `A` as a generating set, for word lengths `ρ_A`.
    pub fn generating_set(&self) -> &GeneratingSet {
        &self.span
    }
}

#[derive(Clone, Debug)]
pub enum LengthKind {
    ClosedForm(ClosedForm),
    Word(GeneratingSet),
    Smoothed(Smoothing),
    Rescaled { base: Box<LengthFunction>, factor: f64 },
}

/// A (pseudo)length function on one group.
#[derive(Clone, Debug)]
pub struct LengthFunction {
    group: GroupDescriptor,
    kind: LengthKind,
    label: String,
}

impl fmt::Display for LengthFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

fn check_radius(r: f64) -> Result<(), LengthError> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(LengthError::InvalidRadius(r))
    }
}

impl LengthFunction {
    pub fn closed_form(group: GroupDescriptor, form: ClosedForm) -> Result<Self, LengthError> {
        let invalid = |reason: &str| LengthError::InvalidSpec {
            spec: form.to_string(),
            reason: format!("{reason} on {group}"),
        };
        match (&form, group) {
            (ClosedForm::Weighted(w), GroupDescriptor::Z | GroupDescriptor::Zd(_)) => {
                let dim = match group {
                    GroupDescriptor::Zd(d) => d,
                    _ => 1,
                };
                if w.len() != dim {
                    return Err(invalid("weight count must match the rank"));
                }
                if !w.iter().all(|x| *x > 0.0 && x.is_finite()) {
                    return Err(invalid("weights must be positive"));
                }
            }
            // Unequal weights are not rotation invariant, hence not subadditive.
            (ClosedForm::Weighted(_), _) => return Err(invalid("weighted norms are only defined")),
            (ClosedForm::L1, GroupDescriptor::Free(_)) => {}
            (_, GroupDescriptor::Free(_)) => return Err(invalid("only the word length l1 is available")),
            _ => {}
        }
        Ok(LengthFunction {
            group,
            label: form.to_string(),
            kind: LengthKind::ClosedForm(form),
        })
    }

    pub fn word(gens: GeneratingSet) -> Self {
        let label = format!(
            "word:{}",
            gens.elements().iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
        );
        Self::word_labelled(gens, label)
    }

    pub(crate) fn word_labelled(gens: GeneratingSet, label: String) -> Self {
        LengthFunction {
            group: gens.group(),
            kind: LengthKind::Word(gens),
            label,
        }
    }

    /// `ℓ_A` for `A = B_base(radius)`; the open ball is taken literally.
    pub fn smoothed(base: LengthFunction, radius: f64, budget: Budget) -> Result<Self, LengthError> {
        check_radius(radius)?;
        let ball = base.enumerate_ball(radius, budget)?;
        let group = base.group;
        let edges: Vec<(GroupElement, f64)> = ball
            .entries
            .iter()
            .filter(|(x, _)| !group.is_identity(x))
            .cloned()
            .collect();
        if edges.len() > budget.max_generators {
            return Err(LengthError::TooManyGenerators {
                count: edges.len(),
                cap: budget.max_generators,
            });
        }
        let elems: Vec<GroupElement> = edges.iter().map(|(x, _)| x.clone()).collect();
        let span = symmetric_closure(group, &elems)?;
        let label = format!("smooth:{}:{}", base.label, radius);
        Ok(LengthFunction {
            group,
            kind: LengthKind::Smoothed(Smoothing {
                base: Box::new(base),
                radius,
                edges,
                span,
            }),
            label,
        })
    }

    pub fn rescaled(base: LengthFunction, factor: f64) -> Result<Self, LengthError> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(LengthError::InvalidSpec {
                spec: format!("scale:{}:{}", base.label, factor),
                reason: "factor must be positive".into(),
            });
        }
        let label = format!("scale:{}:{}", base.label, factor);
        Ok(LengthFunction {
            group: base.group,
            kind: LengthKind::Rescaled {
                base: Box::new(base),
                factor,
            },
            label,
        })
    }

    pub fn group(&self) -> GroupDescriptor {
        self.group
    }

    pub fn kind(&self) -> &LengthKind {
        &self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Replaces the display label (used for catalog names).
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// True when the function may vanish away from the identity.
    pub fn is_pseudo(&self) -> bool {
        match &self.kind {
            LengthKind::ClosedForm(_) => matches!(self.group, GroupDescriptor::Dinf | GroupDescriptor::CmZ2(_)),
            LengthKind::Word(_) => false,
            LengthKind::Smoothed(s) => s.base.is_pseudo(),
            LengthKind::Rescaled { base, .. } => base.is_pseudo(),
        }
    }

    pub fn evaluate(&self, x: &GroupElement, budget: Budget) -> Result<f64, LengthError> {
        Ok(self.evaluate_many(std::slice::from_ref(x), budget)?[0])
    }

    /// Exact values at all `targets`, sharing one exploration.
    pub fn evaluate_many(&self, targets: &[GroupElement], budget: Budget) -> Result<Vec<f64>, LengthError> {
        for t in targets {
            self.group.check(t)?;
        }
        match &self.kind {
            LengthKind::ClosedForm(f) => Ok(targets.iter().map(|x| f.eval(x)).collect()),
            LengthKind::Rescaled { base, factor } => {
                Ok(base.evaluate_many(targets, budget)?.into_iter().map(|v| v * factor).collect())
            }
            LengthKind::Word(gens) => {
                check_spanned(gens, targets)?;
                explore::bfs_lengths(self.group, gens.elements(), targets, budget)
            }
            LengthKind::Smoothed(s) => {
                check_spanned(&s.span, targets)?;
                explore::dijkstra_lengths(self.group, &s.edges, targets, budget)
            }
        }
    }

    /// All `x` with `ℓ(x) < radius`, with exact values.
    pub fn enumerate_ball(&self, radius: f64, budget: Budget) -> Result<BallEnumeration, LengthError> {
        check_radius(radius)?;
        let entries = self.ball_entries(radius, budget)?;
        Ok(BallEnumeration::new(radius, entries))
    }

    fn ball_entries(&self, radius: f64, budget: Budget) -> Result<Vec<(GroupElement, f64)>, LengthError> {
        match &self.kind {
            LengthKind::ClosedForm(f) => explore::flood_ball(self.group, |x| f.eval(x), radius, budget),
            LengthKind::Word(gens) => explore::bfs_ball(self.group, gens.elements(), radius, budget),
            LengthKind::Smoothed(s) => explore::dijkstra_ball(self.group, &s.edges, radius, budget),
            LengthKind::Rescaled { base, factor } => {
                let inner = base.ball_entries((radius + TOL) / factor + TOL, budget)?;
                Ok(inner
                    .into_iter()
                    .map(|(x, v)| (x, v * factor))
                    .filter(|(_, v)| *v < radius - TOL)
                    .collect())
            }
        }
    }

    /// All `x` with `lo ≤ ℓ(x) < hi`.
    pub fn annulus(&self, lo: f64, hi: f64, budget: Budget) -> Result<Vec<(GroupElement, f64)>, LengthError> {
        check_radius(lo)?;
        if hi <= lo {
            return Err(LengthError::InvalidRadius(hi));
        }
        let ball = self.enumerate_ball(hi, budget)?;
        Ok(ball.range(lo, hi).to_vec())
    }
}

fn check_spanned(gens: &GeneratingSet, targets: &[GroupElement]) -> Result<(), LengthError> {
    match targets.iter().find(|t| !gens.spans(t)) {
        Some(t) => Err(LengthError::NotGenerated { element: t.to_string() }),
        None => Ok(()),
    }
}

/// An exact ball `{x : ℓ(x) < radius}` ordered by (length, canonical key).
#[derive(Clone, Debug)]
pub struct BallEnumeration {
    radius: f64,
    entries: Vec<(GroupElement, f64)>,
    index: HashMap<GroupElement, usize>,
}

impl BallEnumeration {
    fn new(radius: f64, mut entries: Vec<(GroupElement, f64)>) -> Self {
        entries.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        let index = entries.iter().enumerate().map(|(i, (x, _))| (x.clone(), i)).collect();
        BallEnumeration { radius, entries, index }
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(GroupElement, f64)] {
        &self.entries
    }

    pub fn get(&self, x: &GroupElement) -> Option<f64> {
        self.index.get(x).map(|&i| self.entries[i].1)
    }

    /// Entries with `lo ≤ ℓ < hi`, using the same tolerance as ball membership.
    pub fn range(&self, lo: f64, hi: f64) -> &[(GroupElement, f64)] {
        &self.entries[self.index_range(lo, hi)]
    }

    /// Positions of [`range`](Self::range) within [`entries`](Self::entries).
    pub fn index_range(&self, lo: f64, hi: f64) -> std::ops::Range<usize> {
        let start = self.entries.partition_point(|(_, v)| *v < lo - TOL);
        let end = self.entries.partition_point(|(_, v)| *v < hi - TOL);
        start..end.max(start)
    }

    /// Element counts in the unit shells `[k, k+1)`.
    pub fn shell_counts(&self) -> Vec<usize> {
        let shells = (self.radius - TOL).ceil().max(0.0) as usize;
        (0..shells).map(|k| self.range(k as f64, k as f64 + 1.0).len()).collect()
    }
}

/// Result of normalising a length along an infinite-order direction.
#[derive(Clone, Debug)]
pub struct UnitRescaling {
    pub length: LengthFunction,
    pub factor: f64,
    /// `ℓ(direction^n) / n` for `n = 1..=horizon`.
    pub sequence: Vec<f64>,
}

/// Rescales `ℓ` so that `ℓ(direction^N) = N`.
pub fn rescale_to_unit(
    length: &LengthFunction,
    direction: &GroupElement,
    horizon: u32,
    budget: Budget,
) -> Result<UnitRescaling, LengthError> {
    let group = length.group();
    group.check(direction)?;
    if !group.has_infinite_order(direction) || horizon == 0 {
        return Err(LengthError::FiniteOrder(direction.to_string()));
    }
    let mut powers = Vec::with_capacity(horizon as usize);
    let mut acc = group.identity();
    for _ in 0..horizon {
        acc = group.multiply(&acc, direction)?;
        powers.push(acc.clone());
    }
    let values = length.evaluate_many(&powers, budget)?;
    let sequence: Vec<f64> = values.iter().enumerate().map(|(i, v)| v / (i + 1) as f64).collect();
    let factor = f64::from(horizon) / values[horizon as usize - 1];
    let rescaled = LengthFunction::rescaled(length.clone(), factor)?;
    Ok(UnitRescaling {
        length: rescaled,
        factor,
        sequence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> Budget {
        Budget::default()
    }

    fn parse(g: GroupDescriptor, s: &str) -> LengthFunction {
        LengthFunction::parse(g, s, b()).unwrap()
    }

    /// Independent word-length oracle: brute-force search over all words of
    /// length ≤ k, stopping at the first k that reaches the target.
    fn brute_word_length(g: GroupDescriptor, gens: &[GroupElement], x: &GroupElement, max: usize) -> Option<usize> {
        let mut layer = vec![g.identity()];
        for k in 0..=max {
            if layer.contains(x) {
                return Some(k);
            }
            let mut next = Vec::new();
            for y in &layer {
                for a in gens {
                    next.push(g.multiply(y, a).unwrap());
                }
            }
            next.sort();
            next.dedup();
            layer = next;
        }
        None
    }

    #[test]
    fn word_length_examples() {
        let z2 = GroupDescriptor::Zd(2);
        let l = parse(z2, "word:std");
        let x = GroupElement::Zd(vec![3, 4]);
        assert_eq!(l.evaluate(&x, b()).unwrap(), 7.0);
        let LengthKind::Word(gens) = l.kind() else { panic!() };
        assert_eq!(brute_word_length(z2, gens.elements(), &x, 7), Some(7));

        let c4 = GroupDescriptor::CmZ2(4);
        let l = parse(c4, "word:t,e1");
        let x = GroupElement::CmZ2 { rot: 0, shift: [2, 3] };
        assert_eq!(l.evaluate(&x, b()).unwrap(), 7.0);
        let LengthKind::Word(gens) = l.kind() else { panic!() };
        assert_eq!(brute_word_length(c4, gens.elements(), &x, 7), Some(7));
        // witness e1 e1 θ e1 e1 e1 θ⁻¹
        let w = c4.parse_generator("e1*e1*t*e1*e1*e1*t^-1").unwrap();
        assert_eq!(w, x);
    }

    #[test]
    fn smoothed_euclidean_example() {
        let z2 = GroupDescriptor::Zd(2);
        let l = parse(z2, "smooth:l2:1.5");
        let LengthKind::Smoothed(s) = l.kind() else { panic!() };
        assert_eq!(s.edges().len(), 8);
        let x = GroupElement::Zd(vec![2, 1]);
        let v = l.evaluate(&x, b()).unwrap();
        assert!((v - (1.0 + 2f64.sqrt())).abs() < 1e-12, "{v}");
        let base = parse(z2, "l2").evaluate(&x, b()).unwrap();
        assert!((base - 5f64.sqrt()).abs() < 1e-12);
        assert!(base < v);
    }

    #[test]
    fn closed_form_on_cmz2_is_pseudo() {
        let c4 = GroupDescriptor::CmZ2(4);
        let l = parse(c4, "l1");
        assert!(l.is_pseudo());
        let x = GroupElement::CmZ2 { rot: 2, shift: [-3, 5] };
        assert_eq!(l.evaluate(&x, b()).unwrap(), 8.0);
        assert_eq!(l.evaluate(&GroupElement::CmZ2 { rot: 1, shift: [0, 0] }, b()).unwrap(), 0.0);
    }

    #[test]
    fn ball_sizes() {
        assert_eq!(parse(GroupDescriptor::Z, "l1").enumerate_ball(3.5, b()).unwrap().len(), 7);
        assert_eq!(parse(GroupDescriptor::Z, "l1").enumerate_ball(0.5, b()).unwrap().len(), 1);
        assert_eq!(parse(GroupDescriptor::Zd(2), "linf").enumerate_ball(2.5, b()).unwrap().len(), 25);
        let free = parse(GroupDescriptor::Free(2), "word:std").enumerate_ball(3.5, b()).unwrap();
        assert_eq!(free.len(), 53);
        assert_eq!(free.shell_counts(), vec![1, 4, 12, 36]);
        // sphere sizes 4·3^(k-1) by brute force over all words in {a,A,b,B}
        let g = GroupDescriptor::Free(2);
        let letters = ["a", "A", "b", "B"];
        let mut words = std::collections::BTreeSet::new();
        for len in 0..=3u32 {
            for code in 0..4usize.pow(len) {
                let mut w = g.identity();
                let mut c = code;
                for _ in 0..len {
                    w = g.multiply(&w, &g.parse_element(letters[c % 4]).unwrap()).unwrap();
                    c /= 4;
                }
                words.insert(w);
            }
        }
        assert_eq!(words.len(), 53);
        // strictness: integral radius excludes its own sphere
        assert_eq!(parse(GroupDescriptor::Z, "l1").enumerate_ball(3.0, b()).unwrap().len(), 5);
    }

    #[test]
    fn annuli() {
        let z = GroupDescriptor::Z;
        let a = parse(z, "l1").annulus(3.0, 5.0, b()).unwrap();
        let mut xs: Vec<_> = a.iter().map(|(x, _)| x.clone()).collect();
        xs.sort();
        assert_eq!(xs, [-4, -3, 3, 4].map(GroupElement::Z));
        assert_eq!(parse(GroupDescriptor::Zd(2), "l1").annulus(2.0, 3.0, b()).unwrap().len(), 8);
        // enumeration oracle: (θ^i, v) with max|v_j| = 1
        let c4 = parse(GroupDescriptor::CmZ2(4), "linf").annulus(1.0, 2.0, b()).unwrap();
        let mut count = 0;
        for _rot in 0..4 {
            for a in -1i64..=1 {
                for bb in -1i64..=1 {
                    if a.abs().max(bb.abs()) == 1 {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(count, 32);
        assert_eq!(c4.len(), 32);
        assert!(parse(z, "l1").annulus(3.0, 3.0, b()).is_err());
    }

    #[test]
    fn rescale_examples() {
        let z = GroupDescriptor::Z;
        let r = rescale_to_unit(&parse(z, "scale:l1:3"), &GroupElement::Z(1), 100, b()).unwrap();
        assert!((r.factor - 1.0 / 3.0).abs() < 1e-12);
        let c4 = GroupDescriptor::CmZ2(4);
        let dir = GroupElement::CmZ2 { rot: 0, shift: [1, 0] };
        let r = rescale_to_unit(&parse(c4, "word:t,e1"), &dir, 50, b()).unwrap();
        assert_eq!(r.factor, 1.0);
        assert!(r.sequence.iter().all(|&v| v == 1.0));
        let r = rescale_to_unit(&parse(GroupDescriptor::Zd(2), "l1"), &GroupElement::Zd(vec![1, 1]), 40, b()).unwrap();
        assert_eq!(r.factor, 0.5);
        let err = rescale_to_unit(&parse(c4, "l1"), &GroupElement::CmZ2 { rot: 1, shift: [1, 0] }, 5, b());
        assert!(matches!(err, Err(LengthError::FiniteOrder(_))));
    }

    #[test]
    fn not_generated_and_budget_errors() {
        let z = GroupDescriptor::Z;
        let l = parse(z, "word:2");
        assert!(matches!(l.evaluate(&GroupElement::Z(3), b()), Err(LengthError::NotGenerated { .. })));
        assert_eq!(l.evaluate(&GroupElement::Z(-6), b()).unwrap(), 3.0);
        let l = parse(GroupDescriptor::Zd(2), "word:std");
        match l.enumerate_ball(100.0, Budget::with_nodes(500)) {
            Err(LengthError::BudgetExceeded { radius_reached, .. }) => assert!(radius_reached >= 10.0),
            other => panic!("{other:?}"),
        }
        match parse(GroupDescriptor::Zd(2), "l2").enumerate_ball(100.0, Budget::with_nodes(500)) {
            Err(LengthError::BudgetExceeded { radius_reached, .. }) => assert!(radius_reached > 5.0),
            other => panic!("{other:?}"),
        }
        let s = parse(GroupDescriptor::Zd(2), "smooth:l2:1.5");
        match s.evaluate(&GroupElement::Zd(vec![40, 0]), Budget::with_nodes(300)) {
            Err(LengthError::BudgetExceeded { .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse(GroupDescriptor::Z, "l1").enumerate_ball(-1.0, b()),
            Err(LengthError::InvalidRadius(_))
        ));
    }

    #[test]
    fn zero_weight_edges_in_smoothing() {
        // rotations cost nothing under the translation l1 pseudolength
        let c4 = GroupDescriptor::CmZ2(4);
        let l = parse(c4, "smooth:l1:1.5");
        assert!(l.is_pseudo());
        let LengthKind::Smoothed(s) = l.kind() else { panic!() };
        assert!(s.edges().iter().any(|(_, w)| *w == 0.0));
        let x = GroupElement::CmZ2 { rot: 3, shift: [4, -2] };
        assert_eq!(l.evaluate(&x, b()).unwrap(), 6.0);
        let ball = l.enumerate_ball(2.5, b()).unwrap();
        // 4 rotations × 13 lattice points with |a|+|b| ≤ 2
        assert_eq!(ball.len(), 52);
    }

    #[test]
    fn ball_entries_match_evaluate() {
        let c4 = GroupDescriptor::CmZ2(4);
        for spec in ["word:t,e1,e1*e2", "smooth:word:t,e1:2.5", "scale:word:t,e1:0.5", "l2"] {
            let l = parse(c4, spec);
            let ball = l.enumerate_ball(6.0, b()).unwrap();
            let xs: Vec<_> = ball.entries().iter().map(|(x, _)| x.clone()).collect();
            let vals = l.evaluate_many(&xs, b()).unwrap();
            for ((_, v), w) in ball.entries().iter().zip(vals) {
                assert!((v - w).abs() < TOL, "{spec}");
            }
        }
    }
}
