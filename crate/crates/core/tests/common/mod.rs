#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use coarse::groups::{GeneratingSet, GroupDescriptor, GroupElement};
use coarse::lengths::{Budget, LengthFunction, LengthKind};

pub fn budget() -> Budget {
    Budget::default()
}

pub fn families() -> Vec<GroupDescriptor> {
    vec![
        GroupDescriptor::Z,
        GroupDescriptor::Zd(2),
        GroupDescriptor::Zd(3),
        GroupDescriptor::Dinf,
        GroupDescriptor::CmZ2(2),
        GroupDescriptor::CmZ2(4),
        GroupDescriptor::Free(2),
        GroupDescriptor::Free(3),
    ]
}

/// Length specs constructed per group: the closed forms the group accepts,
/// several word metrics, rescalings and smoothings.
pub fn length_catalog(g: GroupDescriptor) -> Vec<&'static str> {
    match g {
        GroupDescriptor::Z => vec!["l1", "word:1", "word:1,2", "word:1,3", "word:2,3", "scale:l1:3", "smooth:l1:2.5", "smooth:word:2,3:3"],
        GroupDescriptor::Zd(2) => vec![
            "l1",
            "l2",
            "linf",
            "wnorm:3,1",
            "wnorm:1,3",
            "word:std",
            "word:e1,e2,e1*e2",
            "scale:linf:2",
            "smooth:l2:1.5",
            "smooth:l2:2.5",
            "smooth:wnorm:3,1:4",
        ],
        GroupDescriptor::Zd(3) => vec!["l1", "l2", "linf", "word:std", "smooth:l2:1.8"],
        GroupDescriptor::Dinf => vec!["word:std", "word:s,s*t", "word:s,t,t^2", "l1", "smooth:word:std:3", "scale:word:s,t:2"],
        GroupDescriptor::CmZ2(2) => vec!["word:std", "l1", "linf", "smooth:word:std:2.5"],
        GroupDescriptor::CmZ2(4) => vec![
            "word:t,e1",
            "word:t,e1,e2",
            "word:t,e1,e1*e2",
            "word:t,e1,t*e1*t",
            "word:t,t^2,e1,e2",
            "l1",
            "linf",
            "l2",
            "smooth:word:t,e1:2.5",
        ],
        GroupDescriptor::Free(_) => vec!["word:std", "l1", "smooth:word:std:2.5", "scale:word:std:0.5"],
        _ => vec![],
    }
}

pub fn parse(g: GroupDescriptor, spec: &str) -> LengthFunction {
    LengthFunction::parse(g, spec, budget()).unwrap_or_else(|e| panic!("{g} {spec}: {e}"))
}

pub fn std_gens(g: GroupDescriptor) -> GeneratingSet {
    GeneratingSet::parse(g, "std").unwrap()
}

/// Breadth-first word lengths over the Cayley graph, written directly on
/// `multiply` so it shares nothing with the library explorers.
pub fn oracle_word_ball(gens: &GeneratingSet, depth: u32) -> HashMap<GroupElement, u32> {
    let g = gens.group();
    let mut seen = HashMap::new();
    let mut queue = VecDeque::new();
    seen.insert(g.identity(), 0);
    queue.push_back(g.identity());
    while let Some(x) = queue.pop_front() {
        let d = seen[&x];
        if d == depth {
            continue;
        }
        for s in gens.elements() {
            let y = g.multiply(&x, s).unwrap();
            seen.entry(y.clone()).or_insert_with(|| {
                queue.push_back(y);
                d + 1
            });
        }
    }
    seen
}

/// Smoothing radius of a smoothed spec, if any.
pub fn smoothing_radius(l: &LengthFunction) -> Option<f64> {
    match l.kind() {
        LengthKind::Smoothed(s) => Some(s.radius()),
        _ => None,
    }
}
