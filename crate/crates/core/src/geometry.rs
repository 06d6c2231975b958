//! Finite metric spaces and scans for coarse geodesicity (`R`-chains) and
//! two-point homogeneity under a finite set of isometries.

use std::collections::BTreeMap;
use std::io::Read;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::lengths::TOL;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum GeometryError {
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("point index {index} out of range for a space with {len} points")]
    InvalidPoint { index: usize, len: usize },
    #[error("unknown point label {0:?}")]
    UnknownLabel(String),
    #[error("step bound must be positive, got {0}")]
    InvalidRadius(f64),
    #[error("invalid isometry action: {0}")]
    InvalidAction(String),
    #[error("map {map} is not an isometry on points {x} and {y}")]
    NotIsometry { map: usize, x: usize, y: usize },
    #[error("csv: {0}")]
    Csv(String),
}

/// Norm used for grid samples of ℤ².
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridNorm {
    L1,
    L2,
}

/// Structure used by the built-in isometry catalogs.
#[derive(Clone, Debug, PartialEq)]
pub enum Layout {
    Unstructured,
    /// `side × side` square of ℤ² centred at the origin, row-major in `x`.
    Grid { side: usize, half: i64 },
    /// `n` consecutive integers centred at 0.
    Line { n: usize, half: i64 },
    Cycle { n: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<f64>,
    layout: Layout,
}

impl FiniteMetricSpace {
    /// Validates symmetry, the zero diagonal, positivity and the triangle inequality.
    pub fn from_matrix(labels: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self, GeometryError> {
        let n = rows.len();
        if n == 0 {
            return Err(GeometryError::InvalidSpace("no points".into()));
        }
        if labels.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(GeometryError::InvalidSpace("distance matrix must be square with one label per point".into()));
        }
        let bad = |msg: String| Err(GeometryError::InvalidSpace(msg));
        for i in 0..n {
            for j in 0..n {
                let d = rows[i][j];
                if !d.is_finite() || d < 0.0 {
                    return bad(format!("d({i},{j}) = {d} is not a nonnegative real"));
                }
                if (d - rows[j][i]).abs() > TOL {
                    return bad(format!("d({i},{j}) != d({j},{i})"));
                }
                if (i == j) != (d <= TOL) {
                    return bad(format!("d({i},{j}) = {d} violates d(x,y) = 0 iff x = y"));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if rows[i][k] > rows[i][j] + rows[j][k] + TOL {
                        return bad(format!("triangle inequality fails on ({i},{j},{k})"));
                    }
                }
            }
        }
        Ok(FiniteMetricSpace {
            labels,
            dist: rows.into_iter().flatten().collect(),
            layout: Layout::Unstructured,
        })
    }

    /// Reads a square distance matrix, with an optional header row of labels.
    pub fn from_csv(reader: impl Read) -> Result<Self, GeometryError> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(reader);
        let mut records = Vec::new();
        for rec in rdr.records() {
            records.push(rec.map_err(|e| GeometryError::Csv(e.to_string()))?);
        }
        let numeric = |r: &csv::StringRecord| r.iter().all(|f| f.parse::<f64>().is_ok());
        let labels_row = match records.first() {
            Some(first) if !numeric(first) => Some(records.remove(0)),
            _ => None,
        };
        let rows = records
            .iter()
            .enumerate()
            .map(|(i, r)| {
                r.iter()
                    .map(|f| f.parse::<f64>().map_err(|_| GeometryError::Csv(format!("row {i}: {f:?} is not a number"))))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let labels = match labels_row {
            Some(h) => h.iter().map(str::to_string).collect(),
            None => (0..rows.len()).map(|i| i.to_string()).collect(),
        };
        Self::from_matrix(labels, rows)
    }

    fn trusted(labels: Vec<String>, dist: impl Fn(usize, usize) -> f64, layout: Layout) -> Self {
        let n = labels.len();
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                d[i * n + j] = dist(i, j);
            }
        }
        FiniteMetricSpace {
            labels,
            dist: d,
            layout,
        }
    }

    /// `side × side` grid centred at the origin.
    pub fn grid(norm: GridNorm, side: usize) -> Result<Self, GeometryError> {
        if side == 0 {
            return Err(GeometryError::InvalidSpace("grid side must be positive".into()));
        }
        let half = (side as i64 - 1) / 2;
        let coords: Vec<(i64, i64)> = (0..side as i64)
            .flat_map(|x| (0..side as i64).map(move |y| (x - half, y - half)))
            .collect();
        let labels = coords.iter().map(|(x, y)| format!("({x},{y})")).collect();
        let dist = |i: usize, j: usize| {
            let (dx, dy) = ((coords[i].0 - coords[j].0).abs() as f64, (coords[i].1 - coords[j].1).abs() as f64);
            match norm {
                GridNorm::L1 => dx + dy,
                GridNorm::L2 => (dx * dx + dy * dy).sqrt(),
            }
        };
        Ok(Self::trusted(labels, dist, Layout::Grid { side, half }))
    }

    /// `n` consecutive integers centred at 0 with `|x − y|`.
    pub fn line(n: usize) -> Result<Self, GeometryError> {
        if n == 0 {
            return Err(GeometryError::InvalidSpace("line needs at least one point".into()));
        }
        let half = (n as i64 - 1) / 2;
        let labels = (0..n as i64).map(|i| (i - half).to_string()).collect();
        Ok(Self::trusted(labels, |i, j| (i as f64 - j as f64).abs(), Layout::Line { n, half }))
    }

    /// Cycle graph metric `min(|i − j|, n − |i − j|)`.
    pub fn cycle(n: usize) -> Result<Self, GeometryError> {
        if n < 3 {
            return Err(GeometryError::InvalidSpace("cycle needs at least 3 points".into()));
        }
        let labels = (0..n).map(|i| i.to_string()).collect();
        let dist = |i: usize, j: usize| {
            let d = i.abs_diff(j);
            d.min(n - d) as f64
        };
        Ok(Self::trusted(labels, dist, Layout::Cycle { n }))
    }

    /// Ball of radius `depth` around a vertex of the `k`-regular tree, unit edges.
    pub fn tree(k: usize, depth: usize) -> Result<Self, GeometryError> {
        if k < 2 {
            return Err(GeometryError::InvalidSpace("tree degree must be at least 2".into()));
        }
        let mut parent: Vec<Option<usize>> = vec![None];
        let mut level = vec![0usize];
        let mut labels = vec!["r".to_string()];
        let mut frontier = vec![0usize];
        for d in 1..=depth {
            let mut next = Vec::new();
            for &p in &frontier {
                let children = if d == 1 { k } else { k - 1 };
                for c in 0..children {
                    parent.push(Some(p));
                    level.push(d);
                    labels.push(format!("{}.{c}", labels[p]));
                    next.push(labels.len() - 1);
                }
            }
            frontier = next;
        }
        let dist = |mut i: usize, mut j: usize| {
            let mut steps = 0;
            while i != j {
                if level[i] >= level[j] {
                    i = parent[i].expect("non-root");
                } else {
                    j = parent[j].expect("non-root");
                }
                steps += 1;
            }
            steps as f64
        };
        Ok(Self::trusted(labels, dist, Layout::Unstructured))
    }

    /// `grid:l1:N`, `grid:l2:N`, `tree:K:DEPTH`, `cycle:N` or `line:N`.
    pub fn from_spec(spec: &str) -> Result<Self, GeometryError> {
        let parts: Vec<&str> = spec.trim().split(':').collect();
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| GeometryError::InvalidSpace(format!("{spec:?}: {s:?} is not a size")))
        };
        match parts.as_slice() {
            ["grid", "l1", n] => Self::grid(GridNorm::L1, num(n)?),
            ["grid", "l2", n] => Self::grid(GridNorm::L2, num(n)?),
            ["tree", k, d] => Self::tree(num(k)?, num(d)?),
            ["cycle", n] => Self::cycle(num(n)?),
            ["line", n] => Self::line(num(n)?),
            _ => Err(GeometryError::InvalidSpace(format!(
                "unknown space {spec:?} (expected grid:l1:N, grid:l2:N, tree:K:D, cycle:N or line:N)"
            ))),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn find(&self, label: &str) -> Result<usize, GeometryError> {
        let label = label.trim();
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| GeometryError::UnknownLabel(label.to_string()))
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.len() + j]
    }

    fn check_point(&self, i: usize) -> Result<(), GeometryError> {
        if i < self.len() {
            Ok(())
        } else {
            Err(GeometryError::InvalidPoint { index: i, len: self.len() })
        }
    }

    fn grid_coords(&self, i: usize) -> Option<Vec<i64>> {
        match self.layout {
            Layout::Grid { side, half } => Some(vec![(i / side) as i64 - half, (i % side) as i64 - half]),
            Layout::Line { half, .. } => Some(vec![i as i64 - half]),
            _ => None,
        }
    }

    fn grid_index(&self, c: &[i64]) -> Option<usize> {
        let inside = |v: i64, half: i64, n: usize| v + half >= 0 && ((v + half) as usize) < n;
        match self.layout {
            Layout::Grid { side, half } => {
                (inside(c[0], half, side) && inside(c[1], half, side))
                    .then(|| (c[0] + half) as usize * side + (c[1] + half) as usize)
            }
            Layout::Line { n, half } => inside(c[0], half, n).then(|| (c[0] + half) as usize),
            _ => None,
        }
    }

    /// Points at least `margin` coordinate steps from the boundary of a grid
    /// or line; every point for other layouts.
    pub fn interior(&self, margin: usize) -> Vec<usize> {
        let m = margin as i64;
        (0..self.len())
            .filter(|&i| match (&self.layout, self.grid_coords(i)) {
                (Layout::Grid { half, side }, Some(c)) | (Layout::Line { half, n: side }, Some(c)) => {
                    let top = *side as i64 - 1 - half;
                    c.iter().all(|&v| v >= -half + m && v <= top - m)
                }
                _ => true,
            })
            .collect()
    }
}

/// Dense Dijkstra over pairs at distance `< step`; ties favour lower indices.
fn chain_distances(space: &FiniteMetricSpace, source: usize, step: f64) -> (Vec<f64>, Vec<usize>) {
    let n = space.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut prev = vec![usize::MAX; n];
    let mut done = vec![false; n];
    dist[source] = 0.0;
    loop {
        let mut u = usize::MAX;
        let mut best = f64::INFINITY;
        for (i, &d) in dist.iter().enumerate() {
            if !done[i] && d < best {
                best = d;
                u = i;
            }
        }
        if u == usize::MAX {
            break;
        }
        done[u] = true;
        let row = &space.dist[u * n..(u + 1) * n];
        for (v, &w) in row.iter().enumerate() {
            if !done[v] && w < step && best + w < dist[v] {
                dist[v] = best + w;
                prev[v] = u;
            }
        }
    }
    (dist, prev)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainResult {
    /// `+∞` when no admissible chain exists.
    pub value: f64,
    pub witness: Vec<usize>,
    pub step_bound: f64,
}

/// `inf Σ d(z_{i−1}, z_i)` over chains from `x` to `y` with every step `< step`.
pub fn chain_infimum(space: &FiniteMetricSpace, x: usize, y: usize, step: f64) -> Result<ChainResult, GeometryError> {
    space.check_point(x)?;
    space.check_point(y)?;
    if step.is_nan() || step <= 0.0 {
        return Err(GeometryError::InvalidRadius(step));
    }
    let (dist, prev) = chain_distances(space, x, step);
    let mut witness = Vec::new();
    if dist[y].is_finite() {
        let mut v = y;
        witness.push(v);
        while v != x {
            v = prev[v];
            witness.push(v);
        }
        witness.reverse();
    }
    Ok(ChainResult {
        value: dist[y],
        witness,
        step_bound: step,
    })
}

/// Deterministic source sample: all points if `count ≥ n`, else a seeded subset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleParams {
    pub count: usize,
    pub seed: u64,
}

fn sample_points(n: usize, params: SampleParams) -> Vec<usize> {
    if params.count >= n {
        return (0..n).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut v = sample(&mut rng, n, params.count).into_vec();
    v.sort_unstable();
    v
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicityRow {
    pub step_bound: f64,
    /// Max of `chain_infimum / d` over the sampled pairs.
    pub eta_hat: f64,
    pub worst: Option<(usize, usize)>,
    pub pairs: usize,
    pub disconnected: usize,
}

/// `η̂(R)` for each step bound, over pairs (sampled source, any other point).
pub fn geodesicity_scan(
    space: &FiniteMetricSpace,
    steps: &[f64],
    sources: SampleParams,
) -> Result<Vec<GeodesicityRow>, GeometryError> {
    if let Some(&r) = steps.iter().find(|r| r.is_nan() || **r <= 0.0) {
        return Err(GeometryError::InvalidRadius(r));
    }
    let picked = sample_points(space.len(), sources);
    Ok(steps
        .iter()
        .map(|&step| {
            let per_source: Vec<(f64, Option<(usize, usize)>, usize, usize)> = picked
                .par_iter()
                .map(|&x| {
                    let (dist, _) = chain_distances(space, x, step);
                    let mut eta = 1.0;
                    let mut worst = None;
                    let mut disconnected = 0;
                    for (y, &c) in dist.iter().enumerate() {
                        if y == x {
                            continue;
                        }
                        if !c.is_finite() {
                            disconnected += 1;
                            continue;
                        }
                        let q = c / space.d(x, y);
                        if q > eta || worst.is_none() {
                            eta = q.max(eta);
                            worst = Some((x, y));
                        }
                    }
                    (eta, worst, disconnected, space.len() - 1)
                })
                .collect();
            let mut row = GeodesicityRow {
                step_bound: step,
                eta_hat: 1.0,
                worst: None,
                pairs: 0,
                disconnected: 0,
            };
            for (eta, worst, disc, pairs) in per_source {
                if eta > row.eta_hat || row.worst.is_none() {
                    row.eta_hat = eta.max(row.eta_hat);
                    row.worst = worst.or(row.worst);
                }
                row.disconnected += disc;
                row.pairs += pairs;
            }
            if row.disconnected > 0 {
                row.eta_hat = f64::INFINITY;
            }
            row
        })
        .collect())
}

/// Two-point Hausdorff distance between `{p1, p2}` and `{q1, q2}`.
pub fn hausdorff_pair_distance(space: &FiniteMetricSpace, p: (usize, usize), q: (usize, usize)) -> f64 {
    let d = |a, b| space.d(a, b);
    let to_q = |a| d(a, q.0).min(d(a, q.1));
    let to_p = |b| d(b, p.0).min(d(b, p.1));
    to_q(p.0).max(to_q(p.1)).max(to_p(q.0)).max(to_p(q.1))
}

/// A finite family of (partial) isometries.
#[derive(Clone, Debug, PartialEq)]
pub enum IsometryAction {
    /// Partial maps given pointwise; `None` marks points outside the domain.
    Explicit(Vec<Vec<Option<usize>>>),
    /// Translations of a grid or line, optionally composed with the rotations
    /// by multiples of π/2 about the origin (grids only).
    GridMotions { rotations: bool },
    /// Rotations of a cycle, optionally with reflections.
    CycleMotions { reflections: bool },
}

impl IsometryAction {
    /// `translations`, `translations+rot4`, `dihedral`, or explicit maps.
    pub fn from_spec(space: &FiniteMetricSpace, spec: &str) -> Result<Self, GeometryError> {
        let action = match (spec.trim(), space.layout()) {
            ("translations", Layout::Grid { .. } | Layout::Line { .. }) => Self::GridMotions { rotations: false },
            ("translations+rot4", Layout::Grid { .. }) => Self::GridMotions { rotations: true },
            ("translations", Layout::Cycle { .. }) => Self::CycleMotions { reflections: false },
            ("dihedral", Layout::Cycle { .. }) => Self::CycleMotions { reflections: true },
            (s, layout) => {
                return Err(GeometryError::InvalidAction(format!("{s:?} is not available on {layout:?}")))
            }
        };
        Ok(action)
    }

    /// One map per row: target index per point, empty or `-` outside the domain.
    pub fn from_csv(space: &FiniteMetricSpace, reader: impl Read) -> Result<Self, GeometryError> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(reader);
        let mut maps = Vec::new();
        for (m, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| GeometryError::Csv(e.to_string()))?;
            let map = rec
                .iter()
                .map(|f| match f {
                    "" | "-" => Ok(None),
                    f => f
                        .parse::<usize>()
                        .map(Some)
                        .map_err(|_| GeometryError::Csv(format!("map {m}: {f:?} is not a point index"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            maps.push(map);
        }
        Self::explicit(space, maps)
    }

    /// Validates that each map preserves distances on its domain.
    pub fn explicit(space: &FiniteMetricSpace, maps: Vec<Vec<Option<usize>>>) -> Result<Self, GeometryError> {
        for (m, map) in maps.iter().enumerate() {
            if map.len() != space.len() {
                return Err(GeometryError::InvalidAction(format!(
                    "map {m} has {} entries, expected {}",
                    map.len(),
                    space.len()
                )));
            }
            let dom: Vec<(usize, usize)> = map.iter().enumerate().filter_map(|(i, t)| t.map(|t| (i, t))).collect();
            for &(_, t) in &dom {
                space.check_point(t)?;
            }
            for &(x, hx) in &dom {
                for &(y, hy) in &dom {
                    if (space.d(hx, hy) - space.d(x, y)).abs() > TOL {
                        return Err(GeometryError::NotIsometry { map: m, x, y });
                    }
                }
            }
        }
        Ok(Self::Explicit(maps))
    }

    /// Best `(h(z), h(u))` over all maps defined at both points, by
    /// Hausdorff distance to `{x, y}`; also the number of maps skipped.
    fn best_image(&self, space: &FiniteMetricSpace, target: (usize, usize), pair: (usize, usize)) -> (f64, usize) {
        let mut best = f64::INFINITY;
        let mut skipped = 0;
        let mut consider = |img: Option<(usize, usize)>| match img {
            Some(p) => best = best.min(hausdorff_pair_distance(space, p, target)),
            None => skipped += 1,
        };
        match self {
            Self::Explicit(maps) => {
                for map in maps {
                    consider(map[pair.0].zip(map[pair.1]));
                }
            }
            Self::GridMotions { rotations } => {
                let (z, u) = (space.grid_coords(pair.0).expect("grid"), space.grid_coords(pair.1).expect("grid"));
                let side = match space.layout {
                    Layout::Grid { side, .. } => side,
                    Layout::Line { n, .. } => n,
                    _ => unreachable!(),
                };
                let span = side as i64 - 1;
                let turns = if *rotations && z.len() == 2 { 4 } else { 1 };
                for r in 0..turns {
                    let rot = |c: &[i64]| -> Vec<i64> {
                        let mut c = c.to_vec();
                        for _ in 0..r {
                            c = vec![-c[1], c[0]];
                        }
                        c
                    };
                    let (rz, ru) = (rot(&z), rot(&u));
                    let shifts: Vec<Vec<i64>> = if z.len() == 2 {
                        (-span..=span).flat_map(|a| (-span..=span).map(move |b| vec![a, b])).collect()
                    } else {
                        (-span..=span).map(|a| vec![a]).collect()
                    };
                    for t in shifts {
                        let hz: Vec<i64> = rz.iter().zip(&t).map(|(a, b)| a + b).collect();
                        let hu: Vec<i64> = ru.iter().zip(&t).map(|(a, b)| a + b).collect();
                        consider(space.grid_index(&hz).zip(space.grid_index(&hu)));
                    }
                }
            }
            Self::CycleMotions { reflections } => {
                let n = space.len();
                for s in 0..n {
                    consider(Some(((pair.0 + s) % n, (pair.1 + s) % n)));
                    if *reflections {
                        consider(Some(((n + s - pair.0) % n, (n + s - pair.1) % n)));
                    }
                }
            }
        }
        (best, skipped)
    }

    fn check_layout(&self, space: &FiniteMetricSpace) -> Result<(), GeometryError> {
        let ok = match self {
            Self::Explicit(maps) => maps.iter().all(|m| m.len() == space.len()),
            Self::GridMotions { rotations } => match space.layout {
                Layout::Grid { .. } => true,
                Layout::Line { .. } => !rotations,
                _ => false,
            },
            Self::CycleMotions { .. } => matches!(space.layout, Layout::Cycle { .. }),
        };
        if ok {
            Ok(())
        } else {
            Err(GeometryError::InvalidAction(format!("{self:?} does not act on {:?}", space.layout)))
        }
    }
}

/// `inf_h d_H({h(z), h(u)}, {x, y})` over the maps defined at `z` and `u`.
pub fn homogeneity_defect(
    space: &FiniteMetricSpace,
    action: &IsometryAction,
    target: (usize, usize),
    pair: (usize, usize),
) -> Result<f64, GeometryError> {
    for p in [target.0, target.1, pair.0, pair.1] {
        space.check_point(p)?;
    }
    action.check_layout(space)?;
    Ok(action.best_image(space, target, pair).0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScatterPoint {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub u: usize,
    /// `d(z,u) − d(x,y) ≥ 0`.
    pub gap: f64,
    pub hausdorff: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneityReport {
    pub scatter: Vec<ScatterPoint>,
    /// Non-decreasing `(gap, σ)` steps: the largest defect seen at any gap ≤ `gap`.
    pub envelope: Vec<(f64, f64)>,
    pub skipped_maps: usize,
    pub margin: usize,
    pub seed: u64,
}

impl HomogeneityReport {
    /// Envelope value at gap 0, if any quadruple had gap 0.
    pub fn at_zero_gap(&self) -> Option<f64> {
        self.envelope.first().filter(|(g, _)| *g <= TOL).map(|(_, s)| *s)
    }
}

/// Upper envelope of a scatter, binned at tolerance level.
pub fn envelope(points: &[ScatterPoint]) -> Vec<(f64, f64)> {
    let mut by_gap: BTreeMap<i64, (f64, f64)> = BTreeMap::new();
    for p in points {
        let key = (p.gap / TOL).round() as i64;
        let e = by_gap.entry(key).or_insert((p.gap, p.hausdorff));
        e.1 = e.1.max(p.hausdorff);
    }
    let mut out = Vec::with_capacity(by_gap.len());
    let mut running = 0.0f64;
    for (_, (g, h)) in by_gap {
        running = running.max(h);
        out.push((g, running));
    }
    out
}

/// Samples quadruples from the interior, orders each so `d(x,y) ≤ d(z,u)`,
/// and records the best defect over the action.
pub fn homogeneity_scan(
    space: &FiniteMetricSpace,
    action: &IsometryAction,
    quadruples: usize,
    margin: usize,
    seed: u64,
) -> Result<HomogeneityReport, GeometryError> {
    action.check_layout(space)?;
    let interior = space.interior(margin);
    if interior.len() < 2 {
        return Err(GeometryError::InvalidSpace(format!("interior at margin {margin} has fewer than two points")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pick_pair = |rng: &mut ChaCha8Rng| loop {
        let a = interior[rng.gen_range(0..interior.len())];
        let b = interior[rng.gen_range(0..interior.len())];
        if a != b {
            return (a, b);
        }
    };
    let quads: Vec<((usize, usize), (usize, usize))> = (0..quadruples)
        .map(|_| {
            let (p, q) = (pick_pair(&mut rng), pick_pair(&mut rng));
            if space.d(p.0, p.1) <= space.d(q.0, q.1) {
                (p, q)
            } else {
                (q, p)
            }
        })
        .collect();
    let results: Vec<(ScatterPoint, usize)> = quads
        .par_iter()
        .map(|&(t, p)| {
            let (h, skipped) = action.best_image(space, t, p);
            (
                ScatterPoint {
                    x: t.0,
                    y: t.1,
                    z: p.0,
                    u: p.1,
                    gap: space.d(p.0, p.1) - space.d(t.0, t.1),
                    hausdorff: h,
                },
                skipped,
            )
        })
        .collect();
    let skipped_maps = results.iter().map(|r| r.1).sum();
    let scatter: Vec<ScatterPoint> = results.into_iter().map(|r| r.0).collect();
    Ok(HomogeneityReport {
        envelope: envelope(&scatter),
        scatter,
        skipped_maps,
        margin,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(s: &FiniteMetricSpace, l: &str) -> usize {
        s.find(l).unwrap()
    }

    #[test]
    fn builtin_sizes() {
        assert_eq!(FiniteMetricSpace::from_spec("grid:l1:21").unwrap().len(), 441);
        assert_eq!(FiniteMetricSpace::from_spec("tree:3:6").unwrap().len(), 190);
        assert_eq!(FiniteMetricSpace::from_spec("cycle:10").unwrap().len(), 10);
        assert!(FiniteMetricSpace::from_spec("blob:3").is_err());
        let g = FiniteMetricSpace::grid(GridNorm::L1, 21).unwrap();
        assert_eq!(g.label(0), "(-10,-10)");
        assert_eq!(g.d(pt(&g, "(0,0)"), pt(&g, "(3,4)")), 7.0);
    }

    #[test]
    fn builtins_are_metric_spaces() {
        for spec in ["grid:l2:6", "tree:3:3", "cycle:9", "line:7"] {
            let s = FiniteMetricSpace::from_spec(spec).unwrap();
            let rows = (0..s.len()).map(|i| (0..s.len()).map(|j| s.d(i, j)).collect()).collect();
            FiniteMetricSpace::from_matrix(s.labels().to_vec(), rows).unwrap();
        }
    }

    #[test]
    fn validation_rejects_bad_matrices() {
        let l = |n: usize| (0..n).map(|i| i.to_string()).collect::<Vec<_>>();
        assert!(FiniteMetricSpace::from_matrix(l(2), vec![vec![0.0, 1.0], vec![2.0, 0.0]]).is_err());
        assert!(FiniteMetricSpace::from_matrix(l(2), vec![vec![0.0, 0.0], vec![0.0, 0.0]]).is_err());
        let tri = vec![vec![0.0, 1.0, 5.0], vec![1.0, 0.0, 1.0], vec![5.0, 1.0, 0.0]];
        assert!(FiniteMetricSpace::from_matrix(l(3), tri).is_err());
    }

    #[test]
    fn csv_loading() {
        let s = FiniteMetricSpace::from_csv("a,b\n0,5\n5,0\n".as_bytes()).unwrap();
        assert_eq!(s.labels(), ["a", "b"]);
        let s2 = FiniteMetricSpace::from_csv("0,5\n5,0\n".as_bytes()).unwrap();
        assert_eq!(s2.labels(), ["0", "1"]);
        assert!(FiniteMetricSpace::from_csv("0,x\n5,0\n".as_bytes()).is_err());
    }

    #[test]
    fn chain_examples() {
        let g = FiniteMetricSpace::grid(GridNorm::L1, 21).unwrap();
        let c = chain_infimum(&g, pt(&g, "(0,0)"), pt(&g, "(3,4)"), 1.5).unwrap();
        assert_eq!(c.value, 7.0);
        assert_eq!(c.witness.len(), 8);
        let steps: f64 = c.witness.windows(2).map(|w| g.d(w[0], w[1])).sum();
        assert_eq!(steps, c.value);
        assert!(c.witness.windows(2).all(|w| g.d(w[0], w[1]) < 1.5));
        // monotone staircase: each coordinate moves toward the target
        let coords: Vec<Vec<i64>> = c.witness.iter().map(|&i| g.grid_coords(i).unwrap()).collect();
        assert!(coords.windows(2).all(|w| w[1][0] >= w[0][0] && w[1][1] >= w[0][1]));

        let two = FiniteMetricSpace::from_csv("a,b\n0,5\n5,0\n".as_bytes()).unwrap();
        let c = chain_infimum(&two, 0, 1, 2.0).unwrap();
        assert!(c.value.is_infinite() && c.witness.is_empty());

        let cyc = FiniteMetricSpace::cycle(10).unwrap();
        assert_eq!(chain_infimum(&cyc, 0, 5, 1.5).unwrap().value, 5.0);
        // step bound exactly at a distance excludes it
        let line = FiniteMetricSpace::line(5).unwrap();
        assert!(chain_infimum(&line, 0, 1, 1.0).unwrap().value.is_infinite());
        assert!(chain_infimum(&line, 0, 9, 1.5).is_err());
        assert!(chain_infimum(&line, 0, 1, 0.0).is_err());
    }

    /// Octile metric: the cheapest path using unit and diagonal steps.
    fn octile(a: i64, b: i64) -> f64 {
        let (p, q) = (a.abs().max(b.abs()) as f64, a.abs().min(b.abs()) as f64);
        (p - q) + q * 2f64.sqrt()
    }

    #[test]
    fn geodesicity_examples() {
        let all = SampleParams { count: usize::MAX, seed: 1 };
        let g = FiniteMetricSpace::grid(GridNorm::L1, 11).unwrap();
        assert_eq!(geodesicity_scan(&g, &[1.5], all).unwrap()[0].eta_hat, 1.0);
        let t = FiniteMetricSpace::tree(3, 6).unwrap();
        assert_eq!(geodesicity_scan(&t, &[1.5], SampleParams { count: 20, seed: 3 }).unwrap()[0].eta_hat, 1.0);

        let e = FiniteMetricSpace::grid(GridNorm::L2, 11).unwrap();
        let rows = geodesicity_scan(&e, &[2f64.sqrt(), 1.5, 6.0], all).unwrap();
        // unit steps only: the worst ratio is ‖v‖₁/‖v‖₂ on a diagonal
        assert!((rows[0].eta_hat - 2f64.sqrt()).abs() < 1e-9);
        let mut expected: f64 = 1.0;
        for a in -10i64..=10 {
            for b in -10i64..=10 {
                if (a, b) != (0, 0) {
                    expected = expected.max(octile(a, b) / ((a * a + b * b) as f64).sqrt());
                }
            }
        }
        assert!((rows[1].eta_hat - expected).abs() < 1e-12, "{} vs {expected}", rows[1].eta_hat);
        assert!(rows[2].eta_hat < rows[1].eta_hat && rows[1].eta_hat < rows[0].eta_hat);
        assert!(rows[2].eta_hat < 1.1);

        let two = FiniteMetricSpace::from_csv("0,5\n5,0\n".as_bytes()).unwrap();
        let r = geodesicity_scan(&two, &[2.0], all).unwrap();
        assert_eq!(r[0].disconnected, 2);
        assert!(r[0].eta_hat.is_infinite());
    }

    #[test]
    fn sampling_is_deterministic() {
        let p = SampleParams { count: 5, seed: 42 };
        assert_eq!(sample_points(100, p), sample_points(100, p));
        assert_ne!(sample_points(100, p), sample_points(100, SampleParams { count: 5, seed: 43 }));
        assert_eq!(sample_points(3, p), vec![0, 1, 2]);
    }

    #[test]
    fn hausdorff_examples() {
        let line = FiniteMetricSpace::line(21).unwrap();
        let p = |l: &str| pt(&line, l);
        assert_eq!(hausdorff_pair_distance(&line, (p("0"), p("3")), (p("0"), p("3"))), 0.0);
        assert_eq!(hausdorff_pair_distance(&line, (p("0"), p("3")), (p("0"), p("5"))), 2.0);
        let two = FiniteMetricSpace::from_csv("a,b\n0,7\n7,0\n".as_bytes()).unwrap();
        assert_eq!(hausdorff_pair_distance(&two, (0, 0), (0, 1)), 7.0);
    }

    #[test]
    fn homogeneity_examples() {
        let g = FiniteMetricSpace::grid(GridNorm::L2, 21).unwrap();
        let act = IsometryAction::from_spec(&g, "translations+rot4").unwrap();
        let p = |l: &str| pt(&g, l);
        let h = homogeneity_defect(&g, &act, (p("(0,0)"), p("(0,3)")), (p("(5,5)"), p("(5,8)"))).unwrap();
        assert_eq!(h, 0.0);
        // a rotation is needed to match a horizontal pair with a vertical one
        let tr = IsometryAction::from_spec(&g, "translations").unwrap();
        let v = (p("(0,0)"), p("(0,3)"));
        let hz = (p("(2,2)"), p("(5,2)"));
        assert_eq!(homogeneity_defect(&g, &act, v, hz).unwrap(), 0.0);
        assert!(homogeneity_defect(&g, &tr, v, hz).unwrap() > 0.0);

        // brute force over all integer translations of the centred line
        let line = FiniteMetricSpace::line(41).unwrap();
        let q = |l: &str| pt(&line, l);
        let act = IsometryAction::from_spec(&line, "translations").unwrap();
        let got = homogeneity_defect(&line, &act, (q("0"), q("3")), (q("0"), q("5"))).unwrap();
        let brute = (-20i64..=20)
            .map(|t| {
                let (a, b) = (t, 5 + t);
                let near = |v: i64, s: [i64; 2]| s.iter().map(|w| (v - w).abs()).min().unwrap();
                near(a, [0, 3]).max(near(b, [0, 3])).max(near(0, [a, b])).max(near(3, [a, b]))
            })
            .min()
            .unwrap();
        assert_eq!(got, brute as f64);
        assert_eq!(got, 1.0);

        // on the half-line 0..=10 the shift by −1 is not defined at 0
        let rows: Vec<Vec<f64>> = (0..11).map(|i| (0..11).map(|j| (i as f64 - j as f64).abs()).collect()).collect();
        let half = FiniteMetricSpace::from_matrix((0..11).map(|i| i.to_string()).collect(), rows).unwrap();
        let maps: Vec<Vec<Option<usize>>> = (-10i64..=10)
            .map(|t| (0..11i64).map(|i| usize::try_from(i + t).ok().filter(|&j| j < 11)).collect())
            .collect();
        let act = IsometryAction::explicit(&half, maps).unwrap();
        assert_eq!(homogeneity_defect(&half, &act, (0, 3), (0, 5)).unwrap(), 2.0);
    }

    #[test]
    fn explicit_maps_are_validated() {
        let cyc = FiniteMetricSpace::cycle(6).unwrap();
        let rot: Vec<Option<usize>> = (0..6).map(|i| Some((i + 1) % 6)).collect();
        assert!(IsometryAction::explicit(&cyc, vec![rot]).is_ok());
        let bad: Vec<Option<usize>> = (0..6).map(|i| Some((2 * i) % 6)).collect();
        assert!(matches!(IsometryAction::explicit(&cyc, vec![bad]), Err(GeometryError::NotIsometry { .. })));
        let act = IsometryAction::from_csv(&cyc, "1,2,3,4,5,0\n-,,,,,\n".as_bytes()).unwrap();
        let IsometryAction::Explicit(maps) = &act else { panic!() };
        assert_eq!(maps.len(), 2);
        assert!(IsometryAction::from_spec(&cyc, "translations+rot4").is_err());
    }

    #[test]
    fn envelope_on_transitive_samples() {
        for (spec, action) in [("cycle:12", "dihedral"), ("line:41", "translations")] {
            let s = FiniteMetricSpace::from_spec(spec).unwrap();
            let act = IsometryAction::from_spec(&s, action).unwrap();
            let r = homogeneity_scan(&s, &act, 400, 5, 7).unwrap();
            assert_eq!(r.at_zero_gap(), Some(0.0), "{spec}");
            assert!(r.envelope.windows(2).all(|w| w[1].1 >= w[0].1 && w[1].0 > w[0].0));
            assert!(r.scatter.iter().all(|p| p.gap >= 0.0 && p.hausdorff >= 0.0));
            assert_eq!(r, homogeneity_scan(&s, &act, 400, 5, 7).unwrap());
        }
    }

    #[test]
    fn interior_margin() {
        let g = FiniteMetricSpace::grid(GridNorm::L1, 11).unwrap();
        assert_eq!(g.interior(0).len(), 121);
        assert_eq!(g.interior(2).len(), 49);
        assert_eq!(FiniteMetricSpace::line(10).unwrap().interior(1).len(), 8);
    }
}
