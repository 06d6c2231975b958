//! Exact arithmetic for the supported group families.
//!
//! Every element is stored in its canonical normal form, so structural
//! equality (and the derived `Ord`/`Hash`) coincides with equality in the
//! group. The derived ordering is lexicographic on the tagged tuple and is
//! what keeps ball enumerations and witnesses reproducible.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Largest supported free rank; letters print as `a..z` with `A..Z` inverses.
pub const MAX_FREE_RANK: usize = 26;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("element {element} does not belong to group {group}")]
    DescriptorMismatch { group: GroupDescriptor, element: String },
    #[error("invalid group descriptor {0:?} (expected z, zd:D, dinf, cmz2:2, cmz2:4 or free:K)")]
    InvalidDescriptor(String),
    #[error("integer overflow in group arithmetic")]
    Overflow,
    #[error("generating set is empty after removing the identity")]
    EmptyGeneratingSet,
    #[error("cannot parse element {input:?} in {group}: {reason}")]
    Parse {
        group: GroupDescriptor,
        input: String,
        reason: String,
    },
    #[error("free-group generators must be single letters unless every basis letter is present")]
    UnsupportedFreeGenerators,
}

/// The group families the crate knows how to compute in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupDescriptor {
    /// The integers.
    Z,
    /// The free abelian group of rank `d`.
    Zd(usize),
    /// The infinite dihedral group `C2 ⋉ Z`.
    Dinf,
    /// `C_m ⋉ Z²` with `C_m` acting by rotations, `m ∈ {2, 4}`.
    CmZ2(u8),
    /// The free group on `k` letters.
    Free(usize),
}

/// A group element in canonical form.
///
/// Free-group letters are encoded as nonzero `i8`: `j` is the `j`-th basis
/// letter and `-j` its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Z(i64),
    Zd(Vec<i64>),
    Dinf { flip: bool, shift: i64 },
    CmZ2 { rot: u8, shift: [i64; 2] },
    Free(Vec<i8>),
}

impl GroupDescriptor {
    pub fn zd(d: usize) -> Result<Self, GroupError> {
        if d == 0 {
            return Err(GroupError::InvalidDescriptor(format!("zd:{d}")));
        }
        Ok(Self::Zd(d))
    }

    pub fn cmz2(m: u8) -> Result<Self, GroupError> {
        if m != 2 && m != 4 {
            return Err(GroupError::InvalidDescriptor(format!("cmz2:{m}")));
        }
        Ok(Self::CmZ2(m))
    }

    pub fn free(k: usize) -> Result<Self, GroupError> {
        if !(2..=MAX_FREE_RANK).contains(&k) {
            return Err(GroupError::InvalidDescriptor(format!("free:{k}")));
        }
        Ok(Self::Free(k))
    }

    pub fn identity(&self) -> GroupElement {
        match *self {
            Self::Z => GroupElement::Z(0),
            Self::Zd(d) => GroupElement::Zd(vec![0; d]),
            Self::Dinf => GroupElement::Dinf {
                flip: false,
                shift: 0,
            },
            Self::CmZ2(_) => GroupElement::CmZ2 {
                rot: 0,
                shift: [0, 0],
            },
            Self::Free(_) => GroupElement::Free(Vec::new()),
        }
    }

    pub fn is_identity(&self, g: &GroupElement) -> bool {
        *g == self.identity()
    }

    /// Whether `g` is a well-formed canonical element of this group.
    pub fn contains(&self, g: &GroupElement) -> bool {
        match (self, g) {
            (Self::Z, GroupElement::Z(_)) => true,
            (Self::Zd(d), GroupElement::Zd(v)) => v.len() == *d,
            (Self::Dinf, GroupElement::Dinf { .. }) => true,
            (Self::CmZ2(m), GroupElement::CmZ2 { rot, .. }) => rot < m,
            (Self::Free(k), GroupElement::Free(w)) => {
                w.iter().all(|&l| l != 0 && (l.unsigned_abs() as usize) <= *k)
                    && w.windows(2).all(|p| p[0] != -p[1])
            }
            _ => false,
        }
    }

    pub(crate) fn check(&self, g: &GroupElement) -> Result<(), GroupError> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(GroupError::DescriptorMismatch {
                group: *self,
                element: format!("{g:?}"),
            })
        }
    }

    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(g)?;
        self.check(h)?;
        Ok(match (g, h) {
            (GroupElement::Z(a), GroupElement::Z(b)) => {
                GroupElement::Z(a.checked_add(*b).ok_or(GroupError::Overflow)?)
            }
            (GroupElement::Zd(a), GroupElement::Zd(b)) => GroupElement::Zd(
                a.iter()
                    .zip(b)
                    .map(|(x, y)| x.checked_add(*y).ok_or(GroupError::Overflow))
                    .collect::<Result<_, _>>()?,
            ),
            (
                GroupElement::Dinf { flip: s, shift: n },
                GroupElement::Dinf { flip: t, shift: m },
            ) => {
                let m = if *s { m.checked_neg().ok_or(GroupError::Overflow)? } else { *m };
                GroupElement::Dinf {
                    flip: s ^ t,
                    shift: n.checked_add(m).ok_or(GroupError::Overflow)?,
                }
            }
            (
                GroupElement::CmZ2 { rot: i, shift: v },
                GroupElement::CmZ2 { rot: j, shift: w },
            ) => {
                let Self::CmZ2(m) = *self else { unreachable!() };
                let w = rotate(m, *i, *w)?;
                GroupElement::CmZ2 {
                    rot: (i + j) % m,
                    shift: [
                        v[0].checked_add(w[0]).ok_or(GroupError::Overflow)?,
                        v[1].checked_add(w[1]).ok_or(GroupError::Overflow)?,
                    ],
                }
            }
            (GroupElement::Free(a), GroupElement::Free(b)) => {
                let mut word = a.clone();
                for &l in b {
                    if word.last() == Some(&-l) {
                        word.pop();
                    } else {
                        word.push(l);
                    }
                }
                GroupElement::Free(word)
            }
            _ => unreachable!("checked above"),
        })
    }

    pub fn invert(&self, g: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(g)?;
        Ok(match g {
            GroupElement::Z(a) => GroupElement::Z(a.checked_neg().ok_or(GroupError::Overflow)?),
            GroupElement::Zd(a) => GroupElement::Zd(
                a.iter()
                    .map(|x| x.checked_neg().ok_or(GroupError::Overflow))
                    .collect::<Result<_, _>>()?,
            ),
            GroupElement::Dinf { flip, shift } => GroupElement::Dinf {
                flip: *flip,
                shift: if *flip {
                    *shift
                } else {
                    shift.checked_neg().ok_or(GroupError::Overflow)?
                },
            },
            GroupElement::CmZ2 { rot, shift } => {
                let Self::CmZ2(m) = *self else { unreachable!() };
                let back = (m - rot) % m;
                let w = rotate(m, back, *shift)?;
                GroupElement::CmZ2 {
                    rot: back,
                    shift: [
                        w[0].checked_neg().ok_or(GroupError::Overflow)?,
                        w[1].checked_neg().ok_or(GroupError::Overflow)?,
                    ],
                }
            }
            GroupElement::Free(w) => GroupElement::Free(w.iter().rev().map(|l| -l).collect()),
        })
    }

    /// `g^n` by repeated squaring; negative exponents invert first.
    pub fn power(&self, g: &GroupElement, n: i64) -> Result<GroupElement, GroupError> {
        let mut base = if n < 0 { self.invert(g)? } else { g.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.multiply(&acc, &base)?;
            }
            e >>= 1;
            if e > 0 {
                base = self.multiply(&base, &base)?;
            }
        }
        Ok(acc)
    }

    pub fn conjugate(&self, by: &GroupElement, g: &GroupElement) -> Result<GroupElement, GroupError> {
        let left = self.multiply(by, g)?;
        self.multiply(&left, &self.invert(by)?)
    }

    /// Whether `g` generates an infinite cyclic subgroup.
    pub fn has_infinite_order(&self, g: &GroupElement) -> bool {
        match g {
            GroupElement::Z(a) => *a != 0,
            GroupElement::Zd(v) => v.iter().any(|&x| x != 0),
            GroupElement::Dinf { flip, shift } => !flip && *shift != 0,
            // Nontrivial rotations sum to zero over their period.
            GroupElement::CmZ2 { rot, shift } => *rot == 0 && *shift != [0, 0],
            GroupElement::Free(w) => !w.is_empty(),
        }
    }

    /// The standard generators: unit vectors, the reflection and unit
    /// translation for `Dinf`, rotation and `e1` for `CmZ2`, basis letters for
    /// free groups.
    pub fn standard_generators(&self) -> Vec<GroupElement> {
        match *self {
            Self::Z => vec![GroupElement::Z(1)],
            Self::Zd(d) => (0..d)
                .map(|i| {
                    let mut v = vec![0; d];
                    v[i] = 1;
                    GroupElement::Zd(v)
                })
                .collect(),
            Self::Dinf => vec![
                GroupElement::Dinf {
                    flip: true,
                    shift: 0,
                },
                GroupElement::Dinf {
                    flip: false,
                    shift: 1,
                },
            ],
            Self::CmZ2(_) => vec![
                GroupElement::CmZ2 {
                    rot: 1,
                    shift: [0, 0],
                },
                GroupElement::CmZ2 {
                    rot: 0,
                    shift: [1, 0],
                },
            ],
            Self::Free(k) => (1..=k as i8).map(|l| GroupElement::Free(vec![l])).collect(),
        }
    }
}

/// Applies `θ^i` to `v`, where `θ` is rotation by `2π/m`.
pub(crate) fn rotate(m: u8, i: u8, v: [i64; 2]) -> Result<[i64; 2], GroupError> {
    let neg = |x: i64| x.checked_neg().ok_or(GroupError::Overflow);
    let [a, b] = v;
    match (m, i % m) {
        (_, 0) => Ok(v),
        (2, 1) | (4, 2) => Ok([neg(a)?, neg(b)?]),
        (4, 1) => Ok([neg(b)?, a]),
        (4, 3) => Ok([b, neg(a)?]),
        _ => unreachable!("rotation order is 2 or 4"),
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Z => write!(f, "z"),
            Self::Zd(d) => write!(f, "zd:{d}"),
            Self::Dinf => write!(f, "dinf"),
            Self::CmZ2(m) => write!(f, "cmz2:{m}"),
            Self::Free(k) => write!(f, "free:{k}"),
        }
    }
}

impl FromStr for GroupDescriptor {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GroupError::InvalidDescriptor(s.to_string());
        let s_l = s.trim().to_ascii_lowercase();
        let (head, arg) = match s_l.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s_l.as_str(), None),
        };
        let num = |a: Option<&str>| a.and_then(|a| a.parse::<usize>().ok()).ok_or_else(bad);
        match head {
            "z" if arg.is_none() => Ok(Self::Z),
            "dinf" if arg.is_none() => Ok(Self::Dinf),
            "zd" => Self::zd(num(arg)?),
            "cmz2" => Self::cmz2(u8::try_from(num(arg)?).map_err(|_| bad())?),
            "free" => Self::free(num(arg)?),
            _ => Err(bad()),
        }
    }
}

fn letter_char(l: i8) -> char {
    let base = if l > 0 { b'a' } else { b'A' };
    (base + (l.unsigned_abs() - 1)) as char
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Z(n) => write!(f, "{n}"),
            Self::Zd(v) => {
                write!(f, "(")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            Self::Dinf { flip, shift } => write!(f, "(s^{},{shift})", u8::from(*flip)),
            Self::CmZ2 { rot, shift } => write!(f, "(t^{rot},({},{}))", shift[0], shift[1]),
            Self::Free(w) if w.is_empty() => write!(f, "1"),
            Self::Free(w) => {
                for &l in w {
                    write!(f, "{}", letter_char(l))?;
                }
                Ok(())
            }
        }
    }
}

/// Splits on commas that are not nested inside parentheses.
pub(crate) fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(s[start..].trim());
    parts
}

impl GroupDescriptor {
    /// Parses the canonical printed form of an element.
    ///
    /// * `z`: `-3`
    /// * `zd:d`: `(2,-3)`
    /// * `dinf`: `(s^1,5)`
    /// * `cmz2:m`: `(t^1,(2,-3))`
    /// * `free:k`: `aB` (uppercase letters are inverses, `1` is the identity)
    ///
    /// Free words are reduced after parsing.
    pub fn parse_element(&self, input: &str) -> Result<GroupElement, GroupError> {
        let s = input.trim();
        let err = |reason: &str| GroupError::Parse {
            group: *self,
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let int = |t: &str| t.trim().parse::<i64>().map_err(|_| err("expected an integer"));
        let inner = |t: &str| -> Result<String, GroupError> {
            t.strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .map(str::to_string)
                .ok_or_else(|| err("expected a parenthesised tuple"))
        };
        let g = match *self {
            Self::Z => GroupElement::Z(int(s)?),
            Self::Zd(d) => {
                let body = inner(s)?;
                let v = split_top_level(&body)
                    .into_iter()
                    .map(int)
                    .collect::<Result<Vec<_>, _>>()?;
                if v.len() != d {
                    return Err(err("wrong number of coordinates"));
                }
                GroupElement::Zd(v)
            }
            Self::Dinf => {
                let body = inner(s)?;
                let parts = split_top_level(&body);
                let [a, b] = parts.as_slice() else {
                    return Err(err("expected (s^b,n)"));
                };
                let bit = a.strip_prefix("s^").ok_or_else(|| err("expected s^0 or s^1"))?;
                let flip = match bit.trim() {
                    "0" => false,
                    "1" => true,
                    _ => return Err(err("reflection exponent must be 0 or 1")),
                };
                GroupElement::Dinf {
                    flip,
                    shift: int(b)?,
                }
            }
            Self::CmZ2(m) => {
                let body = inner(s)?;
                let parts = split_top_level(&body);
                let [a, b] = parts.as_slice() else {
                    return Err(err("expected (t^i,(a,b))"));
                };
                let i = a.strip_prefix("t^").ok_or_else(|| err("expected t^i"))?;
                let i = int(i)?.rem_euclid(i64::from(m)) as u8;
                let vb = inner(b)?;
                let v = split_top_level(&vb)
                    .into_iter()
                    .map(int)
                    .collect::<Result<Vec<_>, _>>()?;
                let [x, y] = v.as_slice() else {
                    return Err(err("translation part must have two coordinates"));
                };
                GroupElement::CmZ2 {
                    rot: i,
                    shift: [*x, *y],
                }
            }
            Self::Free(k) => {
                if s == "1" {
                    return Ok(self.identity());
                }
                let mut word = GroupElement::Free(Vec::new());
                for c in s.chars() {
                    let l = if c.is_ascii_lowercase() {
                        (c as u8 - b'a' + 1) as i8
                    } else if c.is_ascii_uppercase() {
                        -((c as u8 - b'A' + 1) as i8)
                    } else {
                        return Err(err("free words use letters a.. and inverses A.."));
                    };
                    if l.unsigned_abs() as usize > k {
                        return Err(err("letter outside the free basis"));
                    }
                    word = self.multiply(&word, &GroupElement::Free(vec![l]))?;
                }
                word
            }
        };
        self.check(&g)?;
        Ok(g)
    }

    /// Parses one generator expression: a `*`-separated product of factors,
    /// each an optional `-` (inverse), an atom, and an optional `^k` power.
    ///
    /// Atoms are canonical element literals plus the names
    /// `t` (rotation for `cmz2`, unit translation for `dinf`), `s` (the
    /// reflection of `dinf`), `e1..ed` (unit vectors) and bare integers on `z`.
    pub fn parse_generator(&self, input: &str) -> Result<GroupElement, GroupError> {
        let err = |reason: &str| GroupError::Parse {
            group: *self,
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let mut acc = self.identity();
        for factor in split_products(input.trim()) {
            let mut f = factor.trim();
            if f.is_empty() {
                return Err(err("empty factor"));
            }
            let mut inverse = false;
            // `-3` on z is a literal, not an inverse marker.
            if *self != Self::Z {
                if let Some(rest) = f.strip_prefix('-') {
                    inverse = true;
                    f = rest;
                }
            }
            let (atom, exp) = match f.rfind('^') {
                Some(pos) if !f[pos..].contains(')') => {
                    let e = f[pos + 1..]
                        .trim()
                        .parse::<i64>()
                        .map_err(|_| err("bad exponent"))?;
                    (&f[..pos], e)
                }
                _ => (f, 1),
            };
            let base = self.parse_atom(atom.trim()).map_err(|_| err("unknown atom"))?;
            let mut value = self.power(&base, exp)?;
            if inverse {
                value = self.invert(&value)?;
            }
            acc = self.multiply(&acc, &value)?;
        }
        Ok(acc)
    }

    fn parse_atom(&self, atom: &str) -> Result<GroupElement, GroupError> {
        let unit = |i: usize, d: usize| {
            let mut v = vec![0; d];
            v[i] = 1;
            v
        };
        let named = match (*self, atom) {
            (Self::CmZ2(_), "t") => Some(GroupElement::CmZ2 {
                rot: 1,
                shift: [0, 0],
            }),
            (Self::CmZ2(_), "e1") => Some(GroupElement::CmZ2 {
                rot: 0,
                shift: [1, 0],
            }),
            (Self::CmZ2(_), "e2") => Some(GroupElement::CmZ2 {
                rot: 0,
                shift: [0, 1],
            }),
            (Self::Dinf, "s") => Some(GroupElement::Dinf {
                flip: true,
                shift: 0,
            }),
            (Self::Dinf, "t") => Some(GroupElement::Dinf {
                flip: false,
                shift: 1,
            }),
            (Self::Z, "t") | (Self::Z, "e1") => Some(GroupElement::Z(1)),
            (Self::Zd(d), a) => a
                .strip_prefix('e')
                .and_then(|i| i.parse::<usize>().ok())
                .filter(|&i| (1..=d).contains(&i))
                .map(|i| GroupElement::Zd(unit(i - 1, d))),
            _ => None,
        };
        match named {
            Some(g) => Ok(g),
            None => self.parse_element(atom),
        }
    }
}

fn split_products(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '*' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

/// Integer lattice in Hermite normal form, used for span and membership
/// tests on translation subgroups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Lattice {
    dim: usize,
    /// Echelon rows with strictly increasing pivot columns and positive pivots.
    rows: Vec<Vec<i128>>,
}

impl Lattice {
    pub(crate) fn from_generators(dim: usize, gens: &[Vec<i64>]) -> Self {
        let mut rows: Vec<Vec<i128>> = gens
            .iter()
            .map(|g| g.iter().map(|&x| i128::from(x)).collect())
            .filter(|r: &Vec<i128>| r.iter().any(|&x| x != 0))
            .collect();
        let mut basis = Vec::new();
        for col in 0..dim {
            loop {
                rows.retain(|r| r.iter().any(|&x| x != 0));
                let Some(pivot_idx) = rows
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| r[col] != 0)
                    .min_by_key(|(_, r)| r[col].abs())
                    .map(|(i, _)| i)
                else {
                    break;
                };
                let pivot = rows.swap_remove(pivot_idx);
                let mut done = true;
                for r in rows.iter_mut() {
                    if r[col] != 0 {
                        let q = r[col].div_euclid(pivot[col]);
                        for (x, p) in r.iter_mut().zip(&pivot) {
                            *x -= q * p;
                        }
                        if r[col] != 0 {
                            done = false;
                        }
                    }
                }
                if done {
                    let mut pivot = pivot;
                    if pivot[col] < 0 {
                        pivot.iter_mut().for_each(|x| *x = -*x);
                    }
                    basis.push(pivot);
                    break;
                }
                rows.push(pivot);
            }
        }
        Lattice { dim, rows: basis }
    }

    pub(crate) fn is_full(&self) -> bool {
        self.rows.len() == self.dim
            && self
                .rows
                .iter()
                .all(|r| r.iter().find(|&&x| x != 0) == Some(&1))
    }

    pub(crate) fn contains(&self, v: &[i64]) -> bool {
        let mut v: Vec<i128> = v.iter().map(|&x| i128::from(x)).collect();
        for row in &self.rows {
            let col = row.iter().position(|&x| x != 0).expect("nonzero row");
            if v[..col].iter().any(|&x| x != 0) {
                return false;
            }
            if v[col] % row[col] != 0 {
                return false;
            }
            let q = v[col] / row[col];
            for (x, r) in v.iter_mut().zip(row) {
                *x -= q * r;
            }
        }
        v.iter().all(|&x| x == 0)
    }
}

/// What the subgroup generated by a set looks like, computed exactly.
#[derive(Clone, Debug)]
enum Span {
    Lattice(Lattice),
    /// Semidirect families: one transversal representative per rotation class
    /// (None when the class is not reached) and the translation subgroup,
    /// obtained from Schreier generators.
    Semidirect {
        reps: Vec<Option<GroupElement>>,
        kernel: Lattice,
    },
    /// Free subgroup generated by a set of basis letters.
    FreeLetters(Vec<bool>),
}

/// A symmetric, identity-free, deduplicated generating set.
#[derive(Clone, Debug)]
pub struct GeneratingSet {
    group: GroupDescriptor,
    elements: Vec<GroupElement>,
    symmetric: bool,
    span: Span,
}

impl PartialEq for GeneratingSet {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.elements == other.elements
    }
}

/// Closes `gens` under inversion, drops the identity and sorts by canonical key.
pub fn symmetric_closure(
    group: GroupDescriptor,
    gens: &[GroupElement],
) -> Result<GeneratingSet, GroupError> {
    let mut set = BTreeSet::new();
    for g in gens {
        group.check(g)?;
        if group.is_identity(g) {
            continue;
        }
        set.insert(group.invert(g)?);
        set.insert(g.clone());
    }
    if set.is_empty() {
        return Err(GroupError::EmptyGeneratingSet);
    }
    let elements: Vec<_> = set.into_iter().collect();
    let span = compute_span(group, &elements)?;
    Ok(GeneratingSet {
        group,
        elements,
        symmetric: true,
        span,
    })
}

fn semidirect_parts(g: &GroupElement) -> (usize, Vec<i64>) {
    match g {
        GroupElement::Dinf { flip, shift } => (usize::from(*flip), vec![*shift]),
        GroupElement::CmZ2 { rot, shift } => (usize::from(*rot), shift.to_vec()),
        _ => unreachable!("not a semidirect element"),
    }
}

fn compute_span(group: GroupDescriptor, elements: &[GroupElement]) -> Result<Span, GroupError> {
    match group {
        GroupDescriptor::Z | GroupDescriptor::Zd(_) => {
            let (dim, vecs): (usize, Vec<Vec<i64>>) = match group {
                GroupDescriptor::Z => (
                    1,
                    elements
                        .iter()
                        .map(|g| match g {
                            GroupElement::Z(n) => vec![*n],
                            _ => unreachable!(),
                        })
                        .collect(),
                ),
                GroupDescriptor::Zd(d) => (
                    d,
                    elements
                        .iter()
                        .map(|g| match g {
                            GroupElement::Zd(v) => v.clone(),
                            _ => unreachable!(),
                        })
                        .collect(),
                ),
                _ => unreachable!(),
            };
            Ok(Span::Lattice(Lattice::from_generators(dim, &vecs)))
        }
        GroupDescriptor::Dinf | GroupDescriptor::CmZ2(_) => {
            let (classes, dim) = match group {
                GroupDescriptor::Dinf => (2, 1),
                GroupDescriptor::CmZ2(m) => (usize::from(m), 2),
                _ => unreachable!(),
            };
            let mut reps: Vec<Option<GroupElement>> = vec![None; classes];
            reps[0] = Some(group.identity());
            let mut queue = vec![0usize];
            while let Some(c) = queue.pop() {
                let h = reps[c].clone().expect("queued classes have reps");
                for s in elements {
                    let next = group.multiply(&h, s)?;
                    let (c2, _) = semidirect_parts(&next);
                    if reps[c2].is_none() {
                        reps[c2] = Some(next);
                        queue.push(c2);
                    }
                }
            }
            let mut schreier = Vec::new();
            for h in reps.iter().flatten() {
                for s in elements {
                    let hs = group.multiply(h, s)?;
                    let (c2, _) = semidirect_parts(&hs);
                    let back = reps[c2].as_ref().expect("closed under generators");
                    let k = group.multiply(&hs, &group.invert(back)?)?;
                    schreier.push(semidirect_parts(&k).1);
                }
            }
            Ok(Span::Semidirect {
                reps,
                kernel: Lattice::from_generators(dim, &schreier),
            })
        }
        GroupDescriptor::Free(k) => {
            let mut letters = vec![false; k];
            let mut all_single = true;
            for g in elements {
                match g {
                    GroupElement::Free(w) if w.len() == 1 => {
                        letters[w[0].unsigned_abs() as usize - 1] = true;
                    }
                    _ => all_single = false,
                }
            }
            if !all_single && !letters.iter().all(|&b| b) {
                return Err(GroupError::UnsupportedFreeGenerators);
            }
            Ok(Span::FreeLetters(letters))
        }
    }
}

impl GeneratingSet {
    pub fn group(&self) -> GroupDescriptor {
        self.group
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Whether the set generates the whole group.
    pub fn generates_group(&self) -> bool {
        match &self.span {
            Span::Lattice(l) => l.is_full(),
            Span::Semidirect { reps, kernel } => reps.iter().all(Option::is_some) && kernel.is_full(),
            Span::FreeLetters(letters) => letters.iter().all(|&b| b),
        }
    }

    /// Exact membership in the generated subgroup.
    pub fn spans(&self, x: &GroupElement) -> bool {
        if !self.group.contains(x) {
            return false;
        }
        match (&self.span, x) {
            (Span::Lattice(l), GroupElement::Z(n)) => l.contains(&[*n]),
            (Span::Lattice(l), GroupElement::Zd(v)) => l.contains(v),
            (Span::Semidirect { reps, kernel }, _) => {
                let (c, _) = semidirect_parts(x);
                let Some(rep) = &reps[c] else {
                    return false;
                };
                let Ok(inv) = self.group.invert(rep) else {
                    return false;
                };
                match self.group.multiply(x, &inv) {
                    Ok(k) => kernel.contains(&semidirect_parts(&k).1),
                    Err(_) => false,
                }
            }
            (Span::FreeLetters(letters), GroupElement::Free(w)) => {
                w.iter().all(|l| letters[l.unsigned_abs() as usize - 1])
            }
            _ => false,
        }
    }

    /// Parses a comma-separated generator list (see
    /// [`GroupDescriptor::parse_generator`]); `std` expands to the standard
    /// generators.
    pub fn parse(group: GroupDescriptor, s: &str) -> Result<GeneratingSet, GroupError> {
        let mut gens = Vec::new();
        for item in split_top_level(s) {
            if item == "std" {
                gens.extend(group.standard_generators());
            } else {
                gens.push(group.parse_generator(item)?);
            }
        }
        symmetric_closure(group, &gens)
    }
}
