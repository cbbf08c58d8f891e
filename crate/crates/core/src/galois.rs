//! Subgroups of `(Z/mZ)*`, Γ-conjugacy classes, and power-closed sets.
//!
//! A subfield `K` of `Q(η_m)` is never represented directly; it is named by
//! the subgroup `Γ_K` of units fixing it.

use std::collections::{BTreeSet, VecDeque};

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::group::{ClassData, Group};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GaloisError {
    #[error("generator {t} is not coprime to {m}")]
    NotAUnit { t: i64, m: u64 },
    #[error("Galois subgroup lives modulo {gamma} but the group exponent is {exponent}")]
    ConductorMismatch { gamma: u64, exponent: u64 },
}

/// A subgroup of `(Z/mZ)*`. For `m = 1` the single residue is written `1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GaloisSubgroup {
    m: u64,
    generators: Vec<u64>,
    elements: Vec<u64>,
}

fn residue(t: i64, m: u64) -> u64 {
    if m == 1 {
        1
    } else {
        t.rem_euclid(m as i64) as u64
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    if m == 1 {
        1
    } else {
        a * b % m
    }
}

/// The full unit group, i.e. `Γ_Q`.
pub fn unit_group(m: u64) -> GaloisSubgroup {
    assert!(m >= 1);
    let elements: Vec<u64> = if m == 1 {
        vec![1]
    } else {
        (1..m).filter(|t| t.gcd(&m) == 1).collect()
    };
    GaloisSubgroup {
        m,
        generators: elements.clone(),
        elements,
    }
}

/// The trivial subgroup `{1}`, i.e. `Γ_{Q(m)}`.
pub fn trivial_subgroup(m: u64) -> GaloisSubgroup {
    GaloisSubgroup {
        m,
        generators: vec![1],
        elements: vec![1],
    }
}

/// Multiplicative closure of `gens` modulo `m`.
pub fn subgroup_closure(m: u64, gens: &[i64]) -> Result<GaloisSubgroup, GaloisError> {
    assert!(m >= 1);
    let mut generators = Vec::with_capacity(gens.len());
    for &t in gens {
        if t.gcd(&(m as i64)) != 1 {
            return Err(GaloisError::NotAUnit { t, m });
        }
        generators.push(residue(t, m));
    }
    if generators.is_empty() {
        generators.push(1);
    }
    let mut seen: BTreeSet<u64> = BTreeSet::from([1]);
    let mut queue = VecDeque::from([1u64]);
    while let Some(x) = queue.pop_front() {
        for &g in &generators {
            let y = mul_mod(x, g, m);
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    Ok(GaloisSubgroup {
        m,
        generators,
        elements: seen.into_iter().collect(),
    })
}

impl GaloisSubgroup {
    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, t: i64) -> bool {
        self.elements.binary_search(&residue(t, self.m)).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &GaloisSubgroup) -> bool {
        self.m == other.m && self.elements.iter().all(|&t| other.contains(t as i64))
    }

    /// Same subgroup with a minimal-looking generating set: greedily keeps
    /// generators that enlarge the closure.
    pub fn simplified(&self) -> GaloisSubgroup {
        let mut gens: Vec<i64> = Vec::new();
        let mut current = trivial_subgroup(self.m);
        for &t in &self.elements {
            if !current.contains(t as i64) {
                gens.push(t as i64);
                current = subgroup_closure(self.m, &gens).expect("elements are units");
            }
        }
        if gens.is_empty() {
            return trivial_subgroup(self.m);
        }
        current
    }
}

/// Every subgroup of `(Z/mZ)*`, built by adjoining one unit at a time to
/// the subgroups found so far. Sorted by order, then element list.
pub fn all_subgroups(m: u64) -> Vec<GaloisSubgroup> {
    let units = unit_group(m);
    let mut found: Vec<GaloisSubgroup> = vec![trivial_subgroup(m)];
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::from([vec![1]]);
    let mut head = 0;
    while head < found.len() {
        let base = found[head].clone();
        for &u in units.elements() {
            if base.contains(u as i64) {
                continue;
            }
            let mut gens: Vec<i64> = base.generators.iter().map(|&g| g as i64).collect();
            gens.push(u as i64);
            let h = subgroup_closure(m, &gens).expect("units");
            if seen.insert(h.elements.clone()) {
                found.push(h);
            }
        }
        head += 1;
    }
    found.sort_by(|a, b| (a.order(), &a.elements).cmp(&(b.order(), &b.elements)));
    found.into_iter().map(|h| h.simplified()).collect()
}

/// The distinct cyclic subgroups `<t>`, `t` a unit, in order of first
/// generator.
pub fn cyclic_subgroups(m: u64) -> Vec<GaloisSubgroup> {
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut out = Vec::new();
    for &t in unit_group(m).elements() {
        let h = subgroup_closure(m, &[t as i64]).expect("units");
        if seen.insert(h.elements.clone()) {
            out.push(h);
        }
    }
    out
}

/// Partition of the group into Γ-conjugacy classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaClassification {
    /// Element sets, ordered by least member.
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    /// The ordinary class indices making up each Γ-class.
    class_groups: Vec<Vec<usize>>,
    gamma_of_class: Vec<usize>,
}

impl GammaClassification {
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g]
    }

    pub fn class_groups(&self) -> &[Vec<usize>] {
        &self.class_groups
    }

    /// Γ-class index of the ordinary class `j`.
    pub fn gamma_class_of_class(&self, j: usize) -> usize {
        self.gamma_of_class[j]
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Whether the union of ordinary classes `class_set` is a union of
    /// Γ-classes.
    pub fn is_union(&self, class_set: &[usize]) -> bool {
        let set: BTreeSet<usize> = class_set.iter().copied().collect();
        set.iter().all(|&j| {
            self.class_groups[self.gamma_of_class[j]]
                .iter()
                .all(|c| set.contains(c))
        })
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.0[root] != root {
            root = self.0[root];
        }
        let mut x = x;
        while self.0[x] != root {
            let next = self.0[x];
            self.0[x] = root;
            x = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Joins ordinary classes `j` and `power_class(j, t)` for each generator
/// `t` of Γ.
pub fn gamma_conjugacy_classes(
    g: &Group,
    cd: &ClassData,
    gamma: &GaloisSubgroup,
) -> Result<GammaClassification, GaloisError> {
    if gamma.m != g.exponent() {
        return Err(GaloisError::ConductorMismatch {
            gamma: gamma.m,
            exponent: g.exponent(),
        });
    }
    let k = cd.num_classes();
    let mut uf = UnionFind((0..k).collect());
    for j in 0..k {
        for &t in &gamma.generators {
            uf.union(j, cd.power_class(j, t as i64));
        }
    }
    let mut root_to_gamma = vec![usize::MAX; k];
    let mut class_groups: Vec<Vec<usize>> = Vec::new();
    let mut gamma_of_class = vec![0; k];
    // class indices are ordered by least element, so iterating j in order
    // numbers Γ-classes by least element too
    for j in 0..k {
        let r = uf.find(j);
        if root_to_gamma[r] == usize::MAX {
            root_to_gamma[r] = class_groups.len();
            class_groups.push(Vec::new());
        }
        gamma_of_class[j] = root_to_gamma[r];
        class_groups[root_to_gamma[r]].push(j);
    }
    let classes: Vec<Vec<usize>> = class_groups
        .iter()
        .map(|group| {
            let mut els: Vec<usize> = group.iter().flat_map(|&j| cd.class(j).iter().copied()).collect();
            els.sort_unstable();
            els
        })
        .collect();
    let class_of = (0..g.order()).map(|x| gamma_of_class[cd.class_of(x)]).collect();
    Ok(GammaClassification {
        classes,
        class_of,
        class_groups,
        gamma_of_class,
    })
}

fn membership(elements: &[usize], n: usize) -> Vec<bool> {
    let mut mask = vec![false; n];
    for &x in elements {
        mask[x] = true;
    }
    mask
}

/// First `(x, y)` with `x ∈ C`, `<y> = <x>` and `y ∉ C`, if any.
pub fn power_closure_violation(elements: &[usize], g: &Group) -> Option<(usize, usize)> {
    let inside = membership(elements, g.order());
    for &x in elements {
        let order = g.element_order(x);
        for t in (1..order).filter(|t| t.gcd(&order) == 1) {
            let y = g.power_of(x, t as i64);
            if !inside[y] {
                return Some((x, y));
            }
        }
    }
    None
}

/// `x^t ∈ C` for every `x ∈ C` and every `t` coprime to `|x|`.
pub fn is_power_closed(elements: &[usize], g: &Group) -> bool {
    power_closure_violation(elements, g).is_none()
}

/// Smallest power-closed superset, sorted.
pub fn power_closure(elements: &[usize], g: &Group) -> Vec<usize> {
    let mut inside = membership(elements, g.order());
    let mut queue: VecDeque<usize> = elements.iter().copied().collect();
    while let Some(x) = queue.pop_front() {
        let order = g.element_order(x);
        for t in (1..order).filter(|t| t.gcd(&order) == 1) {
            let y = g.power_of(x, t as i64);
            if !inside[y] {
                inside[y] = true;
                queue.push_back(y);
            }
        }
    }
    (0..g.order()).filter(|&x| inside[x]).collect()
}

/// Both sides of the power-closed / rational-class-union equivalence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Lemma1Report {
    pub power_closed: bool,
    pub union_of_rational_classes: bool,
    pub agree: bool,
}

/// Evaluates "power-closed" element-wise and "union of `Γ_Q`-classes" on
/// class orbits, for `C` given as ordinary class indices.
pub fn check_lemma1(g: &Group, cd: &ClassData, class_set: &[usize]) -> Lemma1Report {
    let elements: Vec<usize> = class_set.iter().flat_map(|&j| cd.class(j).iter().copied()).collect();
    let power_closed = is_power_closed(&elements, g);
    let rational = gamma_conjugacy_classes(g, cd, &unit_group(g.exponent())).expect("matching conductor");
    let union_of_rational_classes = rational.is_union(class_set);
    Lemma1Report {
        power_closed,
        union_of_rational_classes,
        agree: power_closed == union_of_rational_classes,
    }
}
