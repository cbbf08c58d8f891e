//! Finite groups as explicit multiplication tables.
//!
//! Every group is realised as a permutation group (named families use a
//! faithful permutation representation) and closed breadth-first from the
//! identity. After construction only the Cayley table is used; the
//! permutations are kept for display.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use serde_json::Value;
use thiserror::Error;

/// Default cap on the number of group elements.
pub const DEFAULT_SIZE_CAP: usize = 5040;

/// Largest degree accepted for `symmetric(n)` and `alternating(n)`.
pub const MAX_SYMMETRIC_DEGREE: u64 = 7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group has more than {cap} elements")]
    SizeCapExceeded { cap: usize },
    #[error("malformed cycle notation `{input}`: {reason}")]
    MalformedCycle { input: String, reason: String },
    #[error("unknown group family `{0}`")]
    UnknownFamily(String),
    #[error("invalid parameters for {family}: {reason}")]
    BadParameter { family: String, reason: String },
    #[error("malformed group spec: {0}")]
    MalformedSpec(String),
    #[error("element index {index} out of range for group of order {order}")]
    ElementOutOfRange { index: usize, order: usize },
}

/// A permutation of `{0, .., d-1}`, stored as its image list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self, GroupError> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            let x = x as usize;
            if x >= images.len() || seen[x] {
                return Err(GroupError::MalformedCycle {
                    input: format!("{images:?}"),
                    reason: "image list is not a bijection".into(),
                });
            }
            seen[x] = true;
        }
        Ok(Permutation(images))
    }

    /// Parses disjoint cycle notation on positive integers, e.g. `(1 2)(3 4 5)`.
    /// Commas are accepted as separators. `()` is the identity. The degree is
    /// grown to `degree` if the cycles mention fewer points.
    pub fn parse_cycles(input: &str, degree: usize) -> Result<Self, GroupError> {
        let cycles = parse_cycle_list(input)?;
        let max_point = cycles.iter().flatten().copied().max().unwrap_or(0) as usize;
        let mut images: Vec<u32> = (0..degree.max(max_point) as u32).collect();
        let mut moved = vec![false; images.len()];
        for cycle in &cycles {
            for (pos, &point) in cycle.iter().enumerate() {
                let src = (point - 1) as usize;
                if moved[src] {
                    return Err(GroupError::MalformedCycle {
                        input: input.to_string(),
                        reason: format!("point {point} appears twice"),
                    });
                }
                moved[src] = true;
                images[src] = cycle[(pos + 1) % cycle.len()] - 1;
            }
        }
        Ok(Permutation(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Left-to-right product: the image of `x` under `self * other` is
    /// `other(self(x))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    fn extend_to(&self, degree: usize) -> Permutation {
        let mut images = self.0.clone();
        images.extend(self.0.len() as u32..degree as u32);
        Permutation(images)
    }

    fn shifted(&self, offset: usize, degree: usize) -> Permutation {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for (i, &x) in self.0.iter().enumerate() {
            images[i + offset] = x + offset as u32;
        }
        Permutation(images)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.0.len()];
        let mut wrote = false;
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            write!(f, "(")?;
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}", x + 1)?;
                first = false;
                x = self.0[x] as usize;
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

fn parse_cycle_list(input: &str) -> Result<Vec<Vec<u32>>, GroupError> {
    let malformed = |reason: &str| GroupError::MalformedCycle {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    let mut cycles = Vec::new();
    let mut rest = input.trim();
    while !rest.is_empty() {
        if !rest.starts_with('(') {
            return Err(malformed("expected `(`"));
        }
        let close = rest.find(')').ok_or_else(|| malformed("unclosed `(`"))?;
        let body = &rest[1..close];
        let mut cycle = Vec::new();
        for token in body.split(|c: char| c == ',' || c.is_whitespace()) {
            if token.is_empty() {
                continue;
            }
            let point: u32 = token
                .parse()
                .map_err(|_| malformed(&format!("`{token}` is not a positive integer")))?;
            if point == 0 {
                return Err(malformed("points are numbered from 1"));
            }
            if cycle.contains(&point) {
                return Err(malformed(&format!("point {point} repeated in a cycle")));
            }
            cycle.push(point);
        }
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
        rest = rest[close + 1..].trim_start();
    }
    Ok(cycles)
}

/// A named group family with its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Cyclic(u64),
    /// Dihedral group of order `2n`.
    Dihedral(u64),
    Symmetric(u64),
    Alternating(u64),
    /// Generalised quaternion group of the given order (a power of two, at
    /// least 8). `quaternion(8)` is the order-8 member.
    Quaternion(u64),
    ElementaryAbelian {
        p: u64,
        k: u64,
    },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Cyclic(n) => write!(f, "cyclic({n})"),
            Family::Dihedral(n) => write!(f, "dihedral({n})"),
            Family::Symmetric(n) => write!(f, "symmetric({n})"),
            Family::Alternating(n) => write!(f, "alternating({n})"),
            Family::Quaternion(8) => write!(f, "quaternion(8)"),
            Family::Quaternion(n) => write!(f, "generalized-quaternion({n})"),
            Family::ElementaryAbelian { p, k } => write!(f, "elementary-abelian({p},{k})"),
        }
    }
}

impl Family {
    pub fn from_name(name: &str, params: &[u64]) -> Result<Family, GroupError> {
        let bad = |reason: &str| GroupError::BadParameter {
            family: name.to_string(),
            reason: reason.to_string(),
        };
        let one = || match params {
            [n] => Ok(*n),
            _ => Err(bad("expected exactly one parameter")),
        };
        let family = match name {
            "cyclic" => Family::Cyclic(one()?),
            "dihedral" => Family::Dihedral(one()?),
            "symmetric" => Family::Symmetric(one()?),
            "alternating" => Family::Alternating(one()?),
            "quaternion" => {
                let n = one()?;
                if n != 8 {
                    return Err(bad(
                        "quaternion is only defined for order 8; use generalized-quaternion",
                    ));
                }
                Family::Quaternion(8)
            }
            "generalized-quaternion" => Family::Quaternion(one()?),
            "elementary-abelian" => match params {
                [p, k] => Family::ElementaryAbelian { p: *p, k: *k },
                _ => return Err(bad("expected parameters (p, k)")),
            },
            other => return Err(GroupError::UnknownFamily(other.to_string())),
        };
        family.validate()?;
        Ok(family)
    }

    fn validate(&self) -> Result<(), GroupError> {
        let bad = |reason: String| GroupError::BadParameter {
            family: self.to_string(),
            reason,
        };
        match *self {
            Family::Cyclic(n) | Family::Dihedral(n) if n == 0 => Err(bad("parameter must be positive".into())),
            Family::Symmetric(n) | Family::Alternating(n) if n == 0 || n > MAX_SYMMETRIC_DEGREE => {
                Err(bad(format!("degree must lie in 1..={MAX_SYMMETRIC_DEGREE}")))
            }
            Family::Quaternion(n) if n < 8 || !n.is_power_of_two() => {
                Err(bad("order must be a power of two, at least 8".into()))
            }
            Family::ElementaryAbelian { p, .. } if !is_prime(p) => Err(bad(format!("{p} is not prime"))),
            _ => Ok(()),
        }
    }

    /// Faithful permutation generators for the family.
    fn generators(&self) -> Vec<Permutation> {
        match *self {
            Family::Cyclic(n) => {
                let n = n as u32;
                if n == 1 {
                    return vec![Permutation::identity(1)];
                }
                vec![Permutation((0..n).map(|i| (i + 1) % n).collect())]
            }
            Family::Dihedral(n) => {
                // Left regular action on r^i s^j, stored at index i + n*j.
                let n = n as u32;
                let idx = |i: u32, j: u32| (i % n + n * (j % 2)) as usize;
                let mut rot = vec![0; 2 * n as usize];
                let mut refl = vec![0; 2 * n as usize];
                for j in 0..2 {
                    for i in 0..n {
                        rot[idx(i, j)] = idx(i + 1, j) as u32;
                        // s r^i s^j = r^{-i} s^{j+1}
                        refl[idx(i, j)] = idx(n - i, j + 1) as u32;
                    }
                }
                vec![Permutation(rot), Permutation(refl)]
            }
            Family::Quaternion(order) => {
                // Left regular action on a^i b^j with a of order 2h, b^2 = a^h,
                // b a b^-1 = a^-1.
                let two_h = (order / 2) as u32;
                let h = two_h / 2;
                let idx = |i: u32, j: u32| (i % two_h + two_h * j) as usize;
                let mut a = vec![0; order as usize];
                let mut b = vec![0; order as usize];
                for i in 0..two_h {
                    a[idx(i, 0)] = idx(i + 1, 0) as u32;
                    a[idx(i, 1)] = idx(i + 1, 1) as u32;
                    // b a^i = a^{-i} b
                    b[idx(i, 0)] = idx(two_h - i, 1) as u32;
                    b[idx(i, 1)] = idx(two_h - i + h, 0) as u32;
                }
                vec![Permutation(a), Permutation(b)]
            }
            Family::Symmetric(n) => {
                let n = n as u32;
                if n == 1 {
                    return vec![Permutation::identity(1)];
                }
                let mut transposition: Vec<u32> = (0..n).collect();
                transposition.swap(0, 1);
                let long: Vec<u32> = (0..n).map(|i| (i + 1) % n).collect();
                vec![Permutation(transposition), Permutation(long)]
            }
            Family::Alternating(n) => {
                let n = n as u32;
                if n < 3 {
                    return vec![Permutation::identity(n as usize)];
                }
                (2..n)
                    .map(|c| {
                        let mut images: Vec<u32> = (0..n).collect();
                        images[0] = 1;
                        images[1] = c;
                        images[c as usize] = 0;
                        Permutation(images)
                    })
                    .collect()
            }
            Family::ElementaryAbelian { p, k } => {
                let factor = Family::Cyclic(p).generators();
                let mut gens: Vec<Permutation> = Vec::new();
                let mut degree = 0;
                for _ in 0..k {
                    let (g, d) = product_generators(&gens, degree, &factor, p as usize);
                    gens = g;
                    degree = d;
                }
                if gens.is_empty() {
                    gens.push(Permutation::identity(1));
                }
                gens
            }
        }
    }
}

fn product_generators(
    left: &[Permutation],
    left_degree: usize,
    right: &[Permutation],
    right_degree: usize,
) -> (Vec<Permutation>, usize) {
    let degree = left_degree + right_degree;
    let mut gens: Vec<Permutation> = left.iter().map(|g| g.extend_to(degree)).collect();
    gens.extend(right.iter().map(|g| g.shifted(left_degree, degree)));
    (gens, degree)
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Description of a group to build.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    /// Generators in disjoint cycle notation on a common domain `{1..d}`.
    Permutations(Vec<String>),
    Named(Family),
    DirectProduct(Box<GroupSpec>, Box<GroupSpec>),
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Permutations(gens) => write!(f, "<{}>", gens.join(", ")),
            GroupSpec::Named(family) => write!(f, "{family}"),
            GroupSpec::DirectProduct(a, b) => write!(f, "{a} x {b}"),
        }
    }
}

impl GroupSpec {
    pub fn named(family: Family) -> Self {
        GroupSpec::Named(family)
    }

    pub fn product(a: GroupSpec, b: GroupSpec) -> Self {
        GroupSpec::DirectProduct(Box::new(a), Box::new(b))
    }

    /// Parses the string shorthand: `cyclic(6)`, `elementary-abelian(2,3)`,
    /// `symmetric(3) x cyclic(2)`.
    pub fn parse(input: &str) -> Result<GroupSpec, GroupError> {
        let factors = split_product(input);
        let mut specs = factors
            .into_iter()
            .map(parse_family_call)
            .collect::<Result<Vec<_>, _>>()?;
        let first = specs.remove(0);
        Ok(specs.into_iter().fold(first, GroupSpec::product))
    }

    /// Reads a group spec from its JSON form. Accepted shapes:
    /// a shorthand string, `{"generators": [...]}`,
    /// `{"family": name, "params": [...]}` and `{"direct_product": [a, b, ...]}`.
    pub fn from_json(value: &Value) -> Result<GroupSpec, GroupError> {
        let malformed = |s: &str| GroupError::MalformedSpec(s.to_string());
        match value {
            Value::String(s) => GroupSpec::parse(s),
            Value::Object(map) => {
                if let Some(gens) = map.get("generators") {
                    let gens = gens
                        .as_array()
                        .ok_or_else(|| malformed("`generators` must be an array of strings"))?
                        .iter()
                        .map(|g| g.as_str().map(str::to_string))
                        .collect::<Option<Vec<_>>>()
                        .ok_or_else(|| malformed("`generators` must be an array of strings"))?;
                    Ok(GroupSpec::Permutations(gens))
                } else if let Some(family) = map.get("family") {
                    let name = family.as_str().ok_or_else(|| malformed("`family` must be a string"))?;
                    let params = match map.get("params") {
                        None => Vec::new(),
                        Some(p) => p
                            .as_array()
                            .and_then(|a| a.iter().map(Value::as_u64).collect::<Option<Vec<_>>>())
                            .ok_or_else(|| malformed("`params` must be an array of non-negative integers"))?,
                    };
                    Ok(GroupSpec::Named(Family::from_name(name, &params)?))
                } else if let Some(factors) = map.get("direct_product") {
                    let factors = factors
                        .as_array()
                        .filter(|a| a.len() >= 2)
                        .ok_or_else(|| malformed("`direct_product` must list at least two groups"))?;
                    let mut specs = factors
                        .iter()
                        .map(GroupSpec::from_json)
                        .collect::<Result<Vec<_>, _>>()?;
                    let first = specs.remove(0);
                    Ok(specs.into_iter().fold(first, GroupSpec::product))
                } else {
                    Err(malformed("expected one of `generators`, `family`, `direct_product`"))
                }
            }
            _ => Err(malformed("expected a string or an object")),
        }
    }

    pub fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }

    fn generators(&self) -> Result<(Vec<Permutation>, usize), GroupError> {
        match self {
            GroupSpec::Permutations(cycles) => {
                let parsed = cycles
                    .iter()
                    .map(|c| Permutation::parse_cycles(c, 1))
                    .collect::<Result<Vec<_>, _>>()?;
                let degree = parsed.iter().map(Permutation::degree).max().unwrap_or(1);
                Ok((parsed.iter().map(|p| p.extend_to(degree)).collect(), degree))
            }
            GroupSpec::Named(family) => {
                let gens = family.generators();
                let degree = gens[0].degree();
                Ok((gens, degree))
            }
            GroupSpec::DirectProduct(a, b) => {
                let (ga, da) = a.generators()?;
                let (gb, db) = b.generators()?;
                Ok(product_generators(&ga, da, &gb, db))
            }
        }
    }
}

fn split_product(input: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let bytes: Vec<(usize, char)> = input.char_indices().collect();
    for (pos, &(i, c)) in bytes.iter().enumerate() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '×' if depth == 0 => {
                parts.push(&input[start..i]);
                start = i + c.len_utf8();
            }
            'x' if depth == 0 => {
                let before = pos == 0 || bytes[pos - 1].1.is_whitespace();
                let after = bytes.get(pos + 1).is_none_or(|&(_, n)| n.is_whitespace());
                if before && after {
                    parts.push(&input[start..i]);
                    start = i + 1;
                }
            }
            _ => {}
        }
    }
    parts.push(&input[start..]);
    parts
}

fn parse_family_call(input: &str) -> Result<GroupSpec, GroupError> {
    let input = input.trim();
    let malformed = || GroupError::MalformedSpec(format!("cannot parse `{input}` as `family(params)`"));
    let open = input.find('(').ok_or_else(malformed)?;
    if !input.ends_with(')') {
        return Err(malformed());
    }
    let name = input[..open].trim();
    let params = input[open + 1..input.len() - 1]
        .split(',')
        .map(|p| p.trim().parse::<u64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| malformed())?;
    Ok(GroupSpec::Named(Family::from_name(name, &params)?))
}

/// A finite group given by its full Cayley table. Element 0 is the identity.
#[derive(Debug, Clone)]
pub struct Group {
    n: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    orders: Vec<u64>,
    exponent: u64,
    generators: Vec<usize>,
    elements: Vec<Permutation>,
}

impl Group {
    pub fn build(spec: &GroupSpec) -> Result<Group, GroupError> {
        Group::build_with_cap(spec, DEFAULT_SIZE_CAP)
    }

    pub fn build_with_cap(spec: &GroupSpec, cap: usize) -> Result<Group, GroupError> {
        let (gens, degree) = spec.generators()?;
        Group::from_permutations(&gens, degree, cap)
    }

    /// Breadth-first closure of the generated permutation group. Elements
    /// are indexed in discovery order, generators applied in input order.
    pub fn from_permutations(gens: &[Permutation], degree: usize, cap: usize) -> Result<Group, GroupError> {
        let gens: Vec<Permutation> = gens
            .iter()
            .filter(|g| !g.is_identity())
            .map(|g| g.extend_to(degree.max(g.degree())))
            .collect();
        let degree = gens.iter().map(Permutation::degree).max().unwrap_or(degree).max(1);
        let gens: Vec<Permutation> = gens.iter().map(|g| g.extend_to(degree)).collect();

        let identity = Permutation::identity(degree);
        let mut index: HashMap<Permutation, u32> = HashMap::new();
        let mut elements = vec![identity.clone()];
        index.insert(identity, 0);
        // parent[h] = (p, s) with h = p * gens[s]
        let mut parent: Vec<(u32, u32)> = vec![(0, 0)];
        let mut right: Vec<u32> = Vec::new();
        let mut head = 0;
        while head < elements.len() {
            for (s, gen) in gens.iter().enumerate() {
                let next = elements[head].compose(gen);
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        if elements.len() >= cap {
                            return Err(GroupError::SizeCapExceeded { cap });
                        }
                        let id = elements.len() as u32;
                        index.insert(next.clone(), id);
                        elements.push(next);
                        parent.push((head as u32, s as u32));
                        id
                    }
                };
                right.push(id);
            }
            head += 1;
        }

        let n = elements.len();
        let ng = gens.len();
        let mut mul = vec![0u32; n * n];
        for g in 0..n {
            mul[g * n] = g as u32;
        }
        for h in 1..n {
            let (p, s) = parent[h];
            for g in 0..n {
                let gp = mul[g * n + p as usize] as usize;
                mul[g * n + h] = right[gp * ng + s as usize];
            }
        }

        let mut inv = vec![0u32; n];
        for g in 0..n {
            inv[g] = (0..n)
                .find(|&h| mul[g * n + h] == 0)
                .expect("finite group has inverses") as u32;
        }
        let mut orders = vec![1u64; n];
        for g in 1..n {
            let mut x = g;
            let mut k = 1;
            while x != 0 {
                x = mul[x * n + g] as usize;
                k += 1;
            }
            orders[g] = k;
        }
        let exponent = orders.iter().fold(1u64, |acc, &o| acc.lcm(&o));
        let generators = gens.iter().map(|g| index[g] as usize).collect();

        Ok(Group {
            n,
            mul,
            inv,
            orders,
            exponent,
            generators,
            elements,
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `g^-1 h g`
    #[inline]
    pub fn conjugate(&self, h: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), h), g)
    }

    pub fn element_order(&self, g: usize) -> u64 {
        self.orders[g]
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn element(&self, g: usize) -> &Permutation {
        &self.elements[g]
    }

    pub fn check_index(&self, g: usize) -> Result<(), GroupError> {
        if g < self.n {
            Ok(())
        } else {
            Err(GroupError::ElementOutOfRange {
                index: g,
                order: self.n,
            })
        }
    }

    /// `g^t` by repeated squaring; `t` is reduced modulo the order of `g`.
    pub fn power_of(&self, g: usize, t: i64) -> usize {
        let order = self.orders[g] as i64;
        let mut e = t.rem_euclid(order);
        let mut base = g;
        let mut acc = 0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .all(|&a| self.generators.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Checks the group axioms on the table: identity, inverses and
    /// associativity (exhaustive up to 200 elements, strided sample above).
    pub fn check_axioms(&self) -> bool {
        let n = self.n;
        let identity_ok = (0..n).all(|g| self.mul(0, g) == g && self.mul(g, 0) == g);
        let inverse_ok = (0..n).all(|g| self.mul(g, self.inv(g)) == 0 && self.mul(self.inv(g), g) == 0);
        let sample: Vec<usize> = if n <= 200 {
            (0..n).collect()
        } else {
            (0..n).step_by(n / 50 + 1).collect()
        };
        let assoc_ok = sample.iter().all(|&a| {
            sample.iter().all(|&b| {
                let ab = self.mul(a, b);
                sample.iter().all(|&c| self.mul(ab, c) == self.mul(a, self.mul(b, c)))
            })
        });
        identity_ok && inverse_ok && assoc_ok
    }
}

/// Conjugacy classes, their representatives, and the power maps on classes.
#[derive(Debug, Clone)]
pub struct ClassData {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    representatives: Vec<usize>,
    inverse_class: Vec<usize>,
    /// `power_map[j][t]` for `t` in `0..m`.
    power_map: Vec<Vec<usize>>,
    exponent: u64,
}

/// Orbits of the conjugation action. Classes are ordered by their least
/// element, which is the representative; class 0 is `{identity}`.
pub fn conjugacy_classes(g: &Group) -> ClassData {
    let n = g.order();
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for h in 0..n {
        if class_of[h] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut orbit = vec![h];
        class_of[h] = id;
        let mut head = 0;
        while head < orbit.len() {
            let x = orbit[head];
            for &s in g.generators() {
                let y = g.conjugate(x, s);
                if class_of[y] == usize::MAX {
                    class_of[y] = id;
                    orbit.push(y);
                }
            }
            head += 1;
        }
        orbit.sort_unstable();
        classes.push(orbit);
    }
    let representatives: Vec<usize> = classes.iter().map(|c| c[0]).collect();
    let inverse_class = representatives.iter().map(|&r| class_of[g.inv(r)]).collect();
    let m = g.exponent();
    let power_map = representatives
        .iter()
        .map(|&r| {
            let order = g.element_order(r);
            let mut cycle = Vec::with_capacity(order as usize);
            let mut x = 0;
            for _ in 0..order {
                cycle.push(class_of[x]);
                x = g.mul(x, r);
            }
            (0..m).map(|t| cycle[(t % order) as usize]).collect()
        })
        .collect();
    ClassData {
        classes,
        class_of,
        representatives,
        inverse_class,
        power_map,
        exponent: m,
    }
}

impl ClassData {
    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class(&self, j: usize) -> &[usize] {
        &self.classes[j]
    }

    pub fn class_size(&self, j: usize) -> usize {
        self.classes[j].len()
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g]
    }

    pub fn representative(&self, j: usize) -> usize {
        self.representatives[j]
    }

    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }

    pub fn inverse_class(&self, j: usize) -> usize {
        self.inverse_class[j]
    }

    /// Class of the `t`-th power of the members of class `j`.
    pub fn power_class(&self, j: usize, t: i64) -> usize {
        self.power_map[j][t.rem_euclid(self.exponent as i64) as usize]
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> Group {
        Group::build(&GroupSpec::Permutations(vec!["(1 2)".into(), "(1 2 3)".into()])).unwrap()
    }

    fn find(g: &Group, cycles: &str) -> usize {
        let p = Permutation::parse_cycles(cycles, g.element(0).degree()).unwrap();
        (0..g.order()).find(|&i| g.element(i) == &p).unwrap()
    }

    #[test]
    fn cyclic_six() {
        let g = Group::build(&GroupSpec::parse("cyclic(6)").unwrap()).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.exponent(), 6);
        assert!(g.check_axioms());
    }

    #[test]
    fn s3_from_generators() {
        let g = s3();
        assert_eq!(g.order(), 6);
        assert_eq!(g.exponent(), 6);
        assert_eq!(g.element_order(0), 1);
        assert_eq!(g.element_order(find(&g, "(1 2)")), 2);
        assert_eq!(g.element_order(find(&g, "(1 2 3)")), 3);
        assert!(g.check_axioms());
    }

    #[test]
    fn quaternion_orders() {
        let g = Group::build(&GroupSpec::parse("quaternion(8)").unwrap()).unwrap();
        assert_eq!(g.order(), 8);
        assert_eq!(g.exponent(), 4);
        let mut orders = g.orders().to_vec();
        orders.sort();
        assert_eq!(orders, vec![1, 2, 4, 4, 4, 4, 4, 4]);
        assert!(!g.is_abelian());
    }

    #[test]
    fn family_sizes() {
        let cases = [
            ("cyclic(12)", 12, 12),
            ("dihedral(1)", 2, 2),
            ("dihedral(2)", 4, 2),
            ("dihedral(8)", 16, 8),
            ("symmetric(4)", 24, 12),
            ("alternating(4)", 12, 6),
            ("alternating(5)", 60, 30),
            ("generalized-quaternion(16)", 16, 8),
            ("elementary-abelian(3,2)", 9, 3),
            ("cyclic(2) x cyclic(4)", 8, 4),
            ("symmetric(3) × cyclic(2)", 12, 6),
            ("symmetric(1)", 1, 1),
            ("cyclic(1)", 1, 1),
        ];
        for (spec, n, m) in cases {
            let g = Group::build(&GroupSpec::parse(spec).unwrap()).unwrap();
            assert_eq!((g.order(), g.exponent()), (n, m), "{spec}");
            assert!(g.check_axioms(), "{spec}");
        }
    }

    #[test]
    fn generalized_quaternion_has_unique_involution() {
        let g = Group::build(&GroupSpec::parse("generalized-quaternion(16)").unwrap()).unwrap();
        assert_eq!(g.orders().iter().filter(|&&o| o == 2).count(), 1);
        assert!(!g.is_abelian());
    }

    #[test]
    fn power_of_basics() {
        let g = s3();
        let c = find(&g, "(1 2 3)");
        assert_eq!(g.power_of(c, 0), 0);
        assert_eq!(g.power_of(c, 1), c);
        assert_eq!(g.power_of(c, 2), find(&g, "(1 3 2)"));
        assert_eq!(g.power_of(c, -1), g.inv(c));
        for x in 0..g.order() {
            for t in -12i64..12 {
                assert_eq!(g.power_of(x, t), g.power_of(x, t + g.exponent() as i64));
            }
        }
    }

    #[test]
    fn class_sizes() {
        let cd = conjugacy_classes(&s3());
        let mut sizes: Vec<usize> = (0..cd.num_classes()).map(|j| cd.class_size(j)).collect();
        assert_eq!(sizes[0], 1);
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);

        let s4 = Group::build(&GroupSpec::parse("symmetric(4)").unwrap()).unwrap();
        let mut sizes: Vec<usize> = conjugacy_classes(&s4).classes().iter().map(Vec::len).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 3, 6, 6, 8]);

        let ab = Group::build(&GroupSpec::parse("cyclic(2) x cyclic(4)").unwrap()).unwrap();
        assert!(conjugacy_classes(&ab).classes().iter().all(|c| c.len() == 1));
    }

    #[test]
    fn class_structure_invariants() {
        for spec in [
            "symmetric(4)",
            "alternating(5)",
            "generalized-quaternion(16)",
            "dihedral(6)",
        ] {
            let g = Group::build(&GroupSpec::parse(spec).unwrap()).unwrap();
            let cd = conjugacy_classes(&g);
            assert_eq!(cd.class(0), &[0]);
            for j in 0..cd.num_classes() {
                assert_eq!(cd.inverse_class(cd.inverse_class(j)), j);
                assert_eq!(cd.power_class(j, 1), j);
                let order = g.element_order(cd.representative(j));
                for &x in cd.class(j) {
                    assert_eq!(g.element_order(x), order);
                    for t in 0..g.exponent() as i64 {
                        assert_eq!(cd.class_of(g.power_of(x, t)), cd.power_class(j, t), "{spec}");
                    }
                }
            }
        }
    }

    #[test]
    fn cycle_notation_errors() {
        assert!(matches!(
            Permutation::parse_cycles("(1 2", 0),
            Err(GroupError::MalformedCycle { .. })
        ));
        assert!(Permutation::parse_cycles("(1 2)(2 3)", 0).is_err());
        assert!(Permutation::parse_cycles("(0 1)", 0).is_err());
        assert!(Permutation::parse_cycles("(a b)", 0).is_err());
        assert!(Permutation::parse_cycles("()", 3).unwrap().is_identity());
        assert_eq!(
            Permutation::parse_cycles("(1,3)(2 4)", 0).unwrap().to_string(),
            "(1 3)(2 4)"
        );
    }

    #[test]
    fn spec_errors() {
        assert_eq!(
            GroupSpec::parse("frobenius(20)"),
            Err(GroupError::UnknownFamily("frobenius".into()))
        );
        assert!(matches!(
            GroupSpec::parse("symmetric(8)"),
            Err(GroupError::BadParameter { .. })
        ));
        assert!(matches!(
            Group::build_with_cap(&GroupSpec::parse("symmetric(5)").unwrap(), 100),
            Err(GroupError::SizeCapExceeded { cap: 100 })
        ));
        let json: Value = serde_json::json!({"direct_product": [{"family": "cyclic", "params": [2]}, "cyclic(3)"]});
        let spec = GroupSpec::from_json(&json).unwrap();
        assert_eq!(Group::build(&spec).unwrap().order(), 6);
    }
}
