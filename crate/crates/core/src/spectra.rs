//! Eigenvalues of normal Cayley digraphs from the character table, and the
//! integrality / subfield criteria checked against their group-theoretic
//! counterparts.
//!
//! For an irreducible character `χ` the digraph `Cay(G, C)` has eigenvalue
//! `e_χ = (1/χ(1)) Σ_{x ∈ C} χ(x)` with multiplicity `χ(1)²`. Values are
//! kept as a numerator in `Z[η_m]` over the integer `χ(1)`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::characters::{induced_character_from_cyclic, CharacterTable};
use crate::cyclotomic::{CycContext, CycInt};
use crate::galois::{gamma_conjugacy_classes, power_closure_violation, GaloisError, GaloisSubgroup};
use crate::group::{ClassData, Group};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectraError {
    #[error("element set is not a union of conjugacy classes: class {class} is only partly included")]
    NotClassClosed { class: usize },
    #[error("unknown class index {0}")]
    UnknownClass(usize),
    #[error("element index {0} out of range")]
    UnknownElement(usize),
    #[error("rational eigenvalue {0} is not an integer")]
    NonIntegralRational(String),
    #[error("the base element must not be the identity")]
    IdentityBase,
    #[error(transparent)]
    Galois(#[from] GaloisError),
}

/// How a connection set is named.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConnectionSpec {
    Classes(Vec<usize>),
    /// Classes given by any of their elements.
    Representatives(Vec<usize>),
    /// An explicit element list; must be a union of classes.
    Elements(Vec<usize>),
    AllNonIdentity,
}

/// A connection set that is a union of conjugacy classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConnectionSet {
    class_indices: Vec<usize>,
    elements: Vec<usize>,
    contains_identity: bool,
}

impl ConnectionSet {
    pub fn from_classes(cd: &ClassData, classes: &[usize]) -> Result<ConnectionSet, SpectraError> {
        let class_indices: BTreeSet<usize> = classes.iter().copied().collect();
        if let Some(&bad) = class_indices.iter().find(|&&j| j >= cd.num_classes()) {
            return Err(SpectraError::UnknownClass(bad));
        }
        let mut elements: Vec<usize> = class_indices
            .iter()
            .flat_map(|&j| cd.class(j).iter().copied())
            .collect();
        elements.sort_unstable();
        Ok(ConnectionSet {
            contains_identity: class_indices.contains(&0),
            class_indices: class_indices.into_iter().collect(),
            elements,
        })
    }

    pub fn class_indices(&self) -> &[usize] {
        &self.class_indices
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn contains_identity(&self) -> bool {
        self.contains_identity
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_inverse_closed(&self, g: &Group) -> bool {
        self.elements.iter().all(|&c| self.contains(g.inv(c)))
    }
}

pub fn make_connection_set(spec: &ConnectionSpec, g: &Group, cd: &ClassData) -> Result<ConnectionSet, SpectraError> {
    let check = |x: usize| {
        if x < g.order() {
            Ok(x)
        } else {
            Err(SpectraError::UnknownElement(x))
        }
    };
    match spec {
        ConnectionSpec::Classes(classes) => ConnectionSet::from_classes(cd, classes),
        ConnectionSpec::Representatives(reps) => {
            let classes = reps
                .iter()
                .map(|&x| check(x).map(|x| cd.class_of(x)))
                .collect::<Result<Vec<_>, _>>()?;
            ConnectionSet::from_classes(cd, &classes)
        }
        ConnectionSpec::Elements(elements) => {
            let set: BTreeSet<usize> = elements.iter().map(|&x| check(x)).collect::<Result<_, _>>()?;
            let classes: BTreeSet<usize> = set.iter().map(|&x| cd.class_of(x)).collect();
            if let Some(&bad) = classes.iter().find(|&&j| cd.class(j).iter().any(|x| !set.contains(x))) {
                return Err(SpectraError::NotClassClosed { class: bad });
            }
            ConnectionSet::from_classes(cd, &classes.into_iter().collect::<Vec<_>>())
        }
        ConnectionSpec::AllNonIdentity => ConnectionSet::from_classes(cd, &(1..cd.num_classes()).collect::<Vec<_>>()),
    }
}

/// Every subset of the non-identity classes, in binary counting order.
pub fn nonidentity_class_subsets(cd: &ClassData) -> Vec<Vec<usize>> {
    let k = cd.num_classes();
    (0u64..1 << (k - 1))
        .map(|mask| (1..k).filter(|j| mask >> (j - 1) & 1 == 1).collect())
        .collect()
}

/// Exact eigenvalue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Eigenvalue {
    Rational(BigRational),
    /// `numerator / divisor` with an irrational numerator.
    Cyclotomic {
        numerator: CycInt,
        divisor: u64,
    },
}

impl Eigenvalue {
    pub fn approx(&self) -> Complex64 {
        match self {
            Eigenvalue::Rational(q) => {
                use num_traits::ToPrimitive;
                Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0)
            }
            Eigenvalue::Cyclotomic { numerator, divisor } => numerator.approx() / *divisor as f64,
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        match self {
            Eigenvalue::Rational(q) if q.is_integer() => Some(q.to_integer()),
            _ => None,
        }
    }
}

impl fmt::Display for Eigenvalue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Eigenvalue::Rational(q) => write!(f, "{q}"),
            Eigenvalue::Cyclotomic { numerator, divisor: 1 } => write!(f, "{numerator}"),
            Eigenvalue::Cyclotomic { numerator, divisor } => write!(f, "({numerator})/{divisor}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumEntry {
    pub character: usize,
    pub degree: u64,
    pub multiplicity: u64,
    /// `Σ_{x ∈ C} χ(x)`
    pub numerator: CycInt,
    pub value: Eigenvalue,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    entries: Vec<SpectrumEntry>,
    group_order: usize,
}

impl Spectrum {
    pub fn entries(&self) -> &[SpectrumEntry] {
        &self.entries
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// Eigenvalues repeated by multiplicity, as complex approximations.
    pub fn expanded_approx(&self) -> Vec<Complex64> {
        self.entries
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.value.approx(), e.multiplicity as usize))
            .collect()
    }

    /// `Σ χ(1)² e_χ = Σ χ(1) · numerator`, exactly.
    pub fn trace(&self) -> CycInt {
        self.entries.iter().fold(CycInt::zero(self.context()), |acc, e| {
            &acc + &e.numerator.scale(&BigInt::from(e.degree))
        })
    }

    /// `Σ χ(1)² e_χ²` = `Σ numerator²`.
    pub fn second_moment(&self) -> CycInt {
        self.entries.iter().fold(CycInt::zero(self.context()), |acc, e| {
            &acc + &(&e.numerator * &e.numerator)
        })
    }

    fn context(&self) -> &Arc<CycContext> {
        self.entries[0].numerator.context()
    }
}

/// `e_χ` for every irreducible `χ`, multiplicity `χ(1)²`.
pub fn eigenvalues_via_characters(c: &ConnectionSet, ct: &CharacterTable, cd: &ClassData) -> Spectrum {
    let entries = (0..ct.num_characters())
        .map(|chi| {
            let numerator = c.class_indices().iter().fold(CycInt::zero(ct.context()), |acc, &j| {
                &acc + &ct.value(chi, j).scale(&BigInt::from(cd.class_size(j)))
            });
            let degree = ct.degree(chi);
            let value = match numerator.as_rational() {
                Some(q) => Eigenvalue::Rational(BigRational::new(q, BigInt::from(degree))),
                None => Eigenvalue::Cyclotomic {
                    numerator: numerator.clone(),
                    divisor: degree,
                },
            };
            SpectrumEntry {
                character: chi,
                degree,
                multiplicity: degree * degree,
                numerator,
                value,
            }
        })
        .collect();
    Spectrum {
        entries,
        group_order: cd.classes().iter().map(Vec::len).sum(),
    }
}

/// First character whose eigenvalue is not fixed by Γ.
fn first_outside_field(sp: &Spectrum, gamma: &GaloisSubgroup) -> Option<usize> {
    sp.entries
        .iter()
        .find(|e| !e.numerator.is_fixed_by(gamma))
        .map(|e| e.character)
}

/// Every eigenvalue lies in the fixed field of Γ.
pub fn all_eigenvalues_in_k(sp: &Spectrum, gamma: &GaloisSubgroup) -> bool {
    first_outside_field(sp, gamma).is_none()
}

fn first_non_integral(sp: &Spectrum) -> Result<Option<usize>, SpectraError> {
    for e in &sp.entries {
        match &e.value {
            Eigenvalue::Rational(q) if !q.is_integer() => {
                return Err(SpectraError::NonIntegralRational(q.to_string()));
            }
            Eigenvalue::Rational(_) => {}
            Eigenvalue::Cyclotomic { .. } => return Ok(Some(e.character)),
        }
    }
    Ok(None)
}

/// Every eigenvalue is an integer. A rational non-integer eigenvalue is
/// impossible for an integer matrix and is reported as an error.
pub fn all_eigenvalues_integral(sp: &Spectrum) -> Result<bool, SpectraError> {
    Ok(first_non_integral(sp)?.is_none())
}

/// Integrality against power-closedness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Theorem1Report {
    pub integral: bool,
    pub power_closed: bool,
    pub agree: bool,
    /// A character with a non-integral eigenvalue.
    pub witness_character: Option<usize>,
    /// `(x, y)` with `x ∈ C`, `<y> = <x>`, `y ∉ C`.
    pub witness_elements: Option<(usize, usize)>,
}

pub fn check_theorem1(
    g: &Group,
    cd: &ClassData,
    c: &ConnectionSet,
    ct: &CharacterTable,
) -> Result<Theorem1Report, SpectraError> {
    let sp = eigenvalues_via_characters(c, ct, cd);
    let witness_character = first_non_integral(&sp)?;
    let witness_elements = power_closure_violation(c.elements(), g);
    let integral = witness_character.is_none();
    let power_closed = witness_elements.is_none();
    Ok(Theorem1Report {
        integral,
        power_closed,
        agree: integral == power_closed,
        witness_character,
        witness_elements,
    })
}

/// Membership of all eigenvalues in `K` against `C` being a union of
/// `Γ_K`-classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Theorem2Report {
    pub in_field: bool,
    pub union_of_gamma_classes: bool,
    pub agree: bool,
    pub witness_character: Option<usize>,
    /// An ordinary class in `C` whose Γ-class is not contained in `C`.
    pub witness_class: Option<usize>,
}

pub fn check_theorem2(
    g: &Group,
    cd: &ClassData,
    c: &ConnectionSet,
    ct: &CharacterTable,
    gamma: &GaloisSubgroup,
) -> Result<Theorem2Report, SpectraError> {
    let gc = gamma_conjugacy_classes(g, cd, gamma)?;
    let sp = eigenvalues_via_characters(c, ct, cd);
    let witness_character = first_outside_field(&sp, gamma);
    let witness_class = c.class_indices().iter().copied().find(|&j| {
        gc.class_groups()[gc.gamma_class_of_class(j)]
            .iter()
            .any(|other| c.class_indices().binary_search(other).is_err())
    });
    let in_field = witness_character.is_none();
    let union_of_gamma_classes = witness_class.is_none();
    Ok(Theorem2Report {
        in_field,
        union_of_gamma_classes,
        agree: in_field == union_of_gamma_classes,
        witness_character,
        witness_class,
    })
}

/// Counts `a_i = #{(z, y) : z ∈ C, y ∈ G, y⁻¹zy = x^i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaCoefficients {
    pub base: usize,
    pub base_order: u64,
    pub a: Vec<u64>,
    /// `Σ a_i η_{|x|}^i`, embedded at conductor `m`.
    pub e_theta: CycInt,
    /// Whether `e_theta` equals `|x| Σ_{z ∈ C} Θ(z)` computed from the
    /// induced character.
    pub reconstruction_matches: bool,
}

pub fn theta_coefficients(
    x: usize,
    c: &ConnectionSet,
    g: &Group,
    cd: &ClassData,
    ctx: &Arc<CycContext>,
) -> Result<ThetaCoefficients, SpectraError> {
    if x >= g.order() {
        return Err(SpectraError::UnknownElement(x));
    }
    if x == g.identity() {
        return Err(SpectraError::IdentityBase);
    }
    let order = g.element_order(x);
    let mut log = vec![None; g.order()];
    let mut pw = g.identity();
    for i in 0..order as usize {
        log[pw] = Some(i);
        pw = g.mul(pw, x);
    }
    let mut a = vec![0u64; order as usize];
    for y in 0..g.order() {
        for &z in c.elements() {
            if let Some(i) = log[g.conjugate(z, y)] {
                a[i] += 1;
            }
        }
    }
    let raw: Vec<BigInt> = a.iter().map(|&v| BigInt::from(v)).collect();
    let e_theta = CycInt::from_subconductor(ctx, order, &raw).expect("element order divides the exponent");

    let theta = induced_character_from_cyclic(x, g, cd, ctx);
    let via_induced = c
        .class_indices()
        .iter()
        .fold(CycInt::zero(ctx), |acc, &j| {
            &acc + &theta.values[j].scale(&BigInt::from(cd.class_size(j)))
        })
        .scale(&BigInt::from(order));

    Ok(ThetaCoefficients {
        base: x,
        base_order: order,
        reconstruction_matches: via_induced == e_theta,
        a,
        e_theta,
    })
}

/// `a_i = a_{i·t mod |x|}` for every `i` and every `t ∈ Γ`.
pub fn check_coefficient_symmetry(tc: &ThetaCoefficients, gamma: &GaloisSubgroup) -> bool {
    let o = tc.base_order;
    gamma
        .elements()
        .iter()
        .all(|&t| (0..o).all(|i| tc.a[i as usize] == tc.a[((i * (t % o)) % o) as usize]))
}

impl Serialize for Eigenvalue {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(None)?;
        match self {
            Eigenvalue::Rational(q) => map.serialize_entry("rational", &q.to_string())?,
            Eigenvalue::Cyclotomic { numerator, divisor } => {
                map.serialize_entry("cyclotomic", numerator)?;
                map.serialize_entry("degree_divisor", divisor)?;
            }
        }
        map.end()
    }
}

/// Complex approximation for output: `{"re", "im"}` with negative zero
/// folded to zero.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Approx {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Approx {
    fn from(z: Complex64) -> Self {
        let clean = |v: f64| {
            let r = (v * 1e12).round() / 1e12;
            if r == 0.0 {
                0.0
            } else {
                r
            }
        };
        Approx {
            re: clean(z.re),
            im: clean(z.im),
        }
    }
}

impl Serialize for SpectrumEntry {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("SpectrumEntry", 5)?;
        s.serialize_field("character", &self.character)?;
        s.serialize_field("degree", &self.degree)?;
        s.serialize_field("multiplicity", &self.multiplicity)?;
        s.serialize_field("value", &self.value)?;
        s.serialize_field("approx", &Approx::from(self.value.approx()))?;
        s.end()
    }
}

impl Serialize for Spectrum {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.entries.serialize(serializer)
    }
}

impl Eigenvalue {
    pub fn is_one(&self) -> bool {
        matches!(self, Eigenvalue::Rational(q) if q.is_one())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Eigenvalue::Rational(q) if q.is_zero())
    }
}
