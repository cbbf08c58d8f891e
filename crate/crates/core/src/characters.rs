//! Exact character tables by the Burnside–Dixon method.
//!
//! The class matrices are simultaneously diagonalised over a prime field
//! `F_p` with `p ≡ 1 (mod m)`, which gives the central characters modulo
//! `p`. Degrees and values follow from the orthogonality relations, and each
//! value is lifted to `Z[η_m]` by recovering the eigenvalue multiplicities of
//! `ρ(g)` from the values on the powers of `g`.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::cyclotomic::{CycContext, CycInt};
use crate::galois::GaloisSubgroup;
use crate::group::{ClassData, Group};
use crate::modp::{self, Rows};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharacterError {
    #[error("character table computation failed: {0}")]
    Inconsistent(String),
    #[error("class function does not decompose over the table: {0}")]
    NotACharacter(String),
}

/// Structure constants `c[i][j][l] = #{(a, b) : a ∈ K_i, b ∈ K_j, ab = g_l}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassMatrices {
    k: usize,
    sizes: Vec<usize>,
    mats: Vec<Vec<Vec<u64>>>,
}

impl ClassMatrices {
    pub fn num_classes(&self) -> usize {
        self.k
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn coefficient(&self, i: usize, j: usize, l: usize) -> u64 {
        self.mats[i][j][l]
    }

    /// Matrix `M_i` with rows indexed by `j` and columns by `l`.
    pub fn matrix(&self, i: usize) -> &[Vec<u64>] {
        &self.mats[i]
    }
}

pub fn class_matrices(g: &Group, cd: &ClassData) -> ClassMatrices {
    let k = cd.num_classes();
    let mut mats = vec![vec![vec![0u64; k]; k]; k];
    for (i, mat) in mats.iter_mut().enumerate() {
        for &a in cd.class(i) {
            let a_inv = g.inv(a);
            for l in 0..k {
                let b = g.mul(a_inv, cd.representative(l));
                mat[cd.class_of(b)][l] += 1;
            }
        }
    }
    ClassMatrices {
        k,
        sizes: (0..k).map(|j| cd.class_size(j)).collect(),
        mats,
    }
}

/// Irreducible complex characters with exact values in `Z[η_m]`.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    ctx: Arc<CycContext>,
    prime: u64,
    degrees: Vec<u64>,
    /// `values[χ][j]` = `χ(g_j)`.
    values: Vec<Vec<CycInt>>,
}

impl CharacterTable {
    pub fn context(&self) -> &Arc<CycContext> {
        &self.ctx
    }

    pub fn num_characters(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self, chi: usize) -> u64 {
        self.degrees[chi]
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn value(&self, chi: usize, class: usize) -> &CycInt {
        &self.values[chi][class]
    }

    pub fn row(&self, chi: usize) -> &[CycInt] {
        &self.values[chi]
    }

    /// The prime used for the modular computation.
    pub fn prime(&self) -> u64 {
        self.prime
    }
}

/// Class matrices then Dixon.
pub fn character_table(g: &Group, cd: &ClassData) -> Result<CharacterTable, CharacterError> {
    dixon_character_table(g, cd, &class_matrices(g, cd))
}

struct Subspace {
    basis: Rows,
    pivots: Vec<usize>,
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Splits `space` by the eigenvalues of `n_mat` (acting on row vectors from
/// the right).
fn split(space: Subspace, n_mat: &Rows, p: u64) -> Result<Vec<Subspace>, CharacterError> {
    let d = space.basis.len();
    let k = n_mat.len();
    // coordinates of b_r * N in the echelon basis are its pivot entries
    let restricted: Rows = space
        .basis
        .iter()
        .map(|b| {
            let image: Vec<u64> = (0..k)
                .map(|c| (0..k).fold(0, |acc, l| modp::add(acc, modp::mul(b[l], n_mat[l][c], p), p)))
                .collect();
            space.pivots.iter().map(|&c| image[c]).collect()
        })
        .collect();
    let is_scalar = (0..d).all(|r| (0..d).all(|s| r == s || restricted[r][s] == 0))
        && (1..d).all(|r| restricted[r][r] == restricted[0][0]);
    if is_scalar {
        return Ok(vec![space]);
    }
    let roots = modp::roots(&modp::charpoly(&restricted, p), p);
    let mut pieces = Vec::new();
    let mut total = 0;
    for lambda in roots {
        // left null space of (A - λI): null space of its transpose
        let shifted_t: Rows = (0..d)
            .map(|s| {
                (0..d)
                    .map(|r| {
                        let diag = if r == s { lambda } else { 0 };
                        modp::sub(restricted[r][s], diag, p)
                    })
                    .collect()
            })
            .collect();
        let coords = modp::nullspace(&shifted_t, d, p);
        let mut basis: Rows = coords
            .iter()
            .map(|c| {
                (0..k)
                    .map(|col| (0..d).fold(0, |acc, r| modp::add(acc, modp::mul(c[r], space.basis[r][col], p), p)))
                    .collect()
            })
            .collect();
        let pivots = modp::rref(&mut basis, p);
        total += basis.len();
        pieces.push(Subspace { basis, pivots });
    }
    if total != d {
        return Err(CharacterError::Inconsistent(format!(
            "class matrix is not diagonalisable over F_{p} on a {d}-dimensional subspace"
        )));
    }
    Ok(pieces)
}

pub fn dixon_character_table(g: &Group, cd: &ClassData, cm: &ClassMatrices) -> Result<CharacterTable, CharacterError> {
    let n = g.order() as u64;
    let k = cd.num_classes();
    let m = g.exponent();
    let ctx = CycContext::new(m);
    let bound = 2 * {
        let r = isqrt(n);
        if r * r == n {
            r
        } else {
            r + 1
        }
    };
    let p = modp::dixon_prime(m, bound);

    // N_i[l][j] = c_{ijl}, so that v N_i = ω_i v for the central character v
    let transposed: Vec<Rows> = (0..k)
        .map(|i| (0..k).map(|l| (0..k).map(|j| cm.mats[i][j][l] % p).collect()).collect())
        .collect();

    let mut identity: Rows = (0..k).map(|i| (0..k).map(|j| u64::from(i == j)).collect()).collect();
    let pivots = modp::rref(&mut identity, p);
    let mut spaces = vec![Subspace {
        basis: identity,
        pivots,
    }];
    for n_mat in &transposed {
        if spaces.iter().all(|s| s.basis.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for space in spaces {
            if space.basis.len() == 1 {
                next.push(space);
            } else {
                next.extend(split(space, n_mat, p)?);
            }
        }
        spaces = next;
    }
    if spaces.len() != k || spaces.iter().any(|s| s.basis.len() != 1) {
        return Err(CharacterError::Inconsistent(
            "class matrices did not split into one-dimensional eigenspaces".into(),
        ));
    }

    let zeta = modp::element_of_order(m, p);
    let mut rows: Vec<(u64, Vec<CycInt>)> = Vec::with_capacity(k);
    for space in &spaces {
        let v = &space.basis[0];
        if v[0] == 0 {
            return Err(CharacterError::Inconsistent(
                "central character vanishes at the identity".into(),
            ));
        }
        let scale = modp::inv(v[0], p);
        let omega: Vec<u64> = v.iter().map(|&x| modp::mul(x, scale, p)).collect();
        // ω must be a common eigenvector, with eigenvalue ω_i for N_i
        for (i, n_mat) in transposed.iter().enumerate() {
            for c in 0..k {
                let lhs = (0..k).fold(0, |acc, l| modp::add(acc, modp::mul(omega[l], n_mat[l][c], p), p));
                if lhs != modp::mul(omega[i], omega[c], p) {
                    return Err(CharacterError::Inconsistent("eigenvector check failed".into()));
                }
            }
        }

        let mut s = 0;
        for j in 0..k {
            let term = modp::mul(omega[j], omega[cd.inverse_class(j)], p);
            s = modp::add(s, modp::mul(term, modp::inv(cd.class_size(j) as u64 % p, p), p), p);
        }
        let target = modp::mul(n % p, modp::inv(s, p), p);
        let degree = (1..=isqrt(n))
            .find(|&d| d * d % p == target)
            .ok_or_else(|| CharacterError::Inconsistent("no admissible character degree".into()))?;

        let modular: Vec<u64> = (0..k)
            .map(|j| {
                modp::mul(
                    modp::mul(degree, omega[j], p),
                    modp::inv(cd.class_size(j) as u64 % p, p),
                    p,
                )
            })
            .collect();

        let mut values = Vec::with_capacity(k);
        for j in 0..k {
            let order = g.element_order(cd.representative(j));
            let zeta_o = modp::pow(zeta, m / order, p);
            let o_inv = modp::inv(order % p, p);
            let mut raw = vec![BigInt::zero(); order as usize];
            for (l, slot) in raw.iter_mut().enumerate() {
                let mut acc = 0;
                for i in 0..order {
                    let chi = modular[cd.power_class(j, i as i64)];
                    let w = modp::pow(zeta_o, (order - (i * l as u64) % order) % order, p);
                    acc = modp::add(acc, modp::mul(chi, w, p), p);
                }
                let mult = modp::mul(acc, o_inv, p);
                if mult > degree {
                    return Err(CharacterError::Inconsistent(format!(
                        "eigenvalue multiplicity {mult} exceeds degree {degree}"
                    )));
                }
                *slot = BigInt::from(mult);
            }
            values.push(
                CycInt::from_subconductor(&ctx, order, &raw)
                    .map_err(|e| CharacterError::Inconsistent(e.to_string()))?,
            );
        }
        rows.push((degree, values));
    }

    rows.sort_by(compare_rows);
    let table = CharacterTable {
        ctx,
        prime: p,
        degrees: rows.iter().map(|r| r.0).collect(),
        values: rows.into_iter().map(|r| r.1).collect(),
    };
    let sum_sq: u64 = table.degrees.iter().map(|d| d * d).sum();
    if sum_sq != n {
        return Err(CharacterError::Inconsistent(format!(
            "sum of squared degrees {sum_sq} != |G| = {n}"
        )));
    }
    check_orthogonality(&table, cd)?;
    Ok(table)
}

fn is_trivial_row(row: &(u64, Vec<CycInt>)) -> bool {
    row.0 == 1 && row.1.iter().all(|v| v.as_rational() == Some(BigInt::from(1)))
}

/// Trivial character first, then by degree, then lexicographically by the
/// reduced coefficient vectors.
fn compare_rows(a: &(u64, Vec<CycInt>), b: &(u64, Vec<CycInt>)) -> Ordering {
    is_trivial_row(b)
        .cmp(&is_trivial_row(a))
        .then(a.0.cmp(&b.0))
        .then_with(|| {
            a.1.iter()
                .zip(&b.1)
                .map(|(x, y)| x.coeffs().cmp(y.coeffs()))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
}

/// Exact row and column orthogonality.
pub fn check_orthogonality(ct: &CharacterTable, cd: &ClassData) -> Result<(), CharacterError> {
    let k = cd.num_classes();
    let n: usize = (0..k).map(|j| cd.class_size(j)).sum();
    let ctx = &ct.ctx;
    let conj: Vec<Vec<CycInt>> = ct
        .values
        .iter()
        .map(|row| row.iter().map(CycInt::conj).collect())
        .collect();
    for a in 0..k {
        for b in 0..k {
            let mut acc = CycInt::zero(ctx);
            for j in 0..k {
                let term = &ct.values[a][j] * &conj[b][j];
                acc = &acc + &term.scale(&BigInt::from(cd.class_size(j)));
            }
            let expect = if a == b { n } else { 0 };
            if acc != CycInt::from_integer(ctx, expect) {
                return Err(CharacterError::Inconsistent(format!(
                    "row orthogonality fails for characters {a}, {b}"
                )));
            }
        }
    }
    for i in 0..k {
        for j in 0..k {
            let mut acc = CycInt::zero(ctx);
            for chi in 0..k {
                acc = &acc + &(&ct.values[chi][i] * &conj[chi][j]);
            }
            let expect = if i == j { n / cd.class_size(i) } else { 0 };
            if acc != CycInt::from_integer(ctx, expect) {
                return Err(CharacterError::Inconsistent(format!(
                    "column orthogonality fails for classes {i}, {j}"
                )));
            }
        }
    }
    Ok(())
}

/// `σ_t(χ(g)) = χ(g^t)` for every character, class and `t ∈ Γ`.
pub fn verify_galois_character_identity(ct: &CharacterTable, cd: &ClassData, gamma: &GaloisSubgroup) -> bool {
    let m = ct.ctx.conductor();
    gamma.elements().iter().all(|&t| {
        (0..ct.num_characters()).all(|chi| {
            (0..cd.num_classes())
                .all(|j| ct.values[chi][j].galois_unchecked(t % m) == ct.values[chi][cd.power_class(j, t as i64)])
        })
    })
}

/// The character of `G` induced from the faithful linear character of
/// `<x>` with `θ(x) = η_{|x|}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedCharacter {
    pub base: usize,
    pub base_order: u64,
    /// One value per class of `G`, conductor `m`.
    pub values: Vec<CycInt>,
}

/// `Θ(s) = (1/|x|) Σ_{y : y⁻¹sy ∈ <x>} θ(y⁻¹sy)` by direct enumeration over
/// `y`, for each class representative `s`.
pub fn induced_character_from_cyclic(x: usize, g: &Group, cd: &ClassData, ctx: &Arc<CycContext>) -> InducedCharacter {
    let order = g.element_order(x);
    let mut log = vec![None; g.order()];
    let mut pw = 0;
    for i in 0..order as usize {
        log[pw] = Some(i);
        pw = g.mul(pw, x);
    }
    let divisor = BigInt::from(order);
    let values = cd
        .representatives()
        .iter()
        .map(|&s| {
            let mut raw = vec![BigInt::zero(); order as usize];
            for y in 0..g.order() {
                if let Some(i) = log[g.conjugate(s, y)] {
                    raw[i] += 1;
                }
            }
            let raw: Vec<BigInt> = raw
                .into_iter()
                .map(|c| {
                    debug_assert!((&c % &divisor).is_zero());
                    c / &divisor
                })
                .collect();
            CycInt::from_subconductor(ctx, order, &raw).expect("element order divides the exponent")
        })
        .collect();
    InducedCharacter {
        base: x,
        base_order: order,
        values,
    }
}

/// Multiplicities `<f, χ>` of a class function over the table. Each must be
/// a non-negative integer.
pub fn decompose(values: &[CycInt], ct: &CharacterTable, cd: &ClassData) -> Result<Vec<BigInt>, CharacterError> {
    let n: usize = (0..cd.num_classes()).map(|j| cd.class_size(j)).sum();
    let n = BigInt::from(n);
    (0..ct.num_characters())
        .map(|chi| {
            let mut acc = CycInt::zero(&ct.ctx);
            for (j, v) in values.iter().enumerate() {
                let term = v * &ct.values[chi][j].conj();
                acc = &acc + &term.scale(&BigInt::from(cd.class_size(j)));
            }
            let total = acc
                .as_rational()
                .ok_or_else(|| CharacterError::NotACharacter(format!("inner product with χ{chi} is irrational")))?;
            let (q, r) = (&total / &n, &total % &n);
            if !r.is_zero() || q.is_negative() {
                return Err(CharacterError::NotACharacter(format!(
                    "inner product with χ{chi} is {total}/{n}"
                )));
            }
            Ok(q)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::{subgroup_closure, trivial_subgroup, unit_group};
    use crate::group::{conjugacy_classes, GroupSpec};

    fn build(spec: &str) -> (Group, ClassData, CharacterTable) {
        let g = Group::build(&GroupSpec::parse(spec).unwrap()).unwrap();
        let cd = conjugacy_classes(&g);
        let ct = character_table(&g, &cd).unwrap();
        (g, cd, ct)
    }

    fn int(ct: &CharacterTable, c: i64) -> CycInt {
        CycInt::from_integer(ct.context(), c)
    }

    fn class_by_order(g: &Group, cd: &ClassData, order: u64) -> Vec<usize> {
        (0..cd.num_classes())
            .filter(|&j| g.element_order(cd.representative(j)) == order)
            .collect()
    }

    #[test]
    fn class_matrix_counts() {
        let g = Group::build(&GroupSpec::parse("symmetric(3)").unwrap()).unwrap();
        let cd = conjugacy_classes(&g);
        let cm = class_matrices(&g, &cd);
        let t = class_by_order(&g, &cd, 2)[0];
        assert_eq!(cm.coefficient(t, t, 0), 3);
        for spec in ["symmetric(4)", "quaternion(8)", "alternating(5)"] {
            let g = Group::build(&GroupSpec::parse(spec).unwrap()).unwrap();
            let cd = conjugacy_classes(&g);
            let cm = class_matrices(&g, &cd);
            let k = cd.num_classes();
            for i in 0..k {
                for j in 0..k {
                    let total: u64 = (0..k).map(|l| cm.coefficient(i, j, l) * cd.class_size(l) as u64).sum();
                    assert_eq!(total, (cd.class_size(i) * cd.class_size(j)) as u64);
                    let expect = if j == cd.inverse_class(i) {
                        cd.class_size(i) as u64
                    } else {
                        0
                    };
                    assert_eq!(cm.coefficient(i, j, 0), expect);
                }
            }
        }
    }

    #[test]
    fn abelian_class_matrices_are_permutations() {
        let g = Group::build(&GroupSpec::parse("cyclic(2) x cyclic(4)").unwrap()).unwrap();
        let cd = conjugacy_classes(&g);
        let cm = class_matrices(&g, &cd);
        for i in 0..8 {
            for j in 0..8 {
                let row = &cm.matrix(i)[j];
                assert_eq!(row.iter().sum::<u64>(), 1);
            }
        }
    }

    #[test]
    fn cyclic_table_is_dual_group() {
        for n in 1..=12u64 {
            let (g, cd, ct) = build(&format!("cyclic({n})"));
            assert_eq!(ct.num_characters(), n as usize);
            assert!(ct.degrees().iter().all(|&d| d == 1));
            // every χ is a homomorphism to roots of unity: χ(g^i) = χ(g)^i
            let x = g.generators().first().copied().unwrap_or(0);
            for chi in 0..ct.num_characters() {
                let base = ct.value(chi, cd.class_of(x)).clone();
                let mut acc = int(&ct, 1);
                for i in 0..n as i64 {
                    assert_eq!(ct.value(chi, cd.class_of(g.power_of(x, i))), &acc);
                    acc = &acc * &base;
                }
            }
        }
    }

    #[test]
    fn s3_table() {
        let (g, cd, ct) = build("symmetric(3)");
        assert_eq!(ct.degrees(), &[1, 1, 2]);
        let t = class_by_order(&g, &cd, 2)[0];
        let c = class_by_order(&g, &cd, 3)[0];
        assert_eq!(ct.value(2, 0), &int(&ct, 2));
        assert_eq!(ct.value(2, t), &int(&ct, 0));
        assert_eq!(ct.value(2, c), &int(&ct, -1));
        assert!(ct.row(0).iter().all(|v| *v == int(&ct, 1)));
    }

    #[test]
    fn q8_table() {
        let (g, cd, ct) = build("quaternion(8)");
        assert_eq!(ct.degrees(), &[1, 1, 1, 1, 2]);
        let z = class_by_order(&g, &cd, 2)[0];
        assert_eq!(ct.value(4, 0), &int(&ct, 2));
        assert_eq!(ct.value(4, z), &int(&ct, -2));
        for j in class_by_order(&g, &cd, 4) {
            assert_eq!(ct.value(4, j), &int(&ct, 0));
        }
    }

    #[test]
    fn tables_satisfy_classical_checks() {
        for spec in [
            "symmetric(4)",
            "alternating(4)",
            "alternating(5)",
            "dihedral(5)",
            "generalized-quaternion(16)",
            "elementary-abelian(3,2)",
            "symmetric(3) x cyclic(2)",
            "cyclic(1)",
        ] {
            let (g, cd, ct) = build(spec);
            check_orthogonality(&ct, &cd).unwrap();
            assert_eq!(ct.num_characters(), cd.num_classes());
            assert_eq!(ct.degrees().iter().map(|d| d * d).sum::<u64>(), g.order() as u64);
            assert!(
                ct.degrees().iter().all(|d| (g.order() as u64).is_multiple_of(*d)),
                "{spec}"
            );
            assert!(
                verify_galois_character_identity(&ct, &cd, &unit_group(g.exponent())),
                "{spec}"
            );
        }
    }

    #[test]
    fn a5_has_golden_ratio_values() {
        let (_, _, ct) = build("alternating(5)");
        assert_eq!(ct.degrees(), &[1, 3, 3, 4, 5]);
        let irrational = ct.row(1).iter().filter(|v| v.as_rational().is_none()).count();
        assert_eq!(irrational, 2);
    }

    #[test]
    fn galois_identity_examples() {
        let (g, cd, ct) = build("symmetric(3)");
        assert!(verify_galois_character_identity(&ct, &cd, &trivial_subgroup(6)));
        assert!(verify_galois_character_identity(&ct, &cd, &unit_group(6)));

        let (g5, cd5, ct5) = build("cyclic(5)");
        let x = g5.generators()[0];
        let sigma2 = subgroup_closure(5, &[2]).unwrap();
        assert!(verify_galois_character_identity(&ct5, &cd5, &sigma2));
        for chi in 0..5 {
            let v = ct5.value(chi, cd5.class_of(x));
            assert_eq!(
                &v.galois_apply(2).unwrap(),
                ct5.value(chi, cd5.class_of(g5.power_of(x, 2)))
            );
        }
        let _ = g;
    }

    #[test]
    fn induced_characters() {
        let (g, cd, ct) = build("symmetric(3)");
        let c = cd.representative(class_by_order(&g, &cd, 3)[0]);
        let theta = induced_character_from_cyclic(c, &g, &cd, ct.context());
        assert_eq!(theta.values[0], int(&ct, 2));
        let t = class_by_order(&g, &cd, 2)[0];
        assert_eq!(theta.values[t], int(&ct, 0));
        assert_eq!(
            decompose(&theta.values, &ct, &cd).unwrap(),
            vec![0.into(), 0.into(), 1.into()]
        );

        for spec in [
            "symmetric(4)",
            "alternating(5)",
            "generalized-quaternion(16)",
            "cyclic(12)",
        ] {
            let (g, cd, ct) = build(spec);
            for &x in cd.representatives() {
                let theta = induced_character_from_cyclic(x, &g, &cd, ct.context());
                let index = g.order() as u64 / g.element_order(x);
                assert_eq!(theta.values[0], int(&ct, index as i64));
                for j in 0..cd.num_classes() {
                    if g.element_order(x) % g.element_order(cd.representative(j)) != 0 {
                        assert!(theta.values[j].is_zero());
                    }
                }
                let mult = decompose(&theta.values, &ct, &cd).unwrap();
                let deg: BigInt = mult.iter().zip(ct.degrees()).map(|(a, &d)| a * BigInt::from(d)).sum();
                assert_eq!(deg, BigInt::from(index));
            }
        }
    }

    #[test]
    fn decompose_rejects_non_characters() {
        let (_, cd, ct) = build("symmetric(3)");
        let mut f: Vec<CycInt> = ct.row(2).to_vec();
        f[0] = int(&ct, 1);
        assert!(matches!(decompose(&f, &ct, &cd), Err(CharacterError::NotACharacter(_))));
    }
}
