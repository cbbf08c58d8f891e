//! Brute-force verification: the explicit adjacency matrix of `Cay(G, C)`
//! and its spectrum, computed without any character theory.

use std::cmp::Ordering;

use nalgebra::{DMatrix, Schur};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::cyclotomic::CycInt;
use crate::group::Group;
use crate::spectra::Spectrum;

/// Default largest group order handled by the oracle.
pub const DEFAULT_ORACLE_CAP: usize = 400;
/// Auto backend selection uses the exact backend up to this order.
pub const EXACT_BACKEND_LIMIT: usize = 64;
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("group of order {order} exceeds the oracle cap {cap}")]
    CapExceeded { order: usize, cap: usize },
    #[error("spectrum sizes differ: {exact} exact vs {numeric} numeric eigenvalues")]
    SizeMismatch { exact: usize, numeric: usize },
    #[error("dense eigensolver did not converge")]
    NoConvergence,
}

/// `A[g][h] = 1` iff `g h⁻¹ ∈ C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyMatrix {
    n: usize,
    entries: Vec<u8>,
}

impl AdjacencyMatrix {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, g: usize, h: usize) -> u8 {
        self.entries[g * self.n + h]
    }

    pub fn row_sums(&self) -> Vec<usize> {
        self.entries
            .chunks(self.n)
            .map(|r| r.iter().map(|&x| x as usize).sum())
            .collect()
    }

    pub fn column_sums(&self) -> Vec<usize> {
        (0..self.n)
            .map(|h| (0..self.n).map(|g| self.get(g, h) as usize).sum())
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|g| (0..g).all(|h| self.get(g, h) == self.get(h, g)))
    }

    pub fn trace(&self) -> usize {
        (0..self.n).map(|g| self.get(g, g) as usize).sum()
    }

    /// `trace(A²)`
    pub fn trace_of_square(&self) -> usize {
        (0..self.n)
            .map(|g| {
                (0..self.n)
                    .map(|h| (self.get(g, h) * self.get(h, g)) as usize)
                    .sum::<usize>()
            })
            .sum()
    }
}

pub fn adjacency_matrix(g: &Group, c: &[usize]) -> Result<AdjacencyMatrix, OracleError> {
    adjacency_matrix_with_cap(g, c, DEFAULT_ORACLE_CAP)
}

pub fn adjacency_matrix_with_cap(g: &Group, c: &[usize], cap: usize) -> Result<AdjacencyMatrix, OracleError> {
    let n = g.order();
    if n > cap {
        return Err(OracleError::CapExceeded { order: n, cap });
    }
    let mut inside = vec![false; n];
    for &x in c {
        inside[x] = true;
    }
    let mut entries = vec![0u8; n * n];
    for a in 0..n {
        for b in 0..n {
            entries[a * n + b] = u8::from(inside[g.mul(a, g.inv(b))]);
        }
    }
    Ok(AdjacencyMatrix { n, entries })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Floating,
    Auto,
}

/// What the oracle produces: the integer characteristic polynomial or
/// floating eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleSpectrum {
    /// `det(xI - A)`, lowest degree first.
    Exact(Vec<BigInt>),
    Floating(Vec<Complex64>),
}

pub fn oracle_spectrum(a: &AdjacencyMatrix, backend: Backend) -> Result<OracleSpectrum, OracleError> {
    let exact = match backend {
        Backend::Exact => true,
        Backend::Floating => false,
        Backend::Auto => a.n <= EXACT_BACKEND_LIMIT,
    };
    if exact {
        Ok(OracleSpectrum::Exact(characteristic_polynomial(a)))
    } else {
        floating_eigenvalues(a).map(OracleSpectrum::Floating)
    }
}

impl AdjacencyMatrix {
    /// `A Aᵀ == Aᵀ A`, checked exactly.
    pub fn is_normal(&self) -> bool {
        let n = self.n;
        let dot_rows = |i: usize, j: usize| (0..n).filter(|&k| self.get(i, k) == 1 && self.get(j, k) == 1).count();
        let dot_cols = |i: usize, j: usize| (0..n).filter(|&k| self.get(k, i) == 1 && self.get(k, j) == 1).count();
        (0..n).all(|i| (i..n).all(|j| dot_rows(i, j) == dot_cols(i, j)))
    }
}

/// Dense floating eigenvalues. Normal matrices go through a Hermitian
/// eigensolver: with `H = (A + Aᵀ)/2`, `K = (A - Aᵀ)/2i` and a generic real
/// `c`, an orthonormal eigenbasis of `H + cK` diagonalises `A`, and each
/// eigenvalue is the Rayleigh quotient `v* A v`. Other matrices use a real
/// Schur decomposition.
pub fn floating_eigenvalues(a: &AdjacencyMatrix) -> Result<Vec<Complex64>, OracleError> {
    let n = a.n;
    if n == 0 {
        return Ok(Vec::new());
    }
    let m = DMatrix::<f64>::from_fn(n, n, |i, j| a.get(i, j) as f64);
    if !a.is_normal() {
        let schur = Schur::try_new(m, f64::EPSILON, 100_000).ok_or(OracleError::NoConvergence)?;
        return Ok(schur.complex_eigenvalues().iter().copied().collect());
    }
    const C: f64 = 0.618_033_988_749_894_9;
    let mc = m.map(|x| Complex64::new(x, 0.0));
    let herm = DMatrix::<Complex64>::from_fn(n, n, |i, j| {
        let (x, y) = (m[(i, j)], m[(j, i)]);
        Complex64::new((x + y) / 2.0, -C * (x - y) / 2.0)
    });
    let eig = nalgebra::SymmetricEigen::try_new(herm, f64::EPSILON, 100_000).ok_or(OracleError::NoConvergence)?;
    Ok((0..n)
        .map(|k| {
            let v = eig.eigenvectors.column(k);
            (v.adjoint() * &mc * v)[(0, 0)]
        })
        .collect())
}

/// Fraction-free (Bareiss) determinant.
fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        BigInt::one()
    } else {
        sign * &m[n - 1][n - 1]
    }
}

/// `det(xI - A)` over `Z`: Bareiss determinants at `x = 0..n`, interpolated
/// exactly in the falling-factorial basis.
pub fn characteristic_polynomial(a: &AdjacencyMatrix) -> Vec<BigInt> {
    let n = a.n;
    let mut diffs: Vec<BigInt> = (0..=n)
        .map(|x| {
            let m = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let diag = if i == j { BigInt::from(x) } else { BigInt::zero() };
                            diag - BigInt::from(a.get(i, j))
                        })
                        .collect()
                })
                .collect();
            bareiss_det(m)
        })
        .collect();
    // forward differences in place: diffs[j] = Δ^j P(0)
    for j in 1..=n {
        for i in (j..=n).rev() {
            let d = &diffs[i] - &diffs[i - 1];
            diffs[i] = d;
        }
    }
    let mut poly = vec![BigInt::zero(); n + 1];
    // falling[j] = x(x-1)...(x-j+1), lowest degree first
    let mut falling = vec![BigInt::one()];
    let mut factorial = BigInt::one();
    for (j, d) in diffs.iter().enumerate() {
        if j > 0 {
            factorial *= j;
            let mut next = vec![BigInt::zero(); falling.len() + 1];
            for (i, c) in falling.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * BigInt::from(j - 1);
            }
            falling = next;
        }
        let coef = d / &factorial;
        for (i, c) in falling.iter().enumerate() {
            poly[i] += &coef * c;
        }
    }
    poly
}

/// Outcome of the exact cross-check against the character-formula spectrum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactReport {
    pub multiplicities_sum_to_order: bool,
    pub trace_matches: bool,
    pub second_moment_matches: bool,
    /// `∏ (χ(1) x - Σ_C χ)^{χ(1)²} = (∏ χ(1)^{χ(1)²}) det(xI - A)` in `Z[η][x]`.
    pub factorization_matches: bool,
}

impl ExactReport {
    pub fn passed(&self) -> bool {
        self.multiplicities_sum_to_order
            && self.trace_matches
            && self.second_moment_matches
            && self.factorization_matches
    }
}

pub fn confirm_exact(a: &AdjacencyMatrix, charpoly: &[BigInt], sp: &Spectrum) -> ExactReport {
    let n = a.n;
    let ctx = sp.entries()[0].numerator.context().clone();
    let int = |v: &BigInt| CycInt::from_integer(&ctx, v.clone());

    let p1 = if n >= 1 {
        -charpoly[n - 1].clone()
    } else {
        BigInt::zero()
    };
    let p2 = if n >= 2 {
        &charpoly[n - 1] * &charpoly[n - 1] - BigInt::from(2) * &charpoly[n - 2]
    } else {
        &p1 * &p1
    };
    let trace = BigInt::from(a.trace());
    let trace2 = BigInt::from(a.trace_of_square());

    let mut product: Vec<CycInt> = vec![CycInt::from_integer(&ctx, 1)];
    let mut scale = BigInt::one();
    for e in sp.entries() {
        let d = BigInt::from(e.degree);
        for _ in 0..e.multiplicity {
            scale *= &d;
            let mut next = vec![CycInt::zero(&ctx); product.len() + 1];
            for (i, c) in product.iter().enumerate() {
                next[i + 1] = &next[i + 1] + &c.scale(&d);
                next[i] = &next[i] - &(c * &e.numerator);
            }
            product = next;
        }
    }
    let factorization_matches =
        product.len() == charpoly.len() && product.iter().zip(charpoly).all(|(lhs, c)| *lhs == int(&(c * &scale)));

    ExactReport {
        multiplicities_sum_to_order: sp.total_multiplicity() == n as u64,
        trace_matches: p1 == trace && sp.trace() == int(&trace),
        second_moment_matches: p2 == trace2 && sp.second_moment() == int(&trace2),
        factorization_matches,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub max_distance: f64,
    /// Position, in sorted order, of the worst pair.
    pub worst_index: Option<usize>,
    pub tolerance: f64,
    pub pass: bool,
}

fn sort_key(z: &Complex64) -> (i64, i64) {
    // quantised so that rounding noise does not reorder equal real parts
    ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64)
}

fn sort_complex(v: &mut [Complex64]) {
    v.sort_by(|a, b| {
        sort_key(a)
            .cmp(&sort_key(b))
            .then_with(|| a.re.total_cmp(&b.re))
            .then_with(|| a.im.total_cmp(&b.im))
    });
}

/// Expands the exact spectrum by multiplicity, sorts both multisets by
/// (real, imaginary) and reports the largest pairwise distance.
pub fn compare_spectra(exact: &Spectrum, numeric: &[Complex64], tol: f64) -> Result<ComparisonReport, OracleError> {
    compare_multisets(exact.expanded_approx(), numeric.to_vec(), tol)
}

pub fn compare_multisets(
    mut expected: Vec<Complex64>,
    mut numeric: Vec<Complex64>,
    tol: f64,
) -> Result<ComparisonReport, OracleError> {
    if expected.len() != numeric.len() {
        return Err(OracleError::SizeMismatch {
            exact: expected.len(),
            numeric: numeric.len(),
        });
    }
    sort_complex(&mut expected);
    sort_complex(&mut numeric);
    let (worst_index, max_distance) = expected
        .iter()
        .zip(&numeric)
        .map(|(a, b)| (a - b).norm())
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Greater))
        .map_or((None, 0.0), |(i, d)| (Some(i), d));
    Ok(ComparisonReport {
        max_distance,
        worst_index,
        tolerance: tol,
        pass: max_distance <= tol,
    })
}

/// Literal reading of power-closedness: for each `x ∈ C` and each
/// `y ∈ <x>`, compare the subgroups `<y>` and `<x>` as sets.
pub fn oracle_power_closed(c: &[usize], g: &Group) -> bool {
    let mut inside = vec![false; g.order()];
    for &x in c {
        inside[x] = true;
    }
    let cyclic = |x: usize| {
        let mut members = vec![false; g.order()];
        let mut y = g.identity();
        loop {
            members[y] = true;
            y = g.mul(y, x);
            if y == g.identity() {
                break;
            }
        }
        members
    };
    c.iter().all(|&x| {
        let gen_x = cyclic(x);
        (0..g.order())
            .filter(|&y| gen_x[y])
            .all(|y| cyclic(y) != gen_x || inside[y])
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::character_table;
    use crate::group::{conjugacy_classes, GroupSpec};
    use crate::spectra::{eigenvalues_via_characters, ConnectionSet};

    fn group(spec: &str) -> Group {
        Group::build(&GroupSpec::parse(spec).unwrap()).unwrap()
    }

    fn sorted_real(v: &[Complex64]) -> Vec<f64> {
        let mut r: Vec<f64> = v.iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        r
    }

    #[test]
    fn small_matrices() {
        let g = group("cyclic(3)");
        let zero = adjacency_matrix(&g, &[]).unwrap();
        assert!(zero.row_sums().iter().all(|&s| s == 0));
        let id = adjacency_matrix(&g, &[0]).unwrap();
        assert!((0..3).all(|i| (0..3).all(|j| id.get(i, j) == u8::from(i == j))));

        let x = g.generators()[0];
        let shift = adjacency_matrix(&g, &[x]).unwrap();
        assert_eq!(shift.row_sums(), vec![1, 1, 1]);
        assert_eq!(shift.column_sums(), vec![1, 1, 1]);
        assert!(!shift.is_symmetric());
        let mut eig = floating_eigenvalues(&shift).unwrap();
        sort_complex(&mut eig);
        let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let report = compare_multisets(vec![Complex64::new(1.0, 0.0), w, w.conj()], eig, 1e-8).unwrap();
        assert!(report.pass, "{report:?}");
        // x^3 - 1
        let cp = characteristic_polynomial(&shift);
        assert_eq!(cp, vec![BigInt::from(-1), 0.into(), 0.into(), 1.into()]);
    }

    #[test]
    fn four_cycle_and_k33() {
        let g = group("cyclic(4)");
        let x = g.generators()[0];
        let a = adjacency_matrix(&g, &[x, g.inv(x)]).unwrap();
        assert!(a.is_symmetric());
        let eig = sorted_real(&floating_eigenvalues(&a).unwrap());
        for (v, e) in eig.iter().zip([-2.0, 0.0, 0.0, 2.0]) {
            assert!((v - e).abs() < 1e-9);
        }
        // x^4 - 4x^2 = x^2 (x-2)(x+2)
        assert_eq!(
            characteristic_polynomial(&a),
            vec![0.into(), 0.into(), BigInt::from(-4), 0.into(), 1.into()]
        );

        let s3 = group("symmetric(3)");
        let t: Vec<usize> = (0..6).filter(|&x| s3.element_order(x) == 2).collect();
        let a = adjacency_matrix(&s3, &t).unwrap();
        let eig = sorted_real(&floating_eigenvalues(&a).unwrap());
        for (v, e) in eig.iter().zip([-3.0, 0.0, 0.0, 0.0, 0.0, 3.0]) {
            assert!((v - e).abs() < 1e-9);
        }
    }

    #[test]
    fn directed_cycles_converge() {
        for n in 2..=12 {
            let g = group(&format!("cyclic({n})"));
            for x in 1..n {
                if g.element_order(x) != n as u64 {
                    continue;
                }
                let a = adjacency_matrix(&g, &[x]).unwrap();
                let eig = floating_eigenvalues(&a).unwrap();
                assert_eq!(eig.len(), n);
                for z in eig {
                    assert!((z.norm() - 1.0).abs() < 1e-9, "n = {n}: {z}");
                    assert!((z.powu(n as u32) - 1.0).norm() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn non_normal_matrices_use_schur() {
        // a single transposition in S3 is not a union of classes
        let g = group("symmetric(3)");
        let t = (0..6).find(|&x| g.element_order(x) == 2).unwrap();
        let c = (0..6).find(|&x| g.element_order(x) == 3).unwrap();
        let a = adjacency_matrix(&g, &[t, c]).unwrap();
        assert!(!a.is_normal());
        let eig = floating_eigenvalues(&a).unwrap();
        let trace: Complex64 = eig.iter().sum();
        assert!((trace - a.trace() as f64).norm() < 1e-9);
        assert!(eig.iter().any(|z| (z.re - 2.0).abs() < 1e-9 && z.im.abs() < 1e-9));
        let class_union = adjacency_matrix(&g, &[t, g.inv(t)]).unwrap();
        assert!(class_union.is_normal());
    }

    #[test]
    fn cap_is_enforced() {
        let g = group("symmetric(6)");
        assert_eq!(
            adjacency_matrix(&g, &[]),
            Err(OracleError::CapExceeded { order: 720, cap: 400 })
        );
    }

    #[test]
    fn comparison_negative_control() {
        let g = group("symmetric(3)");
        let cd = conjugacy_classes(&g);
        let ct = character_table(&g, &cd).unwrap();
        let t = (0..cd.num_classes()).find(|&j| cd.class_size(j) == 3).unwrap();
        let c = ConnectionSet::from_classes(&cd, &[t]).unwrap();
        let sp = eigenvalues_via_characters(&c, &ct, &cd);
        let a = adjacency_matrix(&g, c.elements()).unwrap();
        let eig = floating_eigenvalues(&a).unwrap();
        let ok = compare_spectra(&sp, &eig, 1e-8).unwrap();
        assert!(ok.pass);
        assert!(ok.max_distance < 1e-8);

        let mut perturbed = eig.clone();
        perturbed[2] += Complex64::new(0.5, 0.0);
        let bad = compare_spectra(&sp, &perturbed, 1e-8).unwrap();
        assert!(!bad.pass);
        assert!(bad.worst_index.is_some());

        assert!(matches!(
            compare_spectra(&sp, &eig[..5], 1e-8),
            Err(OracleError::SizeMismatch { exact: 6, numeric: 5 })
        ));

        let cp = characteristic_polynomial(&a);
        assert!(confirm_exact(&a, &cp, &sp).passed());
    }

    #[test]
    fn exact_backend_detects_wrong_spectrum() {
        let g = group("cyclic(4)");
        let cd = conjugacy_classes(&g);
        let ct = character_table(&g, &cd).unwrap();
        let x = g.generators()[0];
        let c = ConnectionSet::from_classes(&cd, &[cd.class_of(x)]).unwrap();
        let sp = eigenvalues_via_characters(&c, &ct, &cd);
        // matrix of a different connection set
        let a = adjacency_matrix(&g, &[x, g.inv(x)]).unwrap();
        let cp = characteristic_polynomial(&a);
        assert!(!confirm_exact(&a, &cp, &sp).passed());
        let right = adjacency_matrix(&g, c.elements()).unwrap();
        assert!(confirm_exact(&right, &characteristic_polynomial(&right), &sp).passed());
    }

    #[test]
    fn power_closed_by_definition() {
        let g = group("cyclic(6)");
        let x = g.generators()[0];
        assert!(!oracle_power_closed(&[x], &g));
        assert!(oracle_power_closed(&[x, g.power_of(x, 5)], &g));
        assert!(oracle_power_closed(&[], &g));
        assert!(oracle_power_closed(&[0], &g));
    }
}
