//! Exact arithmetic in `Z[η]`, `η` a primitive `m`-th root of unity.
//!
//! Elements are kept in the reduced power basis `η^0 .. η^(φ(m)-1)`, so two
//! values are equal iff their coefficient vectors are. Products and the
//! Galois action work on raw exponent vectors (length `m`, using `η^m = 1`)
//! followed by one reduction against a precomputed table of `η^j mod Φ_m`.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::galois::GaloisSubgroup;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycError {
    #[error("conductor mismatch: {left} vs {right}")]
    ContextMismatch { left: u64, right: u64 },
    #[error("{t} is not a unit modulo {m}")]
    NotAUnit { t: i64, m: u64 },
    #[error("conductor {sub} does not divide {m}")]
    NotADivisor { sub: u64, m: u64 },
}

/// The `m`-th cyclotomic polynomial, lowest degree first.
///
/// Computed by exact division of `x^m - 1` by `Φ_d` for every proper
/// divisor `d` of `m`.
pub fn cyclotomic_polynomial(m: u64) -> Vec<BigInt> {
    assert!(m >= 1, "cyclotomic polynomial needs m >= 1");
    let mut num: Vec<BigInt> = vec![BigInt::zero(); m as usize + 1];
    num[0] = BigInt::from(-1);
    num[m as usize] = BigInt::one();
    for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
        num = exact_div_monic(&num, &cyclotomic_polynomial(d));
    }
    num
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut quot = vec![BigInt::zero(); qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "division must be exact");
    quot
}

pub fn euler_phi(m: u64) -> u64 {
    (1..=m).filter(|&t| t.gcd(&m) == 1).count() as u64
}

/// Shared data for one conductor `m`.
#[derive(Debug)]
pub struct CycContext {
    m: u64,
    phi_m: Vec<BigInt>,
    /// `root_powers[j]` = reduced coefficients of `η^j`, `0 <= j < m`.
    root_powers: Vec<Vec<BigInt>>,
}

impl CycContext {
    pub fn new(m: u64) -> Arc<CycContext> {
        let phi_m = cyclotomic_polynomial(m);
        let deg = phi_m.len() - 1;
        let mut root_powers = Vec::with_capacity(m as usize);
        let mut current = vec![BigInt::zero(); deg];
        current[0] = BigInt::one();
        for _ in 0..m {
            root_powers.push(current.clone());
            // multiply by η and fold the overflow through Φ_m (monic)
            let top = current.pop().expect("degree >= 1");
            current.insert(0, BigInt::zero());
            if !top.is_zero() {
                for (c, p) in current.iter_mut().zip(&phi_m) {
                    *c -= &top * p;
                }
            }
        }
        Arc::new(CycContext { m, phi_m, root_powers })
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    /// `φ(m)`, the dimension of the power basis.
    pub fn degree(&self) -> usize {
        self.phi_m.len() - 1
    }

    pub fn cyclotomic_polynomial(&self) -> &[BigInt] {
        &self.phi_m
    }
}

/// An element of `Z[η_m]` in reduced form.
#[derive(Clone)]
pub struct CycInt {
    ctx: Arc<CycContext>,
    coeffs: Vec<BigInt>,
}

impl PartialEq for CycInt {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.m == other.ctx.m && self.coeffs == other.coeffs
    }
}

impl Eq for CycInt {}

impl std::hash::Hash for CycInt {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ctx.m.hash(state);
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycInt[m={}]({})", self.ctx.m, self)
    }
}

impl CycInt {
    pub fn zero(ctx: &Arc<CycContext>) -> CycInt {
        CycInt {
            ctx: ctx.clone(),
            coeffs: vec![BigInt::zero(); ctx.degree()],
        }
    }

    pub fn from_integer(ctx: &Arc<CycContext>, c: impl Into<BigInt>) -> CycInt {
        let mut out = CycInt::zero(ctx);
        out.coeffs[0] = c.into();
        out
    }

    /// `η^j`, any integer exponent.
    pub fn root(ctx: &Arc<CycContext>, j: i64) -> CycInt {
        let j = j.rem_euclid(ctx.m as i64) as usize;
        CycInt {
            ctx: ctx.clone(),
            coeffs: ctx.root_powers[j].clone(),
        }
    }

    /// Reduces the raw sum `Σ raw[j] η^j`. Exponents are taken modulo `m`,
    /// so any length is accepted; a length-`m` vector is the usual input.
    pub fn reduce(ctx: &Arc<CycContext>, raw: &[BigInt]) -> CycInt {
        let deg = ctx.degree();
        let m = ctx.m as usize;
        let mut folded: Vec<BigInt> = vec![BigInt::zero(); m];
        for (j, c) in raw.iter().enumerate() {
            if !c.is_zero() {
                folded[j % m] += c;
            }
        }
        let mut coeffs: Vec<BigInt> = folded[..deg].to_vec();
        for (j, c) in folded.iter().enumerate().skip(deg) {
            if c.is_zero() {
                continue;
            }
            for (out, r) in coeffs.iter_mut().zip(&ctx.root_powers[j]) {
                if !r.is_zero() {
                    *out += c * r;
                }
            }
        }
        CycInt {
            ctx: ctx.clone(),
            coeffs,
        }
    }

    /// Embeds `Σ raw[j] η_sub^j`, where `η_sub = η^(m/sub)` has order `sub`.
    pub fn from_subconductor(ctx: &Arc<CycContext>, sub: u64, raw: &[BigInt]) -> Result<CycInt, CycError> {
        if sub == 0 || !ctx.m.is_multiple_of(sub) {
            return Err(CycError::NotADivisor { sub, m: ctx.m });
        }
        let scale = (ctx.m / sub) as usize;
        let mut lifted = vec![BigInt::zero(); ctx.m as usize];
        for (j, c) in raw.iter().enumerate() {
            lifted[(j * scale) % ctx.m as usize] += c;
        }
        Ok(CycInt::reduce(ctx, &lifted))
    }

    pub fn context(&self) -> &Arc<CycContext> {
        &self.ctx
    }

    pub fn conductor(&self) -> u64 {
        self.ctx.m
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn check_same(&self, other: &CycInt) -> Result<(), CycError> {
        if self.ctx.m == other.ctx.m {
            Ok(())
        } else {
            Err(CycError::ContextMismatch {
                left: self.ctx.m,
                right: other.ctx.m,
            })
        }
    }

    pub fn try_add(&self, other: &CycInt) -> Result<CycInt, CycError> {
        self.check_same(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(CycInt {
            ctx: self.ctx.clone(),
            coeffs,
        })
    }

    pub fn try_sub(&self, other: &CycInt) -> Result<CycInt, CycError> {
        self.check_same(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(CycInt {
            ctx: self.ctx.clone(),
            coeffs,
        })
    }

    pub fn try_mul(&self, other: &CycInt) -> Result<CycInt, CycError> {
        self.check_same(other)?;
        let m = self.ctx.m as usize;
        let mut raw = vec![BigInt::zero(); m];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    raw[(i + j) % m] += a * b;
                }
            }
        }
        Ok(CycInt::reduce(&self.ctx, &raw))
    }

    pub fn scale(&self, c: &BigInt) -> CycInt {
        CycInt {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Divides every coefficient by `c`, if all are divisible.
    pub fn exact_div(&self, c: &BigInt) -> Option<CycInt> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            let (q, r) = a.div_rem(c);
            if !r.is_zero() {
                return None;
            }
            coeffs.push(q);
        }
        Some(CycInt {
            ctx: self.ctx.clone(),
            coeffs,
        })
    }

    /// The automorphism `σ_t : η ↦ η^t`.
    pub fn galois_apply(&self, t: i64) -> Result<CycInt, CycError> {
        let m = self.ctx.m as i64;
        if t.gcd(&m) != 1 {
            return Err(CycError::NotAUnit { t, m: self.ctx.m });
        }
        Ok(self.galois_unchecked(t.rem_euclid(m) as u64))
    }

    pub(crate) fn galois_unchecked(&self, t: u64) -> CycInt {
        let m = self.ctx.m;
        let mut raw = vec![BigInt::zero(); m as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                raw[((j as u64 * t) % m) as usize] += c;
            }
        }
        CycInt::reduce(&self.ctx, &raw)
    }

    /// Complex conjugation, `σ_{-1}`.
    pub fn conj(&self) -> CycInt {
        self.galois_unchecked(self.ctx.m - 1)
    }

    /// `Some(c)` iff the value is the integer `c`.
    pub fn as_rational(&self) -> Option<BigInt> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Whether `σ_t` fixes the value for every `t` in `gamma`. Checking the
    /// generators is enough.
    pub fn is_fixed_by(&self, gamma: &GaloisSubgroup) -> bool {
        gamma
            .generators()
            .iter()
            .all(|&t| self.galois_unchecked(t % self.ctx.m) == *self)
    }

    /// Sum of the full Galois orbit; always rational.
    pub fn trace(&self) -> CycInt {
        let m = self.ctx.m;
        let mut acc = CycInt::zero(&self.ctx);
        for t in (1..=m).filter(|t| t.gcd(&m) == 1) {
            acc = &acc + &self.galois_unchecked(t % m);
        }
        acc
    }

    pub fn approx(&self) -> Complex64 {
        let m = self.ctx.m as f64;
        let mut z = Complex64::new(0.0, 0.0);
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = c.to_f64().unwrap_or(f64::NAN);
            z += Complex64::from_polar(c, 2.0 * PI * j as f64 / m);
        }
        z
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&CycInt> for &CycInt {
            type Output = CycInt;
            /// Panics on conductor mismatch; use the `try_` form to handle it.
            fn $method(self, rhs: &CycInt) -> CycInt {
                self.$checked(rhs).expect("CycInt conductor mismatch")
            }
        }

        impl $trait<CycInt> for CycInt {
            type Output = CycInt;
            fn $method(self, rhs: CycInt) -> CycInt {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl fmt::Display for CycInt {
    /// Polynomial in `η`, highest power last: `-1 + 2η - η^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mag = c.abs();
            let monomial = match j {
                0 => String::new(),
                1 => "η".to_string(),
                _ => format!("η^{j}"),
            };
            if j == 0 || !mag.is_one() {
                write!(f, "{mag}")?;
            }
            write!(f, "{monomial}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Serialises a big integer as a JSON number when it fits in `i64`, and as a
/// decimal string otherwise.
pub(crate) fn bigint_json(c: &BigInt) -> serde_json::Value {
    match c.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::String(c.to_string()),
    }
}

impl Serialize for CycInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let coeffs: Vec<serde_json::Value> = self.coeffs.iter().map(bigint_json).collect();
        let mut s = serializer.serialize_struct("CycInt", 2)?;
        s.serialize_field("m", &self.ctx.m)?;
        s.serialize_field("coeffs", &coeffs)?;
        s.end()
    }
}
