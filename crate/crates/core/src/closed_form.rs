//! Polynomials in `q` with exact rational coefficients, and the closed-form
//! counts for points, radical-square-zero quivers and equioriented A3.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

/// `sum_e c_e q^e`, storing only nonzero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PolyQ {
    coeffs: BTreeMap<u32, BigRational>,
}

impl PolyQ {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(c)))
    }

    /// `c q^e`.
    pub fn monomial(c: BigRational, e: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    /// `q^e`.
    pub fn q_pow(e: u32) -> Self {
        Self::monomial(BigRational::one(), e)
    }

    fn add_term(&mut self, e: u32, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(e).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, e: u32) -> BigRational {
        self.coeffs.get(&e).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (u32, &BigRational)> {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer())
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        // Horner over the dense range of exponents
        let Some(deg) = self.degree() else {
            return BigRational::zero();
        };
        let mut acc = BigRational::zero();
        for e in (0..=deg).rev() {
            acc = acc * x + self.coeff(e);
        }
        acc
    }

    pub fn eval_int(&self, q: u64) -> BigRational {
        self.eval(&BigRational::from_integer(BigInt::from(q)))
    }

    /// Value at an integer point when it is a nonnegative integer.
    pub fn eval_count(&self, q: u64) -> Option<BigUint> {
        let v = self.eval_int(q);
        if v.is_integer() {
            v.to_integer().to_biguint()
        } else {
            None
        }
    }

    /// `{"exponent": "coefficient"}` in descending exponent order.
    pub fn to_json(&self) -> Value {
        let mut map = serde_json::Map::new();
        for (e, c) in self.terms().rev() {
            map.insert(e.to_string(), Value::String(c.to_string()));
        }
        Value::Object(map)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero();
        for (e, x) in self.terms() {
            out.add_term(e, x * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }
}

impl fmt::Display for PolyQ {
    /// ASCII, descending exponents: `2*q^8 - q^6`, `q + 1`, `-3/2*q^2`, `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms().rev().enumerate() {
            let magnitude = c.abs();
            if k == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            let var = match e {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{e}"),
            };
            if var.is_empty() {
                write!(f, "{magnitude}")?;
            } else if magnitude.is_one() {
                f.write_str(&var)?;
            } else {
                write!(f, "{magnitude}*{var}")?;
            }
        }
        Ok(())
    }
}

impl Add for &PolyQ {
    type Output = PolyQ;
    fn add(self, rhs: &PolyQ) -> PolyQ {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Sub for &PolyQ {
    type Output = PolyQ;
    fn sub(self, rhs: &PolyQ) -> PolyQ {
        self + &(-rhs)
    }
}

impl Neg for &PolyQ {
    type Output = PolyQ;
    fn neg(self) -> PolyQ {
        let mut out = PolyQ::zero();
        for (e, c) in self.terms() {
            out.add_term(e, -c.clone());
        }
        out
    }
}

impl Mul for &PolyQ {
    type Output = PolyQ;
    fn mul(self, rhs: &PolyQ) -> PolyQ {
        let mut out = PolyQ::zero();
        for (e, c) in self.terms() {
            for (g, d) in rhs.terms() {
                out.add_term(e + g, c * d);
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for PolyQ {
            type Output = PolyQ;
            fn $m(self, rhs: PolyQ) -> PolyQ {
                (&self).$m(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

/// Gaussian binomial `[n choose k]_q` by the q-Pascal rule
/// `[n, k] = [n-1, k-1] + q^k [n-1, k]`.
pub fn gaussian_binomial(n: u32, k: u32) -> Result<PolyQ> {
    if k > n {
        return Err(Error::Invalid(format!("gaussian binomial needs k <= n, got n = {n}, k = {k}")));
    }
    // row[j] = [i choose j] for the current i
    let mut row = vec![PolyQ::one()];
    for i in 1..=n {
        let mut next = Vec::with_capacity(i as usize + 1);
        for j in 0..=i {
            let left = if j >= 1 { row[j as usize - 1].clone() } else { PolyQ::zero() };
            let right = if j < i {
                &PolyQ::q_pow(j) * &row[j as usize]
            } else {
                PolyQ::zero()
            };
            next.push(&left + &right);
        }
        row = next;
    }
    Ok(row.swap_remove(k as usize))
}

/// Count of commuting pairs for equioriented A3 `l -> d -> m`:
/// `q^{2lm} sum_{i = max(0, 2d - l)}^{2d} q^{mi} [2d choose i]_q prod_{j=0}^{2d-i-1} (q^l - q^j)`.
pub fn a3_count_poly(l: u32, d: u32, m: u32) -> Result<PolyQ> {
    if l == 0 || d == 0 || m == 0 {
        return Err(Error::Invalid(format!("a3 closed form needs l, d, m >= 1, got ({l},{d},{m})")));
    }
    let mut sum = PolyQ::zero();
    for i in (2 * d).saturating_sub(l)..=2 * d {
        let mut term = &PolyQ::q_pow(m * i) * &gaussian_binomial(2 * d, i)?;
        for j in 0..2 * d - i {
            term = &term * &(&PolyQ::q_pow(l) - &PolyQ::q_pow(j));
        }
        sum = &sum + &term;
    }
    Ok(&PolyQ::q_pow(2 * l * m) * &sum)
}

/// Shape of a quiver whose count has a closed form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Classification {
    Point,
    /// No paths of length two; `dim` is the radical dimension.
    RadSquareZero { dim: usize },
    A3 { l: u32, d: u32, m: u32 },
    Irreducible,
}

pub fn base_count_poly(class: &Classification) -> Result<PolyQ> {
    match *class {
        Classification::Point => Ok(PolyQ::one()),
        Classification::RadSquareZero { dim } => Ok(PolyQ::q_pow(2 * dim as u32)),
        Classification::A3 { l, d, m } => a3_count_poly(l, d, m),
        Classification::Irreducible => Err(Error::Invalid("an irreducible quiver has no closed form".into())),
    }
}

/// Integer value of `p` at `q`, for polynomials that count something.
pub fn eval_at(p: &PolyQ, q: u32) -> Result<BigUint> {
    p.eval_count(u64::from(q))
        .ok_or_else(|| Error::Invalid(format!("{p} is not a nonnegative integer at q = {q}")))
}
