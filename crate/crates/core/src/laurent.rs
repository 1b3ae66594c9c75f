//! Exact arithmetic in `Z[v, v^-1]`.
//!
//! [`Laurent`] stores its nonzero terms sparsely, sorted by exponent. The
//! coefficient ring is any [`Coeff`]; the crate root exposes `i64` and
//! `BigInt` instantiations. Fixed-width coefficients use checked arithmetic
//! and panic on overflow rather than wrap.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Integer coefficient ring for Laurent polynomials.
pub trait Coeff:
    Clone
    + Eq
    + Ord
    + Hash
    + fmt::Debug
    + fmt::Display
    + FromStr
    + Zero
    + One
    + Signed
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
}

impl<T> Coeff for T where
    T: Clone
        + Eq
        + Ord
        + Hash
        + fmt::Debug
        + fmt::Display
        + FromStr
        + Zero
        + One
        + Signed
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

#[inline]
pub(crate) fn cadd<C: Coeff>(a: &C, b: &C) -> C {
    a.checked_add(b).expect("coefficient overflow in addition")
}

#[inline]
pub(crate) fn cmul<C: Coeff>(a: &C, b: &C) -> C {
    a.checked_mul(b).expect("coefficient overflow in multiplication")
}

/// A Laurent polynomial `sum_k c_k v^k` with no stored zero terms.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Laurent<C> {
    terms: Vec<(i32, C)>,
}

impl<C: Coeff> Laurent<C> {
    pub fn zero() -> Self {
        Laurent { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(C::one(), 0)
    }

    /// `c v^exp`.
    pub fn monomial(c: C, exp: i32) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Laurent { terms: vec![(exp, c)] }
        }
    }

    /// `v^exp` with coefficient one.
    pub fn v_pow(exp: i32) -> Self {
        Self::monomial(C::one(), exp)
    }

    /// `v + v^-1`, the quantum two.
    pub fn quantum_two() -> Self {
        Laurent { terms: vec![(-1, C::one()), (1, C::one())] }
    }

    /// Builds a polynomial from arbitrary `(exponent, coefficient)` pairs,
    /// merging repeated exponents and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (i32, C)>>(iter: I) -> Self {
        let mut terms: Vec<(i32, C)> = iter.into_iter().collect();
        terms.sort_by_key(|t| t.0);
        let mut out: Vec<(i32, C)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 = cadd(&last.1, &c),
                _ => out.push((e, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        Laurent { terms: out }
    }

    /// Polynomial with coefficient `coeffs[i]` at exponent `low + i`.
    pub fn from_dense(low: i32, coeffs: &[C]) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (low + i as i32, c.clone()))
            .collect();
        Laurent { terms }
    }

    pub fn terms(&self) -> &[(i32, C)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_deg(&self) -> Option<i32> {
        self.terms.first().map(|t| t.0)
    }

    pub fn max_deg(&self) -> Option<i32> {
        self.terms.last().map(|t| t.0)
    }

    /// Coefficient of `v^exp`.
    pub fn coeff(&self, exp: i32) -> C {
        match self.terms.binary_search_by_key(&exp, |t| t.0) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => C::zero(),
        }
    }

    /// The bar involution `v -> v^-1`.
    pub fn bar(&self) -> Self {
        let terms = self.terms.iter().rev().map(|(e, c)| (-e, c.clone())).collect();
        Laurent { terms }
    }

    pub fn is_bar_invariant(&self) -> bool {
        let n = self.terms.len();
        (0..n).all(|i| {
            let (e, c) = &self.terms[i];
            let (f, d) = &self.terms[n - 1 - i];
            *e == -*f && c == d
        })
    }

    /// Every coefficient is `>= 0`.
    pub fn is_nonnegative(&self) -> bool {
        self.terms.iter().all(|t| !t.1.is_negative())
    }

    /// Multiplication by `v^k`.
    pub fn shift(&self, k: i32) -> Self {
        Laurent { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Laurent { terms: self.terms.iter().map(|(e, d)| (*e, cmul(d, c))).collect() }
    }

    /// Value at `v = 1`.
    pub fn eval_at_one(&self) -> C {
        self.terms.iter().fold(C::zero(), |acc, t| cadd(&acc, &t.1))
    }

    /// Numerical value at a real point.
    pub fn eval_f64(&self, v: f64) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c.to_f64().unwrap_or(f64::NAN) * v.powi(*e))
            .sum()
    }

    /// `self += c * v^k * other`, merging in place.
    pub fn add_scaled_shifted(&mut self, other: &Self, c: &C, k: i32) {
        if other.is_zero() || c.is_zero() {
            return;
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.drain(..).peekable();
        let mut b = other.terms.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some(x), Some(y)) => match x.0.cmp(&(y.0 + k)) {
                    Ordering::Less => out.push(a.next().unwrap()),
                    Ordering::Greater => {
                        let y = b.next().unwrap();
                        out.push((y.0 + k, cmul(&y.1, c)));
                    }
                    Ordering::Equal => {
                        let x = a.next().unwrap();
                        let y = b.next().unwrap();
                        let s = cadd(&x.1, &cmul(&y.1, c));
                        if !s.is_zero() {
                            out.push((x.0, s));
                        }
                    }
                },
                (Some(_), None) => out.push(a.next().unwrap()),
                (None, Some(_)) => {
                    let y = b.next().unwrap();
                    out.push((y.0 + k, cmul(&y.1, c)));
                }
                (None, None) => break,
            }
        }
        drop(a);
        self.terms = out;
    }

    /// Converts the coefficient ring.
    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Laurent<D> {
        Laurent::from_terms(self.terms.iter().map(|(e, c)| (*e, f(c))))
    }
}

impl<C: Coeff> Add for &Laurent<C> {
    type Output = Laurent<C>;
    fn add(self, rhs: &Laurent<C>) -> Laurent<C> {
        let mut out = self.clone();
        out.add_scaled_shifted(rhs, &C::one(), 0);
        out
    }
}

impl<C: Coeff> Add for Laurent<C> {
    type Output = Laurent<C>;
    fn add(mut self, rhs: Laurent<C>) -> Laurent<C> {
        self.add_scaled_shifted(&rhs, &C::one(), 0);
        self
    }
}

impl<C: Coeff> AddAssign<&Laurent<C>> for Laurent<C> {
    fn add_assign(&mut self, rhs: &Laurent<C>) {
        self.add_scaled_shifted(rhs, &C::one(), 0);
    }
}

impl<C: Coeff> Sub for &Laurent<C> {
    type Output = Laurent<C>;
    fn sub(self, rhs: &Laurent<C>) -> Laurent<C> {
        let mut out = self.clone();
        out.add_scaled_shifted(rhs, &-C::one(), 0);
        out
    }
}

impl<C: Coeff> Sub for Laurent<C> {
    type Output = Laurent<C>;
    fn sub(mut self, rhs: Laurent<C>) -> Laurent<C> {
        self.add_scaled_shifted(&rhs, &-C::one(), 0);
        self
    }
}

impl<C: Coeff> SubAssign<&Laurent<C>> for Laurent<C> {
    fn sub_assign(&mut self, rhs: &Laurent<C>) {
        self.add_scaled_shifted(rhs, &-C::one(), 0);
    }
}

impl<C: Coeff> Neg for Laurent<C> {
    type Output = Laurent<C>;
    fn neg(self) -> Laurent<C> {
        Laurent { terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect() }
    }
}

impl<C: Coeff> Mul for &Laurent<C> {
    type Output = Laurent<C>;
    fn mul(self, rhs: &Laurent<C>) -> Laurent<C> {
        let mut out = Laurent::zero();
        for (e, c) in &rhs.terms {
            out.add_scaled_shifted(self, c, *e);
        }
        out
    }
}

impl<C: Coeff> Mul for Laurent<C> {
    type Output = Laurent<C>;
    fn mul(self, rhs: Laurent<C>) -> Laurent<C> {
        &self * &rhs
    }
}

impl<C: Coeff> fmt::Display for Laurent<C> {
    /// Renders as e.g. `v^-3 + 3v^-1 + 3v + v^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if *e == 0 {
                write!(f, "{abs}")?;
                continue;
            }
            if !abs.is_one() {
                write!(f, "{abs}")?;
            }
            if *e == 1 {
                write!(f, "v")?;
            } else {
                write!(f, "v^{e}")?;
            }
        }
        Ok(())
    }
}

/// Failure to parse the text form of a Laurent polynomial.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed Laurent polynomial term `{0}`")]
pub struct ParseLaurentError(pub String);

impl<C: Coeff> FromStr for Laurent<C> {
    type Err = ParseLaurentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s == "0" || s.is_empty() {
            return Ok(Self::zero());
        }
        // Split into signed terms, keeping a '-' that follows '^' inside its term.
        let mut pieces: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        let mut prev: Option<char> = None;
        for ch in s.chars() {
            if (ch == '+' || ch == '-') && prev != Some('^') {
                if !cur.is_empty() {
                    pieces.push((neg, std::mem::take(&mut cur)));
                }
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
            prev = Some(ch);
        }
        if !cur.is_empty() {
            pieces.push((neg, cur));
        }
        let mut terms = Vec::new();
        for (neg, body) in pieces {
            let err = || ParseLaurentError(body.clone());
            let (coef_str, exp) = match body.find('v') {
                None => (body.as_str(), 0),
                Some(pos) => {
                    let rest = &body[pos + 1..];
                    let exp = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^').ok_or_else(err)?.parse::<i32>().map_err(|_| err())?
                    };
                    (&body[..pos], exp)
                }
            };
            let mut c = if coef_str.is_empty() {
                C::one()
            } else {
                coef_str.parse::<C>().map_err(|_| err())?
            };
            if neg {
                c = -c;
            }
            terms.push((exp, c));
        }
        Ok(Self::from_terms(terms))
    }
}

impl<C: Coeff> Serialize for Laurent<C> {
    /// JSON form: `{"exponent": coefficient}`.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            match c.to_i64() {
                Some(x) => map.serialize_entry(&e.to_string(), &x)?,
                None => map.serialize_entry(&e.to_string(), &c.to_string())?,
            }
        }
        map.end()
    }
}

impl<'de, C: Coeff> Deserialize<'de> for Laurent<C> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct LaurentVisitor<C>(std::marker::PhantomData<C>);

        impl<'de, C: Coeff> Visitor<'de> for LaurentVisitor<C> {
            type Value = Laurent<C>;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a map from exponent to coefficient")
            }

            fn visit_map<M: MapAccess<'de>>(self, mut access: M) -> Result<Self::Value, M::Error> {
                let mut terms = Vec::new();
                while let Some((k, v)) = access.next_entry::<String, serde_json::Value>()? {
                    let e: i32 = k.parse().map_err(de::Error::custom)?;
                    let c = match v {
                        serde_json::Value::Number(n) => n
                            .as_i64()
                            .and_then(C::from_i64)
                            .ok_or_else(|| de::Error::custom("coefficient out of range"))?,
                        serde_json::Value::String(s) => {
                            s.parse::<C>().map_err(|_| de::Error::custom("bad coefficient"))?
                        }
                        _ => return Err(de::Error::custom("bad coefficient")),
                    };
                    terms.push((e, c));
                }
                Ok(Laurent::from_terms(terms))
            }
        }

        deserializer.deserialize_map(LaurentVisitor(std::marker::PhantomData))
    }
}
