//! Sparse multivariate polynomial arithmetic over an exact scalar type.
//!
//! The variable alphabet is fixed: `z`, `w`, `g2`, `g3`, `P` (the Weierstrass
//! function ℘) and `Pp` (its derivative ℘′).  Exponents are dense-packed per
//! monomial.  The exponent of `z` may be negative (Laurent); all other
//! exponents are non-negative.
//!
//! Polynomials are stored canonically: a term map with no zero coefficients,
//! ordered by graded lexicographic order on the fixed alphabet.  Two
//! polynomials are equal iff their term maps are equal.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{FromPrimitive, One, Zero};

use crate::Error;

/// Scalar bound for polynomial coefficients: an exact field-like type.
///
/// The engine instantiates this with arbitrary-precision rationals; the
/// arithmetic itself is agnostic and also works over `f64` (approximately).
pub trait Coeff:
    Clone
    + fmt::Debug
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Div<Output = Self>
    + FromPrimitive
{
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer does not fit in coefficient type")
    }
}

impl<T> Coeff for T where
    T: Clone
        + fmt::Debug
        + PartialEq
        + Zero
        + One
        + Neg<Output = Self>
        + Sub<Output = Self>
        + Div<Output = Self>
        + FromPrimitive
{
}

/// The fixed variable alphabet.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Var {
    Z,
    W,
    G2,
    G3,
    P,
    Pp,
}

impl Var {
    pub const ALL: [Var; 6] = [Var::Z, Var::W, Var::G2, Var::G3, Var::P, Var::Pp];

    pub fn index(self) -> usize {
        match self {
            Var::Z => 0,
            Var::W => 1,
            Var::G2 => 2,
            Var::G3 => 3,
            Var::P => 4,
            Var::Pp => 5,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::Z => "z",
            Var::W => "w",
            Var::G2 => "g2",
            Var::G3 => "g3",
            Var::P => "P",
            Var::Pp => "Pp",
        }
    }

    pub fn from_name(s: &str) -> Option<Var> {
        Var::ALL.iter().copied().find(|v| v.name() == s)
    }
}

/// Exponent vector over the fixed alphabet.  `z` is Laurent, the rest are
/// non-negative.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Hash)]
pub struct Monomial {
    exps: [i32; 6],
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Var) -> Self {
        Monomial::one().with_exp(v, 1)
    }

    pub fn with_exp(mut self, v: Var, e: i32) -> Self {
        debug_assert!(e >= 0 || v == Var::Z, "negative exponent only allowed for z");
        self.exps[v.index()] = e;
        self
    }

    pub fn exp(&self, v: Var) -> i32 {
        self.exps[v.index()]
    }

    pub fn product(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for i in 0..6 {
            out.exps[i] += other.exps[i];
        }
        out
    }

    pub fn total_degree(&self) -> i64 {
        self.exps.iter().map(|&e| e as i64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for v in Var::ALL {
            let e = self.exp(v);
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", v.name())?;
            } else {
                write!(f, "{}^{}", v.name(), e)?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial: monomial -> nonzero coefficient, canonically ordered.
#[derive(Clone, PartialEq, Eq)]
pub struct SparsePoly<T> {
    terms: BTreeMap<Monomial, T>,
}

impl<T: Coeff> Default for SparsePoly<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Coeff> SparsePoly<T> {
    pub fn zero() -> Self {
        SparsePoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::monomial(Monomial::one(), c)
    }

    pub fn int(n: i64) -> Self {
        Self::constant(T::from_int(n))
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(Monomial::var(v), T::one())
    }

    /// `z^k`, any integer `k` (Laurent).
    pub fn z_pow(k: i32) -> Self {
        Self::monomial(Monomial::one().with_exp(Var::Z, k), T::one())
    }

    pub fn monomial(m: Monomial, c: T) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        SparsePoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &T)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&T> {
        self.terms.get(m)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().clone() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn scaled(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        SparsePoly {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (*m, v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn scaled_int(&self, n: i64) -> Self {
        self.scaled(&T::from_int(n))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Formal partial derivative; Laurent exponents follow the power rule.
    pub fn diff(&self, v: Var) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e == 0 {
                continue;
            }
            let dm = m.with_exp(v, e - 1);
            out.add_term(dm, c.clone() * T::from_int(e as i64));
        }
        out
    }

    /// Replace every power of `z` by the corresponding power of `c`.
    ///
    /// Errors with `DivisionByZero` when `c` is zero and a negative exponent
    /// is present.
    pub fn substitute_z(&self, c: &T) -> Result<Self, Error> {
        let mut out = Self::zero();
        for (m, coeff) in &self.terms {
            let e = m.exp(Var::Z);
            let factor = if e >= 0 {
                int_pow(c, e as u32)
            } else {
                if c.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                T::one() / int_pow(c, (-e) as u32)
            };
            out.add_term(m.with_exp(Var::Z, 0), coeff.clone() * factor);
        }
        Ok(out)
    }

    /// Largest exponent of `v`; `None` on the zero polynomial.
    pub fn degree(&self, v: Var) -> Option<i64> {
        self.terms.keys().map(|m| m.exp(v) as i64).max()
    }

    /// Smallest exponent of `v` (the Laurent floor for `z`); `None` on zero.
    pub fn low_degree(&self, v: Var) -> Option<i64> {
        self.terms.keys().map(|m| m.exp(v) as i64).min()
    }

    /// Coefficient polynomial of the top power of `v` (with `v` stripped);
    /// `None` on the zero polynomial.
    pub fn leading_coefficient(&self, v: Var) -> Option<Self> {
        let d = self.degree(v)?;
        Some(self.coeff_of_power(v, d as i32))
    }

    /// Coefficient polynomial of `v^k` (terms with exact exponent `k`, with
    /// `v` removed).
    pub fn coeff_of_power(&self, v: Var, k: i32) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m.exp(v) == k {
                out.add_term(m.with_exp(v, 0), c.clone());
            }
        }
        out
    }

    /// Multiply by a bare monomial (used for Laurent shifts like `z^-1`).
    pub fn mul_monomial(&self, m: &Monomial, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        SparsePoly {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.product(m), v.clone() * c.clone()))
                .collect(),
        }
    }
}

fn int_pow<T: Coeff>(c: &T, n: u32) -> T {
    let mut out = T::one();
    for _ in 0..n {
        out = out * c.clone();
    }
    out
}

impl<T: Coeff> Add for &SparsePoly<T> {
    type Output = SparsePoly<T>;
    fn add(self, rhs: &SparsePoly<T>) -> SparsePoly<T> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<T: Coeff> Sub for &SparsePoly<T> {
    type Output = SparsePoly<T>;
    fn sub(self, rhs: &SparsePoly<T>) -> SparsePoly<T> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl<T: Coeff> Mul for &SparsePoly<T> {
    type Output = SparsePoly<T>;
    fn mul(self, rhs: &SparsePoly<T>) -> SparsePoly<T> {
        let mut out = SparsePoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.product(m2), c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<T: Coeff> Neg for &SparsePoly<T> {
    type Output = SparsePoly<T>;
    fn neg(self) -> SparsePoly<T> {
        SparsePoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($imp:ident, $method:ident) => {
        impl<T: Coeff> $imp for SparsePoly<T> {
            type Output = SparsePoly<T>;
            fn $method(self, rhs: SparsePoly<T>) -> SparsePoly<T> {
                (&self).$method(&rhs)
            }
        }
        impl<T: Coeff> $imp<&SparsePoly<T>> for SparsePoly<T> {
            type Output = SparsePoly<T>;
            fn $method(self, rhs: &SparsePoly<T>) -> SparsePoly<T> {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl<T: Coeff> Neg for SparsePoly<T> {
    type Output = SparsePoly<T>;
    fn neg(self) -> SparsePoly<T> {
        -&self
    }
}

impl<T: Coeff + fmt::Display> fmt::Display for SparsePoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Descending graded-lex: matches the usual "highest power first" layout.
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let cs = format!("{}", c);
            let (sign, mag) = match cs.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", cs),
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            if m.is_one() {
                write!(f, "{}", mag)?;
            } else if mag == "1" {
                write!(f, "{}", m)?;
            } else {
                write!(f, "{}*{}", mag, m)?;
            }
        }
        Ok(())
    }
}

impl<T: Coeff + fmt::Display> fmt::Debug for SparsePoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparsePoly({})", self)
    }
}
