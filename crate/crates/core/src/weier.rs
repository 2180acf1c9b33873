//! The Weierstrass differential ring: polynomials in ℘, ℘′ over the constants
//! `z`, `w`, `g2`, `g3`, reduced modulo ℘′² = 4℘³ − g₂℘ − g₃, with the
//! x-derivation ∂℘ = ℘′, ∂℘′ = 6℘² − g₂/2.
//!
//! Canonical form: every term carries ℘′ to the power 0 or 1.  In
//! equianharmonic mode the modulus drops g₂ (g₂ ≡ 0) and no term may mention
//! `g2`.  An element of the field of elliptic functions is constant in x iff
//! its canonical form mentions neither ℘ nor ℘′, which is how constancy is
//! decided here.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::poly::{Coeff, Monomial, SparsePoly, Var};

/// Which Weierstrass modulus governs reduction.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    /// g₂ kept symbolic.
    Generic,
    /// g₂ ≡ 0; `g2` must not appear in any term.
    Equianharmonic,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Generic => "generic",
            Mode::Equianharmonic => "equianharmonic",
        }
    }

    /// Right-hand side of ℘′² in this mode.
    fn relation<T: Coeff>(self) -> SparsePoly<T> {
        let mut r = SparsePoly::monomial(Monomial::one().with_exp(Var::P, 3), T::from_int(4));
        r.add_term(Monomial::var(Var::G3), -T::one());
        if self == Mode::Generic {
            r.add_term(
                Monomial::one().with_exp(Var::G2, 1).with_exp(Var::P, 1),
                -T::one(),
            );
        }
        r
    }

    /// ∂℘′ in this mode.
    fn dpp<T: Coeff>(self) -> SparsePoly<T> {
        let mut d = SparsePoly::monomial(Monomial::one().with_exp(Var::P, 2), T::from_int(6));
        if self == Mode::Generic {
            d.add_term(
                Monomial::var(Var::G2),
                T::from_int(-1) / T::from_int(2),
            );
        }
        d
    }
}

/// A ring element in canonical form (℘′-degree ≤ 1).
#[derive(Clone, PartialEq, Eq)]
pub struct WeierstrassElement<T> {
    value: SparsePoly<T>,
    mode: Mode,
}

impl<T: Coeff> WeierstrassElement<T> {
    /// Canonicalize an arbitrary polynomial by rewriting ℘′² until every term
    /// has ℘′-exponent ≤ 1.  The result is independent of rewrite order.
    pub fn reduce(p: SparsePoly<T>, mode: Mode) -> Self {
        let relation = mode.relation::<T>();
        let mut out = SparsePoly::zero();
        let mut work = p;
        loop {
            let mut next = SparsePoly::zero();
            let mut dirty = false;
            for (m, c) in work.terms() {
                let k = m.exp(Var::Pp);
                if k <= 1 {
                    out.add_term(*m, c.clone());
                } else {
                    dirty = true;
                    let base = m.with_exp(Var::Pp, k % 2);
                    let reduced = relation
                        .pow((k / 2) as u32)
                        .mul_monomial(&base, c);
                    next = &next + &reduced;
                }
            }
            if !dirty {
                break;
            }
            work = next;
        }
        if mode == Mode::Equianharmonic {
            assert!(
                out.terms().all(|(m, _)| m.exp(Var::G2) == 0),
                "g2 appeared in an equianharmonic element"
            );
        }
        WeierstrassElement { value: out, mode }
    }

    pub fn zero(mode: Mode) -> Self {
        WeierstrassElement { value: SparsePoly::zero(), mode }
    }

    pub fn one(mode: Mode) -> Self {
        WeierstrassElement { value: SparsePoly::one(), mode }
    }

    pub fn constant(c: T, mode: Mode) -> Self {
        WeierstrassElement { value: SparsePoly::constant(c), mode }
    }

    pub fn from_poly(p: SparsePoly<T>, mode: Mode) -> Self {
        Self::reduce(p, mode)
    }

    pub fn var(v: Var, mode: Mode) -> Self {
        Self::from_poly(SparsePoly::var(v), mode)
    }

    pub fn value(&self) -> &SparsePoly<T> {
        &self.value
    }

    pub fn into_value(self) -> SparsePoly<T> {
        self.value
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn scaled(&self, c: &T) -> Self {
        WeierstrassElement { value: self.value.scaled(c), mode: self.mode }
    }

    pub fn scaled_int(&self, n: i64) -> Self {
        WeierstrassElement { value: self.value.scaled_int(n), mode: self.mode }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(self.mode);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    fn assert_same_mode(&self, other: &Self) {
        assert!(
            self.mode == other.mode,
            "mixed ring modes: {} vs {}",
            self.mode.name(),
            other.mode.name()
        );
    }

    /// The x-derivation: Leibniz rule with ∂℘ = ℘′, ∂℘′ = 6℘² − g₂/2 and
    /// z, w, g₂, g₃ constant, followed by canonical reduction.
    pub fn d_dx(&self) -> Self {
        let dpp = self.mode.dpp::<T>();
        let mut out = SparsePoly::zero();
        for (m, c) in self.value.terms() {
            let e = m.exp(Var::P);
            let k = m.exp(Var::Pp);
            if e > 0 {
                let dm = m.with_exp(Var::P, e - 1).with_exp(Var::Pp, k + 1);
                out.add_term(dm, c.clone() * T::from_int(e as i64));
            }
            if k > 0 {
                // canonical input has k <= 1, so this strips Pp entirely
                let base = m.with_exp(Var::Pp, k - 1);
                out = &out + &dpp.mul_monomial(&base, &(c.clone() * T::from_int(k as i64)));
            }
        }
        Self::reduce(out, self.mode)
    }

    pub fn d_dx_n(&self, n: u32) -> Self {
        let mut out = self.clone();
        for _ in 0..n {
            out = out.d_dx();
        }
        out
    }

    /// True iff no term mentions ℘ or ℘′.
    pub fn is_x_constant(&self) -> bool {
        self.value
            .terms()
            .all(|(m, _)| m.exp(Var::P) == 0 && m.exp(Var::Pp) == 0)
    }

    /// The element viewed as a polynomial in z, w, g₂, g₃ when x-constant.
    pub fn x_constant_part(&self) -> Option<&SparsePoly<T>> {
        if self.is_x_constant() {
            Some(&self.value)
        } else {
            None
        }
    }
}

impl<T: Coeff> Add for &WeierstrassElement<T> {
    type Output = WeierstrassElement<T>;
    fn add(self, rhs: &WeierstrassElement<T>) -> WeierstrassElement<T> {
        self.assert_same_mode(rhs);
        WeierstrassElement { value: &self.value + &rhs.value, mode: self.mode }
    }
}

impl<T: Coeff> Sub for &WeierstrassElement<T> {
    type Output = WeierstrassElement<T>;
    fn sub(self, rhs: &WeierstrassElement<T>) -> WeierstrassElement<T> {
        self.assert_same_mode(rhs);
        WeierstrassElement { value: &self.value - &rhs.value, mode: self.mode }
    }
}

impl<T: Coeff> Mul for &WeierstrassElement<T> {
    type Output = WeierstrassElement<T>;
    fn mul(self, rhs: &WeierstrassElement<T>) -> WeierstrassElement<T> {
        self.assert_same_mode(rhs);
        WeierstrassElement::reduce(&self.value * &rhs.value, self.mode)
    }
}

impl<T: Coeff> Neg for &WeierstrassElement<T> {
    type Output = WeierstrassElement<T>;
    fn neg(self) -> WeierstrassElement<T> {
        WeierstrassElement { value: -&self.value, mode: self.mode }
    }
}

macro_rules! forward_owned_elem_binop {
    ($imp:ident, $method:ident) => {
        impl<T: Coeff> $imp for WeierstrassElement<T> {
            type Output = WeierstrassElement<T>;
            fn $method(self, rhs: WeierstrassElement<T>) -> WeierstrassElement<T> {
                (&self).$method(&rhs)
            }
        }
        impl<T: Coeff> $imp<&WeierstrassElement<T>> for WeierstrassElement<T> {
            type Output = WeierstrassElement<T>;
            fn $method(self, rhs: &WeierstrassElement<T>) -> WeierstrassElement<T> {
                (&self).$method(rhs)
            }
        }
        impl<T: Coeff> $imp<WeierstrassElement<T>> for &WeierstrassElement<T> {
            type Output = WeierstrassElement<T>;
            fn $method(self, rhs: WeierstrassElement<T>) -> WeierstrassElement<T> {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_elem_binop!(Add, add);
forward_owned_elem_binop!(Sub, sub);
forward_owned_elem_binop!(Mul, mul);

impl<T: Coeff + fmt::Display> fmt::Display for WeierstrassElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl<T: Coeff + fmt::Display> fmt::Debug for WeierstrassElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeierstrassElement[{}]({})", self.mode.name(), self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Poly, Rat, RingElem};
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    fn pp2() -> Poly {
        Poly::var(Var::Pp).pow(2)
    }

    fn relation_rhs(mode: Mode) -> Poly {
        mode.relation::<Rat>()
    }

    #[test]
    fn reduce_relation() {
        let e = RingElem::reduce(pp2(), Mode::Generic);
        assert_eq!(e.value(), &relation_rhs(Mode::Generic));

        let e3 = RingElem::reduce(Poly::var(Var::Pp).pow(3), Mode::Generic);
        let expect = &Poly::var(Var::Pp) * &relation_rhs(Mode::Generic);
        assert_eq!(e3.value(), &expect);

        let eq = RingElem::reduce(pp2(), Mode::Equianharmonic);
        let expect = &Poly::var(Var::P).pow(3).scaled_int(4) - &Poly::var(Var::G3);
        assert_eq!(eq.value(), &expect);
    }

    #[test]
    fn derivation_basics() {
        let p = RingElem::var(Var::P, Mode::Generic);
        assert_eq!(p.d_dx().value(), &Poly::var(Var::Pp));

        let pp = RingElem::var(Var::Pp, Mode::Generic);
        let expect = &Poly::var(Var::P).pow(2).scaled_int(6)
            - &Poly::var(Var::G2).scaled(&Rat::new(1.into(), 2.into()));
        assert_eq!(pp.d_dx().value(), &expect);

        let p3 = p.pow(3);
        let expect = &Poly::var(Var::P).pow(2).scaled_int(3) * &Poly::var(Var::Pp);
        assert_eq!(p3.d_dx().value(), &expect);
    }

    #[test]
    fn derivation_kills_the_modulus() {
        // d/dx of (Pp^2 - 4P^3 + g2 P + g3) reduces to zero
        let p = &(&pp2() - &Poly::var(Var::P).pow(3).scaled_int(4))
            + &(&(&Poly::var(Var::G2) * &Poly::var(Var::P)) + &Poly::var(Var::G3));
        let e = RingElem::reduce(p, Mode::Generic);
        assert!(e.is_zero());
        assert!(e.d_dx().is_zero());
    }

    #[test]
    fn iterated_derivation() {
        let p = RingElem::var(Var::P, Mode::Generic);
        assert_eq!(p.d_dx_n(0), p);
        assert_eq!(p.d_dx_n(2), p.d_dx().d_dx());
        let c = RingElem::from_poly(
            &(&Poly::var(Var::Z) * &Poly::var(Var::Z)) + &Poly::var(Var::G3),
            Mode::Generic,
        );
        for k in 1..4 {
            assert!(c.d_dx_n(k).is_zero());
        }
    }

    #[test]
    fn x_constancy() {
        let c = RingElem::from_poly(
            &(&Poly::var(Var::Z) * &Poly::var(Var::Z)) + &Poly::var(Var::G3),
            Mode::Equianharmonic,
        );
        assert!(c.is_x_constant());
        assert_eq!(c.x_constant_part(), Some(c.value()));

        let p = RingElem::var(Var::P, Mode::Equianharmonic);
        assert!(!p.is_x_constant());
        assert!(p.x_constant_part().is_none());
    }

    /// Every x-constant is killed by the derivation.
    #[test]
    fn derivation_kills_constants() {
        for v in [Var::Z, Var::W, Var::G2, Var::G3] {
            let e = RingElem::var(v, Mode::Generic);
            assert!(e.d_dx().is_zero());
        }
    }

    /// No nonconstant first integrals: on monomials of total degree <= 6 that
    /// mention P or Pp, the derivation is nonzero.  Exhaustive.
    #[test]
    fn derivation_kernel_is_constants() {
        for zd in 0..=2i32 {
            for g2d in 0..=2i32 {
                for g3d in 0..=2i32 {
                    for pd in 0..=6i32 {
                        for ppd in 0..=1i32 {
                            if pd == 0 && ppd == 0 {
                                continue;
                            }
                            let m = Monomial::one()
                                .with_exp(Var::Z, zd)
                                .with_exp(Var::G2, g2d)
                                .with_exp(Var::G3, g3d)
                                .with_exp(Var::P, pd)
                                .with_exp(Var::Pp, ppd);
                            if m.total_degree() > 6 {
                                continue;
                            }
                            let e = RingElem::from_poly(
                                Poly::monomial(m, Rat::one()),
                                Mode::Generic,
                            );
                            assert!(
                                !e.d_dx().is_zero(),
                                "monomial {} unexpectedly in the kernel",
                                m
                            );
                        }
                    }
                }
            }
        }
    }

    /// Single-step rewriting, choosing either the first or the last reducible
    /// term, reaches the same normal form as `reduce`.
    fn reduce_single_step(p: &Poly, mode: Mode, leftmost: bool) -> Poly {
        let mut cur = p.clone();
        loop {
            let pick = {
                let mut it = cur
                    .terms()
                    .filter(|(m, _)| m.exp(Var::Pp) >= 2)
                    .map(|(m, c)| (*m, c.clone()));
                if leftmost { it.next() } else { it.last() }
            };
            let Some((m, c)) = pick else { break };
            let k = m.exp(Var::Pp);
            let base = m.with_exp(Var::Pp, k - 2);
            let repl = mode.relation::<Rat>().mul_monomial(&base, &c);
            cur = &(&cur - &Poly::monomial(m, c)) + &repl;
        }
        cur
    }

    proptest! {
        #[test]
        fn confluence(k in 2u32..=8, n in -5i64..=5, d in 1i64..=3, extra in 0i32..=2) {
            let c = Rat::new(n.into(), d.into());
            if c.is_zero() { return Ok(()); }
            let m = Monomial::one()
                .with_exp(Var::Pp, k as i32)
                .with_exp(Var::P, extra);
            let p = &Poly::monomial(m, c) + &Poly::var(Var::G3);
            for mode in [Mode::Generic, Mode::Equianharmonic] {
                let a = reduce_single_step(&p, mode, true);
                let b = reduce_single_step(&p, mode, false);
                let r = RingElem::reduce(p.clone(), mode);
                prop_assert_eq!(&a, r.value());
                prop_assert_eq!(&b, r.value());
            }
        }

        #[test]
        fn derivation_leibniz(zd in -1i32..=1, pd in 0i32..=3, ppd in 0i32..=1,
                              pd2 in 0i32..=2, ppd2 in 0i32..=1, n in -4i64..=4) {
            let c = Rat::new(n.into(), 2.into());
            let a = RingElem::from_poly(
                &Poly::monomial(
                    Monomial::one().with_exp(Var::Z, zd).with_exp(Var::P, pd).with_exp(Var::Pp, ppd),
                    Rat::one(),
                ) + &Poly::constant(c),
                Mode::Generic,
            );
            let b = RingElem::from_poly(
                &Poly::monomial(
                    Monomial::one().with_exp(Var::P, pd2).with_exp(Var::Pp, ppd2),
                    Rat::one(),
                ) + &Poly::var(Var::G3),
                Mode::Generic,
            );
            let lhs = (&a * &b).d_dx();
            let rhs = &(&a.d_dx() * &b) + &(&a * &b.d_dx());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
