//! Spectral curves of the Halphen operator ∂³ − g(g+2)℘∂ − ½g(g+2)℘′ in the
//! equianharmonic case (g₂ = 0), for every genus g ≥ 1 with g ≢ 2 (mod 3).
//!
//! The pipeline mirrors the factorization theory for the operator: the pair
//! (S, Q) of ring elements satisfies two differential identities (third and
//! fifth order); eliminating Q yields an eighth-order linear ODE on S whose
//! coefficients are polynomial in ℘, ℘′, z, g₃.  S is found by a finite
//! linear ansatz in powers of ℘³ with Laurent-polynomial coefficients in z,
//! Q is recovered either by a closed form (case I) or by a second linear
//! ansatz (case II), and the curve coefficients H (always zero here) and F
//! come out of the order-two/order-three symmetric functions of the
//! factorization.  Everything is verified by exact residuals downstream.
//!
//! Sign conventions of the internal coefficient tables are calibrated against
//! the embedded example corpus (see `verify::corpus`); the calibration is
//! exercised by the test suite.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::poly::{Monomial, Var};
use crate::solve;
use crate::weier::Mode;
use crate::{Error, Poly, Rat, RingElem};

const MODE: Mode = Mode::Equianharmonic;

/// Case split of valid genera: case I is g ≡ 0 (mod 3) (g = 6M or 6M+3),
/// case II is g ≡ 1 (mod 3) (g = 6M−2 or 6M+1).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Case {
    I,
    II,
}

impl Case {
    pub fn name(self) -> &'static str {
        match self {
            Case::I => "I",
            Case::II => "II",
        }
    }
}

/// Classification data for a valid genus.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GenusProfile {
    pub g: u32,
    pub case: Case,
    /// Index of the free top coefficient (A_M or B_M).
    pub m: u32,
    /// g = 3r + epsilon.
    pub r: u32,
    pub epsilon: u32,
    /// Order of the commuting operator, N = 3r + 1 + epsilon = g + 1.
    pub order: u32,
}

/// Validate a genus and compute its case data.
pub fn classify(g: u32) -> Result<GenusProfile, Error> {
    if g == 0 || g % 3 == 2 {
        return Err(Error::InvalidGenus(g));
    }
    let (case, m) = match g % 6 {
        0 => (Case::I, g / 6),
        3 => (Case::I, (g - 3) / 6),
        4 => (Case::II, (g + 2) / 6),
        1 => (Case::II, (g - 1) / 6),
        _ => unreachable!(),
    };
    let epsilon = if case == Case::I { 0 } else { 1 };
    let r = (g - epsilon) / 3;
    Ok(GenusProfile { g, case, m, r, epsilon, order: g + 1 })
}

/// All valid genera up to and including `g_max`.
pub fn valid_genera(g_max: u32) -> Vec<u32> {
    (1..=g_max).filter(|g| g % 3 != 2).collect()
}

fn rat_i128(n: i128) -> Rat {
    Rat::from_integer(n.into())
}

fn pvar(v: Var) -> Poly {
    Poly::var(v)
}

fn p_pow(k: u32) -> Poly {
    Poly::monomial(Monomial::one().with_exp(Var::P, k as i32), Rat::one())
}

fn re(p: Poly) -> RingElem {
    RingElem::from_poly(p, MODE)
}

/// f(x) = −g(g+2)℘, the first-order coefficient of the operator.
pub fn operator_potential(g: u32) -> RingElem {
    let c = -(g as i128) * (g as i128 + 2);
    re(p_pow(1).scaled(&rat_i128(c)))
}

/// Coefficients m₀..m₈ of the eighth-order ODE m₀S + m₁S′ + … + m₈S⁽⁸⁾ = 0
/// obtained by eliminating Q between the two compatibility identities.
pub fn s_ode_coefficients(g: u32) -> [RingElem; 9] {
    let g = g as i128;
    let z2 = pvar(Var::Z).pow(2);
    let g3 = pvar(Var::G3);

    let m0 = (&p_pow(2) * &(&p_pow(3).scaled_int(4) - &g3))
        .mul_monomial(&Monomial::var(Var::Pp), &Rat::one())
        .scaled(&rat_i128(16 * (g - 3) * (g - 1) * g * (2 + g) * (3 + g) * (5 + g)));

    let m1 = {
        let head = &g3
            * &(&g3.scaled(&rat_i128(g * (2 + g) * (5 * g * g + 10 * g - 16)))
                - &z2.scaled_int(12));
        let mid = &(&z2.scaled_int(1080)
            - &g3.scaled(&rat_i128(
                2 * g * (2 + g) * (1080 - 918 * g - 347 * g * g + 112 * g.pow(3) + 28 * g.pow(4)),
            )))
            * &p_pow(3);
        let tail = p_pow(6)
            .scaled(&rat_i128(128 * g * (g - 3) * (g - 1) * (2 + g) * (3 + g) * (5 + g)));
        &(&head.scaled_int(9) + &mid) + &tail
    };

    let m2 = {
        let inner = &(&g3.scaled(&rat_i128(9 * g * (2 + g) * (5 * g * g + 10 * g - 16)))
            - &z2.scaled_int(108))
            + &p_pow(3).scaled(&rat_i128(16 * (g - 1) * g * (2 + g) * (3 + g) * (g * g + 2 * g - 30)));
        (&inner * &p_pow(1)).mul_monomial(&Monomial::var(Var::Pp), &Rat::one())
    };

    let m3 = &(&g3 * &p_pow(2)).scaled(&rat_i128(12 * g * (2 + g) * (11 * g * g + 22 * g - 57)))
        - &p_pow(5).scaled(&rat_i128(312 * g * (g - 1) * (2 + g) * (3 + g)));

    let m4 = (&g3.scaled(&rat_i128(4 * (2 + g)))
        - &p_pow(3).scaled(&rat_i128(3 * (g - 1) * (2 + g) * (3 + g))))
        .mul_monomial(&Monomial::var(Var::Pp), &rat_i128(12 * g));

    let m5 = (&p_pow(1) * &(&p_pow(3) - &g3)).scaled(&rat_i128(48 * g * (2 + g)));

    let m6 = p_pow(2).mul_monomial(&Monomial::var(Var::Pp), &rat_i128(24 * g * (2 + g)));

    let m7 = &p_pow(3).scaled_int(40) - &g3.scaled_int(4);

    let m8 = p_pow(1).mul_monomial(&Monomial::var(Var::Pp), &rat_i128(-4));

    [m0, m1, m2, m3, m4, m5, m6, m7, m8].map(re)
}

/// Apply the eighth-order ODE to S: Σ m_j S⁽ʲ⁾, canonical.  Zero iff S solves it.
pub fn s_ode_apply(s: &RingElem, g: u32) -> RingElem {
    let ms = s_ode_coefficients(g);
    let mut out = RingElem::zero(MODE);
    let mut deriv = s.clone();
    for (j, mj) in ms.iter().enumerate() {
        if j > 0 {
            deriv = deriv.d_dx();
        }
        out = &out + &(mj * &deriv);
    }
    out
}

/// Residual of the third-order compatibility identity
/// 3zQ′ − (2S‴ + 2fS′ + Sf′).
pub fn compat_first_residual(s: &RingElem, q: &RingElem, g: u32) -> RingElem {
    let f = operator_potential(g);
    let z = re(pvar(Var::Z));
    let lhs = (&z * &q.d_dx()).scaled_int(3);
    let rhs = &(&s.d_dx_n(3).scaled_int(2) + &(&f * &s.d_dx()).scaled_int(2)) + &(s * &f.d_dx());
    &lhs - &rhs
}

/// Residual of the fifth-order compatibility identity
/// 8f²Q′ + 36zS′ + 9Q′f″ + 15f′Q″ + 2Qf‴ + 2f(4Qf′ + 5Q‴) + 2Q⁽⁵⁾.
pub fn compat_second_residual(s: &RingElem, q: &RingElem, g: u32) -> RingElem {
    let f = operator_potential(g);
    let (fx, fxx, fxxx) = (f.d_dx(), f.d_dx_n(2), f.d_dx_n(3));
    let z = re(pvar(Var::Z));
    let qx = q.d_dx();
    let qxx = qx.d_dx();
    let qxxx = qxx.d_dx();
    let qx5 = qxxx.d_dx().d_dx();
    let mut t = (&(&f * &f) * &qx).scaled_int(8);
    t = &t + &(&z * &s.d_dx()).scaled_int(36);
    t = &t + &(&qx * &fxx).scaled_int(9);
    t = &t + &(&fx * &qxx).scaled_int(15);
    t = &t + &(q * &fxxx).scaled_int(2);
    t = &t + &(&f * &(&(q * &fx).scaled_int(4) + &qxxx.scaled_int(5))).scaled_int(2);
    &t + &qx5.scaled_int(2)
}

/// Which sequence a genus carries.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SeqKind {
    A,
    B,
}

/// The Laurent-coefficient sequence of the S ansatz: entries r ↦ A_r(z) (case
/// I, r = 0..M) or r ↦ B_r(z) (case II, r = 1..M), as polynomials in z (Laurent)
/// and g₃.  `free_scale` records the overall scalar applied to the solution
/// (1 at solve time, the normalization factor afterwards).
#[derive(Clone, PartialEq, Debug)]
pub struct CoefficientSequence {
    pub kind: SeqKind,
    pub entries: BTreeMap<u32, Poly>,
    pub free_scale: Rat,
}

impl CoefficientSequence {
    pub fn entry(&self, r: u32) -> Poly {
        self.entries.get(&r).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn scaled(&self, c: &Rat) -> Self {
        CoefficientSequence {
            kind: self.kind,
            entries: self.entries.iter().map(|(r, p)| (*r, p.scaled(c))).collect(),
            free_scale: self.free_scale.clone() * c,
        }
    }

    /// Laurent floor over all entries (None when the sequence is empty).
    pub fn laurent_floor(&self) -> Option<i64> {
        self.entries.values().filter_map(|p| p.low_degree(Var::Z)).min()
    }
}

/// ℘-exponent of the ansatz term for sequence index r.
fn ansatz_ppow(case: Case, r: u32) -> u32 {
    match case {
        Case::I => 3 * r,
        Case::II => 3 * r - 1,
    }
}

/// The z-exponent of the pinned top coefficient: const/z for g ∈ {6M, 6M−2},
/// const for g ∈ {6M+3, 6M+1}.
fn top_z_exponent(g: u32) -> i32 {
    match g % 6 {
        0 | 4 => -1,
        3 | 1 => 0,
        _ => unreachable!(),
    }
}

/// Weight-homogeneous ansatz slots (r, i, j) with 3 + 3i + 6j + 2·ppow = g,
/// i ≥ floor.  The S term for a slot is z^{1+i} g₃^j ℘^ppow.
fn s_ansatz_slots(profile: &GenusProfile, floor: i32) -> Vec<(u32, i32, u32)> {
    let g = profile.g as i64;
    let r_range = match profile.case {
        Case::I => 0..=profile.m,
        Case::II => 1..=profile.m,
    };
    let mut slots = Vec::new();
    for r in r_range {
        let ppow = ansatz_ppow(profile.case, r) as i64;
        let wrem = g - 3 - 2 * ppow; // 3i + 6j
        let mut i = floor;
        while 3 * (i as i64) <= wrem {
            let rem = wrem - 3 * i as i64;
            if rem % 6 == 0 {
                slots.push((r, i, (rem / 6) as u32));
            }
            i += 1;
        }
    }
    slots
}

fn slot_elem(case: Case, r: u32, i: i32, j: u32) -> RingElem {
    let m = Monomial::one()
        .with_exp(Var::Z, 1 + i)
        .with_exp(Var::G3, j as i32)
        .with_exp(Var::P, ansatz_ppow(case, r) as i32);
    re(Poly::monomial(m, Rat::one()))
}

/// Solve for S: substitute the case ansatz with unknown Laurent coefficients
/// into the eighth-order ODE, collect the canonical form by monomials, and
/// solve the resulting exact linear system.  The top coefficient (A_M or B_M)
/// is pinned to the convention monomial with constant 1; for g = 1 the ansatz
/// is empty and S = 0.
pub fn solve_s(profile: &GenusProfile) -> Result<(RingElem, CoefficientSequence), Error> {
    let g = profile.g;
    let kind = if profile.case == Case::I { SeqKind::A } else { SeqKind::B };
    if profile.case == Case::II && profile.m == 0 {
        // degenerate profile: g = 1, S = 0
        let seq = CoefficientSequence { kind, entries: BTreeMap::new(), free_scale: Rat::one() };
        return Ok((RingElem::zero(MODE), seq));
    }

    let top_i = top_z_exponent(g);
    let top = slot_elem(profile.case, profile.m, top_i, 0);
    let unknowns: Vec<(u32, i32, u32)> = s_ansatz_slots(profile, -2)
        .into_iter()
        .filter(|&(r, _, _)| r < profile.m)
        .collect();

    let images: Vec<RingElem> = unknowns
        .iter()
        .map(|&(r, i, j)| s_ode_apply(&slot_elem(profile.case, r, i, j), g))
        .collect();
    let top_image = s_ode_apply(&top, g);

    let mut monos: std::collections::BTreeSet<Monomial> = std::collections::BTreeSet::new();
    for im in images.iter().chain([&top_image]) {
        monos.extend(im.value().terms().map(|(m, _)| *m));
    }
    let rows: Vec<Vec<Rat>> = monos
        .iter()
        .map(|m| images.iter().map(|im| im.value().coeff(m).cloned().unwrap_or_else(Rat::zero)).collect())
        .collect();
    let rhs: Vec<Rat> = monos
        .iter()
        .map(|m| -top_image.value().coeff(m).cloned().unwrap_or_else(Rat::zero))
        .collect();

    let sol = solve::solve(rows, rhs, unknowns.len())
        .ok_or(Error::InconsistentSystem("solving the S ansatz"))?;
    if !sol.nullspace.is_empty() {
        return Err(Error::InconsistentSystem("S ansatz left residual freedom"));
    }

    let mut s = top;
    let mut entries: BTreeMap<u32, Poly> = BTreeMap::new();
    entries.insert(
        profile.m,
        Poly::monomial(Monomial::one().with_exp(Var::Z, top_i), Rat::one()),
    );
    for (&(r, i, j), c) in unknowns.iter().zip(&sol.particular) {
        if c.is_zero() {
            continue;
        }
        s = &s + &slot_elem(profile.case, r, i, j).scaled(c);
        let m = Monomial::one().with_exp(Var::Z, i).with_exp(Var::G3, j as i32);
        entries
            .entry(r)
            .or_insert_with(Poly::zero)
            .add_term(m, c.clone());
    }
    let seq = CoefficientSequence { kind, entries, free_scale: Rat::one() };

    // Laurent floor -1 is an empirical invariant of the solutions, asserted
    // rather than assumed (the solver window reaches -2).
    if let Some(floor) = seq.laurent_floor() {
        if floor < -1 {
            return Err(Error::InconsistentSystem("sequence violates the Laurent floor"));
        }
    }
    Ok((s, seq))
}

/// Case-I closed form for Q in terms of the A-sequence:
/// Q = Σ_r [6r(2−2g−g²+18r+36r²) − g(2+g)]/(3(3r+1)) · A_r ℘^{1+3r}
///   − Σ_r 2g₃ r(9r²−1)/(3r+1) · A_r ℘^{3r−2}.
pub fn q_closed_form(seq: &CoefficientSequence, g: u32) -> RingElem {
    let gi = g as i128;
    let mut out = RingElem::zero(MODE);
    for (&r, a) in &seq.entries {
        let ri = r as i128;
        let c1 = Rat::new(
            (6 * ri * (2 - 2 * gi - gi * gi + 18 * ri + 36 * ri * ri) - gi * (2 + gi)).into(),
            (3 * (3 * ri + 1)).into(),
        );
        out = &out + &re((a * &p_pow(1 + 3 * r)).scaled(&c1));
        if r >= 1 {
            let c2 = Rat::new((2 * ri * (9 * ri * ri - 1)).into(), (3 * ri + 1).into());
            let term = (&(a * &pvar(Var::G3)) * &p_pow(3 * r - 2)).scaled(&(-c2));
            out = &out + &re(term);
        }
    }
    out
}

/// Weight-homogeneous ansatz slots for Q (weight g−1): q-term z^i g₃^j ℘^k.
fn q_ansatz_slots(profile: &GenusProfile) -> Vec<(u32, i32, u32)> {
    let g = profile.g as i64;
    let mut slots = Vec::new();
    for k in 0..=(3 * profile.m + 1) {
        let wrem = g - 1 - 2 * k as i64;
        let mut i = -2i32;
        while 3 * (i as i64) <= wrem {
            let rem = wrem - 3 * i as i64;
            if rem % 6 == 0 {
                slots.push((k, i, (rem / 6) as u32));
            }
            i += 1;
        }
    }
    slots
}

fn q_slot_elem(k: u32, i: i32, j: u32) -> RingElem {
    let m = Monomial::one()
        .with_exp(Var::Z, i)
        .with_exp(Var::G3, j as i32)
        .with_exp(Var::P, k as i32);
    re(Poly::monomial(m, Rat::one()))
}

/// Construct Q for a solved S.
///
/// Case I evaluates the closed form; case II posits Q = Σ q_k(z)℘^k (no ℘′
/// terms, k ≤ 3M+1) and solves the linear system produced by both
/// compatibility identities, including the z-dependent integration constant
/// q₀ fixed by the fifth-order identity.  Both routes are verified by zero
/// residuals of the two identities.
pub fn build_q(
    profile: &GenusProfile,
    s: &RingElem,
    seq: &CoefficientSequence,
) -> Result<RingElem, Error> {
    let g = profile.g;
    let q = match profile.case {
        Case::I => q_closed_form(seq, g),
        Case::II => {
            let slots = q_ansatz_slots(profile);
            let zero_q = RingElem::zero(MODE);
            let base1 = compat_first_residual(s, &zero_q, g);
            let base2 = compat_second_residual(s, &zero_q, g);
            let images: Vec<(RingElem, RingElem)> = slots
                .iter()
                .map(|&(k, i, j)| {
                    let e = q_slot_elem(k, i, j);
                    (
                        &compat_first_residual(s, &e, g) - &base1,
                        &compat_second_residual(s, &e, g) - &base2,
                    )
                })
                .collect();
            let mut monos1: std::collections::BTreeSet<Monomial> = std::collections::BTreeSet::new();
            let mut monos2: std::collections::BTreeSet<Monomial> = std::collections::BTreeSet::new();
            for (a, b) in &images {
                monos1.extend(a.value().terms().map(|(m, _)| *m));
                monos2.extend(b.value().terms().map(|(m, _)| *m));
            }
            monos1.extend(base1.value().terms().map(|(m, _)| *m));
            monos2.extend(base2.value().terms().map(|(m, _)| *m));
            let mut rows = Vec::new();
            let mut rhs = Vec::new();
            for m in &monos1 {
                rows.push(
                    images
                        .iter()
                        .map(|(a, _)| a.value().coeff(m).cloned().unwrap_or_else(Rat::zero))
                        .collect::<Vec<_>>(),
                );
                rhs.push(-base1.value().coeff(m).cloned().unwrap_or_else(Rat::zero));
            }
            for m in &monos2 {
                rows.push(
                    images
                        .iter()
                        .map(|(_, b)| b.value().coeff(m).cloned().unwrap_or_else(Rat::zero))
                        .collect::<Vec<_>>(),
                );
                rhs.push(-base2.value().coeff(m).cloned().unwrap_or_else(Rat::zero));
            }
            let sol = solve::solve(rows, rhs, slots.len())
                .ok_or(Error::InconsistentSystem("solving the Q ansatz"))?;
            if !sol.nullspace.is_empty() {
                // Only g = 1 leaves Q unconstrained (the bare-Q coefficient of
                // the fifth-order identity carries a factor g−1); Q = 1 then.
                if g == 1 && sol.particular.iter().all(Rat::is_zero) {
                    RingElem::one(MODE)
                } else {
                    return Err(Error::InconsistentSystem("Q ansatz left residual freedom"));
                }
            } else {
                let mut q = RingElem::zero(MODE);
                for (&(k, i, j), c) in slots.iter().zip(&sol.particular) {
                    if !c.is_zero() {
                        q = &q + &q_slot_elem(k, i, j).scaled(c);
                    }
                }
                q
            }
        }
    };
    if !compat_first_residual(s, &q, g).is_zero() || !compat_second_residual(s, &q, g).is_zero() {
        return Err(Error::InconsistentSystem("verifying Q against the compatibility identities"));
    }
    Ok(q)
}

/// The solved pair for one genus.
#[derive(Clone, Debug)]
pub struct SqPair {
    pub s: RingElem,
    pub q: RingElem,
    pub profile: GenusProfile,
}

impl SqPair {
    pub fn scaled(&self, c: &Rat) -> Self {
        SqPair { s: self.s.scaled(c), q: self.q.scaled(c), profile: self.profile }
    }
}

fn big_product(factors: &[RingElem]) -> RingElem {
    let mut out = RingElem::one(MODE);
    for f in factors {
        out = &out * f;
    }
    out
}

/// H from the order-two symmetric function of the factorization; must be
/// x-constant, and vanishes identically in the equianharmonic case.
pub fn compute_h(pair: &SqPair) -> Result<Poly, Error> {
    let g = pair.profile.g;
    let (s, q) = (&pair.s, &pair.q);
    let f = operator_potential(g);
    let (fx, fxx) = (f.d_dx(), f.d_dx_n(2));
    let sx = s.d_dx();
    let sxx = sx.d_dx();
    let qx = q.d_dx();
    let qxx = qx.d_dx();
    let qxxx = qxx.d_dx();
    let qx4 = qxxx.d_dx();
    let z = re(pvar(Var::Z));

    let mut t = big_product(&[f.clone(), f.clone(), q.clone(), q.clone()]).scaled_int(4);
    t = &t + &(&sx * &sx).scaled_int(12);
    t = &t + &(&(q * q) * &fxx).scaled_int(2);
    t = &t + &(&qxx * &qxx);
    let paren = &(&(q * &qxx).scaled_int(10) - &(s * s).scaled_int(12)) - &(&qx * &qx).scaled_int(5);
    t = &t + &(&paren * &f);
    t = &t - &(s * &sxx).scaled_int(24);
    t = &t - &(&qx * &qxxx).scaled_int(2);
    let paren2 = &(&(&z * s).scaled_int(36) + &(&fx * &qx).scaled_int(5)) + &qx4.scaled_int(2);
    t = &t + &(&paren2 * q);

    let t = t.scaled(&Rat::new(1.into(), 12.into()));
    t.x_constant_part()
        .cloned()
        .ok_or(Error::NonConstant { what: "H" })
}

/// F from the order-three symmetric function; must be x-constant.  Scales as
/// λ³ under (S, Q) → (λS, λQ).
pub fn compute_f(pair: &SqPair) -> Result<Poly, Error> {
    let g = pair.profile.g;
    let (s, q) = (&pair.s, &pair.q);
    let f = operator_potential(g);
    let (fx, fxx) = (f.d_dx(), f.d_dx_n(2));
    let sx = s.d_dx();
    let sxx = sx.d_dx();
    let qx = q.d_dx();
    let qxx = qx.d_dx();
    let qxxx = qxx.d_dx();
    let qx4 = qxxx.d_dx();
    let z = re(pvar(Var::Z));

    let mut t = big_product(&[z.clone(), s.clone(), s.clone(), s.clone()]).scaled_int(432);
    t = &t - &big_product(&[fx.clone(), qx.clone(), qx.clone(), qx.clone()]).scaled_int(63);
    let cubic = &(&(&(&z * &z).scaled_int(108)
        + &big_product(&[f.clone(), f.clone(), f.clone()]).scaled_int(8))
        - &(&fx * &fx).scaled_int(3))
        + &(&f * &fxx).scaled_int(6);
    t = &t + &(&big_product(&[q.clone(), q.clone(), q.clone()]) * &cubic).scaled_int(4);
    t = &t - &big_product(&[f.clone(), qx.clone(), qx.clone(), qxx.clone()]).scaled_int(42);
    t = &t + &big_product(&[sx.clone(), sx.clone(), qxx.clone()]).scaled_int(144);
    t = &t - &big_product(&[qxx.clone(), qxx.clone(), qxx.clone()]).scaled_int(4);
    t = &t - &big_product(&[qx.clone(), sx.clone(), sxx.clone()]).scaled_int(432);
    t = &t + &big_product(&[qx.clone(), qxx.clone(), qxxx.clone()]).scaled_int(12);
    let inner36 = &(&(&(&(&z * &(&qx * &qx)).scaled_int(3)
        + &big_product(&[f.clone(), qx.clone(), sx.clone()]).scaled_int(16))
        - &(&qxx * &sxx).scaled_int(4))
        + &(&sx * &qxxx).scaled_int(4));
    t = &t - &(s * inner36).scaled_int(36);
    t = &t - &(&(&qx * &qx) * &qx4).scaled_int(18);
    let inner_s2 = &(&(&fx * &qx).scaled_int(7) + &(&f * &qxx).scaled_int(10)) + &qx4.scaled_int(2);
    t = &t + &(&(s * s) * &inner_s2).scaled_int(36);

    let mut inner_q = (&(&f * &f) * &(&(s * s).scaled_int(4) - &(&qx * &qx))).scaled_int(12);
    inner_q = &inner_q - &big_product(&[s.clone(), fx.clone(), sx.clone()]).scaled_int(24);
    inner_q = &inner_q + &big_product(&[z.clone(), qx.clone(), sx.clone()]).scaled_int(72);
    inner_q = &inner_q + &(&(s * s) * &fxx).scaled_int(12);
    inner_q = &inner_q - &(&(&qx * &qx) * &fxx).scaled_int(3);
    inner_q = &inner_q + &big_product(&[fx.clone(), qx.clone(), qxx.clone()]).scaled_int(16);
    inner_q = &inner_q + &(&sxx * &sxx).scaled_int(72);
    inner_q = &inner_q - &(&qxxx * &qxxx).scaled_int(2);
    let f_paren = &(&(&(&sx * &sx).scaled_int(12) + &(&qxx * &qxx).scaled_int(7))
        + &(s * &sxx).scaled_int(48))
        - &(&qx * &qxxx).scaled_int(4);
    inner_q = &inner_q + &(&f * &f_paren).scaled_int(2);
    inner_q = &inner_q + &(&qxx * &qx4).scaled_int(4);
    t = &t + &(q * &inner_q).scaled_int(6);

    let mut inner_q2 = (&(&f * &f) * &qxx).scaled_int(10);
    inner_q2 = &inner_q2 + &(&fxx * &qxx).scaled_int(2);
    inner_q2 = &inner_q2 - &(&z * &sxx).scaled_int(72);
    inner_q2 = &inner_q2 - &(&fx * &qxxx).scaled_int(2);
    let f_paren2 = &(&(&z * s).scaled_int(-36) + &(&fx * &qx).scaled_int(3)) + &qx4.scaled_int(2);
    inner_q2 = &inner_q2 + &(&f * &f_paren2);
    t = &t + &(&(q * q) * &inner_q2).scaled_int(12);

    let t = t.scaled(&Rat::new(1.into(), 432.into()));
    t.x_constant_part()
        .cloned()
        .ok_or(Error::NonConstant { what: "F" })
}

/// Closed-form F from the coefficient sequence (cross-route oracle against
/// [`compute_f`]); cubic in the sequence, so it tracks the same scale.
///
/// Case I uses the product formula in A₀, A₁, A₂.  Case II uses the
/// corresponding single-fraction formula in B₁, B₂, B₃ (sign and index
/// conventions calibrated against the example corpus).  For g = 1 every
/// sequence entry vanishes and the formula degenerates; there S = 0 forces
/// Q to be constant and F = scale³·(z² + g₃/4) directly.
pub fn f_closed_form(seq: &CoefficientSequence, g: u32) -> Poly {
    let z2 = pvar(Var::Z).pow(2);
    let g3 = pvar(Var::G3);
    let gi = g as i128;
    match (seq.kind, g) {
        (SeqKind::B, 1) => {
            let scale3 = seq.free_scale.clone() * &seq.free_scale * &seq.free_scale;
            (&z2 + &g3.scaled(&Rat::new(1.into(), 4.into()))).scaled(&scale3)
        }
        (SeqKind::A, _) => {
            let a0 = seq.entry(0);
            let a1 = seq.entry(1);
            let a2 = seq.entry(2);
            let lin = &a0.scaled(&rat_i128(2 * gi + gi * gi)) + &(&g3 * &a1).scaled_int(12);
            let fac1 = &(&z2 * &(&a0 * &a0)).scaled_int(36) + &(&g3 * &(&lin * &lin));
            let mut fac2 = (&z2 * &a0).scaled_int(36);
            fac2 = &fac2
                - &(&g3 * &a0).scaled(&rat_i128(gi * (2 + gi) * (14 * gi + 7 * gi * gi - 24)));
            fac2 = &fac2
                - &(&g3.pow(2) * &a1).scaled(&rat_i128(24 * (14 * gi + 7 * gi * gi - 180)));
            fac2 = &fac2 - &(&g3.pow(3) * &a2).scaled_int(2880);
            (&fac1 * &fac2).scaled(&Rat::new(1.into(), 1296.into()))
        }
        (SeqKind::B, _) => {
            let b1 = seq.entry(1);
            let b2 = seq.entry(2);
            let b3 = seq.entry(3);
            let cpoly = gi + 4 * gi * gi + gi.pow(3) - 6;
            let mut comb = (&g3 * &b1).scaled(&rat_i128(
                25 * (384 * gi - 1728 + 172 * gi * gi - 20 * gi.pow(3) - 5 * gi.pow(4)),
            ));
            comb = &comb + &(&z2 * &b1).scaled_int(108);
            comb = &comb
                - &(&g3.pow(2) * &b2).scaled(&rat_i128(1440 * (6 * gi + 3 * gi * gi - 140)));
            comb = &comb - &(&g3.pow(3) * &b3).scaled_int(80640);

            let inner = &b1.scaled(&rat_i128(gi * gi + 2 * gi - 24)) + &(&g3 * &b2).scaled_int(24);
            let part1 = &(&z2 * &(&b1 * &b1)).scaled_int(324)
                + &(&g3 * &(&inner * &inner)).scaled_int(25);
            let piece1 = (&g3.pow(2) * &part1).scaled(&rat_i128(-64 * gi * gi * cpoly * cpoly));

            let part2 = &(&z2 * &b1).scaled_int(-108)
                + &(&g3 * &inner).scaled(&rat_i128(5 * gi * (2 + gi)));
            let piece2 = (&(&g3 * &part2) * &comb).scaled(&rat_i128(-16 * gi * cpoly));

            let pref3 = &z2.scaled_int(36)
                + &g3.scaled(&rat_i128(gi * gi * (2 + gi) * (2 + gi)));
            let piece3 = -&(&pref3 * &(&comb * &comb));

            let total = &comb * &(&(&piece1 + &piece2) + &piece3);
            // denominator grows like g^12: stay in bignum arithmetic
            let denom = num_bigint::BigInt::from(62208)
                * num_bigint::BigInt::from(gi).pow(3)
                * num_bigint::BigInt::from(cpoly).pow(3);
            total.scaled(&Rat::new(1.into(), denom))
        }
    }
}

/// Downward-recursion coefficient quadruple (a_r, b_r, c_r, d_r) for case I,
/// as polynomials in z and g₃.  Signs follow the same calibration as the rest
/// of the coefficient tables; the quadruple reproduces the solved sequences
/// only for M ≤ 1 (see `recursion_sequence`).
pub struct RecursionCoeffs {
    pub a: Poly,
    pub b: Poly,
    pub c: Poly,
    pub d: Poly,
}

pub fn case1_recursion_coeffs(g: u32, r: i64) -> RecursionCoeffs {
    let g = g as i128;
    let r = r as i128;
    let g3 = pvar(Var::G3);
    let a = g3.pow(3).scaled(&rat_i128(
        -108 * (r - 2) * (r - 1) * r * (8 - 3 * r) * (5 - 3 * r) * (4 - 3 * r) * (3 * r - 2)
            * (3 * r - 1),
    ));
    let b = g3.pow(2).scaled(&rat_i128(
        216 * (r - 1)
            * r
            * (3 * r - 5)
            * (3 * r - 2)
            * (3 * r - 1)
            * (4 * g - 30 + 2 * g * g + 87 * r - 6 * g * r - 3 * g * g * r - 81 * r * r
                + 54 * r.pow(3)),
    ));
    let c_g3 = -9 * r
        * (3 * r - 2)
        * (4 * g * g - 48 * g + 28 * g.pow(3) + 7 * g.pow(4) + 264 * g * r + 84 * g * g * r
            - 48 * g.pow(3) * r
            - 12 * g.pow(4) * r
            + 3024 * r * r
            - 4104 * g * r * r
            - 1620 * g * g * r * r
            + 432 * g.pow(3) * r * r
            + 108 * g.pow(4) * r * r
            + 1728 * g * r.pow(3)
            + 864 * g * g * r.pow(3)
            + 45360 * r.pow(4)
            - 10368 * g * r.pow(4)
            - 5184 * g * g * r.pow(4)
            + 46656 * r.pow(6));
    let c = &g3.scaled(&rat_i128(c_g3))
        + &pvar(Var::Z).pow(2).scaled(&rat_i128(324 * r * (3 * r - 2)));
    let d = Poly::constant(rat_i128(
        8 * (2 + 3 * r)
            * (3 + g + 3 * r)
            * (1 + 6 * r)
            * (2 + g + 6 * r)
            * (5 + g + 6 * r)
            * (6 * r - g)
            * (g - 3 - 6 * r)
            * (6 * r + 1 - g),
    ));
    RecursionCoeffs { a, b, c, d }
}

/// Case-I sequence by the classical downward recursion
/// A_r = (c_{r+1}A_{r+1} + b_{r+2}A_{r+2} + a_{r+3}A_{r+3}) / d_r, seeded with
/// the convention top coefficient.  Faithful to the four-term recursion; it
/// agrees with `solve_s` only for M ≤ 1 (the four-term recursion shape breaks
/// down beyond that — kept as a test oracle for the genera where it holds).
///
/// The underlying reason, which also explains why `solve_s` works from the
/// ODE directly: substituting the ansatz into the eighth-order ODE and
/// factoring out ℘′ produces bands ℘^{2+3k} whose BOTTOM band is pinned at
/// ℘²℘′ for every r, so each A_r couples into the low bands at unbounded
/// distance and no fixed-width recursion can capture the full system for
/// M ≥ 2.  The same holds in case II, where for M ≤ 1 the empirical relations
/// are this quadruple evaluated at r → r − 1/3.
pub fn recursion_sequence(g: u32) -> Result<CoefficientSequence, Error> {
    let profile = classify(g)?;
    if profile.case != Case::I {
        return Err(Error::InvalidGenus(g));
    }
    let m = profile.m;
    let mut entries: BTreeMap<u32, Poly> = BTreeMap::new();
    entries.insert(m, Poly::z_pow(top_z_exponent(g)));
    let get = |entries: &BTreeMap<u32, Poly>, r: i64| -> Poly {
        if r < 0 || r > m as i64 {
            Poly::zero()
        } else {
            entries.get(&(r as u32)).cloned().unwrap_or_else(Poly::zero)
        }
    };
    for r in (0..m as i64).rev() {
        let d = case1_recursion_coeffs(g, r).d;
        let d_val = d.coeff(&Monomial::one()).cloned().unwrap_or_else(Rat::zero);
        if d_val.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut num = &case1_recursion_coeffs(g, r + 1).c * &get(&entries, r + 1);
        num = &num + &(&case1_recursion_coeffs(g, r + 2).b * &get(&entries, r + 2));
        num = &num + &(&case1_recursion_coeffs(g, r + 3).a * &get(&entries, r + 3));
        entries.insert(r as u32, num.scaled(&(Rat::one() / d_val)));
    }
    Ok(CoefficientSequence { kind: SeqKind::A, entries, free_scale: Rat::one() })
}

/// A spectral curve w³ = H(z)w + F(z); H ≡ 0 in the equianharmonic case.
#[derive(Clone, PartialEq, Debug)]
pub struct SpectralCurve {
    pub g: u32,
    pub case: Case,
    pub h: Poly,
    pub f: Poly,
    pub normalized: bool,
}

/// Exact cube root of a rational, when it exists.
pub fn rational_cube_root(x: &Rat) -> Option<Rat> {
    let num = x.numer();
    let den = x.denom();
    let rn = num.cbrt();
    let rd = den.cbrt();
    if &(&rn * &rn * &rn) == num && &(&rd * &rd * &rd) == den {
        Some(Rat::new(rn, rd))
    } else {
        None
    }
}

/// Everything the pipeline produces for one genus, at the normalized scale
/// (F monic, S and Q rescaled accordingly).
#[derive(Clone, Debug)]
pub struct HalphenData {
    pub pair: SqPair,
    pub seq: CoefficientSequence,
    pub curve: SpectralCurve,
    /// The normalization factor λ applied to (S, Q).
    pub scale: Rat,
}

/// Full pipeline: classify, solve for S, build Q, evaluate H and F, cross-check the
/// closed form, and normalize F to be monic of degree g+1 (λ³·lead = 1; the
/// lead is a rational cube for every supported genus).
pub fn halphen_data(g: u32) -> Result<HalphenData, Error> {
    let profile = classify(g)?;
    let (s, seq) = solve_s(&profile)?;
    let q = build_q(&profile, &s, &seq)?;
    let pair = SqPair { s, q, profile };

    let h = compute_h(&pair)?;
    if !h.is_zero() {
        return Err(Error::InconsistentSystem("H must vanish in the equianharmonic case"));
    }
    let f_raw = compute_f(&pair)?;
    if f_closed_form(&seq, g) != f_raw {
        return Err(Error::InconsistentSystem("closed-form F disagrees with the direct route"));
    }

    if f_raw.degree(Var::Z) != Some(g as i64 + 1) {
        return Err(Error::InconsistentSystem("F has unexpected z-degree"));
    }
    let lead = f_raw
        .leading_coefficient(Var::Z)
        .expect("nonzero F has a leading coefficient");
    let lead = match lead.coeff(&Monomial::one()) {
        Some(c) if lead.num_terms() == 1 => c.clone(),
        _ => return Err(Error::InconsistentSystem("leading F coefficient is not a constant")),
    };
    let lambda =
        rational_cube_root(&(Rat::one() / &lead)).ok_or(Error::NotRationalCube(lead.clone()))?;
    let lambda3 = lambda.clone() * &lambda * &lambda;

    let curve = SpectralCurve {
        g,
        case: profile.case,
        h: Poly::zero(),
        f: f_raw.scaled(&lambda3),
        normalized: true,
    };
    Ok(HalphenData {
        pair: pair.scaled(&lambda),
        seq: seq.scaled(&lambda),
        curve,
        scale: lambda,
    })
}

/// The normalized spectral curve w³ = F_g(z).
pub fn spectral_curve(g: u32) -> Result<SpectralCurve, Error> {
    halphen_data(g).map(|d| d.curve)
}
