//! Serialization: stable JSON for polynomials, ring elements and curves,
//! plus LaTeX and plain-text curve rendering.
//!
//! Curve JSON layout (keys serialize alphabetically, deterministic):
//! `{"F":[{"coeff":"p/q","g3":j,"z":k},…],"H":"0","case":"I","g":6,
//!   "operator":"halphen","w_power":3}` with F-terms sorted by descending z.
//! Lamé curves carry an extra `g2` exponent per term and no `case`.

use num_integer::Integer;
use num_traits::{One, Signed};
use serde_json::{json, Value};

use crate::halphen::{Case, SpectralCurve};
use crate::lame::LameData;
use crate::poly::{Monomial, Var};
use crate::weier::Mode;
use crate::{Error, Poly, Rat, RingElem};

fn rat_to_string(c: &Rat) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn rat_from_string(s: &str) -> Result<Rat, Error> {
    s.parse()
        .map_err(|_| Error::BadCurveDocument(format!("bad rational '{}'", s)))
}

// ------------------------------------------------------------- SparsePoly

/// Stable JSON for a polynomial: a term list in the canonical term order.
pub fn poly_to_json(p: &Poly) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|(m, c)| {
            let mut exps = serde_json::Map::new();
            for v in Var::ALL {
                if m.exp(v) != 0 {
                    exps.insert(v.name().to_string(), json!(m.exp(v)));
                }
            }
            json!({
                "exponents": Value::Object(exps),
                "numerator": c.numer().to_string(),
                "denominator": c.denom().to_string(),
            })
        })
        .collect();
    json!({ "terms": terms })
}

pub fn poly_from_json(v: &Value) -> Result<Poly, Error> {
    let terms = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::BadCurveDocument("missing 'terms'".into()))?;
    let mut p = Poly::zero();
    for t in terms {
        let exps = t
            .get("exponents")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::BadCurveDocument("missing 'exponents'".into()))?;
        let mut m = Monomial::one();
        for (k, e) in exps {
            let var = Var::from_name(k)
                .ok_or_else(|| Error::BadCurveDocument(format!("unknown variable '{}'", k)))?;
            let exp = e
                .as_i64()
                .ok_or_else(|| Error::BadCurveDocument("non-integer exponent".into()))?;
            m = m.with_exp(var, exp as i32);
        }
        let num = t.get("numerator").and_then(Value::as_str).unwrap_or("0");
        let den = t.get("denominator").and_then(Value::as_str).unwrap_or("1");
        p.add_term(m, rat_from_string(&format!("{}/{}", num, den))?);
    }
    Ok(p)
}

/// Ring-element JSON: the polynomial plus the reduction mode.
pub fn ring_elem_to_json(e: &RingElem) -> Value {
    let mut v = poly_to_json(e.value());
    v.as_object_mut()
        .unwrap()
        .insert("mode".to_string(), json!(e.mode().name()));
    v
}

pub fn ring_elem_from_json(v: &Value) -> Result<RingElem, Error> {
    let mode = match v.get("mode").and_then(Value::as_str) {
        Some("generic") => Mode::Generic,
        Some("equianharmonic") => Mode::Equianharmonic,
        other => {
            return Err(Error::BadCurveDocument(format!("bad mode {:?}", other)));
        }
    };
    Ok(RingElem::from_poly(poly_from_json(v)?, mode))
}

// ------------------------------------------------------------- curves

fn curve_terms_desc_z(f: &Poly) -> Vec<(&Monomial, &Rat)> {
    let mut terms: Vec<_> = f.terms().collect();
    terms.sort_by(|(a, _), (b, _)| {
        b.exp(Var::Z)
            .cmp(&a.exp(Var::Z))
            .then(a.exp(Var::G2).cmp(&b.exp(Var::G2)))
            .then(a.exp(Var::G3).cmp(&b.exp(Var::G3)))
    });
    terms
}

/// JSON document for a Halphen curve.
pub fn halphen_curve_to_json(curve: &SpectralCurve) -> Value {
    let f: Vec<Value> = curve_terms_desc_z(&curve.f)
        .into_iter()
        .map(|(m, c)| {
            json!({
                "z": m.exp(Var::Z),
                "g3": m.exp(Var::G3),
                "coeff": rat_to_string(c),
            })
        })
        .collect();
    json!({
        "operator": "halphen",
        "g": curve.g,
        "case": curve.case.name(),
        "w_power": 3,
        "H": "0",
        "F": f,
    })
}

/// JSON document for a Lamé curve (adds the g2 exponent per term).
pub fn lame_curve_to_json(data: &LameData) -> Value {
    let f: Vec<Value> = curve_terms_desc_z(&data.curve_rhs)
        .into_iter()
        .map(|(m, c)| {
            json!({
                "z": m.exp(Var::Z),
                "g2": m.exp(Var::G2),
                "g3": m.exp(Var::G3),
                "coeff": rat_to_string(c),
            })
        })
        .collect();
    json!({
        "operator": "lame",
        "g": data.g,
        "w_power": 2,
        "H": "0",
        "F": f,
    })
}

/// Parse a Halphen curve document back into a [`SpectralCurve`].
pub fn halphen_curve_from_json(s: &str) -> Result<SpectralCurve, Error> {
    let v: Value =
        serde_json::from_str(s).map_err(|e| Error::BadCurveDocument(e.to_string()))?;
    if v.get("operator").and_then(Value::as_str) != Some("halphen") {
        return Err(Error::BadCurveDocument("not a halphen curve".into()));
    }
    let g = v
        .get("g")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::BadCurveDocument("missing g".into()))? as u32;
    let case = match v.get("case").and_then(Value::as_str) {
        Some("I") => Case::I,
        Some("II") => Case::II,
        other => return Err(Error::BadCurveDocument(format!("bad case {:?}", other))),
    };
    let mut f = Poly::zero();
    for t in v
        .get("F")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::BadCurveDocument("missing F".into()))?
    {
        let ze = t.get("z").and_then(Value::as_i64).unwrap_or(0) as i32;
        let ge = t.get("g3").and_then(Value::as_i64).unwrap_or(0) as i32;
        let c = t
            .get("coeff")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::BadCurveDocument("missing coeff".into()))?;
        f.add_term(
            Monomial::one().with_exp(Var::Z, ze).with_exp(Var::G3, ge),
            rat_from_string(c)?,
        );
    }
    Ok(SpectralCurve { g, case, h: Poly::zero(), f, normalized: true })
}

// ------------------------------------------------------------- rendering

fn render_terms(f: &Poly, latex: bool) -> String {
    let mut out = String::new();
    for (i, (m, c)) in curve_terms_desc_z(f).into_iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        let coeff_str = if latex && !mag.denom().is_one() {
            format!("\\frac{{{}}}{{{}}}", mag.numer(), mag.denom())
        } else {
            rat_to_string(&mag)
        };
        if !mag.is_one() || m.is_one() {
            factors.push(coeff_str);
        }
        for v in [Var::G2, Var::G3, Var::Z] {
            let e = m.exp(v);
            if e == 0 {
                continue;
            }
            let name = if latex {
                match v {
                    Var::G2 => "g_2".to_string(),
                    Var::G3 => "g_3".to_string(),
                    _ => v.name().to_string(),
                }
            } else {
                v.name().to_string()
            };
            if e == 1 {
                factors.push(name);
            } else {
                factors.push(format!("{}^{}", name, e));
            }
        }
        out.push_str(&factors.join(if latex { " " } else { "*" }));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// LaTeX in the conventional display order (descending powers of z).
pub fn latex_curve(w_power: u32, f: &Poly) -> String {
    format!("w^{} = {}", w_power, render_terms(f, true))
}

/// Plain text; non-integer coefficients are cleared into a common denominator.
pub fn text_curve(w_power: u32, f: &Poly) -> String {
    let lcm = f
        .terms()
        .fold(num_bigint::BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    if lcm.is_one() {
        format!("w^{} = {}", w_power, render_terms(f, false))
    } else {
        let scaled = f.scaled(&Rat::from_integer(lcm.clone()));
        format!("w^{} = ({})/{}", w_power, render_terms(&scaled, false), lcm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::halphen::spectral_curve;
    use crate::lame::lame_data;
    use proptest::prelude::*;

    #[test]
    fn curve_json_roundtrip_g6() {
        let c = spectral_curve(6).unwrap();
        let s = serde_json::to_string(&halphen_curve_to_json(&c)).unwrap();
        let back = halphen_curve_from_json(&s).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn latex_g6_matches_reference_layout() {
        let c = spectral_curve(6).unwrap();
        assert_eq!(
            latex_curve(3, &c.f),
            "w^3 = z^7 - 2992 g_3 z^5 + 2972416 g_3^2 z^3 - 1003622400 g_3^3 z"
        );
    }

    #[test]
    fn latex_g3_uses_fractions() {
        let c = spectral_curve(3).unwrap();
        assert_eq!(
            latex_curve(3, &c.f),
            "w^3 = z^4 - \\frac{55}{2} g_3 z^2 - \\frac{3375}{16} g_3^2"
        );
    }

    #[test]
    fn text_lame_g1() {
        let d = lame_data(1);
        assert_eq!(text_curve(2, &d.curve_rhs), "w^2 = (4*z^3 - g2*z + g3)/4");
    }

    #[test]
    fn text_integer_curve() {
        let c = spectral_curve(4).unwrap();
        assert_eq!(text_curve(3, &c.f), "w^3 = z^5 - 208*g3*z^3 + 12544*g3^2*z");
    }

    #[test]
    fn lame_json_has_g2_exponents() {
        let d = lame_data(2);
        let v = lame_curve_to_json(&d);
        let rows = v.get("F").unwrap().as_array().unwrap();
        assert!(rows.iter().any(|r| r.get("g2").unwrap().as_i64() == Some(1)));
        let back = poly_from_json(&json!({
            "terms": rows.iter().map(|r| json!({
                "exponents": {
                    "z": r.get("z").unwrap(),
                    "g2": r.get("g2").unwrap(),
                    "g3": r.get("g3").unwrap(),
                },
                "numerator": r.get("coeff").unwrap().as_str().unwrap()
                    .split('/').next().unwrap(),
                "denominator": r.get("coeff").unwrap().as_str().unwrap()
                    .split('/').nth(1).unwrap_or("1"),
            })).collect::<Vec<_>>()
        }))
        .unwrap();
        assert_eq!(back, d.curve_rhs);
    }

    fn arb_rat() -> impl Strategy<Value = Rat> {
        (-20i64..=20, 1i64..=12).prop_map(|(n, d)| Rat::new(n.into(), d.into()))
    }

    proptest! {
        /// Serialization of polynomials is lossless.
        #[test]
        fn poly_json_roundtrip(terms in prop::collection::vec(
            ((-3i32..=5, 0i32..=2, 0i32..=2, 0i32..=3, 0i32..=3, 0i32..=1), arb_rat()), 0..6))
        {
            let mut p = Poly::zero();
            for ((ze, we, g2e, g3e, pe, ppe), c) in terms {
                let m = Monomial::one()
                    .with_exp(Var::Z, ze)
                    .with_exp(Var::W, we)
                    .with_exp(Var::G2, g2e)
                    .with_exp(Var::G3, g3e)
                    .with_exp(Var::P, pe)
                    .with_exp(Var::Pp, ppe);
                p.add_term(m, c);
            }
            let v = poly_to_json(&p);
            prop_assert_eq!(poly_from_json(&v).unwrap(), p.clone());
            // ring-element roundtrip with the mode field
            let e = RingElem::from_poly(p, Mode::Generic);
            let ev = ring_elem_to_json(&e);
            prop_assert_eq!(ring_elem_from_json(&ev).unwrap(), e);
        }
    }
}
