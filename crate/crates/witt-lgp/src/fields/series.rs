//! Truncated π-adic series at a real valuation of ℚ(t), with Hensel
//! lifting.  A `SeriesElement` stores the digits of an element of the
//! henselized field to a stated precision; every operation is exact to the
//! precision it reports.  At `Infinity` the uniformizer is s = 1/t and
//! expansion happens after the substitution t ↦ 1/s.

use crate::fields::numberfield::{NfElem, NumberField};
use crate::fields::poly::{Coeff, QPoly};
use crate::fields::rat::sqrt_rat;
use crate::fields::ratfunc::{RatFunc, RealValuation};
use crate::{Error, Result};
use std::rc::Rc;

/// π-adic digits c_val, c_{val+1}, … of an element, exact below `prec`.
/// The zero-to-precision element has `val == prec` and no digits.
#[derive(Clone, Debug)]
pub struct SeriesElement {
    pub kappa: Rc<NumberField>,
    pub val: i64,
    pub coeffs: Vec<NfElem>,
    pub prec: i64,
}

impl SeriesElement {
    pub fn zero(kappa: &Rc<NumberField>, prec: i64) -> SeriesElement {
        SeriesElement {
            kappa: kappa.clone(),
            val: prec,
            coeffs: vec![],
            prec,
        }
    }

    pub fn constant(kappa: &Rc<NumberField>, c: NfElem, prec: i64) -> SeriesElement {
        let mut coeffs = vec![kappa.zero(); prec.max(0) as usize];
        if prec > 0 {
            coeffs[0] = c;
        }
        SeriesElement {
            kappa: kappa.clone(),
            val: 0,
            coeffs,
            prec,
        }
        .normalized()
    }

    fn normalized(mut self) -> SeriesElement {
        let mut shift = 0usize;
        while shift < self.coeffs.len() && Coeff::is_zero(&self.coeffs[shift]) {
            shift += 1;
        }
        if shift > 0 {
            self.coeffs.drain(..shift);
            self.val += shift as i64;
        }
        if self.coeffs.is_empty() {
            self.val = self.prec;
        }
        self
    }

    pub fn is_zero_to_prec(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The valuation, or None when the element is zero to its precision.
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero_to_prec() {
            None
        } else {
            Some(self.val)
        }
    }

    /// Leading digit (residue of x·π^{−v(x)}).
    pub fn leading(&self) -> Option<&NfElem> {
        self.coeffs.first()
    }

    fn digit(&self, k: i64) -> NfElem {
        if k < self.val || k >= self.val + self.coeffs.len() as i64 {
            self.kappa.zero()
        } else {
            self.coeffs[(k - self.val) as usize].clone()
        }
    }

    /// Expansion of a rational function at v to the requested precision.
    pub fn from_ratfunc(f: &RatFunc, v: &RealValuation, prec: i64) -> Result<SeriesElement> {
        let kappa = v.residue_field();
        if f.is_zero() {
            return Ok(SeriesElement::zero(&kappa, prec));
        }
        match v {
            RealValuation::Finite(p) => expand_finite(f, p, &kappa, prec),
            RealValuation::Infinity => {
                // t = 1/s: f(1/s) = s^{deg den − deg num} · rev(num)/rev(den)
                let dn = f.num.deg_or_zero() as i64;
                let dd = f.den.deg_or_zero() as i64;
                let g = RatFunc::new(f.num.reversed(), f.den.reversed());
                let mut s = expand_finite(&g, &QPoly::var(), &kappa, prec - (dd - dn))?;
                s.val += dd - dn;
                s.prec += dd - dn;
                Ok(s.normalized())
            }
        }
    }

    pub fn add(&self, o: &SeriesElement) -> SeriesElement {
        let prec = self.prec.min(o.prec);
        let val = self.val.min(o.val).min(prec);
        let coeffs = (val..prec)
            .map(|k| self.digit(k).add(&o.digit(k)))
            .collect();
        SeriesElement {
            kappa: self.kappa.clone(),
            val,
            coeffs,
            prec,
        }
        .normalized()
    }

    pub fn neg(&self) -> SeriesElement {
        SeriesElement {
            kappa: self.kappa.clone(),
            val: self.val,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, o: &SeriesElement) -> SeriesElement {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &SeriesElement) -> SeriesElement {
        if self.is_zero_to_prec() || o.is_zero_to_prec() {
            let prec = (self.val + o.prec).min(o.val + self.prec);
            return SeriesElement::zero(&self.kappa, prec);
        }
        // the error in each factor enters scaled by the other's valuation
        let prec = (self.val + o.prec).min(o.val + self.prec);
        let val = self.val + o.val;
        let n = (prec - val).max(0) as usize;
        let mut coeffs = vec![self.kappa.zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                if i + j < n {
                    coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
                }
            }
        }
        SeriesElement {
            kappa: self.kappa.clone(),
            val,
            coeffs,
            prec,
        }
        .normalized()
    }

    pub fn scale(&self, c: &NfElem) -> SeriesElement {
        SeriesElement {
            kappa: self.kappa.clone(),
            val: self.val,
            coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect(),
            prec: self.prec,
        }
        .normalized()
    }

    /// Multiply by π^k (exact; shifts valuation and precision).
    pub fn shift(&self, k: i64) -> SeriesElement {
        SeriesElement {
            kappa: self.kappa.clone(),
            val: self.val + k,
            coeffs: self.coeffs.clone(),
            prec: self.prec + k,
        }
    }

    /// Inverse of a unit-up-to-shift; errors with PrecisionExhausted when
    /// the element is zero to its precision.
    pub fn inv(&self) -> Result<SeriesElement> {
        if self.is_zero_to_prec() {
            return Err(Error::PrecisionExhausted(self.prec));
        }
        let n = (self.prec - self.val) as usize;
        let a0inv = self.coeffs[0].inv();
        let mut b = vec![self.kappa.zero(); n];
        b[0] = a0inv.clone();
        for k in 1..n {
            let mut s = self.kappa.zero();
            for i in 1..=k {
                let ai = if i < self.coeffs.len() {
                    &self.coeffs[i]
                } else {
                    continue;
                };
                s = s.add(&ai.mul(&b[k - i]));
            }
            b[k] = a0inv.mul(&s).neg();
        }
        Ok(SeriesElement {
            kappa: self.kappa.clone(),
            val: -self.val,
            coeffs: b,
            prec: self.prec - 2 * self.val,
        })
    }

    pub fn div(&self, o: &SeriesElement) -> Result<SeriesElement> {
        Ok(self.mul(&o.inv()?))
    }

    /// Hensel square root: requires even valuation and a leading digit
    /// with a known square root in κ.  Returns None when the leading digit
    /// is not recognized as a square (exact over ℚ; conservative over
    /// larger residue fields).
    pub fn sqrt(&self) -> Result<Option<SeriesElement>> {
        if self.is_zero_to_prec() {
            return Err(Error::PrecisionExhausted(self.prec));
        }
        if self.val.rem_euclid(2) == 1 {
            return Ok(None);
        }
        let unit = self.shift(-self.val);
        let c0 = match nf_sqrt(&unit.coeffs[0]) {
            Some(c) => c,
            None => {
                return if self.kappa.degree() == 1 {
                    Ok(None)
                } else {
                    Err(Error::UnsupportedResidueField(
                        "square root in residue field not constructed".to_string(),
                    ))
                }
            }
        };
        let n = (unit.prec) as usize;
        let mut b = vec![self.kappa.zero(); n];
        b[0] = c0.clone();
        let twoc0inv = c0.add(&c0).inv();
        for k in 1..n {
            // 2 c0 b_k = a_k − Σ_{i=1..k−1} b_i b_{k−i}
            let mut s = unit.digit(k as i64);
            for i in 1..k {
                s = s.sub(&b[i].mul(&b[k - i]));
            }
            b[k] = s.mul(&twoc0inv);
        }
        Ok(Some(
            SeriesElement {
                kappa: self.kappa.clone(),
                val: 0,
                coeffs: b,
                prec: unit.prec,
            }
            .shift(self.val / 2),
        ))
    }
}

fn expand_finite(
    f: &RatFunc,
    p: &QPoly,
    kappa: &Rc<NumberField>,
    prec: i64,
) -> Result<SeriesElement> {
    let strip = |g: &QPoly| -> (i64, QPoly) {
        let mut m = 0i64;
        let mut g = g.clone();
        while p.divides(&g) {
            g = g.div_exact(p);
            m += 1;
        }
        (m, g)
    };
    let (mn, n0) = strip(&f.num);
    let (md, d0) = strip(&f.den);
    let val = mn - md;
    let digits = (prec - val).max(0);
    if digits == 0 {
        return Ok(SeriesElement::zero(kappa, prec));
    }
    // invert d0 modulo p^digits (coprime since p is irreducible)
    let pn = p.pow(digits as usize);
    let (g, u, _) = d0.xgcd(&pn);
    if g.deg_or_zero() != 0 {
        return Err(Error::UnsupportedResidueField(format!(
            "denominator shares a factor with {}",
            p
        )));
    }
    let u = u.scale(&g.leading().unwrap().recip());
    let mut rem = n0.mul(&u).rem(&pn);
    let mut coeffs = Vec::with_capacity(digits as usize);
    for _ in 0..digits {
        let r = rem.rem(p);
        coeffs.push(kappa.from_poly(r.clone()));
        rem = rem.sub(&r).div_exact(p);
    }
    Ok(SeriesElement {
        kappa: kappa.clone(),
        val,
        coeffs,
        prec,
    }
    .normalized())
}

/// Square root in the residue field: exact for rational values, None
/// otherwise (larger residue fields are handled conservatively).
pub fn nf_sqrt(x: &NfElem) -> Option<NfElem> {
    let r = x.as_rat()?;
    sqrt_rat(&r).map(|s| NfElem {
        field: x.field.clone(),
        rep: QPoly::constant(s),
    })
}

/// Default working precision for entries whose valuations at v are bounded
/// by `maxval` in absolute value.
pub fn default_precision(maxval: i64) -> i64 {
    2 * maxval.abs() + 4
}

/// A nontrivial zero of x² − a y² − b z² over the henselization at v, to
/// the requested precision, or None when the residue criteria certify that
/// no solution exists.  Errors when the residue field is too large for the
/// implemented square-root tests to decide.
pub fn hensel_lift_conic(
    a: &RatFunc,
    b: &RatFunc,
    v: &RealValuation,
    target_precision: i64,
) -> Result<Option<[SeriesElement; 3]>> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let kappa = v.residue_field();
    let va = a.valuation(v);
    let vb = b.valuation(v);
    // strip even π-powers: a = π^{2s}·a' rescales y by π^{−s}
    let sa = va.div_euclid(2);
    let sb = vb.div_euclid(2);
    let prec = target_precision;
    let sa_ser = SeriesElement::from_ratfunc(a, v, prec + 2 * sa.abs())?.shift(-2 * sa);
    let sb_ser = SeriesElement::from_ratfunc(b, v, prec + 2 * sb.abs())?.shift(-2 * sb);
    if sa_ser.is_zero_to_prec() || sb_ser.is_zero_to_prec() {
        return Err(Error::PrecisionExhausted(prec));
    }
    let pa = va.rem_euclid(2);
    let pb = vb.rem_euclid(2);
    let one = SeriesElement::constant(&kappa, kappa.one(), prec);
    let zero = SeriesElement::zero(&kappa, prec);
    let lifted = match (pa, pb) {
        (0, 0) => {
            let abar = sa_ser.leading().unwrap().clone();
            let bbar = sb_ser.leading().unwrap().clone();
            match residue_conic_point(&abar, &bbar)? {
                None => None,
                Some([x, y, z]) => {
                    // fix two coordinates, Hensel-lift the third
                    let yc = SeriesElement::constant(&kappa, y.clone(), prec);
                    let zc = SeriesElement::constant(&kappa, z.clone(), prec);
                    if !Coeff::is_zero(&x) {
                        let s = sa_ser.mul(&yc.mul(&yc)).add(&sb_ser.mul(&zc.mul(&zc)));
                        let xs = s.sqrt()?.ok_or(Error::PrecisionExhausted(prec))?;
                        Some([xs, yc, zc])
                    } else if !Coeff::is_zero(&z) {
                        let xc = SeriesElement::constant(&kappa, x, prec);
                        let s = xc.mul(&xc).sub(&sa_ser.mul(&yc.mul(&yc))).div(&sb_ser)?;
                        let zs = s.sqrt()?.ok_or(Error::PrecisionExhausted(prec))?;
                        Some([xc, yc, zs])
                    } else {
                        let xc = SeriesElement::constant(&kappa, x, prec);
                        let s = xc.mul(&xc).sub(&sb_ser.mul(&zc.mul(&zc))).div(&sa_ser)?;
                        let ys = s.sqrt()?.ok_or(Error::PrecisionExhausted(prec))?;
                        Some([xc, ys, zc])
                    }
                }
            }
        }
        (0, 1) => sa_ser.sqrt()?.map(|xs| [xs, one.clone(), zero.clone()]),
        (1, 0) => sb_ser.sqrt()?.map(|zs| [zs, zero.clone(), one.clone()]),
        _ => {
            // both odd: x² = π(u y² + w z²) forces u y² + w z² ≡ 0, i.e.
            // −u/w a square
            let q = sa_ser.neg().div(&sb_ser)?;
            q.sqrt()?.map(|zs| [zero.clone(), one.clone(), zs])
        }
    };
    // undo the even-power stripping on y, z
    Ok(lifted.map(|[x, y, z]| [x, y.shift(-sa), z.shift(-sb)]))
}

/// A nonzero κ-point of x² − ā y² − b̄ z² = 0, None if the residue conic
/// is anisotropic, error when undecided over a large residue field.
fn residue_conic_point(abar: &NfElem, bbar: &NfElem) -> Result<Option<[NfElem; 3]>> {
    let kappa = abar.field.clone();
    if kappa.degree() == 1 {
        let a = abar.as_rat().unwrap();
        let b = bbar.as_rat().unwrap();
        let conic = crate::qforms::QuadraticForm::diagonal(vec![
            crate::fields::value::Value::int(1),
            crate::fields::value::Value::Rat(-a.clone()),
            crate::fields::value::Value::Rat(-b.clone()),
        ])?;
        if !conic.isotropic_over_q() {
            return Ok(None);
        }
        let w = crate::algebras::conic_point_q(&a, &b, 1_000_000)
            .ok_or_else(|| Error::Verification("conic point search exhausted".to_string()))?;
        let p: Vec<NfElem> = w.vectors[0]
            .iter()
            .map(|v| kappa.from_rat(v.as_rat().unwrap()))
            .collect();
        return Ok(Some([p[0].clone(), p[1].clone(), p[2].clone()]));
    }
    // larger residue field: definite embedding certifies anisotropy; a
    // small search may still find a point; otherwise undecided
    let definite = (0..kappa.embeddings.len()).all(|i| {
        abar.sign_at_embedding(i) < 0 && bbar.sign_at_embedding(i) < 0
    });
    if definite {
        return Ok(None);
    }
    let mut pool = vec![kappa.zero(), kappa.one(), kappa.one().neg(), kappa.gen()];
    pool.push(kappa.gen().neg());
    pool.push(kappa.gen().add(&kappa.one()));
    pool.push(kappa.gen().sub(&kappa.one()));
    pool.push(kappa.from_rat(crate::fields::rat::rat(2)));
    for x in &pool {
        for y in &pool {
            for z in &pool {
                if Coeff::is_zero(x) && Coeff::is_zero(y) && Coeff::is_zero(z) {
                    continue;
                }
                let lhs = x.mul(x).sub(&abar.mul(&y.mul(y))).sub(&bbar.mul(&z.mul(z)));
                if Coeff::is_zero(&lhs) {
                    return Ok(Some([x.clone(), y.clone(), z.clone()]));
                }
            }
        }
    }
    Err(Error::UnsupportedResidueField(
        "residue conic undecided".to_string(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::rat::rat;

    fn t() -> RatFunc {
        RatFunc::var()
    }

    fn vt() -> RealValuation {
        RealValuation::finite(QPoly::var())
    }

    #[test]
    fn expansion_basics() {
        // t³/(t+1) at Finite(t): valuation 3, residue 1
        let f = t().mul(&t()).mul(&t()).div(&t().add(&RatFunc::one()));
        let s = SeriesElement::from_ratfunc(&f, &vt(), 8).unwrap();
        assert_eq!(s.valuation(), Some(3));
        assert_eq!(s.leading().unwrap().as_rat(), Some(rat(1)));
        // geometric series digits: t³(1 − t + t² − …)
        assert_eq!(s.digit(4).as_rat(), Some(rat(-1)));
        assert_eq!(s.digit(5).as_rat(), Some(rat(1)));

        // t² + 1 at Infinity: valuation −2, residue 1
        let g = t().mul(&t()).add(&RatFunc::one());
        let s = SeriesElement::from_ratfunc(&g, &RealValuation::Infinity, 6).unwrap();
        assert_eq!(s.valuation(), Some(-2));
        assert_eq!(s.leading().unwrap().as_rat(), Some(rat(1)));
    }

    #[test]
    fn ring_laws_to_precision() {
        let f = t().add(&RatFunc::constant(rat(2)));
        let g = RatFunc::one().div(&t().sub(&RatFunc::constant(rat(3))));
        let sf = SeriesElement::from_ratfunc(&f, &vt(), 10).unwrap();
        let sg = SeriesElement::from_ratfunc(&g, &vt(), 10).unwrap();
        let prod = SeriesElement::from_ratfunc(&f.mul(&g), &vt(), 10).unwrap();
        assert!(sf.mul(&sg).sub(&prod).is_zero_to_prec());
        let inv = sg.inv().unwrap();
        assert!(inv
            .sub(&SeriesElement::from_ratfunc(&g.inv(), &vt(), 10).unwrap())
            .is_zero_to_prec());
    }

    #[test]
    fn hensel_sqrt() {
        // 1 + t is a square in the henselization at t
        let f = RatFunc::one().add(&t());
        let s = SeriesElement::from_ratfunc(&f, &vt(), 12).unwrap();
        let r = s.sqrt().unwrap().unwrap();
        assert!(r.mul(&r).sub(&s).is_zero_to_prec());
        assert_eq!(r.digit(1).as_rat(), Some(crate::fields::rat::ratq(1, 2)));
        // t is not a square (odd valuation)
        let st = SeriesElement::from_ratfunc(&t(), &vt(), 8).unwrap();
        assert!(st.sqrt().unwrap().is_none());
    }

    #[test]
    fn conic_lifting() {
        // a = 1 + t, b = 1: solution with x ≡ 1, z ≡ 1 mod t
        let a = RatFunc::one().add(&t());
        let b = RatFunc::one();
        let sol = hensel_lift_conic(&a, &b, &vt(), 10).unwrap().unwrap();
        let sa = SeriesElement::from_ratfunc(&a, &vt(), 10).unwrap();
        let sb = SeriesElement::from_ratfunc(&b, &vt(), 10).unwrap();
        let [x, y, z] = sol;
        let lhs = x
            .mul(&x)
            .sub(&sa.mul(&y.mul(&y)))
            .sub(&sb.mul(&z.mul(&z)));
        assert!(lhs.is_zero_to_prec());

        // a = t, b = t: no solution (odd valuations force a contradiction)
        assert!(hensel_lift_conic(&t(), &t(), &vt(), 10).unwrap().is_none());
        // a = −1, b = −1: residue conic x² + y² + z² = 0 has no point
        let m1 = RatFunc::constant(rat(-1));
        assert!(hensel_lift_conic(&m1, &m1, &vt(), 10).unwrap().is_none());
        // a = 2 + t, b = −1 at Finite(t): residue conic x² = 2y² − z²
        // has the point (1, 1, 1)
        let a2 = RatFunc::constant(rat(2)).add(&t());
        let sol = hensel_lift_conic(&a2, &m1, &vt(), 10).unwrap().unwrap();
        let sa = SeriesElement::from_ratfunc(&a2, &vt(), 10).unwrap();
        let sb = SeriesElement::from_ratfunc(&m1, &vt(), 10).unwrap();
        let [x, y, z] = sol;
        let lhs = x
            .mul(&x)
            .sub(&sa.mul(&y.mul(&y)))
            .sub(&sb.mul(&z.mul(&z)));
        assert!(lhs.is_zero_to_prec());
    }
}
