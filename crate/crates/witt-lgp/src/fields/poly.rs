//! Dense univariate polynomials over an exact field.
//!
//! The coefficient trait is prototype-based (`zero_like`, `one_like`) so
//! that number-field elements, which carry their field context, can be used
//! as coefficients without a global ring object.

use super::rat::{sign_rat, Rat};
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Exact field element usable as a polynomial coefficient.
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; panics on zero (internal misuse).
    fn inv(&self) -> Self;
    fn from_rat_like(&self, r: &Rat) -> Self;
    /// Exact square root when one exists and the field supports finding it.
    fn sqrt(&self) -> Option<Self> {
        None
    }
}

impl Coeff for Rat {
    fn zero_like(&self) -> Self {
        Rat::zero()
    }
    fn one_like(&self) -> Self {
        Rat::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        assert!(!Zero::is_zero(self), "inverse of zero");
        self.recip()
    }
    fn from_rat_like(&self, r: &Rat) -> Self {
        r.clone()
    }
    fn sqrt(&self) -> Option<Self> {
        super::rat::sqrt_rat(self)
    }
}

/// Dense polynomial; `coeffs[i]` is the coefficient of `x^i`, the leading
/// coefficient is nonzero, and the zero polynomial is the empty vector.
#[derive(Clone, PartialEq)]
pub struct Poly<C: Coeff> {
    pub coeffs: Vec<C>,
}

/// Polynomial over ℚ.
pub type QPoly = Poly<Rat>;

impl<C: Coeff> Poly<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn constant(c: C) -> Self {
        Poly::new(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn deg_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == self.coeffs[0].one_like()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let c = match (self.coeffs.get(i), o.coeffs.get(i)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            };
            out.push(c);
        }
        Poly::new(out)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let z = self.coeffs[0].zero_like();
        let mut out = vec![z; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let z = self.coeffs[0].zero_like();
        let mut out = vec![z; k];
        out.extend(self.coeffs.iter().cloned());
        Poly::new(out)
    }

    pub fn pow(&self, mut e: usize) -> Self {
        if e == 0 {
            let one = self
                .coeffs
                .first()
                .map(|c| c.one_like())
                .expect("pow of zero polynomial to exponent 0");
            return Poly::constant(one);
        }
        let mut base = self.clone();
        let mut acc: Option<Poly<C>> = None;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc.unwrap()
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() || self.coeffs.len() < d.coeffs.len() {
            return (Poly::zero(), self.clone());
        }
        let lead_inv = d.leading().unwrap().inv();
        let mut rem = self.coeffs.clone();
        let dd = d.coeffs.len() - 1;
        let z = self.coeffs[0].zero_like();
        let mut quot = vec![z; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let q = rem[i].mul(&lead_inv);
            for j in 0..dd {
                rem[i - dd + j] = rem[i - dd + j].sub(&q.mul(&d.coeffs[j]));
            }
            rem[i] = rem[i].zero_like();
            quot[i - dd] = q;
        }
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.div_rem(self).1.is_zero()
    }

    /// Exact division; panics if the remainder is nonzero.
    pub fn div_exact(&self, d: &Self) -> Self {
        let (q, r) = self.div_rem(d);
        assert!(r.is_zero(), "non-exact polynomial division");
        q
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => self.scale(&l.inv()),
        }
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: returns (g, u, v) with u*self + v*o = g, g monic.
    pub fn xgcd(&self, o: &Self) -> (Self, Self, Self) {
        let one = self
            .coeffs
            .first()
            .or(o.coeffs.first())
            .map(|c| c.one_like())
            .expect("xgcd of two zero polynomials");
        let mut r0 = self.clone();
        let mut r1 = o.clone();
        let mut s0 = Poly::constant(one.clone());
        let mut s1 = Poly::zero();
        let mut t0 = Poly::zero();
        let mut t1 = Poly::constant(one);
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        let li = r0.leading().unwrap().inv();
        (r0.scale(&li), s0.scale(&li), t0.scale(&li))
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            let k = c.from_rat_like(&Rat::from_integer(i.into()));
            out.push(c.mul(&k));
        }
        Poly::new(out)
    }

    /// Squarefree part `self / gcd(self, self')`, made monic.
    pub fn squarefree_part(&self) -> Self {
        if self.is_zero() || self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).monic()
    }

    pub fn eval(&self, x: &C) -> C {
        let mut acc = match self.coeffs.last() {
            None => return x.zero_like(),
            Some(c) => c.clone(),
        };
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn eval_rat(&self, x: &Rat) -> C {
        match self.coeffs.first() {
            None => panic!("eval_rat on zero polynomial needs a prototype"),
            Some(p) => self.eval(&p.from_rat_like(x)),
        }
    }

    /// Substitute `x -> a*x + b`.
    pub fn compose_affine(&self, a: &C, b: &C) -> Self {
        let lin = Poly::new(vec![b.clone(), a.clone()]);
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Poly::constant(c.clone()));
        }
        acc
    }

    /// Reverse coefficients: `x^deg * self(1/x)`.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Poly::new(c)
    }

    /// Exact polynomial square root, if one exists.
    pub fn sqrt_exact(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let d = self.degree().unwrap();
        if d % 2 != 0 {
            return None;
        }
        let n = d / 2;
        let lead = self.leading().unwrap();
        let mut r = vec![lead.zero_like(); n + 1];
        r[n] = lead.sqrt()?;
        let two = lead.from_rat_like(&Rat::from_integer(2.into()));
        let two_rn_inv = two.mul(&r[n]).inv();
        // Solve for r[n-k] from the coefficient of x^(2n-k), top down.
        for k in 1..=n {
            let mut s = self.coeffs[2 * n - k].clone();
            for i in (n - k + 1)..=n {
                let j = 2 * n - k;
                if j < i {
                    break;
                }
                let j = j - i;
                if j > n - k && j <= n {
                    s = s.sub(&r[i].mul(&r[j]));
                }
            }
            r[n - k] = s.mul(&two_rn_inv);
        }
        let cand = Poly::new(r);
        if cand.mul(&cand) == *self {
            Some(cand)
        } else {
            None
        }
    }
}

impl<C: Coeff> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "({c:?})*t^{i}")?;
            first = false;
        }
        Ok(())
    }
}

impl QPoly {
    /// Polynomial from integer coefficients, constant term first.
    pub fn from_ints(cs: &[i64]) -> Self {
        Poly::new(cs.iter().map(|&c| Rat::from_integer(c.into())).collect())
    }

    /// x
    pub fn var() -> Self {
        QPoly::from_ints(&[0, 1])
    }

    /// Sturm sequence of a squarefree input (works for any nonzero input,
    /// counting distinct roots).
    pub fn sturm_sequence(&self) -> Vec<QPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]);
            seq.push(r.neg());
        }
        seq.pop();
        seq
    }

    /// Cauchy root bound: all real roots lie in (-B, B).
    pub fn root_bound(&self) -> Rat {
        let lead = self.leading().expect("root bound of zero polynomial");
        let mut m = Rat::zero();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let a = (c / lead).abs();
            if a > m {
                m = a;
            }
        }
        m + Rat::one()
    }

    pub fn signs_at(seq: &[QPoly], x: &Rat) -> usize {
        let mut variations = 0;
        let mut last: i8 = 0;
        for p in seq {
            let s = sign_rat(&p.eval(x));
            if s != 0 {
                if last != 0 && s != last {
                    variations += 1;
                }
                last = s;
            }
        }
        variations
    }

    fn sign_variations_at_inf(seq: &[QPoly], positive: bool) -> usize {
        let mut variations = 0;
        let mut last: i8 = 0;
        for p in seq {
            if p.is_zero() {
                continue;
            }
            let mut s = sign_rat(p.leading().unwrap());
            if !positive && p.deg_or_zero() % 2 == 1 {
                s = -s;
            }
            if last != 0 && s != last {
                variations += 1;
            }
            last = s;
        }
        variations
    }

    /// Number of distinct real roots in the open interval (lo, hi); the
    /// endpoints must not be roots.
    pub fn count_roots_between(seq: &[QPoly], lo: &Rat, hi: &Rat) -> usize {
        QPoly::signs_at(seq, lo) - QPoly::signs_at(seq, hi)
    }

    /// Number of distinct real roots.
    pub fn count_real_roots(&self) -> usize {
        if self.is_zero() || self.is_constant() {
            return 0;
        }
        let sf = self.squarefree_part();
        let seq = sf.sturm_sequence();
        QPoly::sign_variations_at_inf(&seq, false) - QPoly::sign_variations_at_inf(&seq, true)
    }

    /// Isolating intervals for all distinct real roots, sorted in increasing
    /// order.  Intervals are either exact rational points `(r, r)` or open
    /// intervals `(lo, hi)` with a sign change of the squarefree part and
    /// exactly one root inside, certified by a Sturm count.
    pub fn isolate_real_roots(&self) -> Vec<(Rat, Rat)> {
        if self.is_zero() || self.is_constant() {
            return vec![];
        }
        let sf = self.squarefree_part();
        if sf.is_constant() {
            return vec![];
        }
        let seq = sf.sturm_sequence();
        let b = sf.root_bound();
        let mut out = vec![];
        let lo = -b.clone();
        // endpoints of the Cauchy bound are never roots
        let total = QPoly::count_roots_between(&seq, &lo, &b);
        let mut stack = vec![(lo, b, total)];
        while let Some((lo, hi, k)) = stack.pop() {
            if k == 0 {
                continue;
            }
            if k == 1 {
                out.push((lo, hi));
                continue;
            }
            let mid = (&lo + &hi) / Rat::from_integer(2.into());
            if num_traits::Zero::is_zero(&sf.eval(&mid)) {
                out.push((mid.clone(), mid.clone()));
                // peel the exact root off and recurse on both sides with a
                // nudged endpoint
                let eps = (&hi - &lo) / Rat::from_integer(1_000_000.into());
                let mut l2 = &mid - &eps;
                let mut r2 = &mid + &eps;
                while num_traits::Zero::is_zero(&sf.eval(&l2)) {
                    l2 = (&lo + &l2) / Rat::from_integer(2.into());
                }
                while num_traits::Zero::is_zero(&sf.eval(&r2)) {
                    r2 = (&hi + &r2) / Rat::from_integer(2.into());
                }
                let kl = QPoly::count_roots_between(&seq, &lo, &l2);
                let kr = QPoly::count_roots_between(&seq, &r2, &hi);
                stack.push((lo, l2, kl));
                stack.push((r2, hi, kr));
            } else {
                let kl = QPoly::count_roots_between(&seq, &lo, &mid);
                stack.push((lo, mid.clone(), kl));
                stack.push((mid, hi, k - kl));
            }
        }
        out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        out
    }

    /// Number of real roots in (lo, hi], counting by Sturm on the
    /// squarefree part; endpoints that are roots are handled by nudging.
    pub fn has_real_root(&self) -> bool {
        self.count_real_roots() > 0
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_poly(self, "t"))
    }
}

/// Canonical text rendering of a rational polynomial in the variable `var`.
pub fn format_poly(p: &QPoly, var: &str) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut parts: Vec<String> = vec![];
    for (i, c) in p.coeffs.iter().enumerate().rev() {
        if Zero::is_zero(c) {
            continue;
        }
        let abs = c.abs();
        let coeff_str = if abs.is_one() && i > 0 {
            String::new()
        } else if abs.denom().is_one() {
            format!("{}", abs.numer())
        } else {
            format!("{}/{}", abs.numer(), abs.denom())
        };
        let var_str = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        let body = match (coeff_str.is_empty(), var_str.is_empty()) {
            (true, true) => "1".to_string(),
            (true, false) => var_str,
            (false, true) => coeff_str,
            (false, false) => format!("{coeff_str}*{var_str}"),
        };
        if parts.is_empty() {
            if c.is_negative() {
                parts.push(format!("-{body}"));
            } else {
                parts.push(body);
            }
        } else if c.is_negative() {
            parts.push(format!(" - {body}"));
        } else {
            parts.push(format!(" + {body}"));
        }
    }
    parts.concat()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::rat::rat;

    #[test]
    fn div_rem_roundtrip() {
        let f = QPoly::from_ints(&[1, 0, -3, 2, 5]);
        let d = QPoly::from_ints(&[-1, 2, 1]);
        let (q, r) = f.div_rem(&d);
        assert_eq!(q.mul(&d).add(&r), f);
        assert!(r.deg_or_zero() < d.deg_or_zero());
    }

    #[test]
    fn gcd_of_multiples() {
        let a = QPoly::from_ints(&[-2, 0, 1]); // t^2-2
        let b = QPoly::from_ints(&[0, 1]); // t
        let f = a.mul(&b);
        assert_eq!(f.gcd(&a), a.monic());
        assert_eq!(a.gcd(&b).deg_or_zero(), 0);
    }

    #[test]
    fn isolates_sqrt2() {
        let p = QPoly::from_ints(&[-2, 0, 1]);
        let roots = p.isolate_real_roots();
        assert_eq!(roots.len(), 2);
        // one root in (-2,-1), one in (1,2)
        assert!(roots[0].1 <= rat(0));
        assert!(roots[1].0 >= rat(0));
        assert!(p.eval(&roots[0].0).is_positive() != p.eval(&roots[0].1).is_positive());
    }

    #[test]
    fn no_real_roots() {
        let p = QPoly::from_ints(&[1, 0, 1]);
        assert!(p.isolate_real_roots().is_empty());
    }

    #[test]
    fn isolates_origin() {
        let p = QPoly::var();
        let roots = p.isolate_real_roots();
        assert_eq!(roots.len(), 1);
        assert!(roots[0].0 <= rat(0) && rat(0) <= roots[0].1);
    }

    #[test]
    fn exact_rational_roots_found() {
        // (t-1)(t+2)t
        let p = QPoly::from_ints(&[0, -2, 1, 1]);
        let roots = p.isolate_real_roots();
        assert_eq!(roots.len(), 3);
    }

    #[test]
    fn sqrt_exact_works() {
        let p = QPoly::from_ints(&[1, 2, 1]);
        let s = p.sqrt_exact().unwrap();
        assert_eq!(s.mul(&s), p);
        assert!(QPoly::from_ints(&[1, 1, 1]).sqrt_exact().is_none());
    }

    #[test]
    fn sturm_count_matches_isolation() {
        let p = QPoly::from_ints(&[-6, 11, -6, 1]); // (t-1)(t-2)(t-3)
        assert_eq!(p.count_real_roots(), 3);
        assert_eq!(p.isolate_real_roots().len(), 3);
    }
}
