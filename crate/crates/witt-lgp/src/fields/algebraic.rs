//! Real algebraic numbers as (minimal polynomial, isolating interval) pairs
//! with lazy bisection refinement.  All comparisons and sign decisions are
//! exact; there is no floating point.

use super::factor::{factor_qpoly, is_irreducible};
use super::poly::QPoly;
use super::rat::{sign_rat, Rat};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// A real algebraic number.  `poly` is monic irreducible over ℚ; the
/// interval `(lo, hi)` isolates exactly one real root (certified by a Sturm
/// count at construction).  Rational numbers are stored exactly with
/// `lo == hi` and `poly = x - r`.
#[derive(Clone)]
pub struct AlgebraicReal {
    pub poly: QPoly,
    pub lo: Rat,
    pub hi: Rat,
}

impl fmt::Debug for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root of {} in ({}, {})", self.poly, self.lo, self.hi)
    }
}

impl AlgebraicReal {
    pub fn from_rational(r: Rat) -> Self {
        let poly = QPoly::new(vec![-r.clone(), Rat::one()]);
        AlgebraicReal {
            poly,
            lo: r.clone(),
            hi: r,
        }
    }

    /// All real roots of an arbitrary nonzero polynomial, in increasing
    /// order, as algebraic reals with irreducible minimal polynomials.
    pub fn real_roots_of(f: &QPoly) -> Vec<AlgebraicReal> {
        if f.is_zero() || f.is_constant() {
            return vec![];
        }
        let (_, factors) = factor_qpoly(f);
        let mut roots: Vec<AlgebraicReal> = vec![];
        for (p, _) in factors {
            roots.extend(Self::roots_of_irreducible(&p));
        }
        roots.sort_by(|a, b| a.cmp(b));
        roots
    }

    /// Roots of a monic irreducible polynomial (skips refactoring).
    pub fn roots_of_irreducible(p: &QPoly) -> Vec<AlgebraicReal> {
        debug_assert!(is_irreducible(p));
        let p = p.monic();
        if p.deg_or_zero() == 1 {
            return vec![AlgebraicReal::from_rational(-p.coeffs[0].clone())];
        }
        p.isolate_real_roots()
            .into_iter()
            .map(|(lo, hi)| {
                // rational roots cannot occur for an irreducible polynomial
                // of degree >= 2
                debug_assert!(lo < hi);
                AlgebraicReal {
                    poly: p.clone(),
                    lo,
                    hi,
                }
            })
            .collect()
    }

    pub fn is_rational(&self) -> bool {
        self.lo == self.hi
    }

    pub fn as_rational(&self) -> Option<Rat> {
        if self.is_rational() {
            Some(self.lo.clone())
        } else {
            None
        }
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    /// Halve the isolating interval (no-op for exact rationals).
    pub fn refine(&mut self) {
        if self.is_rational() {
            return;
        }
        let mid = (&self.lo + &self.hi) / Rat::from_integer(2.into());
        let v = self.poly.eval(&mid);
        if v.is_zero() {
            // mid is a rational root of an irreducible poly => degree 1,
            // which is stored exactly; unreachable for degree >= 2
            self.lo = mid.clone();
            self.hi = mid;
            return;
        }
        // keep the side with the sign change
        let slo = sign_rat(&self.poly.eval(&self.lo));
        if slo != sign_rat(&v) {
            self.hi = mid;
        } else {
            self.lo = mid;
        }
    }

    pub fn refined(&self, times: usize) -> AlgebraicReal {
        let mut a = self.clone();
        for _ in 0..times {
            a.refine();
        }
        a
    }

    /// Exact comparison by interval refinement; equality is detected via a
    /// Sturm root count on the intersection when the minimal polynomials
    /// coincide.
    pub fn cmp(&self, other: &AlgebraicReal) -> Ordering {
        if let (Some(a), Some(b)) = (self.as_rational(), other.as_rational()) {
            return a.cmp(&b);
        }
        let mut a = self.clone();
        let mut b = other.clone();
        if a.poly == b.poly {
            // same root iff the intersection still contains a root of the
            // (squarefree, irreducible) polynomial
            let ilo = a.lo.clone().max(b.lo.clone());
            let ihi = a.hi.clone().min(b.hi.clone());
            if ilo < ihi {
                let seq = a.poly.sturm_sequence();
                let lo_ok = !a.poly.eval(&ilo).is_zero();
                let hi_ok = !a.poly.eval(&ihi).is_zero();
                if lo_ok && hi_ok && QPoly::count_roots_between(&seq, &ilo, &ihi) == 1 {
                    // both intervals contain exactly one root; the shared
                    // root in the intersection is each one's root
                    return Ordering::Equal;
                }
            }
        }
        loop {
            if a.hi <= b.lo {
                // allow equality only at exact rational touch
                if a.hi == b.lo && a.is_rational() && b.is_rational() {
                    return Ordering::Equal;
                }
                return Ordering::Less;
            }
            if b.hi <= a.lo {
                return Ordering::Greater;
            }
            if a.poly == b.poly {
                let ilo = a.lo.clone().max(b.lo.clone());
                let ihi = a.hi.clone().min(b.hi.clone());
                if ilo < ihi {
                    let seq = a.poly.sturm_sequence();
                    if !a.poly.eval(&ilo).is_zero()
                        && !a.poly.eval(&ihi).is_zero()
                        && QPoly::count_roots_between(&seq, &ilo, &ihi) == 1
                    {
                        return Ordering::Equal;
                    }
                }
            }
            a.refine();
            b.refine();
        }
    }

    pub fn equals(&self, other: &AlgebraicReal) -> bool {
        self.cmp(other) == Ordering::Equal
    }

    /// A rational number strictly between this root and `other` (requires
    /// self < other).
    pub fn rational_between(&self, other: &AlgebraicReal) -> Rat {
        debug_assert_eq!(self.cmp(other), Ordering::Less);
        let mut a = self.clone();
        let mut b = other.clone();
        loop {
            if a.hi < b.lo {
                return (&a.hi + &b.lo) / Rat::from_integer(2.into());
            }
            if a.hi == b.lo && !a.poly.eval(&a.hi).is_zero() && !b.poly.eval(&b.lo).is_zero() {
                return a.hi.clone();
            }
            a.refine();
            b.refine();
        }
    }

    /// A rational strictly below the root.
    pub fn rational_below(&self) -> Rat {
        if self.is_rational() {
            self.lo.clone() - Rat::one()
        } else {
            self.lo.clone()
        }
    }

    /// A rational strictly above the root.
    pub fn rational_above(&self) -> Rat {
        if self.is_rational() {
            self.hi.clone() + Rat::one()
        } else {
            self.hi.clone()
        }
    }

    /// Sign of g(α) for a rational polynomial g; exact, by reduction modulo
    /// the minimal polynomial and interval refinement.
    pub fn sign_of_poly_at(&self, g: &QPoly) -> i8 {
        if let Some(r) = self.as_rational() {
            return sign_rat(&g.eval(&r));
        }
        let r = g.rem(&self.poly);
        if r.is_zero() {
            return 0;
        }
        let mut a = self.clone();
        loop {
            let (lo, hi) = interval_eval(&r, &a.lo, &a.hi);
            if lo.is_positive() {
                return 1;
            }
            if hi.is_negative() {
                return -1;
            }
            a.refine();
        }
    }

    /// Sign of the minimal polynomial's derivative at the root; nonzero
    /// because irreducible polynomials are squarefree.
    pub fn derivative_sign(&self) -> i8 {
        if self.is_rational() {
            // poly = x - r
            return 1;
        }
        let s = self.sign_of_poly_at(&self.poly.derivative());
        debug_assert!(s != 0);
        s
    }
}

/// Interval evaluation of a rational polynomial by Horner with endpoint
/// rounding: returns (min, max) bounds for g on [lo, hi].
pub fn interval_eval(g: &QPoly, lo: &Rat, hi: &Rat) -> (Rat, Rat) {
    let mut acc_lo = Rat::zero();
    let mut acc_hi = Rat::zero();
    for c in g.coeffs.iter().rev() {
        // [acc_lo, acc_hi] * [lo, hi] + c
        let p1 = &acc_lo * lo;
        let p2 = &acc_lo * hi;
        let p3 = &acc_hi * lo;
        let p4 = &acc_hi * hi;
        let mn = p1.clone().min(p2.clone()).min(p3.clone()).min(p4.clone());
        let mx = p1.max(p2).max(p3).max(p4);
        acc_lo = mn + c;
        acc_hi = mx + c;
    }
    (acc_lo, acc_hi)
}

/// Dedup a sorted list of algebraic reals (merging equal roots coming from
/// different source polynomials is impossible: distinct irreducibles never
/// share a root, so equality only happens for identical minimal polys).
pub fn sort_dedup(mut roots: Vec<AlgebraicReal>) -> Vec<AlgebraicReal> {
    roots.sort_by(|a, b| a.cmp(b));
    let mut out: Vec<AlgebraicReal> = vec![];
    for r in roots {
        if out.last().map_or(true, |l| !l.equals(&r)) {
            out.push(r);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::rat::rat;

    fn sqrt2() -> AlgebraicReal {
        let p = QPoly::from_ints(&[-2, 0, 1]);
        AlgebraicReal::roots_of_irreducible(&p)
            .into_iter()
            .last()
            .unwrap()
    }

    #[test]
    fn orders_roots() {
        let roots = AlgebraicReal::real_roots_of(&QPoly::from_ints(&[0, -2, 0, 1])); // t(t^2-2)
        assert_eq!(roots.len(), 3);
        assert_eq!(roots[1].as_rational(), Some(rat(0)));
        assert_eq!(roots[0].cmp(&roots[2]), Ordering::Less);
    }

    #[test]
    fn equality_of_same_root() {
        let a = sqrt2();
        let b = a.refined(5);
        assert!(a.equals(&b));
        let p = QPoly::from_ints(&[-2, 0, 1]);
        let neg = AlgebraicReal::roots_of_irreducible(&p).remove(0);
        assert!(!a.equals(&neg));
    }

    #[test]
    fn sign_of_poly() {
        let a = sqrt2();
        // t^2 - 3 < 0 at sqrt(2)
        assert_eq!(a.sign_of_poly_at(&QPoly::from_ints(&[-3, 0, 1])), -1);
        assert_eq!(a.sign_of_poly_at(&QPoly::from_ints(&[-1, 0, 1])), 1);
        assert_eq!(a.sign_of_poly_at(&QPoly::from_ints(&[-2, 0, 1])), 0);
        // t > 0 at sqrt(2)
        assert_eq!(a.sign_of_poly_at(&QPoly::var()), 1);
    }

    #[test]
    fn rational_between_roots() {
        let roots = AlgebraicReal::real_roots_of(&QPoly::from_ints(&[-2, 0, 1]));
        let m = roots[0].rational_between(&roots[1]);
        assert!(m > rat(-2) && m < rat(2));
    }
}
