//! The rational function field ℚ(t): exact arithmetic, orderings given by
//! cuts of the real line, and the real discrete valuations used for residue
//! computations.

use super::algebraic::AlgebraicReal;
use super::factor::factor_qpoly;
use super::numberfield::{NfElem, NumberField};
use super::poly::{format_poly, QPoly};
use super::rat::{sign_rat, square_class, Rat};
use num_traits::{One, Zero};
use std::fmt;
use std::rc::Rc;

/// An ordering of ℚ(t), given by the position of t relative to the real
/// line: t infinitesimally left/right of an algebraic number, or beyond all
/// of ℝ in either direction.
#[derive(Clone, Debug)]
pub enum Cut {
    NegInf,
    PosInf,
    LeftOf(AlgebraicReal),
    RightOf(AlgebraicReal),
}

impl Cut {
    pub fn left_of_rat(r: Rat) -> Cut {
        Cut::LeftOf(AlgebraicReal::from_rational(r))
    }
    pub fn right_of_rat(r: Rat) -> Cut {
        Cut::RightOf(AlgebraicReal::from_rational(r))
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cut::NegInf => write!(f, "-inf"),
            Cut::PosInf => write!(f, "+inf"),
            Cut::LeftOf(a) => match a.as_rational() {
                Some(r) => write!(f, "{r}-"),
                None => write!(f, "({:?})-", a),
            },
            Cut::RightOf(a) => match a.as_rational() {
                Some(r) => write!(f, "{r}+"),
                None => write!(f, "({:?})+", a),
            },
        }
    }
}

/// A real discrete valuation of ℚ(t) trivial on ℚ: either t-adic at a monic
/// irreducible polynomial with a real root, or the degree valuation at
/// infinity.
#[derive(Clone, Debug, PartialEq)]
pub enum RealValuation {
    Finite(QPoly),
    Infinity,
}

impl RealValuation {
    /// Valuation at a monic irreducible polynomial; callers must have
    /// verified irreducibility.
    pub fn finite(p: QPoly) -> RealValuation {
        RealValuation::Finite(p.monic())
    }

    /// Real valuations have formally real residue field, i.e. the
    /// uniformizer polynomial has a real root.
    pub fn is_real(&self) -> bool {
        match self {
            RealValuation::Infinity => true,
            RealValuation::Finite(p) => p.has_real_root(),
        }
    }

    /// Residue field as a number field (degree 1 for rational points and
    /// for the valuation at infinity).
    pub fn residue_field(&self) -> Rc<NumberField> {
        match self {
            RealValuation::Infinity => NumberField::new(QPoly::var()).unwrap(),
            RealValuation::Finite(p) => NumberField::new(p.clone()).unwrap(),
        }
    }
}

impl fmt::Display for RealValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealValuation::Infinity => write!(f, "v_inf"),
            RealValuation::Finite(p) => write!(f, "v_({p})"),
        }
    }
}

/// An element of ℚ(t) in lowest terms with monic denominator.
#[derive(Clone, PartialEq)]
pub struct RatFunc {
    pub num: QPoly,
    pub den: QPoly,
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", format_poly(&self.num, "t"))
        } else {
            write!(
                f,
                "({})/({})",
                format_poly(&self.num, "t"),
                format_poly(&self.den, "t")
            )
        }
    }
}

impl RatFunc {
    pub fn new(num: QPoly, den: QPoly) -> RatFunc {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc {
                num,
                den: QPoly::constant(Rat::one()),
            };
        }
        let g = num.gcd(&den);
        let mut num = num.div_exact(&g);
        let mut den = den.div_exact(&g);
        let lc = den.coeffs.last().unwrap().clone();
        if !lc.is_one() {
            let inv = Rat::one() / lc;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFunc { num, den }
    }

    pub fn from_poly(p: QPoly) -> RatFunc {
        RatFunc {
            num: p,
            den: QPoly::constant(Rat::one()),
        }
    }

    pub fn constant(r: Rat) -> RatFunc {
        RatFunc::from_poly(QPoly::constant(r))
    }

    pub fn var() -> RatFunc {
        RatFunc::from_poly(QPoly::var())
    }

    pub fn zero() -> RatFunc {
        RatFunc::from_poly(QPoly::zero())
    }

    pub fn one() -> RatFunc {
        RatFunc::from_poly(QPoly::constant(Rat::one()))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_one()
    }

    pub fn as_rat(&self) -> Option<Rat> {
        if self.is_zero() {
            Some(Rat::zero())
        } else if self.is_constant() {
            Some(self.num.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn as_poly(&self) -> Option<QPoly> {
        if self.den.is_one() {
            Some(self.num.clone())
        } else {
            None
        }
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn inv(&self) -> RatFunc {
        assert!(!self.is_zero(), "inverse of zero");
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatFunc) -> RatFunc {
        self.mul(&o.inv())
    }

    pub fn square(&self) -> RatFunc {
        self.mul(self)
    }

    pub fn eval(&self, x: &Rat) -> Option<Rat> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    /// Sign under the ordering given by a cut.  Nonzero for nonzero
    /// elements: every nonzero rational function has constant sign on a
    /// punctured one-sided neighbourhood.
    pub fn sign_at(&self, cut: &Cut) -> i8 {
        if self.is_zero() {
            return 0;
        }
        let g = self.num.mul(&self.den);
        match cut {
            Cut::PosInf => sign_rat(g.coeffs.last().unwrap()),
            Cut::NegInf => {
                let lc = sign_rat(g.coeffs.last().unwrap());
                if g.deg_or_zero() % 2 == 0 {
                    lc
                } else {
                    -lc
                }
            }
            Cut::RightOf(c) | Cut::LeftOf(c) => {
                let q = c.poly.monic();
                let mut h = g;
                let mut m = 0usize;
                while q.divides(&h) {
                    h = h.div_exact(&q);
                    m += 1;
                }
                // near the root:  q(x) ~ q'(c) (x - c), so on the right
                // side sign(g) = sign(h(c)) * sign(q'(c))^m; the left side
                // picks up (-1)^m from (x - c)^m
                let mut s = c.sign_of_poly_at(&h);
                debug_assert!(s != 0);
                if m % 2 == 1 {
                    s *= c.derivative_sign();
                    if matches!(cut, Cut::LeftOf(_)) {
                        s = -s;
                    }
                }
                s
            }
        }
    }

    /// Value of the valuation (order of vanishing; negative for poles).
    pub fn valuation(&self, v: &RealValuation) -> i64 {
        assert!(!self.is_zero(), "valuation of zero");
        match v {
            RealValuation::Infinity => self.den.deg_or_zero() as i64 - self.num.deg_or_zero() as i64,
            RealValuation::Finite(p) => {
                // lowest terms: at most one of num, den is divisible by p
                ord_at(&self.num, p) - ord_at(&self.den, p)
            }
        }
    }

    /// Residue of f · π^{-v(f)} in the residue field, where π is the
    /// canonical uniformizer (p itself, or 1/t at infinity).
    pub fn residue(&self, v: &RealValuation, kappa: &Rc<NumberField>) -> NfElem {
        assert!(!self.is_zero());
        match v {
            RealValuation::Infinity => {
                let r = self.num.coeffs.last().unwrap() / self.den.coeffs.last().unwrap();
                kappa.from_rat(r)
            }
            RealValuation::Finite(p) => {
                let an = ord_at(&self.num, p);
                let ad = ord_at(&self.den, p);
                let un = strip(&self.num, p, an);
                let ud = strip(&self.den, p, ad);
                let n = kappa.from_poly(un.rem(p));
                let d = kappa.from_poly(ud.rem(p));
                use super::poly::Coeff;
                n.mul(&d.inv())
            }
        }
    }

    /// Square test in ℚ(t): f = n/d is a square iff n·d is the square of a
    /// polynomial.
    pub fn is_square(&self) -> bool {
        self.sqrt().is_some() || self.is_zero()
    }

    pub fn sqrt(&self) -> Option<RatFunc> {
        if self.is_zero() {
            return Some(RatFunc::zero());
        }
        let g = self.num.mul(&self.den);
        let s = g.sqrt_exact()?;
        Some(RatFunc::new(s, self.den.clone()))
    }

    /// Canonical square-class representative: a rational unit times the
    /// product of the distinct monic irreducible factors appearing with odd
    /// multiplicity in num·den.
    pub fn square_class_rep(&self) -> RatFunc {
        assert!(!self.is_zero());
        let g = self.num.mul(&self.den);
        let (c, factors) = factor_qpoly(&g);
        let mut rep = QPoly::constant(Rat::from_integer(square_class(&c)));
        for (p, m) in factors {
            if m % 2 == 1 {
                rep = rep.mul(&p);
            }
        }
        RatFunc::from_poly(rep)
    }

    /// Positive at every ordering of ℚ(t).  Equivalent to num·den being a
    /// positive semidefinite polynomial.
    pub fn is_totally_positive(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        let g = self.num.mul(&self.den);
        poly_is_psd(&g)
    }

    pub fn is_totally_nonnegative_or_zero(&self) -> bool {
        self.is_zero() || self.is_totally_positive()
    }
}

/// g(x) >= 0 for all real x, for nonzero g: positive leading coefficient
/// and every irreducible factor with a real root occurs to an even power.
pub fn poly_is_psd(g: &QPoly) -> bool {
    if g.is_zero() {
        return false;
    }
    if sign_rat(g.coeffs.last().unwrap()) < 0 {
        return false;
    }
    let (_, factors) = factor_qpoly(g);
    factors
        .iter()
        .all(|(p, m)| m % 2 == 0 || !p.has_real_root())
}

fn ord_at(f: &QPoly, p: &QPoly) -> i64 {
    let mut h = f.clone();
    let mut m = 0;
    while p.divides(&h) {
        h = h.div_exact(p);
        m += 1;
    }
    m
}

fn strip(f: &QPoly, p: &QPoly, m: i64) -> QPoly {
    let mut h = f.clone();
    for _ in 0..m {
        h = h.div_exact(p);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::rat::rat;

    fn t() -> RatFunc {
        RatFunc::var()
    }

    #[test]
    fn arithmetic_in_lowest_terms() {
        // (t^2 - 1)/(t - 1) = t + 1
        let f = RatFunc::new(QPoly::from_ints(&[-1, 0, 1]), QPoly::from_ints(&[-1, 1]));
        assert_eq!(f.as_poly(), Some(QPoly::from_ints(&[1, 1])));
        let g = f.mul(&f.inv());
        assert_eq!(g, RatFunc::one());
    }

    #[test]
    fn signs_at_cuts() {
        let f = t(); // t
        assert_eq!(f.sign_at(&Cut::PosInf), 1);
        assert_eq!(f.sign_at(&Cut::NegInf), -1);
        assert_eq!(f.sign_at(&Cut::right_of_rat(rat(0))), 1);
        assert_eq!(f.sign_at(&Cut::left_of_rat(rat(0))), -1);
        assert_eq!(f.sign_at(&Cut::right_of_rat(rat(-5))), -1);

        // t^2 - 2 changes sign exactly at +/- sqrt(2)
        let g = RatFunc::from_poly(QPoly::from_ints(&[-2, 0, 1]));
        let r = AlgebraicReal::real_roots_of(&QPoly::from_ints(&[-2, 0, 1]));
        assert_eq!(g.sign_at(&Cut::LeftOf(r[1].clone())), -1);
        assert_eq!(g.sign_at(&Cut::RightOf(r[1].clone())), 1);
        assert_eq!(g.sign_at(&Cut::LeftOf(r[0].clone())), 1);
        assert_eq!(g.sign_at(&Cut::right_of_rat(rat(0))), -1);
    }

    #[test]
    fn sign_with_even_multiplicity() {
        // t^2 is positive on both sides of 0
        let f = RatFunc::from_poly(QPoly::from_ints(&[0, 0, 1]));
        assert_eq!(f.sign_at(&Cut::right_of_rat(rat(0))), 1);
        assert_eq!(f.sign_at(&Cut::left_of_rat(rat(0))), 1);
    }

    #[test]
    fn valuations_and_residues() {
        // f = (t^2 - 2) / t
        let f = RatFunc::new(QPoly::from_ints(&[-2, 0, 1]), QPoly::from_ints(&[0, 1]));
        let vt = RealValuation::finite(QPoly::var());
        assert_eq!(f.valuation(&vt), -1);
        assert_eq!(f.valuation(&RealValuation::Infinity), -1);
        let p = QPoly::from_ints(&[-2, 0, 1]);
        let vp = RealValuation::finite(p.clone());
        assert_eq!(f.valuation(&vp), 1);
        // residue of f/p at p: 1/t -> 1/theta where theta^2 = 2, i.e. theta/2
        let k = vp.residue_field();
        let r = f.residue(&vp, &k);
        assert_eq!(r.rep, QPoly::new(vec![rat(0), rat(1) / rat(2)]));
    }

    #[test]
    fn square_detection() {
        let f = RatFunc::new(QPoly::from_ints(&[0, 0, 4]), QPoly::from_ints(&[1, 2, 1]));
        assert!(f.is_square());
        assert!(!t().is_square());
        let g = f.mul(&t());
        assert_eq!(g.square_class_rep(), t());
    }

    #[test]
    fn total_positivity() {
        assert!(RatFunc::from_poly(QPoly::from_ints(&[1, 0, 1])).is_totally_positive());
        assert!(RatFunc::from_poly(QPoly::from_ints(&[0, 0, 1])).is_totally_positive());
        assert!(!t().is_totally_positive());
        assert!(!RatFunc::from_poly(QPoly::from_ints(&[-2, 0, 1])).is_totally_positive());
        // (t^2+1)/(t^4+3) is totally positive
        let f = RatFunc::new(QPoly::from_ints(&[1, 0, 1]), QPoly::from_ints(&[3, 0, 0, 0, 1]));
        assert!(f.is_totally_positive());
    }
}
