//! Real number fields ℚ(θ) presented by a monic irreducible polynomial,
//! together with their real embeddings (= real roots of the minimal
//! polynomial, as exact algebraic numbers).

use super::algebraic::AlgebraicReal;
use super::factor::is_irreducible;
use super::poly::{format_poly, Coeff, Poly, QPoly};
use super::rat::Rat;
use crate::{Error, Result};
use num_traits::{One, Zero};
use std::fmt;
use std::rc::Rc;

pub struct NumberField {
    pub min_poly: QPoly,
    pub embeddings: Vec<AlgebraicReal>,
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Q[x]/({}), {} real embeddings",
            self.min_poly,
            self.embeddings.len()
        )
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.min_poly == other.min_poly
    }
}

impl NumberField {
    /// Requires a monic irreducible polynomial of degree >= 1.
    pub fn new(min_poly: QPoly) -> Result<Rc<NumberField>> {
        if min_poly.deg_or_zero() < 1 {
            return Err(Error::ReduciblePolynomial(format!("{min_poly}")));
        }
        let min_poly = min_poly.monic();
        if !is_irreducible(&min_poly) {
            return Err(Error::ReduciblePolynomial(format!("{min_poly}")));
        }
        let embeddings = AlgebraicReal::roots_of_irreducible(&min_poly);
        Ok(Rc::new(NumberField {
            min_poly,
            embeddings,
        }))
    }

    pub fn degree(&self) -> usize {
        self.min_poly.deg_or_zero()
    }

    pub fn zero(self: &Rc<Self>) -> NfElem {
        NfElem {
            field: self.clone(),
            rep: QPoly::zero(),
        }
    }

    pub fn one(self: &Rc<Self>) -> NfElem {
        NfElem {
            field: self.clone(),
            rep: QPoly::constant(Rat::one()),
        }
    }

    pub fn gen(self: &Rc<Self>) -> NfElem {
        NfElem {
            field: self.clone(),
            rep: QPoly::var().rem(&self.min_poly),
        }
    }

    pub fn from_rat(self: &Rc<Self>, r: Rat) -> NfElem {
        NfElem {
            field: self.clone(),
            rep: QPoly::constant(r),
        }
    }

    pub fn from_poly(self: &Rc<Self>, p: QPoly) -> NfElem {
        NfElem {
            field: self.clone(),
            rep: p.rem(&self.min_poly),
        }
    }
}

/// An element of a number field, as a polynomial in the generator of degree
/// below the field degree.
#[derive(Clone)]
pub struct NfElem {
    pub field: Rc<NumberField>,
    pub rep: QPoly,
}

impl PartialEq for NfElem {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.rep == other.rep
    }
}

impl fmt::Debug for NfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_poly(&self.rep, "x"))
    }
}

impl fmt::Display for NfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_poly(&self.rep, "x"))
    }
}

impl NfElem {
    pub fn as_rat(&self) -> Option<Rat> {
        if self.rep.is_zero() {
            Some(Rat::zero())
        } else if self.rep.is_constant() {
            Some(self.rep.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Sign of the element under the i-th real embedding.
    pub fn sign_at_embedding(&self, i: usize) -> i8 {
        self.field.embeddings[i].sign_of_poly_at(&self.rep)
    }

    pub fn is_totally_positive(&self) -> bool {
        (0..self.field.embeddings.len()).all(|i| self.sign_at_embedding(i) > 0)
    }

    /// Multiplicative inverse modulo the minimal polynomial.
    pub fn inverse(&self) -> NfElem {
        assert!(!self.rep.is_zero(), "inverse of zero");
        let (g, s, _) = self.rep.xgcd(&self.field.min_poly);
        // g is a nonzero constant since min_poly is irreducible
        debug_assert!(g.is_constant() && !g.is_zero());
        let c = g.coeffs[0].clone();
        NfElem {
            field: self.field.clone(),
            rep: s.scale(&(Rat::one() / c)).rem(&self.field.min_poly),
        }
    }
}

impl Coeff for NfElem {
    fn zero_like(&self) -> Self {
        self.field.zero()
    }
    fn one_like(&self) -> Self {
        self.field.one()
    }
    fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        NfElem {
            field: self.field.clone(),
            rep: self.rep.add(&o.rep),
        }
    }
    fn sub(&self, o: &Self) -> Self {
        NfElem {
            field: self.field.clone(),
            rep: self.rep.sub(&o.rep),
        }
    }
    fn mul(&self, o: &Self) -> Self {
        NfElem {
            field: self.field.clone(),
            rep: self.rep.mul(&o.rep).rem(&self.field.min_poly),
        }
    }
    fn neg(&self) -> Self {
        NfElem {
            field: self.field.clone(),
            rep: self.rep.neg(),
        }
    }
    fn inv(&self) -> Self {
        self.inverse()
    }
    fn from_rat_like(&self, r: &Rat) -> Self {
        self.field.from_rat(r.clone())
    }
}

/// Polynomials over a number field (used for diagonalization bookkeeping).
pub type NfPoly = Poly<NfElem>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::rat::rat;

    fn q_sqrt2() -> Rc<NumberField> {
        NumberField::new(QPoly::from_ints(&[-2, 0, 1])).unwrap()
    }

    #[test]
    fn rejects_reducible() {
        assert!(NumberField::new(QPoly::from_ints(&[-4, 0, 1])).is_err());
        assert!(NumberField::new(QPoly::from_ints(&[7])).is_err());
    }

    #[test]
    fn two_real_embeddings_of_sqrt2() {
        let k = q_sqrt2();
        assert_eq!(k.embeddings.len(), 2);
        let x = k.gen();
        // x^2 = 2 in the field
        assert_eq!(x.mul(&x).as_rat(), Some(rat(2)));
        // generator is negative at one embedding, positive at the other
        let signs: Vec<i8> = (0..2).map(|i| x.sign_at_embedding(i)).collect();
        assert_eq!(signs, vec![-1, 1]);
        assert!(!x.is_totally_positive());
        // 3 + x = 3 +/- sqrt(2) > 0 everywhere
        let y = x.add(&k.from_rat(rat(3)));
        assert!(y.is_totally_positive());
    }

    #[test]
    fn inverse_works() {
        let k = q_sqrt2();
        let x = k.gen().add(&k.from_rat(rat(1))); // 1 + sqrt2
        let inv = x.inverse();
        assert_eq!(x.mul(&inv), k.one());
    }

    #[test]
    fn cubic_field_one_real_embedding() {
        // x^3 - 2 has a single real root
        let k = NumberField::new(QPoly::from_ints(&[-2, 0, 0, 1])).unwrap();
        assert_eq!(k.embeddings.len(), 1);
        assert!(k.gen().is_totally_positive());
    }
}
