//! A tagged union over the three supported base fields, so that forms and
//! algebras can be written once.  Arithmetic panics on mixed variants; the
//! parser and constructors guarantee homogeneity.

use super::numberfield::{NfElem, NumberField};
use super::poly::Coeff;
use super::rat::{is_square_rat, sign_rat, sqrt_rat, square_class, Rat};
use super::ratfunc::{Cut, RatFunc};
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::rc::Rc;

#[derive(Clone, Debug)]
pub enum BaseField {
    Q,
    Nf(Rc<NumberField>),
    FunQ,
}

impl PartialEq for BaseField {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (BaseField::Q, BaseField::Q) => true,
            (BaseField::FunQ, BaseField::FunQ) => true,
            (BaseField::Nf(a), BaseField::Nf(b)) => a == b,
            _ => false,
        }
    }
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseField::Q => write!(f, "Q"),
            BaseField::Nf(k) => write!(f, "Q[x]/({})", k.min_poly),
            BaseField::FunQ => write!(f, "Q(t)"),
        }
    }
}

/// An ordering of the base field: ℚ has a unique one, a number field has
/// one per real embedding, ℚ(t) has the cuts (free orderings of higher
/// level do not occur for these fields at the forms we handle, see the
/// signature machinery in `qforms`).
#[derive(Clone, Debug)]
pub enum OrderingPt {
    QReal,
    Embedding(usize),
    FunCut(Cut),
}

impl fmt::Display for OrderingPt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderingPt::QReal => write!(f, "R"),
            OrderingPt::Embedding(i) => write!(f, "sigma_{i}"),
            OrderingPt::FunCut(c) => write!(f, "t -> {c}"),
        }
    }
}

#[derive(Clone, PartialEq)]
pub enum Value {
    Rat(Rat),
    Nf(NfElem),
    Fun(RatFunc),
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Rat(r) => write!(f, "{r}"),
            Value::Nf(x) => write!(f, "{x}"),
            Value::Fun(g) => write!(f, "{g}"),
        }
    }
}

impl Value {
    pub fn field(&self) -> BaseField {
        match self {
            Value::Rat(_) => BaseField::Q,
            Value::Nf(x) => BaseField::Nf(x.field.clone()),
            Value::Fun(_) => BaseField::FunQ,
        }
    }

    pub fn rat(r: Rat) -> Value {
        Value::Rat(r)
    }

    pub fn int(n: i64) -> Value {
        Value::Rat(Rat::from_integer(n.into()))
    }

    pub fn zero_of(field: &BaseField) -> Value {
        match field {
            BaseField::Q => Value::Rat(Rat::zero()),
            BaseField::Nf(k) => Value::Nf(k.zero()),
            BaseField::FunQ => Value::Fun(RatFunc::zero()),
        }
    }

    pub fn one_of(field: &BaseField) -> Value {
        match field {
            BaseField::Q => Value::Rat(Rat::one()),
            BaseField::Nf(k) => Value::Nf(k.one()),
            BaseField::FunQ => Value::Fun(RatFunc::one()),
        }
    }

    pub fn from_rat_in(field: &BaseField, r: Rat) -> Value {
        match field {
            BaseField::Q => Value::Rat(r),
            BaseField::Nf(k) => Value::Nf(k.from_rat(r)),
            BaseField::FunQ => Value::Fun(RatFunc::constant(r)),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::Rat(r) => num_traits::Zero::is_zero(r),
            Value::Nf(x) => x.is_zero(),
            Value::Fun(g) => g.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Value::Rat(r) => r.is_one(),
            Value::Nf(x) => x.rep.is_one(),
            Value::Fun(g) => g.as_rat().map_or(false, |r| r.is_one()),
        }
    }

    pub fn as_rat(&self) -> Option<Rat> {
        match self {
            Value::Rat(r) => Some(r.clone()),
            Value::Nf(x) => x.as_rat(),
            Value::Fun(g) => g.as_rat(),
        }
    }

    pub fn as_fun(&self) -> Option<RatFunc> {
        match self {
            Value::Fun(g) => Some(g.clone()),
            Value::Rat(r) => Some(RatFunc::constant(r.clone())),
            Value::Nf(_) => None,
        }
    }

    pub fn add(&self, o: &Value) -> Value {
        match (self, o) {
            (Value::Rat(a), Value::Rat(b)) => Value::Rat(a + b),
            (Value::Nf(a), Value::Nf(b)) => Value::Nf(Coeff::add(a, b)),
            (Value::Fun(a), Value::Fun(b)) => Value::Fun(a.add(b)),
            _ => panic!("mixed base fields"),
        }
    }

    pub fn sub(&self, o: &Value) -> Value {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Value {
        match self {
            Value::Rat(a) => Value::Rat(-a),
            Value::Nf(a) => Value::Nf(Coeff::neg(a)),
            Value::Fun(a) => Value::Fun(a.neg()),
        }
    }

    pub fn mul(&self, o: &Value) -> Value {
        match (self, o) {
            (Value::Rat(a), Value::Rat(b)) => Value::Rat(a * b),
            (Value::Nf(a), Value::Nf(b)) => Value::Nf(Coeff::mul(a, b)),
            (Value::Fun(a), Value::Fun(b)) => Value::Fun(a.mul(b)),
            _ => panic!("mixed base fields"),
        }
    }

    pub fn inv(&self) -> Value {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            Value::Rat(a) => Value::Rat(Rat::one() / a),
            Value::Nf(a) => Value::Nf(a.inverse()),
            Value::Fun(a) => Value::Fun(a.inv()),
        }
    }

    pub fn div(&self, o: &Value) -> Value {
        self.mul(&o.inv())
    }

    pub fn square(&self) -> Value {
        self.mul(self)
    }

    pub fn scale_rat(&self, r: &Rat) -> Value {
        self.mul(&Value::from_rat_in(&self.field(), r.clone()))
    }

    /// Sign under an ordering.  Panics when the ordering does not belong to
    /// the element's base field.
    pub fn sign_at(&self, p: &OrderingPt) -> i8 {
        match (self, p) {
            (Value::Rat(r), OrderingPt::QReal) => sign_rat(r),
            (Value::Nf(x), OrderingPt::Embedding(i)) => x.sign_at_embedding(*i),
            (Value::Fun(g), OrderingPt::FunCut(c)) => g.sign_at(c),
            _ => panic!("ordering does not match base field"),
        }
    }

    /// Square in the base field.  Over number fields the test is exact for
    /// rational constants and conservative (None) otherwise.
    pub fn is_square(&self) -> Option<bool> {
        match self {
            Value::Rat(r) => Some(!r.is_negative() && is_square_rat(r)),
            Value::Fun(g) => Some(g.is_square()),
            Value::Nf(x) => match x.as_rat() {
                Some(r) => {
                    if !r.is_negative() && is_square_rat(&r) {
                        Some(true)
                    } else {
                        // a rational can acquire a square root in the
                        // extension, so a negative answer is not certain
                        None
                    }
                }
                None => None,
            },
        }
    }

    pub fn sqrt(&self) -> Option<Value> {
        match self {
            Value::Rat(r) => sqrt_rat(r).map(Value::Rat),
            Value::Fun(g) => g.sqrt().map(Value::Fun),
            Value::Nf(x) => x
                .as_rat()
                .and_then(|r| sqrt_rat(&r))
                .map(|s| Value::Nf(x.field.from_rat(s))),
        }
    }

    /// Canonical square-class representative where one exists (ℚ and ℚ(t));
    /// number-field entries are returned unchanged.
    pub fn square_class_rep(&self) -> Value {
        match self {
            Value::Rat(r) => Value::Rat(Rat::from_integer(square_class(r))),
            Value::Fun(g) => Value::Fun(g.square_class_rep()),
            Value::Nf(x) => Value::Nf(x.clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::poly::QPoly;
    use crate::fields::rat::{rat, ratq};

    #[test]
    fn rational_values() {
        let a = Value::rat(ratq(9, 4));
        assert_eq!(a.sqrt(), Some(Value::rat(ratq(3, 2))));
        assert_eq!(a.square_class_rep(), Value::int(1));
        assert_eq!(Value::int(12).square_class_rep(), Value::int(3));
        assert_eq!(a.sign_at(&OrderingPt::QReal), 1);
    }

    #[test]
    fn function_values() {
        let t = Value::Fun(RatFunc::var());
        let s = t.square();
        assert_eq!(s.is_square(), Some(true));
        assert_eq!(t.is_square(), Some(false));
        assert_eq!(
            t.sign_at(&OrderingPt::FunCut(Cut::right_of_rat(rat(0)))),
            1
        );
    }

    #[test]
    fn nf_values() {
        let k = NumberField::new(QPoly::from_ints(&[-2, 0, 1])).unwrap();
        let x = Value::Nf(k.gen());
        assert_eq!(x.square(), Value::Nf(k.from_rat(rat(2))));
        assert_eq!(x.sign_at(&OrderingPt::Embedding(0)), -1);
        assert_eq!(x.square().is_square(), None); // 2 is a square in Q(sqrt 2)
        assert_eq!(Value::Nf(k.from_rat(rat(9))).is_square(), Some(true));
    }
}
