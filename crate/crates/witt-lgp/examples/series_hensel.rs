//! Precision-tracked Laurent series at a real valuation of ℚ(t), square
//! roots by digit recursion, and Hensel lifting of residue conic points —
//! the machinery behind the henselian local conditions.

use witt_lgp::fields::poly::QPoly;
use witt_lgp::fields::ratfunc::{RatFunc, RealValuation};
use witt_lgp::fields::series::{hensel_lift_conic, SeriesElement};

fn main() {
    // Expand t^3 / (t + 1) at the valuation v_t to 8 digits.
    let v = RealValuation::finite(QPoly::from_ints(&[0, 1]));
    let f = RatFunc::new(
        QPoly::from_ints(&[0, 0, 0, 1]),
        QPoly::from_ints(&[1, 1]),
    );
    let s = SeriesElement::from_ratfunc(&f, &v, 8).unwrap();
    println!("t^3/(t+1) at v_t: valuation {:?}, first digits {:?}", s.valuation(), s.coeffs);

    // sqrt(1 + t) exists in the completion at t: 1 + t/2 - t^2/8 + ...
    let g = RatFunc::from_poly(QPoly::from_ints(&[1, 1]));
    let sg = SeriesElement::from_ratfunc(&g, &v, 8).unwrap();
    let root = sg.sqrt().unwrap().expect("1 + t is a square at v_t");
    let check = root.mul(&root).sub(&sg);
    assert!(check.is_zero_to_prec());
    println!("sqrt(1 + t) found to precision {}", root.prec);

    // The conic x^2 = a y^2 + b z^2 for (a, b) = (1 + t, 1) has a residue
    // point that lifts henselianly; for (a, b) = (-1, -1) it cannot.
    let a = RatFunc::from_poly(QPoly::from_ints(&[1, 1]));
    let b = RatFunc::one();
    match hensel_lift_conic(&a, &b, &v, 8).unwrap() {
        Some([x, y, z]) => {
            println!("conic point for (1 + t, 1) at v_t:");
            println!("  x: val {:?}", x.valuation());
            println!("  y: val {:?}", y.valuation());
            println!("  z: val {:?}", z.valuation());
        }
        None => println!("no lift (unexpected)"),
    }
    let neg = RatFunc::from_poly(QPoly::from_ints(&[-1]));
    assert!(hensel_lift_conic(&neg, &neg, &v, 8).unwrap().is_none());
    println!("(-1, -1) has no conic point over the completion, as expected");
}
