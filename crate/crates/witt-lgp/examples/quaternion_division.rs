//! Quaternion algebras (a,b): division tests via Hilbert symbols over ℚ and
//! via ordering/valuation certificates over ℚ(t), plus admissible places.

use witt_lgp::algebras::{relevant_valuations, QuaternionAlgebra};
use witt_lgp::cli::{canon_algebra, parse_expression, Parsed};

fn inspect(text: &str) {
    let Parsed::Algebra(d) = parse_expression(text).unwrap() else {
        panic!("expected quat(a, b)");
    };
    let ans = d.is_division();
    println!("{}", canon_algebra(&d));
    println!("  division: {:?} (route {})", ans.answer, ans.route);
    if let Some(w) = &ans.split_point {
        let coords: Vec<String> = w.vectors[0].iter().map(|c| format!("{c}")).collect();
        println!("  conic point ({})", coords.join(", "));
    }
    for p in d.norm_form().sampled_orderings() {
        println!("  ordering {p:<16} admissible: {}", d.ordering_admissible(&p));
    }
    for v in relevant_valuations(&d.norm_form()) {
        println!("  valuation {v:<15} admissible: {:?}", d.valuation_admissible(&v));
    }
    println!();
}

fn main() {
    inspect("quat(-1, -1)"); // Hamilton quaternions: division
    inspect("quat(2, 7)");   // split over Q: the conic has a rational point
    inspect("quat(-1, t)");  // division over Q(t) by a residue obstruction
    let d = QuaternionAlgebra::from_ints(-1, -1);
    // Norm multiplicativity on the basis: n(xy) = n(x) n(y).
    let [one, i, j, k] = d.basis();
    let x = one.add(&i);
    let y = j.add(&k);
    assert_eq!(x.mul(&y).norm(), x.norm().mul(&y.norm()));
    println!("norm multiplicativity checked on (1+i)(j+k) in (-1,-1)_Q");
}
