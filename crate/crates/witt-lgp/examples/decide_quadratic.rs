//! Decide weak isotropy of diagonal quadratic forms over ℚ(t) with the
//! Bröcker–Prestel local-global principle, printing either an explicit
//! witness or a local obstruction certificate.

use witt_lgp::cli::{canon_form, parse_expression, Parsed};
use witt_lgp::lgp::{bp_quadratic, Decision, Witness};
use witt_lgp::qforms::SearchBounds;

fn decide(text: &str) {
    let Parsed::Form(q) = parse_expression(text).unwrap() else {
        panic!("expected a form");
    };
    println!("form {}", canon_form(&q));
    match bp_quadratic(&q, &SearchBounds::default()) {
        Decision::WeaklyIsotropic(w) => {
            println!("  weakly isotropic");
            if let Some(Witness::Quadratic(iw)) = w {
                assert!(iw.verify(&q), "witness must re-substitute to zero");
                println!("  witness with {} copies:", iw.copies);
                for (n, v) in iw.vectors.iter().enumerate() {
                    let coords: Vec<String> = v.iter().map(|c| format!("{c}")).collect();
                    println!("    x_{n} = ({})", coords.join(", "));
                }
            }
        }
        Decision::StronglyAnisotropic(obs) => {
            assert!(obs.verify_quadratic(&q), "obstruction must re-verify");
            println!("  strongly anisotropic: {obs:?}");
        }
        Decision::Undecided(reason) => println!("  undecided: {reason}"),
    }
    println!();
}

fn main() {
    // A form with a witness: t is a sum of two values of <1, -t^2-1>.
    decide("<1, -t^2 - 1>");
    // The flagship strongly anisotropic form: total indefiniteness holds at
    // every ordering, but both Springer residues at t^2 - 2 are definite
    // over Q(sqrt 2), so the valuation condition fails.
    decide("<1, t, t^2-2, -t*(t^2-2)>");
    // A definite form is blocked already at an ordering.
    decide("<1, 1, t^2 + 1>");
}
