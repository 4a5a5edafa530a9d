//! Springer residue decomposition q ≅ q1 ⊥ π·q2 at real valuations of ℚ(t),
//! with an explicit congruence transform re-verifying the reconstruction.

use witt_lgp::algebras::relevant_valuations;
use witt_lgp::cli::{parse_expression, Parsed};
use witt_lgp::qforms::{gram_of_diagonal, verify_congruence};

fn main() {
    let Parsed::Form(q) = parse_expression("<1, t, t^2-2, -t*(t^2-2)>").unwrap() else {
        panic!("expected a form");
    };
    println!("form {q}");
    for v in relevant_valuations(&q) {
        let split = q.springer_residues(&v).unwrap();
        println!("at {v}:");
        match &split.res1 {
            Some(r) => println!("  first residue:  {r}"),
            None => println!("  first residue:  (empty)"),
        }
        match &split.res2 {
            Some(r) => println!("  second residue: {r}"),
            None => println!("  second residue: (empty)"),
        }
        let (recon, t) = q.springer_reconstruction(&split);
        let ok = verify_congruence(&gram_of_diagonal(&q), &t, &recon.entries);
        println!("  reconstruction {recon} congruent to the form: {ok}");
        assert!(ok);
    }
}
