//! Signature profiles: the orderings of ℚ(t) are cuts on the real line;
//! the profile is piecewise constant on the intervals between breakpoints
//! of the entries, so finitely many sampled cuts are a complete scan.

use witt_lgp::cli::{parse_expression, Parsed};

fn profile(text: &str) {
    let Parsed::Form(q) = parse_expression(text).unwrap() else {
        panic!("expected a form");
    };
    println!("form {q}");
    for (p, s) in q.all_signatures() {
        println!("  at {p:<16} signature {s}");
    }
    println!(
        "  totally indefinite: {}   torsion: {}",
        q.is_totally_indefinite(),
        q.is_torsion()
    );
    println!();
}

fn main() {
    profile("<1, -t>");
    profile("<1, t, t^2-2, -t*(t^2-2)>");
    // A nonzero torsion class over Q: all signatures vanish but the form
    // is anisotropic over Q (Pfister's local-global principle for torsion).
    profile("<1, 1, -7, -7>");
}
