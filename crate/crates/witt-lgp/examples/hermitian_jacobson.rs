//! Hermitian forms over a quaternion division algebra (D, γ): the Jacobson
//! trace q_h(x) = h(x, x) is a quadratic form with q_h ≅ ⟨1,−a,−b,ab⟩⊗⟨α_l⟩,
//! and weak isotropy of h is equivalent to weak isotropy of q_h, with the
//! quadratic witness pulled back to quaternion vectors.

use witt_lgp::cli::{canon_model, parse_expression, Parsed};
use witt_lgp::invol::AlgebraWithInvolution;
use witt_lgp::lgp::{bp_involution, Decision, Witness};
use witt_lgp::qforms::SearchBounds;

fn main() {
    let Parsed::Model(m) = parse_expression("herm(quat(-1,-1); 1, -t^2 - 1)").unwrap() else {
        panic!("expected a model");
    };
    let AlgebraWithInvolution::Index2Symplectic(_, h) = &m else {
        panic!("expected a hermitian model");
    };
    println!("model {}", canon_model(&m));
    let qh = h.jacobson_trace();
    println!("Jacobson trace form {qh}");
    assert!(h.jacobson_trace_direct_check());

    match bp_involution(&m, &SearchBounds::default()) {
        Decision::WeaklyIsotropic(Some(Witness::Involution(w))) => {
            assert!(m.verify_witness(&w), "pulled-back witness must verify");
            println!("weakly isotropic with a verified quaternion-vector witness");
        }
        other => println!("decision: {other:?}"),
    }

    // The definite hermitian form <1, t> stays strongly anisotropic.
    let Parsed::Model(m2) = parse_expression("herm(quat(-1,-1); 1, t)").unwrap() else {
        panic!("expected a model");
    };
    match bp_involution(&m2, &SearchBounds::default()) {
        Decision::StronglyAnisotropic(obs) => {
            println!("{} strongly anisotropic: {obs:?}", canon_model(&m2))
        }
        other => println!("unexpected decision {other:?}"),
    }
}
