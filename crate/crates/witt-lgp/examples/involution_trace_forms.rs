//! Involution trace forms T_σ(x) = Trd(σ(x)·x): honest Gram computations on
//! explicit bases, perfect-square signatures, weak hyperbolicity, and the
//! decomposable-algebra predicate checks with a pythagorean-index bound.

use witt_lgp::cli::{canon_model, parse_expression, Parsed};
use witt_lgp::fields::value::OrderingPt;
use witt_lgp::lgp::{check_decomposable, pind_upper_certificate};

fn model(text: &str) -> witt_lgp::invol::AlgebraWithInvolution {
    match parse_expression(text).unwrap() {
        Parsed::Model(m) => m,
        _ => panic!("expected a model"),
    }
}

fn main() {
    // Conjugation on Hamilton quaternions: T_γ = <2,2,2,2>, signature 2.
    let m = model("tensor(quat(-1,-1):gamma)");
    let tf = m.trace_form_default().unwrap();
    println!("{}: T_sigma = {tf}", canon_model(&m));
    println!("  sig_P sigma = {}", m.signature_involution(&OrderingPt::QReal).unwrap());

    // An orthogonal involution Int(i)∘γ on the same algebra is weakly
    // hyperbolic: all signatures of its trace form vanish.
    let m = model("tensor(quat(-1,-1):int(i))");
    println!(
        "{}: weakly hyperbolic = {}",
        canon_model(&m),
        m.is_weakly_hyperbolic().unwrap()
    );

    // Split orthogonal: sig_P(ad_q) = |sig_P q|.
    let m = model("ortho(<1, 1, -3>)");
    println!(
        "{}: sig ad_q = {} (|sig q| = 1)",
        canon_model(&m),
        m.signature_involution(&OrderingPt::QReal).unwrap()
    );

    // Tensor products of quaternion algebras with involution: the
    // decomposable predicates (trace weakly isotropic / torsion, sig σ = 0,
    // sig T_σ = 0) must be mutually consistent, and a 2-slot entry bounds
    // the pythagorean index.
    let m = model("tensor(quat(2,3):gamma, quat(5,7):gamma)");
    let report = check_decomposable(&m).unwrap();
    println!("{}: {report:?}", canon_model(&m));
    if let Some(cert) = pind_upper_certificate(&m) {
        println!("  pythagorean index bound {} via {:?}", cert.bound, cert.totally_positive);
    }
}
