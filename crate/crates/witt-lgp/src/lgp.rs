//! Local-global decision engines.  A form (or algebra with involution) is
//! weakly isotropic over ℚ(t) exactly when it passes a signature condition
//! at every ordering and a residue condition at every real valuation; both
//! condition families reduce to finite, certifiable checks.  Positive
//! decisions optionally carry explicit witnesses, negative decisions carry
//! a local obstruction that re-verifies from scratch, and anything the
//! implemented criteria cannot settle is reported as Undecided.

use crate::algebras::{relevant_valuations, Quaternion, QuaternionAlgebra, SkewHermitianForm, Trit};
use crate::fields::numberfield::NfElem;
use crate::fields::ratfunc::RealValuation;
use crate::fields::series::{default_precision, hensel_lift_conic, SeriesElement};
use crate::fields::value::{BaseField, OrderingPt, Value};
use crate::invol::{
    pullback_hermitian_witness, AlgebraWithInvolution, InvolutionWitness, QuatInvol,
    DEFAULT_DIM_CAP,
};
use crate::qforms::{witness_search, IsotropyWitness, QuadraticForm, SearchBounds};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub enum Witness {
    Quadratic(IsotropyWitness),
    Involution(InvolutionWitness),
}

#[derive(Clone, Debug)]
pub enum Decision {
    WeaklyIsotropic(Option<Witness>),
    StronglyAnisotropic(LocalObstruction),
    Undecided(String),
}

impl Decision {
    pub fn is_positive(&self) -> bool {
        matches!(self, Decision::WeaklyIsotropic(_))
    }
    pub fn is_negative(&self) -> bool {
        matches!(self, Decision::StronglyAnisotropic(_))
    }
    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Decision::WeaklyIsotropic(w) => w.as_ref(),
            _ => None,
        }
    }
}

/// A failed local condition, carrying enough data for independent
/// re-verification.
#[derive(Clone, Debug)]
pub enum LocalObstruction {
    /// The form is definite at P (quadratic case: |sig_P| = dim), or the
    /// recorded real-closed involution test fails there.
    Ordering {
        p: OrderingPt,
        signature: i64,
        dim: usize,
        detail: String,
    },
    /// Both residue forms at v fail to be weakly isotropic over κ(v); for
    /// each nonempty residue the index of a κ(v)-embedding where it is
    /// definite is recorded (QReal counts as embedding 0 over ℚ).
    Valuation {
        v: RealValuation,
        res1: Option<QuadraticForm>,
        res2: Option<QuadraticForm>,
        definite1: Option<usize>,
        definite2: Option<usize>,
    },
}

impl LocalObstruction {
    /// Re-verify the obstruction against the form from scratch: fresh
    /// signature, or fresh residues compared and re-tested.
    pub fn verify_quadratic(&self, q: &QuadraticForm) -> bool {
        match self {
            LocalObstruction::Ordering { p, signature, dim, .. } => {
                let s = q.signature(p);
                s == *signature && s.unsigned_abs() as usize == *dim && *dim == q.dim()
            }
            LocalObstruction::Valuation {
                v,
                res1,
                res2,
                definite1,
                definite2,
            } => {
                let split = match q.springer_residues(v) {
                    Ok(s) => s,
                    Err(_) => return false,
                };
                let same = |a: &Option<QuadraticForm>, b: &Option<QuadraticForm>| match (a, b) {
                    (None, None) => true,
                    (Some(x), Some(y)) => x.entries == y.entries,
                    _ => false,
                };
                if !same(&split.res1, res1) || !same(&split.res2, res2) {
                    return false;
                }
                check_definite(&split.res1, *definite1) && check_definite(&split.res2, *definite2)
            }
        }
    }
}

/// An empty residue is vacuously fine; a nonempty one must be definite at
/// the recorded embedding.
fn check_definite(r: &Option<QuadraticForm>, at: Option<usize>) -> bool {
    match (r, at) {
        (None, None) => true,
        (Some(q), Some(i)) => {
            let p = embedding_pt(&q.field, i);
            q.signature(&p).unsigned_abs() as usize == q.dim()
        }
        _ => false,
    }
}

fn embedding_pt(field: &BaseField, i: usize) -> OrderingPt {
    match field {
        BaseField::Q => OrderingPt::QReal,
        BaseField::Nf(_) => OrderingPt::Embedding(i),
        BaseField::FunQ => unreachable!("residue fields are number fields"),
    }
}

/// First embedding of the residue field at which q is definite, if any.
fn definite_embedding(q: &QuadraticForm) -> Option<usize> {
    let count = match &q.field {
        BaseField::Q => 1,
        BaseField::Nf(nf) => nf.embeddings.len(),
        BaseField::FunQ => return None,
    };
    (0..count).find(|&i| {
        q.signature(&embedding_pt(&q.field, i)).unsigned_abs() as usize == q.dim()
    })
}

// ---------------------------------------------------------------------------
// Quadratic engines

/// Weak isotropy over ℚ(t): the signature condition at every ordering
/// (sampled completely between breakpoints) plus the residue condition at
/// the finite set of relevant real valuations.  Outside that set the
/// second residue is empty and strong anisotropy of the first residue
/// over κ(v) would force definiteness at an adjacent cut, which the
/// ordering scan already detects; so the finite set is complete.
pub fn bp_quadratic(q: &QuadraticForm, bounds: &SearchBounds) -> Decision {
    assert!(matches!(q.field, BaseField::FunQ));
    // orderings, scanned left to right
    let profile = q.signature_profile();
    for (cut, s) in &profile.samples {
        if s.unsigned_abs() as usize == q.dim() {
            return Decision::StronglyAnisotropic(LocalObstruction::Ordering {
                p: OrderingPt::FunCut(cut.clone()),
                signature: *s,
                dim: q.dim(),
                detail: "definite at this cut".to_string(),
            });
        }
    }
    if q.dim() < 2 {
        // totally indefinite is impossible in dimension 1; handled above
        unreachable!("dimension-1 forms are definite somewhere");
    }
    // relevant real valuations, in entry order
    for v in relevant_valuations(q) {
        let split = match q.springer_residues(&v) {
            Ok(s) => s,
            Err(e) => return Decision::Undecided(format!("residue-field: {e}")),
        };
        let wi1 = residue_weakly_isotropic(&split.res1);
        let wi2 = residue_weakly_isotropic(&split.res2);
        if !wi1 && !wi2 {
            return Decision::StronglyAnisotropic(LocalObstruction::Valuation {
                v: v.clone(),
                definite1: split.res1.as_ref().and_then(definite_embedding),
                definite2: split.res2.as_ref().and_then(definite_embedding),
                res1: split.res1,
                res2: split.res2,
            });
        }
    }
    let w = witness_search(q, bounds).map(Witness::Quadratic);
    Decision::WeaklyIsotropic(w)
}

fn residue_weakly_isotropic(r: &Option<QuadraticForm>) -> bool {
    match r {
        None => false,
        Some(q) => q.weakly_isotropic_number_field(),
    }
}

/// Weak isotropy over ℚ or a real number field: these fields have no
/// nontrivial real valuations, so only the ordering condition remains,
/// and weak isotropy is equivalent to total indefiniteness.
pub fn prestel_sap_quadratic(q: &QuadraticForm, bounds: &SearchBounds) -> Decision {
    assert!(!matches!(q.field, BaseField::FunQ));
    for (p, s) in q.all_signatures() {
        if s.unsigned_abs() as usize == q.dim() {
            return Decision::StronglyAnisotropic(LocalObstruction::Ordering {
                p,
                signature: s,
                dim: q.dim(),
                detail: "definite at this ordering".to_string(),
            });
        }
    }
    let w = witness_search(q, bounds).map(Witness::Quadratic);
    Decision::WeaklyIsotropic(w)
}

/// Entry re-ordering available over single-ordering fields: all negative
/// entries before all positive ones.
pub fn effectively_diagonalize(q: &QuadraticForm) -> Result<QuadraticForm> {
    let p = single_ordering(&q.field)?;
    let mut neg = vec![];
    let mut pos = vec![];
    for e in &q.entries {
        if e.sign_at(&p) < 0 {
            neg.push(e.clone());
        } else {
            pos.push(e.clone());
        }
    }
    neg.extend(pos);
    QuadraticForm::diagonal(neg)
}

fn single_ordering(field: &BaseField) -> Result<OrderingPt> {
    match field {
        BaseField::Q => Ok(OrderingPt::QReal),
        BaseField::Nf(nf) => {
            if nf.embeddings.len() == 1 {
                Ok(OrderingPt::Embedding(0))
            } else {
                Err(Error::MultipleOrderings(nf.embeddings.len()))
            }
        }
        BaseField::FunQ => Err(Error::MultipleOrderings(usize::MAX)),
    }
}

// ---------------------------------------------------------------------------
// Involution dispatcher

/// Weak isotropy for an algebra with involution of the first kind, index
/// at most 2, over ℚ, a real number field, or ℚ(t).
pub fn bp_involution(a: &AlgebraWithInvolution, bounds: &SearchBounds) -> Decision {
    use AlgebraWithInvolution as M;
    match a {
        M::SplitSymplectic(_) => {
            // adjoint to an alternating form, hence hyperbolic
            Decision::WeaklyIsotropic(Some(Witness::Involution(InvolutionWitness::Trivial)))
        }
        M::SplitOrthogonal(q) => {
            let d = match q.field {
                BaseField::FunQ => bp_quadratic(q, bounds),
                _ => prestel_sap_quadratic(q, bounds),
            };
            lift_quadratic_decision(d)
        }
        M::Index2Symplectic(_, h) => {
            let qh = h.jacobson_trace();
            let d = match qh.field {
                BaseField::FunQ => bp_quadratic(&qh, bounds),
                _ => prestel_sap_quadratic(&qh, bounds),
            };
            match d {
                Decision::WeaklyIsotropic(w) => {
                    let pulled = match w {
                        Some(Witness::Quadratic(iw)) => {
                            Some(Witness::Involution(pullback_hermitian_witness(h, &iw)))
                        }
                        _ => None,
                    };
                    Decision::WeaklyIsotropic(pulled)
                }
                Decision::StronglyAnisotropic(o) => Decision::StronglyAnisotropic(o),
                Decision::Undecided(t) => Decision::Undecided(t),
            }
        }
        M::Index2Orthogonal(d, h) => bp_index2_orthogonal(d, h, bounds),
        M::QuatTensor { .. } => {
            Decision::Undecided("tensor models are routed through the decomposable checker".into())
        }
    }
}

fn lift_quadratic_decision(d: Decision) -> Decision {
    match d {
        Decision::WeaklyIsotropic(Some(Witness::Quadratic(iw))) => Decision::WeaklyIsotropic(
            Some(Witness::Involution(InvolutionWitness::Vectors(iw.vectors))),
        ),
        other => other,
    }
}

fn bp_index2_orthogonal(
    d: &QuaternionAlgebra,
    h: &SkewHermitianForm,
    bounds: &SearchBounds,
) -> Decision {
    let n = h.dim();
    // probe form whose breakpoints cover every sign change of a, b and
    // the entry norms
    let mut probe_entries = vec![d.a.clone(), d.b.clone()];
    for e in &h.entries {
        probe_entries.push(e.norm());
    }
    let probe = match QuadraticForm::diagonal(probe_entries) {
        Ok(p) => p,
        Err(_) => return Decision::Undecided("degenerate entry norm".into()),
    };
    // ordering condition
    for p in probe.sampled_orderings() {
        if d.ordering_admissible(&p) {
            if !crate::algebras::skew_isotropy_real_closed(n) {
                return Decision::StronglyAnisotropic(LocalObstruction::Ordering {
                    p,
                    signature: n as i64,
                    dim: n,
                    detail: "rank 1 over the real closure where D stays division".to_string(),
                });
            }
        } else {
            // split side: weakly isotropic at P iff sig_P σ < deg A
            let model = AlgebraWithInvolution::Index2Orthogonal(d.clone(), h.clone());
            let sig = match model.signature_involution(&p) {
                Ok(s) => s,
                Err(Error::DimensionCap(a, b)) => {
                    return Decision::Undecided(format!("dimension cap {a} > {b}"))
                }
                Err(e) => return Decision::Undecided(format!("{e}")),
            };
            if sig as usize >= 2 * n {
                return Decision::StronglyAnisotropic(LocalObstruction::Ordering {
                    p,
                    signature: sig as i64,
                    dim: 2 * n,
                    detail: "involution signature equals the degree".to_string(),
                });
            }
        }
    }
    // valuation condition (only over ℚ(t))
    if matches!(d.field, BaseField::FunQ) {
        for v in relevant_valuations(&probe) {
            match d.valuation_admissible(&v) {
                Trit::Yes => return Decision::Undecided("larmour-out-of-scope".to_string()),
                Trit::Undecided(t) => return Decision::Undecided(t),
                Trit::No => match morita_condition(d, h, &v) {
                    Ok(true) => {}
                    Ok(false) => {
                        let (r1, r2) = match morita_residues(d, h, &v) {
                            Ok(r) => r,
                            Err(e) => return Decision::Undecided(format!("{e}")),
                        };
                        return Decision::StronglyAnisotropic(LocalObstruction::Valuation {
                            v,
                            definite1: r1.as_ref().and_then(definite_embedding),
                            definite2: r2.as_ref().and_then(definite_embedding),
                            res1: r1,
                            res2: r2,
                        });
                    }
                    Err(e) => return Decision::Undecided(format!("{e}")),
                },
            }
        }
    }
    let w = crate::algebras::skew_witness_search(h, bounds.max_copies)
        .map(|xs| Witness::Involution(InvolutionWitness::QuatVectors(xs)));
    Decision::WeaklyIsotropic(w)
}

// ---------------------------------------------------------------------------
// Morita transfer at valuations where D splits over the henselization

/// Quaternions with truncated-series coordinates.
#[derive(Clone)]
struct SQuat {
    a: SeriesElement,
    b: SeriesElement,
    c: [SeriesElement; 4],
}

impl SQuat {
    fn mul(&self, o: &SQuat) -> SQuat {
        let a = &self.a;
        let b = &self.b;
        let ab = a.mul(b);
        let (x0, x1, x2, x3) = (&self.c[0], &self.c[1], &self.c[2], &self.c[3]);
        let (y0, y1, y2, y3) = (&o.c[0], &o.c[1], &o.c[2], &o.c[3]);
        let z0 = x0
            .mul(y0)
            .add(&a.mul(&x1.mul(y1)))
            .add(&b.mul(&x2.mul(y2)))
            .sub(&ab.mul(&x3.mul(y3)));
        let z1 = x0
            .mul(y1)
            .add(&x1.mul(y0))
            .sub(&b.mul(&x2.mul(y3)))
            .add(&b.mul(&x3.mul(y2)));
        let z2 = x0
            .mul(y2)
            .add(&x2.mul(y0))
            .add(&a.mul(&x1.mul(y3)))
            .sub(&a.mul(&x3.mul(y1)));
        let z3 = x0.mul(y3).add(&x3.mul(y0)).add(&x1.mul(y2)).sub(&x2.mul(y1));
        SQuat {
            a: a.clone(),
            b: b.clone(),
            c: [z0, z1, z2, z3],
        }
    }

    fn sub(&self, o: &SQuat) -> SQuat {
        SQuat {
            a: self.a.clone(),
            b: self.b.clone(),
            c: [
                self.c[0].sub(&o.c[0]),
                self.c[1].sub(&o.c[1]),
                self.c[2].sub(&o.c[2]),
                self.c[3].sub(&o.c[3]),
            ],
        }
    }

    fn scale(&self, s: &SeriesElement) -> SQuat {
        SQuat {
            a: self.a.clone(),
            b: self.b.clone(),
            c: [
                self.c[0].mul(s),
                self.c[1].mul(s),
                self.c[2].mul(s),
                self.c[3].mul(s),
            ],
        }
    }

    fn trd(&self) -> SeriesElement {
        self.c[0].add(&self.c[0])
    }
}

/// True iff the skew-hermitian form is weakly isotropic over the
/// henselization at v, given that D splits there: transfer to a
/// 2n-dimensional quadratic form over the series field and test its
/// residue forms over κ(v).
fn morita_condition(
    d: &QuaternionAlgebra,
    h: &SkewHermitianForm,
    v: &RealValuation,
) -> Result<bool> {
    let (r1, r2) = morita_residues(d, h, v)?;
    let wi = |r: &Option<QuadraticForm>| r.as_ref().is_some_and(|q| q.weakly_isotropic_number_field());
    Ok(wi(&r1) || wi(&r2))
}

/// Residue forms over κ(v) of the Morita-transferred quadratic form,
/// split by valuation parity, retrying with doubled precision when the
/// working precision is exhausted.
fn morita_residues(
    d: &QuaternionAlgebra,
    h: &SkewHermitianForm,
    v: &RealValuation,
) -> Result<(Option<QuadraticForm>, Option<QuadraticForm>)> {
    let mut maxval = 0i64;
    let fa = d.a.as_fun().unwrap();
    let fb = d.b.as_fun().unwrap();
    for f in [&fa, &fb] {
        maxval = maxval.max(f.valuation(v).abs());
    }
    for e in &h.entries {
        for c in &e.c {
            if let Some(f) = c.as_fun() {
                if !f.is_zero() {
                    maxval = maxval.max(f.valuation(v).abs());
                }
            }
        }
    }
    let mut prec = default_precision(maxval);
    loop {
        match morita_residues_at(d, h, v, prec) {
            Ok(r) => return Ok(r),
            Err(Error::PrecisionExhausted(_)) if prec < 256 => prec *= 2,
            Err(e) => return Err(e),
        }
    }
}

fn morita_residues_at(
    d: &QuaternionAlgebra,
    h: &SkewHermitianForm,
    v: &RealValuation,
    prec: i64,
) -> Result<(Option<QuadraticForm>, Option<QuadraticForm>)> {
    let kappa = v.residue_field();
    let fa = d.a.as_fun().unwrap();
    let fb = d.b.as_fun().unwrap();
    let sa = SeriesElement::from_ratfunc(&fa, v, prec)?;
    let sb = SeriesElement::from_ratfunc(&fb, v, prec)?;
    let quat = |c: [SeriesElement; 4]| SQuat {
        a: sa.clone(),
        b: sb.clone(),
        c,
    };
    let sconst = |x: &SeriesElement| -> Result<SQuat> {
        let z = SeriesElement::zero(&kappa, prec);
        Ok(quat([x.clone(), z.clone(), z.clone(), z]))
    };
    let from_fun = |q: &Quaternion| -> Result<SQuat> {
        let mut c = vec![];
        for x in &q.c {
            c.push(SeriesElement::from_ratfunc(&x.as_fun().unwrap(), v, prec)?);
        }
        Ok(quat([c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone()]))
    };

    // explicit zero divisor from a conic point
    let sol = hensel_lift_conic(&fa, &fb, v, prec)?
        .ok_or_else(|| Error::Verification("split certificate disagrees with conic".into()))?;
    let [x, y, z] = sol;
    let zero = SeriesElement::zero(&kappa, prec);
    let mut u = quat([x, y, z, zero.clone()]);
    // make the reduced trace invertible: one of u, iu, ju works
    if u.trd().is_zero_to_prec() {
        let one = SeriesElement::constant(&kappa, kappa.one(), prec);
        let i = quat([zero.clone(), one.clone(), zero.clone(), zero.clone()]);
        let ui = i.mul(&u);
        if !ui.trd().is_zero_to_prec() {
            u = ui;
        } else {
            let j = quat([zero.clone(), zero.clone(), one.clone(), zero.clone()]);
            u = j.mul(&u);
        }
    }
    let tr = u.trd();
    if tr.is_zero_to_prec() {
        return Err(Error::PrecisionExhausted(prec));
    }
    // rank-1 idempotent and matrix units
    let e11 = u.scale(&tr.inv()?);
    let one = SeriesElement::constant(&kappa, kappa.one(), prec);
    let e22 = sconst(&one)?.sub(&e11);
    let gens = {
        let i = quat([zero.clone(), one.clone(), zero.clone(), zero.clone()]);
        let j = quat([zero.clone(), zero.clone(), one.clone(), zero.clone()]);
        let k = quat([zero.clone(), zero.clone(), zero.clone(), one.clone()]);
        [i, j, k]
    };
    let mut e12 = None;
    for g in &gens {
        let cand = e11.mul(g).mul(&e22);
        if !cand.trd().is_zero_to_prec() || cand.c.iter().any(|c| !c.is_zero_to_prec()) {
            e12 = Some(cand);
            break;
        }
    }
    let e12 = e12.ok_or(Error::PrecisionExhausted(prec))?;
    let mut e21 = None;
    for g in &gens {
        let cand = e22.mul(g).mul(&e11);
        // e12·e21 = λ·e11 with λ = trd(e12·e21)
        let lam = e12.mul(&cand).trd();
        if !lam.is_zero_to_prec() {
            e21 = Some(cand.scale(&lam.inv()?));
            break;
        }
    }
    let e21 = e21.ok_or(Error::PrecisionExhausted(prec))?;

    // coordinates of x in the matrix-unit basis: x_rs = trd(E_sr · x)
    let coord = |q: &SQuat, r: usize, s: usize| -> SeriesElement {
        let esr = match (r, s) {
            (0, 0) => &e11,
            (1, 1) => &e22,
            (0, 1) => &e21,
            _ => &e12,
        };
        esr.mul(q).trd()
    };

    // transferred symmetric Gram: per diagonal entry S = ψ(d_l), the slot
    // contributes the 2×2 block [[S21, S22], [−S11, −S12]]
    let mut diag_entries: Vec<SeriesElement> = vec![];
    for dl in &h.entries {
        let s = from_fun(dl)?;
        let s11 = coord(&s, 0, 0);
        let s12 = coord(&s, 0, 1);
        let s21 = coord(&s, 1, 0);
        let s22 = coord(&s, 1, 1);
        let m = [[s21, s22.clone()], [s11.neg(), s12.neg()]];
        diag_entries.extend(diagonalize_2x2(&m, &kappa, prec)?);
    }

    // split residues by valuation parity
    let mut even: Vec<NfElem> = vec![];
    let mut odd: Vec<NfElem> = vec![];
    for e in &diag_entries {
        let val = e.valuation().ok_or(Error::PrecisionExhausted(prec))?;
        let lead = e.leading().unwrap().clone();
        if val.rem_euclid(2) == 0 {
            even.push(lead);
        } else {
            odd.push(lead);
        }
    }
    let make = |v: Vec<NfElem>| -> Result<Option<QuadraticForm>> {
        if v.is_empty() {
            return Ok(None);
        }
        let entries = v
            .into_iter()
            .map(|x| {
                if kappa.degree() == 1 {
                    Value::Rat(x.as_rat().unwrap())
                } else {
                    Value::Nf(x)
                }
            })
            .collect();
        Ok(Some(QuadraticForm::diagonal(entries)?))
    };
    Ok((make(even)?, make(odd)?))
}

/// Diagonalize a symmetric 2×2 matrix over the series field: find a
/// vector with nonzero value, pair it with det/pivot.
fn diagonalize_2x2(
    m: &[[SeriesElement; 2]; 2],
    kappa: &std::rc::Rc<crate::fields::numberfield::NumberField>,
    prec: i64,
) -> Result<Vec<SeriesElement>> {
    let q = |c1: i64, c2: i64| -> SeriesElement {
        let c1 = SeriesElement::constant(kappa, kappa.from_rat(crate::fields::rat::rat(c1)), prec);
        let c2 = SeriesElement::constant(kappa, kappa.from_rat(crate::fields::rat::rat(c2)), prec);
        let v = [c1, c2];
        let mut acc = SeriesElement::zero(kappa, prec);
        for r in 0..2 {
            for s in 0..2 {
                acc = acc.add(&m[r][s].mul(&v[r]).mul(&v[s]));
            }
        }
        acc
    };
    let det = m[0][0]
        .mul(&m[1][1])
        .sub(&m[0][1].mul(&m[1][0]));
    for (c1, c2) in [(1, 0), (0, 1), (1, 1), (1, -1)] {
        let pivot = q(c1, c2);
        if !pivot.is_zero_to_prec() {
            if det.is_zero_to_prec() {
                return Err(Error::PrecisionExhausted(prec));
            }
            return Ok(vec![pivot.clone(), det.div(&pivot)?]);
        }
    }
    Err(Error::PrecisionExhausted(prec))
}

// ---------------------------------------------------------------------------
// Decomposable models, pythagorean index, single-ordering routes

/// Consistency report for a tensor-product model: the computable
/// equivalent predicates, the derived top-level answer, and an optional
/// witness for the trace form.
#[derive(Clone, Debug)]
pub struct DecomposableReport {
    pub trace_weakly_isotropic: Option<bool>,
    pub trace_torsion: bool,
    pub sig_involution_zero: Option<bool>,
    pub trace_sig_zero: bool,
    pub consistent: bool,
    pub derived: Decision,
}

pub fn check_decomposable(a: &AlgebraWithInvolution) -> Result<DecomposableReport> {
    let factors = match a {
        AlgebraWithInvolution::QuatTensor { factors, .. } => factors,
        _ => return Err(Error::Unsupported("decomposable checker needs a tensor model".into())),
    };
    // matrix size does not affect any of the predicates; work with s = 1
    let one = AlgebraWithInvolution::QuatTensor {
        factors: factors.clone(),
        s: 1,
    };
    let t = one.trace_form(DEFAULT_DIM_CAP)?;
    let trace_torsion = t.is_torsion();
    let trace_sig_zero = t.all_signatures().iter().all(|(_, s)| *s == 0);
    let sig_involution_zero = {
        let mut all_zero = Some(true);
        for (p, _) in t.all_signatures() {
            match one.signature_involution(&p) {
                Ok(s) => {
                    if s != 0 {
                        all_zero = Some(false);
                        break;
                    }
                }
                Err(_) => {
                    all_zero = None;
                    break;
                }
            }
        }
        all_zero
    };
    let bounds = SearchBounds::default();
    let trace_decision = match t.field {
        BaseField::FunQ => bp_quadratic(&t, &bounds),
        _ => prestel_sap_quadratic(&t, &bounds),
    };
    let trace_weakly_isotropic = match &trace_decision {
        Decision::WeaklyIsotropic(_) => Some(true),
        Decision::StronglyAnisotropic(_) => Some(false),
        Decision::Undecided(_) => None,
    };
    let mut consistent = trace_torsion == trace_sig_zero;
    if let Some(wi) = trace_weakly_isotropic {
        consistent = consistent && wi == trace_torsion;
    }
    if let Some(sz) = sig_involution_zero {
        consistent = consistent && sz == trace_sig_zero;
    }
    let derived = if trace_sig_zero {
        let w = match &trace_decision {
            Decision::WeaklyIsotropic(w) => w.clone(),
            _ => None,
        };
        Decision::WeaklyIsotropic(w)
    } else {
        // pick the first ordering with nonzero involution signature
        let (p, s) = t
            .all_signatures()
            .into_iter()
            .find(|(_, s)| *s != 0)
            .unwrap();
        Decision::StronglyAnisotropic(LocalObstruction::Ordering {
            p,
            signature: s,
            dim: t.dim(),
            detail: "nonzero involution signature".to_string(),
        })
    };
    Ok(DecomposableReport {
        trace_weakly_isotropic,
        trace_torsion,
        sig_involution_zero,
        trace_sig_zero,
        consistent,
        derived,
    })
}

/// Upper bound on the pythagorean index with its certificate.
#[derive(Clone, Debug)]
pub struct PindCertificate {
    pub bound: usize,
    /// A totally positive slot entry that splits or merges a factor over
    /// the pythagorean closure (None when r ≤ 1, where the bound is
    /// structural).
    pub totally_positive: Option<(usize, Value)>,
}

pub fn pind_upper_certificate(a: &AlgebraWithInvolution) -> Option<PindCertificate> {
    let factors = match a {
        AlgebraWithInvolution::QuatTensor { factors, .. } => factors,
        _ => return None,
    };
    match factors.len() {
        0 => Some(PindCertificate {
            bound: 1,
            totally_positive: None,
        }),
        1 => Some(PindCertificate {
            bound: 2,
            totally_positive: None,
        }),
        2 => {
            for (i, (alg, _)) in factors.iter().enumerate() {
                for cand in [alg.a.clone(), alg.b.clone(), alg.a.mul(&alg.b)] {
                    if value_totally_positive(&cand) {
                        return Some(PindCertificate {
                            bound: 2,
                            totally_positive: Some((i, cand)),
                        });
                    }
                }
            }
            None
        }
        _ => None,
    }
}

fn value_totally_positive(v: &Value) -> bool {
    match v {
        Value::Rat(r) => crate::fields::rat::sign_rat(r) > 0,
        Value::Nf(x) => x.is_totally_positive(),
        Value::Fun(f) => f.is_totally_positive(),
    }
}

/// Decide a rank-2 tensor model by passing to the pythagorean closure,
/// where the certified totally positive entry becomes a square; the
/// answer transfers back unchanged.
pub fn decide_via_pind(a: &AlgebraWithInvolution) -> Result<Decision> {
    let cert = pind_upper_certificate(a)
        .ok_or_else(|| Error::Unsupported("no pythagorean-index certificate".into()))?;
    let factors = match a {
        AlgebraWithInvolution::QuatTensor { factors, .. } => factors.clone(),
        _ => unreachable!("certificate implies a tensor model"),
    };
    let substituted: Vec<(QuaternionAlgebra, QuatInvol)> = match &cert.totally_positive {
        None => factors,
        Some((i, tp)) => factors
            .iter()
            .enumerate()
            .map(|(l, (alg, invol))| {
                if l != *i {
                    return (alg.clone(), invol.clone());
                }
                let one = Value::one_of(&alg.field);
                let alg2 = if alg.a == *tp {
                    QuaternionAlgebra::new(one, alg.b.clone()).unwrap()
                } else if alg.b == *tp {
                    QuaternionAlgebra::new(alg.a.clone(), one).unwrap()
                } else {
                    // ab totally positive: b ≡ a mod squares over the
                    // closure, and (a, a) ≅ (a, −1)
                    QuaternionAlgebra::new(alg.a.clone(), one.neg()).unwrap()
                };
                (alg2, invol.clone())
            })
            .collect(),
    };
    let model = AlgebraWithInvolution::QuatTensor {
        factors: substituted,
        s: 1,
    };
    Ok(check_decomposable(&model)?.derived)
}

/// Decision over a SAP base field (ℚ or a real number field): only the
/// ordering condition exists.
pub fn sap_decide(a: &AlgebraWithInvolution, bounds: &SearchBounds) -> Result<Decision> {
    use AlgebraWithInvolution as M;
    match a.base_field() {
        BaseField::FunQ => return Err(Error::Unsupported("sap route needs a SAP base field".into())),
        BaseField::Q | BaseField::Nf(_) => {}
    }
    Ok(match a {
        M::SplitSymplectic(_) => {
            Decision::WeaklyIsotropic(Some(Witness::Involution(InvolutionWitness::Trivial)))
        }
        M::SplitOrthogonal(q) => lift_quadratic_decision(prestel_sap_quadratic(q, bounds)),
        M::Index2Symplectic(..) => bp_involution(a, bounds),
        M::Index2Orthogonal(d, h) => {
            let n = h.dim();
            let probe = QuadraticForm::diagonal(vec![d.a.clone(), d.b.clone()])?;
            for p in probe.sampled_orderings() {
                if d.ordering_admissible(&p) {
                    if n < 2 {
                        return Ok(Decision::StronglyAnisotropic(LocalObstruction::Ordering {
                            p,
                            signature: 1,
                            dim: 1,
                            detail: "rank 1 over the real closure where D stays division"
                                .to_string(),
                        }));
                    }
                } else {
                    let model = M::Index2Orthogonal(d.clone(), h.clone());
                    let sig = model.signature_involution(&p)?;
                    if sig as usize >= 2 * n {
                        return Ok(Decision::StronglyAnisotropic(LocalObstruction::Ordering {
                            p,
                            signature: sig as i64,
                            dim: 2 * n,
                            detail: "involution signature equals the degree".to_string(),
                        }));
                    }
                }
            }
            let w = crate::algebras::skew_witness_search(h, bounds.max_copies)
                .map(|xs| Witness::Involution(InvolutionWitness::QuatVectors(xs)));
            Decision::WeaklyIsotropic(w)
        }
        M::QuatTensor { .. } => check_decomposable(a)?.derived,
    })
}

/// Decision over a field with exactly one ordering; must agree with the
/// SAP route, and errors on fields with several orderings.
pub fn ed_decide(a: &AlgebraWithInvolution, bounds: &SearchBounds) -> Result<Decision> {
    single_ordering(&a.base_field())?;
    sap_decide(a, bounds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebras::HermitianForm;
    use crate::fields::ratfunc::RatFunc;
    use crate::fields::poly::QPoly;
    use crate::fields::rat::rat;

    fn fun(n: i64) -> Value {
        Value::Fun(RatFunc::constant(rat(n)))
    }

    fn t() -> Value {
        Value::Fun(RatFunc::var())
    }

    fn fun_form(vals: Vec<Value>) -> QuadraticForm {
        QuadraticForm::diagonal(vals).unwrap()
    }

    #[test]
    fn bp_easy_cases() {
        let b = SearchBounds::default();
        let q = fun_form(vec![fun(1), fun(-1)]);
        match bp_quadratic(&q, &b) {
            Decision::WeaklyIsotropic(Some(Witness::Quadratic(w))) => assert!(w.verify(&q)),
            other => panic!("expected witness, got {other:?}"),
        }

        // <1, 1, t>: definite for t > 0
        let q = fun_form(vec![fun(1), fun(1), t()]);
        match bp_quadratic(&q, &b) {
            Decision::StronglyAnisotropic(o @ LocalObstruction::Ordering { .. }) => {
                assert!(o.verify_quadratic(&q));
            }
            other => panic!("expected ordering obstruction, got {other:?}"),
        }
    }

    #[test]
    fn bp_flagship_valuation_obstruction() {
        let b = SearchBounds::default();
        // <1, t, t²−2, −t(t²−2)>: totally indefinite but obstructed at
        // Finite(t²−2)
        let t2m2 = RatFunc::from_poly(QPoly::from_ints(&[-2, 0, 1]));
        let q = fun_form(vec![
            fun(1),
            t(),
            Value::Fun(t2m2.clone()),
            Value::Fun(t2m2.mul(&RatFunc::var()).neg()),
        ]);
        assert!(q.is_totally_indefinite());
        match bp_quadratic(&q, &b) {
            Decision::StronglyAnisotropic(o @ LocalObstruction::Valuation { .. }) => {
                if let LocalObstruction::Valuation { v, res1, res2, .. } = &o {
                    assert_eq!(*v, RealValuation::finite(QPoly::from_ints(&[-2, 0, 1])));
                    assert_eq!(res1.as_ref().unwrap().dim(), 2);
                    assert_eq!(res2.as_ref().unwrap().dim(), 2);
                }
                assert!(o.verify_quadratic(&q));
            }
            other => panic!("expected valuation obstruction, got {other:?}"),
        }
    }

    #[test]
    fn sap_routes_over_q() {
        let b = SearchBounds::default();
        let q = QuadraticForm::from_ints(&[1, -2]);
        assert!(prestel_sap_quadratic(&q, &b).is_positive());
        let q = QuadraticForm::from_ints(&[1, 2]);
        assert!(prestel_sap_quadratic(&q, &b).is_negative());
    }

    #[test]
    fn effective_diagonalization() {
        let q = QuadraticForm::from_ints(&[3, -2, 5]);
        let d = effectively_diagonalize(&q).unwrap();
        assert_eq!(d, QuadraticForm::from_ints(&[-2, 3, 5]));
        let nf = crate::fields::numberfield::NumberField::new(QPoly::from_ints(&[-2, 0, 1]))
            .unwrap();
        let q2 = QuadraticForm::diagonal(vec![
            Value::Nf(nf.one()),
            Value::Nf(crate::fields::poly::Coeff::neg(&nf.one())),
        ])
        .unwrap();
        assert!(matches!(
            effectively_diagonalize(&q2),
            Err(Error::MultipleOrderings(2))
        ));
    }

    #[test]
    fn involution_dispatcher_split_cases() {
        let b = SearchBounds::default();
        assert!(bp_involution(&AlgebraWithInvolution::SplitSymplectic(3), &b).is_positive());
        let m = AlgebraWithInvolution::SplitOrthogonal(QuadraticForm::from_ints(&[1, -2]));
        let d = bp_involution(&m, &b);
        assert!(d.is_positive());
        if let Some(Witness::Involution(w)) = d.witness() {
            assert!(m.verify_witness(w));
        } else {
            panic!("expected a pulled-back witness");
        }
    }

    #[test]
    fn involution_hermitian_route() {
        let b = SearchBounds::default();
        // h = <1, t> over (−1,−1): q_h definite at cuts with t > 0
        let alg = QuaternionAlgebra::new(fun(-1), fun(-1)).unwrap();
        let h = HermitianForm::new(alg.clone(), vec![fun(1), t()]).unwrap();
        let m = AlgebraWithInvolution::Index2Symplectic(alg.clone(), h);
        assert!(bp_involution(&m, &b).is_negative());

        // h = <1, −t²−1>: totally indefinite Jacobson form, witness pulls back
        let talg = QuaternionAlgebra::new(fun(-1), fun(-1)).unwrap();
        let ent = Value::Fun(
            RatFunc::var()
                .mul(&RatFunc::var())
                .add(&RatFunc::one())
                .neg(),
        );
        let h = HermitianForm::new(talg.clone(), vec![fun(1), ent]).unwrap();
        let m = AlgebraWithInvolution::Index2Symplectic(talg, h);
        let d = bp_involution(&m, &b);
        assert!(d.is_positive());
        if let Some(Witness::Involution(w)) = d.witness() {
            assert!(m.verify_witness(w));
        }
    }

    #[test]
    fn involution_skew_route_over_q() {
        let b = SearchBounds::default();
        let alg = QuaternionAlgebra::from_ints(-1, -1);
        let [_, i, j, _] = alg.basis();
        let m = AlgebraWithInvolution::Index2Orthogonal(
            alg.clone(),
            SkewHermitianForm::new(alg.clone(), vec![i.clone(), j]).unwrap(),
        );
        let d = sap_decide(&m, &b).unwrap();
        assert!(d.is_positive());
        if let Some(Witness::Involution(w)) = d.witness() {
            assert!(m.verify_witness(w));
        }
        // rank 1 at an admissible ordering: anisotropic
        let m1 = AlgebraWithInvolution::Index2Orthogonal(
            alg.clone(),
            SkewHermitianForm::new(alg, vec![i]).unwrap(),
        );
        assert!(sap_decide(&m1, &b).unwrap().is_negative());
    }

    #[test]
    fn morita_route_at_split_valuation() {
        let b = SearchBounds::default();
        // D = (1+t²·0… use (2+t, −1): admissibility fails at Finite(t)?
        // choose D = (t²+2−2 …) — simplest: D = (2, 3) constants over
        // ℚ(t): split at every real valuation (hilbert symbols at the
        // real place are +1, residue conic solvable)
        let alg = QuaternionAlgebra::new(fun(2), t()).unwrap();
        // skew entry i·t + j: pure, nonzero
        let [_, i, j, _] = alg.basis();
        let e1 = Quaternion::new(&alg, [fun(0), t(), fun(1), fun(0)]);
        let h = SkewHermitianForm::new(alg.clone(), vec![e1, i.mul(&j)]).unwrap();
        let m = AlgebraWithInvolution::Index2Orthogonal(alg, h);
        // decision should come out decisive or a structured Undecided,
        // never a panic
        let _ = bp_involution(&m, &b);
    }

    #[test]
    fn decomposable_and_pind() {
        let alg = QuaternionAlgebra::from_ints(-1, -1);
        let [_, i, _, _] = alg.basis();
        let m = AlgebraWithInvolution::QuatTensor {
            factors: vec![(alg.clone(), QuatInvol::IntGamma(i))],
            s: 1,
        };
        let rep = check_decomposable(&m).unwrap();
        assert!(rep.consistent);
        assert!(rep.trace_sig_zero);
        assert!(rep.derived.is_positive());

        let m2 = AlgebraWithInvolution::QuatTensor {
            factors: vec![
                (alg.clone(), QuatInvol::Gamma),
                (alg.clone(), QuatInvol::Gamma),
            ],
            s: 1,
        };
        let rep2 = check_decomposable(&m2).unwrap();
        assert!(rep2.consistent);
        assert!(!rep2.trace_sig_zero);
        assert!(rep2.derived.is_negative());

        // pind certificates
        let mt = AlgebraWithInvolution::QuatTensor {
            factors: vec![
                (QuaternionAlgebra::from_ints(2, 3), QuatInvol::Gamma),
                (QuaternionAlgebra::from_ints(5, 7), QuatInvol::Gamma),
            ],
            s: 1,
        };
        let cert = pind_upper_certificate(&mt).unwrap();
        assert_eq!(cert.bound, 2);
        assert!(cert.totally_positive.is_some());
        let d = decide_via_pind(&mt).unwrap();
        // cross-check with the direct decomposable route
        let direct = check_decomposable(&mt).unwrap().derived;
        assert_eq!(d.is_positive(), direct.is_positive());
    }

    #[test]
    fn ed_agrees_with_sap() {
        let b = SearchBounds::default();
        let m = AlgebraWithInvolution::SplitOrthogonal(QuadraticForm::from_ints(&[1, -2]));
        assert!(ed_decide(&m, &b).unwrap().is_positive());
        let m2 = AlgebraWithInvolution::Index2Symplectic(
            QuaternionAlgebra::from_ints(-1, -1),
            HermitianForm::new(QuaternionAlgebra::from_ints(-1, -1), vec![Value::int(1), Value::int(1)])
                .unwrap(),
        );
        assert!(ed_decide(&m2, &b).unwrap().is_negative());
    }
}
