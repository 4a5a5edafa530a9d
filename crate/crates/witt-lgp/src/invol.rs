//! Concrete models of central simple algebras with an involution of the
//! first kind: split matrix algebras with orthogonal or symplectic
//! involutions, index-2 models adjoint to (skew-)hermitian forms over a
//! quaternion algebra, and tensor products of quaternion factors.  The
//! involution trace form T_σ(x) = Trd(σ(x)·x) is computed as an honest
//! Gram matrix on an explicit basis and then diagonalized.

use crate::algebras::{HermitianForm, Quaternion, QuaternionAlgebra, SkewHermitianForm};
use crate::fields::value::{BaseField, OrderingPt, Value};
use crate::qforms::{diagonalize_symmetric, IsotropyWitness, QuadraticForm};
use crate::fields::rat::isqrt;
use crate::{Error, Result};

pub const DEFAULT_DIM_CAP: usize = 64;

/// Involution on a quaternion factor: the canonical involution γ, or the
/// orthogonal twist x ↦ s γ(x) s⁻¹ by a recorded nonzero pure quaternion.
#[derive(Clone, Debug)]
pub enum QuatInvol {
    Gamma,
    IntGamma(Quaternion),
}

impl QuatInvol {
    pub fn apply(&self, x: &Quaternion) -> Quaternion {
        match self {
            QuatInvol::Gamma => x.conj(),
            QuatInvol::IntGamma(s) => s.mul(&x.conj()).mul(&s.inverse()),
        }
    }

    pub fn is_orthogonal(&self) -> bool {
        matches!(self, QuatInvol::IntGamma(_))
    }
}

#[derive(Clone, Debug)]
pub enum AlgebraWithInvolution {
    /// (M_m(F), adjoint of a nonsingular diagonal quadratic form).
    SplitOrthogonal(QuadraticForm),
    /// (M_2n(F), adjoint of the standard symplectic form).
    SplitSymplectic(usize),
    /// (M_n(D), adjoint of a hermitian form over (D, γ)); symplectic type.
    Index2Symplectic(QuaternionAlgebra, HermitianForm),
    /// (M_n(D), adjoint of a skew-hermitian form); orthogonal type.
    Index2Orthogonal(QuaternionAlgebra, SkewHermitianForm),
    /// (Q_1, σ_1) ⊗ … ⊗ (Q_r, σ_r) ⊗ (M_s(F), transpose).
    QuatTensor {
        factors: Vec<(QuaternionAlgebra, QuatInvol)>,
        s: usize,
    },
}

use AlgebraWithInvolution as Model;

impl Model {
    pub fn base_field(&self) -> BaseField {
        match self {
            Model::SplitOrthogonal(q) => q.field.clone(),
            Model::SplitSymplectic(_) => BaseField::Q,
            Model::Index2Symplectic(d, _) | Model::Index2Orthogonal(d, _) => d.field.clone(),
            Model::QuatTensor { factors, .. } => factors[0].0.field.clone(),
        }
    }

    /// Degree of A (so dim_F A is its square).
    pub fn degree(&self) -> usize {
        match self {
            Model::SplitOrthogonal(q) => q.dim(),
            Model::SplitSymplectic(n) => 2 * n,
            Model::Index2Symplectic(_, h) => 2 * h.dim(),
            Model::Index2Orthogonal(_, h) => 2 * h.dim(),
            Model::QuatTensor { factors, s } => (1 << factors.len()) * s,
        }
    }

    pub fn dim_f(&self) -> usize {
        self.degree() * self.degree()
    }

    /// n × (A, σ): repeats the underlying form n times (and scales the
    /// matrix size for form-free variants).
    pub fn scale(&self, n: usize) -> Model {
        assert!(n >= 1);
        match self {
            Model::SplitOrthogonal(q) => Model::SplitOrthogonal(q.copies(n)),
            Model::SplitSymplectic(m) => Model::SplitSymplectic(n * m),
            Model::Index2Symplectic(d, h) => {
                let mut e = vec![];
                for _ in 0..n {
                    e.extend(h.entries.iter().cloned());
                }
                Model::Index2Symplectic(d.clone(), HermitianForm::new(d.clone(), e).unwrap())
            }
            Model::Index2Orthogonal(d, h) => {
                let mut e = vec![];
                for _ in 0..n {
                    e.extend(h.entries.iter().cloned());
                }
                Model::Index2Orthogonal(d.clone(), SkewHermitianForm::new(d.clone(), e).unwrap())
            }
            Model::QuatTensor { factors, s } => Model::QuatTensor {
                factors: factors.clone(),
                s: n * s,
            },
        }
    }

    pub fn trace_form_default(&self) -> Result<QuadraticForm> {
        self.trace_form(DEFAULT_DIM_CAP)
    }

    /// The diagonalized Gram matrix of T_σ on the standard basis.
    pub fn trace_form(&self, dim_cap: usize) -> Result<QuadraticForm> {
        if self.dim_f() > dim_cap {
            return Err(Error::DimensionCap(self.dim_f(), dim_cap));
        }
        if let Model::QuatTensor { factors, .. } = self {
            for (_, inv) in factors {
                if let QuatInvol::IntGamma(g) = inv {
                    if g.norm().is_zero() {
                        return Err(Error::Unsupported(
                            "Int(s) twist requires an invertible quaternion".into(),
                        ));
                    }
                }
            }
        }
        let gram = match self {
            Model::SplitOrthogonal(q) => split_trace_gram(q),
            Model::SplitSymplectic(n) => symplectic_trace_gram(*n),
            Model::Index2Symplectic(d, h) => {
                let entries: Vec<Quaternion> = h
                    .entries
                    .iter()
                    .map(|a| Quaternion::scalar(d, a.clone()))
                    .collect();
                index2_trace_gram(d, &entries)
            }
            Model::Index2Orthogonal(d, h) => index2_trace_gram(d, &h.entries),
            Model::QuatTensor { factors, s } => tensor_trace_gram(factors, *s),
        };
        let (diag, _) = diagonalize_symmetric(&gram)?;
        QuadraticForm::diagonal(diag)
    }

    /// sig_P σ = √(sig_P T_σ); a negative or non-square trace signature
    /// indicates a model bug and is reported as such.
    pub fn signature_involution(&self, p: &OrderingPt) -> Result<u64> {
        let t = self.trace_form_default()?;
        let s = t.signature(p);
        if s < 0 {
            return Err(Error::NotAPerfectSquare(s));
        }
        let r = isqrt(&num_bigint::BigInt::from(s));
        if &r * &r != num_bigint::BigInt::from(s) {
            return Err(Error::NotAPerfectSquare(s));
        }
        Ok(u64::try_from(r).unwrap())
    }

    /// True iff sig_P σ = 0 at every ordering of the base field.
    pub fn is_weakly_hyperbolic(&self) -> Result<bool> {
        let t = self.trace_form_default()?;
        Ok(t.all_signatures().iter().all(|(_, s)| *s == 0))
    }

    /// Exact check of Σ σ(x_i)·x_i = 0 on vector witnesses, which embed as
    /// rank-one algebra elements.
    pub fn verify_witness(&self, w: &InvolutionWitness) -> bool {
        match (self, w) {
            (Model::SplitOrthogonal(q), InvolutionWitness::Vectors(vs)) => {
                if vs.is_empty() || vs.iter().all(|v| v.iter().all(|x| x.is_zero())) {
                    return false;
                }
                let mut acc = Value::zero_of(&q.field);
                for v in vs {
                    if v.len() != q.dim() {
                        return false;
                    }
                    acc = acc.add(&q.eval(v));
                }
                acc.is_zero()
            }
            (Model::Index2Symplectic(d, h), InvolutionWitness::QuatVectors(xs)) => {
                if xs.is_empty() || xs.iter().all(|x| x.iter().all(|q| q.is_zero())) {
                    return false;
                }
                let mut acc = Value::zero_of(&d.field);
                for x in xs {
                    if x.len() != h.dim() {
                        return false;
                    }
                    acc = acc.add(&h.eval(x));
                }
                acc.is_zero()
            }
            (Model::Index2Orthogonal(d, h), InvolutionWitness::QuatVectors(xs)) => {
                if xs.is_empty() || xs.iter().all(|x| x.iter().all(|q| q.is_zero())) {
                    return false;
                }
                let mut acc = d.zero();
                for x in xs {
                    if x.len() != h.dim() {
                        return false;
                    }
                    acc = acc.add(&h.eval(x));
                }
                acc.is_zero()
            }
            (Model::SplitSymplectic(_), InvolutionWitness::Trivial) => true,
            _ => false,
        }
    }
}

/// Witness of Σ σ(x_i)x_i = 0: vectors over the base field (split
/// orthogonal, as rank-one matrices) or over D (index-2 models).
#[derive(Clone, Debug)]
pub enum InvolutionWitness {
    Vectors(Vec<Vec<Value>>),
    QuatVectors(Vec<Vec<Quaternion>>),
    Trivial,
}

/// Pull a quadratic witness for the Jacobson trace form q_h back to
/// quaternion vectors: coordinate m·n + l of the 4n-dimensional form is
/// component m of the quaternion in slot l.
pub fn pullback_hermitian_witness(
    h: &HermitianForm,
    w: &IsotropyWitness,
) -> InvolutionWitness {
    let n = h.dim();
    let xs = w
        .vectors
        .iter()
        .map(|v| {
            (0..n)
                .map(|l| {
                    Quaternion::new(
                        &h.alg,
                        [
                            v[l].clone(),
                            v[n + l].clone(),
                            v[2 * n + l].clone(),
                            v[3 * n + l].clone(),
                        ],
                    )
                })
                .collect()
        })
        .collect();
    InvolutionWitness::QuatVectors(xs)
}

// ---------------------------------------------------------------------------
// Gram computations

type Mat = Vec<Vec<Value>>;

fn mat_zero(field: &BaseField, m: usize) -> Mat {
    vec![vec![Value::zero_of(field); m]; m]
}

fn mat_unit(field: &BaseField, m: usize, r: usize, s: usize) -> Mat {
    let mut x = mat_zero(field, m);
    x[r][s] = Value::one_of(field);
    x
}

fn mat_mul(a: &Mat, b: &Mat, field: &BaseField) -> Mat {
    let m = a.len();
    let mut c = mat_zero(field, m);
    for r in 0..m {
        for s in 0..m {
            let mut acc = Value::zero_of(field);
            for k in 0..m {
                acc = acc.add(&a[r][k].mul(&b[k][s]));
            }
            c[r][s] = acc;
        }
    }
    c
}

fn mat_trace(a: &Mat, field: &BaseField) -> Value {
    let mut t = Value::zero_of(field);
    for (r, row) in a.iter().enumerate() {
        t = t.add(&row[r]);
    }
    t
}

fn mat_transpose(a: &Mat) -> Mat {
    let m = a.len();
    (0..m).map(|r| (0..m).map(|s| a[s][r].clone()).collect()).collect()
}

/// T_σ Gram for (M_m(F), ad_q) on the matrix-unit basis:
/// σ(X) = G⁻¹ Xᵗ G with G = diag(q).
fn split_trace_gram(q: &QuadraticForm) -> Mat {
    let field = &q.field;
    let m = q.dim();
    let basis: Vec<Mat> = (0..m * m)
        .map(|t| mat_unit(field, m, t / m, t % m))
        .collect();
    let sigma = |x: &Mat| -> Mat {
        let mut y = mat_transpose(x);
        // conjugate by the diagonal Gram matrix
        for r in 0..m {
            for s in 0..m {
                y[r][s] = q.entries[r].inv().mul(&y[r][s]).mul(&q.entries[s]);
            }
        }
        y
    };
    trace_gram_from(&basis, sigma, field)
}

/// T_σ Gram for (M_2n(F), adjoint of the standard symplectic form J).
fn symplectic_trace_gram(n: usize) -> Mat {
    let field = BaseField::Q;
    let m = 2 * n;
    let basis: Vec<Mat> = (0..m * m)
        .map(|t| mat_unit(&field, m, t / m, t % m))
        .collect();
    let mut j = mat_zero(&field, m);
    for r in 0..n {
        j[r][n + r] = Value::int(1);
        j[n + r][r] = Value::int(-1);
    }
    // J⁻¹ = Jᵗ = −J for the standard block form
    let jinv = mat_transpose(&j);
    let field2 = field.clone();
    let sigma = move |x: &Mat| -> Mat {
        mat_mul(&mat_mul(&jinv, &mat_transpose(x), &field2), &j, &field2)
    };
    trace_gram_from(&basis, sigma, &field)
}

fn trace_gram_from<F>(basis: &[Mat], sigma: F, field: &BaseField) -> Mat
where
    F: Fn(&Mat) -> Mat,
{
    let n = basis.len();
    let sig_basis: Vec<Mat> = basis.iter().map(&sigma).collect();
    (0..n)
        .map(|r| {
            (0..n)
                .map(|s| mat_trace(&mat_mul(&sig_basis[r], &basis[s], field), field))
                .collect()
        })
        .collect()
}

/// T_σ Gram for (M_n(D), ad_h) with h diagonal (entries central for the
/// hermitian case, pure for the skew-hermitian case), σ(X) = d⁻¹ γ(X)ᵗ d.
/// Basis: E_rs·q over q ∈ {1, i, j, k}; Trd(X) = Σ_l (X_ll + γ(X_ll)).
fn index2_trace_gram(alg: &QuaternionAlgebra, d: &[Quaternion]) -> Mat {
    let n = d.len();
    let qb = alg.basis();
    let dim = 4 * n * n;
    // basis element t ↦ matrix with quaternion qb[t % 4] at (r, s)
    let unpack = |t: usize| (t / (4 * n), (t / 4) % n, t % 4);
    let dinv: Vec<Quaternion> = d.iter().map(|x| x.inverse()).collect();
    // σ(E_rs·q) = d_s⁻¹ γ(q) d_r · E_sr
    let mut gram = vec![vec![Value::zero_of(&alg.field); dim]; dim];
    for t1 in 0..dim {
        let (r1, s1, q1) = unpack(t1);
        let sig = dinv[s1].mul(&qb[q1].conj()).mul(&d[r1]);
        for t2 in 0..dim {
            let (r2, s2, q2) = unpack(t2);
            // σ(B1)·B2 has diagonal support only when s1 == s2 after the
            // index swap in σ; its trace picks l = s1, needing r2 == r1
            if r1 != r2 || s1 != s2 {
                continue;
            }
            let prod = sig.mul(&qb[q2]);
            gram[t1][t2] = prod.trd();
        }
    }
    gram
}

/// T_σ Gram for a tensor of quaternion factors with (M_s(F), transpose):
/// reduced trace is multiplicative over the factors.
fn tensor_trace_gram(factors: &[(QuaternionAlgebra, QuatInvol)], s: usize) -> Mat {
    let field = factors[0].0.field.clone();
    let r = factors.len();
    let dim = (1usize << (2 * r)) * s * s;
    let unpack = |t: usize| {
        let mut t = t;
        let mut qs = vec![];
        for _ in 0..r {
            qs.push(t % 4);
            t /= 4;
        }
        (qs, t / s, t % s) // (factor basis indices, matrix row, col)
    };
    let mut gram = vec![vec![Value::zero_of(&field); dim]; dim];
    for t1 in 0..dim {
        let (qs1, u1, v1) = unpack(t1);
        for t2 in 0..dim {
            let (qs2, u2, v2) = unpack(t2);
            // matrix factor: tr(E_{v1 u1} E_{u2 v2}) = δ_{u1 u2} δ_{v1 v2}
            if u1 != u2 || v1 != v2 {
                continue;
            }
            let mut val = Value::one_of(&field);
            for (l, (alg, invol)) in factors.iter().enumerate() {
                let e1 = alg.basis()[qs1[l]].clone();
                let e2 = alg.basis()[qs2[l]].clone();
                val = val.mul(&invol.apply(&e1).mul(&e2).trd());
                if val.is_zero() {
                    break;
                }
            }
            gram[t1][t2] = val;
        }
    }
    gram
}

/// The tensor-product formula T_σ = T_{σ_1} ⊗ … ⊗ T_{σ_r}, computed from
/// the factor trace forms (s = 1 models only).
pub fn tensor_trace_form(factors: &[(QuaternionAlgebra, QuatInvol)]) -> Result<QuadraticForm> {
    let mut acc: Option<QuadraticForm> = None;
    for (alg, invol) in factors {
        let one = Model::QuatTensor {
            factors: vec![(alg.clone(), invol.clone())],
            s: 1,
        };
        let t = one.trace_form(DEFAULT_DIM_CAP)?;
        acc = Some(match acc {
            None => t,
            Some(p) => p.tensor(&t)?,
        });
    }
    acc.ok_or(Error::NonsingularRequired)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebras::QuaternionAlgebra;
    use crate::fields::rat::rat;
    use crate::fields::ratfunc::RatFunc;

    fn hamilton() -> QuaternionAlgebra {
        QuaternionAlgebra::from_ints(-1, -1)
    }

    #[test]
    fn quaternion_trace_forms() {
        // canonical involution on (-1,-1): T_γ = 2·norm form
        let m = Model::QuatTensor {
            factors: vec![(hamilton(), QuatInvol::Gamma)],
            s: 1,
        };
        let t = m.trace_form_default().unwrap();
        assert_eq!(t, QuadraticForm::from_ints(&[2, 2, 2, 2]));
        assert_eq!(m.signature_involution(&OrderingPt::QReal).unwrap(), 2);
        assert!(!m.is_weakly_hyperbolic().unwrap());

        // Int(i)∘γ: signature 0
        let [_, i, _, _] = hamilton().basis();
        let m2 = Model::QuatTensor {
            factors: vec![(hamilton(), QuatInvol::IntGamma(i))],
            s: 1,
        };
        let t2 = m2.trace_form_default().unwrap();
        assert!(t2.isometric_over_q(&QuadraticForm::from_ints(&[2, 2, -2, -2])));
        assert_eq!(m2.signature_involution(&OrderingPt::QReal).unwrap(), 0);
        assert!(m2.is_weakly_hyperbolic().unwrap());
    }

    #[test]
    fn split_trace_forms() {
        let m = Model::SplitOrthogonal(QuadraticForm::from_ints(&[1, 1]));
        let t = m.trace_form_default().unwrap();
        assert_eq!(t.signature(&OrderingPt::QReal), 4);
        assert_eq!(m.signature_involution(&OrderingPt::QReal).unwrap(), 2);

        let m1 = Model::SplitOrthogonal(QuadraticForm::from_ints(&[1]));
        assert_eq!(m1.trace_form_default().unwrap(), QuadraticForm::from_ints(&[1]));

        // ad_q signature equals |sig q|
        for q in [
            QuadraticForm::from_ints(&[1, -1]),
            QuadraticForm::from_ints(&[1, 2, -3]),
            QuadraticForm::from_ints(&[2, 5]),
        ] {
            let m = Model::SplitOrthogonal(q.clone());
            assert_eq!(
                m.signature_involution(&OrderingPt::QReal).unwrap() as i64,
                q.signature(&OrderingPt::QReal).abs()
            );
        }

        // symplectic split: trace form is torsion
        let ms = Model::SplitSymplectic(1);
        let ts = ms.trace_form_default().unwrap();
        assert_eq!(ts.signature(&OrderingPt::QReal), 0);
        assert!(ts.is_torsion());
    }

    #[test]
    fn index2_trace_forms() {
        let h = HermitianForm::new(hamilton(), vec![Value::int(1)]).unwrap();
        let m = Model::Index2Symplectic(hamilton(), h);
        let t = m.trace_form_default().unwrap();
        // M_1(D) with ad_<1> is (D, γ): T ≅ <2,2,2,2>
        assert!(t.isometric_over_q(&QuadraticForm::from_ints(&[2, 2, 2, 2])));

        let [_, i, j, _] = hamilton().basis();
        let sk = SkewHermitianForm::new(hamilton(), vec![i, j]).unwrap();
        let m2 = Model::Index2Orthogonal(hamilton(), sk);
        let t2 = m2.trace_form_default().unwrap();
        assert_eq!(t2.dim(), 16);
        // orthogonal involutions on definite models keep sig σ < deg
        let s = m2.signature_involution(&OrderingPt::QReal).unwrap();
        assert!(s <= 4);
    }

    #[test]
    fn tensor_formula_cross_check() {
        let g2 = Model::QuatTensor {
            factors: vec![(hamilton(), QuatInvol::Gamma), (hamilton(), QuatInvol::Gamma)],
            s: 1,
        };
        let direct = g2.trace_form_default().unwrap();
        let formula = tensor_trace_form(&[
            (hamilton(), QuatInvol::Gamma),
            (hamilton(), QuatInvol::Gamma),
        ])
        .unwrap();
        assert!(direct.isometric_over_q(&formula));
        assert_eq!(direct.signature(&OrderingPt::QReal), 16);
        assert_eq!(g2.signature_involution(&OrderingPt::QReal).unwrap(), 4);
    }

    #[test]
    fn scaling_multiplies_signature() {
        let m = Model::Index2Symplectic(
            hamilton(),
            HermitianForm::new(hamilton(), vec![Value::int(1)]).unwrap(),
        );
        let s1 = m.signature_involution(&OrderingPt::QReal).unwrap();
        let s2 = m.scale(2).signature_involution(&OrderingPt::QReal).unwrap();
        assert_eq!(s2, 2 * s1);
        if let Model::Index2Symplectic(_, h) = m.scale(2) {
            assert_eq!(h.entries, vec![Value::int(1), Value::int(1)]);
        } else {
            panic!("scale changed variant");
        }
    }

    #[test]
    fn witness_verification() {
        let m = Model::SplitOrthogonal(QuadraticForm::from_ints(&[1, -1]));
        let w = InvolutionWitness::Vectors(vec![vec![Value::int(1), Value::int(1)]]);
        assert!(m.verify_witness(&w));
        let bad = InvolutionWitness::Vectors(vec![vec![Value::int(0), Value::int(0)]]);
        assert!(!m.verify_witness(&bad));

        // pull back a Jacobson witness for <1,-2> over (-1,-1)
        let h = HermitianForm::new(hamilton(), vec![Value::int(1), Value::int(-2)]).unwrap();
        let qh = h.jacobson_trace();
        let w = crate::qforms::witness_search(&qh, &crate::qforms::SearchBounds::default())
            .expect("indefinite trace form should have a witness");
        let pw = pullback_hermitian_witness(&h, &w);
        let m = Model::Index2Symplectic(hamilton(), h);
        assert!(m.verify_witness(&pw));
    }

    #[test]
    fn trace_form_over_funq() {
        let one = Value::Fun(RatFunc::constant(rat(1)));
        let t = Value::Fun(RatFunc::var());
        let alg = QuaternionAlgebra::new(
            Value::Fun(RatFunc::constant(rat(-1))),
            Value::Fun(RatFunc::constant(rat(-1))),
        )
        .unwrap();
        let h = HermitianForm::new(alg.clone(), vec![one, t]).unwrap();
        let m = Model::Index2Symplectic(alg, h.clone());
        let tf = m.trace_form_default().unwrap();
        assert_eq!(tf.dim(), 16);
        // 4·sig_P T_σ = (sig_P q_h)² at every sampled cut
        let qh = h.jacobson_trace();
        for (p, s) in qh.all_signatures() {
            assert_eq!(4 * tf.signature(&p), s * s);
        }
    }

    #[test]
    fn dimension_cap() {
        let m = Model::SplitOrthogonal(QuadraticForm::from_ints(&[1; 9]));
        match m.trace_form_default() {
            Err(Error::DimensionCap(81, 64)) => {}
            other => panic!("expected DimensionCap, got {:?}", other.map(|q| q.dim())),
        }
    }
}
