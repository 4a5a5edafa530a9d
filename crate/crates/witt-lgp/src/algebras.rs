//! Quaternion algebras (a,b)_F with conjugation, hermitian and
//! skew-hermitian forms over them, the Jacobson trace transfer, and the
//! admissibility tests for orderings and real valuations.

use crate::fields::rat::Rat;
use crate::fields::ratfunc::RealValuation;
use crate::fields::value::{BaseField, OrderingPt, Value};
use crate::qforms::{witness_search, IsotropyWitness, QPlace, QuadraticForm, SearchBounds};
use crate::{Error, Result};
use num_bigint::BigInt;
use std::fmt;

/// Three-valued answers for division/admissibility questions; `Undecided`
/// carries a structured reason tag.
#[derive(Clone, Debug, PartialEq)]
pub enum Trit {
    Yes,
    No,
    Undecided(String),
}

impl Trit {
    pub fn is_yes(&self) -> bool {
        matches!(self, Trit::Yes)
    }
    pub fn is_no(&self) -> bool {
        matches!(self, Trit::No)
    }
}

#[derive(Clone, PartialEq)]
pub struct QuaternionAlgebra {
    pub field: BaseField,
    pub a: Value,
    pub b: Value,
}

impl fmt::Debug for QuaternionAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "quat({}, {})", self.a, self.b)
    }
}

impl fmt::Display for QuaternionAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "quat({}, {})", self.a, self.b)
    }
}

impl QuaternionAlgebra {
    pub fn new(a: Value, b: Value) -> Result<QuaternionAlgebra> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::SingularForm);
        }
        if a.field() != b.field() {
            return Err(Error::MixedFields);
        }
        Ok(QuaternionAlgebra {
            field: a.field(),
            a: a.square_class_rep(),
            b: b.square_class_rep(),
        })
    }

    pub fn from_ints(a: i64, b: i64) -> QuaternionAlgebra {
        QuaternionAlgebra::new(Value::int(a), Value::int(b)).unwrap()
    }

    /// The norm form ⟨1, −a, −b, ab⟩.
    pub fn norm_form(&self) -> QuadraticForm {
        QuadraticForm::diagonal(vec![
            Value::one_of(&self.field),
            self.a.neg(),
            self.b.neg(),
            self.a.mul(&self.b),
        ])
        .unwrap()
    }

    /// The pure norm form ⟨1, −a, −b⟩ (the conic; D splits iff it is
    /// isotropic).
    pub fn conic_form(&self) -> QuadraticForm {
        QuadraticForm::diagonal(vec![
            Value::one_of(&self.field),
            self.a.neg(),
            self.b.neg(),
        ])
        .unwrap()
    }

    pub fn zero(&self) -> Quaternion {
        Quaternion::scalar(self, Value::zero_of(&self.field))
    }

    pub fn one(&self) -> Quaternion {
        Quaternion::scalar(self, Value::one_of(&self.field))
    }

    pub fn basis(&self) -> [Quaternion; 4] {
        let z = || Value::zero_of(&self.field);
        let o = || Value::one_of(&self.field);
        [
            Quaternion::new(self, [o(), z(), z(), z()]),
            Quaternion::new(self, [z(), o(), z(), z()]),
            Quaternion::new(self, [z(), z(), o(), z()]),
            Quaternion::new(self, [z(), z(), z(), o()]),
        ]
    }

    /// Division test with certificates.  Over ℚ this is decided by Hilbert
    /// symbols; over ℚ(t) by a definite ordering, a valuation residue
    /// obstruction, or an explicit conic point — otherwise Undecided.
    pub fn is_division(&self) -> DivisionAnswer {
        match &self.field {
            BaseField::Q => {
                let a = self.a.as_rat().unwrap();
                let b = self.b.as_rat().unwrap();
                let mut places = vec![QPlace::Infinity];
                places.extend(
                    crate::fields::rat::relevant_primes(&[a.clone(), b.clone()])
                        .into_iter()
                        .map(QPlace::Prime),
                );
                for pl in places {
                    if crate::qforms::hilbert_symbol(&a, &b, &pl) == -1 {
                        return DivisionAnswer {
                            answer: Trit::Yes,
                            route: format!("hilbert symbol -1 at {pl}"),
                            split_point: None,
                        };
                    }
                }
                // all symbols +1: split; find an explicit conic point
                let conic = self.conic_form();
                let w = witness_search(&conic, &SearchBounds::default())
                    .or_else(|| conic_point_q(&a, &b, 10_000));
                DivisionAnswer {
                    answer: Trit::No,
                    route: "all hilbert symbols +1".to_string(),
                    split_point: w,
                }
            }
            BaseField::FunQ => self.is_division_funq(),
            BaseField::Nf(_) => DivisionAnswer {
                answer: Trit::Undecided("number-field base not supported".to_string()),
                route: String::new(),
                split_point: None,
            },
        }
    }

    fn is_division_funq(&self) -> DivisionAnswer {
        let conic = self.conic_form();
        // definite ordering: a <_P 0 and b <_P 0 makes the norm form
        // definite, so D is division over F_P and over F
        for p in self.norm_form().sampled_orderings() {
            if self.a.sign_at(&p) < 0 && self.b.sign_at(&p) < 0 {
                return DivisionAnswer {
                    answer: Trit::Yes,
                    route: format!("norm form definite at ordering {p}"),
                    split_point: None,
                };
            }
        }
        // valuation obstruction on the conic
        for v in relevant_valuations(&conic) {
            if let Ok(split) = conic.springer_residues(&v) {
                let anis = |r: &Option<QuadraticForm>| -> Trit {
                    match r {
                        None => Trit::Yes,
                        Some(q) => residue_anisotropic(q),
                    }
                };
                if anis(&split.res1).is_yes() && anis(&split.res2).is_yes() {
                    return DivisionAnswer {
                        answer: Trit::Yes,
                        route: format!("residue obstruction at {v}"),
                        split_point: None,
                    };
                }
            }
        }
        // explicit conic point (one-copy witness)
        if let Some(w) = witness_search(&conic, &SearchBounds::default()) {
            if w.copies == 1 {
                return DivisionAnswer {
                    answer: Trit::No,
                    route: "explicit conic point".to_string(),
                    split_point: Some(w),
                };
            }
        }
        DivisionAnswer {
            answer: Trit::Undecided("no-division-certificate".to_string()),
            route: String::new(),
            split_point: None,
        }
    }

    /// D ⊗ F_P is division iff the norm form is definite at P, iff a and b
    /// are both negative at P.
    pub fn ordering_admissible(&self, p: &OrderingPt) -> bool {
        self.a.sign_at(p) < 0 && self.b.sign_at(p) < 0
    }

    /// D ⊗ F_v^H is division iff both Springer residues of the norm form
    /// are anisotropic over κ(v) (Morandi).
    pub fn valuation_admissible(&self, v: &RealValuation) -> Trit {
        assert!(matches!(self.field, BaseField::FunQ));
        let nf = self.norm_form();
        let split = match nf.springer_residues(v) {
            Ok(s) => s,
            Err(e) => return Trit::Undecided(format!("residue-field: {e}")),
        };
        let mut all_yes = true;
        for r in [&split.res1, &split.res2] {
            match r {
                None => {}
                Some(q) => match residue_anisotropic(q) {
                    Trit::Yes => {}
                    Trit::No => return Trit::No,
                    Trit::Undecided(t) => {
                        all_yes = false;
                        let _ = t;
                    }
                },
            }
        }
        if all_yes {
            Trit::Yes
        } else {
            Trit::Undecided("residue-anisotropy-undecided".to_string())
        }
    }
}

/// Anisotropy of a residue form over its number-field (or ℚ) residue
/// field: exact over ℚ via Hasse–Minkowski; over larger fields certified
/// anisotropic by a definite embedding or isotropic by an explicit square
/// ratio, otherwise undecided.
pub fn residue_anisotropic(q: &QuadraticForm) -> Trit {
    match &q.field {
        BaseField::Q => {
            if q.dim() == 1 || !q.isotropic_over_q() {
                Trit::Yes
            } else {
                Trit::No
            }
        }
        BaseField::Nf(_) => {
            if q.dim() == 1 {
                return Trit::Yes;
            }
            let definite_somewhere = q
                .all_signatures()
                .iter()
                .any(|(_, s)| s.unsigned_abs() == q.dim() as u64);
            if definite_somewhere {
                return Trit::Yes;
            }
            if crate::qforms::witness_search(q, &SearchBounds::default()).is_some() {
                return Trit::No;
            }
            Trit::Undecided("nf-anisotropy".to_string())
        }
        BaseField::FunQ => Trit::Undecided("function-field residue".to_string()),
    }
}

/// The finite real valuation set relevant to a ℚ(t)-form: Finite(p) for
/// every irreducible p with a real root dividing a (square-normalized)
/// entry, plus Infinity when some entry has odd degree.
pub fn relevant_valuations(q: &QuadraticForm) -> Vec<RealValuation> {
    let mut vs = vec![];
    let mut seen: Vec<crate::fields::poly::QPoly> = vec![];
    let mut odd_inf = false;
    for e in &q.entries {
        let f = e.as_fun().unwrap();
        if f.valuation(&RealValuation::Infinity).rem_euclid(2) == 1 {
            odd_inf = true;
        }
        let g = f.num.mul(&f.den);
        let (_, factors) = crate::fields::factor::factor_qpoly(&g);
        for (p, m) in factors {
            if m % 2 == 1 && p.has_real_root() && !seen.contains(&p) {
                seen.push(p);
            }
        }
    }
    for p in seen {
        vs.push(RealValuation::finite(p));
    }
    if odd_inf {
        vs.push(RealValuation::Infinity);
    }
    vs
}

#[derive(Clone, Debug)]
pub struct DivisionAnswer {
    pub answer: Trit,
    pub route: String,
    pub split_point: Option<IsotropyWitness>,
}

/// Bounded search for a rational point on a x² + b y² = z² (isotropy of the
/// conic ⟨1,−a,−b⟩ means x² − a y² − b z² = 0).
pub fn conic_point_q(a: &Rat, b: &Rat, height: u64) -> Option<IsotropyWitness> {
    let h = (height as f64).sqrt() as i64 + 1;
    let h = h.min(400);
    for y in 0..=h {
        for z in 0..=h {
            if y == 0 && z == 0 {
                continue;
            }
            let rhs = a * Rat::from_integer(BigInt::from(y * y))
                + b * Rat::from_integer(BigInt::from(z * z));
            if let Some(x) = crate::fields::rat::sqrt_rat(&rhs) {
                let v = vec![
                    Value::Rat(x),
                    Value::Rat(Rat::from_integer(BigInt::from(y))),
                    Value::Rat(Rat::from_integer(BigInt::from(z))),
                ];
                return Some(IsotropyWitness::new(vec![v]));
            }
        }
    }
    None
}

/// A quaternion in coordinates over the basis 1, i, j, k with i² = a,
/// j² = b, ij = −ji = k.
#[derive(Clone, PartialEq)]
pub struct Quaternion {
    pub alg: QuaternionAlgebra,
    pub c: [Value; 4],
}

impl fmt::Debug for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["", "i", "j", "k"];
        let mut first = true;
        for (x, n) in self.c.iter().zip(names) {
            if x.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            if n.is_empty() {
                write!(f, "{x}")?;
            } else if x.is_one() {
                write!(f, "{n}")?;
            } else {
                write!(f, "({x})*{n}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Quaternion {
    pub fn new(alg: &QuaternionAlgebra, c: [Value; 4]) -> Quaternion {
        Quaternion {
            alg: alg.clone(),
            c,
        }
    }

    pub fn scalar(alg: &QuaternionAlgebra, x: Value) -> Quaternion {
        let z = || Value::zero_of(&alg.field);
        Quaternion::new(alg, [x, z(), z(), z()])
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_pure(&self) -> bool {
        self.c[0].is_zero()
    }

    pub fn add(&self, o: &Quaternion) -> Quaternion {
        let c = [
            self.c[0].add(&o.c[0]),
            self.c[1].add(&o.c[1]),
            self.c[2].add(&o.c[2]),
            self.c[3].add(&o.c[3]),
        ];
        Quaternion::new(&self.alg, c)
    }

    pub fn sub(&self, o: &Quaternion) -> Quaternion {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Quaternion {
        Quaternion::new(
            &self.alg,
            [
                self.c[0].neg(),
                self.c[1].neg(),
                self.c[2].neg(),
                self.c[3].neg(),
            ],
        )
    }

    pub fn scale(&self, s: &Value) -> Quaternion {
        Quaternion::new(
            &self.alg,
            [
                self.c[0].mul(s),
                self.c[1].mul(s),
                self.c[2].mul(s),
                self.c[3].mul(s),
            ],
        )
    }

    pub fn mul(&self, o: &Quaternion) -> Quaternion {
        let a = &self.alg.a;
        let b = &self.alg.b;
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
        Quaternion::new(&self.alg, [z0, z1, z2, z3])
    }

    /// Quaternion conjugation γ: negates the pure part.
    pub fn conj(&self) -> Quaternion {
        Quaternion::new(
            &self.alg,
            [
                self.c[0].clone(),
                self.c[1].neg(),
                self.c[2].neg(),
                self.c[3].neg(),
            ],
        )
    }

    /// Reduced norm x·γ(x) = x0² − a x1² − b x2² + ab x3² (central).
    pub fn norm(&self) -> Value {
        let a = &self.alg.a;
        let b = &self.alg.b;
        self.c[0]
            .square()
            .sub(&a.mul(&self.c[1].square()))
            .sub(&b.mul(&self.c[2].square()))
            .add(&a.mul(b).mul(&self.c[3].square()))
    }

    /// Reduced trace x + γ(x) = 2 x0 (as a central value).
    pub fn trd(&self) -> Value {
        self.c[0].add(&self.c[0])
    }

    /// Inverse γ(x)/n(x); panics on zero norm (zero divisor or zero).
    pub fn inverse(&self) -> Quaternion {
        let n = self.norm();
        assert!(!n.is_zero(), "non-invertible quaternion");
        self.conj().scale(&n.inv())
    }
}

// ---------------------------------------------------------------------------
// Hermitian and skew-hermitian forms

/// Hermitian form over (D, γ) with central diagonal entries.
#[derive(Clone, Debug)]
pub struct HermitianForm {
    pub alg: QuaternionAlgebra,
    pub entries: Vec<Value>,
}

impl HermitianForm {
    pub fn new(alg: QuaternionAlgebra, entries: Vec<Value>) -> Result<HermitianForm> {
        if entries.is_empty() {
            return Err(Error::NonsingularRequired);
        }
        for e in &entries {
            if e.is_zero() {
                return Err(Error::SingularForm);
            }
            if e.field() != alg.field {
                return Err(Error::MixedFields);
            }
        }
        Ok(HermitianForm { alg, entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// h(x, x) = Σ α_l n(x_l) for x ∈ Dⁿ.
    pub fn eval(&self, x: &[Quaternion]) -> Value {
        assert_eq!(x.len(), self.dim());
        let mut acc = Value::zero_of(&self.alg.field);
        for (al, xl) in self.entries.iter().zip(x) {
            acc = acc.add(&al.mul(&xl.norm()));
        }
        acc
    }

    /// The Jacobson trace form q_h = ⟨1,−a,−b,ab⟩ ⊗ ⟨α_1,…,α_n⟩, verified
    /// against the literal Gram matrix of x ↦ h(x,x) on the standard
    /// F-basis of Dⁿ.
    pub fn jacobson_trace(&self) -> QuadraticForm {
        // Literal tensor entries without square-class normalization:
        // coordinate m·n + l of q_h is component m of the quaternion in
        // slot l, so quadratic witnesses pull back to hermitian vectors
        // verbatim (values, not just isometry classes, must match).
        let norm_entries = [
            Value::one_of(&self.alg.field),
            self.alg.a.neg(),
            self.alg.b.neg(),
            self.alg.a.mul(&self.alg.b),
        ];
        let mut entries = vec![];
        for m in &norm_entries {
            for al in &self.entries {
                entries.push(m.mul(al));
            }
        }
        let formula = QuadraticForm::diagonal_raw(entries).unwrap();
        debug_assert!(self.jacobson_trace_direct_check());
        formula
    }

    /// The direct Gram computation: on the basis e_l·(1,i,j,k) the form
    /// x ↦ h(x,x) is literally diagonal with entries α_l·(1,−a,−b,ab).
    pub fn jacobson_trace_direct_check(&self) -> bool {
        let gram = self.jacobson_gram();
        let n = gram.len();
        let a = &self.alg.a;
        let b = &self.alg.b;
        for (r, row) in gram.iter().enumerate() {
            for (s, g) in row.iter().enumerate() {
                if r != s {
                    if !g.is_zero() {
                        return false;
                    }
                    continue;
                }
                let l = r / 4;
                let expect = match r % 4 {
                    0 => self.entries[l].clone(),
                    1 => self.entries[l].mul(a).neg(),
                    2 => self.entries[l].mul(b).neg(),
                    _ => self.entries[l].mul(a).mul(b),
                };
                if *g != expect {
                    return false;
                }
            }
        }
        n == 4 * self.dim()
    }

    /// Gram matrix of x ↦ h(x,x) on the standard basis via polarization.
    pub fn jacobson_gram(&self) -> Vec<Vec<Value>> {
        let dim = 4 * self.dim();
        let basis: Vec<Vec<Quaternion>> = (0..dim)
            .map(|r| {
                (0..self.dim())
                    .map(|l| {
                        if l == r / 4 {
                            self.alg.basis()[r % 4].clone()
                        } else {
                            self.alg.zero()
                        }
                    })
                    .collect()
            })
            .collect();
        let q = |x: &Vec<Quaternion>| self.eval(x);
        let half = Value::from_rat_in(&self.alg.field, crate::fields::rat::ratq(1, 2));
        (0..dim)
            .map(|r| {
                (0..dim)
                    .map(|s| {
                        let sum: Vec<Quaternion> = basis[r]
                            .iter()
                            .zip(&basis[s])
                            .map(|(u, v)| u.add(v))
                            .collect();
                        q(&sum).sub(&q(&basis[r])).sub(&q(&basis[s])).mul(&half)
                    })
                    .collect()
            })
            .collect()
    }
}

/// Skew-hermitian form over (D, γ): diagonal with pure nonzero entries.
#[derive(Clone, Debug)]
pub struct SkewHermitianForm {
    pub alg: QuaternionAlgebra,
    pub entries: Vec<Quaternion>,
}

impl SkewHermitianForm {
    pub fn new(alg: QuaternionAlgebra, entries: Vec<Quaternion>) -> Result<SkewHermitianForm> {
        if entries.is_empty() {
            return Err(Error::NonsingularRequired);
        }
        for d in &entries {
            if d.is_zero() || !d.is_pure() {
                return Err(Error::Unsupported(
                    "skew-hermitian entries must be nonzero pure quaternions".to_string(),
                ));
            }
        }
        Ok(SkewHermitianForm { alg, entries })
    }

    /// Diagonalize a general skew-hermitian Gram matrix (γ(H)ᵗ = −H) by
    /// Gram–Schmidt over D; requires D division (all encountered norms
    /// invertible).
    pub fn from_gram(alg: QuaternionAlgebra, h: &[Vec<Quaternion>]) -> Result<SkewHermitianForm> {
        let n = h.len();
        if n == 0 {
            return Err(Error::NonsingularRequired);
        }
        for (r, row) in h.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NonsingularRequired);
            }
            for (s, x) in row.iter().enumerate() {
                if h[s][r].conj().neg() != *x {
                    return Err(Error::Unsupported("matrix is not skew-hermitian".to_string()));
                }
            }
        }
        // φ(x, y) = Σ γ(x_r) H_rs y_s on column vectors over D
        let phi = |x: &Vec<Quaternion>, y: &Vec<Quaternion>| -> Quaternion {
            let mut acc = alg.zero();
            for r in 0..n {
                for s in 0..n {
                    acc = acc.add(&x[r].conj().mul(&h[r][s]).mul(&y[s]));
                }
            }
            acc
        };
        let e = |r: usize| -> Vec<Quaternion> {
            (0..n)
                .map(|s| if s == r { alg.one() } else { alg.zero() })
                .collect()
        };
        let mut basis: Vec<Vec<Quaternion>> = vec![];
        let mut entries = vec![];
        let pool: Vec<Vec<Quaternion>> = (0..n).map(e).collect();
        while basis.len() < n {
            // orthogonalize remaining pool vectors against chosen basis
            let mut found = None;
            for w in &pool {
                let mut wp = w.clone();
                for (v, d) in basis.iter().zip(&entries) {
                    let coef: Quaternion = phi(v, &wp);
                    let d: &Quaternion = d;
                    let adj: Vec<Quaternion> = v
                        .iter()
                        .map(|vi| vi.mul(&d.inverse()).mul(&coef))
                        .collect();
                    wp = wp.iter().zip(&adj).map(|(x, y)| x.sub(y)).collect();
                }
                if wp.iter().all(|x| x.is_zero()) {
                    continue;
                }
                let dd = phi(&wp, &wp);
                if !dd.is_zero() {
                    found = Some((wp, dd));
                    break;
                }
                // isotropic direction: perturb by quaternion units to make
                // the diagonal element nonzero
                for u in &pool {
                    for c in alg.basis() {
                        let cand: Vec<Quaternion> = wp
                            .iter()
                            .zip(u)
                            .map(|(x, y)| x.add(&y.mul(&c)))
                            .collect();
                        let mut cp = cand;
                        for (v, d) in basis.iter().zip(&entries) {
                            let coef = phi(v, &cp);
                            let d: &Quaternion = d;
                            let adj: Vec<Quaternion> = v
                                .iter()
                                .map(|vi| vi.mul(&d.inverse()).mul(&coef))
                                .collect();
                            cp = cp.iter().zip(&adj).map(|(x, y)| x.sub(y)).collect();
                        }
                        if cp.iter().all(|x| x.is_zero()) {
                            continue;
                        }
                        let dd = phi(&cp, &cp);
                        if !dd.is_zero() {
                            found = Some((cp, dd));
                            break;
                        }
                    }
                    if found.is_some() {
                        break;
                    }
                }
                if found.is_some() {
                    break;
                }
            }
            match found {
                Some((v, d)) => {
                    basis.push(v);
                    entries.push(d);
                }
                None => return Err(Error::SingularForm),
            }
        }
        SkewHermitianForm::new(alg, entries)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// Σ γ(x_l) d_l x_l (a pure quaternion for skew-hermitian d_l).
    pub fn eval(&self, x: &[Quaternion]) -> Quaternion {
        assert_eq!(x.len(), self.dim());
        let mut acc = self.alg.zero();
        for (dl, xl) in self.entries.iter().zip(x) {
            acc = acc.add(&xl.conj().mul(dl).mul(xl));
        }
        acc
    }
}

/// Over a real closed field where D stays division, a skew-hermitian form
/// is isotropic iff its dimension is at least 2.
pub fn skew_isotropy_real_closed(n: usize) -> bool {
    n >= 2
}

/// Bounded witness search for Σ_k Σ_l γ(x_{k,l}) d_l x_{k,l} = 0 over a
/// small quaternion coordinate pool (used as the verification oracle for
/// the real-closed classification and for explicit certificates over ℚ).
pub fn skew_witness_search(
    h: &SkewHermitianForm,
    max_copies: usize,
) -> Option<Vec<Vec<Quaternion>>> {
    let alg = &h.alg;
    let mut pool: Vec<Quaternion> = vec![alg.zero()];
    let coords: [i64; 3] = [0, 1, -1];
    for c0 in coords {
        for c1 in coords {
            for c2 in coords {
                for c3 in coords {
                    if c0 == 0 && c1 == 0 && c2 == 0 && c3 == 0 {
                        continue;
                    }
                    pool.push(Quaternion::new(
                        alg,
                        [
                            Value::from_rat_in(&alg.field, crate::fields::rat::rat(c0)),
                            Value::from_rat_in(&alg.field, crate::fields::rat::rat(c1)),
                            Value::from_rat_in(&alg.field, crate::fields::rat::rat(c2)),
                            Value::from_rat_in(&alg.field, crate::fields::rat::rat(c3)),
                        ],
                    ));
                }
            }
        }
    }
    // single copy, dimension <= 2: exhaustive over the pool
    if h.dim() <= 2 {
        for x0 in &pool {
            for x1 in pool.iter().take(if h.dim() == 2 { pool.len() } else { 1 }) {
                let x: Vec<Quaternion> = if h.dim() == 2 {
                    vec![x0.clone(), x1.clone()]
                } else {
                    vec![x0.clone()]
                };
                if x.iter().all(|q| q.is_zero()) {
                    continue;
                }
                if h.eval(&x).is_zero() {
                    return Some(vec![x]);
                }
            }
        }
    } else {
        // restrict to two active slots
        for i in 0..h.dim() {
            for j in i + 1..h.dim() {
                for x0 in &pool {
                    for x1 in &pool {
                        if x0.is_zero() && x1.is_zero() {
                            continue;
                        }
                        let mut x = vec![alg.zero(); h.dim()];
                        x[i] = x0.clone();
                        x[j] = x1.clone();
                        if h.eval(&x).is_zero() {
                            return Some(vec![x]);
                        }
                    }
                }
            }
        }
    }
    let _ = max_copies;
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::ratfunc::Cut;
    use crate::fields::poly::QPoly;
    use crate::fields::rat::rat;
    use crate::fields::ratfunc::RatFunc;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn hamilton() -> QuaternionAlgebra {
        QuaternionAlgebra::from_ints(-1, -1)
    }

    fn t_val() -> Value {
        Value::Fun(RatFunc::var())
    }

    fn fc(n: i64) -> Value {
        Value::Fun(RatFunc::constant(rat(n)))
    }

    #[test]
    fn norm_forms() {
        assert_eq!(hamilton().norm_form(), QuadraticForm::from_ints(&[1, 1, 1, 1]));
        assert_eq!(
            QuaternionAlgebra::from_ints(2, 3).norm_form(),
            QuadraticForm::from_ints(&[1, -2, -3, 6])
        );
        let split = QuaternionAlgebra::from_ints(1, 5).norm_form();
        assert_eq!(split, QuadraticForm::from_ints(&[1, -1, -5, 5]));
        assert!(split.is_torsion());
    }

    #[test]
    fn quaternion_relations_and_norm_multiplicativity() {
        let d = QuaternionAlgebra::from_ints(2, 3);
        let [one, i, j, k] = d.basis();
        assert_eq!(i.mul(&i), Quaternion::scalar(&d, Value::int(2)));
        assert_eq!(j.mul(&j), Quaternion::scalar(&d, Value::int(3)));
        assert_eq!(i.mul(&j), k);
        assert_eq!(j.mul(&i), k.neg());
        assert_eq!(k.mul(&k), Quaternion::scalar(&d, Value::int(-6)));
        assert_eq!(one.mul(&k), k);

        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let rnd = |rng: &mut StdRng| {
                Quaternion::new(
                    &d,
                    [
                        Value::int(rng.gen_range(-5..=5)),
                        Value::int(rng.gen_range(-5..=5)),
                        Value::int(rng.gen_range(-5..=5)),
                        Value::int(rng.gen_range(-5..=5)),
                    ],
                )
            };
            let x = rnd(&mut rng);
            let y = rnd(&mut rng);
            assert_eq!(x.mul(&y).norm(), x.norm().mul(&y.norm()));
            // Trd is central and matches x + conj(x)
            let tr = x.add(&x.conj());
            assert_eq!(tr, Quaternion::scalar(&d, x.trd()));
            // conj is an anti-automorphism
            assert_eq!(x.mul(&y).conj(), y.conj().mul(&x.conj()));
        }
    }

    #[test]
    fn division_over_q() {
        assert!(hamilton().is_division().answer.is_yes());
        let split = QuaternionAlgebra::from_ints(1, 5).is_division();
        assert!(split.answer.is_no());
        let w = split.split_point.unwrap();
        assert!(w.verify(&QuaternionAlgebra::from_ints(1, 5).conic_form()));
        // (2,3)_Q: hilbert symbol at 3 is -1
        assert!(QuaternionAlgebra::from_ints(2, 3).is_division().answer.is_yes());
    }

    #[test]
    fn division_over_qt() {
        // (-1, t): division, certified at Finite(t)
        let d = QuaternionAlgebra::new(fc(-1), t_val()).unwrap();
        let ans = d.is_division();
        assert!(ans.answer.is_yes(), "{:?}", ans);
        // (1, t): split
        let s = QuaternionAlgebra::new(fc(1), t_val()).unwrap();
        assert!(s.is_division().answer.is_no());
        // (t, t): i + j is a zero divisor? norm of x+iy.. conic <1,-t,-t>:
        // x² = t(y² + z²) has no solution: both residues at Finite(t)
        // anisotropic over Q -> division
        let tt = QuaternionAlgebra::new(t_val(), t_val()).unwrap();
        assert!(tt.is_division().answer.is_yes());
    }

    #[test]
    fn admissibility() {
        let p0 = OrderingPt::FunCut(Cut::right_of_rat(rat(0)));
        let m = QuaternionAlgebra::new(fc(-1), t_val().neg()).unwrap();
        // (-1, -t): at t > 0 both a, b negative -> admissible
        assert!(m.ordering_admissible(&p0));
        let d = QuaternionAlgebra::new(fc(-1), t_val()).unwrap();
        assert!(!d.ordering_admissible(&p0));

        // (-1,-1) over Q(t) at Finite(t): residues <1,1,1,1>, empty
        let h = QuaternionAlgebra::new(
            Value::Fun(RatFunc::constant(rat(-1))),
            Value::Fun(RatFunc::constant(rat(-1))),
        )
        .unwrap();
        assert_eq!(h.valuation_admissible(&RealValuation::finite(QPoly::var())), Trit::Yes);
        // (-1, t) at Finite(t): residues <1,1> and <1>, both anisotropic
        assert_eq!(d.valuation_admissible(&RealValuation::finite(QPoly::var())), Trit::Yes);
        // (1, t) split at any v
        let s = QuaternionAlgebra::new(fc(1), t_val()).unwrap();
        assert_eq!(s.valuation_admissible(&RealValuation::finite(QPoly::var())), Trit::No);
    }

    #[test]
    fn jacobson_trace_formula_matches_gram() {
        let h = HermitianForm::new(hamilton(), vec![Value::int(1)]).unwrap();
        assert_eq!(h.jacobson_trace(), QuadraticForm::from_ints(&[1, 1, 1, 1]));
        assert!(h.jacobson_trace_direct_check());

        let h2 = HermitianForm::new(
            QuaternionAlgebra::from_ints(2, 3),
            vec![Value::int(1), Value::int(-1)],
        )
        .unwrap();
        let q = h2.jacobson_trace();
        assert_eq!(q.dim(), 8);
        assert!(q.is_torsion());
        assert!(h2.jacobson_trace_direct_check());
    }

    #[test]
    fn skew_real_closed_witnesses() {
        // n = 1 over Hamilton quaternions: no witness in the pool
        let d = hamilton();
        let [_, i, j, _] = d.basis();
        let h1 = SkewHermitianForm::new(d.clone(), vec![i.clone()]).unwrap();
        assert!(skew_witness_search(&h1, 1).is_none());
        assert!(!skew_isotropy_real_closed(1));
        // n = 2: <i, j> has an isotropic vector
        let h2 = SkewHermitianForm::new(d.clone(), vec![i, j]).unwrap();
        let w = skew_witness_search(&h2, 1).expect("dim 2 skew form should be isotropic");
        assert!(h2.eval(&w[0]).is_zero());
        assert!(skew_isotropy_real_closed(2));
        assert!(skew_isotropy_real_closed(5));
    }

    #[test]
    fn skew_gram_diagonalization() {
        let d = hamilton();
        let [_, i, j, k] = d.basis();
        // gram [[i, k],[k, j]] is skew-hermitian (conj(k) = -k)
        let gram = vec![
            vec![i.clone(), k.clone()],
            vec![k.clone(), j.clone()],
        ];
        let h = SkewHermitianForm::from_gram(d.clone(), &gram).unwrap();
        assert_eq!(h.dim(), 2);
        for e in &h.entries {
            assert!(e.is_pure() && !e.is_zero());
        }
    }
}
