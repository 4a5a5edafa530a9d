//! Diagonal quadratic forms over the supported base fields: construction
//! and Gram diagonalization, signatures, Springer residues at real
//! valuations, Hasse–Minkowski over ℚ, Hilbert symbols, and explicit
//! isotropy-witness search.

use crate::fields::algebraic::{sort_dedup, AlgebraicReal};
use crate::fields::numberfield::NumberField;
use crate::fields::rat::{
    four_squares_rat, legendre, padic_val, rat, relevant_primes, square_class,
    sqrt_rat, unit_part_mod, Rat,
};
use crate::fields::ratfunc::{Cut, RatFunc, RealValuation};
use crate::fields::value::{BaseField, OrderingPt, Value};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::rc::Rc;

#[derive(Clone, PartialEq)]
pub struct QuadraticForm {
    pub field: BaseField,
    pub entries: Vec<Value>,
}

impl fmt::Debug for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ">")
    }
}

impl QuadraticForm {
    /// Diagonal form from its entries; entries are square-class normalized.
    pub fn diagonal(entries: Vec<Value>) -> Result<QuadraticForm> {
        if entries.is_empty() {
            return Err(Error::NonsingularRequired);
        }
        let field = entries[0].field();
        for e in &entries {
            if e.is_zero() {
                return Err(Error::SingularForm);
            }
            if e.field() != field {
                return Err(Error::MixedFields);
            }
        }
        let entries = entries.iter().map(|e| e.square_class_rep()).collect();
        Ok(QuadraticForm { field, entries })
    }

    /// Diagonal form without square-class normalization (used internally
    /// where the literal entries matter, e.g. congruence checks).
    pub fn diagonal_raw(entries: Vec<Value>) -> Result<QuadraticForm> {
        if entries.is_empty() {
            return Err(Error::NonsingularRequired);
        }
        let field = entries[0].field();
        for e in &entries {
            if e.is_zero() {
                return Err(Error::SingularForm);
            }
            if e.field() != field {
                return Err(Error::MixedFields);
            }
        }
        Ok(QuadraticForm { field, entries })
    }

    pub fn from_ints(ns: &[i64]) -> QuadraticForm {
        QuadraticForm::diagonal(ns.iter().map(|&n| Value::int(n)).collect()).unwrap()
    }

    /// Diagonalize a symmetric Gram matrix by congruence; the returned form
    /// satisfies Tᵗ G T = diag(raw entries) with the raw entries then
    /// square-normalized (T is rescaled to match).
    pub fn from_gram(gram: &[Vec<Value>]) -> Result<(QuadraticForm, Vec<Vec<Value>>)> {
        let (diag, mut t) = diagonalize_symmetric(gram)?;
        let field = diag[0].field();
        let n = diag.len();
        let mut entries = Vec::with_capacity(n);
        for (j, d) in diag.iter().enumerate() {
            let rep = d.square_class_rep();
            // d = rep * s^2; divide column j of T by s
            let s = d.div(&rep).sqrt().unwrap_or_else(|| Value::one_of(&field));
            let rep = if d.div(&rep).sqrt().is_some() {
                rep
            } else {
                d.clone()
            };
            let si = s.inv();
            for row in t.iter_mut() {
                row[j] = row[j].mul(&si);
            }
            entries.push(rep);
        }
        Ok((QuadraticForm { field, entries }, t))
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn orth_sum(&self, o: &QuadraticForm) -> Result<QuadraticForm> {
        if self.field != o.field {
            return Err(Error::MixedFields);
        }
        let mut entries = self.entries.clone();
        entries.extend(o.entries.iter().cloned());
        QuadraticForm::diagonal(entries)
    }

    pub fn tensor(&self, o: &QuadraticForm) -> Result<QuadraticForm> {
        if self.field != o.field {
            return Err(Error::MixedFields);
        }
        let mut entries = vec![];
        for a in &self.entries {
            for b in &o.entries {
                entries.push(a.mul(b));
            }
        }
        QuadraticForm::diagonal(entries)
    }

    pub fn scale(&self, c: &Value) -> Result<QuadraticForm> {
        if c.is_zero() {
            return Err(Error::SingularForm);
        }
        QuadraticForm::diagonal(self.entries.iter().map(|e| e.mul(c)).collect())
    }

    pub fn neg(&self) -> QuadraticForm {
        QuadraticForm::diagonal(self.entries.iter().map(|e| e.neg()).collect()).unwrap()
    }

    pub fn copies(&self, n: usize) -> QuadraticForm {
        assert!(n >= 1);
        let mut entries = vec![];
        for _ in 0..n {
            entries.extend(self.entries.iter().cloned());
        }
        QuadraticForm { field: self.field.clone(), entries }
    }

    /// q(x) for a coordinate vector.
    pub fn eval(&self, x: &[Value]) -> Value {
        assert_eq!(x.len(), self.dim());
        let mut acc = Value::zero_of(&self.field);
        for (a, xi) in self.entries.iter().zip(x) {
            acc = acc.add(&a.mul(&xi.square()));
        }
        acc
    }

    pub fn signature(&self, p: &OrderingPt) -> i64 {
        self.entries.iter().map(|e| e.sign_at(p) as i64).sum()
    }

    /// A finite set of orderings whose signatures determine the whole
    /// signature profile of the form.
    pub fn sampled_orderings(&self) -> Vec<OrderingPt> {
        match &self.field {
            BaseField::Q => vec![OrderingPt::QReal],
            BaseField::Nf(k) => (0..k.embeddings.len()).map(OrderingPt::Embedding).collect(),
            BaseField::FunQ => {
                let fs: Vec<RatFunc> = self
                    .entries
                    .iter()
                    .map(|e| e.as_fun().unwrap())
                    .collect();
                fun_cuts_for(&fs).into_iter().map(OrderingPt::FunCut).collect()
            }
        }
    }

    pub fn all_signatures(&self) -> Vec<(OrderingPt, i64)> {
        self.sampled_orderings()
            .into_iter()
            .map(|p| {
                let s = self.signature(&p);
                (p, s)
            })
            .collect()
    }

    pub fn signature_profile(&self) -> SignatureFunction {
        assert!(matches!(self.field, BaseField::FunQ));
        let fs: Vec<RatFunc> = self.entries.iter().map(|e| e.as_fun().unwrap()).collect();
        let breakpoints = fun_breakpoints(&fs);
        let samples = cuts_around(&breakpoints)
            .into_iter()
            .map(|c| {
                let s = self.signature(&OrderingPt::FunCut(c.clone()));
                (c, s)
            })
            .collect();
        SignatureFunction {
            breakpoints,
            samples,
        }
    }

    /// |sig| < dim at every ordering of the base field; fields without any
    /// ordering count as totally indefinite vacuously.
    pub fn is_totally_indefinite(&self) -> bool {
        self.all_signatures()
            .iter()
            .all(|(_, s)| s.unsigned_abs() < self.dim() as u64)
    }

    /// Zero signature everywhere (torsion class in the Witt ring).
    pub fn is_torsion(&self) -> bool {
        self.all_signatures().iter().all(|(_, s)| *s == 0)
    }

    /// Weak isotropy over ℚ or a number field: true when the field has no
    /// real embedding, otherwise equivalent to total indefiniteness.
    pub fn weakly_isotropic_number_field(&self) -> bool {
        match &self.field {
            BaseField::FunQ => panic!("number-field test called on Q(t) form"),
            BaseField::Q | BaseField::Nf(_) => {
                if self.dim() < 2 {
                    return false;
                }
                self.is_totally_indefinite()
            }
        }
    }

    /// Springer decomposition at a real valuation of ℚ(t).
    pub fn springer_residues(&self, v: &RealValuation) -> Result<SpringerSplit> {
        assert!(matches!(self.field, BaseField::FunQ));
        let kappa = match v {
            RealValuation::Infinity => None,
            RealValuation::Finite(p) => Some(NumberField::new(p.clone())?),
        };
        let mut unit1 = vec![];
        let mut unit2 = vec![];
        for (i, e) in self.entries.iter().enumerate() {
            let f = e.as_fun().unwrap();
            let m = f.valuation(v);
            let u = strip_uniformizer(&f, v, m);
            if m.rem_euclid(2) == 0 {
                unit1.push((i, m, u));
            } else {
                unit2.push((i, m, u));
            }
        }
        let residues = |units: &[(usize, i64, RatFunc)]| -> Result<Option<QuadraticForm>> {
            if units.is_empty() {
                return Ok(None);
            }
            let entries: Vec<Value> = units
                .iter()
                .map(|(_, _, u)| residue_value(u, v, kappa.as_ref()))
                .collect::<Result<_>>()?;
            Ok(Some(QuadraticForm::diagonal(entries)?))
        };
        let res1 = residues(&unit1)?;
        let res2 = residues(&unit2)?;
        Ok(SpringerSplit {
            v: v.clone(),
            res1,
            res2,
            unit1,
            unit2,
        })
    }

    /// The reconstruction q ≅ q1 ⊥ π·q2 together with the diagonal/permuted
    /// congruence transform T with Tᵗ G T = Gram(q1 ⊥ π·q2).
    pub fn springer_reconstruction(
        &self,
        split: &SpringerSplit,
    ) -> (QuadraticForm, Vec<Vec<Value>>) {
        let pi = uniformizer(&split.v);
        let n = self.dim();
        let mut entries = Vec::with_capacity(n);
        let mut t = vec![vec![Value::zero_of(&self.field); n]; n];
        let mut col = 0usize;
        for (i, m, u) in &split.unit1 {
            // f_i = pi^m u with m = 2k: u = f_i * pi^(-k)^2
            let k = m.div_euclid(2);
            t[*i][col] = Value::Fun(pi.clone()).inv_pow(k);
            entries.push(Value::Fun(u.clone()));
            col += 1;
        }
        for (i, m, u) in &split.unit2 {
            let k = (m - 1).div_euclid(2);
            t[*i][col] = Value::Fun(pi.clone()).inv_pow(k);
            entries.push(Value::Fun(pi.mul(u)));
            col += 1;
        }
        (
            QuadraticForm {
                field: self.field.clone(),
                entries,
            },
            t,
        )
    }

    /// Exact isometry test over ℚ by the complete invariant set:
    /// dimension, signature, discriminant square class and Hasse
    /// invariants at the relevant primes.
    pub fn isometric_over_q(&self, other: &QuadraticForm) -> bool {
        assert!(matches!(self.field, BaseField::Q) && matches!(other.field, BaseField::Q));
        if self.dim() != other.dim() {
            return false;
        }
        if self.signature(&OrderingPt::QReal) != other.signature(&OrderingPt::QReal) {
            return false;
        }
        let av: Vec<Rat> = self.entries.iter().map(|e| e.as_rat().unwrap()).collect();
        let bv: Vec<Rat> = other.entries.iter().map(|e| e.as_rat().unwrap()).collect();
        let disc = |v: &[Rat]| square_class(&v.iter().product::<Rat>());
        if disc(&av) != disc(&bv) {
            return false;
        }
        let mut all = av.clone();
        all.extend(bv.iter().cloned());
        for p in relevant_primes(&all) {
            if hasse_invariant(&av, &p) != hasse_invariant(&bv, &p) {
                return false;
            }
        }
        true
    }

    /// Hasse–Minkowski isotropy test over ℚ, by the classical dimension
    /// casework at the finitely many relevant places.
    pub fn isotropic_over_q(&self) -> bool {
        assert!(matches!(self.field, BaseField::Q));
        let a: Vec<Rat> = self
            .entries
            .iter()
            .map(|e| Rat::from_integer(square_class(&e.as_rat().unwrap())))
            .collect();
        let n = a.len();
        if n < 2 {
            return false;
        }
        // the real place: need both signs
        let pos = a.iter().any(|x| x.is_positive());
        let neg = a.iter().any(|x| x.is_negative());
        if !(pos && neg) {
            return false;
        }
        if n == 2 {
            return is_square_rat_signed(&(-&a[0] * &a[1]));
        }
        if n >= 5 {
            // indefinite forms of dimension >= 5 are isotropic over every
            // p-adic field, hence over ℚ
            return true;
        }
        let primes = relevant_primes(&a);
        let disc: Rat = a.iter().product();
        for p in &primes {
            let eps = hasse_invariant(&a, p);
            let ok = if n == 3 {
                hilbert_symbol_p(&rat(-1), &-disc.clone(), p) == eps
            } else {
                // n == 4
                !is_square_in_qp(&disc, p) || eps == hilbert_symbol_p(&rat(-1), &rat(-1), p)
            };
            if !ok {
                return false;
            }
        }
        true
    }

    /// The local place certifying anisotropy over ℚ (for negative
    /// Hasse–Minkowski answers): "infinity" or a prime.
    pub fn q_anisotropy_place(&self) -> Option<QPlace> {
        assert!(matches!(self.field, BaseField::Q));
        let a: Vec<Rat> = self
            .entries
            .iter()
            .map(|e| Rat::from_integer(square_class(&e.as_rat().unwrap())))
            .collect();
        let n = a.len();
        if n < 2 {
            return Some(QPlace::Dimension);
        }
        let pos = a.iter().any(|x| x.is_positive());
        let neg = a.iter().any(|x| x.is_negative());
        if !(pos && neg) {
            return Some(QPlace::Infinity);
        }
        if n == 2 {
            if is_square_rat_signed(&(-&a[0] * &a[1])) {
                return None;
            }
            // a binary indefinite anisotropic form is anisotropic at some
            // odd-valuation prime of -a1 a2 (or at 2)
            let d = -&a[0] * &a[1];
            for p in relevant_primes(&a) {
                if !is_square_in_qp(&d, &p) {
                    return Some(QPlace::Prime(p));
                }
            }
            return Some(QPlace::Infinity);
        }
        if n >= 5 {
            return None;
        }
        let disc: Rat = a.iter().product();
        for p in relevant_primes(&a) {
            let eps = hasse_invariant(&a, &p);
            let ok = if n == 3 {
                hilbert_symbol_p(&rat(-1), &-disc.clone(), &p) == eps
            } else {
                !is_square_in_qp(&disc, &p) || eps == hilbert_symbol_p(&rat(-1), &rat(-1), &p)
            };
            if !ok {
                return Some(QPlace::Prime(p));
            }
        }
        None
    }
}

/// A place of ℚ used in anisotropy certificates.
#[derive(Clone, Debug, PartialEq)]
pub enum QPlace {
    Infinity,
    Prime(BigInt),
    Dimension, // dim 1: anisotropy is unconditional
}

impl fmt::Display for QPlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QPlace::Infinity => write!(f, "infinity"),
            QPlace::Prime(p) => write!(f, "{p}"),
            QPlace::Dimension => write!(f, "dimension"),
        }
    }
}

impl Value {
    fn inv_pow(&self, k: i64) -> Value {
        // self^(-k), used for valuation rescaling
        let mut acc = Value::one_of(&self.field());
        let b = if k > 0 { self.inv() } else { self.clone() };
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&b);
        }
        acc
    }
}

/// Signature of a ℚ(t)-form as a function of the cut, represented by its
/// breakpoints and a value sample at every one-sided cut and at ±∞.
#[derive(Clone, Debug)]
pub struct SignatureFunction {
    pub breakpoints: Vec<AlgebraicReal>,
    pub samples: Vec<(Cut, i64)>,
}

impl SignatureFunction {
    pub fn min_abs(&self) -> u64 {
        self.samples
            .iter()
            .map(|(_, s)| s.unsigned_abs())
            .min()
            .unwrap_or(0)
    }

    pub fn max_abs(&self) -> u64 {
        self.samples
            .iter()
            .map(|(_, s)| s.unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    pub fn all_zero(&self) -> bool {
        self.samples.iter().all(|(_, s)| *s == 0)
    }
}

/// Springer decomposition data at a real valuation: per-entry unit parts
/// and the two residue forms over κ(v).  Residue forms over a degree-1
/// residue field are presented over ℚ.
#[derive(Clone, Debug)]
pub struct SpringerSplit {
    pub v: RealValuation,
    pub res1: Option<QuadraticForm>,
    pub res2: Option<QuadraticForm>,
    pub unit1: Vec<(usize, i64, RatFunc)>,
    pub unit2: Vec<(usize, i64, RatFunc)>,
}

pub fn uniformizer(v: &RealValuation) -> RatFunc {
    match v {
        RealValuation::Infinity => RatFunc::var().inv(),
        RealValuation::Finite(p) => RatFunc::from_poly(p.clone()),
    }
}

fn strip_uniformizer(f: &RatFunc, v: &RealValuation, m: i64) -> RatFunc {
    let pi = uniformizer(v);
    let mut u = f.clone();
    for _ in 0..m.unsigned_abs() {
        u = if m > 0 { u.div(&pi) } else { u.mul(&pi) };
    }
    debug_assert_eq!(u.valuation(v), 0);
    u
}

fn residue_value(
    u: &RatFunc,
    v: &RealValuation,
    kappa: Option<&Rc<NumberField>>,
) -> Result<Value> {
    match v {
        RealValuation::Infinity => {
            let k = RealValuation::Infinity.residue_field();
            let r = u.residue(v, &k);
            Ok(Value::Rat(r.as_rat().unwrap()))
        }
        RealValuation::Finite(_) => {
            let k = kappa.unwrap();
            let r = u.residue(v, k);
            if k.degree() == 1 {
                Ok(Value::Rat(r.as_rat().unwrap()))
            } else {
                Ok(Value::Nf(r))
            }
        }
    }
}

/// All real roots of the numerators and denominators of a list of nonzero
/// rational functions.
pub fn fun_breakpoints(fs: &[RatFunc]) -> Vec<AlgebraicReal> {
    let mut roots = vec![];
    for f in fs {
        roots.extend(AlgebraicReal::real_roots_of(&f.num));
        roots.extend(AlgebraicReal::real_roots_of(&f.den));
    }
    sort_dedup(roots)
}

/// Cuts sampling every ordering class determined by the breakpoints: ±∞
/// and both sides of each breakpoint.
pub fn cuts_around(breakpoints: &[AlgebraicReal]) -> Vec<Cut> {
    let mut cuts = vec![Cut::NegInf];
    for b in breakpoints {
        cuts.push(Cut::LeftOf(b.clone()));
        cuts.push(Cut::RightOf(b.clone()));
    }
    cuts.push(Cut::PosInf);
    cuts
}

pub fn fun_cuts_for(fs: &[RatFunc]) -> Vec<Cut> {
    cuts_around(&fun_breakpoints(fs))
}

/// Symmetric congruence diagonalization over any of the base fields.
/// Returns (diag, T) with Tᵗ G T = diag; errors on singular input.
pub fn diagonalize_symmetric(gram: &[Vec<Value>]) -> Result<(Vec<Value>, Vec<Vec<Value>>)> {
    let n = gram.len();
    if n == 0 {
        return Err(Error::NonsingularRequired);
    }
    let field = gram[0][0].field();
    let mut g: Vec<Vec<Value>> = gram.to_vec();
    for row in &g {
        if row.len() != n {
            return Err(Error::NonsingularRequired);
        }
    }
    let mut t: Vec<Vec<Value>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Value::one_of(&field)
                    } else {
                        Value::zero_of(&field)
                    }
                })
                .collect()
        })
        .collect();

    // column operation col_j += c * col_i applied congruently to g, tracked
    // in t
    fn col_op(g: &mut Vec<Vec<Value>>, t: &mut Vec<Vec<Value>>, j: usize, c: &Value, i: usize) {
        let n = g.len();
        for r in 0..n {
            let add = g[r][i].mul(c);
            g[r][j] = g[r][j].add(&add);
        }
        for r in 0..n {
            let add = g[i][r].mul(c);
            g[j][r] = g[j][r].add(&add);
        }
        for r in 0..n {
            let add = t[r][i].mul(c);
            t[r][j] = t[r][j].add(&add);
        }
    }

    fn col_swap(g: &mut Vec<Vec<Value>>, t: &mut Vec<Vec<Value>>, i: usize, j: usize) {
        let n = g.len();
        for r in 0..n {
            g[r].swap(i, j);
        }
        g.swap(i, j);
        for r in 0..n {
            t[r].swap(i, j);
        }
    }

    for k in 0..n {
        if g[k][k].is_zero() {
            // bring a nonzero diagonal entry to position k, or create one
            if let Some(j) = (k + 1..n).find(|&j| !g[j][j].is_zero()) {
                col_swap(&mut g, &mut t, k, j);
            } else if let Some(j) = (k + 1..n).find(|&j| !g[k][j].is_zero()) {
                // with both diagonals zero, e_k += e_j/(2 g_kj) turns the
                // pivot into exactly 1
                let c = g[k][j]
                    .inv()
                    .mul(&Value::from_rat_in(&field, crate::fields::rat::ratq(1, 2)));
                col_op(&mut g, &mut t, k, &c, j);
            } else {
                return Err(Error::SingularForm);
            }
        }
        if g[k][k].is_zero() {
            return Err(Error::SingularForm);
        }
        for j in k + 1..n {
            if !g[k][j].is_zero() {
                let c = g[k][j].div(&g[k][k]).neg();
                col_op(&mut g, &mut t, j, &c, k);
            }
        }
    }
    let diag: Vec<Value> = (0..n).map(|i| g[i][i].clone()).collect();
    if diag.iter().any(|d| d.is_zero()) {
        return Err(Error::SingularForm);
    }
    Ok((diag, t))
}

/// Check Tᵗ G T = Gram(diag entries) exactly.
pub fn verify_congruence(gram: &[Vec<Value>], t: &[Vec<Value>], diag: &[Value]) -> bool {
    let n = gram.len();
    for i in 0..n {
        for j in 0..n {
            let mut acc = Value::zero_of(&diag[0].field());
            for r in 0..n {
                for s in 0..n {
                    acc = acc.add(&t[r][i].mul(&gram[r][s]).mul(&t[s][j]));
                }
            }
            let expect = if i == j {
                diag[i].clone()
            } else {
                Value::zero_of(&diag[0].field())
            };
            if acc != expect {
                return false;
            }
        }
    }
    true
}

pub fn gram_of_diagonal(q: &QuadraticForm) -> Vec<Vec<Value>> {
    let n = q.dim();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        q.entries[i].clone()
                    } else {
                        Value::zero_of(&q.field)
                    }
                })
                .collect()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Hilbert symbols and local squares over ℚ

/// Hilbert symbol at an odd prime, at 2, or at infinity.
pub fn hilbert_symbol(a: &Rat, b: &Rat, place: &QPlace) -> i8 {
    assert!(!a.is_zero() && !b.is_zero());
    match place {
        QPlace::Infinity => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        QPlace::Prime(p) => hilbert_symbol_p(a, b, p),
        QPlace::Dimension => panic!("not a place"),
    }
}

pub fn hilbert_symbol_p(a: &Rat, b: &Rat, p: &BigInt) -> i8 {
    let alpha = padic_val(a, p);
    let beta = padic_val(b, p);
    if *p == BigInt::from(2) {
        let u = unit_part_mod(a, p, 3); // mod 8
        let v = unit_part_mod(b, p, 3);
        let eps = |x: &BigInt| ((x - 1u32) / 2u32).mod_floor(&BigInt::from(2));
        let omega = |x: &BigInt| ((x * x - 1u32) / 8u32).mod_floor(&BigInt::from(2));
        let e = eps(&u) * eps(&v)
            + BigInt::from(alpha) * omega(&v)
            + BigInt::from(beta) * omega(&u);
        if e.mod_floor(&BigInt::from(2)).is_zero() {
            1
        } else {
            -1
        }
    } else {
        let u = unit_part_mod(a, p, 1);
        let v = unit_part_mod(b, p, 1);
        let mut s = 1i8;
        if alpha.rem_euclid(2) == 1 && beta.rem_euclid(2) == 1 {
            // (-1)^((p-1)/2)
            if ((p - 1u32) / 2u32).mod_floor(&BigInt::from(2)).is_one() {
                s = -s;
            }
        }
        if beta.rem_euclid(2) == 1 {
            s *= legendre(&u, p);
        }
        if alpha.rem_euclid(2) == 1 {
            s *= legendre(&v, p);
        }
        s
    }
}

fn hasse_invariant(a: &[Rat], p: &BigInt) -> i8 {
    let mut s = 1i8;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            s *= hilbert_symbol_p(&a[i], &a[j], p);
        }
    }
    s
}

fn is_square_rat_signed(r: &Rat) -> bool {
    !r.is_negative() && sqrt_rat(r).is_some()
}

/// Squareness in ℚ_p for a nonzero rational.
pub fn is_square_in_qp(r: &Rat, p: &BigInt) -> bool {
    let v = padic_val(r, p);
    if v.rem_euclid(2) == 1 {
        return false;
    }
    if *p == BigInt::from(2) {
        unit_part_mod(r, p, 3).is_one()
    } else {
        legendre(&unit_part_mod(r, p, 1), p) == 1
    }
}

// ---------------------------------------------------------------------------
// Isotropy witnesses

/// Vectors x_1,…,x_m (one per copy of q) with Σ q(x_k) = 0, not all zero.
#[derive(Clone, Debug)]
pub struct IsotropyWitness {
    pub copies: usize,
    pub vectors: Vec<Vec<Value>>,
}

impl IsotropyWitness {
    pub fn new(vectors: Vec<Vec<Value>>) -> IsotropyWitness {
        IsotropyWitness {
            copies: vectors.len(),
            vectors,
        }
    }

    pub fn verify(&self, q: &QuadraticForm) -> bool {
        if self.vectors.is_empty() || self.vectors.iter().any(|v| v.len() != q.dim()) {
            return false;
        }
        if self.vectors.iter().all(|v| v.iter().all(|c| c.is_zero())) {
            return false;
        }
        let mut acc = Value::zero_of(&q.field);
        for x in &self.vectors {
            acc = acc.add(&q.eval(x));
        }
        acc.is_zero()
    }

    /// Flat coordinate list (copies × dim entries), the serialization shape.
    pub fn flat(&self) -> Vec<Value> {
        self.vectors.iter().flatten().cloned().collect()
    }

    /// Largest polynomial degree appearing in any coordinate (0 for
    /// rational coordinates).
    pub fn max_coord_degree(&self) -> usize {
        self.vectors
            .iter()
            .flatten()
            .filter_map(|v| v.as_fun())
            .map(|f| f.num.deg_or_zero().max(f.den.deg_or_zero()))
            .max()
            .unwrap_or(0)
    }
}

/// Bounds and budget for the witness search.
#[derive(Clone, Debug)]
pub struct SearchBounds {
    pub max_copies: usize,
    pub degree_bound: usize,
    pub height_bound: u64,
    pub budget_ms: Option<u64>,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_copies: 8,
            degree_bound: 6,
            height_bound: 10_000,
            budget_ms: None,
        }
    }
}

/// Deterministic witness search.  `None` means the bounded search space is
/// exhausted, never that the form is strongly anisotropic.
pub fn witness_search(q: &QuadraticForm, bounds: &SearchBounds) -> Option<IsotropyWitness> {
    match &q.field {
        BaseField::Q => witness_search_q(q, bounds),
        BaseField::FunQ => witness_search_fun(q, bounds),
        BaseField::Nf(_) => witness_search_nf(q, bounds),
    }
}

fn trim_zero_tail(mut vs: Vec<Vec<Value>>, field: &BaseField) -> Vec<Vec<Value>> {
    let _ = field;
    while vs.len() > 1 && vs.last().unwrap().iter().all(|c| c.is_zero()) {
        vs.pop();
    }
    vs
}

/// Over ℚ: pick the first positive and first negative entry; with
/// −a_j = Σ s_k² and a_i = Σ v_k² (four-square decompositions), the copies
/// (s_k e_i + v_k e_j) sum to a_i(−a_j) + a_j(a_i) = 0.
fn witness_search_q(q: &QuadraticForm, bounds: &SearchBounds) -> Option<IsotropyWitness> {
    let a: Vec<Rat> = q.entries.iter().map(|e| e.as_rat().unwrap()).collect();
    let i = a.iter().position(|x| x.is_positive())?;
    let j = a.iter().position(|x| x.is_negative())?;
    // single-copy shortcut when -a_i/a_j is a square
    let ratio = -(&a[i] / &a[j]);
    if let Some(y) = sqrt_rat(&ratio) {
        let mut v = vec![Value::zero_of(&q.field); q.dim()];
        v[i] = Value::rat(Rat::one());
        v[j] = Value::rat(y);
        let w = IsotropyWitness::new(vec![v]);
        debug_assert!(w.verify(q));
        return Some(w);
    }
    let s = four_squares_rat(&-a[j].clone());
    let t = four_squares_rat(&a[i]);
    let mut vectors = vec![];
    for k in 0..4 {
        let mut v = vec![Value::zero_of(&q.field); q.dim()];
        v[i] = Value::rat(s[k].clone());
        v[j] = Value::rat(t[k].clone());
        vectors.push(v);
    }
    let vectors = trim_zero_tail(vectors, &q.field);
    if vectors.len() > bounds.max_copies {
        return None;
    }
    let w = IsotropyWitness::new(vectors);
    debug_assert!(w.verify(q));
    Some(w)
}

/// Number-field forms: only the square-ratio single-copy route (bounded
/// search over number-field coordinates is out of scope).
fn witness_search_nf(q: &QuadraticForm, _bounds: &SearchBounds) -> Option<IsotropyWitness> {
    for i in 0..q.dim() {
        for j in i + 1..q.dim() {
            let ratio = q.entries[i].div(&q.entries[j]).neg();
            if let Some(y) = ratio.sqrt() {
                let mut v = vec![Value::zero_of(&q.field); q.dim()];
                v[i] = Value::one_of(&q.field);
                v[j] = y;
                let w = IsotropyWitness::new(vec![v]);
                if w.verify(q) {
                    return Some(w);
                }
            }
        }
    }
    None
}

fn witness_search_fun(q: &QuadraticForm, bounds: &SearchBounds) -> Option<IsotropyWitness> {
    crate::qforms::funwitness::search(q, bounds)
}

pub mod funwitness;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::poly::QPoly;
    use crate::fields::rat::ratq;

    fn t_poly(cs: &[i64]) -> Value {
        Value::Fun(RatFunc::from_poly(QPoly::from_ints(cs)))
    }

    #[test]
    fn normalization_and_display() {
        let q = QuadraticForm::diagonal(vec![Value::int(12), Value::rat(ratq(-9, 2))]).unwrap();
        assert_eq!(q.entries, vec![Value::int(3), Value::int(-2)]);
        assert_eq!(format!("{q}"), "<3, -2>");
        assert!(QuadraticForm::diagonal(vec![Value::int(0)]).is_err());
        assert!(QuadraticForm::diagonal(vec![]).is_err());
    }

    #[test]
    fn gram_hyperbolic_plane() {
        let z = Value::int(0);
        let o = Value::int(1);
        let gram = vec![vec![z.clone(), o.clone()], vec![o.clone(), z.clone()]];
        let (q, t) = QuadraticForm::from_gram(&gram).unwrap();
        assert!(verify_congruence(
            &gram,
            &t,
            &q.entries.iter().cloned().collect::<Vec<_>>()
        ));
        // square classes <1,-1>
        assert_eq!(q.entries, vec![Value::int(1), Value::int(-1)]);
    }

    #[test]
    fn gram_singular_rejected() {
        let gram = vec![
            vec![Value::int(1), Value::int(1)],
            vec![Value::int(1), Value::int(1)],
        ];
        assert!(QuadraticForm::from_gram(&gram).is_err());
    }

    #[test]
    fn signatures_over_qt() {
        // <1, t, t^2-2, -t(t^2-2)>
        let q = QuadraticForm::diagonal(vec![
            t_poly(&[1]),
            t_poly(&[0, 1]),
            t_poly(&[-2, 0, 1]),
            Value::Fun(
                RatFunc::from_poly(QPoly::from_ints(&[0, 1]))
                    .mul(&RatFunc::from_poly(QPoly::from_ints(&[-2, 0, 1])))
                    .neg(),
            ),
        ])
        .unwrap();
        let sf = q.signature_profile();
        assert_eq!(sf.breakpoints.len(), 3); // -sqrt2, 0, sqrt2
        assert!(sf.max_abs() <= 2);
        assert!(q.is_totally_indefinite());
        assert!(!q.is_torsion());
    }

    #[test]
    fn signature_profile_simple() {
        let q = QuadraticForm::diagonal(vec![t_poly(&[1]), t_poly(&[0, 1])]).unwrap();
        let sf = q.signature_profile();
        assert_eq!(sf.breakpoints.len(), 1);
        let vals: Vec<i64> = sf.samples.iter().map(|(_, s)| *s).collect();
        assert_eq!(vals, vec![0, 0, 2, 2]); // -inf, 0-, 0+, +inf
    }

    #[test]
    fn springer_at_t() {
        let q = QuadraticForm::diagonal(vec![t_poly(&[1]), t_poly(&[0, 1])]).unwrap();
        let v = RealValuation::finite(QPoly::var());
        let s = q.springer_residues(&v).unwrap();
        assert_eq!(s.res1.as_ref().unwrap().entries, vec![Value::int(1)]);
        assert_eq!(s.res2.as_ref().unwrap().entries, vec![Value::int(1)]);
        let (recon, t) = q.springer_reconstruction(&s);
        assert!(verify_congruence(&gram_of_diagonal(&q), &t, &recon.entries));
    }

    #[test]
    fn springer_flagship() {
        // <1, t, t^2-2, -t(t^2-2)> at Finite(t^2-2)
        let p = QPoly::from_ints(&[-2, 0, 1]);
        let q = QuadraticForm::diagonal(vec![
            t_poly(&[1]),
            t_poly(&[0, 1]),
            t_poly(&[-2, 0, 1]),
            Value::Fun(
                RatFunc::from_poly(QPoly::from_ints(&[0, 1]))
                    .mul(&RatFunc::from_poly(p.clone()))
                    .neg(),
            ),
        ])
        .unwrap();
        let v = RealValuation::finite(p);
        let s = q.springer_residues(&v).unwrap();
        let r1 = s.res1.as_ref().unwrap();
        let r2 = s.res2.as_ref().unwrap();
        assert_eq!(r1.dim(), 2);
        assert_eq!(r2.dim(), 2);
        // r1 = <1, theta>, r2 = <1, -theta> up to squares: each definite at
        // exactly one embedding of Q(sqrt 2)
        for r in [r1, r2] {
            let sigs: Vec<i64> = r.all_signatures().iter().map(|(_, s)| *s).collect();
            assert_eq!(sigs.len(), 2);
            assert!(sigs.contains(&2) || sigs.contains(&-2));
            assert!(sigs.iter().any(|s| s.unsigned_abs() < 2));
        }
        let (recon, t) = q.springer_reconstruction(&s);
        assert!(verify_congruence(&gram_of_diagonal(&q), &t, &recon.entries));
    }

    #[test]
    fn hasse_minkowski() {
        assert!(QuadraticForm::from_ints(&[1, 1, -2]).isotropic_over_q());
        assert!(!QuadraticForm::from_ints(&[1, 1, 1]).isotropic_over_q());
        assert!(!QuadraticForm::from_ints(&[1, 1, -7]).isotropic_over_q());
        assert!(QuadraticForm::from_ints(&[1, -2]).q_anisotropy_place().is_none() == false);
        assert!(QuadraticForm::from_ints(&[1, -1]).isotropic_over_q());
        // <1,1,1,1,-7> indefinite dim 5
        assert!(QuadraticForm::from_ints(&[1, 1, 1, 1, -7]).isotropic_over_q());
        // <1,1,-3,-3>: disc 9 square; eps_3 = ?
        let q = QuadraticForm::from_ints(&[1, 1, -3, -3]);
        assert_eq!(q.isotropic_over_q(), q.q_anisotropy_place().is_none());
    }

    #[test]
    fn hilbert_symbols() {
        let p = |n: i64| QPlace::Prime(BigInt::from(n));
        assert_eq!(hilbert_symbol(&rat(-1), &rat(-1), &QPlace::Infinity), -1);
        assert_eq!(hilbert_symbol(&rat(1), &rat(7), &p(7)), 1);
        assert_eq!(hilbert_symbol(&rat(-1), &rat(-1), &p(2)), -1);
        assert_eq!(hilbert_symbol(&rat(2), &rat(3), &p(3)), -1);
        assert_eq!(hilbert_symbol(&rat(3), &rat(3), &p(3)), hilbert_symbol(&rat(-1), &rat(3), &p(3)));
        // bilinearity spot check
        for (a, b1, b2) in [(3i64, 5i64, 7i64), (-2, 6, 10), (15, -21, 2)] {
            for pl in [p(2), p(3), p(5), p(7), QPlace::Infinity] {
                let lhs = hilbert_symbol(&rat(a), &rat(b1 * b2), &pl);
                let rhs =
                    hilbert_symbol(&rat(a), &rat(b1), &pl) * hilbert_symbol(&rat(a), &rat(b2), &pl);
                assert_eq!(lhs, rhs, "a={a} b1={b1} b2={b2} at {pl:?}");
            }
        }
    }

    #[test]
    fn witnesses_over_q() {
        let q = QuadraticForm::from_ints(&[1, -1]);
        let w = witness_search(&q, &SearchBounds::default()).unwrap();
        assert_eq!(w.copies, 1);
        assert_eq!(w.vectors[0], vec![Value::int(1), Value::int(1)]);
        assert!(w.verify(&q));

        let q = QuadraticForm::from_ints(&[1, -2]);
        let w = witness_search(&q, &SearchBounds::default()).unwrap();
        assert_eq!(w.copies, 2);
        assert_eq!(
            w.flat(),
            vec![Value::int(1), Value::int(1), Value::int(1), Value::int(0)]
        );
        assert!(w.verify(&q));

        assert!(witness_search(&QuadraticForm::from_ints(&[1, 1]), &SearchBounds::default())
            .is_none());
    }

    #[test]
    fn tensor_and_sum_signatures() {
        let a = QuadraticForm::from_ints(&[1, -2, 3]);
        let b = QuadraticForm::from_ints(&[5, -7]);
        let p = OrderingPt::QReal;
        assert_eq!(
            a.orth_sum(&b).unwrap().signature(&p),
            a.signature(&p) + b.signature(&p)
        );
        assert_eq!(
            a.tensor(&b).unwrap().signature(&p),
            a.signature(&p) * b.signature(&p)
        );
    }
}
