//! Factorization of univariate polynomials over ℚ.
//!
//! Classical Zassenhaus pipeline: squarefree decomposition, factorization
//! modulo a well-chosen small prime (Cantor–Zassenhaus), Hensel lifting of
//! the modular factors past the Landau–Mignotte coefficient bound, and
//! subset recombination with trial division over ℤ.

use super::poly::QPoly;
use super::rat::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Monic irreducible factors over ℚ with multiplicities, plus the rational
/// constant in front: `f = c * prod(p_i ^ e_i)`.
pub fn factor_qpoly(f: &QPoly) -> (Rat, Vec<(QPoly, usize)>) {
    assert!(!f.is_zero(), "factorization of the zero polynomial");
    if f.is_constant() {
        return (f.coeffs[0].clone(), vec![]);
    }
    let lead = f.leading().unwrap().clone();
    let monic = f.monic();
    // squarefree decomposition by iterated gcd
    let mut out: Vec<(QPoly, usize)> = vec![];
    let mut rest = monic;
    let mut mult = 1usize;
    loop {
        let g = rest.gcd(&rest.derivative());
        let sf = rest.div_exact(&g); // product of distinct primes of rest
        if sf.is_constant() {
            break;
        }
        // primes in sf but not in g have exact multiplicity `mult` in the
        // original; peel one squarefree layer at a time
        let layer = if g.is_constant() {
            sf.clone()
        } else {
            sf.div_exact(&sf.gcd(&g))
        };
        if !layer.is_constant() {
            for p in factor_squarefree(&layer) {
                out.push((p, mult));
            }
        }
        if g.is_constant() {
            break;
        }
        rest = g;
        mult += 1;
    }
    (lead, out)
}

/// Irreducibility over ℚ (degree ≥ 1 required).
pub fn is_irreducible(f: &QPoly) -> bool {
    match f.degree() {
        None | Some(0) => false,
        Some(1) => true,
        _ => {
            let (_, fs) = factor_qpoly(f);
            fs.len() == 1 && fs[0].1 == 1 && fs[0].0.deg_or_zero() == f.deg_or_zero()
        }
    }
}

/// Factor a monic squarefree rational polynomial into monic irreducibles.
fn factor_squarefree(f: &QPoly) -> Vec<QPoly> {
    let deg = f.deg_or_zero();
    if deg == 1 {
        return vec![f.clone()];
    }
    // clear denominators: primitive integer polynomial
    let zf = to_zpoly(f);
    let factors = factor_squarefree_z(&zf);
    factors
        .into_iter()
        .map(|zp| from_zpoly(&zp).monic())
        .collect()
}

type ZPoly = Vec<BigInt>; // constant term first, leading nonzero

fn to_zpoly(f: &QPoly) -> ZPoly {
    let mut den = BigInt::one();
    for c in &f.coeffs {
        den = den.lcm(c.denom());
    }
    let mut out: ZPoly = f
        .coeffs
        .iter()
        .map(|c| c.numer() * (&den / c.denom()))
        .collect();
    // primitive part
    let mut g = BigInt::zero();
    for c in &out {
        g = g.gcd(c);
    }
    if !g.is_zero() && !g.is_one() {
        for c in out.iter_mut() {
            *c /= &g;
        }
    }
    out
}

fn from_zpoly(z: &ZPoly) -> QPoly {
    QPoly::new(z.iter().map(|c| Rat::from_integer(c.clone())).collect())
}

fn zdeg(z: &ZPoly) -> usize {
    z.len() - 1
}

/// Squarefree primitive integer polynomial -> irreducible integer factors
/// (primitive, positive leading coefficient), in some order.
fn factor_squarefree_z(f: &ZPoly) -> Vec<ZPoly> {
    let n = zdeg(f);
    if n <= 1 {
        return vec![f.clone()];
    }
    // pick a prime not dividing lc with f squarefree mod p
    let mut p: u64 = 3;
    let (p, modular) = loop {
        p = next_prime(p);
        if (f.last().unwrap() % p).is_zero() {
            continue;
        }
        let fp = reduce_mod(f, p);
        if gf_gcd(&fp, &gf_derivative(&fp, p), p).len() == 1 {
            break (p, gf_factor(&fp, p));
        }
    };
    if modular.len() == 1 {
        return vec![f.clone()];
    }
    // Hensel lift the modular factorization past the Mignotte bound
    let bound = mignotte_bound(f);
    let mut pk = BigInt::from(p);
    let mut k = 1u32;
    while pk <= &bound * 2 {
        pk *= p;
        k += 1;
    }
    let lifted = hensel_lift_factors(f, &modular, p, k);
    let big_p = pk;
    // subset recombination
    recombine(f, lifted, &big_p)
}

fn mignotte_bound(f: &ZPoly) -> BigInt {
    // |coeff of any factor| <= 2^n * ||f||_2 * |lc|
    let n = zdeg(f);
    let norm2_sq: BigInt = f.iter().map(|c| c * c).sum();
    let norm = norm2_sq.sqrt() + 1;
    (BigInt::one() << (n as u32 + 1)) * norm * f.last().unwrap().abs()
}

fn recombine(f: &ZPoly, lifted: Vec<ZPoly>, big_p: &BigInt) -> Vec<ZPoly> {
    let mut rest = f.clone();
    let mut avail: Vec<ZPoly> = lifted;
    let mut out = vec![];
    let mut size = 1usize;
    'outer: while 2 * size <= avail.len() {
        // all subsets of the available modular factors of this cardinality
        let idxs: Vec<usize> = (0..avail.len()).collect();
        let mut combo = (0..size).collect::<Vec<usize>>();
        loop {
            // candidate = lc(rest) * prod(subset) mod p^k, symmetric lift
            let mut cand: ZPoly = vec![rest.last().unwrap().mod_floor(big_p)];
            for &i in &combo {
                cand = zmul_mod(&cand, &avail[idxs[i]], big_p);
            }
            symmetric_lift(&mut cand, big_p);
            let cand = primitive_part(&cand);
            if let Some(quot) = zdiv_exact(&rest, &cand) {
                out.push(cand);
                rest = quot;
                let removed: Vec<usize> = combo.iter().map(|&i| idxs[i]).collect();
                avail = avail
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !removed.contains(i))
                    .map(|(_, v)| v)
                    .collect();
                continue 'outer;
            }
            // next combination
            let mut i = size;
            loop {
                if i == 0 {
                    size += 1;
                    continue 'outer;
                }
                i -= 1;
                if combo[i] != i + idxs.len() - size {
                    combo[i] += 1;
                    for j in i + 1..size {
                        combo[j] = combo[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
    if zdeg(&rest) > 0 {
        out.push(primitive_part(&rest));
    }
    out
}

fn primitive_part(z: &ZPoly) -> ZPoly {
    let mut g = BigInt::zero();
    for c in z {
        g = g.gcd(c);
    }
    let mut out: ZPoly = z.iter().map(|c| c / &g).collect();
    if out.last().unwrap().is_negative() {
        for c in out.iter_mut() {
            *c = -&*c;
        }
    }
    out
}

fn symmetric_lift(z: &mut ZPoly, m: &BigInt) {
    let half = m / 2;
    for c in z.iter_mut() {
        let mut r = c.mod_floor(m);
        if r > half {
            r -= m;
        }
        *c = r;
    }
}

fn zmul_mod(a: &ZPoly, b: &ZPoly, m: &BigInt) -> ZPoly {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (&out[i + j] + x * y).mod_floor(m);
        }
    }
    while out.len() > 1 && out.last().unwrap().is_zero() {
        out.pop();
    }
    out
}

/// Exact division over ℤ (returns None when not divisible).
fn zdiv_exact(f: &ZPoly, d: &ZPoly) -> Option<ZPoly> {
    if zdeg(d) > zdeg(f) {
        return None;
    }
    let mut rem = f.clone();
    let dl = d.last().unwrap();
    let mut quot = vec![BigInt::zero(); zdeg(f) - zdeg(d) + 1];
    for i in (zdeg(d)..=zdeg(f)).rev() {
        let c = &rem[i];
        if c.is_zero() {
            continue;
        }
        let (q, r) = c.div_rem(dl);
        if !r.is_zero() {
            return None;
        }
        for j in 0..d.len() {
            let t = &q * &d[j];
            rem[i - zdeg(d) + j] -= t;
        }
        quot[i - zdeg(d)] = q;
    }
    if rem.iter().all(|c| c.is_zero()) {
        while quot.len() > 1 && quot.last().unwrap().is_zero() {
            quot.pop();
        }
        Some(quot)
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// arithmetic in GF(p)[x], p < 2^31, coefficients as u64
// ---------------------------------------------------------------------------

type FPoly = Vec<u64>; // constant first, leading nonzero (except [0] = zero)

fn next_prime(n: u64) -> u64 {
    let mut c = n + 2;
    'outer: loop {
        let mut d = 3;
        while d * d <= c {
            if c % d == 0 {
                c += 2;
                continue 'outer;
            }
            d += 2;
        }
        return c;
    }
}

fn reduce_mod(f: &ZPoly, p: u64) -> FPoly {
    let bp = BigInt::from(p);
    let mut out: FPoly = f
        .iter()
        .map(|c| c.mod_floor(&bp).to_u64().unwrap())
        .collect();
    gf_trim(&mut out);
    out
}

fn gf_trim(f: &mut FPoly) {
    while f.len() > 1 && *f.last().unwrap() == 0 {
        f.pop();
    }
    if f.is_empty() {
        f.push(0);
    }
}

fn gf_is_zero(f: &FPoly) -> bool {
    f.len() == 1 && f[0] == 0
}

fn gf_deg(f: &FPoly) -> usize {
    f.len() - 1
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

fn gf_mul(a: &FPoly, b: &FPoly, p: u64) -> FPoly {
    if gf_is_zero(a) || gf_is_zero(b) {
        return vec![0];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
        }
    }
    gf_trim(&mut out);
    out
}


fn gf_sub(a: &FPoly, b: &FPoly, p: u64) -> FPoly {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out[i] = (x + p - y) % p;
    }
    gf_trim(&mut out);
    out
}

fn gf_div_rem(a: &FPoly, d: &FPoly, p: u64) -> (FPoly, FPoly) {
    assert!(!gf_is_zero(d));
    if gf_deg(a) < gf_deg(d) || gf_is_zero(a) {
        return (vec![0], a.clone());
    }
    let mut rem = a.clone();
    let dl_inv = invmod(*d.last().unwrap(), p);
    let dd = gf_deg(d);
    let mut quot = vec![0u64; gf_deg(a) - dd + 1];
    for i in (dd..rem.len()).rev() {
        if rem[i] == 0 {
            continue;
        }
        let q = mulmod(rem[i], dl_inv, p);
        for j in 0..=dd {
            let t = mulmod(q, d[j], p);
            rem[i - dd + j] = (rem[i - dd + j] + p - t) % p;
        }
        quot[i - dd] = q;
    }
    gf_trim(&mut rem);
    gf_trim(&mut quot);
    (quot, rem)
}

fn gf_monic(f: &FPoly, p: u64) -> FPoly {
    let l = *f.last().unwrap();
    if l == 0 || l == 1 {
        return f.clone();
    }
    let li = invmod(l, p);
    let mut out: FPoly = f.iter().map(|&c| mulmod(c, li, p)).collect();
    gf_trim(&mut out);
    out
}

fn gf_gcd(a: &FPoly, b: &FPoly, p: u64) -> FPoly {
    let mut x = a.clone();
    let mut y = b.clone();
    while !gf_is_zero(&y) {
        let r = gf_div_rem(&x, &y, p).1;
        x = y;
        y = r;
    }
    gf_monic(&x, p)
}

fn gf_derivative(f: &FPoly, p: u64) -> FPoly {
    if f.len() <= 1 {
        return vec![0];
    }
    let mut out = Vec::with_capacity(f.len() - 1);
    for (i, &c) in f.iter().enumerate().skip(1) {
        out.push(mulmod(c, (i as u64) % p, p));
    }
    gf_trim(&mut out);
    out
}

fn gf_powmod_poly(base: &FPoly, mut e: BigInt, m: &FPoly, p: u64) -> FPoly {
    let mut r = vec![1u64];
    let mut b = gf_div_rem(base, m, p).1;
    while e.is_positive() {
        if e.is_odd() {
            r = gf_div_rem(&gf_mul(&r, &b, p), m, p).1;
        }
        b = gf_div_rem(&gf_mul(&b, &b, p), m, p).1;
        e >>= 1;
    }
    r
}

/// Factor a monic squarefree polynomial over GF(p) into monic irreducibles.
fn gf_factor(f: &FPoly, p: u64) -> Vec<FPoly> {
    let f = gf_monic(f, p);
    let mut out = vec![];
    // distinct-degree
    let mut rest = f;
    let mut d = 1usize;
    let x = vec![0u64, 1];
    let mut h = x.clone();
    while 2 * d <= gf_deg(&rest) {
        h = gf_powmod_poly(&h, BigInt::from(p), &rest, p);
        let g = gf_gcd(&gf_sub(&h, &x, p), &rest, p);
        if gf_deg(&g) > 0 {
            out.extend(gf_equal_degree(&g, d, p));
            rest = gf_div_rem(&rest, &g, p).0;
            h = gf_div_rem(&h, &rest, p).1;
        }
        d += 1;
    }
    if gf_deg(&rest) > 0 {
        out.push(rest);
    }
    out
}

/// Cantor–Zassenhaus equal-degree splitting (p odd).
fn gf_equal_degree(f: &FPoly, d: usize, p: u64) -> Vec<FPoly> {
    if gf_deg(f) == d {
        return vec![f.clone()];
    }
    let mut rng = StdRng::seed_from_u64(0x5eed ^ (p.wrapping_mul(31)) ^ d as u64);
    let e: BigInt = (BigInt::from(p).pow(d as u32) - 1) / 2;
    loop {
        // random polynomial of degree < deg f
        let mut a: FPoly = (0..gf_deg(f))
            .map(|_| rng.gen_range(0..p))
            .collect();
        gf_trim(&mut a);
        if gf_deg(&a) == 0 {
            continue;
        }
        let g = gf_gcd(&a, f, p);
        if gf_deg(&g) > 0 && gf_deg(&g) < gf_deg(f) {
            let q = gf_div_rem(f, &g, p).0;
            let mut out = gf_equal_degree(&g, d, p);
            out.extend(gf_equal_degree(&q, d, p));
            return out;
        }
        let b = gf_powmod_poly(&a, e.clone(), f, p);
        let b1 = gf_sub(&b, &vec![1u64], p);
        let g = gf_gcd(&b1, f, p);
        if gf_deg(&g) > 0 && gf_deg(&g) < gf_deg(f) {
            let q = gf_div_rem(f, &g, p).0;
            let mut out = gf_equal_degree(&g, d, p);
            out.extend(gf_equal_degree(&q, d, p));
            return out;
        }
    }
}

// ---------------------------------------------------------------------------
// Hensel lifting of a modular factorization
// ---------------------------------------------------------------------------

/// Lift a factorization of (monic image of) f modulo p to modulo p^k.
/// Returns monic factors modulo p^k whose product is congruent to the monic
/// image of f.
fn hensel_lift_factors(f: &ZPoly, modular: &[FPoly], p: u64, k: u32) -> Vec<ZPoly> {
    // work with the monic image of f mod p^k: multiply by lc^{-1} mod p^k
    let pk = BigInt::from(p).pow(k);
    let lc_inv = mod_inv_big(f.last().unwrap(), &pk);
    let fm: ZPoly = f
        .iter()
        .map(|c| (c * &lc_inv).mod_floor(&pk))
        .collect();
    // iterate: lift each factor in turn against the product of the others
    // using a simple linear Hensel step per prime power
    let mut factors: Vec<ZPoly> = modular
        .iter()
        .map(|g| g.iter().map(|&c| BigInt::from(c)).collect())
        .collect();
    let mut modulus = BigInt::from(p);
    while modulus < pk {
        let next = (&modulus * p).min(pk.clone());
        factors = lift_step(&fm, &factors, &modulus, &next, p);
        modulus = next;
    }
    factors
}

/// One linear lifting step: given monic g_i with prod g_i = f mod m
/// (m a power of p), produce monic lifts mod m2 = m*p.  The correction
/// deltas are solved modulo the prime p itself, so every inversion happens
/// in a field.
fn lift_step(f: &ZPoly, factors: &[ZPoly], m: &BigInt, m2: &BigInt, p: u64) -> Vec<ZPoly> {
    // error e = f - prod(factors) mod m2; e = m * d
    let mut prod: ZPoly = vec![BigInt::one()];
    for g in factors {
        prod = zmul_mod(&prod, g, m2);
    }
    let mut e: Vec<BigInt> = vec![BigInt::zero(); f.len().max(prod.len())];
    for (i, s) in e.iter_mut().enumerate() {
        let a = f.get(i).cloned().unwrap_or_default();
        let b = prod.get(i).cloned().unwrap_or_default();
        *s = (a - b).mod_floor(m2);
    }
    // solve sum_i (delta_i * prod_{j != i} g_j) = e/m mod p, deg delta_i <
    // deg g_i, via delta_i = (e/m) * (prod_{j != i} g_j)^{-1} mod (g_i, p)
    let pb = BigInt::from(p);
    let d: Vec<BigInt> = e.iter().map(|c| (c / m).mod_floor(&pb)).collect();
    let mut out = vec![];
    for (i, g) in factors.iter().enumerate() {
        // h = prod_{j != i} g_j mod (p, g)
        let mut h: ZPoly = vec![BigInt::one()];
        for (j, gj) in factors.iter().enumerate() {
            if j != i {
                h = zmul_mod(&h, gj, &pb);
            }
        }
        let hg = zpoly_mod_poly(&h, g, &pb);
        let hinv = zpoly_inv_mod(&hg, g, &pb);
        let dmod = zpoly_mod_poly(&d, g, &pb);
        let delta = zpoly_mod_poly(&zmul_mod(&dmod, &hinv, &pb), g, &pb);
        // g_new = g + m * delta (stays monic: deg delta < deg g)
        let mut gn = g.clone();
        while gn.len() < g.len() {
            gn.push(BigInt::zero());
        }
        for (idx, c) in delta.iter().enumerate() {
            gn[idx] = (&gn[idx] + m * c).mod_floor(m2);
        }
        out.push(gn);
    }
    out
}

/// Reduce a mod (g, m) where g is monic mod m.
fn zpoly_mod_poly(a: &ZPoly, g: &ZPoly, m: &BigInt) -> ZPoly {
    let mut rem: Vec<BigInt> = a.iter().map(|c| c.mod_floor(m)).collect();
    let dg = g.len() - 1;
    while rem.len() > dg.max(1) && rem.len() > dg {
        let i = rem.len() - 1;
        let c = rem[i].clone();
        if !c.is_zero() {
            for j in 0..dg {
                rem[i - dg + j] = (&rem[i - dg + j] - &c * &g[j]).mod_floor(m);
            }
        }
        rem.pop();
    }
    while rem.len() > 1 && rem.last().unwrap().is_zero() {
        rem.pop();
    }
    if rem.is_empty() {
        rem.push(BigInt::zero());
    }
    rem
}

/// Inverse of a modulo (g, m) with g monic, gcd(a, g) = 1 mod the prime
/// dividing m.  m is a prime here (linear lifting keeps deltas mod p).
fn zpoly_inv_mod(a: &ZPoly, g: &ZPoly, m: &BigInt) -> ZPoly {
    // extended Euclid over Z/m (m prime)
    let mut r0 = g.clone();
    let mut r1 = a.to_vec();
    let mut t0: ZPoly = vec![BigInt::zero()];
    let mut t1: ZPoly = vec![BigInt::one()];
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = zpoly_div_rem_modp(&r0, &r1, m);
        let qt = zmul_mod(&q, &t1, m);
        let mut t: Vec<BigInt> = vec![BigInt::zero(); t0.len().max(qt.len())];
        for (i, s) in t.iter_mut().enumerate() {
            let x = t0.get(i).cloned().unwrap_or_default();
            let y = qt.get(i).cloned().unwrap_or_default();
            *s = (x - y).mod_floor(m);
        }
        while t.len() > 1 && t.last().unwrap().is_zero() {
            t.pop();
        }
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t;
    }
    // r0 is a nonzero constant gcd; scale
    let c_inv = mod_inv_big(&r0[0], m);
    t0.iter().map(|c| (c * &c_inv).mod_floor(m)).collect()
}

fn zpoly_div_rem_modp(a: &ZPoly, d: &ZPoly, m: &BigInt) -> (ZPoly, ZPoly) {
    let dd = d.len() - 1;
    if a.len() - 1 < dd || (a.len() == 1 && a[0].is_zero()) {
        return (vec![BigInt::zero()], a.clone());
    }
    let mut rem: Vec<BigInt> = a.iter().map(|c| c.mod_floor(m)).collect();
    let dl_inv = mod_inv_big(d.last().unwrap(), m);
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        let q = (&c * &dl_inv).mod_floor(m);
        for j in 0..=dd {
            rem[i - dd + j] = (&rem[i - dd + j] - &q * &d[j]).mod_floor(m);
        }
        quot[i - dd] = q;
    }
    while rem.len() > 1 && rem.last().unwrap().is_zero() {
        rem.pop();
    }
    while quot.len() > 1 && quot.last().unwrap().is_zero() {
        quot.pop();
    }
    (quot, rem)
}

fn mod_inv_big(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    assert!(e.gcd.is_one(), "non-invertible element in Hensel lift");
    e.x.mod_floor(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> QPoly {
        QPoly::from_ints(cs)
    }

    #[test]
    fn factors_product_of_irreducibles() {
        // (t^2 - 2)(t + 1)
        let f = p(&[-2, 0, 1]).mul(&p(&[1, 1]));
        let (_, fs) = factor_qpoly(&f);
        assert_eq!(fs.len(), 2);
        let degs: Vec<usize> = fs.iter().map(|(g, _)| g.deg_or_zero()).collect();
        assert!(degs.contains(&1) && degs.contains(&2));
    }

    #[test]
    fn factors_with_multiplicity() {
        // t^2 (t^2 + 1)^2 (t - 3)
        let f = p(&[0, 1]).pow(2).mul(&p(&[1, 0, 1]).pow(2)).mul(&p(&[-3, 1]));
        let (_, fs) = factor_qpoly(&f);
        let mut found = 0;
        for (g, e) in &fs {
            match g.deg_or_zero() {
                1 => {
                    assert!(*e == 2 || *e == 1);
                    found += 1;
                }
                2 => {
                    assert_eq!(*e, 2);
                    found += 1;
                }
                _ => panic!("unexpected factor"),
            }
        }
        assert_eq!(found, 3);
    }

    #[test]
    fn irreducibility() {
        assert!(is_irreducible(&p(&[-2, 0, 1])));
        assert!(is_irreducible(&p(&[1, 0, 1])));
        assert!(is_irreducible(&p(&[1, 1])));
        assert!(!is_irreducible(&p(&[-1, 0, 1]))); // (t-1)(t+1)
        assert!(!is_irreducible(&p(&[0, 0, 1]))); // t^2
        // x^4 + 1 is irreducible over Q but splits mod every prime
        assert!(is_irreducible(&p(&[1, 0, 0, 0, 1])));
        // x^4 - 4 = (x^2-2)(x^2+2)
        assert!(!is_irreducible(&p(&[-4, 0, 0, 0, 1])));
    }

    #[test]
    fn factors_reconstruct() {
        let f = p(&[-6, 11, -6, 1]); // (t-1)(t-2)(t-3)
        let (c, fs) = factor_qpoly(&f);
        let mut prod = QPoly::constant(c);
        for (g, e) in &fs {
            prod = prod.mul(&g.pow(*e));
        }
        assert_eq!(prod, f);
        assert_eq!(fs.len(), 3);
    }

    #[test]
    fn big_swinnerton_dyer_style() {
        // (x^2-2)(x^2-3)(x^2-6): recombination has to assemble quadratics
        let f = p(&[-2, 0, 1]).mul(&p(&[-3, 0, 1])).mul(&p(&[-6, 0, 1]));
        let (_, fs) = factor_qpoly(&f);
        assert_eq!(fs.len(), 3);
        for (g, e) in fs {
            assert_eq!(e, 1);
            assert_eq!(g.deg_or_zero(), 2);
        }
    }
}
