//! Arbitrary-precision rationals and the integer utilities built on them.

use num_bigint::BigInt;
use num_integer::Integer;
#[allow(unused_imports)]
use num_traits::ToPrimitive;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number; `num_rational` keeps gcd(num, den) = 1 and den > 0.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratq(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn sign_rat(r: &Rat) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Floor of the square root of a nonnegative integer.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative());
    n.sqrt()
}

pub fn is_square_int(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Squarefree part of a nonzero integer: the unique squarefree `s` with
/// `n = s * m^2`.  Sign is preserved.  Trial division; inputs here stay
/// small (entry heights are bounded in every workflow).
pub fn squarefree_part(n: &BigInt) -> BigInt {
    assert!(!n.is_zero());
    let neg = n.is_negative();
    let mut m = n.abs();
    let mut s = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        let mut e = 0u32;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        if e % 2 == 1 {
            s *= &p;
        }
        p += 1;
    }
    s *= m; // leftover prime
    if neg {
        -s
    } else {
        s
    }
}

/// Square-class representative of a nonzero rational: the squarefree integer
/// `s` with `r = s * q^2` for some rational `q`.
pub fn square_class(r: &Rat) -> BigInt {
    assert!(!r.is_zero());
    squarefree_part(&(r.numer() * r.denom()))
}

pub fn is_square_rat(r: &Rat) -> bool {
    !r.is_negative() && is_square_int(r.numer()) && is_square_int(r.denom())
}

/// Exact square root of a rational, if it is a square.
pub fn sqrt_rat(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &n * &n == *r.numer() && &d * &d == *r.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

/// Lagrange decomposition of a nonnegative integer into four squares.
///
/// Greedy descent on the largest square; the inner two-square step is a
/// direct scan.  Fine for the bounded heights that occur in witness
/// construction.
pub fn four_squares(n: &BigInt) -> [BigInt; 4] {
    assert!(!n.is_negative());
    if n.is_zero() {
        return [BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero()];
    }
    let mut a = isqrt(n);
    while a.is_positive() || (&a * &a == *n) {
        let m = n - &a * &a;
        if let Some([b, c, d]) = three_squares(&m) {
            return [a, b, c, d];
        }
        a -= 1;
        if a.is_negative() {
            break;
        }
    }
    unreachable!("four-square theorem")
}

fn three_squares(n: &BigInt) -> Option<[BigInt; 3]> {
    if n.is_zero() {
        return Some([BigInt::zero(), BigInt::zero(), BigInt::zero()]);
    }
    // Legendre: 4^a(8b+7) is not a sum of three squares; reject without
    // scanning (the scan below is linear in n when no solution exists).
    let four = BigInt::from(4);
    let mut m = n.clone();
    while (&m % &four).is_zero() {
        m /= &four;
    }
    if &m % BigInt::from(8) == BigInt::from(7) {
        return None;
    }
    let mut b = isqrt(n);
    while !b.is_negative() {
        let m = n - &b * &b;
        if let Some((c, d)) = two_squares(&m) {
            return Some([b, c, d]);
        }
        b -= 1;
    }
    None
}

fn two_squares(n: &BigInt) -> Option<(BigInt, BigInt)> {
    if n.is_zero() {
        return Some((BigInt::zero(), BigInt::zero()));
    }
    let mut c = isqrt(n);
    let two = BigInt::from(2);
    // only scan c with c^2 >= n/2
    while &c * &c * &two >= *n {
        let m = n - &c * &c;
        if is_square_int(&m) {
            return Some((c, m.sqrt()));
        }
        c -= 1;
    }
    None
}

/// Four-square decomposition of a nonnegative rational: returns `[a,b,c,d]`
/// with `r = a^2 + b^2 + c^2 + d^2`.
pub fn four_squares_rat(r: &Rat) -> [Rat; 4] {
    assert!(!r.is_negative());
    // r = p/q = p*q / q^2
    let pq = r.numer() * r.denom();
    let sq = four_squares(&pq);
    let den = r.denom().clone();
    sq.map(|x| Rat::new(x, den.clone()))
}

/// Decomposition of a nonnegative integer into as few squares as possible
/// (zero squares for 0, up to four in general), nonzero entries only.
pub fn min_squares(n: &BigInt) -> Vec<BigInt> {
    if n.is_zero() {
        return vec![];
    }
    if is_square_int(n) {
        return vec![n.sqrt()];
    }
    // The two- and three-square scans are O(sqrt(n)) when no decomposition
    // exists; for big inputs go straight to the greedy four-square descent,
    // which only scans small remainders.
    if n <= &BigInt::from(10_000_000_000u64) {
        if let Some((a, b)) = two_squares(n) {
            return [a, b].into_iter().filter(|x| !x.is_zero()).collect();
        }
        if let Some([a, b, c]) = three_squares(n) {
            return [a, b, c].into_iter().filter(|x| !x.is_zero()).collect();
        }
    }
    four_squares(n)
        .into_iter()
        .filter(|x| !x.is_zero())
        .collect()
}

/// Size-guarded [`min_squares_rat`]: declines when the integer to
/// decompose is too large for the scan-based search to finish quickly.
pub fn min_squares_rat_bounded(r: &Rat) -> Option<Vec<Rat>> {
    let pq = r.numer() * r.denom();
    if pq.bits() > 48 {
        return None;
    }
    Some(min_squares_rat(r))
}

/// Minimal-count square decomposition of a nonnegative rational.
pub fn min_squares_rat(r: &Rat) -> Vec<Rat> {
    assert!(!r.is_negative());
    let pq = r.numer() * r.denom();
    let den = r.denom().clone();
    min_squares(&pq)
        .into_iter()
        .map(|x| Rat::new(x, den.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree_parts() {
        assert_eq!(squarefree_part(&BigInt::from(12)), BigInt::from(3));
        assert_eq!(squarefree_part(&BigInt::from(-18)), BigInt::from(-2));
        assert_eq!(squarefree_part(&BigInt::from(1)), BigInt::from(1));
        assert_eq!(squarefree_part(&BigInt::from(49)), BigInt::from(1));
    }

    #[test]
    fn square_class_of_rational() {
        assert_eq!(square_class(&ratq(8, 9)), BigInt::from(2));
        assert_eq!(square_class(&ratq(-1, 2)), BigInt::from(-2));
    }

    #[test]
    fn four_square_sums() {
        for n in [1i64, 2, 3, 7, 15, 28, 310, 9999, 123456] {
            let n = BigInt::from(n);
            let [a, b, c, d] = four_squares(&n);
            assert_eq!(&a * &a + &b * &b + &c * &c + &d * &d, n);
        }
    }

    #[test]
    fn four_square_rational() {
        let r = ratq(7, 3);
        let s = four_squares_rat(&r);
        let total: Rat = s.iter().map(|x| x * x).sum();
        assert_eq!(total, r);
    }
}

/// Trial-division prime factorization of a nonzero integer (absolute value).
pub fn prime_factors(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    assert!(!n.is_zero());
    let mut out: Vec<(BigInt, u32)> = vec![];
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let mut e = 0u32;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

/// Odd primes dividing numerator or denominator, plus 2, for a list of
/// nonzero rationals: the relevant places of a Hasse-Minkowski check.
pub fn relevant_primes(entries: &[Rat]) -> Vec<BigInt> {
    let mut ps = vec![BigInt::from(2)];
    for r in entries {
        for part in [r.numer().clone(), r.denom().clone()] {
            for (p, _) in prime_factors(&part) {
                if !ps.contains(&p) {
                    ps.push(p.clone());
                }
            }
        }
    }
    ps.sort();
    ps
}

/// p-adic valuation of a nonzero rational.
pub fn padic_val(r: &Rat, p: &BigInt) -> i64 {
    assert!(!r.is_zero());
    let vn = int_val(r.numer(), p);
    let vd = int_val(r.denom(), p);
    vn - vd
}

fn int_val(n: &BigInt, p: &BigInt) -> i64 {
    let mut n = n.abs();
    let mut v = 0;
    while (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    v
}

/// The p-adic unit part of r as a residue mod p^k (numerator times inverse
/// denominator after stripping p powers).
pub fn unit_part_mod(r: &Rat, p: &BigInt, k: u32) -> BigInt {
    let v = padic_val(r, p);
    let pk = p.pow(k);
    let strip = |mut n: BigInt| {
        while (&n % p).is_zero() {
            n /= p;
        }
        n
    };
    let un = strip(r.numer().clone()).mod_floor(&pk);
    let ud = strip(r.denom().clone()).mod_floor(&pk);
    let _ = v;
    (un * modinv(&ud, &pk)).mod_floor(&pk)
}

/// Modular inverse for gcd(a, m) = 1.
pub fn modinv(a: &BigInt, m: &BigInt) -> BigInt {
    let e = BigInt::extended_gcd(&a.mod_floor(m), m);
    assert!(e.gcd.is_one(), "not invertible");
    e.x.mod_floor(m)
}

/// Legendre symbol (a/p) for odd prime p, a not divisible by p.
pub fn legendre(a: &BigInt, p: &BigInt) -> i8 {
    let e = (p - 1u32) / 2u32;
    let r = a.mod_floor(p).modpow(&e, p);
    if r.is_one() {
        1
    } else if r.is_zero() {
        0
    } else {
        -1
    }
}
