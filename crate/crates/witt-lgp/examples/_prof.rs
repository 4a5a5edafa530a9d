use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;
use witt_lgp::fields::poly::QPoly;

use witt_lgp::fields::ratfunc::RatFunc;
use witt_lgp::fields::value::Value;
use witt_lgp::lgp::{bp_quadratic, Decision};
use witt_lgp::qforms::{QuadraticForm, SearchBounds};

fn random_funq_entry(rng: &mut ChaCha8Rng, max_deg: usize, height: i64) -> Value {
    loop {
        let deg = rng.gen_range(0..=max_deg);
        let coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-height..=height)).collect();
        let p = QPoly::from_ints(&coeffs);
        if !p.is_zero() {
            return Value::Fun(RatFunc::from_poly(p));
        }
    }
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(1202);
    let bounds = SearchBounds::default();
    let mut positives = 0usize;
    let mut attempts = 0usize;
    let t0 = Instant::now();
    while positives < 100 && attempts < 2000 {
        attempts += 1;
        let dim = rng.gen_range(2..=6);
        let entries: Vec<Value> = (0..dim).map(|_| random_funq_entry(&mut rng, 3, 10)).collect();
        let q = match QuadraticForm::diagonal(entries) {
            Ok(q) => q,
            Err(_) => continue,
        };
        let s = Instant::now();
        let d = bp_quadratic(&q, &bounds);
        let el = s.elapsed().as_millis();
        if let Decision::WeaklyIsotropic(w) = &d {
            positives += 1;
            if el > 500 {
                eprintln!("[{positives}] {el} ms witness={} {q}", w.is_some());
            }
        } else if el > 500 {
            eprintln!("[neg] {el} ms {q}");
        }
    }
    eprintln!("total {} s, positives {positives}, attempts {attempts}", t0.elapsed().as_secs());
}
