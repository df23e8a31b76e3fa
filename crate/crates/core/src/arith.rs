//! Exact integer helpers: factorization and divisor enumeration.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Prime factorization as ascending (prime, exponent) pairs.
pub type Factorization = Vec<(BigUint, u32)>;

const TRIAL_BOUND: u64 = 10_000_000;
const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

pub fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

/// Miller–Rabin with the first twelve prime bases; deterministic below
/// 3.3 * 10^24.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = big(2);
    if *n < two {
        return false;
    }
    for &p in &WITNESSES {
        let p = big(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n1 = n - 1u32;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'bases: for &a in &WITNESSES {
        let mut x = big(a).modpow(&d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// A nontrivial factor of a composite `n` (Brent's variant of Pollard rho).
fn pollard_rho(n: &BigUint) -> BigUint {
    if n.is_even() {
        return big(2);
    }
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let (mut y, mut r, mut q) = (big(2), 1u64, BigUint::one());
        let mut g = BigUint::one();
        let (mut x, mut ys) = (y.clone(), y.clone());
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..(128.min(r - k)) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += 128;
            }
            r *= 2;
        }
        if g == *n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if g != *n {
            return g;
        }
        c += 1u32;
    }
}

fn push_factor(out: &mut Vec<BigUint>, n: BigUint) {
    if n.is_one() {
        return;
    }
    if is_probable_prime(&n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(&n);
    let e = &n / &d;
    push_factor(out, d);
    push_factor(out, e);
}

fn collect(mut primes: Vec<BigUint>) -> Factorization {
    primes.sort();
    let mut out: Factorization = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Trial division up to 10^7 (or the square root of what remains), then
/// Pollard rho on any composite cofactor.
pub fn factorize(n: &BigUint) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::Factorization("cannot factor 0".into()));
    }
    let mut primes = Vec::new();
    let mut rest = n.clone();
    let mut p = 2u64;
    while p <= TRIAL_BOUND {
        if let Some(r) = rest.to_u64() {
            if p.saturating_mul(p) > r {
                break;
            }
        }
        if let Some(mut r) = rest.to_u64() {
            while r % p == 0 {
                r /= p;
                primes.push(big(p));
            }
            rest = big(r);
        } else {
            while (&rest % p).is_zero() {
                rest /= p;
                primes.push(big(p));
            }
        }
        if p > 1000 && p % 4096 == 1 && is_probable_prime(&rest) {
            break;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    push_factor(&mut primes, rest);
    Ok(collect(primes))
}

/// Factors `n` using only the given primes; `None` if something is left.
pub fn factor_over(n: &BigUint, primes: &[BigUint]) -> Option<Factorization> {
    if n.is_zero() {
        return None;
    }
    let mut rest = n.clone();
    let mut out = Vec::new();
    for p in primes {
        let mut e = 0;
        while (&rest % p).is_zero() {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
    }
    rest.is_one().then(|| {
        out.sort();
        out
    })
}

pub fn factorization_value(f: &Factorization) -> BigUint {
    f.iter().fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e))
}

/// All divisors, ascending.
pub fn divisors_from(f: &Factorization) -> Vec<BigUint> {
    let mut out = vec![BigUint::one()];
    for (p, e) in f {
        let current = out.clone();
        let mut power = BigUint::one();
        for _ in 0..*e {
            power *= p;
            out.extend(current.iter().map(|d| d * &power));
        }
    }
    out.sort();
    out
}

pub fn divisors(n: &BigUint) -> Result<Vec<BigUint>> {
    Ok(divisors_from(&factorize(n)?))
}

pub fn divides(d: &BigUint, n: &BigUint) -> bool {
    !d.is_zero() && (n % d).is_zero()
}

/// Integer square root test.
pub fn is_square(n: &BigUint) -> bool {
    let r = n.sqrt();
    &r * &r == *n
}
