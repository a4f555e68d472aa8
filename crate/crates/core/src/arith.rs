//! Machine-word number theory: primality, factoring, modular inverses,
//! CRT and square roots modulo composite integers.

use crate::error::{Error, Result};

/// Default bound on prime factors accepted by smoothness-sensitive routines.
pub const SMOOTHNESS_BOUND: u64 = 1 << 20;

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a as i128, b as i128) as u64 * b
}

/// Canonical residue of `a` modulo `m` in `[0, m)`.
pub fn modp(a: i128, m: u64) -> u64 {
    let r = a.rem_euclid(m as i128);
    r as u64
}

pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

/// Extended Euclid: returns `(g, x, y)` with `a*x + b*y = g`.
pub fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: i128, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (g, x, _) = egcd(modp(a, m) as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(modp(x, m))
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mulmod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y) as i128, n as i128) as u64;
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Prime factorization as ascending `(prime, exponent)` pairs.
pub fn factor(n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n <= 1 {
        return out;
    }
    let mut stack = vec![n];
    let mut primes = Vec::new();
    while let Some(mut v) = stack.pop() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            while v % p == 0 {
                primes.push(p);
                v /= p;
            }
        }
        if v == 1 {
            continue;
        }
        if is_prime(v) {
            primes.push(v);
            continue;
        }
        let d = pollard_brent(v);
        stack.push(d);
        stack.push(v / d);
    }
    primes.sort_unstable();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

pub fn is_smooth(n: u64, bound: u64) -> bool {
    factor(n).iter().all(|&(p, _)| p <= bound)
}

pub fn require_smooth(n: u64) -> Result<Vec<(u64, u32)>> {
    let f = factor(n);
    if let Some(&(p, _)) = f.iter().find(|&&(p, _)| p > SMOOTHNESS_BOUND) {
        return Err(Error::NotSmooth { modulus: n, factor: p });
    }
    Ok(f)
}

pub fn euler_phi(n: u64) -> u64 {
    factor(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// Combine `x ≡ r_i (mod m_i)` for pairwise coprime moduli.
pub fn crt(residues: &[(u64, u64)]) -> (u64, u64) {
    let mut acc = (0u64, 1u64);
    for &(r, m) in residues {
        let (a, n) = acc;
        let inv = inv_mod(n as i128, m).expect("crt moduli must be coprime");
        let t = mulmod(modp(r as i128 - a as i128, m), inv, m);
        let modulus = n * m;
        acc = ((a as u128 + n as u128 * t as u128) as u64 % modulus, modulus);
    }
    acc
}

/// A quadratic non-residue modulo the odd prime `p`.
fn non_residue(p: u64) -> u64 {
    (2..p).find(|&z| powmod(z, (p - 1) / 2, p) == p - 1).unwrap()
}

/// Tonelli-Shanks square root of `c` modulo an odd prime, if one exists.
pub fn sqrt_mod_prime(c: u64, p: u64) -> Option<u64> {
    let c = c % p;
    if p == 2 || c == 0 {
        return Some(c);
    }
    if powmod(c, (p - 1) / 2, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = non_residue(p);
    let mut m = s;
    let mut cc = powmod(z, q, p);
    let mut t = powmod(c, q, p);
    let mut r = powmod(c, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mulmod(tt, tt, p);
            i += 1;
        }
        let b = powmod(cc, 1 << (m - i - 1), p);
        m = i;
        cc = mulmod(b, b, p);
        t = mulmod(t, cc, p);
        r = mulmod(r, b, p);
    }
    Some(r)
}

/// All square roots of `c` modulo `p^e`, lifted digit by digit.
fn sqrts_prime_power(c: u64, p: u64, e: u32) -> Vec<u64> {
    let mut sols: Vec<u64> = if p == 2 {
        vec![c % 2]
    } else if c.is_multiple_of(p) {
        vec![0]
    } else {
        match sqrt_mod_prime(c, p) {
            Some(r) if r == 0 || r == p - r => vec![r],
            Some(r) => vec![r, p - r],
            None => vec![],
        }
    };
    let mut modulus = p;
    for _ in 1..e {
        let next = modulus * p;
        let mut lifted = Vec::new();
        for &s in &sols {
            for j in 0..p {
                let x = s + j * modulus;
                if mulmod(x, x, next) == c % next {
                    lifted.push(x);
                }
            }
        }
        lifted.sort_unstable();
        lifted.dedup();
        sols = lifted;
        modulus = next;
    }
    sols
}

/// All `x` in `[0, m)` with `x² ≡ c (mod m)`, sorted.
pub fn sqrt_mod_all(c: u64, m: u64) -> Result<Vec<u64>> {
    if m == 1 {
        return Ok(vec![0]);
    }
    let fac = require_smooth(m)?;
    let mut combos: Vec<(u64, u64)> = vec![(0, 1)];
    for (p, e) in fac {
        let pe = p.pow(e);
        let roots = sqrts_prime_power(c % pe, p, e);
        let mut next = Vec::new();
        for &(r, n) in &combos {
            for &s in &roots {
                next.push(crt(&[(r, n), (s, pe)]));
            }
        }
        combos = next;
    }
    let mut out: Vec<u64> = combos.into_iter().map(|(r, _)| r).collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Exact power `p^e` with `p^e | n` and `p^{e+1} ∤ n`.
pub fn prime_power_part(n: u64, p: u64) -> (u64, u32) {
    let (mut v, mut pe, mut e) = (n, 1u64, 0u32);
    while v % p == 0 {
        v /= p;
        pe *= p;
        e += 1;
    }
    (pe, e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_factors() {
        assert!(is_prime(541));
        assert!(is_prime(107));
        assert!(!is_prime(541 * 107));
        assert_eq!(factor(540), vec![(2, 2), (3, 3), (5, 1)]);
        assert_eq!(factor(1_000_003 * 999_983), vec![(999_983, 1), (1_000_003, 1)]);
        assert_eq!(euler_phi(27), 18);
    }

    #[test]
    fn inverse_of_48_mod_541() {
        assert_eq!(inv_mod(48, 541), Some(124));
        assert_eq!(48 * 124 % 541, 1);
        assert_eq!(inv_mod(2, 4), None);
    }

    #[test]
    fn square_roots_match_brute_force() {
        for m in 2..200u64 {
            for c in 0..m {
                let brute: Vec<u64> = (0..m).filter(|x| x * x % m == c).collect();
                assert_eq!(sqrt_mod_all(c, m).unwrap(), brute, "m={m} c={c}");
            }
        }
        assert_eq!(sqrt_mod_all(1, 15).unwrap(), vec![1, 4, 11, 14]);
        assert_eq!(sqrt_mod_all(4, 5).unwrap(), vec![2, 3]);
        assert!(sqrt_mod_all(3, 4).unwrap().is_empty());
    }

    #[test]
    fn crt_combines() {
        assert_eq!(crt(&[(2, 3), (3, 5)]), (8, 15));
    }
}
