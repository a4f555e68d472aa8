//! Dense univariate polynomials over a finite field, with root finding and
//! factorization of squarefree polynomials.

use std::ops::{Add, Mul, Sub};

use num_bigint::BigUint;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ffield::{self, Field, FieldElement};

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    f: Field,
    /// Little-endian coefficients with no trailing zeros.
    c: Vec<FieldElement>,
}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Poly{:?}", self.c)
    }
}

impl Poly {
    pub fn new(f: &Field, mut c: Vec<FieldElement>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { f: f.clone(), c }
    }

    pub fn from_u64(f: &Field, c: &[u64]) -> Self {
        Self::new(f, c.iter().map(|&v| ffield::from_u64(f, v)).collect())
    }

    pub fn zero(f: &Field) -> Self {
        Poly { f: f.clone(), c: Vec::new() }
    }

    pub fn constant(v: FieldElement) -> Self {
        let f = v.field().clone();
        Self::new(&f, vec![v])
    }

    pub fn one(f: &Field) -> Self {
        Self::constant(ffield::one(f))
    }

    pub fn x(f: &Field) -> Self {
        Self::new(f, vec![ffield::zero(f), ffield::one(f)])
    }

    /// `x - r`.
    pub fn linear(r: &FieldElement) -> Self {
        Self::new(r.field(), vec![r.neg(), r.one_like()])
    }

    /// `∏ (x - r)` over the given roots.
    pub fn from_roots(f: &Field, roots: &[FieldElement]) -> Self {
        roots.iter().fold(Self::one(f), |acc, r| &acc * &Self::linear(r))
    }

    pub fn field(&self) -> &Field {
        &self.f
    }
    pub fn coeffs(&self) -> &[FieldElement] {
        &self.c
    }
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.c.get(i).cloned().unwrap_or_else(|| ffield::zero(&self.f))
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }
    pub fn lead(&self) -> FieldElement {
        self.c.last().cloned().unwrap_or_else(|| ffield::zero(&self.f))
    }

    pub fn scale(&self, s: &FieldElement) -> Self {
        Self::new(&self.f, self.c.iter().map(|a| a * s).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lead().inv().expect("nonzero leading coefficient");
        self.scale(&inv)
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        self.c.iter().rev().fold(ffield::zero(&self.f), |acc, a| &(&acc * x) + a)
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| a * &ffield::from_u64(&self.f, i as u64))
            .collect();
        Self::new(&self.f, c)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("polynomial division by zero");
        if self.c.len() <= dd {
            return (Self::zero(&self.f), self.clone());
        }
        let inv = d.lead().inv().unwrap();
        let mut r = self.c.clone();
        let mut q = vec![ffield::zero(&self.f); self.c.len() - dd];
        for i in (0..q.len()).rev() {
            let coef = &r[i + dd] * &inv;
            if coef.is_zero() {
                continue;
            }
            for (j, dc) in d.c.iter().enumerate() {
                r[i + j] = &r[i + j] - &(&coef * dc);
            }
            q[i] = coef;
        }
        r.truncate(dd);
        (Self::new(&self.f, q), Self::new(&self.f, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.divrem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Inverse modulo `m`, if coprime.
    pub fn invmod(&self, m: &Poly) -> Option<Poly> {
        let (mut r0, mut r1) = (m.clone(), self.rem(m));
        let (mut s0, mut s1) = (Self::zero(&self.f), Self::one(&self.f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = &s0 - &(&q * &s1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.degree() != Some(0) {
            return None;
        }
        let inv = r0.lead().inv().unwrap();
        Some(s0.scale(&inv).rem(m))
    }

    pub fn mulmod(&self, other: &Poly, m: &Poly) -> Poly {
        (self * other).rem(m)
    }

    pub fn powmod(&self, e: &BigUint, m: &Poly) -> Poly {
        let base = self.rem(m);
        let mut acc = Self::one(&self.f).rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mulmod(&acc, m);
            if e.bit(i) {
                acc = acc.mulmod(&base, m);
            }
        }
        acc
    }

    /// `self(g) mod m` by Horner's rule.
    pub fn compose_mod(&self, g: &Poly, m: &Poly) -> Poly {
        let g = g.rem(m);
        let mut acc = Self::zero(&self.f);
        for a in self.c.iter().rev() {
            acc = (&acc.mulmod(&g, m) + &Self::constant(a.clone())).rem(m);
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Self::one(&self.f), |acc, _| &acc * self)
    }

    /// Distinct-degree plus equal-degree factorization of a squarefree
    /// polynomial into monic irreducibles, sorted by degree then coefficients.
    pub fn factor_squarefree(&self) -> Vec<Poly> {
        let mut out = Vec::new();
        let mut f = self.monic();
        let q = self.f.order().clone();
        let x = Self::x(&self.f);
        let mut xq = x.clone();
        let mut d = 0usize;
        while let Some(deg) = f.degree() {
            if deg == 0 {
                break;
            }
            d += 1;
            if 2 * d > deg {
                out.push(f.clone());
                break;
            }
            xq = xq.powmod(&q, &f);
            let g = (&xq - &x).gcd(&f);
            if g.degree() != Some(0) {
                f = f.div_exact(&g);
                xq = xq.rem(&f);
                out.extend(equal_degree_split(&g, d));
            }
        }
        sort_polys(&mut out);
        out
    }

    /// All roots in the base field, sorted.
    pub fn roots(&self) -> Vec<FieldElement> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let f = self.monic();
        let x = Self::x(&self.f);
        let xq = x.powmod(self.f.order(), &f);
        let split = (&xq - &x).gcd(&f);
        let mut roots: Vec<FieldElement> = equal_degree_split(&split, 1)
            .into_iter()
            .map(|l| l.coeff(0).neg())
            .collect();
        roots.sort();
        roots
    }
}

fn sort_polys(v: &mut [Poly]) {
    v.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.c.cmp(&b.c)));
}

/// Cantor-Zassenhaus splitting of a product of distinct monic irreducibles of degree `d`.
fn equal_degree_split(g: &Poly, d: usize) -> Vec<Poly> {
    let n = match g.degree() {
        None | Some(0) => return Vec::new(),
        Some(n) => n,
    };
    if n == d {
        return vec![g.monic()];
    }
    let f = g.field().clone();
    let exp = (f.order().pow(d as u32) - BigUint::one()) >> 1;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e5a_0001 ^ n as u64);
    loop {
        let r = Poly::new(&f, (0..n).map(|_| ffield::random(&f, &mut rng)).collect());
        if r.degree().unwrap_or(0) == 0 {
            continue;
        }
        let h = &r.powmod(&exp, g) - &Poly::one(&f);
        let s = h.gcd(g);
        if let Some(sd) = s.degree() {
            if sd > 0 && sd < n {
                let mut out = equal_degree_split(&s, d);
                out.extend(equal_degree_split(&g.div_exact(&s), d));
                return out;
            }
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new(&self.f, (0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new(&self.f, (0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&self.f);
        }
        let mut c = vec![ffield::zero(&self.f); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        Poly::new(&self.f, c)
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, o: Poly) -> Poly {
        &self - &o
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, o: Poly) -> Poly {
        &self + &o
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, o: Poly) -> Poly {
        &self * &o
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::{from_u64, prime_field};

    #[test]
    fn roots_of_split_product() {
        let f = prime_field(541).unwrap();
        let roots: Vec<FieldElement> = [3u64, 17, 400].iter().map(|&v| from_u64(&f, v)).collect();
        let p = Poly::from_roots(&f, &roots);
        assert_eq!(p.roots(), roots);
    }

    #[test]
    fn factorization_recovers_factors() {
        let f = prime_field(101).unwrap();
        let a = Poly::from_u64(&f, &[2, 97, 1]);
        let b = Poly::from_u64(&f, &[5, 1]);
        let c = Poly::from_u64(&f, &[7, 1]);
        let prod = &(&a * &b) * &c;
        let fac = prod.factor_squarefree();
        assert_eq!(fac.len(), 3);
        assert_eq!(fac[2], a);
        let back = fac.iter().fold(Poly::one(&f), |acc, g| &acc * g);
        assert_eq!(back, prod);
    }

    #[test]
    fn inverse_mod() {
        let f = prime_field(101).unwrap();
        let m = Poly::from_u64(&f, &[2, 97, 1]);
        let a = Poly::from_u64(&f, &[3, 5]);
        let inv = a.invmod(&m).unwrap();
        assert_eq!(a.mulmod(&inv, &m), Poly::one(&f));
    }
}
