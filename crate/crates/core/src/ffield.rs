//! Finite fields `F_q`, `q = p^k`, as single quotients `F_p[x]/(f)`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::arith;
use crate::error::{Error, Result};
use crate::poly::Poly;

static MAX_DEGREE_BUILT: AtomicUsize = AtomicUsize::new(0);

/// Largest extension degree of any field constructed in this process.
pub fn max_extension_degree() -> usize {
    MAX_DEGREE_BUILT.load(AtomicOrdering::Relaxed)
}

pub type Field = Arc<FieldDesc>;

pub struct FieldDesc {
    p: u64,
    k: usize,
    /// Monic modulus, little-endian, `k + 1` coefficients.
    modulus: Vec<u64>,
    q: BigUint,
    q_minus_1_factors: OnceLock<Vec<(u64, u32)>>,
    non_residue: OnceLock<Vec<u64>>,
    mu_cache: Mutex<HashMap<u64, Vec<u64>>>,
}

impl PartialEq for FieldDesc {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}
impl Eq for FieldDesc {}

impl fmt::Debug for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.p, self.k, self.modulus)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FieldJson {
    pub p: String,
    pub k: usize,
    pub modulus: Vec<String>,
}

fn unchecked(p: u64, modulus: Vec<u64>) -> Field {
    let k = modulus.len() - 1;
    Arc::new(FieldDesc {
        p,
        k,
        q: BigUint::from(p).pow(k as u32),
        modulus,
        q_minus_1_factors: OnceLock::new(),
        non_residue: OnceLock::new(),
        mu_cache: Mutex::new(HashMap::new()),
    })
}

/// The prime field `F_p`, represented with modulus `x`.
pub fn prime_field(p: u64) -> Result<Field> {
    make_field(p, 1, &[0, 1])
}

/// Build `F_p[x]/(modulus)`; `modulus` is little-endian and monic of degree `k`.
pub fn make_field(p: u64, k: usize, modulus: &[u64]) -> Result<Field> {
    if p == 2 || !arith::is_prime(p) {
        return Err(Error::CompositeModulus(p));
    }
    if k == 0 || modulus.len() != k + 1 || modulus[k] % p != 1 {
        return Err(Error::Malformed(format!(
            "modulus must be monic of degree {k} with {} coefficients",
            k + 1
        )));
    }
    let modulus: Vec<u64> = modulus.iter().map(|c| c % p).collect();
    let field = unchecked(p, modulus.clone());
    if k > 1 && !is_irreducible(p, &modulus) {
        return Err(Error::ReducibleModulus(p));
    }
    MAX_DEGREE_BUILT.fetch_max(k, AtomicOrdering::Relaxed);
    Ok(field)
}

/// Rabin's test: `f | x^{p^k} - x` and `gcd(f, x^{p^{k/r}} - x) = 1` for primes `r | k`.
fn is_irreducible(p: u64, modulus: &[u64]) -> bool {
    let fp = unchecked(p, vec![0, 1]);
    let f = Poly::from_u64(&fp, modulus);
    let k = modulus.len() - 1;
    let x = Poly::x(&fp);
    let frob_iter = |n: usize| {
        let mut acc = x.clone();
        for _ in 0..n {
            acc = acc.powmod(&BigUint::from(p), &f);
        }
        acc
    };
    if !(frob_iter(k) - x.clone()).rem(&f).is_zero() {
        return false;
    }
    for (r, _) in arith::factor(k as u64) {
        let g = (frob_iter(k / r as usize) - x.clone()).gcd(&f);
        if g.degree() != Some(0) {
            return false;
        }
    }
    true
}

impl FieldDesc {
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }
    pub fn order(&self) -> &BigUint {
        &self.q
    }
    /// `q` as a machine word, when it fits.
    pub fn order_u64(&self) -> Option<u64> {
        self.q.to_u64()
    }

    /// Prime factorization of `q - 1`.
    pub fn q_minus_1_factors(&self) -> &[(u64, u32)] {
        self.q_minus_1_factors.get_or_init(|| {
            let qm1 = (&self.q - 1u32)
                .to_u64()
                .expect("multiplicative group order exceeds 64 bits");
            arith::factor(qm1)
        })
    }

    pub fn q_minus_1_u64(&self) -> u64 {
        (&self.q - 1u32).to_u64().expect("multiplicative group order exceeds 64 bits")
    }

    pub fn to_json(&self) -> FieldJson {
        FieldJson {
            p: self.p.to_string(),
            k: self.k,
            modulus: self.modulus.iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn from_json(j: &FieldJson) -> Result<Field> {
        let p: u64 = j.p.parse().map_err(|_| Error::Malformed(format!("bad prime {:?}", j.p)))?;
        let modulus = j
            .modulus
            .iter()
            .map(|s| s.parse::<u64>().map_err(|_| Error::Malformed(format!("bad coefficient {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        make_field(p, j.k, &modulus)
    }
}

pub fn zero(f: &Field) -> FieldElement {
    FieldElement { f: f.clone(), c: SmallVec::from_elem(0, f.k) }
}

pub fn one(f: &Field) -> FieldElement {
    from_u64(f, 1)
}

pub fn from_u64(f: &Field, v: u64) -> FieldElement {
    let mut e = zero(f);
    e.c[0] = v % f.p;
    e
}

pub fn from_i64(f: &Field, v: i64) -> FieldElement {
    from_u64(f, arith::modp(v as i128, f.p))
}

/// Element with the given little-endian coefficients (padded/truncated to `k`).
pub fn from_coeffs(f: &Field, coeffs: &[u64]) -> FieldElement {
    let mut e = zero(f);
    let mut poly: Vec<u64> = coeffs.iter().map(|c| c % f.p).collect();
    reduce_in_place(f, &mut poly);
    for (dst, src) in e.c.iter_mut().zip(poly) {
        *dst = src;
    }
    e
}

/// The generator `x` of the extension (equal to 0 when `k = 1` with modulus `x`).
pub fn generator(f: &Field) -> FieldElement {
    from_coeffs(f, &[0, 1])
}

/// The `i`-th element in lexicographic coefficient order.
pub fn from_index(f: &Field, mut i: u64) -> FieldElement {
    let mut e = zero(f);
    for c in e.c.iter_mut() {
        *c = i % f.p;
        i /= f.p;
    }
    e
}

pub fn random<R: Rng + ?Sized>(f: &Field, rng: &mut R) -> FieldElement {
    let mut e = zero(f);
    for c in e.c.iter_mut() {
        *c = rng.gen_range(0..f.p);
    }
    e
}

fn reduce_in_place(f: &FieldDesc, poly: &mut Vec<u64>) {
    let k = f.k;
    let p = f.p;
    while poly.len() > k {
        let top = poly.pop().unwrap();
        if top == 0 {
            continue;
        }
        let base = poly.len() - k;
        for (j, &mc) in f.modulus[..k].iter().enumerate() {
            let sub = arith::mulmod(top, mc, p);
            poly[base + j] = (poly[base + j] + p - sub) % p;
        }
    }
    poly.resize(k, 0);
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// `(q, r)` with `a = q*b + r` over `F_p`; `b` must be trimmed and nonzero.
fn poly_divrem_u64(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    if r.len() <= db {
        return (vec![], r);
    }
    let inv = arith::inv_mod(b[db] as i128, p).unwrap();
    let mut q = vec![0u64; r.len() - db];
    for i in (0..q.len()).rev() {
        let coef = arith::mulmod(r[i + db], inv, p);
        if coef == 0 {
            continue;
        }
        for (j, &bc) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + p - arith::mulmod(coef, bc, p)) % p;
        }
        q[i] = coef;
    }
    r.truncate(db);
    trim(&mut r);
    (q, r)
}

fn poly_mul_sub_u64(s0: &[u64], q: &[u64], s1: &[u64], p: u64) -> Vec<u64> {
    let mut out = s0.to_vec();
    let need = if q.is_empty() || s1.is_empty() { 0 } else { q.len() + s1.len() - 1 };
    if out.len() < need {
        out.resize(need, 0);
    }
    for (i, &a) in q.iter().enumerate() {
        for (j, &b) in s1.iter().enumerate() {
            out[i + j] = (out[i + j] + p - arith::mulmod(a, b, p)) % p;
        }
    }
    trim(&mut out);
    out
}

/// Inverse of `a` modulo the polynomial `m` over `F_p` by extended Euclid.
fn poly_inverse(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    trim(&mut r1);
    let (mut s0, mut s1): (Vec<u64>, Vec<u64>) = (vec![], vec![1]);
    while !r1.is_empty() {
        let (q, r) = poly_divrem_u64(&r0, &r1, p);
        let s = poly_mul_sub_u64(&s0, &q, &s1, p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    if r0.len() != 1 {
        return None;
    }
    let inv = arith::inv_mod(r0[0] as i128, p)?;
    Some(s0.iter().map(|&c| arith::mulmod(c, inv, p)).collect())
}

#[derive(Clone)]
pub struct FieldElement {
    f: Field,
    c: SmallVec<[u64; 2]>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c && same_field(&self.f, &other.f)
    }
}
impl Eq for FieldElement {}

impl std::hash::Hash for FieldElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.c.hash(state);
    }
}

/// Lexicographic on the coefficient tuple, constant term first.
impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.c.as_slice().cmp(other.c.as_slice())
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.f.k == 1 {
            return write!(f, "{}", self.c[0]);
        }
        let terms: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match i {
                0 => c.to_string(),
                1 => format!("{c}a"),
                _ => format!("{c}a^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

pub fn same_field(a: &Field, b: &Field) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.f
    }
    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }
    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&c| c == 0)
    }
    pub fn is_one(&self) -> bool {
        self.c[0] == 1 && self.c[1..].iter().all(|&c| c == 0)
    }
    /// Whether the element lies in the prime subfield.
    pub fn in_prime_field(&self) -> bool {
        self.c[1..].iter().all(|&c| c == 0)
    }
    pub fn zero_like(&self) -> FieldElement {
        zero(&self.f)
    }
    pub fn one_like(&self) -> FieldElement {
        one(&self.f)
    }
    pub fn from_u64_like(&self, v: u64) -> FieldElement {
        from_u64(&self.f, v)
    }
    pub fn from_i64_like(&self, v: i64) -> FieldElement {
        from_i64(&self.f, v)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_field(&self.f, &other.f) {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }
    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.sub_unchecked(other))
    }
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }
    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        let p = self.f.p;
        let mut out = self.clone();
        for (a, &b) in out.c.iter_mut().zip(other.c.iter()) {
            *a = (*a + b) % p;
        }
        out
    }

    fn sub_unchecked(&self, other: &Self) -> Self {
        let p = self.f.p;
        let mut out = self.clone();
        for (a, &b) in out.c.iter_mut().zip(other.c.iter()) {
            *a = (*a + p - b) % p;
        }
        out
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let p = self.f.p;
        let k = self.f.k;
        if k == 1 {
            let mut out = self.clone();
            out.c[0] = arith::mulmod(self.c[0], other.c[0], p);
            return out;
        }
        let mut prod = vec![0u128; 2 * k - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                prod[i + j] += (a as u128 * b as u128) % p as u128;
            }
        }
        let mut poly: Vec<u64> = prod.into_iter().map(|v| (v % p as u128) as u64).collect();
        reduce_in_place(&self.f, &mut poly);
        FieldElement { f: self.f.clone(), c: SmallVec::from_vec(poly) }
    }

    pub fn neg(&self) -> Self {
        let p = self.f.p;
        let mut out = self.clone();
        for a in out.c.iter_mut() {
            *a = (p - *a) % p;
        }
        out
    }

    pub fn square(&self) -> Self {
        self.mul_unchecked(self)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.f.k == 1 {
            let mut out = self.clone();
            out.c[0] = arith::inv_mod(self.c[0] as i128, self.f.p).ok_or(Error::DivisionByZero)?;
            return Ok(out);
        }
        let inv = poly_inverse(&self.c, &self.f.modulus, self.f.p).ok_or(Error::DivisionByZero)?;
        Ok(from_coeffs(&self.f, &inv))
    }

    pub fn pow_biguint(&self, e: &BigUint) -> Self {
        let mut acc = self.one_like();
        for i in (0..e.bits()).rev() {
            acc = acc.square();
            if e.bit(i) {
                acc = acc.mul_unchecked(self);
            }
        }
        acc
    }

    pub fn pow_u64(&self, e: u64) -> Self {
        let mut acc = self.one_like();
        for i in (0..64 - e.leading_zeros()).rev() {
            acc = acc.square();
            if (e >> i) & 1 == 1 {
                acc = acc.mul_unchecked(self);
            }
        }
        acc
    }

    /// `x^e` for any integer `e`; negative exponents invert first.
    pub fn pow(&self, e: &BigInt) -> Result<Self> {
        match e.sign() {
            Sign::NoSign => Ok(self.one_like()),
            Sign::Plus => Ok(self.pow_reduced(e.magnitude())),
            Sign::Minus => Ok(self.inv()?.pow_reduced(e.magnitude())),
        }
    }

    pub fn pow_i64(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow_u64(e as u64))
        } else {
            Ok(self.inv()?.pow_u64(e.unsigned_abs()))
        }
    }

    fn pow_reduced(&self, e: &BigUint) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let qm1 = &self.f.q - 1u32;
        if e >= &qm1 {
            let r = e.mod_floor(&qm1);
            return self.pow_biguint(&r);
        }
        self.pow_biguint(e)
    }

    /// The p-power Frobenius.
    pub fn frobenius(&self) -> Self {
        if self.f.k == 1 {
            return self.clone();
        }
        self.pow_u64(self.f.p)
    }

    pub fn mult_order(&self) -> Result<u64> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        let mut order = self.f.q_minus_1_u64();
        for &(r, e) in self.f.q_minus_1_factors() {
            for _ in 0..e {
                if order.is_multiple_of(r) && self.pow_u64(order / r).is_one() {
                    order /= r;
                } else {
                    break;
                }
            }
        }
        Ok(order)
    }

    /// Quadratic character: true for nonzero squares.
    pub fn is_square(&self) -> bool {
        !self.is_zero() && self.pow_biguint(&((&self.f.q - 1u32) >> 1)).is_one()
    }

    /// A square root (Tonelli-Shanks), if one exists. The root returned is
    /// the lexicographically smaller of the two.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        if !self.is_square() {
            return None;
        }
        let qm1 = &self.f.q - 1u32;
        let s = qm1.trailing_zeros().unwrap_or(0);
        let t = &qm1 >> s;
        let z = from_coeffs(&self.f, self.f.non_residue.get_or_init(|| {
            let mut i = 2u64;
            loop {
                let cand = from_index(&self.f, i);
                if !cand.is_zero() && !cand.is_square() {
                    return cand.c.to_vec();
                }
                i += 1;
            }
        }));
        let mut m = s;
        let mut c = z.pow_biguint(&t);
        let mut tt = self.pow_biguint(&t);
        let mut r = self.pow_biguint(&((&t + 1u32) >> 1));
        while !tt.is_one() {
            let mut i = 0;
            let mut probe = tt.clone();
            while !probe.is_one() {
                probe = probe.square();
                i += 1;
            }
            let mut b = c.clone();
            for _ in 0..(m - i - 1) {
                b = b.square();
            }
            m = i;
            c = b.square();
            tt = tt.mul_unchecked(&c);
            r = r.mul_unchecked(&b);
        }
        let other = r.neg();
        Some(if other < r { other } else { r })
    }

    /// All `n`-th roots, sorted lexicographically.
    pub fn nth_roots(&self, n: u64) -> Vec<Self> {
        if self.is_zero() {
            return vec![self.clone()];
        }
        let mut coeffs = vec![self.neg()];
        coeffs.extend((1..n).map(|_| self.zero_like()));
        coeffs.push(self.one_like());
        let mut roots = Poly::new(&self.f, coeffs).roots();
        roots.sort();
        roots
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.c.iter().map(|c| c.to_string()).collect()
    }

    pub fn from_strings(f: &Field, s: &[String]) -> Result<Self> {
        if s.len() != f.k {
            return Err(Error::Malformed(format!("expected {} coefficients, got {}", f.k, s.len())));
        }
        let mut c = Vec::with_capacity(s.len());
        for v in s {
            let x: u64 = v.parse().map_err(|_| Error::Malformed(format!("bad coefficient {v:?}")))?;
            if x >= f.p {
                return Err(Error::Malformed(format!("coefficient {x} not reduced mod {}", f.p)));
            }
            c.push(x);
        }
        Ok(from_coeffs(f, &c))
    }
}

/// The canonical generator of `μ_m`: the lexicographically least element of
/// multiplicative order exactly `m`.
pub fn mu_generator(f: &Field, m: u64) -> Result<FieldElement> {
    if m == 0 {
        return Err(Error::RootsOfUnityMissing(0));
    }
    if m == 1 {
        return Ok(one(f));
    }
    let qm1 = f.q_minus_1_u64();
    if !qm1.is_multiple_of(m) {
        return Err(Error::RootsOfUnityMissing(m));
    }
    if let Some(c) = f.mu_cache.lock().unwrap().get(&m) {
        return Ok(from_coeffs(f, c));
    }
    let primes: Vec<u64> = arith::factor(m).into_iter().map(|(r, _)| r).collect();
    let has_exact_order = |h: &FieldElement| h.pow_u64(m).is_one() && primes.iter().all(|r| !h.pow_u64(m / r).is_one());
    let mut i = 2u64;
    let base = loop {
        let h = from_index(f, i).pow_u64(qm1 / m);
        if !h.is_zero() && has_exact_order(&h) {
            break h;
        }
        i += 1;
    };
    let mut best = base.clone();
    let mut acc = base.clone();
    for j in 2..m {
        acc = acc.mul_unchecked(&base);
        if arith::gcd(j as i128, m as i128) == 1 && acc < best {
            best = acc.clone();
        }
    }
    f.mu_cache.lock().unwrap().insert(m, best.c.to_vec());
    Ok(best)
}

/// Reduction exponent `(q - 1)/m`.
pub fn reduction_exponent(f: &Field, m: u64) -> Result<BigUint> {
    let qm1 = f.order() - BigUint::one();
    let (quot, rem) = qm1.div_rem(&BigUint::from(m));
    if !rem.is_zero() {
        return Err(Error::RootsOfUnityMissing(m));
    }
    Ok(quot)
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl std::ops::$tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                debug_assert!(same_field(&self.f, &rhs.f), "mixed fields");
                self.$inner(rhs)
            }
        }
        impl std::ops::$tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl std::ops::$tr<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_unchecked);
forward_binop!(Sub, sub, sub_unchecked);
forward_binop!(Mul, mul, mul_unchecked);

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(self)
    }
}
impl std::ops::Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(&self)
    }
}
