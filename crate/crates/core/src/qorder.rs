//! The imaginary quadratic order `Z[τ]` with `τ² = tτ - n`, its left-regular
//! representation, and the induced action on pair values.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{self, modp};
use crate::error::{Error, Result};
use crate::ffield::FieldElement;
use crate::linalg::Mat2;

/// Budget on `|O/mO| = m²` for exhaustive enumerations.
pub const ENUM_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OrderDesc {
    pub t: i64,
    pub n: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct OrderJson {
    pub t: String,
    pub n: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ElementJson {
    pub a: String,
    pub b: String,
}

fn parse_i64(s: &str) -> Result<i64> {
    s.parse().map_err(|_| Error::Malformed(format!("bad integer {s:?}")))
}

impl OrderDesc {
    pub fn new(t: i64, n: i64) -> Result<OrderDesc> {
        let o = OrderDesc { t, n };
        if o.disc() >= 0 {
            return Err(Error::Malformed(format!("order (t={t}, n={n}) is not imaginary quadratic")));
        }
        Ok(o)
    }

    /// `Z[i]`.
    pub fn gaussian() -> OrderDesc {
        OrderDesc { t: 0, n: 1 }
    }

    pub fn disc(&self) -> i64 {
        self.t * self.t - 4 * self.n
    }

    pub fn tau(&self) -> OrderElement {
        OrderElement::new(0, 1, *self)
    }

    pub fn int(&self, a: i64) -> OrderElement {
        OrderElement::new(a, 0, *self)
    }

    pub fn elem(&self, a: i64, b: i64) -> OrderElement {
        OrderElement::new(a, b, *self)
    }

    pub fn to_json(&self) -> OrderJson {
        OrderJson { t: self.t.to_string(), n: self.n.to_string() }
    }

    /// Parsed without the imaginary-quadratic check so scalar presentations
    /// (`τ ∈ Z`) remain expressible.
    pub fn from_json(j: &OrderJson) -> Result<OrderDesc> {
        Ok(OrderDesc { t: parse_i64(&j.t)?, n: parse_i64(&j.n)? })
    }
}

/// `a + bτ`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct OrderElement {
    pub a: i64,
    pub b: i64,
    pub order: OrderDesc,
}

impl fmt::Debug for OrderElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}τ", self.a, self.b)
    }
}

impl fmt::Display for OrderElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}τ", self.a, self.b)
    }
}

fn narrow(v: i128) -> i64 {
    i64::try_from(v).expect("order element coefficient overflow")
}

impl OrderElement {
    pub fn new(a: i64, b: i64, order: OrderDesc) -> Self {
        OrderElement { a, b, order }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.a + o.a, self.b + o.b, self.order)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.a - o.a, self.b - o.b, self.order)
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.a, -self.b, self.order)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (t, n) = (self.order.t as i128, self.order.n as i128);
        let (a1, b1, a2, b2) = (self.a as i128, self.b as i128, o.a as i128, o.b as i128);
        Self::new(narrow(a1 * a2 - n * b1 * b2), narrow(a1 * b2 + a2 * b1 + t * b1 * b2), self.order)
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::new(self.a * k, self.b * k, self.order)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.a + self.b * self.order.t, -self.b, self.order)
    }

    pub fn norm(&self) -> i64 {
        let (a, b) = (self.a as i128, self.b as i128);
        narrow(a * a + a * b * self.order.t as i128 + b * b * self.order.n as i128)
    }

    pub fn trace(&self) -> i64 {
        2 * self.a + self.b * self.order.t
    }

    pub fn is_integer(&self) -> bool {
        self.b == 0
    }

    /// Coefficients reduced into `[0, m)`.
    pub fn reduce(&self, m: u64) -> Self {
        Self::new(modp(self.a as i128, m) as i64, modp(self.b as i128, m) as i64, self.order)
    }

    pub fn eq_mod(&self, o: &Self, m: u64) -> bool {
        self.reduce(m) == o.reduce(m)
    }

    /// `[[a, -bn], [b, a + bt]]`.
    pub fn rho(&self) -> Mat2 {
        [[self.a, -self.b * self.order.n], [self.b, self.a + self.b * self.order.t]]
    }

    pub fn to_json(&self) -> ElementJson {
        ElementJson { a: self.a.to_string(), b: self.b.to_string() }
    }

    pub fn from_json(j: &ElementJson, order: OrderDesc) -> Result<Self> {
        Ok(Self::new(parse_i64(&j.a)?, parse_i64(&j.b)?, order))
    }
}

/// An element of `(F^*)²` with the exponent action of the order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairValue {
    pub x: FieldElement,
    pub y: FieldElement,
}

impl PairValue {
    pub fn new(x: FieldElement, y: FieldElement) -> Result<Self> {
        if x.is_zero() || y.is_zero() {
            return Err(Error::ZeroCoordinate);
        }
        Ok(PairValue { x, y })
    }

    pub fn one_like(x: &FieldElement) -> Self {
        PairValue { x: x.one_like(), y: x.one_like() }
    }

    pub fn is_one(&self) -> bool {
        self.x.is_one() && self.y.is_one()
    }

    pub fn mul(&self, o: &Self) -> Self {
        PairValue { x: &self.x * &o.x, y: &self.y * &o.y }
    }

    /// Componentwise integer power.
    pub fn pow_int(&self, e: i64) -> Result<Self> {
        Ok(PairValue { x: self.x.pow_i64(e)?, y: self.y.pow_i64(e)? })
    }

    /// Componentwise power by a large exponent.
    pub fn pow_biguint(&self, e: &num_bigint::BigUint) -> Self {
        PairValue { x: self.x.pow_biguint(e), y: self.y.pow_biguint(e) }
    }

    /// `(x, y)^M = (x^{M00} y^{M01}, x^{M10} y^{M11})`.
    pub fn pow_matrix(&self, m: &Mat2) -> Result<Self> {
        let x = &self.x.pow_i64(m[0][0])? * &self.y.pow_i64(m[0][1])?;
        let y = &self.x.pow_i64(m[1][0])? * &self.y.pow_i64(m[1][1])?;
        Ok(PairValue { x, y })
    }
}

/// How a rational prime decomposes in an order of discriminant `disc`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

pub fn splitting(disc: i64, q: u64) -> Splitting {
    if q == 2 {
        return match disc.rem_euclid(8) {
            1 => Splitting::Split,
            5 => Splitting::Inert,
            _ => Splitting::Ramified,
        };
    }
    let d = modp(disc as i128, q);
    if d == 0 {
        Splitting::Ramified
    } else if arith::powmod(d, (q - 1) / 2, q) == 1 {
        Splitting::Split
    } else {
        Splitting::Inert
    }
}

/// `v^α` through `ρ(α)`.
pub fn pair_pow(v: &PairValue, alpha: &OrderElement) -> Result<PairValue> {
    if v.x.is_zero() || v.y.is_zero() {
        return Err(Error::ZeroCoordinate);
    }
    v.pow_matrix(&alpha.rho())
}

/// `{ N(a + bτ) mod m }` over all residues.
pub fn norms_mod(order: OrderDesc, m: u64) -> Result<BTreeSet<u64>> {
    if m.saturating_mul(m) > ENUM_BUDGET {
        return Err(Error::BudgetExceeded(format!("|O/{m}O| exceeds {ENUM_BUDGET}")));
    }
    let mut out = BTreeSet::new();
    for a in 0..m as i64 {
        for b in 0..m as i64 {
            out.insert(modp(order.elem(a, b).norm() as i128, m));
        }
    }
    Ok(out)
}

/// All square roots of `c` modulo `m`, sorted.
pub fn unit_sqrts(m: u64, c: i64) -> Result<Vec<u64>> {
    arith::sqrt_mod_all(modp(c as i128, m), m)
}

/// Every `λ ∈ O/mO` with `N(λ) ≡ nval` and `λ² ≡ sq`, sorted by `(a, b)`.
pub fn solve_lambda(nval: i64, sq: &OrderElement, m: u64, order: OrderDesc) -> Result<Vec<OrderElement>> {
    let fac = arith::require_smooth(m)?;
    let mut combos: Vec<(OrderElement, u64)> = vec![(order.int(0), 1)];
    for (q, e) in fac {
        let qk = q.pow(e);
        let local = solve_lambda_prime_power(nval, sq, qk, order)?;
        if local.is_empty() {
            return Err(Error::NoSolution);
        }
        let mut next = Vec::new();
        for (acc, n) in &combos {
            for l in &local {
                let (a, mm) = arith::crt(&[(acc.a as u64, *n), (l.a as u64, qk)]);
                let (b, _) = arith::crt(&[(acc.b as u64, *n), (l.b as u64, qk)]);
                next.push((order.elem(a as i64, b as i64), mm));
            }
        }
        combos = next;
    }
    let mut out: Vec<OrderElement> = combos.into_iter().map(|(l, _)| l).collect();
    out.sort_by_key(|l| (l.a, l.b));
    out.dedup();
    if out.is_empty() {
        return Err(Error::NoSolution);
    }
    Ok(out)
}

fn solve_lambda_prime_power(nval: i64, sq: &OrderElement, qk: u64, order: OrderDesc) -> Result<Vec<OrderElement>> {
    // Tr(λ)² = λ² + conj(λ)² + 2N, and Tr(λ)·λ = λ² + N.
    let target = modp(sq.trace() as i128 + 2 * nval as i128, qk);
    let traces = arith::sqrt_mod_all(target, qk)?;
    let rhs = sq.add(&order.int(nval)).reduce(qk);
    let mut out = Vec::new();
    for x in traces {
        let sols = crate::linalg::solve_mod(&[[x as i64, 0], [0, x as i64]], &[rhs.a, rhs.b], qk);
        for s in sols {
            let l = order.elem(s[0], s[1]);
            if modp(l.norm() as i128 - nval as i128, qk) == 0 && l.mul(&l).eq_mod(sq, qk) {
                out.push(l);
            }
        }
    }
    out.sort_by_key(|l| (l.a, l.b));
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::{self, prime_field};
    use crate::linalg;
    use proptest::prelude::*;

    fn zi() -> OrderDesc {
        OrderDesc::gaussian()
    }

    #[test]
    fn splitting_types() {
        assert_eq!(splitting(-4, 5), Splitting::Split);
        assert_eq!(splitting(-4, 3), Splitting::Inert);
        assert_eq!(splitting(-4, 2), Splitting::Ramified);
        assert_eq!(splitting(-108, 3), Splitting::Ramified);
        assert_eq!(splitting(-7, 2), Splitting::Split);
        assert_eq!(splitting(-3, 2), Splitting::Inert);
    }

    #[test]
    fn rho_examples() {
        assert_eq!(zi().int(1).rho(), linalg::IDENTITY);
        assert_eq!(zi().elem(2, 3).rho(), [[2, -3], [3, 2]]);
        for o in [zi(), OrderDesc { t: 1, n: 7 }, OrderDesc { t: 0, n: 27 }] {
            let r = o.tau().rho();
            let r2 = linalg::mul(&r, &r, 1 << 40);
            let lhs = linalg::add(&linalg::add(&r2, &linalg::scale(&r, -o.t, 1 << 40), 1 << 40), &linalg::scale(&linalg::IDENTITY, o.n, 1 << 40), 1 << 40);
            assert_eq!(lhs, [[0, 0], [0, 0]]);
        }
    }

    #[test]
    fn norms_mod_examples() {
        assert_eq!(norms_mod(zi(), 5).unwrap(), (0..5).collect());
        let n2 = norms_mod(OrderDesc { t: 1, n: 3 }, 2).unwrap();
        assert!(n2.contains(&0) && n2.contains(&1));
        assert!(norms_mod(zi(), 3).unwrap().contains(&2));
        assert!(matches!(norms_mod(zi(), 2000), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn norms_contain_nonresidues_when_coprime() {
        for m in [3u64, 5, 7, 9, 11] {
            let norms = norms_mod(zi(), m).unwrap();
            let squares: BTreeSet<u64> = (0..m).map(|x| x * x % m).collect();
            assert!(norms.iter().any(|v| arith::gcd(*v as i128, m as i128) == 1 && !squares.contains(v)), "m={m}");
        }
    }

    #[test]
    fn unit_sqrt_examples() {
        assert_eq!(unit_sqrts(15, 1).unwrap(), vec![1, 4, 11, 14]);
        assert_eq!(unit_sqrts(5, 4).unwrap(), vec![2, 3]);
        assert!(unit_sqrts(4, 3).unwrap().is_empty());
    }

    fn brute_lambda(nval: i64, sq: &OrderElement, m: u64, o: OrderDesc) -> Vec<OrderElement> {
        let mut out = Vec::new();
        for a in 0..m as i64 {
            for b in 0..m as i64 {
                let l = o.elem(a, b);
                if modp((l.norm() - nval) as i128, m) == 0 && l.mul(&l).eq_mod(sq, m) {
                    out.push(l);
                }
            }
        }
        out
    }

    #[test]
    fn solve_lambda_examples() {
        let o = zi();
        let ones: Vec<(i64, i64)> = solve_lambda(1, &o.int(1), 5, o).unwrap().iter().map(|l| (l.a, l.b)).collect();
        assert_eq!(ones, vec![(1, 0), (4, 0)]);
        let l = o.elem(1, 1);
        let sq = l.mul(&l);
        assert!(solve_lambda(2, &sq, 5, o).unwrap().iter().any(|x| x.eq_mod(&l, 5)));
        let zeros: Vec<(i64, i64)> = solve_lambda(0, &o.int(0), 5, o).unwrap().iter().map(|l| (l.a, l.b)).collect();
        assert_eq!(zeros, vec![(0, 0)]);
    }

    #[test]
    fn solve_lambda_complete_for_small_moduli() {
        for o in [zi(), OrderDesc { t: 1, n: 2 }, OrderDesc { t: 0, n: 27 }] {
            for m in 2..=50u64 {
                for (a, b) in [(1i64, 0i64), (2, 1), (3, 4), (0, 1), (5, 7)] {
                    let l = o.elem(a, b);
                    let sq = l.mul(&l).reduce(m);
                    let nval = modp(l.norm() as i128, m) as i64;
                    let got = solve_lambda(nval, &sq, m, o).unwrap();
                    assert_eq!(got, brute_lambda(nval, &sq, m, o), "m={m} λ={l:?}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn ring_laws(a1 in -30i64..30, b1 in -30i64..30, a2 in -30i64..30, b2 in -30i64..30, t in -3i64..3, n in 1i64..20) {
            let o = OrderDesc { t, n };
            prop_assume!(o.disc() < 0);
            let x = o.elem(a1, b1);
            let y = o.elem(a2, b2);
            let big = 1u64 << 50;
            prop_assert_eq!(linalg::reduce(&x.mul(&y).rho(), big), linalg::mul(&linalg::reduce(&x.rho(), big), &linalg::reduce(&y.rho(), big), big));
            prop_assert_eq!(x.conj().conj(), x);
            prop_assert_eq!(x.mul(&y).norm(), x.norm() * y.norm());
            prop_assert_eq!(x.norm(), linalg::det(&linalg::reduce(&x.rho(), big), big));
            prop_assert_eq!(x.trace(), x.rho()[0][0] + x.rho()[1][1]);
            prop_assert!(x.norm() >= 0);
        }

        #[test]
        fn pair_pow_is_an_action(a1 in -6i64..6, b1 in -6i64..6, a2 in -6i64..6, b2 in -6i64..6, u in 1u64..540, v in 1u64..540) {
            let f = prime_field(541).unwrap();
            let pv = PairValue::new(ffield::from_u64(&f, u), ffield::from_u64(&f, v)).unwrap();
            let o = zi();
            let (x, y) = (o.elem(a1, b1), o.elem(a2, b2));
            prop_assert_eq!(pair_pow(&pair_pow(&pv, &x).unwrap(), &y).unwrap(), pair_pow(&pv, &x.mul(&y)).unwrap());
            prop_assert_eq!(pair_pow(&pv, &o.int(1)).unwrap(), pv.clone());
            prop_assert_eq!(pair_pow(&pv, &o.int(a1)).unwrap(), pv.pow_int(a1).unwrap());
        }
    }
}
