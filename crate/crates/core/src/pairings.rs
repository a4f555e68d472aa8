//! Reduced Tate pairings, the sesquilinear pairing built from two of them,
//! its `α`-twisted variant, the modified pairing for ramified levels, and a
//! slow divisor-level reference evaluation.

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::curve::{self, miller_eval, tate_raw, Point};
use crate::dlog;
use crate::error::{Error, Result};
use crate::ffield::{self, FieldElement};
use crate::orientation::Orientation;
use crate::qorder::{pair_pow, OrderElement, PairValue, ENUM_BUDGET};

/// A pair value with both coordinates in `μ_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedPairValue {
    pub value: PairValue,
    pub m: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ReducedJson {
    pub m: String,
    pub g: Vec<String>,
    pub logs: [String; 2],
}

impl ReducedPairValue {
    pub fn new(value: PairValue, m: u64) -> Result<Self> {
        if !value.x.pow_u64(m).is_one() || !value.y.pow_u64(m).is_one() {
            return Err(Error::NotInSubgroup);
        }
        Ok(ReducedPairValue { value, m })
    }

    pub fn one_like(x: &FieldElement, m: u64) -> Self {
        ReducedPairValue { value: PairValue::one_like(x), m }
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    /// Logs of both coordinates base the canonical generator of `μ_m`.
    pub fn logs(&self) -> Result<(u64, u64)> {
        self.logs_at(self.m)
    }

    /// Logs base the canonical generator of `μ_n`.
    pub fn logs_at(&self, n: u64) -> Result<(u64, u64)> {
        let g = ffield::mu_generator(self.value.x.field(), n)?;
        Ok((dlog::dlog_mu(&g, &self.value.x, n)?, dlog::dlog_mu(&g, &self.value.y, n)?))
    }

    /// Z-order: lcm of the coordinate orders.
    pub fn order(&self) -> u64 {
        let fac = arith::factor(self.m);
        let ox = dlog::order_dividing(&self.value.x, self.m, &fac);
        let oy = dlog::order_dividing(&self.value.y, self.m, &fac);
        arith::lcm(ox, oy)
    }

    pub fn pow(&self, alpha: &OrderElement) -> Result<Self> {
        Ok(ReducedPairValue { value: pair_pow(&self.value, alpha)?, m: self.m })
    }

    pub fn pow_int(&self, e: i64) -> Result<Self> {
        Ok(ReducedPairValue { value: self.value.pow_int(e)?, m: self.m })
    }

    pub fn mul(&self, o: &Self) -> Self {
        ReducedPairValue { value: self.value.mul(&o.value), m: self.m }
    }

    /// Image in `μ_n` for `n | m`.
    pub fn project(&self, n: u64) -> Result<Self> {
        if !self.m.is_multiple_of(n) {
            return Err(Error::Precondition(format!("{n} does not divide level {}", self.m)));
        }
        ReducedPairValue::new(self.value.pow_int((self.m / n) as i64)?, n)
    }

    pub fn to_json(&self) -> Result<ReducedJson> {
        let g = ffield::mu_generator(self.value.x.field(), self.m)?;
        let (u, v) = self.logs()?;
        Ok(ReducedJson { m: self.m.to_string(), g: g.to_strings(), logs: [u.to_string(), v.to_string()] })
    }
}

/// One representative of `t_m(P, Q)`.
pub fn tate(p: &Point, q: &Point, m: u64) -> Result<FieldElement> {
    tate_raw(p, q, m)
}

/// `t_m(P, Q)^{(q-1)/m}`.
pub fn tate_reduced(p: &Point, q: &Point, m: u64) -> Result<FieldElement> {
    if !p.mul_u64(m).is_infinity() {
        return Err(Error::PointNotInTorsion(m));
    }
    curve::tate_reduced(p, q, m)
}

fn level_check(n: u64, orient: &Orientation) -> Result<()> {
    if n == 0 || !orient.m().is_multiple_of(n) {
        return Err(Error::Precondition(format!("level {n} must divide the orientation level {}", orient.m())));
    }
    Ok(())
}

/// `T̂_n(P, Q)` from `t1 = t_n(P, Q)` and `t2 = t_n([τ]P, Q)` as
/// `(t1^{2N} t2^{-Tr}, t2^2 t1^{-Tr})`.
pub fn sesqui_t(p: &Point, q: &Point, n: u64, orient: &Orientation) -> Result<ReducedPairValue> {
    level_check(n, orient)?;
    let one = ffield::one(orient.curve().field());
    if n == 1 {
        return Ok(ReducedPairValue::one_like(&one, 1));
    }
    let (t, nn) = (orient.order().t, orient.order().n);
    let t1 = tate_reduced(p, q, n)?;
    let t2 = tate_reduced(&orient.apply_tau(p)?, q, n)?;
    let x = &t1.pow_i64(2 * nn)? * &t2.pow_i64(-t)?;
    let y = &t2.square() * &t1.pow_i64(-t)?;
    ReducedPairValue::new(PairValue::new(x, y)?, n)
}

/// The same value from three Tate pairings, following the literal formula
/// `(t(P,Q)^{2N} t([-τ]P,Q)^{Tr}, t([τ - τ̄]P, Q))`.
pub fn sesqui_t_literal(p: &Point, q: &Point, n: u64, orient: &Orientation) -> Result<ReducedPairValue> {
    level_check(n, orient)?;
    let o = orient.order();
    let t1 = tate_reduced(p, q, n)?;
    let neg_tau = orient.apply(&o.elem(0, -1), p)?;
    let diff = orient.apply(&o.elem(-o.t, 2), p)?;
    let x = &t1.pow_i64(2 * o.n)? * &tate_reduced(&neg_tau, q, n)?.pow_i64(o.t)?;
    let y = tate_reduced(&diff, q, n)?;
    ReducedPairValue::new(PairValue::new(x, y)?, n)
}

/// `T̂_{N(α)}(P, Q) = T̂_α(P, Q)^{ᾱ}` together with `T̂_α` itself when `ᾱ` is
/// invertible modulo `α`.
#[derive(Clone, Debug)]
pub struct AlphaPairing {
    pub alpha: OrderElement,
    pub twisted: ReducedPairValue,
    untwisted: Option<ReducedPairValue>,
}

impl AlphaPairing {
    pub fn untwisted(&self) -> Result<&ReducedPairValue> {
        self.untwisted.as_ref().ok_or(Error::ConjugateNotInvertible)
    }

    pub fn conjugate_invertible(&self) -> bool {
        self.untwisted.is_some()
    }
}

/// `β` with `βᾱ ≡ 1 (mod αO)`, by enumeration of `O/N(α)O`.
pub fn conj_inverse_mod_alpha(alpha: &OrderElement) -> Result<Option<OrderElement>> {
    let n = alpha.norm().unsigned_abs();
    if n.saturating_mul(n) > ENUM_BUDGET {
        return Err(Error::BudgetExceeded(format!("|O/{n}O| exceeds {ENUM_BUDGET}")));
    }
    let o = alpha.order;
    let conj = alpha.conj();
    for a in 0..n as i64 {
        for b in 0..n as i64 {
            let beta = o.elem(a, b);
            // x ∈ αO iff x·ᾱ ∈ N(α)O
            let r = beta.mul(&conj).sub(&o.int(1)).mul(&conj);
            if r.eq_mod(&o.int(0), n) {
                return Ok(Some(beta));
            }
        }
    }
    Ok(None)
}

pub fn sesqui_t_alpha(p: &Point, q: &Point, alpha: &OrderElement, orient: &Orientation) -> Result<AlphaPairing> {
    let one = ffield::one(orient.curve().field());
    if alpha.is_integer() {
        let k = alpha.a.unsigned_abs();
        if k == 0 {
            return Err(Error::Precondition("alpha must be nonzero".into()));
        }
        let base = sesqui_t(p, q, k, orient)?;
        return Ok(AlphaPairing { alpha: *alpha, twisted: base.pow(alpha)?, untwisted: Some(base) });
    }
    let n = alpha.norm() as u64;
    level_check(n, orient)?;
    if !orient.apply(&alpha.conj(), p)?.is_infinity() {
        return Err(Error::Precondition("P must be killed by the conjugate of alpha".into()));
    }
    let twisted = if n == 1 { ReducedPairValue::one_like(&one, 1) } else { sesqui_t(p, q, n, orient)? };
    let untwisted = match conj_inverse_mod_alpha(alpha)? {
        Some(beta) => Some(twisted.pow(&beta)?),
        None => None,
    };
    Ok(AlphaPairing { alpha: *alpha, twisted, untwisted })
}

fn collision(e: Error) -> Error {
    match e {
        Error::DivisorSupportCollision => Error::SupportCollision,
        other => other,
    }
}

/// `g(S)/g(T)` for `div g = a(A) + b(B) - (a+b)(∞)`, which must be principal.
fn two_point_eval(pa: &Point, a: i64, pb: &Point, b: i64, s: &Point, t: &Point) -> Result<FieldElement> {
    let aa = pa.mul_i64(a);
    if !aa.add(&pb.mul_i64(b)).is_infinity() {
        return Err(Error::NonPrincipalDivisor);
    }
    let fa = miller_eval(pa, a, s, t).map_err(collision)?;
    let fb = miller_eval(pb, b, s, t).map_err(collision)?;
    let mut v = &fa * &fb;
    if let Some(xa) = aa.x() {
        let (Some(xs), Some(xt)) = (s.x(), t.x()) else { return Err(Error::SupportCollision) };
        let num = xs - xa;
        let den = xt - xa;
        if num.is_zero() || den.is_zero() {
            return Err(Error::SupportCollision);
        }
        v = &v * &(num * den.inv()?);
    }
    if v.is_zero() {
        return Err(Error::SupportCollision);
    }
    Ok(v)
}

/// Unreduced `T̂_α(P, Q)` straight from the divisor definition, with the
/// auxiliary point `R ∈ E[m]` supplied by the caller.
pub fn sesqui_direct(p: &Point, q: &Point, alpha: &OrderElement, orient: &Orientation, r_aux: &Point) -> Result<PairValue> {
    let one = ffield::one(orient.curve().field());
    let o = orient.order();
    let rho = alpha.rho();
    let (a, b, c, d) = (rho[0][0], rho[0][1], rho[1][0], rho[1][1]);
    let neg_tau = o.elem(0, -1);
    let mtp = orient.apply(&neg_tau, p)?;
    let qr = q.add(r_aux);
    let (s1, t1) = (orient.apply(&neg_tau, &qr)?, orient.apply(&neg_tau, r_aux)?);
    let (s2, t2) = (qr, r_aux.clone());
    let support = [&mtp, p];
    for pt in [&s1, &t1, &s2, &t2] {
        if pt.is_infinity() || support.contains(&pt) {
            return Err(Error::SupportCollision);
        }
    }
    if (alpha.a, alpha.b) == (1, 0) {
        return Ok(PairValue::one_like(&one));
    }
    let f1_d1 = two_point_eval(&mtp, a, p, b, &s1, &t1)?;
    let f2_d1 = two_point_eval(&mtp, c, p, d, &s1, &t1)?;
    let f1_d2 = two_point_eval(&mtp, a, p, b, &s2, &t2)?;
    let f2_d2 = two_point_eval(&mtp, c, p, d, &s2, &t2)?;
    let x = &(&f1_d1 * &f1_d2.pow_i64(o.t)?) * &f2_d2.pow_i64(o.n)?;
    let y = &f2_d1 * &f1_d2.inv()?;
    PairValue::new(x, y)
}

/// Reduce a direct evaluation for comparison: integer `α = k` is raised to
/// `(q-1)/|k|`; otherwise the value is twisted by `ᾱ` and raised to `(q-1)/N(α)`.
pub fn reduce_direct(v: &PairValue, alpha: &OrderElement) -> Result<ReducedPairValue> {
    let f = v.x.field().clone();
    if alpha.is_integer() {
        let k = alpha.a.unsigned_abs();
        let e = ffield::reduction_exponent(&f, k)?;
        return ReducedPairValue::new(v.pow_biguint(&e), k);
    }
    let n = alpha.norm() as u64;
    let e = ffield::reduction_exponent(&f, n)?;
    ReducedPairValue::new(pair_pow(v, &alpha.conj())?.pow_biguint(&e), n)
}

/// `T′_m(P, Q) = (t_m([τ]P, Q), t_m(P, Q))`, reduced.
pub fn tprime(p: &Point, q: &Point, m: u64, orient: &Orientation) -> Result<ReducedPairValue> {
    level_check(m, orient)?;
    let x = tate_reduced(&orient.apply_tau(p)?, q, m)?;
    let y = tate_reduced(p, q, m)?;
    ReducedPairValue::new(PairValue::new(x, y)?, m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SelfPairing {
    Sesqui,
    TPrime,
}

/// Order of the self-pairing of a point of exact order `m`.
pub fn self_pairing_order(p: &Point, m: u64, orient: &Orientation, which: SelfPairing) -> Result<u64> {
    if !p.has_order(m) {
        return Err(Error::WrongOrder(m));
    }
    let v = match which {
        SelfPairing::Sesqui => sesqui_t(p, p, m, orient)?,
        SelfPairing::TPrime => tprime(p, p, m, orient)?,
    };
    Ok(v.order())
}
