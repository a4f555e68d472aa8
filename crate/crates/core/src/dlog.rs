//! Discrete logarithms in `μ_m`, two-dimensional point logarithms in `E[m]`,
//! and `O`-linear logarithms on reduced pair values.

use std::collections::HashMap;

use crate::arith;
use crate::curve::{weil_pairing, Point};
use crate::error::{Error, Result};
use crate::ffield::FieldElement;
use crate::linalg;
use crate::pairings::ReducedPairValue;
use crate::qorder::{OrderDesc, OrderElement};

/// Exact multiplicative order of `g`, given a multiple `m` of it.
pub fn order_dividing(g: &FieldElement, m: u64, fac: &[(u64, u32)]) -> u64 {
    let mut ord = m;
    for &(r, e) in fac {
        for _ in 0..e {
            if g.pow_u64(ord / r).is_one() {
                ord /= r;
            } else {
                break;
            }
        }
    }
    ord
}

/// Baby-step giant-step for `h = g^x` with `g` of prime order `r`.
fn bsgs(g: &FieldElement, h: &FieldElement, r: u64) -> Option<u64> {
    let step = (r as f64).sqrt().ceil() as u64 + 1;
    let mut table: HashMap<Vec<u64>, u64> = HashMap::with_capacity(step as usize);
    let mut acc = g.one_like();
    for j in 0..step {
        table.entry(acc.coeffs().to_vec()).or_insert(j);
        acc = &acc * g;
    }
    let giant = g.pow_u64(step).inv().ok()?;
    let mut cur = h.clone();
    for i in 0..=step {
        if let Some(&j) = table.get(cur.coeffs()) {
            return Some((i * step + j) % r);
        }
        cur = &cur * &giant;
    }
    None
}

/// `x` with `g^x = h` and `0 ≤ x < ord(g)`, where `ord(g) | m`.
pub fn dlog_mu(g: &FieldElement, h: &FieldElement, m: u64) -> Result<u64> {
    if h.is_zero() || g.is_zero() {
        return Err(Error::NotInSubgroup);
    }
    let fac = arith::require_smooth(m)?;
    if !g.pow_u64(m).is_one() {
        return Err(Error::NotInSubgroup);
    }
    let ord = order_dividing(g, m, &fac);
    if !h.pow_u64(ord).is_one() {
        return Err(Error::NotInSubgroup);
    }
    let mut residues = Vec::new();
    for (r, _) in arith::factor(ord) {
        let (re, e) = arith::prime_power_part(ord, r);
        let gq = g.pow_u64(ord / re);
        let hq = h.pow_u64(ord / re);
        let gamma = gq.pow_u64(re / r);
        let mut x = 0u64;
        let mut rk = 1u64;
        for k in 0..e {
            // strip known digits, then project to the order-r subgroup
            let hk = (&hq * &gq.pow_u64(x).inv()?).pow_u64(re / (rk * r));
            let d = bsgs(&gamma, &hk, r).ok_or(Error::NotInSubgroup)?;
            x += d * rk;
            if k + 1 < e {
                rk *= r;
            }
        }
        residues.push((x % re, re));
    }
    let (x, _) = arith::crt(&residues);
    if g.pow_u64(x) != *h {
        return Err(Error::NotInSubgroup);
    }
    Ok(x)
}

/// `(u, v)` with `R = [u]P + [v]Q`, given `w = e_m(P, Q)`.
pub fn point_dlog2d_with(r: &Point, p: &Point, q: &Point, m: u64, w: &FieldElement) -> Result<(u64, u64)> {
    if !r.mul_u64(m).is_infinity() {
        return Err(Error::NotInTorsion);
    }
    if r.is_infinity() {
        return Ok((0, 0));
    }
    let u = dlog_mu(w, &weil_pairing(r, q, m)?, m)?;
    let v = dlog_mu(w, &weil_pairing(p, r, m)?, m)?;
    if Point::lincomb(p, u as i64, q, v as i64) != *r {
        return Err(Error::InternalInconsistency(format!("2D log ({u}, {v}) does not reproduce the point")));
    }
    Ok((u, v))
}

/// `(u, v)` with `R = [u]P + [v]Q` for a basis `(P, Q)` of `E[m]`.
pub fn point_dlog2d(r: &Point, p: &Point, q: &Point, m: u64) -> Result<(u64, u64)> {
    let w = weil_pairing(p, q, m)?;
    point_dlog2d_with(r, p, q, m, &w)
}

/// `λ ∈ O/mO` with `base^λ = target`.
pub fn olinear_dlog(base: &ReducedPairValue, target: &ReducedPairValue, m: u64, order: OrderDesc) -> Result<OrderElement> {
    let (w1x, w1y) = base.logs_at(m)?;
    let (w2x, w2y) = target.logs_at(m)?;
    let (w1x, w1y) = (w1x as i64, w1y as i64);
    // ρ(a + bτ)·w1 is linear in (a, b)
    let a = [[w1x, -order.n * w1y], [w1y, w1x + order.t * w1y]];
    let sols = linalg::solve_mod(&a, &[w2x as i64, w2y as i64], m);
    match sols.len() {
        0 => Err(Error::NoSolution),
        1 => Ok(order.elem(sols[0][0], sols[0][1])),
        _ => Err(Error::DegenerateBase),
    }
}

/// `λ ∈ O/mO` with `base^λ = right` and `base^λ̄ = left`, for values of a
/// sesquilinear pairing `T(P, [λ]P)` and `T([λ]P, P)`. The second equation
/// fixes the part of `λ` the first misses when `base` lies in a proper ideal.
pub fn olinear_dlog_both(base: &ReducedPairValue, right: &ReducedPairValue, left: &ReducedPairValue, m: u64, order: OrderDesc) -> Result<OrderElement> {
    let (w1x, w1y) = base.logs_at(m)?;
    let (rx, ry) = right.logs_at(m)?;
    let (lx, ly) = left.logs_at(m)?;
    let (w1x, w1y) = (w1x as i64, w1y as i64);
    let a = [[w1x, -order.n * w1y], [w1y, w1x + order.t * w1y]];
    // λ̄ = (a + tb) - bτ
    let conj = [[1, order.t], [0, -1]];
    let ac = linalg::mul(&a, &conj, m);
    let rows = [a[0], a[1], ac[0], ac[1]];
    let rhs = [rx as i64, ry as i64, lx as i64, ly as i64];
    let sols = linalg::solve_mod(&rows, &rhs, m);
    match sols.len() {
        0 => Err(Error::NoSolution),
        1 => Ok(order.elem(sols[0][0], sols[0][1])),
        _ => Err(Error::DegenerateBase),
    }
}

/// The unique `x ∈ Z/m` with `base^x = target`.
pub fn int_dlog_pair(base: &ReducedPairValue, target: &ReducedPairValue, m: u64) -> Result<u64> {
    let (bx, by) = base.logs_at(m)?;
    let (tx, ty) = target.logs_at(m)?;
    let sols = linalg::solve_mod(&[[bx as i64, 0], [by as i64, 0]], &[tx as i64, ty as i64], m);
    let mut xs: Vec<i64> = sols.into_iter().map(|s| s[0]).collect();
    xs.dedup();
    match xs.len() {
        0 => Err(Error::NoSolution),
        1 => Ok(xs[0] as u64),
        _ => Err(Error::DegenerateBase),
    }
}
