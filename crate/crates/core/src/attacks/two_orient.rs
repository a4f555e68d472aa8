//! The attack with two orientations: `N(λ)` and `λ²` together pin `λ` down.

use super::instance::AttackInstance;
use super::norm::{full_self_pairing, matrix_from_generator_image, require_unramified, verify_matrices, Recovered};
use crate::dlog::olinear_dlog;
use crate::error::{Error, Result};
use crate::linalg::{self, Mat2};
use crate::orientation::Orientation;
use crate::pairings::sesqui_t;
use crate::qorder::{solve_lambda, OrderDesc, OrderElement};

#[derive(Clone, Debug)]
pub struct TwoOrientResult {
    pub nval: u64,
    pub lambda_sq: OrderElement,
    /// Every `λ` with the recovered norm and square, in `(a, b)` order.
    pub candidates: Vec<OrderElement>,
    pub recovered: Recovered,
}

/// `M_σ M_τ ≡ M_τ̄ M_σ (mod m)`: conjugating by `σ` acts as complex conjugation.
fn anti_commutes(sigma: &Mat2, tau: &Mat2, order: OrderDesc, m: u64) -> bool {
    let tau_bar = linalg::add(&linalg::scale(&linalg::IDENTITY, order.t, m), &linalg::scale(tau, -1, m), m);
    linalg::mul(sigma, tau, m) == linalg::mul(&tau_bar, sigma, m)
}

fn check_pair(o: &Orientation, s: &Orientation) -> Result<()> {
    if !anti_commutes(&s.matrix(), &o.matrix(), o.order(), o.m()) {
        return Err(Error::NotAntiCommuting);
    }
    Ok(())
}

pub fn two_orientation_attack(inst: &AttackInstance) -> Result<TwoOrientResult> {
    let m = inst.m();
    let (o, o2) = (&inst.orient, &inst.orient2);
    let (s, s2) = inst.payload.second.as_ref().ok_or_else(|| Error::Malformed("missing second orientation".into()))?;
    check_pair(o, s)?;
    check_pair(o2, s2)?;
    require_unramified(o.order(), m)?;
    let order = o.order();
    let (p, p2) = (&inst.gen, &inst.gen2);
    let d = inst.degree as i64;

    let base = full_self_pairing(p2, o2)?;
    let norm = olinear_dlog(&base, &full_self_pairing(p, o)?.pow_int(d)?, m, order)?;
    if norm.b.rem_euclid(m as i64) != 0 {
        return Err(Error::InternalInconsistency("norm of λ is not an integer".into()));
    }
    let nval = norm.a.rem_euclid(m as i64) as u64;

    let sp = s.apply_tau(p)?;
    let sp2 = s2.apply_tau(p2)?;
    let lambda_sq = olinear_dlog(&sesqui_t(&sp2, p2, m, o2)?, &sesqui_t(&sp, p, m, o)?.pow_int(d)?, m, order)?;

    let candidates = solve_lambda(nval as i64, &lambda_sq, m, order)?;
    let c2 = o2.coords(p2)?;
    let matrices = candidates
        .iter()
        .map(|l| matrix_from_generator_image(inst, p, o2.apply_coords(l, c2)))
        .collect::<Result<Vec<_>>>()?;
    let recovered = verify_matrices(inst, &matrices)?;
    Ok(TwoOrientResult { nval, lambda_sq, candidates, recovered })
}
