//! Full torsion images from one image (SIDH₁ to SIDH), and Diagonal SIDH.

use super::instance::AttackInstance;
use super::norm::{full_self_pairing, require_unramified, verify_matrices, Recovered};
use crate::arith;
use crate::curve::{Isogeny, Point};
use crate::dlog::{dlog_mu, int_dlog_pair};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat2};
use crate::orientation::{eigenvector, eigenvectors_mod, Coords};
use crate::qorder::{splitting, unit_sqrts, Splitting};

/// The images of the stored basis `(P, Q)` under `φ`.
#[derive(Clone, Debug)]
pub struct TorsionImages {
    pub matrix: Mat2,
    pub images: (Point, Point),
}

fn reduce_vec(c: Coords, qk: u64) -> Coords {
    [arith::modp(c[0] as i128, qk) as i64, arith::modp(c[1] as i128, qk) as i64]
}

fn inv(a: i64, qk: u64) -> Result<i64> {
    arith::inv_mod(a as i128, qk).map(|v| v as i64).ok_or(Error::CoefficientNotInvertible)
}

/// Recover `φ` on all of `E[m]` from `(R, φR)` for one point `R` of order `m`.
pub fn sidh1_to_sidh(inst: &AttackInstance, r: &Point, fr: &Point) -> Result<TorsionImages> {
    let m = inst.m();
    let (o, o2) = (&inst.orient, &inst.orient2);
    let order = o.order();
    require_unramified(order, m)?;
    let cr = o.coords(r)?;
    let cfr = o2.coords(fr)?;
    // det Φ ≡ d·log_{e(P',Q')} e(P,Q)
    let omega = dlog_mu(o2.basis_pairing(), o.basis_pairing(), m)?;
    let det_phi = arith::modp(inst.degree as i128 * omega as i128, m) as i64;

    let mut parts: Vec<(Mat2, u64)> = Vec::new();
    for (q, e) in arith::factor(m) {
        let qk = q.pow(e);
        let (mt, mt2) = (linalg::reduce(&o.matrix(), qk), linalg::reduce(&o2.matrix(), qk));
        let (c, c2) = (reduce_vec(cr, qk), reduce_vec(cfr, qk));
        let local = match splitting(order.disc(), q) {
            Splitting::Ramified => return Err(Error::RamifiedPrime(q)),
            Splitting::Inert => {
                // R generates E[q^k] as a module, so Φ·[c | Mc] = [c' | M'c']
                let a = linalg::from_columns(c, linalg::apply(&mt, c, qk));
                let b = linalg::from_columns(c2, linalg::apply(&mt2, c2, qk));
                let a_inv = linalg::inverse(&a, qk).ok_or(Error::WrongOrder(m))?;
                linalg::mul(&b, &a_inv, qk)
            }
            Splitting::Split => {
                let [(s, sv), (t, tv)] = eigenvectors_mod(&mt, order, q, qk)?;
                let s2 = eigenvector(&mt2, sv, qk).ok_or(Error::NotSplit(q))?;
                let t2 = eigenvector(&mt2, tv, qk).ok_or(Error::NotSplit(q))?;
                let base = linalg::from_columns(s, t);
                let base2 = linalg::from_columns(s2, t2);
                let base_inv = linalg::inverse(&base, qk).ok_or(Error::NotSplit(q))?;
                let base2_inv = linalg::inverse(&base2, qk).ok_or(Error::NotSplit(q))?;
                let [a, b] = linalg::apply(&base_inv, c, qk);
                let [a2, b2] = linalg::apply(&base2_inv, c2, qk);
                // Φ is diag(k1, k2) between eigenbases, with k1·k2 fixed by the determinant
                let prod = arith::modp(
                    det_phi as i128 * linalg::det(&base, qk) as i128 * inv(linalg::det(&base2, qk), qk)? as i128,
                    qk,
                ) as i64;
                let (k1, k2) = if arith::gcd(a as i128, q as i128) == 1 {
                    let k1 = arith::modp(a2 as i128 * inv(a, qk)? as i128, qk) as i64;
                    (k1, arith::modp(prod as i128 * inv(k1, qk)? as i128, qk) as i64)
                } else if arith::gcd(b as i128, q as i128) == 1 {
                    let k2 = arith::modp(b2 as i128 * inv(b, qk)? as i128, qk) as i64;
                    (arith::modp(prod as i128 * inv(k2, qk)? as i128, qk) as i64, k2)
                } else {
                    return Err(Error::CoefficientNotInvertible);
                };
                linalg::mul(&base2, &linalg::mul(&[[k1, 0], [0, k2]], &base_inv, qk), qk)
            }
        };
        parts.push((local, qk));
    }
    let mut matrix = [[0i64; 2]; 2];
    for (i, row) in matrix.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let res: Vec<(u64, u64)> = parts.iter().map(|(a, qk)| (a[i][j] as u64, *qk)).collect();
            *cell = arith::crt(&res).0 as i64;
        }
    }
    if linalg::apply(&matrix, cr, m) != cfr {
        return Err(Error::InternalInconsistency("recovered matrix does not reproduce the given image".into()));
    }
    let images = (o2.point(linalg::column(&matrix, 0)), o2.point(linalg::column(&matrix, 1)));
    Ok(TorsionImages { matrix, images })
}

/// SIDH₁ end to end: full images, then the oracle.
pub fn sidh1_attack(inst: &AttackInstance) -> Result<(TorsionImages, Isogeny)> {
    let (r, fr) = inst.payload.sidh1.as_ref().ok_or_else(|| Error::Malformed("missing SIDH1 payload".into()))?;
    let imgs = sidh1_to_sidh(inst, r, fr)?;
    let rec = verify_matrices(inst, &[imgs.matrix])?;
    Ok((imgs, rec.isogeny))
}

#[derive(Clone, Debug)]
pub struct DiagonalResult {
    pub recovered: Recovered,
    /// `λ² mod m`.
    pub lambda_sq: u64,
    pub sqrt_count: usize,
    /// Whether the basis point used as module generator was `P` (else `Q`).
    pub used_p: bool,
}

/// Diagonal SIDH from generators `P'' ∈ ⟨φP⟩`, `Q'' ∈ ⟨φQ⟩`.
pub fn diagonal_sidh(inst: &AttackInstance, p_img: &Point, q_img: &Point) -> Result<DiagonalResult> {
    let m = inst.m();
    if m <= 4 * inst.degree {
        return Err(Error::Precondition(format!("m = {m} must exceed 4d = {}", 4 * inst.degree)));
    }
    let (o, o2) = (&inst.orient, &inst.orient2);
    require_unramified(o.order(), m)?;
    let (p, q) = inst.basis();
    let used_p = if o.is_module_generator(p)? {
        true
    } else if o.is_module_generator(q)? {
        false
    } else {
        return Err(Error::NoGeneratorAmongPQ);
    };
    let (g, g_img, h_img) = if used_p { (p, p_img, q_img) } else { (q, q_img, p_img) };
    let s = full_self_pairing(g, o)?;
    let s2 = full_self_pairing(g_img, o2)?;
    // λ ∈ Z here, so N(λ) = λ²
    let lambda_sq = int_dlog_pair(&s2, &s.pow_int(inst.degree as i64)?, m)?;
    let roots = unit_sqrts(m, lambda_sq as i64)?;
    let cg = o2.coords(g_img)?;
    let ch = o2.coords(h_img)?;
    let mut matrices = Vec::new();
    for &lam in &roots {
        if arith::gcd(lam as i128, m as i128) != 1 {
            continue;
        }
        let img = [cg[0] * lam as i64, cg[1] * lam as i64];
        let mt = super::norm::matrix_from_generator_image(inst, g, img)?;
        // the other image must lie on the line through its given generator
        let other = linalg::column(&mt, if used_p { 1 } else { 0 });
        if linalg::det(&linalg::from_columns(other, ch), m) == 0 {
            matrices.push(mt);
        }
    }
    let recovered = verify_matrices(inst, &matrices)?;
    Ok(DiagonalResult { recovered, lambda_sq, sqrt_count: roots.len(), used_p })
}
