//! Recovering the action of `τ` on `E[m]` from a sesquilinear pairing oracle.

use std::collections::BTreeMap;

use rand::Rng;

use crate::arith;
use crate::curve::Point;
use crate::dlog::olinear_dlog_both;
use crate::error::{Error, Result};
use crate::linalg::{self, Mat2};
use crate::orientation::Coords;
use crate::pairings::ReducedPairValue;
use crate::qorder::{splitting, OrderDesc, Splitting};

/// Rounds used when the caller has no preference.
pub const DEFAULT_ROUNDS: usize = 15;

/// `φ(m)/m` must exceed this for the vote to concentrate.
pub const TOTIENT_RATIO_BOUND: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn vec_order(c: Coords, m: u64) -> u64 {
    m / arith::gcd(arith::gcd(c[0] as i128, c[1] as i128), m as i128) as u64
}

fn random_coords<R: Rng + ?Sized>(m: u64, rng: &mut R) -> Coords {
    [rng.gen_range(0..m) as i64, rng.gen_range(0..m) as i64]
}

/// One vote: the matrix of `τ` derived from a random pair, or `None` to abstain.
/// Both argument orders are used, since `T̂_m` can be degenerate when `μ_{m²}`
/// is not in the field.
fn one_round<R, F>(basis: (&Point, &Point), m: u64, oracle: &F, order: OrderDesc, rng: &mut R) -> Option<Mat2>
where
    R: Rng + ?Sized,
    F: Fn(&Point, &Point) -> Result<ReducedPairValue>,
{
    let cp = loop {
        let c = random_coords(m, rng);
        if vec_order(c, m) == m {
            break c;
        }
    };
    let cq = loop {
        let c = random_coords(m, rng);
        if linalg::inverse(&linalg::from_columns(cp, c), m).is_some() {
            break c;
        }
    };
    let (b0, b1) = basis;
    let p = Point::lincomb(b0, cp[0], b1, cp[1]);
    let q = Point::lincomb(b0, cq[0], b1, cq[1]);
    let lam = olinear_dlog_both(&oracle(&p, &p).ok()?, &oracle(&p, &q).ok()?, &oracle(&q, &p).ok()?, m, order).ok()?;
    // Q = [x + yτ]P, so τP = y⁻¹(Q - xP)
    let y_inv = arith::inv_mod(lam.b as i128, m)? as i64;
    let ctp = [
        arith::modp(y_inv as i128 * (cq[0] - lam.a * cp[0]) as i128, m) as i64,
        arith::modp(y_inv as i128 * (cq[1] - lam.a * cp[1]) as i128, m) as i64,
    ];
    // τ²P = tτP - nP
    let cttp = [
        arith::modp(order.t as i128 * ctp[0] as i128 - order.n as i128 * cp[0] as i128, m) as i64,
        arith::modp(order.t as i128 * ctp[1] as i128 - order.n as i128 * cp[1] as i128, m) as i64,
    ];
    let inv = linalg::inverse(&linalg::from_columns(cp, ctp), m)?;
    Some(linalg::mul(&linalg::from_columns(ctp, cttp), &inv, m))
}

/// The matrix of `τ` on `basis`, by majority over `rounds` random pairs.
pub fn recover_orientation<R, F>(basis: (&Point, &Point), m: u64, oracle: F, order: OrderDesc, rounds: usize, rng: &mut R) -> Result<Mat2>
where
    R: Rng + ?Sized,
    F: Fn(&Point, &Point) -> Result<ReducedPairValue>,
{
    let fac = arith::require_smooth(m)?;
    if let Some(&(q, _)) = fac.iter().find(|(q, _)| splitting(order.disc(), *q) == Splitting::Ramified) {
        return Err(Error::RamifiedPrime(q));
    }
    let ratio = arith::euler_phi(m) as f64 / m as f64;
    if ratio <= TOTIENT_RATIO_BOUND {
        return Err(Error::Precondition(format!("φ(m)/m = {ratio:.3} is too small for a majority vote")));
    }
    let mut votes: BTreeMap<Mat2, usize> = BTreeMap::new();
    let mut cast = 0usize;
    for _ in 0..rounds {
        if let Some(mt) = one_round(basis, m, &oracle, order, rng) {
            *votes.entry(mt).or_default() += 1;
            cast += 1;
        }
    }
    votes
        .into_iter()
        .find(|(_, n)| 2 * n > cast)
        .map(|(mt, _)| mt)
        .ok_or(Error::MajorityInconclusive)
}
