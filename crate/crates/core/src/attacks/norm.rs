//! Recovering `N(λ)` for `φP = [λ]P'` and enumerating the matching images.

use super::instance::AttackInstance;
use super::oracle::{IsogenyOracle, Verdict};
use super::select_verified;
use crate::arith;
use crate::curve::{Isogeny, Point};
use crate::dlog::int_dlog_pair;
use crate::error::{Error, Result};
use crate::linalg::{self, Mat2};
use crate::orientation::{Coords, Orientation};
use crate::pairings::{sesqui_t, ReducedPairValue};
use crate::qorder::{splitting, OrderDesc, OrderElement, Splitting, ENUM_BUDGET};

/// Candidate torsion images together with the parameters that produced them.
#[derive(Clone, Debug)]
pub struct CandidateSet {
    pub points: Vec<Point>,
    /// Coordinates of each point on the basis of `E'[m]`.
    pub coords: Vec<Coords>,
    /// The multiplier behind each point, when there is one.
    pub multipliers: Vec<OrderElement>,
    pub m: u64,
    pub nval: u64,
    /// Declared size bound for this enumeration.
    pub bound: u64,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
    pub fn contains(&self, p: &Point) -> bool {
        self.points.contains(p)
    }
}

/// `RamifiedPrime(q)` for the first prime `q | m` dividing the discriminant.
pub fn require_unramified(order: OrderDesc, m: u64) -> Result<()> {
    for (q, _) in arith::factor(m) {
        if splitting(order.disc(), q) == Splitting::Ramified {
            return Err(Error::RamifiedPrime(q));
        }
    }
    Ok(())
}

/// `T̂(R, R)`, required to have order exactly `m`.
pub(crate) fn full_self_pairing(r: &Point, orient: &Orientation) -> Result<ReducedPairValue> {
    let s = sesqui_t(r, r, orient.m(), orient)?;
    if s.order() != orient.m() {
        return Err(Error::DegenerateSelfPairing);
    }
    Ok(s)
}

/// `N(λ) mod m` from `T̂(P, P)^d = T̂(P', P')^{N(λ)}`.
pub fn recover_norm_lambda(inst: &AttackInstance, p: &Point, p2: &Point) -> Result<u64> {
    let m = inst.m();
    require_unramified(inst.orient.order(), m)?;
    let s = full_self_pairing(p, &inst.orient)?;
    let s2 = full_self_pairing(p2, &inst.orient2)?;
    int_dlog_pair(&s2, &s.pow_int(inst.degree as i64)?, m)
}

/// Upper end of the expected candidate count, `m·∏(1 + 1/q)`.
pub fn candidate_upper_bound(m: u64) -> u64 {
    arith::factor(m).iter().fold(m, |acc, (q, _)| acc / q * (q + 1))
}

/// Lower end of the expected candidate count, `m·∏(1 - 1/q)`.
pub fn candidate_lower_bound(m: u64) -> u64 {
    arith::euler_phi(m)
}

/// Units `μ ∈ (O/mO)^×` with `N(μ) ≡ nval`: the multipliers that send a module
/// generator to another one. Empty when `nval` is not a unit.
pub fn norm_fiber(order: OrderDesc, m: u64, nval: u64) -> Result<Vec<OrderElement>> {
    arith::require_smooth(m)?;
    if m.saturating_mul(m) > ENUM_BUDGET {
        return Err(Error::BudgetExceeded(format!("|O/{m}O| exceeds {ENUM_BUDGET}")));
    }
    let nval = nval % m;
    if arith::gcd(nval as i128, m as i128) != 1 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for a in 0..m as i64 {
        for b in 0..m as i64 {
            let mu = order.elem(a, b);
            if arith::modp(mu.norm() as i128, m) == nval {
                out.push(mu);
            }
        }
    }
    Ok(out)
}

/// All `[μ]P'` for units `μ` with `N(μ) ≡ nval`.
pub fn candidate_images(inst: &AttackInstance, p2: &Point, nval: u64) -> Result<CandidateSet> {
    let m = inst.m();
    let o2 = &inst.orient2;
    let c2 = o2.coords(p2)?;
    let multipliers = norm_fiber(o2.order(), m, nval)?;
    let coords: Vec<Coords> = multipliers.iter().map(|mu| o2.apply_coords(mu, c2)).collect();
    let points = coords.iter().map(|c| o2.point(*c)).collect();
    Ok(CandidateSet { points, coords, multipliers, m, nval: nval % m, bound: candidate_upper_bound(m) })
}

/// The matrix of `φ` on the stored bases, given `φ(G) = [λ]G'` for a module generator `G`.
pub fn matrix_from_generator_image(inst: &AttackInstance, gen: &Point, image_coords: Coords) -> Result<Mat2> {
    let (p, q) = inst.basis();
    let (o, o2) = (&inst.orient, &inst.orient2);
    let col = |r: &Point| -> Result<Coords> {
        let mu = o.module_coords(gen, r)?;
        Ok(o2.apply_coords(&mu, image_coords))
    };
    Ok(linalg::from_columns(col(p)?, col(q)?))
}

/// Result of running candidates through the oracle.
#[derive(Clone, Debug)]
pub struct Recovered {
    pub isogeny: Isogeny,
    pub matrix: Mat2,
    pub candidates_tried: usize,
    pub index: usize,
}

/// Test every candidate torsion matrix with the oracle and keep a verified one.
pub fn verify_matrices(inst: &AttackInstance, matrices: &[Mat2]) -> Result<Recovered> {
    let oracle = IsogenyOracle::new(inst.basis(), inst.curve2(), inst.degree, inst.m())?;
    let o2 = &inst.orient2;
    let verdicts: Vec<Result<Verdict>> = crate::par::map(matrices, |mt| {
        let ip = o2.point(linalg::column(mt, 0));
        let iq = o2.point(linalg::column(mt, 1));
        oracle.check((&ip, &iq))
    });
    let (index, isogeny) = select_verified(verdicts)?.ok_or(Error::OracleExhausted)?;
    Ok(Recovered { isogeny, matrix: matrices[index], candidates_tried: matrices.len(), index })
}

/// Recover the hidden isogeny from the norm alone: every candidate image of
/// the generator fixes `φ` on `E[m]`, and the oracle decides.
pub fn class_group_attack(inst: &AttackInstance) -> Result<(u64, CandidateSet, Recovered)> {
    let nval = recover_norm_lambda(inst, &inst.gen, &inst.gen2)?;
    let cands = candidate_images(inst, &inst.gen2, nval)?;
    let matrices = cands
        .coords
        .iter()
        .map(|c| matrix_from_generator_image(inst, &inst.gen, *c))
        .collect::<Result<Vec<_>>>()?;
    let rec = verify_matrices(inst, &matrices)?;
    Ok((nval, cands, rec))
}
