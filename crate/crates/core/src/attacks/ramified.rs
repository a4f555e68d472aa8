//! The attack for torsion levels dividing the discriminant, using `T′`.

use super::instance::AttackInstance;
use super::norm::CandidateSet;
use crate::arith;
use crate::curve::Point;
use crate::dlog::int_dlog_pair;
use crate::error::{Error, Result};
use crate::orientation::{Coords, Orientation};
use crate::pairings::{tprime, ReducedPairValue};
use crate::qorder::{OrderDesc, OrderElement};

/// `τ′` with `Tr τ′ ≡ N τ′ ≡ 0 (mod m′)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauSelection {
    pub tau_prime: OrderElement,
    pub m_prime: u64,
    /// `m′ = 1`, so the selection carries no information.
    pub degenerate: bool,
}

/// Choose `τ′` from `σ = (Δ + √Δ)/2`, written as `(Δ - t)/2 + τ`.
pub fn ramified_tau_select(order: OrderDesc, m: u64) -> Result<TauSelection> {
    let disc = order.disc();
    if m == 0 || disc.rem_euclid(m as i64) != 0 {
        return Err(Error::NotRamified(m));
    }
    // Δ ≡ t (mod 2), so the halving is exact
    let sigma = order.elem((disc - order.t) / 2, 1);
    let (tau_prime, m_prime) = if m % 2 == 1 {
        (sigma.scale(2), m)
    } else if m.is_multiple_of(4) {
        (sigma, m / 4)
    } else {
        (sigma, m / 2)
    };
    Ok(TauSelection { tau_prime, m_prime, degenerate: m_prime == 1 })
}

#[derive(Clone, Debug)]
pub struct RamifiedResult {
    pub selection: TauSelection,
    /// `Q = [τ′]P`; the candidates target `φQ`.
    pub q: Point,
    pub nval: u64,
    /// The `a` with `a² ≡ N(λ) (mod m′)`.
    pub roots: Vec<u64>,
    pub candidates: CandidateSet,
}

fn full_tprime(r: &Point, orient: &Orientation) -> Result<ReducedPairValue> {
    let s = tprime(r, r, orient.m(), orient)?;
    if s.order() != orient.m() {
        return Err(Error::DegenerateSelfPairing);
    }
    Ok(s)
}

/// Candidates for `φ([τ′]P)` from the generators `P = gen`, `P′ = gen2`.
pub fn ramified_attack(inst: &AttackInstance) -> Result<RamifiedResult> {
    let m = inst.m();
    let selection = ramified_tau_select(inst.orient.order(), m)?;
    let tau = &selection.tau_prime;
    let o = inst.orient.suborder(tau)?;
    let o2 = inst.orient2.suborder(tau)?;
    let (p, p2) = (&inst.gen, &inst.gen2);
    let s = full_tprime(p, &o)?;
    let s2 = full_tprime(p2, &o2)?;
    let nval = int_dlog_pair(&s2, &s.pow_int(inst.degree as i64)?, m)?;
    let mp = selection.m_prime;
    let roots = arith::sqrt_mod_all(nval % mp, mp)?;

    let base = o2.coords(&o2.apply_tau(p2)?)?;
    let cofactor = m / mp;
    let mut coords: Vec<Coords> = Vec::new();
    for &a in &roots {
        for x in 0..cofactor as i64 {
            for y in 0..cofactor as i64 {
                let c = [
                    arith::modp(a as i128 * base[0] as i128 + (mp as i64 * x) as i128, m) as i64,
                    arith::modp(a as i128 * base[1] as i128 + (mp as i64 * y) as i128, m) as i64,
                ];
                if !coords.contains(&c) {
                    coords.push(c);
                }
            }
        }
    }
    let points = coords.iter().map(|c| o2.point(*c)).collect();
    let bound = cofactor * cofactor * roots.len() as u64;
    let candidates = CandidateSet { points, coords, multipliers: Vec::new(), m, nval, bound };
    Ok(RamifiedResult { q: o.apply_tau(p)?, selection, nval, roots, candidates })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_selection_cases() {
        // Z[√-27]: Δ = -108
        let o = OrderDesc::new(0, 27).unwrap();
        let s = ramified_tau_select(o, 27).unwrap();
        assert_eq!(s.m_prime, 27);
        assert_eq!(s.tau_prime.trace().rem_euclid(27), 0);
        assert_eq!(s.tau_prime.norm().rem_euclid(27), 0);
        let sq = s.tau_prime.mul(&s.tau_prime).reduce(27);
        assert_eq!((sq.a, sq.b), (0, 0));

        let s = ramified_tau_select(OrderDesc::gaussian(), 2).unwrap();
        assert_eq!(s.m_prime, 1);
        assert!(s.degenerate);

        let o = OrderDesc::new(0, 5).unwrap();
        assert!(matches!(ramified_tau_select(o, 3), Err(Error::NotRamified(3))));
    }
}
