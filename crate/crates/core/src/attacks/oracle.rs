//! Brute-force small-degree isogeny oracle: confirms claimed torsion images by
//! enumerating every cyclic kernel of the given degree.

use crate::arith;
use crate::curve::isogeny::{cyclic_isogenies, isomorphisms, MAX_ENUM_PRIME};
use crate::curve::{weil_pairing, CurveRef, Isogeny, Point};
use crate::error::{Error, Result};

/// Default bound on the degree the oracle will enumerate.
pub const DEFAULT_DEGREE_BUDGET: u64 = 64;

/// Environment variable overriding [`DEFAULT_DEGREE_BUDGET`].
pub const BUDGET_ENV: &str = "SESQUI_BUDGET";

pub fn degree_budget() -> u64 {
    std::env::var(BUDGET_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_DEGREE_BUDGET)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RejectReason {
    /// `e_m(φP, φQ) ≠ e_m(P, Q)^d`.
    WeilDegree,
    /// No enumerated chain lands on a curve isomorphic to `E'`.
    NoCodomain,
    /// Chains reach `E'` but none reproduces the images.
    NoMatch,
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Accept(Isogeny),
    Reject(RejectReason),
}

impl Verdict {
    pub fn accepted(&self) -> Option<&Isogeny> {
        match self {
            Verdict::Accept(phi) => Some(phi),
            Verdict::Reject(_) => None,
        }
    }
}

/// Enumerated chains from `E` with codomain isomorphic to `E'`, ready to test
/// any number of claimed image pairs.
#[derive(Clone, Debug)]
pub struct IsogenyOracle {
    p: Point,
    q: Point,
    m: u64,
    degree: u64,
    weil_target: crate::ffield::FieldElement,
    chains: Vec<(Isogeny, Vec<crate::curve::Isomorphism>)>,
}

impl IsogenyOracle {
    pub fn new(basis: (&Point, &Point), codomain: &CurveRef, degree: u64, m: u64) -> Result<IsogenyOracle> {
        let budget = degree_budget();
        if degree == 0 || degree > budget {
            return Err(Error::BudgetExceeded(format!("degree {degree} exceeds the oracle budget {budget}")));
        }
        if let Some(&(l, _)) = arith::factor(degree).iter().find(|(l, _)| *l > MAX_ENUM_PRIME) {
            return Err(Error::BudgetExceeded(format!("prime step {l} exceeds {MAX_ENUM_PRIME}")));
        }
        if (m as u128) * (m as u128) <= 4 * degree as u128 {
            return Err(Error::Precondition(format!("m² = {} must exceed 4d = {}", m * m, 4 * degree)));
        }
        let (p, q) = basis;
        let weil_target = weil_pairing(p, q, m)?.pow_u64(degree);
        let j = codomain.j_invariant();
        let chains = cyclic_isogenies(p.curve(), degree)?
            .into_iter()
            .filter(|c| c.codomain().j_invariant() == j)
            .map(|c| {
                let isos = isomorphisms(c.codomain(), codomain);
                (c, isos)
            })
            .collect();
        Ok(IsogenyOracle { p: p.clone(), q: q.clone(), m, degree, weil_target, chains })
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    /// Number of chains that survive the j-invariant filter.
    pub fn chain_count(&self) -> usize {
        self.chains.len()
    }

    /// Check claimed images `(φP, φQ)` of the basis.
    pub fn check(&self, images: (&Point, &Point)) -> Result<Verdict> {
        let (ip, iq) = images;
        if !ip.mul_u64(self.m).is_infinity() || !iq.mul_u64(self.m).is_infinity() {
            return Ok(Verdict::Reject(RejectReason::WeilDegree));
        }
        if weil_pairing(ip, iq, self.m)? != self.weil_target {
            return Ok(Verdict::Reject(RejectReason::WeilDegree));
        }
        if self.chains.is_empty() {
            return Ok(Verdict::Reject(RejectReason::NoCodomain));
        }
        let mut found: Option<Isogeny> = None;
        for (chain, isos) in &self.chains {
            let (cp, cq) = (chain.eval(&self.p)?, chain.eval(&self.q)?);
            // the identity isomorphism is listed first
            let Some(iso) = isos.iter().find(|i| i.eval(&cp) == *ip && i.eval(&cq) == *iq) else { continue };
            let phi = if iso.is_identity() && **iso.codomain() == **chain.codomain() {
                chain.clone()
            } else {
                chain.clone().then_iso(iso.clone())
            };
            match &found {
                Some(prev) if !prev.same_kernel_chain(&phi) => return Err(Error::AmbiguousMatch),
                Some(_) => {}
                None => found = Some(phi),
            }
        }
        Ok(match found {
            Some(phi) => Verdict::Accept(phi),
            None => Verdict::Reject(RejectReason::NoMatch),
        })
    }
}

/// One-shot form of [`IsogenyOracle`].
pub fn isogeny_oracle(basis: (&Point, &Point), codomain: &CurveRef, degree: u64, images: (&Point, &Point), m: u64) -> Result<Verdict> {
    IsogenyOracle::new(basis, codomain, degree, m)?.check(images)
}
