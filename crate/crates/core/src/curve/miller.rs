//! Miller functions evaluated on degree-zero divisors, and the Weil and
//! Tate-Lichtenbaum pairings built on them.

use rand::Rng;

use super::{aux_rng, Point};
use crate::error::{Error, Result};
use crate::ffield::{self, FieldElement};

/// Auxiliary-point retries before giving up on a pairing evaluation.
pub const AUX_RETRIES: usize = 32;

/// Running value of a function at `S` divided by its value at `T`, kept as
/// a fraction to avoid inversions inside the loop.
struct Ratio {
    num: FieldElement,
    den: FieldElement,
}

impl Ratio {
    fn one(like: &FieldElement) -> Self {
        Ratio { num: like.one_like(), den: like.one_like() }
    }
    fn square(&mut self) {
        self.num = self.num.square();
        self.den = self.den.square();
    }
    /// Multiply by `g(S)/g(T)` where `g = n/d`, given the four evaluations.
    fn absorb(&mut self, ns: FieldElement, ds: FieldElement, nt: FieldElement, dt: FieldElement) {
        self.num = &(&self.num * &ns) * &dt;
        self.den = &(&self.den * &ds) * &nt;
    }
    fn value(&self) -> FieldElement {
        &self.num * &self.den.inv().expect("denominators checked nonzero")
    }
}

fn nonzero(v: FieldElement) -> Result<FieldElement> {
    if v.is_zero() {
        Err(Error::DivisorSupportCollision)
    } else {
        Ok(v)
    }
}

/// Numerator and denominator of `l_{A,B} / v_{A+B}` at `X`, the function with
/// divisor `(A) + (B) - (A+B) - (∞)`.
fn chord(a: &Point, b: &Point, x: &Point) -> Result<(FieldElement, FieldElement)> {
    let (xx, xy) = x.coords().ok_or(Error::DivisorSupportCollision)?;
    let one = xx.one_like();
    let (Some((xa, ya)), Some((xb, yb))) = (a.coords(), b.coords()) else {
        return Ok((one.clone(), one));
    };
    if xa == xb && (ya + yb).is_zero() {
        return Ok((nonzero(xx - xa)?, one));
    }
    let c = a.add(b);
    let lambda = if xa == xb {
        (&(xa.square() * xa.from_u64_like(3)) + a.curve().a()) * (ya + ya).inv().unwrap()
    } else {
        (yb - ya) * (xb - xa).inv().unwrap()
    };
    let line = &(xy - ya) - &(&lambda * &(xx - xa));
    let vert = xx - c.x().expect("finite sum");
    Ok((nonzero(line)?, nonzero(vert)?))
}

/// `f_{n,P}(S) / f_{n,P}(T)` where `div f_{n,P} = n(P) - ([n]P) - (n-1)(∞)`.
pub fn miller_eval(p: &Point, n: i64, s: &Point, t: &Point) -> Result<FieldElement> {
    let like = ffield::one(p.curve().field());
    if p.is_infinity() || n == 0 || n == 1 {
        return Ok(like);
    }
    if s.is_infinity() || t.is_infinity() {
        return Err(Error::DivisorSupportCollision);
    }
    let mag = n.unsigned_abs();
    let mut f = Ratio::one(&like);
    let mut acc = p.clone();
    for i in (0..63 - mag.leading_zeros()).rev() {
        f.square();
        let (ns, ds) = chord(&acc, &acc, s)?;
        let (nt, dt) = chord(&acc, &acc, t)?;
        f.absorb(ns, ds, nt, dt);
        acc = acc.double();
        if (mag >> i) & 1 == 1 {
            let (ns, ds) = chord(&acc, p, s)?;
            let (nt, dt) = chord(&acc, p, t)?;
            f.absorb(ns, ds, nt, dt);
            acc = acc.add(p);
        }
    }
    if n > 0 {
        return Ok(f.value());
    }
    // f_{-n} = 1 / (f_n · v_{[n]P})
    if let Some(xn) = acc.x() {
        let vs = nonzero(s.x().unwrap() - xn)?;
        let vt = nonzero(t.x().unwrap() - xn)?;
        f.absorb(vs, like.clone(), vt, like.clone());
    }
    Ok(&f.den * &f.num.inv().map_err(|_| Error::DivisorSupportCollision)?)
}

/// `f_{m,P}((Q+R) - (R))` for an explicit auxiliary point `R`.
pub fn tate_with_aux(p: &Point, q: &Point, m: u64, r: &Point) -> Result<FieldElement> {
    if p.is_infinity() || q.is_infinity() {
        return Ok(ffield::one(p.curve().field()));
    }
    miller_eval(p, m as i64, &q.add(r), r)
}

/// One representative of the Tate-Lichtenbaum pairing class `t_m(P, Q)`.
pub fn tate_raw(p: &Point, q: &Point, m: u64) -> Result<FieldElement> {
    let mut rng = aux_rng(&[p, q], m);
    tate_raw_rng(p, q, m, &mut rng)
}

pub fn tate_raw_rng<R: Rng + ?Sized>(p: &Point, q: &Point, m: u64, rng: &mut R) -> Result<FieldElement> {
    if !p.same_curve(q) {
        return Err(Error::MixedCurves);
    }
    for _ in 0..AUX_RETRIES {
        let r = Point::random(p.curve(), rng);
        match tate_with_aux(p, q, m, &r) {
            Err(Error::DivisorSupportCollision) => continue,
            other => return other,
        }
    }
    Err(Error::DivisorSupportCollision)
}

/// `t_m(P, Q)^{(q-1)/m}`, an element of `μ_m` independent of auxiliary choices.
pub fn tate_reduced(p: &Point, q: &Point, m: u64) -> Result<FieldElement> {
    let e = ffield::reduction_exponent(p.curve().field(), m)?;
    Ok(tate_raw(p, q, m)?.pow_biguint(&e))
}

pub fn tate_reduced_rng<R: Rng + ?Sized>(p: &Point, q: &Point, m: u64, rng: &mut R) -> Result<FieldElement> {
    let e = ffield::reduction_exponent(p.curve().field(), m)?;
    Ok(tate_raw_rng(p, q, m, rng)?.pow_biguint(&e))
}

/// Weil pairing with an explicit auxiliary point.
pub fn weil_with_aux(p: &Point, q: &Point, m: u64, r: &Point) -> Result<FieldElement> {
    let like = ffield::one(p.curve().field());
    if p.is_infinity() || q.is_infinity() {
        return Ok(like);
    }
    let n = m as i64;
    let fp = miller_eval(p, n, &q.add(r), r)?;
    let fq = miller_eval(q, n, &p.sub(r), &r.neg())?;
    Ok(fp * fq.inv().map_err(|_| Error::DivisorSupportCollision)?)
}

/// The Weil pairing `e_m(P, Q)`.
pub fn weil_pairing(p: &Point, q: &Point, m: u64) -> Result<FieldElement> {
    if !p.same_curve(q) {
        return Err(Error::MixedCurves);
    }
    if p == q || p.is_infinity() || q.is_infinity() {
        return Ok(ffield::one(p.curve().field()));
    }
    let mut rng = aux_rng(&[p, q], m ^ 0x77);
    for _ in 0..AUX_RETRIES {
        let r = Point::random(p.curve(), &mut rng);
        match weil_with_aux(p, q, m, &r) {
            Err(Error::DivisorSupportCollision) => continue,
            other => return other,
        }
    }
    Err(Error::DivisorSupportCollision)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{Curve, CurveRef};
    use crate::ffield::prime_field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup() -> (CurveRef, Point, Point) {
        let e = Curve::from_ints(&prime_field(541).unwrap(), 1, 0).unwrap();
        let p = Point::from_ints(&e, 109, 208).unwrap();
        let q = Point::from_ints(&e, 53, 195).unwrap();
        (e, p, q)
    }

    #[test]
    fn trivial_miller_values() {
        let (e, p, q) = setup();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s = Point::random(&e, &mut rng);
        assert!(miller_eval(&p, 1, &s, &q).unwrap().is_one());
        assert!(miller_eval(&Point::infinity(&e), 5, &s, &q).unwrap().is_one());
    }

    #[test]
    fn miller_matches_divisor_definition() {
        // f_{a+b} = f_a f_b h_{aP,bP}; check f_{-n} relation on a full-order point.
        let (e, _, _) = setup();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let p = Point::random(&e, &mut rng);
        let s = Point::random(&e, &mut rng);
        let t = Point::random(&e, &mut rng);
        let f3 = miller_eval(&p, 3, &s, &t).unwrap();
        let fm3 = miller_eval(&p, -3, &s, &t).unwrap();
        let p3 = p.mul_u64(3);
        let v = (s.x().unwrap() - p3.x().unwrap()) * (t.x().unwrap() - p3.x().unwrap()).inv().unwrap();
        assert_eq!(fm3 * f3 * v, ffield::one(e.field()));
    }

    #[test]
    fn reduced_tate_is_independent_of_aux() {
        let (e, p, q) = setup();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let exp = ffield::reduction_exponent(e.field(), 5).unwrap();
        let mut seen = Vec::new();
        while seen.len() < 3 {
            let r = Point::random(&e, &mut rng);
            if let Ok(v) = tate_with_aux(&p, &q, 5, &r) {
                seen.push(v.pow_biguint(&exp));
            }
        }
        assert!(seen.windows(2).all(|w| w[0] == w[1]));
        assert!(seen[0].pow_u64(5).is_one());
        assert!(tate_reduced(&Point::infinity(&e), &q, 5).unwrap().is_one());
    }

    #[test]
    fn weil_basics() {
        let (_, p, q) = setup();
        let w = weil_pairing(&p, &q, 5).unwrap();
        assert!(w.pow_u64(5).is_one() && !w.is_one());
        assert!(weil_pairing(&p, &p, 5).unwrap().is_one());
        assert!((weil_pairing(&q, &p, 5).unwrap() * &w).is_one());
        let w2 = weil_pairing(&p.mul_u64(2), &q.mul_u64(3), 5).unwrap();
        assert_eq!(w2, w.pow_u64(6));
    }

    #[test]
    fn tate_nondegenerate_on_basis_combinations() {
        let (_, p, q) = setup();
        let found = (0..5).flat_map(|a| (0..5).map(move |b| (a, b))).any(|(a, b)| {
            let r = Point::lincomb(&p, a, &q, b);
            tate_reduced(&p, &r, 5).unwrap().mult_order().unwrap() == 5
        });
        assert!(found);
    }
}
