//! Short Weierstrass curves `y² = x³ + ax + b`, affine points, torsion bases.

pub mod isogeny;
pub mod miller;

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::ffield::{self, same_field, Field, FieldElement, FieldJson};

pub use isogeny::{Isogeny, Isomorphism, VeluStep};
pub use miller::{miller_eval, tate_raw, tate_reduced, weil_pairing};

/// Fields above this size are not point-counted by enumeration.
pub const COUNT_BUDGET: u64 = 1 << 24;

pub struct Curve {
    field: Field,
    a: FieldElement,
    b: FieldElement,
    order: OnceLock<Option<u64>>,
}

pub type CurveRef = Arc<Curve>;

impl PartialEq for Curve {
    fn eq(&self, o: &Self) -> bool {
        same_field(&self.field, &o.field) && self.a == o.a && self.b == o.b
    }
}
impl Eq for Curve {}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + ({})x + ({})", self.a, self.b)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CurveJson {
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub field: FieldJson,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PointJson {
    pub inf: bool,
    #[serde(default)]
    pub x: Vec<String>,
    #[serde(default)]
    pub y: Vec<String>,
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.xy {
            None => f.write_str("O"),
            Some((x, y)) => write!(f, "({x}, {y})"),
        }
    }
}

impl Curve {
    pub fn new(a: FieldElement, b: FieldElement) -> Result<CurveRef> {
        if !same_field(a.field(), b.field()) {
            return Err(Error::MixedFields);
        }
        let disc = a.pow_u64(3) * a.from_u64_like(4) + b.square() * b.from_u64_like(27);
        if disc.is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(Arc::new(Curve { field: a.field().clone(), a, b, order: OnceLock::new() }))
    }

    pub fn from_ints(field: &Field, a: i64, b: i64) -> Result<CurveRef> {
        Curve::new(ffield::from_i64(field, a), ffield::from_i64(field, b))
    }

    /// Curve with a known group order supplied by the caller.
    pub fn with_order(a: FieldElement, b: FieldElement, order: u64) -> Result<CurveRef> {
        let c = Curve::new(a, b)?;
        let _ = c.order.set(Some(order));
        Ok(c)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn a(&self) -> &FieldElement {
        &self.a
    }
    pub fn b(&self) -> &FieldElement {
        &self.b
    }

    pub fn rhs(&self, x: &FieldElement) -> FieldElement {
        &(&(x.square() * x) + &(&self.a * x)) + &self.b
    }

    pub fn j_invariant(&self) -> FieldElement {
        let a3 = self.a.pow_u64(3) * self.a.from_u64_like(4);
        let den = &a3 + &(self.b.square() * self.b.from_u64_like(27));
        a3 * self.a.from_u64_like(1728) * den.inv().expect("nonsingular")
    }

    pub fn to_json(&self) -> CurveJson {
        CurveJson { a: self.a.to_strings(), b: self.b.to_strings(), field: self.field.to_json() }
    }

    pub fn from_json(j: &CurveJson) -> Result<CurveRef> {
        let f = ffield::FieldDesc::from_json(&j.field)?;
        Curve::from_json_in(j, &f)
    }

    /// Parse a curve whose field block must agree with `f`.
    pub fn from_json_in(j: &CurveJson, f: &Field) -> Result<CurveRef> {
        if f.to_json() != j.field {
            return Err(Error::Malformed("curve field differs from instance field".into()));
        }
        Curve::new(FieldElement::from_strings(f, &j.a)?, FieldElement::from_strings(f, &j.b)?)
    }

    /// `#E(F)`: by enumeration, lifting from `F_p` when the coefficients lie
    /// in the prime field.
    pub fn order(&self) -> Result<u64> {
        self.order
            .get_or_init(|| self.count_points())
            .ok_or(Error::PointCountUnavailable)
    }

    fn count_points(&self) -> Option<u64> {
        let p = self.field.p();
        let k = self.field.k() as u32;
        if self.a.in_prime_field() && self.b.in_prime_field() {
            if p > COUNT_BUDGET {
                return None;
            }
            let (a, b) = (self.a.coeffs()[0], self.b.coeffs()[0]);
            let mut n: i128 = 1;
            for x in 0..p {
                let r = (arith::mulmod(arith::mulmod(x, x, p), x, p) + arith::mulmod(a, x, p) + b) % p;
                n += if r == 0 {
                    1
                } else if arith::powmod(r, (p - 1) / 2, p) == 1 {
                    2
                } else {
                    0
                };
            }
            let t1 = p as i128 + 1 - n;
            let (mut prev, mut cur) = (2i128, t1);
            for _ in 1..k {
                let next = t1 * cur - p as i128 * prev;
                prev = cur;
                cur = next;
            }
            let q = (p as i128).pow(k);
            return u64::try_from(q + 1 - cur).ok();
        }
        let q = self.field.order_u64()?;
        if q > COUNT_BUDGET {
            return None;
        }
        let mut n = 1u64;
        for i in 0..q {
            let x = ffield::from_index(&self.field, i);
            let r = self.rhs(&x);
            n += if r.is_zero() {
                1
            } else if r.is_square() {
                2
            } else {
                0
            };
        }
        Some(n)
    }
}

#[derive(Clone)]
pub struct Point {
    curve: CurveRef,
    xy: Option<(FieldElement, FieldElement)>,
}

impl PartialEq for Point {
    fn eq(&self, o: &Self) -> bool {
        self.xy == o.xy && (Arc::ptr_eq(&self.curve, &o.curve) || *self.curve == *o.curve)
    }
}
impl Eq for Point {}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.xy {
            None => write!(f, "∞"),
            Some((x, y)) => write!(f, "({x}, {y})"),
        }
    }
}

impl Point {
    pub fn infinity(curve: &CurveRef) -> Point {
        Point { curve: curve.clone(), xy: None }
    }

    pub fn new(curve: &CurveRef, x: FieldElement, y: FieldElement) -> Result<Point> {
        if !same_field(x.field(), curve.field()) || !same_field(y.field(), curve.field()) {
            return Err(Error::MixedFields);
        }
        if y.square() != curve.rhs(&x) {
            return Err(Error::NotOnCurve);
        }
        Ok(Point { curve: curve.clone(), xy: Some((x, y)) })
    }

    pub fn from_ints(curve: &CurveRef, x: u64, y: u64) -> Result<Point> {
        let f = curve.field();
        Point::new(curve, ffield::from_u64(f, x), ffield::from_u64(f, y))
    }

    pub(crate) fn new_unchecked(curve: &CurveRef, x: FieldElement, y: FieldElement) -> Point {
        Point { curve: curve.clone(), xy: Some((x, y)) }
    }

    /// A point with the given x-coordinate, if `x³ + ax + b` is a square.
    pub fn lift_x(curve: &CurveRef, x: FieldElement) -> Option<Point> {
        let y = curve.rhs(&x).sqrt()?;
        Some(Point::new_unchecked(curve, x, y))
    }

    pub fn random<R: Rng + ?Sized>(curve: &CurveRef, rng: &mut R) -> Point {
        loop {
            let x = ffield::random(curve.field(), rng);
            if let Some(p) = Point::lift_x(curve, x) {
                return if rng.gen::<bool>() { p.neg() } else { p };
            }
        }
    }

    pub fn curve(&self) -> &CurveRef {
        &self.curve
    }
    pub fn is_infinity(&self) -> bool {
        self.xy.is_none()
    }
    pub fn x(&self) -> Option<&FieldElement> {
        self.xy.as_ref().map(|(x, _)| x)
    }
    pub fn y(&self) -> Option<&FieldElement> {
        self.xy.as_ref().map(|(_, y)| y)
    }
    pub fn coords(&self) -> Option<&(FieldElement, FieldElement)> {
        self.xy.as_ref()
    }

    pub fn same_curve(&self, o: &Point) -> bool {
        Arc::ptr_eq(&self.curve, &o.curve) || *self.curve == *o.curve
    }

    pub fn neg(&self) -> Point {
        match &self.xy {
            None => self.clone(),
            Some((x, y)) => Point::new_unchecked(&self.curve, x.clone(), y.neg()),
        }
    }

    pub fn try_add(&self, o: &Point) -> Result<Point> {
        if !self.same_curve(o) {
            return Err(Error::MixedCurves);
        }
        Ok(self.add(o))
    }

    pub fn add(&self, o: &Point) -> Point {
        let (x1, y1) = match &self.xy {
            None => return o.clone(),
            Some(c) => c,
        };
        let (x2, y2) = match &o.xy {
            None => return self.clone(),
            Some(c) => c,
        };
        let lambda = if x1 == x2 {
            if (y1 + y2).is_zero() {
                return Point::infinity(&self.curve);
            }
            let num = &(x1.square() * x1.from_u64_like(3)) + self.curve.a();
            num * (y1 + y1).inv().unwrap()
        } else {
            (y2 - y1) * (x2 - x1).inv().unwrap()
        };
        let x3 = &(&lambda.square() - x1) - x2;
        let y3 = &(&lambda * &(x1 - &x3)) - y1;
        Point::new_unchecked(&self.curve, x3, y3)
    }

    pub fn sub(&self, o: &Point) -> Point {
        self.add(&o.neg())
    }

    pub fn double(&self) -> Point {
        self.add(self)
    }

    pub fn mul_u64(&self, n: u64) -> Point {
        let mut acc = Point::infinity(&self.curve);
        for i in (0..64 - n.leading_zeros()).rev() {
            acc = acc.double();
            if (n >> i) & 1 == 1 {
                acc = acc.add(self);
            }
        }
        acc
    }

    pub fn mul_i64(&self, n: i64) -> Point {
        let r = self.mul_u64(n.unsigned_abs());
        if n < 0 {
            r.neg()
        } else {
            r
        }
    }

    pub fn mul(&self, n: &BigInt) -> Point {
        if let Some(v) = n.to_i64() {
            return self.mul_i64(v);
        }
        let mag = n.abs().to_biguint().unwrap();
        let mut acc = Point::infinity(&self.curve);
        for i in (0..mag.bits()).rev() {
            acc = acc.double();
            if mag.bit(i) {
                acc = acc.add(self);
            }
        }
        if n.is_negative() {
            acc.neg()
        } else {
            acc
        }
    }

    /// `[a]P + [b]Q` with residues taken as given.
    pub fn lincomb(p: &Point, a: i64, q: &Point, b: i64) -> Point {
        p.mul_i64(a).add(&q.mul_i64(b))
    }

    /// Exact order, given a multiple of it.
    pub fn order_dividing(&self, multiple: u64) -> u64 {
        let mut order = multiple;
        for (r, e) in arith::factor(multiple) {
            for _ in 0..e {
                if self.mul_u64(order / r).is_infinity() {
                    order /= r;
                } else {
                    break;
                }
            }
        }
        order
    }

    pub fn has_order(&self, m: u64) -> bool {
        self.mul_u64(m).is_infinity() && self.order_dividing(m) == m
    }

    pub fn to_json(&self) -> PointJson {
        match &self.xy {
            None => PointJson { inf: true, x: vec![], y: vec![] },
            Some((x, y)) => PointJson { inf: false, x: x.to_strings(), y: y.to_strings() },
        }
    }

    pub fn from_json(curve: &CurveRef, j: &PointJson) -> Result<Point> {
        if j.inf {
            return Ok(Point::infinity(curve));
        }
        let f = curve.field();
        Point::new(curve, FieldElement::from_strings(f, &j.x)?, FieldElement::from_strings(f, &j.y)?)
            .map_err(|e| Error::Malformed(format!("point rejected: {e}")))
    }
}

impl std::ops::Add for &Point {
    type Output = Point;
    fn add(self, o: &Point) -> Point {
        Point::add(self, o)
    }
}

impl std::ops::Sub for &Point {
    type Output = Point;
    fn sub(self, o: &Point) -> Point {
        Point::sub(self, o)
    }
}

impl std::ops::Neg for &Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::neg(self)
    }
}

/// Deterministic generator for auxiliary choices tied to the given points.
pub(crate) fn aux_rng(points: &[&Point], salt: u64) -> ChaCha8Rng {
    use std::hash::{Hash, Hasher};
    let mut h = std::collections::hash_map::DefaultHasher::new();
    salt.hash(&mut h);
    for p in points {
        match p.coords() {
            None => 0u8.hash(&mut h),
            Some((x, y)) => {
                x.coeffs().hash(&mut h);
                y.coeffs().hash(&mut h);
            }
        }
    }
    ChaCha8Rng::seed_from_u64(h.finish())
}

/// A random point of `E[ℓ^e]` with order exactly `ℓ^e`, or `None` if the draw fails.
fn primary_point<R: Rng + ?Sized>(curve: &CurveRef, n: u64, l: u64, e: u32, rng: &mut R) -> Option<Point> {
    let (lpart, _) = arith::prime_power_part(n, l);
    let r = Point::random(curve, rng).mul_u64(n / lpart);
    let ord = r.order_dividing(lpart);
    let target = l.pow(e);
    if ord < target {
        return None;
    }
    Some(r.mul_u64(ord / target))
}

/// A basis `(P, Q)` of `E[m]`, which must be fully rational.
pub fn torsion_basis<R: Rng + ?Sized>(curve: &CurveRef, m: u64, rng: &mut R) -> Result<(Point, Point)> {
    let p = curve.field().p();
    if m == 0 || m.is_multiple_of(p) {
        return Err(Error::TorsionNotRational(m));
    }
    if m == 1 {
        let o = Point::infinity(curve);
        return Ok((o.clone(), o));
    }
    let n = curve.order()?;
    if n % (m * m) != 0 || !curve.field().q_minus_1_u64().is_multiple_of(m) {
        return Err(Error::TorsionNotRational(m));
    }
    let mut bp = Point::infinity(curve);
    let mut bq = Point::infinity(curve);
    for (l, e) in arith::factor(m) {
        let le = l.pow(e);
        let mut found = None;
        'search: for _ in 0..256 {
            let Some(a) = primary_point(curve, n, l, e, rng) else { continue };
            for _ in 0..8 {
                let Some(b) = primary_point(curve, n, l, e, rng) else { continue };
                let w = weil_pairing(&a, &b, le)?;
                if w.mult_order()? == le {
                    found = Some((a, b));
                    break 'search;
                }
            }
        }
        let (a, b) = found.ok_or(Error::TorsionNotRational(m))?;
        bp = bp.add(&a);
        bq = bq.add(&b);
    }
    Ok((bp, bq))
}

/// Whether `(P, Q)` is a basis of `E[m]`.
pub fn is_basis(p: &Point, q: &Point, m: u64) -> Result<bool> {
    if !p.mul_u64(m).is_infinity() || !q.mul_u64(m).is_infinity() {
        return Ok(false);
    }
    Ok(weil_pairing(p, q, m)?.mult_order()? == m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::{make_field, prime_field};

    pub(crate) fn e541() -> CurveRef {
        Curve::from_ints(&prime_field(541).unwrap(), 1, 0).unwrap()
    }

    #[test]
    fn f541_basis_points_have_order_five() {
        let e = e541();
        let p = Point::from_ints(&e, 109, 208).unwrap();
        let q = Point::from_ints(&e, 53, 195).unwrap();
        assert!(p.mul_u64(5).is_infinity());
        assert!(q.mul_u64(5).is_infinity());
        assert_eq!(p.add(&Point::infinity(&e)), p);
        assert!(is_basis(&p, &q, 5).unwrap());
        assert_eq!(p.mul_i64(-2), p.mul_u64(2).neg());
        assert!(p.mul_u64(0).is_infinity());
    }

    #[test]
    fn f101_point_of_order_three() {
        let f = make_field(101, 2, &[2, 97, 1]).unwrap();
        let e = Curve::from_ints(&f, 30, 2).unwrap();
        let pt = Point::new(&e, ffield::from_coeffs(&f, &[16, 41]), ffield::from_coeffs(&f, &[19, 39])).unwrap();
        assert!(pt.mul_u64(3).is_infinity());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (p, q) = torsion_basis(&e, 3, &mut rng).unwrap();
        assert!(is_basis(&p, &q, 3).unwrap());
    }

    #[test]
    fn torsion_basis_errors_and_counts() {
        let e = e541();
        assert_eq!(e.order().unwrap(), 500);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert_eq!(torsion_basis(&e, 541, &mut rng).unwrap_err(), Error::TorsionNotRational(541));
        let (p, q) = torsion_basis(&e, 5, &mut rng).unwrap();
        assert!(is_basis(&p, &q, 5).unwrap());
        let f2 = make_field(541, 2, &[2, 0, 1]).unwrap();
        let e2 = Curve::from_ints(&f2, 1, 0).unwrap();
        assert_eq!(e2.order().unwrap(), 500 * 584);
    }

    #[test]
    fn mixed_curves_rejected() {
        let e = e541();
        let e2 = Curve::from_ints(e.field(), 2, 0).unwrap();
        let p = Point::from_ints(&e, 109, 208).unwrap();
        let q = Point::random(&e2, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(p.try_add(&q).unwrap_err(), Error::MixedCurves);
    }

    #[test]
    fn associativity_spot_checks() {
        let e = e541();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let a = Point::random(&e, &mut rng);
            let b = Point::random(&e, &mut rng);
            let c = Point::random(&e, &mut rng);
            assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        }
    }
}
