//! Orientations acting on `E[m]` through a 2×2 matrix, endomorphism
//! expressions, and module-structure queries.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::curve::{is_basis, weil_pairing, CurveRef, Point, PointJson};
use crate::dlog;
use crate::error::{Error, Result};
use crate::ffield::{self, FieldElement};
use crate::linalg::{self, Mat2};
use crate::qorder::{splitting, OrderDesc, OrderElement, OrderJson, Splitting};

/// Random draws spent looking for a module generator.
pub const GENERATOR_DRAWS: usize = 64;

/// A formal combination of primitive endomorphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EndoExpr {
    /// `(x, y) ↦ (-x, iy)` on curves `y² = x³ + ax`.
    I,
    /// The `p`-power Frobenius.
    Frob,
    Scalar(i64),
    Add(Box<EndoExpr>, Box<EndoExpr>),
    Sub(Box<EndoExpr>, Box<EndoExpr>),
    /// Left applied after right.
    Compose(Box<EndoExpr>, Box<EndoExpr>),
    /// Division by an integer, realized on `E[m]` as multiplication by its inverse.
    Div(Box<EndoExpr>, i64),
}

impl fmt::Display for EndoExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EndoExpr::I => write!(f, "i"),
            EndoExpr::Frob => write!(f, "pi"),
            EndoExpr::Scalar(k) => write!(f, "{k}"),
            EndoExpr::Add(a, b) => write!(f, "({a} + {b})"),
            EndoExpr::Sub(a, b) => write!(f, "({a} - {b})"),
            EndoExpr::Compose(a, b) => write!(f, "{a}*{b}"),
            EndoExpr::Div(a, k) => write!(f, "({a})/{k}"),
        }
    }
}

struct Parser<'a> {
    toks: Vec<&'a str>,
    pos: usize,
}

fn tokenize(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if b"+-*/()".contains(&c) {
            out.push(&s[i..i + 1]);
            i += 1;
        } else {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                i += 1;
            }
            if start == i {
                // unknown symbol: emit it so the parser reports it
                i += 1;
            }
            out.push(&s[start..i]);
        }
    }
    out
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a str> {
        self.toks.get(self.pos).copied()
    }

    fn next(&mut self) -> Option<&'a str> {
        let t = self.peek();
        self.pos += 1;
        t
    }

    fn err(&self, msg: &str) -> Error {
        Error::BadEndomorphism(format!("{msg} at token {}", self.pos))
    }

    fn int(&mut self) -> Result<i64> {
        let t = self.next().ok_or_else(|| self.err("expected integer"))?;
        t.parse().map_err(|_| self.err("expected integer"))
    }

    fn expr(&mut self) -> Result<EndoExpr> {
        let mut lhs = self.term()?;
        while let Some(op) = self.peek() {
            match op {
                "+" => {
                    self.pos += 1;
                    lhs = EndoExpr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                "-" => {
                    self.pos += 1;
                    lhs = EndoExpr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<EndoExpr> {
        let mut lhs = self.factor()?;
        while let Some(op) = self.peek() {
            match op {
                "*" => {
                    self.pos += 1;
                    lhs = EndoExpr::Compose(Box::new(lhs), Box::new(self.factor()?));
                }
                "/" => {
                    self.pos += 1;
                    let k = self.int()?;
                    if k == 0 {
                        return Err(Error::DenominatorNotInvertible(0));
                    }
                    lhs = EndoExpr::Div(Box::new(lhs), k);
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<EndoExpr> {
        match self.next() {
            Some("i") => Ok(EndoExpr::I),
            Some("pi") => Ok(EndoExpr::Frob),
            Some("scalar") => Ok(EndoExpr::Scalar(self.int()?)),
            Some("-") => Ok(EndoExpr::Sub(Box::new(EndoExpr::Scalar(0)), Box::new(self.factor()?))),
            Some("(") => {
                let e = self.expr()?;
                if self.next() != Some(")") {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(t) => t.parse().map(EndoExpr::Scalar).map_err(|_| self.err(&format!("unknown symbol {t:?}"))),
            None => Err(self.err("unexpected end")),
        }
    }
}

impl FromStr for EndoExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<EndoExpr> {
        let mut p = Parser { toks: tokenize(s), pos: 0 };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(p.err("trailing input"));
        }
        Ok(e)
    }
}

/// `√-1` used by the `i` endomorphism: the lexicographically smaller root.
pub fn sqrt_minus_one(f: &ffield::Field) -> Result<FieldElement> {
    ffield::from_i64(f, -1).sqrt().ok_or_else(|| Error::BadEndomorphism("field lacks a square root of -1".into()))
}

impl EndoExpr {
    /// Evaluate on a point of `E[m]`.
    pub fn eval(&self, r: &Point, m: u64) -> Result<Point> {
        match self {
            EndoExpr::I => {
                let c = r.curve();
                if !c.b().is_zero() {
                    return Err(Error::BadEndomorphism("i needs a curve y^2 = x^3 + ax".into()));
                }
                let i = sqrt_minus_one(c.field())?;
                match r.coords() {
                    None => Ok(r.clone()),
                    Some((x, y)) => Point::new(c, x.neg(), &i * y),
                }
            }
            EndoExpr::Frob => {
                let c = r.curve();
                if !c.a().in_prime_field() || !c.b().in_prime_field() {
                    return Err(Error::BadEndomorphism("pi needs a curve defined over the prime field".into()));
                }
                match r.coords() {
                    None => Ok(r.clone()),
                    Some((x, y)) => Point::new(c, x.frobenius(), y.frobenius()),
                }
            }
            EndoExpr::Scalar(k) => Ok(r.mul_i64(*k)),
            EndoExpr::Add(a, b) => Ok(a.eval(r, m)?.add(&b.eval(r, m)?)),
            EndoExpr::Sub(a, b) => Ok(a.eval(r, m)?.sub(&b.eval(r, m)?)),
            EndoExpr::Compose(a, b) => a.eval(&b.eval(r, m)?, m),
            EndoExpr::Div(a, k) => {
                let inv = arith::inv_mod(*k as i128, m).ok_or(Error::DenominatorNotInvertible(*k))?;
                Ok(a.eval(r, m)?.mul_u64(inv))
            }
        }
    }
}

/// Action of `τ` on a basis of `E[m]`.
#[derive(Clone, Debug)]
pub struct Orientation {
    curve: CurveRef,
    m: u64,
    p: Point,
    q: Point,
    m_tau: Mat2,
    order: OrderDesc,
    conductor: Option<u64>,
    weil: FieldElement,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct OrientationJson {
    pub m: String,
    pub basis: [PointJson; 2],
    #[serde(rename = "M_tau")]
    pub m_tau: [[String; 2]; 2],
    pub order: OrderJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conductor_meta: Option<String>,
}

/// `E[s]`-coordinates of points: `(u, v)` for `[u]P + [v]Q`.
pub type Coords = [i64; 2];

fn minpoly_holds(mt: &Mat2, order: OrderDesc, m: u64) -> bool {
    let sq = linalg::mul(mt, mt, m);
    let lhs = linalg::add(&linalg::add(&sq, &linalg::scale(mt, -order.t, m), m), &linalg::scale(&linalg::IDENTITY, order.n, m), m);
    lhs == [[0, 0], [0, 0]]
}

fn vec_order(v: Coords, m: u64) -> u64 {
    let g = arith::gcd(arith::gcd(v[0] as i128, v[1] as i128), m as i128) as u64;
    m / g
}

/// Whether `m` is a power of a prime inert in the order of discriminant `disc`.
fn inert_prime_power(m: u64, disc: i64) -> bool {
    let f = arith::factor(m);
    f.len() == 1 && splitting(disc, f[0].0) == Splitting::Inert
}

/// A vector of exact order `qk` with `M·v ≡ c·v (mod qk)`, if one exists.
pub fn eigenvector(mt: &Mat2, c: u64, qk: u64) -> Option<Coords> {
    let a = linalg::add(&linalg::reduce(mt, qk), &linalg::scale(&linalg::IDENTITY, -(c as i64), qk), qk);
    linalg::solve_mod(&[a[0], a[1]], &[0, 0], qk).into_iter().find(|v| vec_order(*v, qk) == qk)
}

/// Two independent eigenvectors of `M` modulo the prime power `qk = q^e`,
/// paired with their eigenvalues.
pub fn eigenvectors_mod(mt: &Mat2, order: OrderDesc, q: u64, qk: u64) -> Result<[(Coords, u64); 2]> {
    let mt = linalg::reduce(mt, qk);
    let roots: Vec<u64> = (0..qk)
        .filter(|&c| arith::modp(c as i128 * c as i128 - order.t as i128 * c as i128 + order.n as i128, qk) == 0)
        .collect();
    let mut vecs: Vec<(Coords, u64)> = Vec::new();
    for &c in &roots {
        let a = linalg::add(&mt, &linalg::scale(&linalg::IDENTITY, -(c as i64), qk), qk);
        let ker = linalg::solve_mod(&[a[0], a[1]], &[0, 0], qk);
        if ker.len() as u64 == qk * qk {
            vecs.push(([1, 0], c));
            vecs.push(([0, 1], c));
        } else if let Some(v) = ker.into_iter().find(|v| vec_order(*v, qk) == qk) {
            vecs.push((v, c));
        }
    }
    for i in 0..vecs.len() {
        for j in i + 1..vecs.len() {
            let d = linalg::det(&linalg::from_columns(vecs[i].0, vecs[j].0), qk);
            if !(d as u64).is_multiple_of(q) {
                return Ok([vecs[i], vecs[j]]);
            }
        }
    }
    Err(Error::NotSplit(q))
}

/// An eigenbasis `(S, T)` of `E[m]` with `τS = [s_val]S` and `τT = [t_val]T`.
#[derive(Clone, Debug)]
pub struct Eigenbasis {
    pub s: Point,
    pub t: Point,
    pub s_coords: Coords,
    pub t_coords: Coords,
    pub s_val: u64,
    pub t_val: u64,
}

impl Orientation {
    pub fn from_matrix(p: &Point, q: &Point, m: u64, m_tau: Mat2, order: OrderDesc) -> Result<Orientation> {
        if !p.same_curve(q) {
            return Err(Error::MixedCurves);
        }
        if !is_basis(p, q, m)? {
            return Err(Error::WrongOrder(m));
        }
        let m_tau = linalg::reduce(&m_tau, m);
        if !minpoly_holds(&m_tau, order, m) {
            return Err(Error::MinPolyMismatch(m));
        }
        let weil = weil_pairing(p, q, m)?;
        Ok(Orientation { curve: p.curve().clone(), m, p: p.clone(), q: q.clone(), m_tau, order, conductor: None, weil })
    }

    pub fn from_endo(p: &Point, q: &Point, m: u64, expr: &EndoExpr, order: OrderDesc) -> Result<Orientation> {
        if !is_basis(p, q, m)? {
            return Err(Error::WrongOrder(m));
        }
        let w = weil_pairing(p, q, m)?;
        let log = |r: &Point| -> Result<Coords> {
            let (u, v) = dlog::point_dlog2d_with(r, p, q, m, &w)?;
            Ok([u as i64, v as i64])
        };
        let tp = log(&expr.eval(p, m)?)?;
        let tq = log(&expr.eval(q, m)?)?;
        Self::from_matrix(p, q, m, linalg::from_columns(tp, tq), order)
    }

    pub fn with_conductor(mut self, f: u64) -> Self {
        self.conductor = Some(f);
        self
    }

    pub fn curve(&self) -> &CurveRef {
        &self.curve
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn basis(&self) -> (&Point, &Point) {
        (&self.p, &self.q)
    }

    pub fn matrix(&self) -> Mat2 {
        self.m_tau
    }

    pub fn order(&self) -> OrderDesc {
        self.order
    }

    pub fn conductor(&self) -> Option<u64> {
        self.conductor
    }

    /// `e_m(P, Q)` for the stored basis.
    pub fn basis_pairing(&self) -> &FieldElement {
        &self.weil
    }

    /// Coordinates of `R ∈ E[m]` in the stored basis.
    pub fn coords(&self, r: &Point) -> Result<Coords> {
        match dlog::point_dlog2d_with(r, &self.p, &self.q, self.m, &self.weil) {
            Ok((u, v)) => Ok([u as i64, v as i64]),
            Err(Error::NotInTorsion) => Err(Error::PointNotInTorsion(self.m)),
            Err(e) => Err(e),
        }
    }

    pub fn point(&self, c: Coords) -> Point {
        Point::lincomb(&self.p, c[0], &self.q, c[1])
    }

    /// `aI + bM_τ` for `α = a + bτ`.
    pub fn alpha_matrix(&self, alpha: &OrderElement) -> Mat2 {
        let m = self.m;
        linalg::add(&linalg::scale(&linalg::IDENTITY, alpha.a, m), &linalg::scale(&self.m_tau, alpha.b, m), m)
    }

    pub fn apply_coords(&self, alpha: &OrderElement, c: Coords) -> Coords {
        linalg::apply(&self.alpha_matrix(alpha), c, self.m)
    }

    pub fn apply(&self, alpha: &OrderElement, r: &Point) -> Result<Point> {
        let c = self.coords(r)?;
        Ok(self.point(self.apply_coords(alpha, c)))
    }

    pub fn apply_tau(&self, r: &Point) -> Result<Point> {
        self.apply(&self.order.tau(), r)
    }

    fn full_order_coords(&self, r: &Point) -> Result<Coords> {
        let c = self.coords(r)?;
        if vec_order(c, self.m) != self.m {
            return Err(Error::WrongOrder(self.m));
        }
        Ok(c)
    }

    /// Whether `{R, τR}` generate `E[m]`.
    pub fn is_module_generator(&self, r: &Point) -> Result<bool> {
        let c = self.full_order_coords(r)?;
        if inert_prime_power(self.m, self.order.disc()) {
            return Ok(true);
        }
        Ok(self.generator_det(c) == 1)
    }

    fn generator_det(&self, c: Coords) -> u64 {
        let tc = linalg::apply(&self.m_tau, c, self.m);
        let d = linalg::det(&linalg::from_columns(c, tc), self.m);
        arith::gcd(d as i128, self.m as i128) as u64
    }

    /// The largest `s | m` with `E[s] ⊆ OR`.
    pub fn max_s(&self, r: &Point) -> Result<u64> {
        let c = self.full_order_coords(r)?;
        Ok(self.m / self.generator_det(c))
    }

    /// `gcd(m, f) = 1`, confirmed by a seeded search for a module generator.
    pub fn is_cyclic_module(&self, f: u64) -> Result<bool> {
        let predicate = arith::gcd(self.m as i128, f as i128) == 1;
        let mut rng = ChaCha8Rng::seed_from_u64(self.m ^ f.rotate_left(17));
        let mut found = false;
        for _ in 0..GENERATOR_DRAWS {
            let c = [rng.gen_range(0..self.m) as i64, rng.gen_range(0..self.m) as i64];
            if vec_order(c, self.m) == self.m && self.generator_det(c) == 1 {
                found = true;
                break;
            }
        }
        if found != predicate {
            return Err(Error::EmpiricalContradiction);
        }
        Ok(predicate)
    }

    /// The subgroup killed by every generator of an ideal, as coordinate vectors.
    pub fn ideal_kernel_coords(&self, generators: &[OrderElement]) -> Vec<Coords> {
        let mut rows = Vec::new();
        for g in generators {
            let mg = self.alpha_matrix(g);
            rows.push(mg[0]);
            rows.push(mg[1]);
        }
        if rows.is_empty() {
            rows.push([0, 0]);
        }
        let rhs = vec![0; rows.len()];
        linalg::solve_mod(&rows, &rhs, self.m)
    }

    /// A point of exact order `expected` generating the kernel of the ideal.
    pub fn ideal_kernel(&self, generators: &[OrderElement], expected: u64) -> Result<Point> {
        let kernel = self.ideal_kernel_coords(generators);
        if kernel.len() as u64 != expected {
            return Err(Error::NoSuchSubgroup);
        }
        let c = kernel.into_iter().find(|c| vec_order(*c, self.m) == expected).ok_or(Error::NoSuchSubgroup)?;
        Ok(self.point(c))
    }

    /// A basis of eigenvectors for `τ`, assembled prime power by prime power.
    pub fn eigenbasis(&self) -> Result<Eigenbasis> {
        let mut s_parts = Vec::new();
        let mut t_parts = Vec::new();
        for (q, e) in arith::factor(self.m) {
            let qk = q.pow(e);
            let [s, t] = eigenvectors_mod(&self.m_tau, self.order, q, qk)?;
            s_parts.push((s, qk));
            t_parts.push((t, qk));
        }
        let combine = |parts: &[((Coords, u64), u64)]| -> (Coords, u64) {
            let u: Vec<(u64, u64)> = parts.iter().map(|((v, _), qk)| (v[0] as u64, *qk)).collect();
            let v: Vec<(u64, u64)> = parts.iter().map(|((v, _), qk)| (v[1] as u64, *qk)).collect();
            let c: Vec<(u64, u64)> = parts.iter().map(|((_, c), qk)| (*c, *qk)).collect();
            ([arith::crt(&u).0 as i64, arith::crt(&v).0 as i64], arith::crt(&c).0)
        };
        let (sc, sv) = combine(&s_parts);
        let (tc, tv) = combine(&t_parts);
        Ok(Eigenbasis { s: self.point(sc), t: self.point(tc), s_coords: sc, t_coords: tc, s_val: sv, t_val: tv })
    }

    /// The orientation by the suborder `Z[α]`, on the same basis.
    pub fn suborder(&self, alpha: &OrderElement) -> Result<Orientation> {
        let order = OrderDesc::new(alpha.trace(), alpha.norm())?;
        Self::from_matrix(&self.p, &self.q, self.m, self.alpha_matrix(alpha), order)
    }

    /// The unique `μ ∈ O/mO` with `R = [μ]G` for a module generator `G`.
    pub fn module_coords(&self, gen: &Point, r: &Point) -> Result<OrderElement> {
        let cg = self.coords(gen)?;
        let cr = self.coords(r)?;
        let a = linalg::from_columns(cg, linalg::apply(&self.m_tau, cg, self.m));
        let sols = linalg::solve_mod(&a, &cr, self.m);
        match sols.len() {
            0 => Err(Error::NoSolution),
            1 => Ok(self.order.elem(sols[0][0], sols[0][1])),
            _ => Err(Error::DegenerateBase),
        }
    }

    /// Same action expressed on a different basis `(P', Q')` of `E[m]`.
    pub fn rebase(&self, p: &Point, q: &Point) -> Result<Orientation> {
        let cp = self.coords(p)?;
        let cq = self.coords(q)?;
        let change = linalg::from_columns(cp, cq);
        let inv = linalg::inverse(&change, self.m).ok_or(Error::WrongOrder(self.m))?;
        let mt = linalg::mul(&inv, &linalg::mul(&self.m_tau, &change, self.m), self.m);
        let mut o = Self::from_matrix(p, q, self.m, mt, self.order)?;
        o.conductor = self.conductor;
        Ok(o)
    }

    pub fn to_json(&self) -> OrientationJson {
        let s = |v: i64| v.to_string();
        OrientationJson {
            m: self.m.to_string(),
            basis: [self.p.to_json(), self.q.to_json()],
            m_tau: [[s(self.m_tau[0][0]), s(self.m_tau[0][1])], [s(self.m_tau[1][0]), s(self.m_tau[1][1])]],
            order: self.order.to_json(),
            conductor_meta: self.conductor.map(|f| f.to_string()),
        }
    }

    pub fn from_json(curve: &CurveRef, j: &OrientationJson) -> Result<Orientation> {
        let int = |s: &str| -> Result<i64> { s.parse().map_err(|_| Error::Malformed(format!("bad integer {s:?}"))) };
        let m = int(&j.m)?;
        if m < 1 {
            return Err(Error::Malformed("orientation level must be positive".into()));
        }
        let p = Point::from_json(curve, &j.basis[0])?;
        let q = Point::from_json(curve, &j.basis[1])?;
        let mt = [[int(&j.m_tau[0][0])?, int(&j.m_tau[0][1])?], [int(&j.m_tau[1][0])?, int(&j.m_tau[1][1])?]];
        let mut o = Self::from_matrix(&p, &q, m as u64, mt, OrderDesc::from_json(&j.order)?)?;
        if let Some(f) = &j.conductor_meta {
            o.conductor = Some(int(f)? as u64);
        }
        Ok(o)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Curve;
    use crate::ffield::{make_field, prime_field};

    pub(crate) fn f541() -> Orientation {
        let e = Curve::from_ints(&prime_field(541).unwrap(), 1, 0).unwrap();
        let p = Point::from_ints(&e, 109, 208).unwrap();
        let q = Point::from_ints(&e, 53, 195).unwrap();
        Orientation::from_endo(&p, &q, 5, &"i".parse().unwrap(), OrderDesc::gaussian()).unwrap()
    }

    #[test]
    fn parses_expressions() {
        assert_eq!("i".parse::<EndoExpr>().unwrap(), EndoExpr::I);
        assert_eq!("scalar 1".parse::<EndoExpr>().unwrap(), EndoExpr::Scalar(1));
        assert_eq!(
            "(i + pi)/2".parse::<EndoExpr>().unwrap(),
            EndoExpr::Div(Box::new(EndoExpr::Add(Box::new(EndoExpr::I), Box::new(EndoExpr::Frob))), 2)
        );
        assert!("i +".parse::<EndoExpr>().is_err());
        assert!("q".parse::<EndoExpr>().is_err());
        assert!("(i".parse::<EndoExpr>().is_err());
    }

    #[test]
    fn f541_matrix_and_eigenspaces() {
        let o = f541();
        assert_eq!(o.matrix(), [[3, 3], [0, 2]]);
        let (p, q) = (o.basis().0.clone(), o.basis().1.clone());
        assert_eq!(o.apply(&o.order().tau(), &p).unwrap(), p.mul_u64(3));
        assert_eq!(o.apply(&o.order().int(1), &q).unwrap(), q);
        assert!(!o.is_module_generator(&p).unwrap());
        assert_eq!(o.max_s(&p).unwrap(), 1);
        let pq = p.add(&q);
        assert!(o.is_module_generator(&pq).unwrap());
        assert_eq!(o.max_s(&pq).unwrap(), 5);
        let k = o.ideal_kernel(&[o.order().elem(2, 1)], 5).unwrap();
        assert_eq!(k, p);
        let k2 = o.ideal_kernel(&[o.order().elem(2, -1)], 5).unwrap();
        let two_p_q = p.mul_u64(2).add(&q);
        assert!((1..5).any(|j| two_p_q.mul_u64(j) == k2));
        assert!(o.ideal_kernel(&[o.order().int(1)], 1).unwrap().is_infinity());
        let eb = o.eigenbasis().unwrap();
        assert_eq!(o.apply_tau(&eb.s).unwrap(), eb.s.mul_u64(eb.s_val));
        assert_eq!(o.apply_tau(&eb.t).unwrap(), eb.t.mul_u64(eb.t_val));
        assert_ne!(eb.s_val, eb.t_val);
    }

    #[test]
    fn brute_force_module_spans() {
        let o = f541();
        for a in 0..5 {
            for b in 0..5 {
                let c = [a, b];
                if vec_order(c, 5) != 5 {
                    continue;
                }
                let mut span = std::collections::BTreeSet::new();
                for x in 0..5 {
                    for y in 0..5 {
                        span.insert(o.apply_coords(&o.order().elem(x, y), c));
                    }
                }
                let r = o.point(c);
                assert_eq!(o.is_module_generator(&r).unwrap(), span.len() == 25);
                assert_eq!(o.max_s(&r).unwrap(), if span.len() == 25 { 5 } else { 1 });
            }
        }
    }

    #[test]
    fn scalar_orientation() {
        let o = f541();
        let (p, q) = o.basis();
        let s = Orientation::from_endo(p, q, 5, &"scalar 1".parse().unwrap(), OrderDesc { t: 2, n: 1 }).unwrap();
        assert_eq!(s.matrix(), linalg::IDENTITY);
        assert!(s.eigenbasis().is_ok());
        assert_eq!(
            Orientation::from_endo(p, q, 5, &"i".parse().unwrap(), OrderDesc { t: 0, n: 2 }).unwrap_err(),
            Error::MinPolyMismatch(5)
        );
    }

    #[test]
    fn minimal_polynomial_on_points() {
        let o = f541();
        let (p, q) = o.basis();
        let r = Point::lincomb(p, 2, q, 4);
        let t = o.apply_tau(&r).unwrap();
        let tt = o.apply_tau(&t).unwrap();
        assert!(tt.sub(&t.mul_i64(o.order().t)).add(&r.mul_i64(o.order().n)).is_infinity());
    }

    #[test]
    fn wouter_three_orientation() {
        let f = make_field(107, 2, &[1, 0, 1]).unwrap();
        let e = Curve::from_ints(&f, 1, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (p, q) = crate::curve::torsion_basis(&e, 27, &mut rng).unwrap();
        let o = Orientation::from_endo(&p, &q, 27, &"(i + pi)/2".parse().unwrap(), OrderDesc { t: 0, n: 27 }).unwrap();
        let mt = o.matrix();
        assert_eq!(linalg::mul(&mt, &mt, 27), [[0, 0], [0, 0]]);
        let even = Orientation::from_endo(&p.mul_u64(9), &q.mul_u64(9), 3, &"(i + pi)/2".parse().unwrap(), OrderDesc { t: 0, n: 27 });
        assert!(even.is_ok());
    }

    #[test]
    fn inert_three_has_no_eigenbasis() {
        let f = make_field(71, 2, &[1, 0, 1]).unwrap();
        let e = Curve::from_ints(&f, 1, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (p, q) = crate::curve::torsion_basis(&e, 3, &mut rng).unwrap();
        let o = Orientation::from_endo(&p, &q, 3, &EndoExpr::I, OrderDesc::gaussian()).unwrap();
        assert_eq!(o.eigenbasis().unwrap_err(), Error::NotSplit(3));
        assert!(o.is_module_generator(&p).unwrap());
        assert!(o.is_cyclic_module(1).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let o = f541().with_conductor(1);
        let j = o.to_json();
        let back = Orientation::from_json(o.curve(), &j).unwrap();
        assert_eq!(back.matrix(), o.matrix());
        assert_eq!(back.conductor(), Some(1));
        assert_eq!(serde_json::to_value(&j).unwrap()["M_tau"][0][1], "3");
    }
}
