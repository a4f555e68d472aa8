//! Seeded generation of oriented isogeny problems with sealed ground truth.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::instance::{AttackInstance, InstanceBundle, Payload, Sealed, Variant};
use crate::arith;
use crate::curve::isogeny::cyclic_isogenies;
use crate::curve::{torsion_basis, Curve, CurveRef, Isogeny, Point};
use crate::error::{Error, Result};
use crate::ffield::{self, make_field, prime_field, Field, FieldElement};
use crate::linalg::{self, Mat2};
use crate::orientation::{Coords, EndoExpr, Orientation};
use crate::qorder::{splitting, OrderDesc, Splitting};

/// Draws spent looking for a module generator of `E[m]`.
const GENERATOR_TRIES: usize = 512;

/// A user-described family: curve `y² = x³ + ax + b` over `F_p[x]/(modulus)`,
/// oriented by an endomorphism expression with the given minimal polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CustomFamily {
    pub p: String,
    pub modulus: Vec<String>,
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub m: String,
    pub endo: String,
    pub t: String,
    pub n: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// `y² = x³ + x` over `F_541`, `m = 5`, oriented by `i`, fixed basis.
    F541,
    /// `y² = x³ + 30x + 2` over `F_{101²}`, `m = 3`, oriented by Frobenius.
    F101,
    /// `y² = x³ + x` over `F_{p²}` with `p = 4·3^r - 1`, oriented by `(i + π)/2`.
    Wouter(u32),
    /// `y² = x³ + x` over `F_{p²}`, oriented by `i`.
    Gaussian(u64),
    Custom(Box<CustomFamily>),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::F541 => write!(f, "f541"),
            Family::F101 => write!(f, "f101"),
            Family::Wouter(r) => write!(f, "wouter({r})"),
            Family::Gaussian(p) => write!(f, "gaussian({p})"),
            Family::Custom(_) => write!(f, "custom"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;
    /// Parses `f541`, `f101`, `wouter(R)` and `gaussian(P)`.
    fn from_str(s: &str) -> Result<Family> {
        let s = s.trim();
        let arg = |name: &str| -> Option<&str> { s.strip_prefix(name)?.strip_prefix('(')?.strip_suffix(')') };
        let bad = || Error::Malformed(format!("unknown family {s:?}"));
        match s {
            "f541" => Ok(Family::F541),
            "f101" => Ok(Family::F101),
            _ => {
                if let Some(r) = arg("wouter") {
                    Ok(Family::Wouter(r.trim().parse().map_err(|_| bad())?))
                } else if let Some(p) = arg("gaussian") {
                    Ok(Family::Gaussian(p.trim().parse().map_err(|_| bad())?))
                } else {
                    Err(bad())
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct GenSpec {
    pub family: Family,
    pub degree: u64,
    pub variant: Variant,
    /// Torsion level; each family has a default.
    pub m: Option<u64>,
}

/// A curve with a basis of `E[m]` and the orienting endomorphism.
pub struct FamilyContext {
    pub curve: CurveRef,
    pub m: u64,
    pub basis: (Point, Point),
    pub expr: EndoExpr,
    pub order: OrderDesc,
    /// Frobenius over the prime field, anti-commuting with `expr`, when available.
    pub second: Option<(EndoExpr, OrderDesc)>,
}

impl FamilyContext {
    pub fn orientation(&self) -> Result<Orientation> {
        Orientation::from_endo(&self.basis.0, &self.basis.1, self.m, &self.expr, self.order)
    }
}

/// `F_{p²}` as `F_p[x]/(x² - c)` for the smallest non-residue `c`, or `x² + 1`
/// when `-1` is a non-residue.
pub fn quadratic_field(p: u64) -> Result<Field> {
    if p % 4 == 3 {
        return make_field(p, 2, &[1, 0, 1]);
    }
    let c = (2..p).find(|&c| arith::powmod(c, (p - 1) / 2, p) == p - 1).ok_or(Error::CompositeModulus(p))?;
    make_field(p, 2, &[p - c, 0, 1])
}

fn odd_part(mut n: u64) -> u64 {
    while n.is_multiple_of(2) {
        n /= 2;
    }
    n
}

fn parse_u64(s: &str) -> Result<u64> {
    s.trim().parse().map_err(|_| Error::Malformed(format!("bad integer {s:?}")))
}

fn parse_i64(s: &str) -> Result<i64> {
    s.trim().parse().map_err(|_| Error::Malformed(format!("bad integer {s:?}")))
}

/// Build the family's curve, torsion basis and orientation data.
pub fn family_context<R: Rng + ?Sized>(family: &Family, m: Option<u64>, rng: &mut R) -> Result<FamilyContext> {
    let x3_plus_x = |f: &Field| Curve::from_ints(f, 1, 0);
    match family {
        Family::F541 => {
            let f = prime_field(541)?;
            let e = x3_plus_x(&f)?;
            if m.is_some_and(|m| m != 5) {
                return Err(Error::Precondition("f541 uses m = 5".into()));
            }
            let basis = (Point::from_ints(&e, 109, 208)?, Point::from_ints(&e, 53, 195)?);
            Ok(FamilyContext { curve: e, m: 5, basis, expr: EndoExpr::I, order: OrderDesc::gaussian(), second: None })
        }
        Family::F101 => {
            let f = make_field(101, 2, &[2, 97, 1])?;
            let e = Curve::from_ints(&f, 30, 2)?;
            let count = Curve::from_ints(&prime_field(101)?, 30, 2)?.order()?;
            let order = OrderDesc::new(102 - count as i64, 101)?;
            let m = m.unwrap_or(3);
            let basis = torsion_basis(&e, m, rng)?;
            Ok(FamilyContext { curve: e, m, basis, expr: EndoExpr::Frob, order, second: None })
        }
        Family::Wouter(r) => {
            let n = 3u64.checked_pow(*r).filter(|_| *r > 0).ok_or_else(|| Error::Precondition(format!("r = {r} out of range")))?;
            let p = 4 * n - 1;
            if !arith::is_prime(p) {
                return Err(Error::Precondition(format!("4·3^{r} - 1 = {p} is not prime")));
            }
            let f = make_field(p, 2, &[1, 0, 1])?;
            let e = x3_plus_x(&f)?;
            let m = m.unwrap_or(n);
            let basis = torsion_basis(&e, m, rng)?;
            let expr: EndoExpr = "(i+pi)/2".parse()?;
            Ok(FamilyContext { curve: e, m, basis, expr, order: OrderDesc::new(0, n as i64)?, second: None })
        }
        Family::Gaussian(p) => {
            let p = *p;
            let f = quadratic_field(p)?;
            let e = x3_plus_x(&f)?;
            let m = match m {
                Some(m) => m,
                None if p == 541 => 5,
                None if p % 4 == 3 && odd_part(p + 1) > 1 => odd_part(p + 1),
                None => return Err(Error::Precondition(format!("gaussian({p}) needs an explicit m"))),
            };
            let basis = torsion_basis(&e, m, rng)?;
            // π² = -p on the supersingular curve over F_p
            let second = (p % 4 == 3).then_some((EndoExpr::Frob, OrderDesc { t: 0, n: p as i64 }));
            Ok(FamilyContext { curve: e, m, basis, expr: EndoExpr::I, order: OrderDesc::gaussian(), second })
        }
        Family::Custom(c) => {
            let p = parse_u64(&c.p)?;
            let modulus = c.modulus.iter().map(|s| parse_u64(s)).collect::<Result<Vec<_>>>()?;
            let k = modulus.len().saturating_sub(1);
            let f = make_field(p, k, &modulus)?;
            let coeff = |v: &[String]| -> Result<FieldElement> {
                let cs = v.iter().map(|s| parse_u64(s)).collect::<Result<Vec<_>>>()?;
                Ok(ffield::from_coeffs(&f, &cs))
            };
            let e = Curve::new(coeff(&c.a)?, coeff(&c.b)?)?;
            let m = m.unwrap_or(parse_u64(&c.m)?);
            let basis = torsion_basis(&e, m, rng)?;
            let order = OrderDesc::new(parse_i64(&c.t)?, parse_i64(&c.n)?)?;
            Ok(FamilyContext { curve: e, m, basis, expr: c.endo.parse()?, order, second: None })
        }
    }
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(id);
    r
}

fn vec_gcd(c: Coords, m: u64) -> u64 {
    arith::gcd(arith::gcd(c[0] as i128, c[1] as i128), m as i128) as u64
}

/// Random coordinates of a point of exact order `m`.
fn random_full_order<R: Rng + ?Sized>(m: u64, rng: &mut R) -> Coords {
    loop {
        let c = [rng.gen_range(0..m) as i64, rng.gen_range(0..m) as i64];
        if vec_gcd(c, m) == 1 {
            return c;
        }
    }
}

fn random_unit<R: Rng + ?Sized>(m: u64, rng: &mut R) -> i64 {
    loop {
        let u = rng.gen_range(1..m.max(2));
        if arith::gcd(u as i128, m as i128) == 1 {
            return u as i64;
        }
    }
}

/// A random module generator of `E[m]`.
pub fn random_generator<R: Rng + ?Sized>(orient: &Orientation, rng: &mut R) -> Result<Point> {
    for _ in 0..GENERATOR_TRIES {
        let r = orient.point(random_full_order(orient.m(), rng));
        if orient.is_module_generator(&r)? {
            return Ok(r);
        }
    }
    Err(Error::Precondition(format!("E[{}] has no module generator: not a cyclic module", orient.m())))
}

/// Generators of the cyclic subgroups of order `d` in a rational `E[d]` that are
/// stable under every expression, or `None` when `E[d]` is not rational.
fn stable_kernels<R: Rng + ?Sized>(curve: &CurveRef, d: u64, exprs: &[&EndoExpr], rng: &mut R) -> Result<Option<Vec<Point>>> {
    let (bp, bq) = match torsion_basis(curve, d, rng) {
        Ok(b) => b,
        Err(Error::TorsionNotRational(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let units: Vec<i64> = (1..d as i64).filter(|&k| arith::gcd(k as i128, d as i128) == 1).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for a in 0..d as i64 {
        for b in 0..d as i64 {
            if vec_gcd([a, b], d) != 1 {
                continue;
            }
            let canon = units.iter().map(|&k| [(k * a) % d as i64, (k * b) % d as i64]).min().unwrap_or([a, b]);
            if !seen.insert(canon) {
                continue;
            }
            let k = Point::lincomb(&bp, a, &bq, b);
            let multiples: Vec<Point> = (0..d).map(|j| k.mul_u64(j)).collect();
            let stable = exprs.iter().all(|e| match e.eval(&k, d) {
                Ok(y) => multiples.contains(&y),
                Err(_) => false,
            });
            if stable {
                out.push(k);
            }
        }
    }
    Ok(Some(out))
}

fn diagnosis(order: OrderDesc, d: u64) -> String {
    arith::factor(d)
        .into_iter()
        .map(|(l, e)| {
            let kind = match splitting(order.disc(), l) {
                Splitting::Split => "split",
                Splitting::Inert => "inert",
                Splitting::Ramified => "ramified",
            };
            format!("{l}^{e} {kind} in disc {}", order.disc())
        })
        .collect::<Vec<_>>()
        .join(", ")
}

/// The hidden isogeny and the conductor `f` of the orientation it respects.
///
/// A kernel stable under the orienting endomorphism `τ₀` gives a horizontal
/// isogeny (`f = 1`). Otherwise any cyclic kernel is used and the instance is
/// oriented by `d·τ₀`, which every degree-`d` isogeny respects.
fn choose_isogeny(ctx: &FamilyContext, d: u64, variant: Variant, seed: u64) -> Result<(Isogeny, i64)> {
    if d == 1 {
        return Ok((Isogeny::identity(&ctx.curve), 1));
    }
    let chains = cyclic_isogenies(&ctx.curve, d)?;
    let no_kernel = || Error::NoSplitPrimeKernel { degree: d, diagnosis: diagnosis(ctx.order, d) };
    if chains.is_empty() {
        return Err(no_kernel());
    }
    let mut exprs = vec![&ctx.expr];
    if variant == Variant::TwoOrient {
        let (s, _) = ctx.second.as_ref().ok_or_else(|| Error::Precondition("family has no second orientation".into()))?;
        exprs.push(s);
    }
    let mut rng = stream(seed, 2);
    let stable = stable_kernels(&ctx.curve, d, &exprs, &mut rng)?.unwrap_or_default();
    let horizontal: Vec<&Isogeny> = chains
        .iter()
        .filter(|c| stable.iter().any(|k| c.eval(k).map(|v| v.is_infinity()).unwrap_or(false)))
        .collect();
    if !horizontal.is_empty() {
        let pick = horizontal[rng.gen_range(0..horizontal.len())];
        return Ok((pick.clone(), 1));
    }
    if variant == Variant::TwoOrient {
        return Err(no_kernel());
    }
    Ok((chains[rng.gen_range(0..chains.len())].clone(), d as i64))
}

/// `Φ·M·Φ⁻¹`.
fn conjugate(phi: &Mat2, mt: &Mat2, m: u64) -> Result<Mat2> {
    let inv = linalg::inverse(phi, m).ok_or_else(|| Error::InternalInconsistency("torsion matrix is singular".into()))?;
    Ok(linalg::mul(phi, &linalg::mul(mt, &inv, m), m))
}

/// Generate an instance of the requested variant, deterministically in `seed`.
pub fn gen_instance(spec: &GenSpec, seed: u64) -> Result<InstanceBundle> {
    let ctx = family_context(&spec.family, spec.m, &mut stream(seed, 1))?;
    let (m, d) = (ctx.m, spec.degree);
    if d == 0 || arith::gcd(d as i128, m as i128) != 1 {
        return Err(Error::Precondition(format!("degree {d} must be coprime to m = {m}")));
    }
    let base = ctx.orientation()?;
    let (phi, f) = choose_isogeny(&ctx, d, spec.variant, seed)?;
    let orient = base.suborder(&ctx.order.elem(0, f))?;

    let (p, q) = (&ctx.basis.0, &ctx.basis.1);
    let (fp, fq) = (phi.eval(p)?, phi.eval(q)?);
    let mut rng = stream(seed, 3);
    let g = loop {
        let g = [[rng.gen_range(0..m) as i64, rng.gen_range(0..m) as i64], [rng.gen_range(0..m) as i64, rng.gen_range(0..m) as i64]];
        if linalg::inverse(&g, m).is_some() {
            break g;
        }
    };
    // [P' Q'] = [φP φQ]·G, so φ has matrix G⁻¹ on these bases
    let p2 = Point::lincomb(&fp, g[0][0], &fq, g[1][0]);
    let q2 = Point::lincomb(&fp, g[0][1], &fq, g[1][1]);
    let matrix = linalg::inverse(&g, m).expect("checked invertible");
    let orient2 = Orientation::from_matrix(&p2, &q2, m, conjugate(&matrix, &orient.matrix(), m)?, orient.order())?;
    if orient2.coords(&fp)? != linalg::column(&matrix, 0) || orient2.coords(&fq)? != linalg::column(&matrix, 1) {
        return Err(Error::InternalInconsistency("pushed-forward basis does not match the sealed matrix".into()));
    }

    let mut rng = stream(seed, 4);
    let gen = random_generator(&orient, &mut rng)?;
    let gen2 = random_generator(&orient2, &mut rng)?;

    let mut payload = Payload::default();
    let image = |c: Coords| orient2.point(linalg::apply(&matrix, c, m));
    match spec.variant {
        Variant::Sidh1 => {
            let c = random_full_order(m, &mut rng);
            payload.sidh1 = Some((orient.point(c), image(c)));
        }
        Variant::Diagonal => {
            let (u, v) = (random_unit(m, &mut rng), random_unit(m, &mut rng));
            payload.diagonal = Some((fp.mul_i64(u), fq.mul_i64(v)));
        }
        Variant::TwoOrient => {
            let (expr, order) = ctx.second.as_ref().ok_or_else(|| Error::Precondition("family has no second orientation".into()))?;
            let s = Orientation::from_endo(p, q, m, expr, *order)?;
            let s2 = Orientation::from_matrix(&p2, &q2, m, conjugate(&matrix, &s.matrix(), m)?, *order)?;
            payload.second = Some((s, s2));
        }
        Variant::Norm | Variant::Ramified => {}
    }

    let instance = AttackInstance {
        variant: spec.variant,
        family: spec.family.to_string(),
        degree: d,
        orient,
        orient2,
        gen,
        gen2,
        payload,
    };
    Ok(InstanceBundle { instance, sealed: Some(Sealed { isogeny: phi, matrix }) })
}
