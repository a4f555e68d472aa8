//! Prime-degree isogenies from kernel polynomials (Vélu/Kohel), their
//! chains, curve isomorphisms, and enumeration of cyclic kernels.

use std::collections::HashMap;

use super::{Curve, CurveRef, Point};
use crate::arith;
use crate::error::{Error, Result};
use crate::ffield::{self, FieldElement};
use crate::poly::Poly;

/// Largest prime step accepted by kernel enumeration; doubling orbits only
/// identify whole subgroups when 2 generates `(Z/ℓ)^*/±1`.
pub const MAX_ENUM_PRIME: u64 = 13;

#[derive(Clone, Debug)]
pub struct VeluStep {
    domain: CurveRef,
    codomain: CurveRef,
    degree: u64,
    kernel_poly: Poly,
    num: Poly,
    num_d: Poly,
    kernel_d: Poly,
}

fn cubic(curve: &Curve) -> Poly {
    Poly::new(
        curve.field(),
        vec![curve.b().clone(), curve.a().clone(), ffield::zero(curve.field()), ffield::one(curve.field())],
    )
}

impl VeluStep {
    /// Step with kernel `⟨K⟩`, where `K` must have exact prime order `ℓ`.
    pub fn from_kernel_point(k: &Point, l: u64) -> Result<VeluStep> {
        if l < 2 || !arith::is_prime(l) || l == k.curve().field().p() {
            return Err(Error::BadKernelOrder(l));
        }
        if k.is_infinity() || !k.mul_u64(l).is_infinity() {
            return Err(Error::BadKernelOrder(l));
        }
        let f = k.curve().field();
        let roots: Vec<FieldElement> = if l == 2 {
            vec![k.x().unwrap().clone()]
        } else {
            let mut acc = k.clone();
            let mut xs = Vec::new();
            for _ in 0..(l - 1) / 2 {
                xs.push(acc.x().unwrap().clone());
                acc = acc.add(k);
            }
            xs
        };
        VeluStep::from_kernel_poly(k.curve(), l, Poly::from_roots(f, &roots))
    }

    /// Step whose kernel has x-coordinates given by the roots of `h`.
    pub fn from_kernel_poly(domain: &CurveRef, l: u64, h: Poly) -> Result<VeluStep> {
        let f = domain.field().clone();
        let (a, b) = (domain.a().clone(), domain.b().clone());
        let h = h.monic();
        let x = Poly::x(&f);
        let c = |v: FieldElement| Poly::constant(v);
        let fe = |v: i64| ffield::from_i64(&f, v);
        let (num, codomain) = if l == 2 {
            if h.degree() != Some(1) {
                return Err(Error::BadKernelOrder(2));
            }
            let x0 = h.coeff(0).neg();
            if !domain.rhs(&x0).is_zero() {
                return Err(Error::BadKernelOrder(2));
            }
            let v = &(x0.square() * fe(3)) + &a;
            let num = &(&(&x * &h) + &c(v.clone())) * &h;
            let cod = Curve::new(&a - &(&v * &fe(5)), &b - &(x0 * v * fe(7)))?;
            (num, cod)
        } else {
            let k = (l - 1) / 2;
            if h.degree() != Some(k as usize) {
                return Err(Error::BadKernelOrder(l));
            }
            let k = k as usize;
            // elementary symmetric functions of the kernel x-coordinates
            let e = |i: usize| -> FieldElement {
                if i > k {
                    return ffield::zero(&f);
                }
                let v = h.coeff(k - i);
                if i % 2 == 1 {
                    v.neg()
                } else {
                    v
                }
            };
            let (s1, s2, s3) = (e(1), e(2), e(3));
            let kf = fe(k as i64);
            let g = cubic(domain).scale(&fe(4));
            let half_gd = Poly::new(&f, vec![&a * &fe(2), ffield::zero(&f), fe(6)]);
            let hd = h.derivative();
            let hdd = hd.derivative();
            let lin = Poly::new(&f, vec![(&s1 * &fe(2)).neg(), fe(l as i64)]);
            let num = &(&(&lin * &(&h * &h)) + &(&g * &(&(&hd * &hd) - &(&h * &hdd)))) - &(&half_gd * &(&hd * &h));
            let t = &(&(&s1.square() - &(&s2 * &fe(2))) * &fe(6)) + &(&(&a * &kf) * &fe(2));
            let p3 = &(&(s1.square() * &s1) - &(&(&s1 * &s2) * &fe(3))) + &(&s3 * &fe(3));
            let w = &(&(&p3 * &fe(10)) + &(&(&a * &s1) * &fe(6))) + &(&(&b * &kf) * &fe(4));
            let cod = Curve::new(&a - &(t * fe(5)), &b - &(w * fe(7)))?;
            (num, cod)
        };
        // Kernel polynomial must divide the l-division polynomial.
        let divpoly = if l == 2 { cubic(domain) } else { division_poly(domain, l) };
        if !divpoly.rem(&h).is_zero() {
            return Err(Error::BadKernelOrder(l));
        }
        let num_d = num.derivative();
        let kernel_d = h.derivative();
        Ok(VeluStep { domain: domain.clone(), codomain, degree: l, kernel_poly: h, num, num_d, kernel_d })
    }

    pub fn domain(&self) -> &CurveRef {
        &self.domain
    }
    pub fn codomain(&self) -> &CurveRef {
        &self.codomain
    }
    pub fn degree(&self) -> u64 {
        self.degree
    }
    pub fn kernel_poly(&self) -> &Poly {
        &self.kernel_poly
    }

    pub fn eval(&self, p: &Point) -> Point {
        let Some((x, y)) = p.coords() else {
            return Point::infinity(&self.codomain);
        };
        let d = self.kernel_poly.eval(x);
        if d.is_zero() {
            return Point::infinity(&self.codomain);
        }
        let n = self.num.eval(x);
        let dinv = d.inv().unwrap();
        let dinv2 = dinv.square();
        let xx = &n * &dinv2;
        let yy = y * &(&(&(&self.num_d.eval(x) * &d) - &(&(&n * &self.kernel_d.eval(x)) * &d.from_u64_like(2))) * &(&dinv2 * &dinv));
        Point::new_unchecked(&self.codomain, xx, yy)
    }

    /// x-coordinate map `N/D²` reduced modulo `m`, if `D` is invertible there.
    fn x_map_mod(&self, m: &Poly) -> Option<Poly> {
        let dinv = self.kernel_poly.mulmod(&self.kernel_poly, m).invmod(m)?;
        Some(self.num.mulmod(&dinv, m))
    }

    /// Whether the step with kernel polynomial `h` on the codomain is the dual
    /// of this one, i.e. the composite would contain all of `E[ℓ]`.
    pub fn is_backtracked_by(&self, next_degree: u64, h: &Poly) -> bool {
        if next_degree != self.degree {
            return false;
        }
        let full = if self.degree == 2 { cubic(&self.domain) } else { division_poly(&self.domain, self.degree) };
        let rest = full.monic().div_exact(&self.kernel_poly);
        match self.x_map_mod(&rest) {
            Some(xm) => h.compose_mod(&xm, &rest).is_zero(),
            None => false,
        }
    }
}

/// `(x, y) ↦ (u²x, u³y)`.
#[derive(Clone, Debug)]
pub struct Isomorphism {
    domain: CurveRef,
    codomain: CurveRef,
    u: FieldElement,
}

impl Isomorphism {
    pub fn domain(&self) -> &CurveRef {
        &self.domain
    }
    pub fn codomain(&self) -> &CurveRef {
        &self.codomain
    }
    pub fn scale(&self) -> &FieldElement {
        &self.u
    }
    pub fn is_identity(&self) -> bool {
        self.u.is_one()
    }
    pub fn eval(&self, p: &Point) -> Point {
        match p.coords() {
            None => Point::infinity(&self.codomain),
            Some((x, y)) => {
                let u2 = self.u.square();
                let u3 = &u2 * &self.u;
                Point::new_unchecked(&self.codomain, &u2 * x, &u3 * y)
            }
        }
    }
}

/// All isomorphisms `E1 → E2`, ordered with the identity scale first.
pub fn isomorphisms(e1: &CurveRef, e2: &CurveRef) -> Vec<Isomorphism> {
    if e1.j_invariant() != e2.j_invariant() {
        return Vec::new();
    }
    let cands = if !e1.a().is_zero() {
        (e2.a() * &e1.a().inv().unwrap()).nth_roots(4)
    } else {
        (e2.b() * &e1.b().inv().unwrap()).nth_roots(6)
    };
    let mut out: Vec<Isomorphism> = cands
        .into_iter()
        .filter(|u| {
            let u2 = u.square();
            let u4 = u2.square();
            let u6 = &u4 * &u2;
            &u4 * e1.a() == *e2.a() && &u6 * e1.b() == *e2.b()
        })
        .map(|u| Isomorphism { domain: e1.clone(), codomain: e2.clone(), u })
        .collect();
    out.sort_by_key(|iso| !iso.u.is_one());
    out
}

#[derive(Clone, Debug)]
pub enum Step {
    Velu(VeluStep),
    Iso(Isomorphism),
}

impl Step {
    fn eval(&self, p: &Point) -> Point {
        match self {
            Step::Velu(s) => s.eval(p),
            Step::Iso(i) => i.eval(p),
        }
    }
    fn codomain(&self) -> &CurveRef {
        match self {
            Step::Velu(s) => s.codomain(),
            Step::Iso(i) => i.codomain(),
        }
    }
}

/// A chain of prime-degree steps, optionally followed by isomorphisms.
#[derive(Clone, Debug)]
pub struct Isogeny {
    domain: CurveRef,
    steps: Vec<Step>,
}

impl Isogeny {
    pub fn identity(curve: &CurveRef) -> Isogeny {
        Isogeny { domain: curve.clone(), steps: Vec::new() }
    }

    pub fn from_step(step: VeluStep) -> Isogeny {
        Isogeny { domain: step.domain().clone(), steps: vec![Step::Velu(step)] }
    }

    /// Isogeny with cyclic kernel `⟨K⟩` of order `d`, as prime steps in ascending order.
    pub fn from_kernel_point(k: &Point, d: u64) -> Result<Isogeny> {
        if !k.has_order(d) {
            return Err(Error::BadKernelOrder(d));
        }
        let mut phi = Isogeny::identity(k.curve());
        let mut ker = k.clone();
        let mut rest = d;
        for (l, e) in arith::factor(d) {
            for _ in 0..e {
                let gen = ker.mul_u64(rest / l);
                let step = VeluStep::from_kernel_point(&gen, l)?;
                ker = step.eval(&ker);
                rest /= l;
                phi = phi.then_step(step);
            }
        }
        Ok(phi)
    }

    pub fn then_step(mut self, step: VeluStep) -> Isogeny {
        self.steps.push(Step::Velu(step));
        self
    }

    pub fn then_iso(mut self, iso: Isomorphism) -> Isogeny {
        self.steps.push(Step::Iso(iso));
        self
    }

    /// `other ∘ self`.
    pub fn compose(&self, other: &Isogeny) -> Result<Isogeny> {
        if **self.codomain() != *other.domain {
            return Err(Error::MixedCurves);
        }
        let mut steps = self.steps.clone();
        steps.extend(other.steps.iter().cloned());
        Ok(Isogeny { domain: self.domain.clone(), steps })
    }

    pub fn domain(&self) -> &CurveRef {
        &self.domain
    }

    pub fn codomain(&self) -> &CurveRef {
        self.steps.last().map(|s| s.codomain()).unwrap_or(&self.domain)
    }

    pub fn degree(&self) -> u64 {
        self.velu_steps().map(|s| s.degree).product()
    }

    pub fn velu_steps(&self) -> impl Iterator<Item = &VeluStep> {
        self.steps.iter().filter_map(|s| match s {
            Step::Velu(v) => Some(v),
            Step::Iso(_) => None,
        })
    }

    /// The trailing isomorphism scale, or 1.
    pub fn post_scale(&self) -> FieldElement {
        self.steps
            .iter()
            .filter_map(|s| match s {
                Step::Iso(i) => Some(i.u.clone()),
                Step::Velu(_) => None,
            })
            .fold(ffield::one(self.domain.field()), |acc, u| acc * u)
    }

    /// `(ℓ, kernel polynomial)` for each prime step.
    pub fn kernel_chain(&self) -> Vec<(u64, Poly)> {
        self.velu_steps().map(|s| (s.degree, s.kernel_poly.clone())).collect()
    }

    pub fn same_kernel_chain(&self, other: &Isogeny) -> bool {
        self.kernel_chain() == other.kernel_chain()
    }

    pub fn eval(&self, p: &Point) -> Result<Point> {
        if !p.curve().eq(&self.domain) {
            return Err(Error::MixedCurves);
        }
        Ok(self.steps.iter().fold(p.clone(), |acc, s| s.eval(&acc)))
    }
}

/// Division polynomial `ψ_n` for odd `n`, as a polynomial in `x`.
pub fn division_poly(curve: &Curve, n: u64) -> Poly {
    assert!(n % 2 == 1, "odd division polynomials only");
    let f = curve.field();
    let fe = |v: i64| ffield::from_i64(f, v);
    let (a, b) = (curve.a().clone(), curve.b().clone());
    let cube = cubic(curve).scale(&fe(4));
    let cube2 = &cube * &cube;
    let mut memo: HashMap<u64, Poly> = HashMap::new();
    memo.insert(0, Poly::zero(f));
    memo.insert(1, Poly::one(f));
    memo.insert(2, Poly::one(f));
    memo.insert(
        3,
        Poly::new(f, vec![a.square().neg(), &b * &fe(12), &a * &fe(6), fe(0), fe(3)]),
    );
    memo.insert(
        4,
        Poly::new(
            f,
            vec![
                (&(a.pow_u64(3)) + &(&b.square() * &fe(8))).neg() * fe(2),
                (&a * &b) * fe(-8),
                a.square() * fe(-10),
                &b * &fe(40),
                &a * &fe(10),
                fe(0),
                fe(2),
            ],
        ),
    );
    fn get(n: u64, memo: &mut HashMap<u64, Poly>, cube2: &Poly) -> Poly {
        if let Some(p) = memo.get(&n) {
            return p.clone();
        }
        let k = n / 2;
        let out = if n % 2 == 1 {
            let (fk2, fk, fk1, fkm1) = (get(k + 2, memo, cube2), get(k, memo, cube2), get(k + 1, memo, cube2), get(k - 1, memo, cube2));
            let t1 = &fk2 * &fk.pow(3);
            let t2 = &fkm1 * &fk1.pow(3);
            if k.is_multiple_of(2) {
                &(&t1 * cube2) - &t2
            } else {
                &t1 - &(&t2 * cube2)
            }
        } else {
            let (fk, fk2, fkm1, fkm2, fk1) =
                (get(k, memo, cube2), get(k + 2, memo, cube2), get(k - 1, memo, cube2), get(k - 2, memo, cube2), get(k + 1, memo, cube2));
            &fk * &(&(&fk2 * &(&fkm1 * &fkm1)) - &(&fkm2 * &(&fk1 * &fk1)))
        };
        memo.insert(n, out.clone());
        out
    }
    get(n, &mut memo, &cube2)
}

/// Kernel polynomials of all `F`-rational subgroups of prime order `ℓ`, sorted.
pub fn rational_kernels(curve: &CurveRef, l: u64) -> Result<Vec<Poly>> {
    let f = curve.field();
    if l == f.p() || !arith::is_prime(l) {
        return Err(Error::BadKernelOrder(l));
    }
    if l == 2 {
        return Ok(cubic(curve).roots().iter().map(Poly::linear).collect());
    }
    if l > MAX_ENUM_PRIME {
        return Err(Error::BudgetExceeded(format!("prime step {l} exceeds {MAX_ENUM_PRIME}")));
    }
    let half = ((l - 1) / 2) as usize;
    let factors = division_poly(curve, l).factor_squarefree();
    let factors: Vec<Poly> = factors.into_iter().filter(|g| g.degree().unwrap_or(0) <= half).collect();
    // x(2T) = (x⁴ - 2ax² - 8bx + a²) / (4(x³ + ax + b))
    let fe = |v: i64| ffield::from_i64(f, v);
    let (a, b) = (curve.a(), curve.b());
    let dbl_num = Poly::new(f, vec![a.square(), b * &fe(-8), a * &fe(-2), fe(0), fe(1)]);
    let dbl_den = cubic(curve).scale(&fe(4));
    let n = factors.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for j in 0..n {
        let g = &factors[j];
        let Some(den_inv) = dbl_den.invmod(g) else { continue };
        let x2 = dbl_num.mulmod(&den_inv, g);
        for (k, h) in factors.iter().enumerate() {
            if h.degree() == g.degree() && h.compose_mod(&x2, g).is_zero() {
                let (rj, rk) = (find(&mut parent, j), find(&mut parent, k));
                parent[rj] = rk;
                break;
            }
        }
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut out: Vec<Poly> = groups
        .values()
        .map(|idx| idx.iter().fold(Poly::one(f), |acc, &i| &acc * &factors[i]))
        .filter(|h| h.degree() == Some(half))
        .collect();
    out.sort_by(|x, y| x.coeffs().cmp(y.coeffs()));
    Ok(out)
}

/// All `ℓ`-isogenies out of `curve` with rational kernel.
pub fn ell_isogenies(curve: &CurveRef, l: u64) -> Result<Vec<VeluStep>> {
    rational_kernels(curve, l)?
        .into_iter()
        .map(|h| VeluStep::from_kernel_poly(curve, l, h))
        .collect()
}

/// Every isogeny with cyclic kernel of order `d` out of `curve`, each as a
/// non-backtracking chain of prime steps in ascending order.
pub fn cyclic_isogenies(curve: &CurveRef, d: u64) -> Result<Vec<Isogeny>> {
    let primes: Vec<u64> = arith::factor(d)
        .into_iter()
        .flat_map(|(l, e)| std::iter::repeat_n(l, e as usize))
        .collect();
    let mut out = Vec::new();
    let mut cache: HashMap<(Vec<String>, Vec<String>, u64), Vec<VeluStep>> = HashMap::new();
    extend_chains(Isogeny::identity(curve), &primes, None, &mut out, &mut cache)?;
    Ok(out)
}

fn extend_chains(
    prefix: Isogeny,
    primes: &[u64],
    last: Option<&VeluStep>,
    out: &mut Vec<Isogeny>,
    cache: &mut HashMap<(Vec<String>, Vec<String>, u64), Vec<VeluStep>>,
) -> Result<()> {
    let Some((&l, rest)) = primes.split_first() else {
        out.push(prefix);
        return Ok(());
    };
    let cur = prefix.codomain().clone();
    let key = (cur.a().to_strings(), cur.b().to_strings(), l);
    let steps = match cache.get(&key) {
        Some(s) => s.clone(),
        None => {
            let s = ell_isogenies(&cur, l)?;
            cache.insert(key, s.clone());
            s
        }
    };
    for step in steps {
        if let Some(prev) = last {
            if prev.is_backtracked_by(l, step.kernel_poly()) {
                continue;
            }
        }
        let next = prefix.clone().then_step(step.clone());
        extend_chains(next, rest, Some(&step), out, cache)?;
    }
    Ok(())
}
