//! Attack instances, their JSON form, and the sealed ground truth.

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::curve::isogeny::isomorphisms;
use crate::curve::{Curve, CurveJson, CurveRef, Isogeny, Point, PointJson, VeluStep};
use crate::error::{Error, Result};
use crate::ffield::FieldElement;
use crate::linalg::{self, Mat2};
use crate::orientation::{Coords, Orientation, OrientationJson};
use crate::poly::Poly;
use crate::qorder::OrderElement;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Norm,
    Sidh1,
    Diagonal,
    Ramified,
    TwoOrient,
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.into())).map_err(|_| Error::Malformed(format!("unknown variant {s:?}")))
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = serde_json::to_value(self).map_err(|_| std::fmt::Error)?;
        f.write_str(s.as_str().unwrap_or_default())
    }
}

/// Variant-specific public data.
#[derive(Clone, Debug, Default)]
pub struct Payload {
    /// `(R, φR)` for an order-`m` point `R`.
    pub sidh1: Option<(Point, Point)>,
    /// Generators of `⟨φP⟩` and `⟨φQ⟩` for the stored basis `(P, Q)`.
    pub diagonal: Option<(Point, Point)>,
    /// A second orientation on `E` and `E'` respected by the hidden isogeny.
    pub second: Option<(Orientation, Orientation)>,
}

/// The public view handed to attacks: no ground truth is reachable from here.
#[derive(Clone, Debug)]
pub struct AttackInstance {
    pub variant: Variant,
    pub family: String,
    pub degree: u64,
    pub orient: Orientation,
    pub orient2: Orientation,
    /// Module generators of `E[m]` and `E'[m]`.
    pub gen: Point,
    pub gen2: Point,
    pub payload: Payload,
}

impl AttackInstance {
    pub fn m(&self) -> u64 {
        self.orient.m()
    }
    pub fn curve(&self) -> &CurveRef {
        self.orient.curve()
    }
    pub fn curve2(&self) -> &CurveRef {
        self.orient2.curve()
    }
    pub fn basis(&self) -> (&Point, &Point) {
        self.orient.basis()
    }
}

/// The hidden isogeny and its matrix from the basis of `E[m]` to that of `E'[m]`.
#[derive(Clone, Debug)]
pub struct Sealed {
    pub isogeny: Isogeny,
    pub matrix: Mat2,
}

impl Sealed {
    /// `φ` of the point with coordinates `c` on `E[m]`.
    pub fn image_coords(&self, inst: &AttackInstance, c: Coords) -> Coords {
        linalg::apply(&self.matrix, c, inst.m())
    }

    pub fn image(&self, inst: &AttackInstance, r: &Point) -> Result<Point> {
        Ok(inst.orient2.point(self.image_coords(inst, inst.orient.coords(r)?)))
    }

    /// `λ` with `φ(gen) = [λ]gen'`.
    pub fn lambda(&self, inst: &AttackInstance) -> Result<OrderElement> {
        let img = self.image(inst, &inst.gen)?;
        inst.orient2.module_coords(&inst.gen2, &img)
    }
}

#[derive(Clone, Debug)]
pub struct InstanceBundle {
    pub instance: AttackInstance,
    pub sealed: Option<Sealed>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PayloadJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sidh1: Option<[PointJson; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagonal: Option<[PointJson; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second: Option<[OrientationJson; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct KernelStepJson {
    pub degree: String,
    pub kernel: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SealedJson {
    pub kernel_chain: Vec<KernelStepJson>,
    pub post_scale: Vec<String>,
    pub matrix: [[String; 2]; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct InstanceJson {
    pub variant: Variant,
    pub family: String,
    pub degree: String,
    pub curve: CurveJson,
    pub curve2: CurveJson,
    pub orientation: OrientationJson,
    pub orientation2: OrientationJson,
    pub generators: [PointJson; 2],
    pub payload: PayloadJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sealed: Option<SealedJson>,
}

fn parse_u64(s: &str) -> Result<u64> {
    s.parse().map_err(|_| Error::Malformed(format!("bad integer {s:?}")))
}

fn parse_i64(s: &str) -> Result<i64> {
    s.parse().map_err(|_| Error::Malformed(format!("bad integer {s:?}")))
}

fn malformed(e: Error) -> Error {
    match e {
        Error::Malformed(_) => e,
        other => Error::Malformed(other.to_string()),
    }
}

fn mat_json(a: &Mat2) -> [[String; 2]; 2] {
    let s = |v: i64| v.to_string();
    [[s(a[0][0]), s(a[0][1])], [s(a[1][0]), s(a[1][1])]]
}

impl Sealed {
    pub fn to_json(&self) -> SealedJson {
        SealedJson {
            kernel_chain: self
                .isogeny
                .kernel_chain()
                .into_iter()
                .map(|(l, h)| KernelStepJson { degree: l.to_string(), kernel: h.coeffs().iter().map(|c| c.to_strings()).collect() })
                .collect(),
            post_scale: self.isogeny.post_scale().to_strings(),
            matrix: mat_json(&self.matrix),
        }
    }

    pub fn from_json(j: &SealedJson, domain: &CurveRef, codomain: &CurveRef) -> Result<Sealed> {
        let f = domain.field();
        let mut phi = Isogeny::identity(domain);
        for step in &j.kernel_chain {
            let coeffs = step.kernel.iter().map(|c| FieldElement::from_strings(f, c)).collect::<Result<Vec<_>>>()?;
            let velu = VeluStep::from_kernel_poly(phi.codomain(), parse_u64(&step.degree)?, Poly::new(f, coeffs))?;
            phi = phi.then_step(velu);
        }
        let u = FieldElement::from_strings(f, &j.post_scale)?;
        if !u.is_one() || **phi.codomain() != **codomain {
            let iso = isomorphisms(phi.codomain(), codomain)
                .into_iter()
                .find(|i| *i.scale() == u)
                .ok_or_else(|| Error::Malformed("sealed chain does not end on the stated codomain".into()))?;
            phi = phi.then_iso(iso);
        }
        let m = &j.matrix;
        let matrix = [[parse_i64(&m[0][0])?, parse_i64(&m[0][1])?], [parse_i64(&m[1][0])?, parse_i64(&m[1][1])?]];
        Ok(Sealed { isogeny: phi, matrix })
    }
}

impl InstanceBundle {
    pub fn to_json(&self) -> InstanceJson {
        let inst = &self.instance;
        InstanceJson {
            variant: inst.variant,
            family: inst.family.clone(),
            degree: inst.degree.to_string(),
            curve: inst.curve().to_json(),
            curve2: inst.curve2().to_json(),
            orientation: inst.orient.to_json(),
            orientation2: inst.orient2.to_json(),
            generators: [inst.gen.to_json(), inst.gen2.to_json()],
            payload: PayloadJson {
                sidh1: inst.payload.sidh1.as_ref().map(|(r, fr)| [r.to_json(), fr.to_json()]),
                diagonal: inst.payload.diagonal.as_ref().map(|(p, q)| [p.to_json(), q.to_json()]),
                second: inst.payload.second.as_ref().map(|(s, s2)| [s.to_json(), s2.to_json()]),
            },
            sealed: self.sealed.as_ref().map(Sealed::to_json),
        }
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("instance serializes");
        s.push('\n');
        s
    }

    /// Parse and validate; any structural problem is reported as `Malformed`.
    pub fn from_json(j: &InstanceJson) -> Result<InstanceBundle> {
        Self::parse(j).map_err(malformed)
    }

    pub fn from_json_str(s: &str) -> Result<InstanceBundle> {
        let j: InstanceJson = serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))?;
        Self::from_json(&j)
    }

    fn parse(j: &InstanceJson) -> Result<InstanceBundle> {
        let e = Curve::from_json(&j.curve)?;
        let e2 = Curve::from_json_in(&j.curve2, e.field())?;
        let orient = Orientation::from_json(&e, &j.orientation)?;
        let orient2 = Orientation::from_json(&e2, &j.orientation2)?;
        let m = orient.m();
        if orient2.m() != m {
            return Err(Error::Malformed("orientations use different torsion levels".into()));
        }
        if orient.order() != orient2.order() {
            return Err(Error::Malformed("orientations use different orders".into()));
        }
        let degree = parse_u64(&j.degree)?;
        if degree == 0 || arith::gcd(degree as i128, m as i128) != 1 {
            return Err(Error::Malformed(format!("degree {degree} is not coprime to m = {m}")));
        }
        let gen = Point::from_json(&e, &j.generators[0])?;
        let gen2 = Point::from_json(&e2, &j.generators[1])?;
        for g in [&gen, &gen2] {
            if !g.has_order(m) {
                return Err(Error::Malformed(format!("generator does not have order {m}")));
            }
        }
        let pair = |a: &PointJson, ca: &CurveRef, b: &PointJson, cb: &CurveRef| -> Result<(Point, Point)> {
            let (x, y) = (Point::from_json(ca, a)?, Point::from_json(cb, b)?);
            if !x.has_order(m) || !y.has_order(m) {
                return Err(Error::Malformed(format!("payload point does not have order {m}")));
            }
            Ok((x, y))
        };
        let mut payload = Payload::default();
        if let Some([r, fr]) = &j.payload.sidh1 {
            payload.sidh1 = Some(pair(r, &e, fr, &e2)?);
        }
        if let Some([p, q]) = &j.payload.diagonal {
            payload.diagonal = Some(pair(p, &e2, q, &e2)?);
        }
        if let Some([s, s2]) = &j.payload.second {
            payload.second = Some((Orientation::from_json(&e, s)?, Orientation::from_json(&e2, s2)?));
        }
        let required = match j.variant {
            Variant::Sidh1 => payload.sidh1.is_some(),
            Variant::Diagonal => payload.diagonal.is_some(),
            Variant::TwoOrient => payload.second.is_some(),
            Variant::Norm | Variant::Ramified => true,
        };
        if !required {
            return Err(Error::Malformed(format!("payload for variant {} is missing", j.variant)));
        }
        let sealed = j.sealed.as_ref().map(|s| Sealed::from_json(s, &e, &e2)).transpose()?;
        if let Some(s) = &sealed {
            if s.isogeny.degree() != degree {
                return Err(Error::Malformed("sealed chain degree differs from the stated degree".into()));
            }
        }
        let instance = AttackInstance { variant: j.variant, family: j.family.clone(), degree, orient, orient2, gen, gen2, payload };
        Ok(InstanceBundle { instance, sealed })
    }
}
