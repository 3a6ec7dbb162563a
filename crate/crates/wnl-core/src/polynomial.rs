//! Polynomials on an lp space, kept as a sum of homogeneous components behind
//! a lazy chain of rank-one precompositions.
//!
//! A polynomial evaluates as `P(y) = C(L1(L2(...Lm(y))))` where `C` is the sum
//! of the stored components and the chain `[L1, ..., Lm]` is applied
//! right-to-left (the last operator appended is the first to touch the input).
//! Chains stay unflattened: each entry is one affine-free rank-one update
//! `y -> a*y + b*g(y)*u`, so evaluation costs O(dim) per chain entry.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::space::{check_same_space, duality_functional, Functional, LpSpace, LpVector};

/// One homogeneous summand of a polynomial.
#[derive(Clone, Debug, PartialEq)]
pub enum ComponentKind {
    /// `x -> sum_i c_i x_i^k`
    Diagonal(Vec<Complex64>),
    /// `x -> f(x)^k`
    FunctionalPower(Functional),
    /// constant term; only valid at degree 0
    Constant(Complex64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousComponent {
    pub degree: usize,
    pub kind: ComponentKind,
}

impl HomogeneousComponent {
    pub fn diagonal(degree: usize, coeffs: Vec<Complex64>) -> Self {
        HomogeneousComponent {
            degree,
            kind: ComponentKind::Diagonal(coeffs),
        }
    }

    pub fn functional_power(degree: usize, f: Functional) -> Self {
        HomogeneousComponent {
            degree,
            kind: ComponentKind::FunctionalPower(f),
        }
    }

    pub fn constant(c: Complex64) -> Self {
        HomogeneousComponent {
            degree: 0,
            kind: ComponentKind::Constant(c),
        }
    }

    fn is_structurally_zero(&self) -> bool {
        match &self.kind {
            ComponentKind::Diagonal(c) => c.iter().all(|z| z.re == 0.0 && z.im == 0.0),
            ComponentKind::FunctionalPower(f) => {
                f.coords.iter().all(|z| z.re == 0.0 && z.im == 0.0)
            }
            ComponentKind::Constant(c) => c.re == 0.0 && c.im == 0.0,
        }
    }

    fn eval(&self, z: &[Complex64]) -> Complex64 {
        match &self.kind {
            ComponentKind::Diagonal(c) => {
                let k = self.degree as u32;
                c.iter()
                    .zip(z)
                    .filter(|(ci, _)| ci.re != 0.0 || ci.im != 0.0)
                    .map(|(ci, zi)| ci * zi.powu(k))
                    .sum()
            }
            ComponentKind::FunctionalPower(f) => f.apply_slice(z).powu(self.degree as u32),
            ComponentKind::Constant(c) => *c,
        }
    }

    /// Holomorphic gradient d/dz_i, accumulated into `out`.
    fn accumulate_derivative(&self, z: &[Complex64], out: &mut [Complex64]) {
        let k = self.degree;
        if k == 0 {
            return;
        }
        let kc = Complex64::new(k as f64, 0.0);
        match &self.kind {
            ComponentKind::Diagonal(c) => {
                for (i, ci) in c.iter().enumerate() {
                    if ci.re != 0.0 || ci.im != 0.0 {
                        out[i] += kc * ci * z[i].powu(k as u32 - 1);
                    }
                }
            }
            ComponentKind::FunctionalPower(f) => {
                let base = f.apply_slice(z).powu(k as u32 - 1) * kc;
                for (i, fi) in f.coords.iter().enumerate() {
                    out[i] += base * fi;
                }
            }
            ComponentKind::Constant(_) => {}
        }
    }
}

/// The rank-one update `y -> scale*y + weight*g(y)*u`, the only linear maps a
/// polynomial can be precomposed with.
#[derive(Clone, Debug, PartialEq)]
pub struct RankOneUpdate {
    pub scale: f64,
    pub weight: f64,
    pub direction: LpVector,
    pub functional: Functional,
}

impl RankOneUpdate {
    pub fn new(scale: f64, weight: f64, direction: LpVector, functional: Functional) -> Result<Self> {
        check_same_space(direction.space, functional.space)?;
        Ok(RankOneUpdate {
            scale,
            weight,
            direction,
            functional,
        })
    }

    /// Norm-one projection onto `span_C(x)`: `y -> g(y) u` with `u = x/||x||`
    /// and `g` the norming functional of `u` (so `g(u) = 1`).
    pub fn projection(x: &LpVector) -> Result<Self> {
        let p = x.space.p;
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::OutOfDomain { what: "p", value: p });
        }
        if x.is_zero() {
            return Err(Error::ZeroVector);
        }
        let u = x.scale(Complex64::new(1.0 / x.norm(), 0.0));
        let g = duality_functional(&u)?;
        RankOneUpdate::new(0.0, 1.0, u, g)
    }

    /// `y -> (1-rho) y + rho P_x(y)`; fixes every point of `span_C(x)` and
    /// contracts the rest of the ball toward the line. `rho = 0` is the
    /// identity special case; `rho` must stay below 1.
    pub fn contraction(rho: f64, x: &LpVector) -> Result<Self> {
        if !(0.0..1.0).contains(&rho) {
            return Err(Error::OutOfDomain {
                what: "rho",
                value: rho,
            });
        }
        let proj = Self::projection(x)?;
        RankOneUpdate::new(1.0 - rho, rho, proj.direction, proj.functional)
    }

    pub fn space(&self) -> LpSpace {
        self.direction.space
    }

    pub fn apply(&self, y: &LpVector) -> Result<LpVector> {
        check_same_space(self.space(), y.space)?;
        let mut coords = y.coords.clone();
        self.apply_in_place(&mut coords);
        LpVector::new(y.space, coords)
    }

    pub(crate) fn apply_in_place(&self, z: &mut [Complex64]) {
        let s = self.functional.apply_slice(z) * self.weight;
        let a = self.scale;
        for (zi, ui) in z.iter_mut().zip(&self.direction.coords) {
            *zi = a * *zi + s * ui;
        }
    }

    /// Transpose action `d -> a d + b g (u . d)` used by the holomorphic chain
    /// rule; bilinear, no conjugation.
    pub(crate) fn transpose_in_place(&self, d: &mut [Complex64]) {
        let s: Complex64 = self
            .direction
            .coords
            .iter()
            .zip(d.iter())
            .map(|(u, di)| u * di)
            .sum::<Complex64>()
            * self.weight;
        let a = self.scale;
        for (di, gi) in d.iter_mut().zip(&self.functional.coords) {
            *di = a * *di + s * gi;
        }
    }
}

/// A polynomial: homogeneous components (distinct degrees, sorted) plus the
/// precomposition chain.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    space: LpSpace,
    components: Vec<HomogeneousComponent>,
    chain: Vec<RankOneUpdate>,
}

impl Polynomial {
    pub fn new(space: LpSpace, components: Vec<HomogeneousComponent>) -> Result<Self> {
        let mut components = components;
        components.sort_by_key(|c| c.degree);
        for w in components.windows(2) {
            if w[0].degree == w[1].degree {
                return Err(Error::Schema(format!(
                    "duplicate component degree {}",
                    w[0].degree
                )));
            }
        }
        for comp in &components {
            match &comp.kind {
                ComponentKind::Diagonal(c) => {
                    if c.len() != space.dim {
                        return Err(Error::DimensionMismatch {
                            expected: space.dim,
                            got: c.len(),
                        });
                    }
                }
                ComponentKind::FunctionalPower(f) => {
                    check_same_space(space, f.space)?;
                    if comp.degree == 0 {
                        return Err(Error::OutOfDomain {
                            what: "functional power degree",
                            value: 0.0,
                        });
                    }
                }
                ComponentKind::Constant(_) => {
                    if comp.degree != 0 {
                        return Err(Error::OutOfDomain {
                            what: "constant component degree",
                            value: comp.degree as f64,
                        });
                    }
                }
            }
        }
        Ok(Polynomial {
            space,
            components,
            chain: Vec::new(),
        })
    }

    pub fn constant(space: LpSpace, c: Complex64) -> Self {
        Polynomial::new(space, vec![HomogeneousComponent::constant(c)]).unwrap()
    }

    pub fn space(&self) -> LpSpace {
        self.space
    }

    pub fn components(&self) -> &[HomogeneousComponent] {
        &self.components
    }

    pub fn chain(&self) -> &[RankOneUpdate] {
        &self.chain
    }

    /// Highest degree with a structurally nonzero component. The zero
    /// polynomial reports degree 0.
    pub fn degree(&self) -> usize {
        self.components
            .iter()
            .filter(|c| !c.is_structurally_zero())
            .map(|c| c.degree)
            .max()
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_structurally_zero())
    }

    /// `P -> P o op`: appends to the chain, which is applied right-to-left.
    pub fn precompose(&self, op: RankOneUpdate) -> Result<Polynomial> {
        check_same_space(self.space, op.space())?;
        let mut out = self.clone();
        out.chain.push(op);
        Ok(out)
    }

    /// Applies the stored chain to raw coordinates.
    pub(crate) fn chain_apply(&self, y: &[Complex64]) -> Vec<Complex64> {
        let mut z = y.to_vec();
        for op in self.chain.iter().rev() {
            op.apply_in_place(&mut z);
        }
        z
    }

    pub(crate) fn eval_slice(&self, y: &[Complex64]) -> Complex64 {
        if self.chain.is_empty() {
            return self.components.iter().map(|c| c.eval(y)).sum();
        }
        let z = self.chain_apply(y);
        self.components.iter().map(|c| c.eval(&z)).sum()
    }

    pub fn eval(&self, y: &LpVector) -> Result<Complex64> {
        check_same_space(self.space, y.space)?;
        Ok(self.eval_slice(&y.coords))
    }

    /// Holomorphic gradient `dP/dy_i` via the chain rule: component gradients
    /// at the chained point pulled back through the (constant) Jacobians.
    pub(crate) fn derivative_slice(&self, y: &[Complex64]) -> Vec<Complex64> {
        let z = if self.chain.is_empty() {
            y.to_vec()
        } else {
            self.chain_apply(y)
        };
        let mut d = vec![Complex64::new(0.0, 0.0); self.space.dim];
        for comp in &self.components {
            comp.accumulate_derivative(&z, &mut d);
        }
        for op in self.chain.iter() {
            op.transpose_in_place(&mut d);
        }
        d
    }

    /// Value of the degree-k homogeneous part (chain included, which is linear
    /// and therefore degree-preserving). `k` beyond the degree is an error.
    pub fn component_eval(&self, k: usize, y: &LpVector) -> Result<Complex64> {
        check_same_space(self.space, y.space)?;
        if k > self.degree() {
            return Err(Error::OutOfRange {
                index: k,
                max: self.degree(),
            });
        }
        let z = self.chain_apply(&y.coords);
        Ok(self
            .components
            .iter()
            .filter(|c| c.degree == k)
            .map(|c| c.eval(&z))
            .sum())
    }

    /// Multiplies the polynomial by a positive real factor, folded into the
    /// component coefficients so the result serializes without side channels.
    pub fn scale_by(&self, factor: f64) -> Result<Polynomial> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::OutOfDomain {
                what: "factor",
                value: factor,
            });
        }
        let fc = Complex64::new(factor, 0.0);
        let mut out = self.clone();
        for comp in &mut out.components {
            match &mut comp.kind {
                ComponentKind::Diagonal(c) => {
                    for z in c.iter_mut() {
                        *z *= fc;
                    }
                }
                ComponentKind::Constant(c) => *c *= fc,
                ComponentKind::FunctionalPower(f) => {
                    // (c^(1/k) f)(x)^k = c f(x)^k
                    let root = Complex64::new(factor.powf(1.0 / comp.degree as f64), 0.0);
                    for z in f.coords.iter_mut() {
                        *z *= root;
                    }
                }
            }
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// JSON schema. Complex numbers are [re, im] pairs; p = inf is the string
// "inf". Round-trips are exact because floats are emitted shortest-roundtrip.
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct SpaceDoc {
    n: usize,
    p: PDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PDoc {
    Num(f64),
    Word(String),
}

impl SpaceDoc {
    fn from_space(s: LpSpace) -> Self {
        SpaceDoc {
            n: s.dim,
            p: if s.p.is_infinite() {
                PDoc::Word("inf".to_string())
            } else {
                PDoc::Num(s.p)
            },
        }
    }

    fn to_space(&self) -> Result<LpSpace> {
        let p = match &self.p {
            PDoc::Num(v) => {
                if !v.is_finite() {
                    return Err(Error::Schema("p must be finite or \"inf\"".into()));
                }
                *v
            }
            PDoc::Word(w) if w == "inf" => f64::INFINITY,
            PDoc::Word(w) => return Err(Error::Schema(format!("unknown p sentinel {w:?}"))),
        };
        LpSpace::new(self.n, p)
    }
}

fn pairs(coords: &[Complex64]) -> Vec<[f64; 2]> {
    coords.iter().map(|z| [z.re, z.im]).collect()
}

fn unpairs(pairs: &[[f64; 2]]) -> Result<Vec<Complex64>> {
    let mut out = Vec::with_capacity(pairs.len());
    for pr in pairs {
        if !pr[0].is_finite() || !pr[1].is_finite() {
            return Err(Error::Schema("non-finite coefficient".into()));
        }
        out.push(Complex64::new(pr[0], pr[1]));
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct ComponentDoc {
    k: usize,
    kind: String,
    coeffs: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct ChainDoc {
    a: f64,
    b: f64,
    u: Vec<[f64; 2]>,
    g: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct PolyDoc {
    space: SpaceDoc,
    components: Vec<ComponentDoc>,
    // Hand-written documents rarely have one; only corrected outputs do.
    #[serde(default)]
    chain: Vec<ChainDoc>,
}

impl PolyDoc {
    fn from_poly(p: &Polynomial) -> Self {
        PolyDoc {
            space: SpaceDoc::from_space(p.space),
            components: p
                .components
                .iter()
                .map(|c| match &c.kind {
                    ComponentKind::Diagonal(v) => ComponentDoc {
                        k: c.degree,
                        kind: "diagonal".into(),
                        coeffs: pairs(v),
                    },
                    ComponentKind::FunctionalPower(f) => ComponentDoc {
                        k: c.degree,
                        kind: "functional_power".into(),
                        coeffs: pairs(&f.coords),
                    },
                    ComponentKind::Constant(z) => ComponentDoc {
                        k: 0,
                        kind: "constant".into(),
                        coeffs: vec![[z.re, z.im]],
                    },
                })
                .collect(),
            chain: p
                .chain
                .iter()
                .map(|op| ChainDoc {
                    a: op.scale,
                    b: op.weight,
                    u: pairs(&op.direction.coords),
                    g: pairs(&op.functional.coords),
                })
                .collect(),
        }
    }

    fn to_poly(&self) -> Result<Polynomial> {
        let space = self.space.to_space()?;
        let mut components = Vec::with_capacity(self.components.len());
        for c in &self.components {
            let kind = match c.kind.as_str() {
                "diagonal" => ComponentKind::Diagonal(unpairs(&c.coeffs)?),
                "functional_power" => {
                    ComponentKind::FunctionalPower(Functional::new(space, unpairs(&c.coeffs)?)?)
                }
                "constant" => {
                    if c.coeffs.len() != 1 {
                        return Err(Error::Schema("constant takes one coefficient".into()));
                    }
                    ComponentKind::Constant(unpairs(&c.coeffs)?[0])
                }
                other => return Err(Error::Schema(format!("unknown component kind {other:?}"))),
            };
            components.push(HomogeneousComponent {
                degree: c.k,
                kind,
            });
        }
        let mut poly = Polynomial::new(space, components)?;
        for op in &self.chain {
            if !op.a.is_finite() || !op.b.is_finite() {
                return Err(Error::Schema("non-finite chain scalar".into()));
            }
            let u = LpVector::new(space, unpairs(&op.u)?)?;
            let g = Functional::new(space, unpairs(&op.g)?)?;
            poly = poly.precompose(RankOneUpdate::new(op.a, op.b, u, g)?)?;
        }
        Ok(poly)
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PolyDoc::from_poly(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = PolyDoc::deserialize(deserializer)?;
        doc.to_poly().map_err(|e| D::Error::custom(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
struct VectorDoc {
    space: SpaceDoc,
    coords: Vec<[f64; 2]>,
}

impl Serialize for LpVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        VectorDoc {
            space: SpaceDoc::from_space(self.space),
            coords: pairs(&self.coords),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LpVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = VectorDoc::deserialize(deserializer)?;
        let space = doc.space.to_space().map_err(|e| D::Error::custom(e.to_string()))?;
        let coords = unpairs(&doc.coords).map_err(|e| D::Error::custom(e.to_string()))?;
        LpVector::new(space, coords).map_err(|e| D::Error::custom(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::modulus_of_convexity;
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn space2() -> LpSpace {
        LpSpace::new(2, 2.0).unwrap()
    }

    fn x1_squared() -> Polynomial {
        Polynomial::new(
            space2(),
            vec![HomogeneousComponent::diagonal(2, vec![c(1.0, 0.0), c(0.0, 0.0)])],
        )
        .unwrap()
    }

    fn random_ball_vector(rng: &mut ChaCha8Rng, space: LpSpace) -> LpVector {
        let mut coords = Vec::with_capacity(space.dim);
        for _ in 0..space.dim {
            coords.push(c(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0));
        }
        let v = LpVector::new(space, coords).unwrap();
        let n = v.norm();
        if n == 0.0 {
            return v;
        }
        let r: f64 = rng.gen::<f64>() * 0.98;
        v.scale(c(r / n, 0.0))
    }

    #[test]
    fn constant_polynomial_evaluates_to_its_value() {
        let p = Polynomial::constant(space2(), c(2.5, -1.0));
        let y = LpVector::from_reals(space2(), &[0.3, 0.4]).unwrap();
        assert_eq!(p.eval(&y).unwrap(), c(2.5, -1.0));
        assert_eq!(p.degree(), 0);
    }

    #[test]
    fn diagonal_square_frozen_value() {
        let p = x1_squared();
        let y = LpVector::from_reals(space2(), &[0.5, 0.3]).unwrap();
        assert!((p.eval(&y).unwrap() - c(0.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn functional_power_evaluates_hoelder_style() {
        let f = Functional::new(space2(), vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let p = Polynomial::new(space2(), vec![HomogeneousComponent::functional_power(2, f)])
            .unwrap();
        let e1 = LpVector::basis(space2(), 0).unwrap();
        assert!((p.eval(&e1).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        let y = LpVector::new(space2(), vec![c(0.0, 0.5), c(1.0, 0.0)]).unwrap();
        assert!((p.eval(&y).unwrap() - c(-0.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn duplicate_degrees_rejected() {
        let r = Polynomial::new(
            space2(),
            vec![
                HomogeneousComponent::diagonal(1, vec![c(1.0, 0.0), c(0.0, 0.0)]),
                HomogeneousComponent::diagonal(1, vec![c(0.0, 0.0), c(1.0, 0.0)]),
            ],
        );
        assert!(r.is_err());
    }

    #[test]
    fn degree_ignores_structurally_zero_components() {
        let p = Polynomial::new(
            space2(),
            vec![
                HomogeneousComponent::diagonal(1, vec![c(1.0, 0.0), c(0.0, 0.0)]),
                HomogeneousComponent::diagonal(3, vec![c(0.0, 0.0), c(0.0, 0.0)]),
            ],
        )
        .unwrap();
        assert_eq!(p.degree(), 1);
        assert!(!p.is_zero());
    }

    #[test]
    fn projection_fixes_x_and_is_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for p_exp in [1.5, 2.0, 3.0] {
            let space = LpSpace::new(4, p_exp).unwrap();
            for _ in 0..25 {
                let x = random_ball_vector(&mut rng, space);
                if x.norm() < 1e-3 {
                    continue;
                }
                let proj = RankOneUpdate::projection(&x).unwrap();
                let px = proj.apply(&x).unwrap();
                assert!(px.sub(&x).unwrap().norm() < 1e-12 * (1.0 + x.norm()));
                let y = random_ball_vector(&mut rng, space);
                let py = proj.apply(&y).unwrap();
                let ppy = proj.apply(&py).unwrap();
                assert!(ppy.sub(&py).unwrap().norm() < 1e-12);
                // norm-one: ||P_x y|| <= ||y||
                assert!(py.norm() <= y.norm() + 1e-12);
            }
        }
    }

    #[test]
    fn projection_matches_euclidean_projection_in_hilbert_space() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let space = LpSpace::new(5, 2.0).unwrap();
        for _ in 0..50 {
            let x = random_ball_vector(&mut rng, space);
            if x.norm() < 1e-3 {
                continue;
            }
            let y = random_ball_vector(&mut rng, space);
            let proj = RankOneUpdate::projection(&x).unwrap();
            let py = proj.apply(&y).unwrap();
            // <y, x>/<x, x> x
            let num: Complex64 = y
                .coords
                .iter()
                .zip(&x.coords)
                .map(|(yi, xi)| yi * xi.conj())
                .sum();
            let den: f64 = x.coords.iter().map(|z| z.norm_sqr()).sum();
            let expected = x.scale(num / den);
            assert!(py.sub(&expected).unwrap().norm() < 1e-10);
        }
    }

    #[test]
    fn projection_rejects_nonsmooth_exponents_and_zero() {
        let s1 = LpSpace::new(2, 1.0).unwrap();
        let x = LpVector::from_reals(s1, &[1.0, 0.0]).unwrap();
        assert!(RankOneUpdate::projection(&x).is_err());
        let si = LpSpace::new(2, f64::INFINITY).unwrap();
        let x = LpVector::from_reals(si, &[1.0, 0.0]).unwrap();
        assert!(RankOneUpdate::projection(&x).is_err());
        assert!(matches!(
            RankOneUpdate::projection(&LpVector::zero(space2())),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn contraction_identity_at_rho_zero_and_frozen_example() {
        let e1 = LpVector::basis(space2(), 0).unwrap();
        let e2 = LpVector::basis(space2(), 1).unwrap();
        let t0 = RankOneUpdate::contraction(0.0, &e1).unwrap();
        let y = LpVector::new(space2(), vec![c(0.3, 0.1), c(-0.2, 0.4)]).unwrap();
        assert!(t0.apply(&y).unwrap().sub(&y).unwrap().norm() < 1e-15);

        let t = RankOneUpdate::contraction(0.5, &e1).unwrap();
        let te2 = t.apply(&e2).unwrap();
        assert!(te2.sub(&e2.scale(c(0.5, 0.0))).unwrap().norm() < 1e-15);
        assert!((te2.norm() - 0.5).abs() < 1e-15);
        // T fixes x
        assert!(t.apply(&e1).unwrap().sub(&e1).unwrap().norm() < 1e-15);

        assert!(RankOneUpdate::contraction(1.0, &e1).is_err());
        assert!(RankOneUpdate::contraction(-0.1, &e1).is_err());
    }

    #[test]
    fn contraction_norm_decay_follows_convexity_bound() {
        // ||T_{rho,x}(y)|| <= ||y|| - ||y|| delta(2 rho ||y - P_x y||) for rho <= 1/2
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for p_exp in [1.5, 2.0, 3.0] {
            let space = LpSpace::new(3, p_exp).unwrap();
            for _ in 0..40 {
                let x = random_ball_vector(&mut rng, space);
                if x.norm() < 1e-2 {
                    continue;
                }
                let rho = rng.gen::<f64>() * 0.5;
                let y = random_ball_vector(&mut rng, space);
                let proj = RankOneUpdate::projection(&x).unwrap();
                let t = RankOneUpdate::contraction(rho, &x).unwrap();
                let ty = t.apply(&y).unwrap();
                let gap = y.sub(&proj.apply(&y).unwrap()).unwrap().norm();
                let delta = modulus_of_convexity(space, (2.0 * rho * gap).min(2.0)).unwrap();
                assert!(
                    ty.norm() <= y.norm() - y.norm() * delta + 1e-10,
                    "p={p_exp} rho={rho} lhs={} rhs={}",
                    ty.norm(),
                    y.norm() - y.norm() * delta
                );
            }
        }
    }

    #[test]
    fn precompose_chain_matches_hand_composition() {
        let space = LpSpace::new(3, 2.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let poly = Polynomial::new(
            space,
            vec![
                HomogeneousComponent::diagonal(2, vec![c(1.0, 0.2), c(-0.5, 0.0), c(0.0, 1.0)]),
                HomogeneousComponent::diagonal(3, vec![c(0.3, 0.0), c(0.0, 0.0), c(0.7, -0.1)]),
            ],
        )
        .unwrap();
        let x1 = random_ball_vector(&mut rng, space);
        let x2 = random_ball_vector(&mut rng, space);
        let t1 = RankOneUpdate::contraction(0.25, &x1).unwrap();
        let t2 = RankOneUpdate::contraction(0.1, &x2).unwrap();
        let p1 = poly.precompose(t1.clone()).unwrap();
        let p2 = p1.precompose(t2.clone()).unwrap();
        for _ in 0..20 {
            let y = random_ball_vector(&mut rng, space);
            // (P o T1)(y)
            let direct1 = poly.eval(&t1.apply(&y).unwrap()).unwrap();
            assert!((p1.eval(&y).unwrap() - direct1).norm() < 1e-13);
            // ((P o T1) o T2)(y) = P(T1(T2(y)))
            let direct2 = poly.eval(&t1.apply(&t2.apply(&y).unwrap()).unwrap()).unwrap();
            assert!((p2.eval(&y).unwrap() - direct2).norm() < 1e-13);
        }
        assert_eq!(p2.chain().len(), 2);
        assert_eq!(p2.degree(), 3);
    }

    #[test]
    fn component_eval_sums_to_eval_and_is_homogeneous() {
        let space = LpSpace::new(3, 2.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = Functional::new(space, vec![c(0.5, 0.0), c(0.0, -0.5), c(0.25, 0.25)]).unwrap();
        let poly = Polynomial::new(
            space,
            vec![
                HomogeneousComponent::constant(c(0.1, -0.2)),
                HomogeneousComponent::diagonal(1, vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)]),
                HomogeneousComponent::functional_power(3, f),
            ],
        )
        .unwrap();
        let x0 = random_ball_vector(&mut rng, space);
        let t = RankOneUpdate::contraction(0.3, &x0).unwrap();
        let poly = poly.precompose(t).unwrap();

        for _ in 0..20 {
            let y = random_ball_vector(&mut rng, space);
            let total: Complex64 = (0..=poly.degree())
                .map(|k| poly.component_eval(k, &y).unwrap())
                .sum();
            assert!((total - poly.eval(&y).unwrap()).norm() < 1e-12);

            let lam = c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            for k in 0..=poly.degree() {
                let scaled = poly.component_eval(k, &y.scale(lam)).unwrap();
                let expected = poly.component_eval(k, &y).unwrap() * lam.powu(k as u32);
                assert!((scaled - expected).norm() < 1e-12 * (1.0 + expected.norm()));
            }
        }
        assert!(poly.component_eval(poly.degree() + 1, &x0).is_err());
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let space = LpSpace::new(3, 2.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let f = Functional::new(space, vec![c(0.4, 0.1), c(-0.3, 0.0), c(0.0, 0.6)]).unwrap();
        let poly = Polynomial::new(
            space,
            vec![
                HomogeneousComponent::diagonal(2, vec![c(1.0, 0.5), c(-0.2, 0.0), c(0.0, 0.3)]),
                HomogeneousComponent::functional_power(4, f),
            ],
        )
        .unwrap();
        let x0 = random_ball_vector(&mut rng, space);
        let poly = poly
            .precompose(RankOneUpdate::contraction(0.2, &x0).unwrap())
            .unwrap();

        let y = random_ball_vector(&mut rng, space);
        let d = poly.derivative_slice(&y.coords);
        let h = 1e-6;
        for i in 0..space.dim {
            let mut plus = y.coords.clone();
            plus[i] += c(h, 0.0);
            let mut minus = y.coords.clone();
            minus[i] -= c(h, 0.0);
            let fd = (poly.eval_slice(&plus) - poly.eval_slice(&minus)) / c(2.0 * h, 0.0);
            assert!((fd - d[i]).norm() < 1e-6 * (1.0 + d[i].norm()), "coord {i}");
            // holomorphy: d/d(im) = i * d/d(re)
            let mut plus_i = y.coords.clone();
            plus_i[i] += c(0.0, h);
            let mut minus_i = y.coords.clone();
            minus_i[i] -= c(0.0, h);
            let fd_im = (poly.eval_slice(&plus_i) - poly.eval_slice(&minus_i)) / c(2.0 * h, 0.0);
            assert!((fd_im - c(0.0, 1.0) * d[i]).norm() < 1e-6 * (1.0 + d[i].norm()));
        }
    }

    #[test]
    fn scale_by_multiplies_values() {
        let space = LpSpace::new(3, 2.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = Functional::new(space, vec![c(0.4, 0.1), c(-0.3, 0.0), c(0.0, 0.6)]).unwrap();
        let poly = Polynomial::new(
            space,
            vec![
                HomogeneousComponent::constant(c(0.2, 0.0)),
                HomogeneousComponent::diagonal(2, vec![c(1.0, 0.5), c(-0.2, 0.0), c(0.0, 0.3)]),
                HomogeneousComponent::functional_power(3, f),
            ],
        )
        .unwrap();
        let scaled = poly.scale_by(2.5).unwrap();
        for _ in 0..10 {
            let y = random_ball_vector(&mut rng, space);
            let a = poly.eval(&y).unwrap() * c(2.5, 0.0);
            let b = scaled.eval(&y).unwrap();
            assert!((a - b).norm() < 1e-12 * (1.0 + a.norm()));
        }
        assert!(poly.scale_by(0.0).is_err());
        assert!(poly.scale_by(-1.0).is_err());
    }

    #[test]
    fn json_round_trip_is_exact() {
        let space = LpSpace::new(2, 2.5).unwrap();
        let f = Functional::new(space, vec![c(0.1 + 0.2, -1.0 / 3.0), c(0.0, 0.7)]).unwrap();
        let poly = Polynomial::new(
            space,
            vec![
                HomogeneousComponent::diagonal(2, vec![c(0.1, 0.3), c(-7.0, 1e-17)]),
                HomogeneousComponent::functional_power(3, f),
            ],
        )
        .unwrap();
        let x = LpVector::new(space, vec![c(0.3, 0.4), c(0.5, 0.0)]).unwrap();
        let poly = poly
            .precompose(RankOneUpdate::contraction(0.123456789, &x).unwrap())
            .unwrap();
        let json = serde_json::to_string(&poly).unwrap();
        let back: Polynomial = serde_json::from_str(&json).unwrap();
        assert_eq!(poly, back);

        // and the doubly-serialized form is byte-identical
        let json2 = serde_json::to_string(&back).unwrap();
        assert_eq!(json, json2);
    }

    #[test]
    fn json_round_trip_infinite_p() {
        let space = LpSpace::new(2, f64::INFINITY).unwrap();
        let poly = Polynomial::new(
            space,
            vec![HomogeneousComponent::diagonal(1, vec![c(1.0, 0.0), c(2.0, 0.0)])],
        )
        .unwrap();
        let json = serde_json::to_string(&poly).unwrap();
        assert!(json.contains("\"inf\""));
        let back: Polynomial = serde_json::from_str(&json).unwrap();
        assert_eq!(poly, back);
    }

    #[test]
    fn json_schema_snapshot() {
        let poly = x1_squared();
        let json = serde_json::to_string(&poly).unwrap();
        assert_eq!(
            json,
            "{\"space\":{\"n\":2,\"p\":2.0},\"components\":[{\"k\":2,\"kind\":\"diagonal\",\"coeffs\":[[1.0,0.0],[0.0,0.0]]}],\"chain\":[]}"
        );
    }

    #[test]
    fn chain_field_is_optional_on_input() {
        let doc = r#"{"space":{"n":2,"p":2.0},"components":[{"k":2,"kind":"diagonal","coeffs":[[1.0,0.0],[0.0,0.0]]}]}"#;
        let poly: Polynomial = serde_json::from_str(doc).unwrap();
        assert!(poly.chain().is_empty());
        assert_eq!(poly, x1_squared());
    }

    #[test]
    fn malformed_documents_rejected() {
        let bad = [
            // wrong coefficient count
            r#"{"space":{"n":2,"p":2.0},"components":[{"k":1,"kind":"diagonal","coeffs":[[1.0,0.0]]}],"chain":[]}"#,
            // unknown kind
            r#"{"space":{"n":1,"p":2.0},"components":[{"k":1,"kind":"mystery","coeffs":[[1.0,0.0]]}],"chain":[]}"#,
            // constant at nonzero degree
            r#"{"space":{"n":1,"p":2.0},"components":[{"k":2,"kind":"constant","coeffs":[[1.0,0.0]]}],"chain":[]}"#,
            // bad p sentinel
            r#"{"space":{"n":1,"p":"infinite"},"components":[],"chain":[]}"#,
            // p below 1
            r#"{"space":{"n":1,"p":0.5},"components":[],"chain":[]}"#,
        ];
        for doc in bad {
            assert!(serde_json::from_str::<Polynomial>(doc).is_err(), "{doc}");
        }
    }

    #[test]
    fn vector_json_round_trip() {
        let space = LpSpace::new(3, 1.5).unwrap();
        let v = LpVector::new(space, vec![c(0.1, -0.2), c(1.0 / 3.0, 0.0), c(0.0, 1e-12)]).unwrap();
        let json = serde_json::to_string(&v).unwrap();
        let back: LpVector = serde_json::from_str(&json).unwrap();
        assert_eq!(v, back);
    }

    proptest! {
        #[test]
        fn chain_preserves_degree_and_evaluation_linearity(seed in 0u64..100) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let space = LpSpace::new(3, 2.0).unwrap();
            let poly = Polynomial::new(
                space,
                vec![HomogeneousComponent::diagonal(
                    2,
                    vec![c(rng.gen(), rng.gen()), c(rng.gen(), rng.gen()), c(rng.gen(), rng.gen())],
                )],
            )
            .unwrap();
            let x = random_ball_vector(&mut rng, space);
            prop_assume!(x.norm() > 1e-3);
            let chained = poly
                .precompose(RankOneUpdate::contraction(0.4, &x).unwrap())
                .unwrap();
            prop_assert_eq!(chained.degree(), 2);
            // 2-homogeneity survives the linear chain
            let y = random_ball_vector(&mut rng, space);
            let two = chained.eval(&y.scale(c(2.0, 0.0))).unwrap();
            let one = chained.eval(&y).unwrap();
            prop_assert!((two - one * c(4.0, 0.0)).norm() < 1e-10 * (1.0 + one.norm()));
        }
    }
}
