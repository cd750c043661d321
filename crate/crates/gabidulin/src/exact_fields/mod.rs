//! Exact arithmetic in towers of field extensions over Q or a prime field.
//!
//! A [`FieldTower`] is a chain of quotient extensions: layer 0 is the base
//! field (Q or F_p), layer `i` is `layer_{i-1}[Y] / (modulus_i)`. Elements
//! are dense coefficient vectors over the layer below, so the relative
//! structure of the tower stays visible; nothing is flattened to an
//! absolute representation.

mod automorphism;
pub mod display;
pub mod linalg;

pub use automorphism::CyclicAutomorphism;
pub use display::{pretty_list, Pretty};

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Base field of a tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Base {
    /// The rational numbers.
    Rationals,
    /// The prime field F_p.
    Prime(u64),
}

/// A value of the base field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    Q(BigRational),
    Fp(u64),
}

/// An element of some layer of a tower. Layer 0 elements are base scalars;
/// an element of layer `i >= 1` is its coefficient vector over layer `i-1`.
///
/// Elements carry no reference to their tower: all arithmetic goes through
/// [`FieldTower`] methods, which know the moduli. Mixing elements of
/// different towers is a caller error and is caught by shape checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldElement {
    Base(Scalar),
    Ext(Vec<FieldElement>),
}

impl FieldElement {
    /// Nesting depth: 0 for base scalars.
    pub fn layer(&self) -> usize {
        match self {
            FieldElement::Base(_) => 0,
            FieldElement::Ext(v) => 1 + v[0].layer(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Base(Scalar::Q(r)) => r.is_zero(),
            FieldElement::Base(Scalar::Fp(x)) => *x == 0,
            FieldElement::Ext(v) => v.iter().all(|c| c.is_zero()),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Base(Scalar::Q(r)) => r.is_one(),
            FieldElement::Base(Scalar::Fp(x)) => *x == 1,
            FieldElement::Ext(v) => v[0].is_one() && v[1..].iter().all(|c| c.is_zero()),
        }
    }

    /// Coefficients over the layer below. Panics on base scalars.
    pub fn coeffs(&self) -> &[FieldElement] {
        match self {
            FieldElement::Ext(v) => v,
            FieldElement::Base(_) => panic!("base scalar has no coefficient vector"),
        }
    }
}

/// One extension step of a tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layer {
    /// Monic polynomial over the layer below, lowest degree first,
    /// length `degree + 1`.
    pub modulus: Vec<FieldElement>,
}

impl Layer {
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }
}

/// A chain of field extensions with exact arithmetic at every layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldTower {
    base: Base,
    layers: Vec<Layer>,
}

// -- prime field helpers --

fn fp_add(p: u64, a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

fn fp_sub(p: u64, a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

fn fp_mul(p: u64, a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn fp_inv(p: u64, a: u64) -> Result<u64> {
    if a == 0 {
        return Err(Error::DivisionByZero);
    }
    // extended Euclid on (a, p)
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "modulus not prime or element not invertible");
    Ok(t.rem_euclid(p as i128) as u64)
}

pub(crate) fn is_small_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldTower {
    pub fn rationals() -> Arc<Self> {
        Arc::new(FieldTower {
            base: Base::Rationals,
            layers: Vec::new(),
        })
    }

    pub fn prime_field(p: u64) -> Result<Arc<Self>> {
        if !is_small_prime(p) || p >= (1 << 31) {
            return Err(Error::InvalidParams(format!("{p} is not a small prime")));
        }
        Ok(Arc::new(FieldTower {
            base: Base::Prime(p),
            layers: Vec::new(),
        }))
    }

    pub fn base(&self) -> &Base {
        &self.base
    }

    pub fn is_rational_base(&self) -> bool {
        matches!(self.base, Base::Rationals)
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// Index of the top layer (0 for a bare base field).
    pub fn top_layer(&self) -> usize {
        self.layers.len()
    }

    /// Relative degree of `layer` over the layer below it.
    pub fn layer_degree(&self, layer: usize) -> usize {
        assert!(layer >= 1 && layer <= self.layers.len());
        self.layers[layer - 1].degree()
    }

    /// Degree over the base field of the given layer.
    pub fn absolute_degree_of(&self, layer: usize) -> usize {
        self.layers[..layer].iter().map(|l| l.degree()).product()
    }

    /// Degree of the whole tower over its base.
    pub fn absolute_degree(&self) -> usize {
        self.absolute_degree_of(self.top_layer())
    }

    /// Number of elements of the top layer, for finite towers.
    pub fn cardinality(&self) -> Option<u128> {
        match self.base {
            Base::Prime(p) => (p as u128).checked_pow(self.absolute_degree() as u32),
            Base::Rationals => None,
        }
    }

    /// Extend the tower by one more layer with the given monic modulus
    /// (coefficients over the current top layer, lowest degree first).
    ///
    /// Over a finite base the modulus is checked irreducible. Over Q we
    /// have no factorization engine: irreducibility is the caller's claim
    /// and a later failed inversion surfaces as [`Error::ReducibleModulus`].
    pub fn extend(self: &Arc<Self>, modulus: Vec<FieldElement>) -> Result<Arc<Self>> {
        let top = self.top_layer();
        if modulus.len() < 3 {
            return Err(Error::BadModulus);
        }
        for c in &modulus {
            if c.layer() != top {
                return Err(Error::TowerMismatch);
            }
        }
        if !modulus.last().unwrap().is_one() {
            return Err(Error::BadModulus);
        }
        if !self.is_rational_base() && !self.poly_is_irreducible(&modulus)? {
            return Err(Error::ReducibleModulus);
        }
        let mut layers = self.layers.clone();
        layers.push(Layer { modulus });
        Ok(Arc::new(FieldTower {
            base: self.base.clone(),
            layers,
        }))
    }

    // -- element constructors --

    pub fn zero_at(&self, layer: usize) -> FieldElement {
        if layer == 0 {
            FieldElement::Base(match self.base {
                Base::Rationals => Scalar::Q(BigRational::zero()),
                Base::Prime(_) => Scalar::Fp(0),
            })
        } else {
            let d = self.layer_degree(layer);
            FieldElement::Ext(vec![self.zero_at(layer - 1); d])
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.zero_at(self.top_layer())
    }

    pub fn int_at(&self, layer: usize, n: i64) -> FieldElement {
        if layer == 0 {
            FieldElement::Base(match self.base {
                Base::Rationals => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
                Base::Prime(p) => Scalar::Fp((n as i128).rem_euclid(p as i128) as u64),
            })
        } else {
            let mut v = vec![self.zero_at(layer - 1); self.layer_degree(layer)];
            v[0] = self.int_at(layer - 1, n);
            FieldElement::Ext(v)
        }
    }

    pub fn int(&self, n: i64) -> FieldElement {
        self.int_at(self.top_layer(), n)
    }

    pub fn one_at(&self, layer: usize) -> FieldElement {
        self.int_at(layer, 1)
    }

    pub fn one(&self) -> FieldElement {
        self.int(1)
    }

    pub fn rational_at(&self, layer: usize, r: BigRational) -> Result<FieldElement> {
        match self.base {
            Base::Rationals => Ok(if layer == 0 {
                FieldElement::Base(Scalar::Q(r))
            } else {
                let mut v = vec![self.zero_at(layer - 1); self.layer_degree(layer)];
                v[0] = self.rational_at(layer - 1, r)?;
                FieldElement::Ext(v)
            }),
            Base::Prime(_) => Err(Error::InvalidParams(
                "rational constant in a finite tower".into(),
            )),
        }
    }

    /// The generator of `layer` (the class of Y), as an element of that layer.
    pub fn generator(&self, layer: usize) -> FieldElement {
        assert!(layer >= 1);
        let mut v = vec![self.zero_at(layer - 1); self.layer_degree(layer)];
        v[1] = self.one_at(layer - 1);
        FieldElement::Ext(v)
    }

    /// Build a top-layer element from coordinates over the layer below.
    pub fn from_coeffs(&self, layer: usize, mut coeffs: Vec<FieldElement>) -> Result<FieldElement> {
        let d = self.layer_degree(layer);
        if coeffs.len() > d {
            return Err(Error::InvalidParams("too many coefficients".into()));
        }
        while coeffs.len() < d {
            coeffs.push(self.zero_at(layer - 1));
        }
        for c in &coeffs {
            if c.layer() != layer - 1 {
                return Err(Error::TowerMismatch);
            }
        }
        Ok(FieldElement::Ext(coeffs))
    }

    /// Embed an element of a lower layer into `layer` as a constant.
    pub fn lift_to(&self, x: &FieldElement, layer: usize) -> FieldElement {
        let from = x.layer();
        assert!(from <= layer);
        let mut el = x.clone();
        for l in from + 1..=layer {
            let mut v = vec![self.zero_at(l - 1); self.layer_degree(l)];
            v[0] = el;
            el = FieldElement::Ext(v);
        }
        el
    }

    /// The power basis `1, y, ..., y^{d-1}` of `layer` over the layer below.
    pub fn power_basis(&self, layer: usize) -> Vec<FieldElement> {
        let d = self.layer_degree(layer);
        let y = self.generator(layer);
        let mut basis = Vec::with_capacity(d);
        let mut cur = self.one_at(layer);
        for _ in 0..d {
            basis.push(cur.clone());
            cur = self.mul(&cur, &y);
        }
        basis
    }

    // -- arithmetic --

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match (a, b) {
            (FieldElement::Base(Scalar::Q(x)), FieldElement::Base(Scalar::Q(y))) => {
                FieldElement::Base(Scalar::Q(x + y))
            }
            (FieldElement::Base(Scalar::Fp(x)), FieldElement::Base(Scalar::Fp(y))) => {
                let Base::Prime(p) = self.base else {
                    panic!("Fp scalar in rational tower")
                };
                FieldElement::Base(Scalar::Fp(fp_add(p, *x, *y)))
            }
            (FieldElement::Ext(x), FieldElement::Ext(y)) => {
                debug_assert_eq!(x.len(), y.len());
                FieldElement::Ext(x.iter().zip(y).map(|(u, v)| self.add(u, v)).collect())
            }
            _ => panic!("layer mismatch in add"),
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match (a, b) {
            (FieldElement::Base(Scalar::Q(x)), FieldElement::Base(Scalar::Q(y))) => {
                FieldElement::Base(Scalar::Q(x - y))
            }
            (FieldElement::Base(Scalar::Fp(x)), FieldElement::Base(Scalar::Fp(y))) => {
                let Base::Prime(p) = self.base else {
                    panic!("Fp scalar in rational tower")
                };
                FieldElement::Base(Scalar::Fp(fp_sub(p, *x, *y)))
            }
            (FieldElement::Ext(x), FieldElement::Ext(y)) => {
                debug_assert_eq!(x.len(), y.len());
                FieldElement::Ext(x.iter().zip(y).map(|(u, v)| self.sub(u, v)).collect())
            }
            _ => panic!("layer mismatch in sub"),
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        match a {
            FieldElement::Base(Scalar::Q(x)) => FieldElement::Base(Scalar::Q(-x)),
            FieldElement::Base(Scalar::Fp(x)) => {
                let Base::Prime(p) = self.base else {
                    panic!("Fp scalar in rational tower")
                };
                FieldElement::Base(Scalar::Fp(if *x == 0 { 0 } else { p - x }))
            }
            FieldElement::Ext(v) => FieldElement::Ext(v.iter().map(|c| self.neg(c)).collect()),
        }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match (a, b) {
            (FieldElement::Base(Scalar::Q(x)), FieldElement::Base(Scalar::Q(y))) => {
                FieldElement::Base(Scalar::Q(x * y))
            }
            (FieldElement::Base(Scalar::Fp(x)), FieldElement::Base(Scalar::Fp(y))) => {
                let Base::Prime(p) = self.base else {
                    panic!("Fp scalar in rational tower")
                };
                FieldElement::Base(Scalar::Fp(fp_mul(p, *x, *y)))
            }
            (FieldElement::Ext(x), FieldElement::Ext(y)) => {
                let layer = a.layer();
                let d = x.len();
                debug_assert_eq!(y.len(), d);
                // schoolbook product, then reduce by the layer modulus
                let mut acc = vec![self.zero_at(layer - 1); 2 * d - 1];
                for (i, xi) in x.iter().enumerate() {
                    if xi.is_zero() {
                        continue;
                    }
                    for (j, yj) in y.iter().enumerate() {
                        if yj.is_zero() {
                            continue;
                        }
                        let prod = self.mul(xi, yj);
                        acc[i + j] = self.add(&acc[i + j], &prod);
                    }
                }
                self.reduce_by_modulus(layer, &mut acc);
                acc.truncate(d);
                FieldElement::Ext(acc)
            }
            _ => panic!("layer mismatch in mul"),
        }
    }

    /// Multiply a layer-`l` element by a scalar from the layer below,
    /// coefficient-wise.
    pub fn scalar_mul(&self, a: &FieldElement, c: &FieldElement) -> FieldElement {
        match a {
            FieldElement::Ext(v) => {
                debug_assert_eq!(c.layer() + 1, a.layer());
                FieldElement::Ext(v.iter().map(|x| self.mul(x, c)).collect())
            }
            FieldElement::Base(_) => self.mul(a, c),
        }
    }

    fn reduce_by_modulus(&self, layer: usize, acc: &mut Vec<FieldElement>) {
        let modulus = &self.layers[layer - 1].modulus;
        let d = modulus.len() - 1;
        let mut i = acc.len();
        while i > d {
            i -= 1;
            if acc[i].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut acc[i], self.zero_at(layer - 1));
            for (j, mj) in modulus[..d].iter().enumerate() {
                if mj.is_zero() {
                    continue;
                }
                let t = self.mul(&c, mj);
                acc[i - d + j] = self.sub(&acc[i - d + j], &t);
            }
        }
        acc.truncate(d);
        while acc.len() < d {
            acc.push(self.zero_at(layer - 1));
        }
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match a {
            FieldElement::Base(Scalar::Q(x)) => Ok(FieldElement::Base(Scalar::Q(x.recip()))),
            FieldElement::Base(Scalar::Fp(x)) => {
                let Base::Prime(p) = self.base else {
                    panic!("Fp scalar in rational tower")
                };
                Ok(FieldElement::Base(Scalar::Fp(fp_inv(p, *x)?)))
            }
            FieldElement::Ext(v) => {
                let layer = a.layer();
                // extended Euclid against the layer modulus; a unit gcd
                // certifies the inverse, anything else proves the modulus
                // reducible (only reachable over Q, where extend() trusts
                // the caller).
                let modulus = &self.layers[layer - 1].modulus;
                let mut inv = self.poly_invert_mod(layer - 1, v, modulus)?;
                debug_assert!(inv.iter().skip(v.len()).all(|c| c.is_zero()));
                inv.truncate(v.len());
                while inv.len() < v.len() {
                    inv.push(self.zero_at(layer - 1));
                }
                Ok(FieldElement::Ext(inv))
            }
        }
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        let binv = self.inv(b)?;
        Ok(self.mul(a, &binv))
    }

    pub fn pow(&self, a: &FieldElement, e: u64) -> FieldElement {
        let mut result = self.one_at(a.layer());
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        result
    }

    /// Uniform random element of the top layer of a finite tower, or an
    /// element with integer coordinates in `[-bound, bound]` over Q.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> FieldElement {
        self.random_at(rng, self.top_layer(), bound)
    }

    pub fn random_at<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        layer: usize,
        bound: i64,
    ) -> FieldElement {
        if layer == 0 {
            FieldElement::Base(match self.base {
                Base::Prime(p) => Scalar::Fp(rng.gen_range(0..p)),
                Base::Rationals => Scalar::Q(BigRational::from_integer(BigInt::from(
                    rng.gen_range(-bound..=bound),
                ))),
            })
        } else {
            FieldElement::Ext(
                (0..self.layer_degree(layer))
                    .map(|_| self.random_at(rng, layer - 1, bound))
                    .collect(),
            )
        }
    }

    /// All elements of the top layer of a finite tower.
    pub fn enumerate_elements(&self) -> Result<Vec<FieldElement>> {
        let card = self.cardinality().ok_or_else(|| {
            Error::InvalidParams("cannot enumerate an infinite field".into())
        })?;
        if card > 1 << 20 {
            return Err(Error::EnumerationGuard(card));
        }
        let mut out = Vec::with_capacity(card as usize);
        // odometer over absolute coordinates
        let Base::Prime(p) = self.base else { unreachable!() };
        let abs = self.absolute_degree();
        let mut digits = vec![0u64; abs];
        loop {
            out.push(self.element_from_abs_coords(&digits));
            let mut i = 0;
            loop {
                if i == abs {
                    return Ok(out);
                }
                digits[i] += 1;
                if digits[i] < p {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }

    /// Build a top-layer element from its absolute coordinate vector over
    /// the base field, ordered with the innermost layer varying fastest.
    pub fn element_from_abs_coords(&self, coords: &[u64]) -> FieldElement {
        fn build(tw: &FieldTower, layer: usize, coords: &[u64]) -> FieldElement {
            if layer == 0 {
                return FieldElement::Base(Scalar::Fp(coords[0]));
            }
            let chunk = tw.absolute_degree_of(layer - 1);
            FieldElement::Ext(
                coords
                    .chunks(chunk)
                    .map(|c| build(tw, layer - 1, c))
                    .collect(),
            )
        }
        assert_eq!(coords.len(), self.absolute_degree());
        build(self, self.top_layer(), coords)
    }

    /// Absolute coordinates of a top-layer element over the base field,
    /// as base scalars (innermost layer varying fastest).
    pub fn abs_coords(&self, x: &FieldElement) -> Vec<Scalar> {
        fn flat(x: &FieldElement, out: &mut Vec<Scalar>) {
            match x {
                FieldElement::Base(s) => out.push(s.clone()),
                FieldElement::Ext(v) => v.iter().for_each(|c| flat(c, out)),
            }
        }
        let mut out = Vec::with_capacity(self.absolute_degree());
        flat(x, &mut out);
        out
    }

    // -- polynomial helpers over a layer (commutative, for moduli) --

    fn poly_deg(p: &[FieldElement]) -> Option<usize> {
        p.iter().rposition(|c| !c.is_zero())
    }

    /// Inverse of `a` modulo the monic polynomial `m`, coefficients at
    /// `layer`. Fails with `ReducibleModulus` when gcd(a, m) is not a unit.
    fn poly_invert_mod(
        &self,
        layer: usize,
        a: &[FieldElement],
        m: &[FieldElement],
    ) -> Result<Vec<FieldElement>> {
        // extended Euclid: r0 = m, r1 = a; track s only against a
        let mut r0: Vec<FieldElement> = m.to_vec();
        let mut r1: Vec<FieldElement> = a.to_vec();
        let mut t0: Vec<FieldElement> = vec![];
        let mut t1: Vec<FieldElement> = vec![self.one_at(layer)];
        loop {
            let d1 = match Self::poly_deg(&r1) {
                None => return Err(Error::ReducibleModulus),
                Some(d) => d,
            };
            if d1 == 0 {
                // unit gcd: inverse is t1 / r1[0]
                let c = self.inv(&r1[0])?;
                return Ok(t1.iter().map(|t| self.mul(t, &c)).collect());
            }
            // r0 = q*r1 + r; degree-lowering long division
            let lead_inv = self.inv(&r1[d1])?;
            let mut rem = r0.clone();
            let mut q: Vec<FieldElement> = vec![self.zero_at(layer); rem.len()];
            while let Some(d0) = Self::poly_deg(&rem) {
                if d0 < d1 {
                    break;
                }
                let c = self.mul(&rem[d0], &lead_inv);
                let shift = d0 - d1;
                for (j, rj) in r1.iter().enumerate().take(d1 + 1) {
                    if rj.is_zero() {
                        continue;
                    }
                    let t = self.mul(&c, rj);
                    rem[shift + j] = self.sub(&rem[shift + j], &t);
                }
                q[shift] = c;
            }
            // t_next = t0 - q*t1
            let qd = Self::poly_deg(&q).unwrap_or(0);
            let mut t_next = t0.clone();
            t_next.resize(
                t_next.len().max(qd + t1.len() + 1),
                self.zero_at(layer),
            );
            for (i, qi) in q.iter().enumerate().take(qd + 1) {
                if qi.is_zero() {
                    continue;
                }
                for (j, tj) in t1.iter().enumerate() {
                    if tj.is_zero() {
                        continue;
                    }
                    let t = self.mul(qi, tj);
                    t_next[i + j] = self.sub(&t_next[i + j], &t);
                }
            }
            r0 = r1;
            r1 = rem;
            t0 = t1;
            t1 = t_next;
        }
    }

    /// Rabin irreducibility test for a monic polynomial over a finite layer.
    fn poly_is_irreducible(&self, modulus: &[FieldElement]) -> Result<bool> {
        let top = self.top_layer();
        let d = modulus.len() - 1;
        let q: u128 = match self.base {
            Base::Prime(p) => (p as u128)
                .checked_pow(self.absolute_degree_of(top) as u32)
                .ok_or_else(|| Error::InvalidParams("field too large".into()))?,
            Base::Rationals => unreachable!("irreducibility test needs a finite base"),
        };
        // x^(q^d) == x mod f, and gcd(x^(q^(d/r)) - x, f) == 1 for prime r | d
        let x = vec![self.zero_at(top), self.one_at(top)];
        let xqd = self.poly_pow_q_mod(&x, q, d as u32, modulus);
        if !self.poly_eq_mod(&xqd, &x, modulus) {
            return Ok(false);
        }
        let mut primes = Vec::new();
        let mut n = d;
        let mut f = 2;
        while f * f <= n {
            if n % f == 0 {
                primes.push(f);
                while n % f == 0 {
                    n /= f;
                }
            }
            f += 1;
        }
        if n > 1 {
            primes.push(n);
        }
        for r in primes {
            let e = (d / r) as u32;
            let xe = self.poly_pow_q_mod(&x, q, e, modulus);
            // gcd(xe - x, modulus) must be 1
            let mut diff = xe;
            diff.resize(diff.len().max(2), self.zero_at(top));
            diff[1] = self.sub(&diff[1], &self.one_at(top));
            if !self.poly_gcd_is_one(&diff, modulus) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// x |-> x^(q^e) modulo a monic polynomial, by square and multiply.
    fn poly_pow_q_mod(
        &self,
        a: &[FieldElement],
        q: u128,
        e: u32,
        m: &[FieldElement],
    ) -> Vec<FieldElement> {
        let mut result = a.to_vec();
        for _ in 0..e {
            // result = result^q mod m
            let mut acc = vec![self.one_at(self.top_layer())];
            let mut base = result.clone();
            let mut exp = q;
            while exp > 0 {
                if exp & 1 == 1 {
                    acc = self.poly_mul_mod(&acc, &base, m);
                }
                base = self.poly_mul_mod(&base, &base, m);
                exp >>= 1;
            }
            result = acc;
        }
        result
    }

    fn poly_mul_mod(
        &self,
        a: &[FieldElement],
        b: &[FieldElement],
        m: &[FieldElement],
    ) -> Vec<FieldElement> {
        let layer = self.top_layer();
        let da = Self::poly_deg(a);
        let db = Self::poly_deg(b);
        let (da, db) = match (da, db) {
            (Some(x), Some(y)) => (x, y),
            _ => return vec![self.zero_at(layer)],
        };
        let mut acc = vec![self.zero_at(layer); da + db + 1];
        for (i, ai) in a.iter().enumerate().take(da + 1) {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate().take(db + 1) {
                if bj.is_zero() {
                    continue;
                }
                let t = self.mul(ai, bj);
                acc[i + j] = self.add(&acc[i + j], &t);
            }
        }
        // reduce mod m (monic)
        let dm = m.len() - 1;
        let mut i = acc.len();
        while i > dm {
            i -= 1;
            if acc[i].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut acc[i], self.zero_at(layer));
            for (j, mj) in m[..dm].iter().enumerate() {
                if mj.is_zero() {
                    continue;
                }
                let t = self.mul(&c, mj);
                acc[i - dm + j] = self.sub(&acc[i - dm + j], &t);
            }
        }
        acc.truncate(dm);
        acc
    }

    fn poly_eq_mod(&self, a: &[FieldElement], b: &[FieldElement], m: &[FieldElement]) -> bool {
        let n = a.len().max(b.len()).max(m.len());
        let z = self.zero_at(self.top_layer());
        (0..n).all(|i| {
            let x = a.get(i).unwrap_or(&z);
            let y = b.get(i).unwrap_or(&z);
            x == y || self.sub(x, y).is_zero()
        })
    }

    fn poly_gcd_is_one(&self, a: &[FieldElement], b: &[FieldElement]) -> bool {
        let mut r0 = a.to_vec();
        let mut r1 = b.to_vec();
        loop {
            let d1 = match Self::poly_deg(&r1) {
                None => return Self::poly_deg(&r0) == Some(0),
                Some(d) => d,
            };
            if d1 == 0 {
                return true;
            }
            let lead_inv = match self.inv(&r1[d1]) {
                Ok(c) => c,
                Err(_) => return false,
            };
            while let Some(d0) = Self::poly_deg(&r0) {
                if d0 < d1 {
                    break;
                }
                let c = self.mul(&r0[d0], &lead_inv);
                let shift = d0 - d1;
                for (j, rj) in r1.iter().enumerate().take(d1 + 1) {
                    if rj.is_zero() {
                        continue;
                    }
                    let t = self.mul(&c, rj);
                    r0[shift + j] = self.sub(&r0[shift + j], &t);
                }
            }
            std::mem::swap(&mut r0, &mut r1);
        }
    }
}

/// Convenience: extend a base or tower by the modulus with integer
/// coefficients `c0..cd` given lowest degree first.
pub fn extend_by_ints(tower: &Arc<FieldTower>, coeffs: &[i64]) -> Result<Arc<FieldTower>> {
    let top = tower.top_layer();
    let modulus = coeffs.iter().map(|&c| tower.int_at(top, c)).collect();
    tower.extend(modulus)
}

/// The cyclotomic field Q[Y]/(1 + Y + ... + Y^(p-1)) for a prime p,
/// of degree p-1 over Q.
pub fn cyclotomic_tower(p: u64) -> Result<Arc<FieldTower>> {
    if !is_small_prime(p) {
        return Err(Error::InvalidParams(format!("{p} is not prime")));
    }
    let coeffs = vec![1i64; p as usize];
    extend_by_ints(&FieldTower::rationals(), &coeffs)
}

/// Rank over K of a family of top-layer elements, expressed in the given
/// K-basis of L (K is the layer below the top).
pub fn k_rank(
    tower: &FieldTower,
    vectors: &[FieldElement],
    basis: &[FieldElement],
) -> Result<usize> {
    let coords = coords_in_basis(tower, vectors, basis)?;
    let m = basis.len();
    let mat = linalg::Mat::from_columns(m, &coords, || tower.zero_at(tower.top_layer() - 1));
    mat.rank(tower)
}

/// Coordinates of top-layer elements in an arbitrary K-basis.
/// Errors if the basis has the wrong size or is K-dependent.
pub fn coords_in_basis(
    tower: &FieldTower,
    vectors: &[FieldElement],
    basis: &[FieldElement],
) -> Result<Vec<Vec<FieldElement>>> {
    let top = tower.top_layer();
    let m = tower.layer_degree(top);
    if basis.len() != m {
        return Err(Error::InvalidParams(format!(
            "basis has {} elements, expected {m}",
            basis.len()
        )));
    }
    if is_power_basis(tower, basis) {
        return Ok(vectors.iter().map(|v| v.coeffs().to_vec()).collect());
    }
    // solve B * c = v for every v at once
    let bmat = linalg::Mat::from_columns(m, &basis.iter().map(|b| b.coeffs().to_vec()).collect::<Vec<_>>(), || {
        tower.zero_at(top - 1)
    });
    let rhs = linalg::Mat::from_columns(m, &vectors.iter().map(|v| v.coeffs().to_vec()).collect::<Vec<_>>(), || {
        tower.zero_at(top - 1)
    });
    let sol = bmat
        .solve(tower, &rhs)?
        .ok_or_else(|| Error::InvalidParams("basis is K-linearly dependent".into()))?;
    Ok((0..vectors.len()).map(|j| sol.column(j)).collect())
}

fn is_power_basis(tower: &FieldTower, basis: &[FieldElement]) -> bool {
    let top = tower.top_layer();
    let m = tower.layer_degree(top);
    basis.len() == m
        && basis.iter().enumerate().all(|(i, b)| {
            b.coeffs()
                .iter()
                .enumerate()
                .all(|(j, c)| if i == j { c.is_one() } else { c.is_zero() })
        })
}

/// Operation counters used by the decoder instrumentation. Multiplications
/// by one and additions of zero are genuine short-circuits; they are
/// tallied separately so cost accounting can match hand counts. `slots`
/// counts coefficient positions touched by polynomial updates, the
/// machine-independent measure used to compare variants.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OpCounter {
    pub add: u64,
    pub mul: u64,
    pub mul_trivial: u64,
    pub theta: u64,
    pub div: u64,
    pub slots: u64,
}

impl OpCounter {
    pub fn total(&self) -> u64 {
        self.add + self.mul + self.mul_trivial + self.theta + self.div
    }

    pub fn merged(&self, other: &OpCounter) -> OpCounter {
        OpCounter {
            add: self.add + other.add,
            mul: self.mul + other.mul,
            mul_trivial: self.mul_trivial + other.mul_trivial,
            theta: self.theta + other.theta,
            div: self.div + other.div,
            slots: self.slots + other.slots,
        }
    }
}

/// log2 of |n|, exact enough for size reporting. Returns 0 for n = 0.
pub fn log2_bigint(n: &BigInt) -> f64 {
    if n.is_zero() {
        return 0.0;
    }
    let n = n.abs();
    let bits = n.bits();
    if bits <= 53 {
        let v: f64 = n.to_string().parse().unwrap();
        v.log2()
    } else {
        // top 53 bits as mantissa
        let shifted: BigInt = &n >> (bits - 53);
        let v: f64 = shifted.to_string().parse().unwrap();
        v.log2() + (bits - 53) as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn cyclo7() -> Arc<FieldTower> {
        cyclotomic_tower(7).unwrap()
    }

    #[test]
    fn cyclotomic_reduction_matches_worked_value() {
        // alpha * alpha^5 = alpha^6 = -1 - alpha - ... - alpha^5
        let tw = cyclo7();
        let a = tw.generator(1);
        let a5 = tw.pow(&a, 5);
        let prod = tw.mul(&a, &a5);
        let expect = tw.from_coeffs(1, (0..6).map(|_| tw.int_at(0, -1)).collect()).unwrap();
        assert_eq!(prod, expect);
    }

    #[test]
    fn field_axioms_hold_on_random_samples() {
        for tw in [
            cyclo7(),
            extend_by_ints(&FieldTower::prime_field(3).unwrap(), &[1, 1, 1, 1, 1, 1, 1]).unwrap(),
        ] {
            let mut rng = ChaCha12Rng::seed_from_u64(7);
            for _ in 0..200 {
                let x = tw.random_element(&mut rng, 3);
                let y = tw.random_element(&mut rng, 3);
                let z = tw.random_element(&mut rng, 3);
                // distributivity and associativity
                let lhs = tw.mul(&tw.add(&x, &y), &z);
                let rhs = tw.add(&tw.mul(&x, &z), &tw.mul(&y, &z));
                assert_eq!(lhs, rhs);
                let lhs = tw.mul(&tw.mul(&x, &y), &z);
                let rhs = tw.mul(&x, &tw.mul(&y, &z));
                assert_eq!(lhs, rhs);
                // inverses
                if !x.is_zero() {
                    let xi = tw.inv(&x).unwrap();
                    assert!(tw.mul(&x, &xi).is_one());
                }
            }
        }
    }

    #[test]
    fn finite_extension_requires_irreducible_modulus() {
        let f2 = FieldTower::prime_field(2).unwrap();
        // Y^2 + 1 = (Y+1)^2 over F_2
        assert!(matches!(
            extend_by_ints(&f2, &[1, 0, 1]),
            Err(Error::ReducibleModulus)
        ));
        // Y^2 + Y + 1 is irreducible
        let tw = extend_by_ints(&f2, &[1, 1, 1]).unwrap();
        assert_eq!(tw.absolute_degree(), 2);
        assert_eq!(tw.cardinality(), Some(4));
    }

    #[test]
    fn non_monic_modulus_rejected() {
        let f2 = FieldTower::prime_field(2).unwrap();
        assert!(matches!(
            extend_by_ints(&f2, &[1, 1, 0]),
            Err(Error::BadModulus)
        ));
    }

    #[test]
    fn kummer_tower_builds_with_degree_six_over_k() {
        // K = Q[j], j^2 + j + 1 = 0 ; L = K[Y]/(Y^6 - 2)
        let k = extend_by_ints(&FieldTower::rationals(), &[1, 1, 1]).unwrap();
        let l = extend_by_ints(&k, &[-2, 0, 0, 0, 0, 0, 1]).unwrap();
        assert_eq!(l.absolute_degree(), 12);
        assert_eq!(l.layer_degree(2), 6);
        let alpha = l.generator(2);
        let a6 = l.pow(&alpha, 6);
        assert_eq!(a6, l.int(2));
        // inverses work through both layers
        let x = l.add(&alpha, &l.one());
        let xi = l.inv(&x).unwrap();
        assert!(l.mul(&x, &xi).is_one());
    }

    #[test]
    fn k_rank_of_dependent_and_independent_families() {
        let tw = cyclo7();
        let basis = tw.power_basis(1);
        let a = tw.generator(1);
        let fam = vec![tw.one(), a.clone(), tw.pow(&a, 3), tw.pow(&a, 4)];
        assert_eq!(k_rank(&tw, &fam, &basis).unwrap(), 4);
        let zeros = vec![tw.zero(), tw.zero(), tw.zero()];
        assert_eq!(k_rank(&tw, &zeros, &basis).unwrap(), 0);
        // multiples of a single element span one dimension
        let fam = vec![a.clone(), tw.add(&a, &a), tw.mul(&a, &tw.int(5))];
        assert_eq!(k_rank(&tw, &fam, &basis).unwrap(), 1);
    }

    #[test]
    fn enumerate_elements_counts_cardinality() {
        let tw = extend_by_ints(&FieldTower::prime_field(2).unwrap(), &[1, 1, 0, 1]).unwrap();
        let all = tw.enumerate_elements().unwrap();
        assert_eq!(all.len(), 8);
    }
}
