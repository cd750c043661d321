//! The Ore ring L[X;theta]: skew polynomials with the twisted product
//! X*c = theta(c)*X, operator evaluation A{b} = sum a_i theta^i(b), left
//! and right Euclidean division, annihilator and interpolating
//! polynomials (with a division-free variant), and root-space dimension.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exact_fields::linalg::SpanTracker;
use crate::exact_fields::{CyclicAutomorphism, FieldElement, FieldTower, OpCounter, Pretty};

/// Degree with the distinct sentinel for the zero polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Degree {
    NegInf,
    Of(usize),
}

impl Degree {
    pub fn as_usize(&self) -> Option<usize> {
        match self {
            Degree::NegInf => None,
            Degree::Of(d) => Some(*d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => write!(f, "-inf"),
            Degree::Of(d) => write!(f, "{d}"),
        }
    }
}

/// Side of a Euclidean division in L[X;theta].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DivSide {
    /// A = B*Q + R
    Left,
    /// A = Q*B + R
    Right,
}

/// Element of L[X;theta]. Coefficients are stored lowest degree first and
/// kept canonical: no trailing zero coefficient, the zero polynomial is
/// the empty list.
#[derive(Clone, Debug)]
pub struct SkewPoly {
    theta: Arc<CyclicAutomorphism>,
    coeffs: Vec<FieldElement>,
}

impl PartialEq for SkewPoly {
    fn eq(&self, other: &Self) -> bool {
        CyclicAutomorphism::same(&self.theta, &other.theta) && self.coeffs == other.coeffs
    }
}

impl Eq for SkewPoly {}

impl SkewPoly {
    pub fn zero(theta: Arc<CyclicAutomorphism>) -> Self {
        SkewPoly { theta, coeffs: Vec::new() }
    }

    pub fn one(theta: Arc<CyclicAutomorphism>) -> Self {
        let one = theta.tower().one();
        SkewPoly { theta, coeffs: vec![one] }
    }

    /// c * X^i
    pub fn monomial(theta: Arc<CyclicAutomorphism>, c: FieldElement, i: usize) -> Self {
        let mut coeffs = vec![theta.tower().zero(); i + 1];
        coeffs[i] = c;
        Self::from_coeffs(theta, coeffs)
    }

    pub fn from_coeffs(theta: Arc<CyclicAutomorphism>, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        SkewPoly { theta, coeffs }
    }

    pub fn theta(&self) -> &Arc<CyclicAutomorphism> {
        &self.theta
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        self.theta.tower()
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.tower().zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Degree {
        if self.coeffs.is_empty() {
            Degree::NegInf
        } else {
            Degree::Of(self.coeffs.len() - 1)
        }
    }

    pub fn lead(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_some_and(|c| c.is_one())
    }

    fn check_same_theta(&self, other: &SkewPoly) -> Result<()> {
        if !CyclicAutomorphism::same(&self.theta, &other.theta) {
            return Err(Error::ThetaMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &SkewPoly) -> Result<SkewPoly> {
        self.check_same_theta(other)?;
        let tw = self.tower();
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i);
            let b = other.coeffs.get(i);
            out.push(match (a, b) {
                (Some(x), Some(y)) => tw.add(x, y),
                (Some(x), None) => x.clone(),
                (None, Some(y)) => y.clone(),
                (None, None) => unreachable!(),
            });
        }
        Ok(SkewPoly::from_coeffs(self.theta.clone(), out))
    }

    pub fn sub(&self, other: &SkewPoly) -> Result<SkewPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SkewPoly {
        let tw = self.tower();
        SkewPoly {
            theta: self.theta.clone(),
            coeffs: self.coeffs.iter().map(|c| tw.neg(c)).collect(),
        }
    }

    /// Left multiplication by a scalar: c * A.
    pub fn scale(&self, c: &FieldElement) -> SkewPoly {
        let tw = self.tower();
        if c.is_zero() {
            return SkewPoly::zero(self.theta.clone());
        }
        SkewPoly::from_coeffs(
            self.theta.clone(),
            self.coeffs.iter().map(|a| tw.mul(c, a)).collect(),
        )
    }

    /// Symbolic product: sum over i,j of a_i theta^i(b_j) X^{i+j}.
    pub fn mul(&self, other: &SkewPoly) -> Result<SkewPoly> {
        self.check_same_theta(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(SkewPoly::zero(self.theta.clone()));
        }
        let tw = self.tower().clone();
        let th = &self.theta;
        let da = self.coeffs.len() - 1;
        let db = other.coeffs.len() - 1;
        let mut out = vec![tw.zero(); da + db + 1];
        // twisted coefficients of B, advanced one theta power per row
        let mut btheta: Vec<FieldElement> = other.coeffs.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                for b in btheta.iter_mut() {
                    *b = th.apply1(b);
                }
            }
            if a.is_zero() {
                continue;
            }
            for (j, b) in btheta.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let t = tw.mul(a, b);
                out[i + j] = tw.add(&out[i + j], &t);
            }
        }
        Ok(SkewPoly::from_coeffs(self.theta.clone(), out))
    }

    /// Operator evaluation A{b} = sum a_i theta^i(b); K-linear in b.
    pub fn eval(&self, b: &FieldElement) -> FieldElement {
        let tw = self.tower();
        let mut acc = tw.zero();
        let mut cur = b.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                cur = self.theta.apply1(&cur);
            }
            if a.is_zero() {
                continue;
            }
            let t = tw.mul(a, &cur);
            acc = tw.add(&acc, &t);
        }
        acc
    }

    pub fn eval_vector(&self, bs: &[FieldElement]) -> Vec<FieldElement> {
        bs.iter().map(|b| self.eval(b)).collect()
    }

    /// Euclidean division by a nonzero divisor. `Left` computes
    /// A = B*Q + R, `Right` computes A = Q*B + R, with deg R < deg B.
    pub fn divide(&self, divisor: &SkewPoly, side: DivSide) -> Result<(SkewPoly, SkewPoly)> {
        self.check_same_theta(divisor)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let tw = self.tower().clone();
        let th = self.theta.clone();
        let db = divisor.coeffs.len() - 1;
        let lead_b = divisor.lead().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot: Vec<FieldElement> = Vec::new();
        while rem.len() > db {
            let dr = rem.len() - 1;
            let d = dr - db;
            if quot.len() < d + 1 {
                quot.resize(d + 1, tw.zero());
            }
            let lead_r = rem.pop().unwrap();
            if lead_r.is_zero() {
                continue;
            }
            let q = match side {
                // lead(B*qX^d) = b_db * theta^db(q), so q = theta^{-db}(r/b)
                DivSide::Left => th.apply(&tw.div(&lead_r, &lead_b)?, -(db as i64)),
                // lead(qX^d * B) = q * theta^{d+...}: q*theta^d(b_db)
                DivSide::Right => tw.div(&lead_r, &th.apply(&lead_b, d as i64))?,
            };
            // subtract the rest of the product (leading term cancels by
            // construction and was popped already)
            for (j, bj) in divisor.coeffs.iter().enumerate().take(db) {
                if bj.is_zero() {
                    continue;
                }
                let t = match side {
                    DivSide::Left => tw.mul(bj, &th.apply(&q, j as i64)),
                    DivSide::Right => tw.mul(&q, &th.apply(bj, d as i64)),
                };
                rem[d + j] = tw.sub(&rem[d + j], &t);
            }
            quot[d] = q;
        }
        Ok((
            SkewPoly::from_coeffs(th.clone(), quot),
            SkewPoly::from_coeffs(th, rem),
        ))
    }

    /// Monic annihilator of the K-span of `v`: the unique monic polynomial
    /// of degree dim_K span(v) vanishing on it. K-dependent entries are
    /// skipped; a zero pivot on a K-independent entry means the fixed
    /// field of theta is larger than K and raises `HdimViolation`.
    pub fn annihilator(theta: &Arc<CyclicAutomorphism>, v: &[FieldElement]) -> Result<SkewPoly> {
        let mut c = OpCounter::default();
        counted::annihilator(theta, v, &mut c)
    }

    /// Interpolator: the unique polynomial of degree < |g| with
    /// Int{g_i} = y_i on a K-independent support g.
    pub fn interpolator(
        theta: &Arc<CyclicAutomorphism>,
        g: &[FieldElement],
        y: &[FieldElement],
    ) -> Result<SkewPoly> {
        Ok(Self::annihilator_interpolator(theta, g, y)?.1)
    }

    /// Joint computation of the monic annihilator of g and the
    /// interpolator of y at g.
    pub fn annihilator_interpolator(
        theta: &Arc<CyclicAutomorphism>,
        g: &[FieldElement],
        y: &[FieldElement],
    ) -> Result<(SkewPoly, SkewPoly)> {
        let mut c = OpCounter::default();
        counted::annihilator_interpolator(theta, g, y, &mut c)
    }

    /// Division-free variant: returns (Ann, Int, lambda) where Ann is a
    /// nonzero multiple of the monic annihilator, Int{g_i} = lambda * y_i
    /// and lambda != 0. No field division is performed, so integral
    /// inputs give integral outputs.
    pub fn df_annihilator_interpolator(
        theta: &Arc<CyclicAutomorphism>,
        g: &[FieldElement],
        y: &[FieldElement],
    ) -> Result<(SkewPoly, SkewPoly, FieldElement)> {
        let mut c = OpCounter::default();
        counted::df_annihilator_interpolator(theta, g, y, &mut c)
    }

    /// K-dimension of the root space {b in L : A{b} = 0}, computed as the
    /// kernel of the K-linear map sum a_i M_theta^i in the power basis.
    /// Does not assume H_dim.
    pub fn root_space_dim(&self) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let th = &self.theta;
        let tw = self.tower();
        let top = tw.top_layer();
        let m = th.top_degree();
        let mut acc = crate::exact_fields::linalg::Mat::zero_matrix(tw, top - 1, m, m);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let term = th.multiplication_matrix(a).matmul(tw, th.power_matrix(i));
            for r in 0..m {
                for c in 0..m {
                    *acc.at_mut(r, c) = tw.add(acc.at(r, c), term.at(r, c));
                }
            }
        }
        acc.kernel_dim(tw)
    }
}

impl fmt::Display for SkewPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})X^{i}", Pretty(c))?;
        }
        Ok(())
    }
}

/// Instrumented coefficient-level kernels shared with the decoder. Every
/// field operation performed on L goes through [`Ctx`], which applies the
/// usual short-circuits (multiplication by one or zero does no ring work)
/// and tallies what remains.
pub(crate) mod counted {
    use super::*;

    pub(crate) struct Ctx<'a> {
        pub th: &'a Arc<CyclicAutomorphism>,
        pub cnt: &'a mut OpCounter,
    }

    impl<'a> Ctx<'a> {
        pub fn new(th: &'a Arc<CyclicAutomorphism>, cnt: &'a mut OpCounter) -> Self {
            Ctx { th, cnt }
        }

        fn tw(&self) -> &Arc<FieldTower> {
            self.th.tower()
        }

        pub fn add(&mut self, a: &FieldElement, b: &FieldElement) -> FieldElement {
            if a.is_zero() {
                return b.clone();
            }
            if b.is_zero() {
                return a.clone();
            }
            self.cnt.add += 1;
            self.tw().add(a, b)
        }

        pub fn sub(&mut self, a: &FieldElement, b: &FieldElement) -> FieldElement {
            if b.is_zero() {
                return a.clone();
            }
            if a.is_zero() {
                return self.tw().neg(b);
            }
            self.cnt.add += 1;
            self.tw().sub(a, b)
        }

        pub fn mul(&mut self, a: &FieldElement, b: &FieldElement) -> FieldElement {
            if a.is_zero() || b.is_zero() {
                return self.tw().zero_at(a.layer());
            }
            if a.is_one() {
                self.cnt.mul_trivial += 1;
                return b.clone();
            }
            if b.is_one() {
                self.cnt.mul_trivial += 1;
                return a.clone();
            }
            self.cnt.mul += 1;
            self.tw().mul(a, b)
        }

        pub fn div(&mut self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
            if b.is_zero() {
                return Err(Error::DivisionByZero);
            }
            if b.is_one() {
                self.cnt.mul_trivial += 1;
                return Ok(a.clone());
            }
            self.cnt.div += 1;
            self.tw().div(a, b)
        }

        pub fn theta(&mut self, a: &FieldElement) -> FieldElement {
            self.cnt.theta += 1;
            self.th.apply1(a)
        }

        pub fn neg(&mut self, a: &FieldElement) -> FieldElement {
            self.tw().neg(a)
        }
    }

    /// Coefficient vectors without trailing zeros; the zero polynomial is
    /// the empty vector.
    pub(crate) type Coeffs = Vec<FieldElement>;

    pub(crate) fn strip(mut v: Coeffs) -> Coeffs {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        v
    }

    /// A{b} with counted operations.
    pub(crate) fn eval(ctx: &mut Ctx, a: &[FieldElement], b: &FieldElement) -> FieldElement {
        let mut acc = ctx.tw().zero();
        let mut cur = b.clone();
        for (i, c) in a.iter().enumerate() {
            if i > 0 {
                cur = ctx.theta(&cur);
            }
            if c.is_zero() {
                continue;
            }
            let t = ctx.mul(c, &cur);
            acc = ctx.add(&acc, &t);
        }
        acc
    }

    /// (X - c X^0) * A
    pub(crate) fn linear_mul(ctx: &mut Ctx, c: &FieldElement, a: &[FieldElement]) -> Coeffs {
        ctx.cnt.slots += a.len() as u64;
        let mut out = vec![ctx.tw().zero(); a.len() + 1];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            out[i + 1] = ctx.theta(ai);
            let t = ctx.mul(c, ai);
            out[i] = ctx.sub(&out[i], &t);
        }
        strip(out)
    }

    /// (u X - tu X^0) * A, the division-free linear factor.
    pub(crate) fn df_linear_mul(
        ctx: &mut Ctx,
        u: &FieldElement,
        tu: &FieldElement,
        a: &[FieldElement],
    ) -> Coeffs {
        ctx.cnt.slots += a.len() as u64;
        let mut out = vec![ctx.tw().zero(); a.len() + 1];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            let sh = ctx.theta(ai);
            out[i + 1] = ctx.mul(u, &sh);
            let t = ctx.mul(tu, ai);
            out[i] = ctx.sub(&out[i], &t);
        }
        strip(out)
    }

    /// A - c*B
    pub(crate) fn axpy(ctx: &mut Ctx, a: &[FieldElement], c: &FieldElement, b: &[FieldElement]) -> Coeffs {
        ctx.cnt.slots += a.len().max(b.len()) as u64;
        let n = a.len().max(b.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let x = a.get(i).cloned().unwrap_or_else(|| ctx.tw().zero());
            match b.get(i) {
                Some(y) if !y.is_zero() => {
                    let t = ctx.mul(c, y);
                    out.push(ctx.sub(&x, &t));
                }
                _ => out.push(x),
            }
        }
        strip(out)
    }

    /// u*A - v*B
    pub(crate) fn lin_comb(
        ctx: &mut Ctx,
        u: &FieldElement,
        a: &[FieldElement],
        v: &FieldElement,
        b: &[FieldElement],
    ) -> Coeffs {
        ctx.cnt.slots += a.len().max(b.len()) as u64;
        let n = a.len().max(b.len());
        let mut out = Vec::with_capacity(n);
        let zero = ctx.tw().zero();
        for i in 0..n {
            let x = match a.get(i) {
                Some(x) if !x.is_zero() => ctx.mul(u, x),
                _ => zero.clone(),
            };
            let y = match b.get(i) {
                Some(y) if !y.is_zero() => ctx.mul(v, y),
                _ => zero.clone(),
            };
            out.push(ctx.sub(&x, &y));
        }
        strip(out)
    }

    /// X * A (theta-shift)
    pub(crate) fn x_shift(ctx: &mut Ctx, a: &[FieldElement]) -> Coeffs {
        ctx.cnt.slots += a.len() as u64;
        if a.is_empty() {
            return Vec::new();
        }
        let mut out = Vec::with_capacity(a.len() + 1);
        out.push(ctx.tw().zero());
        for ai in a {
            out.push(if ai.is_zero() { ai.clone() } else { ctx.theta(ai) });
        }
        out
    }

    pub(crate) fn annihilator(
        theta: &Arc<CyclicAutomorphism>,
        v: &[FieldElement],
        cnt: &mut OpCounter,
    ) -> Result<SkewPoly> {
        let tower = theta.tower().clone();
        let mut ctx = Ctx::new(theta, cnt);
        let mut ann: Coeffs = vec![tower.one()];
        let mut span = SpanTracker::new();
        for vi in v {
            let p = eval(&mut ctx, &ann, vi);
            if p.is_zero() {
                if vi.is_zero() || span.contains(&tower, vi.coeffs()) {
                    continue;
                }
                return Err(Error::HdimViolation);
            }
            let tp = ctx.theta(&p);
            let r = ctx.div(&tp, &p)?;
            ann = linear_mul(&mut ctx, &r, &ann);
            span.insert(&tower, vi.coeffs())?;
        }
        Ok(SkewPoly::from_coeffs(theta.clone(), ann))
    }

    pub(crate) fn annihilator_interpolator(
        theta: &Arc<CyclicAutomorphism>,
        g: &[FieldElement],
        y: &[FieldElement],
        cnt: &mut OpCounter,
    ) -> Result<(SkewPoly, SkewPoly)> {
        if g.len() != y.len() {
            return Err(Error::InvalidParams(
                "support and value lists differ in length".into(),
            ));
        }
        let tower = theta.tower().clone();
        let mut ctx = Ctx::new(theta, cnt);
        let mut ann: Coeffs = vec![tower.one()];
        let mut int: Coeffs = Vec::new();
        for (gi, yi) in g.iter().zip(y) {
            let pa = eval(&mut ctx, &ann, gi);
            if pa.is_zero() {
                return Err(Error::DependentSupport);
            }
            let pi = eval(&mut ctx, &int, gi);
            let num = ctx.sub(yi, &pi);
            let c = ctx.div(&num, &pa)?;
            let minus_c = ctx.neg(&c);
            int = axpy(&mut ctx, &int, &minus_c, &ann);
            let tpa = ctx.theta(&pa);
            let r = ctx.div(&tpa, &pa)?;
            ann = linear_mul(&mut ctx, &r, &ann);
        }
        Ok((
            SkewPoly::from_coeffs(theta.clone(), ann),
            SkewPoly::from_coeffs(theta.clone(), int),
        ))
    }

    pub(crate) fn df_annihilator_interpolator(
        theta: &Arc<CyclicAutomorphism>,
        g: &[FieldElement],
        y: &[FieldElement],
        cnt: &mut OpCounter,
    ) -> Result<(SkewPoly, SkewPoly, FieldElement)> {
        if g.len() != y.len() {
            return Err(Error::InvalidParams(
                "support and value lists differ in length".into(),
            ));
        }
        let tower = theta.tower().clone();
        let mut ctx = Ctx::new(theta, cnt);
        let mut ann: Coeffs = vec![tower.one()];
        let mut int: Coeffs = Vec::new();
        let mut lambda = tower.one();
        for (gi, yi) in g.iter().zip(y) {
            let pa = eval(&mut ctx, &ann, gi);
            if pa.is_zero() {
                return Err(Error::DependentSupport);
            }
            let pi = eval(&mut ctx, &int, gi);
            let ly = ctx.mul(&lambda, yi);
            let w = ctx.sub(&ly, &pi);
            let minus_w = ctx.neg(&w);
            int = lin_comb(&mut ctx, &pa, &int, &minus_w, &ann);
            lambda = ctx.mul(&pa, &lambda);
            let tpa = ctx.theta(&pa);
            ann = df_linear_mul(&mut ctx, &pa, &tpa, &ann);
        }
        Ok((
            SkewPoly::from_coeffs(theta.clone(), ann),
            SkewPoly::from_coeffs(theta.clone(), int),
            lambda,
        ))
    }

    /// Counted left division A = B*Q + R (used for the decoder's final
    /// division, so each quotient step is one division plus deg-B
    /// multiplications).
    pub(crate) fn left_divide(
        ctx: &mut Ctx,
        a: &[FieldElement],
        b: &[FieldElement],
    ) -> Result<(Coeffs, Coeffs)> {
        if b.is_empty() {
            return Err(Error::DivisionByZero);
        }
        let db = b.len() - 1;
        let lead_b = &b[db];
        let mut rem: Coeffs = a.to_vec();
        let mut quot: Coeffs = Vec::new();
        while rem.len() > db {
            let d = rem.len() - 1 - db;
            if quot.len() < d + 1 {
                quot.resize(d + 1, ctx.tw().zero());
            }
            let lead_r = rem.pop().unwrap();
            if lead_r.is_zero() {
                continue;
            }
            let ratio = ctx.div(&lead_r, lead_b)?;
            let q = {
                ctx.cnt.theta += 1;
                ctx.th.apply(&ratio, -(db as i64))
            };
            for (j, bj) in b.iter().enumerate().take(db) {
                if bj.is_zero() {
                    continue;
                }
                let tq = {
                    ctx.cnt.theta += 1;
                    ctx.th.apply(&q, j as i64)
                };
                let t = ctx.mul(bj, &tq);
                rem[d + j] = ctx.sub(&rem[d + j], &t);
            }
            quot[d] = q;
        }
        Ok((strip(quot), strip(rem)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_fields::{cyclotomic_tower, extend_by_ints, k_rank, FieldTower};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn cyclo7_theta3() -> Arc<CyclicAutomorphism> {
        let tw = cyclotomic_tower(7).unwrap();
        let img = tw.pow(&tw.generator(1), 3);
        CyclicAutomorphism::new(tw, img).unwrap()
    }

    fn kummer_theta(n: u8) -> Arc<CyclicAutomorphism> {
        let k = extend_by_ints(&FieldTower::rationals(), &[1, 1, 1]).unwrap();
        let l = extend_by_ints(&k, &[-2, 0, 0, 0, 0, 0, 1]).unwrap();
        let j = l.lift_to(&l.generator(1), 2);
        let alpha = l.generator(2);
        let img = match n {
            1 => l.mul(&j, &alpha),
            2 => l.mul(&l.add(&j, &l.one()), &alpha),
            _ => unreachable!(),
        };
        CyclicAutomorphism::new(l, img).unwrap()
    }

    fn random_poly<R: Rng>(th: &Arc<CyclicAutomorphism>, rng: &mut R, deg: usize) -> SkewPoly {
        let tw = th.tower();
        let coeffs = (0..=deg).map(|_| tw.random_element(rng, 2)).collect();
        SkewPoly::from_coeffs(th.clone(), coeffs)
    }

    #[test]
    fn twisted_product_defining_relation() {
        // X * (alpha X^0) = theta(alpha) X = alpha^3 X
        let th = cyclo7_theta3();
        let tw = th.tower().clone();
        let a = tw.generator(1);
        let x = SkewPoly::monomial(th.clone(), tw.one(), 1);
        let ca = SkewPoly::monomial(th.clone(), a.clone(), 0);
        let prod = x.mul(&ca).unwrap();
        assert_eq!(prod, SkewPoly::monomial(th.clone(), tw.pow(&a, 3), 1));
    }

    #[test]
    fn identity_theta_gives_commutative_product() {
        let tw = cyclotomic_tower(7).unwrap();
        let id = CyclicAutomorphism::new(tw.clone(), tw.generator(1)).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for _ in 0..20 {
            let a = random_poly(&id, &mut rng, 3);
            let b = random_poly(&id, &mut rng, 3);
            assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        }
    }

    #[test]
    fn worked_evaluations_from_the_degree_six_cyclotomic_field() {
        let th = cyclo7_theta3();
        let tw = th.tower().clone();
        let a = tw.generator(1);
        // f = a^2 X^0 + a^5 X^1
        let f = SkewPoly::from_coeffs(th.clone(), vec![tw.pow(&a, 2), tw.pow(&a, 5)]);
        // f{a^2} = 2 a^4
        let v = f.eval(&tw.pow(&a, 2));
        assert_eq!(v, tw.mul(&tw.int(2), &tw.pow(&a, 4)));
        // f{a^4} = -1 - a - a^2 - a^4 - a^5
        let v = f.eval(&tw.pow(&a, 4));
        let mut coeffs = vec![tw.int_at(0, -1); 6];
        coeffs[3] = tw.int_at(0, 0);
        assert_eq!(v, tw.from_coeffs(1, coeffs).unwrap());
        // A{0} = 0
        assert!(f.eval(&tw.zero()).is_zero());
    }

    #[test]
    fn product_evaluation_is_composition() {
        let th = cyclo7_theta3();
        let tw = th.tower().clone();
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..100 {
            let a = random_poly(&th, &mut rng, 4);
            let b = random_poly(&th, &mut rng, 4);
            let x = tw.random_element(&mut rng, 2);
            let lhs = a.mul(&b).unwrap().eval(&x);
            let rhs = a.eval(&b.eval(&x));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn degree_arithmetic_and_ring_axioms() {
        let th = cyclo7_theta3();
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        for _ in 0..50 {
            let a = random_poly(&th, &mut rng, 3);
            let b = random_poly(&th, &mut rng, 2);
            let c = random_poly(&th, &mut rng, 2);
            // associativity, distributivity
            let lhs = a.mul(&b).unwrap().mul(&c).unwrap();
            let rhs = a.mul(&b.mul(&c).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
            let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
            let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
            // no zero divisors: degrees add
            if !a.is_zero() && !b.is_zero() {
                let (Degree::Of(da), Degree::Of(db)) = (a.degree(), b.degree()) else {
                    unreachable!()
                };
                assert_eq!(a.mul(&b).unwrap().degree(), Degree::Of(da + db));
            }
        }
    }

    #[test]
    fn divisions_satisfy_their_identities() {
        let th = cyclo7_theta3();
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        for _ in 0..100 {
            let a = random_poly(&th, &mut rng, 5);
            let mut b = random_poly(&th, &mut rng, 2);
            while b.is_zero() {
                b = random_poly(&th, &mut rng, 2);
            }
            for side in [DivSide::Left, DivSide::Right] {
                let (q, r) = a.divide(&b, side).unwrap();
                let back = match side {
                    DivSide::Left => b.mul(&q).unwrap().add(&r).unwrap(),
                    DivSide::Right => q.mul(&b).unwrap().add(&r).unwrap(),
                };
                assert_eq!(back, a);
                assert!(r.degree() < b.degree());
            }
        }
    }

    #[test]
    fn exact_products_divide_back_with_zero_remainder() {
        let th = cyclo7_theta3();
        let mut rng = ChaCha12Rng::seed_from_u64(29);
        for _ in 0..100 {
            let mut b = random_poly(&th, &mut rng, 3);
            while b.is_zero() {
                b = random_poly(&th, &mut rng, 3);
            }
            let q = random_poly(&th, &mut rng, 2);
            let a = b.mul(&q).unwrap();
            let (q2, r) = a.divide(&b, DivSide::Left).unwrap();
            assert!(r.is_zero());
            assert_eq!(q2, q);
        }
    }

    #[test]
    fn short_dividend_divides_trivially() {
        let th = cyclo7_theta3();
        let tw = th.tower().clone();
        let a = SkewPoly::monomial(th.clone(), tw.generator(1), 1);
        let b = SkewPoly::monomial(th.clone(), tw.one(), 3);
        let (q, r) = a.divide(&b, DivSide::Left).unwrap();
        assert!(q.is_zero());
        assert_eq!(r, a);
    }

    #[test]
    fn annihilator_of_one_is_x_minus_one() {
        let th = cyclo7_theta3();
        let tw = th.tower().clone();
        let ann = SkewPoly::annihilator(&th, &[tw.one()]).unwrap();
        let expect = SkewPoly::from_coeffs(th.clone(), vec![tw.int(-1), tw.one()]);
        assert_eq!(ann, expect);
    }

    #[test]
    fn annihilator_raises_hdim_violation_outside_framework() {
        let th1 = kummer_theta(1);
        let tw = th1.tower().clone();
        let alpha = tw.generator(2);
        let v = vec![tw.one(), tw.pow(&alpha, 3)];
        assert!(matches!(
            SkewPoly::annihilator(&th1, &v),
            Err(Error::HdimViolation)
        ));
    }

    #[test]
    fn kummer_theta2_annihilator_matches_printed_polynomial() {
        // annihilator of (1, alpha, alpha^3, alpha^4) under theta2 is
        // j X^0 - (j+1) X^2 + X^4
        let th2 = kummer_theta(2);
        let tw = th2.tower().clone();
        let alpha = tw.generator(2);
        let v = vec![
            tw.one(),
            alpha.clone(),
            tw.pow(&alpha, 3),
            tw.pow(&alpha, 4),
        ];
        let ann = SkewPoly::annihilator(&th2, &v).unwrap();
        let j = tw.lift_to(&tw.generator(1), 2);
        let expect = SkewPoly::from_coeffs(
            th2.clone(),
            vec![
                j.clone(),
                tw.zero(),
                tw.neg(&tw.add(&j, &tw.one())),
                tw.zero(),
                tw.one(),
            ],
        );
        assert_eq!(ann, expect);
    }

    #[test]
    fn annihilator_degree_is_span_dimension_and_vanishes_on_combinations() {
        let th = cyclo7_theta3();
        let tw = th.tower().clone();
        let a = tw.generator(1);
        let v: Vec<_> = (0..6).map(|i| tw.pow(&a, i)).collect();
        let ann = SkewPoly::annihilator(&th, &v).unwrap();
        assert_eq!(ann.degree(), Degree::Of(6));
        assert!(ann.is_monic());
        // vanishes on all 0/1 combinations
        for mask in 0..64u32 {
            let mut x = tw.zero();
            for (i, vi) in v.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    x = tw.add(&x, vi);
                }
            }
            assert!(ann.eval(&x).is_zero());
        }
        // dependent entries are skipped, not fatal
        let with_dep = vec![
            tw.one(),
            a.clone(),
            tw.add(&tw.one(), &a),
            tw.pow(&a, 2),
        ];
        let ann = SkewPoly::annihilator(&th, &with_dep).unwrap();
        assert_eq!(ann.degree(), Degree::Of(3));
        let basis = tw.power_basis(1);
        assert_eq!(k_rank(&tw, &with_dep, &basis).unwrap(), 3);
    }

    #[test]
    fn interpolator_agrees_with_its_contract() {
        let th = cyclo7_theta3();
        let tw = th.tower().clone();
        let a = tw.generator(1);
        let g: Vec<_> = (0..6).map(|i| tw.pow(&a, i)).collect();
        // y = 0 gives the zero interpolant
        let zeros = vec![tw.zero(); 6];
        assert!(SkewPoly::interpolator(&th, &g, &zeros).unwrap().is_zero());
        // single point: Int = (y/g) X^0
        let y1 = tw.pow(&a, 4);
        let int = SkewPoly::interpolator(&th, &g[2..3], &[y1.clone()]).unwrap();
        assert_eq!(int, SkewPoly::monomial(th.clone(), tw.div(&y1, &g[2]).unwrap(), 0));
        // encode-then-interpolate recovers f of degree < n
        let f = SkewPoly::from_coeffs(th.clone(), vec![tw.pow(&a, 2), tw.pow(&a, 5)]);
        let y = f.eval_vector(&g);
        let int = SkewPoly::interpolator(&th, &g, &y).unwrap();
        assert_eq!(int, f);
        // interpolation conditions on random values
        let mut rng = ChaCha12Rng::seed_from_u64(17);
        let y: Vec<_> = (0..6).map(|_| tw.random_element(&mut rng, 3)).collect();
        let int = SkewPoly::interpolator(&th, &g, &y).unwrap();
        assert!(int.degree() < Degree::Of(6));
        for (gi, yi) in g.iter().zip(&y) {
            assert_eq!(int.eval(gi), *yi);
        }
        // dependent support is an error here
        let dep = vec![tw.one(), tw.int(2)];
        assert!(matches!(
            SkewPoly::interpolator(&th, &dep, &[tw.zero(), tw.zero()]),
            Err(Error::DependentSupport)
        ));
    }

    #[test]
    fn division_free_variant_keeps_integral_coefficients() {
        let th = cyclo7_theta3();
        let tw = th.tower().clone();
        let a = tw.generator(1);
        let g: Vec<_> = (0..5).map(|i| tw.pow(&a, i)).collect();
        let mut rng = ChaCha12Rng::seed_from_u64(19);
        for _ in 0..50 {
            let y: Vec<_> = (0..5).map(|_| tw.random_element(&mut rng, 2)).collect();
            let (ann, int, lambda) = SkewPoly::df_annihilator_interpolator(&th, &g, &y).unwrap();
            assert!(!lambda.is_zero());
            // integral inputs stay integral: no denominators appear
            for c in ann.coeffs().iter().chain(int.coeffs()) {
                assert!(crate::residue_reduction::element_size_bits(c).is_ok());
            }
            // Int{g_i} = lambda * y_i
            for (gi, yi) in g.iter().zip(&y) {
                assert_eq!(int.eval(gi), tw.mul(&lambda, yi));
            }
            // Int / lambda is the standard interpolator
            let std = SkewPoly::interpolator(&th, &g, &y).unwrap();
            let lam_inv = tw.inv(&lambda).unwrap();
            assert_eq!(int.scale(&lam_inv), std);
            // Ann is a scalar multiple of the monic annihilator
            let std_ann = SkewPoly::annihilator(&th, &g).unwrap();
            let mu = ann.lead().unwrap().clone();
            assert_eq!(std_ann.scale(&mu), ann);
        }
        // y = 0: Int = 0 and lambda is the product of the pivots
        let zeros = vec![tw.zero(); 5];
        let (_, int, lambda) = SkewPoly::df_annihilator_interpolator(&th, &g, &zeros).unwrap();
        assert!(int.is_zero());
        assert!(!lambda.is_zero());
    }

    #[test]
    fn root_space_dimensions_match_the_kummer_dichotomy() {
        let th1 = kummer_theta(1);
        let x_minus_1 = |th: &Arc<CyclicAutomorphism>| {
            let tw = th.tower().clone();
            SkewPoly::from_coeffs(th.clone(), vec![tw.int(-1), tw.one()])
        };
        assert_eq!(x_minus_1(&th1).root_space_dim().unwrap(), 2);
        let th2 = kummer_theta(2);
        assert_eq!(x_minus_1(&th2).root_space_dim().unwrap(), 1);
        // X^s - X^0 is annihilated by everything
        let th = cyclo7_theta3();
        let tw = th.tower().clone();
        let mut coeffs = vec![tw.zero(); 7];
        coeffs[0] = tw.int(-1);
        coeffs[6] = tw.one();
        let p = SkewPoly::from_coeffs(th.clone(), coeffs);
        assert_eq!(p.root_space_dim().unwrap(), 6);
        assert!(matches!(
            SkewPoly::zero(th).root_space_dim(),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn root_space_bounded_by_degree_under_framework() {
        let th = cyclo7_theta3();
        let mut rng = ChaCha12Rng::seed_from_u64(31);
        for _ in 0..50 {
            let mut a = random_poly(&th, &mut rng, 4);
            while a.is_zero() {
                a = random_poly(&th, &mut rng, 4);
            }
            let d = a.degree().as_usize().unwrap();
            assert!(a.root_space_dim().unwrap() <= d);
        }
    }
}
