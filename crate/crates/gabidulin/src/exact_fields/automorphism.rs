//! K-automorphisms of the top layer of a tower, given by the image of the
//! layer generator. Powers are cached as K-linear matrices so applying
//! theta^i is a matrix-vector product.

use std::sync::Arc;

use super::linalg::Mat;
use super::{FieldElement, FieldTower};
use crate::error::{Error, Result};

/// A finite-order K-automorphism theta of L, the top layer of a tower,
/// where K is the layer below. Fixes K elementwise by construction.
#[derive(Debug)]
pub struct CyclicAutomorphism {
    tower: Arc<FieldTower>,
    generator_image: FieldElement,
    order: usize,
    fixed_dim: usize,
    /// power_mats[i] is the matrix of theta^i over K in the power basis.
    power_mats: Vec<Mat>,
}

impl CyclicAutomorphism {
    /// Build theta from the image of the top-layer generator. The image
    /// must be a root of the top-layer modulus; the order is computed, and
    /// theta^{-1} is realized as theta^{order-1}.
    pub fn new(tower: Arc<FieldTower>, generator_image: FieldElement) -> Result<Arc<Self>> {
        let top = tower.top_layer();
        if top == 0 {
            return Err(Error::InvalidParams("tower has no extension layer".into()));
        }
        if generator_image.layer() != top {
            return Err(Error::TowerMismatch);
        }
        let m = tower.layer_degree(top);
        // root check: evaluate the modulus at the image
        let modulus = &tower.layers()[top - 1].modulus;
        let mut acc = tower.zero_at(top);
        let mut pw = tower.one_at(top);
        for c in modulus {
            if !c.is_zero() {
                let lifted = tower.lift_to(c, top);
                let t = tower.mul(&lifted, &pw);
                acc = tower.add(&acc, &t);
            }
            pw = tower.mul(&pw, &generator_image);
        }
        if !acc.is_zero() {
            return Err(Error::NotARoot);
        }
        // matrix of theta: column j = coordinates of image^j
        let m1 = {
            let mut cols = Vec::with_capacity(m);
            let mut pw = tower.one_at(top);
            for _ in 0..m {
                cols.push(pw.coeffs().to_vec());
                pw = tower.mul(&pw, &generator_image);
            }
            Mat::from_columns(m, &cols, || tower.zero_at(top - 1))
        };
        let id = Mat::identity(&tower, top - 1, m);
        let mut power_mats = vec![id.clone()];
        let mut cur = m1.clone();
        let mut order = None;
        for s in 1..=m {
            if cur == id {
                order = Some(s);
                break;
            }
            power_mats.push(cur.clone());
            cur = m1.matmul(&tower, &cur);
        }
        let order = order.ok_or_else(|| {
            Error::InvalidParams("generator image does not define a finite-order automorphism".into())
        })?;
        // fixed field dimension: kernel of (theta - id) over K
        let fixed_dim = {
            let theta_m = if order == 1 { &power_mats[0] } else { &power_mats[1] };
            let mut diff = theta_m.clone();
            for i in 0..m {
                *diff.at_mut(i, i) = tower.sub(diff.at(i, i), &tower.one_at(top - 1));
            }
            diff.kernel_dim(&tower)?
        };
        Ok(Arc::new(CyclicAutomorphism {
            tower,
            generator_image,
            order,
            fixed_dim,
            power_mats,
        }))
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn generator_image(&self) -> &FieldElement {
        &self.generator_image
    }

    /// Order s of theta: the least s >= 1 with theta^s = id.
    pub fn order(&self) -> usize {
        self.order
    }

    /// K-dimension of the fixed field L^theta. The coding framework needs
    /// this to be 1 (then L^theta = K).
    pub fn fixed_field_dim(&self) -> usize {
        self.fixed_dim
    }

    pub fn framework_holds(&self) -> bool {
        self.fixed_dim == 1
    }

    /// Degree [L:K] of the top layer.
    pub fn top_degree(&self) -> usize {
        self.tower.layer_degree(self.tower.top_layer())
    }

    pub fn power_matrix(&self, i: usize) -> &Mat {
        &self.power_mats[i % self.order]
    }

    /// theta^i(x) for any integer i (negative powers via theta^{s+i mod s}).
    pub fn apply(&self, x: &FieldElement, i: i64) -> FieldElement {
        let s = self.order as i64;
        let i = i.rem_euclid(s) as usize;
        if i == 0 {
            return x.clone();
        }
        debug_assert_eq!(x.layer(), self.tower.top_layer());
        let coords = self.power_mats[i].matvec(&self.tower, x.coeffs());
        FieldElement::Ext(coords)
    }

    pub fn apply1(&self, x: &FieldElement) -> FieldElement {
        self.apply(x, 1)
    }

    /// Matrix (over K) of multiplication by `a` on L, in the power basis.
    pub fn multiplication_matrix(&self, a: &FieldElement) -> Mat {
        let top = self.tower.top_layer();
        let m = self.top_degree();
        let basis = self.tower.power_basis(top);
        let cols: Vec<Vec<FieldElement>> = basis
            .iter()
            .map(|b| self.tower.mul(a, b).coeffs().to_vec())
            .collect();
        Mat::from_columns(m, &cols, || self.tower.zero_at(top - 1))
    }

    /// Same automorphism: pointer identity as the fast path, otherwise
    /// structural equality of the tower and the generator image. Used to
    /// keep values built over different thetas from mixing.
    pub fn same(a: &Arc<Self>, b: &Arc<Self>) -> bool {
        Arc::ptr_eq(a, b)
            || (a.tower.as_ref() == b.tower.as_ref() && a.generator_image == b.generator_image)
    }
}

impl PartialEq for CyclicAutomorphism {
    fn eq(&self, other: &Self) -> bool {
        self.tower.as_ref() == other.tower.as_ref()
            && self.generator_image == other.generator_image
    }
}

impl Eq for CyclicAutomorphism {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_fields::{cyclotomic_tower, extend_by_ints, FieldTower};
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn cyclo7_theta3() -> Arc<CyclicAutomorphism> {
        let tw = cyclotomic_tower(7).unwrap();
        let img = tw.pow(&tw.generator(1), 3);
        CyclicAutomorphism::new(tw, img).unwrap()
    }

    fn kummer() -> Arc<FieldTower> {
        let k = extend_by_ints(&FieldTower::rationals(), &[1, 1, 1]).unwrap();
        extend_by_ints(&k, &[-2, 0, 0, 0, 0, 0, 1]).unwrap()
    }

    #[test]
    fn cyclotomic_alpha_to_alpha_cubed_has_order_six() {
        let th = cyclo7_theta3();
        assert_eq!(th.order(), 6);
        assert_eq!(th.fixed_field_dim(), 1);
        let tw = th.tower();
        let a = tw.generator(1);
        assert_eq!(th.apply(&a, 1), tw.pow(&a, 3));
        // theta^{-1} = theta^5
        assert_eq!(th.apply(&th.apply(&a, -1), 1), a);
    }

    #[test]
    fn kummer_theta1_and_theta2_orders_and_fixed_fields() {
        let l = kummer();
        let j = l.lift_to(&l.generator(1), 2);
        let alpha = l.generator(2);
        // theta1: alpha -> j*alpha has order 3, fixed field of dimension 2
        let th1 = CyclicAutomorphism::new(l.clone(), l.mul(&j, &alpha)).unwrap();
        assert_eq!(th1.order(), 3);
        assert_eq!(th1.fixed_field_dim(), 2);
        // theta2: alpha -> (j+1)*alpha has order 6, fixed field K
        let jp1 = l.add(&j, &l.one());
        let th2 = CyclicAutomorphism::new(l.clone(), l.mul(&jp1, &alpha)).unwrap();
        assert_eq!(th2.order(), 6);
        assert_eq!(th2.fixed_field_dim(), 1);
        // non-root image rejected
        assert!(matches!(
            CyclicAutomorphism::new(l.clone(), l.add(&alpha, &l.one())),
            Err(Error::NotARoot)
        ));
    }

    #[test]
    fn identity_automorphism_fixes_everything() {
        let tw = cyclotomic_tower(7).unwrap();
        let id = CyclicAutomorphism::new(tw.clone(), tw.generator(1)).unwrap();
        assert_eq!(id.order(), 1);
        assert_eq!(id.fixed_field_dim(), 6);
    }

    #[test]
    fn automorphism_is_multiplicative_and_fixes_k() {
        let th = cyclo7_theta3();
        let tw = th.tower().clone();
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        for _ in 0..100 {
            let x = tw.random_element(&mut rng, 4);
            let y = tw.random_element(&mut rng, 4);
            assert_eq!(th.apply1(&tw.mul(&x, &y)), tw.mul(&th.apply1(&x), &th.apply1(&y)));
            assert_eq!(th.apply1(&tw.add(&x, &y)), tw.add(&th.apply1(&x), &th.apply1(&y)));
        }
        // K elements (constants) are fixed
        let c = tw.int(41);
        assert_eq!(th.apply1(&c), c);
        // theta^order = id
        let x = tw.random_element(&mut rng, 4);
        assert_eq!(th.apply(&x, th.order() as i64), x);
    }

    #[test]
    fn frobenius_on_f36() {
        let f3 = FieldTower::prime_field(3).unwrap();
        let tw = extend_by_ints(&f3, &[1, 1, 1, 1, 1, 1, 1]).unwrap();
        let img = tw.pow(&tw.generator(1), 3);
        let th = CyclicAutomorphism::new(tw.clone(), img).unwrap();
        assert_eq!(th.order(), 6);
        assert!(th.framework_holds());
        // over F_3 the map x -> x^3 is the Frobenius itself
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for _ in 0..50 {
            let x = tw.random_element(&mut rng, 0);
            assert_eq!(th.apply1(&x), tw.pow(&x, 3));
        }
    }
}
