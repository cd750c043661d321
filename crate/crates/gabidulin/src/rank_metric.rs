//! The four rank weights of vectors over L^n and the distances they
//! induce. Under the framework (fixed field of theta equal to K) all four
//! agree; outside it they can genuinely differ, and the annihilator
//! weight refuses to answer rather than answer wrongly.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exact_fields::linalg::Mat;
use crate::exact_fields::{coords_in_basis, k_rank, CyclicAutomorphism, FieldElement};
use crate::skew_poly::SkewPoly;

/// Which formulation of the rank weight to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightKind {
    /// Degree of the annihilator polynomial of the entries (needs the
    /// framework).
    Annihilator,
    /// Rank over L of the s x n Moore matrix (theta^i(x_j)).
    MooreL,
    /// Number of K-linearly independent columns of the Moore matrix.
    MooreK,
    /// Rank over K of the m x n coordinate matrix in a K-basis.
    Basis,
}

/// A vector of L^n together with the automorphism and a designated
/// K-basis of L used by the basis weight.
#[derive(Clone, Debug)]
pub struct RankVector {
    theta: Arc<CyclicAutomorphism>,
    entries: Vec<FieldElement>,
    basis: Vec<FieldElement>,
}

impl RankVector {
    pub fn new(
        theta: Arc<CyclicAutomorphism>,
        entries: Vec<FieldElement>,
        basis: Vec<FieldElement>,
    ) -> Result<Self> {
        let top = theta.tower().top_layer();
        if basis.len() != theta.top_degree() {
            return Err(Error::InvalidParams(format!(
                "basis has {} elements, expected {}",
                basis.len(),
                theta.top_degree()
            )));
        }
        for x in entries.iter().chain(basis.iter()) {
            if x.layer() != top {
                return Err(Error::TowerMismatch);
            }
        }
        Ok(RankVector { theta, entries, basis })
    }

    /// Power-basis convenience constructor.
    pub fn in_power_basis(
        theta: Arc<CyclicAutomorphism>,
        entries: Vec<FieldElement>,
    ) -> Result<Self> {
        let basis = theta.tower().power_basis(theta.tower().top_layer());
        Self::new(theta, entries, basis)
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    pub fn weight(&self, kind: WeightKind) -> Result<usize> {
        weight(&self.theta, &self.entries, &self.basis, kind)
    }

    pub fn distance(&self, other: &RankVector, kind: WeightKind) -> Result<usize> {
        if !CyclicAutomorphism::same(&self.theta, &other.theta) {
            return Err(Error::ThetaMismatch);
        }
        if self.entries.len() != other.entries.len() {
            return Err(Error::InvalidParams("length mismatch".into()));
        }
        let tw = self.theta.tower();
        let diff: Vec<FieldElement> = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| tw.sub(a, b))
            .collect();
        weight(&self.theta, &diff, &self.basis, kind)
    }
}

/// The Moore matrix (theta^i(x_j)), i = 0..s-1, as rows.
pub fn moore_matrix(theta: &CyclicAutomorphism, x: &[FieldElement]) -> Mat {
    let s = theta.order();
    let mut rows = Vec::with_capacity(s);
    let mut cur: Vec<FieldElement> = x.to_vec();
    for i in 0..s {
        if i > 0 {
            cur = cur.iter().map(|v| theta.apply1(v)).collect();
        }
        rows.push(cur.clone());
    }
    Mat::from_rows(rows)
}

/// Rank weight of `x` under the requested formulation.
pub fn weight(
    theta: &Arc<CyclicAutomorphism>,
    x: &[FieldElement],
    basis: &[FieldElement],
    kind: WeightKind,
) -> Result<usize> {
    let tw = theta.tower();
    match kind {
        WeightKind::Basis => k_rank(tw, x, basis),
        WeightKind::MooreL => moore_matrix(theta, x).rank(tw),
        WeightKind::MooreK => {
            // each L-column of the Moore matrix flattens to s*m
            // K-coordinates; count K-independent columns
            let s = theta.order();
            let m = theta.top_degree();
            let moore = moore_matrix(theta, x);
            let cols: Vec<Vec<FieldElement>> = (0..x.len())
                .map(|j| {
                    let mut flat = Vec::with_capacity(s * m);
                    for i in 0..s {
                        flat.extend_from_slice(moore.at(i, j).coeffs());
                    }
                    flat
                })
                .collect();
            let top = tw.top_layer();
            Mat::from_columns(s * m, &cols, || tw.zero_at(top - 1)).rank(tw)
        }
        WeightKind::Annihilator => {
            if !theta.framework_holds() {
                return Err(Error::HdimViolation);
            }
            let ann = SkewPoly::annihilator(theta, x)?;
            Ok(ann.degree().as_usize().unwrap_or(0))
        }
    }
}

/// Expand an L^n vector into its m x n coordinate matrix over K in the
/// given basis (columns are coordinate vectors of the entries).
pub fn to_coordinate_matrix(
    theta: &CyclicAutomorphism,
    x: &[FieldElement],
    basis: &[FieldElement],
) -> Result<Mat> {
    let tw = theta.tower();
    let coords = coords_in_basis(tw, x, basis)?;
    let top = tw.top_layer();
    Ok(Mat::from_columns(basis.len(), &coords, || tw.zero_at(top - 1)))
}

/// Rebuild an L^n vector from an m x n coordinate matrix over K.
pub fn from_coordinate_matrix(
    theta: &CyclicAutomorphism,
    mat: &Mat,
    basis: &[FieldElement],
) -> Result<Vec<FieldElement>> {
    let tw = theta.tower();
    if mat.rows != basis.len() {
        return Err(Error::InvalidParams("coordinate matrix has wrong height".into()));
    }
    let mut out = Vec::with_capacity(mat.cols);
    for j in 0..mat.cols {
        let mut acc = tw.zero();
        for (i, b) in basis.iter().enumerate() {
            let c = mat.at(i, j);
            if c.is_zero() {
                continue;
            }
            let t = tw.scalar_mul(b, c);
            acc = tw.add(&acc, &t);
        }
        out.push(acc);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_fields::{extend_by_ints, FieldTower};
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

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

    fn f2_tower(m: usize) -> Arc<CyclicAutomorphism> {
        let mods: &[&[i64]] = &[&[1, 1, 0, 1], &[1, 1, 0, 0, 1], &[1, 0, 1, 0, 0, 1]];
        let tw = extend_by_ints(&FieldTower::prime_field(2).unwrap(), mods[m - 3]).unwrap();
        let img = tw.pow(&tw.generator(1), 2);
        CyclicAutomorphism::new(tw, img).unwrap()
    }

    fn witness(th: &Arc<CyclicAutomorphism>) -> RankVector {
        let tw = th.tower().clone();
        let alpha = tw.generator(2);
        RankVector::in_power_basis(
            th.clone(),
            vec![tw.one(), alpha.clone(), tw.pow(&alpha, 3), tw.pow(&alpha, 4)],
        )
        .unwrap()
    }

    #[test]
    fn kummer_theta1_weights_split() {
        let th1 = kummer_theta(1);
        let v = witness(&th1);
        assert_eq!(v.weight(WeightKind::MooreL).unwrap(), 2);
        assert_eq!(v.weight(WeightKind::Basis).unwrap(), 4);
        assert_eq!(v.weight(WeightKind::MooreK).unwrap(), 4);
        // annihilator weight refuses outside the framework
        assert!(matches!(
            v.weight(WeightKind::Annihilator),
            Err(Error::HdimViolation)
        ));
    }

    #[test]
    fn kummer_theta2_weights_agree_at_four() {
        let th2 = kummer_theta(2);
        let v = witness(&th2);
        for kind in [
            WeightKind::Annihilator,
            WeightKind::MooreL,
            WeightKind::MooreK,
            WeightKind::Basis,
        ] {
            assert_eq!(v.weight(kind).unwrap(), 4);
        }
    }

    #[test]
    fn zero_vector_has_zero_weight_everywhere() {
        let th = f2_tower(4);
        let tw = th.tower().clone();
        let v = RankVector::in_power_basis(th, vec![tw.zero(); 3]).unwrap();
        for kind in [
            WeightKind::Annihilator,
            WeightKind::MooreL,
            WeightKind::MooreK,
            WeightKind::Basis,
        ] {
            assert_eq!(v.weight(kind).unwrap(), 0);
        }
    }

    #[test]
    fn weights_agree_under_framework_and_chain_in_general() {
        let th = f2_tower(5);
        let tw = th.tower().clone();
        let mut rng = ChaCha12Rng::seed_from_u64(41);
        for _ in 0..100 {
            let x: Vec<_> = (0..4).map(|_| tw.random_element(&mut rng, 0)).collect();
            let v = RankVector::in_power_basis(th.clone(), x).unwrap();
            let wa = v.weight(WeightKind::Annihilator).unwrap();
            let wl = v.weight(WeightKind::MooreL).unwrap();
            let wk = v.weight(WeightKind::MooreK).unwrap();
            let wb = v.weight(WeightKind::Basis).unwrap();
            assert_eq!(wa, wl);
            assert_eq!(wk, wb);
            assert!(wl <= wk);
            assert_eq!(wa, wb, "framework holds, all four weights agree");
        }
        // outside the framework the chain w_a = w_L <= w_K = w_B still holds
        let th1 = kummer_theta(1);
        let tw = th1.tower().clone();
        for _ in 0..25 {
            let x: Vec<_> = (0..3).map(|_| tw.random_element(&mut rng, 2)).collect();
            let v = RankVector::in_power_basis(th1.clone(), x).unwrap();
            let wl = v.weight(WeightKind::MooreL).unwrap();
            let wk = v.weight(WeightKind::MooreK).unwrap();
            let wb = v.weight(WeightKind::Basis).unwrap();
            assert!(wl <= wk);
            assert_eq!(wk, wb);
        }
    }

    #[test]
    fn distances_are_metrics_on_random_samples() {
        let th = f2_tower(4);
        let tw = th.tower().clone();
        let mut rng = ChaCha12Rng::seed_from_u64(43);
        let rand_vec = |rng: &mut ChaCha12Rng| {
            RankVector::in_power_basis(
                th.clone(),
                (0..4).map(|_| tw.random_element(rng, 0)).collect(),
            )
            .unwrap()
        };
        for _ in 0..200 {
            let x = rand_vec(&mut rng);
            let y = rand_vec(&mut rng);
            let z = rand_vec(&mut rng);
            let k = WeightKind::MooreL;
            assert_eq!(x.distance(&x, k).unwrap(), 0);
            assert_eq!(x.distance(&y, k).unwrap(), y.distance(&x, k).unwrap());
            assert!(x.distance(&z, k).unwrap() <= x.distance(&y, k).unwrap() + y.distance(&z, k).unwrap());
        }
    }

    #[test]
    fn weight_invariant_under_permutation_and_k_scaling() {
        let th = f2_tower(4);
        let tw = th.tower().clone();
        let alpha = tw.generator(1);
        let x = vec![tw.one(), alpha.clone(), tw.pow(&alpha, 2)];
        let v = RankVector::in_power_basis(th.clone(), x.clone()).unwrap();
        let w0 = v.weight(WeightKind::Basis).unwrap();
        let mut perm = x.clone();
        perm.swap(0, 2);
        let vp = RankVector::in_power_basis(th.clone(), perm).unwrap();
        assert_eq!(vp.weight(WeightKind::Basis).unwrap(), w0);
    }

    #[test]
    fn coordinate_matrix_round_trips() {
        let th = f2_tower(5);
        let tw = th.tower().clone();
        let basis = tw.power_basis(1);
        let mut rng = ChaCha12Rng::seed_from_u64(47);
        let x: Vec<_> = (0..4).map(|_| tw.random_element(&mut rng, 0)).collect();
        let mat = to_coordinate_matrix(&th, &x, &basis).unwrap();
        let back = from_coordinate_matrix(&th, &mat, &basis).unwrap();
        assert_eq!(back, x);
    }
}
