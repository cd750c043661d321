//! Integral Gabidulin codes over number rings: coefficient-size
//! measurement, inert-prime discovery, reduction of a code instance to a
//! classical Gabidulin code over the finite residue field, decoding
//! there, and lifting the message back from a known coefficient alphabet.
//!
//! Only single-layer monogenic towers over Q are reduced: inertness of a
//! rational prime q is then exactly irreducibility of the defining
//! polynomial modulo q, and the residue field is F_q of full degree.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact_fields::{
    log2_bigint, CyclicAutomorphism, FieldElement, FieldTower, Scalar,
};
use crate::gabidulin_codec::{
    decode_line_erasures, decode_network_erasures_vec, GabidulinCode, LinePattern,
    NetworkPattern, Received, WbVariant,
};
use crate::skew_poly::SkewPoly;

/// Size of an integral element: log2 of the largest absolute coordinate
/// in the power basis. Zero has size 0 by convention.
pub fn element_size_bits(x: &FieldElement) -> Result<f64> {
    let mut best = 0f64;
    collect_size(x, &mut best)?;
    Ok(best)
}

fn collect_size(x: &FieldElement, best: &mut f64) -> Result<()> {
    match x {
        FieldElement::Base(Scalar::Q(r)) => {
            if !r.is_integer() {
                return Err(Error::NotIntegral);
            }
            if !r.is_zero() {
                *best = best.max(log2_bigint(r.numer()));
            }
            Ok(())
        }
        FieldElement::Base(Scalar::Fp(_)) => Err(Error::NotIntegral),
        FieldElement::Ext(v) => {
            for c in v {
                collect_size(c, best)?;
            }
            Ok(())
        }
    }
}

/// Size of a vector or polynomial: the maximum over its coefficients.
pub fn size_bits<'a, I: IntoIterator<Item = &'a FieldElement>>(xs: I) -> Result<f64> {
    let mut best = 0f64;
    for x in xs {
        collect_size(x, &mut best)?;
    }
    Ok(best)
}

/// Smallest prime q >= min such that the tower's defining polynomial is
/// irreducible mod q, searched up to `cap`.
pub fn find_inert_prime_capped(tower: &FieldTower, min: u64, cap: u64) -> Result<u64> {
    check_monogenic_rational(tower)?;
    let mut q = min.max(2);
    while q <= cap {
        if crate::exact_fields::is_small_prime(q) && reduce_tower(tower, q).is_ok() {
            return Ok(q);
        }
        q += 1;
    }
    Err(Error::NoInertPrime(cap))
}

/// As [`find_inert_prime_capped`] with the default search cap.
pub fn find_inert_prime(tower: &FieldTower, min: u64) -> Result<u64> {
    find_inert_prime_capped(tower, min, 10_000)
}

fn check_monogenic_rational(tower: &FieldTower) -> Result<()> {
    if !tower.is_rational_base() || tower.top_layer() != 1 {
        return Err(Error::InvalidParams(
            "reduction supports single-layer towers over Q only".into(),
        ));
    }
    Ok(())
}

/// Reduce the defining polynomial mod q and build the residue tower;
/// fails with `NotInert` when the reduction is reducible.
fn reduce_tower(tower: &FieldTower, q: u64) -> Result<Arc<FieldTower>> {
    check_monogenic_rational(tower)?;
    let fq = FieldTower::prime_field(q)?;
    let modulus: Vec<FieldElement> = tower.layers()[0]
        .modulus
        .iter()
        .map(|c| reduce_scalar_element(&fq, c, q))
        .collect::<Result<_>>()?;
    fq.extend(modulus).map_err(|e| match e {
        Error::ReducibleModulus => Error::NotInert(q),
        other => other,
    })
}

fn reduce_scalar_element(_fq: &FieldTower, x: &FieldElement, q: u64) -> Result<FieldElement> {
    match x {
        FieldElement::Base(Scalar::Q(r)) => {
            if !r.is_integer() {
                return Err(Error::NotIntegral);
            }
            let m = BigInt::from(q);
            let mut rem = r.numer() % &m;
            if rem.is_negative() {
                rem += &m;
            }
            let digits = rem.to_u64_digits().1;
            Ok(FieldElement::Base(Scalar::Fp(
                digits.first().copied().unwrap_or(0),
            )))
        }
        _ => Err(Error::NotIntegral),
    }
}

/// Reduction of one inert prime: the residue tower F_q[Y]/(T mod q)
/// together with the automorphism induced by theta.
#[derive(Clone, Debug)]
pub struct ResidueContext {
    source: Arc<FieldTower>,
    theta: Arc<CyclicAutomorphism>,
    q: u64,
    residue: Arc<FieldTower>,
    theta_bar: Arc<CyclicAutomorphism>,
}

impl ResidueContext {
    /// Build the context: q must be inert for the source tower and the
    /// image of the generator under theta must be integral. The induced
    /// map theta_bar is a valid automorphism of the residue field because
    /// its generator image reduces to a root of the reduced modulus.
    pub fn new(theta: &Arc<CyclicAutomorphism>, q: u64) -> Result<Self> {
        let source = theta.tower().clone();
        let residue = reduce_tower(&source, q)?;
        let theta_bar_image = reduce_element_impl(&residue, theta.generator_image(), q)?;
        let theta_bar = CyclicAutomorphism::new(residue.clone(), theta_bar_image)?;
        Ok(ResidueContext {
            source,
            theta: theta.clone(),
            q,
            residue,
            theta_bar,
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn source(&self) -> &Arc<FieldTower> {
        &self.source
    }

    pub fn residue_tower(&self) -> &Arc<FieldTower> {
        &self.residue
    }

    pub fn theta_bar(&self) -> &Arc<CyclicAutomorphism> {
        &self.theta_bar
    }

    pub fn source_theta(&self) -> &Arc<CyclicAutomorphism> {
        &self.theta
    }

    /// Coordinate-wise reduction of an integral element.
    pub fn reduce_element(&self, x: &FieldElement) -> Result<FieldElement> {
        reduce_element_impl(&self.residue, x, self.q)
    }

    pub fn reduce_vector(&self, xs: &[FieldElement]) -> Result<Vec<FieldElement>> {
        xs.iter().map(|x| self.reduce_element(x)).collect()
    }

    /// Reduce a K-scalar (a plain rational integer here).
    pub fn reduce_scalar(&self, x: &FieldElement) -> Result<FieldElement> {
        reduce_scalar_element(&self.residue, x, self.q)
    }

    pub fn reduce_scalar_matrix(&self, m: &[Vec<FieldElement>]) -> Result<Vec<Vec<FieldElement>>> {
        m.iter()
            .map(|row| row.iter().map(|x| self.reduce_scalar(x)).collect())
            .collect()
    }

    pub fn reduce_poly(&self, f: &SkewPoly) -> Result<SkewPoly> {
        let coeffs = self.reduce_vector(f.coeffs())?;
        Ok(SkewPoly::from_coeffs(self.theta_bar.clone(), coeffs))
    }

    /// Reduce a whole code: support mod q with the induced automorphism.
    /// Errors when the reduced support loses K-independence (then q does
    /// not preserve the code).
    pub fn reduce_code(&self, code: &GabidulinCode) -> Result<GabidulinCode> {
        let support = self.reduce_vector(code.support())?;
        GabidulinCode::new(self.theta_bar.clone(), support, code.k())
    }

    /// Lift a residue polynomial back to the source tower, coordinate by
    /// coordinate through the alphabet.
    pub fn lift_poly(&self, f: &SkewPoly, alphabet: &LiftAlphabet) -> Result<SkewPoly> {
        let coeffs: Vec<FieldElement> = f
            .coeffs()
            .iter()
            .map(|c| self.lift_element(c, alphabet))
            .collect::<Result<_>>()?;
        Ok(SkewPoly::from_coeffs(self.theta.clone(), coeffs))
    }

    pub fn lift_element(&self, x: &FieldElement, alphabet: &LiftAlphabet) -> Result<FieldElement> {
        let coords = match x {
            FieldElement::Ext(v) => v,
            _ => return Err(Error::TowerMismatch),
        };
        let lifted: Vec<FieldElement> = coords
            .iter()
            .map(|c| {
                let FieldElement::Base(Scalar::Fp(r)) = c else {
                    return Err(Error::TowerMismatch);
                };
                let value = alphabet.lift(*r, self.q)?;
                Ok(FieldElement::Base(Scalar::Q(BigRational::from_integer(value))))
            })
            .collect::<Result<_>>()?;
        self.source.from_coeffs(1, lifted)
    }
}

fn reduce_element_impl(residue: &Arc<FieldTower>, x: &FieldElement, q: u64) -> Result<FieldElement> {
    match x {
        FieldElement::Ext(v) => {
            let coeffs: Vec<FieldElement> = v
                .iter()
                .map(|c| reduce_scalar_element(residue, c, q))
                .collect::<Result<_>>()?;
            residue.from_coeffs(1, coeffs)
        }
        _ => Err(Error::TowerMismatch),
    }
}

/// The admissible integer values of message coordinates, used to lift a
/// residue back to Q. Members must be distinct modulo q.
#[derive(Clone, Debug)]
pub struct LiftAlphabet {
    values: Vec<BigInt>,
    centered: bool,
}

impl LiftAlphabet {
    pub fn new(values: Vec<BigInt>, q: u64) -> Result<Self> {
        let m = BigInt::from(q);
        for (i, a) in values.iter().enumerate() {
            for b in &values[..i] {
                if ((a - b) % &m).is_zero() {
                    return Err(Error::AmbiguousAlphabet);
                }
            }
        }
        Ok(LiftAlphabet { values, centered: false })
    }

    pub fn from_ints(values: &[i64], q: u64) -> Result<Self> {
        Self::new(values.iter().map(|&v| BigInt::from(v)).collect(), q)
    }

    /// Centered representatives in (-q/2, q/2].
    pub fn centered() -> Self {
        LiftAlphabet { values: Vec::new(), centered: true }
    }

    fn lift(&self, residue: u64, q: u64) -> Result<BigInt> {
        if self.centered {
            let r = BigInt::from(residue);
            let m = BigInt::from(q);
            return Ok(if &r * 2 > m { r - m } else { r });
        }
        let m = BigInt::from(q);
        let r = BigInt::from(residue);
        self.values
            .iter()
            .find(|v| {
                let mut d = (*v - &r) % &m;
                if d.is_negative() {
                    d += &m;
                }
                d.is_zero()
            })
            .cloned()
            .ok_or(Error::LiftMiss)
    }
}

/// The full residue pipeline: reduce the code, the received data and the
/// erasure side information modulo q, decode over the residue field, and
/// lift each message coordinate through the alphabet.
pub fn residue_decode_and_lift(
    code: &GabidulinCode,
    received: &Received,
    q: u64,
    alphabet: &LiftAlphabet,
    variant: WbVariant,
) -> Result<SkewPoly> {
    let ctx = ResidueContext::new(code.theta(), q)?;
    let reduced_code = ctx.reduce_code(code)?;
    let f_bar = match received {
        Received::Plain(y) => {
            let y_bar = ctx.reduce_vector(y)?;
            reduced_code.decode_wb(&y_bar, variant)?.f
        }
        Received::Line(pattern) => {
            let masked: Vec<Vec<Option<FieldElement>>> = pattern
                .masked
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|c| c.as_ref().map(|x| ctx.reduce_scalar(x)).transpose())
                        .collect::<Result<_>>()
                })
                .collect::<Result<_>>()?;
            let reduced_pattern = LinePattern {
                masked,
                rows: pattern.rows.clone(),
                cols: pattern.cols.clone(),
            };
            let tw = ctx.residue_tower();
            let basis = tw.power_basis(1);
            decode_line_erasures(&reduced_code, &basis, &reduced_pattern, variant)?
        }
        Received::Network { word, pattern } => {
            let y_bar = ctx.reduce_vector(word)?;
            let reduced = NetworkPattern {
                a_r: ctx.reduce_scalar_matrix(&pattern.a_r)?,
                b_c: ctx.reduce_scalar_matrix(&pattern.b_c)?,
            };
            decode_network_erasures_vec(&reduced_code, &y_bar, &reduced, variant)?
        }
    };
    ctx.lift_poly(&f_bar, alphabet)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_fields::cyclotomic_tower;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn phi7_theta3() -> Arc<CyclicAutomorphism> {
        let tw = cyclotomic_tower(7).unwrap();
        let img = tw.pow(&tw.generator(1), 3);
        CyclicAutomorphism::new(tw, img).unwrap()
    }

    #[test]
    fn sizes_of_small_elements() {
        let tw = cyclotomic_tower(7).unwrap();
        // coordinates in {-1,0,1} have size 0
        let x = tw.sub(&tw.generator(1), &tw.one());
        assert_eq!(element_size_bits(&x).unwrap(), 0.0);
        // 5 + 3a has size log2(5)
        let y = tw.add(&tw.int(5), &tw.mul(&tw.int(3), &tw.generator(1)));
        assert!((element_size_bits(&y).unwrap() - 5f64.log2()).abs() < 1e-12);
        // non-integral coordinates refuse
        let half = tw
            .rational_at(1, BigRational::new(BigInt::from(1), BigInt::from(2)))
            .unwrap();
        assert!(matches!(element_size_bits(&half), Err(Error::NotIntegral)));
    }

    #[test]
    fn inert_primes_for_small_cyclotomic_fields() {
        let phi7 = cyclotomic_tower(7).unwrap();
        assert_eq!(find_inert_prime(&phi7, 2).unwrap(), 3);
        assert_eq!(find_inert_prime(&phi7, 4).unwrap(), 5);
        let phi11 = cyclotomic_tower(11).unwrap();
        assert_eq!(find_inert_prime(&phi11, 2).unwrap(), 2);
        // 7 ramifies in the 7th cyclotomic field
        assert!(matches!(
            ResidueContext::new(&phi7_theta3(), 7),
            Err(Error::NotInert(7))
        ));
    }

    #[test]
    fn reduction_is_a_ring_morphism_compatible_with_theta() {
        let theta = phi7_theta3();
        let ctx = ResidueContext::new(&theta, 3).unwrap();
        let tw = theta.tower().clone();
        let rt = ctx.residue_tower().clone();
        let mut rng = ChaCha12Rng::seed_from_u64(61);
        for _ in 0..100 {
            let a = tw.random_element(&mut rng, 9);
            let b = tw.random_element(&mut rng, 9);
            let ra = ctx.reduce_element(&a).unwrap();
            let rb = ctx.reduce_element(&b).unwrap();
            assert_eq!(ctx.reduce_element(&tw.add(&a, &b)).unwrap(), rt.add(&ra, &rb));
            assert_eq!(ctx.reduce_element(&tw.mul(&a, &b)).unwrap(), rt.mul(&ra, &rb));
            assert_eq!(
                ctx.reduce_element(&theta.apply1(&a)).unwrap(),
                ctx.theta_bar().apply1(&ra)
            );
        }
    }

    #[test]
    fn example_reduction_of_a_received_entry() {
        // a^5 + a^3 - a^2 + 2a + 2 reduces mod 3 to a^5 + a^3 + 2a^2 + 2a + 2
        let theta = phi7_theta3();
        let ctx = ResidueContext::new(&theta, 3).unwrap();
        let tw = theta.tower().clone();
        let coords = [2i64, 2, -1, 1, 0, 1];
        let x = tw
            .from_coeffs(1, coords.iter().map(|&c| tw.int_at(0, c)).collect())
            .unwrap();
        let r = ctx.reduce_element(&x).unwrap();
        let rt = ctx.residue_tower();
        let expect = rt
            .from_coeffs(1, [2i64, 2, 2, 1, 0, 1].iter().map(|&c| rt.int_at(0, c)).collect())
            .unwrap();
        assert_eq!(r, expect);
    }

    #[test]
    fn division_free_size_growth_doubles_per_round() {
        // m = 10 cyclotomic field, [8,4] code, size-1 message, size-2
        // rank-2 error: coefficient sizes roughly double each of the four
        // rounds, so final/init lands near 191/12 from the reference
        // instance; absolute sizes are instance-dependent.
        use crate::gabidulin_codec::{GabidulinCode, WbVariant};
        use rand::SeedableRng;
        let tw = cyclotomic_tower(11).unwrap();
        let gen = tw.generator(1);
        let theta = CyclicAutomorphism::new(tw.clone(), tw.pow(&gen, 2)).unwrap();
        let g: Vec<_> = (0..8).map(|i| tw.pow(&gen, i as u64)).collect();
        let code = GabidulinCode::new(theta.clone(), g, 4).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        let f = crate::instances::random_message(&theta, 4, &mut rng, 2);
        let c = code.encode(&f).unwrap();
        let e = crate::instances::random_error_of_rank(&theta, 8, 2, &mut rng, 4).unwrap();
        let y: Vec<_> = c.iter().zip(&e).map(|(a, b)| tw.add(a, b)).collect();
        let (res, stats) = code
            .decode_wb_instrumented(&y, WbVariant::DivisionFree, false)
            .unwrap();
        assert_eq!(res.f, f);
        let init = stats.init_size_bits.unwrap();
        let last = stats.rounds.last().unwrap().max_size_bits.unwrap();
        let reference_ratio = 191.0 / 12.0;
        let ratio = last / init;
        assert!(
            (ratio - reference_ratio).abs() <= 0.15 * reference_ratio,
            "growth ratio {ratio:.1} not within 15% of {reference_ratio:.1}"
        );
        assert!((6.0..=14.0).contains(&init), "init size {init:.1} out of range");
        assert!((100.0..=220.0).contains(&last), "final size {last:.1} out of range");
    }

    #[test]
    fn alphabet_collisions_are_rejected() {
        assert!(LiftAlphabet::from_ints(&[0, 1], 3).is_ok());
        assert!(matches!(
            LiftAlphabet::from_ints(&[0, 1, 2, 3], 3),
            Err(Error::AmbiguousAlphabet)
        ));
        let alpha = LiftAlphabet::from_ints(&[0, 1], 3).unwrap();
        assert_eq!(alpha.lift(1, 3).unwrap(), BigInt::from(1));
        assert!(matches!(alpha.lift(2, 3), Err(Error::LiftMiss)));
        let centered = LiftAlphabet::centered();
        assert_eq!(centered.lift(2, 3).unwrap(), BigInt::from(-1));
        assert_eq!(centered.lift(1, 3).unwrap(), BigInt::from(1));
    }
}
