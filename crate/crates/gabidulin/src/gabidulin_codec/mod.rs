//! Generalized Gabidulin codes: evaluation codes of skew polynomials of
//! bounded degree on a K-linearly independent support. Provides encoding,
//! the dual support, a Gaussian-elimination decoder, the Welch-Berlekamp
//! style reconstruction with its variants, two erasure decoders, and
//! brute-force oracles used by the test suite.

mod erasure;
mod wb;

pub use erasure::{term_rank_cover, LinePattern, NetworkPattern};
pub use wb::{PhaseCounters, WbStats, WbVariant};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exact_fields::linalg::Mat;
use crate::exact_fields::{k_rank, CyclicAutomorphism, FieldElement};
use crate::rank_metric::{weight, WeightKind};
use crate::skew_poly::{Degree, SkewPoly};

/// Everything a decoder call needs to know about what was received.
#[derive(Clone, Debug)]
pub enum Received {
    /// Plain word in L^n, errors only.
    Plain(Vec<FieldElement>),
    /// Line-erasure model: masked coordinate matrix plus a cover.
    Line(LinePattern),
    /// Network-coding model: full word plus the known side matrices.
    Network {
        word: Vec<FieldElement>,
        pattern: NetworkPattern,
    },
}

/// A generalized Gabidulin code Gab_{theta,k}(g).
#[derive(Clone, Debug)]
pub struct GabidulinCode {
    theta: Arc<CyclicAutomorphism>,
    support: Vec<FieldElement>,
    k: usize,
}

/// Successful decode: message polynomial, error vector, and the codeword.
#[derive(Clone, Debug)]
pub struct DecodeResult {
    pub f: SkewPoly,
    pub e: Vec<FieldElement>,
    pub codeword: Vec<FieldElement>,
}

impl GabidulinCode {
    /// Build a code after checking the framework (fixed field of theta is
    /// K), the independence of the support, and k <= n <= m. The case
    /// k = n is accepted; the erasure pipeline relies on it.
    pub fn new(
        theta: Arc<CyclicAutomorphism>,
        support: Vec<FieldElement>,
        k: usize,
    ) -> Result<Self> {
        let n = support.len();
        let m = theta.top_degree();
        if k < 1 || k > n {
            return Err(Error::InvalidParams(format!("need 1 <= k <= n, got k={k}, n={n}")));
        }
        if n > m {
            return Err(Error::InvalidParams(format!("need n <= m, got n={n}, m={m}")));
        }
        if !theta.framework_holds() {
            return Err(Error::HdimViolation);
        }
        let tw = theta.tower();
        let top = tw.top_layer();
        for g in &support {
            if g.layer() != top {
                return Err(Error::TowerMismatch);
            }
        }
        let basis = tw.power_basis(top);
        if k_rank(tw, &support, &basis)? != n {
            return Err(Error::DependentSupport);
        }
        Ok(GabidulinCode { theta, support, k })
    }

    pub fn theta(&self) -> &Arc<CyclicAutomorphism> {
        &self.theta
    }

    pub fn support(&self) -> &[FieldElement] {
        &self.support
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.support.len()
    }

    pub fn m(&self) -> usize {
        self.theta.top_degree()
    }

    /// Designed minimum distance n - k + 1.
    pub fn min_distance(&self) -> usize {
        self.n() - self.k + 1
    }

    /// Unique-decoding radius floor((n-k)/2).
    pub fn t_max(&self) -> usize {
        (self.n() - self.k) / 2
    }

    /// Evaluate a message polynomial of degree < k on the support.
    pub fn encode(&self, f: &SkewPoly) -> Result<Vec<FieldElement>> {
        if !CyclicAutomorphism::same(f.theta(), &self.theta) {
            return Err(Error::ThetaMismatch);
        }
        if f.degree() >= Degree::Of(self.k) {
            return Err(Error::InvalidParams(format!(
                "message degree {} exceeds k-1 = {}",
                f.degree(),
                self.k - 1
            )));
        }
        Ok(f.eval_vector(&self.support))
    }

    /// Generator matrix: k rows theta^i(g_j).
    pub fn generator_matrix(&self) -> Mat {
        self.moore_rows(&self.support, self.k)
    }

    /// Parity-check matrix: n-k rows theta^i(h_j) over the dual support.
    pub fn parity_check_matrix(&self) -> Result<Mat> {
        let h = self.dual_support()?;
        Ok(self.moore_rows(&h, self.n() - self.k))
    }

    fn moore_rows(&self, base: &[FieldElement], rows: usize) -> Mat {
        let mut out = Vec::with_capacity(rows);
        let mut cur = base.to_vec();
        for i in 0..rows {
            if i > 0 {
                cur = cur.iter().map(|x| self.theta.apply1(x)).collect();
            }
            out.push(cur.clone());
        }
        Mat::from_rows(out)
    }

    /// The dual support h: the kernel direction of the Moore system of
    /// g~_i = theta^{-(d-2)}(g_i), unique up to one L-scalar. Its n-k row
    /// Moore matrix annihilates the generator matrix.
    pub fn dual_support(&self) -> Result<Vec<FieldElement>> {
        let n = self.n();
        if self.k >= n {
            return Err(Error::InvalidParams("dual support needs k < n".into()));
        }
        let d = self.min_distance();
        let gt: Vec<FieldElement> = self
            .support
            .iter()
            .map(|g| self.theta.apply(g, -((d as i64) - 2)))
            .collect();
        let sys = self.moore_rows(&gt, n - 1);
        let tw = self.theta.tower();
        let h = sys
            .kernel_vector(tw)?
            .ok_or_else(|| Error::Internal("dual kernel is trivial".into()))?;
        Ok(h)
    }

    /// Decode by solving the linear reconstruction system with Gaussian
    /// elimination, then one left Euclidean division.
    pub fn decode_gauss(&self, y: &[FieldElement]) -> Result<DecodeResult> {
        let (n_poly, w_poly) = self.reconstruct_gauss(y)?;
        self.finish_decode(y, &n_poly, &w_poly)
    }

    /// Solve LR(n, k, t_max) by Gaussian elimination on the n x (n+1)
    /// kernel system; the kernel vector choice is deterministic.
    pub fn reconstruct_gauss(&self, y: &[FieldElement]) -> Result<(SkewPoly, SkewPoly)> {
        let n = self.n();
        if y.len() != n {
            return Err(Error::InvalidParams("received word has wrong length".into()));
        }
        let k = self.k;
        let t = self.t_max();
        // number of N coefficients: k + s with s = t for even n-k, t+1 odd
        let s = if (n - k) % 2 == 0 { t } else { t + 1 };
        let tw = self.theta.tower();
        let mut cols: Vec<Vec<FieldElement>> = Vec::with_capacity(k + s + t + 1);
        let mut gp = self.support.clone();
        for j in 0..k + s {
            if j > 0 {
                gp = gp.iter().map(|x| self.theta.apply1(x)).collect();
            }
            cols.push(gp.clone());
        }
        let mut yp = y.to_vec();
        for j in 0..=t {
            if j > 0 {
                yp = yp.iter().map(|x| self.theta.apply1(x)).collect();
            }
            cols.push(yp.clone());
        }
        let sys = Mat::from_columns(n, &cols, || tw.zero());
        let z = sys
            .kernel_vector(tw)?
            .ok_or_else(|| Error::Internal("reconstruction kernel is trivial".into()))?;
        let n_poly = SkewPoly::from_coeffs(self.theta.clone(), z[..k + s].to_vec());
        let w_poly = SkewPoly::from_coeffs(
            self.theta.clone(),
            z[k + s..].iter().map(|c| tw.neg(c)).collect(),
        );
        if w_poly.is_zero() {
            // impossible for an n x (n+1) system: W = 0 would force N to
            // vanish on n independent points with deg N < n
            return Err(Error::Internal("reconstruction produced W = 0".into()));
        }
        Ok((n_poly, w_poly))
    }

    /// Decode via the Welch-Berlekamp style reconstruction.
    pub fn decode_wb(&self, y: &[FieldElement], variant: WbVariant) -> Result<DecodeResult> {
        let (res, _) = self.decode_wb_instrumented(y, variant, false)?;
        Ok(res)
    }

    /// As [`decode_wb`](Self::decode_wb) but returns per-phase operation
    /// counts, round-by-round degrees and (over Q) coefficient sizes.
    /// `checks` additionally verifies the in-loop degree discipline and the
    /// reconstruction contract, outside the counted region.
    pub fn decode_wb_instrumented(
        &self,
        y: &[FieldElement],
        variant: WbVariant,
        checks: bool,
    ) -> Result<(DecodeResult, WbStats)> {
        let mut run = wb::reconstruct(self, y, variant, checks, false)?;
        let (res, div_counter) = self.finish_decode_counted(y, &run.n_poly, &run.w_poly)?;
        run.stats.counters.division = div_counter;
        Ok((res, run.stats))
    }

    /// Solve LR(n, k, t_max) with the Welch-Berlekamp style algorithm.
    pub fn reconstruct_wb(
        &self,
        y: &[FieldElement],
        variant: WbVariant,
    ) -> Result<(SkewPoly, SkewPoly)> {
        let run = wb::reconstruct(self, y, variant, false, false)?;
        Ok((run.n_poly, run.w_poly))
    }

    /// Reconstruction that also records a round-by-round textual trace.
    pub fn reconstruct_wb_traced(
        &self,
        y: &[FieldElement],
        variant: WbVariant,
    ) -> Result<(SkewPoly, SkewPoly, String)> {
        let run = wb::reconstruct(self, y, variant, false, true)?;
        Ok((run.n_poly, run.w_poly, run.stats.trace.unwrap_or_default()))
    }

    fn finish_decode(
        &self,
        y: &[FieldElement],
        n_poly: &SkewPoly,
        w_poly: &SkewPoly,
    ) -> Result<DecodeResult> {
        Ok(self.finish_decode_counted(y, n_poly, w_poly)?.0)
    }

    fn finish_decode_counted(
        &self,
        y: &[FieldElement],
        n_poly: &SkewPoly,
        w_poly: &SkewPoly,
    ) -> Result<(DecodeResult, crate::exact_fields::OpCounter)> {
        let mut counter = crate::exact_fields::OpCounter::default();
        let (q, r) = {
            let mut ctx = crate::skew_poly::counted::Ctx::new(&self.theta, &mut counter);
            crate::skew_poly::counted::left_divide(&mut ctx, n_poly.coeffs(), w_poly.coeffs())?
        };
        if !r.is_empty() {
            return Err(Error::DecodeFail);
        }
        let f = SkewPoly::from_coeffs(self.theta.clone(), q);
        if f.degree() >= Degree::Of(self.k) {
            return Err(Error::DecodeFail);
        }
        let tw = self.theta.tower();
        let codeword = f.eval_vector(&self.support);
        let e: Vec<FieldElement> = y
            .iter()
            .zip(&codeword)
            .map(|(yi, ci)| tw.sub(yi, ci))
            .collect();
        debug_assert!(
            weight(&self.theta, &e, &tw.power_basis(tw.top_layer()), WeightKind::MooreL)
                .unwrap_or(usize::MAX)
                <= self.t_max()
        );
        Ok((DecodeResult { f, e, codeword }, counter))
    }

    /// Decode a received word in any of the supported models.
    pub fn decode_received(&self, received: &Received, variant: WbVariant) -> Result<SkewPoly> {
        match received {
            Received::Plain(y) => Ok(self.decode_wb(y, variant)?.f),
            Received::Line(pattern) => {
                let tw = self.theta.tower();
                let basis = tw.power_basis(tw.top_layer());
                erasure::decode_line_erasures(self, &basis, pattern, variant)
            }
            Received::Network { word, pattern } => {
                erasure::decode_network_erasures_vec(self, word, pattern, variant)
            }
        }
    }

    /// Rank weight of a vector, computed as the K-rank of its coordinate
    /// matrix. Codes only exist under the framework, where this equals
    /// the Moore-matrix weight; it is the cheapest form for the
    /// exhaustive oracles (pure scalar elimination, no theta machinery).
    fn oracle_weight(&self, x: &[FieldElement]) -> Result<usize> {
        let tw = self.theta.tower();
        let top = tw.top_layer();
        let coords: Vec<Vec<FieldElement>> = x.iter().map(|v| v.coeffs().to_vec()).collect();
        let m = tw.layer_degree(top);
        Mat::from_columns(m, &coords, || tw.zero_at(top - 1)).rank(tw)
    }

    /// Test oracle: every pair (f, e) with deg f < k and rank(y - f{g})
    /// at most t, found by exhausting all |L|^k message polynomials.
    pub fn brute_force_nlr(
        &self,
        y: &[FieldElement],
        t: usize,
    ) -> Result<Vec<(SkewPoly, Vec<FieldElement>)>> {
        let tw = self.theta.tower();
        let card = tw
            .cardinality()
            .ok_or_else(|| Error::InvalidParams("brute force needs a finite tower".into()))?;
        let total = card.checked_pow(self.k as u32).ok_or(Error::EnumerationGuard(u128::MAX))?;
        if total > 1 << 20 {
            return Err(Error::EnumerationGuard(total));
        }
        let elements = tw.enumerate_elements()?;
        let rows = self.moore_rows(&self.support, self.k);
        let mut out = Vec::new();
        let n = self.n();
        let zero_word = vec![tw.zero(); n];
        let mut coeffs = vec![0usize; self.k];
        let mut stack = vec![zero_word; self.k + 1];
        let mut level = 0usize;
        // odometer over coefficient indices with partial codeword sums
        loop {
            while level < self.k {
                let c = &elements[coeffs[level]];
                let prev = stack[level].clone();
                stack[level + 1] = if c.is_zero() {
                    prev
                } else {
                    (0..n)
                        .map(|j| tw.add(&prev[j], &tw.mul(c, rows.at(level, j))))
                        .collect()
                };
                level += 1;
            }
            let codeword = &stack[self.k];
            let e: Vec<FieldElement> =
                y.iter().zip(codeword).map(|(a, b)| tw.sub(a, b)).collect();
            if self.oracle_weight(&e)? <= t {
                let f = SkewPoly::from_coeffs(
                    self.theta.clone(),
                    coeffs.iter().map(|&i| elements[i].clone()).collect(),
                );
                out.push((f, e));
            }
            // advance odometer
            loop {
                if level == 0 {
                    return Ok(out);
                }
                level -= 1;
                coeffs[level] += 1;
                if coeffs[level] < elements.len() {
                    break;
                }
                coeffs[level] = 0;
            }
        }
    }

    /// Test oracle: exact minimum rank distance by enumerating all
    /// nonzero codewords.
    pub fn min_distance_exhaustive(&self) -> Result<usize> {
        let tw = self.theta.tower();
        let card = tw
            .cardinality()
            .ok_or_else(|| Error::InvalidParams("exhaustive search needs a finite tower".into()))?;
        let total = card.checked_pow(self.k as u32).ok_or(Error::EnumerationGuard(u128::MAX))?;
        if total > 1 << 20 {
            return Err(Error::EnumerationGuard(total));
        }
        let elements = tw.enumerate_elements()?;
        let rows = self.moore_rows(&self.support, self.k);
        let n = self.n();
        let zero_word = vec![tw.zero(); n];
        let mut best = usize::MAX;
        let mut coeffs = vec![0usize; self.k];
        let mut stack = vec![zero_word; self.k + 1];
        let mut level = 0usize;
        loop {
            while level < self.k {
                let c = &elements[coeffs[level]];
                let prev = stack[level].clone();
                stack[level + 1] = if c.is_zero() {
                    prev
                } else {
                    (0..n)
                        .map(|j| tw.add(&prev[j], &tw.mul(c, rows.at(level, j))))
                        .collect()
                };
                level += 1;
            }
            if coeffs.iter().any(|&i| !elements[i].is_zero()) {
                best = best.min(self.oracle_weight(&stack[self.k])?);
            }
            loop {
                if level == 0 {
                    return Ok(best);
                }
                level -= 1;
                coeffs[level] += 1;
                if coeffs[level] < elements.len() {
                    break;
                }
                coeffs[level] = 0;
            }
        }
    }
}

pub use erasure::{
    decode_line_erasures, decode_line_erasures_traced, decode_network_erasures,
    decode_network_erasures_traced, decode_network_erasures_vec,
};
