//! Welch-Berlekamp style reconstruction: two candidate pairs (N0,W0),
//! (N1,W1) satisfy a growing set of interpolation conditions
//! W{y_i} = N{g_i}, with updates that raise the degree of one pair by one
//! every two rounds. The returned pair solves the linear reconstruction
//! problem at radius floor((n-k)/2).
//!
//! Three variants: the standard updates, division-free updates (no field
//! division in the loop, so rational inputs with integral coordinates
//! stay integral), and a low-degree variant that carries P_i with
//! N_i = P_i*Ann + W_i*Int and reconstitutes N at the end.

use super::GabidulinCode;
use crate::error::{Error, Result};
use crate::exact_fields::{FieldElement, OpCounter, Pretty};
use crate::residue_reduction::element_size_bits;
use crate::skew_poly::counted::{self, Coeffs, Ctx};
use crate::skew_poly::SkewPoly;

/// Which update discipline the reconstruction loop uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WbVariant {
    Standard,
    DivisionFree,
    LowDegree,
}

impl WbVariant {
    pub fn as_str(&self) -> &'static str {
        match self {
            WbVariant::Standard => "wb",
            WbVariant::DivisionFree => "wb-df",
            WbVariant::LowDegree => "wb-lowdeg",
        }
    }
}

/// Operation counts per phase of a decode.
#[derive(Clone, Debug, Default)]
pub struct PhaseCounters {
    pub init: OpCounter,
    /// Updates of the carried polynomial pairs inside the loop.
    pub loop_updates: OpCounter,
    /// Incremental updates of the discrepancy vectors.
    pub discrepancies: OpCounter,
    /// The final left Euclidean division (filled by the decode wrapper).
    pub division: OpCounter,
}

impl PhaseCounters {
    /// Multiplications in L over the whole decode (trivial ones excluded,
    /// they perform no ring work).
    pub fn total_mul(&self) -> u64 {
        self.init.mul + self.loop_updates.mul + self.discrepancies.mul + self.division.mul
    }

    pub fn total_div(&self) -> u64 {
        self.init.div + self.loop_updates.div + self.discrepancies.div + self.division.div
    }

    /// Every coefficient operation of the loop-update phase, counting
    /// short-circuited multiplications as well (the cost model the
    /// variants are compared under).
    pub fn loop_update_ops(&self) -> u64 {
        self.loop_updates.total()
    }
}

/// Per-round record: degrees at the end of the round (as lengths,
/// 0 = zero polynomial) and the largest coefficient size in bits for
/// rational towers.
#[derive(Clone, Debug)]
pub struct RoundRecord {
    pub round: usize,
    pub len_n0: usize,
    pub len_w0: usize,
    pub len_n1: usize,
    pub len_w1: usize,
    pub max_size_bits: Option<f64>,
}

#[derive(Clone, Debug, Default)]
pub struct WbStats {
    pub counters: PhaseCounters,
    pub rounds: Vec<RoundRecord>,
    pub init_size_bits: Option<f64>,
    pub trace: Option<String>,
    pub early_return: bool,
}

pub(super) struct WbRun {
    pub n_poly: SkewPoly,
    pub w_poly: SkewPoly,
    pub stats: WbStats,
}

struct State {
    g: Vec<FieldElement>,
    y: Vec<FieldElement>,
    u0: Vec<FieldElement>,
    u1: Vec<FieldElement>,
    n0: Coeffs,
    w0: Coeffs,
    n1: Coeffs,
    w1: Coeffs,
    // low-degree companions with N_i = P_i * Ann + W_i * Int
    p0: Coeffs,
    p1: Coeffs,
}

fn poly_of(code: &GabidulinCode, c: &Coeffs) -> SkewPoly {
    SkewPoly::from_coeffs(code.theta().clone(), c.clone())
}

fn max_size_bits(polys: &[&Coeffs]) -> Option<f64> {
    let mut best: Option<f64> = None;
    for p in polys {
        for c in p.iter() {
            if let Ok(b) = element_size_bits(c) {
                best = Some(best.map_or(b, |x: f64| x.max(b)));
            } else {
                return None;
            }
        }
    }
    best
}

pub(super) fn reconstruct(
    code: &GabidulinCode,
    y: &[FieldElement],
    variant: WbVariant,
    checks: bool,
    record_trace: bool,
) -> Result<WbRun> {
    let n = code.n();
    let k = code.k();
    if y.len() != n {
        return Err(Error::InvalidParams("received word has wrong length".into()));
    }
    let theta = code.theta().clone();
    let tw = theta.tower().clone();
    let rational = tw.is_rational_base();
    let lowdeg = variant == WbVariant::LowDegree;

    let mut stats = WbStats::default();
    let mut trace = if record_trace { Some(String::new()) } else { None };

    // Initialization: N0 is (a multiple of) the annihilator of the first
    // k support elements, (N1, W1) interpolates the first k values.
    let mut st = {
        let mut cnt = OpCounter::default();
        let (n0, n1, w1) = match variant {
            WbVariant::DivisionFree => {
                let (ann, int, lambda) = counted::df_annihilator_interpolator(
                    &theta,
                    &code.support()[..k],
                    &y[..k],
                    &mut cnt,
                )?;
                (ann.coeffs().to_vec(), int.coeffs().to_vec(), vec![lambda])
            }
            _ => {
                let (ann, int) = counted::annihilator_interpolator(
                    &theta,
                    &code.support()[..k],
                    &y[..k],
                    &mut cnt,
                )?;
                (ann.coeffs().to_vec(), int.coeffs().to_vec(), vec![tw.one()])
            }
        };
        let mut ctx = Ctx::new(&theta, &mut cnt);
        // discrepancies: positions before k are zero by construction
        let mut u0 = vec![tw.zero(); n];
        let mut u1 = vec![tw.zero(); n];
        for i in k..n {
            u0[i] = counted::eval(&mut ctx, &n0, &code.support()[i]);
            let a = counted::eval(&mut ctx, &n1, &code.support()[i]);
            let b = counted::eval(&mut ctx, &w1, &y[i]);
            u1[i] = ctx.sub(&a, &b);
        }
        stats.counters.init = cnt;
        State {
            g: code.support().to_vec(),
            y: y.to_vec(),
            u0,
            u1,
            n0,
            w0: Vec::new(),
            n1,
            w1,
            p0: vec![tw.one()],
            p1: Vec::new(),
        }
    };

    // the low-degree variant keeps Ann and Int for the reconstitution
    let (ann0, int0) = (st.n0.clone(), st.n1.clone());

    if let Some(t) = trace.as_mut() {
        t.push_str("-- init --\n");
        push_state_trace(t, code, &st);
    }
    if checks {
        check_round_invariants(code, &st, k, variant)?;
    }
    record_round(&mut stats, k, &st, rational, true);

    let mut returned_early = false;
    let mut round = k;
    while round < n {
        let mut i = round;
        // secondary loop: skip positions where only pair 0 disagrees
        if !st.u0[i].is_zero() && st.u1[i].is_zero() {
            let mut j = i + 1;
            while j < n && !st.u0[j].is_zero() && st.u1[j].is_zero() {
                j += 1;
            }
            if j == n {
                // every remaining position is already interpolated by
                // (N1, W1): return it now
                returned_early = true;
                break;
            }
            // permanent, consistent swap of positions i and j
            st.g.swap(i, j);
            st.y.swap(i, j);
            st.u0.swap(i, j);
            st.u1.swap(i, j);
        }
        i = round;

        let mut cnt_poly = std::mem::take(&mut stats.counters.loop_updates);
        let mut cnt_disc = std::mem::take(&mut stats.counters.discrepancies);
        if !st.u1[i].is_zero() {
            // type 1 update
            let u1i = st.u1[i].clone();
            let u0i = st.u0[i].clone();
            match variant {
                WbVariant::Standard | WbVariant::LowDegree => {
                    let mut ctx = Ctx::new(&theta, &mut cnt_poly);
                    let tu = ctx.theta(&u1i);
                    let c = ctx.div(&tu, &u1i)?;
                    let e = ctx.div(&u0i, &u1i)?;
                    let new_n0;
                    let new_n1;
                    if lowdeg {
                        new_n0 = counted::linear_mul(&mut ctx, &c, &st.p1);
                        new_n1 = counted::axpy(&mut ctx, &st.p0, &e, &st.p1);
                    } else {
                        new_n0 = counted::linear_mul(&mut ctx, &c, &st.n1);
                        new_n1 = counted::axpy(&mut ctx, &st.n0, &e, &st.n1);
                    }
                    let new_w0 = counted::linear_mul(&mut ctx, &c, &st.w1);
                    let new_w1 = counted::axpy(&mut ctx, &st.w0, &e, &st.w1);
                    if lowdeg {
                        st.p0 = new_n0;
                        st.p1 = new_n1;
                    } else {
                        st.n0 = new_n0;
                        st.n1 = new_n1;
                    }
                    st.w0 = new_w0;
                    st.w1 = new_w1;
                    // discrepancy updates with the same linear maps
                    let mut ctx = Ctx::new(&theta, &mut cnt_disc);
                    for pos in i + 1..n {
                        let t = ctx.theta(&st.u1[pos]);
                        let s = ctx.mul(&c, &st.u1[pos]);
                        let new0 = ctx.sub(&t, &s);
                        let s = ctx.mul(&e, &st.u1[pos]);
                        let new1 = ctx.sub(&st.u0[pos], &s);
                        st.u0[pos] = new0;
                        st.u1[pos] = new1;
                    }
                }
                WbVariant::DivisionFree => {
                    let mut ctx = Ctx::new(&theta, &mut cnt_poly);
                    let tu = ctx.theta(&u1i);
                    let new_n0 = counted::df_linear_mul(&mut ctx, &u1i, &tu, &st.n1);
                    let new_w0 = counted::df_linear_mul(&mut ctx, &u1i, &tu, &st.w1);
                    let new_n1 = counted::lin_comb(&mut ctx, &u1i, &st.n0, &u0i, &st.n1);
                    let new_w1 = counted::lin_comb(&mut ctx, &u1i, &st.w0, &u0i, &st.w1);
                    st.n0 = new_n0;
                    st.w0 = new_w0;
                    st.n1 = new_n1;
                    st.w1 = new_w1;
                    let mut ctx = Ctx::new(&theta, &mut cnt_disc);
                    for pos in i + 1..n {
                        let t = ctx.theta(&st.u1[pos]);
                        let a = ctx.mul(&u1i, &t);
                        let b = ctx.mul(&tu, &st.u1[pos]);
                        let new0 = ctx.sub(&a, &b);
                        let a = ctx.mul(&u1i, &st.u0[pos]);
                        let b = ctx.mul(&u0i, &st.u1[pos]);
                        let new1 = ctx.sub(&a, &b);
                        st.u0[pos] = new0;
                        st.u1[pos] = new1;
                    }
                }
            }
        } else {
            // type 2 update: both discrepancies vanish at this position
            debug_assert!(st.u0[i].is_zero());
            let mut ctx = Ctx::new(&theta, &mut cnt_poly);
            let new_n0;
            let new_n1;
            if lowdeg {
                new_n0 = counted::x_shift(&mut ctx, &st.p1);
                new_n1 = std::mem::take(&mut st.p0);
            } else {
                new_n0 = counted::x_shift(&mut ctx, &st.n1);
                new_n1 = std::mem::take(&mut st.n0);
            }
            let new_w0 = counted::x_shift(&mut ctx, &st.w1);
            let new_w1 = std::mem::take(&mut st.w0);
            if lowdeg {
                st.p0 = new_n0;
                st.p1 = new_n1;
            } else {
                st.n0 = new_n0;
                st.n1 = new_n1;
            }
            st.w0 = new_w0;
            st.w1 = new_w1;
            let mut ctx = Ctx::new(&theta, &mut cnt_disc);
            for pos in i + 1..n {
                let t = if st.u1[pos].is_zero() {
                    st.u1[pos].clone()
                } else {
                    ctx.theta(&st.u1[pos])
                };
                st.u1[pos] = std::mem::replace(&mut st.u0[pos], t);
            }
        }
        // the freshly used position is clean for both pairs now
        st.u0[i] = tw.zero();
        st.u1[i] = tw.zero();
        stats.counters.loop_updates = cnt_poly;
        stats.counters.discrepancies = cnt_disc;

        round += 1;
        if let Some(t) = trace.as_mut() {
            t.push_str(&format!("-- round {round} --\n"));
            push_state_trace(t, code, &st);
        }
        if checks {
            check_round_invariants(code, &st, round, variant)?;
        }
        record_round(&mut stats, round, &st, rational, false);
    }

    // for the low-degree variant, reconstitute N1 = P1 * Ann + W1 * Int
    // (kept outside the loop-update counters, which measure the per-round
    // update cost the variants are compared on)
    let (n_out, w_out) = if lowdeg {
        let ann = poly_of(code, &ann0);
        let int = poly_of(code, &int0);
        let p1 = poly_of(code, &st.p1);
        let w1 = poly_of(code, &st.w1);
        let n1 = p1.mul(&ann)?.add(&w1.mul(&int)?)?;
        (n1.coeffs().to_vec(), st.w1.clone())
    } else {
        (st.n1.clone(), st.w1.clone())
    };

    stats.early_return = returned_early;
    let n_poly = poly_of(code, &n_out);
    let w_poly = poly_of(code, &w_out);

    if checks {
        check_lr_contract(code, &st.g, &st.y, &n_poly, &w_poly)?;
    } else if w_poly.is_zero() {
        return Err(Error::Internal("reconstruction returned W = 0".into()));
    }

    if let Some(t) = trace.as_mut() {
        t.push_str("== final ==\n");
        t.push_str(&format!("N(X) = {n_poly}\n"));
        t.push_str(&format!("W(X) = {w_poly}\n"));
    }
    stats.trace = trace;
    Ok(WbRun { n_poly, w_poly, stats })
}

fn record_round(stats: &mut WbStats, round: usize, st: &State, rational: bool, init: bool) {
    let size = if rational {
        max_size_bits(&[&st.n0, &st.w0, &st.n1, &st.w1])
    } else {
        None
    };
    if init {
        stats.init_size_bits = size;
    }
    stats.rounds.push(RoundRecord {
        round,
        len_n0: st.n0.len(),
        len_w0: st.w0.len(),
        len_n1: st.n1.len(),
        len_w1: st.w1.len(),
        max_size_bits: size,
    });
}

fn push_state_trace(t: &mut String, code: &GabidulinCode, st: &State) {
    let p = |c: &Coeffs| poly_of(code, c).to_string();
    t.push_str(&format!("N0(X) = {}\n", p(&st.n0)));
    t.push_str(&format!("W0(X) = {}\n", p(&st.w0)));
    t.push_str(&format!("N1(X) = {}\n", p(&st.n1)));
    t.push_str(&format!("W1(X) = {}\n", p(&st.w1)));
    let fmt_vec = |v: &[FieldElement]| {
        let items: Vec<String> = v.iter().map(|x| Pretty(x).to_string()).collect();
        format!("[{}]", items.join(", "))
    };
    t.push_str(&format!("u0 = {}\n", fmt_vec(&st.u0)));
    t.push_str(&format!("u1 = {}\n", fmt_vec(&st.u1)));
}

/// Degree discipline at the end of round j (Prop. 4.2/4.3 of the source
/// analysis): upper bounds on all four polynomials plus the two exact
/// degrees that guarantee non-degeneracy. For the low-degree variant the
/// carried P_i stand in for N_i with deg P_i = deg N_i - k.
fn check_round_invariants(
    code: &GabidulinCode,
    st: &State,
    round: usize,
    variant: WbVariant,
) -> Result<()> {
    let k = code.k();
    let j = round - k;
    let bound_n0 = k + j / 2;
    let bound_w0 = (j + 1) / 2;
    let bound_n1 = k - 1 + (j + 1) / 2;
    let bound_w1 = j / 2;
    let lowdeg = variant == WbVariant::LowDegree;
    let (len_n0, len_n1) = if lowdeg {
        // deg P_i = deg N_i - k whenever P_i != 0
        (
            if st.p0.is_empty() { 0 } else { st.p0.len() + k },
            if st.p1.is_empty() { st.n1.len().min(k) } else { st.p1.len() + k },
        )
    } else {
        (st.n0.len(), st.n1.len())
    };
    let fail = |what: &str| {
        Err(Error::Internal(format!(
            "degree discipline violated at round {round}: {what}"
        )))
    };
    if len_n0 > bound_n0 + 1 {
        return fail("N0 above bound");
    }
    if st.w0.len() > bound_w0 + 1 {
        return fail("W0 above bound");
    }
    if len_n1 > bound_n1 + 1 {
        return fail("N1 above bound");
    }
    if st.w1.len() > bound_w1 + 1 {
        return fail("W1 above bound");
    }
    if round > k {
        if j % 2 == 1 {
            // deg N1 = k + (j-1)/2 and deg W0 = (j+1)/2 exactly
            if len_n1 != k + (j - 1) / 2 + 1 {
                return fail("N1 below its exact degree");
            }
            if st.w0.len() != (j + 1) / 2 + 1 {
                return fail("W0 below its exact degree");
            }
        } else {
            if len_n0 != k + j / 2 + 1 {
                return fail("N0 below its exact degree");
            }
            if st.w1.len() != j / 2 + 1 {
                return fail("W1 below its exact degree");
            }
        }
    }
    Ok(())
}

/// The linear-reconstruction contract: W != 0, deg W <= t_max, deg N
/// within the parity-dependent bound, and W{y_i} = N{g_i} for all i.
pub(super) fn check_lr_contract(
    code: &GabidulinCode,
    g: &[FieldElement],
    y: &[FieldElement],
    n_poly: &SkewPoly,
    w_poly: &SkewPoly,
) -> Result<()> {
    let n = code.n();
    let k = code.k();
    let t = code.t_max();
    if w_poly.is_zero() {
        return Err(Error::Internal("LR contract: W = 0".into()));
    }
    let max_n = if (n - k) % 2 == 0 { k + t - 1 } else { k + t };
    if w_poly.coeffs().len() > t + 1 || n_poly.coeffs().len() > max_n + 1 {
        return Err(Error::Internal("LR contract: degree bound violated".into()));
    }
    let tw = code.theta().tower();
    for (gi, yi) in g.iter().zip(y) {
        if !tw.sub(&n_poly.eval(gi), &w_poly.eval(yi)).is_zero() {
            return Err(Error::Internal("LR contract: interpolation condition fails".into()));
        }
    }
    Ok(())
}
