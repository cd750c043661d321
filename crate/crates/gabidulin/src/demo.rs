//! The worked end-to-end scenario: a [6,2] code over the degree-six
//! cyclotomic field, a received word hit by a rank-1 error plus one row
//! and one column erasure in the network-coding model, decoded by
//! reduction modulo the inert prime 3 and lifted back from the message
//! alphabet {0,1}. Every intermediate value is rendered to text; the
//! bundled golden trace pins the whole pipeline down to the coefficient.

use std::sync::Arc;

use crate::error::Result;
use crate::exact_fields::{cyclotomic_tower, pretty_list, CyclicAutomorphism, FieldElement};
use crate::gabidulin_codec::{GabidulinCode, NetworkPattern, WbVariant};
use crate::residue_reduction::{LiftAlphabet, ResidueContext};
use crate::skew_poly::SkewPoly;

/// The bundled reference output of [`run`].
pub const GOLDEN_TRACE: &str = include_str!("../data/worked_example_trace.txt");

pub struct DemoOutcome {
    pub f: SkewPoly,
    pub trace: String,
}

/// The demo code: support (1, a, ..., a^5), k = 2, theta: a -> a^3 over
/// Q[Y]/(1 + Y + ... + Y^6).
pub fn demo_code() -> Result<GabidulinCode> {
    let tw = cyclotomic_tower(7)?;
    let img = tw.pow(&tw.generator(1), 3);
    let theta = CyclicAutomorphism::new(tw.clone(), img)?;
    let a = tw.generator(1);
    let g: Vec<FieldElement> = (0..6).map(|i| tw.pow(&a, i)).collect();
    GabidulinCode::new(theta, g, 2)
}

/// Received word and side information of the scenario.
pub fn demo_received(code: &GabidulinCode) -> (Vec<FieldElement>, NetworkPattern) {
    let tw = code.theta().tower().clone();
    let el = |coords: [i64; 6]| {
        tw.from_coeffs(1, coords.iter().map(|&c| tw.int_at(0, c)).collect())
            .unwrap()
    };
    // constant-first coordinates of the received entries
    let y = vec![
        el([2, 2, -1, 1, 0, 1]),
        el([-1, 0, 1, 1, -1, 1]),
        el([0, -2, 1, 0, 4, -2]),
        el([3, 0, -1, 1, 2, -1]),
        el([0, 0, -2, 0, 0, -2]),
        el([2, -1, -2, 1, -1, -1]),
    ];
    let a_r_col = [1i64, -1, 0, 1, 1, -1];
    let b_c_row = [1i64, 0, -1, 0, 0, 1];
    let pattern = NetworkPattern {
        a_r: a_r_col.iter().map(|&v| vec![tw.int_at(0, v)]).collect(),
        b_c: vec![b_c_row.iter().map(|&v| tw.int_at(0, v)).collect()],
    };
    (y, pattern)
}

/// Run the full residue pipeline with tracing and lift the message back.
pub fn run() -> Result<DemoOutcome> {
    let code = demo_code()?;
    let (y, pattern) = demo_received(&code);
    let q = 3;
    let alphabet = LiftAlphabet::from_ints(&[0, 1], q)?;

    let mut trace = String::new();
    let ctx = ResidueContext::new(code.theta(), q)?;
    let reduced_code = ctx.reduce_code(&code)?;
    let y_bar = ctx.reduce_vector(&y)?;
    let reduced_pattern = NetworkPattern {
        a_r: ctx.reduce_scalar_matrix(&pattern.a_r)?,
        b_c: ctx.reduce_scalar_matrix(&pattern.b_c)?,
    };
    trace.push_str(&format!("== reduction mod {q} ==\n"));
    trace.push_str(&format!("g = {}\n", pretty_list(reduced_code.support())));
    trace.push_str(&format!("y = {}\n", pretty_list(&y_bar)));

    let (f_bar, inner_trace) = crate::gabidulin_codec::decode_network_erasures_traced(
        &reduced_code,
        &y_bar,
        &reduced_pattern,
        WbVariant::Standard,
    )?;
    trace.push_str(&inner_trace);

    let f = ctx.lift_poly(&f_bar, &alphabet)?;
    trace.push_str("== lift ==\n");
    trace.push_str(&format!("f(X) over Q = {f}\n"));
    Ok(DemoOutcome { f, trace })
}

/// The automorphism of the demo tower, for reuse by tests.
pub fn demo_theta() -> Result<Arc<CyclicAutomorphism>> {
    Ok(demo_code()?.theta().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demo_trace_matches_the_bundled_golden_file() {
        let outcome = run().unwrap();
        let tw = outcome.f.tower().clone();
        let a = tw.generator(1);
        let expect = SkewPoly::from_coeffs(
            outcome.f.theta().clone(),
            vec![tw.pow(&a, 2), tw.pow(&a, 5)],
        );
        assert_eq!(outcome.f, expect);
        assert_eq!(outcome.trace, GOLDEN_TRACE);
    }

    #[test]
    fn demo_instance_also_decodes_directly_over_the_rationals() {
        // the same instance is decodable without reduction; the results
        // agree, which is the commuting square on the worked example
        let code = demo_code().unwrap();
        let (y, pattern) = demo_received(&code);
        let f = crate::gabidulin_codec::decode_network_erasures_vec(
            &code,
            &y,
            &pattern,
            WbVariant::Standard,
        )
        .unwrap();
        assert_eq!(f, run().unwrap().f);
    }
}
