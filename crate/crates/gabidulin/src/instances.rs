//! Seeded construction of random codes, messages, errors and erasure
//! scenarios. Shared by the CLI, the benchmark runner, the browser demo
//! and the test suites, so every randomized artifact flows from one
//! explicit generator.

use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::exact_fields::linalg::Mat;
use crate::exact_fields::{k_rank, CyclicAutomorphism, FieldElement};
use crate::gabidulin_codec::{GabidulinCode, LinePattern, NetworkPattern, Received};
use crate::rank_metric::{from_coordinate_matrix, to_coordinate_matrix, weight, WeightKind};
use crate::skew_poly::SkewPoly;

/// Random K-linearly independent support of length n.
pub fn random_support<R: Rng + ?Sized>(
    theta: &Arc<CyclicAutomorphism>,
    n: usize,
    rng: &mut R,
    bound: i64,
) -> Result<Vec<FieldElement>> {
    let tw = theta.tower().clone();
    let basis = tw.power_basis(tw.top_layer());
    for _ in 0..1000 {
        let g: Vec<_> = (0..n).map(|_| tw.random_element(rng, bound)).collect();
        if k_rank(&tw, &g, &basis)? == n {
            return Ok(g);
        }
    }
    Err(Error::Internal("could not sample an independent support".into()))
}

/// Random message polynomial of degree < k with coordinates in
/// [-bound, bound] (uniform field elements over finite towers).
pub fn random_message<R: Rng + ?Sized>(
    theta: &Arc<CyclicAutomorphism>,
    k: usize,
    rng: &mut R,
    bound: i64,
) -> SkewPoly {
    let tw = theta.tower().clone();
    SkewPoly::from_coeffs(
        theta.clone(),
        (0..k).map(|_| tw.random_element(rng, bound)).collect(),
    )
}

/// Message with all power-basis coordinates drawn from {0, 1}, the shape
/// the residue pipeline lifts back with the {0,1} alphabet.
pub fn random_small_message<R: Rng + ?Sized>(
    theta: &Arc<CyclicAutomorphism>,
    k: usize,
    rng: &mut R,
) -> SkewPoly {
    let tw = theta.tower().clone();
    let top = tw.top_layer();
    let coeffs = (0..k)
        .map(|_| {
            let coords = (0..tw.layer_degree(top))
                .map(|_| tw.int_at(top - 1, rng.gen_range(0..=1)))
                .collect();
            tw.from_coeffs(top, coords).unwrap()
        })
        .collect();
    SkewPoly::from_coeffs(theta.clone(), coeffs)
}

/// Error vector of rank exactly t: t K-independent elements combined by
/// a full-rank t x n matrix over K.
pub fn random_error_of_rank<R: Rng + ?Sized>(
    theta: &Arc<CyclicAutomorphism>,
    n: usize,
    t: usize,
    rng: &mut R,
    bound: i64,
) -> Result<Vec<FieldElement>> {
    let tw = theta.tower().clone();
    let top = tw.top_layer();
    let basis = tw.power_basis(top);
    if t == 0 {
        return Ok(vec![tw.zero(); n]);
    }
    if t > n.min(theta.top_degree()) {
        return Err(Error::InvalidParams("error rank exceeds min(n, m)".into()));
    }
    for _ in 0..10_000 {
        let eps: Vec<_> = (0..t).map(|_| tw.random_element(rng, bound)).collect();
        if k_rank(&tw, &eps, &basis)? != t {
            continue;
        }
        let mat: Vec<Vec<FieldElement>> = (0..t)
            .map(|_| (0..n).map(|_| tw.random_at(rng, top - 1, 1)).collect())
            .collect();
        if Mat::from_rows(mat.clone()).rank(&tw)? != t {
            continue;
        }
        let e: Vec<FieldElement> = (0..n)
            .map(|j| {
                let mut acc = tw.zero();
                for i in 0..t {
                    let term = tw.scalar_mul(&eps[i], &mat[i][j]);
                    acc = tw.add(&acc, &term);
                }
                acc
            })
            .collect();
        if weight(theta, &e, &basis, WeightKind::MooreL)? == t {
            return Ok(e);
        }
    }
    Err(Error::Internal("could not sample an error of the requested rank".into()))
}

/// Add a rank-t error to a codeword.
pub fn corrupt_plain<R: Rng + ?Sized>(
    code: &GabidulinCode,
    word: &[FieldElement],
    t: usize,
    rng: &mut R,
    bound: i64,
) -> Result<Received> {
    let tw = code.theta().tower().clone();
    let e = random_error_of_rank(code.theta(), code.n(), t, rng, bound)?;
    let y = word.iter().zip(&e).map(|(a, b)| tw.add(a, b)).collect();
    Ok(Received::Plain(y))
}

/// Add a rank-t error, then erase s_r full rows and s_c full columns of
/// the matrix form.
pub fn corrupt_line<R: Rng + ?Sized>(
    code: &GabidulinCode,
    word: &[FieldElement],
    t: usize,
    s_r: usize,
    s_c: usize,
    rng: &mut R,
    bound: i64,
) -> Result<Received> {
    let theta = code.theta().clone();
    let tw = theta.tower().clone();
    let m = code.m();
    let n = code.n();
    let e = random_error_of_rank(&theta, n, t, rng, bound)?;
    let y: Vec<_> = word.iter().zip(&e).map(|(a, b)| tw.add(a, b)).collect();
    let basis = tw.power_basis(tw.top_layer());
    let mat = to_coordinate_matrix(&theta, &y, &basis)?;
    let rows = sample_distinct(m, s_r, rng);
    let cols = sample_distinct(n, s_c, rng);
    let masked = (0..m)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if rows.contains(&i) || cols.contains(&j) {
                        None
                    } else {
                        Some(mat.at(i, j).clone())
                    }
                })
                .collect()
        })
        .collect();
    Ok(Received::Line(LinePattern::with_minimal_cover(masked)))
}

/// Build Y = C + E + A_r B_r + A_c B_c with fresh random factors; the
/// pattern carries the receiver-known sides A_r and B_c.
pub fn corrupt_network<R: Rng + ?Sized>(
    code: &GabidulinCode,
    word: &[FieldElement],
    t: usize,
    s_r: usize,
    s_c: usize,
    rng: &mut R,
    bound: i64,
) -> Result<Received> {
    let theta = code.theta().clone();
    let tw = theta.tower().clone();
    let top = tw.top_layer();
    let m = code.m();
    let n = code.n();
    let basis = tw.power_basis(top);
    let e = random_error_of_rank(&theta, n, t, rng, bound)?;
    let mut y: Vec<_> = word.iter().zip(&e).map(|(a, b)| tw.add(a, b)).collect();
    let rand_k_matrix = |rng: &mut R, rows: usize, cols: usize| -> Vec<Vec<FieldElement>> {
        (0..rows)
            .map(|_| (0..cols).map(|_| tw.random_at(rng, top - 1, bound)).collect())
            .collect()
    };
    let a_r = rand_k_matrix(rng, m, s_r);
    let b_r = rand_k_matrix(rng, s_r, n);
    let a_c = rand_k_matrix(rng, m, s_c);
    let b_c = loop {
        let cand = rand_k_matrix(rng, s_c, n);
        if s_c == 0 || Mat::from_rows(cand.clone()).rank(&tw)? == s_c {
            break cand;
        }
    };
    let add_product = |y: &mut Vec<FieldElement>,
                       left: &[Vec<FieldElement>],
                       right: &[Vec<FieldElement>]|
     -> Result<()> {
        let s = right.len();
        for (r, right_row) in right.iter().enumerate().take(s) {
            let col: Vec<FieldElement> = (0..m).map(|i| left[i][r].clone()).collect();
            let col_mat = Mat::from_columns(m, &[col], || tw.zero_at(top - 1));
            let elem = from_coordinate_matrix(&theta, &col_mat, &basis)?[0].clone();
            for (j, factor) in right_row.iter().enumerate() {
                if factor.is_zero() {
                    continue;
                }
                let term = tw.scalar_mul(&elem, factor);
                y[j] = tw.add(&y[j], &term);
            }
        }
        Ok(())
    };
    add_product(&mut y, &a_r, &b_r)?;
    add_product(&mut y, &a_c, &b_c)?;
    Ok(Received::Network { word: y, pattern: NetworkPattern { a_r, b_c } })
}

fn sample_distinct<R: Rng + ?Sized>(limit: usize, count: usize, rng: &mut R) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..limit).collect();
    for i in (1..idx.len()).rev() {
        idx.swap(i, rng.gen_range(0..=i));
    }
    idx.truncate(count);
    idx.sort_unstable();
    idx
}
