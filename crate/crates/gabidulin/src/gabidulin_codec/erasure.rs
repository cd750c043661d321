//! Errors-and-erasures decoding for the two classical erasure models.
//!
//! Line erasures: single coordinates of the m x n matrix form are lost;
//! a minimal row/column cover of the erased cells (the term-rank, by
//! Koenig duality) turns them into s_r row and s_c column erasures.
//!
//! Network-coding erasures: the corruption is A_r*B_r + A_c*B_c with
//! A_r and B_c known to the receiver.
//!
//! Both reduce to error-only decoding in a derived code of length n - s_c
//! and dimension k + s_r, then one left division by the row annihilator.

use super::wb::WbVariant;
use super::GabidulinCode;
use crate::error::{Error, Result};
use crate::exact_fields::linalg::Mat;
use crate::exact_fields::FieldElement;
use crate::rank_metric::from_coordinate_matrix;
use crate::skew_poly::{DivSide, SkewPoly};

/// A received matrix with erased coordinates and a row/column cover of
/// the erased cells.
#[derive(Clone, Debug)]
pub struct LinePattern {
    /// m x n matrix over K; `None` marks an erased coordinate.
    pub masked: Vec<Vec<Option<FieldElement>>>,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl LinePattern {
    /// Build a pattern from the masked matrix alone, computing a minimal
    /// cover.
    pub fn with_minimal_cover(masked: Vec<Vec<Option<FieldElement>>>) -> Self {
        let (rows, cols) = term_rank_cover(&masked);
        LinePattern { masked, rows, cols }
    }

    pub fn validate(&self) -> Result<()> {
        for (i, row) in self.masked.iter().enumerate() {
            for (j, cell) in row.iter().enumerate() {
                if cell.is_none() && !self.rows.contains(&i) && !self.cols.contains(&j) {
                    return Err(Error::InvalidParams(format!(
                        "erased cell ({i},{j}) not covered"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The known side matrices of the network-coding erasure model.
#[derive(Clone, Debug)]
pub struct NetworkPattern {
    /// m x s_r over K: known column space of the row-erasure term.
    pub a_r: Vec<Vec<FieldElement>>,
    /// s_c x n over K: known row space of the column-erasure term.
    pub b_c: Vec<Vec<FieldElement>>,
}

/// Minimal row/column cover of the erased cells, by maximum bipartite
/// matching and the Koenig construction. The cover size equals the
/// term-rank of the erasure pattern.
pub fn term_rank_cover(masked: &[Vec<Option<FieldElement>>]) -> (Vec<usize>, Vec<usize>) {
    let m = masked.len();
    let n = masked.first().map(|r| r.len()).unwrap_or(0);
    let adj: Vec<Vec<usize>> = (0..m)
        .map(|i| (0..n).filter(|&j| masked[i][j].is_none()).collect())
        .collect();
    // augmenting-path maximum matching on rows -> columns
    let mut match_col: Vec<Option<usize>> = vec![None; n];
    let mut match_row: Vec<Option<usize>> = vec![None; m];
    fn augment(
        i: usize,
        adj: &[Vec<usize>],
        match_col: &mut [Option<usize>],
        match_row: &mut [Option<usize>],
        seen: &mut [bool],
    ) -> bool {
        for &j in &adj[i] {
            if seen[j] {
                continue;
            }
            seen[j] = true;
            if match_col[j].is_none()
                || augment(match_col[j].unwrap(), adj, match_col, match_row, seen)
            {
                match_col[j] = Some(i);
                match_row[i] = Some(j);
                return true;
            }
        }
        false
    }
    for i in 0..m {
        let mut seen = vec![false; n];
        augment(i, &adj, &mut match_col, &mut match_row, &mut seen);
    }
    // Koenig: Z = unmatched rows plus everything reachable by alternating
    // paths; cover = (rows not in Z) union (columns in Z)
    let mut row_in_z = vec![false; m];
    let mut col_in_z = vec![false; n];
    let mut queue: Vec<usize> = (0..m).filter(|&i| match_row[i].is_none()).collect();
    for &i in &queue {
        row_in_z[i] = true;
    }
    while let Some(i) = queue.pop() {
        for &j in &adj[i] {
            if col_in_z[j] {
                continue;
            }
            col_in_z[j] = true;
            if let Some(i2) = match_col[j] {
                if !row_in_z[i2] {
                    row_in_z[i2] = true;
                    queue.push(i2);
                }
            }
        }
    }
    let rows: Vec<usize> = (0..m)
        .filter(|&i| adj[i].iter().next().is_some() && !row_in_z[i])
        .collect();
    let cols: Vec<usize> = (0..n).filter(|&j| col_in_z[j]).collect();
    (rows, cols)
}

/// Decode a masked received matrix: puncture the covered columns, fill
/// the remaining erased cells with zero (their unknown part lies in the
/// span of the covered basis rows, which the annihilator kills), remove
/// the row erasures with that annihilator, decode errors in the derived
/// code, and divide back.
pub fn decode_line_erasures(
    code: &GabidulinCode,
    basis: &[FieldElement],
    pattern: &LinePattern,
    variant: WbVariant,
) -> Result<SkewPoly> {
    pattern.validate()?;
    let theta = code.theta().clone();
    let tw = theta.tower();
    let m = code.m();
    let n = code.n();
    if pattern.masked.len() != m || pattern.masked.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidParams("masked matrix has wrong shape".into()));
    }
    if basis.len() != m {
        return Err(Error::InvalidParams("basis has wrong size".into()));
    }
    let s_r = pattern.rows.len();
    let s_c = pattern.cols.len();
    if s_r + s_c > n - code.k() {
        return Err(Error::InvalidParams(
            "cover larger than the correction budget n - k".into(),
        ));
    }
    // fill erased cells with zero and rebuild L-elements column-wise
    let top = tw.top_layer();
    let zero_k = tw.zero_at(top - 1);
    let filled = Mat::from_rows(
        pattern
            .masked
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| c.clone().unwrap_or_else(|| zero_k.clone()))
                    .collect()
            })
            .collect(),
    );
    let y = from_coordinate_matrix(&theta, &filled, basis)?;
    let keep: Vec<usize> = (0..n).filter(|j| !pattern.cols.contains(j)).collect();
    let g_t: Vec<FieldElement> = keep.iter().map(|&j| code.support()[j].clone()).collect();
    let y_t: Vec<FieldElement> = keep.iter().map(|&j| y[j].clone()).collect();
    let row_space: Vec<FieldElement> = pattern.rows.iter().map(|&i| basis[i].clone()).collect();
    decode_after_erasure_removal(code, &theta, g_t, y_t, &row_space, variant)
}

/// Decode in the network-coding model, taking the received word as an
/// m x n matrix over K.
pub fn decode_network_erasures(
    code: &GabidulinCode,
    received: &Mat,
    pattern: &NetworkPattern,
    variant: WbVariant,
) -> Result<SkewPoly> {
    let theta = code.theta().clone();
    let tw = theta.tower();
    let basis = tw.power_basis(tw.top_layer());
    let y = from_coordinate_matrix(&theta, received, &basis)?;
    decode_network_erasures_vec(code, &y, pattern, variant)
}

/// Same as [`decode_network_erasures`] with the received word already in
/// vector form.
pub fn decode_network_erasures_vec(
    code: &GabidulinCode,
    y: &[FieldElement],
    pattern: &NetworkPattern,
    variant: WbVariant,
) -> Result<SkewPoly> {
    let theta = code.theta().clone();
    let tw = theta.tower().clone();
    let top = tw.top_layer();
    let n = code.n();
    let m = code.m();
    if y.len() != n {
        return Err(Error::InvalidParams("received word has wrong length".into()));
    }
    let basis = tw.power_basis(top);
    // column erasures: column-reduce b_c with pivots pushed to the
    // rightmost usable columns, keep the zeroed columns
    let mut bc: Vec<Vec<FieldElement>> = pattern.b_c.clone();
    for row in &bc {
        if row.len() != n {
            return Err(Error::InvalidParams("B_c has wrong width".into()));
        }
    }
    let mut g_t = code.support().to_vec();
    let mut y_t = y.to_vec();
    let mut pivot_cols: Vec<usize> = Vec::new();
    for r in 0..bc.len() {
        // rightmost nonzero entry in a not-yet-pivot column
        let Some(p) = (0..n)
            .rev()
            .find(|j| !pivot_cols.contains(j) && !bc[r][*j].is_zero())
        else {
            // dependent side-information row carries nothing: drop it
            continue;
        };
        let pv = bc[r][p].clone();
        let pv_inv = tw.inv(&tw.lift_to(&pv, top - 1))?;
        for j in 0..n {
            if j == p || bc[r][j].is_zero() {
                continue;
            }
            let factor = tw.mul(&tw.lift_to(&bc[r][j], top - 1), &pv_inv);
            // column operation C_j <- C_j - factor * C_p on bc, g, y
            for row in bc.iter_mut() {
                let t = tw.mul(&row[p], &factor);
                row[j] = tw.sub(&row[j], &t);
            }
            let lf = tw.lift_to(&factor, top);
            let t = tw.mul(&g_t[p], &lf);
            g_t[j] = tw.sub(&g_t[j], &t);
            let t = tw.mul(&y_t[p], &lf);
            y_t[j] = tw.sub(&y_t[j], &t);
        }
        pivot_cols.push(p);
    }
    let s_c = pivot_cols.len();
    if pattern.a_r.iter().any(|row| row.len() != pattern.a_r[0].len()) || (!pattern.a_r.is_empty() && pattern.a_r.len() != m)
    {
        return Err(Error::InvalidParams("A_r has wrong shape".into()));
    }
    let s_r = if pattern.a_r.is_empty() { 0 } else { pattern.a_r[0].len() };
    if s_r + s_c > n - code.k() {
        return Err(Error::InvalidParams(
            "erasures exceed the correction budget n - k".into(),
        ));
    }
    let keep: Vec<usize> = (0..n).filter(|j| !pivot_cols.contains(j)).collect();
    let g_t: Vec<FieldElement> = keep.iter().map(|&j| g_t[j].clone()).collect();
    let y_t: Vec<FieldElement> = keep.iter().map(|&j| y_t[j].clone()).collect();
    // row erasures: the columns of a_r as elements of L
    let row_space: Vec<FieldElement> = (0..s_r)
        .map(|c| {
            let col = Mat::from_columns(
                m,
                &[pattern.a_r.iter().map(|row| row[c].clone()).collect::<Vec<_>>()],
                || tw.zero_at(top - 1),
            );
            from_coordinate_matrix(&theta, &col, &basis).map(|v| v[0].clone())
        })
        .collect::<Result<_>>()?;
    decode_after_erasure_removal(code, &theta, g_t, y_t, &row_space, variant)
}

/// Shared tail of both erasure decoders: kill the row-erasure space with
/// its annihilator, decode errors in the derived code, divide back.
fn decode_after_erasure_removal(
    code: &GabidulinCode,
    theta: &std::sync::Arc<crate::exact_fields::CyclicAutomorphism>,
    g_t: Vec<FieldElement>,
    y_t: Vec<FieldElement>,
    row_space: &[FieldElement],
    variant: WbVariant,
) -> Result<SkewPoly> {
    let v_r = SkewPoly::annihilator(theta, row_space)?;
    let z: Vec<FieldElement> = y_t.iter().map(|yi| v_r.eval(yi)).collect();
    let inner_k = code.k() + v_r.coeffs().len().saturating_sub(1);
    let inner = GabidulinCode::new(theta.clone(), g_t, inner_k)?;
    let big_f = inner.decode_wb(&z, variant)?.f;
    let (f, rem) = big_f.divide(&v_r, DivSide::Left)?;
    if !rem.is_zero() {
        return Err(Error::DecodeFail);
    }
    Ok(f)
}

/// Line-erasure decoding that records the pipeline as text.
pub fn decode_line_erasures_traced(
    code: &GabidulinCode,
    basis: &[FieldElement],
    pattern: &LinePattern,
    variant: WbVariant,
) -> Result<(SkewPoly, String)> {
    use crate::exact_fields::display::pretty_list;
    pattern.validate()?;
    let theta = code.theta().clone();
    let tw = theta.tower();
    let n = code.n();
    let mut out = String::new();
    out.push_str("== line erasures ==\n");
    out.push_str(&format!("cover rows = {:?}\n", pattern.rows));
    out.push_str(&format!("cover cols = {:?}\n", pattern.cols));
    let top = tw.top_layer();
    let zero_k = tw.zero_at(top - 1);
    let filled = Mat::from_rows(
        pattern
            .masked
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| c.clone().unwrap_or_else(|| zero_k.clone()))
                    .collect()
            })
            .collect(),
    );
    let y = from_coordinate_matrix(&theta, &filled, basis)?;
    let keep: Vec<usize> = (0..n).filter(|j| !pattern.cols.contains(j)).collect();
    let g_t: Vec<FieldElement> = keep.iter().map(|&j| code.support()[j].clone()).collect();
    let y_t: Vec<FieldElement> = keep.iter().map(|&j| y[j].clone()).collect();
    out.push_str(&format!("g~ = {}\n", pretty_list(&g_t)));
    out.push_str(&format!("y~ = {}\n", pretty_list(&y_t)));
    let row_space: Vec<FieldElement> = pattern.rows.iter().map(|&i| basis[i].clone()).collect();
    let v_r = SkewPoly::annihilator(&theta, &row_space)?;
    out.push_str(&format!("V_r(X) = {v_r}\n"));
    let z: Vec<FieldElement> = y_t.iter().map(|yi| v_r.eval(yi)).collect();
    out.push_str(&format!("z~ = {}\n", pretty_list(&z)));
    let inner_k = code.k() + v_r.coeffs().len().saturating_sub(1);
    let inner = GabidulinCode::new(theta.clone(), g_t, inner_k)?;
    out.push_str(&format!("== reconstruction (n={}, k={}) ==\n", inner.n(), inner.k()));
    let (n_poly, w_poly, trace) = inner.reconstruct_wb_traced(&z, variant)?;
    out.push_str(&trace);
    let (big_f, rem) = n_poly.divide(&w_poly, DivSide::Left)?;
    if !rem.is_zero() {
        return Err(Error::DecodeFail);
    }
    out.push_str(&format!("F(X) = {big_f}\n"));
    let (f, rem) = big_f.divide(&v_r, DivSide::Left)?;
    if !rem.is_zero() {
        return Err(Error::DecodeFail);
    }
    out.push_str(&format!("f(X) = {f}\n"));
    Ok((f, out))
}

/// Network-erasure decoding that records the full pipeline as text:
/// transformed support and word, the row annihilator, the inner
/// reconstruction rounds, and the final divisions.
pub fn decode_network_erasures_traced(
    code: &GabidulinCode,
    y: &[FieldElement],
    pattern: &NetworkPattern,
    variant: WbVariant,
) -> Result<(SkewPoly, String)> {
    use crate::exact_fields::display::pretty_list;
    let theta = code.theta().clone();
    let tw = theta.tower().clone();
    let top = tw.top_layer();
    let n = code.n();
    let m = code.m();
    let basis = tw.power_basis(top);
    let mut out = String::new();

    let mut bc: Vec<Vec<FieldElement>> = pattern.b_c.clone();
    let mut g_t = code.support().to_vec();
    let mut y_t = y.to_vec();
    let mut pivot_cols: Vec<usize> = Vec::new();
    for r in 0..bc.len() {
        let Some(p) = (0..n)
            .rev()
            .find(|j| !pivot_cols.contains(j) && !bc[r][*j].is_zero())
        else {
            continue;
        };
        let pv = bc[r][p].clone();
        let pv_inv = tw.inv(&tw.lift_to(&pv, top - 1))?;
        for j in 0..n {
            if j == p || bc[r][j].is_zero() {
                continue;
            }
            let factor = tw.mul(&tw.lift_to(&bc[r][j], top - 1), &pv_inv);
            for row in bc.iter_mut() {
                let t = tw.mul(&row[p], &factor);
                row[j] = tw.sub(&row[j], &t);
            }
            let lf = tw.lift_to(&factor, top);
            let t = tw.mul(&g_t[p], &lf);
            g_t[j] = tw.sub(&g_t[j], &t);
            let t = tw.mul(&y_t[p], &lf);
            y_t[j] = tw.sub(&y_t[j], &t);
        }
        pivot_cols.push(p);
    }
    let keep: Vec<usize> = (0..n).filter(|j| !pivot_cols.contains(j)).collect();
    out.push_str("== column erasures ==\n");
    out.push_str(&format!(
        "kept columns = [{}]\n",
        keep.iter()
            .map(|j| (j + 1).to_string())
            .collect::<Vec<_>>()
            .join(", ")
    ));
    let g_t: Vec<FieldElement> = keep.iter().map(|&j| g_t[j].clone()).collect();
    let y_t: Vec<FieldElement> = keep.iter().map(|&j| y_t[j].clone()).collect();
    out.push_str(&format!("g~ = {}\n", pretty_list(&g_t)));
    out.push_str(&format!("y~ = {}\n", pretty_list(&y_t)));

    let s_r = if pattern.a_r.is_empty() { 0 } else { pattern.a_r[0].len() };
    let row_space: Vec<FieldElement> = (0..s_r)
        .map(|c| {
            let col = Mat::from_columns(
                m,
                &[pattern.a_r.iter().map(|row| row[c].clone()).collect::<Vec<_>>()],
                || tw.zero_at(top - 1),
            );
            from_coordinate_matrix(&theta, &col, &basis).map(|v| v[0].clone())
        })
        .collect::<Result<_>>()?;
    out.push_str("== row erasures ==\n");
    out.push_str(&format!("A_r columns as elements = {}\n", pretty_list(&row_space)));
    let v_r = SkewPoly::annihilator(&theta, &row_space)?;
    out.push_str(&format!("V_r(X) = {v_r}\n"));
    let z: Vec<FieldElement> = y_t.iter().map(|yi| v_r.eval(yi)).collect();
    out.push_str(&format!("z~ = {}\n", pretty_list(&z)));

    let inner_k = code.k() + v_r.coeffs().len().saturating_sub(1);
    let inner = GabidulinCode::new(theta.clone(), g_t, inner_k)?;
    out.push_str(&format!(
        "== reconstruction (n={}, k={}) ==\n",
        inner.n(),
        inner.k()
    ));
    let (n_poly, w_poly, trace) = inner.reconstruct_wb_traced(&z, variant)?;
    out.push_str(&trace);
    let (big_f, rem) = n_poly.divide(&w_poly, DivSide::Left)?;
    if !rem.is_zero() {
        return Err(Error::DecodeFail);
    }
    out.push_str(&format!("F(X) = {big_f}\n"));
    let (f, rem) = big_f.divide(&v_r, DivSide::Left)?;
    if !rem.is_zero() {
        return Err(Error::DecodeFail);
    }
    out.push_str(&format!("f(X) = {f}\n"));
    Ok((f, out))
}
