//! Resultant with respect to `y`, as the Sylvester determinant over `F_q[x]`.

use crate::error::{Error, Result};

use super::{BPoly, UPoly};

/// `Res_y(a, b)`, computed on the literal polynomials (no content removal).
pub fn resultant_y(a: &BPoly, b: &BPoly) -> Result<UPoly> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    let field = a.field();
    if a.is_zero() || b.is_zero() {
        return Ok(UPoly::zero(field));
    }
    let ca = a.y_coeffs();
    let cb = b.y_coeffs();
    let m = ca.len() - 1;
    let n = cb.len() - 1;
    if m == 0 && n == 0 {
        return Err(Error::BothConstantInY);
    }
    let size = m + n;
    let mut mat = vec![vec![UPoly::zero(field); size]; size];
    for row in 0..n {
        for (k, c) in ca.iter().rev().enumerate() {
            mat[row][row + k] = c.clone();
        }
    }
    for row in 0..m {
        for (k, c) in cb.iter().rev().enumerate() {
            mat[n + row][row + k] = c.clone();
        }
    }
    determinant(mat)
}

/// Fraction-free (Bareiss) elimination; every division is exact in `F_q[x]`.
pub fn determinant(mut mat: Vec<Vec<UPoly>>) -> Result<UPoly> {
    let size = mat.len();
    let Some(first) = mat.first().and_then(|r| r.first()) else {
        return Err(Error::DegreeMismatch("empty matrix".into()));
    };
    let field = first.field().clone();
    let mut negate = false;
    let mut prev = UPoly::one(&field);
    for k in 0..size.saturating_sub(1) {
        if mat[k][k].is_zero() {
            let Some(pivot) = (k + 1..size).find(|&i| !mat[i][k].is_zero()) else {
                return Ok(UPoly::zero(&field));
            };
            mat.swap(k, pivot);
            negate = !negate;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let num = &(&mat[k][k] * &mat[i][j]) - &(&mat[i][k] * &mat[k][j]);
                mat[i][j] = num.div_exact(&prev)?;
            }
        }
        prev = mat[k][k].clone();
    }
    let det = mat[size - 1][size - 1].clone();
    Ok(if negate { -&det } else { det })
}
