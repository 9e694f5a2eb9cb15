//! Univariate and bivariate polynomial algebra over `F_q`.

mod bpoly;
mod newton;
mod parse;
mod resultant;
mod upoly;

pub use bpoly::{BPoly, Substitution};
pub use newton::{convex_hull, interior_points, newton_interior};
pub use parse::{parse_element, parse_poly};
pub use resultant::{determinant, resultant_y};
pub use upoly::UPoly;

use crate::gf::{FieldCtx, Fq};

fn format_term(field: &FieldCtx, c: Fq, i: u32, j: u32) -> String {
    let mut coeff = field.format(c);
    if coeff.contains('+') || coeff.contains('*') {
        coeff = format!("({coeff})");
    }
    let mut parts = Vec::new();
    if c != Fq::ONE || (i == 0 && j == 0) {
        parts.push(coeff);
    }
    for (var, k) in [("x", i), ("y", j)] {
        match k {
            0 => {}
            1 => parts.push(var.to_string()),
            _ => parts.push(format!("{var}^{k}")),
        }
    }
    parts.join("*")
}
