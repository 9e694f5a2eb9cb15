//! Rewrites a root of `P` as a polynomial plus the diagonal of a rational function.
//!
//! Given the root prefix `a_0..a_r` (with `r` the order of vanishing of the discriminant
//! resultant at 0), the tail `(f - V) / x^r` is a root of a polynomial that is smooth at
//! the origin, so it is the diagonal of `N0 / D` for explicit polynomials `N0`, `D`.

use crate::bounds::t0_of;
use crate::error::{Error, Result};
use crate::gf::{FieldCtx, Fq};
use crate::polynomial::{resultant_y, BPoly, Substitution, UPoly};
use crate::series::{enumerate_prefixes, TruncSeries};

/// A separable polynomial with its degree `d = deg_y` and height `h = deg_x`.
#[derive(Clone, Debug)]
pub struct MinimalData {
    pub poly: BPoly,
    pub d: u32,
    pub h: u32,
    /// `Res_y(P, dP/dy)`, nonzero.
    pub resultant: UPoly,
}

impl MinimalData {
    pub fn field(&self) -> &FieldCtx {
        self.poly.field()
    }
}

pub fn degree_height(p: &BPoly) -> Result<MinimalData> {
    let d = p.deg_y().unwrap_or(0);
    if d == 0 {
        return Err(Error::DegreeZero);
    }
    let h = p.deg_x().unwrap_or(0);
    let resultant = resultant_y(p, &p.dpdy())?;
    if resultant.is_zero() {
        return Err(Error::NotSeparable);
    }
    Ok(MinimalData { poly: p.clone(), d, h, resultant })
}

/// Order of vanishing at 0 of the resultant; never exceeds `h(2d - 1)`.
pub fn resultant_order(md: &MinimalData) -> Result<usize> {
    let r = md.resultant.valuation().ok_or(Error::NotSeparable)?;
    let cap = md.h as usize * (2 * md.d as usize - 1);
    if r > cap {
        return Err(Error::InvariantBreach(format!("resultant order {r} exceeds {cap}")));
    }
    Ok(r)
}

#[derive(Clone, Debug)]
pub struct Preparation {
    pub md: MinimalData,
    pub r: usize,
    pub prefix: Vec<Fq>,
    /// `a_0 + ... + a_r x^r`
    pub v: UPoly,
    /// `V + x^r y`
    pub m: BPoly,
    /// `P(x, M)`
    pub q_shift: BPoly,
    pub s: u32,
    /// `x^{-s} P(x, M)`, smooth at the origin.
    pub q_tilde: BPoly,
    pub den: BPoly,
    pub num0: BPoly,
    /// `(xy)^r N0`, the numerator of the initial kernel state.
    pub num_init: BPoly,
    /// `a_0 = 0` and `dP/dy(0, 0) != 0`.
    pub smooth: bool,
    pub t0: i64,
}

impl Preparation {
    pub fn field(&self) -> &FieldCtx {
        self.md.field()
    }

    pub fn a0(&self) -> Fq {
        self.prefix[0]
    }
}

pub fn prepare(md: &MinimalData, prefix: &[Fq]) -> Result<Preparation> {
    let field = md.field();
    let p = &md.poly;
    let r = resultant_order(md)?;
    if prefix.len() != r + 1 {
        return Err(Error::InvalidPrefix(format!("expected {} coefficients, got {}", r + 1, prefix.len())));
    }
    if prefix.iter().any(|&c| !field.contains(c)) {
        return Err(Error::FieldMismatch);
    }
    if p.eval_y_series(prefix, r + 1).iter().any(|c| !c.is_zero()) {
        return Err(Error::InvalidPrefix(format!("P(x, prefix) does not vanish mod x^{}", r + 1)));
    }
    let v = UPoly::new(field, prefix.to_vec());
    let m = &BPoly::from_upoly(&v) + &BPoly::monomial(field, Fq::ONE, r as u32, 1);
    let q_shift = p.substitute(Substitution::YTo(&m))?;
    let s = q_shift.x_valuation().ok_or_else(|| Error::InvariantBreach("P(x, V + x^r y) vanished".into()))?;
    let q_tilde = q_shift.substitute(Substitution::XShiftOut(s))?;
    if !q_tilde.coeff(0, 0).is_zero() {
        return Err(Error::InvalidPrefix("prefix does not extend to a power-series root".into()));
    }
    let q_tilde_y = q_tilde.dpdy();
    if q_tilde_y.coeff(0, 0).is_zero() {
        return Err(Error::SmoothnessCheckFailed);
    }
    let den = q_tilde.substitute(Substitution::XToXy)?.shift_out_y(1)?;
    let num0 = q_tilde_y.substitute(Substitution::XToXy)?.mul_monomial(0, 1);
    let num_init = num0.mul_monomial(r as u32, r as u32);

    let span = q_shift.deg_x().unwrap_or(0) - s + q_shift.deg_y().unwrap_or(0);
    if den.deg_x().unwrap_or(0) > span || den.deg_y().unwrap_or(0) + 1 > span.max(1) {
        return Err(Error::InvariantBreach("denominator degree accounting".into()));
    }
    let smooth = prefix[0].is_zero() && !p.dpdy().coeff(0, 0).is_zero();
    Ok(Preparation {
        md: md.clone(),
        r,
        prefix: prefix.to_vec(),
        v,
        m,
        q_shift,
        s,
        q_tilde,
        den,
        num0,
        num_init,
        smooth,
        t0: t0_of(field.q() as u64, r as u64),
    })
}

/// `f^{(r)} = (f - V) / x^r`, at precision `f.prec() - r`.
pub fn residual_series(prep: &Preparation, f: &TruncSeries) -> Result<TruncSeries> {
    let r = prep.r;
    if f.prec() <= r {
        return Err(Error::PrecisionExhausted);
    }
    if f.coeffs()[..=r] != prep.prefix[..] {
        return Err(Error::PrefixMismatch);
    }
    let mut coeffs = f.coeffs()[r..].to_vec();
    coeffs[0] = Fq::ZERO;
    TruncSeries::new(f.field(), coeffs)
}

/// Prefixes of length `r + 1` that extend to a power-series root, in lexicographic order.
///
/// Prefixes that only satisfy `P` modulo `x^{r+1}` are dropped.
pub fn root_prefixes(md: &MinimalData) -> Result<(usize, Vec<Vec<Fq>>)> {
    let r = resultant_order(md)?;
    let mut out = Vec::new();
    for prefix in enumerate_prefixes(&md.poly, r) {
        match prepare(md, &prefix) {
            Ok(_) => out.push(prefix),
            Err(Error::InvalidPrefix(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok((r, out))
}
