//! Truncated power series: root expansion, one-dimensional Cartier operators,
//! bivariate rational expansion and diagonals.
//!
//! Everything here works on explicit coefficient lists and is independent of the
//! symbolic kernel construction, so it doubles as the reference for checking it.

mod oracle;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, Fq};
use crate::polynomial::{BPoly, UPoly};

pub use oracle::{kernel_oracle, kernel_oracle_series, OracleResult};

/// A power series in `x` known to `prec` coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncSeries {
    field: FieldCtx,
    coeffs: Vec<Fq>,
}

impl TruncSeries {
    pub fn new(field: &FieldCtx, coeffs: Vec<Fq>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::PrecisionExhausted);
        }
        Ok(TruncSeries { field: field.clone(), coeffs })
    }

    /// Truncation of a polynomial.
    pub fn from_upoly(u: &UPoly, prec: usize) -> Result<Self> {
        Self::new(u.field(), (0..prec).map(|k| u.coeff(k)).collect())
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn truncate(&self, prec: usize) -> Result<Self> {
        Self::new(&self.field, self.coeffs[..prec.min(self.prec())].to_vec())
    }

    /// Sum on the common precision.
    pub fn add(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.prec().min(other.prec());
        TruncSeries { field: f.clone(), coeffs: (0..n).map(|k| f.add(self.coeffs[k], other.coeffs[k])).collect() }
    }
}

/// A series in `x, y` known on all `(n, m)` with `n + m < prec`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BiTruncSeries {
    field: FieldCtx,
    prec: usize,
    coeffs: BTreeMap<(u32, u32), Fq>,
}

impl BiTruncSeries {
    pub fn new(field: &FieldCtx, prec: usize, terms: impl IntoIterator<Item = ((u32, u32), Fq)>) -> Self {
        let coeffs = terms.into_iter().filter(|&((n, m), c)| !c.is_zero() && ((n + m) as usize) < prec).collect();
        BiTruncSeries { field: field.clone(), prec, coeffs }
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn get(&self, n: u32, m: u32) -> Fq {
        self.coeffs.get(&(n, m)).copied().unwrap_or(Fq::ZERO)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), Fq)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }
}

/// All `(a_0, ..., a_depth)` with `P(x, sum a_n x^n) = 0 mod x^{depth+1}`, in lexicographic order.
pub fn enumerate_prefixes(p: &BPoly, depth: usize) -> Vec<Vec<Fq>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(depth + 1);
    extend_prefixes(p, depth, &mut current, &mut out);
    out
}

fn extend_prefixes(p: &BPoly, depth: usize, current: &mut Vec<Fq>, out: &mut Vec<Vec<Fq>>) {
    let k = current.len();
    for a in p.field().elements() {
        current.push(a);
        // lower coefficients already vanish by induction
        if p.eval_y_series(current, k + 1)[k].is_zero() {
            if k == depth {
                out.push(current.clone());
            } else {
                extend_prefixes(p, depth, current, out);
            }
        }
        current.pop();
    }
}

/// Binomial coefficients `C(j, t)` for `0 <= t <= j <= d`, reduced into the field.
fn binomials(field: &FieldCtx, d: usize) -> Vec<Vec<Fq>> {
    let mut rows: Vec<Vec<Fq>> = vec![vec![Fq::ONE]];
    for j in 1..=d {
        let prev = &rows[j - 1];
        let row = (0..=j)
            .map(|t| {
                let left = if t > 0 { prev[t - 1] } else { Fq::ZERO };
                let right = prev.get(t).copied().unwrap_or(Fq::ZERO);
                field.add(left, right)
            })
            .collect();
        rows.push(row);
    }
    rows
}

/// Continues a root prefix to `n` coefficients by successive linearization.
///
/// With `nu` the valuation of `dP/dy(x, f)`, each coefficient `a_k` for `k > nu` solves
/// `[x^{k+nu}] P(x, F_k + a_k x^k) = 0`. The prefix must be long enough that `nu` is visible
/// in it; otherwise the continuation is ambiguous.
pub fn expand_root(p: &BPoly, prefix: &[Fq], n: usize) -> Result<TruncSeries> {
    let field = p.field();
    if n == 0 {
        return Err(Error::PrecisionExhausted);
    }
    let l = prefix.len();
    if l == 0 {
        return Err(Error::AmbiguousContinuation { index: 0 });
    }
    if let Some(k) = p.eval_y_series(prefix, l).iter().position(|c| !c.is_zero()) {
        return Err(Error::NoContinuation { index: k });
    }
    if n <= l {
        return TruncSeries::new(field, prefix[..n].to_vec());
    }
    let derivative = p.dpdy().eval_y_series(prefix, l);
    let Some(nu) = derivative.iter().position(|c| !c.is_zero()) else {
        return Err(Error::AmbiguousContinuation { index: l });
    };
    let lead_inv = field.inv(derivative[nu])?;
    let width = n + nu;
    let ycoeffs = p.y_coeffs();
    let d = ycoeffs.len() - 1;
    let binom = binomials(field, d);

    // powers[j] = F^j mod x^width for the current partial sum F
    let mut powers: Vec<Vec<Fq>> = Vec::with_capacity(d + 1);
    let mut unit = vec![Fq::ZERO; width];
    unit[0] = Fq::ONE;
    powers.push(unit);
    for j in 1..=d {
        let prev = &powers[j - 1];
        let mut next = vec![Fq::ZERO; width];
        for (i, &c) in prev.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (t, &a) in prefix.iter().enumerate().take(width - i) {
                next[i + t] = field.add(next[i + t], field.mul(c, a));
            }
        }
        powers.push(next);
    }
    let coeff_at = |powers: &[Vec<Fq>], m: usize| -> Fq {
        let mut acc = Fq::ZERO;
        for (j, a) in ycoeffs.iter().enumerate() {
            for (i, &c) in a.coeffs().iter().enumerate().take(m + 1) {
                if !c.is_zero() {
                    acc = field.add(acc, field.mul(c, powers[j][m - i]));
                }
            }
        }
        acc
    };
    for m in l..l + nu {
        if !coeff_at(&powers, m).is_zero() {
            return Err(Error::NoContinuation { index: m });
        }
    }

    let mut coeffs = prefix.to_vec();
    for k in l..n {
        let a = field.neg(field.mul(coeff_at(&powers, k + nu), lead_inv));
        coeffs.push(a);
        if a.is_zero() {
            continue;
        }
        // (F + a x^k)^j = sum_t C(j,t) a^t x^{kt} F^{j-t}; descend in j so F^{j-t} is still old
        for j in (1..=d).rev() {
            let mut a_pow = Fq::ONE;
            for t in 1..=j {
                a_pow = field.mul(a_pow, a);
                let shift = k * t;
                if shift >= width {
                    break;
                }
                let c = field.mul(binom[j][t], a_pow);
                if c.is_zero() {
                    continue;
                }
                let (lo, hi) = powers.split_at_mut(j);
                let src = &lo[j - t];
                let dst = &mut hi[0];
                for m in 0..width - shift {
                    if !src[m].is_zero() {
                        dst[m + shift] = field.add(dst[m + shift], field.mul(c, src[m]));
                    }
                }
            }
        }
    }
    TruncSeries::new(field, coeffs)
}

/// `Lambda_l`: `b_n = a_{qn + l}` for every known index.
pub fn cartier1(g: &TruncSeries, digit: u32) -> Result<TruncSeries> {
    let q = g.field.q();
    if digit >= q {
        return Err(Error::DigitOutOfRange { digit, q });
    }
    let coeffs: Vec<Fq> = g.coeffs.iter().skip(digit as usize).step_by(q as usize).copied().collect();
    TruncSeries::new(&g.field, coeffs)
}

/// Expansion of `num / den` in `F_q[[x, y]]` to total degree `< prec`.
pub fn rational_expand(num: &BPoly, den: &BPoly, prec: usize) -> Result<BiTruncSeries> {
    let field = num.field();
    if field != den.field() {
        return Err(Error::FieldMismatch);
    }
    let d00 = den.coeff(0, 0);
    if d00.is_zero() {
        return Err(Error::NonUnitDenominator);
    }
    let d_inv = field.inv(d00)?;
    let tail: Vec<((usize, usize), Fq)> =
        den.terms().filter(|&(k, _)| k != (0, 0)).map(|((a, b), c)| ((a as usize, b as usize), c)).collect();
    // rows[n][m] holds the coefficient of x^n y^m, m < prec - n
    let mut rows: Vec<Vec<Fq>> = (0..prec).map(|n| vec![Fq::ZERO; prec - n]).collect();
    for t in 0..prec {
        for n in 0..=t {
            let m = t - n;
            let mut v = num.coeff(n as u32, m as u32);
            for &((a, b), c) in &tail {
                if a <= n && b <= m {
                    let s = rows[n - a][m - b];
                    if !s.is_zero() {
                        v = field.sub(v, field.mul(c, s));
                    }
                }
            }
            rows[n][m] = field.mul(v, d_inv);
        }
    }
    let terms = rows
        .iter()
        .enumerate()
        .flat_map(|(n, row)| row.iter().enumerate().map(move |(m, &c)| ((n as u32, m as u32), c)));
    Ok(BiTruncSeries::new(field, prec, terms))
}

/// `Delta(g) = sum a_{n,n} x^n`, to precision `ceil(prec / 2)`.
pub fn diagonal(g: &BiTruncSeries) -> Result<TruncSeries> {
    let prec = g.prec.div_ceil(2);
    TruncSeries::new(&g.field, (0..prec as u32).map(|n| g.get(n, n)).collect())
}
