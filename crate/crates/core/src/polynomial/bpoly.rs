use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, Fq};

use super::UPoly;

/// Sparse bivariate polynomial: `(x exponent, y exponent) -> nonzero coefficient`.
///
/// Iteration order is lexicographic on `(i, j)`.
#[derive(Clone, PartialEq, Eq)]
pub struct BPoly {
    field: FieldCtx,
    terms: BTreeMap<(u32, u32), Fq>,
}

/// Substitutions supported by [`BPoly::substitute`].
#[derive(Clone, Copy, Debug)]
pub enum Substitution<'a> {
    /// `x -> x y`, i.e. `x^i y^j -> x^i y^{i+j}`.
    XToXy,
    /// `y -> M(x, y)`.
    YTo(&'a BPoly),
    /// Division by `x^s`.
    XShiftOut(u32),
}

impl BPoly {
    pub fn zero(field: &FieldCtx) -> Self {
        BPoly { field: field.clone(), terms: BTreeMap::new() }
    }

    pub fn monomial(field: &FieldCtx, c: Fq, i: u32, j: u32) -> Self {
        let mut p = Self::zero(field);
        p.add_term(i, j, c);
        p
    }

    pub fn constant(field: &FieldCtx, c: Fq) -> Self {
        Self::monomial(field, c, 0, 0)
    }

    pub fn one(field: &FieldCtx) -> Self {
        Self::constant(field, Fq::ONE)
    }

    pub fn x(field: &FieldCtx) -> Self {
        Self::monomial(field, Fq::ONE, 1, 0)
    }

    pub fn y(field: &FieldCtx) -> Self {
        Self::monomial(field, Fq::ONE, 0, 1)
    }

    pub fn from_terms(field: &FieldCtx, terms: impl IntoIterator<Item = ((u32, u32), Fq)>) -> Self {
        let mut p = Self::zero(field);
        for ((i, j), c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    /// Lifts a polynomial in `x` alone.
    pub fn from_upoly(u: &UPoly) -> Self {
        Self::from_terms(u.field(), u.coeffs().iter().enumerate().map(|(k, &c)| ((k as u32, 0), c)))
    }

    /// `sum_j coeffs[j](x) y^j`.
    pub fn from_y_coeffs(field: &FieldCtx, coeffs: &[UPoly]) -> Self {
        let mut p = Self::zero(field);
        for (j, a) in coeffs.iter().enumerate() {
            for (i, &c) in a.coeffs().iter().enumerate() {
                p.add_term(i as u32, j as u32, c);
            }
        }
        p
    }

    /// Adds `c x^i y^j` in place.
    pub fn add_term(&mut self, i: u32, j: u32, c: Fq) {
        if c.is_zero() {
            return;
        }
        let f = &self.field;
        let entry = self.terms.entry((i, j)).or_insert(Fq::ZERO);
        *entry = f.add(*entry, c);
        if entry.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), Fq)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Fq {
        self.terms.get(&(i, j)).copied().unwrap_or(Fq::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn deg_x(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0).max()
    }

    pub fn deg_y(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.1).max()
    }

    /// Largest `s` with `x^s | self`; `None` for zero.
    pub fn x_valuation(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0).min()
    }

    /// Coefficients in `y`: entry `j` is `A_j(x)`.
    pub fn y_coeffs(&self) -> Vec<UPoly> {
        let Some(dy) = self.deg_y() else {
            return Vec::new();
        };
        let mut dense: Vec<Vec<Fq>> = vec![Vec::new(); dy as usize + 1];
        for (&(i, j), &c) in &self.terms {
            let row = &mut dense[j as usize];
            if row.len() <= i as usize {
                row.resize(i as usize + 1, Fq::ZERO);
            }
            row[i as usize] = c;
        }
        dense.into_iter().map(|c| UPoly::new(&self.field, c)).collect()
    }

    pub fn scale(&self, c: Fq) -> Self {
        let f = &self.field;
        Self::from_terms(f, self.terms().map(|(k, a)| (k, f.mul(a, c))))
    }

    pub fn mul_monomial(&self, i: u32, j: u32) -> Self {
        BPoly { field: self.field.clone(), terms: self.terms.iter().map(|(&(a, b), &c)| ((a + i, b + j), c)).collect() }
    }

    /// Division by `y^k`.
    pub fn shift_out_y(&self, k: u32) -> Result<Self> {
        if self.terms.keys().any(|&(_, j)| j < k) {
            return Err(Error::NotDivisible(format!("y^{k}")));
        }
        Ok(BPoly { field: self.field.clone(), terms: self.terms.iter().map(|(&(i, j), &c)| ((i, j - k), c)).collect() })
    }

    /// Formal partial derivative in `y`.
    pub fn dpdy(&self) -> Self {
        let f = &self.field;
        Self::from_terms(
            f,
            self.terms().filter(|&((_, j), _)| j > 0).map(|((i, j), c)| ((i, j - 1), f.mul(f.from_int(j as i64), c))),
        )
    }

    pub fn substitute(&self, sub: Substitution<'_>) -> Result<Self> {
        match sub {
            Substitution::XToXy => Ok(BPoly {
                field: self.field.clone(),
                terms: self.terms.iter().map(|(&(i, j), &c)| ((i, i + j), c)).collect(),
            }),
            Substitution::XShiftOut(s) => {
                if self.terms.keys().any(|&(i, _)| i < s) {
                    return Err(Error::NotDivisible(format!("x^{s}")));
                }
                Ok(BPoly {
                    field: self.field.clone(),
                    terms: self.terms.iter().map(|(&(i, j), &c)| ((i - s, j), c)).collect(),
                })
            }
            Substitution::YTo(m) => {
                if m.field != self.field {
                    return Err(Error::FieldMismatch);
                }
                // Horner in y over the coefficients A_j(x).
                let coeffs = self.y_coeffs();
                let mut acc = Self::zero(&self.field);
                for a in coeffs.iter().rev() {
                    acc = &(&acc * m) + &Self::from_upoly(a);
                }
                Ok(acc)
            }
        }
    }

    /// Value at `y = g(x)` as a series in `x`, truncated to `prec` coefficients.
    pub fn eval_y_series(&self, g: &[Fq], prec: usize) -> Vec<Fq> {
        let f = &self.field;
        let mut acc = vec![Fq::ZERO; prec];
        for a in self.y_coeffs().iter().rev() {
            let mut next = vec![Fq::ZERO; prec];
            for (i, &ai) in acc.iter().enumerate() {
                if ai.is_zero() {
                    continue;
                }
                for (j, &gj) in g.iter().enumerate().take(prec - i) {
                    next[i + j] = f.add(next[i + j], f.mul(ai, gj));
                }
            }
            for (k, &c) in a.coeffs().iter().enumerate().take(prec) {
                next[k] = f.add(next[k], c);
            }
            acc = next;
        }
        acc
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self + other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self * other)
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }
}

impl Add for &BPoly {
    type Output = BPoly;

    fn add(self, rhs: &BPoly) -> BPoly {
        assert!(self.field == rhs.field, "field mismatch");
        let mut out = self.clone();
        for (&(i, j), &c) in &rhs.terms {
            out.add_term(i, j, c);
        }
        out
    }
}

impl Sub for &BPoly {
    type Output = BPoly;

    fn sub(self, rhs: &BPoly) -> BPoly {
        self + &(-rhs)
    }
}

impl Neg for &BPoly {
    type Output = BPoly;

    fn neg(self) -> BPoly {
        let f = &self.field;
        BPoly::from_terms(f, self.terms().map(|(k, c)| (k, f.neg(c))))
    }
}

impl Mul for &BPoly {
    type Output = BPoly;

    fn mul(self, rhs: &BPoly) -> BPoly {
        assert!(self.field == rhs.field, "field mismatch");
        let f = &self.field;
        let mut acc: BTreeMap<(u32, u32), Fq> = BTreeMap::new();
        for (&(a, b), &c) in &self.terms {
            for (&(i, j), &d) in &rhs.terms {
                let e = acc.entry((a + i, b + j)).or_insert(Fq::ZERO);
                *e = f.add(*e, f.mul(c, d));
            }
        }
        acc.retain(|_, c| !c.is_zero());
        BPoly { field: f.clone(), terms: acc }
    }
}

impl fmt::Debug for BPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for BPoly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(out, "0");
        }
        let terms: Vec<String> =
            self.terms.iter().map(|(&(i, j), &c)| super::format_term(&self.field, c, i, j)).collect();
        write!(out, "{}", terms.join(" + "))
    }
}
