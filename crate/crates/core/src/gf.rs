//! Exact arithmetic in `F_q = F_p[g]/(m(g))`.
//!
//! Elements are stored in canonical power-basis coordinates `c_0 + c_1 g + ... + c_{e-1} g^{e-1}`,
//! packed into a single integer `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`. The packing is a bijection
//! onto `0..q`, so equality of [`Fq`] values is equality of field elements.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;

/// Fields up to this order get precomputed addition and multiplication tables.
const TABLE_ORDER: u32 = 256;

const MAX_DEGREE: usize = 16;

/// An element of `F_q`, packed as the base-`p` integer of its coordinates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fq(pub(crate) u16);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    /// The packed coordinate index in `0..q`.
    pub fn index(self) -> u32 {
        self.0 as u32
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Tables {
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

struct Inner {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

/// A validated finite field context. Cheap to clone; clones share storage.
#[derive(Clone)]
pub struct FieldCtx {
    inner: Arc<Inner>,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.e == other.inner.e
                && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for FieldCtx {}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.inner.q)?;
        if self.inner.e > 1 {
            write!(f, "[mod {:?}]", self.inner.modulus)?;
        }
        Ok(())
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Builds `F_{p^e}`. Without an explicit modulus, the lexicographically smallest monic
/// irreducible polynomial (coefficients compared from `c_0` upwards) is used.
pub fn make_field(p: u64, e: u32, modulus: Option<&[u32]>) -> Result<FieldCtx> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if e == 0 {
        return Err(Error::DegreeMismatch("extension degree must be at least 1".into()));
    }
    let order = (p as u128).checked_pow(e);
    if order.is_none_or(|q| q > MAX_ORDER as u128) {
        return Err(Error::FieldTooLarge { p: p.min(u32::MAX as u64) as u32, e });
    }
    let p = p as u32;
    let q = order.unwrap() as u32;
    let modulus = match modulus {
        Some(m) => {
            if m.len() != e as usize + 1 {
                return Err(Error::DegreeMismatch(format!("modulus has {} coefficients, expected {}", m.len(), e + 1)));
            }
            let m: Vec<u32> = m.iter().map(|c| c % p).collect();
            if m[e as usize] != 1 {
                return Err(Error::DegreeMismatch("modulus must be monic".into()));
            }
            if !is_irreducible(p, &m) {
                return Err(Error::ReducibleModulus { p });
            }
            m
        }
        None => default_modulus(p, e),
    };
    let mut inner = Inner { p, e, q, modulus, tables: None };
    if q <= TABLE_ORDER {
        inner.tables = Some(build_tables(&inner));
    }
    Ok(FieldCtx { inner: Arc::new(inner) })
}

fn default_modulus(p: u32, e: u32) -> Vec<u32> {
    if e == 1 {
        return vec![0, 1];
    }
    // Enumerate (c_0, ..., c_{e-1}) in lexicographic order with c_0 most significant.
    let e = e as usize;
    let mut digits = vec![0u32; e];
    loop {
        let mut m = digits.clone();
        m.push(1);
        if is_irreducible(p, &m) {
            return m;
        }
        let mut k = e;
        loop {
            k -= 1;
            digits[k] += 1;
            if digits[k] < p {
                break;
            }
            digits[k] = 0;
            assert!(k > 0, "no irreducible polynomial of degree {e} over F_{p}");
        }
    }
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(p: u32, m: &[u32]) -> bool {
    let deg = m.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    for fd in 1..=deg / 2 {
        let count = (p as u64).pow(fd as u32);
        for idx in 0..count {
            let mut f = Vec::with_capacity(fd + 1);
            let mut v = idx;
            for _ in 0..fd {
                f.push((v % p as u64) as u32);
                v /= p as u64;
            }
            f.push(1);
            if fp_rem_is_zero(p, m, &f) {
                return false;
            }
        }
    }
    true
}

fn fp_rem_is_zero(p: u32, a: &[u32], monic: &[u32]) -> bool {
    let mut r = a.to_vec();
    let fd = monic.len() - 1;
    for k in (fd..r.len()).rev() {
        let c = r[k];
        if c == 0 {
            continue;
        }
        for (i, &mc) in monic.iter().enumerate() {
            let idx = k - fd + i;
            r[idx] = (r[idx] + p - (c * mc) % p) % p;
        }
    }
    r.iter().all(|&c| c == 0)
}

fn build_tables(f: &Inner) -> Tables {
    let q = f.q as usize;
    let mut add = vec![0u16; q * q];
    let mut mul = vec![0u16; q * q];
    let mut neg = vec![0u16; q];
    for a in 0..q {
        neg[a] = neg_direct(f, a as u16);
        for b in 0..q {
            add[a * q + b] = add_direct(f, a as u16, b as u16);
            mul[a * q + b] = mul_direct(f, a as u16, b as u16);
        }
    }
    let mut inv = vec![0u16; q];
    for a in 1..q {
        inv[a] = (1..q).find(|&b| mul[a * q + b] == 1).unwrap() as u16;
    }
    Tables { add, mul, neg, inv }
}

fn decode(f: &Inner, a: u16) -> [u32; MAX_DEGREE] {
    let mut c = [0u32; MAX_DEGREE];
    let mut v = a as u32;
    for slot in c.iter_mut().take(f.e as usize) {
        *slot = v % f.p;
        v /= f.p;
    }
    c
}

fn encode(f: &Inner, c: &[u32]) -> u16 {
    let mut v = 0u32;
    for &ci in c[..f.e as usize].iter().rev() {
        v = v * f.p + ci;
    }
    v as u16
}

fn add_direct(f: &Inner, a: u16, b: u16) -> u16 {
    if f.e == 1 {
        return ((a as u32 + b as u32) % f.p) as u16;
    }
    let (ca, cb) = (decode(f, a), decode(f, b));
    let mut c = [0u32; MAX_DEGREE];
    for i in 0..f.e as usize {
        c[i] = (ca[i] + cb[i]) % f.p;
    }
    encode(f, &c)
}

fn neg_direct(f: &Inner, a: u16) -> u16 {
    let ca = decode(f, a);
    let mut c = [0u32; MAX_DEGREE];
    for i in 0..f.e as usize {
        c[i] = (f.p - ca[i]) % f.p;
    }
    encode(f, &c)
}

fn mul_direct(f: &Inner, a: u16, b: u16) -> u16 {
    let p = f.p as u64;
    if f.e == 1 {
        return ((a as u64 * b as u64) % p) as u16;
    }
    let e = f.e as usize;
    let (ca, cb) = (decode(f, a), decode(f, b));
    let mut prod = [0u64; 2 * MAX_DEGREE];
    for i in 0..e {
        if ca[i] == 0 {
            continue;
        }
        for j in 0..e {
            prod[i + j] = (prod[i + j] + ca[i] as u64 * cb[j] as u64) % p;
        }
    }
    for k in (e..2 * e - 1).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for i in 0..e {
            let idx = k - e + i;
            prod[idx] = (prod[idx] + p - (c * f.modulus[i] as u64) % p) % p;
        }
    }
    let mut c = [0u32; MAX_DEGREE];
    for i in 0..e {
        c[i] = prod[i] as u32;
    }
    encode(f, &c)
}

/// Field operation selector for [`FieldCtx::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Inv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Frobenius {
    Forward,
    Inverse,
}

impl FieldCtx {
    pub fn p(&self) -> u32 {
        self.inner.p
    }

    pub fn e(&self) -> u32 {
        self.inner.e
    }

    pub fn q(&self) -> u32 {
        self.inner.q
    }

    /// Modulus coefficients, low to high, ending in 1.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn has_tables(&self) -> bool {
        self.inner.tables.is_some()
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.inner.q).map(|v| Fq(v as u16))
    }

    /// The element with packed index `v`, if `v < q`.
    pub fn elem(&self, v: u32) -> Option<Fq> {
        (v < self.inner.q).then_some(Fq(v as u16))
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fq {
        Fq(n.rem_euclid(self.inner.p as i64) as u16)
    }

    /// The generator `g` of the power basis (equal to the integer `1` when `e = 1`).
    pub fn generator(&self) -> Fq {
        if self.inner.e == 1 {
            Fq::ONE
        } else {
            Fq(self.inner.p as u16)
        }
    }

    pub fn coords(&self, a: Fq) -> Vec<u32> {
        decode(&self.inner, a.0)[..self.inner.e as usize].to_vec()
    }

    pub fn from_coords(&self, coords: &[u32]) -> Result<Fq> {
        if coords.len() != self.inner.e as usize {
            return Err(Error::DegreeMismatch(format!("expected {} coordinates, got {}", self.inner.e, coords.len())));
        }
        let reduced: Vec<u32> = coords.iter().map(|c| c % self.inner.p).collect();
        Ok(Fq(encode(&self.inner, &reduced)))
    }

    pub fn contains(&self, a: Fq) -> bool {
        (a.0 as u32) < self.inner.q
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        let f = &*self.inner;
        if let Some(t) = &f.tables {
            return Fq(t.add[a.0 as usize * f.q as usize + b.0 as usize]);
        }
        if f.p == 2 {
            return Fq(a.0 ^ b.0);
        }
        Fq(add_direct(f, a.0, b.0))
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        let f = &*self.inner;
        match &f.tables {
            Some(t) => Fq(t.neg[a.0 as usize]),
            None => Fq(neg_direct(f, a.0)),
        }
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        let f = &*self.inner;
        if let Some(t) = &f.tables {
            return Fq(t.mul[a.0 as usize * f.q as usize + b.0 as usize]);
        }
        Fq(mul_direct(f, a.0, b.0))
    }

    pub fn inv(&self, a: Fq) -> Result<Fq> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.inner.tables {
            Some(t) => Fq(t.inv[a.0 as usize]),
            None => self.pow(a, self.inner.q as u64 - 2),
        })
    }

    pub fn div(&self, a: Fq, b: Fq) -> Result<Fq> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^k`, with `0^0 = 1`.
    pub fn pow(&self, a: Fq, mut k: u64) -> Fq {
        let mut base = a;
        let mut acc = Fq::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// Binary operation dispatch; `b` is ignored for `Inv`.
    pub fn arith(&self, op: FieldOp, a: Fq, b: Fq) -> Result<Fq> {
        if !self.contains(a) || !self.contains(b) {
            return Err(Error::FieldMismatch);
        }
        match op {
            FieldOp::Add => Ok(self.add(a, b)),
            FieldOp::Sub => Ok(self.sub(a, b)),
            FieldOp::Mul => Ok(self.mul(a, b)),
            FieldOp::Inv => self.inv(a),
        }
    }

    /// `a^p` (forward) or the unique `b` with `b^p = a` (inverse, computed as `a^{p^{e-1}}`).
    pub fn frobenius(&self, a: Fq, direction: Frobenius) -> Fq {
        let p = self.inner.p as u64;
        match direction {
            Frobenius::Forward => self.pow(a, p),
            Frobenius::Inverse => self.pow(a, p.pow(self.inner.e - 1)),
        }
    }

    /// Text form: an integer for prime fields, a polynomial in `g` otherwise.
    pub fn format(&self, a: Fq) -> String {
        if self.inner.e == 1 {
            return a.0.to_string();
        }
        let c = self.coords(a);
        let mut parts = Vec::new();
        for (k, &ck) in c.iter().enumerate().rev() {
            if ck == 0 {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => "g".to_string(),
                _ => format!("g^{k}"),
            };
            parts.push(match (ck, k) {
                (_, 0) => ck.to_string(),
                (1, _) => mono,
                _ => format!("{ck}*{mono}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}

/// Field description as given by a user: characteristic, degree and optional modulus.
#[derive(serde::Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub p: u64,
    #[serde(default = "one")]
    pub e: u32,
    pub modulus: Option<Vec<u32>>,
}

fn one() -> u32 {
    1
}

impl FieldSpec {
    pub fn build(&self) -> Result<FieldCtx> {
        make_field(self.p, self.e, self.modulus.as_deref())
    }
}

/// `p=2,e=2,modulus=1,1,1`; commas and whitespace both separate.
pub fn parse_field_spec(text: &str) -> Result<FieldSpec> {
    let mut p = None;
    let mut e = None;
    let mut modulus: Option<Vec<u32>> = None;
    let mut current = "";
    for tok in text.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
        let value = match tok.split_once('=') {
            Some((k, v)) => {
                current = k.trim();
                v.trim()
            }
            None => tok,
        };
        if value.is_empty() {
            continue;
        }
        let num: u64 = value.parse().map_err(|_| Error::parse(0, format!("bad number {value:?} in field")))?;
        match current {
            "p" if p.is_none() => p = Some(num),
            "e" if e.is_none() => e = Some(u32::try_from(num).map_err(|_| Error::parse(0, "e too large"))?),
            "modulus" => modulus.get_or_insert_with(Vec::new).push(num as u32),
            "" => return Err(Error::parse(0, format!("value {value:?} without a key in field"))),
            k => return Err(Error::parse(0, format!("unexpected field key {k:?}"))),
        }
    }
    let p = p.ok_or_else(|| Error::parse(0, "field needs p=..."))?;
    Ok(FieldSpec { p, e: e.unwrap_or(1), modulus })
}
