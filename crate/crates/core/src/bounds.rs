//! Closed-form upper bounds on automaton sizes.

use num_bigint::BigUint;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

/// `base^exponent + addend`, kept symbolic so huge values stay cheap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PowerBound {
    pub base: u64,
    pub exponent: u64,
    pub addend: u64,
}

impl PowerBound {
    pub fn value(&self) -> BigUint {
        BigUint::from(self.base).pow(self.exponent as u32) + self.addend
    }

    pub fn to_u64(&self) -> Option<u64> {
        let e = u32::try_from(self.exponent).ok()?;
        self.base.checked_pow(e)?.checked_add(self.addend)
    }

    /// Whether `n` is at most this bound.
    pub fn admits(&self, n: u64) -> bool {
        match self.to_u64() {
            Some(v) => n <= v,
            None => true,
        }
    }
}

impl Serialize for PowerBound {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if let Some(v) = self.to_u64() {
            return s.serialize_u64(v);
        }
        let mut st = s.serialize_struct("PowerBound", 3)?;
        st.serialize_field("base", &self.base)?;
        st.serialize_field("exponent", &self.exponent)?;
        st.serialize_field("addend", &self.addend)?;
        st.end()
    }
}

fn serialize_big<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    match u64::try_from(v) {
        Ok(small) => s.serialize_u64(small),
        Err(_) => s.serialize_str(&v.to_string()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundSet {
    /// Present only for roots with `a_0 = 0` and `dP/dy(0, 0) != 0`.
    pub smooth_bound: Option<PowerBound>,
    pub general_bound: PowerBound,
    /// Exponents of `q` bounding the forward-reading automaton.
    pub forward_smooth: u64,
    pub forward_general: u64,
    pub forward_general_worstcase: u64,
    /// Exponent of `q` in the classical bound through an Ore relation.
    #[serde(serialize_with = "serialize_big")]
    pub ore_baseline_exponent: BigUint,
    pub bridy_exponent: i64,
    pub bridy_rect_exponent: u64,
    #[serde(rename = "riemann_gP_cap")]
    pub riemann_gp_cap: i64,
}

/// `floor(log_q r)`, or `-1` for `r = 0`.
pub fn t0_of(q: u64, r: u64) -> i64 {
    if r == 0 {
        return -1;
    }
    let mut t = 0;
    let mut power = q;
    while power <= r {
        t += 1;
        power = match power.checked_mul(q) {
            Some(v) => v,
            None => break,
        };
    }
    t
}

pub fn compute_bounds(q: u64, d: u64, h: u64, r: u64, t0: i64, g_p: u64, smooth: bool) -> BoundSet {
    let e = (h + 1) * d;
    let smooth_bound = smooth.then_some(PowerBound { base: q, exponent: e, addend: 1 });
    let addend = if r == 0 { 0 } else { q.pow(t0.max(0) as u32) };
    let general_bound = PowerBound { base: q, exponent: e + 1, addend };
    let qd = BigUint::from(q).pow(d as u32);
    let ore_baseline_exponent = BigUint::from(d) * (BigUint::from(4 * h) * qd + 1u32);
    let (d, h, g) = (d as i64, h as i64, g_p as i64);
    BoundSet {
        smooth_bound,
        general_bound,
        forward_smooth: 1 + e,
        forward_general: 1 + e + r,
        forward_general_worstcase: ((3 * h + 1) * d - h + 1) as u64,
        ore_baseline_exponent,
        bridy_exponent: h + d + g - 1,
        bridy_rect_exponent: (h * d) as u64,
        riemann_gp_cap: (h - 1) * (d - 1),
    }
}
