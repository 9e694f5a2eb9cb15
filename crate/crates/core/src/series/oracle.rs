//! Brute-force q-kernel of a truncated series.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::gf::Fq;
use crate::polynomial::BPoly;

use super::{cartier1, expand_root, TruncSeries};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub count: usize,
    /// False when some identification or some class rests on fewer than `lmin` coefficients.
    pub exact: bool,
    /// One representative per class, in discovery order.
    pub truncations: Vec<TruncSeries>,
}

/// Kernel closure of the root of `p` starting with `prefix`, expanded to `n` coefficients.
pub fn kernel_oracle(p: &BPoly, prefix: &[Fq], n: usize, lmin: usize) -> Result<OracleResult> {
    let q = p.field().q() as usize;
    if lmin == 0 || n < q * lmin {
        return Err(Error::PrecisionExhausted);
    }
    kernel_oracle_series(&expand_root(p, prefix, n)?, lmin)
}

/// Breadth-first closure of `f` under all `cartier1` digits (digits ascending, FIFO).
///
/// A child joins the first class whose representative agrees with it on their common
/// prefix. Children known to fewer than `lmin` coefficients are not expanded further.
pub fn kernel_oracle_series(f: &TruncSeries, lmin: usize) -> Result<OracleResult> {
    if lmin == 0 {
        return Err(Error::PrecisionExhausted);
    }
    let q = f.field().q();
    let mut exact = f.prec() >= lmin;
    let mut classes: Vec<TruncSeries> = vec![f.clone()];
    let mut buckets: HashMap<Vec<Fq>, Vec<usize>> = HashMap::new();
    if f.prec() >= lmin {
        buckets.insert(f.coeffs()[..lmin].to_vec(), vec![0]);
    }
    let mut queue = VecDeque::from([0usize]);
    while let Some(idx) = queue.pop_front() {
        if classes[idx].prec() < lmin {
            continue;
        }
        for digit in 0..q {
            let child = cartier1(&classes[idx], digit)?;
            let agrees = |rep: &TruncSeries| {
                let k = rep.prec().min(child.prec());
                rep.coeffs()[..k] == child.coeffs()[..k]
            };
            let found = if child.prec() >= lmin {
                buckets.get(&child.coeffs()[..lmin]).and_then(|b| b.iter().copied().find(|&c| agrees(&classes[c])))
            } else {
                classes.iter().position(agrees)
            };
            match found {
                Some(c) => {
                    if classes[c].prec().min(child.prec()) < lmin {
                        exact = false;
                    }
                }
                None => {
                    let id = classes.len();
                    if child.prec() >= lmin {
                        buckets.entry(child.coeffs()[..lmin].to_vec()).or_default().push(id);
                    } else {
                        exact = false;
                    }
                    classes.push(child);
                    queue.push_back(id);
                }
            }
        }
    }
    Ok(OracleResult { count: classes.len(), exact, truncations: classes })
}
