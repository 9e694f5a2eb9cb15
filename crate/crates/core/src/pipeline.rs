//! End-to-end compilation of one root into automata, with bounds and self-verification.

use serde::Serialize;

use crate::automaton::{forward_construct, krylov_span, orbit_closure, Dfao, LinearRep, Orbit, DEFAULT_STATE_CAP};
use crate::bounds::{compute_bounds, BoundSet};
use crate::cartier::KernelSpace;
use crate::error::{Error, Result};
use crate::gf::Fq;
use crate::polynomial::newton_interior;
use crate::prep::{prepare, root_prefixes, MinimalData, Preparation};
use crate::series::{expand_root, kernel_oracle_series};

#[derive(Clone, Debug)]
pub struct Options {
    /// Coefficients handed to the brute-force kernel oracle.
    pub precision: usize,
    /// Minimum agreement length for the oracle to identify two subsequences.
    pub lmin: usize,
    /// Compare the automata with the expanded root for `n < verify`; 0 skips all checking.
    pub verify: usize,
    pub forward: bool,
    pub state_cap: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { precision: 4096, lmin: 16, verify: 4096, forward: false, state_cap: DEFAULT_STATE_CAP }
    }
}

#[derive(Clone, Debug)]
pub enum RootChoice {
    Prefix(Vec<Fq>),
    Index(usize),
    /// Accepted only when exactly one root exists.
    Unique,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub horizon: usize,
    pub agree: bool,
    pub oracle_count: usize,
    pub oracle_exact: bool,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub p: u32,
    pub e: u32,
    pub q: u32,
    pub d: u32,
    pub h: u32,
    pub r: usize,
    pub s: u32,
    #[serde(rename = "g_P")]
    pub g_p: u64,
    pub smooth: bool,
    pub states_raw: usize,
    pub comp_reverse: usize,
    pub comp_forward: Option<usize>,
    pub span_dim: usize,
    pub bounds: BoundSet,
    pub verification: Option<Verification>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    /// The size bound that applies to the minimal reverse automaton.
    pub fn applicable_bound(&self) -> &crate::bounds::PowerBound {
        self.bounds.smooth_bound.as_ref().unwrap_or(&self.bounds.general_bound)
    }
}

#[derive(Clone, Debug)]
pub struct Compiled {
    pub prep: Preparation,
    pub space: KernelSpace,
    pub orbit: Orbit,
    pub reverse: Dfao,
    pub linear: LinearRep,
    pub forward: Option<Dfao>,
    pub report: Report,
}

pub fn select_root(md: &MinimalData, choice: &RootChoice) -> Result<Vec<Fq>> {
    if let RootChoice::Prefix(p) = choice {
        return Ok(p.clone());
    }
    let (_, roots) = root_prefixes(md)?;
    match choice {
        RootChoice::Index(k) => roots
            .get(*k)
            .cloned()
            .ok_or_else(|| Error::RootSelection(format!("root index {k} out of range ({} roots)", roots.len()))),
        _ if roots.len() == 1 => Ok(roots[0].clone()),
        _ if roots.is_empty() => Err(Error::RootSelection("no power-series root".into())),
        _ => Err(Error::RootSelection(format!("{} roots; choose one by index or prefix", roots.len()))),
    }
}

pub fn compile(md: &MinimalData, prefix: &[Fq], opts: &Options) -> Result<Compiled> {
    let field = md.field().clone();
    let q = field.q();
    let prep = prepare(md, prefix)?;
    let space = KernelSpace::new(&prep)?;
    let orbit = orbit_closure(&space, opts.state_cap)?;
    let reverse = orbit.raw.minimize();
    let linear = krylov_span(&space)?;
    let forward =
        if opts.forward { Some(forward_construct(&space, &linear, opts.state_cap)?.minimize()) } else { None };
    let g_p = newton_interior(&md.poly);
    let bounds = compute_bounds(q as u64, md.d as u64, md.h as u64, prep.r as u64, prep.t0, g_p, prep.smooth);
    let verification = if opts.verify == 0 { None } else { Some(verify(&prep, &reverse, forward.as_ref(), opts)?) };
    let report = Report {
        p: field.p(),
        e: field.e(),
        q,
        d: md.d,
        h: md.h,
        r: prep.r,
        s: prep.s,
        g_p,
        smooth: prep.smooth,
        states_raw: orbit.raw.n_states(),
        comp_reverse: reverse.n_states(),
        comp_forward: forward.as_ref().map(Dfao::n_states),
        span_dim: linear.dim(),
        bounds,
        verification,
    };
    Ok(Compiled { prep, space, orbit, reverse, linear, forward, report })
}

fn verify(prep: &Preparation, reverse: &Dfao, forward: Option<&Dfao>, opts: &Options) -> Result<Verification> {
    let horizon = opts.verify;
    let f = expand_root(&prep.md.poly, &prep.prefix, horizon.max(opts.precision))?;
    let agree = (0..horizon).all(|n| {
        let a = f.coeffs()[n];
        reverse.eval(n as u64) == a && forward.is_none_or(|fw| fw.eval(n as u64) == a)
    });
    let oracle = kernel_oracle_series(&f.truncate(opts.precision)?, opts.lmin)?;
    Ok(Verification {
        horizon,
        agree,
        oracle_count: oracle.count,
        oracle_exact: oracle.exact,
        ok: agree && oracle.exact && oracle.count == reverse.n_states(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;
    use crate::polynomial::parse_poly;
    use crate::prep::degree_height;

    fn md(p: u64, text: &str) -> MinimalData {
        let f = make_field(p, 1, None).unwrap();
        degree_height(&parse_poly(&f, text).unwrap()).unwrap()
    }

    #[test]
    fn report_for_sum_of_powers_of_two() {
        let md = md(2, "y^2+y+x");
        let prefix = select_root(&md, &RootChoice::Index(0)).unwrap();
        let c = compile(&md, &prefix, &Options { forward: true, ..Options::default() }).unwrap();
        let r = &c.report;
        assert_eq!((r.d, r.h, r.r, r.comp_reverse), (2, 1, 0, 3));
        assert!(r.smooth);
        assert_eq!(r.bounds.smooth_bound.unwrap().to_u64(), Some(17));
        assert!(r.verification.as_ref().unwrap().ok);
        let json = r.to_json();
        let keys = [
            "\"p\"",
            "\"e\"",
            "\"q\"",
            "\"d\"",
            "\"h\"",
            "\"r\"",
            "\"s\"",
            "\"g_P\"",
            "\"smooth\"",
            "\"states_raw\"",
            "\"comp_reverse\"",
            "\"comp_forward\"",
            "\"span_dim\"",
            "\"bounds\"",
            "\"verification\"",
        ];
        let pos: Vec<usize> = keys.iter().map(|k| json.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]), "{json}");
    }

    #[test]
    fn shifted_report() {
        let md = md(2, "y^2+x*y+x^3");
        let prefix = select_root(&md, &RootChoice::Index(0)).unwrap();
        let c = compile(&md, &prefix, &Options::default()).unwrap();
        assert_eq!((c.report.r, c.report.s, c.report.comp_reverse), (2, 3, 5));
        assert_eq!(c.report.bounds.general_bound.to_u64(), Some(514));
        assert!(c.report.verification.unwrap().ok);
    }

    #[test]
    fn root_selection() {
        let two = md(2, "y^2+y+x");
        assert!(matches!(select_root(&two, &RootChoice::Unique), Err(Error::RootSelection(_))));
        assert!(matches!(select_root(&two, &RootChoice::Index(2)), Err(Error::RootSelection(_))));
        let one = md(2, "(1+x)*y+x");
        assert_eq!(select_root(&one, &RootChoice::Unique).unwrap(), vec![Fq::ZERO]);
        let none = md(2, "y^2+x*y+x");
        assert!(matches!(select_root(&none, &RootChoice::Unique), Err(Error::RootSelection(_))));
    }

    #[test]
    fn skipping_verification() {
        let md = md(3, "y^2-(1+x)");
        let c = compile(&md, &[Fq::ONE], &Options { verify: 0, ..Options::default() }).unwrap();
        assert_eq!(c.report.verification, None);
        assert!(c.report.to_json().contains("\"verification\": null"));
    }
}
