//! Automata from kernel states: the reverse orbit and the forward dual.

use std::collections::{HashMap, VecDeque};

use indexmap::IndexSet;

use crate::cartier::{Echelon, KernelSpace, KernelState};
use crate::error::{Error, Result};
use crate::gf::Fq;

use super::{Dfao, Reading};

pub const DEFAULT_STATE_CAP: usize = 1_000_000;

#[derive(Clone, Debug)]
pub struct Orbit {
    /// Reached states in discovery order; state `k` of `raw` is `states[k]`.
    pub states: Vec<KernelState>,
    pub raw: Dfao,
}

/// Breadth-first closure of the initial state under all digit transitions.
pub fn orbit_closure(space: &KernelSpace, cap: usize) -> Result<Orbit> {
    let q = space.field().q();
    let mut seen: IndexSet<KernelState> = IndexSet::new();
    seen.insert(space.initial().clone());
    let mut delta: Vec<Vec<usize>> = Vec::new();
    let mut next = 0;
    while next < seen.len() {
        let mut row = Vec::with_capacity(q as usize);
        for l in 0..q {
            let t = space.transition(&seen[next], l)?;
            let (id, _) = seen.insert_full(t);
            row.push(id);
        }
        if seen.len() > cap {
            return Err(Error::StateExplosion(cap));
        }
        delta.push(row);
        next += 1;
    }
    let states: Vec<KernelState> = seen.into_iter().collect();
    let out = states.iter().map(|s| space.output(s)).collect();
    let raw = Dfao::new(space.field(), Reading::Reverse, 0, delta, out)?;
    Ok(Orbit { states, raw })
}

/// The digit action restricted to the span of the orbit, in a basis of orbit states.
#[derive(Clone, Debug)]
pub struct LinearRep {
    pub basis: Vec<KernelState>,
    /// `matrices[l][j][k]`: coordinate `j` of the image of basis state `k` under digit `l`.
    pub matrices: Vec<Vec<Vec<Fq>>>,
    /// Outputs of the basis states.
    pub outputs: Vec<Fq>,
}

impl LinearRep {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Krylov basis of the orbit span: images of basis states, kept when independent.
///
/// Linearity of the transitions makes this span equal to the span of the whole orbit.
pub fn krylov_span(space: &KernelSpace) -> Result<LinearRep> {
    let field = space.field();
    let q = field.q() as usize;
    let mut ech = Echelon::new(field);
    let mut basis = Vec::new();
    if ech.insert(space.initial().as_slice()).1 {
        basis.push(space.initial().clone());
    }
    let mut images: Vec<Vec<Vec<Fq>>> = Vec::new();
    let mut k = 0;
    while k < basis.len() {
        let mut row = Vec::with_capacity(q);
        for l in 0..q {
            let t = space.transition(&basis[k], l as u32)?;
            let (coords, new) = ech.insert(t.as_slice());
            if new {
                basis.push(t);
            }
            row.push(coords);
        }
        images.push(row);
        k += 1;
    }
    let m = basis.len();
    let mut matrices = vec![vec![vec![Fq::ZERO; m]; m]; q];
    for (k, row) in images.iter().enumerate() {
        for (l, coords) in row.iter().enumerate() {
            for (j, &c) in coords.iter().enumerate() {
                matrices[l][j][k] = c;
            }
        }
    }
    let outputs = basis.iter().map(|s| space.output(s)).collect();
    Ok(LinearRep { basis, matrices, outputs })
}

/// Forward-reading automaton over the functionals `psi_0 M_{w_1} ... M_{w_k}`.
///
/// The initial state is the first basis vector (when the orbit is nonzero), so the output of a
/// functional is its first coordinate.
pub fn forward_construct(space: &KernelSpace, rep: &LinearRep, cap: usize) -> Result<Dfao> {
    let field = space.field();
    let q = field.q();
    let m = rep.dim();
    let apply =
        |psi: &[Fq], l: usize| -> Vec<Fq> {
            let mat = &rep.matrices[l];
            (0..m)
                .map(|k| {
                    (0..m).fold(Fq::ZERO, |acc, j| {
                        if psi[j].is_zero() {
                            acc
                        } else {
                            field.add(acc, field.mul(psi[j], mat[j][k]))
                        }
                    })
                })
                .collect()
        };
    let psi0 = rep.outputs.clone();
    if apply(&psi0, 0) != psi0 {
        return Err(Error::InvariantBreach("digit 0 changes the output functional".into()));
    }
    let mut ids: HashMap<Vec<Fq>, usize> = HashMap::from([(psi0.clone(), 0)]);
    let mut funcs = vec![psi0];
    let mut delta = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        let mut row = Vec::with_capacity(q as usize);
        for l in 0..q as usize {
            let img = apply(&funcs[s], l);
            let next = ids.len();
            let id = *ids.entry(img.clone()).or_insert_with(|| {
                funcs.push(img);
                queue.push_back(next);
                next
            });
            row.push(id);
        }
        if funcs.len() > cap {
            return Err(Error::StateExplosion(cap));
        }
        delta.push(row);
    }
    let out = funcs.iter().map(|psi| psi.first().copied().unwrap_or(Fq::ZERO)).collect();
    Dfao::new(field, Reading::Forward, 0, delta, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartier::state_vectorize;
    use crate::gf::make_field;
    use crate::polynomial::parse_poly;
    use crate::prep::{degree_height, prepare, root_prefixes};
    use crate::series::expand_root;

    fn build(p: u64, e: u32, text: &str) -> (crate::prep::Preparation, KernelSpace) {
        let f = make_field(p, e, None).unwrap();
        let md = degree_height(&parse_poly(&f, text).unwrap()).unwrap();
        let prefix = root_prefixes(&md).unwrap().1[0].clone();
        let prep = prepare(&md, &prefix).unwrap();
        let space = KernelSpace::new(&prep).unwrap();
        (prep, space)
    }

    #[test]
    fn desk_instances() {
        for (text, comp) in [("y^2+y+x", 3), ("(1+x)^3*y^2+(1+x)^2*y+x", 2), ("y^2+x*y+x^3", 5), ("(1+x)*y+x", 2)] {
            let (prep, space) = build(2, 1, text);
            let orbit = orbit_closure(&space, DEFAULT_STATE_CAP).unwrap();
            assert!(orbit.raw.n_states() >= comp);
            let rev = orbit.raw.minimize();
            assert_eq!(rev.n_states(), comp, "{text}");
            let rep = krylov_span(&space).unwrap();
            let fwd = forward_construct(&space, &rep, DEFAULT_STATE_CAP).unwrap().minimize();
            assert!(fwd.n_states() <= 2usize.pow(rep.dim() as u32));
            let f = expand_root(&prep.md.poly, &prep.prefix, 1024).unwrap();
            for n in 0..1024 {
                assert_eq!(rev.eval(n as u64), f.coeffs()[n], "{text} at {n}");
                assert_eq!(fwd.eval(n as u64), f.coeffs()[n], "{text} at {n}");
            }
        }
    }

    #[test]
    fn rational_instance_sequence() {
        let (_, space) = build(2, 1, "(1+x)*y+x");
        let raw = orbit_closure(&space, DEFAULT_STATE_CAP).unwrap().raw;
        let seq: Vec<u32> = (0..6).map(|n| raw.eval(n).index()).collect();
        assert_eq!(seq, vec![0, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn sum_of_powers_of_two_values() {
        let (_, space) = build(2, 1, "y^2+y+x");
        let rev = orbit_closure(&space, DEFAULT_STATE_CAP).unwrap().raw.minimize();
        assert_eq!(rev.eval(8), Fq::ONE);
        assert_eq!(rev.eval(6), Fq::ZERO);
        assert_eq!(rev.eval(0), rev.outputs()[rev.initial()]);
    }

    #[test]
    fn zero_initial_state() {
        let (_, space) = build(2, 1, "y^2+y+x");
        let space = space.with_initial(space.zero_state()).unwrap();
        let orbit = orbit_closure(&space, DEFAULT_STATE_CAP).unwrap();
        assert_eq!(orbit.raw.n_states(), 1);
        assert_eq!(orbit.raw.delta(), &[vec![0, 0]]);
        assert_eq!(orbit.raw.outputs(), &[Fq::ZERO]);
        let rep = krylov_span(&space).unwrap();
        assert_eq!(rep.dim(), 0);
        let fwd = forward_construct(&space, &rep, DEFAULT_STATE_CAP).unwrap();
        assert_eq!(fwd.n_states(), 1);
    }

    #[test]
    fn krylov_span_matches_full_elimination() {
        for text in ["y^2+x*y+x^3", "(1+x)^3*y^2+(1+x)^2*y+x", "y^3+y+x", "x*y^3+(1+x)*y^2+y+x^2"] {
            let (_, space) = build(2, 1, text);
            let orbit = orbit_closure(&space, DEFAULT_STATE_CAP).unwrap();
            let full = state_vectorize(space.field(), &orbit.states);
            assert_eq!(krylov_span(&space).unwrap().dim(), full.basis.len(), "{text}");
        }
        let (_, space) = build(2, 1, "(1+x)^3*y^2+(1+x)^2*y+x");
        assert!(krylov_span(&space).unwrap().dim() <= 9);
    }

    #[test]
    fn state_cap() {
        let (_, space) = build(2, 1, "y^2+x*y+x^3");
        assert_eq!(orbit_closure(&space, 2).unwrap_err(), Error::StateExplosion(2));
    }

    #[test]
    fn extension_field_instance() {
        let (prep, space) = build(2, 2, "g*y^2+(1+x)*y+x^2*g+x");
        let rev = orbit_closure(&space, DEFAULT_STATE_CAP).unwrap().raw.minimize();
        let f = expand_root(&prep.md.poly, &prep.prefix, 512).unwrap();
        for n in 0..512 {
            assert_eq!(rev.eval(n as u64), f.coeffs()[n]);
        }
    }
}
