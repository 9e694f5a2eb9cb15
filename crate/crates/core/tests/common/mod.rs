//! Seeded random instances shared by the integration suites.

#![allow(dead_code)]

use christol::gf::{make_field, FieldCtx, Fq};
use christol::polynomial::BPoly;
use christol::prep::{degree_height, root_prefixes, MinimalData};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn field(q: u32) -> FieldCtx {
    match q {
        2 => make_field(2, 1, None).unwrap(),
        3 => make_field(3, 1, None).unwrap(),
        4 => make_field(2, 2, None).unwrap(),
        _ => panic!("unsupported corpus field {q}"),
    }
}

/// A polynomial with `deg_y = d` and `deg_x = h` exactly; each other monomial is present
/// with probability `density`.
pub fn random_poly(rng: &mut ChaCha8Rng, f: &FieldCtx, d: u32, h: u32, density: f64) -> BPoly {
    let q = f.q();
    let nonzero = |rng: &mut ChaCha8Rng| f.elem(rng.gen_range(1..q)).unwrap();
    let mut p = BPoly::zero(f);
    for i in 0..=h {
        for j in 0..=d {
            if rng.gen_bool(density) {
                p.add_term(i, j, nonzero(rng));
            }
        }
    }
    let i = rng.gen_range(0..=h);
    p.add_term(i, d, nonzero(rng));
    let j = rng.gen_range(0..=d);
    p.add_term(h, j, nonzero(rng));
    p
}

pub struct Instance {
    pub md: MinimalData,
    pub prefix: Vec<Fq>,
}

/// Draws until a separable polynomial with the exact degrees and a power-series root appears.
pub fn random_instance(rng: &mut ChaCha8Rng, q: u32, d: u32, h: u32) -> Instance {
    let f = field(q);
    loop {
        let p = random_poly(rng, &f, d, h, 0.5);
        if p.deg_y() != Some(d) || p.deg_x() != Some(h) {
            continue;
        }
        let Ok(md) = degree_height(&p) else { continue };
        let Ok((_, roots)) = root_prefixes(&md) else { continue };
        if roots.is_empty() {
            continue;
        }
        let prefix = roots[rng.gen_range(0..roots.len())].clone();
        return Instance { md, prefix };
    }
}
