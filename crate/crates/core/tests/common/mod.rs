#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rds_core::{Instance, Realization};

pub fn diag(k: usize) -> Instance {
    let m: Vec<_> = (0..k).map(|i| (i, i)).collect();
    Instance::bipartite(&vec![1; k], &vec![1; k], None, &[], &m).unwrap()
}

pub fn f1() -> Instance {
    Instance::bipartite(&[1, 1], &[1, 1], None, &[], &[(0, 0), (1, 1)]).unwrap()
}

pub fn f2() -> Instance {
    diag(3)
}

pub fn f3() -> Instance {
    diag(4)
}

pub fn f4() -> Instance {
    Instance::bipartite(&[1, 2, 2], &[2, 2, 1], Some(0), &[0], &[(1, 1), (2, 2)]).unwrap()
}

pub fn f5() -> Instance {
    Instance::bipartite(&[2, 1], &[1, 2], None, &[], &[(0, 0), (1, 1)]).unwrap()
}

pub fn local(inst: &Instance, e: &[(usize, usize)]) -> Realization {
    Realization::from_local_edges(inst, e).unwrap()
}

/// A random half-regular star+factor instance on `nu x nw`, built from a
/// random graph avoiding a random star at u0 and a random matching, so it
/// is always graphical.
pub fn random_half_regular(nu: usize, nw: usize, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let leaves: Vec<usize> = (0..nw).filter(|_| rng.gen_bool(0.3)).collect();
    let mut ws: Vec<usize> = (0..nw).collect();
    ws.shuffle(&mut rng);
    let mut matching = Vec::new();
    for u in 0..nu {
        if rng.gen_bool(0.6) && u < ws.len() {
            matching.push((u, ws[u]));
        }
    }
    let forbidden = |u: usize, w: usize| (u == 0 && leaves.contains(&w)) || matching.contains(&(u, w));
    let options = |u: usize| (0..nw).filter(|&w| !forbidden(u, w)).collect::<Vec<_>>();
    let min_opts = (1..nu).map(|u| options(u).len()).min().unwrap_or(0);
    let d = rng.gen_range(1..=min_opts.clamp(1, 3));
    let mut udeg = Vec::with_capacity(nu);
    let mut wdeg = vec![0; nw];
    for u in 0..nu {
        let mut o = options(u);
        o.shuffle(&mut rng);
        let k = if u == 0 { rng.gen_range(0..=o.len().min(3)) } else { d.min(o.len()) };
        for &w in &o[..k] {
            wdeg[w] += 1;
        }
        udeg.push(k);
    }
    Instance::bipartite(&udeg, &wdeg, Some(0), &leaves, &matching).unwrap()
}
