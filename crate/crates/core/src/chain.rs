//! The lazy C4/C6 chain on realizations of a bipartite instance.
//!
//! Each step keeps the state with probability 1/2. Otherwise it draws an
//! unordered pair from `U` and one from `W` (probability 1/4) and performs
//! the C4 swap on them if there is one, or draws unordered triples
//! (probability 1/4) and performs the F-compatible C6 swap if there is one.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::{Instance, VertexId};
use crate::oracle;
use crate::realization::Realization;
use crate::swaps::{find_c4_swap, find_c6_fswap, CircularSwap};
use crate::{binomial, Prob};

/// Default cap on the number of states for [`exact_kernel`].
pub const DEFAULT_MAX_STATES: usize = 5000;

/// Heuristic burn-in `20 (|U| + |W|)^2`.
pub fn default_burn_in(inst: &Instance) -> u64 {
    let n = inst.n() as u64;
    20 * n * n
}

/// One draw of the proposal kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Proposal {
    Lazy,
    Pair {
        us: (VertexId, VertexId),
        ws: (VertexId, VertexId),
    },
    Triple {
        us: [VertexId; 3],
        ws: [VertexId; 3],
    },
    /// The triple branch on an instance with a class smaller than three.
    TripleUnavailable,
}

/// The swap a proposal performs in `real`, or `None` for a self-loop.
pub fn apply_proposal(inst: &Instance, real: &Realization, p: &Proposal) -> Option<CircularSwap> {
    match *p {
        Proposal::Lazy | Proposal::TripleUnavailable => None,
        Proposal::Pair { us, ws } => find_c4_swap(inst, real, us, ws),
        Proposal::Triple { us, ws } => find_c6_fswap(inst, real, us, ws),
    }
}

fn check_chain_instance(inst: &Instance) -> Result<()> {
    if !inst.is_bipartite() {
        return Err(Error::NotBipartite);
    }
    if inst.u_size() < 2 || inst.w_size() < 2 {
        return Err(Error::InstanceTooSmall);
    }
    Ok(())
}

/// Uniform unordered pair from `0..n`, sorted.
fn draw_pair<R: Rng>(rng: &mut R, n: usize) -> (usize, usize) {
    let a = rng.gen_range(0..n);
    let mut b = rng.gen_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    (a.min(b), a.max(b))
}

/// Uniform unordered triple from `0..n`, sorted.
fn draw_triple<R: Rng>(rng: &mut R, n: usize) -> [usize; 3] {
    let (a, b) = draw_pair(rng, n);
    let mut c = rng.gen_range(0..n - 2);
    if c >= a {
        c += 1;
    }
    if c >= b {
        c += 1;
    }
    let mut t = [a, b, c];
    t.sort_unstable();
    t
}

/// Draws a proposal without looking at the current state.
pub fn draw_proposal<R: Rng>(inst: &Instance, rng: &mut R) -> Proposal {
    let (nu, nw, off) = (inst.u_size(), inst.w_size(), inst.u_size());
    match rng.gen_range(0..4u8) {
        0 | 1 => Proposal::Lazy,
        2 => {
            let us = draw_pair(rng, nu);
            let (a, b) = draw_pair(rng, nw);
            Proposal::Pair { us, ws: (a + off, b + off) }
        }
        _ if nu < 3 || nw < 3 => Proposal::TripleUnavailable,
        _ => {
            let us = draw_triple(rng, nu);
            let ws = draw_triple(rng, nw).map(|j| j + off);
            Proposal::Triple { us, ws }
        }
    }
}

/// A single chain: current realization, step counter and random stream.
#[derive(Clone, Debug)]
pub struct ChainState {
    real: Realization,
    steps: u64,
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl ChainState {
    pub fn new(start: Realization, seed: u64) -> Self {
        ChainState::with_stream(start, seed, 0)
    }

    /// Chains sharing a seed but using different streams are independent.
    pub fn with_stream(start: Realization, seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        ChainState { real: start, steps: 0, seed, stream, rng }
    }

    pub fn realization(&self) -> &Realization {
        &self.real
    }

    pub fn into_realization(self) -> Realization {
        self.real
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }
}

/// Performs one step. Returns the proposal drawn and whether the state moved.
pub fn propose_step(inst: &Instance, state: &mut ChainState) -> Result<(Proposal, bool)> {
    check_chain_instance(inst)?;
    Ok(step_unchecked(inst, state))
}

fn step_unchecked(inst: &Instance, state: &mut ChainState) -> (Proposal, bool) {
    let p = draw_proposal(inst, &mut state.rng);
    state.steps += 1;
    match apply_proposal(inst, &state.real, &p) {
        Some(sw) => {
            state.real = sw.apply(inst, &state.real).expect("proposal swaps alternate");
            (p, true)
        }
        None => (p, false),
    }
}

/// Advances `state` by `steps` proposals.
pub fn advance(inst: &Instance, state: &mut ChainState, steps: u64) -> Result<()> {
    check_chain_instance(inst)?;
    for _ in 0..steps {
        step_unchecked(inst, state);
    }
    Ok(())
}

/// State after `steps` proposals from `start`.
pub fn run_chain(inst: &Instance, start: &Realization, steps: u64, seed: u64) -> Result<Realization> {
    start.validate(inst)?;
    let mut state = ChainState::new(start.clone(), seed);
    advance(inst, &mut state, steps)?;
    Ok(state.into_realization())
}

/// Exact probability of the single move from `g` to `h`.
pub fn jump_probability(inst: &Instance, g: &Realization, h: &Realization) -> Result<Prob> {
    check_chain_instance(inst)?;
    let delta = g.symmetric_difference(h);
    let mut us: Vec<VertexId> = delta.iter().map(|e| e.0).collect();
    let mut ws: Vec<VertexId> = delta.iter().map(|e| e.1).collect();
    us.sort_unstable();
    us.dedup();
    ws.sort_unstable();
    ws.dedup();
    let (nu, nw) = (inst.u_size(), inst.w_size());
    let (swap, denom) = match (delta.len(), us.len(), ws.len()) {
        (4, 2, 2) => (find_c4_swap(inst, g, (us[0], us[1]), (ws[0], ws[1])), binomial(nu, 2) * binomial(nw, 2)),
        (6, 3, 3) => {
            (find_c6_fswap(inst, g, [us[0], us[1], us[2]], [ws[0], ws[1], ws[2]]), binomial(nu, 3) * binomial(nw, 3))
        }
        _ => return Err(Error::NotAdjacent),
    };
    match swap {
        Some(sw) if sw.apply(inst, g)? == *h => Ok(Prob::new(1, 4 * denom)),
        _ => Err(Error::NotAdjacent),
    }
}

/// Exact transition matrix of the chain with its diagnostics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelReport {
    pub states: Vec<Realization>,
    pub matrix: Vec<Vec<Prob>>,
    /// `max |P(G,H) - P(H,G)|`.
    pub symmetry_residual: Prob,
    /// `max |Σ_H P(G,H) - 1|`.
    pub row_sum_residual: Prob,
    pub min_diagonal: Prob,
    /// `max |(π P)(H) - π(H)|` for the uniform `π`.
    pub stationary_residual: Prob,
    /// Whether every off-diagonal entry equals [`jump_probability`].
    pub jump_probabilities_agree: bool,
    pub half_regular: bool,
}

impl KernelReport {
    pub fn is_symmetric(&self) -> bool {
        self.symmetry_residual.is_zero()
    }

    pub fn is_lazy(&self) -> bool {
        self.min_diagonal >= Prob::new(1, 2)
    }

    pub fn is_uniform_stationary(&self) -> bool {
        self.stationary_residual.is_zero()
    }
}

fn abs_diff(a: Prob, b: Prob) -> Prob {
    if a > b {
        a - b
    } else {
        b - a
    }
}

/// Enumerates every state and every proposal from it.
pub fn exact_kernel(inst: &Instance, max_states: usize) -> Result<KernelReport> {
    check_chain_instance(inst)?;
    let states = oracle::enumerate_bounded(inst, oracle::DEFAULT_MAX_CHORDS, max_states)?;
    let index: BTreeMap<&Realization, usize> = states.iter().enumerate().map(|(i, r)| (r, i)).collect();
    let (nu, nw) = (inst.u_size(), inst.w_size());
    let us: Vec<VertexId> = inst.u_vertices().collect();
    let ws: Vec<VertexId> = inst.w_vertices().collect();
    let pair_p = Prob::new(1, 4 * binomial(nu, 2) * binomial(nw, 2));
    let triple_p = if nu >= 3 && nw >= 3 { Some(Prob::new(1, 4 * binomial(nu, 3) * binomial(nw, 3))) } else { None };
    let n = states.len();
    let mut matrix = vec![vec![Prob::zero(); n]; n];
    for (i, g) in states.iter().enumerate() {
        let mut pair_hits: BTreeMap<usize, u128> = BTreeMap::new();
        let mut triple_hits: BTreeMap<usize, u128> = BTreeMap::new();
        for (a, &u0) in us.iter().enumerate() {
            for &u1 in &us[a + 1..] {
                for (c, &w0) in ws.iter().enumerate() {
                    for &w1 in &ws[c + 1..] {
                        let p = Proposal::Pair { us: (u0, u1), ws: (w0, w1) };
                        if let Some(sw) = apply_proposal(inst, g, &p) {
                            *pair_hits.entry(index[&sw.apply(inst, g)?]).or_default() += 1;
                        }
                    }
                }
            }
        }
        if triple_p.is_some() {
            for ut in triples(&us) {
                for wt in triples(&ws) {
                    let p = Proposal::Triple { us: ut, ws: wt };
                    if let Some(sw) = apply_proposal(inst, g, &p) {
                        *triple_hits.entry(index[&sw.apply(inst, g)?]).or_default() += 1;
                    }
                }
            }
        }
        let row = &mut matrix[i];
        for (j, k) in pair_hits {
            row[j] += pair_p * Prob::from_integer(k);
        }
        if let Some(tp) = triple_p {
            for (j, k) in triple_hits {
                row[j] += tp * Prob::from_integer(k);
            }
        }
        let off: Prob = row.iter().enumerate().filter(|&(j, _)| j != i).fold(Prob::zero(), |acc, (_, &p)| acc + p);
        row[i] = Prob::one() - off;
    }

    let mut symmetry_residual = Prob::zero();
    let mut row_sum_residual = Prob::zero();
    let mut stationary_residual = Prob::zero();
    let mut min_diagonal = Prob::one();
    let mut agree = true;
    for i in 0..n {
        let row_sum = matrix[i].iter().fold(Prob::zero(), |a, &p| a + p);
        row_sum_residual = row_sum_residual.max(abs_diff(row_sum, Prob::one()));
        let col_sum = (0..n).fold(Prob::zero(), |a, k| a + matrix[k][i]);
        // (π P)(i) - π(i) = (col_sum - 1) / n
        stationary_residual = stationary_residual.max(abs_diff(col_sum, Prob::one()) / Prob::from_integer(n as u128));
        min_diagonal = min_diagonal.min(matrix[i][i]);
        for j in 0..n {
            symmetry_residual = symmetry_residual.max(abs_diff(matrix[i][j], matrix[j][i]));
            if i != j {
                let direct = jump_probability(inst, &states[i], &states[j]).unwrap_or(Prob::zero());
                agree &= direct == matrix[i][j];
            }
        }
    }
    Ok(KernelReport {
        states,
        matrix,
        symmetry_residual,
        row_sum_residual,
        min_diagonal,
        stationary_residual,
        jump_probabilities_agree: agree,
        half_regular: inst.half_regular(),
    })
}

fn triples(v: &[VertexId]) -> impl Iterator<Item = [VertexId; 3]> + '_ {
    (0..v.len())
        .flat_map(move |a| (a + 1..v.len()).flat_map(move |b| (b + 1..v.len()).map(move |c| [v[a], v[b], v[c]])))
}
