//! Brute-force ground truth for small instances.

use alloc::collections::{BTreeMap, BTreeSet, BinaryHeap};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::chain::{advance, ChainState};
use crate::error::{Error, Result};
use crate::instance::{Instance, VertexId};
use crate::realization::Realization;
use crate::swaps::{find_c4_swap, find_c6_fswap, is_f_compatible, ChordCircuit, CircularSwap};

/// Default bound on the number of chords for exhaustive enumeration.
pub const DEFAULT_MAX_CHORDS: usize = 40;

/// Every realization of `inst`, sorted.
pub fn enumerate_all(inst: &Instance, max_chords: usize) -> Result<Vec<Realization>> {
    enumerate_bounded(inst, max_chords, usize::MAX)
}

/// Like [`enumerate_all`] but gives up with `TooManyStates` past `max_states`.
pub fn enumerate_bounded(inst: &Instance, max_chords: usize, max_states: usize) -> Result<Vec<Realization>> {
    let chords = inst.chords().len();
    if chords > max_chords {
        return Err(Error::TooLarge { size: chords, limit: max_chords });
    }
    let n = inst.n();
    // cap[t][b]: chords (c, b) with c >= t
    let mut cap = vec![vec![0usize; n]; n + 1];
    for t in (0..n).rev() {
        cap[t] = (0..n).map(|b| cap[t + 1][b] + usize::from(inst.is_chord(t, b))).collect();
    }
    let mut e = Enumerator {
        inst,
        cap,
        residual: inst.degrees().to_vec(),
        real: Realization::empty(n),
        out: Vec::new(),
        max_states,
    };
    e.vertex(0)?;
    let mut out = e.out;
    out.sort_unstable();
    Ok(out)
}

struct Enumerator<'a> {
    inst: &'a Instance,
    cap: Vec<Vec<usize>>,
    residual: Vec<usize>,
    real: Realization,
    out: Vec<Realization>,
    max_states: usize,
}

impl Enumerator<'_> {
    fn vertex(&mut self, a: usize) -> Result<()> {
        let n = self.inst.n();
        if a == n {
            if self.out.len() >= self.max_states {
                return Err(Error::TooManyStates { limit: self.max_states });
            }
            self.out.push(self.real.clone());
            return Ok(());
        }
        let cands: Vec<VertexId> = (a + 1..n).filter(|&b| self.residual[b] > 0 && self.inst.is_chord(a, b)).collect();
        let need = self.residual[a];
        if need > cands.len() {
            return Ok(());
        }
        self.choose(a, &cands, 0, need)
    }

    fn choose(&mut self, a: usize, cands: &[VertexId], from: usize, left: usize) -> Result<()> {
        if left == 0 {
            let n = self.inst.n();
            if (a + 1..n).all(|b| self.residual[b] <= self.cap[a + 1][b]) {
                let saved = self.residual[a];
                self.residual[a] = 0;
                self.vertex(a + 1)?;
                self.residual[a] = saved;
            }
            return Ok(());
        }
        for i in from..cands.len() {
            if cands.len() - i < left {
                break;
            }
            let b = cands[i];
            self.residual[b] -= 1;
            self.real.set_edge(a, b, true);
            self.choose(a, cands, i + 1, left - 1)?;
            self.real.set_edge(a, b, false);
            self.residual[b] += 1;
        }
        Ok(())
    }
}

/// Which moves connect realizations in a [`RealizationGraph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MoveSet {
    /// C4 swaps and F-compatible C6 swaps.
    ChainMoves,
    /// Every F-compatible swap along an alternating elementary circuit.
    AllFSwaps,
}

/// Realizations joined by single moves; edge weights are swap weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizationGraph {
    pub states: Vec<Realization>,
    pub adjacency: Vec<BTreeMap<usize, usize>>,
}

impl RealizationGraph {
    pub fn index_of(&self, r: &Realization) -> Option<usize> {
        self.states.binary_search(r).ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(BTreeMap::len).sum::<usize>() / 2
    }

    pub fn is_symmetric(&self) -> bool {
        self.adjacency
            .iter()
            .enumerate()
            .all(|(i, adj)| adj.iter().all(|(&j, &w)| self.adjacency[j].get(&i) == Some(&w)))
    }

    pub fn component_count(&self) -> usize {
        let n = self.states.len();
        let mut seen = vec![false; n];
        let mut comps = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            comps += 1;
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &w in self.adjacency[v].keys() {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// Least total weight from `from` to every state (Dijkstra).
    pub fn shortest_weights(&self, from: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.states.len()];
        let mut heap = BinaryHeap::new();
        dist[from] = Some(0);
        heap.push(Reverse((0usize, from)));
        while let Some(Reverse((d, v))) = heap.pop() {
            if dist[v].is_some_and(|best| d > best) {
                continue;
            }
            for (&w, &cost) in &self.adjacency[v] {
                let nd = d + cost;
                if dist[w].is_none_or(|old| nd < old) {
                    dist[w] = Some(nd);
                    heap.push(Reverse((nd, w)));
                }
            }
        }
        dist
    }
}

pub fn build_realization_graph(inst: &Instance, moves: MoveSet, max_chords: usize) -> Result<RealizationGraph> {
    let states = enumerate_all(inst, max_chords)?;
    let mut adjacency = vec![BTreeMap::new(); states.len()];
    for (i, g) in states.iter().enumerate() {
        let swaps = match moves {
            MoveSet::ChainMoves => chain_moves(inst, g)?,
            MoveSet::AllFSwaps => all_fswaps(inst, g),
        };
        for sw in swaps {
            let h = sw.apply(inst, g)?;
            let j = states.binary_search(&h).map_err(|_| Error::InstanceMismatch)?;
            let w = sw.weight();
            let e = adjacency[i].entry(j).or_insert(w);
            *e = (*e).min(w);
        }
    }
    Ok(RealizationGraph { states, adjacency })
}

/// Every successful C4 and C6 move out of `g`.
pub fn chain_moves(inst: &Instance, g: &Realization) -> Result<Vec<CircularSwap>> {
    if !inst.is_bipartite() {
        return Err(Error::NotBipartite);
    }
    let us: Vec<VertexId> = inst.u_vertices().collect();
    let ws: Vec<VertexId> = inst.w_vertices().collect();
    let mut out = Vec::new();
    for (a, &u0) in us.iter().enumerate() {
        for &u1 in &us[a + 1..] {
            for (c, &w0) in ws.iter().enumerate() {
                for &w1 in &ws[c + 1..] {
                    out.extend(find_c4_swap(inst, g, (u0, u1), (w0, w1)));
                }
            }
            for &u2 in &us[a + 1..] {
                if u2 <= u1 {
                    continue;
                }
                for (c, &w0) in ws.iter().enumerate() {
                    for (d, &w1) in ws.iter().enumerate().skip(c + 1) {
                        for &w2 in &ws[d + 1..] {
                            out.extend(find_c6_fswap(inst, g, [u0, u1, u2], [w0, w1, w2]));
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Every F-compatible swap along an alternating elementary circuit of `g`.
pub fn all_fswaps(inst: &Instance, g: &Realization) -> Vec<CircularSwap> {
    let mut found = BTreeSet::new();
    let n = inst.n();
    let mut used = BTreeSet::new();
    let mut count = vec![0u8; n];
    for x0 in 0..n {
        let mut path = vec![x0];
        count[x0] = 1;
        circuits_from(inst, g, x0, &mut path, &mut count, &mut used, &mut found);
        count[x0] = 0;
    }
    found
        .into_iter()
        .filter(|c| is_f_compatible(inst, c))
        .map(|c| CircularSwap::new(inst, g, c).expect("enumerated circuits alternate"))
        .collect()
}

/// Extends an alternating path that starts at its least vertex `x0` with an
/// edge; closes it whenever the chord back to `x0` fits.
fn circuits_from(
    inst: &Instance,
    g: &Realization,
    x0: VertexId,
    path: &mut Vec<VertexId>,
    count: &mut [u8],
    used: &mut BTreeSet<(VertexId, VertexId)>,
    found: &mut BTreeSet<ChordCircuit>,
) {
    let v = *path.last().unwrap();
    let want_edge = path.len() % 2 == 1;
    let key = |a: VertexId, b: VertexId| (a.min(b), a.max(b));
    if !want_edge && path.len() >= 4 && inst.is_chord(v, x0) && !g.is_edge(v, x0) && !used.contains(&key(v, x0)) {
        let c = ChordCircuit::from_vertices(path.clone());
        if c.is_elementary() {
            found.insert(c.canonical());
        }
    }
    let max_count = if inst.is_bipartite() { 1 } else { 2 };
    for y in x0 + 1..inst.n() {
        if count[y] >= max_count || !inst.is_chord(v, y) || g.is_edge(v, y) != want_edge || used.contains(&key(v, y)) {
            continue;
        }
        used.insert(key(v, y));
        count[y] += 1;
        path.push(y);
        circuits_from(inst, g, x0, path, count, used, found);
        path.pop();
        count[y] -= 1;
        used.remove(&key(v, y));
    }
    // x0 itself may recur once in a general circuit
    if !inst.is_bipartite()
        && count[x0] == 1
        && path.len() >= 2
        && inst.is_chord(v, x0)
        && g.is_edge(v, x0) == want_edge
        && !used.contains(&key(v, x0))
    {
        used.insert(key(v, x0));
        count[x0] += 1;
        path.push(x0);
        circuits_from(inst, g, x0, path, count, used, found);
        path.pop();
        count[x0] -= 1;
        used.remove(&key(v, x0));
    }
}

/// Empirical distribution of chain end states against the uniform one.
#[derive(Clone, Debug, PartialEq)]
pub struct UniformityReport {
    pub states: usize,
    pub samples: usize,
    pub counts: Vec<u64>,
    pub tv_distance: f64,
    pub chi_square: f64,
    pub degrees_of_freedom: usize,
}

/// Summarizes end states, given as indices into the state list.
pub fn uniformity_from_counts(counts: Vec<u64>) -> UniformityReport {
    let k = counts.len();
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / k as f64;
    let mut tv = 0.0;
    let mut chi = 0.0;
    for &c in &counts {
        let d = c as f64 - expected;
        tv += if d < 0.0 { -d } else { d };
        chi += d * d / expected;
    }
    UniformityReport {
        states: k,
        samples: total as usize,
        counts,
        tv_distance: tv / (2.0 * total as f64),
        chi_square: chi,
        degrees_of_freedom: k.saturating_sub(1),
    }
}

/// End state of chain `stream` after `steps` proposals from `start`.
pub fn sample_chain(inst: &Instance, start: &Realization, steps: u64, seed: u64, stream: u64) -> Result<Realization> {
    let mut state = ChainState::with_stream(start.clone(), seed, stream);
    advance(inst, &mut state, steps)?;
    Ok(state.into_realization())
}

/// Runs `n_samples` independent chains (streams `0..n_samples`) of length
/// `steps` from `start` and compares their end states with uniform.
pub fn uniformity_test(
    inst: &Instance,
    start: &Realization,
    steps: u64,
    n_samples: usize,
    seed: u64,
) -> Result<UniformityReport> {
    let states = enumerate_all(inst, DEFAULT_MAX_CHORDS)?;
    let mut counts = vec![0u64; states.len()];
    for stream in 0..n_samples as u64 {
        let end = sample_chain(inst, start, steps, seed, stream)?;
        let i = states.binary_search(&end).map_err(|_| Error::InstanceMismatch)?;
        counts[i] += 1;
    }
    Ok(uniformity_from_counts(counts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::greedy_construct;

    fn diag(k: usize) -> Instance {
        let m: Vec<_> = (0..k).map(|i| (i, i)).collect();
        Instance::bipartite(&vec![1; k], &vec![1; k], None, &[], &m).unwrap()
    }

    fn derangements(k: usize) -> usize {
        fn rec(i: usize, k: usize, used: &mut [bool]) -> usize {
            if i == k {
                return 1;
            }
            let mut total = 0;
            for j in 0..k {
                if j != i && !used[j] {
                    used[j] = true;
                    total += rec(i + 1, k, used);
                    used[j] = false;
                }
            }
            total
        }
        rec(0, k, &mut vec![false; k])
    }

    #[test]
    fn derangement_counts() {
        for k in 3..=5 {
            assert_eq!(enumerate_all(&diag(k), 40).unwrap().len(), derangements(k));
        }
        assert_eq!([3, 4, 5].map(derangements), [2, 9, 44]);
    }

    #[test]
    fn fixtures() {
        let f1 = Instance::bipartite(&[1, 1], &[1, 1], None, &[], &[(0, 0), (1, 1)]).unwrap();
        let all = enumerate_all(&f1, 40).unwrap();
        assert_eq!(all, vec![Realization::from_local_edges(&f1, &[(0, 1), (1, 0)]).unwrap()]);
        let f5 = Instance::bipartite(&[2, 1], &[1, 2], None, &[], &[(0, 0), (1, 1)]).unwrap();
        assert!(enumerate_all(&f5, 40).unwrap().is_empty());
        let empty = crate::instance::from_directed(&[0, 0], &[0, 0], true).unwrap();
        assert_eq!(enumerate_all(&empty, 40).unwrap().len(), 1);
        assert!(matches!(enumerate_all(&diag(7), 40), Err(Error::TooLarge { size: 42, limit: 40 })));
        assert_eq!(enumerate_bounded(&diag(4), 40, 3), Err(Error::TooManyStates { limit: 3 }));
    }

    #[test]
    fn enumeration_matches_subset_filter() {
        // brute force over every edge subset of the chords
        let inst = Instance::general(&[2, 2, 1, 2, 1], Some(0), &[1], &[(2, 3)]).unwrap();
        let chords = inst.chords();
        let mut expect = Vec::new();
        for mask in 0u32..(1 << chords.len()) {
            let edges: Vec<_> = (0..chords.len()).filter(|&i| mask >> i & 1 == 1).map(|i| chords[i]).collect();
            if let Ok(r) = Realization::from_edges(&inst, &edges) {
                expect.push(r);
            }
        }
        expect.sort();
        assert_eq!(enumerate_all(&inst, 40).unwrap(), expect);
    }

    #[test]
    fn graphs_of_fixtures() {
        let g = build_realization_graph(&diag(3), MoveSet::ChainMoves, 40).unwrap();
        assert_eq!(g.states.len(), 2);
        assert_eq!(g.edge_count(), 1);
        let g = build_realization_graph(&diag(4), MoveSet::ChainMoves, 40).unwrap();
        assert_eq!(g.states.len(), 9);
        assert!(g.is_connected() && g.is_symmetric());
        let f4 = Instance::bipartite(&[1, 2, 2], &[2, 2, 1], Some(0), &[0], &[(1, 1), (2, 2)]).unwrap();
        let g = build_realization_graph(&f4, MoveSet::AllFSwaps, 40).unwrap();
        assert_eq!((g.states.len(), g.edge_count()), (1, 0));
        let g = build_realization_graph(&diag(3), MoveSet::AllFSwaps, 40).unwrap();
        assert_eq!(g.shortest_weights(0), vec![Some(0), Some(2)]);
    }

    #[test]
    fn single_state_is_uniform() {
        let f4 = Instance::bipartite(&[1, 2, 2], &[2, 2, 1], Some(0), &[0], &[(1, 1), (2, 2)]).unwrap();
        let start = greedy_construct(&f4).unwrap();
        let rep = uniformity_test(&f4, &start, 10, 50, 1).unwrap();
        assert_eq!(rep.tv_distance, 0.0);
        assert_eq!(rep.counts, vec![50]);
    }
}
