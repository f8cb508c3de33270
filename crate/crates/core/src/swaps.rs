//! Chord circuits, circular swaps and the swap distance.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::instance::{Instance, VertexId};
use crate::realization::Realization;

/// Default bound on `|E(G) Δ E(H)|` for the exhaustive `mc` search.
pub const DEFAULT_MAX_DELTA: usize = 16;

#[inline]
fn norm(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// A closed chord sequence `x_0 x_1, x_1 x_2, ..., x_{2i-1} x_0` of even
/// length with pairwise distinct chords.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChordCircuit {
    vertices: Vec<VertexId>,
}

impl ChordCircuit {
    pub fn new(inst: &Instance, vertices: Vec<VertexId>) -> Result<Self> {
        if vertices.len() < 4 || !vertices.len().is_multiple_of(2) {
            return Err(Error::InvalidCircuit("length must be even and at least 4"));
        }
        let c = ChordCircuit { vertices };
        let mut seen = BTreeSet::new();
        for (a, b) in c.chords() {
            if a >= inst.n() || b >= inst.n() {
                return Err(Error::IndexOutOfRange(a.max(b)));
            }
            if !inst.is_chord(a, b) {
                return Err(Error::NotAChord(a, b));
            }
            if !seen.insert((a, b)) {
                return Err(Error::InvalidCircuit("repeated chord"));
            }
        }
        Ok(c)
    }

    /// For sequences already known to consist of distinct chords.
    pub(crate) fn from_vertices(vertices: Vec<VertexId>) -> Self {
        debug_assert!(vertices.len() >= 4 && vertices.len().is_multiple_of(2));
        ChordCircuit { vertices }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    /// Number of chords, `2i`.
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// `i` for a circuit of length `2i`.
    pub fn half_len(&self) -> usize {
        self.vertices.len() / 2
    }

    /// Weight `i - 1` of a swap along this circuit.
    pub fn weight(&self) -> usize {
        self.half_len() - 1
    }

    #[inline]
    fn at(&self, i: usize) -> VertexId {
        self.vertices[i % self.vertices.len()]
    }

    /// Chords in traversal order, each normalized to `(min, max)`.
    pub fn chords(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.len()).map(move |i| norm(self.at(i), self.at(i + 1)))
    }

    /// No vertex more than twice, and repeated occurrences an odd distance
    /// apart.
    pub fn is_elementary(&self) -> bool {
        let n = self.len();
        let mut pos: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new();
        for (i, &v) in self.vertices.iter().enumerate() {
            pos.entry(v).or_default().push(i);
        }
        pos.values().all(|p| match p.as_slice() {
            [_] => true,
            [a, b] => (b - a) % 2 == 1 && (n - (b - a)) % 2 == 1,
            _ => false,
        })
    }

    /// Whether every chord alternates between edge and non-edge in `real`.
    /// Returns the status of the first chord when it does.
    pub fn alternation(&self, real: &Realization) -> Option<bool> {
        let first = real.is_edge(self.at(0), self.at(1));
        (0..self.len()).all(|i| real.is_edge(self.at(i), self.at(i + 1)) == (first == (i % 2 == 0))).then_some(first)
    }

    /// Lexicographically least sequence among all rotations and both
    /// directions.
    pub fn canonical(&self) -> ChordCircuit {
        let n = self.len();
        let mut best: Option<Vec<VertexId>> = None;
        for start in 0..n {
            for dir in [false, true] {
                let seq: Vec<_> =
                    (0..n).map(|k| if dir { self.at(start + n - k) } else { self.at(start + k) }).collect();
                if best.as_ref().is_none_or(|b| seq < *b) {
                    best = Some(seq);
                }
            }
        }
        ChordCircuit { vertices: best.unwrap_or_default() }
    }

    /// Rotated so that position `start` comes first, optionally reversed.
    pub(crate) fn rotated(&self, start: usize, reversed: bool) -> ChordCircuit {
        let n = self.len();
        let vertices = (0..n).map(|k| if reversed { self.at(start + n - k) } else { self.at(start + k) }).collect();
        ChordCircuit { vertices }
    }

    fn chord_set(&self) -> BTreeSet<(VertexId, VertexId)> {
        self.chords().collect()
    }

    /// Position pairs `(p, q)`, `p < q`, at odd distance greater than one,
    /// holding distinct vertices that do not form a circuit chord.
    fn pv_positions(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let chords = self.chord_set();
        let mut out = Vec::new();
        for p in 0..n {
            for q in (p + 3..n).step_by(2) {
                if n - (q - p) < 3 {
                    continue;
                }
                let (a, b) = (self.vertices[p], self.vertices[q]);
                if a != b && !chords.contains(&norm(a, b)) {
                    out.push((p, q));
                }
            }
        }
        out
    }
}

/// PV-pairs of a circuit, normalized and sorted.
pub fn pv_pairs(circ: &ChordCircuit) -> Vec<(VertexId, VertexId)> {
    let mut out: Vec<_> =
        circ.pv_positions().into_iter().map(|(p, q)| norm(circ.vertices[p], circ.vertices[q])).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// True iff no PV-pair is a chord.
pub fn is_f_compatible(inst: &Instance, circ: &ChordCircuit) -> bool {
    pv_pairs(circ).into_iter().all(|(a, b)| !inst.is_chord(a, b))
}

/// A swap along an alternating elementary circuit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CircularSwap {
    circuit: ChordCircuit,
    first_is_edge: bool,
    f_compatible: bool,
}

impl CircularSwap {
    /// Checks elementarity and alternation in `real`.
    pub fn new(inst: &Instance, real: &Realization, circuit: ChordCircuit) -> Result<Self> {
        if !circuit.is_elementary() {
            return Err(Error::NotElementary);
        }
        let first_is_edge = circuit.alternation(real).ok_or(Error::NotAlternating)?;
        let f_compatible = is_f_compatible(inst, &circuit);
        Ok(CircularSwap { circuit, first_is_edge, f_compatible })
    }

    pub fn circuit(&self) -> &ChordCircuit {
        &self.circuit
    }

    /// Status of the first chord in the realization the swap was built for.
    pub fn first_is_edge(&self) -> bool {
        self.first_is_edge
    }

    pub fn is_f_compatible(&self) -> bool {
        self.f_compatible
    }

    pub fn weight(&self) -> usize {
        self.circuit.weight()
    }

    /// Exchanges edges and non-edges along the circuit. The swap must
    /// alternate in `real`, in either phase, so applying it twice restores
    /// the original.
    pub fn apply(&self, inst: &Instance, real: &Realization) -> Result<Realization> {
        for (a, b) in self.circuit.chords() {
            if !inst.is_chord(a, b) {
                return Err(Error::NotAChord(a, b));
            }
        }
        self.circuit.alternation(real).ok_or(Error::NotAlternating)?;
        let mut out = real.clone();
        for (a, b) in self.circuit.chords() {
            out.toggle(a, b);
        }
        Ok(out)
    }
}

pub fn apply_swap(inst: &Instance, real: &Realization, sw: &CircularSwap) -> Result<Realization> {
    sw.apply(inst, real)
}

/// The C4 swap on two `U` vertices and two `W` vertices, if one exists.
pub fn find_c4_swap(
    inst: &Instance,
    real: &Realization,
    us: (VertexId, VertexId),
    ws: (VertexId, VertexId),
) -> Option<CircularSwap> {
    let (u0, u1) = us;
    let (w0, w1) = ws;
    if u0 == u1 || w0 == w1 {
        return None;
    }
    if ![(u0, w0), (u0, w1), (u1, w0), (u1, w1)].iter().all(|&(a, b)| inst.is_chord(a, b)) {
        return None;
    }
    let vertices = match (real.is_edge(u0, w0), real.is_edge(u0, w1), real.is_edge(u1, w0), real.is_edge(u1, w1)) {
        (true, false, false, true) => vec![u0, w0, u1, w1],
        (false, true, true, false) => vec![u0, w1, u1, w0],
        _ => return None,
    };
    Some(CircularSwap { circuit: ChordCircuit::from_vertices(vertices), first_is_edge: true, f_compatible: true })
}

/// The F-compatible C6 swap on three `U` and three `W` vertices, if one
/// exists: the forbidden pairs between the triples must form a perfect
/// matching and the six remaining pairs must alternate.
pub fn find_c6_fswap(
    inst: &Instance,
    real: &Realization,
    us: [VertexId; 3],
    ws: [VertexId; 3],
) -> Option<CircularSwap> {
    if us[0] == us[1] || us[0] == us[2] || us[1] == us[2] || ws[0] == ws[1] || ws[0] == ws[2] || ws[1] == ws[2] {
        return None;
    }
    // partner[i] = index j with (us[i], ws[j]) forbidden
    let mut partner = [usize::MAX; 3];
    let mut used = [false; 3];
    for (i, &u) in us.iter().enumerate() {
        for (j, &w) in ws.iter().enumerate() {
            if !inst.is_chord(u, w) {
                if partner[i] != usize::MAX || used[j] || !inst.is_forbidden(u, w) {
                    return None;
                }
                partner[i] = j;
                used[j] = true;
            }
        }
    }
    if partner.contains(&usize::MAX) {
        return None;
    }
    let mut vertices = Vec::with_capacity(6);
    let (mut ui, mut prev_w) = (0usize, usize::MAX);
    for _ in 0..3 {
        let wj = (0..3).find(|&j| j != partner[ui] && j != prev_w).unwrap();
        vertices.push(us[ui]);
        vertices.push(ws[wj]);
        ui = (0..3).find(|&i| i != ui && partner[i] != wj).unwrap();
        prev_w = wj;
    }
    debug_assert_eq!(ui, 0);
    let circuit = ChordCircuit::from_vertices(vertices);
    let first_is_edge = circuit.alternation(real)?;
    Some(CircularSwap { circuit, first_is_edge, f_compatible: true })
}

/// Splits an alternating elementary circuit into F-swaps whose weights add
/// up to `i - 1`, applied in order starting from `real`.
pub fn elementary_circuit_to_fswaps(
    inst: &Instance,
    real: &Realization,
    circ: &ChordCircuit,
) -> Result<Vec<CircularSwap>> {
    let mut out = Vec::new();
    let mut current = real.clone();
    split_into_fswaps(inst, &mut current, circ, &mut out)?;
    Ok(out)
}

fn split_into_fswaps(
    inst: &Instance,
    current: &mut Realization,
    circ: &ChordCircuit,
    out: &mut Vec<CircularSwap>,
) -> Result<()> {
    let sw = CircularSwap::new(inst, current, circ.clone())?;
    let split = circ
        .pv_positions()
        .into_iter()
        .filter(|&(p, q)| inst.is_chord(circ.vertices[p], circ.vertices[q]))
        .min_by_key(|&(p, q)| (norm(circ.vertices[p], circ.vertices[q]), p, q));
    let Some((p, q)) = split else {
        *current = sw.apply(inst, current)?;
        out.push(sw);
        return Ok(());
    };
    let n = circ.len();
    let inner = ChordCircuit::from_vertices(circ.vertices[p..=q].to_vec());
    let outer = ChordCircuit::from_vertices((q..=p + n).map(|k| circ.at(k)).collect());
    let (first, second) = if inner.alternation(current).is_some() { (inner, outer) } else { (outer, inner) };
    split_into_fswaps(inst, current, &first, out)?;
    split_into_fswaps(inst, current, &second, out)
}

/// Chords of `E(G) Δ E(H)`, each tagged with whether it lies in `G`.
fn delta_edges(g: &Realization, h: &Realization) -> Vec<((VertexId, VertexId), bool)> {
    g.symmetric_difference(h).into_iter().map(|(a, b)| ((a, b), g.is_edge(a, b))).collect()
}

/// Partitions `E(G) Δ E(H)` into alternating circuits.
///
/// Walks start at the lowest unused chord from its lower endpoint and always
/// continue along the lowest unused chord of the other colour. Whenever the
/// walk revisits a vertex at even distance the closed part is cut off, so
/// no circuit meets a vertex twice at even distance; on bipartite instances
/// every circuit is a cycle. Circuits are returned in canonical form, in the
/// order they were cut off.
pub fn decompose_symmetric_difference(g: &Realization, h: &Realization) -> Vec<ChordCircuit> {
    let delta = delta_edges(g, h);
    let n = g.n();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, &((a, b), _)) in delta.iter().enumerate() {
        incident[a].push(i);
        incident[b].push(i);
    }
    let other = |i: usize, v: VertexId| {
        let (a, b) = delta[i].0;
        if a == v {
            b
        } else {
            a
        }
    };
    let mut used = vec![false; delta.len()];
    let mut out = Vec::new();
    while let Some(start) = used.iter().position(|u| !u) {
        let ((a, b), colour) = delta[start];
        used[start] = true;
        // walk[k] = (vertex, colour of the chord entering it)
        let mut walk: Vec<(VertexId, Option<bool>)> = vec![(a, None), (b, Some(colour))];
        loop {
            let (v, c) = *walk.last().unwrap();
            let c = c.unwrap();
            let last = walk.len() - 1;
            let closed = (0..last).rev().find(|&p| walk[p].0 == v && (last - p).is_multiple_of(2));
            if let Some(p) = closed {
                let cycle: Vec<VertexId> = walk[p..walk.len() - 1].iter().map(|&(x, _)| x).collect();
                out.push(ChordCircuit::from_vertices(cycle).canonical());
                walk.truncate(p + 1);
                if p == 0 {
                    break;
                }
                continue;
            }
            let next = incident[v]
                .iter()
                .copied()
                .filter(|&i| !used[i] && delta[i].1 != c)
                .min_by_key(|&i| other(i, v))
                .expect("degree balance keeps an alternating walk going");
            used[next] = true;
            walk.push((other(next, v), Some(delta[next].1)));
        }
    }
    out
}

/// `mc(G, H)`, `|E(G) Δ E(H)|` and the resulting swap distance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SwapDistance {
    pub weight: usize,
    pub delta: usize,
    pub mc: usize,
}

/// Maximum number of circuits in an alternating circuit decomposition of
/// `E(G) Δ E(H)`, by exhaustive search.
pub fn max_alternating_circuit_count(g: &Realization, h: &Realization, max_delta: usize) -> Result<usize> {
    let delta = delta_edges(g, h);
    let limit = max_delta.min(64);
    if delta.len() > limit {
        return Err(Error::TooLarge { size: delta.len(), limit });
    }
    if delta.is_empty() {
        return Ok(0);
    }
    let mut search = McSearch::new(g.n(), &delta);
    let full = if delta.len() == 64 { u64::MAX } else { (1u64 << delta.len()) - 1 };
    Ok(search.best(full))
}

struct McSearch<'a> {
    delta: &'a [((VertexId, VertexId), bool)],
    incident: Vec<Vec<usize>>,
    memo: BTreeMap<u64, usize>,
}

impl<'a> McSearch<'a> {
    fn new(n: usize, delta: &'a [((VertexId, VertexId), bool)]) -> Self {
        let mut incident = vec![Vec::new(); n];
        for (i, &((a, b), _)) in delta.iter().enumerate() {
            incident[a].push(i);
            incident[b].push(i);
        }
        McSearch { delta, incident, memo: BTreeMap::new() }
    }

    fn best(&mut self, mask: u64) -> usize {
        if mask == 0 {
            return 0;
        }
        if let Some(&v) = self.memo.get(&mask) {
            return v;
        }
        let e = mask.trailing_zeros() as usize;
        let mut trails = BTreeSet::new();
        let ((a, b), colour) = self.delta[e];
        self.closed_trails(mask, a, colour, b, 1u64 << e, colour, &mut trails);
        let mut best = 0;
        for t in trails {
            best = best.max(1 + self.best(mask & !t));
        }
        self.memo.insert(mask, best);
        best
    }

    /// Collects edge sets of alternating closed trails that start with the
    /// chord of colour `first` leaving `start` and currently sit at `v`.
    #[allow(clippy::too_many_arguments)]
    fn closed_trails(
        &self,
        mask: u64,
        start: VertexId,
        first: bool,
        v: VertexId,
        used: u64,
        last: bool,
        out: &mut BTreeSet<u64>,
    ) {
        if v == start && last != first {
            out.insert(used);
        }
        for &i in &self.incident[v] {
            let bit = 1u64 << i;
            if mask & bit == 0 || used & bit != 0 || self.delta[i].1 == last {
                continue;
            }
            let ((a, b), c) = self.delta[i];
            let w = if a == v { b } else { a };
            self.closed_trails(mask, start, first, w, used | bit, c, out);
        }
    }
}

/// `|E(G) Δ E(H)| / 2 - mc(G, H)`.
pub fn swap_distance(g: &Realization, h: &Realization, max_delta: usize) -> Result<SwapDistance> {
    let delta = g.symmetric_difference(h).len();
    let mc = max_alternating_circuit_count(g, h, max_delta)?;
    Ok(SwapDistance { weight: delta / 2 - mc, delta, mc })
}
