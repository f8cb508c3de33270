//! Havel-Hakimi style greedy construction for star+factor instances.
//!
//! The designated center `s` is processed first, then the remaining vertices
//! of `U` (all of `V` for general instances) in ascending order. Each vertex
//! `x` is joined to the first `d(x)` entries of its [`NeighborOrder`], after
//! which it is deleted and the residual degrees are updated.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::error::{Error, Result};
use crate::instance::{Instance, VertexId};
use crate::realization::Realization;
use crate::swaps::{ChordCircuit, CircularSwap};

/// One element `y` of `C(x)` together with the data that ranks it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NeighborEntry {
    pub vertex: VertexId,
    pub residual: usize,
    /// Live forbidden partner `y^F`, if any.
    pub partner: Option<VertexId>,
    pub partner_residual: Option<usize>,
}

impl NeighborEntry {
    fn key(&self) -> (Reverse<usize>, Reverse<i64>, VertexId) {
        let pr = self.partner_residual.map_or(-1, |d| d as i64);
        (Reverse(self.residual), Reverse(pr), self.vertex)
    }
}

/// The order on the chords at an anchor vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborOrder {
    pub anchor: VertexId,
    pub entries: Vec<NeighborEntry>,
}

impl NeighborOrder {
    pub fn vertices(&self) -> Vec<VertexId> {
        self.entries.iter().map(|e| e.vertex).collect()
    }
}

/// Orders the live chords at `x`: residual degree descending, then the
/// residual degree of the live forbidden partner descending (a missing
/// partner counts as -1), then index ascending.
///
/// `live[v]` is false for vertices that were already processed and deleted.
pub fn neighbor_order(inst: &Instance, x: VertexId, residual: &[usize], live: &[bool]) -> Result<NeighborOrder> {
    let n = inst.n();
    if x >= n {
        return Err(Error::IndexOutOfRange(x));
    }
    if residual.len() != n || live.len() != n {
        return Err(Error::LengthMismatch(residual.len().min(live.len()), n));
    }
    let mut entries = Vec::new();
    let mut seen_partner = vec![false; n];
    for y in inst.chords_at(x).filter(|&y| live[y]) {
        let mut partners = inst.forbidden_partners(y).filter(|&p| live[p]);
        let partner = partners.next();
        if partners.next().is_some() {
            return Err(Error::NotNormal(y));
        }
        if let Some(p) = partner {
            if seen_partner[p] {
                return Err(Error::NotNormal(y));
            }
            seen_partner[p] = true;
        }
        entries.push(NeighborEntry {
            vertex: y,
            residual: residual[y],
            partner,
            partner_residual: partner.map(|p| residual[p]),
        });
    }
    entries.sort_by_key(NeighborEntry::key);
    Ok(NeighborOrder { anchor: x, entries })
}

/// Vertices in processing order: `s` first, then the rest of `U` (or `V`).
pub fn processing_order(inst: &Instance) -> Vec<VertexId> {
    let s = inst.designated_center();
    let mut order: Vec<VertexId> = s.into_iter().collect();
    order.extend(inst.u_vertices().filter(|&v| Some(v) != s));
    order
}

/// Runs the greedy algorithm. `Ok(None)` means the instance is not graphical.
///
/// Neighbours of `x` are taken one at a time, re-ranking after every pick.
/// On bipartite instances this is the same as taking a prefix of the order
/// at `x`, since a pick only lowers the residual of a vertex whose partner
/// lies in the other class. In general instances a vertex and its partner
/// can both be chords at `x`, and the re-ranking lets a pick demote the
/// partner of the vertex just chosen.
pub fn try_greedy_construct(inst: &Instance) -> Result<Option<Realization>> {
    let n = inst.n();
    let mut residual = inst.degrees().to_vec();
    let mut live = vec![true; n];
    let mut real = Realization::empty(n);
    for x in processing_order(inst) {
        live[x] = false;
        for _ in 0..residual[x] {
            let order = neighbor_order_excluding(inst, x, &residual, &live, &real)?;
            match order.entries.first() {
                Some(e) if e.residual > 0 => {
                    real.set_edge(x, e.vertex, true);
                    residual[e.vertex] -= 1;
                }
                _ => return Ok(None),
            }
        }
        residual[x] = 0;
    }
    if residual.iter().any(|&d| d != 0) {
        return Ok(None);
    }
    debug_assert!(real.validate(inst).is_ok());
    Ok(Some(real))
}

/// The order at `x` without the neighbours already joined to `x`. The anchor
/// itself counts as deleted.
fn neighbor_order_excluding(
    inst: &Instance,
    x: VertexId,
    residual: &[usize],
    live: &[bool],
    real: &Realization,
) -> Result<NeighborOrder> {
    let mut order = neighbor_order(inst, x, residual, live)?;
    order.entries.retain(|e| !real.is_edge(x, e.vertex));
    Ok(order)
}

/// Greedy construction; `None` exactly when the instance has no realization.
pub fn greedy_construct(inst: &Instance) -> Option<Realization> {
    match try_greedy_construct(inst) {
        Ok(r) => r,
        Err(e) => {
            debug_assert!(false, "star+factor neighbourhoods are normal: {e:?}");
            None
        }
    }
}

/// Whether `z` is strictly ahead of `y` under the degree conditions of the
/// order, ignoring the index tie-break.
fn strictly_precedes(a: &NeighborEntry, b: &NeighborEntry) -> bool {
    let ka = a.key();
    let kb = b.key();
    (ka.0, ka.1) < (kb.0, kb.1)
}

/// Finds the alternating circuit that trades the edge `xz` for the non-edge
/// `xy` while leaving the rest of `Γ(x)` alone.
///
/// The circuit has length 4 when some `u ∉ {x, y, z}` with `uz` a chord has
/// `uy ∈ E` and `uz ∉ E`. Otherwise `d(y) = d(z)`, `y z^F` is an edge and
/// the length 6 circuit `(x, z, y^F, u, z^F, y)` is used.
pub fn repair_swap(inst: &Instance, real: &Realization, x: VertexId, y: VertexId, z: VertexId) -> Result<CircularSwap> {
    let n = inst.n();
    for v in [x, y, z] {
        if v >= n {
            return Err(Error::IndexOutOfRange(v));
        }
    }
    if y == z || !real.is_edge(x, z) || !inst.is_chord(x, y) || real.is_edge(x, y) {
        return Err(Error::PreconditionViolated("need xz an edge and xy a non-edge chord"));
    }
    let live = vec![true; n];
    let order = neighbor_order(inst, x, inst.degrees(), &live)
        .map_err(|_| Error::PreconditionViolated("neighbourhood of x is not normal"))?;
    let entry = |v| order.entries.iter().find(|e| e.vertex == v).copied();
    let (ey, ez) = (entry(y).unwrap(), entry(z).unwrap());
    if strictly_precedes(&ez, &ey) {
        return Err(Error::PreconditionViolated("z precedes y"));
    }

    let circuit = (0..n)
        .find(|&u| u != x && u != y && u != z && inst.is_chord(u, z) && real.is_edge(u, y) && !real.is_edge(u, z))
        .map(|u| alloc::vec![x, z, u, y])
        .or_else(|| {
            let (yf, zf) = (ey.partner?, ez.partner?);
            if yf == zf || yf == x || zf == x {
                return None;
            }
            if !real.is_edge(y, zf) || !inst.is_chord(z, yf) || real.is_edge(z, yf) {
                return None;
            }
            let u = (0..n).find(|&u| {
                ![x, y, z, yf, zf].contains(&u) && real.is_edge(yf, u) && inst.is_chord(zf, u) && !real.is_edge(zf, u)
            })?;
            Some(alloc::vec![x, z, yf, u, zf, y])
        })
        .ok_or(Error::PreconditionViolated("no repairing circuit exists"))?;

    let circ = ChordCircuit::new(inst, circuit)?;
    let sw = CircularSwap::new(inst, real, circ)?;
    let after = sw.apply(inst, real)?;
    debug_assert!(after.is_edge(x, y) && !after.is_edge(x, z));
    debug_assert!((0..n).all(|v| v == y || v == z || after.is_edge(x, v) == real.is_edge(x, v)));
    Ok(sw)
}
