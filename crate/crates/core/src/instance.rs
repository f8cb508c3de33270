//! Problem instances: degrees plus a forbidden star and partial matching.
//!
//! Vertices carry a single global index. For bipartite and directed
//! instances the `U` class occupies `0..u_size` and the `W` class follows at
//! `u_size..u_size + w_size`; general instances use `0..n` directly. All
//! tie-breaks in the crate resolve by ascending global index.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::bits::BitMatrix;
use crate::error::{Error, Result};

pub type VertexId = usize;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Kind {
    #[default]
    Bipartite,
    General,
    Directed,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Bipartite => "bipartite",
            Kind::General => "general",
            Kind::Directed => "directed",
        }
    }
}

/// Vertex class in a bipartite-shaped instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    U,
    W,
}

/// Classification of a pair without reference to a realization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairClass {
    Chord,
    Forbidden,
    IntraClass,
}

/// Classification of a pair relative to a realization. Exactly one variant
/// holds for every pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChordStatus {
    Edge,
    NonEdgeChord,
    ForbiddenNonChord,
    IntraClassNonChord,
}

/// Unvalidated instance description, mirroring the JSON instance format.
///
/// Indices are local to their class: `star_center` is a `U` index,
/// `star_leaves` are `W` indices and matching pairs are `(U, W)` for the
/// bipartite and directed kinds. General instances use plain vertex indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawInstance {
    pub kind: Kind,
    pub u_degrees: Vec<usize>,
    pub w_degrees: Vec<usize>,
    pub degrees: Vec<usize>,
    pub out_degrees: Vec<usize>,
    pub in_degrees: Vec<usize>,
    pub star_center: Option<usize>,
    pub star_leaves: Vec<usize>,
    pub matching: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    kind: Kind,
    u_size: usize,
    w_size: usize,
    degrees: Vec<usize>,
    center: Option<VertexId>,
    star_leaves: Vec<VertexId>,
    matching: Vec<(VertexId, VertexId)>,
    forbidden: BitMatrix,
    half_regular: bool,
}

/// Checks a raw description and builds the instance.
pub fn validate_instance(raw: &RawInstance) -> Result<Instance> {
    match raw.kind {
        Kind::Bipartite => {
            if !raw.degrees.is_empty() {
                return Err(Error::InvalidField("degrees"));
            }
            if !raw.out_degrees.is_empty() || !raw.in_degrees.is_empty() {
                return Err(Error::InvalidField("out_degrees/in_degrees"));
            }
            Instance::bipartite(&raw.u_degrees, &raw.w_degrees, raw.star_center, &raw.star_leaves, &raw.matching)
        }
        Kind::General => {
            if !raw.u_degrees.is_empty() || !raw.w_degrees.is_empty() {
                return Err(Error::InvalidField("u_degrees/w_degrees"));
            }
            if !raw.out_degrees.is_empty() || !raw.in_degrees.is_empty() {
                return Err(Error::InvalidField("out_degrees/in_degrees"));
            }
            Instance::general(&raw.degrees, raw.star_center, &raw.star_leaves, &raw.matching)
        }
        Kind::Directed => {
            if !raw.matching.is_empty() {
                return Err(Error::InvalidField("matching"));
            }
            if !raw.degrees.is_empty() || !raw.u_degrees.is_empty() || !raw.w_degrees.is_empty() {
                return Err(Error::InvalidField("degrees"));
            }
            let base = from_directed(&raw.out_degrees, &raw.in_degrees, true)?;
            if raw.star_center.is_none() && raw.star_leaves.is_empty() {
                return Ok(base);
            }
            let n = raw.out_degrees.len();
            let diagonal: Vec<(usize, usize)> = (0..n).map(|i| (i, i)).collect();
            let mut inst =
                Instance::bipartite(&raw.out_degrees, &raw.in_degrees, raw.star_center, &raw.star_leaves, &diagonal)?;
            inst.kind = Kind::Directed;
            Ok(inst)
        }
    }
}

/// Gale's representation: out-copies form `U`, in-copies form `W`, and the
/// diagonal `(u_i, w_i)` is forbidden so no loops appear. Zero-degree copies
/// are kept as isolated vertices.
pub fn from_directed(out_deg: &[usize], in_deg: &[usize], allow_opposite: bool) -> Result<Instance> {
    if out_deg.len() != in_deg.len() {
        return Err(Error::LengthMismatch(out_deg.len(), in_deg.len()));
    }
    let (so, si): (usize, usize) = (out_deg.iter().sum(), in_deg.iter().sum());
    if so != si {
        return Err(Error::SumMismatch(so, si));
    }
    if !allow_opposite {
        return Err(Error::OppositeArcsUnsupported);
    }
    let n = out_deg.len();
    let diagonal: Vec<(usize, usize)> = (0..n).map(|i| (i, i)).collect();
    let mut inst = Instance::bipartite(out_deg, in_deg, None, &[], &diagonal)?;
    inst.kind = Kind::Directed;
    Ok(inst)
}

/// Reads a realization of a directed instance back as arcs `(x, y)`.
pub fn to_directed(inst: &Instance, real: &crate::Realization) -> Result<Vec<(usize, usize)>> {
    if inst.kind != Kind::Directed {
        return Err(Error::NotDirectedKind);
    }
    Ok(real.local_edges(inst))
}

impl Instance {
    /// Bipartite instance from local indices.
    pub fn bipartite(
        u_degrees: &[usize],
        w_degrees: &[usize],
        star_center: Option<usize>,
        star_leaves: &[usize],
        matching: &[(usize, usize)],
    ) -> Result<Instance> {
        let (nu, nw) = (u_degrees.len(), w_degrees.len());
        if let Some(c) = star_center {
            if c >= nu {
                return Err(Error::StarCenterOutOfRange(c));
            }
        } else if !star_leaves.is_empty() {
            return Err(Error::LeavesWithoutCenter);
        }
        for &l in star_leaves {
            if l >= nw {
                return Err(Error::IndexOutOfRange(nu + l));
            }
        }
        let mut seen_u = vec![false; nu];
        let mut seen_w = vec![false; nw];
        for &(u, w) in matching {
            if u >= nu {
                return Err(Error::IndexOutOfRange(u));
            }
            if w >= nw {
                return Err(Error::IndexOutOfRange(nu + w));
            }
            if seen_u[u] {
                return Err(Error::OverlappingMatching(u));
            }
            if seen_w[w] {
                return Err(Error::OverlappingMatching(nu + w));
            }
            seen_u[u] = true;
            seen_w[w] = true;
        }
        let (su, sw): (usize, usize) = (u_degrees.iter().sum(), w_degrees.iter().sum());
        if su != sw {
            return Err(Error::DegreeSumMismatch { left: su, right: sw });
        }
        let mut degrees = u_degrees.to_vec();
        degrees.extend_from_slice(w_degrees);
        let inst = Instance::assemble(
            Kind::Bipartite,
            nu,
            nw,
            degrees,
            star_center,
            star_leaves.iter().map(|&l| nu + l).collect(),
            matching.iter().map(|&(u, w)| (u, nu + w)).collect(),
        );
        inst.check_degree_capacity()?;
        Ok(inst)
    }

    /// General (non-bipartite) instance. The forbidden set is still a star
    /// plus a matching; every other pair of distinct vertices is a chord.
    pub fn general(
        degrees: &[usize],
        star_center: Option<usize>,
        star_leaves: &[usize],
        matching: &[(usize, usize)],
    ) -> Result<Instance> {
        let n = degrees.len();
        if let Some(c) = star_center {
            if c >= n {
                return Err(Error::StarCenterOutOfRange(c));
            }
        } else if !star_leaves.is_empty() {
            return Err(Error::LeavesWithoutCenter);
        }
        for &l in star_leaves {
            if l >= n {
                return Err(Error::IndexOutOfRange(l));
            }
            if Some(l) == star_center {
                return Err(Error::InvalidField("star_leaves"));
            }
        }
        let mut seen = vec![false; n];
        for &(a, b) in matching {
            for v in [a, b] {
                if v >= n {
                    return Err(Error::IndexOutOfRange(v));
                }
            }
            if a == b {
                return Err(Error::InvalidField("matching"));
            }
            for v in [a, b] {
                if seen[v] {
                    return Err(Error::OverlappingMatching(v));
                }
                seen[v] = true;
            }
        }
        let sum: usize = degrees.iter().sum();
        if !sum.is_multiple_of(2) {
            return Err(Error::DegreeSumMismatch { left: sum, right: sum + 1 });
        }
        let inst = Instance::assemble(
            Kind::General,
            n,
            0,
            degrees.to_vec(),
            star_center,
            star_leaves.to_vec(),
            matching.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect(),
        );
        inst.check_degree_capacity()?;
        Ok(inst)
    }

    pub(crate) fn assemble(
        kind: Kind,
        u_size: usize,
        w_size: usize,
        degrees: Vec<usize>,
        center: Option<VertexId>,
        mut star_leaves: Vec<VertexId>,
        mut matching: Vec<(VertexId, VertexId)>,
    ) -> Instance {
        star_leaves.sort_unstable();
        star_leaves.dedup();
        matching.sort_unstable();
        let n = u_size + w_size;
        let mut forbidden = BitMatrix::new(n);
        if let Some(c) = center {
            for &l in &star_leaves {
                forbidden.set(c, l, true);
            }
        }
        for &(a, b) in &matching {
            forbidden.set(a, b, true);
        }
        let mut inst =
            Instance { kind, u_size, w_size, degrees, center, star_leaves, matching, forbidden, half_regular: false };
        inst.half_regular = inst.compute_half_regular();
        inst
    }

    fn compute_half_regular(&self) -> bool {
        if self.kind == Kind::General {
            return false;
        }
        let s = self.designated_center();
        let mut common = None;
        for u in self.u_vertices() {
            if Some(u) == s {
                continue;
            }
            match common {
                None => common = Some(self.degrees[u]),
                Some(d) if d != self.degrees[u] => return false,
                _ => {}
            }
        }
        true
    }

    /// Rejects degrees that no simple graph on these classes could carry,
    /// forbidden pairs aside. Exceeding the chord count is left to the
    /// graphicality decision.
    fn check_degree_capacity(&self) -> Result<()> {
        for v in 0..self.n() {
            let chords = (0..self.n()).filter(|&y| !self.is_intra_class(v, y)).count();
            if self.degrees[v] > chords {
                return Err(Error::DegreeExceedsChords { vertex: v, degree: self.degrees[v], chords });
            }
        }
        Ok(())
    }

    /// True when degree sums balance and no vertex needs more chords than it
    /// has. Validated instances always satisfy this; derived instances in the
    /// counting recursion may not.
    pub fn is_degree_feasible(&self) -> bool {
        let balanced = match self.kind {
            Kind::General => self.degrees.iter().sum::<usize>() % 2 == 0,
            _ => {
                let su: usize = self.u_vertices().map(|v| self.degrees[v]).sum();
                let sw: usize = self.w_vertices().map(|v| self.degrees[v]).sum();
                su == sw
            }
        };
        balanced && (0..self.n()).all(|v| self.degrees[v] <= self.chord_count(v))
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn is_bipartite(&self) -> bool {
        self.kind != Kind::General
    }

    pub fn u_size(&self) -> usize {
        self.u_size
    }

    pub fn w_size(&self) -> usize {
        self.w_size
    }

    pub fn n(&self) -> usize {
        self.u_size + self.w_size
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.degrees[v]
    }

    /// `U` class, or every vertex for general instances.
    pub fn u_vertices(&self) -> Range<usize> {
        0..self.u_size
    }

    pub fn w_vertices(&self) -> Range<usize> {
        self.u_size..self.n()
    }

    /// Global id of the `j`-th `W` vertex.
    pub fn w(&self, j: usize) -> VertexId {
        self.u_size + j
    }

    pub fn side(&self, v: VertexId) -> Option<Side> {
        match self.kind {
            Kind::General => None,
            _ if v < self.u_size => Some(Side::U),
            _ => Some(Side::W),
        }
    }

    /// Index of `v` within its class.
    pub fn local(&self, v: VertexId) -> usize {
        if self.kind != Kind::General && v >= self.u_size {
            v - self.u_size
        } else {
            v
        }
    }

    /// Pair in local coordinates: `(U index, W index)` for bipartite kinds,
    /// `(min, max)` otherwise.
    pub fn local_pair(&self, a: VertexId, b: VertexId) -> (usize, usize) {
        match self.kind {
            Kind::General => (a.min(b), a.max(b)),
            _ => {
                let (u, w) = if a < b { (a, b) } else { (b, a) };
                (u, w - self.u_size)
            }
        }
    }

    /// Explicitly given star center, if any.
    pub fn star_center(&self) -> Option<VertexId> {
        self.center
    }

    /// The vertex `s`: the star center, or vertex 0 of `U` (or of `V`) when
    /// no star was given.
    pub fn designated_center(&self) -> Option<VertexId> {
        self.center.or(if self.u_size > 0 { Some(0) } else { None })
    }

    pub fn star_leaves(&self) -> &[VertexId] {
        &self.star_leaves
    }

    pub fn matching(&self) -> &[(VertexId, VertexId)] {
        &self.matching
    }

    pub fn half_regular(&self) -> bool {
        self.half_regular
    }

    #[inline]
    pub fn is_forbidden(&self, a: VertexId, b: VertexId) -> bool {
        self.forbidden.get(a, b)
    }

    #[inline]
    pub fn is_intra_class(&self, a: VertexId, b: VertexId) -> bool {
        if a == b {
            return true;
        }
        match self.kind {
            Kind::General => false,
            _ => (a < self.u_size) == (b < self.u_size),
        }
    }

    #[inline]
    pub fn is_chord(&self, a: VertexId, b: VertexId) -> bool {
        !self.is_intra_class(a, b) && !self.forbidden.get(a, b)
    }

    pub fn pair_class(&self, a: VertexId, b: VertexId) -> Result<PairClass> {
        for v in [a, b] {
            if v >= self.n() {
                return Err(Error::IndexOutOfRange(v));
            }
        }
        Ok(if self.is_intra_class(a, b) {
            PairClass::IntraClass
        } else if self.forbidden.get(a, b) {
            PairClass::Forbidden
        } else {
            PairClass::Chord
        })
    }

    /// Vertices `y` with `(v, y)` forbidden.
    pub fn forbidden_partners(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.n()).filter(move |&y| self.forbidden.get(v, y))
    }

    /// Chords incident to `v`.
    pub fn chords_at(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.n()).filter(move |&y| self.is_chord(v, y))
    }

    pub fn chord_count(&self, v: VertexId) -> usize {
        self.chords_at(v).count()
    }

    /// All chords `(a, b)` with `a < b`.
    pub fn chords(&self) -> Vec<(VertexId, VertexId)> {
        let n = self.n();
        let mut out = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                if self.is_chord(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Same structure with different degrees (not re-validated).
    pub(crate) fn with_degrees(&self, degrees: Vec<usize>) -> Instance {
        Instance::assemble(
            self.kind,
            self.u_size,
            self.w_size,
            degrees,
            self.center,
            self.star_leaves.clone(),
            self.matching.clone(),
        )
    }

    /// Same instance with `leaf` added to the star at the current center.
    pub(crate) fn with_star_leaf(&self, center: VertexId, leaf: VertexId) -> Instance {
        debug_assert_eq!(self.designated_center(), Some(center));
        let mut leaves = self.star_leaves.clone();
        leaves.push(leaf);
        Instance::assemble(
            self.kind,
            self.u_size,
            self.w_size,
            self.degrees.clone(),
            Some(center),
            leaves,
            self.matching.clone(),
        )
    }

    /// Drops the current star and moves the center to `center` with an empty
    /// star.
    pub(crate) fn recentered(&self, center: VertexId) -> Instance {
        Instance::assemble(
            self.kind,
            self.u_size,
            self.w_size,
            self.degrees.clone(),
            Some(center),
            Vec::new(),
            self.matching.clone(),
        )
    }
}
