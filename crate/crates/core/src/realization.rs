//! Realizations and their bipartite matrix view.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::bits::BitMatrix;
use crate::error::{Error, Result};
use crate::instance::{ChordStatus, Instance, PairClass, VertexId};

/// A simple graph meeting the instance degrees and avoiding every non-chord.
///
/// Equality and ordering compare the edge sets, so a realization doubles as
/// its own canonical key.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Realization {
    adj: BitMatrix,
}

impl Realization {
    pub(crate) fn empty(n: usize) -> Self {
        Realization { adj: BitMatrix::new(n) }
    }

    /// Builds and validates a realization from global vertex pairs.
    pub fn from_edges(inst: &Instance, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let n = inst.n();
        let mut real = Realization::empty(n);
        for &(a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(Error::IndexOutOfRange(v));
                }
            }
            if !inst.is_chord(a, b) {
                return Err(Error::NotAChord(a, b));
            }
            if real.adj.get(a, b) {
                return Err(Error::DuplicateEdge(a, b));
            }
            real.adj.set(a, b, true);
        }
        real.check_degrees(inst)?;
        Ok(real)
    }

    /// Builds from local pairs: `(U index, W index)` for bipartite kinds,
    /// plain vertex pairs for general instances.
    pub fn from_local_edges(inst: &Instance, edges: &[(usize, usize)]) -> Result<Self> {
        if !inst.is_bipartite() {
            return Realization::from_edges(inst, edges);
        }
        let mut global = Vec::with_capacity(edges.len());
        for &(u, w) in edges {
            if u >= inst.u_size() {
                return Err(Error::IndexOutOfRange(u));
            }
            if w >= inst.w_size() {
                return Err(Error::IndexOutOfRange(inst.w(w)));
            }
            global.push((u, inst.w(w)));
        }
        Realization::from_edges(inst, &global)
    }

    fn check_degrees(&self, inst: &Instance) -> Result<()> {
        for v in 0..inst.n() {
            let actual = self.degree(v);
            if actual != inst.degree(v) {
                return Err(Error::DegreeMismatch { vertex: v, expected: inst.degree(v), actual });
            }
        }
        Ok(())
    }

    /// Full invariant check: every edge a chord, every degree on target.
    pub fn validate(&self, inst: &Instance) -> Result<()> {
        if self.adj.size() != inst.n() {
            return Err(Error::InstanceMismatch);
        }
        for (a, b) in self.adj.pairs() {
            if !inst.is_chord(a, b) {
                return Err(Error::NotAChord(a, b));
            }
        }
        self.check_degrees(inst)
    }

    pub fn n(&self) -> usize {
        self.adj.size()
    }

    #[inline]
    pub fn is_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.adj.get(a, b)
    }

    #[inline]
    pub(crate) fn set_edge(&mut self, a: VertexId, b: VertexId, value: bool) {
        self.adj.set(a, b, value);
    }

    #[inline]
    pub(crate) fn toggle(&mut self, a: VertexId, b: VertexId) {
        self.adj.toggle(a, b);
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj.row_count(v)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.count_pairs()
    }

    /// Edges `(a, b)` with `a < b` in lexicographic order.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        self.adj.pairs().collect()
    }

    /// Edges in local coordinates, sorted lexicographically.
    pub fn local_edges(&self, inst: &Instance) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = self.adj.pairs().map(|(a, b)| inst.local_pair(a, b)).collect();
        e.sort_unstable();
        e
    }

    pub fn chord_status(&self, inst: &Instance, a: VertexId, b: VertexId) -> Result<ChordStatus> {
        Ok(match inst.pair_class(a, b)? {
            PairClass::IntraClass => ChordStatus::IntraClassNonChord,
            PairClass::Forbidden => ChordStatus::ForbiddenNonChord,
            PairClass::Chord if self.is_edge(a, b) => ChordStatus::Edge,
            PairClass::Chord => ChordStatus::NonEdgeChord,
        })
    }

    /// `E(self) Δ E(other)` as sorted pairs.
    pub fn symmetric_difference(&self, other: &Realization) -> Vec<(VertexId, VertexId)> {
        let n = self.n();
        let mut out = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                if self.is_edge(a, b) != other.is_edge(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// Bipartite adjacency matrix.
pub fn adjacency_matrix(inst: &Instance, real: &Realization) -> Result<AuditMatrix> {
    AuditMatrix::from_realization(inst, real)
}

/// One matrix position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cell {
    Forbidden,
    Value(i8),
}

/// Matrix over `U` (columns, left to right) and `W` (rows, bottom to top).
///
/// Realization matrices hold 0/1; auxiliary matrices `M_X + M_Y - M_Z` may
/// also hold -1 and 2. Forbidden positions never take part in arithmetic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AuditMatrix {
    cols: usize,
    rows: usize,
    center: Option<usize>,
    cells: Vec<Cell>,
}

/// A switch adds 1 at `(cols.0, rows.0)` and `(cols.1, rows.1)` and
/// subtracts 1 at `(cols.0, rows.1)` and `(cols.1, rows.0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Switch {
    pub cols: (usize, usize),
    pub rows: (usize, usize),
}

impl AuditMatrix {
    pub fn from_realization(inst: &Instance, real: &Realization) -> Result<Self> {
        if !inst.is_bipartite() {
            return Err(Error::NotBipartite);
        }
        let (cols, rows) = (inst.u_size(), inst.w_size());
        let mut cells = vec![Cell::Value(0); cols * rows];
        for c in 0..cols {
            for r in 0..rows {
                let w = inst.w(r);
                cells[c * rows + r] =
                    if inst.is_forbidden(c, w) { Cell::Forbidden } else { Cell::Value(real.is_edge(c, w) as i8) };
            }
        }
        Ok(AuditMatrix { cols, rows, center: inst.designated_center(), cells })
    }

    /// `M_X + M_Y - M_Z`.
    pub fn auxiliary(inst: &Instance, x: &Realization, y: &Realization, z: &Realization) -> Result<Self> {
        let mut m = AuditMatrix::from_realization(inst, x)?;
        let my = AuditMatrix::from_realization(inst, y)?;
        let mz = AuditMatrix::from_realization(inst, z)?;
        for i in 0..m.cells.len() {
            if let (Cell::Value(a), Cell::Value(b), Cell::Value(c)) = (m.cells[i], my.cells[i], mz.cells[i]) {
                m.cells[i] = Cell::Value(a + b - c);
            }
        }
        Ok(m)
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Column of the star center `s`.
    pub fn center(&self) -> Option<usize> {
        self.center
    }

    #[inline]
    pub fn get(&self, col: usize, row: usize) -> Cell {
        self.cells[col * self.rows + row]
    }

    /// Numeric value, `None` at forbidden positions.
    #[inline]
    pub fn value(&self, col: usize, row: usize) -> Option<i8> {
        match self.get(col, row) {
            Cell::Value(v) => Some(v),
            Cell::Forbidden => None,
        }
    }

    pub fn is_forbidden(&self, col: usize, row: usize) -> bool {
        self.get(col, row) == Cell::Forbidden
    }

    pub fn col_sum(&self, col: usize) -> i32 {
        (0..self.rows).filter_map(|r| self.value(col, r)).map(i32::from).sum()
    }

    pub fn row_sum(&self, row: usize) -> i32 {
        (0..self.cols).filter_map(|c| self.value(c, row)).map(i32::from).sum()
    }

    /// Positions holding anything other than 0 or 1, as `(col, row, value)`.
    pub fn bad_positions(&self) -> Vec<(usize, usize, i8)> {
        let mut out = Vec::new();
        for c in 0..self.cols {
            for r in 0..self.rows {
                if let Some(v) = self.value(c, r) {
                    if v != 0 && v != 1 {
                        out.push((c, r, v));
                    }
                }
            }
        }
        out
    }

    pub fn is_zero_one(&self) -> bool {
        self.bad_positions().is_empty()
    }

    /// Number of positions where the two matrices differ.
    pub fn hamming(&self, other: &AuditMatrix) -> usize {
        debug_assert_eq!((self.cols, self.rows), (other.cols, other.rows));
        self.cells.iter().zip(&other.cells).filter(|(a, b)| a != b).count()
    }

    /// Whether `sw` touches only non-forbidden positions of this matrix.
    pub fn switch_allowed(&self, sw: &Switch) -> bool {
        let (c0, c1) = sw.cols;
        let (r0, r1) = sw.rows;
        c0 != c1
            && r0 != r1
            && c0.max(c1) < self.cols
            && r0.max(r1) < self.rows
            && [(c0, r0), (c1, r1), (c0, r1), (c1, r0)].iter().all(|&(c, r)| !self.is_forbidden(c, r))
    }

    pub fn apply_switch(&mut self, sw: &Switch) -> Result<()> {
        if !self.switch_allowed(sw) {
            return Err(Error::PreconditionViolated("switch touches a forbidden position"));
        }
        let (c0, c1) = sw.cols;
        let (r0, r1) = sw.rows;
        for (c, r, d) in [(c0, r0, 1), (c1, r1, 1), (c0, r1, -1), (c1, r0, -1)] {
            if let Cell::Value(v) = &mut self.cells[c * self.rows + r] {
                *v += d;
            }
        }
        Ok(())
    }

    /// Reads a 0/1 matrix back as a realization of `inst`.
    pub fn to_realization(&self, inst: &Instance) -> Result<Realization> {
        let mut edges = Vec::new();
        for c in 0..self.cols {
            for r in 0..self.rows {
                match self.value(c, r) {
                    Some(1) => edges.push((c, inst.w(r))),
                    Some(0) | None => {}
                    Some(_) => return Err(Error::PreconditionViolated("matrix is not 0/1")),
                }
            }
        }
        Realization::from_edges(inst, &edges)
    }

    /// Rows bottom to top, each row left to right.
    pub fn row_major(&self) -> Vec<Vec<Cell>> {
        (0..self.rows).map(|r| (0..self.cols).map(|c| self.get(c, r)).collect()).collect()
    }
}

/// Renders top row first so the picture matches the coordinate convention.
impl fmt::Display for AuditMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in (0..self.rows).rev() {
            for c in 0..self.cols {
                if c > 0 {
                    f.write_str(" ")?;
                }
                match self.get(c, r) {
                    Cell::Forbidden => f.write_str(" ✠")?,
                    Cell::Value(v) => write!(f, "{v:>2}")?,
                }
            }
            f.write_str("\n")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn f1() -> Instance {
        Instance::bipartite(&[1, 1], &[1, 1], None, &[], &[(0, 0), (1, 1)]).unwrap()
    }

    fn f4() -> Instance {
        Instance::bipartite(&[1, 2, 2], &[2, 2, 1], Some(0), &[0], &[(1, 1), (2, 2)]).unwrap()
    }

    #[test]
    fn f1_matrix() {
        let inst = f1();
        let r1 = Realization::from_local_edges(&inst, &[(0, 1), (1, 0)]).unwrap();
        let m = adjacency_matrix(&inst, &r1).unwrap();
        assert_eq!(m.row_major(), vec![vec![Cell::Forbidden, Cell::Value(1)], vec![Cell::Value(1), Cell::Forbidden]]);
        assert_eq!(m.to_string(), " 1  ✠\n ✠  1\n");
    }

    #[test]
    fn f4_matrix_sums() {
        let inst = f4();
        let r4 = Realization::from_local_edges(&inst, &[(0, 1), (1, 0), (1, 2), (2, 0), (2, 1)]).unwrap();
        let m = adjacency_matrix(&inst, &r4).unwrap();
        assert_eq!((0..3).map(|c| m.col_sum(c)).collect::<Vec<_>>(), vec![1, 2, 2]);
        assert_eq!((0..3).map(|r| m.row_sum(r)).collect::<Vec<_>>(), vec![2, 2, 1]);
        for i in 0..3 {
            assert!(m.is_forbidden(i, i));
        }
        assert_eq!(m.to_realization(&inst).unwrap(), r4);
    }

    #[test]
    fn rejects_bad_edges() {
        let inst = f1();
        assert_eq!(Realization::from_local_edges(&inst, &[(0, 0), (1, 1)]), Err(Error::NotAChord(0, 2)));
        assert!(matches!(Realization::from_local_edges(&inst, &[(0, 1)]), Err(Error::DegreeMismatch { .. })));
        assert_eq!(Realization::from_local_edges(&inst, &[(0, 1), (0, 1)]), Err(Error::DuplicateEdge(0, 3)));
    }

    #[test]
    fn chord_status_with_realization() {
        let inst = f1();
        let r1 = Realization::from_local_edges(&inst, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(r1.chord_status(&inst, 0, 3).unwrap(), ChordStatus::Edge);
        assert_eq!(r1.chord_status(&inst, 0, 2).unwrap(), ChordStatus::ForbiddenNonChord);
        assert_eq!(r1.chord_status(&inst, 0, 1).unwrap(), ChordStatus::IntraClassNonChord);
        let open = Instance::bipartite(&[1, 1], &[1, 1], None, &[], &[]).unwrap();
        let r = Realization::from_local_edges(&open, &[(0, 0), (1, 1)]).unwrap();
        assert_eq!(r.chord_status(&open, 0, 3).unwrap(), ChordStatus::NonEdgeChord);
    }

    #[test]
    fn switch_preserves_sums() {
        let open = Instance::bipartite(&[1, 1], &[1, 1], None, &[], &[]).unwrap();
        let r = Realization::from_local_edges(&open, &[(0, 0), (1, 1)]).unwrap();
        let mut m = adjacency_matrix(&open, &r).unwrap();
        let before = m.clone();
        m.apply_switch(&Switch { cols: (0, 1), rows: (1, 0) }).unwrap();
        assert_eq!(m.hamming(&before), 4);
        assert_eq!(m.to_realization(&open).unwrap().local_edges(&open), vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn auxiliary_identities() {
        let open = Instance::bipartite(&[1, 1], &[1, 1], None, &[], &[]).unwrap();
        let x = Realization::from_local_edges(&open, &[(0, 0), (1, 1)]).unwrap();
        let y = Realization::from_local_edges(&open, &[(0, 1), (1, 0)]).unwrap();
        let mx = adjacency_matrix(&open, &x).unwrap();
        let my = adjacency_matrix(&open, &y).unwrap();
        assert_eq!(AuditMatrix::auxiliary(&open, &x, &y, &x).unwrap(), my);
        assert_eq!(AuditMatrix::auxiliary(&open, &x, &y, &y).unwrap(), mx);
        let a = AuditMatrix::auxiliary(&open, &x, &x, &y).unwrap();
        assert_eq!(a.bad_positions().len(), 4);
    }
}
