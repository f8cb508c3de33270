//! Canonical paths between realizations and the audits run along them.
//!
//! The symmetric difference of `X` and `Y` is cut into alternating cycles;
//! the milestones `H_0 = X, ..., H_m = Y` flip one cycle at a time and each
//! cycle is processed by a sweep of chain moves around a pivot `u_1 ≠ s`.
//! Every intermediate realization `Z` is checked through the auxiliary
//! matrix `M_X + M_Y - M_Z`.

use alloc::vec;
use alloc::vec::Vec;

use crate::chain::jump_probability;
use crate::error::{Error, Result};
use crate::instance::{Instance, VertexId};
use crate::realization::{AuditMatrix, Realization, Switch};
use crate::swaps::{decompose_symmetric_difference, ChordCircuit, CircularSwap};

/// Largest allowed Hamming distance from an auxiliary matrix to a realization.
pub const OMEGA_BOUND: usize = 16;

/// Alternating cycles partitioning `E(G) Δ E(H)`, in extraction order.
pub fn ordered_cycle_decomposition(inst: &Instance, g: &Realization, h: &Realization) -> Result<Vec<ChordCircuit>> {
    if !inst.is_bipartite() {
        return Err(Error::NotBipartite);
    }
    let cycles = decompose_symmetric_difference(g, h);
    debug_assert!(cycles.iter().all(is_simple));
    Ok(cycles)
}

fn is_simple(c: &ChordCircuit) -> bool {
    let mut v = c.vertices().to_vec();
    v.sort_unstable();
    v.windows(2).all(|w| w[0] != w[1])
}

/// `H_0 = X`, and `H_{i+1}` is `H_i` with cycle `i` flipped.
pub fn milestones(
    inst: &Instance,
    x: &Realization,
    y: &Realization,
    cycles: &[ChordCircuit],
) -> Result<Vec<Realization>> {
    let mut out = vec![x.clone()];
    let mut cur = x.clone();
    for c in cycles {
        cur = CircularSwap::new(inst, &cur, c.clone())?.apply(inst, &cur)?;
        cur.validate(inst)?;
        out.push(cur.clone());
    }
    if cur != *y {
        return Err(Error::NotAMilestonePair);
    }
    Ok(out)
}

/// How a move arose inside a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepKind {
    Single,
    /// The F-compatible C6 of a double step.
    DoubleC6,
    /// First or second C4 of a double step around a chord PV-pair.
    DoubleFirst,
    DoubleSecond,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepMove {
    pub swap: CircularSwap,
    pub kind: StepKind,
    pub after: Realization,
}

/// The moves that take `g` to `g` with `cycle` flipped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sweep {
    pub pivot: VertexId,
    /// Cycle as `u_1, w_1, ..., u_ℓ, w_ℓ` with `w_ℓ u_1` an edge of `g`.
    pub oriented: ChordCircuit,
    pub moves: Vec<SweepMove>,
}

impl Sweep {
    pub fn weight(&self) -> usize {
        self.moves.iter().map(|m| m.swap.weight()).sum()
    }
}

/// Sweeps the chords of `cycle` from `g` to `g2`.
pub fn sweep_cycle(inst: &Instance, g: &Realization, g2: &Realization, cycle: &ChordCircuit) -> Result<Sweep> {
    if !inst.is_bipartite() {
        return Err(Error::NotBipartite);
    }
    let mut delta = g.symmetric_difference(g2);
    let mut chords: Vec<_> = cycle.chords().collect();
    delta.sort_unstable();
    chords.sort_unstable();
    if delta != chords || !is_simple(cycle) || cycle.alternation(g).is_none() {
        return Err(Error::NotAMilestonePair);
    }
    let s = inst.designated_center();
    let verts = cycle.vertices();
    let (pos, &u1) = verts
        .iter()
        .enumerate()
        .filter(|&(_, &v)| v < inst.u_size() && Some(v) != s)
        .min_by_key(|&(_, &v)| v)
        .ok_or(Error::NotAMilestonePair)?;
    let forward = cycle.rotated(pos, false);
    let oriented =
        if g.is_edge(forward.vertices()[forward.len() - 1], u1) { forward } else { cycle.rotated(pos, true) };
    let ov = oriented.vertices().to_vec();
    let l = ov.len() / 2;
    let u = |i: usize| ov[2 * (i - 1)];
    let w = |i: usize| ov[2 * (i - 1) + 1];

    let mut cur = g.clone();
    let mut moves = Vec::new();
    let mut push = |cur: &mut Realization, verts: Vec<VertexId>, kind: StepKind| -> Result<()> {
        let sw = CircularSwap::new(inst, cur, ChordCircuit::new(inst, verts)?)?;
        *cur = sw.apply(inst, cur)?;
        moves.push(SweepMove { swap: sw, kind, after: cur.clone() });
        Ok(())
    };

    let mut e = 1;
    while e < l {
        let j = (e + 1..=l).find(|&j| cur.is_edge(u1, w(j))).ok_or(Error::NotAMilestonePair)?;
        let mut c = j;
        while c > e {
            if inst.is_chord(u1, w(c - 1)) {
                push(&mut cur, vec![u1, w(c - 1), u(c), w(c)], StepKind::Single)?;
                c -= 1;
                continue;
            }
            if c < e + 2 {
                return Err(Error::NotAMilestonePair);
            }
            let (w2, u3, w3, u4, w4) = (w(c - 2), u(c - 1), w(c - 1), u(c), w(c));
            let outer_left = vec![u1, w2, u4, w4];
            let inner_left = vec![w2, u3, w3, u4];
            let inner_right = vec![u3, w3, u4, w4];
            let outer_right = vec![u1, w2, u3, w4];
            let (first, second) = if inst.is_chord(w2, u4) {
                if cur.is_edge(w2, u4) {
                    (outer_left, inner_left)
                } else {
                    (inner_left, outer_left)
                }
            } else if inst.is_chord(u3, w4) {
                if cur.is_edge(u3, w4) {
                    (inner_right, outer_right)
                } else {
                    (outer_right, inner_right)
                }
            } else {
                push(&mut cur, vec![u1, w2, u3, w3, u4, w4], StepKind::DoubleC6)?;
                c -= 2;
                continue;
            };
            push(&mut cur, first, StepKind::DoubleFirst)?;
            push(&mut cur, second, StepKind::DoubleSecond)?;
            c -= 2;
        }
        e = j;
    }
    if cur != *g2 {
        return Err(Error::NotAMilestonePair);
    }
    Ok(Sweep { pivot: u1, oriented, moves })
}

/// `M_X + M_Y - M_Z`.
pub fn auxiliary_matrix(inst: &Instance, x: &Realization, y: &Realization, z: &Realization) -> Result<AuditMatrix> {
    AuditMatrix::auxiliary(inst, x, y, z)
}

/// Shape of the positions holding -1 or 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BadPositionAudit {
    pub count2: usize,
    pub count_minus1: usize,
    /// Positions holding anything outside `{-1, 0, 1, 2}`.
    pub out_of_range: usize,
    pub same_column: bool,
    /// Whether the common column (if any) differs from the center column.
    pub column_not_center: bool,
    pub column: Option<usize>,
}

impl BadPositionAudit {
    /// At most two 2s, at most one -1, all in one column other than `s`.
    pub fn is_good(&self) -> bool {
        self.out_of_range == 0
            && self.count2 <= 2
            && self.count_minus1 <= 1
            && self.same_column
            && self.column_not_center
    }

    pub fn total(&self) -> usize {
        self.count2 + self.count_minus1 + self.out_of_range
    }
}

pub fn audit_bad_positions(m: &AuditMatrix) -> BadPositionAudit {
    let bad = m.bad_positions();
    let column = bad.first().map(|b| b.0);
    let same_column = bad.iter().all(|b| Some(b.0) == column);
    BadPositionAudit {
        count2: bad.iter().filter(|b| b.2 == 2).count(),
        count_minus1: bad.iter().filter(|b| b.2 == -1).count(),
        out_of_range: bad.iter().filter(|b| !(-1..=2).contains(&b.2)).count(),
        same_column,
        column_not_center: !same_column || column.is_none() || column != m.center(),
        column,
    }
}

/// All switches on `m`, in a fixed order.
fn all_switches(m: &AuditMatrix) -> impl Iterator<Item = Switch> + '_ {
    let (nc, nr) = (m.cols(), m.rows());
    (0..nc)
        .flat_map(move |c0| {
            (c0 + 1..nc).flat_map(move |c1| {
                (0..nr).flat_map(move |r0| {
                    (0..nr).filter(move |&r1| r1 != r0).map(move |r1| Switch { cols: (c0, c1), rows: (r0, r1) })
                })
            })
        })
        .filter(|sw| m.switch_allowed(sw))
}

/// `Some(None)` if the pattern is already good, `Some(Some(sw))` if the
/// switch `sw` makes it good, `None` if no single switch does.
pub fn good_within_one_switch(m: &AuditMatrix) -> Option<Option<Switch>> {
    if audit_bad_positions(m).is_good() {
        return Some(None);
    }
    all_switches(m)
        .find(|sw| {
            let mut t = m.clone();
            t.apply_switch(sw).is_ok() && audit_bad_positions(&t).is_good()
        })
        .map(Some)
}

/// Whether [`switch_repair`] applies: a good bad-position pattern and equal
/// column sums away from `s`.
pub fn repair_precondition(m: &AuditMatrix) -> bool {
    let s = m.center();
    let mut sums = (0..m.cols()).filter(|&c| Some(c) != s).map(|c| m.col_sum(c));
    let first = sums.next();
    audit_bad_positions(m).is_good() && sums.all(|x| Some(x) == first)
}

/// Turns an auxiliary matrix into a realization matrix by switches.
///
/// The bad positions sit in one column `u`. A lone -1 or 2 is cleared with
/// one switch against another column; a 2 with a -1 is either cleared at
/// once or moved to a column `u' ∉ {u, s}` as a lone value; two 2s with a
/// -1 are first reduced to the previous case.
pub fn switch_repair(m: &AuditMatrix) -> Result<(Vec<Switch>, AuditMatrix)> {
    if !repair_precondition(m) {
        return Err(Error::PreconditionViolated("bad positions outside the repairable pattern"));
    }
    let mut cur = m.clone();
    let mut switches = Vec::new();
    while let Some(&(u, _, _)) = cur.bad_positions().first() {
        if switches.len() >= 8 {
            return Err(Error::PreconditionViolated("switch repair does not terminate"));
        }
        let bad = cur.bad_positions();
        let twos: Vec<usize> = bad.iter().filter(|b| b.0 == u && b.2 == 2).map(|b| b.1).collect();
        let minus: Vec<usize> = bad.iter().filter(|b| b.0 == u && b.2 == -1).map(|b| b.1).collect();
        let sw = match (twos.as_slice(), minus.as_slice()) {
            ([], [w]) => lone_minus(&cur, u, *w),
            ([w], []) | ([w, _], []) => lone_two(&cur, u, *w),
            ([w1], [w2]) => two_and_minus(&cur, u, *w1, *w2),
            ([w1, w2], [w3]) => two_twos_and_minus(&cur, u, *w1, *w2, *w3),
            _ => None,
        }
        .ok_or(Error::PreconditionViolated("no repairing switch"))?;
        cur.apply_switch(&sw)?;
        switches.push(sw);
    }
    Ok((switches, cur))
}

fn val(m: &AuditMatrix, c: usize, r: usize) -> Option<i8> {
    m.value(c, r)
}

/// Columns other than `u`, those different from `s` first.
fn other_columns(m: &AuditMatrix, u: usize, allow_center: bool) -> Vec<usize> {
    let s = m.center();
    let mut cols: Vec<usize> = (0..m.cols()).filter(|&c| c != u && Some(c) != s).collect();
    if allow_center {
        cols.extend(s.filter(|&c| c != u));
    }
    cols
}

/// Switch adding 1 at `(u, plus)` and `(v, minus)` and subtracting 1 at
/// `(u, minus)` and `(v, plus)`.
fn sw(u: usize, v: usize, plus: usize, minus: usize) -> Switch {
    Switch { cols: (u, v), rows: (plus, minus) }
}

fn lone_minus(m: &AuditMatrix, u: usize, w: usize) -> Option<Switch> {
    for v in other_columns(m, u, true) {
        if val(m, v, w) != Some(1) {
            continue;
        }
        for w2 in (0..m.rows()).filter(|&r| r != w) {
            if val(m, u, w2) == Some(1) && val(m, v, w2) == Some(0) {
                return Some(sw(u, v, w, w2));
            }
        }
    }
    None
}

fn lone_two(m: &AuditMatrix, u: usize, w: usize) -> Option<Switch> {
    for v in other_columns(m, u, true) {
        if val(m, v, w) != Some(0) {
            continue;
        }
        for w2 in (0..m.rows()).filter(|&r| r != w) {
            if val(m, u, w2) == Some(0) && val(m, v, w2) == Some(1) {
                return Some(sw(u, v, w2, w));
            }
        }
    }
    None
}

/// 2 at `(u, w1)`, -1 at `(u, w2)`.
fn two_and_minus(m: &AuditMatrix, u: usize, w1: usize, w2: usize) -> Option<Switch> {
    let fits = |v: usize, a: i8, b: i8| val(m, v, w2) == Some(a) && val(m, v, w1) == Some(b);
    other_columns(m, u, true)
        .into_iter()
        .find(|&v| fits(v, 1, 0))
        .or_else(|| other_columns(m, u, false).into_iter().find(|&v| fits(v, 1, 1)))
        .or_else(|| other_columns(m, u, false).into_iter().find(|&v| fits(v, 0, 0)))
        .map(|v| sw(u, v, w2, w1))
}

/// 2s at `(u, w1)`, `(u, w2)`, -1 at `(u, w3)`.
fn two_twos_and_minus(m: &AuditMatrix, u: usize, w1: usize, w2: usize, w3: usize) -> Option<Switch> {
    for v in other_columns(m, u, true) {
        for t in [w1, w2] {
            if val(m, v, t) == Some(0) && val(m, v, w3) == Some(1) {
                return Some(sw(u, v, w3, t));
            }
        }
    }
    for v in other_columns(m, u, false) {
        if val(m, v, w1) != Some(0) {
            continue;
        }
        for w4 in (0..m.rows()).filter(|&r| r != w1 && r != w2 && r != w3) {
            if val(m, v, w4) == Some(1) && val(m, u, w4) == Some(0) {
                return Some(sw(u, v, w4, w1));
            }
        }
    }
    None
}

/// Hamming distance from `m` to the nearest matrix in `realizations`.
pub fn nearest_realization_distance(m: &AuditMatrix, realizations: &[AuditMatrix]) -> Option<usize> {
    realizations.iter().map(|r| m.hamming(r)).min()
}

/// Distance to a realization reached constructively: at most one switch to
/// reach a repairable pattern, then [`switch_repair`].
pub fn constructive_repair(m: &AuditMatrix) -> Option<(Vec<Switch>, AuditMatrix)> {
    if let Ok(r) = switch_repair(m) {
        return Some(r);
    }
    all_switches(m).find_map(|s| {
        let mut t = m.clone();
        t.apply_switch(&s).ok()?;
        let (mut rest, k) = switch_repair(&t).ok()?;
        rest.insert(0, s);
        Some((rest, k))
    })
}

/// Audit of one realization `Z` on the path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepAudit {
    pub step: usize,
    pub bad: BadPositionAudit,
    pub within_one_switch: bool,
    /// Bad positions incident to the sweep pivot, when inside a sweep.
    pub bad_at_pivot: Option<usize>,
    /// `None` when the repair precondition fails.
    pub repair_switches: Option<usize>,
    /// Hamming distance to the realization built by constructive repair.
    pub constructive_gap: Option<usize>,
    /// Hamming distance to the nearest realization, when they were supplied.
    pub nearest_gap: Option<usize>,
    pub legal_move: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathStep {
    pub cycle: usize,
    pub pivot: VertexId,
    pub kind: StepKind,
    pub swap: CircularSwap,
    pub after: Realization,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleSummary {
    pub length: usize,
    pub weight: usize,
    pub pivot: VertexId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathReport {
    pub x: Realization,
    pub y: Realization,
    pub cycles: Vec<ChordCircuit>,
    pub milestones: Vec<Realization>,
    pub cycle_summaries: Vec<CycleSummary>,
    pub steps: Vec<PathStep>,
    /// One entry per realization on the path, `X` first.
    pub audits: Vec<StepAudit>,
}

impl PathReport {
    pub fn weight(&self) -> usize {
        self.steps.iter().map(|s| s.swap.weight()).sum()
    }

    /// Every cycle of length `2ℓ` was processed with weight `ℓ - 1`.
    pub fn theta_holds(&self) -> bool {
        self.cycle_summaries.iter().all(|c| c.weight + 1 == c.length / 2)
    }

    /// Every auxiliary matrix lies within Hamming distance 16 of a
    /// realization, constructively and (when checked) by exhaustive search.
    pub fn omega_holds(&self) -> bool {
        self.audits.iter().all(|a| {
            a.constructive_gap.is_some_and(|g| g <= OMEGA_BOUND) && a.nearest_gap.is_none_or(|g| g <= OMEGA_BOUND)
        })
    }

    pub fn max_constructive_gap(&self) -> usize {
        self.audits.iter().filter_map(|a| a.constructive_gap).max().unwrap_or(0)
    }

    pub fn max_nearest_gap(&self) -> Option<usize> {
        self.audits.iter().map(|a| a.nearest_gap).collect::<Option<Vec<_>>>().map(|g| g.into_iter().max().unwrap_or(0))
    }

    /// First audit failure as `(step, reason)`.
    pub fn first_failure(&self) -> Option<(usize, &'static str)> {
        if let Some(i) = self.cycle_summaries.iter().position(|c| c.weight + 1 != c.length / 2) {
            return Some((i, "sweep weight differs from l - 1"));
        }
        for a in &self.audits {
            let reason = if !a.legal_move {
                "step is not a chain move"
            } else if !a.within_one_switch {
                "bad positions not within one switch of the allowed pattern"
            } else if a.bad_at_pivot.is_some_and(|k| k + 1 < a.bad.total()) {
                "more than one bad chord away from the pivot"
            } else if a.bad.total() > 4 {
                "more than four bad chords"
            } else if !a.constructive_gap.is_some_and(|g| g <= OMEGA_BOUND) {
                "constructive repair exceeds the Hamming bound"
            } else if a.nearest_gap.is_some_and(|g| g > OMEGA_BOUND) {
                "nearest realization exceeds the Hamming bound"
            } else {
                continue;
            };
            return Some((a.step, reason));
        }
        None
    }
}

/// The canonical path from `x` to `y` with all per-step audits. Passing the
/// full realization list adds the exhaustive nearest-realization check.
pub fn canonical_path(
    inst: &Instance,
    x: &Realization,
    y: &Realization,
    realizations: Option<&[Realization]>,
) -> Result<PathReport> {
    x.validate(inst)?;
    y.validate(inst)?;
    let cycles = ordered_cycle_decomposition(inst, x, y)?;
    let stones = milestones(inst, x, y, &cycles)?;
    let mut steps = Vec::new();
    let mut cycle_summaries = Vec::new();
    for (i, c) in cycles.iter().enumerate() {
        let sweep = sweep_cycle(inst, &stones[i], &stones[i + 1], c)?;
        cycle_summaries.push(CycleSummary { length: c.len(), weight: sweep.weight(), pivot: sweep.pivot });
        for m in sweep.moves {
            steps.push(PathStep { cycle: i, pivot: sweep.pivot, kind: m.kind, swap: m.swap, after: m.after });
        }
    }
    let targets: Option<Vec<AuditMatrix>> =
        realizations.map(|rs| rs.iter().map(|r| AuditMatrix::from_realization(inst, r)).collect()).transpose()?;

    let mut audits = Vec::with_capacity(steps.len() + 1);
    let mut prev = x;
    for k in 0..=steps.len() {
        let (z, pivot, legal) = if k == 0 {
            (x, None, true)
        } else {
            let st = &steps[k - 1];
            (&st.after, Some(st.pivot), jump_probability(inst, prev, &st.after).is_ok())
        };
        let m = auxiliary_matrix(inst, x, y, z)?;
        let bad = audit_bad_positions(&m);
        let repair = switch_repair(&m).ok();
        let constructive = repair.clone().or_else(|| constructive_repair(&m));
        audits.push(StepAudit {
            step: k,
            bad,
            within_one_switch: good_within_one_switch(&m).is_some(),
            bad_at_pivot: pivot.map(|p| m.bad_positions().iter().filter(|b| b.0 == p).count()),
            repair_switches: repair.map(|r| r.0.len()),
            constructive_gap: constructive.map(|(_, k)| m.hamming(&k)),
            nearest_gap: targets.as_deref().and_then(|t| nearest_realization_distance(&m, t)),
            legal_move: legal,
        });
        prev = z;
    }
    Ok(PathReport { x: x.clone(), y: y.clone(), cycles, milestones: stones, cycle_summaries, steps, audits })
}

/// Runs [`canonical_path`] and turns the first failed audit into an error.
pub fn verify_theta_omega(
    inst: &Instance,
    x: &Realization,
    y: &Realization,
    realizations: Option<&[Realization]>,
) -> Result<PathReport> {
    let report = canonical_path(inst, x, y, realizations)?;
    match report.first_failure() {
        Some((step, reason)) => Err(Error::AuditFailed { step, reason }),
        None => Ok(report),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::enumerate_all;
    use crate::realization::{adjacency_matrix, Cell};

    fn f2() -> Instance {
        Instance::bipartite(&[1, 1, 1], &[1, 1, 1], None, &[], &[(0, 0), (1, 1), (2, 2)]).unwrap()
    }

    fn local(inst: &Instance, e: &[(usize, usize)]) -> Realization {
        Realization::from_local_edges(inst, e).unwrap()
    }

    #[test]
    fn f2_path() {
        let inst = f2();
        let ra = local(&inst, &[(0, 1), (1, 2), (2, 0)]);
        let rb = local(&inst, &[(0, 2), (1, 0), (2, 1)]);
        let all = enumerate_all(&inst, 40).unwrap();
        let rep = verify_theta_omega(&inst, &ra, &rb, Some(&all)).unwrap();
        assert_eq!(rep.cycles.len(), 1);
        assert_eq!(rep.steps.len(), 1);
        assert_eq!(rep.steps[0].kind, StepKind::DoubleC6);
        assert_eq!(rep.weight(), 2);
        assert_eq!(rep.max_nearest_gap(), Some(0));
        let same = canonical_path(&inst, &ra, &ra, None).unwrap();
        assert!(same.steps.is_empty() && same.milestones == vec![ra.clone()]);
        let m = auxiliary_matrix(&inst, &ra, &rb, &ra).unwrap();
        assert_eq!(m, adjacency_matrix(&inst, &rb).unwrap());
    }

    #[test]
    fn unrestricted_c6_takes_two_c4s() {
        let inst = Instance::bipartite(&[1; 3], &[1; 3], None, &[], &[]).unwrap();
        let x = local(&inst, &[(0, 0), (1, 1), (2, 2)]);
        let y = local(&inst, &[(0, 1), (1, 2), (2, 0)]);
        let cycles = ordered_cycle_decomposition(&inst, &x, &y).unwrap();
        assert_eq!(cycles.len(), 1);
        let sweep = sweep_cycle(&inst, &x, &y, &cycles[0]).unwrap();
        assert_eq!(sweep.moves.len(), 2);
        assert_eq!(sweep.weight(), 2);
        assert_ne!(sweep.pivot, 0);
    }

    #[test]
    fn c4_cycle_is_one_move() {
        let inst = Instance::bipartite(&[1; 2], &[1; 2], None, &[], &[]).unwrap();
        let x = local(&inst, &[(0, 0), (1, 1)]);
        let y = local(&inst, &[(0, 1), (1, 0)]);
        let rep = canonical_path(&inst, &x, &y, None).unwrap();
        assert_eq!(rep.steps.len(), 1);
        assert_eq!(rep.steps[0].kind, StepKind::Single);
        assert!(rep.first_failure().is_none());
    }

    #[test]
    fn figure_eight_splits_into_cycles() {
        // u0 sits on both cycles of the symmetric difference
        let inst = Instance::bipartite(&[2, 1, 1, 0], &[1, 1, 1, 1], None, &[], &[]).unwrap();
        let x = local(&inst, &[(0, 0), (0, 2), (1, 1), (2, 3)]);
        let y = local(&inst, &[(0, 1), (0, 3), (1, 0), (2, 2)]);
        let cycles = ordered_cycle_decomposition(&inst, &x, &y).unwrap();
        assert_eq!(cycles.len(), 2);
        let total: usize = cycles.iter().map(ChordCircuit::len).sum();
        assert_eq!(total, x.symmetric_difference(&y).len());
        let stones = milestones(&inst, &x, &y, &cycles).unwrap();
        assert_eq!(stones.len(), 3);
        stones[1].validate(&inst).unwrap();
    }

    #[test]
    fn bad_position_audit_counts() {
        let inst = f2();
        let ra = local(&inst, &[(0, 1), (1, 2), (2, 0)]);
        let m = adjacency_matrix(&inst, &ra).unwrap();
        let a = audit_bad_positions(&m);
        assert_eq!((a.count2, a.count_minus1, a.same_column, a.column_not_center), (0, 0, true, true));
        let open = Instance::bipartite(&[1; 2], &[1; 2], None, &[], &[]).unwrap();
        let x = local(&open, &[(0, 0), (1, 1)]);
        let y = local(&open, &[(0, 1), (1, 0)]);
        let m = auxiliary_matrix(&open, &x, &x, &y).unwrap();
        let a = audit_bad_positions(&m);
        assert_eq!((a.count2, a.count_minus1, a.same_column), (2, 2, false));
    }

    #[test]
    fn repair_of_lone_minus() {
        let inst = Instance::bipartite(&[2; 4], &[2; 4], None, &[], &[]).unwrap();
        let r = local(&inst, &[(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 3), (3, 3), (3, 0)]);
        let mut m = adjacency_matrix(&inst, &r).unwrap();
        // move a unit inside column 1: -1 at w0, 2 at w1 keeps the sums
        let mut bumped = m.clone();
        bumped.apply_switch(&Switch { cols: (1, 0), rows: (1, 0) }).unwrap();
        assert!(audit_bad_positions(&bumped).total() > 0);
        let (switches, k) = constructive_repair(&bumped).unwrap();
        assert!(!switches.is_empty());
        assert!(k.is_zero_one());
        k.to_realization(&inst).unwrap();
        let (none, same) = switch_repair(&m).unwrap();
        assert!(none.is_empty() && same == m);
        m = bumped;
        assert!(m.bad_positions().iter().all(|b| b.2 == 2 || b.2 == -1));
        assert!(m.row_major().iter().flatten().all(|c| *c != Cell::Forbidden));
    }
}
