//! Counting realizations through self-reduction.
//!
//! At the current center `s` let `v` be the least vertex with `(s, v)` a
//! chord. Realizations without the edge `sv` are those of the instance with
//! `v` added to the star; realizations with it correspond to the same
//! instance with `d(s)` and `d(v)` lowered by one. A center whose degree
//! has dropped to zero is retired and the least vertex of `U` (of `V` for
//! general instances) with positive degree takes over with an empty star.

use alloc::boxed::Box;
use alloc::vec::Vec;

use num_traits::{CheckedMul, One};

use crate::chain::{advance, default_burn_in, ChainState};
use crate::construct::greedy_construct;
use crate::error::{Error, Result};
use crate::instance::{Instance, VertexId};
use crate::oracle::{self, DEFAULT_MAX_CHORDS};
use crate::Prob;

/// The two subproblems at a branching chord.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchSplit {
    pub center: VertexId,
    pub chord: (VertexId, VertexId),
    pub absent: Instance,
    /// `None` when `v` has no degree left to give, so the edge cannot occur.
    pub present: Option<Instance>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Split {
    Branch(Box<BranchSplit>),
    /// Nothing left to branch on; the instance has exactly `count`
    /// realizations (0 or 1).
    Exhausted {
        count: u128,
    },
}

pub fn branch_split(inst: &Instance) -> Split {
    let degrees = inst.degrees();
    let s = match inst.designated_center() {
        Some(s) if degrees[s] > 0 => s,
        _ => match inst.u_vertices().find(|&v| degrees[v] > 0) {
            Some(v) => return branch_at(&inst.recentered(v), v),
            None => {
                let all_zero = degrees.iter().all(|&d| d == 0);
                return Split::Exhausted { count: u128::from(all_zero) };
            }
        },
    };
    branch_at(inst, s)
}

fn branch_at(inst: &Instance, s: VertexId) -> Split {
    let Some(v) = inst.chords_at(s).next() else {
        return Split::Exhausted { count: 0 };
    };
    let absent = inst.with_star_leaf(s, v);
    let present = (inst.degree(v) > 0).then(|| {
        let mut d = inst.degrees().to_vec();
        d[s] -= 1;
        d[v] -= 1;
        absent.with_degrees(d)
    });
    Split::Branch(Box::new(BranchSplit { center: s, chord: (s, v), absent, present }))
}

/// Number of realizations by exhaustive enumeration.
pub fn exact_count(inst: &Instance, max_chords: usize) -> Result<u128> {
    Ok(oracle::enumerate_all(inst, max_chords)?.len() as u128)
}

/// Number of realizations by running the full branch recursion.
pub fn count_by_self_reduction(inst: &Instance) -> u128 {
    if !inst.is_degree_feasible() {
        return 0;
    }
    match branch_split(inst) {
        Split::Exhausted { count } => count,
        Split::Branch(b) => count_by_self_reduction(&b.absent) + b.present.as_ref().map_or(0, count_by_self_reduction),
    }
}

/// Presence of the branching chord among sampled realizations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BranchEstimate {
    pub hits: u128,
    pub total: u128,
}

/// Source of presence-probability estimates for [`approx_count_with`].
pub trait BranchEstimator {
    fn estimate(
        &mut self,
        inst: &Instance,
        chord: (VertexId, VertexId),
        level: usize,
        samples: usize,
    ) -> Result<BranchEstimate>;
}

/// Fresh chain per level, started from the greedy realization of the
/// current subinstance, on stream `level` of `seed`.
#[derive(Clone, Copy, Debug)]
pub struct ChainEstimator {
    pub burn_in: Option<u64>,
    pub thin: Option<u64>,
    pub seed: u64,
}

impl BranchEstimator for ChainEstimator {
    fn estimate(
        &mut self,
        inst: &Instance,
        (s, v): (VertexId, VertexId),
        level: usize,
        samples: usize,
    ) -> Result<BranchEstimate> {
        let start = greedy_construct(inst).ok_or(Error::NotGraphical)?;
        let mut state = ChainState::with_stream(start, self.seed, level as u64);
        advance(inst, &mut state, self.burn_in.unwrap_or_else(|| default_burn_in(inst)))?;
        let thin = self.thin.unwrap_or(inst.n() as u64).max(1);
        let mut hits = 0;
        for _ in 0..samples {
            advance(inst, &mut state, thin)?;
            hits += u128::from(state.realization().is_edge(s, v));
        }
        Ok(BranchEstimate { hits, total: samples as u128 })
    }
}

/// Exact branch probabilities from enumeration; with it the estimator
/// reproduces the exact count.
#[derive(Clone, Copy, Debug)]
pub struct ExactEstimator {
    pub max_chords: usize,
}

impl Default for ExactEstimator {
    fn default() -> Self {
        ExactEstimator { max_chords: DEFAULT_MAX_CHORDS }
    }
}

impl BranchEstimator for ExactEstimator {
    fn estimate(
        &mut self,
        inst: &Instance,
        (s, v): (VertexId, VertexId),
        _: usize,
        _: usize,
    ) -> Result<BranchEstimate> {
        let all = oracle::enumerate_all(inst, self.max_chords)?;
        let hits = all.iter().filter(|r| r.is_edge(s, v)).count();
        Ok(BranchEstimate { hits: hits as u128, total: all.len() as u128 })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ApproxConfig {
    pub samples_per_level: usize,
    /// `None` selects [`default_burn_in`].
    pub burn_in: Option<u64>,
    /// Proposals between samples; `None` means `|U| + |W|`.
    pub thin: Option<u64>,
    pub seed: u64,
    /// How often the sample size is doubled after an all-or-nothing estimate.
    pub max_retries: u32,
}

impl Default for ApproxConfig {
    fn default() -> Self {
        ApproxConfig { samples_per_level: 1000, burn_in: None, thin: None, seed: 0, max_retries: 3 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LevelOutcome {
    /// Only one branch is graphical.
    Forced { present: bool },
    Estimated {
        hits: u128,
        total: u128,
        present: bool,
        retries: u32,
        /// The estimate stayed at 0 or 1 after all retries.
        degenerate: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelLog {
    pub level: usize,
    pub chord: (VertexId, VertexId),
    pub outcome: LevelOutcome,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMode {
    Exact,
    Approximate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CountReport {
    pub mode: CountMode,
    pub graphical: bool,
    /// Point estimate (the exact count in exact mode).
    pub value: f64,
    /// The exact count, or the estimate as an exact fraction when it fits.
    pub exact: Option<Prob>,
    pub levels: Vec<LevelLog>,
    pub config: Option<ApproxConfig>,
    pub half_regular: bool,
}

impl CountReport {
    pub fn exact(inst: &Instance, count: u128) -> Self {
        CountReport {
            mode: CountMode::Exact,
            graphical: count > 0,
            value: count as f64,
            exact: Some(Prob::from_integer(count)),
            levels: Vec::new(),
            config: None,
            half_regular: inst.half_regular(),
        }
    }
}

/// Estimates the number of realizations with the chain estimator.
pub fn approx_count(inst: &Instance, config: &ApproxConfig) -> Result<CountReport> {
    let mut est = ChainEstimator { burn_in: config.burn_in, thin: config.thin, seed: config.seed };
    approx_count_with(inst, config, &mut est)
}

/// Walks down the recursion along the majority branch, multiplying by the
/// inverse of each estimated branch probability.
pub fn approx_count_with<E: BranchEstimator>(
    inst: &Instance,
    config: &ApproxConfig,
    est: &mut E,
) -> Result<CountReport> {
    let mut report = CountReport {
        mode: CountMode::Approximate,
        graphical: true,
        value: 1.0,
        exact: Some(Prob::one()),
        levels: Vec::new(),
        config: Some(*config),
        half_regular: inst.half_regular(),
    };
    if greedy_construct(inst).is_none() {
        report.graphical = false;
        report.value = 0.0;
        report.exact = Some(Prob::from_integer(0));
        return Ok(report);
    }
    let mut cur = inst.clone();
    for level in 0.. {
        let b = match branch_split(&cur) {
            Split::Exhausted { count } => {
                debug_assert_eq!(count, 1);
                break;
            }
            Split::Branch(b) => b,
        };
        let absent_ok = greedy_construct(&b.absent).is_some();
        let present_ok = b.present.as_ref().is_some_and(|p| greedy_construct(p).is_some());
        let outcome = match (absent_ok, present_ok) {
            (true, true) => {
                let mut samples = config.samples_per_level.max(1);
                let mut retries = 0;
                let e = loop {
                    let e = est.estimate(&cur, b.chord, level, samples)?;
                    if (e.hits == 0 || e.hits == e.total) && retries < config.max_retries {
                        retries += 1;
                        samples *= 2;
                        continue;
                    }
                    break e;
                };
                let present = 2 * e.hits >= e.total;
                let kept = if present { e.hits } else { e.total - e.hits };
                report.value *= e.total as f64 / kept as f64;
                report.exact = report.exact.and_then(|r| r.checked_mul(&Prob::new(e.total, kept)));
                LevelOutcome::Estimated {
                    hits: e.hits,
                    total: e.total,
                    present,
                    retries,
                    degenerate: e.hits == 0 || e.hits == e.total,
                }
            }
            (a, p) if a != p => LevelOutcome::Forced { present: p },
            _ => return Err(Error::NotGraphical),
        };
        let present = match outcome {
            LevelOutcome::Forced { present } | LevelOutcome::Estimated { present, .. } => present,
        };
        report.levels.push(LevelLog { level, chord: b.chord, outcome });
        cur = if present { b.present.unwrap() } else { b.absent };
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Instance {
        Instance::bipartite(&[1, 1, 1], &[1, 1, 1], None, &[], &[(0, 0), (1, 1), (2, 2)]).unwrap()
    }

    fn f4() -> Instance {
        Instance::bipartite(&[1, 2, 2], &[2, 2, 1], Some(0), &[0], &[(1, 1), (2, 2)]).unwrap()
    }

    #[test]
    fn f2_split() {
        let inst = f2();
        let Split::Branch(b) = branch_split(&inst) else { panic!() };
        assert_eq!(b.chord, (0, inst.w(1)));
        assert_eq!(b.absent.star_leaves(), &[inst.w(1)]);
        let present = b.present.unwrap();
        assert_eq!(present.degrees(), &[0, 1, 1, 1, 0, 1]);
        assert!(present.is_forbidden(0, inst.w(1)));
    }

    #[test]
    fn f4_split_counts() {
        let inst = f4();
        let Split::Branch(b) = branch_split(&inst) else { panic!() };
        assert_eq!(b.chord, (0, inst.w(1)));
        assert_eq!(exact_count(&b.absent, 40), Ok(0));
        assert_eq!(exact_count(b.present.as_ref().unwrap(), 40), Ok(1));
    }

    #[test]
    fn exhausted_instances() {
        let zero = Instance::bipartite(&[0, 0], &[0, 0], None, &[], &[]).unwrap();
        assert_eq!(branch_split(&zero), Split::Exhausted { count: 1 });
        assert_eq!(count_by_self_reduction(&zero), 1);
    }

    #[test]
    fn recursion_matches_enumeration() {
        let f3 = Instance::bipartite(&[1; 4], &[1; 4], None, &[], &[(0, 0), (1, 1), (2, 2), (3, 3)]).unwrap();
        let f5 = Instance::bipartite(&[2, 1], &[1, 2], None, &[], &[(0, 0), (1, 1)]).unwrap();
        let general = Instance::general(&[2, 2, 2, 1, 1], Some(1), &[0], &[(2, 3)]).unwrap();
        for (inst, want) in [(f2(), 2), (f3, 9), (f4(), 1), (f5, 0)] {
            assert_eq!(count_by_self_reduction(&inst), want);
            assert_eq!(exact_count(&inst, 40), Ok(want));
        }
        assert_eq!(count_by_self_reduction(&general), exact_count(&general, 40).unwrap());
    }

    #[test]
    fn exact_estimator_reproduces_count() {
        let cfg = ApproxConfig::default();
        for inst in
            [f2(), f4(), Instance::bipartite(&[2, 2, 2, 2], &[2, 2, 2, 2], Some(0), &[1], &[(1, 0), (2, 2)]).unwrap()]
        {
            let r = approx_count_with(&inst, &cfg, &mut ExactEstimator::default()).unwrap();
            assert_eq!(r.exact, Some(Prob::from_integer(exact_count(&inst, 40).unwrap())));
        }
    }

    #[test]
    fn approx_on_small_fixtures() {
        let cfg = ApproxConfig { samples_per_level: 2000, burn_in: Some(200), seed: 5, ..Default::default() };
        let r = approx_count(&f4(), &cfg).unwrap();
        assert_eq!(r.value, 1.0);
        assert!(r.levels.iter().all(|l| matches!(l.outcome, LevelOutcome::Forced { .. })));
        let f5 = Instance::bipartite(&[2, 1], &[1, 2], None, &[], &[(0, 0), (1, 1)]).unwrap();
        let r = approx_count(&f5, &cfg).unwrap();
        assert!(!r.graphical);
        assert_eq!(r.value, 0.0);
        let r = approx_count(&f2(), &cfg).unwrap();
        assert!((1.7..2.3).contains(&r.value), "{}", r.value);
        assert_eq!(r, approx_count(&f2(), &cfg).unwrap());
    }
}
