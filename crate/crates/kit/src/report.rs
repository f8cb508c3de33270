//! JSON payloads. Each builder is what the matching subcommand prints, so
//! library callers and the CLI see the same bytes.

use rds_core::chain::KernelReport;
use rds_core::count::{CountMode, CountReport, LevelOutcome};
use rds_core::paths::{PathReport, StepKind};
use rds_core::swaps::{CircularSwap, SwapDistance};
use rds_core::{Instance, Kind, Prob, Realization, VertexId};
use serde_json::{json, Map, Value};

use crate::format::realization_json;

pub const SCHEMA: &str = "rds-kit/1";

/// Adds the schema tag and the command name.
pub fn tagged(command: &str, body: Value) -> Value {
    let mut map = match body {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("result".into(), other);
            m
        }
    };
    map.insert("schema".into(), SCHEMA.into());
    map.insert("command".into(), command.into());
    Value::Object(map)
}

/// Canonical text form: compact JSON with sorted keys and a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = v.to_string();
    s.push('\n');
    s
}

pub fn ratio(p: &Prob) -> String {
    format!("{}/{}", p.numer(), p.denom())
}

/// `u3`, `w0` or `v5`.
pub fn label(inst: &Instance, v: VertexId) -> String {
    let prefix = match inst.kind() {
        Kind::General => 'v',
        _ if v < inst.u_size() => 'u',
        _ => 'w',
    };
    format!("{prefix}{}", inst.local(v))
}

pub fn swap_json(inst: &Instance, sw: &CircularSwap) -> Value {
    let circuit: Vec<String> = sw.circuit().vertices().iter().map(|&v| label(inst, v)).collect();
    json!({
        "circuit": circuit,
        "first_is_edge": sw.first_is_edge(),
        "f_compatible": sw.is_f_compatible(),
        "weight": sw.weight(),
    })
}

pub fn check(inst: &Instance, real: Option<&Realization>) -> Value {
    tagged("check", json!({ "graphical": real.is_some(), "half_regular": inst.half_regular() }))
}

pub fn construct(inst: &Instance, real: Option<&Realization>) -> Value {
    tagged(
        "construct",
        json!({
            "graphical": real.is_some(),
            "realization": real.map(|r| realization_json(inst, r)),
        }),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleConfig {
    pub seed: u64,
    pub steps: u64,
    pub samples: usize,
}

pub fn sample(inst: &Instance, config: &SampleConfig, ends: &[Realization]) -> Value {
    let samples: Vec<Value> = ends.iter().map(|r| realization_json(inst, r)).collect();
    tagged(
        "sample",
        json!({
            "config": { "seed": config.seed, "steps": config.steps, "samples": config.samples,
                        "streams": format!("0..{}", config.samples) },
            "samples": samples,
        }),
    )
}

pub fn enumerate(inst: &Instance, all: &[Realization]) -> Value {
    let reals: Vec<Value> = all.iter().map(|r| realization_json(inst, r)).collect();
    tagged("enumerate", json!({ "count": all.len().to_string(), "realizations": reals }))
}

pub fn count(inst: &Instance, report: &CountReport) -> Value {
    let body = match report.mode {
        CountMode::Exact => json!({
            "mode": "exact",
            "graphical": report.graphical,
            "count": report.exact.map(|e| e.to_integer().to_string()),
        }),
        CountMode::Approximate => {
            let levels: Vec<Value> = report
                .levels
                .iter()
                .map(|l| {
                    let mut v = json!({ "level": l.level, "chord": [label(inst, l.chord.0), label(inst, l.chord.1)] });
                    let m = v.as_object_mut().expect("object literal");
                    match l.outcome {
                        LevelOutcome::Forced { present } => {
                            m.insert("forced".into(), true.into());
                            m.insert("present".into(), present.into());
                        }
                        LevelOutcome::Estimated { hits, total, present, retries, degenerate } => {
                            m.insert("forced".into(), false.into());
                            m.insert("present".into(), present.into());
                            m.insert("hits".into(), hits.to_string().into());
                            m.insert("total".into(), total.to_string().into());
                            m.insert("retries".into(), retries.into());
                            m.insert("degenerate".into(), degenerate.into());
                        }
                    }
                    v
                })
                .collect();
            let config = report.config.map(|c| {
                json!({
                    "seed": c.seed,
                    "samples": c.samples_per_level,
                    "burn_in": c.burn_in,
                    "thin": c.thin,
                    "max_retries": c.max_retries,
                })
            });
            json!({
                "mode": "approximate",
                "graphical": report.graphical,
                "estimate": report.value,
                "estimate_exact": report.exact.as_ref().map(ratio),
                "levels": levels,
                "config": config,
                "half_regular": report.half_regular,
            })
        }
    };
    tagged("count", body)
}

pub fn distance(d: &SwapDistance) -> Value {
    tagged("distance", json!({ "weight": d.weight, "delta": d.delta, "mc": d.mc }))
}

pub fn kernel(inst: &Instance, k: &KernelReport, eigenvalues: &[f64]) -> Value {
    let states: Vec<Value> = k.states.iter().map(|r| realization_json(inst, r)).collect();
    let matrix: Vec<Vec<String>> = k.matrix.iter().map(|row| row.iter().map(ratio).collect()).collect();
    tagged(
        "kernel",
        json!({
            "states": states,
            "matrix": matrix,
            "symmetry_residual": ratio(&k.symmetry_residual),
            "row_sum_residual": ratio(&k.row_sum_residual),
            "min_diagonal": ratio(&k.min_diagonal),
            "stationary_residual": ratio(&k.stationary_residual),
            "symmetric": k.is_symmetric(),
            "lazy": k.is_lazy(),
            "uniform_stationary": k.is_uniform_stationary(),
            "jump_probabilities_agree": k.jump_probabilities_agree,
            "half_regular": k.half_regular,
            "eigenvalues": eigenvalues,
        }),
    )
}

fn step_kind(k: StepKind) -> &'static str {
    match k {
        StepKind::Single => "single",
        StepKind::DoubleC6 => "double_c6",
        StepKind::DoubleFirst => "double_first",
        StepKind::DoubleSecond => "double_second",
    }
}

/// One canonical path with its audits.
pub fn path(inst: &Instance, p: &PathReport) -> Value {
    let cycles: Vec<Value> = p
        .cycle_summaries
        .iter()
        .map(|c| json!({ "length": c.length, "weight": c.weight, "pivot": label(inst, c.pivot) }))
        .collect();
    let steps: Vec<Value> = p
        .steps
        .iter()
        .map(|s| {
            json!({
                "cycle": s.cycle,
                "kind": step_kind(s.kind),
                "swap": swap_json(inst, &s.swap),
            })
        })
        .collect();
    let audits: Vec<Value> = p
        .audits
        .iter()
        .map(|a| {
            json!({
                "step": a.step,
                "twos": a.bad.count2,
                "minus_ones": a.bad.count_minus1,
                "out_of_range": a.bad.out_of_range,
                "good": a.bad.is_good(),
                "within_one_switch": a.within_one_switch,
                "repair_switches": a.repair_switches,
                "constructive_gap": a.constructive_gap,
                "nearest_gap": a.nearest_gap,
                "legal_move": a.legal_move,
            })
        })
        .collect();
    let failure = p.first_failure().map(|(step, reason)| json!({ "step": step, "reason": reason }));
    tagged(
        "audit-paths",
        json!({
            "from": realization_json(inst, &p.x),
            "to": realization_json(inst, &p.y),
            "weight": p.weight(),
            "theta_holds": p.theta_holds(),
            "omega_holds": p.omega_holds(),
            "cycles": cycles,
            "steps": steps,
            "audits": audits,
            "failure": failure,
        }),
    )
}

/// Aggregate over many paths.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PathSummary {
    pub states: usize,
    pub pairs: usize,
    pub failures: usize,
    pub max_weight: usize,
    pub max_constructive_gap: usize,
    pub max_nearest_gap: usize,
    pub max_repair_switches: usize,
    pub first_failure: Option<(usize, usize, usize, &'static str)>,
}

impl PathSummary {
    pub fn add(&mut self, i: usize, j: usize, p: &PathReport) {
        self.pairs += 1;
        self.max_weight = self.max_weight.max(p.weight());
        self.max_constructive_gap = self.max_constructive_gap.max(p.max_constructive_gap());
        self.max_nearest_gap = self.max_nearest_gap.max(p.max_nearest_gap().unwrap_or(0));
        let sw = p.audits.iter().filter_map(|a| a.repair_switches).max().unwrap_or(0);
        self.max_repair_switches = self.max_repair_switches.max(sw);
        if let Some((step, reason)) = p.first_failure() {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some((i, j, step, reason));
            }
        }
    }
}

pub fn path_summary(s: &PathSummary) -> Value {
    let first =
        s.first_failure.map(|(i, j, step, reason)| json!({ "from": i, "to": j, "step": step, "reason": reason }));
    tagged(
        "audit-paths",
        json!({
            "states": s.states,
            "pairs": s.pairs,
            "failures": s.failures,
            "max_weight": s.max_weight,
            "max_constructive_gap": s.max_constructive_gap,
            "max_nearest_gap": s.max_nearest_gap,
            "max_repair_switches": s.max_repair_switches,
            "first_failure": first,
        }),
    )
}

pub fn convert_directed(inst: &Instance, arcs: Option<&[(usize, usize)]>) -> Value {
    let mut file = crate::format::InstanceFile::from_instance(inst);
    if inst.kind() == Kind::Directed {
        file.kind = "bipartite".into();
        file.u_degrees = std::mem::take(&mut file.out_degrees);
        file.w_degrees = std::mem::take(&mut file.in_degrees);
        file.matching = inst.matching().iter().map(|&(a, b)| inst.local_pair(a, b)).collect();
    }
    let mut body = json!({ "instance": file });
    if let Some(a) = arcs {
        body["arcs"] = json!(a);
    }
    tagged("convert-directed", body)
}
