//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rds_core::chain::exact_kernel;
use rds_core::construct::greedy_construct;
use rds_core::count::{approx_count, branch_split, count_by_self_reduction, exact_count, ApproxConfig, Split};
use rds_core::oracle::{build_realization_graph, enumerate_all, uniformity_test, MoveSet};
use rds_core::paths::{auxiliary_matrix, canonical_path, repair_precondition, switch_repair};
use rds_core::swaps::swap_distance;
use rds_core::{Instance, Prob, Realization};
use rds_kit::stats::{kernel_eigenvalues, tv_threshold};

type Outcome = Result<String, String>;

fn diag(k: usize) -> Instance {
    let m: Vec<_> = (0..k).map(|i| (i, i)).collect();
    Instance::bipartite(&vec![1; k], &vec![1; k], None, &[], &m).unwrap()
}

fn f1() -> Instance {
    Instance::bipartite(&[1, 1], &[1, 1], None, &[], &[(0, 0), (1, 1)]).unwrap()
}

fn f4() -> Instance {
    Instance::bipartite(&[1, 2, 2], &[2, 2, 1], Some(0), &[0], &[(1, 1), (2, 2)]).unwrap()
}

fn f5() -> Instance {
    Instance::bipartite(&[2, 1], &[1, 2], None, &[], &[(0, 0), (1, 1)]).unwrap()
}

/// Half-regular star+factor instance built around a random graph, so it is
/// always graphical.
fn random_half_regular(nu: usize, nw: usize, seed: u64) -> Instance {
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

fn random_family() -> Vec<Instance> {
    (0..100).map(|s| random_half_regular(4, 5, s)).collect()
}

/// Small fixed instances of every shape the chain handles.
fn fixtures() -> Vec<(&'static str, Instance)> {
    vec![
        ("F1", f1()),
        ("F2", diag(3)),
        ("F3", diag(4)),
        ("F4", f4()),
        ("F5", f5()),
        ("D5", diag(5)),
        ("partial 4x4", Instance::bipartite(&[1; 4], &[1; 4], None, &[], &[(0, 0), (1, 1), (2, 2)]).unwrap()),
        ("2-regular 4x4", Instance::bipartite(&[2; 4], &[2; 4], Some(0), &[1], &[(1, 0), (2, 2), (3, 3)]).unwrap()),
        ("star 3x4", Instance::bipartite(&[2, 2, 1], &[1, 2, 1, 1], Some(0), &[0, 3], &[(1, 1), (2, 2)]).unwrap()),
        ("unrestricted 3x3", Instance::bipartite(&[2, 1, 1], &[1, 2, 1], None, &[], &[]).unwrap()),
        ("directed 4", rds_core::instance::from_directed(&[2, 1, 1, 1], &[1, 2, 1, 1], true).unwrap()),
        ("half-regular 4x5 #0", random_half_regular(4, 5, 0)),
    ]
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
}

fn sequences(len: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out.into_iter().flat_map(|s| (0..=max).map(move |d| [s.clone(), vec![d]].concat())).collect();
    }
    out
}

/// Every valid bipartite instance with class sizes in `1..=max_side`,
/// degrees up to 3 with equal sums, any diagonal sub-matching and any star
/// at u0.
fn for_each_family_instance(max_side: usize, mut f: impl FnMut(Instance)) {
    for nu in 1..=max_side {
        for nw in 1..=max_side {
            let us = sequences(nu, 3);
            let ws = sequences(nw, 3);
            let diagonals: Vec<Vec<(usize, usize)>> =
                subsets(nu.min(nw)).map(|s| s.into_iter().map(|i| (i, i)).collect()).collect();
            let stars: Vec<Vec<usize>> = subsets(nw).collect();
            for u in &us {
                let su: usize = u.iter().sum();
                for w in ws.iter().filter(|w| w.iter().sum::<usize>() == su) {
                    for m in &diagonals {
                        for leaves in &stars {
                            if let Ok(inst) = Instance::bipartite(u, w, Some(0), leaves, m) {
                                f(inst);
                            }
                        }
                    }
                }
            }
        }
    }
}

fn greedy_completeness() -> Outcome {
    let start = Instant::now();
    let mut total = 0usize;
    let mut exceptions = Vec::new();
    for_each_family_instance(4, |inst| {
        total += 1;
        let greedy = greedy_construct(&inst);
        let any = !enumerate_all(&inst, 40).unwrap().is_empty();
        let valid = greedy.as_ref().is_none_or(|r| r.validate(&inst).is_ok());
        if greedy.is_some() != any || !valid {
            exceptions.push(inst);
        }
    });
    let took = start.elapsed();
    let detail = format!("{total} instances, {} exceptions, {:.1}s", exceptions.len(), took.as_secs_f64());
    if total >= 5000 && exceptions.is_empty() && took < Duration::from_secs(120) {
        Ok(detail)
    } else {
        Err(format!("{detail}; first exception {:?}", exceptions.first()))
    }
}

fn connectivity() -> Outcome {
    let mut checked = 0usize;
    let mut bad = Vec::new();
    let mut check = |name: String, inst: &Instance| {
        let g = build_realization_graph(inst, MoveSet::ChainMoves, 40).unwrap();
        if g.states.is_empty() {
            return;
        }
        checked += 1;
        if !g.is_connected() || !g.is_symmetric() {
            bad.push(name);
        }
    };
    for (name, inst) in fixtures() {
        check(name.into(), &inst);
    }
    for (i, inst) in random_family().iter().enumerate() {
        check(format!("random #{i}"), inst);
    }
    let mut family = Vec::new();
    for_each_family_instance(3, |inst| family.push(inst));
    for inst in &family {
        check(format!("{inst:?}"), inst);
    }
    if bad.is_empty() {
        Ok(format!("{checked} graphical instances connected"))
    } else {
        Err(format!("{} disconnected, first {}", bad.len(), bad[0]))
    }
}

fn distance_formula() -> Outcome {
    let eq1 = Instance::bipartite(&[1, 1], &[1, 1], None, &[], &[]).unwrap();
    let e1a = Realization::from_local_edges(&eq1, &[(0, 0), (1, 1)]).unwrap();
    let e1b = Realization::from_local_edges(&eq1, &[(0, 1), (1, 0)]).unwrap();
    let f2 = diag(3);
    let ra = Realization::from_local_edges(&f2, &[(0, 1), (1, 2), (2, 0)]).unwrap();
    let rb = Realization::from_local_edges(&f2, &[(0, 2), (1, 0), (2, 1)]).unwrap();
    let d1 = swap_distance(&e1a, &e1b, 16).unwrap().weight;
    let d2 = swap_distance(&ra, &rb, 16).unwrap().weight;
    if (d1, d2) != (1, 2) {
        return Err(format!("named values: swap example {d1} (want 1), F2 {d2} (want 2)"));
    }

    let mut instances: Vec<Instance> = fixtures().into_iter().map(|(_, i)| i).collect();
    instances.push(eq1);
    instances.extend(random_family());
    for_each_family_instance(3, |inst| instances.push(inst));

    let (mut used, mut pairs) = (0usize, 0usize);
    for inst in &instances {
        let all = enumerate_all(inst, 40).unwrap();
        if all.len() < 2 || all.len() > 30 {
            continue;
        }
        used += 1;
        let g = build_realization_graph(inst, MoveSet::AllFSwaps, 40).unwrap();
        for i in 0..all.len() {
            let shortest = g.shortest_weights(i);
            for j in 0..all.len() {
                if all[i].symmetric_difference(&all[j]).len() > 16 {
                    continue;
                }
                pairs += 1;
                let d = swap_distance(&all[i], &all[j], 16).map_err(|e| format!("{inst:?}: {e}"))?;
                if Some(d.weight) != shortest[j] {
                    return Err(format!(
                        "{inst:?} pair ({i},{j}): formula {} vs shortest path {:?}",
                        d.weight, shortest[j]
                    ));
                }
            }
        }
    }
    Ok(format!("{pairs} pairs over {used} instances exact (swap example 1, F2 2)"))
}

fn kernel_exactness() -> Outcome {
    let k = exact_kernel(&diag(3), 100).unwrap();
    let q = |n, d| Prob::new(n, d);
    if k.matrix != vec![vec![q(3, 4), q(1, 4)], vec![q(1, 4), q(3, 4)]] {
        return Err(format!("F2 kernel {:?}", k.matrix));
    }
    let mut n = 0;
    for (name, inst) in fixtures().into_iter().chain(random_family().into_iter().map(|i| ("random", i))) {
        let k = exact_kernel(&inst, 5000).unwrap();
        if k.states.is_empty() {
            continue;
        }
        n += 1;
        let half = Prob::new(1, 2);
        if !(k.symmetry_residual == Prob::from_integer(0)
            && k.row_sum_residual == Prob::from_integer(0)
            && k.min_diagonal >= half
            && k.stationary_residual == Prob::from_integer(0)
            && k.jump_probabilities_agree)
        {
            return Err(format!("{name}: {:?}", (k.symmetry_residual, k.min_diagonal, k.stationary_residual)));
        }
    }
    Ok(format!("F2 = [[3/4,1/4],[1/4,3/4]]; {n} kernels symmetric, lazy, uniformly stationary"))
}

/// Criteria 5 and 6 share the audited matrices.
fn path_and_repair_audit() -> (Outcome, Outcome) {
    let start = Instant::now();
    let mut instances = vec![diag(3), diag(4)];
    instances.extend(random_family());
    let (mut pairs, mut matrices, mut repaired, mut max_switches) = (0usize, 0usize, 0usize, 0usize);
    let mut path_err = None;
    let mut repair_err = None;
    for inst in &instances {
        let all = enumerate_all(inst, 40).unwrap();
        for x in &all {
            for y in &all {
                if x == y {
                    continue;
                }
                pairs += 1;
                let p = canonical_path(inst, x, y, Some(&all)).unwrap();
                let nearest_ok = p.audits.iter().all(|a| a.nearest_gap.is_some_and(|g| g <= 16));
                if path_err.is_none() && (p.first_failure().is_some() || !nearest_ok || !p.theta_holds()) {
                    path_err = Some(format!("{inst:?} {x:?} -> {y:?}: {:?}", p.first_failure()));
                }
                let zs = std::iter::once(x).chain(p.steps.iter().map(|s| &s.after));
                for z in zs {
                    matrices += 1;
                    let m = auxiliary_matrix(inst, x, y, z).unwrap();
                    if !repair_precondition(&m) {
                        continue;
                    }
                    repaired += 1;
                    let verdict = match switch_repair(&m) {
                        Err(e) => Err(e.to_string()),
                        Ok((switches, end)) => {
                            let mut cur = m.clone();
                            let mut ok = switches.len() <= 3;
                            for sw in &switches {
                                let before = cur.clone();
                                ok &= cur.apply_switch(sw).is_ok() && before.hamming(&cur) == 4;
                            }
                            ok &= cur == end && end.is_zero_one() && end.to_realization(inst).is_ok();
                            max_switches = max_switches.max(switches.len());
                            if ok {
                                Ok(())
                            } else {
                                Err(format!("{} switches", switches.len()))
                            }
                        }
                    };
                    if let (Err(e), None) = (verdict, &repair_err) {
                        repair_err = Some(format!("{inst:?} {x:?} {y:?} {z:?}: {e}"));
                    }
                }
            }
        }
    }
    let took = start.elapsed();
    // Every triple of realizations on the smaller instances, beyond those met on paths.
    for inst in instances.iter().take(12) {
        let all = enumerate_all(inst, 40).unwrap();
        for x in &all {
            for y in &all {
                for z in &all {
                    let m = auxiliary_matrix(inst, x, y, z).unwrap();
                    if !repair_precondition(&m) {
                        continue;
                    }
                    repaired += 1;
                    let ok = switch_repair(&m).is_ok_and(|(switches, end)| {
                        max_switches = max_switches.max(switches.len());
                        let mut cur = m.clone();
                        let steps_ok = switches.iter().all(|sw| {
                            let before = cur.clone();
                            cur.apply_switch(sw).is_ok() && before.hamming(&cur) == 4
                        });
                        switches.len() <= 3 && steps_ok && cur == end && end.to_realization(inst).is_ok()
                    });
                    if !ok && repair_err.is_none() {
                        repair_err = Some(format!("{inst:?} {x:?} {y:?} {z:?}"));
                    }
                }
            }
        }
    }
    let five = match path_err {
        None if took < Duration::from_secs(600) => {
            Ok(format!("{pairs} pairs, {matrices} matrices, 0 exceptions, {:.1}s", took.as_secs_f64()))
        }
        None => Err(format!("{pairs} pairs passed but took {:.1}s", took.as_secs_f64())),
        Some(e) => Err(e),
    };
    let six = match repair_err {
        None => Ok(format!("{repaired} matrices repaired, at most {max_switches} switches")),
        Some(e) => Err(e),
    };
    (five, six)
}

fn uniformity() -> Outcome {
    let f2 = diag(3);
    let u2 = uniformity_test(&f2, &greedy_construct(&f2).unwrap(), 50, 10_000, 1).unwrap();
    if u2.tv_distance > 0.02 {
        return Err(format!("F2 TV {:.4} > 0.02", u2.tv_distance));
    }
    let f3 = diag(4);
    let ev = kernel_eigenvalues(&exact_kernel(&f3, 100).unwrap());
    let threshold = tv_threshold(&ev, 1000, 10_000);
    let u3 = uniformity_test(&f3, &greedy_construct(&f3).unwrap(), 1000, 10_000, 1).unwrap();
    if u3.tv_distance > threshold {
        return Err(format!("F3 TV {:.4} > {threshold:.4}", u3.tv_distance));
    }
    Ok(format!("F2 TV {:.4} <= 0.02; F3 TV {:.4} <= {threshold:.4}", u2.tv_distance, u3.tv_distance))
}

fn branch_identity(inst: &Instance, nodes: &mut usize) -> Result<u128, String> {
    *nodes += 1;
    let here = exact_count(inst, 40).unwrap();
    let sum = match branch_split(inst) {
        Split::Exhausted { count } => count,
        Split::Branch(b) => {
            let a = branch_identity(&b.absent, nodes)?;
            let p = match &b.present {
                Some(p) => branch_identity(p, nodes)?,
                None => 0,
            };
            a + p
        }
    };
    if sum != here {
        return Err(format!("{inst:?}: {here} != {sum}"));
    }
    Ok(here)
}

fn counting() -> Outcome {
    let mut nodes = 0;
    for (name, inst) in fixtures() {
        branch_identity(&inst, &mut nodes).map_err(|e| format!("{name}: {e}"))?;
    }
    for (k, want) in [(3, 2), (4, 9), (5, 44)] {
        let got = (exact_count(&diag(k), 40).unwrap(), count_by_self_reduction(&diag(k)));
        if got != (want, want) {
            return Err(format!("derangements of {k}: {got:?}, want {want}"));
        }
    }
    let f2 = diag(3);
    let mut inside = 0;
    for seed in 0..100 {
        let config = ApproxConfig { samples_per_level: 10_000, burn_in: Some(1000), seed, ..Default::default() };
        let v = approx_count(&f2, &config).unwrap().value;
        if (1.8..=2.2).contains(&v) {
            inside += 1;
        }
    }
    if inside < 95 {
        return Err(format!("approx F2 in [1.8, 2.2] for {inside}/100 seeds"));
    }
    Ok(format!("identity at {nodes} nodes; derangements 2/9/44; approx F2 in range for {inside}/100 seeds"))
}

fn determinism() -> Outcome {
    let dir = format!("{}/tests/fixtures", env!("CARGO_MANIFEST_DIR"));
    let f = |n: &str| format!("{dir}/{n}");
    let runs: Vec<Vec<String>> = vec![
        vec!["check".into(), f("F4.json")],
        vec!["construct".into(), f("F3.json")],
        vec!["sample".into(), f("F3.json"), "--seed".into(), "5".into(), "--samples".into(), "50".into()],
        vec!["enumerate".into(), f("F3.json")],
        vec!["count".into(), "--exact".into(), f("F3.json")],
        vec![
            "count".into(),
            "--approx".into(),
            f("F3.json"),
            "--seed".into(),
            "9".into(),
            "--samples".into(),
            "500".into(),
        ],
        vec!["distance".into(), f("F2.json"), "--from".into(), f("F2_Ra.json"), "--to".into(), f("F2_Rb.json")],
        vec!["kernel".into(), f("F3.json")],
        vec!["audit-paths".into(), f("F3.json")],
        vec!["convert-directed".into(), f("cycle3.json")],
    ];
    let run = |args: &[String], threads: &str| {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv =
            ["rds-kit".to_string()].into_iter().chain(args.iter().cloned()).chain(["--threads".into(), threads.into()]);
        let code = rds_kit::cli::run(argv, &mut out, &mut err);
        (code, out)
    };
    for args in &runs {
        let a = run(args, "1");
        let b = run(args, "1");
        let c = run(args, "3");
        if a.0 != 0 || a != b || a != c {
            return Err(format!("{} differs between runs (exit {})", args.join(" "), a.0));
        }
    }
    Ok(format!("{} subcommand runs byte-identical across reruns and thread counts", runs.len()))
}

fn main() {
    let (five, six) = path_and_repair_audit();
    let results: Vec<(&str, Outcome)> = vec![
        ("greedy completeness", greedy_completeness()),
        ("connectivity under chain moves", connectivity()),
        ("swap distance formula", distance_formula()),
        ("kernel exactness", kernel_exactness()),
        ("canonical path audit", five),
        ("switch repair", six),
        ("uniformity", uniformity()),
        ("counting", counting()),
        ("determinism", determinism()),
    ];
    let mut failed = 0;
    for (i, (name, r)) in results.iter().enumerate() {
        match r {
            Ok(d) => println!("criterion {} {name}: PASS ({d})", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({e})", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
