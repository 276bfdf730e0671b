//! Gadget certification: exact overflow and potency thresholds, the
//! critical-distribution properties, the tree greedy claims, and the gap
//! constant tying them together.
//!
//! Null and fork joined to a target are trees, so their thresholds come
//! from ascending enumeration with the greedy tree strategy (and the fork
//! doubles as a ground-truth cross-check for the adversarial search). The
//! eye's thresholds come from the adversarial search over the folded
//! variable space.

use std::collections::BTreeMap;

use crate::distribution::PebbleDistribution;
use crate::graph::Graph;
use crate::numbers::Compositions;
use crate::reductions::{build_gadget, Gadget, GadgetKind, GadgetSpec};
use crate::solvers::{greedy_tree_max, reachable, SearchBudget};

use super::adversary::{
    maximize, not_potent_test, not_reachable_test, pendant_path_mass_table, probe_cap, DynCap,
    Mass, Outcome, Problem, Variable,
};
use super::SuiteReport;

/// Everything the certification measures for one gadget.
#[derive(Debug, Clone)]
pub struct GadgetCertification {
    pub kind: GadgetKind,
    pub beta: u32,
    pub c: u32,
    pub overflow_threshold: u64,
    pub potency_threshold: u64,
    pub critical_size: u64,
    pub critical_ok: bool,
    pub search_nodes: u64,
    pub exhausted: bool,
}

/// Gadget graph joined to a fresh target via its overflow edges.
pub fn joined_to_target(g: &Gadget) -> (Graph, usize) {
    let n = g.graph.vertex_count();
    let mut edges: Vec<(usize, usize)> = g.graph.edges().collect();
    for &w in &g.overflow {
        edges.push((w, n));
    }
    (Graph::new(n + 1, &edges).expect("joined graph valid"), n)
}

/// Fast greedy delivery evaluator for a fixed tree and target.
struct TreeDeliver {
    order: Vec<usize>,
    parent: Vec<usize>,
    root: usize,
}

impl TreeDeliver {
    fn new(tree: &Graph, root: usize) -> TreeDeliver {
        let n = tree.vertex_count();
        let mut parent = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(v) = stack.pop() {
            order.push(v);
            for &w in tree.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = v;
                    stack.push(w);
                }
            }
        }
        TreeDeliver {
            order,
            parent,
            root,
        }
    }

    /// Max pebbles placeable on the root; `buf` is reused scratch.
    fn eval(&self, counts: &[u64], buf: &mut Vec<u64>) -> u64 {
        buf.clear();
        buf.extend_from_slice(counts);
        for &v in self.order.iter().rev() {
            if v != self.root {
                let d = buf[v] / 2;
                buf[self.parent[v]] += d;
            }
        }
        buf[self.root]
    }
}

/// Least `k` such that every size-`k` distribution on the gadget passes
/// `test`. Tree gadgets only; `test` sees raw gadget counts.
fn tree_threshold(gadget_vertices: usize, mut test: impl FnMut(&[u64]) -> bool) -> u64 {
    let order: Vec<usize> = (0..gadget_vertices).collect();
    for k in 1..=2000u64 {
        let mut all_ok = true;
        let mut iter = Compositions::new(&order, k);
        while let Some(counts) = iter.next() {
            if !test(counts) {
                all_ok = false;
                break;
            }
        }
        if all_ok {
            return k;
        }
    }
    panic!("threshold not found below 2000 pebbles");
}

/// Certifies null or fork by enumeration (their joined graphs are trees).
fn certify_tree_gadget(g: &Gadget) -> (u64, u64) {
    let (joined, r) = joined_to_target(g);
    let nv = g.graph.vertex_count();
    let to_r = TreeDeliver::new(&joined, r);
    let mut buf = Vec::new();
    let mut full = vec![0u64; nv + 1];

    let overflow = tree_threshold(nv, |counts| {
        full[..nv].copy_from_slice(counts);
        to_r.eval(&full, &mut buf) >= 1
    });

    let potency = match g.spec.kind {
        // The null's quota is zero, satisfied by doing nothing.
        GadgetKind::Null => 0,
        GadgetKind::Fork => {
            let v = g.attachments[0];
            let to_v = TreeDeliver::new(&joined, v);
            let mut buf2 = Vec::new();
            tree_threshold(nv, |counts| {
                full[..nv].copy_from_slice(counts);
                to_r.eval(&full, &mut buf) >= 1 || to_v.eval(&full, &mut buf2) >= 1
            })
        }
        _ => unreachable!("tree certification is for null/fork"),
    };
    (overflow, potency)
}

/// Pushes an amount along a core path (first entry's amount given
/// explicitly), folding in each later vertex's own pebbles; returns the
/// amount present at the final vertex.
fn push_along(counts: &[u64], path: &[usize], initial: u64) -> u64 {
    let mut amt = initial;
    for &v in &path[1..] {
        amt = amt / 2 + counts[v];
    }
    amt
}

/// `push_along` with one vertex's own pebbles treated as already spent.
fn push_skip(counts: &[u64], path: &[usize], initial: u64, skip: usize) -> u64 {
    let mut amt = initial;
    for &v in &path[1..] {
        amt = amt / 2 + if v == skip { 0 } else { counts[v] };
    }
    amt
}

/// For a path strung between two hubs: `table[s0][s2]` bounds the total
/// path mass among candidates whose full chain push toward either hub
/// stays within that hub's slack. Skipped when the enumeration space is
/// too large.
fn between_path_bound_table(member_caps: &[u64], hub_cap: u64) -> Option<Vec<Vec<u64>>> {
    let space: u128 = member_caps.iter().map(|&c| c as u128 + 1).product();
    if space > 2_000_000 {
        return None;
    }
    let hc = hub_cap as usize;
    // best[aL][aR] = max mass with chain arrivals exactly (aL, aR).
    let mut best = vec![vec![0u64; hc + 1]; hc + 1];
    let k = member_caps.len();
    let mut counts = vec![0u64; k];
    loop {
        // Arrival pushing everything toward the h0 side (index 0 is
        // nearest h0) and toward the h2 side.
        let mut amt = 0u64;
        for i in (0..k).rev() {
            amt = amt / 2 + counts[i];
        }
        let arr_left = amt / 2;
        let mut amt = 0u64;
        for c in counts.iter() {
            amt = amt / 2 + c;
        }
        let arr_right = amt / 2;
        if arr_left <= hub_cap && arr_right <= hub_cap {
            let mass: u64 = counts.iter().sum();
            let slot = &mut best[arr_left as usize][arr_right as usize];
            *slot = (*slot).max(mass);
        }
        // Odometer.
        let mut i = 0;
        loop {
            if i == k {
                // 2D prefix max gives the <= table.
                let mut table = best.clone();
                for a in 0..=hc {
                    for b in 0..=hc {
                        if a > 0 {
                            table[a][b] = table[a][b].max(table[a - 1][b]);
                        }
                        if b > 0 {
                            table[a][b] = table[a][b].max(table[a][b - 1]);
                        }
                    }
                }
                return Some(table);
            }
            if counts[i] < member_caps[i] {
                counts[i] += 1;
                break;
            }
            counts[i] = 0;
            i += 1;
        }
    }
}

fn certify_eye(
    g: &Gadget,
    budget: SearchBudget,
    report: &mut SuiteReport,
) -> (u64, u64, u64, bool) {
    let (joined, r) = joined_to_target(g);
    let beta = g.spec.beta;
    let c = g.spec.c;
    let labels_joined: Vec<String> = {
        let mut l = g.labels.clone();
        l.push("r".to_string());
        l
    };

    let overflow = eye_search(g, &joined, r, &labels_joined, beta, c, Mode::Overflow, budget);
    let potency = eye_search(g, &joined, r, &labels_joined, beta, c, Mode::Potency, budget);
    report.note(format!(
        "eye(beta={beta},c={c}): overflow search nodes={} leaves={}, potency nodes={} leaves={}",
        overflow.nodes, overflow.leaf_tests, potency.nodes, potency.leaf_tests
    ));
    let exhausted = overflow.exhausted || potency.exhausted;
    (
        overflow.max_size + 1,
        potency.max_size + 1,
        overflow.nodes + potency.nodes,
        exhausted,
    )
}

#[derive(PartialEq, Clone, Copy)]
enum Mode {
    Overflow,
    Potency,
}

/// Builds the reduced variable space for the eye and runs the adversary
/// search. In overflow mode every pendant path folds; in potency mode the
/// two cover-target paths stay raw.
#[allow(clippy::too_many_arguments)]
fn eye_search(
    g: &Gadget,
    joined: &Graph,
    r: usize,
    labels: &[String],
    beta: u32,
    c: u32,
    mode: Mode,
    budget: SearchBudget,
) -> Outcome {
    use crate::solvers::FoldedInstance;
    let keep: Vec<usize> = match mode {
        Mode::Overflow => vec![r],
        Mode::Potency => vec![r, g.attachments[0], g.attachments[1], g.attachments[2]],
    };
    let zero = PebbleDistribution::zeros(joined.vertex_count());
    let folded = FoldedInstance::fold(joined, &zero, &keep);
    let core = folded.graph.clone();
    let r_core = folded.core_of[r].expect("target kept");
    let core_label = |idx: usize| labels[folded.original_of[idx]].clone();
    let find = |want: &str| -> usize {
        (0..core.vertex_count())
            .find(|&i| core_label(i) == want)
            .unwrap_or_else(|| panic!("core vertex {want} missing"))
    };

    let hubs_core: Vec<usize> = (0..4).map(|i| find(&format!("h{i}"))).collect();

    // Exact adversary feasibility on the core.
    let quotas: Vec<PebbleDistribution> = if mode == Mode::Potency {
        g.quotas
            .iter()
            .map(|q| {
                let mut d = PebbleDistribution::zeros(core.vertex_count());
                for (ai, &amount) in q.iter().enumerate() {
                    if amount > 0 {
                        let core_idx = folded.core_of[g.attachments[ai]].expect("kept");
                        d.set(core_idx, amount);
                    }
                }
                d
            })
            .collect()
    } else {
        Vec::new()
    };
    let core_for_reach = core.clone();
    let core_for_potent = core.clone();
    let quotas_clone = quotas.clone();
    let exact_ok: Box<dyn Fn(&[u64], SearchBudget) -> Option<bool>> = match mode {
        Mode::Overflow => {
            let f = move |counts: &[u64], b: SearchBudget| {
                let test = not_reachable_test(&core_for_reach, r_core);
                test(counts, b)
            };
            Box::new(f)
        }
        Mode::Potency => {
            let f = move |counts: &[u64], b: SearchBudget| {
                let test = not_potent_test(&core_for_potent, r_core, &quotas_clone);
                test(counts, b)
            };
            Box::new(f)
        }
    };

    let verbose = std::env::var_os("PEBBLE_ADVERSARY_VERBOSE").is_some();
    let t_setup = std::time::Instant::now();
    // Probe the hub capacity (a singleton hub pile one larger must defeat
    // the adversary).
    let probe_budget = SearchBudget::new(200_000, 30.0);
    let hub_cap = probe_cap(
        exact_ok.as_ref(),
        core.vertex_count(),
        hubs_core[0],
        1u64 << (c + 2),
        probe_budget,
    )
    .expect("hub probe decided");
    if verbose {
        eprintln!("  eye setup: hub_cap={hub_cap} after {:.2?}", t_setup.elapsed());
    }

    // Variables: hub families in cycle-adjacent order h1, h0, h3, h2 so
    // the pairwise constraints bind as early as possible.
    let mut vars: Vec<Variable> = Vec::new();
    let hub_order = [1usize, 0, 3, 2];
    let hub_pos = |i: usize| hub_order.iter().position(|&x| x == i).unwrap();
    let u_table = Mass::Table(pendant_path_mass_table(beta, hub_cap));
    let c_table = Mass::Table(pendant_path_mass_table(c, hub_cap));
    for &i in &hub_order {
        let fam = hub_pos(i);
        vars.push(Variable {
            label: format!("d_u{i}"),
            core_vertex: hubs_core[i],
            hub: Some(fam),
            mass: u_table.clone(),
            static_cap: hub_cap,
            dyn_cap: DynCap::HubSlack { hub: fam },
        });
        if mode == Mode::Overflow && (i == 1 || i == 3) {
            vars.push(Variable {
                label: format!("d_v{i}"),
                core_vertex: hubs_core[i],
                hub: Some(fam),
                mass: c_table.clone(),
                static_cap: hub_cap,
                dyn_cap: DynCap::HubSlack { hub: fam },
            });
        }
        vars.push(Variable {
            label: format!("h{i}"),
            core_vertex: hubs_core[i],
            hub: Some(fam),
            mass: Mass::Identity,
            static_cap: hub_cap,
            dyn_cap: DynCap::HubSlack { hub: fam },
        });
    }

    // Raw cover-target paths (potency mode): h1 ~ v1 and h3 ~ v3. Each is
    // jointly bounded by the pendant-path mass table at the hub's slack.
    let mut groups: Vec<(usize, usize, Box<dyn Fn(&[u64]) -> u64>)> = Vec::new();
    let mut cover_paths = Vec::new();
    if mode == Mode::Potency {
        for (att_pos, hub_i, tag) in [(0usize, 1usize, "a1"), (2, 3, "a3")] {
            let mut path = vec![hubs_core[hub_i]];
            for j in 1..c {
                path.push(find(&format!("{tag}.{j}")));
            }
            path.push(folded.core_of[g.attachments[att_pos]].expect("kept"));
            let first = vars.len();
            for (depth, &cv) in path.iter().enumerate().skip(1) {
                vars.push(Variable {
                    label: format!("{}[{depth}]", core_label(cv)),
                    core_vertex: cv,
                    hub: None,
                    mass: Mass::Identity,
                    static_cap: u64::MAX,
                    dyn_cap: DynCap::PathFromHub {
                        hub: hub_pos(hub_i),
                        depth: depth as u32,
                    },
                });
            }
            let fam = hub_pos(hub_i);
            let table = pendant_path_mass_table(c, hub_cap);
            groups.push((
                first,
                vars.len() - 1,
                Box::new(move |totals: &[u64]| {
                    table[(hub_cap - totals[fam]) as usize]
                }),
            ));
            cover_paths.push((path, hub_pos(hub_i), g.quotas[0][att_pos]));
        }
    }

    // The between-hubs path h0 ~ v2 ~ h2.
    let v2 = find("v2");
    let mut left_path = vec![hubs_core[0]];
    for j in 1..c {
        left_path.push(find(&format!("a2l.{j}")));
    }
    left_path.push(v2);
    let mut right_path = vec![hubs_core[2]];
    for j in 1..c {
        right_path.push(find(&format!("a2r.{j}")));
    }
    right_path.push(v2);
    let v2_group_first = vars.len();
    for (depth, &cv) in left_path.iter().enumerate().skip(1) {
        let depth = depth as u32;
        let dyn_cap = if cv == v2 {
            DynCap::PathBetweenHubs {
                hub_a: hub_pos(0),
                depth_a: c,
                hub_b: hub_pos(2),
                depth_b: c,
            }
        } else {
            DynCap::PathFromHub {
                hub: hub_pos(0),
                depth,
            }
        };
        vars.push(Variable {
            label: core_label(cv),
            core_vertex: cv,
            hub: None,
            mass: Mass::Identity,
            static_cap: u64::MAX,
            dyn_cap,
        });
    }
    for (depth, &cv) in right_path.iter().enumerate().skip(1) {
        if cv == v2 {
            continue; // already added
        }
        vars.push(Variable {
            label: core_label(cv),
            core_vertex: cv,
            hub: None,
            mass: Mass::Identity,
            static_cap: u64::MAX,
            dyn_cap: DynCap::PathFromHub {
                hub: hub_pos(2),
                depth: depth as u32,
            },
        });
    }
    // Joint bound for the whole middle path, from the chain-push
    // necessary conditions at both hubs.
    {
        // Members in variable order: left internals, v2, right internals;
        // the chain order from the h0 side is left internals, v2, then
        // right internals reversed.
        let mut chain: Vec<usize> = left_path[1..].to_vec();
        for &cv in right_path[1..right_path.len() - 1].iter().rev() {
            chain.push(cv);
        }
        let member_caps: Vec<u64> = chain
            .iter()
            .enumerate()
            .map(|(pos, _)| {
                let d0 = (pos + 1) as u32;
                let d2 = (chain.len() - pos) as u32;
                let cap0 = (hub_cap << d0) + (1u64 << d0) - 1;
                let cap2 = (hub_cap << d2) + (1u64 << d2) - 1;
                cap0.min(cap2)
            })
            .collect();
        if let Some(table) = between_path_bound_table(&member_caps, hub_cap) {
            let fam0 = hub_pos(0);
            let fam2 = hub_pos(2);
            groups.push((
                v2_group_first,
                vars.len() - 1,
                Box::new(move |totals: &[u64]| {
                    let s0 = (hub_cap - totals[fam0]) as usize;
                    let s2 = (hub_cap - totals[fam2]) as usize;
                    table[s0][s2]
                }),
            ));
        }
    }

    // Overflow paths h_i ~ w_{i-1} (tag o{i}l) and h_i ~ w_i (o{i}r),
    // then the w vertices themselves.
    let ws: Vec<usize> = (0..4).map(|j| find(&format!("w{j}"))).collect();
    let mut hub_to_w_paths = Vec::new();
    for i in 0..4usize {
        for (tag, wj) in [("l", (i + 3) % 4), ("r", i)] {
            let mut path = vec![hubs_core[i]];
            for j in 1..c {
                let cv = find(&format!("o{i}{tag}.{j}"));
                vars.push(Variable {
                    label: core_label(cv),
                    core_vertex: cv,
                    hub: None,
                    mass: Mass::Identity,
                    static_cap: u64::MAX,
                    dyn_cap: DynCap::OverflowInternal {
                        hub: hub_pos(i),
                        depth_from_hub: j,
                        depth_to_w: c - j,
                    },
                });
                path.push(cv);
            }
            path.push(ws[wj]);
            hub_to_w_paths.push(path);
        }
    }
    for (j, &w) in ws.iter().enumerate() {
        let feeders = vec![hub_pos(j), hub_pos((j + 1) % 4)];
        vars.push(Variable {
            label: format!("w{j}"),
            core_vertex: w,
            hub: None,
            mass: Mass::Identity,
            static_cap: 1,
            dyn_cap: DynCap::OverflowVertex {
                hubs: feeders,
                shift: c,
            },
        });
    }

    // Pairwise hub tables from singleton probes.
    let nh = 4usize;
    let mut pair_allowed: Vec<Vec<Option<Vec<Vec<bool>>>>> = vec![vec![None; nh]; nh];
    for a_pos in 0..nh {
        for b_pos in (a_pos + 1)..nh {
            let va = hubs_core[hub_order[a_pos]];
            let vb = hubs_core[hub_order[b_pos]];
            let mut tbl = vec![vec![true; hub_cap as usize + 1]; hub_cap as usize + 1];
            let mut any_block = false;
            for ta in 0..=hub_cap {
                for tb in 0..=hub_cap {
                    let mut counts = vec![0u64; core.vertex_count()];
                    counts[va] = ta;
                    counts[vb] = tb;
                    let ok = exact_ok(&counts, probe_budget).unwrap_or(true);
                    tbl[ta as usize][tb as usize] = ok;
                    if !ok {
                        any_block = true;
                    }
                }
            }
            if any_block {
                pair_allowed[a_pos][b_pos] = Some(tbl.clone());
                let transposed: Vec<Vec<bool>> = (0..=hub_cap as usize)
                    .map(|x| (0..=hub_cap as usize).map(|y| tbl[y][x]).collect())
                    .collect();
                pair_allowed[b_pos][a_pos] = Some(transposed);
            }
        }
    }

    if verbose {
        eprintln!("  eye setup: pair tables done after {:.2?}", t_setup.elapsed());
    }
    // Cheap attainable success check, allocation-free: hub piles push
    // toward each target-adjacent vertex, with the middle path routed
    // fully toward one hub per variant.
    let quick_paths = hub_to_w_paths.clone();
    // (path index a, path index b, shared w vertex) for paired arrivals.
    let shared_w: Vec<(usize, usize, usize)> = {
        let mut pairs = Vec::new();
        for a in 0..quick_paths.len() {
            for b in (a + 1)..quick_paths.len() {
                if quick_paths[a].last() == quick_paths[b].last() {
                    pairs.push((a, b, *quick_paths[a].last().unwrap()));
                }
            }
        }
        pairs
    };
    // Hub index (0..4 in label order) of each quick path's source.
    let path_hub: Vec<usize> = quick_paths
        .iter()
        .map(|p| hubs_core.iter().position(|&h| h == p[0]).unwrap())
        .collect();
    // Reversed middle paths: v2 .. hub.
    let rev_left: Vec<usize> = left_path.iter().rev().copied().collect();
    let rev_right: Vec<usize> = right_path.iter().rev().copied().collect();
    let v2_core = v2;
    let hubs_for_quick = hubs_core.clone();
    let cover_for_quick = cover_paths.clone();
    let v2_quota: u64 = if mode == Mode::Potency { g.quotas[1][1] } else { 0 };
    let quick_bad: Box<dyn Fn(&[u64]) -> bool> = Box::new(move |counts: &[u64]| {
        let base = [
            counts[hubs_for_quick[0]],
            counts[hubs_for_quick[1]],
            counts[hubs_for_quick[2]],
            counts[hubs_for_quick[3]],
        ];
        for variant in 0..2 {
            let mut t = base;
            // Route the middle mass toward one end; the far side keeps its
            // own interior mass (v2 treated as spent).
            let (main_rev, other_rev, main_hub, other_hub) = if variant == 0 {
                (&rev_left, &rev_right, 0usize, 2usize)
            } else {
                (&rev_right, &rev_left, 2usize, 0usize)
            };
            t[main_hub] += push_skip(counts, main_rev, counts[v2_core], usize::MAX)
                - counts[main_rev[main_rev.len() - 1]];
            t[other_hub] += push_skip(counts, other_rev, 0, v2_core)
                - counts[other_rev[other_rev.len() - 1]];

            // Two pebbles on one target-adjacent vertex, from one side...
            for (pi, path) in quick_paths.iter().enumerate() {
                if push_along(counts, path, t[path_hub[pi]]) >= 2 {
                    return true;
                }
            }
            // ... or combined across its two sides.
            for &(a, b, wv) in &shared_w {
                let one = push_along(counts, &quick_paths[a], t[path_hub[a]]);
                let two = push_along(counts, &quick_paths[b], t[path_hub[b]]);
                if one + two - counts[wv] >= 2 {
                    return true;
                }
            }
            // Cover checks (potency mode): both end quotas at once, or the
            // middle quota from both sides.
            if !cover_for_quick.is_empty() {
                let covered = cover_for_quick.iter().all(|(path, hub_fam, quota)| {
                    let hub_i = [1usize, 0, 3, 2][*hub_fam];
                    push_along(counts, path, base[hub_i]) >= *quota
                });
                if covered {
                    return true;
                }
            }
            if v2_quota > 0 {
                let from_left = push_skip(counts, &left_path, base[0], v2_core);
                let from_right = push_skip(counts, &right_path, base[2], v2_core);
                if from_left + from_right + counts[v2_core] >= v2_quota {
                    return true;
                }
            }
        }
        false
    });

    let problem = Problem {
        core,
        hubs: hub_order.iter().map(|&i| hubs_core[i]).collect(),
        hub_caps: vec![hub_cap; 4],
        pair_allowed,
        vars,
        groups,
        quick_bad,
        exact_ok,
        leaf_budget: budget,
        node_limit: 400_000_000,
        verbose: std::env::var_os("PEBBLE_ADVERSARY_VERBOSE").is_some(),
    };
    maximize(&problem)
}

/// Cross-checks the adversary machinery on the fork, whose thresholds the
/// tree enumeration already pins down.
fn fork_adversary_overflow(g: &Gadget, budget: SearchBudget) -> Outcome {
    use crate::solvers::FoldedInstance;
    let (joined, r) = joined_to_target(g);
    let zero = PebbleDistribution::zeros(joined.vertex_count());
    // Keep the branch vertex: in a tree everything else would fold away.
    let x_joined = g.labels.iter().position(|l| l == "x").expect("fork center");
    let folded = FoldedInstance::fold(&joined, &zero, &[r, x_joined]);
    let core = folded.graph.clone();
    let r_core = folded.core_of[r].expect("target kept");
    let labels_joined: Vec<String> = {
        let mut l = g.labels.clone();
        l.push("r".to_string());
        l
    };
    let core_label = |idx: usize| labels_joined[folded.original_of[idx]].clone();
    let find = |want: &str| -> usize {
        (0..core.vertex_count())
            .find(|&i| core_label(i) == want)
            .unwrap_or_else(|| panic!("core vertex {want} missing"))
    };
    let x = find("x");
    let beta = g.spec.beta;
    let c = g.spec.c;

    let core_for_reach = core.clone();
    let exact_ok: Box<dyn Fn(&[u64], SearchBudget) -> Option<bool>> =
        Box::new(move |counts: &[u64], b: SearchBudget| {
            let test = not_reachable_test(&core_for_reach, r_core);
            test(counts, b)
        });
    let probe_budget = SearchBudget::new(200_000, 30.0);
    let hub_cap = probe_cap(
        exact_ok.as_ref(),
        core.vertex_count(),
        x,
        1u64 << (c + 2),
        probe_budget,
    )
    .expect("hub probe decided");

    let mut vars = vec![
        Variable {
            label: "d_u".to_string(),
            core_vertex: x,
            hub: Some(0),
            mass: Mass::Table(pendant_path_mass_table(beta, hub_cap)),
            static_cap: hub_cap,
            dyn_cap: DynCap::HubSlack { hub: 0 },
        },
        Variable {
            label: "d_v".to_string(),
            core_vertex: x,
            hub: Some(0),
            mass: Mass::Table(pendant_path_mass_table(c, hub_cap)),
            static_cap: hub_cap,
            dyn_cap: DynCap::HubSlack { hub: 0 },
        },
        Variable {
            label: "x".to_string(),
            core_vertex: x,
            hub: Some(0),
            mass: Mass::Identity,
            static_cap: hub_cap,
            dyn_cap: DynCap::HubSlack { hub: 0 },
        },
    ];
    let mut w_path = vec![x];
    for j in 1..c {
        let cv = find(&format!("p3.{j}"));
        vars.push(Variable {
            label: core_label(cv),
            core_vertex: cv,
            hub: None,
            mass: Mass::Identity,
            static_cap: u64::MAX,
            dyn_cap: DynCap::OverflowInternal {
                hub: 0,
                depth_from_hub: j,
                depth_to_w: c - j,
            },
        });
        w_path.push(cv);
    }
    let w = find("w");
    w_path.push(w);
    vars.push(Variable {
        label: "w".to_string(),
        core_vertex: w,
        hub: None,
        mass: Mass::Identity,
        static_cap: 1,
        dyn_cap: DynCap::OverflowVertex {
            hubs: vec![0],
            shift: c,
        },
    });

    let quick_path = w_path.clone();
    let quick_bad: Box<dyn Fn(&[u64]) -> bool> = Box::new(move |counts: &[u64]| {
        push_along(counts, &quick_path, counts[quick_path[0]]) >= 2
    });
    let problem = Problem {
        core,
        hubs: vec![x],
        hub_caps: vec![hub_cap],
        pair_allowed: vec![vec![None]],
        vars,
        groups: Vec::new(),
        quick_bad,
        exact_ok,
        leaf_budget: budget,
        node_limit: 50_000_000,
        verbose: false,
    };
    maximize(&problem)
}

/// Critical-distribution properties: the load neither reaches the target
/// via overflow edges nor places more than the quota on any attachment.
fn critical_properties(g: &Gadget, budget: SearchBudget, report: &mut SuiteReport) -> bool {
    let (joined, r) = joined_to_target(g);
    let mut ok = true;
    for (qi, critical) in g.criticals.iter().enumerate() {
        let mut counts = critical.counts().to_vec();
        counts.push(0); // the target vertex
        let p = PebbleDistribution::new(counts);
        if !g.overflow.is_empty() {
            let rep = reachable(&joined, &p, r, 1, budget);
            if !rep.decided {
                report.budget_exhausted = true;
                ok = false;
            } else if rep.answer {
                report.fail(format!(
                    "{:?} critical {qi} reaches the target via an overflow edge",
                    g.spec.kind
                ));
                ok = false;
            }
        }
        for (ai, &attachment) in g.attachments.iter().enumerate() {
            let quota = g.quotas[qi][ai];
            let rep = reachable(&joined, &p, attachment, quota + 1, budget);
            if !rep.decided {
                report.budget_exhausted = true;
                ok = false;
            } else if rep.answer {
                report.fail(format!(
                    "{:?} critical {qi} breaches quota {quota} at attachment {ai}",
                    g.spec.kind
                ));
                ok = false;
            }
        }
    }
    ok
}

/// The tree greedy claims behind the eye's critical-distribution argument:
/// deleting the overflow vertices splits the eye into three trees; greedy
/// within each tree moves at most one pebble onto any overflow vertex and
/// exactly the quota onto each attachment.
fn eye_greedy_claims(g: &Gadget, report: &mut SuiteReport) -> bool {
    let mut ok = true;
    let n = g.graph.vertex_count();
    let is_w = |v: usize| g.overflow.contains(&v);

    // Components of the eye minus its overflow vertices.
    let mut comp_of = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if is_w(start) || comp_of[start] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut stack = vec![start];
        comp_of[start] = id;
        let mut comp = vec![start];
        while let Some(v) = stack.pop() {
            for &u in g.graph.neighbors(v) {
                if !is_w(u) && comp_of[u] == usize::MAX {
                    comp_of[u] = id;
                    comp.push(u);
                    stack.push(u);
                }
            }
        }
        comp.sort_unstable();
        comp.dedup();
        comps.push(comp);
    }
    if comps.len() != 3 {
        report.fail(format!(
            "deleting overflow vertices leaves {} components, expected 3",
            comps.len()
        ));
        return false;
    }

    // Each tree: a component plus its adjacent overflow vertices.
    for comp in &comps {
        let mut members: Vec<usize> = comp.clone();
        let mut tree_ws = Vec::new();
        for &w in &g.overflow {
            if g.graph.neighbors(w).iter().any(|&u| comp.contains(&u)) {
                members.push(w);
                tree_ws.push(w);
            }
        }
        members.sort_unstable();
        let index_of: BTreeMap<usize, usize> =
            members.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges: Vec<(usize, usize)> = g
            .graph
            .edges()
            .filter(|&(u, v)| {
                index_of.contains_key(&u)
                    && index_of.contains_key(&v)
                    && !(is_w(u) && is_w(v))
                    // Only edges with at least one endpoint in the component.
                    && (comp.contains(&u) || comp.contains(&v))
            })
            .map(|(u, v)| (index_of[&u], index_of[&v]))
            .collect();
        let tree = Graph::new(members.len(), &edges).expect("tree edges valid");
        if !tree.is_tree() {
            report.fail("overflow-deleted component is not a tree".to_string());
            ok = false;
            continue;
        }
        for (qi, critical) in g.criticals.iter().enumerate() {
            let restricted = PebbleDistribution::new(
                members.iter().map(|&v| critical.count(v)).collect(),
            );
            for &w in &tree_ws {
                let got = greedy_tree_max(&tree, &restricted, index_of[&w])
                    .expect("component plus overflow vertices is a tree");
                if got > 1 {
                    report.fail(format!(
                        "greedy places {got} > 1 pebbles on an overflow vertex (critical {qi})"
                    ));
                    ok = false;
                }
            }
            for (ai, &attachment) in g.attachments.iter().enumerate() {
                if let Some(&local) = index_of.get(&attachment) {
                    let got = greedy_tree_max(&tree, &restricted, local)
                        .expect("tree");
                    let want = g.quotas[qi][ai];
                    if got != want {
                        report.fail(format!(
                            "greedy places {got} != quota {want} on attachment {ai} (critical {qi})"
                        ));
                        ok = false;
                    }
                }
            }
        }
    }
    ok
}

/// Certifies one gadget: thresholds, critical properties, greedy claims.
pub fn certify_gadget(spec: &GadgetSpec, budget: SearchBudget) -> (GadgetCertification, SuiteReport) {
    let mut report = SuiteReport::new(&format!("gadget-{:?}", spec.kind));
    let g = build_gadget(spec).expect("valid spec");
    let (overflow, potency, nodes, exhausted) = match spec.kind {
        GadgetKind::Null | GadgetKind::Fork => {
            let (o, p) = certify_tree_gadget(&g);
            if spec.kind == GadgetKind::Fork {
                // Ground-truth cross-check of the adversarial search.
                let adv = fork_adversary_overflow(&g, budget);
                if adv.exhausted {
                    report.budget_exhausted = true;
                } else if adv.max_size + 1 != o {
                    report.fail(format!(
                        "fork overflow: enumeration {o} vs adversary search {}",
                        adv.max_size + 1
                    ));
                }
            }
            (o, p, 0, false)
        }
        GadgetKind::Eye => {
            let (o, p, nodes, exhausted) = certify_eye(&g, budget, &mut report);
            (o, p, nodes, exhausted)
        }
        GadgetKind::Star => panic!("star gadgets are not threshold-certified"),
    };
    if exhausted {
        report.budget_exhausted = true;
    }
    let critical_ok = critical_properties(&g, budget, &mut report);
    if spec.kind == GadgetKind::Eye && !eye_greedy_claims(&g, &mut report) {
        report.fail("eye greedy claims failed".to_string());
    }
    report.cases += 1;
    let cert = GadgetCertification {
        kind: spec.kind,
        beta: spec.beta,
        c: spec.c,
        overflow_threshold: overflow,
        potency_threshold: potency,
        critical_size: g.critical_size(),
        critical_ok,
        search_nodes: nodes,
        exhausted,
    };
    report.note(format!(
        "{:?}: overflow={overflow} potency={potency} critical={}",
        spec.kind,
        g.critical_size()
    ));
    (cert, report)
}

#[derive(Debug, Clone)]
pub struct GapConstantReport {
    pub c_value: u64,
    pub certifications: Vec<GadgetCertification>,
}

/// The gap constant: the smallest `C` making every gadget satisfy
/// `overflow - critical <= C` and, for fork and eye,
/// `critical - potency >= 2^(beta+c) - C`.
pub fn gap_constant(beta: u32, c: u32, budget: SearchBudget) -> (GapConstantReport, Vec<SuiteReport>) {
    let mut reports = Vec::new();
    let mut certs = Vec::new();
    for spec in [
        GadgetSpec::null(c),
        GadgetSpec::fork(beta, c),
        GadgetSpec::eye(beta, c),
    ] {
        let (cert, report) = certify_gadget(&spec, budget);
        reports.push(report);
        certs.push(cert);
    }
    let unit = 1u64 << (beta + c);
    let mut c_value = 0u64;
    for cert in &certs {
        c_value = c_value.max(cert.overflow_threshold.saturating_sub(cert.critical_size));
        if matches!(cert.kind, GadgetKind::Fork | GadgetKind::Eye) {
            let spread = cert.critical_size.saturating_sub(cert.potency_threshold);
            c_value = c_value.max(unit.saturating_sub(spread));
        }
    }
    (
        GapConstantReport {
            c_value,
            certifications: certs,
        },
        reports,
    )
}

/// The full gadget suite: certification at the given parameters plus the
/// gap-lemma inequalities for the computed constant.
pub fn verify_gadget_suite(beta: u32, c: u32, budget: SearchBudget) -> SuiteReport {
    let mut report = SuiteReport::new("gadgets");
    let (gap, sub_reports) = gap_constant(beta, c, budget);
    for sub in sub_reports {
        report.cases += sub.cases;
        report.budget_exhausted |= sub.budget_exhausted;
        for ce in sub.counterexamples {
            report.fail(ce);
        }
        for note in sub.notes {
            report.note(note);
        }
    }
    let unit = 1u64 << (beta + c);
    let cval = gap.c_value;
    report.note(format!("gap constant C = {cval} at (beta={beta}, c={c})"));
    for cert in &gap.certifications {
        report.cases += 1;
        if matches!(cert.kind, GadgetKind::Fork | GadgetKind::Eye) {
            if !(cert.potency_threshold <= cert.critical_size
                && cert.critical_size <= cert.overflow_threshold)
            {
                report.fail(format!(
                    "{:?}: thresholds out of order: potency {} critical {} overflow {}",
                    cert.kind, cert.potency_threshold, cert.critical_size, cert.overflow_threshold
                ));
            }
            if cert.critical_size - cert.potency_threshold < unit.saturating_sub(cval) {
                report.fail(format!(
                    "{:?}: potency gap {} below {} - C",
                    cert.kind,
                    cert.critical_size - cert.potency_threshold,
                    unit
                ));
            }
        }
        if cert.overflow_threshold.saturating_sub(cert.critical_size) > cval {
            report.fail(format!(
                "{:?}: overflow slack exceeds C = {cval}",
                cert.kind
            ));
        }
        if !cert.critical_ok {
            report.fail(format!("{:?}: critical properties failed", cert.kind));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_thresholds_at_c2() {
        let g = build_gadget(&GadgetSpec::null(2)).unwrap();
        let (overflow, potency) = certify_tree_gadget(&g);
        // Max failing load is 7 pebbles on the attachment end.
        assert_eq!(overflow, 8);
        assert_eq!(potency, 0);
    }

    #[test]
    fn fork_critical_properties_hold() {
        let mut report = SuiteReport::new("test");
        let g = build_gadget(&GadgetSpec::fork(2, 2)).unwrap();
        assert!(critical_properties(&g, SearchBudget::default(), &mut report));
        assert!(report.ok());
    }

    #[test]
    fn eye_greedy_claims_hold_at_2_2() {
        let mut report = SuiteReport::new("test");
        let g = build_gadget(&GadgetSpec::eye(2, 2)).unwrap();
        assert!(eye_greedy_claims(&g, &mut report), "{:?}", report.counterexamples);
    }
}
