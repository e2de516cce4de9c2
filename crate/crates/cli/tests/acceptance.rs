//! End-to-end acceptance checks. Each test prints one `[PASS]` or `[FAIL]`
//! line (bypassing output capture) and fails when its criterion or its
//! runtime budget is missed.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;

use matchest::experiment::{l0_churn_updates, run_experiment, ExperimentConfig, ModeArg, Task};
use matchest_core::estimator::{lower_factor, meta_estimate, sample_graph, upper_factor, EstimatorConfig};
use matchest_core::folklore::{folklore_estimate, FolkloreConfig, FolkloreSide};
use matchest_core::hard::{
    bhh_gap_instance, build_rs_graph, gen_bhh0, gen_dense_alpha, gen_eps_instance, gen_sms, single_parity_set, tvd_experiment, tvd_for_set,
    verify_gap, EpsVariant, Label,
};
use matchest_core::hashing::SampleSpec;
use matchest_core::l0::L0Sketch;
use matchest_core::rng::{rng_from_seed, split_seed};
use matchest_core::stream::{churn_stream, feed, stream_from_graph, EdgeOrder};
use matchest_core::tester::{calibrate_dynamic_gamma, DynamicTester, DynamicTesterConfig, MatchingSizeTester};
use matchest_core::{brute_force_matching, max_matching, Graph, RsGraph, StreamMode, Vertex};

fn report(id: u32, name: &str, ok: bool, detail: &str, start: Instant, budget: Duration) {
    let secs = start.elapsed().as_secs_f64();
    let in_time = start.elapsed() <= budget;
    let pass = ok && in_time;
    let line = format!(
        "[{}] criterion {id}: {name}: {detail} ({secs:.1}s of {}s budget{})\n",
        if pass { "PASS" } else { "FAIL" },
        budget.as_secs(),
        if in_time { "" } else { ", over budget" }
    );
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes()).unwrap();
    out.flush().unwrap();
    assert!(pass, "{}", line.trim_end());
}

fn mins(m: u64) -> Duration {
    Duration::from_secs(60 * m)
}

fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = rng_from_seed(seed);
    let mut g = Graph::new(n);
    for u in 0..n as Vertex {
        for v in u + 1..n as Vertex {
            if rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

fn opt(g: &Graph) -> u64 {
    max_matching(g).0 as u64
}

fn rs(n: usize, r: usize, t: usize) -> RsGraph {
    build_rs_graph(n, r, t, 0, 200).unwrap().built().unwrap_or_else(|| panic!("no ({r},{t})-RS graph on {n} vertices"))
}

#[test]
fn criterion_01_exact_oracle() {
    let start = Instant::now();
    let mut rng = rng_from_seed(0xa11ce);
    let mut mismatches = 0;
    for i in 0..500 {
        let n = rng.gen_range(1..=14);
        let p = rng.gen_range(0.05..0.9);
        let g = random_graph(n, p, split_seed(1, i));
        if max_matching(&g).0 != brute_force_matching(&g).unwrap() {
            mismatches += 1;
        }
    }
    report(1, "blossom equals brute force", mismatches == 0, &format!("500 graphs, n <= 14, {mismatches} mismatches"), start, mins(1));
}

#[test]
fn criterion_02_bhh_reduction() {
    let start = Instant::now();
    let mut bad = Vec::new();
    for (n, t) in [(8, 2), (16, 2), (24, 4), (48, 6)] {
        for label in [Label::Yes, Label::No] {
            let want = (3 * n / 4 - if label == Label::No { n / (2 * t) } else { 0 }) as u64;
            for seed in 0..50 {
                let inst = bhh_gap_instance(gen_bhh0(n, t, label, seed).unwrap(), seed).unwrap();
                let rep = verify_gap(&inst).unwrap();
                if !rep.pass || rep.measured != want {
                    bad.push(format!("n={n} t={t} {} seed {seed}: {}", label.as_str(), rep.measured));
                }
            }
        }
    }
    let mut detail = format!("Yes = 3n/4, No = 3n/4 - n/2t over 4 shapes x 2 labels x 50 seeds, {} mismatches", bad.len());
    if let Some(first) = bad.first() {
        detail += &format!(", first {first:?}");
    }
    report(2, "BHH matching size", bad.is_empty(), &detail, start, mins(1));
}

#[test]
fn criterion_03_sms_gap() {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut ok = true;
    for (n, k, yes_bound, no_bound) in [(32usize, 4usize, 20u64, 8u64), (64, 8, 36, 8)] {
        let (mut yes_min, mut no_max) = (u64::MAX, 0);
        for seed in 0..100 {
            let y = opt(&gen_sms(n, k, &vec![Label::Yes; k], seed).unwrap().graph);
            let m = opt(&gen_sms(n, k, &vec![Label::No; k], seed).unwrap().graph);
            yes_min = yes_min.min(y);
            no_max = no_max.max(m);
        }
        ok &= yes_min >= yes_bound && no_max <= no_bound;
        lines.push(format!("n={n} k={k}: min Yes {yes_min} (>= {yes_bound}), max No {no_max} (<= {no_bound})"));
    }
    report(3, "SMS gap", ok, &format!("{}; 100 seeds", lines.join("; ")), start, mins(1));
}

#[test]
fn criterion_04_dense_alpha_gap() {
    let start = Instant::now();
    let g = rs(24, 4, 4);
    let alpha = 2;
    let (mut one_min, mut zero_max, mut ratio_ok) = (u64::MAX, 0, true);
    for seed in 0..50 {
        let a = opt(&gen_dense_alpha(&g, alpha, true, seed).unwrap().graph);
        let b = opt(&gen_dense_alpha(&g, alpha, false, seed).unwrap().graph);
        one_min = one_min.min(a);
        zero_max = zero_max.max(b);
        ratio_ok &= a > alpha as u64 * b;
    }
    let ok = one_min >= 72 && zero_max <= 24 && ratio_ok;
    let detail = format!(
        "RS N=24 r=4 t={}, alpha=2, k=18: min theta=1 opt {one_min} (>= 72), max theta=0 opt {zero_max} (<= 24), paired ratio > alpha: {ratio_ok}; 50 seeds",
        g.t()
    );
    report(4, "dense-alpha gap", ok, &detail, start, mins(2));
}

#[test]
fn criterion_05_eps_gaps() {
    let start = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for (n, r, t, eps) in [(16usize, 4usize, 3usize, 0.05f64), (24, 8, 3, 0.04)] {
        let g = rs(n, r, t);
        let yes_want = (n - 5 * r / 4) as u64;
        let mut p = 0;
        let mut exact = true;
        let (mut yes_seen, mut no_seen) = (0, 0);
        for seed in 0..25 {
            let y = gen_eps_instance(EpsVariant::InsertionOnly, &g, eps, Label::Yes, seed).unwrap();
            let m = gen_eps_instance(EpsVariant::InsertionOnly, &g, eps, Label::No, seed).unwrap();
            p = y.arity;
            let no_want = yes_want - (r / (2 * p)) as u64;
            let (oy, on) = (opt(&y.graph), opt(&m.graph));
            exact &= oy == yes_want && on == no_want && (1.0 - eps) * oy as f64 > on as f64;
            yes_seen = oy;
            no_seen = on;
        }
        ok &= exact;
        parts.push(format!("insertion N={n} r={r} p={p}: Yes {yes_seen} = (4-5c)N/4, No {no_seen} = Yes - cN/2p, exact {exact}"));
    }
    for (n, r, t, eps) in [(16usize, 4usize, 3usize, 1.0 / 16.0), (24, 8, 3, 1.0 / 32.0)] {
        let g = rs(n, r, t);
        let (mut yes_min, mut no_max, mut p, mut kr, mut half) = (u64::MAX, 0u64, 0, 0u64, 0u64);
        for seed in 0..25 {
            let y = gen_eps_instance(EpsVariant::Dynamic, &g, eps, Label::Yes, seed).unwrap();
            let m = gen_eps_instance(EpsVariant::Dynamic, &g, eps, Label::No, seed).unwrap();
            p = y.arity;
            kr = (y.players * r) as u64;
            half = (y.n / 2) as u64;
            yes_min = yes_min.min(opt(&y.graph));
            no_max = no_max.max(opt(&m.graph));
        }
        let yes_bound = 3 * kr / 4;
        let no_bound = yes_bound - 3 * n as u64;
        let sep = (1.0 - eps) * yes_min as f64 > no_max as f64;
        let this = yes_min > yes_bound && no_max <= no_bound && sep;
        ok &= this;
        let literal = 3.0 * n as f64 / eps;
        parts.push(format!(
            "dynamic N={n} r={r} p={p} eps={eps}: min Yes {yes_min} > 3kr/4 = {yes_bound}, max No {no_max} <= 3kr/4 - 3N = {no_bound}, (1-eps) Yes > No: {sep} [3N/eps = {literal} exceeds n/2 = {half}]"
        ));
    }
    report(5, "(1 + eps) gaps", ok, &format!("{}; 25 seeds each", parts.join("; ")), start, mins(5));
}

#[test]
fn criterion_06_sampling_lemma() {
    let start = Instant::now();
    let (n, pairs, alpha) = (1024usize, 400u32, 20u64);
    let g = Graph::from_edges(n, (0..pairs).map(|i| (i, n as u32 - 1 - i))).unwrap();
    let cfg = EstimatorConfig::new(n, alpha, StreamMode::InsertionOnly, 0);
    let l = cfg.log_n() as f64;
    let p = cfg.sampling_probability(alpha);
    let upper = 3.0 * l / alpha as f64 * pairs as f64;
    let lower = l * l / (2.0 * (alpha * alpha) as f64) * pairs as f64;
    let (mut part1, mut part2) = (0, 0);
    let mut sizes = Vec::new();
    for seed in 0..100 {
        let s = opt(&sample_graph(&g, &SampleSpec::new(p, seed).unwrap()).graph) as f64;
        part1 += (s <= upper) as usize;
        part2 += (s >= lower) as usize;
        sizes.push(s);
    }
    sizes.sort_by(f64::total_cmp);
    let detail =
        format!("p = L/alpha = {p}, opt(G_smp) in [{}, {}]; <= {upper} in {part1}/100, >= {lower} in {part2}/100", sizes[0], sizes[99]);
    report(6, "sampling lemma", part1 >= 90 && part2 >= 90, &detail, start, mins(2));
}

/// Graphs on 4096 vertices with maximum matching 0, 32, 64 and 2048.
fn meta_family(n: usize) -> Vec<(&'static str, Graph)> {
    let nn = n as Vertex;
    let hubs = Graph::from_edges(n, (0..32).flat_map(|h| (32..2048).map(move |v| (h, v)))).unwrap();
    let triangles = Graph::from_edges(n, (0..64).flat_map(|i| [(3 * i, 3 * i + 1), (3 * i + 1, 3 * i + 2), (3 * i, 3 * i + 2)])).unwrap();
    let mut perfect = random_graph(n, 2.0 / n as f64, 77);
    for i in 0..nn / 2 {
        perfect.add_edge(i, nn - 1 - i).unwrap();
    }
    vec![("empty", Graph::new(n)), ("32 hubs", hubs), ("64 triangles", triangles), ("perfect + noise", perfect.simplified())]
}

#[test]
fn criterion_07_meta_estimate() {
    let start = Instant::now();
    let (n, alpha) = (4096usize, 64u64);
    let (c, c_prime) = (4.0, 2.0);
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, g) in meta_family(n) {
        let o = opt(&g);
        let results: Vec<(f64, f64)> = (0..100u64)
            .map(|seed| {
                let s = stream_from_graph(&g, EdgeOrder::Shuffled(seed));
                let rep = meta_estimate(&s, &EstimatorConfig::new(n, alpha, StreamMode::InsertionOnly, seed)).unwrap();
                (lower_factor(o, rep.estimate, alpha), upper_factor(o, rep.estimate))
            })
            .collect();
        let hits = results.iter().filter(|&&(lo, up)| lo <= c && up <= c_prime).count();
        let mut lo: Vec<f64> = results.iter().map(|r| r.0).collect();
        let mut up: Vec<f64> = results.iter().map(|r| r.1).collect();
        lo.sort_by(f64::total_cmp);
        up.sort_by(f64::total_cmp);
        ok &= hits >= 95;
        parts.push(format!("{name} (opt {o}): {hits}/100, c95 = {:.2}, c'95 = {:.2}", lo[94], up[94]));
    }
    let detail = format!("n=4096 alpha=64, estimate in [opt/(4 alpha), 2 opt]: {}", parts.join("; "));
    report(7, "meta estimator", ok, &detail, start, mins(10));
}

#[test]
fn criterion_08_dynamic_tester() {
    let start = Instant::now();
    let mut rng = rng_from_seed(0xd1);
    let mut violations = 0;
    for i in 0..1000u64 {
        let n = rng.gen_range(3..=24);
        let g = random_graph(n, rng.gen_range(0.05..0.6), split_seed(8, i));
        let s = if g.edge_count() > 0 && i % 2 == 0 && g.edge_count() < n * (n - 1) / 2 {
            churn_stream(&g, 1.0, i).unwrap()
        } else {
            stream_from_graph(&g, EdgeOrder::Shuffled(i)).into_dynamic()
        };
        let mut t = DynamicTester::new(rng.gen_range(1..=6), DynamicTesterConfig::default(), i).unwrap();
        feed(&mut t, s.replay()).unwrap();
        violations += (t.group_matching_size() > opt(&g)) as usize;
    }
    let mut parts = Vec::new();
    let mut ok = violations == 0;
    for k in [4u64, 16, 64] {
        let cal = calibrate_dynamic_gamma(k, DynamicTesterConfig::default(), 200, 0.95, 0xca1).unwrap();
        let cfg = DynamicTesterConfig { gamma: cal.gamma, ..DynamicTesterConfig::default() };
        let n = 4 * k as usize;
        let g = Graph::from_edges(n, (0..k as Vertex).map(|i| (2 * i, 2 * i + 1))).unwrap();
        let yes = (0..200u64)
            .filter(|&seed| {
                let s = churn_stream(&g, 1.0, seed).unwrap();
                let mut t = DynamicTester::new(k, cfg, split_seed(0x7e57, seed)).unwrap();
                feed(&mut t, s.replay()).unwrap();
                t.verdict().is_yes()
            })
            .count();
        ok &= yes >= 190;
        parts.push(format!("k={k} gamma={:.3}: Yes {yes}/200", cal.gamma));
    }
    let detail = format!("group matching > opt on {violations}/1000 instances; {}", parts.join(", "));
    report(8, "dynamic tester soundness and completeness", ok, &detail, start, mins(5));
}

/// `support` survivors among `decoys` items inserted and deleted, shuffled.
fn small_support_updates(support: usize, decoys: usize, seed: u64) -> Vec<(u32, i64)> {
    let mut rng = rng_from_seed(seed);
    let items: Vec<u32> = rand::seq::index::sample(&mut rng, 1 << 20, support + decoys).into_iter().map(|i| i as u32).collect();
    let mut ups: Vec<(u32, i64)> = items.iter().map(|&x| (x, 1)).collect();
    ups.shuffle(&mut rng);
    let mut deletes: Vec<(u32, i64)> = items[support..].iter().map(|&x| (x, -1)).collect();
    deletes.shuffle(&mut rng);
    ups.extend(deletes);
    ups
}

#[test]
fn criterion_09_l0() {
    let start = Instant::now();
    let mut exact_bad = 0;
    for seed in 0..200u64 {
        for support in [0usize, 1] {
            let mut sk = L0Sketch::new(1 << 20, seed).unwrap();
            for (x, d) in small_support_updates(support, 64, split_seed(seed, support as u64)) {
                sk.update(x, d).unwrap();
            }
            exact_bad += (sk.estimate() != support as u64) as usize;
        }
    }
    let mut not_empty = 0;
    for seed in 0..100u64 {
        let mut rng = rng_from_seed(split_seed(9, seed));
        let ups: Vec<(u32, i64)> = (0..rng.gen_range(1..3000)).map(|_| (rng.gen_range(0..1u32 << 20), 1)).collect();
        let mut sk = L0Sketch::new(1 << 20, seed).unwrap();
        for &(x, d) in &ups {
            sk.update(x, d).unwrap();
        }
        for &(x, d) in ups.iter().rev() {
            sk.update(x, -d).unwrap();
        }
        not_empty += !sk.is_empty() as usize;
    }
    let mut ok = exact_bad == 0 && not_empty == 0;
    let mut rates = Vec::new();
    for support in [10u64, 100, 1000, 10_000] {
        let hits = (0..100u64)
            .filter(|&seed| {
                let mut sk = L0Sketch::new(1 << 24, seed).unwrap();
                for (x, d) in l0_churn_updates(1 << 24, support, 1.0, split_seed(seed, 1)).unwrap() {
                    sk.update(x, d).unwrap();
                }
                let e = sk.estimate();
                2 * e >= support && e <= 2 * support
            })
            .count();
        ok &= hits >= 90;
        rates.push(format!("{support}: {hits}/100"));
    }
    let detail = format!(
        "support <= 1 wrong on {exact_bad}/400, reversal leaves {not_empty}/100 sketches nonempty, factor 2 under churn {}",
        rates.join(", ")
    );
    report(9, "L0 sketch", ok, &detail, start, mins(2));
}

/// Bipartite graphs on `[0, 2048) x [2048, 4096)`.
fn folklore_family() -> Vec<(&'static str, Graph)> {
    let n = 4096usize;
    let h = 2048u32;
    let mut rng = rng_from_seed(0xf0);
    let mut random = Graph::new(n);
    for u in 0..h {
        for _ in 0..2 {
            let v = h + rng.gen_range(0..h);
            if !random.has_edge(u, v) {
                random.add_edge(u, v).unwrap();
            }
        }
    }
    vec![
        ("perfect matching", Graph::from_edges(n, (0..h).map(|i| (i, h + i))).unwrap()),
        ("64-edge matching", Graph::from_edges(n, (0..64).map(|i| (i * 32, h + i))).unwrap()),
        ("one left hub", Graph::from_edges(n, (h..2 * h).map(|v| (0, v))).unwrap()),
        ("four right hubs", Graph::from_edges(n, (0..h).flat_map(|u| (0..4).map(move |j| (u, h + j)))).unwrap()),
        ("random degree 2", random),
    ]
}

#[test]
fn criterion_10_folklore() {
    let start = Instant::now();
    let (c1, c2) = (2.0, 2.0);
    let n = 4096usize;
    let sqrt_n = 64.0;
    let left: Vec<Vertex> = (0..2048).collect();
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, g) in folklore_family() {
        let o = opt(&g) as f64;
        let (mut lower_hits, mut upper_hits) = (0, 0);
        let mut worst = (0.0f64, 0.0f64);
        for seed in 0..50u64 {
            let s = churn_stream(&g, 0.5, seed).unwrap();
            let k = folklore_estimate(&s, &FolkloreConfig::new(n, FolkloreSide::Bipartite { left: left.clone() }, seed)).unwrap().k as f64;
            lower_hits += (k <= c1 * o) as usize;
            upper_hits += (o <= c2 * k.max(1.0) * sqrt_n) as usize;
            worst.0 = worst.0.max(if o > 0.0 { k / o } else { 0.0 });
            worst.1 = worst.1.max(o / (k.max(1.0) * sqrt_n));
        }
        ok &= lower_hits >= 45 && upper_hits >= 45;
        parts.push(format!(
            "{name} (opt {o}): opt >= k/c1 {lower_hits}/50, opt <= c2 max(k,1) sqrt n {upper_hits}/50, max k/opt {:.2}, max opt/(k sqrt n) {:.2}",
            worst.0, worst.1
        ));
    }
    let detail = format!("n=4096, c1 = {c1}, c2 = {c2}: {}", parts.join("; "));
    report(10, "folklore relation", ok, &detail, start, mins(5));
}

#[test]
fn criterion_11_space_slopes() {
    let start = Instant::now();
    let ks = vec![8, 16, 32, 64, 128, 256];
    let slope = |mode| {
        let cfg = ExperimentConfig { task: Task::Bench { mode, ks: ks.clone(), n: 1024 }, seed: 0, trials: 3, out_dir: None };
        run_experiment(&cfg).unwrap().summary["slope"].as_f64().unwrap()
    };
    let (ins, dynm) = (slope(ModeArg::Insertion), slope(ModeArg::Dynamic));
    let ok = (ins - 1.0).abs() <= 0.1 && (dynm - 2.0).abs() <= 0.1;
    let detail = format!("k in 8..256: insertion slope {ins:.3} (1.0 +- 0.1), dynamic slope {dynm:.3} (2.0 +- 0.1)");
    report(11, "space scaling", ok, &detail, start, mins(5));
}

#[test]
fn criterion_12_tvd() {
    let start = Instant::now();
    let n = 8;
    let even: Vec<u32> = (0..1u32 << n).filter(|x| x.count_ones() % 2 == 0).collect();
    let mut rng = rng_from_seed(12);
    let (mut zero, mut one) = (true, true);
    for _ in 0..100 {
        let mut perm: Vec<u32> = (0..n as u32).collect();
        perm.shuffle(&mut rng);
        let pairs: Vec<(u32, u32)> = perm.chunks(2).map(|p| (p[0], p[1])).collect();
        zero &= tvd_for_set(n, &even, &pairs).unwrap() == 0.0;
        one &= tvd_for_set(n, &[rng.gen_range(0..1u32 << n)], &pairs).unwrap() == 1.0;
    }
    let full = single_parity_set(n, 1, 0).unwrap().len() == 1 << (n - 1);
    let non_increasing = |xs: &[f64]| xs.windows(2).all(|w| w[1] <= w[0]);
    let runs: Vec<Vec<f64>> = (0..20u64).map(|seed| (1..=6).rev().map(|c| tvd_experiment(n, c, 100, seed).unwrap()).collect()).collect();
    let averaged: Vec<f64> = (0..6).map(|j| runs.iter().map(|r| r[j]).sum::<f64>() / runs.len() as f64).collect();
    let per_seed = runs.iter().filter(|r| non_increasing(r)).count();
    let (single, pooled) = (non_increasing(&runs[0]), non_increasing(&averaged));
    let ok = zero && one && full && single && pooled;
    let fmt = |xs: &[f64]| xs.iter().map(|m| format!("{m:.3}")).collect::<Vec<_>>().join(" ");
    let detail = format!(
        "even-parity set TVD 0: {zero}, singleton TVD 1: {one}, mean TVD for c = 6..1 over 100 matchings [{}] non-increasing: {single}, \
         averaged over 20 sets [{}] non-increasing: {pooled} ({per_seed}/20 single sets monotone)",
        fmt(&runs[0]),
        fmt(&averaged)
    );
    report(12, "TVD experiment", ok, &detail, start, mins(2));
}
