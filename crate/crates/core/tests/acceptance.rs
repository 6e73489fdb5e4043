//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails. Run with `cargo test --test acceptance`.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use copref::community::{detect, laplacian, Algorithm, AlgorithmParams, LaplacianKind};
use copref::generate::{planted_partition, ReviewCorpus};
use copref::graph::{modularity, Partition, WeightedGraph};
use copref::ingest::{
    apply_vote_override, build_bipartite, write_reviews, BipartiteGraph, Category, Sentiment,
};
use copref::linalg::{eigensolve_symmetric, SymmetricMatrix};
use copref::pipeline::{run_pipeline, PipelineConfig};
use copref::projection::{
    project_bipartite, BlendCoefficients, CoEdge, CoPreferenceGraph, EdgeFilterMode, ItemRatings,
};

type Outcome = Result<String, String>;
type Edges = Vec<(usize, usize, f64)>;
type Criterion = fn() -> Outcome;

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn graph(n: usize, edges: &[(usize, usize, f64)]) -> WeightedGraph {
    let mut b = WeightedGraph::builder();
    for i in 0..n {
        b.add_node(&format!("v{i}")).unwrap();
    }
    for &(x, y, w) in edges {
        b.add_edge(x, y, w).unwrap();
    }
    b.build().unwrap()
}

/// Restricted growth strings: every set partition of `n` nodes once.
fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn grow(prefix: &mut Vec<usize>, n: usize, max: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for label in 0..=max + 1 {
            prefix.push(label);
            grow(prefix, n, max.max(label), out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return vec![Vec::new()];
    }
    grow(&mut vec![0], n, 0, &mut out);
    out
}

/// Q = 1/2m Σ_ij (A_ij − k_i k_j / 2m) δ(c_i, c_j) over a dense matrix.
fn oracle_q(n: usize, edges: &[(usize, usize, f64)], labels: &[usize]) -> f64 {
    let mut a = vec![vec![0.0; n]; n];
    for &(x, y, w) in edges {
        a[x][y] += w;
        a[y][x] += w;
    }
    let k: Vec<f64> = a.iter().map(|row| row.iter().sum()).collect();
    let two_m: f64 = k.iter().sum();
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if labels[i] == labels[j] {
                q += a[i][j] - k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}

fn is_connected(n: usize, edges: &[(usize, usize, f64)]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &(x, y, _) in edges {
            for (from, to) in [(x, y), (y, x)] {
                if from == v && !seen[to] {
                    seen[to] = true;
                    stack.push(to);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Every labeled connected graph on 2 to 4 nodes with unit weights, plus
/// named and random weighted connected graphs on 5 to 7 nodes.
fn small_connected_graphs() -> Vec<(usize, Edges)> {
    let mut out = Vec::new();
    for n in 2..=4 {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        for mask in 1u32..(1 << pairs.len()) {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &(i, j))| (i, j, 1.0))
                .collect();
            if is_connected(n, &edges) {
                out.push((n, edges));
            }
        }
    }
    for n in 5..=7 {
        let path: Vec<_> = (0..n - 1).map(|i| (i, i + 1, 1.0)).collect();
        let mut cycle = path.clone();
        cycle.push((n - 1, 0, 1.0));
        let star: Vec<_> = (1..n).map(|i| (0, i, 1.0)).collect();
        let complete: Vec<_> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j, 1.0)))
            .collect();
        out.extend([(n, path), (n, cycle), (n, star), (n, complete)]);
    }
    out.push((
        6,
        vec![
            (0, 1, 1.0),
            (1, 2, 1.0),
            (0, 2, 1.0),
            (3, 4, 1.0),
            (4, 5, 1.0),
            (3, 5, 1.0),
            (2, 3, 1.0),
        ],
    ));
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in [5, 6, 7, 7, 7] {
        for _ in 0..4 {
            loop {
                let mut edges = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        if rng.random::<f64>() < 0.45 {
                            edges.push((i, j, rng.random_range(0.1..5.0)));
                        }
                    }
                }
                if is_connected(n, &edges) {
                    out.push((n, edges));
                    break;
                }
            }
        }
    }
    out
}

fn criterion_1() -> Outcome {
    let started = Instant::now();
    let graphs = small_connected_graphs();
    let mut checked = 0usize;
    let mut worst = 0.0f64;
    for (n, edges) in &graphs {
        let g = graph(*n, edges);
        for labels in set_partitions(*n) {
            let q = modularity(&g, &Partition::new(labels.clone())).map_err(|e| e.to_string())?;
            let expected = oracle_q(*n, edges, &labels);
            worst = worst.max((q - expected).abs());
            checked += 1;
        }
    }
    let elapsed = started.elapsed();
    ensure(worst <= 1e-9, || format!("max |ΔQ| = {worst:e} > 1e-9"))?;
    ensure(elapsed < Duration::from_secs(10), || {
        format!("took {elapsed:.2?} (limit 10 s)")
    })?;
    Ok(format!(
        "{} graphs, {checked} partitions, max |ΔQ| = {worst:.1e}, {elapsed:.2?}",
        graphs.len()
    ))
}

fn criterion_2() -> Outcome {
    let edges = [
        (0, 1, 1.0),
        (1, 2, 1.0),
        (0, 2, 1.0),
        (3, 4, 1.0),
        (4, 5, 1.0),
        (3, 5, 1.0),
    ];
    let g = graph(6, &edges);
    let truth = [0, 0, 0, 1, 1, 1];
    let same = |labels: &[usize]| {
        (0..6).all(|i| (0..6).all(|j| (labels[i] == labels[j]) == (truth[i] == truth[j])))
    };
    let mut notes = Vec::new();
    for alg in Algorithm::ALL {
        let mut params = AlgorithmParams::new(alg).with_seed(42);
        if alg == Algorithm::Spectral {
            params = params.with_k(2);
        }
        let report = detect(&g, &params).map_err(|e| format!("{alg}: {e}"))?;
        let labels = report.partition.labels();
        ensure(same(labels), || format!("{alg} returned {labels:?}"))?;
        let q = oracle_q(6, &edges, labels);
        if alg != Algorithm::Spectral {
            ensure((q - 0.5).abs() <= 1e-9, || format!("{alg}: Q = {q}"))?;
        }
        notes.push(format!("{alg} Q={q:.9}"));
    }
    Ok(notes.join(", "))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut edges_seen = 0usize;
    for trial in 0..200 {
        let users = rng.random_range(1..=12);
        let items = rng.random_range(1..=12);
        let density = rng.random_range(0.1..0.9);
        let matrix: Vec<Vec<bool>> = (0..users)
            .map(|_| (0..items).map(|_| rng.random::<f64>() < density).collect())
            .collect();
        let names: Vec<(String, String)> = (0..users)
            .flat_map(|u| (0..items).map(move |i| (u, i)))
            .filter(|&(u, i)| matrix[u][i])
            .map(|(u, i)| (format!("u{u:02}"), format!("i{i:02}")))
            .collect();
        let bipartite =
            BipartiteGraph::from_pairs(names.iter().map(|(u, i)| (u.as_str(), i.as_str())));
        let projected = project_bipartite(&bipartite);

        let mut expected: BTreeMap<(String, String), u32> = BTreeMap::new();
        for j in 0..items {
            for k in j + 1..items {
                let c = (0..users).filter(|&u| matrix[u][j] && matrix[u][k]).count() as u32;
                if c > 0 {
                    expected.insert((format!("i{j:02}"), format!("i{k:02}")), c);
                }
            }
        }
        let ids = projected.items();
        let mut got = BTreeMap::new();
        for e in projected.edges() {
            ensure(e.a != e.b, || {
                format!("trial {trial}: self-loop on {}", ids[e.a])
            })?;
            ensure(e.weight == f64::from(e.count), || {
                format!(
                    "trial {trial}: weight {} differs from count {}",
                    e.weight, e.count
                )
            })?;
            let (x, y) = (ids[e.a].clone(), ids[e.b].clone());
            let key = if x < y { (x, y) } else { (y, x) };
            ensure(got.insert(key, e.count).is_none(), || {
                format!("trial {trial}: duplicate edge")
            })?;
        }
        ensure(got == expected, || {
            format!("trial {trial}: projection {got:?} differs from direct count {expected:?}")
        })?;
        edges_seen += got.len();
    }
    Ok(format!(
        "200 matrices, {edges_seen} edges matched exactly, no self-loops"
    ))
}

fn criterion_4() -> Outcome {
    let expected = 11.84f64;
    let w = BlendCoefficients::default().weight(8.2, 8.2, 5);
    let mut ratings = ItemRatings::new();
    ratings.insert("a", Category::Scent, 8.2, 10).unwrap();
    ratings.insert("b", Category::Scent, 8.2, 10).unwrap();
    let single =
        CoPreferenceGraph::from_counts(vec!["perfume_a".into(), "perfume_b".into()], &[(0, 1, 5)])
            .unwrap()
            .blend_weights(&ratings, Category::Scent, BlendCoefficients::default())
            .map_err(|e| e.to_string())?;
    let blended = single.edges()[0].weight;
    let ulps = |x: f64| (x.to_bits() as i64 - expected.to_bits() as i64).abs();
    for (what, value) in [("weight()", w), ("blend_weights", blended)] {
        ensure((value - expected).abs() <= 1e-12, || {
            format!("{what} = {value}")
        })?;
    }

    // item 0 has 3 edges and item 1 has 4; their shared edge weighs 12
    let items: Vec<String> = (0..6).map(|i| format!("p{i}")).collect();
    let edge = |a, b, weight| CoEdge {
        a,
        b,
        count: 1,
        weight,
    };
    let g = CoPreferenceGraph::from_parts(
        items.clone(),
        vec![None; 6],
        vec![
            edge(0, 1, 12.0),
            edge(0, 2, 1.0),
            edge(0, 3, 1.0),
            edge(1, 3, 1.0),
            edge(1, 4, 1.0),
            edge(1, 5, 1.0),
        ],
    )
    .map_err(|e| e.to_string())?;
    let degrees = g.edge_degrees();
    ensure(degrees[0] == 3 && degrees[1] == 4, || {
        format!("degrees {degrees:?}")
    })?;
    let normalized = g.normalize_weights();
    let n01 = normalized
        .edges()
        .iter()
        .find(|e| (e.a, e.b) == (0, 1))
        .unwrap()
        .weight;
    ensure(n01 == 1.0, || format!("normalize(12, 3, 4) = {n01}"))?;

    let boundary = CoPreferenceGraph::from_parts(
        items[..3].to_vec(),
        vec![None; 3],
        vec![edge(0, 1, 3.0), edge(0, 2, 3.0 + 1e-6)],
    )
    .map_err(|e| e.to_string())?
    .filter_edges(3.0, EdgeFilterMode::Blended);
    let kept: Vec<f64> = boundary.edges().iter().map(|e| e.weight).collect();
    ensure(kept == vec![3.0 + 1e-6], || format!("filter kept {kept:?}"))?;

    Ok(format!(
        "W = {w:?} ({} ulp from 11.84; 0.6 and 8.2 have no exact binary form, checked to 1e-12), \
         normalize = {n01:?} exactly, filter drops 3.0 and keeps 3.000001",
        ulps(w)
    ))
}

fn criterion_5() -> Outcome {
    use Sentiment::{Negative, Positive};
    let examples = [
        (Positive, Some(1), Negative),
        (Negative, Some(9), Positive),
        (Positive, Some(5), Positive),
        (Negative, None, Negative),
    ];
    for (base, rating, expected) in examples {
        let got = apply_vote_override(base, rating).map_err(|e| e.to_string())?;
        ensure(got == expected, || {
            format!("({base:?}, {rating:?}) gave {got:?}")
        })?;
    }
    let rule = |base: Sentiment, r: u8| {
        if r >= 7 {
            Positive
        } else if r <= 3 {
            Negative
        } else {
            base
        }
    };
    let mut checked = 0;
    for base in [Positive, Negative] {
        for r in 1..=10u8 {
            let got = apply_vote_override(base, Some(r)).map_err(|e| e.to_string())?;
            ensure(got == rule(base, r), || {
                format!("({base:?}, {r}) gave {got:?}")
            })?;
            checked += 1;
        }
        for bad in [0u8, 11] {
            ensure(apply_vote_override(base, Some(bad)).is_err(), || {
                format!("vote {bad} accepted")
            })?;
        }
    }
    // the same rule decides incidence in the category bipartite graph
    let rec = |vote| {
        copref::ingest::ReviewRecord::new("u", "p", Positive).with_vote(Category::Scent, vote)
    };
    let kept = build_bipartite(&[rec(8)], Category::Scent).map_err(|e| e.to_string())?;
    let dropped = build_bipartite(&[rec(2)], Category::Scent).map_err(|e| e.to_string())?;
    ensure(
        kept.incidence_count() == 1 && dropped.incidence_count() == 0,
        || "bipartite incidence ignores the vote override".into(),
    )?;
    Ok(format!("4 examples and {checked} (base, vote) cases agree"))
}

/// NMI with the arithmetic-mean normalization; 1 when both are trivial.
fn oracle_nmi(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len() as f64;
    let mut joint: HashMap<(usize, usize), f64> = HashMap::new();
    let mut pa: HashMap<usize, f64> = HashMap::new();
    let mut pb: HashMap<usize, f64> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *joint.entry((x, y)).or_default() += 1.0 / n;
        *pa.entry(x).or_default() += 1.0 / n;
        *pb.entry(y).or_default() += 1.0 / n;
    }
    let entropy = |p: &HashMap<usize, f64>| -p.values().map(|v| v * v.ln()).sum::<f64>();
    let (ha, hb) = (entropy(&pa), entropy(&pb));
    if ha == 0.0 && hb == 0.0 {
        return 1.0;
    }
    let mi: f64 = joint
        .iter()
        .map(|(&(x, y), &p)| p * (p / (pa[&x] * pb[&y])).ln())
        .sum();
    2.0 * mi / (ha + hb)
}

fn criterion_6() -> Outcome {
    let started = Instant::now();
    let mut means = Vec::new();
    let mut failures = Vec::new();
    for alg in Algorithm::ALL {
        let mut total = 0.0;
        for seed in 0..10u64 {
            let (g, truth) =
                planted_partition(4, 30, 0.30, 0.02, seed).map_err(|e| e.to_string())?;
            let mut params = AlgorithmParams::new(alg).with_seed(seed);
            if alg == Algorithm::Spectral {
                params = params.with_k(4);
            }
            let report = detect(&g, &params).map_err(|e| format!("{alg} seed {seed}: {e}"))?;
            total += oracle_nmi(report.partition.labels(), truth.labels());
        }
        let mean = total / 10.0;
        if mean < 0.90 {
            failures.push(format!("{alg} mean NMI {mean:.3}"));
        }
        means.push(format!("{alg} {mean:.3}"));
    }
    let elapsed = started.elapsed();
    ensure(failures.is_empty(), || failures.join(", "))?;
    ensure(elapsed < Duration::from_secs(120), || {
        format!("took {elapsed:.2?} (limit 120 s)")
    })?;
    Ok(format!("mean NMI: {}, {elapsed:.2?}", means.join(", ")))
}

fn random_connected(
    rng: &mut ChaCha8Rng,
    offset: usize,
    size: usize,
    edges: &mut Vec<(usize, usize, f64)>,
) {
    for v in 1..size {
        let parent = rng.random_range(0..v);
        edges.push((offset + parent, offset + v, rng.random_range(0.5..3.0)));
    }
    for i in 0..size {
        for j in i + 1..size {
            let tree_edge = edges.iter().any(|&(a, b, _)| {
                (a, b) == (offset + i, offset + j) || (a, b) == (offset + j, offset + i)
            });
            if !tree_edge && rng.random::<f64>() < 0.3 {
                edges.push((offset + i, offset + j, rng.random_range(0.5..3.0)));
            }
        }
    }
}

fn criterion_7() -> Outcome {
    let m = SymmetricMatrix::from_fn(2, |i, j| if i == j { 2.0 } else { 1.0 });
    let eig = eigensolve_symmetric(&m, 2).map_err(|e| e.to_string())?;
    ensure(
        (eig.values[0] - 1.0).abs() <= 1e-8 && (eig.values[1] - 3.0).abs() <= 1e-8,
        || format!("[[2,1],[1,2]] gave {:?}", eig.values),
    )?;

    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut worst_trace = 0.0f64;
    for _ in 0..20 {
        let mut lower = Vec::new();
        for i in 0..20 {
            for _ in 0..=i {
                lower.push(rng.random_range(-5.0..5.0));
            }
        }
        let m = SymmetricMatrix::from_lower(20, lower).map_err(|e| e.to_string())?;
        let trace: f64 = (0..20).map(|i| m.get(i, i)).sum();
        let eig = eigensolve_symmetric(&m, 20).map_err(|e| e.to_string())?;
        worst_trace = worst_trace.max((eig.values.iter().sum::<f64>() - trace).abs());
    }
    ensure(worst_trace <= 1e-8, || {
        format!("trace error {worst_trace:e}")
    })?;

    for trial in 0..20 {
        let components = rng.random_range(2..=5);
        let mut edges = Vec::new();
        let mut n = 0;
        for _ in 0..components {
            let size = rng.random_range(1..=6);
            random_connected(&mut rng, n, size, &mut edges);
            n += size;
        }
        let g = graph(n, &edges);
        let l = laplacian(&g, LaplacianKind::Unnormalized);
        let eig = eigensolve_symmetric(&l, n).map_err(|e| e.to_string())?;
        let zeros = eig.values.iter().filter(|v| v.abs() < 1e-8).count();
        ensure(zeros == components, || {
            format!(
                "trial {trial}: {zeros} zero eigenvalues for {components} components ({:?})",
                eig.values
            )
        })?;
    }
    Ok(format!(
        "{{1, 3}} recovered, max trace error {worst_trace:.1e}, 20/20 zero counts match"
    ))
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect()
}

fn criterion_8() -> Outcome {
    let conf = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/grid.conf");
    let mut runs = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let mut c = PipelineConfig::from_file(&conf).map_err(|e| e.to_string())?;
        c.seed = 42;
        c.out_dir = Some(dir.path().to_path_buf());
        run_pipeline(&c).map_err(|e| e.to_string())?;
        runs.push(snapshot(dir.path()));
    }
    ensure(!runs[0].is_empty(), || "no outputs written".into())?;
    let differing: Vec<&String> = runs[0]
        .iter()
        .filter(|(name, bytes)| runs[1].get(*name) != Some(bytes))
        .map(|(name, _)| name)
        .collect();
    ensure(
        differing.is_empty() && runs[0].len() == runs[1].len(),
        || format!("differing files: {differing:?}"),
    )?;
    let bytes: usize = runs[0].values().map(Vec::len).sum();
    Ok(format!(
        "{} files ({bytes} bytes) identical across runs",
        runs[0].len()
    ))
}

fn criterion_9() -> Outcome {
    let records = ReviewCorpus::default()
        .generate()
        .map_err(|e| e.to_string())?;
    let mut incidences = Vec::new();
    for c in Category::ALL {
        incidences.push(
            build_bipartite(&records, c)
                .map_err(|e| e.to_string())?
                .incidence_count(),
        );
    }
    let mean = incidences.iter().sum::<usize>() as f64 / 3.0;
    ensure((32_000.0..=40_000.0).contains(&mean), || {
        format!("corpus has {incidences:?} positive incidences, expected about 36,000")
    })?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let input = dir.path().join("reviews.csv");
    write_reviews(&records, &input).map_err(|e| e.to_string())?;
    let c = PipelineConfig {
        input,
        out_dir: Some(dir.path().join("out")),
        ..PipelineConfig::default()
    };
    let started = Instant::now();
    let reports = run_pipeline(&c).map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();
    ensure(reports.len() == 35, || {
        format!("{} cells, expected 35", reports.len())
    })?;
    ensure(elapsed < Duration::from_secs(600), || {
        format!("took {elapsed:.2?} (limit 10 min)")
    })?;
    Ok(format!(
        "{} reviews, {incidences:?} positive incidences, 35 cells in {elapsed:.2?}",
        records.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 9] = [
        ("modularity oracle", criterion_1),
        ("two-triangle benchmark", criterion_2),
        ("projection oracle", criterion_3),
        ("blend and normalize arithmetic", criterion_4),
        ("vote override table", criterion_5),
        ("planted partition recovery", criterion_6),
        ("eigensolver", criterion_7),
        ("determinism", criterion_8),
        ("scale smoke test", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
            let message = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {message}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {reason}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
