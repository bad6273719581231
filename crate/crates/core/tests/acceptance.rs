//! Acceptance gate: runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any fails.

use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quadfree::bounds::{
    final_case_z_bound, low_degree_adjacency_expression, max_degree_feasibility, reiman_bound,
    shared_neighbor_degree_expression, shared_neighbor_expression, BoundKind, DenominatorReading,
    Family,
};
use quadfree::galois::{prime_power, Field};
use quadfree::graph::Graph;
use quadfree::projective::Plane;
use quadfree::search::{brute_force_oracle, max_edges_c4free, SearchConfig};
use quadfree::{extremal_witness, graph6, polarity_graph};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("{what} took {t:?}, limit {limit:?}"))
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Graphs touched by the suite, for the 2-path property.
#[derive(Default)]
struct Touched(Vec<Graph>);

fn polarity_counts(touched: &mut Touched) -> Check {
    let start = Instant::now();
    for q in [2u64, 3, 4, 5, 7, 8, 9, 16] {
        let er = polarity_graph(&Field::new(q).unwrap()).map_err(|e| e.to_string())?;
        let g = &er.graph;
        let qu = q as usize;
        let deg = g.degrees();
        let hi = deg.iter().filter(|&&d| d == qu + 1).count();
        let lo = deg.iter().filter(|&&d| d == qu).count();
        ensure(
            g.n() == qu * qu + qu + 1
                && 2 * g.edge_count() == qu * (qu + 1) * (qu + 1)
                && hi == qu * qu
                && lo == qu + 1
                && g.is_c4_free(),
            || format!("q={q}: n={} e={} census {hi}/{lo}", g.n(), g.edge_count()),
        )?;
        touched.0.push(er.graph);
    }
    within(start, Duration::from_secs(5), "construction")?;
    Ok(format!("8 polarity graphs in {:?}", start.elapsed()))
}

fn equality_witnesses(touched: &mut Touched) -> Check {
    let start = Instant::now();
    for (q, n, e) in [
        (2u64, 6usize, 7usize),
        (4, 20, 46),
        (8, 72, 316),
        (16, 272, 2296),
    ] {
        let g = extremal_witness(q, true).map_err(|e| e.to_string())?;
        let c = g.degree_classes(q as usize);
        let qu = q as usize;
        ensure(
            g.n() == n
                && g.edge_count() == e
                && g.is_c4_free()
                && c.q_plus_1 == qu * qu - qu
                && c.q_exact == 2 * qu
                && c.q_minus_1 == 0
                && c.q_minus_2 + c.at_most_q_minus_3 + c.q_plus_2 + c.above_q_plus_2 == 0,
            || format!("q={q}: n={} e={} census {c:?}", g.n(), g.edge_count()),
        )?;
        touched.0.push(g);
    }
    within(start, Duration::from_secs(5), "witnesses")?;
    Ok("(6,7) (20,46) (72,316) (272,2296)".into())
}

fn polarity_edge_counts() -> Check {
    let qs: Vec<u64> = (2..=16).filter(|&q| prime_power(q).is_some()).collect();
    for &q in &qs {
        let er = polarity_graph(&Field::new(q).unwrap()).map_err(|e| e.to_string())?;
        let want = (q * (q + 1) * (q + 1) / 2) as usize;
        ensure(er.graph.edge_count() == want, || {
            format!("q={q}: {} edges, expected {want}", er.graph.edge_count())
        })?;
    }
    Ok(format!("q in {qs:?}"))
}

fn absolute_points() -> Check {
    let mut qs: Vec<u64> = (2..=256).filter(|&q| prime_power(q).is_some()).collect();
    qs.extend([289, 343, 512, 625, 1024]);
    for &q in &qs {
        let plane = Plane::new(Field::new(q).unwrap());
        let a = plane.absolute_points().len();
        ensure(a as u64 == q + 1, || format!("q={q}: {a} absolute points"))?;
    }
    Ok(format!("{} orders up to 1024", qs.len()))
}

fn search_vs_oracle(touched: &mut Touched) -> Check {
    let mut values = Vec::new();
    let mut oracle_time = Duration::ZERO;
    for n in 1..=7 {
        let t = Instant::now();
        let oracle = brute_force_oracle(n).map_err(|e| e.to_string())?;
        oracle_time += t.elapsed();
        let t = Instant::now();
        let r = max_edges_c4free(&SearchConfig::new(n)).map_err(|e| e.to_string())?;
        within(t, Duration::from_secs(1), &format!("search n={n}"))?;
        ensure(r.ex == oracle && r.optimal, || {
            format!("n={n}: search {} oracle {oracle}", r.ex)
        })?;
        ensure(
            r.witness.is_c4_free() && r.witness.edge_count() as u64 == r.ex,
            || format!("n={n}: bad witness"),
        )?;
        values.push(r.ex);
        touched.0.push(r.witness);
    }
    ensure(values[5] == 7 && values[6] == 9, || {
        format!("ex(6), ex(7) = {:?}", &values[5..])
    })?;
    ensure(oracle_time < Duration::from_secs(600), || {
        format!("oracle took {oracle_time:?}")
    })?;
    Ok(format!("ex(1..7) = {values:?}, oracle {oracle_time:?}"))
}

fn small_orders(touched: &mut Touched) -> Check {
    let start = Instant::now();
    let mut prev = 0;
    let mut values = Vec::new();
    for n in [10usize, 11, 12] {
        let mut cfg = SearchConfig::new(n);
        cfg.budget = Duration::from_secs(1800);
        let r = max_edges_c4free(&cfg).map_err(|e| e.to_string())?;
        ensure(r.optimal, || format!("n={n} not proven optimal"))?;
        ensure(r.ex >= prev && r.ex <= reiman_bound(n as u64), || {
            format!(
                "n={n}: {} against previous {prev} and bound {}",
                r.ex,
                reiman_bound(n as u64)
            )
        })?;
        ensure(r.witness.is_c4_free(), || {
            format!("n={n}: witness has a 4-cycle")
        })?;
        prev = r.ex;
        values.push(r.ex);
        touched.0.push(r.witness);
    }
    ensure(values[2] == 21, || format!("ex(12) = {}", values[2]))?;
    within(start, Duration::from_secs(1800), "small orders")?;
    Ok(format!(
        "ex(10,11,12) = {values:?} in {:?}",
        start.elapsed()
    ))
}

fn final_cases() -> Check {
    let expected = [rat(-1, 4), rat(-3, 4), rat(-7, 4), rat(3, 4)];
    for q in (6..=64).step_by(2) {
        for (case, want) in Family::FINAL_CASES.iter().zip(&expected) {
            let b = final_case_z_bound(q, *case).map_err(|e| e.to_string())?;
            ensure(b.kind == BoundKind::Upper && &b.bound == want, || {
                format!("q={q} {case:?}: {:?} {}", b.kind, b.bound)
            })?;
        }
    }
    Ok("A -1/4, B -3/4, C -7/4, D 3/4 for even q in 6..=64".into())
}

fn inequality_checkers() -> Check {
    let start = Instant::now();
    for q in 6..=1000 {
        let verdicts = [
            low_degree_adjacency_expression(q),
            shared_neighbor_expression(q),
            shared_neighbor_degree_expression(q, DenominatorReading::Corrected),
        ];
        for v in verdicts {
            let v = v.map_err(|e| e.to_string())?;
            ensure(!v.feasible && v.value.is_negative(), || {
                format!("q={q} {:?}: value {}", v.lemma, v.value)
            })?;
        }
    }
    let mut checked = 0;
    for q in 6..=64u64 {
        for d in q + 3..q * q + q {
            let v = max_degree_feasibility(q, d).map_err(|e| e.to_string())?;
            ensure(!v.feasible, || format!("q={q} d={d}: no contradiction"))?;
            checked += 1;
        }
        let v = max_degree_feasibility(q, q + 1).map_err(|e| e.to_string())?;
        ensure(v.feasible, || format!("q={q} d=q+1: contradiction fired"))?;
    }
    within(start, Duration::from_secs(60), "inequality checks")?;
    Ok(format!(
        "2985 expressions, {checked} degree cases in {:?}",
        start.elapsed()
    ))
}

fn field_axioms(q: u64) -> Result<(), String> {
    let f = Field::new(q).unwrap();
    let q = q as u32;
    for a in 0..q {
        ensure(f.add_idx(a, 0) == a && f.mul_idx(a, 1) == a, || {
            format!("identity in GF({q})")
        })?;
        ensure(f.add_idx(a, f.neg_idx(a)) == 0, || {
            format!("negation in GF({q})")
        })?;
        if a != 0 {
            let inv = f
                .inv_idx(a)
                .ok_or_else(|| format!("no inverse in GF({q})"))?;
            ensure(f.mul_idx(a, inv) == 1, || format!("inverse in GF({q})"))?;
        }
        for b in 0..q {
            ensure(
                f.add_idx(a, b) == f.add_idx(b, a) && f.mul_idx(a, b) == f.mul_idx(b, a),
                || format!("commutativity in GF({q})"),
            )?;
            for c in 0..q {
                ensure(
                    f.add_idx(f.add_idx(a, b), c) == f.add_idx(a, f.add_idx(b, c))
                        && f.mul_idx(f.mul_idx(a, b), c) == f.mul_idx(a, f.mul_idx(b, c))
                        && f.mul_idx(a, f.add_idx(b, c))
                            == f.add_idx(f.mul_idx(a, b), f.mul_idx(a, c)),
                    || format!("associativity or distributivity in GF({q})"),
                )?;
            }
        }
    }
    Ok(())
}

fn unique_lines(q: u64) -> Result<(), String> {
    let plane = Plane::new(Field::new(q).unwrap());
    let lines: Vec<_> = plane.lines().collect();
    let points = plane.points();
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            let through = lines
                .iter()
                .filter(|l| plane.incident(a, l).unwrap() && plane.incident(b, l).unwrap())
                .count();
            ensure(through == 1, || {
                format!("q={q}: {a} and {b} span {through} lines")
            })?;
        }
    }
    Ok(())
}

fn random_graph(rng: &mut ChaCha8Rng) -> Graph {
    let n = rng.gen_range(0..=120);
    let p: f64 = rng.gen();
    let edges: Vec<(usize, usize)> = (1..n)
        .flat_map(|j| (0..j).map(move |i| (i, j)))
        .filter(|_| rng.gen_bool(p))
        .collect();
    Graph::from_edges(n, edges).unwrap()
}

fn property_suites(touched: &Touched) -> Check {
    for q in [2u64, 3, 4, 5, 7, 8, 9, 16] {
        field_axioms(q)?;
    }
    for q in (2..=9).filter(|&q| prime_power(q).is_some()) {
        unique_lines(q)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x6a09e667);
    for i in 0..1000 {
        let g = random_graph(&mut rng);
        let s = graph6::encode(&g);
        let back = graph6::decode(s.as_bytes()).map_err(|e| e.to_string())?;
        ensure(back == g && graph6::encode(&back) == s, || {
            format!("round trip {i} failed")
        })?;
    }
    let mut checked = 0;
    for g in &touched.0 {
        ensure(g.is_c4_free(), || "touched graph has a 4-cycle".into())?;
        let n = g.n() as u64;
        ensure(g.count_2paths() <= n * n.saturating_sub(1) / 2, || {
            format!("2-path count {} exceeds C({n},2)", g.count_2paths())
        })?;
        checked += 1;
    }
    Ok(format!(
        "fields, incidence q<=9, 1000 graph6 round trips, {checked} 2-path counts"
    ))
}

fn main() {
    let mut touched = Touched::default();
    let results: Vec<(&str, Check)> = vec![
        ("polarity graph counts", polarity_counts(&mut touched)),
        ("equality witnesses", equality_witnesses(&mut touched)),
        ("polarity edge counts", polarity_edge_counts()),
        ("absolute points", absolute_points()),
        ("search against oracle", search_vs_oracle(&mut touched)),
        ("small orders", small_orders(&mut touched)),
        ("final case table", final_cases()),
        ("inequality checkers", inequality_checkers()),
        ("property suites", property_suites(&touched)),
    ];
    let mut failed = 0;
    for (i, (name, r)) in results.iter().enumerate() {
        match r {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
