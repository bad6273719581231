use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde_json::{json, Value};

use quadfree::bounds::{
    self, final_cases_verdict, g_closed_form, g_table, low_degree_adjacency_expression,
    max_degree_feasibility, min_degree_roots, min_degree_verdict, reiman_bound,
    shared_neighbor_degree_expression, shared_neighbor_expression, BoundsError, DenominatorReading,
    LemmaVerdict,
};
use quadfree::graph::Graph;
use quadfree::search::{self, LowerSeed, SearchConfig, SearchError, SearchResult};
use quadfree::{delete_min_degree_vertex, graph6, polarity_graph, Field, Plane};

use crate::report::{sorted_json, write_file, Failure, Outcome};
use crate::LemmaChoice;

/// Tables are dumped only for fields small enough to print.
const DUMP_LIMIT: u32 = 256;

fn csv_table(q: u32, op: impl Fn(u32, u32) -> u32, symbol: &str) -> Vec<String> {
    let mut lines = vec![std::iter::once(symbol.to_string())
        .chain((0..q).map(|b| b.to_string()))
        .collect::<Vec<_>>()
        .join(",")];
    for a in 0..q {
        lines.push(
            std::iter::once(a.to_string())
                .chain((0..q).map(|b| op(a, b).to_string()))
                .collect::<Vec<_>>()
                .join(","),
        );
    }
    lines
}

fn polynomial(coeffs: &[u32]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| {
            let c = if c == 1 && i > 0 {
                String::new()
            } else {
                c.to_string()
            };
            match i {
                0 => c,
                1 => format!("{c}x"),
                _ => format!("{c}x^{i}"),
            }
        })
        .collect();
    terms.join(" + ")
}

pub fn field(q: u64, dump_tables: bool) -> Result<Outcome, Failure> {
    let f = Field::new(q)?;
    if dump_tables && f.order() > DUMP_LIMIT {
        return Err(Failure(format!(
            "tables are only dumped for q <= {DUMP_LIMIT}"
        )));
    }
    let mut results = json!({
        "q": q,
        "characteristic": f.characteristic(),
        "degree": f.degree(),
        "modulus": f.modulus(),
        "modulus_polynomial": polynomial(f.modulus()),
    });
    let mut summary = vec![format!(
        "GF({q}): characteristic {}, degree {}, modulus {}",
        f.characteristic(),
        f.degree(),
        polynomial(f.modulus())
    )];
    if dump_tables {
        let add = csv_table(f.order(), |a, b| f.add_idx(a, b), "+");
        let mul = csv_table(f.order(), |a, b| f.mul_idx(a, b), "*");
        results["add_table"] = json!(add);
        results["mul_table"] = json!(mul);
        summary.extend(add);
        summary.push(String::new());
        summary.extend(mul);
    }
    let mut out = Outcome::new(json!({ "q": q, "dump_tables": dump_tables }), results);
    out.summary = summary;
    Ok(out)
}

pub fn plane(q: u64, list_absolute: bool) -> Result<Outcome, Failure> {
    let plane = Plane::new(Field::new(q)?);
    let absolute = plane.absolute_points();
    let collinear = absolute.len() >= 2 && {
        let l = plane.join(&absolute[0], &absolute[1])?;
        absolute.iter().all(|p| plane.incident(p, &l).unwrap())
    };
    let points = plane.points().len();
    let mut results = json!({
        "q": q,
        "points": points,
        "lines": points,
        "points_per_line": q + 1,
        "absolute_points": absolute.len(),
        "absolute_points_collinear": collinear,
    });
    let mut summary = vec![format!(
        "PG(2,{q}): {points} points, {points} lines, {} absolute points{}",
        absolute.len(),
        if collinear { " on one line" } else { "" }
    )];
    if list_absolute {
        let listed: Vec<String> = absolute.iter().map(|p| p.to_string()).collect();
        summary.extend(listed.iter().cloned());
        results["absolute_point_list"] = json!(listed);
    }
    let mut out = Outcome::new(json!({ "q": q, "list_absolute": list_absolute }), results);
    out.summary = summary;
    Ok(out)
}

pub fn construct(q: u64, delete_min: bool, path: &Path) -> Result<Outcome, Failure> {
    let field = Field::new(q)?;
    let er = polarity_graph(&field)?;
    let g = if delete_min {
        delete_min_degree_vertex(&er.graph)?
    } else {
        er.graph.clone()
    };
    let full = q * (q + 1) * (q + 1) / 2;
    let expected = if delete_min { bounds::e0(q) } else { full };
    let c4_free = g.is_c4_free();
    let e = g.edge_count() as u64;
    write_file(path, &(graph6::encode(&g) + "\n"))?;
    let results = json!({
        "q": q,
        "n": g.n(),
        "e": e,
        "expected_edges": expected,
        "c4_free": c4_free,
        "delete_min": delete_min,
        "degree_classes": g.degree_classes(q as usize),
        "polarity_graph": er.report,
    });
    let mut out = Outcome::new(
        json!({ "q": q, "delete_min": delete_min, "out": path.display().to_string() }),
        results,
    );
    out.outputs.push(path.display().to_string());
    out.summary.push(format!(
        "{}: n={} e={e} (expected {expected}) c4_free={c4_free} -> {}",
        if delete_min {
            format!("ER_{q} minus a vertex")
        } else {
            format!("ER_{q}")
        },
        g.n(),
        path.display()
    ));
    if !c4_free || e != expected {
        out.verified = false;
        out.failure = Some(format!(
            "constructed graph has {e} edges, c4_free={c4_free}"
        ));
    }
    Ok(out)
}

fn verify_one(g: &Graph, q: Option<u64>) -> Value {
    let n = g.n() as u64;
    let two_paths = g.count_2paths();
    let witness = g.c4_witness();
    let mut v = json!({
        "n": g.n(),
        "e": g.edge_count(),
        "c4_free": witness.is_none(),
        "witness": witness,
        "two_paths": two_paths,
        "pair_count": n * n.saturating_sub(1) / 2,
    });
    if let Some(q) = q {
        let c = g.degree_classes(q as usize);
        if n == q * q + q {
            let budget = bounds::two_path_budget(
                q,
                g.edge_count() as u64,
                c.q_plus_1 as u64,
                c.q_plus_2 as u64,
            );
            let holds = bounds::Rational::from_integer(two_paths.into()) <= budget;
            v["two_path_budget"] = json!(format!("{budget}"));
            v["two_path_budget_holds"] = json!(holds);
        }
        v["degree_classes"] = serde_json::to_value(c).unwrap();
    }
    v
}

pub fn verify(input: &Path, q: Option<u64>) -> Result<Outcome, Failure> {
    let data =
        fs::read(input).map_err(|e| Failure(format!("cannot read {}: {e}", input.display())))?;
    let graphs = graph6::decode_all(&data)?;
    if graphs.is_empty() {
        return Err(Failure(format!("{} holds no graph", input.display())));
    }
    let reports: Vec<Value> = graphs.iter().map(|g| verify_one(g, q)).collect();
    let bad: Vec<(usize, [usize; 4])> = graphs
        .iter()
        .enumerate()
        .filter_map(|(i, g)| g.c4_witness().map(|w| (i, w)))
        .collect();
    let mut out = Outcome::new(
        json!({ "in": input.display().to_string(), "q": q }),
        json!({ "count": graphs.len(), "all_c4_free": bad.is_empty(), "graphs": reports }),
    );
    for (i, g) in graphs.iter().enumerate() {
        let state = match bad.iter().find(|(j, _)| *j == i) {
            None => "C4-free".to_string(),
            Some((_, [u, a, v, b])) => format!("4-cycle {u}-{a}-{v}-{b}"),
        };
        out.summary.push(format!(
            "graph {i}: n={} e={} {state}",
            g.n(),
            g.edge_count()
        ));
    }
    if let Some((i, [u, a, v, b])) = bad.first() {
        out.verified = false;
        out.failure = Some(format!("graph {i} contains the 4-cycle {u}-{a}-{v}-{b}"));
    }
    Ok(out)
}

fn verdict_line(v: &LemmaVerdict) -> String {
    let mut extra = String::new();
    if let Some(d) = v.d {
        extra.push_str(&format!(" d={d}"));
    }
    if let Some(x) = v.x_q2 {
        extra.push_str(&format!(" x_q2={x}"));
    }
    format!(
        "{:?} q={}{extra}: value {} -> {}",
        v.lemma,
        v.q,
        v.value,
        if v.feasible {
            "feasible"
        } else {
            "contradiction"
        }
    )
}

struct Collected {
    verdicts: Vec<Value>,
    extra: serde_json::Map<String, Value>,
    summary: Vec<String>,
}

impl Collected {
    fn push(&mut self, v: LemmaVerdict) {
        self.summary.push(verdict_line(&v));
        self.verdicts.push(serde_json::to_value(&v).unwrap());
    }
}

fn one_lemma(
    c: &mut Collected,
    which: LemmaChoice,
    q: u64,
    d: Option<u64>,
    xq2: Option<u64>,
    reading: DenominatorReading,
) -> Result<(), BoundsError> {
    match which {
        LemmaChoice::All => unreachable!("expanded by the caller"),
        LemmaChoice::MaxDegree => {
            let n = q * q + q;
            let ds: Vec<u64> = match d {
                Some(d) => vec![d],
                None => (q + 1..=q + 3).filter(|&d| d < n).collect(),
            };
            for d in ds {
                c.push(max_degree_feasibility(q, d)?);
            }
        }
        LemmaChoice::LowDegreeAdjacency => c.push(low_degree_adjacency_expression(q)?),
        LemmaChoice::TwoPathBudget => {
            let qi = q as i64;
            let mut rows = Vec::new();
            for deg in qi - 2..=qi + 2 {
                let table = g_table(q, deg)?;
                let closed = g_closed_form(q, deg)?;
                c.summary
                    .push(format!("g(d={deg}) = {table} (closed form {closed})"));
                rows.push(json!({ "degree": deg, "g": table, "closed_form": closed }));
            }
            c.extra.insert("g_table".into(), json!(rows));
        }
        LemmaChoice::MinDegree => {
            c.push(min_degree_verdict(q));
            let xs: Vec<u64> = match xq2 {
                Some(x) => vec![x],
                None => (1..=q + 3).collect(),
            };
            let roots = xs
                .into_iter()
                .map(|x| min_degree_roots(q, x).map(|r| serde_json::to_value(r).unwrap()))
                .collect::<Result<Vec<_>, _>>()?;
            c.extra.insert("min_degree_roots".into(), json!(roots));
        }
        LemmaChoice::SharedNeighbor => c.push(shared_neighbor_expression(q)?),
        LemmaChoice::SharedNeighborDegree => c.push(shared_neighbor_degree_expression(q, reading)?),
        LemmaChoice::Final => {
            let (zs, v) = final_cases_verdict(q)?;
            let mut table = serde_json::Map::new();
            for z in &zs {
                let name = format!("{:?}", z.case);
                c.summary
                    .push(format!("case {name}: z {:?} {}", z.kind, z.bound));
                table.insert(name, json!(z.bound.to_string()));
            }
            c.extra.insert("z_bounds".into(), Value::Object(table));
            c.extra
                .insert("final_cases".into(), serde_json::to_value(&zs).unwrap());
            c.push(v);
        }
    }
    Ok(())
}

pub fn bounds(
    q: u64,
    lemma: LemmaChoice,
    d: Option<u64>,
    xq2: Option<u64>,
    printed: bool,
) -> Result<Outcome, Failure> {
    if q < 2 {
        return Err(Failure(format!("q = {q} is below 2")));
    }
    let reading = if printed {
        DenominatorReading::Printed
    } else {
        DenominatorReading::Corrected
    };
    let mut c = Collected {
        verdicts: Vec::new(),
        extra: serde_json::Map::new(),
        summary: Vec::new(),
    };
    let mut skipped = Vec::new();
    if lemma == LemmaChoice::All {
        for which in [
            LemmaChoice::MaxDegree,
            LemmaChoice::LowDegreeAdjacency,
            LemmaChoice::TwoPathBudget,
            LemmaChoice::MinDegree,
            LemmaChoice::SharedNeighbor,
            LemmaChoice::SharedNeighborDegree,
            LemmaChoice::Final,
        ] {
            if let Err(e) = one_lemma(&mut c, which, q, d, xq2, reading) {
                c.summary.push(format!("{which:?}: skipped ({e})"));
                skipped.push(json!({ "lemma": format!("{which:?}"), "reason": e.to_string() }));
            }
        }
    } else {
        one_lemma(&mut c, lemma, q, d, xq2, reading)?;
    }
    let mut results = c.extra;
    results.insert("q".into(), json!(q));
    results.insert("verdicts".into(), json!(c.verdicts));
    if !skipped.is_empty() {
        results.insert("skipped".into(), json!(skipped));
    }
    let lemma_name = format!("{lemma:?}");
    let mut out = Outcome::new(
        json!({ "q": q, "lemma": lemma_name, "d": d, "xq2": xq2, "printed_denominator": printed }),
        Value::Object(results),
    );
    out.summary = c.summary;
    Ok(out)
}

pub fn reiman(n: u64) -> Result<Outcome, Failure> {
    let b = reiman_bound(n);
    let mut out = Outcome::new(
        json!({ "n": n, "reiman": true }),
        json!({ "n": n, "reiman_bound": b }),
    );
    out.summary.push(format!("ex({n}, C4) <= {b}"));
    Ok(out)
}

pub struct SearchOptions {
    pub n: usize,
    pub all_extremal: bool,
    pub budget: Option<u64>,
    pub workers: usize,
    pub seed_witness: Option<PathBuf>,
    pub out: PathBuf,
}

pub fn search(o: &SearchOptions) -> Result<Outcome, Failure> {
    let mut cfg = SearchConfig::new(o.n);
    cfg.all_extremal = o.all_extremal;
    cfg.workers = o.workers;
    cfg.budget = o.budget.map_or(search::DEFAULT_BUDGET, Duration::from_secs);
    if let Some(path) = &o.seed_witness {
        let data =
            fs::read(path).map_err(|e| Failure(format!("cannot read {}: {e}", path.display())))?;
        cfg.seed = Some(LowerSeed::Witness(graph6::decode(&data)?));
    }
    let (result, exhausted): (SearchResult, bool) = match search::max_edges_c4free(&cfg) {
        Ok(r) => (r, false),
        Err(SearchError::BudgetExhausted(r)) => (*r, true),
        Err(e) => return Err(e.into()),
    };
    fs::create_dir_all(&o.out)
        .map_err(|e| Failure(format!("cannot create {}: {e}", o.out.display())))?;
    let result_path = o.out.join("result.json");
    let witness_path = o.out.join("witness.g6");
    write_file(&result_path, &sorted_json(&result)?)?;
    write_file(&witness_path, &(graph6::encode(&result.witness) + "\n"))?;
    let mut outputs = vec![
        result_path.display().to_string(),
        witness_path.display().to_string(),
    ];
    if let Some(list) = &result.extremal {
        let path = o.out.join("extremal.g6");
        let text: String = list.iter().map(|g| graph6::encode(g) + "\n").collect();
        write_file(&path, &text)?;
        outputs.push(path.display().to_string());
    }
    let witness_ok = result.witness.is_c4_free() && result.witness.edge_count() as u64 == result.ex;
    let mut out = Outcome::new(
        json!({
            "n": o.n,
            "all_extremal": o.all_extremal,
            "budget_secs": cfg.budget.as_secs(),
            "workers": o.workers,
            "seed_witness": o.seed_witness.as_ref().map(|p| p.display().to_string()),
            "out": o.out.display().to_string(),
        }),
        serde_json::to_value(&result)?,
    );
    out.outputs = outputs;
    out.summary.push(format!(
        "ex({}, C4) {} {} ({} nodes, {} ms){}",
        o.n,
        if result.optimal { "=" } else { ">=" },
        result.ex,
        result.nodes,
        result.wall_ms,
        match result.certified_by {
            Some(c) => format!(", optimal by {c:?}").to_lowercase(),
            None => String::new(),
        }
    ));
    if let Some(list) = &result.extremal {
        out.summary
            .push(format!("{} extremal graphs up to isomorphism", list.len()));
    }
    if exhausted {
        out.summary
            .push("budget exhausted: the value is a lower bound only".into());
    }
    if !witness_ok {
        out.verified = false;
        out.failure = Some("search witness failed its own check".into());
    }
    Ok(out)
}
