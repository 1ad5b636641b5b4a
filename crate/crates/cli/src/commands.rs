use crate::report::{Check, Failure, InputDigest, Report};
use crate::{Command, EulerCommand, Listing, MawCommand, OrientCommand, TautCommand};
use eulergraph::homology::{to_big, Subquotient};
use eulergraph::orientations::{self, AcyclicOrientations};
use eulergraph::taut::{self, TautStructures};
use eulergraph::{
    BranchedComplex, EdgeOrientation, FanSide, HomologyClass, Kind, OrientationError, TautError, TautStructure,
    Triangulation, TriangulationError,
};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

type Outcome = Result<(Value, Vec<Check>), Failure>;

const FOLIARITY_LABEL: &str = "Euler class of the carried foliation, conditional on foliarity";

pub(crate) fn dispatch(command: &Command, echo: Vec<String>) -> Report {
    let mut inputs = Vec::new();
    let outcome = match command {
        Command::Validate { tri } => validate(tri, &mut inputs),
        Command::Homology { tri } => homology(tri, &mut inputs),
        Command::Orient { command: OrientCommand::Enum { tri, listing } } => orient_enum(tri, listing, &mut inputs),
        Command::Euler { command: EulerCommand::Dunfield { tri, orient } } => euler_dunfield(tri, orient, &mut inputs),
        Command::Taut { command: TautCommand::Find { tri, listing } } => taut_find(tri, listing, &mut inputs),
        Command::Taut { command: TautCommand::Euler { tri, taut, fan_side } } => {
            taut_euler(tri, taut, (*fan_side).into(), &mut inputs)
        }
        Command::Maw { command: MawCommand::Graph { complex, tri } } => maw_graph(complex, tri.as_deref(), &mut inputs),
        Command::Swap { k, delta } => swap(*k, delta),
    };
    match outcome {
        Ok((result, checks)) => Report::finished(echo, inputs, result, checks),
        Err(failure) => Report::failed(echo, inputs, failure),
    }
}

fn value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("result serializes")
}

/// Integers as JSON numbers when they fit in an `i64`, decimal strings otherwise.
fn big_values<T: ToPrimitive + std::fmt::Display>(values: &[T]) -> Value {
    values.iter().map(|v| v.to_i64().map_or_else(|| json!(v.to_string()), |x| json!(x))).collect()
}

fn read_input(path: &str, inputs: &mut Vec<InputDigest>) -> Result<String, Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::new("io", format!("{path}: {e}")))?;
    inputs.push(InputDigest::of(path, &bytes));
    String::from_utf8(bytes).map_err(|_| Failure::new("io", format!("{path}: not valid UTF-8")))
}

fn is_syntax(e: &TriangulationError) -> bool {
    matches!(e, TriangulationError::Syntax { .. } | TriangulationError::DuplicateGluing { .. })
}

fn load_tri(path: &str, inputs: &mut Vec<InputDigest>) -> Result<Triangulation, Failure> {
    let text = read_input(path, inputs)?;
    Triangulation::parse(&text).map_err(|e| {
        let kind = if is_syntax(&e) { "syntax" } else { "invalid_triangulation" };
        Failure::new(kind, format!("{path}: {e}"))
    })
}

fn internal(e: impl std::fmt::Display) -> Failure {
    Failure::new("internal", e)
}

fn validate(path: &str, inputs: &mut Vec<InputDigest>) -> Outcome {
    let text = read_input(path, inputs)?;
    match Triangulation::parse(&text) {
        Ok(tri) => Ok((value(&tri.report()), vec![Check::pass("valid")])),
        Err(e) if is_syntax(&e) => Err(Failure::new("syntax", format!("{path}: {e}"))),
        Err(e) => Ok((json!({ "valid": false, "reason": e.to_string() }), vec![Check::new("valid", false, Some(e.to_string()))])),
    }
}

fn group_entry(sq: &Subquotient) -> Value {
    let group = sq.group();
    json!({
        "group": group.to_string(),
        "rank": group.rank,
        "torsion": big_values(&group.torsion),
        "fingerprint": sq.fingerprint(),
    })
}

fn homology(path: &str, inputs: &mut Vec<InputDigest>) -> Outcome {
    let tri = load_tri(path, inputs)?;
    let complex = tri.dual_chain_complex();
    let mut degrees = Vec::new();
    for k in 0..=complex.top_degree() {
        degrees.push(json!({
            "degree": k,
            "chain_rank": complex.rank(k).map_err(internal)?,
            "homology": group_entry(&complex.homology(k).map_err(internal)?),
            "cohomology": group_entry(&complex.cohomology(k).map_err(internal)?),
        }));
    }
    Ok((json!({ "kind": value(&tri.kind()), "degrees": degrees }), Vec::new()))
}

fn thread_pool() -> Result<rayon::ThreadPool, Failure> {
    let threads = match std::env::var("EULERGRAPH_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| Failure::new("usage", format!("EULERGRAPH_THREADS must be a non-negative integer, got {v:?}")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(internal)
}

fn orientation_failure(e: OrientationError) -> Failure {
    match e {
        OrientationError::Syntax { .. } => Failure::new("syntax", e),
        OrientationError::Homology(_) => internal(e),
        _ => Failure::new("invalid_input", e),
    }
}

fn euler_summary(tri: &Triangulation, o: &EdgeOrientation) -> Value {
    match orientations::euler_class(tri, o) {
        Ok(r) => json!({
            "phi": r.cochain.values,
            "class": value(&r.class),
            "is_zero": r.is_zero,
        }),
        Err(e @ OrientationError::NotACocycle { .. }) => json!({ "cocycle": false, "reason": e.to_string() }),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

fn orient_enum(path: &str, listing: &Listing, inputs: &mut Vec<InputDigest>) -> Outcome {
    let tri = load_tri(path, inputs)?;
    let stream: AcyclicOrientations =
        orientations::enumerate_acyclic_orientations(&tri, listing.limit).map_err(orientation_failure)?;
    let found: Vec<EdgeOrientation> = stream.collect();
    let mut checks = Vec::new();
    let cyclic = found.iter().filter(|o| !orientations::is_acyclic(&tri, o).unwrap_or(false)).count();
    checks.push(Check::new("acyclic", cyclic == 0, Some(format!("{cyclic} listed orientations have a cyclic face"))));
    if listing.limit.is_none() {
        let missing = found.iter().filter(|o| found.binary_search(&o.reversed()).is_err()).count();
        checks.push(Check::new(
            "reversal_closed",
            missing == 0,
            Some(format!("{missing} orientations have no reversed partner")),
        ));
    }
    if listing.count_only {
        return Ok((json!({ "count": found.len() }), checks));
    }
    let entries: Vec<Value> = if tri.kind() == Kind::Closed {
        let pool = thread_pool()?;
        pool.install(|| {
            found
                .par_iter()
                .map(|o| json!({ "orientation": o.sign_string(), "euler": euler_summary(&tri, o) }))
                .collect()
        })
    } else {
        found.iter().map(|o| json!({ "orientation": o.sign_string() })).collect()
    };
    Ok((json!({ "count": found.len(), "orientations": entries }), checks))
}

fn euler_dunfield(path: &str, literal: &str, inputs: &mut Vec<InputDigest>) -> Outcome {
    let tri = load_tri(path, inputs)?;
    let o = EdgeOrientation::parse(literal).map_err(orientation_failure)?;
    let echo = o.sign_string();
    match orientations::euler_class(&tri, &o) {
        Ok(r) => {
            let weights = r.cochain.dual_sector_weights();
            let checks = vec![
                Check::pass("acyclic"),
                Check::pass("integral"),
                Check::pass("cocycle"),
                Check::new(
                    "maw_agreement",
                    weights == r.cochain.values,
                    Some(format!("φ = {:?} but dual sector weights are {:?}", r.cochain.values, weights)),
                ),
            ];
            let mut result = value(&r);
            result["dual_sector_weights"] = value(&weights);
            result["label"] = json!(FOLIARITY_LABEL);
            Ok((result, checks))
        }
        Err(e @ OrientationError::CyclicFace { .. }) => Ok((
            json!({ "orientation": echo, "acyclic": false }),
            vec![Check::new("acyclic", false, Some(e.to_string()))],
        )),
        Err(e @ OrientationError::NonIntegral { .. }) => Ok((
            json!({ "orientation": echo, "acyclic": true, "integral": false }),
            vec![Check::pass("acyclic"), Check::new("integral", false, Some(e.to_string()))],
        )),
        Err(OrientationError::NotACocycle { coboundary }) => {
            let mixed = (0..tri.edges().len())
                .map(|e| orientations::mixed_count(&tri, &o, e))
                .collect::<Result<Vec<_>, _>>()
                .map_err(orientation_failure)?;
            let phi: Vec<i64> = mixed.iter().map(|&m| 1 - (m / 2) as i64).collect();
            let detail = format!("coboundary {}", big_values(&coboundary));
            Ok((
                json!({
                    "orientation": echo,
                    "acyclic": true,
                    "mixed": mixed,
                    "phi": phi,
                    "coboundary": big_values(&coboundary),
                }),
                vec![Check::pass("acyclic"), Check::pass("integral"), Check::new("cocycle", false, Some(detail))],
            ))
        }
        Err(e) => Err(orientation_failure(e)),
    }
}

fn taut_failure(e: TautError) -> Failure {
    match e {
        TautError::Syntax { .. } => Failure::new("syntax", e),
        TautError::NotIdeal | TautError::LengthMismatch { .. } => Failure::new("invalid_input", e),
        _ => internal(e),
    }
}

fn taut_find(path: &str, listing: &Listing, inputs: &mut Vec<InputDigest>) -> Outcome {
    let tri = load_tri(path, inputs)?;
    let stream: TautStructures = taut::find_taut_structures(&tri).map_err(taut_failure)?;
    let found: Vec<TautStructure> = match listing.limit {
        Some(n) => stream.take(n).collect(),
        None => stream.collect(),
    };
    let mut bad = 0;
    for ts in &found {
        if !taut::check_taut(&tri, ts).map_err(taut_failure)?.passes() {
            bad += 1;
        }
    }
    let checks = vec![Check::new("taut", bad == 0, Some(format!("{bad} listed structures fail the taut conditions")))];
    if listing.count_only {
        return Ok((json!({ "count": found.len() }), checks));
    }
    Ok((json!({ "count": found.len(), "structures": value(&found) }), checks))
}

fn same_classes(a: &eulergraph::LackenbyResult, b: &eulergraph::LackenbyResult) -> bool {
    let classes = |r: &eulergraph::LackenbyResult| -> [Option<HomologyClass>; 3] {
        [r.g_class.clone(), r.beta_class.clone(), r.gamma_plus_class.clone()]
    };
    classes(a) == classes(b) && a.gamma_minus_class == b.gamma_minus_class
}

fn taut_euler(path: &str, literal: &str, side: FanSide, inputs: &mut Vec<InputDigest>) -> Outcome {
    let tri = load_tri(path, inputs)?;
    let ts = TautStructure::parse(literal).map_err(taut_failure)?;
    let report = taut::check_taut(&tri, &ts).map_err(taut_failure)?;
    if !report.passes() {
        let detail = report.violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ");
        return Ok((
            json!({ "structure": value(&ts), "violations": value(&report.violations) }),
            vec![Check::new("taut", false, Some(detail))],
        ));
    }
    let result = taut::lackenby_classes(&tri, &ts, side).map_err(taut_failure)?;
    let other_side = match side {
        FanSide::Default => FanSide::Alternate,
        FanSide::Alternate => FanSide::Default,
    };
    let other = taut::lackenby_classes(&tri, &ts, other_side).map_err(taut_failure)?;
    let h1 = tri.dual_chain_complex().homology(1).map_err(internal)?;

    let mut checks = vec![Check::pass("taut")];
    checks.extend(result.checks.iter().map(Check::from));
    checks.push(Check::new(
        "fan_side_independence",
        same_classes(&result, &other),
        Some("classes differ between the two fan sides".to_string()),
    ));
    let mut out = value(&result);
    if let Value::Object(map) = &mut out {
        map.remove("checks");
    }
    out["structure"] = value(&ts);
    out["fan_side"] = value(&side);
    out["h1"] = group_entry(&h1);
    Ok((out, checks))
}

fn maw_graph(path: &str, tri_path: Option<&str>, inputs: &mut Vec<InputDigest>) -> Outcome {
    let text = read_input(path, inputs)?;
    let bc = BranchedComplex::from_json(&text).map_err(|e| Failure::new("syntax", format!("{path}: {e}")))?;
    let graph = eulergraph::branched::maw_dual_graph(&bc).map_err(|e| Failure::new("invalid_input", e))?;
    let cycle = eulergraph::branched::check_cycle(&graph, &bc);
    let detail = serde_json::to_string(&cycle.violations).expect("violations serialize");
    let mut checks = vec![Check::new("cycle_law", cycle.passes(), Some(detail))];
    let mut result = json!({
        "boundary_coorientation": value(&bc.boundary_coorientation()),
        "arcs": value(&graph.arcs),
        "regions": value(&cycle.regions),
        "violations": value(&cycle.violations),
    });
    if let Some(tri_path) = tri_path {
        let tri = load_tri(tri_path, inputs)?;
        let complex = tri.dual_chain_complex();
        let chain = graph
            .weighted_chain(&bc, tri.faces().len())
            .map_err(|e| Failure::new("invalid_input", e))?;
        let as_big = to_big(&chain);
        let boundary = complex.apply_boundary(1, &as_big).map_err(internal)?;
        let closed = boundary.iter().all(Zero::is_zero);
        checks.push(Check::new("closed_chain", closed, Some(format!("boundary {}", big_values(&boundary)))));
        result["chain"] = json!(chain);
        if closed {
            let class = complex.homology(1).and_then(|h| h.class_of(&as_big)).map_err(internal)?;
            result["class"] = value(&class);
        }
    }
    Ok((result, checks))
}

fn parse_delta(text: &str) -> Result<HomologyClass, Failure> {
    let bad = |e: serde_json::Error| Failure::new("syntax", format!("--delta: {e}"));
    let raw: Value = serde_json::from_str(text).map_err(bad)?;
    let raw = match raw {
        Value::Array(free) => json!({ "degree": 1, "free": free, "torsion": [] }),
        other => other,
    };
    serde_json::from_value(raw).map_err(bad)
}

fn swap(k: i64, delta: &str) -> Outcome {
    let delta = parse_delta(delta)?;
    let difference =
        eulergraph::branched::swap_difference_class(k, &delta).map_err(|e| Failure::new("invalid_input", e))?;
    Ok((
        json!({
            "k": k,
            "factor": 2 - k,
            "delta": value(&delta),
            "difference": value(&difference),
            "is_zero": difference.is_zero(),
        }),
        Vec::new(),
    ))
}
