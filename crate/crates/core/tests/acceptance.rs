//! Acceptance gate: one line per criterion, nonzero exit if any fails.

use eulergraph::branched::{check_cycle, maw_dual_graph, maw_euler_characteristic, swap_difference_class};
use eulergraph::homology::{cycle_class, is_boundary, smith_normal_form, to_big, TorsionCoordinate};
use eulergraph::orientations::{enumerate_acyclic_orientations, euler_cochain, EdgeOrientation, Sign};
use eulergraph::taut::{check_taut, find_taut_structures, flatten, lackenby_classes, verify_lackenby};
use eulergraph::{
    BoundaryCoorientation, FanSide, HomologyClass, IntMatrix, Kind, OrientationError, Sector, TautStructure,
    Triangulation,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

fn fixture_dir() -> String {
    format!("{}/../../fixtures", env!("CARGO_MANIFEST_DIR"))
}

fn manifest() -> Value {
    serde_json::from_str(&std::fs::read_to_string(format!("{}/manifest.json", fixture_dir())).unwrap()).unwrap()
}

struct Fixture {
    name: String,
    tri: Triangulation,
    meta: Value,
}

fn fixtures() -> Vec<Fixture> {
    let manifest = manifest();
    manifest
        .as_object()
        .unwrap()
        .iter()
        .map(|(name, meta)| {
            let text = std::fs::read_to_string(format!("{}/{name}.tri", fixture_dir())).unwrap();
            Fixture { name: name.clone(), tri: Triangulation::parse(&text).unwrap(), meta: meta.clone() }
        })
        .collect()
}

fn budget(label: &str, start: Instant, limit: Duration) -> Result<(), String> {
    let elapsed = start.elapsed();
    if elapsed > limit {
        return Err(format!("{label} took {elapsed:.2?}, budget {limit:?}"));
    }
    Ok(())
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

// ---------------------------------------------------------------- oracles

fn det_i128(mut m: Vec<Vec<i128>>) -> i128 {
    // Fraction-free elimination.
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    if n == 0 {
        1
    } else {
        sign * m[n - 1][n - 1]
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn go(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            go(i + 1, n, k, current, out);
            current.pop();
        }
    }
    go(0, n, k, &mut current, &mut out);
    out
}

/// Invariant factors from determinantal divisors: `d_k = D_k / D_{k-1}` with
/// `D_k` the gcd of all `k × k` minors.
fn invariant_factors_by_minors(a: &[Vec<i64>], cols: usize) -> Vec<i128> {
    let rows = a.len();
    let mut divisors = vec![1i128];
    for k in 1..=rows.min(cols) {
        let mut g = 0i128;
        'outer: for rs in combinations(rows, k) {
            for cs in combinations(cols, k) {
                let minor = rs.iter().map(|&i| cs.iter().map(|&j| a[i][j] as i128).collect()).collect();
                g = g.gcd(&det_i128(minor));
                if g == 1 {
                    break 'outer;
                }
            }
        }
        if g == 0 {
            break;
        }
        divisors.push(g);
    }
    divisors.windows(2).map(|w| w[1] / w[0]).collect()
}

/// Per-tetrahedron vertex order of an acyclic orientation, sources first.
fn vertex_order(tri: &Triangulation, o: &EdgeOrientation, tet: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by_key(|&v| (0..4).filter(|&w| w != v && o.points(tri, tet, w, v)).count());
    order
}

/// Cyclic-face test on every (tet, face) from raw transported directions.
fn brute_acyclic(tri: &Triangulation, o: &EdgeOrientation) -> bool {
    (0..tri.tet_count()).all(|t| {
        (0..4).all(|f| {
            let v: Vec<usize> = (0..4).filter(|&x| x != f).collect();
            let a = o.points(tri, t, v[0], v[1]);
            !(a == o.points(tri, t, v[1], v[2]) && a == o.points(tri, t, v[2], v[0]))
        })
    })
}

fn sign_vector(bits: u64, e: usize) -> EdgeOrientation {
    EdgeOrientation::new((0..e).map(|i| if bits >> (e - 1 - i) & 1 == 0 { Sign::Plus } else { Sign::Minus }).collect())
}

fn ideal_structures(tri: &Triangulation) -> Vec<TautStructure> {
    find_taut_structures(tri).unwrap().collect()
}

/// `Σ χ_m(s) · a(s)` recomputed from the raw sector data.
fn raw_weighted_chain(bc: &eulergraph::BranchedComplex, rank: usize) -> Vec<i64> {
    let mut out = vec![0; rank];
    for s in bc.sectors() {
        let w = s.euler_char - s.corner_count as i64 / 2;
        for &(cell, c) in s.chain.as_ref().unwrap() {
            out[cell] += w * c;
        }
    }
    out
}

// ---------------------------------------------------------------- criteria

fn snf_soundness() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(1);
    let matrices: Vec<(Vec<Vec<i64>>, usize)> = (0..500)
        .map(|_| {
            let (r, c) = (rng.gen_range(0..=8), rng.gen_range(0..=8));
            ((0..r).map(|_| (0..c).map(|_| rng.gen_range(-9..=9)).collect()).collect(), c)
        })
        .collect();
    let start = Instant::now();
    let mut decompositions = Vec::new();
    for (rows, cols) in &matrices {
        let a = IntMatrix::from_i64_rows(rows, *cols);
        let d = smith_normal_form(&a);
        ensure!(d.u.mul(&a).mul(&d.v) == d.s, "U·A·V != S for {rows:?}");
        ensure!(d.u.is_unimodular() && d.v.is_unimodular(), "non-unimodular transform for {rows:?}");
        let diag = d.diagonal();
        let r = d.rank();
        ensure!(
            (0..d.s.rows()).all(|i| (0..d.s.cols()).all(|j| i == j || d.s.get(i, j).is_zero())),
            "S not diagonal"
        );
        ensure!(diag[..r].iter().all(|x| x.is_positive()) && diag[r..].iter().all(Zero::is_zero), "bad diagonal");
        ensure!(diag[..r].windows(2).all(|w| (&w[1] % &w[0]).is_zero()), "divisibility chain broken: {diag:?}");
        decompositions.push(d);
    }
    budget("SNF of 500 matrices", start, Duration::from_secs(5))?;
    let snf_time = start.elapsed();
    for ((rows, cols), d) in matrices.iter().zip(&decompositions) {
        let oracle: Vec<BigInt> = invariant_factors_by_minors(rows, *cols).into_iter().map(BigInt::from).collect();
        ensure!(d.invariant_factors() == oracle, "invariant factors {:?} vs minors {:?}", d.invariant_factors(), oracle);
    }
    Ok(format!("500 matrices in {snf_time:.2?}; invariant factors agree with determinantal divisors"))
}

fn homology_oracle() -> Result<String, String> {
    let fx = fixtures();
    let start = Instant::now();
    for f in &fx {
        let group = f.tri.dual_chain_complex().homology(1).unwrap().group();
        let rank = f.meta["h1_rank"].as_u64().unwrap() as usize;
        let torsion: Vec<BigInt> =
            f.meta["h1_torsion"].as_array().unwrap().iter().map(|v| BigInt::from(v.as_i64().unwrap())).collect();
        ensure!(group.rank == rank && group.torsion == torsion, "{}: H1 = {group}, oracle rank {rank} torsion {torsion:?}", f.name);
        ensure!(f.tri.edges().len() as u64 == f.meta["edges"].as_u64().unwrap(), "{}: edge count", f.name);
        ensure!(f.tri.vertices().len() as u64 == f.meta["vertices"].as_u64().unwrap(), "{}: vertex count", f.name);
    }
    budget("homology of all fixtures", start, Duration::from_secs(2))?;
    Ok(format!("{} fixtures in {:.2?}", fx.len(), start.elapsed()))
}

fn maw_cycle_law() -> Result<String, String> {
    let mut checked = 0;
    for f in fixtures().iter().filter(|f| f.tri.kind() == Kind::Ideal) {
        let start = Instant::now();
        let structures = ideal_structures(&f.tri);
        ensure!(
            structures.len() == f.meta["taut_structures"].as_array().unwrap().len(),
            "{}: found {} taut structures",
            f.name,
            structures.len()
        );
        for ts in &structures {
            let bc = flatten(&f.tri, ts, BoundaryCoorientation::Outward, FanSide::Default).unwrap();
            let graph = maw_dual_graph(&bc).unwrap();
            let mut weight_in = vec![0; bc.regions().len()];
            let mut weight_out = vec![0; bc.regions().len()];
            for arc in &graph.arcs {
                weight_out[arc.tail] += arc.weight;
                weight_in[arc.head] += arc.weight;
            }
            ensure!(
                weight_in.iter().chain(&weight_out).all(|&w| w == 1),
                "{} {ts}: in {weight_in:?} out {weight_out:?}",
                f.name
            );
            ensure!(check_cycle(&graph, &bc).passes(), "{} {ts}: check_cycle disagrees", f.name);
            checked += 1;
        }
        budget(&f.name, start, Duration::from_secs(1))?;
    }
    Ok(format!("{checked} flattened complexes, in = out = 1 at every region"))
}

fn lackenby_relation() -> Result<String, String> {
    let text = std::fs::read_to_string(format!("{}/fig8.tri", fixture_dir())).unwrap();
    let tri = Triangulation::parse(&text).unwrap();
    let start = Instant::now();
    let complex = tri.dual_chain_complex();
    let mut structures = Vec::new();
    for a in 0..6u8 {
        for b in 0..6u8 {
            let ts = TautStructure::from_codes(&[a, b]);
            if check_taut(&tri, &ts).unwrap().passes() {
                structures.push(ts);
            }
        }
    }
    ensure!(!structures.is_empty(), "no taut structure on the figure-eight fixture");
    ensure!(structures == ideal_structures(&tri), "search disagrees with exhaustive 36-state scan");
    let f = tri.faces().len();
    for ts in &structures {
        let result = lackenby_classes(&tri, ts, FanSide::Default).unwrap();
        ensure!(result.passes(), "{ts}: {:?}", result.checks);
        let outward = flatten(&tri, ts, BoundaryCoorientation::Outward, FanSide::Default).unwrap();
        let inward = flatten(&tri, ts, BoundaryCoorientation::Inward, FanSide::Default).unwrap();
        let gp = raw_weighted_chain(&outward, f);
        let gm = raw_weighted_chain(&inward, f);
        let (g, beta) = (&result.g, &result.beta);
        ensure!(gp == result.gamma_plus && gm == result.gamma_minus, "{ts}: Γ chains disagree with raw recount");
        ensure!((0..f).all(|i| gp[i] == g[i] + beta[i]), "{ts}: Γ₊ != G + β");
        ensure!((0..f).all(|i| gm[i] == -2 * g[i] - beta[i]), "{ts}: Γ₋ != -2G - β");
        ensure!((0..f).all(|i| gp[i] - gm[i] == 3 * g[i] + 2 * beta[i]), "{ts}: Γ₊ - Γ₋ != 3G + 2β");
        let diff: Vec<i64> = (0..f).map(|i| gp[i] - gm[i]).collect();
        ensure!(is_boundary(&complex, &to_big(&diff), 1).unwrap().is_some(), "{ts}: Γ₊ - Γ₋ does not bound");
        let relation = cycle_class(&complex, &to_big(&gp), 1)
            .unwrap()
            .scale(&BigInt::from(2))
            .add(&cycle_class(&complex, &to_big(g), 1).unwrap())
            .unwrap();
        ensure!(relation.is_zero(), "{ts}: 2[Γ₊] + [G] = {relation:?}");
    }
    budget("figure-eight", start, Duration::from_secs(1))?;
    Ok(format!("{} taut structures on the figure-eight fixture", structures.len()))
}

fn degree_law() -> Result<String, String> {
    let mut checked = 0;
    for f in fixtures().iter().filter(|f| f.tri.kind() == Kind::Ideal) {
        for ts in ideal_structures(&f.tri) {
            let g = eulergraph::taut::dual_graph_g(&f.tri, &ts).unwrap();
            let mut degrees = vec![(0, 0); f.tri.tet_count()];
            for face in f.tri.faces() {
                let [x, y] = face.embeddings;
                let (from, to) = if g[face.index] > 0 { (x.tet, y.tet) } else { (y.tet, x.tet) };
                degrees[from].1 += 1;
                degrees[to].0 += 1;
            }
            ensure!(degrees.iter().all(|&d| d == (2, 2)), "{} {ts}: degrees {degrees:?}", f.name);
            checked += 1;
        }
    }
    Ok(format!("{checked} dual graphs, two in and two out at every vertex"))
}

fn dunfield_route() -> Result<String, String> {
    let mut orientations = 0;
    let mut rejected = 0;
    for f in fixtures().iter().filter(|f| f.tri.kind() == Kind::Closed) {
        let start = Instant::now();
        let tri = &f.tri;
        let one_vertex = tri.vertices().len() == 1;
        let complex = tri.dual_chain_complex();
        for o in enumerate_acyclic_orientations(tri, Some(10_000)).unwrap() {
            orientations += 1;
            let mut mixed = vec![0u64; tri.edges().len()];
            for t in 0..tri.tet_count() {
                let order = vertex_order(tri, &o, t);
                for (i, j) in [(0, 2), (1, 3)] {
                    mixed[tri.edge_direction(t, order[i], order[j]).0] += 1;
                }
            }
            ensure!(mixed.iter().all(|m| m % 2 == 0), "{} {o}: odd mixed count {mixed:?}", f.name);
            let phi: Vec<i64> = mixed.iter().map(|&m| 1 - (m / 2) as i64).collect();
            let sector_weights: Vec<i64> =
                mixed.iter().map(|&m| maw_euler_characteristic(&Sector::new(1, m, 0, 0)).unwrap()).collect();
            ensure!(sector_weights == phi, "{} {o}: φ != χ_m", f.name);
            let delta = complex.apply_coboundary(2, &to_big(&phi)).unwrap();
            match euler_cochain(tri, &o) {
                Ok(c) => {
                    ensure!(c.mixed == mixed && c.values == phi, "{} {o}: cochain disagrees with recount", f.name);
                    ensure!(delta.iter().all(Zero::is_zero), "{} {o}: accepted a non-cocycle", f.name);
                }
                Err(OrientationError::NotACocycle { coboundary }) => {
                    ensure!(!one_vertex, "{} {o}: cocycle check failed on a one-vertex triangulation", f.name);
                    ensure!(coboundary == delta && delta.iter().any(|x| !x.is_zero()), "{} {o}: bad rejection", f.name);
                    rejected += 1;
                }
                Err(e) => return Err(format!("{} {o}: {e}", f.name)),
            }
        }
        budget(&f.name, start, Duration::from_secs(30))?;
    }
    Ok(format!(
        "{orientations} acyclic orientations; cocycle holds on all one-vertex fixtures, {rejected} multi-vertex orientations reported as non-cocycles"
    ))
}

fn enumeration_completeness() -> Result<String, String> {
    let start = Instant::now();
    let mut fixtures_checked = 0;
    for f in fixtures().iter().filter(|f| f.tri.edges().len() <= 12) {
        let e = f.tri.edges().len();
        let brute = (0..1u64 << e).filter(|&bits| brute_acyclic(&f.tri, &sign_vector(bits, e))).count();
        let fast = enumerate_acyclic_orientations(&f.tri, None).unwrap().count();
        let oracle = f.meta["acyclic_orientations"].as_u64().unwrap() as usize;
        ensure!(fast == brute && brute == oracle, "{}: backtracking {fast}, 2^E scan {brute}, manifest {oracle}", f.name);
        fixtures_checked += 1;
    }
    budget("enumeration", start, Duration::from_secs(60))?;
    Ok(format!("{fixtures_checked} fixtures in {:.2?}", start.elapsed()))
}

fn random_class(rng: &mut StdRng) -> HomologyClass {
    HomologyClass {
        degree: 1,
        free: (0..2).map(|_| BigInt::from(rng.gen_range(-50..=50))).collect(),
        torsion: [2, 4, 5]
            .iter()
            .map(|&m| TorsionCoordinate { modulus: BigInt::from(m), residue: BigInt::from(rng.gen_range(0..m)) })
            .collect(),
        basis: Some("acceptance".into()),
    }
}

fn swap_formula() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(8);
    for _ in 0..100 {
        let x = random_class(&mut rng);
        let y = random_class(&mut rng);
        ensure!(swap_difference_class(2, &x).unwrap().is_zero(), "k = 2 gives nonzero for {x:?}");
        for k in [2i64, 4, 6, 8] {
            let value = swap_difference_class(k, &x).unwrap();
            let factor = 2 - k;
            let free: Vec<BigInt> = x.free.iter().map(|a| a * factor).collect();
            let residues: Vec<BigInt> =
                x.torsion.iter().map(|t| (&t.residue * factor).mod_floor(&t.modulus)).collect();
            ensure!(value.free == free, "k = {k}: free part {:?} vs {free:?}", value.free);
            ensure!(value.torsion.iter().map(|t| t.residue.clone()).collect::<Vec<_>>() == residues, "k = {k}: torsion");
            let sum = swap_difference_class(k, &x.add(&y).unwrap()).unwrap();
            let parts = value.add(&swap_difference_class(k, &y).unwrap()).unwrap();
            ensure!(sum == parts, "k = {k}: not linear");
        }
    }
    for k in [-2, 0, 1, 3, 5] {
        ensure!(swap_difference_class(k, &HomologyClass::free_only(1, vec![])).is_err(), "k = {k} accepted");
    }
    Ok("100 random classes with torsion, k in {2, 4, 6, 8}".into())
}

fn fan_side_independence() -> Result<String, String> {
    let mut compared = 0;
    for f in fixtures().iter().filter(|f| f.tri.kind() == Kind::Ideal) {
        for ts in ideal_structures(&f.tri) {
            let a = lackenby_classes(&f.tri, &ts, FanSide::Default).unwrap();
            let b = lackenby_classes(&f.tri, &ts, FanSide::Alternate).unwrap();
            ensure!(a.passes() && b.passes(), "{} {ts}: relations fail on one side", f.name);
            ensure!(
                a.g_class == b.g_class
                    && a.beta_class == b.beta_class
                    && a.gamma_plus_class == b.gamma_plus_class
                    && a.gamma_minus_class == b.gamma_minus_class,
                "{} {ts}: classes depend on the fan side",
                f.name
            );
            if a.beta != b.beta {
                compared += 1;
            }
        }
    }
    ensure!(compared > 0, "alternate side never changed a chain");
    Ok(format!("classes unchanged; {compared} structures with different β chains"))
}

fn mutation_sensitivity() -> Result<String, String> {
    let mut mutants = 0;
    for f in fixtures().iter().filter(|f| f.tri.kind() == Kind::Ideal) {
        for ts in ideal_structures(&f.tri) {
            let outward = flatten(&f.tri, &ts, BoundaryCoorientation::Outward, FanSide::Default).unwrap();
            let inward = flatten(&f.tri, &ts, BoundaryCoorientation::Inward, FanSide::Default).unwrap();
            for sector in 0..outward.sectors().len() {
                for (which, base) in [("outward", &outward), ("inward", &inward)] {
                    let dc = base.sectors()[sector].corner_count;
                    for corrupted in [dc + 2, dc + 6, dc.saturating_sub(2)] {
                        if corrupted == dc {
                            continue;
                        }
                        let mut mutant = base.clone();
                        mutant.sector_mut(sector).unwrap().corner_count = corrupted;
                        let (o, i) = if which == "outward" { (&mutant, &inward) } else { (&outward, &mutant) };
                        let result = verify_lackenby(&f.tri, &ts, o, i, FanSide::Default).unwrap();
                        let caught = ["cycle_outward", "cycle_inward", "gamma_plus_identity", "gamma_minus_identity"]
                            .iter()
                            .any(|name| !result.check(name).unwrap().passed);
                        ensure!(caught, "{} {ts}: {which} sector {sector} dc {dc} -> {corrupted} slipped through", f.name);
                        mutants += 1;
                    }
                }
            }
        }
    }
    // The literal mutation: one rectangle of χ_m = -2.
    let text = std::fs::read_to_string(format!("{}/fig8.tri", fixture_dir())).unwrap();
    let tri = Triangulation::parse(&text).unwrap();
    let ts = TautStructure::parse("taut 01 23").unwrap();
    let mut outward = flatten(&tri, &ts, BoundaryCoorientation::Outward, FanSide::Default).unwrap();
    let inward = flatten(&tri, &ts, BoundaryCoorientation::Inward, FanSide::Default).unwrap();
    outward.sector_mut(tri.faces().len()).unwrap().corner_count = 6;
    let result = verify_lackenby(&tri, &ts, &outward, &inward, FanSide::Default).unwrap();
    ensure!(
        !result.check("cycle_outward").unwrap().passed && !result.check("gamma_plus_identity").unwrap().passed,
        "rectangle weight -2 not caught by both checks"
    );
    Ok(format!("{mutants} single-sector corruptions all caught"))
}

type Criterion = (&'static str, fn() -> Result<String, String>);

fn main() {
    let criteria: [Criterion; 10] = [
        ("SNF soundness", snf_soundness),
        ("homology oracle equivalence", homology_oracle),
        ("maw cycle law", maw_cycle_law),
        ("Lackenby relation", lackenby_relation),
        ("dual graph degree law", degree_law),
        ("Dunfield route", dunfield_route),
        ("enumeration completeness", enumeration_completeness),
        ("swap formula", swap_formula),
        ("fan-side independence", fan_side_independence),
        ("mutation sensitivity", mutation_sensitivity),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({elapsed:.2?}): {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} FAIL {name} ({elapsed:.2?}): {why}", i + 1);
            }
        }
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
