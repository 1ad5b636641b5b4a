//! Taut ideal triangulations: face coorientations with two faces up and two
//! down in every tetrahedron and angle sum 2π around every edge. From a taut
//! structure the module builds the dual graph `G`, flattens the dual 2-skeleton
//! into a branched complex with one rectangle per edge, and checks the chain
//! relations between `G`, `β` and the two maw graphs.

use crate::branched::{
    check_cycle, maw_dual_graph, BoundaryCoorientation, BranchedComplex, BranchedError, Region, Sector,
};
use crate::homology::{to_big, HomologyClass, HomologyError};
use crate::search::{Backtrack, Constraints};
use crate::triangulation::{FaceEmbedding, Kind, Triangulation};
use num_bigint::BigInt;
use serde::Serialize;
use std::fmt;
use thiserror::Error;

/// Unordered face pairs in code order.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

const fn pair_code(a: usize, b: usize) -> u8 {
    match (a, b) {
        (0, 1) | (1, 0) => 0,
        (0, 2) | (2, 0) => 1,
        (0, 3) | (3, 0) => 2,
        (1, 2) | (2, 1) => 3,
        (1, 3) | (3, 1) => 4,
        _ => 5,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TautError {
    #[error("taut literal, column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("taut structures live on ideal triangulations; this one is closed")]
    NotIdeal,
    #[error("taut structure lists {found} tetrahedra but the triangulation has {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("not a taut structure: {}", .violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    NotTaut { violations: Vec<TautViolation> },
    #[error("edge class {edge} does not have one π-corner below and one above")]
    PiCorners { edge: usize },
    #[error(transparent)]
    Branched(#[from] BranchedError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

/// Up faces of each tetrahedron. Any face set is representable so that
/// malformed structures can be diagnosed rather than rejected at parse time.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TautStructure {
    up: Vec<[bool; 4]>,
}

impl TautStructure {
    pub fn from_codes(codes: &[u8]) -> Self {
        let up = codes
            .iter()
            .map(|&c| {
                let (a, b) = PAIRS[c as usize];
                let mut set = [false; 4];
                set[a] = true;
                set[b] = true;
                set
            })
            .collect();
        TautStructure { up }
    }

    pub fn from_face_sets(up: Vec<[bool; 4]>) -> Self {
        TautStructure { up }
    }

    /// Parses `taut 01 23 ...` (the keyword is optional): one token of
    /// distinct digits `0..=3` per tetrahedron naming its up faces.
    pub fn parse(text: &str) -> Result<Self, TautError> {
        let mut up = Vec::new();
        let mut tokens = tokens(text).peekable();
        if let Some((_, "taut")) = tokens.peek() {
            tokens.next();
        }
        for (column, token) in tokens {
            let mut set = [false; 4];
            for (i, c) in token.chars().enumerate() {
                let face = match c.to_digit(10) {
                    Some(d) if d < 4 => d as usize,
                    _ => {
                        return Err(TautError::Syntax {
                            column: column + i,
                            message: format!("expected a face index 0-3, found {c:?}"),
                        })
                    }
                };
                if set[face] {
                    return Err(TautError::Syntax { column: column + i, message: format!("face {face} repeated") });
                }
                set[face] = true;
            }
            up.push(set);
        }
        Ok(TautStructure { up })
    }

    pub fn tet_count(&self) -> usize {
        self.up.len()
    }

    pub fn is_up(&self, tet: usize, face: usize) -> bool {
        self.up[tet][face]
    }

    pub fn up_faces(&self, tet: usize) -> Vec<usize> {
        (0..4).filter(|&f| self.up[tet][f]).collect()
    }

    /// Per-tetrahedron pair codes, when every tetrahedron has two up faces.
    pub fn codes(&self) -> Option<Vec<u8>> {
        (0..self.up.len())
            .map(|t| match self.up_faces(t)[..] {
                [a, b] => Some(pair_code(a, b)),
                _ => None,
            })
            .collect()
    }

    /// The edge `{a, b}` of `tet` carries angle π when it is shared by the
    /// two up faces or by the two down faces.
    pub fn angle_is_pi(&self, tet: usize, a: usize, b: usize) -> bool {
        let set = self.up[tet];
        let opposite = (0..4).filter(|&v| v != a && v != b);
        let mut opposite = opposite.map(|v| set[v]);
        let (x, y) = (opposite.next(), opposite.next());
        x == y && set.iter().filter(|&&u| u).count() == 2
    }

    /// Whether `tet` sits below the edge `{a, b}` (the edge is shared by its
    /// up faces).
    fn is_below(&self, tet: usize, a: usize, b: usize) -> bool {
        let set = self.up[tet];
        (0..4).filter(|&v| v != a && v != b).all(|v| set[v])
    }
}

fn tokens(text: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, (byte, c)) in text.char_indices().enumerate() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some((i, byte)),
            (true, Some((col, b))) => {
                out.push((col + 1, &text[b..byte]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((col, b)) = start {
        out.push((col + 1, &text[b..]));
    }
    out.into_iter()
}

impl fmt::Display for TautStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "taut")?;
        for t in 0..self.up.len() {
            write!(f, " ")?;
            for v in self.up_faces(t) {
                write!(f, "{v}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for TautStructure {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TautViolation {
    /// A tetrahedron without exactly two up faces.
    UpFaceCount { tet: usize, up: usize },
    /// A face class whose two sides disagree: up in both embeddings or in neither.
    Coorientation { face: usize, up_embeddings: usize },
    /// An edge class with angle sum other than 2π.
    AngleSum { edge: usize, pi_corners: usize },
}

impl fmt::Display for TautViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TautViolation::UpFaceCount { tet, up } => write!(f, "tetrahedron {tet} has {up} up faces"),
            TautViolation::Coorientation { face, up_embeddings } => {
                write!(f, "face {face} is up on {up_embeddings} of its two sides")
            }
            TautViolation::AngleSum { edge, pi_corners } => write!(f, "edge {edge} has angle sum {pi_corners}π"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TautReport {
    pub violations: Vec<TautViolation>,
}

impl TautReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

fn require_ideal(tri: &Triangulation) -> Result<(), TautError> {
    match tri.kind() {
        Kind::Ideal => Ok(()),
        Kind::Closed => Err(TautError::NotIdeal),
    }
}

pub fn check_taut(tri: &Triangulation, ts: &TautStructure) -> Result<TautReport, TautError> {
    require_ideal(tri)?;
    if ts.tet_count() != tri.tet_count() {
        return Err(TautError::LengthMismatch { expected: tri.tet_count(), found: ts.tet_count() });
    }
    let mut violations = Vec::new();
    let mut well_formed = vec![true; ts.tet_count()];
    for (tet, ok) in well_formed.iter_mut().enumerate() {
        let up = ts.up_faces(tet).len();
        if up != 2 {
            violations.push(TautViolation::UpFaceCount { tet, up });
            *ok = false;
        }
    }
    for face in tri.faces() {
        let up_embeddings = face.embeddings.iter().filter(|e| ts.is_up(e.tet, e.face as usize)).count();
        if up_embeddings != 1 {
            violations.push(TautViolation::Coorientation { face: face.index, up_embeddings });
        }
    }
    for edge in tri.edges() {
        if edge.embeddings.iter().any(|e| !well_formed[e.tet]) {
            continue;
        }
        let pi_corners = edge
            .embeddings
            .iter()
            .filter(|e| ts.angle_is_pi(e.tet, e.tail as usize, e.head as usize))
            .count();
        if pi_corners != 2 {
            violations.push(TautViolation::AngleSum { edge: edge.index, pi_corners });
        }
    }
    Ok(TautReport { violations })
}

fn require_taut(tri: &Triangulation, ts: &TautStructure) -> Result<(), TautError> {
    let report = check_taut(tri, ts)?;
    if report.passes() {
        Ok(())
    } else {
        Err(TautError::NotTaut { violations: report.violations })
    }
}

struct TautConstraints {
    /// `(glued tet, glued face)` for every `(tet, face)`.
    gluing: Vec<[(usize, usize); 4]>,
    /// Edge classes meeting each tetrahedron.
    edges_at: Vec<Vec<usize>>,
    /// Embeddings `(tet, pair code of the edge)` of each edge class.
    embeddings: Vec<Vec<(usize, u8)>>,
    last_tet: Vec<usize>,
}

impl TautConstraints {
    fn new(tri: &Triangulation) -> Self {
        let n = tri.tet_count();
        let gluing = (0..n)
            .map(|t| {
                let mut row = [(0, 0); 4];
                for (f, slot) in row.iter_mut().enumerate() {
                    let g = tri.gluing(t, f);
                    *slot = (g.tet, g.perm.apply(f));
                }
                row
            })
            .collect();
        let mut edges_at = vec![Vec::new(); n];
        let mut embeddings = Vec::new();
        let mut last_tet = Vec::new();
        for edge in tri.edges() {
            let list: Vec<(usize, u8)> =
                edge.embeddings.iter().map(|e| (e.tet, pair_code(e.tail as usize, e.head as usize))).collect();
            for &(t, _) in &list {
                if edges_at[t].last() != Some(&edge.index) {
                    edges_at[t].push(edge.index);
                }
            }
            last_tet.push(list.iter().map(|e| e.0).max().unwrap_or(0));
            embeddings.push(list);
        }
        for list in &mut edges_at {
            list.sort_unstable();
            list.dedup();
        }
        TautConstraints { gluing, edges_at, embeddings, last_tet }
    }
}

fn code_has_face(code: u8, face: usize) -> bool {
    let (a, b) = PAIRS[code as usize];
    a == face || b == face
}

impl Constraints for TautConstraints {
    fn len(&self) -> usize {
        self.gluing.len()
    }

    fn choices(&self) -> u8 {
        6
    }

    fn consistent(&self, partial: &[u8]) -> bool {
        let t = partial.len() - 1;
        for (f, &(t2, f2)) in self.gluing[t].iter().enumerate() {
            if t2 <= t && code_has_face(partial[t], f) == code_has_face(partial[t2], f2) {
                return false;
            }
        }
        self.edges_at[t].iter().all(|&e| {
            let pi = self.embeddings[e]
                .iter()
                .filter(|&&(tet, edge_code)| tet <= t && (edge_code == partial[tet] || edge_code == 5 - partial[tet]))
                .count();
            pi <= 2 && (self.last_tet[e] != t || pi == 2)
        })
    }
}

/// Taut structures in lexicographic order of per-tetrahedron pair codes.
pub struct TautStructures {
    search: Backtrack<TautConstraints>,
}

impl Iterator for TautStructures {
    type Item = TautStructure;

    fn next(&mut self) -> Option<TautStructure> {
        self.search.next().map(|codes| TautStructure::from_codes(&codes))
    }
}

pub fn find_taut_structures(tri: &Triangulation) -> Result<TautStructures, TautError> {
    find_with_prefix(tri, &[])
}

/// The part of the search whose first codes are `prefix`.
pub fn find_with_prefix(tri: &Triangulation, prefix: &[u8]) -> Result<TautStructures, TautError> {
    require_ideal(tri)?;
    if let Some(&bad) = prefix.iter().find(|&&c| c >= 6) {
        return Err(TautError::Syntax { column: 0, message: format!("pair code {bad} out of range") });
    }
    Ok(TautStructures { search: Backtrack::new(TautConstraints::new(tri), prefix.to_vec()) })
}

/// `G` as a 1-chain on dual edges: each face class contributes ±1 so that
/// its dual edge runs from the tetrahedron where the face is up to the one
/// where it is down.
pub fn dual_graph_g(tri: &Triangulation, ts: &TautStructure) -> Result<Vec<i64>, TautError> {
    require_taut(tri, ts)?;
    Ok(g_chain(tri, ts))
}

fn g_chain(tri: &Triangulation, ts: &TautStructure) -> Vec<i64> {
    tri.faces()
        .iter()
        .map(|f| {
            let c = f.canonical();
            if ts.is_up(c.tet, c.face as usize) {
                1
            } else {
                -1
            }
        })
        .collect()
}

/// `(incoming, outgoing)` at every dual vertex for a ±1 chain on dual edges.
pub fn graph_degrees(tri: &Triangulation, chain: &[i64]) -> Vec<(usize, usize)> {
    let mut degrees = vec![(0, 0); tri.tet_count()];
    for face in tri.faces() {
        let (from, to) = match chain[face.index] {
            1 => (face.canonical().tet, face.partner().tet),
            -1 => (face.partner().tet, face.canonical().tet),
            _ => continue,
        };
        degrees[from].1 += 1;
        degrees[to].0 += 1;
    }
    degrees
}

/// Which side of an edge's link fan carries a rectangle's dual arc.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FanSide {
    /// The side beginning at the lexicographically least face embedding.
    #[default]
    Default,
    Alternate,
}

/// The path of dual edges from the tetrahedron below the edge to the one
/// above it, along one side of the fan.
pub fn fan_path(
    tri: &Triangulation,
    ts: &TautStructure,
    edge: usize,
    side: FanSide,
) -> Result<Vec<(usize, i64)>, TautError> {
    let steps = &tri.edges()[edge].link_cycle;
    let d = steps.len();
    let corner = |below: bool| {
        steps.iter().position(|s| {
            let e = s.embedding;
            let (a, b) = (e.tail as usize, e.head as usize);
            ts.angle_is_pi(e.tet, a, b) && ts.is_below(e.tet, a, b) == below
        })
    };
    let (Some(below), Some(above)) = (corner(true), corner(false)) else {
        return Err(TautError::PiCorners { edge });
    };
    let start = &steps[below];
    let forward_first = FaceEmbedding { tet: start.embedding.tet, face: start.exit_face };
    let backward_first = FaceEmbedding { tet: start.embedding.tet, face: start.entry_face };
    let forward = (forward_first < backward_first) == (side == FanSide::Default);
    let mut crossings = Vec::new();
    if forward {
        let mut i = below;
        while i != above {
            crossings.push((steps[i].embedding.tet, steps[i].exit_face as usize, 1));
            i = (i + 1) % d;
        }
    } else {
        let mut i = below;
        while i != above {
            i = (i + d - 1) % d;
            crossings.push((steps[i].embedding.tet, steps[i].exit_face as usize, -1));
        }
    }
    let mut chain = vec![0i64; tri.faces().len()];
    for (tet, face, dir) in crossings {
        chain[tri.face_class(tet, face)] += dir * tri.crossing_sign(tet, face);
    }
    Ok(sparse(&chain))
}

fn sparse(chain: &[i64]) -> Vec<(usize, i64)> {
    chain.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i, c)).collect()
}

fn dense(entries: &[(usize, i64)], rank: usize) -> Vec<i64> {
    let mut out = vec![0; rank];
    for &(i, c) in entries {
        out[i] += c;
    }
    out
}

/// The flattened branched complex: one hexagon per face class (in index
/// order) followed by one rectangle per edge class, one product ball per
/// tetrahedron.
pub fn flatten(
    tri: &Triangulation,
    ts: &TautStructure,
    coorientation: BoundaryCoorientation,
    side: FanSide,
) -> Result<BranchedComplex, TautError> {
    require_taut(tri, ts)?;
    let (hexagon_dc, rectangle_dc) = match coorientation {
        BoundaryCoorientation::Outward => (0, 4),
        BoundaryCoorientation::Inward => (6, 0),
    };
    let g = g_chain(tri, ts);
    let mut sectors = Vec::with_capacity(tri.faces().len() + tri.edges().len());
    for face in tri.faces() {
        let [x, y] = face.embeddings;
        let (up, down) = if ts.is_up(x.tet, x.face as usize) { (x, y) } else { (y, x) };
        sectors.push(Sector::new(1, hexagon_dc, up.tet, down.tet).with_chain(vec![(face.index, g[face.index])]));
    }
    for edge in tri.edges() {
        let (mut below, mut above) = (None, None);
        for e in &edge.embeddings {
            let (a, b) = (e.tail as usize, e.head as usize);
            if ts.angle_is_pi(e.tet, a, b) {
                if ts.is_below(e.tet, a, b) {
                    below = Some(e.tet);
                } else {
                    above = Some(e.tet);
                }
            }
        }
        let (Some(below), Some(above)) = (below, above) else {
            return Err(TautError::PiCorners { edge: edge.index });
        };
        let mut sector = Sector::new(1, rectangle_dc, below, above).with_chain(fan_path(tri, ts, edge.index, side)?);
        sector.flipped_corner_count = Some(rectangle_dc);
        sectors.push(sector);
    }
    Ok(BranchedComplex::new(coorientation, sectors, vec![Region::PRODUCT_BALL; tri.tet_count()])?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: impl FnOnce() -> String) -> Self {
        Check { name, passed, detail: if passed { None } else { Some(detail()) } }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LackenbyResult {
    pub g: Vec<i64>,
    pub beta: Vec<i64>,
    pub gamma_plus: Vec<i64>,
    pub gamma_minus: Vec<i64>,
    /// Classes in `H₁` of the dual complex; absent for a chain that is not a cycle.
    pub g_class: Option<HomologyClass>,
    pub beta_class: Option<HomologyClass>,
    pub gamma_plus_class: Option<HomologyClass>,
    pub gamma_minus_class: Option<HomologyClass>,
    pub checks: Vec<Check>,
}

impl LackenbyResult {
    pub fn passes(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Flattens with both boundary coorientations and verifies the relations.
pub fn lackenby_classes(tri: &Triangulation, ts: &TautStructure, side: FanSide) -> Result<LackenbyResult, TautError> {
    let outward = flatten(tri, ts, BoundaryCoorientation::Outward, side)?;
    let inward = flatten(tri, ts, BoundaryCoorientation::Inward, side)?;
    verify_lackenby(tri, ts, &outward, &inward, side)
}

/// Compares `Γ₊`, `Γ₋` read off two supplied flattenings against `G` and `β`
/// computed directly from the taut structure:
///
/// * both maw graphs satisfy the cycle law;
/// * `∂G = ∂β = ∂Γ₊ = ∂Γ₋ = 0`;
/// * `Γ₊ = G + β` and `Γ₋ = -2G - β` as chains;
/// * `Γ₊ - Γ₋` bounds;
/// * `2[Γ₊] + [G] = 0` in `H₁`.
pub fn verify_lackenby(
    tri: &Triangulation,
    ts: &TautStructure,
    outward: &BranchedComplex,
    inward: &BranchedComplex,
    side: FanSide,
) -> Result<LackenbyResult, TautError> {
    let g = dual_graph_g(tri, ts)?;
    let f = tri.faces().len();
    let mut beta = vec![0i64; f];
    for edge in 0..tri.edges().len() {
        for (i, c) in dense(&fan_path(tri, ts, edge, side)?, f).into_iter().enumerate() {
            beta[i] -= c;
        }
    }
    let graph_plus = maw_dual_graph(outward)?;
    let graph_minus = maw_dual_graph(inward)?;
    let gamma_plus = graph_plus.weighted_chain(outward, f)?;
    let gamma_minus = graph_minus.weighted_chain(inward, f)?;

    let complex = tri.dual_chain_complex();
    let h1 = complex.homology(1)?;
    let class =
        |chain: &[i64]| -> Result<Option<HomologyClass>, TautError> {
            match h1.class_of(&to_big(chain)) {
                Ok(c) => Ok(Some(c)),
                Err(HomologyError::NotACycle { .. }) => Ok(None),
                Err(e) => Err(e.into()),
            }
        };
    let g_class = class(&g)?;
    let beta_class = class(&beta)?;
    let gamma_plus_class = class(&gamma_plus)?;
    let gamma_minus_class = class(&gamma_minus)?;

    let mut checks = Vec::new();
    for (name, bc, graph) in [("cycle_outward", outward, &graph_plus), ("cycle_inward", inward, &graph_minus)] {
        let report = check_cycle(graph, bc);
        checks.push(Check::new(name, report.passes(), || format!("{:?}", report.violations)));
    }
    let open: Vec<&str> = [("G", &g_class), ("beta", &beta_class), ("gamma_plus", &gamma_plus_class), ("gamma_minus", &gamma_minus_class)]
        .iter()
        .filter(|(_, c)| c.is_none())
        .map(|(n, _)| *n)
        .collect();
    checks.push(Check::new("closed_chains", open.is_empty(), || format!("nonzero boundary: {}", open.join(", "))));
    let plus_expected: Vec<i64> = g.iter().zip(&beta).map(|(a, b)| a + b).collect();
    checks.push(Check::new("gamma_plus_identity", gamma_plus == plus_expected, || {
        format!("Γ₊ = {gamma_plus:?}, G + β = {plus_expected:?}")
    }));
    let minus_expected: Vec<i64> = g.iter().zip(&beta).map(|(a, b)| -2 * a - b).collect();
    checks.push(Check::new("gamma_minus_identity", gamma_minus == minus_expected, || {
        format!("Γ₋ = {gamma_minus:?}, -2G - β = {minus_expected:?}")
    }));
    let difference: Vec<i64> = gamma_plus.iter().zip(&gamma_minus).map(|(a, b)| a - b).collect();
    let bounds = match h1.solve(&to_big(&difference)) {
        Ok(w) => w.is_some(),
        Err(HomologyError::NotACycle { .. }) => false,
        Err(e) => return Err(e.into()),
    };
    checks.push(Check::new("difference_bounds", bounds, || format!("Γ₊ - Γ₋ = {difference:?} does not bound")));
    let relation = match (&gamma_plus_class, &g_class) {
        (Some(p), Some(gc)) => Some(p.scale(&BigInt::from(2)).add(gc)?),
        _ => None,
    };
    checks.push(Check::new("euler_relation", relation.as_ref().is_some_and(HomologyClass::is_zero), || match &relation {
        Some(r) => format!("2[Γ₊] + [G] = {:?}", r),
        None => "classes undefined".into(),
    }));
    Ok(LackenbyResult { g, beta, gamma_plus, gamma_minus, g_class, beta_class, gamma_plus_class, gamma_minus_class, checks })
}
