//! Edge orientations of closed triangulations and the `1 - mixed/2` Euler
//! cochain on dual 2-cells.

use crate::branched::{maw_euler_characteristic, Sector};
use crate::homology::{to_big, HomologyClass, HomologyError};
use crate::search::{Backtrack, Constraints};
use crate::triangulation::{complement, EdgeEmbedding, FaceEmbedding, Kind, Triangulation};
use num_bigint::BigInt;
use serde::{Serialize, Serializer};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrientationError {
    #[error("edge class {edge} reverses under transport around its link and cannot be oriented")]
    NonOrientableEdge { edge: usize },
    #[error("orientation literal, column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("orientation has {found} signs but the triangulation has {expected} edge classes")]
    LengthMismatch { expected: usize, found: usize },
    #[error("face {face} of tetrahedron {tet} has a directed cycle as boundary")]
    CyclicFace { tet: usize, face: usize },
    #[error("edge class {edge} has odd mixed count {mixed}: non-integral cochain")]
    NonIntegral { edge: usize, mixed: u64 },
    #[error("the cochain is not a cocycle: coboundary [{}]", .coboundary.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))]
    NotACocycle { coboundary: Vec<BigInt> },
    #[error("the Euler cochain needs a closed triangulation")]
    NotClosed,
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    fn from_index(i: u8) -> Sign {
        if i == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    fn index(self) -> u8 {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }
}

/// One sign per edge class: `+` keeps the canonical direction, `-` reverses it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeOrientation(Vec<Sign>);

impl EdgeOrientation {
    pub fn new(signs: Vec<Sign>) -> Self {
        EdgeOrientation(signs)
    }

    /// Parses `orient <signs>` (the keyword is optional). `-` and `−` both
    /// mean minus.
    pub fn parse(text: &str) -> Result<Self, OrientationError> {
        let trimmed = text.trim_start();
        let offset = text.chars().count() - trimmed.chars().count();
        let (body, offset) = match trimmed.strip_prefix("orient") {
            Some(rest) => {
                let body = rest.trim_start();
                if body.len() == rest.len() && !rest.is_empty() {
                    return Err(OrientationError::Syntax {
                        column: offset + 7,
                        message: "expected whitespace after `orient`".into(),
                    });
                }
                (body, offset + 6 + rest.chars().count() - body.chars().count())
            }
            None => (trimmed, offset),
        };
        let mut signs = Vec::new();
        for (i, c) in body.trim_end().chars().enumerate() {
            signs.push(match c {
                '+' => Sign::Plus,
                '-' | '−' => Sign::Minus,
                other => {
                    return Err(OrientationError::Syntax {
                        column: offset + i + 1,
                        message: format!("expected '+' or '-', found {other:?}"),
                    })
                }
            });
        }
        Ok(EdgeOrientation(signs))
    }

    pub fn signs(&self) -> &[Sign] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> EdgeOrientation {
        EdgeOrientation(self.0.iter().map(|s| s.flipped()).collect())
    }

    /// The sign string without the keyword, e.g. `+-+`.
    pub fn sign_string(&self) -> String {
        self.0.iter().map(|s| if *s == Sign::Plus { '+' } else { '-' }).collect()
    }

    /// Whether the edge `a → b` of `tet` is oriented from `a` to `b`.
    pub fn points(&self, tri: &Triangulation, tet: usize, a: usize, b: usize) -> bool {
        let (class, s) = tri.edge_direction(tet, a, b);
        s * self.0[class].value() > 0
    }

    fn check_fits(&self, tri: &Triangulation) -> Result<(), OrientationError> {
        require_orientable(tri)?;
        if self.0.len() != tri.edges().len() {
            return Err(OrientationError::LengthMismatch { expected: tri.edges().len(), found: self.0.len() });
        }
        Ok(())
    }
}

impl fmt::Display for EdgeOrientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "orient {}", self.sign_string())
    }
}

impl Serialize for EdgeOrientation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.sign_string())
    }
}

fn require_orientable(tri: &Triangulation) -> Result<(), OrientationError> {
    match tri.edges().iter().find(|e| !e.orientable) {
        Some(e) => Err(OrientationError::NonOrientableEdge { edge: e.index }),
        None => Ok(()),
    }
}

fn face_vertices(face: usize) -> [usize; 3] {
    let mut out = [0; 3];
    for (slot, v) in out.iter_mut().zip((0..4).filter(|&v| v != face)) {
        *slot = v;
    }
    out
}

fn face_is_cyclic(tri: &Triangulation, orientation: &EdgeOrientation, tet: usize, face: usize) -> bool {
    let [x, y, z] = face_vertices(face);
    let a = orientation.points(tri, tet, x, y);
    a == orientation.points(tri, tet, y, z) && a == orientation.points(tri, tet, z, x)
}

pub fn is_acyclic(tri: &Triangulation, orientation: &EdgeOrientation) -> Result<bool, OrientationError> {
    orientation.check_fits(tri)?;
    Ok(first_cyclic_face(tri, orientation).is_none())
}

fn first_cyclic_face(tri: &Triangulation, orientation: &EdgeOrientation) -> Option<FaceEmbedding> {
    tri.faces()
        .iter()
        .map(|f| f.canonical())
        .find(|f| face_is_cyclic(tri, orientation, f.tet, f.face as usize))
}

/// Per-face data for the search: the three directed edges `x→y, y→z, z→x`
/// as `(class, transport sign)`, keyed by the largest class involved.
struct FaceConstraints {
    edges: usize,
    by_last: Vec<Vec<[(usize, i8); 3]>>,
}

impl FaceConstraints {
    fn new(tri: &Triangulation) -> Self {
        let edges = tri.edges().len();
        let mut by_last = vec![Vec::new(); edges];
        for face in tri.faces() {
            let FaceEmbedding { tet, face } = face.canonical();
            let [x, y, z] = face_vertices(face as usize);
            let cycle = [tri.edge_direction(tet, x, y), tri.edge_direction(tet, y, z), tri.edge_direction(tet, z, x)];
            let last = cycle.iter().map(|c| c.0).max().expect("three edges");
            by_last[last].push(cycle);
        }
        FaceConstraints { edges, by_last }
    }
}

impl Constraints for FaceConstraints {
    fn len(&self) -> usize {
        self.edges
    }

    fn choices(&self) -> u8 {
        2
    }

    fn consistent(&self, partial: &[u8]) -> bool {
        let sign = |(class, s): (usize, i8)| s * Sign::from_index(partial[class]).value();
        self.by_last[partial.len() - 1].iter().all(|cycle| {
            let a = sign(cycle[0]);
            !(a == sign(cycle[1]) && a == sign(cycle[2]))
        })
    }
}

/// Lazily enumerated acyclic orientations in lexicographic order of sign
/// vectors, `+` before `-`.
pub struct AcyclicOrientations {
    search: Backtrack<FaceConstraints>,
    remaining: Option<usize>,
}

impl Iterator for AcyclicOrientations {
    type Item = EdgeOrientation;

    fn next(&mut self) -> Option<EdgeOrientation> {
        if let Some(r) = self.remaining.as_mut() {
            if *r == 0 {
                return None;
            }
            *r -= 1;
        }
        self.search.next().map(|v| EdgeOrientation(v.into_iter().map(Sign::from_index).collect()))
    }
}

impl AcyclicOrientations {
    pub fn edge_count(&self) -> usize {
        self.search.constraints().edges
    }
}

pub fn enumerate_acyclic_orientations(
    tri: &Triangulation,
    limit: Option<usize>,
) -> Result<AcyclicOrientations, OrientationError> {
    enumerate_with_prefix(tri, &[], limit)
}

/// The part of the enumeration whose sign vectors start with `prefix`.
/// Streams for the different prefixes of one length partition the full one.
pub fn enumerate_with_prefix(
    tri: &Triangulation,
    prefix: &[Sign],
    limit: Option<usize>,
) -> Result<AcyclicOrientations, OrientationError> {
    require_orientable(tri)?;
    let prefix = prefix.iter().map(|s| s.index()).collect();
    Ok(AcyclicOrientations { search: Backtrack::new(FaceConstraints::new(tri), prefix), remaining: limit })
}

/// The edge of an acyclic face running from its source to its sink.
pub fn long_edge(
    tri: &Triangulation,
    orientation: &EdgeOrientation,
    face: FaceEmbedding,
) -> Result<EdgeEmbedding, OrientationError> {
    orientation.check_fits(tri)?;
    long_edge_unchecked(tri, orientation, face.tet, face.face as usize)
}

fn long_edge_unchecked(
    tri: &Triangulation,
    orientation: &EdgeOrientation,
    tet: usize,
    face: usize,
) -> Result<EdgeEmbedding, OrientationError> {
    let vs = face_vertices(face);
    let out_degree = |v: usize| vs.iter().filter(|&&w| w != v && orientation.points(tri, tet, v, w)).count();
    let source = vs.iter().copied().find(|&v| out_degree(v) == 2);
    let sink = vs.iter().copied().find(|&v| out_degree(v) == 0);
    match (source, sink) {
        (Some(s), Some(t)) => Ok(EdgeEmbedding { tet, tail: s as u8, head: t as u8 }),
        _ => Err(OrientationError::CyclicFace { tet, face }),
    }
}

fn is_long(
    tri: &Triangulation,
    orientation: &EdgeOrientation,
    tet: usize,
    face: usize,
    a: usize,
    b: usize,
) -> Result<bool, OrientationError> {
    let e = long_edge_unchecked(tri, orientation, tet, face)?;
    let (tail, head) = (e.tail as usize, e.head as usize);
    Ok((tail, head) == (a, b) || (tail, head) == (b, a))
}

/// Number of embeddings of `edge_class` that are long in exactly one of the
/// two faces of their tetrahedron containing them.
pub fn mixed_count(
    tri: &Triangulation,
    orientation: &EdgeOrientation,
    edge_class: usize,
) -> Result<u64, OrientationError> {
    orientation.check_fits(tri)?;
    mixed_unchecked(tri, orientation, edge_class)
}

fn mixed_unchecked(
    tri: &Triangulation,
    orientation: &EdgeOrientation,
    edge_class: usize,
) -> Result<u64, OrientationError> {
    let mut mixed = 0;
    for e in &tri.edges()[edge_class].embeddings {
        let (a, b) = (e.tail as usize, e.head as usize);
        let (c, d) = complement(a, b);
        let in_c = is_long(tri, orientation, e.tet, c, a, b)?;
        let in_d = is_long(tri, orientation, e.tet, d, a, b)?;
        if in_c != in_d {
            mixed += 1;
        }
    }
    Ok(mixed)
}

/// `φ(ε) = 1 - mixed(ε)/2` on the dual 2-cell of every edge class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerCochain {
    pub values: Vec<i64>,
    pub mixed: Vec<u64>,
}

impl EulerCochain {
    pub fn is_identically_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// `χ_m` of the sector dual to each edge: `χ = 1`, `dc = mixed(ε)`.
    pub fn dual_sector_weights(&self) -> Vec<i64> {
        self.mixed
            .iter()
            .map(|&m| maw_euler_characteristic(&Sector::new(1, m, 0, 0)).expect("mixed counts are even"))
            .collect()
    }
}

/// Mixed counts and `φ` with integrality and cocycle checks.
pub fn euler_cochain(tri: &Triangulation, orientation: &EdgeOrientation) -> Result<EulerCochain, OrientationError> {
    if tri.kind() != Kind::Closed {
        return Err(OrientationError::NotClosed);
    }
    orientation.check_fits(tri)?;
    if let Some(face) = first_cyclic_face(tri, orientation) {
        return Err(OrientationError::CyclicFace { tet: face.tet, face: face.face as usize });
    }
    let mut values = Vec::with_capacity(tri.edges().len());
    let mut mixed = Vec::with_capacity(tri.edges().len());
    for e in 0..tri.edges().len() {
        let m = mixed_unchecked(tri, orientation, e)?;
        if m % 2 != 0 {
            return Err(OrientationError::NonIntegral { edge: e, mixed: m });
        }
        values.push(1 - (m / 2) as i64);
        mixed.push(m);
    }
    let coboundary = tri.dual_chain_complex().apply_coboundary(2, &to_big(&values))?;
    if coboundary.iter().any(|x| *x != BigInt::from(0)) {
        return Err(OrientationError::NotACocycle { coboundary });
    }
    Ok(EulerCochain { values, mixed })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerClassReport {
    pub orientation: EdgeOrientation,
    pub cochain: EulerCochain,
    pub class: HomologyClass,
    pub is_zero: bool,
    /// A 1-cochain `ψ` on dual edges with `δψ = φ`, when one exists.
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_vec")]
    pub witness: Option<Vec<BigInt>>,
}

mod opt_vec {
    use num_bigint::BigInt;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &Option<Vec<BigInt>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => crate::bigint_serde::vec::serialize(v, s),
            None => s.serialize_none(),
        }
    }
}

/// Class of `φ` in `H²` of the dual complex.
pub fn euler_class(tri: &Triangulation, orientation: &EdgeOrientation) -> Result<EulerClassReport, OrientationError> {
    let cochain = euler_cochain(tri, orientation)?;
    let h2 = tri.dual_chain_complex().cohomology(2)?;
    let phi = to_big(&cochain.values);
    let class = h2.class_of(&phi)?;
    let witness = h2.solve(&phi)?;
    Ok(EulerClassReport { orientation: orientation.clone(), is_zero: witness.is_some(), cochain, class, witness })
}
