//! Triangulations given by tetrahedron face pairings.
//!
//! Face `i` of a tetrahedron is the face opposite vertex `i`. A gluing
//! `(t, f) -> (t', p)` identifies face `f` of `t` with face `p(f)` of `t'`,
//! sending vertex `v` of `t` to vertex `p(v)` of `t'`.

mod parse;

use crate::homology::{ChainComplex, IntMatrix};
use crate::perm::{sign_of, Perm4};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TriangulationError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}: face {face} of tetrahedron {tet} is glued more than once")]
    DuplicateGluing { line: usize, tet: usize, face: usize },
    #[error("face {face} of tetrahedron {tet} is glued to itself")]
    SelfGluedFace { tet: usize, face: usize },
    #[error("face {face} of tetrahedron {tet} is not glued")]
    UngluedFace { tet: usize, face: usize },
    #[error("gluing of face {face} of tetrahedron {tet} is not matched by its inverse")]
    NotInvolution { tet: usize, face: usize },
    #[error("triangulation is not orientable (conflict at face {face} of tetrahedron {tet})")]
    NonOrientable { tet: usize, face: usize },
    #[error("vertex {vertex} has a link of Euler characteristic {euler} (neither sphere nor torus)")]
    BadVertexLink { vertex: usize, euler: i64 },
    #[error("vertex links mix spheres and tori")]
    MixedVertexLinks,
    #[error("an ideal triangulation has no dual 3-cells")]
    NoDualThreeCells,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gluing {
    pub tet: usize,
    pub perm: Perm4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Closed,
    Ideal,
}

/// The six edges of a tetrahedron as vertex pairs, in local index order.
pub const EDGE_VERTICES: [(u8, u8); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

pub fn local_edge_index(a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    match (a, b) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => panic!("not an edge: {a}{b}"),
    }
}

/// The two vertices not in `{a, b}`, ascending.
pub fn complement(a: usize, b: usize) -> (usize, usize) {
    let mut rest = (0..4).filter(|&x| x != a && x != b);
    (rest.next().unwrap(), rest.next().unwrap())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FaceEmbedding {
    pub tet: usize,
    pub face: u8,
}

/// An edge of one tetrahedron, directed from `tail` to `head`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct EdgeEmbedding {
    pub tet: usize,
    pub tail: u8,
    pub head: u8,
}

impl EdgeEmbedding {
    pub fn reversed(self) -> Self {
        EdgeEmbedding { tet: self.tet, tail: self.head, head: self.tail }
    }
}

/// One wedge of the walk around an edge: the embedding inside `embedding.tet`
/// (direction transported from the canonical one) and the faces through
/// which the walk enters and leaves that tetrahedron.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LinkStep {
    pub embedding: EdgeEmbedding,
    pub entry_face: u8,
    pub exit_face: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeClass {
    pub index: usize,
    /// Embeddings in link order, starting at the canonical one (least
    /// `(tet, a, b)` with `a < b`, directed `a → b`).
    pub embeddings: Vec<EdgeEmbedding>,
    pub link_cycle: Vec<LinkStep>,
    /// False when transport around the link reverses the direction.
    pub orientable: bool,
    pub tail_vertex: usize,
    pub head_vertex: usize,
}

impl EdgeClass {
    pub fn degree(&self) -> usize {
        self.embeddings.len()
    }

    pub fn canonical(&self) -> EdgeEmbedding {
        self.embeddings[0]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceClass {
    pub index: usize,
    /// Sorted; the first entry is the canonical embedding.
    pub embeddings: [FaceEmbedding; 2],
}

impl FaceClass {
    pub fn canonical(&self) -> FaceEmbedding {
        self.embeddings[0]
    }

    pub fn partner(&self) -> FaceEmbedding {
        self.embeddings[1]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkType {
    Sphere,
    Torus,
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexLink {
    pub index: usize,
    pub corners: usize,
    pub euler: i64,
    pub link: LinkType,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexClass {
    pub index: usize,
    pub corners: Vec<(usize, u8)>,
    pub link: VertexLink,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Vertex classes and their link Euler characteristics `V - E + F`, computed
/// from corner counts of a complete gluing table.
fn vertex_classes(gluings: &[[Gluing; 4]]) -> (Vec<VertexClass>, Vec<[usize; 4]>) {
    let n = gluings.len();
    let mut corners = UnionFind::new(4 * n);
    // Link vertices are edge ends: (t, v, w) is the end at v of edge vw.
    let link_vertex = |t: usize, v: usize, w: usize| (t * 4 + v) * 4 + w;
    let mut ends = UnionFind::new(16 * n);
    for (t, row) in gluings.iter().enumerate() {
        for (f, g) in row.iter().enumerate() {
            for v in (0..4).filter(|&v| v != f) {
                corners.union(t * 4 + v, g.tet * 4 + g.perm.apply(v));
                for w in (0..4).filter(|&w| w != f && w != v) {
                    ends.union(link_vertex(t, v, w), link_vertex(g.tet, g.perm.apply(v), g.perm.apply(w)));
                }
            }
        }
    }
    let mut index_of_root = BTreeMap::new();
    let mut lookup = vec![[0usize; 4]; n];
    let mut classes: Vec<VertexClass> = Vec::new();
    for (t, slots) in lookup.iter_mut().enumerate() {
        for (v, slot) in slots.iter_mut().enumerate() {
            let root = corners.find(t * 4 + v);
            let idx = *index_of_root.entry(root).or_insert_with(|| {
                classes.push(VertexClass {
                    index: classes.len(),
                    corners: Vec::new(),
                    link: VertexLink { index: classes.len(), corners: 0, euler: 0, link: LinkType::Other },
                });
                classes.len() - 1
            });
            *slot = idx;
            classes[idx].corners.push((t, v as u8));
        }
    }
    for class in &mut classes {
        let faces = class.corners.len() as i64;
        let mut roots: Vec<usize> = class
            .corners
            .iter()
            .flat_map(|&(t, v)| {
                let v = v as usize;
                (0..4).filter(move |&w| w != v).map(move |w| (t, v, w))
            })
            .map(|(t, v, w)| ends.find(link_vertex(t, v, w)))
            .collect();
        roots.sort_unstable();
        roots.dedup();
        let euler = roots.len() as i64 - 3 * faces / 2 + faces;
        class.link = VertexLink {
            index: class.index,
            corners: class.corners.len(),
            euler,
            link: match euler {
                2 => LinkType::Sphere,
                0 => LinkType::Torus,
                _ => LinkType::Other,
            },
        };
    }
    (classes, lookup)
}

/// A validated, connected-or-not, orientable triangulation without boundary
/// faces. All derived structure is computed once at construction.
#[derive(Clone, Debug)]
pub struct Triangulation {
    gluings: Vec<[Gluing; 4]>,
    orientation: Vec<i8>,
    kind: Kind,
    edges: Vec<EdgeClass>,
    faces: Vec<FaceClass>,
    vertices: Vec<VertexClass>,
    /// `(class, sign)` per local edge, sign +1 when low→high matches the
    /// class direction at that embedding.
    edge_lookup: Vec<[(usize, i8); 6]>,
    face_lookup: Vec<[usize; 4]>,
}

impl Triangulation {
    pub fn parse(text: &str) -> Result<Self, TriangulationError> {
        let table = parse::parse_table(text)?;
        let mut full = Vec::with_capacity(table.len());
        for (t, row) in table.iter().enumerate() {
            let mut out = [Gluing { tet: 0, perm: Perm4::IDENTITY }; 4];
            for f in 0..4 {
                out[f] = row[f].ok_or(TriangulationError::UngluedFace { tet: t, face: f })?;
            }
            full.push(out);
        }
        Self::from_gluings(full)
    }

    /// Builds a triangulation from a complete table: `gluings[t][f]` says where
    /// face `f` of tetrahedron `t` goes.
    pub fn from_gluings(gluings: Vec<[Gluing; 4]>) -> Result<Self, TriangulationError> {
        let n = gluings.len();
        for (t, row) in gluings.iter().enumerate() {
            for (f, g) in row.iter().enumerate() {
                let back_face = g.perm.apply(f);
                if g.tet >= n {
                    return Err(TriangulationError::NotInvolution { tet: t, face: f });
                }
                if g.tet == t && back_face == f {
                    return Err(TriangulationError::SelfGluedFace { tet: t, face: f });
                }
                let back = gluings[g.tet][back_face];
                if back.tet != t || back.perm != g.perm.inverse() {
                    return Err(TriangulationError::NotInvolution { tet: t, face: f });
                }
            }
        }
        let orientation = orient(&gluings)?;
        let (vertices, vertex_lookup) = vertex_classes(&gluings);
        let kind = classify(&vertices)?;
        let (faces, face_lookup) = face_classes(&gluings);
        let (edges, edge_lookup) = edge_classes(&gluings, &orientation, &vertex_lookup);
        Ok(Triangulation { gluings, orientation, kind, edges, faces, vertices, edge_lookup, face_lookup })
    }

    pub fn tet_count(&self) -> usize {
        self.gluings.len()
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn gluing(&self, tet: usize, face: usize) -> Gluing {
        self.gluings[tet][face]
    }

    /// The ±1 orientation sign chosen for each tetrahedron.
    pub fn orientation(&self) -> &[i8] {
        &self.orientation
    }

    pub fn edges(&self) -> &[EdgeClass] {
        &self.edges
    }

    pub fn faces(&self) -> &[FaceClass] {
        &self.faces
    }

    pub fn vertices(&self) -> &[VertexClass] {
        &self.vertices
    }

    /// Edge class of the edge `{a, b}` of `tet`, and +1 if `a → b` agrees with
    /// the direction transported from the class's canonical embedding.
    pub fn edge_direction(&self, tet: usize, a: usize, b: usize) -> (usize, i8) {
        let (class, sign) = self.edge_lookup[tet][local_edge_index(a, b)];
        if a < b {
            (class, sign)
        } else {
            (class, -sign)
        }
    }

    pub fn face_class(&self, tet: usize, face: usize) -> usize {
        self.face_lookup[tet][face]
    }

    pub fn all_edges_orientable(&self) -> bool {
        self.edges.iter().all(|e| e.orientable)
    }

    pub fn vertex_links(&self) -> Vec<VertexLink> {
        self.vertices.iter().map(|v| v.link.clone()).collect()
    }

    /// Sign with which the walk through `(tet, face)` crosses the dual edge
    /// of that face: +1 when leaving through the canonical embedding.
    pub fn crossing_sign(&self, tet: usize, face: usize) -> i64 {
        let class = &self.faces[self.face_class(tet, face)];
        if class.canonical() == (FaceEmbedding { tet, face: face as u8 }) {
            1
        } else {
            -1
        }
    }

    /// `∂₃` of the dual complex: one dual 3-cell per (material) vertex.
    pub fn vertex_cell_boundary(&self) -> Result<IntMatrix, TriangulationError> {
        if self.kind == Kind::Ideal {
            return Err(TriangulationError::NoDualThreeCells);
        }
        let mut d3 = IntMatrix::zeros(self.edges.len(), self.vertices.len());
        for e in &self.edges {
            d3.add_to(e.index, e.head_vertex, 1);
            d3.add_to(e.index, e.tail_vertex, -1);
        }
        Ok(d3)
    }

    /// The dual cell complex: `C₀` tetrahedra, `C₁` faces, `C₂` edges, and
    /// for closed triangulations `C₃` vertices.
    pub fn dual_chain_complex(&self) -> ChainComplex {
        let (t, f, e) = (self.tet_count(), self.faces.len(), self.edges.len());
        let mut d1 = IntMatrix::zeros(t, f);
        for face in &self.faces {
            d1.add_to(face.partner().tet, face.index, 1);
            d1.add_to(face.canonical().tet, face.index, -1);
        }
        let mut d2 = IntMatrix::zeros(f, e);
        for edge in &self.edges {
            for step in &edge.link_cycle {
                let tet = step.embedding.tet;
                let exit = step.exit_face as usize;
                d2.add_to(self.face_class(tet, exit), edge.index, self.crossing_sign(tet, exit));
            }
        }
        let mut ranks = vec![t, f, e];
        let mut boundaries = vec![d1, d2];
        if let Ok(d3) = self.vertex_cell_boundary() {
            ranks.push(self.vertices.len());
            boundaries.push(d3);
        }
        ChainComplex::new(ranks, boundaries).expect("dual complex satisfies ∂∘∂ = 0")
    }

    pub fn report(&self) -> TriangulationReport {
        TriangulationReport {
            tet_count: self.tet_count(),
            kind: self.kind,
            vertex_count: self.vertices.len(),
            edge_count: self.edges.len(),
            face_count: self.faces.len(),
            edge_degrees: self.edges.iter().map(EdgeClass::degree).collect(),
            edges_orientable: self.edges.iter().map(|e| e.orientable).collect(),
            vertex_links: self.vertex_links(),
        }
    }
}

/// Summary emitted by `validate`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangulationReport {
    pub tet_count: usize,
    pub kind: Kind,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub face_count: usize,
    pub edge_degrees: Vec<usize>,
    pub edges_orientable: Vec<bool>,
    pub vertex_links: Vec<VertexLink>,
}

/// Assigns ±1 to each tetrahedron so that every gluing is orientation
/// reversing: `o(t') = -o(t) · sign(p)`.
fn orient(gluings: &[[Gluing; 4]]) -> Result<Vec<i8>, TriangulationError> {
    let n = gluings.len();
    let mut o = vec![0i8; n];
    for root in 0..n {
        if o[root] != 0 {
            continue;
        }
        o[root] = 1;
        let mut stack = vec![root];
        while let Some(t) = stack.pop() {
            for (f, g) in gluings[t].iter().enumerate() {
                let need = -o[t] * g.perm.sign();
                if o[g.tet] == 0 {
                    o[g.tet] = need;
                    stack.push(g.tet);
                } else if o[g.tet] != need {
                    return Err(TriangulationError::NonOrientable { tet: t, face: f });
                }
            }
        }
    }
    Ok(o)
}

fn classify(vertices: &[VertexClass]) -> Result<Kind, TriangulationError> {
    if let Some(bad) = vertices.iter().find(|v| v.link.link == LinkType::Other) {
        return Err(TriangulationError::BadVertexLink { vertex: bad.index, euler: bad.link.euler });
    }
    if vertices.iter().all(|v| v.link.link == LinkType::Sphere) {
        Ok(Kind::Closed)
    } else if vertices.iter().all(|v| v.link.link == LinkType::Torus) {
        Ok(Kind::Ideal)
    } else {
        Err(TriangulationError::MixedVertexLinks)
    }
}

fn face_classes(gluings: &[[Gluing; 4]]) -> (Vec<FaceClass>, Vec<[usize; 4]>) {
    let mut lookup = vec![[usize::MAX; 4]; gluings.len()];
    let mut faces = Vec::new();
    for t in 0..gluings.len() {
        for f in 0..4 {
            if lookup[t][f] != usize::MAX {
                continue;
            }
            let g = gluings[t][f];
            let here = FaceEmbedding { tet: t, face: f as u8 };
            let there = FaceEmbedding { tet: g.tet, face: g.perm.apply(f) as u8 };
            let index = faces.len();
            lookup[t][f] = index;
            lookup[g.tet][g.perm.apply(f)] = index;
            faces.push(FaceClass { index, embeddings: [here.min(there), here.max(there)] });
        }
    }
    (faces, lookup)
}

/// The face through which the walk around `tail → head` leaves `tet`: with
/// `c, d` the remaining vertices ordered so that `(tail, head, c, d)` is
/// positively oriented, the walk exits through the face opposite `c`.
fn exit_face(orientation: i8, tail: usize, head: usize) -> usize {
    let (c, d) = complement(tail, head);
    if sign_of([tail as u8, head as u8, c as u8, d as u8]) * orientation > 0 {
        c
    } else {
        d
    }
}

fn edge_classes(
    gluings: &[[Gluing; 4]],
    orientation: &[i8],
    vertex_lookup: &[[usize; 4]],
) -> (Vec<EdgeClass>, Vec<[(usize, i8); 6]>) {
    let n = gluings.len();
    let mut lookup = vec![[(usize::MAX, 0i8); 6]; n];
    let mut edges = Vec::new();
    for t in 0..n {
        for (local, &(a, b)) in EDGE_VERTICES.iter().enumerate() {
            if lookup[t][local].0 != usize::MAX {
                continue;
            }
            let index = edges.len();
            let start = EdgeEmbedding { tet: t, tail: a, head: b };
            let mut embeddings = Vec::new();
            let mut link_cycle = Vec::new();
            let orientable;
            let mut current = start;
            let mut entry = None;
            loop {
                let (tet, tail, head) = (current.tet, current.tail as usize, current.head as usize);
                let li = local_edge_index(tail, head);
                if lookup[tet][li].0 == index {
                    // Back at an embedding already on this cycle: the start.
                    debug_assert_eq!((tet, li), (t, local));
                    orientable = current == start;
                    break;
                }
                lookup[tet][li] = (index, if tail < head { 1 } else { -1 });
                embeddings.push(current);
                let exit = exit_face(orientation[tet], tail, head);
                let (c, d) = complement(tail, head);
                let entry_face = entry.unwrap_or(if exit == c { d } else { c });
                link_cycle.push(LinkStep { embedding: current, entry_face: entry_face as u8, exit_face: exit as u8 });
                let g = gluings[tet][exit];
                current = EdgeEmbedding {
                    tet: g.tet,
                    tail: g.perm.apply(tail) as u8,
                    head: g.perm.apply(head) as u8,
                };
                entry = Some(g.perm.apply(exit));
            }
            edges.push(EdgeClass {
                index,
                embeddings,
                link_cycle,
                orientable,
                tail_vertex: vertex_lookup[t][a as usize],
                head_vertex: vertex_lookup[t][b as usize],
            });
        }
    }
    (edges, lookup)
}
