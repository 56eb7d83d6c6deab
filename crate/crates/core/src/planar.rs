//! Combinatorial planar embeddings: rotation systems, face tracing, face
//! operators and explicit cohomology bases for planar acyclic algebras.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::algebra::Presentation;
use crate::derivation::{arrow_type_pairs, BasisOperator, DerivationError};
use crate::field::{FieldSpec, Scalar};
use crate::quiver::{ArrowId, Quiver, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanarError {
    #[error("rotation lists {got} vertices, quiver has {expected}")]
    VertexCount { expected: usize, got: usize },
    #[error("dart `{dart}` listed at `{vertex}` but it starts elsewhere")]
    DartAtWrongVertex { dart: String, vertex: String },
    #[error("dart `{0}` listed more than once")]
    DuplicateDart(String),
    #[error("dart `{0}` missing from the rotation")]
    MissingDart(String),
    #[error("arrow index out of range in rotation")]
    UnknownArrow,
    #[error("outer dart missing or invalid")]
    BadOuterDart,
    #[error("|V| - |E| + |F| = {v} - {e} + {f} != 2, rotation is not planar")]
    EulerMismatch { v: usize, e: usize, f: usize },
    #[error("the algebra has oriented cycles outside the vertices")]
    NotAcyclic,
    #[error("requires characteristic 0, field has characteristic {0}")]
    PositiveCharacteristic(u64),
    #[error("algebra is neither complete monomial nor truncated")]
    NoExplicitBasis,
    #[error(transparent)]
    Derivation(#[from] DerivationError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Forward,
    Reverse,
}

/// One side of an arrow: `Forward` starts at its tail, `Reverse` at its head.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dart {
    pub arrow: ArrowId,
    pub direction: Direction,
}

impl Dart {
    pub fn forward(arrow: ArrowId) -> Self {
        Dart { arrow, direction: Direction::Forward }
    }

    pub fn reverse(arrow: ArrowId) -> Self {
        Dart { arrow, direction: Direction::Reverse }
    }

    pub fn reversed(self) -> Self {
        Dart {
            arrow: self.arrow,
            direction: match self.direction {
                Direction::Forward => Direction::Reverse,
                Direction::Reverse => Direction::Forward,
            },
        }
    }

    pub fn sign(&self) -> i64 {
        match self.direction {
            Direction::Forward => 1,
            Direction::Reverse => -1,
        }
    }

    pub fn origin(&self, q: &Quiver) -> VertexId {
        let a = q.arrow(self.arrow);
        match self.direction {
            Direction::Forward => a.tail,
            Direction::Reverse => a.head,
        }
    }

    pub fn target(&self, q: &Quiver) -> VertexId {
        self.reversed().origin(q)
    }

    /// `name+` for forward, `name-` for reverse.
    pub fn format(&self, q: &Quiver) -> String {
        let s = match self.direction {
            Direction::Forward => '+',
            Direction::Reverse => '-',
        };
        format!("{}{s}", q.arrow_name(self.arrow))
    }
}

/// Cyclic order of outgoing darts around each vertex, plus a dart on the
/// outer face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationSystem {
    pub order: Vec<Vec<Dart>>,
    /// `None` only for a quiver without arrows.
    pub outer: Option<Dart>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceSet {
    /// Dart cycles in trace order.
    pub faces: Vec<Vec<Dart>>,
    pub outer: usize,
}

impl FaceSet {
    pub fn bounded(&self) -> impl Iterator<Item = &Vec<Dart>> {
        self.faces
            .iter()
            .enumerate()
            .filter(move |(i, _)| *i != self.outer)
            .map(|(_, f)| f)
    }
}

/// Signed arrow incidences of a dart sequence, one coordinate per arrow.
pub fn face_coefficients(q: &Quiver, field: FieldSpec, face: &[Dart]) -> Vec<Scalar> {
    let mut c = vec![0i64; q.arrow_count()];
    for d in face {
        c[d.arrow.0] += d.sign();
    }
    c.into_iter().map(|x| field.from_i64(x)).collect()
}

/// Traces faces with `next(d) = successor of reverse(d)` in the rotation at
/// the head of `d`, and enforces the Euler count.
pub fn build_embedding(q: &Quiver, rot: &RotationSystem) -> Result<FaceSet, PlanarError> {
    if rot.order.len() != q.vertex_count() {
        return Err(PlanarError::VertexCount {
            expected: q.vertex_count(),
            got: rot.order.len(),
        });
    }
    // position of each dart: (vertex, index in rotation)
    let mut place = vec![[None::<(usize, usize)>; 2]; q.arrow_count()];
    for (v, list) in rot.order.iter().enumerate() {
        for (i, d) in list.iter().enumerate() {
            if d.arrow.0 >= q.arrow_count() {
                return Err(PlanarError::UnknownArrow);
            }
            if d.origin(q).0 != v {
                return Err(PlanarError::DartAtWrongVertex {
                    dart: d.format(q),
                    vertex: q.vertex_name(VertexId(v)).to_string(),
                });
            }
            let slot = &mut place[d.arrow.0][d.direction as usize];
            if slot.is_some() {
                return Err(PlanarError::DuplicateDart(d.format(q)));
            }
            *slot = Some((v, i));
        }
    }
    for a in q.arrow_ids() {
        for d in [Dart::forward(a), Dart::reverse(a)] {
            if place[a.0][d.direction as usize].is_none() {
                return Err(PlanarError::MissingDart(d.format(q)));
            }
        }
    }

    let next = |d: Dart| {
        let r = d.reversed();
        let (v, i) = place[r.arrow.0][r.direction as usize].expect("checked above");
        let list = &rot.order[v];
        list[(i + 1) % list.len()]
    };

    let mut faces = Vec::new();
    let mut seen = BTreeSet::new();
    for a in q.arrow_ids() {
        for start in [Dart::forward(a), Dart::reverse(a)] {
            if seen.contains(&start) {
                continue;
            }
            let mut face = Vec::new();
            let mut d = start;
            while seen.insert(d) {
                face.push(d);
                d = next(d);
            }
            faces.push(face);
        }
    }

    let outer = match rot.outer {
        None if q.arrow_count() == 0 => {
            faces.push(Vec::new());
            0
        }
        None => return Err(PlanarError::BadOuterDart),
        Some(o) => {
            if o.arrow.0 >= q.arrow_count() {
                return Err(PlanarError::BadOuterDart);
            }
            faces.iter().position(|f| f.contains(&o)).ok_or(PlanarError::BadOuterDart)?
        }
    };

    let (v, e, f) = (q.vertex_count(), q.arrow_count(), faces.len());
    if v + f != e + 2 {
        return Err(PlanarError::EulerMismatch { v, e, f });
    }
    Ok(FaceSet { faces, outer })
}

/// Face operators of the bounded faces.
pub fn face_operators(fs: &FaceSet) -> Vec<BasisOperator> {
    fs.bounded().map(|f| BasisOperator::Face(f.clone())).collect()
}

fn check_hypotheses(p: &Presentation) -> Result<(), PlanarError> {
    let ch = p.field().characteristic();
    if ch != 0 {
        return Err(PlanarError::PositiveCharacteristic(ch));
    }
    if !p.classify().is_acyclic {
        return Err(PlanarError::NotAcyclic);
    }
    Ok(())
}

/// Arrow operators `D_{r,s}` with `s ≠ r`, optionally dropping vertex targets,
/// followed by the bounded-face operators.
fn planar_basis(p: &Presentation, fs: &FaceSet, drop_vertex_targets: bool) -> Vec<BasisOperator> {
    let q = p.quiver();
    arrow_type_pairs(p)
        .into_iter()
        .filter(|&(r, i)| {
            let s = &p.basis()[i];
            *s != q.arrow_path(r) && !(drop_vertex_targets && s.is_trivial())
        })
        .map(|(arrow, i)| BasisOperator::ArrowType {
            arrow,
            target: p.basis()[i].clone(),
        })
        .chain(face_operators(fs))
        .collect()
}

/// Basis of `H¹(kΓ, kΓ/I)` for an acyclic algebra over a planar quiver.
pub fn h1_basis_planar(p: &Presentation, fs: &FaceSet) -> Result<Vec<BasisOperator>, PlanarError> {
    check_hypotheses(p)?;
    Ok(planar_basis(p, fs, false))
}

/// Basis of `HH¹(kΓ/I)` for a planar acyclic algebra that is complete
/// monomial or truncated.
pub fn hh1_basis_planar(p: &Presentation, fs: &FaceSet) -> Result<Vec<BasisOperator>, PlanarError> {
    check_hypotheses(p)?;
    if p.is_truncated().is_some() {
        return Ok(planar_basis(p, fs, true));
    }
    if p.is_complete_monomial().unwrap_or(false) {
        return Ok(planar_basis(p, fs, false));
    }
    Err(PlanarError::NoExplicitBasis)
}
