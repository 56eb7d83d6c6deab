//! Derivations `kΓ → kΓ/I`: the standard basis, evaluation, validation of
//! derivation data, and the dimension formulas for `H¹(kΓ, kΓ/I)` and
//! `HH¹(kΓ/I)`.
//!
//! A derivation is determined by its values on vertices and arrows. The
//! standard basis consists of
//!
//! * inner derivations `D_s: x ↦ s·x − x·s` for basis classes `s` with
//!   distinct endpoints (`B1`), and
//! * arrow-type derivations `D_{r,s}` sending the arrow `r` to a parallel
//!   basis class `s` and every other arrow and vertex to zero (`B2`).

use std::fmt;

use thiserror::Error;

use crate::algebra::{format_terms, AlgebraElement, Presentation, QuotientElement};
use crate::field::Scalar;
use crate::linalg::{SparseRow, SparseRowReducer};
use crate::planar::Dart;
use crate::quiver::{parallel, ArrowId, Path, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivationError {
    #[error("`{0}` is not a basis path of the quotient")]
    NotInBasis(String),
    #[error("arrow `{arrow}` is not parallel to `{target}`")]
    NotParallel { arrow: String, target: String },
    #[error("arrow or vertex index out of range")]
    OutOfRange,
    #[error("`{0}` is not a cycle")]
    NotACycle(String),
    #[error("cycle `{0}` has length >= N")]
    CycleTooLong(String),
    #[error("the presentation is not a truncated quiver algebra")]
    NotTruncated,
    #[error("requires characteristic 0, field has characteristic {0}")]
    PositiveCharacteristic(u64),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

/// A tagged derivation from the standard families.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BasisOperator {
    /// `x ↦ s·x − x·s`.
    Inner(Path),
    /// `arrow ↦ target`, all other generators to 0.
    ArrowType { arrow: ArrowId, target: Path },
    /// Sum of outgoing arrow operators minus incoming ones at a vertex.
    Vertex(VertexId),
    /// Signed sum of arrow operators along a face boundary: `+` for forward
    /// darts, `−` for reverse darts.
    Face(Vec<Dart>),
}

impl BasisOperator {
    pub fn format(&self, p: &Presentation) -> String {
        let q = p.quiver();
        match self {
            BasisOperator::Inner(s) => format!("inner({})", p.format_path(s)),
            BasisOperator::ArrowType { arrow, target } => {
                format!("D({} -> {})", q.arrow_name(*arrow), p.format_path(target))
            }
            BasisOperator::Vertex(v) => format!("vertex({})", q.vertex_name(*v)),
            BasisOperator::Face(darts) => {
                let parts: Vec<String> = darts.iter().map(|d| d.format(q)).collect();
                format!("face({})", parts.join(" "))
            }
        }
    }
}

fn validate(p: &Presentation, op: &BasisOperator) -> Result<(), DerivationError> {
    let q = p.quiver();
    match op {
        BasisOperator::Inner(s) => {
            if p.basis_index(s).is_none() {
                return Err(DerivationError::NotInBasis(p.format_path(s)));
            }
        }
        BasisOperator::ArrowType { arrow, target } => {
            if arrow.0 >= q.arrow_count() {
                return Err(DerivationError::OutOfRange);
            }
            if p.basis_index(target).is_none() {
                return Err(DerivationError::NotInBasis(p.format_path(target)));
            }
            if !parallel(&q.arrow_path(*arrow), target) {
                return Err(DerivationError::NotParallel {
                    arrow: q.arrow_name(*arrow).to_string(),
                    target: p.format_path(target),
                });
            }
        }
        BasisOperator::Vertex(v) => {
            if v.0 >= q.vertex_count() {
                return Err(DerivationError::OutOfRange);
            }
        }
        BasisOperator::Face(darts) => {
            if darts.iter().any(|d| d.arrow.0 >= q.arrow_count()) {
                return Err(DerivationError::OutOfRange);
            }
        }
    }
    Ok(())
}

/// Replace each occurrence of `arrow` in `path` by `target` (one term per
/// occurrence) and reduce. `target` must be parallel to `arrow`.
fn substitute(p: &Presentation, arrow: ArrowId, target: &Path, path: &Path) -> QuotientElement {
    let mut out = QuotientElement::zero();
    let one = p.field().one();
    for (i, a) in path.arrows().iter().enumerate() {
        if *a != arrow {
            continue;
        }
        let mut arrows = Vec::with_capacity(path.len() + target.len());
        arrows.extend_from_slice(&path.arrows()[..i]);
        arrows.extend_from_slice(target.arrows());
        arrows.extend_from_slice(&path.arrows()[i + 1..]);
        let replaced = if arrows.is_empty() {
            Path::trivial(target.tail())
        } else {
            p.quiver().path(&arrows).expect("parallel substitution stays composable")
        };
        out.add_scaled(&p.reduce_path(&replaced), &one);
    }
    out
}

fn apply_unchecked(p: &Presentation, op: &BasisOperator, path: &Path) -> QuotientElement {
    let q = p.quiver();
    match op {
        BasisOperator::Inner(s) => {
            let left = s.compose(path).map(|sp| p.reduce_path(&sp)).unwrap_or_default();
            let right = path.compose(s).map(|ps| p.reduce_path(&ps)).unwrap_or_default();
            &left - &right
        }
        BasisOperator::ArrowType { arrow, target } => substitute(p, *arrow, target, path),
        BasisOperator::Vertex(v) => {
            let mut out = QuotientElement::zero();
            let one = p.field().one();
            let minus = -&one;
            for r in q.arrow_ids() {
                let arrow = q.arrow(r);
                let sign = match (arrow.tail == *v, arrow.head == *v) {
                    (true, false) => &one,
                    (false, true) => &minus,
                    _ => continue,
                };
                out.add_scaled(&substitute(p, r, &q.arrow_path(r), path), sign);
            }
            out
        }
        BasisOperator::Face(darts) => {
            let mut out = QuotientElement::zero();
            for d in darts {
                let sign = p.field().from_i64(d.sign());
                out.add_scaled(&substitute(p, d.arrow, &q.arrow_path(d.arrow), path), &sign);
            }
            out
        }
    }
}

/// Evaluates a basis operator on a path of `kΓ`.
pub fn apply(p: &Presentation, op: &BasisOperator, path: &Path) -> Result<QuotientElement, DerivationError> {
    validate(p, op)?;
    Ok(apply_unchecked(p, op, path))
}

/// Linear extension of [`apply`] to elements of `kΓ`.
pub fn apply_element(
    p: &Presentation,
    op: &BasisOperator,
    e: &AlgebraElement,
) -> Result<QuotientElement, DerivationError> {
    validate(p, op)?;
    let mut out = QuotientElement::zero();
    for (path, c) in e.terms() {
        out.add_scaled(&apply_unchecked(p, op, path), c);
    }
    Ok(out)
}

/// Values of an operator on every vertex and arrow.
pub fn values_of(p: &Presentation, op: &BasisOperator) -> Result<DerivationValues, DerivationError> {
    validate(p, op)?;
    let q = p.quiver();
    Ok(DerivationValues {
        d0: q.vertices().map(|v| apply_unchecked(p, op, &Path::trivial(v))).collect(),
        d1: q.arrow_ids().map(|a| apply_unchecked(p, op, &q.arrow_path(a))).collect(),
    })
}

/// Values on `V ∪ E` flattened into one coordinate vector of length
/// `(|V| + |E|)·dim`. Two derivations agree iff these vectors agree.
pub fn evaluation_vector(p: &Presentation, op: &BasisOperator) -> Result<Vec<Scalar>, DerivationError> {
    Ok(values_of(p, op)?.flatten(p))
}

/// The index set of `B2`: arrow order, then basis order.
pub fn arrow_type_pairs(p: &Presentation) -> Vec<(ArrowId, usize)> {
    let q = p.quiver();
    q.arrow_ids()
        .flat_map(|a| {
            let ap = q.arrow_path(a);
            (0..p.dim())
                .filter(move |&i| parallel(&ap, &p.basis()[i]))
                .map(move |i| (a, i))
        })
        .collect()
}

pub fn b2_operators(p: &Presentation) -> Vec<BasisOperator> {
    arrow_type_pairs(p)
        .into_iter()
        .map(|(arrow, i)| BasisOperator::ArrowType {
            arrow,
            target: p.basis()[i].clone(),
        })
        .collect()
}

pub fn b1_operators(p: &Presentation) -> Vec<BasisOperator> {
    p.classify()
        .acyclic_part
        .into_iter()
        .map(|i| BasisOperator::Inner(p.basis()[i].clone()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationSpaceSummary {
    pub b1: Vec<BasisOperator>,
    pub b2: Vec<BasisOperator>,
    pub dim_diff: usize,
    pub dim_inner: usize,
    pub dim_center: usize,
    pub q_c: usize,
    pub dim_h1: usize,
}

fn formula(b2: usize, center: usize, q_c: usize) -> Result<usize, DerivationError> {
    (b2 + center)
        .checked_sub(q_c)
        .ok_or_else(|| DerivationError::Inconsistent(format!("|B2| + dim Z = {} < |Q_C| = {q_c}", b2 + center)))
}

/// Standard basis of the derivation space and `dim H¹ = |B2| + dim Z − |Q_C|`.
pub fn standard_basis(p: &Presentation) -> DerivationSpaceSummary {
    let b1 = b1_operators(p);
    let b2 = b2_operators(p);
    let dim_center = p.center().len();
    let q_c = p.classify().cyclic_part.len();
    let dim_h1 = formula(b2.len(), dim_center, q_c).expect("center lies in the span of Q_C");
    DerivationSpaceSummary {
        dim_diff: b1.len() + b2.len(),
        dim_inner: p.dim() - dim_center,
        dim_center,
        q_c,
        dim_h1,
        b1,
        b2,
    }
}

/// Values of a candidate derivation on vertices (`d0`) and arrows (`d1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationValues {
    pub d0: Vec<QuotientElement>,
    pub d1: Vec<QuotientElement>,
}

impl DerivationValues {
    pub fn zero(p: &Presentation) -> Self {
        DerivationValues {
            d0: vec![QuotientElement::zero(); p.quiver().vertex_count()],
            d1: vec![QuotientElement::zero(); p.quiver().arrow_count()],
        }
    }

    pub fn flatten(&self, p: &Presentation) -> Vec<Scalar> {
        self.d0
            .iter()
            .chain(&self.d1)
            .flat_map(|x| x.coords(p.dim(), p.field()))
            .collect()
    }

    /// Inverse of [`DerivationValues::flatten`].
    pub fn from_flat(p: &Presentation, v: &[Scalar]) -> Self {
        let dim = p.dim();
        let nv = p.quiver().vertex_count();
        let chunks: Vec<QuotientElement> = v.chunks(dim.max(1)).map(QuotientElement::from_coords).collect();
        let mut d0: Vec<QuotientElement> = chunks.iter().take(nv).cloned().collect();
        let mut d1: Vec<QuotientElement> = chunks.iter().skip(nv).cloned().collect();
        d0.resize(nv, QuotientElement::zero());
        d1.resize(p.quiver().arrow_count(), QuotientElement::zero());
        DerivationValues { d0, d1 }
    }
}

/// Which necessary condition on derivation data failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivationConstraint {
    /// Wrong number of vertex or arrow values.
    Totality,
    /// `D(v)` must be supported on classes with exactly one endpoint at `v`.
    VertexSupport,
    /// `D(r) − D(t(r))·r − r·D(h(r))` must be supported on classes parallel to `r`.
    ArrowSupport,
    /// For every class `q` with `t(q) ≠ h(q)`: coefficient of `q` in
    /// `D(t(q))` plus its coefficient in `D(h(q))` is zero.
    EndpointCancellation,
}

impl fmt::Display for DerivationConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DerivationConstraint::Totality => "totality",
            DerivationConstraint::VertexSupport => "vertex-value support",
            DerivationConstraint::ArrowSupport => "arrow-value support",
            DerivationConstraint::EndpointCancellation => "endpoint cancellation",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{constraint} violated: {witness}")]
pub struct ConstraintViolation {
    pub constraint: DerivationConstraint,
    pub witness: String,
}

/// A validated derivation, evaluated on paths by the Leibniz expansion
/// `D(p₁⋯p_l) = Σ p₁⋯p_{i−1}·D(p_i)·p_{i+1}⋯p_l`.
#[derive(Debug, Clone)]
pub struct ExtendedDerivation<'a> {
    presentation: &'a Presentation,
    values: DerivationValues,
}

impl<'a> ExtendedDerivation<'a> {
    pub fn values(&self) -> &DerivationValues {
        &self.values
    }

    pub fn eval(&self, path: &Path) -> QuotientElement {
        leibniz_eval(self.presentation, &self.values, path)
    }

    pub fn eval_element(&self, e: &AlgebraElement) -> QuotientElement {
        let mut out = QuotientElement::zero();
        for (path, c) in e.terms() {
            out.add_scaled(&self.eval(path), c);
        }
        out
    }
}

pub(crate) fn leibniz_eval(p: &Presentation, values: &DerivationValues, path: &Path) -> QuotientElement {
    let q = p.quiver();
    if path.is_trivial() {
        return values.d0[path.tail().0].clone();
    }
    let l = path.len();
    let mut out = QuotientElement::zero();
    for (i, a) in path.arrows().iter().enumerate() {
        let mut term = values.d1[a.0].clone();
        if i > 0 {
            term = p.multiply(&p.reduce_path(&path.subpath(q, 0, i)), &term);
        }
        if i + 1 < l {
            term = p.multiply(&term, &p.reduce_path(&path.subpath(q, i + 1, l)));
        }
        out.add_scaled(&term, &p.field().one());
    }
    out
}

/// Checks that vertex/arrow values extend to a derivation and returns the
/// extension, or the first violated constraint with a witness.
pub fn extend_derivation(
    p: &Presentation,
    dv: DerivationValues,
) -> Result<ExtendedDerivation<'_>, ConstraintViolation> {
    let q = p.quiver();
    if dv.d0.len() != q.vertex_count() || dv.d1.len() != q.arrow_count() {
        return Err(ConstraintViolation {
            constraint: DerivationConstraint::Totality,
            witness: format!(
                "expected {} vertex and {} arrow values, got {} and {}",
                q.vertex_count(),
                q.arrow_count(),
                dv.d0.len(),
                dv.d1.len()
            ),
        });
    }
    if let Some(bad) = dv.d0.iter().chain(&dv.d1).flat_map(|x| x.support()).find(|&i| i >= p.dim()) {
        return Err(ConstraintViolation {
            constraint: DerivationConstraint::Totality,
            witness: format!("basis index {bad} out of range"),
        });
    }

    for v in q.vertices() {
        for i in dv.d0[v.0].support() {
            let b = &p.basis()[i];
            if (b.tail() == v) == (b.head() == v) {
                return Err(ConstraintViolation {
                    constraint: DerivationConstraint::VertexSupport,
                    witness: format!("D({}) has a term in {}", q.vertex_name(v), p.format_basis(i)),
                });
            }
        }
    }

    for a in q.arrow_ids() {
        let arrow = q.arrow(a);
        let ap = q.arrow_path(a);
        let abar = p.reduce_path(&ap);
        let induced = &p.multiply(&dv.d0[arrow.tail.0], &abar) + &p.multiply(&abar, &dv.d0[arrow.head.0]);
        let residual = &dv.d1[a.0] - &induced;
        let stray = residual.support().find(|&i| !parallel(&p.basis()[i], &ap));
        if let Some(i) = stray {
            return Err(ConstraintViolation {
                constraint: DerivationConstraint::ArrowSupport,
                witness: format!(
                    "D({}) has coefficient {} on {} not accounted for by the vertex values",
                    q.arrow_name(a),
                    residual.coeff(i).expect("in support"),
                    p.format_basis(i)
                ),
            });
        }
    }

    let zero = p.field().zero();
    for i in p.classify().acyclic_part {
        let b = &p.basis()[i];
        let at_tail = dv.d0[b.tail().0].coeff(i).unwrap_or(&zero);
        let at_head = dv.d0[b.head().0].coeff(i).unwrap_or(&zero);
        if !(at_tail + at_head).is_zero() {
            return Err(ConstraintViolation {
                constraint: DerivationConstraint::EndpointCancellation,
                witness: format!(
                    "class {}: coefficient {at_tail} in D({}) and {at_head} in D({})",
                    p.format_basis(i),
                    q.vertex_name(b.tail()),
                    q.vertex_name(b.head())
                ),
            });
        }
    }

    Ok(ExtendedDerivation {
        presentation: p,
        values: dv,
    })
}

/// Coordinates of a vertex operator over the arrow operators `D_{q,q}`,
/// indexed by arrow.
pub fn vertex_operator(p: &Presentation, v: VertexId) -> Vec<Scalar> {
    let f = p.field();
    p.quiver()
        .arrow_ids()
        .map(|a| {
            let arrow = p.quiver().arrow(a);
            match (arrow.tail == v, arrow.head == v) {
                (true, false) => f.one(),
                (false, true) => f.from_i64(-1),
                _ => f.zero(),
            }
        })
        .collect()
}

/// Expands `D_{arrow, path}` for an arbitrary parallel path into
/// basis-target arrow operators with coefficients.
pub fn expand_arrow_type(p: &Presentation, arrow: ArrowId, path: &Path) -> Vec<(Scalar, BasisOperator)> {
    p.reduce_path(path)
        .terms()
        .map(|(i, c)| {
            (
                c.clone(),
                BasisOperator::ArrowType {
                    arrow,
                    target: p.basis()[i].clone(),
                },
            )
        })
        .collect()
}

/// Checks `D_q = Σ_{t(r)=v} D_{r, q·r} − Σ_{h(r)=v} D_{r, r·q}` for a cycle `q`
/// at `v` by comparing both sides on every vertex and arrow.
pub fn cycle_identity_check(p: &Presentation, cycle: &Path) -> Result<bool, DerivationError> {
    let q = p.quiver();
    if !cycle.is_cycle() {
        return Err(DerivationError::NotACycle(p.format_path(cycle)));
    }
    if cycle.len() >= p.nilpotency() {
        return Err(DerivationError::CycleTooLong(p.format_path(cycle)));
    }
    let v0 = cycle.tail();
    let mut rhs: Vec<(Scalar, BasisOperator)> = Vec::new();
    for r in q.arrow_ids() {
        let rp = q.arrow_path(r);
        if q.arrow(r).tail == v0 {
            let qr = cycle.compose(&rp).expect("cycle ends at v0");
            rhs.extend(expand_arrow_type(p, r, &qr));
        }
        if q.arrow(r).head == v0 {
            let rq = rp.compose(cycle).expect("cycle starts at v0");
            rhs.extend(expand_arrow_type(p, r, &rq).into_iter().map(|(c, op)| (-c, op)));
        }
    }
    for x in p.generators() {
        let lhs = {
            let left = cycle.compose(&x).map(|cx| p.reduce_path(&cx)).unwrap_or_default();
            let right = x.compose(cycle).map(|xc| p.reduce_path(&xc)).unwrap_or_default();
            &left - &right
        };
        let mut sum = QuotientElement::zero();
        for (c, op) in &rhs {
            sum.add_scaled(&apply_unchecked(p, op, &x), c);
        }
        if lhs != sum {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `F₂(I)`: combinations of `B2` operators that vanish on the ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct F2Subspace {
    pub columns: Vec<BasisOperator>,
    /// Canonical nullspace basis, coefficient vectors over `columns`.
    pub vectors: Vec<Vec<Scalar>>,
    pub dim_f2: usize,
    pub dim_center: usize,
    pub q_c: usize,
    pub dim_hh1: usize,
}

/// Generators of `I` as a two-sided ideal: the relations and every path of
/// length exactly `N`.
pub fn ideal_generators(p: &Presentation) -> Vec<AlgebraElement> {
    let f = p.field();
    p.relations()
        .iter()
        .cloned()
        .chain(
            p.quiver()
                .paths_of_length(p.nilpotency())
                .into_iter()
                .map(|path| AlgebraElement::from_path(f, path)),
        )
        .collect()
}

/// Solves `Σ c_{r,s} D_{r,s}(g) = 0` for every ideal generator `g`;
/// `dim HH¹ = dim F₂ + dim Z − |Q_C|`.
pub fn f2_subspace(p: &Presentation) -> F2Subspace {
    let columns = b2_operators(p);
    let mut reducer = SparseRowReducer::new(p.field(), columns.len());
    for g in ideal_generators(p) {
        let mut rows: std::collections::BTreeMap<usize, SparseRow> = Default::default();
        for (j, op) in columns.iter().enumerate() {
            let value = apply_element(p, op, &g).expect("standard operators are valid");
            for (k, c) in value.terms() {
                rows.entry(k).or_default().insert(j, c.clone());
            }
        }
        for row in rows.into_values() {
            reducer.insert(row);
        }
    }
    let vectors = reducer.nullspace();
    let dim_center = p.center().len();
    let q_c = p.classify().cyclic_part.len();
    let dim_hh1 = formula(vectors.len(), dim_center, q_c).expect("inner part of F2 contains D_C");
    F2Subspace {
        dim_f2: vectors.len(),
        columns,
        vectors,
        dim_center,
        q_c,
        dim_hh1,
    }
}

impl F2Subspace {
    /// Each basis vector written as a combination of arrow operators.
    pub fn format_vectors(&self, p: &Presentation) -> Vec<String> {
        self.vectors
            .iter()
            .map(|v| {
                format_terms(
                    v.iter()
                        .zip(&self.columns)
                        .filter(|(c, _)| !c.is_zero())
                        .map(|(c, op)| (c, op.format(p))),
                )
            })
            .collect()
    }
}

/// Standard basis of derivations of a truncated algebra `kΓ/kⁿΓ`:
/// `B1` and the arrow operators whose target is not a vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedBasis {
    pub b1: Vec<BasisOperator>,
    pub b2: Vec<BasisOperator>,
    pub dim_center: usize,
    pub q_c: usize,
    pub dim_hh1: usize,
}

pub fn truncated_diff_basis(p: &Presentation) -> Result<TruncatedBasis, DerivationError> {
    if p.is_truncated().is_none() {
        return Err(DerivationError::NotTruncated);
    }
    let ch = p.field().characteristic();
    if ch != 0 {
        return Err(DerivationError::PositiveCharacteristic(ch));
    }
    let pairs = arrow_type_pairs(p);
    let keep: Vec<usize> = (0..pairs.len()).filter(|&j| !p.basis()[pairs[j].1].is_trivial()).collect();
    let f2 = f2_subspace(p);
    let units: Vec<Vec<Scalar>> = keep
        .iter()
        .map(|&j| {
            let mut v = vec![p.field().zero(); pairs.len()];
            v[j] = p.field().one();
            v
        })
        .collect();
    if units != f2.vectors {
        return Err(DerivationError::Inconsistent(
            "arrow operators with non-vertex targets do not span F2".into(),
        ));
    }
    let b2: Vec<BasisOperator> = keep.iter().map(|&j| f2.columns[j].clone()).collect();
    let dim_hh1 = formula(b2.len(), f2.dim_center, f2.q_c)?;
    Ok(TruncatedBasis {
        b1: b1_operators(p),
        b2,
        dim_center: f2.dim_center,
        q_c: f2.q_c,
        dim_hh1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tests::{a2, kr2, loop2, sq};
    use crate::field::FieldSpec;
    use crate::linalg::rank_of_vectors;

    fn arrow_op(p: &Presentation, arrow: &str, target: &[&str]) -> BasisOperator {
        let q = p.quiver();
        BasisOperator::ArrowType {
            arrow: q.arrow_by_name(arrow).unwrap(),
            target: if target.is_empty() {
                Path::trivial(q.arrow(q.arrow_by_name(arrow).unwrap()).head)
            } else {
                q.path_by_names(target).unwrap()
            },
        }
    }

    #[test]
    fn standard_basis_counts() {
        let s = standard_basis(&sq());
        assert_eq!((s.b2.len(), s.dim_center, s.q_c, s.dim_h1), (4, 1, 4, 1));
        assert_eq!(s.dim_diff, 5 + 4);
        let s = standard_basis(&kr2());
        assert_eq!((s.b2.len(), s.dim_h1), (4, 3));
        let s = standard_basis(&a2());
        assert_eq!((s.b2.len(), s.dim_h1), (1, 0));
    }

    #[test]
    fn apply_examples() {
        let p = sq();
        let op = arrow_op(&p, "a1", &["a1"]);
        let path = p.quiver().path_by_names(&["a1", "a2"]).unwrap();
        assert_eq!(p.format_element(&apply(&p, &op, &path).unwrap()), "b1*b2");
        let v = Path::trivial(VertexId(0));
        assert!(apply(&p, &op, &v).unwrap().is_zero());

        let l = loop2();
        let xx = l.quiver().path_by_names(&["x", "x"]).unwrap();
        let op = arrow_op(&l, "x", &[]);
        assert_eq!(l.format_element(&apply(&l, &op, &xx).unwrap()), "2 x");
    }

    #[test]
    fn apply_rejects_foreign_operators() {
        let p = sq();
        let bad = arrow_op(&p, "a1", &["b1"]);
        assert!(matches!(apply(&p, &bad, &Path::trivial(VertexId(0))), Err(DerivationError::NotParallel { .. })));
        let a1a2 = p.quiver().path_by_names(&["a1", "a2"]).unwrap();
        assert!(matches!(
            apply(&p, &BasisOperator::Inner(a1a2), &Path::trivial(VertexId(0))),
            Err(DerivationError::NotInBasis(_))
        ));
    }

    #[test]
    fn extend_examples() {
        let p = sq();
        let zero = DerivationValues::zero(&p);
        let d = extend_derivation(&p, zero).unwrap();
        for path in p.quiver().enumerate_paths(2) {
            assert!(d.eval(&path).is_zero());
        }

        let mut dv = DerivationValues::zero(&p);
        let a1 = p.quiver().arrow_by_name("a1").unwrap();
        dv.d1[a1.0] = p.reduce_path(&p.quiver().arrow_path(a1));
        let d = extend_derivation(&p, dv).unwrap();
        let op = arrow_op(&p, "a1", &["a1"]);
        for path in p.quiver().enumerate_paths(3) {
            assert_eq!(d.eval(&path), apply(&p, &op, &path).unwrap());
        }

        let mut dv = DerivationValues::zero(&p);
        dv.d0[0] = p.reduce_path(&p.quiver().arrow_path(a1));
        let err = extend_derivation(&p, dv).unwrap_err();
        assert_eq!(err.constraint, DerivationConstraint::EndpointCancellation);
        assert!(err.witness.contains("a1"));
    }

    #[test]
    fn extend_rejects_bad_shapes() {
        let p = sq();
        let mut dv = DerivationValues::zero(&p);
        // D(s) with a term at a class not touching s
        dv.d0[0] = p.reduce_path(&p.quiver().path_by_names(&["a2"]).unwrap());
        assert_eq!(extend_derivation(&p, dv).unwrap_err().constraint, DerivationConstraint::VertexSupport);

        let mut dv = DerivationValues::zero(&p);
        dv.d1[0] = p.reduce_path(&p.quiver().path_by_names(&["b1"]).unwrap());
        assert_eq!(extend_derivation(&p, dv).unwrap_err().constraint, DerivationConstraint::ArrowSupport);

        let dv = DerivationValues { d0: vec![], d1: vec![] };
        assert_eq!(extend_derivation(&p, dv).unwrap_err().constraint, DerivationConstraint::Totality);
    }

    #[test]
    fn vertex_operators() {
        let f = FieldSpec::Rationals;
        assert_eq!(vertex_operator(&a2(), VertexId(0)), vec![f.one()]);
        assert_eq!(vertex_operator(&loop2(), VertexId(0)), vec![f.zero()]);
        let p = sq();
        let s = vertex_operator(&p, VertexId(0));
        assert_eq!(s, [1, 0, 1, 0].map(|x| f.from_i64(x)).to_vec());
        // vertex operator coordinates reproduce the inner derivation of the vertex
        for v in p.quiver().vertices() {
            let inner = evaluation_vector(&p, &BasisOperator::Inner(Path::trivial(v))).unwrap();
            let vert = evaluation_vector(&p, &BasisOperator::Vertex(v)).unwrap();
            assert_eq!(inner, vert);
        }
    }

    #[test]
    fn cycle_identity_on_loop() {
        let l = loop2();
        let x = l.quiver().path_by_names(&["x"]).unwrap();
        assert_eq!(cycle_identity_check(&l, &x), Ok(true));
        assert_eq!(cycle_identity_check(&l, &Path::trivial(VertexId(0))), Ok(true));
        let xx = l.quiver().path_by_names(&["x", "x"]).unwrap();
        assert!(matches!(cycle_identity_check(&l, &xx), Err(DerivationError::CycleTooLong(_))));
        let p = sq();
        for v in p.quiver().vertices() {
            assert_eq!(cycle_identity_check(&p, &Path::trivial(v)), Ok(true));
        }
        let a1 = p.quiver().path_by_names(&["a1"]).unwrap();
        assert!(matches!(cycle_identity_check(&p, &a1), Err(DerivationError::NotACycle(_))));
    }

    #[test]
    fn f2_examples() {
        let p = sq();
        let f2 = f2_subspace(&p);
        assert_eq!((f2.dim_f2, f2.dim_hh1), (3, 0));
        // the single constraint is a + b - c - d = 0 over (a1, a2, b1, b2)
        let f = p.field();
        let expect: Vec<Vec<Scalar>> = [[-1, 1, 0, 0], [1, 0, 1, 0], [1, 0, 0, 1]]
            .iter()
            .map(|v| v.iter().map(|&x| f.from_i64(x)).collect())
            .collect();
        assert_eq!(f2.vectors, expect);

        let f2 = f2_subspace(&loop2());
        assert_eq!((f2.dim_f2, f2.dim_center, f2.q_c, f2.dim_hh1), (1, 2, 2, 1));
        let f2 = f2_subspace(&kr2());
        assert_eq!((f2.dim_f2, f2.dim_hh1), (4, 3));
    }

    #[test]
    fn truncated_bases() {
        let l = loop2();
        let t = truncated_diff_basis(&l).unwrap();
        assert_eq!(t.b2, vec![arrow_op(&l, "x", &["x"])]);
        assert_eq!(t.dim_hh1, 1);
        assert_eq!(truncated_diff_basis(&kr2()).unwrap().b2.len(), 4);
        let t = truncated_diff_basis(&a2()).unwrap();
        assert_eq!((t.b2.len(), t.dim_hh1), (1, 0));
        assert_eq!(truncated_diff_basis(&sq()), Err(DerivationError::NotTruncated));
    }

    #[test]
    fn truncated_rejects_positive_characteristic() {
        let q = crate::quiver::Quiver::new(&["v"], &[("x", "v", "v")]).unwrap();
        let p = Presentation::build(q, crate::algebra::IdealSpec::truncated(2), FieldSpec::PrimeField(3)).unwrap();
        assert_eq!(truncated_diff_basis(&p), Err(DerivationError::PositiveCharacteristic(3)));
    }

    #[test]
    fn standard_basis_is_independent_on_fixtures() {
        for p in [sq(), a2(), loop2(), kr2()] {
            let s = standard_basis(&p);
            let len = (p.quiver().vertex_count() + p.quiver().arrow_count()) * p.dim();
            let vecs: Vec<Vec<Scalar>> = s.b1.iter().chain(&s.b2).map(|op| evaluation_vector(&p, op).unwrap()).collect();
            assert_eq!(rank_of_vectors(p.field(), len, &vecs), s.dim_diff);
        }
    }
}
