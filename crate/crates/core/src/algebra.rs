//! Finite-dimensional quotients `kΓ/I` with `I = ⟨relations⟩ + R^N`.
//!
//! The basis of the quotient is chosen by row reducing the image of the
//! ideal among paths of length `< N`, with columns in graded-lex path order:
//! pivot paths are expressed through the others, the remaining paths form the
//! basis. Vertices and arrows are never pivots because every relation lives in
//! `R²`.

use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Neg, Sub};
use std::sync::OnceLock;

use thiserror::Error;

use crate::field::{is_negative, FieldSpec, Scalar};
use crate::linalg::{ExactMatrix, SparseRow, SparseRowReducer};
use crate::quiver::{parallel, Path, Quiver, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("nilpotency bound must be at least 2, got {0}")]
    NilpotencyTooSmall(usize),
    #[error("relation {relation} has a term `{path}` of length < 2 (not in R^2)")]
    RelationNotInR2 { relation: usize, path: String },
    #[error("relation {0} is over a different field")]
    FieldMismatch(usize),
    #[error("relation {0} contains a path that is not valid in this quiver")]
    InvalidPath(usize),
    #[error("the presentation is not monomial")]
    NotMonomial,
}

/// A finite linear combination of paths in `kΓ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    field: FieldSpec,
    terms: BTreeMap<Path, Scalar>,
}

impl AlgebraElement {
    pub fn zero(field: FieldSpec) -> Self {
        AlgebraElement {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_path(field: FieldSpec, p: Path) -> Self {
        let mut e = Self::zero(field);
        e.add_term(p, field.one());
        e
    }

    pub fn from_terms(field: FieldSpec, terms: impl IntoIterator<Item = (Scalar, Path)>) -> Self {
        let mut e = Self::zero(field);
        for (c, p) in terms {
            e.add_term(p, c);
        }
        e
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn add_term(&mut self, p: Path, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let updated = match self.terms.get(&p) {
            Some(old) => old + &c,
            None => c,
        };
        if updated.is_zero() {
            self.terms.remove(&p);
        } else {
            self.terms.insert(p, updated);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_single_path(&self) -> bool {
        self.terms.len() == 1
    }

    /// Product in `kΓ`; undefined concatenations contribute nothing.
    pub fn mul(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero(self.field);
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                if let Some(pq) = p.compose(q) {
                    out.add_term(pq, a * b);
                }
            }
        }
        out
    }

    /// Drops every term of length `>= n` (the image modulo `R^n`).
    pub fn truncated(&self, n: usize) -> AlgebraElement {
        AlgebraElement {
            field: self.field,
            terms: self
                .terms
                .iter()
                .filter(|(p, _)| p.len() < n)
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn format(&self, quiver: &Quiver) -> String {
        format_terms(self.terms.iter().map(|(p, c)| (c, p.display(quiver).to_string())))
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (p, c) in &rhs.terms {
            out.add_term(p.clone(), c.clone());
        }
        out
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (p, c) in &rhs.terms {
            out.add_term(p.clone(), -c);
        }
        out
    }
}

pub(crate) fn format_terms<'a>(terms: impl Iterator<Item = (&'a Scalar, String)>) -> String {
    let mut out = String::new();
    for (i, (c, label)) in terms.enumerate() {
        let negative = is_negative(c);
        let magnitude = if negative { -c } else { c.clone() };
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        if !magnitude.is_one() {
            out.push_str(&format!("{magnitude} "));
        }
        out.push_str(&label);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Generators of the ideal: `I = ⟨relations⟩ + R^nilpotency`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealSpec {
    pub relations: Vec<AlgebraElement>,
    pub nilpotency: usize,
}

impl IdealSpec {
    pub fn truncated(nilpotency: usize) -> Self {
        IdealSpec {
            relations: Vec::new(),
            nilpotency,
        }
    }
}

/// An element of `kΓ/I` in coordinates over the chosen basis; keys are
/// indices into [`Presentation::basis`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QuotientElement {
    terms: BTreeMap<usize, Scalar>,
}

impl QuotientElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(i: usize, field: FieldSpec) -> Self {
        let mut e = Self::zero();
        e.terms.insert(i, field.one());
        e
    }

    pub fn from_coords(coords: &[Scalar]) -> Self {
        QuotientElement {
            terms: coords
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.clone()))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: usize) -> Option<&Scalar> {
        self.terms.get(&i)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.terms.iter().map(|(i, c)| (*i, c))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.keys().copied()
    }

    pub fn add_scaled(&mut self, other: &QuotientElement, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (&i, x) in &other.terms {
            let delta = x * c;
            let updated = match self.terms.get(&i) {
                Some(old) => old + &delta,
                None => delta,
            };
            if updated.is_zero() {
                self.terms.remove(&i);
            } else {
                self.terms.insert(i, updated);
            }
        }
    }

    pub fn scaled(&self, c: &Scalar) -> QuotientElement {
        let mut out = QuotientElement::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn coords(&self, dim: usize, field: FieldSpec) -> Vec<Scalar> {
        let mut v = vec![field.zero(); dim];
        for (&i, c) in &self.terms {
            v[i] = c.clone();
        }
        v
    }
}

impl Add for &QuotientElement {
    type Output = QuotientElement;
    fn add(self, rhs: &QuotientElement) -> QuotientElement {
        let mut out = self.clone();
        for (&i, x) in &rhs.terms {
            let updated = match out.terms.get(&i) {
                Some(old) => old + x,
                None => x.clone(),
            };
            if updated.is_zero() {
                out.terms.remove(&i);
            } else {
                out.terms.insert(i, updated);
            }
        }
        out
    }
}

impl Neg for &QuotientElement {
    type Output = QuotientElement;
    fn neg(self) -> QuotientElement {
        QuotientElement {
            terms: self.terms.iter().map(|(&i, c)| (i, -c)).collect(),
        }
    }
}

impl Sub for &QuotientElement {
    type Output = QuotientElement;
    fn sub(self, rhs: &QuotientElement) -> QuotientElement {
        self + &(-rhs)
    }
}

/// Partition of the basis into classes with distinct endpoints (`Q_A`) and
/// classes with equal endpoints (`Q_C`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub acyclic_part: Vec<usize>,
    pub cyclic_part: Vec<usize>,
    /// `Q_C` consists of the trivial paths only.
    pub is_acyclic: bool,
}

/// The algebra `kΓ/(⟨G⟩ + R^N)` with an explicit path basis.
#[derive(Debug)]
pub struct Presentation {
    quiver: Quiver,
    field: FieldSpec,
    ideal: IdealSpec,
    all_paths: Vec<Path>,
    path_index: HashMap<Path, usize>,
    ideal_matrix: ExactMatrix,
    echelon: ExactMatrix,
    pivots: Vec<usize>,
    basis: Vec<Path>,
    basis_index: HashMap<Path, usize>,
    /// Image in the basis of every path in `all_paths`.
    images: Vec<QuotientElement>,
    center: OnceLock<Vec<QuotientElement>>,
}

impl Presentation {
    pub fn build(quiver: Quiver, ideal: IdealSpec, field: FieldSpec) -> Result<Self, AlgebraError> {
        let n = ideal.nilpotency;
        if n < 2 {
            return Err(AlgebraError::NilpotencyTooSmall(n));
        }
        for (i, g) in ideal.relations.iter().enumerate() {
            if g.field != field {
                return Err(AlgebraError::FieldMismatch(i));
            }
            for (p, _) in g.terms() {
                let valid = if p.is_trivial() {
                    p.tail().0 < quiver.vertex_count()
                } else {
                    p.arrows().iter().all(|a| a.0 < quiver.arrow_count())
                        && quiver.path(p.arrows()).as_ref() == Some(p)
                };
                if !valid {
                    return Err(AlgebraError::InvalidPath(i));
                }
                if p.len() < 2 {
                    return Err(AlgebraError::RelationNotInR2 {
                        relation: i,
                        path: p.display(&quiver).to_string(),
                    });
                }
            }
        }

        let all_paths = quiver.enumerate_paths(n - 1);
        let path_index: HashMap<Path, usize> =
            all_paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();

        let multipliers = quiver.enumerate_paths(n - 2);
        let mut rows = Vec::new();
        for g in &ideal.relations {
            for u in &multipliers {
                for w in &multipliers {
                    let mut row = vec![field.zero(); all_paths.len()];
                    let mut nonzero = false;
                    for (p, c) in g.terms() {
                        let Some(upw) = u.compose(p).and_then(|up| up.compose(w)) else {
                            continue;
                        };
                        if upw.len() >= n {
                            continue;
                        }
                        let col = path_index[&upw];
                        row[col] = &row[col] + c;
                        nonzero = true;
                    }
                    if nonzero && row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
        let ideal_matrix = ExactMatrix::from_rows(field, all_paths.len(), rows);
        let (echelon, pivots) = ideal_matrix.rref();

        let mut pivot_row = vec![None; all_paths.len()];
        for (r, &c) in pivots.iter().enumerate() {
            pivot_row[c] = Some(r);
        }
        let basis: Vec<Path> = all_paths
            .iter()
            .enumerate()
            .filter(|(c, _)| pivot_row[*c].is_none())
            .map(|(_, p)| p.clone())
            .collect();
        let basis_index: HashMap<Path, usize> =
            basis.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();

        let images = all_paths
            .iter()
            .enumerate()
            .map(|(c, p)| match pivot_row[c] {
                None => QuotientElement::basis(basis_index[p], field),
                Some(r) => {
                    let mut img = QuotientElement::zero();
                    for (j, x) in echelon.row(r).iter().enumerate() {
                        if j != c && !x.is_zero() {
                            debug_assert!(pivot_row[j].is_none());
                            img.add_scaled(&QuotientElement::basis(basis_index[&all_paths[j]], field), &-x);
                        }
                    }
                    img
                }
            })
            .collect();

        Ok(Presentation {
            quiver,
            field,
            ideal,
            all_paths,
            path_index,
            ideal_matrix,
            echelon,
            pivots,
            basis,
            basis_index,
            images,
            center: OnceLock::new(),
        })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ideal(&self) -> &IdealSpec {
        &self.ideal
    }

    pub fn nilpotency(&self) -> usize {
        self.ideal.nilpotency
    }

    pub fn relations(&self) -> &[AlgebraElement] {
        &self.ideal.relations
    }

    /// All paths of length `< N`, the columns of the ideal matrix.
    pub fn all_paths(&self) -> &[Path] {
        &self.all_paths
    }

    /// Spanning set of the ideal's image, one row per product `u·g·w`.
    pub fn ideal_matrix(&self) -> &ExactMatrix {
        &self.ideal_matrix
    }

    pub fn echelon(&self) -> &ExactMatrix {
        &self.echelon
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis(&self) -> &[Path] {
        &self.basis
    }

    pub fn basis_index(&self, p: &Path) -> Option<usize> {
        self.basis_index.get(p).copied()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn reduce_path(&self, p: &Path) -> QuotientElement {
        if p.len() >= self.nilpotency() {
            return QuotientElement::zero();
        }
        self.images[self.path_index[p]].clone()
    }

    /// Reduction table entry of a pivot path (its expression in the basis).
    pub fn reduction_of(&self, p: &Path) -> Option<&QuotientElement> {
        let idx = *self.path_index.get(p)?;
        if self.basis_index.contains_key(p) {
            None
        } else {
            Some(&self.images[idx])
        }
    }

    pub fn reduce(&self, e: &AlgebraElement) -> QuotientElement {
        let mut out = QuotientElement::zero();
        for (p, c) in e.terms() {
            if p.len() < self.nilpotency() {
                out.add_scaled(&self.images[self.path_index[p]], c);
            }
        }
        out
    }

    pub fn basis_element(&self, i: usize) -> QuotientElement {
        QuotientElement::basis(i, self.field)
    }

    /// Class of a path known to be in the basis, or its reduction otherwise.
    pub fn class_of(&self, p: &Path) -> QuotientElement {
        self.reduce_path(p)
    }

    pub fn identity(&self) -> QuotientElement {
        let mut e = QuotientElement::zero();
        for v in self.quiver.vertices() {
            e.add_scaled(&self.reduce_path(&Path::trivial(v)), &self.field.one());
        }
        e
    }

    pub fn multiply(&self, x: &QuotientElement, y: &QuotientElement) -> QuotientElement {
        let mut out = QuotientElement::zero();
        for (i, a) in x.terms() {
            for (j, b) in y.terms() {
                if let Some(p) = self.basis[i].compose(&self.basis[j]) {
                    if p.len() < self.nilpotency() {
                        out.add_scaled(&self.images[self.path_index[&p]], &(a * b));
                    }
                }
            }
        }
        out
    }

    /// `reduce(p)·x` without materializing the reduction of long paths.
    pub fn left_mul_path(&self, p: &Path, x: &QuotientElement) -> QuotientElement {
        self.multiply(&self.reduce_path(p), x)
    }

    /// Vertex and arrow classes, the algebra generators.
    pub fn generators(&self) -> Vec<Path> {
        self.quiver
            .vertices()
            .map(Path::trivial)
            .chain(self.quiver.arrow_ids().map(|a| self.quiver.arrow_path(a)))
            .collect()
    }

    /// Basis of the center `Z(kΓ/I)`.
    pub fn center(&self) -> &[QuotientElement] {
        self.center.get_or_init(|| self.compute_center())
    }

    fn compute_center(&self) -> Vec<QuotientElement> {
        let dim = self.dim();
        let mut reducer = SparseRowReducer::new(self.field, dim);
        for g in self.generators() {
            let gq = self.reduce_path(&g);
            // rows[k][j] = coefficient of basis k in [b_j, g]
            let mut rows: BTreeMap<usize, SparseRow> = BTreeMap::new();
            for j in 0..dim {
                let bj = self.basis_element(j);
                let comm = &self.multiply(&bj, &gq) - &self.multiply(&gq, &bj);
                for (k, c) in comm.terms() {
                    rows.entry(k).or_default().insert(j, c.clone());
                }
            }
            for row in rows.into_values() {
                reducer.insert(row);
            }
        }
        reducer
            .nullspace()
            .iter()
            .map(|v| QuotientElement::from_coords(v))
            .collect()
    }

    pub fn classify(&self) -> Classification {
        let (cyclic, acyclic): (Vec<usize>, Vec<usize>) =
            (0..self.dim()).partition(|&i| self.basis[i].is_cycle());
        let is_acyclic = cyclic.iter().all(|&i| self.basis[i].is_trivial());
        Classification {
            acyclic_part: acyclic,
            cyclic_part: cyclic,
            is_acyclic,
        }
    }

    /// Syntactic: every relation is a single path.
    pub fn is_monomial(&self) -> bool {
        self.ideal.relations.iter().all(|g| g.is_single_path())
    }

    pub fn path_in_ideal(&self, p: &Path) -> bool {
        self.reduce_path(p).is_zero()
    }

    /// Complete monomial: for parallel paths `p ∥ p'`, `p ∈ I` forces `p' ∈ I`.
    pub fn is_complete_monomial(&self) -> Result<bool, AlgebraError> {
        if !self.is_monomial() {
            return Err(AlgebraError::NotMonomial);
        }
        let n = self.nilpotency();
        let (inside, outside): (Vec<&Path>, Vec<&Path>) =
            self.all_paths.iter().partition(|p| self.path_in_ideal(p));
        for p in &outside {
            if inside.iter().any(|q| parallel(p, q)) {
                return Ok(false);
            }
            // Every path of length >= N lies in I.
            if self.quiver.has_walk_of_length_at_least(p.tail(), p.head(), n) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `Some(N)` when `I = R^N`, i.e. there are no relations.
    pub fn is_truncated(&self) -> Option<usize> {
        self.ideal.relations.is_empty().then_some(self.nilpotency())
    }

    pub fn format_path(&self, p: &Path) -> String {
        p.display(&self.quiver).to_string()
    }

    pub fn format_basis(&self, i: usize) -> String {
        self.format_path(&self.basis[i])
    }

    pub fn format_element(&self, x: &QuotientElement) -> String {
        format_terms(x.terms().map(|(i, c)| (c, self.format_basis(i))))
    }

    pub fn vertex_class(&self, v: VertexId) -> usize {
        self.basis_index[&Path::trivial(v)]
    }
}
