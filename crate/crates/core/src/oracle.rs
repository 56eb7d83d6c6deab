//! Brute-force derivation spaces straight from the Leibniz rule.
//!
//! Unknowns are the coordinates of `D(g)` over the quotient basis for every
//! generator `g` (vertices first, then arrows), so unknown `g·dim + j` is the
//! coefficient of basis class `j` in `D(g)`. This layout matches
//! [`crate::derivation::DerivationValues::flatten`]. Nothing here uses the
//! standard basis; the comparison helpers at the end do.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{AlgebraElement, IdealSpec, Presentation, QuotientElement};
use crate::derivation::{f2_subspace, standard_basis};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{SparseRow, SparseRowReducer};
use crate::quiver::{parallel, Path, Quiver};

/// A homogeneous linear system in the derivation unknowns, kept in reduced
/// form as rows arrive.
#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    reducer: SparseRowReducer,
    rows: usize,
}

impl ConstraintSystem {
    fn new(field: FieldSpec, unknowns: usize) -> Self {
        ConstraintSystem {
            reducer: SparseRowReducer::new(field, unknowns),
            rows: 0,
        }
    }

    fn push(&mut self, row: SparseRow) {
        self.rows += 1;
        self.reducer.insert(row);
    }

    pub fn unknowns(&self) -> usize {
        self.reducer.cols()
    }

    /// Number of constraint rows added, including dependent ones.
    pub fn row_count(&self) -> usize {
        self.rows
    }

    pub fn rank(&self) -> usize {
        self.reducer.rank()
    }

    pub fn nullity(&self) -> usize {
        self.reducer.nullity()
    }

    /// True when the assignment `v` of all unknowns satisfies every constraint.
    pub fn is_solution(&self, v: &[Scalar]) -> bool {
        v.len() == self.unknowns() && self.reducer.annihilates(v)
    }

    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        self.reducer.nullspace()
    }
}

/// A quotient element whose coefficients are linear forms in the unknowns.
type Symbolic = BTreeMap<usize, SparseRow>;

fn add_form(acc: &mut SparseRow, form: &SparseRow, c: &Scalar) {
    for (&u, x) in form {
        let delta = x * c;
        let updated = match acc.get(&u) {
            Some(old) => old + &delta,
            None => delta,
        };
        if updated.is_zero() {
            acc.remove(&u);
        } else {
            acc.insert(u, updated);
        }
    }
}

fn add_symbolic(acc: &mut Symbolic, x: &Symbolic, c: &Scalar) {
    for (&k, form) in x {
        add_form(acc.entry(k).or_default(), form, c);
    }
}

struct Builder<'a> {
    p: &'a Presentation,
    dim: usize,
    one: Scalar,
}

impl<'a> Builder<'a> {
    fn new(p: &'a Presentation) -> Self {
        Builder {
            p,
            dim: p.dim(),
            one: p.field().one(),
        }
    }

    fn generator_index(&self, g: &Path) -> usize {
        match g.arrows() {
            [] => g.tail().0,
            [a] => self.p.quiver().vertex_count() + a.0,
            _ => unreachable!("generators have length at most 1"),
        }
    }

    fn unknown(&self, g: &Path) -> Symbolic {
        let base = self.generator_index(g) * self.dim;
        (0..self.dim)
            .map(|j| (j, SparseRow::from([(base + j, self.one.clone())])))
            .collect()
    }

    fn times(&self, x: &Symbolic, y: &QuotientElement, left: bool) -> Symbolic {
        let mut out = Symbolic::new();
        for (&k, form) in x {
            let bk = self.p.basis_element(k);
            let prod = if left { self.p.multiply(y, &bk) } else { self.p.multiply(&bk, y) };
            for (m, c) in prod.terms() {
                add_form(out.entry(m).or_default(), form, c);
            }
        }
        out
    }

    /// `D(p₁⋯p_l) = Σ p₁⋯p_{i−1}·D(p_i)·p_{i+1}⋯p_l` in the unknowns.
    fn expand(&self, path: &Path) -> Symbolic {
        if path.is_trivial() {
            return self.unknown(path);
        }
        let q = self.p.quiver();
        let l = path.len();
        let mut out = Symbolic::new();
        for i in 0..l {
            let mut term = self.unknown(&path.subpath(q, i, i + 1));
            if i > 0 {
                term = self.times(&term, &self.p.reduce_path(&path.subpath(q, 0, i)), true);
            }
            if i + 1 < l {
                term = self.times(&term, &self.p.reduce_path(&path.subpath(q, i + 1, l)), false);
            }
            add_symbolic(&mut out, &term, &self.one);
        }
        out
    }

    fn expand_element(&self, e: &AlgebraElement) -> Symbolic {
        let mut out = Symbolic::new();
        for (path, c) in e.terms() {
            add_symbolic(&mut out, &self.expand(path), c);
        }
        out
    }

    fn push_zero(sys: &mut ConstraintSystem, x: Symbolic) {
        for form in x.into_values() {
            if !form.is_empty() {
                sys.push(form);
            }
        }
    }

    /// `D(xy) = D(x)·y + x·D(y)` for all generators `x, y` whose product is a
    /// generator or zero.
    fn diff_system(&self) -> ConstraintSystem {
        let p = self.p;
        let gens = p.generators();
        let unknowns = gens.len() * self.dim;
        let mut sys = ConstraintSystem::new(p.field(), unknowns);
        let minus = -&self.one;
        for x in &gens {
            for y in &gens {
                let mut row = Symbolic::new();
                match x.compose(y) {
                    Some(z) if z.len() > 1 => continue,
                    Some(z) => add_symbolic(&mut row, &self.unknown(&z), &self.one),
                    None => {}
                }
                add_symbolic(&mut row, &self.times(&self.unknown(x), &p.reduce_path(y), false), &minus);
                add_symbolic(&mut row, &self.times(&self.unknown(y), &p.reduce_path(x), true), &minus);
                Self::push_zero(&mut sys, row);
            }
        }
        sys
    }

    /// Adds `D(g) = 0` for the relations and every path of length `N`.
    fn quotient_system(&self) -> ConstraintSystem {
        let mut sys = self.diff_system();
        for r in self.p.relations() {
            Self::push_zero(&mut sys, self.expand_element(r));
        }
        for path in self.p.quiver().paths_of_length(self.p.nilpotency()) {
            Self::push_zero(&mut sys, self.expand(&path));
        }
        sys
    }
}

/// Constraints whose solutions are the derivations `kΓ → kΓ/I`.
pub fn diff_constraints(p: &Presentation) -> ConstraintSystem {
    Builder::new(p).diff_system()
}

/// Constraints whose solutions are the derivations vanishing on `I`, that is
/// the derivations of `kΓ/I`.
pub fn quotient_constraints(p: &Presentation) -> ConstraintSystem {
    Builder::new(p).quotient_system()
}

pub fn oracle_diff_dim(p: &Presentation) -> usize {
    diff_constraints(p).nullity()
}

pub fn oracle_quotient_diff_dim(p: &Presentation) -> usize {
    quotient_constraints(p).nullity()
}

/// Rank of `s ↦ (x ↦ s·x − x·s)` evaluated on vertices and arrows.
pub fn inner_rank(p: &Presentation) -> usize {
    let gens: Vec<QuotientElement> = p.generators().iter().map(|g| p.reduce_path(g)).collect();
    let dim = p.dim();
    let mut reducer = SparseRowReducer::new(p.field(), gens.len() * dim);
    for s in 0..dim {
        let bs = p.basis_element(s);
        let mut row = SparseRow::new();
        for (gi, g) in gens.iter().enumerate() {
            let comm = &p.multiply(&bs, g) - &p.multiply(g, &bs);
            for (k, c) in comm.terms() {
                row.insert(gi * dim + k, c.clone());
            }
        }
        reducer.insert(row);
    }
    reducer.rank()
}

pub fn oracle_h1(p: &Presentation) -> usize {
    oracle_diff_dim(p) - inner_rank(p)
}

pub fn oracle_hh1(p: &Presentation) -> usize {
    oracle_quotient_diff_dim(p) - inner_rank(p)
}

/// Bounds for random instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomConfig {
    pub max_vertices: usize,
    pub max_arrows: usize,
    pub nilpotency: (usize, usize),
    pub max_relations: usize,
    pub field: FieldSpec,
}

impl Default for RandomConfig {
    fn default() -> Self {
        RandomConfig {
            max_vertices: 5,
            max_arrows: 8,
            nilpotency: (2, 3),
            max_relations: 2,
            field: FieldSpec::Rationals,
        }
    }
}

fn random_coeff(rng: &mut impl Rng, field: FieldSpec) -> Scalar {
    let c: i64 = rng.gen_range(1..=3);
    field.from_i64(if rng.gen_bool(0.5) { c } else { -c })
}

/// A random connected quiver with random relations made of parallel paths
/// of length in `[2, N)`.
pub fn random_presentation(rng: &mut impl Rng, cfg: &RandomConfig) -> Presentation {
    let n_vertices = rng.gen_range(1..=cfg.max_vertices);
    let names: Vec<String> = (0..n_vertices).map(|i| format!("v{i}")).collect();
    let mut ends: Vec<(usize, usize)> = Vec::new();
    // spanning tree with random orientation keeps the quiver connected
    for v in 1..n_vertices {
        let u = rng.gen_range(0..v);
        ends.push(if rng.gen_bool(0.5) { (u, v) } else { (v, u) });
    }
    let min_arrows = ends.len().max(1);
    let total = rng.gen_range(min_arrows..=cfg.max_arrows.max(min_arrows));
    while ends.len() < total {
        ends.push((rng.gen_range(0..n_vertices), rng.gen_range(0..n_vertices)));
    }
    let arrows: Vec<(String, String, String)> = ends
        .iter()
        .enumerate()
        .map(|(i, &(t, h))| (format!("a{i}"), names[t].clone(), names[h].clone()))
        .collect();
    let quiver = Quiver::new(&names, &arrows).expect("generated quiver is valid");

    let nilpotency = rng.gen_range(cfg.nilpotency.0..=cfg.nilpotency.1);
    let mut relations = Vec::new();
    let candidates: Vec<Path> = (2..nilpotency).flat_map(|l| quiver.paths_of_length(l)).collect();
    if !candidates.is_empty() {
        for _ in 0..rng.gen_range(0..=cfg.max_relations) {
            let lead = candidates.choose(rng).expect("nonempty").clone();
            let partners: Vec<&Path> = candidates
                .iter()
                .filter(|c| **c != lead && c.len() == lead.len() && parallel(c, &lead))
                .collect();
            let mut terms = vec![(random_coeff(rng, cfg.field), lead)];
            if let Some(other) = partners.choose(rng) {
                terms.push((random_coeff(rng, cfg.field), (*other).clone()));
            }
            relations.push(AlgebraElement::from_terms(cfg.field, terms));
        }
    }
    Presentation::build(quiver, IdealSpec { relations, nilpotency }, cfg.field)
        .expect("generated relations lie in the square of the arrow ideal")
}

/// `count` instances from one seeded stream; the same seed replays them.
pub fn random_presentations(seed: u64, count: usize, cfg: &RandomConfig) -> Vec<Presentation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_presentation(&mut rng, cfg)).collect()
}

/// Formula values next to oracle values for one presentation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    pub standard_basis_size: usize,
    pub oracle_diff: usize,
    pub formula_h1: usize,
    pub oracle_h1: usize,
    pub formula_hh1: usize,
    pub oracle_hh1: usize,
}

impl CrossCheck {
    pub fn agrees(&self) -> bool {
        self.standard_basis_size == self.oracle_diff
            && self.formula_h1 == self.oracle_h1
            && self.formula_hh1 == self.oracle_hh1
    }
}

pub fn cross_check(p: &Presentation) -> CrossCheck {
    let s = standard_basis(p);
    let inner = inner_rank(p);
    let oracle_diff = oracle_diff_dim(p);
    CrossCheck {
        standard_basis_size: s.dim_diff,
        oracle_diff,
        formula_h1: s.dim_h1,
        oracle_h1: oracle_diff - inner,
        formula_hh1: f2_subspace(p).dim_hh1,
        oracle_hh1: oracle_quotient_diff_dim(p) - inner,
    }
}
