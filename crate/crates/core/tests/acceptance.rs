//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quiverhh::algebra::{IdealSpec, Presentation};
use quiverhh::derivation::{
    apply, cycle_identity_check, evaluation_vector, extend_derivation, f2_subspace, standard_basis,
    truncated_diff_basis, vertex_operator, BasisOperator, DerivationConstraint, DerivationValues,
};
use quiverhh::field::{FieldSpec, Scalar};
use quiverhh::fixtures::{self, A2, ALL, KRONECKER2, LOOP2, SQUARE};
use quiverhh::linalg::{rank_of_vectors, SparseRowReducer};
use quiverhh::oracle::{
    cross_check, diff_constraints, oracle_diff_dim, oracle_hh1, random_presentations, RandomConfig,
};
use quiverhh::planar::{face_coefficients, face_operators, h1_basis_planar, PlanarError};
use quiverhh::quiver::{Path, Quiver};

const RANDOM_SEED: u64 = 0x5eed_2024;
const RANDOM_COUNT: usize = 200;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn instances() -> Vec<(String, Presentation)> {
    let mut out: Vec<(String, Presentation)> =
        ALL.iter().map(|(name, src)| (name.to_string(), fixtures::presentation(src))).collect();
    let random = random_presentations(RANDOM_SEED, RANDOM_COUNT, &RandomConfig::default());
    out.extend(random.into_iter().enumerate().map(|(i, p)| (format!("random #{i}"), p)));
    out
}

fn square_example() -> Outcome {
    let start = Instant::now();
    let p = fixtures::presentation(SQUARE);
    let s = standard_basis(&p);
    let f2 = f2_subspace(&p);
    let got = (s.b2.len(), s.dim_center, s.q_c, s.dim_h1, f2.dim_f2, f2.dim_hh1);
    ensure!(got == (4, 1, 4, 1, 3, 0), "(|B2|, dim Z, |Q_C|, H1, F2, HH1) = {got:?}");
    // F2 is cut out by the single equation a + b - c - d = 0
    let f = p.field();
    let eq: Vec<Scalar> = [1, 1, -1, -1].iter().map(|&x| f.from_i64(x)).collect();
    for v in &f2.vectors {
        let dot = v.iter().zip(&eq).fold(f.zero(), |acc, (x, y)| &acc + &(x * y));
        ensure!(dot.is_zero(), "F2 vector {v:?} violates a + b - c - d = 0");
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("|B2|=4 dimZ=1 |Q_C|=4 H1=1 F2=3 HH1=0 in {elapsed:.2?}"))
}

fn oracle_equivalence(instances: &[(String, Presentation)]) -> Outcome {
    let start = Instant::now();
    for (name, p) in instances {
        let c = cross_check(p);
        ensure!(
            c.formula_h1 == c.oracle_h1 && c.formula_hh1 == c.oracle_hh1,
            "{name} (seed {RANDOM_SEED}): {c:?}"
        );
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    Ok(format!("{} instances agree in {elapsed:.2?}", instances.len()))
}

fn standard_basis_rank(instances: &[(String, Presentation)]) -> Outcome {
    for (name, p) in instances {
        let s = standard_basis(p);
        let len = (p.quiver().vertex_count() + p.quiver().arrow_count()) * p.dim();
        let mut reducer = SparseRowReducer::new(p.field(), len);
        for op in s.b1.iter().chain(&s.b2) {
            reducer.insert_dense(&evaluation_vector(p, op).map_err(|e| e.to_string())?);
        }
        let size = s.b1.len() + s.b2.len();
        ensure!(reducer.rank() == size, "{name}: rank {} < {size}", reducer.rank());
        let oracle = oracle_diff_dim(p);
        ensure!(oracle == size, "{name}: oracle {oracle} != |B1|+|B2| = {size}");
    }
    Ok(format!("full rank and equal to the oracle on {} instances", instances.len()))
}

fn leibniz() -> Outcome {
    let mut checked = 0usize;
    for (name, src) in ALL {
        let (p, faces) = fixtures::embedded(src);
        let s = standard_basis(&p);
        let mut ops: Vec<BasisOperator> = s.b1.into_iter().chain(s.b2).collect();
        ops.extend(p.quiver().vertices().map(BasisOperator::Vertex));
        ops.extend(face_operators(&faces));
        let n = p.nilpotency();
        let paths = p.quiver().enumerate_paths(n - 1);
        for op in &ops {
            for u in &paths {
                for v in &paths {
                    let Some(uv) = u.compose(v) else { continue };
                    if uv.len() >= n {
                        continue;
                    }
                    let lhs = apply(&p, op, &uv).map_err(|e| e.to_string())?;
                    let du = apply(&p, op, u).map_err(|e| e.to_string())?;
                    let dv = apply(&p, op, v).map_err(|e| e.to_string())?;
                    let rhs = &p.multiply(&du, &p.reduce_path(v)) + &p.multiply(&p.reduce_path(u), &dv);
                    ensure!(
                        lhs == rhs,
                        "{name}: {} on {}·{}",
                        op.format(&p),
                        p.format_path(u),
                        p.format_path(v)
                    );
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} operator/pair checks"))
}

fn planar_suite() -> Outcome {
    let mut lines = Vec::new();
    for (name, src) in ALL {
        let start = Instant::now();
        let (p, fs) = fixtures::embedded(src);
        let q = p.quiver();
        let f = p.field();
        let (nv, ne, nf) = (q.vertex_count(), q.arrow_count(), fs.faces.len());
        ensure!(nv + nf == ne + 2, "{name}: Euler {nv} - {ne} + {nf}");

        let mut total = vec![f.zero(); ne];
        for face in &fs.faces {
            for (t, c) in total.iter_mut().zip(face_coefficients(q, f, face)) {
                *t = &*t + &c;
            }
        }
        ensure!(total.iter().all(Scalar::is_zero), "{name}: faces do not sum to zero");

        let vertex_ops: Vec<Vec<Scalar>> = q.vertices().map(|v| vertex_operator(&p, v)).collect();
        let face_ops: Vec<Vec<Scalar>> = fs.bounded().map(|face| face_coefficients(q, f, face)).collect();
        let rv = rank_of_vectors(f, ne, &vertex_ops);
        let rf = rank_of_vectors(f, ne, &face_ops);
        let joint: Vec<Vec<Scalar>> = vertex_ops.iter().chain(&face_ops).cloned().collect();
        let rj = rank_of_vectors(f, ne, &joint);
        ensure!(
            rv == nv - 1 && rf == nf - 1 && rj == ne,
            "{name}: ranks vertex {rv}, face {rf}, joint {rj}"
        );

        match h1_basis_planar(&p, &fs) {
            Ok(basis) => {
                let h1 = standard_basis(&p).dim_h1;
                ensure!(basis.len() == h1, "{name}: planar basis {} != dim H1 {h1}", basis.len());
            }
            Err(PlanarError::NotAcyclic) => {
                ensure!(!p.classify().is_acyclic, "{name}: wrongly rejected");
            }
            Err(e) => return Err(format!("{name}: {e}")),
        }
        let elapsed = start.elapsed();
        ensure!(elapsed < Duration::from_secs(1), "{name}: took {elapsed:?}");
        lines.push(format!("{name} ok"));
    }
    Ok(lines.join(", "))
}

/// Every multiset of arrows `i -> j` with `i < j` over `n` vertices with at
/// most `max` arrows; topological labeling makes this cover every acyclic quiver.
fn acyclic_arrow_sets(n: usize, max: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    fn go(pairs: &[(usize, usize)], k: usize, left: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if k == pairs.len() {
            out.push(cur.clone());
            return;
        }
        for m in 0..=left {
            for _ in 0..m {
                cur.push(pairs[k]);
            }
            go(pairs, k + 1, left - m, cur, out);
            cur.truncate(cur.len() - m);
        }
    }
    go(&pairs, 0, max, &mut Vec::new(), &mut out);
    out
}

fn truncated_algebras() -> Outcome {
    let start = Instant::now();
    let mut count = 0usize;
    for nv in 1..=4 {
        let names: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
        for set in acyclic_arrow_sets(nv, 6) {
            let arrows: Vec<(String, String, String)> = set
                .iter()
                .enumerate()
                .map(|(k, &(i, j))| (format!("a{k}"), names[i].clone(), names[j].clone()))
                .collect();
            let Ok(q) = Quiver::new(&names, &arrows) else { continue };
            for n in [2, 3] {
                let p = Presentation::build(q.clone(), IdealSpec::truncated(n), FieldSpec::Rationals)
                    .map_err(|e| e.to_string())?;
                let t = truncated_diff_basis(&p).map_err(|e| e.to_string())?;
                let from_basis = t.b2.len() + t.dim_center - t.q_c;
                let formula = f2_subspace(&p).dim_hh1;
                let oracle = oracle_hh1(&p);
                ensure!(
                    from_basis == formula && formula == oracle,
                    "{arrows:?}, n = {n}: basis {from_basis}, formula {formula}, oracle {oracle}"
                );
                count += 1;
            }
        }
    }
    let loop_hh1 = oracle_hh1(&fixtures::presentation(LOOP2));
    ensure!(loop_hh1 == 1, "LOOP2 oracle HH1 = {loop_hh1}");
    Ok(format!("{count} truncated acyclic algebras, LOOP2 HH1 = 1, in {:.2?}", start.elapsed()))
}

fn cycle_identity() -> Outcome {
    let mut cases: Vec<(String, Presentation)> = vec![("loop2".into(), fixtures::presentation(LOOP2))];
    let cyclic: Vec<Presentation> = random_presentations(RANDOM_SEED ^ 7, 120, &RandomConfig::default())
        .into_iter()
        .filter(|p| !p.quiver().is_acyclic())
        .take(40)
        .collect();
    ensure!(cyclic.len() >= 20, "only {} cyclic instances generated", cyclic.len());
    cases.extend(cyclic.into_iter().enumerate().map(|(i, p)| (format!("cyclic #{i}"), p)));
    let mut checked = 0usize;
    for (name, p) in &cases {
        for c in p.quiver().enumerate_paths(p.nilpotency() - 1).into_iter().filter(Path::is_cycle) {
            let ok = cycle_identity_check(p, &c).map_err(|e| e.to_string())?;
            ensure!(ok, "{name}: identity fails for {}", p.format_path(&c));
            checked += 1;
        }
    }
    for (name, src) in ALL {
        let p = fixtures::presentation(src);
        let f = p.field();
        let mut sum = vec![f.zero(); p.quiver().arrow_count()];
        for v in p.quiver().vertices() {
            for (s, c) in sum.iter_mut().zip(vertex_operator(&p, v)) {
                *s = &*s + &c;
            }
            let as_vertex = evaluation_vector(&p, &BasisOperator::Vertex(v)).map_err(|e| e.to_string())?;
            let as_inner = evaluation_vector(&p, &BasisOperator::Inner(Path::trivial(v))).map_err(|e| e.to_string())?;
            ensure!(as_vertex == as_inner, "{name}: vertex operator at {v:?} is not inner by e_v");
        }
        ensure!(sum.iter().all(Scalar::is_zero), "{name}: vertex operators do not sum to zero");
    }
    Ok(format!("{checked} cycles in {} quivers, vertex sums vanish", cases.len()))
}

fn random_combination(rng: &mut ChaCha8Rng, basis: &[Vec<Scalar>], field: FieldSpec, len: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); len];
    for b in basis {
        let c = field.from_i64(rng.gen_range(-3..=3));
        for (x, y) in v.iter_mut().zip(b) {
            *x = &*x + &(&c * y);
        }
    }
    v
}

fn constraint_validator() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED);
    let fixtures_list: Vec<Presentation> = [SQUARE, A2, LOOP2, KRONECKER2].iter().map(|s| fixtures::presentation(s)).collect();
    let (mut accepted, mut rejected) = (0usize, 0usize);
    let mut named = std::collections::BTreeMap::<String, usize>::new();
    for i in 0..40 {
        let p = &fixtures_list[i % fixtures_list.len()];
        let f = p.field();
        let sys = diff_constraints(p);
        let n = sys.unknowns();
        let basis = sys.nullspace();
        let point = random_combination(&mut rng, &basis, f, n);
        ensure!(sys.is_solution(&point), "oracle nullspace vector is not a solution");
        if i < 20 {
            let dv = DerivationValues::from_flat(p, &point);
            if let Err(e) = extend_derivation(p, dv) {
                return Err(format!("valid point rejected: {e}"));
            }
            accepted += 1;
        } else {
            let breaking: Vec<usize> = (0..n)
                .filter(|&u| {
                    let mut e = vec![f.zero(); n];
                    e[u] = f.one();
                    !sys.is_solution(&e)
                })
                .collect();
            ensure!(!breaking.is_empty(), "no perturbation leaves the solution set");
            let u = breaking[rng.gen_range(0..breaking.len())];
            let mut c = 0;
            while c == 0 {
                c = rng.gen_range(-3..=3);
            }
            let mut bad = point.clone();
            bad[u] = &bad[u] + &f.from_i64(c);
            ensure!(!sys.is_solution(&bad), "perturbed point still solves the system");
            match extend_derivation(p, DerivationValues::from_flat(p, &bad)) {
                Ok(_) => return Err(format!("perturbed point accepted (unknown {u}, shift {c})")),
                Err(v) => {
                    ensure!(v.constraint != DerivationConstraint::Totality, "unexpected totality failure");
                    *named.entry(v.constraint.to_string()).or_default() += 1;
                    rejected += 1;
                }
            }
        }
    }
    // arbitrary points: accepted exactly when the oracle's system is satisfied
    for p in &fixtures_list {
        let sys = diff_constraints(p);
        let f = p.field();
        for _ in 0..50 {
            let v: Vec<Scalar> = (0..sys.unknowns())
                .map(|_| f.from_i64(if rng.gen_bool(0.2) { rng.gen_range(-2..=2) } else { 0 }))
                .collect();
            let ok = extend_derivation(p, DerivationValues::from_flat(p, &v)).is_ok();
            ensure!(ok == sys.is_solution(&v), "validator and oracle disagree on {v:?}");
        }
    }
    let names: Vec<String> = named.iter().map(|(k, n)| format!("{k} x{n}")).collect();
    Ok(format!("{accepted} accepted, {rejected} rejected ({})", names.join(", ")))
}

fn main() {
    let shared = instances();
    let criteria: Vec<Criterion> = vec![
        ("square example", Box::new(square_example)),
        ("oracle equivalence", Box::new(|| oracle_equivalence(&shared))),
        ("standard basis rank", Box::new(|| standard_basis_rank(&shared))),
        ("Leibniz property", Box::new(leibniz)),
        ("planar suite", Box::new(planar_suite)),
        ("truncated algebras", Box::new(truncated_algebras)),
        ("cycle identity", Box::new(cycle_identity)),
        ("constraint validator", Box::new(constraint_validator)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
