//! Report objects. Each one serializes to JSON and renders as text, so the
//! two output modes always carry the same numbers.

use std::fmt;

use serde::Serialize;

use crate::algebra::{format_terms, Presentation};
use crate::derivation::{f2_subspace, standard_basis};
use crate::oracle::CrossCheck;
use crate::planar::{face_coefficients, h1_basis_planar, hh1_basis_planar, FaceSet};

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalyzeReport {
    pub field: String,
    pub vertices: usize,
    pub arrows: usize,
    pub nilpotency: usize,
    pub relations: usize,
    pub dim_algebra: usize,
    pub basis: Vec<String>,
    pub q_a: usize,
    pub q_c: usize,
    pub dim_center: usize,
    pub b1: usize,
    pub b2: usize,
    pub dim_diff: usize,
    pub dim_inner: usize,
    pub dim_h1: usize,
    pub dim_f2: usize,
    pub dim_hh1: usize,
    pub acyclic_algebra: bool,
    pub acyclic_quiver: bool,
    pub monomial: bool,
    pub complete_monomial: bool,
    pub truncated: Option<usize>,
    pub notes: Vec<String>,
}

impl AnalyzeReport {
    pub fn new(p: &Presentation) -> Self {
        let s = standard_basis(p);
        let f2 = f2_subspace(p);
        let cls = p.classify();
        let mut notes = Vec::new();
        if p.field().characteristic() != 0 {
            notes.push(format!(
                "dimension formulas evaluated over {}; their derivation assumes characteristic 0",
                p.field()
            ));
        }
        AnalyzeReport {
            field: p.field().to_string(),
            vertices: p.quiver().vertex_count(),
            arrows: p.quiver().arrow_count(),
            nilpotency: p.nilpotency(),
            relations: p.relations().len(),
            dim_algebra: p.dim(),
            basis: (0..p.dim()).map(|i| p.format_basis(i)).collect(),
            q_a: cls.acyclic_part.len(),
            q_c: cls.cyclic_part.len(),
            dim_center: s.dim_center,
            b1: s.b1.len(),
            b2: s.b2.len(),
            dim_diff: s.dim_diff,
            dim_inner: s.dim_inner,
            dim_h1: s.dim_h1,
            dim_f2: f2.dim_f2,
            dim_hh1: f2.dim_hh1,
            acyclic_algebra: cls.is_acyclic,
            acyclic_quiver: p.quiver().is_acyclic(),
            monomial: p.is_monomial(),
            complete_monomial: p.is_complete_monomial().unwrap_or(false),
            truncated: p.is_truncated(),
            notes,
        }
    }
}

impl fmt::Display for AnalyzeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "field: {}", self.field)?;
        writeln!(
            f,
            "quiver: |V| = {}, |E| = {}, N = {}, relations: {}",
            self.vertices, self.arrows, self.nilpotency, self.relations
        )?;
        writeln!(f, "dim A = {} (|Q_A| = {}, |Q_C| = {})", self.dim_algebra, self.q_a, self.q_c)?;
        writeln!(f, "basis: {}", self.basis.join(", "))?;
        writeln!(f, "dim Z = {}", self.dim_center)?;
        writeln!(f, "|B1| = {}, |B2| = {}", self.b1, self.b2)?;
        writeln!(f, "dim Diff = {}, dim Inner = {}", self.dim_diff, self.dim_inner)?;
        writeln!(
            f,
            "dim H1 = {} (|B2| + dim Z - |Q_C| = {} + {} - {})",
            self.dim_h1, self.b2, self.dim_center, self.q_c
        )?;
        writeln!(f, "dim F2 = {}", self.dim_f2)?;
        writeln!(
            f,
            "dim HH1 = {} (dim F2 + dim Z - |Q_C| = {} + {} - {})",
            self.dim_hh1, self.dim_f2, self.dim_center, self.q_c
        )?;
        writeln!(
            f,
            "acyclic algebra: {}, acyclic quiver: {}, monomial: {}, complete monomial: {}, truncated: {}",
            yes_no(self.acyclic_algebra),
            yes_no(self.acyclic_quiver),
            yes_no(self.monomial),
            yes_no(self.complete_monomial),
            self.truncated.map_or("no".to_string(), |n| format!("yes (N = {n})"))
        )?;
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    Diff,
    H1,
    Hh1,
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BasisKind::Diff => "Diff",
            BasisKind::H1 => "H1",
            BasisKind::Hh1 => "HH1",
        })
    }
}

/// An explicit basis, or the dimension alone when no explicit basis is
/// available; `unavailable` then says why.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisReport {
    pub which: BasisKind,
    pub dimension: usize,
    pub operators: Option<Vec<String>>,
    pub f2_vectors: Vec<String>,
    pub unavailable: Option<String>,
}

impl BasisReport {
    /// `faces` is the traced embedding, when the input carried one.
    pub fn new(p: &Presentation, faces: Option<&FaceSet>, which: BasisKind) -> Self {
        let fmt_ops = |ops: Vec<crate::derivation::BasisOperator>| ops.iter().map(|op| op.format(p)).collect();
        match which {
            BasisKind::Diff => {
                let s = standard_basis(p);
                BasisReport {
                    which,
                    dimension: s.dim_diff,
                    operators: Some(fmt_ops(s.b1.into_iter().chain(s.b2).collect())),
                    f2_vectors: Vec::new(),
                    unavailable: None,
                }
            }
            BasisKind::H1 => {
                let dimension = standard_basis(p).dim_h1;
                let result = match faces {
                    None => Err("no rotation system given".to_string()),
                    Some(fs) => h1_basis_planar(p, fs).map_err(|e| e.to_string()),
                };
                match result {
                    Ok(ops) => BasisReport {
                        which,
                        dimension,
                        operators: Some(fmt_ops(ops)),
                        f2_vectors: Vec::new(),
                        unavailable: None,
                    },
                    Err(reason) => BasisReport {
                        which,
                        dimension,
                        operators: None,
                        f2_vectors: Vec::new(),
                        unavailable: Some(reason),
                    },
                }
            }
            BasisKind::Hh1 => {
                let f2 = f2_subspace(p);
                let result = match faces {
                    None => Err("no rotation system given".to_string()),
                    Some(fs) => hh1_basis_planar(p, fs).map_err(|e| e.to_string()),
                };
                match result {
                    Ok(ops) => BasisReport {
                        which,
                        dimension: f2.dim_hh1,
                        operators: Some(fmt_ops(ops)),
                        f2_vectors: Vec::new(),
                        unavailable: None,
                    },
                    Err(reason) => BasisReport {
                        which,
                        dimension: f2.dim_hh1,
                        operators: None,
                        f2_vectors: f2.format_vectors(p),
                        unavailable: Some(reason),
                    },
                }
            }
        }
    }
}

impl fmt::Display for BasisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dim {} = {}", self.which, self.dimension)?;
        if let Some(ops) = &self.operators {
            for op in ops {
                writeln!(f, "  {op}")?;
            }
        }
        if let Some(reason) = &self.unavailable {
            writeln!(f, "no explicit basis: {reason}")?;
        }
        if !self.f2_vectors.is_empty() {
            writeln!(f, "F2 basis:")?;
            for v in &self.f2_vectors {
                writeln!(f, "  {v}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceEntry {
    pub index: usize,
    pub outer: bool,
    pub darts: Vec<String>,
    /// Signed arrow operators, `D(r)` standing for `r ↦ r`.
    pub operator: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FacesReport {
    pub vertices: usize,
    pub arrows: usize,
    pub faces: Vec<FaceEntry>,
    pub euler_characteristic: i64,
}

impl FacesReport {
    pub fn new(p: &Presentation, fs: &FaceSet) -> Self {
        let q = p.quiver();
        let faces = fs
            .faces
            .iter()
            .enumerate()
            .map(|(index, face)| {
                let coeffs = face_coefficients(q, p.field(), face);
                FaceEntry {
                    index,
                    outer: index == fs.outer,
                    darts: face.iter().map(|d| d.format(q)).collect(),
                    operator: format_terms(
                        coeffs
                            .iter()
                            .zip(q.arrow_ids())
                            .filter(|(c, _)| !c.is_zero())
                            .map(|(c, a)| (c, format!("D({})", q.arrow_name(a)))),
                    ),
                }
            })
            .collect();
        FacesReport {
            vertices: q.vertex_count(),
            arrows: q.arrow_count(),
            euler_characteristic: q.vertex_count() as i64 - q.arrow_count() as i64 + fs.faces.len() as i64,
            faces,
        }
    }
}

impl fmt::Display for FacesReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "|V| - |E| + |F| = {} - {} + {} = {}",
            self.vertices,
            self.arrows,
            self.faces.len(),
            self.euler_characteristic
        )?;
        for face in &self.faces {
            writeln!(
                f,
                "face {}{}: {}  operator: {}",
                face.index,
                if face.outer { " (outer)" } else { "" },
                face.darts.join(" "),
                face.operator
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleEntry {
    pub label: String,
    #[serde(flatten)]
    pub check: CrossCheck,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub seed: Option<u64>,
    pub entries: Vec<OracleEntry>,
    pub all_agree: bool,
}

impl OracleReport {
    pub fn new(seed: Option<u64>, checks: Vec<(String, CrossCheck)>) -> Self {
        let entries: Vec<OracleEntry> = checks
            .into_iter()
            .map(|(label, check)| OracleEntry {
                agrees: check.agrees(),
                label,
                check,
            })
            .collect();
        OracleReport {
            seed,
            all_agree: entries.iter().all(|e| e.agrees),
            entries,
        }
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(seed) = self.seed {
            writeln!(f, "seed: {seed}")?;
        }
        for e in &self.entries {
            let c = &e.check;
            writeln!(
                f,
                "{} {}: Diff {}/{}  H1 {}/{}  HH1 {}/{}  (formula/oracle)",
                if e.agrees { "ok  " } else { "FAIL" },
                e.label,
                c.standard_basis_size,
                c.oracle_diff,
                c.formula_h1,
                c.oracle_h1,
                c.formula_hh1,
                c.oracle_hh1
            )?;
        }
        let failed = self.entries.iter().filter(|e| !e.agrees).count();
        writeln!(f, "{} instances, {} mismatches", self.entries.len(), failed)
    }
}
