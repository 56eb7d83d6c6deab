//! Finite connected quivers and their paths.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArrowId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("a quiver needs at least one vertex")]
    Empty,
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate arrow id `{0}`")]
    DuplicateArrow(String),
    #[error("id `{0}` is used both as a vertex and as an arrow")]
    IdClash(String),
    #[error("arrow `{arrow}` refers to unknown vertex `{vertex}`")]
    UnknownVertex { arrow: String, vertex: String },
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("quiver is not connected (vertex `{0}` is unreachable from the first vertex)")]
    Disconnected(String),
    #[error("arrows `{0}` and `{1}` are not composable")]
    NotComposable(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub tail: VertexId,
    pub head: VertexId,
}

/// A finite connected quiver. Vertices and arrows are indexed in declaration
/// order; that order is the "id order" used to sort paths.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

/// A path: either the trivial path at a vertex or a nonempty sequence of
/// composable arrows. Arrows are composed left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    tail: VertexId,
    head: VertexId,
    arrows: Vec<ArrowId>,
}

impl Path {
    pub fn trivial(v: VertexId) -> Self {
        Path {
            tail: v,
            head: v,
            arrows: Vec::new(),
        }
    }

    pub fn tail(&self) -> VertexId {
        self.tail
    }

    pub fn head(&self) -> VertexId {
        self.head
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_trivial()
    }

    pub fn arrows(&self) -> &[ArrowId] {
        &self.arrows
    }

    /// Tail equals head (trivial paths included).
    pub fn is_cycle(&self) -> bool {
        self.tail == self.head
    }

    /// Concatenation `self · other`; `None` is the zero product of `kΓ`.
    pub fn compose(&self, other: &Path) -> Option<Path> {
        if self.head != other.tail {
            return None;
        }
        let mut arrows = Vec::with_capacity(self.len() + other.len());
        arrows.extend_from_slice(&self.arrows);
        arrows.extend_from_slice(&other.arrows);
        Some(Path {
            tail: self.tail,
            head: other.head,
            arrows,
        })
    }

    /// The subpath made of arrows `range`, or the trivial path at the
    /// appropriate vertex when the range is empty.
    pub fn subpath(&self, quiver: &Quiver, start: usize, end: usize) -> Path {
        if start >= end {
            let v = if start == 0 {
                self.tail
            } else {
                quiver.arrow(self.arrows[start - 1]).head
            };
            return Path::trivial(v);
        }
        let arrows = self.arrows[start..end].to_vec();
        Path {
            tail: quiver.arrow(arrows[0]).tail,
            head: quiver.arrow(arrows[arrows.len() - 1]).head,
            arrows,
        }
    }

    pub fn display<'a>(&'a self, quiver: &'a Quiver) -> PathDisplay<'a> {
        PathDisplay { path: self, quiver }
    }
}

/// Graded lexicographic: length first, then arrow ids, then (for trivial
/// paths) vertex id.
impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.arrows.cmp(&other.arrows))
            .then_with(|| self.tail.cmp(&other.tail))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub struct PathDisplay<'a> {
    path: &'a Path,
    quiver: &'a Quiver,
}

impl fmt::Display for PathDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_trivial() {
            return write!(f, "e[{}]", self.quiver.vertex_name(self.path.tail));
        }
        for (i, a) in self.path.arrows.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            f.write_str(self.quiver.arrow_name(*a))?;
        }
        Ok(())
    }
}

impl Quiver {
    /// Builds and validates a quiver from vertex names and `(arrow, tail, head)` triples.
    pub fn new<V, A>(vertices: &[V], arrows: &[(A, A, A)]) -> Result<Self, QuiverError>
    where
        V: AsRef<str>,
        A: AsRef<str>,
    {
        if vertices.is_empty() {
            return Err(QuiverError::Empty);
        }
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.as_ref().to_string(), i).is_some() {
                return Err(QuiverError::DuplicateVertex(v.as_ref().to_string()));
            }
        }
        let mut names = BTreeSet::new();
        let mut built = Vec::with_capacity(arrows.len());
        for (name, t, h) in arrows {
            let name = name.as_ref();
            if !names.insert(name.to_string()) {
                return Err(QuiverError::DuplicateArrow(name.to_string()));
            }
            if index.contains_key(name) {
                return Err(QuiverError::IdClash(name.to_string()));
            }
            let lookup = |v: &str| {
                index.get(v).copied().map(VertexId).ok_or_else(|| QuiverError::UnknownVertex {
                    arrow: name.to_string(),
                    vertex: v.to_string(),
                })
            };
            built.push(Arrow {
                name: name.to_string(),
                tail: lookup(t.as_ref())?,
                head: lookup(h.as_ref())?,
            });
        }
        let quiver = Quiver {
            vertices: vertices.iter().map(|v| v.as_ref().to_string()).collect(),
            arrows: built,
        };
        quiver.check_connected()?;
        Ok(quiver)
    }

    fn check_connected(&self) -> Result<(), QuiverError> {
        let n = self.vertices.len();
        let mut adj = vec![Vec::new(); n];
        for a in &self.arrows {
            adj[a.tail.0].push(a.head.0);
            adj[a.head.0].push(a.tail.0);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(i) => Err(QuiverError::Disconnected(self.vertices[i].clone())),
            None => Ok(()),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = VertexId> + Clone {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn arrow_ids(&self) -> impl ExactSizeIterator<Item = ArrowId> + Clone {
        (0..self.arrows.len()).map(ArrowId)
    }

    pub fn arrow(&self, a: ArrowId) -> &Arrow {
        &self.arrows[a.0]
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0]
    }

    pub fn arrow_name(&self, a: ArrowId) -> &str {
        &self.arrows[a.0].name
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v == name).map(VertexId)
    }

    pub fn arrow_by_name(&self, name: &str) -> Option<ArrowId> {
        self.arrows.iter().position(|a| a.name == name).map(ArrowId)
    }

    pub fn arrow_path(&self, a: ArrowId) -> Path {
        let arrow = self.arrow(a);
        Path {
            tail: arrow.tail,
            head: arrow.head,
            arrows: vec![a],
        }
    }

    /// The path through `arrows`, or `None` if empty or not composable.
    pub fn path(&self, arrows: &[ArrowId]) -> Option<Path> {
        let first = *arrows.first()?;
        for w in arrows.windows(2) {
            if self.arrow(w[0]).head != self.arrow(w[1]).tail {
                return None;
            }
        }
        Some(Path {
            tail: self.arrow(first).tail,
            head: self.arrow(arrows[arrows.len() - 1]).head,
            arrows: arrows.to_vec(),
        })
    }

    /// Convenience lookup: `["a1", "a2"]` → the path `a1*a2`.
    pub fn path_by_names(&self, names: &[&str]) -> Result<Path, QuiverError> {
        let ids = names
            .iter()
            .map(|n| self.arrow_by_name(n).ok_or_else(|| QuiverError::UnknownArrow(n.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        if ids.is_empty() {
            return Err(QuiverError::UnknownArrow(String::new()));
        }
        for w in ids.windows(2) {
            if self.arrow(w[0]).head != self.arrow(w[1]).tail {
                return Err(QuiverError::NotComposable(
                    self.arrow_name(w[0]).to_string(),
                    self.arrow_name(w[1]).to_string(),
                ));
            }
        }
        Ok(self.path(&ids).expect("checked composable"))
    }

    pub fn outgoing(&self, v: VertexId) -> impl Iterator<Item = ArrowId> + '_ {
        self.arrow_ids().filter(move |a| self.arrow(*a).tail == v)
    }

    pub fn incoming(&self, v: VertexId) -> impl Iterator<Item = ArrowId> + '_ {
        self.arrow_ids().filter(move |a| self.arrow(*a).head == v)
    }

    /// All paths of length at most `max_len`, graded-lex ordered.
    pub fn enumerate_paths(&self, max_len: usize) -> Vec<Path> {
        let mut all: Vec<Path> = self.vertices().map(Path::trivial).collect();
        let mut frontier: Vec<Path> = all.clone();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for p in &frontier {
                for a in self.outgoing(p.head) {
                    let mut arrows = p.arrows.clone();
                    arrows.push(a);
                    next.push(Path {
                        tail: p.tail,
                        head: self.arrow(a).head,
                        arrows,
                    });
                }
            }
            if next.is_empty() {
                break;
            }
            next.sort();
            all.extend(next.iter().cloned());
            frontier = next;
        }
        all
    }

    /// All paths of length exactly `len`.
    pub fn paths_of_length(&self, len: usize) -> Vec<Path> {
        let mut frontier: Vec<Path> = self.vertices().map(Path::trivial).collect();
        for _ in 0..len {
            let mut next = Vec::new();
            for p in &frontier {
                for a in self.outgoing(p.head) {
                    let mut arrows = p.arrows.clone();
                    arrows.push(a);
                    next.push(Path {
                        tail: p.tail,
                        head: self.arrow(a).head,
                        arrows,
                    });
                }
            }
            frontier = next;
        }
        frontier.sort();
        frontier
    }

    /// True iff there is no directed cycle; loops count as cycles.
    pub fn is_acyclic(&self) -> bool {
        let n = self.vertex_count();
        let mut indegree = vec![0usize; n];
        for a in &self.arrows {
            indegree[a.head.0] += 1;
        }
        let mut queue: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut removed = 0;
        while let Some(v) = queue.pop() {
            removed += 1;
            for a in &self.arrows {
                if a.tail.0 == v {
                    indegree[a.head.0] -= 1;
                    if indegree[a.head.0] == 0 {
                        queue.push(a.head.0);
                    }
                }
            }
        }
        removed == n
    }

    fn adjacency(&self) -> Vec<Vec<bool>> {
        let n = self.vertex_count();
        let mut m = vec![vec![false; n]; n];
        for a in &self.arrows {
            m[a.tail.0][a.head.0] = true;
        }
        m
    }

    /// Is there a walk (arrows may repeat) of length `>= min_len` from `from` to `to`?
    ///
    /// If such a walk exists, removing cycles of length at most `|V|` yields one
    /// with length in `min_len ..= min_len + |V|`, so only those lengths are checked.
    pub fn has_walk_of_length_at_least(&self, from: VertexId, to: VertexId, min_len: usize) -> bool {
        let n = self.vertex_count();
        let adj = self.adjacency();
        let mut power = bool_pow(&adj, min_len);
        for _ in 0..=n {
            if power[from.0][to.0] {
                return true;
            }
            power = bool_mul(&power, &adj);
        }
        false
    }
}

fn bool_mul(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = a.len();
    let mut c = vec![vec![false; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] {
                for j in 0..n {
                    c[i][j] |= b[k][j];
                }
            }
        }
    }
    c
}

fn bool_pow(a: &[Vec<bool>], mut e: usize) -> Vec<Vec<bool>> {
    let n = a.len();
    let mut acc: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect();
    let mut base = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = bool_mul(&acc, &base);
        }
        base = bool_mul(&base, &base);
        e >>= 1;
    }
    acc
}

/// Path parallelism: same tail and same head.
pub fn parallel(p: &Path, q: &Path) -> bool {
    p.tail == q.tail && p.head == q.head
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn sq() -> Quiver {
        Quiver::new(
            &["s", "u", "d", "t"],
            &[("a1", "s", "u"), ("a2", "u", "t"), ("b1", "s", "d"), ("b2", "d", "t")],
        )
        .unwrap()
    }

    fn a2() -> Quiver {
        Quiver::new(&["v1", "v2"], &[("a", "v1", "v2")]).unwrap()
    }

    fn loop1() -> Quiver {
        Quiver::new(&["v"], &[("x", "v", "v")]).unwrap()
    }

    fn kr2() -> Quiver {
        Quiver::new(&["v1", "v2"], &[("a", "v1", "v2"), ("b", "v1", "v2")]).unwrap()
    }

    #[test]
    fn construction_errors() {
        let none: &[(&str, &str, &str)] = &[];
        assert_eq!(Quiver::new::<&str, &str>(&[], none), Err(QuiverError::Empty));
        assert!(matches!(
            Quiver::new(&["a", "b"], none),
            Err(QuiverError::Disconnected(v)) if v == "b"
        ));
        assert!(matches!(
            Quiver::new(&["a"], &[("x", "a", "z")]),
            Err(QuiverError::UnknownVertex { .. })
        ));
        assert!(matches!(Quiver::new(&["a", "a"], none), Err(QuiverError::DuplicateVertex(_))));
        assert!(matches!(
            Quiver::new(&["a"], &[("x", "a", "a"), ("x", "a", "a")]),
            Err(QuiverError::DuplicateArrow(_))
        ));
    }

    #[test]
    fn composition() {
        let q = sq();
        let a1 = q.path_by_names(&["a1"]).unwrap();
        let a2 = q.path_by_names(&["a2"]).unwrap();
        let b2 = q.path_by_names(&["b2"]).unwrap();
        let a1a2 = a1.compose(&a2).unwrap();
        assert_eq!(a1a2.len(), 2);
        assert_eq!(a1a2.display(&q).to_string(), "a1*a2");
        assert!(a1.compose(&b2).is_none());

        let q = Quiver::new(&["v1", "v2"], &[("a", "v1", "v2")]).unwrap();
        let e1 = Path::trivial(VertexId(0));
        let a = q.arrow_path(ArrowId(0));
        assert_eq!(e1.compose(&a), Some(a.clone()));
        assert_eq!(a.compose(&Path::trivial(VertexId(1))), Some(a));
    }

    #[test]
    fn enumeration() {
        let q = a2();
        let ps = q.enumerate_paths(1);
        assert_eq!(ps, vec![Path::trivial(VertexId(0)), Path::trivial(VertexId(1)), q.arrow_path(ArrowId(0))]);

        let ps = sq().enumerate_paths(2);
        assert_eq!(ps.len(), 10);
        assert_eq!(ps.iter().filter(|p| p.len() == 2).count(), 2);

        let q = loop1();
        let ps = q.enumerate_paths(3);
        let shown: Vec<String> = ps.iter().map(|p| p.display(&q).to_string()).collect();
        assert_eq!(shown, ["e[v]", "x", "x*x", "x*x*x"]);
    }

    #[test]
    fn parallelism() {
        let q = sq();
        let a = q.path_by_names(&["a1", "a2"]).unwrap();
        let b = q.path_by_names(&["b1", "b2"]).unwrap();
        assert!(parallel(&a, &b));
        assert!(!parallel(&q.path_by_names(&["a1"]).unwrap(), &q.path_by_names(&["b1"]).unwrap()));
        assert!(parallel(&a, &a));
    }

    #[test]
    fn acyclicity() {
        assert!(sq().is_acyclic());
        assert!(!loop1().is_acyclic());
        assert!(kr2().is_acyclic());
        let two_cycle = Quiver::new(&["a", "b"], &[("x", "a", "b"), ("y", "b", "a")]).unwrap();
        assert!(!two_cycle.is_acyclic());
    }

    #[test]
    fn long_walks() {
        let q = loop1();
        assert!(q.has_walk_of_length_at_least(VertexId(0), VertexId(0), 100));
        let q = sq();
        assert!(!q.has_walk_of_length_at_least(VertexId(0), VertexId(3), 3));
        assert!(q.has_walk_of_length_at_least(VertexId(0), VertexId(3), 2));
        let q = a2();
        assert!(q.has_walk_of_length_at_least(VertexId(0), VertexId(1), 1));
        assert!(!q.has_walk_of_length_at_least(VertexId(0), VertexId(1), 2));
        assert!(q.has_walk_of_length_at_least(VertexId(0), VertexId(0), 0));
    }

    /// Random connected quivers on up to 4 vertices and 6 arrows.
    pub(crate) fn arb_quiver() -> impl Strategy<Value = Quiver> {
        (1usize..=4).prop_flat_map(|n| {
            let tree = proptest::collection::vec((any::<prop::sample::Index>(), any::<bool>()), n - 1);
            let extra = proptest::collection::vec((0..n, 0..n), 0..=3);
            (Just(n), tree, extra).prop_map(|(n, tree, extra)| {
                let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
                let mut arrows = Vec::new();
                for (i, (parent, dir)) in tree.into_iter().enumerate() {
                    let child = i + 1;
                    let p = parent.index(child);
                    let (t, h) = if dir { (p, child) } else { (child, p) };
                    arrows.push((format!("a{}", arrows.len()), names[t].clone(), names[h].clone()));
                }
                for (t, h) in extra {
                    arrows.push((format!("a{}", arrows.len()), names[t].clone(), names[h].clone()));
                }
                Quiver::new(&names, &arrows).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn path_enumeration_properties(q in arb_quiver(), len in 0usize..4) {
            let ps = q.enumerate_paths(len);
            let set: BTreeSet<_> = ps.iter().cloned().collect();
            prop_assert_eq!(set.len(), ps.len());
            prop_assert!(ps.windows(2).all(|w| w[0] < w[1]));
            let total: usize = (0..=len).map(|l| q.paths_of_length(l).len()).sum();
            prop_assert_eq!(total, ps.len());
            for p in &ps {
                if !p.is_trivial() {
                    let rebuilt = q.path(p.arrows());
                    prop_assert_eq!(rebuilt.as_ref(), Some(p));
                }
                let left = Path::trivial(p.tail()).compose(p).unwrap();
                let right = p.compose(&Path::trivial(p.head())).unwrap();
                prop_assert_eq!(&left, p);
                prop_assert_eq!(&right, p);
            }
        }

        #[test]
        fn acyclic_iff_no_short_cycles(q in arb_quiver()) {
            let n = q.vertex_count();
            let has_cycle = q.enumerate_paths(n).iter().any(|p| !p.is_empty() && p.is_cycle());
            prop_assert_eq!(q.is_acyclic(), !has_cycle);
        }

        #[test]
        fn composition_associative(q in arb_quiver()) {
            let ps = q.enumerate_paths(2);
            for a in &ps {
                for b in &ps {
                    for c in &ps {
                        let left = a.compose(b).and_then(|ab| ab.compose(c));
                        let right = b.compose(c).and_then(|bc| a.compose(&bc));
                        prop_assert_eq!(left, right);
                    }
                }
            }
        }

        #[test]
        fn walk_check_matches_enumeration(q in arb_quiver(), min_len in 0usize..4) {
            // Exhaustive over walks up to min_len + |V|.
            let limit = min_len + q.vertex_count();
            let ps = q.enumerate_paths(limit);
            for from in q.vertices() {
                for to in q.vertices() {
                    let brute = ps.iter().any(|p| p.tail() == from && p.head() == to && p.len() >= min_len);
                    prop_assert_eq!(q.has_walk_of_length_at_least(from, to, min_len), brute);
                }
            }
        }
    }
}
