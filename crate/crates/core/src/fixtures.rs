//! Small named algebras with planar embeddings, used by tests and examples.

use crate::algebra::Presentation;
use crate::io::parse::{parse_input, ProblemSpec};
use crate::planar::{build_embedding, FaceSet};

/// Commutative square `a1*a2 = b1*b2` with `N = 3`.
pub const SQUARE: &str = "\
field Q
vertex s u d t
arrow a1 s u
arrow a2 u t
arrow b1 s d
arrow b2 d t
nilpotency 3
relation a1*a2 - b1*b2
rotation s a1+ b1+
rotation u a2+ a1-
rotation t a2- b2-
rotation d b2+ b1-
outer a1+
";

/// One arrow, `N = 2`.
pub const A2: &str = "\
vertex v1 v2
arrow a v1 v2
nilpotency 2
rotation v1 a+
rotation v2 a-
outer a+
";

/// One loop with `x^2 = 0`.
pub const LOOP2: &str = "\
vertex v
arrow x v v
nilpotency 2
rotation v x+ x-
outer x+
";

/// Two parallel arrows, `N = 2`.
pub const KRONECKER2: &str = "\
vertex v1 v2
arrow a v1 v2
arrow b v1 v2
nilpotency 2
rotation v1 a+ b+
rotation v2 a- b-
outer a+
";

pub const ALL: [(&str, &str); 4] = [("square", SQUARE), ("a2", A2), ("loop2", LOOP2), ("kronecker2", KRONECKER2)];

pub fn spec(source: &str) -> ProblemSpec {
    parse_input(source).expect("fixture parses")
}

pub fn presentation(source: &str) -> Presentation {
    spec(source).presentation(None).expect("fixture builds")
}

/// The algebra together with the faces of its embedding.
pub fn embedded(source: &str) -> (Presentation, FaceSet) {
    let s = spec(source);
    let p = s.presentation(None).expect("fixture builds");
    let rot = s.rotation_system(p.quiver()).expect("fixture has a rotation");
    let faces = build_embedding(p.quiver(), &rot).expect("fixture embedding is planar");
    (p, faces)
}
