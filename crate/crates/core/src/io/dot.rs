//! Graphviz export of the quiver.

use std::fmt::Write;

use super::parse::ProblemSpec;

fn quoted(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// A DOT digraph with one node per vertex and one labeled edge per arrow,
/// in declaration order.
pub fn export_dot(spec: &ProblemSpec) -> String {
    let mut out = String::from("digraph quiver {\n");
    for v in &spec.vertices {
        writeln!(out, "  {};", quoted(v)).expect("writing to a String");
    }
    for a in &spec.arrows {
        writeln!(out, "  {} -> {} [label={}];", quoted(&a.tail), quoted(&a.head), quoted(&a.name))
            .expect("writing to a String");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse::parse_input;

    #[test]
    fn a2_graph() {
        let spec = parse_input("vertex v1 v2\narrow a v1 v2\nnilpotency 2\n").unwrap();
        assert_eq!(
            export_dot(&spec),
            "digraph quiver {\n  \"v1\";\n  \"v2\";\n  \"v1\" -> \"v2\" [label=\"a\"];\n}\n"
        );
    }

    #[test]
    fn loop_graph() {
        let spec = parse_input("vertex v\narrow x v v\nnilpotency 2\n").unwrap();
        assert!(export_dot(&spec).contains("\"v\" -> \"v\" [label=\"x\"];"));
    }
}
