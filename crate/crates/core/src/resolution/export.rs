use std::fmt::Write;

use super::DualGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Dot,
    Json,
}

pub fn export_graph(g: &DualGraph, format: GraphFormat) -> String {
    match format {
        GraphFormat::Json => serde_json::to_string(g).expect("graph serializes"),
        GraphFormat::Dot => to_dot(g),
    }
}

pub fn parse_graph_json(src: &str) -> Result<DualGraph, serde_json::Error> {
    serde_json::from_str(src)
}

fn to_dot(g: &DualGraph) -> String {
    let mut out = String::from("graph resolution {\n");
    for c in &g.components {
        let shape = if c.principal { "doublecircle" } else { "circle" };
        let _ = writeln!(
            out,
            "  D{} [shape={} label=\"D{} ({})\"];",
            c.id, shape, c.id, c.self_int
        );
    }
    for &(a, b) in &g.edges {
        let _ = writeln!(out, "  D{a} -- D{b};");
    }
    for c in &g.components {
        for (k, att) in c.attachments.iter().enumerate() {
            let _ = writeln!(
                out,
                "  P{}_{} [shape=point xlabel=\"{} x{}\"];\n  D{} -- P{}_{} [style=dashed];",
                c.id,
                k + 1,
                att.position,
                att.mult,
                c.id,
                c.id,
                k + 1
            );
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_poly;
    use crate::quasihom::decompose;
    use crate::resolution::simulate_resolution;

    fn graph(src: &str) -> DualGraph {
        simulate_resolution(&decompose(&parse_poly(src).unwrap()).unwrap())
    }

    #[test]
    fn cusp_dot() {
        let dot = export_graph(&graph("y^2-x^3"), GraphFormat::Dot);
        assert!(dot.contains(r#"D2 [shape=doublecircle label="D2 (-1)"]"#));
        assert!(dot.contains(r#"D1 [shape=circle label="D1 (-3)"]"#));
        assert!(dot.contains("D1 -- D2;"));
    }

    #[test]
    fn single_blowup_json() {
        let json = export_graph(&graph("y-x"), GraphFormat::Json);
        assert!(json.starts_with(r#"{"components":[{"id":1,"birth":1,"self_int":-1,"#));
        assert!(json.contains(r#""edges":[]"#));
    }

    #[test]
    fn json_round_trip() {
        for src in ["y^2-x^3", "x*y*(y^3-x^7)*(y^3+2x^7)", "x^2*y", "(y-x)*(y-i*x)*x"] {
            let g = graph(src);
            let back = parse_graph_json(&export_graph(&g, GraphFormat::Json)).unwrap();
            assert_eq!(back, g);
        }
    }
}
