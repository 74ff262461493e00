//! DOT export: vertices as nodes, each ultragraph edge drawn as a fan of
//! labeled arrows, one per range vertex.

use ulpa::graph::Ultragraph;

pub fn render(g: &Ultragraph) -> String {
    let mut out = String::from("digraph ultragraph {\n");
    for v in g.vertices() {
        out.push_str(&format!("  \"{}\";\n", g.vertex_name(v)));
    }
    for e in g.edge_ids() {
        let src = g.vertex_name(g.source(e));
        for u in g.range(e).iter() {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
                src,
                g.vertex_name(u),
                g.edge_name(e)
            ));
        }
    }
    out.push_str("}\n");
    out
}
