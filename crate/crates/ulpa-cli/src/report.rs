//! Rendering of the structural report: human text and machine JSON.

use serde_json::{json, Value};

use ulpa::graph::{Exit, FirstReturnVerdict, Ultragraph};
use ulpa::structure::{
    SimplicityFailure, SimplicityVerdict, StrongGradingVerdict, StructureReport,
};

use crate::text::{print_path, print_word};

pub fn render_text(g: &Ultragraph, rep: &StructureReport) -> String {
    let mut out = String::new();
    let names = |set: &ulpa::graph::VertexSet| -> String {
        if set.is_empty() {
            "(none)".to_string()
        } else {
            set.iter().map(|v| g.vertex_name(v).to_string()).collect::<Vec<_>>().join(", ")
        }
    };
    out.push_str(&format!(
        "ultragraph: {} vertices, {} edges\n",
        g.vertex_count(),
        g.edge_count()
    ));
    out.push_str(&format!("sinks: {}\n", names(&rep.sinks)));
    out.push_str(&format!("regular vertices: {}\n", names(&rep.regular_vertices)));
    out.push_str(&format!("unital: {}\n", rep.unital));

    out.push_str(&format!(
        "condition (K): {}\n",
        if rep.condition_k.holds { "holds" } else { "fails" }
    ));
    for (v, verdict) in &rep.condition_k.verdicts {
        let line = match verdict {
            FirstReturnVerdict::None => "no first-return path".to_string(),
            FirstReturnVerdict::ExactlyOne(w) => {
                format!("exactly one first-return path: {}", print_word(g, w))
            }
            FirstReturnVerdict::TwoOrMore(w1, w2) => format!(
                "at least two first-return paths: {} and {}",
                print_word(g, w1),
                print_word(g, w2)
            ),
        };
        out.push_str(&format!("  {}: {}\n", g.vertex_name(*v), line));
    }

    match &rep.simplicity {
        SimplicityVerdict::Simple { condition3_checked } => {
            out.push_str("simplicity (sufficient test): simple\n");
            out.push_str(&format!(
                "  infinite-emitter condition: vacuously true ({condition3_checked} generalized vertices checked)\n"
            ));
        }
        SimplicityVerdict::Inconclusive(failures) => {
            out.push_str("simplicity (sufficient test): inconclusive\n");
            for f in failures {
                match f {
                    SimplicityFailure::ConditionK { vertex, unique_return } => {
                        out.push_str(&format!(
                            "  condition 1 fails at {}: unique first-return path {}\n",
                            g.vertex_name(*vertex),
                            print_word(g, unique_return)
                        ));
                    }
                    SimplicityFailure::Connectivity { vertex, counterexample } => {
                        out.push_str(&format!(
                            "  condition 2 fails at {}: counterexample path {}\n",
                            g.vertex_name(*vertex),
                            print_path(g, counterexample)
                        ));
                    }
                }
            }
        }
        SimplicityVerdict::NotApplicableSinks => {
            out.push_str("simplicity (sufficient test): not applicable (graph has sinks)\n");
        }
    }

    match &rep.strong_grading {
        StrongGradingVerdict::Holds { infinite_emitters } => {
            out.push_str(&format!(
                "strongly graded: yes (infinite emitters: {infinite_emitters})\n"
            ));
        }
        StrongGradingVerdict::NotApplicableSinks => {
            out.push_str("strongly graded: not applicable (graph has sinks)\n");
        }
    }

    out.push_str("cycles:\n");
    if rep.cycles.is_empty() {
        out.push_str("  (none)\n");
    }
    for info in &rep.cycles {
        let exits = if info.exits.is_empty() {
            "none".to_string()
        } else {
            info.exits
                .iter()
                .map(|x| match x {
                    Exit::Edge { at, edge } => format!("edge {} at position {at}", g.edge_name(*edge)),
                    Exit::Sink { at, vertex } => {
                        format!("sink {} at position {at}", g.vertex_name(*vertex))
                    }
                })
                .collect::<Vec<_>>()
                .join("; ")
        };
        out.push_str(&format!(
            "  at {}: {} (exits: {})\n",
            g.vertex_name(info.base),
            print_word(g, &info.cycle),
            exits
        ));
    }
    out
}

pub fn render_json(g: &Ultragraph, rep: &StructureReport) -> Value {
    let word = |w: &ulpa::graph::PathWord| -> Value {
        Value::Array(w.iter().map(|e| json!(g.edge_name(e))).collect())
    };
    let vset = |s: &ulpa::graph::VertexSet| -> Value {
        Value::Array(s.iter().map(|v| json!(g.vertex_name(v))).collect())
    };
    let verdicts: serde_json::Map<String, Value> = rep
        .condition_k
        .verdicts
        .iter()
        .map(|(v, verdict)| {
            let value = match verdict {
                FirstReturnVerdict::None => json!({"kind": "none"}),
                FirstReturnVerdict::ExactlyOne(w) => {
                    json!({"kind": "exactly_one", "witnesses": [word(w)]})
                }
                FirstReturnVerdict::TwoOrMore(w1, w2) => {
                    json!({"kind": "two_or_more", "witnesses": [word(w1), word(w2)]})
                }
            };
            (g.vertex_name(*v).to_string(), value)
        })
        .collect();
    let simplicity = match &rep.simplicity {
        SimplicityVerdict::Simple { condition3_checked } => json!({
            "verdict": "simple",
            "infinite_emitter_condition": {
                "vacuously_true": true,
                "generalized_vertices_checked": condition3_checked,
            },
        }),
        SimplicityVerdict::Inconclusive(failures) => {
            let items: Vec<Value> = failures
                .iter()
                .map(|f| match f {
                    SimplicityFailure::ConditionK { vertex, unique_return } => json!({
                        "condition": 1,
                        "vertex": g.vertex_name(*vertex),
                        "witness": word(unique_return),
                    }),
                    SimplicityFailure::Connectivity { vertex, counterexample } => json!({
                        "condition": 2,
                        "vertex": g.vertex_name(*vertex),
                        "witness": {
                            "prefix": word(counterexample.prefix_word()),
                            "cycle": word(counterexample.cycle_word().expect("periodic witness")),
                        },
                    }),
                })
                .collect();
            json!({"verdict": "inconclusive", "failures": items})
        }
        SimplicityVerdict::NotApplicableSinks => json!({"verdict": "not_applicable_sinks"}),
    };
    let strong = match &rep.strong_grading {
        StrongGradingVerdict::Holds { infinite_emitters } => {
            json!({"verdict": "holds", "infinite_emitters": infinite_emitters})
        }
        StrongGradingVerdict::NotApplicableSinks => json!({"verdict": "not_applicable_sinks"}),
    };
    let cycles: Vec<Value> = rep
        .cycles
        .iter()
        .map(|info| {
            let exits: Vec<Value> = info
                .exits
                .iter()
                .map(|x| match x {
                    Exit::Edge { at, edge } => {
                        json!({"kind": "edge", "at": at, "edge": g.edge_name(*edge)})
                    }
                    Exit::Sink { at, vertex } => {
                        json!({"kind": "sink", "at": at, "vertex": g.vertex_name(*vertex)})
                    }
                })
                .collect();
            json!({
                "base": g.vertex_name(info.base),
                "cycle": word(&info.cycle),
                "exits": exits,
            })
        })
        .collect();
    json!({
        "condition_k": {"holds": rep.condition_k.holds, "vertices": verdicts},
        "cycles": cycles,
        "regular_vertices": vset(&rep.regular_vertices),
        "simplicity_sufficient": simplicity,
        "sinks": vset(&rep.sinks),
        "strongly_graded": strong,
        "unital": rep.unital,
    })
}
