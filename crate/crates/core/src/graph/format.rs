//! Line-oriented graph files:
//!
//! ```text
//! # comment
//! vertex <id>
//! edge <id> <src-vertex> <rng-vertex>
//! ```
//!
//! All `vertex` lines precede the first `edge` line.

use super::{EdgeDecl, Graph, GraphDecl, GraphError};

pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut decl = GraphDecl::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        let syntax = |message: String| GraphError::Syntax { line, message };
        match words.as_slice() {
            ["vertex", id] => {
                if !decl.edges.is_empty() {
                    return Err(syntax(format!("vertex `{id}` declared after the first edge")));
                }
                decl.vertices.push(id.to_string());
            }
            ["edge", id, s, r] => decl.edges.push(EdgeDecl { id: id.to_string(), src: s.to_string(), rng: r.to_string() }),
            ["vertex", ..] => return Err(syntax("expected `vertex <id>`".into())),
            ["edge", ..] => return Err(syntax("expected `edge <id> <src> <rng>`".into())),
            [kw, ..] => return Err(syntax(format!("unknown declaration `{kw}`"))),
            [] => unreachable!(),
        }
    }
    decl.build()
}
