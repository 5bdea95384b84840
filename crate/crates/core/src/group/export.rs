use std::fmt::Write;

use super::closure::Group;
use super::transform::compose;

/// One line per element: position, word, canonical form.
pub fn table(group: &Group) -> String {
    let mut out = String::new();
    for (i, e) in group.elements.iter().enumerate() {
        let _ = writeln!(out, "{i}\t{}\t{}", group.word_label(&e.word), e.transform.canonical());
    }
    out
}

/// Cayley graph in DOT format, one edge per (element, generator).
pub fn cayley_dot(group: &Group) -> String {
    let mut out = String::from("digraph cayley {\n  node [shape=circle];\n");
    for (i, e) in group.elements.iter().enumerate() {
        let _ = writeln!(out, "  n{i} [label=\"{}\"];", group.word_label(&e.word));
    }
    for (i, e) in group.elements.iter().enumerate() {
        for (gi, g) in group.generators.iter().enumerate() {
            let j = group.position(&compose(&e.transform, g)).expect("closed under generators");
            let _ = writeln!(out, "  n{i} -> n{j} [label=\"{}\"];", group.names[gi]);
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{enumerate_group, generator, GeneratorId};

    #[test]
    fn small_exports() {
        let g = enumerate_group(&[generator(GeneratorId::Sigma3)], &["s3".to_string()]).unwrap();
        let t = table(&g);
        assert_eq!(t.lines().count(), 2);
        assert!(t.starts_with("0\te\t"));
        let dot = cayley_dot(&g);
        assert_eq!(dot.matches("->").count(), 2);
        assert!(dot.contains("n1 -> n0 [label=\"s3\"]"));
    }
}
