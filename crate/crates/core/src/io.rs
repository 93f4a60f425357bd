//! Branch-pair text format and DOT export.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::element::{BranchPair, Element};
use crate::error::{Error, Result};
use crate::words::Word;

/// Parses one `u -> v` pair per line. Blank lines and `#` comments are ignored;
/// `e` is the empty word.
pub fn parse_pairs(text: &str) -> Result<Vec<BranchPair>> {
    let mut out = Vec::new();
    let mut offset = 0usize;
    for line in text.split_inclusive('\n') {
        let content = line.split('#').next().unwrap_or("").trim();
        if !content.is_empty() {
            let Some((u, v)) = content.split_once("->") else {
                return Err(Error::Parse {
                    offset,
                    expected: "`u -> v`".into(),
                });
            };
            let word = |s: &str| {
                Word::parse(s).map_err(|e| match e {
                    Error::Parse { expected, .. } => Error::Parse { offset, expected },
                    other => other,
                })
            };
            out.push(BranchPair::new(word(u)?, word(v)?));
        }
        offset += line.len();
    }
    Ok(out)
}

pub fn format_pairs(f: &Element) -> String {
    let mut s = String::new();
    for p in f.pairs() {
        writeln!(s, "{}", p).expect("writing to a String");
    }
    s
}

fn tree_nodes<'a, I: IntoIterator<Item = &'a Word>>(leaves: I) -> BTreeSet<Word> {
    let mut nodes = BTreeSet::new();
    for leaf in leaves {
        for k in 0..=leaf.len() {
            nodes.insert(Word::from_bits(&leaf.bits()[..k]));
        }
    }
    nodes
}

fn write_tree(out: &mut String, prefix: &str, label: &str, leaves: &[&Word]) {
    let node_id = |w: &Word| format!("{}_{}", prefix, w);
    writeln!(out, "  subgraph cluster_{} {{", prefix).unwrap();
    writeln!(out, "    label=\"{}\";", label).unwrap();
    let leaf_index: std::collections::HashMap<&Word, usize> =
        leaves.iter().enumerate().map(|(i, w)| (*w, i)).collect();
    let nodes = tree_nodes(leaves.iter().copied());
    for n in &nodes {
        match leaf_index.get(n) {
            Some(i) => writeln!(out, "    {} [shape=box, label=\"{}\"];", node_id(n), i).unwrap(),
            None => writeln!(out, "    {} [shape=point];", node_id(n)).unwrap(),
        }
    }
    for n in &nodes {
        if n.is_empty() {
            continue;
        }
        let parent = Word::from_bits(&n.bits()[..n.len() - 1]);
        let bit = n.bits()[n.len() - 1];
        writeln!(
            out,
            "    {} -> {} [label=\"{}\"];",
            node_id(&parent),
            node_id(n),
            bit
        )
        .unwrap();
    }
    writeln!(out, "  }}").unwrap();
}

/// The two trees `T+` (sources) and `T-` (targets) as a DOT digraph. Leaves
/// carry their left-to-right index; left edges are labeled 0, right edges 1.
pub fn to_dot(f: &Element) -> String {
    let mut out = String::from("digraph element {\n");
    let sources: Vec<&Word> = f.pairs().iter().map(|p| &p.source).collect();
    let targets: Vec<&Word> = f.pairs().iter().map(|p| &p.target).collect();
    write_tree(&mut out, "plus", "T+", &sources);
    write_tree(&mut out, "minus", "T-", &targets);
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{generator, y};

    #[test]
    fn pair_text_roundtrip() {
        let f = y().power(2).multiply(&generator(3).invert());
        let text = format_pairs(&f);
        let back = Element::from_pairs(parse_pairs(&text).unwrap()).unwrap();
        assert_eq!(back, f);
        assert_eq!(format_pairs(&Element::identity()), "e -> e\n");
    }

    #[test]
    fn parse_with_comments_and_errors() {
        let pairs = parse_pairs("# x0\n00 -> 0\n\n01->10\n1 -> 11  # last\n").unwrap();
        assert_eq!(Element::from_pairs(pairs).unwrap(), generator(0));
        assert!(matches!(
            parse_pairs("00 -> 0\n01 10\n"),
            Err(Error::Parse { offset: 8, .. })
        ));
        assert!(matches!(
            parse_pairs("0a -> 0\n"),
            Err(Error::Parse { offset: 0, .. })
        ));
    }

    #[test]
    fn dot_shape() {
        let dot = to_dot(&generator(0));
        assert!(dot.starts_with("digraph element {"));
        assert!(dot.contains("plus_e -> plus_0 [label=\"0\"];"));
        assert!(dot.contains("plus_00 [shape=box, label=\"0\"];"));
        assert!(dot.contains("minus_11 [shape=box, label=\"2\"];"));
        assert_eq!(dot.matches("shape=box").count(), 6);
    }
}
