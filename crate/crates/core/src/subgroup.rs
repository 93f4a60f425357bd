//! Finite balls of a finitely generated subgroup and their branch pairs.

use std::collections::HashSet;

use crate::element::Element;
use crate::error::{Error, Result};
use crate::words::Word;

pub const DEFAULT_RADIUS: usize = 6;
pub const DEFAULT_DEPTH: u32 = 16;
pub const DEFAULT_ELEMENT_BUDGET: usize = 100_000;

/// All distinct elements that are products of at most `radius` generators
/// or inverses, in breadth-first order (identity first).
pub fn ball(gens: &[Element], radius: usize, budget: usize) -> Result<Vec<Element>> {
    let mut letters: Vec<Element> = Vec::with_capacity(2 * gens.len());
    for g in gens {
        letters.push(g.clone());
        letters.push(g.invert());
    }
    let mut seen: HashSet<Element> = HashSet::new();
    let mut out = vec![Element::identity()];
    seen.insert(Element::identity());
    let mut frontier = 0..1;
    for _ in 0..radius {
        let start = out.len();
        for i in frontier.clone() {
            for l in &letters {
                let p = out[i].multiply(l);
                if seen.insert(p.clone()) {
                    if out.len() >= budget {
                        return Err(Error::CapacityExceeded {
                            what: "ball elements",
                            limit: budget,
                        });
                    }
                    out.push(p);
                }
            }
        }
        frontier = start..out.len();
        if frontier.is_empty() {
            break;
        }
    }
    Ok(out)
}

/// Reduced branch pairs of the elements with both sides of length ≤ `depth`,
/// deduplicated, in first-seen order.
pub fn branch_pairs_of(elements: &[Element], depth: u32) -> Vec<(Word, Word)> {
    branch_pairs_with_origin(elements, depth)
        .into_iter()
        .map(|(p, _)| p)
        .collect()
}

/// As [`branch_pairs_of`], each pair tagged with the index of an element
/// that has it.
pub fn branch_pairs_with_origin(elements: &[Element], depth: u32) -> Vec<((Word, Word), usize)> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (i, e) in elements.iter().enumerate() {
        for p in e.pairs() {
            if p.source.len() <= depth as usize && p.target.len() <= depth as usize {
                let pair = (p.source.clone(), p.target.clone());
                if seen.insert(pair.clone()) {
                    out.push((pair, i));
                }
            }
        }
    }
    out
}

/// Branch pairs of every product of at most `radius` generators.
pub fn subgroup_branch_pairs(
    gens: &[Element],
    radius: usize,
    depth: u32,
    budget: usize,
) -> Result<Vec<(Word, Word)>> {
    Ok(branch_pairs_of(&ball(gens, radius, budget)?, depth))
}
