//! Saturation of branch-word equivalences.
//!
//! The universe is the complete binary trie of depth `L` (every word of
//! length at most `L`, addressed by its heap index) together with the
//! prefixes of any longer seed words. A union-find over these nodes is
//! closed under child congruence: `u ~ v` implies `ub ~ vb` whenever both
//! children are nodes. Single-bit child congruence applied to fixpoint gives
//! the full right-append closure `uw ~ vw`.
//!
//! Each class remembers, per bit, one member that has a child along that
//! bit. When two classes merge and both have such a member, the two
//! children are queued for merging; by induction over the merge tree all
//! `b`-children of a class end up in one class.
//!
//! The node set is prefix closed and contains every seed word, so the
//! restriction of the generated right congruence to it is computed exactly
//! and does not depend on seed order. Incompleteness with respect to `~_H`
//! comes only from the seed: the ball radius and which relations are
//! supplied.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::words::{Word, MAX_TRIE_DEPTH};

const NONE: u32 = u32::MAX;

/// Why two trie nodes were linked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Justification {
    /// Seed pair with this index.
    Seed(usize),
    /// `a·bit ~ b·bit` because `a ~ b`.
    Child { a: u32, b: u32, bit: u8 },
}

/// One rewriting step of an explanation: the current word is
/// `from · suffix` and becomes `to · suffix`, where `(from, to)` is seed
/// pair `seed` read forwards (`forward`) or backwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessStep {
    pub seed: usize,
    pub suffix: Word,
    pub forward: bool,
}

/// Proof forest over the trie: every effective union adds one edge.
#[derive(Clone, Debug)]
pub struct Witnesses {
    parent: Vec<u32>,
    edge: Vec<(Justification, bool)>,
}

impl Witnesses {
    fn new(size: usize) -> Self {
        Witnesses {
            parent: (0..size as u32).collect(),
            edge: vec![(Justification::Seed(usize::MAX), true); size],
        }
    }

    fn grow(&mut self) {
        let n = self.parent.len() as u32;
        self.parent.push(n);
        self.edge.push((Justification::Seed(usize::MAX), true));
    }

    fn reroot(&mut self, node: u32) {
        let mut prev = node;
        let mut cur = self.parent[node as usize];
        let mut carried = self.edge[node as usize];
        self.parent[node as usize] = node;
        while cur != prev {
            let next = self.parent[cur as usize];
            let saved = self.edge[cur as usize];
            self.parent[cur as usize] = prev;
            self.edge[cur as usize] = (carried.0, !carried.1);
            if next == cur {
                break;
            }
            carried = saved;
            prev = cur;
            cur = next;
        }
    }

    /// `just` proves `from -> to`.
    fn add_edge(&mut self, from: u32, to: u32, just: Justification) {
        self.reroot(from);
        self.parent[from as usize] = to;
        self.edge[from as usize] = (just, true);
    }

    fn ancestors(&self, mut node: u32) -> Vec<u32> {
        let mut out = vec![node];
        while self.parent[node as usize] != node {
            node = self.parent[node as usize];
            out.push(node);
        }
        out
    }

    /// Rewriting chain from `u` to `v`, or `None` if they are not linked or
    /// the chain would exceed `max_steps`.
    pub fn explain(&self, u: &Word, v: &Word, max_steps: usize) -> Option<Vec<WitnessStep>> {
        let (a, b) = (u.trie_index()?, v.trie_index()?);
        if a as usize >= self.parent.len() || b as usize >= self.parent.len() {
            return None;
        }
        let mut budget = max_steps;
        self.explain_nodes(a, b, &mut budget)
    }

    fn explain_nodes(&self, a: u32, b: u32, budget: &mut usize) -> Option<Vec<WitnessStep>> {
        if a == b {
            return Some(Vec::new());
        }
        let up_a = self.ancestors(a);
        let up_b = self.ancestors(b);
        if up_a.last() != up_b.last() {
            return None;
        }
        let on_a: HashSet<u32> = up_a.iter().copied().collect();
        let lca_pos_b = up_b.iter().position(|n| on_a.contains(n))?;
        let lca = up_b[lca_pos_b];
        let mut steps = Vec::new();
        for &node in up_a.iter().take_while(|&&n| n != lca) {
            let (just, fwd) = self.edge[node as usize];
            let mut s = self.explain_edge(just, budget)?;
            if !fwd {
                reverse_steps(&mut s);
            }
            steps.extend(s);
        }
        let mut down = Vec::new();
        for &node in up_b[..lca_pos_b].iter() {
            let (just, fwd) = self.edge[node as usize];
            let mut s = self.explain_edge(just, budget)?;
            // edge proves node -> parent when fwd; we need parent -> node
            if fwd {
                reverse_steps(&mut s);
            }
            down.push(s);
        }
        for s in down.into_iter().rev() {
            steps.extend(s);
        }
        Some(steps)
    }

    fn explain_edge(&self, just: Justification, budget: &mut usize) -> Option<Vec<WitnessStep>> {
        match just {
            Justification::Seed(seed) => {
                if *budget == 0 {
                    return None;
                }
                *budget -= 1;
                Some(vec![WitnessStep {
                    seed,
                    suffix: Word::empty(),
                    forward: true,
                }])
            }
            Justification::Child { a, b, bit } => {
                let mut s = self.explain_nodes(a, b, budget)?;
                for step in &mut s {
                    step.suffix.push(bit);
                }
                Some(s)
            }
        }
    }
}

fn reverse_steps(steps: &mut [WitnessStep]) {
    steps.reverse();
    for s in steps.iter_mut() {
        s.forward = !s.forward;
    }
}

struct Saturator {
    depth: u32,
    /// Nodes below this index have both children inside the trie.
    shallow_limit: u32,
    trie_size: u32,
    parent: Vec<u32>,
    size: Vec<u32>,
    /// Per class root and bit: a member with a child along that bit.
    succ: Vec<[u32; 2]>,
    /// Parent and child links of nodes on or beyond the trie boundary.
    deep_up: HashMap<u32, u32>,
    deep_down: HashMap<(u32, u8), u32>,
    queue: Vec<(u32, u32, Justification)>,
    witnesses: Option<Witnesses>,
}

impl Saturator {
    fn new(depth: u32, record: bool) -> Self {
        let n = (1usize << (depth + 1)) - 1;
        let shallow_limit = (1u32 << depth) - 1;
        Saturator {
            depth,
            shallow_limit,
            trie_size: n as u32,
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            succ: (0..n as u32)
                .map(|i| {
                    if i < shallow_limit {
                        [i, i]
                    } else {
                        [NONE, NONE]
                    }
                })
                .collect(),
            deep_up: HashMap::new(),
            deep_down: HashMap::new(),
            queue: Vec::new(),
            witnesses: record.then(|| Witnesses::new(n)),
        }
    }

    fn child(&self, node: u32, bit: u8) -> u32 {
        if node < self.shallow_limit {
            2 * node + 1 + bit as u32
        } else {
            self.deep_down[&(node, bit)]
        }
    }

    /// Node of `w`, adding it and its missing prefixes beyond the trie.
    fn node(&mut self, w: &Word) -> u32 {
        let d = self.depth as usize;
        if w.len() <= d {
            return w.trie_index().expect("within trie depth");
        }
        let mut cur = Word::from_bits(&w.bits()[..d])
            .trie_index()
            .expect("within trie depth");
        for &bit in &w.bits()[d..] {
            cur = match self.deep_down.get(&(cur, bit)) {
                Some(&c) => c,
                None => {
                    let c = self.parent.len() as u32;
                    self.parent.push(c);
                    self.size.push(1);
                    self.succ.push([NONE, NONE]);
                    if let Some(w) = self.witnesses.as_mut() {
                        w.grow();
                    }
                    self.deep_down.insert((cur, bit), c);
                    self.deep_up.insert(c, cur);
                    // a fresh child of `cur`: it joins the existing b-children of cur's class
                    let root = self.find(cur);
                    match self.succ[root as usize][bit as usize] {
                        NONE => self.succ[root as usize][bit as usize] = cur,
                        other => {
                            let sib = self.child(other, bit);
                            self.union(
                                sib,
                                c,
                                Justification::Child {
                                    a: other,
                                    b: cur,
                                    bit,
                                },
                            );
                        }
                    }
                    c
                }
            };
        }
        cur
    }

    fn find(&mut self, mut a: u32) -> u32 {
        let mut root = a;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        while self.parent[a as usize] != root {
            let next = self.parent[a as usize];
            self.parent[a as usize] = root;
            a = next;
        }
        root
    }

    fn union(&mut self, a: u32, b: u32, just: Justification) {
        self.queue.push((a, b, just));
        while let Some((a, b, just)) = self.queue.pop() {
            let (ra, rb) = (self.find(a), self.find(b));
            if ra == rb {
                continue;
            }
            if let Some(w) = self.witnesses.as_mut() {
                w.add_edge(a, b, just);
            }
            let (sa, sb) = (self.succ[ra as usize], self.succ[rb as usize]);
            for bit in 0..2u8 {
                let (pa, pb) = (sa[bit as usize], sb[bit as usize]);
                if pa != NONE && pb != NONE {
                    let (ca, cb) = (self.child(pa, bit), self.child(pb, bit));
                    self.queue
                        .push((ca, cb, Justification::Child { a: pa, b: pb, bit }));
                }
            }
            let (big, small) = if self.size[ra as usize] >= self.size[rb as usize] {
                (ra, rb)
            } else {
                (rb, ra)
            };
            self.parent[small as usize] = big;
            self.size[big as usize] += self.size[small as usize];
            for bit in 0..2 {
                if self.succ[big as usize][bit] == NONE {
                    self.succ[big as usize][bit] = self.succ[small as usize][bit];
                }
            }
        }
    }

    fn finish(mut self) -> (WordPartition, Option<Witnesses>) {
        let n = self.trie_size;
        // each class is named by its least trie index, so equal partitions compare equal
        let mut name: HashMap<u32, u32> = HashMap::new();
        let root = (0..n)
            .map(|i| {
                let r = self.find(i);
                *name.entry(r).or_insert(i)
            })
            .collect();
        (
            WordPartition {
                depth: self.depth,
                root,
            },
            self.witnesses,
        )
    }
}

/// A saturated partition of all words of length at most `depth`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordPartition {
    depth: u32,
    root: Vec<u32>,
}

impl WordPartition {
    /// Every word in its own class.
    pub fn discrete(depth: u32) -> Result<WordPartition> {
        saturate(&[], depth)
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn universe_size(&self) -> usize {
        self.root.len()
    }

    fn index(&self, w: &Word) -> Option<u32> {
        if w.len() > self.depth as usize {
            return None;
        }
        w.trie_index()
    }

    /// Whether `u` and `v` are known to be equivalent. Words deeper than
    /// the trie are only equivalent to themselves.
    pub fn equivalent(&self, u: &Word, v: &Word) -> bool {
        if u == v {
            return true;
        }
        match (self.index(u), self.index(v)) {
            (Some(a), Some(b)) => self.root[a as usize] == self.root[b as usize],
            _ => false,
        }
    }

    pub fn class_id(&self, w: &Word) -> Option<u32> {
        self.index(w).map(|i| self.root[i as usize])
    }

    pub fn num_classes(&self) -> usize {
        self.root
            .iter()
            .enumerate()
            .filter(|&(i, &r)| i as u32 == r)
            .count()
    }

    pub fn is_discrete(&self) -> bool {
        self.root.iter().enumerate().all(|(i, &r)| i as u32 == r)
    }

    /// Classes keyed by their lexicographically least member, members sorted.
    pub fn classes(&self) -> BTreeMap<Word, Vec<Word>> {
        let mut by_root: BTreeMap<u32, Vec<Word>> = BTreeMap::new();
        for (i, &r) in self.root.iter().enumerate() {
            by_root
                .entry(r)
                .or_default()
                .push(Word::from_trie_index(i as u32));
        }
        by_root
            .into_values()
            .map(|mut members| {
                members.sort();
                (members[0].clone(), members)
            })
            .collect()
    }

    /// Every class of `self`, restricted to words both partitions cover, is
    /// contained in a class of `other`.
    pub fn refines(&self, other: &WordPartition) -> bool {
        let n = self.root.len().min(other.root.len());
        let mut image: Vec<u32> = vec![NONE; self.root.len()];
        for i in 0..n {
            let r = self.root[i] as usize;
            let o = other.root[i];
            if image[r] == NONE {
                image[r] = o;
            } else if image[r] != o {
                return false;
            }
        }
        true
    }

    /// All merged pairs `(member, representative)` with both words in the trie.
    pub fn merged_pairs(&self) -> Vec<(Word, Word)> {
        self.root
            .iter()
            .enumerate()
            .filter(|&(i, &r)| i as u32 != r)
            .map(|(i, &r)| (Word::from_trie_index(i as u32), Word::from_trie_index(r)))
            .collect()
    }

    /// JSON map from class representative to member count, or to the
    /// member list when `full` is set. Singleton classes are included.
    pub fn to_json(&self, full: bool) -> Value {
        let mut map = serde_json::Map::new();
        for (rep, members) in self.classes() {
            let v = if full {
                Value::Array(
                    members
                        .iter()
                        .map(|w| Value::String(w.to_string()))
                        .collect(),
                )
            } else {
                json!(members.len())
            };
            map.insert(rep.to_string(), v);
        }
        json!({ "depth": self.depth, "classes": Value::Object(map) })
    }
}

fn run(
    seed: &[(Word, Word)],
    depth: u32,
    record: bool,
) -> Result<(WordPartition, Option<Witnesses>)> {
    if depth > MAX_TRIE_DEPTH {
        return Err(Error::CapacityExceeded {
            what: "saturation depth",
            limit: MAX_TRIE_DEPTH as usize,
        });
    }
    let mut s = Saturator::new(depth, record);
    let idx: Vec<(u32, u32)> = seed.iter().map(|(u, v)| (s.node(u), s.node(v))).collect();
    for (i, &(a, b)) in idx.iter().enumerate() {
        s.union(a, b, Justification::Seed(i));
    }
    Ok(s.finish())
}

/// Smallest equivalence on words of length ≤ `depth` that contains `seed`
/// and is the restriction of a right congruence. Seed words may be longer
/// than `depth`.
pub fn saturate(seed: &[(Word, Word)], depth: u32) -> Result<WordPartition> {
    Ok(run(seed, depth, false)?.0)
}

/// As [`saturate`], also recording a proof forest for every merge.
pub fn saturate_with_witnesses(
    seed: &[(Word, Word)],
    depth: u32,
) -> Result<(WordPartition, Witnesses)> {
    let (p, w) = run(seed, depth, true)?;
    Ok((p, w.expect("recording enabled")))
}

/// Conditions of the sufficiency criterion inside `p`:
/// (1) `1^r 0 ~ 10` for `1 ≤ r ≤ r_max`; (2) `0^s 1 ~ 01` for `1 ≤ s ≤ s_max`;
/// (3) `01 ~ 10 ~ 010 ~ 011`.
pub fn check_suffice(p: &WordPartition, r_max: usize, s_max: usize) -> bool {
    suffice_failures(p, r_max, s_max).is_empty()
}

/// The individual relations of [`check_suffice`] that do not hold.
pub fn suffice_failures(p: &WordPartition, r_max: usize, s_max: usize) -> Vec<String> {
    let ten = Word::runs(&[(1, 1), (0, 1)]);
    let zero_one = Word::runs(&[(0, 1), (1, 1)]);
    let mut out = Vec::new();
    for r in 1..=r_max {
        let w = Word::runs(&[(1, r), (0, 1)]);
        if !p.equivalent(&w, &ten) {
            out.push(format!("{} !~ 10", w));
        }
    }
    for s in 1..=s_max {
        let w = Word::runs(&[(0, s), (1, 1)]);
        if !p.equivalent(&w, &zero_one) {
            out.push(format!("{} !~ 01", w));
        }
    }
    for other in ["10", "010", "011"] {
        let w: Word = other.parse().expect("literal");
        if !p.equivalent(&zero_one, &w) {
            out.push(format!("01 !~ {}", other));
        }
    }
    out
}

/// Every word of length ≤ `len` containing both digits lies in one class.
pub fn all_mixed_equivalent(p: &WordPartition, len: usize) -> bool {
    if len < 2 {
        return true;
    }
    if len > p.depth() as usize {
        return false;
    }
    let anchor = p
        .class_id(&Word::runs(&[(0, 1), (1, 1)]))
        .expect("01 is in the trie");
    let end = (1u32 << (len + 1)) - 1;
    (0..end).all(|i| {
        let w = Word::from_trie_index(i);
        !w.contains_both_digits() || p.root[i as usize] == anchor
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn append_closure_only() {
        let p = saturate(&[(w("01"), w("10"))], 3).unwrap();
        assert!(p.equivalent(&w("01"), &w("10")));
        assert!(p.equivalent(&w("010"), &w("100")));
        assert!(p.equivalent(&w("011"), &w("101")));
        assert!(!p.equivalent(&w("0"), &w("1")));
        assert!(!p.equivalent(&w("010"), &w("011")));
        assert_eq!(p.num_classes(), 15 - 3);
    }

    #[test]
    fn empty_seed_is_discrete() {
        let p = saturate(&[], 4).unwrap();
        assert!(p.is_discrete());
        assert_eq!(p.num_classes(), 31);
        assert!(!check_suffice(&p, 3, 3));
        assert!(!all_mixed_equivalent(&p, 2));
    }

    #[test]
    fn transitive_chain_across_levels() {
        // 0 ~ 1 and 00 ~ 11 merge all of level 2, but level 3 splits by last bit
        let p = saturate(&[(w("0"), w("1")), (w("00"), w("11"))], 3).unwrap();
        assert!(p.equivalent(&w("01"), &w("10")));
        assert!(p.equivalent(&w("010"), &w("100")));
        assert!(p.equivalent(&w("000"), &w("110")));
        assert!(p.equivalent(&w("001"), &w("111")));
        assert!(!p.equivalent(&w("000"), &w("001")));
    }

    #[test]
    fn children_of_deep_chain_members_are_merged() {
        // 00 ~ 1110 ~ 01 with the middle word at the depth limit: 00 ~ 01 still
        // needs 000 ~ 010.
        let p = saturate(&[(w("00"), w("1110")), (w("1110"), w("01"))], 4).unwrap();
        assert!(p.equivalent(&w("00"), &w("01")));
        assert!(p.equivalent(&w("000"), &w("010")));
        assert!(p.equivalent(&w("0011"), &w("0111")));
    }

    #[test]
    fn depth_limit() {
        assert!(saturate(&[], MAX_TRIE_DEPTH + 1).is_err());
    }

    #[test]
    fn long_seed_words() {
        let p = saturate(&[(w("0"), w("1111")), (w("1"), w("1110"))], 2).unwrap();
        assert!(!p.equivalent(&w("0"), &w("1")));
        assert!(!p.equivalent(&w("00"), &w("01")));
        // 0 ~ 111 gives 00 ~ 1110 beyond the trie, and 1110 ~ 1
        let p = saturate(&[(w("0"), w("111")), (w("1110"), w("1"))], 2).unwrap();
        assert!(p.equivalent(&w("00"), &w("1")));
        assert!(!p.equivalent(&w("01"), &w("1")));
        assert_eq!(p.universe_size(), 7);
    }

    #[test]
    fn json_export() {
        let p = saturate(&[(w("01"), w("10"))], 2).unwrap();
        let j = p.to_json(false);
        assert_eq!(j["classes"]["01"], 2);
        assert_eq!(j["classes"]["e"], 1);
        let full = p.to_json(true);
        assert_eq!(full["classes"]["01"], json!(["01", "10"]));
    }

    #[test]
    fn witnesses_explain_merges() {
        let seed = vec![(w("01"), w("10")), (w("10"), w("110"))];
        let (p, wit) = saturate_with_witnesses(&seed, 5).unwrap();
        assert!(p.equivalent(&w("0101"), &w("11001")));
        let steps = wit.explain(&w("0101"), &w("11001"), 100).unwrap();
        // replay the chain on words
        let mut cur = w("0101");
        for s in &steps {
            let (from, to) = if s.forward {
                (&seed[s.seed].0, &seed[s.seed].1)
            } else {
                (&seed[s.seed].1, &seed[s.seed].0)
            };
            assert_eq!(cur, from.append(&s.suffix));
            cur = to.append(&s.suffix);
        }
        assert_eq!(cur, w("11001"));
        assert!(wit.explain(&w("0"), &w("1"), 100).is_none());
    }
}
