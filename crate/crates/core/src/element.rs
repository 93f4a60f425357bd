//! Elements of F as reduced tree diagrams.
//!
//! A diagram is stored as its ordered list of branch pairs `u_i -> v_i`
//! rather than as two linked trees. The sources are the leaves of `T+`
//! left to right, the targets the leaves of `T-`. Composition is left to
//! right: `f.multiply(g)` is the map `t -> g(f(t))`.

use std::fmt;

use crate::error::{Error, Result};
use crate::words::{Dyadic, Word};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct BranchPair {
    pub source: Word,
    pub target: Word,
}

impl BranchPair {
    pub fn new(source: Word, target: Word) -> Self {
        BranchPair { source, target }
    }
}

impl fmt::Display for BranchPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.source, self.target)
    }
}

/// The side of the unit interval at which a boundary slope is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Endpoint {
    /// `0+`
    Zero,
    /// `1-`
    One,
}

/// One-sided derivative selector at an interior point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Checks that `words`, in order, are the left-to-right leaves of a full
/// binary tree. Shift-reduce: sibling leaves collapse into their parent and
/// a valid list collapses to the root.
pub fn is_complete_prefix_code<'a, I>(words: I) -> bool
where
    I: IntoIterator<Item = &'a Word>,
{
    let mut stack: Vec<Word> = Vec::new();
    let mut count = 0usize;
    for w in words {
        count += 1;
        stack.push(w.clone());
        while stack.len() >= 2 {
            let n = stack.len();
            match sibling_parent(&stack[n - 2], &stack[n - 1]) {
                Some(parent) => {
                    stack.truncate(n - 2);
                    stack.push(parent);
                }
                None => break,
            }
        }
    }
    count > 0 && stack.len() == 1 && stack[0].is_empty()
}

/// `Some(p)` when `a = p0` and `b = p1`.
fn sibling_parent(a: &Word, b: &Word) -> Option<Word> {
    let (ab, bb) = (a.bits(), b.bits());
    if ab.is_empty() || ab.len() != bb.len() {
        return None;
    }
    let n = ab.len();
    if ab[n - 1] == 0 && bb[n - 1] == 1 && ab[..n - 1] == bb[..n - 1] {
        Some(Word::from_bits(&ab[..n - 1]))
    } else {
        None
    }
}

/// A validated (not necessarily reduced) tree diagram.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TreeDiagram {
    pairs: Vec<BranchPair>,
}

impl TreeDiagram {
    pub fn new(pairs: Vec<BranchPair>) -> Result<TreeDiagram> {
        if pairs.is_empty() {
            return Err(Error::MalformedDiagram("no branch pairs".into()));
        }
        if !is_complete_prefix_code(pairs.iter().map(|p| &p.source)) {
            return Err(Error::MalformedDiagram(
                "sources are not the ordered leaves of a full binary tree".into(),
            ));
        }
        if !is_complete_prefix_code(pairs.iter().map(|p| &p.target)) {
            return Err(Error::MalformedDiagram(
                "targets are not the ordered leaves of a full binary tree".into(),
            ));
        }
        Ok(TreeDiagram { pairs })
    }

    pub fn identity() -> TreeDiagram {
        TreeDiagram {
            pairs: vec![BranchPair::new(Word::empty(), Word::empty())],
        }
    }

    pub fn pairs(&self) -> &[BranchPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Removes common carets until none remain.
    pub fn reduce(&self) -> TreeDiagram {
        TreeDiagram {
            pairs: reduce_pairs(self.pairs.iter().cloned()),
        }
    }

    pub fn is_reduced(&self) -> bool {
        self.pairs.windows(2).all(|w| {
            sibling_parent(&w[0].source, &w[1].source).is_none()
                || sibling_parent(&w[0].target, &w[1].target).is_none()
        })
    }
}

/// Stack-based caret cancellation. A merged pair can only combine with its
/// left neighbour on the stack or with a later pair, so one pass suffices.
fn reduce_pairs<I: IntoIterator<Item = BranchPair>>(pairs: I) -> Vec<BranchPair> {
    let mut stack: Vec<BranchPair> = Vec::new();
    for p in pairs {
        stack.push(p);
        while stack.len() >= 2 {
            let n = stack.len();
            let merged = sibling_parent(&stack[n - 2].source, &stack[n - 1].source).and_then(|s| {
                sibling_parent(&stack[n - 2].target, &stack[n - 1].target)
                    .map(|t| BranchPair::new(s, t))
            });
            match merged {
                Some(p) => {
                    stack.truncate(n - 2);
                    stack.push(p);
                }
                None => break,
            }
        }
    }
    stack
}

/// An element of F, held as its unique reduced tree diagram.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element {
    diagram: TreeDiagram,
}

impl Element {
    pub fn identity() -> Element {
        Element {
            diagram: TreeDiagram::identity(),
        }
    }

    /// Validates the pairs as a tree diagram and reduces it.
    pub fn from_pairs(pairs: Vec<BranchPair>) -> Result<Element> {
        Ok(Element::from_diagram(&TreeDiagram::new(pairs)?))
    }

    /// Convenience for literal tables: `[("00", "0"), ("01", "10"), ("1", "11")]`.
    pub fn from_str_pairs(pairs: &[(&str, &str)]) -> Result<Element> {
        let pairs = pairs
            .iter()
            .map(|(u, v)| Ok(BranchPair::new(Word::parse(u)?, Word::parse(v)?)))
            .collect::<Result<Vec<_>>>()?;
        Element::from_pairs(pairs)
    }

    pub fn from_diagram(d: &TreeDiagram) -> Element {
        Element {
            diagram: d.reduce(),
        }
    }

    pub fn diagram(&self) -> &TreeDiagram {
        &self.diagram
    }

    pub fn pairs(&self) -> &[BranchPair] {
        self.diagram.pairs()
    }

    pub fn is_identity(&self) -> bool {
        self.pairs().len() == 1
    }

    /// `self` then `other`: the result maps `t` to `other(self(t))`.
    ///
    /// The targets of `self` and the sources of `other` are refined to their
    /// coarsest common refinement, walked in a single left-to-right merge.
    pub fn multiply(&self, other: &Element) -> Element {
        let fp = self.pairs();
        let gp = other.pairs();
        let mut out = Vec::with_capacity(fp.len() + gp.len());
        let (mut i, mut j) = (0usize, 0usize);
        while i < fp.len() && j < gp.len() {
            let t = &fp[i].target;
            let s = &gp[j].source;
            if t == s {
                out.push(BranchPair::new(fp[i].source.clone(), gp[j].target.clone()));
                i += 1;
                j += 1;
            } else if let Some(rest) = s.strip_prefix(t) {
                out.push(BranchPair::new(
                    fp[i].source.append_bits(rest),
                    gp[j].target.clone(),
                ));
                j += 1;
                if j == gp.len() || !t.is_prefix_of(&gp[j].source) {
                    i += 1;
                }
            } else if let Some(rest) = t.strip_prefix(s) {
                out.push(BranchPair::new(
                    fp[i].source.clone(),
                    gp[j].target.append_bits(rest),
                ));
                i += 1;
                if i == fp.len() || !s.is_prefix_of(&fp[i].target) {
                    j += 1;
                }
            } else {
                unreachable!("complete prefix codes walked in order always nest");
            }
        }
        debug_assert!(i == fp.len() && j == gp.len());
        Element {
            diagram: TreeDiagram {
                pairs: reduce_pairs(out),
            },
        }
    }

    pub fn invert(&self) -> Element {
        let pairs = self
            .pairs()
            .iter()
            .map(|p| BranchPair::new(p.target.clone(), p.source.clone()))
            .collect();
        Element {
            diagram: TreeDiagram { pairs },
        }
    }

    pub fn power(&self, k: i64) -> Element {
        let mut base = if k < 0 { self.invert() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Element::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.multiply(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.multiply(&base);
            }
        }
        acc
    }

    /// `g⁻¹ · self · g`, the conjugate written `self^g`.
    pub fn conjugate_by(&self, g: &Element) -> Element {
        g.invert().multiply(self).multiply(g)
    }

    fn max_source_len(&self) -> usize {
        self.pairs()
            .iter()
            .map(|p| p.source.len())
            .max()
            .unwrap_or(0)
    }

    /// Index of the unique source that is a prefix of `w`, if any.
    fn source_prefix_of(&self, w: &Word) -> Option<usize> {
        let pairs = self.pairs();
        let idx = pairs.partition_point(|p| &p.source <= w);
        if idx == 0 {
            return None;
        }
        pairs[idx - 1].source.is_prefix_of(w).then_some(idx - 1)
    }

    /// Pair whose interval contains the points just right of `.w`.
    fn pair_right_of(&self, w: &Word) -> usize {
        let mut padded = w.clone();
        while padded.len() < self.max_source_len() {
            padded.push(0);
        }
        self.source_prefix_of(&padded)
            .expect("sources form a complete prefix code")
    }

    pub fn evaluate(&self, t: &Dyadic) -> Dyadic {
        let Some(w) = t.expansion() else {
            return Dyadic::one();
        };
        let i = self.pair_right_of(&w);
        let p = &self.pairs()[i];
        let tail = w.bits().get(p.source.len()..).unwrap_or(&[]);
        Dyadic::from_expansion(&p.target.append_bits(tail))
    }

    /// `log2 f'(0+)` or `log2 f'(1-)`.
    pub fn slope_log2(&self, at: Endpoint) -> i64 {
        let p = match at {
            Endpoint::Zero => self.pairs().first(),
            Endpoint::One => self.pairs().last(),
        }
        .expect("diagram is nonempty");
        p.source.len() as i64 - p.target.len() as i64
    }

    /// `log2` of the one-sided derivative at an interior dyadic point.
    pub fn slope_log2_at(&self, alpha: &Dyadic, side: Side) -> i64 {
        assert!(
            !alpha.is_zero() && !alpha.is_one(),
            "slope_log2_at needs 0 < alpha < 1"
        );
        let w = alpha.expansion().expect("alpha < 1");
        let i = match side {
            Side::Right => self.pair_right_of(&w),
            Side::Left => {
                // .w with w = p1 equals .p0111..., the expansion approached from the left
                let mut left = Word::from_bits(&w.bits()[..w.len() - 1]);
                left.push(0);
                while left.len() < self.max_source_len() {
                    left.push(1);
                }
                self.source_prefix_of(&left)
                    .expect("sources form a complete prefix code")
            }
        };
        let p = &self.pairs()[i];
        p.source.len() as i64 - p.target.len() as i64
    }

    /// Whether `self` maps `[u]` linearly onto `[v]`, i.e. some (possibly
    /// unreduced) diagram of `self` has the pair `u -> v`.
    pub fn has_branch_pair(&self, u: &Word, v: &Word) -> bool {
        if let Some(i) = self.source_prefix_of(u) {
            let p = &self.pairs()[i];
            let rest = u.strip_prefix(&p.source).expect("source prefixes u");
            return v.len() == p.target.len() + rest.len()
                && v.strip_prefix(&p.target) == Some(rest);
        }
        // u is a strict prefix of every source below it
        let below: Vec<&BranchPair> = self
            .pairs()
            .iter()
            .filter(|p| u.is_prefix_of(&p.source))
            .collect();
        !below.is_empty()
            && below.iter().all(|p| {
                let s = p.source.strip_prefix(u).expect("filtered on prefix");
                p.target.strip_prefix(v) == Some(s)
            })
    }

    /// Slope 1 at both `0+` and `1-`.
    pub fn in_derived_subgroup(&self) -> bool {
        self.slope_log2(Endpoint::Zero) == 0 && self.slope_log2(Endpoint::One) == 0
    }

    /// Interior breakpoints of the diagram: left endpoints `.u_i`, `i ≥ 1`.
    pub fn breakpoints(&self) -> Vec<Dyadic> {
        self.pairs()
            .iter()
            .skip(1)
            .map(|p| Dyadic::from_expansion(&p.source))
            .collect()
    }

    /// Exponents `(a, b, c, d)` with leftmost pair `0^a -> 0^b` and rightmost
    /// pair `1^c -> 1^d`. The identity is read from its one-caret expansion
    /// `0 -> 0, 1 -> 1`.
    pub fn boundary_exponents(&self) -> (usize, usize, usize, usize) {
        if self.is_identity() {
            return (1, 1, 1, 1);
        }
        let first = &self.pairs()[0];
        let last = &self.pairs()[self.pairs().len() - 1];
        (
            first.source.len(),
            first.target.len(),
            last.source.len(),
            last.target.len(),
        )
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Element{")?;
        for (i, p) in self.pairs().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", p)?;
        }
        f.write_str("}")
    }
}
