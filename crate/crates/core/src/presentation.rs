//! Words over the infinite generating set `x0, x1, x2, ...`, the two
//! presentations of F, and the normal form read off a reduced diagram.

use std::fmt;

use crate::element::{BranchPair, Element};
use crate::error::{Error, Result};
use crate::words::Word;

pub mod parse;

pub use parse::parse_expression;

/// Largest generator index accepted by [`generator`] callers that take user input.
pub const MAX_GENERATOR_INDEX: u32 = 1024;

/// One letter `x_gen^exp` of a [`GroupWord`]; `exp` is never zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: u32,
    pub exp: i64,
}

/// A formal word in the generators with adjacent equal symbols merged.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroupWord {
    letters: Vec<Letter>,
}

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord {
            letters: Vec::new(),
        }
    }

    pub fn generator(gen: u32) -> Self {
        GroupWord {
            letters: vec![Letter { gen, exp: 1 }],
        }
    }

    pub fn from_letters<I: IntoIterator<Item = (u32, i64)>>(letters: I) -> Self {
        let mut w = GroupWord::identity();
        for (gen, exp) in letters {
            w.push(gen, exp);
        }
        w
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Appends `x_gen^exp`, merging with the last letter when it has the same symbol.
    pub fn push(&mut self, gen: u32, exp: i64) {
        if exp == 0 {
            return;
        }
        if let Some(last) = self.letters.last_mut() {
            if last.gen == gen {
                last.exp += exp;
                if last.exp == 0 {
                    self.letters.pop();
                }
                return;
            }
        }
        self.letters.push(Letter { gen, exp });
    }

    pub fn concat(&self, other: &GroupWord) -> GroupWord {
        let mut w = self.clone();
        for l in &other.letters {
            w.push(l.gen, l.exp);
        }
        w
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord::from_letters(self.letters.iter().rev().map(|l| (l.gen, -l.exp)))
    }

    pub fn pow(&self, k: i64) -> GroupWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut w = GroupWord::identity();
        for _ in 0..k.unsigned_abs() {
            for l in &base.letters {
                w.push(l.gen, l.exp);
            }
        }
        w
    }

    /// `b⁻¹ · self · b`, written `self^b`.
    pub fn conjugate(&self, b: &GroupWord) -> GroupWord {
        b.inverse().concat(self).concat(b)
    }

    pub fn total_length(&self) -> u64 {
        self.letters.iter().map(|l| l.exp.unsigned_abs()).sum()
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("e");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if l.exp == 1 {
                write!(f, "x{}", l.gen)?;
            } else {
                write!(f, "x{}^{}", l.gen, l.exp)?;
            }
        }
        Ok(())
    }
}

/// The generator `x_i` as an element.
///
/// `x_i` is the identity on `[0], [10], ..., [1^(i-1) 0]` and acts as `x0`
/// on `[1^i]`; this agrees with `x_(i+1) = x0^-i x1 x0^i`.
pub fn generator(i: u32) -> Element {
    let i = i as usize;
    let mut pairs = Vec::with_capacity(i + 3);
    for j in 0..i {
        let w = Word::runs(&[(1, j), (0, 1)]);
        pairs.push(BranchPair::new(w.clone(), w));
    }
    let top = Word::ones(i);
    for (u, v) in [("00", "0"), ("01", "10"), ("1", "11")] {
        pairs.push(BranchPair::new(
            top.append(&u.parse().expect("literal")),
            top.append(&v.parse().expect("literal")),
        ));
    }
    Element::from_pairs(pairs).expect("generator diagram is well formed")
}

/// `x = x0`.
pub fn x() -> Element {
    generator(0)
}

/// `y = x0^2 x1`.
pub fn y() -> Element {
    generator(0).power(2).multiply(&generator(1))
}

/// Multiplies the letters left to right.
pub fn element_of(w: &GroupWord) -> Element {
    w.letters.iter().fold(Element::identity(), |acc, l| {
        acc.multiply(&generator(l.gen).power(l.exp))
    })
}

/// Exponent of a leaf of a tree: the length of the maximal run of left
/// edges ending at the leaf that does not reach the right side of the tree.
fn leaf_exponent(leaf: &Word) -> i64 {
    let r = leaf.trailing(0);
    if r == 0 {
        return 0;
    }
    let top = Word::from_bits(&leaf.bits()[..leaf.len() - r]);
    if top.is_constant(1) {
        (r - 1) as i64
    } else {
        r as i64
    }
}

/// Normal form `x_i1^a1 ... x_ik^ak x_jl^-bl ... x_j1^-b1` with strictly
/// increasing indices on each side.
///
/// Convention: the positive part is read from the leaf exponents of the
/// source tree `T+`, the negative part from the target tree `T-`, so the
/// element equals `P · N⁻¹` where `P` and `N` are the positive words of the
/// two trees. For the reduced diagram this is the unique normal form.
pub fn normal_form(f: &Element) -> GroupWord {
    let mut w = GroupWord::identity();
    for (k, p) in f.pairs().iter().enumerate() {
        w.push(k as u32, leaf_exponent(&p.source));
    }
    let negative: Vec<(u32, i64)> = f
        .pairs()
        .iter()
        .enumerate()
        .map(|(k, p)| (k as u32, leaf_exponent(&p.target)))
        .filter(|&(_, e)| e != 0)
        .collect();
    for (k, e) in negative.into_iter().rev() {
        w.push(k, -e);
    }
    w
}

/// Checks both finite-presentation relators and `x_i^{x_j} = x_(i+1)` for
/// `0 ≤ j < i ≤ 8`, where `gens[i]` plays the role of `x_i` (at least ten
/// entries are needed).
pub fn check_presentation(gens: &[Element]) -> bool {
    assert!(gens.len() >= 10, "need x0..x9");
    let (x0, x1) = (&gens[0], &gens[1]);
    let a = x0.multiply(&x1.invert());
    let commutator =
        |p: &Element, q: &Element| p.invert().multiply(&q.invert()).multiply(p).multiply(q);
    let r1 = commutator(&a, &x1.conjugate_by(x0));
    let r2 = commutator(&a, &x1.conjugate_by(&x0.power(2)));
    if !r1.is_identity() || !r2.is_identity() {
        return false;
    }
    (1..=8).all(|i| (0..i).all(|j| gens[i].conjugate_by(&gens[j]) == gens[i + 1]))
}

pub fn verify_defining_relations() -> bool {
    let gens: Vec<Element> = (0..10).map(generator).collect();
    check_presentation(&gens)
}

/// Parses a word or expression and returns its element.
pub fn element_of_expression(text: &str) -> Result<Element> {
    Ok(element_of(&parse_expression(text)?))
}

pub(crate) fn capacity(what: &'static str, limit: usize) -> Error {
    Error::CapacityExceeded { what, limit }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_match_published_diagrams() {
        assert_eq!(
            generator(0),
            Element::from_str_pairs(&[("00", "0"), ("01", "10"), ("1", "11")]).unwrap()
        );
        assert_eq!(
            generator(1),
            Element::from_str_pairs(&[("0", "0"), ("100", "10"), ("101", "110"), ("11", "111")])
                .unwrap()
        );
    }

    #[test]
    fn generators_agree_with_conjugation_definition() {
        let x0 = generator(0);
        let x1 = generator(1);
        for i in 1..=10u32 {
            let conj = x0
                .power(-(i as i64))
                .multiply(&x1)
                .multiply(&x0.power(i as i64));
            assert_eq!(generator(i + 1), conj, "x_{}", i + 1);
        }
    }

    #[test]
    fn element_of_examples() {
        assert_eq!(element_of(&GroupWord::generator(0)), generator(0));
        let yw = GroupWord::from_letters([(0, 2), (1, 1)]);
        assert_eq!(
            element_of(&yw),
            Element::from_str_pairs(&[
                ("000", "0"),
                ("0010", "10"),
                ("0011", "110"),
                ("01", "1110"),
                ("1", "1111")
            ])
            .unwrap()
        );
        assert_eq!(element_of(&GroupWord::identity()), Element::identity());
    }

    #[test]
    fn normal_form_examples() {
        assert_eq!(normal_form(&Element::identity()), GroupWord::identity());
        for n in 1..=8i64 {
            let mut expected = GroupWord::from_letters([(0, 2 * n)]);
            for k in 0..n {
                expected.push((1 + 3 * k) as u32, 1);
            }
            assert_eq!(normal_form(&y().power(n)), expected, "y^{}", n);
        }
        let conj = generator(0)
            .invert()
            .multiply(&generator(1))
            .multiply(&generator(0));
        assert_eq!(normal_form(&conj), GroupWord::generator(2));
        assert_eq!(
            normal_form(&generator(0).invert()),
            GroupWord::from_letters([(0, -1)])
        );
    }

    #[test]
    fn normal_form_roundtrip_small_words() {
        let words = [
            vec![(1, -1), (0, 2)],
            vec![(0, -1), (1, 1), (0, -2), (1, 3)],
            vec![(2, 1), (0, -1), (3, -2)],
            vec![(1, 1), (1, 1), (0, -3), (2, 1), (0, 1)],
        ];
        for letters in words {
            let f = element_of(&GroupWord::from_letters(letters.clone()));
            let nf = normal_form(&f);
            assert_eq!(element_of(&nf), f, "{:?} -> {}", letters, nf);
        }
    }

    #[test]
    fn defining_relations_hold() {
        assert!(verify_defining_relations());
        assert_eq!(generator(2).conjugate_by(&generator(0)), generator(3));
    }

    #[test]
    fn perturbed_generators_break_the_infinite_presentation() {
        let mut gens: Vec<Element> = (0..10).map(generator).collect();
        gens[1] = generator(0);
        assert!(!check_presentation(&gens));
    }

    #[test]
    fn word_algebra() {
        let w = GroupWord::from_letters([(0, 2), (1, 1)]);
        assert_eq!(w.concat(&w.inverse()), GroupWord::identity());
        assert_eq!(w.pow(2).to_string(), "x0^2 x1 x0^2 x1");
        assert_eq!(
            GroupWord::generator(1)
                .conjugate(&GroupWord::generator(0))
                .to_string(),
            "x0^-1 x1 x0"
        );
        assert_eq!(
            GroupWord::from_letters([(3, 1), (3, -1)]),
            GroupWord::identity()
        );
    }
}
