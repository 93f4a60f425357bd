//! Strategies and property bodies shared by the property and acceptance suites.
#![allow(dead_code)]

use proptest::prelude::*;
use proptest::sample::Index;
use proptest::test_runner::TestCaseError;

use thompson_core::abelian::{abelianize, lattice_index, AbelianImage, Lattice2, LatticeIndex};
use thompson_core::element::{BranchPair, Element, Side, TreeDiagram};
use thompson_core::presentation::{element_of, normal_form, parse_expression, GroupWord};
use thompson_core::saturation::{saturate, saturate_with_witnesses, WordPartition};
use thompson_core::subgroup::{ball, branch_pairs_of, branch_pairs_with_origin};
use thompson_core::words::{interval_of, Dyadic, Word};

pub type Outcome = Result<(), TestCaseError>;

pub fn group_word(max_len: usize) -> impl Strategy<Value = GroupWord> {
    prop::collection::vec(
        (0u32..5, prop_oneof![Just(1i64), Just(-1i64), -3i64..=3]),
        0..max_len,
    )
    .prop_map(GroupWord::from_letters)
}

pub fn element(max_len: usize) -> impl Strategy<Value = Element> {
    group_word(max_len).prop_map(|w| element_of(&w))
}

pub fn grid_point(bits: u32) -> impl Strategy<Value = Dyadic> {
    (0u64..=(1u64 << bits)).prop_map(move |k| Dyadic::new(k, bits).unwrap())
}

pub fn word(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0u8..2, 0..=max_len).prop_map(|b| Word::from_bits(&b))
}

pub fn seed_pairs(max_len: usize) -> impl Strategy<Value = Vec<(Word, Word)>> {
    prop::collection::vec((word(max_len), word(max_len)), 0..6)
}

/// Evaluation straight from a list of pairs, by interval arithmetic.
pub fn evaluate_pairs(pairs: &[BranchPair], t: &Dyadic) -> Dyadic {
    if t.is_one() {
        return Dyadic::one();
    }
    let w = t.expansion().unwrap();
    let p = pairs
        .iter()
        .find(|p| {
            let (lo, hi) = interval_of(&p.source);
            &lo <= t && t < &hi
        })
        .unwrap();
    let tail = &w.bits()[p.source.len().min(w.len())..];
    Dyadic::from_expansion(&p.target.append_bits(tail))
}

/// Splits the pairs at the given positions into their two children.
pub fn expand(pairs: &[BranchPair], picks: &[Index]) -> Vec<BranchPair> {
    let mut out = pairs.to_vec();
    for ix in picks {
        let i = ix.index(out.len());
        let p = out.remove(i);
        out.insert(i, BranchPair::new(p.source.child(1), p.target.child(1)));
        out.insert(i, BranchPair::new(p.source.child(0), p.target.child(0)));
    }
    out
}

pub fn lattice(v: &[(i64, i64)]) -> Lattice2 {
    Lattice2::new(v.iter().map(|&(a, b)| AbelianImage::new(a, b)).collect())
}

/// Independent index oracle: gcd of the 2x2 minors.
pub fn minors_gcd(v: &[(i64, i64)]) -> LatticeIndex {
    use num_integer::Integer;
    let mut g = 0i64;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            g = g.gcd(&(v[i].0 * v[j].1 - v[i].1 * v[j].0));
        }
    }
    if g == 0 {
        LatticeIndex::Infinite
    } else {
        LatticeIndex::Finite(g as u64)
    }
}

pub fn group_axioms(f: &Element, g: &Element, h: &Element) -> Outcome {
    prop_assert_eq!(f.multiply(g).multiply(h), f.multiply(&g.multiply(h)));
    prop_assert_eq!(&f.multiply(&Element::identity()), f);
    prop_assert_eq!(&Element::identity().multiply(f), f);
    prop_assert!(f.multiply(&f.invert()).is_identity());
    prop_assert!(f.invert().multiply(f).is_identity());
    prop_assert_eq!(f.multiply(g).invert(), g.invert().multiply(&f.invert()));
    Ok(())
}

pub fn evaluation_homomorphism(f: &Element, g: &Element, t: &Dyadic) -> Outcome {
    prop_assert_eq!(f.multiply(g).evaluate(t), g.evaluate(&f.evaluate(t)));
    prop_assert_eq!(&f.invert().evaluate(&f.evaluate(t)), t);
    Ok(())
}

pub fn monotone(f: &Element, s: &Dyadic, t: &Dyadic) -> Outcome {
    if s < t {
        prop_assert!(f.evaluate(s) < f.evaluate(t));
    }
    prop_assert!(f.evaluate(&Dyadic::zero()).is_zero());
    prop_assert!(f.evaluate(&Dyadic::one()).is_one());
    Ok(())
}

pub fn reduce_idempotent(f: &Element, picks: &[Index], t: &Dyadic) -> Outcome {
    let pairs = expand(f.pairs(), picks);
    let d = TreeDiagram::new(pairs.clone()).unwrap();
    let r = d.reduce();
    prop_assert!(r.is_reduced());
    prop_assert_eq!(r.reduce(), r.clone());
    prop_assert_eq!(r.pairs(), f.pairs());
    prop_assert_eq!(evaluate_pairs(&pairs, t), f.evaluate(t));
    prop_assert_eq!(evaluate_pairs(r.pairs(), t), f.evaluate(t));
    Ok(())
}

pub fn branch_pairs_compose(f: &Element, g: &Element) -> Outcome {
    let fg = f.multiply(g);
    for p in f.pairs() {
        for q in g.pairs() {
            if let Some(rest) = q.source.strip_prefix(&p.target) {
                prop_assert!(fg.has_branch_pair(&p.source.append_bits(rest), &q.target));
            } else if let Some(rest) = p.target.strip_prefix(&q.source) {
                prop_assert!(fg.has_branch_pair(&p.source, &q.target.append_bits(rest)));
            }
        }
    }
    Ok(())
}

pub fn slopes_add(f: &Element, g: &Element, t: &Dyadic) -> Outcome {
    prop_assert_eq!(abelianize(&f.multiply(g)), abelianize(f) + abelianize(g));
    if !t.is_zero() && !t.is_one() {
        let ft = f.evaluate(t);
        for side in [Side::Left, Side::Right] {
            prop_assert_eq!(
                f.multiply(g).slope_log2_at(t, side),
                f.slope_log2_at(t, side) + g.slope_log2_at(&ft, side)
            );
        }
    }
    Ok(())
}

pub fn abelianization_laws(f: &Element, g: &Element) -> Outcome {
    prop_assert_eq!(abelianize(&f.multiply(g)), abelianize(f) + abelianize(g));
    prop_assert_eq!(abelianize(&f.invert()), -abelianize(f));
    let comm = f.invert().multiply(&g.invert()).multiply(f).multiply(g);
    prop_assert!(comm.in_derived_subgroup());
    prop_assert_eq!(
        f.in_derived_subgroup(),
        abelianize(f) == AbelianImage::new(0, 0)
    );
    Ok(())
}

pub fn lattice_moves(v: &[(i64, i64)], i: Index, j: Index, q: i64) -> Outcome {
    let base = lattice_index(&lattice(v)).unwrap();
    prop_assert_eq!(base, minors_gcd(v));
    let (i, j) = (i.index(v.len()), j.index(v.len()));
    let mut w = v.to_vec();
    if i != j {
        w[i] = (w[i].0 + q * v[j].0, w[i].1 + q * v[j].1);
    }
    w.swap(0, j);
    w[i] = (-w[i].0, -w[i].1);
    prop_assert_eq!(lattice_index(&lattice(&w)).unwrap(), base);
    Ok(())
}

pub fn normal_form_shape(w: &GroupWord) -> Outcome {
    let f = element_of(w);
    let nf = normal_form(&f);
    prop_assert_eq!(element_of(&nf), f);
    let letters = nf.letters();
    let split = letters
        .iter()
        .position(|l| l.exp < 0)
        .unwrap_or(letters.len());
    prop_assert!(letters[split..].iter().all(|l| l.exp < 0));
    prop_assert!(letters[..split].windows(2).all(|p| p[0].gen < p[1].gen));
    prop_assert!(letters[split..].windows(2).all(|p| p[0].gen > p[1].gen));
    // an index on both sides needs x_(i+1) somewhere
    for l in &letters[..split] {
        if letters[split..].iter().any(|m| m.gen == l.gen) {
            prop_assert!(letters.iter().any(|m| m.gen == l.gen + 1));
        }
    }
    Ok(())
}

/// Inserts `x_j^-1 x_i x_j x_(i+1)^-1` (`j < i`), a spelling of the identity.
pub fn normal_form_spelling(w: &GroupWord, pos: Index, i: u32, j: u32) -> Outcome {
    let letters: Vec<(u32, i64)> = w.letters().iter().map(|l| (l.gen, l.exp)).collect();
    let k = pos.index(letters.len() + 1);
    let mut spelled = letters[..k].to_vec();
    spelled.extend([(j, -1), (i, 1), (j, 1), (i + 1, -1)]);
    spelled.extend_from_slice(&letters[k..]);
    let other = GroupWord::from_letters(spelled);
    prop_assert_eq!(
        normal_form(&element_of(&other)),
        normal_form(&element_of(w))
    );
    Ok(())
}

pub fn conjugation_sugar(a: &GroupWord, b: &GroupWord) -> Outcome {
    let text = format!("({})^({})", a, b);
    let parsed = element_of(&parse_expression(&text).unwrap());
    prop_assert_eq!(parsed, element_of(a).conjugate_by(&element_of(b)));
    Ok(())
}

pub fn saturation_order_independent(seed: &[(Word, Word)], shift: Index, flip: bool) -> Outcome {
    let p = saturate(seed, 6).unwrap();
    let mut other = seed.to_vec();
    if !other.is_empty() {
        let k = shift.index(other.len());
        other.rotate_left(k);
    }
    other.reverse();
    if flip {
        other = other.into_iter().map(|(u, v)| (v, u)).collect();
    }
    prop_assert_eq!(saturate(&other, 6).unwrap(), p);
    Ok(())
}

pub fn saturation_monotone(seed: &[(Word, Word)], extra: &[(Word, Word)]) -> Outcome {
    let p = saturate(seed, 5).unwrap();
    let mut more = seed.to_vec();
    more.extend_from_slice(extra);
    prop_assert!(p.refines(&saturate(&more, 5).unwrap()));
    prop_assert!(p.refines(&saturate(seed, 7).unwrap()));
    Ok(())
}

fn all_words(max_len: usize) -> Vec<Word> {
    (0..(1u32 << (max_len + 1)) - 1)
        .map(Word::from_trie_index)
        .collect()
}

/// Exhaustive: every merged pair stays merged under every suffix that fits.
pub fn append_closure(p: &WordPartition) -> Outcome {
    let depth = p.depth() as usize;
    let words = all_words(depth);
    for (u, v) in p.merged_pairs() {
        for w in &words {
            if u.len() + w.len() > depth || v.len() + w.len() > depth {
                continue;
            }
            prop_assert!(
                p.equivalent(&u.append(w), &v.append(w)),
                "{}·{} vs {}·{}",
                u,
                w,
                v,
                w
            );
        }
    }
    Ok(())
}

pub fn right_congruence(seed: &[(Word, Word)], depth: u32) -> Outcome {
    let p = saturate(seed, depth).unwrap();
    for (u, v) in seed {
        prop_assert!(p.equivalent(u, v));
    }
    append_closure(&p)
}

pub fn radius_monotone(gens: &[Element], radius: usize, depth: u32) -> Outcome {
    let partition = |r: usize| {
        saturate(
            &branch_pairs_of(&ball(gens, r, 100_000).unwrap(), depth),
            depth,
        )
        .unwrap()
    };
    prop_assert!(partition(radius).refines(&partition(radius + 1)));
    Ok(())
}

/// Rebuilds an element from each witness chain and checks it has the pair.
pub fn witness_soundness(gens: &[Element], picks: &[Index]) -> Outcome {
    let depth = 8;
    let elements = ball(gens, 3, 100_000).unwrap();
    let tagged = branch_pairs_with_origin(&elements, depth);
    let seed: Vec<(Word, Word)> = tagged.iter().map(|(p, _)| p.clone()).collect();
    let (p, wit) = saturate_with_witnesses(&seed, depth).unwrap();
    let merged = p.merged_pairs();
    if merged.is_empty() {
        return Ok(());
    }
    for ix in picks {
        let (u, v) = &merged[ix.index(merged.len())];
        let steps = wit.explain(u, v, 10_000).unwrap();
        let mut product = Element::identity();
        for s in &steps {
            let e = &elements[tagged[s.seed].1];
            product = product.multiply(&if s.forward { e.clone() } else { e.invert() });
        }
        prop_assert!(
            product.has_branch_pair(u, v),
            "{} -> {} via {} steps",
            u,
            v,
            steps.len()
        );
    }
    Ok(())
}
