//! The abelianization `F -> Z²` and finite-index analysis.

use std::fmt;
use std::ops::{Add, Neg};

use num_integer::Integer;
use serde::Serialize;

use crate::element::{Element, Endpoint, Side};
use crate::error::{Error, Result};
use crate::saturation::{check_suffice, saturate, WordPartition};
use crate::subgroup::{ball, branch_pairs_of};

/// `(log2 f'(0+), log2 f'(1-))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize)]
pub struct AbelianImage {
    pub a: i64,
    pub b: i64,
}

impl AbelianImage {
    pub fn new(a: i64, b: i64) -> Self {
        AbelianImage { a, b }
    }
}

impl Add for AbelianImage {
    type Output = AbelianImage;

    fn add(self, o: AbelianImage) -> AbelianImage {
        AbelianImage::new(self.a + o.a, self.b + o.b)
    }
}

impl Neg for AbelianImage {
    type Output = AbelianImage;

    fn neg(self) -> AbelianImage {
        AbelianImage::new(-self.a, -self.b)
    }
}

impl fmt::Display for AbelianImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

pub fn abelianize(f: &Element) -> AbelianImage {
    AbelianImage::new(f.slope_log2(Endpoint::Zero), f.slope_log2(Endpoint::One))
}

/// Index of a subgroup of `Z²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeIndex {
    Finite(u64),
    Infinite,
}

impl fmt::Display for LatticeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeIndex::Finite(n) => write!(f, "{}", n),
            LatticeIndex::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for LatticeIndex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            LatticeIndex::Finite(n) => s.serialize_u64(*n),
            LatticeIndex::Infinite => s.serialize_str("infinite"),
        }
    }
}

/// Subgroup of `Z²` spanned by finitely many vectors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lattice2 {
    pub generators: Vec<AbelianImage>,
}

impl Lattice2 {
    pub fn new(generators: Vec<AbelianImage>) -> Self {
        Lattice2 { generators }
    }

    pub fn of_elements<'a, I: IntoIterator<Item = &'a Element>>(elements: I) -> Self {
        Lattice2::new(elements.into_iter().map(abelianize).collect())
    }

    pub fn index(&self) -> Result<LatticeIndex> {
        lattice_index(self)
    }
}

/// Hermite-style reduction: Euclid on the first coordinate collapses all
/// generators to one pivot row `(g, c)` plus rows `(0, d_i)`; the index is
/// `|g · gcd(d_i)|`, infinite when either factor vanishes.
pub fn lattice_index(l: &Lattice2) -> Result<LatticeIndex> {
    let mut pivot: (i64, i64) = (0, 0);
    let mut second: i64 = 0;
    for g in &l.generators {
        let mut row = (g.a, g.b);
        // Euclid between pivot and row on the first coordinate
        while row.0 != 0 {
            let q = Integer::div_floor(&pivot.0, &row.0);
            let r = (
                pivot
                    .0
                    .checked_sub(q.checked_mul(row.0).ok_or(Error::Overflow("lattice"))?),
                pivot
                    .1
                    .checked_sub(q.checked_mul(row.1).ok_or(Error::Overflow("lattice"))?),
            );
            let r = match r {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(Error::Overflow("lattice")),
            };
            pivot = row;
            row = r;
        }
        second = second.gcd(&row.1);
    }
    let det = pivot
        .0
        .checked_mul(second)
        .ok_or(Error::Overflow("lattice"))?;
    Ok(if det == 0 {
        LatticeIndex::Infinite
    } else {
        LatticeIndex::Finite(det.unsigned_abs())
    })
}

/// Whether the subgroup generated by the elements contains `[F,F]`, as far
/// as the bounded search can tell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Containment {
    VerifiedWithinBudget,
    NotEstablished,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    FiniteIndex,
    InfiniteIndex,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CertificateBudget {
    pub radius: usize,
    pub depth: u32,
    pub max_elements: usize,
}

impl Default for CertificateBudget {
    fn default() -> Self {
        CertificateBudget {
            radius: 6,
            depth: 16,
            max_elements: 100_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteIndexReport {
    pub index: LatticeIndex,
    pub derived_containment: Containment,
    pub verdict: Verdict,
    #[serde(skip)]
    pub slope_witness: Option<(Element, crate::words::Dyadic)>,
}

impl FiniteIndexReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// An element fixing an interior dyadic `α` with `h'(α-) = 1`, `h'(α+) = 2`.
pub fn find_slope_witness<'a, I>(elements: I) -> Option<(Element, crate::words::Dyadic)>
where
    I: IntoIterator<Item = &'a Element>,
{
    for h in elements {
        for alpha in h.breakpoints() {
            if h.evaluate(&alpha) == alpha
                && h.slope_log2_at(&alpha, Side::Left) == 0
                && h.slope_log2_at(&alpha, Side::Right) == 1
            {
                return Some((h.clone(), alpha));
            }
        }
    }
    None
}

/// Saturated branch equivalence of the ball of the given radius.
pub fn subgroup_partition(gens: &[Element], budget: &CertificateBudget) -> Result<WordPartition> {
    let elements = ball(gens, budget.radius, budget.max_elements)?;
    saturate(&branch_pairs_of(&elements, budget.depth), budget.depth)
}

/// Finite-index certificate for `⟨gens⟩`.
///
/// The lattice index of the abelian image is exact. Containment of `[F,F]`
/// is established by the closure criterion (every mixed word equivalent,
/// via the sufficiency conditions up to the saturation depth) together with
/// an element of the ball that fixes a dyadic point with one-sided slopes
/// `1` and `2`. Containment is one-sided: failure to find it is inconclusive.
pub fn finite_index_certificate(
    gens: &[Element],
    budget: &CertificateBudget,
) -> Result<FiniteIndexReport> {
    let index = lattice_index(&Lattice2::of_elements(gens))?;
    if index == LatticeIndex::Infinite {
        return Ok(FiniteIndexReport {
            index,
            derived_containment: Containment::NotEstablished,
            verdict: Verdict::InfiniteIndex,
            slope_witness: None,
        });
    }
    let elements = ball(gens, budget.radius, budget.max_elements)?;
    let partition = saturate(&branch_pairs_of(&elements, budget.depth), budget.depth)?;
    let l = budget.depth as usize - 1;
    let closure_ok = check_suffice(&partition, l, l);
    let slope_witness = if closure_ok {
        find_slope_witness(&elements)
    } else {
        None
    };
    let contained = closure_ok && slope_witness.is_some();
    Ok(FiniteIndexReport {
        index,
        derived_containment: if contained {
            Containment::VerifiedWithinBudget
        } else {
            Containment::NotEstablished
        },
        verdict: if contained {
            Verdict::FiniteIndex
        } else {
            Verdict::Inconclusive
        },
        slope_witness,
    })
}
