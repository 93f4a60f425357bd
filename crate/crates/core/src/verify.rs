//! Replays of the branch-table, normal-form, saturation and index lemmas
//! at concrete parameters.
//!
//! A report is `fail` only when an exact computation contradicts a stated
//! identity. Saturation checks that come up short are `inconclusive`: the
//! closure is exact for its seed, but the seed (ball radius, relation
//! selection, depth) is a budget.

use std::fmt::{self, Write as _};

use num_integer::Integer;
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::abelian::{abelianize, lattice_index, AbelianImage, Lattice2, LatticeIndex};
use crate::element::{BranchPair, Element, Side};
use crate::presentation::{element_of, element_of_expression, generator, normal_form, x, y};
use crate::presentation::{verify_defining_relations as relations_hold, GroupWord};
use crate::relations::{
    k_prime_system, k_prime_system_complete, k_system, k_system_complete, RelationSystem,
};
use crate::saturation::{all_mixed_equivalent, saturate, suffice_failures, WordPartition};
use crate::subgroup::{ball, branch_pairs_of};
use crate::words::{Dyadic, Word};

/// At most this many individual failures are listed per check.
const MAX_LISTED: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Inconclusive,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Inconclusive => "inconclusive",
            Status::Fail => "fail",
        })
    }
}

/// Named parameters in insertion order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Parameters(pub Vec<(String, Value)>);

impl Parameters {
    fn with(mut self, name: &str, value: impl Into<Value>) -> Self {
        self.0.push((name.to_string(), value.into()));
        self
    }
}

impl Serialize for Parameters {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl fmt::Display for Parameters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match v {
                Value::String(s) => write!(f, "{}={}", k, s)?,
                other => write!(f, "{}={}", k, other)?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub lemma_id: String,
    pub parameters: Parameters,
    pub status: Status,
    pub details: Vec<String>,
}

/// Accumulates checks; the status is the worst outcome seen.
struct Checks {
    status: Status,
    details: Vec<String>,
}

impl Checks {
    fn new() -> Self {
        Checks {
            status: Status::Pass,
            details: Vec::new(),
        }
    }

    fn note(&mut self, msg: impl Into<String>) {
        self.details.push(msg.into());
    }

    /// An identity decided by exact computation.
    fn exact(&mut self, ok: bool, msg: impl Into<String>) -> bool {
        self.record(ok, Status::Fail, msg.into())
    }

    /// A saturation fact that may be out of budget.
    fn bounded(&mut self, ok: bool, msg: impl Into<String>) -> bool {
        self.record(ok, Status::Inconclusive, msg.into())
    }

    fn record(&mut self, ok: bool, on_failure: Status, msg: String) -> bool {
        if ok {
            self.details.push(format!("ok: {}", msg));
        } else {
            self.details.push(format!("{}: {}", on_failure, msg));
            self.status = self.status.max(on_failure);
        }
        ok
    }

    fn report(self, lemma_id: &str, parameters: Parameters) -> VerificationReport {
        VerificationReport {
            lemma_id: lemma_id.to_string(),
            parameters,
            status: self.status,
            details: self.details,
        }
    }
}

/// `msg`, followed by the first few offending items if there are any.
fn listed<T: fmt::Display>(msg: impl Into<String>, items: &[T]) -> String {
    let mut s = msg.into();
    if items.is_empty() {
        return s;
    }
    s.push_str(", missing: ");
    s.push_str(
        &items
            .iter()
            .take(MAX_LISTED)
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join("; "),
    );
    if items.len() > MAX_LISTED {
        write!(s, "; ... ({} total)", items.len()).expect("writing to a String");
    }
    s
}

fn pair(u: Word, v: Word) -> BranchPair {
    BranchPair::new(u, v)
}

/// Closed-form reduced branch pairs of `x^m`.
pub fn x_power_table(m: usize) -> Vec<BranchPair> {
    let mut out = vec![pair(Word::zeros(m + 1), Word::zeros(1))];
    for k in (1..=m).rev() {
        out.push(pair(
            Word::runs(&[(0, k), (1, 1)]),
            Word::runs(&[(1, m + 1 - k), (0, 1)]),
        ));
    }
    out.push(pair(Word::ones(1), Word::ones(m + 1)));
    out
}

/// Closed-form reduced branch pairs of `y^n`.
pub fn y_power_table(n: usize) -> Vec<BranchPair> {
    let mut out = vec![pair(Word::zeros(2 * n + 1), Word::zeros(1))];
    for k in (1..=n).rev() {
        out.push(pair(
            Word::runs(&[(0, 2 * k), (1, 1), (0, 1)]),
            Word::runs(&[(1, 1 + 3 * (n - k)), (0, 1)]),
        ));
        out.push(pair(
            Word::runs(&[(0, 2 * k), (1, 2)]),
            Word::runs(&[(1, 2 + 3 * (n - k)), (0, 1)]),
        ));
        out.push(pair(
            Word::runs(&[(0, 2 * k - 1), (1, 1)]),
            Word::runs(&[(1, 3 * (n - k + 1)), (0, 1)]),
        ));
    }
    out.push(pair(Word::ones(1), Word::ones(3 * n + 1)));
    out
}

fn sorted(mut pairs: Vec<BranchPair>) -> Vec<BranchPair> {
    pairs.sort_by(|a, b| a.source.cmp(&b.source));
    pairs
}

fn repeated(f: &Element, k: usize) -> Element {
    (0..k).fold(Element::identity(), |acc, _| acc.multiply(f))
}

fn compare_table(c: &mut Checks, name: &str, table: Vec<BranchPair>, f: &Element, g: &Element) {
    let table = sorted(table);
    let power_ok = f.pairs() == table.as_slice();
    let repeat_ok = g == f;
    if !power_ok || !repeat_ok {
        c.exact(
            false,
            format!(
                "{}: table {}, repeated product {}",
                name, power_ok, repeat_ok
            ),
        );
    }
}

/// Compares `x^m`, `y^n` for `m ≤ m_max`, `n ≤ n_max` against the closed-form
/// tables, computing each power by squaring and by repeated multiplication.
pub fn verify_branch_tables(m_max: usize, n_max: usize) -> VerificationReport {
    let mut c = Checks::new();
    let (x, y) = (x(), y());
    for m in 1..=m_max {
        compare_table(
            &mut c,
            &format!("x^{}", m),
            x_power_table(m),
            &x.power(m as i64),
            &repeated(&x, m),
        );
    }
    for n in 1..=n_max {
        compare_table(
            &mut c,
            &format!("y^{}", n),
            y_power_table(n),
            &y.power(n as i64),
            &repeated(&y, n),
        );
    }
    if c.status == Status::Pass {
        c.note(format!(
            "x^m for m <= {} and y^n for n <= {} match their tables",
            m_max, n_max
        ));
    }
    c.report(
        "branch-tables",
        Parameters::default()
            .with("m_max", m_max)
            .with("n_max", n_max),
    )
}

/// `x1 x4 x7 ... x_(1 + 3(count-1))`.
pub fn slope_word(count: usize) -> GroupWord {
    GroupWord::from_letters((0..count).map(|i| (1 + 3 * i as u32, 1)))
}

/// `normal_form(y^(mn)) = x0^(2mn) x1 x4 ...`, the element `h = x^(-2mn) y^(mn)`
/// equals `x1 x4 ...`, and `h` fixes `1/2` with slopes `1` and `2` there.
pub fn verify_slope_element(m: usize, n: usize) -> VerificationReport {
    let mut c = Checks::new();
    let count = m * n;
    let params = Parameters::default().with("m", m).with("n", n);
    let y_mn = y().power(n as i64).power(m as i64);
    let tail = slope_word(count);
    let expected = GroupWord::from_letters([(0, 2 * count as i64)]).concat(&tail);
    let nf = normal_form(&y_mn);
    c.exact(
        nf == expected,
        format!("normal form of y^{} is {}", count, nf),
    );
    let h = x().power(-2 * count as i64).multiply(&y_mn);
    c.exact(
        h == element_of(&tail),
        format!("x^-{} y^{} = {}", 2 * count, count, tail),
    );
    let half = Dyadic::parse("1/2").expect("literal");
    c.exact(h.evaluate(&half) == half, "h(1/2) = 1/2");
    let (left, right) = (
        h.slope_log2_at(&half, Side::Left),
        h.slope_log2_at(&half, Side::Right),
    );
    c.exact(
        left == 0 && right == 1,
        format!("slope logs at 1/2: ({}, {})", left, right),
    );
    if count > 1 {
        let later: Vec<Element> = tail.letters()[1..]
            .iter()
            .map(|l| generator(l.gen))
            .collect();
        let fixes = (0..=48u32).all(|k| {
            let t = Dyadic::new(k, 6).expect("k/64 <= 3/4");
            later.iter().all(|g| g.evaluate(&t) == t)
        });
        c.exact(fixes, "x_i for i > 1 fix [0, 3/4] on the grid k/64");
    }
    c.report("slope-element", params)
}

fn unmerged(p: &WordPartition, sys: &RelationSystem) -> Vec<String> {
    sys.instances
        .iter()
        .filter(|i| !p.equivalent(&i.left, &i.right))
        .map(|i| i.to_string())
        .collect()
}

/// Every instance of (a)–(f) with both sides of length ≤ `depth` is merged by
/// the saturated branch pairs of the radius-`radius` ball of `{x^m, y^n}`.
pub fn verify_k_in_h(
    m: usize,
    n: usize,
    radius: usize,
    depth: u32,
    budget: usize,
) -> VerificationReport {
    let mut c = Checks::new();
    let params = Parameters::default()
        .with("m", m)
        .with("n", n)
        .with("K", radius)
        .with("L", depth);
    let gens = [x().power(m as i64), y().power(n as i64)];
    let elements = match ball(&gens, radius, budget) {
        Ok(e) => e,
        Err(e) => {
            c.bounded(false, format!("ball enumeration: {}", e));
            return c.report("k-in-h", params);
        }
    };
    let seed = branch_pairs_of(&elements, depth);
    c.note(format!(
        "{} ball elements, {} branch pairs",
        elements.len(),
        seed.len()
    ));
    let p = match saturate(&seed, depth) {
        Ok(p) => p,
        Err(e) => {
            c.bounded(false, format!("saturation: {}", e));
            return c.report("k-in-h", params);
        }
    };
    let sys = k_system(m, n, depth);
    let missing = unmerged(&p, &sys);
    c.bounded(
        missing.is_empty(),
        listed(
            format!(
                "{} of {} instances merged",
                sys.instances.len() - missing.len(),
                sys.instances.len()
            ),
            &missing,
        ),
    );
    c.report("k-in-h", params)
}

fn saturate_or_note(
    c: &mut Checks,
    what: &str,
    sys: &RelationSystem,
    depth: u32,
) -> Option<WordPartition> {
    match saturate(&sys.pairs(), depth) {
        Ok(p) => Some(p),
        Err(e) => {
            c.bounded(false, format!("saturating {}: {}", what, e));
            None
        }
    }
}

fn check_inclusion(
    c: &mut Checks,
    depth: u32,
    source: RelationSystem,
    bounded_source: RelationSystem,
    target: RelationSystem,
) {
    let label = format!("{} within the closure of {}", target.name, source.name);
    let Some(p) = saturate_or_note(c, &source.name.to_string(), &source, depth) else {
        return;
    };
    let missing = unmerged(&p, &target);
    let ok = c.bounded(
        missing.is_empty(),
        listed(
            format!(
                "{}: {} of {} instances",
                label,
                target.instances.len() - missing.len(),
                target.instances.len()
            ),
            &missing,
        ),
    );
    if ok {
        if let Ok(pb) = saturate(&bounded_source.pairs(), depth) {
            let miss_b = unmerged(&pb, &target).len();
            c.note(format!(
                "with depth-bounded relations only: {} of {} instances",
                target.instances.len() - miss_b,
                target.instances.len()
            ));
        }
    }
}

/// `K'(n)` is derivable from the relations of `K(m, n)`; when `2 | n` (resp.
/// `3 | n`), `K'(n/2)` (resp. `K'(n/3)`) is derivable from those of `K'(n)`.
/// Queried instances are those of length ≤ `depth`.
pub fn verify_k_chain_inclusions(m: usize, n: usize, depth: u32) -> VerificationReport {
    let mut c = Checks::new();
    let params = Parameters::default()
        .with("m", m)
        .with("n", n)
        .with("L", depth);
    check_inclusion(
        &mut c,
        depth,
        k_system_complete(m, n, depth),
        k_system(m, n, depth),
        k_prime_system(n, depth),
    );
    for d in [2usize, 3] {
        if n.is_multiple_of(d) {
            let mut target = k_prime_system(n / d, depth);
            target.name = crate::relations::SystemName::KDoublePrime { n, divisor: d };
            check_inclusion(
                &mut c,
                depth,
                k_prime_system_complete(n, depth),
                k_prime_system(n, depth),
                target,
            );
        }
    }
    c.report("k-chain", params)
}

fn inverse_mod(a: usize, n: usize) -> Option<usize> {
    (1..=n).find(|&b| (a * b) % n == 1 % n)
}

/// Inside the closure of (a′)–(f′): `100 ~ 10`, `110 ~ 101`, `1^r 0 ~ 10` for
/// `r ≤ depth - 1`, the sufficiency conditions and all mixed words of length
/// ≤ `mixed_len` in one class.
pub fn verify_proposition(n: usize, depth: u32, mixed_len: usize) -> VerificationReport {
    let mut c = Checks::new();
    let params = Parameters::default()
        .with("n", n)
        .with("L", depth)
        .with("mixed_len", mixed_len);
    if n.gcd(&6) == 1 {
        let (b, cc) = (inverse_mod(2, n), inverse_mod(3, n));
        c.note(format!(
            "2b = 1 and 3c = 1 mod {}: b = {}, c = {}",
            n,
            b.unwrap_or(0),
            cc.unwrap_or(0)
        ));
    } else {
        c.note(format!(
            "{} is not coprime to 6; reduced through the chain inclusions",
            n
        ));
    }
    let sys = k_prime_system_complete(n, depth);
    let Some(p) = saturate_or_note(&mut c, "K'(n)", &sys, depth) else {
        return c.report("proposition", params);
    };
    let w = |s: &str| s.parse::<Word>().expect("literal");
    c.bounded(p.equivalent(&w("100"), &w("10")), "100 ~ 10");
    c.bounded(p.equivalent(&w("110"), &w("101")), "110 ~ 101");
    let r_max = (depth as usize).saturating_sub(1);
    let ladder: Vec<usize> = (1..=r_max)
        .filter(|&r| !p.equivalent(&Word::runs(&[(1, r), (0, 1)]), &w("10")))
        .collect();
    c.bounded(
        ladder.is_empty(),
        listed(format!("1^r 0 ~ 10 for r <= {}", r_max), &ladder),
    );
    let fails = suffice_failures(&p, r_max, r_max);
    c.bounded(fails.is_empty(), listed("sufficiency conditions", &fails));
    c.bounded(
        mixed_len <= depth as usize && all_mixed_equivalent(&p, mixed_len),
        format!("mixed words of length <= {} in one class", mixed_len),
    );
    if let Ok(pb) = saturate(&k_prime_system(n, depth).pairs(), depth) {
        c.note(format!(
            "with depth-bounded relations only: sufficiency {}",
            if suffice_failures(&pb, r_max, r_max).is_empty() {
                "holds"
            } else {
                "not reached"
            }
        ));
    }
    c.report("proposition", params)
}

/// `π(x^m) = (m, -m)`, `π(y^n) = (2n, -3n)` and index `mn`.
pub fn verify_index(m: usize, n: usize) -> VerificationReport {
    let mut c = Checks::new();
    let (mi, ni) = (m as i64, n as i64);
    let (xm, yn) = (x().power(mi), y().power(ni));
    let (a, b) = (abelianize(&xm), abelianize(&yn));
    c.exact(
        a == AbelianImage::new(mi, -mi),
        format!("pi(x^{}) = {}", m, a),
    );
    c.exact(
        b == AbelianImage::new(2 * ni, -3 * ni),
        format!("pi(y^{}) = {}", n, b),
    );
    match lattice_index(&Lattice2::new(vec![a, b])) {
        Ok(idx) => {
            c.exact(
                idx == LatticeIndex::Finite((m * n) as u64),
                format!("index {}", idx),
            );
        }
        Err(e) => {
            c.exact(false, format!("index: {}", e));
        }
    }
    c.report("index", Parameters::default().with("m", m).with("n", n))
}

/// For `h = g⁻¹ y^(2n) g` with `n = max(a, b, c, d)` taken from the boundary
/// pairs `0^a -> 0^b`, `1^c -> 1^d` of `g`: the two branch pairs of `h`, the
/// sufficiency conditions for `⟨x, h⟩`, and index 1 for `{x, g⁻¹ y g}`.
pub fn verify_invariable(
    label: &str,
    g: &Element,
    radius: usize,
    depth: u32,
    budget: usize,
) -> VerificationReport {
    let mut c = Checks::new();
    let params = Parameters::default()
        .with("g", label)
        .with("K", radius)
        .with("L", depth);
    let (a, b, cc, d) = g.boundary_exponents();
    let n = a.max(b).max(cc).max(d);
    c.note(format!("a={} b={} c={} d={} n={}", a, b, cc, d, n));
    let h = y().power(2 * n as i64).conjugate_by(g);
    let zeros = 2 * n - a + b;
    let ones = 3 * n - cc + d;
    let p1 = (
        Word::runs(&[(0, zeros), (1, 1), (0, 1)]),
        Word::runs(&[(1, 1 + ones), (0, 1)]),
    );
    let p2 = (
        Word::runs(&[(0, zeros), (1, 2)]),
        Word::runs(&[(1, 2 + ones), (0, 1)]),
    );
    c.exact(
        h.has_branch_pair(&p1.0, &p1.1),
        format!("h has {} -> {}", p1.0, p1.1),
    );
    c.exact(
        h.has_branch_pair(&p2.0, &p2.1),
        format!("h has {} -> {}", p2.0, p2.1),
    );
    let conj = y().conjugate_by(g);
    match lattice_index(&Lattice2::of_elements([&x(), &conj])) {
        Ok(idx) => {
            c.exact(
                idx == LatticeIndex::Finite(1),
                format!("index of <x, g^-1 y g> image: {}", idx),
            );
        }
        Err(e) => {
            c.exact(false, format!("index: {}", e));
        }
    }
    match ball(&[x(), h], radius, budget).and_then(|e| saturate(&branch_pairs_of(&e, depth), depth))
    {
        Ok(p) => {
            let r = (depth as usize).saturating_sub(1);
            let fails = suffice_failures(&p, r, r);
            c.bounded(
                fails.is_empty(),
                listed("sufficiency conditions in <x, h>", &fails),
            );
        }
        Err(e) => {
            c.bounded(false, format!("saturation of <x, h>: {}", e));
        }
    }
    c.report("invariable", params)
}

/// Both relators of the finite presentation and `x_i^(x_j) = x_(i+1)`.
pub fn verify_defining_relations() -> VerificationReport {
    let mut c = Checks::new();
    c.exact(
        relations_hold(),
        "relators and x_i^(x_j) = x_(i+1) for 0 <= j < i <= 8",
    );
    c.report("defining-relations", Parameters::default())
}

pub const LEMMA_IDS: [&str; 8] = [
    "defining-relations",
    "branch-tables",
    "index",
    "slope-element",
    "k-in-h",
    "k-chain",
    "proposition",
    "invariable",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub m_max: usize,
    pub n_max: usize,
    /// Largest `mn` for the normal-form checks.
    pub max_product: usize,
    pub radius: usize,
    pub depth: u32,
    pub budget: usize,
    pub k_in_h: Vec<(usize, usize)>,
    pub proposition: Vec<usize>,
    pub reductions: Vec<usize>,
    pub mixed_len: usize,
    /// Expressions for the conjugating elements.
    pub invariable: Vec<String>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            m_max: 12,
            n_max: 12,
            max_product: 20,
            radius: 6,
            depth: 16,
            budget: 100_000,
            k_in_h: vec![(1, 1), (2, 3), (3, 2), (6, 5), (4, 6), (5, 7)],
            proposition: vec![1, 5, 7, 11, 25],
            reductions: vec![2, 3, 4, 6, 9, 12],
            mixed_len: 10,
            invariable: [
                "e",
                "x1",
                "x0^3 x1^-1",
                "x1^2 x0^-1",
                "(x0^2 x1) x0 (x0^2 x1)^-1",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        }
    }
}

impl SuiteConfig {
    /// Caps every range at `m, n ≤ 1`: a smoke run.
    pub fn smoke() -> Self {
        SuiteConfig {
            m_max: 1,
            n_max: 1,
            max_product: 1,
            k_in_h: vec![(1, 1)],
            proposition: vec![1],
            reductions: vec![2],
            invariable: vec!["e".into()],
            ..SuiteConfig::default()
        }
    }
}

type Job = Box<dyn Fn() -> VerificationReport + Send + Sync>;

fn jobs(config: &SuiteConfig, only: Option<&str>) -> Vec<Job> {
    let mut out: Vec<Job> = Vec::new();
    let want = |id: &str| only.is_none_or(|o| o == id);
    let cfg = config.clone();
    if want("defining-relations") {
        out.push(Box::new(verify_defining_relations));
    }
    if want("branch-tables") {
        let (m, n) = (cfg.m_max, cfg.n_max);
        out.push(Box::new(move || verify_branch_tables(m, n)));
    }
    if want("index") {
        for m in 1..=cfg.m_max {
            for n in 1..=cfg.n_max {
                out.push(Box::new(move || verify_index(m, n)));
            }
        }
    }
    if want("slope-element") {
        for m in 1..=cfg.max_product {
            for n in 1..=cfg.max_product / m {
                out.push(Box::new(move || verify_slope_element(m, n)));
            }
        }
    }
    if want("k-in-h") {
        for &(m, n) in &cfg.k_in_h {
            let (r, l, b) = (cfg.radius, cfg.depth, cfg.budget);
            out.push(Box::new(move || verify_k_in_h(m, n, r, l, b)));
        }
    }
    if want("k-chain") {
        for &(m, n) in &cfg.k_in_h {
            let l = cfg.depth;
            out.push(Box::new(move || verify_k_chain_inclusions(m, n, l)));
        }
        for &n in &cfg.reductions {
            let l = cfg.depth;
            out.push(Box::new(move || verify_k_chain_inclusions(n, n, l)));
        }
    }
    if want("proposition") {
        for &n in &cfg.proposition {
            let (l, mixed) = (cfg.depth, cfg.mixed_len);
            out.push(Box::new(move || verify_proposition(n, l, mixed)));
        }
    }
    if want("invariable") {
        for expr in &cfg.invariable {
            let (r, l, b) = (cfg.radius, cfg.depth, cfg.budget);
            let expr = expr.clone();
            out.push(Box::new(move || match element_of_expression(&expr) {
                Ok(g) => verify_invariable(&expr, &g, r, l, b),
                Err(e) => {
                    let mut c = Checks::new();
                    c.exact(false, format!("cannot parse {:?}: {}", expr, e));
                    c.report("invariable", Parameters::default().with("g", expr.as_str()))
                }
            }));
        }
    }
    out
}

/// Runs the suite (or only the lemma `only`) on `threads` workers; reports
/// come back in a fixed order independent of scheduling.
pub fn run_all(
    config: &SuiteConfig,
    only: Option<&str>,
    threads: usize,
) -> Vec<VerificationReport> {
    let jobs = jobs(config, only);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    pool.install(|| jobs.par_iter().map(|j| j()).collect())
}

/// `true` iff no report failed.
pub fn suite_passed(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.status != Status::Fail)
}

pub fn to_json(reports: &[VerificationReport]) -> Value {
    serde_json::to_value(reports).expect("reports serialize")
}

/// One line per report plus a count line.
pub fn summary_table(reports: &[VerificationReport]) -> String {
    let id_w = reports
        .iter()
        .map(|r| r.lemma_id.len())
        .max()
        .unwrap_or(0)
        .max("lemma".len());
    let params: Vec<String> = reports.iter().map(|r| r.parameters.to_string()).collect();
    let par_w = params
        .iter()
        .map(|p| p.len())
        .max()
        .unwrap_or(0)
        .max("parameters".len());
    let mut s = String::new();
    writeln!(s, "{:<id_w$}  {:<par_w$}  status", "lemma", "parameters").unwrap();
    for (r, p) in reports.iter().zip(&params) {
        writeln!(s, "{:<id_w$}  {:<par_w$}  {}", r.lemma_id, p, r.status).unwrap();
    }
    let count = |st: Status| reports.iter().filter(|r| r.status == st).count();
    writeln!(
        s,
        "{} reports: {} pass, {} inconclusive, {} fail",
        reports.len(),
        count(Status::Pass),
        count(Status::Inconclusive),
        count(Status::Fail)
    )
    .unwrap();
    s
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// JUnit-style XML: one test case per report; inconclusive reports are
/// marked skipped.
pub fn to_junit(reports: &[VerificationReport]) -> String {
    let fails = reports.iter().filter(|r| r.status == Status::Fail).count();
    let skipped = reports
        .iter()
        .filter(|r| r.status == Status::Inconclusive)
        .count();
    let mut s = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    writeln!(
        s,
        "<testsuite name=\"thompson-verify\" tests=\"{}\" failures=\"{}\" skipped=\"{}\">",
        reports.len(),
        fails,
        skipped
    )
    .unwrap();
    for r in reports {
        let name = xml_escape(format!("{} {}", r.lemma_id, r.parameters).trim_end());
        let body = xml_escape(&r.details.join("\n"));
        match r.status {
            Status::Pass => writeln!(s, "  <testcase classname=\"{}\" name=\"{}\"/>", r.lemma_id, name).unwrap(),
            Status::Inconclusive => writeln!(
                s,
                "  <testcase classname=\"{}\" name=\"{}\">\n    <skipped message=\"inconclusive\">{}</skipped>\n  </testcase>",
                r.lemma_id, name, body
            )
            .unwrap(),
            Status::Fail => writeln!(
                s,
                "  <testcase classname=\"{}\" name=\"{}\">\n    <failure message=\"fail\">{}</failure>\n  </testcase>",
                r.lemma_id, name, body
            )
            .unwrap(),
        }
    }
    s.push_str("</testsuite>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tables_match_figures() {
        let x1 = Element::from_str_pairs(&[("00", "0"), ("01", "10"), ("1", "11")]).unwrap();
        assert_eq!(Element::from_pairs(x_power_table(1)).unwrap(), x1);
        assert_eq!(Element::from_pairs(y_power_table(1)).unwrap(), y());
        let y2 = y().power(2);
        let last = &y2.pairs()[y2.pairs().len() - 1];
        assert_eq!(last.source.to_string(), "1");
        assert_eq!(last.target.to_string(), "1111111");
        assert_eq!(verify_branch_tables(1, 1).status, Status::Pass);
    }

    #[test]
    fn table_mismatch_is_a_fail() {
        let mut c = Checks::new();
        let x3 = x().power(3);
        compare_table(&mut c, "x^3", x_power_table(2), &x3, &x3);
        assert_eq!(c.status, Status::Fail);
        let mut c = Checks::new();
        compare_table(&mut c, "x^3", x_power_table(3), &x3, &x().power(2));
        assert_eq!(c.status, Status::Fail);
    }

    #[test]
    fn slope_element_examples() {
        let r = verify_slope_element(1, 1);
        assert_eq!(r.status, Status::Pass, "{:?}", r.details);
        assert_eq!(verify_slope_element(2, 3).status, Status::Pass);
        assert_eq!(verify_slope_element(1, 2).status, Status::Pass);
        assert_eq!(slope_word(6).to_string(), "x1 x4 x7 x10 x13 x16");
    }

    #[test]
    fn index_examples() {
        assert_eq!(verify_index(1, 1).status, Status::Pass);
        assert_eq!(verify_index(2, 3).status, Status::Pass);
        assert_eq!(verify_index(7, 11).status, Status::Pass);
    }

    #[test]
    fn k_in_h_examples() {
        assert_eq!(verify_k_in_h(1, 1, 4, 10, 100_000).status, Status::Pass);
        assert_eq!(verify_k_in_h(2, 3, 6, 14, 100_000).status, Status::Pass);
    }

    #[test]
    fn chain_examples() {
        let r = verify_k_chain_inclusions(4, 6, 16);
        assert_eq!(r.status, Status::Pass, "{:?}", r.details);
        assert_eq!(r.details.iter().filter(|d| d.starts_with("ok:")).count(), 3);
        let r = verify_k_chain_inclusions(9, 9, 16);
        assert_eq!(r.status, Status::Pass, "{:?}", r.details);
    }

    #[test]
    fn proposition_examples() {
        assert_eq!(verify_proposition(1, 8, 8).status, Status::Pass);
        let r = verify_proposition(5, 16, 10);
        assert_eq!(r.status, Status::Pass, "{:?}", r.details);
        assert!(r.details[0].contains("b = 3, c = 2"));
    }

    #[test]
    fn tiny_depth_is_inconclusive_not_fail() {
        assert_eq!(verify_proposition(5, 2, 2).status, Status::Inconclusive);
    }

    #[test]
    fn invariable_examples() {
        for e in ["e", "x1", "x0^3 x1^-1"] {
            let g = element_of_expression(e).unwrap();
            let r = verify_invariable(e, &g, 4, 12, 100_000);
            assert_eq!(r.status, Status::Pass, "{}: {:?}", e, r.details);
        }
    }

    #[test]
    fn smoke_suite_and_output_formats() {
        let reports = run_all(&SuiteConfig::smoke(), None, 2);
        assert!(
            reports.iter().all(|r| r.status == Status::Pass),
            "{}",
            summary_table(&reports)
        );
        assert!(suite_passed(&reports));
        let table = summary_table(&reports);
        assert!(table.starts_with("lemma"));
        assert!(table.contains("fail"));
        let json = to_json(&reports);
        assert_eq!(json[0]["lemma_id"], "defining-relations");
        assert_eq!(json[1]["parameters"]["m_max"], 1);
        assert!(to_junit(&reports).contains("failures=\"0\""));
        assert_eq!(run_all(&SuiteConfig::smoke(), Some("index"), 1).len(), 1);
    }
}
