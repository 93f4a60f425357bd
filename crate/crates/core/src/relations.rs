//! Instantiated relation schemas (a)–(f) for the closed subgroups `K(m,n)`.
//!
//! With `g = gcd(m, n)`:
//!
//! ```text
//! (a) 0^k 1      ~ 0^(k+g) 1          k ≥ 1
//! (b) 1^k 0      ~ 1^(k+g) 0          k ≥ 1
//! (c) 0^k 1      ~ 1^(g+1-k) 0        1 ≤ k ≤ g
//! (d) 0^(2k) 10  ~ 1^(1+3(n-k)) 0     1 ≤ k ≤ n
//! (e) 0^(2k) 11  ~ 1^(2+3(n-k)) 0     1 ≤ k ≤ n
//! (f) 0^(2k-1) 1 ~ 1^(3(n-k+1)) 0     1 ≤ k ≤ n
//! ```
//!
//! The depth-bounded systems skip every instance with either side longer
//! than the depth, never truncating. The complete systems keep the finite
//! families (c)–(f) whole and take (a), (b) for `k ≤ max(L, 3n + 2)`, which
//! covers every run length occurring in (c)–(f); they are meant for
//! [`saturate`](crate::saturation::saturate), which accepts long seed words.

use std::fmt;

use num_integer::Integer;

use crate::words::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SystemName {
    /// `K(m, n)`.
    K { m: usize, n: usize },
    /// `K(n, n)`.
    KPrime { n: usize },
    /// `K(n/d, n/d)` considered inside `K(n, n)`.
    KDoublePrime { n: usize, divisor: usize },
}

impl fmt::Display for SystemName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemName::K { m, n } => write!(f, "K({},{})", m, n),
            SystemName::KPrime { n } => write!(f, "K'({})", n),
            SystemName::KDoublePrime { n, divisor } => write!(f, "K''({}/{})", n, divisor),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationInstance {
    pub schema: char,
    pub k: usize,
    pub left: Word,
    pub right: Word,
}

impl fmt::Display for RelationInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}) k={}: {} ~ {}",
            self.schema, self.k, self.left, self.right
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationSystem {
    pub name: SystemName,
    pub depth: u32,
    pub instances: Vec<RelationInstance>,
}

impl RelationSystem {
    pub fn pairs(&self) -> Vec<(Word, Word)> {
        self.instances
            .iter()
            .map(|r| (r.left.clone(), r.right.clone()))
            .collect()
    }
}

fn instances(m: usize, n: usize, depth: u32, complete: bool) -> Vec<RelationInstance> {
    assert!(m >= 1 && n >= 1, "K(m,n) needs m, n >= 1");
    let g = m.gcd(&n);
    let l = depth as usize;
    let k_ab = if complete { l.max(3 * n + 2) } else { l };
    let mut out = Vec::new();
    let mut add = |schema: char, k: usize, left: Word, right: Word| {
        if complete || (left.len() <= l && right.len() <= l) {
            out.push(RelationInstance {
                schema,
                k,
                left,
                right,
            });
        }
    };
    for k in 1..=k_ab {
        add(
            'a',
            k,
            Word::runs(&[(0, k), (1, 1)]),
            Word::runs(&[(0, k + g), (1, 1)]),
        );
    }
    for k in 1..=k_ab {
        add(
            'b',
            k,
            Word::runs(&[(1, k), (0, 1)]),
            Word::runs(&[(1, k + g), (0, 1)]),
        );
    }
    for k in 1..=g {
        add(
            'c',
            k,
            Word::runs(&[(0, k), (1, 1)]),
            Word::runs(&[(1, g + 1 - k), (0, 1)]),
        );
    }
    for k in 1..=n {
        add(
            'd',
            k,
            Word::runs(&[(0, 2 * k), (1, 1), (0, 1)]),
            Word::runs(&[(1, 1 + 3 * (n - k)), (0, 1)]),
        );
    }
    for k in 1..=n {
        add(
            'e',
            k,
            Word::runs(&[(0, 2 * k), (1, 2)]),
            Word::runs(&[(1, 2 + 3 * (n - k)), (0, 1)]),
        );
    }
    for k in 1..=n {
        add(
            'f',
            k,
            Word::runs(&[(0, 2 * k - 1), (1, 1)]),
            Word::runs(&[(1, 3 * (n - k + 1)), (0, 1)]),
        );
    }
    out
}

/// Instances of (a)–(f) for `K(m, n)` at the given depth.
pub fn k_system(m: usize, n: usize, depth: u32) -> RelationSystem {
    RelationSystem {
        name: SystemName::K { m, n },
        depth,
        instances: instances(m, n, depth, false),
    }
}

/// Instances of (a′)–(f′), i.e. `K(n, n)`.
pub fn k_prime_system(n: usize, depth: u32) -> RelationSystem {
    RelationSystem {
        name: SystemName::KPrime { n },
        depth,
        instances: instances(n, n, depth, false),
    }
}

/// Instances of (a″)–(f″): the relations of `K(n/d, n/d)` for `d | n`.
pub fn k_double_prime_system(n: usize, divisor: usize, depth: u32) -> RelationSystem {
    assert!(
        divisor >= 1 && n.is_multiple_of(divisor),
        "divisor must divide n"
    );
    RelationSystem {
        name: SystemName::KDoublePrime { n, divisor },
        depth,
        instances: instances(n / divisor, n / divisor, depth, false),
    }
}

/// [`k_system`] with the finite families kept whole.
pub fn k_system_complete(m: usize, n: usize, depth: u32) -> RelationSystem {
    RelationSystem {
        name: SystemName::K { m, n },
        depth,
        instances: instances(m, n, depth, true),
    }
}

/// [`k_prime_system`] with the finite families kept whole.
pub fn k_prime_system_complete(n: usize, depth: u32) -> RelationSystem {
    RelationSystem {
        name: SystemName::KPrime { n },
        depth,
        instances: instances(n, n, depth, true),
    }
}

/// [`k_double_prime_system`] with the finite families kept whole.
pub fn k_double_prime_system_complete(n: usize, divisor: usize, depth: u32) -> RelationSystem {
    assert!(
        divisor >= 1 && n.is_multiple_of(divisor),
        "divisor must divide n"
    );
    RelationSystem {
        name: SystemName::KDoublePrime { n, divisor },
        depth,
        instances: instances(n / divisor, n / divisor, depth, true),
    }
}
