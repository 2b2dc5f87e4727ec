//! Exact transition probabilities of the simple random walk on the 2-comb.
//!
//! The comb keeps every vertical edge of Z^2 but only the horizontal edges
//! lying on the x-axis. A walker at height zero has four neighbours, every
//! other vertex has two.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

pub const DEFAULT_EXACT_CAP: usize = 300;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CombVertex {
    pub x: i64,
    pub y: i64,
}

impl CombVertex {
    pub const ORIGIN: CombVertex = CombVertex { x: 0, y: 0 };

    pub fn new(x: i64, y: i64) -> Self {
        CombVertex { x, y }
    }

    pub fn degree(self) -> u32 {
        degree(self)
    }

    pub fn neighbors(self) -> impl Iterator<Item = CombVertex> {
        let CombVertex { x, y } = self;
        let horizontal = if y == 0 { [Some((x - 1, 0)), Some((x + 1, 0))] } else { [None, None] };
        [Some((x, y - 1)), Some((x, y + 1))]
            .into_iter()
            .chain(horizontal)
            .flatten()
            .map(|(x, y)| CombVertex { x, y })
    }
}

impl fmt::Display for CombVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

pub fn degree(v: CombVertex) -> u32 {
    if v.y == 0 {
        4
    } else {
        2
    }
}

/// Length of the unique path between `u` and `v` in the comb (a tree).
pub fn graph_distance(u: CombVertex, v: CombVertex) -> u64 {
    let same_side = u.y == 0 || v.y == 0 || (u.y > 0) == (v.y > 0);
    if u.x == v.x && same_side {
        u.y.abs_diff(v.y)
    } else {
        u.y.unsigned_abs() + u.x.abs_diff(v.x) + v.y.unsigned_abs()
    }
}

/// Exact distribution of the walk after `step` steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistTable {
    pub step: usize,
    pub entries: BTreeMap<CombVertex, Dyadic>,
}

impl DistTable {
    pub fn delta(v: CombVertex) -> Self {
        DistTable { step: 0, entries: BTreeMap::from([(v, Dyadic::from_int(1))]) }
    }

    pub fn get(&self, v: CombVertex) -> Dyadic {
        self.entries.get(&v).cloned().unwrap_or_else(Dyadic::zero)
    }

    pub fn total_mass(&self) -> Dyadic {
        self.entries.values().fold(Dyadic::zero(), |acc, p| &acc + p)
    }
}

/// One step of the Markov kernel: each vertex splits its mass evenly among
/// its neighbours.
pub fn step(d: &DistTable) -> DistTable {
    let mut entries: BTreeMap<CombVertex, Dyadic> = BTreeMap::new();
    for (&v, p) in &d.entries {
        let share = p.shl(-(degree(v).trailing_zeros() as i64));
        for w in v.neighbors() {
            let slot = entries.entry(w).or_insert_with(Dyadic::zero);
            *slot = &*slot + &share;
        }
    }
    entries.retain(|_, p| !p.is_zero());
    DistTable { step: d.step + 1, entries }
}

/// Precision mode of a lattice probability.
#[derive(Clone, Debug, PartialEq)]
pub enum Prob {
    Exact(Dyadic),
    Float(f64),
}

impl Prob {
    pub fn ln(&self) -> f64 {
        match self {
            Prob::Exact(d) => d.ln_abs(),
            Prob::Float(x) => x.ln(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Prob::Exact(d) => d.to_f64(),
            Prob::Float(x) => *x,
        }
    }

    pub fn mode(&self) -> &'static str {
        match self {
            Prob::Exact(_) => "exact",
            Prob::Float(_) => "float",
        }
    }
}

/// Dynamic-programming oracle with a configurable cap on exact mode.
#[derive(Clone, Copy, Debug)]
pub struct LatticeOracle {
    pub exact_cap: usize,
}

impl Default for LatticeOracle {
    fn default() -> Self {
        LatticeOracle { exact_cap: DEFAULT_EXACT_CAP }
    }
}

impl LatticeOracle {
    pub fn new(exact_cap: usize) -> Self {
        LatticeOracle { exact_cap }
    }

    /// `p^{(n)}(start, target)` as an exact dyadic rational.
    pub fn exact_prob(&self, start: CombVertex, target: CombVertex, n: usize) -> Result<Dyadic> {
        if n > self.exact_cap {
            return Err(Error::CapExceeded { requested: n, cap: self.exact_cap });
        }
        // numerators over 4^n; a move out of a degree-d vertex multiplies by 4/d
        let num = pruned_dp(start, target, n, BigUint::zero(), BigUint::from(1u32), |acc, v, p| {
            if degree(v) == 4 {
                *acc += p;
            } else {
                *acc += p << 1u32;
            }
        });
        Ok(Dyadic::from_scaled(num, 2 * n as u64))
    }

    /// Same walk in f64; no cap but no exactness either.
    pub fn float_prob(&self, start: CombVertex, target: CombVertex, n: usize) -> f64 {
        pruned_dp(start, target, n, 0.0f64, 1.0, |acc, v, p| *acc += p / degree(v) as f64)
    }

    /// Exact below the cap, float above it.
    pub fn prob(&self, start: CombVertex, target: CombVertex, n: usize) -> Prob {
        match self.exact_prob(start, target, n) {
            Ok(d) => Prob::Exact(d),
            Err(_) => Prob::Float(self.float_prob(start, target, n)),
        }
    }

    /// `p^{(2n+1)}((0,2k+1),o)` through the two neighbouring even-step values.
    pub fn odd_from_even_y(&self, k: usize, n: usize) -> Result<Dyadic> {
        let up = self.exact_prob(CombVertex::new(0, 2 * k as i64 + 2), CombVertex::ORIGIN, 2 * n)?;
        let here = self.exact_prob(CombVertex::new(0, 2 * k as i64), CombVertex::ORIGIN, 2 * n)?;
        Ok((&up + &here).shl(-1))
    }

    /// Full exact distribution after `n` steps.
    pub fn distribution(&self, start: CombVertex, n: usize) -> Result<DistTable> {
        if n > self.exact_cap {
            return Err(Error::CapExceeded { requested: n, cap: self.exact_cap });
        }
        let mut d = DistTable::delta(start);
        for _ in 0..n {
            d = step(&d);
        }
        Ok(d)
    }
}

/// Pull-style DP on a dense box around `start`, restricted at each step to
/// vertices that are reachable from `start` and can still reach `target`.
fn pruned_dp<T, F>(start: CombVertex, target: CombVertex, n: usize, zero: T, one: T, push: F) -> T
where
    T: Clone,
    F: Fn(&mut T, CombVertex, &T),
{
    if graph_distance(start, target) > n as u64 || (graph_distance(start, target) + n as u64) % 2 == 1 {
        return zero;
    }
    let r = n as i64;
    let (x0, y0) = (start.x - r, start.y - r);
    let side = (2 * r + 1) as usize;
    let idx = |v: CombVertex| ((v.x - x0) as usize) * side + (v.y - y0) as usize;
    let mut cur = vec![zero.clone(); side * side];
    let mut next = cur.clone();
    cur[idx(start)] = one;

    let live = |v: CombVertex, i: usize| {
        let a = graph_distance(start, v);
        let b = graph_distance(v, target);
        a <= i as u64 && b <= (n - i) as u64 && (a + i as u64) % 2 == 0
    };

    for i in 1..=n {
        let ri = i as i64;
        for x in (start.x - ri)..=(start.x + ri) {
            for y in (start.y - ri)..=(start.y + ri) {
                let w = CombVertex { x, y };
                let slot = idx(w);
                if !live(w, i) {
                    if i >= 2 {
                        next[slot] = zero.clone();
                    }
                    continue;
                }
                let mut acc = zero.clone();
                for v in w.neighbors() {
                    if v.x < x0 || v.x >= x0 + side as i64 || v.y < y0 || v.y >= y0 + side as i64 {
                        continue;
                    }
                    if live(v, i - 1) {
                        push(&mut acc, v, &cur[idx(v)]);
                    }
                }
                next[slot] = acc;
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }
    cur[idx(target)].clone()
}
