use std::fmt;

use serde::{Deserialize, Serialize};

/// A derivative direction on the line bundle: one of the base coordinates
/// `x^λ` or the line coordinate `τ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    Base(usize),
    Tau,
}

/// Multi-index `α = (α_1, …, α_n)` over the base coordinates, together with a
/// separate derivative order along `τ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex {
    spatial: Vec<u32>,
    tau: u32,
}

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex { spatial: vec![0; n], tau: 0 }
    }

    pub fn new(spatial: Vec<u32>, tau: u32) -> Self {
        MultiIndex { spatial, tau }
    }

    /// The multi-index obtained by differentiating once along each of `dirs`.
    pub fn from_directions(n: usize, dirs: &[Direction]) -> Self {
        dirs.iter().fold(MultiIndex::zero(n), |acc, d| acc.shifted(*d))
    }

    pub fn dim(&self) -> usize {
        self.spatial.len()
    }

    pub fn spatial(&self) -> &[u32] {
        &self.spatial
    }

    pub fn tau_order(&self) -> u32 {
        self.tau
    }

    /// `|α| = α_1 + … + α_n`, the spatial order only.
    pub fn spatial_order(&self) -> u32 {
        self.spatial.iter().sum()
    }

    /// Spatial order plus `τ`-order.
    pub fn total_order(&self) -> u32 {
        self.spatial_order() + self.tau
    }

    pub fn is_zero(&self) -> bool {
        self.tau == 0 && self.spatial.iter().all(|&a| a == 0)
    }

    pub fn get(&self, dir: Direction) -> u32 {
        match dir {
            Direction::Base(l) => self.spatial[l],
            Direction::Tau => self.tau,
        }
    }

    /// `α + λ`: raises exactly one slot by one.
    pub fn shifted(&self, dir: Direction) -> Self {
        let mut out = self.clone();
        match dir {
            Direction::Base(l) => out.spatial[l] += 1,
            Direction::Tau => out.tau += 1,
        }
        out
    }

    /// Inverse of [`shifted`](Self::shifted); `None` when the slot is empty.
    pub fn lowered(&self, dir: Direction) -> Option<Self> {
        let mut out = self.clone();
        let slot = match dir {
            Direction::Base(l) => &mut out.spatial[l],
            Direction::Tau => &mut out.tau,
        };
        if *slot == 0 {
            return None;
        }
        *slot -= 1;
        Some(out)
    }

    /// Directions in canonical order (base coordinates first, then `τ`), each
    /// repeated according to its order.
    pub fn directions(&self) -> Vec<Direction> {
        let mut out = Vec::with_capacity(self.total_order() as usize);
        for (l, &a) in self.spatial.iter().enumerate() {
            out.extend(std::iter::repeat_n(Direction::Base(l), a as usize));
        }
        out.extend(std::iter::repeat_n(Direction::Tau, self.tau as usize));
        out
    }

    /// All multi-indices of dimension `n` (plus `τ`) with total order exactly `order`.
    pub fn all_of_order(n: usize, order: u32) -> Vec<MultiIndex> {
        fn rec(slots: usize, remaining: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if slots == 1 {
                cur.push(remaining);
                out.push(cur.clone());
                cur.pop();
                return;
            }
            for k in (0..=remaining).rev() {
                cur.push(k);
                rec(slots - 1, remaining - k, cur, out);
                cur.pop();
            }
        }
        let mut raw = Vec::new();
        rec(n + 1, order, &mut Vec::new(), &mut raw);
        raw.into_iter()
            .map(|mut v| {
                let tau = v.pop().unwrap();
                MultiIndex { spatial: v, tau }
            })
            .collect()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, a) in self.spatial.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ";{})", self.tau)
    }
}
