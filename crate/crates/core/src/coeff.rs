//! Finitely generated abelian coefficient groups `Z^r ⊕ Z/d1 ⊕ … ⊕ Z/dk` and
//! their elements.
//!
//! Elements are coordinate vectors: `r` unbounded integers followed by one
//! residue per torsion factor, always stored reduced into `[0, d)`. Arithmetic
//! panics on a shape mismatch (mixing elements of different groups is a
//! programming error, not a data error).

use crate::Int;
use num_integer::Integer;
use num_traits::Zero;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("cannot parse coefficient group `{input}`: {message}")]
    Parse { input: String, message: String },
    #[error("group is infinite (free rank {free_rank} > 0)")]
    Infinite { free_rank: usize },
}

/// `Z^r ⊕ Z/d1 ⊕ … ⊕ Z/dk` with every `d_i >= 2`. Finite iff `r = 0`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CoefficientGroup {
    free_rank: usize,
    torsion: Vec<u64>,
}

/// An element of a [`CoefficientGroup`], as a coordinate vector.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GroupElement {
    free: Vec<Int>,
    torsion: Vec<u64>,
}

impl CoefficientGroup {
    pub fn new(free_rank: usize, torsion: Vec<u64>) -> Self {
        assert!(torsion.iter().all(|&d| d >= 2), "torsion orders must be >= 2");
        CoefficientGroup { free_rank, torsion }
    }

    /// The integers `Z`.
    pub fn integers() -> Self {
        Self::new(1, vec![])
    }

    pub fn cyclic(d: u64) -> Self {
        Self::new(0, vec![d])
    }

    pub fn trivial() -> Self {
        Self::new(0, vec![])
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Order of the group when finite.
    pub fn order(&self) -> Option<u128> {
        if !self.is_finite() {
            return None;
        }
        self.torsion.iter().try_fold(1u128, |acc, &d| acc.checked_mul(d as u128))
    }

    /// Is the group cyclic in an obvious coordinate sense (`Z`, `Z/n`, or 0)?
    /// Such groups have single-integer element rendering.
    pub fn is_coordinate_cyclic(&self) -> bool {
        self.free_rank + self.torsion.len() <= 1
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement { free: vec![Int::zero(); self.free_rank], torsion: vec![0; self.torsion.len()] }
    }

    fn assert_member(&self, a: &GroupElement) {
        assert_eq!(a.free.len(), self.free_rank, "element has wrong free rank for this group");
        assert_eq!(a.torsion.len(), self.torsion.len(), "element has wrong torsion shape");
        debug_assert!(a.torsion.iter().zip(&self.torsion).all(|(&x, &d)| x < d));
    }

    /// Element from raw coordinates; torsion coordinates are reduced mod d_i.
    pub fn element(&self, free: Vec<Int>, torsion: Vec<i64>) -> GroupElement {
        assert_eq!(free.len(), self.free_rank, "wrong number of free coordinates");
        assert_eq!(torsion.len(), self.torsion.len(), "wrong number of torsion coordinates");
        let torsion = torsion
            .iter()
            .zip(&self.torsion)
            .map(|(&x, &d)| x.rem_euclid(d as i64) as u64)
            .collect();
        GroupElement { free, torsion }
    }

    /// The image of the integer `k` under `Z -> M` sending 1 to the canonical
    /// generator; only defined for coordinate-cyclic groups.
    pub fn from_int(&self, k: i64) -> GroupElement {
        assert!(self.is_coordinate_cyclic(), "from_int needs a cyclic group");
        if self.free_rank == 1 {
            GroupElement { free: vec![Int::from(k)], torsion: vec![] }
        } else if self.torsion.len() == 1 {
            self.element(vec![], vec![k])
        } else {
            self.zero()
        }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.assert_member(a);
        self.assert_member(b);
        GroupElement {
            free: a.free.iter().zip(&b.free).map(|(x, y)| x + y).collect(),
            torsion: a
                .torsion
                .iter()
                .zip(&b.torsion)
                .zip(&self.torsion)
                .map(|((&x, &y), &d)| (x + y) % d)
                .collect(),
        }
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        self.assert_member(a);
        GroupElement {
            free: a.free.iter().map(|x| -x).collect(),
            torsion: a
                .torsion
                .iter()
                .zip(&self.torsion)
                .map(|(&x, &d)| if x == 0 { 0 } else { d - x })
                .collect(),
        }
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add(a, &self.neg(b))
    }

    pub fn int_scale(&self, k: i64, a: &GroupElement) -> GroupElement {
        self.assert_member(a);
        GroupElement {
            free: a.free.iter().map(|x| x * Int::from(k)).collect(),
            torsion: a
                .torsion
                .iter()
                .zip(&self.torsion)
                .map(|(&x, &d)| {
                    let km = k.rem_euclid(d as i64) as u128;
                    ((km * x as u128) % d as u128) as u64
                })
                .collect(),
        }
    }

    /// True iff some nonzero `m` in the group has `k·m = 0`. For `k = 0`
    /// every element qualifies, so the answer is "the group is nontrivial";
    /// otherwise only a torsion factor sharing a prime with `k` can provide a
    /// witness.
    pub fn has_k_torsion(&self, k: i64) -> bool {
        if k == 0 {
            return !self.is_trivial();
        }
        let k = k.unsigned_abs();
        self.torsion.iter().any(|&d| k.gcd(&d) > 1)
    }

    /// All elements of a finite group, lexicographically by coordinates.
    pub fn elements(&self) -> Result<ElementIter, GroupError> {
        if !self.is_finite() {
            return Err(GroupError::Infinite { free_rank: self.free_rank });
        }
        Ok(ElementIter { orders: self.torsion.clone(), next: Some(vec![0; self.torsion.len()]) })
    }
}

pub struct ElementIter {
    orders: Vec<u64>,
    next: Option<Vec<u64>>,
}

impl Iterator for ElementIter {
    type Item = GroupElement;

    fn next(&mut self) -> Option<GroupElement> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        // odometer, rightmost coordinate fastest
        let mut i = self.orders.len();
        loop {
            if i == 0 {
                self.next = None;
                break;
            }
            i -= 1;
            succ[i] += 1;
            if succ[i] < self.orders[i] {
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(GroupElement { free: vec![], torsion: cur })
    }
}

impl GroupElement {
    pub fn free_coords(&self) -> &[Int] {
        &self.free
    }

    pub fn torsion_coords(&self) -> &[u64] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.free.iter().all(Zero::is_zero) && self.torsion.iter().all(|&x| x == 0)
    }

    /// Single-integer view for coordinate-cyclic groups.
    pub fn as_int(&self) -> Option<Int> {
        match (self.free.len(), self.torsion.len()) {
            (1, 0) => Some(self.free[0].clone()),
            (0, 1) => Some(Int::from(self.torsion[0])),
            (0, 0) => Some(Int::zero()),
            _ => None,
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(k) = self.as_int() {
            return write!(f, "{k}");
        }
        write!(f, "(")?;
        let mut first = true;
        for x in &self.free {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
            first = false;
        }
        for x in &self.torsion {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
            first = false;
        }
        write!(f, ")")
    }
}

impl fmt::Display for CoefficientGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_owned()),
            r => parts.push(format!("Z^{r}")),
        }
        for &d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join("+"))
    }
}

impl FromStr for CoefficientGroup {
    type Err = GroupError;

    /// Accepts `Z`, `Z^r`, `Z/n`, `0`, and `+`/`⊕`-joins such as
    /// `Z^2+Z/4+Z/6`. Torsion factors keep their written order.
    fn from_str(s: &str) -> Result<Self, GroupError> {
        let err = |message: &str| GroupError::Parse { input: s.to_owned(), message: message.to_owned() };
        let body = s.trim();
        if body.is_empty() {
            return Err(err("empty group spec"));
        }
        if body == "0" {
            return Ok(Self::trivial());
        }
        let mut free_rank = 0usize;
        let mut torsion = Vec::new();
        for part in body.split(['+', '⊕']) {
            let part = part.trim();
            if part == "Z" {
                free_rank += 1;
            } else if let Some(r) = part.strip_prefix("Z^") {
                let r: usize =
                    r.trim().parse().map_err(|_| err("bad exponent in Z^r"))?;
                free_rank += r;
            } else if let Some(d) = part.strip_prefix("Z/") {
                let d: u64 = d.trim().parse().map_err(|_| err("bad modulus in Z/n"))?;
                if d < 2 {
                    return Err(err("torsion order must be at least 2"));
                }
                torsion.push(d);
            } else {
                return Err(err("expected Z, Z^r, or Z/n"));
            }
        }
        Ok(Self::new(free_rank, torsion))
    }
}

/// Brute-force k-torsion witness search; oracle counterpart of
/// [`CoefficientGroup::has_k_torsion`] for finite groups.
pub fn find_k_torsion_witness(m: &CoefficientGroup, k: i64) -> Option<GroupElement> {
    m.elements().ok()?.filter(|e| !e.is_zero()).find(|e| m.int_scale(k, e).is_zero())
}
