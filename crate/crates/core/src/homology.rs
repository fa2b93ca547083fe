//! The chain side: the boundary map `∂x = t(x) − o(x)`, first homology as
//! `ker ∂`, integer cycle bases, and exhaustive cycle enumeration over finite
//! coefficients.

use crate::coeff::{CoefficientGroup, GroupElement};
use crate::graph::Graph;
use crate::linalg::{integer_kernel_basis, kernel_mod, row_hnf, Matrix};
use crate::{Int, IntMatrix};
use num_traits::{ToPrimitive, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HomologyError {
    #[error("chain is supported on {found:?}, expected {expected:?}")]
    SupportMismatch { expected: Support, found: Support },
    #[error("chain has {found} coefficients, the graph needs {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("chain coefficients live in {found}, expected {expected}")]
    GroupMismatch { expected: CoefficientGroup, found: CoefficientGroup },
    #[error("operation requires a finite coefficient group, got {0}")]
    InfiniteGroup(CoefficientGroup),
}

/// What a chain's coefficient vector is indexed by.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Support {
    /// The positive edges `E+` (homology chains).
    PosEdges,
    /// All directed edges `E` (images `α − α~`, distribution labelings).
    AllEdges,
}

/// A formal `M`-linear combination of directed edges over a fixed support.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Chain {
    group: CoefficientGroup,
    support: Support,
    coeffs: Vec<GroupElement>,
}

impl Chain {
    pub fn zero(g: &Graph, group: CoefficientGroup, support: Support) -> Self {
        let len = match support {
            Support::PosEdges => g.pos_edge_count(),
            Support::AllEdges => g.edge_count(),
        };
        let coeffs = vec![group.zero(); len];
        Chain { group, support, coeffs }
    }

    pub fn new(group: CoefficientGroup, support: Support, coeffs: Vec<GroupElement>) -> Self {
        Chain { group, support, coeffs }
    }

    /// Chain over E+ from named-edge integer coefficients; `M` must be
    /// coordinate-cyclic so integers determine elements. Unknown names give
    /// `None`.
    pub fn from_named(
        g: &Graph,
        group: &CoefficientGroup,
        terms: &[(String, i64)],
    ) -> Option<Self> {
        let mut chain = Self::zero(g, group.clone(), Support::PosEdges);
        for (name, k) in terms {
            let e = g.edge_by_name(name)?;
            if !g.is_positive(e) {
                return None;
            }
            let add = group.int_scale(*k, &group.from_int(1));
            chain.coeffs[e.index()] = group.add(&chain.coeffs[e.index()], &add);
        }
        Some(chain)
    }

    pub fn group(&self) -> &CoefficientGroup {
        &self.group
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn coeffs(&self) -> &[GroupElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &GroupElement {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(GroupElement::is_zero)
    }

    pub fn add(&self, other: &Chain) -> Chain {
        assert_eq!(self.support, other.support, "chain support mismatch");
        assert_eq!(self.group, other.group, "chain group mismatch");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| self.group.add(a, b))
            .collect();
        Chain { group: self.group.clone(), support: self.support, coeffs }
    }

    pub fn neg(&self) -> Chain {
        let coeffs = self.coeffs.iter().map(|a| self.group.neg(a)).collect();
        Chain { group: self.group.clone(), support: self.support, coeffs }
    }

    /// `a + 2b - 3c`-style rendering against the graph's edge names.
    pub fn display_with(&self, g: &Graph) -> String {
        let name = |i: usize| match self.support {
            Support::PosEdges => g.pos_edges()[i].name().to_owned(),
            Support::AllEdges => g.edge_name(crate::graph::EdgeId(i)),
        };
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = match c.as_int() {
                Some(k) => {
                    let (sign, mag) = if k < Int::zero() { ("-", -k.clone()) } else { ("+", k) };
                    let coeff = if mag == Int::from(1) { String::new() } else { mag.to_string() };
                    (sign.to_owned(), format!("{coeff}{}", name(i)))
                }
                None => ("+".to_owned(), format!("{c}{}", name(i))),
            };
            if out.is_empty() {
                if term.0 == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {} ", term.0));
            }
            out.push_str(&term.1);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// The `|V| x |E+|` matrix of `∂x = t(x) − o(x)`. A loop column is zero.
pub fn boundary_matrix(g: &Graph) -> IntMatrix {
    let mut d = IntMatrix::zeros(g.vertex_count(), g.pos_edge_count());
    for (j, e) in g.pos_edges().iter().enumerate() {
        d[(e.terminus(), j)] = &d[(e.terminus(), j)] + Int::from(1);
        d[(e.origin(), j)] = &d[(e.origin(), j)] - Int::from(1);
    }
    d
}

/// Integer basis of `ker ∂`, canonicalized to Hermite form over the file's
/// edge order. For a connected graph the rank is `|E+| − |V| + 1`.
pub fn h1_basis_z(g: &Graph) -> Vec<Chain> {
    let kernel = integer_kernel_basis(&boundary_matrix(g));
    if kernel.is_empty() {
        return vec![];
    }
    let canon = row_hnf(&Matrix::from_rows(kernel));
    let z = CoefficientGroup::integers();
    (0..canon.rows())
        .map(|i| {
            let coeffs = (0..canon.cols())
                .map(|j| z.element(vec![canon[(i, j)].clone()], vec![]))
                .collect();
            Chain::new(z.clone(), Support::PosEdges, coeffs)
        })
        .collect()
}

/// Is `∂α = 0`, computed coordinatewise in `M V`?
pub fn is_cycle(g: &Graph, alpha: &Chain) -> Result<bool, HomologyError> {
    if alpha.support != Support::PosEdges {
        return Err(HomologyError::SupportMismatch {
            expected: Support::PosEdges,
            found: alpha.support,
        });
    }
    if alpha.coeffs.len() != g.pos_edge_count() {
        return Err(HomologyError::LengthMismatch {
            expected: g.pos_edge_count(),
            found: alpha.coeffs.len(),
        });
    }
    let m = &alpha.group;
    let mut sums = vec![m.zero(); g.vertex_count()];
    for (j, e) in g.pos_edges().iter().enumerate() {
        let c = &alpha.coeffs[j];
        sums[e.terminus()] = m.add(&sums[e.terminus()], c);
        sums[e.origin()] = m.sub(&sums[e.origin()], c);
    }
    Ok(sums.iter().all(GroupElement::is_zero))
}

/// All cycles over a finite `M`, exhaustively, in lexicographic coefficient
/// order. The count is `|M|^(|E+| − |V| + 1)`.
///
/// Solved factor by factor: a chain over `⊕ Z/d_i` is a cycle iff each
/// `Z/d_i` component is in the kernel of `∂ mod d_i`, so the cycle set is the
/// product of the modular kernels.
pub fn h1_elements(g: &Graph, m: &CoefficientGroup) -> Result<Vec<Chain>, HomologyError> {
    if !m.is_finite() {
        return Err(HomologyError::InfiniteGroup(m.clone()));
    }
    let cols = g.pos_edge_count();
    let boundary = boundary_matrix(g);
    // Solution subgroup of ∂x = 0 mod d, for each torsion factor.
    let mut factor_solutions: Vec<Vec<Vec<u64>>> = Vec::new();
    for &d in m.torsion() {
        let gens = kernel_mod(&boundary, d).expect("torsion orders are >= 2");
        let mut set: BTreeSet<Vec<u64>> = BTreeSet::new();
        set.insert(vec![0; cols]);
        let mut queue: Vec<Vec<u64>> = set.iter().cloned().collect();
        while let Some(x) = queue.pop() {
            for gen in &gens {
                let y: Vec<u64> = x.iter().zip(gen).map(|(a, b)| (a + b) % d).collect();
                if set.insert(y.clone()) {
                    queue.push(y);
                }
            }
        }
        factor_solutions.push(set.into_iter().collect());
    }
    // Cartesian product across factors, one residue per factor per edge.
    let mut picks = vec![0usize; factor_solutions.len()];
    let mut out = Vec::new();
    loop {
        let coeffs: Vec<GroupElement> = (0..cols)
            .map(|j| {
                let torsion: Vec<i64> = picks
                    .iter()
                    .zip(&factor_solutions)
                    .map(|(&p, sols)| sols[p][j] as i64)
                    .collect();
                m.element(vec![], torsion)
            })
            .collect();
        out.push(Chain::new(m.clone(), Support::PosEdges, coeffs));
        // odometer over factor choices
        let mut i = picks.len();
        loop {
            if i == 0 {
                out.sort();
                return Ok(out);
            }
            i -= 1;
            picks[i] += 1;
            if picks[i] < factor_solutions[i].len() {
                break;
            }
            picks[i] = 0;
        }
    }
}

/// `H1(G, M)` as an abstract group: `M^(1 − χ)` (universal coefficients with
/// torsion-free `H0`). Returned in the same canonical shape as `M`.
pub fn h1_group(g: &Graph, m: &CoefficientGroup) -> CoefficientGroup {
    let rank = g.pos_edge_count() + 1 - g.vertex_count();
    let mut torsion = Vec::with_capacity(rank * m.torsion().len());
    for _ in 0..rank {
        torsion.extend_from_slice(m.torsion());
    }
    CoefficientGroup::new(m.free_rank() * rank, torsion)
}

/// Number of elements of `H1(G, M)` for finite `M`, as an exact integer.
pub fn h1_element_count(g: &Graph, m: &CoefficientGroup) -> Result<Int, HomologyError> {
    let order = m.order().ok_or_else(|| HomologyError::InfiniteGroup(m.clone()))?;
    let rank = (g.pos_edge_count() + 1 - g.vertex_count()) as u32;
    Ok(Int::from(order).pow(rank))
}

/// Reduces an integer chain into `M` coefficientwise (the map
/// `H1(G, Z) ⊗ M -> H1(G, M)` on representatives).
pub fn reduce_chain(chain: &Chain, m: &CoefficientGroup) -> Chain {
    let coeffs = chain
        .coeffs
        .iter()
        .map(|c| {
            let k = c.as_int().expect("reduce_chain starts from an integer chain");
            let free = vec![k.clone(); m.free_rank()];
            let torsion = m
                .torsion()
                .iter()
                .map(|&d| k.mod_floor(&Int::from(d)).to_i64().expect("residue fits"))
                .collect();
            m.element(free, torsion)
        })
        .collect();
    Chain::new(m.clone(), chain.support, coeffs)
}

use num_integer::Integer;
