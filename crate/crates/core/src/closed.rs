//! Closed subsets, double cosets, quotients and stabilizers.

use crate::algebra::{AlgebraError, ElementVector, RawAlgebra, TableAlgebra};
use crate::scalar::Scalar;
use num_traits::{One, Zero};
use std::collections::{BTreeSet, VecDeque};
use thiserror::Error;

/// Default bound on the dimension accepted by [`enumerate_closed_subsets`].
pub const DEFAULT_ENUMERATION_BOUND: usize = 16;

#[derive(Debug, Error)]
pub enum ClosedError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("empty basis subset")]
    Empty,
    #[error("subset {0} is not closed")]
    NotClosed(String),
    #[error("dimension {dim} exceeds the enumeration bound {bound}")]
    BoundExceeded { dim: usize, bound: usize },
    #[error("closed subset belongs to a different algebra")]
    AlgebraMismatch,
    #[error("quotient structure constant depends on the choice of t: {0}")]
    InconsistentQuotient(String),
}

/// A closed subset N of the basis together with o(N) and N⁺.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedSubset {
    algebra: u64,
    members: Vec<usize>,
    order: Scalar,
    sum: ElementVector,
    normal: bool,
}

impl ClosedSubset {
    pub fn algebra_id(&self) -> u64 {
        self.algebra
    }

    /// Sorted basis indices; always starts with 0.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, b: usize) -> bool {
        self.members.binary_search(&b).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn order(&self) -> &Scalar {
        &self.order
    }

    pub fn sum(&self) -> &ElementVector {
        &self.sum
    }

    /// `bN = Nb` for every basis element b.
    pub fn is_normal(&self) -> bool {
        self.normal
    }

    /// `e = o(N)⁻¹ N⁺`.
    pub fn idempotent(&self) -> ElementVector {
        self.sum.scaled(&(Scalar::one() / &self.order))
    }

    pub fn labels<'a>(&self, alg: &'a TableAlgebra) -> Vec<&'a str> {
        self.members.iter().map(|&b| alg.label(b)).collect()
    }

    fn ensure(&self, alg: &TableAlgebra) -> Result<(), ClosedError> {
        if self.algebra != alg.id() {
            return Err(ClosedError::AlgebraMismatch);
        }
        Ok(())
    }
}

fn check_indices(alg: &TableAlgebra, s: &[usize]) -> Result<(), ClosedError> {
    if s.is_empty() {
        return Err(ClosedError::Empty);
    }
    if let Some(&i) = s.iter().find(|&&i| i >= alg.dim()) {
        return Err(AlgebraError::IndexOutOfRange { index: i, dim: alg.dim() }.into());
    }
    Ok(())
}

fn set_label(alg: &TableAlgebra, s: &[usize]) -> String {
    let names: Vec<&str> = s.iter().map(|&b| alg.label(b)).collect();
    format!("{{{}}}", names.join(", "))
}

/// Union of `Supp(b₁ ⋯ b_m)` over all choices `bᵢ ∈ Sᵢ`.
pub fn complex_product(alg: &TableAlgebra, subsets: &[Vec<usize>]) -> Result<Vec<usize>, ClosedError> {
    let mut current: BTreeSet<usize> = match subsets.first() {
        None => return Err(ClosedError::Empty),
        Some(first) => {
            check_indices(alg, first)?;
            first.iter().copied().collect()
        }
    };
    for s in &subsets[1..] {
        check_indices(alg, s)?;
        let mut next = BTreeSet::new();
        for &a in &current {
            for &b in s {
                next.extend(alg.support_of_product(a, b));
            }
        }
        current = next;
    }
    Ok(current.into_iter().collect())
}

/// True when `1 ∈ S`, `S* = S` and `Supp(a* b) ⊆ S` for all `a, b ∈ S`.
pub fn is_closed(alg: &TableAlgebra, s: &[usize]) -> bool {
    let set: BTreeSet<usize> = s.iter().copied().collect();
    set.contains(&0)
        && set.iter().all(|&a| a < alg.dim() && set.contains(&alg.star(a)))
        && set
            .iter()
            .all(|&a| set.iter().all(|&b| alg.support_of_product(alg.star(a), b).all(|c| set.contains(&c))))
}

fn build(alg: &TableAlgebra, members: Vec<usize>) -> ClosedSubset {
    let (order, sum) = alg.order_and_sum(&members).expect("nonempty in-range subset");
    let normal = (0..alg.dim()).all(|b| {
        let mut left = BTreeSet::new();
        let mut right = BTreeSet::new();
        for &n in &members {
            left.extend(alg.support_of_product(b, n));
            right.extend(alg.support_of_product(n, b));
        }
        left == right
    });
    ClosedSubset {
        algebra: alg.id(),
        members,
        order,
        sum,
        normal,
    }
}

/// Wraps `s` as a closed subset after checking closure.
pub fn closed_subset(alg: &TableAlgebra, s: &[usize]) -> Result<ClosedSubset, ClosedError> {
    check_indices(alg, s)?;
    if !is_closed(alg, s) {
        return Err(ClosedError::NotClosed(set_label(alg, s)));
    }
    let members: BTreeSet<usize> = s.iter().copied().collect();
    Ok(build(alg, members.into_iter().collect()))
}

/// Closed subset from basis labels.
pub fn closed_subset_by_labels(alg: &TableAlgebra, labels: &[&str]) -> Result<ClosedSubset, ClosedError> {
    let idx = labels
        .iter()
        .map(|l| {
            alg.index_of(l)
                .ok_or_else(|| ClosedError::NotClosed(format!("unknown basis label {l:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    closed_subset(alg, &idx)
}

/// Smallest closed subset containing `s`.
pub fn closure(alg: &TableAlgebra, s: &[usize]) -> Result<ClosedSubset, ClosedError> {
    check_indices(alg, s)?;
    let mut set: BTreeSet<usize> = s.iter().copied().collect();
    set.insert(0);
    let mut queue: VecDeque<usize> = set.iter().copied().collect();
    while let Some(a) = queue.pop_front() {
        let mut fresh = vec![alg.star(a)];
        let snapshot: Vec<usize> = set.iter().copied().collect();
        for &b in &snapshot {
            fresh.extend(alg.support_of_product(a, b));
            fresh.extend(alg.support_of_product(b, a));
        }
        for c in fresh {
            if set.insert(c) {
                queue.push_back(c);
            }
        }
    }
    Ok(build(alg, set.into_iter().collect()))
}

/// The trivial closed subset `{1}`.
pub fn trivial(alg: &TableAlgebra) -> ClosedSubset {
    build(alg, vec![0])
}

/// The whole basis.
pub fn full(alg: &TableAlgebra) -> ClosedSubset {
    build(alg, (0..alg.dim()).collect())
}

/// Every closed subset, each exactly once, ordered by size then members.
pub fn enumerate_closed_subsets(alg: &TableAlgebra, bound: usize) -> Result<Vec<ClosedSubset>, ClosedError> {
    if alg.dim() > bound {
        return Err(ClosedError::BoundExceeded { dim: alg.dim(), bound });
    }
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let start = trivial(alg);
    seen.insert(start.members.clone());
    let mut queue = VecDeque::from([start]);
    let mut out = Vec::new();
    while let Some(n) = queue.pop_front() {
        for b in 0..alg.dim() {
            if n.contains(b) {
                continue;
            }
            let mut gens = n.members.clone();
            gens.push(b);
            let c = closure(alg, &gens)?;
            if seen.insert(c.members.clone()) {
                queue.push_back(c);
            }
        }
        out.push(n);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.members.cmp(&b.members)));
    Ok(out)
}

/// The partition `{NbN}` with the smallest index of each cell as its
/// representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleCosetPartition {
    cells: Vec<Vec<usize>>,
    cell_of: Vec<usize>,
}

impl DoubleCosetPartition {
    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn cell_of(&self, b: usize) -> usize {
        self.cell_of[b]
    }

    pub fn cell_map(&self) -> &[usize] {
        &self.cell_of
    }

    pub fn representative(&self, cell: usize) -> usize {
        self.cells[cell][0]
    }

    pub fn representatives(&self) -> Vec<usize> {
        self.cells.iter().map(|c| c[0]).collect()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// Support of `N⁺ b N⁺`.
pub fn double_coset(alg: &TableAlgebra, n: &ClosedSubset, b: usize) -> BTreeSet<usize> {
    let mut left = BTreeSet::new();
    for &k in n.members() {
        left.extend(alg.support_of_product(k, b));
    }
    let mut cell = BTreeSet::new();
    for &c in &left {
        for &k in n.members() {
            cell.extend(alg.support_of_product(c, k));
        }
    }
    cell
}

pub fn double_cosets(alg: &TableAlgebra, n: &ClosedSubset) -> Result<DoubleCosetPartition, ClosedError> {
    n.ensure(alg)?;
    let dim = alg.dim();
    let mut cell_of = vec![usize::MAX; dim];
    let mut cells = Vec::new();
    for b in 0..dim {
        if cell_of[b] != usize::MAX {
            continue;
        }
        let cell: Vec<usize> = double_coset(alg, n, b).into_iter().collect();
        for &c in &cell {
            if cell_of[c] != usize::MAX {
                return Err(ClosedError::NotClosed(format!(
                    "double cosets overlap at {}",
                    alg.label(c)
                )));
            }
            cell_of[c] = cells.len();
        }
        cells.push(cell);
    }
    Ok(DoubleCosetPartition { cells, cell_of })
}

/// `B//N` together with the data linking it to `B`.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub algebra: TableAlgebra,
    pub cosets: DoubleCosetPartition,
    /// `b//N = o(N)⁻¹ (NbN)⁺` as an element of the original algebra, per basis element b.
    pub element_map: Vec<ElementVector>,
}

impl Quotient {
    /// Quotient basis index of `b//N`.
    pub fn index_of(&self, b: usize) -> usize {
        self.cosets.cell_of(b)
    }
}

/// `B//N` on double-coset representatives. The γ constants are checked to
/// agree for every choice of t in the target cell.
pub fn quotient(alg: &TableAlgebra, n: &ClosedSubset) -> Result<Quotient, ClosedError> {
    let cosets = double_cosets(alg, n)?;
    let dim = alg.dim();
    let k = cosets.len();
    let inv_order = Scalar::one() / n.order();
    let mut entries = Vec::new();
    for i in 0..k {
        for j in 0..k {
            let mut acc = vec![Scalar::zero(); dim];
            for &r in &cosets.cells[i] {
                for &s in &cosets.cells[j] {
                    for (t, v) in alg.product_row(r, s) {
                        acc[*t] += v;
                    }
                }
            }
            for (c, cell) in cosets.cells.iter().enumerate() {
                let first = &acc[cell[0]];
                if let Some(&t) = cell.iter().find(|&&t| &acc[t] != first) {
                    return Err(ClosedError::InconsistentQuotient(format!(
                        "cells ({}, {}) into {}: t = {} and t = {} disagree",
                        alg.label(cosets.representative(i)),
                        alg.label(cosets.representative(j)),
                        alg.label(cosets.representative(c)),
                        alg.label(cell[0]),
                        alg.label(t)
                    )));
                }
                if !first.is_zero() {
                    entries.push((i, j, c, first * &inv_order));
                }
            }
        }
    }
    let mut degrees = Vec::with_capacity(k);
    let mut element_map_cells = Vec::with_capacity(k);
    for cell in &cosets.cells {
        let (o, sum) = alg.order_and_sum(cell)?;
        degrees.push(&o * &inv_order);
        element_map_cells.push(sum.scaled(&inv_order));
    }
    let star = (0..k)
        .map(|c| cosets.cell_of(alg.star(cosets.representative(c))))
        .collect();
    let raw = RawAlgebra {
        labels: cosets.representatives().iter().map(|&b| alg.label(b).to_string()).collect(),
        star,
        entries,
        degrees: Some(degrees),
    };
    let algebra = TableAlgebra::new(raw, alg.mode())?;
    let element_map = (0..dim)
        .map(|b| element_map_cells[cosets.cell_of(b)].clone())
        .collect();
    Ok(Quotient {
        algebra,
        cosets,
        element_map,
    })
}

/// `St_H(U) = ∩_{b∈U} {x ∈ H : xb = |x|b = bx}`.
pub fn stabilizer(alg: &TableAlgebra, h: &ClosedSubset, u: &[usize]) -> Result<Vec<usize>, ClosedError> {
    h.ensure(alg)?;
    check_indices(alg, u)?;
    Ok(h.members()
        .iter()
        .copied()
        .filter(|&x| u.iter().all(|&b| acts_as_scalar(alg, x, b)))
        .collect())
}

/// `x·b = |x|·b = b·x`.
pub fn acts_as_scalar(alg: &TableAlgebra, x: usize, b: usize) -> bool {
    let expected = [(b, alg.degree(x).clone())];
    alg.product_row(x, b) == expected && alg.product_row(b, x) == expected
}

/// Subalgebra `⟨N⟩` spanned by a closed subset.
pub fn subalgebra(alg: &TableAlgebra, n: &ClosedSubset) -> Result<TableAlgebra, ClosedError> {
    n.ensure(alg)?;
    Ok(alg.restrict(n.members()))
}

/// `e = o(N)⁻¹N⁺` commutes with every basis element.
pub fn idempotent_is_central(alg: &TableAlgebra, n: &ClosedSubset) -> bool {
    let e = n.idempotent();
    (0..alg.dim()).all(|b| {
        let x = ElementVector::basis(alg, b);
        alg.multiply(&e, &x).ok() == alg.multiply(&x, &e).ok()
    })
}
