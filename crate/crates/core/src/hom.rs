//! Table-algebra homomorphisms stored as basis images.
//!
//! A homomorphism sends every basis element b to a positive multiple of a
//! single basis element d, and that multiple is forced to be `|b|/|d|`, so
//! only the target index is stored.

use crate::algebra::TableAlgebra;
use crate::closed::{closed_subset, quotient, ClosedError, ClosedSubset, Quotient};
use crate::scalar::{format_rational, Scalar};
use num_traits::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HomError {
    #[error("assignment has {got} images for {dim} basis elements")]
    NotTotal { got: usize, dim: usize },
    #[error("image index {0} out of range")]
    OutOfRange(usize),
    #[error("identity is not mapped to the identity")]
    IdentityNotPreserved,
    #[error("involution not preserved at {0}")]
    StarNotPreserved(String),
    #[error("multiplicativity fails for ({0}, {1})")]
    NotMultiplicative(String, String),
    #[error("scalar for {label} is {given}, expected |b|/|d| = {expected}")]
    ScalarMismatch {
        label: String,
        given: String,
        expected: String,
    },
    #[error("closed subset {0} is not normal")]
    NotNormal(String),
    #[error("source and target of a composition do not match")]
    Mismatch,
    #[error("first isomorphism construction failed: {0}")]
    NotBijective(String),
    #[error(transparent)]
    Closed(#[from] ClosedError),
}

#[derive(Debug, Clone)]
pub struct TableHomomorphism {
    source: TableAlgebra,
    target: TableAlgebra,
    images: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Preimage,
}

impl TableHomomorphism {
    pub fn source(&self) -> &TableAlgebra {
        &self.source
    }

    pub fn target(&self) -> &TableAlgebra {
        &self.target
    }

    /// Target basis index of `Supp φ(b)`.
    pub fn image_of(&self, b: usize) -> usize {
        self.images[b]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `|b| / |φ-target of b|`.
    pub fn scalar(&self, b: usize) -> Scalar {
        self.source.degree(b) / self.target.degree(self.images[b])
    }

    /// `{b : Supp φ(b) = {1}}`.
    pub fn kernel(&self) -> ClosedSubset {
        let members: Vec<usize> = (0..self.source.dim()).filter(|&b| self.images[b] == 0).collect();
        closed_subset(&self.source, &members).expect("kernel of a homomorphism is closed")
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().len() == 1
    }

    /// `{Supp φ(b) : b ∈ B}` as a closed subset of the target.
    pub fn image(&self) -> ClosedSubset {
        let all: Vec<usize> = (0..self.source.dim()).collect();
        self.map_closed_indices(&all)
    }

    pub fn is_surjective(&self) -> bool {
        self.image().len() == self.target.dim()
    }

    fn map_closed_indices(&self, members: &[usize]) -> ClosedSubset {
        let mut imgs: Vec<usize> = members.iter().map(|&b| self.images[b]).collect();
        imgs.sort_unstable();
        imgs.dedup();
        closed_subset(&self.target, &imgs).expect("image of a closed subset is closed")
    }

    /// Forward image of a closed subset of the source, or preimage of one
    /// of the target.
    pub fn mapped_closed(&self, n: &ClosedSubset, direction: Direction) -> Result<ClosedSubset, HomError> {
        match direction {
            Direction::Forward => {
                if n.algebra_id() != self.source.id() {
                    return Err(ClosedError::AlgebraMismatch.into());
                }
                Ok(self.map_closed_indices(n.members()))
            }
            Direction::Preimage => {
                if n.algebra_id() != self.target.id() {
                    return Err(ClosedError::AlgebraMismatch.into());
                }
                let members: Vec<usize> = (0..self.source.dim())
                    .filter(|&b| n.contains(self.images[b]))
                    .collect();
                Ok(closed_subset(&self.source, &members)?)
            }
        }
    }

    /// `ψ ∘ φ` where `self = φ`.
    pub fn then(&self, psi: &TableHomomorphism) -> Result<TableHomomorphism, HomError> {
        if self.target.id() != psi.source.id() {
            return Err(HomError::Mismatch);
        }
        let images = self.images.iter().map(|&d| psi.images[d]).collect();
        make_homomorphism(&self.source, &psi.target, images)
    }

    /// Assignment as label pairs.
    pub fn label_pairs(&self) -> Vec<(String, String)> {
        (0..self.source.dim())
            .map(|b| {
                (
                    self.source.label(b).to_string(),
                    self.target.label(self.images[b]).to_string(),
                )
            })
            .collect()
    }
}

/// Validates `b ↦ (|b|/|d|) d` with `d = images[b]`.
pub fn make_homomorphism(
    source: &TableAlgebra,
    target: &TableAlgebra,
    images: Vec<usize>,
) -> Result<TableHomomorphism, HomError> {
    let dim = source.dim();
    if images.len() != dim {
        return Err(HomError::NotTotal { got: images.len(), dim });
    }
    if let Some(&d) = images.iter().find(|&&d| d >= target.dim()) {
        return Err(HomError::OutOfRange(d));
    }
    if images[0] != 0 {
        return Err(HomError::IdentityNotPreserved);
    }
    if let Some(b) = (0..dim).find(|&b| images[source.star(b)] != target.star(images[b])) {
        return Err(HomError::StarNotPreserved(source.label(b).to_string()));
    }
    let scalars: Vec<Scalar> = (0..dim).map(|b| source.degree(b) / target.degree(images[b])).collect();
    for x in 0..dim {
        for y in 0..dim {
            let s = &scalars[x] * &scalars[y];
            let lhs: BTreeMap<usize, Scalar> = target
                .product_row(images[x], images[y])
                .iter()
                .map(|(c, v)| (*c, v * &s))
                .collect();
            let mut rhs: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (t, v) in source.product_row(x, y) {
                *rhs.entry(images[*t]).or_insert_with(Scalar::zero) += v * &scalars[*t];
            }
            rhs.retain(|_, v| !v.is_zero());
            if lhs != rhs {
                return Err(HomError::NotMultiplicative(
                    source.label(x).to_string(),
                    source.label(y).to_string(),
                ));
            }
        }
    }
    Ok(TableHomomorphism {
        source: source.clone(),
        target: target.clone(),
        images,
    })
}

/// As [`make_homomorphism`] but with explicit scalars, each of which must
/// equal `|b|/|d|`.
pub fn make_homomorphism_with_scalars(
    source: &TableAlgebra,
    target: &TableAlgebra,
    assignment: &[(usize, Scalar)],
) -> Result<TableHomomorphism, HomError> {
    for (b, (d, s)) in assignment.iter().enumerate() {
        if b >= source.dim() || *d >= target.dim() {
            return Err(HomError::OutOfRange(*d));
        }
        let expected = source.degree(b) / target.degree(*d);
        if *s != expected {
            return Err(HomError::ScalarMismatch {
                label: source.label(b).to_string(),
                given: format_rational(s),
                expected: format_rational(&expected),
            });
        }
    }
    make_homomorphism(source, target, assignment.iter().map(|(d, _)| *d).collect())
}

/// Homomorphism from label pairs `[source-label, target-label]`.
pub fn homomorphism_from_labels(
    source: &TableAlgebra,
    target: &TableAlgebra,
    pairs: &[(String, String)],
) -> Result<TableHomomorphism, HomError> {
    let mut images = vec![usize::MAX; source.dim()];
    for (s, t) in pairs {
        let b = source
            .index_of(s)
            .ok_or_else(|| HomError::StarNotPreserved(format!("unknown source label {s:?}")))?;
        let d = target
            .index_of(t)
            .ok_or_else(|| HomError::StarNotPreserved(format!("unknown target label {t:?}")))?;
        images[b] = d;
    }
    let got = images.iter().filter(|&&d| d != usize::MAX).count();
    if got != source.dim() {
        return Err(HomError::NotTotal { got, dim: source.dim() });
    }
    make_homomorphism(source, target, images)
}

pub fn identity(alg: &TableAlgebra) -> TableHomomorphism {
    make_homomorphism(alg, alg, (0..alg.dim()).collect()).expect("identity is a homomorphism")
}

/// `b ↦ |b|·1`.
pub fn trivial_homomorphism(source: &TableAlgebra, target: &TableAlgebra) -> TableHomomorphism {
    make_homomorphism(source, target, vec![0; source.dim()]).expect("trivial map is a homomorphism")
}

/// `π(b) = (|b|/|b//N|)·(b//N)` onto `B//N`; refuses non-normal N.
pub fn canonical_epimorphism(
    alg: &TableAlgebra,
    n: &ClosedSubset,
) -> Result<(Quotient, TableHomomorphism), HomError> {
    if !n.is_normal() {
        return Err(HomError::NotNormal(format!("{{{}}}", n.labels(alg).join(", "))));
    }
    let q = quotient(alg, n)?;
    let images = q.cosets.cell_map().to_vec();
    let pi = make_homomorphism(alg, &q.algebra, images)?;
    Ok((q, pi))
}

/// `φ̃ : B//ker φ → ⟨φ(B)⟩` together with the quotient it is defined on.
#[derive(Debug, Clone)]
pub struct FirstIsomorphism {
    pub quotient: Quotient,
    pub image_algebra: TableAlgebra,
    pub map: TableHomomorphism,
}

pub fn first_isomorphism(phi: &TableHomomorphism) -> Result<FirstIsomorphism, HomError> {
    let kernel = phi.kernel();
    let q = quotient(&phi.source, &kernel)?;
    let image = phi.image();
    let image_algebra = crate::closed::subalgebra(&phi.target, &image)?;
    let mut images = Vec::with_capacity(q.algebra.dim());
    for cell in q.cosets.cells() {
        let d = phi.images[cell[0]];
        if cell.iter().any(|&b| phi.images[b] != d) {
            return Err(HomError::NotBijective(format!(
                "cell of {} is not mapped to a single element",
                phi.source.label(cell[0])
            )));
        }
        images.push(image.members().binary_search(&d).expect("image member"));
    }
    let mut sorted = images.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != images.len() || images.len() != image_algebra.dim() {
        return Err(HomError::NotBijective("quotient and image differ in size".into()));
    }
    let map = make_homomorphism(&q.algebra, &image_algebra, images)?;
    if !map.is_injective() || !map.is_surjective() {
        return Err(HomError::NotBijective("induced map is not bijective".into()));
    }
    Ok(FirstIsomorphism {
        quotient: q,
        image_algebra,
        map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{raw_from_table, Mode};
    use crate::closed::trivial;
    use crate::oracle::{cyclic, cyclic_named, group_algebra, schur_ring, z8_partition};
    use crate::scalar::int;

    fn k3() -> TableAlgebra {
        TableAlgebra::new(
            raw_from_table(&["1", "g"], &[0, 1], &[(1, 1, 0, int(2)), (1, 1, 1, int(1))]),
            Mode::TableAlgebra,
        )
        .unwrap()
    }

    fn z4_to_z2() -> TableHomomorphism {
        let z4 = group_algebra(&cyclic(4));
        let z2 = group_algebra(&cyclic_named(2, "b"));
        make_homomorphism(&z4, &z2, vec![0, 1, 0, 1]).unwrap()
    }

    #[test]
    fn examples_are_homomorphisms() {
        let phi = z4_to_z2();
        assert!(phi.is_surjective());
        let k = k3();
        let id = identity(&k);
        assert!(id.is_injective());
        let one = TableAlgebra::new(raw_from_table(&["1"], &[0], &[]), Mode::TableAlgebra).unwrap();
        let t = trivial_homomorphism(&k, &one);
        assert_eq!(t.scalar(1), int(2));
    }

    #[test]
    fn bad_assignment_is_rejected() {
        let z4 = group_algebra(&cyclic(4));
        let z2 = group_algebra(&cyclic(2));
        assert!(matches!(
            make_homomorphism(&z4, &z2, vec![0, 1, 1, 1]),
            Err(HomError::NotMultiplicative(..))
        ));
        assert!(matches!(
            make_homomorphism_with_scalars(&z4, &z2, &[(0, int(1)), (1, int(2)), (0, int(1)), (1, int(1))]),
            Err(HomError::ScalarMismatch { .. })
        ));
    }

    #[test]
    fn kernels() {
        assert_eq!(z4_to_z2().kernel().members(), &[0, 2]);
        assert!(z4_to_z2().kernel().is_normal());
        let k = k3();
        assert_eq!(identity(&k).kernel().members(), &[0]);
        assert_eq!(trivial_homomorphism(&k, &k).kernel().members(), &[0, 1]);
    }

    #[test]
    fn mapped_closed_subsets() {
        let phi = z4_to_z2();
        let n = closed_subset(phi.source(), &[0, 2]).unwrap();
        assert_eq!(phi.mapped_closed(&n, Direction::Forward).unwrap().members(), &[0]);
        let one = trivial(phi.target());
        assert_eq!(phi.mapped_closed(&one, Direction::Preimage).unwrap().members(), &[0, 2]);
        let all = crate::closed::full(phi.source());
        assert_eq!(phi.mapped_closed(&all, Direction::Forward).unwrap().len(), 2);
    }

    #[test]
    fn canonical_epimorphisms() {
        let z4 = group_algebra(&cyclic(4));
        let n = closed_subset(&z4, &[0, 2]).unwrap();
        let (_, pi) = canonical_epimorphism(&z4, &n).unwrap();
        assert_eq!(pi.image_of(1), 1);
        assert_eq!(pi.kernel().members(), &[0, 2]);
        let (_, id) = canonical_epimorphism(&z4, &trivial(&z4)).unwrap();
        assert_eq!(id.images(), &[0, 1, 2, 3]);
        let s = schur_ring(&cyclic(8), &z8_partition()).unwrap();
        let n = closed_subset(&s, &[0, 2]).unwrap();
        let (q, pi) = canonical_epimorphism(&s, &n).unwrap();
        assert_eq!(q.algebra.dim(), 4);
        assert_eq!(pi.kernel().members(), &[0, 2]);
    }

    #[test]
    fn non_normal_subset_is_refused() {
        let s3 = group_algebra(&crate::oracle::s3());
        let n = closed_subset(&s3, &[0, 1]).unwrap();
        assert!(matches!(canonical_epimorphism(&s3, &n), Err(HomError::NotNormal(_))));
    }

    #[test]
    fn first_isomorphism_examples() {
        let fi = first_isomorphism(&z4_to_z2()).unwrap();
        assert_eq!(fi.map.images(), &[0, 1]);
        let k = k3();
        let fi = first_isomorphism(&trivial_homomorphism(&k, &k)).unwrap();
        assert_eq!(fi.quotient.algebra.dim(), 1);
        assert_eq!(fi.image_algebra.dim(), 1);
    }
}
