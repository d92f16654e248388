//! Wedge and wreath products of table algebras, and their recognition.
//!
//! Given an epimorphism `φ` from `(C, D)` onto a closed subset `N` of
//! `(A, B)` with kernel `K`, the wedge has basis `D ∪ {b̄ = o(K)b : b ∈ B∖N}`.
//! Products that land on some `h̄` with `h ∈ N` are rewritten into the
//! D-part through `h̄ = (|h|/|d|)·dK⁺` for any `d` with `Supp φ(d) = h`.

use crate::algebra::{AlgebraError, Mode, RawAlgebra, TableAlgebra};
use crate::closed::{self, closed_subset, quotient, ClosedError, ClosedSubset, Quotient};
use crate::hom::{make_homomorphism, trivial_homomorphism, HomError, TableHomomorphism};
use crate::iso::{find_isomorphism, SearchError, SearchOptions};
use crate::report::{Check, ValidationReport};
use crate::scalar::{format_rational, Scalar};
use num_traits::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WedgeError {
    #[error("epimorphism is not onto N: image {image}, N {n}")]
    NotOntoN { image: String, n: String },
    #[error("N must be a closed subset of the target of the epimorphism")]
    WrongAlgebra,
    #[error("identification of {0} with dK+ depends on the choice of d")]
    InconsistentIdentification(String),
    #[error("wedge product failed validation: {}", .0.failure_summary())]
    Invalid(Box<ValidationReport>),
    #[error("{condition} fails, witness {witness}")]
    Refused { condition: String, witness: String },
    #[error("reconstruction does not match the input: {0}")]
    ReconstructionMismatch(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Closed(#[from] ClosedError),
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    Search(#[from] SearchError),
}

/// Origin of a wedge basis element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    /// Element of the lower factor D (same index).
    Lower(usize),
    /// `b̄` for the given basis index b of the upper factor.
    Upper(usize),
}

/// `dK⁺ = (|d|/|h|)·h̄` for `h = Supp φ(d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identification {
    pub d: usize,
    pub h: usize,
    pub factor: Scalar,
}

#[derive(Debug, Clone)]
pub struct WedgeAlgebra {
    pub algebra: TableAlgebra,
    pub lower: TableAlgebra,
    pub upper: TableAlgebra,
    /// Epimorphism from `lower` into `upper` with image N.
    pub phi: TableHomomorphism,
    /// N as a closed subset of `upper`.
    pub n: ClosedSubset,
    /// `K = ker φ` as a closed subset of `lower`.
    pub kernel: ClosedSubset,
    pub parts: Vec<Part>,
    pub identifications: Vec<Identification>,
}

impl WedgeAlgebra {
    /// `o(K)`.
    pub fn kernel_order(&self) -> &Scalar {
        self.kernel.order()
    }

    /// Indices of the D-part in the wedge (always `0..dim(D)`).
    pub fn lower_indices(&self) -> Vec<usize> {
        (0..self.lower.dim()).collect()
    }

    /// D as a closed subset of the wedge.
    pub fn lower_part(&self) -> ClosedSubset {
        closed_subset(&self.algebra, &self.lower_indices()).expect("D-part is closed")
    }

    /// K as a closed subset of the wedge.
    pub fn kernel_part(&self) -> ClosedSubset {
        closed_subset(&self.algebra, self.kernel.members()).expect("kernel is closed")
    }

    pub fn bar_index(&self, b: usize) -> Option<usize> {
        self.parts.iter().position(|p| *p == Part::Upper(b))
    }
}

fn bar_label(upper: &TableAlgebra, b: usize, taken: &[String]) -> String {
    let mut label = format!("~{}", upper.label(b));
    while taken.contains(&label) {
        label.insert(0, '~');
    }
    label
}

/// The wedge of `phi.source()` and `phi.target()` relative to `phi`, whose
/// image must be exactly `n`.
pub fn wedge_product(phi: &TableHomomorphism, n: &ClosedSubset) -> Result<WedgeAlgebra, WedgeError> {
    let lower = phi.source().clone();
    let upper = phi.target().clone();
    if n.algebra_id() != upper.id() {
        return Err(WedgeError::WrongAlgebra);
    }
    let image = phi.image();
    if image.members() != n.members() {
        return Err(WedgeError::NotOntoN {
            image: format!("{{{}}}", image.labels(&upper).join(", ")),
            n: format!("{{{}}}", n.labels(&upper).join(", ")),
        });
    }
    let kernel = phi.kernel();
    let o_k = kernel.order().clone();
    let dim_d = lower.dim();

    let mut parts: Vec<Part> = (0..dim_d).map(Part::Lower).collect();
    let mut labels: Vec<String> = lower.labels().to_vec();
    let mut bar_of = vec![usize::MAX; upper.dim()];
    for b in (0..upper.dim()).filter(|&b| !n.contains(b)) {
        bar_of[b] = parts.len();
        parts.push(Part::Upper(b));
        let l = bar_label(&upper, b, &labels);
        labels.push(l);
    }
    let dim = parts.len();

    // h̄ for h ∈ N, expressed on the D-part.
    let mut identifications = Vec::with_capacity(dim_d);
    let mut bar_in_lower: Vec<Option<BTreeMap<usize, Scalar>>> = vec![None; upper.dim()];
    for d in 0..dim_d {
        let h = phi.image_of(d);
        let factor = lower.degree(d) / upper.degree(h);
        let mut v: BTreeMap<usize, Scalar> = BTreeMap::new();
        let scale = upper.degree(h) / lower.degree(d);
        for &k in kernel.members() {
            for (c, x) in lower.product_row(d, k) {
                *v.entry(*c).or_insert_with(Scalar::zero) += x * &scale;
            }
        }
        v.retain(|_, x| !x.is_zero());
        match &bar_in_lower[h] {
            None => bar_in_lower[h] = Some(v),
            Some(prev) if *prev == v => {}
            Some(_) => return Err(WedgeError::InconsistentIdentification(upper.label(h).to_string())),
        }
        identifications.push(Identification { d, h, factor });
    }

    let bar = |t: usize| -> Vec<(usize, Scalar)> {
        if bar_of[t] != usize::MAX {
            vec![(bar_of[t], Scalar::from_integer(1.into()))]
        } else {
            bar_in_lower[t]
                .as_ref()
                .expect("φ is onto N")
                .iter()
                .map(|(c, v)| (*c, v.clone()))
                .collect()
        }
    };
    let expand = |coef: &Scalar, row: &[(usize, Scalar)], out: &mut BTreeMap<usize, Scalar>| {
        for (t, v) in row {
            for (c, w) in bar(*t) {
                *out.entry(c).or_insert_with(Scalar::zero) += coef * v * w;
            }
        }
    };

    let mut entries = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            let mut out: BTreeMap<usize, Scalar> = BTreeMap::new();
            match (parts[i], parts[j]) {
                (Part::Lower(a), Part::Lower(b)) => {
                    out.extend(lower.product_row(a, b).iter().cloned());
                }
                (Part::Upper(a), Part::Upper(b)) => expand(&o_k, upper.product_row(a, b), &mut out),
                (Part::Lower(d), Part::Upper(b)) => {
                    let h = phi.image_of(d);
                    let f = lower.degree(d) / upper.degree(h);
                    expand(&f, upper.product_row(h, b), &mut out);
                }
                (Part::Upper(b), Part::Lower(d)) => {
                    let h = phi.image_of(d);
                    let f = lower.degree(d) / upper.degree(h);
                    expand(&f, upper.product_row(b, h), &mut out);
                }
            }
            for (c, v) in out {
                if !v.is_zero() {
                    entries.push((i, j, c, v));
                }
            }
        }
    }
    let star = parts
        .iter()
        .map(|p| match *p {
            Part::Lower(d) => lower.star(d),
            Part::Upper(b) => bar_of[upper.star(b)],
        })
        .collect();
    let degrees = parts
        .iter()
        .map(|p| match *p {
            Part::Lower(d) => lower.degree(d).clone(),
            Part::Upper(b) => &o_k * upper.degree(b),
        })
        .collect();
    let raw = RawAlgebra {
        labels,
        star,
        entries,
        degrees: Some(degrees),
    };
    let algebra = match TableAlgebra::new(raw, Mode::TableAlgebra) {
        Ok(a) => a,
        Err(AlgebraError::Invalid(report)) => return Err(WedgeError::Invalid(report)),
        Err(e) => return Err(e.into()),
    };
    Ok(WedgeAlgebra {
        algebra,
        lower,
        upper,
        phi: phi.clone(),
        n: n.clone(),
        kernel,
        parts,
        identifications,
    })
}

/// Wedge relative to `phi` with N taken to be its image.
pub fn wedge_over_image(phi: &TableHomomorphism) -> Result<WedgeAlgebra, WedgeError> {
    wedge_product(phi, &phi.image())
}

/// Wedge with the trivial epimorphism `d ↦ |d|·1` onto `N = {1}`.
pub fn wreath_product(lower: &TableAlgebra, upper: &TableAlgebra) -> Result<WedgeAlgebra, WedgeError> {
    let phi = trivial_homomorphism(lower, upper);
    wedge_product(&phi, &closed::trivial(upper))
}

/// Output of a successful [`recognize_wedge`].
#[derive(Debug, Clone)]
pub struct WedgeDecomposition {
    /// `⟨D⟩`, with basis in the order of `d_members`.
    pub lower: TableAlgebra,
    pub d_members: Vec<usize>,
    /// `B//K`.
    pub upper: Quotient,
    /// Canonical epimorphism `⟨D⟩ → ⟨D⟩//K` viewed inside `B//K`.
    pub phi: TableHomomorphism,
    pub n: ClosedSubset,
    pub rebuilt: WedgeAlgebra,
    /// Rebuilt wedge index → original basis index; the tensors agree exactly under it.
    pub matching: Vec<usize>,
}

/// Outcome of the three conditions that characterize a wedge.
pub fn wedge_conditions(b: &TableAlgebra, k: &ClosedSubset, d: &ClosedSubset) -> ValidationReport {
    let mut report = ValidationReport::new("wedge decomposition conditions");
    let contained = k.members().iter().find(|&&x| !d.contains(x));
    report.push(Check::from_witness(
        "k-subset-of-d",
        contained.map(|&x| b.label(x).to_string()),
    ));
    let lower = b.restrict(d.members());
    let pos: Vec<usize> = k
        .members()
        .iter()
        .filter_map(|x| d.members().binary_search(x).ok())
        .collect();
    let k_normal_in_d = closed_subset(&lower, &pos).map(|c| c.is_normal()).unwrap_or(false);
    report.push(if k_normal_in_d {
        Check::pass("k-normal-in-d")
    } else {
        Check::fail("k-normal-in-d", "K")
    });
    report.push(if k.is_normal() {
        Check::pass("k-normal-in-b")
    } else {
        Check::fail("k-normal-in-b", "K")
    });
    let mut witness = None;
    for x in (0..b.dim()).filter(|&x| !d.contains(x)) {
        let mut left: BTreeMap<usize, Scalar> = BTreeMap::new();
        let mut right: BTreeMap<usize, Scalar> = BTreeMap::new();
        for &kk in k.members() {
            for (c, v) in b.product_row(x, kk) {
                *left.entry(*c).or_insert_with(Scalar::zero) += v;
            }
            for (c, v) in b.product_row(kk, x) {
                *right.entry(*c).or_insert_with(Scalar::zero) += v;
            }
        }
        let expected = vec![(x, k.order().clone())];
        let l: Vec<(usize, Scalar)> = left.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        let r: Vec<(usize, Scalar)> = right.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        if l != expected || r != expected {
            witness = Some(b.label(x).to_string());
            break;
        }
    }
    report.push(Check::from_witness("kplus-scalar-outside-d", witness));
    report
}

/// Decomposes `b` as a wedge of `⟨D⟩` and `B//K`, or refuses with the
/// failing condition.
pub fn recognize_wedge(
    b: &TableAlgebra,
    k: &ClosedSubset,
    d: &ClosedSubset,
) -> Result<WedgeDecomposition, WedgeError> {
    if k.algebra_id() != b.id() || d.algebra_id() != b.id() {
        return Err(ClosedError::AlgebraMismatch.into());
    }
    let report = wedge_conditions(b, k, d);
    if let Some(fail) = report.failures().next() {
        return Err(WedgeError::Refused {
            condition: fail.name.clone(),
            witness: fail.witness.clone().unwrap_or_default(),
        });
    }
    let d_members = d.members().to_vec();
    let lower = b.restrict(&d_members);
    let upper = quotient(b, k)?;
    let images: Vec<usize> = d_members.iter().map(|&x| upper.index_of(x)).collect();
    let phi = make_homomorphism(&lower, &upper.algebra, images)?;
    let n = phi.image();
    let rebuilt = wedge_product(&phi, &n)?;
    let matching: Vec<usize> = rebuilt
        .parts
        .iter()
        .map(|p| match *p {
            Part::Lower(i) => d_members[i],
            Part::Upper(c) => upper.cosets.representative(c),
        })
        .collect();
    if !rebuilt.algebra.equal_under(b, &matching) {
        return Err(WedgeError::ReconstructionMismatch(
            "tensors differ under the canonical matching".into(),
        ));
    }
    Ok(WedgeDecomposition {
        lower,
        d_members,
        upper,
        phi,
        n,
        rebuilt,
        matching,
    })
}

/// Checks on a constructed wedge: K normal in the wedge, `kx = |k|x = xk`
/// and `xK⁺ = o(K)x` outside D, and `W//K ≅ (A, B)`.
pub fn verify_wedge_identities(w: &WedgeAlgebra, options: &SearchOptions) -> ValidationReport {
    let alg = &w.algebra;
    let mut report = ValidationReport::new("wedge identities");
    let k = w.kernel_part();
    report.push(if k.is_normal() {
        Check::pass("kernel-normal")
    } else {
        Check::fail("kernel-normal", format!("{{{}}}", k.labels(alg).join(", ")))
    });
    let outside: Vec<usize> = (w.lower.dim()..alg.dim()).collect();
    let scalar_action = outside.iter().find_map(|&x| {
        k.members()
            .iter()
            .find(|&&kk| !closed::acts_as_scalar(alg, kk, x))
            .map(|&kk| format!("({}, {})", alg.label(kk), alg.label(x)))
    });
    report.push(Check::from_witness("lemma-kd-scalar-action", scalar_action));
    let cond = wedge_conditions(alg, &k, &w.lower_part());
    let mut kplus = cond.check("kplus-scalar-outside-d").cloned().expect("check present");
    kplus.name = "lemma-kd-kplus".into();
    report.push(kplus);
    let iso_check = match quotient(alg, &k) {
        Err(e) => Check::fail("lemma-iso", e.to_string()),
        Ok(q) => match find_isomorphism(&q.algebra, &w.upper, options) {
            Ok(Some(_)) => Check::pass("lemma-iso"),
            Ok(None) => Check::fail("lemma-iso", "W//K is not isomorphic to the upper factor"),
            Err(e) => Check::refused("lemma-iso", e.to_string()),
        },
    };
    report.push(iso_check);
    report
}

/// `o(D) + o(K)·(o(B) − o(N))`.
pub fn expected_order(w: &WedgeAlgebra) -> Scalar {
    w.lower.order() + w.kernel_order() * (w.upper.order() - w.n.order())
}

pub fn describe_identifications(w: &WedgeAlgebra) -> Vec<String> {
    w.identifications
        .iter()
        .map(|i| {
            format!(
                "{}K+ = {}*~{}",
                w.lower.label(i.d),
                format_rational(&i.factor),
                w.upper.label(i.h)
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::raw_from_table;
    use crate::hom::identity;
    use crate::oracle::{cyclic, cyclic_named, direct_product, group_algebra, schur_ring, z8_partition};
    use crate::scalar::int;

    pub(crate) fn z8_wedge() -> WedgeAlgebra {
        let z4 = group_algebra(&cyclic(4));
        let z4p = group_algebra(&cyclic_named(4, "h"));
        let phi = make_homomorphism(&z4, &z4p, vec![0, 2, 0, 2]).unwrap();
        let n = closed_subset(&z4p, &[0, 2]).unwrap();
        wedge_product(&phi, &n).unwrap()
    }

    #[test]
    fn z8_wedge_is_the_schur_ring() {
        let w = z8_wedge();
        let labels: Vec<&str> = w.algebra.labels().iter().map(String::as_str).collect();
        assert_eq!(labels, ["1", "g", "g2", "g3", "~h", "~h3"]);
        assert_eq!(w.algebra.product_row(4, 4), &[(1, int(2)), (3, int(2))]);
        assert_eq!(w.algebra.product_row(4, 5), &[(0, int(2)), (2, int(2))]);
        assert_eq!(w.algebra.product_row(1, 4), &[(5, int(1))]);
        let s = schur_ring(&cyclic(8), &z8_partition()).unwrap();
        assert!(w.algebra.same_structure(&s));
        assert_eq!(w.algebra.order(), expected_order(&w));
        assert_eq!(w.algebra.order(), int(8));
    }

    #[test]
    fn wreath_of_z2_by_z2() {
        let z2 = group_algebra(&cyclic_named(2, "d"));
        let z2b = group_algebra(&cyclic_named(2, "b"));
        let w = wreath_product(&z2, &z2b).unwrap();
        assert_eq!(w.algebra.dim(), 3);
        assert_eq!(w.algebra.product_row(2, 2), &[(0, int(2)), (1, int(2))]);
        let klein = direct_product(&cyclic(2), &cyclic(2));
        let oracle = schur_ring(&klein, &[vec![0], vec![1], vec![2, 3]]).unwrap();
        assert!(w.algebra.same_structure(&oracle));
        for d in 0..2 {
            assert!(closed::acts_as_scalar(&w.algebra, d, 2));
        }
    }

    #[test]
    fn wreath_with_k3_on_top() {
        let z2 = group_algebra(&cyclic_named(2, "d"));
        let k3 = TableAlgebra::new(
            raw_from_table(&["1", "g"], &[0, 1], &[(1, 1, 0, int(2)), (1, 1, 1, int(1))]),
            Mode::TableAlgebra,
        )
        .unwrap();
        let w = wreath_product(&z2, &k3).unwrap();
        assert_eq!(w.algebra.dim(), 3);
        assert_eq!(w.algebra.degrees(), &[int(1), int(1), int(4)]);
    }

    #[test]
    fn wreath_with_trivial_top_is_lower() {
        let z3 = group_algebra(&cyclic(3));
        let one = TableAlgebra::new(raw_from_table(&["1"], &[0], &[]), Mode::TableAlgebra).unwrap();
        let w = wreath_product(&z3, &one).unwrap();
        assert!(w.algebra.same_structure(&z3));
    }

    #[test]
    fn degenerate_n_equal_b() {
        let z2 = group_algebra(&cyclic(2));
        let w = wedge_over_image(&identity(&z2)).unwrap();
        assert!(w.algebra.same_structure(&z2));
        assert!(verify_wedge_identities(&w, &SearchOptions::default()).passed());
    }

    #[test]
    fn not_onto_n_is_rejected() {
        let z4 = group_algebra(&cyclic(4));
        let z4p = group_algebra(&cyclic_named(4, "h"));
        let phi = make_homomorphism(&z4, &z4p, vec![0, 2, 0, 2]).unwrap();
        assert!(matches!(
            wedge_product(&phi, &closed::full(&z4p)),
            Err(WedgeError::NotOntoN { .. })
        ));
    }

    #[test]
    fn identities_hold_on_examples() {
        let report = verify_wedge_identities(&z8_wedge(), &SearchOptions::default());
        assert!(report.passed(), "{}", report.to_text());
        let z2 = group_algebra(&cyclic(2));
        let w = wreath_product(&z2, &z2).unwrap();
        assert!(verify_wedge_identities(&w, &SearchOptions::default()).passed());
    }

    #[test]
    fn recognition_round_trip() {
        let s = schur_ring(&cyclic(8), &z8_partition()).unwrap();
        let k = closed_subset(&s, &[0, 2]).unwrap();
        let d = closed_subset(&s, &[0, 1, 2, 3]).unwrap();
        let dec = recognize_wedge(&s, &k, &d).unwrap();
        assert_eq!(dec.matching, vec![0, 1, 2, 3, 4, 5]);

        let w = z8_wedge();
        let dec = recognize_wedge(&w.algebra, &w.kernel_part(), &w.lower_part()).unwrap();
        assert!(dec.rebuilt.algebra.equal_under(&w.algebra, &dec.matching));
    }

    #[test]
    fn trivial_kernel_recognition() {
        let s = schur_ring(&cyclic(8), &z8_partition()).unwrap();
        let d = closed_subset(&s, &[0, 1, 2, 3]).unwrap();
        assert!(recognize_wedge(&s, &closed::trivial(&s), &d).is_ok());
    }

    #[test]
    fn z4_is_refused_with_witness_g() {
        let z4 = group_algebra(&cyclic(4));
        let k = closed_subset(&z4, &[0, 2]).unwrap();
        match recognize_wedge(&z4, &k, &k) {
            Err(WedgeError::Refused { condition, witness }) => {
                assert_eq!(condition, "kplus-scalar-outside-d");
                assert_eq!(witness, "g");
            }
            other => panic!("expected refusal, got {other:?}"),
        }
    }
}
