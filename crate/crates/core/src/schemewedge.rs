//! Wedge products of association schemes with identical fibers, and the
//! algebra-level statements about them.
//!
//! Fiber `i` occupies points `i·|Y₁| .. (i+1)·|Y₁|`. Inside a fiber the
//! relation is that of `Y₁` (the class `b̃`); across fibers it is
//! `ḡ = ψ⁻¹(g)` for `g ∈ G∖D`, indexed after the fiber relations.

use crate::algebra::TableAlgebra;
use crate::closed::{closed_subset, quotient, subalgebra};
use crate::hom::make_homomorphism;
use crate::iso::{find_isomorphism, SearchOptions};
use crate::report::{Check, ValidationReport};
use crate::scalar::{format_rational, Scalar};
use crate::scheme::{
    adjacency_algebra, coset, relation_preserving_bijection, scheme_morphism, AssociationScheme, SchemeError,
    SchemeMorphism,
};
use crate::wedge::{recognize_wedge, wedge_product, WedgeAlgebra};
use num_bigint::BigInt;

/// Everything needed to check the algebra of a scheme wedge: the wedge
/// scheme on Y, the base scheme (X, G), the closed subset D of G and the
/// point map `ψ : Y → X`.
#[derive(Debug, Clone)]
pub struct SchemeWedgeProvenance {
    pub scheme: AssociationScheme,
    pub base: AssociationScheme,
    pub d: Vec<usize>,
    pub psi: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct SchemeWedge {
    pub provenance: SchemeWedgeProvenance,
    /// `ψ₁` as a morphism from the fiber into the base scheme.
    pub fiber_map: SchemeMorphism,
    /// D-cosets of X in fiber order; `cosets[0]` is the image of `ψ₁`.
    pub cosets: Vec<Vec<usize>>,
    /// Number of fiber relations; they come first in the wedge.
    pub fiber_rank: usize,
}

impl SchemeWedge {
    pub fn scheme(&self) -> &AssociationScheme {
        &self.provenance.scheme
    }
}

fn labels_of(s: &AssociationScheme, rels: &[usize]) -> String {
    let names: Vec<&str> = rels.iter().map(|&g| s.labels()[g].as_str()).collect();
    format!("{{{}}}", names.join(", "))
}

/// The wedge of `m = |X/D|` copies of `fiber` over `base`, where
/// `psi[y] ∈ X` defines `ψ₁` onto the D-coset containing `psi[0]`.
pub fn scheme_wedge(
    base: &AssociationScheme,
    d: &[usize],
    fiber: &AssociationScheme,
    psi: &[usize],
) -> Result<SchemeWedge, SchemeError> {
    let mut d = d.to_vec();
    d.sort_unstable();
    d.dedup();
    let base_alg = adjacency_algebra(base);
    if d.first() != Some(&0) || d.iter().any(|&g| g >= base.rank()) || closed_subset(&base_alg, &d).is_err() {
        return Err(SchemeError::NotClosed(labels_of(base, &d)));
    }
    let psi1 = scheme_morphism(fiber, base, psi.to_vec())?;
    let x1 = coset(base, &d, psi[0]);
    if psi1.image_points() != x1 {
        return Err(SchemeError::Morphism(format!(
            "point image {:?} is not the D-coset {:?}",
            psi1.image_points(),
            x1
        )));
    }
    if psi1.image_relations() != d {
        return Err(SchemeError::Morphism(format!(
            "relation image {} is not D = {}",
            labels_of(base, &psi1.image_relations()),
            labels_of(base, &d)
        )));
    }
    let fiber_alg = adjacency_algebra(fiber);
    let kernel = psi1.kernel();
    let normal = closed_subset(&fiber_alg, &kernel).map(|k| k.is_normal()).unwrap_or(false);
    if !normal {
        return Err(SchemeError::Morphism(format!(
            "kernel {} is not a normal closed subset",
            labels_of(fiber, &kernel)
        )));
    }

    let mut cosets = vec![x1.clone()];
    let mut seen = vec![false; base.points()];
    x1.iter().for_each(|&x| seen[x] = true);
    for x in 0..base.points() {
        if !seen[x] {
            let c = coset(base, &d, x);
            c.iter().for_each(|&y| seen[y] = true);
            cosets.push(c);
        }
    }
    // tau[i][k]: image in X_i of the k-th point of X_1.
    let mut tau = Vec::with_capacity(cosets.len());
    for c in &cosets {
        let t = relation_preserving_bijection(base, &x1, c, &d).ok_or_else(|| {
            SchemeError::Morphism(format!("no relation-preserving bijection from {x1:?} onto {c:?}"))
        })?;
        tau.push(t);
    }

    let n1 = fiber.points();
    let r1 = fiber.rank();
    let total = n1 * cosets.len();
    let point_psi: Vec<usize> = (0..total)
        .map(|p| {
            let (i, y) = (p / n1, p % n1);
            let k = x1.binary_search(&psi[y]).expect("image inside X_1");
            tau[i][k]
        })
        .collect();
    let outside: Vec<usize> = (0..base.rank()).filter(|g| d.binary_search(g).is_err()).collect();
    let rel: Vec<Vec<usize>> = (0..total)
        .map(|p| {
            (0..total)
                .map(|q| {
                    if p / n1 == q / n1 {
                        fiber.relation(p % n1, q % n1)
                    } else {
                        let g = base.relation(point_psi[p], point_psi[q]);
                        r1 + outside.binary_search(&g).expect("pairs across fibers lie outside D")
                    }
                })
                .collect()
        })
        .collect();
    let mut labels: Vec<String> = fiber.labels().to_vec();
    for &g in &outside {
        let mut label = format!("~{}", base.labels()[g]);
        while labels.contains(&label) {
            label.insert(0, '~');
        }
        labels.push(label);
    }
    let scheme = AssociationScheme::with_labels(rel, labels)?;
    Ok(SchemeWedge {
        provenance: SchemeWedgeProvenance {
            scheme,
            base: base.clone(),
            d,
            psi: point_psi,
        },
        fiber_map: psi1,
        cosets,
        fiber_rank: r1,
    })
}

/// Algebras produced while verifying a scheme wedge.
#[derive(Debug, Clone)]
pub struct SchemeWedgeVerification {
    pub report: ValidationReport,
    /// `(U, V)`, the adjacency algebra of the wedge scheme.
    pub adjacency: Option<TableAlgebra>,
    /// `(E, F)`, the wedge of `A(B̃₁)` and `A(G)` relative to φ.
    pub wedge: Option<WedgeAlgebra>,
    /// Relations of the wedge scheme lying inside fibers.
    pub tilde: Vec<usize>,
    /// `K̃`, the fiber relations over the diagonal of X.
    pub kernel: Vec<usize>,
}

const CHECKS: [&str; 5] = [
    "lemma-phi-epimorphism",
    "theorem-scheme-iso",
    "corollary-wedgeass",
    "theorem-quotient-scheme",
    "lemma-note",
];

struct Split {
    tilde: Vec<usize>,
    kernel: Vec<usize>,
    image: Vec<usize>,
}

/// Sorts the wedge relations into those inside fibers and those across,
/// checking that each `g ∈ G∖D` has exactly one relation over it.
fn split_relations(p: &SchemeWedgeProvenance) -> Result<(SchemeMorphism, Split), String> {
    let w = &p.scheme;
    let psi = scheme_morphism(w, &p.base, p.psi.clone()).map_err(|e| e.to_string())?;
    if !psi.is_surjective(&p.base) {
        return Err("ψ is not onto the base scheme".into());
    }
    let fiber_of: Vec<Vec<usize>> = (0..p.base.points()).map(|x| coset(&p.base, &p.d, x)).collect();
    let mut inside = vec![false; w.rank()];
    let mut across = vec![false; w.rank()];
    for a in 0..w.points() {
        for b in 0..w.points() {
            let same = fiber_of[p.psi[a]].contains(&p.psi[b]);
            let r = w.relation(a, b);
            if same {
                inside[r] = true;
            } else {
                across[r] = true;
            }
        }
    }
    if let Some(r) = (0..w.rank()).find(|&r| inside[r] && across[r]) {
        return Err(format!("relation {} meets both a fiber and a pair of fibers", w.labels()[r]));
    }
    let mut owner = vec![None; p.base.rank()];
    for r in (0..w.rank()).filter(|&r| across[r]) {
        let g = psi.relation_map[r];
        if let Some(prev) = owner[g].replace(r) {
            return Err(format!(
                "{} and {} both lie over {}",
                w.labels()[prev],
                w.labels()[r],
                p.base.labels()[g]
            ));
        }
    }
    if let Some(g) = (0..p.base.rank()).find(|g| p.d.binary_search(g).is_err() && owner[*g].is_none()) {
        return Err(format!("no relation lies over {}", p.base.labels()[g]));
    }
    let tilde: Vec<usize> = (0..w.rank()).filter(|&r| inside[r]).collect();
    let kernel = tilde.iter().copied().filter(|&r| psi.relation_map[r] == 0).collect();
    let image = psi.relation_map.clone();
    Ok((psi, Split { tilde, kernel, image }))
}

/// Checks on a scheme wedge: φ is an epimorphism onto A(D); the map
/// `θ : A(b̃) ↦ A(b̃), A(ḡ) ↦ n_K̃·A(g)` identifies `(U, V)` with the
/// algebra wedge `(E, F)` exactly; U decomposes over `(A(K̃), A(B̃₁))`;
/// `U//A(K̃) ≅ A(G)`; and `n_K̃ = |Y|/|X|`.
pub fn verify_scheme_wedge_algebra(p: &SchemeWedgeProvenance, search: &SearchOptions) -> SchemeWedgeVerification {
    let mut out = SchemeWedgeVerification {
        report: ValidationReport::new("scheme wedge"),
        adjacency: None,
        wedge: None,
        tilde: Vec::new(),
        kernel: Vec::new(),
    };
    let refuse = |out: &mut SchemeWedgeVerification, from: usize, reason: &str| {
        for name in &CHECKS[from..] {
            out.report.push(Check::refused(*name, reason));
        }
    };
    let base_alg = adjacency_algebra(&p.base);
    let d = match closed_subset(&base_alg, &p.d) {
        Ok(d) => d,
        Err(e) => {
            refuse(&mut out, 0, &e.to_string());
            return out;
        }
    };
    let split = match split_relations(p) {
        Ok((_, s)) => s,
        Err(e) => {
            refuse(&mut out, 0, &e);
            return out;
        }
    };
    out.tilde = split.tilde.clone();
    out.kernel = split.kernel.clone();
    let u = adjacency_algebra(&p.scheme);
    out.adjacency = Some(u.clone());
    let (t, k) = match (closed_subset(&u, &split.tilde), closed_subset(&u, &split.kernel)) {
        (Ok(t), Ok(k)) => (t, k),
        _ => {
            refuse(&mut out, 0, "fiber relations do not form closed subsets");
            return out;
        }
    };

    let lower = subalgebra(&u, &t).expect("closed");
    let images: Vec<usize> = t.members().iter().map(|&r| split.image[r]).collect();
    let phi = match make_homomorphism(&lower, &base_alg, images) {
        Ok(phi) if phi.image().members() == d.members() => {
            out.report.push(Check::pass("lemma-phi-epimorphism"));
            phi
        }
        Ok(phi) => {
            let image: Vec<usize> = phi.image().members().to_vec();
            out.report.push(Check::fail(
                "lemma-phi-epimorphism",
                format!("image {} is not D", labels_of(&p.base, &image)),
            ));
            refuse(&mut out, 1, "φ is not onto A(D)");
            return out;
        }
        Err(e) => {
            out.report.push(Check::fail("lemma-phi-epimorphism", e.to_string()));
            refuse(&mut out, 1, "φ is not a homomorphism");
            return out;
        }
    };

    match wedge_product(&phi, &d) {
        Ok(e) => {
            let theta: Vec<usize> = (0..u.dim())
                .map(|r| match t.members().binary_search(&r) {
                    Ok(i) => i,
                    Err(_) => e.bar_index(split.image[r]).expect("bar element of G∖D"),
                })
                .collect();
            let check = if u.equal_under(&e.algebra, &theta) {
                Check::pass("theorem-scheme-iso")
            } else {
                Check::fail("theorem-scheme-iso", "structure constants differ under θ")
            };
            out.report.push(check);
            out.wedge = Some(e);
        }
        Err(e) => out.report.push(Check::fail("theorem-scheme-iso", e.to_string())),
    }

    out.report.push(match recognize_wedge(&u, &k, &t) {
        Ok(_) => Check::pass("corollary-wedgeass"),
        Err(e) => Check::fail("corollary-wedgeass", e.to_string()),
    });

    out.report.push(match quotient(&u, &k) {
        Err(e) => Check::fail("theorem-quotient-scheme", e.to_string()),
        Ok(q) => match find_isomorphism(&q.algebra, &base_alg, search) {
            Ok(Some(_)) => Check::pass("theorem-quotient-scheme"),
            Ok(None) => Check::fail("theorem-quotient-scheme", "U//A(K) is not isomorphic to A(G)"),
            Err(e) => Check::refused("theorem-quotient-scheme", e.to_string()),
        },
    });

    let ratio = Scalar::new(
        BigInt::from(p.scheme.points()),
        BigInt::from(p.base.points()),
    );
    let detail = format!(
        "n_K = {}, |Y|/|X| = {}/{}",
        format_rational(k.order()),
        p.scheme.points(),
        p.base.points()
    );
    let check = if *k.order() == ratio {
        Check::pass("lemma-note")
    } else {
        Check::fail("lemma-note", labels_of(&p.scheme, k.members()))
    };
    out.report.push(check.with_detail(detail));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{cayley_scheme, cyclic, z8_partition};
    use crate::scheme::find_scheme_isomorphism;

    fn thin(n: usize) -> AssociationScheme {
        let part: Vec<Vec<usize>> = (0..n).map(|x| vec![x]).collect();
        cayley_scheme(&cyclic(n), &part).unwrap()
    }

    fn z8_wedge() -> SchemeWedge {
        let psi: Vec<usize> = (0..4).map(|y| 2 * y % 4).collect();
        scheme_wedge(&thin(4), &[0, 2], &thin(4), &psi).unwrap()
    }

    #[test]
    fn z8_wedge_is_the_cayley_scheme() {
        let w = z8_wedge();
        assert_eq!(w.scheme().points(), 8);
        assert_eq!(w.scheme().rank(), 6);
        let oracle = cayley_scheme(&cyclic(8), &z8_partition()).unwrap();
        assert!(find_scheme_isomorphism(w.scheme(), &oracle).is_some());
    }

    #[test]
    fn z8_wedge_algebra_checks() {
        let w = z8_wedge();
        let v = verify_scheme_wedge_algebra(&w.provenance, &SearchOptions::default());
        assert!(v.report.passed(), "{}", v.report.to_text());
        assert_eq!(v.report.checks.len(), 5);
        assert_eq!(v.kernel, vec![0, 2]);
    }

    #[test]
    fn single_fiber() {
        let z4 = thin(4);
        let w = scheme_wedge(&thin(2), &[0, 1], &z4, &[0, 1, 0, 1]).unwrap();
        assert_eq!(w.scheme().matrix(), z4.matrix());
        let v = verify_scheme_wedge_algebra(&w.provenance, &SearchOptions::default());
        assert!(v.report.passed(), "{}", v.report.to_text());
    }

    #[test]
    fn point_fiber_keeps_the_base() {
        let base = cayley_scheme(&cyclic(8), &z8_partition()).unwrap();
        let one = AssociationScheme::new(vec![vec![0]]).unwrap();
        let w = scheme_wedge(&base, &[0], &one, &[0]).unwrap();
        assert_eq!(w.scheme().matrix(), base.matrix());
        let v = verify_scheme_wedge_algebra(&w.provenance, &SearchOptions::default());
        assert!(v.report.passed(), "{}", v.report.to_text());
    }

    #[test]
    fn bad_fiber_map_is_rejected() {
        assert!(scheme_wedge(&thin(4), &[0, 2], &thin(4), &[0, 2, 2, 0]).is_err());
        assert!(scheme_wedge(&thin(4), &[0, 1], &thin(4), &[0, 2, 0, 2]).is_err());
    }
}
