//! Duality statements about closed subsets K ≤ D and wedge decompositions.

use crate::algebra::TableAlgebra;
use crate::closed::{closed_subset, full, quotient, stabilizer, subalgebra, ClosedSubset};
use crate::duality::{character_table, dual_algebra, ker_closed, CharacterTable, DualAlgebra, DualityError, DualityOptions};
use crate::hom::make_homomorphism;
use crate::iso::{find_isomorphism, SearchOptions};
use crate::report::{Check, ValidationReport};
use crate::wedge::{recognize_wedge, wedge_over_image, WedgeDecomposition};

/// Why the hypotheses `K ≤ D` and `K ⊆ St_B(B∖D)` fail, if they do.
fn hypothesis_failure(alg: &TableAlgebra, k: &ClosedSubset, d: &ClosedSubset) -> Option<String> {
    if let Some(&x) = k.members().iter().find(|&&x| !d.contains(x)) {
        return Some(format!("K is not contained in D ({} missing)", alg.label(x)));
    }
    let outside: Vec<usize> = (0..alg.dim()).filter(|&b| !d.contains(b)).collect();
    if outside.is_empty() {
        return None;
    }
    let st = stabilizer(alg, &full(alg), &outside).expect("valid indices");
    k.members()
        .iter()
        .find(|x| !st.contains(x))
        .map(|&x| format!("K is not inside St_B(B\\D) ({} does not stabilize)", alg.label(x)))
}

/// Every `χ ∉ Irr(B//K)` vanishes on `B∖D`, provided `K ⊆ St_B(B∖D)`.
pub fn vanishing_check(table: &CharacterTable, k: &ClosedSubset, d: &ClosedSubset) -> Check {
    let alg = table.algebra();
    if let Some(reason) = hypothesis_failure(alg, k, d) {
        return Check::refused("lemma-tars", reason);
    }
    let trivial_on_k = table.irr_of_quotient(k);
    let mut worst = (0.0f64, None);
    for chi in (0..table.len()).filter(|chi| !trivial_on_k.contains(chi)) {
        for b in (0..alg.dim()).filter(|&b| !d.contains(b)) {
            let v = table.value(chi, b).norm();
            if v > worst.0 {
                worst = (v, Some(format!("({}, {})", table.label(chi), alg.label(b))));
            }
        }
    }
    let check = if worst.0 <= table.tolerance() {
        Check::pass("lemma-tars")
    } else {
        Check::fail("lemma-tars", worst.1.unwrap_or_default())
    };
    check.with_margin(worst.0)
}

fn flag(d: &Result<DualAlgebra, DualityError>) -> String {
    match d {
        Ok(d) => d.is_table_algebra.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

/// If the duals of `⟨D⟩` and `B//K` are table algebras, so is the dual of B.
pub fn dual_sufficiency_check(alg: &TableAlgebra, k: &ClosedSubset, d: &ClosedSubset, opts: &DualityOptions) -> Check {
    let name = "theorem-main01";
    if !alg.is_commutative() {
        return Check::refused(name, "algebra is not commutative");
    }
    if let Some(reason) = hypothesis_failure(alg, k, d) {
        return Check::refused(name, reason);
    }
    let dual_of = |a: &TableAlgebra| character_table(a, opts).and_then(|t| dual_algebra(&t, opts));
    let lower = subalgebra(alg, d).map_err(DualityError::from).and_then(|a| dual_of(&a));
    let upper = quotient(alg, k).map_err(DualityError::from).and_then(|q| dual_of(&q.algebra));
    let whole = dual_of(alg);
    let detail = format!(
        "dual(<D>) table: {}, dual(B//K) table: {}, dual(B) table: {}",
        flag(&lower),
        flag(&upper),
        flag(&whole)
    );
    let factors_ok = matches!((&lower, &upper), (Ok(l), Ok(u)) if l.is_table_algebra && u.is_table_algebra);
    if !factors_ok {
        return Check::refused(name, detail);
    }
    match whole {
        Ok(w) if w.is_table_algebra => Check::pass(name).with_detail(detail).with_margin(w.min_constant),
        Ok(w) => Check::fail(name, "dual(B) has a negative structure constant")
            .with_detail(detail)
            .with_margin(w.min_constant),
        Err(e) => Check::fail(name, e.to_string()).with_detail(detail),
    }
}

/// Data produced while checking that the dual of a wedge is a wedge of
/// the duals in reverse order.
#[derive(Debug, Clone)]
pub struct DualWedge {
    pub report: ValidationReport,
    pub dual: Option<TableAlgebra>,
    pub decomposition: Option<WedgeDecomposition>,
}

/// Checks on the dual of a commutative wedge `b` decomposed by
/// `recognize_wedge(b, K, D)`.
pub fn dual_of_wedge_check(
    b: &TableAlgebra,
    dec: &WedgeDecomposition,
    opts: &DualityOptions,
    search: &SearchOptions,
) -> DualWedge {
    let mut report = ValidationReport::new("dual of wedge");
    let mut out = DualWedge {
        report: ValidationReport::new(""),
        dual: None,
        decomposition: None,
    };
    let refuse_all = |report: &mut ValidationReport, reason: String| {
        for name in ["corollary-aaa", "lemma-kd2", "dual-recognized", "dual-factors", "corollary-dualwedge"] {
            report.push(Check::refused(name, reason.clone()));
        }
    };
    let table = match character_table(b, opts) {
        Ok(t) => t,
        Err(e) => {
            refuse_all(&mut report, e.to_string());
            out.report = report;
            return out;
        }
    };
    let k = dec.rebuilt.kernel.members().iter().map(|&i| dec.d_members[i]).collect::<Vec<_>>();
    let k = closed_subset(b, &k).expect("kernel is closed in B");
    let d = closed_subset(b, &dec.d_members).expect("D is closed in B");

    let dual_of = |a: &TableAlgebra| character_table(a, opts).and_then(|t| dual_algebra(&t, opts));
    let whole = match dual_algebra(&table, opts) {
        Ok(w) => w,
        Err(e) => {
            refuse_all(&mut report, e.to_string());
            out.report = report;
            return out;
        }
    };
    let dual_lower = dual_of(&dec.lower);
    let dual_upper = dual_of(&dec.upper.algebra);
    let factors_table = matches!((&dual_lower, &dual_upper), (Ok(l), Ok(u)) if l.is_table_algebra && u.is_table_algebra);
    if !factors_table {
        refuse_all(&mut report, "duals of the factors are not both table algebras".into());
        out.report = report;
        return out;
    }
    report.push(
        if whole.is_table_algebra {
            Check::pass("corollary-aaa")
        } else {
            Check::fail("corollary-aaa", "dual has a negative structure constant")
        }
        .with_margin(whole.min_constant),
    );
    let exact = match whole.exact_algebra() {
        Ok(e) => e.clone(),
        Err(e) => {
            for name in ["lemma-kd2", "dual-recognized", "dual-factors", "corollary-dualwedge"] {
                report.push(Check::refused(name, e.to_string()));
            }
            out.report = report;
            return out;
        }
    };
    out.dual = Some(exact.clone());
    let (ker_d, ker_k) = match (ker_closed(&table, &whole, &d), ker_closed(&table, &whole, &k)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => {
            report.push(Check::fail("lemma-kd2", e.to_string()));
            out.report = report;
            return out;
        }
    };
    let not_sub = ker_d.members().iter().find(|x| !ker_k.contains(**x)).copied();
    let outside: Vec<usize> = (0..exact.dim()).filter(|&x| !ker_k.contains(x)).collect();
    let stab_fail = if outside.is_empty() {
        None
    } else {
        let st = stabilizer(&exact, &full(&exact), &outside).expect("valid indices");
        ker_d.members().iter().find(|x| !st.contains(x)).copied()
    };
    report.push(Check::from_witness(
        "lemma-kd2",
        not_sub
            .map(|x| format!("{} in ker(D) but not ker(K)", exact.label(x)))
            .or_else(|| stab_fail.map(|x| format!("{} outside the stabilizer", exact.label(x)))),
    ));

    let dual_dec = match recognize_wedge(&exact, &ker_d, &ker_k) {
        Ok(dd) => {
            report.push(Check::pass("dual-recognized"));
            dd
        }
        Err(e) => {
            report.push(Check::fail("dual-recognized", e.to_string()));
            report.push(Check::refused("dual-factors", "dual not decomposed"));
            report.push(Check::refused("corollary-dualwedge", "dual not decomposed"));
            out.report = report;
            return out;
        }
    };
    let dual_upper = dual_upper.expect("checked").exact;
    let dual_lower = dual_lower.expect("checked").exact;
    let (Some(dual_upper), Some(dual_lower)) = (dual_upper, dual_lower) else {
        report.push(Check::refused("dual-factors", "factor duals are not exact"));
        report.push(Check::refused("corollary-dualwedge", "factor duals are not exact"));
        out.report = report;
        return out;
    };
    // ⟨ker K⟩ ≅ dual(B//K) and dual//ker(D) ≅ dual(⟨D⟩).
    let sigma1 = find_isomorphism(&dual_upper, &dual_dec.lower, search);
    let sigma2 = find_isomorphism(&dual_dec.upper.algebra, &dual_lower, search);
    let (s1, s2) = match (sigma1, sigma2) {
        (Ok(Some(s1)), Ok(Some(s2))) => {
            report.push(Check::pass("dual-factors"));
            (s1, s2)
        }
        (Err(e), _) | (_, Err(e)) => {
            report.push(Check::refused("dual-factors", e.to_string()));
            report.push(Check::refused("corollary-dualwedge", e.to_string()));
            out.report = report;
            return out;
        }
        _ => {
            report.push(Check::fail("dual-factors", "factor of the dual is not the dual of a factor"));
            report.push(Check::refused("corollary-dualwedge", "factors do not match"));
            out.report = report;
            return out;
        }
    };
    // φ' = σ2 ∘ π' ∘ σ1 : dual(B//K) → dual(⟨D⟩); its wedge must be the dual.
    let images: Vec<usize> = s1.iter().map(|&x| s2[dual_dec.phi.image_of(x)]).collect();
    let verdict = make_homomorphism(&dual_upper, &dual_lower, images)
        .map_err(|e| e.to_string())
        .and_then(|phi| wedge_over_image(&phi).map_err(|e| e.to_string()))
        .and_then(|w| match find_isomorphism(&w.algebra, &exact, search) {
            Ok(Some(_)) => Ok(()),
            Ok(None) => Err("wedge of the duals is not isomorphic to the dual".to_string()),
            Err(e) => Err(e.to_string()),
        });
    report.push(match verdict {
        Ok(()) => Check::pass("corollary-dualwedge"),
        Err(e) => Check::fail("corollary-dualwedge", e),
    });
    out.report = report;
    out.decomposition = Some(dual_dec);
    out
}
