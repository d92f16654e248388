//! Association schemes given by relation matrices.

use crate::algebra::{Mode, RawAlgebra, TableAlgebra};
use crate::closed::{closed_subset, double_cosets, is_closed};
use crate::report::{Check, ValidationReport};
use crate::scalar::int;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SchemeError {
    #[error("relation matrix is not square: {0}")]
    NotSquare(String),
    #[error("relation index {value} at ({x}, {y}) exceeds {max}")]
    EntryOutOfRange { x: usize, y: usize, value: usize, max: usize },
    #[error("empty point set")]
    Empty,
    #[error("not an association scheme: {}", .0.failure_summary())]
    Invalid(Box<ValidationReport>),
    #[error("relations {0} do not form a closed subset")]
    NotClosed(String),
    #[error("point {point} out of range for a scheme on {points} points")]
    PointOutOfRange { point: usize, points: usize },
    #[error("not a scheme morphism: {0}")]
    Morphism(String),
}

/// Points `0..n` with `rel[x][y]` the index of the relation containing
/// `(x, y)`; relation 0 is the diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociationScheme {
    rel: Vec<Vec<usize>>,
    labels: Vec<String>,
    star: Vec<usize>,
    /// Dense intersection numbers `λ_{ghk}` at `[(g * r + h) * r + k]`.
    numbers: Vec<u64>,
}

struct Analysis {
    report: ValidationReport,
    star: Vec<usize>,
    numbers: Vec<u64>,
}

fn structure(rel: &[Vec<usize>], relations: Option<usize>) -> Result<usize, SchemeError> {
    let n = rel.len();
    if n == 0 {
        return Err(SchemeError::Empty);
    }
    if let Some((x, row)) = rel.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(SchemeError::NotSquare(format!("row {x} has {} entries, expected {n}", row.len())));
    }
    let r = match relations {
        Some(r) => r,
        None => rel.iter().flatten().max().map_or(1, |m| m + 1),
    };
    for (x, row) in rel.iter().enumerate() {
        for (y, &v) in row.iter().enumerate() {
            if v >= r {
                return Err(SchemeError::EntryOutOfRange { x, y, value: v, max: r - 1 });
            }
        }
    }
    Ok(r)
}

fn analyse(rel: &[Vec<usize>], r: usize) -> Analysis {
    let n = rel.len();
    let mut report = ValidationReport::new("association scheme");

    let diag = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .find(|&(x, y)| (rel[x][y] == 0) != (x == y))
        .map(|(x, y)| format!("({x}, {y})"));
    report.push(Check::from_witness("diagonal", diag));

    let mut used = vec![false; r];
    rel.iter().flatten().for_each(|&v| used[v] = true);
    let empty = (0..r).find(|&g| !used[g]).map(|g| format!("relation {g}"));
    report.push(Check::from_witness("relations-nonempty", empty));

    let mut star = vec![usize::MAX; r];
    let mut pairing = None;
    'pair: for x in 0..n {
        for y in 0..n {
            let (g, h) = (rel[x][y], rel[y][x]);
            for (a, b) in [(g, h), (h, g)] {
                if star[a] == usize::MAX {
                    star[a] = b;
                } else if star[a] != b {
                    pairing = Some(format!("({x}, {y})"));
                    break 'pair;
                }
            }
        }
    }
    for (g, s) in star.iter_mut().enumerate() {
        if *s == usize::MAX {
            *s = g;
        }
    }
    report.push(Check::from_witness("pairing", pairing));

    let mut numbers = vec![0u64; r * r * r];
    let mut witness_of = vec![None::<(usize, usize)>; r];
    let mut scratch = vec![0u64; r * r];
    let mut regularity = None;
    'count: for x in 0..n {
        for y in 0..n {
            scratch.iter_mut().for_each(|c| *c = 0);
            for z in 0..n {
                scratch[rel[x][z] * r + rel[z][y]] += 1;
            }
            let k = rel[x][y];
            match witness_of[k] {
                None => {
                    witness_of[k] = Some((x, y));
                    for gh in 0..r * r {
                        numbers[gh * r + k] = scratch[gh];
                    }
                }
                Some((x0, y0)) => {
                    if let Some(gh) = (0..r * r).find(|&gh| numbers[gh * r + k] != scratch[gh]) {
                        regularity = Some((x0, y0, x, y, gh / r, gh % r));
                        break 'count;
                    }
                }
            }
        }
    }
    let mut check = Check::from_witness(
        "intersection-numbers",
        regularity.map(|(x0, y0, x, y, _, _)| format!("({x0}, {y0}, {x}, {y})")),
    );
    if let Some((_, _, _, _, g, h)) = regularity {
        check = check.with_detail(format!("counts for relations ({g}, {h}) differ"));
    }
    report.push(check);
    Analysis { report, star, numbers }
}

/// Checks the scheme axioms by exhaustive triple counting. `relations` is
/// the declared number of relations (`d + 1`), if any.
pub fn validate_scheme(rel: &[Vec<usize>], relations: Option<usize>) -> Result<ValidationReport, SchemeError> {
    let r = structure(rel, relations)?;
    Ok(analyse(rel, r).report)
}

impl AssociationScheme {
    pub fn new(rel: Vec<Vec<usize>>) -> Result<Self, SchemeError> {
        Self::with_relations(rel, None)
    }

    pub fn with_relations(rel: Vec<Vec<usize>>, relations: Option<usize>) -> Result<Self, SchemeError> {
        let r = structure(&rel, relations)?;
        let labels = (0..r).map(default_label).collect();
        Self::build(rel, r, labels)
    }

    /// Scheme with explicit relation labels (relation 0 first).
    pub fn with_labels(rel: Vec<Vec<usize>>, labels: Vec<String>) -> Result<Self, SchemeError> {
        let r = structure(&rel, Some(labels.len()))?;
        Self::build(rel, r, labels)
    }

    fn build(rel: Vec<Vec<usize>>, r: usize, labels: Vec<String>) -> Result<Self, SchemeError> {
        let analysis = analyse(&rel, r);
        if !analysis.report.passed() {
            return Err(SchemeError::Invalid(Box::new(analysis.report)));
        }
        Ok(AssociationScheme {
            rel,
            labels,
            star: analysis.star,
            numbers: analysis.numbers,
        })
    }

    pub fn points(&self) -> usize {
        self.rel.len()
    }

    /// Number of relations, `d + 1`.
    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn relation(&self, x: usize, y: usize) -> usize {
        self.rel[x][y]
    }

    pub fn matrix(&self) -> &[Vec<usize>] {
        &self.rel
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn star(&self, g: usize) -> usize {
        self.star[g]
    }

    pub fn intersection_number(&self, g: usize, h: usize, k: usize) -> u64 {
        let r = self.rank();
        self.numbers[(g * r + h) * r + k]
    }

    /// `n_g = λ_{g g* 0}`.
    pub fn valency(&self, g: usize) -> u64 {
        self.intersection_number(g, self.star[g], 0)
    }

    pub fn valencies(&self) -> Vec<u64> {
        (0..self.rank()).map(|g| self.valency(g)).collect()
    }

    pub fn report(&self) -> ValidationReport {
        analyse(&self.rel, self.rank()).report
    }
}

fn default_label(g: usize) -> String {
    if g == 0 {
        "1".to_string()
    } else {
        format!("r{g}")
    }
}

fn check_closed(s: &AssociationScheme, h: &[usize]) -> Result<Vec<usize>, SchemeError> {
    let mut h = h.to_vec();
    h.sort_unstable();
    h.dedup();
    let names = || h.iter().map(|&g| s.labels.get(g).cloned().unwrap_or_else(|| g.to_string())).collect::<Vec<_>>().join(", ");
    if h.first() != Some(&0) || h.iter().any(|&g| g >= s.rank()) || !is_closed(&adjacency_algebra(s), &h) {
        return Err(SchemeError::NotClosed(format!("{{{}}}", names())));
    }
    Ok(h)
}

/// Points of `xH = {y : (x, y) ∈ h for some h ∈ H}`, in increasing order.
pub fn coset(s: &AssociationScheme, h: &[usize], x: usize) -> Vec<usize> {
    (0..s.points()).filter(|&y| h.contains(&s.rel[x][y])).collect()
}

/// Restriction to `xH` with relations `h ∩ (xH × xH)` for `h ∈ H`.
pub fn subscheme(s: &AssociationScheme, h: &[usize], x: usize) -> Result<AssociationScheme, SchemeError> {
    if x >= s.points() {
        return Err(SchemeError::PointOutOfRange { point: x, points: s.points() });
    }
    let h = check_closed(s, h)?;
    let points = coset(s, &h, x);
    let pos = |g: usize| h.binary_search(&g).expect("relation of H");
    let rel = points
        .iter()
        .map(|&a| points.iter().map(|&b| pos(s.rel[a][b])).collect())
        .collect();
    let labels = h.iter().map(|&g| s.labels[g].clone()).collect();
    AssociationScheme::with_labels(rel, labels)
}

/// A map of points that induces a well-defined map of relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeMorphism {
    pub point_map: Vec<usize>,
    pub relation_map: Vec<usize>,
}

impl SchemeMorphism {
    /// Relations sent to the diagonal.
    pub fn kernel(&self) -> Vec<usize> {
        (0..self.relation_map.len()).filter(|&g| self.relation_map[g] == 0).collect()
    }

    pub fn image_points(&self) -> Vec<usize> {
        let mut v = self.point_map.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn image_relations(&self) -> Vec<usize> {
        let mut v = self.relation_map.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Onto every point and every relation of `target`.
    pub fn is_surjective(&self, target: &AssociationScheme) -> bool {
        self.image_points().len() == target.points() && self.image_relations().len() == target.rank()
    }
}

/// Derives the relation map of `point_map`, failing with a witness pair
/// when the relation of `(x, y)` does not determine that of the images.
pub fn scheme_morphism(
    source: &AssociationScheme,
    target: &AssociationScheme,
    point_map: Vec<usize>,
) -> Result<SchemeMorphism, SchemeError> {
    if point_map.len() != source.points() {
        return Err(SchemeError::Morphism(format!(
            "point map has {} entries for {} points",
            point_map.len(),
            source.points()
        )));
    }
    if let Some(&p) = point_map.iter().find(|&&p| p >= target.points()) {
        return Err(SchemeError::PointOutOfRange { point: p, points: target.points() });
    }
    let mut relation_map = vec![usize::MAX; source.rank()];
    for x in 0..source.points() {
        for y in 0..source.points() {
            let g = source.rel[x][y];
            let image = target.rel[point_map[x]][point_map[y]];
            if relation_map[g] == usize::MAX {
                relation_map[g] = image;
            } else if relation_map[g] != image {
                return Err(SchemeError::Morphism(format!(
                    "relation {} is sent to both {} and {} (pair ({x}, {y}))",
                    source.labels[g], target.labels[relation_map[g]], target.labels[image]
                )));
            }
        }
    }
    Ok(SchemeMorphism { point_map, relation_map })
}

/// `X/H` on cosets ordered by least point; relations are the double
/// cosets `HgH`. Returns the scheme and the projection, whose kernel is H.
pub fn quotient_scheme(
    s: &AssociationScheme,
    h: &[usize],
) -> Result<(AssociationScheme, SchemeMorphism), SchemeError> {
    let h = check_closed(s, h)?;
    let alg = adjacency_algebra(s);
    let n = closed_subset(&alg, &h).expect("checked closed");
    let cells = double_cosets(&alg, &n).map_err(|e| SchemeError::NotClosed(e.to_string()))?;
    let mut coset_of = vec![usize::MAX; s.points()];
    let mut reps = Vec::new();
    for x in 0..s.points() {
        if coset_of[x] == usize::MAX {
            for y in coset(s, &h, x) {
                coset_of[y] = reps.len();
            }
            reps.push(x);
        }
    }
    let rel: Vec<Vec<usize>> = reps
        .iter()
        .map(|&a| reps.iter().map(|&b| cells.cell_of(s.rel[a][b])).collect())
        .collect();
    let labels = cells.representatives().iter().map(|&g| s.labels[g].clone()).collect();
    let q = AssociationScheme::with_labels(rel, labels)?;
    let pi = scheme_morphism(s, &q, coset_of)?;
    debug_assert_eq!(pi.kernel(), h);
    Ok((q, pi))
}

/// Backtracking over point assignments `from[i] ↦ to[j]` such that relation
/// `g` of `s` always goes to `relation_map[g]` of `t`, extending the partial
/// `relation_map` injectively.
fn match_points(
    s: &AssociationScheme,
    t: &AssociationScheme,
    from: &[usize],
    to: &[usize],
    relation_map: &mut [Option<usize>],
) -> Option<Vec<usize>> {
    fn go(
        s: &AssociationScheme,
        t: &AssociationScheme,
        from: &[usize],
        to: &[usize],
        rmap: &mut [Option<usize>],
        used: &mut [bool],
        out: &mut Vec<usize>,
    ) -> bool {
        let i = out.len();
        if i == from.len() {
            return true;
        }
        let x = from[i];
        for j in 0..to.len() {
            if used[j] {
                continue;
            }
            let y = to[j];
            let snapshot: Vec<Option<usize>> = rmap.to_vec();
            let mut ok = true;
            for (k, &yk) in out.iter().enumerate() {
                let xk = from[k];
                for (g, h) in [(s.rel[xk][x], t.rel[yk][y]), (s.rel[x][xk], t.rel[y][yk])] {
                    match rmap[g] {
                        Some(v) if v != h => ok = false,
                        Some(_) => {}
                        None => {
                            if rmap.contains(&Some(h)) || s.valency(g) != t.valency(h) {
                                ok = false;
                            } else {
                                rmap[g] = Some(h);
                            }
                        }
                    }
                    if !ok {
                        break;
                    }
                }
                if !ok {
                    break;
                }
            }
            if ok {
                used[j] = true;
                out.push(y);
                if go(s, t, from, to, rmap, used, out) {
                    return true;
                }
                out.pop();
                used[j] = false;
            }
            rmap.copy_from_slice(&snapshot);
        }
        false
    }
    if from.len() != to.len() {
        return None;
    }
    let mut used = vec![false; to.len()];
    let mut out = Vec::with_capacity(from.len());
    go(s, t, from, to, relation_map, &mut used, &mut out).then_some(out)
}

/// A bijection of points carrying each relation of `s` onto one of `t`.
pub fn find_scheme_isomorphism(s: &AssociationScheme, t: &AssociationScheme) -> Option<SchemeMorphism> {
    if s.points() != t.points() || s.rank() != t.rank() {
        return None;
    }
    let mut rmap = vec![None; s.rank()];
    rmap[0] = Some(0);
    let pts: Vec<usize> = (0..s.points()).collect();
    let point_map = match_points(s, t, &pts, &pts, &mut rmap)?;
    let relation_map = rmap.into_iter().map(|g| g.expect("every relation occurs")).collect();
    Some(SchemeMorphism { point_map, relation_map })
}

/// Bijection `from → to` between two point sets of `s` that fixes every
/// relation in `fixed`, sending `from[0]` first.
pub(crate) fn relation_preserving_bijection(
    s: &AssociationScheme,
    from: &[usize],
    to: &[usize],
    fixed: &[usize],
) -> Option<Vec<usize>> {
    let mut rmap = vec![None; s.rank()];
    for &g in fixed {
        rmap[g] = Some(g);
    }
    match_points(s, s, from, to, &mut rmap)
}

/// Relations as basis, intersection numbers as structure constants.
pub fn adjacency_algebra(s: &AssociationScheme) -> TableAlgebra {
    let r = s.rank();
    let mut entries = Vec::new();
    for g in 0..r {
        for h in 0..r {
            for k in 0..r {
                let v = s.intersection_number(g, h, k);
                if v != 0 {
                    entries.push((g, h, k, int(v as i64)));
                }
            }
        }
    }
    let raw = RawAlgebra {
        labels: s.labels.clone(),
        star: s.star.clone(),
        entries,
        degrees: None,
    };
    TableAlgebra::new(raw, Mode::TableAlgebra).expect("adjacency algebra of a scheme is a table algebra")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{cayley_scheme, cyclic, group_algebra, schur_ring, z8_partition};
    use crate::report::Status;

    fn k3() -> Vec<Vec<usize>> {
        vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]
    }

    fn thin(n: usize) -> AssociationScheme {
        let part: Vec<Vec<usize>> = (0..n).map(|x| vec![x]).collect();
        cayley_scheme(&cyclic(n), &part).unwrap()
    }

    #[test]
    fn complete_graph() {
        let s = AssociationScheme::new(k3()).unwrap();
        assert_eq!(s.rank(), 2);
        assert_eq!(s.valency(1), 2);
        let a = adjacency_algebra(&s);
        assert_eq!(a.product_row(1, 1), &[(0, int(2)), (1, int(1))]);
        assert_eq!(a.order(), int(3));
    }

    #[test]
    fn thin_z4_has_unit_valencies() {
        assert_eq!(thin(4).valencies(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn flipped_entry_is_caught() {
        let mut rel = thin(4).matrix().to_vec();
        rel[0][1] = 2;
        let report = validate_scheme(&rel, Some(4)).unwrap();
        assert!(!report.passed());
        assert!(report.failures().any(|c| c.witness.is_some()));
        assert!(AssociationScheme::new(rel).is_err());
    }

    #[test]
    fn regularity_witness_has_four_points() {
        // Path 0-1-2 with "adjacent" as one relation is not a scheme.
        let rel = vec![vec![0, 1, 2], vec![1, 0, 1], vec![2, 1, 0]];
        let report = validate_scheme(&rel, None).unwrap();
        assert_eq!(report.status_of("intersection-numbers"), Some(Status::Fail));
        let w = report.check("intersection-numbers").unwrap().witness.clone().unwrap();
        assert_eq!(w.matches(',').count(), 3);
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(validate_scheme(&[vec![0, 1], vec![1]], None), Err(SchemeError::NotSquare(_))));
        assert!(matches!(
            validate_scheme(&[vec![0, 2], vec![2, 0]], Some(2)),
            Err(SchemeError::EntryOutOfRange { .. })
        ));
    }

    #[test]
    fn adjacency_algebras() {
        let z8 = adjacency_algebra(&thin(8));
        assert!(z8.same_structure(&group_algebra(&cyclic(8))));
        let one = AssociationScheme::new(vec![vec![0]]).unwrap();
        assert_eq!(adjacency_algebra(&one).dim(), 1);
        let c = cayley_scheme(&cyclic(8), &z8_partition()).unwrap();
        assert!(adjacency_algebra(&c).same_structure(&schur_ring(&cyclic(8), &z8_partition()).unwrap()));
    }

    #[test]
    fn subschemes() {
        let z8 = thin(8);
        let sub = subscheme(&z8, &[0, 2, 4, 6], 0).unwrap();
        assert_eq!(sub.points(), 4);
        assert!(find_scheme_isomorphism(&sub, &thin(4)).is_some());
        let a = adjacency_algebra(&z8);
        let h = crate::closed::closed_subset(&a, &[0, 2, 4, 6]).unwrap();
        let sub_alg = crate::closed::subalgebra(&a, &h).unwrap();
        let iso = crate::iso::find_isomorphism(&adjacency_algebra(&sub), &sub_alg, &Default::default());
        assert!(iso.unwrap().is_some());
        assert_eq!(subscheme(&z8, &[0], 3).unwrap().points(), 1);
        let c = cayley_scheme(&cyclic(8), &z8_partition()).unwrap();
        let sub = subscheme(&c, &[0, 2], 0).unwrap();
        assert_eq!(sub.matrix(), thin(2).matrix());
        assert!(matches!(subscheme(&z8, &[0, 1], 0), Err(SchemeError::NotClosed(_))));
    }

    #[test]
    fn quotient_schemes() {
        let (q, pi) = quotient_scheme(&thin(8), &[0, 4]).unwrap();
        assert!(find_scheme_isomorphism(&q, &thin(4)).is_some());
        assert_eq!(pi.kernel(), vec![0, 4]);
        assert!(pi.is_surjective(&q));
        let (q, _) = quotient_scheme(&thin(4), &[0, 2]).unwrap();
        assert_eq!(q.matrix(), thin(2).matrix());
        let c = cayley_scheme(&cyclic(8), &z8_partition()).unwrap();
        let (q, _) = quotient_scheme(&c, &[0]).unwrap();
        assert_eq!(q.matrix(), c.matrix());
    }

    #[test]
    fn quotient_scheme_matches_quotient_algebra() {
        let c = cayley_scheme(&cyclic(8), &z8_partition()).unwrap();
        let a = adjacency_algebra(&c);
        for h in crate::closed::enumerate_closed_subsets(&a, 16).unwrap() {
            let (q, _) = quotient_scheme(&c, h.members()).unwrap();
            let qa = crate::closed::quotient(&a, &h).unwrap().algebra;
            assert!(adjacency_algebra(&q).same_structure(&qa));
        }
    }

    #[test]
    fn morphism_inconsistency_is_reported() {
        let z4 = thin(4);
        assert!(matches!(scheme_morphism(&z4, &thin(2), vec![0, 1, 1, 0]), Err(SchemeError::Morphism(_))));
        assert!(scheme_morphism(&z4, &thin(2), vec![0, 1, 0, 1]).is_ok());
        assert!(find_scheme_isomorphism(&z4, &AssociationScheme::new(vec![vec![0, 1, 1, 1], vec![1, 0, 1, 1], vec![1, 1, 0, 1], vec![1, 1, 1, 0]]).unwrap()).is_none());
    }
}
