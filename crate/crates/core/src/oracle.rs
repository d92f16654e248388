//! Finite groups, group-ring expansions and brute-force checks.
//!
//! Nothing here reuses tensor code from the main modules: every structure
//! constant is obtained by expanding products in a group ring, and the
//! associativity oracle works on a dense copy of the tensor.

use crate::algebra::{Mode, RawAlgebra, TableAlgebra};
use crate::report::{Check, ValidationReport};
use crate::scalar::{int, Scalar};
use crate::scheme::AssociationScheme;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("group table is not a group: {0}")]
    NotAGroup(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("class sums are not closed: {0}")]
    NotClosed(String),
    #[error("constructed algebra is invalid: {0}")]
    Algebra(#[from] crate::algebra::AlgebraError),
    #[error("constructed scheme is invalid: {0}")]
    Scheme(#[from] crate::scheme::SchemeError),
}

/// A finite group given by its full multiplication table; element 0 is the
/// identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupTable {
    labels: Vec<String>,
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
}

impl FiniteGroupTable {
    /// Checks closure, identity at 0, inverses and associativity exhaustively.
    pub fn new(labels: Vec<String>, mul: Vec<Vec<usize>>) -> Result<Self, OracleError> {
        let n = labels.len();
        if n == 0 || mul.len() != n || mul.iter().any(|r| r.len() != n) {
            return Err(OracleError::NotAGroup("table is not square".into()));
        }
        if mul.iter().flatten().any(|&x| x >= n) {
            return Err(OracleError::NotAGroup("entry out of range".into()));
        }
        for x in 0..n {
            if mul[0][x] != x || mul[x][0] != x {
                return Err(OracleError::NotAGroup(format!("0 is not an identity at {x}")));
            }
        }
        let mut inv = vec![usize::MAX; n];
        for x in 0..n {
            match (0..n).find(|&y| mul[x][y] == 0 && mul[y][x] == 0) {
                Some(y) => inv[x] = y,
                None => return Err(OracleError::NotAGroup(format!("{} has no inverse", labels[x]))),
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(OracleError::NotAGroup(format!("not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(FiniteGroupTable { labels, mul, inv })
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul[a][b] == self.mul[b][a]))
    }
}

fn power_label(gen: &str, k: usize) -> String {
    match k {
        0 => "1".to_string(),
        1 => gen.to_string(),
        _ => format!("{gen}{k}"),
    }
}

/// Cyclic group Z_n with elements labelled `1, g, g2, ...`.
pub fn cyclic(n: usize) -> FiniteGroupTable {
    cyclic_named(n, "g")
}

/// Cyclic group Z_n with generator label `gen`.
pub fn cyclic_named(n: usize, gen: &str) -> FiniteGroupTable {
    assert!(n > 0, "cyclic group of order 0");
    let labels = (0..n).map(|k| power_label(gen, k)).collect();
    let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    FiniteGroupTable::new(labels, mul).expect("cyclic table is a group")
}

/// Direct product with elements ordered `(a, b)` ↦ `a * |H| + b`.
pub fn direct_product(g: &FiniteGroupTable, h: &FiniteGroupTable) -> FiniteGroupTable {
    let (m, n) = (g.order(), h.order());
    let mut labels = Vec::with_capacity(m * n);
    for a in 0..m {
        for b in 0..n {
            labels.push(if a == 0 && b == 0 {
                "1".to_string()
            } else {
                format!("({},{})", g.labels[a], h.labels[b])
            });
        }
    }
    let mul = (0..m * n)
        .map(|x| (0..m * n).map(|y| g.mul(x / n, y / n) * n + h.mul(x % n, y % n)).collect())
        .collect();
    FiniteGroupTable::new(labels, mul).expect("direct product of groups is a group")
}

/// Symmetric group on three letters, elements as permutations in one-line
/// notation.
pub fn s3() -> FiniteGroupTable {
    let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
    let labels = vec!["1", "(12)", "(23)", "(13)", "(123)", "(132)"]
        .into_iter()
        .map(String::from)
        .collect();
    let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
    let mul = (0..6)
        .map(|a| {
            (0..6)
                .map(|b| {
                    let (p, q) = (perms[a], perms[b]);
                    index([p[q[0]], p[q[1]], p[q[2]]])
                })
                .collect()
        })
        .collect();
    FiniteGroupTable::new(labels, mul).expect("S3 table is a group")
}

/// The thin table algebra of `g`: basis = elements, `λ_{abc} = δ_{ab,c}`.
pub fn group_algebra(g: &FiniteGroupTable) -> TableAlgebra {
    let n = g.order();
    let mut entries = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            entries.push((a, b, g.mul(a, b), int(1)));
        }
    }
    let raw = RawAlgebra {
        labels: g.labels.clone(),
        star: g.inv.clone(),
        entries,
        degrees: None,
    };
    TableAlgebra::new(raw, Mode::TableAlgebra).expect("group algebra is a table algebra")
}

/// Classes `{0}, {2}, {4}, {6}, {1,5}, {3,7}` of Z8.
pub fn z8_partition() -> Vec<Vec<usize>> {
    vec![vec![0], vec![2], vec![4], vec![6], vec![1, 5], vec![3, 7]]
}

/// Labels used for Schur-ring classes: `c<x>` for a singleton `{x}` and
/// `t<min>` otherwise.
pub fn class_label(class: &[usize]) -> String {
    let min = class.iter().min().copied().unwrap_or(0);
    if class.len() == 1 {
        format!("c{min}")
    } else {
        format!("t{min}")
    }
}

fn check_partition(g: &FiniteGroupTable, partition: &[Vec<usize>]) -> Result<Vec<usize>, OracleError> {
    let n = g.order();
    let mut class_of = vec![usize::MAX; n];
    for (i, class) in partition.iter().enumerate() {
        if class.is_empty() {
            return Err(OracleError::InvalidPartition(format!("class {i} is empty")));
        }
        for &x in class {
            if x >= n {
                return Err(OracleError::InvalidPartition(format!("element {x} out of range")));
            }
            if class_of[x] != usize::MAX {
                return Err(OracleError::InvalidPartition(format!("element {x} appears twice")));
            }
            class_of[x] = i;
        }
    }
    if let Some(x) = class_of.iter().position(|&c| c == usize::MAX) {
        return Err(OracleError::InvalidPartition(format!("element {x} not covered")));
    }
    if partition[0] != [0] {
        return Err(OracleError::InvalidPartition("first class must be {identity}".into()));
    }
    for (i, class) in partition.iter().enumerate() {
        let target = class_of[g.inv(class[0])];
        if class.iter().any(|&x| class_of[g.inv(x)] != target) || partition[target].len() != class.len() {
            return Err(OracleError::InvalidPartition(format!(
                "inverses of class {i} do not form a class"
            )));
        }
    }
    Ok(class_of)
}

/// Algebra spanned by the class sums of `partition` in the group ring.
pub fn schur_ring(g: &FiniteGroupTable, partition: &[Vec<usize>]) -> Result<TableAlgebra, OracleError> {
    let class_of = check_partition(g, partition)?;
    let n = g.order();
    let k = partition.len();
    let mut entries = Vec::new();
    for a in 0..k {
        for b in 0..k {
            let mut ring = vec![0i64; n];
            for &x in &partition[a] {
                for &y in &partition[b] {
                    ring[g.mul(x, y)] += 1;
                }
            }
            for (c, class) in partition.iter().enumerate() {
                let coef = ring[class[0]];
                if class.iter().any(|&z| ring[z] != coef) {
                    return Err(OracleError::NotClosed(format!(
                        "{} * {} is not a combination of class sums",
                        class_label(&partition[a]),
                        class_label(&partition[b])
                    )));
                }
                if coef != 0 {
                    entries.push((a, b, c, int(coef)));
                }
            }
        }
    }
    let raw = RawAlgebra {
        labels: partition.iter().map(|c| class_label(c)).collect(),
        star: (0..k).map(|a| class_of[g.inv(partition[a][0])]).collect(),
        entries,
        degrees: None,
    };
    Ok(TableAlgebra::new(raw, Mode::TableAlgebra)?)
}

/// Points = group elements; `(x, y)` lies in the relation of the class of
/// `x⁻¹y`.
pub fn cayley_scheme(g: &FiniteGroupTable, partition: &[Vec<usize>]) -> Result<AssociationScheme, OracleError> {
    let class_of = check_partition(g, partition)?;
    let n = g.order();
    let rel = (0..n)
        .map(|x| (0..n).map(|y| class_of[g.mul(g.inv(x), y)]).collect())
        .collect();
    Ok(AssociationScheme::new(rel)?)
}

/// Quadruple check `Σ_t λ_{abt}λ_{tcd} = Σ_t λ_{bct}λ_{atd}` on a dense
/// copy of the tensor.
pub fn brute_force_associativity(raw: &RawAlgebra) -> ValidationReport {
    let dim = raw.labels.len();
    let mut dense = vec![vec![vec![Scalar::zero(); dim]; dim]; dim];
    let mut report = ValidationReport::new("brute-force associativity");
    for (a, b, c, v) in &raw.entries {
        if *a >= dim || *b >= dim || *c >= dim {
            report.push(Check::fail("entries-in-range", format!("({a}, {b}, {c})")));
            return report;
        }
        dense[*a][*b][*c] += v;
    }
    let mut witness = None;
    'search: for a in 0..dim {
        for b in 0..dim {
            for c in 0..dim {
                for d in 0..dim {
                    let mut lhs = Scalar::zero();
                    let mut rhs = Scalar::zero();
                    for t in 0..dim {
                        lhs += &dense[a][b][t] * &dense[t][c][d];
                        rhs += &dense[b][c][t] * &dense[a][t][d];
                    }
                    if lhs != rhs {
                        witness = Some(format!(
                            "({}, {}, {}, {})",
                            raw.labels[a], raw.labels[b], raw.labels[c], raw.labels[d]
                        ));
                        break 'search;
                    }
                }
            }
        }
    }
    report.push(Check::from_witness("associativity", witness));
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z2_group_algebra() {
        let a = group_algebra(&cyclic(2));
        assert_eq!(a.dim(), 2);
        assert_eq!(a.lambda(1, 1, 0), &int(1));
    }

    #[test]
    fn s3_is_noncommutative() {
        let a = group_algebra(&s3());
        assert_eq!(a.dim(), 6);
        assert!(!a.is_commutative());
    }

    #[test]
    fn z8_schur_ring_labels() {
        let a = schur_ring(&cyclic(8), &z8_partition()).unwrap();
        let labels: Vec<&str> = a.labels().iter().map(String::as_str).collect();
        assert_eq!(labels, ["c0", "c2", "c4", "c6", "t1", "t3"]);
        assert_eq!(a.degree(4), &int(2));
        assert_eq!(a.star(4), 5);
    }

    #[test]
    fn singleton_partition_gives_group_algebra() {
        let g = cyclic(5);
        let part: Vec<Vec<usize>> = (0..5).map(|x| vec![x]).collect();
        let s = schur_ring(&g, &part).unwrap();
        let ga = group_algebra(&g);
        assert!(s.equal_under(&ga, &[0, 1, 2, 3, 4]));
    }

    #[test]
    fn invalid_partition_is_rejected() {
        let g = cyclic(8);
        let bad = vec![vec![0], vec![1, 2], vec![3], vec![4], vec![5], vec![6], vec![7]];
        assert!(schur_ring(&g, &bad).is_err());
        let not_closed = vec![vec![0], vec![1, 7], vec![2, 6], vec![3, 5, 4]];
        assert!(matches!(schur_ring(&g, &not_closed), Err(OracleError::NotClosed(_))));
    }

    #[test]
    fn brute_force_finds_perturbation() {
        let raw = group_algebra(&cyclic(4)).to_raw();
        assert!(brute_force_associativity(&raw).passed());
        let mut bad = raw.clone();
        let pos = bad.entries.iter().position(|(a, b, _, _)| *a == 1 && *b == 1).unwrap();
        bad.entries[pos].3 = int(2);
        let report = brute_force_associativity(&bad);
        assert!(!report.passed());
        assert!(report.check("associativity").unwrap().witness.is_some());
    }
}
