//! Exact C-algebras and table algebras with a distinguished basis.
//!
//! A [`TableAlgebra`] is stored as a sparse structure tensor: for every
//! ordered pair of basis elements `(a, b)` the nonzero coefficients of
//! `a * b`. Index 0 is always the identity. Values are immutable once
//! validated and cheap to clone.

use crate::report::{Check, ValidationReport};
use crate::scalar::{format_rational, int, one, zero, Scalar};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use thiserror::Error;

/// Which axiom set a candidate is validated against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Real structure constants of any sign.
    CAlgebra,
    /// Additionally requires every structure constant to be nonnegative.
    TableAlgebra,
}

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("star is not a permutation of 0..{dim}")]
    StarNotPermutation { dim: usize },
    #[error("basis element 0 is not the identity ({0})")]
    NotIdentity(String),
    #[error("duplicate structure constant for ({0}, {1}, {2})")]
    DuplicateEntry(usize, usize, usize),
    #[error("basis labels must be distinct, {0:?} repeats")]
    DuplicateLabel(String),
    #[error("algebra failed validation: {}", .0.failure_summary())]
    Invalid(Box<ValidationReport>),
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("invalid rescaling: {0}")]
    InvalidRescale(String),
    #[error("empty basis subset")]
    EmptySubset,
}

/// Candidate algebra data prior to validation.
#[derive(Debug, Clone, PartialEq)]
pub struct RawAlgebra {
    pub labels: Vec<String>,
    pub star: Vec<usize>,
    /// Sparse `(a, b, c, λ_abc)` entries; omitted triples are zero.
    pub entries: Vec<(usize, usize, usize, Scalar)>,
    /// Optional degree vector; derived as `λ_{a a* 0}` when absent.
    pub degrees: Option<Vec<Scalar>>,
}

impl RawAlgebra {
    /// Builds entries from dense product vectors indexed `[a * dim + b][c]`.
    pub fn from_products(
        labels: Vec<String>,
        star: Vec<usize>,
        products: &[Vec<Scalar>],
        degrees: Option<Vec<Scalar>>,
    ) -> Self {
        let dim = labels.len();
        let mut entries = Vec::new();
        for (ab, row) in products.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    entries.push((ab / dim, ab % dim, c, v.clone()));
                }
            }
        }
        RawAlgebra {
            labels,
            star,
            entries,
            degrees,
        }
    }
}

type Row = Vec<(usize, Scalar)>;

#[derive(Debug)]
struct Data {
    id: u64,
    labels: Vec<String>,
    star: Vec<usize>,
    degrees: Vec<Scalar>,
    rows: Vec<Row>,
    commutative: bool,
    nonnegative: bool,
    standard: bool,
}

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// A validated C-algebra (or table algebra) with distinguished basis.
#[derive(Debug, Clone)]
pub struct TableAlgebra(Arc<Data>);

static ZERO: std::sync::OnceLock<Scalar> = std::sync::OnceLock::new();

fn zero_ref() -> &'static Scalar {
    ZERO.get_or_init(Scalar::zero)
}

/// Structure tensor assembled from raw entries, before the axioms are checked.
struct Tensor {
    dim: usize,
    rows: Vec<Row>,
}

impl Tensor {
    fn get(&self, a: usize, b: usize, c: usize) -> &Scalar {
        lookup(&self.rows[a * self.dim + b], c)
    }
    fn row(&self, a: usize, b: usize) -> &[(usize, Scalar)] {
        &self.rows[a * self.dim + b]
    }
}

fn lookup(row: &[(usize, Scalar)], c: usize) -> &Scalar {
    match row.binary_search_by_key(&c, |(i, _)| *i) {
        Ok(pos) => &row[pos].1,
        Err(_) => zero_ref(),
    }
}

fn check_structure(raw: &RawAlgebra) -> Result<Tensor, AlgebraError> {
    let dim = raw.labels.len();
    if dim == 0 {
        return Err(AlgebraError::DimensionMismatch("empty basis".into()));
    }
    if raw.star.len() != dim {
        return Err(AlgebraError::DimensionMismatch(format!(
            "star has {} entries for {} basis elements",
            raw.star.len(),
            dim
        )));
    }
    if let Some(d) = &raw.degrees {
        if d.len() != dim {
            return Err(AlgebraError::DimensionMismatch(format!(
                "degree vector has {} entries for {} basis elements",
                d.len(),
                dim
            )));
        }
    }
    let mut seen_labels = std::collections::HashSet::new();
    for l in &raw.labels {
        if !seen_labels.insert(l.as_str()) {
            return Err(AlgebraError::DuplicateLabel(l.clone()));
        }
    }
    let mut hit = vec![false; dim];
    for &s in &raw.star {
        if s >= dim || hit[s] {
            return Err(AlgebraError::StarNotPermutation { dim });
        }
        hit[s] = true;
    }
    let mut maps: Vec<BTreeMap<usize, Scalar>> = vec![BTreeMap::new(); dim * dim];
    for (a, b, c, v) in &raw.entries {
        for &i in [a, b, c] {
            if i >= dim {
                return Err(AlgebraError::IndexOutOfRange { index: i, dim });
            }
        }
        if maps[a * dim + b].insert(*c, v.clone()).is_some() {
            return Err(AlgebraError::DuplicateEntry(*a, *b, *c));
        }
    }
    let rows: Vec<Row> = maps
        .into_iter()
        .map(|m| m.into_iter().filter(|(_, v)| !v.is_zero()).collect())
        .collect();
    let tensor = Tensor { dim, rows };
    for b in 0..dim {
        for (left, right) in [(0, b), (b, 0)] {
            let row = tensor.row(left, right);
            let ok = row.len() == 1 && row[0].0 == b && row[0].1.is_one();
            if !ok {
                return Err(AlgebraError::NotIdentity(format!(
                    "{} * {} is not {}",
                    raw.labels[left], raw.labels[right], raw.labels[b]
                )));
            }
        }
    }
    Ok(tensor)
}

fn accumulate(into: &mut BTreeMap<usize, Scalar>, coef: &Scalar, row: &[(usize, Scalar)]) {
    for (i, v) in row {
        let e = into.entry(*i).or_insert_with(Scalar::zero);
        *e += coef * v;
    }
}

fn nonzero(map: BTreeMap<usize, Scalar>) -> Vec<(usize, Scalar)> {
    map.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// Checks every axiom and lists all failures, not just the first.
///
/// Structural problems (sizes, a star that is not a permutation, index 0
/// not acting as the identity) are returned as errors instead.
pub fn validate(raw: &RawAlgebra, mode: Mode) -> Result<ValidationReport, AlgebraError> {
    let tensor = check_structure(raw)?;
    Ok(run_checks(raw, &tensor, mode).0)
}

fn run_checks(raw: &RawAlgebra, t: &Tensor, mode: Mode) -> (ValidationReport, Vec<Scalar>, bool) {
    let dim = t.dim;
    let star = &raw.star;
    let lab = |i: usize| raw.labels[i].as_str();
    let mut report = ValidationReport::new("algebra axioms");

    let involution = (0..dim)
        .find(|&b| star[star[b]] != b)
        .map(|b| format!("({})** != {}", lab(b), lab(b)))
        .or_else(|| (star[0] != 0).then(|| format!("1* = {}", lab(star[0]))));
    report.push(Check::from_witness("involution", involution));

    // Arad–Blau form of axiom III: λ_{ab0} vanishes unless b = a*, and
    // λ_{aa*0} = λ_{a*a0} > 0.
    let mut axiom3 = None;
    'outer: for a in 0..dim {
        for b in 0..dim {
            let v = t.get(a, b, 0);
            if b == star[a] {
                if !v.is_positive() || v != t.get(b, a, 0) {
                    axiom3 = Some(format!("({}, {}, {})", lab(a), lab(b), lab(0)));
                    break 'outer;
                }
            } else if !v.is_zero() {
                axiom3 = Some(format!("({}, {}, {})", lab(a), lab(b), lab(0)));
                break 'outer;
            }
        }
    }
    report.push(Check::from_witness("axiom-III", axiom3));

    let derived: Vec<Scalar> = (0..dim).map(|a| t.get(a, star[a], 0).clone()).collect();
    let degrees = raw.degrees.clone().unwrap_or_else(|| derived.clone());
    let standard = degrees == derived;

    let bad_degree = (0..dim)
        .find(|&a| !degrees[a].is_positive() || degrees[a] != degrees[star[a]])
        .map(|a| format!("|{}| = {}", lab(a), format_rational(&degrees[a])))
        .or_else(|| (!degrees[0].is_one()).then(|| format!("|{}| != 1", lab(0))));
    let mut degree_map = bad_degree;
    if degree_map.is_none() {
        'deg: for a in 0..dim {
            for b in 0..dim {
                let s: Scalar = t.row(a, b).iter().map(|(c, v)| v * &degrees[*c]).sum();
                if s != &degrees[a] * &degrees[b] {
                    degree_map = Some(format!("({}, {})", lab(a), lab(b)));
                    break 'deg;
                }
            }
        }
    }
    report.push(Check::from_witness("axiom-IV-degree-map", degree_map));

    let mut anti = None;
    'anti: for a in 0..dim {
        for b in 0..dim {
            for (c, v) in t.row(a, b) {
                if v != t.get(star[b], star[a], star[*c]) {
                    anti = Some(format!("({}, {}, {})", lab(a), lab(b), lab(*c)));
                    break 'anti;
                }
            }
            for (c, v) in t.row(star[b], star[a]) {
                if v != t.get(a, b, star[*c]) {
                    anti = Some(format!("({}, {}, {})", lab(a), lab(b), lab(star[*c])));
                    break 'anti;
                }
            }
        }
    }
    report.push(Check::from_witness("anti-automorphism", anti));

    let mut assoc = None;
    let mut assoc_failures = 0usize;
    for a in 0..dim {
        for b in 0..dim {
            let ab = t.row(a, b);
            for c in 0..dim {
                let mut lhs = BTreeMap::new();
                for (s, x) in ab {
                    accumulate(&mut lhs, x, t.row(*s, c));
                }
                let mut rhs = BTreeMap::new();
                for (s, y) in t.row(b, c) {
                    accumulate(&mut rhs, y, t.row(a, *s));
                }
                if nonzero(lhs) != nonzero(rhs) {
                    assoc_failures += 1;
                    if assoc.is_none() {
                        assoc = Some(format!("({}, {}, {})", lab(a), lab(b), lab(c)));
                    }
                }
            }
        }
    }
    let mut check = Check::from_witness("associativity", assoc);
    if assoc_failures > 0 {
        check = check.with_detail(format!("{assoc_failures} failing triples"));
    }
    report.push(check);

    if mode == Mode::TableAlgebra {
        let neg = (0..dim * dim).find_map(|ab| {
            t.rows[ab]
                .iter()
                .find(|(_, v)| v.is_negative())
                .map(|(c, _)| format!("({}, {}, {})", lab(ab / dim), lab(ab % dim), lab(*c)))
        });
        report.push(Check::from_witness("nonnegativity", neg));
    }

    let mut cross = Check::pass("degree-cross-check");
    if !standard {
        let factors: Vec<String> = (0..dim)
            .map(|a| {
                if degrees[a].is_zero() {
                    "undefined".to_string()
                } else {
                    format_rational(&(&derived[a] / &degrees[a]))
                }
            })
            .collect();
        cross = cross.with_detail(format!(
            "rescaled normalization, lambda(a,a*,1)/|a| = [{}]",
            factors.join(", ")
        ));
    }
    report.push(cross);
    (report, degrees, standard)
}

impl TableAlgebra {
    /// Validates `raw` in the given mode and wraps it.
    pub fn new(raw: RawAlgebra, mode: Mode) -> Result<Self, AlgebraError> {
        let tensor = check_structure(&raw)?;
        let (report, degrees, standard) = run_checks(&raw, &tensor, mode);
        if !report.passed() {
            return Err(AlgebraError::Invalid(Box::new(report)));
        }
        let dim = tensor.dim;
        let rows = tensor.rows;
        let commutative = (0..dim).all(|a| (a..dim).all(|b| rows[a * dim + b] == rows[b * dim + a]));
        let nonnegative = rows.iter().all(|r| r.iter().all(|(_, v)| !v.is_negative()));
        Ok(TableAlgebra(Arc::new(Data {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            labels: raw.labels,
            star: raw.star,
            degrees,
            rows,
            commutative,
            nonnegative,
            standard,
        })))
    }

    /// Identity of this algebra value; clones share it.
    pub fn id(&self) -> u64 {
        self.0.id
    }

    pub fn dim(&self) -> usize {
        self.0.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.0.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.0.labels.iter().position(|l| l == label)
    }

    pub fn star(&self, i: usize) -> usize {
        self.0.star[i]
    }

    pub fn star_map(&self) -> &[usize] {
        &self.0.star
    }

    pub fn degree(&self, i: usize) -> &Scalar {
        &self.0.degrees[i]
    }

    pub fn degrees(&self) -> &[Scalar] {
        &self.0.degrees
    }

    /// o(B), the sum of all degrees.
    pub fn order(&self) -> Scalar {
        self.0.degrees.iter().sum()
    }

    pub fn is_commutative(&self) -> bool {
        self.0.commutative
    }

    /// True when every structure constant is nonnegative.
    pub fn is_table_algebra(&self) -> bool {
        self.0.nonnegative
    }

    /// True when `λ_{a a* 0} = |a|` for every basis element.
    pub fn is_standard(&self) -> bool {
        self.0.standard
    }

    pub fn lambda(&self, a: usize, b: usize, c: usize) -> &Scalar {
        lookup(self.product_row(a, b), c)
    }

    /// Nonzero coefficients of `a * b`, sorted by basis index.
    pub fn product_row(&self, a: usize, b: usize) -> &[(usize, Scalar)] {
        &self.0.rows[a * self.dim() + b]
    }

    pub fn basis_product(&self, a: usize, b: usize) -> ElementVector {
        let mut v = ElementVector::zero(self);
        for (c, x) in self.product_row(a, b) {
            v.coeffs[*c] = x.clone();
        }
        v
    }

    /// Support of `a * b`.
    pub fn support_of_product(&self, a: usize, b: usize) -> impl Iterator<Item = usize> + '_ {
        self.product_row(a, b).iter().map(|(c, _)| *c)
    }

    pub fn multiply(&self, x: &ElementVector, y: &ElementVector) -> Result<ElementVector, AlgebraError> {
        if x.algebra != self.id() || y.algebra != self.id() {
            return Err(AlgebraError::AlgebraMismatch);
        }
        let mut out = ElementVector::zero(self);
        for (a, xa) in x.coeffs.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (b, yb) in y.coeffs.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let s = xa * yb;
                for (c, v) in self.product_row(a, b) {
                    out.coeffs[*c] += &s * v;
                }
            }
        }
        Ok(out)
    }

    /// Left multiplication by basis element `b` in coordinates:
    /// `M[c][a] = λ_{b a c}`.
    pub fn regular_representation(&self, b: usize) -> Result<Vec<Vec<Scalar>>, AlgebraError> {
        let dim = self.dim();
        if b >= dim {
            return Err(AlgebraError::IndexOutOfRange { index: b, dim });
        }
        let mut m = vec![vec![zero(); dim]; dim];
        for a in 0..dim {
            for (c, v) in self.product_row(b, a) {
                m[*c][a] = v.clone();
            }
        }
        Ok(m)
    }

    /// `(o(S), S⁺)` for a nonempty set of basis indices.
    pub fn order_and_sum(&self, subset: &[usize]) -> Result<(Scalar, ElementVector), AlgebraError> {
        if subset.is_empty() {
            return Err(AlgebraError::EmptySubset);
        }
        let mut sum = ElementVector::zero(self);
        let mut order = zero();
        for &i in subset {
            if i >= self.dim() {
                return Err(AlgebraError::IndexOutOfRange { index: i, dim: self.dim() });
            }
            if sum.coeffs[i].is_zero() {
                sum.coeffs[i] = one();
                order += self.degree(i);
            }
        }
        Ok((order, sum))
    }

    /// Basis change `b ↦ f_b · b`. Requires `f_1 = 1`, `f_b = f_{b*}` and
    /// positive factors.
    pub fn rescale(&self, factors: &[Scalar]) -> Result<TableAlgebra, AlgebraError> {
        let dim = self.dim();
        if factors.len() != dim {
            return Err(AlgebraError::DimensionMismatch(format!(
                "{} rescaling factors for {} basis elements",
                factors.len(),
                dim
            )));
        }
        if !factors[0].is_one() {
            return Err(AlgebraError::InvalidRescale("factor of the identity must be 1".into()));
        }
        if let Some(b) = (0..dim).find(|&b| !factors[b].is_positive()) {
            return Err(AlgebraError::InvalidRescale(format!(
                "factor of {} is not positive",
                self.label(b)
            )));
        }
        if let Some(b) = (0..dim).find(|&b| factors[b] != factors[self.star(b)]) {
            return Err(AlgebraError::InvalidRescale(format!(
                "factor of {} differs from that of its adjoint",
                self.label(b)
            )));
        }
        let mut entries = Vec::new();
        for a in 0..dim {
            for b in 0..dim {
                for (c, v) in self.product_row(a, b) {
                    entries.push((a, b, *c, v * &factors[a] * &factors[b] / &factors[*c]));
                }
            }
        }
        let degrees = (0..dim).map(|b| self.degree(b) * &factors[b]).collect();
        let raw = RawAlgebra {
            labels: self.0.labels.clone(),
            star: self.0.star.clone(),
            entries,
            degrees: Some(degrees),
        };
        TableAlgebra::new(raw, self.mode())
    }

    /// Mode the algebra satisfies most strictly.
    pub fn mode(&self) -> Mode {
        if self.is_table_algebra() {
            Mode::TableAlgebra
        } else {
            Mode::CAlgebra
        }
    }

    /// Back to raw form, e.g. for serialization or perturbation.
    pub fn to_raw(&self) -> RawAlgebra {
        let dim = self.dim();
        let mut entries = Vec::new();
        for a in 0..dim {
            for b in 0..dim {
                for (c, v) in self.product_row(a, b) {
                    entries.push((a, b, *c, v.clone()));
                }
            }
        }
        RawAlgebra {
            labels: self.0.labels.clone(),
            star: self.0.star.clone(),
            entries,
            degrees: (!self.is_standard()).then(|| self.0.degrees.clone()),
        }
    }

    /// Full validation report of this (already valid) algebra.
    pub fn report(&self, mode: Mode) -> ValidationReport {
        validate(&self.to_raw(), mode).expect("stored algebra is structurally sound")
    }

    /// Same tensor, star and degrees index by index (labels ignored).
    pub fn same_structure(&self, other: &TableAlgebra) -> bool {
        self.dim() == other.dim()
            && self.0.star == other.0.star
            && self.0.degrees == other.0.degrees
            && self.0.rows == other.0.rows
    }

    /// Structure equality under `map` (self index → other index).
    pub fn equal_under(&self, other: &TableAlgebra, map: &[usize]) -> bool {
        let dim = self.dim();
        if dim != other.dim() || map.len() != dim {
            return false;
        }
        (0..dim).all(|a| other.star(map[a]) == map[self.star(a)] && self.degree(a) == other.degree(map[a]))
            && (0..dim).all(|a| {
                (0..dim).all(|b| {
                    let mut mine: Vec<(usize, &Scalar)> =
                        self.product_row(a, b).iter().map(|(c, v)| (map[*c], v)).collect();
                    mine.sort_by_key(|(c, _)| *c);
                    let theirs: Vec<(usize, &Scalar)> =
                        other.product_row(map[a], map[b]).iter().map(|(c, v)| (*c, v)).collect();
                    mine == theirs
                })
            })
    }

    /// Subalgebra spanned by `indices` (which must contain 0 and be closed
    /// under products and the involution). Indices keep their relative order.
    pub(crate) fn restrict(&self, indices: &[usize]) -> TableAlgebra {
        let pos: BTreeMap<usize, usize> = indices.iter().enumerate().map(|(i, &b)| (b, i)).collect();
        let mut entries = Vec::new();
        for (i, &a) in indices.iter().enumerate() {
            for (j, &b) in indices.iter().enumerate() {
                for (c, v) in self.product_row(a, b) {
                    entries.push((i, j, pos[c], v.clone()));
                }
            }
        }
        let raw = RawAlgebra {
            labels: indices.iter().map(|&b| self.0.labels[b].clone()).collect(),
            star: indices.iter().map(|&b| pos[&self.star(b)]).collect(),
            entries,
            degrees: Some(indices.iter().map(|&b| self.degree(b).clone()).collect()),
        };
        TableAlgebra::new(raw, self.mode()).expect("closed subset spans a subalgebra")
    }
}

/// Coefficient vector of an element over the basis of a specific algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementVector {
    algebra: u64,
    coeffs: Vec<Scalar>,
}

impl ElementVector {
    pub fn zero(alg: &TableAlgebra) -> Self {
        ElementVector {
            algebra: alg.id(),
            coeffs: vec![zero(); alg.dim()],
        }
    }

    pub fn basis(alg: &TableAlgebra, i: usize) -> Self {
        let mut v = Self::zero(alg);
        v.coeffs[i] = one();
        v
    }

    pub fn from_coeffs(alg: &TableAlgebra, coeffs: Vec<Scalar>) -> Result<Self, AlgebraError> {
        if coeffs.len() != alg.dim() {
            return Err(AlgebraError::DimensionMismatch(format!(
                "{} coefficients for dimension {}",
                coeffs.len(),
                alg.dim()
            )));
        }
        Ok(ElementVector {
            algebra: alg.id(),
            coeffs,
        })
    }

    pub fn algebra_id(&self) -> u64 {
        self.algebra
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Scalar {
        &self.coeffs[i]
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&i| !self.coeffs[i].is_zero()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn degree(&self, alg: &TableAlgebra) -> Scalar {
        self.coeffs.iter().zip(alg.degrees()).map(|(x, d)| x * d).sum()
    }

    pub fn scaled(&self, s: &Scalar) -> Self {
        ElementVector {
            algebra: self.algebra,
            coeffs: self.coeffs.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &ElementVector) -> Result<Self, AlgebraError> {
        if self.algebra != other.algebra {
            return Err(AlgebraError::AlgebraMismatch);
        }
        Ok(ElementVector {
            algebra: self.algebra,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    /// Human-readable form such as `2*1 + 1*g`.
    pub fn display(&self, alg: &TableAlgebra) -> String {
        let terms: Vec<String> = self
            .support()
            .into_iter()
            .map(|i| format!("{}*{}", format_rational(&self.coeffs[i]), alg.label(i)))
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

/// Coefficient of the identity in `b · b*`, which equals `|b|` in a
/// standard algebra.
pub fn identity_coefficient(alg: &TableAlgebra, b: usize) -> Scalar {
    alg.lambda(b, alg.star(b), 0).clone()
}

/// Convenience for building small algebras in code: entries given as
/// integer-or-fraction pairs.
pub fn raw_from_table(
    labels: &[&str],
    star: &[usize],
    entries: &[(usize, usize, usize, Scalar)],
) -> RawAlgebra {
    let dim = labels.len();
    let mut all: Vec<(usize, usize, usize, Scalar)> = Vec::new();
    for b in 0..dim {
        all.push((0, b, b, int(1)));
        if b != 0 {
            all.push((b, 0, b, int(1)));
        }
    }
    all.extend(entries.iter().filter(|(a, b, _, _)| *a != 0 && *b != 0).cloned());
    RawAlgebra {
        labels: labels.iter().map(|s| s.to_string()).collect(),
        star: star.to_vec(),
        entries: all,
        degrees: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{cyclic, group_algebra, schur_ring};
    use crate::scalar::frac;
    use crate::report::Status;

    pub(crate) fn z2() -> TableAlgebra {
        TableAlgebra::new(raw_from_table(&["1", "b"], &[0, 1], &[(1, 1, 0, int(1))]), Mode::TableAlgebra).unwrap()
    }

    pub(crate) fn k3() -> TableAlgebra {
        TableAlgebra::new(
            raw_from_table(&["1", "g"], &[0, 1], &[(1, 1, 0, int(2)), (1, 1, 1, int(1))]),
            Mode::TableAlgebra,
        )
        .unwrap()
    }

    fn z8s() -> TableAlgebra {
        schur_ring(&cyclic(8), &crate::oracle::z8_partition()).unwrap()
    }

    #[test]
    fn z2_passes_with_unit_degrees() {
        let a = z2();
        assert_eq!(a.degrees(), &[int(1), int(1)]);
        assert!(a.report(Mode::TableAlgebra).passed());
    }

    #[test]
    fn k3_has_order_three() {
        let a = k3();
        assert_eq!(a.order(), int(3));
        assert_eq!(a.degree(1), &int(2));
    }

    #[test]
    fn negative_identity_coefficient_is_reported() {
        let raw = raw_from_table(&["1", "b"], &[0, 1], &[(1, 1, 0, int(-1))]);
        let report = validate(&raw, Mode::TableAlgebra).unwrap();
        assert_eq!(report.status_of("axiom-III"), Some(Status::Fail));
        assert_eq!(report.check("axiom-III").unwrap().witness.as_deref(), Some("(b, b, 1)"));
        assert_eq!(report.status_of("nonnegativity"), Some(Status::Fail));
        assert_eq!(report.check("nonnegativity").unwrap().witness.as_deref(), Some("(b, b, 1)"));
        assert!(TableAlgebra::new(raw, Mode::TableAlgebra).is_err());
    }

    #[test]
    fn structural_errors() {
        let mut raw = raw_from_table(&["1", "b"], &[0, 1], &[(1, 1, 0, int(1))]);
        raw.star = vec![1, 1];
        assert!(matches!(validate(&raw, Mode::CAlgebra), Err(AlgebraError::StarNotPermutation { .. })));
        let mut raw = raw_from_table(&["1", "b"], &[0, 1], &[(1, 1, 0, int(1))]);
        raw.star = vec![0];
        assert!(matches!(validate(&raw, Mode::CAlgebra), Err(AlgebraError::DimensionMismatch(_))));
        let raw = RawAlgebra {
            labels: vec!["1".into(), "b".into()],
            star: vec![0, 1],
            entries: vec![(1, 1, 0, int(1))],
            degrees: None,
        };
        assert!(matches!(validate(&raw, Mode::CAlgebra), Err(AlgebraError::NotIdentity(_))));
    }

    #[test]
    fn multiply_examples() {
        let a = z2();
        let b = ElementVector::basis(&a, 1);
        assert_eq!(a.multiply(&b, &b).unwrap(), ElementVector::basis(&a, 0));

        let k = k3();
        let g = ElementVector::basis(&k, 1);
        assert_eq!(k.multiply(&g, &g).unwrap().coeffs(), &[int(2), int(1)]);

        let s = z8s();
        let t1 = ElementVector::basis(&s, 4);
        let sq = s.multiply(&t1, &t1).unwrap();
        assert_eq!(sq.coeffs(), &[int(0), int(2), int(0), int(2), int(0), int(0)]);
    }

    #[test]
    fn multiply_rejects_foreign_elements() {
        let a = z2();
        let b = z2();
        let x = ElementVector::basis(&a, 1);
        let y = ElementVector::basis(&b, 1);
        assert!(matches!(a.multiply(&x, &y), Err(AlgebraError::AlgebraMismatch)));
    }

    #[test]
    fn rescale_examples() {
        let a = z2().rescale(&[int(1), int(3)]).unwrap();
        assert_eq!(a.degree(1), &int(3));
        assert_eq!(a.lambda(1, 1, 0), &int(9));
        assert!(!a.is_standard());

        let k = k3().rescale(&[int(1), frac(1, 2)]).unwrap();
        assert_eq!(k.degrees(), &[int(1), int(1)]);

        let same = k3().rescale(&[int(1), int(1)]).unwrap();
        assert!(same.same_structure(&k3()));
    }

    #[test]
    fn rescale_errors() {
        assert!(matches!(z2().rescale(&[int(2), int(1)]), Err(AlgebraError::InvalidRescale(_))));
        assert!(matches!(z2().rescale(&[int(1), int(0)]), Err(AlgebraError::InvalidRescale(_))));
        let z3 = group_algebra(&cyclic(3));
        assert!(matches!(z3.rescale(&[int(1), int(2), int(3)]), Err(AlgebraError::InvalidRescale(_))));
    }

    #[test]
    fn regular_representation_examples() {
        assert_eq!(z2().regular_representation(1).unwrap(), vec![vec![int(0), int(1)], vec![int(1), int(0)]]);
        assert_eq!(k3().regular_representation(1).unwrap(), vec![vec![int(0), int(2)], vec![int(1), int(1)]]);
        // c4 in the Z8 Schur ring permutes c0<->c4, c2<->c6 and fixes t1, t3.
        let m = z8s().regular_representation(2).unwrap();
        let expected_image = [2, 3, 0, 1, 4, 5];
        for (a, &c) in expected_image.iter().enumerate() {
            for row in 0..6 {
                assert_eq!(m[row][a], if row == c { int(1) } else { int(0) });
            }
        }
        assert!(z2().regular_representation(2).is_err());
    }

    #[test]
    fn order_and_sum_examples() {
        let s = z8s();
        let (o, sum) = s.order_and_sum(&[0, 2]).unwrap();
        assert_eq!(o, int(2));
        assert_eq!(sum.support(), vec![0, 2]);
        assert_eq!(k3().order_and_sum(&[0]).unwrap().0, int(1));
        assert_eq!(k3().order_and_sum(&[0, 1]).unwrap().0, int(3));
        assert!(matches!(k3().order_and_sum(&[]), Err(AlgebraError::EmptySubset)));
    }

    #[test]
    fn identity_coefficient_of_b_bstar_is_degree() {
        let s = z8s();
        for b in 0..s.dim() {
            assert_eq!(identity_coefficient(&s, b), s.degree(b).clone());
        }
    }
}
