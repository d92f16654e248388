//! Characters of commutative table algebras and their dual C-algebras.
//!
//! Characters are the joint eigenvalues of the regular representation.
//! They are computed in floating point, then snapped to Gaussian rationals
//! and re-verified exactly; when every value snaps, the dual algebra is
//! assembled with exact structure constants.

use crate::algebra::{AlgebraError, Mode, RawAlgebra, TableAlgebra};
use crate::closed::{closed_subset, ClosedError, ClosedSubset};
use crate::linalg::{self, C64};
use crate::report::{Check, ValidationReport};
use crate::scalar::{gaussian_to_c64, snap, snap_complex, to_f64, GaussianRational, Scalar, DEFAULT_SNAP_DENOMINATOR};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_MAX_RETRIES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Random combination of the regular representation, falling back to
    /// joint splitting when its eigenvalues never separate.
    RandomCombination,
    /// Split invariant subspaces by one basis operator at a time.
    JointSplitting,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualityOptions {
    pub tolerance: f64,
    pub seed: u64,
    pub max_retries: usize,
    pub max_denominator: u64,
    pub strategy: Strategy,
}

impl Default for DualityOptions {
    fn default() -> Self {
        DualityOptions {
            tolerance: DEFAULT_TOLERANCE,
            seed: 0,
            max_retries: DEFAULT_MAX_RETRIES,
            max_denominator: DEFAULT_SNAP_DENOMINATOR,
            strategy: Strategy::RandomCombination,
        }
    }
}

#[derive(Debug, Error)]
pub enum DualityError {
    #[error("algebra is not commutative: {0}")]
    NonCommutative(String),
    #[error("algebra is not in standard normalization (lambda(b,b*,1) != |b|)")]
    NotStandard,
    #[error("eigenvalues could not be separated after {attempts} attempts")]
    NotSeparated { attempts: usize },
    #[error("numerical breakdown: {0}")]
    Numerical(String),
    #[error("dual is not exact; {0} needs exact structure constants")]
    NotExact(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Closed(#[from] ClosedError),
}

/// Irreducible characters of a commutative table algebra, principal first.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    algebra: TableAlgebra,
    values: Vec<Vec<C64>>,
    exact: Option<Vec<Vec<GaussianRational>>>,
    zeta: Vec<f64>,
    exact_zeta: Option<Vec<Scalar>>,
    conj: Vec<usize>,
    tolerance: f64,
    method: String,
}

fn gz(x: Scalar) -> GaussianRational {
    Complex::new(x, Scalar::zero())
}

fn c(x: &Scalar) -> C64 {
    C64::new(to_f64(x), 0.0)
}

impl CharacterTable {
    pub fn algebra(&self) -> &TableAlgebra {
        &self.algebra
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn label(&self, chi: usize) -> String {
        format!("chi{chi}")
    }

    /// `χ(b)` as computed numerically.
    pub fn value(&self, chi: usize, b: usize) -> C64 {
        self.values[chi][b]
    }

    pub fn values(&self) -> &[Vec<C64>] {
        &self.values
    }

    /// Exact values when every entry snapped and passed exact re-verification.
    pub fn exact_values(&self) -> Option<&[Vec<GaussianRational>]> {
        self.exact.as_deref()
    }

    pub fn zeta(&self) -> &[f64] {
        &self.zeta
    }

    pub fn exact_zeta(&self) -> Option<&[Scalar]> {
        self.exact_zeta.as_deref()
    }

    /// Index of the complex conjugate character.
    pub fn conjugate(&self, chi: usize) -> usize {
        self.conj[chi]
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// How the characters were separated.
    pub fn method(&self) -> &str {
        &self.method
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some() && self.exact_zeta.is_some()
    }

    /// Rows = characters, columns = basis, entry `χ(b)`.
    pub fn p_matrix(&self) -> DMatrix<C64> {
        let n = self.len();
        DMatrix::from_fn(n, n, |chi, b| self.values[chi][b])
    }

    /// Rows = basis, columns = characters, entry `ζ_χ χ(b*)/|b|`.
    pub fn q_matrix(&self) -> DMatrix<C64> {
        let n = self.len();
        let alg = &self.algebra;
        DMatrix::from_fn(n, n, |b, chi| {
            self.values[chi][alg.star(b)] * self.zeta[chi] / to_f64(alg.degree(b))
        })
    }

    /// `{b : χ(b) = |b|}`.
    pub fn kernel_members(&self, chi: usize) -> Vec<usize> {
        let alg = &self.algebra;
        (0..alg.dim())
            .filter(|&b| (self.values[chi][b] - c(alg.degree(b))).norm() <= self.tolerance)
            .collect()
    }

    /// `Irr(B//N) = {χ : N ⊆ ker χ}`.
    pub fn irr_of_quotient(&self, n: &ClosedSubset) -> Vec<usize> {
        (0..self.len())
            .filter(|&chi| {
                let ker = self.kernel_members(chi);
                n.members().iter().all(|b| ker.contains(b))
            })
            .collect()
    }

    /// `χψ(b) = χ(b)ψ(b)/|b|`.
    fn product_function(&self, chi: usize, psi: usize) -> Vec<C64> {
        let alg = &self.algebra;
        (0..alg.dim())
            .map(|b| self.values[chi][b] * self.values[psi][b] / to_f64(alg.degree(b)))
            .collect()
    }

    /// Invariant checks of the table with the largest deviation as margin.
    pub fn check_invariants(&self) -> ValidationReport {
        let alg = &self.algebra;
        let n = self.len();
        let tol = self.tolerance;
        let mut report = ValidationReport::new("character table");
        let bounded = |name: &str, err: f64, witness: String| {
            let check = if err <= tol { Check::pass(name) } else { Check::fail(name, witness) };
            check.with_margin(err)
        };

        let mut worst = (0.0f64, String::new());
        for chi in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let lhs = self.values[chi][a] * self.values[chi][b];
                    let rhs: C64 = alg.product_row(a, b).iter().map(|(t, v)| self.values[chi][*t] * to_f64(v)).sum();
                    let e = (lhs - rhs).norm();
                    if e > worst.0 {
                        worst = (e, format!("({}, {}, {})", self.label(chi), alg.label(a), alg.label(b)));
                    }
                }
            }
        }
        report.push(bounded("multiplicativity", worst.0, worst.1));

        let order = to_f64(&alg.order());
        let p = self.p_matrix();
        let q = self.q_matrix();
        for (name, prod) in [("pq-identity", &p * &q), ("qp-identity", &q * &p)] {
            let mut worst = (0.0f64, String::new());
            for i in 0..n {
                for j in 0..n {
                    let target = if i == j { order } else { 0.0 };
                    let e = (prod[(i, j)] - C64::new(target, 0.0)).norm();
                    if e > worst.0 {
                        worst = (e, format!("({i}, {j})"));
                    }
                }
            }
            report.push(bounded(name, worst.0, worst.1));
        }

        let mut worst = (0.0f64, String::new());
        for chi in 0..n {
            for phi in 0..n {
                let ip = inner_product(alg, &self.values[chi], &self.values[phi]);
                let target = if chi == phi { 1.0 / self.zeta[chi] } else { 0.0 };
                let e = (ip - C64::new(target, 0.0)).norm();
                if e > worst.0 {
                    worst = (e, format!("({}, {})", self.label(chi), self.label(phi)));
                }
            }
        }
        report.push(bounded("orthogonality", worst.0, worst.1));

        let min_zeta = self.zeta.iter().copied().fold(f64::INFINITY, f64::min);
        report.push(
            if min_zeta > tol {
                Check::pass("zeta-positive")
            } else {
                let chi = self.zeta.iter().position(|&z| z == min_zeta).unwrap_or(0);
                Check::fail("zeta-positive", self.label(chi))
            }
            .with_margin(min_zeta),
        );

        let lambdas: Vec<Vec<Vec<C64>>> = (0..n)
            .map(|chi| (0..n).map(|psi| self.numeric_product_coeffs(chi, psi)).collect())
            .collect();
        let mut worst = (0.0f64, String::new());
        for chi in 0..n {
            for psi in 0..n {
                for phi in 0..n {
                    let a = lambdas[chi][psi][phi] / self.zeta[phi];
                    let b = lambdas[self.conj[chi]][phi][psi] / self.zeta[psi];
                    let d = lambdas[self.conj[psi]][phi][chi] / self.zeta[chi];
                    let e = (a - b).norm().max((a - d).norm());
                    if e > worst.0 {
                        worst = (
                            e,
                            format!("({}, {}, {})", self.label(chi), self.label(psi), self.label(phi)),
                        );
                    }
                }
            }
        }
        report.push(bounded("lambda-zeta-symmetry", worst.0, worst.1));
        report
    }

    fn numeric_product_coeffs(&self, chi: usize, psi: usize) -> Vec<C64> {
        let f = self.product_function(chi, psi);
        (0..self.len())
            .map(|phi| inner_product(&self.algebra, &f, &self.values[phi]) * self.zeta[phi])
            .collect()
    }
}

/// `[f, g] = o(B)⁻¹ Σ_b |b|⁻¹ f(b) g(b*)`.
pub fn inner_product(alg: &TableAlgebra, f: &[C64], g: &[C64]) -> C64 {
    let order = to_f64(&alg.order());
    let s: C64 = (0..alg.dim())
        .map(|b| f[b] * g[alg.star(b)] / to_f64(alg.degree(b)))
        .sum();
    s / order
}

/// Exact version of [`inner_product`].
pub fn inner_product_exact(alg: &TableAlgebra, f: &[GaussianRational], g: &[GaussianRational]) -> GaussianRational {
    let mut s = gz(Scalar::zero());
    for b in 0..alg.dim() {
        s += &f[b] * &g[alg.star(b)] * gz(Scalar::one() / alg.degree(b));
    }
    s * gz(Scalar::one() / alg.order())
}

/// Coefficients `λ^φ_{χψ}` of `χψ` in the basis of irreducible characters.
pub fn character_product_coeffs(table: &CharacterTable, chi: usize, psi: usize) -> Result<Vec<C64>, DualityError> {
    let coeffs = table.numeric_product_coeffs(chi, psi);
    let f = table.product_function(chi, psi);
    let residual = (0..table.algebra.dim())
        .map(|b| {
            let s: C64 = (0..table.len()).map(|phi| coeffs[phi] * table.values[phi][b]).sum();
            (s - f[b]).norm()
        })
        .fold(0.0, f64::max);
    if residual > table.tolerance {
        return Err(DualityError::Numerical(format!(
            "projection of {}{} leaves residual {residual:e}",
            table.label(chi),
            table.label(psi)
        )));
    }
    Ok(coeffs)
}

/// Exact `λ^φ_{χψ}` when the table is exact.
pub fn character_product_coeffs_exact(table: &CharacterTable, chi: usize, psi: usize) -> Option<Vec<GaussianRational>> {
    let exact = table.exact.as_ref()?;
    let zeta = table.exact_zeta.as_ref()?;
    let alg = &table.algebra;
    let f: Vec<GaussianRational> = (0..alg.dim())
        .map(|b| &exact[chi][b] * &exact[psi][b] * gz(Scalar::one() / alg.degree(b)))
        .collect();
    Some(
        (0..table.len())
            .map(|phi| inner_product_exact(alg, &f, &exact[phi]) * gz(zeta[phi].clone()))
            .collect(),
    )
}

fn noncommutative_witness(alg: &TableAlgebra) -> Option<String> {
    let n = alg.dim();
    (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .find(|&(a, b)| alg.product_row(a, b) != alg.product_row(b, a))
        .map(|(a, b)| format!("{} * {} != {} * {}", alg.label(a), alg.label(b), alg.label(b), alg.label(a)))
}

fn separation_threshold(m: &DMatrix<C64>, tol: f64) -> f64 {
    (10.0 * tol).max(1e-6 * (1.0 + m.norm()))
}

fn random_combination(mats: &[DMatrix<C64>], rng: &mut ChaCha8Rng) -> DMatrix<C64> {
    let n = mats[0].nrows();
    let mut m = DMatrix::zeros(n, n);
    for r in &mats[1..] {
        let coef = rng.random_range(1..=997i64) as f64 / 997.0 * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        m += r * C64::new(coef, 0.0);
    }
    m
}

/// One common eigenvector per character via a separating combination.
fn by_random_combination(
    mats: &[DMatrix<C64>],
    opts: &DualityOptions,
    rng: &mut ChaCha8Rng,
) -> Option<(Vec<DVector<C64>>, usize)> {
    let n = mats[0].nrows();
    for attempt in 0..=opts.max_retries {
        let m = random_combination(mats, rng);
        let Some(ev) = linalg::eigenvalues(&m) else { continue };
        if n > 1 && linalg::min_separation(&ev) <= separation_threshold(&m, opts.tolerance) {
            continue;
        }
        let mut vectors = Vec::with_capacity(n);
        for theta in &ev {
            let shifted = &m - DMatrix::identity(n, n) * *theta;
            let (v, _) = linalg::smallest_right_singular(&shifted, 1)?;
            vectors.push(v.column(0).into_owned());
        }
        return Some((vectors, attempt + 1));
    }
    None
}

/// Refines invariant subspaces until each is one-dimensional.
fn by_joint_splitting(
    mats: &[DMatrix<C64>],
    opts: &DualityOptions,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<DVector<C64>>> {
    let n = mats[0].nrows();
    let mut spaces = vec![DMatrix::<C64>::identity(n, n)];
    let mut ops: Vec<DMatrix<C64>> = mats[1..].to_vec();
    for _ in 0..=opts.max_retries {
        ops.push(random_combination(mats, rng));
    }
    for op in &ops {
        if spaces.iter().all(|v| v.ncols() == 1) {
            break;
        }
        let mut next = Vec::new();
        for v in spaces {
            if v.ncols() == 1 {
                next.push(v);
                continue;
            }
            let a = v.adjoint() * op * &v;
            let ev = linalg::eigenvalues(&a)?;
            let clusters = linalg::cluster(&ev, separation_threshold(&a, opts.tolerance));
            if clusters.len() == 1 {
                next.push(v);
                continue;
            }
            let k = a.nrows();
            for (theta, mult) in clusters {
                let shifted = &a - DMatrix::identity(k, k) * theta;
                let (y, _) = linalg::smallest_right_singular(&shifted, mult)?;
                next.push(linalg::orthonormalize(&v * y));
            }
        }
        spaces = next;
    }
    if spaces.iter().any(|v| v.ncols() != 1) || spaces.len() != n {
        return None;
    }
    Some(spaces.into_iter().map(|v| v.column(0).into_owned()).collect())
}

fn sort_key(values: &[C64]) -> Vec<(i64, i64)> {
    values
        .iter()
        .map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64))
        .collect()
}

/// Irreducible characters, ζ-coefficients and eigenmatrices of a
/// commutative standard table algebra.
pub fn character_table(alg: &TableAlgebra, opts: &DualityOptions) -> Result<CharacterTable, DualityError> {
    if let Some(w) = noncommutative_witness(alg) {
        return Err(DualityError::NonCommutative(w));
    }
    if !alg.is_standard() {
        return Err(DualityError::NotStandard);
    }
    let n = alg.dim();
    let mats: Vec<DMatrix<C64>> = (0..n)
        .map(|b| linalg::to_complex_matrix(&alg.regular_representation(b).expect("index in range")))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (vectors, method) = if n == 1 {
        (vec![DVector::from_element(1, C64::new(1.0, 0.0))], "trivial".to_string())
    } else {
        let primary = match opts.strategy {
            Strategy::RandomCombination => by_random_combination(&mats, opts, &mut rng),
            Strategy::JointSplitting => None,
        };
        match primary {
            Some((v, attempts)) => (v, format!("random combination, attempt {attempts}")),
            None => match by_joint_splitting(&mats, opts, &mut rng) {
                Some(v) => (v, "joint subspace splitting".to_string()),
                None => {
                    return Err(DualityError::NotSeparated {
                        attempts: opts.max_retries + 1,
                    })
                }
            },
        }
    };
    let mut values: Vec<Vec<C64>> = vectors
        .iter()
        .map(|v| mats.iter().map(|r| linalg::rayleigh(r, v)).collect())
        .collect();

    let degrees: Vec<C64> = alg.degrees().iter().map(c).collect();
    let distance = |vals: &[C64]| vals.iter().zip(&degrees).map(|(x, d)| (x - d).norm()).fold(0.0, f64::max);
    let principal = (0..n)
        .min_by(|&a, &b| distance(&values[a]).total_cmp(&distance(&values[b])))
        .expect("at least one character");
    if distance(&values[principal]) > 1e3 * opts.tolerance.max(1e-12) {
        return Err(DualityError::Numerical("principal character not found".into()));
    }
    let p = values.remove(principal);
    values.sort_by_key(|v| sort_key(v));
    values.insert(0, p);

    let mut conj = vec![usize::MAX; n];
    for i in 0..n {
        let target: Vec<C64> = values[i].iter().map(|z| z.conj()).collect();
        let (j, err) = (0..n)
            .map(|j| {
                let e = values[j].iter().zip(&target).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
                (j, e)
            })
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty");
        if err > 1e3 * opts.tolerance.max(1e-12) {
            return Err(DualityError::Numerical(format!("no conjugate for character {i}")));
        }
        conj[i] = j;
    }

    let order = to_f64(&alg.order());
    let pt = DMatrix::from_fn(n, n, |b, chi| values[chi][b]);
    let mut rhs = DVector::zeros(n);
    rhs[0] = C64::new(order, 0.0);
    let zeta_c = linalg::solve(&pt, &rhs).ok_or_else(|| DualityError::Numerical("singular character matrix".into()))?;
    if let Some(chi) = (0..n).find(|&chi| zeta_c[chi].im.abs() > 1e3 * opts.tolerance.max(1e-12)) {
        return Err(DualityError::Numerical(format!("zeta of chi{chi} is not real")));
    }
    let zeta: Vec<f64> = zeta_c.iter().map(|z| z.re).collect();

    let exact = snap_table(alg, &values, opts);
    let exact_zeta = exact.as_ref().and_then(|ex| snap_zeta(alg, ex, &zeta, opts));
    Ok(CharacterTable {
        algebra: alg.clone(),
        values,
        exact,
        zeta,
        exact_zeta,
        conj,
        tolerance: opts.tolerance,
        method,
    })
}

fn snap_table(alg: &TableAlgebra, values: &[Vec<C64>], opts: &DualityOptions) -> Option<Vec<Vec<GaussianRational>>> {
    let exact: Vec<Vec<GaussianRational>> = values
        .iter()
        .map(|row| row.iter().map(|z| snap_complex(*z, opts.tolerance, opts.max_denominator)).collect())
        .collect::<Option<_>>()?;
    let n = alg.dim();
    for row in &exact {
        for a in 0..n {
            for b in 0..n {
                let lhs = &row[a] * &row[b];
                let mut rhs = gz(Scalar::zero());
                for (t, v) in alg.product_row(a, b) {
                    rhs += &row[*t] * gz(v.clone());
                }
                if lhs != rhs {
                    return None;
                }
            }
        }
    }
    Some(exact)
}

fn snap_zeta(
    alg: &TableAlgebra,
    exact: &[Vec<GaussianRational>],
    zeta: &[f64],
    opts: &DualityOptions,
) -> Option<Vec<Scalar>> {
    let z: Vec<Scalar> = zeta
        .iter()
        .map(|&x| snap(x, opts.tolerance, opts.max_denominator))
        .collect::<Option<_>>()?;
    for b in 0..alg.dim() {
        let mut s = gz(Scalar::zero());
        for (chi, row) in exact.iter().enumerate() {
            s += &row[b] * gz(z[chi].clone());
        }
        let target = if b == 0 { gz(alg.order()) } else { gz(Scalar::zero()) };
        if s != target {
            return None;
        }
    }
    Some(z)
}

/// The dual C-algebra on `{Δ*_χ}` with constants
/// `q^φ_{χψ} = (ζ_χ ζ_ψ / ζ_φ) λ^φ_{χψ}`.
#[derive(Debug, Clone)]
pub struct DualAlgebra {
    labels: Vec<String>,
    conj: Vec<usize>,
    /// Dense numeric constants at `[(χ * n + ψ) * n + φ]`.
    constants: Vec<f64>,
    /// Exact dual, present when the character table is exact or every
    /// constant snaps and the result validates.
    pub exact: Option<TableAlgebra>,
    pub is_table_algebra: bool,
    /// Smallest numeric structure constant.
    pub min_constant: f64,
    pub report: ValidationReport,
}

impl DualAlgebra {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn constant(&self, chi: usize, psi: usize, phi: usize) -> f64 {
        let n = self.dim();
        self.constants[(chi * n + psi) * n + phi]
    }

    pub fn star(&self, chi: usize) -> usize {
        self.conj[chi]
    }

    pub fn exact_algebra(&self) -> Result<&TableAlgebra, DualityError> {
        self.exact
            .as_ref()
            .ok_or_else(|| DualityError::NotExact("the dual algebra".into()))
    }
}

pub fn dual_algebra(table: &CharacterTable, opts: &DualityOptions) -> Result<DualAlgebra, DualityError> {
    let n = table.len();
    let tol = opts.tolerance;
    let mut report = ValidationReport::new("dual algebra");
    let mut constants = vec![0.0; n * n * n];
    let mut max_imag = 0.0f64;
    let mut lambda_min = f64::INFINITY;
    for chi in 0..n {
        for psi in 0..n {
            let coeffs = character_product_coeffs(table, chi, psi)?;
            for phi in 0..n {
                let q = coeffs[phi] * (table.zeta[chi] * table.zeta[psi] / table.zeta[phi]);
                max_imag = max_imag.max(q.im.abs());
                lambda_min = lambda_min.min(coeffs[phi].re);
                constants[(chi * n + psi) * n + phi] = q.re;
            }
        }
    }
    report.push(
        if max_imag <= tol {
            Check::pass("real-constants")
        } else {
            Check::fail("real-constants", "imaginary part above tolerance")
        }
        .with_margin(max_imag),
    );

    // Second route: the columns of Q multiply pointwise like the dual basis.
    let q = table.q_matrix();
    let lu = q.clone().lu();
    let mut worst = 0.0f64;
    for chi in 0..n {
        for psi in 0..n {
            let w = DVector::from_fn(n, |b, _| q[(b, chi)] * q[(b, psi)]);
            let x = lu
                .solve(&w)
                .ok_or_else(|| DualityError::Numerical("singular Q matrix".into()))?;
            for phi in 0..n {
                worst = worst.max((x[phi] - C64::new(constants[(chi * n + psi) * n + phi], 0.0)).norm());
            }
        }
    }
    report.push(
        if worst <= tol {
            Check::pass("constants-two-routes")
        } else {
            Check::fail("constants-two-routes", "pointwise Q products disagree")
        }
        .with_margin(worst),
    );

    let min_constant = constants.iter().copied().fold(f64::INFINITY, f64::min);
    let is_table_algebra = min_constant >= -tol;
    let lambda_nonneg = lambda_min >= -tol;
    report.push(
        if is_table_algebra == lambda_nonneg {
            Check::pass("lemma-es")
        } else {
            Check::fail("lemma-es", "sign of q and lambda constants disagree")
        }
        .with_detail(format!(
            "dual is {}a table algebra, min q = {min_constant:e}",
            if is_table_algebra { "" } else { "not " }
        )),
    );

    let labels: Vec<String> = (0..n).map(|chi| table.label(chi)).collect();
    let exact = exact_dual(table, &constants, &labels, opts);
    let exact_check = match &exact {
        Ok(_) => Check::pass("c-algebra-axioms"),
        Err(e) => Check::fail("c-algebra-axioms", e.clone()),
    };
    report.push(exact_check);
    if let Err(e) = &exact {
        if table.is_exact() {
            return Err(DualityError::Numerical(e.clone()));
        }
    }
    Ok(DualAlgebra {
        labels,
        conj: table.conj.clone(),
        constants,
        exact: exact.ok(),
        is_table_algebra,
        min_constant,
        report,
    })
}

fn exact_dual(
    table: &CharacterTable,
    constants: &[f64],
    labels: &[String],
    opts: &DualityOptions,
) -> Result<TableAlgebra, String> {
    let n = table.len();
    let mut entries = Vec::new();
    let degrees: Vec<Scalar>;
    if let (Some(_), Some(zeta)) = (&table.exact, &table.exact_zeta) {
        for chi in 0..n {
            for psi in 0..n {
                let lambda = character_product_coeffs_exact(table, chi, psi).expect("exact table");
                for (phi, l) in lambda.into_iter().enumerate() {
                    if !l.im.is_zero() {
                        return Err(format!("non-real constant at ({chi}, {psi}, {phi})"));
                    }
                    let q = &zeta[chi] * &zeta[psi] / &zeta[phi] * l.re;
                    if !q.is_zero() {
                        entries.push((chi, psi, phi, q));
                    }
                }
            }
        }
        degrees = zeta.to_vec();
    } else {
        for (idx, &x) in constants.iter().enumerate() {
            let q = snap(x, opts.tolerance, opts.max_denominator)
                .ok_or_else(|| format!("constant {x} does not snap to a rational"))?;
            if !q.is_zero() {
                entries.push((idx / (n * n), (idx / n) % n, idx % n, q));
            }
        }
        degrees = table
            .zeta
            .iter()
            .map(|&z| snap(z, opts.tolerance, opts.max_denominator).ok_or_else(|| format!("zeta {z} does not snap")))
            .collect::<Result<_, _>>()?;
    }
    let raw = RawAlgebra {
        labels: labels.to_vec(),
        star: table.conj.clone(),
        entries,
        degrees: Some(degrees),
    };
    TableAlgebra::new(raw, Mode::CAlgebra).map_err(|e| e.to_string())
}

/// `ker_B(χ)` as a closed subset.
pub fn char_kernel(table: &CharacterTable, chi: usize) -> Result<ClosedSubset, DualityError> {
    Ok(closed_subset(&table.algebra, &table.kernel_members(chi))?)
}

/// `ker(N) = {Δ*_χ : N ⊆ ker_B(χ)}` as a closed subset of the exact dual.
pub fn ker_closed(table: &CharacterTable, dual: &DualAlgebra, n: &ClosedSubset) -> Result<ClosedSubset, DualityError> {
    let exact = dual.exact_algebra()?;
    Ok(closed_subset(exact, &table.irr_of_quotient(n))?)
}

/// Dual algebra of a validated exact algebra in one call.
pub fn dual_of(alg: &TableAlgebra, opts: &DualityOptions) -> Result<(CharacterTable, DualAlgebra), DualityError> {
    let table = character_table(alg, opts)?;
    let dual = dual_algebra(&table, opts)?;
    Ok((table, dual))
}

/// Exact character values as readable strings, e.g. `-1/2+3i`.
pub fn format_gaussian(z: &GaussianRational) -> String {
    let re = crate::scalar::format_rational(&z.re);
    if z.im.is_zero() {
        return re;
    }
    let im = crate::scalar::format_rational(&z.im.abs());
    let sign = if z.im.is_negative() { "-" } else { "+" };
    if z.re.is_zero() {
        format!("{}{}i", if z.im.is_negative() { "-" } else { "" }, im)
    } else {
        format!("{re}{sign}{im}i")
    }
}

/// Numeric value of a possibly exact character entry.
pub fn entry_value(table: &CharacterTable, chi: usize, b: usize) -> C64 {
    match &table.exact {
        Some(ex) => gaussian_to_c64(&ex[chi][b]),
        None => table.values[chi][b],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::raw_from_table;
    use crate::iso::{find_isomorphism, SearchOptions};
    use crate::oracle::{cyclic, direct_product, group_algebra, s3, schur_ring, z8_partition};
    use crate::scalar::{frac, int};

    fn k3() -> TableAlgebra {
        TableAlgebra::new(
            raw_from_table(&["1", "g"], &[0, 1], &[(1, 1, 0, int(2)), (1, 1, 1, int(1))]),
            Mode::TableAlgebra,
        )
        .unwrap()
    }

    fn exact_row(t: &CharacterTable, chi: usize) -> Vec<GaussianRational> {
        t.exact_values().unwrap()[chi].clone()
    }

    #[test]
    fn z2_characters() {
        let t = character_table(&group_algebra(&cyclic(2)), &DualityOptions::default()).unwrap();
        assert_eq!(exact_row(&t, 0), vec![gz(int(1)), gz(int(1))]);
        assert_eq!(exact_row(&t, 1), vec![gz(int(1)), gz(int(-1))]);
        assert_eq!(t.exact_zeta().unwrap(), &[int(1), int(1)]);
    }

    #[test]
    fn k3_characters_and_eigenmatrices() {
        let t = character_table(&k3(), &DualityOptions::default()).unwrap();
        assert_eq!(exact_row(&t, 0), vec![gz(int(1)), gz(int(2))]);
        assert_eq!(exact_row(&t, 1), vec![gz(int(1)), gz(int(-1))]);
        assert_eq!(t.exact_zeta().unwrap(), &[int(1), int(2)]);
        let q = t.q_matrix();
        let expected = [[1.0, 2.0], [1.0, -1.0]];
        for b in 0..2 {
            for chi in 0..2 {
                assert!((q[(b, chi)].re - expected[b][chi]).abs() < 1e-12);
            }
        }
        assert!(t.check_invariants().passed(), "{}", t.check_invariants().to_text());
    }

    #[test]
    fn inner_products() {
        let t = character_table(&k3(), &DualityOptions::default()).unwrap();
        let ip = inner_product(t.algebra(), &t.values()[1], &t.values()[1]);
        assert!((ip - C64::new(0.5, 0.0)).norm() < 1e-12);
        let ex = t.exact_values().unwrap();
        assert_eq!(inner_product_exact(t.algebra(), &ex[1], &ex[1]), gz(frac(1, 2)));
        assert_eq!(inner_product_exact(t.algebra(), &ex[0], &ex[1]), gz(int(0)));
    }

    #[test]
    fn character_products() {
        let t = character_table(&k3(), &DualityOptions::default()).unwrap();
        let l = character_product_coeffs_exact(&t, 1, 1).unwrap();
        assert_eq!(l, vec![gz(frac(1, 2)), gz(frac(1, 2))]);
        let l = character_product_coeffs(&t, 0, 1).unwrap();
        assert!((l[1] - C64::new(1.0, 0.0)).norm() < 1e-12 && l[0].norm() < 1e-12);
        let z2 = character_table(&group_algebra(&cyclic(2)), &DualityOptions::default()).unwrap();
        assert_eq!(character_product_coeffs_exact(&z2, 1, 1).unwrap(), vec![gz(int(1)), gz(int(0))]);
    }

    #[test]
    fn duals_of_small_algebras() {
        let opts = DualityOptions::default();
        let (_, d) = dual_of(&k3(), &opts).unwrap();
        let exact = d.exact.clone().unwrap();
        assert_eq!(exact.product_row(1, 1), &[(0, int(2)), (1, int(1))]);
        assert!(d.is_table_algebra);
        assert!(find_isomorphism(&exact, &k3(), &SearchOptions::default()).unwrap().is_some());

        let z2 = group_algebra(&cyclic(2));
        let (_, d) = dual_of(&z2, &opts).unwrap();
        assert!(find_isomorphism(d.exact.as_ref().unwrap(), &z2, &SearchOptions::default()).unwrap().is_some());
    }

    #[test]
    fn double_dual_of_z8s() {
        let s = schur_ring(&cyclic(8), &z8_partition()).unwrap();
        let opts = DualityOptions::default();
        let (t, d) = dual_of(&s, &opts).unwrap();
        assert!(t.is_exact());
        assert!(t.check_invariants().passed(), "{}", t.check_invariants().to_text());
        assert!(d.report.passed(), "{}", d.report.to_text());
        let (_, dd) = dual_of(d.exact.as_ref().unwrap(), &opts).unwrap();
        assert!(find_isomorphism(dd.exact.as_ref().unwrap(), &s, &SearchOptions::default())
            .unwrap()
            .is_some());
    }

    #[test]
    fn noncommutative_is_refused() {
        let r = character_table(&group_algebra(&s3()), &DualityOptions::default());
        assert!(matches!(r, Err(DualityError::NonCommutative(_))));
    }

    #[test]
    fn joint_splitting_agrees_with_random_combination() {
        let a = group_algebra(&direct_product(&cyclic(2), &cyclic(4)));
        let t1 = character_table(&a, &DualityOptions::default()).unwrap();
        let opts = DualityOptions {
            strategy: Strategy::JointSplitting,
            ..DualityOptions::default()
        };
        let t2 = character_table(&a, &opts).unwrap();
        assert_eq!(t2.method(), "joint subspace splitting");
        assert_eq!(t1.exact_values(), t2.exact_values());
    }

    #[test]
    fn kernels() {
        let z2 = character_table(&group_algebra(&cyclic(2)), &DualityOptions::default()).unwrap();
        assert_eq!(char_kernel(&z2, 1).unwrap().members(), &[0]);
        assert_eq!(char_kernel(&z2, 0).unwrap().members(), &[0, 1]);

        let s = schur_ring(&cyclic(8), &z8_partition()).unwrap();
        let opts = DualityOptions::default();
        let (t, d) = dual_of(&s, &opts).unwrap();
        let chi = (0..t.len())
            .find(|&chi| {
                (t.value(chi, 2) - C64::new(1.0, 0.0)).norm() < 1e-9 && (t.value(chi, 1) + C64::new(1.0, 0.0)).norm() < 1e-9
            })
            .unwrap();
        assert!(char_kernel(&t, chi).unwrap().members().contains(&2));
        let n = closed_subset(&s, &[0, 2]).unwrap();
        assert_eq!(ker_closed(&t, &d, &n).unwrap().len(), 4);
        assert_eq!(ker_closed(&t, &d, &crate::closed::trivial(&s)).unwrap().len(), 6);
        assert_eq!(ker_closed(&t, &d, &crate::closed::full(&s)).unwrap().members(), &[0]);
    }
}
