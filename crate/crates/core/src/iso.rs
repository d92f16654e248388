//! Backtracking search for basis bijections with equal structure constants.

use crate::algebra::TableAlgebra;
use crate::scalar::Scalar;
use thiserror::Error;

pub const DEFAULT_MAX_DIM: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Largest dimension the search accepts.
    pub max_dim: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { max_dim: DEFAULT_MAX_DIM }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("isomorphism search refused: dimension {dim} exceeds the bound {max_dim}")]
pub struct SearchError {
    pub dim: usize,
    pub max_dim: usize,
}

/// Invariants of a basis element preserved by any isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Signature {
    degree: Scalar,
    self_paired: bool,
    row_values: Vec<Scalar>,
    col_values: Vec<Scalar>,
    square_support: usize,
}

fn signature(alg: &TableAlgebra, a: usize) -> Signature {
    let mut row_values = Vec::new();
    let mut col_values = Vec::new();
    for b in 0..alg.dim() {
        row_values.extend(alg.product_row(a, b).iter().map(|(_, v)| v.clone()));
        col_values.extend(alg.product_row(b, a).iter().map(|(_, v)| v.clone()));
    }
    row_values.sort();
    col_values.sort();
    Signature {
        degree: alg.degree(a).clone(),
        self_paired: alg.star(a) == a,
        row_values,
        col_values,
        square_support: alg.product_row(a, a).len(),
    }
}

#[derive(Debug, Clone, Copy)]
enum Source {
    Free,
    Product(usize, usize),
    StarOf(usize),
}

/// Assignment order: each element is reached as soon as it lies in the
/// support of a product of earlier ones; adjoints follow immediately.
fn plan(alg: &TableAlgebra) -> Vec<(usize, Source)> {
    let dim = alg.dim();
    let mut placed = vec![false; dim];
    placed[0] = true;
    let mut order = vec![(0, Source::Free)];
    let push = |a: usize, src: Source, order: &mut Vec<(usize, Source)>, placed: &mut Vec<bool>| {
        placed[a] = true;
        order.push((a, src));
        let s = alg.star(a);
        if !placed[s] {
            placed[s] = true;
            order.push((s, Source::StarOf(a)));
        }
    };
    while order.len() < dim {
        let done: Vec<usize> = order.iter().map(|(a, _)| *a).collect();
        let mut found = None;
        'scan: for &x in &done {
            for &y in &done {
                if let Some(c) = alg.support_of_product(x, y).find(|&c| !placed[c]) {
                    found = Some((c, Source::Product(x, y)));
                    break 'scan;
                }
            }
        }
        match found {
            Some((c, src)) => push(c, src, &mut order, &mut placed),
            None => {
                let a = (0..dim).find(|&a| !placed[a]).expect("unplaced element exists");
                push(a, Source::Free, &mut order, &mut placed);
            }
        }
    }
    order
}

struct Search<'a> {
    b: &'a TableAlgebra,
    c: &'a TableAlgebra,
    order: Vec<(usize, Source)>,
    candidates: Vec<Vec<usize>>,
    map: Vec<Option<usize>>,
    used: Vec<bool>,
}

impl Search<'_> {
    /// Checks every product among assigned elements involving `a`.
    fn consistent(&self, a: usize) -> bool {
        let dim = self.b.dim();
        let inverse: Vec<Option<usize>> = {
            let mut inv = vec![None; dim];
            for (x, m) in self.map.iter().enumerate() {
                if let Some(y) = m {
                    inv[*y] = Some(x);
                }
            }
            inv
        };
        let ma = self.map[a].unwrap();
        if self.c.star(ma) != self.map[self.b.star(a)].unwrap_or(self.c.star(ma)) {
            return false;
        }
        for x in 0..dim {
            let Some(mx) = self.map[x] else { continue };
            for (p, q, mp, mq) in [(a, x, ma, mx), (x, a, mx, ma)] {
                let src = self.b.product_row(p, q);
                let dst = self.c.product_row(mp, mq);
                if src.len() != dst.len() {
                    return false;
                }
                for (z, v) in src {
                    if let Some(mz) = self.map[*z] {
                        if self.c.lambda(mp, mq, mz) != v {
                            return false;
                        }
                    }
                }
                for (w, v) in dst {
                    if let Some(z) = inverse[*w] {
                        if self.b.lambda(p, q, z) != v {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn options(&self, step: usize) -> Vec<usize> {
        let (a, src) = self.order[step];
        match src {
            Source::Free => self.candidates[a].clone(),
            Source::StarOf(p) => vec![self.c.star(self.map[p].unwrap())],
            Source::Product(x, y) => {
                let coef = self.b.lambda(x, y, a);
                let (mx, my) = (self.map[x].unwrap(), self.map[y].unwrap());
                self.c
                    .product_row(mx, my)
                    .iter()
                    .filter(|(_, v)| v == coef)
                    .map(|(c, _)| *c)
                    .filter(|c| self.candidates[a].contains(c))
                    .collect()
            }
        }
    }

    fn run(&mut self, step: usize) -> bool {
        if step == self.order.len() {
            return true;
        }
        let a = self.order[step].0;
        for t in self.options(step) {
            if self.used[t] {
                continue;
            }
            self.map[a] = Some(t);
            self.used[t] = true;
            if self.consistent(a) && self.run(step + 1) {
                return true;
            }
            self.map[a] = None;
            self.used[t] = false;
        }
        false
    }
}

/// A bijection `map` (index in `b` → index in `c`) preserving degrees, the
/// involution and every structure constant, or `None` when exhaustive search
/// finds none.
pub fn find_isomorphism(
    b: &TableAlgebra,
    c: &TableAlgebra,
    options: &SearchOptions,
) -> Result<Option<Vec<usize>>, SearchError> {
    let dim = b.dim();
    if dim != c.dim() {
        return Ok(None);
    }
    if dim > options.max_dim {
        return Err(SearchError {
            dim,
            max_dim: options.max_dim,
        });
    }
    if b.order() != c.order() || b.is_commutative() != c.is_commutative() {
        return Ok(None);
    }
    let sig_b: Vec<Signature> = (0..dim).map(|a| signature(b, a)).collect();
    let sig_c: Vec<Signature> = (0..dim).map(|a| signature(c, a)).collect();
    let mut sorted_b = sig_b.clone();
    let mut sorted_c = sig_c.clone();
    sorted_b.sort();
    sorted_c.sort();
    if sorted_b != sorted_c {
        return Ok(None);
    }
    let candidates = (0..dim)
        .map(|a| {
            if a == 0 {
                vec![0]
            } else {
                (1..dim).filter(|&t| sig_c[t] == sig_b[a]).collect()
            }
        })
        .collect();
    let mut search = Search {
        b,
        c,
        order: plan(b),
        candidates,
        map: vec![None; dim],
        used: vec![false; dim],
    };
    if !search.run(0) {
        return Ok(None);
    }
    let map: Vec<usize> = search.map.into_iter().map(|m| m.unwrap()).collect();
    debug_assert!(b.equal_under(c, &map));
    Ok(b.equal_under(c, &map).then_some(map))
}

/// Convenience: true when an isomorphism exists.
pub fn isomorphic(b: &TableAlgebra, c: &TableAlgebra, options: &SearchOptions) -> Result<bool, SearchError> {
    Ok(find_isomorphism(b, c, options)?.is_some())
}
