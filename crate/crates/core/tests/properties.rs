use proptest::prelude::*;
use tablealg::algebra::validate;
use tablealg::closed::{enumerate_closed_subsets, quotient};
use tablealg::io::{parse_scheme, parse_table_algebra, serialize_scheme, serialize_table_algebra};
use tablealg::oracle::{cayley_scheme, cyclic, schur_ring};
use tablealg::scalar::int;
use tablealg::scheme::{adjacency_algebra, quotient_scheme, AssociationScheme};
use tablealg::wedge::{expected_order, verify_wedge_identities, wreath_product};
use tablealg::TableAlgebra;

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn orbits(n: usize, picks: &[usize]) -> Vec<Vec<usize>> {
    let units: Vec<usize> = (1..=n).filter(|&u| gcd(u % n, n) == 1).map(|u| u % n).collect();
    let gens: Vec<usize> = picks.iter().map(|p| units[p % units.len()]).collect();
    let mut group = vec![1 % n];
    let mut i = 0;
    while i < group.len() {
        for &g in &gens {
            let u = group[i] * g % n;
            if !group.contains(&u) {
                group.push(u);
            }
        }
        i += 1;
    }
    let mut seen = vec![false; n];
    let mut classes = Vec::new();
    for x in 0..n {
        if !seen[x] {
            let mut c: Vec<usize> = group.iter().map(|&u| u * x % n).collect();
            c.sort_unstable();
            c.dedup();
            c.iter().for_each(|&y| seen[y] = true);
            classes.push(c);
        }
    }
    classes
}

fn scheme_strategy(max_n: usize) -> impl Strategy<Value = (usize, Vec<Vec<usize>>)> {
    (1..=max_n, prop::collection::vec(0usize..64, 0..3)).prop_map(|(n, picks)| (n, orbits(n, &picks)))
}

fn scheme_of(n: usize, part: &[Vec<usize>]) -> AssociationScheme {
    cayley_scheme(&cyclic(n), part).unwrap()
}

fn algebra_of(n: usize, part: &[Vec<usize>]) -> TableAlgebra {
    schur_ring(&cyclic(n), part).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn algebra_documents_round_trip((n, part) in scheme_strategy(16)) {
        let a = algebra_of(n, &part);
        let text = serialize_table_algebra(&a);
        let b = parse_table_algebra(&text).unwrap();
        let identity: Vec<usize> = (0..a.dim()).collect();
        prop_assert!(a.equal_under(&b, &identity));
        prop_assert_eq!(a.labels(), b.labels());
        prop_assert_eq!(serialize_table_algebra(&b), text);
    }

    #[test]
    fn scheme_documents_round_trip((n, part) in scheme_strategy(16)) {
        let s = scheme_of(n, &part);
        let t = parse_scheme(&serialize_scheme(&s)).unwrap();
        prop_assert_eq!(s.matrix(), t.matrix());
    }

    #[test]
    fn valencies_sum_to_points((n, part) in scheme_strategy(24)) {
        let s = scheme_of(n, &part);
        prop_assert_eq!(s.valencies().iter().sum::<u64>(), n as u64);
        for (g, class) in part.iter().enumerate() {
            prop_assert_eq!(s.valency(g), class.len() as u64);
        }
    }

    #[test]
    fn adjacency_constants_are_nonnegative_integers((n, part) in scheme_strategy(24)) {
        let a = adjacency_algebra(&scheme_of(n, &part));
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                for k in 0..a.dim() {
                    let l = a.lambda(i, j, k);
                    prop_assert!(l.is_integer() && *l >= int(0));
                }
            }
        }
    }

    #[test]
    fn quotient_schemes_match_quotient_algebras((n, part) in scheme_strategy(16)) {
        let s = scheme_of(n, &part);
        let a = adjacency_algebra(&s);
        for h in enumerate_closed_subsets(&a, 32).unwrap() {
            let (qs, proj) = quotient_scheme(&s, h.members()).unwrap();
            prop_assert_eq!(proj.kernel(), h.members().to_vec());
            prop_assert!(qs.report().passed());
            let qa = quotient(&a, &h).unwrap();
            prop_assert!(adjacency_algebra(&qs).same_structure(&qa.algebra));
        }
    }

    #[test]
    fn wreath_orders_multiply(
        (n, p) in scheme_strategy(6),
        (m, q) in scheme_strategy(6),
    ) {
        let lower = algebra_of(n, &p);
        let upper = algebra_of(m, &q);
        let w = wreath_product(&lower, &upper).unwrap();
        prop_assert_eq!(w.algebra.order(), expected_order(&w));
        prop_assert_eq!(w.algebra.order(), lower.order() * upper.order());
        prop_assert_eq!(w.algebra.dim(), lower.dim() + upper.dim() - 1);
        prop_assert!(validate(&w.algebra.to_raw(), w.algebra.mode()).unwrap().passed());
        prop_assert!(verify_wedge_identities(&w, &Default::default()).passed());
    }

    #[test]
    fn perturbed_entries_are_rejected(
        (n, part) in scheme_strategy(12),
        pick in any::<prop::sample::Index>(),
    ) {
        let a = algebra_of(n, &part);
        let d = a.dim();
        let cell = pick.index(d * d * d);
        let (i, j, k) = (cell / (d * d), cell / d % d, cell % d);
        let mut raw = a.to_raw();
        match raw.entries.iter_mut().find(|e| (e.0, e.1, e.2) == (i, j, k)) {
            Some(e) => e.3 += int(1),
            None => raw.entries.push((i, j, k, int(1))),
        }
        let caught = validate(&raw, a.mode()).map(|r| !r.passed()).unwrap_or(true);
        prop_assert!(caught);
    }
}
