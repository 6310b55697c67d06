mod common;

use std::collections::HashMap;

use common::{all_paths, instance};
use num_bigint::BigUint;
use proptest::prelude::*;
use radcount::{
    count_commuting, count_conjugacy_classes_un, count_overline, count_weakened, dispatch_count, CountOptions, Quiver,
    SummandVector,
};

/// Independent model of the algebra: elements `(slot i, slot j, path)` with
/// the path running from the vertex of slot i to the vertex of slot j.
struct Model {
    lens: Vec<usize>,
    table: HashMap<(usize, usize), usize>,
}

impl Model {
    fn new(q: &Quiver, d: &SummandVector, constants: bool) -> Self {
        let slots: Vec<usize> = (0..q.vertex_count()).flat_map(|v| std::iter::repeat_n(v, d.get(v) as usize)).collect();
        let mut elems = Vec::new();
        for (s, t, p) in all_paths(q) {
            if p.is_empty() && !constants {
                continue;
            }
            for (i, &vi) in slots.iter().enumerate() {
                for (j, &vj) in slots.iter().enumerate() {
                    if vi == s && vj == t {
                        elems.push((i, j, p.clone()));
                    }
                }
            }
        }
        let index: HashMap<_, _> = elems.iter().cloned().enumerate().map(|(k, e)| (e, k)).collect();
        let mut table = HashMap::new();
        for (a, (i, k, c)) in elems.iter().enumerate() {
            for (b, (k2, j, p)) in elems.iter().enumerate() {
                if k == k2 {
                    let cp: Vec<usize> = c.iter().chain(p).copied().collect();
                    if let Some(&e) = index.get(&(*i, *j, cp)) {
                        table.insert((a, b), e);
                    }
                }
            }
        }
        Self {
            lens: elems.iter().map(|e| e.2.len()).collect(),
            table,
        }
    }

    fn dim(&self) -> usize {
        self.lens.len()
    }

    /// Number of pairs `(x, y)` over F_p with `x` supported on `xs`, `y` on
    /// `ys`, and `xy - yx` vanishing on the coordinates in `check`.
    fn count(&self, p: u32, xs: &[usize], ys: &[usize], check: &[usize]) -> u64 {
        let vectors = |support: &[usize]| -> Vec<Vec<u32>> {
            let total = (p as u64).pow(support.len() as u32);
            (0..total)
                .map(|mut code| {
                    let mut v = vec![0u32; self.dim()];
                    for &s in support {
                        v[s] = (code % p as u64) as u32;
                        code /= p as u64;
                    }
                    v
                })
                .collect()
        };
        let (xv, yv) = (vectors(xs), vectors(ys));
        let mut n = 0;
        for x in &xv {
            for y in &yv {
                let mut br = vec![0u32; self.dim()];
                for (&(a, b), &c) in &self.table {
                    br[c] = (br[c] + x[a] * y[b] + (p - 1) * (y[a] * x[b] % p)) % p;
                }
                if check.iter().all(|&c| br[c] == 0) {
                    n += 1;
                }
            }
        }
        n
    }

    fn with_len(&self, f: impl Fn(usize) -> bool) -> Vec<usize> {
        (0..self.dim()).filter(|&k| f(self.lens[k])).collect()
    }
}

fn opts(jobs: usize) -> CountOptions {
    CountOptions::with_jobs(jobs)
}

fn tiny() -> impl Strategy<Value = (Quiver, SummandVector)> {
    instance(4, 2, 2).prop_filter("too large for pair enumeration", |(q, d)| {
        let rad = q.weighted_path_count(d, false);
        let full = q.weighted_path_count(d, true);
        rad <= 6 && rad + full <= 13
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn radical_count_matches_pair_enumeration((q, d) in tiny(), p in prop::sample::select(vec![2u32, 3])) {
        let m = Model::new(&q, &d, false);
        prop_assume!(p == 2 || m.dim() <= 4);
        let all: Vec<usize> = (0..m.dim()).collect();
        let want = m.count(p, &all, &all, &all);
        prop_assert_eq!(count_commuting(&q, &d, p, &opts(2)).unwrap().value, BigUint::from(want));
        let plain = CountOptions { projective: false, ..opts(1) };
        prop_assert_eq!(count_commuting(&q, &d, p, &plain).unwrap().value, BigUint::from(want));
    }

    #[test]
    fn overline_count_matches_pair_enumeration((q, d) in tiny()) {
        let m = Model::new(&q, &d, true);
        let all: Vec<usize> = (0..m.dim()).collect();
        let rad = m.with_len(|l| l >= 1);
        let want = m.count(2, &rad, &all, &all);
        prop_assert_eq!(count_overline(&q, &d, 2, &opts(2)).unwrap().value, BigUint::from(want));
    }

    #[test]
    fn weakened_count_matches_pair_enumeration((q, d) in tiny(), l in 1usize..3, m in 1usize..5) {
        let model = Model::new(&q, &d, false);
        let xs = model.with_len(|k| k >= l);
        let check = model.with_len(|k| k < m);
        let want = model.count(2, &xs, &xs, &check);
        prop_assert_eq!(count_weakened(&q, &d, l, m, 2, &opts(2)).unwrap().value, BigUint::from(want));
    }

    #[test]
    fn count_is_invariant_under_reversal((q, d) in instance(4, 2, 2), p in prop::sample::select(vec![2u32, 3])) {
        prop_assume!(q.weighted_path_count(&d, false) <= 8);
        let a = count_commuting(&q, &d, p, &opts(2)).unwrap().value;
        let b = count_commuting(&q.opposite(), &d, p, &opts(2)).unwrap().value;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn weakened_count_decreases_in_m((q, d) in instance(4, 2, 2), l in 1usize..3) {
        prop_assume!(q.weighted_path_count(&d, false) <= 8);
        let mut prev: Option<BigUint> = None;
        for m in 1..=q.longest_path_len() + 2 {
            let v = count_weakened(&q, &d, l, m, 2, &opts(2)).unwrap().value;
            if let Some(p) = &prev {
                prop_assert!(&v <= p);
            }
            prev = Some(v);
        }
        // m = 1 imposes nothing
        let (_, rad) = radcount::build_basis(&q, &d, false).unwrap();
        let dim = radcount::radical_power_indices(&rad, l).unwrap().len();
        let v = count_weakened(&q, &d, l, 1, 2, &opts(2)).unwrap().value;
        prop_assert_eq!(v, BigUint::from(2u32).pow(2 * dim as u32));
    }

    #[test]
    fn count_does_not_depend_on_jobs((q, d) in instance(5, 2, 2)) {
        prop_assume!(q.weighted_path_count(&d, false) <= 9);
        let a = count_commuting(&q, &d, 3, &opts(1)).unwrap().value;
        let b = count_commuting(&q, &d, 3, &opts(5)).unwrap().value;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn dispatch_agrees_with_brute_force((q, d) in instance(5, 2, 2)) {
        prop_assume!(q.weighted_path_count(&d, false) <= 9);
        let a = count_commuting(&q, &d, 2, &opts(2)).unwrap().value;
        let b = dispatch_count(&q, &d, 2, &opts(2)).unwrap().value;
        prop_assert_eq!(a, b);
    }
}

#[test]
fn unitriangular_class_numbers() {
    // k(U_n(F_q)) for n = 1..4 at q = 2, 3, and n = 5 at q = 2
    let known = [(1, 2, 1u32), (2, 2, 2), (3, 2, 5), (4, 2, 16), (1, 3, 1), (2, 3, 3), (3, 3, 11), (4, 3, 57), (5, 2, 61)];
    for (n, q, k) in known {
        assert_eq!(count_conjugacy_classes_un(n, q).unwrap(), BigUint::from(k), "n={n} q={q}");
    }
}

#[test]
fn equioriented_line_counts_unitriangular_classes() {
    for n in 1..=4usize {
        for q in [2u32, 3] {
            let k = count_conjugacy_classes_un(n, q).unwrap();
            let want = k * BigUint::from(q).pow((n * (n - 1) / 2) as u32);
            let got = count_commuting(&Quiver::linear(n), &SummandVector::ones(n), q, &opts(2)).unwrap().value;
            assert_eq!(got, want, "n={n} q={q}");
        }
    }
}

#[test]
fn weakened_below_twice_l_is_free() {
    let q = Quiver::linear(3);
    let d = SummandVector::ones(3);
    // dim rad = 3, dim rad^2 = 1
    assert_eq!(count_weakened(&q, &d, 1, 2, 2, &opts(1)).unwrap().value, BigUint::from(64u32));
    assert_eq!(count_weakened(&q, &d, 2, 4, 3, &opts(1)).unwrap().value, BigUint::from(9u32));
    assert!(count_weakened(&q, &d, 0, 2, 2, &opts(1)).is_err());
}
