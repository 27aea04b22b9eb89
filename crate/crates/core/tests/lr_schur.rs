//! LR coefficients and intersection numbers against Schur polynomials in `r`
//! variables: `c^ν_{λμ}` is the coefficient of `x^{ν+δ}` in `a_{λ+δ} s_μ`.

use std::collections::HashMap;

use horn_core::lr::lr_coefficient;
use horn_core::{LrOracle, Partition, ProblemTuple};
use num_bigint::BigUint;

type Poly = HashMap<Vec<usize>, i64>;

fn padded(p: &Partition, r: usize) -> Vec<usize> {
    (1..=r).map(|a| p.part(a)).collect()
}

/// `s_μ(x_1, ..., x_r)` by branching on the last variable.
fn schur(mu: &[usize]) -> Poly {
    let r = mu.len();
    let mut out = Poly::new();
    if r == 0 {
        out.insert(vec![], 1);
        return out;
    }
    // ν interlaces μ: μ_{a+1} ≤ ν_a ≤ μ_a
    let mut nus = vec![vec![]];
    for a in 0..r - 1 {
        let lo = mu[a + 1];
        nus = nus
            .into_iter()
            .flat_map(|nu: Vec<usize>| {
                (lo..=mu[a]).map(move |x| {
                    let mut v = nu.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    let total: usize = mu.iter().sum();
    for nu in nus {
        let rest = total - nu.iter().sum::<usize>();
        for (mono, c) in schur(&nu) {
            let mut m = mono;
            m.push(rest);
            *out.entry(m).or_insert(0) += c;
        }
    }
    out
}

fn permutations(r: usize) -> Vec<(Vec<usize>, i64)> {
    if r == 0 {
        return vec![(vec![], 1)];
    }
    let mut out = Vec::new();
    for (p, sign) in permutations(r - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, r - 1);
            let moved = (p.len() - pos) as i64;
            out.push((q, if moved % 2 == 0 { sign } else { -sign }));
        }
    }
    out
}

/// All `c^ν_{λμ}` with `ℓ(ν) ≤ r`, keyed by padded `ν`.
fn schur_products(lambda: &[usize], mu: &[usize]) -> HashMap<Vec<usize>, i64> {
    let r = lambda.len();
    let shifted: Vec<usize> = (0..r).map(|a| lambda[a] + r - 1 - a).collect();
    let s_mu = schur(mu);
    let mut out = HashMap::new();
    for (perm, sign) in permutations(r) {
        for (mono, c) in &s_mu {
            let e: Vec<usize> = (0..r).map(|a| shifted[perm[a]] + mono[a]).collect();
            if e.windows(2).all(|w| w[0] > w[1]) {
                let nu: Vec<usize> = (0..r).map(|a| e[a] - (r - 1 - a)).collect();
                *out.entry(nu).or_insert(0) += sign * c;
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

#[test]
fn lr_coefficients_match_schur_polynomials() {
    for r in 1..=3 {
        let shapes = Partition::all_in_box(r, 4);
        for lambda in &shapes {
            for mu in &shapes {
                let expected = schur_products(&padded(lambda, r), &padded(mu, r));
                assert!(expected.values().all(|&c| c > 0));
                let size = lambda.size() + mu.size();
                for nu in Partition::all_of_size_in_box(size, r, 8) {
                    let want = expected.get(&padded(&nu, r)).copied().unwrap_or(0);
                    assert_eq!(
                        lr_coefficient(&nu, lambda, mu) as i64,
                        want,
                        "c^({nu})_({lambda}),({mu})"
                    );
                }
            }
        }
    }
}

/// Product of the tuple's classes truncated to the `r x (n - r)` box, then the
/// coefficient of the full rectangle.
fn schur_intersection_number(problem: &ProblemTuple) -> i64 {
    let (r, width) = (problem.r(), problem.n() - problem.r());
    let mut acc: HashMap<Vec<usize>, i64> = HashMap::from([(vec![0; r], 1)]);
    for i in problem.indices() {
        let lambda = padded(&i.to_partition(), r);
        let mut next = HashMap::new();
        for (nu, c) in &acc {
            for (rho, d) in schur_products(nu, &lambda) {
                if rho[0] <= width {
                    *next.entry(rho).or_insert(0) += c * d;
                }
            }
        }
        acc = next;
    }
    acc.get(&vec![width; r]).copied().unwrap_or(0)
}

#[test]
fn intersection_numbers_match_schur_polynomials() {
    let oracle = LrOracle::new();
    for (r, n, s) in [(2, 4, 3), (2, 4, 4), (2, 5, 3), (3, 6, 3), (2, 6, 3)] {
        for problem in ProblemTuple::all(r, n, s) {
            let got = oracle.intersection_number(&problem);
            if !got.top_degree {
                assert_eq!(got.value, BigUint::from(0u32));
                continue;
            }
            let want = schur_intersection_number(&problem);
            assert_eq!(got.value, BigUint::from(want as u64), "{problem}");
        }
    }
}

#[test]
fn known_numbers() {
    let oracle = LrOracle::new();
    let number = |s: &str| {
        let p: ProblemTuple = s.parse().unwrap();
        oracle.intersection_number(&p).value
    };
    // four lines meeting four lines in P^3
    assert_eq!(number("2,4;2,4;2,4;2,4@4"), BigUint::from(2u32));
    // sigma_1^6 on Gr(2,5) is the degree of Gr(2,5) in the Plücker embedding
    assert_eq!(number("3,5;3,5;3,5;3,5;3,5;3,5@5"), BigUint::from(5u32));
    assert_eq!(number("1,4;2,3@4"), BigUint::from(0u32));
}
