//! Littlewood–Richardson oracle.
//!
//! Coefficients are obtained by plain backtracking over semistandard skew
//! fillings whose reverse reading word is a lattice word. Nothing clever: this
//! module is the ground truth the Horn recursion and the tangent probe are
//! checked against, so it stays as simple as possible.

use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::schubert::{Partition, ProblemTuple, SchubertIndex};

/// Number of LR skew tableaux of shape `outer / inner` and content `weight`,
/// i.e. the coefficient of `s_outer` in `s_inner * s_weight`.
pub fn lr_coefficient(outer: &Partition, inner: &Partition, weight: &Partition) -> u64 {
    if outer.size() != inner.size() + weight.size()
        || !outer.contains(inner)
        || !outer.contains(weight)
    {
        return 0;
    }
    let rows = outer.len();
    let mut grid: Vec<Vec<usize>> = (1..=rows).map(|i| vec![0; outer.part(i)]).collect();
    let mut cells = Vec::with_capacity(weight.size());
    for i in 1..=rows {
        for j in (inner.part(i)..outer.part(i)).rev() {
            cells.push((i - 1, j));
        }
    }
    let mut counts = vec![0usize; weight.len() + 1];
    let mut total = 0u64;
    fill(
        0,
        &cells,
        &mut grid,
        &mut counts,
        outer,
        inner,
        weight,
        &mut total,
    );
    total
}

#[allow(clippy::too_many_arguments)]
fn fill(
    k: usize,
    cells: &[(usize, usize)],
    grid: &mut [Vec<usize>],
    counts: &mut [usize],
    outer: &Partition,
    inner: &Partition,
    weight: &Partition,
    total: &mut u64,
) {
    if k == cells.len() {
        *total += 1;
        return;
    }
    let (i, j) = cells[k];
    // weakly increasing along the row: bounded by the entry to the right
    let mut hi = weight.len().min(i + 1);
    if j + 1 < outer.part(i + 1) {
        hi = hi.min(grid[i][j + 1]);
    }
    // strictly increasing down the column, if the cell above is in the skew shape
    let lo = if i > 0 && j >= inner.part(i) {
        grid[i - 1][j] + 1
    } else {
        1
    };
    for v in lo..=hi {
        if counts[v] >= weight.part(v) {
            continue;
        }
        if v > 1 && counts[v] >= counts[v - 1] {
            continue;
        }
        counts[v] += 1;
        grid[i][j] = v;
        fill(k + 1, cells, grid, counts, outer, inner, weight, total);
        counts[v] -= 1;
    }
    grid[i][j] = 0;
}

/// An element of `H*(Gr(r, n))` in the Schubert basis, with nonnegative
/// coefficients. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomClass {
    r: usize,
    n: usize,
    #[serde(serialize_with = "decimal_terms")]
    terms: BTreeMap<Partition, BigUint>,
}

fn decimal_terms<S: Serializer>(
    terms: &BTreeMap<Partition, BigUint>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(
        terms
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_str_radix(10))),
    )
}

impl CohomClass {
    pub fn zero(r: usize, n: usize) -> Self {
        Self {
            r,
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(r: usize, n: usize) -> Self {
        Self::schubert(&SchubertIndex::fundamental(r, n))
    }

    pub fn schubert(index: &SchubertIndex) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(index.to_partition(), BigUint::one());
        Self {
            r: index.r(),
            n: index.n(),
            terms,
        }
    }

    /// `sigma_lambda`, or zero if `lambda` leaves the `r x (n-r)` rectangle.
    pub fn from_partition(lambda: &Partition, r: usize, n: usize) -> Self {
        let mut c = Self::zero(r, n);
        if lambda.fits(r, n - r) {
            c.terms.insert(lambda.clone(), BigUint::one());
        }
        c
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Partition, BigUint> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, lambda: &Partition) -> BigUint {
        self.terms.get(lambda).cloned().unwrap_or_default()
    }

    /// Coefficient of the point class `((n-r)^r)`.
    pub fn point_coefficient(&self) -> BigUint {
        self.coefficient(&Partition::rectangle(self.r, self.n - self.r))
    }

    fn add_term(&mut self, lambda: Partition, c: BigUint) {
        if c.is_zero() {
            return;
        }
        *self.terms.entry(lambda).or_default() += c;
    }
}

impl std::fmt::Display for CohomClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (lambda, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if !c.is_one() {
                write!(f, "{c}*")?;
            }
            write!(f, "s({lambda})")?;
        }
        Ok(())
    }
}

/// Serializes a big integer as its decimal string.
pub fn decimal<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_str_radix(10))
}

/// Result of [`LrOracle::intersection_number`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionNumber {
    #[serde(serialize_with = "decimal")]
    pub value: BigUint,
    /// `false` when the total codimension differs from `dim Gr(r, n)`; the
    /// value is then 0 by convention.
    pub top_degree: bool,
}

/// Outcome of a saturation comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SaturationReport {
    /// Nonvanishing of `prod sigma_{lambda, l}` in `Gr(r, r + l)`.
    pub p1: bool,
    /// Nonvanishing of `prod sigma_{N lambda, N l}` in `Gr(r, r + N l)`.
    pub p2: bool,
}

impl SaturationReport {
    pub fn equivalent(&self) -> bool {
        self.p1 == self.p2
    }
}

type PairKey = (Partition, Partition, usize, usize);

/// LR computations with a synchronized memo of pairwise Schubert products.
///
/// Safe to share between threads; the cache only ever grows.
#[derive(Default)]
pub struct LrOracle {
    pairs: RwLock<HashMap<PairKey, Vec<(Partition, u64)>>>,
}

impl LrOracle {
    pub fn new() -> Self {
        Self::default()
    }

    /// `sigma_lambda * sigma_mu` in `Gr(rows, rows + cols)`, truncated to the rectangle.
    pub fn schubert_product(
        &self,
        lambda: &Partition,
        mu: &Partition,
        rows: usize,
        cols: usize,
    ) -> Vec<(Partition, u64)> {
        let key = (lambda.clone(), mu.clone(), rows, cols);
        if let Some(hit) = self.pairs.read().unwrap().get(&key) {
            return hit.clone();
        }
        let size = lambda.size() + mu.size();
        let terms: Vec<(Partition, u64)> = if lambda.fits(rows, cols) && mu.fits(rows, cols) {
            Partition::all_of_size_in_box(size, rows, cols)
                .into_iter()
                .filter(|nu| nu.contains(lambda) && nu.contains(mu))
                .filter_map(|nu| {
                    let c = lr_coefficient(&nu, lambda, mu);
                    (c > 0).then_some((nu, c))
                })
                .collect()
        } else {
            vec![]
        };
        self.pairs
            .write()
            .unwrap()
            .entry(key)
            .or_insert(terms)
            .clone()
    }

    pub fn product(&self, a: &CohomClass, b: &CohomClass) -> Result<CohomClass> {
        if (a.r, a.n) != (b.r, b.n) {
            return Err(Error::RectangleMismatch(a.r, a.n, b.r, b.n));
        }
        let (rows, cols) = (a.r, a.n - a.r);
        let mut out = CohomClass::zero(a.r, a.n);
        for (lambda, ca) in &a.terms {
            for (mu, cb) in &b.terms {
                for (nu, c) in self.schubert_product(lambda, mu, rows, cols) {
                    out.add_term(nu, ca * cb * BigUint::from(c));
                }
            }
        }
        Ok(out)
    }

    /// `prod_j omega_{I^j}` as a class, folded left to right.
    pub fn product_class(&self, problem: &ProblemTuple) -> CohomClass {
        let mut acc = CohomClass::one(problem.r(), problem.n());
        for i in problem.indices() {
            if acc.is_zero() {
                break;
            }
            acc = self
                .product(&acc, &CohomClass::schubert(i))
                .expect("indices of a problem share (r, n)");
        }
        acc
    }

    pub fn intersection_number(&self, problem: &ProblemTuple) -> IntersectionNumber {
        if !problem.is_top_degree() {
            return IntersectionNumber {
                value: BigUint::zero(),
                top_degree: false,
            };
        }
        IntersectionNumber {
            value: self.product_class(problem).point_coefficient(),
            top_degree: true,
        }
    }

    pub fn is_nonzero_product(&self, problem: &ProblemTuple) -> bool {
        if problem.expected_dim() < 0 {
            return false;
        }
        !self.product_class(problem).is_zero()
    }

    /// Nonvanishing of `prod sigma_{lambda, width}` in `Gr(r, r + width)`.
    pub fn rectangle_product_nonzero(
        &self,
        partitions: &[Partition],
        r: usize,
        width: usize,
    ) -> bool {
        let mut acc = CohomClass::one(r, r + width);
        for lambda in partitions {
            acc = self
                .product(&acc, &CohomClass::from_partition(lambda, r, r + width))
                .expect("same rectangle");
            if acc.is_zero() {
                return false;
            }
        }
        true
    }

    /// Compares nonvanishing of `prod sigma_{lambda, l}` in `Gr(r, r+l)` with
    /// that of `prod sigma_{N lambda, N l}` in `Gr(r, r+Nl)`.
    pub fn saturation_check(
        &self,
        partitions: &[Partition],
        r: usize,
        width: usize,
        factor: usize,
    ) -> Result<SaturationReport> {
        for lambda in partitions {
            if lambda.len() > r {
                return Err(Error::TooManyParts {
                    partition: lambda.to_string(),
                    rows: r,
                });
            }
            if lambda.first() > width {
                return Err(Error::WidthOverflow {
                    partition: lambda.to_string(),
                    width,
                });
            }
        }
        if factor == 0 {
            return Err(Error::Parse("scaling factor must be positive".into()));
        }
        let scaled: Vec<Partition> = partitions.iter().map(|p| p.scale(factor)).collect();
        Ok(SaturationReport {
            p1: self.rectangle_product_nonzero(partitions, r, width),
            p2: self.rectangle_product_nonzero(&scaled, r, factor * width),
        })
    }
}

/// Uncached convenience wrapper around [`LrOracle::product`].
pub fn product(a: &CohomClass, b: &CohomClass) -> Result<CohomClass> {
    LrOracle::new().product(a, b)
}

/// Uncached convenience wrapper around [`LrOracle::intersection_number`].
pub fn intersection_number(problem: &ProblemTuple) -> IntersectionNumber {
    LrOracle::new().intersection_number(problem)
}

/// Uncached convenience wrapper around [`LrOracle::is_nonzero_product`].
pub fn is_nonzero_product(problem: &ProblemTuple) -> bool {
    LrOracle::new().is_nonzero_product(problem)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn small_coefficients() {
        assert_eq!(lr_coefficient(&p("2"), &p("1"), &p("1")), 1);
        assert_eq!(lr_coefficient(&p("1,1"), &p("1"), &p("1")), 1);
        assert_eq!(lr_coefficient(&p("3,2,1"), &p(""), &p("3,2,1")), 1);
        assert_eq!(lr_coefficient(&p("3,2,1"), &p("2,1"), &p("2,1")), 2);
        assert_eq!(lr_coefficient(&p("4,2"), &p("2,1"), &p("2,1")), 1);
        assert_eq!(lr_coefficient(&p("2"), &p("1"), &p("2")), 0);
    }

    #[test]
    fn gr24_products() {
        let o = LrOracle::new();
        let s1 = CohomClass::from_partition(&p("1"), 2, 4);
        let sq = o.product(&s1, &s1).unwrap();
        assert_eq!(sq.terms().len(), 2);
        assert_eq!(sq.coefficient(&p("2")), big(1));
        assert_eq!(sq.coefficient(&p("1,1")), big(1));

        let s2 = CohomClass::from_partition(&p("2"), 2, 4);
        let s2s2 = o.product(&s2, &s2).unwrap();
        assert_eq!(s2s2.to_string(), "s(2,2)");

        let x = CohomClass::from_partition(&p("2,1"), 2, 4);
        assert_eq!(o.product(&CohomClass::one(2, 4), &x).unwrap(), x);
        assert!(o.product(&x, &CohomClass::one(2, 5)).is_err());
    }

    #[test]
    fn intersection_numbers() {
        let o = LrOracle::new();
        let four_lines: ProblemTuple = "2,4;2,4;2,4;2,4@4".parse().unwrap();
        assert_eq!(o.intersection_number(&four_lines).value, big(2));
        let ex1: ProblemTuple = "1,4;2,3@4".parse().unwrap();
        assert_eq!(o.intersection_number(&ex1).value, big(0));
        assert!(!o.is_nonzero_product(&ex1));
        let ex2: ProblemTuple = "1,4;2,4@4".parse().unwrap();
        assert!(o.is_nonzero_product(&ex2));
        let nontop = o.intersection_number(&ex2);
        assert!(!nontop.top_degree);
        let unit_point: ProblemTuple = "3,4;1,2@4".parse().unwrap();
        assert_eq!(o.intersection_number(&unit_point).value, big(1));
        // sigma_1^6 in Gr(2,5) is the Catalan number 5
        let six: ProblemTuple = "3,5;3,5;3,5;3,5;3,5;3,5@5".parse().unwrap();
        assert_eq!(o.intersection_number(&six).value, big(5));
        assert!(o.is_nonzero_product(&"2,4@4".parse().unwrap()));
    }

    #[test]
    fn saturation_examples() {
        let o = LrOracle::new();
        let r = o.saturation_check(&[p("1"), p("1")], 2, 2, 2).unwrap();
        assert_eq!(r, SaturationReport { p1: true, p2: true });
        let r = o.saturation_check(&[p(""), p("")], 2, 0, 3).unwrap();
        assert!(r.p1 && r.p2);
        assert!(matches!(
            o.saturation_check(&[p("3")], 2, 2, 2),
            Err(Error::WidthOverflow { .. })
        ));
        assert!(matches!(
            o.saturation_check(&[p("1,1,1")], 2, 2, 2),
            Err(Error::TooManyParts { .. })
        ));
    }

    #[test]
    fn symmetry_exhaustive() {
        let all: Vec<Partition> = (0..=8)
            .flat_map(|k| Partition::all_of_size_in_box(k, 8, 8))
            .collect();
        for nu in all.iter().filter(|nu| nu.size() <= 8) {
            for lambda in all.iter().filter(|l| nu.contains(l)) {
                for mu in all.iter().filter(|m| m.size() + lambda.size() == nu.size()) {
                    assert_eq!(
                        lr_coefficient(nu, lambda, mu),
                        lr_coefficient(nu, mu, lambda),
                        "{nu} / {lambda}, {mu}"
                    );
                }
            }
        }
    }
}
