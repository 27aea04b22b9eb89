//! Combinatorics of Schubert indices in Grassmannians.
//!
//! A Schubert class in `H*(Gr(r, n))` is labelled by a strictly increasing
//! subset `I = {i_1 < ... < i_r}` of `[n]`. All positions are 1-based. The
//! number `n - r + a - i_a` attached to the `a`-th element shows up in the
//! codimension, in the bijection with partitions, in the Horn inequalities and
//! in the parabolic weights, so it has its own accessor ([`SchubertIndex::weight`]).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Strictly increasing subset of `[n]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SchubertIndex {
    n: usize,
    elems: Vec<usize>,
}

impl SchubertIndex {
    pub fn new(n: usize, elems: Vec<usize>) -> Result<Self> {
        let invalid = |reason| Error::InvalidIndex {
            n,
            elems: elems.clone(),
            reason,
        };
        if elems.len() > n {
            return Err(invalid("more elements than the ambient dimension"));
        }
        if elems.first().is_some_and(|&e| e == 0) {
            return Err(invalid("positions are 1-based"));
        }
        if elems.last().is_some_and(|&e| e > n) {
            return Err(invalid("element exceeds n"));
        }
        if elems.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("elements must be strictly increasing"));
        }
        Ok(Self { n, elems })
    }

    /// `{n-r+1, ..., n}`, the unit class.
    pub fn fundamental(r: usize, n: usize) -> Self {
        assert!(r <= n);
        Self {
            n,
            elems: (n - r + 1..=n).collect(),
        }
    }

    /// `{1, ..., r}`, the class of a point.
    pub fn point(r: usize, n: usize) -> Self {
        assert!(r <= n);
        Self {
            n,
            elems: (1..=r).collect(),
        }
    }

    pub fn empty(n: usize) -> Self {
        Self { n, elems: vec![] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.elems.len()
    }

    pub fn elems(&self) -> &[usize] {
        &self.elems
    }

    /// The element `i_a` (1-based `a`).
    pub fn get(&self, a: usize) -> usize {
        self.elems[a - 1]
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elems.binary_search(&x).is_ok()
    }

    /// `n - r + a - i_a`. Nonnegative and weakly decreasing in `a`.
    pub fn weight(&self, a: usize) -> usize {
        self.n - self.r() + a - self.get(a)
    }

    pub fn weights(&self) -> Vec<usize> {
        (1..=self.r()).map(|a| self.weight(a)).collect()
    }

    /// Codimension of the Schubert variety: `sum_a (n - r + a - i_a)`.
    pub fn codim(&self) -> usize {
        (1..=self.r()).map(|a| self.weight(a)).sum()
    }

    pub fn to_partition(&self) -> Partition {
        Partition::from_parts_unchecked(self.weights())
    }

    /// Inverse of [`to_partition`](Self::to_partition): `i_a = (n - r) + a - lambda_a`.
    pub fn from_partition(lambda: &Partition, r: usize, n: usize) -> Result<Self> {
        if r > n {
            return Err(Error::ShapeMismatch(format!("r={r} exceeds n={n}")));
        }
        let cols = n - r;
        if lambda.len() > r || lambda.first() > cols {
            return Err(Error::RectangleOverflow {
                partition: lambda.to_string(),
                rows: r,
                cols,
            });
        }
        let elems = (1..=r).map(|a| cols + a - lambda.part(a)).collect();
        Ok(Self { n, elems })
    }

    /// The index of the same class under `Gr(r, n) = Gr(n - r, n)`:
    /// `{n + 1 - i : i in [n] \ I}`.
    pub fn dual(&self) -> Self {
        let mut elems: Vec<usize> = (1..=self.n)
            .filter(|i| !self.contains(*i))
            .map(|i| self.n + 1 - i)
            .collect();
        elems.sort_unstable();
        Self { n: self.n, elems }
    }

    /// `{i_a : a in K}` for `K` a subset of `[r]` and `self = I` of size `r`.
    pub fn compose(&self, k: &SchubertIndex) -> Result<Self> {
        if k.n() != self.r() {
            return Err(Error::ShapeMismatch(format!(
                "inner index lives in [{}] but outer index has {} elements",
                k.n(),
                self.r()
            )));
        }
        Ok(Self {
            n: self.n,
            elems: k.elems.iter().map(|&a| self.get(a)).collect(),
        })
    }

    /// `i_a <= j_a` for every `a`: the Schubert variety of `self` lies inside
    /// the one of `other` (for a common flag).
    pub fn le(&self, other: &SchubertIndex) -> bool {
        self.n == other.n
            && self.r() == other.r()
            && self.elems.iter().zip(&other.elems).all(|(a, b)| a <= b)
    }

    /// All `r`-subsets of `[n]` in lexicographic order.
    pub fn all(r: usize, n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(r);
        fn rec(
            start: usize,
            r: usize,
            n: usize,
            cur: &mut Vec<usize>,
            out: &mut Vec<SchubertIndex>,
        ) {
            if cur.len() == r {
                out.push(SchubertIndex {
                    n,
                    elems: cur.clone(),
                });
                return;
            }
            let remaining = r - cur.len();
            for x in start..=n + 1 - remaining {
                cur.push(x);
                rec(x + 1, r, n, cur, out);
                cur.pop();
            }
        }
        if r <= n {
            rec(1, r, n, &mut cur, &mut out);
        }
        out
    }

    /// Parse `"1,4"` as a subset of `[n]`; the empty string is the empty index.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let s = s.trim();
        let elems = if s.is_empty() {
            vec![]
        } else {
            s.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|e| Error::Parse(format!("bad index element {t:?}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?
        };
        Self::new(n, elems)
    }
}

impl fmt::Display for SchubertIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.elems)
    }
}

impl Serialize for SchubertIndex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, xs: &[usize]) -> fmt::Result {
    for (k, x) in xs.iter().enumerate() {
        if k > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

/// Weakly decreasing sequence of positive integers (trailing zeros dropped).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Self::from_parts_unchecked(parts))
    }

    pub(crate) fn from_parts_unchecked(mut parts: Vec<usize>) -> Self {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Self { parts }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// The `rows x cols` rectangle `(cols^rows)`.
    pub fn rectangle(rows: usize, cols: usize) -> Self {
        Self::from_parts_unchecked(vec![cols; rows])
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// `lambda_a` (1-based), zero past the end.
    pub fn part(&self, a: usize) -> usize {
        self.parts.get(a - 1).copied().unwrap_or(0)
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `lambda_1`, zero for the empty partition.
    pub fn first(&self) -> usize {
        self.part(1)
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn fits(&self, rows: usize, cols: usize) -> bool {
        self.len() <= rows && self.first() <= cols
    }

    /// Componentwise `self >= other`, i.e. the diagram of `other` sits inside.
    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.parts.iter().zip(&self.parts).all(|(o, s)| o <= s)
    }

    pub fn scale(&self, factor: usize) -> Self {
        Self::from_parts_unchecked(self.parts.iter().map(|p| p * factor).collect())
    }

    pub fn transpose(&self) -> Self {
        let parts = (1..=self.first())
            .map(|c| self.parts.iter().filter(|&&p| p >= c).count())
            .collect();
        Self { parts }
    }

    /// All partitions inside the `rows x cols` rectangle.
    pub fn all_in_box(rows: usize, cols: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(rows);
        fn rec(rows: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if cur.len() == rows {
                out.push(Partition::from_parts_unchecked(cur.clone()));
                return;
            }
            for p in (0..=max).rev() {
                cur.push(p);
                rec(rows, p, cur, out);
                cur.pop();
            }
        }
        rec(rows, cols, &mut cur, &mut out);
        out
    }

    /// All partitions of `size` inside the `rows x cols` rectangle.
    pub fn all_of_size_in_box(size: usize, rows: usize, cols: usize) -> Vec<Self> {
        Self::all_in_box(rows, cols)
            .into_iter()
            .filter(|p| p.size() == size)
            .collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.parts)
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad part {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// An `s`-tuple of indices sharing the same `(r, n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProblemTuple {
    r: usize,
    n: usize,
    indices: Vec<SchubertIndex>,
}

impl ProblemTuple {
    pub fn new(indices: Vec<SchubertIndex>) -> Result<Self> {
        let first = indices
            .first()
            .ok_or_else(|| Error::ShapeMismatch("a problem needs at least one index".into()))?;
        let (r, n) = (first.r(), first.n());
        if let Some(bad) = indices.iter().find(|i| i.r() != r || i.n() != n) {
            return Err(Error::ShapeMismatch(format!(
                "index {bad} in [{}] does not match Gr({r},{n})",
                bad.n()
            )));
        }
        Ok(Self { r, n, indices })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[SchubertIndex] {
        &self.indices
    }

    /// `dim Gr(r, n) = r (n - r)`.
    pub fn grassmannian_dim(&self) -> usize {
        self.r * (self.n - self.r)
    }

    pub fn total_codim(&self) -> usize {
        self.indices.iter().map(SchubertIndex::codim).sum()
    }

    /// `r(n-r) - sum_j codim(I^j)`; negative when overdetermined.
    pub fn expected_dim(&self) -> i64 {
        self.grassmannian_dim() as i64 - self.total_codim() as i64
    }

    pub fn is_top_degree(&self) -> bool {
        self.expected_dim() == 0
    }

    pub fn dual(&self) -> Self {
        Self {
            r: self.n - self.r,
            n: self.n,
            indices: self.indices.iter().map(SchubertIndex::dual).collect(),
        }
    }

    /// The `s`-tuple `([r], ..., [r])` of fundamental classes of `Gr(r, r)`.
    pub fn full(r: usize, s: usize) -> Self {
        Self {
            r,
            n: r,
            indices: vec![SchubertIndex::fundamental(r, r); s],
        }
    }

    /// All `s`-tuples in `Gr(r, n)`, lexicographic in the tuple order.
    pub fn all(r: usize, n: usize, s: usize) -> Vec<Self> {
        let base = SchubertIndex::all(r, n);
        let mut out = Vec::new();
        let mut cur: Vec<SchubertIndex> = Vec::with_capacity(s);
        fn rec(
            base: &[SchubertIndex],
            s: usize,
            r: usize,
            n: usize,
            cur: &mut Vec<SchubertIndex>,
            out: &mut Vec<ProblemTuple>,
        ) {
            if cur.len() == s {
                out.push(ProblemTuple {
                    r,
                    n,
                    indices: cur.clone(),
                });
                return;
            }
            for i in base {
                cur.push(i.clone());
                rec(base, s, r, n, cur, out);
                cur.pop();
            }
        }
        if s > 0 {
            rec(&base, s, r, n, &mut cur, &mut out);
        }
        out
    }
}

impl fmt::Display for ProblemTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, i) in self.indices.iter().enumerate() {
            if k > 0 {
                f.write_str(";")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "@{}", self.n)
    }
}

impl FromStr for ProblemTuple {
    type Err = Error;

    /// `"1,4;2,3@4"`.
    fn from_str(s: &str) -> Result<Self> {
        let (body, n) = s
            .trim()
            .rsplit_once('@')
            .ok_or_else(|| Error::Parse(format!("missing '@n' suffix in {s:?}")))?;
        let n: usize = n
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("bad ambient dimension {n:?}: {e}")))?;
        let indices = body
            .split(';')
            .map(|t| SchubertIndex::parse(t, n))
            .collect::<Result<Vec<_>>>()?;
        Self::new(indices)
    }
}

impl Serialize for ProblemTuple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ProblemTuple {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Left-hand side of a Horn inequality
/// `sum_j sum_{a in K^j} (n - r + a - i^j_a) - d (n - r) <= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InequalityLhs {
    pub d: usize,
    pub ktuple: Vec<SchubertIndex>,
    pub value: i64,
}

impl InequalityLhs {
    pub fn is_satisfied(&self) -> bool {
        self.value <= 0
    }

    pub fn ktuple_string(&self) -> String {
        self.ktuple
            .iter()
            .map(|k| k.to_string())
            .collect::<Vec<_>>()
            .join(";")
    }
}

fn check_ktuple(problem: &ProblemTuple, d: usize, ktuple: &[SchubertIndex]) -> Result<()> {
    if ktuple.len() != problem.s() {
        return Err(Error::ShapeMismatch(format!(
            "expected {} subsets, got {}",
            problem.s(),
            ktuple.len()
        )));
    }
    if let Some(k) = ktuple.iter().find(|k| k.n() != problem.r() || k.r() != d) {
        return Err(Error::ShapeMismatch(format!(
            "subset {k} must have {d} elements of [{}]",
            problem.r()
        )));
    }
    Ok(())
}

/// Evaluate the Horn inequality labelled by `(d, ktuple)` on `problem`.
pub fn horn_lhs(
    problem: &ProblemTuple,
    d: usize,
    ktuple: &[SchubertIndex],
) -> Result<InequalityLhs> {
    check_ktuple(problem, d, ktuple)?;
    let sum: usize = problem
        .indices()
        .iter()
        .zip(ktuple)
        .map(|(i, k)| k.elems().iter().map(|&a| i.weight(a)).sum::<usize>())
        .sum();
    let value = sum as i64 - (d * (problem.n() - problem.r())) as i64;
    Ok(InequalityLhs {
        d,
        ktuple: ktuple.to_vec(),
        value,
    })
}

/// Evaluates both sides of
/// `dim(S, V, E(V)) - dim(S, W, E) = sum_j sum_{a in K^j} (n - r + a - i^j_a) - d (n - r)`
/// independently and returns the common value.
///
/// The left side uses expected dimensions of the `K`-tuple in `Gr(d, r)` and of
/// the composed `L`-tuple (`L^j = {i^j_a : a in K^j}`) in `Gr(d, n)`.
pub fn dim_difference_identity(
    problem: &ProblemTuple,
    d: usize,
    ktuple: &[SchubertIndex],
) -> Result<i64> {
    check_ktuple(problem, d, ktuple)?;
    let in_v = expected_dim_of(d, problem.r(), ktuple.iter().map(SchubertIndex::codim));
    let ltuple = problem
        .indices()
        .iter()
        .zip(ktuple)
        .map(|(i, k)| i.compose(k))
        .collect::<Result<Vec<_>>>()?;
    let in_w = expected_dim_of(d, problem.n(), ltuple.iter().map(SchubertIndex::codim));
    let lhs = in_v - in_w;
    let rhs = horn_lhs(problem, d, ktuple)?.value;
    if lhs != rhs {
        return Err(Error::IdentityViolation { lhs, rhs });
    }
    Ok(lhs)
}

/// `d(m - d) - sum codims`: expected dimension of a problem in `Gr(d, m)`.
pub fn expected_dim_of(d: usize, m: usize, codims: impl Iterator<Item = usize>) -> i64 {
    (d * (m - d)) as i64 - codims.sum::<usize>() as i64
}
