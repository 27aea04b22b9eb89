//! Parabolic slopes and the Harder–Narasimhan contradictor.
//!
//! Weights `w^j_a` attached to the flags on `V` give every subspace `S` in
//! position `K` the slope `sum_j sum_{a in K^j} w^j_a / dim S`. For generic
//! flags the positions that occur are exactly the tuples with nonzero
//! product, so semistability and the maximal destabilizing position can be
//! read off the Horn tables without touching actual subspaces.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_rational::Rational64;
use num_traits::One;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::horn::{HornEngine, Mode};
use crate::lr::decimal;
use crate::schubert::{horn_lhs, InequalityLhs, ProblemTuple, SchubertIndex};

/// Weakly decreasing integer weights, one sequence of length `r` per flag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParabolicData {
    r: usize,
    weights: Vec<Vec<i64>>,
}

impl ParabolicData {
    pub fn new(r: usize, weights: Vec<Vec<i64>>) -> Result<Self> {
        for (j, w) in weights.iter().enumerate() {
            if w.len() != r {
                return Err(Error::ShapeMismatch(format!(
                    "factor {j} has {} weights, expected {r}",
                    w.len()
                )));
            }
            if w.windows(2).any(|p| p[0] < p[1]) {
                return Err(Error::InvalidWeights(j));
            }
        }
        Ok(Self { r, weights })
    }

    /// `w^j_a = n - r + a - i^j_a`.
    pub fn from_problem(problem: &ProblemTuple) -> Self {
        let weights = problem
            .indices()
            .iter()
            .map(|i| i.weights().into_iter().map(|w| w as i64).collect())
            .collect();
        Self {
            r: problem.r(),
            weights,
        }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    pub fn scaled(&self, factor: i64) -> Self {
        assert!(factor > 0);
        Self {
            r: self.r,
            weights: self
                .weights
                .iter()
                .map(|w| w.iter().map(|x| x * factor).collect())
                .collect(),
        }
    }

    /// Slope of a subspace of dimension `d` in position `ktuple`.
    pub fn slope(&self, d: usize, ktuple: &[SchubertIndex]) -> Result<Rational64> {
        if d == 0 || d > self.r {
            return Err(Error::ShapeMismatch(format!(
                "slope needs 1 <= d <= {}, got {d}",
                self.r
            )));
        }
        if ktuple.len() != self.s() || ktuple.iter().any(|k| k.n() != self.r || k.r() != d) {
            return Err(Error::ShapeMismatch(format!(
                "expected {} subsets of [{}] of size {d}",
                self.s(),
                self.r
            )));
        }
        let total: i64 = self
            .weights
            .iter()
            .zip(ktuple)
            .map(|(w, k)| k.elems().iter().map(|&a| w[a - 1]).sum::<i64>())
            .sum();
        Ok(Rational64::new(total, d as i64))
    }

    /// Slope of the whole space.
    pub fn total_slope(&self) -> Rational64 {
        let total: i64 = self.weights.iter().flatten().sum();
        Rational64::new(total, self.r.max(1) as i64)
    }
}

fn rational_string<S: Serializer>(q: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", q.numer(), q.denom()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SlopeReport {
    pub d: usize,
    pub ktuple: Vec<SchubertIndex>,
    #[serde(serialize_with = "rational_string")]
    pub slope: Rational64,
}

/// Positions with nonzero product in `Gr(d, r)` for `0 < d < r` whose slope
/// exceeds that of `V`.
pub fn destabilizing_positions(
    data: &ParabolicData,
    engine: &HornEngine,
) -> Result<Vec<SlopeReport>> {
    let (r, s) = (data.r(), data.s());
    let total = data.total_slope();
    let mut out = Vec::new();
    for d in 1..r {
        let table = engine.build_table(d, r, s, Mode::B)?;
        for k in &table.tuples {
            let slope = data.slope(d, k)?;
            if slope > total {
                out.push(SlopeReport {
                    d,
                    ktuple: k.clone(),
                    slope,
                });
            }
        }
    }
    Ok(out)
}

pub fn is_semistable(data: &ParabolicData, engine: &HornEngine) -> Result<bool> {
    Ok(destabilizing_positions(data, engine)?.is_empty())
}

/// Order on candidates: larger slope first, then larger dimension, then the
/// lexicographic order of the position tuple.
fn contradictor_order(a: &SlopeReport, b: &SlopeReport) -> Ordering {
    b.slope
        .cmp(&a.slope)
        .then(b.d.cmp(&a.d))
        .then_with(|| a.ktuple.cmp(&b.ktuple))
}

/// The maximal destabilizing position and the violated inequality it gives.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HnCertificate {
    pub contradictor: SlopeReport,
    /// Positions of the contradictor composed into `[n]`.
    pub ltuple: Vec<SchubertIndex>,
    pub violated: InequalityLhs,
    /// Intersection number of the contradictor's tuple in `Gr(d, r)`.
    #[serde(serialize_with = "decimal")]
    pub point_check: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum HnOutcome {
    Semistable,
    /// Total codimension exceeds `dim Gr(r, n)`; no parabolic argument needed.
    CodimensionViolated {
        violated: InequalityLhs,
    },
    Unstable(HnCertificate),
    /// Below top degree `V` can be unstable while every inequality holds: the
    /// maximal contradictor then has slope at most `n - r`.
    UnstableWithinBound {
        contradictor: SlopeReport,
        #[serde(serialize_with = "decimal")]
        point_check: BigUint,
    },
}

/// Harder–Narasimhan analysis of the weights `n - r + a - i^j_a`.
///
/// Candidates are visited in [`contradictor_order`] and the first whose
/// product in `Gr(d, r)` is the point class is taken as the contradictor.
/// Its slope is maximal, so if any inequality fails, its own does.
pub fn hn_certificate(problem: &ProblemTuple, engine: &HornEngine) -> Result<HnOutcome> {
    let (r, n) = (problem.r(), problem.n());
    if problem.total_codim() > problem.grassmannian_dim() {
        let full = ProblemTuple::full(r, problem.s());
        return Ok(HnOutcome::CodimensionViolated {
            violated: horn_lhs(problem, r, full.indices())?,
        });
    }
    let data = ParabolicData::from_problem(problem);
    let mut candidates = destabilizing_positions(&data, engine)?;
    if candidates.is_empty() {
        return Ok(HnOutcome::Semistable);
    }
    candidates.sort_by(contradictor_order);
    let one = BigUint::one();
    for c in candidates {
        let lower = ProblemTuple::new(c.ktuple.clone())?;
        if !lower.is_top_degree() {
            continue;
        }
        let point_check = engine.oracle().intersection_number(&lower).value;
        if point_check != one {
            continue;
        }
        let violated = horn_lhs(problem, c.d, &c.ktuple)?;
        if violated.is_satisfied() {
            return Ok(HnOutcome::UnstableWithinBound {
                contradictor: c,
                point_check,
            });
        }
        let ltuple = problem
            .indices()
            .iter()
            .zip(&c.ktuple)
            .map(|(i, k)| i.compose(k))
            .collect::<Result<Vec<_>>>()?;
        debug_assert!(ltuple.iter().all(|l| l.n() == n));
        return Ok(HnOutcome::Unstable(HnCertificate {
            contradictor: c,
            ltuple,
            violated,
            point_check,
        }));
    }
    Err(Error::CandidatesExhausted)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> ProblemTuple {
        s.parse().unwrap()
    }

    #[test]
    fn weights_and_slopes() {
        let data = ParabolicData::from_problem(&t("1,4;2,3@4"));
        assert_eq!(data.weights(), &[vec![2, 0], vec![1, 1]]);
        assert_eq!(data.total_slope(), Rational64::from_integer(2));
        let k: Vec<SchubertIndex> = vec![
            SchubertIndex::new(2, vec![1]).unwrap(),
            SchubertIndex::new(2, vec![2]).unwrap(),
        ];
        assert_eq!(data.slope(1, &k).unwrap(), Rational64::from_integer(3));

        let fundamental = ParabolicData::from_problem(&t("3,4;3,4@4"));
        assert!(fundamental.weights().iter().flatten().all(|&w| w == 0));
        let point = ParabolicData::from_problem(&t("1,2@5"));
        assert_eq!(point.weights(), &[vec![3, 3]]);
    }

    #[test]
    fn rejects_increasing_weights() {
        assert_eq!(
            ParabolicData::new(2, vec![vec![1, 2]]),
            Err(Error::InvalidWeights(0))
        );
        assert!(ParabolicData::new(2, vec![vec![2, 2], vec![3, 0]]).is_ok());
    }

    #[test]
    fn semistability_of_worked_examples() {
        let e = HornEngine::default();
        assert!(!is_semistable(&ParabolicData::from_problem(&t("1,4;2,3@4")), &e).unwrap());
        // below top degree: ({1},{2}) has slope 2 above the total slope 3/2
        assert!(!is_semistable(&ParabolicData::from_problem(&t("1,4;2,4@4")), &e).unwrap());
        assert!(is_semistable(&ParabolicData::from_problem(&t("1,4;2,4;2,4@4")), &e).unwrap());
        let zero = ParabolicData::new(3, vec![vec![0; 3]; 2]).unwrap();
        assert!(is_semistable(&zero, &e).unwrap());
    }

    #[test]
    fn certificate_for_first_worked_example() {
        let e = HornEngine::default();
        let HnOutcome::Unstable(cert) = hn_certificate(&t("1,4;2,3@4"), &e).unwrap() else {
            panic!("expected a contradictor");
        };
        assert_eq!(cert.contradictor.d, 1);
        assert_eq!(cert.violated.ktuple_string(), "1;2");
        assert_eq!(cert.violated.value, 1);
        assert_eq!(cert.point_check, BigUint::one());
        let json = serde_json::to_value(HnOutcome::Unstable(cert)).unwrap();
        assert_eq!(json["outcome"], "unstable");
        assert_eq!(json["contradictor"]["slope"], "3/1");
    }

    #[test]
    fn routing() {
        let e = HornEngine::default();
        assert_eq!(
            hn_certificate(&t("1,4;2,4;2,4@4"), &e).unwrap(),
            HnOutcome::Semistable
        );
        let HnOutcome::UnstableWithinBound { contradictor, .. } =
            hn_certificate(&t("1,4;2,4@4"), &e).unwrap()
        else {
            panic!("expected an unstable verdict without violation");
        };
        assert_eq!(contradictor.slope, Rational64::from_integer(2));
        assert!(matches!(
            hn_certificate(&t("1,2;1,3@4"), &e).unwrap(),
            HnOutcome::CodimensionViolated { violated } if violated.value == 3
        ));
    }
}
