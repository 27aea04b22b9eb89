//! The recursive Horn criterion.
//!
//! A product `prod_j omega_{I^j}` in `H*(Gr(r, n))` is nonzero iff for every
//! `0 < d <= r` and every `s`-tuple `K` of `d`-subsets of `[r]` whose product
//! is nonzero in `H*(Gr(d, r))` (mode B), or equals the point class there
//! (mode C), the inequality
//!
//! ```text
//! sum_j sum_{a in K^j} (n - r + a - i^j_a) - d (n - r) <= 0
//! ```
//!
//! holds. The `K`-tuples are themselves decided by the same criterion one
//! level down, so the engine memoizes one [`NonvanishingTable`] per
//! `(mode, d, r, s)`. The `d = r` table is the single tuple `([r], ..., [r])`
//! and contributes the codimension condition.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lr::LrOracle;
use crate::schubert::{horn_lhs, InequalityLhs, ProblemTuple, SchubertIndex};

pub const DEFAULT_DEPTH_BOUND: usize = 7;

/// Which family of lower-dimensional tuples labels the inequalities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Mode {
    /// Tuples with nonzero product.
    B,
    /// Tuples whose product is exactly the class of a point.
    C,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::B => "B",
            Mode::C => "C",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "B" | "b" => Ok(Mode::B),
            "C" | "c" => Ok(Mode::C),
            _ => Err(Error::Parse(format!("unknown mode {s:?}, expected B or C"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HornVerdict {
    pub nonzero: bool,
    /// First violated inequality in enumeration order, present iff `!nonzero`.
    pub witness: Option<InequalityLhs>,
    pub mode: Mode,
    /// Number of nested Grassmannian levels consulted.
    pub trace_depth: usize,
}

/// Nonvanishing `s`-tuples of `d`-subsets of `[r]`, i.e. of `Gr(d, r)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonvanishingTable {
    pub d: usize,
    pub r: usize,
    pub s: usize,
    #[serde(serialize_with = "tuple_strings")]
    pub tuples: Vec<Vec<SchubertIndex>>,
    /// Members of top degree whose intersection number is exactly 1.
    #[serde(serialize_with = "tuple_strings")]
    pub point_tuples: Vec<Vec<SchubertIndex>>,
    #[serde(skip)]
    pub mode: Mode,
    #[serde(skip)]
    pub depth: usize,
}

impl NonvanishingTable {
    pub fn labels(&self, mode: Mode) -> &[Vec<SchubertIndex>] {
        match mode {
            Mode::B => &self.tuples,
            Mode::C => &self.point_tuples,
        }
    }
}

fn tuple_strings<S: Serializer>(
    tuples: &[Vec<SchubertIndex>],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<Vec<String>> = tuples
        .iter()
        .map(|t| t.iter().map(|k| k.to_string()).collect())
        .collect();
    v.serialize(s)
}

/// An inequality label `(d, K)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct InequalityLabel {
    pub d: usize,
    pub ktuple: Vec<SchubertIndex>,
}

type TableKey = (Mode, usize, usize, usize);

/// Memoizing Horn decision procedure.
pub struct HornEngine {
    depth_bound: usize,
    oracle: Arc<LrOracle>,
    tables: RwLock<HashMap<TableKey, Arc<NonvanishingTable>>>,
}

impl Default for HornEngine {
    fn default() -> Self {
        Self::new(DEFAULT_DEPTH_BOUND)
    }
}

impl HornEngine {
    pub fn new(depth_bound: usize) -> Self {
        Self::with_oracle(depth_bound, Arc::new(LrOracle::new()))
    }

    /// The oracle supplies the point-class coefficients of mode C tables.
    pub fn with_oracle(depth_bound: usize, oracle: Arc<LrOracle>) -> Self {
        Self {
            depth_bound,
            oracle,
            tables: RwLock::new(HashMap::new()),
        }
    }

    pub fn depth_bound(&self) -> usize {
        self.depth_bound
    }

    pub fn oracle(&self) -> &LrOracle {
        &self.oracle
    }

    fn check_depth(&self, r: usize) -> Result<()> {
        if r > self.depth_bound {
            return Err(Error::DepthExceeded {
                requested: r,
                bound: self.depth_bound,
            });
        }
        Ok(())
    }

    pub fn horn_decide(&self, problem: &ProblemTuple, mode: Mode) -> Result<HornVerdict> {
        let (r, s) = (problem.r(), problem.s());
        self.check_depth(r)?;
        let mut depth = 0;
        for d in 1..=r {
            let table = self.build_table(d, r, s, mode)?;
            depth = depth.max(table.depth + 1);
            for ktuple in table.labels(mode) {
                let lhs = horn_lhs(problem, d, ktuple)?;
                if !lhs.is_satisfied() {
                    return Ok(HornVerdict {
                        nonzero: false,
                        witness: Some(lhs),
                        mode,
                        trace_depth: depth,
                    });
                }
            }
        }
        Ok(HornVerdict {
            nonzero: true,
            witness: None,
            mode,
            trace_depth: depth,
        })
    }

    /// Nonvanishing tuples of `Gr(d, r)`, decided recursively under `mode`.
    pub fn build_table(
        &self,
        d: usize,
        r: usize,
        s: usize,
        mode: Mode,
    ) -> Result<Arc<NonvanishingTable>> {
        if d == 0 || d > r {
            return Err(Error::ShapeMismatch(format!(
                "table needs 0 < d <= r, got d={d}, r={r}"
            )));
        }
        self.check_depth(d)?;
        let key = (mode, d, r, s);
        if let Some(t) = self.tables.read().unwrap().get(&key) {
            return Ok(t.clone());
        }
        let table = if d == r {
            let full = ProblemTuple::full(r, s).indices().to_vec();
            NonvanishingTable {
                d,
                r,
                s,
                tuples: vec![full.clone()],
                point_tuples: vec![full],
                mode,
                depth: 0,
            }
        } else {
            // lower levels first, so the parallel pass below only reads the memo
            for lower in 1..=d {
                self.build_table(lower, d, s, mode)?;
            }
            let decided = ProblemTuple::all(d, r, s)
                .into_par_iter()
                .map(|t| self.horn_decide(&t, mode).map(|v| (t, v)))
                .collect::<Result<Vec<_>>>()?;
            let depth = decided
                .iter()
                .map(|(_, v)| v.trace_depth)
                .max()
                .unwrap_or(0);
            let nonzero: Vec<ProblemTuple> = decided
                .into_iter()
                .filter_map(|(t, v)| v.nonzero.then_some(t))
                .collect();
            let one = BigUint::one();
            let point_tuples = nonzero
                .iter()
                .filter(|t| t.is_top_degree() && self.oracle.intersection_number(t).value == one)
                .map(|t| t.indices().to_vec())
                .collect();
            NonvanishingTable {
                d,
                r,
                s,
                tuples: nonzero.into_iter().map(|t| t.indices().to_vec()).collect(),
                point_tuples,
                mode,
                depth,
            }
        };
        let mut tables = self.tables.write().unwrap();
        Ok(tables.entry(key).or_insert_with(|| Arc::new(table)).clone())
    }

    /// The labels of every inequality a tuple in `Gr(r, n)` must satisfy, in
    /// the order [`horn_decide`](Self::horn_decide) checks them.
    pub fn enumerate_inequalities(
        &self,
        r: usize,
        n: usize,
        s: usize,
        mode: Mode,
    ) -> Result<Vec<InequalityLabel>> {
        if r > n {
            return Err(Error::ShapeMismatch(format!("r={r} exceeds n={n}")));
        }
        self.check_depth(r)?;
        let mut out = Vec::new();
        for d in 1..=r {
            let table = self.build_table(d, r, s, mode)?;
            out.extend(table.labels(mode).iter().map(|k| InequalityLabel {
                d,
                ktuple: k.clone(),
            }));
        }
        Ok(out)
    }
}
