//! Counting points of zero-dimensional Schubert problems over tiny prime
//! fields by enumerating the whole Grassmannian.

use std::collections::BTreeMap;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::probe::{
    position_index, random_flag, FlagBasis, Matrix, PrimeField, Quotient, Subspace,
};
use crate::schubert::{ProblemTuple, SchubertIndex};

pub const MAX_POINTS: u128 = 1_000_000;

/// `[n choose k]_q` by the product formula, saturating at `u128::MAX`.
pub fn gaussian_binomial(n: usize, k: usize, q: u64) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let mut acc: u128 = 1;
    // each partial product is itself a Gaussian binomial, so division is exact
    for i in 0..k {
        let Some(top) = q
            .checked_pow((n - i) as u32)
            .and_then(|x| acc.checked_mul(x - 1))
        else {
            return u128::MAX;
        };
        acc = top / (q.pow((i + 1) as u32) - 1);
    }
    acc
}

fn small_field(q: u64) -> Result<PrimeField> {
    if !matches!(q, 2 | 3 | 5) {
        return Err(Error::UnsupportedField(q));
    }
    PrimeField::new(q)
}

/// Every point of `Gr(r, n)(F_q)`, one reduced row echelon representative
/// each (stored as the column basis of the row space).
#[derive(Clone, Debug)]
pub struct EnumeratedGrassmannian {
    pub r: usize,
    pub n: usize,
    pub q: u64,
    pub points: Vec<Subspace>,
}

pub fn enumerate_grassmannian(r: usize, n: usize, q: u64) -> Result<EnumeratedGrassmannian> {
    let field = small_field(q)?;
    if r > n {
        return Err(Error::ShapeMismatch(format!("r={r} exceeds n={n}")));
    }
    let size = gaussian_binomial(n, r, q);
    if size > MAX_POINTS {
        return Err(Error::SizeExceeded {
            requested: size,
            limit: MAX_POINTS,
        });
    }
    let mut points = Vec::with_capacity(size as usize);
    for pivots in SchubertIndex::all(r, n) {
        // row a has free entries right of its pivot, outside pivot columns
        let free: Vec<(usize, usize)> = (0..r)
            .flat_map(|a| {
                let p = pivots.get(a + 1) - 1;
                (p + 1..n)
                    .filter(|c| !pivots.contains(c + 1))
                    .map(move |c| (a, c))
            })
            .collect();
        let mut digits = vec![0u64; free.len()];
        loop {
            let mut m = Matrix::zeros(field, n, r);
            for a in 0..r {
                m.set(pivots.get(a + 1) - 1, a, 1);
            }
            for (&(a, c), &x) in free.iter().zip(&digits) {
                m.set(c, a, x);
            }
            points.push(Subspace::new(m).expect("echelon form has full rank"));
            // odometer over F_q^free
            let Some(pos) = digits.iter().position(|&x| x + 1 < q) else {
                break;
            };
            digits[pos] += 1;
            digits[..pos].iter_mut().for_each(|x| *x = 0);
        }
    }
    debug_assert_eq!(points.len() as u128, size);
    Ok(EnumeratedGrassmannian { r, n, q, points })
}

#[derive(Clone, Debug)]
pub struct SolutionCount {
    pub count: usize,
    /// Open-cell positions of the solutions, with multiplicities.
    pub histogram: BTreeMap<Vec<SchubertIndex>, usize>,
    pub solutions: Vec<Subspace>,
}

/// Points of `∩_j Ω_{I^j}(E^j)`: subspaces whose position is componentwise at
/// most `I^j` for every flag.
pub fn count_solutions(
    problem: &ProblemTuple,
    flags: &[FlagBasis],
    grassmannian: &EnumeratedGrassmannian,
) -> Result<SolutionCount> {
    let expected = problem.expected_dim();
    if expected != 0 {
        return Err(Error::NotZeroDimensional(expected));
    }
    if grassmannian.r != problem.r() || grassmannian.n != problem.n() || flags.len() != problem.s()
    {
        return Err(Error::ShapeMismatch(format!(
            "problem {problem} does not match Gr({}, {}) with {} flags",
            grassmannian.r,
            grassmannian.n,
            flags.len()
        )));
    }
    let hits: Vec<(Vec<SchubertIndex>, &Subspace)> = grassmannian
        .points
        .par_iter()
        .filter_map(|v| {
            let mut positions = Vec::with_capacity(flags.len());
            for (e, i) in flags.iter().zip(problem.indices()) {
                let pos = position_index(v, e);
                if !pos.le(i) {
                    return None;
                }
                positions.push(pos);
            }
            Some((positions, v))
        })
        .collect();
    let mut histogram = BTreeMap::new();
    for (p, _) in &hits {
        *histogram.entry(p.clone()).or_insert(0) += 1;
    }
    Ok(SolutionCount {
        count: hits.len(),
        histogram,
        solutions: hits.into_iter().map(|(_, v)| v.clone()).collect(),
    })
}

/// Linearized conditions at `v` for one flag: rows cut out
/// `{φ : φ(V ∩ E_{i_a}) ⊆ (E_{i_a} + V) / V}` in `Hom(V, W / V)`, with `φ`
/// stored row-major as a `q x r` matrix over `V`'s basis and the quotient
/// coordinates of `quotient`.
///
/// This is the tangent space at `v` of the locus where every
/// `dim(V ∩ E_{i_a})` is at least its value at `v`.
pub fn tangent_constraints(
    v: &Subspace,
    e: &FlagBasis,
    index: &SchubertIndex,
    quotient: &Quotient,
) -> Matrix {
    let field = e.field();
    let r = v.dim();
    let q = quotient.dim();
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for &i in index.elems() {
        let meet = v.intersection_coords(&e.subspace(i));
        let image = quotient.proj.mul(&e.basis().leading_columns(i));
        let annihilator = image.transpose().nullspace();
        for nu in 0..annihilator.cols() {
            for y in 0..meet.cols() {
                let mut row = vec![0u64; q * r];
                for x in 0..q {
                    for b in 0..r {
                        row[x * r + b] = field.mul(annihilator.get(x, nu), meet.get(b, y));
                    }
                }
                rows.push(row);
            }
        }
    }
    let mut m = Matrix::zeros(field, rows.len(), q * r);
    for (k, row) in rows.iter().enumerate() {
        for (c, &x) in row.iter().enumerate() {
            m.set(k, c, x);
        }
    }
    m
}

/// A solution is transverse when each Schubert variety is smooth at it with
/// the expected tangent space (the linearized conditions of
/// [`tangent_constraints`] have rank equal to the codimension), and those
/// tangent spaces meet in zero.
///
/// Points outside the open cells are allowed: the divisor of lines meeting a
/// line is smooth away from that line, whatever the rest of the flag does.
pub fn is_transverse(problem: &ProblemTuple, v: &Subspace, flags: &[FlagBasis]) -> bool {
    let quotient = Quotient::new(v);
    let mut all: Option<Matrix> = None;
    for (e, i) in flags.iter().zip(problem.indices()) {
        let rows = tangent_constraints(v, e, i, &quotient);
        if rows.rank() != i.codim() {
            return false;
        }
        all = Some(match all {
            None => rows,
            Some(acc) => acc.transpose().hcat(&rows.transpose()).transpose(),
        });
    }
    let dim = problem.grassmannian_dim();
    all.map_or(dim == 0, |m| m.rank() == dim)
}

/// One row of the count distribution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlagSample {
    pub seed: u64,
    pub count: usize,
    /// Some solution fails the transversality check.
    pub degenerate: bool,
}

pub fn random_flags(problem: &ProblemTuple, field: PrimeField, seed: u64) -> Vec<FlagBasis> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..problem.s())
        .map(|_| random_flag(problem.n(), field, &mut rng))
        .collect()
}

/// Counts over `samples` flag tuples, each drawn from its own seed; the
/// seeds come from a generator seeded with `base_seed`.
pub fn sample_counts(
    problem: &ProblemTuple,
    q: u64,
    samples: usize,
    base_seed: u64,
) -> Result<Vec<FlagSample>> {
    let field = small_field(q)?;
    let grassmannian = enumerate_grassmannian(problem.r(), problem.n(), q)?;
    let mut seeder = ChaCha8Rng::seed_from_u64(base_seed);
    let seeds: Vec<u64> = (0..samples).map(|_| seeder.next_u64()).collect();
    seeds
        .into_iter()
        .map(|seed| {
            let flags = random_flags(problem, field, seed);
            let found = count_solutions(problem, &flags, &grassmannian)?;
            let degenerate = found
                .solutions
                .iter()
                .any(|v| !is_transverse(problem, v, &flags));
            Ok(FlagSample {
                seed,
                count: found.count,
                degenerate,
            })
        })
        .collect()
}

pub fn samples_csv(samples: &[FlagSample]) -> String {
    let mut out = String::from("seed,count,degenerate\n");
    for s in samples {
        out.push_str(&format!("{},{},{}\n", s.seed, s.count, s.degenerate));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> ProblemTuple {
        s.parse().unwrap()
    }

    #[test]
    fn grassmannian_sizes() {
        assert_eq!(enumerate_grassmannian(2, 4, 2).unwrap().points.len(), 35);
        assert_eq!(enumerate_grassmannian(1, 2, 3).unwrap().points.len(), 4);
        assert_eq!(enumerate_grassmannian(3, 3, 5).unwrap().points.len(), 1);
        assert_eq!(enumerate_grassmannian(0, 3, 5).unwrap().points.len(), 1);
    }

    #[test]
    fn rejects_unsupported_inputs() {
        assert_eq!(
            enumerate_grassmannian(2, 4, 4).unwrap_err(),
            Error::UnsupportedField(4)
        );
        assert_eq!(
            enumerate_grassmannian(2, 4, 7).unwrap_err(),
            Error::UnsupportedField(7)
        );
        assert!(matches!(
            enumerate_grassmannian(4, 9, 5),
            Err(Error::SizeExceeded { .. })
        ));
        let g = enumerate_grassmannian(2, 4, 2).unwrap();
        let flags = random_flags(&t("2,4;2,4@4"), PrimeField::new(2).unwrap(), 0);
        assert_eq!(
            count_solutions(&t("2,4;2,4@4"), &flags, &g).unwrap_err(),
            Error::NotZeroDimensional(2)
        );
    }

    #[test]
    fn point_condition_has_one_solution() {
        let p = t("1,2@4");
        let g = enumerate_grassmannian(2, 4, 3).unwrap();
        for seed in 0..5 {
            let flags = random_flags(&p, PrimeField::new(3).unwrap(), seed);
            let found = count_solutions(&p, &flags, &g).unwrap();
            assert_eq!(found.count, 1);
            assert!(found.solutions[0].same_as(&flags[0].subspace(2)));
            assert!(is_transverse(&p, &found.solutions[0], &flags));
        }
    }

    #[test]
    fn smooth_points_off_the_open_cell_are_transverse() {
        let p = t("2,4;2,4;2,4;2,4@4");
        let field = PrimeField::new(5).unwrap();
        let g = enumerate_grassmannian(2, 4, 5).unwrap();
        let mut seen = false;
        for seed in 0..20 {
            let flags = random_flags(&p, field, seed);
            let found = count_solutions(&p, &flags, &g).unwrap();
            let off_cell = found
                .histogram
                .keys()
                .any(|pos| pos.iter().any(|i| i.elems() != [2, 4]));
            if off_cell && found.solutions.iter().all(|v| is_transverse(&p, v, &flags)) {
                assert_eq!(found.count, 2);
                seen = true;
            }
        }
        assert!(seen);
    }

    #[test]
    fn coincident_lines_are_degenerate() {
        let p = t("2,4;2,4;2,4;2,4@4");
        let field = PrimeField::new(3).unwrap();
        let g = enumerate_grassmannian(2, 4, 3).unwrap();
        let e = random_flags(&t("2,4@4"), field, 9).remove(0);
        let flags = vec![e; 4];
        let found = count_solutions(&p, &flags, &g).unwrap();
        // every line meeting E_2, including E_2 itself
        assert!(found.count > 2);
        assert!(found
            .solutions
            .iter()
            .all(|v| !is_transverse(&p, v, &flags)));
    }

    #[test]
    fn csv_layout() {
        let rows = [FlagSample {
            seed: 7,
            count: 2,
            degenerate: false,
        }];
        assert_eq!(samples_csv(&rows), "seed,count,degenerate\n7,2,false\n");
    }
}
