use rand::Rng;
use serde::Serialize;

use super::field::PrimeField;
use super::flag::{random_flag, schubert_position, FlagBasis, Subspace};
use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::schubert::{expected_dim_of, horn_lhs, ProblemTuple, SchubertIndex};

/// Random combinations drawn per round when looking for a generic kernel
/// element, and the number of rounds before giving up.
const GENERIC_SAMPLES: usize = 5;
const GENERIC_ROUNDS: usize = 3;

/// One flag on `V` and one on `Q` per factor of a problem.
#[derive(Clone, Debug)]
pub struct ProbeFlags {
    pub on_v: Vec<FlagBasis>,
    pub on_q: Vec<FlagBasis>,
}

impl ProbeFlags {
    pub fn random<R: Rng + ?Sized>(problem: &ProblemTuple, field: PrimeField, rng: &mut R) -> Self {
        let (r, q) = (problem.r(), problem.n() - problem.r());
        let on_v = (0..problem.s())
            .map(|_| random_flag(r, field, rng))
            .collect();
        let on_q = (0..problem.s())
            .map(|_| random_flag(q, field, rng))
            .collect();
        Self { on_v, on_q }
    }
}

/// The maps `φ: V -> Q` with `φ(F^j_a) ⊆ G^j_{i^j_a - a}` for all `j, a`.
///
/// Maps are `q x r` matrices in the coordinates of `V` and `Q`.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub r: usize,
    pub q: usize,
    pub kernel_basis: Vec<Matrix>,
    pub observed_rank: usize,
}

/// The linear conditions cutting out [`HomSpace`]; the unknown `φ[x][y]` sits
/// in column `x * r + y`.
///
/// Since `i_a - a` is weakly increasing, `φ(F_a) ⊆ G_{i_a - a}` follows from
/// `φ(f_a) ∈ G_{i_a - a}` for the single new basis vector `f_a`, which gives
/// `q - (i_a - a)` equations. The total row count is the codimension.
pub fn hom_constraints(
    problem: &ProblemTuple,
    flags_v: &[FlagBasis],
    flags_q: &[FlagBasis],
) -> Result<Matrix> {
    let (r, n) = (problem.r(), problem.n());
    let q = n - r;
    if flags_v.len() != problem.s() || flags_q.len() != problem.s() {
        return Err(Error::ShapeMismatch(format!(
            "{} factors but {} + {} flags",
            problem.s(),
            flags_v.len(),
            flags_q.len()
        )));
    }
    if flags_v.iter().any(|f| f.dim() != r) || flags_q.iter().any(|g| g.dim() != q) {
        return Err(Error::ShapeMismatch(format!(
            "flags must have dimensions {r} and {q}"
        )));
    }
    let field = flags_v
        .first()
        .map(FlagBasis::field)
        .or_else(|| flags_q.first().map(FlagBasis::field))
        .unwrap_or_default();
    let mut rows = Vec::with_capacity(problem.total_codim());
    for ((index, fv), gq) in problem.indices().iter().zip(flags_v).zip(flags_q) {
        let ginv = gq.inverse();
        for a in 1..=r {
            let c = index.get(a) - a;
            let fa = fv.basis().column(a - 1);
            for k in c..q {
                let mut row = vec![0; r * q];
                for x in 0..q {
                    let g = ginv.get(k, x);
                    if g == 0 {
                        continue;
                    }
                    for (y, &fy) in fa.iter().enumerate() {
                        row[x * r + y] = field.mul(g, fy);
                    }
                }
                rows.push(row);
            }
        }
    }
    let mut m = Matrix::zeros(field, rows.len(), r * q);
    for (i, row) in rows.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            m.set(i, j, x);
        }
    }
    Ok(m)
}

pub fn hom_space(
    problem: &ProblemTuple,
    flags_v: &[FlagBasis],
    flags_q: &[FlagBasis],
) -> Result<HomSpace> {
    let r = problem.r();
    let q = problem.n() - r;
    let ns = hom_constraints(problem, flags_v, flags_q)?.nullspace();
    let kernel_basis: Vec<Matrix> = (0..ns.cols())
        .map(|k| {
            let mut phi = Matrix::zeros(ns.field(), q, r);
            for x in 0..q {
                for y in 0..r {
                    phi.set(x, y, ns.get(x * r + y, k));
                }
            }
            phi
        })
        .collect();
    Ok(HomSpace {
        r,
        q,
        observed_rank: kernel_basis.len(),
        kernel_basis,
    })
}

/// Whether `φ(F^j_a) ⊆ G^j_{i^j_a - a}` for all `j, a`.
pub fn respects_flags(
    problem: &ProblemTuple,
    phi: &Matrix,
    flags_v: &[FlagBasis],
    flags_q: &[FlagBasis],
) -> bool {
    problem
        .indices()
        .iter()
        .zip(flags_v)
        .zip(flags_q)
        .all(|((index, fv), gq)| {
            (1..=problem.r()).all(|a| {
                let image = phi.mul_vec(&fv.basis().column(a - 1));
                gq.level_contains(index.get(a) - a, &image)
            })
        })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ProbeVerdict {
    #[serde(rename = "CERTIFIED_NONZERO")]
    CertifiedNonzero,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub verdict: ProbeVerdict,
    pub expected_dim: i64,
    /// Rank of the constrained hom space for each trial actually run.
    pub observed_ranks: Vec<usize>,
    pub prime: u64,
}

/// Certifies a nonzero product when some trial's hom space has exactly the
/// expected dimension.
///
/// The observed rank never drops below the expected dimension and never
/// below the generic rank, so equality pins the generic rank, which is sound
/// in every characteristic. Anything else is inconclusive.
pub fn certify_nonzero<R: Rng + ?Sized>(
    problem: &ProblemTuple,
    trials: usize,
    field: PrimeField,
    rng: &mut R,
) -> ProbeReport {
    let expected = problem.expected_dim();
    let mut observed = Vec::new();
    let mut verdict = ProbeVerdict::Inconclusive;
    if expected >= 0 {
        for _ in 0..trials {
            let flags = ProbeFlags::random(problem, field, rng);
            let h = hom_space(problem, &flags.on_v, &flags.on_q)
                .expect("random flags have the right shape");
            observed.push(h.observed_rank);
            if h.observed_rank as i64 == expected {
                verdict = ProbeVerdict::CertifiedNonzero;
                break;
            }
        }
    }
    ProbeReport {
        verdict,
        expected_dim: expected,
        observed_ranks: observed,
        prime: field.p(),
    }
}

/// A kernel of a generic element of the hom space and its positions.
#[derive(Clone, Debug)]
pub struct KernelSample {
    pub phi: Matrix,
    /// `ker φ` in the coordinates of `V`.
    pub kernel: Subspace,
    /// Positions `K^j ⊆ [r]` of the kernel relative to each flag on `V`.
    pub positions: Vec<SchubertIndex>,
    /// Expected dimension of the `K`-tuple in `Gr(d, r)`.
    pub kernel_expected_dim: i64,
    /// Horn left-hand side of `(d, K)` on the problem.
    pub lhs: i64,
}

impl KernelSample {
    pub fn d(&self) -> usize {
        self.kernel.dim()
    }
}

fn dominates(a: &[SchubertIndex], b: &[SchubertIndex]) -> bool {
    a.iter().zip(b).all(|(x, y)| y.le(x))
}

fn sample_kernel<R: Rng + ?Sized>(
    h: &HomSpace,
    flags_v: &[FlagBasis],
    rng: &mut R,
) -> (Matrix, Subspace, Vec<SchubertIndex>) {
    let field = flags_v[0].field();
    let mut phi = Matrix::zeros(field, h.q, h.r);
    for b in &h.kernel_basis {
        phi.scale_add(b, field.random(rng));
    }
    let kernel = Subspace::new(phi.nullspace()).expect("nullspace basis is independent");
    let positions = flags_v
        .iter()
        .map(|f| schubert_position(&kernel, f).index)
        .collect();
    (phi, kernel, positions)
}

/// A generic `φ` in `h`, its kernel `S` and the positions `K` of `S`.
///
/// Each round draws a few random combinations of the kernel basis and keeps
/// one of minimal kernel dimension whose positions dominate all others of that
/// dimension. The rank identity
/// `rank = expected + dim(S, V, F) + lhs(d, K)` is then checked; a failed
/// round or a failed identity means the flags or draws were not generic.
pub fn generic_kernel_element<R: Rng + ?Sized>(
    problem: &ProblemTuple,
    h: &HomSpace,
    flags_v: &[FlagBasis],
    rng: &mut R,
) -> Result<KernelSample> {
    let r = problem.r();
    let chosen = if h.kernel_basis.is_empty() {
        let field = flags_v.first().map(FlagBasis::field).unwrap_or_default();
        let full = SchubertIndex::fundamental(r, r);
        Some((
            Matrix::zeros(field, h.q, r),
            Subspace::whole(field, r),
            vec![full; problem.s()],
        ))
    } else {
        (0..GENERIC_ROUNDS).find_map(|_| {
            let draws: Vec<_> = (0..GENERIC_SAMPLES)
                .map(|_| sample_kernel(h, flags_v, rng))
                .collect();
            let dmin = draws.iter().map(|(_, k, _)| k.dim()).min()?;
            let minimal: Vec<_> = draws
                .into_iter()
                .filter(|(_, k, _)| k.dim() == dmin)
                .collect();
            let best = minimal
                .iter()
                .position(|(_, _, p)| minimal.iter().all(|(_, _, o)| dominates(p, o)))?;
            minimal.into_iter().nth(best)
        })
    };
    let (phi, kernel, positions) = chosen.ok_or_else(|| {
        Error::GenericityFailure(format!(
            "random kernel elements of {problem} disagree on their kernel position"
        ))
    })?;
    let d = kernel.dim();
    let kernel_expected_dim = expected_dim_of(d, r, positions.iter().map(SchubertIndex::codim));
    let lhs = horn_lhs(problem, d, &positions)?.value;
    let predicted = problem.expected_dim() + kernel_expected_dim + lhs;
    if predicted != h.observed_rank as i64 {
        return Err(Error::GenericityFailure(format!(
            "hom rank {} of {problem} differs from {predicted} predicted by kernel dimension {d}",
            h.observed_rank
        )));
    }
    Ok(KernelSample {
        phi,
        kernel,
        positions,
        kernel_expected_dim,
        lhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn t(s: &str) -> ProblemTuple {
        s.parse().unwrap()
    }

    fn hom(problem: &ProblemTuple, seed: u64) -> (ProbeFlags, HomSpace) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let flags = ProbeFlags::random(problem, PrimeField::default(), &mut rng);
        let h = hom_space(problem, &flags.on_v, &flags.on_q).unwrap();
        (flags, h)
    }

    #[test]
    fn worked_example_ranks() {
        for seed in 0..5 {
            assert_eq!(hom(&t("1,4;2,3@4"), seed).1.observed_rank, 1);
            assert_eq!(hom(&t("1,4;2,4@4"), seed).1.observed_rank, 1);
            assert_eq!(hom(&t("2,4@4"), seed).1.observed_rank, 3);
            assert_eq!(hom(&t("3,4@4"), seed).1.observed_rank, 4);
        }
    }

    #[test]
    fn members_respect_flags() {
        let p = t("1,4;2,4@4");
        let (flags, h) = hom(&p, 9);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for phi in &h.kernel_basis {
            assert!(respects_flags(&p, phi, &flags.on_v, &flags.on_q));
        }
        let random = Matrix::random(PrimeField::default(), 2, 2, &mut rng);
        assert!(!respects_flags(&p, &random, &flags.on_v, &flags.on_q));
    }

    #[test]
    fn constraint_count_is_codimension() {
        let p = t("1,3,5;2,4,6;1,2,6@6");
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let flags = ProbeFlags::random(&p, PrimeField::default(), &mut rng);
        let m = hom_constraints(&p, &flags.on_v, &flags.on_q).unwrap();
        assert_eq!(m.rows(), p.total_codim());
        assert_eq!(m.cols(), 9);
    }

    #[test]
    fn certification() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = PrimeField::default();
        assert_eq!(
            certify_nonzero(&t("1,4;2,4@4"), 3, f, &mut rng).verdict,
            ProbeVerdict::CertifiedNonzero
        );
        assert_eq!(
            certify_nonzero(&t("2,4@4"), 3, f, &mut rng).verdict,
            ProbeVerdict::CertifiedNonzero
        );
        let failing = certify_nonzero(&t("1,4;2,3@4"), 3, f, &mut rng);
        assert_eq!(failing.verdict, ProbeVerdict::Inconclusive);
        assert_eq!(failing.observed_ranks, vec![1, 1, 1]);
        // negative expected dimension never certifies and runs no trials
        let over = certify_nonzero(&t("1,2;1,2@4"), 3, f, &mut rng);
        assert_eq!(over.verdict, ProbeVerdict::Inconclusive);
        assert!(over.observed_ranks.is_empty());
    }

    #[test]
    fn generic_kernels_of_worked_examples() {
        let p = t("1,4;2,3@4");
        let (flags, h) = hom(&p, 11);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let k = generic_kernel_element(&p, &h, &flags.on_v, &mut rng).unwrap();
        assert_eq!(k.d(), 1);
        assert_eq!(k.positions[0].elems(), &[1]);
        assert_eq!(k.positions[1].elems(), &[2]);
        assert_eq!(k.lhs, 1);

        let p = t("1,4,5,6;2,3,5,6@6");
        let (flags, h) = hom(&p, 12);
        assert_eq!(h.observed_rank, 4);
        let k = generic_kernel_element(&p, &h, &flags.on_v, &mut rng).unwrap();
        assert_eq!(k.d(), 2);
        assert_eq!(k.positions[0].elems(), &[1, 4]);
        assert_eq!(k.positions[1].elems(), &[2, 4]);

        let p = t("2,4@4");
        let (flags, h) = hom(&p, 13);
        let k = generic_kernel_element(&p, &h, &flags.on_v, &mut rng).unwrap();
        assert_eq!(k.d(), 0);
    }

    #[test]
    fn unconstrained_problem_has_full_hom() {
        let p = t("3,4,5;3,4,5@5");
        assert_eq!(hom(&p, 0).1.observed_rank, 6);
    }
}
