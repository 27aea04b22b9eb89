//! Kernel filtrations of the constrained hom space.
//!
//! For a generic `φ` with kernel `S` in position `K`, either `S` is already
//! rigid (`dim(S, V, F) = 0`) and the chain is `S ⊂ V`, or the same
//! construction is repeated on the problem `K` for the pair `(S, V / S)` with
//! the induced flags. Maps found one level down are pushed back into `Q`
//! through the injection `V / S -> Q` induced by `φ`.

use rand::Rng;
use serde::Serialize;

use super::field::PrimeField;
use super::flag::{induced_flags, schubert_position, FlagBasis, Quotient, Subspace};
use super::hom::{generic_kernel_element, hom_space, ProbeFlags};
use super::matrix::Matrix;
use crate::error::Result;
use crate::schubert::{expected_dim_of, horn_lhs, ProblemTuple, SchubertIndex};

/// `S^(h) ⊂ ... ⊂ S^(1) ⊂ S^(0) = V` with maps `η_u: S^(u) -> Q`.
#[derive(Clone, Debug)]
pub struct FiltrationCertificate {
    /// `chain[u] = S^(u)` in the coordinates of `V`.
    pub chain: Vec<Subspace>,
    /// `maps[u] = η_u` as a `q x dim S^(u)` matrix over the basis of `S^(u)`.
    pub maps: Vec<Matrix>,
    /// `positions[u] = J(u)`: positions of `S^(u)` relative to the flags on
    /// `V`, subsets of `[r]`.
    pub positions: Vec<Vec<SchubertIndex>>,
}

impl FiltrationCertificate {
    pub fn h(&self) -> usize {
        self.chain.len() - 1
    }

    pub fn dims(&self) -> Vec<usize> {
        self.chain.iter().map(Subspace::dim).collect()
    }

    /// `J(u)` composed with the problem's indices, as subsets of `[n]`.
    pub fn ambient_positions(&self, problem: &ProblemTuple) -> Vec<Vec<SchubertIndex>> {
        self.positions
            .iter()
            .map(|js| {
                problem
                    .indices()
                    .iter()
                    .zip(js)
                    .map(|(i, j)| i.compose(j).expect("positions are subsets of [r]"))
                    .collect()
            })
            .collect()
    }
}

/// Build a filtration for `problem` at the given flags.
pub fn build_filtration<R: Rng + ?Sized>(
    problem: &ProblemTuple,
    flags: &ProbeFlags,
    rng: &mut R,
) -> Result<FiltrationCertificate> {
    let r = problem.r();
    let field = flags.on_v.first().map(FlagBasis::field).unwrap_or_default();
    let full = vec![SchubertIndex::fundamental(r, r); problem.s()];
    let h = hom_space(problem, &flags.on_v, &flags.on_q)?;
    if h.observed_rank == 0 {
        return Ok(FiltrationCertificate {
            chain: vec![Subspace::whole(field, r)],
            maps: vec![],
            positions: vec![full],
        });
    }
    let sample = generic_kernel_element(problem, &h, &flags.on_v, rng)?;
    let whole = Subspace::whole(field, r);
    if sample.kernel_expected_dim == 0 {
        return Ok(FiltrationCertificate {
            chain: vec![whole, sample.kernel],
            maps: vec![sample.phi],
            positions: vec![full, sample.positions],
        });
    }

    let s = &sample.kernel;
    let d = s.dim();
    let quotient = Quotient::new(s);
    let mut sub_flags = Vec::with_capacity(problem.s());
    let mut quot_flags = Vec::with_capacity(problem.s());
    for f in &flags.on_v {
        let ind = induced_flags(s, f, &quotient);
        debug_assert_eq!(ind.position, sample.positions[sub_flags.len()]);
        sub_flags.push(ind.sub);
        quot_flags.push(ind.quotient);
    }
    let inner_problem = ProblemTuple::new(sample.positions.clone())?;
    debug_assert_eq!(inner_problem.r(), d);
    let inner = build_filtration(
        &inner_problem,
        &ProbeFlags {
            on_v: sub_flags,
            on_q: quot_flags,
        },
        rng,
    )?;

    // φ factors as φ̄ ∘ proj, and φ̄ = φ ∘ lift on the quotient coordinates
    let phi_bar = sample.phi.mul(&quotient.lift);
    let mut chain = vec![whole];
    let mut maps = vec![sample.phi.clone()];
    let mut positions = vec![full];
    for (u, sub) in inner.chain.iter().enumerate() {
        chain.push(s.embed(sub));
        positions.push(
            sample
                .positions
                .iter()
                .zip(&inner.positions[u])
                .map(|(k, j)| k.compose(j))
                .collect::<Result<Vec<_>>>()?,
        );
        if let Some(eta) = inner.maps.get(u) {
            maps.push(phi_bar.mul(eta));
        }
    }
    Ok(FiltrationCertificate {
        chain,
        maps,
        positions,
    })
}

/// Per-clause outcome of [`verify_filtration`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FiltrationCheck {
    /// Strictly decreasing chain whose consecutive maps have the next member
    /// as kernel, with recorded positions matching recomputed ones.
    pub structure: bool,
    /// `dim(S^(h), V, F) = 0`.
    pub rigid_bottom: bool,
    /// `η_u(S^(u) ∩ F^j_a) ⊆ G^j_{i^j_a - a}` for all `u, j, a`.
    pub containment: bool,
    /// Hom rank equals expected dimension plus the Horn value of `J(h)`.
    pub rank_identity: bool,
    pub failures: Vec<String>,
}

impl FiltrationCheck {
    pub fn passed(&self) -> bool {
        self.structure && self.rigid_bottom && self.containment && self.rank_identity
    }
}

pub fn verify_filtration(
    cert: &FiltrationCertificate,
    problem: &ProblemTuple,
    flags: &ProbeFlags,
) -> FiltrationCheck {
    let mut check = FiltrationCheck::default();
    let r = problem.r();
    let q = problem.n() - r;

    check.structure = (|| {
        if cert.chain.is_empty()
            || cert.maps.len() + 1 != cert.chain.len()
            || cert.positions.len() != cert.chain.len()
            || cert.chain[0].dim() != r
        {
            check
                .failures
                .push("chain, maps and positions have inconsistent lengths".into());
            return false;
        }
        for u in 0..cert.chain.len() {
            let su = &cert.chain[u];
            let recomputed: Vec<_> = flags
                .on_v
                .iter()
                .map(|f| schubert_position(su, f).index)
                .collect();
            if recomputed != cert.positions[u] {
                check
                    .failures
                    .push(format!("recorded positions of S^({u}) are wrong"));
                return false;
            }
            if let Some(eta) = cert.maps.get(u) {
                let next = &cert.chain[u + 1];
                if eta.rows() != q
                    || eta.cols() != su.dim()
                    || next.dim() >= su.dim()
                    || !su.contains(next)
                {
                    check
                        .failures
                        .push(format!("S^({}) is not a proper subspace of S^({u})", u + 1));
                    return false;
                }
                let kernel = su.embed(&Subspace::new(eta.nullspace()).expect("independent"));
                if !kernel.same_as(next) {
                    check
                        .failures
                        .push(format!("kernel of η_{u} is not S^({})", u + 1));
                    return false;
                }
            }
        }
        true
    })();
    if !check.structure {
        return check;
    }

    let h = cert.h();
    let bottom = &cert.positions[h];
    let dh = cert.chain[h].dim();
    let bottom_dim = expected_dim_of(dh, r, bottom.iter().map(SchubertIndex::codim));
    check.rigid_bottom = bottom_dim == 0;
    if !check.rigid_bottom {
        check
            .failures
            .push(format!("dim(S^({h}), V, F) = {bottom_dim}"));
    }

    check.containment = true;
    'outer: for (u, eta) in cert.maps.iter().enumerate() {
        let su = &cert.chain[u];
        for ((index, fv), gq) in problem.indices().iter().zip(&flags.on_v).zip(&flags.on_q) {
            for a in 1..=r {
                let coords = su.intersection_coords(&fv.subspace(a));
                let image = eta.mul(&coords);
                let target = index.get(a) - a;
                if (0..image.cols()).any(|c| !gq.level_contains(target, &image.column(c))) {
                    check.containment = false;
                    check
                        .failures
                        .push(format!("η_{u} moves S^({u}) ∩ F_{a} outside G_{target}"));
                    break 'outer;
                }
            }
        }
    }

    check.rank_identity = match hom_space(problem, &flags.on_v, &flags.on_q)
        .and_then(|hs| horn_lhs(problem, dh, bottom).map(|l| (hs.observed_rank, l.value)))
    {
        Ok((rank, lhs)) => {
            let predicted = problem.expected_dim() + lhs;
            if rank as i64 != predicted {
                check.failures.push(format!(
                    "hom rank {rank} but expected dimension plus Horn value is {predicted}"
                ));
            }
            rank as i64 == predicted
        }
        Err(e) => {
            check.failures.push(e.to_string());
            false
        }
    };
    check
}

/// Certificate together with the data needed to replay it.
#[derive(Clone, Debug, Serialize)]
pub struct FiltrationReport {
    pub seed: u64,
    pub prime: u64,
    pub problem: ProblemTuple,
    pub h: usize,
    pub dims: Vec<usize>,
    /// `J(u)` for `u = 0..=h`, subsets of `[r]`.
    pub positions: Vec<Vec<SchubertIndex>>,
    /// The same positions composed into `[n]`.
    pub ambient_positions: Vec<Vec<SchubertIndex>>,
    pub hom_rank: usize,
    pub expected_dim: i64,
    pub check: FiltrationCheck,
}

impl FiltrationReport {
    pub fn new(
        seed: u64,
        field: PrimeField,
        problem: &ProblemTuple,
        flags: &ProbeFlags,
        cert: &FiltrationCertificate,
    ) -> Result<Self> {
        let hom_rank = hom_space(problem, &flags.on_v, &flags.on_q)?.observed_rank;
        Ok(Self {
            seed,
            prime: field.p(),
            problem: problem.clone(),
            h: cert.h(),
            dims: cert.dims(),
            positions: cert.positions.clone(),
            ambient_positions: cert.ambient_positions(problem),
            hom_rank,
            expected_dim: problem.expected_dim(),
            check: verify_filtration(cert, problem, flags),
        })
    }
}
