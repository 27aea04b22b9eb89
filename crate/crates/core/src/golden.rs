//! Four small worked problems with reference values, run end to end.
//!
//! The expected values below are fixed data, never recomputed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::horn::{HornEngine, Mode};
use crate::probe::{
    build_filtration, certify_nonzero, generic_kernel_element, hom_space, verify_filtration,
    PrimeField, ProbeFlags, ProbeVerdict,
};
use crate::schubert::{horn_lhs, ProblemTuple, SchubertIndex};

pub const MAX_RESEEDS: usize = 10;

#[derive(Clone, Debug, Serialize)]
pub struct GoldenExample {
    pub name: &'static str,
    pub problem: &'static str,
    pub hom_rank: usize,
    pub expected_dim: i64,
    pub kernel_dim: usize,
    /// Kernel positions in `[r]`, one per factor.
    pub kernel_positions: &'static [&'static str],
    pub nonzero: bool,
    pub certified: bool,
    pub filtration_depth: usize,
    /// Position of the last chain member composed into `[n]`, where given.
    pub bottom_ambient: Option<&'static [&'static str]>,
    /// Horn value at the last chain member.
    pub bottom_value: i64,
}

pub const EXAMPLES: [GoldenExample; 4] = [
    GoldenExample {
        name: "failing-pair",
        problem: "1,4;2,3@4",
        hom_rank: 1,
        expected_dim: 0,
        kernel_dim: 1,
        kernel_positions: &["1", "2"],
        nonzero: false,
        certified: false,
        filtration_depth: 1,
        bottom_ambient: None,
        bottom_value: 1,
    },
    GoldenExample {
        name: "passing-pair",
        problem: "1,4;2,4@4",
        hom_rank: 1,
        expected_dim: 1,
        kernel_dim: 1,
        kernel_positions: &["1", "2"],
        nonzero: true,
        certified: true,
        filtration_depth: 1,
        bottom_ambient: None,
        bottom_value: 0,
    },
    GoldenExample {
        name: "depth-two",
        problem: "1,4,5,6;2,3,5,6@6",
        hom_rank: 4,
        expected_dim: 4,
        kernel_dim: 2,
        kernel_positions: &["1,4", "2,4"],
        nonzero: true,
        certified: true,
        filtration_depth: 2,
        bottom_ambient: Some(&["1", "6"]),
        bottom_value: 0,
    },
    GoldenExample {
        name: "injective",
        problem: "2,4@4",
        // recorded as 2, but one linear condition on a 4-dimensional space leaves 3
        hom_rank: 2,
        expected_dim: 2,
        kernel_dim: 0,
        kernel_positions: &[""],
        nonzero: true,
        certified: true,
        filtration_depth: 1,
        bottom_ambient: None,
        bottom_value: 0,
    },
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExampleObservation {
    pub hom_rank: usize,
    pub expected_dim: i64,
    pub kernel_dim: usize,
    pub kernel_positions: Vec<String>,
    pub nonzero: bool,
    pub certified: bool,
    pub filtration_depth: usize,
    pub bottom_positions: Vec<String>,
    pub bottom_ambient: Vec<String>,
    pub bottom_value: i64,
    pub filtration_verified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExampleReport {
    pub name: &'static str,
    pub problem: &'static str,
    pub seed: u64,
    pub prime: u64,
    pub attempts: usize,
    pub observed: Option<ExampleObservation>,
    pub mismatches: Vec<String>,
    pub pass: bool,
}

fn strings(v: &[SchubertIndex]) -> Vec<String> {
    v.iter().map(SchubertIndex::to_string).collect()
}

/// One attempt at the given seed; genericity failures are returned as errors.
pub fn observe(
    example: &GoldenExample,
    engine: &HornEngine,
    field: PrimeField,
    trials: usize,
    seed: u64,
) -> Result<ExampleObservation> {
    let problem: ProblemTuple = example.problem.parse()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let flags = ProbeFlags::random(&problem, field, &mut rng);
    let hom = hom_space(&problem, &flags.on_v, &flags.on_q)?;
    let kernel = generic_kernel_element(&problem, &hom, &flags.on_v, &mut rng)?;
    let cert = build_filtration(&problem, &flags, &mut rng)?;
    let check = verify_filtration(&cert, &problem, &flags);
    let bottom = &cert.positions[cert.h()];
    let bottom_value = horn_lhs(&problem, cert.chain[cert.h()].dim(), bottom)?.value;
    let probe = certify_nonzero(&problem, trials, field, &mut rng);
    let nonzero = engine.horn_decide(&problem, Mode::B)?.nonzero;
    Ok(ExampleObservation {
        hom_rank: hom.observed_rank,
        expected_dim: problem.expected_dim(),
        kernel_dim: kernel.d(),
        kernel_positions: strings(&kernel.positions),
        nonzero,
        certified: probe.verdict == ProbeVerdict::CertifiedNonzero,
        filtration_depth: cert.h(),
        bottom_positions: strings(bottom),
        bottom_ambient: strings(&cert.ambient_positions(&problem)[cert.h()]),
        bottom_value,
        filtration_verified: check.passed(),
    })
}

pub fn compare(example: &GoldenExample, seen: &ExampleObservation) -> Vec<String> {
    let mut out = Vec::new();
    let mut expect = |what: &str, want: String, got: String| {
        if want != got {
            out.push(format!("{what}: expected {want}, observed {got}"));
        }
    };
    expect(
        "hom rank",
        example.hom_rank.to_string(),
        seen.hom_rank.to_string(),
    );
    expect(
        "expected dimension",
        example.expected_dim.to_string(),
        seen.expected_dim.to_string(),
    );
    expect(
        "kernel dimension",
        example.kernel_dim.to_string(),
        seen.kernel_dim.to_string(),
    );
    expect(
        "kernel positions",
        example.kernel_positions.join(";"),
        seen.kernel_positions.join(";"),
    );
    expect(
        "nonzero",
        example.nonzero.to_string(),
        seen.nonzero.to_string(),
    );
    expect(
        "certified",
        example.certified.to_string(),
        seen.certified.to_string(),
    );
    expect(
        "filtration depth",
        example.filtration_depth.to_string(),
        seen.filtration_depth.to_string(),
    );
    if let Some(amb) = example.bottom_ambient {
        expect(
            "bottom position in [n]",
            amb.join(";"),
            seen.bottom_ambient.join(";"),
        );
    }
    expect(
        "bottom Horn value",
        example.bottom_value.to_string(),
        seen.bottom_value.to_string(),
    );
    expect(
        "filtration verified",
        "true".into(),
        seen.filtration_verified.to_string(),
    );
    out
}

/// Runs an example, reseeding on genericity failures up to [`MAX_RESEEDS`]
/// times. Attempt `k` uses `seed + k`.
pub fn run_example(
    example: &GoldenExample,
    engine: &HornEngine,
    field: PrimeField,
    trials: usize,
    seed: u64,
) -> Result<ExampleReport> {
    let mut last_failure = None;
    for attempt in 0..=MAX_RESEEDS {
        let s = seed.wrapping_add(attempt as u64);
        match observe(example, engine, field, trials, s) {
            Ok(seen) => {
                let mismatches = compare(example, &seen);
                return Ok(ExampleReport {
                    name: example.name,
                    problem: example.problem,
                    seed: s,
                    prime: field.p(),
                    attempts: attempt + 1,
                    pass: mismatches.is_empty(),
                    observed: Some(seen),
                    mismatches,
                });
            }
            Err(Error::GenericityFailure(msg)) => last_failure = Some(msg),
            Err(e) => return Err(e),
        }
    }
    Ok(ExampleReport {
        name: example.name,
        problem: example.problem,
        seed,
        prime: field.p(),
        attempts: MAX_RESEEDS + 1,
        observed: None,
        mismatches: vec![format!(
            "genericity failure after {} attempts: {}",
            MAX_RESEEDS + 1,
            last_failure.unwrap_or_default()
        )],
        pass: false,
    })
}
