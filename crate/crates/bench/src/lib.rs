//! Fixtures shared by the benchmarks: the shipped corpus and seeded random
//! workloads.

use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use epsilon_core::kernel::{parse_script, Derivation};
use epsilon_core::random::{random_context, random_formula, random_interpretation, sample_signature};
use epsilon_core::semantics::Interpretation;
use epsilon_core::syntax::parse_document;
use epsilon_core::{Context, Formula, Signature};

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

/// The corpus signature with every proof script, read in file-name order.
pub fn corpus() -> (Signature, Vec<(String, String)>) {
    let dir = corpus_dir();
    let theory = std::fs::read_to_string(dir.join("theory.eps")).expect("corpus theory");
    let sig = parse_document(&theory).expect("corpus theory parses").theory.signature;
    let mut scripts: Vec<(String, String)> = std::fs::read_dir(dir.join("proofs"))
        .expect("corpus proofs")
        .map(|e| {
            let path = e.unwrap().path();
            let name = path.file_stem().unwrap().to_string_lossy().into_owned();
            (name, std::fs::read_to_string(&path).unwrap())
        })
        .collect();
    scripts.sort();
    (sig, scripts)
}

pub fn corpus_derivations() -> (Signature, Vec<(String, Derivation)>) {
    let (sig, scripts) = corpus();
    let mut out = Vec::new();
    for (name, src) in scripts {
        for (i, d) in parse_script(&src, &sig)
            .expect("corpus scripts parse")
            .into_iter()
            .enumerate()
        {
            out.push((format!("{name}#{i}"), d));
        }
    }
    (sig, out)
}

/// A formula workload: `count` random formulas of the given depth, each with
/// a random model over the sample signature.
pub struct Workload {
    pub signature: Signature,
    pub cases: Vec<(Context, Formula, Interpretation)>,
}

pub fn formulas(seed: u64, count: usize, depth: usize, max_carrier: usize) -> Workload {
    let signature = sample_signature();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases = (0..count)
        .map(|_| {
            let ctx = random_context(&mut rng, &signature, 2, &[]);
            let phi = random_formula(&mut rng, &signature, &ctx, depth);
            let interp = random_interpretation(&mut rng, &signature, max_carrier);
            (ctx, phi, interp)
        })
        .collect();
    Workload { signature, cases }
}
