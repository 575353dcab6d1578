//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use epsilon_core::doctrine::{
    check_epsilon_inequality, epsilon_categorical, epsilon_oracle, section_from_epsilon, Fiber, LawConfig, LawSuite,
    Projection, EXHAUSTIVE_BECK_CHEVALLEY, EXHAUSTIVE_PRODUCT,
};
use epsilon_core::finset::{all_morphisms, compose, section_of_epi, FinMor, FinObj};
use epsilon_core::kernel::{check_derivation, parse_script, Rule};
use epsilon_core::random::{
    random_context, random_formula, random_interpretation, random_substitution, random_type, sample_signature,
};
use epsilon_core::semantics::{
    audit_soundness, empty_type_guard, interpret_formula, substitution_lemma_check, AuditOptions, ContextLayout,
    Interpretation,
};
use epsilon_core::syntax::{parse_document, substitute, Substitution};
use epsilon_core::{Formula, Term, Theory};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn epsilon_inequality() -> Outcome {
    let (mut pairs, mut subsets) = (0, 0u64);
    for x in 1..=EXHAUSTIVE_PRODUCT {
        for y in (1..=EXHAUSTIVE_PRODUCT).filter(|y| x * y <= EXHAUSTIVE_PRODUCT) {
            pairs += 1;
            let pi = Projection::new(FinObj(x), FinObj(y)).unwrap();
            for psi in Fiber::new(pi.total()).elements() {
                subsets += 1;
                ensure(check_epsilon_inequality(&pi, &psi).unwrap(), || {
                    format!("inequality fails at X={x}, Y={y}, psi={psi}")
                })?;
                let cat = epsilon_categorical(&pi, &psi).unwrap();
                let oracle = epsilon_oracle(&pi, &psi).unwrap();
                ensure(cat == oracle, || {
                    format!(
                        "X={x}, Y={y}, psi={psi}: categorical {:?} vs oracle {:?}",
                        cat.table(),
                        oracle.table()
                    )
                })?;
            }
        }
    }
    Ok(format!("{pairs} carrier pairs, {subsets} subsets"))
}

fn doctrine_laws() -> Outcome {
    let verdicts = LawSuite::new(LawConfig::default()).run_collect();
    if let Some(v) = verdicts.iter().find(|v| !v.passed()) {
        return Err(format!(
            "{} [{}]: {}",
            v.law,
            v.instance,
            v.counterexample.clone().unwrap_or_default()
        ));
    }
    // instances inside the exhaustive regime must not have been sampled
    let dims = |inst: &str| -> Vec<usize> {
        inst.split(',')
            .filter_map(|kv| kv.split_once('=').and_then(|(_, n)| n.parse().ok()))
            .collect()
    };
    for v in &verdicts {
        let d = dims(&v.instance);
        let bound = match v.law {
            "beck-chevalley" => EXHAUSTIVE_BECK_CHEVALLEY,
            _ => EXHAUSTIVE_PRODUCT,
        };
        if d.len() >= 2 && d[0] * d[1] <= bound {
            ensure(v.exhaustive, || format!("{} [{}] was sampled", v.law, v.instance))?;
        }
    }
    let has = |law: &str, inst: &str| {
        verdicts
            .iter()
            .any(|v| v.law == law && v.instance == inst && v.exhaustive)
    };
    for (law, inst) in [
        ("boolean-algebra", "A=5"),
        ("reindex-homomorphism", "X=4,Y=4"),
        ("reindex-functoriality", "X=4,Y=4,Z=4"),
        ("adjunction", "X=3,Y=4"),
        ("adjunction", "X=12,Y=1"),
        ("beck-chevalley", "X=2,Y=5,Z=3"),
        ("beck-chevalley", "X=10,Y=1,Z=3"),
    ] {
        ensure(has(law, inst), || format!("missing exhaustive instance {law} [{inst}]"))?;
    }
    let sampled = verdicts.iter().filter(|v| !v.exhaustive).count();
    Ok(format!(
        "{} instances, {sampled} beyond the exhaustive bounds sampled, 0 failures",
        verdicts.len()
    ))
}

fn choice() -> Outcome {
    let mut epis = 0;
    for a in 1..=5 {
        for b in 1..=a {
            for e in all_morphisms(FinObj(a), FinObj(b)).filter(FinMor::is_epi) {
                epis += 1;
                let id = FinMor::identity(FinObj(b));
                let s = section_of_epi(&e).unwrap();
                ensure(compose(&e, &s).unwrap() == id, || {
                    format!("section_of_epi fails for {:?}", e.table())
                })?;
                let t = section_from_epsilon(&e).unwrap();
                ensure(compose(&e, &t).unwrap() == id, || {
                    format!("section_from_epsilon fails for {:?}", e.table())
                })?;
                ensure(s == t, || {
                    format!(
                        "sections differ for {:?}: {:?} vs {:?}",
                        e.table(),
                        s.table(),
                        t.table()
                    )
                })?;
            }
        }
    }
    Ok(format!("{epis} surjections between carriers <= 5"))
}

fn kernel_and_audit() -> Outcome {
    let dir = corpus();
    let theory_src = std::fs::read_to_string(dir.join("theory.eps")).map_err(|e| e.to_string())?;
    let sig = parse_document(&theory_src).map_err(|e| e.to_string())?.theory.signature;
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir.join("proofs"))
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "prf"))
        .collect();
    files.sort();
    ensure(files.len() >= 15, || format!("only {} proof scripts", files.len()))?;
    let opts = AuditOptions {
        max_carrier: 3,
        ..AuditOptions::default()
    };
    let (mut derivations, mut interpretations) = (0, 0);
    let mut rules_seen = std::collections::BTreeSet::new();
    for path in &files {
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        let src = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
        let ds = parse_script(&src, &sig).map_err(|e| format!("{name}: {e}"))?;
        for (i, d) in ds.iter().enumerate() {
            derivations += 1;
            check_derivation(d, &sig).map_err(|e| format!("{name}#{i}: {e}"))?;
            let report = audit_soundness(d, &sig, &opts).map_err(|e| format!("{name}#{i}: {e}"))?;
            ensure(
                report.passed() && !report.truncated && report.violation_count == 0,
                || {
                    format!(
                        "{name}#{i}: {:?} after {} interpretations",
                        report.verdict, report.interpretations
                    )
                },
            )?;
            interpretations += report.interpretations;
            rules_seen.extend(d.rules().into_iter().map(Rule::name));
        }
    }
    let missing: Vec<&str> = Rule::NAMES
        .iter()
        .copied()
        .filter(|r| !rules_seen.contains(r))
        .collect();
    ensure(missing.is_empty(), || format!("no corpus proof uses {missing:?}"))?;
    for required in [
        "eps-exists-forward.prf",
        "eps-exists-backward.prf",
        "eps-ex.prf",
        "lem.prf",
    ] {
        ensure(files.iter().any(|p| p.ends_with(required)), || {
            format!("missing {required}")
        })?;
    }
    Ok(format!(
        "{} scripts, {derivations} derivations, all {} rules used, {interpretations} interpretations audited",
        files.len(),
        Rule::NAMES.len()
    ))
}

fn epsilon_exists() -> Outcome {
    let sig = sample_signature();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let mut nontrivial = 0;
    for n in 0..200 {
        let interp = random_interpretation(&mut rng, &sig, 3);
        // a closed formula denotes either nothing or everything, so most
        // samples get a parameter
        let gamma = loop {
            let c = random_context(&mut rng, &sig, 2, &["x"]);
            if !c.is_empty() || n % 4 == 0 {
                break c;
            }
        };
        let ty = random_type(&mut rng, &sig);
        let extended = gamma.extended("x", ty.clone()).unwrap();
        let depth = rng.gen_range(1..=4);
        let psi = random_formula(&mut rng, &sig, &extended, depth);
        let eps = Term::epsilon("x", ty.clone(), psi.clone());
        let instance = substitute(&psi, &Substitution::single("x", eps), &sig).map_err(|e| e.to_string())?;
        let exists = Formula::exists("x", ty, psi.clone());
        let layout = ContextLayout::new(&gamma, &interp).unwrap();
        let lhs = interpret_formula(&layout, &instance, &interp).map_err(|e| e.to_string())?;
        let rhs = interpret_formula(&layout, &exists, &interp).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || format!("sample {n}: {gamma} | {psi}: {lhs} vs {rhs}"))?;
        if !lhs.is_empty() && !lhs.is_full() {
            nontrivial += 1;
        }
    }
    Ok(format!(
        "200 formulas, 0 mismatches ({nontrivial} with a proper nonempty extension)"
    ))
}

fn substitution_lemma() -> Outcome {
    let sig = sample_signature();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    for n in 0..200 {
        let interp = random_interpretation(&mut rng, &sig, 3);
        let theta = loop {
            let c = random_context(&mut rng, &sig, 3, &[]);
            if !c.is_empty() {
                break c;
            }
        };
        let gamma = random_context(&mut rng, &sig, 3, &[]);
        let phi = random_formula(&mut rng, &sig, &theta, 3);
        let s = random_substitution(&mut rng, &sig, &gamma, &theta, 2);
        let same = substitution_lemma_check(&gamma, &theta, &phi, &s, &interp, &sig).map_err(|e| e.to_string())?;
        ensure(same, || format!("pair {n}: {theta} | {phi} under {s:?} from {gamma}"))?;
    }
    Ok("200 pairs, 0 mismatches".into())
}

fn load_model(name: &str) -> Result<(Theory, Interpretation), String> {
    let src = std::fs::read_to_string(corpus().join("models").join(name)).map_err(|e| e.to_string())?;
    Interpretation::parse_model(&src, None).map_err(|e| format!("{name}: {e}"))
}

/// Every assignment of carriers `1..=max` to the base types of `theory`.
fn carrier_assignments(theory: &Theory, max: usize) -> Vec<Interpretation> {
    let types = theory.signature.base_types();
    let mut out = Vec::new();
    for code in 0..max.pow(types.len() as u32) {
        let mut interp = Interpretation::new();
        let mut c = code;
        for t in types {
            interp.set_carrier(t.clone(), c % max + 1).unwrap();
            c /= max;
        }
        out.push(interp);
    }
    out
}

fn empty_guard() -> Outcome {
    let (degenerate, ok_model) = load_model("degenerate.fin")?;
    empty_type_guard(&degenerate, &ok_model).map_err(|e| format!("degenerate model refused: {e}"))?;
    let (nontrivial, bad_model) = load_model("nontrivial-empty.fin")?;
    ensure(empty_type_guard(&nontrivial, &bad_model).is_err(), || {
        "nontrivial model accepted".into()
    })?;
    let (mut refused, mut accepted) = (0, 0);
    for theory in [&degenerate, &nontrivial] {
        for interp in carrier_assignments(theory, 3) {
            let verdict = empty_type_guard(theory, &interp);
            ensure(verdict.is_ok() == interp.is_degenerate(), || {
                format!(
                    "guard verdict {:?} for carriers {:?}",
                    verdict.is_ok(),
                    interp.carriers().collect::<Vec<_>>()
                )
            })?;
            if verdict.is_ok() {
                accepted += 1;
            } else {
                refused += 1;
            }
        }
    }
    Ok(format!(
        "corpus models: degenerate accepted, nontrivial refused; sweep: {accepted} accepted, {refused} refused"
    ))
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_epsilon"))
            .args(["laws", "--max-size", "4", "--json"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.success() && b.status.success(), || {
        format!("exit statuses {} and {}", a.status, b.status)
    })?;
    ensure(!a.stdout.is_empty(), || "no output".into())?;
    ensure(a.stdout == b.stdout, || "outputs differ".into())?;
    let lines = a.stdout.iter().filter(|&&c| c == b'\n').count();
    Ok(format!("{lines} lines, {} bytes, identical", a.stdout.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("epsilon inequality and categorical = oracle", epsilon_inequality),
        ("doctrine laws", doctrine_laws),
        ("choice from epis and from epsilon", choice),
        ("kernel and soundness audit of the corpus", kernel_and_audit),
        ("epsilon/exists semantic coincidence", epsilon_exists),
        ("substitution lemma", substitution_lemma),
        ("Empty-type guard", empty_guard),
        ("deterministic law report", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
