//! Exhaustive (and, past fixed size thresholds, seeded-sample) verification
//! of the doctrine laws.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{
    epsilon_categorical, epsilon_oracle, epsilon_sides, reindex, reindex_by_pullback, section_from_epsilon, sigma,
    Fiber, Projection,
};
use crate::finset::{
    all_morphisms, compose, copair, image_factorize, product_map, pullback, section_of_epi, FinMor, FinObj, Subset,
};

/// Products up to this size are checked on every subset.
pub const EXHAUSTIVE_PRODUCT: usize = 12;
/// Beck–Chevalley squares are exhaustive up to this `|X × Y|`.
pub const EXHAUSTIVE_BECK_CHEVALLEY: usize = 10;
/// Larger products, up to this size, are sampled.
pub const SAMPLED_PRODUCT: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// One line of a law report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawVerdict {
    pub law: &'static str,
    pub instance: String,
    pub verdict: Verdict,
    pub checked: u64,
    pub exhaustive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl LawVerdict {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Accumulates checks for one law instance, keeping the first failure.
struct Tally {
    law: &'static str,
    instance: String,
    checked: u64,
    exhaustive: bool,
    counterexample: Option<String>,
}

impl Tally {
    fn new(law: &'static str, instance: String, exhaustive: bool) -> Self {
        Tally {
            law,
            instance,
            checked: 0,
            exhaustive,
            counterexample: None,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(what());
        }
    }

    fn finish(self) -> LawVerdict {
        LawVerdict {
            law: self.law,
            instance: self.instance,
            verdict: if self.counterexample.is_none() {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
            checked: self.checked,
            exhaustive: self.exhaustive,
            counterexample: self.counterexample,
        }
    }
}

/// How to pick subsets once a carrier is past the exhaustive threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Samples {
    pub count: usize,
    pub seed: u64,
}

impl Default for Samples {
    fn default() -> Self {
        Samples { count: 64, seed: 0 }
    }
}

impl Samples {
    fn rng(&self, salt: &[usize]) -> ChaCha8Rng {
        let mixed = salt.iter().fold(self.seed, |h, &s| {
            h.rotate_left(17) ^ (s as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
        });
        ChaCha8Rng::seed_from_u64(mixed)
    }
}

fn random_subset(rng: &mut ChaCha8Rng, carrier: FinObj) -> Subset {
    let n = carrier.size();
    let bits: u64 = rng.gen();
    Subset::from_mask(carrier, if n >= 64 { bits } else { bits & ((1u64 << n) - 1) })
}

/// Either every subset of `carrier` (when at most `threshold` elements) or
/// `samples.count` seeded random ones.
fn subsets(carrier: FinObj, threshold: usize, samples: &Samples, salt: &[usize]) -> (Vec<Subset>, bool) {
    if carrier.size() <= threshold {
        (Fiber::new(carrier).elements().collect(), true)
    } else {
        let mut rng = samples.rng(salt);
        (
            (0..samples.count).map(|_| random_subset(&mut rng, carrier)).collect(),
            false,
        )
    }
}

/// `Σ_π s ≤ t ⇔ s ≤ π* t` for `s ⊆ X × Y`, `t ⊆ X`.
pub fn verify_adjunction(pi: &Projection, samples: &Samples) -> LawVerdict {
    let (x, y) = (pi.base(), pi.fiber_obj());
    let (ss, exhaustive) = subsets(pi.total(), EXHAUSTIVE_PRODUCT, samples, &[1, x.size(), y.size()]);
    let (ts, _) = if exhaustive {
        (Fiber::new(x).elements().collect(), true)
    } else {
        subsets(x, 0, samples, &[2, x.size(), y.size()])
    };
    let mut tally = Tally::new("adjunction", format!("X={x},Y={y}"), exhaustive);
    let pulled: Vec<Subset> = ts.iter().map(|t| reindex(pi.morphism(), t).unwrap()).collect();
    for s in &ss {
        let sig = sigma(pi, s).unwrap();
        for (t, pt) in ts.iter().zip(&pulled) {
            let left = sig.leq(t).unwrap();
            let right = s.leq(pt).unwrap();
            tally.check(left == right, || format!("s={s}, t={t}"));
        }
    }
    tally.finish()
}

/// `Σ_{π′} (f × id_X)* s = f* Σ_π s` for `f : Z → Y`, `π : Y × X → Y`,
/// `π′ : Z × X → Z` and `s ⊆ Y × X`.
pub fn verify_beck_chevalley(f: &FinMor, x: FinObj, samples: &Samples) -> LawVerdict {
    let mut tally = Tally::new(
        "beck-chevalley",
        format!("X={x},f={:?}:{}->{}", f.table(), f.dom(), f.cod()),
        true,
    );
    beck_chevalley_into(&mut tally, f, x, samples);
    tally.finish()
}

fn beck_chevalley_into(tally: &mut Tally, f: &FinMor, x: FinObj, samples: &Samples) {
    let (z, y) = (f.dom(), f.cod());
    let pi = Projection::new(y, x).unwrap();
    let pi_z = Projection::new(z, x).unwrap();
    let f_x = product_map(f, &FinMor::identity(x)).unwrap();
    let mut salt = vec![3, x.size(), y.size(), z.size()];
    salt.extend_from_slice(f.table());
    let (ss, exhaustive) = subsets(pi.total(), EXHAUSTIVE_BECK_CHEVALLEY, samples, &salt);
    tally.exhaustive &= exhaustive;
    for s in &ss {
        let left = sigma(&pi_z, &reindex(&f_x, s).unwrap()).unwrap();
        let right = reindex(f, &sigma(&pi, s).unwrap()).unwrap();
        tally.check(left == right, || format!("f={:?}, s={s}", f.table()));
    }
}

/// Configuration of the full law suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LawConfig {
    /// Upper bound on every individual carrier.
    pub max_size: usize,
    pub samples: Samples,
}

impl Default for LawConfig {
    fn default() -> Self {
        LawConfig {
            max_size: EXHAUSTIVE_PRODUCT,
            samples: Samples::default(),
        }
    }
}

pub struct LawSuite {
    config: LawConfig,
}

impl LawSuite {
    pub fn new(config: LawConfig) -> Self {
        LawSuite { config }
    }

    fn sizes(&self, cap: usize) -> std::ops::RangeInclusive<usize> {
        1..=self.config.max_size.min(cap)
    }

    /// Pointed pairs `(X, Y)` whose product is small enough to check.
    fn product_pairs(&self, limit: usize) -> Vec<(FinObj, FinObj)> {
        let n = self.config.max_size;
        (1..=n)
            .flat_map(|x| (1..=n).map(move |y| (x, y)))
            .filter(|(x, y)| x * y <= limit)
            .map(|(x, y)| (FinObj(x), FinObj(y)))
            .collect()
    }

    /// Runs every law in a fixed order, streaming one verdict per instance.
    pub fn run(&self, sink: &mut dyn FnMut(LawVerdict)) {
        self.boolean_algebra(sink);
        self.reindex_laws(sink);
        self.factorization(sink);
        self.regular_epi_stability(sink);
        self.lem_coproduct(sink);
        self.adjunction(sink);
        self.beck_chevalley(sink);
        self.epsilon(sink);
        self.choice(sink);
    }

    pub fn run_collect(&self) -> Vec<LawVerdict> {
        let mut out = Vec::new();
        self.run(&mut |v| out.push(v));
        out
    }

    pub fn boolean_algebra(&self, sink: &mut dyn FnMut(LawVerdict)) {
        for n in self.sizes(5) {
            let fib = Fiber::new(FinObj(n));
            let mut tally = Tally::new("boolean-algebra", format!("A={n}"), true);
            let all: Vec<Subset> = fib.elements().collect();
            let (top, bot) = (fib.top(), fib.bot());
            for a in &all {
                let na = fib.neg(a).unwrap();
                tally.check(fib.meet(a, &top).unwrap() == *a, || format!("a∧⊤≠a, a={a}"));
                tally.check(fib.join(a, &bot).unwrap() == *a, || format!("a∨⊥≠a, a={a}"));
                tally.check(fib.meet(a, &na).unwrap() == bot, || format!("a∧¬a≠⊥, a={a}"));
                tally.check(fib.join(a, &na).unwrap() == top, || format!("a∨¬a≠⊤, a={a}"));
                for b in &all {
                    let ab = fib.meet(a, b).unwrap();
                    let a_or_b = fib.join(a, b).unwrap();
                    tally.check(ab == fib.meet(b, a).unwrap(), || {
                        format!("∧ not commutative at {a}, {b}")
                    });
                    tally.check(a_or_b == fib.join(b, a).unwrap(), || {
                        format!("∨ not commutative at {a}, {b}")
                    });
                    tally.check(fib.join(a, &ab).unwrap() == *a, || {
                        format!("absorption fails at {a}, {b}")
                    });
                    tally.check(fib.meet(a, &a_or_b).unwrap() == *a, || {
                        format!("absorption fails at {a}, {b}")
                    });
                    tally.check(fib.leq(a, b).unwrap() == (ab == *a), || {
                        format!("order mismatch at {a}, {b}")
                    });
                    for c in &all {
                        let assoc = fib.meet(&ab, c).unwrap() == fib.meet(a, &fib.meet(b, c).unwrap()).unwrap()
                            && fib.join(&a_or_b, c).unwrap() == fib.join(a, &fib.join(b, c).unwrap()).unwrap();
                        tally.check(assoc, || format!("associativity fails at {a}, {b}, {c}"));
                        let dist = fib.meet(a, &fib.join(b, c).unwrap()).unwrap()
                            == fib.join(&ab, &fib.meet(a, c).unwrap()).unwrap()
                            && fib.join(a, &fib.meet(b, c).unwrap()).unwrap()
                                == fib.meet(&a_or_b, &fib.join(a, c).unwrap()).unwrap();
                        tally.check(dist, || format!("distributivity fails at {a}, {b}, {c}"));
                    }
                }
            }
            sink(tally.finish());
        }
    }

    pub fn reindex_laws(&self, sink: &mut dyn FnMut(LawVerdict)) {
        let sizes: Vec<FinObj> = self.sizes(4).map(FinObj).collect();
        for &x in &sizes {
            for &y in &sizes {
                let fib_y = Fiber::new(y);
                let subs: Vec<Subset> = fib_y.elements().collect();
                let inst = format!("X={x},Y={y}");
                let mut hom = Tally::new("reindex-homomorphism", inst.clone(), true);
                let mut pb = Tally::new("reindex-pullback", inst, true);
                for f in all_morphisms(x, y) {
                    let fx = Fiber::new(x);
                    hom.check(reindex(&f, &fib_y.top()).unwrap() == fx.top(), || format!("⊤ at {f}"));
                    hom.check(reindex(&f, &fib_y.bot()).unwrap() == fx.bot(), || format!("⊥ at {f}"));
                    for a in &subs {
                        let fa = reindex(&f, a).unwrap();
                        pb.check(reindex_by_pullback(&f, a).unwrap() == fa, || format!("f={f}, s={a}"));
                        hom.check(reindex(&f, &a.complement()).unwrap() == fa.complement(), || {
                            format!("¬ at f={f}, s={a}")
                        });
                        for b in &subs {
                            let fb = reindex(&f, b).unwrap();
                            hom.check(
                                reindex(&f, &a.meet(b).unwrap()).unwrap() == fa.meet(&fb).unwrap(),
                                || format!("∧ at f={f}, {a}, {b}"),
                            );
                            hom.check(
                                reindex(&f, &a.join(b).unwrap()).unwrap() == fa.join(&fb).unwrap(),
                                || format!("∨ at f={f}, {a}, {b}"),
                            );
                        }
                    }
                }
                sink(hom.finish());
                sink(pb.finish());
            }
        }
        for &x in &sizes {
            for &y in &sizes {
                for &z in &sizes {
                    let mut tally = Tally::new("reindex-functoriality", format!("X={x},Y={y},Z={z}"), true);
                    let subs: Vec<Subset> = Fiber::new(z).elements().collect();
                    if x == y {
                        for s in Fiber::new(x).elements() {
                            let id = FinMor::identity(x);
                            tally.check(reindex(&id, &s).unwrap() == s, || format!("id* s ≠ s at {s}"));
                        }
                    }
                    for f in all_morphisms(x, y) {
                        for g in all_morphisms(y, z) {
                            let gf = compose(&g, &f).unwrap();
                            for s in &subs {
                                let lhs = reindex(&gf, s).unwrap();
                                let rhs = reindex(&f, &reindex(&g, s).unwrap()).unwrap();
                                tally.check(lhs == rhs, || format!("f={f}, g={g}, s={s}"));
                            }
                        }
                    }
                    sink(tally.finish());
                }
            }
        }
    }

    pub fn factorization(&self, sink: &mut dyn FnMut(LawVerdict)) {
        for x in self.sizes(4) {
            for y in self.sizes(4) {
                let mut tally = Tally::new("image-factorization", format!("X={x},Y={y}"), true);
                for f in all_morphisms(FinObj(x), FinObj(y)) {
                    let fac = image_factorize(&f);
                    let ok = compose(&fac.m, &fac.e).unwrap() == f && fac.e.is_epi() && fac.m.is_mono();
                    tally.check(ok, || format!("f={f}"));
                }
                sink(tally.finish());
            }
        }
    }

    /// Pulling a surjection back along any arrow yields a surjection.
    pub fn regular_epi_stability(&self, sink: &mut dyn FnMut(LawVerdict)) {
        for y in self.sizes(3) {
            let mut tally = Tally::new("regular-epi-stability", format!("Y={y}"), true);
            for e_dom in self.sizes(3) {
                for e in all_morphisms(FinObj(e_dom), FinObj(y)).filter(FinMor::is_epi) {
                    for w in self.sizes(3) {
                        for f in all_morphisms(FinObj(w), FinObj(y)) {
                            let pb = pullback(&f, &e).unwrap();
                            tally.check(pb.p1.is_epi(), || format!("e={e}, f={f}"));
                        }
                    }
                }
            }
            sink(tally.finish());
        }
    }

    /// Every subset and its complement present the carrier as a coproduct.
    pub fn lem_coproduct(&self, sink: &mut dyn FnMut(LawVerdict)) {
        for n in self.sizes(6) {
            let y = FinObj(n);
            let mut tally = Tally::new("lem-coproduct", format!("Y={n}"), true);
            for s in Fiber::new(y).elements() {
                let ns = s.complement();
                let (m, nm) = (s.inclusion(), ns.inclusion());
                let disjoint = pullback(&m, &nm).unwrap().obj == FinObj::INITIAL;
                tally.check(disjoint, || format!("m*¬m not initial for {s}"));
                for zc in 1..=3 {
                    let z = FinObj(zc);
                    for f in all_morphisms(m.dom(), z) {
                        for g in all_morphisms(nm.dom(), z) {
                            let med = copair(&f, &g, &m, &nm).unwrap();
                            let ok = compose(&med, &m).unwrap() == f && compose(&med, &nm).unwrap() == g;
                            tally.check(ok, || format!("s={s}, f={f}, g={g}"));
                        }
                    }
                    // uniqueness: h ↦ (h m, h ¬m) is injective on all of Hom(Y, Z)
                    let mut seen = std::collections::HashSet::new();
                    for h in all_morphisms(y, z) {
                        let legs = (compose(&h, &m).unwrap(), compose(&h, &nm).unwrap());
                        tally.check(seen.insert(legs), || format!("mediator not unique for s={s}, Z={z}"));
                    }
                }
            }
            sink(tally.finish());
        }
    }

    pub fn adjunction(&self, sink: &mut dyn FnMut(LawVerdict)) {
        for (x, y) in self.product_pairs(SAMPLED_PRODUCT) {
            let pi = Projection::new(x, y).unwrap();
            let mut v = verify_adjunction(&pi, &self.config.samples);
            // Σ via factorization agrees with projecting members directly
            let (ss, _) = subsets(
                pi.total(),
                EXHAUSTIVE_PRODUCT,
                &self.config.samples,
                &[4, x.size(), y.size()],
            );
            let mut direct = Tally::new("sigma-projection", format!("X={x},Y={y}"), v.exhaustive);
            for s in &ss {
                let projected = Subset::new(x, s.members().iter().map(|&i| pi.product().decode(i).0)).unwrap();
                direct.check(sigma(&pi, s).unwrap() == projected, || format!("s={s}"));
            }
            v.instance = format!("X={x},Y={y}");
            sink(v);
            sink(direct.finish());
        }
    }

    pub fn beck_chevalley(&self, sink: &mut dyn FnMut(LawVerdict)) {
        for (x, y) in self.product_pairs(SAMPLED_PRODUCT) {
            for z in self.sizes(3) {
                let mut tally = Tally::new("beck-chevalley", format!("X={x},Y={y},Z={z}"), true);
                for f in all_morphisms(FinObj(z), y) {
                    beck_chevalley_into(&mut tally, &f, x, &self.config.samples);
                }
                sink(tally.finish());
            }
        }
    }

    pub fn epsilon(&self, sink: &mut dyn FnMut(LawVerdict)) {
        for (x, y) in self.product_pairs(SAMPLED_PRODUCT) {
            let pi = Projection::new(x, y).unwrap();
            let (ss, exhaustive) = subsets(
                pi.total(),
                EXHAUSTIVE_PRODUCT,
                &self.config.samples,
                &[5, x.size(), y.size()],
            );
            let inst = format!("X={x},Y={y}");
            let mut ineq = Tally::new("epsilon-inequality", inst.clone(), exhaustive);
            let mut oracle = Tally::new("epsilon-oracle", inst.clone(), exhaustive);
            let mut equal = Tally::new("epsilon-equality", inst, exhaustive);
            for psi in &ss {
                let (lhs, rhs) = epsilon_sides(&pi, psi).unwrap();
                ineq.check(lhs.leq(&rhs).unwrap(), || format!("ψ={psi}"));
                equal.check(lhs == rhs, || format!("ψ={psi}"));
                let same = epsilon_categorical(&pi, psi).unwrap() == epsilon_oracle(&pi, psi).unwrap();
                oracle.check(same, || format!("ψ={psi}"));
            }
            sink(ineq.finish());
            sink(oracle.finish());
            sink(equal.finish());
        }
    }

    /// Sections of every surjection, directly and through ε.
    pub fn choice(&self, sink: &mut dyn FnMut(LawVerdict)) {
        for x in self.sizes(5) {
            for y in self.sizes(5) {
                let inst = format!("X={x},Y={y}");
                let mut direct = Tally::new("ac-section", inst.clone(), true);
                let mut via_eps = Tally::new("ac-from-epsilon", inst, true);
                let id = FinMor::identity(FinObj(y));
                for e in all_morphisms(FinObj(x), FinObj(y)).filter(FinMor::is_epi) {
                    let s = section_of_epi(&e).unwrap();
                    direct.check(compose(&e, &s).unwrap() == id, || format!("e={e}"));
                    match section_from_epsilon(&e) {
                        Ok(k) => via_eps.check(compose(&e, &k).unwrap() == id && k == s, || format!("e={e}, s={k}")),
                        Err(err) => via_eps.check(false, || format!("e={e}: {err}")),
                    }
                }
                sink(direct.finish());
                sink(via_eps.finish());
            }
        }
    }
}
