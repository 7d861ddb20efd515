//! The full certification battery.
//!
//! Each check returns a named outcome; independent checks run concurrently
//! and are reported in a fixed order, so the result depends only on the
//! level bound and the seed.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::{rat, ratio, Rational};
use crate::config::Config;
use crate::cosets::{affine_relation, coset_free_powers};
use crate::cover::{psi_defines_otimes, rn_preservation, rn_reduct_check, sigma_ring_check};
use crate::dclass::{
    dn_defect, inductive_subsum, is_in_dn, odd_extraction_check, polarization_defect, vanishes_at_random_points,
    Defect,
};
use crate::error::Result;
use crate::jets::{DerivWord, JetContext, Operator};
use crate::poly::{MPoly, Monomial, RatFunc, VarRegistry};

/// Every word of length `0..=max_len` over `alphabet` letters, then `extra`
/// seeded two-term combinations of nonempty words.
pub fn operator_test_set(alphabet: u16, max_len: usize, extra: usize, seed: u64) -> Vec<Operator> {
    let mut words = vec![DerivWord::identity()];
    let mut layer = vec![DerivWord::identity()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| (0..alphabet).map(move |l| DerivWord::letter(l).compose(w)))
            .collect();
        layer.sort();
        words.extend(layer.iter().cloned());
    }
    let mut out: Vec<Operator> = words.iter().cloned().map(Operator::word).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nonempty = &words[1..];
    while out.len() < words.len() + extra {
        let a = &nonempty[rng.gen_range(0..nonempty.len())];
        let b = &nonempty[rng.gen_range(0..nonempty.len())];
        if a == b {
            continue;
        }
        let coeff = |rng: &mut ChaCha8Rng| {
            let num = [-3, -2, -1, 1, 2, 3][rng.gen_range(0..6)];
            ratio(num, rng.gen_range(1..=2))
        };
        let (ca, cb) = (coeff(&mut rng), coeff(&mut rng));
        out.push(Operator::from_terms([(a.clone(), ca), (b.clone(), cb)]));
    }
    out
}

/// Words of length `len` whose letters are pairwise distinct, over an
/// alphabet of `alphabet` letters.
pub fn distinct_letter_words(len: usize, alphabet: u16) -> Vec<DerivWord> {
    fn extend(prefix: &mut Vec<u16>, len: usize, alphabet: u16, out: &mut Vec<DerivWord>) {
        if prefix.len() == len {
            out.push(DerivWord::new(prefix.clone()));
            return;
        }
        for l in 0..alphabet {
            if !prefix.contains(&l) {
                prefix.push(l);
                extend(prefix, len, alphabet, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), len, alphabet, &mut out);
    out
}

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub criterion: u8,
    pub name: &'static str,
    pub passed: bool,
    /// Number of individual verdicts that went into the check.
    pub cases: usize,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub max_n: usize,
    pub checks: Vec<CheckOutcome>,
}

impl SuiteOutcome {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Agreement between symbolic verdicts and random evaluation.
#[derive(Debug, Default, Clone, Copy)]
struct Tally {
    cases: usize,
    mismatches: usize,
}

impl Tally {
    fn record(&mut self, defect: &Defect, seed: u64) -> Result<()> {
        self.record_raw(&defect.value, &defect.ctx, seed)
    }

    fn record_raw(&mut self, value: &RatFunc, ctx: &JetContext, seed: u64) -> Result<()> {
        self.cases += 1;
        if vanishes_at_random_points(value, ctx, seed, 5)? != value.is_zero() {
            self.mismatches += 1;
        }
        Ok(())
    }

    fn merge(&mut self, other: Tally) {
        self.cases += other.cases;
        self.mismatches += other.mismatches;
    }
}

struct Partial {
    outcome: CheckOutcome,
    tally: Tally,
}

fn outcome(criterion: u8, name: &'static str, failures: Vec<String>, cases: usize) -> CheckOutcome {
    CheckOutcome {
        criterion,
        name,
        passed: failures.is_empty(),
        cases,
        note: if failures.is_empty() {
            "ok".to_string()
        } else {
            failures.join("; ")
        },
    }
}

fn case_seed(seed: u64, criterion: u64, index: usize) -> u64 {
    seed ^ (criterion << 48) ^ (index as u64).wrapping_mul(0x9E37_79B9)
}

fn derivation(cfg: &Config) -> Result<Partial> {
    let d = Operator::letter(0);
    let mut tally = Tally::default();
    let ctx = Arc::new(JetContext::make(1, 1, 1, cfg)?);
    let defect = Defect::new(ctx.clone(), dn_defect(&ctx, &d, 1, &ctx.generator(0), cfg)?);
    let polar = polarization_defect(&d, 1, cfg)?;
    tally.record(&defect, case_seed(cfg.seed, 1, 0))?;
    tally.record(&polar, case_seed(cfg.seed, 1, 1))?;
    let mut failures = Vec::new();
    if !defect.is_zero() {
        failures.push(format!("level-one defect of D1 is {}", defect.render()));
    }
    if !polar.is_zero() {
        failures.push(format!("multilinear defect of D1 is {}", polar.render()));
    }
    Ok(Partial {
        outcome: outcome(1, "derivations are D_1", failures, 2),
        tally,
    })
}

fn word_inclusion(max_n: usize, cfg: &Config) -> Result<Partial> {
    let top = max_n.min(4);
    let mut jobs = Vec::new();
    for len in 1..=top {
        for w in distinct_letter_words(len, top as u16) {
            for n in len..=top {
                jobs.push((w.clone(), n));
            }
        }
    }
    let results: Vec<Result<(Vec<String>, Tally)>> = jobs
        .par_iter()
        .enumerate()
        .map(|(i, (w, n))| {
            let op = Operator::word(w.clone());
            let mut tally = Tally::default();
            let mut failures = Vec::new();
            for level in [*n, n + 1] {
                let v = is_in_dn(&op, level, cfg)?;
                tally.record(&v.defect, case_seed(cfg.seed, 2, 2 * i + level))?;
                if !v.in_dn {
                    failures.push(format!("{w} not in D_{level}"));
                }
            }
            Ok((failures, tally))
        })
        .collect();
    let mut failures = Vec::new();
    let mut tally = Tally::default();
    for r in results {
        let (f, t) = r?;
        failures.extend(f);
        tally.merge(t);
    }
    Ok(Partial {
        outcome: outcome(2, "words of length l lie in D_l", failures, 2 * jobs.len()),
        tally,
    })
}

fn strict_separation(max_n: usize, cfg: &Config) -> Result<Partial> {
    let top = max_n.min(5);
    let results: Vec<Result<(Vec<String>, Tally)>> = (1..=top)
        .into_par_iter()
        .map(|n| {
            let op = Operator::power(0, n + 1);
            let mut tally = Tally::default();
            let mut failures = Vec::new();
            let below = is_in_dn(&op, n, cfg)?;
            tally.record(&below.defect, case_seed(cfg.seed, 3, 2 * n))?;
            match &below.witness {
                Some(w) if !below.in_dn => {
                    let value = below.defect.value.evaluate(&w.assignment.iter().cloned().collect())?;
                    if value != w.value || value == Rational::from_integer(0.into()) {
                        failures.push(format!("witness for D1^{} at level {n} does not evaluate", n + 1));
                    }
                }
                _ => failures.push(format!("D1^{} lies in D_{n}", n + 1)),
            }
            let above = is_in_dn(&op, n + 1, cfg)?;
            tally.record(&above.defect, case_seed(cfg.seed, 3, 2 * n + 1))?;
            if !above.in_dn {
                failures.push(format!("D1^{} not in D_{}", n + 1, n + 1));
            }
            Ok((failures, tally))
        })
        .collect();
    let mut failures = Vec::new();
    let mut tally = Tally::default();
    for r in results {
        let (f, t) = r?;
        failures.extend(f);
        tally.merge(t);
    }
    Ok(Partial {
        outcome: outcome(3, "D1^(n+1) separates D_n from D_(n+1)", failures, 2 * top),
        tally,
    })
}

fn polarization(max_n: usize, ops: &[Operator], cfg: &Config) -> Result<Partial> {
    let top = max_n.min(3);
    let jobs: Vec<(usize, usize)> = (0..ops.len()).flat_map(|i| (1..=top).map(move |n| (i, n))).collect();
    let results: Vec<Result<(Vec<String>, Tally)>> = jobs
        .par_iter()
        .map(|&(i, n)| {
            let op = &ops[i];
            let mut tally = Tally::default();
            let mut failures = Vec::new();
            let direct = is_in_dn(op, n, cfg)?;
            let polar = polarization_defect(op, n, cfg)?;
            tally.record(&direct.defect, case_seed(cfg.seed, 4, 2 * (i * 8 + n)))?;
            tally.record(&polar, case_seed(cfg.seed, 4, 2 * (i * 8 + n) + 1))?;
            if direct.in_dn != polar.is_zero() {
                failures.push(format!("forms disagree for {op} at level {n}"));
            }
            if direct.in_dn && !odd_extraction_check(op, n, cfg)? {
                failures.push(format!("odd extraction fails for {op} at level {n}"));
            }
            Ok((failures, tally))
        })
        .collect();
    let mut failures = Vec::new();
    let mut tally = Tally::default();
    for r in results {
        let (f, t) = r?;
        failures.extend(f);
        tally.merge(t);
    }
    Ok(Partial {
        outcome: outcome(4, "one-variable and multilinear forms agree", failures, jobs.len()),
        tally,
    })
}

fn subsum(max_n: usize, cfg: &Config) -> Result<Partial> {
    let top = max_n.min(4);
    let mut tally = Tally::default();
    let mut failures = Vec::new();
    for n in 1..=top {
        let s = inductive_subsum(n, cfg)?;
        tally.record(&s, case_seed(cfg.seed, 5, n))?;
        if !s.is_zero() {
            failures.push(format!("subsum at level {n} is {}", s.render()));
        }
    }
    Ok(Partial {
        outcome: outcome(5, "inductive subsum vanishes", failures, top),
        tally,
    })
}

fn cover_equivalence(max_n: usize, ops: &[Operator], cfg: &Config) -> Result<Partial> {
    let top = max_n.min(4);
    let jobs: Vec<(usize, usize)> = (0..ops.len()).flat_map(|i| (1..=top).map(move |n| (i, n))).collect();
    let results: Vec<Result<(Vec<String>, Tally)>> = jobs
        .par_iter()
        .map(|&(i, n)| {
            let op = &ops[i];
            let mut tally = Tally::default();
            let moved = rn_preservation(op, n, cfg)?;
            let direct = is_in_dn(op, n, cfg)?;
            tally.record(&moved.defect, case_seed(cfg.seed, 6, 2 * (i * 8 + n)))?;
            tally.record(&direct.defect, case_seed(cfg.seed, 6, 2 * (i * 8 + n) + 1))?;
            let failures = if moved.in_dn == direct.in_dn {
                Vec::new()
            } else {
                vec![format!("preservation and membership disagree for {op} at level {n}")]
            };
            Ok((failures, tally))
        })
        .collect();
    let mut failures = Vec::new();
    let mut tally = Tally::default();
    for r in results {
        let (f, t) = r?;
        failures.extend(f);
        tally.merge(t);
    }
    Ok(Partial {
        outcome: outcome(6, "sigma_F preserves R_n iff F in D_n", failures, jobs.len()),
        tally,
    })
}

fn definability(max_n: usize, cfg: &Config) -> Result<Partial> {
    let mut failures = Vec::new();
    let mut cases = 1;
    if !psi_defines_otimes(cfg)? {
        failures.push("the product is not recovered from R_1".to_string());
    }
    for n in 1..=max_n.min(3) {
        cases += 1;
        if !rn_reduct_check(n, cfg)? {
            failures.push(format!("R_{n} is not a reduct"));
        }
    }
    cases += 2;
    if !sigma_ring_check(&Operator::letter(0), cfg)? {
        failures.push("D1 does not respect the product".to_string());
    }
    if sigma_ring_check(&Operator::power(0, 2), cfg)? {
        failures.push("D1.D1 respects the product".to_string());
    }
    Ok(Partial {
        outcome: outcome(7, "product and relations are definable", failures, cases),
        tally: Tally::default(),
    })
}

/// Integer coefficient vectors (constant term first) of polynomials in one
/// variable, with some members built as combinations of earlier ones.
pub fn coset_corpus(count: usize, seed: u64) -> Vec<Vec<[i64; 4]>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let size = rng.gen_range(1..=3);
        let mut tuple: Vec<[i64; 4]> = (0..size)
            .map(|_| std::array::from_fn(|_| rng.gen_range(-2..=2)))
            .collect();
        if size >= 2 && rng.gen_bool(0.4) {
            let weights: Vec<i64> = (0..size - 1).map(|_| rng.gen_range(-2..=2)).collect();
            let mut last = [0i64; 4];
            for (w, p) in weights.iter().zip(&tuple) {
                for k in 0..4 {
                    last[k] += w * p[k];
                }
            }
            last[0] += rng.gen_range(-2..=2);
            if last.iter().any(|c| c.abs() > 2) {
                continue;
            }
            tuple[size - 1] = last;
        }
        out.push(tuple);
    }
    out
}

fn brute_force_related(tuple: &[[i64; 4]]) -> bool {
    let n = tuple.len();
    let mut eps = vec![-5i64; n + 1];
    loop {
        if eps[..n].iter().any(|&e| e != 0) {
            let holds = (0..4).all(|k| {
                let lhs: i64 = tuple.iter().zip(&eps).map(|(p, e)| p[k] * e).sum();
                lhs == if k == 0 { eps[n] } else { 0 }
            });
            if holds {
                return true;
            }
        }
        let mut i = 0;
        loop {
            if i == eps.len() {
                return false;
            }
            if eps[i] < 5 {
                eps[i] += 1;
                break;
            }
            eps[i] = -5;
            i += 1;
        }
    }
}

/// Polynomial in `t` from coefficients, constant term first.
pub fn poly_in(t: &Monomial, coeffs: &[i64]) -> RatFunc {
    let mut p = MPoly::zero();
    let mut power = Monomial::one();
    for &c in coeffs {
        p = p + MPoly::monomial(power.clone(), rat(c));
        power = power.mul(t);
    }
    p.into()
}

fn coset_freeness(cfg: &Config) -> Result<Partial> {
    let mut failures = Vec::new();
    for n in 1..=8 {
        if !coset_free_powers(n)? {
            failures.push(format!("powers up to {n} are related"));
        }
    }
    let mut reg = VarRegistry::new();
    let t = Monomial::var(reg.base("t"), 1);
    let corpus = coset_corpus(240, cfg.seed ^ 0xC05E7);
    let mut disagreements = 0;
    for tuple in &corpus {
        let funcs: Vec<RatFunc> = tuple.iter().map(|c| poly_in(&t, c)).collect();
        let rel = affine_relation(&funcs)?;
        if let Some(r) = &rel {
            if !r.holds_for(&funcs) {
                failures.push(format!("returned relation {r} does not hold"));
            }
        }
        if rel.is_some() != brute_force_related(tuple) {
            disagreements += 1;
        }
    }
    if disagreements > 0 {
        failures.push(format!("{disagreements} of {} tuples disagree with bounded search", corpus.len()));
    }
    Ok(Partial {
        outcome: outcome(8, "powers are coset-free; relations match bounded search", failures, 8 + corpus.len()),
        tally: Tally::default(),
    })
}

/// Runs the battery for levels up to `max_n`. Checks that pair level `n`
/// with level `n + 1` may reach `max_n + 1`.
pub fn run_suite(max_n: usize, cfg: &Config) -> Result<SuiteOutcome> {
    let cfg = Config {
        max_n: cfg.max_n.max(max_n + 1),
        ..*cfg
    };
    let ops = operator_test_set(2, 3, 5, cfg.seed);
    let tasks: Vec<Box<dyn Fn() -> Result<Partial> + Sync + Send + '_>> = vec![
        Box::new(|| derivation(&cfg)),
        Box::new(|| word_inclusion(max_n, &cfg)),
        Box::new(|| strict_separation(max_n, &cfg)),
        Box::new(|| polarization(max_n, &ops, &cfg)),
        Box::new(|| subsum(max_n, &cfg)),
        Box::new(|| cover_equivalence(max_n, &ops, &cfg)),
        Box::new(|| definability(max_n, &cfg)),
        Box::new(|| coset_freeness(&cfg)),
    ];
    let partials: Vec<Partial> = tasks.par_iter().map(|task| task()).collect::<Result<_>>()?;
    let mut tally = Tally::default();
    let mut checks = Vec::with_capacity(partials.len() + 1);
    for p in partials {
        tally.merge(p.tally);
        checks.push(p.outcome);
    }
    let oracle_failures = if tally.mismatches == 0 {
        Vec::new()
    } else {
        vec![format!("{} of {} defects disagree with random evaluation", tally.mismatches, tally.cases)]
    };
    checks.push(outcome(9, "symbolic verdicts match random evaluation", oracle_failures, tally.cases));
    Ok(SuiteOutcome { max_n, checks })
}
