//! End-to-end acceptance battery. Prints one line per criterion and fails
//! if any criterion fails or exceeds its time budget.
//!
//! Symbolic verdicts are cross-checked against the numeric jet evaluation
//! in `oracle`, and affine relations against bounded exhaustive search.

mod oracle;

use std::process::Command;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use hodkit::arith::Rational;
use hodkit::cosets::{affine_relation, coset_free_powers};
use hodkit::cover::{psi_defines_otimes, rn_preservation, rn_reduct_check, sigma_ring_check, sigma_ring_defect};
use hodkit::dclass::{
    dn_defect, inductive_subsum, is_in_dn, odd_extraction_check, polarization_defect, separation_witness, Defect,
};
use hodkit::jets::{DerivWord, JetContext, Operator};
use hodkit::poly::{Monomial, RatFunc, VarRegistry};
use hodkit::suite::{coset_corpus, operator_test_set, poly_in};
use hodkit::Config;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use oracle::Point;

/// Agreement between symbolic defects and the numeric oracle.
#[derive(Default)]
struct Tally {
    defects: usize,
    failures: Vec<String>,
}

static TALLY: Mutex<Tally> = Mutex::new(Tally {
    defects: 0,
    failures: Vec::new(),
});

/// Evaluates `defect` and the numeric route at five seeded points; both must
/// agree at every point, and the symbolic verdict must match whether all
/// five numeric values vanish.
fn cross_check(label: &str, defect: &Defect, numeric: impl Fn(&Point) -> Rational) {
    let mut rng = ChaCha8Rng::seed_from_u64(label.bytes().fold(17u64, |h, b| h.wrapping_mul(31).wrapping_add(b as u64)));
    let mut all_zero = true;
    let mut failure = None;
    let mut done = 0;
    while done < 5 {
        let point = Point::random(&defect.ctx, &mut rng);
        let symbolic = match defect.value.evaluate(&point.assignment) {
            Ok(v) => v,
            Err(_) => continue,
        };
        let value = numeric(&point);
        if value != symbolic {
            failure = Some(format!("{label}: symbolic {symbolic} vs numeric {value}"));
        }
        all_zero &= value.is_zero();
        done += 1;
    }
    if failure.is_none() && all_zero != defect.is_zero() {
        failure = Some(format!("{label}: symbolic zero = {}, numeric zero = {all_zero}", defect.is_zero()));
    }
    let mut t = TALLY.lock().unwrap();
    t.defects += 1;
    t.failures.extend(failure);
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: true,
        detail: detail.into(),
    }
}

fn from_failures(failures: Vec<String>, cases: usize) -> Outcome {
    if failures.is_empty() {
        pass(format!("{cases} cases"))
    } else {
        Outcome {
            ok: false,
            detail: format!("{} of {cases} cases failed: {}", failures.len(), failures.join("; ")),
        }
    }
}

fn cfg() -> Config {
    Config::default()
}

fn criterion_1() -> Outcome {
    let d = Operator::letter(0);
    let ctx = std::sync::Arc::new(JetContext::make(1, 1, 1, &cfg()).unwrap());
    let dn = Defect::new(ctx.clone(), dn_defect(&ctx, &d, 1, &ctx.generator(0), &cfg()).unwrap());
    let polar = polarization_defect(&d, 1, &cfg()).unwrap();
    cross_check("c1 dn D1", &dn, |p| oracle::dn_defect(&d, 1, p));
    cross_check("c1 polar D1", &polar, |p| oracle::polarization_defect(&d, 1, p));
    let mut failures = Vec::new();
    if !dn.is_zero() {
        failures.push(format!("D(x^2) - 2x Dx = {}", dn.render()));
    }
    if !polar.is_zero() {
        failures.push(format!("multilinear defect {}", polar.render()));
    }
    from_failures(failures, 2)
}

fn distinct_words(len: usize, alphabet: u16) -> Vec<Vec<u16>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for w in distinct_words(len - 1, alphabet) {
        for l in 0..alphabet {
            if !w.contains(&l) {
                let mut v = w.clone();
                v.push(l);
                out.push(v);
            }
        }
    }
    out
}

fn criterion_2() -> Outcome {
    let mut failures = Vec::new();
    let mut cases = 0;
    for len in 1..=4 {
        for letters in distinct_words(len, 4) {
            let op = Operator::word(DerivWord::new(letters));
            for n in len..=4 {
                for level in [n, n + 1] {
                    let v = is_in_dn(&op, level, &cfg()).unwrap();
                    cross_check(&format!("c2 {op} {level}"), &v.defect, |p| oracle::dn_defect(&op, level, p));
                    cases += 1;
                    if !v.in_dn {
                        failures.push(format!("{op} not in D_{level}"));
                    }
                }
            }
        }
    }
    from_failures(failures, cases)
}

fn criterion_3() -> Outcome {
    let mut failures = Vec::new();
    for n in 1..=5 {
        let op = Operator::power(0, n + 1);
        let below = is_in_dn(&op, n, &cfg()).unwrap();
        cross_check(&format!("c3 below {n}"), &below.defect, |p| oracle::dn_defect(&op, n, p));
        match &below.witness {
            Some(w) if !below.in_dn => {
                // recompute the value at the witness along the numeric route
                let point = Point::from_assignment(&below.defect.ctx, &w.assignment);
                let numeric = oracle::dn_defect(&op, n, &point);
                if numeric != w.value || numeric.is_zero() {
                    failures.push(format!("witness for level {n} claims {} but evaluates to {numeric}", w.value));
                }
            }
            _ => failures.push(format!("D1^{} in D_{n}", n + 1)),
        }
        let (defect, w) = separation_witness(n, &cfg()).unwrap();
        let point = Point::from_assignment(&defect.ctx, &w.assignment);
        if oracle::dn_defect(&op, n, &point) != w.value || w.value.is_zero() {
            failures.push(format!("separation witness at level {n} does not verify"));
        }
        let above = is_in_dn(&op, n + 1, &cfg()).unwrap();
        cross_check(&format!("c3 above {n}"), &above.defect, |p| oracle::dn_defect(&op, n + 1, p));
        if !above.in_dn {
            failures.push(format!("D1^{} not in D_{}", n + 1, n + 1));
        }
    }
    from_failures(failures, 15)
}

fn criterion_4(ops: &[Operator]) -> Outcome {
    let mut failures = Vec::new();
    let mut cases = 0;
    let mut extractions = 0;
    for op in ops {
        for n in 1..=3 {
            cases += 1;
            let direct = is_in_dn(op, n, &cfg()).unwrap();
            let polar = polarization_defect(op, n, &cfg()).unwrap();
            cross_check(&format!("c4 dn {op} {n}"), &direct.defect, |p| oracle::dn_defect(op, n, p));
            cross_check(&format!("c4 polar {op} {n}"), &polar, |p| oracle::polarization_defect(op, n, p));
            if direct.in_dn != polar.is_zero() {
                failures.push(format!("{op} level {n}: forms disagree"));
            }
            if direct.in_dn {
                extractions += 1;
                if !odd_extraction_check(op, n, &cfg()).unwrap() {
                    failures.push(format!("{op} level {n}: odd extraction fails"));
                }
            }
        }
    }
    let mut out = from_failures(failures, cases);
    out.detail += &format!(", {extractions} odd extractions");
    out
}

fn criterion_5() -> Outcome {
    let mut failures = Vec::new();
    for n in 1..=4 {
        let s = inductive_subsum(n, &cfg()).unwrap();
        cross_check(&format!("c5 {n}"), &s, |p| oracle::inductive_subsum(n, p));
        if !s.is_zero() {
            failures.push(format!("level {n}: {}", s.render()));
        }
    }
    from_failures(failures, 4)
}

fn criterion_6(ops: &[Operator]) -> Outcome {
    let mut failures = Vec::new();
    let mut cases = 0;
    for op in ops {
        for n in 1..=4 {
            cases += 1;
            let moved = rn_preservation(op, n, &cfg()).unwrap();
            let direct = is_in_dn(op, n, &cfg()).unwrap();
            cross_check(&format!("c6 {op} {n}"), &moved.defect, |p| oracle::preservation_defect(op, n, p));
            if moved.in_dn != direct.in_dn {
                failures.push(format!("{op} level {n}: preservation {} vs membership {}", moved.in_dn, direct.in_dn));
            }
        }
    }
    from_failures(failures, cases)
}

fn criterion_7() -> Outcome {
    let mut failures = Vec::new();
    if !psi_defines_otimes(&cfg()).unwrap() {
        failures.push("psi".to_string());
    }
    for n in 1..=3 {
        if !rn_reduct_check(n, &cfg()).unwrap() {
            failures.push(format!("reduct {n}"));
        }
    }
    if !sigma_ring_check(&Operator::letter(0), &cfg()).unwrap() {
        failures.push("ring check D1".to_string());
    }
    let dd = Operator::power(0, 2);
    if sigma_ring_check(&dd, &cfg()).unwrap() {
        failures.push("ring check D1.D1".to_string());
    }
    let (ctx, defect) = sigma_ring_defect(&dd, &cfg()).unwrap();
    if ctx.render(defect.fiber()) != "2*D1(x1)*D1(x2)" {
        failures.push(format!("ring defect {}", defect.render(&ctx)));
    }
    from_failures(failures, 7)
}

/// Bounded exhaustive search for `Σ e_i p_i = c` with all entries in -5..=5.
fn related_by_search(tuple: &[[i64; 4]]) -> bool {
    let n = tuple.len();
    let range: Vec<i64> = (-5..=5).collect();
    let mut stack = vec![Vec::<i64>::new()];
    while let Some(eps) = stack.pop() {
        if eps.len() == n + 1 {
            if eps[..n].iter().all(|&e| e == 0) {
                continue;
            }
            let ok = (0..4).all(|k| {
                let s: i64 = (0..n).map(|i| eps[i] * tuple[i][k]).sum();
                s == if k == 0 { eps[n] } else { 0 }
            });
            if ok {
                return true;
            }
            continue;
        }
        for &e in &range {
            let mut next = eps.clone();
            next.push(e);
            stack.push(next);
        }
    }
    false
}

fn criterion_8() -> Outcome {
    let mut failures = Vec::new();
    for n in 1..=8 {
        if !coset_free_powers(n).unwrap() {
            failures.push(format!("powers up to {n}"));
        }
    }
    let mut reg = VarRegistry::new();
    let t = Monomial::var(reg.base("t"), 1);
    let corpus = coset_corpus(240, 0xC05E7);
    let mut related = 0;
    for tuple in &corpus {
        let funcs: Vec<RatFunc> = tuple.iter().map(|c| poly_in(&t, c)).collect();
        let rel = affine_relation(&funcs).unwrap();
        if let Some(r) = &rel {
            related += 1;
            if !r.holds_for(&funcs) {
                failures.push(format!("{r} does not hold for {tuple:?}"));
            }
        }
        if rel.is_some() != related_by_search(tuple) {
            failures.push(format!("disagreement on {tuple:?}"));
        }
    }
    let mut out = from_failures(failures, 8 + corpus.len());
    out.detail += &format!(", {related} related tuples");
    out
}

fn criterion_9() -> Outcome {
    let t = TALLY.lock().unwrap();
    if t.defects == 0 {
        return Outcome {
            ok: false,
            detail: "no defects were cross-checked".to_string(),
        };
    }
    from_failures(t.failures.clone(), t.defects)
}

fn criterion_10() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_hodkit"))
            .args(["suite", "--max-n", "4", "--format", "json", "--seed", "0"])
            .output()
            .expect("binary runs")
    };
    let first = run();
    let second = run();
    if first.stdout.is_empty() || first.status.code() != Some(0) {
        return Outcome {
            ok: false,
            detail: format!("suite exited with {:?}", first.status.code()),
        };
    }
    if first.stdout != second.stdout {
        return Outcome {
            ok: false,
            detail: "outputs differ".to_string(),
        };
    }
    pass(format!("{} identical bytes", first.stdout.len()))
}

fn timed(number: u8, budget: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let ok = out.ok && elapsed <= budget;
    let budget_note = if elapsed > budget { " (over budget)" } else { "" };
    println!(
        "criterion {number:>2}: {} in {:.2?} of {:?}{budget_note} -- {}",
        if ok { "PASS" } else { "FAIL" },
        elapsed,
        budget,
        out.detail
    );
    ok
}

#[test]
fn acceptance() {
    let ops = operator_test_set(2, 3, 5, 0);
    let start = Instant::now();
    let results = [
        timed(1, Duration::from_secs(1), criterion_1),
        timed(2, Duration::from_secs(60), criterion_2),
        timed(3, Duration::from_secs(120), criterion_3),
        timed(4, Duration::from_secs(60), || criterion_4(&ops)),
        timed(5, Duration::from_secs(30), criterion_5),
        timed(6, Duration::from_secs(60), || criterion_6(&ops)),
        timed(7, Duration::from_secs(10), criterion_7),
        timed(8, Duration::from_secs(30), criterion_8),
        // its checks ran inside criteria 1-6
        timed(9, Duration::from_secs(1), criterion_9),
        timed(10, Duration::from_secs(120), criterion_10),
    ];
    println!("total {:.2?}", start.elapsed());
    let failed: Vec<usize> = (1..=10).filter(|i| !results[i - 1]).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
