use std::collections::BTreeMap;

use hodkit::cosets::affine_relation;
use hodkit::cover::{psi_defines_otimes, rn_preservation, rn_reduct_check, sigma_ring_defect};
use hodkit::dclass::{
    find_witness, inductive_subsum, is_in_dn, polarization_defect, separation_witness, Defect, MembershipVerdict,
    Witness,
};
use hodkit::jets::{JetContext, Operator};
use hodkit::parse::{parse_operator, parse_ratfunc_list};
use hodkit::poly::VarRegistry;
use hodkit::suite::run_suite;
use hodkit::{Config, Result};

use crate::report::{Assignment, CheckOut, Report, Verdict, WitnessOut};
use crate::{Command, CoverCommand, CosetCommand, DnCommand};

fn params(pairs: &[(&str, String)], cfg: &Config) -> BTreeMap<String, String> {
    let mut map: BTreeMap<String, String> = pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
    map.insert("seed".to_string(), cfg.seed.to_string());
    map
}

fn witness_out(w: &Witness, ctx: &JetContext) -> WitnessOut {
    WitnessOut {
        assignments: w
            .render(ctx)
            .into_iter()
            .map(|(var, value)| Assignment { var, value })
            .collect(),
        value: w.value.to_string(),
    }
}

fn verdict(holds: bool) -> Verdict {
    if holds {
        Verdict::Holds
    } else {
        Verdict::Refuted
    }
}

fn fill_membership(report: &mut Report, v: &MembershipVerdict) {
    report.verdict = verdict(v.in_dn);
    report.defect = Some(v.defect.render());
    report.witness = v.witness.as_ref().map(|w| witness_out(w, &v.defect.ctx));
}

fn fill_defect(report: &mut Report, d: &Defect, seed: u64) -> Result<()> {
    report.verdict = verdict(d.is_zero());
    report.defect = Some(d.render());
    if !d.is_zero() {
        report.witness = Some(witness_out(&find_witness(&d.value, seed)?, &d.ctx));
    }
    Ok(())
}

pub fn run(command: &Command, cfg: &Config) -> Report {
    let (name, pairs) = describe(command);
    let mut report = Report::new(name, params(&pairs, cfg));
    if let Err(e) = execute(command, cfg, &mut report) {
        report.verdict = Verdict::Error;
        report.defect = None;
        report.witness = None;
        report.summary = "the check could not be carried out".to_string();
        report.error = Some(e.to_string());
    }
    report
}

fn describe(command: &Command) -> (&'static str, Vec<(&'static str, String)>) {
    match command {
        Command::Dn(DnCommand::Check { n, op }) => ("dn check", vec![("n", n.to_string()), ("op", op.clone())]),
        Command::Dn(DnCommand::Separation { n }) => ("dn separation", vec![("n", n.to_string())]),
        Command::Dn(DnCommand::Polarize { n, op }) => ("dn polarize", vec![("n", n.to_string()), ("op", op.clone())]),
        Command::Dn(DnCommand::Subsum { n }) => ("dn subsum", vec![("n", n.to_string())]),
        Command::Cover(CoverCommand::Preserve { n, op }) => {
            ("cover preserve", vec![("n", n.to_string()), ("op", op.clone())])
        }
        Command::Cover(CoverCommand::PsiCheck) => ("cover psi-check", vec![]),
        Command::Cover(CoverCommand::Reduct { n }) => ("cover reduct", vec![("n", n.to_string())]),
        Command::Cover(CoverCommand::RingCheck { op }) => ("cover ring-check", vec![("op", op.clone())]),
        Command::Coset(CosetCommand::Check { funcs }) => ("coset check", vec![("funcs", funcs.clone())]),
        Command::Suite => ("suite", vec![]),
    }
}

fn execute(command: &Command, cfg: &Config, report: &mut Report) -> Result<()> {
    match command {
        Command::Dn(DnCommand::Check { n, op }) => {
            let op = parse_operator(op, None)?;
            let v = is_in_dn(&op, *n, cfg)?;
            fill_membership(report, &v);
            report.summary = if v.in_dn {
                format!("{op} lies in D_{n}")
            } else {
                format!("{op} does not lie in D_{n}; the witness point gives a nonzero defect")
            };
        }
        Command::Dn(DnCommand::Separation { n }) => {
            let (defect, w) = separation_witness(*n, cfg)?;
            report.verdict = verdict(defect.is_zero());
            report.defect = Some(defect.render());
            report.witness = Some(witness_out(&w, &defect.ctx));
            let mut summary = format!(
                "D1^{} is not in D_{n}: membership is refuted at the witness point, which is the separation",
                n + 1
            );
            if *n < cfg.max_n {
                let above = is_in_dn(&Operator::power(0, n + 1), n + 1, cfg)?;
                summary += &if above.in_dn {
                    format!("; D1^{} lies in D_{}", n + 1, n + 1)
                } else {
                    format!("; D1^{} does not lie in D_{} either", n + 1, n + 1)
                };
            }
            report.summary = summary;
        }
        Command::Dn(DnCommand::Polarize { n, op }) => {
            let op = parse_operator(op, None)?;
            let d = polarization_defect(&op, *n, cfg)?;
            fill_defect(report, &d, cfg.seed)?;
            report.summary = format!(
                "the multilinear identity for {op} at level {n} {}",
                if d.is_zero() { "holds" } else { "fails" }
            );
        }
        Command::Dn(DnCommand::Subsum { n }) => {
            let d = inductive_subsum(*n, cfg)?;
            fill_defect(report, &d, cfg.seed)?;
            report.summary = format!(
                "the inductive subsum at level {n} {}",
                if d.is_zero() { "vanishes" } else { "does not vanish" }
            );
        }
        Command::Cover(CoverCommand::Preserve { n, op }) => {
            let op = parse_operator(op, None)?;
            let v = rn_preservation(&op, *n, cfg)?;
            fill_membership(report, &v);
            report.summary = format!(
                "sigma for {op} {} R_{n}",
                if v.in_dn { "preserves" } else { "does not preserve" }
            );
        }
        Command::Cover(CoverCommand::PsiCheck) => {
            let ok = psi_defines_otimes(cfg)?;
            report.verdict = verdict(ok);
            report.summary = format!(
                "(z3 - z2 - z1)/2 {} the product at generic points",
                if ok { "equals" } else { "differs from" }
            );
        }
        Command::Cover(CoverCommand::Reduct { n }) => {
            let ok = rn_reduct_check(*n, cfg)?;
            report.verdict = verdict(ok);
            report.summary = format!(
                "R_{n} {} the shift decomposition in both directions",
                if ok { "matches" } else { "does not match" }
            );
        }
        Command::Cover(CoverCommand::RingCheck { op }) => {
            let op = parse_operator(op, None)?;
            let (ctx, defect) = sigma_ring_defect(&op, cfg)?;
            let holds = defect.base().is_zero() && defect.fiber().is_zero();
            report.verdict = verdict(holds);
            report.defect = Some(defect.render(&ctx));
            if !holds {
                report.witness = Some(witness_out(&find_witness(defect.fiber(), cfg.seed)?, &ctx));
            }
            report.summary = format!(
                "sigma for {op} {} the product",
                if holds { "respects" } else { "does not respect" }
            );
        }
        Command::Coset(CosetCommand::Check { funcs }) => {
            let mut reg = VarRegistry::new();
            let fs = parse_ratfunc_list(funcs, &mut reg, cfg.max_degree)?;
            let rel = affine_relation(&fs)?;
            report.verdict = verdict(rel.is_none());
            match rel {
                None => report.summary = "no affine relation over the constants: the tuple is coset-free".to_string(),
                Some(r) => {
                    report.defect = Some(r.to_string());
                    report.summary = "the tuple satisfies an affine relation over the constants".to_string();
                }
            }
        }
        Command::Suite => {
            let out = run_suite(cfg.max_n, cfg)?;
            report.params.insert("max_n".to_string(), cfg.max_n.to_string());
            report.verdict = verdict(out.all_passed());
            let failed = out.checks.iter().filter(|c| !c.passed).count();
            report.summary = format!("{} of {} checks passed", out.checks.len() - failed, out.checks.len());
            report.checks = Some(
                out.checks
                    .iter()
                    .map(|c| CheckOut {
                        criterion: c.criterion,
                        name: c.name.to_string(),
                        passed: c.passed,
                        cases: c.cases,
                        note: c.note.clone(),
                    })
                    .collect(),
            );
        }
    }
    Ok(())
}
