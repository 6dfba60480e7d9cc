//! One function per subcommand; each calls the library and records what it
//! returns.

use std::sync::Arc;

use effred::diagrams::{audit, group_sym, Code, Diagram, Emitter, Signature};
use effred::fd_fields::{
    compare_cyclotomic, cyclo_emitter, inf_reduction, int_poly, radical_field, PureTranscendental,
    RootSetOperator, Tower,
};
use effred::grp2fld::{
    check_homomorphism, compare_root_profiles, phi_morphism, phi_object, root_profile,
    zero_divisor_probe,
};
use effred::grp2fld::{Basis, Located};
use effred::hensel::{residue_check, HenselEmitter};
use effred::primes::nth_prime;
use effred::scott::{eval_bounded, structure, Kind, Structure, CORPUS};
use effred::sigma3::{
    audit_invariants, profile, reduce, relation_by_name, OracleFamily, Sigma3Relation, Triple,
};
use effred::streams::{e0_equivalent, BitStream, SetSpec};
use effred::tfab::reductions::cof_target;
use effred::tfab::{
    cof_to_tfab1, cof_type, e0_to_tfab1, e0_type, extract_type, iso_rank1, IsoThreshold,
};
use serde::Serialize;
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::output::Run;
use crate::relation::ExprRelation;
use crate::specs::{parse_field, parse_group, FieldSpec};
use crate::CliError;

/// Sampled (triple, stage) points in the sigma3 audit.
const AUDIT_SAMPLES: usize = 50;
/// Primes in reported root profiles.
const PROFILE_PRIMES: usize = 5;

pub fn run(c: &ExperimentConfig) -> Result<String, CliError> {
    let mut r = Run::new(c)?;
    match c.command.as_str() {
        "scott" => scott(c, &mut r)?,
        "g2f" => g2f(c, &mut r)?,
        "henselize" => henselize(c, &mut r)?,
        "transcend" => transcend(c, &mut r)?,
        "reduce-sigma3" => reduce_sigma3(c, &mut r)?,
        "e0" => e0(c, &mut r)?,
        "cof" => cof(c, &mut r)?,
        "inf-field" => inf_field(c, &mut r)?,
        "rootset" => rootset(c, &mut r)?,
        "audit" => audit_file(c, &mut r)?,
        "compare" => compare(c, &mut r)?,
        other => return Err(CliError::Usage(format!("unknown command {other}"))),
    }
    r.finish(c)
}

fn corpus(name: &str, stage: u64) -> Result<Structure, CliError> {
    structure(name, stage)?
        .ok_or_else(|| CliError::Usage(format!("{name} is not one of {}", CORPUS.join(", "))))
}

fn scott(c: &ExperimentConfig, r: &mut Run) -> Result<(), CliError> {
    let s = corpus(c.require("structure")?, c.stages)?;
    let sentence = s.sentence().map_err(|e| CliError::Failed(e.to_string()))?;
    r.text("structure.jsonl", &s.diagram.to_jsonl())?;
    r.text("sentence.txt", &format!("{sentence}\n"))?;
    let targets: Vec<String> = match c.input("against") {
        Some(list) => list
            .split(',')
            .map(|x| x.trim().to_string())
            .filter(|x| !x.is_empty())
            .collect(),
        None => CORPUS
            .iter()
            .filter(|n| corpus_kind(n) == s.kind)
            .map(|n| n.to_string())
            .collect(),
    };
    let mut verdicts = serde_json::Map::new();
    for t in targets {
        let d = corpus(&t, c.stages)?;
        if d.kind != s.kind {
            return Err(CliError::Usage(format!(
                "{t} and {} have different signatures",
                s.name
            )));
        }
        let v = eval_bounded(
            &sentence,
            &d.diagram,
            c.stages,
            c.witness_bound,
            c.generator_bound,
        );
        if !v.is_sound() {
            r.warn(format!("{} on {t}: {v} at the given bounds", s.name));
        }
        verdicts.insert(t, json!(v.to_string()));
    }
    r.json("verdicts.json", &verdicts)?;
    r.result("structure", s.name);
    r.result("verdicts", verdicts);
    Ok(())
}

fn corpus_kind(name: &str) -> Kind {
    if name.starts_with('Q') {
        Kind::Field
    } else {
        Kind::Group
    }
}

fn g2f(c: &ExperimentConfig, r: &mut Run) -> Result<(), CliError> {
    let spec = parse_group(c.input("group").unwrap_or("2:inf"))?;
    if spec.relabel.is_some() {
        return Err(CliError::Usage(
            "g2f builds its own permuted copy from --seed".into(),
        ));
    }
    let perm = effred::diagrams::Relabel::new(c.seed, crate::specs::RELABEL_BLOCK);
    let (g, basis) = spec.emitter(c.stages)?;
    let (h, _) = spec.emitter(c.stages)?;
    let mk = |b: &[Code]| {
        if spec.rank() == 1 {
            Basis::FirstNonzero
        } else {
            Basis::Codes(b.to_vec())
        }
    };
    let mut fa = phi_object(g, mk(&basis));
    let copy_basis: Vec<Code> = basis.iter().map(|&x| perm.apply(x)).collect();
    let mut fb = phi_object(effred::diagrams::Relabeled::new(h, perm), mk(&copy_basis));
    r.drive("phi", &mut fa, c.stages)?;
    r.drive("phi of the copy", &mut fb, c.stages)?;
    r.text("group.jsonl", &fa.inner().diagram().to_jsonl())?;
    r.text("phi.jsonl", &fa.diagram().to_jsonl())?;
    r.text("phi_copy.jsonl", &fb.diagram().to_jsonl())?;
    let map = |x: Code| perm.apply(x);
    match check_homomorphism(fa.inner().diagram(), fb.inner().diagram(), &map) {
        Ok(n) => r.result("group_map_facts_checked", n),
        Err(e) => r.result("group_map_violation", e.to_string()),
    }
    if let Ok(m) = phi_morphism(&fa, map, &fb) {
        let (mut found, mut absent, mut unknown) = (0, 0, 0);
        for x in 0..(fa.diagram().size() as Code).min(50) {
            match m.image(&fa, &mut fb, x) {
                Located::Found(_) => found += 1,
                Located::Absent => absent += 1,
                Located::Unknown => unknown += 1,
            }
        }
        r.result(
            "field_images",
            json!({ "found": found, "absent": absent, "unknown": unknown }),
        );
    }
    let primes: Vec<u64> = (0..PROFILE_PRIMES).map(nth_prime).collect();
    let prof: Vec<Vec<u32>> = basis
        .iter()
        .map(|&x| root_profile(&mut fa, x, &primes, c.precision as u32))
        .collect();
    r.result("root_primes", &primes);
    r.result("root_profiles", prof);
    let codes: Vec<Code> = (0..(fa.inner().diagram().size() as Code).min(40)).collect();
    let probe = zero_divisor_probe(fa.inner().diagram(), &codes, 200, 3, c.seed);
    r.json("zero_divisor_probe.json", &probe)?;
    r.result("zero_divisors", probe.violations.len());
    r.result("field_elements", fa.representatives().len());
    Ok(())
}

fn no_relabel(f: &crate::specs::Field) -> Result<(), CliError> {
    match f.relabel {
        Some(_) => Err(CliError::Usage(
            "permuted copies are not accepted here".into(),
        )),
        None => Ok(()),
    }
}

fn henselize(c: &ExperimentConfig, r: &mut Run) -> Result<(), CliError> {
    let f = parse_field(c.input("field").unwrap_or("rational"))?;
    no_relabel(&f)?;
    match &f.spec {
        FieldSpec::Cyclo(_) => hensel_run(f.cyclo_tower()?.expect("cyclo"), c, r),
        FieldSpec::Radical(ps) => hensel_run(
            radical_field(ps).map_err(|e| CliError::Usage(e.to_string()))?,
            c,
            r,
        ),
    }
}

#[derive(Serialize)]
struct LiftLine<'a> {
    stage: u64,
    poly: &'a str,
    root: &'a str,
    code: Code,
    series: String,
}

fn hensel_run<T: Tower>(tower: T, c: &ExperimentConfig, r: &mut Run) -> Result<(), CliError> {
    let mut h = HenselEmitter::with_defaults(tower);
    r.drive("henselize", &mut h, c.stages)?;
    r.text("hensel.jsonl", &h.diagram().to_jsonl())?;
    let mut lifts = String::new();
    for l in h.lifts() {
        let series = h
            .element(l.code)
            .map(|x| x.series(c.precision).to_string())
            .unwrap_or_default();
        let line = LiftLine {
            stage: l.stage,
            poly: &l.poly,
            root: &l.root,
            code: l.code,
            series,
        };
        lifts.push_str(&serde_json::to_string(&line).expect("serializable"));
        lifts.push('\n');
    }
    r.text("lifts.jsonl", &lifts)?;
    let rep = residue_check(&h);
    r.json("residue.json", &rep)?;
    r.result("elements", h.elements().len());
    r.result("lifts", h.lifts().len());
    r.result("residue_ok", rep.ok());
    Ok(())
}

fn transcend(c: &ExperimentConfig, r: &mut Run) -> Result<(), CliError> {
    let f = parse_field(c.input("field").unwrap_or("rational"))?;
    let mut t = PureTranscendental::with_defaults(f.emitter()?);
    r.drive("transcend", &mut t, c.stages)?;
    r.text("field.jsonl", &t.diagram().to_jsonl())?;
    r.result("t_code", t.t_code());
    r.result("elements", t.elements().len());
    r.result("base_elements", t.inner().diagram().size());
    Ok(())
}

fn load_family(c: &ExperimentConfig) -> Result<OracleFamily, CliError> {
    match c.input("oracles") {
        None | Some("sample") => Ok(OracleFamily::e0_sample()),
        Some(p) => {
            let text =
                std::fs::read_to_string(p).map_err(|e| CliError::Corrupt(format!("{p}: {e}")))?;
            match OracleFamily::parse(&text) {
                Some(f) if !f.is_empty() => Ok(f),
                _ => Err(CliError::Corrupt(format!(
                    "{p}: expected one prefix|cycle stream per line"
                ))),
            }
        }
    }
}

#[derive(Serialize)]
struct TripleReport {
    m: usize,
    n: usize,
    k: usize,
    prime: u64,
    r: u32,
    promotions: usize,
    last_promotion: Option<u64>,
    /// Promoted in the second half of the run.
    growing: bool,
    /// G_n holds p^-r and G_m does not.
    one_ahead: bool,
}

fn reduce_sigma3(c: &ExperimentConfig, r: &mut Run) -> Result<(), CliError> {
    let family = Arc::new(load_family(c)?);
    let rel: Arc<dyn Sigma3Relation> = match c.input("relation").unwrap_or("e0") {
        "custom" => Arc::new(ExprRelation::parse(c.require("program")?)?),
        name => relation_by_name(name)
            .ok_or_else(|| CliError::Usage(format!("unknown relation {name}")))?,
    };
    let out = reduce(family.clone(), rel.clone(), c.stages, c.indices);
    for l in 0..out.groups.len() {
        r.text(
            &format!("G_{l}.jsonl"),
            &out.groups.project(l).expect("in range").to_jsonl(),
        )?;
    }
    let mut core = out.core.lock().expect("core lock");
    let mut log = String::new();
    for ch in core.chips() {
        log.push_str(&serde_json::to_string(ch).expect("serializable"));
        log.push('\n');
    }
    r.text("chips.log", &log)?;
    let triples: Vec<Triple> = (1..c.indices)
        .flat_map(|n| (0..n).flat_map(move |m| (0..c.k_bound).map(move |k| (m, n, k))))
        .collect();
    let mut reports = Vec::new();
    for &t in &triples {
        let mach = core.machine(t, c.stages);
        let promos: Vec<u64> = mach.history().iter().skip(1).map(|h| h.stage).collect();
        let last = promos.last().copied();
        let rr = mach.current().r;
        let one_ahead =
            mach.exponent(t.1, c.stages) == rr && mach.exponent(t.0, c.stages) + 1 == rr;
        reports.push(TripleReport {
            m: t.0,
            n: t.1,
            k: t.2,
            prime: effred::sigma3::triple_prime(t.0, t.1, t.2),
            r: rr,
            promotions: promos.len(),
            last_promotion: last,
            growing: last.is_some_and(|s| s > c.stages / 2),
            one_ahead,
        });
    }
    let profiles: Vec<Vec<u32>> = (0..c.indices)
        .map(|l| profile(&mut core, l, &triples, c.stages))
        .collect();
    r.json("triples.json", &reports)?;
    r.json("profiles.json", &profiles)?;
    let a = audit_invariants(
        &mut core,
        &triples,
        c.stages,
        c.indices,
        AUDIT_SAMPLES,
        c.seed,
    );
    r.json("audit.json", &a)?;
    r.result("relation", rel.name());
    r.result("streams", family.len());
    r.result("groups", out.groups.len());
    r.result("triples", triples.len());
    r.result(
        "growing_triples",
        reports.iter().filter(|t| t.growing).count(),
    );
    r.result("audit_points", a.points);
    r.result("audit_clean", a.clean());
    if !a.clean() {
        r.warn(format!("{} audit violations", a.violations.len()));
    }
    Ok(())
}

fn stream(s: &str) -> Result<BitStream, CliError> {
    BitStream::parse(s)
        .ok_or_else(|| CliError::Usage(format!("bad stream literal {s}; expected prefix|cycle")))
}

fn e0(c: &ExperimentConfig, r: &mut Run) -> Result<(), CliError> {
    let a = stream(c.require("stream")?)?;
    let mut g = e0_to_tfab1(&a);
    r.drive("e0", &mut g, c.stages)?;
    r.text("group.jsonl", &g.diagram().to_jsonl())?;
    r.result("type", e0_type(&a).render_prefix(PROFILE_PRIMES, c.stages));
    if let Some(o) = c.input("other") {
        let b = stream(o)?;
        let mut h = e0_to_tfab1(&b);
        r.drive("e0 other", &mut h, c.stages)?;
        r.text("other.jsonl", &h.diagram().to_jsonl())?;
        let v = iso_rank1(
            &e0_type(&a),
            &e0_type(&b),
            c.generator_bound as u64,
            IsoThreshold::default(),
        );
        r.result(
            "other_type",
            e0_type(&b).render_prefix(PROFILE_PRIMES, c.stages),
        );
        r.result("verdict", &v);
        r.result("e0_equivalent", e0_equivalent(&a, &b));
    }
    Ok(())
}

fn set(c: &ExperimentConfig) -> Result<SetSpec, CliError> {
    let s = c.require("set")?;
    SetSpec::parse(s).ok_or_else(|| CliError::Usage(format!("bad set literal {s}")))
}

fn cof(c: &ExperimentConfig, r: &mut Run) -> Result<(), CliError> {
    let w = set(c)?;
    let e = w.enumeration();
    let mut g = cof_to_tfab1(&e);
    r.drive("cof", &mut g, c.stages)?;
    r.text("group.jsonl", &g.diagram().to_jsonl())?;
    let v = iso_rank1(
        &cof_type(&e),
        &cof_target(),
        c.generator_bound as u64,
        IsoThreshold::default(),
    );
    r.result("type", cof_type(&e).render_prefix(PROFILE_PRIMES, c.stages));
    r.result("verdict_vs_all_1_over_p", &v);
    r.result("cofinite", w.is_cofinite());
    Ok(())
}

fn inf_field(c: &ExperimentConfig, r: &mut Run) -> Result<(), CliError> {
    let w = set(c)?;
    let mut f = cyclo_emitter(inf_reduction(&w.enumeration()));
    r.drive("inf-field", &mut f, c.stages)?;
    r.text("field.jsonl", &f.diagram().to_jsonl())?;
    r.result("conductor", f.tower().conductor());
    r.result("infinite", w.is_infinite());
    Ok(())
}

fn rootset(c: &ExperimentConfig, r: &mut Run) -> Result<(), CliError> {
    let f = parse_field(c.input("field").unwrap_or("rational"))?;
    let mut op = RootSetOperator::with_defaults(f.emitter()?).with_window((0..c.indices).collect());
    while op.stage() < c.stages {
        match op.step() {
            Ok(()) => {}
            Err(effred::diagrams::DiagramError::Budget(m)) => {
                r.warn(format!(
                    "rootset: budget exhausted at stage {}: {m}",
                    op.stage()
                ));
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }
    r.text("field.jsonl", &op.inner().diagram().to_jsonl())?;
    let roots: Vec<_> = op
        .confirmed()
        .iter()
        .map(|(n, w)| json!({ "poly": n, "coefficients": int_poly(*n), "root": w.code, "stage": w.stage }))
        .collect();
    r.json("roots.json", &roots)?;
    r.result("window", c.indices);
    r.result("confirmed", op.confirmed().keys().collect::<Vec<_>>());
    Ok(())
}

fn read_input(p: &str) -> Result<String, CliError> {
    std::fs::read_to_string(p).map_err(|e| CliError::Corrupt(format!("{p}: {e}")))
}

fn parse_diagram(text: &str, signature: Option<&str>) -> Result<Diagram, CliError> {
    let corrupt = |e: effred::diagrams::DiagramError| CliError::Corrupt(e.to_string());
    match signature {
        Some("group") => Diagram::from_jsonl(Signature::group(), text).map_err(corrupt),
        Some("field") => Diagram::from_jsonl(Signature::field(), text).map_err(corrupt),
        Some(other) => Err(CliError::Usage(format!(
            "signature must be group or field, not {other}"
        ))),
        None => Diagram::from_jsonl(Signature::group(), text)
            .or_else(|_| Diagram::from_jsonl(Signature::field(), text))
            .map_err(corrupt),
    }
}

fn audit_file(c: &ExperimentConfig, r: &mut Run) -> Result<(), CliError> {
    let p = c.require("file")?;
    let d = parse_diagram(&read_input(p)?, c.input("signature"))?;
    let rep = audit(&d);
    r.json("audit.json", &rep)?;
    r.result("signature", &d.signature().name);
    r.result("events", rep.events);
    r.result("clean", rep.clean());
    if !rep.clean() {
        r.fail(CliError::Corrupt(format!(
            "{p}: {} violations",
            rep.violations.len()
        )));
    }
    Ok(())
}

fn cyclo_conductor(s: &str) -> Option<u64> {
    match parse_field(s).ok()?.spec {
        FieldSpec::Cyclo(n) => Some(n),
        FieldSpec::Radical(_) => None,
    }
}

/// The type of a rank-1 group read off its diagram, relative to one nonzero
/// element.
fn group_profile(
    spec: &str,
    c: &ExperimentConfig,
    r: &mut Run,
    tag: &str,
) -> Result<Vec<u32>, CliError> {
    let (d, one, stage) = match spec.strip_prefix("file:") {
        Some(p) => {
            let d = parse_diagram(&read_input(p)?, Some("group"))?;
            let zero = d.op(group_sym::E, &[]);
            let one = (0..d.size() as Code)
                .find(|&x| Some(x) != zero)
                .ok_or_else(|| CliError::Corrupt(format!("{p}: no nonzero element")))?;
            let stage = d.events().last().map_or(0, |e| e.stage + 1);
            (d, one, stage)
        }
        None => {
            let g = parse_group(spec)?;
            if g.rank() != 1 {
                return Err(CliError::Usage("compare handles rank-1 groups".into()));
            }
            let (mut e, basis) = g.presented(c.stages)?;
            r.drive(tag, &mut e, c.stages)?;
            (e.diagram().clone(), basis[0], c.stages)
        }
    };
    r.text(&format!("{tag}.jsonl"), &d.to_jsonl())?;
    let t = extract_type(&d, one, stage, c.generator_bound, c.precision as u32);
    Ok(t.into_iter().map(|x| x as u32).collect())
}

fn compare(c: &ExperimentConfig, r: &mut Run) -> Result<(), CliError> {
    let (a, b) = (c.require("a")?, c.require("b")?);
    match (cyclo_conductor(a), cyclo_conductor(b)) {
        (Some(x), Some(y)) => {
            let (v, why) = compare_cyclotomic(x, y, c.generator_bound as u64);
            r.result("verdict", json!({ "value": v, "witness": why }));
        }
        (None, None) => {
            let pa = group_profile(a, c, r, "a")?;
            let pb = group_profile(b, c, r, "b")?;
            let v = compare_root_profiles(&pa, &pb, c.precision as u32, IsoThreshold::default());
            r.result("profile_a", &pa);
            r.result("profile_b", &pb);
            r.result("verdict", &v);
        }
        _ => {
            return Err(CliError::Usage(
                "compare needs two groups or two cyclotomic fields".into(),
            ))
        }
    }
    Ok(())
}
