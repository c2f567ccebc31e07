//! One line per acceptance criterion: PASS or FAIL, what was measured, and
//! the wall time against its budget.

mod common;

use std::time::{Duration, Instant};

use common::{finite_supports, minimal_big_oracle, random_tailed, Ends};
use locfin::coalg::{
    build_coalgebra, cofree_comodule, comodule_hom_space, contramodule_hom_space, free_contramodule, long_quotient,
    nakayama_check, validate_coalgebra, validate_comodule, validate_contramodule, Comodule, Conilpotency,
    Contramodule, Costructure, conilpotency_index,
};
use locfin::enumerate::chain_modules;
use locfin::ext::{closure_trials, ClosureKind};
use locfin::frontier::{check_left_strict, find_standard_frontier};
use locfin::lift::{
    anti_equivalence_roundtrip, dualize_comodule, dualize_contramodule, dualize_module, is_cofinite, is_contrafinite,
    lift_family, lift_to_comodule, lift_to_contramodule, minimal_big_submodule, theta, upsilon, DeclaredModule,
    LiftDecision, LiftReport, LiftTarget, Lifted,
};
use locfin::lincat::{module_hom_space, module_to_json, validate_category, Generator};
use locfin::order::{check_upper_lower_finite, preorder};
use locfin::{gallery, Error, Field, LinCat, Module, Scope, Side, Verdict, Window, Witness};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn window(g: Generator, lo: i64, hi: i64) -> Window {
    Window::new(g, Field::f2(), lo, hi).expect("window")
}

/// Finite gallery categories.
fn finite_gallery() -> Vec<LinCat> {
    let f = Field::f2();
    let mut cats: Vec<LinCat> = (1..=5).map(|n| gallery::chain(f, n)).collect();
    cats.extend((1..=3).map(|n| gallery::discrete(f, n)));
    cats.push(gallery::matrix_pair(f));
    cats
}

/// Gallery windows with up to `max` objects.
fn gallery_windows(max: i64) -> Vec<Window> {
    let mut out = Vec::new();
    for n in 1..=max {
        out.push(window(Generator::ZChain, -(n / 2), n - 1 - n / 2));
        out.push(window(Generator::ZNeg, -n, -1));
    }
    out
}

fn all_gallery_cats(max: i64) -> Vec<LinCat> {
    let mut cats = finite_gallery();
    cats.extend(gallery_windows(max).iter().map(|w| w.cat().clone()));
    cats
}

/// Every F_2 module with dimensions at most 2 on A_2 and A_3, left ones and
/// their duals.
struct Enumerated {
    cat: LinCat,
    modules: Vec<Module>,
}

fn enumerated() -> Vec<Enumerated> {
    [2, 3]
        .into_iter()
        .map(|n| {
            let cat = gallery::chain(Field::f2(), n);
            let left = chain_modules(&cat, 2).expect("enumerates");
            let mut modules = left.clone();
            modules.extend(left.iter().map(Module::transpose_dual));
            Enumerated { cat, modules }
        })
        .collect()
}

fn lifted_comodule(r: &LiftReport) -> Option<&Comodule> {
    match &r.lifted {
        Some(Lifted::Comodule(c)) => Some(c),
        _ => None,
    }
}

fn lifted_contramodule(r: &LiftReport) -> Option<&Contramodule> {
    match &r.lifted {
        Some(Lifted::Contramodule(p)) => Some(p),
        _ => None,
    }
}

fn axioms() -> Check {
    let mut n = 0;
    for cat in all_gallery_cats(12) {
        let v = validate_category(&cat);
        ensure(v.is_certified(), || format!("{:?} is not a category: {v}", cat.objects()))?;
        n += 1;
    }
    for (name, cat) in gallery::corrupted() {
        let v = validate_category(&cat);
        let witnessed = matches!(&v, Verdict::Refuted { witness } if *witness != Witness::Empty);
        ensure(witnessed, || format!("{name} was not refuted with a witness: {v}"))?;
    }
    Ok(format!("{n} gallery categories certified, 3 corruptions refuted"))
}

fn coalgebras() -> Check {
    let mut n = 0;
    for cat in all_gallery_cats(12) {
        let g = build_coalgebra(&cat);
        ensure(validate_coalgebra(&g).is_certified(), || format!("{:?}: coalgebra invalid", cat.objects()))?;
        ensure(validate_coalgebra(g.opposite()).is_certified(), || "opposite coalgebra invalid".into())?;
        let d = long_quotient(&g, &cat);
        let expect = Conilpotency::Index(preorder(&cat).longest_chain().max(1));
        let got = conilpotency_index(&d);
        ensure(got == expect, || format!("{:?}: conilpotency {got}, expected {expect}", cat.objects()))?;
        n += 1;
    }
    Ok(format!("{n} coalgebras valid, conilpotency index equals max(1, longest strict chain)"))
}

fn recognition() -> Check {
    let mut checked = 0;
    for e in enumerated() {
        let g = build_coalgebra(&e.cat);
        for m in &e.modules {
            let d = DeclaredModule::finite(&e.cat, m.clone());
            let co = lift_to_comodule(&d).map_err(|e| e.to_string())?;
            let contra = lift_to_contramodule(&d).map_err(|e| e.to_string())?;
            ensure(co.is_liftable() == finite_supports(&d, Ends::Targets), || "comodule decision disagrees".into())?;
            ensure(contra.is_liftable() == finite_supports(&d, Ends::Sources), || {
                "contramodule decision disagrees".into()
            })?;
            let c = lifted_comodule(&co).ok_or("finite module not comodule-liftable")?;
            let p = lifted_contramodule(&contra).ok_or("finite module not contramodule-liftable")?;
            ensure(upsilon(&g, c) == *m, || "comodule round trip differs".into())?;
            ensure(theta(&g, p) == *m, || "contramodule round trip differs".into())?;
            let predicate = match m.side() {
                Side::Left => is_contrafinite(&d),
                Side::Right => is_cofinite(&d),
            }
            .map_err(|e| e.to_string())?;
            ensure(predicate.is_certified(), || format!("finite module predicate: {predicate}"))?;
            checked += 1;
        }
    }
    // Windows with declared tails, where supports can be infinite.
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut windowed = 0;
    let mut infinite = 0;
    for i in 0..300 {
        let w = match i % 4 {
            0 => window(Generator::ZChain, 0, 0),
            1 => window(Generator::ZChain, -1, 1),
            2 => window(Generator::ZNeg, -1, -1),
            _ => window(Generator::ZNeg, -3, -1),
        };
        let left = random_tailed(&w, &mut rng, 2, 2);
        for d in [left.clone(), left.transpose_dual()] {
            let co = lift_to_comodule(&d).map_err(|e| e.to_string())?;
            let targets = finite_supports(&d, Ends::Targets);
            ensure(co.is_liftable() == targets, || format!("{}: comodule decision disagrees", w.describe()))?;
            let contra = lift_to_contramodule(&d).map_err(|e| e.to_string())?;
            let sources = finite_supports(&d, Ends::Sources);
            let zneg_left = *w.generator() == Generator::ZNeg && d.side() == Side::Left;
            if zneg_left {
                ensure(contra.is_liftable(), || "negative-integer modules underlie contramodules".into())?;
                ensure(contra.flags.is_empty() == sources, || "flags disagree with supports".into())?;
            } else {
                ensure(contra.is_liftable() == sources, || {
                    format!("{}: contramodule decision disagrees", w.describe())
                })?;
            }
            let predicate = match d.side() {
                Side::Left => is_contrafinite(&d).map(|v| (v, sources)),
                Side::Right => is_cofinite(&d).map(|v| (v, targets)),
            }
            .map_err(|e| e.to_string())?;
            ensure(predicate.0.is_certified() == predicate.1, || format!("predicate disagrees: {}", predicate.0))?;
            if !sources || !targets {
                infinite += 1;
            }
            if let Some(c) = lifted_comodule(&co) {
                ensure(upsilon(&build_coalgebra(w.cat()), c) == d.module(), || "window round trip".into())?;
            }
            windowed += 1;
        }
    }
    Ok(format!(
        "{checked} enumerated modules and {windowed} declared window modules ({infinite} with infinite supports) agree"
    ))
}

fn faithfulness() -> Check {
    let mut pairs = 0;
    for e in enumerated() {
        let g = build_coalgebra(&e.cat);
        let strict = check_left_strict(&Scope::Finite(e.cat.clone())).map_err(|e| e.to_string())?;
        ensure(strict.verdict.is_certified(), || "chain not left strict".into())?;
        let left: Vec<&Module> = e.modules.iter().filter(|m| m.side() == Side::Left).collect();
        let lifts: Vec<(Comodule, Contramodule)> = left
            .iter()
            .map(|m| (locfin::lift::comodule_of(m), locfin::lift::contramodule_of(m)))
            .collect();
        for (i, m1) in left.iter().enumerate() {
            for (j, m2) in left.iter().enumerate() {
                let hom = module_hom_space(&e.cat, m1, m2).map_err(|e| e.to_string())?.dim();
                let co = comodule_hom_space(&g, &lifts[i].0, &lifts[j].0).map_err(|e| e.to_string())?.dim();
                let contra = contramodule_hom_space(&g, &lifts[i].1, &lifts[j].1).map_err(|e| e.to_string())?.dim();
                ensure(hom == co && hom == contra, || format!("hom dims {hom}, {co}, {contra}"))?;
                pairs += 1;
            }
        }
    }
    // On the negative integers the contramodule side is not faithful; the
    // lift says so instead of producing a hom comparison.
    let z = gallery::zneg_constant_module(Field::f2(), -4).map_err(|e| e.to_string())?;
    let r = lift_to_contramodule(&z).map_err(|e| e.to_string())?;
    ensure(r.flags.iter().any(|f| f.contains("not fully faithful")), || "missing faithfulness flag".into())?;
    Ok(format!("{pairs} pairs with equal hom dimensions; negative-integer lift flagged"))
}

fn nakayama() -> Check {
    let mut n = 0;
    let mut check = |d: &locfin::coalg::GradedCoalgebra, m: Costructure| -> Result<(), String> {
        let v = nakayama_check(d, m).map_err(|e| e.to_string())?;
        n += 1;
        ensure(v.is_certified(), || format!("Nakayama fails: {v}"))
    };
    for cat in all_gallery_cats(6) {
        let g = build_coalgebra(&cat);
        let d = long_quotient(&g, &cat);
        for side in [Side::Left, Side::Right] {
            for v in 1..=2 {
                check(&d, Costructure::Comodule(&cofree_comodule(&g, side, v)))?;
                check(&d, Costructure::Contramodule(&free_contramodule(&g, side, v)))?;
            }
        }
    }
    for e in enumerated() {
        let g = build_coalgebra(&e.cat);
        let d = long_quotient(&g, &e.cat);
        for m in e.modules.iter().filter(|m| !m.is_zero()) {
            check(&d, Costructure::Comodule(&locfin::lift::comodule_of(m)))?;
            check(&d, Costructure::Contramodule(&locfin::lift::contramodule_of(m)))?;
        }
    }
    Ok(format!("{n} nonzero comodules and contramodules have nonzero socle and proper radical"))
}

fn closure() -> Check {
    let f = Field::f2();
    let left = closure_trials(ClosureKind::ContrafiniteLeft, Generator::ZChain, f, 200, 2024, 4)
        .map_err(|e| e.to_string())?;
    ensure(left.passed == 200 && left.failed == 0, || format!("{} of 200 passed", left.passed))?;
    ensure(left.mirror_agreements == 200, || format!("{} mirror agreements", left.mirror_agreements))?;
    let right = closure_trials(ClosureKind::CofiniteRight, Generator::ZChain, f, 200, 2024, 4)
        .map_err(|e| e.to_string())?;
    ensure(right.passed == 200 && right.failed == 0, || format!("{} of 200 dual trials passed", right.passed))?;
    Ok(format!(
        "200 extensions ({} non-split) contrafinite, 200 duals cofinite, 200 mirror agreements",
        left.non_split
    ))
}

fn big_submodules() -> Check {
    let f = Field::f2();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut instances: Vec<DeclaredModule> = vec![
        gallery::chain_iso_module(f, -1, 1, true).map_err(|e| e.to_string())?,
        gallery::bump_module(f, 1, 2).map_err(|e| e.to_string())?,
        gallery::zneg_constant_module(f, -3).map_err(|e| e.to_string())?,
    ];
    while instances.len() < 250 {
        let w = match rng.gen_range(0..5) {
            0 => window(Generator::ZChain, 0, 0),
            1 => window(Generator::ZChain, -1, 0),
            2 => window(Generator::ZChain, -1, 1),
            3 => window(Generator::ZNeg, -2, -1),
            _ => window(Generator::ZNeg, -3, -1),
        };
        let d = random_tailed(&w, &mut rng, 2, 2);
        if d.total_dim() <= 6 {
            instances.push(d);
        }
    }
    let mut nonzero = 0;
    let mut periodic = 0;
    for d in &instances {
        let depth = d.depth() + 4;
        let k = minimal_big_submodule(d).map_err(|e| format!("{}: {e}", d.scope().describe()))?;
        ensure(common::is_sub(d, &k) && common::big(d, &k), || {
            format!("{}: the result is not a big submodule", d.scope().describe())
        })?;
        let got = k.materialize(d, depth);
        let expect = minimal_big_oracle(d, depth, Some(&k));
        ensure(got == expect, || format!("{} disagrees with the oracle", d.scope().describe()))?;
        if got.iter().any(|s| !s.is_zero()) {
            nonzero += 1;
        }
        if k.upper_cycle.len() > 1 {
            periodic += 1;
        }
    }
    Ok(format!(
        "{} instances agree with the oracle, {nonzero} with nonzero minimum, {periodic} periodic along the upper tail",
        instances.len()
    ))
}

fn counterexamples() -> Check {
    let f = Field::f2();
    let zneg = gallery::instantiate("zneg", "-6..-1", f).map_err(|e| e.to_string())?;
    let s = find_standard_frontier(&zneg, "-1").map_err(|e| e.to_string())?;
    let growing = match &s.verdict {
        Verdict::Refuted {
            witness: Witness::Growth { sizes, .. },
        } => sizes.windows(2).all(|w| w[0] < w[1]),
        _ => false,
    };
    ensure(growing, || format!("negative integers at -1: {}", s.verdict))?;

    for (lo, hi) in [(-2, 2), (-4, 4)] {
        let bare = gallery::chain_iso_module(f, lo, hi, false).map_err(|e| e.to_string())?;
        let r = lift_to_comodule(&bare).map_err(|e| e.to_string())?;
        ensure(matches!(r.decision, LiftDecision::WindowLeak { .. }), || "bare module should leak".into())?;
    }
    let n = gallery::chain_iso_module(f, -2, 2, true).map_err(|e| e.to_string())?;
    for r in [lift_to_comodule(&n), lift_to_contramodule(&n)] {
        let r = r.map_err(|e| e.to_string())?;
        ensure(matches!(r.decision, LiftDecision::NotLiftable { .. }), || "module N lifted".into())?;
    }

    let family: Vec<DeclaredModule> = (1..=4)
        .map(|l| gallery::bump_module(f, l, 5))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    for (l, d) in (1..=4).zip(&family) {
        let v = is_contrafinite(d).map_err(|e| e.to_string())?;
        let inside = match &v {
            Verdict::Certified {
                witness: Witness::Supports { sets },
            } => sets
                .values()
                .flatten()
                .all(|x| x.parse::<i64>().map_or(false, |x: i64| x.abs() <= l)),
            _ => false,
        };
        ensure(inside, || format!("truncation {l}: {v}"))?;
    }
    for target in [LiftTarget::Comodule, LiftTarget::Contramodule] {
        let (_, v) = lift_family(&family, target).map_err(|e| e.to_string())?;
        ensure(v.is_certified(), || format!("family growth: {v}"))?;
    }
    Ok("negative integers refuted with growth, module N not liftable, truncations certified with growing supports".into())
}

fn duality() -> Check {
    let mut squares = 0;
    let mut square = |cat: &LinCat, g: &locfin::coalg::GradedCoalgebra, c: &Comodule| -> Result<(), String> {
        let lhs = module_to_json(cat, &theta(g, &dualize_comodule(c)));
        let rhs = module_to_json(cat, &dualize_module(&upsilon(g, c)));
        squares += 1;
        ensure(lhs.to_string() == rhs.to_string(), || "duality square does not commute".into())
    };
    for cat in all_gallery_cats(6) {
        let g = build_coalgebra(&cat);
        for v in 1..=2 {
            square(&cat, &g, &cofree_comodule(&g, Side::Right, v))?;
        }
    }
    let mut roundtrips = 0;
    for e in enumerated() {
        let g = build_coalgebra(&e.cat);
        let scope = Scope::Finite(e.cat.clone());
        for m in &e.modules {
            let d = DeclaredModule::finite(&e.cat, m.clone());
            match m.side() {
                Side::Right => {
                    let r = lift_to_comodule(&d).map_err(|e| e.to_string())?;
                    square(&e.cat, &g, lifted_comodule(&r).ok_or("right module not liftable")?)?;
                }
                Side::Left => {
                    let r = lift_to_contramodule(&d).map_err(|e| e.to_string())?;
                    let p = lifted_contramodule(&r).ok_or("left module not liftable")?;
                    let n = anti_equivalence_roundtrip(&scope, &g, p).map_err(|e| e.to_string())?;
                    ensure(validate_comodule(&g, &n).map_err(|e| e.to_string())?.is_certified(), || {
                        "dual is not a comodule".into()
                    })?;
                    ensure(dualize_comodule(&n) == *p, || "round trip differs".into())?;
                    ensure(dualize_contramodule(&dualize_comodule(&n)) == n, || "not an involution".into())?;
                    ensure(validate_contramodule(&g, p).map_err(|e| e.to_string())?.is_certified(), || {
                        "lift is not a contramodule".into()
                    })?;
                    roundtrips += 1;
                }
            }
        }
    }
    let right = gallery::zneg_single_right_module(Field::f2(), -4).map_err(|e| e.to_string())?;
    let r = lift_to_comodule(&right).map_err(|e| e.to_string())?;
    let cat = right.scope().cat().clone();
    square(&cat, &build_coalgebra(&cat), lifted_comodule(&r).ok_or("single right module not liftable")?)?;
    let zneg = gallery::instantiate("zneg", "-4..-1", Field::f2()).map_err(|e| e.to_string())?;
    let g = build_coalgebra(zneg.cat());
    let refused = anti_equivalence_roundtrip(&zneg, &g, &free_contramodule(&g, Side::Left, 1));
    ensure(matches!(refused, Err(Error::HypothesisNotCertified(_))), || {
        "round trip ran without left strictness".into()
    })?;
    Ok(format!("{squares} squares commute, {roundtrips} exact round trips"))
}

fn boundaries() -> Check {
    let mut upper = 0;
    let mut lower = 0;
    for e in enumerated() {
        let scope = Scope::Finite(e.cat.clone());
        let (u, l) = check_upper_lower_finite(&scope);
        ensure(u.is_certified() && l.is_certified(), || "finite chain not upper and lower finite".into())?;
        for m in e.modules.iter().filter(|m| m.side() == Side::Left) {
            let d = DeclaredModule::finite(&e.cat, m.clone());
            ensure(lift_to_comodule(&d).map_err(|e| e.to_string())?.is_liftable(), || "comodule".into())?;
            ensure(lift_to_contramodule(&d).map_err(|e| e.to_string())?.is_liftable(), || "contramodule".into())?;
            upper += 1;
            lower += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 1..=6 {
        let w = window(Generator::ZNeg, -n, -1);
        let (u, l) = check_upper_lower_finite(&Scope::Window(w.clone()));
        ensure(u.is_certified() && l.is_refuted(), || "negative integers misclassified".into())?;
        for _ in 0..40 {
            let d = random_tailed(&w, &mut rng, 2, 2);
            ensure(lift_to_comodule(&d).map_err(|e| e.to_string())?.is_liftable(), || {
                format!("{}: left module not comodule-liftable", w.describe())
            })?;
            upper += 1;
        }
    }
    let (u, l) = check_upper_lower_finite(&Scope::Window(window(Generator::ZChain, -2, 2)));
    ensure(u.is_refuted() && l.is_refuted(), || "integer chain misclassified".into())?;
    Ok(format!("{upper} modules on upper finite scopes comodule-liftable, {lower} on lower finite scopes contramodule-liftable"))
}

fn main() {
    let criteria: [(&str, Option<u64>, fn() -> Check); 10] = [
        ("axiom validation", Some(5), axioms),
        ("coalgebra correctness", Some(5), coalgebras),
        ("recognition", Some(60), recognition),
        ("full faithfulness", None, faithfulness),
        ("nakayama", None, nakayama),
        ("extension closure", None, closure),
        ("minimal big submodule", Some(120), big_submodules),
        ("counterexamples", None, counterexamples),
        ("duality", None, duality),
        ("boundary equivalences", None, boundaries),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        let over = budget.is_some_and(|b| took > Duration::from_secs(b));
        let limit = budget.map_or(String::new(), |b| format!(" / limit {b}s"));
        let (status, detail) = match (&result, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over time budget")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {:>2} {status} {name}: {detail} ({:.2}s{limit})", i + 1, took.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
