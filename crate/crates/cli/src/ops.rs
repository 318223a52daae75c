use std::sync::Arc;

use serde_json::{json, Value};

use wgdbl_core::bicat::{
    bicat_of_fractions, compare_omega, fundamental_bicategory_with, marked_paths_double, quasi_units, LiftOrder,
};
use wgdbl_core::companion::{
    comp_double_category, find_companion, find_conjoint, is_precompanion, verify_companion, verify_conjoint,
    CompanionPair, ConjointPair,
};
use wgdbl_core::dblcat::{
    check_horizontal_transformation, check_strict_functor, check_weak_globularity, discretize, pi0_double,
    DoubleCategory,
};
use wgdbl_core::dot;
use wgdbl_core::fincat::{pi0, FinCategory};
use wgdbl_core::fractions::{
    build_fractions, build_fractions_with, check_fractions_conditions, classify_for_companions, factor_cell,
    lift_w_friendly, phi_functor, representative_robustness, FractionsDouble, SearchOrder,
};
use wgdbl_core::homotopy::{basepoint, check_eckmann_hilton, check_groupoidal, homotopy_groups, postnikov_map};

use crate::input::{double, Kind, Loaded};
use crate::{sample, Args, CliError, Ctx, Module};

pub(crate) fn dispatch(args: &Args, input: Option<&Loaded>, ctx: &mut Ctx) -> Result<(), CliError> {
    let unknown = || CliError::UnknownCommand(args.module.name().into(), args.op.clone());
    if args.module == Module::Fractions && args.op == "sample" {
        return sample::run(args.seed, args.nmax, ctx);
    }
    let l = input.expect("checked by the caller");
    match (args.module, args.op.as_str()) {
        (Module::Fincat, "check") => fincat_check(l, ctx),
        (Module::Dblcat, "validate") => dblcat_validate(l, ctx),
        (Module::Dblcat, "check-wg") => dblcat_check_wg(l, args.nmax, ctx),
        (Module::Dblcat, "discretize") => dblcat_discretize(l, args.nmax, ctx),
        (Module::Dblcat, "pi0") => dblcat_pi0(l, ctx),
        (Module::Companion, "find") => companion_find(l, ctx),
        (Module::Companion, "precompanions") => companion_precompanions(l, ctx),
        (Module::Companion, "comp") => companion_comp(l, ctx),
        (Module::Fractions, "check") => fractions_check(l, ctx),
        (Module::Fractions, "build") => fractions_build(l, args.nmax, ctx),
        (Module::Fractions, "classify") => with_fractions(l, ctx, fractions_classify),
        (Module::Fractions, "factor") => with_fractions(l, ctx, fractions_factor),
        (Module::Fractions, "lift") => with_fractions(l, ctx, fractions_lift),
        (Module::Bicat, "fundamental") => bicat_fundamental(l, args.nmax, ctx),
        (Module::Bicat, "marked-paths") => bicat_marked_paths(l, args.max_path_len, args.nmax, ctx),
        (Module::Bicat, "fractions") => bicat_fractions(l, ctx),
        (Module::Bicat, "omega") => bicat_omega(l, args.nmax, ctx),
        (Module::Homotopy, "groupoidal") => homotopy_groupoidal(l, ctx),
        (Module::Homotopy, "groups") => homotopy_groups_op(l, args.basepoint.as_deref(), ctx),
        (Module::Homotopy, "postnikov") => homotopy_postnikov(l, ctx),
        _ => Err(unknown()),
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn counts(d: &DoubleCategory) -> Value {
    json!({
        "objects": d.object_count(),
        "verticals": d.vertical_count(),
        "horizontals": d.horizontal_count(),
        "cells": d.cell_count(),
    })
}

fn companion_json(d: &DoubleCategory, p: &CompanionPair) -> Value {
    json!({
        "horizontal": d.x1.obj_name(p.f),
        "vertical": d.x0.arr_name(p.v),
        "psi": d.x1.arr_name(p.psi),
        "chi": d.x1.arr_name(p.chi),
    })
}

fn conjoint_json(d: &DoubleCategory, p: &ConjointPair) -> Value {
    json!({
        "horizontal": d.x1.obj_name(p.u),
        "vertical": d.x0.arr_name(p.v),
        "alpha": d.x1.arr_name(p.alpha),
        "beta": d.x1.arr_name(p.beta),
    })
}

// ---- fincat ----------------------------------------------------------------------

fn fincat_check(l: &Loaded, ctx: &mut Ctx) -> Result<(), CliError> {
    let input = l.category_input()?;
    match FinCategory::from_presentation(&input.category) {
        Ok(c) => {
            ctx.verdict("category laws", true);
            ctx.output = Some(json!({
                "objects": c.obj_count(),
                "arrows": c.arr_count(),
                "components": pi0(&c).class_count(),
                "groupoid": c.is_groupoid(),
                "posetal": c.is_posetal(),
                "discrete": c.is_discrete(),
            }));
            ctx.dot = Some(dot::category_dot(&c));
        }
        Err(e) => ctx.fail("category laws", e),
    }
    Ok(())
}

// ---- dblcat ----------------------------------------------------------------------

fn dblcat_validate(l: &Loaded, ctx: &mut Ctx) -> Result<(), CliError> {
    if l.kind() != Kind::Double {
        let d = double(l)?;
        ctx.verdict("double category axioms", true);
        ctx.output = Some(counts(&d));
        ctx.dot = Some(dot::double_dot(&d));
        return Ok(());
    }
    match DoubleCategory::from_presentation(&l.double_presentation()?) {
        Ok(d) => {
            ctx.verdict("double category axioms", true);
            ctx.output = Some(counts(&d));
            ctx.dot = Some(dot::double_dot(&d));
        }
        Err(e) => ctx.fail("double category axioms", e),
    }
    Ok(())
}

fn dblcat_check_wg(l: &Loaded, nmax: usize, ctx: &mut Ctx) -> Result<(), CliError> {
    let d = double(l)?;
    let r = check_weak_globularity(&d, nmax);
    let x0 = r.x0_verdict.clone();
    ctx.check("vertical category equivalent to a discrete one", x0.is_equivalence, || to_value(&x0));
    for (n, v) in &r.segal {
        ctx.check(format!("segal condition n={n}"), v.is_equivalence, || to_value(v));
    }
    ctx.output = Some(json!({ "isofibration_d0": r.isofibration_d0, "isofibration_d1": r.isofibration_d1 }));
    ctx.dot = Some(dot::double_dot(&d));
    Ok(())
}

fn dblcat_discretize(l: &Loaded, nmax: usize, ctx: &mut Ctx) -> Result<(), CliError> {
    let d = double(l)?;
    ctx.dot = Some(dot::double_dot(&d));
    let disc = match discretize(&d, nmax) {
        Ok(x) => x,
        Err(e) => {
            ctx.fail("weakly globular", e);
            return Ok(());
        }
    };
    ctx.verdict("level 0 discrete", disc.level0_discrete);
    for (k, v) in &disc.segal {
        ctx.check(format!("segal map k={k}"), v.is_equivalence, || to_value(v));
    }
    for id in &disc.identities {
        ctx.verdict(format!("{} at level {} up to isomorphism", id.identity, id.level), id.up_to_iso);
    }
    let levels: Vec<Value> = disc
        .simplicial
        .levels
        .iter()
        .map(|c| json!({ "objects": c.obj_count(), "arrows": c.arr_count() }))
        .collect();
    ctx.output = Some(json!({ "levels": levels, "identities": disc.identities }));
    Ok(())
}

fn dblcat_pi0(l: &Loaded, ctx: &mut Ctx) -> Result<(), CliError> {
    let d = double(l)?;
    ctx.emits = true;
    match pi0_double(&d) {
        Ok(p) => {
            ctx.verdict("components form a category", true);
            ctx.output = Some(to_value(&p.cat.to_presentation()));
            ctx.dot = Some(dot::category_dot(&p.cat));
        }
        Err(e) => ctx.fail("components form a category", e),
    }
    Ok(())
}

// ---- companion -------------------------------------------------------------------

fn companion_find(l: &Loaded, ctx: &mut Ctx) -> Result<(), CliError> {
    let d = double(l)?;
    let mut rows = Vec::new();
    let mut bad = Vec::new();
    for h in d.x1.objects() {
        let comp = find_companion(&d, h);
        let conj = find_conjoint(&d, h);
        if comp.as_ref().is_some_and(|p| !verify_companion(&d, p)) || conj.as_ref().is_some_and(|p| !verify_conjoint(&d, p)) {
            bad.push(d.x1.obj_name(h).to_string());
        }
        rows.push(json!({
            "horizontal": d.x1.obj_name(h),
            "companion": comp.map(|p| companion_json(&d, &p)),
            "conjoint": conj.map(|p| conjoint_json(&d, &p)),
        }));
    }
    ctx.check("binding identities of every witness", bad.is_empty(), || json!(bad));
    ctx.output = Some(Value::Array(rows));
    ctx.dot = Some(dot::double_dot(&d));
    Ok(())
}

fn companion_precompanions(l: &Loaded, ctx: &mut Ctx) -> Result<(), CliError> {
    let d = double(l)?;
    let mut rows = Vec::new();
    let mut missing = Vec::new();
    for h in d.x1.objects() {
        let w = is_precompanion(&d, h).map_err(|e| CliError::Input(e.to_string()))?;
        if find_companion(&d, h).is_some() && w.is_none() {
            missing.push(d.x1.obj_name(h).to_string());
        }
        rows.push(json!({
            "horizontal": d.x1.obj_name(h),
            "precompanion": w.map(|w| json!({
                "left": {
                    "phi": d.x1.arr_name(w.left.phi),
                    "f_prime": d.x1.obj_name(w.left.f_prime),
                    "r": d.x1.obj_name(w.left.r),
                    "companion": companion_json(&d, &w.left.companion),
                },
                "right": {
                    "phi": d.x1.arr_name(w.right.phi),
                    "f_second": d.x1.obj_name(w.right.f_second),
                    "l": d.x1.obj_name(w.right.l),
                    "companion": companion_json(&d, &w.right.companion),
                },
                "link": d.x1.arr_name(w.link),
            })),
        }));
    }
    ctx.check("every companion is a pre-companion", missing.is_empty(), || json!(missing));
    ctx.output = Some(Value::Array(rows));
    ctx.dot = Some(dot::double_dot(&d));
    Ok(())
}

fn companion_comp(l: &Loaded, ctx: &mut Ctx) -> Result<(), CliError> {
    let d = Arc::new(double(l)?);
    match comp_double_category(d) {
        Ok(c) => {
            ctx.verdict("companions form a double category", true);
            ctx.output = Some(counts(&c.double));
            ctx.dot = Some(dot::double_dot(&c.double));
        }
        Err(e) => ctx.fail("companions form a double category", e),
    }
    Ok(())
}

// ---- fractions -------------------------------------------------------------------

fn fractions_check(l: &Loaded, ctx: &mut Ctx) -> Result<(), CliError> {
    let p = l.fractions()?;
    let r = check_fractions_conditions(&p);
    let w = r.clone();
    ctx.check("calculus of fractions conditions", r.cf_passed, || to_value(&w));
    ctx.output = Some(json!({ "two_out_of_three": r.two_out_of_three, "report": r }));
    ctx.dot = Some(dot::category_dot(&p.base));
    Ok(())
}

fn build_or_fail(l: &Loaded, ctx: &mut Ctx) -> Result<Option<FractionsDouble>, CliError> {
    let p = l.fractions()?;
    match build_fractions(&p) {
        Ok(f) => {
            ctx.dot = Some(dot::double_dot(&f.double));
            Ok(Some(f))
        }
        Err(e) => {
            ctx.fail("double category of fractions", e);
            Ok(None)
        }
    }
}

fn with_fractions(
    l: &Loaded,
    ctx: &mut Ctx,
    op: fn(&FractionsDouble, &mut Ctx) -> Result<(), CliError>,
) -> Result<(), CliError> {
    match build_or_fail(l, ctx)? {
        Some(f) => op(&f, ctx),
        None => Ok(()),
    }
}

fn provenance(f: &FractionsDouble) -> Value {
    let c = f.base();
    let d = &*f.double;
    let objects: serde_json::Map<String, Value> =
        f.objects.iter().enumerate().map(|(i, &w)| (d.x0.obj_name(i).to_string(), json!(c.arr_name(w)))).collect();
    let verticals: serde_json::Map<String, Value> = f
        .verticals
        .iter()
        .enumerate()
        .map(|(v, &(a, b))| (d.x0.arr_name(v).to_string(), json!([c.arr_name(f.objects[a]), c.arr_name(f.objects[b])])))
        .collect();
    let horizontals: serde_json::Map<String, Value> = f
        .horizontals
        .iter()
        .enumerate()
        .map(|(h, &(a, g, b))| {
            (d.x1.obj_name(h).to_string(), json!([c.arr_name(f.objects[a]), c.arr_name(g), c.arr_name(f.objects[b])]))
        })
        .collect();
    let cells: serde_json::Map<String, Value> = f
        .witnesses
        .iter()
        .enumerate()
        .map(|(k, w)| {
            (
                d.x1.arr_name(k).to_string(),
                json!({
                    "left": [c.obj_name(w.left.apex), c.arr_name(w.left.u1), c.arr_name(w.left.u2)],
                    "right": [c.obj_name(w.right.apex), c.arr_name(w.right.u1), c.arr_name(w.right.u2)],
                    "phi": c.arr_name(w.phi),
                }),
            )
        })
        .collect();
    json!({ "objects": objects, "verticals": verticals, "horizontals": horizontals, "cells": cells })
}

fn fractions_build(l: &Loaded, nmax: usize, ctx: &mut Ctx) -> Result<(), CliError> {
    ctx.emits = true;
    let Some(f) = build_or_fail(l, ctx)? else { return Ok(()) };
    let wg = check_weak_globularity(&f.double, nmax);
    let w = wg.clone();
    ctx.check(format!("weakly globular (n <= {nmax})"), wg.passed, || to_value(&w));
    let rev = build_fractions_with(&f.presentation, SearchOrder::Reversed);
    let same = rev.as_ref().is_ok_and(|g| g.double.to_presentation() == f.double.to_presentation());
    ctx.verdict("cells independent of witness order", same);
    let rob = representative_robustness(&f);
    let r = rob.clone();
    ctx.check("every representative pair refines", rob.passed, || to_value(&r));
    let mut out = to_value(&f.double.to_presentation());
    out.as_object_mut().expect("object").insert("provenance".into(), provenance(&f));
    ctx.output = Some(out);
    Ok(())
}

fn fractions_classify(f: &FractionsDouble, ctx: &mut Ctx) -> Result<(), CliError> {
    let cl = classify_for_companions(f);
    let dis = cl.disagreements.clone();
    ctx.check("companions and conjoints match their normal forms", cl.agrees, || json!(dis));
    ctx.output = Some(to_value(&cl));
    Ok(())
}

fn fractions_factor(f: &FractionsDouble, ctx: &mut Ctx) -> Result<(), CliError> {
    let d = &*f.double;
    let mut plans = Vec::new();
    let mut uninhabited = Vec::new();
    let mut wrong = Vec::new();
    for c in d.x1.arrows() {
        match factor_cell(f, c) {
            Ok(p) => {
                if !p.all_factors_inhabited {
                    uninhabited.push(p.cell.clone());
                }
                if !p.pasted_equals_cell {
                    wrong.push(p.cell.clone());
                }
                plans.push(to_value(&p));
            }
            Err(e) => uninhabited.push(format!("{}: {e}", d.x1.arr_name(c))),
        }
    }
    ctx.check("every factor frame is inhabited", uninhabited.is_empty(), || json!(uninhabited));
    ctx.check("pasting the factors gives the cell", wrong.is_empty(), || json!(wrong));
    ctx.output = Some(Value::Array(plans));
    Ok(())
}

fn fractions_lift(f: &FractionsDouble, ctx: &mut Ctx) -> Result<(), CliError> {
    let s = match phi_functor(f) {
        Ok(s) => s,
        Err(e) => {
            ctx.fail("canonical structure on the inclusion", e);
            return Ok(());
        }
    };
    if let Err(e) = s.check() {
        ctx.fail("canonical structure on the inclusion", e);
        return Ok(());
    }
    ctx.verdict("canonical structure on the inclusion", true);
    let lift = match lift_w_friendly(f, &s) {
        Ok(x) => x,
        Err(e) => {
            ctx.fail("lift", e);
            return Ok(());
        }
    };
    let strict = check_strict_functor(&lift.functor);
    ctx.check("lift is a strict double functor", strict.is_ok(), || json!(strict.as_ref().err().map(|e| e.to_string())));
    let tr = check_horizontal_transformation(&lift.comparison);
    ctx.check("comparison is a horizontal transformation", tr.is_ok(), || {
        json!(tr.as_ref().err().map(|e| e.to_string()))
    });
    ctx.verdict("comparison is invertible", lift.comparison.is_invertible());
    let c = f.base();
    let comps_ok = c.objects().all(|o| lift.comparison.components[o] == s.component(c.identity(o)));
    ctx.verdict("comparison components are the structure components at identities", comps_ok);
    let d = &*lift.functor.cod;
    ctx.output = Some(json!({
        "components": c.objects().map(|o| json!([c.obj_name(o), d.x1.obj_name(lift.comparison.components[o])])).collect::<Vec<_>>(),
        "identity_on_objects": lift.functor.f0.obj.iter().enumerate().all(|(i, &x)| i == x),
    }));
    Ok(())
}

// ---- bicat -----------------------------------------------------------------------

fn bicat_fundamental(l: &Loaded, nmax: usize, ctx: &mut Ctx) -> Result<(), CliError> {
    ctx.emits = true;
    let d = double(l)?;
    match fundamental_bicategory_with(&d, LiftOrder::Canonical, nmax) {
        Ok(b) => {
            ctx.verdict("bicategory axioms", true);
            ctx.output = Some(to_value(&b.bicat.to_presentation()));
            ctx.dot = Some(dot::bicategory_dot(&b.bicat));
        }
        Err(e) => ctx.fail("bicategory axioms", e),
    }
    Ok(())
}

fn bicat_marked_paths(l: &Loaded, max_len: usize, nmax: usize, ctx: &mut Ctx) -> Result<(), CliError> {
    ctx.emits = true;
    let b = Arc::new(l.bicategory()?);
    let m = match marked_paths_double(b.clone(), max_len) {
        Ok(m) => m,
        Err(e) => {
            ctx.fail("marked paths form a double category", e);
            return Ok(());
        }
    };
    ctx.verdict("marked paths form a double category", true);
    let d = &*m.double;
    // the truncation only sees composites of at most `max_len` arrows
    let n = nmax.min(max_len).max(2);
    let wg = check_weak_globularity(d, n);
    let w = wg.clone();
    ctx.check(format!("weakly globular (n <= {n})"), wg.passed, || to_value(&w));
    let qu = quasi_units(&b);
    let mut bad = Vec::new();
    for h in d.x1.objects() {
        let seg = m.horizontals[h];
        let path = &m.paths[seg.path];
        let unit = path.vertex(&b, seg.from) == path.vertex(&b, seg.to) && qu.contains(&m.segment_composite(h));
        if unit != find_companion(d, h).is_some() {
            bad.push(d.x1.obj_name(h).to_string());
        }
    }
    ctx.check("companions are exactly the quasi units", bad.is_empty(), || json!(bad));
    ctx.output = Some(to_value(&d.to_presentation()));
    ctx.dot = Some(dot::double_dot(d));
    Ok(())
}

fn bicat_fractions(l: &Loaded, ctx: &mut Ctx) -> Result<(), CliError> {
    ctx.emits = true;
    let p = l.fractions()?;
    match bicat_of_fractions(&p) {
        Ok(sb) => {
            ctx.verdict("bicategory axioms", true);
            ctx.output = Some(to_value(&sb.bicat.to_presentation()));
            ctx.dot = Some(dot::bicategory_dot(&sb.bicat));
        }
        Err(e) => ctx.fail("bicategory axioms", e),
    }
    Ok(())
}

fn bicat_omega(l: &Loaded, nmax: usize, ctx: &mut Ctx) -> Result<(), CliError> {
    let p = l.fractions()?;
    let run = || -> Result<_, Box<dyn std::error::Error>> {
        let f = build_fractions(&p)?;
        let bic = fundamental_bicategory_with(&f.double, LiftOrder::Canonical, nmax)?;
        let sb = bicat_of_fractions(&p)?;
        Ok((compare_omega(&f, &bic, &sb), sb.bicat))
    };
    match run() {
        Ok((r, target)) => {
            ctx.verdict("bijective on objects", r.objects_bijective);
            for ((a, b), v) in &r.hom_verdicts {
                ctx.check(format!("hom functor ({a}, {b}) is an equivalence"), v.is_equivalence, || to_value(v));
            }
            ctx.verdict("strict on units", r.units_strict);
            let fails = r.failures.clone();
            ctx.check("composition comparisons invertible", r.composition_comparisons, || json!(fails));
            ctx.dot = Some(dot::bicategory_dot(&target));
            ctx.output = Some(to_value(&r));
        }
        Err(e) => ctx.fail("comparison", e),
    }
    Ok(())
}

// ---- homotopy --------------------------------------------------------------------

fn homotopy_groupoidal(l: &Loaded, ctx: &mut Ctx) -> Result<(), CliError> {
    let d = double(l)?;
    ctx.dot = Some(dot::double_dot(&d));
    match check_groupoidal(&d) {
        Ok(v) => {
            let w = v.clone();
            ctx.check("groupoidal", v.groupoidal, || to_value(&w));
        }
        Err(e) => ctx.fail("groupoidal", e),
    }
    Ok(())
}

fn homotopy_groups_op(l: &Loaded, base: Option<&str>, ctx: &mut Ctx) -> Result<(), CliError> {
    let d = double(l)?;
    ctx.dot = Some(dot::double_dot(&d));
    let x = match base {
        Some(name) => basepoint(&d, name).map_err(|e| CliError::Input(e.to_string()))?,
        None => 0,
    };
    match homotopy_groups(&d, x) {
        Ok(g) => {
            ctx.verdict("first homotopy group is a group", g.pi1.is_group());
            ctx.verdict("second homotopy group is an abelian group", g.pi2.is_group() && g.pi2.is_abelian());
            ctx.verdict("horizontal and vertical composition agree on endo-cells", check_eckmann_hilton(&d, x));
            ctx.output = Some(to_value(&g));
        }
        Err(e) => ctx.fail("groupoidal", e),
    }
    Ok(())
}

fn homotopy_postnikov(l: &Loaded, ctx: &mut Ctx) -> Result<(), CliError> {
    let d = Arc::new(double(l)?);
    match postnikov_map(d) {
        Ok(m) => {
            ctx.verdict("isomorphism on components", m.report.pi0_iso);
            for (x, ok) in &m.report.pi1_iso {
                ctx.verdict(format!("isomorphism on the first homotopy group at {x}"), *ok);
            }
            ctx.verdict("target has trivial second homotopy groups", m.report.target_pi2_trivial);
            ctx.dot = Some(dot::double_dot(&m.target));
            ctx.output = Some(to_value(&m.report));
        }
        Err(e) => ctx.fail("groupoidal", e),
    }
    Ok(())
}
