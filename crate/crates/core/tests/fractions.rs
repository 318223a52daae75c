mod common;

use std::sync::Arc;

use common::*;
use proptest::prelude::*;
use wgdbl_core::dblcat::{
    check_horizontal_transformation, check_strict_functor, check_weak_globularity, find_filler, pi0_double,
    DoubleCategory, HorizontalTransformation, Side,
};
use wgdbl_core::fincat::{Ar, FinCategory};
use wgdbl_core::fixtures;
use wgdbl_core::fractions::*;

// ---- oracles ---------------------------------------------------------------

/// Brute-force check of the three fraction conditions.
fn cf_oracle(c: &FinCategory, w: &[bool]) -> bool {
    let arrows: Vec<Ar> = c.arrows().collect();
    let comp = |g: Ar, f: Ar| c.compose(g, f);
    for &a in &arrows {
        if c.is_iso(a) && !w[a] {
            return false;
        }
    }
    for &f in &arrows {
        for &g in &arrows {
            if let Some(h) = comp(g, f) {
                if w[f] && w[g] && !w[h] {
                    return false;
                }
            }
        }
    }
    // every cospan (f, v) with v marked completes to a square with a marked side
    for &f in &arrows {
        for &v in arrows.iter().filter(|&&v| w[v] && c.tgt(v) == c.tgt(f)) {
            let ok = arrows.iter().any(|&fb| {
                c.tgt(fb) == c.src(v)
                    && arrows.iter().any(|&vb| {
                        w[vb] && c.src(vb) == c.src(fb) && c.tgt(vb) == c.src(f) && comp(v, fb) == comp(f, vb)
                    })
            });
            if !ok {
                return false;
            }
        }
    }
    // marked arrows that equalize f, g are matched by marked arrows on the other side
    for &f in &arrows {
        for &g in arrows.iter().filter(|&&g| c.src(g) == c.src(f) && c.tgt(g) == c.tgt(f)) {
            for &v in arrows.iter().filter(|&&v| w[v] && c.src(v) == c.tgt(f)) {
                if comp(v, f) != comp(v, g) {
                    continue;
                }
                let ok = arrows.iter().any(|&u| w[u] && c.tgt(u) == c.src(f) && comp(f, u) == comp(g, u));
                if !ok {
                    return false;
                }
            }
        }
    }
    true
}

/// Whether a frame carries a cell, straight from the definition: spans on
/// both sides through marked composites and a connecting arrow.
fn cell_oracle(p: &FractionsPresentation, fr: &Frame) -> bool {
    let c = &*p.base;
    let spans = |w1: Ar, w2: Ar| -> Vec<(Ar, Ar)> {
        let mut out = Vec::new();
        for u1 in c.arrows().filter(|&u| c.tgt(u) == c.src(w1)) {
            for u2 in c.arrows().filter(|&u| c.tgt(u) == c.src(w2) && c.src(u) == c.src(u1)) {
                let k = c.compose(w1, u1);
                if k.is_some() && k == c.compose(w2, u2) && p.in_w(k.unwrap()) {
                    out.push((u1, u2));
                }
            }
        }
        out
    };
    let left = spans(fr.w1, fr.w2);
    let right = spans(fr.w1p, fr.w2p);
    left.iter().any(|&(u1, u2)| {
        right.iter().any(|&(v1, v2)| {
            c.hom(c.src(u1), c.src(v1)).iter().any(|&phi| {
                c.compose(v1, phi) == c.compose(fr.f1, u1) && c.compose(v2, phi) == c.compose(fr.f2, u2)
            })
        })
    })
}

/// Objects, verticals and horizontals of `C{W}` counted from the base.
fn count_oracle(p: &FractionsPresentation) -> (usize, usize, usize) {
    let c = &*p.base;
    let verticals = c
        .objects()
        .map(|o| p.w.iter().filter(|&&w| c.tgt(w) == o).count().pow(2))
        .sum();
    let mut horizontals = 0;
    for &w in &p.w {
        for &w2 in &p.w {
            horizontals += c.hom(c.src(w), c.src(w2)).len();
        }
    }
    (p.w.len(), verticals, horizontals)
}

fn counts(f: &FractionsDouble) -> [usize; 4] {
    let d = &f.double;
    [d.object_count(), d.vertical_count(), d.horizontal_count(), d.cell_count()]
}

fn in_w_mask(p: &FractionsPresentation) -> Vec<bool> {
    p.base.arrows().map(|a| p.in_w(a)).collect()
}

/// A poset with a random marked class, closed under composition and
/// containing the identities.
fn arb_marked_poset(max: usize) -> impl Strategy<Value = FractionsPresentation> {
    (arb_order(max), prop::collection::vec(any::<bool>(), max * max)).prop_map(|(le, bits)| {
        let c = Arc::new(poset(&le));
        let cat = &*c;
        let mut w: Vec<Ar> = c.objects().map(|o| c.identity(o)).collect();
        w.extend(c.arrows().filter(|&a| !c.is_identity(a) && bits[a % bits.len()]));
        loop {
            let extra: Vec<Ar> = w
                .iter()
                .flat_map(|&g| w.iter().filter_map(move |&f| cat.compose(g, f)))
                .filter(|h| !w.contains(h))
                .collect();
            if extra.is_empty() {
                break;
            }
            w.extend(extra);
        }
        FractionsPresentation::new(c, w)
    })
}

fn h(f: &FractionsDouble, name: &str) -> usize {
    f.double.x1.obj_by_name(name).unwrap_or_else(|| panic!("no horizontal {name}"))
}

// ---- conditions ------------------------------------------------------------

#[test]
fn fixtures_satisfy_the_fraction_conditions() {
    for (name, p) in marked_fixtures() {
        let r = check_fractions_conditions(&p);
        assert!(r.cf_passed, "{name}: {r:?}");
        assert!(cf_oracle(&p.base, &in_w_mask(&p)), "{name}");
        assert!(r.two_out_of_three, "{name}");
    }
}

#[test]
fn marking_the_arrow_itself_still_satisfies_the_conditions() {
    let c = base(fixtures::FIX_ARROW);
    let p = FractionsPresentation::all(c.clone());
    let expected = cf_oracle(&c, &in_w_mask(&p));
    assert!(expected);
    assert_eq!(check_fractions_conditions(&p).cf_passed, expected);
}

#[test]
fn unmarked_isomorphism_is_reported() {
    let p = FractionsPresentation::identities(base(fixtures::FIX_ISO));
    let r = check_fractions_conditions(&p);
    assert!(!r.cf_passed);
    assert_eq!(r.missing_isomorphisms, vec!["f".to_string(), "g".to_string()]);
}

#[test]
fn composition_gap_is_reported() {
    let c = base(fixtures::FIX_POSB);
    let w: Vec<Ar> = ["1_bot", "1_x", "1_y", "1_top", "bot<x", "x<top"].iter().map(|n| c.arr_by_name(n).unwrap()).collect();
    let p = FractionsPresentation::new(c, w);
    let r = check_fractions_conditions(&p);
    assert_eq!(r.not_closed, vec![("x<top".to_string(), "bot<x".to_string())]);
    assert!(!r.cf_passed);
}

#[test]
fn two_out_of_three_is_reported_separately() {
    // bot<x and bot<top marked, x<top not
    let c = base(fixtures::FIX_POSB);
    let w: Vec<Ar> = ["1_bot", "1_x", "1_y", "1_top", "bot<x", "bot<top"].iter().map(|n| c.arr_by_name(n).unwrap()).collect();
    let p = FractionsPresentation::new(c, w);
    let r = check_fractions_conditions(&p);
    assert!(r.two_out_of_three_failures.contains(&("x<top".to_string(), "bot<x".to_string())));
    assert!(!r.two_out_of_three);
    assert_eq!(r.cf_passed, cf_oracle(&p.base, &in_w_mask(&p)));
    assert!(!r.passed(true));
}

#[test]
fn unknown_marked_arrow_is_rejected() {
    let mut input = fixtures::fractions_input(fixtures::FIX_ARROW);
    input.w.push("nope".into());
    assert!(matches!(FractionsPresentation::from_input(&input), Err(FractionsError::UnknownArrow(n)) if n == "nope"));
}

// ---- the construction ------------------------------------------------------

#[test]
fn fixture_sizes() {
    let expected = [("arrow", [2, 2, 3, 3]), ("iso", [4, 8, 16, 64]), ("posb", [9, 25, 49, 225])];
    for ((name, p), (ename, sizes)) in marked_fixtures().into_iter().zip(expected) {
        assert_eq!(name, ename);
        let f = build_fractions(&p).unwrap();
        assert_eq!(counts(&f), sizes, "{name}");
        let (o, v, hz) = count_oracle(&p);
        assert_eq!([o, v, hz], sizes[..3], "{name}");
    }
}

#[test]
fn cells_match_the_definition_on_every_consistent_frame() {
    for (name, p) in marked_fixtures() {
        let f = build_fractions(&p).unwrap();
        let mut n = 0;
        for (top, bottom) in f.consistent_frames() {
            let fr = f.frame_between(top, bottom);
            let expected = cell_oracle(&p, &fr);
            assert_eq!(cell_exists(&p, &fr).unwrap().is_some(), expected, "{name}: {fr:?}");
            n += usize::from(expected);
        }
        assert_eq!(n, f.double.cell_count(), "{name}");
    }
}

#[test]
fn inconsistent_frame_is_an_error() {
    let p = presentation(fixtures::FIX_POSB);
    let c = &*p.base;
    let a = |n: &str| c.arr_by_name(n).unwrap();
    let fr = Frame { w1: a("1_x"), f1: a("1_x"), w1p: a("1_x"), w2: a("1_y"), f2: a("1_y"), w2p: a("1_y") };
    assert!(matches!(cell_exists(&p, &fr), Err(FractionsError::InconsistentFrame(_))));
}

#[test]
fn every_consistent_frame_of_the_poset_has_a_cell() {
    let f = fractions(fixtures::FIX_POSB);
    assert_eq!(f.consistent_frames().len(), 225);
    let bot = f.base().obj_by_name("bot").unwrap();
    for (top, bottom) in f.consistent_frames() {
        let all = witnesses(&f.presentation, &f.frame_between(top, bottom), SearchOrder::Canonical).unwrap();
        assert!(all.iter().any(|w| w.left.apex == bot && w.right.apex == bot));
    }
}

#[test]
fn identity_frames_have_degenerate_witnesses() {
    for (name, p) in marked_fixtures() {
        let f = build_fractions(&p).unwrap();
        for hz in f.double.x1.objects() {
            let (a, g, b) = f.horizontals[hz];
            let w = cell_exists(&p, &f.frame_between(hz, hz)).unwrap().unwrap();
            let c = f.base();
            assert_eq!(w.left.u1, c.identity(c.src(f.objects[a])), "{name}");
            assert_eq!(w.right.u1, c.identity(c.src(f.objects[b])), "{name}");
            assert_eq!(w.phi, g, "{name}");
        }
    }
}

#[test]
fn identities_only_gives_the_horizontal_double_category() {
    let c = base(fixtures::FIX_ARROW);
    let f = build_fractions(&FractionsPresentation::identities(c.clone())).unwrap();
    let j = inclusion_jc(&f);
    check_strict_functor(&j).unwrap();
    assert!(j.is_bijective());
    let hc = DoubleCategory::horizontal(&c);
    assert_eq!(
        [hc.object_count(), hc.vertical_count(), hc.horizontal_count(), hc.cell_count()],
        counts(&f)
    );
    // different arrows on the same frame force different cells
    let a = |n: &str| c.arr_by_name(n).unwrap();
    let fr = Frame { w1: a("1_a"), f1: a("f"), w1p: a("1_b"), w2: a("1_a"), f2: a("f"), w2p: a("1_b") };
    assert!(cell_exists(&f.presentation, &fr).unwrap().is_some());
}

#[test]
fn invertible_fixture_has_two_components_with_singleton_homs() {
    let f = fractions(fixtures::FIX_ISO);
    let pi0 = pi0_double(&f.double).unwrap();
    assert_eq!(pi0.cat.obj_count(), 2);
    for a in pi0.cat.objects() {
        for b in pi0.cat.objects() {
            assert_eq!(pi0.cat.hom(a, b).len(), 1);
        }
    }
}

#[test]
fn vertical_arrows_exist_exactly_between_marked_arrows_with_equal_codomain() {
    for (name, p) in marked_fixtures() {
        let f = build_fractions(&p).unwrap();
        let c = f.base();
        let x0 = &f.double.x0;
        for &w1 in &p.w {
            for &w2 in &p.w {
                let hom = x0.hom(f.object(w1), f.object(w2)).len();
                assert_eq!(hom, usize::from(c.tgt(w1) == c.tgt(w2)), "{name}");
            }
        }
        assert!(x0.is_groupoid() && x0.is_posetal(), "{name}");
    }
}

#[test]
fn horizontal_homs_match_the_base() {
    let f = fractions(fixtures::FIX_POSB);
    let c = f.base();
    let hc = f.double.horizontal_category();
    for &w1 in &f.presentation.w {
        for &w2 in &f.presentation.w {
            let n = hc.hom(f.object(w1), f.object(w2)).len();
            assert_eq!(n, c.hom(c.src(w1), c.src(w2)).len());
        }
    }
}

#[test]
fn fixtures_are_weakly_globular_with_isofibration_targets() {
    for (name, p) in marked_fixtures() {
        let f = build_fractions(&p).unwrap();
        let wg = check_weak_globularity(&f.double, 3);
        assert!(wg.passed, "{name}");
        assert!(wg.isofibration_d1, "{name}");
        for hz in f.double.x1.objects() {
            let b = f.double.h_tgt(hz);
            for &v in f.double.x0.in_arrows(b) {
                assert!(find_filler(&f.double, Side::Right, v, hz).unwrap().is_some(), "{name}");
            }
        }
    }
}

#[test]
fn witness_order_does_not_change_the_tables() {
    for (name, p) in marked_fixtures() {
        let a = build_fractions(&p).unwrap();
        let b = build_fractions_with(&p, SearchOrder::Reversed).unwrap();
        assert_eq!(a.double.to_presentation(), b.double.to_presentation(), "{name}");
        for (top, bottom) in a.consistent_frames() {
            assert!(witnesses_agree(&p, &a.frame_between(top, bottom)).unwrap(), "{name}");
        }
    }
}

#[test]
fn representatives_are_robust() {
    for (name, p) in marked_fixtures() {
        let f = build_fractions(&p).unwrap();
        let r = representative_robustness(&f);
        assert!(r.passed, "{name}: {:?}", r.failures);
        assert_eq!(r.frames_with_cell, f.double.cell_count(), "{name}");
    }
}

#[test]
fn presentation_round_trips_through_json() {
    for (name, p) in marked_fixtures() {
        let text = serde_json::to_string(&p.to_input()).unwrap();
        let back = FractionsPresentation::from_input(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.w, p.w, "{name}");
        assert_eq!(back.base.to_presentation(), p.base.to_presentation(), "{name}");
        let f = build_fractions(&p).unwrap();
        let d = DoubleCategory::from_presentation(&f.double.to_presentation()).unwrap();
        assert_eq!(d.to_presentation(), f.double.to_presentation());
    }
}

// ---- inclusion, companions, factorization -----------------------------------

#[test]
fn inclusion_is_a_strict_functor() {
    for (name, p) in marked_fixtures() {
        let f = build_fractions(&p).unwrap();
        let j = inclusion_jc(&f);
        check_strict_functor(&j).unwrap_or_else(|e| panic!("{name}: {e}"));
        let c = f.base();
        for a in c.objects() {
            assert_eq!(f.objects[j.obj(a)], c.identity(a));
        }
    }
}

#[test]
fn classification_matches_companions() {
    for (name, p) in marked_fixtures() {
        let f = build_fractions(&p).unwrap();
        let r = classify_for_companions(&f);
        assert!(r.agrees, "{name}: {:?}", r.disagreements);
        for v in f.double.x0.objects() {
            let id = f.double.x0.identity(v);
            let class = r.verticals.iter().find(|k| k.vertical == f.double.x0.arr_name(id)).unwrap();
            assert!(class.has_companion && class.has_conjoint, "{name}");
        }
    }
}

#[test]
fn normal_form_vertical_has_its_companion() {
    let f = fractions(fixtures::FIX_POSB);
    let r = classify_for_companions(&f);
    let class = r.verticals.iter().find(|k| k.vertical == "v(bot<top,x<top)").unwrap();
    assert!(class.has_companion);
    assert_eq!(class.companion_form.as_deref(), Some("bot<x"));
}

#[test]
fn invertible_fixture_normal_forms_have_companions_and_conjoints() {
    let f = fractions(fixtures::FIX_ISO);
    let r = classify_for_companions(&f);
    let normal: Vec<_> = r.horizontals.iter().filter(|k| k.normal_form).collect();
    assert!(!normal.is_empty());
    assert!(normal.iter().all(|k| k.has_companion && k.has_conjoint));
}

#[test]
fn identity_cells_factor_through_identity_frames() {
    let f = fractions(fixtures::FIX_POSB);
    let d = &f.double;
    for hz in d.x1.objects().filter(|&x| d.horizontals_from(d.h_src(x)).contains(&x)) {
        let plan = factor_cell(&f, d.h_id_cell(hz)).unwrap();
        assert!(plan.all_factors_inhabited && plan.pasted_equals_cell);
    }
    let a = d.x0.objects().next().unwrap();
    let plan = factor_cell(&f, d.iota(a)).unwrap();
    assert!(plan.rows.iter().flatten().all(|fr| fr.top == fr.bottom || fr.kind != FactorKind::Identity));
}

#[test]
fn generic_cell_factors_through_eight_frames() {
    let f = fractions(fixtures::FIX_POSB);
    let d = &f.double;
    let top = h(&f, "(1_bot,bot<x,x<top)");
    let bottom = h(&f, "(1_bot,bot<y,y<top)");
    let cell = d.x1.hom(top, bottom)[0];
    let plan = factor_cell(&f, cell).unwrap();
    assert_eq!(plan.rows.len() * 2, 8);
    assert!(plan.all_factors_inhabited);
    assert!(plan.pasted_equals_cell);
    let kinds: Vec<FactorKind> = plan.rows.iter().flatten().map(|fr| fr.kind).collect();
    assert_eq!(kinds.iter().filter(|&&k| k == FactorKind::Identity).count(), 4);
}

#[test]
fn every_cell_of_the_fixtures_factors() {
    for (name, p) in marked_fixtures() {
        let f = build_fractions(&p).unwrap();
        for cell in f.double.x1.arrows() {
            let plan = factor_cell(&f, cell).unwrap();
            assert!(plan.all_factors_inhabited && plan.pasted_equals_cell, "{name}: {}", plan.cell);
        }
    }
}

// ---- marked triangles and lifting ---------------------------------------------

#[test]
fn marked_triangles() {
    let p = presentation(fixtures::FIX_POSB);
    let n = nabla_w(&p).unwrap();
    assert_eq!(n.cat.obj_count(), 9);
    let c = &*p.base;
    // arrows w → w′ are factorizations w = w′∘v; count them directly
    let mut expected = 0;
    for &w in &p.w {
        for &wp in &p.w {
            expected += c.hom(c.src(w), c.src(wp)).iter().filter(|&&v| c.compose(wp, v) == Some(w)).count();
        }
    }
    assert_eq!(n.cat.arr_count(), expected);
    n.d0.check().unwrap();
}

#[test]
fn marked_triangles_need_two_out_of_three() {
    let c = base(fixtures::FIX_POSB);
    let w: Vec<Ar> = ["1_bot", "1_x", "1_y", "1_top", "bot<x", "bot<top"].iter().map(|n| c.arr_by_name(n).unwrap()).collect();
    assert!(matches!(nabla_w(&FractionsPresentation::new(c, w)), Err(FractionsError::ConditionsFailed(_))));
}

#[test]
fn canonical_structure_is_w_friendly() {
    for (name, p) in marked_fixtures() {
        let f = build_fractions(&p).unwrap();
        let s = phi_functor(&f).unwrap();
        s.check().unwrap_or_else(|e| panic!("{name}: {e}"));
        for &w in &p.w {
            assert_eq!(s.object(w), f.object(w));
        }
    }
}

#[test]
fn lift_of_the_canonical_structure_is_the_identity() {
    for (name, p) in marked_fixtures() {
        let f = build_fractions(&p).unwrap();
        let s = phi_functor(&f).unwrap();
        let lift = lift_w_friendly(&f, &s).unwrap();
        check_strict_functor(&lift.functor).unwrap();
        check_horizontal_transformation(&lift.comparison).unwrap();
        assert!(lift.comparison.is_invertible(), "{name}");
        assert!(lift.functor.is_bijective(), "{name}");
        let j = inclusion_jc(&f);
        let lj = lift.functor.after(&j);
        // the lift restricted along the inclusion agrees with it on objects
        for a in f.base().objects() {
            assert_eq!(f.double.h_src(lift.comparison.components[a]), lj.obj(a));
            assert_eq!(f.double.h_tgt(lift.comparison.components[a]), j.obj(a));
        }
    }
}

#[test]
fn identity_pair_is_a_w_friendly_transformation() {
    let f = fractions(fixtures::FIX_POSB);
    let s = phi_functor(&f).unwrap();
    let a = HorizontalTransformation::identity(s.g.clone());
    let alpha = HorizontalTransformation::identity(s.gamma_functor.clone());
    check_w_friendly_transformation(&s, &s, &a, &alpha).unwrap();
}

#[test]
fn perturbed_w_friendly_transformation_fails() {
    let f = fractions(fixtures::FIX_POSB);
    let s = phi_functor(&f).unwrap();
    let a = HorizontalTransformation::identity(s.g.clone());
    let mut alpha = HorizontalTransformation::identity(s.gamma_functor.clone());
    let k = s.nabla.object_of(f.base().arr_by_name("bot<top").unwrap());
    let d = &f.double;
    let o = s.gamma_functor.obj(k);
    alpha.components[k] = d.horizontals_from(o).iter().copied().find(|&x| x != d.h_id(o)).unwrap();
    let err = check_w_friendly_transformation(&s, &s, &a, &alpha).unwrap_err();
    assert!(!err.equation.is_empty());
}

// ---- random posets -------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn conditions_agree_with_the_oracle(p in arb_marked_poset(4)) {
        let r = check_fractions_conditions(&p);
        prop_assert_eq!(r.cf_passed, cf_oracle(&p.base, &in_w_mask(&p)));
    }

    #[test]
    fn random_fractions_are_well_behaved(p in arb_marked_poset(4)) {
        prop_assume!(check_fractions_conditions(&p).cf_passed);
        let f = build_fractions(&p).unwrap();
        let (o, v, hz) = count_oracle(&p);
        let sizes = counts(&f);
        prop_assert_eq!([o, v, hz], [sizes[0], sizes[1], sizes[2]]);
        let cells = f
            .consistent_frames()
            .into_iter()
            .filter(|&(t, b)| cell_oracle(&p, &f.frame_between(t, b)))
            .count();
        prop_assert_eq!(cells, sizes[3]);
        prop_assert!(check_weak_globularity(&f.double, 2).passed);
        prop_assert!(representative_robustness(&f).passed);
        prop_assert!(classify_for_companions(&f).agrees);
        prop_assert!(check_strict_functor(&inclusion_jc(&f)).is_ok());
    }
}
