mod common;

use std::sync::Arc;

use common::*;
use wgdbl_core::bicat::{equivalences, fundamental_bicategory};
use wgdbl_core::companion::*;
use wgdbl_core::dblcat::{check_weak_globularity, DoubleCategory, DoubleFunctor};
use wgdbl_core::fixtures;
use wgdbl_core::fractions::{build_fractions, lift_w_friendly, phi_functor, FractionsPresentation};

fn doubles() -> Vec<(&'static str, DoubleCategory)> {
    let mut out: Vec<_> = marked_fixtures()
        .into_iter()
        .map(|(n, p)| (n, (*build_fractions(&p).unwrap().double).clone()))
        .collect();
    out.push(("bg", bg()));
    out.push(("b2a", b2a()));
    out.push(("v-z2", vz2()));
    out
}

fn h(d: &DoubleCategory, name: &str) -> usize {
    d.x1.obj_by_name(name).unwrap_or_else(|| panic!("no horizontal {name}"))
}

fn revalidate(d: &DoubleCategory) {
    DoubleCategory::from_presentation(&d.to_presentation()).unwrap();
}

#[test]
fn horizontal_identities_have_identity_companions() {
    for (name, d) in doubles() {
        for a in d.x0.objects() {
            let p = find_companion(&d, d.h_id(a)).unwrap_or_else(|| panic!("{name}"));
            assert_eq!(p.v, d.x0.identity(a), "{name}");
            assert_eq!((p.psi, p.chi), (d.iota(a), d.iota(a)), "{name}");
            assert!(verify_companion(&d, &p));
            let q = find_conjoint(&d, d.h_id(a)).unwrap();
            assert_eq!((q.v, q.alpha, q.beta), (d.x0.identity(a), d.iota(a), d.iota(a)));
        }
    }
}

#[test]
fn marked_arrow_in_normal_form_has_a_companion() {
    let f = fractions(fixtures::FIX_POSB);
    let d = &f.double;
    let c = f.base();
    let u = h(d, "(bot<top,bot<x,x<top)");
    let p = find_companion(d, u).unwrap();
    assert!(verify_companion(d, &p));
    let v = f.vertical(c.arr_by_name("bot<top").unwrap(), c.arr_by_name("x<top").unwrap()).unwrap();
    assert_eq!(p.v, v);
    assert_eq!(d.x0.arr_name(p.v), "v(bot<top,x<top)");
}

#[test]
fn arrow_between_identity_objects_has_no_companion() {
    let f = fractions(fixtures::FIX_POSB);
    let d = &f.double;
    assert!(find_companion(d, h(d, "(1_bot,bot<x,1_x)")).is_none());
}

#[test]
fn companion_verticals_are_unique_in_weakly_globular_inputs() {
    for (name, d) in doubles() {
        if !check_weak_globularity(&d, 2).passed {
            continue;
        }
        for f in d.x1.objects() {
            let all = companions_of(&d, f);
            assert!(all.windows(2).all(|w| w[0].v == w[1].v), "{name}: {}", d.x1.obj_name(f));
        }
    }
}

#[test]
fn conjoint_from_identity_companion_is_the_identity_conjoint() {
    let d = bg();
    let a = 0;
    let p = find_companion(&d, d.h_id(a)).unwrap();
    let q = conjoint_from_companion(&d, &p).unwrap();
    assert_eq!(q, ConjointPair { u: d.h_id(a), v: d.x0.identity(a), alpha: d.iota(a), beta: d.iota(a) });
}

#[test]
fn conjoint_from_companion_inverts_the_vertical() {
    let f = fractions(fixtures::FIX_POSB);
    let d = &f.double;
    let p = find_companion(d, h(d, "(bot<top,bot<x,x<top)")).unwrap();
    let q = conjoint_from_companion(d, &p).unwrap();
    assert!(verify_conjoint(d, &q));
    assert_eq!(q.u, p.f);
    assert_eq!(Some(q.v), d.x0.inverse(p.v));
    assert_eq!(d.x0.arr_name(q.v), "v(x<top,bot<top)");
}

#[test]
fn conjoint_from_companion_needs_an_invertible_vertical() {
    let d = squares(&base(fixtures::FIX_ARROW));
    let f = h(&d, "f");
    let p = find_companion(&d, f).unwrap();
    assert_eq!(d.x0.arr_name(p.v), "f");
    assert_eq!(conjoint_from_companion(&d, &p), Err(CompanionError::VerticalNotInvertible("f".into())));
}

#[test]
fn conjoint_from_companion_rejects_non_companions() {
    let d = squares(&base(fixtures::FIX_ARROW));
    let mut p = find_companion(&d, h(&d, "f")).unwrap();
    p.chi = p.psi;
    assert_eq!(conjoint_from_companion(&d, &p), Err(CompanionError::NotACompanion));
}

#[test]
fn every_square_horizontal_is_its_own_companion() {
    for text in [fixtures::FIX_ARROW, fixtures::FIX_ISO, fixtures::FIX_POSB] {
        let d = squares(&base(text));
        for f in d.x1.objects() {
            let p = find_companion(&d, f).unwrap();
            assert_eq!(p.v, f);
            // conjoints exist exactly for the invertible arrows
            assert_eq!(find_conjoint(&d, f).is_some(), d.x0.is_iso(f), "{}", d.x1.obj_name(f));
        }
    }
}

#[test]
fn companions_by_vertical_agree_with_companions_by_horizontal() {
    let f = fractions(fixtures::FIX_POSB);
    let d = &f.double;
    for v in d.x0.arrows() {
        if let Some(p) = find_companion_of_vertical(d, v) {
            assert_eq!(p.v, v);
            assert!(companions_of(d, p.f).contains(&p));
        }
        if let Some(q) = find_conjoint_of_vertical(d, v) {
            assert!(verify_conjoint(d, &q));
        }
    }
}

#[test]
fn companions_are_preserved_by_strict_functors() {
    for (name, p) in marked_fixtures() {
        let f = build_fractions(&p).unwrap();
        let s = phi_functor(&f).unwrap();
        let lift = lift_w_friendly(&f, &s).unwrap();
        let id = DoubleFunctor::identity(f.double.clone());
        for functor in [&lift.functor, &id] {
            for h in f.double.x1.objects() {
                for pair in companions_of(&f.double, h) {
                    assert!(verify_companion(&functor.cod, &map_companion(functor, &pair)), "{name}");
                }
            }
        }
    }
}

#[test]
fn companions_are_precompanions_with_identity_data() {
    let f = fractions(fixtures::FIX_POSB);
    let d = &f.double;
    let oracle = CompanionOracle::new(d);
    for h in d.x1.objects() {
        if find_companion(d, h).is_none() {
            continue;
        }
        let (a, b) = (d.h_src(h), d.h_tgt(h));
        assert!(is_precompanion(d, h).unwrap().is_some());
        assert!(oracle.left_data(h).iter().any(|l| l.r == d.h_id(b) && l.f_prime == h));
        assert!(oracle.right_data(h).iter().any(|r| r.l == d.h_id(a) && r.f_second == h));
    }
}

#[test]
fn invertible_arrow_is_a_precompanion() {
    let f = fractions(fixtures::FIX_ISO);
    let d = &f.double;
    let w = is_precompanion(d, h(d, "(1_a,f,1_b)")).unwrap().unwrap();
    assert!(d.is_vertically_invertible(w.link));
    assert_eq!(d.top(w.link), w.left.r);
    assert_eq!(d.bottom(w.link), w.right.l);
    assert!(d.is_vertically_invertible(w.left.phi) && d.is_vertically_invertible(w.right.phi));
    assert!(verify_companion(d, &w.left.companion) && verify_companion(d, &w.right.companion));
}

#[test]
fn arrow_without_inverse_is_not_a_precompanion() {
    let f = fractions(fixtures::FIX_ARROW);
    let d = &f.double;
    assert!(is_precompanion(d, h(d, "(1_a,f,1_b)")).unwrap().is_none());
}

#[test]
fn precompanions_are_the_equivalences_of_the_fundamental_bicategory() {
    for (name, p) in marked_fixtures() {
        let f = build_fractions(&p).unwrap();
        let bic = fundamental_bicategory(&f.double).unwrap();
        let eq = equivalences(&bic.bicat);
        for h in f.double.x1.objects() {
            let pre = is_precompanion(&f.double, h).unwrap().is_some();
            assert_eq!(pre, eq.contains(&h), "{name}: {}", f.double.x1.obj_name(h));
        }
    }
}

#[test]
fn precompanion_data_is_unique_up_to_invertible_cells() {
    for (name, p) in marked_fixtures() {
        let f = build_fractions(&p).unwrap();
        let d = &f.double;
        let oracle = CompanionOracle::new(d);
        for h in d.x1.objects() {
            let lefts = oracle.left_data(h);
            let rights = oracle.right_data(h);
            let (Some(l1), Some(r1)) = (lefts.first(), rights.first()) else { continue };
            let w1 = PreCompanionWitness { left: *l1, right: *r1, link: oracle.link(l1, r1).unwrap() };
            for l2 in lefts.iter().take(4) {
                for r2 in rights.iter().take(4) {
                    let w2 = PreCompanionWitness { left: *l2, right: *r2, link: oracle.link(l2, r2).unwrap() };
                    let (on_r, on_l) = compare_precompanions(d, &w1, &w2).unwrap();
                    assert!(d.is_vertically_invertible(on_r) && d.is_vertically_invertible(on_l), "{name}");
                    assert_eq!((d.top(on_r), d.bottom(on_r)), (l1.r, l2.r));
                    assert_eq!((d.top(on_l), d.bottom(on_l)), (r1.l, r2.l));
                }
            }
        }
    }
}

#[test]
fn comp_of_a_horizontal_category_has_only_identity_quadruples() {
    let arrow = base(fixtures::FIX_ARROW);
    let comp = comp_double_category(Arc::new(DoubleCategory::horizontal(&arrow))).unwrap();
    let d = &comp.base;
    assert_eq!(comp.double.vertical_count(), 2);
    for q in &comp.quadruples {
        assert!(d.x0.is_identity(q.v));
        assert_eq!(q.f, d.h_id(d.x0.src(q.v)));
    }
}

#[test]
fn comp_verticals_contain_the_images_of_marked_triangles() {
    let f = fractions(fixtures::FIX_POSB);
    let s = phi_functor(&f).unwrap();
    for &(u, w) in &s.nabla.arrows {
        let q = s.quadruple(u, w);
        assert!(verify_companion(&f.double, &q));
        assert!(s.comp.vertical_of(&q).is_some());
    }
    // every companion pair of C{W} is a vertical arrow of Comp
    let n: usize = f.double.x1.objects().map(|h| companions_of(&f.double, h).len()).sum();
    assert_eq!(s.comp.double.vertical_count(), n);
}

#[test]
fn comp_is_a_valid_double_category_on_every_fixture() {
    let mut inputs: Vec<(String, DoubleCategory)> = doubles().into_iter().map(|(n, d)| (n.to_string(), d)).collect();
    inputs.push(("squares(arrow)".into(), squares(&base(fixtures::FIX_ARROW))));
    for (name, d) in inputs {
        let comp = comp_double_category(Arc::new(d)).unwrap_or_else(|e| panic!("{name}: {e}"));
        revalidate(&comp.double);
        assert_eq!(comp.double.object_count(), comp.base.object_count(), "{name}");
        assert_eq!(comp.double.horizontal_count(), comp.base.horizontal_count(), "{name}");
        for (k, &(theta, i, j)) in comp.cells.iter().enumerate() {
            assert_eq!(comp.double.left(k), i);
            assert_eq!(comp.double.right(k), j);
            assert_eq!(comp.base.left(theta), comp.quadruples[i].v);
            assert_eq!(comp.base.right(theta), comp.quadruples[j].v);
        }
    }
}

#[test]
fn quadruple_composition_is_a_companion_pair() {
    let f = fractions(fixtures::FIX_POSB);
    let d = &f.double;
    let comp = comp_double_category(f.double.clone()).unwrap();
    for p in &comp.quadruples {
        for q in &comp.quadruples {
            if d.h_tgt(q.f) == d.h_src(p.f) {
                let r = compose_quadruples(d, p, q).unwrap();
                assert!(verify_companion(d, &r));
            }
        }
    }
}

#[test]
fn identities_marked_with_every_arrow_make_all_horizontals_precompanions() {
    let iso = base(fixtures::FIX_ISO);
    let f = build_fractions(&FractionsPresentation::all(iso)).unwrap();
    let d = &f.double;
    assert!(d.x1.objects().all(|h| is_precompanion(d, h).unwrap().is_some()));
}
