mod common;

use std::sync::Arc;

use common::*;
use proptest::prelude::*;
use wgdbl_core::dblcat::*;
use wgdbl_core::fincat::{FinCategory, FinFunctor};
use wgdbl_core::fixtures;
use wgdbl_core::fractions::{build_fractions, inclusion_jc, FractionsPresentation};

/// Chains `x₀ → x₁ → ⋯ → x_k` of arrows in `c`, counted by brute force.
fn chains(c: &FinCategory, k: usize) -> usize {
    if k == 0 {
        return c.obj_count();
    }
    let mut paths: Vec<Vec<usize>> = c.arrows().map(|a| vec![a]).collect();
    for _ in 1..k {
        paths = paths
            .iter()
            .flat_map(|p| {
                let last = *p.last().unwrap();
                c.arrows().filter(move |&a| c.src(a) == c.tgt(last)).map(move |a| {
                    let mut q = p.clone();
                    q.push(a);
                    q
                })
            })
            .collect();
    }
    paths.len()
}

fn h_arrow() -> DoubleCategory {
    DoubleCategory::horizontal(&base(fixtures::FIX_ARROW))
}

#[test]
fn horizontal_embedding_of_the_arrow_is_valid() {
    let d = h_arrow();
    assert_eq!((d.object_count(), d.vertical_count(), d.horizontal_count(), d.cell_count()), (2, 2, 3, 3));
    assert!(d.x0.is_discrete());
}

#[test]
fn vertical_z2_is_valid() {
    let d = vz2();
    assert_eq!((d.object_count(), d.vertical_count(), d.horizontal_count(), d.cell_count()), (1, 2, 1, 2));
    let v = DoubleCategory::vertical(&cyclic(2));
    assert_eq!(v.to_presentation().x0.arrows.len(), 2);
}

#[test]
fn interchange_failure_names_the_four_cells() {
    // replace the cyclic horizontal composition on the one-object fixture by
    // max: still unital and associative, but not functorial
    let mut p: DoublePresentation = serde_json::from_str(fixtures::FIX_B2A).unwrap();
    let idx = |c: &str| c[1..].parse::<usize>().unwrap();
    for e in p.m.arrows.iter_mut() {
        e[2] = format!("c{}", idx(&e[0]).max(idx(&e[1])));
    }
    match DoubleCategory::from_presentation(&p) {
        Err(DblError::InterchangeViolation { a1, a2, b1, b2 }) => {
            for c in [a1, a2, b1, b2] {
                assert!(["c0", "c1", "c2"].contains(&c.as_str()));
            }
        }
        other => panic!("expected an interchange violation, got {other:?}"),
    }
}

#[test]
fn broken_unit_map_is_named() {
    let mut p: DoublePresentation = serde_json::from_str(fixtures::FIX_B2A).unwrap();
    p.s.arrows.insert("1_*".into(), "c1".into());
    let err = DoubleCategory::from_presentation(&p).unwrap_err();
    assert!(matches!(err, DblError::Functor(_) | DblError::InternalCategoryAxiomViolation { .. }), "{err:?}");
}

#[test]
fn nerve_levels_of_the_arrow() {
    let d = h_arrow();
    let c = base(fixtures::FIX_ARROW);
    let n0 = horizontal_nerve(&d, 0);
    assert!(n0.is_discrete() && n0.obj_count() == 2);
    assert_eq!(*horizontal_nerve(&d, 1), *d.x1);
    // composable pairs of arrows, identities included
    let pairs = chains(&c, 2);
    assert_eq!(pairs, 4);
    assert_eq!(horizontal_nerve(&d, 2).obj_count(), pairs);
}

#[test]
fn nerve_is_the_iterated_fibre_product() {
    for (_, p) in marked_fixtures() {
        let f = build_fractions(&p).unwrap();
        for k in 2..=3 {
            let a = horizontal_nerve(&f.double, k);
            let b = composable_paths(&f.double, k);
            assert_eq!((a.obj_count(), a.arr_count()), (b.cat.obj_count(), b.cat.arr_count()));
        }
    }
}

#[test]
fn weak_globularity_examples() {
    let h = check_weak_globularity(&h_arrow(), 3);
    assert!(h.passed && h.isofibration_d0 && h.isofibration_d1);
    let v = check_weak_globularity(&vz2(), 3);
    assert!(!v.passed);
    assert!(!v.x0_verdict.is_equivalence);
    // the oracle: the single hom-set of the vertical category has two arrows
    let d = vz2();
    assert_eq!(d.x0.hom(0, 0).len(), 2);
    let posb = fractions(fixtures::FIX_POSB);
    assert!(check_weak_globularity(&posb.double, 3).passed);
}

#[test]
fn isofibration_implies_segal_on_all_fixtures() {
    let mut doubles: Vec<DoubleCategory> = marked_fixtures()
        .into_iter()
        .map(|(_, p)| Arc::unwrap_or_clone(build_fractions(&p).unwrap().double))
        .collect();
    doubles.extend([bg(), b2a(), vz2(), h_arrow()]);
    for d in &doubles {
        // the isofibration property presupposes a vertical category equivalent to a discrete one
        let r = check_weak_globularity(d, 3);
        if r.x0_verdict.is_equivalence && (r.isofibration_d0 || r.isofibration_d1) {
            assert!(r.segal.iter().all(|(_, v)| v.is_equivalence));
        }
    }
}

#[test]
fn structural_segal_check_matches_materialized_comparison() {
    for (name, p) in marked_fixtures() {
        let f = build_fractions(&p).unwrap();
        // materializing n = 3 over the largest fixture is too big for a test
        let nmax = if name == "posb" { 2 } else { 3 };
        let r = check_weak_globularity(&f.double, nmax);
        for (n, v) in &r.segal {
            assert_eq!(segal_comparison_materialized(&f.double, *n).is_equivalence, v.is_equivalence);
        }
    }
}

#[test]
fn filler_on_identity_boundary_is_iota() {
    let d = h_arrow();
    for a in d.x0.objects() {
        let f = find_filler(&d, Side::Right, d.x0.identity(a), d.h_id(a)).unwrap().unwrap();
        assert_eq!(f.cell, d.iota(a));
    }
}

#[test]
fn filler_in_fractions_of_posb() {
    let f = fractions(fixtures::FIX_POSB);
    let d = &*f.double;
    let c = f.base();
    let bx = c.arr_by_name("bot<x").unwrap();
    let h = f.horizontal(c.identity(c.src(bx)), bx, c.identity(c.tgt(bx))).unwrap();
    // every vertical into the codomain of h
    let tgt = d.h_tgt(h);
    let mut count = 0;
    for v in d.x0.arrows().filter(|&v| d.x0.tgt(v) == tgt) {
        let fill = find_filler(d, Side::Right, v, h).unwrap().expect("weakly globular, so a filler exists");
        assert!(d.is_vertically_invertible(fill.cell));
        assert_eq!(d.bottom(fill.cell), h);
        assert_eq!(d.x0.compose(v, fill.factor), Some(d.right(fill.cell)));
        count += 1;
    }
    assert!(count > 1);
}

#[test]
fn filler_on_vertical_z2_is_rejected() {
    let d = vz2();
    assert!(matches!(find_filler(&d, Side::Left, d.x0.identity(0), d.h_id(0)), Err(DblError::NotWeaklyGlobular(_))));
}

#[test]
fn discretization_of_the_arrow_is_its_nerve() {
    let d = h_arrow();
    let c = base(fixtures::FIX_ARROW);
    let disc = discretize(&d, 3).unwrap();
    assert!(disc.level0_discrete);
    assert!(disc.segal.iter().all(|(_, v)| v.is_equivalence));
    for (k, level) in disc.simplicial.levels.iter().enumerate() {
        assert_eq!(level.obj_count(), chains(&c, k), "level {k}");
    }
    assert!(disc.identities.iter().all(|i| i.strict));
}

#[test]
fn discretization_of_posb_collapses_level_zero_to_objects() {
    let f = fractions(fixtures::FIX_POSB);
    let disc = discretize(&f.double, 3).unwrap();
    // components of the vertical category are the codomains of W arrows
    let c = f.base();
    let mut targets: Vec<_> = f.presentation.w.iter().map(|&w| c.tgt(w)).collect();
    targets.sort_unstable();
    targets.dedup();
    assert_eq!(targets.len(), 4);
    assert_eq!(disc.simplicial.levels[0].obj_count(), targets.len());
    assert!(disc.level0_discrete);
    assert!(disc.identities.iter().all(|i| i.up_to_iso));
}

#[test]
fn discretization_of_vertical_z2_is_rejected() {
    assert!(matches!(discretize(&vz2(), 3), Err(DblError::NotWeaklyGlobular(_))));
}

#[test]
fn components_of_horizontal_embedding() {
    let c = base(fixtures::FIX_POSB);
    let p = pi0_double(&DoubleCategory::horizontal(&c)).unwrap();
    assert_eq!((p.cat.obj_count(), p.cat.arr_count()), (c.obj_count(), c.arr_count()));
    for g in c.arrows() {
        for f in c.arrows() {
            let h = c.compose(g, f).map(|h| p.arrow_class[h]);
            assert_eq!(p.cat.compose(p.arrow_class[g], p.arrow_class[f]), h);
        }
    }
}

#[test]
fn components_of_fractions_of_iso_are_chaotic() {
    let f = fractions(fixtures::FIX_ISO);
    let p = pi0_double(&f.double).unwrap();
    assert_eq!(p.cat.obj_count(), 2);
    assert!(p.cat.objects().all(|a| p.cat.objects().all(|b| p.cat.hom(a, b).len() == 1)));
}

#[test]
fn components_of_b2a_are_terminal() {
    let p = pi0_double(&b2a()).unwrap();
    assert_eq!((p.cat.obj_count(), p.cat.arr_count()), (1, 1));
}

#[test]
fn identity_functor_and_transformations_pass() {
    let f = fractions(fixtures::FIX_ISO);
    let id = DoubleFunctor::identity(f.double.clone());
    assert!(check_strict_functor(&id).is_ok());
    assert!(check_horizontal_transformation(&HorizontalTransformation::identity(id.clone())).is_ok());
    assert!(check_vertical_transformation(&VerticalTransformation::identity(id.clone())).is_ok());
    assert!(check_2_equivalence(&id).unwrap().passed);
}

#[test]
fn inclusion_is_a_strict_functor() {
    for (_, p) in marked_fixtures() {
        let f = build_fractions(&p).unwrap();
        assert!(check_strict_functor(&inclusion_jc(&f)).is_ok());
    }
}

#[test]
fn perturbed_transformation_is_rejected() {
    let f = fractions(fixtures::FIX_ISO);
    let d = &*f.double;
    let id = DoubleFunctor::identity(f.double.clone());
    let mut t = HorizontalTransformation::identity(id);
    let v = d.x0.arrows().find(|&v| !d.x0.is_identity(v)).unwrap();
    let wrong = d.x1.arrows().find(|&c| c != t.cells[v]).unwrap();
    t.cells[v] = wrong;
    let err = check_horizontal_transformation(&t).unwrap_err();
    assert!(!err.equation.is_empty() && !err.at.is_empty());
}

#[test]
fn inclusion_for_identities_is_a_two_equivalence() {
    let c = base(fixtures::FIX_ARROW);
    let f = build_fractions(&FractionsPresentation::identities(c)).unwrap();
    let j = inclusion_jc(&f);
    assert!(j.is_bijective());
    assert!(check_2_equivalence(&j).unwrap().passed);
}

#[test]
fn collapse_to_the_point_is_not_a_two_equivalence() {
    let h = Arc::new(h_arrow());
    let t = Arc::new(DoubleCategory::horizontal(&FinCategory::terminal()));
    let f0 = FinFunctor::new(h.x0.clone(), t.x0.clone(), vec![0; h.object_count()], vec![0; h.vertical_count()]).unwrap();
    let f1 = FinFunctor::new(h.x1.clone(), t.x1.clone(), vec![0; h.horizontal_count()], vec![0; h.cell_count()]).unwrap();
    let f = DoubleFunctor { dom: h, cod: t, f0, f1 };
    assert!(check_strict_functor(&f).is_ok());
    let v = check_2_equivalence(&f).unwrap();
    assert!(!v.passed);
}

#[test]
fn pi0_of_a_levelwise_equivalence_is_an_isomorphism() {
    // J: H(C) → C{W} for the walking isomorphism with W = everything
    let f = fractions(fixtures::FIX_ISO);
    let j = inclusion_jc(&f);
    let v = check_2_equivalence(&j).unwrap();
    assert!(v.passed);
    let px = pi0_double(&j.dom).unwrap();
    let py = pi0_double(&j.cod).unwrap();
    assert_eq!((px.cat.obj_count(), px.cat.arr_count()), (py.cat.obj_count(), py.cat.arr_count()));
}

#[test]
fn presentations_round_trip_through_json() {
    let mut doubles = vec![bg(), b2a(), vz2(), h_arrow()];
    for (_, p) in marked_fixtures() {
        doubles.push(Arc::unwrap_or_clone(build_fractions(&p).unwrap().double));
    }
    for d in doubles {
        let p = d.to_presentation();
        let text = serde_json::to_string(&p).unwrap();
        let back: DoublePresentation = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
        let again = DoubleCategory::from_presentation(&back).unwrap();
        assert_eq!(again.to_presentation(), p);
    }
}

#[test]
fn disjoint_union_adds_components() {
    let u = DoubleCategory::disjoint_union(&[&bg(), &b2a()]).unwrap();
    assert_eq!(u.object_count(), 2);
    assert_eq!(pi0_double(&u).unwrap().cat.obj_count(), 2);
}

proptest! {
    #[test]
    fn horizontal_embedding_of_posets(le in arb_order(4)) {
        let c = poset(&le);
        let d = DoubleCategory::horizontal(&c);
        let back = DoubleCategory::from_presentation(&d.to_presentation()).unwrap();
        prop_assert_eq!(back.to_presentation(), d.to_presentation());
        prop_assert!(check_weak_globularity(&d, 3).passed);
        prop_assert_eq!(horizontal_nerve(&d, 2).obj_count(), chains(&c, 2));
        let disc = discretize(&d, 3).unwrap();
        for (k, level) in disc.simplicial.levels.iter().enumerate() {
            prop_assert_eq!(level.obj_count(), chains(&c, k));
        }
    }
}
