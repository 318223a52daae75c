mod common;

use std::sync::Arc;

use common::*;
use proptest::prelude::*;
use wgdbl_core::dblcat::{check_2_equivalence, DoubleCategory};
use wgdbl_core::fixtures;
use wgdbl_core::fractions::{build_fractions, inclusion_jc, FractionsPresentation};
use wgdbl_core::homotopy::*;

/// Order of an element by repeated multiplication.
fn element_order(g: &FiniteGroup, a: usize) -> usize {
    let mut x = a;
    let mut n = 1;
    while x != g.identity {
        x = g.mul(x, a);
        n += 1;
    }
    n
}

/// Is the group cyclic of its order? Checked by looking for a generator.
fn is_cyclic(g: &FiniteGroup) -> bool {
    (0..g.order()).any(|a| element_order(g, a) == g.order())
}

/// The same group with its elements permuted by `perm` (old index ↦ new).
fn relabel(g: &FiniteGroup, perm: &[usize]) -> FiniteGroup {
    let n = g.order();
    let mut inv = vec![0; n];
    for (old, &new) in perm.iter().enumerate() {
        inv[new] = old;
    }
    FiniteGroup {
        elements: (0..n).map(|k| g.elements[inv[k]].clone()).collect(),
        table: (0..n).map(|a| (0..n).map(|b| perm[g.mul(inv[a], inv[b])]).collect()).collect(),
        identity: perm[g.identity],
    }
}

fn klein() -> FiniteGroup {
    FiniteGroup {
        elements: (0..4).map(|k| k.to_string()).collect(),
        table: (0..4).map(|a: usize| (0..4).map(|b: usize| a ^ b).collect()).collect(),
        identity: 0,
    }
}

#[test]
fn group_fixtures_are_groupoidal() {
    for d in [bg(), b2a()] {
        let v = check_groupoidal(&d).unwrap();
        assert!(v.groupoidal);
        assert_eq!((v.failing_hom, v.failing_arrow), (None, None));
    }
}

#[test]
fn horizontal_arrow_category_is_not_groupoidal() {
    let d = DoubleCategory::horizontal(&base(fixtures::FIX_ARROW));
    let v = check_groupoidal(&d).unwrap();
    assert!(!v.groupoidal);
    assert_eq!(v.failing_arrow.as_deref(), Some("[f]"));
    assert!(matches!(homotopy_groups(&d, 0), Err(HomotopyError::NotGroupoidal(_))));
    assert!(matches!(postnikov_map(Arc::new(d)), Err(HomotopyError::NotGroupoidal(_))));
}

#[test]
fn groupoidal_check_needs_weak_globularity() {
    assert!(matches!(check_groupoidal(&vz2()), Err(HomotopyError::Double(_))));
}

#[test]
fn groups_of_the_one_object_groupoid() {
    let d = bg();
    let g = homotopy_groups(&d, 0).unwrap();
    assert_eq!(g.pi0, 1);
    assert_eq!(g.pi1.order(), 2);
    assert!(g.pi1.is_group() && is_cyclic(&g.pi1));
    assert_eq!(g.pi2.order(), 1);
    assert!(g.pi1.isomorphism_to(&FiniteGroup::cyclic(2)).is_some());
}

#[test]
fn groups_of_the_one_object_double_groupoid_with_cells() {
    let d = b2a();
    let g = homotopy_groups(&d, 0).unwrap();
    assert_eq!(g.pi0, 1);
    assert_eq!(g.pi1.order(), 1);
    assert_eq!(g.pi2.order(), 3);
    assert!(g.pi2.is_group() && is_cyclic(&g.pi2));
    assert!(g.pi2.isomorphism_to(&FiniteGroup::cyclic(3)).is_some());
}

#[test]
fn disjoint_union_has_two_components() {
    let u = DoubleCategory::disjoint_union(&[&bg(), &b2a()]).unwrap();
    let g = homotopy_groups(&u, 0).unwrap();
    assert_eq!(g.pi0, 2);
    assert_eq!(g.components, vec!["0.*".to_string(), "1.*".to_string()]);
    assert_eq!((g.pi1.order(), g.pi2.order()), (2, 1));
    let x = basepoint(&u, "[1.*]").unwrap();
    let h = homotopy_groups(&u, x).unwrap();
    assert_eq!((h.pi1.order(), h.pi2.order()), (1, 3));
    assert_eq!(h.basepoint, "1.*");
}

#[test]
fn basepoints_by_name() {
    let d = bg();
    assert_eq!(basepoint(&d, "*").unwrap(), 0);
    assert_eq!(basepoint(&d, "[*]").unwrap(), 0);
    assert_eq!(basepoint(&d, "nope"), Err(HomotopyError::UnknownBasepoint("nope".into())));
}

#[test]
fn second_groups_are_abelian() {
    let mut inputs = vec![bg(), b2a()];
    for (_, p) in marked_fixtures().into_iter().skip(1) {
        inputs.push((*build_fractions(&p).unwrap().double).clone());
    }
    for d in inputs {
        assert!(check_groupoidal(&d).unwrap().groupoidal);
        for x in d.x0.objects() {
            assert!(check_eckmann_hilton(&d, x));
            assert!(homotopy_groups(&d, x).unwrap().pi2.is_abelian());
        }
    }
}

#[test]
fn postnikov_map_of_the_group_fixtures() {
    let m = postnikov_map(Arc::new(bg())).unwrap();
    assert!(m.report.passed && m.report.pi0_iso);
    assert_eq!(m.report.pi1_iso, vec![("*".to_string(), true)]);
    assert!(m.report.target_pi2_trivial);

    let m = postnikov_map(Arc::new(b2a())).unwrap();
    assert!(m.report.passed);
    let t = &m.target;
    assert_eq!((t.object_count(), t.horizontal_count(), t.cell_count()), (1, 1, 1));
    let g = homotopy_groups(t, 0).unwrap();
    assert_eq!((g.pi0, g.pi1.order(), g.pi2.order()), (1, 1, 1));
    assert!(!m.report.functor_bijective);
}

#[test]
fn postnikov_map_of_a_union() {
    let u = DoubleCategory::disjoint_union(&[&bg(), &b2a()]).unwrap();
    let m = postnikov_map(Arc::new(u)).unwrap();
    assert!(m.report.passed);
    assert_eq!(m.report.pi1_iso.len(), 2);
}

#[test]
fn postnikov_map_of_a_component_double_category_is_the_identity() {
    let first = postnikov_map(Arc::new(bg())).unwrap();
    let again = postnikov_map(first.target.clone()).unwrap();
    assert!(again.report.passed);
    assert!(again.report.functor_bijective);
    let d = &first.target;
    for a in d.x0.objects() {
        assert_eq!(format!("[{}]", d.x0.obj_name(a)), again.target.x0.obj_name(again.functor.obj(a)));
    }
}

#[test]
fn groups_are_invariant_under_two_equivalences() {
    let cases = [presentation(fixtures::FIX_ISO), FractionsPresentation::all(Arc::new(cyclic(3)))];
    for p in cases {
        let f = build_fractions(&p).unwrap();
        let j = inclusion_jc(&f);
        assert!(check_2_equivalence(&j).unwrap().passed);
        for a in p.base.objects() {
            let gx = homotopy_groups(&j.dom, a).unwrap();
            let gy = homotopy_groups(&j.cod, j.obj(a)).unwrap();
            assert_eq!(gx.pi0, gy.pi0);
            assert!(gx.pi1.isomorphism_to(&gy.pi1).is_some());
            assert!(gx.pi2.isomorphism_to(&gy.pi2).is_some());
        }
    }
}

#[test]
fn group_isomorphism_search() {
    assert!(FiniteGroup::cyclic(4).isomorphism_to(&klein()).is_none());
    assert!(klein().is_group() && klein().is_abelian());
    assert!(FiniteGroup::trivial().isomorphism_to(&FiniteGroup::cyclic(1)).is_some());
    assert!(FiniteGroup::cyclic(2).isomorphism_to(&FiniteGroup::cyclic(3)).is_none());
    let mut broken = FiniteGroup::cyclic(3);
    broken.table[1][1] = 1;
    assert!(!broken.is_group());
}

proptest! {
    #[test]
    fn horizontal_cyclic_groups(n in 1usize..7) {
        let d = DoubleCategory::horizontal(&cyclic(n));
        let g = homotopy_groups(&d, 0).unwrap();
        prop_assert_eq!(g.pi0, 1);
        prop_assert_eq!(g.pi1.order(), n);
        prop_assert!(is_cyclic(&g.pi1));
        prop_assert_eq!(g.pi2.order(), 1);
        prop_assert!(postnikov_map(Arc::new(d)).unwrap().report.functor_bijective);
    }

    #[test]
    fn relabelled_groups_are_isomorphic(
        (n, perm) in (1usize..7).prop_flat_map(|n| (Just(n), Just((0..n).collect::<Vec<_>>()).prop_shuffle()))
    ) {
        let g = FiniteGroup::cyclic(n);
        let h = relabel(&g, &perm);
        prop_assert!(h.is_group());
        let map = g.isomorphism_to(&h).unwrap();
        prop_assert!(g.is_isomorphism(&h, &map));
        prop_assert!(g.is_isomorphism(&h, &perm));
    }
}
