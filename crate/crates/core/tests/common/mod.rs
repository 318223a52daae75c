#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;

use proptest::prelude::*;
use wgdbl_core::dblcat::DoubleCategory;
use wgdbl_core::fincat::{CategoryBuilder, FinCategory, FinFunctor};
use wgdbl_core::fixtures;
use wgdbl_core::fractions::{build_fractions, FractionsDouble, FractionsPresentation};

pub fn presentation(text: &str) -> FractionsPresentation {
    FractionsPresentation::from_input(&fixtures::fractions_input(text)).unwrap()
}

pub fn base(text: &str) -> Arc<FinCategory> {
    presentation(text).base
}

pub fn fractions(text: &str) -> FractionsDouble {
    build_fractions(&presentation(text)).unwrap()
}

/// The three marked-category fixtures.
pub fn marked_fixtures() -> Vec<(&'static str, FractionsPresentation)> {
    vec![
        ("arrow", presentation(fixtures::FIX_ARROW)),
        ("iso", presentation(fixtures::FIX_ISO)),
        ("posb", presentation(fixtures::FIX_POSB)),
    ]
}

pub fn bg() -> DoubleCategory {
    fixtures::double(fixtures::FIX_BG)
}

pub fn b2a() -> DoubleCategory {
    fixtures::double(fixtures::FIX_B2A)
}

pub fn vz2() -> DoubleCategory {
    fixtures::double(fixtures::V_Z2)
}

/// The poset on `0..n` with the given order relation (reflexive and
/// transitive). Objects are `p{i}`, arrows `p{i}<p{j}`.
pub fn poset(le: &[Vec<bool>]) -> FinCategory {
    let n = le.len();
    let mut b = CategoryBuilder::new();
    for i in 0..n {
        b.add_object(format!("p{i}")).unwrap();
    }
    let mut ar = vec![vec![None; n]; n];
    for i in 0..n {
        ar[i][i] = Some(b.add_identity(format!("1_p{i}"), i).unwrap());
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && le[i][j] {
                ar[i][j] = Some(b.add_arrow(format!("p{i}<p{j}"), i, j).unwrap());
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i != j && j != k && le[i][j] && le[j][k] {
                    b.set_composite(ar[j][k].unwrap(), ar[i][j].unwrap(), ar[i][k].unwrap()).unwrap();
                }
            }
        }
    }
    b.finish().unwrap()
}

/// Reflexive-transitive closure of a relation.
pub fn close(mut le: Vec<Vec<bool>>) -> Vec<Vec<bool>> {
    let n = le.len();
    for i in 0..n {
        le[i][i] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if le[i][k] && le[k][j] {
                    le[i][j] = true;
                }
            }
        }
    }
    le
}

/// Random partial orders on at most `max` points, compatible with the
/// natural order so that the closure stays antisymmetric.
pub fn arb_order(max: usize) -> impl Strategy<Value = Vec<Vec<bool>>> {
    (1..=max).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let le = (0..n).map(|i| (0..n).map(|j| i < j && bits[i * n + j]).collect()).collect();
            close(le)
        })
    })
}

/// The one-object category of the cyclic group of order `n`; arrow `k` is
/// named `g{k}` and `g0` is the identity.
pub fn cyclic(n: usize) -> FinCategory {
    let mut b = CategoryBuilder::new();
    let o = b.add_object("*").unwrap();
    let mut ar = vec![b.add_identity("g0", o).unwrap()];
    for k in 1..n {
        ar.push(b.add_arrow(format!("g{k}"), o, o).unwrap());
    }
    for i in 1..n {
        for j in 1..n {
            b.set_composite(ar[i], ar[j], ar[(i + j) % n]).unwrap();
        }
    }
    b.finish().unwrap()
}

/// The double category of commutative squares in `c`: horizontals and
/// verticals are both the arrows of `c`, cells are commuting squares.
pub fn squares(c: &Arc<FinCategory>) -> DoubleCategory {
    let mut b = CategoryBuilder::new();
    for h in c.arrows() {
        b.add_object(c.arr_name(h)).unwrap();
    }
    // (top, bottom, left, right)
    let mut sq = Vec::new();
    let mut index = HashMap::new();
    for top in c.arrows() {
        for bottom in c.arrows() {
            for &u in c.hom(c.src(top), c.src(bottom)) {
                for &v in c.hom(c.tgt(top), c.tgt(bottom)) {
                    if c.compose(v, top) == c.compose(bottom, u) {
                        let name = format!("[{};{};{};{}]", c.arr_name(top), c.arr_name(bottom), c.arr_name(u), c.arr_name(v));
                        let k = b.add_arrow(name, top, bottom).unwrap();
                        index.insert((top, bottom, u, v), k);
                        sq.push((top, bottom, u, v));
                    }
                }
            }
        }
    }
    for h in c.arrows() {
        let id = index[&(h, h, c.identity(c.src(h)), c.identity(c.tgt(h)))];
        b.set_identity(h, id);
    }
    for (k, &(t1, b1, u1, v1)) in sq.iter().enumerate() {
        for (l, &(t2, b2, u2, v2)) in sq.iter().enumerate() {
            if t2 == b1 {
                let comp = (t1, b2, c.compose(u2, u1).unwrap(), c.compose(v2, v1).unwrap());
                b.set_composite(l, k, index[&comp]).unwrap();
            }
        }
    }
    let x1 = Arc::new(b.finish().unwrap());
    let x0 = c.clone();
    let d0 = FinFunctor::new(
        x1.clone(),
        x0.clone(),
        c.arrows().map(|h| c.src(h)).collect(),
        sq.iter().map(|s| s.2).collect(),
    )
    .unwrap();
    let d1 = FinFunctor::new(
        x1.clone(),
        x0.clone(),
        c.arrows().map(|h| c.tgt(h)).collect(),
        sq.iter().map(|s| s.3).collect(),
    )
    .unwrap();
    let s = FinFunctor::new(
        x0.clone(),
        x1.clone(),
        c.objects().map(|o| c.identity(o)).collect(),
        c.arrows()
            .map(|u| index[&(c.identity(c.src(u)), c.identity(c.tgt(u)), u, u)])
            .collect(),
    )
    .unwrap();
    let mut m_h = HashMap::new();
    for f in c.arrows() {
        for &g in c.out_arrows(c.tgt(f)) {
            m_h.insert((g, f), c.compose(g, f).unwrap());
        }
    }
    let mut m_c = HashMap::new();
    for (k, &(t1, b1, u1, v1)) in sq.iter().enumerate() {
        for (l, &(t2, b2, u2, v2)) in sq.iter().enumerate() {
            if u2 == v1 {
                let comp = (c.compose(t2, t1).unwrap(), c.compose(b2, b1).unwrap(), u1, v2);
                m_c.insert((l, k), index[&comp]);
            }
        }
    }
    DoubleCategory::new(x0, x1, d0, d1, s, m_h, m_c).unwrap()
}
