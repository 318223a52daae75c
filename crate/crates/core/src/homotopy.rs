//! Groupoidal weakly globular double categories and their homotopy groups.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dblcat::{
    check_strict_functor, hom_category, pi0_double, require_wg, DblError, DoubleCategory, DoubleFunctor, Pi0Double,
    DEFAULT_NMAX,
};
use crate::fincat::{pi0, Ar, FinFunctor, Ob};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomotopyError {
    #[error(transparent)]
    Double(#[from] DblError),
    #[error("not groupoidal: {0}")]
    NotGroupoidal(String),
    #[error("unknown basepoint `{0}`")]
    UnknownBasepoint(String),
}

/// A finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    pub elements: Vec<String>,
    /// `table[a][b] = a·b`.
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
}

impl FiniteGroup {
    pub fn trivial() -> Self {
        FiniteGroup { elements: vec!["e".into()], table: vec![vec![0]], identity: 0 }
    }

    pub fn cyclic(n: usize) -> Self {
        FiniteGroup {
            elements: (0..n).map(|k| k.to_string()).collect(),
            table: (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect(),
            identity: 0,
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> Option<usize> {
        (0..self.order()).find(|&b| self.mul(a, b) == self.identity && self.mul(b, a) == self.identity)
    }

    pub fn is_group(&self) -> bool {
        let n = self.order();
        let closed = self.table.len() == n && self.table.iter().all(|r| r.len() == n && r.iter().all(|&x| x < n));
        closed
            && (0..n).all(|a| self.mul(self.identity, a) == a && self.mul(a, self.identity) == a)
            && (0..n).all(|a| self.inverse(a).is_some())
            && (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c)))))
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Whether `map` is a bijective homomorphism to `other`.
    pub fn is_isomorphism(&self, other: &FiniteGroup, map: &[usize]) -> bool {
        let n = self.order();
        if other.order() != n || map.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for &x in map {
            if x >= n || seen[x] {
                return false;
            }
            seen[x] = true;
        }
        (0..n).all(|a| (0..n).all(|b| map[self.mul(a, b)] == other.mul(map[a], map[b])))
    }

    /// An isomorphism to `other`, by backtracking over images.
    pub fn isomorphism_to(&self, other: &FiniteGroup) -> Option<Vec<usize>> {
        let n = self.order();
        if other.order() != n || self.is_abelian() != other.is_abelian() {
            return None;
        }
        let elem_order = |g: &FiniteGroup, a: usize| {
            let mut x = a;
            let mut k = 1;
            while x != g.identity {
                x = g.mul(x, a);
                k += 1;
            }
            k
        };
        let so: Vec<usize> = (0..n).map(|a| elem_order(self, a)).collect();
        let oo: Vec<usize> = (0..n).map(|a| elem_order(other, a)).collect();
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn go(
            a: usize,
            s: &FiniteGroup,
            o: &FiniteGroup,
            so: &[usize],
            oo: &[usize],
            map: &mut Vec<usize>,
            used: &mut Vec<bool>,
        ) -> bool {
            let n = s.order();
            if a == n {
                return s.is_isomorphism(o, map);
            }
            for x in 0..n {
                if used[x] || so[a] != oo[x] || ((a == s.identity) != (x == o.identity)) {
                    continue;
                }
                let consistent = (0..a).all(|b| {
                    let ab = s.mul(a, b);
                    let ba = s.mul(b, a);
                    (ab >= a || map[ab] == o.mul(x, map[b])) && (ba >= a || map[ba] == o.mul(map[b], x))
                });
                if !consistent {
                    continue;
                }
                map[a] = x;
                used[x] = true;
                if go(a + 1, s, o, so, oo, map, used) {
                    return true;
                }
                used[x] = false;
                map[a] = usize::MAX;
            }
            false
        }
        go(0, self, other, &so, &oo, &mut map, &mut used).then_some(map)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupoidalVerdict {
    /// First pair of components whose hom-category is not a groupoid.
    pub failing_hom: Option<(String, String)>,
    /// First arrow of `Π₀X` without an inverse.
    pub failing_arrow: Option<String>,
    pub groupoidal: bool,
}

/// Checks that every `X_{(a,b)}` and `Π₀X` are groupoids.
pub fn check_groupoidal(d: &DoubleCategory) -> Result<GroupoidalVerdict, HomotopyError> {
    require_wg(d, DEFAULT_NMAX)?;
    let part = pi0(&d.x0);
    let k = part.class_count();
    let mut failing_hom = None;
    'outer: for a in 0..k {
        for b in 0..k {
            let (cat, _, _) = hom_category(d, &part.class_of, a, b);
            if !cat.is_groupoid() {
                failing_hom = Some((
                    d.x0.obj_name(part.classes[a][0]).to_string(),
                    d.x0.obj_name(part.classes[b][0]).to_string(),
                ));
                break 'outer;
            }
        }
    }
    let p = pi0_double(d)?;
    let failing_arrow = p.cat.arrows().find(|&a| !p.cat.is_iso(a)).map(|a| p.cat.arr_name(a).to_string());
    let groupoidal = failing_hom.is_none() && failing_arrow.is_none();
    Ok(GroupoidalVerdict { failing_hom, failing_arrow, groupoidal })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomotopyGroups {
    /// The least representative of the basepoint's component.
    pub basepoint: String,
    /// Number of components of `Π₀X`.
    pub pi0: usize,
    /// A representative object for every component of `Π₀X`.
    pub components: Vec<String>,
    /// Automorphisms of the basepoint in `Π₀X`.
    pub pi1: FiniteGroup,
    /// Endo-cells of the horizontal identity at the basepoint.
    pub pi2: FiniteGroup,
}

fn require_groupoidal(d: &DoubleCategory) -> Result<(), HomotopyError> {
    let v = check_groupoidal(d)?;
    if v.groupoidal {
        return Ok(());
    }
    Err(HomotopyError::NotGroupoidal(match (v.failing_hom, v.failing_arrow) {
        (Some((a, b)), _) => format!("hom-category over ({a}, {b}) is not a groupoid"),
        (_, Some(f)) => format!("arrow {f} of the component category is not invertible"),
        _ => unreachable!(),
    }))
}

/// Resolves a basepoint name: an object of `X`, or the name of a component
/// (`[rep]`).
pub fn basepoint(d: &DoubleCategory, name: &str) -> Result<Ob, HomotopyError> {
    d.x0.obj_by_name(name)
        .or_else(|| name.strip_prefix('[').and_then(|n| n.strip_suffix(']')).and_then(|n| d.x0.obj_by_name(n)))
        .ok_or_else(|| HomotopyError::UnknownBasepoint(name.to_string()))
}

pub fn homotopy_groups(d: &DoubleCategory, x: Ob) -> Result<HomotopyGroups, HomotopyError> {
    require_groupoidal(d)?;
    let p = pi0_double(d)?;
    Ok(groups_from(d, &p, x))
}

fn groups_from(d: &DoubleCategory, p: &Pi0Double, x: Ob) -> HomotopyGroups {
    let c = &*p.cat;
    let class = p.object_class[x];
    let rep = (0..d.object_count()).find(|&o| p.object_class[o] == class).unwrap();
    let comps = pi0(c);
    let components = comps
        .classes
        .iter()
        .map(|cl| {
            let obj = cl[0];
            let o = (0..d.object_count()).find(|&o| p.object_class[o] == obj).unwrap();
            d.x0.obj_name(o).to_string()
        })
        .collect();
    let autos: Vec<Ar> = c.hom(class, class).to_vec();
    let pi1 = group_from(&autos, |a| c.arr_name(a).to_string(), |g, f| c.compose(g, f).unwrap(), c.identity(class));
    let id = d.h_id(rep);
    let endos: Vec<Ar> = d.x1.hom(id, id).to_vec();
    let pi2 = group_from(&endos, |a| d.x1.arr_name(a).to_string(), |g, f| d.vcomp(g, f).unwrap(), d.h_id_cell(id));
    HomotopyGroups {
        basepoint: d.x0.obj_name(rep).to_string(),
        pi0: comps.class_count(),
        components,
        pi1,
        pi2,
    }
}

fn group_from(
    elems: &[usize],
    name: impl Fn(usize) -> String,
    mul: impl Fn(usize, usize) -> usize,
    unit: usize,
) -> FiniteGroup {
    let index: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    FiniteGroup {
        elements: elems.iter().map(|&e| name(e)).collect(),
        table: elems.iter().map(|&a| elems.iter().map(|&b| index[&mul(a, b)]).collect()).collect(),
        identity: index[&unit],
    }
}

/// Eckmann–Hilton: on endo-cells of a horizontal identity, horizontal
/// composition agrees with vertical composition, which is commutative.
pub fn check_eckmann_hilton(d: &DoubleCategory, x: Ob) -> bool {
    let id = d.h_id(x);
    let endos = d.x1.hom(id, id);
    endos.iter().all(|&a| {
        endos.iter().all(|&b| {
            let v = d.vcomp(b, a);
            v.is_some() && v == d.vcomp(a, b) && d.hcomp_cells(b, a) == v
        })
    })
}

/// The map `X → cΠ₀X` and what it does to homotopy groups.
#[derive(Debug, Clone)]
pub struct PostnikovMap {
    pub target: Arc<DoubleCategory>,
    pub functor: DoubleFunctor,
    pub report: PostnikovReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PostnikovReport {
    pub pi0_iso: bool,
    /// `(basepoint, induced map is an isomorphism of π₁)`.
    pub pi1_iso: Vec<(String, bool)>,
    pub target_pi2_trivial: bool,
    pub functor_bijective: bool,
    pub passed: bool,
}

/// Builds `cΠ₀X` (the horizontal double category on `Π₀X`) and the quotient
/// map, and checks that it induces isomorphisms on `π₀` and `π₁`.
pub fn postnikov_map(d: Arc<DoubleCategory>) -> Result<PostnikovMap, HomotopyError> {
    require_groupoidal(&d)?;
    let p = pi0_double(&d)?;
    let target = Arc::new(DoubleCategory::horizontal(&p.cat));
    let t = &*target;
    let f0 = FinFunctor::new_unchecked(
        d.x0.clone(),
        t.x0.clone(),
        p.object_class.clone(),
        d.x0.arrows().map(|v| t.x0.identity(p.object_class[d.x0.src(v)])).collect(),
    );
    let f1 = FinFunctor::new_unchecked(
        d.x1.clone(),
        t.x1.clone(),
        p.arrow_class.clone(),
        d.x1.arrows().map(|c| t.h_id_cell(p.arrow_class[d.top(c)])).collect(),
    );
    let functor = DoubleFunctor { dom: d.clone(), cod: target.clone(), f0, f1 };
    check_strict_functor(&functor).map_err(|e| DblError::InternalCategoryAxiomViolation {
        axiom: e.equation,
        detail: e.at,
    })?;
    let pt = pi0_double(t)?;
    // π₀: components of Π₀X against components of Π₀(cΠ₀X)
    let src_comps = pi0(&p.cat);
    let tgt_comps = pi0(&pt.cat);
    let mut comp_map = vec![usize::MAX; src_comps.class_count()];
    let mut pi0_iso = src_comps.class_count() == tgt_comps.class_count();
    for o in d.x0.objects() {
        let a = src_comps.class_of[p.object_class[o]];
        let b = tgt_comps.class_of[pt.object_class[functor.obj(o)]];
        if comp_map[a] != usize::MAX && comp_map[a] != b {
            pi0_iso = false;
        }
        comp_map[a] = b;
    }
    let mut hit = comp_map.clone();
    hit.sort_unstable();
    hit.dedup();
    pi0_iso &= hit.len() == comp_map.len();
    // π₁ at one basepoint per component
    let mut pi1_iso = Vec::new();
    let mut target_pi2_trivial = true;
    for cl in &src_comps.classes {
        let x = (0..d.object_count()).find(|&o| p.object_class[o] == cl[0]).unwrap();
        let gx = groups_from(&d, &p, x);
        let fx = functor.obj(x);
        let gy = groups_from(t, &pt, fx);
        target_pi2_trivial &= gy.pi2.order() == 1;
        // image of each automorphism class, through a representative horizontal
        let cx = p.object_class[x];
        let autos_x = p.cat.hom(cx, cx).to_vec();
        let cy = pt.object_class[fx];
        let autos_y = pt.cat.hom(cy, cy).to_vec();
        let map: Vec<usize> = autos_x
            .iter()
            .map(|&a| {
                let h = (0..d.horizontal_count()).find(|&h| p.arrow_class[h] == a).unwrap();
                let image = pt.arrow_class[functor.horiz(h)];
                autos_y.iter().position(|&b| b == image).unwrap_or(usize::MAX)
            })
            .collect();
        pi1_iso.push((gx.basepoint.clone(), gx.pi1.is_isomorphism(&gy.pi1, &map)));
    }
    let functor_bijective = functor.is_bijective();
    let passed = pi0_iso && pi1_iso.iter().all(|(_, ok)| *ok);
    Ok(PostnikovMap {
        target,
        functor,
        report: PostnikovReport { pi0_iso, pi1_iso, target_pi2_trivial, functor_bijective, passed },
    })
}
