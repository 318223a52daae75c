//! Double categories as internal categories in finite categories.
//!
//! A [`DoubleCategory`] is the tuple `(X0, X1, d0, d1, s, m)`: `X0` has the
//! objects and vertical arrows, `X1` has the horizontal arrows as objects and
//! the double cells as arrows, so composition in `X1` is vertical pasting.
//! Horizontal composition is stored as two tables keyed `(g, f)` meaning
//! "`f` first, then `g`", the same convention as composition in a category.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fincat::{
    fiber_power, is_equivalence, is_equivalent_to_discrete, pi0, pullback, Ar, CategoryBuilder, CategoryPresentation,
    DiscreteComparison, EquivalenceVerdict, FinCatError, FinCategory, FinFunctor, FunctorError, Ob,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DblError {
    #[error(transparent)]
    Category(#[from] FinCatError),
    #[error(transparent)]
    Functor(#[from] FunctorError),
    #[error("unknown identifier `{0}` in the structure maps")]
    Unknown(String),
    #[error("internal category axiom `{axiom}` fails: {detail}")]
    InternalCategoryAxiomViolation { axiom: String, detail: String },
    #[error("interchange fails for α₁ = {a1}, α₂ = {a2}, β₁ = {b1}, β₂ = {b2}")]
    InterchangeViolation { a1: String, a2: String, b1: String, b2: String },
    #[error("not weakly globular: {0}")]
    NotWeaklyGlobular(String),
}

fn axiom(axiom: &str, detail: impl Into<String>) -> DblError {
    DblError::InternalCategoryAxiomViolation { axiom: axiom.to_string(), detail: detail.into() }
}

/// Serialized functor: name maps on objects and arrows.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FunctorTable {
    pub objects: BTreeMap<String, String>,
    pub arrows: BTreeMap<String, String>,
}

/// Serialized horizontal composition, entries `[g, f, g∘f]`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CompositionTable {
    pub objects: Vec<[String; 3]>,
    pub arrows: Vec<[String; 3]>,
}

/// Serialized double category.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoublePresentation {
    #[serde(rename = "X0")]
    pub x0: CategoryPresentation,
    #[serde(rename = "X1")]
    pub x1: CategoryPresentation,
    pub d0: FunctorTable,
    pub d1: FunctorTable,
    pub s: FunctorTable,
    pub m: CompositionTable,
}

/// A validated double category.
#[derive(Debug, Clone)]
pub struct DoubleCategory {
    pub x0: Arc<FinCategory>,
    pub x1: Arc<FinCategory>,
    pub d0: FinFunctor,
    pub d1: FinFunctor,
    pub s: FinFunctor,
    m_h: HashMap<(Ob, Ob), Ob>,
    m_c: HashMap<(Ar, Ar), Ar>,
    cells_by_left: HashMap<Ar, Vec<Ar>>,
    horizontals_by_src: Vec<Vec<Ob>>,
}

impl PartialEq for DoubleCategory {
    fn eq(&self, other: &Self) -> bool {
        self.x0 == other.x0
            && self.x1 == other.x1
            && self.d0.same_maps(&other.d0)
            && self.d1.same_maps(&other.d1)
            && self.s.same_maps(&other.s)
            && self.m_h == other.m_h
            && self.m_c == other.m_c
    }
}

impl DoubleCategory {
    /// Assembles and validates a double category from its structure maps.
    pub fn new(
        x0: Arc<FinCategory>,
        x1: Arc<FinCategory>,
        d0: FinFunctor,
        d1: FinFunctor,
        s: FinFunctor,
        m_h: HashMap<(Ob, Ob), Ob>,
        m_c: HashMap<(Ar, Ar), Ar>,
    ) -> Result<Self, DblError> {
        let d = Self::assemble(x0, x1, d0, d1, s, m_h, m_c);
        d.validate()?;
        Ok(d)
    }

    /// Assembles without validation. Used by constructions that validate once
    /// at the end or are correct by construction and too large to re-check.
    pub fn assemble(
        x0: Arc<FinCategory>,
        x1: Arc<FinCategory>,
        d0: FinFunctor,
        d1: FinFunctor,
        s: FinFunctor,
        m_h: HashMap<(Ob, Ob), Ob>,
        m_c: HashMap<(Ar, Ar), Ar>,
    ) -> Self {
        let mut cells_by_left: HashMap<Ar, Vec<Ar>> = HashMap::new();
        for c in x1.arrows() {
            cells_by_left.entry(d0.arr[c]).or_default().push(c);
        }
        let mut horizontals_by_src = vec![Vec::new(); x0.obj_count()];
        for h in x1.objects() {
            horizontals_by_src[d0.obj[h]].push(h);
        }
        DoubleCategory { x0, x1, d0, d1, s, m_h, m_c, cells_by_left, horizontals_by_src }
    }

    pub fn from_presentation(p: &DoublePresentation) -> Result<Self, DblError> {
        let x0 = Arc::new(FinCategory::from_presentation(&p.x0)?);
        let x1 = Arc::new(FinCategory::from_presentation(&p.x1)?);
        let d0 = FinFunctor::from_names(x1.clone(), x0.clone(), &p.d0.objects, &p.d0.arrows)?;
        let d1 = FinFunctor::from_names(x1.clone(), x0.clone(), &p.d1.objects, &p.d1.arrows)?;
        let s = FinFunctor::from_names(x0.clone(), x1.clone(), &p.s.objects, &p.s.arrows)?;
        let look_h = |n: &String| x1.obj_by_name(n).ok_or_else(|| DblError::Unknown(n.clone()));
        let look_c = |n: &String| x1.arr_by_name(n).ok_or_else(|| DblError::Unknown(n.clone()));
        let mut m_h = HashMap::new();
        for [g, f, gf] in &p.m.objects {
            m_h.insert((look_h(g)?, look_h(f)?), look_h(gf)?);
        }
        let mut m_c = HashMap::new();
        for [b, a, ba] in &p.m.arrows {
            m_c.insert((look_c(b)?, look_c(a)?), look_c(ba)?);
        }
        Self::new(x0, x1, d0, d1, s, m_h, m_c)
    }

    pub fn to_presentation(&self) -> DoublePresentation {
        let table = |f: &FinFunctor| {
            let (objects, arrows) = f.to_names();
            FunctorTable { objects, arrows }
        };
        let mut mo: Vec<_> = self.m_h.iter().map(|(&(g, f), &h)| (g, f, h)).collect();
        mo.sort_unstable();
        let mut ma: Vec<_> = self.m_c.iter().map(|(&(g, f), &h)| (g, f, h)).collect();
        ma.sort_unstable();
        DoublePresentation {
            x0: self.x0.to_presentation(),
            x1: self.x1.to_presentation(),
            d0: table(&self.d0),
            d1: table(&self.d1),
            s: table(&self.s),
            m: CompositionTable {
                objects: mo.into_iter().map(|(g, f, h)| [g, f, h].map(|x| self.x1.obj_name(x).to_string())).collect(),
                arrows: ma.into_iter().map(|(g, f, h)| [g, f, h].map(|x| self.x1.arr_name(x).to_string())).collect(),
            },
        }
    }

    // ---- accessors -------------------------------------------------------

    pub fn object_count(&self) -> usize {
        self.x0.obj_count()
    }

    pub fn horizontal_count(&self) -> usize {
        self.x1.obj_count()
    }

    pub fn vertical_count(&self) -> usize {
        self.x0.arr_count()
    }

    pub fn cell_count(&self) -> usize {
        self.x1.arr_count()
    }

    pub fn h_src(&self, h: Ob) -> Ob {
        self.d0.obj[h]
    }

    pub fn h_tgt(&self, h: Ob) -> Ob {
        self.d1.obj[h]
    }

    pub fn top(&self, c: Ar) -> Ob {
        self.x1.src(c)
    }

    pub fn bottom(&self, c: Ar) -> Ob {
        self.x1.tgt(c)
    }

    pub fn left(&self, c: Ar) -> Ar {
        self.d0.arr[c]
    }

    pub fn right(&self, c: Ar) -> Ar {
        self.d1.arr[c]
    }

    /// Horizontal identity `Id_A`.
    pub fn h_id(&self, a: Ob) -> Ob {
        self.s.obj[a]
    }

    /// Horizontal identity cell `id_v` on a vertical arrow.
    pub fn v_id_cell(&self, v: Ar) -> Ar {
        self.s.arr[v]
    }

    /// Vertical identity cell `1_h` on a horizontal arrow.
    pub fn h_id_cell(&self, h: Ob) -> Ar {
        self.x1.identity(h)
    }

    /// The doubly degenerate cell on an object.
    pub fn iota(&self, a: Ob) -> Ar {
        self.s.arr[self.x0.identity(a)]
    }

    /// `g ∘ f` on horizontal arrows.
    pub fn hcomp(&self, g: Ob, f: Ob) -> Option<Ob> {
        self.m_h.get(&(g, f)).copied()
    }

    /// Horizontal composite of cells, `a` on the left and `b` on the right.
    pub fn hcomp_cells(&self, b: Ar, a: Ar) -> Option<Ar> {
        self.m_c.get(&(b, a)).copied()
    }

    /// Vertical composite, `a` on top of `b`.
    pub fn vcomp(&self, b: Ar, a: Ar) -> Option<Ar> {
        self.x1.compose(b, a)
    }

    /// Horizontal composite of a path given in order of traversal.
    pub fn hcomp_path(&self, path: &[Ob]) -> Option<Ob> {
        let (&first, rest) = path.split_first()?;
        rest.iter().try_fold(first, |acc, &g| self.hcomp(g, acc))
    }

    /// Horizontal composite of a row of cells given left to right.
    pub fn hcomp_cell_row(&self, row: &[Ar]) -> Option<Ar> {
        let (&first, rest) = row.split_first()?;
        rest.iter().try_fold(first, |acc, &b| self.hcomp_cells(b, acc))
    }

    /// Vertical composite of a column of cells given top to bottom.
    pub fn vcomp_column(&self, column: &[Ar]) -> Option<Ar> {
        self.x1.compose_path(column)
    }

    pub fn horizontals_from(&self, a: Ob) -> &[Ob] {
        &self.horizontals_by_src[a]
    }

    pub fn cells_with_left(&self, v: Ar) -> &[Ar] {
        self.cells_by_left.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Cells with the given four sides.
    pub fn cells_on_frame(&self, top: Ob, bottom: Ob, left: Ar, right: Ar) -> impl Iterator<Item = Ar> + '_ {
        self.x1
            .hom(top, bottom)
            .iter()
            .copied()
            .filter(move |&c| self.left(c) == left && self.right(c) == right)
    }

    pub fn is_vertically_invertible(&self, c: Ar) -> bool {
        self.x1.is_iso(c)
    }

    pub fn vertical_inverse(&self, c: Ar) -> Option<Ar> {
        self.x1.inverse(c)
    }

    pub fn horizontal_composition_entries(&self) -> (usize, usize) {
        (self.m_h.len(), self.m_c.len())
    }

    /// Horizontal composition as a functor `X1 ×_{X0} X1 → X1`; the pullback
    /// pairs are `(f, g)` with `f` first.
    pub fn m_functor(&self) -> (crate::fincat::Pullback, FinFunctor) {
        let pb = pullback(&self.d1, &self.d0);
        let obj = pb.left.obj.iter().zip(&pb.right.obj).map(|(&f, &g)| self.m_h[&(g, f)]).collect();
        let arr = pb.left.arr.iter().zip(&pb.right.arr).map(|(&a, &b)| self.m_c[&(b, a)]).collect();
        let m = FinFunctor::new_unchecked(pb.cat.clone(), self.x1.clone(), obj, arr);
        (pb, m)
    }

    // ---- validation ------------------------------------------------------

    fn validate(&self) -> Result<(), DblError> {
        let (x0, x1) = (&*self.x0, &*self.x1);
        for f in [&self.d0, &self.d1] {
            if f.dom != self.x1 || f.cod != self.x0 {
                return Err(axiom("d0/d1 typing", "source and target maps must go X1 → X0"));
            }
            f.check()?;
        }
        if self.s.dom != self.x0 || self.s.cod != self.x1 {
            return Err(axiom("s typing", "unit map must go X0 → X1"));
        }
        self.s.check()?;
        for a in x0.objects() {
            if self.d0.obj[self.s.obj[a]] != a || self.d1.obj[self.s.obj[a]] != a {
                return Err(axiom("d∘s = id", format!("object {}", x0.obj_name(a))));
            }
        }
        for v in x0.arrows() {
            if self.d0.arr[self.s.arr[v]] != v || self.d1.arr[self.s.arr[v]] != v {
                return Err(axiom("d∘s = id", format!("vertical {}", x0.arr_name(v))));
            }
        }
        for a in x0.objects() {
            if self.iota(a) != self.h_id_cell(self.h_id(a)) {
                return Err(axiom("id_{1_A} = 1_{Id_A}", format!("object {}", x0.obj_name(a))));
            }
        }
        // domain of m on horizontals
        let mut expected = 0;
        for f in x1.objects() {
            for &g in self.horizontals_from(self.h_tgt(f)) {
                expected += 1;
                let gf = self.hcomp(g, f).ok_or_else(|| {
                    axiom("m total", format!("no composite {} ∘ {}", x1.obj_name(g), x1.obj_name(f)))
                })?;
                if self.h_src(gf) != self.h_src(f) || self.h_tgt(gf) != self.h_tgt(g) {
                    return Err(axiom(
                        "d0∘m = d0∘π₂, d1∘m = d1∘π₁",
                        format!("{} ∘ {} = {}", x1.obj_name(g), x1.obj_name(f), x1.obj_name(gf)),
                    ));
                }
            }
        }
        if expected != self.m_h.len() {
            return Err(axiom("m total", "horizontal composition defined on non-composable pairs"));
        }
        let mut expected = 0;
        for a in x1.arrows() {
            for &b in self.cells_with_left(self.right(a)) {
                expected += 1;
                let ba = self.hcomp_cells(b, a).ok_or_else(|| {
                    axiom("m total", format!("no composite of cells {} ∘ {}", x1.arr_name(b), x1.arr_name(a)))
                })?;
                let ok = self.left(ba) == self.left(a)
                    && self.right(ba) == self.right(b)
                    && Some(self.top(ba)) == self.hcomp(self.top(b), self.top(a))
                    && Some(self.bottom(ba)) == self.hcomp(self.bottom(b), self.bottom(a));
                if !ok {
                    return Err(axiom(
                        "m boundaries",
                        format!("{} ∘ {} = {}", x1.arr_name(b), x1.arr_name(a), x1.arr_name(ba)),
                    ));
                }
            }
        }
        if expected != self.m_c.len() {
            return Err(axiom("m total", "cell composition defined on non-composable pairs"));
        }
        // units
        for f in x1.objects() {
            if self.hcomp(self.h_id(self.h_tgt(f)), f) != Some(f) || self.hcomp(f, self.h_id(self.h_src(f))) != Some(f) {
                return Err(axiom("m unital", format!("horizontal {}", x1.obj_name(f))));
            }
        }
        // With at most one cell per (top, bottom) pair the remaining cell
        // equations compare two cells with equal boundaries.
        let posetal_cells = x1.is_posetal();
        for a in x1.arrows().filter(|_| !posetal_cells) {
            let l = self.v_id_cell(self.left(a));
            let r = self.v_id_cell(self.right(a));
            if self.hcomp_cells(r, a) != Some(a) || self.hcomp_cells(a, l) != Some(a) {
                return Err(axiom("m unital", format!("cell {}", x1.arr_name(a))));
            }
        }
        // associativity
        for f in x1.objects() {
            for &g in self.horizontals_from(self.h_tgt(f)) {
                for &h in self.horizontals_from(self.h_tgt(g)) {
                    let l = self.hcomp(h, self.hcomp(g, f).unwrap());
                    let r = self.hcomp(self.hcomp(h, g).unwrap(), f);
                    if l != r {
                        return Err(axiom(
                            "m associative",
                            format!("({}, {}, {})", x1.obj_name(h), x1.obj_name(g), x1.obj_name(f)),
                        ));
                    }
                }
            }
        }
        for a in x1.arrows().filter(|_| !posetal_cells) {
            for &b in self.cells_with_left(self.right(a)) {
                let ba = self.m_c[&(b, a)];
                for &c in self.cells_with_left(self.right(b)) {
                    if self.hcomp_cells(c, ba) != self.hcomp_cells(self.m_c[&(c, b)], a) {
                        return Err(axiom(
                            "m associative",
                            format!("cells ({}, {}, {})", x1.arr_name(c), x1.arr_name(b), x1.arr_name(a)),
                        ));
                    }
                }
            }
        }
        // functoriality of m: identities and middle-four interchange
        if posetal_cells {
            return Ok(());
        }
        for (&(g, f), &gf) in &self.m_h {
            if self.hcomp_cells(self.h_id_cell(g), self.h_id_cell(f)) != Some(self.h_id_cell(gf)) {
                return Err(axiom("m preserves identities", format!("1_{} ∘ 1_{}", x1.obj_name(g), x1.obj_name(f))));
            }
        }
        for (&(a2, a1), &a21) in &self.m_c {
            for &b1 in x1.out_arrows(self.bottom(a1)) {
                for &b2 in x1.out_arrows(self.bottom(a2)) {
                    if self.left(b2) != self.right(b1) {
                        continue;
                    }
                    let lhs = self.hcomp_cells(self.vcomp(b2, a2).unwrap(), self.vcomp(b1, a1).unwrap());
                    let rhs = self.vcomp(self.m_c[&(b2, b1)], a21);
                    if lhs.is_none() || lhs != rhs {
                        return Err(DblError::InterchangeViolation {
                            a1: x1.arr_name(a1).to_string(),
                            a2: x1.arr_name(a2).to_string(),
                            b1: x1.arr_name(b1).to_string(),
                            b2: x1.arr_name(b2).to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    // ---- standard constructions -----------------------------------------

    /// `H(C)`: `C` as horizontal arrows, identity verticals and identity cells.
    pub fn horizontal(c: &FinCategory) -> Self {
        let x0 = Arc::new(FinCategory::discrete(c.objects().map(|o| c.obj_name(o).to_string())));
        let x1 = Arc::new(FinCategory::discrete(c.arrows().map(|a| c.arr_name(a).to_string())));
        let d0 = FinFunctor::new_unchecked(
            x1.clone(),
            x0.clone(),
            c.arrows().map(|a| c.src(a)).collect(),
            c.arrows().map(|a| c.src(a)).collect(),
        );
        let d1 = FinFunctor::new_unchecked(
            x1.clone(),
            x0.clone(),
            c.arrows().map(|a| c.tgt(a)).collect(),
            c.arrows().map(|a| c.tgt(a)).collect(),
        );
        let s = FinFunctor::new_unchecked(
            x0.clone(),
            x1.clone(),
            c.objects().map(|o| c.identity(o)).collect(),
            c.objects().map(|o| c.identity(o)).collect(),
        );
        let mut m_h = HashMap::new();
        for f in c.arrows() {
            for &g in c.out_arrows(c.tgt(f)) {
                m_h.insert((g, f), c.compose(g, f).unwrap());
            }
        }
        let m_c = m_h.clone();
        Self::new(x0, x1, d0, d1, s, m_h, m_c).expect("H(C) is a double category")
    }

    /// `V(C)`: `C` as vertical arrows, only identity horizontals.
    pub fn vertical(c: &FinCategory) -> Self {
        let x0 = Arc::new(c.clone());
        let mut b = CategoryBuilder::new();
        for o in c.objects() {
            b.add_object(format!("Id_{}", c.obj_name(o))).expect("distinct");
        }
        for a in c.arrows() {
            b.add_arrow(format!("id_{}", c.arr_name(a)), c.src(a), c.tgt(a)).expect("distinct");
        }
        for o in c.objects() {
            b.set_identity(o, c.identity(o));
        }
        for f in c.arrows() {
            for &g in c.out_arrows(c.tgt(f)) {
                b.set_composite(g, f, c.compose(g, f).unwrap()).expect("copy of C");
            }
        }
        let x1 = Arc::new(b.finish().expect("copy of C"));
        let ids: Vec<Ob> = c.objects().collect();
        let arrs: Vec<Ar> = c.arrows().collect();
        let d0 = FinFunctor::new_unchecked(x1.clone(), x0.clone(), ids.clone(), arrs.clone());
        let d1 = d0.clone();
        let s = FinFunctor::new_unchecked(x0.clone(), x1.clone(), ids.clone(), arrs.clone());
        let m_h = ids.iter().map(|&o| ((o, o), o)).collect();
        let m_c = arrs.iter().map(|&a| ((a, a), a)).collect();
        Self::new(x0, x1, d0, d1, s, m_h, m_c).expect("V(C) is a double category")
    }

    /// Disjoint union; identifiers are prefixed with the summand index.
    pub fn disjoint_union(parts: &[&DoubleCategory]) -> Result<Self, DblError> {
        let mut b0 = CategoryBuilder::new();
        let mut b1 = CategoryBuilder::new();
        let (mut o_off, mut v_off, mut h_off, mut c_off) = (vec![], vec![], vec![], vec![]);
        for (i, d) in parts.iter().enumerate() {
            o_off.push(b0.object_count());
            v_off.push(b0.arrow_count());
            h_off.push(b1.object_count());
            c_off.push(b1.arrow_count());
            for o in d.x0.objects() {
                b0.add_object(format!("{i}.{}", d.x0.obj_name(o)))?;
            }
            for a in d.x0.arrows() {
                b0.add_arrow(format!("{i}.{}", d.x0.arr_name(a)), o_off[i] + d.x0.src(a), o_off[i] + d.x0.tgt(a))?;
            }
            for o in d.x1.objects() {
                b1.add_object(format!("{i}.{}", d.x1.obj_name(o)))?;
            }
            for a in d.x1.arrows() {
                b1.add_arrow(format!("{i}.{}", d.x1.arr_name(a)), h_off[i] + d.x1.src(a), h_off[i] + d.x1.tgt(a))?;
            }
        }
        let (mut d0o, mut d0a, mut d1o, mut d1a, mut so, mut sa) = (vec![], vec![], vec![], vec![], vec![], vec![]);
        let (mut m_h, mut m_c) = (HashMap::new(), HashMap::new());
        for (i, d) in parts.iter().enumerate() {
            for o in d.x0.objects() {
                b0.set_identity(o_off[i] + o, v_off[i] + d.x0.identity(o));
                so.push(h_off[i] + d.s.obj[o]);
            }
            for a in d.x0.arrows() {
                sa.push(c_off[i] + d.s.arr[a]);
                for &g in d.x0.out_arrows(d.x0.tgt(a)) {
                    b0.set_composite(v_off[i] + g, v_off[i] + a, v_off[i] + d.x0.compose(g, a).unwrap())?;
                }
            }
            for h in d.x1.objects() {
                b1.set_identity(h_off[i] + h, c_off[i] + d.x1.identity(h));
                d0o.push(o_off[i] + d.d0.obj[h]);
                d1o.push(o_off[i] + d.d1.obj[h]);
            }
            for c in d.x1.arrows() {
                d0a.push(v_off[i] + d.d0.arr[c]);
                d1a.push(v_off[i] + d.d1.arr[c]);
                for &g in d.x1.out_arrows(d.x1.tgt(c)) {
                    b1.set_composite(c_off[i] + g, c_off[i] + c, c_off[i] + d.x1.compose(g, c).unwrap())?;
                }
            }
            for (&(g, f), &h) in &d.m_h {
                m_h.insert((h_off[i] + g, h_off[i] + f), h_off[i] + h);
            }
            for (&(g, f), &h) in &d.m_c {
                m_c.insert((c_off[i] + g, c_off[i] + f), c_off[i] + h);
            }
        }
        let x0 = Arc::new(b0.finish()?);
        let x1 = Arc::new(b1.finish()?);
        let d0 = FinFunctor::new_unchecked(x1.clone(), x0.clone(), d0o, d0a);
        let d1 = FinFunctor::new_unchecked(x1.clone(), x0.clone(), d1o, d1a);
        let s = FinFunctor::new_unchecked(x0.clone(), x1.clone(), so, sa);
        Self::new(x0, x1, d0, d1, s, m_h, m_c)
    }

    /// The horizontal category: objects and horizontal arrows under `m`.
    pub fn horizontal_category(&self) -> FinCategory {
        let mut b = CategoryBuilder::new();
        for o in self.x0.objects() {
            b.add_object(self.x0.obj_name(o)).expect("distinct");
        }
        for h in self.x1.objects() {
            b.add_arrow(self.x1.obj_name(h), self.h_src(h), self.h_tgt(h)).expect("distinct");
        }
        for o in self.x0.objects() {
            b.set_identity(o, self.h_id(o));
        }
        for (&(g, f), &h) in &self.m_h {
            b.set_composite(g, f, h).expect("m respects boundaries");
        }
        b.finish_total().expect("horizontal category of a double category")
    }
}

// ---- nerve and Segal maps ---------------------------------------------------

/// Level `k` of the horizontal nerve: `X0`, `X1`, then iterated pullbacks
/// `(⋯((X1 ×_{X0} X1) ×_{X0} X1) ⋯)`.
pub fn horizontal_nerve(d: &DoubleCategory, k: usize) -> Arc<FinCategory> {
    match k {
        0 => d.x0.clone(),
        1 => d.x1.clone(),
        _ => {
            let mut level = d.x1.clone();
            // map from the current level to X0 picking the last vertex
            let mut last_tgt = d.d1.clone();
            for _ in 2..=k {
                let pb = pullback(&last_tgt, &d.d0);
                last_tgt = d.d1.after(&pb.right).expect("composable");
                level = pb.cat.clone();
            }
            level
        }
    }
}

/// The category `X1 ×_{X0} ⋯ ×_{X0} X1` of composable `n`-paths as tuples.
pub fn composable_paths(d: &DoubleCategory, n: usize) -> crate::fincat::FiberPower {
    fiber_power(&d.d0, &d.d1, n)
}

/// Report on the conditions defining weak globularity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakGlobularityReport {
    pub x0_verdict: EquivalenceVerdict,
    /// `(n, verdict)` for the functor `X1 ×_{X0}ⁿ → X1 ×_{X0^d}ⁿ`.
    pub segal: Vec<(usize, EquivalenceVerdict)>,
    pub isofibration_d0: bool,
    pub isofibration_d1: bool,
    pub passed: bool,
}

/// Precomputed data for deciding the Segal-type comparisons without
/// materializing the (large) fibre products over `X0^d`.
struct SegalData<'a> {
    d: &'a DoubleCategory,
    disc: DiscreteComparison,
    /// Horizontals `h'` with an invertible cell `h' ⇒ h`, indexed by `h`.
    iso_class: Vec<Vec<Ob>>,
}

impl<'a> SegalData<'a> {
    fn new(d: &'a DoubleCategory) -> Self {
        let disc = is_equivalent_to_discrete(&d.x0);
        let mut iso_class = vec![Vec::new(); d.horizontal_count()];
        for c in d.x1.arrows() {
            if d.is_vertically_invertible(c) {
                iso_class[d.bottom(c)].push(d.top(c));
            }
        }
        for v in &mut iso_class {
            v.sort_unstable();
            v.dedup();
        }
        SegalData { d, disc, iso_class }
    }

    fn gamma(&self, a: Ob) -> usize {
        self.disc.gamma[a]
    }

    fn path_name(&self, hs: &[Ob]) -> String {
        let names: Vec<&str> = hs.iter().map(|&h| self.d.x1.obj_name(h)).collect();
        format!("({})", names.join(","))
    }

    fn verdict(&self, n: usize) -> EquivalenceVerdict {
        let d = self.d;
        let x1 = &*d.x1;
        // fully faithful: for composable paths h, k with every hom(hᵢ, kᵢ)
        // inhabited, every tuple of cells must already agree on the verticals.
        let boundary = |h: Ob, k: Ob| -> (Vec<Ar>, Vec<Ar>) {
            let mut l: Vec<Ar> = x1.hom(h, k).iter().map(|&c| d.left(c)).collect();
            let mut r: Vec<Ar> = x1.hom(h, k).iter().map(|&c| d.right(c)).collect();
            l.sort_unstable();
            l.dedup();
            r.sort_unstable();
            r.dedup();
            (l, r)
        };
        let mut ff_witness = None;
        let mut stack: Vec<(Vec<Ob>, Vec<Ob>)> = Vec::new();
        for h in x1.objects() {
            for k in x1.objects() {
                if !x1.hom(h, k).is_empty() {
                    stack.push((vec![h], vec![k]));
                }
            }
        }
        'search: while let Some((hs, ks)) = stack.pop() {
            if hs.len() == n {
                continue;
            }
            let (h, k) = (*hs.last().unwrap(), *ks.last().unwrap());
            let (_, right_prev) = boundary(h, k);
            for &h2 in d.horizontals_from(d.h_tgt(h)) {
                for &k2 in d.horizontals_from(d.h_tgt(k)) {
                    if x1.hom(h2, k2).is_empty() {
                        continue;
                    }
                    let (left_next, _) = boundary(h2, k2);
                    let mut hs2 = hs.clone();
                    hs2.push(h2);
                    let mut ks2 = ks.clone();
                    ks2.push(k2);
                    if right_prev.len() != 1 || right_prev != left_next {
                        let mut full_h = hs2.clone();
                        let mut full_k = ks2.clone();
                        // extend with identities so that the witness has length n
                        while full_h.len() < n {
                            full_h.push(d.h_id(d.h_tgt(*full_h.last().unwrap())));
                            full_k.push(d.h_id(d.h_tgt(*full_k.last().unwrap())));
                        }
                        ff_witness = Some((self.path_name(&full_h), self.path_name(&full_k)));
                        break 'search;
                    }
                    stack.push((hs2, ks2));
                }
            }
        }
        // essentially surjective: every path composable up to π₀ is isomorphic,
        // factorwise, to a strictly composable one.
        let mut by_src_class: HashMap<usize, Vec<Ob>> = HashMap::new();
        for h in x1.objects() {
            by_src_class.entry(self.gamma(d.h_src(h))).or_default().push(h);
        }
        // The search only depends on the set of strict endpoints reached so
        // far, so failures are memoized per (endpoint set, remaining length).
        let mut memo: HashMap<(Vec<Ob>, usize), Option<Vec<Ob>>> = HashMap::new();
        let mut es_witness = None;
        for h in x1.objects() {
            let mut ends: Vec<Ob> = self.iso_class[h].iter().map(|&k| d.h_tgt(k)).collect();
            ends.sort_unstable();
            ends.dedup();
            let fail = if ends.is_empty() { Some(vec![]) } else { self.es_failure(ends, n - 1, &by_src_class, &mut memo) };
            if let Some(mut suffix) = fail {
                suffix.insert(0, h);
                es_witness = Some(self.path_name(&suffix));
                break;
            }
        }
        EquivalenceVerdict::new(ff_witness, es_witness)
    }
}

impl SegalData<'_> {
    /// A continuation of length at most `remaining` that cannot be realized
    /// from the endpoints `ends`, if any.
    fn es_failure(
        &self,
        ends: Vec<Ob>,
        remaining: usize,
        by_src_class: &HashMap<usize, Vec<Ob>>,
        memo: &mut HashMap<(Vec<Ob>, usize), Option<Vec<Ob>>>,
    ) -> Option<Vec<Ob>> {
        if remaining == 0 {
            return None;
        }
        let key = (ends, remaining);
        if let Some(r) = memo.get(&key) {
            return r.clone();
        }
        let d = self.d;
        let class = self.gamma(key.0[0]);
        let mut result = None;
        for &h in by_src_class.get(&class).map(Vec::as_slice).unwrap_or(&[]) {
            let mut next: Vec<Ob> = self.iso_class[h]
                .iter()
                .filter(|&&k| key.0.binary_search(&d.h_src(k)).is_ok())
                .map(|&k| d.h_tgt(k))
                .collect();
            next.sort_unstable();
            next.dedup();
            let fail = if next.is_empty() {
                Some(vec![])
            } else {
                self.es_failure(next, remaining - 1, by_src_class, memo)
            };
            if let Some(mut suffix) = fail {
                suffix.insert(0, h);
                result = Some(suffix);
                break;
            }
        }
        memo.insert(key, result.clone());
        result
    }
}

/// Whether the source (`use_target = false`) or target map `X1 → X0` lifts
/// every vertical isomorphism ending at a horizontal's endpoint to a
/// vertically invertible cell.
pub fn is_isofibration(d: &DoubleCategory, use_target: bool) -> bool {
    let end = |h: Ob| if use_target { d.h_tgt(h) } else { d.h_src(h) };
    let side = |c: Ar| if use_target { d.right(c) } else { d.left(c) };
    d.x1.objects().all(|f| {
        d.x0.in_arrows(end(f)).iter().filter(|&&y| d.x0.is_iso(y)).all(|&y| {
            d.x1.in_arrows(f).iter().any(|&c| side(c) == y && d.is_vertically_invertible(c))
        })
    })
}

/// Checks the defining conditions of weak globularity for `n = 2..=nmax`.
pub fn check_weak_globularity(d: &DoubleCategory, nmax: usize) -> WeakGlobularityReport {
    let data = SegalData::new(d);
    let x0_verdict = data.disc.verdict.clone();
    let segal: Vec<(usize, EquivalenceVerdict)> = (2..=nmax.max(2)).map(|n| (n, data.verdict(n))).collect();
    let passed = x0_verdict.is_equivalence && segal.iter().all(|(_, v)| v.is_equivalence);
    WeakGlobularityReport {
        x0_verdict,
        segal,
        isofibration_d0: is_isofibration(d, false),
        isofibration_d1: is_isofibration(d, true),
        passed,
    }
}

/// The Segal-type comparison functor built from materialized fibre powers;
/// feasible only for small inputs, used to cross-check [`check_weak_globularity`].
pub fn segal_comparison_materialized(d: &DoubleCategory, n: usize) -> EquivalenceVerdict {
    let disc = is_equivalent_to_discrete(&d.x0);
    let gamma = disc.quotient_functor(d.x0.clone());
    let p = fiber_power(&d.d0, &d.d1, n);
    let q = fiber_power(&gamma.after(&d.d0).unwrap(), &gamma.after(&d.d1).unwrap(), n);
    let obj = p.obj_tuples.iter().map(|t| q.object_of(t).expect("composable paths compose up to π₀")).collect();
    let arr = p.arr_tuples.iter().map(|t| q.arrow_of(t).expect("composable cells compose up to π₀")).collect();
    let f = FinFunctor::new_unchecked(p.cat.clone(), q.cat.clone(), obj, arr);
    is_equivalence(&f)
}

/// The weak globularity report, or an error naming the first failing condition.
pub fn require_wg(d: &DoubleCategory, nmax: usize) -> Result<WeakGlobularityReport, DblError> {
    let report = check_weak_globularity(d, nmax);
    if report.passed {
        Ok(report)
    } else if !report.x0_verdict.is_equivalence {
        let (a, b) = report.x0_verdict.ff_witness.clone().unwrap_or_default();
        Err(DblError::NotWeaklyGlobular(format!("vertical category is not posetal-groupoidal at ({a}, {b})")))
    } else {
        let (n, _) = report.segal.iter().find(|(_, v)| !v.is_equivalence).unwrap();
        Err(DblError::NotWeaklyGlobular(format!("Segal comparison fails at n = {n}")))
    }
}

/// Default bound for the Segal-type conditions.
pub const DEFAULT_NMAX: usize = 3;

// ---- fillers ---------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// A vertically invertible cell `α` with bottom `f` whose side vertical
/// factors through the given one: on the left `x·y₁ = d0 α`, on the right
/// `y·x₂ = d1 α`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filler {
    pub cell: Ar,
    /// `y₁` (left side) or `x₂` (right side).
    pub factor: Ar,
    /// The vertical on the opposite side of the cell.
    pub other_side: Ar,
}

/// Searches a filler for the corner `(vertical, f)`; the vertical ends at the
/// source (`Side::Left`) or target (`Side::Right`) of `f`. The identity cell
/// `1_f` is tried first, then cells in declaration order.
pub fn find_filler(d: &DoubleCategory, side: Side, vertical: Ar, f: Ob) -> Result<Option<Filler>, DblError> {
    require_wg(d, 2)?;
    let corner = match side {
        Side::Left => d.h_src(f),
        Side::Right => d.h_tgt(f),
    };
    if d.x0.tgt(vertical) != corner {
        return Err(axiom("filler corner", "vertical does not end at the horizontal's corner"));
    }
    let mut candidates = vec![d.h_id_cell(f)];
    candidates.extend(d.x1.in_arrows(f).iter().copied().filter(|&c| c != d.h_id_cell(f)));
    for c in candidates {
        if !d.is_vertically_invertible(c) {
            continue;
        }
        let (near, far) = match side {
            Side::Left => (d.left(c), d.right(c)),
            Side::Right => (d.right(c), d.left(c)),
        };
        if let Some(&factor) = d.x0.in_arrows(d.x0.src(vertical)).iter().find(|&&y| d.x0.compose(vertical, y) == Some(near)) {
            return Ok(Some(Filler { cell: c, factor, other_side: far }));
        }
    }
    Ok(None)
}

// ---- discretization ----------------------------------------------------------

/// A simplicial object in finite categories truncated at level `N`.
#[derive(Debug, Clone)]
pub struct TruncatedSimplicialCat {
    pub levels: Vec<Arc<FinCategory>>,
    /// `faces[k][i]`: level `k` → level `k-1` (empty for `k = 0`).
    pub faces: Vec<Vec<FinFunctor>>,
    /// `degeneracies[k][i]`: level `k` → level `k+1` (empty at the top).
    pub degeneracies: Vec<Vec<FinFunctor>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialIdentityCheck {
    pub identity: String,
    pub level: usize,
    pub strict: bool,
    /// The two sides send every object to isomorphic objects.
    pub up_to_iso: bool,
}

#[derive(Debug, Clone)]
pub struct Discretization {
    pub simplicial: TruncatedSimplicialCat,
    pub level0_discrete: bool,
    /// Segal maps `level k → level1 ×_{level0} ⋯` for `k = 2..=N`.
    pub segal: Vec<(usize, EquivalenceVerdict)>,
    pub identities: Vec<SimplicialIdentityCheck>,
}

/// Replaces the vertical category by the discrete category on its components
/// and keeps the horizontal nerve above level 0.
pub fn discretize(d: &DoubleCategory, nmax: usize) -> Result<Discretization, DblError> {
    let report = require_wg(d, nmax)?;
    let nmax = nmax.max(2);
    let disc = is_equivalent_to_discrete(&d.x0);
    let mut levels = vec![disc.discrete.clone(), d.x1.clone()];
    let mut powers = vec![None, None];
    for k in 2..=nmax {
        let p = composable_paths(d, k);
        levels.push(p.cat.clone());
        powers.push(Some(p));
    }
    // tuple view of an object / arrow at level k ≥ 1
    let obj_tuple = |k: usize, o: Ob| -> Vec<Ob> {
        if k == 1 {
            vec![o]
        } else {
            powers[k].as_ref().unwrap().obj_tuples[o].clone()
        }
    };
    let arr_tuple = |k: usize, a: Ar| -> Vec<Ar> {
        if k == 1 {
            vec![a]
        } else {
            powers[k].as_ref().unwrap().arr_tuples[a].clone()
        }
    };
    let obj_index = |k: usize, t: &[Ob]| -> Ob {
        if k == 1 {
            t[0]
        } else {
            powers[k].as_ref().unwrap().object_of(t).expect("composable path")
        }
    };
    let arr_index = |k: usize, t: &[Ar]| -> Ar {
        if k == 1 {
            t[0]
        } else {
            powers[k].as_ref().unwrap().arrow_of(t).expect("composable cells")
        }
    };
    let mut faces: Vec<Vec<FinFunctor>> = vec![Vec::new()];
    // level 1 → level 0: target (i = 0) and source (i = 1), followed by γ
    let g = disc.quotient_functor(d.x0.clone());
    faces.push(vec![g.after(&d.d1).unwrap(), g.after(&d.d0).unwrap()]);
    for k in 2..=nmax {
        let mut fk = Vec::new();
        for i in 0..=k {
            let face_obj = |t: Vec<Ob>| -> Vec<Ob> {
                let mut t = t;
                if i == 0 {
                    t.remove(0);
                } else if i == k {
                    t.pop();
                } else {
                    let c = d.hcomp(t[i], t[i - 1]).unwrap();
                    t.splice(i - 1..=i, [c]);
                }
                t
            };
            let face_arr = |t: Vec<Ar>| -> Vec<Ar> {
                let mut t = t;
                if i == 0 {
                    t.remove(0);
                } else if i == k {
                    t.pop();
                } else {
                    let c = d.hcomp_cells(t[i], t[i - 1]).unwrap();
                    t.splice(i - 1..=i, [c]);
                }
                t
            };
            let obj = levels[k].objects().map(|o| obj_index(k - 1, &face_obj(obj_tuple(k, o)))).collect();
            let arr = levels[k].arrows().map(|a| arr_index(k - 1, &face_arr(arr_tuple(k, a)))).collect();
            fk.push(FinFunctor::new_unchecked(levels[k].clone(), levels[k - 1].clone(), obj, arr));
        }
        faces.push(fk);
    }
    let mut degeneracies: Vec<Vec<FinFunctor>> = Vec::new();
    // level 0 → level 1: σ₀γ′
    let s0_obj: Vec<Ob> = disc.gamma_prime.iter().map(|&a| d.h_id(a)).collect();
    let s0_arr: Vec<Ar> = levels[0].arrows().map(|a| d.h_id_cell(s0_obj[levels[0].src(a)])).collect();
    degeneracies.push(vec![FinFunctor::new_unchecked(levels[0].clone(), levels[1].clone(), s0_obj, s0_arr)]);
    for k in 1..nmax {
        let mut dk = Vec::new();
        for i in 0..=k {
            let obj = levels[k]
                .objects()
                .map(|o| {
                    let mut t = obj_tuple(k, o);
                    let vertex = if i < k { d.h_src(t[i]) } else { d.h_tgt(t[k - 1]) };
                    t.insert(i, d.h_id(vertex));
                    obj_index(k + 1, &t)
                })
                .collect();
            let arr = levels[k]
                .arrows()
                .map(|a| {
                    let mut t = arr_tuple(k, a);
                    let vertex = if i < k { d.left(t[i]) } else { d.right(t[k - 1]) };
                    t.insert(i, d.v_id_cell(vertex));
                    arr_index(k + 1, &t)
                })
                .collect();
            dk.push(FinFunctor::new_unchecked(levels[k].clone(), levels[k + 1].clone(), obj, arr));
        }
        degeneracies.push(dk);
    }
    degeneracies.push(Vec::new());
    let simplicial = TruncatedSimplicialCat { levels, faces, degeneracies };
    let identities = check_simplicial_identities(&simplicial);
    Ok(Discretization { level0_discrete: simplicial.levels[0].is_discrete(), simplicial, segal: report.segal, identities })
}

fn compare(a: &FinFunctor, b: &FinFunctor) -> (bool, bool) {
    let strict = a.same_maps(b);
    let cod = &*a.cod;
    let up_to_iso = strict
        || a.obj
            .iter()
            .zip(&b.obj)
            .all(|(&x, &y)| x == y || cod.hom(x, y).iter().any(|&f| cod.is_iso(f)));
    (strict, up_to_iso)
}

/// Checks all simplicial identities that live inside the truncation.
pub fn check_simplicial_identities(s: &TruncatedSimplicialCat) -> Vec<SimplicialIdentityCheck> {
    let n = s.levels.len() - 1;
    let mut out = Vec::new();
    let mut push = |identity: String, level: usize, a: FinFunctor, b: FinFunctor| {
        let (strict, up_to_iso) = compare(&a, &b);
        out.push(SimplicialIdentityCheck { identity, level, strict, up_to_iso });
    };
    // d_i d_j = d_{j-1} d_i for i < j, on level k
    for k in 2..=n {
        for j in 1..=k {
            for i in 0..j {
                let lhs = s.faces[k - 1][i].after(&s.faces[k][j]).unwrap();
                let rhs = s.faces[k - 1][j - 1].after(&s.faces[k][i]).unwrap();
                push(format!("d{i} d{j} = d{} d{i}", j - 1), k, lhs, rhs);
            }
        }
    }
    // s_i s_j = s_{j+1} s_i for i ≤ j, on level k (needs level k+2)
    for k in 0..n.saturating_sub(1) {
        for j in 0..=k {
            for i in 0..=j {
                let lhs = s.degeneracies[k + 1][i].after(&s.degeneracies[k][j]).unwrap();
                let rhs = s.degeneracies[k + 1][j + 1].after(&s.degeneracies[k][i]).unwrap();
                push(format!("s{i} s{j} = s{} s{i}", j + 1), k, lhs, rhs);
            }
        }
    }
    // mixed identities, on level k (needs level k+1)
    for k in 0..n {
        for j in 0..=k {
            for i in 0..=k + 1 {
                let lhs = s.faces[k + 1][i].after(&s.degeneracies[k][j]).unwrap();
                if i == j || i == j + 1 {
                    let id = FinFunctor::identity(s.levels[k].clone());
                    push(format!("d{i} s{j} = id"), k, lhs, id);
                } else if i < j {
                    let rhs = s.degeneracies[k - 1][j - 1].after(&s.faces[k][i]).unwrap();
                    push(format!("d{i} s{j} = s{} d{i}", j - 1), k, lhs, rhs);
                } else {
                    let rhs = s.degeneracies[k - 1][j].after(&s.faces[k][i - 1]).unwrap();
                    push(format!("d{i} s{j} = s{j} d{}", i - 1), k, lhs, rhs);
                }
            }
        }
    }
    out
}

// ---- Π₀ ------------------------------------------------------------------------

/// The category `Π₀X` of components, with the quotient maps.
#[derive(Debug, Clone)]
pub struct Pi0Double {
    pub cat: Arc<FinCategory>,
    /// Object of `X` ↦ object of `Π₀X`.
    pub object_class: Vec<Ob>,
    /// Horizontal arrow of `X` ↦ arrow of `Π₀X`.
    pub arrow_class: Vec<Ar>,
}

/// Builds `Π₀X`: components of `X0` and of `X1`, with composition induced by
/// `m` on composable representatives (well-definedness is checked).
pub fn pi0_double(d: &DoubleCategory) -> Result<Pi0Double, DblError> {
    require_wg(d, 2)?;
    let objs = pi0(&d.x0);
    let arrs = pi0(&d.x1);
    let mut b = CategoryBuilder::new();
    for class in &objs.classes {
        b.add_object(format!("[{}]", d.x0.obj_name(class[0])))?;
    }
    for class in &arrs.classes {
        let h = class[0];
        b.add_arrow(
            format!("[{}]", d.x1.obj_name(h)),
            objs.class_of[d.h_src(h)],
            objs.class_of[d.h_tgt(h)],
        )?;
    }
    for (k, class) in objs.classes.iter().enumerate() {
        let ids: HashSet<usize> = class.iter().map(|&a| arrs.class_of[d.h_id(a)]).collect();
        if ids.len() != 1 {
            return Err(axiom("Π₀ well defined", format!("identities over [{}] fall in several classes", d.x0.obj_name(class[0]))));
        }
        b.set_identity(k, *ids.iter().next().unwrap());
    }
    let mut seen: HashMap<(Ar, Ar), Ar> = HashMap::new();
    for f in d.x1.objects() {
        for &g in d.horizontals_from(d.h_tgt(f)) {
            let key = (arrs.class_of[g], arrs.class_of[f]);
            let val = arrs.class_of[d.hcomp(g, f).unwrap()];
            if let Some(&prev) = seen.get(&key) {
                if prev != val {
                    return Err(axiom(
                        "Π₀ well defined",
                        format!("[{}] ∘ [{}] depends on representatives", d.x1.obj_name(g), d.x1.obj_name(f)),
                    ));
                }
            } else {
                seen.insert(key, val);
                b.set_composite(key.0, key.1, val)?;
            }
        }
    }
    let cat = Arc::new(b.finish()?);
    Ok(Pi0Double { cat, object_class: objs.class_of, arrow_class: arrs.class_of })
}

// ---- functors and transformations --------------------------------------------

/// A strict double functor, given by its action on `X0` and on `X1`.
#[derive(Debug, Clone)]
pub struct DoubleFunctor {
    pub dom: Arc<DoubleCategory>,
    pub cod: Arc<DoubleCategory>,
    pub f0: FinFunctor,
    pub f1: FinFunctor,
}

/// A violated equation and the data where it fails.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[error("{equation} fails at {at}")]
pub struct CheckFailure {
    pub equation: String,
    pub at: String,
}

fn fail(equation: &str, at: impl Into<String>) -> CheckFailure {
    CheckFailure { equation: equation.to_string(), at: at.into() }
}

impl DoubleFunctor {
    pub fn identity(d: Arc<DoubleCategory>) -> Self {
        DoubleFunctor {
            f0: FinFunctor::identity(d.x0.clone()),
            f1: FinFunctor::identity(d.x1.clone()),
            dom: d.clone(),
            cod: d,
        }
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &DoubleFunctor) -> DoubleFunctor {
        DoubleFunctor {
            dom: first.dom.clone(),
            cod: self.cod.clone(),
            f0: self.f0.after(&first.f0).expect("composable"),
            f1: self.f1.after(&first.f1).expect("composable"),
        }
    }

    pub fn obj(&self, a: Ob) -> Ob {
        self.f0.obj[a]
    }

    pub fn vert(&self, v: Ar) -> Ar {
        self.f0.arr[v]
    }

    pub fn horiz(&self, h: Ob) -> Ob {
        self.f1.obj[h]
    }

    pub fn cell(&self, c: Ar) -> Ar {
        self.f1.arr[c]
    }

    /// Bijective on objects, verticals, horizontals and cells.
    pub fn is_bijective(&self) -> bool {
        let bij = |v: &[usize], n: usize| {
            let mut seen = vec![false; n];
            v.len() == n && v.iter().all(|&x| !std::mem::replace(&mut seen[x], true))
        };
        bij(&self.f0.obj, self.cod.object_count())
            && bij(&self.f0.arr, self.cod.vertical_count())
            && bij(&self.f1.obj, self.cod.horizontal_count())
            && bij(&self.f1.arr, self.cod.cell_count())
    }
}

/// Checks that the maps form a strict double functor.
pub fn check_strict_functor(f: &DoubleFunctor) -> Result<(), CheckFailure> {
    let (x, y) = (&*f.dom, &*f.cod);
    f.f0.check().map_err(|e| fail("functor on vertical categories", e.to_string()))?;
    f.f1.check().map_err(|e| fail("functor on cell categories", e.to_string()))?;
    for h in x.x1.objects() {
        if y.h_src(f.horiz(h)) != f.obj(x.h_src(h)) || y.h_tgt(f.horiz(h)) != f.obj(x.h_tgt(h)) {
            return Err(fail("d∘F1 = F0∘d", x.x1.obj_name(h)));
        }
    }
    for c in x.x1.arrows() {
        if y.left(f.cell(c)) != f.vert(x.left(c)) || y.right(f.cell(c)) != f.vert(x.right(c)) {
            return Err(fail("d∘F1 = F0∘d", x.x1.arr_name(c)));
        }
    }
    for a in x.x0.objects() {
        if f.horiz(x.h_id(a)) != y.h_id(f.obj(a)) {
            return Err(fail("F1∘s = s∘F0", x.x0.obj_name(a)));
        }
    }
    for v in x.x0.arrows() {
        if f.cell(x.v_id_cell(v)) != y.v_id_cell(f.vert(v)) {
            return Err(fail("F1∘s = s∘F0", x.x0.arr_name(v)));
        }
    }
    for (&(g, h), &gh) in &x.m_h {
        if y.hcomp(f.horiz(g), f.horiz(h)) != Some(f.horiz(gh)) {
            return Err(fail("F1∘m = m∘(F1×F1)", format!("({}, {})", x.x1.obj_name(g), x.x1.obj_name(h))));
        }
    }
    for (&(b, a), &ba) in &x.m_c {
        if y.hcomp_cells(f.cell(b), f.cell(a)) != Some(f.cell(ba)) {
            return Err(fail("F1∘m = m∘(F1×F1)", format!("({}, {})", x.x1.arr_name(b), x.x1.arr_name(a))));
        }
    }
    Ok(())
}

/// A horizontal transformation `F ⇒ G`: horizontal components on objects and
/// cells on vertical arrows.
#[derive(Debug, Clone)]
pub struct HorizontalTransformation {
    pub source: DoubleFunctor,
    pub target: DoubleFunctor,
    /// Object `A` ↦ horizontal `F A → G A`.
    pub components: Vec<Ob>,
    /// Vertical `v` ↦ cell with top `a_{src v}`, bottom `a_{tgt v}`, sides `F v`, `G v`.
    pub cells: Vec<Ar>,
}

impl HorizontalTransformation {
    /// The identity transformation on a functor.
    pub fn identity(f: DoubleFunctor) -> Self {
        let y = f.cod.clone();
        let components = f.dom.x0.objects().map(|a| y.h_id(f.obj(a))).collect();
        let cells = f.dom.x0.arrows().map(|v| y.v_id_cell(f.vert(v))).collect();
        HorizontalTransformation { source: f.clone(), target: f, components, cells }
    }

    /// Every component is invertible in the horizontal category of the target
    /// and every cell component is vertically invertible.
    pub fn is_invertible(&self) -> bool {
        let y = &*self.source.cod;
        self.components.iter().all(|&h| horizontal_inverse(y, h).is_some())
            && self.cells.iter().all(|&c| y.is_vertically_invertible(c))
    }
}

/// Two-sided inverse of a horizontal arrow under `m`, if any.
pub fn horizontal_inverse(d: &DoubleCategory, h: Ob) -> Option<Ob> {
    d.horizontals_from(d.h_tgt(h)).iter().copied().find(|&g| {
        d.h_tgt(g) == d.h_src(h)
            && d.hcomp(g, h) == Some(d.h_id(d.h_src(h)))
            && d.hcomp(h, g) == Some(d.h_id(d.h_tgt(h)))
    })
}

pub fn check_horizontal_transformation(t: &HorizontalTransformation) -> Result<(), CheckFailure> {
    let (f, g) = (&t.source, &t.target);
    let (x, y) = (&*f.dom, &*f.cod);
    if t.components.len() != x.object_count() || t.cells.len() != x.vertical_count() {
        return Err(fail("component tables", "wrong length"));
    }
    for a in x.x0.objects() {
        let h = t.components[a];
        if y.h_src(h) != f.obj(a) || y.h_tgt(h) != g.obj(a) {
            return Err(fail("a_A : F A → G A", x.x0.obj_name(a)));
        }
    }
    for v in x.x0.arrows() {
        let c = t.cells[v];
        let ok = y.top(c) == t.components[x.x0.src(v)]
            && y.bottom(c) == t.components[x.x0.tgt(v)]
            && y.left(c) == f.vert(v)
            && y.right(c) == g.vert(v);
        if !ok {
            return Err(fail("boundary of a_v", x.x0.arr_name(v)));
        }
    }
    for a in x.x0.objects() {
        if t.cells[x.x0.identity(a)] != y.h_id_cell(t.components[a]) {
            return Err(fail("a_{1_A} = 1_{a_A}", x.x0.obj_name(a)));
        }
    }
    for v1 in x.x0.arrows() {
        for &v2 in x.x0.out_arrows(x.x0.tgt(v1)) {
            let v = x.x0.compose(v2, v1).unwrap();
            if y.vcomp(t.cells[v2], t.cells[v1]) != Some(t.cells[v]) {
                return Err(fail(
                    "a_{v₂·v₁} = a_{v₂}·a_{v₁}",
                    format!("({}, {})", x.x0.arr_name(v2), x.x0.arr_name(v1)),
                ));
            }
        }
    }
    for z in x.x1.arrows() {
        let lhs = y.hcomp_cells(t.cells[x.right(z)], f.cell(z));
        let rhs = y.hcomp_cells(g.cell(z), t.cells[x.left(z)]);
        if lhs.is_none() || lhs != rhs {
            return Err(fail("m(a_{v'}, Fζ) = m(Gζ, a_v)", x.x1.arr_name(z)));
        }
    }
    Ok(())
}

/// A vertical transformation `F ⇒ G`: vertical components on objects and
/// cells on horizontal arrows.
#[derive(Debug, Clone)]
pub struct VerticalTransformation {
    pub source: DoubleFunctor,
    pub target: DoubleFunctor,
    /// Object `A` ↦ vertical `F A → G A`.
    pub components: Vec<Ar>,
    /// Horizontal `h` ↦ cell with top `F h`, bottom `G h`.
    pub cells: Vec<Ar>,
}

impl VerticalTransformation {
    pub fn identity(f: DoubleFunctor) -> Self {
        let y = f.cod.clone();
        let components = f.dom.x0.objects().map(|a| y.x0.identity(f.obj(a))).collect();
        let cells = f.dom.x1.objects().map(|h| y.h_id_cell(f.horiz(h))).collect();
        VerticalTransformation { source: f.clone(), target: f, components, cells }
    }
}

pub fn check_vertical_transformation(t: &VerticalTransformation) -> Result<(), CheckFailure> {
    let (f, g) = (&t.source, &t.target);
    let (x, y) = (&*f.dom, &*f.cod);
    if t.components.len() != x.object_count() || t.cells.len() != x.horizontal_count() {
        return Err(fail("component tables", "wrong length"));
    }
    for a in x.x0.objects() {
        let v = t.components[a];
        if y.x0.src(v) != f.obj(a) || y.x0.tgt(v) != g.obj(a) {
            return Err(fail("γ_A : F A → G A", x.x0.obj_name(a)));
        }
    }
    for v in x.x0.arrows() {
        let lhs = y.x0.compose(t.components[x.x0.tgt(v)], f.vert(v));
        let rhs = y.x0.compose(g.vert(v), t.components[x.x0.src(v)]);
        if lhs.is_none() || lhs != rhs {
            return Err(fail("γ_B·Fv = Gv·γ_A", x.x0.arr_name(v)));
        }
    }
    for h in x.x1.objects() {
        let c = t.cells[h];
        let ok = y.top(c) == f.horiz(h)
            && y.bottom(c) == g.horiz(h)
            && y.left(c) == t.components[x.h_src(h)]
            && y.right(c) == t.components[x.h_tgt(h)];
        if !ok {
            return Err(fail("boundary of γ_h", x.x1.obj_name(h)));
        }
    }
    for a in x.x0.objects() {
        if t.cells[x.h_id(a)] != y.v_id_cell(t.components[a]) {
            return Err(fail("γ_{Id_A} = id_{γ_A}", x.x0.obj_name(a)));
        }
    }
    for (&(h2, h1), &h) in &x.m_h {
        if y.hcomp_cells(t.cells[h2], t.cells[h1]) != Some(t.cells[h]) {
            return Err(fail(
                "γ_{h₂∘h₁} = m(γ_{h₂}, γ_{h₁})",
                format!("({}, {})", x.x1.obj_name(h2), x.x1.obj_name(h1)),
            ));
        }
    }
    for z in x.x1.arrows() {
        let lhs = y.vcomp(t.cells[x.bottom(z)], f.cell(z));
        let rhs = y.vcomp(g.cell(z), t.cells[x.top(z)]);
        if lhs.is_none() || lhs != rhs {
            return Err(fail("γ_k·Fζ = Gζ·γ_h", x.x1.arr_name(z)));
        }
    }
    Ok(())
}

// ---- 2-equivalences ------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoEquivalenceVerdict {
    /// `((a, b), verdict)` for `F_{(a,b)} : X_{(a,b)} → Y_{(Fa,Fb)}`.
    pub hom_verdicts: Vec<((String, String), EquivalenceVerdict)>,
    pub pi0_verdict: EquivalenceVerdict,
    pub failing_pair: Option<(String, String)>,
    pub passed: bool,
}

/// Full subcategory `X_{(a,b)}` of `X1` on horizontals between the
/// components `a` and `b`.
pub fn hom_category(d: &DoubleCategory, gamma: &[usize], a: usize, b: usize) -> (FinCategory, Vec<Ob>, Vec<Ar>) {
    let objs: Vec<Ob> = d
        .x1
        .objects()
        .filter(|&h| gamma[d.h_src(h)] == a && gamma[d.h_tgt(h)] == b)
        .collect();
    let (cat, arrs) = d.x1.full_subcategory(&objs);
    (cat, objs, arrs)
}

/// Checks that `F` is an equivalence on every `X_{(a,b)}` and on `Π₀`.
pub fn check_2_equivalence(f: &DoubleFunctor) -> Result<TwoEquivalenceVerdict, DblError> {
    let (x, y) = (&*f.dom, &*f.cod);
    let px = pi0_double(x)?;
    let py = pi0_double(y)?;
    let gx = &px.object_class;
    let gy = &py.object_class;
    let nx = px.cat.obj_count();
    let ny = py.cat.obj_count();
    let rep_x: Vec<Ob> = (0..nx).map(|k| gx.iter().position(|&c| c == k).unwrap()).collect();
    let mut hom_verdicts = Vec::new();
    let mut failing_pair = None;
    let mut homs_y: HashMap<(usize, usize), (Arc<FinCategory>, HashMap<Ob, Ob>, HashMap<Ar, Ar>)> = HashMap::new();
    for a in 0..ny {
        for b in 0..ny {
            let (cat, objs, arrs) = hom_category(y, gy, a, b);
            let oi = objs.iter().enumerate().map(|(i, &o)| (o, i)).collect();
            let ai = arrs.iter().enumerate().map(|(i, &o)| (o, i)).collect();
            homs_y.insert((a, b), (Arc::new(cat), oi, ai));
        }
    }
    for a in 0..nx {
        for b in 0..nx {
            let (cat, objs, arrs) = hom_category(x, gx, a, b);
            let fa = gy[f.obj(rep_x[a])];
            let fb = gy[f.obj(rep_x[b])];
            let (ycat, oi, ai) = &homs_y[&(fa, fb)];
            let functor = FinFunctor::new_unchecked(
                Arc::new(cat),
                ycat.clone(),
                objs.iter().map(|&h| oi[&f.horiz(h)]).collect(),
                arrs.iter().map(|&c| ai[&f.cell(c)]).collect(),
            );
            let v = is_equivalence(&functor);
            let names = (px.cat.obj_name(a).to_string(), px.cat.obj_name(b).to_string());
            if !v.is_equivalence && failing_pair.is_none() {
                failing_pair = Some(names.clone());
            }
            hom_verdicts.push((names, v));
        }
    }
    let mut pobj = vec![0; nx];
    for a in x.x0.objects() {
        pobj[gx[a]] = gy[f.obj(a)];
    }
    let mut parr = vec![0; px.cat.arr_count()];
    for h in x.x1.objects() {
        parr[px.arrow_class[h]] = py.arrow_class[f.horiz(h)];
    }
    let pi0_functor = FinFunctor::new_unchecked(px.cat.clone(), py.cat.clone(), pobj, parr);
    let pi0_verdict = is_equivalence(&pi0_functor);
    let passed = failing_pair.is_none() && pi0_verdict.is_equivalence;
    Ok(TwoEquivalenceVerdict { hom_verdicts, pi0_verdict, failing_pair, passed })
}
