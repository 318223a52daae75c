//! The weakly globular double category of fractions `C{W}` and the
//! machinery around its universal property.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::companion::{comp_double_category, find_companion, find_conjoint, CompDouble, CompanionError, CompanionPair};
use crate::dblcat::{
    check_horizontal_transformation, check_strict_functor, horizontal_inverse, CheckFailure, DblError, DoubleCategory,
    DoubleFunctor, HorizontalTransformation,
};
use crate::fincat::{Ar, CategoryBuilder, CategoryPresentation, FinCatError, FunctorError, FinCategory, FinFunctor, FinNatTrans, Ob};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FractionsError {
    #[error(transparent)]
    Category(#[from] FinCatError),
    #[error(transparent)]
    Functor(#[from] FunctorError),
    #[error(transparent)]
    Double(#[from] DblError),
    #[error(transparent)]
    Companion(#[from] CompanionError),
    #[error("unknown arrow `{0}` in W")]
    UnknownArrow(String),
    #[error("calculus-of-fractions conditions fail: {0}")]
    ConditionsFailed(String),
    #[error("inconsistent frame: {0}")]
    InconsistentFrame(String),
    #[error("composite cell missing on frame {0}")]
    CompositionMissing(String),
    #[error("pasting undefined at row {row} of the image of cell {cell}")]
    PastingUndefined { row: usize, cell: String },
    #[error("horizontal arrow `{0}` has no horizontal inverse")]
    NotHorizontallyInvertible(String),
    #[error("{0}")]
    Check(#[from] CheckFailure),
}

/// Serialized input: a category presentation with the marked arrows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FractionsInput {
    #[serde(flatten)]
    pub category: CategoryPresentation,
    #[serde(rename = "W", default)]
    pub w: Vec<String>,
}

/// A finite category with a class `W` of marked arrows.
#[derive(Debug, Clone)]
pub struct FractionsPresentation {
    pub base: Arc<FinCategory>,
    /// Marked arrows in declaration order.
    pub w: Vec<Ar>,
    in_w: Vec<bool>,
    pub require_two_out_of_three: bool,
}

impl FractionsPresentation {
    pub fn new(base: Arc<FinCategory>, w: impl IntoIterator<Item = Ar>) -> Self {
        let mut in_w = vec![false; base.arr_count()];
        for a in w {
            in_w[a] = true;
        }
        let w = base.arrows().filter(|&a| in_w[a]).collect();
        FractionsPresentation { base, w, in_w, require_two_out_of_three: false }
    }

    pub fn from_input(input: &FractionsInput) -> Result<Self, FractionsError> {
        let base = Arc::new(FinCategory::from_presentation(&input.category)?);
        let w = input
            .w
            .iter()
            .map(|n| base.arr_by_name(n).ok_or_else(|| FractionsError::UnknownArrow(n.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(base, w))
    }

    pub fn to_input(&self) -> FractionsInput {
        FractionsInput {
            category: self.base.to_presentation(),
            w: self.w.iter().map(|&a| self.base.arr_name(a).to_string()).collect(),
        }
    }

    /// `W` = identities.
    pub fn identities(base: Arc<FinCategory>) -> Self {
        let ids: Vec<Ar> = base.objects().map(|o| base.identity(o)).collect();
        Self::new(base, ids)
    }

    /// `W` = all arrows.
    pub fn all(base: Arc<FinCategory>) -> Self {
        let all: Vec<Ar> = base.arrows().collect();
        Self::new(base, all)
    }

    pub fn in_w(&self, a: Ar) -> bool {
        self.in_w[a]
    }

    fn name(&self, a: Ar) -> &str {
        self.base.arr_name(a)
    }
}

// ---- conditions ----------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConditionsReport {
    /// Isomorphisms not in `W`.
    pub missing_isomorphisms: Vec<String>,
    /// Composable `(g, f)` in `W` with `g∘f ∉ W`.
    pub not_closed: Vec<(String, String)>,
    /// Cospans `(f, w)` without a completing square.
    pub cf2_failures: Vec<(String, String)>,
    /// `(f, g, w)` with `wf = wg` but no equalizing arrow in `W`.
    pub cf3_failures: Vec<(String, String, String)>,
    /// Composable `(g, f)` where two of `g`, `f`, `g∘f` lie in `W` but not the third.
    pub two_out_of_three_failures: Vec<(String, String)>,
    pub cf_passed: bool,
    pub two_out_of_three: bool,
}

impl ConditionsReport {
    pub fn passed(&self, require_two_out_of_three: bool) -> bool {
        self.cf_passed && (!require_two_out_of_three || self.two_out_of_three)
    }

    fn summary(&self) -> String {
        let mut parts = Vec::new();
        if let Some(a) = self.missing_isomorphisms.first() {
            parts.push(format!("CF1: isomorphism {a} not in W"));
        }
        if let Some((g, f)) = self.not_closed.first() {
            parts.push(format!("CF1: {g}∘{f} not in W"));
        }
        if let Some((f, w)) = self.cf2_failures.first() {
            parts.push(format!("CF2: no square for ({f}, {w})"));
        }
        if let Some((f, g, w)) = self.cf3_failures.first() {
            parts.push(format!("CF3: {f}, {g} not equalized after {w}"));
        }
        if let Some((g, f)) = self.two_out_of_three_failures.first() {
            parts.push(format!("2-out-of-3 fails at ({g}, {f})"));
        }
        parts.join("; ")
    }
}

pub fn check_fractions_conditions(p: &FractionsPresentation) -> ConditionsReport {
    let c = &*p.base;
    let mut r = ConditionsReport::default();
    for a in c.arrows() {
        if c.is_iso(a) && !p.in_w(a) {
            r.missing_isomorphisms.push(p.name(a).to_string());
        }
    }
    for f in c.arrows() {
        for &g in c.out_arrows(c.tgt(f)) {
            let gf = c.compose(g, f).unwrap();
            let count = [p.in_w(g), p.in_w(f), p.in_w(gf)].iter().filter(|&&b| b).count();
            if p.in_w(g) && p.in_w(f) && !p.in_w(gf) {
                r.not_closed.push((p.name(g).to_string(), p.name(f).to_string()));
            }
            if count == 2 {
                r.two_out_of_three_failures.push((p.name(g).to_string(), p.name(f).to_string()));
            }
        }
    }
    for &w in &p.w {
        let (a, b) = (c.src(w), c.tgt(w));
        for &f in c.in_arrows(b) {
            let square = p.w.iter().filter(|&&wb| c.tgt(wb) == c.src(f)).any(|&wb| {
                let fw = c.compose(f, wb).unwrap();
                c.hom(c.src(wb), a).iter().any(|&fb| c.compose(w, fb) == Some(fw))
            });
            if !square {
                r.cf2_failures.push((p.name(f).to_string(), p.name(w).to_string()));
            }
        }
        for &f in c.in_arrows(a) {
            for &g in c.hom(c.src(f), a) {
                if g <= f || c.compose(w, f) != c.compose(w, g) {
                    continue;
                }
                let eq = p
                    .w
                    .iter()
                    .filter(|&&wt| c.tgt(wt) == c.src(f))
                    .any(|&wt| c.compose(f, wt) == c.compose(g, wt));
                if !eq {
                    r.cf3_failures.push((p.name(f).to_string(), p.name(g).to_string(), p.name(w).to_string()));
                }
            }
        }
    }
    r.cf_passed = r.missing_isomorphisms.is_empty()
        && r.not_closed.is_empty()
        && r.cf2_failures.is_empty()
        && r.cf3_failures.is_empty();
    r.two_out_of_three = r.two_out_of_three_failures.is_empty();
    r
}

// ---- spans, frames and witnesses -----------------------------------------------

/// A span `(u₁, C, u₂)` representing a vertical arrow `(w₁) → (w₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Span {
    pub apex: Ob,
    pub u1: Ar,
    pub u2: Ar,
}

/// The boundary of a would-be cell: top `f₁: (w₁) → (w₁′)`, bottom `f₂: (w₂) → (w₂′)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Frame {
    pub w1: Ar,
    pub f1: Ar,
    pub w1p: Ar,
    pub w2: Ar,
    pub f2: Ar,
    pub w2p: Ar,
}

/// Representative spans on both sides and a connecting arrow `φ` with
/// `u₁′φ = f₁u₁` and `u₂′φ = f₂u₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CellWitness {
    pub left: Span,
    pub right: Span,
    pub phi: Ar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SearchOrder {
    /// Identity spans first, then by apex and arrow declaration order.
    #[default]
    Canonical,
    /// The reverse of the canonical order.
    Reversed,
}

/// All spans `(u₁, C, u₂)` with `w₁u₁ = w₂u₂ ∈ W`.
pub fn spans(p: &FractionsPresentation, w1: Ar, w2: Ar, order: SearchOrder) -> Vec<Span> {
    let c = &*p.base;
    let mut out = Vec::new();
    for apex in c.objects() {
        for &u1 in c.hom(apex, c.src(w1)) {
            let a = c.compose(w1, u1).unwrap();
            if !p.in_w(a) {
                continue;
            }
            for &u2 in c.hom(apex, c.src(w2)) {
                if c.compose(w2, u2) == Some(a) {
                    out.push(Span { apex, u1, u2 });
                }
            }
        }
    }
    out.sort_by_key(|s| (!(c.is_identity(s.u1) && c.is_identity(s.u2)), s.apex, s.u1, s.u2));
    if order == SearchOrder::Reversed {
        out.reverse();
    }
    out
}

fn check_frame(p: &FractionsPresentation, fr: &Frame) -> Result<(), FractionsError> {
    let c = &*p.base;
    let bad = |m: &str| Err(FractionsError::InconsistentFrame(m.to_string()));
    if ![fr.w1, fr.w1p, fr.w2, fr.w2p].iter().all(|&w| p.in_w(w)) {
        return bad("side objects must lie in W");
    }
    if c.tgt(fr.w1) != c.tgt(fr.w2) || c.tgt(fr.w1p) != c.tgt(fr.w2p) {
        return bad("no vertical arrows: codomains differ");
    }
    if c.src(fr.f1) != c.src(fr.w1) || c.tgt(fr.f1) != c.src(fr.w1p) {
        return bad("top arrow has the wrong endpoints");
    }
    if c.src(fr.f2) != c.src(fr.w2) || c.tgt(fr.f2) != c.src(fr.w2p) {
        return bad("bottom arrow has the wrong endpoints");
    }
    Ok(())
}

/// Every witness for the frame, in search order.
pub fn witnesses(p: &FractionsPresentation, fr: &Frame, order: SearchOrder) -> Result<Vec<CellWitness>, FractionsError> {
    check_frame(p, fr)?;
    let c = &*p.base;
    let rights = spans(p, fr.w1p, fr.w2p, order);
    let mut out = Vec::new();
    for left in spans(p, fr.w1, fr.w2, order) {
        let top = c.compose(fr.f1, left.u1).unwrap();
        let bottom = c.compose(fr.f2, left.u2).unwrap();
        for right in &rights {
            let mut phis: Vec<Ar> = c
                .hom(left.apex, right.apex)
                .iter()
                .copied()
                .filter(|&phi| c.compose(right.u1, phi) == Some(top) && c.compose(right.u2, phi) == Some(bottom))
                .collect();
            if order == SearchOrder::Reversed {
                phis.reverse();
            }
            out.extend(phis.into_iter().map(|phi| CellWitness { left, right: *right, phi }));
        }
    }
    Ok(out)
}

/// The least witness for the frame, if any.
pub fn cell_exists(p: &FractionsPresentation, fr: &Frame) -> Result<Option<CellWitness>, FractionsError> {
    cell_exists_with(p, fr, SearchOrder::Canonical)
}

pub fn cell_exists_with(p: &FractionsPresentation, fr: &Frame, order: SearchOrder) -> Result<Option<CellWitness>, FractionsError> {
    Ok(witnesses(p, fr, order)?.into_iter().next())
}

// ---- the double category -------------------------------------------------------

/// `C{W}` with provenance tables.
#[derive(Debug, Clone)]
pub struct FractionsDouble {
    pub presentation: FractionsPresentation,
    pub double: Arc<DoubleCategory>,
    /// Object ↦ arrow of `W`.
    pub objects: Vec<Ar>,
    pub object_of: HashMap<Ar, Ob>,
    /// Vertical arrow ↦ `(source, target)` objects.
    pub verticals: Vec<(Ob, Ob)>,
    pub vertical_of: HashMap<(Ob, Ob), Ar>,
    /// Horizontal arrow ↦ `(source object, arrow of C, target object)`.
    pub horizontals: Vec<(Ob, Ar, Ob)>,
    pub horizontal_of: HashMap<(Ob, Ar, Ob), Ob>,
    /// Cell ↦ witness.
    pub witnesses: Vec<CellWitness>,
}

impl FractionsDouble {
    pub fn base(&self) -> &FinCategory {
        &self.presentation.base
    }

    pub fn object(&self, w: Ar) -> Ob {
        self.object_of[&w]
    }

    pub fn vertical(&self, w1: Ar, w2: Ar) -> Option<Ar> {
        self.vertical_of.get(&(self.object(w1), self.object(w2))).copied()
    }

    pub fn horizontal(&self, w: Ar, f: Ar, w2: Ar) -> Option<Ob> {
        self.horizontal_of.get(&(self.object(w), f, self.object(w2))).copied()
    }

    /// The frame of an existing cell.
    pub fn frame_of(&self, cell: Ar) -> Frame {
        let d = &self.double;
        self.frame_between(d.top(cell), d.bottom(cell))
    }

    pub fn frame_between(&self, top: Ob, bottom: Ob) -> Frame {
        let (a1, f1, b1) = self.horizontals[top];
        let (a2, f2, b2) = self.horizontals[bottom];
        Frame {
            w1: self.objects[a1],
            f1,
            w1p: self.objects[b1],
            w2: self.objects[a2],
            f2,
            w2p: self.objects[b2],
        }
    }

    /// Pairs of horizontals whose side verticals exist.
    pub fn consistent_frames(&self) -> Vec<(Ob, Ob)> {
        let c = self.base();
        let mut out = Vec::new();
        for top in 0..self.horizontals.len() {
            let (a1, _, b1) = self.horizontals[top];
            for bottom in 0..self.horizontals.len() {
                let (a2, _, b2) = self.horizontals[bottom];
                if c.tgt(self.objects[a1]) == c.tgt(self.objects[a2]) && c.tgt(self.objects[b1]) == c.tgt(self.objects[b2]) {
                    out.push((top, bottom));
                }
            }
        }
        out
    }
}

/// Builds `C{W}` with the canonical witness order.
pub fn build_fractions(p: &FractionsPresentation) -> Result<FractionsDouble, FractionsError> {
    build_fractions_with(p, SearchOrder::Canonical)
}

pub fn build_fractions_with(p: &FractionsPresentation, order: SearchOrder) -> Result<FractionsDouble, FractionsError> {
    let report = check_fractions_conditions(p);
    if !report.cf_passed {
        return Err(FractionsError::ConditionsFailed(report.summary()));
    }
    let c = &*p.base;
    // objects: identities in object order, then the other arrows of W
    let mut objects: Vec<Ar> = c.objects().map(|o| c.identity(o)).collect();
    objects.extend(p.w.iter().copied().filter(|&w| !c.is_identity(w)));
    let object_of: HashMap<Ar, Ob> = objects.iter().enumerate().map(|(i, &w)| (w, i)).collect();
    let oname = |i: Ob| format!("({})", c.arr_name(objects[i]));

    let mut b0 = CategoryBuilder::new();
    for i in 0..objects.len() {
        b0.add_object(oname(i))?;
    }
    let mut verticals = Vec::new();
    let mut vertical_of = HashMap::new();
    for i in 0..objects.len() {
        for j in 0..objects.len() {
            if c.tgt(objects[i]) == c.tgt(objects[j]) {
                let k = b0.add_arrow(format!("v({},{})", c.arr_name(objects[i]), c.arr_name(objects[j])), i, j)?;
                verticals.push((i, j));
                vertical_of.insert((i, j), k);
            }
        }
    }
    for i in 0..objects.len() {
        b0.set_identity(i, vertical_of[&(i, i)]);
    }
    for (k, &(i, j)) in verticals.iter().enumerate() {
        for l in 0..objects.len() {
            if let Some(&kk) = vertical_of.get(&(j, l)) {
                b0.set_composite(kk, k, vertical_of[&(i, l)])?;
            }
        }
    }
    let x0 = Arc::new(b0.finish()?);

    let mut horizontals = Vec::new();
    let mut horizontal_of = HashMap::new();
    let mut b1 = CategoryBuilder::new();
    for i in 0..objects.len() {
        for j in 0..objects.len() {
            for &f in c.hom(c.src(objects[i]), c.src(objects[j])) {
                let h = b1.add_object(format!(
                    "({},{},{})",
                    c.arr_name(objects[i]),
                    c.arr_name(f),
                    c.arr_name(objects[j])
                ))?;
                horizontals.push((i, f, j));
                horizontal_of.insert((i, f, j), h);
            }
        }
    }
    let hname = |h: Ob| b1_name(c, &objects, horizontals[h]);
    let mut witnesses_out = Vec::new();
    let mut cell_of: HashMap<(Ob, Ob), Ar> = HashMap::new();
    let mut cell_frames = Vec::new();
    for top in 0..horizontals.len() {
        for bottom in 0..horizontals.len() {
            let (a1, f1, b1_) = horizontals[top];
            let (a2, f2, b2) = horizontals[bottom];
            let (Some(&l), Some(&r)) = (vertical_of.get(&(a1, a2)), vertical_of.get(&(b1_, b2))) else { continue };
            let fr = Frame { w1: objects[a1], f1, w1p: objects[b1_], w2: objects[a2], f2, w2p: objects[b2] };
            if let Some(w) = cell_exists_with(p, &fr, order)? {
                let k = b1.add_arrow(format!("[{}=>{}]", hname(top), hname(bottom)), top, bottom)?;
                cell_of.insert((top, bottom), k);
                witnesses_out.push(w);
                cell_frames.push((top, bottom, l, r));
            }
        }
    }
    let missing = |t: Ob, b: Ob| FractionsError::CompositionMissing(format!("{} => {}", hname(t), hname(b)));
    for h in 0..horizontals.len() {
        let id = *cell_of.get(&(h, h)).ok_or_else(|| missing(h, h))?;
        b1.set_identity(h, id);
    }
    let mut cells_from: HashMap<Ob, Vec<(Ob, Ar)>> = HashMap::new();
    for (&(t, b), &k) in &cell_of {
        cells_from.entry(t).or_default().push((b, k));
    }
    for (k, &(t, b, _, _)) in cell_frames.iter().enumerate() {
        for &(b2, k2) in cells_from.get(&b).map(Vec::as_slice).unwrap_or(&[]) {
            let kc = *cell_of.get(&(t, b2)).ok_or_else(|| missing(t, b2))?;
            b1.set_composite(k2, k, kc)?;
        }
    }
    let x1 = Arc::new(b1.finish()?);
    let d0 = FinFunctor::new_unchecked(
        x1.clone(),
        x0.clone(),
        horizontals.iter().map(|h| h.0).collect(),
        cell_frames.iter().map(|f| f.2).collect(),
    );
    let d1 = FinFunctor::new_unchecked(
        x1.clone(),
        x0.clone(),
        horizontals.iter().map(|h| h.2).collect(),
        cell_frames.iter().map(|f| f.3).collect(),
    );
    let id_h = |i: Ob| horizontal_of[&(i, c.identity(c.src(objects[i])), i)];
    let s_obj: Vec<Ob> = (0..objects.len()).map(id_h).collect();
    let s_arr = verticals
        .iter()
        .map(|&(i, j)| cell_of.get(&(id_h(i), id_h(j))).copied().ok_or_else(|| missing(id_h(i), id_h(j))))
        .collect::<Result<Vec<_>, _>>()?;
    let s = FinFunctor::new_unchecked(x0.clone(), x1.clone(), s_obj, s_arr);
    let mut m_h = HashMap::new();
    let mut by_src: HashMap<Ob, Vec<Ob>> = HashMap::new();
    for (h, &(i, _, _)) in horizontals.iter().enumerate() {
        by_src.entry(i).or_default().push(h);
    }
    for (h, &(i, f, j)) in horizontals.iter().enumerate() {
        for &g in by_src.get(&j).map(Vec::as_slice).unwrap_or(&[]) {
            let (_, gg, k) = horizontals[g];
            m_h.insert((g, h), horizontal_of[&(i, c.compose(gg, f).unwrap(), k)]);
        }
    }
    let mut by_left: HashMap<Ar, Vec<Ar>> = HashMap::new();
    for (k, fr) in cell_frames.iter().enumerate() {
        by_left.entry(fr.2).or_default().push(k);
    }
    let mut m_c = HashMap::new();
    for (k, &(t, b, _, r)) in cell_frames.iter().enumerate() {
        for &k2 in by_left.get(&r).map(Vec::as_slice).unwrap_or(&[]) {
            let (t2, b2, _, _) = cell_frames[k2];
            let (tt, bb) = (m_h[&(t2, t)], m_h[&(b2, b)]);
            let kc = *cell_of.get(&(tt, bb)).ok_or_else(|| missing(tt, bb))?;
            m_c.insert((k2, k), kc);
        }
    }
    let double = Arc::new(DoubleCategory::new(x0, x1, d0, d1, s, m_h, m_c)?);
    Ok(FractionsDouble {
        presentation: p.clone(),
        double,
        objects,
        object_of,
        verticals,
        vertical_of,
        horizontals,
        horizontal_of,
        witnesses: witnesses_out,
    })
}

fn b1_name(c: &FinCategory, objects: &[Ar], h: (Ob, Ar, Ob)) -> String {
    format!("({},{},{})", c.arr_name(objects[h.0]), c.arr_name(h.1), c.arr_name(objects[h.2]))
}

/// The inclusion `H C → C{W}`, `A ↦ (1_A)`, `f ↦ (1_A, f, 1_B)`.
pub fn inclusion_jc(f: &FractionsDouble) -> DoubleFunctor {
    let c = f.base();
    let hc = Arc::new(DoubleCategory::horizontal(c));
    let d = &f.double;
    let obj: Vec<Ob> = c.objects().map(|o| f.object(c.identity(o))).collect();
    let vert: Vec<Ar> = c.objects().map(|o| d.x0.identity(obj[o])).collect();
    let horiz: Vec<Ob> = c
        .arrows()
        .map(|a| f.horizontal(c.identity(c.src(a)), a, c.identity(c.tgt(a))).expect("identities lie in W"))
        .collect();
    let cells: Vec<Ar> = c.arrows().map(|a| d.h_id_cell(horiz[a])).collect();
    DoubleFunctor {
        f0: FinFunctor::new_unchecked(hc.x0.clone(), d.x0.clone(), obj, vert),
        f1: FinFunctor::new_unchecked(hc.x1.clone(), d.x1.clone(), horiz, cells),
        dom: hc,
        cod: d.clone(),
    }
}

// ---- representative robustness ---------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RobustnessReport {
    pub frames_checked: usize,
    pub frames_with_cell: usize,
    pub representative_pairs_checked: usize,
    pub failures: Vec<String>,
    pub passed: bool,
}

/// Checks, for every consistent frame, the all-representatives condition of
/// the definition of cells: a cell exists iff for every pair of side
/// representatives some refinement `r` of the left one admits a component.
pub fn representative_robustness(f: &FractionsDouble) -> RobustnessReport {
    let p = &f.presentation;
    let c = &*p.base;
    let mut r = RobustnessReport::default();
    for (top, bottom) in f.consistent_frames() {
        let fr = f.frame_between(top, bottom);
        let has_cell = !f.double.cells_on_frame(top, bottom, f.vertical(fr.w1, fr.w2).unwrap(), f.vertical(fr.w1p, fr.w2p).unwrap()).next().is_none();
        r.frames_checked += 1;
        if has_cell {
            r.frames_with_cell += 1;
        }
        let lefts = spans(p, fr.w1, fr.w2, SearchOrder::Canonical);
        let rights = spans(p, fr.w1p, fr.w2p, SearchOrder::Canonical);
        for s in &lefts {
            for t in &rights {
                r.representative_pairs_checked += 1;
                let refined = c.in_arrows(s.apex).iter().any(|&rr| {
                    let u1r = c.compose(s.u1, rr).unwrap();
                    let u2r = c.compose(s.u2, rr).unwrap();
                    if !p.in_w(c.compose(fr.w1, u1r).unwrap()) {
                        return false;
                    }
                    let top_arrow = c.compose(fr.f1, u1r).unwrap();
                    let bottom_arrow = c.compose(fr.f2, u2r).unwrap();
                    c.hom(c.src(rr), t.apex)
                        .iter()
                        .any(|&phi| c.compose(t.u1, phi) == Some(top_arrow) && c.compose(t.u2, phi) == Some(bottom_arrow))
                });
                if refined != has_cell {
                    r.failures.push(format!(
                        "frame {} => {}: representatives ({},{},{}) / ({},{},{}) give {}",
                        f.double.x1.obj_name(top),
                        f.double.x1.obj_name(bottom),
                        c.arr_name(s.u1),
                        c.obj_name(s.apex),
                        c.arr_name(s.u2),
                        c.arr_name(t.u1),
                        c.obj_name(t.apex),
                        c.arr_name(t.u2),
                        refined
                    ));
                }
            }
        }
    }
    r.passed = r.failures.is_empty();
    r
}

/// Any two witnesses with the same side representatives agree after a
/// refinement in `W`, so every frame carries at most one cell.
pub fn witnesses_agree(p: &FractionsPresentation, fr: &Frame) -> Result<bool, FractionsError> {
    let c = &*p.base;
    let all = witnesses(p, fr, SearchOrder::Canonical)?;
    for (i, a) in all.iter().enumerate() {
        for b in &all[i + 1..] {
            if a.left != b.left || a.right != b.right {
                continue;
            }
            let ok = c.in_arrows(a.left.apex).iter().any(|&r| {
                p.in_w(c.compose_path(&[r, a.left.u1, fr.w1]).unwrap()) && c.compose(a.phi, r) == c.compose(b.phi, r)
            });
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

// ---- companions in C{W} -----------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerticalClass {
    pub vertical: String,
    /// `u` with `w₁ = w₂u`, if any.
    pub companion_form: Option<String>,
    pub has_companion: bool,
    /// `u` with `w₂ = w₁u`, if any.
    pub conjoint_form: Option<String>,
    pub has_conjoint: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HorizontalClass {
    pub horizontal: String,
    /// `w = w′∘f` for `f: (w) → (w′)`.
    pub normal_form: bool,
    pub has_companion: bool,
    pub has_conjoint: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompanionClassification {
    pub verticals: Vec<VerticalClass>,
    pub horizontals: Vec<HorizontalClass>,
    pub disagreements: Vec<String>,
    pub agrees: bool,
}

/// Decides the normal forms for companions and conjoints and compares them
/// with exhaustive search, on every vertical and horizontal arrow.
pub fn classify_for_companions(f: &FractionsDouble) -> CompanionClassification {
    let c = f.base();
    let d = &*f.double;
    let mut out = CompanionClassification { verticals: vec![], horizontals: vec![], disagreements: vec![], agrees: true };
    for (v, &(i, j)) in f.verticals.iter().enumerate() {
        let (w1, w2) = (f.objects[i], f.objects[j]);
        let comp_u = c.hom(c.src(w1), c.src(w2)).iter().copied().find(|&u| c.compose(w2, u) == Some(w1));
        let conj_u = c.hom(c.src(w2), c.src(w1)).iter().copied().find(|&u| c.compose(w1, u) == Some(w2));
        let companion = crate::companion::find_companion_of_vertical(d, v);
        let conjoint = crate::companion::find_conjoint_of_vertical(d, v);
        let class = VerticalClass {
            vertical: d.x0.arr_name(v).to_string(),
            companion_form: comp_u.map(|u| c.arr_name(u).to_string()),
            has_companion: companion.is_some(),
            conjoint_form: conj_u.map(|u| c.arr_name(u).to_string()),
            has_conjoint: conjoint.is_some(),
        };
        if comp_u.is_some() != companion.is_some() || conj_u.is_some() != conjoint.is_some() {
            out.disagreements.push(format!("vertical {}", class.vertical));
        }
        out.verticals.push(class);
    }
    for (h, &(i, a, j)) in f.horizontals.iter().enumerate() {
        let normal = c.compose(f.objects[j], a) == Some(f.objects[i]);
        let class = HorizontalClass {
            horizontal: d.x1.obj_name(h).to_string(),
            normal_form: normal,
            has_companion: find_companion(d, h).is_some(),
            has_conjoint: find_conjoint(d, h).is_some(),
        };
        if normal != class.has_companion || normal != class.has_conjoint {
            out.disagreements.push(format!("horizontal {}", class.horizontal));
        }
        out.horizontals.push(class);
    }
    out.agrees = out.disagreements.is_empty();
    out
}

// ---- factorization of cells ----------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorKind {
    /// A vertical identity cell `1_h`.
    Identity,
    /// A companion binding cell.
    Binding,
    /// The vertical inverse of a companion binding cell.
    InverseBinding,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorFrame {
    pub top: String,
    pub bottom: String,
    pub left: String,
    pub right: String,
    pub kind: FactorKind,
    pub cell: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationPlan {
    pub cell: String,
    /// Four rows of two frames; rows are pasted horizontally, then stacked.
    pub rows: Vec<[FactorFrame; 2]>,
    pub all_factors_inhabited: bool,
    pub pasted_equals_cell: bool,
}

/// Writes a cell as a pasting of identity cells, companion binding cells and
/// their vertical inverses, and checks the pasting.
pub fn factor_cell(f: &FractionsDouble, cell: Ar) -> Result<FactorizationPlan, FractionsError> {
    let c = f.base();
    let d = &*f.double;
    let fr = f.frame_of(cell);
    let w = f.witnesses[cell];
    let (u1, u2, ξ) = (w.left.u1, w.left.u2, w.phi);
    let (u1p, u2p) = (w.right.u1, w.right.u2);
    let a = c.compose(fr.w1, u1).unwrap();
    let ap = c.compose(fr.w1p, u1p).unwrap();
    let h = |x: Ar, g: Ar, y: Ar| f.horizontal(x, g, y).expect("horizontal of the plan");
    let v = |x: Ar, y: Ar| f.vertical(x, y).expect("vertical of the plan");
    let id_of = |x: Ar| h(x, c.identity(c.src(x)), x);
    type Spec = (Ob, Ob, Ar, Ar, FactorKind);
    let plan: [[Spec; 2]; 4] = [
        [
            (id_of(fr.w1), h(a, u1, fr.w1), v(fr.w1, a), v(fr.w1, fr.w1), FactorKind::InverseBinding),
            (h(fr.w1, fr.f1, fr.w1p), h(fr.w1, fr.f1, fr.w1p), v(fr.w1, fr.w1), v(fr.w1p, fr.w1p), FactorKind::Identity),
        ],
        [
            (h(a, ξ, ap), h(a, ξ, ap), v(a, a), v(ap, ap), FactorKind::Identity),
            (h(ap, u1p, fr.w1p), id_of(ap), v(ap, ap), v(fr.w1p, ap), FactorKind::InverseBinding),
        ],
        [
            (h(a, ξ, ap), h(a, ξ, ap), v(a, a), v(ap, ap), FactorKind::Identity),
            (id_of(ap), h(ap, u2p, fr.w2p), v(ap, ap), v(ap, fr.w2p), FactorKind::Binding),
        ],
        [
            (h(a, u2, fr.w2), id_of(fr.w2), v(a, fr.w2), v(fr.w2, fr.w2), FactorKind::Binding),
            (h(fr.w2, fr.f2, fr.w2p), h(fr.w2, fr.f2, fr.w2p), v(fr.w2, fr.w2), v(fr.w2p, fr.w2p), FactorKind::Identity),
        ],
    ];
    let mut rows = Vec::new();
    let mut row_cells = Vec::new();
    let mut inhabited = true;
    for row in &plan {
        let found: Vec<Option<Ar>> =
            row.iter().map(|&(t, b, l, r, _)| d.cells_on_frame(t, b, l, r).next()).collect();
        inhabited &= found.iter().all(Option::is_some);
        let frame = |k: usize| {
            let (t, b, l, r, kind) = row[k];
            FactorFrame {
                top: d.x1.obj_name(t).to_string(),
                bottom: d.x1.obj_name(b).to_string(),
                left: d.x0.arr_name(l).to_string(),
                right: d.x0.arr_name(r).to_string(),
                kind,
                cell: found[k].map(|x| d.x1.arr_name(x).to_string()),
            }
        };
        rows.push([frame(0), frame(1)]);
        if let (Some(l), Some(r)) = (found[0], found[1]) {
            row_cells.push(d.hcomp_cells(r, l));
        } else {
            row_cells.push(None);
        }
    }
    let pasted = row_cells.into_iter().collect::<Option<Vec<_>>>().and_then(|col| d.vcomp_column(&col));
    Ok(FactorizationPlan {
        cell: d.x1.arr_name(cell).to_string(),
        rows,
        all_factors_inhabited: inhabited,
        pasted_equals_cell: pasted == Some(cell),
    })
}

// ---- ∇W, Φ and W-friendly structures ------------------------------------------------

/// Arrows of `W` and commuting triangles `(v, w′): w → w′` with `w′v = w`.
#[derive(Debug, Clone)]
pub struct NablaW {
    pub cat: Arc<FinCategory>,
    /// Object ↦ arrow of `W` (same order as the objects of `C{W}`).
    pub objects: Vec<Ar>,
    /// Arrow ↦ `(v, w′)`.
    pub arrows: Vec<(Ar, Ar)>,
    pub arrow_of: HashMap<(Ar, Ar), Ar>,
    /// Domain functor to the base category.
    pub d0: FinFunctor,
}

impl NablaW {
    pub fn object_of(&self, w: Ar) -> Ob {
        self.objects.iter().position(|&x| x == w).expect("arrow of W")
    }
}

fn require_two_out_of_three(p: &FractionsPresentation) -> Result<(), FractionsError> {
    let r = check_fractions_conditions(p);
    if r.passed(true) {
        Ok(())
    } else {
        Err(FractionsError::ConditionsFailed(r.summary()))
    }
}

pub fn nabla_w(p: &FractionsPresentation) -> Result<NablaW, FractionsError> {
    require_two_out_of_three(p)?;
    let c = p.base.clone();
    let mut objects: Vec<Ar> = c.objects().map(|o| c.identity(o)).collect();
    objects.extend(p.w.iter().copied().filter(|&w| !c.is_identity(w)));
    let mut b = CategoryBuilder::new();
    for &w in &objects {
        b.add_object(c.arr_name(w))?;
    }
    let mut arrows = Vec::new();
    let mut arrow_of = HashMap::new();
    for (i, &w) in objects.iter().enumerate() {
        for (j, &wp) in objects.iter().enumerate() {
            if c.tgt(w) != c.tgt(wp) {
                continue;
            }
            for &v in c.hom(c.src(w), c.src(wp)) {
                if c.compose(wp, v) == Some(w) {
                    let k = b.add_arrow(format!("({},{})", c.arr_name(v), c.arr_name(wp)), i, j)?;
                    arrows.push((v, wp));
                    arrow_of.insert((v, wp), k);
                }
            }
        }
    }
    for (i, &w) in objects.iter().enumerate() {
        b.set_identity(i, arrow_of[&(c.identity(c.src(w)), w)]);
    }
    for (k, &(v1, _)) in arrows.iter().enumerate() {
        let j = b_tgt(&objects, &arrows[k]);
        for (k2, &(v2, w2)) in arrows.iter().enumerate() {
            if b_src(&c, &objects, &arrows[k2]) == j {
                b.set_composite(k2, k, arrow_of[&(c.compose(v2, v1).unwrap(), w2)])?;
            }
        }
    }
    let cat = Arc::new(b.finish()?);
    let d0 = FinFunctor::new(
        cat.clone(),
        c.clone(),
        objects.iter().map(|&w| c.src(w)).collect(),
        arrows.iter().map(|&(v, _)| v).collect(),
    )?;
    Ok(NablaW { cat, objects, arrows, arrow_of, d0 })
}

fn b_tgt(objects: &[Ar], a: &(Ar, Ar)) -> Ob {
    objects.iter().position(|&w| w == a.1).unwrap()
}

fn b_src(c: &FinCategory, objects: &[Ar], a: &(Ar, Ar)) -> Ob {
    let w = c.compose(a.1, a.0).unwrap();
    objects.iter().position(|&x| x == w).unwrap()
}

/// A strict functor `G: H C → D` with companions for the arrows of `∇W`.
#[derive(Debug, Clone)]
pub struct WFriendlyStructure {
    pub g: DoubleFunctor,
    pub comp: Arc<CompDouble>,
    pub nabla: Arc<NablaW>,
    /// `Γ: V∇W → Comp(D)`.
    pub gamma_functor: DoubleFunctor,
    /// `γ: h₋∘vΓ ⇒ hG∘D0` as functors `∇W → hD`.
    pub gamma: FinNatTrans,
}

impl WFriendlyStructure {
    pub fn target(&self) -> &Arc<DoubleCategory> {
        &self.g.cod
    }

    /// `Γ(w)`.
    pub fn object(&self, w: Ar) -> Ob {
        self.gamma_functor.obj(self.nabla.object_of(w))
    }

    /// The companion quadruple `Γ(u, w)` for `u: wu → w` seen in `∇W`.
    pub fn quadruple(&self, u: Ar, w: Ar) -> CompanionPair {
        let k = self.nabla.arrow_of[&(u, w)];
        self.comp.quadruples[self.gamma_functor.vert(k)]
    }

    pub fn component(&self, w: Ar) -> Ob {
        self.gamma.components[self.nabla.object_of(w)]
    }

    pub fn check(&self) -> Result<(), FractionsError> {
        check_strict_functor(&self.g)?;
        check_strict_functor(&self.gamma_functor)?;
        self.gamma
            .check()
            .map_err(|e| CheckFailure { equation: "naturality of γ".into(), at: e.to_string() })?;
        if !self.gamma.is_invertible() {
            return Err(CheckFailure { equation: "γ invertible".into(), at: "components".into() }.into());
        }
        Ok(())
    }
}

/// The canonical structure `(J_C, Φ, φ)` on `C{W}`.
pub fn phi_functor(f: &FractionsDouble) -> Result<WFriendlyStructure, FractionsError> {
    let c = f.base();
    let nabla = Arc::new(nabla_w(&f.presentation)?);
    let comp = Arc::new(comp_double_category(f.double.clone())?);
    let vnabla = Arc::new(DoubleCategory::vertical(&nabla.cat));
    let obj: Vec<Ob> = nabla.objects.iter().map(|&w| f.object(w)).collect();
    let vert = nabla
        .arrows
        .iter()
        .map(|&(v, wp)| {
            let w = c.compose(wp, v).unwrap();
            let h = f.horizontal(w, v, wp).unwrap();
            comp.vertical_with(h, f.vertical(w, wp).unwrap())
                .ok_or_else(|| FractionsError::Companion(CompanionError::NotACompanion))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let horiz: Vec<Ob> = obj.iter().map(|&o| comp.double.h_id(o)).collect();
    let cells: Vec<Ar> = vert.iter().map(|&q| comp.double.v_id_cell(q)).collect();
    let gamma_functor = DoubleFunctor {
        f0: FinFunctor::new_unchecked(vnabla.x0.clone(), comp.double.x0.clone(), obj.clone(), vert),
        f1: FinFunctor::new_unchecked(vnabla.x1.clone(), comp.double.x1.clone(), horiz, cells),
        dom: vnabla,
        cod: comp.double.clone(),
    };
    let g = inclusion_jc(f);
    let hd = Arc::new(f.double.horizontal_category());
    let src = FinFunctor::new(
        nabla.cat.clone(),
        hd.clone(),
        obj,
        nabla
            .arrows
            .iter()
            .map(|&(v, wp)| f.horizontal(c.compose(wp, v).unwrap(), v, wp).unwrap())
            .collect(),
    )?;
    let tgt = FinFunctor::new(
        nabla.cat.clone(),
        hd,
        nabla.objects.iter().map(|&w| g.obj(c.src(w))).collect(),
        nabla.arrows.iter().map(|&(v, _)| g.horiz(v)).collect(),
    )?;
    let components = nabla
        .objects
        .iter()
        .map(|&w| f.horizontal(w, c.identity(c.src(w)), c.identity(c.src(w))).unwrap())
        .collect();
    let gamma = FinNatTrans::new(src, tgt, components)
        .map_err(|e| CheckFailure { equation: "naturality of φ".into(), at: e.to_string() })?;
    Ok(WFriendlyStructure { g, comp, nabla, gamma_functor, gamma })
}

/// Builds a structure on `G: H C → D` from companion data: `Γ` on objects,
/// `Γ` on the arrows of `∇W` and the components of `γ`.
pub fn w_friendly_structure(
    p: &FractionsPresentation,
    g: DoubleFunctor,
    object_images: Vec<Ob>,
    arrow_images: Vec<CompanionPair>,
    components: Vec<Ob>,
) -> Result<WFriendlyStructure, FractionsError> {
    let nabla = Arc::new(nabla_w(p)?);
    let d = g.cod.clone();
    let comp = Arc::new(comp_double_category(d.clone())?);
    let vnabla = Arc::new(DoubleCategory::vertical(&nabla.cat));
    let vert = arrow_images
        .iter()
        .map(|q| comp.vertical_of(q).ok_or(FractionsError::Companion(CompanionError::NotACompanion)))
        .collect::<Result<Vec<_>, _>>()?;
    let horiz: Vec<Ob> = object_images.iter().map(|&o| d.h_id(o)).collect();
    let cells: Vec<Ar> = vert.iter().map(|&q| comp.double.v_id_cell(q)).collect();
    let gamma_functor = DoubleFunctor {
        f0: FinFunctor::new_unchecked(vnabla.x0.clone(), comp.double.x0.clone(), object_images.clone(), vert),
        f1: FinFunctor::new_unchecked(vnabla.x1.clone(), comp.double.x1.clone(), horiz, cells),
        dom: vnabla,
        cod: comp.double.clone(),
    };
    let hd = Arc::new(d.horizontal_category());
    let src = FinFunctor::new(nabla.cat.clone(), hd.clone(), object_images, arrow_images.iter().map(|q| q.f).collect())?;
    let tgt = FinFunctor::new(
        nabla.cat.clone(),
        hd,
        nabla.objects.iter().map(|&w| g.obj(p.base.src(w))).collect(),
        nabla.arrows.iter().map(|&(v, _)| g.horiz(v)).collect(),
    )?;
    let gamma = FinNatTrans::new(src, tgt, components)
        .map_err(|e| CheckFailure { equation: "naturality of γ".into(), at: e.to_string() })?;
    let s = WFriendlyStructure { g, comp, nabla, gamma_functor, gamma };
    s.check()?;
    Ok(s)
}

/// The lift `G̃: C{W} → D` and the comparison `G̃∘J_C ⇒ G`.
#[derive(Debug, Clone)]
pub struct Lift {
    pub functor: DoubleFunctor,
    pub comparison: HorizontalTransformation,
}

/// Lifts a W-friendly functor along `J_C`, evaluating cells by the explicit
/// ten-row pasting; rows without cells are equalities of boundaries.
pub fn lift_w_friendly(f: &FractionsDouble, s: &WFriendlyStructure) -> Result<Lift, FractionsError> {
    let c = f.base();
    let cw = &*f.double;
    let d = s.target().clone();
    let hinv = |h: Ob| {
        horizontal_inverse(&d, h).ok_or_else(|| FractionsError::NotHorizontallyInvertible(d.x1.obj_name(h).to_string()))
    };
    let vinv = |v: Ar| d.x0.inverse(v).expect("vertical arrows of a companion quadruple are invertible here");
    let cinv = |x: Ar| d.vertical_inverse(x);
    // objects
    let obj: Vec<Ob> = f.objects.iter().map(|&w| s.object(w)).collect();
    // verticals via the least span
    let vert = f
        .verticals
        .iter()
        .map(|&(i, j)| {
            let (w1, w2) = (f.objects[i], f.objects[j]);
            let sp = spans(&f.presentation, w1, w2, SearchOrder::Canonical)[0];
            let q1 = s.quadruple(sp.u1, w1);
            let q2 = s.quadruple(sp.u2, w2);
            d.x0.compose(q2.v, vinv(q1.v)).expect("composable")
        })
        .collect::<Vec<_>>();
    // horizontals γ_{w′}⁻¹ ∘ G f ∘ γ_w
    let comp_inv: Vec<Ob> = f.objects.iter().map(|&w| hinv(s.component(w))).collect::<Result<_, _>>()?;
    let image = |i: Ob, a: Ar, j: Ob| -> Option<Ob> {
        d.hcomp_path(&[s.component(f.objects[i]), s.g.horiz(a), comp_inv[j]])
    };
    let horiz = f
        .horizontals
        .iter()
        .map(|&(i, a, j)| image(i, a, j).ok_or_else(|| FractionsError::PastingUndefined { row: 0, cell: String::new() }))
        .collect::<Result<Vec<_>, _>>()?;
    // cells
    let mut cells = Vec::with_capacity(cw.cell_count());
    for cell in cw.x1.arrows() {
        let fr = f.frame_of(cell);
        let wit = f.witnesses[cell];
        let undefined = |row: usize| FractionsError::PastingUndefined { row, cell: cw.x1.arr_name(cell).to_string() };
        let (t1, t2) = (horiz[cw.top(cell)], horiz[cw.bottom(cell)]);
        let q1 = s.quadruple(wit.left.u1, fr.w1);
        let q1p = s.quadruple(wit.right.u1, fr.w1p);
        let q2 = s.quadruple(wit.left.u2, fr.w2);
        let q2p = s.quadruple(wit.right.u2, fr.w2p);
        let a = c.compose(fr.w1, wit.left.u1).unwrap();
        let ap = c.compose(fr.w1p, wit.right.u1).unwrap();
        let m = image(f.object(a), wit.phi, f.object(ap)).ok_or_else(|| undefined(4))?;
        let r1 = d.hcomp_cells(d.h_id_cell(t1), cinv(q1.chi).ok_or_else(|| undefined(1))?).ok_or_else(|| undefined(1))?;
        let r5 = d.hcomp_cells(cinv(q1p.psi).ok_or_else(|| undefined(5))?, d.h_id_cell(m)).ok_or_else(|| undefined(5))?;
        let r7 = d.hcomp_cells(q2p.psi, d.h_id_cell(m)).ok_or_else(|| undefined(7))?;
        let r10 = d.hcomp_cells(d.h_id_cell(t2), q2.chi).ok_or_else(|| undefined(10))?;
        if d.bottom(r1) != d.top(r5) {
            return Err(undefined(2));
        }
        if d.bottom(r5) != d.top(r7) {
            return Err(undefined(6));
        }
        if d.bottom(r7) != d.top(r10) {
            return Err(undefined(8));
        }
        cells.push(d.vcomp_column(&[r1, r5, r7, r10]).ok_or_else(|| undefined(10))?);
    }
    let functor = DoubleFunctor {
        f0: FinFunctor::new_unchecked(cw.x0.clone(), d.x0.clone(), obj, vert),
        f1: FinFunctor::new_unchecked(cw.x1.clone(), d.x1.clone(), horiz, cells),
        dom: f.double.clone(),
        cod: d.clone(),
    };
    check_strict_functor(&functor)?;
    let j = inclusion_jc(f);
    let lifted = functor.after(&j);
    let components: Vec<Ob> = c.objects().map(|o| s.component(c.identity(o))).collect();
    let comparison = HorizontalTransformation {
        cells: c.objects().map(|o| d.h_id_cell(components[o])).collect(),
        components,
        source: lifted,
        target: s.g.clone(),
    };
    check_horizontal_transformation(&comparison)?;
    Ok(Lift { functor, comparison })
}

/// Checks a W-friendly horizontal transformation `(a, α)` between two
/// structures: both components are horizontal transformations and
/// `λ_w ∘ α_w = a_{D0 w} ∘ γ_w` for every `w`.
pub fn check_w_friendly_transformation(
    s1: &WFriendlyStructure,
    s2: &WFriendlyStructure,
    a: &HorizontalTransformation,
    alpha: &HorizontalTransformation,
) -> Result<(), CheckFailure> {
    check_horizontal_transformation(a)?;
    check_horizontal_transformation(alpha)?;
    let d = s1.target();
    let c = &s1.nabla.d0.cod;
    for (k, &w) in s1.nabla.objects.iter().enumerate() {
        let lhs = d.hcomp(s2.gamma.components[k], alpha.components[k]);
        let rhs = d.hcomp(a.components[c.src(w)], s1.gamma.components[k]);
        if lhs.is_none() || lhs != rhs {
            return Err(CheckFailure { equation: "λ_w ∘ α_w = a_{D0 w} ∘ γ_w".into(), at: c.arr_name(w).to_string() });
        }
    }
    Ok(())
}
