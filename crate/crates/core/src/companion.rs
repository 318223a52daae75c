//! Companions, conjoints, pre-companions and the double category of companions.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dblcat::{DblError, DoubleCategory, DoubleFunctor};
use crate::fincat::{Ar, CategoryBuilder, FinFunctor, Ob};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompanionError {
    #[error("vertical arrow `{0}` is not invertible")]
    VerticalNotInvertible(String),
    #[error("cell `{0}` is not vertically invertible")]
    CellNotInvertible(String),
    #[error("the given data is not a companion pair")]
    NotACompanion,
    #[error("no vertically invertible cell on the frame of {0}")]
    MissingLinkingCell(String),
    #[error(transparent)]
    Double(#[from] DblError),
}

/// A horizontal `f: A → B` and vertical `v: A → B` with binding cells
/// `ψ` (top `Id_A`, bottom `f`, sides `1_A`, `v`) and `χ` (top `f`,
/// bottom `Id_B`, sides `v`, `1_B`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CompanionPair {
    pub f: Ob,
    pub v: Ar,
    pub psi: Ar,
    pub chi: Ar,
}

/// A horizontal `u: B → A` and vertical `v: A → B` with binding cells
/// `α` (top `Id_A`, bottom `u`, sides `v`, `1_A`) and `β` (top `u`,
/// bottom `Id_B`, sides `1_B`, `v`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConjointPair {
    pub u: Ob,
    pub v: Ar,
    pub alpha: Ar,
    pub beta: Ar,
}

fn frame_ok(d: &DoubleCategory, c: Ar, top: Ob, bottom: Ob, left: Ar, right: Ar) -> bool {
    d.top(c) == top && d.bottom(c) == bottom && d.left(c) == left && d.right(c) == right
}

/// Checks boundaries and both binding equations.
pub fn verify_companion(d: &DoubleCategory, p: &CompanionPair) -> bool {
    let (a, b) = (d.h_src(p.f), d.h_tgt(p.f));
    d.x0.src(p.v) == a
        && d.x0.tgt(p.v) == b
        && frame_ok(d, p.psi, d.h_id(a), p.f, d.x0.identity(a), p.v)
        && frame_ok(d, p.chi, p.f, d.h_id(b), p.v, d.x0.identity(b))
        && d.hcomp_cells(p.chi, p.psi) == Some(d.h_id_cell(p.f))
        && d.vcomp(p.chi, p.psi) == Some(d.v_id_cell(p.v))
}

pub fn verify_conjoint(d: &DoubleCategory, p: &ConjointPair) -> bool {
    let (b, a) = (d.h_src(p.u), d.h_tgt(p.u));
    d.x0.src(p.v) == a
        && d.x0.tgt(p.v) == b
        && frame_ok(d, p.alpha, d.h_id(a), p.u, p.v, d.x0.identity(a))
        && frame_ok(d, p.beta, p.u, d.h_id(b), d.x0.identity(b), p.v)
        && d.hcomp_cells(p.alpha, p.beta) == Some(d.h_id_cell(p.u))
        && d.vcomp(p.beta, p.alpha) == Some(d.v_id_cell(p.v))
}

/// All companion pairs with horizontal `f`, ordered by `(v, ψ, χ)`.
pub fn companions_of(d: &DoubleCategory, f: Ob) -> Vec<CompanionPair> {
    let (a, b) = (d.h_src(f), d.h_tgt(f));
    let mut out = Vec::new();
    for &v in d.x0.hom(a, b) {
        for psi in d.cells_on_frame(d.h_id(a), f, d.x0.identity(a), v) {
            for chi in d.cells_on_frame(f, d.h_id(b), v, d.x0.identity(b)) {
                let p = CompanionPair { f, v, psi, chi };
                if verify_companion(d, &p) {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// The least companion witness of `f`, if any.
pub fn find_companion(d: &DoubleCategory, f: Ob) -> Option<CompanionPair> {
    companions_of(d, f).into_iter().next()
}

/// The least companion pair whose vertical arrow is `v`.
pub fn find_companion_of_vertical(d: &DoubleCategory, v: Ar) -> Option<CompanionPair> {
    let a = d.x0.src(v);
    let b = d.x0.tgt(v);
    d.horizontals_from(a)
        .iter()
        .filter(|&&f| d.h_tgt(f) == b)
        .find_map(|&f| companions_of(d, f).into_iter().find(|p| p.v == v))
}

pub fn conjoints_of(d: &DoubleCategory, u: Ob) -> Vec<ConjointPair> {
    let (b, a) = (d.h_src(u), d.h_tgt(u));
    let mut out = Vec::new();
    for &v in d.x0.hom(a, b) {
        for alpha in d.cells_on_frame(d.h_id(a), u, v, d.x0.identity(a)) {
            for beta in d.cells_on_frame(u, d.h_id(b), d.x0.identity(b), v) {
                let p = ConjointPair { u, v, alpha, beta };
                if verify_conjoint(d, &p) {
                    out.push(p);
                }
            }
        }
    }
    out
}

pub fn find_conjoint(d: &DoubleCategory, u: Ob) -> Option<ConjointPair> {
    conjoints_of(d, u).into_iter().next()
}

/// The least conjoint pair whose vertical arrow is `v`.
pub fn find_conjoint_of_vertical(d: &DoubleCategory, v: Ar) -> Option<ConjointPair> {
    let a = d.x0.src(v);
    let b = d.x0.tgt(v);
    d.horizontals_from(b)
        .iter()
        .filter(|&&u| d.h_tgt(u) == a)
        .find_map(|&u| conjoints_of(d, u).into_iter().find(|p| p.v == v))
}

/// The conjoint obtained by inverting a companion pair vertically.
pub fn conjoint_from_companion(d: &DoubleCategory, p: &CompanionPair) -> Result<ConjointPair, CompanionError> {
    if !verify_companion(d, p) {
        return Err(CompanionError::NotACompanion);
    }
    let v = d
        .x0
        .inverse(p.v)
        .ok_or_else(|| CompanionError::VerticalNotInvertible(d.x0.arr_name(p.v).to_string()))?;
    let inv = |c: Ar| d.vertical_inverse(c).ok_or_else(|| CompanionError::CellNotInvertible(d.x1.arr_name(c).to_string()));
    let q = ConjointPair { u: p.f, v, alpha: inv(p.chi)?, beta: inv(p.psi)? };
    debug_assert!(verify_conjoint(d, &q));
    Ok(q)
}

/// The image of a companion pair under a strict double functor.
pub fn map_companion(f: &DoubleFunctor, p: &CompanionPair) -> CompanionPair {
    CompanionPair { f: f.horiz(p.f), v: f.vert(p.v), psi: f.cell(p.psi), chi: f.cell(p.chi) }
}

// ---- pre-companions --------------------------------------------------------

/// Left data: `φ: f ⇒ f′` vertically invertible and `r` with `r ∘ f′` a companion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeftPreCompanion {
    pub phi: Ar,
    pub f_prime: Ob,
    pub r: Ob,
    pub companion: CompanionPair,
}

/// Right data: `φ′: f ⇒ f″` vertically invertible and `l` with `f″ ∘ l` a companion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RightPreCompanion {
    pub phi: Ar,
    pub f_second: Ob,
    pub l: Ob,
    pub companion: CompanionPair,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreCompanionWitness {
    pub left: LeftPreCompanion,
    pub right: RightPreCompanion,
    /// Vertically invertible cell with top `r` and bottom `l`.
    pub link: Ar,
}

/// Caches companion searches over one double category.
pub struct CompanionOracle<'a> {
    d: &'a DoubleCategory,
    cache: std::cell::RefCell<HashMap<Ob, Option<CompanionPair>>>,
}

impl<'a> CompanionOracle<'a> {
    pub fn new(d: &'a DoubleCategory) -> Self {
        CompanionOracle { d, cache: Default::default() }
    }

    pub fn companion(&self, f: Ob) -> Option<CompanionPair> {
        *self.cache.borrow_mut().entry(f).or_insert_with(|| find_companion(self.d, f))
    }

    pub fn left_data(&self, f: Ob) -> Vec<LeftPreCompanion> {
        let d = self.d;
        let mut out = Vec::new();
        for &phi in d.x1.out_arrows(f) {
            if !d.is_vertically_invertible(phi) {
                continue;
            }
            let f_prime = d.bottom(phi);
            for &r in d.horizontals_from(d.h_tgt(f_prime)) {
                let rf = d.hcomp(r, f_prime).expect("composable");
                if let Some(companion) = self.companion(rf) {
                    out.push(LeftPreCompanion { phi, f_prime, r, companion });
                }
            }
        }
        out
    }

    pub fn right_data(&self, f: Ob) -> Vec<RightPreCompanion> {
        let d = self.d;
        let mut out = Vec::new();
        for &phi in d.x1.out_arrows(f) {
            if !d.is_vertically_invertible(phi) {
                continue;
            }
            let f_second = d.bottom(phi);
            for l in d.x1.objects().filter(|&l| d.h_tgt(l) == d.h_src(f_second)) {
                let fl = d.hcomp(f_second, l).expect("composable");
                if let Some(companion) = self.companion(fl) {
                    out.push(RightPreCompanion { phi, f_second, l, companion });
                }
            }
        }
        out
    }

    /// The linking cell between left and right data: the least vertically
    /// invertible cell with top `r`, bottom `l` and the sides obtained from
    /// the inverses of the structure verticals.
    pub fn link(&self, left: &LeftPreCompanion, right: &RightPreCompanion) -> Result<Ar, CompanionError> {
        let d = self.d;
        let x0 = &*d.x0;
        let inv = |v: Ar| x0.inverse(v).ok_or_else(|| CompanionError::VerticalNotInvertible(x0.arr_name(v).to_string()));
        // x = (v^l)⁻¹ · d1φ′ · (d1φ)⁻¹ and y = d0φ′ · (d0φ)⁻¹ · (v^r)⁻¹
        let x = x0
            .compose_path(&[inv(d.right(left.phi))?, d.right(right.phi), inv(right.companion.v)?])
            .expect("composable");
        let y = x0
            .compose_path(&[inv(left.companion.v)?, inv(d.left(left.phi))?, d.left(right.phi)])
            .expect("composable");
        d.cells_on_frame(left.r, right.l, x, y)
            .find(|&c| d.is_vertically_invertible(c))
            .ok_or_else(|| CompanionError::MissingLinkingCell(d.x1.obj_name(left.r).to_string()))
    }

    pub fn precompanion(&self, f: Ob) -> Result<Option<PreCompanionWitness>, CompanionError> {
        let Some(left) = self.left_data(f).into_iter().next() else { return Ok(None) };
        let Some(right) = self.right_data(f).into_iter().next() else { return Ok(None) };
        let link = self.link(&left, &right)?;
        Ok(Some(PreCompanionWitness { left, right, link }))
    }
}

/// Searches a pre-companion structure on `f`; fails only if the linking cell
/// is missing, which cannot happen on weakly globular input.
pub fn is_precompanion(d: &DoubleCategory, f: Ob) -> Result<Option<PreCompanionWitness>, CompanionError> {
    CompanionOracle::new(d).precompanion(f)
}

/// Comparison cells `r₁ ⇒ r₂` and `l₁ ⇒ l₂` between two pre-companion
/// structures, built from the four linking cells.
pub fn compare_precompanions(
    d: &DoubleCategory,
    w1: &PreCompanionWitness,
    w2: &PreCompanionWitness,
) -> Result<(Ar, Ar), CompanionError> {
    let oracle = CompanionOracle::new(d);
    let nu11 = oracle.link(&w1.left, &w1.right)?;
    let nu21 = oracle.link(&w2.left, &w1.right)?;
    let nu22 = oracle.link(&w2.left, &w2.right)?;
    let nu21_inv = d
        .vertical_inverse(nu21)
        .ok_or_else(|| CompanionError::CellNotInvertible(d.x1.arr_name(nu21).to_string()))?;
    let on_r = d.vcomp(nu21_inv, nu11).expect("r₁ ⇒ l₁ ⇒ r₂");
    let on_l = d.vcomp(nu22, nu21_inv).expect("l₁ ⇒ r₂ ⇒ l₂");
    Ok((on_r, on_l))
}

// ---- the double category of companions ---------------------------------------

/// The double category of companions with decoding tables.
#[derive(Debug, Clone)]
pub struct CompDouble {
    pub base: Arc<DoubleCategory>,
    pub double: Arc<DoubleCategory>,
    /// Vertical arrow ↦ companion quadruple in the base.
    pub quadruples: Vec<CompanionPair>,
    pub quadruple_index: HashMap<CompanionPair, Ar>,
    /// Cell ↦ `(Θ, θ, θ′)`.
    pub cells: Vec<(Ar, Ar, Ar)>,
}

impl CompDouble {
    pub fn vertical_of(&self, p: &CompanionPair) -> Option<Ar> {
        self.quadruple_index.get(p).copied()
    }

    /// First vertical arrow whose quadruple has the given horizontal and vertical.
    pub fn vertical_with(&self, f: Ob, v: Ar) -> Option<Ar> {
        self.quadruples.iter().position(|p| p.f == f && p.v == v)
    }

    pub fn cell_of(&self, theta: Ar, left: Ar, right: Ar) -> Option<Ar> {
        self.double
            .x1
            .in_arrows(self.base.bottom(theta))
            .iter()
            .copied()
            .find(|&c| self.cells[c] == (theta, left, right))
    }
}

/// Composite of companion quadruples, `q` first then `p`.
pub fn compose_quadruples(d: &DoubleCategory, p: &CompanionPair, q: &CompanionPair) -> Option<CompanionPair> {
    let f = d.hcomp(p.f, q.f)?;
    let v = d.x0.compose(p.v, q.v)?;
    let psi = d.vcomp(d.hcomp_cells(p.psi, d.h_id_cell(q.f))?, d.hcomp_cells(d.v_id_cell(q.v), q.psi)?)?;
    let chi = d.vcomp(d.hcomp_cells(p.chi, d.v_id_cell(p.v))?, d.hcomp_cells(d.h_id_cell(p.f), q.chi)?)?;
    Some(CompanionPair { f, v, psi, chi })
}

fn is_comp_cell(d: &DoubleCategory, theta: Ar, p: &CompanionPair, q: &CompanionPair) -> bool {
    let (f, g) = (d.top(theta), d.bottom(theta));
    d.left(theta) == p.v
        && d.right(theta) == q.v
        && d.hcomp(q.f, f) == d.hcomp(g, p.f)
        && d.hcomp_cells(q.chi, theta) == d.hcomp_cells(d.h_id_cell(g), p.chi)
        && d.hcomp_cells(theta, p.psi) == d.hcomp_cells(q.psi, d.h_id_cell(f))
}

/// Builds the double category of companions of `d` and validates it.
pub fn comp_double_category(d: Arc<DoubleCategory>) -> Result<CompDouble, CompanionError> {
    let mut quadruples = Vec::new();
    for f in d.x1.objects() {
        quadruples.extend(companions_of(&d, f));
    }
    // identities first so that they are easy to spot in dumps
    quadruples.sort_by_key(|p| (!d.x0.is_identity(p.v) || p.f != d.h_id(d.x0.src(p.v)), p.v, p.f, p.psi, p.chi));
    let quadruple_index: HashMap<CompanionPair, Ar> = quadruples.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let name = |p: &CompanionPair| {
        format!(
            "<{},{},{},{}>",
            d.x1.obj_name(p.f),
            d.x0.arr_name(p.v),
            d.x1.arr_name(p.psi),
            d.x1.arr_name(p.chi)
        )
    };
    let mut b0 = CategoryBuilder::new();
    for a in d.x0.objects() {
        b0.add_object(d.x0.obj_name(a)).map_err(DblError::from)?;
    }
    for p in &quadruples {
        b0.add_arrow(name(p), d.h_src(p.f), d.h_tgt(p.f)).map_err(DblError::from)?;
    }
    for a in d.x0.objects() {
        let id = CompanionPair { f: d.h_id(a), v: d.x0.identity(a), psi: d.iota(a), chi: d.iota(a) };
        let i = *quadruple_index.get(&id).ok_or(CompanionError::NotACompanion)?;
        b0.set_identity(a, i);
    }
    let mut by_src: HashMap<Ob, Vec<Ar>> = HashMap::new();
    for (i, p) in quadruples.iter().enumerate() {
        by_src.entry(d.h_src(p.f)).or_default().push(i);
    }
    let comp_q = |p: &CompanionPair, q: &CompanionPair| -> Result<Ar, CompanionError> {
        let r = compose_quadruples(&d, p, q).ok_or(CompanionError::NotACompanion)?;
        quadruple_index.get(&r).copied().ok_or(CompanionError::NotACompanion)
    };
    for (i, q) in quadruples.iter().enumerate() {
        for &j in by_src.get(&d.h_tgt(q.f)).map(Vec::as_slice).unwrap_or(&[]) {
            b0.set_composite(j, i, comp_q(&quadruples[j], q)?).map_err(DblError::from)?;
        }
    }
    let x0 = Arc::new(b0.finish().map_err(DblError::from)?);
    // cells
    let mut by_v: HashMap<Ar, Vec<Ar>> = HashMap::new();
    for (i, p) in quadruples.iter().enumerate() {
        by_v.entry(p.v).or_default().push(i);
    }
    let mut cells = Vec::new();
    for theta in d.x1.arrows() {
        for &i in by_v.get(&d.left(theta)).map(Vec::as_slice).unwrap_or(&[]) {
            for &j in by_v.get(&d.right(theta)).map(Vec::as_slice).unwrap_or(&[]) {
                if is_comp_cell(&d, theta, &quadruples[i], &quadruples[j]) {
                    cells.push((theta, i, j));
                }
            }
        }
    }
    let cell_index: HashMap<(Ar, Ar, Ar), Ar> = cells.iter().enumerate().map(|(k, c)| (*c, k)).collect();
    let mut b1 = CategoryBuilder::new();
    for h in d.x1.objects() {
        b1.add_object(d.x1.obj_name(h)).map_err(DblError::from)?;
    }
    for &(theta, i, j) in &cells {
        b1.add_arrow(
            format!("[{};{};{}]", d.x1.arr_name(theta), x0.arr_name(i), x0.arr_name(j)),
            d.top(theta),
            d.bottom(theta),
        )
        .map_err(DblError::from)?;
    }
    let lookup = |c: (Ar, Ar, Ar)| cell_index.get(&c).copied().ok_or(CompanionError::NotACompanion);
    for h in d.x1.objects() {
        let a = d.h_src(h);
        let b = d.h_tgt(h);
        b1.set_identity(h, lookup((d.h_id_cell(h), x0.identity(a), x0.identity(b)))?);
    }
    let mut cells_by_top: HashMap<Ob, Vec<Ar>> = HashMap::new();
    for (k, c) in cells.iter().enumerate() {
        cells_by_top.entry(d.top(c.0)).or_default().push(k);
    }
    for (k, &(t1, i1, j1)) in cells.iter().enumerate() {
        for &l in cells_by_top.get(&d.bottom(t1)).map(Vec::as_slice).unwrap_or(&[]) {
            let (t2, i2, j2) = cells[l];
            let c = (
                d.vcomp(t2, t1).expect("stacked"),
                x0.compose(i2, i1).expect("stacked"),
                x0.compose(j2, j1).expect("stacked"),
            );
            b1.set_composite(l, k, lookup(c)?).map_err(DblError::from)?;
        }
    }
    let x1 = Arc::new(b1.finish().map_err(DblError::from)?);
    let d0 = FinFunctor::new_unchecked(
        x1.clone(),
        x0.clone(),
        d.x1.objects().map(|h| d.h_src(h)).collect(),
        cells.iter().map(|c| c.1).collect(),
    );
    let d1 = FinFunctor::new_unchecked(
        x1.clone(),
        x0.clone(),
        d.x1.objects().map(|h| d.h_tgt(h)).collect(),
        cells.iter().map(|c| c.2).collect(),
    );
    let s_arr = quadruples
        .iter()
        .enumerate()
        .map(|(i, p)| lookup((d.v_id_cell(p.v), i, i)))
        .collect::<Result<Vec<_>, _>>()?;
    let s = FinFunctor::new_unchecked(x0.clone(), x1.clone(), d.x0.objects().map(|a| d.h_id(a)).collect(), s_arr);
    let mut m_h = HashMap::new();
    for f in d.x1.objects() {
        for &g in d.horizontals_from(d.h_tgt(f)) {
            m_h.insert((g, f), d.hcomp(g, f).unwrap());
        }
    }
    let mut cells_by_left: HashMap<Ar, Vec<Ar>> = HashMap::new();
    for (k, c) in cells.iter().enumerate() {
        cells_by_left.entry(c.1).or_default().push(k);
    }
    let mut m_c = HashMap::new();
    for (k, &(t1, i1, j1)) in cells.iter().enumerate() {
        for &l in cells_by_left.get(&j1).map(Vec::as_slice).unwrap_or(&[]) {
            let (t2, _, j2) = cells[l];
            m_c.insert((l, k), lookup((d.hcomp_cells(t2, t1).expect("adjacent"), i1, j2))?);
        }
    }
    let double = Arc::new(DoubleCategory::new(x0, x1, d0, d1, s, m_h, m_c)?);
    Ok(CompDouble { base: d, double, quadruples, quadruple_index, cells })
}
