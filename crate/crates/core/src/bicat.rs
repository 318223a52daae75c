//! Finite bicategories, the fundamental bicategory of a weakly globular
//! double category, marked paths, and the bicategory of fractions.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dblcat::{require_wg, DblError, DoubleCategory, DEFAULT_NMAX};
use crate::fincat::{
    is_equivalence, pi0, Ar, ArrowDecl, CategoryBuilder, CategoryPresentation, EquivalenceVerdict, FinCatError,
    FinCategory, FinFunctor, Ob,
};
use crate::fractions::{build_fractions, check_fractions_conditions, FractionsDouble, FractionsError, FractionsPresentation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BicatError {
    #[error(transparent)]
    Category(#[from] FinCatError),
    #[error(transparent)]
    Double(#[from] DblError),
    #[error(transparent)]
    Fractions(#[from] FractionsError),
    #[error("unknown identifier `{0}`")]
    Unknown(String),
    #[error("malformed bicategory: {0}")]
    Malformed(String),
    #[error("missing composite: {0}")]
    CompositionMissing(String),
    #[error("interchange fails at {0}")]
    InterchangeViolation(String),
    #[error("naturality fails at {0}")]
    NaturalityViolation(String),
    #[error("coherence cell not invertible: {0}")]
    NotInvertible(String),
    #[error("pentagon fails at ({k}, {h}, {g}, {f})")]
    PentagonViolation { k: String, h: String, g: String, f: String },
    #[error("triangle fails at ({g}, {f})")]
    TriangleViolation { g: String, f: String },
    #[error("no invertible comparison cell found: {0}")]
    CoherenceSearchFailed(String),
    #[error("bicategory is neither strict nor locally posetal")]
    UnsupportedBicategory,
    #[error("maximal path length must be at least 1")]
    InvalidLength,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OneCell {
    pub name: String,
    pub src: Ob,
    pub tgt: Ob,
}

/// A finite bicategory. The 2-cells form one category whose objects are the
/// 1-cells; the hom-categories are its full subcategories on parallel 1-cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Bicategory {
    pub objects: Vec<String>,
    pub one_cells: Vec<OneCell>,
    /// Identity 1-cell of every object.
    pub identities: Vec<usize>,
    pub two_cells: Arc<FinCategory>,
    comp1: HashMap<(usize, usize), usize>,
    comp2: HashMap<(Ar, Ar), Ar>,
    associator: HashMap<(usize, usize, usize), Ar>,
    left_unitor: Vec<Ar>,
    right_unitor: Vec<Ar>,
    pub locally_posetal: bool,
}

/// Serialized bicategory. Omitted associator and unitor components default to
/// identity 2-cells; composites of identity 2-cells may be omitted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BicategoryPresentation {
    pub objects: Vec<String>,
    pub one_cells: Vec<ArrowDecl>,
    pub identities: BTreeMap<String, String>,
    /// Category of 2-cells under vertical composition; its objects are the 1-cells.
    pub two_cells: CategoryPresentation,
    /// `[g, f, g∘f]` for every composable pair of 1-cells.
    pub compose: Vec<[String; 3]>,
    /// `[β, α, β∘α]` for horizontally composable 2-cells.
    #[serde(default)]
    pub compose_cells: Vec<[String; 3]>,
    /// `[h, g, f, a]` with `a: (hg)f ⇒ h(gf)`.
    #[serde(default)]
    pub associator: Vec<[String; 4]>,
    #[serde(default)]
    pub left_unitor: BTreeMap<String, String>,
    #[serde(default)]
    pub right_unitor: BTreeMap<String, String>,
}

impl Bicategory {
    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn one_cell_count(&self) -> usize {
        self.one_cells.len()
    }

    pub fn two_cell_count(&self) -> usize {
        self.two_cells.arr_count()
    }

    pub fn src(&self, f: usize) -> Ob {
        self.one_cells[f].src
    }

    pub fn tgt(&self, f: usize) -> Ob {
        self.one_cells[f].tgt
    }

    pub fn name(&self, f: usize) -> &str {
        &self.one_cells[f].name
    }

    pub fn cell_name(&self, a: Ar) -> &str {
        self.two_cells.arr_name(a)
    }

    pub fn one_cell_by_name(&self, n: &str) -> Option<usize> {
        self.one_cells.iter().position(|c| c.name == n)
    }

    /// `g∘f`.
    pub fn compose1(&self, g: usize, f: usize) -> Option<usize> {
        self.comp1.get(&(g, f)).copied()
    }

    /// Horizontal composite `β∗α` (`α` first).
    pub fn compose2(&self, b: Ar, a: Ar) -> Option<Ar> {
        self.comp2.get(&(b, a)).copied()
    }

    /// Vertical composite `β·α`.
    pub fn vcompose2(&self, b: Ar, a: Ar) -> Option<Ar> {
        self.two_cells.compose(b, a)
    }

    pub fn id2(&self, f: usize) -> Ar {
        self.two_cells.identity(f)
    }

    pub fn associator(&self, h: usize, g: usize, f: usize) -> Option<Ar> {
        self.associator.get(&(h, g, f)).copied()
    }

    pub fn left_unitor(&self, f: usize) -> Ar {
        self.left_unitor[f]
    }

    pub fn right_unitor(&self, f: usize) -> Ar {
        self.right_unitor[f]
    }

    /// 1-cells from `a` to `b`.
    pub fn hom(&self, a: Ob, b: Ob) -> Vec<usize> {
        (0..self.one_cells.len()).filter(|&f| self.src(f) == a && self.tgt(f) == b).collect()
    }

    /// The hom-category `B(a, b)` with its 1-cells and 2-cells.
    pub fn hom_category(&self, a: Ob, b: Ob) -> (FinCategory, Vec<usize>, Vec<Ar>) {
        let objs = self.hom(a, b);
        let (cat, arrs) = self.two_cells.full_subcategory(&objs);
        (cat, objs, arrs)
    }

    /// An invertible 2-cell `f ⇒ g`, identity first.
    pub fn iso_between(&self, f: usize, g: usize) -> Option<Ar> {
        if f == g {
            return Some(self.id2(f));
        }
        self.two_cells.hom(f, g).iter().copied().find(|&a| self.two_cells.is_iso(a))
    }

    /// Strictly associative and unital with identity coherence cells.
    pub fn is_strict(&self) -> bool {
        self.comp1.iter().all(|(&(g, f), &gf)| {
            let unital = (self.identities[self.tgt(g)] != g || gf == f) && (self.identities[self.src(f)] != f || gf == g);
            unital
        }) && self.associator.iter().all(|(&(h, g, f), &a)| {
            let l = self.compose1(self.compose1(h, g).unwrap(), f).unwrap();
            a == self.id2(l) && self.compose1(h, self.compose1(g, f).unwrap()) == Some(l)
        }) && (0..self.one_cells.len())
            .all(|f| self.left_unitor[f] == self.id2(f) && self.right_unitor[f] == self.id2(f))
    }

    fn composable_after(&self, f: usize) -> impl Iterator<Item = usize> + '_ {
        let t = self.tgt(f);
        (0..self.one_cells.len()).filter(move |&g| self.src(g) == t)
    }

    /// Checks every axiom; for locally posetal bicategories the equational
    /// axioms hold as soon as the cells exist, so only existence is checked.
    pub fn validate(&self) -> Result<(), BicatError> {
        let tc = &*self.two_cells;
        let n = self.one_cells.len();
        let bad = |m: String| Err(BicatError::Malformed(m));
        if tc.obj_count() != n {
            return bad("2-cell category must have the 1-cells as objects".into());
        }
        for c in &self.one_cells {
            if c.src >= self.objects.len() || c.tgt >= self.objects.len() {
                return bad(format!("1-cell {} has unknown endpoints", c.name));
            }
        }
        for (o, &i) in self.identities.iter().enumerate() {
            if self.src(i) != o || self.tgt(i) != o {
                return bad(format!("identity of {} has the wrong endpoints", self.objects[o]));
            }
        }
        for a in tc.arrows() {
            let (f, g) = (tc.src(a), tc.tgt(a));
            if self.src(f) != self.src(g) || self.tgt(f) != self.tgt(g) {
                return bad(format!("2-cell {} between non-parallel 1-cells", tc.arr_name(a)));
            }
        }
        for f in 0..n {
            for g in self.composable_after(f) {
                match self.compose1(g, f) {
                    Some(h) if self.src(h) == self.src(f) && self.tgt(h) == self.tgt(g) => {}
                    _ => return Err(BicatError::CompositionMissing(format!("{}∘{}", self.name(g), self.name(f)))),
                }
            }
        }
        for a in tc.arrows() {
            let (f, f2) = (tc.src(a), tc.tgt(a));
            for g in self.composable_after(f) {
                for &b in tc.out_arrows(g) {
                    let g2 = tc.tgt(b);
                    let ok = self.compose2(b, a).is_some_and(|c| {
                        Some(tc.src(c)) == self.compose1(g, f) && Some(tc.tgt(c)) == self.compose1(g2, f2)
                    });
                    if !ok {
                        return Err(BicatError::CompositionMissing(format!("{}∗{}", tc.arr_name(b), tc.arr_name(a))));
                    }
                }
            }
        }
        for f in 0..n {
            for g in self.composable_after(f) {
                for h in self.composable_after(g) {
                    let (hg, gf) = (self.compose1(h, g).unwrap(), self.compose1(g, f).unwrap());
                    let l = self.compose1(hg, f).unwrap();
                    let r = self.compose1(h, gf).unwrap();
                    let here = || format!("({}, {}, {})", self.name(h), self.name(g), self.name(f));
                    match self.associator(h, g, f) {
                        Some(a) if tc.src(a) == l && tc.tgt(a) == r => {
                            if !tc.is_iso(a) {
                                return Err(BicatError::NotInvertible(format!("associator at {}", here())));
                            }
                        }
                        _ => return Err(BicatError::CompositionMissing(format!("associator at {}", here()))),
                    }
                }
            }
            let lf = self.compose1(self.identities[self.tgt(f)], f).unwrap();
            let rf = self.compose1(f, self.identities[self.src(f)]).unwrap();
            let (l, r) = (self.left_unitor[f], self.right_unitor[f]);
            if tc.src(l) != lf || tc.tgt(l) != f || tc.src(r) != rf || tc.tgt(r) != f {
                return bad(format!("unitor at {} has the wrong boundary", self.name(f)));
            }
            if !tc.is_iso(l) || !tc.is_iso(r) {
                return Err(BicatError::NotInvertible(format!("unitor at {}", self.name(f))));
            }
        }
        if !self.locally_posetal {
            self.check_equations()?;
        }
        Ok(())
    }

    fn check_equations(&self) -> Result<(), BicatError> {
        let tc = &*self.two_cells;
        let n = self.one_cells.len();
        let c2 = |b: Ar, a: Ar| self.compose2(b, a).unwrap();
        let v2 = |b: Ar, a: Ar| tc.compose(b, a).unwrap();
        // functoriality of horizontal composition
        for f in 0..n {
            for g in self.composable_after(f) {
                if c2(self.id2(g), self.id2(f)) != self.id2(self.compose1(g, f).unwrap()) {
                    return Err(BicatError::InterchangeViolation(format!("identities {} {}", self.name(g), self.name(f))));
                }
            }
        }
        for a in tc.arrows() {
            for &a2 in tc.out_arrows(tc.tgt(a)) {
                for g in self.composable_after(tc.src(a)) {
                    for &b in tc.out_arrows(g) {
                        for &b2 in tc.out_arrows(tc.tgt(b)) {
                            if c2(v2(b2, b), v2(a2, a)) != v2(c2(b2, a2), c2(b, a)) {
                                return Err(BicatError::InterchangeViolation(format!(
                                    "({}, {}, {}, {})",
                                    tc.arr_name(b2),
                                    tc.arr_name(b),
                                    tc.arr_name(a2),
                                    tc.arr_name(a)
                                )));
                            }
                        }
                    }
                }
            }
        }
        // naturality of the coherence cells
        for a in tc.arrows() {
            let (f, f2) = (tc.src(a), tc.tgt(a));
            let i1 = self.id2(self.identities[self.tgt(f)]);
            let i0 = self.id2(self.identities[self.src(f)]);
            if v2(self.left_unitor[f2], c2(i1, a)) != v2(a, self.left_unitor[f])
                || v2(self.right_unitor[f2], c2(a, i0)) != v2(a, self.right_unitor[f])
            {
                return Err(BicatError::NaturalityViolation(format!("unitors at {}", tc.arr_name(a))));
            }
            for g in self.composable_after(f) {
                for &b in tc.out_arrows(g) {
                    let g2 = tc.tgt(b);
                    for h in self.composable_after(g) {
                        for &c in tc.out_arrows(h) {
                            let h2 = tc.tgt(c);
                            let lhs = v2(self.associator(h2, g2, f2).unwrap(), c2(c2(c, b), a));
                            let rhs = v2(c2(c, c2(b, a)), self.associator(h, g, f).unwrap());
                            if lhs != rhs {
                                return Err(BicatError::NaturalityViolation(format!(
                                    "associator at ({}, {}, {})",
                                    tc.arr_name(c),
                                    tc.arr_name(b),
                                    tc.arr_name(a)
                                )));
                            }
                        }
                    }
                }
            }
        }
        // pentagon and triangle
        for f in 0..n {
            for g in self.composable_after(f) {
                let gf = self.compose1(g, f).unwrap();
                let one = self.identities[self.tgt(f)];
                let lhs = v2(c2(self.id2(g), self.left_unitor[f]), self.associator(g, one, f).unwrap());
                let rhs = c2(self.right_unitor[g], self.id2(f));
                if lhs != rhs {
                    return Err(BicatError::TriangleViolation { g: self.name(g).into(), f: self.name(f).into() });
                }
                for h in self.composable_after(g) {
                    let (hg, hgf) = (self.compose1(h, g).unwrap(), self.compose1(h, gf).unwrap());
                    let _ = hgf;
                    for k in self.composable_after(h) {
                        let kh = self.compose1(k, h).unwrap();
                        let a = |x, y, z| self.associator(x, y, z).unwrap();
                        let lhs = v2(
                            c2(self.id2(k), a(h, g, f)),
                            v2(a(k, hg, f), c2(a(k, h, g), self.id2(f))),
                        );
                        let rhs = v2(a(k, h, gf), a(kh, g, f));
                        if lhs != rhs {
                            return Err(BicatError::PentagonViolation {
                                k: self.name(k).into(),
                                h: self.name(h).into(),
                                g: self.name(g).into(),
                                f: self.name(f).into(),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Every 1-cell `C(a,b)` becomes a 1-cell; only identity 2-cells.
    pub fn locally_discrete(c: &FinCategory) -> Bicategory {
        let names: Vec<String> = c.arrows().map(|a| c.arr_name(a).to_string()).collect();
        let two = FinCategory::discrete(&names);
        let mut comp1 = HashMap::new();
        let mut comp2 = HashMap::new();
        let mut associator = HashMap::new();
        for f in c.arrows() {
            for &g in c.out_arrows(c.tgt(f)) {
                let gf = c.compose(g, f).unwrap();
                comp1.insert((g, f), gf);
                comp2.insert((two.identity(g), two.identity(f)), two.identity(gf));
                for &h in c.out_arrows(c.tgt(g)) {
                    associator.insert((h, g, f), two.identity(c.compose(c.compose(h, g).unwrap(), f).unwrap()));
                }
            }
        }
        let units: Vec<Ar> = c.arrows().map(|a| two.identity(a)).collect();
        Bicategory {
            objects: c.objects().map(|o| c.obj_name(o).to_string()).collect(),
            one_cells: c.arrows().map(|a| OneCell { name: c.arr_name(a).into(), src: c.src(a), tgt: c.tgt(a) }).collect(),
            identities: c.objects().map(|o| c.identity(o)).collect(),
            two_cells: Arc::new(two),
            comp1,
            comp2,
            associator,
            left_unitor: units.clone(),
            right_unitor: units,
            locally_posetal: true,
        }
    }

    pub fn to_presentation(&self) -> BicategoryPresentation {
        let tc = &*self.two_cells;
        let mut compose: Vec<(usize, usize, usize)> = self.comp1.iter().map(|(&(g, f), &h)| (g, f, h)).collect();
        compose.sort_unstable();
        let mut cells: Vec<(Ar, Ar, Ar)> = self
            .comp2
            .iter()
            .filter(|((b, a), _)| !(tc.is_identity(*b) && tc.is_identity(*a)))
            .map(|(&(b, a), &c)| (b, a, c))
            .collect();
        cells.sort_unstable();
        let mut assoc: Vec<(usize, usize, usize, Ar)> = self
            .associator
            .iter()
            .filter(|(_, &a)| !tc.is_identity(a))
            .map(|(&(h, g, f), &a)| (h, g, f, a))
            .collect();
        assoc.sort_unstable();
        let unitor = |u: &[Ar]| {
            (0..self.one_cells.len())
                .filter(|&f| !tc.is_identity(u[f]))
                .map(|f| (self.name(f).to_string(), tc.arr_name(u[f]).to_string()))
                .collect()
        };
        BicategoryPresentation {
            objects: self.objects.clone(),
            one_cells: self
                .one_cells
                .iter()
                .map(|c| ArrowDecl { id: c.name.clone(), src: self.objects[c.src].clone(), tgt: self.objects[c.tgt].clone() })
                .collect(),
            identities: self
                .identities
                .iter()
                .enumerate()
                .map(|(o, &i)| (self.objects[o].clone(), self.name(i).to_string()))
                .collect(),
            two_cells: tc.to_presentation(),
            compose: compose.into_iter().map(|(g, f, h)| [g, f, h].map(|x| self.name(x).to_string())).collect(),
            compose_cells: cells.into_iter().map(|(b, a, c)| [b, a, c].map(|x| tc.arr_name(x).to_string())).collect(),
            associator: assoc
                .into_iter()
                .map(|(h, g, f, a)| {
                    [self.name(h).to_string(), self.name(g).to_string(), self.name(f).to_string(), tc.arr_name(a).to_string()]
                })
                .collect(),
            left_unitor: unitor(&self.left_unitor),
            right_unitor: unitor(&self.right_unitor),
        }
    }
}

fn infer_locally_posetal(tc: &FinCategory) -> bool {
    tc.is_posetal()
}

/// Parses and validates a serialized bicategory.
pub fn validate_bicategory(p: &BicategoryPresentation) -> Result<Bicategory, BicatError> {
    let objects = p.objects.clone();
    let obj = |n: &str| objects.iter().position(|o| o == n).ok_or_else(|| BicatError::Unknown(n.to_string()));
    let one_cells = p
        .one_cells
        .iter()
        .map(|d| Ok(OneCell { name: d.id.clone(), src: obj(&d.src)?, tgt: obj(&d.tgt)? }))
        .collect::<Result<Vec<_>, BicatError>>()?;
    let cell = |n: &str| one_cells.iter().position(|c| c.name == n).ok_or_else(|| BicatError::Unknown(n.to_string()));
    let mut identities = vec![None; objects.len()];
    for (o, i) in &p.identities {
        identities[obj(o)?] = Some(cell(i)?);
    }
    let identities = identities
        .into_iter()
        .enumerate()
        .map(|(o, i)| i.ok_or_else(|| BicatError::Malformed(format!("object {} has no identity", objects[o]))))
        .collect::<Result<Vec<_>, _>>()?;
    let tc = Arc::new(FinCategory::from_presentation(&p.two_cells)?);
    if tc.obj_count() != one_cells.len() || (0..one_cells.len()).any(|i| tc.obj_name(i) != one_cells[i].name) {
        return Err(BicatError::Malformed("2-cell category objects must list the 1-cells in order".into()));
    }
    let two = |n: &str| tc.arr_by_name(n).ok_or_else(|| BicatError::Unknown(n.to_string()));
    let mut comp1 = HashMap::new();
    for [g, f, h] in &p.compose {
        comp1.insert((cell(g)?, cell(f)?), cell(h)?);
    }
    let mut comp2 = HashMap::new();
    for [b, a, c] in &p.compose_cells {
        comp2.insert((two(b)?, two(a)?), two(c)?);
    }
    for (&(g, f), &h) in &comp1 {
        comp2.entry((tc.identity(g), tc.identity(f))).or_insert(tc.identity(h));
    }
    let mut associator = HashMap::new();
    for [h, g, f, a] in &p.associator {
        associator.insert((cell(h)?, cell(g)?, cell(f)?), two(a)?);
    }
    let n = one_cells.len();
    let cells_ref = &one_cells;
    let composable = |f: usize| (0..n).filter(move |&g| cells_ref[g].src == cells_ref[f].tgt);
    for f in 0..n {
        for g in composable(f) {
            for h in composable(g) {
                if associator.contains_key(&(h, g, f)) {
                    continue;
                }
                let l = comp1.get(&(g, f)).and_then(|&gf| comp1.get(&(h, gf)));
                let r = comp1.get(&(h, g)).and_then(|&hg| comp1.get(&(hg, f)));
                if let (Some(&l), Some(&r)) = (l, r) {
                    if l == r {
                        associator.insert((h, g, f), tc.identity(l));
                    }
                }
            }
        }
    }
    let unitor = |m: &BTreeMap<String, String>, left: bool| {
        (0..n)
            .map(|f| match m.get(&one_cells[f].name) {
                Some(a) => two(a),
                None => {
                    let id = if left { identities[one_cells[f].tgt] } else { identities[one_cells[f].src] };
                    let key = if left { (id, f) } else { (f, id) };
                    match comp1.get(&key) {
                        Some(&x) if x == f => Ok(tc.identity(f)),
                        _ => Err(BicatError::Malformed(format!("unitor at {} must be given", one_cells[f].name))),
                    }
                }
            })
            .collect::<Result<Vec<_>, _>>()
    };
    let left_unitor = unitor(&p.left_unitor, true)?;
    let right_unitor = unitor(&p.right_unitor, false)?;
    let b = Bicategory {
        locally_posetal: infer_locally_posetal(&tc),
        objects,
        one_cells,
        identities,
        two_cells: tc,
        comp1,
        comp2,
        associator,
        left_unitor,
        right_unitor,
    };
    b.validate()?;
    Ok(b)
}

/// Endo-1-cells with an invertible 2-cell to the identity.
pub fn quasi_units(b: &Bicategory) -> Vec<usize> {
    (0..b.one_cell_count())
        .filter(|&f| b.src(f) == b.tgt(f) && b.iso_between(f, b.identities[b.src(f)]).is_some())
        .collect()
}

/// 1-cells `f` with some `g` and invertible 2-cells `gf ≅ 1`, `fg ≅ 1`.
pub fn equivalences(b: &Bicategory) -> Vec<usize> {
    (0..b.one_cell_count()).filter(|&f| pseudo_inverse(b, f).is_some()).collect()
}

pub fn pseudo_inverse(b: &Bicategory, f: usize) -> Option<usize> {
    let (a, c) = (b.src(f), b.tgt(f));
    b.hom(c, a).into_iter().find(|&g| {
        b.iso_between(b.compose1(g, f).unwrap(), b.identities[a]).is_some()
            && b.iso_between(b.compose1(f, g).unwrap(), b.identities[c]).is_some()
    })
}

// ---- the fundamental bicategory --------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LiftOrder {
    /// Identity cells first, then declaration order.
    #[default]
    Canonical,
    Reversed,
}

/// A composite in `Bic X`: `g₃∘f₃` with vertically invertible cells
/// `f₃ ⇒ f`, `g₃ ⇒ g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChosenComposite {
    pub result: Ob,
    pub f3: Ob,
    pub phi_f: Ar,
    pub g3: Ob,
    pub phi_g: Ar,
}

/// `Bic X` together with the choices used to build it.
#[derive(Debug, Clone)]
pub struct FundamentalBicategory {
    pub bicat: Bicategory,
    /// Object of `X` ↦ object of `Bic X`.
    pub class_of: Vec<usize>,
    /// Least representative of every object.
    pub representative: Vec<Ob>,
    pub composites: HashMap<(Ob, Ob), ChosenComposite>,
}

fn invertible_into(d: &DoubleCategory, f: Ob, order: LiftOrder) -> Vec<Ar> {
    let mut cs: Vec<Ar> = d.x1.in_arrows(f).iter().copied().filter(|&c| c != d.h_id_cell(f) && d.x1.is_iso(c)).collect();
    if order == LiftOrder::Reversed {
        cs.reverse();
    }
    cs.insert(0, d.h_id_cell(f));
    cs
}

fn choose_composite(d: &DoubleCategory, g: Ob, f: Ob, order: LiftOrder) -> Option<ChosenComposite> {
    let (b1, b2) = (d.h_tgt(f), d.h_src(g));
    let fs = invertible_into(d, f, order);
    let gs = invertible_into(d, g, order);
    // keep g and lift f exactly, else keep f and lift g, else lift both
    for &pf in &fs {
        let f3 = d.top(pf);
        if d.h_tgt(f3) == b2 {
            return Some(ChosenComposite { result: d.hcomp(g, f3)?, f3, phi_f: pf, g3: g, phi_g: d.h_id_cell(g) });
        }
    }
    for &pg in &gs {
        let g3 = d.top(pg);
        if d.h_src(g3) == b1 {
            return Some(ChosenComposite { result: d.hcomp(g3, f)?, f3: f, phi_f: d.h_id_cell(f), g3, phi_g: pg });
        }
    }
    for &pf in &fs {
        for &pg in &gs {
            let (f3, g3) = (d.top(pf), d.top(pg));
            if d.h_tgt(f3) == d.h_src(g3) {
                return Some(ChosenComposite { result: d.hcomp(g3, f3)?, f3, phi_f: pf, g3, phi_g: pg });
            }
        }
    }
    None
}

/// `Bic X`: components of `X0` as objects, horizontals as 1-cells and double
/// cells as 2-cells, with composites computed from chosen lifts.
pub fn fundamental_bicategory(d: &DoubleCategory) -> Result<FundamentalBicategory, BicatError> {
    fundamental_bicategory_with(d, LiftOrder::Canonical, DEFAULT_NMAX)
}

/// As [`fundamental_bicategory`], with the lift order and the bound up to
/// which the Segal conditions are required.
pub fn fundamental_bicategory_with(
    d: &DoubleCategory,
    order: LiftOrder,
    nmax: usize,
) -> Result<FundamentalBicategory, BicatError> {
    require_wg(d, nmax)?;
    let part = pi0(&d.x0);
    let class_of = part.class_of.clone();
    let representative: Vec<Ob> = part.classes.iter().map(|c| c[0]).collect();
    let objects: Vec<String> = representative.iter().map(|&o| format!("[{}]", d.x0.obj_name(o))).collect();
    let one_cells: Vec<OneCell> = d
        .x1
        .objects()
        .map(|h| OneCell { name: d.x1.obj_name(h).to_string(), src: class_of[d.h_src(h)], tgt: class_of[d.h_tgt(h)] })
        .collect();
    let identities: Vec<usize> = representative.iter().map(|&o| d.h_id(o)).collect();
    let n = one_cells.len();
    let failed = |what: String| BicatError::CoherenceSearchFailed(what);
    let mut composites = HashMap::new();
    let mut comp1 = HashMap::new();
    for f in 0..n {
        for g in (0..n).filter(|&g| one_cells[g].src == one_cells[f].tgt) {
            let c = choose_composite(d, g, f, order)
                .ok_or_else(|| failed(format!("composite {}∘{}", d.x1.obj_name(g), d.x1.obj_name(f))))?;
            comp1.insert((g, f), c.result);
            composites.insert((g, f), c);
        }
    }
    let x1 = &d.x1;
    let mut comp2 = HashMap::new();
    for a in x1.arrows() {
        let (f, g) = (x1.src(a), x1.tgt(a));
        for h in (0..n).filter(|&h| one_cells[h].src == one_cells[f].tgt) {
            let k_targets: Vec<usize> = (0..n).filter(|&k| one_cells[k].src == one_cells[g].tgt).collect();
            for &b in x1.out_arrows(h) {
                let k = x1.tgt(b);
                debug_assert!(k_targets.contains(&k));
                let c6 = composites[&(h, f)];
                let c5 = composites[&(k, g)];
                let missing = || failed(format!("pasting for {}∗{}", x1.arr_name(b), x1.arr_name(a)));
                let left = d
                    .vcomp_column(&[c6.phi_f, a, d.vertical_inverse(c5.phi_f).ok_or_else(missing)?])
                    .ok_or_else(missing)?;
                let right = d
                    .vcomp_column(&[c6.phi_g, b, d.vertical_inverse(c5.phi_g).ok_or_else(missing)?])
                    .ok_or_else(missing)?;
                comp2.insert((b, a), d.hcomp_cells(right, left).ok_or_else(missing)?);
            }
        }
    }
    let iso = |top: Ob, bottom: Ob| -> Option<Ar> {
        if top == bottom {
            return Some(d.h_id_cell(top));
        }
        let mut cs: Vec<Ar> = x1.hom(top, bottom).iter().copied().filter(|&c| x1.is_iso(c)).collect();
        if order == LiftOrder::Reversed {
            cs.reverse();
        }
        cs.first().copied()
    };
    let mut associator = HashMap::new();
    for f in 0..n {
        for g in (0..n).filter(|&g| one_cells[g].src == one_cells[f].tgt) {
            for h in (0..n).filter(|&h| one_cells[h].src == one_cells[g].tgt) {
                let l = comp1[&(comp1[&(h, g)], f)];
                let r = comp1[&(h, comp1[&(g, f)])];
                let a = iso(l, r).ok_or_else(|| {
                    failed(format!("associator at ({}, {}, {})", x1.obj_name(h), x1.obj_name(g), x1.obj_name(f)))
                })?;
                associator.insert((h, g, f), a);
            }
        }
    }
    let mut left_unitor = Vec::with_capacity(n);
    let mut right_unitor = Vec::with_capacity(n);
    for f in 0..n {
        let lf = comp1[&(identities[one_cells[f].tgt], f)];
        let rf = comp1[&(f, identities[one_cells[f].src])];
        left_unitor.push(iso(lf, f).ok_or_else(|| failed(format!("left unitor at {}", x1.obj_name(f))))?);
        right_unitor.push(iso(rf, f).ok_or_else(|| failed(format!("right unitor at {}", x1.obj_name(f))))?);
    }
    let bicat = Bicategory {
        locally_posetal: infer_locally_posetal(x1),
        objects,
        one_cells,
        identities,
        two_cells: d.x1.clone(),
        comp1,
        comp2,
        associator,
        left_unitor,
        right_unitor,
    };
    bicat.validate()?;
    Ok(FundamentalBicategory { bicat, class_of, representative, composites })
}

// ---- marked paths ------------------------------------------------------------------

/// A composable path of 1-cells starting at `start`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Path {
    pub start: Ob,
    pub cells: Vec<usize>,
}

impl Path {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// The `i`-th object along the path.
    pub fn vertex(&self, b: &Bicategory, i: usize) -> Ob {
        if i == 0 {
            self.start
        } else {
            b.tgt(self.cells[i - 1])
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MarkedPathObject {
    pub path: usize,
    pub mark: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MarkedPathHArrow {
    pub path: usize,
    pub from: usize,
    pub to: usize,
}

/// `Dbl(B)` truncated at paths of length at most `max_len`.
#[derive(Debug, Clone)]
pub struct MarkedPathsDouble {
    pub bicategory: Arc<Bicategory>,
    pub max_len: usize,
    pub paths: Vec<Path>,
    pub objects: Vec<MarkedPathObject>,
    pub horizontals: Vec<MarkedPathHArrow>,
    /// Cell ↦ `(top, bottom, 2-cell of B)`.
    pub cells: Vec<(Ob, Ob, Ar)>,
    pub double: Arc<DoubleCategory>,
}

impl MarkedPathsDouble {
    /// Marked object of an object of `Dbl(B)`.
    pub fn marked(&self, o: Ob) -> Ob {
        let m = self.objects[o];
        self.paths[m.path].vertex(&self.bicategory, m.mark)
    }

    /// The chosen composite of the marked segment of a horizontal arrow.
    pub fn segment_composite(&self, h: Ob) -> usize {
        let m = self.horizontals[h];
        chosen_composite(&self.bicategory, &self.paths[m.path], m.from, m.to)
    }
}

/// Left-nested composite of the 1-cells between positions `i` and `j`.
pub fn chosen_composite(b: &Bicategory, p: &Path, i: usize, j: usize) -> usize {
    if i == j {
        return b.identities[p.vertex(b, i)];
    }
    let mut acc = p.cells[i];
    for &c in &p.cells[i + 1..j] {
        acc = b.compose1(c, acc).expect("composable path");
    }
    acc
}

fn path_name(b: &Bicategory, p: &Path) -> String {
    let cells: Vec<&str> = p.cells.iter().map(|&c| b.name(c)).collect();
    format!("{}|{}", b.objects[p.start], cells.join(","))
}

pub fn marked_paths_double(b: Arc<Bicategory>, max_len: usize) -> Result<MarkedPathsDouble, BicatError> {
    if max_len == 0 {
        return Err(BicatError::InvalidLength);
    }
    let strict = b.is_strict();
    if !strict && !b.locally_posetal {
        return Err(BicatError::UnsupportedBicategory);
    }
    let tc = &*b.two_cells;
    let mut paths: Vec<Path> = (0..b.object_count()).map(|o| Path { start: o, cells: vec![] }).collect();
    let mut frontier = paths.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for p in &frontier {
            let end = p.vertex(&b, p.len());
            for c in (0..b.one_cell_count()).filter(|&c| b.src(c) == end) {
                let mut q = p.clone();
                q.cells.push(c);
                next.push(q);
            }
        }
        paths.extend(next.iter().cloned());
        frontier = next;
    }
    let pname: Vec<String> = paths.iter().map(|p| path_name(&b, p)).collect();
    let mut objects = Vec::new();
    let mut object_of = HashMap::new();
    let mut b0 = CategoryBuilder::new();
    for (k, p) in paths.iter().enumerate() {
        for mark in 0..=p.len() {
            let o = b0.add_object(format!("({};{})", pname[k], mark))?;
            objects.push(MarkedPathObject { path: k, mark });
            object_of.insert((k, mark), o);
        }
    }
    let marked: Vec<Ob> = objects.iter().map(|m| paths[m.path].vertex(&b, m.mark)).collect();
    let mut by_marked: Vec<Vec<Ob>> = vec![vec![]; b.object_count()];
    for (o, &m) in marked.iter().enumerate() {
        by_marked[m].push(o);
    }
    let mut vertical_of = HashMap::new();
    for group in &by_marked {
        for &x in group {
            for &y in group {
                let v = b0.add_arrow(format!("{}~{}", b0_name(&objects, &pname, x), b0_name(&objects, &pname, y)), x, y)?;
                vertical_of.insert((x, y), v);
            }
        }
    }
    for o in 0..objects.len() {
        b0.set_identity(o, vertical_of[&(o, o)]);
    }
    for group in &by_marked {
        for &x in group {
            for &y in group {
                for &z in group {
                    b0.set_composite(vertical_of[&(y, z)], vertical_of[&(x, y)], vertical_of[&(x, z)])?;
                }
            }
        }
    }
    let x0 = Arc::new(b0.finish()?);

    let mut horizontals = Vec::new();
    let mut horizontal_of = HashMap::new();
    let mut b1 = CategoryBuilder::new();
    for (k, p) in paths.iter().enumerate() {
        for from in 0..=p.len() {
            for to in from..=p.len() {
                let h = b1.add_object(format!("({};{},{})", pname[k], from, to))?;
                horizontals.push(MarkedPathHArrow { path: k, from, to });
                horizontal_of.insert((k, from, to), h);
            }
        }
    }
    let comp: Vec<usize> = horizontals.iter().map(|h| chosen_composite(&b, &paths[h.path], h.from, h.to)).collect();
    let ends: Vec<(Ob, Ob)> = horizontals
        .iter()
        .map(|h| (paths[h.path].vertex(&b, h.from), paths[h.path].vertex(&b, h.to)))
        .collect();
    let mut by_ends: HashMap<(Ob, Ob), Vec<Ob>> = HashMap::new();
    for (h, &e) in ends.iter().enumerate() {
        by_ends.entry(e).or_default().push(h);
    }
    let mut cells = Vec::new();
    let mut cell_of: HashMap<(Ob, Ob, Ar), Ar> = HashMap::new();
    let hname = |h: Ob| {
        let m = horizontals[h];
        format!("({};{},{})", pname[m.path], m.from, m.to)
    };
    for top in 0..horizontals.len() {
        for &bottom in &by_ends[&ends[top]] {
            for &a in tc.hom(comp[top], comp[bottom]) {
                let k = b1.add_arrow(format!("[{}=>{}:{}]", hname(top), hname(bottom), tc.arr_name(a)), top, bottom)?;
                cells.push((top, bottom, a));
                cell_of.insert((top, bottom, a), k);
            }
        }
    }
    for h in 0..horizontals.len() {
        b1.set_identity(h, cell_of[&(h, h, tc.identity(comp[h]))]);
    }
    let mut cells_from: HashMap<Ob, Vec<Ar>> = HashMap::new();
    for (k, &(t, _, _)) in cells.iter().enumerate() {
        cells_from.entry(t).or_default().push(k);
    }
    for (k, &(t, bt, a)) in cells.iter().enumerate() {
        for &k2 in cells_from.get(&bt).map(Vec::as_slice).unwrap_or(&[]) {
            let (_, b2, a2) = cells[k2];
            let ac = tc.compose(a2, a).unwrap();
            b1.set_composite(k2, k, cell_of[&(t, b2, ac)])?;
        }
    }
    let x1 = Arc::new(b1.finish()?);
    let obj_from = |h: &MarkedPathHArrow| object_of[&(h.path, h.from)];
    let obj_to = |h: &MarkedPathHArrow| object_of[&(h.path, h.to)];
    let d0 = FinFunctor::new_unchecked(
        x1.clone(),
        x0.clone(),
        horizontals.iter().map(obj_from).collect(),
        cells.iter().map(|&(t, bt, _)| vertical_of[&(obj_from(&horizontals[t]), obj_from(&horizontals[bt]))]).collect(),
    );
    let d1 = FinFunctor::new_unchecked(
        x1.clone(),
        x0.clone(),
        horizontals.iter().map(obj_to).collect(),
        cells.iter().map(|&(t, bt, _)| vertical_of[&(obj_to(&horizontals[t]), obj_to(&horizontals[bt]))]).collect(),
    );
    let id_h = |o: Ob| horizontal_of[&(objects[o].path, objects[o].mark, objects[o].mark)];
    let s_arr: Vec<Ar> = (0..x0.arr_count())
        .map(|v| {
            let (x, y) = (x0.src(v), x0.tgt(v));
            cell_of[&(id_h(x), id_h(y), tc.identity(b.identities[marked[x]]))]
        })
        .collect();
    let s = FinFunctor::new_unchecked(x0.clone(), x1.clone(), (0..objects.len()).map(id_h).collect(), s_arr);
    let mut m_h = HashMap::new();
    for (f, hf) in horizontals.iter().enumerate() {
        let p = &paths[hf.path];
        for to in hf.to..=p.len() {
            let g = horizontal_of[&(hf.path, hf.to, to)];
            m_h.insert((g, f), horizontal_of[&(hf.path, hf.from, to)]);
        }
    }
    let mut by_left: HashMap<Ar, Vec<Ar>> = HashMap::new();
    let left_of: Vec<Ar> = (0..cells.len()).map(|k| d0.arr[k]).collect();
    for (k, &l) in left_of.iter().enumerate() {
        by_left.entry(l).or_default().push(k);
    }
    let mut m_c = HashMap::new();
    for (k, &(t, bt, a)) in cells.iter().enumerate() {
        let r = d1.arr[k];
        for &k2 in by_left.get(&r).map(Vec::as_slice).unwrap_or(&[]) {
            let (t2, b2, a2) = cells[k2];
            let (Some(&tt), Some(&bb)) = (m_h.get(&(t2, t)), m_h.get(&(b2, bt))) else { continue };
            let pasted = if strict {
                let c = b.compose2(a2, a).unwrap();
                if tc.src(c) != comp[tt] || tc.tgt(c) != comp[bb] {
                    return Err(BicatError::CompositionMissing(format!("chosen composite of {}", hname(tt))));
                }
                c
            } else {
                *tc.hom(comp[tt], comp[bb])
                    .first()
                    .ok_or_else(|| BicatError::CompositionMissing(format!("{} => {}", hname(tt), hname(bb))))?
            };
            m_c.insert((k2, k), cell_of[&(tt, bb, pasted)]);
        }
    }
    let double = Arc::new(DoubleCategory::new(x0, x1, d0, d1, s, m_h, m_c)?);
    Ok(MarkedPathsDouble { bicategory: b, max_len, paths, objects, horizontals, cells, double })
}

fn b0_name(objects: &[MarkedPathObject], pname: &[String], o: Ob) -> String {
    format!("({};{})", pname[objects[o].path], objects[o].mark)
}

// ---- the bicategory of fractions -------------------------------------------------------

/// `C(W⁻¹)`: spans `A ←w S →f B` with `w ∈ W` and at most one 2-cell between
/// two spans.
#[derive(Debug, Clone)]
pub struct SpanBicategory {
    pub bicat: Bicategory,
    /// 1-cell ↦ `(w, f)`.
    pub spans: Vec<(Ar, Ar)>,
    pub span_of: HashMap<(Ar, Ar), usize>,
}

/// Does a 2-cell `(w₁, f₁) ⇒ (w₂, f₂)` exist?
pub fn span_cell_exists(p: &FractionsPresentation, s1: (Ar, Ar), s2: (Ar, Ar)) -> bool {
    let c = &*p.base;
    let (w1, f1) = s1;
    let (w2, f2) = s2;
    c.objects().any(|t| {
        c.hom(t, c.src(w1)).iter().any(|&u1| {
            let a = c.compose(w1, u1).unwrap();
            p.in_w(a)
                && c.hom(t, c.src(w2))
                    .iter()
                    .any(|&u2| c.compose(w2, u2) == Some(a) && c.compose(f1, u1) == c.compose(f2, u2))
        })
    })
}

/// The least CF2 square `w f̄ = f w̄` for the cospan `(f, w)`, identities first.
pub fn least_square(p: &FractionsPresentation, f: Ar, w: Ar) -> Option<(Ar, Ar)> {
    let c = &*p.base;
    let mut ws: Vec<Ar> = p.w.iter().copied().filter(|&x| c.tgt(x) == c.src(f)).collect();
    ws.sort_by_key(|&x| !c.is_identity(x));
    ws.into_iter().find_map(|wb| {
        let fw = c.compose(f, wb).unwrap();
        c.hom(c.src(wb), c.src(w)).iter().copied().find(|&fb| c.compose(w, fb) == Some(fw)).map(|fb| (wb, fb))
    })
}

pub fn bicat_of_fractions(p: &FractionsPresentation) -> Result<SpanBicategory, BicatError> {
    let report = check_fractions_conditions(p);
    if !report.cf_passed {
        return Err(FractionsError::ConditionsFailed(format!("{report:?}")).into());
    }
    let c = &*p.base;
    let mut ws: Vec<Ar> = p.w.clone();
    ws.sort_by_key(|&x| !c.is_identity(x));
    let mut spans = Vec::new();
    let mut span_of = HashMap::new();
    for &w in &ws {
        for &f in c.out_arrows(c.src(w)) {
            span_of.insert((w, f), spans.len());
            spans.push((w, f));
        }
    }
    let name = |(w, f): (Ar, Ar)| format!("({},{})", c.arr_name(w), c.arr_name(f));
    let one_cells: Vec<OneCell> =
        spans.iter().map(|&(w, f)| OneCell { name: name((w, f)), src: c.tgt(w), tgt: c.tgt(f) }).collect();
    let identities: Vec<usize> = c.objects().map(|o| span_of[&(c.identity(o), c.identity(o))]).collect();
    let mut tb = CategoryBuilder::new();
    for s in &spans {
        tb.add_object(name(*s))?;
    }
    let mut rel = HashMap::new();
    for (i, &s1) in spans.iter().enumerate() {
        for (j, &s2) in spans.iter().enumerate() {
            if one_cells[i].src == one_cells[j].src && one_cells[i].tgt == one_cells[j].tgt && span_cell_exists(p, s1, s2) {
                let a = tb.add_arrow(format!("{}=>{}", name(s1), name(s2)), i, j)?;
                rel.insert((i, j), a);
            }
        }
    }
    for i in 0..spans.len() {
        let id = *rel.get(&(i, i)).ok_or_else(|| BicatError::Malformed(format!("no identity 2-cell on {}", name(spans[i]))))?;
        tb.set_identity(i, id);
    }
    let keys: Vec<(usize, usize)> = rel.keys().copied().collect();
    for &(i, j) in &keys {
        for &(j2, k) in &keys {
            if j2 == j {
                let ik = *rel.get(&(i, k)).ok_or_else(|| BicatError::CompositionMissing(format!("{} => {}", name(spans[i]), name(spans[k]))))?;
                tb.set_composite(rel[&(j, k)], rel[&(i, j)], ik)?;
            }
        }
    }
    let tc = Arc::new(tb.finish()?);
    let n = spans.len();
    let mut comp1 = HashMap::new();
    for s in 0..n {
        let (w1, f) = spans[s];
        for t in (0..n).filter(|&t| one_cells[t].src == one_cells[s].tgt) {
            let (w2, g) = spans[t];
            let (wb, fb) = least_square(p, f, w2)
                .ok_or_else(|| BicatError::CompositionMissing(format!("square for {}∘{}", name(spans[t]), name(spans[s]))))?;
            let composite = (c.compose(w1, wb).unwrap(), c.compose(g, fb).unwrap());
            comp1.insert((t, s), span_of[&composite]);
        }
    }
    let unique = |x: usize, y: usize| tc.hom(x, y).first().copied();
    let mut comp2 = HashMap::new();
    for a in tc.arrows() {
        for (&(t, s), &ts) in comp1.iter().filter(|((_, s), _)| *s == tc.src(a)) {
            let _ = (t, s);
            for &b in tc.out_arrows(t) {
                let target = comp1[&(tc.tgt(b), tc.tgt(a))];
                let cell = unique(ts, target)
                    .ok_or_else(|| BicatError::CompositionMissing(format!("{}∗{}", tc.arr_name(b), tc.arr_name(a))))?;
                comp2.insert((b, a), cell);
            }
        }
    }
    let iso = |x: usize, y: usize, what: String| {
        match (unique(x, y), unique(y, x)) {
            (Some(a), Some(_)) => Ok(a),
            _ => Err(BicatError::CoherenceSearchFailed(what)),
        }
    };
    let mut associator = HashMap::new();
    for f in 0..n {
        for g in (0..n).filter(|&g| one_cells[g].src == one_cells[f].tgt) {
            for h in (0..n).filter(|&h| one_cells[h].src == one_cells[g].tgt) {
                let l = comp1[&(comp1[&(h, g)], f)];
                let r = comp1[&(h, comp1[&(g, f)])];
                associator.insert((h, g, f), iso(l, r, format!("associator at ({}, {}, {})", h, g, f))?);
            }
        }
    }
    let mut left_unitor = Vec::new();
    let mut right_unitor = Vec::new();
    for f in 0..n {
        left_unitor.push(iso(comp1[&(identities[one_cells[f].tgt], f)], f, format!("left unitor {f}"))?);
        right_unitor.push(iso(comp1[&(f, identities[one_cells[f].src])], f, format!("right unitor {f}"))?);
    }
    let bicat = Bicategory {
        objects: c.objects().map(|o| c.obj_name(o).to_string()).collect(),
        one_cells,
        identities,
        locally_posetal: infer_locally_posetal(&tc),
        two_cells: tc,
        comp1,
        comp2,
        associator,
        left_unitor,
        right_unitor,
    };
    bicat.validate()?;
    Ok(SpanBicategory { bicat, spans, span_of })
}

// ---- the comparison ω ----------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaReport {
    /// `(component of C{W}, object of C)`.
    pub object_map: Vec<(String, String)>,
    pub objects_bijective: bool,
    pub hom_verdicts: Vec<((String, String), EquivalenceVerdict)>,
    pub units_strict: bool,
    pub composition_comparisons: bool,
    pub failures: Vec<String>,
    pub biequivalence: bool,
}

/// Builds `Bic(C{W})` and `C(W⁻¹)` and compares them along `ω`.
pub fn omega_comparison(p: &FractionsPresentation) -> Result<OmegaReport, BicatError> {
    let f = build_fractions(p)?;
    let bic = fundamental_bicategory(&f.double)?;
    let spans = bicat_of_fractions(p)?;
    Ok(compare_omega(&f, &bic, &spans))
}

pub fn compare_omega(f: &FractionsDouble, bic: &FundamentalBicategory, sb: &SpanBicategory) -> OmegaReport {
    let c = f.base();
    let b = &bic.bicat;
    let t = &sb.bicat;
    let mut failures = Vec::new();
    let omega0: Vec<Ob> = bic.representative.iter().map(|&o| c.tgt(f.objects[o])).collect();
    let mut hit = vec![0usize; c.obj_count()];
    for &o in &omega0 {
        hit[o] += 1;
    }
    let objects_bijective = hit.iter().all(|&k| k == 1);
    let omega1: Vec<usize> = f
        .horizontals
        .iter()
        .map(|&(i, a, j)| sb.span_of[&(f.objects[i], c.compose(f.objects[j], a).unwrap())])
        .collect();
    let units_strict = (0..b.object_count()).all(|x| omega1[b.identities[x]] == t.identities[omega0[x]]);
    if !units_strict {
        failures.push("ω₁ does not preserve identities".into());
    }
    let mut composition_comparisons = true;
    for ((g, h), &gh) in b.comp1.iter() {
        let lhs = t.compose1(omega1[*g], omega1[*h]).unwrap();
        if t.iso_between(lhs, omega1[gh]).is_none() {
            composition_comparisons = false;
            failures.push(format!("no comparison cell at ({}, {})", b.name(*g), b.name(*h)));
        }
    }
    let mut hom_verdicts = Vec::new();
    for x in 0..b.object_count() {
        for y in 0..b.object_count() {
            let (hcat, objs, arrs) = b.hom_category(x, y);
            let (tcat, tobjs, _) = t.hom_category(omega0[x], omega0[y]);
            let tcat = Arc::new(tcat);
            let local: HashMap<usize, Ob> = tobjs.iter().enumerate().map(|(i, &o)| (o, i)).collect();
            let obj: Vec<Ob> = objs.iter().map(|&h| local[&omega1[h]]).collect();
            let mut arr = Vec::with_capacity(arrs.len());
            let mut ok = true;
            for (k, _) in arrs.iter().enumerate() {
                let (s, tt) = (obj[hcat.src(k)], obj[hcat.tgt(k)]);
                match tcat.hom(s, tt).first() {
                    Some(&a) => arr.push(a),
                    None => {
                        ok = false;
                        arr.push(0);
                    }
                }
            }
            let names = (b.objects[x].clone(), t.objects[omega0[x].min(t.object_count() - 1)].clone());
            let names = (format!("{}→{}", names.0, b.objects[y]), format!("{}→{}", names.1, t.objects[omega0[y]]));
            let verdict = if ok {
                is_equivalence(&FinFunctor::new_unchecked(Arc::new(hcat), tcat, obj, arr))
            } else {
                failures.push(format!("ω₂ undefined on hom {}", names.0));
                EquivalenceVerdict::new(Some(("ω₂".into(), "undefined".into())), None)
            };
            hom_verdicts.push((names, verdict));
        }
    }
    let biequivalence = objects_bijective
        && units_strict
        && composition_comparisons
        && hom_verdicts.iter().all(|(_, v)| v.is_equivalence);
    OmegaReport {
        object_map: (0..b.object_count()).map(|x| (b.objects[x].clone(), c.obj_name(omega0[x]).to_string())).collect(),
        objects_bijective,
        hom_verdicts,
        units_strict,
        composition_comparisons,
        failures,
        biequivalence,
    }
}
