//! Finite categories given by explicit tables.
//!
//! Objects and arrows are interned: every [`FinCategory`] stores them as dense
//! indices in declaration order, with the string identifiers kept alongside for
//! reporting and serialization. "Least" in every search of this crate means
//! "first in declaration order".

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of an object in a [`FinCategory`].
pub type Ob = usize;
/// Index of an arrow in a [`FinCategory`].
pub type Ar = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinCatError {
    #[error("duplicate identifier `{0}`")]
    Duplicate(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("object `{0}` has no identity arrow")]
    MissingIdentity(String),
    #[error("identity `{arrow}` of `{object}` is not an endo-arrow on it")]
    BadIdentity { object: String, arrow: String },
    #[error("missing composite {g} ∘ {f}")]
    MissingComposite { g: String, f: String },
    #[error("composite {g} ∘ {f} is listed but the arrows are not composable")]
    NotComposable { g: String, f: String },
    #[error("composite {g} ∘ {f} = {h} has the wrong endpoints")]
    CompositeEndpoints { g: String, f: String, h: String },
    #[error("conflicting entries for {g} ∘ {f}: `{first}` and `{second}`")]
    ConflictingComposite { g: String, f: String, first: String, second: String },
    #[error("identity law fails: `{identity}` composed with `{arrow}`")]
    IdentityViolation { identity: String, arrow: String },
    #[error("associativity fails on the triple ({h}, {g}, {f})")]
    AssociativityViolation { h: String, g: String, f: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FunctorError {
    #[error("object map is not total: {0}")]
    ObjectMap(String),
    #[error("arrow map is not total: {0}")]
    ArrowMap(String),
    #[error("arrow `{arrow}` is not sent to an arrow between the images of its endpoints")]
    Endpoints { arrow: String },
    #[error("identity of `{object}` is not preserved")]
    Identity { object: String },
    #[error("composite {g} ∘ {f} is not preserved")]
    Composition { g: String, f: String },
    #[error("functors are not composable")]
    NotComposable,
}

/// Serialized form of a finite category.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryPresentation {
    pub objects: Vec<String>,
    pub arrows: Vec<ArrowDecl>,
    pub identities: BTreeMap<String, String>,
    /// Entries `[g, f, g∘f]`. Composites with an identity may be left out.
    #[serde(default)]
    pub compose: Vec<[String; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowDecl {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

/// Incremental construction of a [`FinCategory`].
///
/// Composites with identities are filled in by [`CategoryBuilder::finish`] when
/// they were not set explicitly; every other composite must be supplied.
#[derive(Debug, Default, Clone)]
pub struct CategoryBuilder {
    obj_names: Vec<String>,
    obj_index: HashMap<String, Ob>,
    arr_names: Vec<String>,
    arr_index: HashMap<String, Ar>,
    src: Vec<Ob>,
    tgt: Vec<Ob>,
    ident: Vec<Option<Ar>>,
    comp: HashMap<(Ar, Ar), Ar>,
}

impl CategoryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_object(&mut self, name: impl Into<String>) -> Result<Ob, FinCatError> {
        let name = name.into();
        if self.obj_index.contains_key(&name) {
            return Err(FinCatError::Duplicate(name));
        }
        let ob = self.obj_names.len();
        self.obj_index.insert(name.clone(), ob);
        self.obj_names.push(name);
        self.ident.push(None);
        Ok(ob)
    }

    pub fn add_arrow(&mut self, name: impl Into<String>, src: Ob, tgt: Ob) -> Result<Ar, FinCatError> {
        let name = name.into();
        if self.arr_index.contains_key(&name) {
            return Err(FinCatError::Duplicate(name));
        }
        let ar = self.arr_names.len();
        self.arr_index.insert(name.clone(), ar);
        self.arr_names.push(name);
        self.src.push(src);
        self.tgt.push(tgt);
        Ok(ar)
    }

    /// Adds an arrow and records it as the identity of `ob`.
    pub fn add_identity(&mut self, name: impl Into<String>, ob: Ob) -> Result<Ar, FinCatError> {
        let ar = self.add_arrow(name, ob, ob)?;
        self.ident[ob] = Some(ar);
        Ok(ar)
    }

    pub fn set_identity(&mut self, ob: Ob, ar: Ar) {
        self.ident[ob] = Some(ar);
    }

    pub fn object_count(&self) -> usize {
        self.obj_names.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arr_names.len()
    }

    pub fn object(&self, name: &str) -> Option<Ob> {
        self.obj_index.get(name).copied()
    }

    pub fn arrow(&self, name: &str) -> Option<Ar> {
        self.arr_index.get(name).copied()
    }

    /// Records `g ∘ f = h`.
    pub fn set_composite(&mut self, g: Ar, f: Ar, h: Ar) -> Result<(), FinCatError> {
        if self.tgt[f] != self.src[g] {
            return Err(FinCatError::NotComposable {
                g: self.arr_names[g].clone(),
                f: self.arr_names[f].clone(),
            });
        }
        if self.src[h] != self.src[f] || self.tgt[h] != self.tgt[g] {
            return Err(FinCatError::CompositeEndpoints {
                g: self.arr_names[g].clone(),
                f: self.arr_names[f].clone(),
                h: self.arr_names[h].clone(),
            });
        }
        if let Some(&prev) = self.comp.get(&(g, f)) {
            if prev != h {
                return Err(FinCatError::ConflictingComposite {
                    g: self.arr_names[g].clone(),
                    f: self.arr_names[f].clone(),
                    first: self.arr_names[prev].clone(),
                    second: self.arr_names[h].clone(),
                });
            }
        }
        self.comp.insert((g, f), h);
        Ok(())
    }

    fn complete(self) -> Result<FinCategory, FinCatError> {
        let mut ident = Vec::with_capacity(self.ident.len());
        for (ob, id) in self.ident.iter().enumerate() {
            let id = id.ok_or_else(|| FinCatError::MissingIdentity(self.obj_names[ob].clone()))?;
            if self.src[id] != ob || self.tgt[id] != ob {
                return Err(FinCatError::BadIdentity {
                    object: self.obj_names[ob].clone(),
                    arrow: self.arr_names[id].clone(),
                });
            }
            ident.push(id);
        }
        let mut comp = self.comp;
        for f in 0..self.arr_names.len() {
            let left = ident[self.tgt[f]];
            let right = ident[self.src[f]];
            for key in [(left, f), (f, right)] {
                match comp.get(&key) {
                    None => {
                        comp.insert(key, f);
                    }
                    Some(&h) if h == f => {}
                    Some(_) => {
                        let identity = if key.0 == f { key.1 } else { key.0 };
                        return Err(FinCatError::IdentityViolation {
                            identity: self.arr_names[identity].clone(),
                            arrow: self.arr_names[f].clone(),
                        });
                    }
                }
            }
        }
        Ok(FinCategory::assemble(
            self.obj_names,
            self.obj_index,
            self.arr_names,
            self.arr_index,
            self.src,
            self.tgt,
            ident,
            comp,
        ))
    }

    /// Completes identity composites and checks totality, identity laws and
    /// associativity.
    pub fn finish(self) -> Result<FinCategory, FinCatError> {
        let cat = self.complete()?;
        cat.check_laws()?;
        Ok(cat)
    }

    /// Completes identity composites and checks totality only.
    ///
    /// For categories assembled componentwise from valid ones (pullbacks,
    /// fibre powers) associativity is inherited, and re-checking it is cubic.
    pub fn finish_total(self) -> Result<FinCategory, FinCatError> {
        let cat = self.complete()?;
        cat.check_total()?;
        Ok(cat)
    }
}

/// A finite category with a total composition table.
#[derive(Clone)]
pub struct FinCategory {
    obj_names: Vec<String>,
    obj_index: HashMap<String, Ob>,
    arr_names: Vec<String>,
    arr_index: HashMap<String, Ar>,
    src: Vec<Ob>,
    tgt: Vec<Ob>,
    ident: Vec<Ar>,
    comp: HashMap<(Ar, Ar), Ar>,
    out_arrows: Vec<Vec<Ar>>,
    in_arrows: Vec<Vec<Ar>>,
    hom: HashMap<(Ob, Ob), Vec<Ar>>,
    inverses: OnceLock<Vec<Option<Ar>>>,
}

impl fmt::Debug for FinCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinCategory")
            .field("objects", &self.obj_names.len())
            .field("arrows", &self.arr_names.len())
            .finish()
    }
}

impl PartialEq for FinCategory {
    fn eq(&self, other: &Self) -> bool {
        self.obj_names == other.obj_names
            && self.arr_names == other.arr_names
            && self.src == other.src
            && self.tgt == other.tgt
            && self.ident == other.ident
            && self.comp == other.comp
    }
}

impl Eq for FinCategory {}

impl FinCategory {
    #[allow(clippy::too_many_arguments)]
    fn assemble(
        obj_names: Vec<String>,
        obj_index: HashMap<String, Ob>,
        arr_names: Vec<String>,
        arr_index: HashMap<String, Ar>,
        src: Vec<Ob>,
        tgt: Vec<Ob>,
        ident: Vec<Ar>,
        comp: HashMap<(Ar, Ar), Ar>,
    ) -> Self {
        let n = obj_names.len();
        let mut out_arrows = vec![Vec::new(); n];
        let mut in_arrows = vec![Vec::new(); n];
        let mut hom: HashMap<(Ob, Ob), Vec<Ar>> = HashMap::new();
        for a in 0..arr_names.len() {
            out_arrows[src[a]].push(a);
            in_arrows[tgt[a]].push(a);
            hom.entry((src[a], tgt[a])).or_default().push(a);
        }
        FinCategory {
            obj_names,
            obj_index,
            arr_names,
            arr_index,
            src,
            tgt,
            ident,
            comp,
            out_arrows,
            in_arrows,
            hom,
            inverses: OnceLock::new(),
        }
    }

    /// Parses and validates a presentation.
    pub fn from_presentation(p: &CategoryPresentation) -> Result<Self, FinCatError> {
        let mut b = CategoryBuilder::new();
        for o in &p.objects {
            b.add_object(o.clone())?;
        }
        for a in &p.arrows {
            let s = b.object(&a.src).ok_or_else(|| FinCatError::UnknownObject(a.src.clone()))?;
            let t = b.object(&a.tgt).ok_or_else(|| FinCatError::UnknownObject(a.tgt.clone()))?;
            b.add_arrow(a.id.clone(), s, t)?;
        }
        for (o, a) in &p.identities {
            let ob = b.object(o).ok_or_else(|| FinCatError::UnknownObject(o.clone()))?;
            let ar = b.arrow(a).ok_or_else(|| FinCatError::UnknownArrow(a.clone()))?;
            b.set_identity(ob, ar);
        }
        for [g, f, h] in &p.compose {
            let look = |n: &String| b.arrow(n).ok_or_else(|| FinCatError::UnknownArrow(n.clone()));
            let (g, f, h) = (look(g)?, look(f)?, look(h)?);
            b.set_composite(g, f, h)?;
        }
        b.finish()
    }

    /// Emits a presentation; composites with identities are omitted.
    pub fn to_presentation(&self) -> CategoryPresentation {
        let mut entries: Vec<(Ar, Ar, Ar)> = self
            .comp
            .iter()
            .filter(|((g, f), _)| !self.is_identity(*g) && !self.is_identity(*f))
            .map(|(&(g, f), &h)| (g, f, h))
            .collect();
        entries.sort_unstable();
        let compose = entries
            .into_iter()
            .map(|(g, f, h)| [g, f, h].map(|a| self.arr_names[a].clone()))
            .collect();
        CategoryPresentation {
            objects: self.obj_names.clone(),
            arrows: (0..self.arr_names.len())
                .map(|a| ArrowDecl {
                    id: self.arr_names[a].clone(),
                    src: self.obj_names[self.src[a]].clone(),
                    tgt: self.obj_names[self.tgt[a]].clone(),
                })
                .collect(),
            identities: (0..self.obj_names.len())
                .map(|o| (self.obj_names[o].clone(), self.arr_names[self.ident[o]].clone()))
                .collect(),
            compose,
        }
    }

    fn check_total(&self) -> Result<(), FinCatError> {
        for f in 0..self.arr_count() {
            for &g in &self.out_arrows[self.tgt[f]] {
                if !self.comp.contains_key(&(g, f)) {
                    return Err(FinCatError::MissingComposite {
                        g: self.arr_names[g].clone(),
                        f: self.arr_names[f].clone(),
                    });
                }
            }
        }
        Ok(())
    }

    fn check_laws(&self) -> Result<(), FinCatError> {
        self.check_total()?;
        if self.is_posetal() {
            // both bracketings land in a hom-set with one element
            return Ok(());
        }
        for f in 0..self.arr_count() {
            for &g in &self.out_arrows[self.tgt[f]] {
                let gf = self.comp[&(g, f)];
                for &h in &self.out_arrows[self.tgt[g]] {
                    let hg = self.comp[&(h, g)];
                    if self.comp[&(h, gf)] != self.comp[&(hg, f)] {
                        return Err(FinCatError::AssociativityViolation {
                            h: self.arr_names[h].clone(),
                            g: self.arr_names[g].clone(),
                            f: self.arr_names[f].clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn obj_count(&self) -> usize {
        self.obj_names.len()
    }

    pub fn arr_count(&self) -> usize {
        self.arr_names.len()
    }

    pub fn objects(&self) -> std::ops::Range<Ob> {
        0..self.obj_names.len()
    }

    pub fn arrows(&self) -> std::ops::Range<Ar> {
        0..self.arr_names.len()
    }

    pub fn obj_name(&self, o: Ob) -> &str {
        &self.obj_names[o]
    }

    pub fn arr_name(&self, a: Ar) -> &str {
        &self.arr_names[a]
    }

    pub fn obj_by_name(&self, name: &str) -> Option<Ob> {
        self.obj_index.get(name).copied()
    }

    pub fn arr_by_name(&self, name: &str) -> Option<Ar> {
        self.arr_index.get(name).copied()
    }

    pub fn src(&self, a: Ar) -> Ob {
        self.src[a]
    }

    pub fn tgt(&self, a: Ar) -> Ob {
        self.tgt[a]
    }

    pub fn identity(&self, o: Ob) -> Ar {
        self.ident[o]
    }

    pub fn is_identity(&self, a: Ar) -> bool {
        self.ident[self.src[a]] == a
    }

    /// `g ∘ f`, or `None` when `tgt f ≠ src g`.
    pub fn compose(&self, g: Ar, f: Ar) -> Option<Ar> {
        self.comp.get(&(g, f)).copied()
    }

    /// Composite of a path given in diagrammatic order (first arrow first).
    pub fn compose_path(&self, path: &[Ar]) -> Option<Ar> {
        let (&first, rest) = path.split_first()?;
        rest.iter().try_fold(first, |acc, &g| self.compose(g, acc))
    }

    pub fn hom(&self, a: Ob, b: Ob) -> &[Ar] {
        self.hom.get(&(a, b)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn out_arrows(&self, o: Ob) -> &[Ar] {
        &self.out_arrows[o]
    }

    pub fn in_arrows(&self, o: Ob) -> &[Ar] {
        &self.in_arrows[o]
    }

    pub fn composition_entries(&self) -> usize {
        self.comp.len()
    }

    fn inverse_table(&self) -> &Vec<Option<Ar>> {
        self.inverses.get_or_init(|| {
            self.arrows()
                .map(|f| {
                    let (s, t) = (self.src[f], self.tgt[f]);
                    self.hom(t, s).iter().copied().find(|&g| {
                        self.comp[&(g, f)] == self.ident[s] && self.comp[&(f, g)] == self.ident[t]
                    })
                })
                .collect()
        })
    }

    pub fn inverse(&self, f: Ar) -> Option<Ar> {
        self.inverse_table()[f]
    }

    pub fn is_iso(&self, f: Ar) -> bool {
        self.inverse(f).is_some()
    }

    pub fn is_groupoid(&self) -> bool {
        self.arrows().all(|f| self.is_iso(f))
    }

    pub fn is_discrete(&self) -> bool {
        self.arrows().all(|f| self.is_identity(f))
    }

    /// At most one arrow between any ordered pair of objects.
    pub fn is_posetal(&self) -> bool {
        self.hom.values().all(|h| h.len() <= 1)
    }

    /// Discrete category on the given object names.
    pub fn discrete<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        let mut b = CategoryBuilder::new();
        for n in names {
            let n = n.into();
            let o = b.add_object(n.clone()).expect("distinct object names");
            b.add_identity(format!("1_{n}"), o).expect("distinct arrow names");
        }
        b.finish().expect("discrete category is valid")
    }

    pub fn terminal() -> Self {
        Self::discrete(["*"])
    }

    /// Full subcategory on the given objects, in the given order.
    pub fn full_subcategory(&self, objs: &[Ob]) -> (FinCategory, Vec<Ar>) {
        let mut b = CategoryBuilder::new();
        let mut local = HashMap::new();
        for &o in objs {
            local.insert(o, b.add_object(self.obj_names[o].clone()).expect("distinct"));
        }
        let mut arr_map = Vec::new();
        let mut local_arr = HashMap::new();
        for &s in objs {
            for &t in objs {
                for &a in self.hom(s, t) {
                    let la = b.add_arrow(self.arr_names[a].clone(), local[&s], local[&t]).expect("distinct");
                    local_arr.insert(a, la);
                    arr_map.push(a);
                }
            }
        }
        for &o in objs {
            b.set_identity(local[&o], local_arr[&self.ident[o]]);
        }
        for &f in &arr_map {
            for &g in &self.out_arrows[self.tgt[f]] {
                if let Some(&lg) = local_arr.get(&g) {
                    let h = self.comp[&(g, f)];
                    b.set_composite(lg, local_arr[&f], local_arr[&h]).expect("closed under composition");
                }
            }
        }
        (b.finish_total().expect("full subcategory is a category"), arr_map)
    }
}

/// A functor between finite categories, stored as index maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinFunctor {
    pub dom: Arc<FinCategory>,
    pub cod: Arc<FinCategory>,
    pub obj: Vec<Ob>,
    pub arr: Vec<Ar>,
}

impl FinFunctor {
    /// Builds and checks a functor.
    pub fn new(
        dom: Arc<FinCategory>,
        cod: Arc<FinCategory>,
        obj: Vec<Ob>,
        arr: Vec<Ar>,
    ) -> Result<Self, FunctorError> {
        let f = FinFunctor { dom, cod, obj, arr };
        f.check()?;
        Ok(f)
    }

    /// Builds a functor without checking the laws.
    pub fn new_unchecked(dom: Arc<FinCategory>, cod: Arc<FinCategory>, obj: Vec<Ob>, arr: Vec<Ar>) -> Self {
        FinFunctor { dom, cod, obj, arr }
    }

    pub fn identity(c: Arc<FinCategory>) -> Self {
        let obj = c.objects().collect();
        let arr = c.arrows().collect();
        FinFunctor { dom: c.clone(), cod: c, obj, arr }
    }

    /// Builds a functor from name maps.
    pub fn from_names(
        dom: Arc<FinCategory>,
        cod: Arc<FinCategory>,
        objects: &BTreeMap<String, String>,
        arrows: &BTreeMap<String, String>,
    ) -> Result<Self, FunctorError> {
        let mut obj = Vec::with_capacity(dom.obj_count());
        for o in dom.objects() {
            let name = dom.obj_name(o);
            let image = objects
                .get(name)
                .and_then(|n| cod.obj_by_name(n))
                .ok_or_else(|| FunctorError::ObjectMap(name.to_string()))?;
            obj.push(image);
        }
        let mut arr = Vec::with_capacity(dom.arr_count());
        for a in dom.arrows() {
            let name = dom.arr_name(a);
            let image = arrows
                .get(name)
                .and_then(|n| cod.arr_by_name(n))
                .ok_or_else(|| FunctorError::ArrowMap(name.to_string()))?;
            arr.push(image);
        }
        FinFunctor::new(dom, cod, obj, arr)
    }

    pub fn to_names(&self) -> (BTreeMap<String, String>, BTreeMap<String, String>) {
        let objects = self
            .dom
            .objects()
            .map(|o| (self.dom.obj_name(o).to_string(), self.cod.obj_name(self.obj[o]).to_string()))
            .collect();
        let arrows = self
            .dom
            .arrows()
            .map(|a| (self.dom.arr_name(a).to_string(), self.cod.arr_name(self.arr[a]).to_string()))
            .collect();
        (objects, arrows)
    }

    pub fn check(&self) -> Result<(), FunctorError> {
        let (d, c) = (&*self.dom, &*self.cod);
        if self.obj.len() != d.obj_count() || self.obj.iter().any(|&o| o >= c.obj_count()) {
            return Err(FunctorError::ObjectMap(format!("{} entries", self.obj.len())));
        }
        if self.arr.len() != d.arr_count() || self.arr.iter().any(|&a| a >= c.arr_count()) {
            return Err(FunctorError::ArrowMap(format!("{} entries", self.arr.len())));
        }
        for a in d.arrows() {
            let fa = self.arr[a];
            if c.src(fa) != self.obj[d.src(a)] || c.tgt(fa) != self.obj[d.tgt(a)] {
                return Err(FunctorError::Endpoints { arrow: d.arr_name(a).to_string() });
            }
        }
        for o in d.objects() {
            if self.arr[d.identity(o)] != c.identity(self.obj[o]) {
                return Err(FunctorError::Identity { object: d.obj_name(o).to_string() });
            }
        }
        for f in d.arrows() {
            for &g in d.out_arrows(d.tgt(f)) {
                let gf = d.compose(g, f).expect("total");
                if c.compose(self.arr[g], self.arr[f]) != Some(self.arr[gf]) {
                    return Err(FunctorError::Composition {
                        g: d.arr_name(g).to_string(),
                        f: d.arr_name(f).to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &FinFunctor) -> Result<FinFunctor, FunctorError> {
        if first.cod != self.dom && !Arc::ptr_eq(&first.cod, &self.dom) {
            return Err(FunctorError::NotComposable);
        }
        Ok(FinFunctor {
            dom: first.dom.clone(),
            cod: self.cod.clone(),
            obj: first.obj.iter().map(|&o| self.obj[o]).collect(),
            arr: first.arr.iter().map(|&a| self.arr[a]).collect(),
        })
    }

    /// Same maps, agreeing on every object and arrow.
    pub fn same_maps(&self, other: &FinFunctor) -> bool {
        self.obj == other.obj && self.arr == other.arr
    }
}

/// A natural transformation between parallel functors.
#[derive(Debug, Clone)]
pub struct FinNatTrans {
    pub source: FinFunctor,
    pub target: FinFunctor,
    pub components: Vec<Ar>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NatTransError {
    #[error("functors are not parallel")]
    NotParallel,
    #[error("component at `{object}` has the wrong endpoints")]
    Component { object: String },
    #[error("naturality square fails at `{arrow}`")]
    Naturality { arrow: String },
}

impl FinNatTrans {
    pub fn new(source: FinFunctor, target: FinFunctor, components: Vec<Ar>) -> Result<Self, NatTransError> {
        let t = FinNatTrans { source, target, components };
        t.check()?;
        Ok(t)
    }

    pub fn check(&self) -> Result<(), NatTransError> {
        let (f, g) = (&self.source, &self.target);
        if f.dom != g.dom || f.cod != g.cod || self.components.len() != f.dom.obj_count() {
            return Err(NatTransError::NotParallel);
        }
        let (d, c) = (&*f.dom, &*f.cod);
        for o in d.objects() {
            let a = self.components[o];
            if c.src(a) != f.obj[o] || c.tgt(a) != g.obj[o] {
                return Err(NatTransError::Component { object: d.obj_name(o).to_string() });
            }
        }
        for h in d.arrows() {
            let left = c.compose(g.arr[h], self.components[d.src(h)]);
            let right = c.compose(self.components[d.tgt(h)], f.arr[h]);
            if left.is_none() || left != right {
                return Err(NatTransError::Naturality { arrow: d.arr_name(h).to_string() });
            }
        }
        Ok(())
    }

    pub fn is_invertible(&self) -> bool {
        self.components.iter().all(|&a| self.source.cod.is_iso(a))
    }
}

/// Outcome of an equivalence test, with witnesses on failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceVerdict {
    pub fully_faithful: bool,
    /// A pair of domain objects whose induced hom-map is not a bijection.
    pub ff_witness: Option<(String, String)>,
    pub essentially_surjective: bool,
    /// A codomain object isomorphic to no image object.
    pub es_witness: Option<String>,
    pub is_equivalence: bool,
}

impl EquivalenceVerdict {
    pub fn new(ff_witness: Option<(String, String)>, es_witness: Option<String>) -> Self {
        let fully_faithful = ff_witness.is_none();
        let essentially_surjective = es_witness.is_none();
        EquivalenceVerdict {
            fully_faithful,
            ff_witness,
            essentially_surjective,
            es_witness,
            is_equivalence: fully_faithful && essentially_surjective,
        }
    }

    pub fn pass() -> Self {
        Self::new(None, None)
    }
}

/// Fully faithful and essentially surjective test.
pub fn is_equivalence(f: &FinFunctor) -> EquivalenceVerdict {
    let (d, c) = (&*f.dom, &*f.cod);
    let mut ff_witness = None;
    'outer: for a in d.objects() {
        for b in d.objects() {
            let hom = d.hom(a, b);
            let target = c.hom(f.obj[a], f.obj[b]);
            let mut images: Vec<Ar> = hom.iter().map(|&h| f.arr[h]).collect();
            images.sort_unstable();
            images.dedup();
            if images.len() != hom.len() || images.len() != target.len() {
                ff_witness = Some((d.obj_name(a).to_string(), d.obj_name(b).to_string()));
                break 'outer;
            }
        }
    }
    let mut in_image = vec![false; c.obj_count()];
    for &o in &f.obj {
        in_image[o] = true;
    }
    let es_witness = c
        .objects()
        .find(|&y| !in_image[y] && !c.out_arrows(y).iter().any(|&a| in_image[c.tgt(a)] && c.is_iso(a)))
        .map(|y| c.obj_name(y).to_string());
    EquivalenceVerdict::new(ff_witness, es_witness)
}

/// A partition of the objects of a category into connected components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    /// Component index of every object.
    pub class_of: Vec<usize>,
    /// Members of each component in increasing order; components are ordered
    /// by their least member.
    pub classes: Vec<Vec<Ob>>,
}

impl Partition {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Least member of a class.
    pub fn representative(&self, class: usize) -> Ob {
        self.classes[class][0]
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut x = x;
    while parent[x] != r {
        let next = parent[x];
        parent[x] = r;
        x = next;
    }
    r
}

/// Partition of `n` elements generated by the given pairs.
pub fn partition_from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Partition {
    let mut parent: Vec<usize> = (0..n).collect();
    for (a, b) in pairs {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            parent[hi] = lo;
        }
    }
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut root_class = HashMap::new();
    for x in 0..n {
        let r = find(&mut parent, x);
        let k = *root_class.entry(r).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        class_of[x] = k;
        classes[k].push(x);
    }
    Partition { class_of, classes }
}

/// Connected components under zig-zags of arrows.
pub fn pi0(c: &FinCategory) -> Partition {
    partition_from_pairs(c.obj_count(), c.arrows().map(|a| (c.src(a), c.tgt(a))))
}

/// Result of comparing a category with the discrete category on its components.
#[derive(Debug, Clone)]
pub struct DiscreteComparison {
    pub verdict: EquivalenceVerdict,
    pub components: Partition,
    /// The discrete category on the components; object `k` is component `k`.
    pub discrete: Arc<FinCategory>,
    /// Quotient map: object ↦ component.
    pub gamma: Vec<usize>,
    /// Section: component ↦ least member, so that `gamma ∘ gamma_prime = id`.
    pub gamma_prime: Vec<Ob>,
}

/// Decides whether `c` is equivalent to the discrete category on `π₀ c`,
/// i.e. whether every component is a posetal groupoid.
pub fn is_equivalent_to_discrete(c: &FinCategory) -> DiscreteComparison {
    let components = pi0(c);
    let gamma = components.class_of.clone();
    let gamma_prime: Vec<Ob> = (0..components.class_count()).map(|k| components.representative(k)).collect();
    let discrete = Arc::new(FinCategory::discrete(
        gamma_prime.iter().map(|&o| format!("[{}]", c.obj_name(o))),
    ));
    let mut ff_witness = None;
    'outer: for class in &components.classes {
        for &a in class {
            for &b in class {
                if c.hom(a, b).len() != 1 {
                    ff_witness = Some((c.obj_name(a).to_string(), c.obj_name(b).to_string()));
                    break 'outer;
                }
            }
        }
    }
    DiscreteComparison {
        verdict: EquivalenceVerdict::new(ff_witness, None),
        components,
        discrete,
        gamma,
        gamma_prime,
    }
}

impl DiscreteComparison {
    /// The quotient functor onto the discrete category.
    pub fn quotient_functor(&self, c: Arc<FinCategory>) -> FinFunctor {
        let arr = c.arrows().map(|a| self.discrete.identity(self.gamma[c.src(a)])).collect();
        FinFunctor::new_unchecked(c, self.discrete.clone(), self.gamma.clone(), arr)
    }
}

/// A pullback of two functors with common codomain.
#[derive(Debug, Clone)]
pub struct Pullback {
    pub cat: Arc<FinCategory>,
    pub left: FinFunctor,
    pub right: FinFunctor,
    obj_pairs: HashMap<(Ob, Ob), Ob>,
    arr_pairs: HashMap<(Ar, Ar), Ar>,
}

impl Pullback {
    pub fn object_of(&self, a: Ob, b: Ob) -> Option<Ob> {
        self.obj_pairs.get(&(a, b)).copied()
    }

    pub fn arrow_of(&self, a: Ar, b: Ar) -> Option<Ar> {
        self.arr_pairs.get(&(a, b)).copied()
    }
}

/// Pullback `A ×_C B` of `f: A → C` and `g: B → C`.
pub fn pullback(f: &FinFunctor, g: &FinFunctor) -> Pullback {
    assert!(f.cod == g.cod, "pullback needs a common codomain");
    let (a, b) = (&*f.dom, &*g.dom);
    let mut builder = CategoryBuilder::new();
    let mut obj_pairs = HashMap::new();
    let mut obj_l = Vec::new();
    let mut obj_r = Vec::new();
    for x in a.objects() {
        for y in b.objects() {
            if f.obj[x] == g.obj[y] {
                let o = builder
                    .add_object(format!("({},{})", a.obj_name(x), b.obj_name(y)))
                    .expect("distinct");
                obj_pairs.insert((x, y), o);
                obj_l.push(x);
                obj_r.push(y);
            }
        }
    }
    let mut by_image: HashMap<Ar, Vec<Ar>> = HashMap::new();
    for q in b.arrows() {
        by_image.entry(g.arr[q]).or_default().push(q);
    }
    let mut arr_pairs = HashMap::new();
    let mut arr_l = Vec::new();
    let mut arr_r = Vec::new();
    for p in a.arrows() {
        for &q in by_image.get(&f.arr[p]).map(Vec::as_slice).unwrap_or(&[]) {
            let s = obj_pairs[&(a.src(p), b.src(q))];
            let t = obj_pairs[&(a.tgt(p), b.tgt(q))];
            let ar = builder
                .add_arrow(format!("({},{})", a.arr_name(p), b.arr_name(q)), s, t)
                .expect("distinct");
            arr_pairs.insert((p, q), ar);
            arr_l.push(p);
            arr_r.push(q);
        }
    }
    for (&(x, y), &o) in &obj_pairs {
        builder.set_identity(o, arr_pairs[&(a.identity(x), b.identity(y))]);
    }
    for (&(p1, q1), &ar1) in &arr_pairs {
        for &p2 in a.out_arrows(a.tgt(p1)) {
            for &q2 in b.out_arrows(b.tgt(q1)) {
                if let Some(&ar2) = arr_pairs.get(&(p2, q2)) {
                    let comp = arr_pairs[&(a.compose(p2, p1).unwrap(), b.compose(q2, q1).unwrap())];
                    builder.set_composite(ar2, ar1, comp).expect("componentwise composite");
                }
            }
        }
    }
    let cat = Arc::new(builder.finish_total().expect("pullback is a category"));
    let left = FinFunctor::new_unchecked(cat.clone(), f.dom.clone(), obj_l, arr_l);
    let right = FinFunctor::new_unchecked(cat.clone(), g.dom.clone(), obj_r, arr_r);
    Pullback { cat, left, right, obj_pairs, arr_pairs }
}

/// The category of composable `n`-tuples `(x₁, …, xₙ)` of objects and arrows of
/// `e` with `right(xᵢ) = left(xᵢ₊₁)` in `base`.
#[derive(Debug, Clone)]
pub struct FiberPower {
    pub cat: Arc<FinCategory>,
    pub obj_tuples: Vec<Vec<Ob>>,
    pub arr_tuples: Vec<Vec<Ar>>,
    obj_index: HashMap<Vec<Ob>, Ob>,
    arr_index: HashMap<Vec<Ar>, Ar>,
}

impl FiberPower {
    pub fn object_of(&self, t: &[Ob]) -> Option<Ob> {
        self.obj_index.get(t).copied()
    }

    pub fn arrow_of(&self, t: &[Ar]) -> Option<Ar> {
        self.arr_index.get(t).copied()
    }
}

fn tuple_name(parts: impl IntoIterator<Item = impl AsRef<str>>) -> String {
    let mut s = String::from("(");
    for (i, p) in parts.into_iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(p.as_ref());
    }
    s.push(')');
    s
}

fn composable_tuples<T: Copy + Eq + std::hash::Hash>(
    n: usize,
    all: impl Iterator<Item = T> + Clone,
    left: impl Fn(T) -> usize,
    right: impl Fn(T) -> usize,
) -> Vec<Vec<T>> {
    let mut by_left: HashMap<usize, Vec<T>> = HashMap::new();
    for x in all.clone() {
        by_left.entry(left(x)).or_default().push(x);
    }
    let mut out: Vec<Vec<T>> = all.map(|x| vec![x]).collect();
    for _ in 1..n {
        let mut next = Vec::new();
        for t in out {
            let last = *t.last().unwrap();
            for &x in by_left.get(&right(last)).map(Vec::as_slice).unwrap_or(&[]) {
                let mut u = t.clone();
                u.push(x);
                next.push(u);
            }
        }
        out = next;
    }
    out
}

/// `e ×_base e ×_base ⋯` (`n` factors) for `left, right: e → base`.
pub fn fiber_power(left: &FinFunctor, right: &FinFunctor, n: usize) -> FiberPower {
    assert!(n >= 1);
    let e = &*left.dom;
    let obj_tuples = composable_tuples(n, e.objects(), |x| left.obj[x], |x| right.obj[x]);
    let arr_tuples = composable_tuples(n, e.arrows(), |x| left.arr[x], |x| right.arr[x]);
    let mut b = CategoryBuilder::new();
    let mut obj_index = HashMap::new();
    for t in &obj_tuples {
        let o = b.add_object(tuple_name(t.iter().map(|&x| e.obj_name(x)))).expect("distinct");
        obj_index.insert(t.clone(), o);
    }
    let mut arr_index = HashMap::new();
    for t in &arr_tuples {
        let s: Vec<Ob> = t.iter().map(|&a| e.src(a)).collect();
        let tg: Vec<Ob> = t.iter().map(|&a| e.tgt(a)).collect();
        let ar = b
            .add_arrow(tuple_name(t.iter().map(|&x| e.arr_name(x))), obj_index[&s], obj_index[&tg])
            .expect("distinct");
        arr_index.insert(t.clone(), ar);
    }
    for (t, &o) in &obj_index {
        let ids: Vec<Ar> = t.iter().map(|&x| e.identity(x)).collect();
        b.set_identity(o, arr_index[&ids]);
    }
    // composites: for each arrow tuple, extend by arrow tuples out of its target
    let mut out_by_src: HashMap<Ob, Vec<usize>> = HashMap::new();
    for (i, t) in arr_tuples.iter().enumerate() {
        let s: Vec<Ob> = t.iter().map(|&a| e.src(a)).collect();
        out_by_src.entry(obj_index[&s]).or_default().push(i);
    }
    for f in &arr_tuples {
        let tgt: Vec<Ob> = f.iter().map(|&a| e.tgt(a)).collect();
        for &j in out_by_src.get(&obj_index[&tgt]).map(Vec::as_slice).unwrap_or(&[]) {
            let g = &arr_tuples[j];
            let gf: Vec<Ar> = g.iter().zip(f).map(|(&y, &x)| e.compose(y, x).unwrap()).collect();
            b.set_composite(arr_index[g], arr_index[f], arr_index[&gf])
                .expect("componentwise composite");
        }
    }
    let cat = Arc::new(b.finish_total().expect("fibre power is a category"));
    FiberPower { cat, obj_tuples, arr_tuples, obj_index, arr_index }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arrow_cat() -> FinCategory {
        let mut b = CategoryBuilder::new();
        let a = b.add_object("a").unwrap();
        let c = b.add_object("b").unwrap();
        b.add_identity("1_a", a).unwrap();
        b.add_identity("1_b", c).unwrap();
        b.add_arrow("f", a, c).unwrap();
        b.finish().unwrap()
    }

    #[test]
    fn builder_completes_identity_composites() {
        let c = arrow_cat();
        assert_eq!(c.arr_count(), 3);
        let f = c.arr_by_name("f").unwrap();
        assert_eq!(c.compose(c.identity(1), f), Some(f));
        assert_eq!(c.compose(f, c.identity(0)), Some(f));
        assert_eq!(c.compose(f, f), None);
    }

    #[test]
    fn presentation_round_trip() {
        let c = arrow_cat();
        let p = c.to_presentation();
        assert_eq!(FinCategory::from_presentation(&p).unwrap(), c);
    }

    #[test]
    fn union_find_merges_to_least_root() {
        let p = partition_from_pairs(5, [(4, 2), (2, 3)]);
        assert_eq!(p.classes, vec![vec![0], vec![1], vec![2, 3, 4]]);
    }
}
