//! GraphViz rendering. Horizontal arrows are solid edges, vertical arrows are
//! dashed, identities are left out and non-identity cells are listed in a
//! cluster.

use std::fmt::Write;

use crate::bicat::Bicategory;
use crate::dblcat::DoubleCategory;
use crate::fincat::FinCategory;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

struct Graph {
    out: String,
}

impl Graph {
    fn new(name: &str) -> Self {
        let mut out = String::new();
        writeln!(out, "digraph {} {{", quote(name)).unwrap();
        writeln!(out, "  rankdir=LR;").unwrap();
        Graph { out }
    }

    fn node(&mut self, name: &str) {
        writeln!(self.out, "  {};", quote(name)).unwrap();
    }

    fn edge(&mut self, from: &str, to: &str, label: &str, dashed: bool) {
        let style = if dashed { ", style=dashed" } else { "" };
        writeln!(self.out, "  {} -> {} [label={}{}];", quote(from), quote(to), quote(label), style).unwrap();
    }

    fn cells(&mut self, cells: &[String]) {
        if cells.is_empty() {
            return;
        }
        writeln!(self.out, "  subgraph cluster_cells {{").unwrap();
        writeln!(self.out, "    label=\"cells\";").unwrap();
        writeln!(self.out, "    node [shape=note];").unwrap();
        for (i, c) in cells.iter().enumerate() {
            writeln!(self.out, "    {} [label={}];", quote(&format!("cell#{i}")), quote(c)).unwrap();
        }
        writeln!(self.out, "  }}").unwrap();
    }

    fn finish(mut self) -> String {
        self.out.push_str("}\n");
        self.out
    }
}

/// Objects and non-identity arrows of a category.
pub fn category_dot(c: &FinCategory) -> String {
    let mut g = Graph::new("category");
    for o in c.objects() {
        g.node(c.obj_name(o));
    }
    for a in c.arrows().filter(|&a| !c.is_identity(a)) {
        g.edge(c.obj_name(c.src(a)), c.obj_name(c.tgt(a)), c.arr_name(a), false);
    }
    g.finish()
}

/// Objects, horizontal arrows (solid), vertical arrows (dashed) and the
/// cells that are not identities in either direction.
pub fn double_dot(d: &DoubleCategory) -> String {
    let mut g = Graph::new("double");
    for o in d.x0.objects() {
        g.node(d.x0.obj_name(o));
    }
    let h_ids: Vec<_> = d.x0.objects().map(|a| d.h_id(a)).collect();
    for h in d.x1.objects().filter(|h| !h_ids.contains(h)) {
        g.edge(d.x0.obj_name(d.h_src(h)), d.x0.obj_name(d.h_tgt(h)), d.x1.obj_name(h), false);
    }
    for v in d.x0.arrows().filter(|&v| !d.x0.is_identity(v)) {
        g.edge(d.x0.obj_name(d.x0.src(v)), d.x0.obj_name(d.x0.tgt(v)), d.x0.arr_name(v), true);
    }
    let v_id_cells: Vec<_> = d.x0.arrows().map(|v| d.v_id_cell(v)).collect();
    let cells: Vec<String> = d
        .x1
        .arrows()
        .filter(|&c| !d.x1.is_identity(c) && !v_id_cells.contains(&c))
        .map(|c| {
            format!(
                "{}: {} => {} ({} | {})",
                d.x1.arr_name(c),
                d.x1.obj_name(d.top(c)),
                d.x1.obj_name(d.bottom(c)),
                d.x0.arr_name(d.left(c)),
                d.x0.arr_name(d.right(c))
            )
        })
        .collect();
    g.cells(&cells);
    g.finish()
}

/// Objects, non-identity 1-cells and non-identity 2-cells.
pub fn bicategory_dot(b: &Bicategory) -> String {
    let mut g = Graph::new("bicategory");
    for o in &b.objects {
        g.node(o);
    }
    for (i, c) in b.one_cells.iter().enumerate() {
        if b.identities.contains(&i) {
            continue;
        }
        g.edge(&b.objects[c.src], &b.objects[c.tgt], &c.name, false);
    }
    let t = &b.two_cells;
    let cells: Vec<String> = t
        .arrows()
        .filter(|&a| !t.is_identity(a))
        .map(|a| format!("{}: {} => {}", t.arr_name(a), t.obj_name(t.src(a)), t.obj_name(t.tgt(a))))
        .collect();
    g.cells(&cells);
    g.finish()
}
