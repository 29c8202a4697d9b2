//! Graphviz export.

use std::fmt::Write as _;

use fibrak_core::display::DisplayClass;
use fibrak_core::fibration::ClovenFibration;
use fibrak_core::kernel::FinCat;

fn quote(s: &str) -> String {
    let mut q = String::with_capacity(s.len() + 2);
    q.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            q.push('\\');
        }
        q.push(c);
    }
    q.push('"');
    q
}

fn nodes(s: &mut String, c: &FinCat, prefix: &str, indent: &str) {
    for x in c.objs() {
        writeln!(s, "{indent}{prefix}{} [label={}];", x.0, quote(c.obj_name(x))).unwrap();
    }
}

/// Every arrow, identities included as self-loops.
pub fn category_dot(c: &FinCat) -> String {
    let mut s = String::from("digraph category {\n");
    nodes(&mut s, c, "n", "  ");
    for a in c.arrs() {
        writeln!(s, "  n{} -> n{} [label={}];", c.dom(a).0, c.cod(a).0, quote(c.arr_name(a))).unwrap();
    }
    s.push_str("}\n");
    s
}

/// Total and base categories as clusters. Vertical arrows are dashed,
/// cartesian ones bold, display members double-headed.
pub fn fibration_dot(p: &ClovenFibration, display: Option<&DisplayClass>) -> String {
    let (e, b) = (p.total(), p.base());
    let mut s = String::from("digraph fibration {\n  subgraph cluster_total {\n    label=\"total\";\n");
    nodes(&mut s, e, "e", "    ");
    s.push_str("  }\n  subgraph cluster_base {\n    label=\"base\";\n");
    nodes(&mut s, b, "b", "    ");
    s.push_str("  }\n");
    for a in e.arrs() {
        let mut style = Vec::new();
        if p.is_vertical(a) {
            style.push("dashed");
        }
        if p.is_cartesian(a) {
            style.push("bold");
        }
        write!(s, "  e{} -> e{} [label={}", e.dom(a).0, e.cod(a).0, quote(e.arr_name(a))).unwrap();
        if !style.is_empty() {
            write!(s, ", style=\"{}\"", style.join(",")).unwrap();
        }
        s.push_str("];\n");
    }
    for a in b.arrs() {
        write!(s, "  b{} -> b{} [label={}", b.dom(a).0, b.cod(a).0, quote(b.arr_name(a))).unwrap();
        if display.is_some_and(|d| d.is_member(a)) {
            s.push_str(", arrowhead=normalnormal");
        }
        s.push_str("];\n");
    }
    s.push_str("}\n");
    s
}
