//! The functional graph of `theta(x) = (x + 1/x) / 2` on the projective line
//! over F_q.
//!
//! Every point eventually lands on a cycle. The non-periodic points hanging
//! off a periodic root form a reversed binary tree of depth `nu2(q - 1)`,
//! except at `1` and `-1`, which have no tree at all.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::ext::{theta_apply, ExtField, ProjPoint};
use crate::fp::{nu2, PrimeModulus};
use crate::poly::{first_irreducible, FpPoly};

/// Largest field size accepted by [`FunctionalGraph::build`].
pub const GRAPH_LIMIT: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NodeMeta {
    pub is_periodic: bool,
    /// Distance to the periodic set; 0 for periodic nodes.
    pub level: u32,
    /// The periodic node this one drains into (itself when periodic).
    pub root: usize,
    /// Length of the cycle through `root`.
    pub cycle_len: usize,
}

#[derive(Clone, Debug)]
pub struct FunctionalGraph {
    field: ExtField,
    q: u64,
    successor: Vec<usize>,
    meta: Vec<NodeMeta>,
}

impl FunctionalGraph {
    /// Graph over the given field; points `0..q` follow
    /// [`ExtField::element_at`] and `q` is infinity.
    pub fn build(field: &ExtField) -> Result<Self> {
        let q = match field.size() {
            Some(q) if q <= GRAPH_LIMIT as u128 => q as u64,
            _ => {
                return Err(Error::FieldTooLarge {
                    p: field.p().value(),
                    n: field.degree(),
                    limit: GRAPH_LIMIT,
                })
            }
        };
        let inf = q as usize;
        let successor: Vec<usize> = (0..=inf)
            .map(|i| {
                let point = if i == inf {
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Finite(field.element_at(i as u64))
                };
                match theta_apply(&point) {
                    ProjPoint::Infinity => inf,
                    ProjPoint::Finite(e) => field.index_of(&e) as usize,
                }
            })
            .collect();
        let meta = classify(&successor);
        Ok(FunctionalGraph {
            field: field.clone(),
            q,
            successor,
            meta,
        })
    }

    /// Graph over F_{p^n}, presented as F_p for `n = 1` and by the first
    /// irreducible of degree `n` otherwise.
    pub fn for_prime_power(p: PrimeModulus, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("extension degree must be positive".into()));
        }
        match crate::fp::checked_prime_power(p.value(), n) {
            Some(q) if q <= GRAPH_LIMIT as u128 => {}
            _ => {
                return Err(Error::FieldTooLarge {
                    p: p.value(),
                    n,
                    limit: GRAPH_LIMIT,
                })
            }
        }
        let modulus = if n == 1 { FpPoly::x(p) } else { first_irreducible(p, n)? };
        Self::build(&ExtField::new_unchecked(&modulus)?)
    }

    pub fn field(&self) -> &ExtField {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.successor.len()
    }

    pub fn is_empty(&self) -> bool {
        self.successor.is_empty()
    }

    pub fn infinity(&self) -> usize {
        self.q as usize
    }

    pub fn successor(&self, i: usize) -> usize {
        self.successor[i]
    }

    pub fn successors(&self) -> &[usize] {
        &self.successor
    }

    pub fn meta(&self, i: usize) -> NodeMeta {
        self.meta[i]
    }

    pub fn point(&self, i: usize) -> ProjPoint {
        if i == self.infinity() {
            ProjPoint::Infinity
        } else {
            ProjPoint::Finite(self.field.element_at(i as u64))
        }
    }

    pub fn index_of(&self, x: &ProjPoint) -> usize {
        match x {
            ProjPoint::Infinity => self.infinity(),
            ProjPoint::Finite(e) => self.field.index_of(e) as usize,
        }
    }

    /// Canonical element string, `inf` for infinity.
    pub fn label(&self, i: usize) -> String {
        self.point(i).to_string()
    }

    pub fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut preds = vec![Vec::new(); self.len()];
        for (i, &s) in self.successor.iter().enumerate() {
            preds[s].push(i);
        }
        preds
    }

    fn one_index(&self) -> usize {
        self.field.index_of(&self.field.one()) as usize
    }

    fn minus_one_index(&self) -> usize {
        self.field.index_of(&self.field.one().neg()) as usize
    }
}

/// Periodic points by peeling nodes of in-degree zero, then levels and roots
/// by reverse BFS from the cycles.
fn classify(successor: &[usize]) -> Vec<NodeMeta> {
    let len = successor.len();
    let mut indeg = vec![0usize; len];
    for &s in successor {
        indeg[s] += 1;
    }
    let mut periodic = vec![true; len];
    let mut queue: VecDeque<usize> = (0..len).filter(|&i| indeg[i] == 0).collect();
    while let Some(i) = queue.pop_front() {
        periodic[i] = false;
        let s = successor[i];
        indeg[s] -= 1;
        if indeg[s] == 0 {
            queue.push_back(s);
        }
    }
    let mut meta = vec![
        NodeMeta {
            is_periodic: false,
            level: 0,
            root: usize::MAX,
            cycle_len: 0,
        };
        len
    ];
    for start in 0..len {
        if !periodic[start] || meta[start].root != usize::MAX {
            continue;
        }
        let mut cycle = vec![start];
        let mut cur = successor[start];
        while cur != start {
            cycle.push(cur);
            cur = successor[cur];
        }
        for &c in &cycle {
            meta[c] = NodeMeta {
                is_periodic: true,
                level: 0,
                root: c,
                cycle_len: cycle.len(),
            };
        }
    }
    let mut preds = vec![Vec::new(); len];
    for (i, &s) in successor.iter().enumerate() {
        if !periodic[i] {
            preds[s].push(i);
        }
    }
    let mut queue: VecDeque<usize> = (0..len).filter(|&i| periodic[i]).collect();
    while let Some(i) = queue.pop_front() {
        for &child in &preds[i] {
            meta[child] = NodeMeta {
                is_periodic: false,
                level: meta[i].level + 1,
                root: meta[i].root,
                cycle_len: meta[i].cycle_len,
            };
            queue.push_back(child);
        }
    }
    meta
}

/// Shape of the tree of non-periodic predecessors below one periodic node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootReport {
    pub root: usize,
    pub label: String,
    /// `1` or `-1`, where no tree is expected.
    pub plus_minus_one: bool,
    pub depth: u32,
    /// For each level, how many nodes have a given number of children.
    pub child_counts: Vec<BTreeMap<usize, usize>>,
    pub leaves: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeReport {
    pub q: u64,
    pub nu2_q_minus_1: u32,
    pub roots: Vec<RootReport>,
    pub plus_minus_one_tree_free: bool,
    pub depths_match: bool,
    pub roots_have_one_child: bool,
    pub internal_nodes_have_two_children: bool,
    pub leaves_at_full_depth: bool,
    pub failures: Vec<String>,
}

impl TreeReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Distinct tree depths over roots other than `+-1`.
    pub fn depths(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self
            .roots
            .iter()
            .filter(|r| !r.plus_minus_one)
            .map(|r| r.depth)
            .collect();
        d.sort_unstable();
        d.dedup();
        d
    }
}

/// Checks the tree structure below every periodic node.
pub fn verify_tree_structure(g: &FunctionalGraph) -> TreeReport {
    let expected = nu2(g.q as u128 - 1).expect("q > 1");
    let preds = g.predecessors();
    let children = |i: usize| -> Vec<usize> { preds[i].iter().copied().filter(|&c| !g.meta[c].is_periodic).collect() };
    let special = [g.one_index(), g.minus_one_index()];
    let mut report = TreeReport {
        q: g.q,
        nu2_q_minus_1: expected,
        roots: Vec::new(),
        plus_minus_one_tree_free: true,
        depths_match: true,
        roots_have_one_child: true,
        internal_nodes_have_two_children: true,
        leaves_at_full_depth: true,
        failures: Vec::new(),
    };
    for root in (0..g.len()).filter(|&i| g.meta[i].is_periodic) {
        let label = g.label(root);
        let mut child_counts: Vec<BTreeMap<usize, usize>> = Vec::new();
        let mut leaves = 0;
        let mut depth = 0;
        let mut level_nodes = vec![root];
        let mut level = 0u32;
        while !level_nodes.is_empty() {
            let mut hist = BTreeMap::new();
            let mut next = Vec::new();
            for &v in &level_nodes {
                let ch = children(v);
                *hist.entry(ch.len()).or_insert(0) += 1;
                if ch.is_empty() && level > 0 {
                    leaves += 1;
                    if !special.contains(&root) && level != expected {
                        report.leaves_at_full_depth = false;
                        report
                            .failures
                            .push(format!("leaf {} under {label} at depth {level}", g.label(v)));
                    }
                }
                if level > 0 && !ch.is_empty() && ch.len() != 2 {
                    report.internal_nodes_have_two_children = false;
                    report
                        .failures
                        .push(format!("node {} under {label} has {} children", g.label(v), ch.len()));
                }
                next.extend(ch);
            }
            child_counts.push(hist);
            if !next.is_empty() {
                depth = level + 1;
            }
            level_nodes = next;
            level += 1;
        }
        let root_children = children(root).len();
        if special.contains(&root) {
            if root_children != 0 {
                report.plus_minus_one_tree_free = false;
                report
                    .failures
                    .push(format!("{label} has {root_children} non-periodic predecessors"));
            }
        } else {
            if depth != expected {
                report.depths_match = false;
                report
                    .failures
                    .push(format!("tree under {label} has depth {depth}, expected {expected}"));
            }
            if root_children != 1 {
                report.roots_have_one_child = false;
                report
                    .failures
                    .push(format!("root {label} has {root_children} non-periodic children"));
            }
        }
        report.roots.push(RootReport {
            root,
            label,
            plus_minus_one: special.contains(&root),
            depth,
            child_counts,
            leaves,
        });
    }
    report
}

/// Violations of the preimage counts: finite `y` other than `+-1` has 0 or 2
/// preimages, `+-1` only themselves, infinity exactly `{0, inf}`.
pub fn in_degree_failures(g: &FunctionalGraph) -> Vec<String> {
    let preds = g.predecessors();
    let (one, minus_one, inf) = (g.one_index(), g.minus_one_index(), g.infinity());
    let zero = g.field.index_of(&g.field.zero()) as usize;
    let mut failures = Vec::new();
    for (y, ps) in preds.iter().enumerate() {
        let ok = if y == inf {
            let mut sorted = ps.clone();
            sorted.sort_unstable();
            sorted == [zero, inf]
        } else if y == one || y == minus_one {
            ps.as_slice() == [y]
        } else {
            ps.is_empty() || ps.len() == 2
        };
        if !ok {
            let labels: Vec<String> = ps.iter().map(|&i| g.label(i)).collect();
            failures.push(format!("{} has preimages [{}]", g.label(y), labels.join(", ")));
        }
    }
    failures
}

/// `psi(x) = (x + 1)/(x - 1)`, with `1 -> inf` and `inf -> 1`.
pub fn psi(x: &ProjPoint, field: &ExtField) -> ProjPoint {
    match x {
        ProjPoint::Infinity => ProjPoint::Finite(field.one()),
        ProjPoint::Finite(e) => {
            let den = e.sub(&field.one());
            match den.inv() {
                Ok(inv) => ProjPoint::Finite(e.add(&field.one()).mul(&inv)),
                Err(_) => ProjPoint::Infinity,
            }
        }
    }
}

/// Squaring, with infinity fixed.
pub fn square_map(x: &ProjPoint) -> ProjPoint {
    match x {
        ProjPoint::Infinity => ProjPoint::Infinity,
        ProjPoint::Finite(e) => ProjPoint::Finite(e.square()),
    }
}

/// Points where `theta != psi . s2 . psi` or `psi . psi != id`.
pub fn conjugacy_failures(g: &FunctionalGraph) -> Vec<String> {
    let mut failures = Vec::new();
    for i in 0..g.len() {
        let x = g.point(i);
        let px = psi(&x, &g.field);
        if psi(&px, &g.field) != x {
            failures.push(format!("psi(psi({x})) != {x}"));
        }
        let via = psi(&square_map(&px), &g.field);
        if g.index_of(&via) != g.successor(i) {
            failures.push(format!(
                "theta({x}) = {} but psi(s2(psi({x}))) = {via}",
                g.label(g.successor(i))
            ));
        }
    }
    failures
}

pub fn conjugacy_check(g: &FunctionalGraph) -> bool {
    conjugacy_failures(g).is_empty()
}

fn dot_id(label: &str) -> String {
    let plain = !label.is_empty()
        && (label.bytes().all(|b| b.is_ascii_digit())
            || (label.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
                && !label.as_bytes()[0].is_ascii_digit()));
    if plain {
        label.to_string()
    } else {
        format!("\"{}\"", label.replace('\\', "\\\\").replace('"', "\\\""))
    }
}

/// DOT digraph with one edge `x -> theta(x)` per point; periodic points are
/// drawn as double circles.
pub fn export_dot(g: &FunctionalGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph theta {{");
    let _ = writeln!(out, "  label=\"q = {}\";", g.q);
    let ids: Vec<String> = (0..g.len()).map(|i| dot_id(&g.label(i))).collect();
    for (i, id) in ids.iter().enumerate() {
        if g.meta[i].is_periodic {
            let _ = writeln!(out, "  {id} [shape=doublecircle];");
        } else {
            let _ = writeln!(out, "  {id};");
        }
    }
    for (i, id) in ids.iter().enumerate() {
        let _ = writeln!(out, "  {id} -> {};", ids[g.successor[i]]);
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(p: u64, n: usize) -> FunctionalGraph {
        FunctionalGraph::for_prime_power(PrimeModulus::new(p).unwrap(), n).unwrap()
    }

    #[test]
    fn q5_basics() {
        let g = graph(5, 1);
        assert_eq!(g.len(), 6);
        let inf = g.infinity();
        assert_eq!(g.successor(inf), inf);
        assert_eq!(g.successor(0), inf);
        assert!(g.meta(inf).is_periodic);
        assert_eq!(g.meta(0).level, 1);
        let dot = export_dot(&g);
        assert!(dot.contains("  0 -> inf;\n"));
        assert!(dot.contains("  inf [shape=doublecircle];\n"));
        let r = verify_tree_structure(&g);
        assert!(r.passed(), "{:?}", r.failures);
        let one = r.roots.iter().find(|r| r.label == "1").unwrap();
        assert_eq!(one.depth, 0);
    }

    #[test]
    fn q7_counts() {
        let g = graph(7, 1);
        let dot = export_dot(&g);
        assert_eq!(dot.matches(" -> ").count(), 8);
        let node_lines = dot
            .lines()
            .filter(|l| l.ends_with(';') && !l.contains("->") && !l.contains("label="))
            .count();
        assert_eq!(node_lines, 8);
        assert_eq!(g.successor(1), 1);
        assert_eq!(g.successor(6), 6);
        assert!(in_degree_failures(&g).is_empty());
        let r = verify_tree_structure(&g);
        assert!(r.passed(), "{:?}", r.failures);
        for root in r.roots.iter().filter(|r| r.label != "1" && r.label != "6") {
            assert_eq!(root.depth, 1);
            assert_eq!(root.leaves, 1);
        }
    }

    /// Depth below each root by walking predecessors directly.
    fn brute_depths(g: &FunctionalGraph) -> Vec<(usize, u32)> {
        let periodic: Vec<bool> = (0..g.len())
            .map(|i| {
                let mut x = g.successor(i);
                (0..g.len()).any(|_| {
                    let hit = x == i;
                    x = g.successor(x);
                    hit
                })
            })
            .collect();
        let mut out = Vec::new();
        for r in (0..g.len()).filter(|&i| periodic[i]) {
            let mut depth = 0;
            for v in (0..g.len()).filter(|&v| !periodic[v]) {
                let mut x = v;
                let mut steps = 0;
                while !periodic[x] {
                    x = g.successor(x);
                    steps += 1;
                }
                if x == r {
                    depth = depth.max(steps);
                }
            }
            out.push((r, depth));
        }
        out
    }

    #[test]
    fn q9_and_q13_depths_by_brute_force() {
        for (p, n, expect) in [(3u64, 2usize, 3u32), (13, 1, 2)] {
            let g = graph(p, n);
            let special = [g.one_index(), g.minus_one_index()];
            for (r, depth) in brute_depths(&g) {
                let want = if special.contains(&r) { 0 } else { expect };
                assert_eq!(depth, want, "q={} root {}", g.q(), g.label(r));
                assert_eq!(g.meta(r).is_periodic, true);
            }
            assert!(verify_tree_structure(&g).passed());
        }
    }

    #[test]
    fn conjugacy_small_fields() {
        for (p, n) in [(3, 1), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1), (5, 2), (3, 3), (7, 2)] {
            let g = graph(p, n);
            assert!(conjugacy_check(&g), "q={}: {:?}", g.q(), conjugacy_failures(&g));
            assert!(in_degree_failures(&g).is_empty());
        }
    }

    #[test]
    fn psi_cases() {
        let g = graph(5, 1);
        let f = g.field();
        assert_eq!(psi(&ProjPoint::Infinity, f), ProjPoint::Finite(f.one()));
        assert_eq!(psi(&ProjPoint::Finite(f.one()), f), ProjPoint::Infinity);
        assert_eq!(psi(&ProjPoint::Finite(f.zero()), f), ProjPoint::Finite(f.one().neg()));
    }

    #[test]
    fn dot_is_stable_and_quotes_labels() {
        let g = graph(3, 2);
        assert_eq!(export_dot(&g), export_dot(&graph(3, 2)));
        assert!(export_dot(&g).contains("\"x+1\""));
        assert_eq!(dot_id("inf"), "inf");
        assert_eq!(dot_id("12"), "12");
        assert_eq!(dot_id("2x"), "\"2x\"");
    }

    #[test]
    fn oversize_rejected() {
        let md = PrimeModulus::new(3).unwrap();
        assert!(matches!(
            FunctionalGraph::for_prime_power(md, 13),
            Err(Error::FieldTooLarge { .. })
        ));
    }
}
