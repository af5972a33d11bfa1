//! Rooted triangular cacti (Husimi trees whose blocks are all triangles).
//!
//! A cactus is the multiset of triangles hanging at its root vertex; a
//! triangle is the unordered pair of cacti hanging at its two other
//! vertices. With `n` triangles a cactus has `2n + 1` vertices.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::forest::{Sign, SignedForest};

/// Largest number of triangles accepted by [`enumerate_cacti`].
pub const MAX_TRIANGLES: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CactusError {
    #[error("n = {n} exceeds the cactus enumeration bound of {max} triangles")]
    TooManyTriangles { n: usize, max: usize },
    #[error("malformed cactus: {0}")]
    Malformed(String),
}

/// Rooted triangular cactus. Construct through [`Cactus::new`] or
/// [`Cactus::normalized`] to keep it in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cactus {
    triangles: Vec<Triangle>,
}

/// A triangle attached by its apex; `left` and `right` hang at the two
/// bottom vertices. The pair is unordered: canonical form keeps
/// `left <= right`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "(Cactus, Cactus)", into = "(Cactus, Cactus)")]
pub struct Triangle {
    pub left: Cactus,
    pub right: Cactus,
}

impl From<(Cactus, Cactus)> for Triangle {
    fn from((left, right): (Cactus, Cactus)) -> Self {
        Triangle { left, right }
    }
}

impl From<Triangle> for (Cactus, Cactus) {
    fn from(t: Triangle) -> Self {
        (t.left, t.right)
    }
}

impl Triangle {
    pub fn new(left: Cactus, right: Cactus) -> Triangle {
        Triangle { left, right }
    }

    fn normalize(&mut self) {
        self.left.normalize();
        self.right.normalize();
        if self.left > self.right {
            std::mem::swap(&mut self.left, &mut self.right);
        }
    }

    fn size(&self) -> usize {
        1 + self.left.size() + self.right.size()
    }
}

impl Cactus {
    /// The single-vertex cactus.
    pub fn point() -> Cactus {
        Cactus::default()
    }

    pub fn new(triangles: Vec<Triangle>) -> Cactus {
        Cactus { triangles }.normalized()
    }

    /// `n` triangles sharing the root.
    pub fn star(n: usize) -> Cactus {
        Cactus::new(vec![Triangle::new(Cactus::point(), Cactus::point()); n])
    }

    pub fn normalized(mut self) -> Cactus {
        self.normalize();
        self
    }

    fn normalize(&mut self) {
        for t in &mut self.triangles {
            t.normalize();
        }
        self.triangles.sort();
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    /// Number of triangles.
    pub fn size(&self) -> usize {
        self.triangles.iter().map(Triangle::size).sum()
    }

    /// Token code: a cactus is `[`, its triangle codes, `]`; a triangle is
    /// `T` followed by the codes of its two sides. Equal for isomorphic
    /// cacti once normalized.
    pub fn canonical_code(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.normalized_ref().write_code(&mut out);
        out
    }

    fn normalized_ref(&self) -> Cactus {
        self.clone().normalized()
    }

    fn write_code(&self, out: &mut Vec<u8>) {
        out.push(b'[');
        for t in &self.triangles {
            out.push(b'T');
            t.left.write_code(out);
            t.right.write_code(out);
        }
        out.push(b']');
    }

    /// Explicit vertex/triangle form; vertex 0 is the root.
    pub fn to_graph(&self) -> CactusGraph {
        let mut graph = CactusGraph {
            vertex_count: 1,
            triangles: Vec::new(),
        };
        fn attach(c: &Cactus, at: usize, g: &mut CactusGraph) {
            for t in &c.triangles {
                let a = g.vertex_count;
                let b = a + 1;
                g.vertex_count += 2;
                g.triangles.push([at, a, b]);
                attach(&t.left, a, g);
                attach(&t.right, b, g);
            }
        }
        attach(self, 0, &mut graph);
        graph
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("cactus serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Cactus, CactusError> {
        let c: Cactus = serde_json::from_str(s).map_err(|e| CactusError::Malformed(e.to_string()))?;
        Ok(c.normalized())
    }

    pub fn to_dot(&self, name: &str) -> String {
        self.to_graph().to_dot(name)
    }
}

impl fmt::Display for Cactus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&String::from_utf8_lossy(&self.canonical_code()))
    }
}

/// A cactus as a plain graph: vertices `0..vertex_count`, root `0`, and
/// each triangle listed as `[attachment, left, right]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CactusGraph {
    pub vertex_count: usize,
    pub triangles: Vec<[usize; 3]>,
}

impl CactusGraph {
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.triangles
            .iter()
            .flat_map(|&[a, b, c]| [(a, b), (b, c), (a, c)])
            .collect()
    }

    /// Checks the cactus axioms on the explicit graph: every edge lies on
    /// exactly one triangle, two triangles share at most one vertex, the
    /// graph is connected, and the vertex count is `2n + 1`.
    pub fn check(&self) -> Result<(), CactusError> {
        let n = self.triangles.len();
        if self.vertex_count != 2 * n + 1 {
            return Err(CactusError::Malformed(format!(
                "{} vertices for {n} triangles",
                self.vertex_count
            )));
        }
        let mut seen = BTreeSet::new();
        for (a, b) in self.edges() {
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(CactusError::Malformed(format!("edge {a}-{b} lies on two triangles")));
            }
        }
        for (i, s) in self.triangles.iter().enumerate() {
            for t in &self.triangles[i + 1..] {
                let shared = s.iter().filter(|v| t.contains(v)).count();
                if shared > 1 {
                    return Err(CactusError::Malformed(format!(
                        "triangles {s:?} and {t:?} share an edge"
                    )));
                }
            }
        }
        let mut adjacency = vec![Vec::new(); self.vertex_count];
        for (a, b) in self.edges() {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        let mut reached = vec![false; self.vertex_count];
        let mut stack = vec![0];
        reached[0] = true;
        while let Some(v) = stack.pop() {
            for &u in &adjacency[v] {
                if !reached[u] {
                    reached[u] = true;
                    stack.push(u);
                }
            }
        }
        if reached.iter().any(|r| !r) {
            return Err(CactusError::Malformed("graph is disconnected".into()));
        }
        Ok(())
    }

    /// Triangles drawn as 3-cycles, root double-circled.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("graph {name} {{\n  node [shape=point];\n  0 [shape=doublecircle, label=\"\"];\n");
        for (a, b) in self.edges() {
            out.push_str(&format!("  {a} -- {b};\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// Cactus of the `∼`-class of `f`: one triangle per vertex, children
/// joined by a `+` edge hang at the left bottom vertex and those joined by
/// a `-` edge at the right one; the roots' triangles share one apex.
pub fn forest_class_to_cactus(f: &SignedForest) -> Cactus {
    let n = f.len();
    let mut left: Vec<Vec<Triangle>> = vec![Vec::new(); n];
    let mut right: Vec<Vec<Triangle>> = vec![Vec::new(); n];
    let mut top = Vec::new();
    for v in f.topological_order().into_iter().rev() {
        let tri = Triangle::new(
            Cactus {
                triangles: std::mem::take(&mut left[v]),
            },
            Cactus {
                triangles: std::mem::take(&mut right[v]),
            },
        );
        match (f.parent(v), f.sign(v)) {
            (Some(p), Some(Sign::Minus)) => right[p].push(tri),
            (Some(p), _) => left[p].push(tri),
            (None, _) => top.push(tri),
        }
    }
    Cactus::new(top)
}

/// Inverse of [`forest_class_to_cactus`] up to `∼`: triangles at the root
/// become roots, and the triangles on the left (right) side of a triangle
/// become its `+` (`-`) children. Vertices are numbered in preorder.
pub fn cactus_to_forest(c: &Cactus) -> SignedForest {
    let mut parent = Vec::new();
    let mut sign = Vec::new();
    fn visit(t: &Triangle, up: Option<(usize, Sign)>, parent: &mut Vec<Option<usize>>, sign: &mut Vec<Option<Sign>>) {
        let v = parent.len();
        parent.push(up.map(|(p, _)| p));
        sign.push(up.map(|(_, s)| s));
        for child in &t.left.triangles {
            visit(child, Some((v, Sign::Plus)), parent, sign);
        }
        for child in &t.right.triangles {
            visit(child, Some((v, Sign::Minus)), parent, sign);
        }
    }
    for t in &c.triangles {
        visit(t, None, &mut parent, &mut sign);
    }
    SignedForest::new(parent, sign).expect("preorder numbering yields a forest")
}

/// All rooted triangular cacti with `n` triangles up to isomorphism, in
/// canonical order. Built recursively as multisets of triangles over
/// unordered pairs of smaller cacti.
pub fn enumerate_cacti(n: usize) -> Result<Vec<Cactus>, CactusError> {
    if n > MAX_TRIANGLES {
        return Err(CactusError::TooManyTriangles { n, max: MAX_TRIANGLES });
    }
    // cacti[k]: every cactus with k triangles, sorted
    let mut cacti: Vec<Vec<Cactus>> = vec![vec![Cactus::point()]];
    // triangles[k]: every triangle of total size k, sorted
    let mut triangles: Vec<Vec<Triangle>> = vec![Vec::new()];
    for size in 1..=n {
        let mut layer = Vec::new();
        for a in 0..size {
            let b = size - 1 - a;
            if a > b {
                break;
            }
            for (i, x) in cacti[a].iter().enumerate() {
                let ys = if a == b { &cacti[b][i..] } else { &cacti[b][..] };
                for y in ys {
                    layer.push(Triangle::new(x.clone(), y.clone()));
                }
            }
        }
        triangles.push(layer);

        let pool: Vec<&Triangle> = triangles.iter().flatten().collect();
        let mut out = Vec::new();
        multisets(&pool, 0, size, &mut Vec::new(), &mut out);
        let mut layer: Vec<Cactus> = out
            .into_iter()
            .map(|ts| Cactus { triangles: ts }.normalized())
            .collect();
        layer.sort();
        cacti.push(layer);
    }
    Ok(cacti.swap_remove(n))
}

fn multisets(
    pool: &[&Triangle],
    start: usize,
    remaining: usize,
    chosen: &mut Vec<Triangle>,
    out: &mut Vec<Vec<Triangle>>,
) {
    if remaining == 0 {
        out.push(chosen.clone());
        return;
    }
    for i in start..pool.len() {
        let s = pool[i].size();
        if s > remaining {
            break;
        }
        chosen.push(pool[i].clone());
        multisets(pool, i, remaining - s, chosen, out);
        chosen.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Sign::*;

    fn leaf() -> Triangle {
        Triangle::new(Cactus::point(), Cactus::point())
    }

    #[test]
    fn empty_forest_is_a_point() {
        let c = forest_class_to_cactus(&SignedForest::empty());
        assert_eq!(c, Cactus::point());
        assert_eq!(c.size(), 0);
        assert_eq!(c.to_graph().vertex_count, 1);
    }

    #[test]
    fn isolated_roots_give_a_star() {
        let c = forest_class_to_cactus(&SignedForest::isolated_roots(4));
        assert_eq!(c, Cactus::star(4));
        let g = c.to_graph();
        assert_eq!(g.vertex_count, 9);
        assert!(g.triangles.iter().all(|t| t[0] == 0));
        g.check().unwrap();
    }

    #[test]
    fn construction_example() {
        // root - child - grandchildren with signs -, +
        let f = SignedForest::from_edges(4, [(1, 0, Plus), (2, 1, Minus), (3, 1, Plus)]).unwrap();
        let expected = Cactus::new(vec![Triangle::new(
            Cactus::new(vec![Triangle::new(
                Cactus::new(vec![leaf()]),
                Cactus::new(vec![leaf()]),
            )]),
            Cactus::point(),
        )]);
        assert_eq!(forest_class_to_cactus(&f), expected);
    }

    #[test]
    fn single_triangle_is_a_single_root() {
        assert_eq!(cactus_to_forest(&Cactus::star(1)), SignedForest::isolated_roots(1));
    }

    #[test]
    fn class_function_under_flips() {
        let f = SignedForest::from_edges(5, [(1, 0, Plus), (2, 0, Minus), (3, 2, Plus), (4, 2, Plus)]).unwrap();
        let c = forest_class_to_cactus(&f);
        for i in 0..5 {
            assert_eq!(forest_class_to_cactus(&f.apply_r(i).unwrap()), c);
        }
    }

    #[test]
    fn small_counts() {
        let counts: Vec<usize> = (0..=7).map(|n| enumerate_cacti(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 13, 37, 111, 345]);
        assert!(enumerate_cacti(MAX_TRIANGLES + 1).is_err());
    }

    #[test]
    fn generated_cacti_satisfy_axioms() {
        for n in 0..=6 {
            for c in enumerate_cacti(n).unwrap() {
                assert_eq!(c.size(), n);
                let g = c.to_graph();
                assert_eq!(g.vertex_count, 2 * n + 1);
                g.check().unwrap();
            }
        }
    }

    #[test]
    fn json_form() {
        let c = Cactus::new(vec![Triangle::new(Cactus::star(1), Cactus::point())]);
        let text = c.to_json().to_string();
        assert_eq!(text, "[[[],[[[],[]]]]]");
        assert_eq!(Cactus::from_json_str(&text).unwrap(), c);
        assert!(Cactus::from_json_str("[[[]]]").is_err());
    }

    #[test]
    fn graph_check_rejects_shared_edges() {
        let g = CactusGraph {
            vertex_count: 5,
            triangles: vec![[0, 1, 2], [0, 1, 3]],
        };
        assert!(g.check().is_err());
    }
}
