//! Signed rooted forests and the flip operations acting on them.
//!
//! A forest on `n` vertices is stored as a parent array. Every non-root
//! vertex `i` carries the sign of the edge `{i, parent(i)}`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForestError {
    #[error("vertex {vertex} out of range for a forest on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("parent array has length {parent} but sign array has length {sign}")]
    LengthMismatch { parent: usize, sign: usize },
    #[error("vertex {vertex} lies on a cycle of parent pointers")]
    Cycle { vertex: usize },
    #[error("vertex {vertex}: a sign must be given exactly when the vertex has a parent")]
    SignMismatch { vertex: usize },
    #[error("forests have different sizes ({left} vs {right})")]
    SizeMismatch { left: usize, right: usize },
    #[error("not a permutation of 0..{n}")]
    BadPermutation { n: usize },
    #[error("invalid forest json: {0}")]
    Json(String),
}

/// Sign of a forest edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A rooted forest on the vertices `0..n` with a sign on every non-root edge.
///
/// Instances are immutable once validated; every operation returns a new
/// forest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedForest {
    parent: Vec<Option<usize>>,
    sign: Vec<Option<Sign>>,
}

impl SignedForest {
    /// Validates the parent/sign arrays and builds a forest.
    pub fn new(parent: Vec<Option<usize>>, sign: Vec<Option<Sign>>) -> Result<Self, ForestError> {
        let n = parent.len();
        if sign.len() != n {
            return Err(ForestError::LengthMismatch {
                parent: n,
                sign: sign.len(),
            });
        }
        for (i, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= n {
                    return Err(ForestError::VertexOutOfRange { vertex: p, n });
                }
            }
            if p.is_some() != sign[i].is_some() {
                return Err(ForestError::SignMismatch { vertex: i });
            }
        }
        // 0 = unvisited, 1 = on the current path, 2 = reaches a root
        let mut state = vec![0u8; n];
        let mut path = Vec::new();
        for start in 0..n {
            let mut v = start;
            loop {
                match state[v] {
                    2 => break,
                    1 => return Err(ForestError::Cycle { vertex: v }),
                    _ => {}
                }
                state[v] = 1;
                path.push(v);
                match parent[v] {
                    Some(p) => v = p,
                    None => break,
                }
            }
            for u in path.drain(..) {
                state[u] = 2;
            }
        }
        Ok(SignedForest { parent, sign })
    }

    /// The forest with no vertices.
    pub fn empty() -> Self {
        SignedForest {
            parent: Vec::new(),
            sign: Vec::new(),
        }
    }

    /// `n` isolated roots.
    pub fn isolated_roots(n: usize) -> Self {
        SignedForest {
            parent: vec![None; n],
            sign: vec![None; n],
        }
    }

    /// Builds a forest from `(vertex, parent, sign)` triples; vertices not
    /// mentioned are roots.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize, Sign)>) -> Result<Self, ForestError> {
        let mut parent = vec![None; n];
        let mut sign = vec![None; n];
        for (child, p, s) in edges {
            if child >= n {
                return Err(ForestError::VertexOutOfRange { vertex: child, n });
            }
            parent[child] = Some(p);
            sign[child] = Some(s);
        }
        Self::new(parent, sign)
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn sign(&self, v: usize) -> Option<Sign> {
        self.sign[v]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn signs(&self) -> &[Option<Sign>] {
        &self.sign
    }

    pub fn is_root(&self, v: usize) -> bool {
        self.parent[v].is_none()
    }

    pub fn roots(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.is_root(v)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.parent.iter().filter(|p| p.is_some()).count()
    }

    /// Child lists, each in increasing vertex order.
    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.len()];
        for (v, p) in self.parent.iter().enumerate() {
            if let Some(p) = *p {
                out[p].push(v);
            }
        }
        out
    }

    /// Vertices in breadth-first order from the roots; every vertex appears
    /// after its parent.
    pub fn topological_order(&self) -> Vec<usize> {
        let children = self.children();
        let mut order = self.roots();
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            order.extend_from_slice(&children[v]);
        }
        order
    }

    /// Depth of each vertex (roots have depth 0).
    pub fn depths(&self) -> Vec<usize> {
        let mut depth = vec![0; self.len()];
        for v in self.topological_order() {
            if let Some(p) = self.parent[v] {
                depth[v] = depth[p] + 1;
            }
        }
        depth
    }

    /// The operation `r_i`: negates the sign of every edge joining `i` to one
    /// of its children.
    pub fn apply_r(&self, i: usize) -> Result<SignedForest, ForestError> {
        if i >= self.len() {
            return Err(ForestError::VertexOutOfRange {
                vertex: i,
                n: self.len(),
            });
        }
        let mut out = self.clone();
        for (v, p) in self.parent.iter().enumerate() {
            if *p == Some(i) {
                out.sign[v] = out.sign[v].map(Sign::flip);
            }
        }
        Ok(out)
    }

    /// Applies `r_i` for every vertex `i` in `mask` (bit `i` set).
    pub fn apply_r_mask(&self, mask: u64) -> SignedForest {
        let mut out = self.clone();
        for (v, p) in self.parent.iter().enumerate() {
            if let Some(p) = *p {
                if p < 64 && mask >> p & 1 == 1 {
                    out.sign[v] = out.sign[v].map(Sign::flip);
                }
            }
        }
        out
    }

    /// Renames vertex `v` to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<SignedForest, ForestError> {
        let n = self.len();
        check_permutation(perm, n)?;
        let mut parent = vec![None; n];
        let mut sign = vec![None; n];
        for v in 0..n {
            parent[perm[v]] = self.parent[v].map(|p| perm[p]);
            sign[perm[v]] = self.sign[v];
        }
        Ok(SignedForest { parent, sign })
    }

    /// Sets the sign of every edge incident on a root to `+`.
    pub fn with_root_edges_plus(&self) -> SignedForest {
        let mut out = self.clone();
        for v in 0..self.len() {
            if let Some(p) = self.parent[v] {
                if self.is_root(p) {
                    out.sign[v] = Some(Sign::Plus);
                }
            }
        }
        out
    }

    /// Splits the forest into its trees; vertices of each tree are
    /// renumbered in increasing order of their original labels.
    pub fn components(&self) -> Vec<SignedForest> {
        let n = self.len();
        let mut root_of = vec![usize::MAX; n];
        for v in self.topological_order() {
            root_of[v] = match self.parent[v] {
                Some(p) => root_of[p],
                None => v,
            };
        }
        self.roots()
            .into_iter()
            .map(|r| {
                let members: Vec<usize> = (0..n).filter(|&v| root_of[v] == r).collect();
                let mut index = vec![usize::MAX; n];
                for (k, &v) in members.iter().enumerate() {
                    index[v] = k;
                }
                SignedForest {
                    parent: members.iter().map(|&v| self.parent[v].map(|p| index[p])).collect(),
                    sign: members.iter().map(|&v| self.sign[v]).collect(),
                }
            })
            .collect()
    }

    /// Removes the single root of a tree; its children become roots.
    pub fn erase_root(&self) -> Option<SignedForest> {
        let roots = self.roots();
        if roots.len() != 1 {
            return None;
        }
        let r = roots[0];
        let index = |v: usize| if v > r { v - 1 } else { v };
        let mut parent = Vec::with_capacity(self.len() - 1);
        let mut sign = Vec::with_capacity(self.len() - 1);
        for v in (0..self.len()).filter(|&v| v != r) {
            match self.parent[v] {
                Some(p) if p == r => {
                    parent.push(None);
                    sign.push(None);
                }
                p => {
                    parent.push(p.map(index));
                    sign.push(self.sign[v]);
                }
            }
        }
        Some(SignedForest { parent, sign })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ForestJson::from(self)).expect("forest json is always serializable")
    }

    pub fn from_json_str(s: &str) -> Result<Self, ForestError> {
        let raw: ForestJson = serde_json::from_str(s).map_err(|e| ForestError::Json(e.to_string()))?;
        raw.try_into()
    }

    /// Graphviz rendering: roots are double circles, minus edges carry a
    /// "−" label and plus edges are unlabeled.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("digraph {name} {{\n  node [shape=circle];\n");
        for v in 0..self.len() {
            if self.is_root(v) {
                out.push_str(&format!("  {v} [shape=doublecircle];\n"));
            } else {
                out.push_str(&format!("  {v};\n"));
            }
        }
        for v in 0..self.len() {
            if let Some(p) = self.parent[v] {
                match self.sign[v] {
                    Some(Sign::Minus) => out.push_str(&format!("  {p} -> {v} [label=\"\u{2212}\"];\n")),
                    _ => out.push_str(&format!("  {p} -> {v};\n")),
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<(), ForestError> {
    if perm.len() != n {
        return Err(ForestError::BadPermutation { n });
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(ForestError::BadPermutation { n });
        }
        seen[p] = true;
    }
    Ok(())
}

/// Wire form: `{"n": 3, "parent": [1, null, 1], "sign": ["+", null, "-"]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ForestJson {
    pub n: usize,
    pub parent: Vec<Option<usize>>,
    pub sign: Vec<Option<String>>,
}

impl From<&SignedForest> for ForestJson {
    fn from(f: &SignedForest) -> Self {
        ForestJson {
            n: f.len(),
            parent: f.parent.clone(),
            sign: f.sign.iter().map(|s| s.map(|s| s.symbol().to_string())).collect(),
        }
    }
}

impl TryFrom<ForestJson> for SignedForest {
    type Error = ForestError;

    fn try_from(raw: ForestJson) -> Result<Self, ForestError> {
        if raw.parent.len() != raw.n {
            return Err(ForestError::Json(format!(
                "n = {} but parent has {} entries",
                raw.n,
                raw.parent.len()
            )));
        }
        let sign = raw
            .sign
            .iter()
            .map(|s| match s.as_deref() {
                None => Ok(None),
                Some("+") => Ok(Some(Sign::Plus)),
                Some("-") | Some("\u{2212}") => Ok(Some(Sign::Minus)),
                Some(other) => Err(ForestError::Json(format!("unknown sign {other:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        SignedForest::new(raw.parent, sign)
    }
}

impl Serialize for SignedForest {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ForestJson::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SignedForest {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = ForestJson::deserialize(deserializer)?;
        raw.try_into().map_err(serde::de::Error::custom)
    }
}
