//! Canonical codes for signed rooted forests under isomorphism, `∼` and `≈`.
//!
//! A vertex is encoded bottom-up as `OPEN entry* CLOSE`, where each entry is
//! an edge token followed by the code of the child, and the entries are
//! sorted. The encoding is prefix-free, so equal codes mean equal multisets
//! at every vertex. Under `∼` the flips at distinct vertices commute and act
//! on disjoint edge sets, so each vertex independently takes the smaller of
//! its sorted entry list and the sorted list with every child sign negated.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::forest::{ForestError, Sign, SignedForest};

pub(crate) const CLOSE: u8 = 0;
pub(crate) const OPEN: u8 = 1;
pub(crate) const PLUS: u8 = 2;
pub(crate) const MINUS: u8 = 3;
pub(crate) const UNSIGNED: u8 = 4;

/// Equivalence relation on signed rooted forests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// Relabeling of vertices.
    Iso,
    /// Relabeling plus the flips `r_i`.
    Sim,
    /// `Sim` with the signs of root edges ignored.
    Approx,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Iso => "iso",
            Relation::Sim => "sim",
            Relation::Approx => "approx",
        })
    }
}

impl FromStr for Relation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "iso" => Ok(Relation::Iso),
            "sim" => Ok(Relation::Sim),
            "approx" => Ok(Relation::Approx),
            other => Err(format!("unknown relation {other:?} (expected iso, sim or approx)")),
        }
    }
}

/// Token sequence identifying an equivalence class. Codes compare
/// lexicographically; only codes under the same relation are meaningful to
/// compare.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode {
    relation: Relation,
    tokens: Vec<u8>,
}

impl CanonicalCode {
    pub(crate) fn from_tokens(relation: Relation, tokens: Vec<u8>) -> Self {
        CanonicalCode { relation, tokens }
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn tokens(&self) -> &[u8] {
        &self.tokens
    }

    /// Rebuilds a forest realizing this code. Vertices are numbered in
    /// preorder following the canonical order of children; roots come in
    /// code order. Unsigned root edges are given the sign `+`.
    pub fn decode(&self) -> SignedForest {
        let mut parent: Vec<Option<usize>> = Vec::new();
        let mut sign: Vec<Option<Sign>> = Vec::new();
        // stack of open vertices
        let mut stack: Vec<usize> = Vec::new();
        let mut pending: Option<Sign> = None;
        for &t in &self.tokens {
            match t {
                OPEN => {
                    let v = parent.len();
                    parent.push(stack.last().copied());
                    sign.push(if stack.is_empty() {
                        None
                    } else {
                        Some(pending.take().unwrap_or(Sign::Plus))
                    });
                    stack.push(v);
                }
                CLOSE => {
                    stack.pop();
                }
                PLUS => pending = Some(Sign::Plus),
                MINUS => pending = Some(Sign::Minus),
                _ => pending = Some(Sign::Plus),
            }
        }
        SignedForest::new(parent, sign).expect("decoded codes are well formed")
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &t in &self.tokens {
            f.write_str(match t {
                OPEN => "(",
                CLOSE => ")",
                PLUS => "+",
                MINUS => "-",
                _ => "*",
            })?;
        }
        Ok(())
    }
}

/// Combines the (edge token, child code) entries of one vertex into the
/// vertex code. With `flip_invariant`, the entries are also read with all
/// signs negated and the smaller result wins.
pub(crate) fn vertex_code(mut entries: Vec<Vec<u8>>, flip_invariant: bool) -> Vec<u8> {
    entries.sort_unstable();
    let as_is = join_vertex(&entries);
    if !flip_invariant || entries.iter().all(|e| e[0] == UNSIGNED) {
        return as_is;
    }
    let mut flipped: Vec<Vec<u8>> = entries
        .into_iter()
        .map(|mut e| {
            e[0] = match e[0] {
                PLUS => MINUS,
                MINUS => PLUS,
                t => t,
            };
            e
        })
        .collect();
    flipped.sort_unstable();
    let flipped = join_vertex(&flipped);
    as_is.min(flipped)
}

fn join_vertex(entries: &[Vec<u8>]) -> Vec<u8> {
    let len = 2 + entries.iter().map(Vec::len).sum::<usize>();
    let mut out = Vec::with_capacity(len);
    out.push(OPEN);
    for e in entries {
        out.extend_from_slice(e);
    }
    out.push(CLOSE);
    out
}

pub(crate) fn edge_entry(token: u8, child: &[u8]) -> Vec<u8> {
    let mut e = Vec::with_capacity(child.len() + 1);
    e.push(token);
    e.extend_from_slice(child);
    e
}

/// Forest code: sorted concatenation of the tree codes.
pub(crate) fn join_forest(mut trees: Vec<Vec<u8>>) -> Vec<u8> {
    trees.sort_unstable();
    trees.concat()
}

fn sign_token(s: Sign) -> u8 {
    match s {
        Sign::Plus => PLUS,
        Sign::Minus => MINUS,
    }
}

/// Canonical code of `f` under `rel`.
pub fn canonical_code(f: &SignedForest, rel: Relation) -> CanonicalCode {
    let n = f.len();
    let mut codes: Vec<Vec<u8>> = vec![Vec::new(); n];
    let mut entries: Vec<Vec<Vec<u8>>> = vec![Vec::new(); n];
    let flip_invariant = rel != Relation::Iso;
    for v in f.topological_order().into_iter().rev() {
        let code = vertex_code(std::mem::take(&mut entries[v]), flip_invariant);
        if let Some(p) = f.parent(v) {
            let token = if rel == Relation::Approx && f.is_root(p) {
                UNSIGNED
            } else {
                sign_token(f.sign(v).expect("non-root vertices are signed"))
            };
            entries[p].push(edge_entry(token, &code));
        } else {
            codes[v] = code;
        }
    }
    let trees = f.roots().into_iter().map(|r| std::mem::take(&mut codes[r])).collect();
    CanonicalCode::from_tokens(rel, join_forest(trees))
}

pub fn are_equivalent(f1: &SignedForest, f2: &SignedForest, rel: Relation) -> Result<bool, ForestError> {
    if f1.len() != f2.len() {
        return Err(ForestError::SizeMismatch {
            left: f1.len(),
            right: f2.len(),
        });
    }
    Ok(canonical_code(f1, rel) == canonical_code(f2, rel))
}

#[cfg(test)]
mod tests {
    use super::*;
    use Sign::*;

    fn f(n: usize, edges: &[(usize, usize, Sign)]) -> SignedForest {
        SignedForest::from_edges(n, edges.iter().copied()).unwrap()
    }

    /// The ten signed forests on three vertices up to isomorphism: signed
    /// paths, signed cherries, an edge plus a point, three points.
    fn three_vertex_forests() -> Vec<SignedForest> {
        vec![
            f(3, &[(1, 0, Plus), (2, 1, Plus)]),
            f(3, &[(1, 0, Plus), (2, 1, Minus)]),
            f(3, &[(1, 0, Minus), (2, 1, Plus)]),
            f(3, &[(1, 0, Minus), (2, 1, Minus)]),
            f(3, &[(1, 0, Plus), (2, 0, Plus)]),
            f(3, &[(1, 0, Plus), (2, 0, Minus)]),
            f(3, &[(1, 0, Minus), (2, 0, Minus)]),
            f(3, &[(1, 0, Plus)]),
            f(3, &[(1, 0, Minus)]),
            f(3, &[]),
        ]
    }

    #[test]
    fn relabeling_invariance_under_iso() {
        let a = f(3, &[(1, 0, Plus), (2, 0, Minus)]);
        let b = f(3, &[(0, 2, Minus), (1, 2, Plus)]);
        assert_eq!(canonical_code(&a, Relation::Iso), canonical_code(&b, Relation::Iso));
    }

    #[test]
    fn three_vertex_sim_classes() {
        let forests = three_vertex_forests();
        let sim: Vec<_> = forests.iter().map(|x| canonical_code(x, Relation::Sim)).collect();
        // the four signed 3-paths form one class
        assert!(sim[0..4].iter().all(|c| *c == sim[0]));
        assert_eq!(sim[4], sim[6]);
        assert_ne!(sim[4], sim[5]);
        assert_eq!(sim[7], sim[8]);
        let mut distinct = sim.clone();
        distinct.sort();
        distinct.dedup();
        assert_eq!(distinct.len(), 5);

        let mut iso: Vec<_> = forests.iter().map(|x| canonical_code(x, Relation::Iso)).collect();
        iso.sort();
        iso.dedup();
        assert_eq!(iso.len(), 10);
    }

    #[test]
    fn t8_sim_t9() {
        let forests = three_vertex_forests();
        assert!(are_equivalent(&forests[7], &forests[8], Relation::Sim).unwrap());
        assert!(!are_equivalent(&forests[7], &forests[8], Relation::Iso).unwrap());
    }

    #[test]
    fn approx_forgets_only_root_edge_signs() {
        let fork_plus = f(4, &[(1, 0, Plus), (2, 1, Plus), (3, 1, Plus)]);
        let fork_mixed = f(4, &[(1, 0, Plus), (2, 1, Plus), (3, 1, Minus)]);
        assert!(!are_equivalent(&fork_plus, &fork_mixed, Relation::Approx).unwrap());
        // stars differing only on root edges
        let star_plus = f(4, &[(1, 0, Plus), (2, 0, Plus), (3, 0, Plus)]);
        let star_mixed = f(4, &[(1, 0, Plus), (2, 0, Plus), (3, 0, Minus)]);
        assert!(!are_equivalent(&star_plus, &star_mixed, Relation::Sim).unwrap());
        assert!(are_equivalent(&star_plus, &star_mixed, Relation::Approx).unwrap());
    }

    #[test]
    fn reflexive_and_size_mismatch() {
        for x in three_vertex_forests() {
            for rel in [Relation::Iso, Relation::Sim, Relation::Approx] {
                assert!(are_equivalent(&x, &x, rel).unwrap());
            }
        }
        assert!(are_equivalent(&three_vertex_forests()[0], &SignedForest::empty(), Relation::Iso).is_err());
    }

    #[test]
    fn decode_realizes_the_code() {
        for x in three_vertex_forests() {
            for rel in [Relation::Iso, Relation::Sim, Relation::Approx] {
                let code = canonical_code(&x, rel);
                let rep = code.decode();
                assert_eq!(canonical_code(&rep, rel), code);
                assert!(are_equivalent(&rep, &x, rel).unwrap());
            }
        }
        assert_eq!(
            canonical_code(&SignedForest::empty(), Relation::Sim).decode(),
            SignedForest::empty()
        );
    }

    #[test]
    fn relation_parsing() {
        assert_eq!("SIM".parse::<Relation>().unwrap(), Relation::Sim);
        assert!("foo".parse::<Relation>().is_err());
    }
}
