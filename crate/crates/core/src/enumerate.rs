//! Orderly generation of equivalence classes of signed rooted forests.
//!
//! Classes are generated directly as canonical codes, size by size: a tree
//! is a root over a multiset of (edge token, smaller tree) entries and a
//! forest is a multiset of trees. Nothing labeled is ever enumerated.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::canon::{edge_entry, join_forest, vertex_code, CanonicalCode, Relation, MINUS, PLUS, UNSIGNED};
use crate::forest::SignedForest;

/// Environment variable overriding [`EnumLimits::max_codes`].
pub const MAX_CODES_ENV: &str = "FANO_BOTT_MAX_CODES";

/// Largest vertex count accepted by the enumerators.
pub const MAX_VERTICES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("tree enumeration needs at least one vertex")]
    EmptyTree,
    #[error("n = {n} exceeds the enumeration bound of {max} vertices")]
    TooManyVertices { n: usize, max: usize },
    #[error("enumeration at n = {n} exceeded the cap of {cap} generated codes (set {MAX_CODES_ENV} to raise it)")]
    ResourceBound { n: usize, cap: usize },
}

/// Resource cap on the number of codes produced while generating.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumLimits {
    pub max_codes: usize,
}

impl Default for EnumLimits {
    fn default() -> Self {
        EnumLimits { max_codes: 4_000_000 }
    }
}

impl EnumLimits {
    /// Defaults, overridden by `FANO_BOTT_MAX_CODES` when it parses.
    pub fn from_env() -> Self {
        std::env::var(MAX_CODES_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(|max_codes| EnumLimits { max_codes })
            .unwrap_or_default()
    }
}

struct Budget {
    n: usize,
    used: usize,
    cap: usize,
}

impl Budget {
    fn spend(&mut self, k: usize) -> Result<(), EnumError> {
        self.used += k;
        if self.used > self.cap {
            Err(EnumError::ResourceBound {
                n: self.n,
                cap: self.cap,
            })
        } else {
            Ok(())
        }
    }
}

/// Tree codes under `rel` indexed by size (`layers[0]` is empty), as they
/// appear as forest components.
fn tree_layers(rel: Relation, n: usize, budget: &mut Budget) -> Result<Vec<Vec<Vec<u8>>>, EnumError> {
    // Below the root edges, APPROX behaves like SIM.
    let inner_rel = if rel == Relation::Approx { Relation::Sim } else { rel };
    let mut inner: Vec<Vec<Vec<u8>>> = vec![Vec::new()];
    for size in 1..=n {
        let layer = trees_of_size(&inner, size, edge_tokens(inner_rel), inner_rel != Relation::Iso, budget)?;
        inner.push(layer);
    }
    if rel != Relation::Approx {
        return Ok(inner);
    }
    let mut outer = vec![Vec::new()];
    for size in 1..=n {
        outer.push(trees_of_size(&inner, size, &[UNSIGNED], false, budget)?);
    }
    Ok(outer)
}

fn edge_tokens(rel: Relation) -> &'static [u8] {
    match rel {
        Relation::Approx => &[UNSIGNED],
        _ => &[PLUS, MINUS],
    }
}

/// All trees with `size` vertices whose root entries use `tokens` over the
/// smaller trees in `below`.
fn trees_of_size(
    below: &[Vec<Vec<u8>>],
    size: usize,
    tokens: &[u8],
    flip_invariant: bool,
    budget: &mut Budget,
) -> Result<Vec<Vec<u8>>, EnumError> {
    let mut items: Vec<(usize, Vec<u8>)> = Vec::new();
    for (k, layer) in below.iter().enumerate().take(size).skip(1) {
        for code in layer {
            for &t in tokens {
                items.push((k, edge_entry(t, code)));
            }
        }
    }
    let mut out = BTreeSet::new();
    for_each_multiset(&items, size - 1, &mut |chosen| {
        budget.spend(1)?;
        let entries = chosen.iter().map(|&i| items[i].1.clone()).collect();
        out.insert(vertex_code(entries, flip_invariant));
        Ok(())
    })?;
    Ok(out.into_iter().collect())
}

/// Calls `visit` with every multiset (as a non-decreasing index list) of
/// weighted items whose weights sum to `total`. Items must be sorted by
/// weight. Stops early once `visit` returns an error.
fn for_each_multiset(
    items: &[(usize, Vec<u8>)],
    total: usize,
    visit: &mut dyn FnMut(&[usize]) -> Result<(), EnumError>,
) -> Result<(), EnumError> {
    fn rec(
        items: &[(usize, Vec<u8>)],
        start: usize,
        remaining: usize,
        chosen: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> Result<(), EnumError>,
    ) -> Result<(), EnumError> {
        if remaining == 0 {
            return visit(chosen);
        }
        for i in start..items.len() {
            let w = items[i].0;
            if w > remaining {
                break;
            }
            chosen.push(i);
            rec(items, i, remaining - w, chosen, visit)?;
            chosen.pop();
        }
        Ok(())
    }
    rec(items, 0, total, &mut Vec::new(), visit)
}

fn check_n(n: usize) -> Result<(), EnumError> {
    if n > MAX_VERTICES {
        Err(EnumError::TooManyVertices { n, max: MAX_VERTICES })
    } else {
        Ok(())
    }
}

/// Canonical codes of the classes of signed rooted trees on `n` vertices,
/// in increasing order.
pub fn tree_class_codes(n: usize, rel: Relation, limits: EnumLimits) -> Result<Vec<CanonicalCode>, EnumError> {
    if n == 0 {
        return Err(EnumError::EmptyTree);
    }
    check_n(n)?;
    let mut budget = Budget {
        n,
        used: 0,
        cap: limits.max_codes,
    };
    let layers = tree_layers(rel, n, &mut budget)?;
    Ok(layers[n]
        .iter()
        .map(|c| CanonicalCode::from_tokens(rel, c.clone()))
        .collect())
}

/// Canonical codes of the classes of signed rooted forests on `n`
/// vertices, in increasing order. `n = 0` yields the single empty forest.
pub fn forest_class_codes(n: usize, rel: Relation, limits: EnumLimits) -> Result<Vec<CanonicalCode>, EnumError> {
    check_n(n)?;
    let mut budget = Budget {
        n,
        used: 0,
        cap: limits.max_codes,
    };
    let layers = tree_layers(rel, n, &mut budget)?;
    let mut items: Vec<(usize, Vec<u8>)> = Vec::new();
    for (k, layer) in layers.iter().enumerate().skip(1) {
        for code in layer {
            items.push((k, code.clone()));
        }
    }
    let mut out = Vec::new();
    for_each_multiset(&items, n, &mut |chosen| {
        budget.spend(1)?;
        let trees = chosen.iter().map(|&i| items[i].1.clone()).collect();
        out.push(join_forest(trees));
        Ok(())
    })?;
    out.sort_unstable();
    Ok(out.into_iter().map(|c| CanonicalCode::from_tokens(rel, c)).collect())
}

/// One representative per class of signed rooted trees on `n` vertices,
/// sorted by canonical code.
pub fn enumerate_tree_classes(n: usize, rel: Relation) -> Result<Vec<SignedForest>, EnumError> {
    enumerate_tree_classes_with(n, rel, EnumLimits::from_env())
}

pub fn enumerate_tree_classes_with(
    n: usize,
    rel: Relation,
    limits: EnumLimits,
) -> Result<Vec<SignedForest>, EnumError> {
    Ok(tree_class_codes(n, rel, limits)?
        .iter()
        .map(CanonicalCode::decode)
        .collect())
}

/// One representative per class of signed rooted forests on `n` vertices,
/// sorted by canonical code.
pub fn enumerate_forest_classes(n: usize, rel: Relation) -> Result<Vec<SignedForest>, EnumError> {
    enumerate_forest_classes_with(n, rel, EnumLimits::from_env())
}

pub fn enumerate_forest_classes_with(
    n: usize,
    rel: Relation,
    limits: EnumLimits,
) -> Result<Vec<SignedForest>, EnumError> {
    Ok(forest_class_codes(n, rel, limits)?
        .iter()
        .map(CanonicalCode::decode)
        .collect())
}

/// Number of diffeomorphism classes of indecomposable Fano Bott manifolds
/// of complex dimension `n`, i.e. the number of `∼`-classes of forests on
/// `n - 1` vertices.
pub fn count_indecomposable_diffeo_classes(n: usize) -> Result<usize, EnumError> {
    if n == 0 {
        return Err(EnumError::EmptyTree);
    }
    Ok(forest_class_codes(n - 1, Relation::Sim, EnumLimits::from_env())?.len())
}
