//! Brute-force oracle: every labeled signed forest on `n` vertices, grouped
//! into orbits of the relabeling / flip action with a union-find.
#![allow(dead_code)]

use std::collections::HashMap;

use fano_bott::{Relation, Sign, SignedForest};

/// All signed forests on the labeled vertex set `0..n`.
pub fn labeled_forests(n: usize) -> Vec<SignedForest> {
    let mut out = Vec::new();
    let mut parent = vec![None; n];
    fill_parents(0, &mut parent, &mut out);
    out
}

fn fill_parents(v: usize, parent: &mut Vec<Option<usize>>, out: &mut Vec<SignedForest>) {
    let n = parent.len();
    if v == n {
        let edges: Vec<usize> = (0..n).filter(|&u| parent[u].is_some()).collect();
        for mask in 0u32..1 << edges.len() {
            let mut sign = vec![None; n];
            for (k, &u) in edges.iter().enumerate() {
                sign[u] = Some(if mask >> k & 1 == 1 { Sign::Minus } else { Sign::Plus });
            }
            if let Ok(f) = SignedForest::new(parent.clone(), sign) {
                out.push(f);
            }
        }
        return;
    }
    for p in std::iter::once(None).chain((0..n).filter(|&p| p != v).map(Some)) {
        parent[v] = p;
        fill_parents(v + 1, parent, out);
    }
    parent[v] = None;
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.parent[a] = b;
        }
    }
}

/// Moves generating the relation: adjacent transpositions of labels, every
/// `r_i`, and for `Approx` the sign change of a single root-incident edge.
fn neighbours(f: &SignedForest, rel: Relation) -> Vec<SignedForest> {
    let n = f.len();
    let mut out = Vec::new();
    for i in 0..n.saturating_sub(1) {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(i, i + 1);
        out.push(f.relabel(&perm).unwrap());
    }
    if rel != Relation::Iso {
        for i in 0..n {
            out.push(f.apply_r(i).unwrap());
        }
    }
    if rel == Relation::Approx {
        for v in 0..n {
            if let Some(p) = f.parent(v) {
                if f.is_root(p) {
                    let mut sign = f.signs().to_vec();
                    sign[v] = sign[v].map(Sign::flip);
                    out.push(SignedForest::new(f.parents().to_vec(), sign).unwrap());
                }
            }
        }
    }
    out
}

/// Orbit label of every forest in `forests`, which must be closed under the
/// generating moves.
pub fn orbit_labels(forests: &[SignedForest], rel: Relation) -> Vec<usize> {
    let index: HashMap<&SignedForest, usize> = forests.iter().enumerate().map(|(k, f)| (f, k)).collect();
    let mut uf = UnionFind::new(forests.len());
    for (k, f) in forests.iter().enumerate() {
        for g in neighbours(f, rel) {
            let j = *index.get(&g).expect("labeled forests are closed under the moves");
            uf.union(k, j);
        }
    }
    (0..forests.len()).map(|k| uf.find(k)).collect()
}

/// Compares the orbit partition with canonical-code equality on every pair
/// of labeled forests on `n` vertices. Returns the number of orbits or a
/// description of the first disagreeing pair.
pub fn check_relation(n: usize, rel: Relation) -> Result<usize, String> {
    let forests = labeled_forests(n);
    let orbits = orbit_labels(&forests, rel);
    let codes: Vec<_> = forests.iter().map(|f| fano_bott::canonical_code(f, rel)).collect();
    // Pairwise agreement is equivalent to the code -> orbit and orbit -> code
    // maps both being well defined.
    let mut orbit_of_code = HashMap::new();
    let mut code_of_orbit = HashMap::new();
    for k in 0..forests.len() {
        if let Some(&o) = orbit_of_code.get(&codes[k]) {
            if o != orbits[k] {
                return Err(format!(
                    "{rel} n={n}: equal codes in different orbits at {:?}",
                    forests[k]
                ));
            }
        }
        if let Some(c) = code_of_orbit.get(&orbits[k]) {
            if *c != codes[k] {
                return Err(format!("{rel} n={n}: one orbit carries two codes at {:?}", forests[k]));
            }
        }
        orbit_of_code.insert(codes[k].clone(), orbits[k]);
        code_of_orbit.insert(orbits[k], codes[k].clone());
    }
    Ok(code_of_orbit.len())
}
