//! Bott fans, Batyrev's criterion and the fan/forest correspondence.
//!
//! A Bott fan of dimension `n` is given by `2n` primitive ray generators
//! `v_0..v_{n-1}, w_0..w_{n-1}`; its maximal cones are exactly the
//! selections of one ray from every pair `{v_i, w_i}`, and its primitive
//! collections are the pairs themselves. All arithmetic is exact.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::forest::{check_permutation, ForestError, Sign, SignedForest};

/// Largest dimension accepted; the validity check visits `2^n` cones.
pub const MAX_DIMENSION: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ToricError {
    #[error("expected an n x 2n matrix, got {rows} rows and a row of length {cols}")]
    Shape { rows: usize, cols: usize },
    #[error("dimension {0} exceeds the supported maximum of {MAX_DIMENSION}")]
    DimensionTooLarge(usize),
    #[error("column {} is not a primitive integer vector", .0)]
    NonPrimitiveColumn(ColumnId),
    #[error("the cone {} is not unimodular (determinant {det})", fmt_selection(.selection))]
    NonUnimodularCone { selection: Vec<ColumnId>, det: i128 },
    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("no cone contains v_{0} + w_{0} in its relative interior")]
    NoContainingCone(usize),
    #[error("v_{index} + w_{index} equals both {first} and {second}")]
    AmbiguousRelation {
        index: usize,
        first: ColumnId,
        second: ColumnId,
    },
    #[error("not Fano: the primitive collection {{v_{index}, w_{index}}} has degree {degree}")]
    NotFano { index: usize, degree: i64 },
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("invalid fan input: {0}")]
    Parse(String),
    #[error(transparent)]
    Forest(#[from] ForestError),
}

fn fmt_selection(sel: &[ColumnId]) -> String {
    let parts: Vec<String> = sel.iter().map(ToString::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Names one of the `2n` ray generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ColumnId {
    V(usize),
    W(usize),
}

impl ColumnId {
    fn position(self, n: usize) -> usize {
        match self {
            ColumnId::V(i) => i,
            ColumnId::W(i) => n + i,
        }
    }
}

impl fmt::Display for ColumnId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnId::V(i) => write!(f, "v_{i}"),
            ColumnId::W(i) => write!(f, "w_{i}"),
        }
    }
}

/// Ray generators of a smooth Bott fan.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BottFan {
    n: usize,
    /// `2n` columns of length `n`: `v_0..v_{n-1}` then `w_0..w_{n-1}`.
    columns: Vec<Vec<i64>>,
}

impl BottFan {
    /// Checks every column for primitivity and every maximal cone for
    /// unimodularity. `rows` is the `n x 2n` matrix whose columns are the
    /// ray generators.
    pub fn validate(rows: &[Vec<i64>]) -> Result<BottFan, ToricError> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != 2 * n) {
            return Err(ToricError::Shape {
                rows: n,
                cols: bad.len(),
            });
        }
        if n > MAX_DIMENSION {
            return Err(ToricError::DimensionTooLarge(n));
        }
        let columns: Vec<Vec<i64>> = (0..2 * n).map(|c| rows.iter().map(|r| r[c]).collect()).collect();
        let fan = BottFan { n, columns };
        for c in 0..2 * n {
            if !is_primitive(&fan.columns[c]) {
                return Err(ToricError::NonPrimitiveColumn(fan.column_id(c)));
            }
        }
        for mask in 0..1u64 << n {
            let matrix = fan.cone_matrix(mask);
            let det = determinant(&matrix)?;
            if det.abs() != 1 {
                return Err(ToricError::NonUnimodularCone {
                    selection: fan.selection(mask),
                    det,
                });
            }
        }
        Ok(fan)
    }

    /// Builds a fan without the `2^n` determinant sweep. Callers guarantee
    /// validity.
    fn from_columns_unchecked(n: usize, columns: Vec<Vec<i64>>) -> BottFan {
        BottFan { n, columns }
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn column(&self, id: ColumnId) -> &[i64] {
        &self.columns[id.position(self.n)]
    }

    pub fn v(&self, i: usize) -> &[i64] {
        &self.columns[i]
    }

    pub fn w(&self, i: usize) -> &[i64] {
        &self.columns[self.n + i]
    }

    /// Row-major `n x 2n` matrix.
    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.n)
            .map(|r| self.columns.iter().map(|c| c[r]).collect())
            .collect()
    }

    fn column_id(&self, position: usize) -> ColumnId {
        if position < self.n {
            ColumnId::V(position)
        } else {
            ColumnId::W(position - self.n)
        }
    }

    /// Bit `i` of `mask` selects `w_i` instead of `v_i`.
    fn selection(&self, mask: u64) -> Vec<ColumnId> {
        (0..self.n)
            .map(|i| {
                if mask >> i & 1 == 1 {
                    ColumnId::W(i)
                } else {
                    ColumnId::V(i)
                }
            })
            .collect()
    }

    /// Row-major matrix whose columns are the generators of the cone `mask`.
    fn cone_matrix(&self, mask: u64) -> Vec<Vec<i128>> {
        let cols: Vec<&[i64]> = self.selection(mask).into_iter().map(|id| self.column(id)).collect();
        (0..self.n)
            .map(|r| cols.iter().map(|c| i128::from(c[r])).collect())
            .collect()
    }

    /// Swaps `v_i` and `w_i`.
    pub fn apply_op1(&self, i: usize) -> Result<BottFan, ToricError> {
        if i >= self.n {
            return Err(ToricError::IndexOutOfRange { index: i, n: self.n });
        }
        let mut columns = self.columns.clone();
        columns.swap(i, self.n + i);
        Ok(BottFan::from_columns_unchecked(self.n, columns))
    }

    /// Reorders the pairs: the new pair `k` is the old pair `perm[k]`.
    pub fn apply_op2(&self, perm: &[usize]) -> Result<BottFan, ToricError> {
        check_permutation(perm, self.n)?;
        let mut columns = Vec::with_capacity(2 * self.n);
        columns.extend(perm.iter().map(|&p| self.columns[p].clone()));
        columns.extend(perm.iter().map(|&p| self.columns[self.n + p].clone()));
        Ok(BottFan::from_columns_unchecked(self.n, columns))
    }

    /// The fan `A·Σ` for an integer matrix `A` with determinant `±1`.
    pub fn transform(&self, a: &[Vec<i64>]) -> Result<BottFan, ToricError> {
        if a.len() != self.n || a.iter().any(|r| r.len() != self.n) {
            return Err(ToricError::Shape {
                rows: a.len(),
                cols: a.first().map_or(0, Vec::len),
            });
        }
        let wide: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect();
        if determinant(&wide)?.abs() != 1 {
            return Err(ToricError::Parse("transformation is not in GL(n, Z)".into()));
        }
        let mut columns = Vec::with_capacity(2 * self.n);
        for c in &self.columns {
            let mut out = Vec::with_capacity(self.n);
            for row in a {
                let mut acc: i64 = 0;
                for (x, y) in row.iter().zip(c) {
                    acc = x
                        .checked_mul(*y)
                        .and_then(|p| acc.checked_add(p))
                        .ok_or(ToricError::Overflow)?;
                }
                out.push(acc);
            }
            columns.push(out);
        }
        Ok(BottFan::from_columns_unchecked(self.n, columns))
    }

    /// Text form: `n` on the first line, then `n` rows of `2n` integers.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<BottFan, ToricError> {
        let mut numbers = text
            .split_whitespace()
            .map(|t| t.parse::<i64>().map_err(|e| ToricError::Parse(format!("{t:?}: {e}"))));
        let n = numbers
            .next()
            .ok_or_else(|| ToricError::Parse("empty input".into()))??;
        let n = usize::try_from(n).map_err(|_| ToricError::Parse(format!("negative dimension {n}")))?;
        if n > MAX_DIMENSION {
            return Err(ToricError::DimensionTooLarge(n));
        }
        let values = numbers.collect::<Result<Vec<_>, _>>()?;
        if values.len() != 2 * n * n {
            return Err(ToricError::Parse(format!(
                "expected {} entries for n = {n}, found {}",
                2 * n * n,
                values.len()
            )));
        }
        let rows: Vec<Vec<i64>> = values.chunks(2 * n.max(1)).map(<[i64]>::to_vec).collect();
        BottFan::validate(&rows)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "n": self.n, "rays": self.rows() })
    }

    pub fn from_json_str(text: &str) -> Result<BottFan, ToricError> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            rays: Vec<Vec<i64>>,
        }
        let raw: Raw = serde_json::from_str(text).map_err(|e| ToricError::Parse(e.to_string()))?;
        if raw.rays.len() != raw.n {
            return Err(ToricError::Shape {
                rows: raw.rays.len(),
                cols: raw.rays.first().map_or(0, Vec::len),
            });
        }
        BottFan::validate(&raw.rays)
    }

    /// Accepts either the text or the JSON form.
    pub fn parse(text: &str) -> Result<BottFan, ToricError> {
        if text.trim_start().starts_with('{') {
            BottFan::from_json_str(text)
        } else {
            BottFan::from_text(text)
        }
    }
}

fn is_primitive(col: &[i64]) -> bool {
    col.iter().fold(0u64, |g, &x| gcd(g, x.unsigned_abs())) == 1
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Fraction-free (Bareiss) determinant.
pub(crate) fn determinant(m: &[Vec<i128>]) -> Result<i128, ToricError> {
    let n = m.len();
    if n == 0 {
        return Ok(1);
    }
    let mut a = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let x = a[i][j]
                    .checked_mul(a[k][k])
                    .zip(a[i][k].checked_mul(a[k][j]))
                    .and_then(|(p, q)| p.checked_sub(q))
                    .ok_or(ToricError::Overflow)?;
                a[i][j] = x / prev;
            }
        }
        prev = a[k][k];
    }
    Ok(sign * a[n - 1][n - 1])
}

/// Solves `m x = b` for a matrix with determinant `±1` by Cramer's rule.
fn solve_unimodular(m: &[Vec<i128>], det: i128, b: &[i128]) -> Result<Vec<i128>, ToricError> {
    let n = m.len();
    (0..n)
        .map(|j| {
            let replaced: Vec<Vec<i128>> = m
                .iter()
                .zip(b)
                .map(|(row, &bi)| {
                    let mut row = row.clone();
                    row[j] = bi;
                    row
                })
                .collect();
            Ok(determinant(&replaced)? * det)
        })
        .collect()
}

/// Shape of the primitive relation of `{v_i, w_i}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RelationKind {
    /// `v_i + w_i = 0`.
    Zero,
    /// `v_i + w_i = v_parent` (`+`) or `w_parent` (`-`).
    Parent { parent: usize, sign: Sign },
    /// `v_i + w_i = Σ a_k u_k` with positive `a_k` over a cone's generators.
    General { support: Vec<(ColumnId, i64)> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimitiveRelation {
    pub index: usize,
    pub kind: RelationKind,
    /// `2 - Σ a_k`.
    pub degree: i64,
}

impl PrimitiveRelation {
    pub fn is_fano_compatible(&self) -> bool {
        self.degree > 0
    }
}

impl fmt::Display for PrimitiveRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = self.index;
        write!(f, "v_{i} + w_{i} = ")?;
        match &self.kind {
            RelationKind::Zero => write!(f, "0")?,
            RelationKind::Parent { parent, sign } => match sign {
                Sign::Plus => write!(f, "v_{parent}")?,
                Sign::Minus => write!(f, "w_{parent}")?,
            },
            RelationKind::General { support } => {
                let terms: Vec<String> = support
                    .iter()
                    .map(|(c, a)| if *a == 1 { c.to_string() } else { format!("{a} {c}") })
                    .collect();
                write!(f, "{}", terms.join(" + "))?;
            }
        }
        write!(f, "  (degree {})", self.degree)
    }
}

/// Primitive relation of the collection `{v_i, w_i}`.
pub fn primitive_relation(fan: &BottFan, i: usize) -> Result<PrimitiveRelation, ToricError> {
    let n = fan.n;
    if i >= n {
        return Err(ToricError::IndexOutOfRange { index: i, n });
    }
    let sum: Vec<i64> = fan
        .v(i)
        .iter()
        .zip(fan.w(i))
        .map(|(a, b)| a.checked_add(*b).ok_or(ToricError::Overflow))
        .collect::<Result<_, _>>()?;
    if sum.iter().all(|&x| x == 0) {
        return Ok(PrimitiveRelation {
            index: i,
            kind: RelationKind::Zero,
            degree: 2,
        });
    }
    let matches: Vec<ColumnId> = (0..2 * n)
        .filter(|&c| fan.columns[c] == sum)
        .map(|c| fan.column_id(c))
        .collect();
    match matches.as_slice() {
        [] => {}
        [single] => {
            let (parent, sign) = match *single {
                ColumnId::V(j) => (j, Sign::Plus),
                ColumnId::W(j) => (j, Sign::Minus),
            };
            return Ok(PrimitiveRelation {
                index: i,
                kind: RelationKind::Parent { parent, sign },
                degree: 1,
            });
        }
        [first, second, ..] => {
            return Err(ToricError::AmbiguousRelation {
                index: i,
                first: *first,
                second: *second,
            })
        }
    }
    let target: Vec<i128> = sum.iter().map(|&x| i128::from(x)).collect();
    for mask in 0..1u64 << n {
        let matrix = fan.cone_matrix(mask);
        let det = determinant(&matrix)?;
        if det.abs() != 1 {
            continue;
        }
        let coeffs = solve_unimodular(&matrix, det, &target)?;
        if coeffs.iter().all(|&a| a >= 0) {
            let selection = fan.selection(mask);
            let support: Vec<(ColumnId, i64)> = selection
                .into_iter()
                .zip(&coeffs)
                .filter(|(_, &a)| a > 0)
                .map(|(c, &a)| i64::try_from(a).map(|a| (c, a)).map_err(|_| ToricError::Overflow))
                .collect::<Result<_, _>>()?;
            let total: i64 = support.iter().map(|(_, a)| a).sum();
            return Ok(PrimitiveRelation {
                index: i,
                kind: RelationKind::General { support },
                degree: 2 - total,
            });
        }
    }
    Err(ToricError::NoContainingCone(i))
}

/// Fano verdict with the degree of every primitive collection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanoReport {
    pub is_fano: bool,
    pub relations: Vec<PrimitiveRelation>,
}

impl FanoReport {
    /// Primitive collections of non-positive degree.
    pub fn violations(&self) -> impl Iterator<Item = &PrimitiveRelation> {
        self.relations.iter().filter(|r| !r.is_fano_compatible())
    }
}

impl fmt::Display for FanoReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "fano: {}", self.is_fano)?;
        for r in &self.relations {
            writeln!(f, "{{v_{i}, w_{i}}}: {r}", i = r.index)?;
        }
        Ok(())
    }
}

/// Batyrev's criterion: Fano iff every primitive collection has positive
/// degree.
pub fn is_fano(fan: &BottFan) -> Result<FanoReport, ToricError> {
    let relations = (0..fan.n)
        .map(|i| primitive_relation(fan, i))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FanoReport {
        is_fano: relations.iter().all(PrimitiveRelation::is_fano_compatible),
        relations,
    })
}

/// The associated signed rooted forest: `i` is a root when
/// `v_i + w_i = 0`, otherwise its parent is `j` with sign `+` for `v_j`
/// and `-` for `w_j`.
pub fn fan_to_forest(fan: &BottFan) -> Result<SignedForest, ToricError> {
    let report = is_fano(fan)?;
    let mut parent = vec![None; fan.n];
    let mut sign = vec![None; fan.n];
    for r in report.relations {
        match r.kind {
            RelationKind::Zero => {}
            RelationKind::Parent { parent: p, sign: s } => {
                parent[r.index] = Some(p);
                sign[r.index] = Some(s);
            }
            RelationKind::General { .. } => {
                return Err(ToricError::NotFano {
                    index: r.index,
                    degree: r.degree,
                })
            }
        }
    }
    Ok(SignedForest::new(parent, sign)?)
}

/// A Fano Bott fan realizing `f`: `v_i = e_i`, and from the roots down
/// `w_i = -e_i`, `-e_i + v_p` or `-e_i + w_p` for a root, a `+` child of
/// `p` or a `-` child of `p`.
pub fn forest_to_fan(f: &SignedForest) -> BottFan {
    let n = f.len();
    let mut columns = vec![vec![0i64; n]; 2 * n];
    for (i, col) in columns.iter_mut().take(n).enumerate() {
        col[i] = 1;
    }
    for i in f.topological_order() {
        let mut w = match (f.parent(i), f.sign(i)) {
            (Some(p), Some(Sign::Plus)) => columns[p].clone(),
            (Some(p), Some(Sign::Minus)) => columns[n + p].clone(),
            _ => vec![0; n],
        };
        w[i] -= 1;
        columns[n + i] = w;
    }
    // Each w_i is -e_i plus a combination of e_j over ancestors j, so every
    // cone matrix is triangular with ±1 diagonal in topological order.
    BottFan::from_columns_unchecked(n, columns)
}
