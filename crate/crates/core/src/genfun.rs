//! The generating functions `T(x) = Σ t_n x^n` of `∼`-classes of signed
//! rooted trees and `F(x) = 1 + Σ f_n x^n` of `∼`-classes of signed rooted
//! forests, computed along three independent routes:
//!
//! * the Euler product `F = Π_k (1 - x^k)^{-t_k}`,
//! * the exponential form `F = exp(Σ_n T(x^n) / n)`,
//! * the degree-by-degree solution of the functional equation obtained from
//!   `T(x) = x/2 · (F(x^2) + F(x)^2)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::series::{IntSeries, RatSeries, Series, SeriesError};

/// Default truncation order of the solver.
pub const DEFAULT_ORDER: usize = 32;

/// `Π_{k≥1} (1 - x^k)^{-t_k}` truncated at `order`, where `t[k - 1] = t_k`
/// and missing terms are zero. Each factor is expanded as
/// `Σ_p C(t_k - 1 + p, p) x^{kp}`.
pub fn euler_product(t: &[BigInt], order: usize) -> Result<IntSeries, SeriesError> {
    let mut acc = IntSeries::one(order);
    for (idx, tk) in t.iter().enumerate().take(order) {
        let k = idx + 1;
        if tk.is_negative() {
            return Err(SeriesError::NegativeCoefficient { index: k });
        }
        if tk.is_zero() {
            continue;
        }
        let mut factor = vec![BigInt::zero(); order + 1];
        let mut binom = BigInt::one();
        let mut p = 0usize;
        while k * p <= order {
            factor[k * p] = binom.clone();
            p += 1;
            // C(t-1+p, p) = C(t-2+p, p-1) · (t-1+p) / p
            binom = binom * (tk - 1 + BigInt::from(p)) / BigInt::from(p);
        }
        acc = acc.mul(&Series::from_coeffs(factor, order))?;
    }
    Ok(acc)
}

/// `T(x) = x/2 · (F(x^2) + F(x)^2)` at the order of `F`.
pub fn t_from_f(f: &IntSeries) -> Result<IntSeries, SeriesError> {
    if !f.coeff(0).is_one() {
        return Err(SeriesError::ConstantTermNotOne);
    }
    let sum = f.substitute_power(2).add(&f.mul(f)?)?;
    let n = f.order();
    let mut t = vec![BigInt::zero(); n + 1];
    for (k, slot) in t.iter_mut().enumerate().skip(1) {
        let (q, r) = sum.coeff(k - 1).div_rem(&BigInt::from(2));
        if !r.is_zero() {
            return Err(SeriesError::ParityViolation { index: k });
        }
        *slot = q;
    }
    Ok(Series::from_coeffs(t, n))
}

/// `F(x) = exp(Σ_{n≥1} T(x^n) / n)` at the order of `T`, evaluated over
/// the rationals; the result must be integral.
pub fn f_from_t(t: &IntSeries) -> Result<IntSeries, SeriesError> {
    if !t.coeff(0).is_zero() {
        return Err(SeriesError::NonzeroConstantTerm);
    }
    let order = t.order();
    let rational = t.to_rational();
    let mut exponent = RatSeries::zero(order);
    for n in 1..=order {
        let term = rational
            .substitute_power(n)
            .scale(&BigRational::new(BigInt::one(), BigInt::from(n)));
        exponent = exponent.add(&term)?;
    }
    exponent.exp()?.to_integer()
}

/// `Σ_{n≥1} T(x^n) / n`, the logarithm of `F`.
pub fn plethystic_log_sum(t: &IntSeries) -> RatSeries {
    let order = t.order();
    let rational = t.to_rational();
    (1..=order).fold(RatSeries::zero(order), |acc, n| {
        acc.add(
            &rational
                .substitute_power(n)
                .scale(&BigRational::new(BigInt::one(), BigInt::from(n))),
        )
        .expect("equal orders")
    })
}

/// `T` and `F` truncated at a common order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratingFunctions {
    pub t: IntSeries,
    pub f: IntSeries,
}

impl GeneratingFunctions {
    pub fn order(&self) -> usize {
        self.f.order()
    }

    pub fn t_n(&self, n: usize) -> &BigInt {
        self.t.coeff(n)
    }

    pub fn f_n(&self, n: usize) -> &BigInt {
        self.f.coeff(n)
    }

    /// Rows `(n, t_n, f_n)` for `n = 0..=order`.
    pub fn table(&self) -> Vec<TableRow> {
        (0..=self.order())
            .map(|n| TableRow {
                n,
                t: self.t_n(n).clone(),
                f: self.f_n(n).clone(),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub n: usize,
    #[serde(serialize_with = "serialize_decimal")]
    pub t: BigInt,
    #[serde(serialize_with = "serialize_decimal")]
    pub f: BigInt,
}

// Big integers go out as exact JSON numbers.
fn serialize_decimal<S: serde::Serializer>(value: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    let number: serde_json::Number = value.to_string().parse().map_err(serde::ser::Error::custom)?;
    number.serialize(s)
}

/// `n,t_n,f_n` lines with a header.
pub fn table_csv(rows: &[TableRow]) -> String {
    let mut out = String::from("n,t_n,f_n\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", r.n, r.t, r.f));
    }
    out
}

pub fn table_json(rows: &[TableRow]) -> serde_json::Value {
    serde_json::to_value(rows).expect("table rows serialize")
}

/// Solves the functional equation degree by degree: with `f_0 = 1`, step
/// `n` reads `t_n` off `f_0..f_{n-1}` and then obtains `f_n` from the
/// logarithmic derivative of the Euler product,
/// `n f_n = Σ_{k=1}^{n} (Σ_{d | k} d t_d) f_{n-k}`.
pub fn solve_functional_equation(order: usize) -> GeneratingFunctions {
    let mut f: Vec<BigInt> = vec![BigInt::one()];
    let mut t: Vec<BigInt> = vec![BigInt::zero()];
    // c[k] = Σ_{d | k} d t_d
    let mut c: Vec<BigInt> = vec![BigInt::zero()];
    for n in 1..=order {
        let m = n - 1;
        let mut twice = BigInt::zero();
        for i in 0..=m {
            twice += &f[i] * &f[m - i];
        }
        if m % 2 == 0 {
            twice += &f[m / 2];
        }
        t.push(twice / 2);

        let mut cn = BigInt::zero();
        for d in (1..=n).filter(|d| n % d == 0) {
            cn += &t[d] * BigInt::from(d);
        }
        c.push(cn);

        let mut acc = BigInt::zero();
        for k in 1..=n {
            acc += &c[k] * &f[n - k];
        }
        let (q, r) = acc.div_rem(&BigInt::from(n));
        debug_assert!(r.is_zero(), "Euler transform must divide exactly");
        f.push(q);
    }
    GeneratingFunctions {
        t: Series::from_coeffs(t, order),
        f: Series::from_coeffs(f, order),
    }
}

/// Iterates `F ← euler_product(t_from_f(F))` from `F = 1` until it is
/// stationary; each pass fixes at least one more coefficient.
pub fn solve_by_euler_iteration(order: usize) -> Result<GeneratingFunctions, SeriesError> {
    fixed_point(order, |t| euler_product(&t.coeffs()[1..], order))
}

/// Iterates `F ← f_from_t(t_from_f(F))` from `F = 1` until it is stationary.
pub fn solve_by_exp_iteration(order: usize) -> Result<GeneratingFunctions, SeriesError> {
    fixed_point(order, f_from_t)
}

fn fixed_point(
    order: usize,
    step: impl Fn(&IntSeries) -> Result<IntSeries, SeriesError>,
) -> Result<GeneratingFunctions, SeriesError> {
    let mut f = IntSeries::one(order);
    for _ in 0..=order + 1 {
        let t = t_from_f(&f)?;
        let next = step(&t)?;
        if next == f {
            return Ok(GeneratingFunctions { t, f });
        }
        f = next;
    }
    let t = t_from_f(&f)?;
    Ok(GeneratingFunctions { t, f })
}

/// Per-`n` record of the ratio observations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioRow {
    pub n: usize,
    pub t_n: BigInt,
    pub f_n: BigInt,
    /// `t_n / t_{n-1}` for `n ≥ 2`.
    pub t_ratio: Option<BigRational>,
    pub f_ratio: Option<BigRational>,
    /// Whether the ratio grew compared to the previous one (`n ≥ 3`).
    pub t_ratio_increased: Option<bool>,
    pub f_ratio_increased: Option<bool>,
    pub t_ratio_at_most_4: Option<bool>,
    pub f_ratio_at_most_4: Option<bool>,
    /// `f_n < 2 t_n < 4 f_{n-1}`.
    pub sandwich: bool,
}

/// Exact check of the ratio observations for `n ≤ order`. Nothing is
/// claimed beyond the computed range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioReport {
    pub order: usize,
    pub rows: Vec<RatioRow>,
}

impl RatioReport {
    pub fn sandwich_holds(&self) -> bool {
        self.rows.iter().all(|r| r.sandwich)
    }

    pub fn t_ratios_increasing(&self) -> bool {
        self.rows.iter().all(|r| r.t_ratio_increased != Some(false))
    }

    pub fn f_ratios_increasing(&self) -> bool {
        self.rows.iter().all(|r| r.f_ratio_increased != Some(false))
    }

    pub fn ratios_at_most_4(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.t_ratio_at_most_4 != Some(false) && r.f_ratio_at_most_4 != Some(false))
    }

    /// Human-readable list of every `n` where an observation fails.
    pub fn exceptions(&self) -> Vec<String> {
        let mut out = Vec::new();
        for r in &self.rows {
            if !r.sandwich {
                out.push(format!(
                    "n={}: f_n < 2t_n < 4f_(n-1) fails: f_n = {}, 2t_n = {}, 4f_(n-1) = {}",
                    r.n,
                    r.f_n,
                    BigInt::from(2) * &r.t_n,
                    self.rows
                        .iter()
                        .find(|p| p.n + 1 == r.n)
                        .map_or(BigInt::from(4), |p| BigInt::from(4) * &p.f_n)
                ));
            }
            if r.t_ratio_increased == Some(false) {
                out.push(format!(
                    "n={}: t_n/t_(n-1) = {} did not increase",
                    r.n,
                    fmt_ratio(&r.t_ratio)
                ));
            }
            if r.f_ratio_increased == Some(false) {
                out.push(format!(
                    "n={}: f_n/f_(n-1) = {} did not increase",
                    r.n,
                    fmt_ratio(&r.f_ratio)
                ));
            }
            if r.t_ratio_at_most_4 == Some(false) || r.f_ratio_at_most_4 == Some(false) {
                out.push(format!("n={}: a ratio exceeds 4", r.n));
            }
        }
        out
    }
}

fn fmt_ratio(r: &Option<BigRational>) -> String {
    match r {
        Some(r) => r.to_string(),
        None => "-".into(),
    }
}

fn fmt_flag(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "yes",
        Some(false) => "NO",
        None => "-",
    }
}

impl fmt::Display for RatioReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "n\tt_n\tf_n\tt_n/t_(n-1)\tf_n/f_(n-1)\tt-incr\tf-incr\t<=4\tf_n<2t_n<4f_(n-1)"
        )?;
        for r in &self.rows {
            let bounded = match (r.t_ratio_at_most_4, r.f_ratio_at_most_4) {
                (Some(a), Some(b)) => fmt_flag(Some(a && b)),
                _ => "-",
            };
            writeln!(
                f,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                r.n,
                r.t_n,
                r.f_n,
                fmt_ratio(&r.t_ratio),
                fmt_ratio(&r.f_ratio),
                fmt_flag(r.t_ratio_increased),
                fmt_flag(r.f_ratio_increased),
                bounded,
                fmt_flag(Some(r.sandwich)),
            )?;
        }
        writeln!(f, "checked range: 1 <= n <= {}", self.order)
    }
}

/// Evaluates `f_n < 2t_n < 4f_{n-1}`, the growth of `t_n/t_{n-1}` and
/// `f_n/f_{n-1}`, and the bound 4 on both ratios for `1 ≤ n ≤ order`.
pub fn check_ratio_question(order: usize) -> RatioReport {
    let gf = solve_functional_equation(order);
    let four = BigRational::from_integer(BigInt::from(4));
    let ratio = |s: &IntSeries, n: usize| -> Option<BigRational> {
        (n >= 2 && !s.coeff(n - 1).is_zero()).then(|| BigRational::new(s.coeff(n).clone(), s.coeff(n - 1).clone()))
    };
    let mut rows: Vec<RatioRow> = Vec::new();
    for n in 1..=order {
        let t_ratio = ratio(&gf.t, n);
        let f_ratio = ratio(&gf.f, n);
        let prev = rows.last();
        let grew = |cur: &Option<BigRational>, before: Option<&Option<BigRational>>| match (cur, before) {
            (Some(c), Some(Some(b))) => Some(c > b),
            _ => None,
        };
        let t_ratio_increased = grew(&t_ratio, prev.map(|p| &p.t_ratio));
        let f_ratio_increased = grew(&f_ratio, prev.map(|p| &p.f_ratio));
        let two_t = BigInt::from(2) * gf.t_n(n);
        let sandwich = gf.f_n(n) < &two_t && two_t < BigInt::from(4) * gf.f_n(n - 1);
        rows.push(RatioRow {
            n,
            t_n: gf.t_n(n).clone(),
            f_n: gf.f_n(n).clone(),
            t_ratio_at_most_4: t_ratio.as_ref().map(|r| r <= &four),
            f_ratio_at_most_4: f_ratio.as_ref().map(|r| r <= &four),
            t_ratio,
            f_ratio,
            t_ratio_increased,
            f_ratio_increased,
            sandwich,
        });
    }
    RatioReport { order, rows }
}
