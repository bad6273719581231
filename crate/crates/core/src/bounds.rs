//! Closed-form bounds, degree-sequence tables and the infeasibility
//! inequalities behind `ex(q^2+q, C4) <= q(q+1)^2/2 - q`, all evaluated in
//! exact arithmetic.
//!
//! Notation: `n = q^2+q`, `E0 = q(q+1)^2/2 - q`, and `X_k` is the number of
//! vertices of degree `k`. Every verdict comes from integer or rational
//! comparisons; square roots are decided by squaring or bracketed with
//! integer square roots.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("q = {0} is odd; this table is defined for even q")]
    OddQ(u64),
    #[error("degree {d} outside the tabulated range for q = {q}")]
    DegreeOutOfRange { q: u64, d: i64 },
    #[error("radicand 12*{0} - 7 is negative")]
    RadicandNegative(u64),
    #[error("expression undefined: {0}")]
    DomainError(String),
}

fn rat(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

fn big(v: u64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `C(x, 2) = x(x-1)/2` extended to rationals.
fn choose2(x: &Rational) -> Rational {
    x * (x - Rational::one()) / rat(2)
}

fn ratio_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn ser_ratio<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&ratio_string(r))
}

fn ser_terms<S: Serializer>(m: &BTreeMap<&'static str, Rational>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_map(m.iter().map(|(k, v)| (*k, ratio_string(v))))
}

/// `E0(q) = q(q+1)^2/2 - q`.
pub fn e0(q: u64) -> u64 {
    q * (q + 1) * (q + 1) / 2 - q
}

/// `floor(n/4 * (1 + sqrt(4n-3)))` without floating point.
pub fn reiman_bound(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let n = n as u128;
    // floor((n + n*sqrt(4n-3)) / 4) = floor((n + isqrt(n^2 (4n-3))) / 4)
    let root = (n * n * (4 * n - 3)).sqrt();
    ((n + root) / 4) as u64
}

/// The inequality a verdict belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Lemma {
    /// Maximum degree is at most `q+2`.
    MaxDegree,
    /// Low-degree vertices see every vertex of degree `q+2`.
    LowDegreeAdjacency,
    /// 2-path budget and the `g(v)` table.
    TwoPathBudget,
    /// Minimum degree exceeds `q/2 + 1`.
    MinDegree,
    /// Two vertices of degree `q+2` share a neighbour.
    SharedNeighbor,
    /// The shared neighbour has degree below `q/2`.
    SharedNeighborDegree,
    /// The four residual degree sequences.
    FinalCases,
}

/// Outcome of one exact inequality evaluation.
#[derive(Debug, Clone, Serialize)]
pub struct LemmaVerdict {
    pub lemma: Lemma,
    pub q: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_q2: Option<u64>,
    /// The decisive quantity; the inequality holds iff it is `>= 0`.
    #[serde(serialize_with = "ser_ratio")]
    pub value: Rational,
    pub feasible: bool,
    /// Whether `q` lies in the range where the argument claims a
    /// contradiction (`q >= 6`).
    pub in_regime: bool,
    #[serde(serialize_with = "ser_terms")]
    pub terms: BTreeMap<&'static str, Rational>,
}

const REGIME: u64 = 6;

/// Maximum-degree argument: with `e = E0` edges and a vertex of degree `d`,
/// the 2-path count avoiding `Γ(u)` forces
/// `(q+1)(n-1)(n-d)(n-d-1) >= (q+1)(2e-n-d+1)(2e-2n-d+2)`.
/// The contradiction fires when both auxiliary gaps are positive, which makes
/// the right side strictly larger.
pub fn max_degree_feasibility(q: u64, d: u64) -> Result<LemmaVerdict, BoundsError> {
    if q < 3 {
        return Err(BoundsError::DomainError(format!("q = {q} below 3")));
    }
    let n = (q * q + q) as i64;
    if d as i64 >= n {
        return Err(BoundsError::DomainError(format!("degree {d} >= n = {n}")));
    }
    let (q, d) = (q as i64, d as i64);
    let e = e0(q as u64) as i64;
    let big = |v: i64| BigInt::from(v);
    let lhs = big(q + 1) * big(n - 1) * big(n - d) * big(n - d - 1);
    let rhs = big(q + 1) * big(2 * e - n - d + 1) * big(2 * e - 2 * n - d + 2);
    let gap_a = big(q + 1) * big(2 * e - 2 * n - d + 2) - big(n - 1) * big(n - d - 1);
    let gap_b = big(2 * e - n - d + 1) - big(q + 1) * big(n - d);
    let contradiction = gap_a.is_positive() && gap_b.is_positive();
    // positive gaps multiply through nonnegative factors to give rhs > lhs
    debug_assert!(!contradiction || rhs > lhs);
    let value = &lhs - &rhs;
    let mut terms = BTreeMap::new();
    terms.insert("lhs", Rational::from_integer(lhs));
    terms.insert("rhs", Rational::from_integer(rhs));
    terms.insert("gap_a", Rational::from_integer(gap_a));
    terms.insert("gap_b", Rational::from_integer(gap_b));
    terms.insert("q2_minus_q_minus_5", rat(q * q - q - 5));
    Ok(LemmaVerdict {
        lemma: Lemma::MaxDegree,
        q: q as u64,
        d: Some(d as u64),
        x_q2: None,
        value: Rational::from_integer(value),
        feasible: !contradiction,
        in_regime: q as u64 >= REGIME,
        terms,
    })
}

/// Which degree-sequence family a row belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    /// `E0` edges, no vertex of degree `q-2`.
    Row1,
    /// `E0` edges, one vertex of degree `q-2`.
    Row2,
    A,
    B,
    C,
    D,
}

impl Family {
    pub const FINAL_CASES: [Family; 4] = [Family::A, Family::B, Family::C, Family::D];

    /// Counts of `[X_{q+2}, X_{q+1}, X_q, X_{q-1}, X_{q-2}]` as `a + b z`.
    fn counts(self, q: i64) -> [(i64, i64); 5] {
        let base = q * q - q;
        match self {
            Family::Row1 => [(0, 0), (base, 1), (2 * q, -2), (0, 1), (0, 0)],
            Family::Row2 => [(0, 0), (base + 1, 1), (2 * q - 1, -2), (-1, 1), (1, 0)],
            Family::A => [(1, 0), (base, 1), (2 * q - 1, -2), (0, 1), (0, 0)],
            Family::B => [(1, 0), (base, 1), (2 * q, -2), (-2, 1), (1, 0)],
            Family::C => [(1, 0), (base + 1, 1), (2 * q - 2, -2), (-1, 1), (1, 0)],
            Family::D => [(1, 0), (base - 1, 1), (2 * q + 1, -2), (-1, 1), (0, 0)],
        }
    }

    /// Edge count the family describes.
    fn edges(self, q: u64) -> u64 {
        match self {
            Family::Row1 | Family::Row2 => e0(q),
            _ => e0(q) + 1,
        }
    }
}

/// A degree sequence on `q^2+q` vertices, as the counts of degrees
/// `q+2, q+1, q, q-1, q-2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeSequenceRow {
    pub family: Family,
    pub q: u64,
    pub z: i64,
    pub x_q_plus_2: i64,
    pub x_q_plus_1: i64,
    pub x_q: i64,
    pub x_q_minus_1: i64,
    pub x_q_minus_2: i64,
}

impl DegreeSequenceRow {
    pub fn new(family: Family, q: u64, z: i64) -> Self {
        let [a, b, c, d, e] = family.counts(q as i64).map(|(k, m)| k + m * z);
        DegreeSequenceRow {
            family,
            q,
            z,
            x_q_plus_2: a,
            x_q_plus_1: b,
            x_q: c,
            x_q_minus_1: d,
            x_q_minus_2: e,
        }
    }

    fn counts(&self) -> [i64; 5] {
        [
            self.x_q_plus_2,
            self.x_q_plus_1,
            self.x_q,
            self.x_q_minus_1,
            self.x_q_minus_2,
        ]
    }

    pub fn is_nonnegative(&self) -> bool {
        self.counts().iter().all(|&c| c >= 0)
    }

    pub fn vertex_count(&self) -> i64 {
        self.counts().iter().sum()
    }

    pub fn degree_sum(&self) -> i64 {
        let q = self.q as i64;
        self.counts()
            .iter()
            .zip([q + 2, q + 1, q, q - 1, q - 2])
            .map(|(c, k)| c * k)
            .sum()
    }

    /// `Σ_k X_k C(k, 2)`: the number of 2-paths this sequence forces.
    pub fn two_paths(&self) -> Rational {
        let q = self.q as i64;
        self.counts()
            .iter()
            .zip([q + 2, q + 1, q, q - 1, q - 2])
            .map(|(&c, k)| rat(c) * choose2(&rat(k)))
            .sum()
    }
}

/// All admissible rows of the two `E0`-edge families for even `q`.
pub fn degree_sequence_rows(q: u64) -> Result<Vec<DegreeSequenceRow>, BoundsError> {
    if q % 2 == 1 {
        return Err(BoundsError::OddQ(q));
    }
    if q < 2 {
        return Err(BoundsError::DomainError(format!("q = {q} below 2")));
    }
    let n = (q * q + q) as i64;
    let mut rows = Vec::new();
    for family in [Family::Row1, Family::Row2] {
        for z in 0..=q as i64 + 1 {
            let row = DegreeSequenceRow::new(family, q, z);
            if !row.is_nonnegative() {
                continue;
            }
            assert_eq!(row.vertex_count(), n);
            assert_eq!(row.degree_sum(), 2 * e0(q) as i64, "{row:?}");
            rows.push(row);
        }
    }
    Ok(rows)
}

/// `q e - X_{q+1} + X_{q+2}/2`, the most 2-paths a graph on `q^2+q`
/// vertices can carry.
pub fn two_path_budget(q: u64, e: u64, x_q1: u64, x_q2: u64) -> Rational {
    big(q) * big(e) - big(x_q1) + big(x_q2) / rat(2)
}

/// Tabulated `g(v)`: vertices a degree-`d` vertex cannot reach by a 2-path
/// when all its neighbours have degree `q+1`.
pub fn g_table(q: u64, d: i64) -> Result<i64, BoundsError> {
    if q % 2 == 1 {
        return Err(BoundsError::OddQ(q));
    }
    let qi = q as i64;
    let value = match d - qi {
        -2 => 3 * qi - 1,
        -1 => 2 * qi - 1,
        0 => qi - 1,
        1 => 1,
        2 => 0,
        _ => return Err(BoundsError::DegreeOutOfRange { q, d }),
    };
    debug_assert_eq!(Ok(value), g_closed_form(q, d));
    Ok(value)
}

/// `q(q+1-d) - 1` for `d <= q`, plus 2 at `d = q+1` and `q+1` at `d = q+2`.
pub fn g_closed_form(q: u64, d: i64) -> Result<i64, BoundsError> {
    let qi = q as i64;
    if d < 0 || d > qi + 2 {
        return Err(BoundsError::DegreeOutOfRange { q, d });
    }
    let base = qi * (qi + 1 - d) - 1;
    Ok(match d - qi {
        1 => base + 2,
        2 => base + qi + 1,
        _ => base,
    })
}

fn verdict(
    lemma: Lemma,
    q: u64,
    value: Rational,
    terms: BTreeMap<&'static str, Rational>,
) -> LemmaVerdict {
    LemmaVerdict {
        lemma,
        q,
        d: None,
        x_q2: None,
        feasible: !value.is_negative(),
        value,
        in_regime: q >= REGIME,
        terms,
    }
}

fn ratio(num: i128, den: i128, what: &str) -> Result<Rational, BoundsError> {
    if den == 0 {
        return Err(BoundsError::DomainError(format!(
            "{what}: zero denominator"
        )));
    }
    Ok(Rational::new(BigInt::from(num), BigInt::from(den)))
}

fn vertices(q: u64) -> Rational {
    big(q * q + q)
}

/// Jensen gap for the low-degree adjacency argument at `δ = q/2 + 1`:
/// `C(n-q-3, 2) - (n-2) C((2e-(n-2)-(q+3)-1)/(n-2), 2)` with `e = E0 - q/2 + 1`.
pub fn low_degree_adjacency_gap(q: u64) -> Rational {
    let n = vertices(q);
    let qr = big(q);
    let e = big(e0(q)) - &qr / rat(2) + rat(1);
    let m = &n - rat(2);
    let avg = (rat(2) * e - &m - (&qr + rat(3)) - rat(1)) / &m;
    choose2(&(&n - &qr - rat(3))) - m * choose2(&avg)
}

/// `-(2q^3 - 2q^2 - 10q + 12) / (q^2 + q - 2)`.
pub fn low_degree_adjacency_expression(q: u64) -> Result<LemmaVerdict, BoundsError> {
    let qi = q as i128;
    let value = ratio(
        -(2 * qi.pow(3) - 2 * qi * qi - 10 * qi + 12),
        qi * qi + qi - 2,
        "low-degree adjacency",
    )?;
    let mut terms = BTreeMap::new();
    terms.insert("jensen_gap", low_degree_adjacency_gap(q));
    Ok(verdict(Lemma::LowDegreeAdjacency, q, value, terms))
}

/// Jensen gap for two disjoint neighbourhoods of degree `d = q+2`:
/// `C(n-2d, 2) - 1 - (n-2) C((2(E0+1) - 2(n-2) - 2d)/(n-2), 2)`.
pub fn shared_neighbor_gap(q: u64) -> Rational {
    let n = vertices(q);
    let d = big(q + 2);
    let m = &n - rat(2);
    let avg = (rat(2) * big(e0(q) + 1) - rat(2) * &m - rat(2) * &d) / &m;
    choose2(&(&n - rat(2) * &d)) - rat(1) - m * choose2(&avg)
}

/// `(-q^4 - 6q^3 + 17q^2 + 34q - 48) / (q^2 + q - 2)`.
pub fn shared_neighbor_expression(q: u64) -> Result<LemmaVerdict, BoundsError> {
    let qi = q as i128;
    let value = ratio(
        -qi.pow(4) - 6 * qi.pow(3) + 17 * qi * qi + 34 * qi - 48,
        qi * qi + qi - 2,
        "shared neighbour",
    )?;
    let mut terms = BTreeMap::new();
    terms.insert("jensen_gap", shared_neighbor_gap(q));
    Ok(verdict(Lemma::SharedNeighbor, q, value, terms))
}

/// Denominator reading for the shared-neighbour-degree expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DenominatorReading {
    /// `8q^2 + 8q - 16`, which matches the underlying Jensen inequality.
    #[default]
    Corrected,
    /// `8q^2 + 8 - 16`, as typeset in the source.
    Printed,
}

/// Jensen gap for the union of two degree-`(q+2)` neighbourhoods whose
/// common neighbour has degree `q/2`.
pub fn shared_neighbor_degree_gap(q: u64) -> Rational {
    let n = vertices(q);
    let qr = big(q);
    let m = &n - rat(2);
    let du = &qr / rat(2);
    let avg = (rat(2) * big(e0(q) + 1) - rat(2) * (&qr + rat(2)) - rat(2) * &m + du - rat(2)) / &m;
    choose2(&(&n - rat(2) * (&qr + rat(2)) + rat(1))) - m * choose2(&avg)
}

/// `-(6q^3 - 25q^2 - 28q + 96) / (8q^2 + 8q - 16)`.
pub fn shared_neighbor_degree_expression(
    q: u64,
    reading: DenominatorReading,
) -> Result<LemmaVerdict, BoundsError> {
    let qi = q as i128;
    let den = match reading {
        DenominatorReading::Corrected => 8 * qi * qi + 8 * qi - 16,
        DenominatorReading::Printed => 8 * qi * qi + 8 - 16,
    };
    let value = ratio(
        -(6 * qi.pow(3) - 25 * qi * qi - 28 * qi + 96),
        den,
        "shared neighbour degree",
    )?;
    let mut terms = BTreeMap::new();
    terms.insert("jensen_gap", shared_neighbor_degree_gap(q));
    Ok(verdict(Lemma::SharedNeighborDegree, q, value, terms))
}

/// A closed interval of rationals bracketing an irrational value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bracket {
    #[serde(serialize_with = "ser_ratio")]
    pub lo: Rational,
    #[serde(serialize_with = "ser_ratio")]
    pub hi: Rational,
}

/// Digits of precision for square-root brackets (width `10^-9`).
const SQRT_DIGITS: u32 = 9;

/// `sqrt(r)` bracketed by `[floor(sqrt(r) 10^9), ceil(sqrt(r) 10^9)] / 10^9`.
fn sqrt_bracket(r: u64) -> Bracket {
    let scale = BigUint::from(10u32).pow(SQRT_DIGITS);
    let scaled = BigUint::from(r) * &scale * &scale;
    let root = scaled.sqrt();
    let exact = &root * &root == scaled;
    let den = BigInt::from(scale);
    let lo = Rational::new(BigInt::from(root.clone()), den.clone());
    let hi = if exact {
        lo.clone()
    } else {
        Rational::new(BigInt::from(root + 1u32), den)
    };
    Bracket { lo, hi }
}

/// Root bounds of the minimum-degree argument for a given `|X_{q+2}|`.
#[derive(Debug, Clone, Serialize)]
pub struct MinDegreeRoots {
    pub q: u64,
    pub x_q2: u64,
    pub radicand: u64,
    /// `3/2 + q - sqrt(12 x - 7)/2`.
    pub delta_lower: Bracket,
    /// `3/2 + q + sqrt(12 x - 7)/2`.
    pub delta_upper: Bracket,
    /// `x >= 3 + q - sqrt(5 + 3q)`.
    pub threshold_holds: bool,
    /// `3/2 + q + sqrt(12 x - 7)/2 >= x`.
    pub root_condition_holds: bool,
}

/// Exact test of `3/2 + q + sqrt(12x - 7)/2 >= x`, i.e.
/// `sqrt(12x - 7) >= 2x - 2q - 3`.
fn root_condition(q: u64, x: u64) -> bool {
    let rhs = 2 * x as i128 - 2 * q as i128 - 3;
    rhs < 0 || (12 * x as i128 - 7) >= rhs * rhs
}

/// Exact test of `x >= 3 + q - sqrt(5 + 3q)`.
pub fn min_degree_threshold(q: u64, x: u64) -> bool {
    let t = q as i128 + 3 - x as i128;
    t <= 0 || t * t <= 3 * q as i128 + 5
}

pub fn min_degree_roots(q: u64, x_q2: u64) -> Result<MinDegreeRoots, BoundsError> {
    if 12 * x_q2 < 7 {
        return Err(BoundsError::RadicandNegative(x_q2));
    }
    let radicand = 12 * x_q2 - 7;
    let s = sqrt_bracket(radicand);
    let centre = big(q) + Rational::new(3.into(), 2.into());
    let half = Rational::new(1.into(), 2.into());
    Ok(MinDegreeRoots {
        q,
        x_q2,
        radicand,
        delta_lower: Bracket {
            lo: &centre - &half * &s.hi,
            hi: &centre - &half * &s.lo,
        },
        delta_upper: Bracket {
            lo: &centre + &half * &s.lo,
            hi: &centre + &half * &s.hi,
        },
        threshold_holds: min_degree_threshold(q, x_q2),
        root_condition_holds: root_condition(q, x_q2),
    })
}

/// Smallest `|X_{q+2}| >= 1` meeting the threshold.
pub fn min_degree_min_admissible(q: u64) -> u64 {
    (1..)
        .find(|&x| min_degree_threshold(q, x))
        .expect("threshold holds for x >= q+3")
}

/// The minimum-degree contradiction. Suppose `δ <= D = floor(q/2) + 1`.
/// A vertex of degree `δ` sees all of `X_{q+2}`, so `x = |X_{q+2}| <= δ`,
/// and the 2-path count forces [`min_degree_quadratic`]`(q, δ, x) >= 0`.
/// The quadratic increases in `x` and, for `δ < q + 3/2`, in `δ`, so the
/// best case is `x = δ = D`; the verdict's value is the quadratic there.
///
/// The printed threshold `x >= 3 + q - sqrt(5 + 3q)` is recorded as a term
/// but not used: solving the upper-root condition only gives
/// `x <= q + 3 + sqrt(3q + 5)`, which is no obstruction.
pub fn min_degree_verdict(q: u64) -> LemmaVerdict {
    let d = q / 2 + 1;
    let value = min_degree_quadratic(q, d, d);
    let mut terms = BTreeMap::new();
    terms.insert("max_min_degree", big(d));
    terms.insert(
        "printed_threshold_min_x_q2",
        big(min_degree_min_admissible(q)),
    );
    LemmaVerdict {
        lemma: Lemma::MinDegree,
        q,
        d: None,
        x_q2: None,
        feasible: !value.is_negative(),
        value,
        in_regime: q >= REGIME,
        terms,
    }
}

/// The 2-path inequality for a vertex of degree `δ` adjacent to all of
/// `X_{q+2}`, with the remaining vertices of degree `q` or `q+1`:
/// budget minus forced 2-paths, as a function of `(δ, |X_{q+2}|)`.
pub fn min_degree_two_path_slack(q: u64, delta: u64, x_q2: u64) -> Rational {
    let (qi, di, xi) = (q as i64, delta as i64, x_q2 as i64);
    let x_q1 = qi * qi + 2 - di - 2 * xi;
    let x_q = qi - 3 + xi + di;
    let e = big(e0(q) + 1);
    let budget = big(q) * e - rat(x_q1) + rat(xi) / rat(2);
    let forced = rat(xi) * choose2(&rat(qi + 2))
        + rat(x_q1) * choose2(&rat(qi + 1))
        + rat(x_q) * choose2(&rat(qi))
        + choose2(&rat(di));
    budget - forced
}

/// `-δ^2/2 + (q + 3/2)δ + 3x/2 - 3q/2 - q^2/2 - 2`.
pub fn min_degree_quadratic(q: u64, delta: u64, x_q2: u64) -> Rational {
    let (q, d, x) = (big(q), big(delta), big(x_q2));
    let h = |v: i64| Rational::new(v.into(), 2.into());
    -(&d * &d) * h(1) + (&q + h(3)) * &d + h(3) * x - h(3) * &q - &q * &q * h(1) - rat(2)
}

/// Direction of the solved inequality in `z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Upper,
    Lower,
}

/// Solution of the 2-path inequality for one residual case.
#[derive(Debug, Clone, Serialize)]
pub struct ZBound {
    pub case: Family,
    pub q: u64,
    pub kind: BoundKind,
    #[serde(serialize_with = "ser_ratio")]
    pub bound: Rational,
    /// Some integer `z` satisfies the bound with every class count `>= 0`.
    pub integer_feasible: bool,
}

/// Linear form `c0 + c1 z`.
#[derive(Debug, Clone, PartialEq)]
struct Linear {
    c0: Rational,
    c1: Rational,
}

impl Linear {
    fn constant(c: Rational) -> Self {
        Linear {
            c0: c,
            c1: Rational::zero(),
        }
    }

    fn from_count((a, b): (i64, i64)) -> Self {
        Linear {
            c0: rat(a),
            c1: rat(b),
        }
    }

    fn scale(&self, k: &Rational) -> Self {
        Linear {
            c0: &self.c0 * k,
            c1: &self.c1 * k,
        }
    }

    fn add(&self, o: &Linear) -> Self {
        Linear {
            c0: &self.c0 + &o.c0,
            c1: &self.c1 + &o.c1,
        }
    }

    fn sub(&self, o: &Linear) -> Self {
        self.add(&o.scale(&rat(-1)))
    }
}

/// Solves `q e - X_{q+1} + X_{q+2}/2 >= Σ X_k C(k,2)` (with `e = E0 + 1`)
/// for `z`, building the case's counts symbolically.
pub fn final_case_z_bound(q: u64, case: Family) -> Result<ZBound, BoundsError> {
    if q % 2 == 1 {
        return Err(BoundsError::OddQ(q));
    }
    if !Family::FINAL_CASES.contains(&case) {
        return Err(BoundsError::DomainError(format!(
            "{case:?} is not a residual case"
        )));
    }
    let qi = q as i64;
    let counts = case.counts(qi).map(Linear::from_count);
    let [x2, x1, ..] = &counts;
    let e = big(case.edges(q));
    let budget = Linear::constant(big(q) * e)
        .sub(x1)
        .add(&x2.scale(&Rational::new(1.into(), 2.into())));
    let forced = counts
        .iter()
        .zip([qi + 2, qi + 1, qi, qi - 1, qi - 2])
        .fold(Linear::constant(Rational::zero()), |acc, (c, k)| {
            acc.add(&c.scale(&choose2(&rat(k))))
        });
    // slack(z) = c0 + c1 z >= 0
    let slack = budget.sub(&forced);
    if slack.c1.is_zero() {
        return Err(BoundsError::DomainError(format!(
            "case {case:?} does not depend on z"
        )));
    }
    let bound = -&slack.c0 / &slack.c1;
    let kind = if slack.c1.is_negative() {
        BoundKind::Upper
    } else {
        BoundKind::Lower
    };

    // integer z range allowed by nonnegative counts, intersected with the bound
    let (mut lo, mut hi) = (i64::MIN, i64::MAX);
    let mut impossible = false;
    for (a, b) in case.counts(qi) {
        match b.signum() {
            1 => lo = lo.max((-a).div_euclid(b) + ((-a).rem_euclid(b) != 0) as i64),
            -1 => hi = hi.min(a.div_euclid(-b)),
            _ => impossible |= a < 0,
        }
    }
    match kind {
        BoundKind::Upper => hi = hi.min(bound.floor().to_integer().to_i64().expect("small bound")),
        BoundKind::Lower => lo = lo.max(bound.ceil().to_integer().to_i64().expect("small bound")),
    }
    Ok(ZBound {
        case,
        q,
        kind,
        bound,
        integer_feasible: !impossible && lo <= hi,
    })
}

/// The residual-case table as a verdict: feasible iff some case admits an
/// integer `z`.
pub fn final_cases_verdict(q: u64) -> Result<(Vec<ZBound>, LemmaVerdict), BoundsError> {
    let bounds: Vec<ZBound> = Family::FINAL_CASES
        .iter()
        .map(|&c| final_case_z_bound(q, c))
        .collect::<Result<_, _>>()?;
    let feasible = bounds.iter().filter(|b| b.integer_feasible).count();
    let mut terms = BTreeMap::new();
    for (b, name) in bounds
        .iter()
        .zip(["z_bound_a", "z_bound_b", "z_bound_c", "z_bound_d"])
    {
        terms.insert(name, b.bound.clone());
    }
    let v = LemmaVerdict {
        lemma: Lemma::FinalCases,
        q,
        d: None,
        x_q2: None,
        value: big(feasible as u64) - rat(1),
        feasible: feasible > 0,
        in_regime: q >= REGIME,
        terms,
    };
    Ok((bounds, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn e0_values() {
        assert_eq!(e0(2), 7);
        assert_eq!(e0(4), 46);
        assert_eq!(e0(8), 316);
        assert_eq!(e0(16), 2296);
    }

    /// Floor of the bound by scanning integers `k` with `4k <= n + n sqrt(4n-3)`,
    /// i.e. `(4k - n)^2 <= n^2 (4n-3)` once `4k >= n`.
    fn reiman_oracle(n: u64) -> u64 {
        let n = n as i128;
        (0..)
            .take_while(|&k: &i128| {
                let t = 4 * k - n;
                t <= 0 || t * t <= n * n * (4 * n - 3)
            })
            .last()
            .unwrap() as u64
    }

    #[test]
    fn reiman_values() {
        assert_eq!(reiman_bound(7), 10);
        assert_eq!(reiman_bound(6), 8);
        assert_eq!(reiman_bound(1), 0);
        for n in 1..2000 {
            assert_eq!(reiman_bound(n), reiman_oracle(n), "n={n}");
        }
    }

    #[test]
    fn max_degree_examples() {
        assert!(!max_degree_feasibility(6, 9).unwrap().feasible);
        assert!(max_degree_feasibility(6, 7).unwrap().feasible);
        let v = max_degree_feasibility(3, 4).unwrap();
        assert_eq!(v.terms["q2_minus_q_minus_5"], rat(1));
        assert!(max_degree_feasibility(2, 3).is_err());
        assert!(max_degree_feasibility(6, 42).is_err());
    }

    #[test]
    fn max_degree_range() {
        for q in 6..=64u64 {
            let n = q * q + q;
            let at = max_degree_feasibility(q, q + 1).unwrap();
            assert!(at.feasible && !at.value.is_negative(), "q={q}");
            for d in q + 3..n {
                let v = max_degree_feasibility(q, d).unwrap();
                assert!(!v.feasible && v.value.is_negative(), "q={q} d={d}");
            }
        }
    }

    #[test]
    fn degree_sequence_examples() {
        let rows = degree_sequence_rows(2).unwrap();
        let r1 = rows
            .iter()
            .find(|r| r.family == Family::Row1 && r.z == 0)
            .unwrap();
        assert_eq!(
            (r1.x_q_plus_1, r1.x_q, r1.x_q_minus_1, r1.x_q_minus_2),
            (2, 4, 0, 0)
        );
        assert_eq!(r1.degree_sum(), 14);
        let rows = degree_sequence_rows(4).unwrap();
        let r1 = rows
            .iter()
            .find(|r| r.family == Family::Row1 && r.z == 0)
            .unwrap();
        assert_eq!(
            (r1.x_q_plus_1, r1.x_q, r1.x_q_minus_1, r1.x_q_minus_2),
            (12, 8, 0, 0)
        );
        assert_eq!(r1.degree_sum(), 92);
        let r2 = rows
            .iter()
            .find(|r| r.family == Family::Row2 && r.z == 1)
            .unwrap();
        assert_eq!(
            (r2.x_q_plus_1, r2.x_q, r2.x_q_minus_1, r2.x_q_minus_2),
            (14, 5, 0, 1)
        );
        assert_eq!(r2.degree_sum(), 92);
        assert_eq!(degree_sequence_rows(3), Err(BoundsError::OddQ(3)));
    }

    #[test]
    fn degree_sequence_ranges() {
        for q in (2..=64).step_by(2) {
            let rows = degree_sequence_rows(q).unwrap();
            let z1: Vec<i64> = rows
                .iter()
                .filter(|r| r.family == Family::Row1)
                .map(|r| r.z)
                .collect();
            let z2: Vec<i64> = rows
                .iter()
                .filter(|r| r.family == Family::Row2)
                .map(|r| r.z)
                .collect();
            assert_eq!(z1, (0..=q as i64).collect::<Vec<_>>());
            assert_eq!(z2, (1..q as i64).collect::<Vec<_>>());
            assert!(rows.iter().all(|r| r.is_nonnegative()));
        }
    }

    #[test]
    fn budget_examples() {
        assert_eq!(two_path_budget(2, 8, 2, 1), r(29, 2));
        assert_eq!(two_path_budget(3, 10, 4, 0), rat(26));
    }

    #[test]
    fn g_table_examples() {
        assert_eq!(g_table(6, 6), Ok(5));
        assert_eq!(g_table(6, 8), Ok(0));
        assert_eq!(g_table(6, 4), Ok(17));
        assert_eq!(
            g_table(6, 3),
            Err(BoundsError::DegreeOutOfRange { q: 6, d: 3 })
        );
        assert_eq!(g_table(5, 5), Err(BoundsError::OddQ(5)));
        for q in (6..=64).step_by(2) {
            for d in q as i64 - 2..=q as i64 + 2 {
                assert_eq!(g_table(q, d), g_closed_form(q, d));
            }
            // closed form for d <= q is n - 1 - d q
            for d in 0..=q as i64 {
                assert_eq!(
                    g_closed_form(q, d).unwrap(),
                    (q * q + q) as i64 - 1 - d * q as i64
                );
            }
        }
    }

    #[test]
    fn low_degree_adjacency_examples() {
        // 2*216 - 2*36 - 60 + 12 = 312 over 36 + 6 - 2 = 40
        let v = low_degree_adjacency_expression(6).unwrap();
        assert_eq!(v.value, r(-39, 5));
        assert!(!v.feasible);
        let v = low_degree_adjacency_expression(2).unwrap();
        assert_eq!(v.value, rat(0));
        assert!(v.feasible);
        assert!(!low_degree_adjacency_expression(100).unwrap().feasible);
        assert!(low_degree_adjacency_expression(1).is_err());
    }

    #[test]
    fn low_degree_adjacency_matches_gap() {
        for q in 2..=200 {
            assert_eq!(
                low_degree_adjacency_expression(q).unwrap().value,
                low_degree_adjacency_gap(q),
                "q={q}"
            );
        }
    }

    #[test]
    fn shared_neighbor_examples() {
        // -1296 - 1296 + 612 + 204 - 48 = -1824 over 40
        assert_eq!(shared_neighbor_expression(6).unwrap().value, r(-228, 5));
        assert!(!shared_neighbor_expression(6).unwrap().feasible);
        assert!(matches!(
            shared_neighbor_expression(1),
            Err(BoundsError::DomainError(_))
        ));
        assert!(!shared_neighbor_expression(50).unwrap().feasible);
    }

    #[test]
    fn shared_neighbor_sign_agrees_with_gap() {
        for q in 6..=1000 {
            assert!(shared_neighbor_gap(q).is_negative(), "q={q}");
        }
    }

    #[test]
    fn shared_neighbor_degree_examples() {
        // numerator 1296 - 900 - 168 + 96 = 324 over 288 + 48 - 16 = 320
        assert_eq!(
            shared_neighbor_degree_expression(6, DenominatorReading::Corrected)
                .unwrap()
                .value,
            r(-81, 80)
        );
        assert_eq!(
            shared_neighbor_degree_expression(6, DenominatorReading::Printed)
                .unwrap()
                .value,
            r(-324, 280)
        );
        let v = shared_neighbor_degree_expression(2, DenominatorReading::Corrected).unwrap();
        assert_eq!(v.value, r(3, 8));
        assert!(v.feasible && !v.in_regime);
        assert!(
            !shared_neighbor_degree_expression(100, DenominatorReading::Corrected)
                .unwrap()
                .feasible
        );
    }

    #[test]
    fn shared_neighbor_degree_corrected_matches_gap() {
        for q in 2..=200 {
            let v = shared_neighbor_degree_expression(q, DenominatorReading::Corrected).unwrap();
            assert_eq!(v.value, shared_neighbor_degree_gap(q), "q={q}");
        }
    }

    #[test]
    fn min_degree_examples() {
        assert_eq!(min_degree_min_admissible(6), 5);
        assert!(!min_degree_verdict(6).feasible);
        assert_eq!(min_degree_min_admissible(8), 6);
        assert!(!min_degree_verdict(8).feasible);
        // best case x = delta = q/2 + 1: -1 at q = 6, 1/2 at q = 4
        assert_eq!(min_degree_verdict(6).value, rat(-1));
        assert_eq!(min_degree_verdict(4).value, r(1, 2));
        assert!(min_degree_verdict(4).feasible);

        let roots = min_degree_roots(6, 1).unwrap();
        assert_eq!(roots.radicand, 5);
        let s5 = (roots.delta_upper.lo.clone() - r(15, 2)) * rat(2);
        assert!(&s5 * &s5 <= rat(5));
        let width = &roots.delta_upper.hi - &roots.delta_upper.lo;
        assert!(width <= r(1, 1_000_000_000));
        assert!(roots.delta_lower.lo <= roots.delta_lower.hi);
        assert_eq!(
            min_degree_roots(6, 0).unwrap_err(),
            BoundsError::RadicandNegative(0)
        );

        // 12x - 7 is never a perfect square (squares are 0, 1, 4, 9 mod 12),
        // so the exact branch is exercised directly
        let b = sqrt_bracket(49);
        assert_eq!((b.lo.clone(), b.hi.clone()), (rat(7), rat(7)));
    }

    #[test]
    fn min_degree_routes_agree() {
        for q in 2..=64 {
            for x in 1..=3 * q {
                let roots = min_degree_roots(q, x).unwrap();
                // the upper-root condition is x <= q + 3 + sqrt(3q + 5)
                let t = x as i128 - q as i128 - 3;
                assert_eq!(
                    roots.root_condition_holds,
                    t <= 0 || t * t <= 3 * q as i128 + 5
                );
                for delta in 0..=q + 3 {
                    assert_eq!(
                        min_degree_two_path_slack(q, delta, x),
                        min_degree_quadratic(q, delta, x),
                        "q={q} delta={delta} x={x}"
                    );
                }
            }
        }
        for q in 5..=200 {
            assert!(!min_degree_verdict(q).feasible, "q={q}");
            // brute force over every 1 <= x <= delta <= q/2 + 1
            let d = q / 2 + 1;
            let any = (1..=d)
                .any(|delta| (1..=delta).any(|x| !min_degree_quadratic(q, delta, x).is_negative()));
            assert!(!any, "q={q}");
        }
    }

    #[test]
    fn final_case_values() {
        let expected = [r(-1, 4), r(-3, 4), r(-7, 4), r(3, 4)];
        for q in (6..=64).step_by(2) {
            for (case, want) in Family::FINAL_CASES.iter().zip(&expected) {
                let b = final_case_z_bound(q, *case).unwrap();
                assert_eq!(b.kind, BoundKind::Upper);
                assert_eq!(&b.bound, want, "q={q} {case:?}");
                assert!(!b.integer_feasible, "q={q} {case:?}");
            }
        }
        assert_eq!(
            final_case_z_bound(7, Family::A).unwrap_err(),
            BoundsError::OddQ(7)
        );
        assert!(final_case_z_bound(6, Family::Row1).is_err());
    }

    #[test]
    fn final_case_rows_balance() {
        for q in (6..=64).step_by(2) {
            for case in Family::FINAL_CASES {
                for z in -3..=q as i64 {
                    let row = DegreeSequenceRow::new(case, q, z);
                    assert_eq!(row.vertex_count(), (q * q + q) as i64);
                    assert_eq!(row.degree_sum(), 2 * (e0(q) + 1) as i64);
                }
            }
        }
    }

    #[test]
    fn final_case_bound_matches_row_evaluation() {
        // at integer z just above/below the bound, evaluate the inequality on the row itself
        let q = 10;
        for case in Family::FINAL_CASES {
            let b = final_case_z_bound(q, case).unwrap();
            let zf = b.bound.floor().to_integer().to_i64().unwrap();
            for (z, holds) in [(zf, true), (zf + 1, false)] {
                let row = DegreeSequenceRow::new(case, q, z);
                let budget = two_path_budget(q, e0(q) + 1, row.x_q_plus_1 as u64, 1);
                assert_eq!(budget >= row.two_paths(), holds, "{case:?} z={z}");
            }
        }
    }
}
