//! Linking matrices, bounds on the C_k-trivializing number, and the
//! obstruction certificates for two- and three-component links.

use std::fmt;

use itertools::Itertools;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::diagram::{CrossingClass, LinkDiagram};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("crossings between components {i} and {j} have odd sign sum {sum}")]
    ParityError { i: usize, j: usize, sum: i64 },
    #[error("k must be at least 1, got {0}")]
    InvalidK(i64),
    #[error("residue {0} outside 0..=7")]
    OutOfRange(i64),
    #[error("n and k must be at least 1, got n = {n}, k = {k}")]
    InvalidParams { n: i64, k: i64 },
    #[error("linking matrix is not symmetric with zero diagonal")]
    NotSymmetric,
    #[error("expected {expected} component flags, got {got}")]
    FlagCount { expected: usize, got: usize },
}

/// Symmetric integer matrix of pairwise linking numbers, 1-based access.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinkingMatrix {
    n: usize,
    lk: Vec<Vec<i64>>,
}

impl LinkingMatrix {
    pub fn zero(n: usize) -> Self {
        LinkingMatrix {
            n,
            lk: vec![vec![0; n]; n],
        }
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self, BoundsError> {
        let n = rows.len();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n || r[i] != 0 {
                return Err(BoundsError::NotSymmetric);
            }
            for j in 0..n {
                if rows[j][i] != r[j] {
                    return Err(BoundsError::NotSymmetric);
                }
            }
        }
        Ok(LinkingMatrix { n, lk: rows })
    }

    /// Matrix from the upper-triangle values in `(1,2), (1,3), .., (n-1,n)` order.
    pub fn from_upper(n: usize, values: &[i64]) -> Self {
        let mut m = Self::zero(n);
        for ((i, j), &v) in pairs(n).zip(values) {
            m.set(i, j, v);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.lk[i - 1][j - 1]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        assert_ne!(i, j, "diagonal is fixed at zero");
        self.lk[i - 1][j - 1] = v;
        self.lk[j - 1][i - 1] = v;
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.lk
    }

    pub fn is_zero(&self) -> bool {
        self.lk.iter().flatten().all(|&v| v == 0)
    }

    /// The same matrix with components listed in `order` (1-based).
    pub fn permuted(&self, order: &[usize]) -> LinkingMatrix {
        let mut m = Self::zero(self.n);
        for (a, b) in pairs(self.n) {
            m.set(a, b, self.get(order[a - 1], order[b - 1]));
        }
        m
    }
}

/// Index pairs `i < j` over `1..=n`, lexicographically.
fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=n).tuple_combinations()
}

fn binom2(n: usize) -> i64 {
    (n * n.saturating_sub(1) / 2) as i64
}

/// Pairwise linking numbers as half the signed count of mixed crossings.
pub fn linking_matrix(d: &LinkDiagram) -> Result<LinkingMatrix, BoundsError> {
    let n = d.component_count();
    let mut sums = vec![vec![0i64; n]; n];
    for c in d.crossings() {
        if let CrossingClass::Between(i, j) = d.crossing_class(c) {
            sums[i - 1][j - 1] += c.sign as i64;
        }
    }
    let mut m = LinkingMatrix::zero(n);
    for (i, j) in pairs(n) {
        let sum = sums[i - 1][j - 1];
        if sum % 2 != 0 {
            return Err(BoundsError::ParityError { i, j, sum });
        }
        m.set(i, j, sum / 2);
    }
    Ok(m)
}

/// Sum of `|lk|` over pairs.
pub fn lambda_total(m: &LinkingMatrix) -> i64 {
    pairs(m.n).map(|(i, j)| m.get(i, j).abs()).sum()
}

/// Like [`lambda_total`] but non-adjacent unlinked pairs count 2. Depends on
/// the component order.
pub fn lambda_star(m: &LinkingMatrix) -> i64 {
    pairs(m.n)
        .map(|(i, j)| {
            let v = m.get(i, j);
            if i + 1 < j && v == 0 {
                2
            } else {
                v.abs()
            }
        })
        .sum()
}

/// Sum of `||lk| - 1|` over pairs.
pub fn lambda_prime(m: &LinkingMatrix) -> i64 {
    pairs(m.n).map(|(i, j)| (m.get(i, j).abs() - 1).abs()).sum()
}

/// Largest component count accepted by [`lambda_star_min`].
pub const MAX_ORDERING_N: usize = 8;

/// Extension: the smallest [`lambda_star`] over all component orders, with
/// the first order attaining it. `None` above [`MAX_ORDERING_N`] components.
pub fn lambda_star_min(m: &LinkingMatrix) -> Option<(i64, Vec<usize>)> {
    if m.n > MAX_ORDERING_N {
        return None;
    }
    (1..=m.n)
        .permutations(m.n)
        .map(|p| (lambda_star(&m.permuted(&p)), p))
        .min_by_key(|(v, _)| *v)
        .or(Some((0, Vec::new())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Nontriviality {
    CertifiedNontrivial,
    CertifiedTrivial,
    Unknown,
}

/// What is known about one component, with the certificate that backs it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentFlag {
    pub status: Nontriviality,
    pub certificate: Option<Certificate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub tag: String,
    pub value: i64,
}

impl ComponentFlag {
    pub fn unknown() -> Self {
        ComponentFlag {
            status: Nontriviality::Unknown,
            certificate: None,
        }
    }

    /// Nontrivial with a nonzero certificate value; `None` if `value` is 0.
    pub fn nontrivial(tag: &str, value: i64) -> Option<Self> {
        (value != 0).then(|| ComponentFlag {
            status: Nontriviality::CertifiedNontrivial,
            certificate: Some(Certificate {
                tag: tag.to_string(),
                value,
            }),
        })
    }

    pub fn trivial(tag: &str) -> Self {
        ComponentFlag {
            status: Nontriviality::CertifiedTrivial,
            certificate: Some(Certificate {
                tag: tag.to_string(),
                value: 0,
            }),
        }
    }

    pub fn is_nontrivial(&self) -> bool {
        self.status == Nontriviality::CertifiedNontrivial
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ComponentFlags(pub Vec<ComponentFlag>);

impl ComponentFlags {
    pub fn unknown(n: usize) -> Self {
        ComponentFlags(vec![ComponentFlag::unknown(); n])
    }

    /// Every component certified nontrivial by `v2 = 1`.
    pub fn all_nontrivial(n: usize) -> Self {
        ComponentFlags(vec![ComponentFlag::nontrivial("v2!=0", 1).expect("nonzero"); n])
    }

    /// Flags from per-component v2 values at length `k`: a nonzero value
    /// certifies the component is not C_k-trivial once `k >= 3`; components
    /// without crossings are trivial.
    pub fn from_v2(v2: &[i64], crossing_free: &[bool], k: usize) -> Self {
        ComponentFlags(
            v2.iter()
                .zip(crossing_free)
                .map(|(&v, &free)| {
                    if free {
                        ComponentFlag::trivial("no crossings")
                    } else if k >= 3 && v != 0 {
                        ComponentFlag::nontrivial("v2!=0", v).expect("nonzero")
                    } else {
                        ComponentFlag::unknown()
                    }
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn all_nontrivial_certified(&self) -> bool {
        self.0.iter().all(ComponentFlag::is_nontrivial)
    }
}

/// A bound value and the results that give it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bound {
    pub value: i64,
    pub provenance: Vec<String>,
}

impl Bound {
    fn best<F: Fn(i64, i64) -> bool>(candidates: Vec<(i64, &str)>, better: F) -> Bound {
        let value = candidates
            .iter()
            .map(|c| c.0)
            .reduce(|a, b| if better(b, a) { b } else { a })
            .expect("at least one candidate");
        Bound {
            value,
            provenance: candidates
                .into_iter()
                .filter(|c| c.0 == value)
                .map(|c| c.1.to_string())
                .collect(),
        }
    }
}

/// Bounds on `u_k` and on the homotopy unlinking number.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub k: usize,
    pub n: usize,
    pub lower: Bound,
    pub upper: Bound,
    pub exact: Option<Bound>,
    pub homotopy_lower: i64,
    pub homotopy_upper: i64,
}

impl BoundReport {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("plain data")
    }
}

/// Every applicable bound on `u_k` for a link with linking matrix `m`.
pub fn uk_bounds(
    m: &LinkingMatrix,
    flags: &ComponentFlags,
    k: i64,
) -> Result<BoundReport, BoundsError> {
    if k < 1 {
        return Err(BoundsError::InvalidK(k));
    }
    let n = m.n;
    if flags.len() != n {
        return Err(BoundsError::FlagCount {
            expected: n,
            got: flags.len(),
        });
    }
    let big = lambda_total(m);
    let homotopy_lower = big;
    let homotopy_upper = lambda_star(m);
    let tri = binom2(n + 1);
    let report = |lower: Bound, upper: Bound, exact: Option<Bound>| BoundReport {
        k: k as usize,
        n,
        lower,
        upper,
        exact,
        homotopy_lower,
        homotopy_upper,
    };

    if k <= 2 && m.is_zero() {
        let zero = Bound {
            value: 0,
            provenance: vec!["Cnk-k<=2".into()],
        };
        return Ok(report(zero.clone(), zero.clone(), Some(zero)));
    }

    let all_unit = n >= 2 && pairs(n).all(|(i, j)| m.get(i, j).abs() == 1);
    let mut lows = vec![(big, "Thm1.4-lower")];
    if all_unit {
        lows.push((binom2(n), "Thm1.2-lower"));
    }
    let mut ups = vec![
        (tri + lambda_prime(m), "Thm1.4-upper"),
        ((n * n) as i64 + big, "Cor1.5-upper"),
    ];
    if m.is_zero() {
        ups.push(((n * n) as i64, "Thm1.1-upper"));
    }
    if all_unit {
        ups.push((tri, "Thm1.2-upper"));
    }
    if n == 1 {
        ups.push((1, "knot-upper"));
    }
    let lower = Bound::best(lows, |a, b| a > b);
    let upper = Bound::best(ups, |a, b| a < b);

    // no knot is C_2-nontrivial, so the exact value needs k >= 3
    let exactness = k >= 3
        && pairs(n).all(|(i, j)| m.get(i, j) != 0)
        && flags.all_nontrivial_certified();
    if exactness {
        let v = n as i64 + big;
        let tag = |b: &Bound| {
            let mut p = b.provenance.clone();
            p.push("Cor1.6-exact".into());
            Bound { value: v, provenance: p }
        };
        let exact = Bound {
            value: v,
            provenance: vec!["Cor1.6-exact".into()],
        };
        return Ok(report(tag(&lower), tag(&upper), Some(exact)));
    }
    Ok(report(lower, upper, None))
}

/// Residues mod 8 of `a^2 + b^2` and `a^2 - b^2`: everything except 6.
const REPRESENTABLE_MOD8: [bool; 8] = [true, true, true, true, true, true, false, true];

/// Whether `r` is congruent to `a^2 + b^2` or `a^2 - b^2` mod 8.
pub fn squares_mod8_representable(r: i64) -> Result<bool, BoundsError> {
    if !(0..8).contains(&r) {
        return Err(BoundsError::OutOfRange(r));
    }
    Ok(REPRESENTABLE_MOD8[r as usize])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TheoremId {
    #[serde(rename = "Thm4.2")]
    Thm42,
    #[serde(rename = "Thm4.3a")]
    Thm43a,
    #[serde(rename = "Thm4.3b")]
    Thm43b,
    #[serde(rename = "Thm4.4")]
    Thm44,
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TheoremId::Thm42 => "Thm4.2",
            TheoremId::Thm43a => "Thm4.3a",
            TheoremId::Thm43b => "Thm4.3b",
            TheoremId::Thm44 => "Thm4.4",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hypothesis {
    pub name: String,
    pub holds: bool,
    pub witness: Value,
}

/// Lower bound `u_k >= value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LowerBound {
    pub k: usize,
    pub value: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObstructionCertificate {
    pub theorem: TheoremId,
    pub hypotheses: Vec<Hypothesis>,
    pub conclusion: Option<LowerBound>,
}

impl ObstructionCertificate {
    fn new(theorem: TheoremId, hypotheses: Vec<Hypothesis>, bound: LowerBound) -> Self {
        let fires = hypotheses.iter().all(|h| h.holds);
        ObstructionCertificate {
            theorem,
            hypotheses,
            conclusion: fires.then_some(bound),
        }
    }

    pub fn fired(&self) -> bool {
        self.conclusion.is_some()
    }

    pub fn failed_hypotheses(&self) -> Vec<&str> {
        self.hypotheses
            .iter()
            .filter(|h| !h.holds)
            .map(|h| h.name.as_str())
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("plain data");
        let provenance: Vec<String> = if self.fired() {
            vec![self.theorem.to_string()]
        } else {
            Vec::new()
        };
        v["provenance"] = json!(provenance);
        v
    }
}

fn hyp(name: &str, holds: bool, witness: Value) -> Hypothesis {
    Hypothesis {
        name: name.to_string(),
        holds,
        witness,
    }
}

fn flag_hypotheses(flags: &ComponentFlags, n: usize, k: usize) -> Vec<Hypothesis> {
    (0..n)
        .map(|i| {
            let flag = flags.0.get(i);
            hyp(
                &format!("component {} not C{k}-trivial", i + 1),
                flag.is_some_and(ComponentFlag::is_nontrivial),
                flag.and_then(|f| f.certificate.as_ref())
                    .map_or(Value::Null, |c| json!({"tag": c.tag, "value": c.value})),
            )
        })
        .collect()
}

/// `u_4 >= 3` for a two-component link with `lk = 0`, positive
/// `mu_1122 = 6 mod 8` and both components certified not C_4-trivial.
pub fn obstruction_two_comp(
    lk: i64,
    mu1122: i64,
    flags: &ComponentFlags,
) -> ObstructionCertificate {
    let mut h = vec![
        hyp("two components", flags.len() == 2, json!(flags.len())),
        hyp("lk = 0", lk == 0, json!(lk)),
        hyp("mu_1122 > 0", mu1122 > 0, json!(mu1122)),
        hyp("mu_1122 = 6 mod 8", mu1122.rem_euclid(8) == 6, json!(mu1122.rem_euclid(8))),
    ];
    h.extend(flag_hypotheses(flags, 2, 4));
    ObstructionCertificate::new(TheoremId::Thm42, h, LowerBound { k: 4, value: 3 })
}

/// `u_3 >= 5` for a three-component link with vanishing linking numbers,
/// `mu_123 != 0` and every component certified not C_3-trivial; and
/// `u_4 >= 6` when moreover every pairwise `mu_iijj` equals 6.
pub fn obstruction_three_comp(
    m: &LinkingMatrix,
    mu123: i64,
    mu1122_pairs: [i64; 3],
    flags: &ComponentFlags,
) -> Vec<ObstructionCertificate> {
    let mut base = vec![
        hyp("three components", m.n() == 3 && flags.len() == 3, json!(m.n())),
        hyp("all lk = 0", m.is_zero(), json!(m.rows())),
        hyp("mu_123 != 0", mu123 != 0, json!(mu123)),
    ];
    base.extend(flag_hypotheses(flags, 3, 3));
    let a = ObstructionCertificate::new(TheoremId::Thm43a, base.clone(), LowerBound { k: 3, value: 5 });
    let mut more = base;
    more.push(hyp(
        "pairwise mu_iijj = 6",
        mu1122_pairs.iter().all(|&v| v == 6),
        json!(mu1122_pairs),
    ));
    let b = ObstructionCertificate::new(TheoremId::Thm43b, more, LowerBound { k: 4, value: 6 });
    vec![a, b]
}

fn ceil_div(a: i64, b: i64) -> i64 {
    (a + b - 1).div_euclid(b)
}

/// Best known bounds on `C(n, k)`, the largest `u_k` over n-component links.
pub fn cnk_bounds(n: i64, k: i64) -> Result<(i64, i64), BoundsError> {
    if n < 1 || k < 1 {
        return Err(BoundsError::InvalidParams { n, k });
    }
    Ok(match (n, k) {
        (_, k) if k <= 2 => (0, 0),
        (1, _) => (1, 1),
        (2, k) if k >= 4 => (3, 4),
        (3, 3) => (5, 9),
        (3, _) => (6, 9),
        (n, k) if n >= 4 && k >= 4 => ((2 * ceil_div(n * (n - 2), 3) + n).max(0), n * n),
        (n, _) => (0, n * n),
    })
}

/// Provenance tag for a [`cnk_bounds`] cell.
pub fn cnk_provenance(n: i64, k: i64) -> &'static str {
    match (n, k) {
        (_, k) if k <= 2 => "Cnk-k<=2",
        (1, _) => "Cnk-knots",
        (2, k) if k >= 4 => "Thm4.2+Thm1.2",
        (3, 3) => "Thm4.3a+Thm1.1",
        (3, _) => "Thm4.3b+Thm1.1",
        (n, k) if n >= 4 && k >= 4 => "Thm4.4+Thm1.1",
        _ => "Thm1.1",
    }
}
