//! Trace polynomials, the deformation curve in trace coordinates and
//! generalized Dehn-filling coefficients.
//!
//! The Chebyshev-like polynomials are defined by
//!
//! ```text
//! p₀ = 2,  p₁ = x,  pₙ = x·pₙ₋₁ − pₙ₋₂
//! ```
//!
//! so that `pₙ(2cos φ) = 2cos(nφ)` and `tr(Mⁿ) = pₙ(tr M)` for `M ∈ SL₂(ℂ)`.
//! Given branching data `(m₁,…,m_q)` with signs `εᵢ`, the curve `C ⊂ ℂ^q` is
//! cut out by `p_{m₁}(ε₁z₁) = ⋯ = p_{m_q}(ε_q z_q)` and parametrized near the
//! complete structure by `Θ(w) = (εᵢ·2cos(wπ/mᵢ))ᵢ`.

use std::f64::consts::{PI, TAU};
use std::fmt;

use nalgebra::{DMatrix, Matrix2};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative cutoff of the continued-fraction rationality test.
const RATIONAL_CUTOFF: f64 = 1e-12;
/// Largest denominator accepted by the continued-fraction test. Generic
/// irrationals have convergents `h/k` with error near `1/k²`, far above the
/// cutoff at this size.
const MAX_DENOMINATOR: i64 = 10_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TraceError {
    #[error("branching data: {0}")]
    Branching(&'static str),
    #[error("determinant {0} is not 1")]
    NotUnimodular(Complex64),
    #[error("expected {expected} trace coordinates, got {got}")]
    Length { expected: usize, got: usize },
    #[error("the coefficient (0, 0) is not a filling coefficient")]
    ZeroCoefficient,
    #[error("invalid coefficient: {0}")]
    Coefficient(String),
    #[error("t = {0} is outside [0, 1]")]
    Schedule(f64),
}

/// `pₙ` with exact integer coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChebLikePoly {
    pub n: u32,
    pub coefficients: Vec<BigInt>,
}

impl ChebLikePoly {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Exact value at an integer.
    pub fn eval_exact(&self, x: &BigInt) -> BigInt {
        self.coefficients
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Exact derivative at an integer.
    pub fn derivative_exact(&self, x: &BigInt) -> BigInt {
        self.coefficients
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(BigInt::zero(), |acc, (k, c)| acc * x + c * BigInt::from(k))
    }

    /// Floating value by the three-term recurrence.
    pub fn eval(&self, x: f64) -> f64 {
        cheb_eval(self.n, x)
    }
}

impl fmt::Display for ChebLikePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    write!(f, "x")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

pub fn cheb_like(n: u32) -> ChebLikePoly {
    let mut prev = vec![BigInt::from(2)];
    let mut cur = vec![BigInt::zero(), BigInt::one()];
    if n == 0 {
        return ChebLikePoly { n, coefficients: prev };
    }
    for _ in 1..n {
        let mut next = vec![BigInt::zero(); cur.len() + 1];
        for (k, c) in cur.iter().enumerate() {
            next[k + 1] += c;
        }
        for (k, c) in prev.iter().enumerate() {
            next[k] -= c;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    ChebLikePoly { n, coefficients: cur }
}

/// `p'ₙ(2)`, computed exactly from the integer coefficients.
pub fn cheb_derivative_at_two(n: u32) -> BigInt {
    cheb_like(n).derivative_exact(&BigInt::from(2))
}

/// `pₙ(x)` by the recurrence, stable for `|x| ≤ 2`.
pub fn cheb_eval(n: u32, x: f64) -> f64 {
    let (mut a, mut b) = (2.0, x);
    if n == 0 {
        return a;
    }
    for _ in 1..n {
        (a, b) = (b, x * b - a);
    }
    b
}

pub fn cheb_eval_complex(n: u32, z: Complex64) -> Complex64 {
    let (mut a, mut b) = (Complex64::new(2.0, 0.0), z);
    if n == 0 {
        return a;
    }
    for _ in 1..n {
        (a, b) = (b, z * b - a);
    }
    b
}

/// `p'ₙ(z)` from the differentiated recurrence.
pub fn cheb_derivative_complex(n: u32, z: Complex64) -> Complex64 {
    let (mut p0, mut p1) = (Complex64::new(2.0, 0.0), z);
    let (mut d0, mut d1) = (Complex64::zero(), Complex64::one());
    if n == 0 {
        return d0;
    }
    for _ in 1..n {
        let p2 = z * p1 - p0;
        let d2 = p1 + z * d1 - d0;
        (p0, p1) = (p1, p2);
        (d0, d1) = (d1, d2);
    }
    d1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePower {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub agrees: bool,
}

/// Compares `tr(Mⁿ)` with `pₙ(tr M)`.
pub fn trace_power_check(m: &Matrix2<Complex64>, n: u32) -> Result<TracePower, TraceError> {
    let det = m.determinant();
    if (det - Complex64::one()).norm() >= 1e-9 {
        return Err(TraceError::NotUnimodular(det));
    }
    let mut power = Matrix2::identity();
    let mut base = *m;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            power *= base;
        }
        base = base * base;
        e >>= 1;
    }
    let lhs: Complex64 = power.trace();
    let rhs: Complex64 = cheb_eval_complex(n, m.trace());
    let agrees = (lhs - rhs).norm() < 1e-8 * lhs.norm().max(1.0);
    Ok(TracePower { lhs, rhs, agrees })
}

/// Ramification indices `mᵢ ≥ 2` with signs `εᵢ = ±1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawBranching")]
pub struct BranchingData {
    pub m: Vec<u32>,
    pub eps: Vec<i8>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBranching {
    m: Vec<u32>,
    #[serde(default)]
    eps: Option<Vec<i8>>,
}

impl TryFrom<RawBranching> for BranchingData {
    type Error = TraceError;
    fn try_from(raw: RawBranching) -> Result<Self, Self::Error> {
        match raw.eps {
            Some(eps) => BranchingData::new(raw.m, eps),
            None => BranchingData::with_positive_signs(raw.m),
        }
    }
}

impl BranchingData {
    pub fn new(m: Vec<u32>, eps: Vec<i8>) -> Result<Self, TraceError> {
        if m.is_empty() {
            return Err(TraceError::Branching("at least one index is required"));
        }
        if m.len() != eps.len() {
            return Err(TraceError::Branching("m and eps differ in length"));
        }
        if m.iter().any(|&mi| mi < 2) {
            return Err(TraceError::Branching("indices must be at least 2"));
        }
        if eps.iter().any(|&e| e != 1 && e != -1) {
            return Err(TraceError::Branching("signs must be +1 or -1"));
        }
        Ok(BranchingData { m, eps })
    }

    pub fn with_positive_signs(m: Vec<u32>) -> Result<Self, TraceError> {
        let eps = vec![1; m.len()];
        BranchingData::new(m, eps)
    }

    pub fn q(&self) -> usize {
        self.m.len()
    }

    fn sign(&self, i: usize) -> f64 {
        self.eps[i] as f64
    }
}

/// `Θ(w) = (εᵢ·2cos(wπ/mᵢ))ᵢ`.
pub fn theta_param(data: &BranchingData, w: Complex64) -> Vec<Complex64> {
    data.m
        .iter()
        .enumerate()
        .map(|(i, &mi)| (w * PI / mi as f64).cos() * 2.0 * data.sign(i))
        .collect()
}

fn curve_values(data: &BranchingData, z: &[Complex64]) -> Result<Vec<Complex64>, TraceError> {
    if z.len() != data.q() {
        return Err(TraceError::Length {
            expected: data.q(),
            got: z.len(),
        });
    }
    Ok(data
        .m
        .iter()
        .zip(z)
        .enumerate()
        .map(|(i, (&mi, &zi))| cheb_eval_complex(mi, zi * data.sign(i)))
        .collect())
}

/// `maxᵢ |p_{m₁}(ε₁z₁) − p_{mᵢ}(εᵢzᵢ)|`.
pub fn curve_residual(data: &BranchingData, z: &[Complex64]) -> Result<f64, TraceError> {
    let values = curve_values(data, z)?;
    Ok(values.iter().map(|v| (values[0] - v).norm()).fold(0.0, f64::max))
}

/// [`curve_residual`] divided by `max(1, maxᵢ |p_{mᵢ}(εᵢzᵢ)|)`.
///
/// Off the real axis the values grow like `cosh(π Im w)`, so the absolute
/// residual of a floating evaluation scales with them.
pub fn curve_residual_scaled(data: &BranchingData, z: &[Complex64]) -> Result<f64, TraceError> {
    let values = curve_values(data, z)?;
    let scale = values.iter().map(|v| v.norm()).fold(1.0, f64::max);
    Ok(values.iter().map(|v| (values[0] - v).norm()).fold(0.0, f64::max) / scale)
}

/// Jacobian of `zᵢ ↦ p_{m₁}(ε₁z₁) − p_{mᵢ}(εᵢzᵢ)`, `i = 2..q`.
pub fn curve_jacobian(data: &BranchingData, z: &[Complex64]) -> Result<DMatrix<Complex64>, TraceError> {
    if z.len() != data.q() {
        return Err(TraceError::Length {
            expected: data.q(),
            got: z.len(),
        });
    }
    let q = data.q();
    let mut jac = DMatrix::zeros(q - 1, q);
    let first = cheb_derivative_complex(data.m[0], z[0] * data.sign(0)) * data.sign(0);
    for i in 1..q {
        jac[(i - 1, 0)] = first;
        jac[(i - 1, i)] = -cheb_derivative_complex(data.m[i], z[i] * data.sign(i)) * data.sign(i);
    }
    Ok(jac)
}

/// Numerical rank of the Jacobian of `C` at `Θ(0)`.
pub fn smooth_point_rank(data: &BranchingData) -> usize {
    let z = theta_param(data, Complex64::zero());
    let jac = curve_jacobian(data, &z).expect("Θ has length q");
    if jac.nrows() == 0 {
        return 0;
    }
    jac.svd(false, false).rank(1e-6)
}

/// Trace `2cos(angle/2)` of an elliptic meridian with rotation angle `angle`.
pub fn meridian_trace(angle: f64) -> f64 {
    2.0 * (angle / 2.0).cos()
}

/// A real coefficient component, exact when known.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Real {
    Exact(Ratio<i64>),
    Approx(f64),
}

impl Real {
    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(r) => *r.numer() as f64 / *r.denom() as f64,
            Real::Approx(x) => *x,
        }
    }

    fn is_zero(&self) -> bool {
        self.to_f64() == 0.0
    }

    /// The integer this component equals, up to the rationality cutoff.
    fn as_integer(&self) -> Option<i64> {
        match self {
            Real::Exact(r) => r.is_integer().then(|| r.to_integer()),
            Real::Approx(x) => {
                let n = x.round();
                ((x - n).abs() <= RATIONAL_CUTOFF * x.abs().max(1.0) && n.abs() < 9e15).then_some(n as i64)
            }
        }
    }
}

impl From<f64> for Real {
    fn from(x: f64) -> Self {
        Real::Approx(x)
    }
}

impl From<i64> for Real {
    fn from(n: i64) -> Self {
        Real::Exact(Ratio::from_integer(n))
    }
}

impl From<Ratio<i64>> for Real {
    fn from(r: Ratio<i64>) -> Self {
        Real::Exact(r)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Real::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Real::Approx(x) => write!(f, "{x}"),
        }
    }
}

impl std::str::FromStr for Real {
    type Err = TraceError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || TraceError::Coefficient(format!("cannot parse {s:?}"));
        if let Some((a, b)) = s.split_once('/') {
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let b: i64 = b.trim().parse().map_err(|_| bad())?;
            if b == 0 {
                return Err(bad());
            }
            return Ok(Real::Exact(Ratio::new(a, b)));
        }
        if let Ok(n) = s.parse::<i64>() {
            return Ok(Real::from(n));
        }
        let x: f64 = s.parse().map_err(|_| bad())?;
        if !x.is_finite() {
            return Err(bad());
        }
        Ok(Real::Approx(x))
    }
}

/// Generalized Dehn-filling coefficient of one cusp.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DehnCoefficient {
    Infinity,
    Finite {
        p: Real,
        q: Real,
        /// The ratio `p/q` is declared irrational.
        irrational: bool,
    },
}

impl DehnCoefficient {
    pub fn new(p: impl Into<Real>, q: impl Into<Real>) -> Self {
        DehnCoefficient::Finite {
            p: p.into(),
            q: q.into(),
            irrational: false,
        }
    }

    pub fn irrational(p: f64, q: f64) -> Self {
        DehnCoefficient::Finite {
            p: Real::Approx(p),
            q: Real::Approx(q),
            irrational: true,
        }
    }
}

impl fmt::Display for DehnCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DehnCoefficient::Infinity => write!(f, "inf"),
            DehnCoefficient::Finite { p, q, irrational } => {
                write!(f, "({p}, {q})")?;
                if *irrational {
                    write!(f, " irrational")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum FillingType {
    Complete,
    ManifoldFilling { r: i64, s: i64 },
    ConeFilling { r: i64, s: i64, cone_angle: f64 },
    DehnTypeSingular,
}

impl FillingType {
    /// Angle around the filled curve: `0` for a cusp, `2π` for a manifold
    /// filling, none for a Dehn-type singularity.
    pub fn cone_angle(&self) -> Option<f64> {
        match self {
            FillingType::Complete => Some(0.0),
            FillingType::ManifoldFilling { .. } => Some(TAU),
            FillingType::ConeFilling { cone_angle, .. } => Some(*cone_angle),
            FillingType::DehnTypeSingular => None,
        }
    }
}

/// Best rational approximation `h/k` of `x` within the cutoff, if any.
fn continued_fraction(x: f64) -> Option<(i64, i64)> {
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut y = x;
    for _ in 0..64 {
        let a = y.floor();
        if a.abs() > 1e15 {
            return None;
        }
        let a = a as i128;
        (h0, h1) = (h1, a * h1 + h0);
        (k0, k1) = (k1, a * k1 + k0);
        if k1 > MAX_DENOMINATOR as i128 {
            return None;
        }
        if (x - h1 as f64 / k1 as f64).abs() <= RATIONAL_CUTOFF * x.abs().max(1.0) {
            return Some((h1 as i64, k1 as i64));
        }
        let frac = y - a as f64;
        if frac == 0.0 {
            return None;
        }
        y = 1.0 / frac;
    }
    None
}

/// The slope `p/q` as `r/s` in lowest terms with `s ≥ 0`, or `None` when the
/// slope is irrational.
fn slope(p: &Real, q: &Real) -> Option<(i64, i64)> {
    if q.is_zero() {
        return Some((1, 0));
    }
    if p.is_zero() {
        return Some((0, 1));
    }
    match (p, q) {
        (Real::Exact(a), Real::Exact(b)) => {
            let r = a / b;
            Some((*r.numer(), *r.denom()))
        }
        _ => continued_fraction(p.to_f64() / q.to_f64()),
    }
}

pub fn classify_filling(c: &DehnCoefficient) -> Result<FillingType, TraceError> {
    let (p, q, irrational) = match c {
        DehnCoefficient::Infinity => return Ok(FillingType::Complete),
        DehnCoefficient::Finite { p, q, irrational } => (p, q, *irrational),
    };
    if !p.to_f64().is_finite() || !q.to_f64().is_finite() {
        return Err(TraceError::Coefficient("components must be finite".into()));
    }
    if p.is_zero() && q.is_zero() {
        return Err(TraceError::ZeroCoefficient);
    }
    if irrational {
        if matches!((p, q), (Real::Exact(_), Real::Exact(_))) {
            return Err(TraceError::Coefficient(
                "exact rational components cannot have an irrational slope".into(),
            ));
        }
        return Ok(FillingType::DehnTypeSingular);
    }
    let Some((r, s)) = slope(p, q) else {
        return Ok(FillingType::DehnTypeSingular);
    };
    if let (Some(pi), Some(qi)) = (p.as_integer(), q.as_integer()) {
        if pi.gcd(&qi) == 1 {
            return Ok(FillingType::ManifoldFilling { r: pi, s: qi });
        }
    }
    // (p, q) = λ (r, s)
    let lambda = if r != 0 {
        p.to_f64() / r as f64
    } else {
        q.to_f64() / s as f64
    };
    Ok(FillingType::ConeFilling {
        r,
        s,
        cone_angle: TAU / lambda.abs(),
    })
}

/// Coefficients `(nᵢ/t, 0)`, or `∞` when `t = 0`.
pub fn angle_schedule(n_indices: &[u32], t: Real) -> Result<Vec<DehnCoefficient>, TraceError> {
    let tf = t.to_f64();
    if !(0.0..=1.0).contains(&tf) {
        return Err(TraceError::Schedule(tf));
    }
    if tf == 0.0 {
        return Ok(vec![DehnCoefficient::Infinity; n_indices.len()]);
    }
    Ok(n_indices
        .iter()
        .map(|&n| {
            let p = match t {
                Real::Exact(r) => Real::Exact(Ratio::from_integer(n as i64) / r),
                Real::Approx(x) => Real::Approx(n as f64 / x),
            };
            DehnCoefficient::new(p, Real::from(0))
        })
        .collect())
}
