//! Closed-form bound calculators and the exact small-n check of the
//! uniform-to-biased measure transfer.
//!
//! Every constant the bounds leave unspecified (`c`, `c0`, `c1`, `C`, `delta`)
//! is a mandatory argument and is echoed in the report's `free_constants`.
//! Logarithms are natural.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};
use serde::Serialize;

use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::family::measure::{measure_from_level_counts, upset_level_counts, DEFAULT_MEASURE_CAP};
use crate::family::SetFamily;

/// How a reported number may be relied upon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Computed exactly.
    Exact,
    /// A proven bound, evaluated exactly or with a safe rounding direction.
    CertifiedBound,
    /// Best value found by a search that did not close.
    NonExhaustive,
    /// A literature constant quoted for comparison.
    ReferenceConstant,
    /// A formula evaluated with caller-chosen free constants.
    Formula,
}

impl Provenance {
    pub fn tag(self) -> &'static str {
        match self {
            Provenance::Exact => "exact",
            Provenance::CertifiedBound => "certified-bound",
            Provenance::NonExhaustive => "non-exhaustive",
            Provenance::ReferenceConstant => "reference-constant",
            Provenance::Formula => "formula",
        }
    }
}

/// A named bound value with its inputs and free constants.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub name: String,
    pub inputs: BTreeMap<String, f64>,
    pub free_constants: BTreeMap<String, f64>,
    pub value: f64,
    pub exact_value: Option<BigRational>,
    /// Named intermediate quantities (factors, exponents, selected parameters).
    pub components: BTreeMap<String, f64>,
    pub provenance: Provenance,
}

impl BoundReport {
    pub fn new(name: &str, provenance: Provenance, value: f64) -> Self {
        BoundReport {
            name: name.to_string(),
            inputs: BTreeMap::new(),
            free_constants: BTreeMap::new(),
            value,
            exact_value: None,
            components: BTreeMap::new(),
            provenance,
        }
    }

    pub fn input(mut self, key: &str, v: f64) -> Self {
        self.inputs.insert(key.to_string(), v);
        self
    }

    pub fn constant(mut self, key: &str, v: f64) -> Self {
        self.free_constants.insert(key.to_string(), v);
        self
    }

    pub fn component(mut self, key: &str, v: f64) -> Self {
        self.components.insert(key.to_string(), v);
        self
    }

    pub fn exact(mut self, v: BigRational) -> Self {
        self.exact_value = Some(v);
        self
    }
}

pub fn ln_binomial(n: u64, k: u64) -> f64 {
    let b = binomial(n, k);
    match b.to_f64() {
        Some(v) if v.is_finite() => v.ln(),
        _ => {
            // fall back to the bit length for astronomically large values
            let bits = b.bits();
            let shift = bits.saturating_sub(64);
            let top = (&b >> shift).to_f64().unwrap();
            top.ln() + shift as f64 * std::f64::consts::LN_2
        }
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be a positive real, got {v}")))
    }
}

/// `exp(-c(n-2k) log n / (k(log n - log k))) · C(n,k)`.
pub fn thm_main_bound(n: u64, k: u64, c: f64) -> Result<BoundReport> {
    check_positive("c", c)?;
    if k < 2 || 2 * k > n {
        return Err(Error::invalid(format!("need 2 <= k <= n/2, got n = {n}, k = {k}")));
    }
    let (nf, kf) = (n as f64, k as f64);
    let exponent = -c * (nf - 2.0 * kf) * nf.ln() / (kf * (nf.ln() - kf.ln()));
    let factor = exponent.exp();
    let value = (exponent + ln_binomial(n, k)).exp();
    let mut rep = BoundReport::new("symmetric-intersecting-upper", Provenance::Formula, value)
        .input("n", nf)
        .input("k", kf)
        .constant("c", c)
        .component("factor", factor)
        .component("exponent", exponent);
    if 2 * k == n {
        rep = rep.exact(BigRational::from_integer(binomial(n, k).into()));
    }
    Ok(rep)
}

/// Smallest bias for which the upset measure controls the uniform density:
/// `k/n + sqrt(2n log(1/φ))/n`.
pub fn friedgut_p(n: u64, k: u64, phi: f64) -> f64 {
    let nf = n as f64;
    k as f64 / nf + (2.0 * nf * (1.0 / phi).ln()).sqrt() / nf
}

/// Sharp-threshold target bias `min{1, p + c0·p·log(1/p)·log(1/ε)/log n}`.
pub fn fk_threshold_q(p: f64, eps: f64, c0: f64, n: u64) -> f64 {
    let shift = c0 * p * (1.0 / p).ln() * (1.0 / eps).ln() / (n as f64).ln();
    (p + shift).min(1.0)
}

/// `sqrt(2 + 4/(3π))`, the covering constant for difference covers of intervals.
pub fn redei_renyi_constant() -> f64 {
    (2.0 + 4.0 / (3.0 * std::f64::consts::PI)).sqrt()
}

/// `n / ((n - 2k) log n)`; `+∞` when `k = n/2`.
pub fn regime_ratio(n: u64, k: u64) -> f64 {
    let gap = n as f64 - 2.0 * k as f64;
    if gap == 0.0 {
        f64::INFINITY
    } else {
        n as f64 / (gap * (n as f64).ln())
    }
}

/// Regime ratio with the large-`k` upper bound `exp(-δ(n-2k)log n/n)·C(n,k)`
/// for a caller-supplied `δ`.
pub fn regime_report(n: u64, k: u64, delta: Option<f64>) -> Result<BoundReport> {
    if 2 * k > n {
        return Err(Error::invalid("regime ratio needs k <= n/2"));
    }
    let ratio = regime_ratio(n, k);
    let mut rep = BoundReport::new("regime-ratio", Provenance::Exact, ratio)
        .input("n", n as f64)
        .input("k", k as f64)
        .component("redei-renyi", redei_renyi_constant());
    if let Some(d) = delta {
        check_positive("delta", d)?;
        let nf = n as f64;
        let exponent = -d * (nf - 2.0 * k as f64) * nf.ln() / nf;
        rep = rep
            .constant("delta", d)
            .component("large-k-upper", (exponent + ln_binomial(n, k)).exp())
            .component("large-k-factor", exponent.exp());
    }
    Ok(rep)
}

/// `c1·exp(-C(n-2k) log n / n)·C(n,k)`, the lower bound on the run family for
/// `k/n` bounded away from zero.
pub fn run_family_lower_formula(n: u64, k: u64, c1: f64, big_c: f64) -> Result<BoundReport> {
    check_positive("c1", c1)?;
    check_positive("C", big_c)?;
    if 2 * k > n || k == 0 {
        return Err(Error::invalid("need 1 <= k <= n/2"));
    }
    let nf = n as f64;
    let exponent = -big_c * (nf - 2.0 * k as f64) * nf.ln() / nf;
    Ok(
        BoundReport::new("run-family-lower", Provenance::Formula, c1 * (exponent + ln_binomial(n, k)).exp())
            .input("n", nf)
            .input("k", k as f64)
            .constant("c1", c1)
            .constant("C", big_c)
            .component("factor", exponent.exp()),
    )
}

/// `exp(-((log(n-k) - log k)/(log n - log(n-k))) log n)`: the growth factor in
/// the general run-family lower bound, without its constant.
pub fn run_family_exponent_factor(n: u64, k: u64) -> f64 {
    let (nf, kf) = (n as f64, k as f64);
    let ratio = ((nf - kf).ln() - kf.ln()) / (nf.ln() - (nf - kf).ln());
    (-ratio * nf.ln()).exp()
}

/// One line of the upper-bound argument, for auditing.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceStep {
    pub label: String,
    pub value: f64,
}

/// Intermediate quantities of the upper-bound argument for a family of density
/// `density` in `[n]^(k)`: the bias `p`, the threshold bias `q`, the
/// inequality forced by intersecting upsets, and the implied density bound.
pub fn main_bound_trace(n: u64, k: u64, c0: f64, density: f64) -> Result<Vec<TraceStep>> {
    check_positive("c0", c0)?;
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::invalid("density must lie in (0, 1]"));
    }
    let nf = n as f64;
    let p = friedgut_p(n, k, 0.5);
    let q = fk_threshold_q(p, density / 2.0, c0, n);
    let lhs = p + c0 * p * (1.0 / p).ln() * (2.0 / density).ln() / nf.ln();
    let delta_bound = 2.0 * (-(1.0 - 2.0 * p) * nf.ln() / (2.0 * c0 * p * (1.0 / p).ln())).exp();
    let step = |label: &str, value: f64| TraceStep {
        label: label.to_string(),
        value,
    };
    Ok(vec![
        step("p = k/n + sqrt(2 log 2 n)/n", p),
        step("q = min{1, p + c0 p log(1/p) log(2/delta)/log n}", q),
        step("p + c0 p log(1/p) log(2/delta)/log n", lhs),
        step("exceeds 1/2 (1 = yes)", if lhs > 0.5 { 1.0 } else { 0.0 }),
        step("density bound 2 exp(-(1-2p) log n/(2 c0 p log(1/p)))", delta_bound),
        step("density", density),
    ])
}

/// Exact check of `μ_p(F↑) > (1-φ)|F|/C(n,k)` at `p = friedgut_p(n,k,φ)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Lemma22Outcome {
    /// The bias would exceed 1; the inequality has no content.
    Inapplicable { p: f64 },
    Checked(Lemma22Check),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lemma22Check {
    /// Dyadic bias (denominator `2^64`) at or above the real-valued bias.
    pub p: BigRational,
    pub measure: BigRational,
    /// `(1-φ)·|F|/C(n,k)`.
    pub rhs: BigRational,
    /// `P(Bin(n,p) >= k)`.
    pub binomial_tail: BigRational,
    pub holds: bool,
}

impl Lemma22Outcome {
    pub fn holds(&self) -> Option<bool> {
        match self {
            Lemma22Outcome::Inapplicable { .. } => None,
            Lemma22Outcome::Checked(c) => Some(c.holds),
        }
    }
}

/// Rounds `x >= 0` up to a multiple of `2^-64`, after nudging it one ulp up to
/// absorb the rounding error of its own evaluation.
pub fn dyadic_ceil(x: f64) -> BigRational {
    let up = x.next_up();
    let exact = BigRational::from_f64(up).expect("finite");
    let scale = BigRational::from_integer(BigInt::one() << 64);
    let scaled = (exact * &scale).ceil();
    scaled / scale
}

pub fn verify_lemma22(f: &SetFamily, phi: &BigRational) -> Result<Lemma22Outcome> {
    let zero = BigRational::zero();
    let one = BigRational::one();
    if phi <= &zero || phi >= &one {
        return Err(Error::invalid("phi must lie strictly between 0 and 1"));
    }
    let n = f.n() as u64;
    let k = match f.k() {
        Some(k) => k as u64,
        None if f.is_empty() => return Err(Error::invalid("empty family without uniformity")),
        None => return Err(Error::invalid("lemma check needs a uniform family")),
    };
    let p_real = friedgut_p(n, k, phi.to_f64().unwrap());
    if p_real > 1.0 {
        return Ok(Lemma22Outcome::Inapplicable { p: p_real });
    }
    let p = dyadic_ceil(p_real).min(one.clone());
    let counts = upset_level_counts(f, DEFAULT_MEASURE_CAP)?;
    let measure = measure_from_level_counts(&counts, &p);
    let density = BigRational::new(BigInt::from(f.len()), binomial(n, k).into());
    let rhs = (&one - phi) * &density;

    let q = &one - &p;
    let mut tail = BigRational::zero();
    for l in k..=n {
        tail += num_traits::pow(p.clone(), l as usize)
            * num_traits::pow(q.clone(), (n - l) as usize)
            * BigRational::from_integer(binomial(n, l).into());
    }
    let holds = measure > rhs;
    Ok(Lemma22Outcome::Checked(Lemma22Check {
        p,
        measure,
        rhs,
        binomial_tail: tail,
        holds,
    }))
}
