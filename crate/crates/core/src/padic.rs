//! Unramified p-adic integrals over O_F and O_F², evaluated two ways: by shell
//! decomposition into geometric families (symbolic in u = q^{-1/2}), and by
//! counting residue classes modulo p^m at a concrete odd prime.
//!
//! Characters are formal: χ(x) = s^{v(x)}. Measures are normalized by vol(O) = 1.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ratfun::{rat_string, LaurentMono, LaurentPoly, Rat, RatFun};

fn ri(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

fn mono(nvars: usize, c: Rat, exps: Vec<i32>) -> LaurentPoly {
    debug_assert_eq!(exps.len(), nvars);
    LaurentPoly::monomial(&LaurentMono { coeff: c, exps })
}

fn poly(p: LaurentPoly) -> RatFun {
    RatFun::from_poly(p)
}

/// Σ_{k≥1} first·ratio^{k−1} in closed form.
fn family(first: LaurentPoly, ratio: LaurentMono) -> Result<RatFun> {
    let n = first.nvars();
    if ratio.is_one() {
        return Err(Error::Divergent);
    }
    RatFun::new(first, LaurentPoly::one_minus(n, ratio.coeff, ratio.exps))
}

/// Valuation of a residue modulo p^level, if it is nonzero.
fn val_mod(x: u64, p: u64, level: u32) -> Option<u32> {
    let m = p.pow(level);
    let mut x = x % m;
    if x == 0 {
        return None;
    }
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    Some(v)
}

/// An odd prime and a quadratic non-residue modulo it.
fn check_prime_and_eps(p: u64, eps: u64) -> Result<()> {
    if p < 3 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
        return Err(Error::Invalid(format!("{p} is not an odd prime")));
    }
    let e = eps % p;
    let mut r = 1u64;
    for _ in 0..(p - 1) / 2 {
        r = r * e % p;
    }
    if e == 0 || r != p - 1 {
        return Err(Error::Invalid(format!("{eps} is not a non-residue unit modulo {p}")));
    }
    Ok(())
}

/// Exhaustive counts of valuation patterns over (ℤ/p^m)^n.
#[derive(Clone, Debug, Serialize)]
pub struct ResidueCount {
    pub p: u64,
    pub level: u32,
    pub nvars: usize,
    pub counts: BTreeMap<Vec<u32>, u64>,
    /// Classes whose pattern is not determined modulo p^m.
    pub undetermined: u64,
}

impl ResidueCount {
    /// count · p^{-n·m}.
    pub fn measure(&self, pattern: &[u32]) -> Rat {
        let c = self.counts.get(pattern).copied().unwrap_or(0);
        Rat::new(BigInt::from(c), BigInt::from(self.p).pow(self.nvars as u32 * self.level))
    }
}

/// Classifier of a residue class: the valuation pattern shared by all of its lifts, if determined.
pub type Classifier<'a> = dyn Fn(&[u64], u32) -> Option<Vec<u32>> + 'a;

pub fn count_exhaustive(p: u64, level: u32, nvars: usize, classify: &Classifier) -> ResidueCount {
    let m = p.pow(level);
    let total = m.pow(nvars as u32);
    let mut counts = BTreeMap::new();
    let mut undetermined = 0;
    let mut x = vec![0u64; nvars];
    for idx in 0..total {
        let mut r = idx;
        for xi in x.iter_mut() {
            *xi = r % m;
            r /= m;
        }
        match classify(&x, level) {
            Some(pat) => *counts.entry(pat).or_insert(0) += 1,
            None => undetermined += 1,
        }
    }
    ResidueCount { p, level, nvars, counts, undetermined }
}

/// Exact measures of every pattern determined below p^max_level, by refining only the residue
/// classes whose pattern is still open. Returns the measures and the leftover measure.
pub fn cell_measures(p: u64, max_level: u32, nvars: usize, classify: &Classifier) -> (BTreeMap<Vec<u32>, Rat>, Rat) {
    let mut out: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
    let scale = BigInt::from(p).pow(nvars as u32 * max_level);
    let mut open = vec![vec![0u64; nvars]];
    let mut leftover = BigInt::zero();
    for level in 1..=max_level {
        let step = p.pow(level - 1);
        let weight = BigInt::from(p).pow(nvars as u32 * (max_level - level));
        let mut next = Vec::new();
        let children = p.pow(nvars as u32);
        for base in &open {
            for c in 0..children {
                let mut r = c;
                let x: Vec<u64> = base
                    .iter()
                    .map(|b| {
                        let d = r % p;
                        r /= p;
                        b + d * step
                    })
                    .collect();
                match classify(&x, level) {
                    Some(pat) => *out.entry(pat).or_insert_with(BigInt::zero) += &weight,
                    None if level == max_level => leftover += &weight,
                    None => next.push(x),
                }
            }
        }
        open = next;
    }
    let measures = out.into_iter().map(|(k, v)| (k, Rat::new(v, scale.clone()))).collect();
    (measures, Rat::new(leftover, scale))
}

/// Rescaled counts agree between two levels for every pattern with entries ≤ bound.
pub fn check_stabilization(lo: &ResidueCount, hi: &ResidueCount, bound: u32) -> Result<()> {
    let keys: std::collections::BTreeSet<&Vec<u32>> = lo.counts.keys().chain(hi.counts.keys()).collect();
    for k in keys {
        if k.iter().all(|&v| v <= bound) && lo.measure(k) != hi.measure(k) {
            return Err(Error::Stabilization(format!(
                "pattern {:?}: {} at level {} vs {} at level {}",
                k,
                rat_string(&lo.measure(k)),
                lo.level,
                rat_string(&hi.measure(k)),
                hi.level
            )));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Rank one

/// q∫_O (χ₁|·|^{-1/2})(1+a)(χ₂|·|^{-1/2})(a) da in the variables (s₁, s₂, u), from the cells
/// {v(a) ≥ 1}, {v(a) = 0, v(1+a) ≥ 1} and {v(a) = v(1+a) = 0}.
pub fn rank_one_integral() -> Result<RatFun> {
    let n = 3;
    let one_minus_u2 = LaurentPoly::one_minus(n, ri(1), vec![0, 0, 2]);
    // v(a) = k ≥ 1: measure (1 − q^{-1})q^{-k}, integrand s₂^k q^{k/2}.
    let a = family(&one_minus_u2 * &mono(n, ri(1), vec![0, 1, 1]), LaurentMono { coeff: ri(1), exps: vec![0, 1, 1] })?;
    // v(a) = 0, v(1+a) = k ≥ 1: same with s₁.
    let b = family(&one_minus_u2 * &mono(n, ri(1), vec![1, 0, 1]), LaurentMono { coeff: ri(1), exps: vec![1, 0, 1] })?;
    // v(a) = v(1+a) = 0: measure 1 − 2q^{-1}.
    let c = poly(LaurentPoly::one_minus(n, ri(2), vec![0, 0, 2]));
    let q = poly(mono(n, ri(1), vec![0, 0, -2]));
    Ok(&q * &(&(&a + &b) + &c))
}

/// The closed form q − 2 + (q−1)(u s₁ + u s₂ − 2u² s₁s₂)/((1 − u s₁)(1 − u s₂)).
pub fn rank_one_closed_form() -> Result<RatFun> {
    let n = 3;
    let q = mono(n, ri(1), vec![0, 0, -2]);
    let front = &q - &mono(n, ri(2), vec![0, 0, 0]);
    let qm1 = &q - &LaurentPoly::one(n);
    let num = LaurentPoly::from_terms(
        n,
        [(vec![1, 0, 1], ri(1)), (vec![0, 1, 1], ri(1)), (vec![1, 1, 2], ri(-2))],
    );
    let den = &LaurentPoly::one_minus(n, ri(1), vec![1, 0, 1]) * &LaurentPoly::one_minus(n, ri(1), vec![0, 1, 1]);
    Ok(&poly(front) + &RatFun::new(&qm1 * &num, den)?)
}

/// Shell measures of the rank-one partition checked against residue counts at a prime.
pub fn rank_one_measures_check(p: u64, level: u32) -> Result<()> {
    let classify = |x: &[u64], l: u32| -> Option<Vec<u32>> {
        let a = val_mod(x[0], p, l)?;
        let b = val_mod(x[0] + 1, p, l)?;
        Some(vec![a, b])
    };
    let rc = count_exhaustive(p, level, 1, &classify);
    let q = ri(p as i64);
    let one = Rat::one();
    for k in 0..level {
        for j in 0..level {
            let expected = match (k, j) {
                (0, 0) => (&q - ri(2)) / &q,
                (k, 0) if k > 0 => (&one - q.recip()) / q.clone().pow(k as i32),
                (0, j) => (&one - q.recip()) / q.clone().pow(j as i32),
                _ => Rat::zero(),
            };
            if rc.measure(&[k, j]) != expected {
                return Err(Error::CheckFailed(format!(
                    "rank-one cell (v(a), v(1+a)) = ({k}, {j}): {} counted vs {}",
                    rat_string(&rc.measure(&[k, j])),
                    rat_string(&expected)
                )));
            }
        }
    }
    Ok(())
}

/// The integral at a concrete odd prime, summed over residue classes modulo p^level, with a bound
/// on the omitted classes (assuming |s₁|, |s₂| ≤ 1).
pub fn rank_one_residue_sum(p: u64, level: u32, s1: f64, s2: f64) -> (f64, f64) {
    let m = p.pow(level);
    let q = p as f64;
    let mut sum = 0.0;
    for a in 0..m {
        let (Some(va), Some(vb)) = (val_mod(a, p, level), val_mod(a + 1, p, level)) else { continue };
        let f = (s1 * q.sqrt()).powi(vb as i32) * (s2 * q.sqrt()).powi(va as i32);
        sum += f / m as f64;
    }
    let r = q.sqrt().recip() * s1.abs().max(s2.abs());
    let tail = 2.0 * q * r.powi(level as i32) / (1.0 - r);
    (q * sum, tail)
}

pub fn eval_f64(f: &RatFun, values: &[f64]) -> f64 {
    let ev = |p: &LaurentPoly| -> f64 {
        p.terms()
            .map(|(e, c)| c.to_f64().unwrap_or(f64::NAN) * e.iter().zip(values).map(|(k, x)| x.powi(*k)).product::<f64>())
            .sum()
    };
    ev(f.numerator()) / ev(f.denominator())
}

// ---------------------------------------------------------------------------
// Quadratic extension, first integral

/// Number of (x, y) ∈ 𝔽_p² with x² − εy² − x = 0, and how many of them are nonzero.
pub fn conic_count(p: u64, eps: u64) -> (u64, u64) {
    let mut all = 0;
    let mut nonzero = 0;
    for x in 0..p {
        for y in 0..p {
            if (x * x + p * p - eps % p * y % p * y % p - x) % p == 0 {
                all += 1;
                if x != 0 || y != 0 {
                    nonzero += 1;
                }
            }
        }
    }
    (all, nonzero)
}

fn f61(x: &[u64], p: u64, level: u32, eps: u64) -> u64 {
    let m = p.pow(level) as u128;
    let (a, b) = (x[0] as u128 % m, x[1] as u128 % m);
    let e = eps as u128 % m;
    ((a * a + m * m - e * b % m * b % m - a) % m) as u64
}

/// Pattern [min(v(x), v(y)), v(x² − εy² − x)].
fn classify61(p: u64, eps: u64) -> impl Fn(&[u64], u32) -> Option<Vec<u32>> {
    move |x, level| {
        let a = match (val_mod(x[0], p, level), val_mod(x[1], p, level)) {
            (None, None) => return None,
            (Some(a), None) | (None, Some(a)) => a,
            (Some(a), Some(b)) => a.min(b),
        };
        let b = val_mod(f61(x, p, level, eps), p, level)?;
        Some(vec![a, b])
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct QuadReport {
    pub q: u64,
    pub eps: u64,
    pub conic_points: u64,
    pub conic_nonzero: u64,
    /// Assembled closed form, rendered in s_σ, s_η.
    pub assembled: String,
    pub closed_form: String,
    pub series_degree: i32,
    pub passed: bool,
}

/// The closed form q²(1−q^{-1})(1 − q^{-4}s_σ²s_η)/((1 − q^{-1}s_σ)(1 − q^{-2}s_σs_η)) at a concrete q.
pub fn quad61_closed_form(q: &Rat) -> Result<RatFun> {
    let n = 2;
    let qi = q.recip();
    let num = &LaurentPoly::constant(n, q * q * (Rat::one() - &qi))
        * &LaurentPoly::one_minus(n, qi.clone().pow(4), vec![2, 1]);
    let den = &LaurentPoly::one_minus(n, qi.clone(), vec![1, 0]) * &LaurentPoly::one_minus(n, qi.pow(2), vec![1, 1]);
    RatFun::new(num, den)
}

/// 1 + q²∫_{O²} σ(x² − εy² − x) η(x + y√ε) in the variables (s_σ, s_η) at q = p.
///
/// Cell measures μ(a, b) for a = min(v(x), v(y)), b = v(x² − εy² − x) come from residue counting.
/// Writing ν_a(c) = q^{2a} μ(a, a + c), the counts must show ν_a = ν_1 for 1 ≤ a < level/2 and
/// ν_a(c+1) = ν_a(c)/q for c ≥ 1; the double series is then summed in closed form.
pub fn quad_ext_integral_61(p: u64, eps: u64, level: u32) -> Result<RatFun> {
    check_prime_and_eps(p, eps)?;
    let classify = classify61(p, eps);
    let (mu, _) = cell_measures(p, level, 2, &classify);
    let q = ri(p as i64);
    let q2 = &q * &q;
    let get = |a: u32, b: u32| mu.get(&vec![a, b]).cloned().unwrap_or_else(Rat::zero);
    let nu = |a: u32, c: u32| get(a, a + c) * q2.clone().pow(a as i32);
    for a in 0..level {
        for b in 0..a.min(level) {
            if !get(a, b).is_zero() {
                return Err(Error::CheckFailed(format!("cell ({a}, {b}) below the diagonal has positive measure")));
            }
        }
    }
    let span = level / 2;
    for a in 0..=span {
        for c in 1..level.saturating_sub(a + 1) {
            if nu(a, c + 1) * &q != nu(a, c) {
                return Err(Error::CheckFailed(format!("ν_{a} is not geometric at c = {c}")));
            }
        }
        if a >= 2 {
            for c in 0..level.saturating_sub(a) {
                if nu(a, c) != nu(1, c) {
                    return Err(Error::CheckFailed(format!("ν_{a}({c}) differs from ν_1({c})")));
                }
            }
        }
    }
    let n = 2;
    // J_a(s_σ) = ν_a(0) + ν_a(1)s_σ/(1 − s_σ/q)
    let j = |a: u32| -> Result<RatFun> {
        let tail = family(mono(n, nu(a, 1), vec![1, 0]), LaurentMono { coeff: q.recip(), exps: vec![1, 0] })?;
        Ok(&RatFun::constant(n, nu(a, 0)) + &tail)
    };
    let deeper = family(mono(n, q2.recip(), vec![1, 1]), LaurentMono { coeff: q2.recip(), exps: vec![1, 1] })?;
    let inner = &j(0)? + &(&j(1)? * &deeper);
    Ok(&RatFun::one(n) + &(&RatFun::constant(n, q2) * &inner))
}

/// Series coefficients of 1 + q²Σ μ(a, b) s_σ^b s_η^a directly from residue counts.
pub fn quad61_counted_series(p: u64, eps: u64, degree: u32) -> Result<BTreeMap<Vec<i32>, Rat>> {
    check_prime_and_eps(p, eps)?;
    let classify = classify61(p, eps);
    let (mu, _) = cell_measures(p, degree + 1, 2, &classify);
    let q2 = ri((p * p) as i64);
    let mut out = BTreeMap::new();
    out.insert(vec![0, 0], Rat::one());
    for (pat, m) in mu {
        let (a, b) = (pat[0] as i32, pat[1] as i32);
        if a + b <= degree as i32 {
            *out.entry(vec![b, a]).or_insert_with(Rat::zero) += &q2 * m;
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// Full check of the first quadratic-extension identity at one prime.
pub fn quad61_check(p: u64, eps: u64) -> Result<QuadReport> {
    check_prime_and_eps(p, eps)?;
    let classify = classify61(p, eps);
    let lo = count_exhaustive(p, 3, 2, &classify);
    let hi = count_exhaustive(p, 4, 2, &classify);
    check_stabilization(&lo, &hi, 2)?;
    let (mu, _) = cell_measures(p, 4, 2, &classify);
    for (k, v) in &mu {
        if hi.measure(k) != *v {
            return Err(Error::CheckFailed(format!("refined and exhaustive counts differ at {k:?}")));
        }
    }
    let (all, nonzero) = conic_count(p, eps);
    let q = ri(p as i64);
    let assembled = quad_ext_integral_61(p, eps, 7)?;
    let closed = quad61_closed_form(&q)?;
    let degree = 6;
    let counted = quad61_counted_series(p, eps, degree as u32)?;
    let passed = all == p + 1 && nonzero == p && assembled == closed && closed.series(degree)? == counted;
    Ok(QuadReport {
        q: p,
        eps,
        conic_points: all,
        conic_nonzero: nonzero,
        assembled: render2(&assembled),
        closed_form: render2(&closed),
        series_degree: degree,
        passed,
    })
}

fn render2(f: &RatFun) -> String {
    format!("({}) / ({})", f.numerator().render(&["sσ", "sη"]), f.denominator().render(&["sσ", "sη"]))
}

// ---------------------------------------------------------------------------
// Quadratic extension, second integral

/// Pattern [k, min(v(x), 2k)] with k = min(v(x), v(y)).
fn classify62(p: u64) -> impl Fn(&[u64], u32) -> Option<Vec<u32>> {
    move |x, level| {
        let vx = val_mod(x[0], p, level);
        let k = match (vx, val_mod(x[1], p, level)) {
            (None, None) => return None,
            (Some(a), None) | (None, Some(a)) => a,
            (Some(a), Some(b)) => a.min(b),
        };
        let c = match vx {
            Some(v) => v.min(2 * k),
            None if level >= 2 * k => 2 * k,
            None => return None,
        };
        Some(vec![k, c])
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Quad62Report {
    pub q: u64,
    pub eps: u64,
    /// Cell values over ϖ^k X as polynomials in s_η.
    pub cells: Vec<String>,
    pub total: String,
    pub passed: bool,
}

/// φ₀ weight at a point with v(2x/(x² − εy²)) = c − 2k.
fn phi0_weight(val: i64, q: &Rat) -> Rat {
    match val {
        v if v >= 0 => Rat::one(),
        -1 => -(q - Rat::one()).recip(),
        _ => Rat::zero(),
    }
}

/// Cell values ∫_{ϖ^k X} η(x + √ε y)|x² − εy²|^{-1}φ₀(2x/(x² − εy²)) for k < cells, in s_η.
pub fn quad_ext_integral_62_cells(p: u64, eps: u64, cells: u32) -> Result<Vec<LaurentPoly>> {
    check_prime_and_eps(p, eps)?;
    let classify = classify62(p);
    let level = 2 * cells;
    let (mu, _) = cell_measures(p, level, 2, &classify);
    let q = ri(p as i64);
    let mut out = Vec::new();
    for k in 0..cells {
        // On ϖ^k X the norm has valuation 2k, so |N|^{-1} = q^{2k} and η = s_η^k.
        let mut c = Rat::zero();
        for (pat, m) in &mu {
            if pat[0] == k {
                c += m * phi0_weight(pat[1] as i64 - 2 * k as i64, &q) * q.clone().pow(2 * k as i32);
            }
        }
        out.push(mono(1, c, vec![k as i32]));
    }
    Ok(out)
}

pub fn quad62_check(p: u64, eps: u64) -> Result<Quad62Report> {
    let cells = quad_ext_integral_62_cells(p, eps, 4)?;
    let q = ri(p as i64);
    let q2 = &q * &q;
    let expected = [
        mono(1, (&q2 - Rat::one()) / &q2, vec![0]),
        mono(1, -q2.recip(), vec![1]),
        LaurentPoly::zero(1),
        LaurentPoly::zero(1),
    ];
    let sum = cells.iter().fold(LaurentPoly::zero(1), |acc, c| &acc + c);
    let total = &LaurentPoly::one(1) + &(&LaurentPoly::constant(1, q2.clone()) * &sum);
    let closed = &LaurentPoly::constant(1, q2.clone()) * &LaurentPoly::one_minus(1, q2.recip(), vec![1]);
    let passed = cells.iter().zip(&expected).all(|(a, b)| a == b) && total == closed;
    Ok(Quad62Report {
        q: p,
        eps,
        cells: cells.iter().map(|c| c.render(&["sη"])).collect(),
        total: total.render(&["sη"]),
        passed,
    })
}

// ---------------------------------------------------------------------------
// φ₀ and the Type-(U,ψ) integral

#[derive(Clone, Debug, Serialize)]
pub struct PhiRow {
    pub valuation: i32,
    pub expected: f64,
    pub max_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PhiReport {
    pub q: u64,
    pub rows: Vec<PhiRow>,
    pub passed: bool,
}

pub const PHI_TOLERANCE: f64 = 1e-9;

/// φ₀(x) = vol(O^×)^{-1}∫_{O^×}ψ(xy)dy for x = r·p^{-m}, as a normalized character sum over
/// the units modulo p^m with ψ(a/p^m) = e^{2πi a/p^m}.
pub fn phi0_numeric(p: u64, m: u32, r: u64) -> f64 {
    let modulus = p.pow(m.max(1));
    let vol_units = 1.0 - 1.0 / p as f64;
    let mut s = Complex64::new(0.0, 0.0);
    for y in 1..modulus {
        if y % p == 0 {
            continue;
        }
        let a = if m == 0 { 0 } else { (r * y) % modulus };
        s += Complex64::from_polar(1.0, 2.0 * PI * a as f64 / modulus as f64);
    }
    (s / modulus as f64 / vol_units).re
}

/// Checks φ₀ = 1 on O, −1/(q−1) on ϖ^{-1}O^×, 0 on ϖ^{-m}O^× for m ≥ 2.
pub fn phi_fourier_check(p: u64, m_max: u32) -> Result<PhiReport> {
    check_prime_and_eps(p, if p == 3 { 2 } else { non_residue(p) })?;
    let mut rows = Vec::new();
    for m in 0..=m_max {
        let expected = match m {
            0 => 1.0,
            1 => -1.0 / (p as f64 - 1.0),
            _ => 0.0,
        };
        let modulus = p.pow(m.max(1));
        let mut err = 0.0f64;
        for r in (1..modulus).filter(|r| r % p != 0) {
            err = err.max((phi0_numeric(p, m, r) - expected).abs());
        }
        rows.push(PhiRow { valuation: -(m as i32), expected, max_error: err });
    }
    Ok(PhiReport { q: p, passed: rows.iter().all(|r| r.max_error < PHI_TOLERANCE), rows })
}

/// Smallest quadratic non-residue modulo an odd prime.
pub fn non_residue(p: u64) -> u64 {
    (2..p).find(|&e| check_prime_and_eps(p, e).is_ok()).unwrap_or(0)
}

/// 1 + q∫_O t^{v(a)}|a|^{-1}φ₀(a^{-1}) da in the variables (t, u), from the shells v(a) = k.
/// Shells with k ≥ 2 lie outside the support of φ₀(a^{-1}).
pub fn i_alpha_upsi_integral() -> RatFun {
    let n = 2;
    // k = 0: measure 1 − q^{-1}, weight 1.
    let k0 = LaurentPoly::one_minus(n, ri(1), vec![0, 2]);
    // k = 1: measure q^{-1}(1 − q^{-1}), integrand t·q, weight −1/(q − 1) = −q^{-1}/(1 − q^{-1}).
    let k1 = mono(n, ri(-1), vec![1, 2]);
    let q = mono(n, ri(1), vec![0, -2]);
    RatFun::from_poly(&LaurentPoly::one(n) + &(&q * &(&k0 + &k1)))
}

/// The same integral at a concrete prime, using numeric φ₀ values over the shells 0 ≤ k ≤ depth.
pub fn i_alpha_upsi_numeric(p: u64, t: f64, depth: u32) -> f64 {
    let q = p as f64;
    let mut s = 0.0;
    for k in 0..=depth {
        let measure = q.powi(-(k as i32)) * (1.0 - 1.0 / q);
        s += measure * t.powi(k as i32) * q.powi(k as i32) * phi0_numeric(p, k, 1);
    }
    1.0 + q * s
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

fn check(name: &str, r: Result<(bool, String)>) -> Check {
    match r {
        Ok((ok, detail)) => Check { name: name.into(), ok, detail },
        Err(e) => Check { name: name.into(), ok: false, detail: e.to_string() },
    }
}

/// Every p-adic identity, at q ∈ {3, 5}.
pub fn run_all() -> Vec<Check> {
    let mut out = Vec::new();
    out.push(check(
        "rank-one integral",
        (|| {
            let ok = rank_one_integral()? == rank_one_closed_form()?;
            rank_one_measures_check(3, 4)?;
            rank_one_measures_check(5, 3)?;
            let u = 1.0 / 3f64.sqrt();
            let closed = eval_f64(&rank_one_closed_form()?, &[1.0, 0.5, u]);
            let (sum, tail) = rank_one_residue_sum(3, 12, 1.0, 0.5);
            let num_ok = (sum - closed).abs() <= tail;
            Ok((ok && num_ok, format!("closed form {closed:.12}, residue sum {sum:.12} (tail ≤ {tail:.2e})")))
        })(),
    ));
    for p in [3u64, 5] {
        let eps = non_residue(p);
        out.push(check(
            &format!("quadratic integral 1 (q = {p})"),
            quad61_check(p, eps).map(|r| (r.passed, format!("conic {} points, {} nonzero", r.conic_points, r.conic_nonzero))),
        ));
        out.push(check(
            &format!("quadratic integral 2 (q = {p})"),
            quad62_check(p, eps).map(|r| (r.passed, format!("cells {:?}, total {}", r.cells, r.total))),
        ));
        out.push(check(
            &format!("φ₀ Fourier (q = {p})"),
            phi_fourier_check(p, 3).map(|r| {
                let worst = r.rows.iter().map(|x| x.max_error).fold(0.0, f64::max);
                (r.passed, format!("max error {worst:.1e}"))
            }),
        ));
    }
    out.push(check(
        "Type-(U,ψ) I_α",
        (|| {
            let f = i_alpha_upsi_integral();
            let closed = RatFun::from_poly(LaurentPoly::from_terms(2, [(vec![0, -2], ri(1)), (vec![1, 0], ri(-1))]));
            let num = i_alpha_upsi_numeric(3, 0.7, 6);
            let num_ok = (num - (3.0 - 0.7)).abs() < PHI_TOLERANCE;
            Ok((f == closed && num_ok, format!("numeric at q = 3, t = 0.7: {num:.12}")))
        })(),
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::rat;

    #[test]
    fn rank_one_matches_closed_form() {
        assert_eq!(rank_one_integral().unwrap(), rank_one_closed_form().unwrap());
        // s₁ = s₂ = 0 leaves q − 2.
        let f = rank_one_integral().unwrap();
        assert_eq!(f.eval(&[Rat::zero(), Rat::zero(), rat(1, 3)]).unwrap(), ri(7));
    }

    #[test]
    fn rank_one_cells_and_residue_sum() {
        rank_one_measures_check(3, 4).unwrap();
        let closed = eval_f64(&rank_one_closed_form().unwrap(), &[1.0, 0.5, 1.0 / 3f64.sqrt()]);
        let (sum, tail) = rank_one_residue_sum(3, 12, 1.0, 0.5);
        assert!((sum - closed).abs() <= tail, "{sum} vs {closed} (tail {tail})");
    }

    #[test]
    fn conic() {
        assert_eq!(conic_count(3, 2), (4, 3));
        assert_eq!(conic_count(5, 2), (6, 5));
        assert_eq!(conic_count(7, 3), (8, 7));
    }

    #[test]
    fn quad61_at_three() {
        let r = quad61_check(3, 2).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn quad62_cells() {
        let r = quad62_check(3, 2).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn phi0_values() {
        assert!((phi0_numeric(3, 0, 1) - 1.0).abs() < PHI_TOLERANCE);
        assert!((phi0_numeric(3, 1, 2) + 0.5).abs() < PHI_TOLERANCE);
        assert!(phi0_numeric(5, 2, 7).abs() < PHI_TOLERANCE);
    }

    #[test]
    fn i_alpha_special_values() {
        let f = i_alpha_upsi_integral();
        let u = rat(1, 2);
        assert_eq!(f.eval(&[Rat::zero(), u.clone()]).unwrap(), ri(4));
        assert_eq!(f.eval(&[ri(4), u]).unwrap(), Rat::zero());
    }

    #[test]
    fn non_residues() {
        assert_eq!(non_residue(3), 2);
        assert_eq!(non_residue(5), 2);
        assert_eq!(non_residue(7), 3);
        assert!(check_prime_and_eps(5, 4).is_err());
        assert!(check_prime_and_eps(9, 2).is_err());
    }
}
