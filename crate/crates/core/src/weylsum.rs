//! Sums over the Weyl group.
//!
//! Points θ of the dual torus are stored through the model's chart as exact
//! rationals τ_v together with u = q^{-1/2}. Everything here is exact.
//!
//! Two evaluation routes are kept separate on purpose:
//! - [`weyl_sum_direct`] enumerates W and adds c_WS(wθ) term by term;
//! - [`weyl_sum`] uses the Weyl denominator formula, accumulating the
//!   antisymmetrized numerator as a big integer over a tree walk of W.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{
    coset_representatives, dot, enumerate_weyl, pair, pair4, reflect_raw, solve_rational, RootDatum, RootType, Weight, WeylElement,
    WeylWalk,
};
use crate::models::{Chart, Model, ThetaPlus};
use crate::ratfun::{pow_rat, rat_string, LaurentPoly, Rat, RatFun};

/// Largest Weyl group for which the symbolic routes are attempted.
pub const SYMBOLIC_LIMIT: u64 = 384;
/// Largest Weyl group enumerated element by element.
pub const DIRECT_LIMIT: usize = 50_000;
/// Resampling budget when a point hits a pole.
pub const RESAMPLE_LIMIT: usize = 50;

const SPLIT_DEPTH: usize = 4;

fn ri(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// k-th root of a rational, when it is rational.
pub fn root_rat(x: &Rat, k: u32) -> Option<Rat> {
    if k == 1 {
        return Some(x.clone());
    }
    let neg = x.is_negative();
    if neg && k % 2 == 0 {
        return None;
    }
    let root = |n: &BigInt| -> Option<BigInt> {
        let r = n.abs().nth_root(k);
        (num_traits::pow(r.clone(), k as usize) == n.abs()).then_some(r)
    };
    let n = root(x.numer())?;
    let d = root(x.denom())?;
    let r = Rat::new(n, d);
    Some(if neg { -r } else { r })
}

/// Center exponents and the pivot variable solved from e^z = 1.
fn pivot(model: &Model) -> Result<Option<(usize, Vec<i32>)>> {
    let Some(z) = model.center() else { return Ok(None) };
    let ze = model.spec.chart.exps(z);
    let p = (0..ze.len())
        .rev()
        .find(|&v| ze[v].abs() == 1)
        .ok_or_else(|| Error::ModelData(format!("{}: central character has no unit exponent", model.name())))?;
    Ok(Some((p, ze)))
}

/// A point θ of the dual torus and u = q^{-1/2}.
#[derive(Clone, Debug, PartialEq)]
pub struct SatakePoint {
    pub tau: Vec<Rat>,
    pub u: Rat,
}

impl SatakePoint {
    pub fn new(model: &Model, tau: Vec<Rat>, u: Rat) -> Result<Self> {
        let n = model.spec.chart.nvars();
        if tau.len() != n {
            return Err(Error::DimensionMismatch(tau.len(), n));
        }
        if let Some(v) = tau.iter().position(|t| t.is_zero()) {
            return Err(Error::ZeroAssignment(v));
        }
        if u.is_zero() {
            return Err(Error::ZeroAssignment(n));
        }
        let p = SatakePoint { tau, u };
        if let Some(z) = model.center() {
            let v = p.value(&model.spec.chart, z);
            if !v.is_one() {
                return Err(Error::Constraint(format!("e^z = {} at the point", rat_string(&v))));
            }
        }
        Ok(p)
    }

    /// Random point with τ = (±a/b)^power, 1 ≤ a, b ≤ 7, solved for the central constraint.
    pub fn random<R: Rng>(model: &Model, rng: &mut R, power: u32) -> Result<Self> {
        let n = model.spec.chart.nvars();
        let mut small = || -> Rat {
            let a = rng.gen_range(1..=7i64);
            let b = rng.gen_range(1..=7i64);
            let s = if power % 2 == 1 && rng.gen_bool(0.5) { -1 } else { 1 };
            pow_rat(&Rat::new(BigInt::from(s * a), BigInt::from(b)), power as i32)
        };
        let mut tau: Vec<Rat> = (0..n).map(|_| small()).collect();
        let u = loop {
            let u = small();
            if u.abs() != Rat::one() {
                break root_rat(&u, power).unwrap_or(u);
            }
        };
        if let Some((p, ze)) = pivot(model)? {
            let mut prod = Rat::one();
            for v in 0..n {
                if v != p && ze[v] != 0 {
                    prod *= pow_rat(&tau[v], -ze[v]);
                }
            }
            tau[p] = pow_rat(&prod, ze[p]);
        }
        SatakePoint::new(model, tau, u)
    }

    /// The point with e^γ(θ) = q^{⟨ρ,γ⟩} for every weight γ.
    pub fn delta_half(model: &Model, q: &Rat) -> Result<Self> {
        let chart = &model.spec.chart;
        let n = chart.nvars();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        let mut gens: Vec<Weight> = model.theta().to_vec();
        if let Some(z) = model.center() {
            gens.push(Weight::doubled(z));
        }
        for g in &gens {
            rows.push(chart.exps(&g.coords).into_iter().map(|e| ri(e as i64)).collect::<Vec<_>>());
            let r = pair(&model.datum.rho, g)?;
            rhs.push(Rat::new(BigInt::from(*r.numer()), BigInt::from(*r.denom())));
        }
        let x = solve_rational(rows, rhs)
            .ok_or_else(|| Error::ModelData(format!("{}: no δ^{{1/2}} point", model.name())))?;
        let qpow = |e: &Rat| -> Result<Rat> {
            let k = e.denom().to_u32().ok_or_else(|| Error::Invalid("exponent denominator".into()))?;
            let r = root_rat(q, k).ok_or_else(|| Error::Invalid(format!("q^(1/{k}) is irrational")))?;
            Ok(pow_rat(&r, e.numer().to_i32().unwrap_or(0)))
        };
        let tau = x.iter().map(qpow).collect::<Result<Vec<_>>>()?;
        let u = qpow(&Rat::new(BigInt::from(-1), BigInt::from(2)))?;
        debug_assert_eq!(tau.len(), n);
        SatakePoint::new(model, tau, u)
    }

    pub fn q(&self) -> Rat {
        (&self.u * &self.u).recip()
    }

    /// Value of each model coordinate: τ_{lift[i]}, or 1.
    pub fn coordinate_values(&self, chart: &Chart) -> Vec<Rat> {
        chart.lift.iter().map(|v| v.map_or_else(Rat::one, |v| self.tau[v].clone())).collect()
    }

    /// e^c(θ) for a doubled coordinate vector c.
    pub fn value(&self, chart: &Chart, c: &[i32]) -> Rat {
        let e = chart.exps(c);
        let mut out = Rat::one();
        for (t, k) in self.tau.iter().zip(e) {
            if k != 0 {
                out *= pow_rat(t, k);
            }
        }
        out
    }

    /// The inverse character θ^{-1}.
    pub fn inverse(&self) -> Self {
        SatakePoint { tau: self.tau.iter().map(|t| t.recip()).collect(), u: self.u.clone() }
    }

    /// The point wθ, defined by e^c(wθ) = e^{w^{-1}c}(θ). Needs rational roots of τ
    /// when w^{-1} has fractional entries.
    pub fn transform(&self, model: &Model, w: &WeylElement) -> Result<Self> {
        let chart = &model.spec.chart;
        let winv = w.inverse();
        let d = model.dim();
        let mut tau = Vec::with_capacity(chart.nvars());
        for b in variable_lifts(chart, d)? {
            let y: Vec<i32> = (0..d)
                .map(|i| (0..d).map(|j| (winv.entry(i, j) * 4).to_integer() as i32 * b[j]).sum())
                .collect();
            let k = [4, 2].into_iter().find(|k| y.iter().all(|c| c % k == 0)).unwrap_or(1);
            let y: Vec<i32> = y.iter().map(|c| c / k).collect();
            let x = self.value(chart, &y);
            let r = (4 / k) as u32;
            let t = root_rat(&x, r).ok_or_else(|| {
                Error::Invalid(format!("transformed point needs a root of degree {r} of {}", rat_string(&x)))
            })?;
            tau.push(t);
        }
        SatakePoint::new(model, tau, self.u.clone())
    }

    pub fn tau_strings(&self) -> Vec<String> {
        self.tau.iter().map(rat_string).collect()
    }
}

/// For each chart variable v, a doubled vector b_v orthogonal to the domain vectors with
/// exps(b_v) = unit_v.
fn variable_lifts(chart: &Chart, dim: usize) -> Result<Vec<Vec<i32>>> {
    let free: Vec<usize> = (0..dim).filter(|&i| chart.lift[i].is_none()).collect();
    let mut out = Vec::new();
    for v in 0..chart.nvars() {
        let i = chart
            .lift
            .iter()
            .position(|l| *l == Some(v))
            .ok_or_else(|| Error::ModelData(format!("chart variable {v} has no coordinate")))?;
        let mut b = vec![0i32; dim];
        b[i] = 1;
        if !chart.domain.is_empty() {
            let a: Vec<Vec<Rat>> =
                chart.domain.iter().map(|dv| free.iter().map(|&j| ri(dv[j] as i64)).collect()).collect();
            let r: Vec<Rat> = chart.domain.iter().map(|dv| ri(-(dv[i] as i64))).collect();
            let x = solve_rational(a, r).ok_or_else(|| Error::ModelData("chart domain is inconsistent".into()))?;
            for (k, &j) in free.iter().enumerate() {
                if !x[k].is_integer() {
                    return Err(Error::ModelData("chart variable lift is not integral".into()));
                }
                b[j] = x[k].to_integer().to_i32().unwrap_or(0);
            }
        }
        out.push(b);
    }
    Ok(out)
}

fn one_minus(point: &SatakePoint, chart: &Chart, degree: u8, c: &[i32]) -> Rat {
    Rat::one() - pow_rat(&point.u, degree as i32) * point.value(chart, c)
}

/// c_WS(wθ) = Π_{γ∈Θ⁺}(1 − u^{deg γ} e^{w^{-1}γ}(θ)) / Π_{α∨∈Φ⁺}(1 − e^{w^{-1}α∨}(θ)).
pub fn c_ws(model: &Model, w: &WeylElement, point: &SatakePoint) -> Result<Rat> {
    let plus = model.theta_plus()?;
    c_ws_with(model, &plus.elements, w, point)
}

fn c_ws_with(model: &Model, plus: &[Weight], w: &WeylElement, point: &SatakePoint) -> Result<Rat> {
    let chart = &model.spec.chart;
    let winv = w.inverse();
    let mut den = Rat::one();
    for a in &model.datum.positive_coroots {
        den *= one_minus(point, chart, 0, &winv.apply(a)?.coords);
    }
    if den.is_zero() {
        return Err(Error::Pole("Weyl denominator vanishes".into()));
    }
    let mut num = Rat::one();
    for g in plus {
        num *= one_minus(point, chart, g.degree, &winv.apply(g)?.coords);
    }
    Ok(num / den)
}

/// Σ_{w∈W} c_WS(wθ) by enumerating W.
pub fn weyl_sum_direct(model: &Model, point: &SatakePoint) -> Result<Rat> {
    let plus = model.theta_plus()?;
    let group = enumerate_weyl(&model.datum, DIRECT_LIMIT)?;
    let mut total = Rat::zero();
    for w in &group.elements {
        total += c_ws_with(model, &plus.elements, w, point)?;
    }
    Ok(total)
}

/// Powers of the numerator and denominator of one coordinate value.
struct PowTable {
    a: Vec<BigInt>,
    b: Vec<BigInt>,
}

impl PowTable {
    fn new(x: &Rat, m: usize) -> Self {
        let mut a = vec![BigInt::one()];
        let mut b = vec![BigInt::one()];
        for k in 1..=2 * m {
            a.push(&a[k - 1] * x.numer());
            b.push(&b[k - 1] * x.denom());
        }
        PowTable { a, b }
    }
}

/// Integer scaling of a point: for |c_i| ≤ m_i, a_i^{m_i+c_i} b_i^{m_i−c_i} is an integer.
struct Scaled {
    m: Vec<i32>,
    tables: Vec<PowTable>,
    small: Option<Vec<(Vec<i128>, Vec<i128>)>>,
}

impl Scaled {
    fn new(values: &[Rat], m: Vec<i32>, try_small: bool) -> Self {
        let tables: Vec<PowTable> = values.iter().zip(&m).map(|(x, &mi)| PowTable::new(x, mi as usize)).collect();
        let small = try_small
            .then(|| {
                tables
                    .iter()
                    .map(|t| {
                        let a = t.a.iter().map(|x| x.to_i128()).collect::<Option<Vec<_>>>()?;
                        let b = t.b.iter().map(|x| x.to_i128()).collect::<Option<Vec<_>>>()?;
                        Some((a, b))
                    })
                    .collect::<Option<Vec<_>>>()
            })
            .flatten();
        Scaled { m, tables, small }
    }

    fn mono_big(&self, c: &[i32]) -> BigInt {
        let mut out = BigInt::one();
        for ((t, &ci), &mi) in self.tables.iter().zip(c).zip(&self.m) {
            let (i, j) = ((mi + ci) as usize, (mi - ci) as usize);
            if !t.a[i].is_one() {
                out *= &t.a[i];
            }
            if !t.b[j].is_one() {
                out *= &t.b[j];
            }
        }
        out
    }

    fn mono_small(&self, c: &[i32]) -> i128 {
        let small = self.small.as_ref().expect("small tables");
        let mut out = 1i128;
        for (((a, b), &ci), &mi) in small.iter().zip(c).zip(&self.m) {
            out *= a[(mi + ci) as usize] * b[(mi - ci) as usize];
        }
        out
    }

    fn scale(&self) -> BigInt {
        let zero = vec![0; self.tables.len()];
        self.mono_big(&zero)
    }

    /// Bound on |scaled monomial| over all admissible c.
    fn bound(&self) -> BigInt {
        let mut b = BigInt::one();
        for (t, &mi) in self.tables.iter().zip(&self.m) {
            let k = 2 * mi as usize;
            b *= t.a[k].abs().max(t.b[k].clone());
        }
        b
    }
}

/// max_{w∈W} |(w v)_i| for every coordinate i, from pairings of dominant representatives.
fn orbit_coordinate_bounds(datum: &RootDatum, v: &[i32]) -> Vec<i32> {
    let dim = datum.dim;
    let scale: i64 = 4;
    let vs: Vec<i32> = v.iter().map(|x| x * scale as i32).collect();
    let (_, dv) = to_dominant(datum, &vs);
    (0..dim)
        .map(|i| {
            let mut best = 0i64;
            for s in [scale as i32, -(scale as i32)] {
                let mut e = vec![0; dim];
                e[i] = s;
                let (_, de) = to_dominant(datum, &e);
                best = best.max(dot(&dv, &de));
            }
            ((best + scale * scale - 1) / (scale * scale)) as i32
        })
        .collect()
}

/// Σ_{w∈W} e^{wλ} Π_γ(1 − u^{deg γ} e^{wγ}) / Π_{α∨∈Φ⁺}(1 − e^{wα∨}) at a point, computed as
/// e^{ρ∨} Σ_w sgn(w) e^{w(λ−ρ∨)} Π_γ(1 − u^{deg γ}e^{wγ}) / Π_{α∨∈Φ⁺}(1 − e^{α∨}).
pub fn weyl_sum_general(
    datum: &RootDatum,
    chart: &Chart,
    weights: &[Weight],
    lambda: &[i32],
    point: &SatakePoint,
) -> Result<Rat> {
    let dim = datum.dim;
    let values = point.coordinate_values(chart);
    let mut den = Rat::one();
    for a in &datum.positive_coroots {
        den *= one_minus(point, chart, 0, &a.coords);
    }
    if den.is_zero() {
        return Err(Error::Pole("Weyl denominator vanishes".into()));
    }
    let shifted: Vec<i32> = lambda.iter().zip(&datum.rho_vee.coords).map(|(l, r)| l - r).collect();
    let mr = orbit_coordinate_bounds(datum, &shifted);
    let mut mw = vec![0; dim];
    for g in weights {
        for (m, b) in mw.iter_mut().zip(orbit_coordinate_bounds(datum, &g.coords)) {
            *m = (*m).max(b);
        }
    }

    let rho_part = Scaled::new(&values, mr, false);
    let weight_part = Scaled::new(&values, mw, true);
    let un: Vec<BigInt> = (0..=2).map(|d| num_traits::pow(point.u.numer().clone(), d)).collect();
    let ud: Vec<BigInt> = (0..=2).map(|d| num_traits::pow(point.u.denom().clone(), d)).collect();
    let base = weight_part.scale();
    let lead: Vec<BigInt> = ud.iter().map(|x| x * &base).collect();
    let bound = weight_part.bound() * (un[2].abs() + ud[2].abs());
    let small = weight_part.small.is_some() && bound.bits() < 125;
    let lead_small: Vec<i128> = if small { lead.iter().map(|x| x.to_i128().unwrap()).collect() } else { vec![] };
    let un_small: Vec<i128> = if small { un.iter().map(|x| x.to_i128().unwrap()).collect() } else { vec![] };
    let degrees: Vec<usize> = weights.iter().map(|g| g.degree as usize).collect();

    let mut tracked = vec![shifted];
    tracked.extend(weights.iter().map(|g| g.coords.clone()));
    let walk = WeylWalk::new(datum);
    let sum = walk.par_fold(
        &tracked,
        SPLIT_DEPTH,
        BigInt::zero,
        |acc, sign, img| {
            let mut prod = rho_part.mono_big(&img[..dim]);
            for (k, &d) in degrees.iter().enumerate() {
                let c = &img[(k + 1) * dim..(k + 2) * dim];
                if small {
                    let f = lead_small[d] - un_small[d] * weight_part.mono_small(c);
                    if f == 0 {
                        return;
                    }
                    prod *= f;
                } else {
                    let f = &lead[d] - &un[d] * weight_part.mono_big(c);
                    if f.is_zero() {
                        return;
                    }
                    prod *= f;
                }
            }
            if sign > 0 {
                *acc += prod;
            } else {
                *acc -= prod;
            }
        },
        |a, b| a + b,
    );

    let mut scale = rho_part.scale();
    for &d in &degrees {
        scale *= &lead[d];
    }
    let rho = point.value(chart, &datum.rho_vee.coords);
    Ok(rho * Rat::new(sum, scale) / den)
}

/// Σ_{w∈W} c_WS(wθ) by the Weyl denominator formula.
pub fn weyl_sum(model: &Model, point: &SatakePoint) -> Result<Rat> {
    let plus = model.theta_plus()?;
    let zero = vec![0; model.dim()];
    weyl_sum_general(&model.datum, &model.spec.chart, &plus.elements, &zero, point)
}

/// Calls `f` on random points until it returns something other than a pole.
pub fn with_resampling<R: Rng, T>(
    model: &Model,
    rng: &mut R,
    power: u32,
    mut f: impl FnMut(&SatakePoint) -> Result<T>,
) -> Result<(SatakePoint, T)> {
    let mut last = None;
    for _ in 0..RESAMPLE_LIMIT {
        let p = SatakePoint::random(model, rng, power)?;
        match f(&p) {
            Ok(v) => return Ok((p, v)),
            Err(Error::Pole(m)) => last = Some(m),
            Err(e) => return Err(e),
        }
    }
    Err(Error::Pole(format!(
        "no pole-free point after {RESAMPLE_LIMIT} samples ({})",
        last.unwrap_or_default()
    )))
}

#[derive(Clone, Debug, Serialize)]
pub struct PointCheck {
    pub tau: Vec<String>,
    pub u: String,
    pub value: String,
    pub expected: String,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstantReport {
    pub model: String,
    pub weyl_order: u64,
    pub expected: String,
    pub points: Vec<PointCheck>,
    pub passed: bool,
}

/// Compares Σ_w c_WS(wθ) with the model constant at the given points.
pub fn weyl_sum_constant(model: &Model, points: &[SatakePoint]) -> Result<ConstantReport> {
    let expected_poly = model.expected_constant();
    let mut checks = Vec::new();
    for p in points {
        let value = weyl_sum(model, p)?;
        let expected = expected_poly.eval(std::slice::from_ref(&p.u))?;
        checks.push(PointCheck {
            tau: p.tau_strings(),
            u: rat_string(&p.u),
            ok: value == expected,
            value: rat_string(&value),
            expected: rat_string(&expected),
        });
    }
    Ok(ConstantReport {
        model: model.name().to_string(),
        weyl_order: model.weyl_order_formula(),
        expected: expected_poly.render(&["u"]),
        passed: !checks.is_empty() && checks.iter().all(|c| c.ok),
        points: checks,
    })
}

/// Draws `n` points at which the Weyl sum has no pole and runs [`weyl_sum_constant`].
pub fn weyl_sum_constant_sampled<R: Rng>(model: &Model, n: usize, rng: &mut R) -> Result<ConstantReport> {
    let mut points = Vec::new();
    for _ in 0..n {
        let (p, _) = with_resampling(model, rng, 1, |p| weyl_denominator(model, p))?;
        points.push(p);
    }
    weyl_sum_constant(model, &points)
}

fn weyl_denominator(model: &Model, p: &SatakePoint) -> Result<Rat> {
    let mut den = Rat::one();
    for a in &model.datum.positive_coroots {
        den *= one_minus(p, &model.spec.chart, 0, &a.coords);
    }
    if den.is_zero() {
        return Err(Error::Pole("Weyl denominator vanishes".into()));
    }
    Ok(den)
}

/// Symbolic exponents: chart variables with the pivot eliminated, then u.
struct SymbolicChart<'a> {
    chart: &'a Chart,
    pivot: Option<(usize, Vec<i32>)>,
}

impl SymbolicChart<'_> {
    fn nvars(&self) -> usize {
        self.chart.nvars() + 1
    }

    fn exps(&self, c: &[i32], upow: i32) -> Vec<i32> {
        let mut e = self.chart.exps(c);
        if let Some((p, ze)) = &self.pivot {
            let t = e[*p] * ze[*p];
            for (x, z) in e.iter_mut().zip(ze) {
                *x -= t * z;
            }
        }
        e.push(upow);
        e
    }
}

/// Expands Π_γ(1 − u^{deg γ} e^γ) in coordinate space, keyed by (coords, u-power).
fn expand_product(weights: &[Weight], dim: usize) -> HashMap<(Vec<i32>, i32), BigInt> {
    let mut acc: HashMap<(Vec<i32>, i32), BigInt> = HashMap::new();
    acc.insert((vec![0; dim], 0), BigInt::one());
    for g in weights {
        let mut next = acc.clone();
        for ((c, k), v) in &acc {
            let c2: Vec<i32> = c.iter().zip(&g.coords).map(|(a, b)| a + b).collect();
            let e = next.entry((c2, k + g.degree as i32)).or_insert_with(BigInt::zero);
            *e -= v;
        }
        next.retain(|_, v| !v.is_zero());
        acc = next;
    }
    acc
}

/// Σ_{w∈W} e^{wλ} Π_{γ∈Θ⁺}(1 − u^{deg}e^{wγ}) / Π_{Φ⁺}(1 − e^{wα∨}) as a Laurent polynomial in
/// the chart variables and u (last), by antisymmetrizing and dividing out the Weyl denominator.
pub fn antisymmetrized_sum(model: &Model, lambda: &[i32]) -> Result<LaurentPoly> {
    let order = model.weyl_order_formula();
    if order > SYMBOLIC_LIMIT {
        return Err(Error::Invalid(format!(
            "{}: |W| = {order} exceeds the symbolic limit {SYMBOLIC_LIMIT}",
            model.name()
        )));
    }
    let plus = model.theta_plus()?;
    let dim = model.dim();
    let sc = SymbolicChart { chart: &model.spec.chart, pivot: pivot(model)? };
    let product = expand_product(&plus.elements, dim);
    let rho = &model.datum.rho_vee.coords;
    let shifted: Vec<i32> = lambda.iter().zip(rho).map(|(l, r)| l - r).collect();
    let group = enumerate_weyl(&model.datum, order as usize)?;

    let mut acc: HashMap<Vec<i32>, BigInt> = HashMap::new();
    for w in &group.elements {
        let ws = w.apply_raw(&shifted).ok_or_else(|| Error::NonIntegral("λ − ρ∨".into()))?;
        for ((c, k), v) in &product {
            let wc = w.apply_raw(c).ok_or_else(|| Error::NonIntegral("Θ⁺ monomial".into()))?;
            let mono: Vec<i32> = (0..dim).map(|i| rho[i] + ws[i] + wc[i]).collect();
            let e = acc.entry(sc.exps(&mono, *k)).or_insert_with(BigInt::zero);
            if w.sign() > 0 {
                *e += v;
            } else {
                *e -= v;
            }
        }
    }
    let mut poly = LaurentPoly::from_terms(
        sc.nvars(),
        acc.into_iter().filter(|(_, v)| !v.is_zero()).map(|(e, v)| (e, Rat::from_integer(v))),
    );
    for a in &model.datum.positive_coroots {
        poly = poly.div_one_minus(&sc.exps(&a.coords, 0))?;
    }
    Ok(poly)
}

/// Σ_w c_WS(wθ) as an exact function; fails unless every θ-dependence cancels and the result
/// equals the model constant.
pub fn weyl_sum_symbolic(model: &Model) -> Result<RatFun> {
    let zero = vec![0; model.dim()];
    let poly = antisymmetrized_sum(model, &zero)?;
    let uvar = poly.nvars() - 1;
    if !poly.depends_only_on(&[uvar]) {
        let names: Vec<String> = model.spec.chart.names.iter().cloned().chain(["u".to_string()]).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        return Err(Error::CheckFailed(format!(
            "{}: residual θ-dependence in {}",
            model.name(),
            poly.render(&refs)
        )));
    }
    let in_u = LaurentPoly::from_terms(1, poly.terms().map(|(e, c)| (vec![e[uvar]], c.clone())));
    let expected = model.expected_constant();
    if in_u != expected {
        return Err(Error::CheckFailed(format!(
            "{}: symbolic sum {} differs from {}",
            model.name(),
            in_u.render(&["u"]),
            expected.render(&["u"])
        )));
    }
    Ok(RatFun::from_poly(in_u))
}

fn simple_indices(model: &Model, names: &[String]) -> Result<Vec<usize>> {
    names
        .iter()
        .map(|n| {
            model
                .datum
                .simple_index(n)
                .ok_or_else(|| Error::ModelData(format!("{}: no simple root {n}", model.name())))
        })
        .collect()
}

/// Θ₁⁺ with the degrees taken from Θ⁺, and Θ₂⁺ = Θ⁺ ∖ Θ₁⁺.
fn split_theta(model: &Model, plus: &ThetaPlus, theta1: &[Weight]) -> Result<(Vec<Weight>, Vec<Weight>)> {
    let mut first = Vec::new();
    for g in theta1 {
        let h = plus
            .elements
            .iter()
            .find(|h| h.same_vector(g))
            .ok_or_else(|| Error::ModelData(format!("{}: {} is not in Θ⁺", model.name(), g)))?;
        first.push(h.clone());
    }
    let second = plus.elements.iter().filter(|h| !first.iter().any(|g| g.same_vector(h))).cloned().collect();
    Ok((first, second))
}

fn sub_datum(model: &Model, levi: &[usize]) -> Result<RootDatum> {
    RootDatum::new(
        model.dim(),
        levi.iter()
            .map(|&j| {
                let s = &model.datum.simple[j];
                (s.name.clone(), s.root.clone(), s.kind)
            })
            .collect(),
    )
}

#[derive(Clone, Debug, Serialize)]
pub struct CosetPoint {
    pub tau: Vec<String>,
    pub u: String,
    pub coset_sum: String,
    pub subgroup_sum: String,
    pub expected: String,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CosetReport {
    pub model: String,
    pub reduction: String,
    pub cosets: usize,
    pub subgroup_order: u64,
    pub points: Vec<CosetPoint>,
    pub passed: bool,
}

/// Coset sum over W/W' of Π_{Θ₁⁺}(1 − u^{deg}e^{wγ}) / Π_{Φ⁺∖Φ'⁺}(1 − e^{wα∨}), which must be 1,
/// together with Σ_{W'} of the complementary ratio, which must be the model constant.
pub fn coset_reduction_check(model: &Model, reduction: &str, points: &[SatakePoint]) -> Result<CosetReport> {
    let red = model.reduction(reduction)?.clone();
    let levi = simple_indices(model, &red.levi)?;
    let plus = model.theta_plus()?;
    let (theta1, theta2) = split_theta(model, &plus, &red.theta1)?;
    let sub = sub_datum(model, &levi)?;
    let phi1: Vec<Weight> = model
        .datum
        .positive_coroots
        .iter()
        .filter(|a| !sub.positive_coroots.iter().any(|b| b.same_vector(a)))
        .cloned()
        .collect();
    let reps = coset_representatives(&model.datum, &levi)?;
    let chart = &model.spec.chart;
    let sub_order = WeylWalk::new(&sub).count();
    let expected_poly = model.expected_constant();
    let zero = vec![0; model.dim()];

    let mut out = Vec::new();
    for p in points {
        let mut coset = Rat::zero();
        for w in &reps {
            let mut num = Rat::one();
            for g in &theta1 {
                num *= one_minus(p, chart, g.degree, &w.apply(g)?.coords);
            }
            let mut den = Rat::one();
            for a in &phi1 {
                den *= one_minus(p, chart, 0, &w.apply(a)?.coords);
            }
            if den.is_zero() {
                return Err(Error::Pole("coset denominator vanishes".into()));
            }
            coset += num / den;
        }
        let subsum = weyl_sum_general(&sub, chart, &theta2, &zero, p)?;
        let expected = expected_poly.eval(std::slice::from_ref(&p.u))?;
        out.push(CosetPoint {
            tau: p.tau_strings(),
            u: rat_string(&p.u),
            ok: coset.is_one() && subsum == expected,
            coset_sum: rat_string(&coset),
            subgroup_sum: rat_string(&subsum),
            expected: rat_string(&expected),
        });
    }
    Ok(CosetReport {
        model: model.name().to_string(),
        reduction: red.name,
        cosets: reps.len(),
        subgroup_order: sub_order,
        passed: !out.is_empty() && out.iter().all(|c| c.ok),
        points: out,
    })
}

/// Pole-free random points for a coset reduction.
pub fn coset_points<R: Rng>(model: &Model, reduction: &str, n: usize, rng: &mut R) -> Result<Vec<SatakePoint>> {
    let mut pts = Vec::new();
    for _ in 0..n {
        let (p, _) = with_resampling(model, rng, 1, |p| {
            let r = coset_reduction_check(model, reduction, std::slice::from_ref(p));
            r.map(|_| ())
        })?;
        pts.push(p);
    }
    Ok(pts)
}

#[derive(Clone, Debug, Serialize)]
pub struct Elimination {
    pub exponent: String,
    pub root: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Survivor {
    pub dominant: String,
    pub coefficient: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum PowerVerdict {
    Vanishes,
    /// Only the class of ρ∨ survives: a multiple of the Weyl denominator.
    Denominator,
    Survives,
}

#[derive(Clone, Debug, Serialize)]
pub struct AntisymPower {
    pub power: i32,
    pub monomials: usize,
    pub eliminations: Vec<Elimination>,
    pub survivors: Vec<Survivor>,
    pub verdict: PowerVerdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct AntisymReport {
    pub model: String,
    pub reduction: String,
    pub full_expansion: bool,
    pub powers: Vec<AntisymPower>,
    /// Σ_k c_k u^k / c_0 over the powers whose survivors are the ρ∨ class.
    pub quotient: String,
    pub passed: bool,
}

/// Sign and dominant representative of the W-orbit of a regular vector.
fn to_dominant(datum: &RootDatum, b: &[i32]) -> (i8, Vec<i32>) {
    let mut v = b.to_vec();
    let mut sign = 1i8;
    loop {
        let Some(j) = datum.simple.iter().position(|s| dot(&v, &s.root.coords) < 0) else { break };
        let s = &datum.simple[j];
        v = reflect_raw(&s.root.coords, &s.coroot.coords, &v).expect("reflection of an integral vector");
        sign = -sign;
    }
    (sign, v)
}

/// Structural (W, sgn)-antisymmetrization of e^{−ρ∨} Π_{Θ₁⁺}(1 − u^{deg}e^γ), optionally times
/// Π_{α∈Φ'⁺}(1 − e^{α∨}) for the reduction's Levi W'. Monomials fixed by a reflection are
/// eliminated with the root recorded; the rest are moved to the dominant chamber and grouped.
pub fn antisym_vanish_check(model: &Model, reduction: &str, full: bool) -> Result<AntisymReport> {
    let red = model.reduction(reduction)?.clone();
    let levi = simple_indices(model, &red.levi)?;
    let plus = model.theta_plus()?;
    let (theta1, _) = split_theta(model, &plus, &red.theta1)?;
    let dim = model.dim();
    let datum = &model.datum;

    let mut factors = theta1.clone();
    if full {
        let sub = sub_datum(model, &levi)?;
        let terms = (WeylWalk::new(&sub).count() as f64) * 2f64.powi(theta1.len() as i32);
        if terms > 2e6 {
            return Err(Error::Invalid(format!("{}: full expansion has ~{terms:.0} terms", red.name)));
        }
        factors.extend(sub.positive_coroots.iter().map(|a| a.clone().with_degree(0)));
    }
    let product = expand_product(&factors, dim);
    let rho = &datum.rho_vee.coords;
    let roots = datum.positive_roots.clone();

    let mut by_power: BTreeMap<i32, (usize, Vec<Elimination>, BTreeMap<Vec<i32>, BigInt>)> = BTreeMap::new();
    for ((c, k), v) in &product {
        let b: Vec<i32> = (0..dim).map(|i| c[i] - rho[i]).collect();
        let entry = by_power.entry(*k).or_insert_with(|| (0, Vec::new(), BTreeMap::new()));
        entry.0 += 1;
        if let Some(a) = roots.iter().find(|a| dot(&b, &a.coords) == 0) {
            entry.1.push(Elimination { exponent: Weight::doubled(&b).to_string(), root: a.to_string() });
            continue;
        }
        let (s, dom) = to_dominant(datum, &b);
        let e = entry.2.entry(dom).or_insert_with(BigInt::zero);
        if s > 0 {
            *e += v;
        } else {
            *e -= v;
        }
    }

    let mut powers = Vec::new();
    let mut quotient: BTreeMap<i32, BigInt> = BTreeMap::new();
    for (k, (monomials, eliminations, groups)) in by_power {
        let survivors: Vec<(Vec<i32>, BigInt)> = groups.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let verdict = if survivors.is_empty() {
            PowerVerdict::Vanishes
        } else if survivors.len() == 1 && survivors[0].0 == *rho {
            quotient.insert(k, survivors[0].1.clone());
            PowerVerdict::Denominator
        } else {
            PowerVerdict::Survives
        };
        powers.push(AntisymPower {
            power: k,
            monomials,
            eliminations,
            survivors: survivors
                .iter()
                .map(|(d, c)| Survivor { dominant: Weight::doubled(d).to_string(), coefficient: c.to_string() })
                .collect(),
            verdict,
        });
    }
    let c0 = quotient.get(&0).cloned();
    let quotient_poly = match &c0 {
        Some(c0) => LaurentPoly::from_terms(1, quotient.iter().map(|(k, c)| (vec![*k], Rat::new(c.clone(), c0.clone()))))
            .render(&["u"]),
        None => "undefined".into(),
    };
    let passed = c0.is_some() && powers.iter().all(|p| p.verdict != PowerVerdict::Survives);
    Ok(AntisymReport {
        model: model.name().to_string(),
        reduction: red.name,
        full_expansion: full,
        powers,
        quotient: quotient_poly,
        passed,
    })
}

/// I_α(θ) without its scalar prefactor: (1 − u^{2deg α}e^{α∨}) over the color factors for
/// Type-T roots, and (1 − u^{2deg α}e^{α∨}) alone for Type-(U,ψ) roots.
fn i_alpha(model: &Model, j: usize, p: &SatakePoint, w: Option<&WeylElement>) -> Result<Rat> {
    let chart = &model.spec.chart;
    let at = |c: &Weight| -> Result<Vec<i32>> { Ok(match w { Some(w) => w.apply(c)?.coords, None => c.coords.clone() }) };
    let s = &model.datum.simple[j];
    let num = one_minus(p, chart, 2 * s.coroot.degree, &at(&s.coroot)?);
    if s.kind == RootType::UPsi {
        return Ok(num);
    }
    let mut den = Rat::one();
    for b in &model.colors[j] {
        den *= one_minus(p, chart, b.degree, &at(b)?);
    }
    if den.is_zero() {
        return Err(Error::Pole(format!("I_{} has a pole", s.name)));
    }
    Ok(num / den)
}

/// β(θ) = Π_{Φ⁺}(1 − u^{2deg}e^{α∨}) / Π_{Θ⁺}(1 − u^{deg}e^γ), optionally at w^{-1}θ.
fn beta(model: &Model, plus: &[Weight], p: &SatakePoint, w: Option<&WeylElement>) -> Result<Rat> {
    let chart = &model.spec.chart;
    let at = |c: &Weight| -> Result<Vec<i32>> { Ok(match w { Some(w) => w.apply(c)?.coords, None => c.coords.clone() }) };
    let mut num = Rat::one();
    for a in &model.datum.positive_coroots {
        num *= one_minus(p, chart, 2 * a.degree, &at(a)?);
    }
    let mut den = Rat::one();
    for g in plus {
        den *= one_minus(p, chart, g.degree, &at(g)?);
    }
    if den.is_zero() {
        return Err(Error::Pole("β has a pole".into()));
    }
    Ok(num / den)
}

#[derive(Clone, Debug, Serialize)]
pub struct BRatioCheck {
    pub root: String,
    pub lhs: String,
    pub rhs: String,
    pub ok: bool,
}

/// I_α(w_αθ)/I_α(θ) against β(w_αθ)/β(θ) for the simple root with index `j`.
pub fn b_ratio_consistency(model: &Model, j: usize, p: &SatakePoint) -> Result<BRatioCheck> {
    let plus = model.theta_plus()?;
    let s = model.datum.simple_reflection(j);
    let i0 = i_alpha(model, j, p, None)?;
    let i1 = i_alpha(model, j, p, Some(&s))?;
    let b0 = beta(model, &plus.elements, p, None)?;
    let b1 = beta(model, &plus.elements, p, Some(&s))?;
    if i0.is_zero() || b0.is_zero() {
        return Err(Error::Pole("vanishing I_α or β".into()));
    }
    let lhs = i1 / i0;
    let rhs = b1 / b0;
    Ok(BRatioCheck { root: model.datum.simple[j].name.clone(), ok: lhs == rhs, lhs: rat_string(&lhs), rhs: rat_string(&rhs) })
}

fn motive_value(model: &Model, u: &Rat) -> Result<Rat> {
    let mut out = Rat::one();
    for f in model.delta_ratio()? {
        let inv = f.inverse_poly().eval(std::slice::from_ref(u))?;
        if inv.is_zero() {
            return Err(Error::Pole(format!("{f} at u = {}", rat_string(u))));
        }
        out /= inv;
    }
    let [a, b] = model.spec.torus;
    let u2 = u * u;
    out *= pow_rat(&(Rat::one() - &u2), a as i32) * pow_rat(&(Rat::one() - &u2 * &u2), b as i32);
    Ok(out)
}

/// The pieces of the relative character at a point.
#[derive(Clone, Debug, Serialize)]
pub struct RelcharFactors {
    /// Δ_G(1)/Δ_{H₀/Z}(1) times the torus factor of L(1, Ad)^{-1}.
    pub delta: String,
    pub l_half: String,
    pub l_ad: String,
    /// Assembly from β(θ)β(θ^{-1}).
    pub from_beta: String,
    /// Assembly from Δ·L(½, π, ρ_X)/L(1, π, Ad).
    pub from_l_values: String,
}

fn relchar_parts(model: &Model, p: &SatakePoint) -> Result<[Rat; 5]> {
    let plus = model.theta_plus()?;
    let chart = &model.spec.chart;
    let front = motive_value(model, &p.u)?;
    let mut l_half_inv = Rat::one();
    for g in model.theta() {
        l_half_inv *= one_minus(p, chart, g.degree, &g.coords);
    }
    if l_half_inv.is_zero() {
        return Err(Error::Pole("L(1/2, π, ρ_X) has a pole".into()));
    }
    let mut l_ad_inv = Rat::one();
    for a in &model.datum.positive_coroots {
        l_ad_inv *= one_minus(p, chart, 2 * a.degree, &a.coords);
        l_ad_inv *= one_minus(p, chart, 2 * a.degree, &a.neg().coords);
    }
    if l_ad_inv.is_zero() {
        return Err(Error::Pole("L(1, π, Ad) vanishes".into()));
    }
    let b = &front * &l_ad_inv / &l_half_inv;
    let a = &front * beta(model, &plus.elements, p, None)? * beta(model, &plus.elements, &p.inverse(), None)?;
    Ok([front, l_half_inv.recip(), l_ad_inv.recip(), a, b])
}

/// The two assemblies of the relative character: from β(θ)β(θ^{-1}), and from
/// L(½, π, ρ_X)/L(1, π, Ad) built over all of Θ and Φ.
pub fn relchar_assemblies(model: &Model, p: &SatakePoint) -> Result<(Rat, Rat)> {
    let [_, _, _, a, b] = relchar_parts(model, p)?;
    Ok((a, b))
}

/// Both assemblies together with the Δ, L(½) and L(1, Ad) values they are built from.
pub fn relchar_factors(model: &Model, p: &SatakePoint) -> Result<RelcharFactors> {
    let [d, h, a, x, y] = relchar_parts(model, p)?;
    Ok(RelcharFactors {
        delta: rat_string(&d),
        l_half: rat_string(&h),
        l_ad: rat_string(&a),
        from_beta: rat_string(&x),
        from_l_values: rat_string(&y),
    })
}

/// The relative character value, after checking that both assemblies agree.
pub fn relchar(model: &Model, p: &SatakePoint) -> Result<Rat> {
    let (a, b) = relchar_assemblies(model, p)?;
    if a != b {
        return Err(Error::CheckFailed(format!(
            "{}: assemblies differ: {} vs {}",
            model.name(),
            rat_string(&a),
            rat_string(&b)
        )));
    }
    Ok(a)
}

/// Fails unless λ is a dominant coweight in the chart domain with ⟨ρ, λ⟩ half-integral.
pub fn check_admissible_coweight(model: &Model, lambda: &Weight) -> Result<()> {
    check_coweight(model, lambda).map(|_| ())
}

fn check_coweight(model: &Model, lambda: &Weight) -> Result<Rat> {
    if lambda.dim() != model.dim() {
        return Err(Error::DimensionMismatch(lambda.dim(), model.dim()));
    }
    if !model.spec.chart.in_domain(&lambda.coords) {
        return Err(Error::Invalid(format!("{lambda} is outside the chart domain")));
    }
    for s in &model.datum.simple {
        if pair4(lambda, &s.root)? < 0 {
            return Err(Error::Invalid(format!("{lambda} is not dominant for {}", s.name)));
        }
    }
    // δ^{1/2}(t^{-1}) = q^{⟨ρ,λ⟩} = u^{-2⟨ρ,λ⟩}.
    let r = pair(&model.datum.rho, lambda)?;
    let e = r * 2;
    if !e.is_integer() {
        return Err(Error::Invalid(format!("⟨ρ, {lambda}⟩ = {r} is not a half-integer")));
    }
    Ok(Rat::from_integer(BigInt::from(-e.to_integer())))
}

/// (wθ)^{-1}(λ(ϖ)) = e^{-λ}(wθ).
fn inverse_character(lambda: &Weight) -> Vec<i32> {
    lambda.coords.iter().map(|c| -c).collect()
}

/// Σ_w c_WS(wθ)·(wθ)^{-1}δ^{1/2}(t^{-1}) for t = λ(ϖ), λ a dominant coweight.
pub fn ws_value(model: &Model, lambda: &Weight, p: &SatakePoint) -> Result<Rat> {
    let e = check_coweight(model, lambda)?;
    let plus = model.theta_plus()?;
    let sum = weyl_sum_general(&model.datum, &model.spec.chart, &plus.elements, &inverse_character(lambda), p)?;
    Ok(sum * pow_rat(&p.u, e.to_integer().to_i32().unwrap_or(0)))
}

/// The same value from the symbolic antisymmetrized formula (|W| ≤ 384).
pub fn ws_value_symbolic(model: &Model, lambda: &Weight, p: &SatakePoint) -> Result<Rat> {
    let e = check_coweight(model, lambda)?;
    let poly = antisymmetrized_sum(model, &inverse_character(lambda))?;
    let mut values = p.tau.clone();
    values.push(p.u.clone());
    Ok(poly.eval(&values)? * pow_rat(&p.u, e.to_integer().to_i32().unwrap_or(0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::model;
    use crate::ratfun::{int, rat};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(7)
    }

    #[test]
    fn roots() {
        assert_eq!(root_rat(&rat(16, 81), 4), Some(rat(2, 3)));
        assert_eq!(root_rat(&rat(-8, 27), 3), Some(rat(-2, 3)));
        assert_eq!(root_rat(&rat(2, 1), 2), None);
        assert_eq!(root_rat(&rat(-4, 1), 2), None);
    }

    #[test]
    fn random_points_satisfy_center() {
        let mut r = rng();
        for name in ["trilinear", "GL6", "GSO8xGL2", "E7"] {
            let m = model(name).unwrap();
            for _ in 0..5 {
                SatakePoint::random(&m, &mut r, 1).unwrap();
            }
        }
    }

    #[test]
    fn fast_and_direct_sums_agree() {
        let mut r = rng();
        for name in ["trilinear", "GL4xGL2", "GU4xGU2", "GU6", "GSp6xGL2"] {
            let m = model(name).unwrap();
            let (p, direct) = with_resampling(&m, &mut r, 1, |p| weyl_sum_direct(&m, p)).unwrap();
            assert_eq!(weyl_sum(&m, &p).unwrap(), direct, "{name}");
        }
    }

    #[test]
    fn ws_value_matches_enumeration() {
        let mut r = rng();
        for (name, lam) in [("trilinear", vec![2, 0, 2, 0, 0, 0]), ("GL4xGL2", vec![2, 0, 0, 0, 2, 0]), ("GL6", vec![2, 2, 0, 0, 0, 0])] {
            let m = model(name).unwrap();
            let plus = m.theta_plus().unwrap();
            let group = enumerate_weyl(&m.datum, DIRECT_LIMIT).unwrap();
            let lambda = Weight::new(lam.clone(), 0);
            let (p, fast) = with_resampling(&m, &mut r, 4, |p| ws_value(&m, &lambda, p)).unwrap();
            let neg = Weight::new(lam.iter().map(|c| -c).collect(), 0);
            let mut direct = Rat::zero();
            for w in &group.elements {
                let moved = w.inverse().apply(&neg).unwrap();
                direct += c_ws_with(&m, &plus.elements, w, &p).unwrap() * p.value(&m.spec.chart, &moved.coords);
            }
            let e = check_coweight(&m, &lambda).unwrap();
            direct *= pow_rat(&p.u, e.to_integer().to_i32().unwrap());
            assert!(!fast.is_zero(), "{name}");
            assert_eq!(fast, direct, "{name}");
            if group.elements.len() <= 384 {
                assert_eq!(ws_value_symbolic(&m, &lambda, &p).unwrap(), direct, "{name}");
            }
        }
    }

    #[test]
    fn trilinear_delta_half_values() {
        let m = model("trilinear").unwrap();
        let p = SatakePoint::delta_half(&m, &int(16)).unwrap();
        assert_eq!(p.q(), int(16));
        let id = m.datum.identity();
        assert_eq!(c_ws(&m, &id, &p).unwrap(), Rat::zero());
        let w0 = m.datum.longest_element();
        assert_eq!(c_ws(&m, &w0, &p).unwrap(), Rat::one() - rat(1, 256));
    }

    #[test]
    fn trilinear_symbolic() {
        let m = model("trilinear").unwrap();
        let f = weyl_sum_symbolic(&m).unwrap();
        assert_eq!(f.as_constant(), None);
        assert_eq!(f.numerator(), &m.expected_constant());
    }

    #[test]
    fn transform_is_consistent() {
        let mut r = rng();
        let m = model("GSO8xGL2").unwrap();
        let p = SatakePoint::random(&m, &mut r, 4).unwrap();
        let w = m.datum.random_element(&mut r, 9);
        let q = p.transform(&m, &w).unwrap();
        let winv = w.inverse();
        for g in m.theta() {
            assert_eq!(q.value(&m.spec.chart, &g.coords), p.value(&m.spec.chart, &winv.apply(g).unwrap().coords));
        }
    }
}
