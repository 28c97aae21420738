//! Exact multivariate Laurent polynomials and rational functions over ℚ.
//!
//! Variables are indexed positionally. For torus expressions the convention is
//! τ_1..τ_n followed by u = q^{-1/2} as the last variable.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Renders a rational as "p/q" (or "p" when integral).
pub fn rat_string(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses "p/q" or "p".
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::Invalid(format!("not a rational number: `{}`", s));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// x^e for a nonzero rational or nonnegative exponent.
pub fn pow_rat(x: &Rat, e: i32) -> Rat {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentMono {
    pub coeff: Rat,
    pub exps: Vec<i32>,
}

impl LaurentMono {
    pub fn new(coeff: Rat, exps: Vec<i32>) -> Self {
        LaurentMono { coeff, exps }
    }

    /// Monomial in τ-exponents and a u-exponent (u is appended as the last variable).
    pub fn tau_u(coeff: Rat, tau_exps: &[i32], u_exp: i32) -> Self {
        let mut e = tau_exps.to_vec();
        e.push(u_exp);
        LaurentMono { coeff, exps: e }
    }

    pub fn is_one(&self) -> bool {
        self.coeff.is_one() && self.exps.iter().all(|&e| e == 0)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Vec<i32>, Rat>,
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&[]))
    }
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    pub fn monomial(m: &LaurentMono) -> Self {
        let mut p = Self::zero(m.exps.len());
        p.add_term(m.exps.clone(), m.coeff.clone());
        p
    }

    /// The single variable x_i.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(&LaurentMono::new(Rat::one(), e))
    }

    /// 1 − c·x^exps.
    pub fn one_minus(nvars: usize, coeff: Rat, exps: Vec<i32>) -> Self {
        let mut p = Self::one(nvars);
        p.add_term(exps, -coeff);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<i32>, Rat)>>(nvars: usize, it: I) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[i32]) -> Rat {
        self.terms.get(exps).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, exps: Vec<i32>, c: Rat) {
        assert_eq!(exps.len(), self.nvars, "monomial arity");
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// The constant value if the polynomial has no variable dependence.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// True if only the variables in `vars` occur.
    pub fn depends_only_on(&self, vars: &[usize]) -> bool {
        self.terms
            .keys()
            .all(|e| e.iter().enumerate().all(|(i, &x)| x == 0 || vars.contains(&i)))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        LaurentPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    /// Multiplies by the monomial x^shift.
    pub fn shift(&self, shift: &[i32]) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Componentwise minimum exponent (zero vector for the zero polynomial).
    pub fn min_exps(&self) -> Vec<i32> {
        let mut m: Option<Vec<i32>> = None;
        for e in self.terms.keys() {
            m = Some(match m {
                None => e.clone(),
                Some(v) => v.iter().zip(e).map(|(a, b)| *a.min(b)).collect(),
            });
        }
        m.unwrap_or_else(|| vec![0; self.nvars])
    }

    pub fn leading(&self) -> Option<(&Vec<i32>, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluates at exact values for every variable.
    pub fn eval(&self, values: &[Rat]) -> Result<Rat> {
        if values.len() != self.nvars {
            return Err(Error::DimensionMismatch(values.len(), self.nvars));
        }
        let mut cache: Vec<BTreeMap<i32, Rat>> = vec![BTreeMap::new(); self.nvars];
        let mut total = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if values[i].is_zero() {
                    if k < 0 {
                        return Err(Error::ZeroAssignment(i));
                    }
                    t = Rat::zero();
                    break;
                }
                let p = cache[i].entry(k).or_insert_with(|| pow_rat(&values[i], k));
                t *= &*p;
            }
            total += t;
        }
        Ok(total)
    }

    /// Substitutes exact values for some variables, keeping the others.
    pub fn partial_eval(&self, assignments: &[(usize, Rat)]) -> Result<Self> {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let mut t = c.clone();
            for (i, v) in assignments {
                let k = e[*i];
                if k != 0 {
                    if v.is_zero() && k < 0 {
                        return Err(Error::ZeroAssignment(*i));
                    }
                    t *= pow_rat(v, k);
                }
                e2[*i] = 0;
            }
            out.add_term(e2, t);
        }
        Ok(out)
    }

    /// Exact quotient by (1 − x^m). Fails if (1 − x^m) does not divide.
    pub fn div_one_minus(&self, m: &[i32]) -> Result<Self> {
        let Some(p) = m.iter().position(|&x| x != 0) else {
            return Err(Error::DivisionByZero);
        };
        let mp = m[p] as i64;
        // Group monomials into lines v + t·m, keyed by a canonical base point.
        let mut lines: BTreeMap<Vec<i32>, BTreeMap<i64, Rat>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let t = (e[p] as i64).div_euclid(mp.abs()) * mp.signum();
            let base: Vec<i32> = e.iter().zip(m).map(|(a, b)| a - (t * *b as i64) as i32).collect();
            lines.entry(base).or_default().insert(t, c.clone());
        }
        let mut out = Self::zero(self.nvars);
        for (base, coeffs) in lines {
            // f = (1 − x) g along the line: g_t = Σ_{s ≤ t} f_s, and the total must vanish.
            let total: Rat = coeffs.values().cloned().sum();
            if !total.is_zero() {
                return Err(Error::CheckFailed(format!("1 - x^{:?} does not divide", m)));
            }
            let lo = *coeffs.keys().next().unwrap();
            let hi = *coeffs.keys().next_back().unwrap();
            let mut run = Rat::zero();
            for t in lo..hi {
                if let Some(c) = coeffs.get(&t) {
                    run += c;
                }
                if !run.is_zero() {
                    let e: Vec<i32> = base.iter().zip(m).map(|(a, b)| a + (t * *b as i64) as i32).collect();
                    out.add_term(e, run.clone());
                }
            }
        }
        Ok(out)
    }

    /// Keeps only terms whose total degree in `vars` is at most `max`.
    pub fn truncate(&self, vars: &[usize], max: i32) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| vars.iter().map(|&i| e[i]).sum::<i32>() <= max)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn render(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter() {
            let mut mono = Vec::new();
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let name = names.get(i).map(|s| s.to_string()).unwrap_or_else(|| format!("x{}", i));
                mono.push(if k == 1 { name } else { format!("{}^{}", name, k) });
            }
            let cs = rat_string(c);
            parts.push(match (mono.is_empty(), cs.as_str()) {
                (true, _) => cs,
                (false, "1") => mono.join("*"),
                (false, "-1") => format!("-{}", mono.join("*")),
                _ => format!("{}*{}", cs, mono.join("*")),
            });
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&-Rat::one())
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, rhs.nvars, "polynomial arity");
        let mut acc: std::collections::HashMap<Vec<i32>, Rat> = std::collections::HashMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<i32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(Rat::zero) += c1 * c2;
            }
        }
        LaurentPoly::from_terms(self.nvars, acc)
    }
}

/// A quotient of Laurent polynomials, kept with a monic, monomial-free-shifted denominator.
#[derive(Clone)]
pub struct RatFun {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) / ({:?})", self.num, self.den)
    }
}

impl PartialEq for RatFun {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl RatFun {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut r = RatFun { num, den };
        r.normalize();
        Ok(r)
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        let n = p.nvars();
        RatFun { num: p, den: LaurentPoly::one(n) }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        Self::from_poly(LaurentPoly::constant(nvars, c))
    }

    pub fn zero(nvars: usize) -> Self {
        Self::from_poly(LaurentPoly::zero(nvars))
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(LaurentPoly::one(nvars))
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    fn normalize(&mut self) {
        let n = self.num.nvars();
        if self.num.is_zero() {
            self.den = LaurentPoly::one(n);
            return;
        }
        let shift: Vec<i32> = self.den.min_exps().iter().map(|x| -x).collect();
        if shift.iter().any(|&x| x != 0) {
            self.num = self.num.shift(&shift);
            self.den = self.den.shift(&shift);
        }
        let lc = self.den.leading().map(|(_, c)| c.clone()).unwrap();
        if !lc.is_one() {
            let inv = lc.recip();
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn inv(&self) -> Result<Self> {
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, rhs: &RatFun) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFun::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn eval(&self, values: &[Rat]) -> Result<Rat> {
        let d = self.den.eval(values)?;
        if d.is_zero() {
            return Err(Error::Pole("denominator vanishes".into()));
        }
        Ok(self.num.eval(values)? / d)
    }

    pub fn partial_eval(&self, assignments: &[(usize, Rat)]) -> Result<Self> {
        let d = self.den.partial_eval(assignments)?;
        if d.is_zero() {
            return Err(Error::Pole("denominator vanishes".into()));
        }
        RatFun::new(self.num.partial_eval(assignments)?, d)
    }

    /// Constant value if the function has no variable dependence after cancellation.
    pub fn as_constant(&self) -> Option<Rat> {
        let d = self.den.as_constant()?;
        Some(self.num.as_constant()? / d)
    }

    /// Power-series coefficients around 0 up to total degree `max` in all variables.
    /// Requires nonnegative exponents and a nonzero constant term in the denominator.
    pub fn series(&self, max: i32) -> Result<BTreeMap<Vec<i32>, Rat>> {
        let n = self.nvars();
        let nonneg = |p: &LaurentPoly| p.terms().all(|(e, _)| e.iter().all(|&x| x >= 0));
        if !nonneg(&self.num) || !nonneg(&self.den) {
            return Err(Error::Invalid("series needs polynomial numerator and denominator".into()));
        }
        let d0 = self.den.coeff(&vec![0; n]);
        if d0.is_zero() {
            return Err(Error::Pole("denominator vanishes at the origin".into()));
        }
        let mut out: BTreeMap<Vec<i32>, Rat> = BTreeMap::new();
        for deg in 0..=max {
            for e in compositions(n, deg) {
                let mut c = self.num.coeff(&e);
                for (de, dc) in self.den.terms() {
                    if de.iter().all(|&x| x == 0) {
                        continue;
                    }
                    let rest: Vec<i32> = e.iter().zip(de).map(|(a, b)| a - b).collect();
                    if rest.iter().all(|&x| x >= 0) {
                        if let Some(f) = out.get(&rest) {
                            c -= dc * f;
                        }
                    }
                }
                let c = c / &d0;
                if !c.is_zero() {
                    out.insert(e, c);
                }
            }
        }
        Ok(out)
    }
}

/// All exponent vectors of length n with nonnegative entries summing to `deg`.
pub fn compositions(n: usize, deg: i32) -> Vec<Vec<i32>> {
    if n == 0 {
        return if deg == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=deg).rev() {
        for mut rest in compositions(n - 1, deg - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        if self.den == rhs.den {
            return RatFun::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        RatFun::new(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den).unwrap()
    }
}

impl Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        self + &(-rhs)
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        RatFun::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

/// Σ_{k≥0} x^k = 1/(1 − x).
pub fn geometric_closed_form(ratio: &LaurentMono) -> Result<RatFun> {
    if ratio.is_one() {
        return Err(Error::Divergent);
    }
    let n = ratio.exps.len();
    RatFun::new(LaurentPoly::one(n), LaurentPoly::one_minus(n, ratio.coeff.clone(), ratio.exps.clone()))
}

/// Σ_{k=0}^{n-1} x^k as a polynomial.
pub fn geometric_partial_sum(ratio: &LaurentMono, n: u32) -> LaurentPoly {
    let x = LaurentPoly::monomial(ratio);
    let mut acc = LaurentPoly::zero(ratio.exps.len());
    let mut p = LaurentPoly::one(ratio.exps.len());
    for _ in 0..n {
        acc = &acc + &p;
        p = &p * &x;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identities() {
        // variables θ, u
        let th = LaurentPoly::var(2, 0);
        let num = LaurentPoly::one_minus(2, int(1), vec![1, 2]);
        let den = LaurentPoly::one_minus(2, int(1), vec![1, 0]);
        let f = RatFun::new(num, den.clone()).unwrap();
        assert_eq!(&f + &RatFun::zero(2), f);
        let g = RatFun::new(LaurentPoly::one(2), den.clone()).unwrap();
        assert_eq!(&RatFun::from_poly(den) * &g, RatFun::one(2));
        assert!(RatFun::one(2).div(&RatFun::zero(2)).is_err());
        assert_eq!(th.eval(&[rat(3, 2), int(1)]).unwrap(), rat(3, 2));
    }

    #[test]
    fn c_alpha_builds() {
        // τ1, τ2, u with α^∨ = e1 − e2 ↦ τ1²τ2^{-2}
        let num = LaurentPoly::one_minus(3, int(1), vec![2, -2, 2]);
        let den = LaurentPoly::one_minus(3, int(1), vec![2, -2, 0]);
        let c = RatFun::new(num, den).unwrap();
        let v = c.eval(&[int(2), int(1), rat(1, 3)]).unwrap();
        assert_eq!(v, (int(1) - rat(4, 9)) / (int(1) - int(4)));
    }

    #[test]
    fn geometric_examples() {
        let x = LaurentMono::new(int(1), vec![0, 2]);
        let g = geometric_closed_form(&x).unwrap();
        assert_eq!(g, RatFun::new(LaurentPoly::one(2), LaurentPoly::one_minus(2, int(1), vec![0, 2])).unwrap());
        assert!(matches!(geometric_closed_form(&LaurentMono::new(int(1), vec![0, 0])), Err(Error::Divergent)));
        for n in 0..=10u32 {
            let tail = RatFun::from_poly(LaurentPoly::one_minus(2, int(1), vec![0, 2 * n as i32]));
            assert_eq!(&g * &tail, RatFun::from_poly(geometric_partial_sum(&x, n)));
        }
    }

    #[test]
    fn exact_binomial_division() {
        let a = LaurentPoly::one_minus(2, int(1), vec![1, -1]);
        let b = LaurentPoly::from_terms(2, vec![(vec![2, 0], int(3)), (vec![0, 1], rat(1, 2)), (vec![-1, 0], int(-1))]);
        let p = &a * &b;
        assert_eq!(p.div_one_minus(&[1, -1]).unwrap(), b);
        assert!(b.div_one_minus(&[1, -1]).is_err());
    }

    #[test]
    fn series_of_geometric() {
        let g = geometric_closed_form(&LaurentMono::new(rat(1, 3), vec![1])).unwrap();
        let s = g.series(5).unwrap();
        for k in 0..=5 {
            assert_eq!(s[&vec![k]], pow_rat(&rat(1, 3), k));
        }
    }

    #[test]
    fn parse_and_render() {
        assert_eq!(parse_rat("-3/6").unwrap(), rat(-1, 2));
        assert_eq!(rat_string(&rat(4, 2)), "2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
        let p = LaurentPoly::one_minus(2, int(1), vec![0, 2]);
        assert_eq!(p.render(&["t", "u"]), "1 - u^2");
    }

    fn small_poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec(((-2i32..3, -2i32..3), -4i64..5, 1i64..4), 1..4).prop_map(|ts| {
            LaurentPoly::from_terms(2, ts.into_iter().map(|((a, b), n, d)| (vec![a, b], rat(n, d))))
        })
    }

    proptest! {
        #[test]
        fn symbolic_matches_numeric(
            a in small_poly(), b in small_poly(), c in small_poly(), d in small_poly(),
            x in (1i64..8, 1i64..8), y in (1i64..8, 1i64..8),
        ) {
            let pt = vec![rat(x.0, x.1), rat(y.0, y.1)];
            prop_assume!(!b.is_zero() && !d.is_zero());
            let bv = b.eval(&pt).unwrap();
            let dv = d.eval(&pt).unwrap();
            prop_assume!(!bv.is_zero() && !dv.is_zero());
            let f = RatFun::new(a.clone(), b.clone()).unwrap();
            let g = RatFun::new(c.clone(), d.clone()).unwrap();
            let av = a.eval(&pt).unwrap();
            let cv = c.eval(&pt).unwrap();
            prop_assert_eq!((&f + &g).eval(&pt).unwrap(), &av / &bv + &cv / &dv);
            prop_assert_eq!((&f * &g).eval(&pt).unwrap(), (&av / &bv) * (&cv / &dv));
            prop_assert_eq!((&f - &g).eval(&pt).unwrap(), &av / &bv - &cv / &dv);
            if !cv.is_zero() {
                prop_assert_eq!(f.div(&g).unwrap().eval(&pt).unwrap(), (&av / &bv) / (&cv / &dv));
            }
        }

        #[test]
        fn normalization_round_trip(a in small_poly(), b in small_poly()) {
            prop_assume!(!b.is_zero());
            let f = RatFun::new(a.clone(), b.clone()).unwrap();
            prop_assert_eq!(f.numerator() * &b, &a * f.denominator());
            let lead = f.denominator().leading().unwrap().1.clone();
            prop_assert!(lead.is_one());
        }
    }
}
