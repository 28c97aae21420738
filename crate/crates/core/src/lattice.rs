//! Weights in doubled coordinates, root data, and Weyl group enumeration.
//!
//! A coordinate value `k` stands for `k/2`. Pairings use the standard dot
//! product of the model coordinates, so `pair` divides by 4.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weight (or coweight, root, coroot) with the dimension of its weight space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight {
    pub coords: Vec<i32>,
    pub degree: u8,
}

impl Weight {
    pub fn new(coords: Vec<i32>, degree: u8) -> Self {
        Weight { coords, degree }
    }

    /// Degree-one weight from doubled coordinates.
    pub fn doubled(coords: &[i32]) -> Self {
        Weight::new(coords.to_vec(), 1)
    }

    pub fn zero(dim: usize) -> Self {
        Weight::new(vec![0; dim], 1)
    }

    /// `k`-th unit vector e_k (doubled coordinate 2).
    pub fn unit(dim: usize, k: usize) -> Self {
        let mut c = vec![0; dim];
        c[k] = 2;
        Weight::new(c, 1)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn with_degree(mut self, degree: u8) -> Self {
        self.degree = degree;
        self
    }

    pub fn neg(&self) -> Weight {
        Weight::new(self.coords.iter().map(|c| -c).collect(), self.degree)
    }

    pub fn add(&self, other: &Weight) -> Weight {
        debug_assert_eq!(self.dim(), other.dim());
        Weight::new(
            self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
            self.degree,
        )
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i32) -> Weight {
        Weight::new(self.coords.iter().map(|c| c * k).collect(), self.degree)
    }

    /// Same vector, ignoring the degree.
    pub fn same_vector(&self, other: &Weight) -> bool {
        self.coords == other.coords
    }
}

pub(crate) fn fmt_half(k: i32) -> String {
    if k % 2 == 0 {
        format!("{}", k / 2)
    } else {
        format!("{}/2", k)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|&c| fmt_half(c)).collect();
        write!(f, "({})", parts.join(", "))?;
        if self.degree != 1 {
            write!(f, "[deg {}]", self.degree)?;
        }
        Ok(())
    }
}

pub(crate) fn dot(a: &[i32], b: &[i32]) -> i64 {
    a.iter().zip(b).map(|(&x, &y)| x as i64 * y as i64).sum()
}

/// Four times the pairing, as an integer.
pub fn pair4(a: &Weight, b: &Weight) -> Result<i64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    Ok(dot(&a.coords, &b.coords))
}

/// ⟨a, b⟩ in the model coordinates.
pub fn pair(a: &Weight, b: &Weight) -> Result<Rational64> {
    Ok(Rational64::new(pair4(a, b)?, 4))
}

/// Reflection of a raw doubled vector: `x - (x·c) a / 4`.
pub(crate) fn reflect_raw(a: &[i32], c: &[i32], x: &[i32]) -> Option<Vec<i32>> {
    let k = dot(x, c);
    let mut out = Vec::with_capacity(x.len());
    for (xi, ai) in x.iter().zip(a) {
        let num = k * *ai as i64;
        if num % 4 != 0 {
            return None;
        }
        out.push(*xi - (num / 4) as i32);
    }
    Some(out)
}

#[inline]
fn reflect_in_place(a: &[i32], c: &[i32], x: &mut [i32]) {
    let k = dot(x, c);
    for (xi, ai) in x.iter_mut().zip(a) {
        *xi -= ((k * *ai as i64) / 4) as i32;
    }
}

/// s_α(v) = v − ⟨v, α^∨⟩α.
pub fn reflect(alpha: &Weight, alpha_vee: &Weight, v: &Weight) -> Result<Weight> {
    if alpha.dim() != v.dim() {
        return Err(Error::DimensionMismatch(alpha.dim(), v.dim()));
    }
    if alpha_vee.dim() != v.dim() {
        return Err(Error::DimensionMismatch(alpha_vee.dim(), v.dim()));
    }
    reflect_raw(&alpha.coords, &alpha_vee.coords, &v.coords)
        .map(|c| Weight::new(c, v.degree))
        .ok_or_else(|| Error::NonIntegral(format!("s_{} applied to {}", alpha, v)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootType {
    T,
    #[serde(rename = "U-psi")]
    UPsi,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimpleRoot {
    pub name: String,
    /// Root with its degree (dimension of the root space).
    pub root: Weight,
    pub coroot: Weight,
    pub kind: RootType,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RootDatum {
    pub dim: usize,
    pub simple: Vec<SimpleRoot>,
    pub positive_roots: Vec<Weight>,
    /// Coroots of `positive_roots`, index-aligned, carrying the root degree.
    pub positive_coroots: Vec<Weight>,
    /// Half-sum of positive coroots.
    pub rho_vee: Weight,
    /// Half-sum of positive roots counted with degree.
    pub rho: Weight,
}

fn coroot_of(root: &Weight) -> Result<Weight> {
    let n2 = dot(&root.coords, &root.coords);
    if n2 == 0 {
        return Err(Error::ModelData("zero root".into()));
    }
    let mut c = Vec::with_capacity(root.dim());
    for &a in &root.coords {
        let num = 8 * a as i64;
        if num % n2 != 0 {
            return Err(Error::ModelData(format!("coroot of {} is not in the doubled lattice", root)));
        }
        c.push((num / n2) as i32);
    }
    Ok(Weight::new(c, root.degree))
}

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Gaussian elimination over the rationals. Returns one solution of `a x = b`.
pub(crate) fn solve_rational(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        b.swap(r, p);
        let inv = a[r][c].recip();
        for j in 0..cols {
            a[r][j] = &a[r][j] * &inv;
        }
        b[r] = &b[r] * &inv;
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
                let t = &f * &b[r];
                b[i] -= t;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if (r..rows).any(|i| !b[i].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = b[i].clone();
    }
    Some(x)
}

/// Coefficients of `v` in the basis `basis`, if `v` lies in its span.
pub(crate) fn coefficients_in(basis: &[Weight], v: &Weight) -> Option<Vec<BigRational>> {
    let n = basis.len();
    let gram: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| rat(dot(&basis[i].coords, &basis[j].coords))).collect())
        .collect();
    let rhs: Vec<BigRational> = basis.iter().map(|b| rat(dot(&b.coords, &v.coords))).collect();
    let x = solve_rational(gram, rhs)?;
    for k in 0..v.dim() {
        let s: BigRational = (0..n).map(|i| &x[i] * rat(basis[i].coords[k] as i64)).sum();
        if s != rat(v.coords[k] as i64) {
            return None;
        }
    }
    Some(x)
}

/// A vector in the root span with prescribed inner products against the simple roots,
/// scaled to an integer doubled vector.
pub(crate) fn vector_with_pairings(simple: &[Weight], targets: &[i64]) -> Option<Vec<i32>> {
    let n = simple.len();
    let gram: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| rat(dot(&simple[i].coords, &simple[j].coords))).collect())
        .collect();
    let x = solve_rational(gram, targets.iter().map(|&t| rat(t)).collect())?;
    let dim = simple[0].dim();
    let mut v: Vec<BigRational> = vec![BigRational::zero(); dim];
    for i in 0..n {
        for k in 0..dim {
            v[k] += &x[i] * rat(simple[i].coords[k] as i64);
        }
    }
    let mut l = BigInt::one();
    for c in &v {
        l = num_integer::Integer::lcm(&l, c.denom());
    }
    let out: Vec<i32> = v
        .iter()
        .map(|c| {
            let s = c * BigRational::from_integer(l.clone());
            i32::try_from(s.to_integer()).ok()
        })
        .collect::<Option<_>>()?;
    Some(out)
}

impl RootDatum {
    /// Builds the datum from simple roots `(name, root, type)`; roots carry their degree.
    pub fn new(dim: usize, simple: Vec<(String, Weight, RootType)>) -> Result<Self> {
        let mut srs = Vec::new();
        for (name, root, kind) in simple {
            if root.dim() != dim {
                return Err(Error::DimensionMismatch(root.dim(), dim));
            }
            let coroot = coroot_of(&root)?;
            srs.push(SimpleRoot { name, root, coroot, kind });
        }
        let n = srs.len();
        for i in 0..n {
            for j in 0..n {
                let c = pair4(&srs[i].root, &srs[j].coroot)?;
                let ok = if i == j { c == 8 } else { c <= 0 && c % 4 == 0 };
                if !ok {
                    return Err(Error::ModelData(format!(
                        "Cartan entry ({}, {}) = {}/4 is invalid",
                        srs[i].name, srs[j].name, c
                    )));
                }
            }
        }
        let simple_w: Vec<Weight> = srs.iter().map(|s| s.root.clone()).collect();
        let v = vector_with_pairings(&simple_w, &vec![1; n])
            .ok_or_else(|| Error::ModelData("simple roots are linearly dependent".into()))?;

        // Orbit of the simple roots under simple reflections.
        let mut seen: HashSet<Weight> = simple_w.iter().cloned().collect();
        let mut queue: VecDeque<Weight> = simple_w.iter().cloned().collect();
        while let Some(r) = queue.pop_front() {
            for s in &srs {
                let img = reflect(&s.root, &s.coroot, &r)?;
                if seen.insert(img.clone()) {
                    queue.push_back(img);
                }
            }
            if seen.len() > 10_000 {
                return Err(Error::ModelData("root system is not finite".into()));
            }
        }
        let mut positive: Vec<Weight> = seen.into_iter().filter(|r| dot(&r.coords, &v) > 0).collect();
        positive.sort();
        let positive_coroots: Vec<Weight> = positive.iter().map(coroot_of).collect::<Result<_>>()?;

        let simple_coroots: Vec<Weight> = srs.iter().map(|s| s.coroot.clone()).collect();
        for c in &positive_coroots {
            let x = coefficients_in(&simple_coroots, c)
                .ok_or_else(|| Error::ModelData(format!("coroot {} outside the coroot span", c)))?;
            if x.iter().any(|a| !a.is_integer() || a.is_negative()) {
                return Err(Error::ModelData(format!("coroot {} is not a nonnegative integer combination", c)));
            }
        }

        let sum_c = positive_coroots.iter().fold(vec![0i32; dim], |acc, c| {
            acc.iter().zip(&c.coords).map(|(a, b)| a + b).collect()
        });
        if sum_c.iter().any(|x| x % 2 != 0) {
            return Err(Error::ModelData("half-sum of positive coroots is not in the doubled lattice".into()));
        }
        let rho_vee = Weight::doubled(&sum_c.iter().map(|x| x / 2).collect::<Vec<_>>());
        let sum_r = positive.iter().fold(vec![0i32; dim], |acc, r| {
            acc.iter().zip(&r.coords).map(|(a, b)| a + b * r.degree as i32).collect()
        });
        if sum_r.iter().any(|x| x % 2 != 0) {
            return Err(Error::ModelData("half-sum of positive roots is not in the doubled lattice".into()));
        }
        let rho = Weight::doubled(&sum_r.iter().map(|x| x / 2).collect::<Vec<_>>());
        Ok(RootDatum { dim, simple: srs, positive_roots: positive, positive_coroots, rho_vee, rho })
    }

    pub fn rank(&self) -> usize {
        self.simple.len()
    }

    pub fn simple_index(&self, name: &str) -> Option<usize> {
        self.simple.iter().position(|s| s.name == name)
    }

    /// Cartan matrix ⟨α_i, α_j^∨⟩.
    pub fn cartan(&self) -> Vec<Vec<i64>> {
        self.simple
            .iter()
            .map(|a| self.simple.iter().map(|b| dot(&a.root.coords, &b.coroot.coords) / 4).collect())
            .collect()
    }

    pub fn reflect_simple(&self, j: usize, v: &Weight) -> Result<Weight> {
        let s = &self.simple[j];
        reflect(&s.root, &s.coroot, v)
    }

    /// Positive roots together with their negatives.
    pub fn all_roots(&self) -> Vec<Weight> {
        self.positive_roots.iter().cloned().chain(self.positive_roots.iter().map(|r| r.neg())).collect()
    }

    pub fn simple_reflection(&self, j: usize) -> WeylElement {
        let s = &self.simple[j];
        let mut m4 = vec![0i8; self.dim * self.dim];
        for i in 0..self.dim {
            let mut e = vec![0i32; self.dim];
            e[i] = 4;
            reflect_in_place(&s.root.coords, &s.coroot.coords, &mut e);
            for k in 0..self.dim {
                m4[k * self.dim + i] = e[k] as i8;
            }
        }
        WeylElement { dim: self.dim, m4, sign: -1 }
    }

    pub fn identity(&self) -> WeylElement {
        WeylElement::identity(self.dim)
    }

    /// Product of simple reflections, applied right to left.
    pub fn word_element(&self, word: &[usize]) -> WeylElement {
        let mut w = self.identity();
        for &j in word {
            w = self.simple_reflection(j).compose(&w);
        }
        w
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R, length: usize) -> WeylElement {
        let word: Vec<usize> = (0..length).map(|_| rng.gen_range(0..self.rank())).collect();
        self.word_element(&word)
    }

    /// Longest element: the unique w with w(ρ^∨) = −ρ^∨ on the root span.
    pub fn longest_element(&self) -> WeylElement {
        let mut v = self.rho_vee.coords.clone();
        let mut w = self.identity();
        loop {
            let Some(j) = self.simple.iter().position(|s| dot(&v, &s.root.coords) > 0) else { break };
            reflect_in_place(&self.simple[j].root.coords, &self.simple[j].coroot.coords, &mut v);
            w = self.simple_reflection(j).compose(&w);
        }
        w
    }
}

/// ⟨ρ, lam⟩, so that δ_B^{1/2}(e^{lam}(ϖ)) = q^{⟨ρ, lam⟩}.
pub fn delta_half_exponent(datum: &RootDatum, lam: &Weight) -> Result<Rational64> {
    pair(&datum.rho, lam)
}

/// A Weyl group element, stored as four times its matrix in the model coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    dim: usize,
    m4: Vec<i8>,
    sign: i8,
}

impl WeylElement {
    pub fn identity(dim: usize) -> Self {
        let mut m4 = vec![0i8; dim * dim];
        for i in 0..dim {
            m4[i * dim + i] = 4;
        }
        WeylElement { dim, m4, sign: 1 }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Matrix entry (i, j) as a rational.
    pub fn entry(&self, i: usize, j: usize) -> Rational64 {
        Rational64::new(self.m4[i * self.dim + j] as i64, 4)
    }

    pub fn apply_raw(&self, v: &[i32]) -> Option<Vec<i32>> {
        let d = self.dim;
        let mut out = Vec::with_capacity(d);
        for i in 0..d {
            let s: i64 = (0..d).map(|j| self.m4[i * d + j] as i64 * v[j] as i64).sum();
            if s % 4 != 0 {
                return None;
            }
            out.push((s / 4) as i32);
        }
        Some(out)
    }

    pub fn apply(&self, v: &Weight) -> Result<Weight> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch(v.dim(), self.dim));
        }
        self.apply_raw(&v.coords)
            .map(|c| Weight::new(c, v.degree))
            .ok_or_else(|| Error::NonIntegral(format!("Weyl image of {}", v)))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let d = self.dim;
        let mut m4 = vec![0i8; d * d];
        for i in 0..d {
            for j in 0..d {
                let s: i32 = (0..d).map(|k| self.m4[i * d + k] as i32 * other.m4[k * d + j] as i32).sum();
                m4[i * d + j] = (s / 4) as i8;
            }
        }
        WeylElement { dim: d, m4, sign: self.sign * other.sign }
    }

    /// Inverse, which is the transpose since the action is orthogonal.
    pub fn inverse(&self) -> WeylElement {
        let d = self.dim;
        let mut m4 = vec![0i8; d * d];
        for i in 0..d {
            for j in 0..d {
                m4[j * d + i] = self.m4[i * d + j];
            }
        }
        WeylElement { dim: d, m4, sign: self.sign }
    }

    /// Determinant of the matrix, computed by fraction-free elimination.
    pub fn determinant(&self) -> Rational64 {
        let d = self.dim;
        let mut a: Vec<Vec<i128>> = (0..d).map(|i| (0..d).map(|j| self.m4[i * d + j] as i128).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..d {
            if a[k][k] == 0 {
                let Some(p) = (k + 1..d).find(|&i| a[i][k] != 0) else { return Rational64::zero() };
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..d {
                for j in k + 1..d {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        let det4 = sign * a[d - 1][d - 1];
        let scale = 4i128.pow(d as u32);
        Rational64::new(i64::try_from(det4).unwrap_or(i64::MAX), i64::try_from(scale).unwrap_or(i64::MAX))
    }

    pub fn is_identity(&self) -> bool {
        *self == WeylElement::identity(self.dim)
    }
}

pub const DEFAULT_WEYL_CAP: usize = 4_000_000;

/// Enumerated Weyl group.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    pub elements: Vec<WeylElement>,
}

impl WeylGroup {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

fn pack_key(v: &[i32]) -> Option<u128> {
    if v.len() > 16 {
        return None;
    }
    let mut k = 0u128;
    for &x in v {
        let b = i8::try_from(x).ok()? as u8;
        k = (k << 8) | b as u128;
    }
    Some(k)
}

/// Breadth-first closure of the simple reflections, deduplicated by the image of ρ^∨.
pub fn enumerate_weyl(datum: &RootDatum, cap: usize) -> Result<WeylGroup> {
    let reg = datum.rho_vee.coords.clone();
    let mut seen_packed: HashSet<u128> = HashSet::new();
    let mut seen_vec: HashSet<Vec<i32>> = HashSet::new();
    let mut insert = |v: &[i32]| -> bool {
        match pack_key(v) {
            Some(k) => seen_packed.insert(k),
            None => seen_vec.insert(v.to_vec()),
        }
    };
    let id = datum.identity();
    insert(&reg);
    let mut elements = vec![id];
    let mut images = vec![reg];
    let gens: Vec<WeylElement> = (0..datum.rank()).map(|j| datum.simple_reflection(j)).collect();
    let mut head = 0;
    while head < elements.len() {
        for (j, s) in datum.simple.iter().enumerate() {
            let img = reflect_raw(&s.root.coords, &s.coroot.coords, &images[head])
                .ok_or_else(|| Error::NonIntegral("regular vector".into()))?;
            if insert(&img) {
                if elements.len() >= cap {
                    return Err(Error::WeylCap(cap));
                }
                let w = gens[j].compose(&elements[head]);
                elements.push(w);
                images.push(img);
            }
        }
        head += 1;
    }
    Ok(WeylGroup { elements })
}

/// Cardinality by breadth-first search over the orbit of ρ^∨, storing only the images.
pub fn count_weyl_bfs(datum: &RootDatum, cap: usize) -> Result<usize> {
    let reg = datum.rho_vee.coords.clone();
    let mut seen: HashSet<u128> = HashSet::new();
    let key = |v: &[i32]| pack_key(v).ok_or_else(|| Error::Invalid("regular vector too large to pack".into()));
    seen.insert(key(&reg)?);
    let mut frontier = vec![reg];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for v in &frontier {
            for s in &datum.simple {
                let img = reflect_raw(&s.root.coords, &s.coroot.coords, v)
                    .ok_or_else(|| Error::NonIntegral("regular vector".into()))?;
                if seen.insert(key(&img)?) {
                    if seen.len() > cap {
                        return Err(Error::WeylCap(cap));
                    }
                    next.push(img);
                }
            }
        }
        frontier = next;
    }
    Ok(seen.len())
}

/// Minimal-length representatives of W / W_J for a set J of simple-root indices.
pub fn coset_representatives(datum: &RootDatum, subset: &[usize]) -> Result<Vec<WeylElement>> {
    let simple: Vec<Weight> = datum.simple.iter().map(|s| s.root.clone()).collect();
    let targets: Vec<i64> = (0..datum.rank()).map(|j| if subset.contains(&j) { 0 } else { 1 }).collect();
    let v = vector_with_pairings(&simple, &targets)
        .ok_or_else(|| Error::ModelData("no vector with the requested stabilizer".into()))?;
    // Scale so that every simple reflection stays in the doubled lattice.
    let k = simple.iter().fold(1i64, |l, a| num_integer::Integer::lcm(&l, &dot(&a.coords, &a.coords))) as i32;
    let v: Vec<i32> = v.iter().map(|x| x * k).collect();
    let mut seen: HashMap<Vec<i32>, usize> = HashMap::new();
    seen.insert(v.clone(), 0);
    let mut reps = vec![datum.identity()];
    let mut images = vec![v];
    let mut head = 0;
    while head < reps.len() {
        for (j, s) in datum.simple.iter().enumerate() {
            let img = reflect_raw(&s.root.coords, &s.coroot.coords, &images[head])
                .ok_or_else(|| Error::NonIntegral("coset vector".into()))?;
            if !seen.contains_key(&img) {
                seen.insert(img.clone(), reps.len());
                reps.push(datum.simple_reflection(j).compose(&reps[head]));
                images.push(img);
            }
        }
        head += 1;
    }
    Ok(reps)
}

/// Hash-free depth-first traversal of W via the orbit tree of ρ^∨.
///
/// The parent of a non-dominant vector λ is s_j λ with j the smallest index
/// such that (λ, α_j) < 0. Tracked vectors are carried along and updated in
/// place, so each element costs one reflection of every tracked vector.
pub struct WeylWalk<'a> {
    datum: &'a RootDatum,
    roots: Vec<Vec<i32>>,
    coroots: Vec<Vec<i32>>,
}

impl<'a> WeylWalk<'a> {
    pub fn new(datum: &'a RootDatum) -> Self {
        WeylWalk {
            datum,
            roots: datum.simple.iter().map(|s| s.root.coords.clone()).collect(),
            coroots: datum.simple.iter().map(|s| s.coroot.coords.clone()).collect(),
        }
    }

    fn initial_state(&self, tracked: &[Vec<i32>]) -> Vec<i32> {
        let mut st = self.datum.rho_vee.coords.clone();
        for t in tracked {
            assert_eq!(t.len(), self.datum.dim, "tracked vector dimension");
            st.extend_from_slice(t);
        }
        st
    }

    fn apply(&self, j: usize, state: &mut [i32]) {
        let d = self.datum.dim;
        for chunk in state.chunks_mut(d) {
            reflect_in_place(&self.roots[j], &self.coroots[j], chunk);
        }
    }

    fn is_child(&self, lam: &[i32], j: usize, buf: &mut Vec<i32>) -> bool {
        if dot(lam, &self.roots[j]) <= 0 {
            return false;
        }
        buf.clear();
        buf.extend_from_slice(lam);
        reflect_in_place(&self.roots[j], &self.coroots[j], buf);
        (0..j).all(|i| dot(buf, &self.roots[i]) > 0)
    }

    fn subtree<F: FnMut(i8, &[i32])>(&self, state: &mut Vec<i32>, sign: i8, f: &mut F, buf: &mut Vec<i32>) {
        let d = self.datum.dim;
        f(sign, &state[d..]);
        for j in 0..self.roots.len() {
            if self.is_child(&state[..d], j, buf) {
                self.apply(j, state);
                self.subtree(state, -sign, f, buf);
                self.apply(j, state);
            }
        }
    }

    /// Calls `f(sign(w), [w t_1, w t_2, ...])` for every w ∈ W, flattened.
    pub fn for_each<F: FnMut(i8, &[i32])>(&self, tracked: &[Vec<i32>], mut f: F) {
        let mut st = self.initial_state(tracked);
        let mut buf = Vec::new();
        self.subtree(&mut st, 1, &mut f, &mut buf);
    }

    fn frontier<F: FnMut(i8, &[i32])>(
        &self,
        state: &mut Vec<i32>,
        sign: i8,
        depth: usize,
        split: usize,
        f: &mut F,
        out: &mut Vec<(Vec<i32>, i8)>,
        buf: &mut Vec<i32>,
    ) {
        let d = self.datum.dim;
        if depth == split {
            out.push((state.clone(), sign));
            return;
        }
        f(sign, &state[d..]);
        for j in 0..self.roots.len() {
            if self.is_child(&state[..d], j, buf) {
                self.apply(j, state);
                self.frontier(state, -sign, depth + 1, split, f, out, buf);
                self.apply(j, state);
            }
        }
    }

    /// Parallel fold over W. The result does not depend on scheduling when
    /// `combine` is associative and commutative.
    pub fn par_fold<T, I, V, C>(&self, tracked: &[Vec<i32>], split: usize, init: I, visit: V, combine: C) -> T
    where
        T: Send,
        I: Fn() -> T + Sync + Send,
        V: Fn(&mut T, i8, &[i32]) + Sync + Send,
        C: Fn(T, T) -> T + Sync + Send,
    {
        let mut st = self.initial_state(tracked);
        let mut head = init();
        let mut roots = Vec::new();
        let mut buf = Vec::new();
        self.frontier(&mut st, 1, 0, split, &mut |s, x| visit(&mut head, s, x), &mut roots, &mut buf);
        let rest = roots
            .into_par_iter()
            .map(|(mut state, sign)| {
                let mut acc = init();
                let mut buf = Vec::new();
                self.subtree(&mut state, sign, &mut |s, x| visit(&mut acc, s, x), &mut buf);
                acc
            })
            .reduce(&init, &combine);
        combine(head, rest)
    }

    pub fn count(&self) -> u64 {
        let mut n = 0u64;
        self.for_each(&[], |_, _| n += 1);
        n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a1a1() -> RootDatum {
        RootDatum::new(
            4,
            vec![
                ("a".into(), Weight::doubled(&[2, -2, 0, 0]), RootType::T),
                ("b".into(), Weight::doubled(&[0, 0, 2, -2]), RootType::T),
            ],
        )
        .unwrap()
    }

    #[test]
    fn pairing_examples() {
        let a = Weight::doubled(&[2, -2, 0]);
        assert_eq!(pair(&a, &a).unwrap(), Rational64::from_integer(2));
        let h = Weight::doubled(&[1, 1, 1]);
        let r = Weight::doubled(&[0, 0, 4]);
        assert_eq!(pair(&h, &r).unwrap(), Rational64::from_integer(1));
        assert!(pair(&a, &Weight::zero(2)).is_err());
    }

    #[test]
    fn reflection_examples() {
        let a = Weight::doubled(&[2, -2, 0]);
        let e1 = Weight::unit(3, 0);
        assert_eq!(reflect(&a, &a, &e1).unwrap(), Weight::unit(3, 1));
        let r = Weight::doubled(&[0, 0, 4]);
        let c = coroot_of(&r).unwrap();
        assert_eq!(c, Weight::unit(3, 2));
        assert_eq!(reflect(&r, &c, &Weight::unit(3, 2)).unwrap(), Weight::unit(3, 2).neg());
    }

    #[test]
    fn a1_squared() {
        let d = a1a1();
        assert_eq!(d.positive_roots.len(), 2);
        assert_eq!(enumerate_weyl(&d, 100).unwrap().len(), 4);
        assert_eq!(WeylWalk::new(&d).count(), 4);
        assert_eq!(count_weyl_bfs(&d, 100).unwrap(), 4);
        assert_eq!(coset_representatives(&d, &[0]).unwrap().len(), 2);
    }

    #[test]
    fn cap_is_enforced() {
        let d = a1a1();
        assert!(matches!(enumerate_weyl(&d, 2), Err(Error::WeylCap(2))));
    }

    #[test]
    fn longest_element_negates_rho() {
        let d = a1a1();
        let w0 = d.longest_element();
        assert_eq!(w0.apply(&d.rho_vee).unwrap(), d.rho_vee.neg());
        assert_eq!(w0.sign(), 1);
    }

    #[test]
    fn bad_cartan_rejected() {
        let r = RootDatum::new(
            2,
            vec![
                ("a".into(), Weight::doubled(&[2, 0]), RootType::T),
                ("b".into(), Weight::doubled(&[2, 2]), RootType::T),
            ],
        );
        assert!(r.is_err());
    }
}
