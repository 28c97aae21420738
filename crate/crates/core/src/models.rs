//! Catalog of spherical-pair data and the Θ⁺ closure.
//!
//! Each [`ModelSpec`] is plain serializable data: coordinates, simple roots
//! with their type, the weight set Θ of ρ_X with weight-space degrees, the
//! virtual colors of the Type-T roots, the torus chart used for evaluation,
//! and the Gross-motive degree lists. [`Model`] is the validated form with
//! the root datum built and the colors resolved inside Θ.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::lattice::{dot, RootDatum, RootType, Weight};
use crate::ratfun::{LaurentPoly, Rat};
use crate::{Error, Result};

pub const CATALOG_VERSION: u32 = 1;

/// A local factor ζ(d) or, when `twisted`, L(d, η).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MotiveFactor {
    pub twisted: bool,
    pub degree: u32,
}

impl MotiveFactor {
    pub fn zeta(degree: u32) -> Self {
        MotiveFactor { twisted: false, degree }
    }

    pub fn l_eta(degree: u32) -> Self {
        MotiveFactor { twisted: true, degree }
    }

    /// The reciprocal 1 ∓ u^{2d} of the factor, as a polynomial in u.
    pub fn inverse_poly(&self) -> LaurentPoly {
        let sign = if self.twisted { 1 } else { -1 };
        LaurentPoly::one_minus(1, Rat::from_integer((-sign).into()), vec![2 * self.degree as i32])
    }
}

impl fmt::Display for MotiveFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twisted {
            write!(f, "L({},η)", self.degree)
        } else {
            write!(f, "ζ({})", self.degree)
        }
    }
}

/// Renders a factor multiset as `ζ(1)²ζ(4)L(1,η)`.
pub fn render_factors(factors: &[MotiveFactor]) -> String {
    let mut counts: BTreeMap<MotiveFactor, usize> = BTreeMap::new();
    for f in factors {
        *counts.entry(*f).or_default() += 1;
    }
    let sup = |n: usize| -> String {
        const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
        if n == 1 {
            return String::new();
        }
        n.to_string().chars().map(|c| DIGITS[c.to_digit(10).unwrap() as usize]).collect()
    };
    if counts.is_empty() {
        return "1".into();
    }
    counts.iter().map(|(f, n)| format!("{}{}", f, sup(*n))).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RootSpec {
    pub name: String,
    pub root: Weight,
    pub kind: RootType,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ColorSpec {
    pub root: String,
    pub colors: Vec<Weight>,
}

/// Torus variables τ_v. Coordinate i has value τ_{lift[i]} (or 1 when unmapped),
/// so e^γ = Π_i value_i^{doubled γ_i}. Every weight must be orthogonal to the
/// `domain` vectors.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Chart {
    pub names: Vec<String>,
    pub lift: Vec<Option<usize>>,
    pub domain: Vec<Vec<i32>>,
}

impl Chart {
    pub fn identity(names: &[&str]) -> Self {
        Chart {
            names: names.iter().map(|s| s.to_string()).collect(),
            lift: (0..names.len()).map(Some).collect(),
            domain: Vec::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    /// Exponents of τ in e^γ for a doubled coordinate vector.
    pub fn exps(&self, c: &[i32]) -> Vec<i32> {
        let mut e = vec![0; self.nvars()];
        for (i, v) in self.lift.iter().enumerate() {
            if let Some(v) = v {
                e[*v] += c[i];
            }
        }
        e
    }

    pub fn in_domain(&self, c: &[i32]) -> bool {
        self.domain.iter().all(|d| dot(d, c) == 0)
    }
}

/// A Levi-type reduction: W' generated by `levi`, with Θ⁺ = Θ₁⁺ ⊔ Θ₂⁺.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Reduction {
    pub name: String,
    pub levi: Vec<String>,
    pub theta1: Vec<Weight>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelSpec {
    pub name: String,
    pub label: String,
    pub rho_x: String,
    pub table_row: Option<u8>,
    pub coords: Vec<String>,
    pub roots: Vec<RootSpec>,
    pub theta: Vec<Weight>,
    pub colors: Vec<ColorSpec>,
    pub chart: Chart,
    /// Doubled coordinates of a central weight z with e^z = 1 at every admissible point.
    pub center: Option<Vec<i32>>,
    pub motive_g: Vec<MotiveFactor>,
    pub motive_h: Vec<MotiveFactor>,
    /// Exponents (a, b) of the torus factor (1−q^{-1})^a (1−q^{-2})^b in L(1, Ad)^{-1}.
    pub torus: [u32; 2],
    pub reductions: Vec<Reduction>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Catalog {
    pub version: u32,
    pub models: Vec<ModelSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaPlus {
    pub elements: Vec<Weight>,
}

impl ThetaPlus {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Size counted with weight-space degrees.
    pub fn dimension(&self) -> usize {
        self.elements.iter().map(|w| w.degree as usize).sum()
    }

    pub fn contains(&self, w: &Weight) -> bool {
        self.elements.iter().any(|x| x.same_vector(w))
    }
}

/// Validated model.
#[derive(Clone, Debug)]
pub struct Model {
    pub spec: ModelSpec,
    pub datum: RootDatum,
    /// Resolved colors per simple root (empty for Type-(U,ψ) roots).
    pub colors: Vec<Vec<Weight>>,
    theta_index: HashMap<Vec<i32>, usize>,
    neg_map: Vec<usize>,
}

fn w(c: &[i32]) -> Weight {
    Weight::doubled(c)
}

fn w2(c: &[i32]) -> Weight {
    Weight::doubled(c).with_degree(2)
}

fn sign_vectors(n: usize) -> Vec<Vec<i32>> {
    (0..1u32 << n).map(|m| (0..n).map(|i| if m >> i & 1 == 1 { -1 } else { 1 }).collect()).collect()
}

fn cat(a: &[i32], b: &[i32]) -> Vec<i32> {
    a.iter().chain(b).copied().collect()
}

fn root(name: &str, c: &[i32], kind: RootType) -> RootSpec {
    RootSpec { name: name.into(), root: w(c), kind }
}

fn color(root: &str, colors: &[&[i32]]) -> ColorSpec {
    ColorSpec { root: root.into(), colors: colors.iter().map(|c| w(c)).collect() }
}

fn zetas(ds: &[u32]) -> Vec<MotiveFactor> {
    ds.iter().map(|&d| MotiveFactor::zeta(d)).collect()
}

fn unit(n: usize, i: usize, k: i32) -> Vec<i32> {
    let mut v = vec![0; n];
    v[i] = k;
    v
}

fn type_a(n: usize, offset: usize, dim: usize, names: &[&str], kinds: &[RootType]) -> Vec<RootSpec> {
    (0..n - 1)
        .map(|i| {
            let mut c = vec![0; dim];
            c[offset + i] = 2;
            c[offset + i + 1] = -2;
            RootSpec { name: names[i].into(), root: w(&c), kind: kinds[i] }
        })
        .collect()
}

use RootType::{UPsi as U, T};

fn trilinear() -> ModelSpec {
    let coords = ["e1", "e2", "e1'", "e2'", "e1''", "e2''"];
    let mut theta = Vec::new();
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                let mut v = vec![0; 6];
                v[a] = 2;
                v[2 + b] = 2;
                v[4 + c] = 2;
                theta.push(w(&v));
            }
        }
    }
    ModelSpec {
        name: "trilinear".into(),
        label: "GL2×GL2×GL2".into(),
        rho_x: "std2⊗std2⊗std2".into(),
        table_row: None,
        coords: coords.iter().map(|s| s.to_string()).collect(),
        roots: vec![
            root("α1", &[2, -2, 0, 0, 0, 0], T),
            root("α2", &[0, 0, 2, -2, 0, 0], T),
            root("α3", &[0, 0, 0, 0, 2, -2], T),
        ],
        theta,
        colors: vec![
            color("α1", &[&[2, 0, 0, 2, 2, 0], &[2, 0, 2, 0, 0, 2]]),
            color("α2", &[&[0, 2, 2, 0, 2, 0], &[2, 0, 2, 0, 0, 2]]),
            color("α3", &[&[0, 2, 2, 0, 2, 0], &[2, 0, 0, 2, 2, 0]]),
        ],
        chart: Chart::identity(&["t1", "t2", "t1'", "t2'", "t1''", "t2''"]),
        center: Some(vec![1; 6]),
        motive_g: zetas(&[1, 2, 1, 2, 1, 2]),
        motive_h: zetas(&[2]),
        torus: [6, 0],
        reductions: vec![],
    }
}

fn gl4_gl2() -> ModelSpec {
    let mut theta = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            for k in 0..2 {
                let mut v = vec![0; 6];
                v[i] = 2;
                v[j] = 2;
                v[4 + k] = 2;
                theta.push(w(&v));
            }
        }
    }
    for i in 0..4 {
        theta.push(w(&unit(6, i, 2)));
        theta.push(w(&unit(6, i, -2)));
    }
    let mut roots = type_a(4, 0, 6, &["α1", "α2", "α3"], &[T, T, T]);
    roots.push(root("α'", &[0, 0, 0, 0, 2, -2], T));
    ModelSpec {
        name: "GL4xGL2".into(),
        label: "GL4×GL2".into(),
        rho_x: "(∧²⊗std2)⊕std4⊕std4^∨".into(),
        table_row: Some(1),
        coords: ["e1", "e2", "e3", "e4", "e1'", "e2'"].iter().map(|s| s.to_string()).collect(),
        roots,
        theta,
        colors: vec![
            color("α1", &[&[2, 0, 2, 0, 0, 2], &[2, 0, 0, 2, 2, 0]]),
            color("α2", &[&[0, 2, 0, 0, 0, 0], &[0, 0, -2, 0, 0, 0]]),
            color("α3", &[&[0, 2, 2, 0, 2, 0], &[2, 0, 2, 0, 0, 2]]),
            color("α'", &[&[0, 2, 2, 0, 2, 0], &[2, 0, 0, 2, 2, 0]]),
        ],
        chart: Chart::identity(&["t1", "t2", "t3", "t4", "t1'", "t2'"]),
        center: Some(vec![1; 6]),
        motive_g: zetas(&[1, 2, 3, 4, 1, 2]),
        motive_h: zetas(&[1, 2, 2]),
        torus: [6, 0],
        reductions: vec![],
    }
}

/// Θ of the unitary models: half-sum weights of degree 1 and ±e_i of degree 2.
fn unitary_theta(n: usize) -> Vec<Weight> {
    let mut theta: Vec<Weight> = sign_vectors(n).into_iter().map(|s| w(&s)).collect();
    for i in 0..n {
        theta.push(w2(&unit(n, i, 2)));
        theta.push(w2(&unit(n, i, -2)));
    }
    theta
}

fn gu4_gu2() -> ModelSpec {
    ModelSpec {
        name: "GU4xGU2".into(),
        label: "GU4×GU2".into(),
        rho_x: "(∧²⊗std2)⊕std4⊕std4^∨".into(),
        table_row: Some(2),
        coords: ["e1", "e2", "e1'"].iter().map(|s| s.to_string()).collect(),
        roots: vec![
            RootSpec { name: "α1".into(), root: w2(&[2, -2, 0]), kind: T },
            root("α2", &[0, 4, 0], T),
            root("α'", &[0, 0, 4], T),
        ],
        theta: unitary_theta(3),
        colors: vec![
            color("α1", &[&[1, -1, -1], &[1, -1, 1]]),
            ColorSpec { root: "α2".into(), colors: vec![w2(&[0, 2, 0])] },
            ColorSpec { root: "α'".into(), colors: vec![w2(&[0, 0, 2])] },
        ],
        chart: Chart::identity(&["t1", "t2", "t1'"]),
        center: None,
        motive_g: vec![
            MotiveFactor::zeta(1),
            MotiveFactor::l_eta(1),
            MotiveFactor::zeta(2),
            MotiveFactor::l_eta(3),
            MotiveFactor::zeta(4),
            MotiveFactor::zeta(1),
            MotiveFactor::l_eta(1),
            MotiveFactor::zeta(2),
        ],
        motive_h: vec![MotiveFactor::zeta(2), MotiveFactor::zeta(2), MotiveFactor::l_eta(1)],
        torus: [2, 3],
        reductions: vec![],
    }
}

fn gsp6_gsp4() -> ModelSpec {
    ModelSpec {
        name: "GSp6xGSp4".into(),
        label: "GSp6×GSp4".into(),
        rho_x: "Spin7⊗Spin5".into(),
        table_row: Some(3),
        coords: ["e1", "e2", "e3", "e1'", "e2'"].iter().map(|s| s.to_string()).collect(),
        roots: vec![
            root("α1", &[2, -2, 0, 0, 0], T),
            root("α2", &[0, 2, -2, 0, 0], T),
            root("α3", &[0, 0, 4, 0, 0], T),
            root("α1'", &[0, 0, 0, 2, -2], T),
            root("α2'", &[0, 0, 0, 0, 4], T),
        ],
        theta: sign_vectors(5).into_iter().map(|s| w(&s)).collect(),
        colors: vec![
            color("α1", &[&[1, -1, 1, -1, 1], &[1, -1, -1, 1, -1]]),
            color("α2", &[&[-1, 1, -1, 1, 1], &[1, 1, -1, -1, -1]]),
            color("α3", &[&[1, -1, 1, -1, 1], &[-1, 1, 1, 1, -1]]),
            color("α1'", &[&[-1, 1, 1, 1, -1], &[1, -1, -1, 1, -1]]),
            color("α2'", &[&[1, -1, 1, -1, 1], &[-1, 1, -1, 1, 1]]),
        ],
        chart: Chart::identity(&["t1", "t2", "t3", "t1'", "t2'"]),
        center: None,
        motive_g: zetas(&[1, 2, 4, 6, 1, 2, 4]),
        motive_h: zetas(&[2, 2, 4]),
        torus: [7, 0],
        reductions: vec![],
    }
}

fn gl6() -> ModelSpec {
    let mut theta = Vec::new();
    for i in 0..6 {
        for j in i + 1..6 {
            for k in j + 1..6 {
                let mut v = vec![0; 6];
                v[i] = 2;
                v[j] = 2;
                v[k] = 2;
                theta.push(w(&v));
            }
        }
    }
    let mut theta1 = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            for k in j + 1..4 {
                let mut v = vec![0; 6];
                v[i] = 2;
                v[j] = 2;
                v[k] = 2;
                theta1.push(w(&v));
            }
        }
    }
    ModelSpec {
        name: "GL6".into(),
        label: "GL6".into(),
        rho_x: "∧³".into(),
        table_row: Some(4),
        coords: (1..=6).map(|i| format!("e{i}")).collect(),
        roots: type_a(6, 0, 6, &["α1", "α2", "α3", "α4", "α5"], &[T, U, T, U, T]),
        theta,
        colors: vec![
            color("α1", &[&[2, 0, 0, 2, 2, 0], &[2, 0, 2, 0, 0, 2]]),
            color("α3", &[&[0, 2, 2, 0, 2, 0], &[2, 0, 2, 0, 0, 2]]),
            color("α5", &[&[0, 2, 2, 0, 2, 0], &[2, 0, 0, 2, 2, 0]]),
        ],
        chart: Chart::identity(&["t1", "t2", "t3", "t4", "t5", "t6"]),
        center: Some(vec![1; 6]),
        motive_g: zetas(&[1, 2, 3, 4, 5, 6]),
        motive_h: zetas(&[2]),
        torus: [6, 0],
        reductions: vec![Reduction {
            name: "GL6-over-GL4xGL2".into(),
            levi: vec!["α1".into(), "α2".into(), "α3".into(), "α5".into()],
            theta1,
        }],
    }
}

fn gu6() -> ModelSpec {
    ModelSpec {
        name: "GU6".into(),
        label: "GU6".into(),
        rho_x: "∧³".into(),
        table_row: Some(5),
        coords: ["e1", "e2", "e3"].iter().map(|s| s.to_string()).collect(),
        roots: vec![
            RootSpec { name: "α1".into(), root: w2(&[2, -2, 0]), kind: T },
            RootSpec { name: "α2".into(), root: w2(&[0, 2, -2]), kind: U },
            root("α3", &[0, 0, 4], T),
        ],
        theta: unitary_theta(3),
        colors: vec![
            color("α1", &[&[1, -1, -1], &[1, -1, 1]]),
            ColorSpec { root: "α3".into(), colors: vec![w2(&[0, 0, 2])] },
        ],
        chart: Chart::identity(&["t1", "t2", "t3"]),
        center: None,
        motive_g: vec![
            MotiveFactor::zeta(1),
            MotiveFactor::l_eta(1),
            MotiveFactor::zeta(2),
            MotiveFactor::l_eta(3),
            MotiveFactor::zeta(4),
            MotiveFactor::l_eta(5),
            MotiveFactor::zeta(6),
        ],
        motive_h: zetas(&[2]),
        torus: [1, 3],
        reductions: vec![],
    }
}

fn gsp10() -> ModelSpec {
    let mut roots = type_a(5, 0, 5, &["α1", "α2", "α3", "α4"], &[T, U, T, U]);
    roots.push(root("α5", &[0, 0, 0, 0, 4], T));
    let mut theta1: Vec<Weight> = Vec::new();
    for s4 in [1, -1] {
        for s5 in [1, -1] {
            theta1.push(w(&[1, 1, 1, s4, s5]));
        }
    }
    for i in 0..3 {
        for s5 in [1, -1] {
            let mut v = vec![1, 1, 1, 1, s5];
            v[i] = -1;
            theta1.push(w(&v));
        }
    }
    ModelSpec {
        name: "GSp10".into(),
        label: "GSp10".into(),
        rho_x: "Spin11".into(),
        table_row: Some(6),
        coords: (1..=5).map(|i| format!("e{i}")).collect(),
        roots,
        theta: sign_vectors(5).into_iter().map(|s| w(&s)).collect(),
        colors: vec![
            color("α1", &[&[1, -1, -1, 1, 1], &[1, -1, 1, -1, -1]]),
            color("α3", &[&[-1, 1, 1, -1, 1], &[1, -1, 1, -1, -1]]),
            color("α5", &[&[-1, 1, 1, -1, 1], &[1, -1, -1, 1, 1]]),
        ],
        chart: Chart::identity(&["t1", "t2", "t3", "t4", "t5"]),
        center: None,
        motive_g: zetas(&[1, 2, 4, 6, 8, 10]),
        motive_h: zetas(&[2]),
        torus: [6, 0],
        reductions: vec![Reduction {
            name: "GSp10-over-GL4xGL2".into(),
            levi: vec!["α1".into(), "α2".into(), "α3".into(), "α5".into()],
            theta1,
        }],
    }
}

fn gsp6_gl2() -> ModelSpec {
    let mut theta = Vec::new();
    for s in sign_vectors(3) {
        theta.push(w(&cat(&s, &[2, 0])));
        theta.push(w(&cat(&s, &[0, 2])));
    }
    let theta1 = vec![w(&[1, 1, 1, 2, 0]), w(&[1, 1, 1, 0, 2]), w(&[1, 1, -1, 2, 0]), w(&[1, 1, -1, 0, 2])];
    ModelSpec {
        name: "GSp6xGL2".into(),
        label: "GSp6×GL2".into(),
        rho_x: "Spin7⊗std2".into(),
        table_row: Some(7),
        coords: ["e1", "e2", "e3", "e1'", "e2'"].iter().map(|s| s.to_string()).collect(),
        roots: vec![
            root("α1", &[2, -2, 0, 0, 0], T),
            root("α2", &[0, 2, -2, 0, 0], U),
            root("α3", &[0, 0, 4, 0, 0], T),
            root("α'", &[0, 0, 0, 2, -2], T),
        ],
        theta,
        colors: vec![
            color("α1", &[&[1, -1, -1, 2, 0], &[1, -1, 1, 0, 2]]),
            color("α3", &[&[-1, 1, 1, 2, 0], &[1, -1, 1, 0, 2]]),
            color("α'", &[&[-1, 1, 1, 2, 0], &[1, -1, -1, 2, 0]]),
        ],
        chart: Chart::identity(&["t1", "t2", "t3", "t1'", "t2'"]),
        center: Some(vec![0, 0, 0, 1, 1]),
        motive_g: zetas(&[1, 2, 4, 6, 1, 2]),
        motive_h: zetas(&[2]),
        torus: [6, 0],
        reductions: vec![Reduction {
            name: "GSp6GL2-over-trilinear".into(),
            levi: vec!["α1".into(), "α3".into(), "α'".into()],
            theta1,
        }],
    }
}

fn gso8_gl2() -> ModelSpec {
    let half: Vec<Vec<i32>> =
        sign_vectors(4).into_iter().filter(|s| s.iter().filter(|&&x| x < 0).count() % 2 == 0).collect();
    let mut theta = Vec::new();
    for s in &half {
        theta.push(w(&cat(s, &[2, 0])));
        theta.push(w(&cat(s, &[0, 2])));
    }
    let theta1 = vec![
        w(&[1, 1, 1, 1, 2, 0]),
        w(&[1, 1, 1, 1, 0, 2]),
        w(&[1, 1, -1, -1, 2, 0]),
        w(&[1, 1, -1, -1, 0, 2]),
    ];
    let mut roots = type_a(4, 0, 6, &["α1", "α2", "α3"], &[T, U, T]);
    roots.push(root("α4", &[0, 0, 2, 2, 0, 0], U));
    roots.push(root("α'", &[0, 0, 0, 0, 2, -2], T));
    ModelSpec {
        name: "GSO8xGL2".into(),
        label: "GSO8×GL2".into(),
        rho_x: "HSpin8⊗std2".into(),
        table_row: Some(8),
        coords: ["e1", "e2", "e3", "e4", "e1'", "e2'"].iter().map(|s| s.to_string()).collect(),
        roots,
        theta,
        colors: vec![
            color("α1", &[&[1, -1, -1, 1, 2, 0], &[1, -1, 1, -1, 0, 2]]),
            color("α3", &[&[-1, 1, 1, -1, 2, 0], &[1, -1, 1, -1, 0, 2]]),
            color("α'", &[&[-1, 1, 1, -1, 2, 0], &[1, -1, -1, 1, 2, 0]]),
        ],
        chart: Chart::identity(&["t1", "t2", "t3", "t4", "t1'", "t2'"]),
        center: Some(vec![0, 0, 0, 0, 1, 1]),
        motive_g: zetas(&[1, 2, 4, 4, 6, 1, 2]),
        motive_h: zetas(&[2]),
        torus: [7, 0],
        reductions: vec![Reduction {
            name: "GSO8-over-trilinear".into(),
            levi: vec!["α1".into(), "α3".into(), "α'".into()],
            theta1,
        }],
    }
}

fn gso12() -> ModelSpec {
    let theta: Vec<Weight> = sign_vectors(6)
        .into_iter()
        .filter(|s| s.iter().filter(|&&x| x < 0).count() % 2 == 1)
        .map(|s| w(&s))
        .collect();
    let theta1: Vec<Weight> = (0..6)
        .map(|l| {
            let mut v = vec![1; 6];
            v[l] = -1;
            w(&v)
        })
        .collect();
    let mut roots = type_a(6, 0, 6, &["α1", "α2", "α3", "α4", "α5"], &[T, U, T, U, T]);
    roots.push(root("α6", &[0, 0, 0, 0, 2, 2], U));
    ModelSpec {
        name: "GSO12".into(),
        label: "GSO12".into(),
        rho_x: "HSpin12".into(),
        table_row: Some(9),
        coords: (1..=6).map(|i| format!("e{i}")).collect(),
        roots,
        theta,
        colors: vec![
            color("α1", &[&[1, -1, -1, 1, 1, -1], &[1, -1, 1, -1, -1, 1]]),
            color("α3", &[&[-1, 1, 1, -1, 1, -1], &[1, -1, 1, -1, -1, 1]]),
            color("α5", &[&[-1, 1, 1, -1, 1, -1], &[1, -1, -1, 1, 1, -1]]),
        ],
        chart: Chart::identity(&["t1", "t2", "t3", "t4", "t5", "t6"]),
        center: None,
        motive_g: zetas(&[1, 2, 4, 6, 6, 8, 10]),
        motive_h: zetas(&[2]),
        torus: [7, 0],
        reductions: vec![Reduction {
            name: "GSO12-over-GL6".into(),
            levi: (1..=5).map(|i| format!("α{i}")).collect(),
            theta1,
        }],
    }
}

fn e7() -> ModelSpec {
    let mut theta = Vec::new();
    for i in 0..6 {
        for s in [2, -2] {
            for t in [1, -1] {
                let mut v = vec![0; 8];
                v[i] = s;
                v[6] = -t;
                v[7] = t;
                theta.push(w(&v));
            }
        }
    }
    for s in sign_vectors(6) {
        if s.iter().filter(|&&x| x > 0).count() % 2 == 0 {
            theta.push(w(&cat(&s, &[0, 0])));
        }
    }
    let mut theta1 = Vec::new();
    for m in 0..6 {
        for s in [2, -2] {
            let mut v = vec![0; 8];
            v[m] = s;
            v[6] = -1;
            v[7] = 1;
            theta1.push(w(&v));
        }
    }
    let mut roots = vec![
        root("α1", &[1, -1, -1, -1, -1, -1, -1, 1], U),
        root("α2", &[2, 2, 0, 0, 0, 0, 0, 0], T),
    ];
    let kinds = [U, U, T, U, T];
    for i in 0..5 {
        let mut c = vec![0; 8];
        c[i] = -2;
        c[i + 1] = 2;
        roots.push(RootSpec { name: format!("α{}", i + 3), root: w(&c), kind: kinds[i] });
    }
    ModelSpec {
        name: "E7".into(),
        label: "E7".into(),
        rho_x: "ω7 (56-dimensional)".into(),
        table_row: Some(10),
        coords: (1..=8).map(|i| format!("e{i}")).collect(),
        roots,
        theta,
        colors: vec![
            color("α7", &[&[1, 1, 1, -1, -1, 1, 0, 0], &[-1, -1, -1, 1, -1, 1, 0, 0]]),
            color("α5", &[&[1, 1, -1, 1, 1, -1, 0, 0], &[-1, -1, -1, 1, -1, 1, 0, 0]]),
            color("α2", &[&[1, 1, -1, 1, 1, -1, 0, 0], &[1, 1, 1, -1, -1, 1, 0, 0]]),
        ],
        chart: Chart {
            names: ["t1", "t2", "t3", "t4", "t5", "t6", "t7"].iter().map(|s| s.to_string()).collect(),
            lift: vec![Some(0), Some(1), Some(2), Some(3), Some(4), Some(5), None, Some(6)],
            domain: vec![vec![0, 0, 0, 0, 0, 0, 1, 1]],
        },
        center: None,
        motive_g: zetas(&[2, 6, 8, 10, 12, 14, 18]),
        motive_h: zetas(&[2]),
        torus: [7, 0],
        reductions: vec![Reduction {
            name: "E7-over-D6".into(),
            levi: (2..=7).map(|i| format!("α{i}")).collect(),
            theta1,
        }],
    }
}

/// The built-in catalog: the trilinear base case and the ten rows of the table.
pub fn builtin_catalog() -> Catalog {
    Catalog {
        version: CATALOG_VERSION,
        models: vec![
            trilinear(),
            gl4_gl2(),
            gu4_gu2(),
            gsp6_gsp4(),
            gl6(),
            gu6(),
            gsp10(),
            gsp6_gl2(),
            gso8_gl2(),
            gso12(),
            e7(),
        ],
    }
}

/// The catalog from the file named by `RELCHAR_CATALOG`, or the built-in one.
pub fn load_catalog() -> Result<Catalog> {
    match std::env::var_os("RELCHAR_CATALOG") {
        Some(path) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.to_string_lossy())))?;
            let cat: Catalog = serde_json::from_str(&text)?;
            if cat.version != CATALOG_VERSION {
                return Err(Error::Invalid(format!("catalog version {} is not supported", cat.version)));
            }
            Ok(cat)
        }
        None => Ok(builtin_catalog()),
    }
}

impl Catalog {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// SHA-256 of the compact JSON serialization, hex encoded.
    pub fn hash(&self) -> Result<String> {
        let bytes = serde_json::to_vec(self)?;
        let digest = Sha256::digest(&bytes);
        Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
    }

    pub fn names(&self) -> Vec<String> {
        self.models.iter().map(|m| m.name.clone()).collect()
    }

    pub fn spec(&self, name: &str) -> Result<&ModelSpec> {
        self.models.iter().find(|m| m.name.eq_ignore_ascii_case(name)).ok_or_else(|| Error::UnknownModel {
            name: name.into(),
            known: self.names().join(", "),
        })
    }

    pub fn model(&self, name: &str) -> Result<Model> {
        Model::new(self.spec(name)?.clone())
    }
}

/// Built-in model by name.
pub fn model(name: &str) -> Result<Model> {
    builtin_catalog().model(name)
}

/// Equality of doubled coordinate vectors up to an integer multiple of the central weight.
pub fn congruent(a: &[i32], b: &[i32], center: Option<&[i32]>) -> bool {
    let d: Vec<i32> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    if d.iter().all(|&x| x == 0) {
        return true;
    }
    let Some(z) = center else { return false };
    let Some(k) = z.iter().position(|&x| x != 0) else { return false };
    if d[k] % z[k] != 0 {
        return false;
    }
    let m = d[k] / z[k];
    d.iter().zip(z).all(|(x, y)| *x == m * y)
}

impl Model {
    pub fn new(spec: ModelSpec) -> Result<Self> {
        let dim = spec.coords.len();
        let simple: Vec<(String, Weight, RootType)> =
            spec.roots.iter().map(|r| (r.name.clone(), r.root.clone(), r.kind)).collect();
        let datum = RootDatum::new(dim, simple)?;
        if spec.chart.lift.len() != dim {
            return Err(Error::ModelData(format!("{}: chart lift has wrong length", spec.name)));
        }
        let center = spec.center.as_deref();
        if let Some(z) = center {
            if z.len() != dim {
                return Err(Error::DimensionMismatch(z.len(), dim));
            }
            for c in &datum.positive_coroots {
                if dot(z, &c.coords) != 0 {
                    return Err(Error::ModelData(format!("{}: center is not orthogonal to {}", spec.name, c)));
                }
            }
        }
        let mut theta_index = HashMap::new();
        for (i, t) in spec.theta.iter().enumerate() {
            if t.dim() != dim {
                return Err(Error::DimensionMismatch(t.dim(), dim));
            }
            if !(1..=2).contains(&t.degree) {
                return Err(Error::ModelData(format!("{}: weight {} has degree {}", spec.name, t, t.degree)));
            }
            if !spec.chart.in_domain(&t.coords) {
                return Err(Error::ModelData(format!("{}: weight {} outside the chart domain", spec.name, t)));
            }
            if theta_index.insert(t.coords.clone(), i).is_some() {
                return Err(Error::ModelData(format!("{}: weight {} listed twice", spec.name, t)));
            }
        }
        for r in &datum.positive_coroots {
            if !spec.chart.in_domain(&r.coords) {
                return Err(Error::ModelData(format!("{}: coroot {} outside the chart domain", spec.name, r)));
            }
        }
        // Θ must be stable under every simple reflection, degrees included.
        for j in 0..datum.rank() {
            for t in &spec.theta {
                let img = datum.reflect_simple(j, t)?;
                match theta_index.get(&img.coords) {
                    Some(&k) if spec.theta[k].degree == t.degree => {}
                    _ => {
                        return Err(Error::ModelData(format!(
                            "{}: Θ is not stable under {} (image of {})",
                            spec.name, datum.simple[j].name, t
                        )))
                    }
                }
            }
        }
        let mut colors = vec![Vec::new(); datum.rank()];
        for cs in &spec.colors {
            let j = datum
                .simple_index(&cs.root)
                .ok_or_else(|| Error::ModelData(format!("{}: colors for unknown root {}", spec.name, cs.root)))?;
            if datum.simple[j].kind != RootType::T {
                return Err(Error::ModelData(format!("{}: colors given for non-T root {}", spec.name, cs.root)));
            }
            let mut resolved = Vec::new();
            for c in &cs.colors {
                let hit: Vec<&Weight> = spec.theta.iter().filter(|t| congruent(&t.coords, &c.coords, center)).collect();
                match hit.as_slice() {
                    [t] => resolved.push((*t).clone()),
                    [] => return Err(Error::ModelData(format!("{}: color {} of {} not in Θ", spec.name, c, cs.root))),
                    _ => {
                        return Err(Error::ModelData(format!(
                            "{}: color {} of {} is ambiguous modulo the center",
                            spec.name, c, cs.root
                        )))
                    }
                }
            }
            let coroot = &datum.simple[j].coroot;
            let sum = match resolved.as_slice() {
                [a] => a.clone(),
                [a, b] => a.add(b),
                _ => return Err(Error::ModelData(format!("{}: {} needs one or two colors", spec.name, cs.root))),
            };
            if !congruent(&sum.coords, &coroot.coords, center) {
                return Err(Error::ModelData(format!(
                    "{}: colors of {} do not add up to the coroot {}",
                    spec.name, cs.root, coroot
                )));
            }
            colors[j] = resolved;
        }
        for (j, s) in datum.simple.iter().enumerate() {
            if s.kind == RootType::T && colors[j].is_empty() {
                return Err(Error::ModelData(format!("{}: Type-T root {} has no colors", spec.name, s.name)));
            }
        }
        for red in &spec.reductions {
            for name in &red.levi {
                if datum.simple_index(name).is_none() {
                    return Err(Error::ModelData(format!("{}: reduction {} names unknown root {}", spec.name, red.name, name)));
                }
            }
        }
        let mut neg_map = Vec::with_capacity(spec.theta.len());
        for t in &spec.theta {
            let neg = t.neg();
            let hit: Vec<usize> = (0..spec.theta.len())
                .filter(|&k| congruent(&spec.theta[k].coords, &neg.coords, center))
                .collect();
            match hit.as_slice() {
                [k] if spec.theta[*k].degree == t.degree => neg_map.push(*k),
                _ => return Err(Error::ModelData(format!("{}: −{} has no unique partner in Θ", spec.name, t))),
            }
        }
        Ok(Model { spec, datum, colors, theta_index, neg_map })
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn dim(&self) -> usize {
        self.datum.dim
    }

    pub fn theta(&self) -> &[Weight] {
        &self.spec.theta
    }

    /// dim ρ_X: |Θ| counted with degrees.
    pub fn theta_dimension(&self) -> usize {
        self.spec.theta.iter().map(|t| t.degree as usize).sum()
    }

    pub fn theta_position(&self, c: &[i32]) -> Option<usize> {
        self.theta_index.get(c).copied()
    }

    pub fn center(&self) -> Option<&[i32]> {
        self.spec.center.as_deref()
    }

    /// |W| from the degree list: product of the untwisted degrees of G.
    pub fn weyl_order_formula(&self) -> u64 {
        self.spec.motive_g.iter().filter(|f| !f.twisted).map(|f| f.degree as u64).product()
    }

    pub fn reduction(&self, name: &str) -> Result<&Reduction> {
        self.spec.reductions.iter().find(|r| r.name.eq_ignore_ascii_case(name)).ok_or_else(|| {
            Error::Invalid(format!(
                "model {} has no reduction {name}; available: {}",
                self.spec.name,
                self.spec.reductions.iter().map(|r| r.name.as_str()).collect::<Vec<_>>().join(", ")
            ))
        })
    }

    /// Permutation of Θ induced by each simple reflection.
    pub fn theta_permutations(&self) -> Result<Vec<Vec<usize>>> {
        (0..self.datum.rank())
            .map(|j| {
                self.spec
                    .theta
                    .iter()
                    .map(|t| {
                        let img = self.datum.reflect_simple(j, t)?;
                        self.theta_position(&img.coords)
                            .ok_or_else(|| Error::ModelData(format!("image of {} leaves Θ", t)))
                    })
                    .collect()
            })
            .collect()
    }

    fn color_positions(&self) -> Vec<Vec<usize>> {
        self.colors
            .iter()
            .map(|cs| cs.iter().map(|c| self.theta_position(&c.coords).expect("resolved color")).collect())
            .collect()
    }

    /// Checks the defining conditions of Θ⁺ on a candidate set of Θ positions.
    fn satisfies(&self, set: &HashSet<usize>, perms: &[Vec<usize>], colors: &[Vec<usize>]) -> std::result::Result<(), String> {
        for (j, s) in self.datum.simple.iter().enumerate() {
            let image: HashSet<usize> = set.iter().map(|&i| perms[j][i]).collect();
            let diff: HashSet<usize> = set.difference(&image).copied().collect();
            match s.kind {
                RootType::UPsi => {
                    if !diff.is_empty() {
                        return Err(format!("not stable under {}", s.name));
                    }
                }
                RootType::T => {
                    let want: HashSet<usize> = colors[j].iter().copied().collect();
                    if diff != want {
                        return Err(format!("Θ⁺ − w Θ⁺ differs from the colors for {}", s.name));
                    }
                }
            }
        }
        Ok(())
    }

    /// Smallest subset of Θ containing the colors and satisfying the reflection conditions.
    pub fn theta_plus(&self) -> Result<ThetaPlus> {
        let perms = self.theta_permutations()?;
        let colors = self.color_positions();
        let mut set: HashSet<usize> = colors.iter().flatten().copied().collect();
        let mut queue: Vec<usize> = set.iter().copied().collect();
        while let Some(i) = queue.pop() {
            for (j, s) in self.datum.simple.iter().enumerate() {
                if s.kind == RootType::T && colors[j].contains(&i) {
                    continue;
                }
                let k = perms[j][i];
                if set.insert(k) {
                    queue.push(k);
                }
            }
        }
        self.satisfies(&set, &perms, &colors)
            .map_err(|e| Error::ModelData(format!("{}: Θ⁺ post-verification failed: {e}", self.spec.name)))?;
        let tp = self.plus_from_positions(&set);
        self.check_half(&tp)?;
        Ok(tp)
    }

    fn plus_from_positions(&self, set: &HashSet<usize>) -> ThetaPlus {
        let mut elements: Vec<Weight> = set.iter().map(|&i| self.spec.theta[i].clone()).collect();
        elements.sort();
        ThetaPlus { elements }
    }

    /// Position of the weight of Θ congruent to −θ_i modulo the center.
    pub fn negation(&self, i: usize) -> usize {
        self.neg_map[i]
    }

    /// Θ⁺ ⊔ (−Θ⁺) = Θ with degrees, negation taken modulo the center.
    pub fn check_half(&self, tp: &ThetaPlus) -> Result<()> {
        let mut hit = vec![false; self.spec.theta.len()];
        for g in &tp.elements {
            let i = self
                .theta_position(&g.coords)
                .ok_or_else(|| Error::ModelData(format!("{}: {} is not in Θ", self.spec.name, g)))?;
            for k in [i, self.neg_map[i]] {
                if hit[k] {
                    return Err(Error::ModelData(format!("{}: Θ⁺ meets −Θ⁺ at {}", self.spec.name, self.spec.theta[k])));
                }
                hit[k] = true;
            }
        }
        if hit.iter().any(|h| !h) {
            return Err(Error::ModelData(format!("{}: Θ⁺ ⊔ −Θ⁺ is not Θ", self.spec.name)));
        }
        Ok(())
    }

    /// Exhaustive search for the sets satisfying the Θ⁺ conditions.
    ///
    /// Searches all subsets of Θ when it has at most 16 weights, otherwise all
    /// sets containing exactly one weight of each ±pair (at most 16 pairs).
    /// Returns the unique inclusion-minimal solution.
    pub fn brute_force_theta_plus(&self) -> Result<ThetaPlus> {
        let n = self.spec.theta.len();
        let perms = self.theta_permutations()?;
        let colors = self.color_positions();
        let color_mask: Vec<u64> = colors.iter().map(|c| c.iter().fold(0u64, |m, &i| m | 1 << i)).collect();
        let image = |mask: u64, j: usize| -> u64 {
            let mut out = 0u64;
            let mut m = mask;
            while m != 0 {
                let i = m.trailing_zeros() as usize;
                out |= 1 << perms[j][i];
                m &= m - 1;
            }
            out
        };
        let ok = |mask: u64| -> bool {
            self.datum.simple.iter().enumerate().all(|(j, s)| {
                let diff = mask & !image(mask, j);
                match s.kind {
                    RootType::UPsi => diff == 0,
                    RootType::T => diff == color_mask[j],
                }
            })
        };
        let candidates: Box<dyn Iterator<Item = u64>> = if n <= 16 {
            Box::new(0..1u64 << n)
        } else {
            let pairs: Vec<(usize, usize)> =
                (0..n).map(|i| (i, self.neg_map[i])).filter(|(i, k)| i < k).collect();
            if pairs.len() > 16 || n > 64 {
                return Err(Error::Invalid(format!("{}: Θ is too large for exhaustive search", self.spec.name)));
            }
            Box::new((0..1u64 << pairs.len()).map(move |m| {
                pairs
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (b, &(i, k))| acc | if m >> b & 1 == 1 { 1 << k } else { 1 << i })
            }))
        };
        let solutions: Vec<u64> = candidates.filter(|&m| ok(m)).collect();
        let minimal: Vec<u64> = solutions
            .iter()
            .copied()
            .filter(|&m| !solutions.iter().any(|&o| o != m && o & m == o))
            .collect();
        match minimal.as_slice() {
            [m] => {
                let set: HashSet<usize> = (0..n).filter(|i| m >> i & 1 == 1).collect();
                Ok(self.plus_from_positions(&set))
            }
            [] => Err(Error::Uniqueness(format!("{}: no subset satisfies the conditions", self.spec.name))),
            many => Err(Error::Uniqueness(format!("{}: {} minimal solutions", self.spec.name, many.len()))),
        }
    }

    /// Δ_G(1)/Δ_{H₀/Z}(1) as a factor multiset.
    pub fn delta_ratio(&self) -> Result<Vec<MotiveFactor>> {
        let mut out = self.spec.motive_g.clone();
        for f in &self.spec.motive_h {
            let pos = out.iter().position(|g| g == f).ok_or_else(|| {
                Error::ModelData(format!("{}: {} of H₀/Z does not cancel against G", self.spec.name, f))
            })?;
            out.remove(pos);
        }
        out.sort();
        Ok(out)
    }

    /// 1/Δ_{H₀/Z}(1) as a polynomial in u.
    pub fn expected_constant(&self) -> LaurentPoly {
        self.spec.motive_h.iter().fold(LaurentPoly::one(1), |acc, f| &acc * &f.inverse_poly())
    }

    pub fn render_delta(&self) -> Result<String> {
        Ok(render_factors(&self.delta_ratio()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::count_weyl_bfs;

    #[test]
    fn catalog_builds_and_theta_dimensions() {
        let dims = [
            ("trilinear", 8),
            ("GL4xGL2", 20),
            ("GU4xGU2", 20),
            ("GSp6xGSp4", 32),
            ("GL6", 20),
            ("GU6", 20),
            ("GSp10", 32),
            ("GSp6xGL2", 16),
            ("GSO8xGL2", 16),
            ("GSO12", 32),
            ("E7", 56),
        ];
        for (name, d) in dims {
            let m = model(name).unwrap();
            assert_eq!(m.theta_dimension(), d, "{name}");
        }
    }

    #[test]
    fn weyl_orders_match_degrees() {
        for name in ["trilinear", "GL4xGL2", "GU4xGU2", "GSp6xGSp4", "GL6", "GU6", "GSp10", "GSp6xGL2", "GSO8xGL2", "GSO12"] {
            let m = model(name).unwrap();
            assert_eq!(count_weyl_bfs(&m.datum, 100_000).unwrap() as u64, m.weyl_order_formula(), "{name}");
        }
    }

    #[test]
    fn theta_plus_is_half() {
        for spec in builtin_catalog().models {
            let m = Model::new(spec).unwrap();
            let tp = m.theta_plus().unwrap_or_else(|e| panic!("{e}"));
            assert_eq!(2 * tp.dimension(), m.theta_dimension(), "{}", m.name());
        }
    }

    #[test]
    fn unknown_model_lists_known() {
        let e = model("GL7").unwrap_err();
        assert!(e.to_string().contains("GSp6xGSp4"));
    }

    #[test]
    fn render() {
        let f = vec![MotiveFactor::zeta(1), MotiveFactor::l_eta(3), MotiveFactor::zeta(1), MotiveFactor::zeta(4)];
        assert_eq!(render_factors(&f), "ζ(1)²ζ(4)L(3,η)");
    }

    #[test]
    fn bad_color_is_rejected() {
        let mut spec = trilinear();
        spec.colors[0].colors[1] = w(&[0, 2, 2, 0, 2, 0]);
        assert!(matches!(Model::new(spec), Err(Error::ModelData(_))));
    }

    #[test]
    fn json_round_trip() {
        let cat = builtin_catalog();
        let back: Catalog = serde_json::from_str(&cat.to_json().unwrap()).unwrap();
        assert_eq!(back.hash().unwrap(), cat.hash().unwrap());
    }
}
