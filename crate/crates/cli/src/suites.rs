//! Verification suites. Every acceptance criterion is one or more checks here.

use std::str::FromStr;
use std::time::Instant;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use relchar_core::lattice::Weight;
use relchar_core::matverify;
use relchar_core::models::{congruent, Model};
use relchar_core::padic;
use relchar_core::ratfun::{rat_string, Rat};
use relchar_core::weylsum::{self, SatakePoint};
use relchar_core::Error;

use crate::goldens;
use crate::report::CheckResult;

/// Largest Weyl group handled by the symbolic constant check.
pub const SYMBOLIC_WEYL_LIMIT: u64 = 384;
/// Random Weyl elements tried per point in the invariance checks.
pub const INVARIANCE_ELEMENTS: usize = 2;
/// Word length of the random Weyl elements.
pub const WORD_LENGTH: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    ThetaPlus,
    WeylSum,
    Symbolic,
    Antisym,
    Cosets,
    BRatio,
    Padic,
    Matrix,
    Delta,
    Relchar,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::ThetaPlus,
        Suite::WeylSum,
        Suite::Symbolic,
        Suite::Antisym,
        Suite::Cosets,
        Suite::BRatio,
        Suite::Padic,
        Suite::Matrix,
        Suite::Delta,
        Suite::Relchar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::ThetaPlus => "thetaplus",
            Suite::WeylSum => "weylsum",
            Suite::Symbolic => "symbolic",
            Suite::Antisym => "antisym",
            Suite::Cosets => "cosets",
            Suite::BRatio => "bratio",
            Suite::Padic => "padic",
            Suite::Matrix => "matrix",
            Suite::Delta => "delta",
            Suite::Relchar => "relchar",
        }
    }

    /// The acceptance criterion the suite covers.
    pub fn criterion(self) -> u8 {
        Suite::ALL.iter().position(|s| *s == self).map(|i| i as u8 + 1).unwrap()
    }

    pub fn from_criterion(n: u8) -> Option<Suite> {
        Suite::ALL.get((n as usize).checked_sub(1)?).copied()
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL.iter().copied().find(|x| x.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
            format!("unknown suite `{s}`; expected one of {}, all", names.join(", "))
        })
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub points: usize,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options { points: 5, seed: 1 }
    }
}

/// A generator seeded from the run seed and a label, so that results do not
/// depend on which other checks ran.
fn rng_for(seed: u64, label: &str) -> ChaCha8Rng {
    let h = label.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

fn timed(f: impl FnOnce() -> CheckResult) -> CheckResult {
    let t = Instant::now();
    let mut r = f();
    r.millis = Some(t.elapsed().as_millis() as u64);
    r
}

fn residual(value: &str, expected: &str) -> Option<String> {
    let v = Rat::from_str(value).ok()?;
    let e = Rat::from_str(expected).ok()?;
    Some(rat_string(&(v - e)))
}

pub fn run(suite: Suite, models: &[Model], opts: &Options) -> Vec<CheckResult> {
    match suite {
        Suite::ThetaPlus => theta_plus(models),
        Suite::WeylSum => weyl_sum(models, opts),
        Suite::Symbolic => symbolic(models),
        Suite::Antisym => antisym(models),
        Suite::Cosets => cosets(models, opts),
        Suite::BRatio => b_ratio(models, opts),
        Suite::Padic => padic_checks(),
        Suite::Matrix => matrix(models),
        Suite::Delta => delta(models),
        Suite::Relchar => relchar(models, opts),
    }
}

pub fn run_all(models: &[Model], opts: &Options) -> Vec<CheckResult> {
    Suite::ALL.iter().flat_map(|&s| run(s, models, opts)).collect()
}

fn set_matches(got: &[Vec<i32>], want: &[Vec<i32>], center: Option<&[i32]>) -> Result<(), String> {
    if let Some(w) = want.iter().find(|w| !got.iter().any(|g| congruent(g, w, center))) {
        return Err(format!("missing {}", Weight::doubled(w)));
    }
    if let Some(g) = got.iter().find(|g| !want.iter().any(|w| congruent(g, w, center))) {
        return Err(format!("unexpected {}", Weight::doubled(g)));
    }
    Ok(())
}

fn theta_plus(models: &[Model]) -> Vec<CheckResult> {
    let c = Suite::ThetaPlus.criterion();
    let mut out = Vec::new();
    for m in models {
        let name = m.name();
        out.push(timed(|| {
            let r = CheckResult::new(c, "thetaplus", Some(name), "Θ⁺ against the recorded set");
            let Some(want) = goldens::theta_plus(name) else {
                return r.skip("no recorded Θ⁺ for this model");
            };
            match m.theta_plus() {
                Ok(tp) => {
                    let got: Vec<Vec<i32>> = tp.elements.iter().map(|w| w.coords.clone()).collect();
                    match set_matches(&got, &want, m.center()) {
                        Ok(()) => r.pass(format!("{} weights, dimension {}", tp.len(), tp.dimension())),
                        Err(e) => r.fail(e),
                    }
                }
                Err(e) => r.fail(e.to_string()),
            }
        }));
        out.push(timed(|| {
            let r = CheckResult::new(c, "thetaplus", Some(name), "exhaustive search agrees and is unique");
            match (m.brute_force_theta_plus(), m.theta_plus()) {
                (Ok(b), Ok(t)) => r.verdict(b == t, format!("unique minimal solution with {} weights", b.len())),
                (Err(Error::Invalid(e)), _) => r.skip(e),
                (Err(e), _) | (_, Err(e)) => r.fail(e.to_string()),
            }
        }));
    }
    out
}

fn weyl_sum(models: &[Model], opts: &Options) -> Vec<CheckResult> {
    let c = Suite::WeylSum.criterion();
    models
        .iter()
        .map(|m| {
            timed(|| {
                let r = CheckResult::new(c, "weylsum", Some(m.name()), format!("Σ_w c_WS(wθ) at {} points", opts.points));
                let mut rng = rng_for(opts.seed, &format!("weylsum/{}", m.name()));
                match weylsum::weyl_sum_constant_sampled(m, opts.points, &mut rng) {
                    Ok(rep) => {
                        let bad = rep.points.iter().find(|p| !p.ok);
                        let res = match bad {
                            Some(p) => residual(&p.value, &p.expected),
                            None => Some("0".into()),
                        };
                        r.verdict(rep.passed, format!("|W| = {}, constant {}", rep.weyl_order, rep.expected)).with_residual(res)
                    }
                    Err(e) => r.fail(e.to_string()),
                }
            })
        })
        .collect()
}

fn symbolic(models: &[Model]) -> Vec<CheckResult> {
    let c = Suite::Symbolic.criterion();
    models
        .iter()
        .filter(|m| m.weyl_order_formula() <= SYMBOLIC_WEYL_LIMIT)
        .map(|m| {
            timed(|| {
                let r = CheckResult::new(c, "symbolic", Some(m.name()), "symbolic Weyl sum is the constant");
                match weylsum::weyl_sum_symbolic(m) {
                    Ok(f) => r.pass(format!("|W| = {}, sum = {}", m.weyl_order_formula(), f.numerator().render(&["u"]))),
                    Err(e) => r.fail(e.to_string()),
                }
            })
        })
        .collect()
}

fn antisym(models: &[Model]) -> Vec<CheckResult> {
    let c = Suite::Antisym.criterion();
    let mut out = Vec::new();
    for m in models {
        for red in &m.spec.reductions {
            out.push(timed(|| {
                let r = CheckResult::new(c, "antisym", Some(m.name()), format!("antisymmetrization for {}", red.name));
                let rep = match weylsum::antisym_vanish_check(m, &red.name, true) {
                    Err(Error::Invalid(_)) => weylsum::antisym_vanish_check(m, &red.name, false),
                    other => other,
                };
                match rep {
                    Ok(rep) => {
                        let verdicts: Vec<String> =
                            rep.powers.iter().map(|p| format!("u^{}: {:?}", p.power, p.verdict)).collect();
                        let mode = if rep.full_expansion { "with Levi denominator" } else { "Θ₁⁺ product" };
                        r.verdict(rep.passed, format!("{mode}; {}; quotient {}", verdicts.join(", "), rep.quotient))
                    }
                    Err(e) => r.fail(e.to_string()),
                }
            }));
        }
    }
    out
}

fn cosets(models: &[Model], opts: &Options) -> Vec<CheckResult> {
    let c = Suite::Cosets.criterion();
    let mut out = Vec::new();
    for m in models {
        for red in &m.spec.reductions {
            out.push(timed(|| {
                let r = CheckResult::new(c, "cosets", Some(m.name()), format!("coset reduction {}", red.name));
                let mut rng = rng_for(opts.seed, &format!("cosets/{}", red.name));
                let rep = weylsum::coset_points(m, &red.name, opts.points, &mut rng)
                    .and_then(|pts| weylsum::coset_reduction_check(m, &red.name, &pts));
                match rep {
                    Ok(rep) => {
                        let res = rep.points.iter().find(|p| !p.ok).and_then(|p| residual(&p.coset_sum, "1"));
                        r.verdict(
                            rep.passed,
                            format!("{} cosets, subgroup order {}, {} points", rep.cosets, rep.subgroup_order, rep.points.len()),
                        )
                        .with_residual(res.or(Some("0".into())))
                    }
                    Err(e) => r.fail(e.to_string()),
                }
            }));
        }
    }
    out
}

fn b_ratio(models: &[Model], opts: &Options) -> Vec<CheckResult> {
    let c = Suite::BRatio.criterion();
    let n = opts.points.min(3);
    let mut out = Vec::new();
    for m in models {
        for (j, s) in m.datum.simple.iter().enumerate() {
            out.push(timed(|| {
                let r = CheckResult::new(c, "bratio", Some(m.name()), format!("I_α ratio for {} at {n} points", s.name));
                let mut rng = rng_for(opts.seed, &format!("bratio/{}/{}", m.name(), s.name));
                for _ in 0..n {
                    match weylsum::with_resampling(m, &mut rng, 1, |p| weylsum::b_ratio_consistency(m, j, p)) {
                        Ok((_, chk)) if chk.ok => {}
                        Ok((_, chk)) => {
                            return r.fail(format!("{} vs {}", chk.lhs, chk.rhs)).with_residual(residual(&chk.lhs, &chk.rhs))
                        }
                        Err(e) => return r.fail(e.to_string()),
                    }
                }
                r.pass(format!("{:?} root", s.kind))
            }));
        }
    }
    out
}

fn padic_checks() -> Vec<CheckResult> {
    let c = Suite::Padic.criterion();
    let t = Instant::now();
    let checks = padic::run_all();
    let ms = t.elapsed().as_millis() as u64;
    let mut out: Vec<CheckResult> =
        checks.into_iter().map(|k| CheckResult::new(c, "padic", None, k.name).verdict(k.ok, k.detail)).collect();
    if let Some(first) = out.first_mut() {
        first.millis = Some(ms);
    }
    out
}

fn matrix(models: &[Model]) -> Vec<CheckResult> {
    let c = Suite::Matrix.criterion();
    let mut out = Vec::new();
    for m in models {
        let t = Instant::now();
        let reps = matverify::verify_model(m);
        let ms = t.elapsed().as_millis() as u64;
        for (i, rep) in reps.into_iter().enumerate() {
            let mut r = CheckResult::new(c, "matrix", Some(m.name()), format!("{} ({:?})", rep.label, rep.origin));
            r = if rep.detail.starts_with("skipped") { r.skip(rep.detail) } else { r.verdict(rep.ok, rep.detail) };
            if i == 0 {
                r.millis = Some(ms);
            }
            out.push(r);
        }
        let r = CheckResult::new(c, "matrix", Some(m.name()), "η is unimodular");
        out.push(match matverify::unimodularity_check(m) {
            Ok(u) => r.pass(format!(
                "det = {:?}, integral inverse{}",
                u.determinants,
                match u.matches_displayed_inverse {
                    Some(true) => ", equal to the displayed inverse",
                    _ => "",
                }
            )),
            Err(Error::Invalid(e)) => r.skip(e),
            Err(e) => r.fail(e.to_string()),
        });
    }
    out
}

fn delta(models: &[Model]) -> Vec<CheckResult> {
    let c = Suite::Delta.criterion();
    models
        .iter()
        .filter_map(|m| m.spec.table_row.map(|row| (m, row)))
        .map(|(m, row)| {
            let r = CheckResult::new(c, "delta", Some(m.name()), format!("Δ of table row {row}"));
            let Some((zetas, etas)) = goldens::table_delta(row) else {
                return r.skip("no recorded row");
            };
            match m.delta_ratio() {
                Ok(f) => {
                    let mut gz: Vec<u32> = f.iter().filter(|x| !x.twisted).map(|x| x.degree).collect();
                    let mut ge: Vec<u32> = f.iter().filter(|x| x.twisted).map(|x| x.degree).collect();
                    gz.sort();
                    ge.sort();
                    let ok = gz == zetas && ge == etas;
                    let rendered = relchar_core::models::render_factors(&f);
                    if ok {
                        r.pass(rendered)
                    } else {
                        r.fail(format!("computed {rendered}, recorded zeta degrees {zetas:?}, η degrees {etas:?}"))
                    }
                }
                Err(e) => r.fail(e.to_string()),
            }
        })
        .collect()
}

/// A nonzero dominant coweight inside the chart domain, if an easy one exists.
pub fn sample_coweight(m: &Model) -> Option<Weight> {
    let zero = Weight::doubled(&vec![0; m.dim()]);
    let mut candidates: Vec<Weight> = vec![m.datum.rho_vee.clone()];
    candidates.extend(m.datum.positive_coroots.iter().cloned());
    candidates.into_iter().find(|l| {
        let l = Weight::doubled(&l.coords);
        l != zero && weylsum::check_admissible_coweight(m, &l).is_ok()
    })
}

fn relchar(models: &[Model], opts: &Options) -> Vec<CheckResult> {
    let c = Suite::Relchar.criterion();
    let mut out = Vec::new();
    for m in models {
        out.push(timed(|| {
            let r = CheckResult::new(c, "relchar", Some(m.name()), format!("two assemblies agree at {} points", opts.points));
            let mut rng = rng_for(opts.seed, &format!("relchar/{}", m.name()));
            for _ in 0..opts.points {
                match weylsum::with_resampling(m, &mut rng, 1, |p| weylsum::relchar_assemblies(m, p)) {
                    Ok((_, (a, b))) if a == b => {}
                    Ok((_, (a, b))) => {
                        return r.fail(format!("{} vs {}", rat_string(&a), rat_string(&b))).with_residual(Some(rat_string(&(a - b))))
                    }
                    Err(e) => return r.fail(e.to_string()),
                }
            }
            r.pass("exact agreement").with_residual(Some("0".into()))
        }));
        out.push(timed(|| ws_invariance(m, opts)));
    }
    out
}

fn ws_invariance(m: &Model, opts: &Options) -> CheckResult {
    let c = Suite::Relchar.criterion();
    let heavy = m.weyl_order_formula() > 100_000;
    let npoints = if heavy { 1 } else { opts.points.min(3) };
    let n_images = if heavy { 1 } else { INVARIANCE_ELEMENTS };
    let r = CheckResult::new(c, "relchar", Some(m.name()), format!("ws_value is W-invariant at {npoints} points"));
    let mut rng = rng_for(opts.seed, &format!("ws/{}", m.name()));
    let zero = Weight::doubled(&vec![0; m.dim()]);
    let mut lambdas = vec![zero.clone()];
    lambdas.extend(sample_coweight(m));
    let constant = m.expected_constant();
    for _ in 0..npoints {
        // Fourth powers keep the transformed point rational for every chart.
        let (p, base0) = match weylsum::with_resampling(m, &mut rng, 4, |p| weylsum::ws_value(m, &zero, p)) {
            Ok(x) => x,
            Err(e) => return r.fail(e.to_string()),
        };
        let want0 = match constant.eval(std::slice::from_ref(&p.u)) {
            Ok(v) => v,
            Err(e) => return r.fail(e.to_string()),
        };
        let images: Vec<SatakePoint> = match (0..n_images)
            .map(|_| {
                let w = m.datum.random_element(&mut rng, WORD_LENGTH);
                p.transform(m, &w)
            })
            .collect::<Result<Vec<_>, _>>()
        {
            Ok(v) => v,
            Err(e) => return r.fail(e.to_string()),
        };
        for l in &lambdas {
            let base = if l == &zero {
                base0.clone()
            } else {
                match weylsum::ws_value(m, l, &p) {
                    Ok(v) => v,
                    Err(e) => return r.fail(e.to_string()),
                }
            };
            if l == &zero && base != want0 {
                return r
                    .fail(format!("value at t = 1 is {}, expected {}", rat_string(&base), rat_string(&want0)))
                    .with_residual(Some(rat_string(&(base - want0))));
            }
            // A vanishing value would make the invariance check vacuous.
            if l != &zero && base.is_zero() {
                return r.fail(format!("λ = {l}: value vanishes at the point"));
            }
            // For large groups the λ = 0 images repeat the constant check of the Weyl sum suite.
            if heavy && l == &zero && lambdas.len() > 1 {
                continue;
            }
            for q in &images {
                match weylsum::ws_value(m, l, q) {
                    Ok(v) if v == base => {}
                    Ok(v) => {
                        return r
                            .fail(format!("λ = {l}: {} vs {}", rat_string(&v), rat_string(&base)))
                            .with_residual(Some(rat_string(&(v - base))))
                    }
                    Err(e) => return r.fail(e.to_string()),
                }
            }
        }
    }
    let ls: Vec<String> = lambdas.iter().map(|l| l.to_string()).collect();
    r.pass(format!("λ ∈ {{{}}}, {n_images} Weyl images per point", ls.join(", "))).with_residual(Some(Rat::zero().to_string()))
}

