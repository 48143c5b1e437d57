//! The verification suite: every constructive statement checked exactly on
//! its default desk-scale instance.

use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::cayley::{CayleyGraph, Explorer, SpecHash};
use crate::covers::{
    combine_covers, component_diameters, coset_cover, interval_cover, kernel_control_bound,
    lebesgue_ok, vz_closure_constant, Cover, GroupWindow,
};
use crate::cubes::{growth_lower_bound_certificate, lattice_exhaustive, Lattice};
use crate::error::Result;
use crate::group::{GroupElement, MarkedGroup, VirtuallyZStructure};
use crate::rational::{self, int, Rational};
use crate::wreath::{
    bulb_decompose, bulb_lower_bound, bulb_word_construct, Bulb, BulbProduct, WreathContext,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub elapsed_ms: u128,
    pub spec_hashes: Vec<SpecHash>,
    pub detail: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub toolkit_version: &'static str,
    pub workers: usize,
    pub budget: usize,
    pub passed: bool,
    pub checks: Vec<CheckReport>,
}

type CheckFn = fn(&Explorer, u64) -> Result<(bool, Vec<SpecHash>, Value)>;

/// `(id, title, check)` for every check, in run order.
pub const CHECKS: &[(&str, &str, CheckFn)] = &[
    (
        "bulb-lower-bound",
        "products of n bulbs with distinct indices have length at least n",
        bulb_lower_bound_check,
    ),
    (
        "bulb-decomposition",
        "short kernel words rewrite as bulbs indexed by short prefixes",
        bulb_decomposition_check,
    ),
    (
        "bulb-word-construction",
        "constructed bulb words evaluate correctly within n(k+2+4max|e|)",
        bulb_word_check,
    ),
    (
        "lattice-covering",
        "covers of {0..2}² satisfying the 3-ball hypothesis have a spanning 2-component",
        lattice_check,
    ),
    (
        "kernel-cube",
        "the 3r-cube in the kernel over ℤ² has short edges and Lip(f⁻¹) ≤ 1",
        kernel_cube_check,
    ),
    (
        "kernel-control",
        "r-components of the kernel window have diameter at most (2r+1)γ(r)",
        kernel_control_check,
    ),
    (
        "cover-combination",
        "pulled-back interval covers obey d + D⁰_K(r+2d)",
        combination_check,
    ),
    (
        "closure-bound",
        "the subgroup generated by B(1,r) in the kernel lies in B(1,8r)",
        closure_check,
    ),
    (
        "linear-growth",
        "virtually-ℤ groups satisfy γ(r) ≤ n(3nCr+1)",
        linear_growth_check,
    ),
    (
        "coset-components",
        "every r-component of the kernel window lies in one coset of the closure",
        coset_components_check,
    ),
    (
        "oracle-agreement",
        "bidirectional word lengths match ball layers; free growth matches reduced words",
        oracle_check,
    ),
];

pub fn check_ids() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.0).collect()
}

/// Runs the selected checks (all when `only` is empty). A check that
/// errors is reported as failed with its error message.
pub fn run_suite(ex: &Explorer, seed: u64, only: &[String]) -> SuiteReport {
    let checks: Vec<CheckReport> = CHECKS
        .iter()
        .filter(|(id, _, _)| only.is_empty() || only.iter().any(|o| o == id))
        .map(|&(id, title, f)| {
            let start = Instant::now();
            let (passed, spec_hashes, detail) = match f(ex, seed) {
                Ok(v) => v,
                Err(e) => (false, Vec::new(), json!({ "error": e.to_string() })),
            };
            CheckReport {
                id,
                title,
                passed,
                elapsed_ms: start.elapsed().as_millis(),
                spec_hashes,
                detail,
            }
        })
        .collect();
    SuiteReport {
        schema_version: SCHEMA_VERSION,
        toolkit_version: env!("CARGO_PKG_VERSION"),
        workers: ex.workers(),
        budget: ex.budget(),
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

fn lamplighter() -> WreathContext {
    WreathContext::lamplighter(2).expect("ℤ/2 ≀ ℤ is valid")
}

/// Nonempty subsets of `lo..=hi` with at most `max` elements.
pub fn position_sets(lo: i64, hi: i64, max: usize) -> Vec<Vec<i64>> {
    let span: Vec<i64> = (lo..=hi).collect();
    (1u32..1 << span.len())
        .filter(|m| m.count_ones() as usize <= max)
        .map(|m| {
            span.iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .map(|(_, &p)| p)
                .collect()
        })
        .collect()
}

fn bulbs_at(ctx: &WreathContext, at: &[i64]) -> Result<BulbProduct> {
    let a = ctx.first_nontrivial_fiber().clone();
    BulbProduct::new(
        ctx,
        at.iter().map(|&p| Bulb {
            index: GroupElement::Int(p),
            value: a.clone(),
        }),
    )
}

fn integers_vz(c: Option<Rational>) -> Result<(MarkedGroup, VirtuallyZStructure)> {
    let z = MarkedGroup::integers();
    let s = VirtuallyZStructure::new(&z, GroupElement::Int(1), vec![GroupElement::Int(0)], c)?;
    Ok((z, s))
}

fn z_times_c2() -> Result<(MarkedGroup, VirtuallyZStructure)> {
    let g = MarkedGroup::product(MarkedGroup::integers(), MarkedGroup::cyclic(2)?);
    let pair = |a, b| {
        GroupElement::Pair(
            Box::new(GroupElement::Int(a)),
            Box::new(GroupElement::Residue(b)),
        )
    };
    let s = VirtuallyZStructure::new(&g, pair(1, 0), vec![pair(0, 0), pair(0, 1)], Some(int(1)))?;
    Ok((g, s))
}

fn bulb_lower_bound_check(ex: &Explorer, _: u64) -> Result<(bool, Vec<SpecHash>, Value)> {
    let ctx = lamplighter();
    let mut failures = Vec::new();
    let mut checked = 0;
    for set in position_sets(-3, 3, 4) {
        let p = bulbs_at(&ctx, &set)?;
        let len = ctx.bulb_product_length(ex, &p)? as usize;
        checked += 1;
        if len < bulb_lower_bound(&p) {
            failures.push(json!({ "indices": set, "length": len }));
        }
    }
    Ok((
        failures.is_empty(),
        vec![ctx.spec_hash()],
        json!({ "products": checked, "failures": failures }),
    ))
}

/// Every word of length at most `max` over `letters` letters.
fn words(letters: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<usize>| {
                (0..letters).map(move |l| {
                    let mut v = w.clone();
                    v.push(l);
                    v
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn bulb_decomposition_check(ex: &Explorer, _: u64) -> Result<(bool, Vec<SpecHash>, Value)> {
    let ctx = lamplighter();
    let z = ctx.base();
    let mut kernel_words = 0;
    let mut failures = Vec::new();
    for w in words(ctx.generators().len(), 5) {
        let value = ctx.evaluate(&w);
        if !ctx.is_kernel(&value) {
            continue;
        }
        kernel_words += 1;
        let (p, residual) = bulb_decompose(&ctx, &w)?;
        let mut ok = residual == z.identity() && p.to_element(&ctx) == value;
        for b in p.bulbs() {
            ok &= ex.word_length(z, &b.index)? < 6;
        }
        if !ok {
            failures.push(ctx.format_word(&w));
        }
    }
    Ok((
        failures.is_empty(),
        vec![ctx.spec_hash()],
        json!({ "kernel_words": kernel_words, "failures": failures }),
    ))
}

fn bulb_word_check(ex: &Explorer, _: u64) -> Result<(bool, Vec<SpecHash>, Value)> {
    let ctx = lamplighter();
    let (_, vz) = integers_vz(None)?;
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut max_letters = 0;
    for set in position_sets(-3, 3, 7) {
        let p = bulbs_at(&ctx, &set)?;
        let w = bulb_word_construct(&ctx, ex, &vz, &p)?;
        checked += 1;
        max_letters = max_letters.max(w.letters());
        if ctx.evaluate(&w.word) != p.to_element(&ctx) || w.letters() as u64 > w.bound {
            failures.push(json!({ "indices": set, "letters": w.letters(), "bound": w.bound }));
        }
    }
    Ok((
        failures.is_empty() && checked == 127,
        vec![ctx.spec_hash()],
        json!({ "products": checked, "max_letters": max_letters, "failures": failures }),
    ))
}

fn lattice_check(ex: &Explorer, _: u64) -> Result<(bool, Vec<SpecHash>, Value)> {
    let s = lattice_exhaustive(ex, Lattice::new(2, 2)?)?;
    let ok = s.passed() && s.covers == 19683;
    Ok((ok, Vec::new(), serde_json::to_value(&s).unwrap_or_default()))
}

fn kernel_cube_check(ex: &Explorer, seed: u64) -> Result<(bool, Vec<SpecHash>, Value)> {
    let base = MarkedGroup::product(MarkedGroup::integers(), MarkedGroup::integers());
    let ctx = WreathContext::new(MarkedGroup::cyclic(2)?, base)?;
    let (k, cube, cert) = growth_lower_bound_certificate(&ctx, ex, 2, &int(2), seed)?;
    let ok = k == 2
        && cert.passed()
        && cube.pairs.len() == 36
        && cube.pairs.iter().all(|p| p.lower == p.l1)
        && cube.edges.iter().all(|e| e.upper < 6);
    let detail = json!({
        "k": k,
        "gamma": cert.gamma,
        "edges": cube.edges.len(),
        "max_edge_upper": cube.max_edge_upper(),
        "pairs": cube.pairs.len(),
        "index_table": cert.index_table,
    });
    Ok((ok, vec![ctx.spec_hash()], detail))
}

fn kernel_window<'a>(
    ctx: &'a WreathContext,
    ex: &'a Explorer,
) -> Result<GroupWindow<'a, WreathContext>> {
    GroupWindow::ball(ctx, ex, &int(10), |e| ctx.is_kernel(e))
}

fn kernel_control_check(ex: &Explorer, _: u64) -> Result<(bool, Vec<SpecHash>, Value)> {
    let ctx = lamplighter();
    let w = kernel_window(&ctx, ex)?;
    let cover = Cover::new(w.points().len(), vec![(0..w.points().len()).collect()])?;
    let mut ok = true;
    let mut rows = Vec::new();
    for r in 1..=3 {
        let r = int(r);
        let measured = component_diameters(&w, &cover, &r)?[0];
        let bound = kernel_control_bound(ex, &ctx, &r)?;
        ok &= measured <= bound;
        rows.push(json!({ "r": r.to_string(), "measured": measured.to_string(), "bound": bound.to_string() }));
    }
    Ok((
        ok,
        vec![ctx.spec_hash()],
        json!({ "window_points": w.points().len(), "radii": rows }),
    ))
}

fn combination_check(ex: &Explorer, _: u64) -> Result<(bool, Vec<SpecHash>, Value)> {
    let ctx = lamplighter();
    let r = int(2);
    let w = GroupWindow::ball(&ctx, ex, &int(8), |_| true)?;
    let (iv, ic) = interval_cover(-20, 20, 3, 1)?;
    let i_ok = lebesgue_ok(&iv, &ic, &r)?.ok;
    let d = component_diameters(&iv, &ic, &r)?
        .into_iter()
        .max()
        .unwrap_or_default();
    let i_points: Vec<_> = (-20..=20)
        .map(|x| ctx.embed_base(&GroupElement::Int(x)))
        .collect();
    let z = ctx.base();
    let d0k = |s: &Rational| -> Result<Rational> {
        Ok((int(2) * s + int(1)) * int(ex.growth(z, s)? as i64))
    };
    let out = combine_covers(&w, |x| ctx.project(x), &i_points, &ic, &d, d0k, &r)?;
    let measured = component_diameters(&w, &out.cover, &r)?;
    let max = measured.iter().copied().max().unwrap_or_default();
    let ok = i_ok && max <= out.predicted;
    let detail = json!({
        "interval_cover_lebesgue": i_ok,
        "d": d.to_string(),
        "predicted": out.predicted.to_string(),
        "measured": measured.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        "window_points": w.points().len(),
    });
    Ok((ok, vec![ctx.spec_hash(), z.spec_hash()], detail))
}

fn closure_check(ex: &Explorer, _: u64) -> Result<(bool, Vec<SpecHash>, Value)> {
    let ctx = lamplighter();
    let (_, vz) = integers_vz(Some(int(1)))?;
    let l = vz_closure_constant(&vz)?;
    let w = kernel_window(&ctx, ex)?;
    let mut ok = l == int(8);
    let mut rows = Vec::new();
    for r in 2..=4 {
        let r = int(r);
        let c = coset_cover(&w, ex, |e| ctx.is_kernel(e), &r)?;
        ok &= int(c.max_length as i64) < l * r;
        rows.push(
            json!({ "r": r.to_string(), "closure": c.closure.len(), "max_length": c.max_length }),
        );
    }
    Ok((
        ok,
        vec![ctx.spec_hash()],
        json!({ "L": l.to_string(), "radii": rows }),
    ))
}

fn coset_components_check(ex: &Explorer, _: u64) -> Result<(bool, Vec<SpecHash>, Value)> {
    let ctx = lamplighter();
    let w = kernel_window(&ctx, ex)?;
    let mut ok = true;
    let mut rows = Vec::new();
    for r in 2..=4 {
        let r = int(r);
        let c = coset_cover(&w, ex, |e| ctx.is_kernel(e), &r)?;
        let inside = c.components_in_cosets(&w)?;
        ok &= inside;
        rows.push(
            json!({ "r": r.to_string(), "cosets": c.cosets.len(), "components_in_cosets": inside }),
        );
    }
    Ok((
        ok,
        vec![ctx.spec_hash()],
        json!({ "window_points": w.points().len(), "radii": rows }),
    ))
}

fn linear_growth_check(ex: &Explorer, _: u64) -> Result<(bool, Vec<SpecHash>, Value)> {
    let mut ok = true;
    let mut rows = Vec::new();
    let mut hashes = Vec::new();
    for (name, (g, vz)) in [
        ("integers", integers_vz(Some(int(1)))?),
        ("integers x Z/2", z_times_c2()?),
    ] {
        let c = vz.distortion_constant(&g, ex, 12)?;
        vz.verify_on_ball(&g, &ex.ball(&g, &int(7))?)?;
        for r in 1..=6 {
            let r = int(r);
            let gamma = ex.growth(&g, &r)?;
            let bound = vz.linear_growth_bound(&c, &r);
            ok &= int(gamma as i64) <= bound;
            rows.push(json!({ "group": name, "r": r.to_string(), "gamma": gamma, "bound": bound.to_string() }));
        }
        hashes.push(g.spec_hash());
    }
    Ok((ok, hashes, json!({ "rows": rows })))
}

fn oracle_check(ex: &Explorer, _: u64) -> Result<(bool, Vec<SpecHash>, Value)> {
    let ctx = lamplighter();
    let ball = ex.ball(&ctx, &int(8))?;
    let mut ok = true;
    let mut mismatches = 0;
    for (e, l) in ball.iter() {
        if ex.word_length(&ctx, e)? != l {
            ok = false;
            mismatches += 1;
        }
    }
    for r in 1..=8 {
        let b = ex.ball(&ctx, &int(r))?;
        for (e, l) in ball.iter() {
            if rational::lt(l as u64, &int(r)) != b.contains(e) {
                ok = false;
                mismatches += 1;
            }
        }
    }
    let f2 = MarkedGroup::free(2);
    let mut growth = Vec::new();
    for r in 1..=5u32 {
        let g = ex.growth(&f2, &int(r as i64))?;
        ok &= g == 2 * 3usize.pow(r - 1) - 1;
        growth.push(g);
    }
    Ok((
        ok,
        vec![ctx.spec_hash(), f2.spec_hash()],
        json!({ "ball_size": ball.len(), "mismatches": mismatches, "free_growth": growth }),
    ))
}
