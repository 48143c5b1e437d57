use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;
use crate::cayley::Explorer;
use crate::group::{GroupElement, MarkedGroup, VirtuallyZStructure};
use crate::rational::int;
use crate::wreath::{WreathContext, WreathElement};

fn line(points: &[i64]) -> L1Points {
    L1Points::new(points.iter().map(|&x| vec![x]).collect())
}

fn l2() -> WreathContext {
    WreathContext::lamplighter(2).unwrap()
}

fn lamps(ctx: &WreathContext, at: &[i64], cursor: i64) -> WreathElement {
    let a = ctx.first_nontrivial_fiber().clone();
    WreathElement {
        lamps: at
            .iter()
            .map(|&p| (GroupElement::Int(p), a.clone()))
            .collect(),
        cursor: GroupElement::Int(cursor),
    }
}

#[test]
fn cover_must_cover() {
    assert!(Cover::new(3, vec![vec![0, 1]]).is_err());
    assert!(Cover::new(2, vec![vec![0, 2]]).is_err());
    let c = Cover::new(3, vec![vec![2, 0, 0], vec![1]]).unwrap();
    assert_eq!(c.parts(), &[vec![0, 2], vec![1]]);
    assert_eq!(
        Cover::from_labels(&[1, 0, 1], 2).unwrap(),
        Cover::new(3, vec![vec![1], vec![0, 2]]).unwrap()
    );
}

#[test]
fn r_component_examples() {
    let v = line(&[0, 1, 5, 6]);
    let all = [0, 1, 2, 3];
    assert_eq!(
        r_components(&v, &all, &int(2)).unwrap(),
        vec![vec![0, 1], vec![2, 3]]
    );
    assert_eq!(
        r_components(&v, &all, &int(7)).unwrap(),
        vec![vec![0, 1, 2, 3]]
    );
    // the relation is strict: distance 4 does not join at r = 4
    assert_eq!(r_components(&v, &all, &int(4)).unwrap().len(), 2);
    assert!(r_components(&v, &all, &int(0)).is_err());
}

#[test]
fn kernel_points_are_separated() {
    let ctx = l2();
    let ex = Explorer::new();
    let w = GroupWindow::ball(&ctx, &ex, &int(4), |e| ctx.is_kernel(e)).unwrap();
    let all: Vec<usize> = (0..w.len()).collect();
    assert_eq!(w.len(), 4);
    let classes = r_components(&w, &all, &int(1)).unwrap();
    assert_eq!(classes.len(), w.len());
}

#[test]
fn lebesgue_examples() {
    let v = L1Points::interval(0, 9);
    let c = Cover::new(10, vec![(0..=5).collect(), (4..=9).collect()]).unwrap();
    assert!(lebesgue_ok(&v, &c, &int(2)).unwrap().ok);
    let bad = lebesgue_ok(&v, &c, &int(4)).unwrap();
    assert!(!bad.ok);
    // the ball of radius 4 about 3 is 0..=6, straddling the seam
    assert_eq!(bad.witness, Some(3));
    let whole = Cover::new(10, vec![(0..10).collect()]).unwrap();
    for r in 1..20 {
        assert!(lebesgue_ok(&v, &whole, &int(r)).unwrap().ok);
    }
}

#[test]
fn diameter_examples() {
    let v = line(&[0, 1, 5, 6]);
    let c = Cover::new(4, vec![vec![0, 1, 2, 3]]).unwrap();
    assert_eq!(component_diameters(&v, &c, &int(2)).unwrap(), vec![int(1)]);
    let v = L1Points::interval(0, 5);
    let c = Cover::new(6, vec![(0..6).collect()]).unwrap();
    assert_eq!(component_diameters(&v, &c, &int(2)).unwrap(), vec![int(5)]);
}

#[test]
fn kernel_window_diameter_within_bound() {
    let ctx = l2();
    let ex = Explorer::new();
    let w = GroupWindow::ball(&ctx, &ex, &int(6), |e| ctx.is_kernel(e)).unwrap();
    let c = Cover::new(w.len(), vec![(0..w.len()).collect()]).unwrap();
    let v = component_diameters(&w, &c, &int(2)).unwrap()[0];
    let bound = kernel_control_bound(&ex, &ctx, &int(2)).unwrap();
    assert_eq!(bound, int(15));
    assert!(v <= bound, "{v} > {bound}");
}

#[test]
fn group_window_distances_match_bfs() {
    let ctx = l2();
    let ex = Explorer::new();
    let w = GroupWindow::ball(&ctx, &ex, &int(4), |_| true).unwrap();
    let plain = GroupWindow::new(&ctx, &ex, w.points().to_vec());
    assert!(w.is_tabulated() && !plain.is_tabulated());
    for i in 0..w.len() {
        for j in 0..w.len() {
            assert_eq!(w.dist(i, j).unwrap(), plain.dist(i, j).unwrap());
        }
    }
    w.check_axioms().unwrap();
}

#[test]
fn kernel_control_bound_examples() {
    let ex = Explorer::new();
    let z = l2();
    assert_eq!(kernel_control_bound(&ex, &z, &int(2)).unwrap(), int(15));
    assert_eq!(kernel_control_bound(&ex, &z, &int(1)).unwrap(), int(3));
    let f2 = WreathContext::new(MarkedGroup::cyclic(2).unwrap(), MarkedGroup::free(2)).unwrap();
    assert_eq!(kernel_control_bound(&ex, &f2, &int(2)).unwrap(), int(25));
}

#[test]
fn coset_cover_examples() {
    let ctx = l2();
    let ex = Explorer::new();
    let w = GroupWindow::ball(&ctx, &ex, &int(6), |e| ctx.is_kernel(e)).unwrap();
    let k = |e: &WreathElement| ctx.is_kernel(e);

    let c2 = coset_cover(&w, &ex, k, &int(2)).unwrap();
    assert_eq!(c2.generators, vec![ctx.identity(), lamps(&ctx, &[0], 0)]);
    assert_eq!(c2.closure.len(), 2);
    assert_eq!(c2.max_length, 1);

    let c4 = coset_cover(&w, &ex, k, &int(4)).unwrap();
    let configs: BTreeSet<BTreeSet<i64>> = c4
        .closure
        .iter()
        .map(|e| {
            assert!(ctx.is_kernel(e));
            e.lamps
                .keys()
                .map(|g| match g {
                    GroupElement::Int(v) => *v,
                    _ => unreachable!(),
                })
                .collect()
        })
        .collect();
    assert_eq!(configs.len(), 8);
    assert!(configs
        .iter()
        .all(|s| s.iter().all(|p| (-1..=1).contains(p))));
    assert_eq!(c4.max_length, 7);
    assert!(c4.components_in_cosets(&w).unwrap());

    let c1 = coset_cover(&w, &ex, k, &int(1)).unwrap();
    assert_eq!(c1.closure, vec![ctx.identity()]);
    assert_eq!(c1.cosets.len(), w.len());
}

#[test]
fn coset_closure_respects_budget() {
    let ctx = l2();
    let ex = Explorer::new();
    let w = GroupWindow::ball(&ctx, &ex, &int(4), |e| ctx.is_kernel(e)).unwrap();
    // the kernel generated by B(1, 6) has 2^5 elements
    let tight = Explorer::new().with_budget(10);
    let err = coset_cover(&w, &tight, |e| ctx.is_kernel(e), &int(6)).unwrap_err();
    assert!(matches!(err, crate::Error::Budget { .. }));
}

#[test]
fn closure_constant_examples() {
    let z = MarkedGroup::integers();
    let one = |c: i64| {
        VirtuallyZStructure::new(
            &z,
            GroupElement::Int(1),
            vec![GroupElement::Int(0)],
            Some(int(c)),
        )
        .unwrap()
    };
    assert_eq!(vz_closure_constant(&one(1)).unwrap(), int(8));
    assert_eq!(vz_closure_constant(&one(2)).unwrap(), int(14));
    let zz2 = MarkedGroup::product(MarkedGroup::integers(), MarkedGroup::cyclic(2).unwrap());
    let pair = |a, b| {
        GroupElement::Pair(
            Box::new(GroupElement::Int(a)),
            Box::new(GroupElement::Residue(b)),
        )
    };
    let two =
        VirtuallyZStructure::new(&zz2, pair(1, 0), vec![pair(0, 0), pair(0, 1)], Some(int(1)))
            .unwrap();
    assert_eq!(vz_closure_constant(&two).unwrap(), int(24));
    let undeclared =
        VirtuallyZStructure::new(&z, GroupElement::Int(1), vec![GroupElement::Int(0)], None)
            .unwrap();
    assert!(matches!(
        vz_closure_constant(&undeclared),
        Err(crate::Error::Precondition(_))
    ));
}

#[test]
fn interval_cover_control() {
    let (v, c) = interval_cover(-20, 20, 3, 1).unwrap();
    assert_eq!(c.parts().len(), 2);
    assert!(lebesgue_ok(&v, &c, &int(2)).unwrap().ok);
    assert!(!lebesgue_ok(&v, &c, &int(3)).unwrap().ok);
    let d = component_diameters(&v, &c, &int(2)).unwrap();
    assert_eq!(d.iter().max().copied().unwrap(), int(4));
}

#[test]
fn combine_on_lamplighter() {
    let ctx = l2();
    let ex = Explorer::new();
    let w = GroupWindow::ball(&ctx, &ex, &int(8), |_| true).unwrap();
    let (iv, ic) = interval_cover(-20, 20, 3, 1).unwrap();
    let i_points: Vec<WreathElement> = (-20..=20)
        .map(|x| ctx.embed_base(&GroupElement::Int(x)))
        .collect();
    let d = component_diameters(&iv, &ic, &int(2))
        .unwrap()
        .into_iter()
        .max()
        .unwrap();
    let z = MarkedGroup::integers();
    let gamma = |s: &Rational| -> crate::Result<Rational> {
        Ok((int(2) * s + int(1)) * int(ex.growth(&z, s)? as i64))
    };
    let out = combine_covers(&w, |x| ctx.project(x), &i_points, &ic, &d, gamma, &int(2)).unwrap();
    assert_eq!(out.predicted, int(403));
    let measured = component_diameters(&w, &out.cover, &int(2)).unwrap();
    assert!(measured.iter().all(|m| *m <= out.predicted));
}

#[test]
fn combine_rejects_non_retraction() {
    let ctx = l2();
    let ex = Explorer::new();
    let w = GroupWindow::ball(&ctx, &ex, &int(3), |_| true).unwrap();
    let i_points: Vec<WreathElement> = (-5..=5)
        .map(|x| ctx.embed_base(&GroupElement::Int(x)))
        .collect();
    let (_, ic) = interval_cover(-5, 5, 3, 1).unwrap();
    let zero = |_: &Rational| Ok(int(0));
    // forgetting the cursor is not a retraction onto the base
    let shift =
        |x: &WreathElement| ctx.mul(&ctx.project(x), &ctx.embed_base(&GroupElement::Int(1)));
    let err = combine_covers(&w, shift, &i_points, &ic, &int(4), zero, &int(2)).unwrap_err();
    assert!(matches!(err, crate::Error::InvalidInput(_)));
    // a window of I too small for the projection
    let small: Vec<WreathElement> = vec![ctx.identity()];
    let one = Cover::new(1, vec![vec![0]]).unwrap();
    let err =
        combine_covers(&w, |x| ctx.project(x), &small, &one, &int(0), zero, &int(2)).unwrap_err();
    assert!(matches!(err, crate::Error::InvalidInput(_)));
}

#[test]
fn combine_with_trivial_kernel() {
    let z = MarkedGroup::integers();
    let ex = Explorer::new();
    let w = GroupWindow::ball(&z, &ex, &int(11), |_| true).unwrap();
    let (iv, ic) = interval_cover(-10, 10, 3, 1).unwrap();
    let pts: Vec<GroupElement> = (-10..=10).map(GroupElement::Int).collect();
    assert_eq!(w.points(), &pts[..]);
    let d = component_diameters(&iv, &ic, &int(2))
        .unwrap()
        .into_iter()
        .max()
        .unwrap();
    let out = combine_covers(&w, |x| x.clone(), &pts, &ic, &d, |_| Ok(int(0)), &int(2)).unwrap();
    assert_eq!(out.predicted, d);
    let measured = component_diameters(&w, &out.cover, &int(2)).unwrap();
    assert!(measured.iter().all(|m| *m <= out.predicted));
    assert_eq!(z.identity(), GroupElement::Int(0));
}

#[test]
fn weak_domination_examples() {
    let range: Vec<f64> = (0..60).map(f64::from).collect();
    assert!(weakly_dominates(|t| t, |t| 2.0 * t, 2.0, 0.0, &range).unwrap());
    for (l, c) in [(1.0, 0.0), (4.0, 10.0), (100.0, 100.0)] {
        assert!(!weakly_dominates(|t| t, |t| t.exp2(), l, c, &range).unwrap());
    }
    let f = |t: f64| t * t + 1.0;
    assert!(weakly_dominates(f, f, 1.0, 0.0, &range).unwrap());
    assert!(weakly_dominates(f, f, 0.5, 0.0, &range).is_err());
}

#[test]
fn control_sample_exports() {
    let v = L1Points::interval(0, 9);
    let c = Cover::new(10, vec![(0..=5).collect(), (4..=9).collect()]).unwrap();
    let meta = WindowMeta {
        spec_hash: None,
        description: "[0,9]".into(),
        points: 10,
    };
    let s = ControlSample::measure(&v, meta, &c, &[int(2), int(4)]).unwrap();
    assert!(s.entries[0].lebesgue.ok && !s.entries[1].lebesgue.ok);
    let json = s.to_json().unwrap();
    let back: ControlSample = serde_json::from_str(&json).unwrap();
    assert_eq!(back, s);
    let mut csv = Vec::new();
    s.write_csv(&mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert_eq!(text.lines().count(), 1 + 2 * 2);
    assert!(text.lines().nth(1).unwrap().ends_with(",2,0,6,5,true"));
}

proptest! {
    #[test]
    fn components_refine_with_radius(
        pts in proptest::collection::btree_set(-30i64..30, 1..12),
        r1 in 1i64..6,
        extra in 0i64..6,
    ) {
        let pts: Vec<i64> = pts.into_iter().collect();
        let v = line(&pts);
        let all: Vec<usize> = (0..pts.len()).collect();
        let fine = r_components(&v, &all, &int(r1)).unwrap();
        let coarse = r_components(&v, &all, &int(r1 + extra)).unwrap();
        for class in &fine {
            prop_assert!(coarse.iter().any(|c| class.iter().all(|p| c.contains(p))));
        }
    }
}
