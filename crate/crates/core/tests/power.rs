use proptest::prelude::*;
use risnoma::model::SystemConfig;
use risnoma::oracle::{self, random_gains, CaseKind};
use risnoma::power::{
    region_points, secrecy_objective, solve_internal, solve_no_csi, solve_with_csi, upper_boundary_ratio,
    AllocationCase, AllocationGains,
};
use risnoma::rng::substream;

fn cfg() -> SystemConfig {
    SystemConfig::default()
}

fn gains_strategy() -> impl Strategy<Value = AllocationGains> {
    (-4.0f64..0.0, 0.1f64..3.0, -2.0f64..1.5, -3.0f64..1.0, 1usize..=14).prop_map(|(l1, r2, re1, le2, nv)| {
        let h1 = 10f64.powf(l1);
        AllocationGains { h1, h2: h1 * 10f64.powf(r2), h_e1: h1 * 10f64.powf(re1), h_e2: 10f64.powf(le2), nv }
    })
}

#[test]
fn internal_alpha_matches_grid() {
    let c = cfg();
    let s = solve_internal(1.0, 4.0, &c).unwrap();
    let grid = oracle::alpha_grid(1.0, 4.0, 1.0, &c, 1_000_000).unwrap();
    assert!((s.alpha - grid).abs() <= 1e-6);
}

#[test]
fn no_csi_alpha_matches_grid() {
    let c = cfg();
    let s = solve_no_csi(1.0, 4.0, 0.5, &c).unwrap();
    let grid = oracle::alpha_grid(1.0, 4.0, 0.5, &c, 1_000_000).unwrap();
    assert!((s.alpha - grid).abs() <= 1e-6);
}

#[test]
fn with_csi_matches_grid_in_every_case() {
    let c = cfg();
    let mut rng = substream(77, &[]);
    for kind in [CaseKind::I, CaseKind::II, CaseKind::III] {
        for _ in 0..5 {
            let g = random_gains(&mut rng, kind, &c);
            let s = solve_with_csi(&g, &c).unwrap();
            assert!(s.feasible);
            let ours = secrecy_objective(s.psi, s.alpha, &g, &c);
            let (best, _, _) = oracle::grid_2d(&g, &c, 1000).unwrap();
            assert!(ours >= best - 1e-3 * best.abs(), "{kind:?}: {ours} < {best} for {g:?}");
            let expected = match kind {
                CaseKind::I => AllocationCase::CaseI,
                CaseKind::II => AllocationCase::CaseII,
                CaseKind::III => AllocationCase::CaseIII,
            };
            assert_eq!(s.case, expected);
        }
    }
}

#[test]
fn stationary_point_matches_numeric_maximiser() {
    let c = cfg();
    let mut rng = substream(78, &[]);
    let mut checked = 0;
    while checked < 20 {
        let g = random_gains(&mut rng, CaseKind::II, &c);
        let pts = region_points(&g, &c).unwrap();
        let Some(gp) = pts.g else { continue };
        if !(gp.psi > pts.d.psi && gp.psi < 1.0) {
            continue;
        }
        let numeric = oracle::boundary_maximiser(&g, &c, pts.d.psi, 1.0);
        assert!((gp.psi - numeric).abs() <= 1e-6, "{} vs {numeric}", gp.psi);
        assert!((gp.alpha - oracle::upper_boundary(gp.psi, g.h1, &c)).abs() <= 1e-9);
        checked += 1;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn corner_points_lie_on_boundaries(g in gains_strategy()) {
        let c = cfg();
        let pts = region_points(&g, &c).unwrap();
        let d = pts.d;
        prop_assert!((d.alpha - oracle::upper_boundary(d.psi, g.h1, &c)).abs() <= 1e-9 * d.alpha.abs().max(1.0));
        prop_assert!((d.alpha - oracle::lower_boundary(d.psi, g.h2, &c)).abs() <= 1e-9 * d.alpha.abs().max(1.0));
        prop_assert_eq!(pts.b.alpha, oracle::lower_boundary(1.0, g.h2, &c));
        prop_assert!((pts.c.alpha - oracle::upper_boundary(1.0, g.h1, &c)).abs() <= 1e-15);
        if let Some(a) = pts.a {
            prop_assert!((a.alpha - oracle::upper_boundary(a.psi, g.h1, &c)).abs() <= 1e-9 * a.alpha.abs().max(1.0));
        }
    }

    #[test]
    fn feasible_splits_satisfy_both_constraints(g in gains_strategy()) {
        let c = cfg();
        let s = solve_with_csi(&g, &c).unwrap();
        if s.feasible {
            let (p, n0) = (c.p_linear(), c.n0_linear());
            let sp = s.alpha * s.psi * p;
            let sinr1 = g.h1 * (1.0 - s.alpha) * s.psi * p / (g.h1 * sp + n0);
            let snr2 = g.h2 * sp / n0;
            prop_assert!(sinr1 >= c.gamma1_th() * (1.0 - 1e-9));
            prop_assert!(snr2 >= c.gamma2_th() * (1.0 - 1e-9));
            prop_assert!(s.psi > 0.0 && s.psi <= 1.0);
            prop_assert!(s.alpha > 0.0 && s.alpha < 1.0);
        }
    }

    #[test]
    fn objective_matches_snr_formulas(g in gains_strategy(), u in 0.0f64..1.0, v in 0.0f64..1.0) {
        let c = cfg();
        let pts = region_points(&g, &c).unwrap();
        prop_assume!(pts.d.psi < 1.0);
        let psi = pts.d.psi + (1.0 - pts.d.psi) * u;
        let lo = oracle::lower_boundary(psi, g.h2, &c);
        let hi = oracle::upper_boundary(psi, g.h1, &c);
        let alpha = lo + (hi - lo) * v;
        let ours = secrecy_objective(psi, alpha, &g, &c);
        let want = oracle::objective(psi, alpha, &g, &c).unwrap_or(0.0);
        prop_assert!((ours - want).abs() <= 1e-12 * want.abs().max(1.0));
    }

    #[test]
    fn eavesdropper_and_near_user_tie_at_the_bound(seed in any::<u64>(), v in 0.0f64..1.0) {
        let c = cfg();
        let g = random_gains(&mut substream(seed, &[]), CaseKind::III, &c);
        let o = region_points(&g, &c).unwrap().o_bound.unwrap();
        let lo = oracle::lower_boundary(o, g.h2, &c);
        let hi = oracle::upper_boundary(o, g.h1, &c);
        let alpha = lo + (hi - lo) * v;
        let (p, n0) = (c.p_linear(), c.n0_linear());
        let g1x2 = g.h1 * alpha * o * p / n0;
        let ge = g.h_e1 * alpha * o * p / ((1.0 - o) * p * g.h_e2 / g.nv as f64 + n0);
        prop_assert!((g1x2 - ge).abs() <= 1e-9 * g1x2.max(1.0));
    }

    #[test]
    fn internal_objective_increases_with_alpha(h1 in 0.01f64..1.0, ratio in 1.01f64..20.0, a in 0.01f64..0.98) {
        let c = cfg();
        let h2 = h1 * ratio;
        let p = c.p_linear();
        let f = |alpha: f64| (h2 * alpha * p + 1.0) / (h1 * alpha * p + 1.0);
        prop_assert!(f(a + 0.01) > f(a));
    }

    #[test]
    fn boundary_objective_is_monotone_in_alpha(g in gains_strategy(), psi in 0.05f64..1.0) {
        let c = cfg();
        let (p, n0) = (c.p_linear(), c.n0_linear());
        let an = (1.0 - psi) * p * g.h_e2 / g.nv as f64;
        let f = |alpha: f64| (1.0 + g.h2 * alpha * psi * p / n0) / (1.0 + g.h_e1 * alpha * psi * p / (an + n0));
        let diffs: Vec<f64> = (1..50).map(|k| {
            let a = k as f64 / 50.0;
            f(a + 1e-3) - f(a)
        }).collect();
        let pos = diffs.iter().all(|&d| d >= 0.0);
        let neg = diffs.iter().all(|&d| d <= 0.0);
        prop_assert!(pos || neg);
    }

    #[test]
    fn boundary_ratio_matches_oracle(g in gains_strategy(), psi in 0.05f64..1.0) {
        let c = cfg();
        let ours = upper_boundary_ratio(psi, &g, &c);
        let want = oracle::boundary_ratio(psi, &g, &c);
        prop_assert!((ours - want).abs() <= 1e-12 * want.abs());
    }
}
