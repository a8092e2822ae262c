//! Property tests for the analytic invariants.

use bdg_core::bellman::{u_max, u_plain, BellmanConstants, MaxPoint, PlainPoint};
use bdg_core::dyadic::{p_variation, FiltrationTree, Martingale};
use bdg_core::funspace::FunctionSpaceDescriptor;
use bdg_core::math;
use bdg_core::SpaceDescriptor;
use proptest::prelude::*;

fn spaces() -> Vec<SpaceDescriptor> {
    vec![
        SpaceDescriptor::scalar(2.0).unwrap(),
        SpaceDescriptor::scalar(1.5).unwrap(),
        SpaceDescriptor::lq(3.0, 3, 2.0).unwrap(),
        SpaceDescriptor::lq(1.5, 3, 1.5).unwrap(),
        SpaceDescriptor::euclidean(3, 2.0).unwrap(),
    ]
}

fn coords() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0f64..3.0, 3)
}

fn space_index() -> impl Strategy<Value = usize> {
    0usize..5
}

fn pad(space: &SpaceDescriptor, v: &[f64]) -> Vec<f64> {
    v[..space.dim()].to_vec()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn smoothness_inequality_with_stored_constant(ix in space_index(), x in coords(), y in coords()) {
        let s = &spaces()[ix];
        let (x, y) = (pad(s, &x), pad(s, &y));
        let p = s.p;
        let sum: Vec<f64> = x.iter().zip(&y).map(|(&a, &b)| a + b).collect();
        let dif: Vec<f64> = x.iter().zip(&y).map(|(&a, &b)| a - b).collect();
        let lhs = 0.5 * (math::pow(s.norm(&sum).unwrap(), p) + math::pow(s.norm(&dif).unwrap(), p));
        let rhs = math::pow(s.norm(&x).unwrap(), p)
            + math::pow(s.c_sm, p) * math::pow(s.norm(&y).unwrap(), p);
        prop_assert!(lhs <= rhs + 1e-11 * (1.0 + lhs + rhs));
    }

    #[test]
    fn gradient_holder_with_stored_constant(ix in space_index(), x in coords(), y in coords()) {
        let s = &spaces()[ix];
        let (x, y) = (pad(s, &x), pad(s, &y));
        let gx = s.phi_gradient(&x).unwrap();
        let gy = s.phi_gradient(&y).unwrap();
        let gd: Vec<f64> = gx.coords.iter().zip(&gy.coords).map(|(&a, &b)| a - b).collect();
        let lhs = s.dual_norm_of(&gd);
        let dif: Vec<f64> = x.iter().zip(&y).map(|(&a, &b)| a - b).collect();
        let rhs = math::pow(s.c_h, s.p) * math::pow(s.norm(&dif).unwrap(), s.p - 1.0);
        prop_assert!(lhs <= rhs + 1e-11 * (1.0 + lhs + rhs));
    }

    #[test]
    fn gradient_matches_directional_difference(ix in space_index(), x in coords(), y in coords()) {
        let s = &spaces()[ix];
        let (x, y) = (pad(s, &x), pad(s, &y));
        let nx = s.norm(&x).unwrap();
        let ny = s.norm(&y).unwrap();
        prop_assume!(nx > 1e-2 && ny > 1e-3);
        let y: Vec<f64> = y.iter().map(|&c| c / ny).collect(); // |y| = 1
        let h = 1e-6 * (1.0 + nx);
        let xh: Vec<f64> = x.iter().zip(&y).map(|(&a, &b)| a + h * b).collect();
        let fd = (s.phi(&xh).unwrap() - s.phi(&x).unwrap()) / h;
        let lin = s.phi_gradient(&x).unwrap().apply(&y);
        let scale = 1.0 + s.p * math::pow(nx, s.p - 1.0);
        prop_assert!((fd - lin).abs() <= 1e-5 * scale, "fd={fd} lin={lin}");
    }

    #[test]
    fn gradient_homogeneity(ix in space_index(), x in coords(), lam in 0.01f64..100.0) {
        let s = &spaces()[ix];
        let x = pad(s, &x);
        let xs: Vec<f64> = x.iter().map(|&c| lam * c).collect();
        let g = s.phi_gradient(&x).unwrap();
        let gs = s.phi_gradient(&xs).unwrap();
        let factor = math::pow(lam, s.p - 1.0);
        for (a, b) in g.coords.iter().zip(&gs.coords) {
            prop_assert!((factor * a - b).abs() <= 1e-12 * (1.0 + b.abs() + factor * a.abs()));
        }
    }

    #[test]
    fn bellman_homogeneity_both_groups(
        ix in space_index(),
        x in coords(),
        q in 0.0f64..5.0,
        su in 0.0f64..1.0,
        v in 0.01f64..5.0,
        tau in 0.0f64..2.0,
        lam in 0.05f64..20.0,
        mu in 0.05f64..20.0,
    ) {
        let s = &spaces()[ix];
        let x = pad(s, &x);
        let u = su * v;
        let kp = BellmanConstants::plain();
        let km = BellmanConstants::maximal();
        let nx = s.norm(&x).unwrap();
        let m = nx * (1.0 + tau);

        let base = u_plain(&s, &PlainPoint { x: x.clone(), q, u, v }, &kp).unwrap();
        let xs: Vec<f64> = x.iter().map(|&c| lam * c).collect();
        let scaled = u_plain(
            &s,
            &PlainPoint { x: xs.clone(), q: math::pow(lam, s.p) * q, u, v },
            &kp,
        )
        .unwrap();
        let tol = 1e-12 * (1.0 + lam * base.abs() + lam * (1.0 + q + nx));
        prop_assert!((scaled - lam * base).abs() <= tol, "plain x-group: {scaled} vs {}", lam * base);

        let wscaled = u_plain(&s, &PlainPoint { x: x.clone(), q, u: mu * u, v: mu * v }, &kp).unwrap();
        let tol_w = 1e-12 * (1.0 + mu * base.abs() + mu * (1.0 + q + nx) * (1.0 + v));
        prop_assert!((wscaled - mu * base).abs() <= tol_w);

        let mbase = u_max(&s, &MaxPoint { x: x.clone(), m, q, u, v }, &km).unwrap();
        // norm(lam x) can exceed lam * norm(x) by an ulp; lift m accordingly
        let m_scaled = (lam * m).max(s.norm(&xs).unwrap());
        let mscaled = u_max(
            &s,
            &MaxPoint { x: xs, m: m_scaled, q: math::pow(lam, s.p) * q, u, v },
            &km,
        )
        .unwrap();
        let mtol = 1e-11 * (1.0 + lam * mbase.abs() + lam * (1.0 + q + m) * (1.0 + v));
        prop_assert!((mscaled - lam * mbase).abs() <= mtol, "max x-group: {mscaled} vs {}", lam * mbase);
    }

    #[test]
    fn max_two_forms_agree_and_reduce_to_plain(
        ix in space_index(),
        x in coords(),
        q in 0.0f64..5.0,
        su in 0.0f64..1.0,
        v in 0.01f64..5.0,
        tau in 0.0f64..3.0,
    ) {
        let s = &spaces()[ix];
        let x = pad(s, &x);
        let u = su * v;
        let km = BellmanConstants::maximal();
        let nx = s.norm(&x).unwrap();

        // u_max evaluates both displayed forms internally and errors on
        // disagreement; reaching Ok is the agreement assertion.
        let m = nx * (1.0 + tau);
        let _ = u_max(&s, &MaxPoint { x: x.clone(), m, q, u, v }, &km).unwrap();

        // at m = |x| the maximal variant coincides with the plain function exactly
        let kp = BellmanConstants::new(km.c, km.c_tilde).unwrap();
        let at_m_eq_x = u_max(&s, &MaxPoint { x: x.clone(), m: nx, q, u, v }, &km).unwrap();
        let plain = u_plain(&s, &PlainPoint { x, q, u, v }, &kp).unwrap();
        prop_assert_eq!(at_m_eq_x, plain);
    }

    #[test]
    fn p_variation_monotone_in_p(terminal in prop::collection::vec(-4.0f64..4.0, 8)) {
        let s = SpaceDescriptor::scalar(2.0).unwrap();
        let t = FiltrationTree::new(3).unwrap();
        let m = Martingale::from_terminal(&t, 1, &terminal).unwrap();
        let p_list = [1.0, 1.2, 1.5, 1.8, 2.0];
        let mut prev: Option<Vec<f64>> = None;
        for &p in &p_list {
            let sp = p_variation(&s, m.process(), p, true).unwrap();
            if let Some(prev) = &prev {
                for (hi, lo) in prev.iter().zip(&sp) {
                    // l^p norms of the increment vector decrease in p
                    prop_assert!(lo <= &(hi + 1e-12 * (1.0 + hi)));
                }
            }
            prev = Some(sp);
        }
    }

    #[test]
    fn elementary_inequality_case_2a(a in 0.0f64..50.0, b in 0.0f64..50.0, p in 1.0f64..2.0) {
        // (a + b)^p <= a^p + p a^(p-1) b + b^p for a, b >= 0 and p in [1, 2]
        let lhs = math::pow(a + b, p);
        let rhs = math::pow(a, p)
            + if a > 0.0 { p * math::pow(a, p - 1.0) * b } else { 0.0 }
            + math::pow(b, p);
        prop_assert!(lhs <= rhs + 1e-11 * (1.0 + lhs + rhs));
    }

    #[test]
    fn amgm_recovery_inequality(
        ix in space_index(),
        x in coords(),
        q in 0.0f64..5.0,
        tau in 0.0f64..3.0,
    ) {
        // (|x|^p/c^p + q)^(1/p) <= (1/p') (m^p/c^p + q)^(1/p)
        //   + (1/p) (q + |x|^p/c^p) / (m^p/c^p + q)^(1 - 1/p), for m >= |x|
        let s = &spaces()[ix];
        let x = pad(s, &x);
        let p = s.p;
        let chp = math::pow(s.c_h, p);
        let nx = s.norm(&x).unwrap();
        let m = nx * (1.0 + tau);
        let big_x = math::pow(nx, p) / chp;
        let big_m = math::pow(m, p) / chp;
        prop_assume!(big_m + q > 1e-12);
        let lhs = math::root(big_x + q, p);
        let rp = math::root(big_m + q, p);
        let rhs = rp / math::conjugate(p) + (q + big_x) / (p * ((big_m + q) / rp));
        prop_assert!(lhs <= rhs + 1e-11 * (1.0 + lhs + rhs));
    }

    #[test]
    fn extremizer_identities(
        f in prop::collection::vec(0.0f64..5.0, 4),
        q in 1.2f64..4.0,
        r in 1.2f64..4.0,
    ) {
        let fs = FunctionSpaceDescriptor::new(q, 4).unwrap();
        let h = fs.extremizer(&f, r).unwrap();
        let nf = fs.norm(&f).unwrap();
        let nh = fs.dual_norm(&h).unwrap();
        let pairing = fs.pairing(&f, &h).unwrap();
        let want_h = math::pow(nf, r - 1.0);
        let want_pair = math::pow(nf, r);
        prop_assert!((nh - want_h).abs() <= 1e-12 * (1.0 + want_h), "nh={nh} want={want_h}");
        prop_assert!((pairing - want_pair).abs() <= 1e-12 * (1.0 + want_pair));
        // Hölder: the pairing never exceeds |f| |h|
        prop_assert!(pairing <= nf * nh + 1e-12 * (1.0 + nf * nh));
    }
}
