use hyplab::conditions::{is_ruled, pseudo_ryan_oracle_residual, pseudo_ryan_raw_residuals};
use hyplab::curves::{algebra_residual, frenet_generator};
use hyplab::eds::systems::{construction_system, ConstructionState, CONSTRUCTION_COORDS};
use hyplab::eds::Coframe;
use hyplab::geometry::{
    hopf_residual, phi_a_squared, ricci, star_ricci, star_scalar, star_scalar_half, Mode, ShapeOperator, SpaceForm,
};
use hyplab::profile::Profile;
use hyplab::verify::random_polynomial_form;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn shape() -> impl Strategy<Value = ShapeOperator> {
    (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64)
        .prop_map(|(a, b, l, m, n)| ShapeOperator::new(a, b, l, m, n))
}

fn space_form() -> impl Strategy<Value = SpaceForm> {
    (0.5..2.0f64, any::<bool>()).prop_map(|(r, proj)| {
        if proj { SpaceForm::projective(2, r).unwrap() } else { SpaceForm::hyperbolic(2, r).unwrap() }
    })
}

proptest! {
    #[test]
    fn closed_forms_match_trace_oracle(a in shape(), sf in space_form()) {
        let scale = 1.0 + a.norm_squared();
        let dr = (ricci(&a, &sf, Mode::ClosedForm) - ricci(&a, &sf, Mode::TraceOracle)).amax();
        let ds = (star_ricci(&a, &sf, Mode::ClosedForm) - star_ricci(&a, &sf, Mode::TraceOracle)).amax();
        prop_assert!(dr <= 1e-12 * scale && ds <= 1e-12 * scale, "{dr:e} {ds:e}");
    }

    #[test]
    fn star_scalar_is_twice_the_block_invariant(a in shape(), sf in space_form()) {
        let half = 4.0 * sf.c + a.lambda * a.nu - a.mu * a.mu;
        prop_assert!((star_scalar_half(&a, &sf) - half).abs() <= 1e-12 * (1.0 + half.abs()));
        prop_assert!((star_scalar(&a, &sf) - 2.0 * half).abs() <= 1e-11 * (1.0 + half.abs()));
    }

    #[test]
    fn star_scalar_is_the_trace_of_star_ricci(a in shape(), sf in space_form()) {
        let trace = star_ricci(&a, &sf, Mode::ClosedForm).trace();
        prop_assert!((trace - star_scalar(&a, &sf)).abs() <= 1e-12 * (1.0 + a.norm_squared()));
    }

    #[test]
    fn pseudo_ryan_oracle_is_the_raw_pair(a in shape(), sf in space_form()) {
        let [first, second] = pseudo_ryan_raw_residuals(&a, &sf);
        let expect = (2.0 * first.abs()).max(second.abs());
        let got = pseudo_ryan_oracle_residual(&a, &sf);
        prop_assert!((got - expect).abs() <= 1e-11 * (1.0 + a.norm_squared()).powi(2), "{got} vs {expect}");
    }

    #[test]
    fn ruled_shapes_kill_phi_a_squared(alpha in -3.0..3.0f64, beta in 0.1..3.0f64, sf in space_form()) {
        let a = ShapeOperator::new(alpha, beta, 0.0, 0.0, 0.0);
        prop_assert!(is_ruled(&a, 1e-12));
        prop_assert_eq!(phi_a_squared(&a).amax(), 0.0);
        prop_assert!((star_scalar(&a, &sf) - 8.0 * sf.c).abs() <= 1e-12);
    }

    #[test]
    fn hopf_shapes_satisfy_the_hopf_identity(alpha in -3.0..3.0f64, lambda in -3.0..3.0f64, sf in space_form()) {
        prop_assume!((lambda - alpha / 2.0).abs() > 0.1);
        let nu = (lambda * alpha / 2.0 + sf.c) / (lambda - alpha / 2.0);
        let a = ShapeOperator::hopf(alpha, lambda, nu);
        prop_assert!(hopf_residual(&a, &sf).residual <= 1e-10 * (1.0 + a.norm_squared()));
    }

    #[test]
    fn frenet_generators_lie_in_the_algebra(k0 in -5.0..5.0f64, k1 in -5.0..5.0f64, tau in -5.0..5.0f64, sf in space_form()) {
        prop_assert!(algebra_residual(&frenet_generator(k0, k1, tau, &sf), &sf) <= 1e-14);
    }

    #[test]
    fn profiles_round_trip(kind in 0..3usize, v in prop::collection::vec(-1e3..1e3f64, 1..6)) {
        let p = match kind {
            0 => Profile::Const(v[0]),
            1 => Profile::Poly(v.clone()),
            _ => Profile::Sin { amp: v[0], freq: 1.5, phase: -0.25, offset: v[v.len() - 1] },
        };
        prop_assert_eq!(p.to_string().parse::<Profile>().unwrap(), p);
    }

    #[test]
    fn exterior_derivative_squares_to_zero(seed in any::<u64>(), sf in space_form()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cf = Coframe::new(sf, &CONSTRUCTION_COORDS);
        let point = [0.3, -1.1, 0.7, 1.9, -0.4];
        let f = random_polynomial_form(&cf, &point, &mut rng);
        let dd = cf.exterior_derivative(&cf.exterior_derivative(&f).unwrap()).unwrap();
        prop_assert!(dd.max_abs() <= 1e-10);
    }

    #[test]
    fn reduction_is_idempotent_and_kills_generators(seed in any::<u64>(), sf in space_form()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = ConstructionState::sample(&mut rng, sf);
        let sys = construction_system(&s);
        let r = sys.reducer().unwrap();
        let point = [s.alpha, s.beta, s.lambda, s.nu, s.p];
        let f = sys.d(&random_polynomial_form(&sys.coframe, &point, &mut rng)).unwrap();
        let once = r.reduce(&f);
        let twice = r.reduce(&once);
        let diff = (once.clone() - twice).max_abs();
        prop_assert!(diff <= 1e-10 * (1.0 + once.max_abs()), "{diff:e}");
        for g in &sys.generators {
            let killed = r.reduce(&g.wedge(&hyplab::eds::coframe::omega(1)));
            prop_assert!(killed.max_abs() <= 1e-10, "{:e}", killed.max_abs());
        }
    }
}
