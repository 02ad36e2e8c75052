use eemit_core::events::{peaks_of, stats_of};
use eemit_core::integrator::DEFAULT_DT;
use eemit_core::{
    jacobian, rk4_step, simulate, vector_field, Observable, SimPlan, State, SystemKind, SystemSpec,
};
use proptest::prelude::*;

fn kind() -> impl Strategy<Value = SystemKind> {
    prop::sample::select(SystemKind::ALL.to_vec())
}

/// Every field populated; `with_kind` zeroes the ones the kind does not use.
fn full_spec() -> impl Strategy<Value = SystemSpec> {
    (
        (
            0.0..1.0f64,
            -1.0..1.0f64,
            -3.0..3.0f64,
            0.0..2.0f64,
            0.0..2.0f64,
        ),
        (0.0..8.0f64, 0.0..0.3f64, 0.0..2.0f64),
        (
            -2.0..2.0f64,
            0.0..6.0f64,
            -2.0..2.0f64,
            0.0..6.0f64,
            -3.2..3.2f64,
            -0.1..0.1f64,
        ),
    )
        .prop_map(
            |(
                (alpha, beta, gamma, lambda, omega0_sq),
                (big, epsilon, omega_p),
                (f1, omega1, f2, omega2, phi, bias),
            )| {
                SystemSpec {
                    kind: SystemKind::NP3,
                    alpha,
                    beta,
                    gamma,
                    lambda,
                    omega0_sq,
                    big_omega0_sq: big,
                    epsilon,
                    omega_p,
                    f1,
                    omega1,
                    f2,
                    omega2,
                    phi,
                    bias,
                }
            },
        )
}

fn point() -> impl Strategy<Value = (State, f64)> {
    (-3.0..3.0f64, -3.0..3.0f64, 0.0..200.0f64).prop_map(|(x, y, t)| (State::new(x, y), t))
}

fn central_difference(spec: &SystemSpec, s: State, t: f64) -> [[f64; 2]; 2] {
    let h = 1e-6;
    let fx = |dx: f64, dy: f64| vector_field(spec, State::new(s.x + dx, s.y + dy), t);
    let (xp, xm, yp, ym) = (fx(h, 0.0), fx(-h, 0.0), fx(0.0, h), fx(0.0, -h));
    [
        [(xp.x - xm.x) / (2.0 * h), (yp.x - ym.x) / (2.0 * h)],
        [(xp.y - xm.y) / (2.0 * h), (yp.y - ym.y) / (2.0 * h)],
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(600))]

    #[test]
    fn jacobian_matches_finite_differences(k in kind(), spec in full_spec(), (s, t) in point()) {
        let spec = spec.with_kind(k);
        prop_assert!(spec.validate().is_ok());
        let j = jacobian(&spec, s, t);
        let fd = central_difference(&spec, s, t);
        for r in 0..2 {
            for c in 0..2 {
                prop_assert!((j[r][c] - fd[r][c]).abs() < 1e-5, "{k} [{r}][{c}] {} vs {}", j[r][c], fd[r][c]);
            }
        }
    }

    #[test]
    fn first_component_is_velocity(k in kind(), spec in full_spec(), (s, t) in point()) {
        let v = vector_field(&spec.with_kind(k), s, t);
        prop_assert_eq!(v.x, s.y);
        prop_assert!(v.y.is_finite());
    }

    #[test]
    fn second_forcing_off_reduces_to_single_forcing(spec in full_spec(), (s, t) in point()) {
        for (two, one) in [(SystemKind::L2, SystemKind::L1), (SystemKind::NP2, SystemKind::NP1)] {
            let mut a = spec.with_kind(two);
            a.f2 = 0.0;
            a.phi = 0.0;
            let b = a.with_kind(one);
            prop_assert_eq!(vector_field(&a, s, t), vector_field(&b, s, t));
            prop_assert_eq!(jacobian(&a, s, t), jacobian(&b, s, t));
        }
    }

    #[test]
    fn zero_modulation_reduces_to_plain_kind(spec in full_spec(), (s, t) in point()) {
        let mut a = spec.with_kind(SystemKind::NP3);
        a.epsilon = 0.0;
        let b = a.with_kind(SystemKind::NP2);
        prop_assert_eq!(vector_field(&a, s, t), vector_field(&b, s, t));
    }

    #[test]
    fn stats_scale_by_powers_of_two(values in prop::collection::vec(-10.0..10.0f64, 2..200), e in -8i32..8, n in 0.5..8.0f64) {
        let c = 2f64.powi(e);
        let scaled: Vec<f64> = values.iter().map(|v| v * c).collect();
        let a = stats_of(&values, n);
        let b = stats_of(&scaled, n);
        prop_assert_eq!(a.ee_count, b.ee_count);
        prop_assert_eq!(a.probability, b.probability);
        prop_assert_eq!(b.mean, a.mean * c);
        prop_assert_eq!(b.sigma, a.sigma * c);
        prop_assert_eq!(b.threshold, a.threshold * c);
        prop_assert_eq!(b.max, a.max * c);
        if !a.degenerate {
            prop_assert_eq!(a.d_max, b.d_max);
        }
    }

    #[test]
    fn stats_translate(values in prop::collection::vec(-10.0..10.0f64, 2..200), c in -50.0..50.0f64, n in 0.5..4.0f64) {
        let shifted: Vec<f64> = values.iter().map(|v| v + c).collect();
        let a = stats_of(&values, n);
        let b = stats_of(&shifted, n);
        let tol = 1e-9 * (1.0 + c.abs());
        prop_assert!((b.mean - a.mean - c).abs() < tol);
        prop_assert!((b.threshold - a.threshold - c).abs() < tol);
        prop_assert!((b.max - a.max - c).abs() < tol);
        prop_assert!((b.sigma - a.sigma).abs() < tol);
        // a peak sitting within rounding of the threshold may legitimately flip
        let borderline = values.iter().any(|v| (v - a.threshold).abs() < tol);
        if !borderline && !a.degenerate {
            prop_assert_eq!(a.ee_count, b.ee_count);
            prop_assert!((a.d_max - b.d_max).abs() < 1e-6);
        }
    }

    #[test]
    fn ee_count_matches_brute_force(values in prop::collection::vec(-5.0..5.0f64, 0..300), n in 0.0..6.0f64) {
        let s = stats_of(&values, n);
        let brute = values.iter().filter(|&&v| v > s.threshold).count();
        prop_assert_eq!(s.ee_count, brute);
        prop_assert_eq!(s.peak_count, values.len());
        prop_assert!((0.0..=1.0).contains(&s.probability));
    }

    #[test]
    fn reversal_keeps_peak_multiset(raw in prop::collection::vec(0u8..6, 0..200)) {
        let values: Vec<f64> = raw.iter().map(|&v| v as f64).collect();
        let times: Vec<f64> = (0..values.len()).map(|i| i as f64).collect();
        let rev: Vec<f64> = values.iter().rev().copied().collect();
        let mut a = peaks_of(&times, &values).values;
        let mut b = peaks_of(&times, &rev).values;
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rk4_global_order(x0 in -1.0..1.0f64, y0 in -1.0..1.0f64) {
        prop_assume!(x0.abs() + y0.abs() > 0.1);
        // y'' = -x with gamma = -1; exact solution is a rotation
        let mut spec = SystemSpec::zero(SystemKind::L1);
        spec.gamma = -1.0;
        let t_end = 2.0;
        let error = |dt: f64| {
            let steps = (t_end / dt).round() as u64;
            let mut s = State::new(x0, y0);
            for k in 0..steps {
                s = rk4_step(&spec, s, k as f64 * dt, dt).unwrap();
            }
            let (c, si) = (t_end.cos(), t_end.sin());
            let exact = State::new(x0 * c + y0 * si, -x0 * si + y0 * c);
            ((s.x - exact.x).powi(2) + (s.y - exact.y).powi(2)).sqrt()
        };
        let (e1, e2, e3) = (error(0.1), error(0.05), error(0.025));
        for ratio in [e1 / e2, e2 / e3] {
            prop_assert!((12.0..=20.0).contains(&ratio), "ratio {ratio}");
        }
    }

    #[test]
    fn simulation_is_deterministic(k in kind(), spec in full_spec(), x in -0.5..0.5f64, y in -0.5..0.5f64) {
        let spec = spec.with_kind(k);
        let plan = SimPlan {
            ic: State::new(x, y),
            dt: DEFAULT_DT,
            t0: 0.0,
            transient_steps: 200,
            record_steps: 2_000,
            sample_every: 3,
            observable: Observable::X,
            stroboscopic: None,
        };
        let a = simulate(&spec, &plan);
        let b = simulate(&spec, &plan);
        match (a, b) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a.values.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
                                b.values.iter().map(|v| v.to_bits()).collect::<Vec<_>>());
                prop_assert_eq!(a, b);
            }
            (a, b) => prop_assert_eq!(a.is_err(), b.is_err()),
        }
    }

    #[test]
    fn transient_is_a_prefix(k in kind(), spec in full_spec(), skip in 0u64..500, keep in 1u64..500) {
        let spec = spec.with_kind(k);
        let mut long = SimPlan::for_kind(k);
        long.transient_steps = 0;
        long.record_steps = skip + keep;
        let mut short = long;
        short.transient_steps = skip;
        short.record_steps = keep;
        if let (Ok(a), Ok(b)) = (simulate(&spec, &long), simulate(&spec, &short)) {
            prop_assert_eq!(&a.values[skip as usize..], &b.values[..]);
            prop_assert_eq!(&a.times[skip as usize..], &b.times[..]);
        }
    }
}
