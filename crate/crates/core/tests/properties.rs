//! Invariants of the planar walk, the extended-range reals, the iterated-log
//! functions and the estimators.

use proptest::prelude::*;
use wreathwalk::estimators::{rate_fit, standard_catalog, Distribution, DEFAULT_SUPPORT_CAP};
use wreathwalk::group::GroupSpec;
use wreathwalk::iterlog::{iterated_log, l_tilde, threshold_t, ConcaveExtension, IterLogParams, TowerReal};
use wreathwalk::lattice::{local_times, simulate_srw, sweep};

fn params() -> impl Strategy<Value = IterLogParams> {
    (1u32..=3, prop::sample::select(vec![0.25, 0.5, 0.75, 1.0])).prop_map(|(k, a)| IterLogParams::new(k, a).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn walk_conserves_visits(n in 0usize..3000, seed in any::<u64>()) {
        let t = simulate_srw(n, seed);
        let field = local_times(&t);
        prop_assert_eq!(field.total(), n as u64 + 1);
        prop_assert_eq!(field.range(), field.iter().filter(|(_, b)| *b > 0).count() as u64);
        let prefix = t.prefix_ranges();
        prop_assert!(prefix.windows(2).all(|w| w[1] >= w[0] && w[1] - w[0] <= 1));
        prop_assert_eq!(*prefix.last().unwrap(), field.range());
    }

    #[test]
    fn concave_functional_is_bounded_by_spreading(n in 1usize..3000, seed in any::<u64>(), a in 0.05f64..1.0) {
        // Σ f(b_z) ≤ R f((n+1)/R) for concave f with f(0) = 0
        let field = local_times(&simulate_srw(n, seed));
        let f = |b: f64| b.powf(a);
        let r = field.range() as f64;
        let lhs = field.functional(|b| f(b as f64));
        prop_assert!(lhs <= r * f((n as f64 + 1.0) / r) * (1.0 + 1e-12));
    }

    #[test]
    fn sweep_trials_do_not_depend_on_batch_size(seed in any::<u64>(), trials in 1u64..20) {
        let f = |b: u64| (b as f64).ln_1p();
        let small = sweep(500, trials, seed, &[&f]);
        let large = sweep(500, trials + 5, seed, &[&f]);
        prop_assert_eq!(&small[..], &large[..trials as usize]);
    }

    #[test]
    fn tower_order_matches_floats(a in -1e300f64..1e300, b in -1e300f64..1e300) {
        let (a, b) = (a.abs(), b.abs());
        prop_assert_eq!(TowerReal::new(a).cmp(&TowerReal::new(b)), a.partial_cmp(&b).unwrap());
    }

    #[test]
    fn tower_logs_invert_exps(depth in 1u32..5, top in 1.0f64..700.0) {
        let x = TowerReal::tower(depth, top);
        prop_assert!((iterated_log(depth, &x).unwrap() / top - 1.0).abs() < 1e-12);
    }

    #[test]
    fn l_tilde_is_increasing_past_threshold(p in params(), s in 0.0f64..10.0, ds in 1e-2f64..1.0) {
        // x = exp^(k)(t) with t past the threshold's top
        let t0 = threshold_t(p).top();
        let x1 = TowerReal::tower(p.k(), t0 * (1.0 + s));
        let x2 = TowerReal::tower(p.k(), t0 * (1.0 + s) * (1.0 + ds));
        prop_assert!(l_tilde(p, &x1).unwrap() < l_tilde(p, &x2).unwrap());
    }

    #[test]
    fn extension_lies_on_or_below_its_chords(x in 0.0f64..1e6, y in 0.0f64..1e6, w in 0.0f64..1.0) {
        let ext = ConcaveExtension::new(IterLogParams::new(1, 1.0).unwrap());
        let mid = ext.eval_f64(w * x + (1.0 - w) * y);
        let chord = w * ext.eval_f64(x) + (1.0 - w) * ext.eval_f64(y);
        prop_assert!(mid >= chord * (1.0 - 1e-12));
    }

    #[test]
    fn extension_is_dominated_by_its_slope(p in params(), u in 0.0f64..30.0) {
        // concave through the origin: L(x) ≤ β x everywhere
        let ext = ConcaveExtension::new(p);
        let x = TowerReal::new(u.exp());
        let v = ext.eval(&x).unwrap().to_f64().unwrap();
        prop_assert!(v <= ext.beta() * u.exp() * (1.0 + 1e-12));
    }

    #[test]
    fn rate_fit_ignores_overall_scale(c in 1e-3f64..1e3) {
        let series: Vec<(f64, f64)> = (10..=16).map(|e| {
            let n = (1u64 << e) as f64;
            (n, n / n.ln() * (1.0 + 0.01 * (e as f64).sin()))
        }).collect();
        let scaled: Vec<(f64, f64)> = series.iter().map(|&(n, v)| (n, c * v)).collect();
        let a = rate_fit(&series, &standard_catalog()).unwrap();
        let b = rate_fit(&scaled, &standard_catalog()).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert_eq!(&x.rate_name, &y.rate_name);
            prop_assert!((x.band_ratio() / y.band_ratio() - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn exact_powers_keep_mass_on_every_spec() {
    for text in ["Z wr C2", "Z2 wr C2", "Z wr Z"] {
        let spec: GroupSpec = text.parse().unwrap();
        let gens = spec.generators().unwrap();
        for d in Distribution::powers(&spec, &gens, 3, DEFAULT_SUPPORT_CAP).unwrap() {
            assert!((d.total_mass() - 1.0).abs() < 1e-12, "{text} n={}", d.steps());
            assert!(d.symmetry_defect().unwrap() < 1e-15, "{text} n={}", d.steps());
        }
    }
}
