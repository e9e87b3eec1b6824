use pairloc::bounds::*;
use proptest::prelude::*;

#[path = "oracle/bounds_table.rs"]
mod bounds_table;

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

#[test]
fn stored_values_to_ten_digits() {
    let c = sufficient_m_constant();
    assert!(rel(c, bounds_table::C0) < 5e-11);
    for &(name, a, want) in bounds_table::VALUES {
        let got = match name {
            "sufficient_m" => sufficient_m_value(a[0], a[1], a[2] as usize, a[3], c),
            "lower_bound_m" => lower_bound_m(a[0], a[1], a[2] as usize),
            "kappa_n" => kappa_n(a[0], a[1], a[2] as usize, a[3]),
            "zeta_of_m" => zeta_of_m(a[0] as u64, a[1] as usize, a[2]),
            "embedding_m" => embedding_m(a[0], a[1] as usize, a[2]).map(|v| v as f64),
            "error_bound_flips" => error_bound_flips(a[0], a[1] as u64, a[2] as usize, a[3], a[4]),
            "error_bound_gaussian" => error_bound_gaussian(a[0], a[1] as u64, a[2] as usize, a[3], a[4]),
            "error_bound_arbitrary" => error_bound_arbitrary(a[0], a[1] as u64, a[2] as usize, a[3], a[4]),
            "adaptive_m" => adaptive_m_value(a[0], a[1], a[2] as usize, a[3], a[4]),
            other => panic!("unknown calculator {other}"),
        }
        .unwrap();
        assert!(rel(got, want) < 5e-11, "{name}{a:?}: {got} vs {want}");
    }
    for &(name, a, want) in bounds_table::INTEGERS {
        let got = match name {
            "sufficient_m" => sufficient_m(a[0], a[1], a[2] as usize, a[3]),
            "adaptive_m" => adaptive_m(a[0], a[1], a[2] as usize, a[3], c),
            other => panic!("unknown calculator {other}"),
        };
        assert_eq!(got.unwrap(), want, "{name}{a:?}");
    }
    for &(m, n, want) in bounds_table::CELLS {
        assert_eq!(cell_count(m, n).to_string(), want, "F_{n}({m})");
    }
    let k = embedding_constants();
    for (got, want) in [k.big_c1, k.small_c1, k.big_c2, k.small_c2].into_iter().zip(bounds_table::CONSTANTS) {
        assert!(rel(got, want) < 5e-11);
    }
}

#[test]
fn spec_examples() {
    assert_eq!(sufficient_m(1.0, 0.5, 2, 0.1).unwrap(), 33_800);
    assert!((lower_bound_m(1.0, 0.1, 3).unwrap() - 60.0 / std::f64::consts::E).abs() < 1e-12);
    assert!((lower_bound_m(1.0, 1.0, 5).unwrap() - 10.0 / std::f64::consts::E).abs() < 1e-12);
    assert_eq!(cell_count(3, 1).to_string(), "4");
    assert_eq!(cell_count(3, 2).to_string(), "7");
    assert!((kappa_n(0.5, 1.0, 4, 0.0).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
    assert!((kappa_n(1.0, 1.0, 2, 0.3).unwrap() - 0.5 * 0.5f64.sqrt()).abs() < 1e-15);
    let k = embedding_constants();
    assert!((k.big_c2 - 0.797_884_560_8).abs() < 1e-10);
    assert!((k.big_c1 - 2.105e-3).abs() < 1e-6);
    assert!((k.small_c2 - 3.3937).abs() < 1e-4);
    let z = zeta_of_m(1000, 5, 0.05).unwrap();
    assert!((z - ((5.0 * 18_000f64.ln() + 40f64.ln()) / 2000.0).sqrt()).abs() < 1e-15);
}

#[test]
fn halving_eps_ratio() {
    for n in 1..=10 {
        for &eps in &[0.01, 0.1, 0.5, 1.0, 2.0] {
            let a = sufficient_m_value(1.0, eps, n, 0.1, sufficient_m_constant()).unwrap();
            let b = sufficient_m_value(1.0, eps / 2.0, n, 0.1, sufficient_m_constant()).unwrap();
            let ratio = b / a;
            assert!(ratio > 2.0 && ratio < 2.6, "n={n} eps={eps}: {ratio}");
        }
    }
}

#[test]
fn eta_towards_one_lowers_m() {
    let mut last = u64::MAX;
    for &eta in &[0.01, 0.1, 0.5, 0.9, 0.999] {
        let m = sufficient_m(1.0, 0.25, 3, eta).unwrap();
        assert!(m < last);
        last = m;
    }
}

#[test]
fn lower_never_exceeds_sufficient() {
    for n in 1..=10 {
        for i in 0..=40 {
            let eps = 0.01 * 100f64.powf(i as f64 / 40.0);
            assert!(lower_bound_m(1.0, eps, n).unwrap() <= sufficient_m(1.0, eps, n, 0.1).unwrap() as f64);
        }
    }
}

#[test]
fn lower_bound_is_linear_in_n() {
    assert!((lower_bound_m(1.0, 0.2, 6).unwrap() - 2.0 * lower_bound_m(1.0, 0.2, 3).unwrap()).abs() < 1e-12);
}

#[test]
fn cell_count_recurrence_and_growth() {
    for n in 1..=6u32 {
        for m in 1..=60u64 {
            assert_eq!(cell_count(m, n), cell_count(m - 1, n) + cell_count(m - 1, n - 1));
        }
    }
    for n in 1..=5u32 {
        for m in u64::from(n)..=100 {
            let bound = (std::f64::consts::E * m as f64 / f64::from(n)).powi(n as i32);
            let f: f64 = cell_count(m, n).to_string().parse().unwrap();
            assert!(f <= bound, "F_{n}({m}) = {f} > {bound}");
        }
    }
}

#[test]
fn kappa_sandwich_for_large_n() {
    for n in 4..=12 {
        for &c0 in &[0.01, 0.1, 1.0, 5.0] {
            for &x in &[0.0, 0.5, 1.0] {
                let k = kappa_n(c0 / n as f64, 1.0, n, x).unwrap();
                assert!(k >= (c0 / (c0 + 6.0)).sqrt() - 1e-15);
                assert!(k <= (c0 / (c0 + 2.0)).sqrt() + 1e-15);
            }
        }
    }
    assert!(kappa_n(0.01 / 5.0, 1.0, 5, 0.0).unwrap() <= (0.01f64 / 2.0).sqrt());
}

#[test]
fn kappa_n3_at_origin_uses_first_branch() {
    let k = kappa_n(0.3, 1.0, 3, 0.0).unwrap();
    assert_eq!(k, (0.3f64 / (0.3 + 2.0 / 3.0)).sqrt());
}

#[test]
fn kappa_is_monotone_and_continuous() {
    for n in 2..=8 {
        let mut last = 0.0;
        for i in 1..=400 {
            let s = i as f64 * 0.005;
            let k = kappa_n(s, 1.0, n, 0.5).unwrap();
            assert!(k > last);
            let near = kappa_n(s + 1e-10, 1.0, n, 0.5).unwrap();
            assert!((near - k).abs() < 1e-8, "jump at n={n}, sigma2={s}");
            last = k;
        }
        assert_eq!(kappa_n(0.0, 1.0, n, 0.5).unwrap(), 0.0);
    }
}

#[test]
fn zeta_and_embedding_m_decrease() {
    let mut last = f64::INFINITY;
    for m in [10u64, 100, 1000, 10_000, 100_000, 1_000_000] {
        let z = zeta_of_m(m, 3, 0.1).unwrap();
        assert!(z < last);
        last = z;
    }
    assert!(zeta_of_m(1 << 40, 3, 0.1).unwrap() < 1e-5);
    let mut last = u64::MAX;
    for zeta in [0.05, 0.1, 0.2, 0.4] {
        let m = embedding_m(zeta, 3, 0.1).unwrap();
        assert!(m < last);
        last = m;
    }
}

/// Exact root of the sufficient-size formula for the embedding, by bisection.
fn exact_zeta(m: f64, n: usize, eta: f64) -> f64 {
    let nf = n as f64;
    let size = |z: f64| (2.0 * nf * (3.0 * nf.sqrt() / z).ln() + (2.0 / eta).ln()) / (2.0 * z * z);
    let (mut lo, mut hi) = (1e-9, 3.0 * nf.sqrt());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if size(mid) > m {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn zeta_round_trip() {
    for n in 1..=8 {
        for &eta in &[0.01, 0.1, 0.5] {
            for &zeta in &[0.02, 0.05, 0.1, 0.2, 0.4] {
                let m = embedding_m(zeta, n, eta).unwrap();
                let exact = exact_zeta(m as f64, n, eta);
                assert!(exact <= zeta * (1.0 + 1e-12), "n={n} zeta={zeta}: exact root {exact}");
                let closed = zeta_of_m(m, n, eta).unwrap();
                assert!(closed >= exact, "n={n} zeta={zeta}: closed form {closed} < {exact}");
            }
        }
    }
}

#[test]
#[ignore = "the closed-form distortion overshoots the requested one by up to 13% at these sizes"]
fn zeta_round_trip_within_five_percent() {
    for n in 1..=8 {
        for &zeta in &[0.05, 0.1, 0.2] {
            let m = embedding_m(zeta, n, 0.1).unwrap();
            assert!(zeta_of_m(m, n, 0.1).unwrap() <= 1.05 * zeta, "n={n} zeta={zeta}");
        }
    }
}

#[test]
fn error_bound_structure() {
    let k = embedding_constants();
    let (m, n, eta, r) = (1000u64, 5usize, 0.1, 1.5);
    let f0 = error_bound_flips(0.0, m, n, eta, r).unwrap();
    let f1 = error_bound_flips(0.1, m, n, eta, r).unwrap();
    assert!(rel((f1 - f0) / 0.1, 2.0 * r / k.big_c1) < 1e-12);
    // the Gaussian bound at zero variance keeps its concentration term
    let g0 = error_bound_gaussian(0.0, m, n, eta, r).unwrap();
    assert!(rel(g0 - f0, r / k.big_c1 * ((1.0 / eta).ln() / (2.0 * m as f64)).sqrt()) < 1e-10);
    let mut last = g0;
    for s in [0.001, 0.01, 0.1, 1.0] {
        let g = error_bound_gaussian(s, m, n, eta, r).unwrap();
        assert!(g > last);
        last = g;
    }
    let a0 = error_bound_arbitrary(0.0, 500, 3, eta, 1.0).unwrap();
    let zeta = zeta_of_m(500, 3, eta).unwrap();
    assert!(rel(a0, (k.small_c1 + 2.0 * k.small_c2) / k.big_c1 * zeta) < 1e-12);
    let a1 = error_bound_arbitrary(0.2, 500, 3, eta, 2.0).unwrap();
    let a2 = error_bound_arbitrary(0.0, 500, 3, eta, 2.0).unwrap();
    assert!(rel((a1 - a2) / 0.2, 2.0 * k.big_c2 / k.big_c1) < 1e-10);
    let far = error_bound_flips(0.0, 1 << 50, 2, eta, 1.0).unwrap();
    assert!(far < 1e-3);
}

#[test]
fn adaptive_budget_structure() {
    let c = sufficient_m_constant();
    let unit = adaptive_m_value(1.0, 1.0, 3, 0.1, c).unwrap();
    assert!(rel(unit, 2.0 * c * (3.0 * (2.0 * 3f64.sqrt()).ln() + 10f64.ln())) < 1e-13);
    let mut prev = unit;
    for t in 1..=8 {
        let v = adaptive_m_value(1.0, 0.5f64.powi(t), 3, 0.1, c).unwrap();
        assert!(rel(v - prev, unit) < 1e-12);
        prev = v;
    }
}

#[test]
fn invalid_inputs_rejected() {
    assert!(sufficient_m(1.0, 0.0, 2, 0.1).is_err());
    assert!(sufficient_m(1.0, 2.5, 2, 0.1).is_err());
    assert!(sufficient_m(1.0, 0.5, 2, 1.0).is_err());
    assert!(sufficient_m(1.0, 0.5, 0, 0.1).is_err());
    assert!(kappa_n(0.1, 1.0, 1, 0.0).is_err());
    assert!(kappa_n(0.1, 1.0, 4, 1.5).is_err());
    assert!(zeta_of_m(0, 3, 0.1).is_err());
    assert!(adaptive_m(1.0, 2.0, 3, 0.1, 1.0).is_err());
}

proptest! {
    #[test]
    fn bounds_are_pure(r in 0.1f64..5.0, frac in 0.01f64..1.0, n in 1usize..10, eta in 0.01f64..0.99) {
        let eps = frac * r;
        prop_assert_eq!(sufficient_m(r, eps, n, eta).unwrap(), sufficient_m(r, eps, n, eta).unwrap());
        let v = sufficient_m_value(r, eps, n, eta, sufficient_m_constant()).unwrap();
        prop_assert_eq!(sufficient_m(r, eps, n, eta).unwrap(), v.ceil() as u64);
        prop_assert!(lower_bound_m(r, eps, n).unwrap() <= v);
    }

    #[test]
    fn kappa_within_unit_interval(s in 0.0f64..10.0, n in 2usize..12, x in 0.0f64..1.0) {
        let k = kappa_n(s, 1.0, n, x).unwrap();
        prop_assert!((0.0..=1.0).contains(&k));
    }
}
