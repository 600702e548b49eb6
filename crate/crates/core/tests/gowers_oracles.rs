use std::f64::consts::TAU;

use oscillab_core::dynsys::RealPoly;
use oscillab_core::gowers::{
    gowers_inner_product, gowers_norm, gowers_norm_interval, gowers_norm_naive, gowers_norm_recursive,
    gowers_u2_fft, poly_phase_modulate, CyclicFunction, GowersMethod,
};
use oscillab_core::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn random_function(rng: &mut ChaCha20Rng, n: usize) -> CyclicFunction {
    CyclicFunction::new(
        (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    )
    .unwrap()
}

/// Straight transcription of the cube average: every `(x, h) ∈ (Z/N)^{d+1}`
/// enumerated as one integer, no reuse of partial products.
fn literal_cube_power(f: &CyclicFunction, d: u32) -> f64 {
    let n = f.modulus();
    let total = n.pow(d + 1);
    let mut acc = Complex64::new(0.0, 0.0);
    for t in 0..total {
        let x = t % n;
        let h: Vec<usize> = (1..=d).map(|i| t / n.pow(i) % n).collect();
        let mut prod = Complex64::new(1.0, 0.0);
        for c in 0..1usize << d {
            let shift: usize = (0..d as usize).filter(|&i| c >> i & 1 == 1).map(|i| h[i]).sum();
            let v = f.values()[(x + shift) % n];
            prod *= if c.count_ones() % 2 == 1 { v.conj() } else { v };
        }
        acc += prod;
    }
    (acc / total as f64).re
}

#[test]
fn naive_matches_literal_cube_average() {
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    for (n, d) in [(5, 1), (7, 2), (6, 3), (4, 4)] {
        let f = random_function(&mut rng, n);
        let want = literal_cube_power(&f, d);
        let got = gowers_norm_naive(&f, d).unwrap().raw_power;
        assert!((got - want).abs() < 1e-12, "N={n} d={d}: {got} vs {want}");
    }
}

#[test]
fn three_evaluators_agree_on_200_inputs() {
    let mut rng = ChaCha20Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=64);
        let f = random_function(&mut rng, n);
        let a = gowers_norm_naive(&f, 2).unwrap().norm;
        let b = gowers_norm_recursive(&f, 2).unwrap().norm;
        let c = gowers_u2_fft(&f).unwrap().norm;
        worst = worst.max((a - b).abs()).max((a - c).abs());
    }
    assert!(worst < 1e-9, "worst disagreement {worst:e}");
}

#[test]
fn naive_and_recursive_agree_at_higher_order() {
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    for d in 3..=4 {
        for n in [3, 8, 12] {
            let f = random_function(&mut rng, n);
            let a = gowers_norm_naive(&f, d).unwrap().norm;
            let b = gowers_norm_recursive(&f, d).unwrap().norm;
            assert!((a - b).abs() < 1e-10, "d={d} N={n}");
        }
    }
}

#[test]
fn constant_and_character_norms() {
    for n in [1, 2, 9, 32] {
        let one = CyclicFunction::constant(Complex64::new(1.0, 0.0), n).unwrap();
        for d in 1..=3 {
            let r = gowers_norm(&one, d, GowersMethod::Recursive).unwrap();
            assert!((r.norm - 1.0).abs() < 1e-12);
        }
    }
    // a linear phase has U¹ norm 0 and U² norm 1
    let n = 16;
    let chi = CyclicFunction::new((0..n).map(|x| Complex64::from_polar(1.0, TAU * 3.0 * x as f64 / n as f64)).collect()).unwrap();
    assert!(gowers_norm_recursive(&chi, 1).unwrap().norm < 1e-12);
    assert!((gowers_u2_fft(&chi).unwrap().norm - 1.0).abs() < 1e-12);
}

#[test]
fn u2_is_l4_norm_of_fourier_transform() {
    // independent DFT by definition
    let mut rng = ChaCha20Rng::seed_from_u64(99);
    let f = random_function(&mut rng, 20);
    let n = f.modulus();
    let mut sum = 0.0;
    for xi in 0..n {
        let mut hat = Complex64::new(0.0, 0.0);
        for x in 0..n {
            hat += f.values()[x] * Complex64::from_polar(1.0, -TAU * (x * xi) as f64 / n as f64);
        }
        sum += (hat / n as f64).norm_sqr().powi(2);
    }
    let got = gowers_u2_fft(&f).unwrap().raw_power;
    assert!((got - sum).abs() < 1e-13);
}

#[test]
fn monotone_in_order_on_100_inputs() {
    let mut rng = ChaCha20Rng::seed_from_u64(77);
    for _ in 0..100 {
        let n = rng.gen_range(2..=20);
        let f = random_function(&mut rng, n);
        let u1 = gowers_norm_recursive(&f, 1).unwrap().norm;
        let u2 = gowers_norm_recursive(&f, 2).unwrap().norm;
        let u3 = gowers_norm_recursive(&f, 3).unwrap().norm;
        assert!(u1 <= u2 + 1e-10 && u2 <= u3 + 1e-10, "{u1} {u2} {u3}");
    }
}

#[test]
fn cauchy_schwarz_gowers_on_100_families() {
    let mut rng = ChaCha20Rng::seed_from_u64(31);
    for _ in 0..100 {
        let family: Vec<CyclicFunction> = (0..4).map(|_| random_function(&mut rng, 16)).collect();
        let lhs = gowers_inner_product(&family, 2).unwrap().norm();
        let rhs: f64 = family.iter().map(|f| gowers_u2_fft(f).unwrap().norm).product();
        assert!(lhs <= rhs + 1e-12, "{lhs} > {rhs}");
    }
}

#[test]
fn inner_product_of_equal_family_is_norm_power() {
    let mut rng = ChaCha20Rng::seed_from_u64(8);
    let f = random_function(&mut rng, 9);
    let family = vec![f.clone(); 8];
    let ip = gowers_inner_product(&family, 3).unwrap();
    let raw = gowers_norm_naive(&f, 3).unwrap().raw_power;
    assert!((ip.re - raw).abs() < 1e-12 && ip.im.abs() < 1e-12);
}

/// Degree ≤ d−1 phases `Σ aⱼ xʲ / N` are well defined on `Z/N`.
fn exact_phase(rng: &mut ChaCha20Rng, n: usize, degree: usize) -> RealPoly {
    let mut coeffs = vec![rng.gen::<f64>()];
    coeffs.extend((1..=degree).map(|_| rng.gen_range(0..n) as f64 / n as f64));
    RealPoly::monomial(coeffs)
}

#[test]
fn polynomial_phases_leave_the_norm_unchanged() {
    let mut rng = ChaCha20Rng::seed_from_u64(123);
    for d in 2..=3u32 {
        for _ in 0..10 {
            let n = 8;
            let f = random_function(&mut rng, n);
            let phi = exact_phase(&mut rng, n, d as usize - 1);
            let g = poly_phase_modulate(&f, &phi);
            let a = gowers_norm_recursive(&f, d).unwrap().norm;
            let b = gowers_norm_recursive(&g, d).unwrap().norm;
            assert!((a - b).abs() < 1e-10);
        }
    }
}

#[test]
fn phase_correlation_is_bounded_by_the_norm() {
    let mut rng = ChaCha20Rng::seed_from_u64(321);
    for d in 2..=3u32 {
        for _ in 0..20 {
            let n = 12;
            let f = random_function(&mut rng, n);
            let phi = exact_phase(&mut rng, n, d as usize - 1);
            let corr = poly_phase_modulate(&f, &phi).mean().norm();
            let norm = gowers_norm_recursive(&f, d).unwrap().norm;
            assert!(corr <= norm + 1e-12);
        }
    }
}

#[test]
fn interval_norm_of_indicator_is_one() {
    let ones = vec![Complex64::new(1.0, 0.0); 10];
    for (d, m) in [(1, GowersMethod::Recursive), (2, GowersMethod::FftU2), (3, GowersMethod::Recursive)] {
        let r = gowers_norm_interval(&ones, d, m).unwrap();
        assert!((r.norm - 1.0).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shift_and_conjugation_invariance(
        values in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..24),
        a in -50i64..50,
    ) {
        let f = CyclicFunction::new(values.iter().map(|&(x, y)| Complex64::new(x, y)).collect()).unwrap();
        let base = gowers_u2_fft(&f).unwrap().norm;
        prop_assert!((gowers_u2_fft(&f.shift(a)).unwrap().norm - base).abs() < 1e-12);
        let conj = CyclicFunction::new(f.values().iter().map(|z| z.conj()).collect()).unwrap();
        prop_assert!((gowers_u2_fft(&conj).unwrap().norm - base).abs() < 1e-12);
    }

    #[test]
    fn triangle_inequality(
        pair in (1usize..16).prop_flat_map(|n| (
            prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n),
            prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n),
        )),
        d in 2u32..=3,
    ) {
        let to_f = |v: &[(f64, f64)]| CyclicFunction::new(v.iter().map(|&(x, y)| Complex64::new(x, y)).collect()).unwrap();
        let (f, g) = (to_f(&pair.0), to_f(&pair.1));
        let sum = f.add(&g).unwrap();
        let lhs = gowers_norm_recursive(&sum, d).unwrap().norm;
        let rhs = gowers_norm_recursive(&f, d).unwrap().norm + gowers_norm_recursive(&g, d).unwrap().norm;
        prop_assert!(lhs <= rhs + 1e-10);
    }

    #[test]
    fn norm_is_bounded_by_sup(values in prop::collection::vec(-3.0f64..3.0, 1..32)) {
        let f = CyclicFunction::from_real(values.iter().copied()).unwrap();
        let sup = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        prop_assert!(gowers_u2_fft(&f).unwrap().norm <= sup + 1e-12);
    }
}
