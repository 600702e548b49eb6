use oscillab_core::correlate::{cesaro_correlation, grid_sup, oscillation_order_test, PolyGrid};
use oscillab_core::dynsys::{quasi_eigen_eval, QuasiEigenData, RealPoly};
use oscillab_core::gowers::{gowers_norm_interval, GowersMethod};
use oscillab_core::seqgen::{random_weights, rudin_shapiro, thue_morse, WeightDistribution};
use oscillab_core::{Complex64, PhaseSequence};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

#[test]
#[allow(clippy::approx_constant)]
fn quasi_eigen_correlation_is_below_the_augmented_sup() {
    let n = 1 << 16;
    let c = random_weights(n as u64, &WeightDistribution::rademacher(7)).unwrap();
    let q = QuasiEigenData::new(vec![0.318, 0.0271, 0.6180339887], 0.25);
    let a = quasi_eigen_eval(&q, n + 1).unwrap().window(1, n).unwrap();
    let corr = cesaro_correlation(&c, &a, &[n]).unwrap()[0].1.norm();
    let grid = PolyGrid::new(3, 4, 20, 1).with_extra(q.phase_poly().to_monomial_basis().unwrap());
    let sup = oscillation_order_test(&c, 3, &grid, &[n]).unwrap()[0].1.sup_value;
    assert!(corr <= sup + 1e-12, "{corr} > {sup}");
    assert!(corr < 0.05);
}

#[test]
fn raising_the_order_never_lowers_the_sup() {
    let c = random_weights(4096, &WeightDistribution::rademacher(3)).unwrap();
    let grid = PolyGrid::new(1, 6, 30, 9);
    let mut last = 0.0;
    for k in 1..=3 {
        let s = oscillation_order_test(&c, k, &grid, &[4096]).unwrap()[0].1.sup_value;
        assert!(s >= last);
        last = s;
    }
}

#[test]
fn refining_the_grid_never_lowers_the_sup() {
    let c = random_weights(2000, &WeightDistribution::rademacher(4)).unwrap();
    let mut last = 0.0;
    for (q, r) in [(2, 0), (5, 10), (5, 40), (9, 40), (9, 120)] {
        let s = grid_sup(&c, &PolyGrid::new(2, q, r, 17), 2000).unwrap().sup_value;
        assert!(s >= last, "Q={q} R={r}");
        last = s;
    }
}

#[test]
fn cesaro_is_linear_in_the_second_argument() {
    let mut rng = ChaCha20Rng::seed_from_u64(1);
    let mk = |rng: &mut ChaCha20Rng| {
        PhaseSequence::unimodular((0..3000).map(|_| Complex64::from_polar(1.0, rng.gen::<f64>() * 6.0)).collect(), 1)
            .unwrap()
    };
    let (c, a, b) = (mk(&mut rng), mk(&mut rng), mk(&mut rng));
    let (s, t) = (Complex64::new(0.3, -0.2), Complex64::new(-0.5, 0.1));
    let combo = PhaseSequence::new(
        a.values().iter().zip(b.values()).map(|(x, y)| s * x + t * y).collect(),
        1.0,
        1,
    )
    .unwrap();
    let cps = [10, 500, 3000];
    let ra = cesaro_correlation(&c, &a, &cps).unwrap();
    let rb = cesaro_correlation(&c, &b, &cps).unwrap();
    let rc = cesaro_correlation(&c, &combo, &cps).unwrap();
    for i in 0..cps.len() {
        assert!((rc[i].1 - (s * ra[i].1 + t * rb[i].1)).norm() < 1e-12);
    }
}

/// Phases `Σ aⱼ xʲ / M` of degree ≤ d−1 with `M = 2^d N`, all numerators.
fn exact_grid(d: u32, n: usize) -> PolyGrid {
    let m = n << d;
    let mut grid = PolyGrid::new(d - 1, 0, 0, 0);
    let total = m.pow(d - 1);
    for t in 0..total {
        let mut coeffs = vec![0.0];
        let mut rest = t;
        for _ in 1..d {
            coeffs.push((rest % m) as f64 / m as f64);
            rest /= m;
        }
        grid = grid.with_extra(RealPoly::monomial(coeffs));
    }
    grid
}

#[test]
fn grid_sup_is_controlled_by_the_interval_norm() {
    let mut rng = ChaCha20Rng::seed_from_u64(2);
    for (d, n, method) in [(2, 64, GowersMethod::FftU2), (3, 8, GowersMethod::Recursive)] {
        let grid = exact_grid(d, n);
        let tm = thue_morse(n as u64).unwrap();
        let rs = rudin_shapiro(n as u64).unwrap();
        let near_constant = PhaseSequence::unimodular(
            (0..n).map(|_| Complex64::from_polar(1.0, 0.3 * rng.gen::<f64>())).collect(),
            0,
        )
        .unwrap();
        let phase = PhaseSequence::unimodular(
            RealPoly::monomial(vec![0.0, 0.3, 0.7]).phase_stepper(0).take(n).map(|t| t.cis()).collect(),
            0,
        )
        .unwrap();
        for f in [tm, rs, near_constant, phase] {
            let sup = grid_sup(&f, &grid, n).unwrap().sup_value;
            let norm = gowers_norm_interval(f.values(), d, method).unwrap().norm;
            assert!(sup <= norm + 2e-2, "d={d}: {sup} vs {norm}");
        }
    }
}
