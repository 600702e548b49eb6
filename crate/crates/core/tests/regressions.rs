use oscillab_core::correlate::{
    beta_integral_check, block_average, expansive_search, grid_sup, momo_average, rauzy_independence,
    BetaIntegralConfig, PolyGrid, Weights, DEFAULT_BETA_CONSTANT,
};
use oscillab_core::dynsys::RealPoly;
use oscillab_core::seqgen::{bracket_seq, liouville_range, random_weights, WeightDistribution};

fn close(got: f64, want: f64) {
    assert!((got - want).abs() <= 1e-9 * want.abs().max(1e-12), "got {got:?}, want {want:?}");
}

#[test]
fn rademacher_grid_sup_at_65536() {
    let c = random_weights(1 << 16, &WeightDistribution::rademacher(20240601)).unwrap();
    let sup = grid_sup(&c, &PolyGrid::new(2, 20, 200, 1), 1 << 16).unwrap().sup_value;
    close(sup, 0.012933532133477112);
    assert!(sup < 0.05);
}

#[test]
fn square_block_average_of_rademacher() {
    let c = random_weights(1 << 16, &WeightDistribution::rademacher(20240601)).unwrap();
    let blocks: Vec<usize> = (0..=100).map(|k| k * k).collect();
    let v = block_average(&c, &blocks, 1).unwrap();
    close(v, 0.0758);
    assert!(v < 0.5);
}

#[test]
fn independent_seeds_decorrelate() {
    let f = random_weights(100_000, &WeightDistribution::rademacher(1)).unwrap();
    let g = random_weights(100_000, &WeightDistribution::rademacher(2)).unwrap();
    let r = rauzy_independence(&f, &g, &[100_000]).unwrap();
    close(r[0].1, 0.004315176);
    assert!(r[0].1 < 0.05);
}

#[test]
fn beta_integral_defaults() {
    let cfg = BetaIntegralConfig {
        a: 1.1,
        b: 2.0,
        h: 1000,
        ell: 1,
        m: 1000,
        quad_points: 100,
        alpha: 1.0,
        q: RealPoly::zero(),
        constant: DEFAULT_BETA_CONSTANT,
    };
    let r = beta_integral_check(&cfg).unwrap();
    close(r.lhs, 0.001023498408803189);
    close(r.rhs, 0.08096367567650245);
    assert!(r.lhs < r.rhs);
}

#[test]
fn expansive_search_liouville() {
    let t = liouville_range(1000).unwrap();
    let r = expansive_search(2, 1000, Weights::Liouville(&t), 20).unwrap();
    assert_eq!(r.digits, vec![0, 1, 0, 0, 0, 0, 0, 1, 1, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0]);
    close(r.x, 0.25684356689453125);
    close(r.correlation, 0.002197977036748744);
}

#[test]
fn momo_bracket_decreases_with_h() {
    let b = bracket_seq(30_000, "sqrt2".parse().unwrap(), "sqrt3".parse().unwrap())
        .unwrap()
        .with_origin(0);
    let short = momo_average(&b, 10_000, 100, 1).unwrap().value;
    let long = momo_average(&b, 10_000, 1000, 1).unwrap().value;
    close(short, 0.09217735418974529);
    close(long, 0.02972587549750018);
    assert!(long < short);
}
