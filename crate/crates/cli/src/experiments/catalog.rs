use oscillab_core::correlate::{
    beta_integral_check, cesaro_correlation, expansive_search, grid_sup, huang_sup, momo_average,
    oscillation_order_test, weyl_sup_mobius, BetaIntegralConfig, PolyGrid, Weights,
};
use oscillab_core::dynsys::{
    poly_orbit_eval, quasi_eigen_eval, skew_product, Character, QuasiEigenData, RealPoly, TorusPoint,
};
use oscillab_core::gowers::{gowers_norm_interval, GowersMethod};
use oscillab_core::seqgen::{
    akiyama_jiang, bracket_seq, geometric_phase, random_weights, rudin_shapiro, thue_morse, AkiyamaJiang,
    GFunction, GeometricArg, Irrational, WeightDistribution, WeightKind,
};
use oscillab_core::{Complex64, PhaseSequence, Turn};

use super::{ladder, Experiment, Params, RunContext};
use crate::error::{CliError, Result};
use crate::manifest::Outcome;

pub(super) static EXPERIMENTS: &[Experiment] = &[
    Experiment {
        name: "osc-random",
        about: "grid supremum of polynomial correlations of random weights at two scales",
        params: &[("weights", "rademacher"), ("n", "65536"), ("k", "2"), ("q", "20"), ("r", "200"), ("grid_seed", "1")],
        default_checkpoints: Some(|p| Ok(ladder(p.usize("n")?, &[1024]))),
        run: osc_random,
    },
    Experiment {
        name: "osc-mobius",
        about: "sup over a theta grid of Möbius-weighted Weyl sums of n^k theta",
        params: &[("weights", "mobius"), ("n", "1000000"), ("k", "2"), ("theta_points", "200")],
        default_checkpoints: Some(|p| {
            let n = p.usize("n")?;
            Ok(ladder(n, &[n / 100, n / 10]).into_iter().filter(|&c| c > 0).collect())
        }),
        run: osc_mobius,
    },
    Experiment {
        name: "quasi-orthogonality",
        about: "random weights against a quasi-eigenfunction sample, with the augmented grid bound",
        params: &[
            ("weights", "rademacher"),
            ("n", "65536"),
            ("thetas", "0.318,0.0271,0.6180339887"),
            ("base_phase", "0.25"),
            ("q", "20"),
            ("r", "200"),
            ("grid_seed", "1"),
        ],
        default_checkpoints: Some(|p| Ok(ladder(p.usize("n")?, &[1024]))),
        run: quasi_orthogonality,
    },
    Experiment {
        name: "fan2",
        about: "random weights against products of characters along polynomial times of a skew product",
        params: &[
            ("weights", "rademacher"),
            ("n", "65536"),
            ("dim", "2"),
            ("terms", "3"),
            ("alpha", "0.41421356237309503"),
            ("x0", "0.1"),
        ],
        default_checkpoints: Some(|p| Ok(ladder(p.usize("n")?, &[1024]))),
        run: fan2,
    },
    Experiment {
        name: "non-orthogonality",
        about: "Thue–Morse against the zeroth coordinate of its own shift orbit",
        params: &[("n", "65536")],
        default_checkpoints: Some(|p| {
            let n = p.usize("n")?;
            let powers: Vec<usize> = (0..usize::BITS).map(|i| 1usize << i).take_while(|&c| c < n).collect();
            Ok(ladder(n, &powers))
        }),
        run: non_orthogonality,
    },
    Experiment {
        name: "almost-nil-counterexample",
        about: "grid supremum for the bracket sequence, against a pure polynomial phase from the grid",
        params: &[
            ("alpha", "sqrt2"),
            ("beta", "sqrt3"),
            ("n", "100000"),
            ("k", "3"),
            ("q", "20"),
            ("r", "200"),
            ("grid_seed", "1"),
            ("probe", "1/3,2/7,5/11"),
        ],
        default_checkpoints: Some(|p| Ok(vec![p.usize("n")?])),
        run: almost_nil,
    },
    Experiment {
        name: "gowers-tm-rs",
        about: "interval U² norms of Thue–Morse and Rudin–Shapiro at two scales",
        params: &[("n", "65536"), ("d", "2"), ("method", "fft_u2")],
        default_checkpoints: Some(|p| Ok(ladder(p.usize("n")?, &[1024]))),
        run: gowers_tm_rs,
    },
    Experiment {
        name: "momo-akiyama",
        about: "short-interval averages of Akiyama–Jiang phases over a beta grid, and the beta-integral bound",
        params: &[
            ("alpha", "1"),
            ("g", "one"),
            ("a", "1.1"),
            ("b", "2"),
            ("points", "20"),
            ("m", "10000"),
            ("h_short", "100"),
            ("h_long", "1000"),
            ("ell", "1"),
            ("integral_h", "1000"),
            ("integral_m", "1000"),
            ("quad_points", "100"),
            ("constant", "10"),
        ],
        default_checkpoints: None,
        run: momo_akiyama,
    },
    Experiment {
        name: "huang-sup",
        about: "Möbius double average over short windows, sup over a beta grid, with N = L",
        params: &[("weights", "mobius"), ("n", "1000"), ("ks", "1,2"), ("beta_points", "100")],
        default_checkpoints: Some(|p| {
            let n = p.usize("n")?;
            Ok(ladder(n, &[n / 10]).into_iter().filter(|&c| c > 0).collect())
        }),
        run: huang,
    },
    Experiment {
        name: "banks-2n",
        about: "plain and Möbius-weighted averages of e(bⁿx)",
        params: &[("n", "65536"), ("base", "2"), ("x", "1/7"), ("weights", "mobius")],
        default_checkpoints: Some(|p| Ok(ladder(p.usize("n")?, &[1024]))),
        run: banks,
    },
    Experiment {
        name: "expansive-search",
        about: "greedy digit search for x correlating Liouville with sin(2π bⁿ x)",
        params: &[("base", "2"), ("n", "1000"), ("digits", "20"), ("weights", "liouville")],
        default_checkpoints: None,
        run: expansive,
    },
];

fn as_f64(v: &[usize]) -> Vec<f64> {
    v.iter().map(|&x| x as f64).collect()
}

fn last(cps: &[usize]) -> Result<usize> {
    cps.last()
        .copied()
        .ok_or_else(|| CliError::InvalidParam("at least one checkpoint is needed".into()))
}

fn check_covered(cps: &[usize], n: usize) -> Result<()> {
    match cps.iter().find(|&&c| c > n) {
        Some(c) => Err(CliError::InvalidParam(format!("checkpoint {c} exceeds n = {n}"))),
        None => Ok(()),
    }
}

/// Weights `w(1), …, w(n)` (origin 1) by name: a random distribution or a sieve function.
pub(super) fn weight_sequence(kind: &str, n: usize, seed: u64, ctx: &RunContext) -> Result<PhaseSequence> {
    match kind {
        "mobius" => Ok(ctx.sieve((n as u64).max(2))?.mobius_sequence(n as u64)?),
        "liouville" => Ok(ctx.sieve((n as u64).max(2))?.liouville_sequence(n as u64)?),
        other => {
            let kind: WeightKind = other.parse()?;
            Ok(random_weights(n as u64, &WeightDistribution::new(kind, seed))?)
        }
    }
}

fn osc_random(p: &Params, cps: &[usize], seed: u64, ctx: &RunContext) -> Result<Outcome> {
    let n = p.usize("n")?;
    check_covered(cps, n)?;
    let c = weight_sequence(&p.text("weights")?, n, seed, ctx)?;
    let grid = PolyGrid::new(p.u32("k")?, p.u32("q")?, p.u32("r")?, p.u64("grid_seed")?);
    let reports = oscillation_order_test(&c, p.u32("k")?, &grid, cps)?;
    let sups: Vec<f64> = reports.iter().map(|(_, r)| r.sup_value).collect();
    let mut out = Outcome::default();
    out.series("sup", as_f64(cps), sups.clone());
    out.text("argmax", reports.last().map(|(_, r)| r.argmax_label.clone()).unwrap_or_default());
    let ratio = sups[sups.len() - 1] / sups[0];
    out.scalar("ratio", ratio);
    out.flag("ratio_below_0.35", cps.len() >= 2 && ratio < 0.35);
    Ok(out)
}

fn grid_points(count: usize) -> Vec<f64> {
    (0..count).map(|j| (j as f64 + 0.5) / count as f64).collect()
}

fn sieve_weights<'a>(kind: &str, table: &'a oscillab_core::seqgen::SieveTable) -> Result<Weights<'a>> {
    match kind {
        "mobius" => Ok(Weights::Mobius(table)),
        "liouville" => Ok(Weights::Liouville(table)),
        "ones" => Ok(Weights::Ones),
        other => Err(CliError::InvalidParam(format!(
            "weights must be mobius, liouville or ones, got {other:?}"
        ))),
    }
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.len() >= 2 && v.windows(2).all(|p| p[1] < p[0])
}

fn osc_mobius(p: &Params, cps: &[usize], _seed: u64, ctx: &RunContext) -> Result<Outcome> {
    let n = p.usize("n")?;
    check_covered(cps, n)?;
    let table = ctx.sieve((n as u64).max(2))?;
    let weights = sieve_weights(&p.text("weights")?, &table)?;
    let grid = grid_points(p.usize("theta_points")?);
    let k = p.u32("k")?;
    let mut sups = Vec::new();
    let mut argmax = Vec::new();
    for &c in cps {
        let r = weyl_sup_mobius(c, k, &grid, weights)?;
        sups.push(r.sup_value);
        argmax.push(r.argmax_params[0]);
    }
    let mut out = Outcome::default();
    out.series("sup", as_f64(cps), sups.clone());
    out.series("argmax_theta", as_f64(cps), argmax);
    out.flag("strictly_decreasing", strictly_decreasing(&sups));
    Ok(out)
}

fn quasi_orthogonality(p: &Params, cps: &[usize], seed: u64, ctx: &RunContext) -> Result<Outcome> {
    let n = p.usize("n")?;
    check_covered(cps, n)?;
    let c = weight_sequence(&p.text("weights")?, n, seed, ctx)?;
    let q = QuasiEigenData::new(p.list("thetas")?, p.f64("base_phase")?);
    // the weights start at n = 1
    let a = quasi_eigen_eval(&q, n + 1)?.window(1, n)?;
    let corr: Vec<f64> = cesaro_correlation(&c, &a, cps)?.iter().map(|(_, z)| z.norm()).collect();
    let order = q.order() as u32;
    let grid = PolyGrid::new(order, p.u32("q")?, p.u32("r")?, p.u64("grid_seed")?)
        .with_extra(q.phase_poly().to_monomial_basis()?);
    let top = last(cps)?;
    let sup = grid_sup(&c, &grid, top)?.sup_value;
    let final_corr = corr[corr.len() - 1];
    let mut out = Outcome::default();
    out.series("correlation", as_f64(cps), corr);
    out.scalar("augmented_sup", sup);
    out.flag("below_augmented_sup", final_corr <= sup + 1e-12);
    out.flag("below_0.05", final_corr < 0.05);
    Ok(out)
}

fn fan2(p: &Params, cps: &[usize], seed: u64, ctx: &RunContext) -> Result<Outcome> {
    let n = p.usize("n")?;
    check_covered(cps, n)?;
    let dim = p.usize("dim")?;
    let terms = p.usize("terms")?;
    if terms == 0 {
        return Err(CliError::InvalidParam("terms must be at least 1".into()));
    }
    let map = skew_product(dim, Turn::from_f64(p.f64("alpha")?))?;
    let x0 = TorusPoint::from_f64(&vec![p.f64("x0")?; dim]);
    // q_i(n) = nⁱ, each read through the last coordinate
    let polys: Vec<RealPoly> = (1..=terms)
        .map(|i| {
            let mut c = vec![0.0; i + 1];
            c[i] = 1.0;
            RealPoly::monomial(c)
        })
        .collect();
    let chars = vec![Character::coordinate(dim, dim - 1); terms];
    let a = poly_orbit_eval(&map, &x0, &polys, &chars, n + 1)?.window(1, n)?;
    let c = weight_sequence(&p.text("weights")?, n, seed, ctx)?;
    let corr: Vec<f64> = cesaro_correlation(&c, &a, cps)?.iter().map(|(_, z)| z.norm()).collect();
    let mut out = Outcome::default();
    out.flag("final_below_0.05", corr[corr.len() - 1] < 0.05);
    out.series("correlation", as_f64(cps), corr);
    Ok(out)
}

/// `π₀(Sᵏy)`: the zeroth coordinate of the shifted point is `y_k`.
fn zeroth_after_shift(y: &PhaseSequence, k: usize) -> Complex64 {
    y.values()[k..][0]
}

fn non_orthogonality(p: &Params, cps: &[usize], _seed: u64, _ctx: &RunContext) -> Result<Outcome> {
    let n = p.usize("n")?;
    check_covered(cps, n)?;
    let t = thue_morse(n as u64)?;
    let orbit = PhaseSequence::new((0..n).map(|k| zeroth_after_shift(&t, k)).collect(), 1.0, 0)?;
    let avgs: Vec<f64> = cesaro_correlation(&t, &orbit, cps)?.iter().map(|(_, z)| z.re).collect();
    let mut out = Outcome::default();
    out.flag("all_exactly_one", avgs.iter().all(|&v| v == 1.0));
    out.series("average", as_f64(cps), avgs);
    Ok(out)
}

fn parse_rational(s: &str) -> Result<(i64, u64)> {
    match s.parse::<GeometricArg>()? {
        GeometricArg::Rational { p, q } => Ok((p, q)),
        GeometricArg::Real(_) => Err(CliError::InvalidParam(format!(
            "probe coefficients must be fractions p/q, got {s:?}"
        ))),
    }
}

/// `e^{−2πi Σⱼ (pⱼ/qⱼ) nʲ}` for `n = 1..=len`, exact mod 1.
fn rational_probe(coeffs: &[(i64, u64)], len: usize) -> Result<PhaseSequence> {
    let values = (1..=len as u128)
        .map(|n| {
            let mut phase = Turn::ZERO;
            for (j, &(p, q)) in coeffs.iter().enumerate() {
                let q = q as u128;
                let mut power = 1u128;
                for _ in 0..=j {
                    power = power * (n % q) % q;
                }
                let num = (p as i128).rem_euclid(q as i128) as u128 * power % q;
                phase += Turn::from_ratio(num as i128, q);
            }
            phase.cis().conj()
        })
        .collect();
    Ok(PhaseSequence::unimodular(values, 1)?)
}

fn almost_nil(p: &Params, cps: &[usize], _seed: u64, _ctx: &RunContext) -> Result<Outcome> {
    let n = p.usize("n")?;
    check_covered(cps, n)?;
    let alpha: Irrational = p.parsed("alpha")?;
    let beta: Irrational = p.parsed("beta")?;
    let k = p.u32("k")?;
    let grid = PolyGrid::new(k, p.u32("q")?, p.u32("r")?, p.u64("grid_seed")?);
    let bracket = bracket_seq(n as u64, alpha, beta)?;
    let reports = oscillation_order_test(&bracket, k, &grid, cps)?;
    let sups: Vec<f64> = reports.iter().map(|(_, r)| r.sup_value).collect();

    let probe: Vec<(i64, u64)> = p
        .text("probe")?
        .split([',', ';'])
        .map(|s| parse_rational(s.trim()))
        .collect::<Result<_>>()?;
    if probe.len() > k as usize {
        return Err(CliError::InvalidParam(format!("probe has degree {} > k = {k}", probe.len())));
    }
    let pure = rational_probe(&probe, n)?;
    let pure_sup = grid_sup(&pure, &grid, last(cps)?)?;

    let final_sup = sups[sups.len() - 1];
    let mut out = Outcome::default();
    out.series("bracket_sup", as_f64(cps), sups);
    out.text("bracket_argmax", reports.last().map(|(_, r)| r.argmax_label.clone()).unwrap_or_default());
    out.scalar("pure_phase_sup", pure_sup.sup_value);
    out.text("pure_phase_argmax", pure_sup.argmax_label);
    out.flag("bracket_below_0.05", final_sup < 0.05);
    out.flag("pure_phase_is_one", (pure_sup.sup_value - 1.0).abs() < 1e-12);
    Ok(out)
}

fn gowers_tm_rs(p: &Params, cps: &[usize], _seed: u64, _ctx: &RunContext) -> Result<Outcome> {
    let n = p.usize("n")?;
    check_covered(cps, n)?;
    let d = p.u32("d")?;
    let method: GowersMethod = p.parsed("method")?;
    let mut out = Outcome::default();
    for (name, seq) in [("thue_morse", thue_morse(n as u64)?), ("rudin_shapiro", rudin_shapiro(n as u64)?)] {
        let norms: Vec<f64> = cps
            .iter()
            .map(|&c| Ok(gowers_norm_interval(&seq.values()[..c], d, method)?.norm))
            .collect::<Result<_>>()?;
        let ratio = norms[norms.len() - 1] / norms[0];
        out.series(&format!("{name}_norm"), as_f64(cps), norms);
        out.scalar(&format!("{name}_ratio"), ratio);
        out.flag(&format!("{name}_ratio_below_0.5"), cps.len() >= 2 && ratio < 0.5);
    }
    Ok(out)
}

fn momo_akiyama(p: &Params, _cps: &[usize], _seed: u64, _ctx: &RunContext) -> Result<Outcome> {
    let alpha = p.f64("alpha")?;
    let g: GFunction = p.parsed("g")?;
    let (a, b) = (p.f64("a")?, p.f64("b")?);
    let points = p.usize("points")?;
    let m = p.u64("m")?;
    let (h_short, h_long) = (p.u64("h_short")?, p.u64("h_long")?);
    let ell = p.i64("ell")?;
    if points == 0 || !(b > a) {
        return Err(CliError::InvalidParam("need points ≥ 1 and b > a".into()));
    }
    let betas: Vec<f64> = (0..points)
        .map(|i| a + (i as f64 + 0.5) * (b - a) / points as f64)
        .collect();
    let len = 2 * m + h_short.max(h_long);
    let mut short = Vec::with_capacity(points);
    let mut long = Vec::with_capacity(points);
    for &beta in &betas {
        let w = akiyama_jiang(len, &AkiyamaJiang::new(alpha, beta, g))?;
        short.push(momo_average(&w, m, h_short, ell)?.value);
        long.push(momo_average(&w, m, h_long, ell)?.value);
    }
    let decreases = short.iter().zip(&long).filter(|(s, l)| l < s).count();

    let integral = beta_integral_check(&BetaIntegralConfig {
        a,
        b,
        h: p.u64("integral_h")?,
        ell,
        m: p.u64("integral_m")?,
        quad_points: p.usize("quad_points")?,
        alpha,
        q: RealPoly::zero(),
        constant: p.f64("constant")?,
    })?;

    let mut out = Outcome::default();
    out.series("momo_short", betas.clone(), short);
    out.series("momo_long", betas, long);
    out.scalar("decrease_count", decreases as f64);
    out.scalar("integral_lhs", integral.lhs);
    out.scalar("integral_rhs", integral.rhs);
    out.flag("decrease_count_at_least_16", decreases >= 16);
    out.flag("integral_lhs_below_rhs", integral.lhs < integral.rhs);
    Ok(out)
}

fn huang(p: &Params, cps: &[usize], _seed: u64, ctx: &RunContext) -> Result<Outcome> {
    let top = last(cps)?;
    let table = ctx.sieve((2 * top as u64).max(2))?;
    let weights = sieve_weights(&p.text("weights")?, &table)?;
    let grid = grid_points(p.usize("beta_points")?);
    let mut out = Outcome::default();
    for k in p.list::<u32>("ks")? {
        let sups: Vec<f64> = cps
            .iter()
            .map(|&l| Ok(huang_sup(l, l, k, &grid, weights)?.sup_value))
            .collect::<Result<_>>()?;
        out.flag(&format!("k{k}_decreasing"), strictly_decreasing(&sups));
        out.series(&format!("sup_k{k}"), as_f64(cps), sups);
    }
    Ok(out)
}

fn banks(p: &Params, cps: &[usize], seed: u64, ctx: &RunContext) -> Result<Outcome> {
    let n = p.usize("n")?;
    check_covered(cps, n)?;
    let x: GeometricArg = p.parsed("x")?;
    let g = geometric_phase(n as u64, p.u64("base")?, x)?;
    let ones = PhaseSequence::constant(Complex64::new(1.0, 0.0), n, 1)?;
    let w = weight_sequence(&p.text("weights")?, n, seed, ctx)?;
    let plain: Vec<f64> = cesaro_correlation(&g, &ones, cps)?.iter().map(|(_, z)| z.norm()).collect();
    let weighted: Vec<f64> = cesaro_correlation(&g, &w, cps)?.iter().map(|(_, z)| z.norm()).collect();
    let mut out = Outcome::default();
    out.flag("weighted_below_0.05", weighted[weighted.len() - 1] < 0.05);
    out.series("plain", as_f64(cps), plain);
    out.series("weighted", as_f64(cps), weighted);
    Ok(out)
}

fn expansive(p: &Params, _cps: &[usize], _seed: u64, ctx: &RunContext) -> Result<Outcome> {
    let n = p.usize("n")?;
    let table;
    let weights = match p.text("weights")?.as_str() {
        "ones" => Weights::Ones,
        kind => {
            table = ctx.sieve((n as u64).max(2))?;
            sieve_weights(kind, &table)?
        }
    };
    let r = expansive_search(p.u64("base")?, n, weights, p.usize("digits")?)?;
    let digits: Vec<String> = r.digits.iter().map(|d| d.to_string()).collect();
    let mut out = Outcome::default();
    out.scalar("x", r.x);
    out.scalar("correlation", r.correlation);
    out.text("digits", digits.join(";"));
    out.flag("correlation_in_unit_interval", (-1.0..=1.0).contains(&r.correlation));
    Ok(out)
}
