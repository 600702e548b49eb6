use oscillab_core::correlate::{oscillation_order_test, PolyGrid};
use oscillab_core::dynsys::{quasi_eigen_eval, QuasiEigenData};
use oscillab_core::gowers::{gowers_norm, gowers_norm_interval, CyclicFunction, GowersMethod};
use oscillab_core::seqgen::{
    akiyama_jiang, bracket_seq, geometric_phase, rudin_shapiro, thue_morse, AkiyamaJiang, GFunction,
    GeometricArg, Irrational,
};
use oscillab_core::PhaseSequence;

use super::catalog::weight_sequence;
use super::{ladder, Experiment, Params, RunContext};
use crate::error::{CliError, Result};
use crate::manifest::Outcome;

const SEQUENCE_NAMES: &str = "thue-morse, rudin-shapiro, rademacher, uniform_complex, gaussian_truncated, \
     mobius, liouville, bracket, akiyama, geometric, quasi";

pub(super) static TOOLS: &[Experiment] = &[
    Experiment {
        name: "gen",
        about: "generate a sequence",
        params: &[
            ("sequence", "thue-morse"),
            ("n", "1024"),
            ("alpha", "sqrt2"),
            ("beta", "sqrt3"),
            ("g", "one"),
            ("base", "2"),
            ("x", "1/7"),
            ("thetas", "0.318,0.0271"),
            ("base_phase", "0"),
        ],
        default_checkpoints: None,
        run: gen,
    },
    Experiment {
        name: "gowers",
        about: "Gowers norm of a generated sequence",
        params: &[
            ("sequence", "thue-morse"),
            ("n", "1024"),
            ("alpha", "sqrt2"),
            ("beta", "sqrt3"),
            ("g", "one"),
            ("base", "2"),
            ("x", "1/7"),
            ("thetas", "0.318,0.0271"),
            ("base_phase", "0"),
            ("d", "2"),
            ("method", "fft_u2"),
            ("domain", "interval"),
        ],
        default_checkpoints: None,
        run: gowers,
    },
    Experiment {
        name: "corr",
        about: "oscillation-order grid supremum of a generated sequence",
        params: &[
            ("sequence", "rademacher"),
            ("n", "65536"),
            ("alpha", "sqrt2"),
            ("beta", "sqrt3"),
            ("g", "one"),
            ("base", "2"),
            ("x", "1/7"),
            ("thetas", "0.318,0.0271"),
            ("base_phase", "0"),
            ("k", "2"),
            ("q", "20"),
            ("r", "200"),
            ("grid_seed", "1"),
        ],
        default_checkpoints: Some(|p| Ok(ladder(p.usize("n")?, &[1024]))),
        run: corr,
    },
];

fn build_sequence(p: &Params, seed: u64, ctx: &RunContext) -> Result<PhaseSequence> {
    let n = p.u64("n")?;
    let name = p.text("sequence")?.to_ascii_lowercase().replace('_', "-");
    Ok(match name.as_str() {
        "thue-morse" => thue_morse(n)?,
        "rudin-shapiro" => rudin_shapiro(n)?,
        "bracket" => bracket_seq(n, p.parsed::<Irrational>("alpha")?, p.parsed::<Irrational>("beta")?)?,
        "akiyama" | "akiyama-jiang" => {
            let alpha = p.parsed::<Irrational>("alpha")?.to_f64();
            let beta = p.parsed::<Irrational>("beta")?.to_f64();
            akiyama_jiang(n, &AkiyamaJiang::new(alpha, beta, p.parsed::<GFunction>("g")?))?
        }
        "geometric" => geometric_phase(n, p.u64("base")?, p.parsed::<GeometricArg>("x")?)?,
        "quasi" => quasi_eigen_eval(&QuasiEigenData::new(p.list("thetas")?, p.f64("base_phase")?), n as usize)?,
        "rademacher" | "uniform-complex" | "gaussian-truncated" | "mobius" | "liouville" => {
            weight_sequence(&name.replace('-', "_"), n as usize, seed, ctx)?
        }
        other => {
            return Err(CliError::InvalidParam(format!(
                "unknown sequence {other:?} (expected one of {SEQUENCE_NAMES})"
            )))
        }
    })
}

fn gen(p: &Params, _cps: &[usize], seed: u64, ctx: &RunContext) -> Result<Outcome> {
    let s = build_sequence(p, seed, ctx)?;
    let index: Vec<f64> = (0..s.len()).map(|i| (s.origin() + i as i64) as f64).collect();
    let mut out = Outcome::default();
    out.series("re", index.clone(), s.values().iter().map(|z| z.re).collect());
    out.series("im", index, s.values().iter().map(|z| z.im).collect());
    Ok(out)
}

fn gowers(p: &Params, _cps: &[usize], seed: u64, ctx: &RunContext) -> Result<Outcome> {
    let s = build_sequence(p, seed, ctx)?;
    let d = p.u32("d")?;
    let method: GowersMethod = p.parsed("method")?;
    let r = match p.text("domain")?.as_str() {
        "interval" => gowers_norm_interval(s.values(), d, method)?,
        "cyclic" => gowers_norm(&CyclicFunction::from_sequence(&s), d, method)?,
        other => {
            return Err(CliError::InvalidParam(format!(
                "domain must be interval or cyclic, got {other:?}"
            )))
        }
    };
    let mut out = Outcome::default();
    out.scalar("norm", r.norm);
    out.scalar("raw_power", r.raw_power);
    Ok(out)
}

fn corr(p: &Params, cps: &[usize], seed: u64, ctx: &RunContext) -> Result<Outcome> {
    let s = build_sequence(p, seed, ctx)?;
    let k = p.u32("k")?;
    let grid = PolyGrid::new(k, p.u32("q")?, p.u32("r")?, p.u64("grid_seed")?);
    let reports = oscillation_order_test(&s, k, &grid, cps)?;
    let mut out = Outcome::default();
    out.series(
        "sup",
        cps.iter().map(|&c| c as f64).collect(),
        reports.iter().map(|(_, r)| r.sup_value).collect(),
    );
    for (n, r) in &reports {
        out.text(&format!("argmax_{n}"), r.argmax_label.clone());
    }
    Ok(out)
}
