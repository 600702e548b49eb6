//! Cesàro, moment, short-interval and block averages.
//!
//! Checkpoints count terms from the start of the sequence: `N` means the
//! first `N` values, whatever the origin.

use super::report::MomoReport;
use crate::error::{Error, Result};
use crate::sequence::PhaseSequence;
use crate::summation::{ComplexSum, KahanSum};
use crate::Complex64;

fn aligned(c: &PhaseSequence, a: &PhaseSequence) -> Result<usize> {
    if c.origin() != a.origin() {
        return Err(Error::Length(format!(
            "sequences start at different indices ({} and {})",
            c.origin(),
            a.origin()
        )));
    }
    Ok(c.len().min(a.len()))
}

fn check_points(checkpoints: &[usize], available: usize) -> Result<()> {
    if let Some(&bad) = checkpoints.iter().find(|&&n| n == 0 || n > available) {
        return Err(Error::Length(format!(
            "checkpoint {bad} outside 1..={available}"
        )));
    }
    Ok(())
}

/// Prefix averages of `terms` at each checkpoint, in one compensated pass.
fn prefix_means<I>(terms: I, checkpoints: &[usize]) -> Vec<(usize, Complex64)>
where
    I: IntoIterator<Item = Complex64>,
{
    let mut order: Vec<usize> = (0..checkpoints.len()).collect();
    order.sort_by_key(|&i| checkpoints[i]);
    let mut out = vec![(0, Complex64::new(0.0, 0.0)); checkpoints.len()];
    let mut acc = ComplexSum::new();
    let mut next = 0;
    for (i, t) in terms.into_iter().enumerate() {
        if next == order.len() {
            break;
        }
        acc.add(t);
        while next < order.len() && checkpoints[order[next]] == i + 1 {
            let n = i + 1;
            out[order[next]] = (n, acc.value() / n as f64);
            next += 1;
        }
    }
    out
}

/// `(1/N) Σ_{first N terms} cₙ aₙ` at each checkpoint.
pub fn cesaro_correlation(
    c: &PhaseSequence,
    a: &PhaseSequence,
    checkpoints: &[usize],
) -> Result<Vec<(usize, Complex64)>> {
    let len = aligned(c, a)?;
    check_points(checkpoints, len)?;
    Ok(prefix_means(
        c.values().iter().zip(a.values()).map(|(x, y)| x * y),
        checkpoints,
    ))
}

/// `(1/N) Σ |cₙ|^λ` at each checkpoint.
pub fn moment_check(c: &PhaseSequence, lambda: f64, checkpoints: &[usize]) -> Result<Vec<(usize, f64)>> {
    if !(lambda >= 1.0) {
        return Err(Error::Domain(format!("moment exponent must be ≥ 1, got {lambda}")));
    }
    check_points(checkpoints, c.len())?;
    let terms = c.values().iter().map(|z| {
        let m = z.norm();
        // |z| = 1 must give exactly 1 at any λ
        Complex64::new(if m == 1.0 { 1.0 } else { m.powf(lambda) }, 0.0)
    });
    Ok(prefix_means(terms, checkpoints)
        .into_iter()
        .map(|(n, z)| (n, z.re))
        .collect())
}

fn power(z: Complex64, ell: i64) -> Complex64 {
    match ell {
        1 => z,
        -1 => z.conj(),
        _ => z.powi(ell as i32),
    }
}

/// `(1/(M+1)) Σ_{M ≤ m ≤ 2M} |(1/H) Σ_{m ≤ h < m+H} w(h)^ℓ|`, with `h` the true index.
pub fn momo_average(w: &PhaseSequence, m: u64, h: u64, ell: i64) -> Result<MomoReport> {
    if ell == 0 {
        return Err(Error::Domain("ell must be non-zero".into()));
    }
    if h == 0 {
        return Err(Error::Domain("H must be at least 1".into()));
    }
    let first = m as i64;
    let last = 2 * m as i64 + h as i64 - 1;
    if !w.covers(first) || !w.covers(last) {
        return Err(Error::Length(format!(
            "MOMO average needs indices {first}..={last}, sequence covers {}..={}",
            w.origin(),
            w.last_index()
        )));
    }
    let start = (first - w.origin()) as usize;
    let span = &w.values()[start..=(last - w.origin()) as usize];
    // compensated prefix sums
    let mut prefix = Vec::with_capacity(span.len() + 1);
    let mut acc = ComplexSum::new();
    prefix.push(Complex64::new(0.0, 0.0));
    for z in span {
        acc.add(power(*z, ell));
        prefix.push(acc.value());
    }
    let h = h as usize;
    let mut outer = KahanSum::new();
    for j in 0..=m as usize {
        outer.add((prefix[j + h] - prefix[j]).norm() / h as f64);
    }
    Ok(MomoReport {
        m,
        h: h as u64,
        value: outer.value() / (m + 1) as f64,
        ell,
    })
}

/// `(1/b_K) Σ_{k<K} |Σ_{b_k ≤ i < b_{k+1}} w_i^ℓ|` with `i` the position in `w`
/// (0 for its first value).
pub fn block_average(w: &PhaseSequence, blocks: &[usize], ell: i64) -> Result<f64> {
    if ell == 0 {
        return Err(Error::Domain("ell must be non-zero".into()));
    }
    if blocks.len() < 2 || blocks[0] != 0 || blocks.windows(2).any(|p| p[1] <= p[0]) {
        return Err(Error::Domain(
            "blocks must start at 0 and increase strictly, with at least one block".into(),
        ));
    }
    let end = *blocks.last().expect("checked length");
    if end > w.len() {
        return Err(Error::Length(format!(
            "blocks reach {end} but the sequence has {} values",
            w.len()
        )));
    }
    let mut total = KahanSum::new();
    for pair in blocks.windows(2) {
        let s: ComplexSum = w.values()[pair[0]..pair[1]].iter().map(|z| power(*z, ell)).collect();
        total.add(s.value().norm());
    }
    Ok(total.value() / end as f64)
}

/// `|avg(f·g) − avg(f)·avg(g)|` at each checkpoint.
pub fn rauzy_independence(
    fx: &PhaseSequence,
    gy: &PhaseSequence,
    checkpoints: &[usize],
) -> Result<Vec<(usize, f64)>> {
    let len = aligned(fx, gy)?;
    check_points(checkpoints, len)?;
    let fg = prefix_means(fx.values().iter().zip(gy.values()).map(|(a, b)| a * b), checkpoints);
    let f = prefix_means(fx.values().iter().copied(), checkpoints);
    let g = prefix_means(gy.values().iter().copied(), checkpoints);
    Ok(fg
        .iter()
        .zip(f.iter().zip(&g))
        .map(|(&(n, p), (&(_, a), &(_, b)))| (n, (p - a * b).norm()))
        .collect())
}

/// `(1/N) Σ_{first N terms} |a(n) − b(n)|`.
pub fn l1_distance(a: &PhaseSequence, b: &PhaseSequence, n: usize) -> Result<f64> {
    let len = aligned(a, b)?;
    check_points(&[n], len)?;
    let s: KahanSum = a.values()[..n]
        .iter()
        .zip(&b.values()[..n])
        .map(|(x, y)| (x - y).norm())
        .collect();
    Ok(s.value() / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alternating(n: usize, origin: i64) -> PhaseSequence {
        PhaseSequence::from_real((0..n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }), 1.0, origin).unwrap()
    }

    fn ones(n: usize, origin: i64) -> PhaseSequence {
        PhaseSequence::constant(Complex64::new(1.0, 0.0), n, origin).unwrap()
    }

    #[test]
    fn cesaro_of_conjugate_is_one() {
        let c = PhaseSequence::unimodular(
            (0..100).map(|i| Complex64::from_polar(1.0, i as f64 * 0.7)).collect(),
            1,
        )
        .unwrap();
        for (_, v) in cesaro_correlation(&c, &c.conj(), &[1, 10, 100]).unwrap() {
            assert!((v - 1.0).norm() < 1e-15);
        }
    }

    #[test]
    fn cesaro_alternating() {
        let c = alternating(101, 1);
        let out = cesaro_correlation(&c, &ones(101, 1), &[100, 1, 101, 7]).unwrap();
        let got: Vec<(usize, f64)> = out.iter().map(|&(n, z)| (n, z.re)).collect();
        assert_eq!(got, vec![(100, 0.0), (1, 1.0), (101, 1.0 / 101.0), (7, 1.0 / 7.0)]);
        assert!(cesaro_correlation(&c, &ones(101, 0), &[1]).is_err());
        assert!(cesaro_correlation(&c, &ones(101, 1), &[102]).is_err());
    }

    #[test]
    fn moments() {
        let c = alternating(64, 1);
        assert!(moment_check(&c, 2.0, &[1, 64]).unwrap().iter().all(|&(_, v)| v == 1.0));
        let z = PhaseSequence::new(vec![Complex64::new(0.0, 0.0); 5], 1.0, 1).unwrap();
        assert_eq!(moment_check(&z, 3.0, &[5]).unwrap(), vec![(5, 0.0)]);
        assert!(moment_check(&c, 0.5, &[1]).is_err());
    }

    #[test]
    fn momo_trivial_cases() {
        let w = ones(400, 0);
        assert!((momo_average(&w, 100, 30, 3).unwrap().value - 1.0).abs() < 1e-14);
        let alt = alternating(400, 0);
        assert!(momo_average(&alt, 100, 20, 1).unwrap().value < 1e-15);
        assert!(momo_average(&w, 200, 10, 1).is_err());
        assert!(momo_average(&w, 10, 10, 0).is_err());
    }

    #[test]
    fn block_trivial_cases() {
        let w = ones(50, 1);
        assert!((block_average(&w, &[0, 3, 10, 50], 1).unwrap() - 1.0).abs() < 1e-15);
        let alt = alternating(50, 1);
        let unit: Vec<usize> = (0..=50).collect();
        assert!((block_average(&alt, &unit, 1).unwrap() - 1.0).abs() < 1e-15);
        assert!(block_average(&alt, &[0, 5, 5], 1).is_err());
        assert!(block_average(&alt, &[0, 60], 1).is_err());
    }

    #[test]
    fn rauzy_with_constant_is_zero() {
        let f = PhaseSequence::unimodular((0..80).map(|i| Complex64::from_polar(1.0, i as f64)).collect(), 1).unwrap();
        for (_, v) in rauzy_independence(&f, &ones(80, 1), &[1, 40, 80]).unwrap() {
            assert!(v < 1e-15);
        }
    }

    #[test]
    fn l1_examples() {
        let a = ones(10, 1);
        assert_eq!(l1_distance(&a, &a, 10).unwrap(), 0.0);
        let b = PhaseSequence::constant(Complex64::new(-1.0, 0.0), 10, 1).unwrap();
        assert_eq!(l1_distance(&a, &b, 10).unwrap(), 2.0);
    }
}
