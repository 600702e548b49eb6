//! Affine maps `x ↦ Ax + b` of the torus `T^d`, with exact mod-1 state.
//!
//! Vectors act as columns: `(Tx)ᵢ = Σⱼ aᵢⱼ xⱼ + bᵢ`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::poly::RealPoly;
use crate::error::{Error, Result};
use crate::sequence::PhaseSequence;
use crate::turn::Turn;
use crate::Complex64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TorusPoint {
    coords: Vec<Turn>,
}

impl TorusPoint {
    pub fn new(coords: Vec<Turn>) -> Self {
        Self { coords }
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(vec![Turn::ZERO; dim])
    }

    pub fn from_f64(coords: &[f64]) -> Self {
        Self::new(coords.iter().map(|&x| Turn::from_f64(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Turn] {
        &self.coords
    }

    /// Coordinates in `[0, 1)`.
    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(|t| t.to_f64()).collect()
    }
}

/// A character `x ↦ e^{2πi⟨k, x⟩}` of the torus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Character {
    pub freq: Vec<i64>,
}

impl Character {
    pub fn new(freq: Vec<i64>) -> Self {
        Self { freq }
    }

    /// `x ↦ e^{2πi xᵢ}` (0-based `i`).
    pub fn coordinate(dim: usize, i: usize) -> Self {
        let mut freq = vec![0; dim];
        freq[i] = 1;
        Self { freq }
    }

    pub fn trivial(dim: usize) -> Self {
        Self { freq: vec![0; dim] }
    }

    pub fn phase(&self, x: &TorusPoint) -> Result<Turn> {
        if self.freq.len() != x.dim() {
            return Err(Error::Length(format!(
                "character of dimension {} applied to a point of dimension {}",
                self.freq.len(),
                x.dim()
            )));
        }
        Ok(self
            .freq
            .iter()
            .zip(x.coords())
            .map(|(&k, &t)| t.times_signed(k as i128))
            .sum())
    }

    pub fn eval(&self, x: &TorusPoint) -> Result<Complex64> {
        Ok(self.phase(x)?.cis())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineTorusMap {
    matrix: Vec<Vec<i64>>,
    translation: Vec<Turn>,
}

#[derive(Serialize, Deserialize)]
struct MapJson {
    matrix: Vec<Vec<i64>>,
    translation: Vec<f64>,
}

impl Serialize for AffineTorusMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MapJson {
            matrix: self.matrix.clone(),
            translation: self.translation.iter().map(|t| t.to_f64()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AffineTorusMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MapJson::deserialize(d)?;
        AffineTorusMap::from_f64(raw.matrix, &raw.translation).map_err(serde::de::Error::custom)
    }
}

impl AffineTorusMap {
    pub fn new(matrix: Vec<Vec<i64>>, translation: Vec<Turn>) -> Result<Self> {
        let d = translation.len();
        if d == 0 {
            return Err(Error::Domain("torus dimension must be at least 1".into()));
        }
        if matrix.len() != d || matrix.iter().any(|row| row.len() != d) {
            return Err(Error::Length(format!(
                "matrix must be {d}×{d} to match the translation"
            )));
        }
        Ok(Self { matrix, translation })
    }

    pub fn from_f64(matrix: Vec<Vec<i64>>, translation: &[f64]) -> Result<Self> {
        Self::new(matrix, translation.iter().map(|&x| Turn::from_f64(x)).collect())
    }

    /// Translation by `b` on `T^d`.
    pub fn rotation(translation: Vec<Turn>) -> Self {
        let d = translation.len();
        Self::new(identity(d), translation).expect("square by construction")
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn translation(&self) -> &[Turn] {
        &self.translation
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    fn check_dim(&self, x: &TorusPoint) -> Result<()> {
        if x.dim() != self.dim() {
            return Err(Error::Length(format!(
                "map of dimension {} applied to a point of dimension {}",
                self.dim(),
                x.dim()
            )));
        }
        Ok(())
    }

    pub fn apply(&self, x: &TorusPoint) -> Result<TorusPoint> {
        self.check_dim(x)?;
        Ok(self.wide().apply(x))
    }

    /// `(A − I)^d = 0`, checked in exact integer arithmetic.
    pub fn is_unipotent(&self) -> bool {
        let d = self.dim();
        let mut n: Vec<Vec<i128>> = self
            .matrix
            .iter()
            .enumerate()
            .map(|(i, row)| row.iter().enumerate().map(|(j, &a)| a as i128 - (i == j) as i128).collect())
            .collect();
        let base = n.clone();
        for _ in 1..d {
            match mat_mul_checked(&n, &base) {
                Some(m) => n = m,
                None => return false,
            }
        }
        n.iter().all(|row| row.iter().all(|&v| v == 0))
    }

    /// `det A`, by fraction-free elimination.
    pub fn determinant(&self) -> Option<i128> {
        let m: Vec<Vec<i128>> = self
            .matrix
            .iter()
            .map(|row| row.iter().map(|&a| a as i128).collect())
            .collect();
        bareiss_det(m)
    }

    /// The inverse map, defined when `|det A| = 1`.
    pub fn inverse(&self) -> Result<AffineTorusMap> {
        let d = self.dim();
        let det = self.determinant().ok_or_else(|| Error::capacity("determinant", "i128"))?;
        if det.abs() != 1 {
            return Err(Error::Domain(format!(
                "map is not invertible on the torus (det A = {det})"
            )));
        }
        let mut inv = vec![vec![0i64; d]; d];
        for i in 0..d {
            for j in 0..d {
                let minor: Vec<Vec<i128>> = self
                    .matrix
                    .iter()
                    .enumerate()
                    .filter(|&(r, _)| r != j)
                    .map(|(_, row)| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != i)
                            .map(|(_, &a)| a as i128)
                            .collect()
                    })
                    .collect();
                let cof = if minor.is_empty() { Some(1) } else { bareiss_det(minor) };
                let cof = cof.ok_or_else(|| Error::capacity("cofactor", "i128"))?;
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                let v = sign * cof * det;
                inv[i][j] = i64::try_from(v).map_err(|_| Error::capacity("inverse matrix entry", "i64"))?;
            }
        }
        let mut translation = vec![Turn::ZERO; d];
        for i in 0..d {
            for j in 0..d {
                translation[i] -= self.translation[j].times_signed(inv[i][j] as i128);
            }
        }
        AffineTorusMap::new(inv, translation)
    }

    pub(crate) fn wide(&self) -> WideAffine {
        WideAffine {
            a: self
                .matrix
                .iter()
                .map(|row| row.iter().map(|&v| v as i128 as u128).collect())
                .collect(),
            b: self.translation.clone(),
        }
    }

    /// `T^m x` in `O(d³ log m)`.
    pub fn apply_power(&self, x: &TorusPoint, m: u128) -> Result<TorusPoint> {
        self.check_dim(x)?;
        Ok(self.wide().pow(m).apply(x))
    }
}

fn identity(d: usize) -> Vec<Vec<i64>> {
    (0..d).map(|i| (0..d).map(|j| (i == j) as i64).collect()).collect()
}

fn mat_mul_checked(a: &[Vec<i128>], b: &[Vec<i128>]) -> Option<Vec<Vec<i128>>> {
    let d = a.len();
    let mut out = vec![vec![0i128; d]; d];
    for i in 0..d {
        for k in 0..d {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..d {
                out[i][j] = out[i][j].checked_add(a[i][k].checked_mul(b[k][j])?)?;
            }
        }
    }
    Some(out)
}

fn bareiss_det(mut m: Vec<Vec<i128>>) -> Option<i128> {
    let n = m.len();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let swap = (k + 1..n).find(|&r| m[r][k] != 0);
            match swap {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Some(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j].checked_mul(m[k][k])?.checked_sub(m[i][k].checked_mul(m[k][j])?)?;
                m[i][j] = v / prev;
            }
        }
        prev = m[k][k];
    }
    Some(sign * m[n - 1][n - 1])
}

/// Affine map with matrix entries taken mod `2^128`, which is all that
/// matters when acting on 128-bit phases.
#[derive(Debug, Clone)]
pub(crate) struct WideAffine {
    a: Vec<Vec<u128>>,
    b: Vec<Turn>,
}

impl WideAffine {
    fn identity(d: usize) -> Self {
        Self {
            a: (0..d).map(|i| (0..d).map(|j| (i == j) as u128).collect()).collect(),
            b: vec![Turn::ZERO; d],
        }
    }

    pub(crate) fn apply(&self, x: &TorusPoint) -> TorusPoint {
        let coords = self
            .a
            .iter()
            .zip(&self.b)
            .map(|(row, &bi)| {
                row.iter()
                    .zip(x.coords())
                    .fold(bi, |acc, (&aij, &xj)| acc + xj.times(aij))
            })
            .collect();
        TorusPoint::new(coords)
    }

    /// `self ∘ other`.
    fn compose(&self, other: &WideAffine) -> WideAffine {
        let d = self.a.len();
        let mut a = vec![vec![0u128; d]; d];
        for i in 0..d {
            for k in 0..d {
                let s = self.a[i][k];
                if s == 0 {
                    continue;
                }
                for j in 0..d {
                    a[i][j] = a[i][j].wrapping_add(s.wrapping_mul(other.a[k][j]));
                }
            }
        }
        let b = self.apply(&TorusPoint::new(other.b.clone())).coords;
        WideAffine { a, b }
    }

    pub(crate) fn pow(&self, mut m: u128) -> WideAffine {
        let mut result = WideAffine::identity(self.a.len());
        let mut base = self.clone();
        while m > 0 {
            if m & 1 == 1 {
                result = result.compose(&base);
            }
            m >>= 1;
            if m > 0 {
                base = base.compose(&base);
            }
        }
        result
    }
}

/// `T(x₁, …, x_d) = (x₁ + α, x₂ + x₁, …, x_d + x_{d−1})`.
pub fn skew_product(d: usize, alpha: Turn) -> Result<AffineTorusMap> {
    if d == 0 {
        return Err(Error::Domain("skew product needs d ≥ 1".into()));
    }
    let mut matrix = identity(d);
    for i in 1..d {
        matrix[i][i - 1] = 1;
    }
    let mut translation = vec![Turn::ZERO; d];
    translation[0] = alpha;
    AffineTorusMap::new(matrix, translation)
}

/// `x₀, Tx₀, …, T^{n_max−1}x₀`.
pub fn iterate(map: &AffineTorusMap, x0: &TorusPoint, n_max: usize) -> Result<Vec<TorusPoint>> {
    map.check_dim(x0)?;
    let wide = map.wide();
    let mut out = Vec::with_capacity(n_max);
    let mut x = x0.clone();
    for _ in 0..n_max {
        let next = wide.apply(&x);
        out.push(std::mem::replace(&mut x, next));
    }
    Ok(out)
}

/// Output of [`furstenberg_encode`]: `χ(Tⁿx₀) = e^{2πiP(n)}` with `χ` reading
/// coordinate `character_index` (0-based).
#[derive(Debug, Clone)]
pub struct FurstenbergEncoding {
    pub map: AffineTorusMap,
    pub x0: TorusPoint,
    pub character_index: usize,
    /// Set for constant polynomials, encoded as the identity on `T¹`.
    pub degenerate: bool,
}

impl FurstenbergEncoding {
    pub fn character(&self) -> Character {
        Character::coordinate(self.map.dim(), self.character_index)
    }

    pub fn sample(&self, n_max: usize) -> Result<PhaseSequence> {
        let chi = self.character();
        let values = iterate(&self.map, &self.x0, n_max)?
            .iter()
            .map(|x| chi.eval(x))
            .collect::<Result<Vec<_>>>()?;
        PhaseSequence::unimodular(values, 0)
    }
}

/// Writes `P(n) = Σ bⱼ C(n, j)` as the `d`-step skew product with
/// translation `(b_d, …, b₁)` started at `(0, …, 0, b₀)`.
pub fn furstenberg_encode(p: &RealPoly) -> Result<FurstenbergEncoding> {
    let b = p.binomial_phases()?;
    let d = b.len() - 1;
    if d == 0 {
        return Ok(FurstenbergEncoding {
            map: AffineTorusMap::rotation(vec![Turn::ZERO]),
            x0: TorusPoint::new(vec![b[0]]),
            character_index: 0,
            degenerate: true,
        });
    }
    let mut map = skew_product(d, Turn::ZERO)?;
    map.translation = (1..=d).rev().map(|j| b[j]).collect();
    let mut x0 = vec![Turn::ZERO; d];
    x0[d - 1] = b[0];
    Ok(FurstenbergEncoding {
        map,
        x0: TorusPoint::new(x0),
        character_index: d - 1,
        degenerate: false,
    })
}

/// `n ↦ Πᵢ χᵢ(T^{qᵢ(n)} x₀)` for integer-valued polynomials `qᵢ`.
pub fn poly_orbit_eval(
    map: &AffineTorusMap,
    x0: &TorusPoint,
    polys: &[RealPoly],
    chars: &[Character],
    n_max: usize,
) -> Result<PhaseSequence> {
    map.check_dim(x0)?;
    if polys.len() != chars.len() {
        return Err(Error::Length(format!(
            "{} polynomials but {} characters",
            polys.len(),
            chars.len()
        )));
    }
    if let Some(c) = chars.iter().find(|c| c.freq.len() != map.dim()) {
        return Err(Error::Length(format!(
            "character of dimension {} for a map of dimension {}",
            c.freq.len(),
            map.dim()
        )));
    }
    if let Some(p) = polys.iter().find(|p| !p.is_integer_valued()) {
        return Err(Error::Domain(format!(
            "exponent polynomial {:?} is not integer-valued",
            p.coeffs()
        )));
    }
    let forward = map.wide();
    let mut backward: Option<WideAffine> = None;
    let mut values = Vec::with_capacity(n_max);
    for n in 0..n_max as i64 {
        let mut phase = Turn::ZERO;
        for (p, chi) in polys.iter().zip(chars) {
            let m = p.eval_integer(n)?;
            let y = if m >= 0 {
                forward.pow(m as u128).apply(x0)
            } else {
                if backward.is_none() {
                    let inv = map.inverse().map_err(|_| {
                        Error::Domain(format!(
                            "q(n) = {m} < 0 at n = {n} and the map is not invertible"
                        ))
                    })?;
                    backward = Some(inv.wide());
                }
                backward.as_ref().expect("set above").pow(m.unsigned_abs()).apply(x0)
            };
            phase += chi.phase(&y)?;
        }
        values.push(phase.cis());
    }
    PhaseSequence::unimodular(values, 0)
}

/// CSV with columns `n, coord_1, …, coord_d`; header lines start with `#`.
pub fn write_orbit_csv<W: Write>(points: &[TorusPoint], mut out: W, header: &[String]) -> Result<()> {
    for line in header {
        writeln!(out, "# {line}")?;
    }
    let d = points.first().map_or(0, |p| p.dim());
    let cols: Vec<String> = (1..=d).map(|i| format!("coord_{i}")).collect();
    writeln!(out, "n,{}", cols.join(","))?;
    for (n, p) in points.iter().enumerate() {
        let coords: Vec<String> = p.coords().iter().map(|t| format!("{:e}", t.to_output_f64())).collect();
        writeln!(out, "{n},{}", coords.join(","))?;
    }
    Ok(())
}
