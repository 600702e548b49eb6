//! Upper-triangular unipotent groups and nilrotations on `G/Γ`, `Γ` the integer points.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::PhaseSequence;
use crate::turn::Turn;

/// Largest supported matrix size (`d + 1`).
pub const MAX_NIL_SIZE: usize = 6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnipotentElement {
    size: usize,
    entries: Vec<f64>,
}

impl UnipotentElement {
    pub fn identity(size: usize) -> Self {
        let mut entries = vec![0.0; size * size];
        for i in 0..size {
            entries[i * size + i] = 1.0;
        }
        Self { size, entries }
    }

    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let size = rows.len();
        if size == 0 || rows.iter().any(|r| r.len() != size) {
            return Err(Error::Domain("unipotent element must be a non-empty square matrix".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                let ok = match i.cmp(&j) {
                    std::cmp::Ordering::Equal => v == 1.0,
                    std::cmp::Ordering::Greater => v == 0.0,
                    std::cmp::Ordering::Less => v.is_finite(),
                };
                if !ok {
                    return Err(Error::Domain(format!(
                        "entry ({i}, {j}) = {v} breaks upper unipotency"
                    )));
                }
            }
        }
        Ok(Self {
            size,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// `g` whose orbit of [`heisenberg_start`] has top-right entry `Σⱼ bⱼ C(n, j)`:
    /// ones on the superdiagonal of the leading `d×d` block, `b₁..b_d` in the last column.
    pub fn polynomial_generator(b: &[f64]) -> Self {
        let d = b.len().saturating_sub(1).max(1);
        let size = d + 1;
        let mut g = Self::identity(size);
        for i in 1..d {
            g.set(i - 1, i, 1.0);
        }
        for j in 1..=d {
            g.set(j - 1, d, b.get(j).copied().unwrap_or(0.0));
        }
        g
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.size + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.size + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.size).map(<[f64]>::to_vec).collect()
    }

    pub fn mul(&self, other: &UnipotentElement) -> Result<UnipotentElement> {
        if self.size != other.size {
            return Err(Error::Length(format!(
                "cannot multiply {0}×{0} by {1}×{1}",
                self.size, other.size
            )));
        }
        let n = self.size;
        let mut out = Self::identity(n);
        for i in 0..n {
            for j in i + 1..n {
                let mut s = 0.0;
                for k in i..=j {
                    s += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, s);
            }
        }
        Ok(out)
    }

    /// Representative of `self·Γ` with every off-diagonal entry in `[0, 1)`.
    ///
    /// Right multiplication by `Γ` subtracts integer multiples of earlier
    /// columns; columns are treated rightmost first, entries bottom-up.
    pub fn reduce(&self) -> UnipotentElement {
        let n = self.size;
        let mut y = self.clone();
        for j in (1..n).rev() {
            for i in (0..j).rev() {
                let c = y.get(i, j).floor();
                if c != 0.0 {
                    for r in 0..=i {
                        let v = y.get(r, j) - c * y.get(r, i);
                        y.set(r, j, v);
                    }
                }
                // floor can leave exactly 1.0 after rounding
                if y.get(i, j) >= 1.0 {
                    let v = y.get(i, j) - 1.0;
                    y.set(i, j, v);
                }
            }
        }
        y
    }

    pub fn is_reduced(&self) -> bool {
        (0..self.size).all(|i| (i + 1..self.size).all(|j| (0.0..1.0).contains(&self.get(i, j))))
    }
}

/// Identity with `b₀` in the top-right corner.
pub fn heisenberg_start(size: usize, b0: f64) -> UnipotentElement {
    let mut x = UnipotentElement::identity(size);
    if size > 1 {
        x.set(0, size - 1, b0);
    }
    x
}

/// `n ↦ e^{2πi·m·y_n[0][d]}` where `y_n` is the reduced form of `gⁿx₀`.
pub fn heisenberg_orbit(
    g: &UnipotentElement,
    x0: &UnipotentElement,
    m: i64,
    n_max: usize,
) -> Result<PhaseSequence> {
    if g.size != x0.size {
        return Err(Error::Length("g and x0 must have the same size".into()));
    }
    if g.size < 2 || g.size > MAX_NIL_SIZE {
        return Err(Error::capacity(
            format!("nilrotation on {0}×{0} matrices", g.size),
            format!("2..={MAX_NIL_SIZE}"),
        ));
    }
    let corner = g.size - 1;
    let mut y = x0.reduce();
    let mut values = Vec::with_capacity(n_max);
    for _ in 0..n_max {
        values.push(Turn::from_f64(y.get(0, corner)).times_signed(m as i128).cis());
        y = g.mul(&y)?.reduce();
    }
    PhaseSequence::unimodular(values, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynsys::{furstenberg_encode, RealPoly};

    #[test]
    fn rejects_non_unipotent() {
        assert!(UnipotentElement::new(vec![vec![2.0, 0.0], vec![0.0, 1.0]]).is_err());
        assert!(UnipotentElement::new(vec![vec![1.0, 0.0], vec![0.5, 1.0]]).is_err());
    }

    #[test]
    fn identity_orbit_is_constant() {
        let g = UnipotentElement::identity(3);
        let x0 = heisenberg_start(3, 0.3);
        let s = heisenberg_orbit(&g, &x0, 1, 20).unwrap();
        assert!(s.values().iter().all(|z| (z - s.values()[0]).norm() == 0.0));
    }

    #[test]
    fn product_stays_unipotent() {
        let a = UnipotentElement::new(vec![
            vec![1.0, 0.5, 2.25],
            vec![0.0, 1.0, -1.5],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        let p = a.mul(&a).unwrap();
        assert!(UnipotentElement::new(p.rows()).is_ok());
        assert_eq!(p.get(0, 2), 2.25 + 0.5 * -1.5 + 2.25);
    }

    #[test]
    fn reduction_is_idempotent() {
        let y = UnipotentElement::new(vec![
            vec![1.0, 3.7, -2.2, 5.5],
            vec![0.0, 1.0, 1.25, -0.3],
            vec![0.0, 0.0, 1.0, 7.9],
            vec![0.0, 0.0, 0.0, 1.0],
        ])
        .unwrap();
        let r = y.reduce();
        assert!(r.is_reduced());
        assert_eq!(r.reduce(), r);
    }

    #[test]
    fn matches_furstenberg_for_quadratic() {
        let p = RealPoly::binomial(vec![0.1, 0.2345, 0.0417]);
        let g = UnipotentElement::polynomial_generator(p.coeffs());
        let s = heisenberg_orbit(&g, &heisenberg_start(3, 0.1), 1, 1000).unwrap();
        let f = furstenberg_encode(&p).unwrap().sample(1000).unwrap();
        for n in 0..1000 {
            assert!((s.values()[n] - f.values()[n]).norm() < 1e-9, "n={n}");
        }
    }
}
