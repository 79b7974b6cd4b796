//! Linear solvers.
//!
//! Force-based systems mix equilibrium rows (forces) with compatibility rows
//! (flexibilities times lengths), so their rows differ by many orders of
//! magnitude. The dense path equilibrates rows and columns before partial
//! pivoting LU and accepts the result only if the backward error of the
//! equilibrated system is small. Displacement-based stiffness matrices are symmetric positive
//! definite and banded once essential conditions are applied, and go through a
//! banded Cholesky factorization.

use nalgebra::{DMatrix, DVector};

use crate::error::{FgError, Result};

/// Backward error `‖Ax - b‖∞ / ‖|A||x| + |b|‖∞`. Evaluated on an equilibrated
/// system, where every row has unit scale; rows whose exact value is zero
/// (a decoupled unloaded sub-problem) then only count at their true weight.
pub fn relative_residual(a: &DMatrix<f64>, x: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for i in 0..a.nrows() {
        let mut r = -b[i];
        let mut s = b[i].abs();
        for j in 0..a.ncols() {
            let t = a[(i, j)] * x[j];
            r += t;
            s += t.abs();
        }
        worst = worst.max(r.abs());
        scale = scale.max(s);
    }
    if scale > 0.0 {
        worst / scale
    } else {
        worst
    }
}

/// Dense solve with row/column equilibration and a residual acceptance test.
pub fn solve_dense(a: &DMatrix<f64>, b: &DVector<f64>, tolerance: f64) -> Result<DVector<f64>> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "square system expected");
    assert_eq!(n, b.len());
    let mut rows = vec![1.0; n];
    for (i, r) in rows.iter_mut().enumerate() {
        let m = a.row(i).amax();
        if m == 0.0 {
            return Err(FgError::SingularSystem { residual: f64::INFINITY });
        }
        *r = 1.0 / m;
    }
    let mut cols = vec![1.0; n];
    for (j, c) in cols.iter_mut().enumerate() {
        let m = (0..n).map(|i| (a[(i, j)] * rows[i]).abs()).fold(0.0, f64::max);
        if m == 0.0 {
            return Err(FgError::SingularSystem { residual: f64::INFINITY });
        }
        *c = 1.0 / m;
    }
    let scaled = DMatrix::from_fn(n, n, |i, j| a[(i, j)] * rows[i] * cols[j]);
    let rhs = DVector::from_fn(n, |i, _| b[i] * rows[i]);
    let lu = scaled.clone().lu();
    let mut y = lu.solve(&rhs).ok_or(FgError::SingularSystem { residual: f64::INFINITY })?;
    let mut residual = relative_residual(&scaled, &y, &rhs);
    // One step of iterative refinement.
    if residual > f64::EPSILON * 16.0 {
        let r = &rhs - &scaled * &y;
        if let Some(dy) = lu.solve(&r) {
            let candidate = &y + dy;
            let res2 = relative_residual(&scaled, &candidate, &rhs);
            if res2 < residual {
                y = candidate;
                residual = res2;
            }
        }
    }
    let x = DVector::from_fn(n, |j, _| y[j] * cols[j]);
    if !residual.is_finite() || residual > tolerance || x.iter().any(|v| !v.is_finite()) {
        return Err(FgError::SingularSystem { residual });
    }
    Ok(x)
}

/// Symmetric banded matrix holding the lower band: `data[i][k]` is `A[i][i-k]`.
#[derive(Debug, Clone)]
pub struct BandedSymmetric {
    n: usize,
    bandwidth: usize,
    data: Vec<f64>,
}

impl BandedSymmetric {
    pub fn new(n: usize, bandwidth: usize) -> Self {
        Self { n, bandwidth, data: vec![0.0; n * (bandwidth + 1)] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(j <= i && i - j <= self.bandwidth);
        i * (self.bandwidth + 1) + (i - j)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        if i - j > self.bandwidth {
            0.0
        } else {
            self.data[self.idx(i, j)]
        }
    }

    /// Adds `v` to `A[i][j]` (and implicitly `A[j][i]`); call once per pair.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        assert!(i - j <= self.bandwidth, "entry ({i}, {j}) outside bandwidth {}", self.bandwidth);
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    /// Adds a dense symmetric block at the given global indices.
    pub fn add_block(&mut self, dofs: &[usize], block: &DMatrix<f64>) {
        for (a, &i) in dofs.iter().enumerate() {
            for (b, &j) in dofs.iter().enumerate() {
                if j <= i {
                    self.add(i, j, block[(a, b)]);
                }
            }
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let lo = i.saturating_sub(self.bandwidth);
            for j in lo..=i {
                let a = self.data[self.idx(i, j)];
                y[i] += a * x[j];
                if j != i {
                    y[j] += a * x[i];
                }
            }
        }
        y
    }

    /// Replaces row and column `dof` by the identity scaled with the current
    /// diagonal, enforcing a zero value for that unknown.
    pub fn constrain(&mut self, dof: usize) {
        let diag = self.get(dof, dof);
        let diag = if diag > 0.0 { diag } else { 1.0 };
        let lo = dof.saturating_sub(self.bandwidth);
        for j in lo..dof {
            let k = self.idx(dof, j);
            self.data[k] = 0.0;
        }
        let hi = (dof + self.bandwidth).min(self.n - 1);
        for i in dof + 1..=hi {
            let k = self.idx(i, dof);
            self.data[k] = 0.0;
        }
        let k = self.idx(dof, dof);
        self.data[k] = diag;
    }

    fn norm_inf(&self) -> f64 {
        let mut rows = vec![0.0; self.n];
        for j in 0..self.n {
            for i in j..=(j + self.bandwidth).min(self.n - 1) {
                let v = self.data[self.idx(i, j)].abs();
                rows[i] += v;
                if i != j {
                    rows[j] += v;
                }
            }
        }
        rows.into_iter().fold(0.0, f64::max)
    }

    /// Forward and back substitution with the factor held in `self`.
    fn substitute(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.n;
        let bw = self.bandwidth;
        let mut y = rhs.to_vec();
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            let mut s = y[i];
            for k in lo..i {
                s -= self.data[self.idx(i, k)] * y[k];
            }
            y[i] = s / self.data[self.idx(i, i)];
        }
        for i in (0..n).rev() {
            let hi = (i + bw).min(n - 1);
            let mut s = y[i];
            for k in i + 1..=hi {
                s -= self.data[self.idx(k, i)] * y[k];
            }
            y[i] = s / self.data[self.idx(i, i)];
        }
        y
    }

    /// In-place Cholesky factorization and solve.
    pub fn solve(mut self, rhs: &[f64]) -> Result<Vec<f64>> {
        let original = self.clone();
        let n = self.n;
        let bw = self.bandwidth;
        for j in 0..n {
            let lo = j.saturating_sub(bw);
            let mut d = self.data[self.idx(j, j)];
            for k in lo..j {
                let l = self.data[self.idx(j, k)];
                d -= l * l;
            }
            if !(d > 0.0) {
                return Err(FgError::SingularSystem { residual: f64::INFINITY });
            }
            let d = d.sqrt();
            let kjj = self.idx(j, j);
            self.data[kjj] = d;
            let hi = (j + bw).min(n - 1);
            for i in j + 1..=hi {
                let lo_i = i.saturating_sub(bw).max(lo);
                let mut s = self.data[self.idx(i, j)];
                for k in lo_i..j {
                    s -= self.data[self.idx(i, k)] * self.data[self.idx(j, k)];
                }
                let kij = self.idx(i, j);
                self.data[kij] = s / d;
            }
        }
        let mut y = self.substitute(rhs);
        let ax = original.mul_vec(&y);
        let r: Vec<f64> = rhs.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let dy = self.substitute(&r);
        for (yi, di) in y.iter_mut().zip(&dy) {
            *yi += di;
        }
        let ax = original.mul_vec(&y);
        let num = ax.iter().zip(rhs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let xnorm = y.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let bnorm = rhs.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let den = (original.norm_inf() * xnorm + bnorm).max(f64::MIN_POSITIVE);
        let residual = num / den;
        if !residual.is_finite() || residual > 1e-10 {
            return Err(FgError::SingularSystem { residual });
        }
        Ok(y)
    }
}

/// General banded matrix with `kl` sub- and `ku` super-diagonals, stored with
/// room for the fill produced by partial pivoting.
#[derive(Debug, Clone)]
pub struct BandedGeneral {
    n: usize,
    kl: usize,
    ku: usize,
    ld: usize,
    data: Vec<f64>,
}

impl BandedGeneral {
    pub fn new(n: usize, kl: usize, ku: usize) -> Self {
        let ld = 2 * kl + ku + 1;
        Self { n, kl, ku, ld, data: vec![0.0; ld * n] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i + self.ku + self.kl >= j && j + self.kl >= i);
        j * self.ld + (self.kl + self.ku + i - j)
    }

    fn in_band(&self, i: usize, j: usize) -> bool {
        j <= i + self.ku && i <= j + self.kl
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if self.in_band(i, j) {
            self.data[self.idx(i, j)]
        } else {
            0.0
        }
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        assert!(self.in_band(i, j), "entry ({i}, {j}) outside band ({}, {})", self.kl, self.ku);
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(self.in_band(i, j), "entry ({i}, {j}) outside band ({}, {})", self.kl, self.ku);
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    fn columns_of_row(&self, i: usize) -> std::ops::Range<usize> {
        i.saturating_sub(self.kl)..(i + self.ku + 1).min(self.n)
    }

    /// Zeroes row `i` inside the band.
    pub fn clear_row(&mut self, i: usize) {
        for j in self.columns_of_row(i) {
            let k = self.idx(i, j);
            self.data[k] = 0.0;
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.columns_of_row(i).map(|j| self.data[self.idx(i, j)] * x[j]).sum())
            .collect()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    fn residual(&self, x: &[f64], b: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            let mut r = -b[i];
            let mut scale = b[i].abs();
            for j in self.columns_of_row(i) {
                let t = self.data[self.idx(i, j)] * x[j];
                r += t;
                scale += t.abs();
            }
            if scale > 0.0 {
                worst = worst.max(r.abs() / scale);
            }
        }
        worst
    }

    /// Equilibrated banded LU with partial pivoting and one refinement step.
    pub fn solve(&self, rhs: &[f64], tolerance: f64) -> Result<Vec<f64>> {
        let n = self.n;
        assert_eq!(rhs.len(), n);
        let mut rows = vec![0.0; n];
        for (i, r) in rows.iter_mut().enumerate() {
            let m = self.columns_of_row(i).map(|j| self.get(i, j).abs()).fold(0.0, f64::max);
            if m == 0.0 {
                return Err(FgError::SingularSystem { residual: f64::INFINITY });
            }
            *r = 1.0 / m;
        }
        let mut cols = vec![0.0f64; n];
        for j in 0..n {
            let lo = j.saturating_sub(self.ku);
            let hi = (j + self.kl + 1).min(n);
            let m = (lo..hi).map(|i| (self.get(i, j) * rows[i]).abs()).fold(0.0, f64::max);
            if m == 0.0 {
                return Err(FgError::SingularSystem { residual: f64::INFINITY });
            }
            cols[j] = 1.0 / m;
        }
        let mut lu = self.clone();
        for j in 0..n {
            let lo = j.saturating_sub(self.ku);
            let hi = (j + self.kl + 1).min(n);
            for i in lo..hi {
                let k = lu.idx(i, j);
                lu.data[k] *= rows[i] * cols[j];
            }
        }
        let pivots = lu.factor()?;
        let solve_scaled = |b: &[f64]| {
            let mut y: Vec<f64> = b.iter().zip(&rows).map(|(v, r)| v * r).collect();
            lu.substitute(&pivots, &mut y);
            y.iter().zip(&cols).map(|(v, c)| v * c).collect::<Vec<f64>>()
        };
        let mut x = solve_scaled(rhs);
        let mut residual = self.residual(&x, rhs);
        if residual > f64::EPSILON * 16.0 {
            let ax = self.mul_vec(&x);
            let r: Vec<f64> = rhs.iter().zip(&ax).map(|(b, a)| b - a).collect();
            let dx = solve_scaled(&r);
            let candidate: Vec<f64> = x.iter().zip(&dx).map(|(a, b)| a + b).collect();
            let res2 = self.residual(&candidate, rhs);
            if res2 < residual {
                x = candidate;
                residual = res2;
            }
        }
        if !residual.is_finite() || residual > tolerance || x.iter().any(|v| !v.is_finite()) {
            return Err(FgError::SingularSystem { residual });
        }
        Ok(x)
    }

    fn factor(&mut self) -> Result<Vec<usize>> {
        let n = self.n;
        let mut pivots = vec![0; n];
        for j in 0..n {
            let last_row = (j + self.kl).min(n - 1);
            let last_col = (j + self.ku + self.kl).min(n - 1);
            let mut p = j;
            let mut best = self.data[self.idx(j, j)].abs();
            for i in j + 1..=last_row {
                let v = self.data[self.idx(i, j)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if !(best > 0.0) {
                return Err(FgError::SingularSystem { residual: f64::INFINITY });
            }
            pivots[j] = p;
            if p != j {
                for k in j..=last_col {
                    let a = self.idx(j, k);
                    let b = self.idx(p, k);
                    self.data.swap(a, b);
                }
            }
            let d = self.data[self.idx(j, j)];
            for i in j + 1..=last_row {
                let kij = self.idx(i, j);
                let l = self.data[kij] / d;
                self.data[kij] = l;
                if l != 0.0 {
                    for k in j + 1..=last_col {
                        let ajk = self.data[self.idx(j, k)];
                        let kik = self.idx(i, k);
                        self.data[kik] -= l * ajk;
                    }
                }
            }
        }
        Ok(pivots)
    }

    fn substitute(&self, pivots: &[usize], b: &mut [f64]) {
        let n = self.n;
        for j in 0..n {
            b.swap(j, pivots[j]);
            let bj = b[j];
            for i in j + 1..=(j + self.kl).min(n - 1) {
                b[i] -= self.data[self.idx(i, j)] * bj;
            }
        }
        for j in (0..n).rev() {
            let mut s = b[j];
            for k in j + 1..=(j + self.ku + self.kl).min(n - 1) {
                s -= self.data[self.idx(j, k)] * b[k];
            }
            b[j] = s / self.data[self.idx(j, j)];
        }
    }
}
