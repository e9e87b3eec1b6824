//! Dense bounded-variable revised simplex.
//!
//! Solves `min cᵀx  s.t.  Ax = b,  l ≤ x ≤ u` with finite lower bounds and
//! possibly infinite upper bounds. Intended for problems with few rows and
//! many columns (the ν-SVM sub-problem dual has `n + 2` rows), so the basis
//! inverse is kept explicitly and refactored periodically.

const OPT_TOL: f64 = 1e-10;
const FEAS_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const REFACTOR_EVERY: usize = 40;
const DEGENERATE_BEFORE_BLAND: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub rows: usize,
    pub cols: usize,
    /// Column-major constraint matrix.
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    /// Row prices `y` with `cᵀ − yᵀA` the reduced costs.
    pub duals: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

impl LinearProgram {
    pub fn new(rows: usize, cols: usize) -> Self {
        LinearProgram {
            rows,
            cols,
            a: vec![0.0; rows * cols],
            b: vec![0.0; rows],
            c: vec![0.0; cols],
            lower: vec![0.0; cols],
            upper: vec![f64::INFINITY; cols],
        }
    }

    pub fn column_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.a[j * self.rows..(j + 1) * self.rows]
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.a[j * self.rows..(j + 1) * self.rows]
    }

    pub fn solve(&self, max_iterations: usize) -> LpSolution {
        assert!(self.lower.iter().all(|l| l.is_finite()), "lower bounds must be finite");
        Solver::new(self).run(max_iterations)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum VarState {
    Basic(usize),
    AtLower,
    AtUpper,
}

struct Solver<'a> {
    lp: &'a LinearProgram,
    k: usize,
    total: usize,
    art_sign: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    x: Vec<f64>,
    state: Vec<VarState>,
    basis: Vec<usize>,
    binv: Vec<f64>,
    cost: Vec<f64>,
    iterations: usize,
    pivots_since_refactor: usize,
}

impl<'a> Solver<'a> {
    fn new(lp: &'a LinearProgram) -> Self {
        let k = lp.rows;
        let total = lp.cols + k;
        let mut x = lp.lower.clone();
        // residual after placing all structurals at their lower bound
        let mut r = lp.b.clone();
        for j in 0..lp.cols {
            if x[j] != 0.0 {
                for (ri, aij) in r.iter_mut().zip(lp.column(j)) {
                    *ri -= aij * x[j];
                }
            }
        }
        let art_sign: Vec<f64> = r.iter().map(|v| if *v >= 0.0 { 1.0 } else { -1.0 }).collect();
        x.extend(r.iter().map(|v| v.abs()));
        let mut lower = lp.lower.clone();
        lower.extend(std::iter::repeat_n(0.0, k));
        let mut upper = lp.upper.clone();
        upper.extend(std::iter::repeat_n(f64::INFINITY, k));
        let mut state = vec![VarState::AtLower; total];
        let basis: Vec<usize> = (lp.cols..total).collect();
        for (pos, &j) in basis.iter().enumerate() {
            state[j] = VarState::Basic(pos);
        }
        let mut binv = vec![0.0; k * k];
        for i in 0..k {
            binv[i * k + i] = art_sign[i];
        }
        Solver {
            lp,
            k,
            total,
            art_sign,
            lower,
            upper,
            x,
            state,
            basis,
            binv,
            cost: vec![0.0; total],
            iterations: 0,
            pivots_since_refactor: 0,
        }
    }

    fn is_artificial(&self, j: usize) -> bool {
        j >= self.lp.cols
    }

    /// Writes column `j` of `[A | diag(art_sign)]` into `out`.
    fn load_column(&self, j: usize, out: &mut [f64]) {
        if self.is_artificial(j) {
            out.iter_mut().for_each(|v| *v = 0.0);
            let i = j - self.lp.cols;
            out[i] = self.art_sign[i];
        } else {
            out.copy_from_slice(self.lp.column(j));
        }
    }

    fn column_dot(&self, j: usize, y: &[f64]) -> f64 {
        if self.is_artificial(j) {
            let i = j - self.lp.cols;
            self.art_sign[i] * y[i]
        } else {
            self.lp.column(j).iter().zip(y).map(|(a, b)| a * b).sum()
        }
    }

    fn duals(&self) -> Vec<f64> {
        let k = self.k;
        let mut y = vec![0.0; k];
        for (i, &j) in self.basis.iter().enumerate() {
            let cb = self.cost[j];
            if cb != 0.0 {
                for (c, yc) in y.iter_mut().enumerate() {
                    *yc += cb * self.binv[i * k + c];
                }
            }
        }
        y
    }

    fn refactor(&mut self) -> bool {
        let k = self.k;
        let mut mat = vec![0.0; k * k];
        let mut col = vec![0.0; k];
        for (pos, &j) in self.basis.iter().enumerate() {
            self.load_column(j, &mut col);
            for i in 0..k {
                mat[i * k + pos] = col[i];
            }
        }
        let Some(inv) = invert(&mat, k) else { return false };
        self.binv = inv;
        // basic values from the nonbasic ones
        let mut r = self.lp.b.clone();
        for j in 0..self.total {
            if matches!(self.state[j], VarState::Basic(_)) || self.x[j] == 0.0 {
                continue;
            }
            self.load_column(j, &mut col);
            for i in 0..k {
                r[i] -= col[i] * self.x[j];
            }
        }
        for (pos, &j) in self.basis.iter().enumerate() {
            self.x[j] = (0..k).map(|c| self.binv[pos * k + c] * r[c]).sum();
        }
        self.pivots_since_refactor = 0;
        true
    }

    /// Runs simplex iterations on the current cost vector.
    fn iterate(&mut self, max_iterations: usize) -> LpStatus {
        let k = self.k;
        let mut alpha = vec![0.0; k];
        let mut col = vec![0.0; k];
        let mut degenerate_run = 0usize;
        loop {
            if self.iterations >= max_iterations {
                return LpStatus::IterationLimit;
            }
            let y = self.duals();
            let bland = degenerate_run >= DEGENERATE_BEFORE_BLAND;
            let mut entering = None;
            let mut best = 0.0;
            for j in 0..self.total {
                let at_lower = match self.state[j] {
                    VarState::Basic(_) => continue,
                    VarState::AtLower => true,
                    VarState::AtUpper => false,
                };
                if self.upper[j] - self.lower[j] <= 0.0 {
                    continue;
                }
                let d = self.cost[j] - self.column_dot(j, &y);
                let gain = if at_lower { -d } else { d };
                if gain > OPT_TOL {
                    if bland {
                        entering = Some((j, at_lower));
                        break;
                    }
                    if gain > best {
                        best = gain;
                        entering = Some((j, at_lower));
                    }
                }
            }
            let Some((q, increasing)) = entering else { return LpStatus::Optimal };
            self.iterations += 1;

            self.load_column(q, &mut col);
            for i in 0..k {
                alpha[i] = (0..k).map(|c| self.binv[i * k + c] * col[c]).sum();
            }
            let dir = if increasing { 1.0 } else { -1.0 };
            // basic i moves by −dir·θ·alpha[i]
            let flip_limit = self.upper[q] - self.lower[q];
            let bound_ratio = |s: &Self, i: usize, relax: f64| -> Option<f64> {
                let j = s.basis[i];
                let rate = dir * alpha[i];
                if rate > PIVOT_TOL {
                    Some((s.x[j] - s.lower[j] + relax).max(0.0) / rate)
                } else if rate < -PIVOT_TOL && s.upper[j].is_finite() {
                    Some((s.upper[j] - s.x[j] + relax).max(0.0) / -rate)
                } else {
                    None
                }
            };
            let mut leave: Option<usize> = None;
            let theta;
            if bland {
                let mut best_theta = f64::INFINITY;
                for i in 0..k {
                    if let Some(t) = bound_ratio(self, i, 0.0) {
                        let better = t < best_theta - 1e-14
                            || (t <= best_theta + 1e-14 && leave.is_some_and(|l| self.basis[i] < self.basis[l]));
                        if better {
                            best_theta = t;
                            leave = Some(i);
                        }
                    }
                }
                theta = best_theta;
            } else {
                // Harris two-pass ratio test
                let mut relaxed = f64::INFINITY;
                for i in 0..k {
                    if let Some(t) = bound_ratio(self, i, FEAS_TOL) {
                        relaxed = relaxed.min(t);
                    }
                }
                let mut best_pivot = 0.0;
                let mut best_theta = f64::INFINITY;
                for i in 0..k {
                    if let Some(t) = bound_ratio(self, i, 0.0) {
                        if t <= relaxed && alpha[i].abs() > best_pivot {
                            best_pivot = alpha[i].abs();
                            best_theta = t;
                            leave = Some(i);
                        }
                    }
                }
                theta = best_theta;
            }
            if flip_limit <= theta {
                if !flip_limit.is_finite() {
                    return LpStatus::Unbounded;
                }
                // bound flip, basis unchanged
                for i in 0..k {
                    let j = self.basis[i];
                    self.x[j] -= dir * flip_limit * alpha[i];
                }
                self.x[q] = if increasing { self.upper[q] } else { self.lower[q] };
                self.state[q] = if increasing { VarState::AtUpper } else { VarState::AtLower };
                degenerate_run = 0;
                continue;
            }
            let r = leave.expect("finite ratio implies a leaving row");
            if theta <= 1e-12 {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            for i in 0..k {
                let j = self.basis[i];
                self.x[j] -= dir * theta * alpha[i];
            }
            self.x[q] += dir * theta;
            let leaving = self.basis[r];
            let rate = dir * alpha[r];
            if rate > 0.0 {
                self.x[leaving] = self.lower[leaving];
                self.state[leaving] = VarState::AtLower;
            } else {
                self.x[leaving] = self.upper[leaving];
                self.state[leaving] = VarState::AtUpper;
            }
            self.basis[r] = q;
            self.state[q] = VarState::Basic(r);
            self.pivot_update(r, &alpha);
            self.pivots_since_refactor += 1;
            if self.pivots_since_refactor >= REFACTOR_EVERY && !self.refactor() {
                return LpStatus::IterationLimit;
            }
        }
    }

    fn pivot_update(&mut self, r: usize, alpha: &[f64]) {
        let k = self.k;
        let piv = alpha[r];
        for c in 0..k {
            self.binv[r * k + c] /= piv;
        }
        for i in 0..k {
            if i == r || alpha[i] == 0.0 {
                continue;
            }
            let f = alpha[i];
            for c in 0..k {
                self.binv[i * k + c] -= f * self.binv[r * k + c];
            }
        }
    }

    fn drive_out_artificials(&mut self) {
        let k = self.k;
        let mut col = vec![0.0; k];
        for r in 0..k {
            let j = self.basis[r];
            if !self.is_artificial(j) {
                continue;
            }
            let mut chosen = None;
            let mut best = 1e-7;
            for q in 0..self.lp.cols {
                if matches!(self.state[q], VarState::Basic(_)) {
                    continue;
                }
                self.load_column(q, &mut col);
                let entry: f64 = (0..k).map(|c| self.binv[r * k + c] * col[c]).sum();
                if entry.abs() > best {
                    best = entry.abs();
                    chosen = Some(q);
                }
            }
            if let Some(q) = chosen {
                self.load_column(q, &mut col);
                let alpha: Vec<f64> = (0..k).map(|i| (0..k).map(|c| self.binv[i * k + c] * col[c]).sum()).collect();
                self.x[j] = 0.0;
                self.state[j] = VarState::AtLower;
                self.basis[r] = q;
                self.state[q] = VarState::Basic(r);
                self.pivot_update(r, &alpha);
            }
        }
        self.refactor();
    }

    fn run(mut self, max_iterations: usize) -> LpSolution {
        let cols = self.lp.cols;
        for j in cols..self.total {
            self.cost[j] = 1.0;
        }
        let status = self.iterate(max_iterations);
        let infeasibility: f64 = (cols..self.total).map(|j| self.x[j]).sum();
        let scale = 1.0 + self.lp.b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if status != LpStatus::Optimal || infeasibility > FEAS_TOL * scale {
            let status = if status == LpStatus::Optimal { LpStatus::Infeasible } else { status };
            return self.finish(status);
        }
        self.drive_out_artificials();
        for j in cols..self.total {
            self.upper[j] = 0.0;
            self.cost[j] = 0.0;
            if !matches!(self.state[j], VarState::Basic(_)) {
                self.x[j] = 0.0;
                self.state[j] = VarState::AtLower;
            }
        }
        self.cost[..cols].copy_from_slice(&self.lp.c);
        let status = self.iterate(max_iterations);
        if status == LpStatus::Optimal {
            self.refactor();
        }
        self.finish(status)
    }

    fn finish(self, status: LpStatus) -> LpSolution {
        let cols = self.lp.cols;
        let mut x = self.x[..cols].to_vec();
        for (j, v) in x.iter_mut().enumerate() {
            *v = v.clamp(self.lp.lower[j], self.lp.upper[j]);
        }
        let objective = x.iter().zip(&self.lp.c).map(|(a, b)| a * b).sum();
        let duals = self.duals();
        LpSolution { status, x, duals, objective, iterations: self.iterations }
    }
}

/// Gauss–Jordan inverse with partial pivoting of a row-major `k × k` matrix.
fn invert(mat: &[f64], k: usize) -> Option<Vec<f64>> {
    let mut a = mat.to_vec();
    let mut inv = vec![0.0; k * k];
    for i in 0..k {
        inv[i * k + i] = 1.0;
    }
    for col in 0..k {
        let piv_row = (col..k).max_by(|&r1, &r2| a[r1 * k + col].abs().total_cmp(&a[r2 * k + col].abs()))?;
        let piv = a[piv_row * k + col];
        if piv.abs() < 1e-14 {
            return None;
        }
        if piv_row != col {
            for c in 0..k {
                a.swap(piv_row * k + c, col * k + c);
                inv.swap(piv_row * k + c, col * k + c);
            }
        }
        for c in 0..k {
            a[col * k + c] /= piv;
            inv[col * k + c] /= piv;
        }
        for r in 0..k {
            if r == col {
                continue;
            }
            let f = a[r * k + col];
            if f == 0.0 {
                continue;
            }
            for c in 0..k {
                a[r * k + c] -= f * a[col * k + c];
                inv[r * k + c] -= f * inv[col * k + c];
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// max x1 + x2  s.t.  x1 + 2x2 ≤ 4,  3x1 + x2 ≤ 6,  x ≥ 0
    /// written with slacks as equalities; optimum (8/5, 6/5).
    #[test]
    fn textbook_lp() {
        let mut lp = LinearProgram::new(2, 4);
        lp.column_mut(0).copy_from_slice(&[1.0, 3.0]);
        lp.column_mut(1).copy_from_slice(&[2.0, 1.0]);
        lp.column_mut(2).copy_from_slice(&[1.0, 0.0]);
        lp.column_mut(3).copy_from_slice(&[0.0, 1.0]);
        lp.b = vec![4.0, 6.0];
        lp.c = vec![-1.0, -1.0, 0.0, 0.0];
        let sol = lp.solve(100);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.x[0] - 1.6).abs() < 1e-12);
        assert!((sol.x[1] - 1.2).abs() < 1e-12);
        assert!((sol.objective + 2.8).abs() < 1e-12);
        // dual objective bᵀy equals primal
        let dual_obj: f64 = sol.duals.iter().zip(&lp.b).map(|(a, b)| a * b).sum();
        assert!((dual_obj - sol.objective).abs() < 1e-12);
    }

    #[test]
    fn upper_bounds_and_flips() {
        // min −x1 − 2x2  s.t. x1 + x2 + s = 3, 0 ≤ x1 ≤ 2, 0 ≤ x2 ≤ 1
        let mut lp = LinearProgram::new(1, 3);
        lp.column_mut(0)[0] = 1.0;
        lp.column_mut(1)[0] = 1.0;
        lp.column_mut(2)[0] = 1.0;
        lp.b = vec![3.0];
        lp.c = vec![-1.0, -2.0, 0.0];
        lp.upper = vec![2.0, 1.0, f64::INFINITY];
        let sol = lp.solve(100);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.x[0] - 2.0).abs() < 1e-12 && (sol.x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        // x1 + x2 = −1 with x ≥ 0
        let mut lp = LinearProgram::new(1, 2);
        lp.column_mut(0)[0] = 1.0;
        lp.column_mut(1)[0] = 1.0;
        lp.b = vec![-1.0];
        assert_eq!(lp.solve(100).status, LpStatus::Infeasible);

        // min −x1  s.t. x1 − x2 = 0
        let mut lp = LinearProgram::new(1, 2);
        lp.column_mut(0)[0] = 1.0;
        lp.column_mut(1)[0] = -1.0;
        lp.c = vec![-1.0, 0.0];
        assert_eq!(lp.solve(100).status, LpStatus::Unbounded);
    }

    #[test]
    fn redundant_rows() {
        // the same equality twice
        let mut lp = LinearProgram::new(2, 2);
        lp.column_mut(0).copy_from_slice(&[1.0, 1.0]);
        lp.column_mut(1).copy_from_slice(&[1.0, 1.0]);
        lp.b = vec![1.0, 1.0];
        lp.c = vec![1.0, 2.0];
        let sol = lp.solve(100);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.x[0] - 1.0).abs() < 1e-12 && sol.x[1].abs() < 1e-12);
    }

    #[test]
    fn random_lps_satisfy_strong_duality() {
        use rand::Rng;
        let mut rng = crate::seed::rng(5);
        for _ in 0..200 {
            let k = rng.random_range(1..5);
            let n = rng.random_range(k..k + 8);
            let mut lp = LinearProgram::new(k, n);
            for v in lp.a.iter_mut() {
                *v = rng.random_range(-1.0..1.0);
            }
            // feasible by construction
            let x0: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
            for i in 0..k {
                lp.b[i] = (0..n).map(|j| lp.a[j * k + i] * x0[j]).sum();
            }
            for j in 0..n {
                lp.c[j] = rng.random_range(-1.0..1.0);
                lp.upper[j] = 2.0;
            }
            let sol = lp.solve(10_000);
            assert_eq!(sol.status, LpStatus::Optimal);
            for i in 0..k {
                let ax: f64 = (0..n).map(|j| lp.a[j * k + i] * sol.x[j]).sum();
                assert!((ax - lp.b[i]).abs() < 1e-9);
            }
            // dual: bᵀy + Σ_j u_j·min(0, d_j)
            let mut dual = sol.duals.iter().zip(&lp.b).map(|(a, b)| a * b).sum::<f64>();
            for j in 0..n {
                let d = lp.c[j] - (0..k).map(|i| lp.a[j * k + i] * sol.duals[i]).sum::<f64>();
                dual += lp.upper[j] * d.min(0.0);
            }
            assert!((dual - sol.objective).abs() < 1e-8, "gap {}", sol.objective - dual);
        }
    }
}
