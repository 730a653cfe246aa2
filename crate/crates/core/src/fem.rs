//! P1 machinery: quadrature, compressed sparse rows, sparse LU and a
//! semismooth Newton driver.

use std::sync::Arc;

use faer::sparse::linalg::solvers::{Lu, SymbolicLu};
use faer::sparse::{SparseColMatRef, SymbolicSparseColMatRef};
use faer::linalg::solvers::SolveCore;
use faer::{Conj, MatMut};

use crate::geom::Point;

/// Degree-2 rule on triangles: barycentric points and weights summing to 1.
pub const TRI3: [([f64; 3], f64); 3] = [
    ([2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0], 1.0 / 3.0),
    ([1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0], 1.0 / 3.0),
    ([1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0], 1.0 / 3.0),
];

/// Degree-5 seven point rule, used for error norms.
pub const TRI7: [([f64; 3], f64); 7] = {
    const A: f64 = 0.059715871789770;
    const B: f64 = 0.470142064105115;
    const C: f64 = 0.797426985353087;
    const D: f64 = 0.101286507323456;
    const W1: f64 = 0.132394152788506;
    const W2: f64 = 0.125939180544827;
    [
        ([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], 0.225),
        ([A, B, B], W1),
        ([B, A, B], W1),
        ([B, B, A], W1),
        ([C, D, D], W2),
        ([D, C, D], W2),
        ([D, D, C], W2),
    ]
};

/// Two-point Gauss rule on `[0, 1]`.
pub const GAUSS2: [(f64, f64); 2] = [(0.211_324_865_405_187_1, 0.5), (0.788_675_134_594_812_9, 0.5)];

/// Point of a triangle given barycentric coordinates.
pub fn bary_point(x: &[Point; 3], l: &[f64; 3]) -> Point {
    [
        l[0] * x[0][0] + l[1] * x[1][0] + l[2] * x[2][0],
        l[0] * x[0][1] + l[1] * x[1][1] + l[2] * x[2][1],
    ]
}

/// P1 mass matrix of a triangle with area `area`.
pub fn p1_mass(area: f64) -> [[f64; 3]; 3] {
    let mut m = [[area / 12.0; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = area / 6.0;
    }
    m
}

/// P1 Laplace stiffness matrix of a triangle.
pub fn p1_stiffness(x: &[Point; 3]) -> [[f64; 3]; 3] {
    let g = crate::geom::p1_gradients(x);
    let area = crate::geom::signed_area(x[0], x[1], x[2]);
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = area * crate::geom::dot(g[i], g[j]);
        }
    }
    k
}

/// Local residual and Jacobian of one element, facet or segment.
#[derive(Debug, Clone, PartialEq)]
pub struct Local<const N: usize> {
    pub r: [f64; N],
    pub k: [[f64; N]; N],
}

impl<const N: usize> Local<N> {
    pub fn zero() -> Self {
        Self { r: [0.0; N], k: [[0.0; N]; N] }
    }

    /// Completes the residual of an affine term: `r += k x`.
    pub fn apply_linear(&mut self, x: &[f64; N]) {
        for i in 0..N {
            self.r[i] += (0..N).map(|j| self.k[i][j] * x[j]).sum::<f64>();
        }
    }

    /// Adds `scale * a_i * b_j` to the Jacobian.
    pub fn add_outer(&mut self, a: &[f64; N], b: &[f64; N], scale: f64) {
        for i in 0..N {
            if a[i] != 0.0 {
                for j in 0..N {
                    self.k[i][j] += scale * a[i] * b[j];
                }
            }
        }
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("matrix is singular: unknown {index} has no usable pivot")]
    Singular { index: usize },
    #[error("linear solve produced a non-finite value at unknown {index}")]
    NonFinite { index: usize },
    #[error("sparse factorisation failed: {0}")]
    Factorization(String),
    #[error("dimension mismatch: matrix {n}, vector {m}")]
    Dimension { n: usize, m: usize },
}

/// Row-compressed sparsity pattern with sorted column indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsrPattern {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
}

impl CsrPattern {
    /// Builds the pattern from per-row column lists (duplicates allowed).
    pub fn from_rows(mut rows: Vec<Vec<usize>>) -> Self {
        let n = rows.len();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::new();
        row_ptr.push(0);
        for r in rows.iter_mut() {
            r.sort_unstable();
            r.dedup();
            col_idx.extend_from_slice(r);
            row_ptr.push(col_idx.len());
        }
        Self { n, row_ptr, col_idx }
    }

    /// Pattern of a symmetric coupling: every pair within each group couples.
    pub fn from_groups<'a>(n: usize, groups: impl Iterator<Item = &'a [usize]>) -> Self {
        let mut rows = vec![Vec::new(); n];
        for g in groups {
            for &i in g {
                rows[i].extend_from_slice(g);
            }
        }
        for (i, r) in rows.iter_mut().enumerate() {
            r.push(i);
        }
        Self::from_rows(rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.col_idx.len()
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.col_idx[self.row_ptr[i]..self.row_ptr[i + 1]]
    }

    /// Storage position of entry `(i, j)`.
    pub fn position(&self, i: usize, j: usize) -> Option<usize> {
        let start = self.row_ptr[i];
        self.row(i).binary_search(&j).ok().map(|p| start + p)
    }
}

/// Square sparse matrix on a shared pattern.
#[derive(Debug, Clone)]
pub struct CsrMatrix {
    pattern: Arc<CsrPattern>,
    values: Vec<f64>,
}

impl CsrMatrix {
    pub fn zeros(pattern: Arc<CsrPattern>) -> Self {
        let nnz = pattern.nnz();
        Self { pattern, values: vec![0.0; nnz] }
    }

    pub fn identity(n: usize) -> Self {
        let pattern = Arc::new(CsrPattern::from_rows((0..n).map(|i| vec![i]).collect()));
        Self { pattern, values: vec![1.0; n] }
    }

    pub fn from_dense(a: &[Vec<f64>]) -> Self {
        let rows = a.iter().map(|r| (0..r.len()).filter(|&j| r[j] != 0.0).collect()).collect();
        let mut m = Self::zeros(Arc::new(CsrPattern::from_rows(rows)));
        for (i, r) in a.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                if v != 0.0 {
                    m.add(i, j, v);
                }
            }
        }
        m
    }

    pub fn pattern(&self) -> &Arc<CsrPattern> {
        &self.pattern
    }

    pub fn n(&self) -> usize {
        self.pattern.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Adds `v` to entry `(i, j)`; panics if the entry is outside the pattern.
    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let p = self
            .pattern
            .position(i, j)
            .unwrap_or_else(|| panic!("entry ({i}, {j}) is not in the sparsity pattern"));
        self.values[p] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.pattern.position(i, j).map_or(0.0, |p| self.values[p])
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n()];
        for (i, yi) in y.iter_mut().enumerate() {
            let (s, e) = (self.pattern.row_ptr[i], self.pattern.row_ptr[i + 1]);
            *yi = (s..e).map(|p| self.values[p] * x[self.pattern.col_idx[p]]).sum();
        }
        y
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.n();
        let mut a = vec![vec![0.0; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            for p in self.pattern.row_ptr[i]..self.pattern.row_ptr[i + 1] {
                row[self.pattern.col_idx[p]] += self.values[p];
            }
        }
        a
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Sparse LU that keeps its symbolic analysis while the pattern is unchanged.
#[derive(Default)]
pub struct LuSolver {
    symbolic: Option<(Arc<CsrPattern>, SymbolicLu<usize>)>,
    numeric: Option<Lu<usize, f64>>,
    pub factorizations: usize,
}

impl std::fmt::Debug for LuSolver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LuSolver").field("factorizations", &self.factorizations).finish()
    }
}

impl LuSolver {
    pub fn new() -> Self {
        Self::default()
    }

    /// Factors `a`. The CSR arrays are handed to the factorisation as the
    /// column-compressed form of the transpose.
    pub fn factor(&mut self, a: &CsrMatrix) -> Result<(), SolveError> {
        let n = a.n();
        let pat = a.pattern();
        for i in 0..n {
            let row = pat.row_ptr[i]..pat.row_ptr[i + 1];
            if a.values[row].iter().all(|&v| v == 0.0) {
                return Err(SolveError::Singular { index: i });
            }
        }
        let sym = SymbolicSparseColMatRef::new_checked(n, n, &pat.row_ptr, None, &pat.col_idx);
        let reuse = matches!(&self.symbolic, Some((p, _)) if Arc::ptr_eq(p, pat) || **p == **pat);
        if !reuse {
            let s = SymbolicLu::try_new(sym).map_err(|e| lu_error(e, n))?;
            self.symbolic = Some((pat.clone(), s));
        }
        let (_, s) = self.symbolic.as_ref().expect("symbolic factorisation present");
        let mat = SparseColMatRef::new(sym, &a.values);
        let lu = Lu::try_new_with_symbolic(s.clone(), mat).map_err(|e| lu_error(e, n))?;
        self.numeric = Some(lu);
        self.factorizations += 1;
        Ok(())
    }

    pub fn is_factored(&self) -> bool {
        self.numeric.is_some()
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>, SolveError> {
        let lu = self.numeric.as_ref().ok_or_else(|| SolveError::Factorization("no factorisation".into()))?;
        let mut x = b.to_vec();
        let n = x.len();
        let rhs = MatMut::from_column_major_slice_mut(&mut x, n, 1);
        lu.solve_transpose_in_place_with_conj(Conj::No, rhs);
        if let Some(index) = x.iter().position(|v| !v.is_finite()) {
            return Err(SolveError::NonFinite { index });
        }
        Ok(x)
    }
}

fn lu_error(e: impl std::fmt::Debug, n: usize) -> SolveError {
    let text = format!("{e:?}");
    if let Some(rest) = text.split("index:").nth(1) {
        let digits: String = rest.trim_start().chars().take_while(|c| c.is_ascii_digit()).collect();
        if let Ok(index) = digits.parse::<usize>() {
            return SolveError::Singular { index: index.min(n.saturating_sub(1)) };
        }
    }
    SolveError::Factorization(text)
}

/// One-shot direct solve of `a x = b`.
pub fn solve_linear(a: &CsrMatrix, b: &[f64]) -> Result<Vec<f64>, SolveError> {
    if a.n() != b.len() {
        return Err(SolveError::Dimension { n: a.n(), m: b.len() });
    }
    let mut lu = LuSolver::new();
    lu.factor(a)?;
    lu.solve(b)
}

/// Positive part.
#[inline]
pub fn pos(x: f64) -> f64 {
    x.max(0.0)
}

/// Generalised derivative of the positive part (zero at the kink).
#[inline]
pub fn pos_derivative(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else {
        0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonSettings {
    pub rtol: f64,
    pub atol: f64,
    pub max_iter: usize,
    /// Step lengths tried in order when the full step does not reduce the
    /// residual.
    pub damping: Vec<f64>,
    /// Keep the factorised Jacobian while the residual contracts at least by
    /// this factor per iteration; `0` recomputes every iteration.
    pub reuse_ratio: f64,
    /// Full steps accepted without residual decrease when no damped step
    /// helps; lets the active contact set switch through a residual peak.
    pub max_forced: usize,
    /// A stalled iterate is accepted when its residual is below this
    /// fraction of the initial one; a root sitting on the kink of `[.]_+`
    /// can leave the iteration cycling just above the regular tolerance.
    pub stall_rtol: f64,
}

impl Default for NewtonSettings {
    fn default() -> Self {
        Self { rtol: 1e-8, atol: 1e-10, max_iter: 25, damping: vec![1.0, 0.5, 0.25, 0.125], reuse_ratio: 0.0, max_forced: 5, stall_rtol: 1e-5 }
    }
}

impl NewtonSettings {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.rtol > 0.0) || !(self.atol > 0.0) {
            return Err("newton tolerances must be positive".into());
        }
        if self.max_iter == 0 {
            return Err("newton needs at least one iteration".into());
        }
        if self.damping.is_empty() || self.damping.iter().any(|&a| !(a > 0.0 && a <= 1.0)) {
            return Err("damping factors must lie in (0, 1]".into());
        }
        if !(self.stall_rtol >= 0.0 && self.stall_rtol < 1.0) {
            return Err("stall tolerance must lie in [0, 1)".into());
        }
        if !(0.0..1.0).contains(&self.reuse_ratio) {
            return Err("jacobian reuse ratio must lie in [0, 1)".into());
        }
        Ok(())
    }
}

/// Residual and generalised Jacobian of a square nonlinear system.
pub trait NonlinearSystem {
    fn residual(&mut self, x: &[f64]) -> Vec<f64>;
    fn jacobian(&mut self, x: &[f64]) -> CsrMatrix;
}

#[derive(Debug, Clone)]
pub struct NewtonOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub residual_norm: f64,
    pub initial_norm: f64,
}

#[derive(Debug, thiserror::Error, Clone)]
pub enum NewtonError {
    #[error("newton did not converge in {iterations} iterations (residual {residual:e})")]
    MaxIterations { iterations: usize, residual: f64, last: Vec<f64> },
    #[error("newton stalled after {iterations} iterations: no damped step reduced the residual {residual:e}")]
    Stalled { iterations: usize, residual: f64, last: Vec<f64> },
    #[error("linear solve failed: {0}")]
    Linear(#[from] SolveError),
    #[error("non-finite residual")]
    NonFinite,
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Damped semismooth Newton iteration.
pub fn newton_solve<S: NonlinearSystem>(
    sys: &mut S,
    x0: Vec<f64>,
    settings: &NewtonSettings,
) -> Result<NewtonOutcome, NewtonError> {
    let mut lu = LuSolver::new();
    newton_solve_with(sys, x0, settings, &mut lu)
}

/// As [`newton_solve`], reusing the symbolic analysis held by `lu`.
pub fn newton_solve_with<S: NonlinearSystem>(
    sys: &mut S,
    x0: Vec<f64>,
    settings: &NewtonSettings,
    lu: &mut LuSolver,
) -> Result<NewtonOutcome, NewtonError> {
    let mut x = x0;
    let mut r = sys.residual(&x);
    let r0 = l2(&r);
    if !r0.is_finite() {
        return Err(NewtonError::NonFinite);
    }
    let tol = settings.atol.max(settings.rtol * r0);
    let mut norm = r0;
    let mut fresh = false;
    let mut have_jacobian = false;
    let mut it = 0;
    let mut forced = 0;
    while norm > tol {
        if it == settings.max_iter {
            return Err(NewtonError::MaxIterations { iterations: it, residual: norm, last: x });
        }
        if !have_jacobian || settings.reuse_ratio == 0.0 {
            lu.factor(&sys.jacobian(&x))?;
            have_jacobian = true;
            fresh = true;
        }
        let rhs: Vec<f64> = r.iter().map(|v| -v).collect();
        let dx = lu.solve(&rhs)?;
        let mut accepted = None;
        let mut full = None;
        for &alpha in &settings.damping {
            let trial: Vec<f64> = x.iter().zip(&dx).map(|(a, b)| a + alpha * b).collect();
            let rt = sys.residual(&trial);
            let nt = l2(&rt);
            if nt.is_finite() && (nt < (1.0 - 1e-4 * alpha) * norm || nt <= tol) {
                accepted = Some((trial, rt, nt));
                break;
            }
            if alpha == 1.0 && nt.is_finite() {
                full = Some((trial, rt, nt));
            }
        }
        if accepted.is_none() && fresh && norm <= settings.stall_rtol * r0 {
            log::debug!("newton: accepting stalled iterate with residual {norm:e}");
            it += 1;
            break;
        }
        if accepted.is_none() && fresh && forced < settings.max_forced {
            if let Some(step) = full {
                log::debug!("newton: forcing a full step, residual {norm:e} -> {:e}", step.2);
                forced += 1;
                accepted = Some(step);
            }
        }
        it += 1;
        log::trace!("newton {it}: residual {norm:e} -> {:e}", accepted.as_ref().map_or(f64::NAN, |a| a.2));
        match accepted {
            Some((xt, rt, nt)) => {
                if settings.reuse_ratio > 0.0 && nt > settings.reuse_ratio * norm {
                    have_jacobian = false;
                }
                x = xt;
                r = rt;
                norm = nt;
                fresh = false;
            }
            None if !fresh => {
                have_jacobian = false;
            }
            None => return Err(NewtonError::Stalled { iterations: it, residual: norm, last: x }),
        }
    }
    Ok(NewtonOutcome { x, iterations: it, residual_norm: norm, initial_norm: r0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::signed_area;

    #[test]
    fn quadrature_weights_sum_to_one() {
        assert!((TRI3.iter().map(|q| q.1).sum::<f64>() - 1.0).abs() < 1e-15);
        assert!((TRI7.iter().map(|q| q.1).sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((GAUSS2.iter().map(|q| q.1).sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn tri3_integrates_quadratics_exactly() {
        // integral of l0 * l1 over a triangle is area / 12
        let v: f64 = TRI3.iter().map(|(l, w)| w * l[0] * l[1]).sum();
        assert!((v - 1.0 / 12.0).abs() < 1e-15);
        let v: f64 = TRI3.iter().map(|(l, w)| w * l[2] * l[2]).sum();
        assert!((v - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn mass_matrix_entries() {
        let x = [[0.0, 0.0], [2.0, 0.0], [0.0, 3.0]];
        let area = signed_area(x[0], x[1], x[2]);
        let m = p1_mass(area);
        for i in 0..3 {
            for j in 0..3 {
                let q: f64 = TRI3.iter().map(|(l, w)| w * area * l[i] * l[j]).sum();
                assert!((m[i][j] - q).abs() < 1e-14);
            }
        }
        assert!((m[0][0] - 0.5).abs() < 1e-15 && (m[0][1] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn stiffness_rows_sum_to_zero() {
        let k = p1_stiffness(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
        for row in k {
            assert!(row.iter().sum::<f64>().abs() < 1e-15);
        }
    }

    #[test]
    fn identity_solve() {
        let b = vec![1.0, -2.0, 3.5];
        let x = solve_linear(&CsrMatrix::identity(3), &b).unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn zero_row_is_reported() {
        let a = CsrMatrix::from_dense(&[vec![1.0, 0.0], vec![0.0, 0.0]]);
        assert_eq!(solve_linear(&a, &[1.0, 1.0]).unwrap_err(), SolveError::Singular { index: 1 });
    }

    #[test]
    fn nonsymmetric_solve_uses_correct_orientation() {
        let a = CsrMatrix::from_dense(&[vec![2.0, 1.0], vec![0.0, 3.0]]);
        let x = solve_linear(&a, &[5.0, 6.0]).unwrap();
        assert!((x[0] - 1.5).abs() < 1e-14 && (x[1] - 2.0).abs() < 1e-14);
    }

    struct Scalar<F: Fn(f64) -> (f64, f64)>(F);

    impl<F: Fn(f64) -> (f64, f64)> NonlinearSystem for Scalar<F> {
        fn residual(&mut self, x: &[f64]) -> Vec<f64> {
            vec![(self.0)(x[0]).0]
        }
        fn jacobian(&mut self, x: &[f64]) -> CsrMatrix {
            let d = (self.0)(x[0]).1;
            CsrMatrix::from_dense(&[vec![if d == 0.0 { 1e-300 } else { d }]])
        }
    }

    #[test]
    fn newton_positive_part_one_iteration() {
        let mut s = Scalar(|x: f64| (pos(x) - 1.0, pos_derivative(x)));
        let out = newton_solve(&mut s, vec![2.0], &NewtonSettings::default()).unwrap();
        assert_eq!(out.iterations, 1);
        assert!((out.x[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn newton_cubic() {
        let mut s = Scalar(|x: f64| (x * x * x - 8.0, 3.0 * x * x));
        let settings = NewtonSettings { rtol: 1e-12, ..Default::default() };
        let out = newton_solve(&mut s, vec![3.0], &settings).unwrap();
        assert!(out.iterations <= 6, "{}", out.iterations);
        assert!((out.x[0] - 2.0).abs() < 1e-10);
    }

    #[test]
    fn newton_reports_divergence() {
        // no real root
        let mut s = Scalar(|x: f64| (x * x + 1.0, 2.0 * x));
        let settings = NewtonSettings { max_iter: 5, ..Default::default() };
        assert!(newton_solve(&mut s, vec![1.0], &settings).is_err());
    }

    #[test]
    fn forced_step_switches_active_set() {
        // stiff kink: every damped step from the inactive side raises the residual
        let f = |x: f64| (x + 1e3 * pos(x - 0.1) - 1.0, 1.0 + 1e3 * pos_derivative(x - 0.1));
        let strict = NewtonSettings { max_forced: 0, stall_rtol: 0.0, ..Default::default() };
        assert!(matches!(newton_solve(&mut Scalar(f), vec![0.0], &strict), Err(NewtonError::Stalled { .. })));
        let out = newton_solve(&mut Scalar(f), vec![0.0], &NewtonSettings::default()).unwrap();
        assert!((out.x[0] - (1.0 + 100.0) / 1001.0).abs() < 1e-12);
    }

    #[test]
    fn stalled_iterate_accepted_below_stall_tolerance() {
        // no root: the residual bottoms out at 1e-7 on the flat branch
        let f = |x: f64| (pos(x) + 1e-7, pos_derivative(x));
        let strict = NewtonSettings { max_forced: 0, stall_rtol: 0.0, ..Default::default() };
        assert!(matches!(newton_solve(&mut Scalar(f), vec![1.0], &strict), Err(NewtonError::Stalled { .. })));
        let loose = NewtonSettings { max_forced: 0, ..Default::default() };
        let out = newton_solve(&mut Scalar(f), vec![1.0], &loose).unwrap();
        assert!((out.residual_norm - 1e-7).abs() < 1e-15);
    }

    #[test]
    fn settings_validation() {
        assert!(NewtonSettings::default().validate().is_ok());
        assert!(NewtonSettings { rtol: 0.0, ..Default::default() }.validate().is_err());
        assert!(NewtonSettings { max_iter: 0, ..Default::default() }.validate().is_err());
    }
}
