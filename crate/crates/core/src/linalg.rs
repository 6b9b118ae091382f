//! Small fixed-size linear algebra for d ≤ 3.
//!
//! Everything the analysis needs (determinants, solves, eigenvalues,
//! singular values) has a closed form at these sizes, so there is no
//! general-purpose backend here.

use std::ops::{Add, Index, Mul, Neg, Sub};

pub const MAX_DIM: usize = 3;

/// A column vector of length 1..=3.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vector {
    dim: usize,
    v: [f64; MAX_DIM],
}

impl Vector {
    pub fn zeros(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "dimension {dim} out of range");
        Self { dim, v: [0.0; MAX_DIM] }
    }

    pub fn from_slice(xs: &[f64]) -> Self {
        let mut out = Self::zeros(xs.len());
        out.v[..xs.len()].copy_from_slice(xs);
        out
    }

    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut out = Self::zeros(dim);
        out.v[axis] = 1.0;
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.v[..self.dim]
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.as_slice().to_vec()
    }

    /// First two coordinates, padding with zero in 1-D.
    pub fn xy(&self) -> [f64; 2] {
        [self.v[0], if self.dim > 1 { self.v[1] } else { 0.0 }]
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        (0..self.dim).map(|i| self.v[i] * other.v[i]).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, s: f64) -> Vector {
        let mut out = *self;
        for x in &mut out.v[..self.dim] {
            *x *= s;
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.as_slice().iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn normalized(&self) -> Vector {
        let n = self.norm();
        if n == 0.0 {
            *self
        } else {
            self.scale(1.0 / n)
        }
    }

    pub fn cross(&self, other: &Vector) -> Vector {
        debug_assert!(self.dim == 3 && other.dim == 3);
        let (a, b) = (&self.v, &other.v);
        Vector::from_slice(&[
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ])
    }
}

impl Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        assert!(i < self.dim);
        &self.v[i]
    }
}

impl Add for Vector {
    type Output = Vector;
    fn add(self, rhs: Vector) -> Vector {
        debug_assert_eq!(self.dim, rhs.dim);
        let mut out = self;
        for i in 0..self.dim {
            out.v[i] += rhs.v[i];
        }
        out
    }
}

impl Sub for Vector {
    type Output = Vector;
    fn sub(self, rhs: Vector) -> Vector {
        debug_assert_eq!(self.dim, rhs.dim);
        let mut out = self;
        for i in 0..self.dim {
            out.v[i] -= rhs.v[i];
        }
        out
    }
}

impl Neg for Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        self.scale(-1.0)
    }
}

/// A square matrix of size 1..=3, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix {
    dim: usize,
    m: [[f64; MAX_DIM]; MAX_DIM],
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "dimension {dim} out of range");
        Self { dim, m: [[0.0; MAX_DIM]; MAX_DIM] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            out.m[i][i] = 1.0;
        }
        out
    }

    pub fn scalar(dim: usize, s: f64) -> Self {
        Self::identity(dim).scale(s)
    }

    pub fn diag(entries: &[f64]) -> Self {
        let mut out = Self::zeros(entries.len());
        for (i, e) in entries.iter().enumerate() {
            out.m[i][i] = *e;
        }
        out
    }

    /// Builds a matrix from rows; `None` when the rows are not square or too large.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Option<Self> {
        let dim = rows.len();
        if !(1..=MAX_DIM).contains(&dim) || rows.iter().any(|r| r.as_ref().len() != dim) {
            return None;
        }
        let mut out = Self::zeros(dim);
        for (i, r) in rows.iter().enumerate() {
            out.m[i][..dim].copy_from_slice(r.as_ref());
        }
        Some(out)
    }

    /// Counterclockwise rotation by `angle` scaled by `r` (2-D).
    pub fn rotation_scaling(r: f64, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self::from_rows(&[[r * c, -r * s], [r * s, r * c]]).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.dim && j < self.dim);
        self.m[i][j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim).map(|i| self.m[i][..self.dim].to_vec()).collect()
    }

    pub fn row(&self, i: usize) -> Vector {
        Vector::from_slice(&self.m[i][..self.dim])
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.m[i][j] = self.m[j][i];
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Matrix {
        let mut out = *self;
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.m[i][j] *= s;
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &Vector) -> Vector {
        debug_assert_eq!(self.dim, x.dim);
        let mut out = Vector::zeros(self.dim);
        for i in 0..self.dim {
            out.v[i] = (0..self.dim).map(|j| self.m[i][j] * x.v[j]).sum();
        }
        out
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.m[i][i]).sum()
    }

    pub fn det(&self) -> f64 {
        let m = &self.m;
        match self.dim {
            1 => m[0][0],
            2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
            _ => {
                m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                    - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                    + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
            }
        }
    }

    pub fn max_abs(&self) -> f64 {
        let mut best: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                best = best.max(self.m[i][j].abs());
            }
        }
        best
    }

    /// Entrywise comparison with an absolute tolerance.
    pub fn approx_eq(&self, other: &Matrix, tol: f64) -> bool {
        self.dim == other.dim
            && (0..self.dim).all(|i| (0..self.dim).all(|j| (self.m[i][j] - other.m[i][j]).abs() <= tol))
    }

    /// True when the matrix is a multiple of the identity (within `tol`, relative).
    pub fn is_scalar(&self, tol: f64) -> bool {
        let s = self.m[0][0];
        self.approx_eq(&Matrix::scalar(self.dim, s), tol * (1.0 + self.max_abs()))
    }

    /// Solves `self · x = b` by Gaussian elimination with partial pivoting.
    /// Returns `None` when a pivot falls below `1e-13` times the matrix scale.
    pub fn solve(&self, b: &Vector) -> Option<Vector> {
        let n = self.dim;
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        let mut a = self.m;
        let mut x = b.v;
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
                .unwrap();
            if a[piv][col].abs() <= 1e-13 * scale {
                return None;
            }
            a.swap(col, piv);
            x.swap(col, piv);
            for row in col + 1..n {
                let f = a[row][col] / a[col][col];
                for k in col..n {
                    a[row][k] -= f * a[col][k];
                }
                x[row] -= f * x[col];
            }
        }
        for col in (0..n).rev() {
            let mut s = x[col];
            for k in col + 1..n {
                s -= a[col][k] * x[k];
            }
            x[col] = s / a[col][col];
        }
        Some(Vector { dim: n, v: x })
    }

    pub fn inverse(&self) -> Option<Matrix> {
        let mut out = Matrix::zeros(self.dim);
        for j in 0..self.dim {
            let col = self.solve(&Vector::unit(self.dim, j))?;
            for i in 0..self.dim {
                out.m[i][j] = col.v[i];
            }
        }
        Some(out)
    }
}

impl Mul for Matrix {
    type Output = Matrix;
    fn mul(self, rhs: Matrix) -> Matrix {
        debug_assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.m[i][j] = (0..n).map(|k| self.m[i][k] * rhs.m[k][j]).sum();
            }
        }
        out
    }
}

impl Add for Matrix {
    type Output = Matrix;
    fn add(self, rhs: Matrix) -> Matrix {
        let mut out = self;
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.m[i][j] += rhs.m[i][j];
            }
        }
        out
    }
}

impl Sub for Matrix {
    type Output = Matrix;
    fn sub(self, rhs: Matrix) -> Matrix {
        self + rhs.scale(-1.0)
    }
}

/// A complex eigenvalue.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eigenvalue {
    pub re: f64,
    pub im: f64,
}

impl Eigenvalue {
    fn real(re: f64) -> Self {
        Self { re, im: 0.0 }
    }

    pub fn modulus(&self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.im.abs() <= tol * (1.0 + self.re.abs())
    }
}

/// Roots of λ² + bλ + c.
fn quadratic_roots(b: f64, c: f64) -> [Eigenvalue; 2] {
    let half = -0.5 * b;
    let disc = half * half - c;
    if disc >= 0.0 {
        let s = half + half.signum() * disc.sqrt();
        if s == 0.0 {
            return [Eigenvalue::real(0.0), Eigenvalue::real(0.0)];
        }
        [Eigenvalue::real(s), Eigenvalue::real(c / s)]
    } else {
        let w = (-disc).sqrt();
        [Eigenvalue { re: half, im: w }, Eigenvalue { re: half, im: -w }]
    }
}

/// Roots of λ³ + bλ² + cλ + d.
fn cubic_roots(b: f64, c: f64, d: f64) -> [Eigenvalue; 3] {
    let shift = b / 3.0;
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    if disc <= 0.0 && p < 0.0 {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = ((3.0 * q) / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        let two_pi_3 = 2.0 * std::f64::consts::PI / 3.0;
        return [0, 1, 2].map(|k| Eigenvalue::real(m * (theta - two_pi_3 * k as f64).cos() - shift));
    }
    let sq = disc.max(0.0).sqrt();
    let mut r = (-q / 2.0 + sq).cbrt() + (-q / 2.0 - sq).cbrt() - shift;
    // Newton polish; the closed form loses digits near multiple roots.
    for _ in 0..2 {
        let f = ((r + b) * r + c) * r + d;
        let df = (3.0 * r + 2.0 * b) * r + c;
        if df != 0.0 {
            let next = r - f / df;
            if next.is_finite() {
                r = next;
            }
        }
    }
    let qb = b + r;
    let qc = c + r * qb;
    let [e1, e2] = quadratic_roots(qb, qc);
    [Eigenvalue::real(r), e1, e2]
}

/// Eigenvalues from the characteristic polynomial, in closed form.
pub fn eigenvalues(m: &Matrix) -> Vec<Eigenvalue> {
    match m.dim {
        1 => vec![Eigenvalue::real(m.m[0][0])],
        2 => quadratic_roots(-m.trace(), m.det()).to_vec(),
        _ => {
            let a = &m.m;
            let minors = a[0][0] * a[1][1] - a[0][1] * a[1][0] + a[0][0] * a[2][2] - a[0][2] * a[2][0]
                + a[1][1] * a[2][2]
                - a[1][2] * a[2][1];
            cubic_roots(-m.trace(), minors, -m.det()).to_vec()
        }
    }
}

pub fn spectral_radius(m: &Matrix) -> f64 {
    eigenvalues(m).iter().map(Eigenvalue::modulus).fold(0.0, f64::max)
}

/// Singular values, largest first.
pub fn singular_values(m: &Matrix) -> Vec<f64> {
    match m.dim {
        1 => vec![m.m[0][0].abs()],
        2 => {
            let [[a, b], [c, d]] = [[m.m[0][0], m.m[0][1]], [m.m[1][0], m.m[1][1]]];
            let s1 = (a + d).hypot(c - b);
            let s2 = (a - d).hypot(c + b);
            vec![0.5 * (s1 + s2), 0.5 * (s1 - s2).abs()]
        }
        _ => {
            let g = m.transpose() * *m;
            let mut ev: Vec<f64> = eigenvalues(&g).iter().map(|e| e.re.max(0.0).sqrt()).collect();
            ev.sort_by(|x, y| y.total_cmp(x));
            ev
        }
    }
}

/// Operator 2-norm.
pub fn spectral_norm(m: &Matrix) -> f64 {
    singular_values(m)[0]
}

pub fn min_singular_value(m: &Matrix) -> f64 {
    *singular_values(m).last().unwrap()
}

/// Orthonormal-ish basis of the real eigenspace of `m` for the real eigenvalue `lambda`.
/// The rank decision uses `tol` relative to the matrix scale.
pub fn eigenspace(m: &Matrix, lambda: f64, tol: f64) -> Vec<Vector> {
    let n = m.dim;
    let a = *m - Matrix::scalar(n, lambda);
    let eps = tol * (1.0 + m.max_abs() + lambda.abs());
    match n {
        1 => vec![Vector::unit(1, 0)],
        2 => {
            let (r0, r1) = (a.row(0), a.row(1));
            let r = if r0.norm() >= r1.norm() { r0 } else { r1 };
            if r.norm() <= eps {
                vec![Vector::unit(2, 0), Vector::unit(2, 1)]
            } else {
                vec![Vector::from_slice(&[-r[1], r[0]]).normalized()]
            }
        }
        _ => {
            let rows = [a.row(0), a.row(1), a.row(2)];
            let crosses = [rows[0].cross(&rows[1]), rows[0].cross(&rows[2]), rows[1].cross(&rows[2])];
            let best = crosses.iter().copied().max_by(|x, y| x.norm().total_cmp(&y.norm())).unwrap();
            if best.norm() > eps * eps.max(1.0) {
                return vec![best.normalized()];
            }
            let r = rows.iter().copied().max_by(|x, y| x.norm().total_cmp(&y.norm())).unwrap();
            if r.norm() <= eps {
                return (0..3).map(|i| Vector::unit(3, i)).collect();
            }
            let r = r.normalized();
            let helper = if r[0].abs() < 0.9 { Vector::unit(3, 0) } else { Vector::unit(3, 1) };
            let u = r.cross(&helper).normalized();
            let v = r.cross(&u).normalized();
            vec![u, v]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn brute_radius_2x2(m: &Matrix) -> f64 {
        // Power iteration on the square of the matrix is unreliable for
        // complex pairs; use |det| and trace directly via the quadratic.
        let tr = m.trace();
        let det = m.det();
        let disc = tr * tr / 4.0 - det;
        if disc >= 0.0 {
            (tr / 2.0).abs() + disc.sqrt()
        } else {
            det.abs().sqrt()
        }
    }

    #[test]
    fn identity_and_rotation_radius() {
        assert_eq!(spectral_radius(&Matrix::identity(2)), 1.0);
        let q = Matrix::rotation_scaling(1.0, FRAC_PI_4);
        assert!((spectral_radius(&q) - 1.0).abs() < 1e-15);
        assert_eq!(spectral_radius(&Matrix::diag(&[1.0, 0.1])), 1.0);
    }

    #[test]
    fn cubic_matches_known_spectra() {
        let m = Matrix::diag(&[3.0, -2.0, 0.5]);
        let mut ev: Vec<f64> = eigenvalues(&m).iter().map(|e| e.re).collect();
        ev.sort_by(f64::total_cmp);
        assert!((ev[0] + 2.0).abs() < 1e-12 && (ev[1] - 0.5).abs() < 1e-12 && (ev[2] - 3.0).abs() < 1e-12);

        // rotation about z by 1 radian scaled by 0.7, plus 0.2 on the axis
        let (s, c) = 1.0f64.sin_cos();
        let r = Matrix::from_rows(&[[0.7 * c, -0.7 * s, 0.0], [0.7 * s, 0.7 * c, 0.0], [0.0, 0.0, 0.2]]).unwrap();
        assert!((spectral_radius(&r) - 0.7).abs() < 1e-12);

        // a 3x3 Jordan block has a triple root
        let j = Matrix::from_rows(&[[2.0, 1.0, 0.0], [0.0, 2.0, 1.0], [0.0, 0.0, 2.0]]).unwrap();
        assert!((spectral_radius(&j) - 2.0).abs() < 1e-4);
    }

    #[test]
    fn singular_values_2x2() {
        let m = Matrix::from_rows(&[[3.0, 0.0], [4.0, 5.0]]).unwrap();
        let sv = singular_values(&m);
        // σ1σ2 = |det| = 15, σ1² + σ2² = frobenius² = 50
        assert!((sv[0] * sv[1] - 15.0).abs() < 1e-12);
        assert!((sv[0] * sv[0] + sv[1] * sv[1] - 50.0).abs() < 1e-12);
    }

    #[test]
    fn singular_values_3x3_match_gram_invariants() {
        let m = Matrix::from_rows(&[[1.0, 2.0, 0.0], [0.0, 1.0, -1.0], [0.5, 0.0, 2.0]]).unwrap();
        let sv = singular_values(&m);
        let prod: f64 = sv.iter().product();
        assert!((prod - m.det().abs()).abs() < 1e-10);
        let frob: f64 = m.rows().iter().flatten().map(|x| x * x).sum();
        assert!((sv.iter().map(|s| s * s).sum::<f64>() - frob).abs() < 1e-10);
    }

    #[test]
    fn solve_and_inverse() {
        let m = Matrix::from_rows(&[[2.0, 1.0], [1.0, 3.0]]).unwrap();
        let x = m.solve(&Vector::from_slice(&[3.0, 5.0])).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-15 && (x[1] - 1.4).abs() < 1e-15);
        let inv = m.inverse().unwrap();
        assert!((inv * m).approx_eq(&Matrix::identity(2), 1e-15));
        assert!(Matrix::from_rows(&[[1.0, 2.0], [2.0, 4.0]]).unwrap().solve(&Vector::zeros(2)).is_none());
    }

    #[test]
    fn eigenspaces() {
        let m = Matrix::from_rows(&[[0.5, 0.2], [0.0, 0.3]]).unwrap();
        let e = eigenspace(&m, 0.5, 1e-9);
        assert_eq!(e.len(), 1);
        assert!(e[0][1].abs() < 1e-15);
        assert_eq!(eigenspace(&Matrix::identity(2), 1.0, 1e-9).len(), 2);
        let m3 = Matrix::diag(&[2.0, 2.0, 1.0]);
        assert_eq!(eigenspace(&m3, 2.0, 1e-9).len(), 2);
        assert_eq!(eigenspace(&m3, 1.0, 1e-9).len(), 1);
    }

    proptest::proptest! {
        #[test]
        fn radius_2x2_matches_quadratic(a in -2.0..2.0f64, b in -2.0..2.0f64, c in -2.0..2.0f64, d in -2.0..2.0f64) {
            let m = Matrix::from_rows(&[[a, b], [c, d]]).unwrap();
            let r = spectral_radius(&m);
            proptest::prop_assert!((r - brute_radius_2x2(&m)).abs() < 1e-9);
            proptest::prop_assert!(r <= spectral_norm(&m) + 1e-12);
        }

        #[test]
        fn cubic_roots_reproduce_trace_and_det(xs in proptest::collection::vec(-2.0..2.0f64, 9)) {
            let m = Matrix::from_rows(&[&xs[0..3], &xs[3..6], &xs[6..9]]).unwrap();
            let ev = eigenvalues(&m);
            let tr: f64 = ev.iter().map(|e| e.re).sum();
            proptest::prop_assert!((tr - m.trace()).abs() < 1e-6);
            // product of three roots, complex arithmetic
            let (mut pr, mut pi) = (1.0, 0.0);
            for e in &ev {
                let (nr, ni) = (pr * e.re - pi * e.im, pr * e.im + pi * e.re);
                pr = nr;
                pi = ni;
            }
            proptest::prop_assert!((pr - m.det()).abs() < 1e-6);
        }

        #[test]
        fn rotation_scalings_are_exact(r in 0.01..3.0f64, phi in 0.0..(2.0 * PI)) {
            let m = Matrix::rotation_scaling(r, phi);
            proptest::prop_assert!((spectral_radius(&m) - r).abs() < 1e-12 * (1.0 + r));
            let sv = singular_values(&m);
            proptest::prop_assert!((sv[0] - r).abs() < 1e-12 && (sv[1] - r).abs() < 1e-12);
        }
    }
}
