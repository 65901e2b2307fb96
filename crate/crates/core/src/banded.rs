//! Square band matrices with complex entries, with the Hermitian spectral
//! routines needed for operators on the symmetric subspace.
//!
//! The smallest eigenvalue is located by bisection on the Sylvester inertia of
//! a banded `L D L^H` factorization of `H - sigma I`, and its eigenvector by
//! inverse iteration with a banded LU factorization using partial pivoting.
//! Both cost `O(n b^2)` per factorization, so an `(N+1) x (N+1)` pentadiagonal
//! operator at `N = 1000` is cheap to handle.

use nalgebra::DMatrix;
use num_complex::Complex64;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    n: usize,
    bw: usize,
    // row i holds columns i-bw ..= i+bw
    data: Vec<Complex64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, bw: usize) -> Self {
        Self {
            n,
            bw,
            data: vec![ZERO; n * (2 * bw + 1)],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, 0);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), 0);
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, Complex64::new(d, 0.0));
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> Option<usize> {
        if i >= self.n || j >= self.n || i.abs_diff(j) > self.bw {
            return None;
        }
        Some(i * (2 * self.bw + 1) + (j + self.bw - i))
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.idx(i, j).map_or(ZERO, |k| self.data[k])
    }

    /// Panics when `(i, j)` lies outside the band.
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        let k = self
            .idx(i, j)
            .unwrap_or_else(|| panic!("({i}, {j}) outside band of width {}", self.bw));
        self.data[k] = v;
    }

    fn widened(&self, bw: usize) -> Self {
        if bw <= self.bw {
            return self.clone();
        }
        let mut out = Self::zeros(self.n, bw);
        for i in 0..self.n {
            for j in self.row_range(i) {
                out.set(i, j, self.get(i, j));
            }
        }
        out
    }

    #[inline]
    fn row_range(&self, i: usize) -> std::ops::Range<usize> {
        i.saturating_sub(self.bw)..(i + self.bw + 1).min(self.n)
    }

    pub fn add_scaled(&self, other: &BandMatrix, c: Complex64) -> BandMatrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let bw = self.bw.max(other.bw);
        let mut out = self.widened(bw);
        for i in 0..other.n {
            for j in other.row_range(i) {
                let k = out.idx(i, j).expect("inside widened band");
                out.data[k] += c * other.get(i, j);
            }
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> BandMatrix {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|x| *x *= c);
        out
    }

    pub fn mul(&self, other: &BandMatrix) -> BandMatrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let bw = (self.bw + other.bw).min(self.n.saturating_sub(1));
        let mut out = BandMatrix::zeros(self.n, bw);
        for i in 0..self.n {
            for k in self.row_range(i) {
                let a = self.get(i, k);
                if a == ZERO {
                    continue;
                }
                for j in other.row_range(k) {
                    let kk = out.idx(i, j).expect("product stays in band");
                    out.data[kk] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> BandMatrix {
        let mut out = BandMatrix::zeros(self.n, self.bw);
        for i in 0..self.n {
            for j in self.row_range(i) {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    /// `(H + H^H) / 2`.
    pub fn hermitian_part(&self) -> BandMatrix {
        self.add_scaled(&self.adjoint(), Complex64::new(1.0, 0.0))
            .scale(Complex64::new(0.5, 0.0))
    }

    pub fn hermiticity_residual(&self) -> f64 {
        let mut r: f64 = 0.0;
        for i in 0..self.n {
            for j in self.row_range(i) {
                r = r.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        r
    }

    /// Largest `|i - j|` with a nonzero entry.
    pub fn effective_bandwidth(&self) -> usize {
        let mut b = 0;
        for i in 0..self.n {
            for j in self.row_range(i) {
                if self.get(i, j) != ZERO {
                    b = b.max(i.abs_diff(j));
                }
            }
        }
        b
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n, "dimension mismatch");
        (0..self.n)
            .map(|i| self.row_range(i).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    /// Real part of `x^H M x`.
    pub fn quadratic_form(&self, x: &[Complex64]) -> f64 {
        let y = self.matvec(x);
        x.iter().zip(&y).map(|(a, b)| (a.conj() * b).re).sum()
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// Gershgorin interval enclosing the spectrum of a Hermitian band matrix.
    pub fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.n {
            let radius: f64 = self
                .row_range(i)
                .filter(|&j| j != i)
                .map(|j| self.get(i, j).norm())
                .sum();
            let d = self.get(i, i).re;
            lo = lo.min(d - radius);
            hi = hi.max(d + radius);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `sigma` (Hermitian input assumed).
    pub fn count_below(&self, sigma: f64) -> usize {
        let n = self.n;
        let b = self.bw;
        let pivmin = f64::MIN_POSITIVE.max(f64::EPSILON * f64::EPSILON * self.max_abs().max(1.0));
        // l[i][t] holds L(i, i-b+t) for t < b
        let mut l = vec![ZERO; n * b.max(1)];
        let mut d = vec![0.0f64; n];
        let mut negatives = 0;
        for j in 0..n {
            let k0 = j.saturating_sub(b);
            let mut dj = self.get(j, j).re - sigma;
            for k in k0..j {
                let ljk = l[j * b + (k + b - j)];
                dj -= ljk.norm_sqr() * d[k];
            }
            if dj.abs() < pivmin {
                dj = -pivmin;
            }
            d[j] = dj;
            if dj < 0.0 {
                negatives += 1;
            }
            for i in (j + 1)..(j + b + 1).min(n) {
                let mut v = self.get(i, j);
                for k in i.saturating_sub(b)..j {
                    v -= l[i * b + (k + b - i)] * l[j * b + (k + b - j)].conj() * d[k];
                }
                l[i * b + (j + b - i)] = v / dj;
            }
        }
        negatives
    }

    /// The `k`-th smallest eigenvalue (0-based) of a Hermitian band matrix.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        assert!(k < self.n, "eigenvalue index out of range");
        let (mut lo, mut hi) = self.gershgorin();
        let pad = 1e-12 * (lo.abs().max(hi.abs()).max(1.0));
        lo -= pad;
        hi += pad;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    pub fn smallest_eigenvalue(&self) -> f64 {
        self.eigenvalue(0)
    }

    /// Smallest eigenvalue with a normalized eigenvector.
    pub fn smallest_eigenpair(&self) -> (f64, Vec<Complex64>) {
        let lambda = self.smallest_eigenvalue();
        let scale = self.max_abs().max(1.0);
        let shift = lambda - 1e-10 * scale;
        let lu = BandLu::factor(self, shift);
        let mut x: Vec<Complex64> = (0..self.n)
            .map(|i| Complex64::new(1.0 + 0.1 * ((i * 7919) % 13) as f64, 0.0))
            .collect();
        normalize(&mut x);
        for _ in 0..4 {
            x = lu.solve(&x);
            normalize(&mut x);
        }
        (lambda, x)
    }
}

fn normalize(x: &mut [Complex64]) {
    let norm = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
}

/// Banded LU of `A - shift I` with partial pivoting.
struct BandLu {
    n: usize,
    b: usize,
    // row i holds columns i-b ..= i+2b after pivoting fill-in
    rows: Vec<Complex64>,
    piv: Vec<usize>,
    mult: Vec<Complex64>,
}

impl BandLu {
    fn width(b: usize) -> usize {
        3 * b + 1
    }

    fn at(&self, i: usize, j: usize) -> Complex64 {
        if j + self.b < i || j > i + 2 * self.b {
            return ZERO;
        }
        self.rows[i * Self::width(self.b) + (j + self.b - i)]
    }

    fn at_mut(&mut self, i: usize, j: usize) -> &mut Complex64 {
        debug_assert!(j + self.b >= i && j <= i + 2 * self.b);
        let w = Self::width(self.b);
        &mut self.rows[i * w + (j + self.b - i)]
    }

    fn factor(a: &BandMatrix, shift: f64) -> Self {
        let n = a.n;
        let b = a.bw;
        let mut lu = BandLu {
            n,
            b,
            rows: vec![ZERO; n * Self::width(b)],
            piv: vec![0; n],
            mult: vec![ZERO; n * b.max(1)],
        };
        for i in 0..n {
            for j in a.row_range(i) {
                let mut v = a.get(i, j);
                if i == j {
                    v -= shift;
                }
                *lu.at_mut(i, j) = v;
            }
        }
        let tiny = f64::EPSILON * a.max_abs().max(1.0);
        for k in 0..n {
            let last = (k + b).min(n - 1);
            let p = (k..=last)
                .max_by(|&x, &y| lu.at(x, k).norm().total_cmp(&lu.at(y, k).norm()))
                .unwrap_or(k);
            lu.piv[k] = p;
            let jmax = (k + 2 * b).min(n - 1);
            if p != k {
                for j in k..=jmax {
                    let a_kj = lu.at(k, j);
                    let a_pj = lu.at(p, j);
                    if j <= p + 2 * b {
                        *lu.at_mut(p, j) = a_kj;
                    }
                    *lu.at_mut(k, j) = a_pj;
                }
            }
            if lu.at(k, k).norm() < tiny {
                *lu.at_mut(k, k) = Complex64::new(tiny, 0.0);
            }
            let pivot = lu.at(k, k);
            for r in (k + 1)..=last {
                let m = lu.at(r, k) / pivot;
                lu.mult[k * b.max(1) + (r - k - 1)] = m;
                *lu.at_mut(r, k) = ZERO;
                if m == ZERO {
                    continue;
                }
                for j in (k + 1)..=jmax {
                    let u = lu.at(k, j);
                    *lu.at_mut(r, j) -= m * u;
                }
            }
        }
        lu
    }

    fn solve(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let b = self.b;
        let mut x = rhs.to_vec();
        for k in 0..n {
            x.swap(k, self.piv[k]);
            let last = (k + b).min(n - 1);
            for r in (k + 1)..=last {
                let m = self.mult[k * b.max(1) + (r - k - 1)];
                let xk = x[k];
                x[r] -= m * xk;
            }
        }
        for k in (0..n).rev() {
            let jmax = (k + 2 * b).min(n - 1);
            let mut v = x[k];
            for j in (k + 1)..=jmax {
                v -= self.at(k, j) * x[j];
            }
            x[k] = v / self.at(k, k);
        }
        x
    }
}

/// Real symmetric band matrix, stored as its lower band.
///
/// A leaner twin of [`BandMatrix`] for the hot loops of parameter searches,
/// where every operator is real.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSymBand {
    n: usize,
    bw: usize,
    // row i holds columns i-bw ..= i, diagonal last
    lower: Vec<f64>,
}

impl RealSymBand {
    /// The real part of a Hermitian band matrix, or `None` if any entry has
    /// an imaginary part above `tol`.
    pub fn from_hermitian(m: &BandMatrix, tol: f64) -> Option<Self> {
        let (n, bw) = (m.n, m.bw);
        let mut lower = vec![0.0; n * (bw + 1)];
        for i in 0..n {
            for j in i.saturating_sub(bw)..=i {
                let v = m.get(i, j);
                if v.im.abs() > tol {
                    return None;
                }
                lower[i * (bw + 1) + (j + bw - i)] = v.re;
            }
        }
        Some(Self { n, bw, lower })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `c_0 M_0 + c_1 M_1 + ...` for matrices of identical shape.
    pub fn combination(terms: &[(&RealSymBand, f64)]) -> Self {
        let (first, _) = terms[0];
        let mut lower = vec![0.0; first.lower.len()];
        for (m, c) in terms {
            assert!(m.n == first.n && m.bw == first.bw, "shape mismatch");
            for (o, v) in lower.iter_mut().zip(&m.lower) {
                *o += c * v;
            }
        }
        Self {
            n: first.n,
            bw: first.bw,
            lower,
        }
    }

    pub fn gershgorin(&self) -> (f64, f64) {
        let w = self.bw + 1;
        let mut radius = vec![0.0f64; self.n];
        for i in 0..self.n {
            for t in 0..self.bw {
                let j = (i + t).wrapping_sub(self.bw);
                if j < self.n {
                    let a = self.lower[i * w + t].abs();
                    radius[i] += a;
                    radius[j] += a;
                }
            }
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.n {
            let d = self.lower[i * w + self.bw];
            lo = lo.min(d - radius[i]);
            hi = hi.max(d + radius[i]);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `sigma`.
    pub fn count_below(&self, sigma: f64) -> usize {
        if self.bw == 2 {
            return self.count_below_penta(sigma);
        }
        let (n, b) = (self.n, self.bw);
        let w = b + 1;
        let pivmin = self.pivmin();
        // l has the same layout as `lower`; d is the pivot sequence
        let mut l = vec![0.0f64; n * w];
        let mut d = vec![0.0f64; n];
        let mut negatives = 0;
        for i in 0..n {
            let k0 = i.saturating_sub(b);
            for j in k0..i {
                let mut v = self.lower[i * w + (j + b - i)];
                for k in i.saturating_sub(b).max(j.saturating_sub(b))..j {
                    v -= l[i * w + (k + b - i)] * l[j * w + (k + b - j)] * d[k];
                }
                l[i * w + (j + b - i)] = v / d[j];
            }
            let mut di = self.lower[i * w + b] - sigma;
            for k in k0..i {
                let lik = l[i * w + (k + b - i)];
                di -= lik * lik * d[k];
            }
            if di.abs() < pivmin {
                di = -pivmin;
            }
            d[i] = di;
            if di < 0.0 {
                negatives += 1;
            }
        }
        negatives
    }

    fn pivmin(&self) -> f64 {
        let scale = self.lower.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        f64::MIN_POSITIVE.max(f64::EPSILON * f64::EPSILON * scale)
    }

    /// Pentadiagonal `L D L^T` inertia count carried in registers.
    fn count_below_penta(&self, sigma: f64) -> usize {
        let pivmin = self.pivmin();
        // d2 = d(i-2), d1 = d(i-1), l10 = L(i-1, i-2)
        let (mut d2, mut d1, mut l10) = (1.0, 1.0, 0.0);
        let mut negatives = 0;
        for (i, row) in self.lower.chunks_exact(3).enumerate() {
            let (a2, a1) = match i {
                0 => (0.0, 0.0),
                1 => (0.0, row[1]),
                _ => (row[0], row[1]),
            };
            let li2 = a2 / d2;
            let li1 = (a1 - li2 * l10 * d2) / d1;
            let mut di = row[2] - sigma - li1 * li1 * d1 - li2 * li2 * d2;
            if di.abs() < pivmin {
                di = -pivmin;
            }
            if di < 0.0 {
                negatives += 1;
            }
            d2 = d1;
            d1 = di;
            l10 = li1;
        }
        negatives
    }

    pub fn smallest_eigenvalue(&self) -> f64 {
        let (mut lo, gersh_hi) = self.gershgorin();
        // the smallest diagonal entry is a Rayleigh quotient, hence an upper bound
        let w = self.bw + 1;
        let min_diag = (0..self.n).map(|i| self.lower[i * w + self.bw]).fold(f64::INFINITY, f64::min);
        let mut hi = gersh_hi.min(min_diag);
        let pad = 1e-12 * lo.abs().max(hi.abs()).max(1.0);
        lo -= pad;
        hi += pad;
        while hi - lo > 4.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(1e-300) {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > 0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }
}
