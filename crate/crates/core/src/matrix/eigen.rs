use num_complex::Complex64;

use super::ComplexMatrix;
use crate::config::Tolerances;
use crate::error::{Error, Result};

/// Real eigenvalues sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum(Vec<f64>);

impl Spectrum {
    /// Sorts the given values ascending.
    pub fn from_unsorted(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        Self(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.0.first().copied().unwrap_or(f64::NAN)
    }

    pub fn max(&self) -> f64 {
        self.0.last().copied().unwrap_or(f64::NAN)
    }
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// The `n x n` complex Hermitian matrix `A + iB` is embedded as the real
/// symmetric `[[A, -B], [B, A]]`, whose spectrum is that of the original with
/// every eigenvalue doubled; cyclic Jacobi rotations diagonalise it.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Spectrum> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let scale = m.as_slice().iter().map(|z| z.norm()).fold(1.0, f64::max);
    let deviation = m.hermitian_deviation();
    if deviation > Tolerances::DEFAULT.precondition * scale {
        return Err(Error::NotHermitian { deviation });
    }
    if n == 0 {
        return Ok(Spectrum(Vec::new()));
    }

    let size = 2 * n;
    let mut a = vec![0.0f64; size * size];
    for r in 0..n {
        for c in 0..n {
            // symmetrise so the embedding is exactly symmetric
            let z = (m[(r, c)] + m[(c, r)].conj()) * 0.5;
            a[r * size + c] = z.re;
            a[(r + n) * size + (c + n)] = z.re;
            a[r * size + (c + n)] = -z.im;
            a[(r + n) * size + c] = z.im;
        }
    }
    let diag = jacobi_symmetric(&mut a, size);

    let doubled = Spectrum::from_unsorted(diag).into_vec();
    let values = doubled
        .chunks(2)
        .map(|pair| 0.5 * (pair[0] + pair[1]))
        .collect();
    Ok(Spectrum(values))
}

/// Cyclic Jacobi on a dense real symmetric matrix; returns the diagonal.
fn jacobi_symmetric(a: &mut [f64], n: usize) -> Vec<f64> {
    let total: f64 = a.iter().map(|x| x * x).sum();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off <= 1e-34 * total || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    let new_kp = c * akp - s * akq;
                    let new_kq = s * akp + c * akq;
                    a[k * n + p] = new_kp;
                    a[p * n + k] = new_kp;
                    a[k * n + q] = new_kq;
                    a[q * n + k] = new_kq;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

/// All eigenvalues of a square matrix, with multiplicity, in no particular
/// order.
///
/// Balancing, Householder reduction to upper Hessenberg form, then complex
/// single-shift QR with Wilkinson shifts and deflation. The iteration budget is
/// `100 * n` QR steps.
pub fn general_eigenvalues(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut h = Dense {
        n,
        a: m.as_slice().to_vec(),
    };
    if n == 0 {
        return Ok(Vec::new());
    }
    h.balance();
    h.reduce_to_hessenberg();
    h.hessenberg_qr()
}

struct Dense {
    n: usize,
    a: Vec<Complex64>,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn abs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

impl Dense {
    #[inline]
    fn at(&self, r: usize, c: usize) -> Complex64 {
        self.a[r * self.n + c]
    }

    #[inline]
    fn set(&mut self, r: usize, c: usize, z: Complex64) {
        self.a[r * self.n + c] = z;
    }

    /// Diagonal similarity scaling by powers of two so rows and columns have
    /// comparable norms.
    fn balance(&mut self) {
        let n = self.n;
        let radix = 2.0f64;
        let mut done = false;
        while !done {
            done = true;
            for i in 0..n {
                let mut col = 0.0;
                let mut row = 0.0;
                for j in 0..n {
                    if j != i {
                        col += abs1(self.at(j, i));
                        row += abs1(self.at(i, j));
                    }
                }
                if col == 0.0 || row == 0.0 {
                    continue;
                }
                let sum = col + row;
                let mut f = 1.0;
                let mut c = col;
                while c < row / radix {
                    f *= radix;
                    c *= radix * radix;
                }
                while c > row * radix {
                    f /= radix;
                    c /= radix * radix;
                }
                // scaled column norm is col * f, scaled row norm is row / f
                if (c + row) / f < 0.95 * sum {
                    done = false;
                    for j in 0..n {
                        let z = self.at(i, j) / f;
                        self.set(i, j, z);
                        let z = self.at(j, i) * f;
                        self.set(j, i, z);
                    }
                }
            }
        }
    }

    fn reduce_to_hessenberg(&mut self) {
        let n = self.n;
        if n < 3 {
            return;
        }
        for k in 0..n - 2 {
            let x: Vec<Complex64> = (k + 1..n).map(|r| self.at(r, k)).collect();
            let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                continue;
            }
            let phase = if x[0].norm() == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                x[0] / x[0].norm()
            };
            let alpha = -phase * norm;
            let mut v = x;
            v[0] -= alpha;
            let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if vnorm == 0.0 {
                continue;
            }
            for z in v.iter_mut() {
                *z /= vnorm;
            }
            // left: A <- (I - 2 v v^H) A on rows k+1..n
            for c in 0..n {
                let mut dot = ZERO;
                for (i, vi) in v.iter().enumerate() {
                    dot += vi.conj() * self.at(k + 1 + i, c);
                }
                for (i, vi) in v.iter().enumerate() {
                    let z = self.at(k + 1 + i, c) - vi * dot * 2.0;
                    self.set(k + 1 + i, c, z);
                }
            }
            // right: A <- A (I - 2 v v^H) on columns k+1..n
            for r in 0..n {
                let mut dot = ZERO;
                for (i, vi) in v.iter().enumerate() {
                    dot += self.at(r, k + 1 + i) * vi;
                }
                for (i, vi) in v.iter().enumerate() {
                    let z = self.at(r, k + 1 + i) - dot * vi.conj() * 2.0;
                    self.set(r, k + 1 + i, z);
                }
            }
            for r in k + 2..n {
                self.set(r, k, ZERO);
            }
        }
    }

    fn hessenberg_qr(&mut self) -> Result<Vec<Complex64>> {
        let n = self.n;
        let max_iterations = 100 * n;
        let mut eigenvalues = Vec::with_capacity(n);
        let mut total = 0usize;
        let mut since_deflation = 0usize;
        let mut hi = n as isize - 1;

        while hi >= 0 {
            let hi_u = hi as usize;
            // find the start of the active unreduced block
            let mut lo = hi_u;
            while lo > 0 {
                let sub = abs1(self.at(lo, lo - 1));
                let diag = abs1(self.at(lo - 1, lo - 1)) + abs1(self.at(lo, lo));
                let reference = if diag == 0.0 { 1.0 } else { diag };
                if sub <= f64::EPSILON * reference {
                    self.set(lo, lo - 1, ZERO);
                    break;
                }
                lo -= 1;
            }

            if lo == hi_u {
                eigenvalues.push(self.at(hi_u, hi_u));
                hi -= 1;
                since_deflation = 0;
                continue;
            }
            if lo + 1 == hi_u {
                let (l1, l2) = eig2(
                    self.at(lo, lo),
                    self.at(lo, hi_u),
                    self.at(hi_u, lo),
                    self.at(hi_u, hi_u),
                );
                eigenvalues.push(l1);
                eigenvalues.push(l2);
                hi -= 2;
                since_deflation = 0;
                continue;
            }

            if total >= max_iterations {
                return Err(Error::NoConvergence { iterations: total });
            }
            total += 1;
            since_deflation += 1;

            let shift = if since_deflation.is_multiple_of(11) {
                // exceptional shift to break cycles
                self.at(hi_u, hi_u) + abs1(self.at(hi_u, hi_u - 1)) * 0.75
            } else {
                let (l1, l2) = eig2(
                    self.at(hi_u - 1, hi_u - 1),
                    self.at(hi_u - 1, hi_u),
                    self.at(hi_u, hi_u - 1),
                    self.at(hi_u, hi_u),
                );
                let d = self.at(hi_u, hi_u);
                if (l1 - d).norm() <= (l2 - d).norm() {
                    l1
                } else {
                    l2
                }
            };
            self.qr_step(lo, hi_u, shift);
        }
        Ok(eigenvalues)
    }

    /// One explicit shifted QR step on the window `lo..=hi`.
    fn qr_step(&mut self, lo: usize, hi: usize, shift: Complex64) {
        for i in lo..=hi {
            let z = self.at(i, i) - shift;
            self.set(i, i, z);
        }
        let mut rotations = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (c, s) = givens(self.at(k, k), self.at(k + 1, k));
            for j in k..=hi {
                let x = self.at(k, j);
                let y = self.at(k + 1, j);
                self.set(k, j, x * c + s * y);
                self.set(k + 1, j, -s.conj() * x + y * c);
            }
            rotations.push((c, s));
        }
        for (offset, &(c, s)) in rotations.iter().enumerate() {
            let k = lo + offset;
            let last = (k + 2).min(hi);
            for i in lo..=last {
                let x = self.at(i, k);
                let y = self.at(i, k + 1);
                self.set(i, k, x * c + y * s.conj());
                self.set(i, k + 1, -x * s + y * c);
            }
        }
        for i in lo..=hi {
            let z = self.at(i, i) + shift;
            self.set(i, i, z);
        }
    }
}

/// Rotation `[[c, s], [-conj(s), c]]` with real `c` mapping `(a, b)` to
/// `(r, 0)`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let na = a.norm();
    let nb = b.norm();
    if nb == 0.0 {
        return (1.0, ZERO);
    }
    if na == 0.0 {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    let r = na.hypot(nb);
    let c = na / r;
    let s = (a / na) * b.conj() / r;
    (c, s)
}

/// Eigenvalues of `[[a, b], [c, d]]`.
fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let half_tr = (a + d) * 0.5;
    let half_diff = (a - d) * 0.5;
    let disc = (half_diff * half_diff + b * c).sqrt();
    (half_tr + disc, half_tr - disc)
}
