use num_complex::Complex64;

use super::ComplexMatrix;

/// Singular values, descending, `min(rows, cols)` of them.
///
/// One-sided (Hestenes) Jacobi: columns are rotated pairwise until mutually
/// orthogonal, after which the column norms are the singular values. Unlike
/// `sqrt(eig(M^dagger M))` this keeps tiny singular values accurate to
/// `eps * ||M||` rather than `sqrt(eps) * ||M||`.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    // work on the orientation with at least as many rows as columns
    let tall = if m.rows() >= m.cols() {
        m.clone()
    } else {
        m.adjoint()
    };
    let rows = tall.rows();
    let cols = tall.cols();
    let mut columns: Vec<Vec<Complex64>> = (0..cols)
        .map(|c| (0..rows).map(|r| tall[(r, c)]).collect())
        .collect();

    for _sweep in 0..80 {
        let mut rotated = false;
        for i in 0..cols {
            for j in (i + 1)..cols {
                let (left, right) = columns.split_at_mut(j);
                let ci = &mut left[i];
                let cj = &mut right[0];
                let alpha: f64 = ci.iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cj.iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = ci.iter().zip(cj.iter()).map(|(a, b)| a.conj() * b).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for (a, b) in ci.iter_mut().zip(cj.iter_mut()) {
                    let x = *a;
                    let y = *b * phase.conj();
                    *a = x * c - y * s;
                    *b = x * s + y * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut values: Vec<f64> = columns
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

/// Sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    singular_values(m).iter().sum()
}
