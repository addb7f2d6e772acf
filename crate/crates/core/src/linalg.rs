use num_complex::Complex64;

use crate::error::{Error, Result};

/// Pivots smaller than this fraction of the largest matrix entry are treated
/// as zero.
const PIVOT_TOLERANCE: f64 = 1e-14;

/// Solves `m · x = rhs` by Gaussian elimination with partial pivoting.
pub(crate) fn solve<const N: usize>(
    mut m: [[Complex64; N]; N],
    mut rhs: [Complex64; N],
) -> Result<[Complex64; N]> {
    let scale = m
        .iter()
        .flat_map(|row| row.iter())
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::SingularSystem { pivot: scale });
    }

    for col in 0..N {
        let pivot_row = (col..N)
            .max_by(|&a, &b| m[a][col].norm().total_cmp(&m[b][col].norm()))
            .expect("nonempty range");
        let pivot = m[pivot_row][col];
        if pivot.norm() <= PIVOT_TOLERANCE * scale {
            return Err(Error::SingularSystem { pivot: pivot.norm() });
        }
        m.swap(col, pivot_row);
        rhs.swap(col, pivot_row);

        for row in col + 1..N {
            let factor = m[row][col] / pivot;
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            for k in col..N {
                let sub = factor * m[col][k];
                m[row][k] -= sub;
            }
            let sub = factor * rhs[col];
            rhs[row] -= sub;
        }
    }

    let mut x = [Complex64::new(0.0, 0.0); N];
    for row in (0..N).rev() {
        let mut acc = rhs[row];
        for k in row + 1..N {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    Ok(x)
}
