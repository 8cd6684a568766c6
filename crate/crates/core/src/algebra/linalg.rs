//! Tiny dense complex linear algebra for the fixed-size kernels.

use num_complex::Complex64;

pub type C = Complex64;
pub type Mat2 = [[C; 2]; 2];

pub const ZERO: C = C::new(0.0, 0.0);
pub const ONE: C = C::new(1.0, 0.0);

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn mat2_det(a: &Mat2) -> C {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

pub fn mat2_adj(a: &Mat2) -> Mat2 {
    [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]]
}

pub fn mat2_scale(a: &Mat2, s: C) -> Mat2 {
    [[a[0][0] * s, a[0][1] * s], [a[1][0] * s, a[1][1] * s]]
}

pub fn mat2_vec(a: &Mat2, v: &[C; 2]) -> [C; 2] {
    [
        a[0][0] * v[0] + a[0][1] * v[1],
        a[1][0] * v[0] + a[1][1] * v[1],
    ]
}

/// Inverse, or `None` when the determinant vanishes relative to the entries.
pub fn mat2_inv(a: &Mat2) -> Option<Mat2> {
    let det = mat2_det(a);
    let scale = a.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    if det.norm() <= 1e-14 * scale * scale || !det.is_finite() {
        return None;
    }
    Some(mat2_scale(&mat2_adj(a), det.inv()))
}

/// Symplectic unit `[[0, 1], [-1, 0]]`.
pub const J: Mat2 = [[ZERO, ONE], [C::new(-1.0, 0.0), ZERO]];

/// Solve `m x = b` for a small dense complex system by Gaussian elimination
/// with partial pivoting.
pub fn solve<const N: usize>(m: &[[C; N]; N], b: &[C; N]) -> Option<[C; N]> {
    let mut a = *m;
    let mut x = *b;
    for col in 0..N {
        let piv = (col..N).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))?;
        if a[piv][col].norm() == 0.0 {
            return None;
        }
        a.swap(col, piv);
        x.swap(col, piv);
        for row in col + 1..N {
            let f = a[row][col] / a[col][col];
            for k in col..N {
                let t = a[col][k];
                a[row][k] -= f * t;
            }
            let t = x[col];
            x[row] -= f * t;
        }
    }
    for col in (0..N).rev() {
        let mut s = x[col];
        for k in col + 1..N {
            s -= a[col][k] * x[k];
        }
        x[col] = s / a[col][col];
    }
    Some(x)
}
