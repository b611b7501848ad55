//! Eigen-decomposition of real symmetric 3×3 matrices (cyclic Jacobi) and the
//! singular value decomposition of a general real 3×3 matrix built on it.

pub type Mat3 = [[f64; 3]; 3];

pub fn transpose(m: &Mat3) -> Mat3 {
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = m[j][i];
        }
    }
    t
}

pub fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn mat_vec(m: &Mat3, v: &[f64; 3]) -> [f64; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

fn norm(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Eigen pairs of a symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricEigen {
    /// Descending.
    pub values: [f64; 3],
    /// `vectors[i]` is the unit eigenvector for `values[i]`, with its first
    /// component above 1e-12 in magnitude made positive.
    pub vectors: [[f64; 3]; 3],
}

/// Cyclic Jacobi rotations until the off-diagonal mass is at round-off level.
pub fn symmetric_eigen(m: &Mat3) -> SymmetricEigen {
    let mut a = *m;
    // symmetrize; callers pass ZᵀZ which is symmetric up to rounding
    for i in 0..3 {
        for j in i + 1..3 {
            let avg = 0.5 * (a[i][j] + a[j][i]);
            a[i][j] = avg;
            a[j][i] = avg;
        }
    }
    let mut v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let scale = a.iter().flatten().fold(0.0f64, |acc, x| acc.max(x.abs()));
    if scale > 0.0 {
        for _sweep in 0..64 {
            let off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
            if off <= (f64::EPSILON * scale).powi(2) * 1e-4 {
                break;
            }
            for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // A ← Jᵀ A J with J the (p, q) rotation
                for k in 0..3 {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..3 {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    // columns of v are eigenvectors
    let mut pairs: Vec<(f64, [f64; 3])> = (0..3)
        .map(|i| (a[i][i], [v[0][i], v[1][i], v[2][i]]))
        .collect();
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    let mut values = [0.0; 3];
    let mut vectors = [[0.0; 3]; 3];
    for (i, (val, mut vec)) in pairs.into_iter().enumerate() {
        canonical_sign(&mut vec);
        values[i] = val;
        vectors[i] = vec;
    }
    SymmetricEigen { values, vectors }
}

fn canonical_sign(v: &mut [f64; 3]) {
    if let Some(first) = v.iter().copied().find(|x| x.abs() > 1e-12) {
        if first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Singular values with matching right singular vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Svd3 {
    /// Descending, nonnegative.
    pub values: [f64; 3],
    /// `right[i]` is the right singular vector for `values[i]`.
    pub right: [[f64; 3]; 3],
}

/// Right singular vectors are the eigenvectors of ZᵀZ; each singular value is
/// then measured as ‖Z v‖, which keeps small singular values accurate.
pub fn svd(z: &Mat3) -> Svd3 {
    let ztz = mat_mul(&transpose(z), z);
    let eig = symmetric_eigen(&ztz);
    let mut pairs: Vec<(f64, [f64; 3])> = eig
        .vectors
        .iter()
        .map(|v| (norm(&mat_vec(z, v)), *v))
        .collect();
    // stable: keeps eigen order on ties
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    let mut values = [0.0; 3];
    let mut right = [[0.0; 3]; 3];
    for (i, (s, v)) in pairs.into_iter().enumerate() {
        values[i] = s;
        right[i] = v;
    }
    Svd3 { values, right }
}
