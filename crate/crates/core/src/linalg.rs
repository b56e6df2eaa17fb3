//! Small dense complex matrices for two-qubit density operators, and a cyclic
//! Jacobi eigensolver for Hermitian matrices.
//!
//! A Hermitian `H = A + iB` is diagonalized through its real-symmetric embedding
//! `[[A, -B], [B, A]]`, whose spectrum is that of `H` with every eigenvalue
//! doubled.

use num_complex::Complex64;

pub type Mat2 = [[Complex64; 2]; 2];
pub type Mat4 = [[Complex64; 4]; 4];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Off-diagonal Frobenius norm at which the Jacobi sweeps stop.
pub const JACOBI_OFF_DIAGONAL_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 64;

pub fn identity2() -> Mat2 {
    [[ONE, ZERO], [ZERO, ONE]]
}

/// Pauli matrices σx, σy, σz.
pub fn pauli() -> [Mat2; 3] {
    [[[ZERO, ONE], [ONE, ZERO]], [[ZERO, -I], [I, ZERO]], [[ONE, ZERO], [ZERO, -ONE]]]
}

pub fn zeros4() -> Mat4 {
    [[ZERO; 4]; 4]
}

pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut out = zeros4();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn add_scaled(acc: &mut Mat4, m: &Mat4, scale: f64) {
    for (row, mrow) in acc.iter_mut().zip(m) {
        for (a, b) in row.iter_mut().zip(mrow) {
            *a += b * scale;
        }
    }
}

pub fn matmul4(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = zeros4();
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn trace4(m: &Mat4) -> Complex64 {
    (0..4).map(|i| m[i][i]).sum()
}

pub fn trace2(m: &Mat2) -> Complex64 {
    m[0][0] + m[1][1]
}

pub fn matmul2(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Trace over the first (Alice's) qubit.
pub fn partial_trace_first(m: &Mat4) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for k in 0..2 {
        for l in 0..2 {
            out[k][l] = m[k][l] + m[2 + k][2 + l];
        }
    }
    out
}

/// Trace over the second (Bob's) qubit.
pub fn partial_trace_second(m: &Mat4) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = m[2 * i][2 * j] + m[2 * i + 1][2 * j + 1];
        }
    }
    out
}

/// Transpose on the second qubit's indices: `ρ^{T_B}_{ik,jl} = ρ_{il,jk}`.
pub fn partial_transpose_second(m: &Mat4) -> Mat4 {
    let mut out = zeros4();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * i + k][2 * j + l] = m[2 * i + l][2 * j + k];
                }
            }
        }
    }
    out
}

/// Largest absolute deviation from Hermiticity.
pub fn hermitian_defect(m: &Mat4) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            worst = worst.max((m[i][j] - m[j][i].conj()).norm());
        }
    }
    worst
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations, ascending.
/// Only the upper triangle is read.
pub fn symmetric_eigenvalues<const N: usize>(mut a: [[f64; N]; N]) -> [f64; N] {
    for i in 0..N {
        for j in 0..i {
            a[i][j] = a[j][i];
        }
    }
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..N)
            .flat_map(|i| (0..N).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum::<f64>()
            .sqrt();
        if off < JACOBI_OFF_DIAGONAL_TOL {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..N {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig = [0.0; N];
    for (i, e) in eig.iter_mut().enumerate() {
        *e = a[i][i];
    }
    eig.sort_by(|x, y| x.total_cmp(y));
    eig
}

/// Eigenvalues of a 4×4 Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &Mat4) -> [f64; 4] {
    let mut embed = [[0.0f64; 8]; 8];
    for i in 0..4 {
        for j in 0..4 {
            let z = m[i][j];
            embed[i][j] = z.re;
            embed[i + 4][j + 4] = z.re;
            embed[i][j + 4] = -z.im;
            embed[i + 4][j] = z.im;
        }
    }
    let doubled = symmetric_eigenvalues(embed);
    let mut out = [0.0; 4];
    for (k, e) in out.iter_mut().enumerate() {
        *e = 0.5 * (doubled[2 * k] + doubled[2 * k + 1]);
    }
    out
}
